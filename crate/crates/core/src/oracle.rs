//! Ground-truth reachability by worklist saturation over the Dyck and
//! semi-Dyck grammars. Cubic and slow, used to anchor every solver.

use crate::graph::{BoolMatrix, Label, Ldg, Mode};

/// Grammar symbol: a terminal edge label or a nonterminal index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    Terminal(Label),
    NonTerminal(usize),
}

/// Production with an at-most-binary body. The grammars are pre-normalized;
/// ε shows up only as the `i = k` identity condition at query time, never
/// as a stored fact.
#[derive(Debug, Clone)]
pub struct Production {
    pub head: usize,
    pub body: Vec<Symbol>,
}

#[derive(Debug, Clone)]
pub struct Grammar {
    pub nonterminal_count: usize,
    pub start: usize,
    pub productions: Vec<Production>,
}

use Symbol::{NonTerminal as N, Terminal as T};

impl Grammar {
    /// Nonempty Dyck words: D → a a⁻¹ | a D a⁻¹ | D D.
    pub fn dyck_zero() -> Grammar {
        let (d, x) = (0, 1);
        Grammar {
            nonterminal_count: 2,
            start: d,
            productions: vec![
                Production { head: d, body: vec![T(Label::Open), T(Label::Close)] },
                Production { head: d, body: vec![T(Label::Open), N(x)] },
                Production { head: x, body: vec![N(d), T(Label::Close)] },
                Production { head: d, body: vec![N(d), N(d)] },
            ],
        }
    }

    /// Nonempty semi-Dyck words: adds a⁻¹ a and a⁻¹ S a to the Dyck rules.
    pub fn semi_dyck_zero() -> Grammar {
        let (s, x, y) = (0, 1, 2);
        Grammar {
            nonterminal_count: 3,
            start: s,
            productions: vec![
                Production { head: s, body: vec![T(Label::Open), T(Label::Close)] },
                Production { head: s, body: vec![T(Label::Close), T(Label::Open)] },
                Production { head: s, body: vec![T(Label::Open), N(x)] },
                Production { head: x, body: vec![N(s), T(Label::Close)] },
                Production { head: s, body: vec![T(Label::Close), N(y)] },
                Production { head: y, body: vec![N(s), T(Label::Open)] },
                Production { head: s, body: vec![N(s), N(s)] },
            ],
        }
    }

    pub fn for_mode(mode: Mode) -> Grammar {
        match mode {
            Mode::Dyck => Grammar::dyck_zero(),
            Mode::SemiDyck => Grammar::semi_dyck_zero(),
        }
    }
}

fn sym_index(s: Symbol) -> usize {
    match s {
        T(Label::Open) => 0,
        T(Label::Close) => 1,
        N(i) => 2 + i,
    }
}

/// Worklist saturation. `lifo` switches the processing order; the fixpoint
/// is the same either way.
fn saturate(g: &Ldg, grammar: &Grammar, lifo: bool) -> Vec<BoolMatrix> {
    let n = g.n();
    let layer_count = 2 + grammar.nonterminal_count;
    let mut layers: Vec<BoolMatrix> = (0..layer_count).map(|_| BoolMatrix::new(n)).collect();

    // Rule indexes: unit bodies, and binary bodies by first/second symbol.
    let mut unit: Vec<Vec<usize>> = vec![Vec::new(); layer_count];
    let mut by_first: Vec<Vec<(usize, usize)>> = vec![Vec::new(); layer_count];
    let mut by_second: Vec<Vec<(usize, usize)>> = vec![Vec::new(); layer_count];
    for p in &grammar.productions {
        let head = 2 + p.head;
        match p.body.as_slice() {
            [b] => unit[sym_index(*b)].push(head),
            [b, c] => {
                by_first[sym_index(*b)].push((sym_index(*c), head));
                by_second[sym_index(*c)].push((sym_index(*b), head));
            }
            other => panic!("production body length {} not normalized", other.len()),
        }
    }

    let mut work: std::collections::VecDeque<(usize, usize, usize)> = Default::default();
    let add = |layers: &mut Vec<BoolMatrix>,
                   work: &mut std::collections::VecDeque<(usize, usize, usize)>,
                   s: usize,
                   i: usize,
                   j: usize| {
        if !layers[s].get(i, j) {
            layers[s].set(i, j, true);
            work.push_back((s, i, j));
        }
    };

    for (src, dst, label) in g.edges() {
        let s = sym_index(T(label));
        add(&mut layers, &mut work, s, src, dst);
    }

    while let Some((s, i, j)) = if lifo { work.pop_back() } else { work.pop_front() } {
        for &head in &unit[s] {
            add(&mut layers, &mut work, head, i, j);
        }
        for &(second, head) in &by_first[s] {
            for k in 0..n {
                if layers[second].get(j, k) {
                    add(&mut layers, &mut work, head, i, k);
                }
            }
        }
        for &(first, head) in &by_second[s] {
            for k in 0..n {
                if layers[first].get(k, i) {
                    add(&mut layers, &mut work, head, k, j);
                }
            }
        }
    }
    layers
}

/// Cell (i, j) true iff some nonempty walk i⇝j spells a word of the mode's
/// 0-cost language.
pub fn oracle_zero_reach(g: &Ldg, mode: Mode) -> BoolMatrix {
    let grammar = Grammar::for_mode(mode);
    let layers = saturate(g, &grammar, false);
    layers.into_iter().nth(2 + grammar.start).expect("start layer")
}

/// Cell (i, j) true iff a single signed edge, extended on both sides by
/// 0-cost walks (or nothing), connects i to j.
pub fn oracle_pm1_reach(g: &Ldg, mode: Mode, sign: i32) -> BoolMatrix {
    assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
    let want = if sign == 1 { Label::Open } else { Label::Close };
    let zero = oracle_zero_reach(g, mode);
    let n = g.n();
    let mut out = BoolMatrix::new(n);
    for (k1, k2, label) in g.edges() {
        if label != want {
            continue;
        }
        for i in 0..n {
            if i != k1 && !zero.get(i, k1) {
                continue;
            }
            for j in 0..n {
                if k2 == j || zero.get(k2, j) {
                    out.set(i, j, true);
                }
            }
        }
    }
    out
}
