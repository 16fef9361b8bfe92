//! Instance builders: grid-path worst cases, flat paths, random graphs,
//! and the label-sequence ↔ grid-path view.

use crate::graph::{Label, Ldg, Mode};

/// Prefix-sum trace of a label sequence: step index against running cost,
/// starting at (0, 0). A +1 edge steps up-right, a -1 edge down-right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridPath {
    pub points: Vec<(i64, i64)>,
}

impl GridPath {
    /// Maximal peak level, max over all y coordinates.
    pub fn peak_level(&self) -> i64 {
        self.points.iter().map(|&(_, y)| y).max().unwrap_or(0)
    }

    /// CSV export, one `x,y` line per point.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y\n");
        for &(x, y) in &self.points {
            out.push_str(&format!("{x},{y}\n"));
        }
        out
    }

    /// DOT export for figure regeneration: nodes at grid positions joined
    /// in path order.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph grid {\n  node [shape=point];\n");
        for (idx, &(x, y)) in self.points.iter().enumerate() {
            out.push_str(&format!("  p{idx} [pos=\"{x},{y}!\"];\n"));
        }
        for idx in 1..self.points.len() {
            out.push_str(&format!("  p{} -> p{};\n", idx - 1, idx));
        }
        out.push_str("}\n");
        out
    }
}

/// Grid view of a label sequence.
pub fn to_grid(labels: &[Label]) -> GridPath {
    let mut points = vec![(0i64, 0i64)];
    let mut y = 0i64;
    for (idx, &l) in labels.iter().enumerate() {
        y += crate::graph::label_cost(l) as i64;
        points.push((idx as i64 + 1, y));
    }
    GridPath { points }
}

/// Simple path graph spelling the given word on vertices 0..len.
pub fn path_graph(word: &[Label]) -> Ldg {
    let mut g = Ldg::new(word.len() + 1);
    for (i, &l) in word.iter().enumerate() {
        g.add_edge(i, i + 1, l).expect("path vertex ids in range");
    }
    g
}

/// Labels along a simple path graph, smallest vertex first. Only meaningful
/// for graphs built by [`path_graph`]-style constructors.
pub fn path_word(g: &Ldg) -> Vec<Label> {
    let mut word: Vec<(usize, Label)> = g.edges().map(|(s, _, l)| (s, l)).collect();
    word.sort();
    word.into_iter().map(|(_, l)| l).collect()
}

/// Index of the first peak (an open directly followed by a close) in a
/// word, if any.
pub fn first_peak_word_index(word: &[Label]) -> Option<usize> {
    word.windows(2)
        .position(|w| w[0] == Label::Open && w[1] == Label::Close)
}

fn worst_dyck_word(k: u32) -> Vec<Label> {
    if k == 0 {
        return vec![Label::Open, Label::Close];
    }
    let inner = worst_dyck_word(k - 1);
    let mut word = Vec::with_capacity(2 * inner.len() + 2);
    word.push(Label::Open);
    word.extend_from_slice(&inner);
    word.extend_from_slice(&inner);
    word.push(Label::Close);
    word
}

/// Reduced worst-case Dyck path with m = 2ᵏ peaks: two adjoining copies of
/// the previous level wrapped by one exterior pair. Vertex count follows
/// t(m) = 2·t(m/2) + 1 with t(1) = 3, that is n = 2^{k+2} - 1.
pub fn gen_worst_case_dyck(k: u32) -> Ldg {
    assert!(k >= 1, "worst-case generator requires k >= 1");
    let g = path_graph(&worst_dyck_word(k));
    debug_assert_eq!(g.n(), (1usize << (k + 2)) - 1);
    g
}

fn worst_semidyck_word(k: u32) -> Vec<Label> {
    if k == 0 {
        return vec![Label::Open, Label::Close];
    }
    let inner = worst_semidyck_word(k - 1);
    let mut word = Vec::with_capacity(4 * inner.len() + 2);
    // Exterior orientation alternates per level, mixing pyramid and valley
    // wraps; either way the word stays balanced.
    let (first, last) = if k % 2 == 1 {
        (Label::Open, Label::Close)
    } else {
        (Label::Close, Label::Open)
    };
    word.push(first);
    for _ in 0..4 {
        word.extend_from_slice(&inner);
    }
    word.push(last);
    word
}

/// Reduced worst-case semi-Dyck path with m = 4ᵏ pyramids/valleys: four
/// adjoining copies per level wrapped by an exterior pair. Vertex count
/// follows tₛ(m) = 4·tₛ(m/4) - 1 with tₛ(1) = 3.
pub fn gen_worst_case_semidyck(k: u32) -> Ldg {
    assert!(k >= 1, "worst-case generator requires k >= 1");
    path_graph(&worst_semidyck_word(k))
}

/// Flat path of pyramids (and, in semi-Dyck mode, valleys): block height
/// h > 0 spells aʰ a⁻ʰ; a negative h is a valley a⁻ʰ aʰ and is accepted in
/// semi-Dyck mode only.
pub fn gen_flat(blocks: &[i64], mode: Mode) -> Ldg {
    assert!(!blocks.is_empty(), "flat path needs at least one block");
    let mut word = Vec::new();
    for &h in blocks {
        assert!(h != 0, "flat block height must be nonzero");
        assert!(
            h > 0 || mode == Mode::SemiDyck,
            "valleys only exist in semi-Dyck flat paths"
        );
        let (up, down) = if h > 0 {
            (Label::Open, Label::Close)
        } else {
            (Label::Close, Label::Open)
        };
        for _ in 0..h.unsigned_abs() {
            word.push(up);
        }
        for _ in 0..h.unsigned_abs() {
            word.push(down);
        }
    }
    path_graph(&word)
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Random graph: m labeled edges drawn uniformly (duplicates collapse),
/// deterministic for a fixed seed.
pub fn gen_random(n: usize, m: usize, seed: u64) -> Ldg {
    assert!(n >= 1);
    let mut state = seed ^ 0xd1b54a32d192ed03;
    let mut g = Ldg::new(n);
    for _ in 0..m {
        let src = (splitmix64(&mut state) % n as u64) as usize;
        let dst = (splitmix64(&mut state) % n as u64) as usize;
        let label = if splitmix64(&mut state) & 1 == 0 {
            Label::Open
        } else {
            Label::Close
        };
        g.add_edge(src, dst, label).expect("sampled ids in range");
    }
    g
}
