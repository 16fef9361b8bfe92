//! The three reachability solvers and the ±1 extension.
//!
//! `cubic_exact_paths` is the direct fixpoint over the three-layer update
//! rules. `flat_exact_paths` is the matrix pipeline: square, strip ±1
//! products, normalize with halving, extract 0 edges, sandwich-extend.
//! `general_exact_zero_paths` iterates the flat solver, re-adding original
//! edges and extending them by the 0 edges found so far, until the 0-edge
//! set stops growing. `pm1_reachability` then reads the ±1 layers off the
//! identity-augmented sandwich product around the original edges.

use crate::agmy::{
    decode, encode, get_zero_edges, markup_minus_one_edges, matrix_mul,
    normalize_and_divide_by_2, remove_pm1_edges, zero_set_coded, AgmyMatrix,
};
use crate::graph::{to_tri_matrix, BoolMatrix, Ldg, Mode, TriMatrix};

/// ⌈log₂ n⌉ with ⌈log₂ 1⌉ = 0.
pub fn ceil_log2(n: usize) -> usize {
    assert!(n >= 1);
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

/// All exact-0 edges discovered by the general solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroEdgeSet {
    pub n: usize,
    pub cells: BoolMatrix,
}

/// Final per-mode answer. The zero diagonal is true only for nonempty
/// 0-cost closed walks; ε is never reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachResult {
    pub mode: Mode,
    pub neg: BoolMatrix,
    pub zero: BoolMatrix,
    pub pos: BoolMatrix,
    /// Closure iterations that discovered at least one new 0 edge.
    pub outer_iterations: usize,
    /// Total passes of the flat solver's inner loop, over all invocations.
    pub inner_iterations: usize,
}

/// Fixpoint of the three-layer update rules, run to convergence.
///
/// Per pass, for every i, j, k: a 0 edge appears from +1 then -1 (and in
/// semi-Dyck mode also -1 then +1); ±1 edges extend by adjoining 0 edges
/// on either side.
pub fn cubic_exact_paths(g: &Ldg, mode: Mode) -> TriMatrix {
    let n = g.n();
    let mut t = to_tri_matrix(g);
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if !t.zero.get(i, j) {
                        let fwd = t.pos.get(i, k) && t.neg.get(k, j);
                        let rev = mode == Mode::SemiDyck && t.neg.get(i, k) && t.pos.get(k, j);
                        if fwd || rev {
                            t.zero.set(i, j, true);
                            changed = true;
                        }
                    }
                    if !t.pos.get(i, j)
                        && ((t.pos.get(i, k) && t.zero.get(k, j))
                            || (t.zero.get(i, k) && t.pos.get(k, j)))
                    {
                        t.pos.set(i, j, true);
                        changed = true;
                    }
                    if !t.neg.get(i, j)
                        && ((t.neg.get(i, k) && t.zero.get(k, j))
                            || (t.zero.get(i, k) && t.neg.get(k, j)))
                    {
                        t.neg.set(i, j, true);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return t;
        }
    }
}

fn absorb_zero_cells(zeros: &mut BoolMatrix, m: &AgmyMatrix) {
    for i in 0..m.n() {
        for j in 0..m.n() {
            if m.get(i, j).coeff(0) == 1 {
                zeros.set(i, j, true);
            }
        }
    }
}

fn restore_zero_digits(m: &mut AgmyMatrix, zeros: &BoolMatrix) {
    for (i, j) in zeros.iter_set() {
        let mut v = m.get(i, j).clone();
        v.set_coeff(0, 1);
        m.set(i, j, v);
    }
}

pub(crate) struct FlatRun {
    pub matrix: AgmyMatrix,
    pub zeros: BoolMatrix,
    pub passes: usize,
}

/// One invocation of the flat solver: ⌈log₂ n⌉ passes of
/// square → remove ±1 → normalize/divide → extract Z → Z·M·Z.
///
/// Every discovered 0 edge stays in the working matrix for later passes;
/// ±1 edges live one pass at a time, which keeps each pass pairing edges
/// of one doubling scale only. In Dyck mode the square uses the marked
/// left factor so normalization can drop -1→+1 pairings.
pub(crate) fn flat_run(t: &TriMatrix, mode: Mode) -> FlatRun {
    let n = t.n;
    let mut zeros = t.zero.clone();
    let mut m = encode(t);
    let passes = ceil_log2(n);
    for _ in 0..passes {
        let left = match mode {
            Mode::Dyck => markup_minus_one_edges(&m),
            Mode::SemiDyck => m.clone(),
        };
        let product = matrix_mul(&left, &m);
        let product = remove_pm1_edges(&product);
        let mut cur = normalize_and_divide_by_2(&product, mode);
        absorb_zero_cells(&mut zeros, &cur);
        restore_zero_digits(&mut cur, &zeros);

        let z = get_zero_edges(&cur);
        let zm = normalize_and_divide_by_2(&matrix_mul(&z, &cur), mode);
        let mut next = normalize_and_divide_by_2(&matrix_mul(&zm, &z), mode);
        absorb_zero_cells(&mut zeros, &next);
        restore_zero_digits(&mut next, &zeros);
        m = next;
    }
    FlatRun { matrix: m, zeros, passes }
}

/// Public face of the flat solver: returns the final normalized matrix.
/// For flat-grammar inputs its decoded zero layer is already the full set
/// of 0-reachable pairs.
pub fn flat_exact_paths(t: &TriMatrix, mode: Mode) -> AgmyMatrix {
    flat_run(t, mode).matrix
}

/// Outcome of the general iterated solver, with instrumentation.
#[derive(Debug, Clone)]
pub struct GeneralRun {
    pub zero_edges: ZeroEdgeSet,
    pub outer_iterations: usize,
    pub inner_iterations: usize,
    /// Cumulative 0-edge count after each executed iteration.
    pub zero_counts: Vec<usize>,
}

/// General solver seeded with an initial set of known 0 edges (empty for
/// the plain entry point). Each iteration runs the flat solver on the
/// original ±1 edges plus everything known, then squares the matrix of
/// original edges and accumulated 0 edges once, keeping the new 0 cells
/// and the one-sided 0-extensions of original edges for the next round.
/// Stops as soon as an iteration adds no 0 edge.
pub fn general_exact_zero_paths_seeded(g: &Ldg, mode: Mode, seed: &BoolMatrix) -> GeneralRun {
    let n = g.n();
    assert_eq!(seed.n(), n, "seed dimension mismatch");
    let base = to_tri_matrix(g);
    let mut e_star = seed.clone();
    let mut flat_pos = base.pos.clone();
    let mut flat_neg = base.neg.clone();
    let mut outer = 0usize;
    let mut inner = 0usize;
    let mut zero_counts = Vec::new();

    loop {
        let before = e_star.count();

        let mut input = TriMatrix::new(n);
        input.neg = flat_neg.clone();
        input.zero = e_star.clone();
        input.pos = flat_pos.clone();
        let run = flat_run(&input, mode);
        inner += run.passes;
        e_star.union_with(&run.zeros);

        // Original edges plus exact 0 paths; synthesized ±1 edges from the
        // flat run are dropped here.
        let mut rebuilt = TriMatrix::new(n);
        rebuilt.neg = base.neg.clone();
        rebuilt.zero = e_star.clone();
        rebuilt.pos = base.pos.clone();
        let m = encode(&rebuilt);
        let left = match mode {
            Mode::Dyck => markup_minus_one_edges(&m),
            Mode::SemiDyck => m.clone(),
        };
        let product = matrix_mul(&left, &m);
        let squared = normalize_and_divide_by_2(&product, mode);
        absorb_zero_cells(&mut e_star, &squared);

        // One-sided 0-extensions of original edges feed the next flat
        // invocation. Halved ±2 cells do not: they stand for ±2-cost walks
        // and would desynchronize the next invocation's first pairing pass.
        flat_pos = base.pos.clone();
        flat_neg = base.neg.clone();
        for i in 0..n {
            for j in 0..n {
                let v = product.get(i, j);
                if v.coeff(1) > 0 {
                    flat_pos.set(i, j, true);
                }
                if v.coeff(-1) > 0 {
                    flat_neg.set(i, j, true);
                }
            }
        }

        zero_counts.push(e_star.count());
        if e_star.count() == before {
            break;
        }
        outer += 1;
    }

    GeneralRun {
        zero_edges: ZeroEdgeSet { n, cells: e_star },
        outer_iterations: outer,
        inner_iterations: inner,
        zero_counts,
    }
}

/// All-pairs exact-0 reachability under the mode's closure rule.
pub fn general_exact_zero_paths(g: &Ldg, mode: Mode) -> ZeroEdgeSet {
    general_exact_zero_paths_seeded(g, mode, &BoolMatrix::new(g.n())).zero_edges
}

/// ±1 reachability from the 0-edge set: the sandwich product of the
/// identity-augmented 0-edge coding, the original-edge coding, and the
/// identity-augmented 0-edge coding again. Returns `(neg, pos)`.
pub fn pm1_reachability(e: &ZeroEdgeSet, g: &Ldg, mode: Mode) -> (BoolMatrix, BoolMatrix) {
    assert_eq!(e.n, g.n(), "zero-edge set dimension mismatch");
    let zhat = zero_set_coded(&e.cells);
    let edges = encode(&to_tri_matrix(g));
    let half = normalize_and_divide_by_2(&matrix_mul(&zhat, &edges), mode);
    let full = normalize_and_divide_by_2(&matrix_mul(&half, &zhat), mode);
    let t = decode(&full);
    (t.neg, t.pos)
}

/// Full solve: general 0-edge closure, then the ±1 layers.
pub fn solve(g: &Ldg, mode: Mode) -> ReachResult {
    let run = general_exact_zero_paths_seeded(g, mode, &BoolMatrix::new(g.n()));
    let (neg, pos) = pm1_reachability(&run.zero_edges, g, mode);
    ReachResult {
        mode,
        neg,
        zero: run.zero_edges.cells,
        pos,
        outer_iterations: run.outer_iterations,
        inner_iterations: run.inner_iterations,
    }
}

/// Decoded layers of a solve, as a TriMatrix, for solver cross-checks.
pub fn solve_layers(g: &Ldg, mode: Mode) -> TriMatrix {
    let r = solve(g, mode);
    let mut t = TriMatrix::new(g.n());
    t.neg = r.neg;
    t.zero = r.zero;
    t.pos = r.pos;
    t
}
