//! Sparsest-cut and balanced-cut solvers.
//!
//! Two regimes: exact enumeration of all bipartitions for small node sets
//! (cap 20), and a spectral heuristic for anything larger. The heuristic
//! computes the second Laplacian eigenvector by deflated power iteration,
//! sweeps the induced node order for the best prefix cut, then polishes
//! with first-improvement single-node moves. Results are deterministic
//! given the seed; tie-breaking everywhere prefers the lexicographically
//! smallest side containing node 0. For disconnected input both sparsest
//! solvers return the zero-weight cut isolating node 0's component.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cost::{CostError, ScalingFunction};
use crate::graph::Graph;

/// Largest node count the exact enumerators accept.
pub const EXACT_CUT_CAP: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CutError {
    #[error("need at least 2 nodes, got {0}")]
    TooSmall(usize),
    #[error("{n} nodes exceed the exact enumeration cap {cap}")]
    OverCap { n: usize, cap: usize },
    #[error(transparent)]
    Scaling(#[from] CostError),
}

/// A bipartition with its crossing weight and objective value.
///
/// `side_a` always contains node 0; both sides are sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cut {
    #[serde(rename = "a")]
    pub side_a: Vec<usize>,
    #[serde(rename = "b")]
    pub side_b: Vec<usize>,
    pub weight: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutMode {
    Exact,
    Heuristic,
}

fn cut_from_mask(g: &Graph, mask: u32, weight: f64, ratio: f64) -> Cut {
    let side_a: Vec<usize> = (0..g.n()).filter(|&i| mask >> i & 1 == 1).collect();
    let side_b: Vec<usize> = (0..g.n()).filter(|&i| mask >> i & 1 == 0).collect();
    Cut { side_a, side_b, weight, ratio }
}

fn cut_from_bools(g: &Graph, in_a: &[bool], weight: f64, ratio: f64) -> Cut {
    let flip = !in_a[0];
    let side_a: Vec<usize> = (0..g.n()).filter(|&i| in_a[i] != flip).collect();
    let side_b: Vec<usize> = (0..g.n()).filter(|&i| in_a[i] == flip).collect();
    Cut { side_a, side_b, weight, ratio }
}

fn mask_cut_weight(g: &Graph, mask: u32) -> f64 {
    let mut w = 0.0;
    for &(u, v, wt) in g.edges() {
        if (mask >> u & 1) != (mask >> v & 1) {
            w += wt;
        }
    }
    w
}

/// Sorted-id-list lexicographic order on node sets encoded as bitmasks.
/// Both sets share the elements below the lowest differing bit, so the set
/// owning that bit wins unless the other set ends there (prefix case).
fn mask_lex_less(a: u32, b: u32) -> bool {
    let diff = a ^ b;
    if diff == 0 {
        return false;
    }
    let p = diff.trailing_zeros();
    let (with_p, other) = if a >> p & 1 == 1 { (a, b) } else { (b, a) };
    let other_has_tail = other >> (p + 1) != 0;
    if other_has_tail {
        with_p == a
    } else {
        other == a
    }
}

fn better(cand: &(f64, u32), best: &(f64, u32)) -> bool {
    cand.0 < best.0 || (cand.0 == best.0 && mask_lex_less(cand.1, best.1))
}

fn component_cut(g: &Graph) -> Cut {
    let comps = g.components();
    let side_a = comps[0].clone();
    let mut in_a = vec![false; g.n()];
    for &x in &side_a {
        in_a[x] = true;
    }
    let side_b: Vec<usize> = (0..g.n()).filter(|&i| !in_a[i]).collect();
    Cut { side_a, side_b, weight: 0.0, ratio: 0.0 }
}

fn exact_search<F>(g: &Graph, objective: F) -> Option<Cut>
where
    F: Fn(f64, u32) -> Option<f64> + Sync,
{
    let n = g.n();
    let top: u32 = 1 << (n - 1);
    let best = (0..top - 1)
        .into_par_iter()
        .filter_map(|sub| {
            let mask = sub << 1 | 1;
            let ratio = objective(mask_cut_weight(g, mask), mask)?;
            Some((ratio, mask))
        })
        .reduce_with(|x, y| if better(&y, &x) { y } else { x });
    best.map(|(ratio, mask)| cut_from_mask(g, mask, mask_cut_weight(g, mask), ratio))
}

/// Global minimizer of `w(S, V∖S) / (|S|·|V∖S|)` over all bipartitions.
/// Ties go to the lexicographically smallest side containing node 0.
pub fn sparsest_cut_exact(g: &Graph) -> Result<Cut, CutError> {
    let n = g.n();
    if n < 2 {
        return Err(CutError::TooSmall(n));
    }
    if n > EXACT_CUT_CAP {
        return Err(CutError::OverCap { n, cap: EXACT_CUT_CAP });
    }
    if !g.is_connected() {
        return Ok(component_cut(g));
    }
    let cut = exact_search(g, |w, mask| {
        let a = mask.count_ones() as f64;
        let b = n as f64 - a;
        Some(w / (a * b))
    })
    .expect("n >= 2 leaves at least one bipartition");
    Ok(cut)
}

/// Second-smallest Laplacian eigenpair `(v, λ₂)` by power iteration on
/// `cI − L` with the all-ones direction deflated. `v` is unit length; the
/// start vector is drawn from the seed, so results are reproducible.
pub fn fiedler_vector(g: &Graph, seed: u64) -> Result<(Vec<f64>, f64), CutError> {
    let n = g.n();
    if n < 2 {
        return Err(CutError::TooSmall(n));
    }
    let deg: Vec<f64> = (0..n).map(|i| g.weighted_degree(i)).collect();
    let c = 2.0 * deg.iter().cloned().fold(0.0, f64::max) + 1.0;
    let apply_b = |v: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| {
                let mut lv = deg[i] * v[i];
                for &(j, w) in g.neighbors(i) {
                    lv -= w * v[j];
                }
                c * v[i] - lv
            })
            .collect()
    };
    let uniform = 1.0 / (n as f64).sqrt();
    let deflate = |v: &mut Vec<f64>| {
        let dot: f64 = v.iter().sum::<f64>() * uniform;
        for x in v.iter_mut() {
            *x -= dot * uniform;
        }
    };
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v;
    loop {
        v = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<f64>>();
        deflate(&mut v);
        let nv = norm(&v);
        if nv > 1e-9 {
            for x in v.iter_mut() {
                *x /= nv;
            }
            break;
        }
    }
    let max_iters = 10 * n * n;
    for _ in 0..max_iters {
        let mut next = apply_b(&v);
        deflate(&mut next);
        let nv = norm(&next);
        if nv <= f64::MIN_POSITIVE {
            break;
        }
        for x in next.iter_mut() {
            *x /= nv;
        }
        let delta = next
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        v = next;
        if delta <= 1e-8 {
            break;
        }
    }
    let lambda = (0..n)
        .map(|i| {
            let mut lv = deg[i] * v[i];
            for &(j, w) in g.neighbors(i) {
                lv -= w * v[j];
            }
            v[i] * lv
        })
        .sum();
    Ok((v, lambda))
}

struct SweepState {
    in_a: Vec<bool>,
    size_a: usize,
    weight: f64,
}

impl SweepState {
    fn new(n: usize) -> Self {
        SweepState { in_a: vec![false; n], size_a: 0, weight: 0.0 }
    }

    fn move_delta(&self, g: &Graph, x: usize) -> f64 {
        let to_a: f64 = g
            .neighbors(x)
            .iter()
            .filter(|(y, _)| self.in_a[*y])
            .map(|(_, w)| w)
            .sum();
        if self.in_a[x] {
            2.0 * to_a - g.weighted_degree(x)
        } else {
            g.weighted_degree(x) - 2.0 * to_a
        }
    }

    fn flip(&mut self, g: &Graph, x: usize) {
        self.weight += self.move_delta(g, x);
        if self.in_a[x] {
            self.size_a -= 1;
        } else {
            self.size_a += 1;
        }
        self.in_a[x] = !self.in_a[x];
    }
}

fn heuristic_search<F>(g: &Graph, seed: u64, objective: F) -> Result<Cut, CutError>
where
    F: Fn(f64, usize) -> Option<f64>,
{
    let n = g.n();
    let (fiedler, _) = fiedler_vector(g, seed)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| fiedler[i].total_cmp(&fiedler[j]).then(i.cmp(&j)));

    let mut state = SweepState::new(n);
    let mut best: Option<(f64, Vec<bool>, f64)> = None;
    for &x in order.iter().take(n - 1) {
        state.flip(g, x);
        if let Some(ratio) = objective(state.weight, state.size_a) {
            if best.as_ref().is_none_or(|(r, _, _)| ratio < *r) {
                best = Some((ratio, state.in_a.clone(), state.weight));
            }
        }
    }
    let (mut ratio, in_a, weight) = best.expect("objective admits at least one sweep cut");
    let mut state = SweepState { size_a: in_a.iter().filter(|&&b| b).count(), in_a, weight };

    let move_cap = 10 * n;
    let mut moves = 0;
    'outer: while moves < move_cap {
        for x in 0..n {
            let new_size = if state.in_a[x] { state.size_a - 1 } else { state.size_a + 1 };
            if new_size == 0 || new_size == n {
                continue;
            }
            let new_weight = state.weight + state.move_delta(g, x);
            if let Some(new_ratio) = objective(new_weight, new_size) {
                if new_ratio < ratio {
                    state.flip(g, x);
                    ratio = new_ratio;
                    moves += 1;
                    continue 'outer;
                }
            }
        }
        break;
    }
    let weight = state.weight.max(0.0);
    Ok(cut_from_bools(g, &state.in_a, weight, ratio))
}

/// Spectral sweep plus local search for the sparsest cut. No optimality
/// certificate; the exact solver never returns a worse ratio.
pub fn sparsest_cut_heuristic(g: &Graph, seed: u64) -> Result<Cut, CutError> {
    let n = g.n();
    if n < 2 {
        return Err(CutError::TooSmall(n));
    }
    if !g.is_connected() {
        return Ok(component_cut(g));
    }
    heuristic_search(g, seed, |w, a| {
        let a = a as f64;
        Some(w / (a * (n as f64 - a)))
    })
}

fn feasible_sizes(n: usize) -> (usize, usize) {
    (n.div_ceil(3), 2 * n / 3)
}

/// Minimizes `w(S, V∖S) / min(f(|S|), f(|V∖S|))` over bipartitions with
/// `⌈n/3⌉ ≤ |S| ≤ ⌊2n/3⌋` (for n = 2 this admits exactly the 1-vs-1 cut).
pub fn balanced_f_cut(
    g: &Graph,
    f: &ScalingFunction,
    mode: CutMode,
    seed: u64,
) -> Result<Cut, CutError> {
    let n = g.n();
    if n < 2 {
        return Err(CutError::TooSmall(n));
    }
    f.check_domain(n)?;
    let (lo, hi) = feasible_sizes(n);
    let denom = |a: usize| f.eval(a).min(f.eval(n - a));
    match mode {
        CutMode::Exact => {
            if n > EXACT_CUT_CAP {
                return Err(CutError::OverCap { n, cap: EXACT_CUT_CAP });
            }
            let cut = exact_search(g, |w, mask| {
                let a = mask.count_ones() as usize;
                (lo..=hi).contains(&a).then(|| w / denom(a))
            })
            .expect("feasible sizes are nonempty for n >= 2");
            Ok(cut)
        }
        CutMode::Heuristic => heuristic_search(g, seed, |w, a| {
            (lo..=hi).contains(&a).then(|| w / denom(a))
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_clique, gen_er, gen_line, gen_two_cliques};

    #[test]
    fn line4_exact() {
        let cut = sparsest_cut_exact(&gen_line(4)).unwrap();
        assert_eq!(cut.side_a, vec![0, 1]);
        assert_eq!(cut.side_b, vec![2, 3]);
        assert_eq!(cut.weight, 1.0);
        assert_eq!(cut.ratio, 0.25);
    }

    #[test]
    fn disconnected_returns_component_of_zero() {
        let g = gen_two_cliques(2, 2).0;
        let cut = sparsest_cut_exact(&g).unwrap();
        assert_eq!((cut.side_a, cut.ratio), (vec![0, 1], 0.0));

        let g = Graph::unit(4, vec![(0, 3)]).unwrap();
        let cut = sparsest_cut_exact(&g).unwrap();
        assert_eq!(cut.side_a, vec![0, 3]);
        assert_eq!(cut.weight, 0.0);
        let cut = sparsest_cut_heuristic(&g, 1).unwrap();
        assert_eq!((cut.side_a, cut.ratio), (vec![0, 3], 0.0));
    }

    #[test]
    fn k4_all_ratios_tie() {
        let cut = sparsest_cut_exact(&gen_clique(4)).unwrap();
        assert_eq!(cut.ratio, 1.0);
        // every bipartition of K_4 has ratio 1; the smallest side list wins
        assert_eq!(cut.side_a, vec![0]);
    }

    #[test]
    fn size_guards() {
        assert_eq!(sparsest_cut_exact(&gen_line(1)).unwrap_err(), CutError::TooSmall(1));
        assert_eq!(sparsest_cut_heuristic(&gen_line(1), 0).unwrap_err(), CutError::TooSmall(1));
        assert!(matches!(
            sparsest_cut_exact(&gen_line(21)).unwrap_err(),
            CutError::OverCap { n: 21, cap: 20 }
        ));
        assert!(sparsest_cut_heuristic(&gen_line(21), 0).is_ok());
    }

    #[test]
    fn bridge_between_cliques() {
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for i in 0..5 {
            for j in (i + 1)..5 {
                edges.push((i, j));
                edges.push((i + 5, j + 5));
            }
        }
        edges.push((4, 5));
        let g = Graph::unit(10, edges).unwrap();
        let exact = sparsest_cut_exact(&g).unwrap();
        assert_eq!(exact.side_a, vec![0, 1, 2, 3, 4]);
        assert_eq!(exact.ratio, 1.0 / 25.0);
        for seed in 0..5 {
            let h = sparsest_cut_heuristic(&g, seed).unwrap();
            assert_eq!(h.side_a, exact.side_a);
            assert_eq!(h.ratio, exact.ratio);
        }
    }

    #[test]
    fn heuristic_within_factor_on_er_corpus() {
        let mut checked = 0;
        let mut seed = 0u64;
        while checked < 100 {
            seed += 1;
            let g = gen_er(12, 0.5, 1000 + seed);
            if !g.is_connected() {
                continue;
            }
            let exact = sparsest_cut_exact(&g).unwrap();
            let heur = sparsest_cut_heuristic(&g, seed).unwrap();
            assert!(heur.ratio >= exact.ratio - 1e-12);
            assert!(heur.ratio <= 1.5 * exact.ratio, "seed {}", seed);
            checked += 1;
        }
    }

    #[test]
    fn fiedler_residual_is_small() {
        for g in [gen_line(12), gen_er(14, 0.4, 9), gen_clique(6)] {
            let (v, lambda) = fiedler_vector(&g, 3).unwrap();
            let mut resid = 0.0;
            for i in 0..g.n() {
                let mut lv = g.weighted_degree(i) * v[i];
                for &(j, w) in g.neighbors(i) {
                    lv -= w * v[j];
                }
                resid += (lv - lambda * v[i]).powi(2);
            }
            assert!(resid.sqrt() <= 1e-6, "residual {} on n={}", resid.sqrt(), g.n());
        }
    }

    #[test]
    fn balanced_k4_excludes_lopsided_cuts() {
        let cut = balanced_f_cut(&gen_clique(4), &ScalingFunction::Linear, CutMode::Exact, 0).unwrap();
        assert_eq!(cut.side_a.len(), 2);
        assert_eq!(cut.side_a, vec![0, 1]);
        assert_eq!(cut.weight, 4.0);
        assert_eq!(cut.ratio, 2.0);
    }

    #[test]
    fn balanced_line6_middle_edge() {
        for mode in [CutMode::Exact, CutMode::Heuristic] {
            let cut = balanced_f_cut(&gen_line(6), &ScalingFunction::Linear, mode, 7).unwrap();
            assert_eq!(cut.side_a, vec![0, 1, 2]);
            assert_eq!(cut.weight, 1.0);
            assert!((cut.ratio - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn balanced_two_node_graph() {
        let g = Graph::new(2, vec![(0, 1, 0.5)]).unwrap();
        let cut = balanced_f_cut(&g, &ScalingFunction::Linear, CutMode::Exact, 0).unwrap();
        assert_eq!((cut.side_a.len(), cut.side_b.len()), (1, 1));
        assert_eq!(cut.ratio, 0.5);
    }

    #[test]
    fn balanced_objective_recomputes() {
        let f = ScalingFunction::power(2.0).unwrap();
        for mode in [CutMode::Exact, CutMode::Heuristic] {
            let cut = balanced_f_cut(&gen_line(7), &f, mode, 11).unwrap();
            let a = cut.side_a.len() as f64;
            let b = cut.side_b.len() as f64;
            let expect = cut.weight / (a * a).min(b * b);
            assert!((cut.ratio - expect).abs() <= 1e-12 * expect.max(1.0));
        }
    }

    #[test]
    fn exact_never_above_heuristic() {
        for seed in 0..30 {
            let g = gen_er(9, 0.45, 300 + seed);
            if !g.is_connected() {
                continue;
            }
            let exact = sparsest_cut_exact(&g).unwrap();
            let heur = sparsest_cut_heuristic(&g, seed).unwrap();
            assert!(exact.ratio <= heur.ratio + 1e-12);
            let f = ScalingFunction::Log;
            let be = balanced_f_cut(&g, &f, CutMode::Exact, seed).unwrap();
            let bh = balanced_f_cut(&g, &f, CutMode::Heuristic, seed).unwrap();
            assert!(be.ratio <= bh.ratio + 1e-12);
        }
    }

    #[test]
    fn mask_order_matches_list_order() {
        // {0} < {0,1} < {0,2}; {0,1,2} < {0,2}; prefix precedes extension
        assert!(mask_lex_less(0b001, 0b011));
        assert!(mask_lex_less(0b011, 0b101));
        assert!(mask_lex_less(0b111, 0b101));
        assert!(!mask_lex_less(0b101, 0b011));
        assert!(!mask_lex_less(0b001, 0b001));
    }

    #[test]
    fn cut_serializes_with_short_keys() {
        let cut = Cut { side_a: vec![0], side_b: vec![1], weight: 1.0, ratio: 1.0 };
        let json = serde_json::to_string(&cut).unwrap();
        assert_eq!(json, r#"{"a":[0],"b":[1],"weight":1.0,"ratio":1.0}"#);
    }
}
