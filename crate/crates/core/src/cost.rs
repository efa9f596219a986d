//! Cost evaluation for cluster trees.
//!
//! The objective charges every edge the leaf count of the smallest subtree
//! containing both endpoints. [`cost`] computes it twice, by genuinely
//! different routes: once summing over edges via LCA queries (the report
//! total) and once summing per-split cut weights scaled by the split's set
//! size (the report breakdown). The two agree exactly on integer weights and
//! to 1e-9 relative tolerance on reals, which the test suite pins down.
//!
//! Also here: the generalized cost with a scaling function applied to
//! subtree sizes, expected cost under planted partition models, the
//! two-clique optimum with its excess lower bound for off-target top splits,
//! and the epsilon-goodness predicate for recovered bipartitions.

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::tree::{ClusterTree, Split};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CostError {
    #[error("tree leaves do not biject with graph nodes")]
    LeafMismatch,
    #[error("invalid scaling function: {0}")]
    BadScaling(String),
    #[error("invalid planted model: {0}")]
    BadModel(String),
    #[error("malformed split: {0}")]
    BadSplit(String),
    #[error("sides must have equal size, got {left} and {right}")]
    SideSizeMismatch { left: usize, right: usize },
    #[error("epsilon {0} outside [0, 1]")]
    BadEpsilon(f64),
}

/// A strictly increasing scaling function with `f(0) = 0`, applied to
/// subtree sizes in the generalized cost.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalingFunction {
    /// `f(x) = x`.
    Linear,
    /// `f(x) = ln(1 + x)`.
    Log,
    /// `f(x) = x^a` for a fixed `a > 0`.
    Power(f64),
    /// Values tabulated on `0..=n`.
    Table(Vec<f64>),
}

impl ScalingFunction {
    pub fn power(a: f64) -> Result<Self, CostError> {
        if !(a.is_finite() && a > 0.0) {
            return Err(CostError::BadScaling(format!("power exponent {} must be > 0", a)));
        }
        Ok(ScalingFunction::Power(a))
    }

    /// `values[x]` gives `f(x)`; must start at 0 and strictly increase.
    pub fn table(values: Vec<f64>) -> Result<Self, CostError> {
        if values.is_empty() || values[0] != 0.0 {
            return Err(CostError::BadScaling("table must start with f(0) = 0".into()));
        }
        if values.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
            return Err(CostError::BadScaling("table must be strictly increasing".into()));
        }
        Ok(ScalingFunction::Table(values))
    }

    /// Checks the function is defined on `0..=n`.
    pub fn check_domain(&self, n: usize) -> Result<(), CostError> {
        match self {
            ScalingFunction::Table(v) if v.len() <= n => Err(CostError::BadScaling(format!(
                "table covers 0..={} but needs 0..={}",
                v.len().saturating_sub(1),
                n
            ))),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, x: usize) -> f64 {
        match self {
            ScalingFunction::Linear => x as f64,
            ScalingFunction::Log => (1.0 + x as f64).ln(),
            ScalingFunction::Power(a) => (x as f64).powf(*a),
            ScalingFunction::Table(v) => v[x],
        }
    }
}

impl std::fmt::Display for ScalingFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScalingFunction::Linear => write!(f, "linear"),
            ScalingFunction::Log => write!(f, "log"),
            ScalingFunction::Power(a) => write!(f, "pow:{}", a),
            ScalingFunction::Table(_) => write!(f, "table"),
        }
    }
}

/// One split with its contribution `f(|S|) · w(S_1,…,S_k)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitCost {
    #[serde(flatten)]
    pub split: Split,
    pub cost: f64,
}

/// Total cost plus the per-split breakdown.
///
/// Serializes as `{"total": …, "splits": [{"set": …, "parts": …, "cost": …}]}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostReport {
    pub total: f64,
    pub splits: Vec<SplitCost>,
}

impl CostReport {
    /// Sum of the per-split contributions; equals `total` up to float
    /// summation order.
    pub fn split_total(&self) -> f64 {
        self.splits.iter().map(|s| s.cost).sum()
    }
}

fn check_leaves(g: &Graph, t: &ClusterTree) -> Result<(), CostError> {
    let ids = t.leaf_ids();
    if ids.len() != g.n() || ids.iter().enumerate().any(|(i, &id)| i != id) {
        return Err(CostError::LeafMismatch);
    }
    Ok(())
}

/// Edge-sum cost: each edge pays its weight times `f` of the LCA subtree
/// size (`f` defaults to the identity). This is the lean evaluator the
/// brute-force searches minimize.
pub fn edge_sum_cost(
    g: &Graph,
    t: &ClusterTree,
    f: Option<&ScalingFunction>,
) -> Result<f64, CostError> {
    check_leaves(g, t)?;
    if let Some(f) = f {
        f.check_domain(g.n())?;
    }
    let mut total = 0.0;
    for &(u, v, w) in g.edges() {
        let size = t.lca_subtree_size(u, v).expect("distinct leaves of t");
        total += w * match f {
            None => size as f64,
            Some(f) => f.eval(size),
        };
    }
    Ok(total)
}

fn split_costs(g: &Graph, t: &ClusterTree, f: Option<&ScalingFunction>) -> Vec<SplitCost> {
    let mut part_of = vec![usize::MAX; g.n()];
    let mut out = Vec::new();
    for split in t.splits() {
        for (pi, part) in split.parts.iter().enumerate() {
            for &x in part {
                part_of[x] = pi;
            }
        }
        let mut cut = 0.0;
        for &(u, v, w) in g.edges() {
            let (a, b) = (part_of[u], part_of[v]);
            if a != usize::MAX && b != usize::MAX && a != b {
                cut += w;
            }
        }
        let scale = match f {
            None => split.set.len() as f64,
            Some(f) => f.eval(split.set.len()),
        };
        for &x in &split.set {
            part_of[x] = usize::MAX;
        }
        out.push(SplitCost { split, cost: scale * cut });
    }
    out
}

/// Cost of `t` on `g`: the total from the edge-sum form, the breakdown from
/// the split-sum form.
pub fn cost(g: &Graph, t: &ClusterTree) -> Result<CostReport, CostError> {
    let total = edge_sum_cost(g, t, None)?;
    Ok(CostReport { total, splits: split_costs(g, t, None) })
}

/// Generalized cost with a scaling function applied to subtree sizes.
/// `ScalingFunction::Linear` reproduces [`cost`] exactly.
pub fn generalized_cost(
    g: &Graph,
    t: &ClusterTree,
    f: &ScalingFunction,
) -> Result<CostReport, CostError> {
    let total = edge_sum_cost(g, t, Some(f))?;
    Ok(CostReport { total, splits: split_costs(g, t, Some(f)) })
}

/// Parameters of a planted bipartition or its general k-cluster variant.
#[derive(Debug, Clone, PartialEq)]
pub enum PlantedModel {
    Simple { n: usize, p: f64, q: f64 },
    General {
        /// Cluster id per node.
        assignment: Vec<usize>,
        /// In-cluster edge probability per node pair; entries `[i][j]` with
        /// `i < j` and `i ~ j` in one cluster are consulted.
        in_prob: Vec<Vec<f64>>,
        q: f64,
    },
}

impl PlantedModel {
    pub fn simple(n: usize, p: f64, q: f64) -> Result<Self, CostError> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(CostError::BadModel(format!("n = {} must be even and >= 2", n)));
        }
        if !(0.0..=1.0).contains(&q) || !(0.0..=1.0).contains(&p) || q >= p {
            return Err(CostError::BadModel(format!(
                "probabilities must satisfy 0 <= q < p <= 1, got p = {}, q = {}",
                p, q
            )));
        }
        Ok(PlantedModel::Simple { n, p, q })
    }

    pub fn general(assignment: Vec<usize>, in_prob: Vec<Vec<f64>>, q: f64) -> Result<Self, CostError> {
        let n = assignment.len();
        if !(0.0..=1.0).contains(&q) {
            return Err(CostError::BadModel(format!("background q = {} outside [0, 1]", q)));
        }
        if in_prob.len() != n || in_prob.iter().any(|row| row.len() != n) {
            return Err(CostError::BadModel("probability matrix must be n x n".into()));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if assignment[i] == assignment[j] {
                    let p = in_prob[i][j];
                    if !(p > q && p <= 1.0) {
                        return Err(CostError::BadModel(format!(
                            "in-cluster probability {} for pair ({}, {}) must lie in ({}, 1]",
                            p, i, j, q
                        )));
                    }
                }
            }
        }
        Ok(PlantedModel::General { assignment, in_prob, q })
    }

    pub fn n(&self) -> usize {
        match self {
            PlantedModel::Simple { n, .. } => *n,
            PlantedModel::General { assignment, .. } => assignment.len(),
        }
    }

    pub fn background(&self) -> f64 {
        match self {
            PlantedModel::Simple { q, .. } => *q,
            PlantedModel::General { q, .. } => *q,
        }
    }

    /// The centered expectation graph H: in-cluster pairs keep weight
    /// `Pr(edge) − q`; everything else vanishes. For the simple model this
    /// is two (n/2)-cliques of weight `p − q` on `{0..n/2}` and the rest.
    pub fn expected_graph(&self) -> Graph {
        let mut edges = Vec::new();
        match self {
            PlantedModel::Simple { n, p, q } => {
                let half = n / 2;
                for i in 0..*n {
                    for j in (i + 1)..*n {
                        if (i < half) == (j < half) {
                            edges.push((i, j, p - q));
                        }
                    }
                }
                Graph::new(*n, edges).expect("valid model weights")
            }
            PlantedModel::General { assignment, in_prob, q } => {
                let n = assignment.len();
                for i in 0..n {
                    for j in (i + 1)..n {
                        if assignment[i] == assignment[j] {
                            edges.push((i, j, in_prob[i][j] - q));
                        }
                    }
                }
                Graph::new(n, edges).expect("valid model weights")
            }
        }
    }
}

/// Expected cost of `t` under the planted model:
/// `q(n³−n)/3 + cost_H(t)` with H materialized explicitly.
pub fn expected_planted_cost(m: &PlantedModel, t: &ClusterTree) -> Result<f64, CostError> {
    let h = m.expected_graph();
    let n = h.n() as f64;
    let base = m.background() * (n * n * n - n) / 3.0;
    Ok(base + cost(&h, t)?.total)
}

/// `C(l, r) = (l³−l)/3 + (r³−r)/3`, the optimal cost over two disjoint
/// cliques of the given sizes.
pub fn two_clique_optimum(l: usize, r: usize) -> f64 {
    let cube = |k: usize| ((k as u128).pow(3) - k as u128) / 3;
    (cube(l) + cube(r)) as f64
}

/// Certified excess over `C(l, r)` for any tree on the two-clique graph
/// whose top split matches the given bipartition. Nodes `0..l` form the
/// left clique and `l..l+r` the right one.
pub fn excess_lower_bound(l: usize, r: usize, split: &Split) -> Result<f64, CostError> {
    if split.parts.len() != 2 {
        return Err(CostError::BadSplit(format!(
            "expected a bipartition, got {} parts",
            split.parts.len()
        )));
    }
    let all: Vec<usize> = (0..l + r).collect();
    if split.set != all {
        return Err(CostError::BadSplit("split must cover the whole node set".into()));
    }
    if split.parts.iter().any(|p| p.is_empty()) {
        return Err(CostError::BadSplit("parts must be nonempty".into()));
    }
    let count = |part: &[usize], lo: usize, hi: usize| {
        part.iter().filter(|&&x| lo <= x && x < hi).count() as f64
    };
    let (l1, l2) = (count(&split.parts[0], 0, l), count(&split.parts[1], 0, l));
    let (r1, r2) = (count(&split.parts[0], l, l + r), count(&split.parts[1], l, l + r));
    Ok(l1 * l2 * r as f64 + r1 * r2 * l as f64)
}

/// Scans for a split that nearly recovers the planted bipartition (L, R):
/// the parent set must retain at least a `(1−eps)` fraction of each side,
/// and one child must be almost clean of L while the other is almost clean
/// of R. Returns the first witness among binary splits in breadth-first
/// root-to-leaf order, or `None`.
pub fn epsilon_good(
    t: &ClusterTree,
    left: &[usize],
    right: &[usize],
    eps: f64,
) -> Result<Option<Split>, CostError> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(CostError::BadEpsilon(eps));
    }
    if left.len() != right.len() {
        return Err(CostError::SideSizeMismatch { left: left.len(), right: right.len() });
    }
    let mut side = std::collections::BTreeMap::new();
    for &x in left {
        if side.insert(x, true).is_some() {
            return Err(CostError::BadSplit(format!("node {} listed twice", x)));
        }
    }
    for &x in right {
        if side.insert(x, false).is_some() {
            return Err(CostError::BadSplit(format!("node {} listed twice", x)));
        }
    }
    if side.keys().copied().collect::<Vec<_>>() != t.leaf_ids() {
        return Err(CostError::LeafMismatch);
    }
    let half = left.len() as f64;
    let keep = (1.0 - eps) * half;
    let stray = eps * half;
    let in_left = |xs: &[usize]| xs.iter().filter(|x| side[x]).count() as f64;
    for split in t.splits() {
        if split.parts.len() != 2 {
            continue;
        }
        let set_l = in_left(&split.set);
        let set_r = split.set.len() as f64 - set_l;
        if set_l < keep || set_r < keep {
            continue;
        }
        let p1_l = in_left(&split.parts[0]);
        let p2_l = in_left(&split.parts[1]);
        let p1_r = split.parts[0].len() as f64 - p1_l;
        let p2_r = split.parts[1].len() as f64 - p2_l;
        if (p1_l <= stray && p2_r <= stray) || (p2_l <= stray && p1_r <= stray) {
            return Ok(Some(split));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complement;
    use crate::tree::enumerate_trees;

    fn k(n: usize) -> Graph {
        let pairs = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j)));
        Graph::unit(n, pairs).unwrap()
    }

    fn line(n: usize) -> Graph {
        Graph::unit(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1))).unwrap()
    }

    fn t(json: &str) -> ClusterTree {
        ClusterTree::from_json(json).unwrap()
    }

    #[test]
    fn clique_cost_is_tree_independent() {
        for tree in enumerate_trees(4).unwrap() {
            assert_eq!(cost(&k(4), &tree).unwrap().total, 20.0);
        }
    }

    #[test]
    fn line_balanced_tree() {
        let report = cost(&line(4), &t("[[0,1],[2,3]]")).unwrap();
        assert_eq!(report.total, 8.0);
        assert_eq!(report.split_total(), 8.0);
        assert_eq!(report.splits[0].cost, 4.0);
    }

    #[test]
    fn empty_graph_costs_zero() {
        let g = Graph::unit(5, Vec::new()).unwrap();
        assert_eq!(cost(&g, &t("[0,1,2,3,4]")).unwrap().total, 0.0);
    }

    #[test]
    fn leaf_mismatch_rejected() {
        assert_eq!(cost(&k(3), &t("[0,1]")).unwrap_err(), CostError::LeafMismatch);
        assert_eq!(cost(&k(2), &t("[1,2]")).unwrap_err(), CostError::LeafMismatch);
    }

    #[test]
    fn star_vs_binarized_on_k4() {
        let star = t("[0,1,2,3]");
        assert_eq!(cost(&k(4), &star).unwrap().total, 24.0);
        assert_eq!(cost(&k(4), &star.binarize()).unwrap().total, 20.0);
    }

    #[test]
    fn generalized_k4_identities() {
        let t1 = t("[[0,1],[2,3]]");
        let t2 = t("[[[0,1],2],3]");
        for f in [
            ScalingFunction::Log,
            ScalingFunction::power(2.0).unwrap(),
            ScalingFunction::power(0.5).unwrap(),
            ScalingFunction::table(vec![0.0, 1.0, 1.5, 1.8, 2.0]).unwrap(),
        ] {
            let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs();
            let c1 = generalized_cost(&k(4), &t1, &f).unwrap();
            let c2 = generalized_cost(&k(4), &t2, &f).unwrap();
            assert!(close(c1.total, 4.0 * f.eval(4) + 2.0 * f.eval(2)));
            assert!(close(c2.total, 3.0 * f.eval(4) + 2.0 * f.eval(3) + f.eval(2)));
            assert!(close(c1.split_total(), c1.total));
            assert!(close(c2.split_total(), c2.total));
        }
    }

    #[test]
    fn concavity_orders_the_k4_trees() {
        let t1 = t("[[0,1],[2,3]]");
        let t2 = t("[[[0,1],2],3]");
        let concave = generalized_cost(&k(4), &t1, &ScalingFunction::Log).unwrap().total;
        let concave2 = generalized_cost(&k(4), &t2, &ScalingFunction::Log).unwrap().total;
        assert!(concave <= concave2);
        let sq = ScalingFunction::power(2.0).unwrap();
        let convex = generalized_cost(&k(4), &t1, &sq).unwrap().total;
        let convex2 = generalized_cost(&k(4), &t2, &sq).unwrap().total;
        assert!(convex >= convex2);
    }

    #[test]
    fn linear_matches_plain_cost() {
        let g = Graph::new(4, vec![(0, 1, 0.7), (1, 2, 2.0), (0, 3, 1.25)]).unwrap();
        let tree = t("[[0,2],[1,3]]");
        assert_eq!(
            generalized_cost(&g, &tree, &ScalingFunction::Linear).unwrap(),
            cost(&g, &tree).unwrap()
        );
    }

    #[test]
    fn scaling_validation() {
        assert!(ScalingFunction::power(0.0).is_err());
        assert!(ScalingFunction::table(vec![0.0, 1.0, 1.0]).is_err());
        assert!(ScalingFunction::table(vec![0.5, 1.0]).is_err());
        let short = ScalingFunction::table(vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            generalized_cost(&k(3), &t("[0,1,2]"), &short),
            Err(CostError::BadScaling(_))
        ));
    }

    #[test]
    fn duality_on_a_fixture() {
        let g = Graph::unit(5, vec![(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        let gc = complement(&g, 1.0).unwrap();
        let expected = (125.0 - 5.0) / 3.0;
        for tree in [t("[[0,1],[[2,3],4]]"), t("[[[0,4],[1,2]],3]")] {
            let sum = cost(&g, &tree).unwrap().total + cost(&gc, &tree).unwrap().total;
            assert_eq!(sum, expected);
        }
    }

    #[test]
    fn simple_planted_expected_cost() {
        let m = PlantedModel::simple(4, 1.0, 0.5).unwrap();
        let tree = t("[[0,1],[2,3]]");
        assert_eq!(expected_planted_cost(&m, &tree).unwrap(), 12.0);
    }

    #[test]
    fn zero_background_reduces_to_h() {
        let m = PlantedModel::simple(4, 0.75, 0.0).unwrap();
        let tree = t("[[0,1],[2,3]]");
        // two disjoint 2-cliques of weight p, each split at size 2
        assert_eq!(expected_planted_cost(&m, &tree).unwrap(), 0.75 * 4.0);
    }

    #[test]
    fn general_model_validation_and_h() {
        let assignment = vec![0, 0, 1, 1, 1];
        let mut probs = vec![vec![0.9; 5]; 5];
        let m = PlantedModel::general(assignment.clone(), probs.clone(), 0.4).unwrap();
        let h = m.expected_graph();
        assert_eq!(h.num_edges(), 1 + 3);
        assert!((h.edge_weight(2, 4) - 0.5).abs() < 1e-12);
        probs[0][1] = 0.3;
        assert!(PlantedModel::general(assignment, probs, 0.4).is_err());
        assert!(PlantedModel::simple(5, 0.9, 0.1).is_err());
        assert!(PlantedModel::simple(4, 0.5, 0.5).is_err());
    }

    #[test]
    fn two_clique_values() {
        assert_eq!(two_clique_optimum(2, 2), 4.0);
        assert_eq!(two_clique_optimum(1, 1), 0.0);
        assert_eq!(two_clique_optimum(3, 0), 8.0);
        assert_eq!(two_clique_optimum(3, 3), 16.0);
    }

    #[test]
    fn excess_bound_values() {
        let laminar = Split { set: vec![0, 1, 2, 3], parts: vec![vec![0, 1], vec![2, 3]] };
        assert_eq!(excess_lower_bound(2, 2, &laminar).unwrap(), 0.0);
        let crossing = Split { set: vec![0, 1, 2, 3], parts: vec![vec![0, 2], vec![1, 3]] };
        assert_eq!(excess_lower_bound(2, 2, &crossing).unwrap(), 4.0);
        let bad = Split { set: vec![0, 1], parts: vec![vec![0, 1]] };
        assert!(excess_lower_bound(1, 1, &bad).is_err());
    }

    #[test]
    fn crossing_split_excess_is_certified() {
        // every tree on H(2,2) whose top split mixes the cliques costs >= 8
        let h = Graph::unit(4, vec![(0, 1), (2, 3)]).unwrap();
        let crossing = vec![vec![0, 2], vec![1, 3]];
        let mut min = f64::INFINITY;
        for tree in enumerate_trees(4).unwrap() {
            if tree.splits()[0].parts == crossing {
                min = min.min(cost(&h, &tree).unwrap().total);
            }
        }
        assert!(min >= two_clique_optimum(2, 2) + 4.0);
    }

    #[test]
    fn epsilon_good_witnesses() {
        let left = [0, 1];
        let right = [2, 3];
        let clean = t("[[0,1],[2,3]]");
        let witness = epsilon_good(&clean, &left, &right, 0.25).unwrap().unwrap();
        assert_eq!(witness.parts, vec![vec![0, 1], vec![2, 3]]);

        let mixed = t("[[0,2],[1,3]]");
        assert_eq!(epsilon_good(&mixed, &left, &right, 0.25).unwrap(), None);
        // at eps = 1 the conditions degenerate and the root qualifies
        assert!(epsilon_good(&mixed, &left, &right, 1.0).unwrap().is_some());

        assert!(matches!(
            epsilon_good(&clean, &[0], &[2, 3], 0.5),
            Err(CostError::SideSizeMismatch { .. })
        ));
        assert!(matches!(
            epsilon_good(&clean, &left, &right, 1.5),
            Err(CostError::BadEpsilon(_))
        ));
    }
}
