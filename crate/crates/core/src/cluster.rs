//! Tree-construction algorithms and experiment drivers.
//!
//! The workhorse is the greedy top-down recursion: split by a sparsest (or
//! balanced) cut, recurse on both sides. Exhaustive oracles minimize or
//! maximize over every binary tree for small n, the line graph gets an
//! interval DP, and agglomerative linkage provides baselines. Experiment
//! drivers sample planted partitions or random corpora and tabulate costs
//! against the oracles.

use rayon::prelude::*;
use thiserror::Error;

use crate::cost::{cost, edge_sum_cost, epsilon_good, CostError, ScalingFunction};
use crate::cuts::{
    balanced_f_cut, sparsest_cut_exact, sparsest_cut_heuristic, Cut, CutError, CutMode,
    EXACT_CUT_CAP,
};
use crate::graph::{induced_subgraph, Graph, GraphError};
use crate::instances::{derive_seed, gen_er, gen_planted};
use crate::tree::{enumerate_trees, ClusterTree, TreeError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClusterError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error(transparent)]
    Cut(#[from] CutError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("experiment requires the simple planted model")]
    NotSimple,
}

/// A greedy tree plus provenance: which solver was requested, the seed,
/// and whether every split was solved exactly. `certified` is false as
/// soon as one subproblem exceeded the exact cap and fell back to the
/// heuristic, since the approximation guarantee only covers exact cuts.
#[derive(Debug, Clone, PartialEq)]
pub struct BuiltTree {
    pub tree: ClusterTree,
    pub requested: CutMode,
    pub seed: u64,
    pub certified: bool,
}

enum SplitRule<'a> {
    Sparsest,
    Balanced(&'a ScalingFunction),
}

fn greedy_split(
    g: &Graph,
    rule: &SplitRule,
    mode: CutMode,
    seed: u64,
    certified: &mut bool,
) -> Result<Cut, CutError> {
    let effective = if mode == CutMode::Exact && g.n() > EXACT_CUT_CAP {
        *certified = false;
        CutMode::Heuristic
    } else {
        mode
    };
    match rule {
        SplitRule::Sparsest => match effective {
            CutMode::Exact => sparsest_cut_exact(g),
            CutMode::Heuristic => sparsest_cut_heuristic(g, seed),
        },
        SplitRule::Balanced(f) => balanced_f_cut(g, f, effective, seed),
    }
}

fn greedy_build(
    g: &Graph,
    ids: &[usize],
    rule: &SplitRule,
    mode: CutMode,
    master: u64,
    counter: &mut u64,
    certified: &mut bool,
) -> Result<ClusterTree, ClusterError> {
    if ids.len() == 1 {
        return Ok(ClusterTree::leaf(ids[0]));
    }
    let seed = derive_seed(master, *counter);
    *counter += 1;
    let cut = greedy_split(g, rule, mode, seed, certified)?;
    let mut subtrees = Vec::new();
    for side in [&cut.side_a, &cut.side_b] {
        let original: Vec<usize> = side.iter().map(|&i| ids[i]).collect();
        let (sub, _) = induced_subgraph(g, side)?;
        subtrees.push(greedy_build(&sub, &original, rule, mode, master, counter, certified)?);
    }
    Ok(ClusterTree::join(subtrees)?)
}

fn greedy_tree(
    g: &Graph,
    rule: SplitRule,
    mode: CutMode,
    seed: u64,
) -> Result<BuiltTree, ClusterError> {
    let ids: Vec<usize> = (0..g.n()).collect();
    let mut certified = mode == CutMode::Exact;
    let mut counter = 0;
    let tree = greedy_build(g, &ids, &rule, mode, seed, &mut counter, &mut certified)?;
    Ok(BuiltTree { tree, requested: mode, seed, certified })
}

/// Greedy top-down recursion on sparsest cuts. Singleton input yields a
/// leaf; otherwise the chosen solver splits and both sides recurse, so the
/// output is always binary. When `Exact` is requested but a subproblem
/// exceeds [`EXACT_CUT_CAP`], that split silently uses the heuristic and
/// the result is marked uncertified.
pub fn make_tree(g: &Graph, mode: CutMode, seed: u64) -> Result<BuiltTree, ClusterError> {
    greedy_tree(g, SplitRule::Sparsest, mode, seed)
}

/// Greedy recursion on the balanced scaled cut instead of the sparsest
/// cut; the variant matching the generalized cost objective.
pub fn make_tree_generalized(
    g: &Graph,
    f: &ScalingFunction,
    mode: CutMode,
    seed: u64,
) -> Result<BuiltTree, ClusterError> {
    greedy_tree(g, SplitRule::Balanced(f), mode, seed)
}

/// Minimizes (generalized) cost over every binary tree; first minimizer
/// in the canonical enumeration order wins ties.
pub fn optimal_tree_bruteforce(
    g: &Graph,
    f: Option<&ScalingFunction>,
) -> Result<(ClusterTree, f64), ClusterError> {
    let mut best: Option<(ClusterTree, f64)> = None;
    for tree in enumerate_trees(g.n())? {
        let c = edge_sum_cost(g, &tree, f)?;
        if best.as_ref().is_none_or(|(_, b)| c < *b) {
            best = Some((tree, c));
        }
    }
    Ok(best.expect("enumeration yields at least one tree"))
}

/// Maximizes cost over every binary tree; first maximizer in canonical
/// order wins. On unit-weight input this is the complement-duality partner
/// of [`optimal_tree_bruteforce`].
pub fn max_tree_bruteforce(g: &Graph) -> Result<(ClusterTree, f64), ClusterError> {
    let mut best: Option<(ClusterTree, f64)> = None;
    for tree in enumerate_trees(g.n())? {
        let c = edge_sum_cost(g, &tree, None)?;
        if best.as_ref().is_none_or(|(_, b)| c > *b) {
            best = Some((tree, c));
        }
    }
    Ok(best.expect("enumeration yields at least one tree"))
}

/// Optimal tree for the unit-weight path on `n` nodes by interval DP over
/// contiguous segments. Each split of a segment costs its length (one unit
/// edge crossed), so the DP realizes `C(len) = len + min_j C(j) + C(len−j)`
/// with ties going to the smallest `j`.
pub fn optimal_line_tree(n: usize) -> Result<(ClusterTree, f64), ClusterError> {
    if n == 0 {
        return Err(TreeError::Empty.into());
    }
    let mut best = vec![0u64; n + 1];
    let mut split = vec![0usize; n + 1];
    for len in 2..=n {
        let (j, c) = (1..len)
            .map(|j| (j, best[j] + best[len - j]))
            .min_by_key(|&(_, c)| c)
            .expect("len >= 2");
        best[len] = len as u64 + c;
        split[len] = j;
    }
    fn build(lo: usize, len: usize, split: &[usize]) -> ClusterTree {
        if len == 1 {
            return ClusterTree::leaf(lo);
        }
        let j = split[len];
        ClusterTree::join(vec![build(lo, j, split), build(lo + j, len - j, split)])
            .expect("disjoint segments")
    }
    Ok((build(0, n, &split), best[n] as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkageMethod {
    Single,
    Average,
    Complete,
}

impl LinkageMethod {
    pub fn name(self) -> &'static str {
        match self {
            LinkageMethod::Single => "single",
            LinkageMethod::Average => "average",
            LinkageMethod::Complete => "complete",
        }
    }
}

/// Agglomerative linkage on similarities: repeatedly merge the pair of
/// clusters with the highest inter-cluster similarity (max over cross
/// pairs for single, mean for average, min for complete; absent edges
/// count 0). Ties go to the smallest pair of cluster representatives.
pub fn linkage(g: &Graph, method: LinkageMethod) -> Result<ClusterTree, ClusterError> {
    if g.n() == 0 {
        return Err(TreeError::Empty.into());
    }
    struct Cluster {
        rep: usize,
        members: Vec<usize>,
        tree: ClusterTree,
    }
    let mut clusters: Vec<Cluster> = (0..g.n())
        .map(|i| Cluster { rep: i, members: vec![i], tree: ClusterTree::leaf(i) })
        .collect();
    let sim = |a: &Cluster, b: &Cluster| -> f64 {
        let mut acc = match method {
            LinkageMethod::Single => f64::NEG_INFINITY,
            LinkageMethod::Complete => f64::INFINITY,
            LinkageMethod::Average => 0.0,
        };
        for &x in &a.members {
            for &y in &b.members {
                let w = g.edge_weight(x, y);
                match method {
                    LinkageMethod::Single => acc = acc.max(w),
                    LinkageMethod::Complete => acc = acc.min(w),
                    LinkageMethod::Average => acc += w,
                }
            }
        }
        if method == LinkageMethod::Average {
            acc /= (a.members.len() * b.members.len()) as f64;
        }
        acc
    };
    while clusters.len() > 1 {
        let mut pick = (0, 1);
        let mut pick_sim = f64::NEG_INFINITY;
        for i in 0..clusters.len() {
            for j in (i + 1)..clusters.len() {
                let s = sim(&clusters[i], &clusters[j]);
                let key = (clusters[i].rep.min(clusters[j].rep), clusters[i].rep.max(clusters[j].rep));
                let pick_key =
                    (clusters[pick.0].rep.min(clusters[pick.1].rep), clusters[pick.0].rep.max(clusters[pick.1].rep));
                if s > pick_sim || (s == pick_sim && key < pick_key) {
                    pick = (i, j);
                    pick_sim = s;
                }
            }
        }
        let b = clusters.swap_remove(pick.1);
        let a = clusters.swap_remove(pick.0);
        let mut members = a.members;
        members.extend(b.members);
        clusters.push(Cluster {
            rep: a.rep.min(b.rep),
            members,
            tree: ClusterTree::join(vec![a.tree, b.tree])?,
        });
    }
    Ok(clusters.pop().expect("one cluster remains").tree)
}

/// One method's result on one sampled graph.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRow {
    pub trial: usize,
    pub method: &'static str,
    pub cost: f64,
    pub optimal_cost: Option<f64>,
    pub ratio: Option<f64>,
    pub eps_good: bool,
}

/// Planted-partition experiment output: per-trial rows plus the aggregate
/// rates the acceptance gates read.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedExperiment {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub eps: f64,
    pub trials: usize,
    pub seed: u64,
    pub rows: Vec<TrialRow>,
    pub greedy_eps_good_rate: f64,
    pub optimal_eps_good_rate: Option<f64>,
    pub max_ratio: Option<f64>,
}

/// Samples `trials` planted graphs, clusters each greedily (exact cuts up
/// to the cap, heuristic beyond), brute-forces the optimum when n ≤ 8, and
/// tabulates costs and near-recovery of the planted sides. Trials run in
/// parallel on independent derived streams; output is a pure function of
/// the arguments.
pub fn planted_experiment(
    n: usize,
    p: f64,
    q: f64,
    trials: usize,
    eps: f64,
    seed: u64,
) -> Result<PlantedExperiment, ClusterError> {
    let mode = if n <= EXACT_CUT_CAP { CutMode::Exact } else { CutMode::Heuristic };
    let per_trial: Vec<Vec<TrialRow>> = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<Vec<TrialRow>, ClusterError> {
            let trial_seed = derive_seed(seed, trial as u64);
            let (g, left, right) = gen_planted(n, p, q, trial_seed)?;
            let built = make_tree(&g, mode, derive_seed(trial_seed, 1))?;
            let greedy_cost = cost(&g, &built.tree)?.total;
            let mut rows = Vec::new();
            if n <= 8 {
                let (opt_tree, opt_cost) = optimal_tree_bruteforce(&g, None)?;
                rows.push(TrialRow {
                    trial,
                    method: "greedy",
                    cost: greedy_cost,
                    optimal_cost: Some(opt_cost),
                    ratio: (opt_cost > 0.0).then(|| greedy_cost / opt_cost),
                    eps_good: epsilon_good(&built.tree, &left, &right, eps)?.is_some(),
                });
                rows.push(TrialRow {
                    trial,
                    method: "optimal",
                    cost: opt_cost,
                    optimal_cost: Some(opt_cost),
                    ratio: (opt_cost > 0.0).then_some(1.0),
                    eps_good: epsilon_good(&opt_tree, &left, &right, eps)?.is_some(),
                });
            } else {
                rows.push(TrialRow {
                    trial,
                    method: "greedy",
                    cost: greedy_cost,
                    optimal_cost: None,
                    ratio: None,
                    eps_good: epsilon_good(&built.tree, &left, &right, eps)?.is_some(),
                });
            }
            Ok(rows)
        })
        .collect::<Result<_, _>>()?;
    let rows: Vec<TrialRow> = per_trial.into_iter().flatten().collect();
    let rate = |method: &str| {
        let picked: Vec<&TrialRow> = rows.iter().filter(|r| r.method == method).collect();
        if picked.is_empty() {
            None
        } else {
            Some(picked.iter().filter(|r| r.eps_good).count() as f64 / picked.len() as f64)
        }
    };
    let max_ratio = rows.iter().filter_map(|r| r.ratio).fold(None, |m: Option<f64>, r| {
        Some(m.map_or(r, |m| m.max(r)))
    });
    Ok(PlantedExperiment {
        n,
        p,
        q,
        eps,
        trials,
        seed,
        greedy_eps_good_rate: rate("greedy").unwrap_or(0.0),
        optimal_eps_good_rate: rate("optimal"),
        max_ratio,
        rows,
    })
}

/// One corpus instance's greedy-vs-optimal comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    pub idx: usize,
    pub n: usize,
    pub greedy_cost: f64,
    pub optimal_cost: f64,
    pub ratio: f64,
    pub bound: f64,
}

/// `3 · max_{n′ ≤ n} f(n′) / f(⌈n′/3⌉)`, the constant in the generalized
/// guarantee.
pub fn generalized_constant(f: &ScalingFunction, n: usize) -> Result<f64, CostError> {
    f.check_domain(n)?;
    let worst = (1..=n)
        .map(|m| f.eval(m) / f.eval(m.div_ceil(3)))
        .fold(0.0, f64::max);
    Ok(3.0 * worst)
}

/// Runs greedy (exact cuts) against the brute-force optimum on `count`
/// random connected unit-weight graphs with 2 ≤ n ≤ max_n, recording each
/// ratio next to its guarantee. Plain cost when `f` is `None`, otherwise
/// the generalized cost and solver.
pub fn approximation_experiment(
    count: usize,
    max_n: usize,
    edge_prob: f64,
    seed: u64,
    f: Option<&ScalingFunction>,
) -> Result<Vec<RatioRow>, ClusterError> {
    (0..count)
        .into_par_iter()
        .map(|idx| -> Result<RatioRow, ClusterError> {
            let base = derive_seed(seed, idx as u64);
            let n = 2 + (derive_seed(base, 0) % (max_n as u64 - 1)) as usize;
            let mut attempt = 1;
            let g = loop {
                let g = gen_er(n, edge_prob, derive_seed(base, attempt));
                if g.is_connected() {
                    break g;
                }
                attempt += 1;
            };
            let built = match f {
                None => make_tree(&g, CutMode::Exact, base)?,
                Some(f) => make_tree_generalized(&g, f, CutMode::Exact, base)?,
            };
            let greedy_cost = edge_sum_cost(&g, &built.tree, f)?;
            let (_, optimal_cost) = optimal_tree_bruteforce(&g, f)?;
            let constant = match f {
                None => 27.0 / 4.0,
                Some(f) => generalized_constant(f, n)?,
            };
            Ok(RatioRow {
                idx,
                n,
                greedy_cost,
                optimal_cost,
                ratio: greedy_cost / optimal_cost,
                bound: constant * (n as f64).ln(),
            })
        })
        .collect()
}
