//! Canonical instance generators.
//!
//! All randomness flows through ChaCha8 seeded with a `u64`; independent
//! streams for trial `i` of a batch come from [`derive_seed`], so every
//! experiment is reproducible from one master seed on any platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::{CostError, PlantedModel};
use crate::graph::Graph;

/// Stream-splitting rule: SplitMix64 finalizer applied to
/// `master ^ (index · golden_gamma)`. Distinct indices give independent
/// ChaCha8 seeds.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Unit-weight path `0 - 1 - … - n−1`.
pub fn gen_line(n: usize) -> Graph {
    Graph::unit(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1))).expect("valid path")
}

/// Unit-weight complete graph.
pub fn gen_clique(n: usize) -> Graph {
    let pairs = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j)));
    Graph::unit(n, pairs).expect("valid clique")
}

/// Two disjoint unit cliques on `{0..l}` and `{l..l+r}`, plus the two
/// cluster label lists.
pub fn gen_two_cliques(l: usize, r: usize) -> (Graph, Vec<usize>, Vec<usize>) {
    let mut pairs = Vec::new();
    for i in 0..l {
        for j in (i + 1)..l {
            pairs.push((i, j));
        }
    }
    for i in l..l + r {
        for j in (i + 1)..l + r {
            pairs.push((i, j));
        }
    }
    let g = Graph::unit(l + r, pairs).expect("valid cliques");
    (g, (0..l).collect(), (l..l + r).collect())
}

/// Unit-weight Erdős–Rényi graph `G(n, p)`; utility for randomized
/// corpora.
pub fn gen_er(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(p) {
                pairs.push((i, j));
            }
        }
    }
    Graph::unit(n, pairs).expect("valid sample")
}

/// Sample from the two-cluster planted partition: pairs inside `L` or `R`
/// get an edge with probability `p`, pairs across with probability `q`.
/// Returns the graph and the ground-truth sides.
pub fn gen_planted(
    n: usize,
    p: f64,
    q: f64,
    seed: u64,
) -> Result<(Graph, Vec<usize>, Vec<usize>), CostError> {
    PlantedModel::simple(n, p, q)?;
    let half = n / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let prob = if (i < half) == (j < half) { p } else { q };
            if rng.gen_bool(prob) {
                pairs.push((i, j));
            }
        }
    }
    let g = Graph::unit(n, pairs).expect("valid sample");
    Ok((g, (0..half).collect(), (half..n).collect()))
}

/// Sample from the k-cluster planted model with independent edges:
/// same-cluster pair `(i, j)` appears with probability `in_prob(i, j)`,
/// cross pairs with the background `q`. Returns the graph and the cluster
/// assignment.
pub fn gen_general_planted(
    cluster_sizes: &[usize],
    in_prob: impl Fn(usize, usize) -> f64,
    q: f64,
    seed: u64,
) -> Result<(Graph, Vec<usize>), CostError> {
    let mut assignment = Vec::new();
    for (c, &size) in cluster_sizes.iter().enumerate() {
        assignment.extend(std::iter::repeat_n(c, size));
    }
    let n = assignment.len();
    let probs: Vec<Vec<f64>> =
        (0..n).map(|i| (0..n).map(|j| in_prob(i, j)).collect()).collect();
    PlantedModel::general(assignment.clone(), probs.clone(), q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let prob = if assignment[i] == assignment[j] { probs[i][j] } else { q };
            if rng.gen_bool(prob) {
                pairs.push((i, j));
            }
        }
    }
    let g = Graph::unit(n, pairs).expect("valid sample");
    Ok((g, assignment))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_shapes() {
        assert_eq!(gen_line(1).num_edges(), 0);
        let g = gen_line(4);
        assert_eq!(g.edges(), &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]);
    }

    #[test]
    fn clique_shapes() {
        assert_eq!(gen_clique(2).num_edges(), 1);
        assert_eq!(gen_clique(4).num_edges(), 6);
        assert!(gen_clique(5).is_unit_weight());
    }

    #[test]
    fn two_cliques_layout() {
        let (g, l, r) = gen_two_cliques(2, 2);
        assert_eq!(g.edges(), &[(0, 1, 1.0), (2, 3, 1.0)]);
        assert_eq!((l, r), (vec![0, 1], vec![2, 3]));
        let (g, _, r) = gen_two_cliques(4, 0);
        assert_eq!(g, gen_clique(4));
        assert!(r.is_empty());
    }

    #[test]
    fn planted_extremes_and_determinism() {
        let (g, l, r) = gen_planted(6, 1.0, 0.0, 42).unwrap();
        assert_eq!(g, gen_two_cliques(3, 3).0);
        assert_eq!((l, r), (vec![0, 1, 2], vec![3, 4, 5]));

        let (a, _, _) = gen_planted(10, 0.7, 0.2, 7).unwrap();
        let (b, _, _) = gen_planted(10, 0.7, 0.2, 7).unwrap();
        assert_eq!(a, b);
        let (c, _, _) = gen_planted(10, 0.7, 0.2, 8).unwrap();
        assert_ne!(a, c);

        assert!(gen_planted(5, 0.8, 0.1, 0).is_err());
        assert!(gen_planted(6, 0.5, 0.5, 0).is_err());
    }

    #[test]
    fn general_planted_reduces_to_simple() {
        let (g, assignment) = gen_general_planted(&[3, 3], |_, _| 1.0, 0.0, 5).unwrap();
        assert_eq!(assignment, vec![0, 0, 0, 1, 1, 1]);
        assert_eq!(g, gen_two_cliques(3, 3).0);
        assert_eq!(g.components().len(), 2);

        assert!(gen_general_planted(&[2, 2], |_, _| 0.3, 0.4, 5).is_err());
    }

    #[test]
    fn derived_seeds_split_streams() {
        assert_eq!(derive_seed(99, 0), derive_seed(99, 0));
        assert_ne!(derive_seed(99, 0), derive_seed(99, 1));
        assert_ne!(derive_seed(98, 3), derive_seed(99, 3));
        let (a, _, _) = gen_planted(8, 0.6, 0.3, derive_seed(1, 0)).unwrap();
        let (b, _, _) = gen_planted(8, 0.6, 0.3, derive_seed(1, 1)).unwrap();
        assert_ne!(a, b);
    }
}
