//! Hierarchical clustering of similarity graphs by cost minimization.
//!
//! A cluster tree over a weighted graph pays, for every edge, the edge's
//! weight times the size of the smallest subtree containing both
//! endpoints; good trees therefore push tightly connected nodes together
//! far down. This crate provides the graph and tree containers, cost
//! evaluation in its equivalent forms, exact and spectral cut solvers, the
//! greedy top-down clusterer with its approximation guarantees testable at
//! small scale, exhaustive oracles, planted-partition experiment drivers,
//! and the NAE-SAT hardness reduction with its cost threshold.

pub mod cluster;
pub mod cost;
pub mod cuts;
pub mod graph;
pub mod instances;
pub mod reduction;
pub mod tree;

pub use cluster::{
    approximation_experiment, generalized_constant, linkage, make_tree, make_tree_generalized,
    max_tree_bruteforce, optimal_line_tree, optimal_tree_bruteforce, planted_experiment, BuiltTree,
    ClusterError, LinkageMethod, PlantedExperiment, RatioRow, TrialRow,
};
pub use cost::{
    cost, edge_sum_cost, epsilon_good, excess_lower_bound, expected_planted_cost, generalized_cost,
    two_clique_optimum, CostError, CostReport, PlantedModel, ScalingFunction, SplitCost,
};
pub use cuts::{
    balanced_f_cut, fiedler_vector, sparsest_cut_exact, sparsest_cut_heuristic, Cut, CutError,
    CutMode, EXACT_CUT_CAP,
};
pub use graph::{complement, induced_subgraph, load_graph, Graph, GraphError};
pub use instances::{
    derive_seed, gen_clique, gen_er, gen_general_planted, gen_line, gen_planted, gen_two_cliques,
};
pub use reduction::{
    assignment_to_tree, from_naesat, nae_satisfied, naesat_brute, parse_dimacs, reduce_to_graph,
    remove_redundancies, validate_naestar, CnfInstance, PatternReport, Reduction, ReductionError,
    SAT_BRUTE_CAP,
};
pub use tree::{enumerate_trees, num_binary_trees, ClusterTree, Nested, Split, TreeError};
