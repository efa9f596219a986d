//! NAE-SAT machinery: the restricted clause form, its validation and
//! rewriting, the weighted-graph reduction with its cost threshold M, and
//! the two-level witness tree whose cost meets M exactly.
//!
//! Literals are signed 1-based variable ids (`3` is x3, `-3` its
//! negation). A clause is satisfied in the not-all-equal sense when its
//! literals take at least one true and one false value. The restricted
//! form used by the reduction requires every variable to occur exactly
//! once in a 3-clause and twice, with opposite polarities, in 2-clauses;
//! [`reduce_to_graph`] additionally refuses instances that still carry a
//! removable redundancy, because redundancies are what create duplicate
//! edges in the gadget.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::tree::{ClusterTree, TreeError};

/// Largest variable count the brute-force assignment search accepts.
pub const SAT_BRUTE_CAP: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReductionError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("literal {lit} outside 1..={num_vars}")]
    BadLiteral { lit: i32, num_vars: usize },
    #[error("clause has {0} literals, need 2 or 3")]
    BadClauseSize(usize),
    #[error("input clause has {0} literals, need exactly 3")]
    NotThreeClause(usize),
    #[error("formula violates the occurrence pattern: {}", .0.join("; "))]
    NotRestricted(Vec<String>),
    #[error("formula still contains removable redundancies")]
    NotReduced,
    #[error("assignment covers {got} variables, formula has {want}")]
    AssignmentLength { got: usize, want: usize },
    #[error("assignment does not NAE-satisfy the formula")]
    NotNaeSatisfying,
    #[error("{n} variables exceed the brute-force cap {cap}")]
    OverCap { n: usize, cap: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// CNF with clause sizes restricted to 2 and 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfInstance {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfInstance {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self, ReductionError> {
        for clause in &clauses {
            if clause.len() != 2 && clause.len() != 3 {
                return Err(ReductionError::BadClauseSize(clause.len()));
            }
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > num_vars {
                    return Err(ReductionError::BadLiteral { lit, num_vars });
                }
            }
        }
        Ok(CnfInstance { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// (3-clause count m, 2-clause count m′).
    pub fn clause_counts(&self) -> (usize, usize) {
        let m = self.clauses.iter().filter(|c| c.len() == 3).count();
        (m, self.clauses.len() - m)
    }
}

fn lit_value(lit: i32, a: &[bool]) -> bool {
    let v = a[(lit.unsigned_abs() - 1) as usize];
    if lit > 0 {
        v
    } else {
        !v
    }
}

/// Not-all-equal satisfaction: some literal true, some literal false.
pub fn nae_satisfied(clause: &[i32], a: &[bool]) -> bool {
    clause.iter().any(|&l| lit_value(l, a)) && clause.iter().any(|&l| !lit_value(l, a))
}

/// Outcome of the occurrence-pattern check, with one message per
/// offending variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternReport {
    pub valid: bool,
    pub violations: Vec<String>,
}

/// Checks that every variable occurs exactly once in a 3-clause and twice,
/// with opposite polarities, in 2-clauses.
pub fn validate_naestar(phi: &CnfInstance) -> PatternReport {
    let n = phi.num_vars;
    let mut in3 = vec![0usize; n];
    let mut pos2 = vec![0usize; n];
    let mut neg2 = vec![0usize; n];
    for clause in &phi.clauses {
        for &lit in clause {
            let v = (lit.unsigned_abs() - 1) as usize;
            if clause.len() == 3 {
                in3[v] += 1;
            } else if lit > 0 {
                pos2[v] += 1;
            } else {
                neg2[v] += 1;
            }
        }
    }
    let mut violations = Vec::new();
    for v in 0..n {
        if in3[v] != 1 || pos2[v] != 1 || neg2[v] != 1 {
            violations.push(format!(
                "x{}: {} occurrences in 3-clauses (want 1), {} positive and {} negative in 2-clauses (want 1 and 1)",
                v + 1,
                in3[v],
                pos2[v],
                neg2[v]
            ));
        }
    }
    PatternReport { valid: violations.is_empty(), violations }
}

/// Rewrites a pure 3-clause formula into the restricted form: clauses
/// whose variables occur only once are discarded (repeatedly), then each
/// variable's k occurrences become k fresh copies tied together by an
/// implication cycle of 2-clauses. NAE-satisfiability is preserved in both
/// directions.
pub fn from_naesat(phi3: &CnfInstance) -> Result<CnfInstance, ReductionError> {
    for clause in &phi3.clauses {
        if clause.len() != 3 {
            return Err(ReductionError::NotThreeClause(clause.len()));
        }
    }
    let mut clauses = phi3.clauses.clone();
    loop {
        let mut count = vec![0usize; phi3.num_vars];
        for clause in &clauses {
            for &lit in clause {
                count[(lit.unsigned_abs() - 1) as usize] += 1;
            }
        }
        let before = clauses.len();
        clauses.retain(|clause| {
            clause.iter().all(|&lit| count[(lit.unsigned_abs() - 1) as usize] >= 2)
        });
        if clauses.len() == before {
            break;
        }
    }
    let mut copies: Vec<Vec<i32>> = vec![Vec::new(); phi3.num_vars];
    let mut next = 1i32;
    let mut rewritten = Vec::new();
    for clause in &clauses {
        let mut fresh = Vec::new();
        for &lit in clause {
            let v = (lit.unsigned_abs() - 1) as usize;
            copies[v].push(next);
            fresh.push(if lit > 0 { next } else { -next });
            next += 1;
        }
        rewritten.push(fresh);
    }
    for cycle in &copies {
        for (i, &a) in cycle.iter().enumerate() {
            let b = cycle[(i + 1) % cycle.len()];
            rewritten.push(vec![-a, b]);
        }
    }
    CnfInstance::new((next - 1) as usize, rewritten)
}

fn lit_set(clause: &[i32]) -> BTreeSet<i32> {
    clause.iter().copied().collect()
}

/// Applies the four redundancy rules to a fixpoint: drop clauses holding a
/// literal and its negation; drop a 2-clause whose full polarity reversal
/// already occurred; drop 3-clauses containing some 2-clause's literal
/// pair, as-is or fully reversed. NAE-satisfiability is unchanged.
pub fn remove_redundancies(phi: &CnfInstance) -> CnfInstance {
    let mut clauses = phi.clauses.clone();
    loop {
        let mut next: Vec<Vec<i32>> = Vec::new();
        let mut kept_two: Vec<BTreeSet<i32>> = Vec::new();
        for clause in &clauses {
            let set = lit_set(clause);
            if set.iter().any(|&l| set.contains(&-l)) {
                continue;
            }
            if clause.len() == 2 {
                let reversed: BTreeSet<i32> = set.iter().map(|&l| -l).collect();
                if kept_two.contains(&reversed) {
                    continue;
                }
                kept_two.push(set);
                next.push(clause.clone());
            } else {
                next.push(clause.clone());
            }
        }
        let two_sets: Vec<BTreeSet<i32>> = next
            .iter()
            .filter(|c| c.len() == 2)
            .map(|c| lit_set(c))
            .collect();
        next.retain(|clause| {
            if clause.len() != 3 {
                return true;
            }
            let set = lit_set(clause);
            !two_sets.iter().any(|pair| {
                pair.iter().all(|l| set.contains(l)) || pair.iter().all(|l| set.contains(&-l))
            })
        });
        if next == clauses {
            break;
        }
        clauses = next;
    }
    CnfInstance { num_vars: phi.num_vars, clauses }
}

/// The weighted gadget graph plus its thresholds and literal layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub graph: Graph,
    /// Cost threshold: trees reach it iff the formula is NAE-satisfiable.
    pub m_threshold: u64,
    /// Weight of each variable's literal-pair edge.
    pub w: u64,
    /// (literal, node id), ordered by node id.
    pub literal_nodes: Vec<(i32, usize)>,
}

impl Reduction {
    pub fn node_of(&self, lit: i32) -> usize {
        let v = (lit.unsigned_abs() - 1) as usize;
        2 * v + if lit > 0 { 0 } else { 1 }
    }
}

/// Builds the reduction graph on 2n literal nodes: per 3-clause a triangle
/// on its literals and another on their negations, per 2-clause the edge
/// on its literals and the edge on their negations (all weight 1), and per
/// variable the edge {x, ¬x} of weight W = 2nm+1. Returns the threshold
/// M = 10nm + 4nm′ + 2n²W. The formula must pass [`validate_naestar`] and
/// be a [`remove_redundancies`] fixpoint, which makes all 6m + 2m′ + n
/// edges distinct.
pub fn reduce_to_graph(phi: &CnfInstance) -> Result<Reduction, ReductionError> {
    let report = validate_naestar(phi);
    if !report.valid {
        return Err(ReductionError::NotRestricted(report.violations));
    }
    if remove_redundancies(phi) != *phi {
        return Err(ReductionError::NotReduced);
    }
    let n = phi.num_vars as u64;
    let (m, m_prime) = phi.clause_counts();
    let (m, m_prime) = (m as u64, m_prime as u64);
    let w = 2 * n * m + 1;
    let m_threshold = 10 * n * m + 4 * n * m_prime + 2 * n * n * w;

    let node = |lit: i32| -> usize {
        let v = (lit.unsigned_abs() - 1) as usize;
        2 * v + if lit > 0 { 0 } else { 1 }
    };
    let mut edges = Vec::new();
    for v in 1..=phi.num_vars as i32 {
        edges.push((node(v), node(-v), w as f64));
    }
    for clause in &phi.clauses {
        if clause.len() == 3 {
            for i in 0..3 {
                for j in (i + 1)..3 {
                    edges.push((node(clause[i]), node(clause[j]), 1.0));
                    edges.push((node(-clause[i]), node(-clause[j]), 1.0));
                }
            }
        } else {
            edges.push((node(clause[0]), node(clause[1]), 1.0));
            edges.push((node(-clause[0]), node(-clause[1]), 1.0));
        }
    }
    let graph = Graph::new(2 * phi.num_vars, edges)?;
    let literal_nodes = (1..=phi.num_vars as i32)
        .flat_map(|v| [(v, node(v)), (-v, node(-v))])
        .collect();
    Ok(Reduction { graph, m_threshold, w, literal_nodes })
}

fn chain(ids: &[usize]) -> ClusterTree {
    let mut tree = ClusterTree::leaf(ids[0]);
    for &id in &ids[1..] {
        tree = ClusterTree::join(vec![tree, ClusterTree::leaf(id)]).expect("distinct leaves");
    }
    tree
}

/// The two-level witness tree for a NAE-satisfying assignment: the root
/// separates true literals from false ones, then each side makes the one
/// split that cuts its surviving triangle edges; anything deeper is an
/// arbitrary chain over edge-free sets. Its cost on the reduction graph is
/// exactly the threshold M.
pub fn assignment_to_tree(phi: &CnfInstance, a: &[bool]) -> Result<ClusterTree, ReductionError> {
    if phi.num_vars == 0 {
        return Err(ReductionError::Tree(TreeError::Empty));
    }
    let red = reduce_to_graph(phi)?;
    if a.len() != phi.num_vars {
        return Err(ReductionError::AssignmentLength { got: a.len(), want: phi.num_vars });
    }
    if !phi.clauses.iter().all(|c| nae_satisfied(c, a)) {
        return Err(ReductionError::NotNaeSatisfying);
    }
    let side_tree = |truth: bool| -> ClusterTree {
        let side: Vec<usize> = (1..=phi.num_vars as i32)
            .map(|v| red.node_of(if a[(v - 1) as usize] == truth { v } else { -v }))
            .collect();
        let inside: Vec<(usize, usize)> = red
            .graph
            .edges()
            .iter()
            .filter(|(u, v, _)| side.contains(u) && side.contains(v))
            .map(|&(u, v, _)| (u, v))
            .collect();
        if inside.is_empty() {
            return chain(&side);
        }
        let cut_high: BTreeSet<usize> = inside.iter().map(|&(_, v)| v).collect();
        let low: Vec<usize> = side.iter().copied().filter(|x| !cut_high.contains(x)).collect();
        let high: Vec<usize> = cut_high.into_iter().collect();
        ClusterTree::join(vec![chain(&low), chain(&high)]).expect("sides are disjoint")
    };
    let (pos, neg) = (side_tree(true), side_tree(false));
    Ok(ClusterTree::join(vec![pos, neg])?)
}

/// First NAE-satisfying assignment in lexicographic order (false before
/// true, x1 most significant), or `None`.
pub fn naesat_brute(phi: &CnfInstance) -> Result<Option<Vec<bool>>, ReductionError> {
    let n = phi.num_vars;
    if n > SAT_BRUTE_CAP {
        return Err(ReductionError::OverCap { n, cap: SAT_BRUTE_CAP });
    }
    let mut a = vec![false; n];
    for mask in 0u64..1 << n {
        for (i, bit) in a.iter_mut().enumerate() {
            *bit = mask >> (n - 1 - i) & 1 == 1;
        }
        if phi.clauses.iter().all(|c| nae_satisfied(c, &a)) {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

/// Parses DIMACS CNF: `c` comment lines, a `p cnf <vars> <clauses>`
/// header, then whitespace-separated literals with `0` ending each clause.
pub fn parse_dimacs(text: &str) -> Result<CnfInstance, ReductionError> {
    let err = |line: usize, msg: String| ReductionError::Parse { line, msg };
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(err(line, "duplicate header".into()));
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 4 || fields[1] != "cnf" {
                return Err(err(line, "expected 'p cnf <vars> <clauses>'".into()));
            }
            let vars = fields[2]
                .parse()
                .map_err(|_| err(line, format!("invalid variable count '{}'", fields[2])))?;
            let count = fields[3]
                .parse()
                .map_err(|_| err(line, format!("invalid clause count '{}'", fields[3])))?;
            header = Some((vars, count));
            continue;
        }
        if header.is_none() {
            return Err(err(line, "clause data before header".into()));
        }
        for token in trimmed.split_whitespace() {
            let lit: i32 = token
                .parse()
                .map_err(|_| err(line, format!("invalid literal '{}'", token)))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
    }
    let Some((vars, count)) = header else {
        return Err(err(last_line.max(1), "missing 'p cnf' header".into()));
    };
    if !current.is_empty() {
        return Err(err(last_line, "unterminated clause".into()));
    }
    if clauses.len() != count {
        return Err(err(
            last_line.max(1),
            format!("header promises {} clauses, found {}", count, clauses.len()),
        ));
    }
    CnfInstance::new(vars, clauses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::cost;

    fn cnf(n: usize, clauses: &[&[i32]]) -> CnfInstance {
        CnfInstance::new(n, clauses.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    fn cycle_fixture() -> CnfInstance {
        cnf(3, &[&[1, 2, 3], &[-1, 2], &[-2, 3], &[-3, 1]])
    }

    // two 3-clauses tied by a 6-cycle of 2-clauses across them; satisfiable
    fn cross_cycle_fixture() -> CnfInstance {
        cnf(
            6,
            &[
                &[1, 2, -3],
                &[4, 5, -6],
                &[-1, 4],
                &[-4, 2],
                &[-2, 5],
                &[-5, 3],
                &[-3, 6],
                &[-6, 1],
            ],
        )
    }

    #[test]
    fn pattern_validation() {
        assert!(validate_naestar(&cycle_fixture()).valid);
        let bad = cnf(3, &[&[1, 2, 3], &[1, 2], &[-2, 3], &[-3, 1], &[1, -2]]);
        let report = validate_naestar(&bad);
        assert!(!report.valid);
        assert!(report.violations.iter().any(|v| v.starts_with("x1")));
        assert!(validate_naestar(&cnf(0, &[])).valid);
        let unused = cnf(4, &[&[1, 2, 3], &[-1, 2], &[-2, 3], &[-3, 1]]);
        assert!(validate_naestar(&unused).violations.iter().any(|v| v.starts_with("x4")));
    }

    #[test]
    fn instance_validation() {
        assert!(matches!(
            CnfInstance::new(2, vec![vec![1]]),
            Err(ReductionError::BadClauseSize(1))
        ));
        assert!(matches!(
            CnfInstance::new(2, vec![vec![1, 3]]),
            Err(ReductionError::BadLiteral { lit: 3, .. })
        ));
        assert!(matches!(
            CnfInstance::new(2, vec![vec![1, 0, 2]]),
            Err(ReductionError::BadLiteral { lit: 0, .. })
        ));
    }

    #[test]
    fn rewrite_makes_copies_and_cycles() {
        let phi3 = cnf(3, &[&[1, 2, 3], &[-1, -2, -3]]);
        let out = from_naesat(&phi3).unwrap();
        assert_eq!(out.num_vars(), 6);
        let (m, m2) = out.clause_counts();
        assert_eq!((m, m2), (2, 6));
        assert!(validate_naestar(&out).valid);
        // first clause keeps polarities on fresh variables 1, 2, 3
        assert_eq!(out.clauses()[0], vec![1, 2, 3]);
        assert_eq!(out.clauses()[1], vec![-4, -5, -6]);
        // copies of x1 are fresh vars 1 and 4, tied by a 2-cycle
        assert!(out.clauses().contains(&vec![-1, 4]));
        assert!(out.clauses().contains(&vec![-4, 1]));
    }

    #[test]
    fn rewrite_discards_single_occurrence_clauses() {
        let phi3 = cnf(4, &[&[1, 2, 3], &[1, 2, 4]]);
        let out = from_naesat(&phi3).unwrap();
        assert_eq!(out.num_vars(), 0);
        assert!(out.clauses().is_empty());
        assert!(matches!(
            from_naesat(&cnf(2, &[&[1, 2]])),
            Err(ReductionError::NotThreeClause(2))
        ));
    }

    #[test]
    fn rewrite_preserves_nae_satisfiability() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..40 {
            let n = rng.gen_range(3..=4usize);
            let clauses: Vec<Vec<i32>> = (0..rng.gen_range(2..=4))
                .map(|_| {
                    let mut vars: Vec<i32> = (1..=n as i32).collect();
                    for i in (1..vars.len()).rev() {
                        vars.swap(i, rng.gen_range(0..=i));
                    }
                    vars.truncate(3);
                    vars.iter().map(|&v| if rng.gen_bool(0.5) { v } else { -v }).collect()
                })
                .collect();
            let phi3 = CnfInstance::new(n, clauses).unwrap();
            let rewritten = from_naesat(&phi3).unwrap();
            assert_eq!(
                naesat_brute(&phi3).unwrap().is_some(),
                naesat_brute(&rewritten).unwrap().is_some()
            );
        }
    }

    #[test]
    fn redundancy_rules() {
        let phi = cnf(3, &[&[1, 2], &[1, 2, 3]]);
        assert_eq!(remove_redundancies(&phi).clauses(), &[vec![1, 2]]);
        let phi = cnf(3, &[&[1, 2], &[-1, -2, 3]]);
        assert_eq!(remove_redundancies(&phi).clauses(), &[vec![1, 2]]);
        let phi = cnf(2, &[&[1, 2], &[-1, -2]]);
        assert_eq!(remove_redundancies(&phi).clauses(), &[vec![1, 2]]);
        let phi = cnf(2, &[&[1, -1], &[1, -1, 2]]);
        assert!(remove_redundancies(&phi).clauses().is_empty());
        assert_eq!(remove_redundancies(&cycle_fixture()), cycle_fixture());
    }

    #[test]
    fn reduction_on_the_cycle_fixture() {
        let red = reduce_to_graph(&cycle_fixture()).unwrap();
        assert_eq!(red.w, 7);
        assert_eq!(red.m_threshold, 192);
        assert_eq!(red.graph.n(), 6);
        assert_eq!(red.graph.num_edges(), 15);
        assert_eq!(red.graph.edge_weight(red.node_of(1), red.node_of(-1)), 7.0);
        assert_eq!(red.graph.edge_weight(red.node_of(1), red.node_of(2)), 1.0);
        assert_eq!(red.graph.edge_weight(red.node_of(-1), red.node_of(2)), 1.0);
        assert_eq!(red.literal_nodes[0], (1, 0));
        assert_eq!(red.literal_nodes[1], (-1, 1));
    }

    #[test]
    fn reduction_edge_count_identity() {
        for phi in [cycle_fixture(), cross_cycle_fixture()] {
            let (m, m2) = phi.clause_counts();
            let red = reduce_to_graph(&phi).unwrap();
            assert_eq!(red.graph.num_edges(), 6 * m + 2 * m2 + phi.num_vars());
            assert_eq!(red.w as usize, 2 * phi.num_vars() * m + 1);
        }
    }

    #[test]
    fn reduction_refuses_bad_input() {
        let empty = cnf(0, &[]);
        let red = reduce_to_graph(&empty).unwrap();
        assert_eq!((red.graph.n(), red.m_threshold, red.w), (0, 0, 1));

        let invalid = cnf(3, &[&[1, 2, 3], &[-1, 2], &[-2, 3], &[-3, -1]]);
        assert!(matches!(
            reduce_to_graph(&invalid),
            Err(ReductionError::NotRestricted(_))
        ));
        // valid pattern, but the 2-clause pair is mutually reversed and the
        // 3-clause contains one of them
        let redundant = cnf(3, &[&[1, 2, 3], &[1, 2], &[-1, -2], &[3, -3]]);
        assert!(validate_naestar(&redundant).valid);
        assert_eq!(reduce_to_graph(&redundant), Err(ReductionError::NotReduced));
    }

    #[test]
    fn brute_force_examples() {
        let phi = cnf(2, &[&[1, 2]]);
        assert_eq!(naesat_brute(&phi).unwrap(), Some(vec![false, true]));
        assert_eq!(naesat_brute(&cycle_fixture()).unwrap(), None);
        assert_eq!(naesat_brute(&cnf(0, &[])).unwrap(), Some(vec![]));
        let wide = CnfInstance::new(21, vec![vec![1, 2]]).unwrap();
        assert!(matches!(
            naesat_brute(&wide),
            Err(ReductionError::OverCap { n: 21, cap: 20 })
        ));
    }

    #[test]
    fn witness_tree_costs_exactly_m() {
        let phi = cross_cycle_fixture();
        let a = naesat_brute(&phi).unwrap().expect("satisfiable");
        assert_eq!(a, vec![false; 6]);
        let red = reduce_to_graph(&phi).unwrap();
        assert_eq!(red.w, 25);
        assert_eq!(red.m_threshold, 2064);
        let tree = assignment_to_tree(&phi, &a).unwrap();
        assert_eq!(cost(&red.graph, &tree).unwrap().total, red.m_threshold as f64);
    }

    #[test]
    fn witness_tree_on_rewritten_formula() {
        let phi3 = cnf(3, &[&[1, 2, 3], &[1, 2, 3], &[1, 2, 3]]);
        let phi = from_naesat(&phi3).unwrap();
        assert_eq!(phi.num_vars(), 9);
        let red = reduce_to_graph(&phi).unwrap();
        assert_eq!(red.w, 55);
        assert_eq!(red.m_threshold, 9504);
        let a = naesat_brute(&phi).unwrap().expect("satisfiable");
        let tree = assignment_to_tree(&phi, &a).unwrap();
        assert_eq!(cost(&red.graph, &tree).unwrap().total, 9504.0);
    }

    #[test]
    fn witness_rejects_non_satisfying_assignment() {
        let phi = cross_cycle_fixture();
        assert_eq!(
            assignment_to_tree(&phi, &[true, false, false, false, false, false]),
            Err(ReductionError::NotNaeSatisfying)
        );
        assert!(matches!(
            assignment_to_tree(&phi, &[true; 3]),
            Err(ReductionError::AssignmentLength { got: 3, want: 6 })
        ));
    }

    #[test]
    fn top_split_weight_matches_formula() {
        let phi = cross_cycle_fixture();
        let red = reduce_to_graph(&phi).unwrap();
        let a = naesat_brute(&phi).unwrap().unwrap();
        let tree = assignment_to_tree(&phi, &a).unwrap();
        let report = cost(&red.graph, &tree).unwrap();
        let (m, m2) = phi.clause_counts();
        let n = phi.num_vars();
        let top = (4 * m + 2 * m2 + n * red.w as usize) as f64;
        assert_eq!(report.splits[0].cost, 2.0 * n as f64 * top);
        let second: f64 = report.splits[1..]
            .iter()
            .filter(|s| s.split.set.len() == n)
            .map(|s| s.cost)
            .sum();
        assert_eq!(second, (2 * n * m) as f64);
    }

    #[test]
    fn dimacs_round_trip() {
        let text = "c fixture\np cnf 3 4\n1 2 3 0\n-1 2 0\n-2 3 0\n-3 1 0\n";
        assert_eq!(parse_dimacs(text).unwrap(), cycle_fixture());
        let multi = "p cnf 2 1\n1\n2 0\n";
        assert_eq!(parse_dimacs(multi).unwrap(), cnf(2, &[&[1, 2]]));

        for bad in [
            "p cnf 2 1\n1 2\n",
            "1 2 0\n",
            "p cnf 2 2\n1 2 0\n",
            "p cnf 2 1\n1 x 0\n",
            "p cnf 1 1\n1 2 0\n",
            "",
        ] {
            assert!(parse_dimacs(bad).is_err(), "{:?}", bad);
        }
    }
}
