//! Rooted cluster trees.
//!
//! A [`ClusterTree`] is an arena of nodes: leaves carry graph-node ids,
//! internal nodes have at least two children. Children are kept in canonical
//! order (ascending smallest leaf id) and leaf counts are cached per node, so
//! LCA-based queries are cheap. Trees are immutable values; surgery
//! operations return new trees.
//!
//! The exhaustive enumerator walks all rooted binary trees on labeled leaves
//! `0..n` by grafting leaf `k` onto each of the `2k−1` nodes of every tree on
//! `0..k`; each labeled tree arises from exactly one grafting sequence, which
//! yields `(2n−3)!!` trees in a fixed order.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest leaf count accepted by [`enumerate_trees`].
pub const ENUMERATION_CAP: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TreeError {
    #[error("leaf {0} appears more than once")]
    DuplicateLeaf(usize),
    #[error("internal node with fewer than two children")]
    UnaryNode,
    #[error("tree has no leaves")]
    Empty,
    #[error("unknown leaf {0}")]
    UnknownLeaf(usize),
    #[error("no such node")]
    NoSuchNode,
    #[error("node is not internal")]
    NotInternal,
    #[error("a leaf is not joined with itself")]
    SameLeaf,
    #[error("replacement leaf set does not match the subtree")]
    LeafSetMismatch,
    #[error("enumeration supports at most {cap} leaves, got {n}")]
    EnumerationCap { n: usize, cap: usize },
    #[error("joined subtrees share leaves")]
    OverlappingLeaves,
    #[error("invalid tree encoding: {0}")]
    BadEncoding(String),
}

/// Handle to a node inside one particular [`ClusterTree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(usize);

#[derive(Debug, Clone)]
enum NodeKind {
    Leaf(usize),
    Internal(Vec<NodeId>),
}

#[derive(Debug, Clone)]
struct Node {
    parent: Option<NodeId>,
    kind: NodeKind,
    leaf_count: usize,
    min_leaf: usize,
}

/// Nested-list form of a tree: a leaf id or a list of children. This is the
/// JSON wire format, e.g. `[[0,1],[2,3]]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Nested {
    Leaf(usize),
    Node(Vec<Nested>),
}

/// A subset of nodes together with the partition induced by one internal
/// tree node. Parts are ordered by smallest contained leaf id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub set: Vec<usize>,
    pub parts: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct ClusterTree {
    nodes: Vec<Node>,
    root: NodeId,
    leaf_node: BTreeMap<usize, NodeId>,
}

impl PartialEq for ClusterTree {
    fn eq(&self, other: &Self) -> bool {
        self.nested() == other.nested()
    }
}

impl Eq for ClusterTree {}

impl ClusterTree {
    /// Single-leaf tree.
    pub fn leaf(id: usize) -> Self {
        ClusterTree {
            nodes: vec![Node {
                parent: None,
                kind: NodeKind::Leaf(id),
                leaf_count: 1,
                min_leaf: id,
            }],
            root: NodeId(0),
            leaf_node: BTreeMap::from([(id, NodeId(0))]),
        }
    }

    pub fn from_nested(nested: &Nested) -> Result<Self, TreeError> {
        let mut tree = ClusterTree {
            nodes: Vec::new(),
            root: NodeId(0),
            leaf_node: BTreeMap::new(),
        };
        tree.root = tree.build(nested, None)?;
        Ok(tree)
    }

    fn build(&mut self, nested: &Nested, parent: Option<NodeId>) -> Result<NodeId, TreeError> {
        match nested {
            Nested::Leaf(id) => {
                let nid = NodeId(self.nodes.len());
                self.nodes.push(Node {
                    parent,
                    kind: NodeKind::Leaf(*id),
                    leaf_count: 1,
                    min_leaf: *id,
                });
                if self.leaf_node.insert(*id, nid).is_some() {
                    return Err(TreeError::DuplicateLeaf(*id));
                }
                Ok(nid)
            }
            Nested::Node(children) => {
                if children.len() < 2 {
                    return Err(TreeError::UnaryNode);
                }
                let nid = NodeId(self.nodes.len());
                self.nodes.push(Node {
                    parent,
                    kind: NodeKind::Internal(Vec::new()),
                    leaf_count: 0,
                    min_leaf: usize::MAX,
                });
                let mut ids = Vec::with_capacity(children.len());
                let mut leaf_count = 0;
                for child in children {
                    let cid = self.build(child, Some(nid))?;
                    leaf_count += self.nodes[cid.0].leaf_count;
                    ids.push(cid);
                }
                ids.sort_by_key(|c| self.nodes[c.0].min_leaf);
                let min_leaf = self.nodes[ids[0].0].min_leaf;
                let node = &mut self.nodes[nid.0];
                node.kind = NodeKind::Internal(ids);
                node.leaf_count = leaf_count;
                node.min_leaf = min_leaf;
                Ok(nid)
            }
        }
    }

    /// Joins subtrees with disjoint leaf sets under a new root.
    pub fn join(children: Vec<ClusterTree>) -> Result<Self, TreeError> {
        if children.is_empty() {
            return Err(TreeError::Empty);
        }
        let nested = Nested::Node(children.iter().map(|c| c.nested()).collect());
        Self::from_nested(&nested).map_err(|e| match e {
            TreeError::DuplicateLeaf(_) => TreeError::OverlappingLeaves,
            other => other,
        })
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn num_leaves(&self) -> usize {
        self.leaf_node.len()
    }

    /// Sorted leaf ids of the whole tree.
    pub fn leaf_ids(&self) -> Vec<usize> {
        self.leaf_node.keys().copied().collect()
    }

    pub fn contains_leaf(&self, id: usize) -> bool {
        self.leaf_node.contains_key(&id)
    }

    pub fn is_leaf(&self, node: NodeId) -> bool {
        matches!(self.nodes[node.0].kind, NodeKind::Leaf(_))
    }

    /// Children of `node` in canonical order; empty for leaves.
    pub fn children(&self, node: NodeId) -> &[NodeId] {
        match &self.nodes[node.0].kind {
            NodeKind::Leaf(_) => &[],
            NodeKind::Internal(ch) => ch,
        }
    }

    pub fn parent(&self, node: NodeId) -> Option<NodeId> {
        self.nodes[node.0].parent
    }

    /// Cached number of leaves under `node`.
    pub fn leaf_count(&self, node: NodeId) -> usize {
        self.nodes[node.0].leaf_count
    }

    /// Sorted graph-node ids of the leaves under `node`.
    pub fn leaves_under(&self, node: NodeId) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes[node.0].leaf_count);
        let mut stack = vec![node];
        while let Some(id) = stack.pop() {
            match &self.nodes[id.0].kind {
                NodeKind::Leaf(leaf) => out.push(*leaf),
                NodeKind::Internal(ch) => stack.extend(ch.iter().copied()),
            }
        }
        out.sort_unstable();
        out
    }

    /// Internal nodes in breadth-first order from the root. This is the
    /// order used by [`ClusterTree::splits`].
    pub fn internal_nodes(&self) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut queue = std::collections::VecDeque::from([self.root]);
        while let Some(id) = queue.pop_front() {
            if let NodeKind::Internal(ch) = &self.nodes[id.0].kind {
                out.push(id);
                queue.extend(ch.iter().copied());
            }
        }
        out
    }

    fn leaf_handle(&self, id: usize) -> Result<NodeId, TreeError> {
        self.leaf_node
            .get(&id)
            .copied()
            .ok_or(TreeError::UnknownLeaf(id))
    }

    /// Smallest subtree containing both leaves. Rejects `i = j`.
    pub fn lca(&self, i: usize, j: usize) -> Result<NodeId, TreeError> {
        if i == j {
            return Err(TreeError::SameLeaf);
        }
        let mut ancestors = Vec::new();
        let mut cur = Some(self.leaf_handle(i)?);
        while let Some(id) = cur {
            ancestors.push(id);
            cur = self.nodes[id.0].parent;
        }
        let mut cur = self.leaf_handle(j)?;
        loop {
            if ancestors.contains(&cur) {
                return Ok(cur);
            }
            cur = self.nodes[cur.0]
                .parent
                .expect("leaves of one tree share the root");
        }
    }

    /// `|leaves(T[i ∨ j])|` for distinct leaves `i`, `j`.
    pub fn lca_subtree_size(&self, i: usize, j: usize) -> Result<usize, TreeError> {
        Ok(self.leaf_count(self.lca(i, j)?))
    }

    /// Ultrametric tree distance: `|leaves(T[i ∨ j])| − 1`, and 0 for `i = j`.
    pub fn tree_distance(&self, i: usize, j: usize) -> Result<usize, TreeError> {
        if i == j {
            self.leaf_handle(i)?;
            return Ok(0);
        }
        Ok(self.lca_subtree_size(i, j)? - 1)
    }

    /// The split induced by one internal node.
    pub fn split_at(&self, node: NodeId) -> Result<Split, TreeError> {
        if node.0 >= self.nodes.len() {
            return Err(TreeError::NoSuchNode);
        }
        let NodeKind::Internal(ch) = &self.nodes[node.0].kind else {
            return Err(TreeError::NotInternal);
        };
        let parts: Vec<Vec<usize>> = ch.iter().map(|&c| self.leaves_under(c)).collect();
        Ok(Split { set: self.leaves_under(node), parts })
    }

    /// One split per internal node, in breadth-first order from the root.
    pub fn splits(&self) -> Vec<Split> {
        self.internal_nodes()
            .into_iter()
            .map(|id| self.split_at(id).expect("internal node"))
            .collect()
    }

    /// Canonical nested-list form.
    pub fn nested(&self) -> Nested {
        self.nested_of(self.root)
    }

    fn nested_of(&self, node: NodeId) -> Nested {
        match &self.nodes[node.0].kind {
            NodeKind::Leaf(id) => Nested::Leaf(*id),
            NodeKind::Internal(ch) => {
                Nested::Node(ch.iter().map(|&c| self.nested_of(c)).collect())
            }
        }
    }

    /// Copy of the subtree rooted at `node`, as a standalone tree with the
    /// original leaf ids.
    pub fn subtree(&self, node: NodeId) -> Result<ClusterTree, TreeError> {
        if node.0 >= self.nodes.len() {
            return Err(TreeError::NoSuchNode);
        }
        Self::from_nested(&self.nested_of(node))
    }

    /// Swaps the subtree at `node` for `replacement`, which must cover
    /// exactly the same leaf set. Persistent: returns a new tree.
    pub fn replace_subtree(
        &self,
        node: NodeId,
        replacement: &ClusterTree,
    ) -> Result<ClusterTree, TreeError> {
        if node.0 >= self.nodes.len() {
            return Err(TreeError::NoSuchNode);
        }
        if matches!(self.nodes[node.0].kind, NodeKind::Leaf(_)) {
            return Err(TreeError::NotInternal);
        }
        if self.leaves_under(node) != replacement.leaf_ids() {
            return Err(TreeError::LeafSetMismatch);
        }
        let nested = self.nested_replacing(self.root, node, replacement);
        Self::from_nested(&nested)
    }

    fn nested_replacing(&self, cur: NodeId, target: NodeId, replacement: &ClusterTree) -> Nested {
        if cur == target {
            return replacement.nested();
        }
        match &self.nodes[cur.0].kind {
            NodeKind::Leaf(id) => Nested::Leaf(*id),
            NodeKind::Internal(ch) => Nested::Node(
                ch.iter()
                    .map(|&c| self.nested_replacing(c, target, replacement))
                    .collect(),
            ),
        }
    }

    /// Binary version of the tree: every k-ary node becomes a left-deep
    /// chain over its children in canonical order. Never increases the cost
    /// on any graph, and is idempotent.
    pub fn binarize(&self) -> ClusterTree {
        fn bin(nested: &Nested) -> Nested {
            match nested {
                Nested::Leaf(id) => Nested::Leaf(*id),
                Nested::Node(children) => {
                    let mut it = children.iter().map(bin);
                    let mut acc = it.next().expect("internal node has children");
                    for next in it {
                        acc = Nested::Node(vec![acc, next]);
                    }
                    acc
                }
            }
        }
        Self::from_nested(&bin(&self.nested())).expect("binarized tree is valid")
    }

    /// Restriction to the leaves in `keep`: other leaves are dropped and
    /// nodes left with a single child collapse into it. Leaf ids are
    /// preserved.
    pub fn restrict(&self, keep: &[usize]) -> Result<ClusterTree, TreeError> {
        let keep: std::collections::BTreeSet<usize> = keep.iter().copied().collect();
        fn go(nested: &Nested, keep: &std::collections::BTreeSet<usize>) -> Option<Nested> {
            match nested {
                Nested::Leaf(id) => keep.contains(id).then_some(Nested::Leaf(*id)),
                Nested::Node(children) => {
                    let mut kept: Vec<Nested> =
                        children.iter().filter_map(|c| go(c, keep)).collect();
                    match kept.len() {
                        0 => None,
                        1 => kept.pop(),
                        _ => Some(Nested::Node(kept)),
                    }
                }
            }
        }
        let nested = go(&self.nested(), &keep).ok_or(TreeError::Empty)?;
        Self::from_nested(&nested)
    }

    /// Applies `map` to every leaf id. The mapped ids must stay distinct.
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Result<ClusterTree, TreeError> {
        fn go(nested: &Nested, map: &impl Fn(usize) -> usize) -> Nested {
            match nested {
                Nested::Leaf(id) => Nested::Leaf(map(*id)),
                Nested::Node(children) => {
                    Nested::Node(children.iter().map(|c| go(c, map)).collect())
                }
            }
        }
        Self::from_nested(&go(&self.nested(), &map))
    }

    /// Left-deep chain `(((0,1),2),…)` on leaves `0..n`.
    pub fn caterpillar(n: usize) -> Result<ClusterTree, TreeError> {
        if n == 0 {
            return Err(TreeError::Empty);
        }
        let mut acc = Nested::Leaf(0);
        for k in 1..n {
            acc = Nested::Node(vec![acc, Nested::Leaf(k)]);
        }
        Self::from_nested(&acc)
    }

    /// Uniformly structured random binary tree over the given leaves, built
    /// by repeatedly merging two random forest roots.
    pub fn random_binary(leaves: &[usize], rng: &mut impl Rng) -> Result<ClusterTree, TreeError> {
        if leaves.is_empty() {
            return Err(TreeError::Empty);
        }
        let mut parts: Vec<Nested> = leaves.iter().map(|&id| Nested::Leaf(id)).collect();
        while parts.len() > 1 {
            let a = parts.swap_remove(rng.gen_range(0..parts.len()));
            let b = parts.swap_remove(rng.gen_range(0..parts.len()));
            parts.push(Nested::Node(vec![a, b]));
        }
        Self::from_nested(&parts.pop().expect("nonempty"))
    }

    /// JSON wire form, e.g. `[[0,1],[2,3]]`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.nested()).expect("nested form serializes")
    }

    pub fn from_json(text: &str) -> Result<ClusterTree, TreeError> {
        let nested: Nested =
            serde_json::from_str(text).map_err(|e| TreeError::BadEncoding(e.to_string()))?;
        Self::from_nested(&nested)
    }

    /// Newick form with `vK` leaf labels and no branch lengths, e.g.
    /// `((v0,v1),(v2,v3));`.
    pub fn to_newick(&self) -> String {
        fn go(tree: &ClusterTree, node: NodeId, out: &mut String) {
            match &tree.nodes[node.0].kind {
                NodeKind::Leaf(id) => out.push_str(&format!("v{}", id)),
                NodeKind::Internal(ch) => {
                    out.push('(');
                    for (i, &c) in ch.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        go(tree, c, out);
                    }
                    out.push(')');
                }
            }
        }
        let mut out = String::new();
        go(self, self.root, &mut out);
        out.push(';');
        out
    }

    /// Grafts a new leaf onto the node at the given preorder position: that
    /// node is replaced by an internal node with the old subtree and the new
    /// leaf as children. The new leaf id must exceed every existing one so
    /// canonical child order is preserved.
    fn graft(&mut self, preorder_pos: usize, new_leaf: usize) {
        debug_assert!(self.leaf_node.keys().all(|&l| l < new_leaf));
        let target = self.preorder_node(preorder_pos);
        let leaf_id = NodeId(self.nodes.len());
        self.nodes.push(Node {
            parent: None,
            kind: NodeKind::Leaf(new_leaf),
            leaf_count: 1,
            min_leaf: new_leaf,
        });
        let parent_id = NodeId(self.nodes.len());
        let old_parent = self.nodes[target.0].parent;
        self.nodes.push(Node {
            parent: old_parent,
            kind: NodeKind::Internal(vec![target, leaf_id]),
            leaf_count: self.nodes[target.0].leaf_count + 1,
            min_leaf: self.nodes[target.0].min_leaf,
        });
        self.nodes[target.0].parent = Some(parent_id);
        self.nodes[leaf_id.0].parent = Some(parent_id);
        match old_parent {
            Some(p) => {
                if let NodeKind::Internal(ch) = &mut self.nodes[p.0].kind {
                    let slot = ch.iter().position(|&c| c == target).expect("child link");
                    ch[slot] = parent_id;
                }
                let mut cur = Some(p);
                while let Some(id) = cur {
                    self.nodes[id.0].leaf_count += 1;
                    cur = self.nodes[id.0].parent;
                }
            }
            None => self.root = parent_id,
        }
        self.leaf_node.insert(new_leaf, leaf_id);
    }

    fn preorder_node(&self, pos: usize) -> NodeId {
        let mut stack = vec![self.root];
        let mut seen = 0;
        while let Some(id) = stack.pop() {
            if seen == pos {
                return id;
            }
            seen += 1;
            if let NodeKind::Internal(ch) = &self.nodes[id.0].kind {
                stack.extend(ch.iter().rev().copied());
            }
        }
        unreachable!("preorder position {} out of range", pos)
    }
}

/// Streams every rooted binary tree on labeled leaves `0..n`, each exactly
/// once, in a fixed order. `n` is capped at [`ENUMERATION_CAP`] because the
/// count grows as `(2n−3)!!`.
pub fn enumerate_trees(n: usize) -> Result<TreeEnumerator, TreeError> {
    if n == 0 {
        return Err(TreeError::Empty);
    }
    if n > ENUMERATION_CAP {
        return Err(TreeError::EnumerationCap { n, cap: ENUMERATION_CAP });
    }
    Ok(TreeEnumerator { counter: vec![0; n - 1], done: false })
}

/// `(2n−3)!!`, the number of rooted binary trees on n labeled leaves.
pub fn num_binary_trees(n: usize) -> u64 {
    (1..n).map(|k| (2 * k - 1) as u64).product()
}

pub struct TreeEnumerator {
    /// `counter[k]` picks the graft position for leaf `k+1` among the
    /// `2k+1` preorder nodes of the partial tree on leaves `0..=k`.
    counter: Vec<usize>,
    done: bool,
}

impl TreeEnumerator {
    fn build(&self) -> ClusterTree {
        let mut tree = ClusterTree::leaf(0);
        for (k, &pos) in self.counter.iter().enumerate() {
            tree.graft(pos, k + 1);
        }
        tree
    }
}

impl Iterator for TreeEnumerator {
    type Item = ClusterTree;

    fn next(&mut self) -> Option<ClusterTree> {
        if self.done {
            return None;
        }
        let tree = self.build();
        let mut k = self.counter.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            if self.counter[k] + 1 < 2 * k + 1 {
                self.counter[k] += 1;
                for c in &mut self.counter[k + 1..] {
                    *c = 0;
                }
                break;
            }
        }
        Some(tree)
    }
}
