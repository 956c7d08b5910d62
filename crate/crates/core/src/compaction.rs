//! Hash-consing of binary trees into compacted DAGs.
//!
//! Every subtree gets a unique identifier from the triple `(label, uid(left), uid(right))`,
//! visited in post-order. The nil leaf has uid 0; fresh triples get 1, 2, 3, ... in discovery
//! order, which is also the post-order index of the node in the compacted spine.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::tree::{BinaryTree, DagNode, Edge, PostOrderIndex, RelaxedDag};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UidRow {
    pub label: Option<String>,
    pub left: u32,
    pub right: u32,
    pub uid: u32,
}

/// Triples seen so far, kept in discovery order.
#[derive(Clone, Debug, Default)]
pub struct UidTable {
    rows: Vec<UidRow>,
    index: HashMap<(Option<String>, u32, u32), u32>,
}

impl UidTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rows(&self) -> &[UidRow] {
        &self.rows
    }

    /// The last uid handed out.
    pub fn counter(&self) -> u32 {
        self.rows.len() as u32
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn lookup(&self, label: Option<&str>, left: u32, right: u32) -> Option<u32> {
        self.index.get(&(label.map(str::to_owned), left, right)).copied()
    }

    /// Returns the uid of the triple and whether it was newly inserted.
    pub fn intern(&mut self, label: Option<&str>, left: u32, right: u32) -> (u32, bool) {
        let key = (label.map(str::to_owned), left, right);
        if let Some(&uid) = self.index.get(&key) {
            return (uid, false);
        }
        let uid = self.rows.len() as u32 + 1;
        self.index.insert(key, uid);
        self.rows.push(UidRow { label: label.map(str::to_owned), left, right, uid });
        (uid, true)
    }

    /// `label,uid_left,uid_right,uid` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,uid_left,uid_right,uid\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{}", r.label.as_deref().unwrap_or(""), r.left, r.right, r.uid);
        }
        out
    }
}

/// Compacts `tree`: repeated subtrees become pointers to their first occurrence.
///
/// Labels take part in the uid triples but are not kept in the resulting dag.
pub fn uid_compact(tree: &BinaryTree) -> (RelaxedDag, UidTable) {
    let mut table = UidTable::new();
    let mut nodes = Vec::new();
    compact_rec(tree, &mut table, &mut nodes);
    (RelaxedDag::from_nodes_unchecked(nodes), table)
}

/// Returns the uid of `tree` and the edge its parent should use.
fn compact_rec(tree: &BinaryTree, table: &mut UidTable, nodes: &mut Vec<DagNode>) -> (u32, Edge) {
    match tree {
        BinaryTree::Leaf => (0, Edge::Pointer(PostOrderIndex::LEAF)),
        BinaryTree::Node { label, left, right } => {
            let (lu, le) = compact_rec(left, table, nodes);
            let (ru, re) = compact_rec(right, table, nodes);
            let (uid, fresh) = table.intern(label.as_deref(), lu, ru);
            if fresh {
                nodes.push(DagNode { left: le, right: re });
                debug_assert_eq!(nodes.len() as u32, uid);
                (uid, Edge::Spine(PostOrderIndex(uid)))
            } else {
                (uid, Edge::Pointer(PostOrderIndex(uid)))
            }
        }
    }
}

/// Expands the subdag rooted at `at` back into a full binary tree.
pub fn unfold(dag: &RelaxedDag, at: PostOrderIndex) -> BinaryTree {
    let mut expanded: Vec<BinaryTree> = Vec::with_capacity(at.get() + 1);
    expanded.push(BinaryTree::Leaf);
    for i in 1..=at.get() {
        let n = dag.node(PostOrderIndex(i as u32));
        let child = |e: Edge| match e {
            Edge::Spine(c) | Edge::Pointer(c) => expanded[c.get()].clone(),
        };
        let t = BinaryTree::node(child(n.left), child(n.right));
        expanded.push(t);
    }
    expanded.swap_remove(at.get())
}

/// Unfolds the whole dag from its root.
pub fn unfold_root(dag: &RelaxedDag) -> BinaryTree {
    unfold(dag, dag.root())
}

/// First spine node (in post-order) whose unfolding repeats an earlier node's.
pub fn duplicate_node(dag: &RelaxedDag) -> Option<PostOrderIndex> {
    let mut table = UidTable::new();
    let mut uid = vec![0u32; dag.size() + 1];
    for i in 1..=dag.size() {
        let n = dag.node(PostOrderIndex(i as u32));
        let of = |e: Edge| match e {
            Edge::Spine(c) | Edge::Pointer(c) => uid[c.get()],
        };
        let (u, fresh) = table.intern(None, of(n.left), of(n.right));
        if !fresh {
            return Some(PostOrderIndex(i as u32));
        }
        uid[i] = u;
    }
    None
}

/// True iff every spine node unfolds to a distinct tree.
pub fn is_compacted(dag: &RelaxedDag) -> bool {
    duplicate_node(dag).is_none()
}

/// Number of distinct subtrees with at least one internal node.
pub fn distinct_subtrees(tree: &BinaryTree) -> usize {
    uid_compact(tree).1.len()
}
