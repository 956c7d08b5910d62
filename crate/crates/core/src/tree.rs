//! Plane binary trees, their spines, and relaxed DAGs.
//!
//! A [`RelaxedDag`] is stored as an arena of spine nodes in post-order: the node with
//! [`PostOrderIndex`] `i` lives at `nodes[i - 1]`, and index `0` names the unique leaf.
//! Every child slot is either a spine edge to an earlier node or a pointer.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::error::{Error, Result};

/// Full binary tree: every node has zero or two children.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BinaryTree {
    Leaf,
    Node {
        label: Option<String>,
        left: Box<BinaryTree>,
        right: Box<BinaryTree>,
    },
}

impl BinaryTree {
    pub fn node(left: BinaryTree, right: BinaryTree) -> Self {
        BinaryTree::Node { label: None, left: Box::new(left), right: Box::new(right) }
    }

    pub fn labeled(label: impl Into<String>, left: BinaryTree, right: BinaryTree) -> Self {
        BinaryTree::Node { label: Some(label.into()), left: Box::new(left), right: Box::new(right) }
    }

    /// A labeled node with two nil children, e.g. a variable in an expression tree.
    pub fn atom(label: impl Into<String>) -> Self {
        Self::labeled(label, BinaryTree::Leaf, BinaryTree::Leaf)
    }

    /// Number of internal nodes.
    pub fn size(&self) -> usize {
        match self {
            BinaryTree::Leaf => 0,
            BinaryTree::Node { left, right, .. } => 1 + left.size() + right.size(),
        }
    }

    pub fn leaves(&self) -> usize {
        self.size() + 1
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, BinaryTree::Leaf)
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            BinaryTree::Node { label, .. } => label.as_deref(),
            BinaryTree::Leaf => None,
        }
    }

    pub fn strip_labels(&self) -> BinaryTree {
        match self {
            BinaryTree::Leaf => BinaryTree::Leaf,
            BinaryTree::Node { left, right, .. } => {
                BinaryTree::node(left.strip_labels(), right.strip_labels())
            }
        }
    }

    /// Complete tree where every leaf sits at depth `height`.
    pub fn complete(height: usize) -> BinaryTree {
        if height == 0 {
            BinaryTree::Leaf
        } else {
            let sub = BinaryTree::complete(height - 1);
            BinaryTree::node(sub.clone(), sub)
        }
    }

    fn write_sexp(&self, out: &mut String) {
        match self {
            BinaryTree::Leaf => out.push('.'),
            BinaryTree::Node { label, left, right } => match label {
                Some(l) if left.is_leaf() && right.is_leaf() => out.push_str(l),
                Some(l) => {
                    out.push('(');
                    out.push_str(l);
                    out.push(' ');
                    left.write_sexp(out);
                    out.push(' ');
                    right.write_sexp(out);
                    out.push(')');
                }
                None => {
                    out.push('(');
                    left.write_sexp(out);
                    out.push(' ');
                    right.write_sexp(out);
                    out.push(')');
                }
            },
        }
    }
}

impl fmt::Display for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_sexp(&mut s);
        f.write_str(&s)
    }
}

pub fn print_tree(tree: &BinaryTree) -> String {
    tree.to_string()
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token<'a> {
    Open,
    Close,
    Dot,
    Atom(&'a str),
    Pointer(u32),
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        let trimmed = rest.trim_start();
        self.pos += rest.len() - trimmed.len();
    }

    fn err<T>(&self, offset: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { offset, message: message.into() })
    }

    /// Returns the next token and its starting byte offset.
    fn next(&mut self) -> Result<Option<(usize, Token<'a>)>> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return Ok(None);
        };
        let tok = match c {
            '(' => {
                self.pos += 1;
                Token::Open
            }
            ')' => {
                self.pos += 1;
                Token::Close
            }
            '@' => {
                let digits: &str = {
                    let body = &rest[1..];
                    let end = body.find(|ch: char| !ch.is_ascii_digit()).unwrap_or(body.len());
                    &body[..end]
                };
                if digits.is_empty() {
                    return self.err(start, "expected digits after '@'");
                }
                let value = digits
                    .parse::<u32>()
                    .or_else(|_| self.err(start, "pointer index out of range"))?;
                self.pos += 1 + digits.len();
                Token::Pointer(value)
            }
            _ => {
                let end = rest
                    .find(|ch: char| ch.is_whitespace() || ch == '(' || ch == ')' || ch == '@')
                    .unwrap_or(rest.len());
                let word = &rest[..end];
                self.pos += end;
                if word == "." {
                    Token::Dot
                } else {
                    Token::Atom(word)
                }
            }
        };
        Ok(Some((start, tok)))
    }

    fn peek(&mut self) -> Result<Option<(usize, Token<'a>)>> {
        let save = self.pos;
        let t = self.next();
        self.pos = save;
        t
    }

    fn expect_end(&mut self) -> Result<()> {
        match self.next()? {
            None => Ok(()),
            Some((off, _)) => self.err(off, "trailing input"),
        }
    }
}

/// Parses the s-expression tree grammar.
///
/// `.` is a nil leaf, `(l r)` an unlabeled node, `atom` a labeled node with two nil
/// children and `(atom l r)` a labeled node.
pub fn parse_tree(text: &str) -> Result<BinaryTree> {
    let mut lx = Lexer::new(text);
    let tree = parse_term(&mut lx)?;
    lx.expect_end()?;
    Ok(tree)
}

fn parse_term(lx: &mut Lexer<'_>) -> Result<BinaryTree> {
    match lx.next()? {
        None => lx.err(lx.src.len(), "unexpected end of input"),
        Some((_, Token::Dot)) => Ok(BinaryTree::Leaf),
        Some((_, Token::Atom(a))) => Ok(BinaryTree::atom(a)),
        Some((off, Token::Pointer(_))) => lx.err(off, "pointer not allowed in a tree"),
        Some((off, Token::Close)) => lx.err(off, "unexpected ')'"),
        Some((open, Token::Open)) => {
            let mut items = Vec::with_capacity(3);
            loop {
                match lx.peek()? {
                    Some((_, Token::Close)) => {
                        lx.next()?;
                        break;
                    }
                    None => return lx.err(lx.src.len(), "unexpected end of input, expected ')'"),
                    Some((off, _)) if items.len() == 3 => return lx.err(off, "expected ')'"),
                    Some((off, tok)) => items.push((off, tok, parse_term(lx)?)),
                }
            }
            let mut items = items.into_iter();
            match (items.next(), items.next(), items.next()) {
                (Some((_, _, left)), Some((_, _, right)), None) => Ok(BinaryTree::node(left, right)),
                (Some((off, head, _)), Some((_, _, left)), Some((_, _, right))) => match head {
                    Token::Atom(label) => Ok(BinaryTree::labeled(label, left, right)),
                    _ => lx.err(off, "a three-element node must start with a label"),
                },
                _ => lx.err(open, "a node needs two children"),
            }
        }
    }
}

/// Binary tree whose nodes have an optional left and an optional right child.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SpineTree {
    pub root: Option<Box<SpineNode>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SpineNode {
    pub left: Option<Box<SpineNode>>,
    pub right: Option<Box<SpineNode>>,
}

impl SpineNode {
    pub fn new(left: Option<SpineNode>, right: Option<SpineNode>) -> Self {
        SpineNode { left: left.map(Box::new), right: right.map(Box::new) }
    }

    fn size(&self) -> usize {
        1 + self.left.as_ref().map_or(0, |l| l.size()) + self.right.as_ref().map_or(0, |r| r.size())
    }

    fn right_height(&self) -> usize {
        let l = self.left.as_ref().map_or(0, |l| l.right_height());
        let r = self.right.as_ref().map_or(0, |r| 1 + r.right_height());
        l.max(r)
    }
}

impl SpineTree {
    pub fn empty() -> Self {
        SpineTree { root: None }
    }

    pub fn from_root(root: SpineNode) -> Self {
        SpineTree { root: Some(Box::new(root)) }
    }

    /// Chain of `n` nodes, each the left child of the previous one.
    pub fn left_chain(n: usize) -> Self {
        let mut node: Option<SpineNode> = None;
        for _ in 0..n {
            node = Some(SpineNode::new(node, None));
        }
        SpineTree { root: node.map(Box::new) }
    }

    pub fn size(&self) -> usize {
        self.root.as_ref().map_or(0, |r| r.size())
    }

    pub fn edge_count(&self) -> usize {
        self.size().saturating_sub(1)
    }

    pub fn right_height(&self) -> usize {
        right_height(self)
    }

    /// Post-order layout: children expressed as post-order indices, and the pointer slots in
    /// traversal visit order with the number of nodes completed before each visit.
    pub fn layout(&self) -> SpineLayout {
        let mut layout = SpineLayout { nodes: Vec::with_capacity(self.size()), slots: Vec::new() };
        if let Some(root) = &self.root {
            layout.walk(root);
        }
        layout
    }
}

/// Maximum number of right edges on any root-to-node path of the spine.
pub fn right_height(spine: &SpineTree) -> usize {
    spine.root.as_ref().map_or(0, |r| r.right_height())
}

/// Spine shape of a single node in a [`SpineLayout`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeShape {
    pub left: Option<PostOrderIndex>,
    pub right: Option<PostOrderIndex>,
}

/// A pointer slot together with the largest legal target at that slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlotInfo {
    pub slot: Slot,
    pub max_target: u32,
}

impl SlotInfo {
    pub fn choices(&self) -> u32 {
        self.max_target + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpineLayout {
    pub nodes: Vec<NodeShape>,
    pub slots: Vec<SlotInfo>,
}

impl SpineLayout {
    fn walk(&mut self, node: &SpineNode) -> PostOrderIndex {
        let mut own = Vec::with_capacity(2);
        let left = match &node.left {
            Some(l) => Some(self.walk(l)),
            None => {
                own.push(self.push_slot(Side::Left));
                None
            }
        };
        let right = match &node.right {
            Some(r) => Some(self.walk(r)),
            None => {
                own.push(self.push_slot(Side::Right));
                None
            }
        };
        self.nodes.push(NodeShape { left, right });
        let idx = PostOrderIndex(self.nodes.len() as u32);
        for pos in own {
            self.slots[pos].slot.node = idx;
        }
        idx
    }

    /// Records a slot whose owner is patched in once the node completes.
    fn push_slot(&mut self, side: Side) -> usize {
        let completed = self.nodes.len() as u32;
        self.slots.push(SlotInfo { slot: Slot { node: PostOrderIndex(0), side }, max_target: completed });
        self.slots.len() - 1
    }

    /// Builds the dag that assigns `targets[i]` to the `i`-th slot in visit order.
    pub fn assemble(&self, targets: &[u32]) -> RelaxedDag {
        debug_assert_eq!(targets.len(), self.slots.len());
        let mut nodes: Vec<DagNode> = self
            .nodes
            .iter()
            .map(|s| DagNode {
                left: s.left.map_or(Edge::Pointer(PostOrderIndex::LEAF), Edge::Spine),
                right: s.right.map_or(Edge::Pointer(PostOrderIndex::LEAF), Edge::Spine),
            })
            .collect();
        for (info, &t) in self.slots.iter().zip(targets) {
            let node = &mut nodes[info.slot.node.0 as usize - 1];
            *node.edge_mut(info.slot.side) = Edge::Pointer(PostOrderIndex(t));
        }
        RelaxedDag { nodes }
    }
}

/// Position of a spine node in post-order; `0` is the unique leaf.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PostOrderIndex(pub u32);

impl PostOrderIndex {
    pub const LEAF: PostOrderIndex = PostOrderIndex(0);

    pub fn is_leaf(self) -> bool {
        self.0 == 0
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for PostOrderIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot {
    pub node: PostOrderIndex,
    pub side: Side,
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} slot of node {}", self.side, self.node)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Edge {
    Spine(PostOrderIndex),
    Pointer(PostOrderIndex),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DagNode {
    pub left: Edge,
    pub right: Edge,
}

impl DagNode {
    pub fn edge(&self, side: Side) -> Edge {
        match side {
            Side::Left => self.left,
            Side::Right => self.right,
        }
    }

    fn edge_mut(&mut self, side: Side) -> &mut Edge {
        match side {
            Side::Left => &mut self.left,
            Side::Right => &mut self.right,
        }
    }

    /// Both children are pointers.
    pub fn is_cherry(&self) -> bool {
        matches!((self.left, self.right), (Edge::Pointer(_), Edge::Pointer(_)))
    }
}

/// First violated structural invariant of a [`RelaxedDag`].
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("spine child of node {node} is not at a valid post-order position")]
    SpineOrder { node: PostOrderIndex },
    #[error("node {node} has {parents} spine parents")]
    SpineParents { node: PostOrderIndex, parents: usize },
    #[error("{slot} points to its own node")]
    SelfTarget { slot: Slot },
    #[error("{slot} points to node {target}, which does not exist")]
    TargetOutOfRange { slot: Slot, target: PostOrderIndex },
    #[error("{slot} points to node {target}, but only nodes up to {max} are completed when it is visited")]
    LaterTarget { slot: Slot, target: PostOrderIndex, max: u32 },
    #[error("{slot} is a spine edge but also carries a pointer")]
    PointerOnSpineEdge { slot: Slot },
    #[error("{slot} has no pointer")]
    MissingPointer { slot: Slot },
}

/// Spine plus leaf plus pointers, nodes stored in post-order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelaxedDag {
    nodes: Vec<DagNode>,
}

impl RelaxedDag {
    /// The size-0 dag: just the leaf.
    pub fn leaf() -> Self {
        RelaxedDag { nodes: Vec::new() }
    }

    /// Wraps a post-order node arena without checking it.
    pub fn from_nodes_unchecked(nodes: Vec<DagNode>) -> Self {
        RelaxedDag { nodes }
    }

    pub fn from_nodes(nodes: Vec<DagNode>) -> std::result::Result<Self, Violation> {
        let dag = RelaxedDag { nodes };
        validate(&dag)?;
        Ok(dag)
    }

    /// Combines a spine with a pointer assignment for every non-spine slot.
    pub fn from_parts(
        spine: &SpineTree,
        pointers: &BTreeMap<Slot, PostOrderIndex>,
    ) -> std::result::Result<Self, Violation> {
        let layout = spine.layout();
        for (slot, _) in pointers.iter() {
            let n = slot.node.get();
            if n == 0 || n > layout.nodes.len() {
                return Err(Violation::TargetOutOfRange { slot: *slot, target: slot.node });
            }
            let shape = layout.nodes[n - 1];
            let spine_edge = match slot.side {
                Side::Left => shape.left.is_some(),
                Side::Right => shape.right.is_some(),
            };
            if spine_edge {
                return Err(Violation::PointerOnSpineEdge { slot: *slot });
            }
        }
        let mut targets = Vec::with_capacity(layout.slots.len());
        for info in &layout.slots {
            match pointers.get(&info.slot) {
                Some(t) => targets.push(t.0),
                None => return Err(Violation::MissingPointer { slot: info.slot }),
            }
        }
        let dag = layout.assemble(&targets);
        validate(&dag)?;
        Ok(dag)
    }

    /// Number of spine nodes.
    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[DagNode] {
        &self.nodes
    }

    pub fn node(&self, idx: PostOrderIndex) -> &DagNode {
        &self.nodes[idx.get() - 1]
    }

    pub fn root(&self) -> PostOrderIndex {
        PostOrderIndex(self.nodes.len() as u32)
    }

    /// Replaces the target of one pointer slot, without validation.
    pub fn with_pointer(&self, slot: Slot, target: PostOrderIndex) -> RelaxedDag {
        let mut nodes = self.nodes.clone();
        *nodes[slot.node.get() - 1].edge_mut(slot.side) = Edge::Pointer(target);
        RelaxedDag { nodes }
    }

    /// Non-spine slots (the leaf slot included) with their targets, in post-order node order.
    pub fn pointers(&self) -> BTreeMap<Slot, PostOrderIndex> {
        let mut out = BTreeMap::new();
        for (i, n) in self.nodes.iter().enumerate() {
            let node = PostOrderIndex(i as u32 + 1);
            for side in [Side::Left, Side::Right] {
                if let Edge::Pointer(t) = n.edge(side) {
                    out.insert(Slot { node, side }, t);
                }
            }
        }
        out
    }

    /// Pointer count, not counting the slot that holds the leaf.
    pub fn pointer_count(&self) -> usize {
        let slots = self
            .nodes
            .iter()
            .map(|n| [n.left, n.right].iter().filter(|e| matches!(e, Edge::Pointer(_))).count())
            .sum::<usize>();
        slots.saturating_sub(1)
    }

    pub fn spine_edge_count(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| [n.left, n.right].iter().filter(|e| matches!(e, Edge::Spine(_))).count())
            .sum()
    }

    /// The spine obtained by deleting pointers and the leaf.
    pub fn spine(&self) -> SpineTree {
        fn build(dag: &RelaxedDag, idx: PostOrderIndex) -> SpineNode {
            let n = dag.node(idx);
            let child = |e: Edge| match e {
                Edge::Spine(c) => Some(Box::new(build(dag, c))),
                Edge::Pointer(_) => None,
            };
            SpineNode { left: child(n.left), right: child(n.right) }
        }
        if self.nodes.is_empty() {
            SpineTree::empty()
        } else {
            SpineTree::from_root(build(self, self.root()))
        }
    }

    pub fn right_height(&self) -> usize {
        if self.nodes.is_empty() {
            return 0;
        }
        let mut best = 0;
        let mut stack = vec![(self.root(), 0usize)];
        while let Some((idx, level)) = stack.pop() {
            best = best.max(level);
            let n = self.node(idx);
            if let Edge::Spine(l) = n.left {
                stack.push((l, level));
            }
            if let Edge::Spine(r) = n.right {
                stack.push((r, level + 1));
            }
        }
        best
    }

    /// Distance of a spine node from the root along spine edges.
    pub fn depth(&self, target: PostOrderIndex) -> Option<usize> {
        if self.nodes.is_empty() {
            return None;
        }
        let mut stack = vec![(self.root(), 0usize)];
        while let Some((idx, d)) = stack.pop() {
            if idx == target {
                return Some(d);
            }
            let n = self.node(idx);
            for e in [n.left, n.right] {
                if let Edge::Spine(c) = e {
                    stack.push((c, d + 1));
                }
            }
        }
        None
    }

    fn write_node(&self, idx: PostOrderIndex, out: &mut String) {
        let n = self.node(idx);
        out.push('(');
        self.write_edge(n.left, out);
        out.push(' ');
        self.write_edge(n.right, out);
        out.push(')');
    }

    fn write_edge(&self, e: Edge, out: &mut String) {
        match e {
            Edge::Spine(c) => self.write_node(c, out),
            Edge::Pointer(t) => {
                out.push('@');
                out.push_str(&t.0.to_string());
            }
        }
    }
}

impl fmt::Display for RelaxedDag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.nodes.is_empty() {
            return f.write_str("@0");
        }
        let mut s = String::new();
        self.write_node(self.root(), &mut s);
        f.write_str(&s)
    }
}

/// Parses the `@i` text form, e.g. `(@0 @0)`, and validates the result.
pub fn parse_dag(text: &str) -> Result<RelaxedDag> {
    let mut lx = Lexer::new(text);
    let mut nodes = Vec::new();
    match lx.peek()? {
        Some((_, Token::Pointer(0))) => {
            lx.next()?;
            lx.expect_end()?;
            return Ok(RelaxedDag::leaf());
        }
        Some((off, Token::Pointer(_))) => return lx.err(off, "a size-0 dag is written @0"),
        _ => {}
    }
    parse_dag_node(&mut lx, &mut nodes)?;
    lx.expect_end()?;
    let dag = RelaxedDag { nodes };
    validate(&dag)?;
    Ok(dag)
}

fn parse_dag_node(lx: &mut Lexer<'_>, nodes: &mut Vec<DagNode>) -> Result<PostOrderIndex> {
    match lx.next()? {
        Some((_, Token::Open)) => {}
        Some((off, _)) => return lx.err(off, "expected '('"),
        None => return lx.err(lx.src.len(), "unexpected end of input"),
    }
    let left = parse_dag_edge(lx, nodes)?;
    let right = parse_dag_edge(lx, nodes)?;
    match lx.next()? {
        Some((_, Token::Close)) => {}
        Some((off, _)) => return lx.err(off, "expected ')'"),
        None => return lx.err(lx.src.len(), "unexpected end of input, expected ')'"),
    }
    nodes.push(DagNode { left, right });
    Ok(PostOrderIndex(nodes.len() as u32))
}

fn parse_dag_edge(lx: &mut Lexer<'_>, nodes: &mut Vec<DagNode>) -> Result<Edge> {
    match lx.peek()? {
        Some((_, Token::Pointer(t))) => {
            lx.next()?;
            Ok(Edge::Pointer(PostOrderIndex(t)))
        }
        Some((_, Token::Open)) => Ok(Edge::Spine(parse_dag_node(lx, nodes)?)),
        Some((off, _)) => lx.err(off, "expected '(' or '@i'"),
        None => lx.err(lx.src.len(), "unexpected end of input"),
    }
}

/// Spine nodes in post-order: always `1..=n` for a valid dag.
pub fn post_order(dag: &RelaxedDag) -> Vec<PostOrderIndex> {
    (1..=dag.size() as u32).map(PostOrderIndex).collect()
}

/// Pointer slots in traversal visit order with their legal target bound.
pub fn slot_visit_order(dag: &RelaxedDag) -> Vec<SlotInfo> {
    dag.spine().layout().slots
}

/// Checks every structural invariant of a relaxed dag.
pub fn validate(dag: &RelaxedDag) -> std::result::Result<(), Violation> {
    let n = dag.nodes.len();
    let mut size = vec![0usize; n + 1];
    let mut parents = vec![0usize; n + 1];
    for i in 1..=n {
        let node = dag.nodes[i - 1];
        let idx = PostOrderIndex(i as u32);
        let child_size = |e: Edge, size: &[usize]| match e {
            Edge::Spine(c) => size[c.get()],
            Edge::Pointer(_) => 0,
        };
        for e in [node.left, node.right] {
            if let Edge::Spine(c) = e {
                if c.0 == 0 || c.get() >= i {
                    return Err(Violation::SpineOrder { node: idx });
                }
                parents[c.get()] += 1;
            }
        }
        let rs = child_size(node.right, &size);
        if let Edge::Spine(r) = node.right {
            if r.get() != i - 1 {
                return Err(Violation::SpineOrder { node: idx });
            }
        }
        if let Edge::Spine(l) = node.left {
            if l.get() + rs + 1 != i {
                return Err(Violation::SpineOrder { node: idx });
            }
        }
        size[i] = 1 + child_size(node.left, &size) + rs;
    }
    for i in 1..=n {
        let expected = usize::from(i != n);
        if parents[i] != expected {
            return Err(Violation::SpineParents { node: PostOrderIndex(i as u32), parents: parents[i] });
        }
    }
    if n > 0 && size[n] != n {
        return Err(Violation::SpineParents { node: PostOrderIndex(n as u32), parents: 0 });
    }
    for i in 1..=n {
        let node = dag.nodes[i - 1];
        let idx = PostOrderIndex(i as u32);
        let lo = i + 1 - size[i];
        let left_size = match node.left {
            Edge::Spine(l) => size[l.get()],
            Edge::Pointer(_) => 0,
        };
        for (side, max) in [(Side::Left, lo - 1), (Side::Right, lo + left_size - 1)] {
            if let Edge::Pointer(t) = node.edge(side) {
                let slot = Slot { node: idx, side };
                if t.get() == i {
                    return Err(Violation::SelfTarget { slot });
                }
                if t.get() > n {
                    return Err(Violation::TargetOutOfRange { slot, target: t });
                }
                if t.get() > max {
                    return Err(Violation::LaterTarget { slot, target: t, max: max as u32 });
                }
            }
        }
    }
    Ok(())
}
