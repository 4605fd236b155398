//! Ordered, node-labeled trees with stable node identifiers.
//!
//! Node ids are allocated sequentially and never reused, so update scripts can
//! reference nodes across rounds. Deleting a node splices its children into
//! the parent in place; deleting the root is allowed only when it has exactly
//! one child (the tree type stays closed, forests are rejected).

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::label::{LabelId, LabelRegistry};

/// A stable node identifier within one [`Tree`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub u32);

#[derive(Clone, Debug)]
struct Node {
    label: LabelId,
    parent: Option<NodeId>,
    children: Vec<NodeId>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("node {0:?} does not exist")]
    UnknownNode(NodeId),
    #[error("child position {position} out of range for node with {arity} children")]
    PositionOutOfRange { position: usize, arity: usize },
    #[error("cannot delete the root unless it has exactly one child")]
    RootDeletion,
    #[error("empty label sequence")]
    EmptyLabelSequence,
    #[error("child range {start}..{start_plus_len} out of range for node with {arity} children")]
    RangeOutOfRange {
        start: usize,
        start_plus_len: usize,
        arity: usize,
    },
    #[error("malformed tree file: {0}")]
    Malformed(String),
}

/// A single-node update, the unit of work the dynamic drivers count.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum UpdateOp {
    Relabel { node: NodeId, label: LabelId },
    InsertLeaf { parent: NodeId, position: usize, label: LabelId },
    Delete { node: NodeId },
}

/// An ordered, labeled tree.
#[derive(Clone, Debug)]
pub struct Tree {
    slots: Vec<Option<Node>>,
    root: NodeId,
    alive: usize,
}

impl Tree {
    pub fn new(root_label: LabelId) -> Tree {
        Tree {
            slots: vec![Some(Node { label: root_label, parent: None, children: Vec::new() })],
            root: NodeId(0),
            alive: 1,
        }
    }

    /// Builds a path of `labels.len()` nodes labeled top to bottom.
    pub fn path(labels: &[LabelId]) -> Result<Tree, TreeError> {
        let (&first, rest) = labels.split_first().ok_or(TreeError::EmptyLabelSequence)?;
        let mut tree = Tree::new(first);
        let mut cursor = tree.root();
        for &label in rest {
            cursor = tree.add_child(cursor, usize::MAX, label).expect("cursor is alive");
        }
        Ok(tree)
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.alive
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.slots.get(v.0 as usize).is_some_and(|s| s.is_some())
    }

    fn node(&self, v: NodeId) -> Result<&Node, TreeError> {
        self.slots
            .get(v.0 as usize)
            .and_then(|s| s.as_ref())
            .ok_or(TreeError::UnknownNode(v))
    }

    fn node_mut(&mut self, v: NodeId) -> Result<&mut Node, TreeError> {
        self.slots
            .get_mut(v.0 as usize)
            .and_then(|s| s.as_mut())
            .ok_or(TreeError::UnknownNode(v))
    }

    pub fn label(&self, v: NodeId) -> LabelId {
        self.node(v).expect("label of a live node").label
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.node(v).expect("parent of a live node").parent
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.node(v).expect("children of a live node").children
    }

    /// Inserts a fresh leaf under `parent`. `position == usize::MAX` appends.
    fn add_child(&mut self, parent: NodeId, position: usize, label: LabelId) -> Result<NodeId, TreeError> {
        let arity = self.node(parent)?.children.len();
        let at = if position == usize::MAX { arity } else { position };
        if at > arity {
            return Err(TreeError::PositionOutOfRange { position, arity });
        }
        let id = NodeId(self.slots.len() as u32);
        self.slots.push(Some(Node { label, parent: Some(parent), children: Vec::new() }));
        self.node_mut(parent)?.children.insert(at, id);
        self.alive += 1;
        Ok(id)
    }

    /// Appends `labels.len()` fresh leaves after the existing children of `v`,
    /// labeled left to right. Returns the new node ids in the same order.
    pub fn right_attach(&mut self, v: NodeId, labels: &[LabelId]) -> Result<Vec<NodeId>, TreeError> {
        self.node(v)?;
        labels.iter().map(|&l| self.add_child(v, usize::MAX, l)).collect()
    }

    /// Prepends `labels.len()` fresh leaves before the existing children of
    /// `v`, labeled left to right. Returns the new node ids in the same order.
    pub fn left_attach(&mut self, v: NodeId, labels: &[LabelId]) -> Result<Vec<NodeId>, TreeError> {
        self.node(v)?;
        labels
            .iter()
            .enumerate()
            .map(|(i, &l)| self.add_child(v, i, l))
            .collect()
    }

    /// Applies one update; `InsertLeaf` reports the id of the new node.
    pub fn apply_update(&mut self, update: &UpdateOp) -> Result<Option<NodeId>, TreeError> {
        match *update {
            UpdateOp::Relabel { node, label } => {
                self.node_mut(node)?.label = label;
                Ok(None)
            }
            UpdateOp::InsertLeaf { parent, position, label } => {
                self.add_child(parent, position, label).map(Some)
            }
            UpdateOp::Delete { node } => {
                self.delete(node)?;
                Ok(None)
            }
        }
    }

    /// Deletes `node`; its children become children of the parent, in place.
    fn delete(&mut self, node: NodeId) -> Result<(), TreeError> {
        let n = self.node(node)?.clone();
        match n.parent {
            None => {
                if n.children.len() != 1 {
                    return Err(TreeError::RootDeletion);
                }
                let heir = n.children[0];
                self.node_mut(heir)?.parent = None;
                self.root = heir;
            }
            Some(p) => {
                let pos = self
                    .children(p)
                    .iter()
                    .position(|&c| c == node)
                    .expect("parent lists the child");
                let parent_node = self.node_mut(p)?;
                parent_node.children.splice(pos..=pos, n.children.iter().copied());
                for &c in &n.children {
                    self.node_mut(c)?.parent = Some(p);
                }
            }
        }
        self.slots[node.0 as usize] = None;
        self.alive -= 1;
        Ok(())
    }

    /// General insertion: a fresh node labeled `label` becomes the parent of
    /// the `len` consecutive children of `parent` starting at `start`.
    ///
    /// No update script uses this form, but it is part of the edit model and
    /// kept validated.
    pub fn insert_parent(
        &mut self,
        parent: NodeId,
        start: usize,
        len: usize,
        label: LabelId,
    ) -> Result<NodeId, TreeError> {
        let arity = self.node(parent)?.children.len();
        if start + len > arity {
            return Err(TreeError::RangeOutOfRange { start, start_plus_len: start + len, arity });
        }
        let id = NodeId(self.slots.len() as u32);
        let adopted: Vec<NodeId> =
            self.node_mut(parent)?.children.splice(start..start + len, [id]).collect();
        self.slots.push(Some(Node { label, parent: Some(parent), children: adopted.clone() }));
        for &c in &adopted {
            self.node_mut(c)?.parent = Some(id);
        }
        self.alive += 1;
        Ok(id)
    }

    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.alive);
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children(v).iter().rev());
        }
        out
    }

    pub fn postorder(&self) -> Vec<NodeId> {
        // Two-phase: reverse preorder with children unreversed gives postorder.
        let mut out = Vec::with_capacity(self.alive);
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children(v).iter());
        }
        out.reverse();
        out
    }

    /// Structural sanity: single root, consistent links, everything reachable.
    pub fn validate(&self) -> Result<(), TreeError> {
        let mut seen = 0usize;
        for (i, slot) in self.slots.iter().enumerate() {
            let Some(node) = slot else { continue };
            seen += 1;
            let id = NodeId(i as u32);
            match node.parent {
                None => {
                    if id != self.root {
                        return Err(TreeError::Malformed(format!("second root {id:?}")));
                    }
                }
                Some(p) => {
                    if !self.node(p)?.children.contains(&id) {
                        return Err(TreeError::Malformed(format!("{id:?} missing from its parent")));
                    }
                }
            }
            for &c in &node.children {
                if self.node(c)?.parent != Some(id) {
                    return Err(TreeError::Malformed(format!("child {c:?} disowns {id:?}")));
                }
            }
        }
        if seen != self.alive {
            return Err(TreeError::Malformed("alive count out of sync".into()));
        }
        if self.preorder().len() != self.alive {
            return Err(TreeError::Malformed("unreachable nodes".into()));
        }
        Ok(())
    }

    /// Labels along the preorder traversal; convenient for equality checks.
    pub fn preorder_labels(&self) -> Vec<LabelId> {
        self.preorder().into_iter().map(|v| self.label(v)).collect()
    }

    /// True iff both trees have the same shape and labels (ids may differ).
    pub fn label_equivalent(&self, other: &Tree) -> bool {
        fn walk(a: &Tree, va: NodeId, b: &Tree, vb: NodeId) -> bool {
            a.label(va) == b.label(vb)
                && a.children(va).len() == b.children(vb).len()
                && a.children(va)
                    .iter()
                    .zip(b.children(vb))
                    .all(|(&ca, &cb)| walk(a, ca, b, cb))
        }
        self.alive == other.alive && walk(self, self.root, other, other.root)
    }

    /// Nested-object JSON form: `{"label": "a", "children": [...]}`.
    pub fn to_json(&self, reg: &LabelRegistry) -> Value {
        fn conv(tree: &Tree, v: NodeId, reg: &LabelRegistry) -> Value {
            json!({
                "label": reg.name(tree.label(v)),
                "children": tree.children(v).iter().map(|&c| conv(tree, c, reg)).collect::<Vec<_>>(),
            })
        }
        conv(self, self.root, reg)
    }

    pub fn from_json(value: &Value, reg: &mut LabelRegistry) -> Result<Tree, TreeError> {
        fn build(tree: &mut Tree, parent: NodeId, value: &Value, reg: &mut LabelRegistry) -> Result<(), TreeError> {
            let label = value
                .get("label")
                .and_then(Value::as_str)
                .ok_or_else(|| TreeError::Malformed("node without label".into()))?;
            let label = reg.intern(label);
            let id = tree.add_child(parent, usize::MAX, label)?;
            for child in value.get("children").and_then(Value::as_array).into_iter().flatten() {
                build(tree, id, child, reg)?;
            }
            Ok(())
        }
        let label = value
            .get("label")
            .and_then(Value::as_str)
            .ok_or_else(|| TreeError::Malformed("node without label".into()))?;
        let label = reg.intern(label);
        let mut tree = Tree::new(label);
        for child in value.get("children").and_then(Value::as_array).into_iter().flatten() {
            build(&mut tree, NodeId(0), child, reg)?;
        }
        Ok(tree)
    }

    /// Single-line parenthesized form, e.g. `a(b,c(d))`, for debugging dumps.
    pub fn to_paren(&self, reg: &LabelRegistry) -> String {
        fn write(tree: &Tree, v: NodeId, reg: &LabelRegistry, out: &mut String) {
            let name = reg.name(tree.label(v));
            if name.contains(['(', ')', ',']) {
                out.push('"');
                out.push_str(name);
                out.push('"');
            } else {
                out.push_str(name);
            }
            let kids = tree.children(v);
            if !kids.is_empty() {
                out.push('(');
                for (i, &c) in kids.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write(tree, c, reg, out);
                }
                out.push(')');
            }
        }
        let mut out = String::new();
        write(self, self.root, reg, &mut out);
        out
    }
}

/// Builds a path whose nodes are labeled `s₁ … s_d` top to bottom.
pub fn path_gadget(labels: &[LabelId]) -> Result<Tree, TreeError> {
    Tree::path(labels)
}
