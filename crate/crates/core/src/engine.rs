//! Dynamic tree-edit-distance engines.
//!
//! The drivers talk to an engine through three operations: initialize with a
//! pair of trees and a cost table, apply a single-node update to one side,
//! query the current distance. The reference engine recomputes the distance
//! from scratch on every query.

use crate::cost::CostTable;
use crate::ext_int::ExtInt;
use crate::ted::ted;
use crate::tree::{Tree, TreeError, UpdateOp};

/// Which of the two maintained trees an update targets.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A dynamic tree-edit-distance data structure.
pub trait DynamicTedEngine {
    /// Applies one update to the chosen tree.
    fn update(&mut self, side: Side, op: &UpdateOp) -> Result<(), TreeError>;

    /// Exact edit distance between the current trees.
    fn query(&mut self) -> ExtInt;

    /// Read access to the maintained trees (left, right).
    fn trees(&self) -> (&Tree, &Tree);
}

/// Recompute-from-scratch engine. Queries run the full static solver; this is
/// exactly the behavior the lower bounds say cannot be beaten by much.
pub struct RecomputeEngine {
    left: Tree,
    right: Tree,
    delta: CostTable,
}

impl RecomputeEngine {
    pub fn new(left: &Tree, right: &Tree, delta: &CostTable) -> RecomputeEngine {
        RecomputeEngine { left: left.clone(), right: right.clone(), delta: delta.clone() }
    }
}

impl DynamicTedEngine for RecomputeEngine {
    fn update(&mut self, side: Side, op: &UpdateOp) -> Result<(), TreeError> {
        match side {
            Side::Left => self.left.apply_update(op).map(|_| ()),
            Side::Right => self.right.apply_update(op).map(|_| ()),
        }
    }

    fn query(&mut self) -> ExtInt {
        ted(&self.left, &self.right, &self.delta)
    }

    fn trees(&self) -> (&Tree, &Tree) {
        (&self.left, &self.right)
    }
}
