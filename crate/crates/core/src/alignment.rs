//! Tree-alignments: node pairings that preserve ancestry and preorder.
//!
//! A sequence of pairs `(vᵢ, v'ᵢ)` aligns `T` onto `T'` when, for every two
//! pairs, ancestry agrees on both sides, incomparable nodes appear in the same
//! preorder order on both sides, and no node occurs twice. Minimizing the cost
//! over such alignments is an equivalent formulation of tree edit distance.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cost::CostTable;
use crate::ext_int::ExtInt;
use crate::tree::{NodeId, Tree};

/// A candidate alignment of one tree onto another.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeAlignment {
    pub pairs: Vec<(NodeId, NodeId)>,
}

impl TreeAlignment {
    pub fn new(pairs: Vec<(NodeId, NodeId)>) -> Self {
        TreeAlignment { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Which alignment rule a pair of pairs breaks, and where.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum AlignmentViolation {
    #[error("pair {pair_index} references a node missing from the {side} tree")]
    UnknownNode { pair_index: usize, side: &'static str },
    #[error("pairs {first} and {second} reuse a node on the {side} side")]
    DuplicateNode { first: usize, second: usize, side: &'static str },
    #[error("pairs {first} and {second} disagree on ancestry")]
    AncestryMismatch { first: usize, second: usize },
    #[error("pairs {first} and {second} disagree on preorder order")]
    OrderMismatch { first: usize, second: usize },
}

/// Preorder interval index for O(1) ancestor and order queries.
pub(crate) struct OrderIndex {
    /// Preorder rank per node slot; `usize::MAX` for dead slots.
    pre: Vec<usize>,
    /// Subtree size per node slot.
    size: Vec<usize>,
}

impl OrderIndex {
    pub(crate) fn new(tree: &Tree) -> OrderIndex {
        let order = tree.preorder();
        let cap = order.iter().map(|v| v.0 as usize).max().map_or(0, |m| m + 1);
        let mut pre = vec![usize::MAX; cap];
        let mut size = vec![0usize; cap];
        for (rank, v) in order.iter().enumerate() {
            pre[v.0 as usize] = rank;
        }
        // Subtree sizes by postorder accumulation.
        for v in tree.postorder() {
            let s: usize = tree.children(v).iter().map(|c| size[c.0 as usize]).sum::<usize>() + 1;
            size[v.0 as usize] = s;
        }
        OrderIndex { pre, size }
    }

    pub(crate) fn rank(&self, v: NodeId) -> usize {
        self.pre[v.0 as usize]
    }

    /// True iff `a` is a (strict or non-strict) ancestor of `b`.
    pub(crate) fn is_ancestor(&self, a: NodeId, b: NodeId) -> bool {
        let (ra, rb) = (self.rank(a), self.rank(b));
        ra <= rb && rb < ra + self.size[a.0 as usize]
    }
}

/// Checks the three alignment rules, reporting the first broken one.
pub fn validate_alignment(
    left: &Tree,
    right: &Tree,
    alignment: &TreeAlignment,
) -> Result<(), AlignmentViolation> {
    for (i, &(v, w)) in alignment.pairs.iter().enumerate() {
        if !left.contains(v) {
            return Err(AlignmentViolation::UnknownNode { pair_index: i, side: "left" });
        }
        if !right.contains(w) {
            return Err(AlignmentViolation::UnknownNode { pair_index: i, side: "right" });
        }
    }
    let lx = OrderIndex::new(left);
    let rx = OrderIndex::new(right);
    let pairs = &alignment.pairs;
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            let (vi, wi) = pairs[i];
            let (vj, wj) = pairs[j];
            if vi == vj {
                return Err(AlignmentViolation::DuplicateNode { first: i, second: j, side: "left" });
            }
            if wi == wj {
                return Err(AlignmentViolation::DuplicateNode { first: i, second: j, side: "right" });
            }
            let anc_l = lx.is_ancestor(vi, vj);
            let anc_l_rev = lx.is_ancestor(vj, vi);
            let anc_r = rx.is_ancestor(wi, wj);
            let anc_r_rev = rx.is_ancestor(wj, wi);
            if anc_l != anc_r || anc_l_rev != anc_r_rev {
                return Err(AlignmentViolation::AncestryMismatch { first: i, second: j });
            }
            if !anc_l && !anc_l_rev {
                let before_l = lx.rank(vi) < lx.rank(vj);
                let before_r = rx.rank(wi) < rx.rank(wj);
                if before_l != before_r {
                    return Err(AlignmentViolation::OrderMismatch { first: i, second: j });
                }
            }
        }
    }
    Ok(())
}

/// Cost of a (validated) alignment: aligned pairs with differing labels pay
/// the substitution cost, unaligned nodes pay their gap costs, equal-label
/// pairs are free when the table says so.
pub fn alignment_cost(
    left: &Tree,
    right: &Tree,
    alignment: &TreeAlignment,
    delta: &CostTable,
) -> Result<ExtInt, AlignmentViolation> {
    validate_alignment(left, right, alignment)?;
    let mut total = ExtInt::ZERO;
    let mut left_aligned = vec![false; left.preorder().iter().map(|v| v.0 as usize).max().map_or(0, |m| m + 1)];
    let mut right_aligned = vec![false; right.preorder().iter().map(|v| v.0 as usize).max().map_or(0, |m| m + 1)];
    for &(v, w) in &alignment.pairs {
        left_aligned[v.0 as usize] = true;
        right_aligned[w.0 as usize] = true;
        total = total + delta.substitution(left.label(v), right.label(w));
    }
    for v in left.preorder() {
        if !left_aligned[v.0 as usize] {
            total = total + delta.deletion(left.label(v));
        }
    }
    for w in right.preorder() {
        if !right_aligned[w.0 as usize] {
            total = total + delta.insertion(right.label(w));
        }
    }
    Ok(total)
}
