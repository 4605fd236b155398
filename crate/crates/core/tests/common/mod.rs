//! Shared generators for the integration tests.

// Each test binary uses its own slice of these helpers.
#![allow(dead_code)]

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use tedlab_core::cost::CostTable;
use tedlab_core::ext_int::{ExtInt, Fin};
use tedlab_core::graph::Graph;
use tedlab_core::label::{LabelId, LabelRegistry};
use tedlab_core::tree::{NodeId, Tree, UpdateOp};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn label_pool(reg: &mut LabelRegistry, count: usize) -> Vec<LabelId> {
    (0..count).map(|i| reg.intern(&format!("l{i}"))).collect()
}

/// Random tree with exactly `nodes` nodes over the given label pool.
pub fn random_tree(rng: &mut ChaCha8Rng, nodes: usize, labels: &[LabelId]) -> Tree {
    assert!(nodes >= 1);
    let pick = |rng: &mut ChaCha8Rng| labels[rng.random_range(0..labels.len())];
    let mut tree = Tree::new(pick(rng));
    let mut ids = vec![tree.root()];
    for _ in 1..nodes {
        let parent = ids[rng.random_range(0..ids.len())];
        let position = rng.random_range(0..=tree.children(parent).len());
        let label = pick(rng);
        let id = tree
            .apply_update(&UpdateOp::InsertLeaf { parent, position, label })
            .unwrap()
            .unwrap();
        ids.push(id);
    }
    tree
}

/// A cost table in the weighted-instance style: negative substitutions on
/// random label pairs, zero gaps, everything else forbidden.
pub fn spiky_cost_table(rng: &mut ChaCha8Rng, labels: &[LabelId]) -> CostTable {
    let mut delta = CostTable::forbidden_with_free_gaps();
    for &a in labels {
        for &b in labels {
            if rng.random_bool(0.4) {
                delta.set(a, b, Fin(rng.random_range(-9..=5)));
            }
        }
    }
    delta
}

/// Seeded Erdős–Rényi graph, optionally with uniform random weights.
pub fn random_graph(rng: &mut ChaCha8Rng, n: u32, density: f64, w_max: Option<u64>) -> Graph {
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.random_bool(density) {
                edges.push((u, v, w_max.map_or(1, |m| rng.random_range(1..=m))));
            }
        }
    }
    match w_max {
        Some(_) => Graph::new_weighted(n, &edges).unwrap(),
        None => {
            let bare: Vec<(u32, u32)> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
            Graph::new(n, &bare).unwrap()
        }
    }
}

/// Ancestor matrix computed by explicit parent-chain walking; an independent
/// route to the order-theoretic facts the alignment validator uses.
pub struct ChainIndex {
    ancestor: Vec<Vec<bool>>,
    preorder_rank: Vec<usize>,
}

impl ChainIndex {
    pub fn new(tree: &Tree) -> ChainIndex {
        let ids = tree.preorder();
        let slot = |v: NodeId| v.0 as usize;
        let cap = ids.iter().map(|&v| slot(v)).max().unwrap() + 1;
        let mut ancestor = vec![vec![false; cap]; cap];
        for &v in &ids {
            // Walk the parent chain up from v; everything on it is an
            // ancestor of v.
            ancestor[slot(v)][slot(v)] = true;
            let mut cur = v;
            while let Some(p) = tree.parent(cur) {
                ancestor[slot(p)][slot(v)] = true;
                cur = p;
            }
        }
        let mut preorder_rank = vec![usize::MAX; cap];
        for (rank, &v) in ids.iter().enumerate() {
            preorder_rank[slot(v)] = rank;
        }
        ChainIndex { ancestor, preorder_rank }
    }

    pub fn is_ancestor(&self, a: NodeId, b: NodeId) -> bool {
        self.ancestor[a.0 as usize][b.0 as usize]
    }

    pub fn rank(&self, v: NodeId) -> usize {
        self.preorder_rank[v.0 as usize]
    }
}

/// Second opinion on alignment validity: ancestor matrices plus preorder
/// ranks, three explicit clauses.
pub fn chain_checker_verdict(left: &Tree, right: &Tree, pairs: &[(NodeId, NodeId)]) -> bool {
    let lx = ChainIndex::new(left);
    let rx = ChainIndex::new(right);
    for (idx, &(v, w)) in pairs.iter().enumerate() {
        if !left.contains(v) || !right.contains(w) {
            return false;
        }
        for &(v2, w2) in &pairs[idx + 1..] {
            if v == v2 || w == w2 {
                return false;
            }
            if lx.is_ancestor(v, v2) != rx.is_ancestor(w, w2)
                || lx.is_ancestor(v2, v) != rx.is_ancestor(w2, w)
            {
                return false;
            }
            let incomparable = !lx.is_ancestor(v, v2) && !lx.is_ancestor(v2, v);
            if incomparable && ((lx.rank(v) < lx.rank(v2)) != (rx.rank(w) < rx.rank(w2))) {
                return false;
            }
        }
    }
    true
}

/// Direct re-summation of an alignment's cost by set bookkeeping.
pub fn walker_cost(
    left: &Tree,
    right: &Tree,
    pairs: &[(NodeId, NodeId)],
    delta: &CostTable,
) -> ExtInt {
    let mut total = ExtInt::ZERO;
    let mut left_used = std::collections::BTreeSet::new();
    let mut right_used = std::collections::BTreeSet::new();
    for &(v, w) in pairs {
        left_used.insert(v);
        right_used.insert(w);
        let (a, b) = (left.label(v), right.label(w));
        if a != b || !delta.equal_labels_free() {
            total = total + delta.substitution(a, b);
        }
    }
    for v in left.preorder() {
        if !left_used.contains(&v) {
            total = total + delta.deletion(left.label(v));
        }
    }
    for w in right.preorder() {
        if !right_used.contains(&w) {
            total = total + delta.insertion(right.label(w));
        }
    }
    total
}
