//! Per-segment query engine of the online parser.
//!
//! An engine owns the closure of one text segment `[p, p+s)` and a growing
//! matrix `M` whose column for time `t` holds the exact parse functions
//! `F_{[i..t)}` for every row `i` in the segment. Query `t` receives the
//! suffix answers `v_t = (F_{[i..t]} : i ∈ [p+s, t])`, combines them as
//! `A⁺ ⊕ (M ⊕ v_t)`, and returns the first `s` entries. The engine lives for
//! exactly `s` queries.
//!
//! The two-product formula alone misses derivations whose top splits fall
//! inside the segment more than once (left-leaning combs), so the product is
//! completed by a descending back-substitution pass over the segment cuts:
//! `u_i = min(u_i, A⁺(i,k) + u_k)`. For grammars with freely reassociating
//! concatenation (the folding and bracket-repair presets) the completion
//! never improves the product; for arbitrary CNF grammars it is required for
//! exactness.

use std::sync::Arc;

use thiserror::Error;

use crate::parsing::closure::ClosureMatrix;
use crate::parsing::grammar::ScoredGrammar;
use crate::parsing::semiring::{
    point_min, rule_plus, FunctionMap, MinPlusOmvBackend, NaiveOmvBackend,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SegmentError {
    #[error("segment of length {len} expired after {len} queries")]
    Expired { len: usize },
    #[error("query expected a suffix vector of length {expected}, got {got}")]
    BadQueryShape { expected: usize, got: usize },
}

pub struct SegmentEngine {
    grammar: Arc<ScoredGrammar>,
    /// First token position covered (1-based, inclusive).
    start: usize,
    len: usize,
    closure: ClosureMatrix,
    /// Columns of `M`, oldest first; each column has `len + 1` rows.
    columns: Vec<Vec<FunctionMap>>,
    answered: usize,
    backend: NaiveOmvBackend,
}

impl SegmentEngine {
    /// Builds the closure for `tokens` (the segment text) and seeds `M` with
    /// the closure's last column.
    pub fn new(grammar: Arc<ScoredGrammar>, start: usize, tokens: &[String]) -> SegmentEngine {
        assert!(!tokens.is_empty(), "segments cover at least one token");
        let closure = ClosureMatrix::build(&grammar, tokens);
        let len = tokens.len();
        let seed: Vec<FunctionMap> = (0..=len).map(|r| closure.get(r, len).clone()).collect();
        let backend = NaiveOmvBackend::new(Arc::clone(&grammar), closure.rows());
        SegmentEngine { grammar, start, len, closure, columns: vec![seed], answered: 0, backend }
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn queries_answered(&self) -> usize {
        self.answered
    }

    /// Answers one query: `v` holds `F_{[i..t]}` for `i` from `start + len`
    /// up to the current time `t` (so its length grows by one per query).
    /// Returns `F_{[i..t]}` for the `len` segment rows.
    pub fn query(&mut self, v: &[FunctionMap]) -> Result<Vec<FunctionMap>, SegmentError> {
        if self.answered == self.len {
            return Err(SegmentError::Expired { len: self.len });
        }
        if v.len() != self.answered + 1 {
            return Err(SegmentError::BadQueryShape { expected: self.answered + 1, got: v.len() });
        }
        // G = M ⊕ v_t, rows over the segment cuts.
        let rows = self.len + 1;
        let g: Vec<FunctionMap> = (0..rows)
            .map(|r| {
                let mut acc = FunctionMap::all_top(self.grammar.nonterminal_count());
                for (c, col) in self.columns.iter().enumerate() {
                    acc = point_min(&acc, &rule_plus(&self.grammar, &col[r], &v[c]));
                }
                acc
            })
            .collect();
        // u = A⁺ ⊕ G through the online matrix-vector backend.
        let mut u = self.backend.product(&g);
        // Completion pass for in-segment top splits.
        for r in (0..self.len).rev() {
            for k in r + 1..=self.len {
                let via = rule_plus(&self.grammar, self.closure.get(r, k), &u[k]);
                u[r] = point_min(&u[r], &via);
            }
        }
        let answers = u[..self.len].to_vec();
        self.columns.push(u);
        self.answered += 1;
        Ok(answers)
    }
}
