//! The function-valued min-plus semiring of scored parsing.
//!
//! Elements map nonterminals to extended scores. "Addition" applies one
//! binary rule on top of two operands; the null element `E` is a two-sided
//! identity for it and is transparent to pointwise minima. Matrices over
//! these elements multiply with (min, +) in the usual shape.

use std::sync::Arc;

use crate::ext_int::{ExtInt, Fin, Top};
use crate::parsing::grammar::ScoredGrammar;

/// A total map nonterminal → score, or the null element `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionMap {
    /// Identity for the rule-application sum; transparent to `min`.
    Null,
    /// Pointwise scores per nonterminal.
    Map(Vec<ExtInt>),
}

use FunctionMap::{Map, Null};

impl FunctionMap {
    pub fn all_top(n: usize) -> FunctionMap {
        Map(vec![Top; n])
    }

    /// Scores derivable from one terminal.
    pub fn from_terminal(grammar: &ScoredGrammar, token: &str) -> FunctionMap {
        let mut values = vec![Top; grammar.nonterminal_count()];
        for &(lhs, cost) in grammar.terminal_rules_for(token) {
            values[lhs] = values[lhs].min(Fin(cost as i128));
        }
        Map(values)
    }

    /// Score at one nonterminal; the null element has no pointwise reading.
    pub fn value(&self, nt: usize) -> ExtInt {
        match self {
            Null => panic!("the null element has no per-nonterminal value"),
            Map(values) => values[nt],
        }
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Null)
    }
}

/// Rule application: `(F₁ + F₂)(X) = min over X → Y Z of cost + F₁(Y) + F₂(Z)`,
/// with `E` as two-sided identity.
pub fn rule_plus(grammar: &ScoredGrammar, f1: &FunctionMap, f2: &FunctionMap) -> FunctionMap {
    match (f1, f2) {
        (Null, f) | (f, Null) => f.clone(),
        (Map(a), Map(b)) => {
            let mut out = vec![Top; grammar.nonterminal_count()];
            for rule in grammar.binary_rules() {
                let candidate = Fin(rule.cost as i128) + a[rule.left] + b[rule.right];
                out[rule.lhs] = out[rule.lhs].min(candidate);
            }
            Map(out)
        }
    }
}

/// Pointwise minimum; `E` is dropped.
pub fn point_min(f1: &FunctionMap, f2: &FunctionMap) -> FunctionMap {
    match (f1, f2) {
        (Null, f) | (f, Null) => f.clone(),
        (Map(a), Map(b)) => Map(a.iter().zip(b).map(|(&x, &y)| x.min(y)).collect()),
    }
}

/// `(A ⊕ v)ᵢ = min_k Aᵢₖ + vₖ` over the function semiring.
pub fn mat_vec(grammar: &ScoredGrammar, matrix: &[Vec<FunctionMap>], v: &[FunctionMap]) -> Vec<FunctionMap> {
    matrix
        .iter()
        .map(|row| {
            let mut acc = FunctionMap::all_top(grammar.nonterminal_count());
            for (a, x) in row.iter().zip(v) {
                acc = point_min(&acc, &rule_plus(grammar, a, x));
            }
            acc
        })
        .collect()
}

/// Online matrix-vector backend: the matrix is fixed at initialization,
/// vectors arrive one at a time.
pub trait MinPlusOmvBackend {
    fn dim(&self) -> usize;
    /// The product of the stored matrix with `v`.
    fn product(&self, v: &[FunctionMap]) -> Vec<FunctionMap>;
}

/// Reference backend: computes each product directly.
pub struct NaiveOmvBackend {
    grammar: Arc<ScoredGrammar>,
    matrix: Vec<Vec<FunctionMap>>,
}

impl NaiveOmvBackend {
    pub fn new(grammar: Arc<ScoredGrammar>, matrix: Vec<Vec<FunctionMap>>) -> NaiveOmvBackend {
        NaiveOmvBackend { grammar, matrix }
    }
}

impl MinPlusOmvBackend for NaiveOmvBackend {
    fn dim(&self) -> usize {
        self.matrix.len()
    }

    fn product(&self, v: &[FunctionMap]) -> Vec<FunctionMap> {
        mat_vec(&self.grammar, &self.matrix, v)
    }
}
