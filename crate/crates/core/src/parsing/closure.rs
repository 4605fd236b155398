//! Transitive closure of the base matrix: exact substring parse scores.

use crate::ext_int::ExtInt;
use crate::parsing::grammar::ScoredGrammar;
use crate::parsing::semiring::{point_min, rule_plus, FunctionMap};

/// Upper-triangular matrix over cut positions `0..=n`: entry `(i, j)` holds
/// the minimum score to generate the tokens in `[i, j)` from each
/// nonterminal; diagonal entries are the null element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureMatrix {
    cuts: usize,
    cells: Vec<FunctionMap>,
}

impl ClosureMatrix {
    /// Interval DP: spans of one token from the terminal rules, longer spans
    /// by minimizing one rule application over every split.
    pub fn build(grammar: &ScoredGrammar, tokens: &[String]) -> ClosureMatrix {
        let n = tokens.len();
        let cuts = n + 1;
        let mut cells = vec![FunctionMap::all_top(grammar.nonterminal_count()); cuts * cuts];
        for i in 0..cuts {
            cells[i * cuts + i] = FunctionMap::Null;
        }
        for (i, token) in tokens.iter().enumerate() {
            cells[i * cuts + i + 1] = FunctionMap::from_terminal(grammar, token);
        }
        for span in 2..=n {
            for i in 0..=n - span {
                let j = i + span;
                let mut acc = FunctionMap::all_top(grammar.nonterminal_count());
                for k in i + 1..j {
                    let candidate = rule_plus(grammar, &cells[i * cuts + k], &cells[k * cuts + j]);
                    acc = point_min(&acc, &candidate);
                }
                cells[i * cuts + j] = acc;
            }
        }
        ClosureMatrix { cuts, cells }
    }

    pub fn cuts(&self) -> usize {
        self.cuts
    }

    pub fn get(&self, i: usize, j: usize) -> &FunctionMap {
        &self.cells[i * self.cuts + j]
    }

    /// The closure as an explicit matrix (rows of cut positions).
    pub fn rows(&self) -> Vec<Vec<FunctionMap>> {
        (0..self.cuts)
            .map(|i| (0..self.cuts).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }
}

/// Minimum score generating all of `tokens` from the start symbol; `⊤` when
/// the string is not derivable (in particular for the empty string, since CNF
/// without ε-rules derives no empty string).
pub fn static_scored_parse(grammar: &ScoredGrammar, tokens: &[String]) -> ExtInt {
    if tokens.is_empty() {
        return ExtInt::Top;
    }
    ClosureMatrix::build(grammar, tokens).get(0, tokens.len()).value(grammar.start())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext_int::{Fin, Top};

    fn toy() -> ScoredGrammar {
        ScoredGrammar::build(
            &["S", "A", "B"],
            "S",
            &[("S", "A", "B", 0)],
            &[("A", "a", 0), ("B", "b", 1)],
        )
        .unwrap()
    }

    fn toks(s: &str) -> Vec<String> {
        s.chars().map(|c| c.to_string()).collect()
    }

    #[test]
    fn toy_parse_scores() {
        let g = toy();
        assert_eq!(static_scored_parse(&g, &toks("ab")), Fin(1));
        assert_eq!(static_scored_parse(&g, &toks("a")), Top);
        assert_eq!(static_scored_parse(&g, &toks("ba")), Top);
        assert_eq!(static_scored_parse(&g, &[]), Top);
    }

    #[test]
    fn closure_diagonal_is_null() {
        let g = toy();
        let c = ClosureMatrix::build(&g, &toks("ab"));
        assert!(c.get(0, 0).is_null());
        assert!(c.get(2, 2).is_null());
        assert_eq!(c.get(0, 1).value(1), Fin(0));
    }
}
