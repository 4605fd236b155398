//! Scored context-free grammars in Chomsky normal form.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::folding::PairedAlphabet;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GrammarError {
    #[error("unknown nonterminal {0:?}")]
    UnknownNonterminal(String),
    #[error("duplicate nonterminal {0:?}")]
    DuplicateNonterminal(String),
    #[error("rule for {0:?} must have exactly two nonterminals or one terminal")]
    BadRuleShape(String),
    #[error("malformed grammar file: {0}")]
    Malformed(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryRule {
    pub lhs: usize,
    pub left: usize,
    pub right: usize,
    pub cost: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TerminalRule {
    pub lhs: usize,
    pub terminal: String,
    pub cost: u64,
}

/// A CNF grammar with nonnegative rule costs. ε-rules are rejected, so the
/// empty string is never derivable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoredGrammar {
    names: Vec<String>,
    start: usize,
    binary: Vec<BinaryRule>,
    terminal_by_token: BTreeMap<String, Vec<(usize, u64)>>,
    terminal: Vec<TerminalRule>,
}

impl ScoredGrammar {
    pub fn build(
        nonterminals: &[&str],
        start: &str,
        binary: &[(&str, &str, &str, u64)],
        terminal: &[(&str, &str, u64)],
    ) -> Result<ScoredGrammar, GrammarError> {
        let mut names = Vec::new();
        for &n in nonterminals {
            if names.iter().any(|x: &String| x == n) {
                return Err(GrammarError::DuplicateNonterminal(n.into()));
            }
            names.push(n.to_string());
        }
        let index = |name: &str| -> Result<usize, GrammarError> {
            names
                .iter()
                .position(|x| x == name)
                .ok_or_else(|| GrammarError::UnknownNonterminal(name.into()))
        };
        let start = index(start)?;
        let binary = binary
            .iter()
            .map(|&(lhs, l, r, cost)| {
                Ok(BinaryRule { lhs: index(lhs)?, left: index(l)?, right: index(r)?, cost })
            })
            .collect::<Result<Vec<_>, GrammarError>>()?;
        let terminal_rules = terminal
            .iter()
            .map(|&(lhs, tok, cost)| {
                Ok(TerminalRule { lhs: index(lhs)?, terminal: tok.to_string(), cost })
            })
            .collect::<Result<Vec<_>, GrammarError>>()?;
        let mut terminal_by_token: BTreeMap<String, Vec<(usize, u64)>> = BTreeMap::new();
        for rule in &terminal_rules {
            terminal_by_token.entry(rule.terminal.clone()).or_default().push((rule.lhs, rule.cost));
        }
        Ok(ScoredGrammar { names, start, binary, terminal_by_token, terminal: terminal_rules })
    }

    pub fn nonterminal_count(&self) -> usize {
        self.names.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn name(&self, nt: usize) -> &str {
        &self.names[nt]
    }

    pub fn binary_rules(&self) -> &[BinaryRule] {
        &self.binary
    }

    pub fn terminal_rules_for(&self, token: &str) -> &[(usize, u64)] {
        self.terminal_by_token.get(token).map_or(&[], |v| v.as_slice())
    }

    pub fn to_json(&self) -> Value {
        let mut rules: Vec<Value> = self
            .binary
            .iter()
            .map(|r| {
                json!({
                    "lhs": self.names[r.lhs],
                    "rhs": [self.names[r.left], self.names[r.right]],
                    "cost": r.cost,
                })
            })
            .collect();
        rules.extend(self.terminal.iter().map(|r| {
            json!({ "lhs": self.names[r.lhs], "terminal": r.terminal, "cost": r.cost })
        }));
        json!({ "nonterminals": self.names, "start": self.names[self.start], "rules": rules })
    }

    pub fn from_json(value: &Value) -> Result<ScoredGrammar, GrammarError> {
        let names: Vec<&str> = value
            .get("nonterminals")
            .and_then(Value::as_array)
            .ok_or_else(|| GrammarError::Malformed("missing \"nonterminals\"".into()))?
            .iter()
            .map(|v| v.as_str().ok_or_else(|| GrammarError::Malformed("bad nonterminal".into())))
            .collect::<Result<_, _>>()?;
        let start = value
            .get("start")
            .and_then(Value::as_str)
            .ok_or_else(|| GrammarError::Malformed("missing \"start\"".into()))?;
        let mut binary = Vec::new();
        let mut terminal = Vec::new();
        for rule in value
            .get("rules")
            .and_then(Value::as_array)
            .ok_or_else(|| GrammarError::Malformed("missing \"rules\"".into()))?
        {
            let lhs = rule
                .get("lhs")
                .and_then(Value::as_str)
                .ok_or_else(|| GrammarError::Malformed("rule without lhs".into()))?;
            let cost = rule.get("cost").and_then(Value::as_u64).unwrap_or(0);
            match (rule.get("rhs"), rule.get("terminal")) {
                (Some(rhs), None) => {
                    let parts: Vec<&str> = rhs
                        .as_array()
                        .filter(|a| a.len() == 2)
                        .ok_or_else(|| GrammarError::BadRuleShape(lhs.into()))?
                        .iter()
                        .map(|v| v.as_str().ok_or_else(|| GrammarError::BadRuleShape(lhs.into())))
                        .collect::<Result<_, _>>()?;
                    binary.push((lhs, parts[0], parts[1], cost));
                }
                (None, Some(tok)) => {
                    let tok = tok.as_str().ok_or_else(|| GrammarError::BadRuleShape(lhs.into()))?;
                    terminal.push((lhs, tok, cost));
                }
                _ => return Err(GrammarError::BadRuleShape(lhs.into())),
            }
        }
        let binary: Vec<(&str, &str, &str, u64)> = binary.to_vec();
        ScoredGrammar::build(&names, start, &binary, &terminal)
    }
}

/// Grammar whose minimum parse score is the number of unpaired characters:
/// `score(S) = (|S| − parse(S)) / 2`. Complementary characters pair in either
/// orientation, concatenation and pairing are free, skipping a character
/// costs 1.
pub fn rna_unpaired_grammar(alpha: &PairedAlphabet) -> ScoredGrammar {
    let mut nts: Vec<String> = vec!["S".into()];
    for b in 0..alpha.base_count() as u16 {
        let base = alpha.name(b);
        for prefix in ["O", "C", "P", "Ob", "Cb", "Pb"] {
            nts.push(format!("{prefix}_{base}"));
        }
    }
    let nt_refs: Vec<&str> = nts.iter().map(|s| s.as_str()).collect();
    let mut binary: Vec<(String, String, String, u64)> = vec![("S".into(), "S".into(), "S".into(), 0)];
    let mut terminal: Vec<(String, String, u64)> = Vec::new();
    for s in 0..alpha.len() as u16 {
        terminal.push(("S".into(), alpha.name(s), 1));
    }
    for b in 0..alpha.base_count() as u16 {
        let base = alpha.name(b);
        let primed = alpha.name(alpha.partner(b));
        let (o, c, p) = (format!("O_{base}"), format!("C_{base}"), format!("P_{base}"));
        let (ob, cb, pb) = (format!("Ob_{base}"), format!("Cb_{base}"), format!("Pb_{base}"));
        terminal.push((o.clone(), base.clone(), 0));
        terminal.push((c.clone(), primed.clone(), 0));
        terminal.push((ob.clone(), primed.clone(), 0));
        terminal.push((cb.clone(), base.clone(), 0));
        binary.push(("S".into(), o.clone(), c.clone(), 0));
        binary.push(("S".into(), o.clone(), p.clone(), 0));
        binary.push((p.clone(), "S".into(), c.clone(), 0));
        binary.push(("S".into(), ob.clone(), cb.clone(), 0));
        binary.push(("S".into(), ob.clone(), pb.clone(), 0));
        binary.push((pb.clone(), "S".into(), cb.clone(), 0));
    }
    let binary_refs: Vec<(&str, &str, &str, u64)> =
        binary.iter().map(|(a, b, c, w)| (a.as_str(), b.as_str(), c.as_str(), *w)).collect();
    let terminal_refs: Vec<(&str, &str, u64)> =
        terminal.iter().map(|(a, b, w)| (a.as_str(), b.as_str(), *w)).collect();
    ScoredGrammar::build(&nt_refs, "S", &binary_refs, &terminal_refs).expect("preset is well-formed")
}

/// Grammar whose minimum parse score is the Dyck edit distance. Reading a
/// character as the wrong bracket costs one substitution, a lone character
/// costs one deletion, and a bracket closed by a phantom partner costs one
/// insertion.
pub fn dyck_edit_grammar(alpha: &PairedAlphabet) -> ScoredGrammar {
    let mut nts: Vec<String> = vec!["S".into()];
    for b in 0..alpha.base_count() as u16 {
        let base = alpha.name(b);
        for prefix in ["O", "C", "P"] {
            nts.push(format!("{prefix}_{base}"));
        }
    }
    let nt_refs: Vec<&str> = nts.iter().map(|s| s.as_str()).collect();
    let mut binary: Vec<(String, String, String, u64)> = vec![("S".into(), "S".into(), "S".into(), 0)];
    let mut terminal: Vec<(String, String, u64)> = Vec::new();
    for s in 0..alpha.len() as u16 {
        terminal.push(("S".into(), alpha.name(s), 1));
    }
    for b in 0..alpha.base_count() as u16 {
        let base = alpha.name(b);
        let primed = alpha.name(alpha.partner(b));
        let (o, c, p) = (format!("O_{base}"), format!("C_{base}"), format!("P_{base}"));
        for s in 0..alpha.len() as u16 {
            let tok = alpha.name(s);
            terminal.push((o.clone(), tok.clone(), u64::from(tok != base)));
            terminal.push((c.clone(), tok.clone(), u64::from(tok != primed)));
        }
        binary.push(("S".into(), o.clone(), c.clone(), 0));
        binary.push(("S".into(), o.clone(), p.clone(), 0));
        binary.push((p.clone(), "S".into(), c.clone(), 0));
        binary.push(("S".into(), o.clone(), "S".into(), 1));
        binary.push(("S".into(), "S".into(), c.clone(), 1));
    }
    let binary_refs: Vec<(&str, &str, &str, u64)> =
        binary.iter().map(|(a, b, c, w)| (a.as_str(), b.as_str(), c.as_str(), *w)).collect();
    let terminal_refs: Vec<(&str, &str, u64)> =
        terminal.iter().map(|(a, b, w)| (a.as_str(), b.as_str(), *w)).collect();
    ScoredGrammar::build(&nt_refs, "S", &binary_refs, &terminal_refs).expect("preset is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn toy() -> ScoredGrammar {
        ScoredGrammar::build(
            &["S", "A", "B"],
            "S",
            &[("S", "A", "B", 0)],
            &[("A", "a", 0), ("B", "b", 1)],
        )
        .unwrap()
    }

    #[test]
    fn build_validates_names() {
        assert_eq!(
            ScoredGrammar::build(&["S"], "T", &[], &[]),
            Err(GrammarError::UnknownNonterminal("T".into()))
        );
        assert_eq!(
            ScoredGrammar::build(&["S", "S"], "S", &[], &[]),
            Err(GrammarError::DuplicateNonterminal("S".into()))
        );
    }

    #[test]
    fn json_round_trip() {
        let g = toy();
        let back = ScoredGrammar::from_json(&g.to_json()).unwrap();
        assert_eq!(g, back);
        // ε-ish rules are rejected.
        let bad = serde_json::json!({
            "nonterminals": ["S"], "start": "S",
            "rules": [{"lhs": "S", "rhs": ["S"], "cost": 0}],
        });
        assert!(ScoredGrammar::from_json(&bad).is_err());
    }
}
