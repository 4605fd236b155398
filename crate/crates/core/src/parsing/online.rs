//! Online scored parsing: per-prefix minimum parse scores in one pass.
//!
//! The processed prefix is partitioned into segments whose lengths follow the
//! binary representation of `t`, largest first. When a character arrives, the
//! segments answer right to left, each extending the suffix answer set
//! `Q_t = {F_{[i..t]}}` across itself, until `F_{[1..t]}` falls out; then the
//! partition is updated, creating one fresh segment per carry. A segment of
//! length `s` answers exactly `s` queries before its bit resets.

use std::sync::Arc;

use crate::ext_int::ExtInt;
use crate::folding::{FoldingError, PairedAlphabet, Sym};
use crate::parsing::grammar::{dyck_edit_grammar, rna_unpaired_grammar, ScoredGrammar};
use crate::parsing::segment::SegmentEngine;
use crate::parsing::semiring::FunctionMap;

/// Interval lengths of the partition of `[1, t]`: the set bits of `t` in
/// falling order.
pub fn partition_sizes(t: usize) -> Vec<usize> {
    (0..usize::BITS)
        .rev()
        .map(|b| 1usize << b)
        .filter(|&p| t & p != 0)
        .collect()
}

pub struct OnlineParser {
    grammar: Arc<ScoredGrammar>,
    tokens: Vec<String>,
    engines: Vec<SegmentEngine>,
}

impl OnlineParser {
    pub fn new(grammar: ScoredGrammar) -> OnlineParser {
        OnlineParser { grammar: Arc::new(grammar), tokens: Vec::new(), engines: Vec::new() }
    }

    pub fn position(&self) -> usize {
        self.tokens.len()
    }

    /// Current partition as `(start, len)` pairs, for invariant checks.
    pub fn partition(&self) -> Vec<(usize, usize)> {
        self.engines.iter().map(|e| (e.start(), e.len())).collect()
    }

    /// Feeds one token; returns the minimum score generating the whole
    /// current prefix from the start symbol.
    pub fn feed(&mut self, token: &str) -> ExtInt {
        self.tokens.push(token.to_string());
        let t = self.tokens.len();

        // answers[i] = F_{[i..t]} for start positions i (1-based), filled
        // right to left starting from the fresh character.
        let mut answers: Vec<Option<FunctionMap>> = vec![None; t + 1];
        answers[t] = Some(FunctionMap::from_terminal(&self.grammar, token));
        for engine in self.engines.iter_mut().rev() {
            let (p, s) = (engine.start(), engine.len());
            let v: Vec<FunctionMap> =
                (p + s..=t).map(|i| answers[i].clone().expect("suffix answered")).collect();
            let result = engine.query(&v).expect("partition bounds engine lifetime");
            for (offset, f) in result.into_iter().enumerate() {
                answers[p + offset] = Some(f);
            }
        }
        let out = answers[1].as_ref().expect("cascade reaches position 1").value(self.grammar.start());

        // Update the partition: keep the unchanged prefix, create the rest.
        let mut desired = Vec::new();
        let mut start = 1usize;
        for len in partition_sizes(t) {
            desired.push((start, len));
            start += len;
        }
        let keep = self
            .engines
            .iter()
            .zip(&desired)
            .take_while(|(e, &(p, s))| e.start() == p && e.len() == s)
            .count();
        self.engines.truncate(keep);
        for &(p, s) in &desired[keep..] {
            let tokens = &self.tokens[p - 1..p - 1 + s];
            self.engines.push(SegmentEngine::new(Arc::clone(&self.grammar), p, tokens));
        }
        out
    }
}

/// Runs the online parser over a whole stream, yielding one score per prefix.
pub fn online_parse(grammar: &ScoredGrammar, tokens: &[String]) -> Vec<ExtInt> {
    let mut parser = OnlineParser::new(grammar.clone());
    tokens.iter().map(|tok| parser.feed(tok)).collect()
}

/// Online RNA folding: per-prefix maximum folding sizes.
///
/// The unpaired-characters grammar turns the maximization into a
/// minimization: `score = (t − parse) / 2` at prefix length `t`.
pub fn online_rna(alpha: &PairedAlphabet, stream: &[Sym]) -> Result<Vec<ExtInt>, FoldingError> {
    for &s in stream {
        if !alpha.contains(s) {
            return Err(FoldingError::UnknownSymbol(s));
        }
    }
    let grammar = rna_unpaired_grammar(alpha);
    let mut parser = OnlineParser::new(grammar);
    Ok(stream
        .iter()
        .enumerate()
        .map(|(idx, &s)| {
            let parse = parser.feed(&alpha.name(s)).expect_finite("every prefix is repairable");
            ExtInt::Fin((idx as i128 + 1 - parse) / 2)
        })
        .collect())
}

/// Online Dyck edit distance: per-prefix distances to the Dyck language.
pub fn online_dyck(alpha: &PairedAlphabet, stream: &[Sym]) -> Result<Vec<ExtInt>, FoldingError> {
    for &s in stream {
        if !alpha.contains(s) {
            return Err(FoldingError::UnknownSymbol(s));
        }
    }
    let grammar = dyck_edit_grammar(alpha);
    let mut parser = OnlineParser::new(grammar);
    Ok(stream.iter().map(|&s| parser.feed(&alpha.name(s))).collect())
}
