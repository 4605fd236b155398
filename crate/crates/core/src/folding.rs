//! RNA folding, Dyck edit distance, and the embeddings between them.
//!
//! Strings live over a paired alphabet: every base symbol `σ` has a partner
//! `σ'`. A folding is a non-crossing set of complementary index pairs; RNA
//! folding maximizes its size or weight. Dyck edit distance asks for the
//! minimum number of edits to a well-balanced string, where `σ` may only close
//! against a later `σ'`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ext_int::{ExtInt, Fin};

/// Symbol index into a [`PairedAlphabet`]: `0..k` are base symbols, `k..2k`
/// their partners.
pub type Sym = u16;

/// Default length cap for the cubic interval DPs.
pub const MAX_DP_LEN: usize = 4096;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FoldingError {
    #[error("symbol {0} outside the alphabet")]
    UnknownSymbol(Sym),
    #[error("unknown symbol name {0:?}")]
    UnknownName(String),
    #[error("brute-force folding limited to {guard} characters, got {len}")]
    TooLong { len: usize, guard: usize },
    #[error("weight function must be ≥ 1 and invariant under pairing")]
    BadWeights,
}

/// A paired alphabet `Σ ∪ Σ'` with the pairing involution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairedAlphabet {
    /// Names of the base symbols; partner names get a trailing `'`.
    base_names: Vec<String>,
}

impl PairedAlphabet {
    pub fn new(base_names: &[&str]) -> PairedAlphabet {
        PairedAlphabet { base_names: base_names.iter().map(|s| s.to_string()).collect() }
    }

    pub fn from_names(base_names: Vec<String>) -> PairedAlphabet {
        PairedAlphabet { base_names }
    }

    /// Number of base symbols.
    pub fn base_count(&self) -> usize {
        self.base_names.len()
    }

    /// Total number of symbols, base and primed.
    pub fn len(&self) -> usize {
        2 * self.base_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base_names.is_empty()
    }

    pub fn contains(&self, s: Sym) -> bool {
        (s as usize) < self.len()
    }

    pub fn is_base(&self, s: Sym) -> bool {
        (s as usize) < self.base_count()
    }

    /// The pairing involution `p`.
    pub fn partner(&self, s: Sym) -> Sym {
        let k = self.base_count() as Sym;
        if s < k {
            s + k
        } else {
            s - k
        }
    }

    pub fn name(&self, s: Sym) -> String {
        if self.is_base(s) {
            self.base_names[s as usize].clone()
        } else {
            format!("{}'", self.base_names[s as usize - self.base_count()])
        }
    }

    pub fn lookup(&self, name: &str) -> Option<Sym> {
        if let Some(stripped) = name.strip_suffix('\'') {
            let i = self.base_names.iter().position(|b| b == stripped)?;
            Some((i + self.base_count()) as Sym)
        } else {
            self.base_names.iter().position(|b| b == name).map(|i| i as Sym)
        }
    }

    fn check(&self, s: &[Sym]) -> Result<(), FoldingError> {
        match s.iter().find(|&&x| !self.contains(x)) {
            Some(&x) => Err(FoldingError::UnknownSymbol(x)),
            None => Ok(()),
        }
    }
}

fn check_weights(alpha: &PairedAlphabet, weights: &[u64]) -> Result<(), FoldingError> {
    if weights.len() != alpha.len() {
        return Err(FoldingError::BadWeights);
    }
    for s in 0..alpha.len() as Sym {
        if weights[s as usize] == 0 || weights[s as usize] != weights[alpha.partner(s) as usize] {
            return Err(FoldingError::BadWeights);
        }
    }
    Ok(())
}

/// Maximum folding size: the classical cubic interval DP.
pub fn rna_score(s: &[Sym], alpha: &PairedAlphabet) -> Result<ExtInt, FoldingError> {
    let ones = vec![1u64; alpha.len()];
    rna_score_weighted(s, alpha, &ones)
}

/// Maximum folding weight `Σ w(S[i])` over the opening positions of pairs.
pub fn rna_score_weighted(
    s: &[Sym],
    alpha: &PairedAlphabet,
    weights: &[u64],
) -> Result<ExtInt, FoldingError> {
    alpha.check(s)?;
    check_weights(alpha, weights)?;
    if s.len() > MAX_DP_LEN {
        return Err(FoldingError::TooLong { len: s.len(), guard: MAX_DP_LEN });
    }
    let n = s.len();
    // table[i][j] = best score on the half-open interval [i, j).
    let mut table = vec![vec![0i128; n + 1]; n + 1];
    for span in 2..=n {
        for i in 0..=n - span {
            let j = i + span;
            let mut best = table[i + 1][j];
            for m in i + 1..j {
                if alpha.partner(s[i]) == s[m] {
                    let candidate =
                        weights[s[i] as usize] as i128 + table[i + 1][m] + table[m + 1][j];
                    best = best.max(candidate);
                }
            }
            table[i][j] = best;
        }
    }
    Ok(Fin(table[0][n]))
}

/// Expansion of a weighted instance into an unweighted one: every character is
/// repeated `w(s)` times, and the maximum weighted folding of the original
/// equals the maximum folding size of the expansion.
pub fn expand_weighted(
    s: &[Sym],
    alpha: &PairedAlphabet,
    weights: &[u64],
) -> Result<Vec<Sym>, FoldingError> {
    alpha.check(s)?;
    check_weights(alpha, weights)?;
    let mut out = Vec::new();
    for &x in s {
        out.extend(std::iter::repeat_n(x, weights[x as usize] as usize));
    }
    Ok(out)
}

/// Exhaustive folding maximization by recursing over all non-crossing
/// complementary pairings; no memoization, guarded to short strings.
pub fn brute_force_folding(s: &[Sym], alpha: &PairedAlphabet) -> Result<ExtInt, FoldingError> {
    const GUARD: usize = 14;
    alpha.check(s)?;
    if s.len() > GUARD {
        return Err(FoldingError::TooLong { len: s.len(), guard: GUARD });
    }
    fn go(s: &[Sym], alpha: &PairedAlphabet) -> i128 {
        if s.len() < 2 {
            return 0;
        }
        let mut best = go(&s[1..], alpha);
        for m in 1..s.len() {
            if alpha.partner(s[0]) == s[m] {
                best = best.max(1 + go(&s[1..m], alpha) + go(&s[m + 1..], alpha));
            }
        }
        best
    }
    Ok(Fin(go(s, alpha)))
}

/// Cost of closing the bracket pair `(x … y)`: free for a proper pair, one
/// substitution if a single end is off, two if the ends point the wrong way.
fn pair_cost(alpha: &PairedAlphabet, x: Sym, y: Sym) -> i128 {
    if alpha.is_base(x) && y == alpha.partner(x) {
        0
    } else if !alpha.is_base(x) && alpha.is_base(y) {
        2
    } else {
        1
    }
}

/// Minimum number of edits turning `s` into a balanced string: cubic interval
/// DP with split, pair-ends and delete transitions.
#[allow(clippy::needless_range_loop)]
pub fn dyck_ed(s: &[Sym], alpha: &PairedAlphabet) -> Result<ExtInt, FoldingError> {
    alpha.check(s)?;
    if s.len() > MAX_DP_LEN {
        return Err(FoldingError::TooLong { len: s.len(), guard: MAX_DP_LEN });
    }
    let n = s.len();
    let mut table = vec![vec![0i128; n + 1]; n + 1];
    for i in 0..n {
        table[i][i + 1] = 1;
    }
    for span in 2..=n {
        for i in 0..=n - span {
            let j = i + span;
            let mut best = pair_cost(alpha, s[i], s[j - 1]) + table[i + 1][j - 1];
            for m in i + 1..j {
                best = best.min(table[i][m] + table[m][j]);
            }
            table[i][j] = best;
        }
    }
    Ok(Fin(table[0][n]))
}

/// Stack acceptor for the Dyck language over `alpha`.
pub fn is_balanced(s: &[Sym], alpha: &PairedAlphabet) -> bool {
    let mut stack = Vec::new();
    for &x in s {
        if alpha.is_base(x) {
            stack.push(x);
        } else if stack.pop() != Some(alpha.partner(x)) {
            return false;
        }
    }
    stack.is_empty()
}

/// The image alphabet of [`dyck_embed`]: per base symbol `σ` two bracket kinds
/// `0_σ`, `1_σ`, plus one never-closed marker `#`.
pub fn embed_alphabet(alpha: &PairedAlphabet) -> PairedAlphabet {
    let mut names: Vec<String> = Vec::new();
    for s in 0..alpha.base_count() as Sym {
        names.push(format!("0_{}", alpha.name(s)));
        names.push(format!("1_{}", alpha.name(s)));
    }
    names.push("#".into());
    PairedAlphabet { base_names: names }
}

/// Character-wise embedding of folding into Dyck edit distance:
/// `σ ↦ 0_σ # 1'_σ 0_σ # 1'_σ` and `σ' ↦ 1_σ # 0'_σ 1_σ # 0'_σ`, satisfying
/// `dyck(Φ(S)) = 3|S| − 2·score(S)`.
///
/// The `σ'` image mirrors the `σ` image: an unedited block costs 3 on its
/// own, a complementary pair (in either orientation) lets the two anchor
/// brackets of one block close against the other and costs 4 in total.
pub fn dyck_embed(s: &[Sym], alpha: &PairedAlphabet) -> Result<Vec<Sym>, FoldingError> {
    alpha.check(s)?;
    let image = embed_alphabet(alpha);
    let k = image.base_count() as Sym;
    let zero = |b: Sym| 2 * b;
    let one = |b: Sym| 2 * b + 1;
    let hash = k - 1;
    let mut out = Vec::with_capacity(6 * s.len());
    for &x in s {
        if alpha.is_base(x) {
            out.extend_from_slice(&[zero(x), hash, one(x) + k, zero(x), hash, one(x) + k]);
        } else {
            let b = alpha.partner(x);
            out.extend_from_slice(&[one(b), hash, zero(b) + k, one(b), hash, zero(b) + k]);
        }
    }
    Ok(out)
}

/// Parses either a whitespace-separated list of symbol names, or (for
/// single-character alphabets) a compact string where uppercase marks the
/// primed partner.
pub fn parse_symbols(alpha: &PairedAlphabet, text: &str) -> Result<Vec<Sym>, FoldingError> {
    let text = text.trim();
    if !text.contains(char::is_whitespace)
        && alpha.base_names.iter().all(|n| n.chars().count() == 1)
    {
        return text
            .chars()
            .map(|c| {
                let lower = c.to_ascii_lowercase().to_string();
                let sym = alpha.lookup(&lower).ok_or(FoldingError::UnknownName(c.to_string()))?;
                Ok(if c.is_ascii_uppercase() { alpha.partner(sym) } else { sym })
            })
            .collect();
    }
    text.split_whitespace()
        .map(|t| {
            if let Some(sym) = alpha.lookup(t) {
                return Ok(sym);
            }
            // Single uppercase letters name the primed partner.
            let mut chars = t.chars();
            if let (Some(c), None) = (chars.next(), chars.next()) {
                if c.is_ascii_uppercase() {
                    if let Some(sym) = alpha.lookup(&c.to_ascii_lowercase().to_string()) {
                        return Ok(alpha.partner(sym));
                    }
                }
            }
            Err(FoldingError::UnknownName(t.to_string()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;

    fn ab() -> PairedAlphabet {
        PairedAlphabet::new(&["a", "b"])
    }

    /// `s("aA")` = `a a'` with uppercase marking primed symbols.
    fn s(alpha: &PairedAlphabet, text: &str) -> Vec<Sym> {
        parse_symbols(alpha, text).unwrap()
    }

    #[test]
    fn single_pair_scores_one() {
        let alpha = ab();
        assert_eq!(rna_score(&s(&alpha, "aA"), &alpha), Ok(Fin(1)));
        // Reversed orientation also pairs in RNA folding.
        assert_eq!(rna_score(&s(&alpha, "Aa"), &alpha), Ok(Fin(1)));
    }

    #[test]
    fn crossing_is_forbidden() {
        let alpha = ab();
        assert_eq!(rna_score(&s(&alpha, "abAB"), &alpha), Ok(Fin(1)));
        assert_eq!(rna_score(&s(&alpha, "aabBAA"), &alpha), Ok(Fin(3)));
        assert_eq!(brute_force_folding(&s(&alpha, "aAaA"), &alpha), Ok(Fin(2)));
        assert_eq!(brute_force_folding(&[], &alpha), Ok(Fin(0)));
    }

    #[test]
    fn brute_force_agrees_with_dp() {
        let alpha = ab();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let len = rng.random_range(0..=12);
            let string: Vec<Sym> = (0..len).map(|_| rng.random_range(0..4) as Sym).collect();
            assert_eq!(
                rna_score(&string, &alpha).unwrap(),
                brute_force_folding(&string, &alpha).unwrap()
            );
        }
        let long = vec![0u16; 15];
        assert!(matches!(brute_force_folding(&long, &alpha), Err(FoldingError::TooLong { .. })));
        let too_long = vec![0u16; MAX_DP_LEN + 1];
        assert!(matches!(rna_score(&too_long, &alpha), Err(FoldingError::TooLong { .. })));
        assert!(matches!(dyck_ed(&too_long, &alpha), Err(FoldingError::TooLong { .. })));
    }

    #[test]
    fn weighted_expansion_identity() {
        let alpha = ab();
        let weights = vec![2, 3, 2, 3];
        let string = s(&alpha, "aA");
        let expanded = expand_weighted(&string, &alpha, &weights).unwrap();
        assert_eq!(expanded.len(), 4);
        assert_eq!(rna_score(&expanded, &alpha), Ok(Fin(2)));
        assert_eq!(rna_score_weighted(&string, &alpha, &weights), Ok(Fin(2)));

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let len = rng.random_range(0..=8);
            let string: Vec<Sym> = (0..len).map(|_| rng.random_range(0..4) as Sym).collect();
            let w_a = rng.random_range(1..=4);
            let w_b = rng.random_range(1..=4);
            let weights = vec![w_a, w_b, w_a, w_b];
            let expanded = expand_weighted(&string, &alpha, &weights).unwrap();
            assert_eq!(
                rna_score_weighted(&string, &alpha, &weights).unwrap(),
                rna_score(&expanded, &alpha).unwrap()
            );
        }
    }

    #[test]
    fn all_weights_one_expansion_is_identity() {
        let alpha = ab();
        let string = s(&alpha, "abBA");
        assert_eq!(expand_weighted(&string, &alpha, &[1; 4]).unwrap(), string);
    }

    #[test]
    fn dyck_small_cases() {
        let alpha = ab();
        assert_eq!(dyck_ed(&s(&alpha, "aA"), &alpha), Ok(Fin(0)));
        assert_eq!(dyck_ed(&s(&alpha, "A"), &alpha), Ok(Fin(1)));
        assert_eq!(dyck_ed(&s(&alpha, "Aa"), &alpha), Ok(Fin(2)));
        assert_eq!(dyck_ed(&s(&alpha, "aB"), &alpha), Ok(Fin(1)));
        assert_eq!(dyck_ed(&s(&alpha, "abAB"), &alpha), Ok(Fin(2)));
        assert_eq!(dyck_ed(&[], &alpha), Ok(Fin(0)));
    }

    #[test]
    fn dyck_zero_iff_balanced() {
        let alpha = ab();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..500 {
            let len = rng.random_range(0..=10);
            let string: Vec<Sym> = (0..len).map(|_| rng.random_range(0..4) as Sym).collect();
            let zero = dyck_ed(&string, &alpha).unwrap() == Fin(0);
            assert_eq!(zero, is_balanced(&string, &alpha), "string {string:?}");
        }
    }

    #[test]
    fn embedding_identity_small() {
        let alpha = ab();
        let string = s(&alpha, "aA");
        let image = dyck_embed(&string, &alpha).unwrap();
        assert_eq!(image.len(), 12);
        let image_alpha = embed_alphabet(&alpha);
        assert_eq!(dyck_ed(&image, &image_alpha), Ok(Fin(3 * 2 - 2)));
    }

    #[test]
    fn embedding_identity_no_pairs() {
        let alpha = ab();
        // Same-orientation symbols only: score 0, distance 3·|S|.
        let string = s(&alpha, "aaaa");
        let image = dyck_embed(&string, &alpha).unwrap();
        let image_alpha = embed_alphabet(&alpha);
        assert_eq!(dyck_ed(&image, &image_alpha), Ok(Fin(12)));
    }

    #[test]
    fn embedding_identity_random() {
        for base in [1usize, 2, 3] {
            let names: Vec<String> = (0..base).map(|i| format!("s{i}")).collect();
            let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            let alpha = PairedAlphabet::new(&refs);
            let image_alpha = embed_alphabet(&alpha);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(base as u64);
            for _ in 0..40 {
                let len = rng.random_range(0..=6);
                let string: Vec<Sym> =
                    (0..len).map(|_| rng.random_range(0..2 * base) as Sym).collect();
                let score = rna_score(&string, &alpha).unwrap().expect_finite("score");
                let image = dyck_embed(&string, &alpha).unwrap();
                let d = dyck_ed(&image, &image_alpha).unwrap();
                assert_eq!(d, Fin(3 * len as i128 - 2 * score), "string {string:?}");
            }
        }
    }

    #[test]
    fn symbol_parsing() {
        let alpha = ab();
        assert_eq!(s(&alpha, "aA"), vec![0, 2]);
        assert_eq!(s(&alpha, "a a' b b'"), vec![0, 2, 1, 3]);
        assert!(parse_symbols(&alpha, "xyz").is_err());
    }
}
