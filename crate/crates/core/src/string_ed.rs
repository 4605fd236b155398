//! String edit distance over arbitrary cost tables.

use crate::cost::CostTable;
use crate::ext_int::ExtInt;
use crate::label::LabelId;

/// Minimum total cost of transforming `a` into `b` with the substitutions,
/// deletions and insertions priced by `delta`. The classical quadratic DP;
/// rows are streamed, entries may be negative or forbidden.
pub fn string_ed(a: &[LabelId], b: &[LabelId], delta: &CostTable) -> ExtInt {
    let mut prev: Vec<ExtInt> = Vec::with_capacity(b.len() + 1);
    prev.push(ExtInt::ZERO);
    for &bj in b {
        prev.push(*prev.last().unwrap() + delta.insertion(bj));
    }
    let mut cur = vec![ExtInt::ZERO; b.len() + 1];
    for &ai in a {
        cur[0] = prev[0] + delta.deletion(ai);
        for (j, &bj) in b.iter().enumerate() {
            let sub = prev[j] + delta.substitution(ai, bj);
            let del = prev[j + 1] + delta.deletion(ai);
            let ins = cur[j] + delta.insertion(bj);
            cur[j + 1] = sub.min(del).min(ins);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Like [`string_ed`], additionally returning one optimal monotone alignment
/// as index pairs `(i, j)` into `a` and `b` (ascending, deterministic:
/// aligning is preferred over deleting over inserting on ties).
pub fn string_ed_with_alignment(
    a: &[LabelId],
    b: &[LabelId],
    delta: &CostTable,
) -> (ExtInt, Vec<(usize, usize)>) {
    let (n, m) = (a.len(), b.len());
    let mut dp = vec![vec![ExtInt::ZERO; m + 1]; n + 1];
    for j in 1..=m {
        dp[0][j] = dp[0][j - 1] + delta.insertion(b[j - 1]);
    }
    for i in 1..=n {
        dp[i][0] = dp[i - 1][0] + delta.deletion(a[i - 1]);
        for j in 1..=m {
            let sub = dp[i - 1][j - 1] + delta.substitution(a[i - 1], b[j - 1]);
            let del = dp[i - 1][j] + delta.deletion(a[i - 1]);
            let ins = dp[i][j - 1] + delta.insertion(b[j - 1]);
            dp[i][j] = sub.min(del).min(ins);
        }
    }
    let mut pairs = Vec::new();
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        if i > 0 && j > 0 && dp[i][j] == dp[i - 1][j - 1] + delta.substitution(a[i - 1], b[j - 1]) {
            pairs.push((i - 1, j - 1));
            i -= 1;
            j -= 1;
        } else if i > 0 && dp[i][j] == dp[i - 1][j] + delta.deletion(a[i - 1]) {
            i -= 1;
        } else {
            j -= 1;
        }
    }
    pairs.reverse();
    (dp[n][m], pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext_int::Fin;
    use crate::label::LabelRegistry;

    fn seq(reg: &mut LabelRegistry, s: &str) -> Vec<LabelId> {
        s.chars().map(|c| reg.intern(&c.to_string())).collect()
    }

    /// Independent oracle: enumerate all monotone alignments recursively.
    fn brute_ed(a: &[LabelId], b: &[LabelId], delta: &CostTable) -> ExtInt {
        if a.is_empty() {
            return b.iter().map(|&x| delta.insertion(x)).sum();
        }
        if b.is_empty() {
            return a.iter().map(|&x| delta.deletion(x)).sum();
        }
        let sub = brute_ed(&a[1..], &b[1..], delta) + delta.substitution(a[0], b[0]);
        let del = brute_ed(&a[1..], b, delta) + delta.deletion(a[0]);
        let ins = brute_ed(a, &b[1..], delta) + delta.insertion(b[0]);
        sub.min(del).min(ins)
    }

    #[test]
    fn empty_to_abc_is_three_insertions() {
        let mut reg = LabelRegistry::new();
        let abc = seq(&mut reg, "abc");
        assert_eq!(string_ed(&[], &abc, &CostTable::unit()), Fin(3));
        assert_eq!(string_ed(&abc, &[], &CostTable::unit()), Fin(3));
        assert_eq!(string_ed(&[], &[], &CostTable::unit()), ExtInt::ZERO);
    }

    #[test]
    fn kitten_sitting_matches_brute_force() {
        let mut reg = LabelRegistry::new();
        let a = seq(&mut reg, "kitten");
        let b = seq(&mut reg, "sitting");
        let unit = CostTable::unit();
        let expected = brute_ed(&a, &b, &unit);
        assert_eq!(expected, Fin(3));
        assert_eq!(string_ed(&a, &b, &unit), expected);
    }

    #[test]
    fn agrees_with_brute_force_on_random_short_strings() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut reg = LabelRegistry::new();
        let sigma: Vec<LabelId> = ["a", "b", "c"].iter().map(|s| reg.intern(s)).collect();
        let unit = CostTable::unit();
        for _ in 0..200 {
            let la = rng.random_range(0..=6);
            let lb = rng.random_range(0..=6);
            let a: Vec<LabelId> = (0..la).map(|_| sigma[rng.random_range(0..3)]).collect();
            let b: Vec<LabelId> = (0..lb).map(|_| sigma[rng.random_range(0..3)]).collect();
            assert_eq!(string_ed(&a, &b, &unit), brute_ed(&a, &b, &unit));
        }
    }

    #[test]
    fn alignment_extraction_rescored() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let mut reg = LabelRegistry::new();
        let sigma: Vec<LabelId> = ["a", "b", "c"].iter().map(|s| reg.intern(s)).collect();
        let unit = CostTable::unit();
        for _ in 0..100 {
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let l = rng.random_range(0..=8);
                (0..l).map(|_| sigma[rng.random_range(0..3)]).collect::<Vec<_>>()
            };
            let (a, b) = (mk(&mut rng), mk(&mut rng));
            let (cost, pairs) = string_ed_with_alignment(&a, &b, &unit);
            assert_eq!(cost, string_ed(&a, &b, &unit));
            // Pairs are strictly increasing in both coordinates.
            assert!(pairs.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1));
            // Re-score: substitutions plus gaps on both sides.
            let subs: ExtInt = pairs.iter().map(|&(i, j)| unit.substitution(a[i], b[j])).sum();
            let gaps = Fin((a.len() + b.len() - 2 * pairs.len()) as i128);
            assert_eq!(subs + gaps, cost);
        }
    }

    #[test]
    fn unit_distance_is_symmetric_and_triangular() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut reg = LabelRegistry::new();
        let sigma: Vec<LabelId> = ["a", "b"].iter().map(|s| reg.intern(s)).collect();
        let unit = CostTable::unit();
        for _ in 0..100 {
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let l = rng.random_range(0..=10);
                (0..l).map(|_| sigma[rng.random_range(0..2)]).collect::<Vec<_>>()
            };
            let (a, b, c) = (mk(&mut rng), mk(&mut rng), mk(&mut rng));
            assert_eq!(string_ed(&a, &a, &unit), ExtInt::ZERO);
            assert_eq!(string_ed(&a, &b, &unit), string_ed(&b, &a, &unit));
            let (ab, bc, ac) = (
                string_ed(&a, &b, &unit).expect_finite("ab"),
                string_ed(&b, &c, &unit).expect_finite("bc"),
                string_ed(&a, &c, &unit).expect_finite("ac"),
            );
            assert!(ac <= ab + bc);
        }
    }
}
