//! Embedding numbers, weighted insertion/deletion balls and the weighted
//! log-sum `W_S(y) = Σ_{x∈S} ω log2 ω`.

use std::collections::{BTreeMap, HashSet};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::math::{binomial, checked_pow, pairwise_sum, xlog2x_count};
use crate::words::{alternating_profile, run_length_profile, Word};

/// Number of index sets at which `y` occurs as a subsequence of `x`.
///
/// `ω_ε(x) = 1` and `ω_y(x) = 0` when `|y| > |x|`.
pub fn embedding_number(y: &Word, x: &Word) -> Result<u128> {
    if y.q() != x.q() {
        return Err(Error::AlphabetMismatch {
            left: y.q(),
            right: x.q(),
        });
    }
    embedding_number_raw(y.symbols(), x.symbols())
}

/// Prefix DP: after consuming `x[..i]`, `ways[j]` counts embeddings of `y[..j]`.
pub(crate) fn embedding_number_raw(y: &[u8], x: &[u8]) -> Result<u128> {
    if y.len() > x.len() {
        return Ok(0);
    }
    let slack = x.len() - y.len();
    let mut ways = vec![0u128; y.len() + 1];
    ways[0] = 1;
    for (i, &c) in x.iter().enumerate() {
        // y[..j] can only be finished inside x[..=i] if j <= i+1, and is only
        // useful if the rest of y still fits: j >= i+1-slack.
        let hi = y.len().min(i + 1);
        let lo = (i + 1).saturating_sub(slack).max(1);
        for j in (lo..=hi).rev() {
            if y[j - 1] == c {
                ways[j] = ways[j].checked_add(ways[j - 1]).ok_or(Error::Overflow)?;
            }
        }
    }
    Ok(ways[y.len()])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BallKind {
    Insertion,
    Deletion,
}

/// `I_k(center)` or `D_k(center)` with each member's embedding count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedBall {
    pub center: Word,
    pub radius: usize,
    pub kind: BallKind,
    pub entries: BTreeMap<Word, u128>,
}

impl WeightedBall {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> Result<u128> {
        self.entries
            .values()
            .try_fold(0u128, |acc, &c| acc.checked_add(c))
            .ok_or(Error::Overflow)
    }

    /// `C(n+k, k) q^k` for insertion balls, `C(n, k)` for deletion balls.
    pub fn expected_total(&self) -> Result<u128> {
        let n = self.center.len() as u64;
        let k = self.radius as u64;
        match self.kind {
            BallKind::Insertion => binomial(n + k, k)?
                .checked_mul(checked_pow(u64::from(self.center.q()), self.radius as u32)?)
                .ok_or(Error::Overflow),
            BallKind::Deletion => binomial(n, k),
        }
    }

    /// Embedding-count spectrum as `(count, multiplicity)`, ascending by count.
    pub fn spectrum(&self) -> Vec<(u128, u128)> {
        let mut histogram = BTreeMap::new();
        for &c in self.entries.values() {
            *histogram.entry(c).or_insert(0u128) += 1;
        }
        histogram.into_iter().collect()
    }

    /// Sorted `word,count` CSV with a header row.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["word", "count"])?;
        for (word, count) in &self.entries {
            writer.write_record([word.to_string(), count.to_string()])?;
        }
        writer.flush()
    }
}

/// All distinct `k`-supersequences of `y`.
///
/// A symbol is only inserted directly before a different symbol (or at the
/// end), which already makes each single-insertion step duplicate-free.
pub fn supersequences(y: &Word, k: usize) -> HashSet<Word> {
    let q = y.q();
    let mut current: HashSet<Vec<u8>> = HashSet::from([y.symbols().to_vec()]);
    for _ in 0..k {
        let mut next = HashSet::with_capacity(current.len() * (q as usize) * 2);
        for w in &current {
            for pos in 0..=w.len() {
                for s in 0..q {
                    if pos < w.len() && w[pos] == s {
                        continue;
                    }
                    let mut v = Vec::with_capacity(w.len() + 1);
                    v.extend_from_slice(&w[..pos]);
                    v.push(s);
                    v.extend_from_slice(&w[pos..]);
                    next.insert(v);
                }
            }
        }
        current = next;
    }
    current
        .into_iter()
        .map(|v| Word::from_parts_unchecked(v, q))
        .collect()
}

/// All distinct `k`-subsequences of `y`, deleting one symbol per run at a time.
pub fn subsequences(y: &Word, k: usize) -> Result<HashSet<Word>> {
    if k > y.len() {
        return Err(invalid(format!(
            "cannot delete {k} symbols from a word of length {}",
            y.len()
        )));
    }
    let q = y.q();
    let mut current: HashSet<Vec<u8>> = HashSet::from([y.symbols().to_vec()]);
    for _ in 0..k {
        let mut next = HashSet::with_capacity(current.len() * 4);
        for w in &current {
            for pos in 0..w.len() {
                if pos > 0 && w[pos - 1] == w[pos] {
                    continue;
                }
                let mut v = w.clone();
                v.remove(pos);
                next.insert(v);
            }
        }
        current = next;
    }
    Ok(current
        .into_iter()
        .map(|v| Word::from_parts_unchecked(v, q))
        .collect())
}

pub fn insertion_ball(y: &Word, k: usize) -> Result<WeightedBall> {
    let mut entries = BTreeMap::new();
    for x in supersequences(y, k) {
        let count = embedding_number_raw(y.symbols(), x.symbols())?;
        entries.insert(x, count);
    }
    Ok(WeightedBall {
        center: y.clone(),
        radius: k,
        kind: BallKind::Insertion,
        entries,
    })
}

pub fn deletion_ball(y: &Word, k: usize) -> Result<WeightedBall> {
    let mut entries = BTreeMap::new();
    for x in subsequences(y, k)? {
        let count = embedding_number_raw(x.symbols(), y.symbols())?;
        entries.insert(x, count);
    }
    Ok(WeightedBall {
        center: y.clone(),
        radius: k,
        kind: BallKind::Deletion,
        entries,
    })
}

pub fn ball(y: &Word, k: usize, kind: BallKind) -> Result<WeightedBall> {
    match kind {
        BallKind::Insertion => insertion_ball(y, k),
        BallKind::Deletion => deletion_ball(y, k),
    }
}

/// `W` of a ball.
pub fn weighted_log_sum(ball: &WeightedBall) -> f64 {
    log_sum_of_counts(ball.entries.values().copied())
}

/// `Σ c log2 c` over arbitrary counts, pairwise-summed.
pub fn log_sum_of_counts(counts: impl IntoIterator<Item = u128>) -> f64 {
    let terms: Vec<f64> = counts.into_iter().map(xlog2x_count).collect();
    pairwise_sum(&terms)
}

/// Embedding count of `y` in the supersequence that extends its `i`-th
/// maximal alternating segment by two symbols (one-based `i`, binary `y`):
///
/// `1 + Σ_{j=b_i}^{f_i} a_j - (a_{b_i}-1)[b_i≠i] - (a_{f_i}-1)[f_i≠i]`.
pub fn segment_extension_embedding(y: &Word, i: usize) -> Result<u128> {
    y.require_binary()?;
    let profile = alternating_profile(y)?;
    if i < 1 || i > profile.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: profile.len(),
        });
    }
    let (b, f) = (profile.b(i), profile.f(i));
    let span: usize = profile.segments[b - 1..f].iter().sum();
    let mut value = 1 + span;
    if b != i {
        value -= profile.a(b) - 1;
    }
    if f != i {
        value -= profile.a(f) - 1;
    }
    Ok(value as u128)
}

/// The supersequence whose alternating profile is `y`'s with `a_i + 2`.
pub fn segment_extension_word(y: &Word, i: usize) -> Result<Word> {
    y.require_binary()?;
    let profile = alternating_profile(y)?;
    if i < 1 || i > profile.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: profile.len(),
        });
    }
    let end = profile.span(i).end;
    let last = y.symbols()[end - 1];
    let mut symbols = y.symbols()[..end].to_vec();
    symbols.extend([Word::flip(last), last]);
    symbols.extend_from_slice(&y.symbols()[end..]);
    Word::new(symbols, 2)
}

/// The three special members of `I_2(y)` that start with a prepended pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialSupersequences {
    /// Run lengths `(1, 1, r_1, .., r_R)`.
    pub beta: Word,
    /// Run lengths `(2, r_1, .., r_R)`.
    pub gamma: Word,
    /// Run lengths `(1, r_1 + 1, .., r_R)`.
    pub delta: Word,
    pub omega_beta: u128,
    pub omega_gamma: u128,
    pub omega_delta: u128,
}

pub fn special_supersequences(y: &Word) -> Result<SpecialSupersequences> {
    y.require_binary()?;
    let profile = alternating_profile(y)?;
    let runs = run_length_profile(y)?;
    let first = y.symbols()[0];
    let other = Word::flip(first);

    let f1 = profile.f(1);
    let span: usize = profile.segments[..f1].iter().sum();
    let mut omega_beta = 1 + span;
    if f1 != 1 {
        omega_beta -= profile.a(f1) - 1;
    }
    Ok(SpecialSupersequences {
        beta: y.prepend_all(&[first, other]),
        gamma: y.prepend_all(&[other, other]),
        delta: y.prepend_all(&[other, first]),
        omega_beta: omega_beta as u128,
        omega_gamma: 1,
        omega_delta: runs.runs[0] as u128 + 1,
    })
}

/// `(ω_β, ω_γ, ω_δ)` from the alternating and run profiles alone.
pub fn special_supersequence_embeddings(y: &Word) -> Result<(u128, u128, u128)> {
    let s = special_supersequences(y)?;
    Ok((s.omega_beta, s.omega_gamma, s.omega_delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::enumerate_words;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    /// Oracle: count index sets directly.
    fn brute_embeddings(y: &[u8], x: &[u8]) -> u128 {
        fn go(y: &[u8], x: &[u8]) -> u128 {
            if y.is_empty() {
                return 1;
            }
            (0..x.len())
                .filter(|&i| x[i] == y[0])
                .map(|i| go(&y[1..], &x[i + 1..]))
                .sum()
        }
        go(y, x)
    }

    #[test]
    fn embedding_examples() {
        let y = Word::parse("120", 3).unwrap();
        let x = Word::parse("11220", 3).unwrap();
        assert_eq!(embedding_number(&y, &x).unwrap(), 4);
        assert_eq!(embedding_number(&x, &x).unwrap(), 1);
        assert_eq!(embedding_number(&w("01"), &w("0101")).unwrap(), 3);
        assert_eq!(embedding_number(&w(""), &w("0101")).unwrap(), 1);
        assert_eq!(embedding_number(&w("01011"), &w("0101")).unwrap(), 0);
        assert!(matches!(
            embedding_number(&w("01"), &x),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn embedding_matches_index_set_oracle() {
        for n in 0..=8 {
            for x in enumerate_words(2, n).unwrap() {
                for m in 0..=n.min(4) {
                    for y in enumerate_words(2, m).unwrap() {
                        assert_eq!(
                            embedding_number(&y, &x).unwrap(),
                            brute_embeddings(y.symbols(), x.symbols()),
                            "y={y} x={x}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn embedding_overflow_is_an_error() {
        let x = Word::new(vec![0; 200], 2).unwrap();
        let y = Word::new(vec![0; 100], 2).unwrap();
        assert_eq!(embedding_number(&y, &x), Err(Error::Overflow));
    }

    #[test]
    fn ball_examples() {
        let b = insertion_ball(&w("01"), 1).unwrap();
        let got: Vec<(String, u128)> = b.entries.iter().map(|(k, &v)| (k.to_string(), v)).collect();
        assert_eq!(
            got,
            vec![
                ("001".to_string(), 2),
                ("010".to_string(), 1),
                ("011".to_string(), 2),
                ("101".to_string(), 1)
            ]
        );
        assert_eq!(b.total().unwrap(), 6);

        let d = deletion_ball(&w("00000"), 2).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.entries[&w("000")], 10);

        let b = insertion_ball(&w("00"), 2).unwrap();
        assert_eq!(b.spectrum(), vec![(1, 6), (3, 4), (6, 1)]);
        assert_eq!(b.total().unwrap(), 24);

        assert!(deletion_ball(&w("01"), 3).is_err());
        let zero = insertion_ball(&w("0110"), 0).unwrap();
        assert_eq!(zero.entries.len(), 1);
    }

    #[test]
    fn balls_match_full_scan() {
        for q in 2..=3u8 {
            for m in 0..=5 {
                for y in enumerate_words(q, m).unwrap() {
                    for k in 0..=2 {
                        let ball = insertion_ball(&y, k).unwrap();
                        let mut scanned = BTreeMap::new();
                        for x in enumerate_words(q, m + k).unwrap() {
                            let c = brute_embeddings(y.symbols(), x.symbols());
                            if c > 0 {
                                scanned.insert(x, c);
                            }
                        }
                        assert_eq!(ball.entries, scanned, "I_{k}({y})");

                        if k <= m {
                            let ball = deletion_ball(&y, k).unwrap();
                            let mut scanned = BTreeMap::new();
                            for x in enumerate_words(q, m - k).unwrap() {
                                let c = brute_embeddings(x.symbols(), y.symbols());
                                if c > 0 {
                                    scanned.insert(x, c);
                                }
                            }
                            assert_eq!(ball.entries, scanned, "D_{k}({y})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn log_sum_examples() {
        let ones = insertion_ball(&w("01"), 1).unwrap();
        let only_ones = WeightedBall {
            entries: ones.entries.keys().map(|k| (k.clone(), 1)).collect(),
            ..ones
        };
        assert_eq!(weighted_log_sum(&only_ones), 0.0);

        let b = insertion_ball(&w("00"), 2).unwrap();
        let expected = 12.0 * 3f64.log2() + 6.0 * 6f64.log2();
        assert!((weighted_log_sum(&b) - expected).abs() < 1e-12);
        assert!((expected - 34.5293).abs() < 1e-3);

        let d = deletion_ball(&w("000000"), 3).unwrap();
        assert!((weighted_log_sum(&d) - 20.0 * 20f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn segment_extension_examples() {
        assert_eq!(segment_extension_embedding(&w("00"), 1).unwrap(), 3);
        assert_eq!(embedding_number(&w("00"), &w("0100")).unwrap(), 3);
        assert_eq!(segment_extension_word(&w("00"), 1).unwrap(), w("0100"));

        let alt = w("01010");
        assert_eq!(segment_extension_embedding(&alt, 1).unwrap(), 6);
        assert!(matches!(
            segment_extension_embedding(&alt, 2),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(segment_extension_embedding(&Word::parse("01", 3).unwrap(), 1).is_err());
    }

    #[test]
    fn segment_extension_constant_words() {
        for m in 1..=8 {
            let y = Word::new(vec![0; m], 2).unwrap();
            for i in 1..=m {
                let x = segment_extension_word(&y, i).unwrap();
                assert_eq!(
                    segment_extension_embedding(&y, i).unwrap(),
                    brute_embeddings(y.symbols(), x.symbols())
                );
            }
        }
    }

    #[test]
    fn special_supersequence_examples() {
        let (_, g, d) = special_supersequence_embeddings(&w("0000")).unwrap();
        assert_eq!((g, d), (1, 5));
        let y = w("000101011");
        let s = special_supersequences(&y).unwrap();
        assert_eq!(run_length_profile(&s.beta).unwrap().runs[..3], [1, 1, 3]);
        assert_eq!(s.omega_beta, embedding_number(&y, &s.beta).unwrap());
        assert_eq!(s.omega_gamma, embedding_number(&y, &s.gamma).unwrap());
        assert_eq!(s.omega_delta, embedding_number(&y, &s.delta).unwrap());
    }

    #[test]
    fn ball_csv_is_sorted_with_header() {
        let mut buf = Vec::new();
        insertion_ball(&w("01"), 1)
            .unwrap()
            .write_csv(&mut buf)
            .unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "word,count\n001,2\n010,1\n011,2\n101,1\n"
        );
    }
}
