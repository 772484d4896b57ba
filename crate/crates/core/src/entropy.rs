//! Input and output entropies of the k-deletion and k-insertion channels
//! under uniform transmission, in bits.
//!
//! Enumeration works for any `(q, k)` by building the weighted ball. Closed
//! forms exist for `k = 1` (any `q`) and `k = 2` (binary), the latter built
//! from per-case embedding spectra of `I_2(y)` and `D_2(y)`.

use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::embedding::{
    deletion_ball, insertion_ball, log_sum_of_counts, segment_extension_embedding, WeightedBall,
};
use crate::error::{invalid, Error, Result};
use crate::math::{binomial, checked_pow, entropy_from_log_sum, shannon_entropy, xlog2x};
use crate::words::{alternating_profile, run_length_profile, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Deletion,
    Insertion,
}

impl ChannelKind {
    pub fn short_name(self) -> &'static str {
        match self {
            ChannelKind::Deletion => "del",
            ChannelKind::Insertion => "ins",
        }
    }
}

/// `k`-Del or `k`-Ins over an alphabet of size `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    pub k: usize,
    pub q: u8,
}

impl ChannelSpec {
    pub fn new(kind: ChannelKind, k: usize, q: u8) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidAlphabet(usize::from(q)));
        }
        Ok(Self { kind, k, q })
    }

    pub fn deletion(k: usize, q: u8) -> Self {
        Self {
            kind: ChannelKind::Deletion,
            k,
            q,
        }
    }

    pub fn insertion(k: usize, q: u8) -> Self {
        Self {
            kind: ChannelKind::Insertion,
            k,
            q,
        }
    }

    /// The channel whose output entropy equals this channel's input entropy.
    pub fn dual(self) -> Self {
        let kind = match self.kind {
            ChannelKind::Deletion => ChannelKind::Insertion,
            ChannelKind::Insertion => ChannelKind::Deletion,
        };
        Self { kind, ..self }
    }

    /// Channel input length implied by an output of length `output_len`.
    pub fn input_len(self, output_len: usize) -> Option<usize> {
        match self.kind {
            ChannelKind::Deletion => Some(output_len + self.k),
            ChannelKind::Insertion => output_len.checked_sub(self.k),
        }
    }

    fn check_word(self, word: &Word) -> Result<()> {
        if word.q() != self.q {
            return Err(Error::AlphabetMismatch {
                left: word.q(),
                right: self.q,
            });
        }
        Ok(())
    }
}

impl fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            ChannelKind::Deletion => "Del",
            ChannelKind::Insertion => "Ins",
        };
        write!(f, "{}-{} (q={})", self.k, name, self.q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Input,
    Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Enumeration,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Enumeration => "enumeration",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    pub count: u128,
    pub multiplicity: u128,
}

/// One computed entropy with its provenance. Entropies are in bits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub channel: ChannelSpec,
    #[serde(serialize_with = "word_as_text")]
    pub word: Word,
    pub direction: Direction,
    pub method: Method,
    pub entropy_bits: f64,
    pub spectrum: Option<Vec<SpectrumPoint>>,
}

fn word_as_text<S: Serializer>(word: &Word, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&word.to_string())
}

impl EntropyReport {
    pub const CSV_HEADER: [&'static str; 8] = [
        "channel",
        "k",
        "q",
        "word",
        "direction",
        "method",
        "entropy_bits",
        "spectrum",
    ];

    /// Flat CSV record; the spectrum is `count x multiplicity` pairs joined by `;`.
    pub fn csv_record(&self) -> [String; 8] {
        let spectrum = self
            .spectrum
            .as_ref()
            .map(|s| {
                s.iter()
                    .map(|p| format!("{}x{}", p.count, p.multiplicity))
                    .collect::<Vec<_>>()
                    .join(";")
            })
            .unwrap_or_default();
        [
            self.channel.kind.short_name().to_string(),
            self.channel.k.to_string(),
            self.channel.q.to_string(),
            self.word.to_string(),
            match self.direction {
                Direction::Input => "input".to_string(),
                Direction::Output => "output".to_string(),
            },
            self.method.name().to_string(),
            format_bits(self.entropy_bits),
            spectrum,
        ]
    }

    /// Support size of the distribution behind the entropy.
    pub fn support_size(&self) -> Option<u128> {
        self.spectrum
            .as_ref()
            .map(|s| s.iter().map(|p| p.multiplicity).sum())
    }
}

/// Fixed 15-decimal rendering used for every printed entropy.
pub fn format_bits(v: f64) -> String {
    format!("{v:.15}")
}

fn points(spectrum: Vec<(u128, u128)>) -> Vec<SpectrumPoint> {
    spectrum
        .into_iter()
        .map(|(count, multiplicity)| SpectrumPoint {
            count,
            multiplicity,
        })
        .collect()
}

/// Weighted ball whose normalized counts are the posterior of `y`.
fn posterior_ball(y: &Word, channel: ChannelSpec) -> Result<(WeightedBall, u128)> {
    channel.check_word(y)?;
    let k = channel.k;
    match channel.kind {
        ChannelKind::Deletion => {
            let n = (y.len() + k) as u64;
            let total = binomial(n, k as u64)?
                .checked_mul(checked_pow(u64::from(y.q()), k as u32)?)
                .ok_or(Error::Overflow)?;
            Ok((insertion_ball(y, k)?, total))
        }
        ChannelKind::Insertion => {
            if y.len() <= k {
                return Err(invalid(format!(
                    "{k}-insertion output of length {} leaves no valid input length",
                    y.len()
                )));
            }
            Ok((deletion_ball(y, k)?, binomial(y.len() as u64, k as u64)?))
        }
    }
}

/// `H(X | Y = y)` from the weighted ball:
/// deletion `log2(C(n,k) q^k) - W_{I_k(y)}(y) / (C(n,k) q^k)`,
/// insertion `log2 C(n+k,k) - W_{D_k(y)}(y) / C(n+k,k)`.
pub fn input_entropy_enumerated(y: &Word, channel: ChannelSpec) -> Result<EntropyReport> {
    let (ball, total) = posterior_ball(y, channel)?;
    debug_assert_eq!(ball.total().ok(), Some(total));
    let log_sum = log_sum_of_counts(ball.entries.values().copied());
    Ok(EntropyReport {
        channel,
        word: y.clone(),
        direction: Direction::Input,
        method: Method::Enumeration,
        entropy_bits: entropy_from_log_sum(total, log_sum),
        spectrum: Some(points(ball.spectrum())),
    })
}

/// `H(Y | X = x)`, summed directly as `-Σ p log2 p` over the output ball.
pub fn output_entropy_enumerated(x: &Word, channel: ChannelSpec) -> Result<EntropyReport> {
    channel.check_word(x)?;
    let k = channel.k;
    let (ball, total) = match channel.kind {
        ChannelKind::Deletion => {
            if k > x.len() {
                return Err(invalid(format!(
                    "cannot delete {k} symbols from a word of length {}",
                    x.len()
                )));
            }
            (deletion_ball(x, k)?, binomial(x.len() as u64, k as u64)?)
        }
        ChannelKind::Insertion => {
            let n = (x.len() + k) as u64;
            let total = binomial(n, k as u64)?
                .checked_mul(checked_pow(u64::from(x.q()), k as u32)?)
                .ok_or(Error::Overflow)?;
            (insertion_ball(x, k)?, total)
        }
    };
    let t = total as f64;
    let probabilities: Vec<f64> = ball.entries.values().map(|&c| c as f64 / t).collect();
    Ok(EntropyReport {
        channel,
        word: x.clone(),
        direction: Direction::Output,
        method: Method::Enumeration,
        entropy_bits: shannon_entropy(&probabilities),
        spectrum: Some(points(ball.spectrum())),
    })
}

fn closed_report(
    y: &Word,
    channel: ChannelSpec,
    entropy_bits: f64,
    spectrum: Vec<(u128, u128)>,
) -> EntropyReport {
    EntropyReport {
        channel,
        word: y.clone(),
        direction: Direction::Input,
        method: Method::ClosedForm,
        entropy_bits: entropy_bits.max(0.0),
        spectrum: Some(points(spectrum)),
    }
}

fn merge_spectrum(pairs: impl IntoIterator<Item = (u128, u128)>) -> Vec<(u128, u128)> {
    let mut map = std::collections::BTreeMap::new();
    for (v, m) in pairs {
        if m > 0 {
            *map.entry(v).or_insert(0u128) += m;
        }
    }
    map.into_iter().collect()
}

/// `H^In_{1-Del}(y) = log2(nq) - (1/(nq)) Σ (r_i+1) log2(r_i+1)`, `n = |y|+1`.
pub fn closed_form_1del(y: &Word) -> Result<EntropyReport> {
    let runs = run_length_profile(y)?.runs;
    let q = y.q();
    let nq = ((y.len() + 1) * usize::from(q)) as f64;
    let sum: f64 = runs.iter().map(|&r| xlog2x((r + 1) as f64)).sum();
    let ones = (usize::from(q) + y.len() * (usize::from(q) - 1) - runs.len()) as u128;
    let spectrum = merge_spectrum(
        runs.iter()
            .map(|&r| (r as u128 + 1, 1))
            .chain(std::iter::once((1, ones))),
    );
    Ok(closed_report(
        y,
        ChannelSpec::deletion(1, q),
        nq.log2() - sum / nq,
        spectrum,
    ))
}

/// `H^In_{1-Ins}(y) = log2(n+1) - (1/(n+1)) Σ r_i log2 r_i`, `n = |y|-1`.
pub fn closed_form_1ins(y: &Word) -> Result<EntropyReport> {
    if y.len() < 2 {
        return Err(invalid("1-insertion output needs length >= 2"));
    }
    let runs = run_length_profile(y)?.runs;
    let m = y.len() as f64;
    let sum: f64 = runs.iter().map(|&r| xlog2x(r as f64)).sum();
    let spectrum = merge_spectrum(runs.iter().map(|&r| (r as u128, 1)));
    Ok(closed_report(
        y,
        ChannelSpec::insertion(1, y.q()),
        m.log2() - sum / m,
        spectrum,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseEntry {
    pub case: u8,
    pub value: u128,
    pub multiplicity: u128,
}

/// Embedding spectrum of a radius-2 ball, tagged by structural case.
///
/// For `I_2(y)` the cases are: 1 prolong one run by two, 2 prolong two runs
/// by one, 3 prolong one run and split another (or add an end run), 4 extend
/// an alternating segment by two, 5 embedding-one members. For `D_2(y)`:
/// 1 shorten a run by two, 2 shorten two non-adjacent runs, 3 shorten an
/// alternating segment by two.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumByCase {
    pub entries: Vec<CaseEntry>,
}

impl SpectrumByCase {
    fn push(&mut self, case: u8, value: u128, multiplicity: u128) {
        if multiplicity > 0 {
            self.entries.push(CaseEntry {
                case,
                value,
                multiplicity,
            });
        }
    }

    /// `Σ value · multiplicity`.
    pub fn total_weight(&self) -> Result<u128> {
        self.entries.iter().try_fold(0u128, |acc, e| {
            e.value
                .checked_mul(e.multiplicity)
                .and_then(|w| acc.checked_add(w))
                .ok_or(Error::Overflow)
        })
    }

    pub fn support_size(&self) -> u128 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    pub fn log_sum(&self) -> f64 {
        let terms: Vec<f64> = self
            .entries
            .iter()
            .map(|e| e.multiplicity as f64 * xlog2x(e.value as f64))
            .collect();
        crate::math::pairwise_sum(&terms)
    }

    /// Multiset of embedding counts with the case tags dropped.
    pub fn merged(&self) -> Vec<(u128, u128)> {
        merge_spectrum(self.entries.iter().map(|e| (e.value, e.multiplicity)))
    }

    pub fn case_multiplicity(&self, case: u8) -> u128 {
        self.entries
            .iter()
            .filter(|e| e.case == case)
            .map(|e| e.multiplicity)
            .sum()
    }
}

/// Case spectrum of `I_2(y)` for binary `y`, `|y| = n - 2 >= 1`.
pub fn i2_spectrum(y: &Word) -> Result<SpectrumByCase> {
    y.require_binary()?;
    if y.is_empty() {
        return Err(Error::EmptyWord);
    }
    let runs = run_length_profile(y)?.runs;
    let segments = alternating_profile(y)?;
    let n = y.len() + 2;
    let big_r = runs.len();
    let mut s = SpectrumByCase {
        entries: Vec::new(),
    };

    for &r in &runs {
        s.push(1, binomial(r as u64 + 2, 2)?, 1);
    }
    for i in 0..big_r {
        for j in i + 1..big_r {
            s.push(2, ((runs[i] + 1) * (runs[j] + 1)) as u128, 1);
        }
    }
    for &r in &runs {
        s.push(3, r as u128 + 1, (n + 1 - big_r - r) as u128);
    }
    for i in 1..=segments.len() {
        s.push(4, segment_extension_embedding(y, i)?, 1);
    }
    // r~_i = r_i - 1 + [i = 1] + [i = R]
    let adjusted: Vec<u128> = runs
        .iter()
        .enumerate()
        .map(|(i, &r)| (r - 1 + usize::from(i == 0) + usize::from(i + 1 == big_r)) as u128)
        .collect();
    let mut ones = 0u128;
    for i in 0..big_r {
        for j in i + 1..big_r {
            ones += adjusted[i] * adjusted[j];
        }
        ones += adjusted[i] * (adjusted[i] + 1) / 2;
    }
    s.push(5, 1, ones);
    Ok(s)
}

/// Case spectrum of `D_2(y)` for binary `y`, `|y| = n + 2 >= 3`.
///
/// Segments of length two use `(i - b_i + 1)(f_i - i + 1)`.
pub fn d2_spectrum(y: &Word) -> Result<SpectrumByCase> {
    y.require_binary()?;
    if y.len() < 3 {
        return Err(invalid("2-insertion output needs length >= 3"));
    }
    let runs = run_length_profile(y)?.runs;
    let segments = alternating_profile(y)?;
    let mut s = SpectrumByCase {
        entries: Vec::new(),
    };
    for &r in &runs {
        if r >= 2 {
            s.push(1, binomial(r as u64, 2)?, 1);
        }
    }
    for i in 0..runs.len() {
        for j in i + 2..runs.len() {
            s.push(2, (runs[i] * runs[j]) as u128, 1);
        }
    }
    for i in 1..=segments.len() {
        match segments.a(i) {
            a if a > 2 => s.push(3, segment_extension_embedding(y, i)? - 2, 1),
            2 => {
                let (b, f) = (segments.b(i), segments.f(i));
                s.push(3, ((i - b + 1) * (f - i + 1)) as u128, 1);
            }
            _ => {}
        }
    }
    Ok(s)
}

/// `H^In_{2-Del}(y) = log2(2n(n-1)) - W_{I_2(y)}(y) / (2n(n-1))`.
pub fn closed_form_2del(y: &Word) -> Result<EntropyReport> {
    let spectrum = i2_spectrum(y)?;
    let n = (y.len() + 2) as u128;
    let total = 2 * n * (n - 1);
    Ok(closed_report(
        y,
        ChannelSpec::deletion(2, 2),
        entropy_from_log_sum(total, spectrum.log_sum()),
        spectrum.merged(),
    ))
}

/// `H^In_{2-Ins}(y) = log2 C(n+2,2) - W_{D_2(y)}(y) / C(n+2,2)`.
pub fn closed_form_2ins(y: &Word) -> Result<EntropyReport> {
    let spectrum = d2_spectrum(y)?;
    let total = binomial(y.len() as u64, 2)?;
    Ok(closed_report(
        y,
        ChannelSpec::insertion(2, 2),
        entropy_from_log_sum(total, spectrum.log_sum()),
        spectrum.merged(),
    ))
}

/// Closed-form input entropy, where one exists for the channel.
pub fn input_entropy_closed_form(y: &Word, channel: ChannelSpec) -> Result<EntropyReport> {
    channel.check_word(y)?;
    match (channel.kind, channel.k, channel.q) {
        (ChannelKind::Deletion, 1, _) => closed_form_1del(y),
        (ChannelKind::Insertion, 1, _) => closed_form_1ins(y),
        (ChannelKind::Deletion, 2, 2) => closed_form_2del(y),
        (ChannelKind::Insertion, 2, 2) => closed_form_2ins(y),
        _ => Err(Error::NotCharacterized(format!(
            "no closed form for the input entropy of {channel}"
        ))),
    }
}

/// Closed-form output entropy through `H^Out_{k-Del} = H^In_{k-Ins}` and
/// `H^Out_{k-Ins} = H^In_{k-Del}`.
pub fn output_entropy_closed_form(x: &Word, channel: ChannelSpec) -> Result<EntropyReport> {
    let mut report = input_entropy_closed_form(x, channel.dual())?;
    report.channel = channel;
    report.direction = Direction::Output;
    Ok(report)
}

pub fn entropy(
    word: &Word,
    channel: ChannelSpec,
    direction: Direction,
    method: Method,
) -> Result<EntropyReport> {
    match (direction, method) {
        (Direction::Input, Method::Enumeration) => input_entropy_enumerated(word, channel),
        (Direction::Input, Method::ClosedForm) => input_entropy_closed_form(word, channel),
        (Direction::Output, Method::Enumeration) => output_entropy_enumerated(word, channel),
        (Direction::Output, Method::ClosedForm) => output_entropy_closed_form(word, channel),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{enumerate_words, make_alternating, make_constant};

    const TOL: f64 = 1e-9;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= TOL
    }

    #[test]
    fn enumerated_examples() {
        let h = input_entropy_enumerated(&w("01"), ChannelSpec::deletion(1, 2)).unwrap();
        assert!(close(h.entropy_bits, 6f64.log2() - 4.0 / 6.0));
        assert!((h.entropy_bits - 1.91830).abs() < 1e-5);

        for k in 0..4 {
            let h = input_entropy_enumerated(&w("00000"), ChannelSpec::insertion(k, 2)).unwrap();
            assert_eq!(h.entropy_bits, 0.0);
        }

        let h = input_entropy_enumerated(&w("00"), ChannelSpec::deletion(2, 2)).unwrap();
        let expected = 24f64.log2() - (12.0 * 3f64.log2() + 6.0 * 6f64.log2()) / 24.0;
        assert!(close(h.entropy_bits, expected));
        assert!((h.entropy_bits - 3.1462406).abs() < 1e-7);

        assert!(input_entropy_enumerated(&w("01"), ChannelSpec::insertion(2, 2)).is_err());
        assert!(input_entropy_enumerated(
            &Word::parse("01", 3).unwrap(),
            ChannelSpec::deletion(1, 2)
        )
        .is_err());
    }

    #[test]
    fn output_examples() {
        let h = output_entropy_enumerated(&w("0000"), ChannelSpec::deletion(3, 2)).unwrap();
        assert_eq!(h.entropy_bits, 0.0);

        let out = output_entropy_enumerated(&w("01"), ChannelSpec::insertion(1, 2)).unwrap();
        let inp = input_entropy_enumerated(&w("01"), ChannelSpec::deletion(1, 2)).unwrap();
        assert!(close(out.entropy_bits, inp.entropy_bits));

        // D_1(0101) = {101:1, 001:1, 011:1, 010:1}: uniform over four outputs.
        let h = output_entropy_enumerated(&w("0101"), ChannelSpec::deletion(1, 2)).unwrap();
        assert!(close(h.entropy_bits, 2.0));

        assert!(output_entropy_enumerated(&w("01"), ChannelSpec::deletion(3, 2)).is_err());
    }

    #[test]
    fn one_deletion_closed_form() {
        let h = closed_form_1del(&w("01")).unwrap();
        assert!(close(h.entropy_bits, 6f64.log2() - 4.0 / 6.0));
        for q in 2..=4u8 {
            for m in 1..=6 {
                let n = (m + 1) as f64;
                let qf = f64::from(q);
                let c = closed_form_1del(&make_constant(q, m, 0).unwrap()).unwrap();
                assert!(close(c.entropy_bits, (n * qf).log2() - n.log2() / qf));
                let a = closed_form_1del(&make_alternating(q, m, 0, 1).unwrap()).unwrap();
                assert!(close(
                    a.entropy_bits,
                    (n * qf).log2() - 2.0 * m as f64 / (n * qf)
                ));
            }
        }
        let h = closed_form_1del(&w("0000")).unwrap();
        assert!(close(h.entropy_bits, 10f64.log2() - 5f64.log2() / 2.0));
        assert!((h.entropy_bits - 2.16096).abs() < 1e-5);
    }

    #[test]
    fn one_insertion_closed_form() {
        let h = closed_form_1ins(&w("001")).unwrap();
        assert!(close(h.entropy_bits, 3f64.log2() - 2.0 / 3.0));
        assert_eq!(closed_form_1ins(&w("0000")).unwrap().entropy_bits, 0.0);
        let h = closed_form_1ins(&Word::parse("0120", 3).unwrap()).unwrap();
        assert!(close(h.entropy_bits, 2.0));
        assert!(closed_form_1ins(&w("0")).is_err());
    }

    #[test]
    fn i2_spectrum_example_010() {
        let s = i2_spectrum(&w("010")).unwrap();
        let by_case: Vec<(u8, u128, u128)> = s
            .entries
            .iter()
            .map(|e| (e.case, e.value, e.multiplicity))
            .collect();
        assert_eq!(
            by_case,
            vec![
                (1, 3, 1),
                (1, 3, 1),
                (1, 3, 1),
                (2, 4, 1),
                (2, 4, 1),
                (2, 4, 1),
                (3, 2, 2),
                (3, 2, 2),
                (3, 2, 2),
                (4, 4, 1),
                (5, 1, 3),
            ]
        );
        assert_eq!(s.total_weight().unwrap(), 40);
    }

    #[test]
    fn i2_spectrum_constant_words() {
        assert_eq!(
            i2_spectrum(&w("00")).unwrap().merged(),
            vec![(1, 6), (3, 4), (6, 1)]
        );
        assert_eq!(
            i2_spectrum(&w("000")).unwrap().merged(),
            vec![(1, 10), (4, 5), (10, 1)]
        );
        let h = closed_form_2del(&w("000")).unwrap();
        let expected = 40f64.log2() - (40.0 + xlog2x(10.0)) / 40.0;
        assert!(close(h.entropy_bits, expected));
        assert!((h.entropy_bits - 3.4914461).abs() < 1e-7);
        assert!(i2_spectrum(&Word::parse("00", 3).unwrap()).is_err());
    }

    #[test]
    fn d2_spectrum_examples() {
        let s = d2_spectrum(&w("00110")).unwrap();
        let seg3: Vec<u128> = s
            .entries
            .iter()
            .filter(|e| e.case == 3)
            .map(|e| e.value)
            .collect();
        assert!(seg3.contains(&2));
        let omega = crate::embedding::embedding_number(&w("001"), &w("00110")).unwrap();
        assert_eq!(omega, 2);

        let s = d2_spectrum(&w("0011")).unwrap();
        let seg: Vec<u128> = s
            .entries
            .iter()
            .filter(|e| e.case == 3)
            .map(|e| e.value)
            .collect();
        assert_eq!(seg, vec![4]);

        let s = d2_spectrum(&w("00000")).unwrap();
        assert_eq!(s.entries.len(), 1);
        assert_eq!(s.entries[0].value, 10);
        assert_eq!(closed_form_2ins(&w("00000")).unwrap().entropy_bits, 0.0);
        assert!(d2_spectrum(&w("01")).is_err());
    }

    #[test]
    fn closed_forms_match_enumeration_small() {
        for m in 1..=7 {
            for y in enumerate_words(2, m).unwrap() {
                for k in 1..=2 {
                    for kind in [ChannelKind::Deletion, ChannelKind::Insertion] {
                        let channel = ChannelSpec::new(kind, k, 2).unwrap();
                        let Ok(closed) = input_entropy_closed_form(&y, channel) else {
                            continue;
                        };
                        let enumerated = input_entropy_enumerated(&y, channel).unwrap();
                        assert!(
                            close(closed.entropy_bits, enumerated.entropy_bits),
                            "{channel} y={y}"
                        );
                        assert_eq!(closed.spectrum, enumerated.spectrum, "{channel} y={y}");
                    }
                }
            }
        }
    }

    #[test]
    fn degenerate_two_deletion_lengths() {
        for y in ["0", "1", "00", "01", "10", "11"] {
            let y = w(y);
            let c = closed_form_2del(&y).unwrap();
            let e = input_entropy_enumerated(&y, ChannelSpec::deletion(2, 2)).unwrap();
            assert!(close(c.entropy_bits, e.entropy_bits), "{y}");
        }
    }

    #[test]
    fn unsupported_closed_forms() {
        assert!(matches!(
            input_entropy_closed_form(&w("0101"), ChannelSpec::deletion(3, 2)),
            Err(Error::NotCharacterized(_))
        ));
        let y = Word::parse("012", 3).unwrap();
        assert!(input_entropy_closed_form(&y, ChannelSpec::deletion(2, 3)).is_err());
    }

    #[test]
    fn report_csv_record() {
        let h = closed_form_1ins(&w("001")).unwrap();
        let rec = h.csv_record();
        assert_eq!(rec[0], "ins");
        assert_eq!(rec[3], "001");
        assert_eq!(rec[5], "closed_form");
        assert_eq!(rec[7], "1x1;2x1");
        let json = serde_json::to_string(&h).unwrap();
        assert!(json.contains("\"word\":\"001\""));
    }
}
