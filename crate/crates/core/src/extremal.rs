//! Minimum, maximum and average input entropies over all channel outputs of
//! a given length, with the words attaining them.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::entropy::{
    entropy, input_entropy_enumerated, ChannelKind, ChannelSpec, Direction, Method,
};
use crate::error::{invalid, Error, Result};
use crate::math::{checked_pow, xlog2x, TOLERANCE_BITS};
use crate::words::{
    balanced_runs, count_words_with_runs, enumerate_words, enumerate_words_with_runs,
    make_constant, run_length_profile, skewed_runs, word_count, word_from_index, Word,
};

/// Default cap on the number of words an exhaustive scan may visit.
pub const DEFAULT_BUDGET: u128 = 20_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "INDEL_ENTROPY_BUDGET";

pub fn default_budget() -> u128 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Min,
    Max,
}

impl Which {
    fn better(self, candidate: f64, incumbent: f64) -> bool {
        match self {
            Which::Min => candidate < incumbent,
            Which::Max => candidate > incumbent,
        }
    }
}

/// The entropy being extremized, as a function of one word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Objective {
    pub channel: ChannelSpec,
    pub direction: Direction,
    pub method: Method,
}

impl Objective {
    /// Input entropy computed by ball enumeration.
    pub fn input(channel: ChannelSpec) -> Self {
        Self {
            channel,
            direction: Direction::Input,
            method: Method::Enumeration,
        }
    }

    pub fn evaluate(&self, word: &Word) -> Result<f64> {
        Ok(entropy(word, self.channel, self.direction, self.method)?.entropy_bits)
    }
}

fn words_as_text<S: Serializer>(words: &[Word], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(words.iter().map(|w| w.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremumResult {
    pub value_bits: f64,
    /// Every word attaining the value, sorted lexicographically.
    #[serde(serialize_with = "words_as_text")]
    pub witnesses: Vec<Word>,
    pub q: u8,
    pub m: usize,
    pub runs: Option<usize>,
    pub objective: Objective,
    pub which: Which,
    /// 2-Del minimum only: `2 + (3/4) log2 C(n,2) - (1/2) log2(n-1)`, `n = m + 2`.
    pub n_indexed_form_bits: Option<f64>,
    /// 2-Del minimum only: the same expression written with `m` in place of
    /// `n`. It does not match enumeration and is kept for comparison.
    pub m_indexed_form_bits: Option<f64>,
}

impl ExtremumResult {
    fn new(value_bits: f64, witnesses: Vec<Word>, objective: Objective, which: Which) -> Self {
        let (q, m) = witnesses
            .first()
            .map(|w| (w.q(), w.len()))
            .unwrap_or((objective.channel.q, 0));
        Self {
            value_bits,
            witnesses,
            q,
            m,
            runs: None,
            objective,
            which,
            n_indexed_form_bits: None,
            m_indexed_form_bits: None,
        }
    }
}

fn check_output_length(channel: ChannelSpec, m: usize) -> Result<()> {
    let least = match channel.kind {
        ChannelKind::Deletion => 1,
        ChannelKind::Insertion => channel.k + 1,
    };
    if m < least {
        return Err(invalid(format!(
            "output length m={m} too short for {channel} (need m >= {least})"
        )));
    }
    Ok(())
}

fn check_budget(required: u128, budget: u128) -> Result<()> {
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Constants,
    AllRunsLengthOne,
}

/// Known global extremum of the input entropy and the family attaining it.
fn characterization(q: u8, m: usize, channel: ChannelSpec, which: Which) -> Result<(f64, Family)> {
    if channel.q != q {
        return Err(Error::AlphabetMismatch {
            left: q,
            right: channel.q,
        });
    }
    check_output_length(channel, m)?;
    let qf = f64::from(q);
    let mf = m as f64;
    match (channel.kind, channel.k, which) {
        (ChannelKind::Deletion, 1, Which::Min) => {
            let n = mf + 1.0;
            Ok(((n * qf).log2() - n.log2() / qf, Family::Constants))
        }
        (ChannelKind::Deletion, 1, Which::Max) => {
            let nq = (mf + 1.0) * qf;
            Ok((nq.log2() - 2.0 * mf / nq, Family::AllRunsLengthOne))
        }
        (ChannelKind::Insertion, 1, Which::Min) => Ok((0.0, Family::Constants)),
        (ChannelKind::Insertion, 1, Which::Max) => Ok((mf.log2(), Family::AllRunsLengthOne)),
        (ChannelKind::Deletion, 2, Which::Min) if q == 2 => {
            let constant = make_constant(q, m, 0)?;
            Ok((
                input_entropy_enumerated(&constant, channel)?.entropy_bits,
                Family::Constants,
            ))
        }
        (ChannelKind::Insertion, _, Which::Min) if q == 2 => Ok((0.0, Family::Constants)),
        _ => Err(Error::NotCharacterized(format!(
            "{which:?} of the input entropy of {channel}"
        ))),
    }
}

/// Known global extremum value without materializing the witnesses.
pub fn global_extremum_value(q: u8, m: usize, channel: ChannelSpec, which: Which) -> Result<f64> {
    characterization(q, m, channel, which).map(|(v, _)| v)
}

/// `2 + (3/4) log2 C(n,2) - (1/2) log2(n-1)` with `n = m + 2`: the 2-Del
/// minimum in closed form.
pub fn two_deletion_minimum_closed_form(m: usize) -> f64 {
    let n = m as f64 + 2.0;
    2.0 + 0.75 * (n * (n - 1.0) / 2.0).log2() - 0.5 * (n - 1.0).log2()
}

/// The expression above with `m` written where `n` belongs; undefined for `m < 2`.
pub fn two_deletion_minimum_m_indexed(m: usize) -> Option<f64> {
    (m >= 2).then(|| {
        let mf = m as f64;
        2.0 + 0.75 * (mf * (mf - 1.0) / 2.0).log2() - 0.5 * (mf + 1.0).log2()
    })
}

/// Global extremum with its full witness set, where a characterization is known.
pub fn global_extremum(
    q: u8,
    m: usize,
    channel: ChannelSpec,
    which: Which,
) -> Result<ExtremumResult> {
    let (value, family) = characterization(q, m, channel, which)?;
    let witnesses = match family {
        Family::Constants => (0..q)
            .map(|s| make_constant(q, m, s))
            .collect::<Result<Vec<_>>>()?,
        Family::AllRunsLengthOne => {
            check_budget(count_words_with_runs(q, m, m)?, default_budget())?;
            enumerate_words_with_runs(q, m, m)?.collect()
        }
    };
    let mut result = ExtremumResult::new(value, witnesses, Objective::input(channel), which);
    if (channel.kind, channel.k, which) == (ChannelKind::Deletion, 2, Which::Min) {
        result.n_indexed_form_bits = Some(two_deletion_minimum_closed_form(m));
        result.m_indexed_form_bits = two_deletion_minimum_m_indexed(m);
    }
    Ok(result)
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// Extremum of the single-edit input entropy over outputs with exactly `R`
/// runs. Balanced words attain the maximum and skewed words the minimum.
pub fn extremum_over_fixed_runs(
    q: u8,
    m: usize,
    runs: usize,
    channel: ChannelSpec,
    which: Which,
) -> Result<ExtremumResult> {
    if channel.k != 1 {
        return Err(Error::NotCharacterized(format!(
            "fixed-run extremum of {channel}"
        )));
    }
    if channel.q != q {
        return Err(Error::AlphabetMismatch {
            left: q,
            right: channel.q,
        });
    }
    check_output_length(channel, m)?;
    if runs == 0 || runs > m {
        return Err(invalid(format!("run count R={runs} outside 1..={m}")));
    }
    let profile = match which {
        Which::Min => skewed_runs(m, runs)?,
        Which::Max => balanced_runs(m, runs)?,
    };
    let value = fixed_runs_value(q, m, &profile, channel.kind);
    check_budget(count_words_with_runs(q, m, runs)?, default_budget())?;
    let target = sorted(profile);
    let mut witnesses = Vec::new();
    for w in enumerate_words_with_runs(q, m, runs)? {
        if sorted(run_length_profile(&w)?.runs) == target {
            witnesses.push(w);
        }
    }
    let mut result = ExtremumResult::new(value, witnesses, Objective::input(channel), which);
    result.runs = Some(runs);
    Ok(result)
}

fn fixed_runs_value(q: u8, m: usize, profile: &[usize], kind: ChannelKind) -> f64 {
    match kind {
        ChannelKind::Deletion => {
            let nq = (m as f64 + 1.0) * f64::from(q);
            let sum: f64 = profile.iter().map(|&r| xlog2x(r as f64 + 1.0)).sum();
            nq.log2() - sum / nq
        }
        ChannelKind::Insertion => {
            let mf = m as f64;
            let sum: f64 = profile.iter().map(|&r| xlog2x(r as f64)).sum();
            mf.log2() - sum / mf
        }
    }
}

pub type ProgressFn<'a> = dyn Fn(u128, u128) + Sync + 'a;

/// Knobs for [`exhaustive_argopt`] and [`exhaustive_scan`].
pub struct ScanOptions<'a> {
    pub budget: u128,
    /// Restrict the scan to words with exactly this many runs.
    pub runs: Option<usize>,
    /// Called with `(visited, total)` as chunks complete.
    pub progress: Option<&'a ProgressFn<'a>>,
}

impl Default for ScanOptions<'_> {
    fn default() -> Self {
        Self {
            budget: default_budget(),
            runs: None,
            progress: None,
        }
    }
}

const CHUNK: u128 = 1 << 12;

struct ChunkBest {
    value: f64,
    words: Vec<(f64, Word)>,
}

fn advance(symbols: &mut [u8], q: u8) {
    for s in symbols.iter_mut().rev() {
        if *s + 1 < q {
            *s += 1;
            return;
        }
        *s = 0;
    }
}

fn run_count_of(symbols: &[u8]) -> usize {
    if symbols.is_empty() {
        0
    } else {
        1 + symbols.windows(2).filter(|p| p[0] != p[1]).count()
    }
}

/// Scans all of `Σ_q^m` and returns the optimum of `f` with every word within
/// tolerance of it. Chunks are fixed, so the result does not depend on the
/// number of worker threads.
pub fn exhaustive_scan<F>(
    q: u8,
    m: usize,
    which: Which,
    options: &ScanOptions<'_>,
    f: F,
) -> Result<(f64, Vec<Word>)>
where
    F: Fn(&Word) -> Result<f64> + Sync,
{
    let total = word_count(q, m)?;
    check_budget(total, options.budget)?;
    let chunks = total.div_ceil(CHUNK);
    let done = AtomicU64::new(0);

    let per_chunk: Vec<Result<Option<ChunkBest>>> = (0..chunks as u64)
        .into_par_iter()
        .map(|c| {
            let start = u128::from(c) * CHUNK;
            let end = (start + CHUNK).min(total);
            let mut symbols = word_from_index(q, m, start).symbols().to_vec();
            let mut best: Option<ChunkBest> = None;
            for idx in start..end {
                if idx > start {
                    advance(&mut symbols, q);
                }
                if options.runs.is_some_and(|r| run_count_of(&symbols) != r) {
                    continue;
                }
                let word = Word::from_parts_unchecked(symbols.clone(), q);
                let v = f(&word)?;
                match &mut best {
                    None => {
                        best = Some(ChunkBest {
                            value: v,
                            words: vec![(v, word)],
                        })
                    }
                    Some(b) => {
                        if which.better(v, b.value) {
                            b.value = v;
                            b.words.retain(|(u, _)| (u - v).abs() <= TOLERANCE_BITS);
                        }
                        if (v - b.value).abs() <= TOLERANCE_BITS {
                            b.words.push((v, word));
                        }
                    }
                }
            }
            let visited =
                done.fetch_add((end - start) as u64, Ordering::Relaxed) + (end - start) as u64;
            if let Some(cb) = options.progress {
                cb(u128::from(visited), total);
            }
            Ok(best)
        })
        .collect();

    let mut bests = Vec::with_capacity(per_chunk.len());
    for r in per_chunk {
        if let Some(b) = r? {
            bests.push(b);
        }
    }
    let Some(value) = bests
        .iter()
        .map(|b| b.value)
        .reduce(|a, b| if which.better(b, a) { b } else { a })
    else {
        return Err(invalid("no word satisfies the scan constraints"));
    };
    // Chunks are visited in index order, so the witnesses come out sorted.
    let witnesses = bests
        .into_iter()
        .flat_map(|b| b.words)
        .filter(|(v, _)| (v - value).abs() <= TOLERANCE_BITS)
        .map(|(_, w)| w)
        .collect();
    Ok((value, witnesses))
}

/// Brute-force optimum of `objective` over `Σ_q^m` (or its `R`-run slice).
pub fn exhaustive_argopt(
    q: u8,
    m: usize,
    objective: Objective,
    which: Which,
    options: &ScanOptions<'_>,
) -> Result<ExtremumResult> {
    if objective.channel.q != q {
        return Err(Error::AlphabetMismatch {
            left: q,
            right: objective.channel.q,
        });
    }
    let (value, witnesses) = exhaustive_scan(q, m, which, options, |w| objective.evaluate(w))?;
    let mut result = ExtremumResult::new(value, witnesses, objective, which);
    result.m = m;
    result.runs = options.runs;
    Ok(result)
}

/// `N(n, r, q)`: total number of runs of length `r` across all of `Σ_q^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunCountTable {
    pub n: usize,
    pub q: u8,
    /// `counts[r - 1] = N(n, r, q)`.
    pub counts: Vec<u128>,
}

impl RunCountTable {
    pub fn get(&self, r: usize) -> u128 {
        if r == 0 || r > self.n {
            0
        } else {
            self.counts[r - 1]
        }
    }

    /// Same table by walking every word; the reference for [`run_count_table`].
    pub fn enumerated(n: usize, q: u8) -> Result<Self> {
        let mut counts = vec![0u128; n];
        for w in enumerate_words(q, n)? {
            for r in run_length_profile(&w)?.runs {
                counts[r - 1] += 1;
            }
        }
        Ok(Self { n, q, counts })
    }
}

pub fn run_count_table(n: usize, q: u8) -> Result<RunCountTable> {
    if n == 0 {
        return Err(invalid("run-count table needs n >= 1"));
    }
    if q < 2 {
        return Err(Error::InvalidAlphabet(usize::from(q)));
    }
    let qq = u128::from(q);
    let counts = (1..=n)
        .map(|r| {
            if r == n {
                Ok(qq)
            } else if r + 1 == n {
                Ok(2 * qq * (qq - 1))
            } else {
                let pow = checked_pow(u64::from(q), (n - r - 1) as u32)?;
                let tail = (qq - 1) * (n - r + 1) as u128 + 2;
                (qq - 1)
                    .checked_mul(pow)
                    .and_then(|v| v.checked_mul(tail))
                    .ok_or(Error::Overflow)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RunCountTable { n, q, counts })
}

fn require_single_edit(channel: ChannelSpec, q: u8) -> Result<()> {
    if channel.k != 1 {
        return Err(Error::NotCharacterized(format!("average over {channel}")));
    }
    if channel.q != q {
        return Err(Error::AlphabetMismatch {
            left: q,
            right: channel.q,
        });
    }
    Ok(())
}

/// Output length of a single-edit channel with inputs of length `n`.
fn output_length(n: usize, kind: ChannelKind) -> usize {
    match kind {
        ChannelKind::Deletion => n - 1,
        ChannelKind::Insertion => n + 1,
    }
}

/// Mean input entropy over all outputs, for inputs of length `n`, from the
/// run-count table:
/// deletion `log2(nq) - Σ N(n-1,r,q) (r+1)log2(r+1) / (n q^n)`,
/// insertion `log2(n+1) - Σ N(n+1,r,q) r log2 r / ((n+1) q^(n+1))`.
pub fn average_input_entropy(n: usize, q: u8, channel: ChannelSpec) -> Result<f64> {
    average_with(n, q, channel, |r| match channel.kind {
        ChannelKind::Deletion => xlog2x(r + 1.0),
        ChannelKind::Insertion => xlog2x(r),
    })
}

fn average_with(n: usize, q: u8, channel: ChannelSpec, weight: impl Fn(f64) -> f64) -> Result<f64> {
    require_single_edit(channel, q)?;
    if n < 2 {
        return Err(invalid("average needs input length n >= 2"));
    }
    let m = output_length(n, channel.kind);
    let table = run_count_table(m, q)?;
    let sum: f64 = (1..=m)
        .map(|r| table.get(r) as f64 * weight(r as f64))
        .sum();
    let outputs = word_count(q, m)? as f64;
    let (log_total, per_output) = match channel.kind {
        ChannelKind::Deletion => (
            ((n * usize::from(q)) as f64).log2(),
            (n * usize::from(q)) as f64,
        ),
        ChannelKind::Insertion => (((n + 1) as f64).log2(), (n + 1) as f64),
    };
    Ok(log_total - sum / (per_output * outputs))
}

/// Mean input entropy by scoring every output word; the reference for
/// [`average_input_entropy`].
pub fn average_input_entropy_enumerated(n: usize, q: u8, channel: ChannelSpec) -> Result<f64> {
    require_single_edit(channel, q)?;
    if n < 2 {
        return Err(invalid("average needs input length n >= 2"));
    }
    let m = output_length(n, channel.kind);
    check_budget(word_count(q, m)?, default_budget())?;
    let words: Vec<Word> = enumerate_words(q, m)?.collect();
    let values = words
        .par_iter()
        .map(|w| input_entropy_enumerated(w, channel).map(|r| r.entropy_bits))
        .collect::<Result<Vec<f64>>>()?;
    Ok(crate::math::pairwise_sum(&values) / values.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AverageBounds {
    /// From `log2(r+1) <= r` (deletion) or `log2 r <= r-1` (insertion)
    /// applied to the average; always below the average.
    pub derived_bits: f64,
    /// Simplified closed-form bound. Exceeds the true average for small `n`,
    /// so it is reported but never relied on.
    pub closed_form_bits: f64,
}

pub fn average_lower_bound(n: usize, q: u8, channel: ChannelSpec) -> Result<AverageBounds> {
    let derived_bits = average_with(n, q, channel, |r| match channel.kind {
        ChannelKind::Deletion => r * (r + 1.0),
        ChannelKind::Insertion => r * (r - 1.0),
    })?;
    let nf = n as f64;
    let qf = f64::from(q);
    let closed_form_bits = match channel.kind {
        ChannelKind::Deletion => {
            let qn1 = qf.powi(n as i32 + 1);
            let qn2 = qf.powi(n as i32 + 2);
            (nf * qf).log2()
                - (2.0 * nf / (qf - 1.0) - (nf * nf - nf) / qn1
                    + (2.0 * qf * qf - 2.0 * qn2) / ((qf - 1.0).powi(2) * qn1))
                    / nf
        }
        ChannelKind::Insertion => {
            let qn = qf.powi(n as i32);
            let qn2 = qf.powi(n as i32 + 2);
            (nf * qf).log2()
                + (nf * nf / qn2 - nf * (2.0 * qn2 - qf + 1.0) / ((qf - 1.0) * qn2)
                    + 2.0 * (qn - 1.0) / ((qf - 1.0).powi(2) * qn))
                    / (nf + 1.0)
        }
    };
    Ok(AverageBounds {
        derived_bits,
        closed_form_bits,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundKind {
    #[default]
    Derived,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigureRow {
    pub n: usize,
    pub min_bits: f64,
    pub max_bits: f64,
    pub avg_bits: f64,
    pub bound_bits: f64,
}

impl FigureRow {
    pub const CSV_HEADER: [&'static str; 5] =
        ["n", "min_bits", "max_bits", "avg_bits", "bound_bits"];

    pub fn csv_record(&self) -> [String; 5] {
        let f = crate::entropy::format_bits;
        [
            self.n.to_string(),
            f(self.min_bits),
            f(self.max_bits),
            f(self.avg_bits),
            f(self.bound_bits),
        ]
    }
}

/// Minimum, maximum, average and a lower bound on the average of the input
/// entropy of a single-edit channel, one row per input length.
pub fn figure_rows(
    channel: ChannelSpec,
    lengths: std::ops::RangeInclusive<usize>,
    bound: BoundKind,
) -> Result<Vec<FigureRow>> {
    let lengths: Vec<usize> = lengths.collect();
    lengths
        .par_iter()
        .map(|&n| {
            let q = channel.q;
            let m = output_length(n.max(2), channel.kind);
            let bounds = average_lower_bound(n, q, channel)?;
            Ok(FigureRow {
                n,
                min_bits: global_extremum_value(q, m, channel, Which::Min)?,
                max_bits: global_extremum_value(q, m, channel, Which::Max)?,
                avg_bits: average_input_entropy(n, q, channel)?,
                bound_bits: match bound {
                    BoundKind::Derived => bounds.derived_bits,
                    BoundKind::ClosedForm => bounds.closed_form_bits,
                },
            })
        })
        .collect()
}

/// `Σ_{r} r N(n,r,q)`; equals `n q^n`.
pub fn run_table_position_total(table: &RunCountTable) -> Result<u128> {
    (1..=table.n).try_fold(0u128, |acc, r| {
        (r as u128)
            .checked_mul(table.get(r))
            .and_then(|v| acc.checked_add(v))
            .ok_or(Error::Overflow)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    fn texts(ws: &[Word]) -> Vec<String> {
        ws.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn fixed_run_examples() {
        let ch = ChannelSpec::deletion(1, 2);
        let r = extremum_over_fixed_runs(2, 4, 2, ch, Which::Min).unwrap();
        assert!((r.value_bits - (10f64.log2() - 1.0)).abs() < TOL);
        assert_eq!(texts(&r.witnesses), ["0001", "0111", "1000", "1110"]);

        let r = extremum_over_fixed_runs(2, 4, 2, ch, Which::Max).unwrap();
        assert!((r.value_bits - (10f64.log2() - 0.6 * 3f64.log2())).abs() < TOL);
        assert!((r.value_bits - 2.3709506).abs() < 1e-7);
        assert_eq!(texts(&r.witnesses), ["0011", "1100"]);

        let lo = extremum_over_fixed_runs(2, 5, 5, ch, Which::Min).unwrap();
        let hi = extremum_over_fixed_runs(2, 5, 5, ch, Which::Max).unwrap();
        assert_eq!(lo.value_bits, hi.value_bits);
        assert!(extremum_over_fixed_runs(2, 4, 5, ch, Which::Max).is_err());
        assert!(extremum_over_fixed_runs(2, 4, 0, ch, Which::Max).is_err());
    }

    #[test]
    fn global_examples() {
        let r = global_extremum(3, 4, ChannelSpec::deletion(1, 3), Which::Min).unwrap();
        assert_eq!(texts(&r.witnesses), ["0000", "1111", "2222"]);
        assert!((r.value_bits - (15f64.log2() - 5f64.log2() / 3.0)).abs() < TOL);

        let r = global_extremum(2, 5, ChannelSpec::insertion(1, 2), Which::Max).unwrap();
        assert_eq!(texts(&r.witnesses), ["01010", "10101"]);
        assert!((r.value_bits - 5f64.log2()).abs() < TOL);

        let r = global_extremum(2, 3, ChannelSpec::deletion(2, 2), Which::Min).unwrap();
        assert_eq!(texts(&r.witnesses), ["000", "111"]);
        assert!((r.value_bits - 3.4914461).abs() < 1e-7);
        assert!((r.n_indexed_form_bits.unwrap() - r.value_bits).abs() < TOL);
        assert!((r.m_indexed_form_bits.unwrap() - r.value_bits).abs() > 0.1);

        assert!(matches!(
            global_extremum(2, 4, ChannelSpec::deletion(2, 2), Which::Max),
            Err(Error::NotCharacterized(_))
        ));
        assert!(global_extremum(2, 1, ChannelSpec::insertion(1, 2), Which::Min).is_err());
    }

    #[test]
    fn two_deletion_closed_form_tracks_constant_word() {
        let ch = ChannelSpec::deletion(2, 2);
        for m in 1..=30 {
            let e = input_entropy_enumerated(&make_constant(2, m, 0).unwrap(), ch).unwrap();
            assert!(
                (e.entropy_bits - two_deletion_minimum_closed_form(m)).abs() < TOL,
                "m={m}"
            );
        }
        assert!((two_deletion_minimum_m_indexed(2).unwrap() - 1.20752).abs() < 1e-5);
        assert_eq!(two_deletion_minimum_m_indexed(1), None);
    }

    #[test]
    fn scan_examples() {
        let opts = ScanOptions::default();
        for (ch, which, expect) in [
            (
                ChannelSpec::deletion(1, 2),
                Which::Min,
                ["000000", "111111"],
            ),
            (
                ChannelSpec::deletion(2, 2),
                Which::Min,
                ["000000", "111111"],
            ),
            (
                ChannelSpec::deletion(1, 2),
                Which::Max,
                ["010101", "101010"],
            ),
        ] {
            let r = exhaustive_argopt(2, 6, Objective::input(ch), which, &opts).unwrap();
            assert_eq!(texts(&r.witnesses), expect);
        }
    }

    #[test]
    fn scan_respects_budget_and_run_filter() {
        let tight = ScanOptions {
            budget: 10,
            ..ScanOptions::default()
        };
        let ch = ChannelSpec::deletion(1, 2);
        assert!(matches!(
            exhaustive_argopt(2, 6, Objective::input(ch), Which::Min, &tight),
            Err(Error::BudgetExceeded {
                required: 64,
                budget: 10
            })
        ));
        let opts = ScanOptions {
            runs: Some(2),
            ..ScanOptions::default()
        };
        let scan = exhaustive_argopt(2, 4, Objective::input(ch), Which::Min, &opts).unwrap();
        let known = extremum_over_fixed_runs(2, 4, 2, ch, Which::Min).unwrap();
        assert_eq!(scan.witnesses, known.witnesses);
        assert!((scan.value_bits - known.value_bits).abs() < TOL);
    }

    #[test]
    fn scan_reports_progress() {
        let seen = AtomicU64::new(0);
        let cb = |done: u128, total: u128| {
            assert!(done <= total);
            seen.fetch_max(done as u64, Ordering::Relaxed);
        };
        let opts = ScanOptions {
            progress: Some(&cb),
            ..ScanOptions::default()
        };
        exhaustive_scan(2, 13, Which::Max, &opts, |w| Ok(w.run_count() as f64)).unwrap();
        assert_eq!(seen.load(Ordering::Relaxed), 1 << 13);
    }

    #[test]
    fn run_tables() {
        assert_eq!(run_count_table(2, 2).unwrap().get(1), 4);
        assert_eq!(run_count_table(3, 2).unwrap().get(1), 10);
        for q in 2..=3u8 {
            for n in 1..=9 {
                let t = run_count_table(n, q).unwrap();
                assert_eq!(t, RunCountTable::enumerated(n, q).unwrap());
                assert_eq!(t.get(n), u128::from(q));
                assert_eq!(
                    run_table_position_total(&t).unwrap(),
                    n as u128 * word_count(q, n).unwrap()
                );
            }
        }
    }

    #[test]
    fn averages() {
        let ch = ChannelSpec::deletion(1, 2);
        let avg = average_input_entropy(3, 2, ch).unwrap();
        assert!((avg - (6f64.log2() - (8.0 + 3.0 * 3f64.log2() * 2.0) / 24.0)).abs() < TOL);
        assert!((avg - 1.85539).abs() < 1e-5);
        let b = average_lower_bound(3, 2, ch).unwrap();
        assert!((b.derived_bits - (6f64.log2() - 20.0 / 24.0)).abs() < TOL);
        assert!(b.closed_form_bits > avg);
        for kind in [ChannelKind::Deletion, ChannelKind::Insertion] {
            let ch = ChannelSpec::new(kind, 1, 3).unwrap();
            for n in 2..=6 {
                let a = average_input_entropy(n, 3, ch).unwrap();
                let e = average_input_entropy_enumerated(n, 3, ch).unwrap();
                assert!((a - e).abs() < TOL, "{kind:?} n={n}");
            }
        }
    }

    #[test]
    fn figure_rows_are_ordered() {
        let rows = figure_rows(ChannelSpec::deletion(1, 2), 4..=12, BoundKind::Derived).unwrap();
        assert_eq!(rows.len(), 9);
        for r in &rows {
            assert!(r.min_bits <= r.avg_bits && r.avg_bits <= r.max_bits);
            assert!(r.bound_bits <= r.avg_bits);
        }
        assert_eq!(rows[0].csv_record()[0], "4");
    }
}
