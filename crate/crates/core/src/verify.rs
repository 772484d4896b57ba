//! Named invariant suites. Each one checks a family of identities over an
//! exhaustive or seeded-random grid and reports the first failure.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::capacity::{
    blahut_arimoto, uniform_mutual_information, BlahutArimotoOptions, TransitionMatrix,
};
use crate::embedding::{
    deletion_ball, embedding_number, insertion_ball, log_sum_of_counts,
    segment_extension_embedding, segment_extension_word, special_supersequences, subsequences,
    supersequences, WeightedBall,
};
use crate::entropy::{
    input_entropy_closed_form, input_entropy_enumerated, output_entropy_closed_form,
    output_entropy_enumerated, ChannelKind, ChannelSpec,
};
use crate::error::{invalid, Error, Result};
use crate::extremal::{
    average_input_entropy, average_input_entropy_enumerated, average_lower_bound,
    exhaustive_argopt, extremum_over_fixed_runs, global_extremum, global_extremum_value,
    run_count_table, run_table_position_total, Objective, RunCountTable, ScanOptions, Which,
};
use crate::math::{binomial, checked_pow, xlog2x_count, TOLERANCE_BITS};
use crate::words::{alternating_profile, enumerate_words, run_length_profile, word_count, Word};

pub const SUITE_NAMES: [&str; 10] = [
    "closed-vs-enum",
    "duality",
    "extremizers",
    "averages",
    "lemma-alpha",
    "correction-lemma",
    "w-recursions",
    "appendix-claim",
    "normalization",
    "capacity",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub q: u8,
    pub max_len: usize,
    /// Random cases for sampled suites.
    pub samples: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            q: 2,
            max_len: 8,
            samples: 10_000,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checked: u64,
    pub failed: u64,
    pub first_counterexample: Option<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            checked: 0,
            failed: 0,
            first_counterexample: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.first_counterexample.is_none() {
                self.first_counterexample = Some(describe());
            }
        }
    }

    fn close(&mut self, a: f64, b: f64, describe: impl FnOnce() -> String) {
        self.check((a - b).abs() <= TOLERANCE_BITS, || {
            format!("{} ({a} vs {b})", describe())
        });
    }

    fn absorb(&mut self, other: SuiteReport) {
        self.checked += other.checked;
        self.failed += other.failed;
        if self.first_counterexample.is_none() {
            self.first_counterexample = other.first_counterexample;
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} {}: {} checked, {} failed",
            self.name, self.checked, self.failed
        )?;
        if let Some(c) = &self.first_counterexample {
            write!(f, "; first counterexample: {c}")?;
        }
        Ok(())
    }
}

/// Runs `check` on every word of the given lengths in parallel and merges
/// the tallies in word order, so the first counterexample is deterministic.
fn over_words<F>(
    name: &str,
    q: u8,
    lengths: impl IntoIterator<Item = usize>,
    check: F,
) -> Result<SuiteReport>
where
    F: Fn(&Word, &mut SuiteReport) -> Result<()> + Sync,
{
    let mut report = SuiteReport::new(name);
    for m in lengths {
        let words: Vec<Word> = enumerate_words(q, m)?.collect();
        let parts = words
            .par_iter()
            .map(|w| {
                let mut r = SuiteReport::new(name);
                check(w, &mut r)?;
                Ok(r)
            })
            .collect::<Result<Vec<_>>>()?;
        for p in parts {
            report.absorb(p);
        }
    }
    Ok(report)
}

fn require_binary(config: &SuiteConfig, name: &str) -> Result<()> {
    if config.q != 2 {
        return Err(invalid(format!("suite {name} is defined for q=2 only")));
    }
    Ok(())
}

pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<SuiteReport> {
    match name {
        "closed-vs-enum" => closed_vs_enum(config),
        "duality" => duality(config),
        "extremizers" => extremizers(config),
        "averages" => averages(config),
        "lemma-alpha" => lemma_alpha(config),
        "correction-lemma" => correction_lemma(config),
        "w-recursions" => w_recursions(config),
        "appendix-claim" => appendix_claim(config),
        "normalization" => normalization(config),
        "capacity" => capacity_checks(config),
        _ => Err(invalid(format!(
            "unknown suite {name:?}; expected one of {} or all",
            SUITE_NAMES.join(", ")
        ))),
    }
}

/// All suites that apply to `config.q`.
pub fn run_all(config: &SuiteConfig) -> Result<Vec<SuiteReport>> {
    SUITE_NAMES
        .iter()
        .filter(|n| {
            config.q == 2 || !matches!(**n, "correction-lemma" | "w-recursions" | "appendix-claim")
        })
        .map(|n| run_suite(n, config))
        .collect()
}

fn closed_channels(q: u8) -> Vec<ChannelSpec> {
    let mut v = vec![ChannelSpec::deletion(1, q), ChannelSpec::insertion(1, q)];
    if q == 2 {
        v.extend([ChannelSpec::deletion(2, 2), ChannelSpec::insertion(2, 2)]);
    }
    v
}

fn applies(channel: ChannelSpec, m: usize) -> bool {
    match channel.kind {
        ChannelKind::Deletion => m >= 1,
        ChannelKind::Insertion => m > channel.k,
    }
}

/// Closed forms against ball enumeration, both directions.
pub fn closed_vs_enum(config: &SuiteConfig) -> Result<SuiteReport> {
    let channels = closed_channels(config.q);
    over_words("closed-vs-enum", config.q, 1..=config.max_len, |y, r| {
        for &ch in &channels {
            if !applies(ch, y.len()) {
                continue;
            }
            let closed = input_entropy_closed_form(y, ch)?.entropy_bits;
            let enumerated = input_entropy_enumerated(y, ch)?.entropy_bits;
            r.close(closed, enumerated, || format!("{ch} input y={y}"));
            if applies(ch.dual(), y.len()) {
                let closed = output_entropy_closed_form(y, ch.dual())?.entropy_bits;
                let enumerated = output_entropy_enumerated(y, ch.dual())?.entropy_bits;
                r.close(closed, enumerated, || format!("{} output x={y}", ch.dual()));
            }
        }
        Ok(())
    })
}

/// `H^In_{k-Del} = H^Out_{k-Ins}` and `H^In_{k-Ins} = H^Out_{k-Del}`, both
/// sides enumerated but computed along different routes.
pub fn duality(config: &SuiteConfig) -> Result<SuiteReport> {
    over_words("duality", config.q, 1..=config.max_len, |w, r| {
        for k in 1..=3usize {
            if k == 3 && w.len() > 7 {
                continue;
            }
            let del = ChannelSpec::deletion(k, w.q());
            let ins = ChannelSpec::insertion(k, w.q());
            let a = input_entropy_enumerated(w, del)?.entropy_bits;
            let b = output_entropy_enumerated(w, ins)?.entropy_bits;
            r.close(a, b, || {
                format!("k={k} deletion-input vs insertion-output at {w}")
            });
            if w.len() > k {
                let a = input_entropy_enumerated(w, ins)?.entropy_bits;
                let b = output_entropy_enumerated(w, del)?.entropy_bits;
                r.close(a, b, || {
                    format!("k={k} insertion-input vs deletion-output at {w}")
                });
            }
        }
        Ok(())
    })
}

fn texts(words: &[Word]) -> String {
    words
        .iter()
        .map(|w| w.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Exhaustive scans against the known extremizers, globally and per run count.
pub fn extremizers(config: &SuiteConfig) -> Result<SuiteReport> {
    let q = config.q;
    let mut report = SuiteReport::new("extremizers");
    let opts = ScanOptions::default();
    let mut global = vec![
        (ChannelSpec::deletion(1, q), Which::Min),
        (ChannelSpec::deletion(1, q), Which::Max),
        (ChannelSpec::insertion(1, q), Which::Min),
        (ChannelSpec::insertion(1, q), Which::Max),
    ];
    if q == 2 {
        global.push((ChannelSpec::deletion(2, 2), Which::Min));
        global.push((ChannelSpec::insertion(2, 2), Which::Min));
        global.push((ChannelSpec::insertion(3, 2), Which::Min));
    }
    for m in 1..=config.max_len {
        for &(ch, which) in &global {
            if !applies(ch, m) || (ch.k >= 2 && m > 9) {
                continue;
            }
            let known = global_extremum(q, m, ch, which)?;
            let scan = exhaustive_argopt(q, m, Objective::input(ch), which, &opts)?;
            report.check(known.witnesses == scan.witnesses, || {
                format!(
                    "{ch} {which:?} m={m}: scan {{{}}} vs {{{}}}",
                    texts(&scan.witnesses),
                    texts(&known.witnesses)
                )
            });
            report.close(known.value_bits, scan.value_bits, || {
                format!("{ch} {which:?} m={m} value")
            });
        }
        for ch in [ChannelSpec::deletion(1, q), ChannelSpec::insertion(1, q)] {
            if !applies(ch, m) {
                continue;
            }
            let mut previous_min = f64::NEG_INFINITY;
            for runs in 1..=m {
                for which in [Which::Min, Which::Max] {
                    let known = extremum_over_fixed_runs(q, m, runs, ch, which)?;
                    let scan_opts = ScanOptions {
                        runs: Some(runs),
                        ..ScanOptions::default()
                    };
                    let scan = exhaustive_argopt(q, m, Objective::input(ch), which, &scan_opts)?;
                    report.check(known.witnesses == scan.witnesses, || {
                        format!(
                            "{ch} {which:?} m={m} R={runs}: scan {{{}}} vs {{{}}}",
                            texts(&scan.witnesses),
                            texts(&known.witnesses)
                        )
                    });
                    report.close(known.value_bits, scan.value_bits, || {
                        format!("{ch} {which:?} m={m} R={runs} value")
                    });
                    if which == Which::Min {
                        let v = known.value_bits;
                        report.check(v >= previous_min - TOLERANCE_BITS, || {
                            format!("{ch} per-run minimum decreases at m={m} R={runs}")
                        });
                        previous_min = v;
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Run-count formula against the enumerated mean, the derived bound and the
/// extremes.
pub fn averages(config: &SuiteConfig) -> Result<SuiteReport> {
    let q = config.q;
    let mut report = SuiteReport::new("averages");
    for n in 1..=config.max_len {
        let table = run_count_table(n, q)?;
        report.check(table == RunCountTable::enumerated(n, q)?, || {
            format!("run-count table n={n} q={q}")
        });
        report.check(
            run_table_position_total(&table)? == n as u128 * word_count(q, n)?,
            || format!("run-count positions n={n} q={q}"),
        );
    }
    for n in 2..=config.max_len {
        for ch in [ChannelSpec::deletion(1, q), ChannelSpec::insertion(1, q)] {
            let avg = average_input_entropy(n, q, ch)?;
            let direct = average_input_entropy_enumerated(n, q, ch)?;
            report.close(avg, direct, || format!("{ch} average n={n}"));
            let bound = average_lower_bound(n, q, ch)?.derived_bits;
            report.check(bound <= avg + TOLERANCE_BITS, || {
                format!("{ch} derived bound {bound} above average {avg} at n={n}")
            });
            let m = match ch.kind {
                ChannelKind::Deletion => n - 1,
                ChannelKind::Insertion => n + 1,
            };
            let lo = global_extremum_value(q, m, ch, Which::Min)?;
            let hi = global_extremum_value(q, m, ch, Which::Max)?;
            report.check(
                lo <= avg + TOLERANCE_BITS && avg <= hi + TOLERANCE_BITS,
                || format!("{ch} ordering min {lo} avg {avg} max {hi} at n={n}"),
            );
        }
    }
    Ok(report)
}

fn random_word(rng: &mut ChaCha8Rng, q: u8, len: usize) -> Word {
    let symbols = (0..len).map(|_| rng.gen_range(0..q)).collect();
    Word::new(symbols, q).expect("symbols drawn below q")
}

/// `ω_{αy}(αx) = ω_y(x) + Σ_{i ≤ |x|-|y|, x_i = α} ω_y(x_{i+1..})` on random
/// pairs; half of the `y` are chosen as subsequences of `x`.
pub fn lemma_alpha(config: &SuiteConfig) -> Result<SuiteReport> {
    let q = config.q;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = SuiteReport::new("lemma-alpha");
    let max_len = config.max_len.max(1);
    for _ in 0..config.samples {
        let n = rng.gen_range(1..=max_len);
        let x = random_word(&mut rng, q, n);
        let m = rng.gen_range(0..=n);
        let y = if rng.gen_bool(0.5) {
            let mut keep: Vec<usize> = (0..n).collect();
            while keep.len() > m {
                keep.remove(rng.gen_range(0..keep.len()));
            }
            Word::new(keep.iter().map(|&i| x.symbols()[i]).collect(), q)?
        } else {
            random_word(&mut rng, q, m)
        };
        let alpha = rng.gen_range(0..q);
        let lhs = embedding_number(&y.prepend(alpha), &x.prepend(alpha))?;
        let mut rhs = embedding_number(&y, &x)?;
        for i in 1..=n - m {
            if x.symbols()[i - 1] == alpha {
                rhs += embedding_number(&y, &x.suffix(i))?;
            }
        }
        report.check(lhs == rhs, || {
            format!("alpha={alpha} y={y} x={x}: {lhs} vs {rhs}")
        });
    }
    Ok(report)
}

/// Segment extension counts, the three special supersequences and the
/// single-symbol prefix recursions over `I_2(y)`.
pub fn correction_lemma(config: &SuiteConfig) -> Result<SuiteReport> {
    require_binary(config, "correction-lemma")?;
    over_words("correction-lemma", 2, 1..=config.max_len, |y, r| {
        let segments = alternating_profile(y)?;
        for i in 1..=segments.len() {
            let x = segment_extension_word(y, i)?;
            let predicted = segment_extension_embedding(y, i)?;
            let actual = embedding_number(y, &x)?;
            r.check(predicted == actual, || {
                format!("segment {i} of {y}: {predicted} vs {actual}")
            });
        }
        let special = special_supersequences(y)?;
        for (x, predicted, label) in [
            (&special.beta, special.omega_beta, "beta"),
            (&special.gamma, special.omega_gamma, "gamma"),
            (&special.delta, special.omega_delta, "delta"),
        ] {
            let actual = embedding_number(y, x)?;
            r.check(predicted == actual, || {
                format!("{label} of {y}: {predicted} vs {actual}")
            });
        }

        let y1 = y.symbols()[0];
        for (x, omega) in &insertion_ball(y, 2)?.entries {
            let x1 = x.symbols()[0];
            for alpha in 0..2u8 {
                let expected = if alpha != y1 && y1 == x1 {
                    omega + u128::from(*x == special.beta)
                } else if alpha != y1 {
                    2 * omega + u128::from(*x == special.gamma)
                } else if y1 != x1 {
                    omega + u128::from(*x == special.delta)
                } else {
                    continue;
                };
                let actual = embedding_number(&y.prepend(alpha), &x.prepend(alpha))?;
                r.check(expected == actual, || {
                    format!("prefix {alpha} on y={y} x={x}: {expected} vs {actual}")
                });
            }
        }
        Ok(())
    })
}

/// `W_S(y) = Σ_{x ∈ S} ω_y(x) log2 ω_y(x)` over words `prefix ∘ x'`, `x' ∈ ball`.
fn prefixed_log_sum(y: &Word, prefix: &[u8], ball: &WeightedBall) -> Result<f64> {
    let counts = ball
        .entries
        .keys()
        .map(|x| embedding_number(y, &x.prepend_all(prefix)))
        .collect::<Result<Vec<_>>>()?;
    Ok(log_sum_of_counts(counts))
}

fn xlog(a: u128) -> f64 {
    xlog2x_count(a)
}

/// Recursions for the weighted log-sum over the part of `I_2(y)` that keeps
/// the first symbol in place, split by whether `y` starts with a repeat.
pub fn w_recursions(config: &SuiteConfig) -> Result<SuiteReport> {
    require_binary(config, "w-recursions")?;
    over_words("w-recursions", 2, 2..=config.max_len, |y, r| {
        let s = y.symbols();
        let t = y.suffix(1);
        let i1 = insertion_ball(&t, 1)?;
        let w_i1 = log_sum_of_counts(i1.entries.values().copied());
        if s[0] != s[1] {
            let lhs = prefixed_log_sum(y, &s[..1], &insertion_ball(&t, 2)?)?;
            let theta = special_supersequences(&t)?.omega_beta;
            let tail = prefixed_log_sum(&t, &s[1..2], &insertion_ball(&y.suffix(2), 2)?)?;
            let rhs = 3.0 * 3f64.log2() - 2.0 + 4.0 * y.len() as f64 + 2.0 * w_i1 + xlog(theta + 1)
                - xlog(theta)
                + tail;
            r.close(lhs, rhs, || format!("distinct-start recursion at {y}"));
        } else {
            let lhs = prefixed_log_sum(y, &[s[0], Word::flip(s[1])], &i1)?;
            let r1 = run_length_profile(&t)?.runs[0] as u128;
            let rhs = xlog(r1 + 2) - xlog(r1 + 1) + w_i1;
            r.close(lhs, rhs, || format!("repeated-start recursion at {y}"));
        }
        Ok(())
    })
}

/// The difference `W_{y1 y1 ∘ I_2(y_{2..})}(y1 ∘ y) - W_{y1 ∘ I_2(y_{2..})}(y)`
/// is maximized exactly by the two constant words.
pub fn appendix_claim(config: &SuiteConfig) -> Result<SuiteReport> {
    require_binary(config, "appendix-claim")?;
    let mut report = SuiteReport::new("appendix-claim");
    for m in 1..=config.max_len {
        let opts = ScanOptions::default();
        let (_, witnesses) = crate::extremal::exhaustive_scan(2, m, Which::Max, &opts, |y| {
            let s = y.symbols();
            let ball = insertion_ball(&y.suffix(1), 2)?;
            let longer = prefixed_log_sum(&y.prepend(s[0]), &[s[0], s[0]], &ball)?;
            let shorter = prefixed_log_sum(y, &s[..1], &ball)?;
            Ok(longer - shorter)
        })?;
        let expected = vec![
            crate::words::make_constant(2, m, 0)?,
            crate::words::make_constant(2, m, 1)?,
        ];
        report.check(witnesses == expected, || {
            format!("m={m}: maximizers {{{}}}", texts(&witnesses))
        });
    }
    Ok(report)
}

/// Ball totals and sizes, and ball supports against the plain set builders.
pub fn normalization(config: &SuiteConfig) -> Result<SuiteReport> {
    let q = config.q;
    over_words("normalization", q, 0..=config.max_len, |y, r| {
        let m = y.len();
        let qq = u128::from(q);
        for k in 0..=3usize {
            if k == 3 && m > 7 {
                continue;
            }
            let ins = insertion_ball(y, k)?;
            let expected =
                binomial((m + k) as u64, k as u64)? * checked_pow(u64::from(q), k as u32)?;
            r.check(ins.total()? == expected, || {
                format!("insertion total k={k} y={y}")
            });
            r.check(
                ins.entries
                    .keys()
                    .cloned()
                    .collect::<std::collections::HashSet<_>>()
                    == supersequences(y, k),
                || format!("insertion support k={k} y={y}"),
            );
            if k <= m {
                let del = deletion_ball(y, k)?;
                r.check(del.total()? == binomial(m as u64, k as u64)?, || {
                    format!("deletion total k={k} y={y}")
                });
                r.check(
                    del.entries
                        .keys()
                        .cloned()
                        .collect::<std::collections::HashSet<_>>()
                        == subsequences(y, k)?,
                    || format!("deletion support k={k} y={y}"),
                );
            }
        }
        let size = insertion_ball(y, 1)?.len() as u128;
        r.check(size == qq + m as u128 * (qq - 1), || {
            format!("|I_1({y})| = {size}")
        });
        Ok(())
    })
}

/// Blahut–Arimoto sanity: identity channel, the two-symbol single-deletion
/// channel, monotone lower estimates and domination of uniform-input
/// information.
pub fn capacity_checks(config: &SuiteConfig) -> Result<SuiteReport> {
    let q = config.q;
    let mut report = SuiteReport::new("capacity");
    let opts = BlahutArimotoOptions::default();
    let qbits = f64::from(q).log2();
    for n in 1..=config.max_len {
        for k in 0..=2usize {
            for kind in [ChannelKind::Deletion, ChannelKind::Insertion] {
                if (k == 0 && kind == ChannelKind::Insertion) || k > n {
                    continue;
                }
                let ch = ChannelSpec::new(kind, k, q)?;
                let matrix = match TransitionMatrix::new(ch, n) {
                    Ok(m) => m,
                    Err(Error::BudgetExceeded { .. }) => continue,
                    Err(e) => return Err(e),
                };
                report.check(matrix.max_row_defect() <= 1e-12, || {
                    format!("{ch} n={n} rows")
                });
                let c = blahut_arimoto(&matrix, opts)?;
                report.check(
                    c.lower_history.windows(2).all(|w| w[1] >= w[0] - 1e-12),
                    || format!("{ch} n={n} lower estimate not monotone"),
                );
                report.check(c.capacity_bits <= n as f64 * qbits + 1e-12, || {
                    format!("{ch} n={n} capacity above n log q")
                });
                if k == 0 {
                    report.close(c.capacity_bits, n as f64 * qbits, || {
                        format!("identity n={n}")
                    });
                }
                let uniform = uniform_mutual_information(ch, n)?;
                report.check(c.capacity_bits >= uniform - TOLERANCE_BITS, || {
                    format!(
                        "{ch} n={n}: capacity {} below uniform {uniform}",
                        c.capacity_bits
                    )
                });
            }
        }
    }
    if q == 2 && config.max_len >= 2 {
        let c = blahut_arimoto(
            &TransitionMatrix::new(ChannelSpec::deletion(1, 2), 2)?,
            opts,
        )?;
        report.check((c.capacity_bits - 1.0).abs() <= 1e-6, || {
            format!("1-Del n=2 capacity {}", c.capacity_bits)
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(q: u8, max_len: usize) -> SuiteConfig {
        SuiteConfig {
            q,
            max_len,
            samples: 500,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn every_suite_passes_on_small_grids() {
        for name in SUITE_NAMES {
            let r = run_suite(name, &cfg(2, 6)).unwrap();
            assert!(r.passed(), "{r}");
            assert!(r.checked > 0, "{name}");
        }
    }

    #[test]
    fn ternary_suites() {
        for r in run_all(&cfg(3, 4)).unwrap() {
            assert!(r.passed(), "{r}");
        }
        assert!(run_suite("w-recursions", &cfg(3, 4)).is_err());
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope", &cfg(2, 3)).is_err());
    }

    #[test]
    fn report_display() {
        let mut r = SuiteReport::new("demo");
        r.check(true, String::new);
        r.check(false, || "y=01".into());
        r.check(false, || "y=10".into());
        assert_eq!(
            r.to_string(),
            "FAIL demo: 3 checked, 2 failed; first counterexample: y=01"
        );
    }
}
