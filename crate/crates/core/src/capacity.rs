//! Capacity of the k-deletion and k-insertion channels at small block
//! lengths, and the mixture bound for the binary deletion channel.

use rayon::prelude::*;
use serde::Serialize;

use crate::embedding::{deletion_ball, insertion_ball};
use crate::entropy::{output_entropy_enumerated, ChannelKind, ChannelSpec};
use crate::error::{invalid, Error, Result};
use crate::math::{binomial, checked_pow, pairwise_sum, shannon_entropy};
use crate::words::{enumerate_words, word_count, Word};

/// Largest dense matrix (in entries) built without an explicit budget.
pub const DEFAULT_MATRIX_BUDGET: u128 = 1 << 25;

/// Dense row-stochastic matrix; rows are inputs, columns outputs, both in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    pub channel: ChannelSpec,
    pub n: usize,
    pub inputs: Vec<Word>,
    pub outputs: Vec<Word>,
    probabilities: Vec<f64>,
}

fn lex_index(word: &Word) -> usize {
    let q = usize::from(word.q());
    word.symbols()
        .iter()
        .fold(0usize, |acc, &s| acc * q + usize::from(s))
}

impl TransitionMatrix {
    pub fn new(channel: ChannelSpec, n: usize) -> Result<Self> {
        Self::with_budget(channel, n, DEFAULT_MATRIX_BUDGET)
    }

    pub fn with_budget(channel: ChannelSpec, n: usize, budget: u128) -> Result<Self> {
        let q = channel.q;
        let k = channel.k;
        let out_len = match channel.kind {
            ChannelKind::Deletion => n
                .checked_sub(k)
                .ok_or_else(|| invalid(format!("cannot delete {k} symbols from length {n}")))?,
            ChannelKind::Insertion => n + k,
        };
        let rows = word_count(q, n)?;
        let cols = word_count(q, out_len)?;
        let entries = rows.checked_mul(cols).ok_or(Error::Overflow)?;
        if entries > budget {
            return Err(Error::BudgetExceeded {
                required: entries,
                budget,
            });
        }
        let total = match channel.kind {
            ChannelKind::Deletion => binomial(n as u64, k as u64)?,
            ChannelKind::Insertion => binomial((n + k) as u64, k as u64)?
                .checked_mul(checked_pow(u64::from(q), k as u32)?)
                .ok_or(Error::Overflow)?,
        } as f64;

        let inputs: Vec<Word> = enumerate_words(q, n)?.collect();
        let outputs: Vec<Word> = enumerate_words(q, out_len)?.collect();
        let width = outputs.len();
        let rows: Vec<Vec<f64>> = inputs
            .par_iter()
            .map(|x| {
                let ball = match channel.kind {
                    ChannelKind::Deletion => deletion_ball(x, k)?,
                    ChannelKind::Insertion => insertion_ball(x, k)?,
                };
                let mut row = vec![0.0; width];
                for (y, &count) in &ball.entries {
                    row[lex_index(y)] = count as f64 / total;
                }
                Ok(row)
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            channel,
            n,
            inputs,
            outputs,
            probabilities: rows.concat(),
        })
    }

    pub fn input_count(&self) -> usize {
        self.inputs.len()
    }

    pub fn output_count(&self) -> usize {
        self.outputs.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let w = self.output_count();
        &self.probabilities[i * w..(i + 1) * w]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i)[j]
    }

    /// Largest deviation of a row sum from one.
    pub fn max_row_defect(&self) -> f64 {
        (0..self.input_count())
            .map(|i| (self.row(i).iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    fn output_marginal(&self, p: &[f64]) -> Vec<f64> {
        const BLOCK: usize = 256;
        let w = self.output_count();
        let mut marginal = vec![0.0; w];
        marginal
            .par_chunks_mut(BLOCK)
            .enumerate()
            .for_each(|(b, block)| {
                let offset = b * BLOCK;
                for (i, &pi) in p.iter().enumerate() {
                    let row = &self.probabilities[i * w + offset..i * w + offset + block.len()];
                    for (acc, &wij) in block.iter_mut().zip(row) {
                        *acc += pi * wij;
                    }
                }
            });
        marginal
    }

    /// `D(W(.|x) || q)` for every input row, in bits.
    fn divergences(&self, marginal: &[f64]) -> Vec<f64> {
        (0..self.input_count())
            .into_par_iter()
            .map(|i| {
                let terms: Vec<f64> = self
                    .row(i)
                    .iter()
                    .zip(marginal)
                    .filter(|(&w, &qy)| w > 0.0 && qy > 0.0)
                    .map(|(&w, &qy)| w * (w / qy).log2())
                    .collect();
                pairwise_sum(&terms)
            })
            .collect()
    }

    /// `I(X;Y)` in bits when the input has distribution `p`.
    pub fn mutual_information(&self, p: &[f64]) -> Result<f64> {
        if p.len() != self.input_count() {
            return Err(invalid("input distribution has the wrong length"));
        }
        let marginal = self.output_marginal(p);
        let d = self.divergences(&marginal);
        let terms: Vec<f64> = p.iter().zip(&d).map(|(pi, di)| pi * di).collect();
        Ok(pairwise_sum(&terms).max(0.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlahutArimotoOptions {
    /// Stop once the upper and lower capacity estimates are this close (bits).
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for BlahutArimotoOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            max_iterations: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityResult {
    /// Lower capacity estimate at the last iteration.
    pub capacity_bits: f64,
    pub upper_bits: f64,
    pub optimal_input_distribution: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Lower estimate after every iteration; nondecreasing.
    #[serde(skip)]
    pub lower_history: Vec<f64>,
}

/// Blahut–Arimoto iteration from the uniform input distribution.
pub fn blahut_arimoto(
    matrix: &TransitionMatrix,
    options: BlahutArimotoOptions,
) -> Result<CapacityResult> {
    if options.tolerance.is_nan() || options.tolerance <= 0.0 {
        return Err(invalid("tolerance must be positive"));
    }
    let size = matrix.input_count();
    let mut p = vec![1.0 / size as f64; size];
    let mut history = Vec::new();
    let mut lower = 0.0;
    let mut upper = f64::INFINITY;
    let mut converged = false;

    for _ in 0..options.max_iterations.max(1) {
        let marginal = matrix.output_marginal(&p);
        let d = matrix.divergences(&marginal);
        let weights: Vec<f64> = p.iter().zip(&d).map(|(pi, di)| pi * di.exp2()).collect();
        let z = pairwise_sum(&weights);
        lower = z.log2().max(0.0);
        upper = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        history.push(lower);
        if upper - lower < options.tolerance {
            converged = true;
            break;
        }
        p = weights.into_iter().map(|w| w / z).collect();
    }
    Ok(CapacityResult {
        capacity_bits: lower,
        upper_bits: upper,
        optimal_input_distribution: p,
        iterations: history.len(),
        converged,
        lower_history: history,
    })
}

pub fn capacity(
    channel: ChannelSpec,
    n: usize,
    options: BlahutArimotoOptions,
) -> Result<CapacityResult> {
    blahut_arimoto(&TransitionMatrix::new(channel, n)?, options)
}

/// `I(X;Y)` under uniform input, as `H(Y) - mean_x H(Y | X = x)` with `H(Y)`
/// taken from exact output counts.
pub fn uniform_mutual_information(channel: ChannelSpec, n: usize) -> Result<f64> {
    let q = channel.q;
    let inputs: Vec<Word> = enumerate_words(q, n)?.collect();
    let conditional = inputs
        .par_iter()
        .map(|x| output_entropy_enumerated(x, channel).map(|r| r.entropy_bits))
        .collect::<Result<Vec<f64>>>()?;
    let mean_conditional = pairwise_sum(&conditional) / inputs.len() as f64;

    let mut counts = std::collections::BTreeMap::<Word, u128>::new();
    for x in &inputs {
        let ball = match channel.kind {
            ChannelKind::Deletion => deletion_ball(x, channel.k)?,
            ChannelKind::Insertion => insertion_ball(x, channel.k)?,
        };
        for (y, c) in ball.entries {
            *counts.entry(y).or_insert(0) += c;
        }
    }
    let grand: u128 = counts.values().sum();
    let probabilities: Vec<f64> = counts.values().map(|&c| c as f64 / grand as f64).collect();
    Ok((shannon_entropy(&probabilities) - mean_conditional).max(0.0))
}

/// Capacities of the `k`-deletion channel at length `n` for `k = 0..=n`;
/// `None` where the matrix would exceed the budget.
pub fn deletion_capacities(
    n: usize,
    q: u8,
    options: BlahutArimotoOptions,
) -> Result<Vec<Option<CapacityResult>>> {
    (0..=n)
        .map(
            |k| match capacity(ChannelSpec::deletion(k, q), n, options) {
                Ok(r) => Ok(Some(r)),
                Err(Error::BudgetExceeded { .. }) => Ok(None),
                Err(e) => Err(e),
            },
        )
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixtureBound {
    pub p: f64,
    pub bound_bits: f64,
    pub bound_bits_per_symbol: f64,
    /// Values of `k` whose capacity was replaced by `(n - k) log2 q`.
    pub substituted: Vec<usize>,
}

/// `Σ_k C(n,k) p^k (1-p)^(n-k) C_k`: the capacity of the binomial mixture of
/// fixed-count deletion channels bounds the per-block capacity of the i.i.d.
/// deletion channel with deletion probability `p`.
pub fn mixture_upper_bound(
    n: usize,
    p: f64,
    capacities: &[Option<f64>],
    q: u8,
) -> Result<MixtureBound> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("deletion probability {p} outside [0, 1]")));
    }
    if capacities.len() != n + 1 {
        return Err(invalid(format!(
            "need {} capacities (k = 0..={n}), got {}",
            n + 1,
            capacities.len()
        )));
    }
    let mut substituted = Vec::new();
    let mut terms = Vec::with_capacity(n + 1);
    for (k, c) in capacities.iter().enumerate() {
        let c = c.unwrap_or_else(|| {
            substituted.push(k);
            (n - k) as f64 * f64::from(q).log2()
        });
        let weight = binomial(n as u64, k as u64)? as f64
            * p.powi(k as i32)
            * (1.0 - p).powi((n - k) as i32);
        terms.push(weight * c);
    }
    let bound_bits = pairwise_sum(&terms);
    Ok(MixtureBound {
        p,
        bound_bits,
        bound_bits_per_symbol: if n == 0 { 0.0 } else { bound_bits / n as f64 },
        substituted,
    })
}

pub const CAPACITY_CSV_HEADER: [&str; 2] = ["k", "capacity_bits"];
pub const BOUND_CSV_HEADER: [&str; 3] = ["p", "bound_bits", "bound_bits_per_symbol"];
