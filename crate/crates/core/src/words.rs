//! Words over a finite alphabet, their run and alternating-segment
//! decompositions, canonical extremal words, and sequence-space enumerators.
//!
//! Enumerators yield words in lexicographic order, which for fixed length is
//! the base-q counting order `0..00, 0..01, ...`. CSV output relies on it.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::math::{binomial, checked_pow};

/// A finite sequence over `{0, .., q-1}`.
///
/// Ordering compares symbols first, so words of a fixed length sort
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word {
    symbols: Vec<u8>,
    q: u8,
}

impl Word {
    pub fn new(symbols: Vec<u8>, q: u8) -> Result<Self> {
        check_alphabet(usize::from(q))?;
        if let Some(&s) = symbols.iter().find(|&&s| s >= q) {
            return Err(Error::SymbolOutOfRange {
                symbol: usize::from(s),
                q,
            });
        }
        Ok(Self { symbols, q })
    }

    pub fn empty(q: u8) -> Result<Self> {
        Self::new(Vec::new(), q)
    }

    /// Parses a word under alphabet size `q`.
    ///
    /// Accepts digit strings (`0-9`, then `a-z` for q up to 36) or
    /// comma-separated integers. `""` is the empty word.
    pub fn parse(text: &str, q: u8) -> Result<Self> {
        check_alphabet(usize::from(q))?;
        let text = text.trim();
        let parse_err = |reason: String| Error::Parse {
            text: text.to_string(),
            reason,
        };
        let symbols: Vec<u8> = if text.contains(',') {
            text.split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<u8>()
                        .map_err(|e| parse_err(format!("bad symbol {tok:?}: {e}")))
                })
                .collect::<Result<_>>()?
        } else {
            text.chars()
                .map(|c| {
                    c.to_digit(36)
                        .map(|d| d as u8)
                        .ok_or_else(|| parse_err(format!("bad symbol {c:?}")))
                })
                .collect::<Result<_>>()?
        };
        if let Some(&s) = symbols.iter().find(|&&s| s >= q) {
            return Err(parse_err(format!("symbol {s} out of range for q={q}")));
        }
        Ok(Self { symbols, q })
    }

    pub(crate) fn from_parts_unchecked(symbols: Vec<u8>, q: u8) -> Self {
        debug_assert!(symbols.iter().all(|&s| s < q));
        Self { symbols, q }
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn is_binary(&self) -> bool {
        self.q == 2
    }

    pub fn require_binary(&self) -> Result<()> {
        if self.is_binary() {
            Ok(())
        } else {
            Err(Error::NotBinary(self.q))
        }
    }

    /// Number of runs, `0` for the empty word.
    pub fn run_count(&self) -> usize {
        if self.symbols.is_empty() {
            return 0;
        }
        1 + self.symbols.windows(2).filter(|w| w[0] != w[1]).count()
    }

    pub fn is_constant(&self) -> bool {
        self.symbols.windows(2).all(|w| w[0] == w[1])
    }

    /// `symbol ∘ self`.
    pub fn prepend(&self, symbol: u8) -> Word {
        let mut symbols = Vec::with_capacity(self.len() + 1);
        symbols.push(symbol);
        symbols.extend_from_slice(&self.symbols);
        Word::from_parts_unchecked(symbols, self.q)
    }

    /// `prefix ∘ self`.
    pub fn prepend_all(&self, prefix: &[u8]) -> Word {
        let mut symbols = prefix.to_vec();
        symbols.extend_from_slice(&self.symbols);
        Word::from_parts_unchecked(symbols, self.q)
    }

    /// The suffix starting at zero-based position `start`.
    pub fn suffix(&self, start: usize) -> Word {
        let start = start.min(self.len());
        Word::from_parts_unchecked(self.symbols[start..].to_vec(), self.q)
    }

    /// Binary complement of a symbol.
    pub fn flip(symbol: u8) -> u8 {
        1 - symbol
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q <= 10 {
            for &s in &self.symbols {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.symbols.iter().map(u8::to_string).collect();
            f.write_str(&parts.join(","))
        }
    }
}

/// Parsing through `FromStr` assumes the binary alphabet.
impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Word::parse(s, 2)
    }
}

fn check_alphabet(q: usize) -> Result<()> {
    if (2..=255).contains(&q) {
        Ok(())
    } else {
        Err(Error::InvalidAlphabet(q))
    }
}

/// Run-length profile: run lengths `(r_1, .., r_R)` and the symbol of each run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunLengthProfile {
    pub runs: Vec<usize>,
    pub symbols: Vec<u8>,
}

impl RunLengthProfile {
    pub fn len(&self) -> usize {
        self.runs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn total_length(&self) -> usize {
        self.runs.iter().sum()
    }

    pub fn to_word(&self, q: u8) -> Result<Word> {
        if self.runs.len() != self.symbols.len() {
            return Err(invalid("runs and run symbols differ in length"));
        }
        if self.runs.contains(&0) {
            return Err(invalid("run lengths must be positive"));
        }
        if self.symbols.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("consecutive runs must carry distinct symbols"));
        }
        let mut symbols = Vec::with_capacity(self.total_length());
        for (&len, &sym) in self.runs.iter().zip(&self.symbols) {
            symbols.extend(std::iter::repeat_n(sym, len));
        }
        Word::new(symbols, q)
    }
}

pub fn run_length_profile(word: &Word) -> Result<RunLengthProfile> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut runs = Vec::new();
    let mut symbols = Vec::new();
    for &s in word.symbols() {
        if symbols.last() == Some(&s) {
            *runs.last_mut().unwrap() += 1;
        } else {
            symbols.push(s);
            runs.push(1);
        }
    }
    Ok(RunLengthProfile { runs, symbols })
}

/// Maximal alternating segments `(a_1, .., a_A)` with the forward and
/// backward indices `f_i`, `b_i`. All indices are one-based.
///
/// `f_i` is the smallest index in `[i+1, A]` whose segment is longer than
/// one, or `A` if there is none (`f_A = A`). `b_i` is the largest index in
/// `[1, i-1]` whose segment is longer than one, or `1` (`b_1 = 1`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternatingProfile {
    pub segments: Vec<usize>,
    pub forward: Vec<usize>,
    pub backward: Vec<usize>,
}

impl AlternatingProfile {
    pub fn from_segments(segments: Vec<usize>) -> Result<Self> {
        if segments.is_empty() || segments.contains(&0) {
            return Err(invalid("segment lengths must be positive and nonempty"));
        }
        let count = segments.len();
        let mut forward = vec![count; count];
        let mut backward = vec![1; count];
        let mut next_long = None;
        for i in (1..=count).rev() {
            if i < count {
                forward[i - 1] = next_long.unwrap_or(count);
            }
            if segments[i - 1] > 1 {
                next_long = Some(i);
            }
        }
        let mut prev_long = None;
        for i in 1..=count {
            if i > 1 {
                backward[i - 1] = prev_long.unwrap_or(1);
            }
            if segments[i - 1] > 1 {
                prev_long = Some(i);
            }
        }
        Ok(Self {
            segments,
            forward,
            backward,
        })
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// `a_i`, one-based.
    pub fn a(&self, i: usize) -> usize {
        self.segments[i - 1]
    }

    /// `f_i`, one-based.
    pub fn f(&self, i: usize) -> usize {
        self.forward[i - 1]
    }

    /// `b_i`, one-based.
    pub fn b(&self, i: usize) -> usize {
        self.backward[i - 1]
    }

    /// Zero-based half-open position range of segment `i` (one-based).
    pub fn span(&self, i: usize) -> std::ops::Range<usize> {
        let start: usize = self.segments[..i - 1].iter().sum();
        start..start + self.segments[i - 1]
    }
}

/// Splits a word into maximal alternating segments.
///
/// Segments partition the word: a new segment starts wherever two adjacent
/// symbols are equal. Over larger alphabets a segment also ends before a
/// third distinct symbol would enter it; the binary invariant
/// `A + R = len + 1` only holds for `q = 2`.
pub fn alternating_profile(word: &Word) -> Result<AlternatingProfile> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    let s = word.symbols();
    let mut segments = vec![1usize];
    for i in 1..s.len() {
        let len = *segments.last().unwrap();
        let breaks = s[i] == s[i - 1] || (len >= 2 && s[i] != s[i - 2]);
        if breaks {
            segments.push(1);
        } else {
            *segments.last_mut().unwrap() += 1;
        }
    }
    AlternatingProfile::from_segments(segments)
}

pub fn make_constant(q: u8, m: usize, symbol: u8) -> Result<Word> {
    Word::new(vec![symbol; m], q)
}

pub fn make_alternating(q: u8, m: usize, sym_a: u8, sym_b: u8) -> Result<Word> {
    if sym_a == sym_b {
        return Err(invalid("alternating word needs two distinct symbols"));
    }
    Word::new(
        (0..m)
            .map(|i| if i % 2 == 0 { sym_a } else { sym_b })
            .collect(),
        q,
    )
}

fn check_runs(m: usize, runs: usize) -> Result<()> {
    if runs < 1 || runs > m {
        return Err(invalid(format!("run count R={runs} outside 1..={m}")));
    }
    Ok(())
}

fn word_from_run_lengths(q: u8, runs: &[usize]) -> Result<Word> {
    RunLengthProfile {
        runs: runs.to_vec(),
        symbols: (0..runs.len()).map(|i| (i % 2) as u8).collect(),
    }
    .to_word(q)
}

/// Run lengths of a skewed word: one run of `m - R + 1`, then `R - 1` ones.
pub fn skewed_runs(m: usize, runs: usize) -> Result<Vec<usize>> {
    check_runs(m, runs)?;
    let mut v = vec![1; runs];
    v[0] = m - runs + 1;
    Ok(v)
}

/// Run lengths of a balanced word: `m mod R` runs of `ceil(m/R)` first, then
/// runs of `floor(m/R)`.
pub fn balanced_runs(m: usize, runs: usize) -> Result<Vec<usize>> {
    check_runs(m, runs)?;
    let (base, extra) = (m / runs, m % runs);
    Ok((0..runs)
        .map(|i| if i < extra { base + 1 } else { base })
        .collect())
}

/// Skewed word with the long run first, symbols alternating `0, 1, 0, ..`.
pub fn make_skewed(q: u8, m: usize, runs: usize) -> Result<Word> {
    word_from_run_lengths(q, &skewed_runs(m, runs)?)
}

pub fn make_balanced(q: u8, m: usize, runs: usize) -> Result<Word> {
    word_from_run_lengths(q, &balanced_runs(m, runs)?)
}

/// `q^m` with overflow checking.
pub fn word_count(q: u8, m: usize) -> Result<u128> {
    checked_pow(u64::from(q), u32::try_from(m).map_err(|_| Error::Overflow)?)
}

/// `|Σ_{q,R}^m| = C(m-1, R-1) q (q-1)^{R-1}`.
pub fn count_words_with_runs(q: u8, m: usize, runs: usize) -> Result<u128> {
    check_alphabet(usize::from(q))?;
    check_runs(m, runs)?;
    let ways = binomial(m as u64 - 1, runs as u64 - 1)?;
    let tail = checked_pow(u64::from(q) - 1, (runs - 1) as u32)?;
    ways.checked_mul(u128::from(q))
        .and_then(|v| v.checked_mul(tail))
        .ok_or(Error::Overflow)
}

/// The word at position `index` of the lexicographic order on `Σ_q^m`.
pub fn word_from_index(q: u8, m: usize, mut index: u128) -> Word {
    let mut symbols = vec![0u8; m];
    for slot in symbols.iter_mut().rev() {
        *slot = (index % u128::from(q)) as u8;
        index /= u128::from(q);
    }
    Word::from_parts_unchecked(symbols, q)
}

/// Lexicographic stream over `Σ_q^m`, optionally restricted to words with
/// exactly `R` runs. Restarting means calling the constructor again.
#[derive(Debug, Clone)]
pub struct WordIter {
    q: u8,
    m: usize,
    runs: Option<usize>,
    prefix: Vec<u8>,
    prefix_runs: Vec<usize>,
    state: IterState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum IterState {
    Fresh,
    Running,
    Done,
}

impl WordIter {
    fn new(q: u8, m: usize, runs: Option<usize>) -> Self {
        Self {
            q,
            m,
            runs,
            prefix: Vec::with_capacity(m),
            prefix_runs: Vec::with_capacity(m),
            state: IterState::Fresh,
        }
    }

    fn runs_after(&self, symbol: u8) -> usize {
        match (self.prefix.last(), self.prefix_runs.last()) {
            (Some(&last), Some(&r)) => r + usize::from(last != symbol),
            _ => 1,
        }
    }

    fn feasible(&self, symbol: u8) -> bool {
        let Some(target) = self.runs else {
            return true;
        };
        let r = self.runs_after(symbol);
        let remaining = self.m - self.prefix.len() - 1;
        r <= target && r + remaining >= target
    }

    fn push(&mut self, symbol: u8) {
        let r = self.runs_after(symbol);
        self.prefix.push(symbol);
        self.prefix_runs.push(r);
    }

    /// Extends the prefix to full length with the smallest feasible symbols.
    fn descend(&mut self) -> bool {
        while self.prefix.len() < self.m {
            match (0..self.q).find(|&s| self.feasible(s)) {
                Some(s) => self.push(s),
                None => return false,
            }
        }
        true
    }

    /// Moves to the next feasible prefix in lexicographic order.
    fn advance(&mut self) -> bool {
        while let Some(last) = self.prefix.pop() {
            self.prefix_runs.pop();
            if let Some(s) = (last + 1..self.q).find(|&s| self.feasible(s)) {
                self.push(s);
                if self.descend() {
                    return true;
                }
            }
        }
        false
    }
}

impl Iterator for WordIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let ok = match self.state {
            IterState::Done => return None,
            IterState::Fresh => {
                self.state = IterState::Running;
                let valid = self
                    .runs
                    .is_none_or(|r| (self.m == 0 && r == 0) || (r >= 1 && r <= self.m));
                valid && self.descend()
            }
            IterState::Running => self.m > 0 && self.advance(),
        };
        if ok {
            Some(Word::from_parts_unchecked(self.prefix.clone(), self.q))
        } else {
            self.state = IterState::Done;
            None
        }
    }
}

pub fn enumerate_words(q: u8, m: usize) -> Result<WordIter> {
    check_alphabet(usize::from(q))?;
    Ok(WordIter::new(q, m, None))
}

pub fn enumerate_words_with_runs(q: u8, m: usize, runs: usize) -> Result<WordIter> {
    check_alphabet(usize::from(q))?;
    check_runs(m, runs)?;
    Ok(WordIter::new(q, m, Some(runs)))
}
