//! C ABI over `indel-entropy`.
//!
//! Every fallible function returns an [`IeStatus`]; on failure a message is
//! available from [`ie_last_error_message`] on the same thread. Handles are
//! opaque and must be released with their matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::ptr;

use indel_entropy::capacity::{blahut_arimoto, BlahutArimotoOptions, TransitionMatrix};
use indel_entropy::embedding::{ball, embedding_number, log_sum_of_counts, BallKind};
use indel_entropy::entropy::{entropy, ChannelKind, ChannelSpec, Direction, Method};
use indel_entropy::extremal::{global_extremum, Which};
use indel_entropy::{Error, Word};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Overflow = 3,
    NotCharacterized = 4,
    BudgetExceeded = 5,
    InvalidUtf8 = 6,
    OutOfRange = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IeChannelKind {
    Deletion = 0,
    Insertion = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IeMethod {
    ClosedForm = 0,
    Enumeration = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IeWhich {
    Min = 0,
    Max = 1,
}

/// Opaque word handle.
pub struct IeWord {
    inner: Word,
}

/// Opaque weighted ball: members in lexicographic order with their counts.
pub struct IeBall {
    entries: Vec<(Word, u128)>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: IeStatus, message: &str) -> IeStatus {
    set_error(message);
    status
}

fn from_error(e: Error) -> IeStatus {
    let status = match e {
        Error::Overflow => IeStatus::Overflow,
        Error::NotCharacterized(_) => IeStatus::NotCharacterized,
        Error::BudgetExceeded { .. } => IeStatus::BudgetExceeded,
        Error::IndexOutOfRange { .. } => IeStatus::OutOfRange,
        _ => IeStatus::InvalidArgument,
    };
    fail(status, &e.to_string())
}

/// Runs `body`, converting library errors and panics to status codes.
fn guard<F>(body: F) -> IeStatus
where
    F: FnOnce() -> Result<(), IeStatus> + UnwindSafe,
{
    match catch_unwind(body) {
        Ok(Ok(())) => IeStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(IeStatus::Panic, "internal panic"),
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, IeStatus> {
    p.as_ref()
        .ok_or_else(|| fail(IeStatus::NullPointer, &format!("{what} is NULL")))
}

fn check_out<T>(p: *mut T, what: &str) -> Result<(), IeStatus> {
    if p.is_null() {
        Err(fail(IeStatus::NullPointer, &format!("{what} is NULL")))
    } else {
        Ok(())
    }
}

fn kind(k: IeChannelKind) -> ChannelKind {
    match k {
        IeChannelKind::Deletion => ChannelKind::Deletion,
        IeChannelKind::Insertion => ChannelKind::Insertion,
    }
}

/// Message for the last failure on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ie_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn ie_status_name(status: IeStatus) -> *const c_char {
    let s: &'static CStr = match status {
        IeStatus::Ok => c"ok",
        IeStatus::NullPointer => c"null pointer",
        IeStatus::InvalidArgument => c"invalid argument",
        IeStatus::Overflow => c"overflow",
        IeStatus::NotCharacterized => c"not characterized",
        IeStatus::BudgetExceeded => c"budget exceeded",
        IeStatus::InvalidUtf8 => c"invalid utf-8",
        IeStatus::OutOfRange => c"out of range",
        IeStatus::Panic => c"panic",
    };
    s.as_ptr()
}

/// Parses a digit string (or comma-separated symbols) over an alphabet of
/// size `q`. On success `*out` owns a new handle.
///
/// # Safety
/// `text` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ie_word_parse(
    text: *const c_char,
    q: u8,
    out: *mut *mut IeWord,
) -> IeStatus {
    guard(|| {
        check_out(out, "out")?;
        if text.is_null() {
            return Err(fail(IeStatus::NullPointer, "text is NULL"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| fail(IeStatus::InvalidUtf8, "text is not valid UTF-8"))?;
        let inner = Word::parse(s, q).map_err(from_error)?;
        *out = Box::into_raw(Box::new(IeWord { inner }));
        Ok(())
    })
}

/// # Safety
/// `word` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ie_word_free(word: *mut IeWord) {
    if !word.is_null() {
        drop(Box::from_raw(word));
    }
}

/// Length of the word; 0 for NULL.
///
/// # Safety
/// `word` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ie_word_len(word: *const IeWord) -> usize {
    word.as_ref().map_or(0, |w| w.inner.len())
}

/// Alphabet size of the word; 0 for NULL.
///
/// # Safety
/// `word` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ie_word_alphabet(word: *const IeWord) -> u8 {
    word.as_ref().map_or(0, |w| w.inner.q())
}

/// Textual form of the word, to be released with [`ie_string_free`]; NULL
/// for a NULL handle.
///
/// # Safety
/// `word` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ie_word_to_string(word: *const IeWord) -> *mut c_char {
    match word.as_ref() {
        Some(w) => CString::new(w.inner.to_string()).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ie_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of occurrences of `y` as a subsequence of `x`. Counts beyond
/// `u64` report [`IeStatus::Overflow`].
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ie_embedding_number(
    y: *const IeWord,
    x: *const IeWord,
    out: *mut u64,
) -> IeStatus {
    guard(|| {
        check_out(out, "out")?;
        let y = deref(y, "y")?;
        let x = deref(x, "x")?;
        let n = embedding_number(&y.inner, &x.inner).map_err(from_error)?;
        *out = u64::try_from(n)
            .map_err(|_| fail(IeStatus::Overflow, "embedding number exceeds 64 bits"))?;
        Ok(())
    })
}

/// Weighted radius-`k` ball around `word`: supersequences for
/// `Insertion`, subsequences for `Deletion`.
///
/// # Safety
/// `word` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ie_ball_new(
    word: *const IeWord,
    k: usize,
    ball_kind: IeChannelKind,
    out: *mut *mut IeBall,
) -> IeStatus {
    guard(|| {
        check_out(out, "out")?;
        let w = deref(word, "word")?;
        let kind = match ball_kind {
            IeChannelKind::Deletion => BallKind::Deletion,
            IeChannelKind::Insertion => BallKind::Insertion,
        };
        let b = ball(&w.inner, k, kind).map_err(from_error)?;
        *out = Box::into_raw(Box::new(IeBall {
            entries: b.entries.into_iter().collect(),
        }));
        Ok(())
    })
}

/// # Safety
/// `ball` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ie_ball_len(ball: *const IeBall) -> usize {
    ball.as_ref().map_or(0, |b| b.entries.len())
}

/// Member `index` of the ball. `word_out` receives a new word handle (may be
/// NULL to skip) and `count_out` its embedding count.
///
/// # Safety
/// `ball` must be live; non-NULL out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn ie_ball_entry(
    ball: *const IeBall,
    index: usize,
    word_out: *mut *mut IeWord,
    count_out: *mut u64,
) -> IeStatus {
    guard(|| {
        let b = deref(ball, "ball")?;
        let (w, c) = b.entries.get(index).ok_or_else(|| {
            fail(
                IeStatus::OutOfRange,
                &format!(
                    "index {index} out of range for ball of size {}",
                    b.entries.len()
                ),
            )
        })?;
        let c = u64::try_from(*c).map_err(|_| fail(IeStatus::Overflow, "count exceeds 64 bits"))?;
        if !count_out.is_null() {
            *count_out = c;
        }
        if !word_out.is_null() {
            *word_out = Box::into_raw(Box::new(IeWord { inner: w.clone() }));
        }
        Ok(())
    })
}

/// `Σ c log2 c` over the ball's counts; 0 for NULL.
///
/// # Safety
/// `ball` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ie_ball_log_sum(ball: *const IeBall) -> f64 {
    ball.as_ref().map_or(0.0, |b| {
        log_sum_of_counts(b.entries.iter().map(|(_, c)| *c))
    })
}

/// # Safety
/// `ball` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ie_ball_free(ball: *mut IeBall) {
    if !ball.is_null() {
        drop(Box::from_raw(ball));
    }
}

unsafe fn entropy_call(
    word: *const IeWord,
    channel: IeChannelKind,
    k: usize,
    method: IeMethod,
    direction: Direction,
    out_bits: *mut f64,
) -> IeStatus {
    guard(|| {
        check_out(out_bits, "out_bits")?;
        let w = deref(word, "word")?;
        let spec = ChannelSpec::new(kind(channel), k, w.inner.q()).map_err(from_error)?;
        let method = match method {
            IeMethod::ClosedForm => Method::ClosedForm,
            IeMethod::Enumeration => Method::Enumeration,
        };
        *out_bits = entropy(&w.inner, spec, direction, method)
            .map_err(from_error)?
            .entropy_bits;
        Ok(())
    })
}

/// Entropy in bits of the channel input given output `word`; the alphabet
/// comes from the word.
///
/// # Safety
/// `word` must be live; `out_bits` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ie_input_entropy(
    word: *const IeWord,
    channel: IeChannelKind,
    k: usize,
    method: IeMethod,
    out_bits: *mut f64,
) -> IeStatus {
    entropy_call(word, channel, k, method, Direction::Input, out_bits)
}

/// Entropy in bits of the channel output given input `word`.
///
/// # Safety
/// `word` must be live; `out_bits` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ie_output_entropy(
    word: *const IeWord,
    channel: IeChannelKind,
    k: usize,
    method: IeMethod,
    out_bits: *mut f64,
) -> IeStatus {
    entropy_call(word, channel, k, method, Direction::Output, out_bits)
}

/// Known extremum of the input entropy over outputs of length `m`, and the
/// number of words attaining it (either out pointer may be NULL).
///
/// # Safety
/// Non-NULL out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn ie_global_extremum(
    q: u8,
    m: usize,
    channel: IeChannelKind,
    k: usize,
    which: IeWhich,
    out_bits: *mut f64,
    out_witness_count: *mut usize,
) -> IeStatus {
    guard(|| {
        let spec = ChannelSpec::new(kind(channel), k, q).map_err(from_error)?;
        let which = match which {
            IeWhich::Min => Which::Min,
            IeWhich::Max => Which::Max,
        };
        let r = global_extremum(q, m, spec, which).map_err(from_error)?;
        if !out_bits.is_null() {
            *out_bits = r.value_bits;
        }
        if !out_witness_count.is_null() {
            *out_witness_count = r.witnesses.len();
        }
        Ok(())
    })
}

/// Blahut–Arimoto capacity in bits at block length `n`. `converged` may be NULL.
///
/// # Safety
/// `out_bits` must be writable; `converged` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn ie_capacity(
    channel: IeChannelKind,
    k: usize,
    q: u8,
    n: usize,
    tolerance: f64,
    max_iterations: usize,
    out_bits: *mut f64,
    converged: *mut bool,
) -> IeStatus {
    guard(|| {
        check_out(out_bits, "out_bits")?;
        let spec = ChannelSpec::new(kind(channel), k, q).map_err(from_error)?;
        let matrix = TransitionMatrix::new(spec, n).map_err(from_error)?;
        let r = blahut_arimoto(
            &matrix,
            BlahutArimotoOptions {
                tolerance,
                max_iterations,
            },
        )
        .map_err(from_error)?;
        *out_bits = r.capacity_bits;
        if !converged.is_null() {
            *converged = r.converged;
        }
        Ok(())
    })
}
