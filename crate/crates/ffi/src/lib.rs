//! C ABI over `paulicompat`.
//!
//! Objects are opaque heap handles released with their `*_free` function.
//! Every fallible call returns a [`PcStatus`]; on failure a message is kept
//! per thread and can be read with [`pc_last_error`]. Strings returned
//! through out-pointers are owned by the caller and released with
//! [`pc_string_free`]. Sites and observable indices are 1-based.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use paulicompat::compatibility::{self, Execution};
use paulicompat::dense::{eigen_check, StateVector};
use paulicompat::paradox::{verify_ks, Partition};
use paulicompat::states::{build_named, StateName};
use paulicompat::{BracketKind, Error, PauliString};

/// Result codes shared by every function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    DimensionMismatch = 4,
    Capacity = 5,
    InvalidArgument = 6,
    Incompatible = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

/// Opaque Pauli string with its phase.
pub struct PcPauliString(PauliString);

/// Opaque state vector.
pub struct PcStateVector(StateVector);

/// Bracket selector for [`pc_pauli_unique_term`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcBracket {
    Commutator = 0,
    Anticommutator = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PcStatus {
    match e {
        Error::Parse { .. } => PcStatus::Parse,
        Error::DimensionMismatch { .. } => PcStatus::DimensionMismatch,
        Error::Incompatible { .. } | Error::InconsistentSigns(_) | Error::NotComparable { .. } => {
            PcStatus::Incompatible
        }
        e if e.is_capacity() => PcStatus::Capacity,
        _ => PcStatus::InvalidArgument,
    }
}

struct Fail(PcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            PcStatus::Ok
        }
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            PcStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail(PcStatus::NullPointer, "null pointer argument".into())
}

unsafe fn as_ref<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(null)
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(null)
}

unsafe fn as_str<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(PcStatus::InvalidUtf8, "string is not UTF-8".into()))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Fail> {
    serde_json::to_string(value).map_err(|e| Fail(PcStatus::Panic, e.to_string()))
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call on the same thread.
#[no_mangle]
pub extern "C" fn pc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn pc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses text such as `"-iXYZ"` or `"0123"`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_pauli_parse(text: *const c_char, result: *mut *mut PcPauliString) -> PcStatus {
    guard(|| {
        let slot = out(result)?;
        let p: PauliString = as_str(text)?.parse()?;
        *slot = Box::into_raw(Box::new(PcPauliString(p)));
        Ok(())
    })
}

/// Builds a phase-free string from indices 0..=3.
///
/// # Safety
/// `indices` must point to `len` bytes; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_pauli_from_indices(
    indices: *const u8,
    len: usize,
    result: *mut *mut PcPauliString,
) -> PcStatus {
    guard(|| {
        let slot = out(result)?;
        if indices.is_null() && len > 0 {
            return Err(null());
        }
        let slice = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(indices, len)
        };
        *slot = Box::into_raw(Box::new(PcPauliString(PauliString::from_indices(slice)?)));
        Ok(())
    })
}

/// # Safety
/// `p` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pc_pauli_free(p: *mut PcPauliString) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of sites.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pc_pauli_len(p: *const PcPauliString, len: *mut usize) -> PcStatus {
    guard(|| {
        *out(len)? = as_ref(p)?.0.len();
        Ok(())
    })
}

/// Phase as an exponent of i, in 0..=3.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pc_pauli_phase(p: *const PcPauliString, exponent: *mut u8) -> PcStatus {
    guard(|| {
        *out(exponent)? = as_ref(p)?.0.phase().exponent();
        Ok(())
    })
}

/// Canonical text, e.g. `"+iXZ"`. Free with [`pc_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pc_pauli_to_string(p: *const PcPauliString, text: *mut *mut c_char) -> PcStatus {
    guard(|| {
        let slot = out(text)?;
        *slot = into_c_string(as_ref(p)?.0.to_string());
        Ok(())
    })
}

/// Operator product `a * b`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pc_pauli_multiply(
    a: *const PcPauliString,
    b: *const PcPauliString,
    result: *mut *mut PcPauliString,
) -> PcStatus {
    guard(|| {
        let slot = out(result)?;
        let product = as_ref(a)?.0.multiply(&as_ref(b)?.0)?;
        *slot = Box::into_raw(Box::new(PcPauliString(product)));
        Ok(())
    })
}

/// Whether `a` and `b` commute as operators.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pc_pauli_commutes(
    a: *const PcPauliString,
    b: *const PcPauliString,
    commutes: *mut bool,
) -> PcStatus {
    guard(|| {
        *out(commutes)? = as_ref(a)?.0.global_commutes(&as_ref(b)?.0)?;
        Ok(())
    })
}

/// Writes the 1-based sites where `a` and `b` anticommute locally into
/// `sites` (capacity `cap`) and their number into `count`. If `cap` is too
/// small, `count` still receives the full number and
/// `PC_STATUS_BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `sites` must have room for `cap` values; other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pc_pauli_noncommuting_sites(
    a: *const PcPauliString,
    b: *const PcPauliString,
    sites: *mut usize,
    cap: usize,
    count: *mut usize,
) -> PcStatus {
    guard(|| {
        let count = out(count)?;
        let found = as_ref(a)?.0.local_noncommuting_sites(&as_ref(b)?.0)?.to_vec();
        *count = found.len();
        if found.len() > cap {
            return Err(Fail(
                PcStatus::BufferTooSmall,
                format!("{} sites, capacity {cap}", found.len()),
            ));
        }
        if !found.is_empty() {
            if sites.is_null() {
                return Err(null());
            }
            let buf = std::slice::from_raw_parts_mut(sites, found.len());
            for (dst, s) in buf.iter_mut().zip(&found) {
                *dst = s + 1;
            }
        }
        Ok(())
    })
}

/// Compatibility report as JSON. Free with [`pc_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pc_classify_json(
    a: *const PcPauliString,
    b: *const PcPauliString,
    json: *mut *mut c_char,
) -> PcStatus {
    guard(|| {
        let slot = out(json)?;
        let report = compatibility::classify_pair(&as_ref(a)?.0, &as_ref(b)?.0)?;
        *slot = into_c_string(to_json(&report)?);
        Ok(())
    })
}

/// The single nonzero term of the bracket expansions of `a` and `b`: which
/// bracket it belongs to and its value `2^log2_scale * value`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pc_pauli_unique_term(
    a: *const PcPauliString,
    b: *const PcPauliString,
    bracket: *mut PcBracket,
    log2_scale: *mut i32,
    value: *mut *mut PcPauliString,
) -> PcStatus {
    guard(|| {
        let (bracket, log2_scale, value) = (out(bracket)?, out(log2_scale)?, out(value)?);
        let (kind, term) = as_ref(a)?.0.unique_nonzero_term(&as_ref(b)?.0)?;
        let scaled = term
            .value
            .ok_or_else(|| Fail(PcStatus::Panic, "unique term is zero".into()))?;
        *bracket = match kind {
            BracketKind::Commutator => PcBracket::Commutator,
            BracketKind::Anticommutator => PcBracket::Anticommutator,
        };
        *log2_scale = scaled.log2_scale;
        *value = Box::into_raw(Box::new(PcPauliString(scaled.pauli)));
        Ok(())
    })
}

/// Exhaustive check that fully nontrivial n-qubit pairs commute exactly when
/// their number of local anticommutations is even. `verified` is false when
/// a counterexample exists.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pc_verify_theorem1(
    n: usize,
    parallel: bool,
    verified: *mut bool,
    pairs_checked: *mut u64,
) -> PcStatus {
    guard(|| {
        let (verified, pairs_checked) = (out(verified)?, out(pairs_checked)?);
        let exec = if parallel {
            Execution::Parallel
        } else {
            Execution::Sequential
        };
        let outcome = compatibility::verify_theorem1(n, exec)?;
        *verified = outcome.verified();
        *pairs_checked = outcome.pairs_checked as u64;
        Ok(())
    })
}

/// Sign-paradox certificate as JSON for `count` observables given as text.
/// Groups hold 1-based indices; passing null for both compares the first
/// observable against the product of the rest.
///
/// # Safety
/// `observables` must hold `count` strings; each group must hold its length
/// in indices or be null.
#[no_mangle]
pub unsafe extern "C" fn pc_paradox_json(
    observables: *const *const c_char,
    count: usize,
    group_a: *const usize,
    len_a: usize,
    group_b: *const usize,
    len_b: usize,
    json: *mut *mut c_char,
) -> PcStatus {
    guard(|| {
        let slot = out(json)?;
        if observables.is_null() {
            return Err(null());
        }
        let obs = std::slice::from_raw_parts(observables, count)
            .iter()
            .map(|&t| as_str(t).and_then(|s| s.parse::<PauliString>().map_err(Fail::from)))
            .collect::<Result<Vec<_>, _>>()?;
        let group = |p: *const usize, len: usize| -> Result<Vec<usize>, Fail> {
            std::slice::from_raw_parts(p, len)
                .iter()
                .map(|&i| {
                    i.checked_sub(1)
                        .ok_or_else(|| Fail(PcStatus::InvalidArgument, "indices are 1-based".into()))
                })
                .collect()
        };
        let partition = match (group_a.is_null(), group_b.is_null()) {
            (true, true) => Partition::first_vs_rest(obs.len()),
            (false, false) => Partition {
                group_a: group(group_a, len_a)?,
                group_b: group(group_b, len_b)?,
            },
            _ => return Err(null()),
        };
        *slot = into_c_string(to_json(&verify_ks(&obs, &partition)?)?);
        Ok(())
    })
}

/// Builds a named state (`"psi1"`..`"psi4"`, `"phi1"`..`"phi3"`) on `n` qubits.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pc_state_named(name: *const c_char, n: usize, result: *mut *mut PcStateVector) -> PcStatus {
    guard(|| {
        let slot = out(result)?;
        let name: StateName = as_str(name)?.parse()?;
        *slot = Box::into_raw(Box::new(PcStateVector(build_named(name, n)?.vector)));
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pc_state_free(s: *mut PcStateVector) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of qubits.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pc_state_qubits(s: *const PcStateVector, n: *mut usize) -> PcStatus {
    guard(|| {
        *out(n)? = as_ref(s)?.0.qubits();
        Ok(())
    })
}

/// Copies the 2^n amplitudes into `re` and `im`, each of capacity `cap`.
///
/// # Safety
/// `re` and `im` must have room for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn pc_state_amplitudes(
    s: *const PcStateVector,
    re: *mut f64,
    im: *mut f64,
    cap: usize,
) -> PcStatus {
    guard(|| {
        let amps = as_ref(s)?.0.amplitudes();
        if amps.len() > cap {
            return Err(Fail(
                PcStatus::BufferTooSmall,
                format!("{} amplitudes, capacity {cap}", amps.len()),
            ));
        }
        if re.is_null() || im.is_null() {
            return Err(null());
        }
        let (re, im) = (
            std::slice::from_raw_parts_mut(re, amps.len()),
            std::slice::from_raw_parts_mut(im, amps.len()),
        );
        for (k, a) in amps.iter().enumerate() {
            re[k] = a.re;
            im[k] = a.im;
        }
        Ok(())
    })
}

/// Tests whether `s` is an eigenvector of `p`; if so writes the eigenvalue.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pc_eigenvalue(
    p: *const PcPauliString,
    s: *const PcStateVector,
    is_eigenvector: *mut bool,
    re: *mut f64,
    im: *mut f64,
) -> PcStatus {
    guard(|| {
        let (flag, re, im) = (out(is_eigenvector)?, out(re)?, out(im)?);
        match eigen_check(&as_ref(p)?.0, &as_ref(s)?.0)? {
            Some(v) => {
                *flag = true;
                *re = v.re;
                *im = v.im;
            }
            None => {
                *flag = false;
                *re = 0.0;
                *im = 0.0;
            }
        }
        Ok(())
    })
}
