//! C interface to the analyzers, the separating families and the CNF encoder.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns
//! a [`BsStatus`]; on failure [`bs_last_error`] describes what went wrong on
//! the calling thread. Outputs are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use blocksens::cnf::{build_instance, build_sensitivity_instance, emit_dimacs, CnfInstance, Partition};
use blocksens::families::{virza_table, RubinsteinFamily};
use blocksens::{block_sensitivity, block_sensitivity_at, sensitivity, Error, Input, TruthTable};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BsStatus {
    Ok = 0,
    InvalidArgument = 1,
    Capacity = 2,
    Parse = 3,
    NullPointer = 4,
    Internal = 5,
}

/// Truth table of a Boolean function.
pub struct BsTruthTable(TruthTable);

/// CNF instance produced by the encoder.
pub struct BsCnfInstance(CnfInstance);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> BsStatus {
    match err {
        Error::InvalidArgument(_) => BsStatus::InvalidArgument,
        Error::Capacity { .. } => BsStatus::Capacity,
        Error::Parse(_) => BsStatus::Parse,
        _ => BsStatus::Internal,
    }
}

struct Failure(BsStatus, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure(status_of(&err), err.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(BsStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> BsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => BsStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside blocksens");
            BsStatus::Internal
        }
    }
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    // SAFETY: the caller passes either null or a live handle
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null and, by contract, valid for writes
    unsafe { out.write(value) };
    Ok(())
}

fn to_u32(v: usize) -> u32 {
    u32::try_from(v).expect("measures are at most 63")
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parse the textual form `"n=<n>\n<bits>"`, bits in canonical index order.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bs_table_from_text(text: *const c_char, out: *mut *mut BsTruthTable) -> BsStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        // SAFETY: NUL-terminated by contract
        let text = unsafe { CStr::from_ptr(text) }
            .to_str()
            .map_err(|_| Failure(BsStatus::Parse, "text is not UTF-8".into()))?;
        let table = TruthTable::parse_text(text)?;
        unsafe { write(out, Box::into_raw(Box::new(BsTruthTable(table))), "out") }
    })
}

/// Build a table from `2^n` bytes, each 0 or 1, in canonical index order.
///
/// # Safety
/// `bits` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bs_table_from_bits(
    n: u32,
    bits: *const u8,
    len: usize,
    out: *mut *mut BsTruthTable,
) -> BsStatus {
    guard(|| {
        if bits.is_null() {
            return Err(null("bits"));
        }
        // SAFETY: `len` readable bytes by contract
        let bytes = unsafe { std::slice::from_raw_parts(bits, len) };
        if let Some(b) = bytes.iter().find(|&&b| b > 1) {
            return Err(Failure(BsStatus::InvalidArgument, format!("bit value {b} is not 0 or 1")));
        }
        let values: Vec<bool> = bytes.iter().map(|&b| b == 1).collect();
        let table = TruthTable::from_bits(n as usize, &values)?;
        unsafe { write(out, Box::into_raw(Box::new(BsTruthTable(table))), "out") }
    })
}

/// # Safety
/// `table` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bs_table_free(table: *mut BsTruthTable) {
    if !table.is_null() {
        // SAFETY: created by Box::into_raw in this crate
        drop(unsafe { Box::from_raw(table) });
    }
}

/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn bs_table_arity(table: *const BsTruthTable, out: *mut u32) -> BsStatus {
    guard(|| {
        let t = unsafe { as_ref(table, "table") }?;
        unsafe { write(out, to_u32(t.0.n()), "out") }
    })
}

/// `f(x)` for canonical index `x` (bit `i-1` holds `x_i`).
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn bs_table_eval(table: *const BsTruthTable, index: u64, out: *mut bool) -> BsStatus {
    guard(|| {
        let t = unsafe { as_ref(table, "table") }?;
        if index >= t.0.len() as u64 {
            return Err(Failure(BsStatus::InvalidArgument, format!("index {index} out of range")));
        }
        unsafe { write(out, t.0.get(index), "out") }
    })
}

/// `s(f)` and the smallest input attaining it.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn bs_sensitivity(
    table: *const BsTruthTable,
    value: *mut u32,
    witness: *mut u64,
) -> BsStatus {
    guard(|| {
        let t = unsafe { as_ref(table, "table") }?;
        if value.is_null() || witness.is_null() {
            return Err(null("output"));
        }
        let report = sensitivity(&t.0)?;
        unsafe {
            write(value, to_u32(report.value), "value")?;
            write(witness, report.witness.index(), "witness")
        }
    })
}

/// `bs(f)` and the smallest input attaining it.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn bs_block_sensitivity(
    table: *const BsTruthTable,
    value: *mut u32,
    witness: *mut u64,
) -> BsStatus {
    guard(|| {
        let t = unsafe { as_ref(table, "table") }?;
        if value.is_null() || witness.is_null() {
            return Err(null("output"));
        }
        let blocks = block_sensitivity(&t.0)?;
        unsafe {
            write(value, to_u32(blocks.value()), "value")?;
            write(witness, blocks.witness.index(), "witness")
        }
    })
}

/// `bs(f, w)` for canonical index `w`.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn bs_block_sensitivity_at(
    table: *const BsTruthTable,
    index: u64,
    value: *mut u32,
) -> BsStatus {
    guard(|| {
        let t = unsafe { as_ref(table, "table") }?;
        let w = Input::new(t.0.n(), index)?;
        let blocks = block_sensitivity_at(&t.0, &w)?;
        unsafe { write(value, to_u32(blocks.value()), "value") }
    })
}

/// Odd-square family member for `k` (`n = (2k+1)^2`); only `k = 1` fits a table.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bs_virza_table(k: u32, out: *mut *mut BsTruthTable) -> BsStatus {
    guard(|| {
        let table = virza_table(k as usize)?;
        unsafe { write(out, Box::into_raw(Box::new(BsTruthTable(table))), "out") }
    })
}

/// Even-square family member for `m` (`n = m^2`).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bs_rubinstein_table(m: u32, out: *mut *mut BsTruthTable) -> BsStatus {
    guard(|| {
        let table = RubinsteinFamily::new(m as usize)?.function().to_table()?;
        unsafe { write(out, Box::into_raw(Box::new(BsTruthTable(table))), "out") }
    })
}

/// Instance for `s(f) <= s` with `f` sensitive at `0^n` on the consecutive
/// blocks given by `parts` (non-increasing sizes summing to `n`). With
/// `parts_len == 0` only the sensitivity bound is encoded.
///
/// # Safety
/// `parts` must point to `parts_len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bs_instance_build(
    n: u32,
    s: u32,
    parts: *const u32,
    parts_len: usize,
    out: *mut *mut BsCnfInstance,
) -> BsStatus {
    guard(|| {
        let (n, s) = (n as usize, s as usize);
        let instance = if parts_len == 0 {
            build_sensitivity_instance(n, s)?
        } else {
            if parts.is_null() {
                return Err(null("parts"));
            }
            // SAFETY: `parts_len` readable values by contract
            let sizes = unsafe { std::slice::from_raw_parts(parts, parts_len) };
            let partition = Partition::new(sizes.iter().map(|&p| p as usize).collect())?;
            build_instance(n, s, partition.len(), &partition)?
        };
        unsafe { write(out, Box::into_raw(Box::new(BsCnfInstance(instance))), "out") }
    })
}

/// # Safety
/// `instance` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bs_instance_free(instance: *mut BsCnfInstance) {
    if !instance.is_null() {
        // SAFETY: created by Box::into_raw in this crate
        drop(unsafe { Box::from_raw(instance) });
    }
}

/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn bs_instance_var_count(instance: *const BsCnfInstance, out: *mut usize) -> BsStatus {
    guard(|| {
        let i = unsafe { as_ref(instance, "instance") }?;
        unsafe { write(out, i.0.var_count(), "out") }
    })
}

/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn bs_instance_clause_count(instance: *const BsCnfInstance, out: *mut usize) -> BsStatus {
    guard(|| {
        let i = unsafe { as_ref(instance, "instance") }?;
        unsafe { write(out, i.0.clause_count(), "out") }
    })
}

/// DIMACS text of the instance; release it with [`bs_string_free`].
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn bs_instance_dimacs(instance: *const BsCnfInstance, out: *mut *mut c_char) -> BsStatus {
    guard(|| {
        let i = unsafe { as_ref(instance, "instance") }?;
        let text = CString::new(emit_dimacs(&i.0)).expect("DIMACS has no NUL bytes");
        unsafe { write(out, text.into_raw(), "out") }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bs_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: created by CString::into_raw in this crate
        drop(unsafe { CString::from_raw(s) });
    }
}
