//! C ABI over `conerank`.
//!
//! Objects are opaque handles created by `*_new`/`*_from_*` functions and
//! released with the matching `*_free`. Every fallible call returns a
//! [`ConerankStatus`]; on failure [`conerank_last_error`] describes the
//! problem for the calling thread. Coordinates passed as `double` are taken
//! at their exact binary value, strings are parsed as exact decimals or
//! `num/den` fractions.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use conerank::{AlternativeSet, Error, ErrorKind, PolyhedralCone, Vector, WeightBounds};

/// Result codes. Values 2, 3 and 4 match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConerankStatus {
    Ok = 0,
    /// Unexpected failure, including a caught panic.
    Internal = 1,
    /// Malformed input: dimensions, ids, numbers, zero weights.
    InvalidInput = 2,
    /// The cone or weight bounds are empty or improper.
    InfeasibleCone = 3,
    /// The cone lacks a property the operation needs, e.g. pointedness.
    Precondition = 4,
    /// A required pointer argument was null.
    NullPointer = 5,
    /// An output buffer is too small.
    BufferTooSmall = 6,
}

/// Opaque set of alternatives.
pub struct ConerankAlternatives(AlternativeSet);

/// Opaque polyhedral ordering cone.
pub struct ConerankCone(PolyhedralCone);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(ConerankStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e.kind() {
            ErrorKind::InfeasibleCone => ConerankStatus::InfeasibleCone,
            ErrorKind::Precondition => ConerankStatus::Precondition,
            ErrorKind::Internal => ConerankStatus::Internal,
            ErrorKind::Validation | ErrorKind::NotFound | ErrorKind::Conflict => ConerankStatus::InvalidInput,
        };
        Fail(status, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(ConerankStatus::NullPointer, format!("`{what}` is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> ConerankStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ConerankStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            ConerankStatus::Internal
        }
    }
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn reference<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn string<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(ConerankStatus::InvalidInput, format!("`{what}` is not valid UTF-8")))
}

unsafe fn strings<'a>(p: *const *const c_char, len: usize, what: &str) -> Result<Vec<&'a str>, Fail> {
    slice(p, len, what)?.iter().map(|s| string(*s, what)).collect()
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn rows_i64(flat: &[i64], rows: usize, dim: usize) -> Result<Vec<Vector>, Fail> {
    if rows == 0 {
        return Ok(Vec::new());
    }
    Ok(flat.chunks(dim).take(rows).map(Vector::from_i64).collect::<Result<_, _>>()?)
}

fn area(rows: usize, dim: usize) -> Result<usize, Fail> {
    rows.checked_mul(dim).ok_or_else(|| Fail(ConerankStatus::InvalidInput, "array size overflows".into()))
}

fn check_dim(dim: usize) -> Result<(), Fail> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim).into());
    }
    Ok(())
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn conerank_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn conerank_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds `n` alternatives from a row-major `n * dim` array. Ids are `x1..xn`.
///
/// # Safety
/// `coords` must point to `n * dim` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn conerank_alternatives_new(
    coords: *const f64,
    n: usize,
    dim: usize,
    out: *mut *mut ConerankAlternatives,
) -> ConerankStatus {
    guard(|| {
        check_dim(dim)?;
        let flat = slice(coords, area(n, dim)?, "coords")?;
        let points = flat.chunks(dim).map(Vector::from_f64).collect::<Result<Vec<_>, _>>()?;
        put(out, ConerankAlternatives(AlternativeSet::from_vectors(points)?))
    })
}

/// Parses CSV text (`id,c1,...,cd[,label]`) with exact decimal coordinates.
/// Labels are ignored.
///
/// # Safety
/// `csv` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn conerank_alternatives_from_csv(
    csv: *const c_char,
    out: *mut *mut ConerankAlternatives,
) -> ConerankStatus {
    guard(|| {
        let text = string(csv, "csv")?;
        let parsed = conerank::read_csv(text.as_bytes())?;
        put(out, ConerankAlternatives(parsed.alternatives))
    })
}

/// # Safety
/// `alts` must be null or a handle that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn conerank_alternatives_free(alts: *mut ConerankAlternatives) {
    if !alts.is_null() {
        drop(Box::from_raw(alts));
    }
}

/// Number of alternatives, 0 for a null handle.
///
/// # Safety
/// `alts` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn conerank_alternatives_len(alts: *const ConerankAlternatives) -> usize {
    alts.as_ref().map_or(0, |a| a.0.len())
}

/// Number of criteria, 0 for a null handle.
///
/// # Safety
/// `alts` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn conerank_alternatives_dim(alts: *const ConerankAlternatives) -> usize {
    alts.as_ref().map_or(0, |a| a.0.dim())
}

/// The nonnegative orthant of `R^dim`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn conerank_cone_orthant(dim: usize, out: *mut *mut ConerankCone) -> ConerankStatus {
    guard(|| {
        check_dim(dim)?;
        put(out, ConerankCone(PolyhedralCone::nonnegative_orthant(dim)))
    })
}

/// Cone generated by `k` integer rays, row-major `k * dim`.
///
/// # Safety
/// `rays` must point to `k * dim` integers and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn conerank_cone_from_rays(
    rays: *const i64,
    k: usize,
    dim: usize,
    out: *mut *mut ConerankCone,
) -> ConerankStatus {
    guard(|| {
        check_dim(dim)?;
        let rays = rows_i64(slice(rays, area(k, dim)?, "rays")?, k, dim)?;
        let cone = PolyhedralCone::from_rays(dim, &rays)?;
        cone.validate_proper()?;
        put(out, ConerankCone(cone))
    })
}

/// Cone whose dual is generated by `k` integer weight directions.
///
/// # Safety
/// `dual_rays` must point to `k * dim` integers and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn conerank_cone_from_dual_rays(
    dual_rays: *const i64,
    k: usize,
    dim: usize,
    out: *mut *mut ConerankCone,
) -> ConerankStatus {
    guard(|| {
        check_dim(dim)?;
        let rays = rows_i64(slice(dual_rays, area(k, dim)?, "dual_rays")?, k, dim)?;
        let cone = PolyhedralCone::from_dual_rays(dim, &rays)?;
        cone.validate_proper()?;
        put(out, ConerankCone(cone))
    })
}

/// Cone whose dual is spanned by the normalized weights with
/// `mins[i] <= w_i <= maxs[i]`. Bounds are decimal or fraction strings.
///
/// # Safety
/// `mins` and `maxs` must each point to `dim` NUL-terminated strings and
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn conerank_cone_from_weight_bounds(
    mins: *const *const c_char,
    maxs: *const *const c_char,
    dim: usize,
    out: *mut *mut ConerankCone,
) -> ConerankStatus {
    guard(|| {
        check_dim(dim)?;
        let lo = strings(mins, dim, "mins")?;
        let hi = strings(maxs, dim, "maxs")?;
        let cone = WeightBounds::parse(&lo, &hi)?.to_cone()?;
        put(out, ConerankCone(cone))
    })
}

/// # Safety
/// `cone` must be null or a handle that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn conerank_cone_free(cone: *mut ConerankCone) {
    if !cone.is_null() {
        drop(Box::from_raw(cone));
    }
}

/// Whether the cone contains no line.
///
/// # Safety
/// `cone` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn conerank_cone_is_pointed(cone: *const ConerankCone) -> bool {
    cone.as_ref().is_some_and(|c| c.0.is_pointed())
}

/// Number of alternatives `x` with `w.x <= w.z`.
///
/// # Safety
/// `w` and `z` must each point to `dim(alts)` doubles, `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn conerank_rank_w(
    alts: *const ConerankAlternatives,
    w: *const f64,
    z: *const f64,
    out: *mut usize,
) -> ConerankStatus {
    guard(|| {
        let x = &reference(alts, "alts")?.0;
        let w = Vector::from_f64(slice(w, x.dim(), "w")?)?;
        let z = Vector::from_f64(slice(z, x.dim(), "z")?)?;
        let r = conerank::rank_w(x, &w, &z)?;
        *out.as_mut().ok_or_else(|| null("out"))? = r;
        Ok(())
    })
}

/// Cone rank of the point `z`: the minimum of the weighted rank over nonzero
/// weights of the dual cone.
///
/// # Safety
/// `z` must point to `dim(alts)` doubles, `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn conerank_rank_cone(
    alts: *const ConerankAlternatives,
    cone: *const ConerankCone,
    z: *const f64,
    out: *mut usize,
) -> ConerankStatus {
    guard(|| {
        let x = &reference(alts, "alts")?.0;
        let c = &reference(cone, "cone")?.0;
        let z = Vector::from_f64(slice(z, x.dim(), "z")?)?;
        let r = conerank::rank_cone(x, c, &z)?;
        *out.as_mut().ok_or_else(|| null("out"))? = r.value;
        Ok(())
    })
}

/// Cone rank of every alternative, in input order. `out` must hold at least
/// `len(alts)` entries, otherwise `BufferTooSmall` is returned.
///
/// # Safety
/// `out` must point to `out_len` writable entries.
#[no_mangle]
pub unsafe extern "C" fn conerank_rank_all(
    alts: *const ConerankAlternatives,
    cone: *const ConerankCone,
    out: *mut usize,
    out_len: usize,
) -> ConerankStatus {
    guard(|| {
        let x = &reference(alts, "alts")?.0;
        let c = &reference(cone, "cone")?.0;
        if out_len < x.len() {
            return Err(Fail(
                ConerankStatus::BufferTooSmall,
                format!("output holds {out_len} entries, need {}", x.len()),
            ));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let values = conerank::rank_all(x, c)?.values();
        std::slice::from_raw_parts_mut(out, values.len()).copy_from_slice(&values);
        Ok(())
    })
}
