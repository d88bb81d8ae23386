//! C ABI over the `bpk` crate.
//!
//! Every entry point returns a [`BpkStatus`]; results travel through out
//! pointers. After a non-OK status, [`bpk_last_error`] returns a message for
//! the calling thread. Databases and expansion series are opaque handles
//! released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use bpk::asymptotics::{self, ModeTriple};
use bpk::coeff_db::{self, CoeffRecord, Database, GenerationPolicy, Method};
use bpk::fourier_bessel::{self, ExpansionSeries};
use bpk::quadrature::{self, Factor, ProductIntegralSpec};
use bpk::{bessel, Error, GeneralSolution, Order};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BpkStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    InvalidArgument = 3,
    Degenerate = 4,
    Convergence = 5,
    Precondition = 6,
    NotFound = 7,
    Parse = 8,
    Integrity = 9,
    Io = 10,
    Panic = 11,
}

/// Opaque coefficient database.
pub struct BpkDatabase {
    inner: Database,
}

/// Opaque Fourier-Bessel expansion.
pub struct BpkSeries {
    inner: ExpansionSeries,
}

/// One database row. `method` is 0 for quadrature, 1 for extended-precision
/// quadrature, 2 for the asymptotic formula.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BpkCoeffRecord {
    pub q: u32,
    pub m: u32,
    pub n: u32,
    pub p: u32,
    pub c000: f64,
    pub c110: f64,
    pub d111: f64,
    pub abs_err: f64,
    pub method: u32,
}

impl From<CoeffRecord> for BpkCoeffRecord {
    fn from(r: CoeffRecord) -> Self {
        BpkCoeffRecord {
            q: r.q,
            m: r.m,
            n: r.n,
            p: r.p,
            c000: r.c000,
            c110: r.c110,
            d111: r.d111,
            abs_err: r.abs_err,
            method: match r.method {
                Method::Quadrature => 0,
                Method::QuadratureExtended => 1,
                Method::Asymptotic => 2,
            },
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> BpkStatus {
    match err {
        Error::Domain { .. } | Error::UnsupportedOrder(_) => BpkStatus::Domain,
        Error::InvalidArgument(_) | Error::StepTooSmall { .. } => BpkStatus::InvalidArgument,
        Error::Degenerate { .. } | Error::Resonant { .. } => BpkStatus::Degenerate,
        Error::Convergence { .. } => BpkStatus::Convergence,
        Error::Precondition(_) => BpkStatus::Precondition,
        Error::NotFound { .. } => BpkStatus::NotFound,
        Error::Parse { .. } => BpkStatus::Parse,
        Error::Integrity { .. } => BpkStatus::Integrity,
        Error::Io(_) => BpkStatus::Io,
    }
}

fn null_arg(what: &str) -> BpkStatus {
    set_error(format!("null pointer: {what}"));
    BpkStatus::NullPointer
}

// Runs `f`, turning errors and panics into a status plus a stored message.
fn guard<F: FnOnce() -> Result<(), Error>>(f: F) -> BpkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BpkStatus::Ok,
        Ok(Err(e)) => {
            let s = status_of(&e);
            set_error(e.to_string());
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            BpkStatus::Panic
        }
    }
}

unsafe fn path_arg(p: *const c_char) -> Result<PathBuf, Error> {
    CStr::from_ptr(p)
        .to_str()
        .map(PathBuf::from)
        .map_err(|_| Error::InvalidArgument("path is not UTF-8".into()))
}

/// Message for the most recent failure on this thread, or NULL.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bpk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code; unknown codes map to "unknown status".
#[no_mangle]
pub extern "C" fn bpk_status_name(status: i32) -> *const c_char {
    let s: &'static CStr = match status {
        0 => c"ok",
        1 => c"null pointer",
        2 => c"domain error",
        3 => c"invalid argument",
        4 => c"degenerate scales",
        5 => c"no convergence",
        6 => c"precondition violated",
        7 => c"not found",
        8 => c"parse error",
        9 => c"integrity error",
        10 => c"i/o error",
        11 => c"internal panic",
        _ => c"unknown status",
    };
    s.as_ptr()
}

/// `Z_n(scale * x)` with `Z_n = a J_n + b Y_n`.
///
/// # Safety
/// `out` must be NULL or point to writable storage for one `double`.
#[no_mangle]
pub unsafe extern "C" fn bpk_z_eval(n: i32, a: f64, b: f64, scale: f64, x: f64, out: *mut f64) -> BpkStatus {
    if out.is_null() {
        return null_arg("out");
    }
    guard(|| {
        *out = bessel::z_eval(GeneralSolution::new(a, b), Order(n), scale, x)?;
        Ok(())
    })
}

/// `d/dx Z_n(scale * x)`.
///
/// # Safety
/// `out` must be NULL or point to writable storage for one `double`.
#[no_mangle]
pub unsafe extern "C" fn bpk_z_derivative(n: i32, a: f64, b: f64, scale: f64, x: f64, out: *mut f64) -> BpkStatus {
    if out.is_null() {
        return null_arg("out");
    }
    guard(|| {
        *out = bessel::z_derivative(GeneralSolution::new(a, b), Order(n), scale, x)?;
        Ok(())
    })
}

/// The `p`-th positive zero of `J_q`, `p >= 1`.
///
/// # Safety
/// `out` must be NULL or point to writable storage for one `double`.
#[no_mangle]
pub unsafe extern "C" fn bpk_bessel_zero(q: u32, p: u32, out: *mut f64) -> BpkStatus {
    if out.is_null() {
        return null_arg("out");
    }
    guard(|| {
        *out = bessel::bessel_zero(q, p)?.value;
        Ok(())
    })
}

/// `∫ x^power Π J_{orders[i]}(scales[i] x) dx` on `[lo, hi]` for
/// `count` in 1..=3 first-kind factors.
///
/// # Safety
/// `orders` and `scales` must point to `count` readable elements;
/// `value` and `abs_err` to one writable `double` each (`abs_err` may be NULL).
#[no_mangle]
pub unsafe extern "C" fn bpk_j_product_integral(
    power: i32,
    count: usize,
    orders: *const i32,
    scales: *const f64,
    lo: f64,
    hi: f64,
    value: *mut f64,
    abs_err: *mut f64,
) -> BpkStatus {
    if orders.is_null() || scales.is_null() || value.is_null() {
        return null_arg("orders, scales or value");
    }
    if count == 0 || count > 3 {
        set_error(format!("factor count {count} outside 1..=3"));
        return BpkStatus::InvalidArgument;
    }
    guard(|| {
        let orders = std::slice::from_raw_parts(orders, count);
        let scales = std::slice::from_raw_parts(scales, count);
        let factors = orders.iter().zip(scales).map(|(&n, &s)| Factor::j(n, s)).collect();
        let r = quadrature::integrate_default(&ProductIntegralSpec::power(power, factors, lo, hi))?;
        *value = r.value;
        if !abs_err.is_null() {
            *abs_err = r.abs_err;
        }
        Ok(())
    })
}

/// `∫₀¹ x J_0(j_{1,m}x) J_0(j_{1,n}x) J_0(j_{1,p}x) dx` by quadrature.
///
/// # Safety
/// `out` must be NULL or point to writable storage for one `double`.
#[no_mangle]
pub unsafe extern "C" fn bpk_c000(m: u32, n: u32, p: u32, out: *mut f64) -> BpkStatus {
    if out.is_null() {
        return null_arg("out");
    }
    guard(|| {
        let policy = GenerationPolicy::default();
        let extended = m.max(n).max(p) > policy.extended_above;
        *out = coeff_db::c000_quadrature(1, m, n, p, extended, &policy)?.value;
        Ok(())
    })
}

/// Large-mode approximation of the triple product with orders `i, j, k`
/// at zeros of `J_q`.
///
/// # Safety
/// `out` must be NULL or point to writable storage for one `double`.
#[no_mangle]
pub unsafe extern "C" fn bpk_triple_approx(
    m: u32,
    n: u32,
    p: u32,
    i: u8,
    j: u8,
    k: u8,
    q: u8,
    out: *mut f64,
) -> BpkStatus {
    if out.is_null() {
        return null_arg("out");
    }
    guard(|| {
        *out = asymptotics::triple_product_approx(ModeTriple { m, n, p, i, j, k, q })?;
        Ok(())
    })
}

/// Fresnel integrals `C(t)` and `S(t)` for `t >= 0`.
///
/// # Safety
/// `c` and `s` must be NULL or point to writable storage for one `double`.
#[no_mangle]
pub unsafe extern "C" fn bpk_fresnel(t: f64, c: *mut f64, s: *mut f64) -> BpkStatus {
    if c.is_null() || s.is_null() {
        return null_arg("c or s");
    }
    guard(|| {
        let f = asymptotics::fresnel(t)?;
        *c = f.c;
        *s = f.s;
        Ok(())
    })
}

/// Generates every canonical triple up to `max_mode` at zeros of `J_q`.
/// Triples above `asymptotic_above` use the asymptotic formula.
///
/// # Safety
/// `out` must point to writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn bpk_db_generate(
    max_mode: u32,
    q: u32,
    asymptotic_above: u32,
    out: *mut *mut BpkDatabase,
) -> BpkStatus {
    if out.is_null() {
        return null_arg("out");
    }
    *out = ptr::null_mut();
    guard(|| {
        let policy = GenerationPolicy {
            asymptotic_above,
            ..GenerationPolicy::default()
        };
        let (db, _) = coeff_db::generate(max_mode, q, &policy)?;
        *out = Box::into_raw(Box::new(BpkDatabase { inner: db }));
        Ok(())
    })
}

/// Loads a database from CSV.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must point to writable
/// storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn bpk_db_import_csv(path: *const c_char, out: *mut *mut BpkDatabase) -> BpkStatus {
    if path.is_null() || out.is_null() {
        return null_arg("path or out");
    }
    *out = ptr::null_mut();
    guard(|| {
        let db = Database::import_csv(&path_arg(path)?)?;
        *out = Box::into_raw(Box::new(BpkDatabase { inner: db }));
        Ok(())
    })
}

/// Writes the database as CSV.
///
/// # Safety
/// `db` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn bpk_db_export_csv(db: *const BpkDatabase, path: *const c_char) -> BpkStatus {
    if db.is_null() || path.is_null() {
        return null_arg("db or path");
    }
    guard(|| (*db).inner.export_csv(&path_arg(path)?))
}

/// Writes the sorted binary index.
///
/// # Safety
/// `db` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn bpk_db_export_binary(db: *const BpkDatabase, path: *const c_char) -> BpkStatus {
    if db.is_null() || path.is_null() {
        return null_arg("db or path");
    }
    guard(|| (*db).inner.export_binary(&path_arg(path)?))
}

/// Number of stored records, 0 for NULL.
///
/// # Safety
/// `db` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bpk_db_len(db: *const BpkDatabase) -> usize {
    if db.is_null() {
        0
    } else {
        (*db).inner.len()
    }
}

/// Looks up `(m, n, p)` in any order; `c110` refers to the requested order.
///
/// # Safety
/// `db` must be a live handle; `out` must point to one writable record.
#[no_mangle]
pub unsafe extern "C" fn bpk_db_lookup(
    db: *const BpkDatabase,
    q: u32,
    m: u32,
    n: u32,
    p: u32,
    out: *mut BpkCoeffRecord,
) -> BpkStatus {
    if db.is_null() || out.is_null() {
        return null_arg("db or out");
    }
    guard(|| {
        *out = (*db).inner.lookup(q, m, n, p)?.into();
        Ok(())
    })
}

/// Releases a database handle. NULL is ignored.
///
/// # Safety
/// `db` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bpk_db_free(db: *mut BpkDatabase) {
    if !db.is_null() {
        drop(Box::from_raw(db));
    }
}

/// Expands `J_j(j_{i,m}x) J_k(j_{i,n}x)` in `terms` modes `J_i(j_{i,p}x)`.
///
/// # Safety
/// `out` must point to writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn bpk_expand(
    i: u8,
    j: u8,
    k: u8,
    m: u32,
    n: u32,
    terms: usize,
    out: *mut *mut BpkSeries,
) -> BpkStatus {
    if out.is_null() {
        return null_arg("out");
    }
    *out = ptr::null_mut();
    guard(|| {
        let s = fourier_bessel::expand(i, j, k, m, n, terms)?;
        *out = Box::into_raw(Box::new(BpkSeries { inner: s }));
        Ok(())
    })
}

/// Number of coefficients, 0 for NULL.
///
/// # Safety
/// `series` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bpk_series_len(series: *const BpkSeries) -> usize {
    if series.is_null() {
        0
    } else {
        (*series).inner.truncation()
    }
}

/// Copies up to `len` coefficients `c_1, c_2, ...` into `buf`.
///
/// # Safety
/// `series` must be a live handle; `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn bpk_series_coefficients(series: *const BpkSeries, buf: *mut f64, len: usize) -> BpkStatus {
    if series.is_null() || buf.is_null() {
        return null_arg("series or buf");
    }
    let coeffs = &(*series).inner.coefficients;
    for (slot, &(_, c)) in std::slice::from_raw_parts_mut(buf, len).iter_mut().zip(coeffs) {
        *slot = c;
    }
    BpkStatus::Ok
}

/// Partial sum of the expansion at `x`.
///
/// # Safety
/// `series` must be a live handle; `out` one writable `double`.
#[no_mangle]
pub unsafe extern "C" fn bpk_series_eval(series: *const BpkSeries, x: f64, out: *mut f64) -> BpkStatus {
    if series.is_null() || out.is_null() {
        return null_arg("series or out");
    }
    guard(|| {
        *out = fourier_bessel::reconstruct(&(*series).inner, x);
        Ok(())
    })
}

/// Releases a series handle. NULL is ignored.
///
/// # Safety
/// `series` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bpk_series_free(series: *mut BpkSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}
