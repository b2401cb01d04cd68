//! C ABI over `crsphere`.
//!
//! Every fallible function returns a [`CrsStatus`] and writes results through
//! out-pointers. On failure the message is available from
//! [`crs_last_error_message`] on the same thread. Coefficient sets and kernel
//! scans are opaque handles released with their `_free` function.

use crsphere::cutoffs::Cutoffs;
use crsphere::kernel::{sup_scan, KernelScan, Localization, ScanGrid};
use crsphere::sobolev::{norm_h, norm_mixed, norm_w, MixedNormParams};
use crsphere::specfun::{bessel_j, jacobi_p, JacobiParams};
use crsphere::{DiskPoint, Error, SpectralIndex, ZonalSpectralData};
use num_complex::Complex64;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrsStatus {
    Ok = 0,
    InvalidArgument = 1,
    Overflow = 2,
    Unresolved = 3,
    Io = 4,
    Parse = 5,
    NullPointer = 6,
    Panic = 7,
}

pub const CRS_LOCALIZATION_FULL: u32 = 0;
pub const CRS_LOCALIZATION_CONE: u32 = 1;
pub const CRS_LOCALIZATION_EDGE: u32 = 2;
pub const CRS_LOCALIZATION_DIAG: u32 = 3;
pub const CRS_LOCALIZATION_PLUS: u32 = 4;
pub const CRS_LOCALIZATION_MINUS: u32 = 5;

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CrsEigenData {
    pub lambda: u64,
    pub mu: u64,
    /// Dimension of the bidegree space; exact below 2^53.
    pub dim: f64,
    pub big_n: u64,
    pub beta: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CrsNorms {
    pub l2: f64,
    pub w_r: f64,
    pub h_s: f64,
    pub mixed: f64,
}

/// Opaque coefficient set `u = Σ c Z_{ℓ,ℓ′}`.
pub struct CrsCoefficients(ZonalSpectralData);

/// Opaque sampled kernel.
pub struct CrsKernelScan(KernelScan);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CrsStatus {
    match e {
        Error::InvalidArgument(_) => CrsStatus::InvalidArgument,
        Error::Overflow(_) => CrsStatus::Overflow,
        Error::Unresolved(_) => CrsStatus::Unresolved,
        Error::Io(_) => CrsStatus::Io,
        Error::Parse(_) => CrsStatus::Parse,
    }
}

enum Fail {
    Core(Error),
    Null(&'static str),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail::Core(Error::InvalidArgument(msg.into()))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CrsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CrsStatus::Ok,
        Ok(Err(Fail::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            CrsStatus::NullPointer
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            CrsStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

fn check_n(n: u32) -> Result<(), Fail> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    Ok(())
}

fn localization(code: u32) -> Result<Localization, Fail> {
    Localization::ALL.get(code as usize).copied().ok_or_else(|| invalid(format!("unknown localization code {code}")))
}

/// Copies the last error message of this thread into `buf` (NUL terminated,
/// truncated to `len`) and returns the buffer size needed for all of it.
/// Returns 0 when there is no error.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn crs_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        None => 0,
        Some(msg) => {
            let bytes = msg.as_bytes_with_nul();
            if !buf.is_null() && len > 0 {
                let k = bytes.len().min(len);
                ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, k);
                *buf.add(k - 1) = 0;
            }
            bytes.len()
        }
    })
}

#[no_mangle]
pub extern "C" fn crs_clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn crs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Surface measure of S^{2n+1}.
///
/// # Safety
/// `area` must be null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crs_surface_area(n: u32, area: *mut f64) -> CrsStatus {
    guard(|| {
        *out(area, "area")? = crsphere::geometry::surface_area(n)?;
        Ok(())
    })
}

/// # Safety
/// `data` must be null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crs_eigen_data(ell: u32, ellp: u32, n: u32, data: *mut CrsEigenData) -> CrsStatus {
    guard(|| {
        check_n(n)?;
        let e = crsphere::spectrum::eigen_data(SpectralIndex::new(ell, ellp), n);
        *out(data, "data")? = CrsEigenData { lambda: e.lambda, mu: e.mu, dim: e.dim as f64, big_n: e.big_n, beta: e.beta };
        Ok(())
    })
}

/// `P_degree^{(alpha,beta)}(x)`.
///
/// # Safety
/// `value` must be null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crs_jacobi_p(degree: u32, alpha: f64, beta: f64, x: f64, value: *mut f64) -> CrsStatus {
    guard(|| {
        *out(value, "value")? = jacobi_p(JacobiParams::new(degree, alpha, beta)?, x)?;
        Ok(())
    })
}

/// `J_nu(x)`.
///
/// # Safety
/// `value` must be null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crs_bessel_j(nu: u32, x: f64, value: *mut f64) -> CrsStatus {
    guard(|| {
        *out(value, "value")? = bessel_j(nu, x)?;
        Ok(())
    })
}

/// `Z_{ℓ,ℓ′}` at the disk point `(omega, theta)`.
///
/// # Safety
/// `re` and `im` must be null or valid pointers.
#[no_mangle]
pub unsafe extern "C" fn crs_zonal_eval(
    ell: u32,
    ellp: u32,
    n: u32,
    omega: f64,
    theta: f64,
    re: *mut f64,
    im: *mut f64,
) -> CrsStatus {
    guard(|| {
        check_n(n)?;
        if !(omega.is_finite() && (0.0..=std::f64::consts::FRAC_PI_2).contains(&theta)) {
            return Err(invalid(format!("point (omega={omega}, theta={theta}) outside the disk chart")));
        }
        let (re, im) = (out(re, "re")?, out(im, "im")?);
        let z = crsphere::zonal::zonal_eval(SpectralIndex::new(ell, ellp), n, &DiskPoint::at(omega, theta));
        *re = z.re;
        *im = z.im;
        Ok(())
    })
}

/// Empty coefficient set on S^{2n+1}; null when `n == 0`.
#[no_mangle]
pub extern "C" fn crs_coefficients_new(n: u32) -> *mut CrsCoefficients {
    if n == 0 {
        set_error("invalid argument: n must be at least 1".into());
        return ptr::null_mut();
    }
    Box::into_raw(Box::new(CrsCoefficients(ZonalSpectralData::new(n))))
}

/// Reads an `ell,ellp,re,im` CSV file.
///
/// # Safety
/// `path` must be null or a NUL-terminated string; `result` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn crs_coefficients_read_csv(
    path: *const c_char,
    n: u32,
    result: *mut *mut CrsCoefficients,
) -> CrsStatus {
    guard(|| {
        check_n(n)?;
        let path = CStr::from_ptr(handle(path, "path")?).to_str().map_err(|_| invalid("path is not UTF-8"))?;
        let result = out(result, "result")?;
        let file = std::fs::File::open(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
        let u = crsphere::io::read_coefficients(n, file)?;
        *result = Box::into_raw(Box::new(CrsCoefficients(u)));
        Ok(())
    })
}

/// Adds `re + i im` to the coefficient of bidegree `(ell, ellp)`.
///
/// # Safety
/// `coeffs` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn crs_coefficients_add(
    coeffs: *mut CrsCoefficients,
    ell: u32,
    ellp: u32,
    re: f64,
    im: f64,
) -> CrsStatus {
    guard(|| {
        let u = out(coeffs, "coeffs")?;
        if !(re.is_finite() && im.is_finite()) {
            return Err(invalid("non-finite coefficient"));
        }
        *u.0.coeffs.entry(SpectralIndex::new(ell, ellp)).or_default() += Complex64::new(re, im);
        Ok(())
    })
}

/// Number of stored bidegrees, 0 for a null handle.
///
/// # Safety
/// `coeffs` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn crs_coefficients_len(coeffs: *const CrsCoefficients) -> usize {
    coeffs.as_ref().map_or(0, |u| u.0.len())
}

/// # Safety
/// `coeffs` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn crs_coefficients_free(coeffs: *mut CrsCoefficients) {
    if !coeffs.is_null() {
        drop(Box::from_raw(coeffs));
    }
}

/// L², W^r, H^s and mixed norms with cone aperture `m`.
///
/// # Safety
/// `coeffs` must be null or a live handle; `norms` null or valid.
#[no_mangle]
pub unsafe extern "C" fn crs_norms(
    coeffs: *const CrsCoefficients,
    r: f64,
    s: f64,
    m: f64,
    norms: *mut CrsNorms,
) -> CrsStatus {
    guard(|| {
        let u = &handle(coeffs, "coeffs")?.0;
        let norms = out(norms, "norms")?;
        let params = MixedNormParams::new(r, s, m)?;
        *norms = CrsNorms { l2: u.l2_norm(), w_r: norm_w(u, r), h_s: norm_h(u, s), mixed: norm_mixed(u, params) };
        Ok(())
    })
}

/// Samples `K_h(t)` on an `n_theta × n_omega` grid over the whole disk chart,
/// with default cutoffs.
///
/// # Safety
/// `result` must be null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crs_kernel_scan(
    t: f64,
    h: f64,
    n: u32,
    localization_code: u32,
    n_theta: usize,
    n_omega: usize,
    result: *mut *mut CrsKernelScan,
) -> CrsStatus {
    guard(|| {
        check_n(n)?;
        let result = out(result, "result")?;
        let loc = localization(localization_code)?;
        let scan = sup_scan(t, h, n, loc, ScanGrid::with_size(n_theta, n_omega), &Cutoffs::default())?;
        *result = Box::into_raw(Box::new(CrsKernelScan(scan)));
        Ok(())
    })
}

/// Supremum of |K| over the scan and where it is attained.
///
/// # Safety
/// `scan` must be null or a live handle; the out-pointers null or valid.
#[no_mangle]
pub unsafe extern "C" fn crs_kernel_scan_sup(
    scan: *const CrsKernelScan,
    sup: *mut f64,
    argmax_omega: *mut f64,
    argmax_theta: *mut f64,
) -> CrsStatus {
    guard(|| {
        let s = &handle(scan, "scan")?.0;
        let (sup, w, th) = (out(sup, "sup")?, out(argmax_omega, "argmax_omega")?, out(argmax_theta, "argmax_theta")?);
        *sup = s.sup_abs;
        *w = s.argmax.0;
        *th = s.argmax.1;
        Ok(())
    })
}

/// Grid dimensions and the number of spectral terms in the kernel.
///
/// # Safety
/// `scan` must be null or a live handle; the out-pointers null or valid.
#[no_mangle]
pub unsafe extern "C" fn crs_kernel_scan_shape(
    scan: *const CrsKernelScan,
    n_theta: *mut usize,
    n_omega: *mut usize,
    term_count: *mut usize,
) -> CrsStatus {
    guard(|| {
        let s = &handle(scan, "scan")?.0;
        let (a, b, c) = (out(n_theta, "n_theta")?, out(n_omega, "n_omega")?, out(term_count, "term_count")?);
        *a = s.thetas.len();
        *b = s.omegas.len();
        *c = s.term_count;
        Ok(())
    })
}

/// Copies the samples, θ-major, into `re` and `im`, each of length `len`,
/// which must equal `n_theta * n_omega`.
///
/// # Safety
/// `scan` must be null or a live handle; `re` and `im` null or valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn crs_kernel_scan_values(
    scan: *const CrsKernelScan,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> CrsStatus {
    guard(|| {
        let s = &handle(scan, "scan")?.0;
        if re.is_null() || im.is_null() {
            return Err(Fail::Null("re/im"));
        }
        if len != s.values.len() {
            return Err(invalid(format!("buffer length {len}, scan has {} samples", s.values.len())));
        }
        let (re, im) = (std::slice::from_raw_parts_mut(re, len), std::slice::from_raw_parts_mut(im, len));
        for (k, v) in s.values.iter().enumerate() {
            re[k] = v.re;
            im[k] = v.im;
        }
        Ok(())
    })
}

/// # Safety
/// `scan` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn crs_kernel_scan_free(scan: *mut CrsKernelScan) {
    if !scan.is_null() {
        drop(Box::from_raw(scan));
    }
}
