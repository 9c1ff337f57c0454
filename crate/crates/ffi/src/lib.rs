//! C ABI for `dirichlet-lab`.
//!
//! Objects cross the boundary as opaque handles created by `dlab_*_new` style
//! functions and released with the matching `dlab_*_free`. Every fallible call
//! returns a [`DlabStatus`]; on failure [`dlab_last_error_message`] describes
//! the error for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::ptr;

use num::complex::Complex64;

use dirichlet_lab::frequency::{
    check_condition, l_value, BasisDecomposition, Condition, Frequency, FrequencyRule, Verdict,
};
use dirichlet_lab::group::{build_model, lp_norm, GroupModel, NormMethod};
use dirichlet_lab::kernels::{perron_transform, poisson_eval};
use dirichlet_lab::series::DirichletPolynomial;
use dirichlet_lab::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DlabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidFrequency = 3,
    InvalidRelations = 4,
    AmbiguousRelation = 5,
    InvalidAbscissa = 6,
    UndefinedAbscissa = 7,
    ModelMismatch = 8,
    InvalidModel = 9,
    InvalidParameter = 10,
    InvalidExponent = 11,
    AccuracyNotAchieved = 12,
    NotCoprime = 13,
    Overflow = 14,
    Io = 15,
    Parse = 16,
    Panic = 99,
}

impl From<&Error> for DlabStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidFrequency(_) => DlabStatus::InvalidFrequency,
            Error::InvalidRelations(_) => DlabStatus::InvalidRelations,
            Error::AmbiguousRelation { .. } => DlabStatus::AmbiguousRelation,
            Error::InvalidAbscissa(_) => DlabStatus::InvalidAbscissa,
            Error::UndefinedAbscissa => DlabStatus::UndefinedAbscissa,
            Error::ModelMismatch(_) => DlabStatus::ModelMismatch,
            Error::InvalidModel(_) => DlabStatus::InvalidModel,
            Error::InvalidParameter(_) => DlabStatus::InvalidParameter,
            Error::InvalidExponent(_) => DlabStatus::InvalidExponent,
            Error::AccuracyNotAchieved { .. } => DlabStatus::AccuracyNotAchieved,
            Error::NotCoprime(_) => DlabStatus::NotCoprime,
            Error::Overflow => DlabStatus::Overflow,
            Error::Io(_) => DlabStatus::Io,
            Error::Parse(_) => DlabStatus::Parse,
        }
    }
}

/// A frequency `λ = (λ_n)`.
pub struct DlabFrequency(Frequency);

/// A finite Dirichlet polynomial over a frequency.
pub struct DlabPolynomial(DirichletPolynomial);

/// A torus model of the group attached to a frequency prefix.
pub struct DlabModel(GroupModel);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DlabConditionKind {
    /// Bohr's condition with parameters `l` and `delta`.
    Bohr = 0,
    /// Landau's condition with parameter `delta`.
    Landau = 1,
    /// The limsup `L(λ)`; parameters ignored.
    LValue = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DlabVerdict {
    EvidenceHolds = 0,
    EvidenceFails = 1,
    Inconclusive = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DlabConditionResult {
    pub witness: f64,
    pub verdict: DlabVerdict,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DlabNormMethod {
    /// Monte Carlo over Haar measure; uses `samples`.
    Haar = 0,
    /// Average along the Kronecker flow; uses `t_max` and `step`.
    Flow = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DlabNormResult {
    pub value: f64,
    /// Monte Carlo standard error, NaN when not applicable.
    pub std_error: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

enum Failure {
    Null(&'static str),
    Utf8,
    Lab(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lab(e)
    }
}

fn guard<F>(f: F) -> DlabStatus
where
    F: FnOnce() -> Result<(), Failure> + UnwindSafe,
{
    match catch_unwind(f) {
        Ok(Ok(())) => DlabStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            DlabStatus::NullPointer
        }
        Ok(Err(Failure::Utf8)) => {
            set_error("string argument is not valid UTF-8".into());
            DlabStatus::InvalidUtf8
        }
        Ok(Err(Failure::Lab(e))) => {
            set_error(e.to_string());
            DlabStatus::from(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            DlabStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Utf8)
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

/// Message for the last failing call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dlab_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dlab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from a `dlab_*` function documented as returning an owned
/// string, and must not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn dlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `log(n)`, `n`, `sqrt(log(n))`, `log(log(n))` or `file:<path>`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dlab_frequency_parse(spec: *const c_char, out_freq: *mut *mut DlabFrequency) -> DlabStatus {
    guard(|| {
        let slot = out(out_freq, "out_freq")?;
        let f = Frequency::parse(text(spec, "spec")?)?;
        *slot = Box::into_raw(Box::new(DlabFrequency(f)));
        Ok(())
    })
}

/// A finite frequency from `len` strictly increasing nonnegative values.
///
/// # Safety
/// `values` must point to `len` readable doubles and `out_freq` be valid.
#[no_mangle]
pub unsafe extern "C" fn dlab_frequency_explicit(
    values: *const f64,
    len: usize,
    out_freq: *mut *mut DlabFrequency,
) -> DlabStatus {
    guard(|| {
        let slot = out(out_freq, "out_freq")?;
        let f = Frequency::explicit("explicit", slice(values, len, "values")?.to_vec())?;
        *slot = Box::into_raw(Box::new(DlabFrequency(f)));
        Ok(())
    })
}

/// Writes `λ_n` (1-based) to `out_value`.
///
/// # Safety
/// `freq` must be a live handle and `out_value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dlab_frequency_value(freq: *const DlabFrequency, n: usize, out_value: *mut f64) -> DlabStatus {
    guard(|| {
        let f = &borrow(freq, "freq")?.0;
        let slot = out(out_value, "out_value")?;
        *slot = f
            .value(n)
            .ok_or_else(|| Error::InvalidParameter(format!("index {n} outside the frequency")))?;
        Ok(())
    })
}

/// Evaluates a growth condition on the prefix `λ_1..λ_n`.
///
/// # Safety
/// `freq` must be a live handle and `out_result` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dlab_frequency_check(
    freq: *const DlabFrequency,
    kind: DlabConditionKind,
    l: f64,
    delta: f64,
    n: usize,
    out_result: *mut DlabConditionResult,
) -> DlabStatus {
    guard(|| {
        let f = &borrow(freq, "freq")?.0;
        let slot = out(out_result, "out_result")?;
        let report = match kind {
            DlabConditionKind::Bohr => check_condition(f, Condition::Bohr { l, delta }, n)?,
            DlabConditionKind::Landau => check_condition(f, Condition::Landau { delta }, n)?,
            DlabConditionKind::LValue => l_value(f, n)?,
        };
        *slot = DlabConditionResult {
            witness: report.witness,
            verdict: match report.verdict {
                Verdict::EvidenceHolds => DlabVerdict::EvidenceHolds,
                Verdict::EvidenceFails => DlabVerdict::EvidenceFails,
                Verdict::Inconclusive => DlabVerdict::Inconclusive,
            },
        };
        Ok(())
    })
}

/// # Safety
/// `freq` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dlab_frequency_free(freq: *mut DlabFrequency) {
    if !freq.is_null() {
        drop(Box::from_raw(freq));
    }
}

/// `Σ_{n ≤ len} a_n e^{-λ_n s}` with `a_n = re[n-1] + i·im[n-1]`. `im` may be
/// NULL for real coefficients. The frequency is copied.
///
/// # Safety
/// `freq` must be a live handle, `re` (and `im` unless NULL) must point to
/// `len` doubles, and `out_poly` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dlab_polynomial_new(
    freq: *const DlabFrequency,
    re: *const f64,
    im: *const f64,
    len: usize,
    out_poly: *mut *mut DlabPolynomial,
) -> DlabStatus {
    guard(|| {
        let f = &borrow(freq, "freq")?.0;
        let slot = out(out_poly, "out_poly")?;
        let re = slice(re, len, "re")?;
        let coeffs: Vec<Complex64> = if im.is_null() {
            re.iter().map(|&x| Complex64::new(x, 0.0)).collect()
        } else {
            let im = slice(im, len, "im")?;
            re.iter().zip(im).map(|(&x, &y)| Complex64::new(x, y)).collect()
        };
        let d = DirichletPolynomial::from_coefficients(f.clone(), &coeffs)?;
        *slot = Box::into_raw(Box::new(DlabPolynomial(d)));
        Ok(())
    })
}

/// Value at `s = s_re + i·s_im`.
///
/// # Safety
/// `poly` must be a live handle; `out_re` and `out_im` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dlab_polynomial_eval(
    poly: *const DlabPolynomial,
    s_re: f64,
    s_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> DlabStatus {
    guard(|| {
        let d = &borrow(poly, "poly")?.0;
        let re = out(out_re, "out_re")?;
        let im = out(out_im, "out_im")?;
        let v = d.eval(Complex64::new(s_re, s_im));
        *re = v.re;
        *im = v.im;
        Ok(())
    })
}

/// JSON form of the polynomial; release with [`dlab_string_free`].
///
/// # Safety
/// `poly` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dlab_polynomial_to_json(
    poly: *const DlabPolynomial,
    out_json: *mut *mut c_char,
) -> DlabStatus {
    guard(|| {
        let d = &borrow(poly, "poly")?.0;
        let slot = out(out_json, "out_json")?;
        let json = d.to_json()?;
        *slot = CString::new(json).map_err(|e| Error::Parse(e.to_string()))?.into_raw();
        Ok(())
    })
}

/// Poisson–Perron transform `e^{-u|x|} Σ_{λ_n < x} a_n (x − λ_n)^k`.
///
/// # Safety
/// `poly` must be a live handle; `out_re` and `out_im` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dlab_perron_transform(
    poly: *const DlabPolynomial,
    u: f64,
    k: f64,
    x: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> DlabStatus {
    guard(|| {
        let d = &borrow(poly, "poly")?.0;
        let re = out(out_re, "out_re")?;
        let im = out(out_im, "out_im")?;
        let v = perron_transform(d, u, k, x)?;
        *re = v.re;
        *im = v.im;
        Ok(())
    })
}

/// # Safety
/// `poly` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dlab_polynomial_free(poly: *mut DlabPolynomial) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Torus model for `λ_1..λ_n`. Relations are exact for `log(n)` and `n` and
/// detected numerically with tolerance `tol` otherwise, unless
/// `assume_independent` is set.
///
/// # Safety
/// `freq` must be a live handle and `out_model` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dlab_model_new(
    freq: *const DlabFrequency,
    n: usize,
    tol: f64,
    assume_independent: bool,
    out_model: *mut *mut DlabModel,
) -> DlabStatus {
    guard(|| {
        let f = &borrow(freq, "freq")?.0;
        let slot = out(out_model, "out_model")?;
        let exact = matches!(f.rule(), FrequencyRule::Log | FrequencyRule::Linear);
        let decomp = if assume_independent && !exact {
            BasisDecomposition::independent(f.prefix(n)?)?
        } else {
            BasisDecomposition::for_frequency(f, n, tol)?
        };
        *slot = Box::into_raw(Box::new(DlabModel(build_model(&decomp)?)));
        Ok(())
    })
}

/// Torus dimension, or 0 for NULL.
///
/// # Safety
/// `model` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dlab_model_dim(model: *const DlabModel) -> usize {
    model.as_ref().map_or(0, |m| m.0.dim())
}

/// `‖f‖_p` on the model; `p = INFINITY` is allowed.
///
/// # Safety
/// `poly` and `model` must be live handles and `out_result` valid.
#[no_mangle]
pub unsafe extern "C" fn dlab_lp_norm(
    poly: *const DlabPolynomial,
    model: *const DlabModel,
    p: f64,
    method: DlabNormMethod,
    samples: usize,
    t_max: f64,
    step: f64,
    seed: u64,
    out_result: *mut DlabNormResult,
) -> DlabStatus {
    guard(|| {
        let d = &borrow(poly, "poly")?.0;
        let m = &borrow(model, "model")?.0;
        let slot = out(out_result, "out_result")?;
        let method = match method {
            DlabNormMethod::Haar => NormMethod::HaarMc { samples },
            DlabNormMethod::Flow => NormMethod::FlowAverage { t_max, step },
        };
        let est = lp_norm(d, m, p, method, seed)?;
        *slot = DlabNormResult {
            value: est.value,
            std_error: est.std_error.unwrap_or(f64::NAN),
        };
        Ok(())
    })
}

/// # Safety
/// `model` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dlab_model_free(model: *mut DlabModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Poisson kernel `P_u(t) = u / (π(u² + t²))`.
///
/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dlab_poisson(u: f64, t: f64, out_value: *mut f64) -> DlabStatus {
    guard(|| {
        let slot = out(out_value, "out_value")?;
        *slot = poisson_eval(u, t)?;
        Ok(())
    })
}
