//! C interface to `kneser-core`.
//!
//! Objects are opaque heap handles released with their `*_free` function.
//! Every call returns a [`KnStatus`]; on failure the message is available
//! from [`kn_last_error`] until the next failing call on the same thread.
//! Outputs are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kneser_core::chromatic::{chi_exact_with, ChiOptions, ChromaticNumber};
use kneser_core::defect::{ecd, ecd_s_disjoint};
use kneser_core::hypergraph::{build_kneser, Hypergraph, Variant};
use kneser_core::tucker::{check_tucker_conditions, TuckerContext, TuckerVariant};
use kneser_core::verify::grid::{run_suite, GridConfig, Suite};
use kneser_core::verify::VerifyOptions;
use kneser_core::{enumerate_family, Error, Family, FamilySpec, Partition};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    ResourceLimit = 3,
    Internal = 4,
    Io = 5,
    Panic = 6,
}

/// A set family.
pub struct KnFamily(Family);

/// A partition of the ground set.
pub struct KnPartition(Partition);

/// A uniform hypergraph.
pub struct KnHypergraph(Hypergraph);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> KnStatus {
    match e {
        Error::InvalidInput(_) | Error::Json(_) => KnStatus::InvalidInput,
        Error::Resource(_) => KnStatus::ResourceLimit,
        Error::Io(_) | Error::Csv(_) => KnStatus::Io,
        Error::Internal(_) => KnStatus::Internal,
    }
}

enum Fail {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> KnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KnStatus::Ok,
        Ok(Err(Fail::Null(name))) => {
            set_error(format!("{name} is null"));
            KnStatus::NullPointer
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("panic inside kneser".to_string());
            KnStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Core(Error::InvalidInput(format!("{name} is not UTF-8"))))
}

unsafe fn obj<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(name))
}

unsafe fn put<T>(out: *mut T, value: T, name: &'static str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null(name));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Fail::Core(Error::Internal("output contains a nul byte".into())))
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library; valid until the next failing call.
#[no_mangle]
pub extern "C" fn kn_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn kn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn kn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Enumerates a family from a spec such as `ksubsets:n=7,k=3`.
///
/// # Safety
/// `spec` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kn_family_parse(spec: *const c_char, out: *mut *mut KnFamily) -> KnStatus {
    guard(|| {
        let spec = FamilySpec::parse(str_arg(spec, "spec")?)?;
        let fam = enumerate_family(&spec)?;
        put(out, Box::into_raw(Box::new(KnFamily(fam))), "out")
    })
}

/// Builds a family over `[n]` from JSON `{"n": .., "sets": [[..], ..]}`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kn_family_from_json(json: *const c_char, out: *mut *mut KnFamily) -> KnStatus {
    guard(|| {
        let fam = Family::from_json(str_arg(json, "json")?)?;
        put(out, Box::into_raw(Box::new(KnFamily(fam))), "out")
    })
}

/// # Safety
/// `f` must be a live family handle; `n` and `len` writable.
#[no_mangle]
pub unsafe extern "C" fn kn_family_size(f: *const KnFamily, n: *mut usize, len: *mut usize) -> KnStatus {
    guard(|| {
        let f = obj(f, "family")?;
        put(n, f.0.n(), "n")?;
        put(len, f.0.len(), "len")
    })
}

/// # Safety
/// `f` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kn_family_free(f: *mut KnFamily) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Parses a partition of `[n]`: `1,2|3,4`, `singletons` or `consecutive:<size>`.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kn_partition_parse(text: *const c_char, n: usize, out: *mut *mut KnPartition) -> KnStatus {
    guard(|| {
        let p = Partition::parse_for(str_arg(text, "text")?, n)?;
        put(out, Box::into_raw(Box::new(KnPartition(p))), "out")
    })
}

/// # Safety
/// `p` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kn_partition_free(p: *mut KnPartition) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// `ecd^r(F, s)`.
///
/// # Safety
/// `f` must be a live family handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kn_ecd(f: *const KnFamily, r: usize, s: usize, out: *mut usize) -> KnStatus {
    guard(|| {
        let d = ecd(&obj(f, "family")?.0, r, s)?;
        put(out, d.value, "out")
    })
}

/// `ecd_S^r(F)` with one weight per ground element.
///
/// # Safety
/// `weights` must point to `len` readable values; `f` live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kn_ecd_s_disjoint(
    f: *const KnFamily,
    r: usize,
    weights: *const u32,
    len: usize,
    out: *mut usize,
) -> KnStatus {
    guard(|| {
        let f = obj(f, "family")?;
        if weights.is_null() && len > 0 {
            return Err(Fail::Null("weights"));
        }
        let w = if len == 0 { &[][..] } else { std::slice::from_raw_parts(weights, len) };
        let d = ecd_s_disjoint(&f.0, r, w)?;
        put(out, d.value, "out")
    })
}

/// `KG^r(F, P, s)`, or its tilde variant when `tilde` is set.
///
/// # Safety
/// `f` and `p` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kn_hypergraph_kneser(
    f: *const KnFamily,
    p: *const KnPartition,
    s: usize,
    tilde: bool,
    r: usize,
    out: *mut *mut KnHypergraph,
) -> KnStatus {
    guard(|| {
        let variant = if tilde { Variant::Tilde } else { Variant::Plain };
        let h = build_kneser(&obj(f, "family")?.0, &obj(p, "partition")?.0, s, variant, r)?;
        put(out, Box::into_raw(Box::new(KnHypergraph(h))), "out")
    })
}

/// Loads a hypergraph from its JSON form.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kn_hypergraph_from_json(json: *const c_char, out: *mut *mut KnHypergraph) -> KnStatus {
    guard(|| {
        let h = Hypergraph::from_json(str_arg(json, "json")?)?;
        put(out, Box::into_raw(Box::new(KnHypergraph(h))), "out")
    })
}

/// # Safety
/// `h` must be a live handle; `vertices` and `edges` writable.
#[no_mangle]
pub unsafe extern "C" fn kn_hypergraph_size(
    h: *const KnHypergraph,
    vertices: *mut usize,
    edges: *mut usize,
) -> KnStatus {
    guard(|| {
        let h = obj(h, "hypergraph")?;
        put(vertices, h.0.vertex_count(), "vertices")?;
        put(edges, h.0.edge_count(), "edges")
    })
}

/// The hypergraph as JSON; release with [`kn_string_free`].
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kn_hypergraph_to_json(h: *const KnHypergraph, out: *mut *mut c_char) -> KnStatus {
    guard(|| {
        let s = to_c_string(obj(h, "hypergraph")?.0.to_json())?;
        put(out, s, "out")
    })
}

/// # Safety
/// `h` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kn_hypergraph_free(h: *mut KnHypergraph) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Exact chromatic number. `infinite` is set when the hypergraph has a loop,
/// in which case `value` is 0. A `node_limit` of 0 keeps the default.
///
/// # Safety
/// `h` must be a live handle; `value` and `infinite` writable.
#[no_mangle]
pub unsafe extern "C" fn kn_chromatic_number(
    h: *const KnHypergraph,
    node_limit: u64,
    value: *mut usize,
    infinite: *mut bool,
) -> KnStatus {
    guard(|| {
        let mut opts = ChiOptions::default();
        if node_limit > 0 {
            opts.node_limit = node_limit;
        }
        let res = chi_exact_with(&obj(h, "hypergraph")?.0, &opts)?;
        let (v, inf) = match res.value {
            ChromaticNumber::Finite(v) => (v, false),
            ChromaticNumber::Infinite => (0, true),
        };
        put(value, v, "value")?;
        put(infinite, inf, "infinite")
    })
}

/// Replays the Tucker labeling for `KG^p(F, P, s)` with an optimal coloring
/// and reports whether every condition holds. `report_json`, when not null,
/// receives the full report; release it with [`kn_string_free`].
///
/// # Safety
/// `f` and `p` must be live handles; `all_hold` writable; `report_json`
/// null or writable.
#[no_mangle]
pub unsafe extern "C" fn kn_tucker_check(
    f: *const KnFamily,
    p: *const KnPartition,
    s: usize,
    prime: usize,
    tilde: bool,
    max_faces: u64,
    all_hold: *mut bool,
    report_json: *mut *mut c_char,
) -> KnStatus {
    guard(|| {
        let variant = if tilde { TuckerVariant::Tilde } else { TuckerVariant::Plain };
        let ctx = TuckerContext::new(&obj(f, "family")?.0, &obj(p, "partition")?.0, s, prime, variant, None)?;
        let report = check_tucker_conditions(&ctx, max_faces)?;
        let json = if report_json.is_null() {
            None
        } else {
            Some(to_c_string(serde_json::to_string(&report).map_err(Error::from)?)?)
        };
        put(all_hold, report.all_hold, "all_hold")?;
        if let Some(j) = json {
            report_json.write(j);
        }
        Ok(())
    })
}

/// Runs a verification suite (`formulas`, `theorems` or `all`) from a grid
/// configuration given as JSON text. `failures` counts violated proven
/// bounds; `summary_json`, when not null, receives the summary.
///
/// # Safety
/// String arguments must be nul-terminated; `failures` writable;
/// `summary_json` null or writable.
#[no_mangle]
pub unsafe extern "C" fn kn_verify(
    config_json: *const c_char,
    suite: *const c_char,
    failures: *mut usize,
    summary_json: *mut *mut c_char,
) -> KnStatus {
    guard(|| {
        let cfg = GridConfig::from_json(str_arg(config_json, "config_json")?)?;
        let suite: Suite = str_arg(suite, "suite")?.parse()?;
        let report = run_suite(&cfg, suite, VerifyOptions::default())?;
        let json = if summary_json.is_null() {
            None
        } else {
            Some(to_c_string(serde_json::to_string(&report.summary()).map_err(Error::from)?)?)
        };
        put(failures, report.failures(), "failures")?;
        if let Some(j) = json {
            summary_json.write(j);
        }
        Ok(())
    })
}
