//! C ABI for the cobord toolkit.
//!
//! The surface follows the usual opaque-handle pattern: create a
//! [`CobordCtx`] with `cobord_ctx_new`, adjust bounds with the setters, call
//! compute functions, free returned strings with `cobord_string_free`, and
//! free the context with `cobord_ctx_free`. Every fallible call either
//! returns a status code directly or returns NULL and stores a message
//! retrievable through `cobord_last_error`. Results with structure come back
//! as JSON documents in the same schemas the CLI emits.
//!
//! The matching header is `include/cobord.h`.

use std::ffi::{c_char, c_longlong, CStr, CString};
use std::ptr;

use cobord::chern::Space;
use cobord::cobordism::{blowup_relation, decompose, verify_relation};
use cobord::dt;
use cobord::parse::{parse_divisor, parse_space};
use cobord::vertex::{self, VertexOptions};

/// Status codes returned by fallible calls.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CobordStatus {
    Ok = 0,
    ParseError = 1,
    BoundError = 2,
    MathError = 3,
    InvalidArgument = 4,
    VerifyFailed = 5,
}

/// Opaque computation context: configuration plus the last error message.
pub struct CobordCtx {
    order: u32,
    nbound: u32,
    dimbound: u32,
    seed: u64,
    jobs: usize,
    last_error: Option<CString>,
}

impl CobordCtx {
    fn set_error(&mut self, msg: impl std::fmt::Display) {
        self.last_error = Some(
            CString::new(msg.to_string()).unwrap_or_else(|_| CString::new("error").unwrap()),
        );
    }

    fn vertex_options(&self) -> VertexOptions {
        VertexOptions {
            seed: self.seed,
            jobs: self.jobs,
            box_bound: self.nbound.max(vertex::DEFAULT_BOX_BOUND),
            draws: 3,
        }
    }
}

/// Creates a context with the library defaults (order 6, vertex bound 3,
/// dimension bound 4, seed 1, one worker).
#[no_mangle]
pub extern "C" fn cobord_ctx_new() -> *mut CobordCtx {
    Box::into_raw(Box::new(CobordCtx {
        order: 6,
        nbound: 3,
        dimbound: 4,
        seed: 1,
        jobs: 1,
        last_error: None,
    }))
}

/// Frees a context created by `cobord_ctx_new`. NULL is allowed.
///
/// # Safety
/// `ctx` must be NULL or a pointer previously returned by `cobord_ctx_new`
/// that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn cobord_ctx_free(ctx: *mut CobordCtx) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

macro_rules! setter {
    ($name:ident, $field:ident, $ty:ty) => {
        /// # Safety
        /// `ctx` must be a live pointer from `cobord_ctx_new`.
        #[no_mangle]
        pub unsafe extern "C" fn $name(ctx: *mut CobordCtx, value: $ty) -> CobordStatus {
            match ctx.as_mut() {
                Some(c) => {
                    c.$field = value as _;
                    CobordStatus::Ok
                }
                None => CobordStatus::InvalidArgument,
            }
        }
    };
}

setter!(cobord_ctx_set_order, order, u32);
setter!(cobord_ctx_set_nbound, nbound, u32);
setter!(cobord_ctx_set_dimbound, dimbound, u32);
setter!(cobord_ctx_set_seed, seed, u64);
setter!(cobord_ctx_set_jobs, jobs, u64);

/// The last error message on this context, or NULL. The pointer stays valid
/// until the next fallible call on the same context.
///
/// # Safety
/// `ctx` must be a live pointer from `cobord_ctx_new`.
#[no_mangle]
pub unsafe extern "C" fn cobord_last_error(ctx: *const CobordCtx) -> *const c_char {
    match ctx.as_ref().and_then(|c| c.last_error.as_ref()) {
        Some(s) => s.as_ptr(),
        None => ptr::null(),
    }
}

/// Frees a string returned by any `*_json` function. NULL is allowed.
///
/// # Safety
/// `s` must be NULL or a pointer returned by this library that has not been
/// freed.
#[no_mangle]
pub unsafe extern "C" fn cobord_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn read_str<'a>(ctx: &mut CobordCtx, s: *const c_char) -> Option<&'a str> {
    if s.is_null() {
        ctx.set_error("NULL string argument");
        return None;
    }
    match CStr::from_ptr(s).to_str() {
        Ok(v) => Some(v),
        Err(_) => {
            ctx.set_error("argument is not valid UTF-8");
            None
        }
    }
}

fn parse_space_ctx(ctx: &mut CobordCtx, expr: &str) -> Option<Space> {
    match parse_space(expr) {
        Ok(s) => Some(s),
        Err(e) => {
            ctx.set_error(e);
            None
        }
    }
}

fn leak_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// All Chern numbers of a space, as JSON
/// `{"space": ..., "dimension": ..., "chern_numbers": {"(2,1)": "24", ...}}`.
/// Returns NULL on error.
///
/// # Safety
/// `ctx` must be live; `expr` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cobord_chern_numbers_json(
    ctx: *mut CobordCtx,
    expr: *const c_char,
) -> *mut c_char {
    let Some(ctx) = ctx.as_mut() else { return ptr::null_mut() };
    let Some(expr) = read_str(ctx, expr) else { return ptr::null_mut() };
    let Some(space) = parse_space_ctx(ctx, expr) else { return ptr::null_mut() };
    let nums = match space.chern_numbers(ctx.dimbound) {
        Ok(n) => n,
        Err(e) => {
            ctx.set_error(e);
            return ptr::null_mut();
        }
    };
    let json = serde_json::json!({
        "space": cobord::parse::space_expr(&space),
        "dimension": space.dimension(),
        "chern_numbers": nums
            .iter()
            .map(|(l, v)| (cobord::partition::render(l), v.to_string()))
            .collect::<std::collections::BTreeMap<_, _>>(),
    });
    leak_string(json.to_string())
}

/// Decomposition in the basis of products of projective spaces, as JSON
/// `{"space": ..., "dimension": ..., "classes": [{"partition": [...],
/// "coefficient": "..."}]}`. Returns NULL on error.
///
/// # Safety
/// `ctx` must be live; `expr` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cobord_decompose_json(
    ctx: *mut CobordCtx,
    expr: *const c_char,
) -> *mut c_char {
    let Some(ctx) = ctx.as_mut() else { return ptr::null_mut() };
    let Some(expr) = read_str(ctx, expr) else { return ptr::null_mut() };
    let Some(space) = parse_space_ctx(ctx, expr) else { return ptr::null_mut() };
    let class = match decompose(&space, ctx.dimbound) {
        Ok(c) => c,
        Err(e) => {
            ctx.set_error(e);
            return ptr::null_mut();
        }
    };
    let json = serde_json::json!({
        "space": cobord::parse::space_expr(&space),
        "dimension": class.dim(),
        "classes": class
            .coefficients()
            .map(|(p, c)| serde_json::json!({
                "partition": p,
                "coefficient": c.to_string(),
            }))
            .collect::<Vec<_>>(),
    });
    leak_string(json.to_string())
}

/// The degree-0 DT exponent of a 3-fold; with a non-NULL `rel` divisor the
/// logarithmic exponent relative to it. Writes the integer into `out`.
///
/// # Safety
/// `ctx` must be live; `expr` NUL-terminated; `rel` NULL or NUL-terminated;
/// `out` must point to writable memory.
#[no_mangle]
pub unsafe extern "C" fn cobord_dt_exponent(
    ctx: *mut CobordCtx,
    expr: *const c_char,
    rel: *const c_char,
    out: *mut c_longlong,
) -> CobordStatus {
    let Some(ctx) = ctx.as_mut() else { return CobordStatus::InvalidArgument };
    if out.is_null() {
        ctx.set_error("NULL output pointer");
        return CobordStatus::InvalidArgument;
    }
    let Some(expr) = read_str(ctx, expr) else { return CobordStatus::InvalidArgument };
    let Some(space) = parse_space_ctx(ctx, expr) else { return CobordStatus::ParseError };
    let value = if rel.is_null() {
        space.dt_exponent()
    } else {
        let Some(rel) = read_str(ctx, rel) else { return CobordStatus::InvalidArgument };
        match parse_divisor(rel, &space) {
            Ok(s) => space.log_dt_exponent(&s),
            Err(e) => {
                ctx.set_error(e);
                return CobordStatus::ParseError;
            }
        }
    };
    match value {
        Ok(v) => {
            use num::ToPrimitive;
            if !v.is_integer() {
                ctx.set_error("exponent is not an integer");
                return CobordStatus::MathError;
            }
            match v.to_integer().to_i64() {
                Some(i) => {
                    *out = i;
                    CobordStatus::Ok
                }
                None => {
                    ctx.set_error("exponent overflows long long");
                    CobordStatus::MathError
                }
            }
        }
        Err(e) => {
            ctx.set_error(e);
            CobordStatus::MathError
        }
    }
}

/// The partition function `Z(X, q)` (or `Z(X/S, q)` with `rel`) to the
/// context's order, as JSON with exact rational coefficient strings.
/// Returns NULL on error.
///
/// # Safety
/// `ctx` must be live; `expr` NUL-terminated; `rel` NULL or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn cobord_zseries_json(
    ctx: *mut CobordCtx,
    expr: *const c_char,
    rel: *const c_char,
) -> *mut c_char {
    let Some(ctx) = ctx.as_mut() else { return ptr::null_mut() };
    let Some(expr) = read_str(ctx, expr) else { return ptr::null_mut() };
    let Some(space) = parse_space_ctx(ctx, expr) else { return ptr::null_mut() };
    let (z, exponent, rel_expr) = if rel.is_null() {
        match (dt::z_absolute(&space, ctx.order), space.dt_exponent()) {
            (Ok(z), Ok(e)) => (z, e, None),
            (Err(e), _) => {
                ctx.set_error(e);
                return ptr::null_mut();
            }
            (_, Err(e)) => {
                ctx.set_error(e);
                return ptr::null_mut();
            }
        }
    } else {
        let Some(rel) = read_str(ctx, rel) else { return ptr::null_mut() };
        let s = match parse_divisor(rel, &space) {
            Ok(s) => s,
            Err(e) => {
                ctx.set_error(e);
                return ptr::null_mut();
            }
        };
        match (dt::z_relative(&space, &s, ctx.order), space.log_dt_exponent(&s)) {
            (Ok(z), Ok(e)) => (z, e, Some(rel.to_string())),
            (Err(e), _) => {
                ctx.set_error(e);
                return ptr::null_mut();
            }
            (_, Err(e)) => {
                ctx.set_error(e);
                return ptr::null_mut();
            }
        }
    };
    let json = serde_json::json!({
        "space": cobord::parse::space_expr(&space),
        "relative_to": rel_expr,
        "order": ctx.order,
        "exponent": exponent.to_string(),
        "coefficients": z.coefficients().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    });
    leak_string(json.to_string())
}

/// The localization invariant `N_{n,0}` of a toric target. Writes the
/// integer into `out`.
///
/// # Safety
/// `ctx` must be live; `expr` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cobord_vertex_ndt(
    ctx: *mut CobordCtx,
    expr: *const c_char,
    n: u32,
    out: *mut c_longlong,
) -> CobordStatus {
    let Some(ctx) = ctx.as_mut() else { return CobordStatus::InvalidArgument };
    if out.is_null() {
        ctx.set_error("NULL output pointer");
        return CobordStatus::InvalidArgument;
    }
    let Some(expr) = read_str(ctx, expr) else { return CobordStatus::InvalidArgument };
    let Some(space) = parse_space_ctx(ctx, expr) else { return CobordStatus::ParseError };
    if n > ctx.nbound {
        ctx.set_error(format!("n = {n} exceeds the bound {}", ctx.nbound));
        return CobordStatus::BoundError;
    }
    let opts = ctx.vertex_options();
    match vertex::n_dt_i64(&space, n, &opts) {
        Ok(v) => {
            *out = v;
            CobordStatus::Ok
        }
        Err(e) => {
            ctx.set_error(e);
            CobordStatus::MathError
        }
    }
}

/// Residual of the blow-up double point relation for a 3-fold: `Ok` when it
/// vanishes, `VerifyFailed` when it does not.
///
/// # Safety
/// `ctx` must be live; `expr` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn cobord_verify_blowup(
    ctx: *mut CobordCtx,
    expr: *const c_char,
) -> CobordStatus {
    let Some(ctx) = ctx.as_mut() else { return CobordStatus::InvalidArgument };
    let Some(expr) = read_str(ctx, expr) else { return CobordStatus::InvalidArgument };
    let Some(space) = parse_space_ctx(ctx, expr) else { return CobordStatus::ParseError };
    let datum = match blowup_relation(&space) {
        Ok(d) => d,
        Err(e) => {
            ctx.set_error(e);
            return CobordStatus::MathError;
        }
    };
    match verify_relation(&datum, ctx.dimbound) {
        Ok(r) if r.is_zero() => CobordStatus::Ok,
        Ok(r) => {
            ctx.set_error(format!("nonzero residual {r}"));
            CobordStatus::VerifyFailed
        }
        Err(e) => {
            ctx.set_error(e);
            CobordStatus::MathError
        }
    }
}

/// Runs the full acceptance suite with the context configuration. Returns
/// `Ok` if every criterion passed; the JSON report (one entry per criterion)
/// is written to `out_report` when it is non-NULL.
///
/// # Safety
/// `ctx` must be live; `out_report` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn cobord_verify_all(
    ctx: *mut CobordCtx,
    out_report: *mut *mut c_char,
) -> CobordStatus {
    let Some(ctx) = ctx.as_mut() else { return CobordStatus::InvalidArgument };
    let cfg = cobord::verify::VerifyConfig {
        fgl_degree: 6,
        qseries_order: ctx.order,
        vertex_n_bound: ctx.nbound,
        dim_bound: ctx.dimbound,
        seed: ctx.seed,
        jobs: ctx.jobs,
    };
    let results = cobord::verify::run_all(&cfg);
    let ok = results.iter().all(|r| r.passed);
    if !out_report.is_null() {
        let report = serde_json::json!(results
            .iter()
            .map(|r| serde_json::json!({
                "id": r.id,
                "name": r.name,
                "passed": r.passed,
                "detail": r.detail,
                "seconds": r.seconds,
            }))
            .collect::<Vec<_>>());
        *out_report = leak_string(report.to_string());
    }
    if ok {
        CobordStatus::Ok
    } else {
        ctx.set_error("one or more acceptance criteria failed");
        CobordStatus::VerifyFailed
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn cobord_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
