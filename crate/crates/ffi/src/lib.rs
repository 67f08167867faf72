//! C interface over `cvc`.
//!
//! Objects are opaque heap handles owned by the caller and released with the
//! matching `*_free`. Vertices are 0-indexed `uint32_t`. Every fallible call
//! returns a [`CvcStatus`]; on failure [`cvc_last_error`] holds a message for
//! the calling thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cvc::io::parse_dimacs;
use cvc::lossy::{kernelize, AlphaParams, Kernel, Rational};
use cvc::modulator::find_clique_cover_of;
use cvc::solve::solve;
use cvc::{CvcError, Graph, Instance, ModulatorKind, VertexSet};

/// Result codes. Zero is success, positive values are non-error outcomes,
/// negative values are errors.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CvcStatus {
    Ok = 0,
    /// No connected vertex cover within the requested size.
    Infeasible = 1,
    NullPointer = -1,
    Parse = -2,
    VertexOutOfRange = -3,
    KindMismatch = -4,
    NotApplicable = -5,
    InvalidParameter = -6,
    ChainMismatch = -7,
    Internal = -100,
}

/// Graph class that `G - S` belongs to.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CvcKind {
    Split = 0,
    Clique = 1,
    Cluster = 2,
    Degree1 = 3,
    Chordal = 4,
    /// `G - S` is covered by few cliques; a cover is computed internally.
    CliqueCover = 5,
}

impl From<CvcKind> for ModulatorKind {
    fn from(k: CvcKind) -> Self {
        match k {
            CvcKind::Split => ModulatorKind::Split,
            CvcKind::Clique => ModulatorKind::Clique,
            CvcKind::Cluster => ModulatorKind::Cluster,
            CvcKind::Degree1 => ModulatorKind::Degree1,
            CvcKind::Chordal => ModulatorKind::Chordal,
            CvcKind::CliqueCover => ModulatorKind::CliqueCover,
        }
    }
}

pub struct CvcGraph(Graph);

pub struct CvcVertexSet(Vec<u32>);

pub struct CvcKernel {
    kernel: Kernel,
    original_n: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &CvcError) -> CvcStatus {
    match e {
        CvcError::Parse { .. } | CvcError::Json(_) | CvcError::Io(_) => CvcStatus::Parse,
        CvcError::VertexOutOfRange { .. } | CvcError::SelfLoop(_) => CvcStatus::VertexOutOfRange,
        CvcError::KindMismatch(_) | CvcError::NotChordal => CvcStatus::KindMismatch,
        CvcError::NotApplicable(_) => CvcStatus::NotApplicable,
        CvcError::ChainMismatch(_) => CvcStatus::ChainMismatch,
        CvcError::InvalidParameter(_) | CvcError::Degree(_) | CvcError::BudgetExceeded { .. } => {
            CvcStatus::InvalidParameter
        }
        CvcError::InvalidDecomposition(_) => CvcStatus::Internal,
    }
}

/// Runs `f`, recording the error message and turning panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<CvcStatus, (CvcStatus, String)>) -> CvcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            CvcStatus::Internal
        }
    }
}

fn fail(e: CvcError) -> (CvcStatus, String) {
    (status_of(&e), e.to_string())
}

fn null() -> (CvcStatus, String) {
    (CvcStatus::NullPointer, "null pointer argument".into())
}

unsafe fn slice<'a, T>(p: *const T, len: usize) -> Result<&'a [T], (CvcStatus, String)> {
    if len == 0 {
        Ok(&[])
    } else if p.is_null() {
        Err(null())
    } else {
        Ok(std::slice::from_raw_parts(p, len))
    }
}

unsafe fn out<T>(dst: *mut *mut T, value: T) {
    *dst = Box::into_raw(Box::new(value));
}

fn to_set(vs: &[u32], n: usize) -> Result<VertexSet, (CvcStatus, String)> {
    vs.iter()
        .map(|&v| {
            let v = v as usize;
            if v < n {
                Ok(v)
            } else {
                Err(fail(CvcError::VertexOutOfRange { vertex: v, n }))
            }
        })
        .collect()
}

fn from_set(s: &VertexSet) -> CvcVertexSet {
    CvcVertexSet(s.iter().map(|&v| v as u32).collect())
}

fn instance(g: &Graph, kind: CvcKind, modulator: &[u32]) -> Result<Instance, (CvcStatus, String)> {
    let s = to_set(modulator, g.n())?;
    let inst = match kind {
        CvcKind::CliqueCover => {
            let found = find_clique_cover_of(g, &s, g.n())
                .ok_or_else(|| fail(CvcError::KindMismatch("no clique cover".into())))?;
            Instance::with_cover(g.clone(), s, found.cover)
        }
        _ => Instance::new(g.clone(), s, kind.into()),
    }
    .map_err(fail)?;
    inst.check().map_err(fail)?;
    Ok(inst)
}

/// Message for the last failed call on this thread. Valid until the next
/// call that fails; empty if none has.
#[no_mangle]
pub extern "C" fn cvc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a graph on `n` vertices from `m` edges given as `2m` endpoints.
///
/// # Safety
/// `edges` must point to `2 * m` readable values (may be null when `m == 0`),
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cvc_graph_new(
    n: usize,
    edges: *const u32,
    m: usize,
    out_graph: *mut *mut CvcGraph,
) -> CvcStatus {
    guard(|| {
        if out_graph.is_null() {
            return Err(null());
        }
        let ends = slice(edges, 2 * m)?;
        let g = Graph::from_edges(n, ends.chunks(2).map(|e| (e[0] as usize, e[1] as usize)))
            .map_err(fail)?;
        out(out_graph, CvcGraph(g));
        Ok(CvcStatus::Ok)
    })
}

/// Parses a DIMACS edge list (`p edge n m` then `e u v`, 1-indexed).
///
/// # Safety
/// `text` must be a NUL-terminated string, `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cvc_graph_from_dimacs(
    text: *const c_char,
    out_graph: *mut *mut CvcGraph,
) -> CvcStatus {
    guard(|| {
        if text.is_null() || out_graph.is_null() {
            return Err(null());
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| (CvcStatus::Parse, "input is not UTF-8".to_string()))?;
        out(out_graph, CvcGraph(parse_dimacs(s).map_err(fail)?));
        Ok(CvcStatus::Ok)
    })
}

/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn cvc_graph_vertex_count(g: *const CvcGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n())
}

/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn cvc_graph_edge_count(g: *const CvcGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.m())
}

/// # Safety
/// `g` must come from this library and not be used afterwards. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn cvc_graph_free(g: *mut CvcGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Whether `len` vertices form a connected vertex cover of `g`. Returns 1,
/// 0, or a negative status on bad input.
///
/// # Safety
/// `g` must be live, `vertices` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn cvc_is_connected_vertex_cover(
    g: *const CvcGraph,
    vertices: *const u32,
    len: usize,
) -> i32 {
    let mut answer = 0;
    let status = guard(|| {
        let g = g.as_ref().ok_or_else(null)?;
        let set = to_set(slice(vertices, len)?, g.0.n())?;
        answer = g.0.is_cvc(&set) as i32;
        Ok(CvcStatus::Ok)
    });
    if status == CvcStatus::Ok {
        answer
    } else {
        status as i32
    }
}

/// Minimum connected vertex cover of `g` given a modulator `S` such that
/// `G - S` is in class `kind`. With `ell >= 0` only covers of at most `ell`
/// vertices count, and `Infeasible` is returned when none exists.
///
/// # Safety
/// `g` must be live, `modulator` must hold `len` values, `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cvc_solve(
    g: *const CvcGraph,
    kind: CvcKind,
    modulator: *const u32,
    len: usize,
    ell: i64,
    out_cover: *mut *mut CvcVertexSet,
) -> CvcStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(null)?;
        if out_cover.is_null() {
            return Err(null());
        }
        *out_cover = ptr::null_mut();
        let inst = instance(&g.0, kind, slice(modulator, len)?)?;
        let ell = usize::try_from(ell).ok();
        match solve(&inst, ell).map_err(fail)?.cover {
            Some(c) => {
                out(out_cover, from_set(&c));
                Ok(CvcStatus::Ok)
            }
            None => Ok(CvcStatus::Infeasible),
        }
    })
}

/// # Safety
/// `s` must be a live vertex-set handle.
#[no_mangle]
pub unsafe extern "C" fn cvc_vertex_set_len(s: *const CvcVertexSet) -> usize {
    s.as_ref().map_or(0, |s| s.0.len())
}

/// Borrowed pointer to the sorted vertices, valid while `s` lives.
///
/// # Safety
/// `s` must be a live vertex-set handle.
#[no_mangle]
pub unsafe extern "C" fn cvc_vertex_set_data(s: *const CvcVertexSet) -> *const u32 {
    s.as_ref().map_or(ptr::null(), |s| s.0.as_ptr())
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn cvc_vertex_set_free(s: *mut CvcVertexSet) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Approximate kernel with ratio `alpha_num / alpha_den > 1`. `k < 0` uses
/// the modulator size (or the cover size for `CliqueCover` with empty `S`).
///
/// # Safety
/// As for [`cvc_solve`].
#[no_mangle]
pub unsafe extern "C" fn cvc_kernelize(
    g: *const CvcGraph,
    kind: CvcKind,
    modulator: *const u32,
    len: usize,
    k: i64,
    alpha_num: i64,
    alpha_den: i64,
    out_kernel: *mut *mut CvcKernel,
) -> CvcStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(null)?;
        if out_kernel.is_null() {
            return Err(null());
        }
        if alpha_den <= 0 {
            return Err(fail(CvcError::InvalidParameter(
                "alpha denominator must be positive".into(),
            )));
        }
        let params = AlphaParams::new(Rational::new(alpha_num, alpha_den)).map_err(fail)?;
        let inst = instance(&g.0, kind, slice(modulator, len)?)?;
        let kernel = kernelize(&inst, usize::try_from(k).ok(), params).map_err(fail)?;
        out(
            out_kernel,
            CvcKernel {
                kernel,
                original_n: g.0.n(),
            },
        );
        Ok(CvcStatus::Ok)
    })
}

/// Copy of the reduced graph.
///
/// # Safety
/// `kern` must be live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cvc_kernel_graph(
    kern: *const CvcKernel,
    out_graph: *mut *mut CvcGraph,
) -> CvcStatus {
    guard(|| {
        let kern = kern.as_ref().ok_or_else(null)?;
        if out_graph.is_null() {
            return Err(null());
        }
        out(out_graph, CvcGraph(kern.kernel.reduced.graph.clone()));
        Ok(CvcStatus::Ok)
    })
}

/// Modulator of the reduced instance.
///
/// # Safety
/// `kern` must be live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cvc_kernel_modulator(
    kern: *const CvcKernel,
    out_set: *mut *mut CvcVertexSet,
) -> CvcStatus {
    guard(|| {
        let kern = kern.as_ref().ok_or_else(null)?;
        if out_set.is_null() {
            return Err(null());
        }
        out(out_set, from_set(&kern.kernel.reduced.modulator));
        Ok(CvcStatus::Ok)
    })
}

/// Proven upper bound on the reduced vertex count.
///
/// # Safety
/// `kern` must be live.
#[no_mangle]
pub unsafe extern "C" fn cvc_kernel_size_bound(kern: *const CvcKernel) -> u64 {
    kern.as_ref().map_or(0, |k| {
        u64::try_from(k.kernel.certificate.bound).unwrap_or(u64::MAX)
    })
}

/// Maps a connected vertex cover of the reduced graph to one of the
/// original graph.
///
/// # Safety
/// `kern` must be live, `solution` must hold `len` values, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cvc_kernel_lift(
    kern: *const CvcKernel,
    solution: *const u32,
    len: usize,
    out_cover: *mut *mut CvcVertexSet,
) -> CvcStatus {
    guard(|| {
        let kern = kern.as_ref().ok_or_else(null)?;
        if out_cover.is_null() {
            return Err(null());
        }
        let reduced = &kern.kernel.reduced.graph;
        let d = to_set(slice(solution, len)?, reduced.n())?;
        if !reduced.is_cvc(&d) {
            return Err(fail(CvcError::InvalidParameter(
                "solution is not a connected vertex cover of the reduced graph".into(),
            )));
        }
        let lifted = kern.kernel.lift(&d).map_err(fail)?;
        debug_assert!(lifted.iter().all(|&v| v < kern.original_n));
        out(out_cover, from_set(&lifted));
        Ok(CvcStatus::Ok)
    })
}

/// # Safety
/// `kern` must come from this library and not be used afterwards. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn cvc_kernel_free(kern: *mut CvcKernel) {
    if !kern.is_null() {
        drop(Box::from_raw(kern));
    }
}
