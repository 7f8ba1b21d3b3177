//! C ABI over `symmec`.
//!
//! Models and results are opaque handles released with their `_free`
//! function. Every fallible call returns a [`SymmecStatus`]; on failure
//! [`symmec_last_error`] describes the problem. Output pointers are written
//! only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use symmec::explicit::ExplicitMdp;
use symmec::io::parse_mdp;
use symmec::mec::{default_gamma, mec_decomposition, MecAlgorithm};
use symmec::objectives::{asw_parity, sym_as_reach, PriorityMap};
use symmec::symbolic::{Backend, SymbolicMdp, VertexId};
use symmec::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmecStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    Parse = 3,
    Validation = 4,
    OutOfRange = 5,
    Invariant = 6,
    Io = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmecAlgo {
    Separator = 0,
    Classical = 1,
}

/// An MDP with optional priorities.
pub struct SymmecMdp {
    g: ExplicitMdp,
}

/// Non-trivial MECs, each sorted, listed by smallest member.
pub struct SymmecMecs {
    mecs: Vec<Vec<u32>>,
    ops: u64,
}

/// A sorted vertex list (a winning region).
pub struct SymmecVertexList {
    ids: Vec<u32>,
    ops: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: SymmecStatus, msg: impl Into<String>) -> SymmecStatus {
    set_error(msg.into());
    status
}

fn status_of(e: &Error) -> SymmecStatus {
    match e {
        Error::Parse { .. } => SymmecStatus::Parse,
        Error::Validation(_) => SymmecStatus::Validation,
        Error::VertexOutOfRange { .. } => SymmecStatus::OutOfRange,
        Error::Io(_) => SymmecStatus::Io,
        Error::Invariant(_) | Error::Contract(_) | Error::UniverseMismatch { .. } | Error::EmptyPick => {
            SymmecStatus::Invariant
        }
    }
}

fn guard(f: impl FnOnce() -> Result<(), SymmecStatus>) -> SymmecStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SymmecStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(SymmecStatus::Panic, "internal panic"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, SymmecStatus>;
}

impl<T> OrStatus<T> for symmec::Result<T> {
    fn or_status(self) -> Result<T, SymmecStatus> {
        self.map_err(|e| fail(status_of(&e), e.to_string()))
    }
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), SymmecStatus> {
    if p.is_null() {
        Err(fail(SymmecStatus::NullArgument, format!("`{name}` is null")))
    } else {
        Ok(())
    }
}

fn algorithm(algo: SymmecAlgo, gamma: usize, n: usize) -> MecAlgorithm {
    match algo {
        SymmecAlgo::Classical => MecAlgorithm::Classical,
        SymmecAlgo::Separator if gamma == 0 => MecAlgorithm::Separator {
            gamma: default_gamma(n),
        },
        SymmecAlgo::Separator => MecAlgorithm::Separator { gamma },
    }
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn symmec_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses an MDP in the text format from a NUL-terminated string.
///
/// # Safety
/// `text` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symmec_mdp_parse(text: *const c_char, out: *mut *mut SymmecMdp) -> SymmecStatus {
    guard(|| {
        non_null(text, "text")?;
        non_null(out, "out")?;
        let s = unsafe { CStr::from_ptr(text) }
            .to_str()
            .map_err(|_| fail(SymmecStatus::Parse, "input is not UTF-8"))?;
        let g = parse_mdp(s).or_status()?;
        unsafe { *out = Box::into_raw(Box::new(SymmecMdp { g })) };
        Ok(())
    })
}

/// Builds an MDP from `n` player flags (`random[v] != 0` marks a random
/// vertex) and `m` edges given as `2·m` ids `u0 v0 u1 v1 …`.
///
/// # Safety
/// `random` must point to `n` bytes, `edges` to `2·m` integers.
#[no_mangle]
pub unsafe extern "C" fn symmec_mdp_from_edges(
    n: usize,
    random: *const u8,
    edges: *const u32,
    m: usize,
    out: *mut *mut SymmecMdp,
) -> SymmecStatus {
    guard(|| {
        non_null(random, "random")?;
        non_null(out, "out")?;
        if m > 0 {
            non_null(edges, "edges")?;
        }
        if n == 0 {
            return Err(fail(SymmecStatus::InvalidArgument, "an MDP needs at least one vertex"));
        }
        let flags = unsafe { std::slice::from_raw_parts(random, n) };
        let pairs = if m == 0 {
            &[][..]
        } else {
            unsafe { std::slice::from_raw_parts(edges, 2 * m) }
        };
        let mut list = Vec::with_capacity(m);
        for e in pairs.chunks_exact(2) {
            let (u, v) = (e[0] as usize, e[1] as usize);
            if u >= n || v >= n {
                return Err(fail(
                    SymmecStatus::OutOfRange,
                    format!("edge {u} -> {v} outside 0..{n}"),
                ));
            }
            list.push((u, v));
        }
        let g = ExplicitMdp::from_edges(n, flags.iter().map(|&f| f != 0).collect(), list);
        g.validate().or_status()?;
        unsafe { *out = Box::into_raw(Box::new(SymmecMdp { g })) };
        Ok(())
    })
}

/// Attaches one priority per vertex (needed by [`symmec_parity`]).
///
/// # Safety
/// `mdp` must be a live handle and `priorities` point to `n` integers.
#[no_mangle]
pub unsafe extern "C" fn symmec_mdp_set_priorities(
    mdp: *mut SymmecMdp,
    priorities: *const u32,
    n: usize,
) -> SymmecStatus {
    guard(|| {
        non_null(mdp, "mdp")?;
        non_null(priorities, "priorities")?;
        let mdp = unsafe { &mut *mdp };
        if n != mdp.g.n() {
            return Err(fail(
                SymmecStatus::InvalidArgument,
                format!("{n} priorities for {} vertices", mdp.g.n()),
            ));
        }
        let pr = unsafe { std::slice::from_raw_parts(priorities, n) }.to_vec();
        mdp.g = mdp.g.clone().with_priorities(pr);
        Ok(())
    })
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `mdp` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn symmec_mdp_vertex_count(mdp: *const SymmecMdp) -> usize {
    unsafe { mdp.as_ref() }.map_or(0, |m| m.g.n())
}

/// # Safety
/// `mdp` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn symmec_mdp_free(mdp: *mut SymmecMdp) {
    if !mdp.is_null() {
        drop(unsafe { Box::from_raw(mdp) });
    }
}

/// MEC decomposition. `gamma = 0` selects the default separator parameter;
/// it is ignored by the classical algorithm.
///
/// # Safety
/// `mdp` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symmec_mec(
    mdp: *const SymmecMdp,
    algo: SymmecAlgo,
    gamma: usize,
    out: *mut *mut SymmecMecs,
) -> SymmecStatus {
    guard(|| {
        non_null(mdp, "mdp")?;
        non_null(out, "out")?;
        let g = unsafe { &(*mdp).g };
        let p = SymbolicMdp::from_explicit(g, Backend::BitVector).or_status()?;
        p.universe().meter_reset();
        let (d, _) = mec_decomposition(&p, algorithm(algo, gamma, g.n())).or_status()?;
        let ops = p.universe().meter_snapshot().total_ops();
        let mecs = d.mecs.iter().map(|m| m.iter().map(|v| v.0).collect()).collect();
        unsafe { *out = Box::into_raw(Box::new(SymmecMecs { mecs, ops })) };
        Ok(())
    })
}

/// # Safety
/// `mecs` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn symmec_mecs_count(mecs: *const SymmecMecs) -> usize {
    unsafe { mecs.as_ref() }.map_or(0, |m| m.mecs.len())
}

/// Symbolic operations used to compute the decomposition.
///
/// # Safety
/// `mecs` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn symmec_mecs_ops(mecs: *const SymmecMecs) -> u64 {
    unsafe { mecs.as_ref() }.map_or(0, |m| m.ops)
}

/// Borrows MEC `index`; the ids stay valid until the handle is freed.
///
/// # Safety
/// `mecs` must be a live handle; `ids` and `len` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn symmec_mecs_get(
    mecs: *const SymmecMecs,
    index: usize,
    ids: *mut *const u32,
    len: *mut usize,
) -> SymmecStatus {
    guard(|| {
        non_null(mecs, "mecs")?;
        non_null(ids, "ids")?;
        non_null(len, "len")?;
        let mecs = unsafe { &*mecs };
        let m = mecs.mecs.get(index).ok_or_else(|| {
            fail(
                SymmecStatus::OutOfRange,
                format!("MEC index {index} out of range 0..{}", mecs.mecs.len()),
            )
        })?;
        unsafe {
            *ids = m.as_ptr();
            *len = m.len();
        }
        Ok(())
    })
}

/// # Safety
/// `mecs` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn symmec_mecs_free(mecs: *mut SymmecMecs) {
    if !mecs.is_null() {
        drop(unsafe { Box::from_raw(mecs) });
    }
}

/// Vertices that reach the `len` targets almost surely.
///
/// # Safety
/// `mdp` must be a live handle, `targets` point to `len` ids (may be null
/// when `len` is 0) and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symmec_asreach(
    mdp: *const SymmecMdp,
    targets: *const u32,
    len: usize,
    algo: SymmecAlgo,
    gamma: usize,
    out: *mut *mut SymmecVertexList,
) -> SymmecStatus {
    guard(|| {
        non_null(mdp, "mdp")?;
        non_null(out, "out")?;
        if len > 0 {
            non_null(targets, "targets")?;
        }
        let g = unsafe { &(*mdp).g };
        let ts = if len == 0 {
            &[][..]
        } else {
            unsafe { std::slice::from_raw_parts(targets, len) }
        };
        let p = SymbolicMdp::from_explicit(g, Backend::BitVector).or_status()?;
        let t = p.universe().from_ids(ts.iter().map(|&v| VertexId(v))).or_status()?;
        p.universe().meter_reset();
        let region = sym_as_reach(&p, &t, algorithm(algo, gamma, g.n())).or_status()?;
        let ops = p.universe().meter_snapshot().total_ops();
        let ids = region.ids().into_iter().map(|v| v.0).collect();
        unsafe { *out = Box::into_raw(Box::new(SymmecVertexList { ids, ops })) };
        Ok(())
    })
}

/// Almost-sure winning set of the parity objective given by the priorities.
///
/// # Safety
/// `mdp` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symmec_parity(
    mdp: *const SymmecMdp,
    algo: SymmecAlgo,
    gamma: usize,
    out: *mut *mut SymmecVertexList,
) -> SymmecStatus {
    guard(|| {
        non_null(mdp, "mdp")?;
        non_null(out, "out")?;
        let g = unsafe { &(*mdp).g };
        let Some(pr) = g.priorities() else {
            return Err(fail(SymmecStatus::InvalidArgument, "the MDP has no priorities"));
        };
        let p = SymbolicMdp::from_explicit(g, Backend::BitVector).or_status()?;
        let pm = PriorityMap::new(p.universe(), pr.to_vec()).or_status()?;
        p.universe().meter_reset();
        let (region, _) = asw_parity(&pm, &p, algorithm(algo, gamma, g.n())).or_status()?;
        let ops = p.universe().meter_snapshot().total_ops();
        let ids = region.ids().into_iter().map(|v| v.0).collect();
        unsafe { *out = Box::into_raw(Box::new(SymmecVertexList { ids, ops })) };
        Ok(())
    })
}

/// # Safety
/// `list` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn symmec_list_len(list: *const SymmecVertexList) -> usize {
    unsafe { list.as_ref() }.map_or(0, |l| l.ids.len())
}

/// The ids, valid until the handle is freed; null for a null handle.
///
/// # Safety
/// `list` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn symmec_list_data(list: *const SymmecVertexList) -> *const u32 {
    unsafe { list.as_ref() }.map_or(ptr::null(), |l| l.ids.as_ptr())
}

/// # Safety
/// `list` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn symmec_list_ops(list: *const SymmecVertexList) -> u64 {
    unsafe { list.as_ref() }.map_or(0, |l| l.ops)
}

/// # Safety
/// `list` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn symmec_list_free(list: *mut SymmecVertexList) {
    if !list.is_null() {
        drop(unsafe { Box::from_raw(list) });
    }
}
