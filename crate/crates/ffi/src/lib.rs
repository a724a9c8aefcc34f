//! C ABI over the workbench.
//!
//! Handles are opaque and owned by the caller; free each with its `_free`
//! function. Every entry point returns a [`VgrpStatus`]. On failure the
//! message is available from [`vgrp_last_error`] on the same thread until
//! the next call. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use vgrp::document::load_str;
use vgrp::factorization::{classify_morphism, is_covering};
use vgrp::torsion::torsion_part;
use vgrp::vgroup::classify_object;
use vgrp::{BuiltinQuantale, Elem, Error, FiniteGroup, Quantale, VGroup, VHom};

/// Status codes. The first four match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VgrpStatus {
    Ok = 0,
    TheoremCheck = 1,
    Input = 2,
    Capacity = 3,
    NullPointer = 4,
    Panic = 5,
}

/// Builtin quantale families.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VgrpQuantaleKind {
    Boolean = 0,
    LawvereChain = 1,
    UltrametricChain = 2,
}

pub struct VgrpQuantale(Arc<Quantale>);

pub struct VgrpObject(Arc<VGroup>);

pub struct VgrpHom(VHom);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VgrpObjectClass {
    pub indiscrete: bool,
    pub separated: bool,
    pub symmetric: bool,
    pub discrete: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VgrpMorphismClass {
    pub in_e: bool,
    pub in_m: bool,
    pub in_e_prime: bool,
    pub in_m_star: bool,
    pub covering: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> VgrpStatus {
    match e.exit_code() {
        1 => VgrpStatus::TheoremCheck,
        3 => VgrpStatus::Capacity,
        _ => VgrpStatus::Input,
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), VgrpStatus>) -> VgrpStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => VgrpStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            VgrpStatus::Panic
        }
    }
}

fn fail(e: Error) -> VgrpStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn null(what: &str) -> VgrpStatus {
    set_error(format!("{what} is null"));
    VgrpStatus::NullPointer
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, VgrpStatus> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, VgrpStatus> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], VgrpStatus> {
    if len == 0 {
        Ok(&[])
    } else if p.is_null() {
        Err(null(what))
    } else {
        Ok(std::slice::from_raw_parts(p, len))
    }
}

unsafe fn string<'a>(p: *const c_char, what: &str) -> Result<&'a str, VgrpStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| fail(Error::Structural(format!("{what}: {e}"))))
}

/// The last error message on this thread, or null. Owned by the library.
#[no_mangle]
pub extern "C" fn vgrp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn vgrp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vgrp_quantale_builtin(
    kind: VgrpQuantaleKind,
    m: u16,
    out_q: *mut *mut VgrpQuantale,
) -> VgrpStatus {
    guard(|| {
        let slot = out(out_q, "out")?;
        let spec = match kind {
            VgrpQuantaleKind::Boolean => BuiltinQuantale::Boolean,
            VgrpQuantaleKind::LawvereChain => BuiltinQuantale::LawvereChain { m },
            VgrpQuantaleKind::UltrametricChain => BuiltinQuantale::UltrametricChain { m },
        };
        let q = Quantale::builtin(spec).map_err(fail)?;
        *slot = Box::into_raw(Box::new(VgrpQuantale(Arc::new(q))));
        Ok(())
    })
}

/// # Safety
/// `q` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn vgrp_quantale_free(q: *mut VgrpQuantale) {
    if !q.is_null() {
        drop(Box::from_raw(q));
    }
}

/// Number of elements; labels are `0..size` in the builtin order.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn vgrp_quantale_size(q: *const VgrpQuantale, out_size: *mut usize) -> VgrpStatus {
    guard(|| {
        *out(out_size, "out")? = deref(q, "quantale")?.0.size();
        Ok(())
    })
}

/// The object on the cyclic group of order `n` with `a(x, y) = delta[y - x]`.
///
/// # Safety
/// `delta` must point to `n` readable elements; `out_obj` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vgrp_object_cyclic(
    q: *const VgrpQuantale,
    n: usize,
    delta: *const u16,
    out_obj: *mut *mut VgrpObject,
) -> VgrpStatus {
    guard(|| {
        let q = deref(q, "quantale")?;
        let slot = out(out_obj, "out")?;
        if n == 0 {
            return Err(fail(Error::Structural("a group needs at least one element".into())));
        }
        let d: Vec<Elem> = slice(delta, n, "delta")?.iter().map(|&u| Elem(u)).collect();
        let g = VGroup::from_delta(FiniteGroup::cyclic(n), q.0.clone(), &d).map_err(fail)?;
        *slot = Box::into_raw(Box::new(VgrpObject(Arc::new(g))));
        Ok(())
    })
}

/// Loads a workbench document. Relative morphism targets resolve against
/// the working directory.
///
/// # Safety
/// `json` must be a nul-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn vgrp_object_from_document(json: *const c_char, out_obj: *mut *mut VgrpObject) -> VgrpStatus {
    guard(|| {
        let text = string(json, "json")?;
        let slot = out(out_obj, "out")?;
        let doc = load_str(text, None).map_err(fail)?;
        *slot = Box::into_raw(Box::new(VgrpObject(doc.object)));
        Ok(())
    })
}

/// # Safety
/// `g` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn vgrp_object_free(g: *mut VgrpObject) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn vgrp_object_size(g: *const VgrpObject, out_size: *mut usize) -> VgrpStatus {
    guard(|| {
        *out(out_size, "out")? = deref(g, "object")?.0.size();
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn vgrp_object_classify(g: *const VgrpObject, out_class: *mut VgrpObjectClass) -> VgrpStatus {
    guard(|| {
        let g = deref(g, "object")?;
        let slot = out(out_class, "out")?;
        let c = classify_object(&g.0).map_err(fail)?;
        *slot = VgrpObjectClass {
            indiscrete: c.indiscrete,
            separated: c.separated,
            symmetric: c.symmetric,
            discrete: c.discrete,
        };
        Ok(())
    })
}

/// Writes `N_X` into `buf` (sorted) and its length into `out_len`. When
/// `cap` is too small nothing is written to `buf` and the status is
/// `Input`; `out_len` still receives the required length.
///
/// # Safety
/// `buf` must have room for `cap` elements.
#[no_mangle]
pub unsafe extern "C" fn vgrp_object_torsion_part(
    g: *const VgrpObject,
    buf: *mut usize,
    cap: usize,
    out_len: *mut usize,
) -> VgrpStatus {
    guard(|| {
        let g = deref(g, "object")?;
        let len = out(out_len, "out_len")?;
        let n = torsion_part(&g.0).map_err(fail)?;
        *len = n.len();
        if cap < n.len() {
            return Err(fail(Error::Structural(format!("buffer holds {cap}, need {}", n.len()))));
        }
        if !n.is_empty() {
            if buf.is_null() {
                return Err(null("buf"));
            }
            std::slice::from_raw_parts_mut(buf, n.len()).copy_from_slice(&n);
        }
        Ok(())
    })
}

/// A validated morphism. `map` has one entry per element of `dom`.
///
/// # Safety
/// `map` must point to `len` readable elements.
#[no_mangle]
pub unsafe extern "C" fn vgrp_hom_new(
    dom: *const VgrpObject,
    cod: *const VgrpObject,
    map: *const usize,
    len: usize,
    out_hom: *mut *mut VgrpHom,
) -> VgrpStatus {
    guard(|| {
        let (d, c) = (deref(dom, "dom")?, deref(cod, "cod")?);
        let slot = out(out_hom, "out")?;
        let map = slice(map, len, "map")?;
        if map.len() != d.0.size() || map.iter().any(|&y| y >= c.0.size()) {
            return Err(fail(Error::DimensionMismatch("map does not fit dom and cod".into())));
        }
        let f = VHom::new(d.0.clone(), c.0.clone(), map.to_vec()).map_err(fail)?;
        *slot = Box::into_raw(Box::new(VgrpHom(f)));
        Ok(())
    })
}

/// # Safety
/// `f` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn vgrp_hom_free(f: *mut VgrpHom) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn vgrp_hom_is_covering(f: *const VgrpHom, out_covering: *mut bool) -> VgrpStatus {
    guard(|| {
        let f = deref(f, "hom")?;
        *out(out_covering, "out")? = is_covering(&f.0).map_err(fail)?;
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn vgrp_hom_classify(f: *const VgrpHom, out_class: *mut VgrpMorphismClass) -> VgrpStatus {
    guard(|| {
        let f = deref(f, "hom")?;
        let slot = out(out_class, "out")?;
        let r = classify_morphism(&f.0).map_err(fail)?;
        *slot = VgrpMorphismClass {
            in_e: r.in_e.holds,
            in_m: r.in_m.holds,
            in_e_prime: r.in_e_prime.holds,
            in_m_star: r.in_m_star.holds,
            covering: r.covering,
        };
        Ok(())
    })
}

/// Runs the command line in-process. `args_json` is a JSON array of
/// argument strings without the program name. The command's standard
/// output is returned in `out_stdout` (free with [`vgrp_string_free`]) and
/// its exit code in `out_exit`. The status reflects the call itself, not
/// the exit code.
///
/// # Safety
/// `args_json` must be a nul-terminated UTF-8 string; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn vgrp_run_json(
    args_json: *const c_char,
    out_stdout: *mut *mut c_char,
    out_exit: *mut i32,
) -> VgrpStatus {
    guard(|| {
        let text = string(args_json, "args_json")?;
        let (so, ex) = (out(out_stdout, "out_stdout")?, out(out_exit, "out_exit")?);
        let args: Vec<String> = serde_json::from_str(text).map_err(|e| fail(e.into()))?;
        let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
        let code = vgrp::cli::run(std::iter::once("vgrp".to_string()).chain(args), &mut stdout, &mut stderr);
        if code != 0 {
            set_error(String::from_utf8_lossy(&stderr).trim_end().to_string());
        }
        let s = CString::new(stdout).map_err(|e| fail(Error::Structural(e.to_string())))?;
        *so = s.into_raw();
        *ex = code;
        Ok(())
    })
}
