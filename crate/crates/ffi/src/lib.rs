//! C ABI over the `fspt` simulators.
//!
//! Every fallible call returns an [`FsptStatus`]; results travel through out
//! pointers. After a failure, [`fspt_last_error`] describes it.
//! Simulators are opaque handles released with [`fspt_simulator_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fspt::analysis::{make_engine, pi_mode_at, Engine, EngineKind};
use fspt::cohomology::{fspt_count as count, AbelianGroup};
use fspt::model::{FloquetParams, ProductState, Sign};
use fspt::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FsptStatus {
    Ok = 0,
    NullPointer = 1,
    OutOfRange = 2,
    Capacity = 3,
    Numeric = 4,
    InvalidArgument = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FsptEngine {
    Fermion = 0,
    Statevector = 1,
}

/// A kicked Ising chain evolving under one of the two engines.
pub struct FsptSimulator {
    engine: Box<dyn Engine>,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> FsptStatus {
    match e {
        Error::OutOfRange { .. } | Error::DimensionMismatch { .. } => FsptStatus::OutOfRange,
        Error::Capacity { .. } => FsptStatus::Capacity,
        Error::Numeric(_) | Error::Invariant(_) => FsptStatus::Numeric,
        _ => FsptStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), FsptStatus>) -> FsptStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FsptStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside fspt".into());
            FsptStatus::Panic
        }
    }
}

fn fail(e: Error) -> FsptStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

fn null(what: &str) -> FsptStatus {
    set_error(format!("{what} is null"));
    FsptStatus::NullPointer
}

/// Creates a simulator of `sites` sites in a product X eigenstate. `signs`
/// holds `sites` entries of `+1` or `-1`; NULL means all `+1`.
///
/// # Safety
/// `signs` is NULL or points to `sites` readable bytes; `out` is a valid
/// pointer to write a handle to.
#[no_mangle]
pub unsafe extern "C" fn fspt_simulator_new(
    engine: FsptEngine,
    sites: usize,
    signs: *const i8,
    out: *mut *mut FsptSimulator,
) -> FsptStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if sites == 0 {
            return Err(fail(Error::Domain("sites must be positive".into())));
        }
        let init = if signs.is_null() {
            ProductState::all_plus(sites)
        } else {
            let raw = std::slice::from_raw_parts(signs, sites);
            let signs = raw
                .iter()
                .map(|&s| match s {
                    1 => Ok(Sign::Plus),
                    -1 => Ok(Sign::Minus),
                    other => Err(fail(Error::Domain(format!("sign {other} is not ±1")))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            ProductState::new(signs).map_err(fail)?
        };
        let kind = match engine {
            FsptEngine::Fermion => EngineKind::Fermion,
            FsptEngine::Statevector => EngineKind::Statevector,
        };
        let engine = make_engine(kind, &init).map_err(fail)?;
        *out = Box::into_raw(Box::new(FsptSimulator { engine }));
        Ok(())
    })
}

/// Releases a simulator. NULL is ignored.
///
/// # Safety
/// `sim` is NULL or a handle from [`fspt_simulator_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fspt_simulator_free(sim: *mut FsptSimulator) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Number of sites.
///
/// # Safety
/// `sim` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn fspt_simulator_sites(
    sim: *const FsptSimulator,
    out: *mut usize,
) -> FsptStatus {
    guard(|| {
        let sim = sim.as_ref().ok_or_else(|| null("sim"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = sim.engine.sites();
        Ok(())
    })
}

/// Applies one period `F = U_ZZ(beta) U_X(alpha)`.
///
/// # Safety
/// `sim` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn fspt_simulator_step(
    sim: *mut FsptSimulator,
    alpha: f64,
    beta: f64,
) -> FsptStatus {
    guard(|| {
        let sim = sim.as_mut().ok_or_else(|| null("sim"))?;
        let p = FloquetParams::new(alpha, beta, sim.engine.sites()).map_err(fail)?;
        sim.engine.apply(&p).map_err(fail)
    })
}

/// Probability that the leftmost `l_a` sites have even parity.
///
/// # Safety
/// `sim` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn fspt_simulator_s1_even(
    sim: *const FsptSimulator,
    l_a: usize,
    out: *mut f64,
) -> FsptStatus {
    guard(|| {
        let sim = sim.as_ref().ok_or_else(|| null("sim"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = sim.engine.s1_even(l_a).map_err(fail)?;
        Ok(())
    })
}

/// `⟨X_site⟩`, sites counted from zero.
///
/// # Safety
/// `sim` is a live handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn fspt_simulator_x_expectation(
    sim: *const FsptSimulator,
    site: usize,
    out: *mut f64,
) -> FsptStatus {
    guard(|| {
        let sim = sim.as_ref().ok_or_else(|| null("sim"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let l = sim.engine.sites();
        if site >= l {
            return Err(fail(Error::OutOfRange {
                what: "site",
                value: site as i64,
                range: format!("0..{l}"),
            }));
        }
        *out = sim.engine.x_expectations()[site];
        Ok(())
    })
}

/// The π-mode quasienergy of one period at `(alpha, beta)`.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn fspt_pi_mode_gap(
    alpha: f64,
    beta: f64,
    sites: usize,
    out: *mut f64,
) -> FsptStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        if sites == 0 {
            return Err(fail(Error::Domain("sites must be positive".into())));
        }
        let p = FloquetParams::new(alpha, beta, sites).map_err(fail)?;
        *out = pi_mode_at(&p).map_err(fail)?;
        Ok(())
    })
}

/// For `G = Z_{orders[0]} × ⋯`, writes the number of static SPT classes
/// and of Floquet SPT classes.
///
/// # Safety
/// `orders` points to `rank` readable values; the out pointers are writable.
#[no_mangle]
pub unsafe extern "C" fn fspt_count(
    orders: *const usize,
    rank: usize,
    out_static: *mut usize,
    out_floquet: *mut usize,
) -> FsptStatus {
    guard(|| {
        if orders.is_null() && rank > 0 {
            return Err(null("orders"));
        }
        let out_static = out_static.as_mut().ok_or_else(|| null("out_static"))?;
        let out_floquet = out_floquet.as_mut().ok_or_else(|| null("out_floquet"))?;
        let orders = if rank == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(orders, rank).to_vec()
        };
        let g = AbelianGroup::new(orders).map_err(fail)?;
        let (h2, total) = count(&g);
        *out_static = h2;
        *out_floquet = total;
        Ok(())
    })
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn fspt_status_str(status: FsptStatus) -> *const c_char {
    let s: &'static CStr = match status {
        FsptStatus::Ok => c"ok",
        FsptStatus::NullPointer => c"null pointer",
        FsptStatus::OutOfRange => c"argument out of range",
        FsptStatus::Capacity => c"engine capacity exceeded",
        FsptStatus::Numeric => c"numeric invariant violated",
        FsptStatus::InvalidArgument => c"invalid argument",
        FsptStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Copies the calling thread's last error message, NUL-terminated and
/// truncated to `cap` bytes, into `buf`. Returns the full message length.
/// `buf` may be NULL to query the length.
///
/// # Safety
/// `buf` is NULL or points to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn fspt_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}
