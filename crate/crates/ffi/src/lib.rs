//! C ABI over `unitlab`.
//!
//! Points cross the boundary as `n * d` row-major `int64_t` numerators over
//! one positive denominator. Every call returns a `UL_*` status; on failure
//! `ul_last_error` holds a message for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use unitlab::adversaries::GameMode;
use unitlab::algorithms::{Centered, FirstFitCover, Greedy, Grid, OnlineClustering, OnlineCovering, ReweighState};
use unitlab::geometry::{LatticePoint, Point};
use unitlab::harness::{duel, Adversary, AlgName, DuelParams};
use unitlab::{oracle, Error};

pub const UL_OK: i32 = 0;
pub const UL_ERR_NULL: i32 = 1;
pub const UL_ERR_INVALID: i32 = 2;
pub const UL_ERR_DIMENSION: i32 = 3;
pub const UL_ERR_NOT_LATTICE: i32 = 4;
pub const UL_ERR_PROTOCOL: i32 = 5;
pub const UL_ERR_INVARIANT: i32 = 6;
pub const UL_ERR_ORACLE_LIMIT: i32 = 7;
pub const UL_ERR_INTERNAL: i32 = 8;

pub const UL_ALG_GRID: u32 = 0;
pub const UL_ALG_GREEDY: u32 = 1;
pub const UL_ALG_CENTERED: u32 = 2;
pub const UL_ALG_FIRSTFIT: u32 = 3;
pub const UL_ALG_MALICIOUS: u32 = 5;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> i32 {
    match e {
        Error::DimensionMismatch { .. } => UL_ERR_DIMENSION,
        Error::NotLattice(_) => UL_ERR_NOT_LATTICE,
        Error::Protocol(_) => UL_ERR_PROTOCOL,
        Error::Invariant(_) => UL_ERR_INVARIANT,
        Error::OracleLimit { .. } => UL_ERR_ORACLE_LIMIT,
        _ => UL_ERR_INVALID,
    }
}

struct Fail(i32, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(UL_ERR_NULL, format!("{what} is null"))
}

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            UL_OK
        }
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            UL_ERR_INTERNAL
        }
    }
}

unsafe fn read_points(nums: *const i64, n: usize, d: usize, den: i64) -> Result<Vec<Point>, Fail> {
    if d == 0 {
        return Err(Fail(UL_ERR_INVALID, "dimension must be positive".into()));
    }
    if den <= 0 {
        return Err(Fail(UL_ERR_INVALID, format!("denominator must be positive, got {den}")));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if nums.is_null() {
        return Err(null("coordinates"));
    }
    let total = n
        .checked_mul(d)
        .ok_or_else(|| Fail(UL_ERR_INVALID, "n * d overflows".into()))?;
    let raw = std::slice::from_raw_parts(nums, total);
    Ok(raw.chunks(d).map(|c| Point::from_scaled(c, den)).collect())
}

unsafe fn write<T>(out: *mut T, v: T) {
    if !out.is_null() {
        *out = v;
    }
}

/// Last error message on this thread, or null after a successful call.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ul_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Minimum number of closed unit cubes covering the points.
///
/// # Safety
/// `nums` points to `n * d` readable values; `opt` is writable.
#[no_mangle]
pub unsafe extern "C" fn ul_exact_opt(nums: *const i64, n: usize, d: usize, den: i64, opt: *mut usize) -> i32 {
    guard(|| {
        if opt.is_null() {
            return Err(null("opt"));
        }
        let pts = read_points(nums, n, d, den)?;
        *opt = oracle::exact_opt(&pts)?.len();
        Ok(())
    })
}

pub struct UlClusterer(Box<dyn OnlineClustering>);

/// `alg` is `UL_ALG_GRID` or `UL_ALG_GREEDY`.
///
/// # Safety
/// `out` is writable; free the handle with `ul_clusterer_free`.
#[no_mangle]
pub unsafe extern "C" fn ul_clusterer_new(alg: u32, d: usize, out: *mut *mut UlClusterer) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if d == 0 {
            return Err(Fail(UL_ERR_INVALID, "dimension must be positive".into()));
        }
        let inner: Box<dyn OnlineClustering> = match alg {
            UL_ALG_GRID => Box::new(Grid::new(d)),
            UL_ALG_GREEDY => Box::new(Greedy::new(d)),
            other => return Err(Fail(UL_ERR_INVALID, format!("algorithm {other} is not a clusterer"))),
        };
        *out = Box::into_raw(Box::new(UlClusterer(inner)));
        Ok(())
    })
}

/// Inserts one point of the clusterer's dimension.
///
/// # Safety
/// `h` comes from `ul_clusterer_new`; `nums` holds `d` values; `cluster`
/// and `opened` may be null.
#[no_mangle]
pub unsafe extern "C" fn ul_clusterer_insert(
    h: *mut UlClusterer,
    nums: *const i64,
    den: i64,
    cluster: *mut usize,
    opened: *mut bool,
) -> i32 {
    guard(|| {
        let h = h.as_mut().ok_or_else(|| null("handle"))?;
        let p = read_points(nums, 1, h.0.dim(), den)?.remove(0);
        let a = h.0.insert(&p)?;
        write(cluster, a.cluster.0);
        write(opened, a.opened);
        Ok(())
    })
}

/// Clusters opened so far; 0 for a null handle.
///
/// # Safety
/// `h` is null or comes from `ul_clusterer_new`.
#[no_mangle]
pub unsafe extern "C" fn ul_clusterer_count(h: *const UlClusterer) -> usize {
    h.as_ref().map_or(0, |h| h.0.clusters().len())
}

/// # Safety
/// `h` is null or comes from `ul_clusterer_new` and is not used again.
#[no_mangle]
pub unsafe extern "C" fn ul_clusterer_free(h: *mut UlClusterer) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

pub struct UlCoverer(Box<dyn OnlineCovering>);

/// `alg` is `UL_ALG_GRID`, `UL_ALG_CENTERED` or `UL_ALG_FIRSTFIT`.
///
/// # Safety
/// `out` is writable; free the handle with `ul_coverer_free`.
#[no_mangle]
pub unsafe extern "C" fn ul_coverer_new(alg: u32, d: usize, out: *mut *mut UlCoverer) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if d == 0 {
            return Err(Fail(UL_ERR_INVALID, "dimension must be positive".into()));
        }
        let inner: Box<dyn OnlineCovering> = match alg {
            UL_ALG_GRID => Box::new(Grid::new(d)),
            UL_ALG_CENTERED => Box::new(Centered::new(d)),
            UL_ALG_FIRSTFIT => Box::new(FirstFitCover::new(d)),
            other => return Err(Fail(UL_ERR_INVALID, format!("algorithm {other} is not a coverer"))),
        };
        *out = Box::into_raw(Box::new(UlCoverer(inner)));
        Ok(())
    })
}

/// Covers one point; `lo` (may be null) receives the lower corner of its
/// cube as `d` numerators over `den`, which fails if a corner coordinate
/// is not a multiple of `1/den`.
///
/// # Safety
/// `h` comes from `ul_coverer_new`; `nums` holds `d` values; `lo` is null
/// or holds `d` writable values.
#[no_mangle]
pub unsafe extern "C" fn ul_coverer_cover(
    h: *mut UlCoverer,
    nums: *const i64,
    den: i64,
    cube: *mut usize,
    opened: *mut bool,
    lo: *mut i64,
) -> i32 {
    guard(|| {
        let h = h.as_mut().ok_or_else(|| null("handle"))?;
        let d = h.0.dim();
        let p = read_points(nums, 1, d, den)?.remove(0);
        let a = h.0.cover(&p)?;
        if !lo.is_null() {
            let corner = h.0.cubes()[a.cluster.0].cube.lo_point();
            let out = std::slice::from_raw_parts_mut(lo, d);
            for (slot, c) in out.iter_mut().zip(corner.coords()) {
                let scaled = c * unitlab::geometry::int(den);
                if !scaled.is_integer() {
                    return Err(Fail(
                        UL_ERR_INVALID,
                        format!("corner {corner} is not a multiple of 1/{den}"),
                    ));
                }
                *slot = num_traits::ToPrimitive::to_i64(scaled.numer())
                    .ok_or_else(|| Fail(UL_ERR_INVALID, "corner overflows int64".into()))?;
            }
        }
        write(cube, a.cluster.0);
        write(opened, a.opened);
        Ok(())
    })
}

/// Cubes placed so far; 0 for a null handle.
///
/// # Safety
/// `h` is null or comes from `ul_coverer_new`.
#[no_mangle]
pub unsafe extern "C" fn ul_coverer_count(h: *const UlCoverer) -> usize {
    h.as_ref().map_or(0, |h| h.0.cubes().len())
}

/// # Safety
/// `h` is null or comes from `ul_coverer_new` and is not used again.
#[no_mangle]
pub unsafe extern "C" fn ul_coverer_free(h: *mut UlCoverer) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

pub struct UlReweigh(ReweighState);

/// Randomized covering of integer points, seeded.
///
/// # Safety
/// `out` is writable; free the handle with `ul_reweigh_free`.
#[no_mangle]
pub unsafe extern "C" fn ul_reweigh_new(d: usize, seed: u64, out: *mut *mut UlReweigh) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if d == 0 {
            return Err(Fail(UL_ERR_INVALID, "dimension must be positive".into()));
        }
        *out = Box::into_raw(Box::new(UlReweigh(ReweighState::new(d, seed))));
        Ok(())
    })
}

/// Inserts an integer point. `branch` receives 1..=4, `lo` (may be null)
/// the `d` coordinates of the assigned cube's lower corner.
///
/// # Safety
/// `h` comes from `ul_reweigh_new`; `coords` holds `d` values; `lo` is null
/// or holds `d` writable values.
#[no_mangle]
pub unsafe extern "C" fn ul_reweigh_insert(
    h: *mut UlReweigh,
    coords: *const i64,
    branch: *mut u8,
    opened: *mut bool,
    lo: *mut i64,
) -> i32 {
    guard(|| {
        let h = h.as_mut().ok_or_else(|| null("handle"))?;
        if coords.is_null() {
            return Err(null("coords"));
        }
        let d = h.0.dim();
        let p = LatticePoint(std::slice::from_raw_parts(coords, d).to_vec());
        let out = h.0.insert(&p)?;
        if !lo.is_null() {
            std::slice::from_raw_parts_mut(lo, d).copy_from_slice(out.assigned.coords());
        }
        write(branch, out.branch.number());
        write(opened, out.opened);
        Ok(())
    })
}

/// Cubes opened so far; 0 for a null handle.
///
/// # Safety
/// `h` is null or comes from `ul_reweigh_new`.
#[no_mangle]
pub unsafe extern "C" fn ul_reweigh_cube_count(h: *const UlReweigh) -> usize {
    h.as_ref().map_or(0, |h| h.0.cube_count())
}

/// # Safety
/// `h` is null or comes from `ul_reweigh_new` and is not used again.
#[no_mangle]
pub unsafe extern "C" fn ul_reweigh_free(h: *mut UlReweigh) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct UlDuelResult {
    pub alg_count: u64,
    pub opt: u64,
    /// Named checks that failed; the game still ran to the end.
    pub failed_checks: u32,
}

/// One covering-game duel against `alg` (`UL_ALG_GRID`, `UL_ALG_CENTERED`,
/// `UL_ALG_FIRSTFIT` or `UL_ALG_MALICIOUS`). Failed checks are reported in
/// `out`, not as an error status.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ul_covering_duel(alg: u32, d: usize, seed: u64, out: *mut UlDuelResult) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let alg = match alg {
            UL_ALG_GRID => AlgName::Grid,
            UL_ALG_CENTERED => AlgName::Centered,
            UL_ALG_FIRSTFIT => AlgName::FirstFit,
            UL_ALG_MALICIOUS => AlgName::Malicious,
            other => {
                return Err(Fail(
                    UL_ERR_INVALID,
                    format!("algorithm {other} cannot play the covering game"),
                ))
            }
        };
        let mut params = DuelParams::new(Adversary::Covering, alg, d);
        params.seed = seed;
        params.mode = GameMode::Deterministic;
        let s = duel(&params, None)?;
        let t = &s.trials[0];
        *out = UlDuelResult {
            alg_count: t.alg_count,
            opt: t.opt,
            failed_checks: t.failed_checks().len() as u32,
        };
        Ok(())
    })
}
