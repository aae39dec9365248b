//! C ABI over the blockrace library.
//!
//! Conventions: every function returns a [`BrxStatus`]; outputs go through
//! `out` pointers. Handles are opaque and must be released with the matching
//! `_free` function. The header `include/blockrace.h` mirrors this interface.

use blockrace::analytic::{self, Threshold};
use blockrace::report::Variant;
use blockrace::simulator::{self, DaaVariant};
use blockrace::{NetworkParams, Strategy};
use std::ffi::CStr;
use std::os::raw::{c_char, c_double, c_int};

/// Status codes shared with the C header.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BrxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidUtf8 = 3,
    IoOrParse = 4,
}

/// Opaque network-parameter handle.
pub struct BrxParams(NetworkParams);

/// Opaque strategy handle.
pub struct BrxStrategy(Strategy);

/// Constant-difficulty profitability report, mirrored in the header.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BrxReport {
    pub gamma: c_double,
    pub e_g: c_double,
    pub e_h: c_double,
    pub e_d: c_double,
    pub e_tau: c_double,
    pub e_reward: c_double,
    /// Monte Carlo standard error of gamma; 0 for exact reports.
    pub stderr: c_double,
}

/// Threshold outcome kinds, mirrored in the header.
pub const BRX_THRESHOLD_ROOT: c_int = 0;
pub const BRX_THRESHOLD_NONE: c_int = 1;
pub const BRX_THRESHOLD_IDENTICALLY_ZERO: c_int = 2;

/// Protocol variants, mirrored in the header.
pub const BRX_VARIANT_STANDARD: c_int = 0;
pub const BRX_VARIANT_ORPHAN: c_int = 1;

fn variant_from(raw: c_int) -> Option<Variant> {
    match raw {
        BRX_VARIANT_STANDARD => Some(Variant::Standard),
        BRX_VARIANT_ORPHAN => Some(Variant::Orphan),
        _ => None,
    }
}

/// Creates a parameter handle. `tau0 <= 0`, `n0 == 0` or values outside their
/// documented ranges yield `InvalidArgument`.
///
/// # Safety
/// `out` must be a valid pointer; the result must be freed with
/// [`brx_params_free`].
#[no_mangle]
pub unsafe extern "C" fn brx_params_new(
    q: c_double,
    tau0: c_double,
    n0: u32,
    orphan_reward_x: c_double,
    out: *mut *mut BrxParams,
) -> BrxStatus {
    if out.is_null() {
        return BrxStatus::NullPointer;
    }
    let built = NetworkParams::new(q)
        .and_then(|p| p.with_tau0(tau0))
        .and_then(|p| p.with_n0(n0))
        .and_then(|p| p.with_orphan_reward(orphan_reward_x));
    match built {
        Ok(params) => {
            *out = Box::into_raw(Box::new(BrxParams(params)));
            BrxStatus::Ok
        }
        Err(_) => BrxStatus::InvalidArgument,
    }
}

/// Releases a parameter handle. A null pointer is a no-op.
///
/// # Safety
/// `params` must have come from [`brx_params_new`] and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn brx_params_free(params: *mut BrxParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// The strategy that publishes every block immediately.
///
/// # Safety
/// `out` must be valid; free the result with [`brx_strategy_free`].
#[no_mangle]
pub unsafe extern "C" fn brx_strategy_honest(out: *mut *mut BrxStrategy) -> BrxStatus {
    if out.is_null() {
        return BrxStatus::NullPointer;
    }
    *out = Box::into_raw(Box::new(BrxStrategy(Strategy::honest())));
    BrxStatus::Ok
}

/// The withhold-one, lead-by-two reference strategy.
///
/// # Safety
/// `out` must be valid; free the result with [`brx_strategy_free`].
#[no_mangle]
pub unsafe extern "C" fn brx_strategy_one_plus_two(out: *mut *mut BrxStrategy) -> BrxStatus {
    if out.is_null() {
        return BrxStatus::NullPointer;
    }
    *out = Box::into_raw(Box::new(BrxStrategy(Strategy::one_plus_two())));
    BrxStatus::Ok
}

/// Loads a strategy from a word-rule CSV file.
///
/// # Safety
/// `path` must be a NUL-terminated string, `out` valid; free the result with
/// [`brx_strategy_free`].
#[no_mangle]
pub unsafe extern "C" fn brx_strategy_from_file(
    path: *const c_char,
    out: *mut *mut BrxStrategy,
) -> BrxStatus {
    if path.is_null() || out.is_null() {
        return BrxStatus::NullPointer;
    }
    let path = match CStr::from_ptr(path).to_str() {
        Ok(s) => s,
        Err(_) => return BrxStatus::InvalidUtf8,
    };
    match Strategy::from_rules_file(path) {
        Ok(strategy) => {
            *out = Box::into_raw(Box::new(BrxStrategy(strategy)));
            BrxStatus::Ok
        }
        Err(_) => BrxStatus::IoOrParse,
    }
}

/// Releases a strategy handle. A null pointer is a no-op.
///
/// # Safety
/// `strategy` must have come from a `brx_strategy_*` constructor and not been
/// freed before.
#[no_mangle]
pub unsafe extern "C" fn brx_strategy_free(strategy: *mut BrxStrategy) {
    if !strategy.is_null() {
        drop(Box::from_raw(strategy));
    }
}

/// Exact profitability by cycle enumeration.
///
/// # Safety
/// All pointers must be valid handles / writable memory.
#[no_mangle]
pub unsafe extern "C" fn brx_gamma_exact(
    strategy: *const BrxStrategy,
    params: *const BrxParams,
    variant: c_int,
    out: *mut BrxReport,
) -> BrxStatus {
    if strategy.is_null() || params.is_null() || out.is_null() {
        return BrxStatus::NullPointer;
    }
    let Some(variant) = variant_from(variant) else {
        return BrxStatus::InvalidArgument;
    };
    let dist = match analytic::enumerate(&(*strategy).0, &(*params).0) {
        Ok(d) => d,
        Err(_) => return BrxStatus::InvalidArgument,
    };
    let report = analytic::expectations(&dist, &(*params).0, variant);
    *out = BrxReport {
        gamma: report.gamma,
        e_g: report.e_g,
        e_h: report.e_h,
        e_d: report.e_d,
        e_tau: report.e_tau,
        e_reward: report.e_reward,
        stderr: 0.0,
    };
    BrxStatus::Ok
}

/// Closed-form profitability of the withhold-one, lead-by-two strategy.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn brx_closed_form_gamma_one_plus_two(
    q: c_double,
    out: *mut c_double,
) -> BrxStatus {
    if out.is_null() {
        return BrxStatus::NullPointer;
    }
    match analytic::closed_form_gamma_one_plus_two(q) {
        Ok(gamma) => {
            *out = gamma;
            BrxStatus::Ok
        }
        Err(_) => BrxStatus::InvalidArgument,
    }
}

/// Profitability threshold in q. `out_kind` receives one of the
/// `BRX_THRESHOLD_*` constants; `out_q` is set only for a root.
///
/// # Safety
/// All pointers must be valid handles / writable memory.
#[no_mangle]
pub unsafe extern "C" fn brx_threshold(
    strategy: *const BrxStrategy,
    variant: c_int,
    orphan_reward_x: c_double,
    out_kind: *mut c_int,
    out_q: *mut c_double,
) -> BrxStatus {
    if strategy.is_null() || out_kind.is_null() || out_q.is_null() {
        return BrxStatus::NullPointer;
    }
    let Some(variant) = variant_from(variant) else {
        return BrxStatus::InvalidArgument;
    };
    match analytic::threshold(&(*strategy).0, variant, orphan_reward_x) {
        Ok(Threshold::Root { q }) => {
            *out_kind = BRX_THRESHOLD_ROOT;
            *out_q = q;
            BrxStatus::Ok
        }
        Ok(Threshold::NoneInRange) => {
            *out_kind = BRX_THRESHOLD_NONE;
            *out_q = 0.0;
            BrxStatus::Ok
        }
        Ok(Threshold::IdenticallyZero) => {
            *out_kind = BRX_THRESHOLD_IDENTICALLY_ZERO;
            *out_q = 0.0;
            BrxStatus::Ok
        }
        Err(_) => BrxStatus::InvalidArgument,
    }
}

/// Monte Carlo profitability over `n_cycles` timed cycles at constant
/// difficulty. Deterministic in `seed` regardless of thread count.
///
/// # Safety
/// All pointers must be valid handles / writable memory.
#[no_mangle]
pub unsafe extern "C" fn brx_simulate_cycles(
    strategy: *const BrxStrategy,
    params: *const BrxParams,
    n_cycles: u64,
    seed: u64,
    variant: c_int,
    out: *mut BrxReport,
) -> BrxStatus {
    if strategy.is_null() || params.is_null() || out.is_null() {
        return BrxStatus::NullPointer;
    }
    let Some(variant) = variant_from(variant) else {
        return BrxStatus::InvalidArgument;
    };
    if n_cycles == 0 {
        return BrxStatus::InvalidArgument;
    }
    let report = simulator::simulate_cycles(&(*strategy).0, &(*params).0, n_cycles, seed, variant);
    *out = BrxReport {
        gamma: report.gamma,
        e_g: report.e_g,
        e_h: report.e_h,
        e_d: report.e_d,
        e_tau: report.e_tau,
        e_reward: report.e_reward,
        stderr: report.stderr.unwrap_or(0.0),
    };
    BrxStatus::Ok
}

/// Long-run simulation under a difficulty-adjustment rule: 0 none,
/// 1 official-blocks-only, 2 orphan-aware. Writes the post-warmup attacker
/// revenue per `tau0` of wall time and its standard error over replications.
///
/// # Safety
/// All pointers must be valid handles / writable memory.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn brx_simulate_longrun(
    strategy: *const BrxStrategy,
    params: *const BrxParams,
    daa: c_int,
    n_epochs: u32,
    warmup: u32,
    replications: u32,
    seed: u64,
    out_revenue_per_tau0: *mut c_double,
    out_stderr: *mut c_double,
) -> BrxStatus {
    if strategy.is_null()
        || params.is_null()
        || out_revenue_per_tau0.is_null()
        || out_stderr.is_null()
    {
        return BrxStatus::NullPointer;
    }
    let daa = match daa {
        0 => DaaVariant::None,
        1 => DaaVariant::Standard,
        2 => DaaVariant::Orphan,
        _ => return BrxStatus::InvalidArgument,
    };
    match simulator::simulate_longrun(
        &(*strategy).0,
        &(*params).0,
        daa,
        n_epochs,
        warmup,
        replications,
        seed,
    ) {
        Ok((result, _)) => {
            *out_revenue_per_tau0 = result.revenue_per_tau0;
            *out_stderr = result.revenue_per_tau0_stderr;
            BrxStatus::Ok
        }
        Err(_) => BrxStatus::InvalidArgument,
    }
}
