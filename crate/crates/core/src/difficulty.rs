//! Difficulty-adjustment rules and epoch bookkeeping.
//!
//! Retargets are unclamped (real Bitcoin clamps to x4 / /4, the model does
//! not) and an epoch closes on official blocks only. The reference
//! difficulty is whatever the simulation starts at, conventionally 1.

use crate::cycle::CycleRecord;
use crate::error::{Error, Result};
use crate::params::NetworkParams;
use serde::Serialize;

/// Current difficulty and progress through the retargeting window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DifficultyState {
    /// Current difficulty, a dimensionless multiple of the reference.
    pub delta: f64,
    /// Official blocks since the last retarget.
    pub official_in_epoch: u32,
    /// Orphans reported to the network since the last retarget (n1).
    pub orphans_in_epoch: u32,
    /// Wall time since the last retarget, minutes.
    pub epoch_elapsed: f64,
}

impl DifficultyState {
    pub fn new(delta: f64) -> Self {
        assert!(delta > 0.0);
        DifficultyState {
            delta,
            official_in_epoch: 0,
            orphans_in_epoch: 0,
            epoch_elapsed: 0.0,
        }
    }

    /// Folds one finished cycle into the epoch counters. Reported orphans are
    /// the public honest ones plus whatever the attacker chose to reveal.
    pub fn record_cycle(&mut self, rec: &CycleRecord) {
        self.official_in_epoch += rec.h;
        self.orphans_in_epoch += rec.orph_h + rec.orph_pub_a;
        self.epoch_elapsed += rec.duration.unwrap_or(0.0);
    }

    /// Applies a retarget and resets the epoch counters.
    pub fn apply_retarget(&mut self, new_delta: f64) {
        assert!(new_delta > 0.0);
        self.delta = new_delta;
        self.official_in_epoch = 0;
        self.orphans_in_epoch = 0;
        self.epoch_elapsed = 0.0;
    }
}

/// Standard rule: delta' = delta * (n0 * tau0) / T.
pub fn retarget_standard(state: &DifficultyState, n0: u32, tau0: f64) -> Result<f64> {
    if state.official_in_epoch != n0 {
        return Err(Error::EpochIncomplete {
            official: state.official_in_epoch,
            n0,
        });
    }
    retarget_general(state, n0 as f64, tau0)
}

/// Generalized rule: delta' = delta * (D * tau0) / T for an arbitrary
/// difficulty-function progression D over the epoch. With D = n0 this is
/// bit-identical to the standard rule.
pub fn retarget_general(state: &DifficultyState, d_progress: f64, tau0: f64) -> Result<f64> {
    if d_progress.is_nan()
        || d_progress <= 0.0
        || state.epoch_elapsed.is_nan()
        || state.epoch_elapsed <= 0.0
    {
        return Err(Error::InvalidRetarget {
            progress: d_progress,
            elapsed: state.epoch_elapsed,
        });
    }
    Ok(state.delta * (d_progress * tau0) / state.epoch_elapsed)
}

/// Orphan-aware rule: delta' = delta * ((n0 + n1) * tau0) / T where n1 is the
/// number of orphans reported during the epoch.
pub fn retarget_orphan(state: &DifficultyState, n0: u32, tau0: f64) -> Result<f64> {
    if state.official_in_epoch != n0 {
        return Err(Error::EpochIncomplete {
            official: state.official_in_epoch,
            n0,
        });
    }
    retarget_general(state, (n0 + state.orphans_in_epoch) as f64, tau0)
}

/// Total block-discovery rate at the current difficulty and its split.
///
/// Total hash power is constant, so the rate scales as 1/delta:
/// lambda = (1/tau0) * (delta_ref/delta), alpha = p lambda, alpha' = q lambda.
pub fn network_rate(params: &NetworkParams, delta: f64, delta_ref: f64) -> NetworkRate {
    assert!(delta > 0.0 && delta_ref > 0.0);
    let total = (1.0 / params.tau0) * (delta_ref / delta);
    NetworkRate {
        total,
        honest: params.p() * total,
        attacker: params.q() * total,
    }
}

/// Block-discovery rates in blocks per minute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkRate {
    pub total: f64,
    pub honest: f64,
    pub attacker: f64,
}

pub const EPOCH_CSV_HEADER: &str = "epoch,delta,official,orphans,elapsed_minutes";
