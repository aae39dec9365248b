use crate::error::{Error, Result};
use serde::Serialize;

/// Network-wide parameters of the mining race.
///
/// `q` is the attacker's relative hashrate and `p = 1 - q` the honest share.
/// `p` is stored redundantly and always recomputed from `q` on construction so
/// downstream formulas cannot drift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NetworkParams {
    q: f64,
    p: f64,
    /// Target average interblock time, minutes.
    pub tau0: f64,
    /// Retargeting window in official blocks.
    pub n0: u32,
    /// Fraction of a coinbase paid per reported orphan block.
    pub orphan_reward_x: f64,
    /// Absolute honest hashrate h, hashes/second.
    pub hash_honest: Option<f64>,
    /// Absolute attacker hashrate h', hashes/second.
    pub hash_attacker: Option<f64>,
}

pub const DEFAULT_TAU0: f64 = 10.0;
pub const DEFAULT_N0: u32 = 2016;

impl NetworkParams {
    /// Validated parameters with default `tau0`, `n0` and no orphan reward.
    pub fn new(q: f64) -> Result<Self> {
        Self {
            q,
            p: 1.0 - q,
            tau0: DEFAULT_TAU0,
            n0: DEFAULT_N0,
            orphan_reward_x: 0.0,
            hash_honest: None,
            hash_attacker: None,
        }
        .validated()
    }

    /// Parameters derived from absolute hashrates: q = h'/(h+h').
    pub fn from_hashrates(hash_honest: f64, hash_attacker: f64) -> Result<Self> {
        if hash_honest <= 0.0 || hash_attacker <= 0.0 {
            return Err(Error::NonPositiveHashrate(hash_honest, hash_attacker));
        }
        let mut params = Self::new(hash_attacker / (hash_honest + hash_attacker))?;
        params.hash_honest = Some(hash_honest);
        params.hash_attacker = Some(hash_attacker);
        params.validated()
    }

    pub fn with_tau0(mut self, tau0: f64) -> Result<Self> {
        self.tau0 = tau0;
        self.validated()
    }

    pub fn with_n0(mut self, n0: u32) -> Result<Self> {
        self.n0 = n0;
        self.validated()
    }

    pub fn with_orphan_reward(mut self, x: f64) -> Result<Self> {
        self.orphan_reward_x = x;
        self.validated()
    }

    /// Checks every invariant and recomputes `p` as `1 - q`.
    pub fn validated(mut self) -> Result<Self> {
        if !(self.q > 0.0 && self.q < 1.0) {
            return Err(Error::QOutOfRange(self.q));
        }
        if self.tau0.is_nan() || self.tau0 <= 0.0 {
            return Err(Error::NonPositiveTau0(self.tau0));
        }
        if self.n0 < 1 {
            return Err(Error::InvalidWindow(self.n0));
        }
        if !(0.0..=1.0).contains(&self.orphan_reward_x) || self.orphan_reward_x.is_nan() {
            return Err(Error::OrphanRewardOutOfRange(self.orphan_reward_x));
        }
        if let (Some(h), Some(hp)) = (self.hash_honest, self.hash_attacker) {
            if h <= 0.0 || hp <= 0.0 {
                return Err(Error::NonPositiveHashrate(h, hp));
            }
            let implied = hp / (h + hp);
            if (implied - self.q).abs() > 1e-12 {
                return Err(Error::InconsistentHashrates { q: self.q, implied });
            }
        }
        self.p = 1.0 - self.q;
        Ok(self)
    }

    /// Attacker's relative hashrate.
    pub fn q(&self) -> f64 {
        self.q
    }

    /// Honest relative hashrate, always `1 - q`.
    pub fn p(&self) -> f64 {
        self.p
    }
}
