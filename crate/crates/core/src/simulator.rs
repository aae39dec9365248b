//! Timed Monte Carlo: repeated strategy cycles, difficulty retargeting across
//! epochs, long-run revenue rates and martingale diagnostics.
//!
//! Randomness comes from ChaCha12 streams: cycles are processed in fixed
//! chunks of [`CHUNK_CYCLES`], chunk `i` drawing from stream `i + 1` of the
//! master seed, and long-run replication `r` from stream `2^32 + r`. Chunk
//! boundaries do not depend on the worker count and per-chunk results are
//! reduced in chunk order, so outputs are bit-identical for any parallelism.

use crate::cycle::{CycleRecord, CycleWord};
use crate::difficulty::{retarget_general, DifficultyState};
use crate::error::{Error, Result};
use crate::params::NetworkParams;
use crate::report::{ProfitabilityReport, ReportMode, Variant};
use crate::strategy::{run_cycle_at_rate, Strategy};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// Cycles per random-stream chunk; fixed so results never depend on how
/// chunks are scheduled across workers.
pub const CHUNK_CYCLES: u64 = 8192;

fn chunk_rng(seed: u64, chunk_index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(chunk_index + 1);
    rng
}

fn replication_rng(seed: u64, replication: u32) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream((1u64 << 32) + replication as u64);
    rng
}

/// Running sums over simulated cycles, sufficient for every report below.
#[derive(Debug, Clone, Default)]
pub struct EnsembleStats {
    pub n: u64,
    pub sum_g: f64,
    pub sum_h: f64,
    pub sum_d: f64,
    pub sum_tau: f64,
    pub sum_reward: f64,
    pub sum_len: f64,
    pub sum_na: f64,
    pub sum_nb: f64,
    sum_reward2: f64,
    sum_h2: f64,
    sum_d2: f64,
    sum_reward_h: f64,
    sum_reward_d: f64,
    sum_g2: f64,
    sum_tau2: f64,
    sum_g_tau: f64,
    sum_na2: f64,
    sum_na_tau: f64,
    sum_nb2: f64,
    sum_nb_tau: f64,
    pub word_counts: BTreeMap<CycleWord, u64>,
}

impl EnsembleStats {
    pub fn add(&mut self, rec: &CycleRecord) {
        let g = rec.g as f64;
        let h = rec.h as f64;
        let d = rec.d as f64;
        let tau = rec.duration.expect("ensemble cycles are timed");
        let reward = rec.reward;
        let n_a = rec.word.count_a() as f64;
        let n_b = rec.word.count_b() as f64;
        self.n += 1;
        self.sum_g += g;
        self.sum_h += h;
        self.sum_d += d;
        self.sum_tau += tau;
        self.sum_reward += reward;
        self.sum_len += rec.word.len() as f64;
        self.sum_na += n_a;
        self.sum_nb += n_b;
        self.sum_reward2 += reward * reward;
        self.sum_h2 += h * h;
        self.sum_d2 += d * d;
        self.sum_reward_h += reward * h;
        self.sum_reward_d += reward * d;
        self.sum_g2 += g * g;
        self.sum_tau2 += tau * tau;
        self.sum_g_tau += g * tau;
        self.sum_na2 += n_a * n_a;
        self.sum_na_tau += n_a * tau;
        self.sum_nb2 += n_b * n_b;
        self.sum_nb_tau += n_b * tau;
        *self.word_counts.entry(rec.word).or_insert(0) += 1;
    }

    pub fn merge(&mut self, other: &EnsembleStats) {
        self.n += other.n;
        self.sum_g += other.sum_g;
        self.sum_h += other.sum_h;
        self.sum_d += other.sum_d;
        self.sum_tau += other.sum_tau;
        self.sum_reward += other.sum_reward;
        self.sum_len += other.sum_len;
        self.sum_na += other.sum_na;
        self.sum_nb += other.sum_nb;
        self.sum_reward2 += other.sum_reward2;
        self.sum_h2 += other.sum_h2;
        self.sum_d2 += other.sum_d2;
        self.sum_reward_h += other.sum_reward_h;
        self.sum_reward_d += other.sum_reward_d;
        self.sum_g2 += other.sum_g2;
        self.sum_tau2 += other.sum_tau2;
        self.sum_g_tau += other.sum_g_tau;
        self.sum_na2 += other.sum_na2;
        self.sum_na_tau += other.sum_na_tau;
        self.sum_nb2 += other.sum_nb2;
        self.sum_nb_tau += other.sum_nb_tau;
        for (&word, &count) in &other.word_counts {
            *self.word_counts.entry(word).or_insert(0) += count;
        }
    }

    /// Sample means and the ratio estimator for gamma, with its delta-method
    /// standard error.
    pub fn gamma_report(&self, variant: Variant) -> ProfitabilityReport {
        let n = self.n as f64;
        let (sum_denom, sum_denom2, sum_cross) = match variant {
            Variant::Standard => (self.sum_h, self.sum_h2, self.sum_reward_h),
            Variant::Orphan => (self.sum_d, self.sum_d2, self.sum_reward_d),
        };
        let gamma = self.sum_reward / sum_denom;
        // Var(reward - gamma * denom); its sample mean is 0 by construction
        let resid_var =
            (self.sum_reward2 - 2.0 * gamma * sum_cross + gamma * gamma * sum_denom2) / n;
        let stderr = (resid_var / n).sqrt() / (sum_denom / n);
        ProfitabilityReport {
            gamma,
            e_g: self.sum_g / n,
            e_h: self.sum_h / n,
            e_d: self.sum_d / n,
            e_tau: self.sum_tau / n,
            e_reward: self.sum_reward / n,
            stderr: Some(stderr),
            mode: ReportMode::MonteCarlo,
            variant,
        }
    }

    /// Doob stopping-time diagnostics: E[N'(tau)] = alpha' E[tau] and the
    /// honest analogue, at the constant reference difficulty.
    pub fn martingale_report(&self, params: &NetworkParams) -> MartingaleReport {
        let n = self.n as f64;
        let alpha_attacker = params.q() / params.tau0;
        let alpha_honest = params.p() / params.tau0;
        let side = |sum_x: f64, sum_x2: f64, sum_x_tau: f64, alpha: f64| {
            let diff = (sum_x - alpha * self.sum_tau) / n;
            let e_m2 = (sum_x2 - 2.0 * alpha * sum_x_tau + alpha * alpha * self.sum_tau2) / n;
            let stderr = ((e_m2 - diff * diff).max(0.0) / n).sqrt();
            (diff, stderr)
        };
        let (diff_attacker, stderr_attacker) =
            side(self.sum_na, self.sum_na2, self.sum_na_tau, alpha_attacker);
        let (diff_honest, stderr_honest) =
            side(self.sum_nb, self.sum_nb2, self.sum_nb_tau, alpha_honest);
        MartingaleReport {
            n_cycles: self.n,
            e_blocks_attacker: self.sum_na / n,
            e_blocks_honest: self.sum_nb / n,
            e_tau: self.sum_tau / n,
            diff_attacker,
            stderr_attacker,
            diff_honest,
            stderr_honest,
            pass: diff_attacker.abs() <= 3.0 * stderr_attacker
                && diff_honest.abs() <= 3.0 * stderr_honest,
        }
    }

    /// Revenue-rate bound at constant difficulty: E[G]/E[tau] <= q/tau0.
    pub fn rate_report(&self, params: &NetworkParams) -> NoDaaReport {
        let n = self.n as f64;
        let rate = self.sum_g / self.sum_tau;
        let resid_var =
            (self.sum_g2 - 2.0 * rate * self.sum_g_tau + rate * rate * self.sum_tau2) / n;
        let stderr = (resid_var / n).sqrt() / (self.sum_tau / n);
        let bound = params.q() / params.tau0;
        NoDaaReport {
            n_cycles: self.n,
            rate,
            stderr,
            bound,
            pass: rate <= bound + 3.0 * stderr,
        }
    }

    pub fn word_frequency(&self, word: CycleWord) -> f64 {
        *self.word_counts.get(&word).unwrap_or(&0) as f64 / self.n as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MartingaleReport {
    pub n_cycles: u64,
    pub e_blocks_attacker: f64,
    pub e_blocks_honest: f64,
    pub e_tau: f64,
    /// Sample mean of N'(tau) - alpha' tau; zero in expectation.
    pub diff_attacker: f64,
    pub stderr_attacker: f64,
    pub diff_honest: f64,
    pub stderr_honest: f64,
    /// Both discrepancies within 3 combined standard errors.
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoDaaReport {
    pub n_cycles: u64,
    /// Attacker official blocks per minute, E-hat[G]/E-hat[tau].
    pub rate: f64,
    pub stderr: f64,
    /// q/tau0, the finite-strategy ceiling without difficulty adjustment.
    pub bound: f64,
    pub pass: bool,
}

/// Accumulates `n_cycles` independent timed cycles at the constant reference
/// difficulty. Parallel over fixed chunks, reduced in chunk order.
pub fn collect_stats(
    strategy: &Strategy,
    params: &NetworkParams,
    n_cycles: u64,
    seed: u64,
) -> EnsembleStats {
    let n_chunks = n_cycles.div_ceil(CHUNK_CYCLES);
    let rate = 1.0 / params.tau0;
    let chunk_stats: Vec<EnsembleStats> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = chunk_rng(seed, chunk);
            let count = CHUNK_CYCLES.min(n_cycles - chunk * CHUNK_CYCLES);
            let mut stats = EnsembleStats::default();
            for _ in 0..count {
                let rec = run_cycle_at_rate(strategy, params, &mut rng, Some(rate));
                stats.add(&rec);
            }
            stats
        })
        .collect();
    let mut total = EnsembleStats::default();
    for stats in &chunk_stats {
        total.merge(stats);
    }
    total
}

/// Runs the same cycles as [`collect_stats`] sequentially, handing each
/// record to `sink` in chunk order (the deterministic CSV path).
pub fn stream_cycles(
    strategy: &Strategy,
    params: &NetworkParams,
    n_cycles: u64,
    seed: u64,
    mut sink: impl FnMut(&CycleRecord),
) {
    let n_chunks = n_cycles.div_ceil(CHUNK_CYCLES);
    let rate = 1.0 / params.tau0;
    for chunk in 0..n_chunks {
        let mut rng = chunk_rng(seed, chunk);
        let count = CHUNK_CYCLES.min(n_cycles - chunk * CHUNK_CYCLES);
        for _ in 0..count {
            let rec = run_cycle_at_rate(strategy, params, &mut rng, Some(rate));
            sink(&rec);
        }
    }
}

/// Monte Carlo profitability at constant difficulty.
pub fn simulate_cycles(
    strategy: &Strategy,
    params: &NetworkParams,
    n_cycles: u64,
    seed: u64,
    variant: Variant,
) -> ProfitabilityReport {
    collect_stats(strategy, params, n_cycles, seed).gamma_report(variant)
}

/// Stopping-time identity check over `n_cycles` timed cycles.
pub fn martingale_check(
    strategy: &Strategy,
    params: &NetworkParams,
    n_cycles: u64,
    seed: u64,
) -> MartingaleReport {
    collect_stats(strategy, params, n_cycles, seed).martingale_report(params)
}

/// Revenue-rate bound check over `n_cycles` timed cycles at constant
/// difficulty.
pub fn no_daa_bound_check(
    strategy: &Strategy,
    params: &NetworkParams,
    n_cycles: u64,
    seed: u64,
) -> NoDaaReport {
    collect_stats(strategy, params, n_cycles, seed).rate_report(params)
}

/// Which retargeting rule a long-run simulation applies at epoch boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DaaVariant {
    /// Difficulty held constant.
    None,
    /// Official-blocks-only rule.
    Standard,
    /// Orphan-aware rule: reported orphans count toward the progression.
    Orphan,
}

/// One epoch of one replication, as logged to the epoch CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpochRow {
    pub replication: u32,
    pub epoch: u32,
    /// Difficulty in force during the epoch.
    pub delta: f64,
    pub official: u32,
    pub orphans: u32,
    pub elapsed_minutes: f64,
}

impl EpochRow {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.epoch, self.delta, self.official, self.orphans, self.elapsed_minutes
        )
    }
}

/// Post-warmup long-run estimates, averaged over independent replications.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LongRunResult {
    /// Attacker reward per tau0 of wall time in the stabilized regime.
    pub revenue_per_tau0: f64,
    pub revenue_per_tau0_stderr: f64,
    /// Reward per unit of official-chain (standard) or difficulty-function
    /// (orphan-aware) progression.
    pub gamma_per_block: f64,
    pub gamma_per_block_stderr: f64,
    /// Minutes of wall time per official block.
    pub time_per_official: f64,
    pub time_per_official_stderr: f64,
    /// Minutes of wall time per difficulty-function unit.
    pub time_per_d_unit: f64,
    pub time_per_d_unit_stderr: f64,
    pub equilibrium_delta: f64,
    pub equilibrium_delta_stderr: f64,
    pub epochs_simulated: u32,
    pub warmup_epochs: u32,
    pub replications: u32,
}

struct ReplicationOutcome {
    revenue_per_tau0: f64,
    gamma_per_block: f64,
    time_per_official: f64,
    time_per_d_unit: f64,
    equilibrium_delta: f64,
    epochs: Vec<EpochRow>,
}

/// Long-run simulation: back-to-back cycles with retargeting.
///
/// Epochs are aligned to cycle boundaries: an epoch closes at the first cycle
/// end with at least `params.n0` official blocks, and the retarget uses the
/// epoch's actual progression (official blocks, plus reported orphans under
/// the orphan-aware rule). Estimates exclude the first `warmup` epochs and are
/// averaged over `replications` independent runs; standard errors are over
/// replication means.
pub fn simulate_longrun(
    strategy: &Strategy,
    params: &NetworkParams,
    variant: DaaVariant,
    n_epochs: u32,
    warmup: u32,
    replications: u32,
    seed: u64,
) -> Result<(LongRunResult, Vec<EpochRow>)> {
    if warmup < 1 || n_epochs <= warmup {
        return Err(Error::InvalidWindow(warmup));
    }
    if replications < 1 {
        return Err(Error::InvalidWindow(replications));
    }
    let outcomes: Vec<ReplicationOutcome> = (0..replications)
        .into_par_iter()
        .map(|r| run_replication(strategy, params, variant, n_epochs, warmup, seed, r))
        .collect();

    let stat = |f: fn(&ReplicationOutcome) -> f64| -> (f64, f64) {
        let values: Vec<f64> = outcomes.iter().map(f).collect();
        mean_and_stderr(&values)
    };
    let (revenue_per_tau0, revenue_per_tau0_stderr) = stat(|o| o.revenue_per_tau0);
    let (gamma_per_block, gamma_per_block_stderr) = stat(|o| o.gamma_per_block);
    let (time_per_official, time_per_official_stderr) = stat(|o| o.time_per_official);
    let (time_per_d_unit, time_per_d_unit_stderr) = stat(|o| o.time_per_d_unit);
    let (equilibrium_delta, equilibrium_delta_stderr) = stat(|o| o.equilibrium_delta);

    let epochs = outcomes.into_iter().flat_map(|o| o.epochs).collect();
    Ok((
        LongRunResult {
            revenue_per_tau0,
            revenue_per_tau0_stderr,
            gamma_per_block,
            gamma_per_block_stderr,
            time_per_official,
            time_per_official_stderr,
            time_per_d_unit,
            time_per_d_unit_stderr,
            equilibrium_delta,
            equilibrium_delta_stderr,
            epochs_simulated: n_epochs,
            warmup_epochs: warmup,
            replications,
        },
        epochs,
    ))
}

fn run_replication(
    strategy: &Strategy,
    params: &NetworkParams,
    variant: DaaVariant,
    n_epochs: u32,
    warmup: u32,
    seed: u64,
    replication: u32,
) -> ReplicationOutcome {
    let mut rng = replication_rng(seed, replication);
    let delta_ref = 1.0;
    let mut state = DifficultyState::new(delta_ref);
    let mut epochs = Vec::with_capacity(n_epochs as usize);
    let mut post = PostWarmupTotals::default();
    for epoch in 0..n_epochs {
        let delta_in_force = state.delta;
        while state.official_in_epoch < params.n0 {
            let rate = crate::difficulty::network_rate(params, state.delta, delta_ref).total;
            let rec = run_cycle_at_rate(strategy, params, &mut rng, Some(rate));
            state.record_cycle(&rec);
            if epoch >= warmup {
                post.reward += rec.reward;
                post.time += rec.duration.unwrap();
            }
        }
        let official = state.official_in_epoch;
        let orphans = state.orphans_in_epoch;
        let elapsed = state.epoch_elapsed;
        epochs.push(EpochRow {
            replication,
            epoch,
            delta: delta_in_force,
            official,
            orphans,
            elapsed_minutes: elapsed,
        });
        if epoch >= warmup {
            post.official += official as u64;
            post.d_units += (official + orphans) as u64;
            post.delta_sum += delta_in_force;
            post.epochs += 1;
        }
        let new_delta = match variant {
            DaaVariant::None => state.delta,
            DaaVariant::Standard => {
                retarget_general(&state, official as f64, params.tau0).expect("complete epoch")
            }
            DaaVariant::Orphan => {
                retarget_general(&state, (official + orphans) as f64, params.tau0)
                    .expect("complete epoch")
            }
        };
        state.apply_retarget(new_delta);
    }
    let progression = match variant {
        DaaVariant::Orphan => post.d_units as f64,
        _ => post.official as f64,
    };
    ReplicationOutcome {
        revenue_per_tau0: post.reward * params.tau0 / post.time,
        gamma_per_block: post.reward / progression,
        time_per_official: post.time / post.official as f64,
        time_per_d_unit: post.time / post.d_units as f64,
        equilibrium_delta: post.delta_sum / post.epochs as f64,
        epochs,
    }
}

#[derive(Default)]
struct PostWarmupTotals {
    reward: f64,
    time: f64,
    official: u64,
    d_units: u64,
    delta_sum: f64,
    epochs: u32,
}

fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
