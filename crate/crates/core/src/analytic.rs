//! Exact cycle analytics by exhaustive enumeration.
//!
//! A finite strategy's terminal words form the leaves of a binary tree;
//! walking it gives each word's exact probability p^#B q^#A, from which every
//! expectation is a small polynomial in q. Enumeration trees have at most
//! 2^bound leaves, so plain f64 arithmetic reaches 1e-12 without rational
//! arithmetic (a deliberate non-goal).

use crate::cycle::{check_accounting, CycleRecord, CycleWord, Letter};
use crate::error::{Error, Result};
use crate::params::NetworkParams;
use crate::report::{ProfitabilityReport, ReportMode, Variant};
use crate::strategy::{build_record, Decision, Resolution, Strategy};
use serde::Serialize;
use std::collections::BTreeMap;

/// Exact distribution over the terminal words of a strategy.
#[derive(Debug, Clone)]
pub struct CycleDistribution {
    pub entries: BTreeMap<CycleWord, (f64, CycleRecord)>,
}

impl CycleDistribution {
    pub fn total_probability(&self) -> f64 {
        self.entries.values().map(|(prob, _)| prob).sum()
    }
}

/// Walks the word tree of `strategy` to every terminal, attaching exact
/// probabilities and resolved (untimed) records.
pub fn enumerate(strategy: &Strategy, params: &NetworkParams) -> Result<CycleDistribution> {
    let mut entries = BTreeMap::new();
    let mut stack = vec![CycleWord::empty()];
    while let Some(prefix) = stack.pop() {
        for letter in [Letter::A, Letter::B] {
            let word = prefix.pushed(letter);
            match strategy.step(word) {
                Decision::EndCycle => {
                    let res = strategy
                        .resolve(word)
                        .expect("EndCycle implies a terminal resolution");
                    let rec = build_record(word, res, params.orphan_reward_x, None);
                    debug_assert!(check_accounting(&rec));
                    let prob = word.probability(params.p(), params.q());
                    entries.insert(word, (prob, rec));
                }
                Decision::Continue => {
                    if word.len() >= strategy.max_cycle_length() {
                        return Err(Error::IncompletePrefixCode(format!("{word}...")));
                    }
                    stack.push(word);
                }
            }
        }
    }
    Ok(CycleDistribution { entries })
}

/// Exact per-cycle expectations and the profitability ratio under `variant`.
///
/// The untimed expected duration is E[word length] * tau0: at constant
/// difficulty every block takes tau0 on average (Wald).
pub fn expectations(
    dist: &CycleDistribution,
    params: &NetworkParams,
    variant: Variant,
) -> ProfitabilityReport {
    let mut e_g = 0.0;
    let mut e_h = 0.0;
    let mut e_d = 0.0;
    let mut e_len = 0.0;
    let mut e_reward = 0.0;
    for (word, (prob, rec)) in &dist.entries {
        e_g += prob * rec.g as f64;
        e_h += prob * rec.h as f64;
        e_d += prob * rec.d as f64;
        e_len += prob * word.len() as f64;
        e_reward += prob * rec.reward;
    }
    let denom = match variant {
        Variant::Standard => e_h,
        Variant::Orphan => e_d,
    };
    ProfitabilityReport {
        gamma: e_reward / denom,
        e_g,
        e_h,
        e_d,
        e_tau: e_len * params.tau0,
        e_reward,
        stderr: None,
        mode: ReportMode::Exact,
        variant,
    }
}

/// Shorthand: profitability ratio of `strategy` at hashrate `q` with orphan
/// reward `x` under `variant`.
pub fn gamma_exact(strategy: &Strategy, q: f64, x: f64, variant: Variant) -> Result<f64> {
    let params = NetworkParams::new(q)?.with_orphan_reward(x)?;
    let dist = enumerate(strategy, &params)?;
    Ok(expectations(&dist, &params, variant).gamma)
}

/// Closed form for the "1+2" strategy under the standard protocol:
/// q^2 (4 - q) / (1 + q + q^3).
pub fn closed_form_gamma_one_plus_two(q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::QOutOfRange(q));
    }
    Ok(q * q * (4.0 - q) / (1.0 + q + q * q * q))
}

/// Result of solving gamma(q) = q on (0,1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Threshold {
    /// Smallest root in (0,1): above it the strategy beats honest mining.
    Root { q: f64 },
    /// gamma(q) <= q throughout; the strategy never beats honest mining.
    NoneInRange,
    /// gamma(q) - q vanishes identically (honest-equivalent strategy).
    IdenticallyZero,
}

const THRESHOLD_TOL: f64 = 1e-9;
const THRESHOLD_GRID: usize = 1000;

/// Smallest root of gamma(q) = q in (0,1) by grid scan plus bisection.
///
/// Bisection rather than closed-form root extraction so arbitrary word-rule
/// strategies are handled uniformly.
pub fn threshold(strategy: &Strategy, variant: Variant, x: f64) -> Result<Threshold> {
    let excess = |q: f64| -> Result<f64> { Ok(gamma_exact(strategy, q, x, variant)? - q) };
    let grid: Vec<f64> = (1..THRESHOLD_GRID)
        .map(|i| i as f64 / THRESHOLD_GRID as f64)
        .collect();
    let values = grid
        .iter()
        .map(|&q| excess(q))
        .collect::<Result<Vec<_>>>()?;
    if values.iter().all(|v| v.abs() < 1e-12) {
        return Ok(Threshold::IdenticallyZero);
    }
    if values.iter().all(|&v| v <= 0.0) {
        return Ok(Threshold::NoneInRange);
    }
    // first sign change from <= 0 to > 0; if gamma > q from the start of the
    // grid, treat the left endpoint as the bracket
    let mut lo = 0.0;
    let mut hi = grid.len();
    for (i, &v) in values.iter().enumerate() {
        if v > 0.0 {
            hi = i;
            break;
        }
        lo = grid[i];
    }
    let mut hi = if hi == grid.len() { 1.0 } else { grid[hi] };
    let mut lo = lo.max(f64::MIN_POSITIVE);
    while hi - lo > THRESHOLD_TOL {
        let mid = 0.5 * (lo + hi);
        if excess(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Threshold::Root { q: 0.5 * (lo + hi) })
}

/// One dominance margin: E[reward] - q E[D], nonpositive for every finite
/// strategy under the orphan-aware protocol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DominanceRow {
    pub q: f64,
    pub x: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceReport {
    pub strategy: String,
    pub rows: Vec<DominanceRow>,
    pub max_margin: f64,
}

/// Exact margins E[reward] - q E[D] for each q in `q_grid`.
pub fn verify_dominance(strategy: &Strategy, q_grid: &[f64], x: f64) -> Result<DominanceReport> {
    let mut rows = Vec::with_capacity(q_grid.len());
    for &q in q_grid {
        let params = NetworkParams::new(q)?.with_orphan_reward(x)?;
        let dist = enumerate(strategy, &params)?;
        let report = expectations(&dist, &params, Variant::Orphan);
        rows.push(DominanceRow {
            q,
            x,
            margin: report.e_reward - q * report.e_d,
        });
    }
    let max_margin = rows
        .iter()
        .map(|r| r.margin)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(DominanceReport {
        strategy: strategy.name().to_string(),
        rows,
        max_margin,
    })
}

/// Exhaustive search over every legal word-rule strategy whose terminals have
/// length at most three, maximizing the standard-protocol ratio at `q`.
///
/// Per prefix code the best resolutions are found by Dinkelbach iteration on
/// lambda = E[G]/E[H]: at fixed lambda the objective sum P(w)(G(w) - lambda
/// H(w)) is separable per word, and the fixed point is the code's maximal
/// ratio.
pub fn best_three_block_strategy(q: f64) -> Result<(Strategy, f64)> {
    let params = NetworkParams::new(q)?;
    let mut best: Option<(Strategy, f64)> = None;
    for code in prefix_codes(3) {
        let (terminals, gamma) = best_resolutions_for_code(&code, &params);
        if best.as_ref().is_none_or(|(_, g)| gamma > *g) {
            let strategy = Strategy::from_word_rules("best-three-block", terminals, 3)?;
            best = Some((strategy, gamma));
        }
    }
    Ok(best.expect("the depth-3 tree has at least one prefix code"))
}

/// All complete prefix codes over {A,B} with terminals of length 1..=depth.
pub fn prefix_codes(depth: usize) -> Vec<Vec<CycleWord>> {
    fn subtree(prefix: CycleWord, depth: usize) -> Vec<Vec<CycleWord>> {
        let mut out = Vec::new();
        if !prefix.is_empty() {
            out.push(vec![prefix]);
        }
        if prefix.len() < depth {
            let left = subtree(prefix.pushed(Letter::A), depth);
            let right = subtree(prefix.pushed(Letter::B), depth);
            for l in &left {
                for r in &right {
                    let mut code = l.clone();
                    code.extend_from_slice(r);
                    out.push(code);
                }
            }
        }
        out
    }
    subtree(CycleWord::empty(), depth)
}

/// Candidate resolutions for a terminal word: concede, or impose a fork of
/// any winning length (reported orphans are pointless at x = 0, so 0).
fn candidate_resolutions(word: CycleWord) -> Vec<Resolution> {
    let n_a = word.count_a();
    let n_b = word.count_b();
    let mut out = vec![Resolution::honest_wins(word, 0)];
    for fork_len in n_b + 1..=n_a {
        out.push(Resolution::attacker_wins(word, fork_len, 0));
    }
    out
}

fn best_resolutions_for_code(
    code: &[CycleWord],
    params: &NetworkParams,
) -> (BTreeMap<CycleWord, Resolution>, f64) {
    let words: Vec<(CycleWord, f64, Vec<Resolution>)> = code
        .iter()
        .map(|&w| {
            (
                w,
                w.probability(params.p(), params.q()),
                candidate_resolutions(w),
            )
        })
        .collect();
    let mut lambda = 0.0;
    loop {
        let mut e_g = 0.0;
        let mut e_h = 0.0;
        let mut chosen = BTreeMap::new();
        for (word, prob, candidates) in &words {
            let best = candidates
                .iter()
                .map(|res| {
                    let g = res.off_a as f64;
                    let h = (res.off_a + res.off_h) as f64;
                    (g - lambda * h, g, h, res)
                })
                .max_by(|a, b| a.0.total_cmp(&b.0))
                .expect("candidate list is never empty");
            e_g += prob * best.1;
            e_h += prob * best.2;
            chosen.insert(*word, *best.3);
        }
        let next = e_g / e_h;
        if (next - lambda).abs() < 1e-13 {
            return (chosen, next);
        }
        lambda = next;
    }
}
