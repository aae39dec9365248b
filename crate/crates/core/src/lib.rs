//! Block-withholding mining attacks as stochastic races.
//!
//! An attacker with relative hashrate `q` races the honest network (`p = 1 - q`)
//! for blocks. A mining strategy repeats a finite cycle; the sequence of block
//! finders within one cycle is a word over `{A, B}` (attacker / honest). The
//! crate computes strategy profitability exactly by enumerating all terminal
//! words of a cycle, and empirically by timed Monte Carlo with difficulty
//! retargeting, including the orphan-aware retargeting rule under which honest
//! mining is the unique optimal strategy.

pub mod analytic;
pub mod cli;
pub mod cycle;
pub mod difficulty;
pub mod error;
pub mod params;
pub mod report;
pub mod simulator;
pub mod strategy;

pub use cycle::{check_accounting, CycleRecord, CycleWord, Letter};
pub use error::Error;
pub use params::NetworkParams;
pub use report::{ProfitabilityReport, ReportMode, Variant};
pub use strategy::{Resolution, Strategy};
