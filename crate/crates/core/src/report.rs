use serde::Serialize;

/// Protocol variant selecting the denominator of the profitability ratio.
///
/// Under the standard protocol a cycle's useful progression is the official
/// chain height H; under the orphan-aware (modified) protocol it is the
/// difficulty function D, which also counts publicly reported orphans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Standard,
    Orphan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportMode {
    Exact,
    MonteCarlo,
}

/// Per-cycle expectations and the profitability ratio they imply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfitabilityReport {
    /// E[reward]/E[H] (standard) or E[reward]/E[D] (orphan-aware).
    pub gamma: f64,
    pub e_g: f64,
    pub e_h: f64,
    pub e_d: f64,
    pub e_tau: f64,
    pub e_reward: f64,
    /// Monte Carlo standard error of gamma; absent for exact reports.
    pub stderr: Option<f64>,
    pub mode: ReportMode,
    pub variant: Variant,
}
