//! Named verification suites. Each suite is deterministic for a given
//! [`SuiteConfig`] and returns its checks sorted by name.

mod counterexample;
mod suites;

use serde::{Deserialize, Serialize};

use crate::ap_space::{APNormParams, FourierStrategy};
use crate::error::{Error, Result};
use crate::fourier::ConvGrid;
use crate::grand_norm::{GrandNormParams, DEFAULT_GRID};
use crate::model::{FunctionSpec, WeightSpec};
use crate::report::{Check, Tolerance, VerificationReport};

pub use counterexample::{prop5_lower_bound, prop5_sequence, prop6_check, Prop5Row, Prop5Sequence};

pub const SUITES: [&str; 8] = [
    "norm-axioms",
    "monotone-convergence",
    "inclusions",
    "closure-limit",
    "module-inequalities",
    "fourier-identities",
    "prop5-counterexample",
    "theorem6-pair-inclusions",
];

/// Property names a check may carry.
pub const PROPERTIES: [&str; 25] = [
    "norm nonnegativity",
    "norm definiteness",
    "norm homogeneity",
    "triangle inequality",
    "supremum domination",
    "monotone convergence",
    "local L1 bound",
    "translation invariance",
    "modulation invariance",
    "inclusion chain",
    "grandizer embedding",
    "theta monotonicity",
    "norm equivalence",
    "closure criterion",
    "submultiplicative weight",
    "beurling weight",
    "convolution module inequality",
    "bounded Fourier transform",
    "convolution symmetry",
    "Fourier transform accuracy",
    "shift rule",
    "modulation rule",
    "convolution theorem",
    "absolutely continuous norm counterexample",
    "pair space inclusions",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RosterEntry {
    pub name: String,
    pub f: FunctionSpec,
}

impl RosterEntry {
    pub fn new(name: impl Into<String>, f: FunctionSpec) -> Self {
        RosterEntry { name: name.into(), f }
    }
}

pub fn default_roster() -> Vec<RosterEntry> {
    vec![
        RosterEntry::new("exp_abs", FunctionSpec::exp_abs()),
        RosterEntry::new("gaussian", FunctionSpec::gaussian(0.5)),
        RosterEntry::new("indicator", FunctionSpec::interval(0.0, 1.0)),
        RosterEntry::new("power_decay", FunctionSpec::power_decay(3.0)),
    ]
}

pub fn default_weights() -> Vec<WeightSpec> {
    vec![
        WeightSpec::unit(),
        WeightSpec::power_decay(2.0),
        WeightSpec::power_growth(1.0),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: String,
    #[serde(default = "default_roster")]
    pub roster: Vec<RosterEntry>,
    #[serde(default = "default_weights")]
    pub weights: Vec<WeightSpec>,
    #[serde(default = "default_p_values")]
    pub p_values: Vec<f64>,
    #[serde(default = "default_theta_values")]
    pub theta_values: Vec<f64>,
    /// Frequency-side exponent.
    #[serde(default = "two")]
    pub q: f64,
    /// Frequency-side weight.
    #[serde(default = "default_freq_weight")]
    pub freq_weight: WeightSpec,
    /// `(p, θ)` used by the suites whose cost rules out the full grid.
    #[serde(default = "two")]
    pub focus_p: f64,
    #[serde(default = "one")]
    pub focus_theta: f64,
    #[serde(default)]
    pub tolerance: Tolerance,
    #[serde(default = "default_quad_tol")]
    pub quad_tol: f64,
    #[serde(default = "default_grid_size")]
    pub grid_size: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub fourier: FourierStrategy,
    #[serde(default)]
    pub conv: ConvGrid,
    /// Truncations `[-n, n]` for `n = 1..=monotone_n`.
    #[serde(default = "default_monotone_n")]
    pub monotone_n: u32,
    #[serde(default = "default_prop5_n")]
    pub prop5_n: u32,
    /// Transform grid for the restrictions `e^{-|t|} χ_{E_n}`, which live in `(1/2, 1)`.
    #[serde(default = "default_prop6_fourier")]
    pub prop6_fourier: FourierStrategy,
    #[serde(default = "default_eps_bars")]
    pub eps_bar_count: usize,
}

fn default_p_values() -> Vec<f64> {
    vec![1.5, 2.0, 3.0]
}
fn default_theta_values() -> Vec<f64> {
    vec![0.0, 1.0, 2.0]
}
fn two() -> f64 {
    2.0
}
fn one() -> f64 {
    1.0
}
fn default_freq_weight() -> WeightSpec {
    WeightSpec::power_decay(2.0)
}
fn default_quad_tol() -> f64 {
    1e-8
}
fn default_grid_size() -> usize {
    DEFAULT_GRID
}
fn default_seed() -> u64 {
    0x5eed
}
fn default_monotone_n() -> u32 {
    8
}
fn default_prop5_n() -> u32 {
    16
}
fn default_prop6_fourier() -> FourierStrategy {
    FourierStrategy::numeric(4.0, 1 << 12)
}
fn default_eps_bars() -> usize {
    8
}

impl SuiteConfig {
    pub fn new(suite: impl Into<String>) -> Self {
        SuiteConfig {
            suite: suite.into(),
            roster: default_roster(),
            weights: default_weights(),
            p_values: default_p_values(),
            theta_values: default_theta_values(),
            q: 2.0,
            freq_weight: default_freq_weight(),
            focus_p: 2.0,
            focus_theta: 1.0,
            tolerance: Tolerance::default(),
            quad_tol: default_quad_tol(),
            grid_size: DEFAULT_GRID,
            seed: default_seed(),
            fourier: FourierStrategy::default(),
            conv: ConvGrid::default(),
            monotone_n: default_monotone_n(),
            prop5_n: default_prop5_n(),
            prop6_fourier: default_prop6_fourier(),
            eps_bar_count: default_eps_bars(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !SUITES.contains(&self.suite.as_str()) {
            return Err(Error::UnknownSuite {
                name: self.suite.clone(),
                available: SUITES.join(", "),
            });
        }
        if self.roster.is_empty() {
            return Err(Error::invalid("roster must not be empty"));
        }
        if self.weights.is_empty() || self.p_values.is_empty() || self.theta_values.is_empty() {
            return Err(Error::invalid("weights, p values and θ values must not be empty"));
        }
        if !(self.tolerance.rtol > 0.0 && self.tolerance.atol > 0.0 && self.quad_tol > 0.0) {
            return Err(Error::invalid("all tolerances must be positive"));
        }
        for e in &self.roster {
            e.f.validate()?;
        }
        for w in self.weights.iter().chain([&self.freq_weight]) {
            w.validate()?;
        }
        for &p in self.p_values.iter().chain([&self.focus_p, &self.q]) {
            if !(p > 1.0 && p.is_finite()) {
                return Err(Error::invalid(format!("exponents must be in (1, ∞), got {p}")));
            }
        }
        for &t in self.theta_values.iter().chain([&self.focus_theta]) {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::invalid(format!("θ must be >= 0, got {t}")));
            }
        }
        if self.monotone_n == 0 || self.prop5_n == 0 || self.eps_bar_count == 0 {
            return Err(Error::invalid("sequence lengths must be >= 1"));
        }
        Ok(())
    }

    fn params(&self, p: f64, theta: f64, weight: &WeightSpec) -> GrandNormParams {
        GrandNormParams::new(p, theta, weight.clone())
            .tolerance(self.quad_tol)
            .grid(self.grid_size)
    }

    fn ap_params(&self, p: f64, theta: f64, weight: &WeightSpec) -> APNormParams {
        APNormParams::new(
            self.params(p, theta, weight),
            self.params(self.q, theta, &self.freq_weight),
        )
        .strategy(self.fourier)
    }
}

/// Runs the suite named in `config`.
pub fn run_suite(config: &SuiteConfig) -> Result<VerificationReport> {
    config.validate()?;
    let report = match config.suite.as_str() {
        "norm-axioms" => suites::norm_axioms(config)?,
        "monotone-convergence" => suites::monotone_convergence(config)?,
        "inclusions" => suites::inclusions(config)?,
        "closure-limit" => suites::closure_limit(config)?,
        "module-inequalities" => suites::module_inequalities(config)?,
        "fourier-identities" => suites::fourier_identities(config)?,
        "prop5-counterexample" => counterexample::suite(config)?,
        "theorem6-pair-inclusions" => suites::pair_inclusions(config)?,
        _ => unreachable!("validated above"),
    };
    let mut out = VerificationReport::new(config.suite.clone());
    out.extend(report);
    Ok(out.sorted())
}

/// Runs `body`; errors become skipped entries (unmet preconditions or
/// functions outside the space) or failed entries (anything else), so no
/// roster entry disappears from the report.
fn attempt(
    report: &mut VerificationReport,
    name: &str,
    property: &str,
    body: impl FnOnce(&mut VerificationReport) -> Result<()>,
) {
    let mut local = VerificationReport::new("");
    match body(&mut local) {
        Ok(()) => report.extend(local),
        Err(e @ (Error::Precondition(_) | Error::NotInSpace { .. } | Error::Divergent(_))) => {
            report.extend(local);
            report.push(Check::skipped(name, property, e.to_string()));
        }
        Err(Error::Side { side, source }) if source.is_membership_failure() => {
            report.extend(local);
            report.push(Check::skipped(name, property, format!("{side} side: {source}")));
        }
        Err(e) => {
            report.extend(local);
            report.push(Check::condition(name, property, false).with_detail(format!("computation failed: {e}")));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_lists_available_names() {
        let err = run_suite(&SuiteConfig::new("foo")).unwrap_err();
        match err {
            Error::UnknownSuite { available, .. } => assert!(available.contains("norm-axioms")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn config_validation() {
        let mut c = SuiteConfig::new("inclusions");
        c.roster.clear();
        assert!(c.validate().is_err());
        let mut c = SuiteConfig::new("inclusions");
        c.quad_tol = 0.0;
        assert!(c.validate().is_err());
        let c: SuiteConfig = serde_json::from_str(r#"{"suite": "closure-limit"}"#).unwrap();
        assert_eq!(c, SuiteConfig::new("closure-limit"));
    }
}
