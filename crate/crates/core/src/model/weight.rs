use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::set::{euclid, MeasurableSet};
use super::FunctionSpec;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, Domain, IntegralTask};
use crate::report::{Check, VerificationReport};

/// Pass threshold for the sampled submultiplicativity ratio.
pub const SUBMULTIPLICATIVE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightKind {
    /// `c`, c > 0.
    Constant { c: f64 },
    /// `(1 + |x|)^s`, s ≥ 0.
    PowerGrowth { s: f64 },
    /// `(1 + |x|)^(-s)`, s > 0.
    PowerDecay { s: f64 },
    /// `exp(s |x|)`, s ≥ 0.
    ExpGrowth { s: f64 },
    /// `exp(-q |x|²)`, q > 0.
    Gaussian { q: f64 },
}

/// A positive radial weight on ℝⁿ.
///
/// The two claim flags default to what the kind actually satisfies; a JSON
/// document may override them, and `validate` rejects an L¹ claim that the
/// integral does not support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    #[serde(flatten)]
    pub kind: WeightKind,
    #[serde(default = "one")]
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claims_beurling: Option<bool>,
    #[serde(default, rename = "claims_l1", skip_serializing_if = "Option::is_none")]
    pub claims_l1: Option<bool>,
}

fn one() -> usize {
    1
}

/// Exact radial form `c · exp(-a ρ² - b ρ) · (1 + ρ)^m` of a weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct RadialForm {
    pub c: f64,
    pub a: f64,
    pub b: f64,
    pub m: f64,
}

impl WeightSpec {
    pub fn new(kind: WeightKind, dim: usize) -> Self {
        WeightSpec {
            kind,
            dim,
            claims_beurling: None,
            claims_l1: None,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(WeightKind::Constant { c }, 1)
    }

    pub fn unit() -> Self {
        Self::constant(1.0)
    }

    pub fn power_growth(s: f64) -> Self {
        Self::new(WeightKind::PowerGrowth { s }, 1)
    }

    pub fn power_decay(s: f64) -> Self {
        Self::new(WeightKind::PowerDecay { s }, 1)
    }

    pub fn exp_growth(s: f64) -> Self {
        Self::new(WeightKind::ExpGrowth { s }, 1)
    }

    pub fn gaussian(q: f64) -> Self {
        Self::new(WeightKind::Gaussian { q }, 1)
    }

    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = dim;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.dim > 3 {
            return Err(Error::invalid(format!(
                "weight dimension must be in 1..=3, got {}",
                self.dim
            )));
        }
        let ok = match self.kind {
            WeightKind::Constant { c } => c > 0.0 && c.is_finite(),
            WeightKind::PowerGrowth { s } | WeightKind::ExpGrowth { s } => s >= 0.0 && s.is_finite(),
            WeightKind::PowerDecay { s } => s > 0.0 && s.is_finite(),
            WeightKind::Gaussian { q } => q > 0.0 && q.is_finite(),
        };
        if !ok {
            return Err(Error::invalid(format!(
                "weight parameters out of range: {:?}",
                self.kind
            )));
        }
        if self.claims_l1 == Some(true) && !self.natural_l1() {
            return Err(Error::invalid(format!(
                "weight {:?} in dimension {} is claimed integrable but its integral diverges",
                self.kind, self.dim
            )));
        }
        Ok(())
    }

    pub fn radial(&self, rho: f64) -> f64 {
        match self.kind {
            WeightKind::Constant { c } => c,
            WeightKind::PowerGrowth { s } => (1.0 + rho).powf(s),
            WeightKind::PowerDecay { s } => (1.0 + rho).powf(-s),
            WeightKind::ExpGrowth { s } => (s * rho).exp(),
            WeightKind::Gaussian { q } => (-q * rho * rho).exp(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.radial(euclid(x))
    }

    /// `w(x)^sigma`, with `w^0 = 1` exactly.
    pub(crate) fn eval_pow(&self, x: &[f64], sigma: f64) -> f64 {
        if sigma == 0.0 {
            return 1.0;
        }
        let rho = euclid(x);
        match self.kind {
            WeightKind::Constant { c } => c.powf(sigma),
            WeightKind::PowerGrowth { s } => (1.0 + rho).powf(s * sigma),
            WeightKind::PowerDecay { s } => (1.0 + rho).powf(-s * sigma),
            WeightKind::ExpGrowth { s } => (s * sigma * rho).exp(),
            WeightKind::Gaussian { q } => (-q * sigma * rho * rho).exp(),
        }
    }

    pub(crate) fn radial_form(&self) -> RadialForm {
        let base = RadialForm {
            c: 1.0,
            a: 0.0,
            b: 0.0,
            m: 0.0,
        };
        match self.kind {
            WeightKind::Constant { c } => RadialForm { c, ..base },
            WeightKind::PowerGrowth { s } => RadialForm { m: s, ..base },
            WeightKind::PowerDecay { s } => RadialForm { m: -s, ..base },
            WeightKind::ExpGrowth { s } => RadialForm { b: -s, ..base },
            WeightKind::Gaussian { q } => RadialForm { a: q, ..base },
        }
    }

    fn natural_beurling(&self) -> bool {
        match self.kind {
            WeightKind::Constant { c } => c >= 1.0,
            WeightKind::PowerGrowth { .. } | WeightKind::ExpGrowth { .. } => true,
            WeightKind::PowerDecay { .. } | WeightKind::Gaussian { .. } => false,
        }
    }

    fn natural_l1(&self) -> bool {
        match self.kind {
            WeightKind::PowerDecay { s } => s > self.dim as f64,
            WeightKind::Gaussian { .. } => true,
            _ => false,
        }
    }

    pub fn claims_beurling(&self) -> bool {
        self.claims_beurling.unwrap_or_else(|| self.natural_beurling())
    }

    pub fn claims_l1(&self) -> bool {
        self.claims_l1.unwrap_or_else(|| self.natural_l1())
    }

    /// Smallest value of the weight on the closure of `set`.
    pub fn min_on(&self, set: &MeasurableSet) -> f64 {
        let lo = self.radial(set.inner_radius());
        let hi = self.radial(set.outer_radius());
        lo.min(hi)
    }

    pub fn label(&self) -> String {
        match self.kind {
            WeightKind::Constant { c } => format!("constant({c})"),
            WeightKind::PowerGrowth { s } => format!("power_growth({s})"),
            WeightKind::PowerDecay { s } => format!("power_decay({s})"),
            WeightKind::ExpGrowth { s } => format!("exp_growth({s})"),
            WeightKind::Gaussian { q } => format!("gaussian({q})"),
        }
    }
}

/// Samples `sample_count` pairs `(x, y)` uniformly in `set` and checks
/// `w(x+y) <= w(x) w(y)` together with the Beurling lower bound `w >= 1`.
pub fn check_submultiplicative(
    weight: &WeightSpec,
    sample_count: usize,
    set: &MeasurableSet,
) -> Result<VerificationReport> {
    check_submultiplicative_seeded(weight, sample_count, set, 0x5eed)
}

pub fn check_submultiplicative_seeded(
    weight: &WeightSpec,
    sample_count: usize,
    set: &MeasurableSet,
    seed: u64,
) -> Result<VerificationReport> {
    weight.validate()?;
    set.validate()?;
    if sample_count == 0 {
        return Err(Error::invalid("sample_count must be >= 1"));
    }
    if set.dim() != weight.dim {
        return Err(Error::DimensionMismatch {
            expected: weight.dim,
            found: set.dim(),
        });
    }
    let (lo, hi) = set.bounds();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        lo.iter()
            .zip(&hi)
            .map(|(&a, &b)| if a == b { a } else { rng.gen_range(a..b) })
            .collect()
    };

    let mut worst_ratio = f64::NEG_INFINITY;
    let mut min_weight = f64::INFINITY;
    for _ in 0..sample_count {
        let x = draw(&mut rng);
        let y = draw(&mut rng);
        let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let (wx, wy, wsum) = (weight.eval(&x), weight.eval(&y), weight.eval(&sum));
        worst_ratio = worst_ratio.max(wsum / (wx * wy));
        min_weight = min_weight.min(wx).min(wy).min(wsum);
    }
    // the origin is where every catalog weight attains its extreme value
    if set.contains(&vec![0.0; weight.dim]) || set.inner_radius() == 0.0 {
        min_weight = min_weight.min(weight.radial(0.0));
    }

    let label = weight.label();
    let mut report = VerificationReport::new("weight-submultiplicative");
    report.push(
        Check::compare(
            format!("submultiplicative/{label}"),
            "submultiplicative weight",
            worst_ratio,
            1.0 + SUBMULTIPLICATIVE_SLACK,
            worst_ratio <= 1.0 + SUBMULTIPLICATIVE_SLACK,
        )
        .with_detail(format!("max w(x+y)/(w(x)w(y)) over {sample_count} pairs"))
        .with_constant("samples", sample_count as f64),
    );
    report.push(
        Check::compare(
            format!("beurling-minimum/{label}"),
            "beurling weight",
            1.0,
            min_weight,
            min_weight >= 1.0,
        )
        .with_detail("sampled minimum of the weight must be >= 1"),
    );
    Ok(report)
}

/// Outcome of testing whether a grandizer is integrable over ℝⁿ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Integrability {
    Integrable { value: f64, error_bound: f64 },
    Divergent { reason: String },
    Undecided { reason: String },
}

impl Integrability {
    pub fn is_integrable(&self) -> bool {
        matches!(self, Integrability::Integrable { .. })
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Integrability::Integrable { value, .. } => Some(*value),
            _ => None,
        }
    }
}

/// Decides `a ∈ L¹(ℝⁿ)` and returns `∫ a` when it converges.
pub fn grandizer_integrable(weight: &WeightSpec, tol: f64) -> Result<Integrability> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    weight.validate()?;
    let one = FunctionSpec::constant(1.0).with_dim(weight.dim);
    let task = IntegralTask::new(&one, 1.0, weight, 1.0, Domain::Whole).tolerance(tol);
    match integrate(&task) {
        Ok(res) => Ok(Integrability::Integrable {
            value: res.value,
            error_bound: res.error_bound + res.tail_bound,
        }),
        Err(Error::Divergent(reason)) => Ok(Integrability::Divergent { reason }),
        Err(Error::Undecided(reason)) => Ok(Integrability::Undecided { reason }),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_are_positive() {
        let ws = [
            WeightSpec::constant(0.5),
            WeightSpec::power_growth(2.0),
            WeightSpec::power_decay(2.0),
            WeightSpec::exp_growth(1.0),
            WeightSpec::gaussian(0.5),
        ];
        for w in &ws {
            for &x in &[-20.0, -3.0, 0.0, 0.5, 7.0, 20.0] {
                assert!(w.eval(&[x]) > 0.0, "{w:?} at {x}");
            }
        }
    }

    #[test]
    fn power_growth_is_submultiplicative() {
        let set = MeasurableSet::cube(2, -10.0, 10.0);
        let w = WeightSpec::power_growth(2.0).with_dim(2);
        let rep = check_submultiplicative(&w, 10_000, &set).unwrap();
        assert!(rep.all_passed(), "{rep:#?}");
        assert!(rep.checks[0].lhs.unwrap() <= 1.0);
    }

    #[test]
    fn unit_constant_ratio_is_exactly_one() {
        let set = MeasurableSet::interval(-5.0, 5.0);
        let rep = check_submultiplicative(&WeightSpec::unit(), 100, &set).unwrap();
        assert!(rep.all_passed());
        assert_eq!(rep.checks[0].lhs, Some(1.0));
    }

    #[test]
    fn power_decay_is_not_beurling() {
        let set = MeasurableSet::interval(-10.0, 10.0);
        let rep = check_submultiplicative(&WeightSpec::power_decay(2.0), 1000, &set).unwrap();
        let beurling = rep.checks.iter().find(|c| c.name.starts_with("beurling")).unwrap();
        assert!(!beurling.passed());
        assert!(!rep.all_passed());
    }

    #[test]
    fn claim_flags_agree_with_sampling() {
        let set = MeasurableSet::interval(-20.0, 20.0);
        let ws = [
            WeightSpec::constant(1.0),
            WeightSpec::constant(3.0),
            WeightSpec::constant(0.5),
            WeightSpec::power_growth(1.0),
            WeightSpec::power_growth(2.5),
            WeightSpec::power_decay(2.0),
            WeightSpec::exp_growth(0.7),
            WeightSpec::gaussian(1.0),
        ];
        for w in &ws {
            let rep = check_submultiplicative(w, 10_000, &set).unwrap();
            assert_eq!(rep.all_passed(), w.claims_beurling(), "{}", w.label());
        }
    }

    #[test]
    fn l1_claims_are_checked() {
        let mut w = WeightSpec::constant(1.0);
        w.claims_l1 = Some(true);
        assert!(w.validate().is_err());
        let mut w = WeightSpec::power_decay(2.0).with_dim(2);
        assert!(!w.claims_l1());
        w.claims_l1 = Some(true);
        assert!(w.validate().is_err());
        assert!(WeightSpec::power_decay(2.0).claims_l1());
    }

    #[test]
    fn integrability_closed_forms() {
        let r = grandizer_integrable(&WeightSpec::power_decay(2.0), 1e-10).unwrap();
        let v = r.value().unwrap();
        assert!((v - 2.0).abs() < 1e-8, "{v}");

        let r = grandizer_integrable(&WeightSpec::unit(), 1e-10).unwrap();
        assert!(matches!(r, Integrability::Divergent { .. }));

        for q in [0.5, 1.0, 4.0] {
            let r = grandizer_integrable(&WeightSpec::gaussian(q), 1e-10).unwrap();
            let exact = (std::f64::consts::PI / q).sqrt();
            assert!((r.value().unwrap() - exact).abs() < 1e-8 * exact);
        }

        let r = grandizer_integrable(&WeightSpec::power_decay(1.0), 1e-8).unwrap();
        assert!(!r.is_integrable());
        let r = grandizer_integrable(&WeightSpec::power_growth(1.0), 1e-8).unwrap();
        assert!(!r.is_integrable());
    }

    #[test]
    fn integrability_in_higher_dimension() {
        // 2π ∫ (1+ρ)^{-3} ρ dρ = 2π · 1/2 = π
        let w = WeightSpec::power_decay(3.0).with_dim(2);
        let r = grandizer_integrable(&w, 1e-9).unwrap();
        let v = r.value().unwrap();
        assert!((v - std::f64::consts::PI).abs() < 1e-6, "{v}");
    }

    #[test]
    fn minimum_on_box() {
        let e = MeasurableSet::interval(0.0, 1.0);
        assert_eq!(WeightSpec::power_growth(2.0).min_on(&e), 1.0);
        assert_eq!(WeightSpec::power_decay(2.0).min_on(&e), 0.25);
    }

    #[test]
    fn json_shape() {
        let w: WeightSpec = serde_json::from_str(r#"{"kind":"power_decay","s":2}"#).unwrap();
        assert_eq!(w, WeightSpec::power_decay(2.0));
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"kind":"power_decay","s":2.0,"dim":1}"#);
    }
}
