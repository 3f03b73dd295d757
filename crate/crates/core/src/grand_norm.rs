//! The ε-sweep `φ(ε) = ε^θ ‖f‖_{L^{p-ε}(a^{ε/p})}` and its supremum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{FunctionSpec, WeightSpec};
use crate::quadrature::{certify, integrate, root_with_error, Domain, IntegralTask};

pub const DEFAULT_GRID: usize = 256;
pub const DEFAULT_REFINE: usize = 3;
/// Geometric grid reaches `(p-1)·2^{-depth}`.
pub const DEFAULT_GEOMETRIC_DEPTH: u32 = 12;
pub const DEFAULT_CEILING: f64 = 1e12;
pub const DEFAULT_CLOSURE_TOL: f64 = 1e-3;
pub const DEFAULT_VANISHING_STEPS: u32 = 20;

const GOLDEN_STEPS: usize = 10;
const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Which ε-dependence the norm uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `ε^θ (∫ |f|^{p-ε} a^{ε/p})^{1/(p-ε)}`.
    #[default]
    Generalized,
    /// `(ε^θ ∫ |f|^{p-ε} a^ε)^{1/(p-ε)}`.
    Equivalent,
    /// `(ε ∫ |f|^{p-ε})^{1/(p-ε)}`; ignores the weight.
    Classical,
    /// `(ε^θ ∫ |f|^{p-ε})^{1/(p-ε)}`; ignores the weight.
    PlainTheta,
}

impl Variant {
    /// Weight exponent σ(ε) and prefactor at ε.
    pub fn shape(self, p: f64, theta: f64, eps: f64) -> (f64, f64) {
        let r = p - eps;
        match self {
            Variant::Generalized => (eps / p, eps.powf(theta)),
            Variant::Equivalent => (eps, eps.powf(theta / r)),
            Variant::Classical => (0.0, eps.powf(1.0 / r)),
            Variant::PlainTheta => (0.0, eps.powf(theta / r)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrandNormParams {
    pub p: f64,
    pub theta: f64,
    pub weight: WeightSpec,
    #[serde(default)]
    pub variant: Variant,
    #[serde(default = "default_grid")]
    pub grid_size: usize,
    #[serde(default = "default_refine")]
    pub refine_rounds: usize,
    #[serde(default = "default_depth")]
    pub geometric_depth: u32,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_ceiling")]
    pub ceiling: f64,
    #[serde(default = "default_domain")]
    pub domain: Domain,
}

fn default_grid() -> usize {
    DEFAULT_GRID
}
fn default_refine() -> usize {
    DEFAULT_REFINE
}
fn default_depth() -> u32 {
    DEFAULT_GEOMETRIC_DEPTH
}
fn default_tol() -> f64 {
    crate::quadrature::DEFAULT_TOL
}
fn default_ceiling() -> f64 {
    DEFAULT_CEILING
}
fn default_domain() -> Domain {
    Domain::Whole
}

impl GrandNormParams {
    pub fn new(p: f64, theta: f64, weight: WeightSpec) -> Self {
        GrandNormParams {
            p,
            theta,
            weight,
            variant: Variant::Generalized,
            grid_size: DEFAULT_GRID,
            refine_rounds: DEFAULT_REFINE,
            geometric_depth: DEFAULT_GEOMETRIC_DEPTH,
            tol: default_tol(),
            ceiling: DEFAULT_CEILING,
            domain: Domain::Whole,
        }
    }

    pub fn variant(mut self, v: Variant) -> Self {
        self.variant = v;
        self
    }

    pub fn grid(mut self, m: usize) -> Self {
        self.grid_size = m;
        self
    }

    pub fn refine(mut self, k: usize) -> Self {
        self.refine_rounds = k;
        self
    }

    pub fn tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn domain(mut self, d: Domain) -> Self {
        self.domain = d;
        self
    }

    pub fn ceiling(mut self, c: f64) -> Self {
        self.ceiling = c;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 1.0 && self.p.is_finite()) {
            return Err(Error::invalid(format!("p must be in (1, ∞), got {}", self.p)));
        }
        if !(self.theta >= 0.0 && self.theta.is_finite()) {
            return Err(Error::invalid(format!("θ must be >= 0, got {}", self.theta)));
        }
        if self.grid_size < 8 {
            return Err(Error::invalid(format!(
                "ε-grid size must be >= 8, got {}",
                self.grid_size
            )));
        }
        if self.refine_rounds < 1 {
            return Err(Error::invalid("refinement rounds must be >= 1"));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::invalid(format!("tolerance must be in (0, 1), got {}", self.tol)));
        }
        if !(self.ceiling > 0.0) {
            return Err(Error::invalid("ceiling must be positive"));
        }
        self.weight.validate()
    }

    /// Upper end of the ε range.
    pub fn eps_max(&self) -> f64 {
        self.p - 1.0
    }

    /// Uniform `(p-1) i / m` plus geometric `(p-1) 2^{-k}`, ascending.
    pub fn base_grid(&self) -> Vec<f64> {
        let top = self.eps_max();
        let m = self.grid_size;
        let mut eps: Vec<f64> = (1..=m).map(|i| top * i as f64 / m as f64).collect();
        eps.extend((1..=self.geometric_depth).map(|k| top * 0.5f64.powi(k as i32)));
        eps.sort_by(f64::total_cmp);
        eps.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * top);
        eps
    }
}

/// One sample of the ε-curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub eps: f64,
    pub phi: f64,
    /// Propagated quadrature error of `phi`.
    pub err: f64,
}

/// Where on the ε-range the best sample lies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Interior,
    /// The supremum is attained at `ε = p - 1`.
    UpperEndpoint,
    /// The best sample is the smallest ε evaluated; the sup may lie in
    /// `(0, ε_min)`.
    LowerEdge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrandNormResult {
    pub value: f64,
    pub argmax: f64,
    /// Quadrature error of the sample at `argmax`.
    pub error_bound: f64,
    pub boundary: Boundary,
    pub variant: Variant,
    pub p: f64,
    pub theta: f64,
    /// Samples in ascending ε.
    pub curve: Vec<CurvePoint>,
}

impl GrandNormResult {
    /// Largest per-sample error on the curve.
    pub fn max_error(&self) -> f64 {
        self.curve.iter().map(|c| c.err).fold(0.0, f64::max)
    }
}

/// `φ(ε)` for one ε.
pub fn phi(f: &FunctionSpec, params: &GrandNormParams, eps: f64) -> Result<CurvePoint> {
    let r = params.p - eps;
    let (sigma, pref) = params.variant.shape(params.p, params.theta, eps);
    let task = IntegralTask::new(f, r, &params.weight, sigma, params.domain.clone()).tolerance(params.tol);
    let res = integrate(&task)?;
    let (root, root_err) = root_with_error(res.value, res.total_error(), r);
    Ok(CurvePoint {
        eps,
        phi: pref * root,
        err: pref * root_err,
    })
}

fn check_dims(f: &FunctionSpec, params: &GrandNormParams) -> Result<()> {
    params.validate()?;
    f.validate()?;
    if f.dim() != params.weight.dim {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: params.weight.dim,
        });
    }
    Ok(())
}

/// Supremum of the ε-curve over the hybrid grid with golden-section refinement.
pub fn grand_norm(f: &FunctionSpec, params: &GrandNormParams) -> Result<GrandNormResult> {
    check_dims(f, params)?;
    screen(f, params)?;
    sweep(&mut |eps| phi(f, params, eps), params)
}

/// Cheap majorant test over the whole grid so that divergence anywhere on
/// the ε-range is reported before any quadrature runs.
fn screen(f: &FunctionSpec, params: &GrandNormParams) -> Result<()> {
    if params.domain != Domain::Whole {
        return Ok(());
    }
    for eps in params.base_grid().into_iter().rev() {
        let (sigma, _) = params.variant.shape(params.p, params.theta, eps);
        let checked = certify(f, params.p - eps, &params.weight, sigma).map(|_| ());
        if let Err(e @ (Error::Divergent(_) | Error::Undecided(_))) = checked {
            return sample(&mut |_| Err(e.clone()), eps, params, &[]).map(|_| ());
        }
    }
    Ok(())
}

/// The ε-curve on the base grid, without refinement.
pub fn epsilon_curve(f: &FunctionSpec, params: &GrandNormParams) -> Result<Vec<CurvePoint>> {
    check_dims(f, params)?;
    let mut curve = Vec::new();
    for eps in params.base_grid() {
        curve.push(sample(&mut |e| phi(f, params, e), eps, params, &curve)?);
    }
    Ok(curve)
}

/// Evaluates one sample and converts quadrature failures into curve-level
/// verdicts carrying the partial curve.
fn sample(
    eval: &mut dyn FnMut(f64) -> Result<CurvePoint>,
    eps: f64,
    params: &GrandNormParams,
    partial: &[CurvePoint],
) -> Result<CurvePoint> {
    match eval(eps) {
        Ok(pt) if pt.phi > params.ceiling => Err(Error::NotInSpace {
            epsilon: eps,
            reason: format!("φ(ε) = {:e} exceeds the ceiling {:e}", pt.phi, params.ceiling),
            partial: sorted(partial),
        }),
        Ok(pt) => Ok(pt),
        Err(Error::Divergent(reason)) => Err(Error::NotInSpace {
            epsilon: eps,
            reason: format!("integral diverges: {reason}"),
            partial: sorted(partial),
        }),
        Err(Error::Undecided(reason)) => Err(Error::NotInSpace {
            epsilon: eps,
            reason: format!("finiteness cannot be certified: {reason}"),
            partial: sorted(partial),
        }),
        Err(e @ Error::Accuracy { .. }) => Err(Error::CurveAccuracy {
            epsilon: eps,
            partial: sorted(partial),
            source: Box::new(e),
        }),
        Err(e) => Err(e),
    }
}

fn sorted(curve: &[CurvePoint]) -> Vec<CurvePoint> {
    let mut v = curve.to_vec();
    v.sort_by(|a, b| a.eps.total_cmp(&b.eps));
    v
}

/// Grid evaluation, then `refine_rounds` golden-section searches inside the
/// bracket formed by the neighbours of the current best sample.
pub(crate) fn sweep(
    eval: &mut dyn FnMut(f64) -> Result<CurvePoint>,
    params: &GrandNormParams,
) -> Result<GrandNormResult> {
    let top = params.eps_max();
    let mut curve: Vec<CurvePoint> = Vec::new();
    for eps in params.base_grid() {
        let pt = sample(eval, eps, params, &curve)?;
        curve.push(pt);
    }

    for _ in 0..params.refine_rounds {
        curve.sort_by(|a, b| a.eps.total_cmp(&b.eps));
        let best = best_index(&curve);
        let lo = if best == 0 { curve[0].eps } else { curve[best - 1].eps };
        let hi = if best + 1 == curve.len() {
            top
        } else {
            curve[best + 1].eps
        };
        if hi - lo <= 1e-12 * top {
            break;
        }
        let (mut a, mut b) = (lo, hi);
        let mut c = b - INV_PHI * (b - a);
        let mut d = a + INV_PHI * (b - a);
        let mut fc = sample(eval, c, params, &curve)?;
        curve.push(fc);
        let mut fd = sample(eval, d, params, &curve)?;
        curve.push(fd);
        for _ in 0..GOLDEN_STEPS {
            if fc.phi >= fd.phi {
                b = d;
                d = c;
                fd = fc;
                c = b - INV_PHI * (b - a);
                fc = sample(eval, c, params, &curve)?;
                curve.push(fc);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + INV_PHI * (b - a);
                fd = sample(eval, d, params, &curve)?;
                curve.push(fd);
            }
        }
    }

    curve.sort_by(|a, b| a.eps.total_cmp(&b.eps));
    curve.dedup_by(|a, b| a.eps == b.eps);
    let best = best_index(&curve);
    let pt = curve[best];
    let boundary = if best + 1 == curve.len() && (pt.eps - top).abs() <= 1e-12 * top {
        Boundary::UpperEndpoint
    } else if best == 0 {
        Boundary::LowerEdge
    } else {
        Boundary::Interior
    };
    Ok(GrandNormResult {
        value: pt.phi,
        argmax: pt.eps,
        error_bound: pt.err,
        boundary,
        variant: params.variant,
        p: params.p,
        theta: params.theta,
        curve,
    })
}

/// Index of the largest φ; ties go to the larger ε.
fn best_index(curve: &[CurvePoint]) -> usize {
    let mut best = 0;
    for (i, c) in curve.iter().enumerate() {
        if c.phi >= curve[best].phi {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureVerdict {
    /// The sequence decreases and ends below the closure tolerance.
    Vanishes,
    /// The sequence is flat or growing as ε → 0.
    DoesNotVanish,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VanishingLimit {
    pub sequence: Vec<CurvePoint>,
    pub limit_estimate: f64,
    pub belongs_to_closure: bool,
    pub verdict: ClosureVerdict,
    /// Fitted slope of `log φ` against `log ε` over the tail of the sequence.
    pub tail_slope: f64,
    pub closure_tol: f64,
}

/// Evaluates φ at `ε_k = (p-1) 2^{-k}`, `k = 1..=steps`, and classifies the tail.
pub fn vanishing_limit(
    f: &FunctionSpec,
    params: &GrandNormParams,
    steps: u32,
    closure_tol: f64,
) -> Result<VanishingLimit> {
    check_dims(f, params)?;
    if steps < 4 {
        return Err(Error::invalid("vanishing_limit needs at least 4 steps"));
    }
    let top = params.eps_max();
    let mut seq = Vec::new();
    for k in 1..=steps {
        let eps = top * 0.5f64.powi(k as i32);
        seq.push(sample(&mut |e| phi(f, params, e), eps, params, &seq)?);
    }
    Ok(classify(seq, closure_tol))
}

pub(crate) fn classify(seq: Vec<CurvePoint>, closure_tol: f64) -> VanishingLimit {
    let n = seq.len();
    let tail = &seq[n.saturating_sub(6)..];
    let last = seq[n - 1];
    let tail_slope = log_slope(tail);
    let decreasing = tail.windows(2).all(|w| w[1].phi <= w[0].phi + w[0].err + w[1].err);
    let verdict = if last.phi == 0.0 && decreasing {
        ClosureVerdict::Vanishes
    } else if !(tail_slope > 1e-3) {
        ClosureVerdict::DoesNotVanish
    } else if decreasing && last.phi < closure_tol {
        ClosureVerdict::Vanishes
    } else {
        ClosureVerdict::Undecided
    };
    VanishingLimit {
        limit_estimate: last.phi,
        belongs_to_closure: verdict == ClosureVerdict::Vanishes,
        verdict,
        tail_slope,
        closure_tol,
        sequence: seq,
    }
}

/// Least-squares slope of `log φ` on `log ε`; zero samples count as steep decay.
fn log_slope(pts: &[CurvePoint]) -> f64 {
    if pts.iter().any(|p| p.phi <= 0.0) {
        return f64::INFINITY;
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.eps.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.phi.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Hölder majorant of φ(ε), `ε^θ ((∫|f|^p)^{(p-ε)/p} (∫a)^{ε/p})^{1/(p-ε)}`,
/// from the two integrals.
pub fn holder_bound(eps: f64, p: f64, theta: f64, lp_integral: f64, weight_integral: f64) -> f64 {
    let r = p - eps;
    eps.powf(theta) * (lp_integral.powf(r / p) * weight_integral.powf(eps / p)).powf(1.0 / r)
}

/// Generalized and equivalent norms of `f` and their ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceRatio {
    pub generalized: f64,
    pub equivalent: f64,
    pub ratio: f64,
}

pub fn equivalence_ratio(f: &FunctionSpec, params: &GrandNormParams) -> Result<EquivalenceRatio> {
    let g = grand_norm(f, &params.clone().variant(Variant::Generalized))?;
    let e = grand_norm(f, &params.clone().variant(Variant::Equivalent))?;
    Ok(EquivalenceRatio {
        generalized: g.value,
        equivalent: e.value,
        ratio: if e.value > 0.0 { g.value / e.value } else { f64::NAN },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MeasurableSet;

    fn unit_params(p: f64, theta: f64) -> GrandNormParams {
        GrandNormParams::new(p, theta, WeightSpec::unit())
    }

    #[test]
    fn indicator_curve_is_identity() {
        let f = FunctionSpec::interval(0.0, 1.0);
        let params = unit_params(2.0, 1.0);
        let r = grand_norm(&f, &params).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
        assert!((r.argmax - 1.0).abs() < 1e-12);
        assert_eq!(r.boundary, Boundary::UpperEndpoint);
        for c in epsilon_curve(&f, &params).unwrap() {
            assert!((c.phi - c.eps).abs() < 1e-10, "{c:?}");
        }
    }

    #[test]
    fn theta_zero_indicator_is_one() {
        let r = grand_norm(&FunctionSpec::interval(0.0, 1.0), &unit_params(2.0, 0.0)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn plain_theta_variant_closed_form() {
        // φ(ε) = ε^{2/(3-ε)} on (0, 2]; brute-force maximum over a dense grid
        let f = FunctionSpec::constant(1.0);
        let params = unit_params(3.0, 2.0)
            .variant(Variant::PlainTheta)
            .domain(Domain::interval(0.0, 1.0));
        let r = grand_norm(&f, &params).unwrap();
        let oracle = (1..=4096)
            .map(|i| 2.0 * i as f64 / 4096.0)
            .map(|e: f64| e.powf(2.0 / (3.0 - e)))
            .fold(0.0, f64::max);
        assert!((r.value - oracle).abs() < 1e-6);
        assert!((r.value - 4.0).abs() < 1e-9);
    }

    #[test]
    fn exp_abs_plain_lebesgue_sup() {
        // θ = 0, a = 1: φ(ε) = (2/(2-ε))^{1/(2-ε)}
        let r = grand_norm(&FunctionSpec::exp_abs(), &unit_params(2.0, 0.0)).unwrap();
        for c in &r.curve {
            let exact = (2.0 / (2.0 - c.eps)).powf(1.0 / (2.0 - c.eps));
            assert!((c.phi - exact).abs() < 1e-8 * exact);
        }
    }

    #[test]
    fn divergence_becomes_membership_failure() {
        let f = FunctionSpec::power_decay(0.6);
        match grand_norm(&f, &unit_params(2.0, 1.0)) {
            Err(e @ Error::NotInSpace { .. }) => assert!(e.is_membership_failure()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ceiling_detection() {
        let f = FunctionSpec::interval(0.0, 1.0).scale(1e13);
        let err = grand_norm(&f, &unit_params(2.0, 1.0)).unwrap_err();
        assert!(err.is_membership_failure());
    }

    #[test]
    fn vanishing_limit_examples() {
        let f = FunctionSpec::interval(0.0, 1.0);
        let v = vanishing_limit(&f, &unit_params(2.0, 1.0), 20, 1e-3).unwrap();
        assert!(v.belongs_to_closure);
        assert!((v.limit_estimate - 2f64.powi(-20)).abs() < 1e-12);
        let v = vanishing_limit(&f, &unit_params(2.0, 0.0), 20, 1e-3).unwrap();
        assert!(!v.belongs_to_closure);
        assert_eq!(v.verdict, ClosureVerdict::DoesNotVanish);
    }

    #[test]
    fn restriction_to_a_set_domain_matches_restricted_function() {
        let f = FunctionSpec::exp_abs();
        let set = MeasurableSet::interval(0.5, 1.0);
        let params = GrandNormParams::new(2.0, 1.0, WeightSpec::power_decay(2.0)).grid(16);
        let a = grand_norm(&f.clone().restrict(&set).unwrap(), &params).unwrap();
        let b = grand_norm(&f, &params.clone().domain(Domain::set(set))).unwrap();
        assert!((a.value - b.value).abs() < 1e-9 * a.value);
    }

    #[test]
    fn parameter_validation() {
        let f = FunctionSpec::exp_abs();
        assert!(grand_norm(&f, &unit_params(1.0, 1.0)).is_err());
        assert!(grand_norm(&f, &unit_params(2.0, -1.0)).is_err());
        assert!(grand_norm(&f, &unit_params(2.0, 1.0).grid(4)).is_err());
        let f2 = FunctionSpec::exp_abs().with_dim(2);
        assert!(matches!(
            grand_norm(&f2, &unit_params(2.0, 1.0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
