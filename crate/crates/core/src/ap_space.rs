//! The paired norm `‖f‖ = ‖f‖_{L_a^{p),θ₁}} + ‖f̂‖_{L_b^{q),θ₂}}`, and the
//! convolution, module and local-L¹ inequalities built on it.
//!
//! When no analytic transform exists the frequency side works from the
//! numeric transform: `|f̂|` is the modulus of the linear interpolant of the
//! dual-grid samples, the pointwise gap to the true transform is bounded by
//! the transform error plus an interpolation term, and the part of the dual
//! axis beyond the grid is covered by `|f̂(γ)| ≤ C (1+|γ|)^{-1}` with
//! `C = 2 max(‖f‖₁, TV(f))`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Side};
use crate::fourier::{
    convolve, fourier_analytic, fourier_numeric, has_oscillatory_tail, l1_norm, sample_grid, sampled_span, Analytic,
    ConvGrid, NumericTransform, TransformWarning, DEFAULT_FFT_N, DEFAULT_FFT_R,
};
use crate::grand_norm::{grand_norm, sweep, CurvePoint, GrandNormParams, GrandNormResult};
use crate::model::{FunctionSpec, MeasurableSet, WeightKind, WeightSpec};
use crate::quadrature::{integrate, root_with_error, Domain, IntegralTask};
use crate::report::{Check, Tolerance, VerificationReport};

/// How `f̂` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierStrategy {
    #[serde(default = "yes")]
    pub prefer_analytic: bool,
    #[serde(default = "default_r")]
    pub half_width: f64,
    #[serde(default = "default_n")]
    pub samples: usize,
}

fn yes() -> bool {
    true
}
fn default_r() -> f64 {
    DEFAULT_FFT_R
}
fn default_n() -> usize {
    DEFAULT_FFT_N
}

impl Default for FourierStrategy {
    fn default() -> Self {
        FourierStrategy {
            prefer_analytic: true,
            half_width: DEFAULT_FFT_R,
            samples: DEFAULT_FFT_N,
        }
    }
}

impl FourierStrategy {
    pub fn numeric(half_width: f64, samples: usize) -> Self {
        FourierStrategy {
            prefer_analytic: false,
            half_width,
            samples,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct APNormParams {
    pub time: GrandNormParams,
    pub freq: GrandNormParams,
    #[serde(default)]
    pub fourier: FourierStrategy,
}

impl APNormParams {
    pub fn new(time: GrandNormParams, freq: GrandNormParams) -> Self {
        APNormParams {
            time,
            freq,
            fourier: FourierStrategy::default(),
        }
    }

    pub fn strategy(mut self, s: FourierStrategy) -> Self {
        self.fourier = s;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.time.validate()?;
        self.freq.validate()?;
        if self.time.weight.dim != self.freq.weight.dim {
            return Err(Error::DimensionMismatch {
                expected: self.time.weight.dim,
                found: self.freq.weight.dim,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformRoute {
    Analytic,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformDiagnostics {
    pub route: TransformRoute,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    /// Why the analytic route was not taken.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analytic_unsupported: Option<String>,
    /// Sup-norm error of the sampled transform on its grid.
    pub error_estimate: f64,
    /// Pointwise bound between the interpolated and the true `|f̂|`.
    pub pointwise_bound: f64,
    /// `C` in `|f̂(γ)| ≤ C (1+|γ|)^{-1}` beyond the grid.
    pub tail_coefficient: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<TransformWarning>,
}

impl TransformDiagnostics {
    fn analytic(formula: String) -> Self {
        TransformDiagnostics {
            route: TransformRoute::Analytic,
            formula: Some(formula),
            analytic_unsupported: None,
            error_estimate: 0.0,
            pointwise_bound: 0.0,
            tail_coefficient: 0.0,
            warnings: Vec::new(),
        }
    }
}

/// Sampled `f̂` with everything needed to bound integrals of `|f̂|`.
#[derive(Debug, Clone)]
struct SampledSide {
    spec: FunctionSpec,
    span: MeasurableSet,
    /// Pointwise bound on `| |interp| - |f̂| |` inside the span.
    delta: f64,
    peak: f64,
    tail_coef: f64,
    edge: f64,
}

#[derive(Debug, Clone)]
enum Rep {
    Analytic(FunctionSpec),
    Sampled(SampledSide),
}

/// `f̂` ready for weighted norms on the dual axis.
#[derive(Debug, Clone)]
pub struct FrequencySide {
    rep: Rep,
    pub diagnostics: TransformDiagnostics,
}

/// Quantities of `f` needed to control the sampled transform.
struct Moments {
    l1: f64,
    tv: f64,
    /// `∫ (1+|x|)² |f|` when certified finite.
    second: Option<f64>,
}

fn moments(f: &FunctionSpec, strategy: &FourierStrategy, tol: f64) -> Result<Moments> {
    let l1 = l1_norm(f, tol)?;
    let samples = sample_grid(f, strategy.half_width, strategy.samples);
    let mut tv = samples.first().map_or(0.0, |v| v.norm()) + samples.last().map_or(0.0, |v| v.norm());
    for w in samples.windows(2) {
        tv += (w[1] - w[0]).norm();
    }
    let growth = WeightSpec::power_growth(2.0);
    let second = match integrate(&IntegralTask::new(f, 1.0, &growth, 1.0, Domain::Whole).tolerance(tol.max(1e-6))) {
        Ok(res) => Some(res.value + res.total_error()),
        Err(Error::Divergent(_) | Error::Undecided(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(Moments { l1, tv, second })
}

impl FrequencySide {
    /// Analytic transform when the catalog has one (and it is preferred),
    /// otherwise the numeric transform with its error model.
    pub fn build(f: &FunctionSpec, strategy: &FourierStrategy, tol: f64) -> Result<Self> {
        f.validate()?;
        let analytic = fourier_analytic(f);
        let (formula, unsupported) = match analytic {
            Analytic::Transform { spec, formula } if strategy.prefer_analytic && !has_oscillatory_tail(&spec) => {
                return Ok(FrequencySide {
                    rep: Rep::Analytic(spec),
                    diagnostics: TransformDiagnostics::analytic(formula),
                })
            }
            Analytic::Transform { spec, formula } if strategy.prefer_analytic && has_oscillatory_tail(&spec) => (
                Some(formula),
                Some("closed form has a sinc factor; its integrals are taken on the numeric route".to_string()),
            ),
            Analytic::Transform { formula, .. } => (Some(formula), None),
            Analytic::Unsupported { reason } => (None, Some(reason)),
        };
        let num = fourier_numeric(f, strategy.half_width, strategy.samples)?;
        let m = moments(f, strategy, tol)?;
        let values: Vec<Complex64> = (0..num.len()).map(|k| num.value(k)).collect();
        let side = sampled_side(&num, &values, num.error_estimate, &m);
        let diagnostics = TransformDiagnostics {
            route: TransformRoute::Numeric,
            formula,
            analytic_unsupported: unsupported,
            error_estimate: num.error_estimate,
            pointwise_bound: side.delta,
            tail_coefficient: side.tail_coef,
            warnings: num.warnings.clone(),
        };
        Ok(FrequencySide {
            rep: Rep::Sampled(side),
            diagnostics,
        })
    }

    /// `f̂ · ĝ`, analytic when both transforms are, otherwise on the shared
    /// numeric grid of `strategy`.
    pub fn product(f: &FunctionSpec, g: &FunctionSpec, strategy: &FourierStrategy, tol: f64) -> Result<Self> {
        if strategy.prefer_analytic {
            if let (Analytic::Transform { spec: a, .. }, Analytic::Transform { spec: b, .. }) =
                (fourier_analytic(f), fourier_analytic(g))
            {
                if has_oscillatory_tail(&a) || has_oscillatory_tail(&b) {
                    return Self::numeric_product(f, g, strategy, tol);
                }
                let spec = a.times(b)?;
                let formula = crate::fourier::formula(&spec);
                return Ok(FrequencySide {
                    rep: Rep::Analytic(spec),
                    diagnostics: TransformDiagnostics::analytic(formula),
                });
            }
        }
        Self::numeric_product(f, g, strategy, tol)
    }

    fn numeric_product(f: &FunctionSpec, g: &FunctionSpec, strategy: &FourierStrategy, tol: f64) -> Result<Self> {
        let nf = fourier_numeric(f, strategy.half_width, strategy.samples)?;
        let ng = fourier_numeric(g, strategy.half_width, strategy.samples)?;
        let mf = moments(f, strategy, tol)?;
        let mg = moments(g, strategy, tol)?;
        let sf = sampled_side(
            &nf,
            &(0..nf.len()).map(|k| nf.value(k)).collect::<Vec<_>>(),
            nf.error_estimate,
            &mf,
        );
        let sg = sampled_side(
            &ng,
            &(0..ng.len()).map(|k| ng.value(k)).collect::<Vec<_>>(),
            ng.error_estimate,
            &mg,
        );
        let values: Vec<Complex64> = (0..nf.len()).map(|k| nf.value(k) * ng.value(k)).collect();
        let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let delta = sf.delta * (sg.peak + sg.delta) + sg.delta * sf.peak;
        let tail_coef = (mf.l1 * sg.tail_coef).min(mg.l1 * sf.tail_coef);
        let side = SampledSide {
            spec: complex_sampled(nf.gamma_start, nf.gamma_step, &values),
            span: sf.span.clone(),
            delta,
            peak,
            tail_coef,
            edge: sf.edge,
        };
        let mut warnings = nf.warnings.clone();
        warnings.extend(ng.warnings.iter().cloned());
        Ok(FrequencySide {
            diagnostics: TransformDiagnostics {
                route: TransformRoute::Numeric,
                formula: None,
                analytic_unsupported: None,
                error_estimate: nf.error_estimate * ng.max_modulus() + ng.error_estimate * nf.max_modulus(),
                pointwise_bound: delta,
                tail_coefficient: tail_coef,
                warnings,
            },
            rep: Rep::Sampled(side),
        })
    }

    /// `(∫ |f̂|^r w^σ, error bound)` over the whole dual space.
    pub fn integral(&self, r: f64, weight: &WeightSpec, sigma: f64, tol: f64) -> Result<(f64, f64)> {
        match &self.rep {
            Rep::Analytic(spec) => {
                let res = integrate(&IntegralTask::new(spec, r, weight, sigma, Domain::Whole).tolerance(tol))?;
                Ok((res.value, res.total_error()))
            }
            Rep::Sampled(s) => s.integral(r, weight, sigma, tol),
        }
    }

    /// `(‖f̂‖_{L^r(w^σ)}, error bound)`.
    pub fn norm(&self, r: f64, weight: &WeightSpec, sigma: f64, tol: f64) -> Result<(f64, f64)> {
        let (v, e) = self.integral(r, weight, sigma, tol)?;
        Ok(root_with_error(v, e, r))
    }

    /// Upper bound on `sup |f̂|`.
    pub fn sup_bound(&self) -> Option<f64> {
        match &self.rep {
            Rep::Analytic(spec) => spec.envelope().ok()?.sup_bound(),
            Rep::Sampled(s) => Some((s.peak + s.delta).max(s.tail_coef)),
        }
    }

    /// Grand norm of `|f̂|` with `params` on the dual axis.
    pub fn grand_norm(&self, params: &GrandNormParams) -> Result<GrandNormResult> {
        match &self.rep {
            Rep::Analytic(spec) => grand_norm(spec, params),
            Rep::Sampled(s) => {
                params.validate()?;
                if params.weight.dim != 1 {
                    return Err(Error::DimensionMismatch {
                        expected: 1,
                        found: params.weight.dim,
                    });
                }
                if params.domain != Domain::Whole {
                    return Err(Error::invalid(
                        "numeric frequency sides are integrated over the whole axis",
                    ));
                }
                sweep(
                    &mut |eps| {
                        let r = params.p - eps;
                        let (sigma, pref) = params.variant.shape(params.p, params.theta, eps);
                        let (v, e) = s.integral(r, &params.weight, sigma, params.tol)?;
                        let (root, err) = root_with_error(v, e, r);
                        Ok(CurvePoint {
                            eps,
                            phi: pref * root,
                            err: pref * err,
                        })
                    },
                    params,
                )
            }
        }
    }
}

fn complex_sampled(start: f64, step: f64, values: &[Complex64]) -> FunctionSpec {
    let real = values.iter().all(|v| v.im == 0.0);
    FunctionSpec::Sampled {
        start,
        step,
        re: values.iter().map(|v| v.re).collect(),
        im: if real {
            Vec::new()
        } else {
            values.iter().map(|v| v.im).collect()
        },
    }
}

fn sampled_side(num: &NumericTransform, values: &[Complex64], transform_err: f64, m: &Moments) -> SampledSide {
    let h = num.gamma_step;
    let interp = match m.second {
        // |f̂''| ≤ ∫ x²|f|
        Some(m2) => h * h / 8.0 * m2,
        None => {
            let worst = values
                .windows(3)
                .map(|w| (w[0] - 2.0 * w[1] + w[2]).norm())
                .fold(0.0, f64::max);
            // second differences sample h²|f̂''|; doubled for the unsampled maxima
            2.0 * worst / 8.0
        }
    };
    let spec = complex_sampled(num.gamma_start, h, values);
    let span = sampled_span(&spec).expect("sampled spec has a span");
    let edge = num.gamma(num.len() - 1).min(-num.gamma_start);
    SampledSide {
        spec,
        span,
        delta: transform_err + interp,
        peak: values.iter().map(|v| v.norm()).fold(0.0, f64::max),
        tail_coef: 2.0 * m.l1.max(m.tv),
        edge,
    }
}

impl SampledSide {
    fn integral(&self, r: f64, weight: &WeightSpec, sigma: f64, tol: f64) -> Result<(f64, f64)> {
        let domain = Domain::set(self.span.clone());
        let res = integrate(&IntegralTask::new(&self.spec, r, weight, sigma, domain.clone()).tolerance(tol))?;
        let one = FunctionSpec::constant(1.0);
        let mass = integrate(&IntegralTask::new(&one, 1.0, weight, sigma, domain).tolerance(1e-6))?;
        let mass = mass.value + mass.total_error();
        // |x^r - y^r| ≤ r max(x,y)^{r-1} |x-y| for r ≥ 1
        let perturb = if r >= 1.0 {
            r * (self.peak + self.delta).powf(r - 1.0) * self.delta * mass
        } else {
            self.delta.powf(r) * mass
        };
        let tail = if self.tail_coef == 0.0 {
            0.0
        } else {
            let bound = FunctionSpec::power_decay(1.0).scale(self.tail_coef);
            bound.envelope()?.tail(r, weight, sigma, 1, self.edge).ok_or_else(|| {
                Error::Undecided(format!(
                    "the transform tail bound {}·(1+|γ|)^-1 raised to {} is not integrable against {}^{}",
                    self.tail_coef,
                    r,
                    weight.label(),
                    sigma
                ))
            })?
        };
        Ok((res.value, res.total_error() + perturb + tail))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct APNorm {
    pub value: f64,
    pub error_bound: f64,
    pub time: GrandNormResult,
    pub freq: GrandNormResult,
    pub diagnostics: TransformDiagnostics,
}

/// `grand_norm(f; p, θ₁, a) + grand_norm(f̂; q, θ₂, b)`. Failures are tagged
/// with the side they come from.
pub fn ap_norm(f: &FunctionSpec, params: &APNormParams) -> Result<APNorm> {
    params.validate()?;
    let time = grand_norm(f, &params.time).map_err(|e| e.on_side(Side::Time))?;
    let side = FrequencySide::build(f, &params.fourier, params.freq.tol).map_err(|e| e.on_side(Side::Frequency))?;
    let freq = side.grand_norm(&params.freq).map_err(|e| e.on_side(Side::Frequency))?;
    Ok(APNorm {
        value: time.value + freq.value,
        error_bound: time.error_bound + freq.error_bound,
        time,
        freq,
        diagnostics: side.diagnostics,
    })
}

/// `f ∗ g` split as `f_R ∗ g_R + f_R^c ∗ g + f_R ∗ g_R^c`, where `_R` is the
/// restriction to `[-R, R]`. The first piece is the sampled convolution, the
/// other two are bounded through `‖u ∗ v‖_{L^r(a^σ)} ≤ ‖u‖_{L¹(a^{σ/r})}
/// ‖v‖_{L^r(a^σ)}`, which needs `a` submultiplicative.
struct ConvolutionNorm<'a> {
    f: &'a FunctionSpec,
    g: &'a FunctionSpec,
    conv: crate::fourier::Convolution,
    span: Option<MeasurableSet>,
    env_f: crate::model::envelope::Envelope,
    env_g: crate::model::envelope::Envelope,
}

impl<'a> ConvolutionNorm<'a> {
    fn new(f: &'a FunctionSpec, g: &'a FunctionSpec, weight: &WeightSpec, grid: ConvGrid) -> Result<Self> {
        let conv = convolve(f, g, grid)?;
        if !conv.analytic && !weight.claims_beurling() {
            return Err(Error::Precondition(format!(
                "bounding the truncated convolution needs a submultiplicative weight, got {}",
                weight.label()
            )));
        }
        Ok(ConvolutionNorm {
            f,
            g,
            span: sampled_span(&conv.spec),
            env_f: f.envelope()?,
            env_g: g.envelope()?,
            conv,
        })
    }

    fn phi(&self, params: &GrandNormParams, eps: f64) -> Result<CurvePoint> {
        if self.conv.analytic {
            return crate::grand_norm::phi(&self.conv.spec, params, eps);
        }
        let a = &params.weight;
        let r = params.p - eps;
        let (sigma, pref) = params.variant.shape(params.p, params.theta, eps);
        let h = &self.conv.spec;
        let res = integrate(&IntegralTask::new(h, r, a, sigma, Domain::Whole).tolerance(params.tol))?;
        let (root, err) = root_with_error(res.value, res.total_error(), r);

        let span = self.span.clone().expect("numeric convolutions are sampled");
        let one = FunctionSpec::constant(1.0);
        let mass = integrate(&IntegralTask::new(&one, 1.0, a, sigma, Domain::set(span)).tolerance(1e-6))?;
        let sampling = self.conv.discretization_error * (mass.value + mass.total_error()).powf(1.0 / r);

        let radius = self.conv.half_width;
        let undecided =
            |what: &str| Error::Undecided(format!("tail of {what} beyond {radius} is not certified finite"));
        let tail_f = self
            .env_f
            .tail(1.0, a, sigma / r, 1, radius)
            .ok_or_else(|| undecided("f"))?;
        let tail_g = self.env_g.tail(r, a, sigma, 1, radius).ok_or_else(|| undecided("g"))?;
        let mut pieces = 0.0;
        if tail_f > 0.0 {
            let gn = integrate(&IntegralTask::new(self.g, r, a, sigma, Domain::Whole).tolerance(1e-6))?;
            pieces += tail_f * (gn.value + gn.total_error()).powf(1.0 / r);
        }
        if tail_g > 0.0 {
            let fl = integrate(&IntegralTask::new(self.f, 1.0, a, sigma / r, Domain::Whole).tolerance(1e-6))?;
            pieces += (fl.value + fl.total_error()) * tail_g.powf(1.0 / r);
        }
        Ok(CurvePoint {
            eps,
            phi: pref * root,
            err: pref * (err + sampling + pieces),
        })
    }

    fn grand_norm(&self, params: &GrandNormParams) -> Result<GrandNormResult> {
        if self.conv.analytic {
            return grand_norm(&self.conv.spec, params);
        }
        params.validate()?;
        sweep(&mut |eps| self.phi(params, eps), params)
    }
}

/// Grand norm of `f ∗ g` including the convolution error.
pub fn convolution_grand_norm(
    f: &FunctionSpec,
    g: &FunctionSpec,
    params: &GrandNormParams,
    grid: ConvGrid,
) -> Result<GrandNormResult> {
    ConvolutionNorm::new(f, g, &params.weight, grid)?.grand_norm(params)
}

/// `ε̄ = (p-1) k / count` for `k = 1..=count`.
pub fn eps_bar_sweep(p: f64, count: usize) -> Vec<f64> {
    (1..=count).map(|k| (p - 1.0) * k as f64 / count as f64).collect()
}

fn weighted_l1(f: &FunctionSpec, weight: &WeightSpec, sigma: f64, tol: f64) -> Result<(f64, f64)> {
    let res = integrate(&IntegralTask::new(f, 1.0, weight, sigma, Domain::Whole).tolerance(tol))?;
    Ok((res.value, res.total_error()))
}

const MODULE_PROPERTY: &str = "convolution module inequality";

/// `‖f ∗ g‖_{L_a^{p),θ}} ≤ ‖f‖_{L¹(a^{ε̄/p})} ‖g‖_{L_a^{p),θ}}` for each `ε̄`.
///
/// The `module/` checks compare against the smaller middle-of-chain weight
/// `a^{ε̄/(p(p-ε̄))}` first and fall back to `a^{ε̄/p}`; the `ε̄`-independent
/// right side with `a^{(p-1)/p}` is recorded alongside. The `module-at-eps/`
/// checks hold `ε` fixed on both sides:
/// `ε̄^θ ‖f ∗ g‖_{L^{p-ε̄}(a^{ε̄/p})} ≤ ‖f‖_{L¹(a^{ε̄/(p(p-ε̄))})} ‖g‖_{L_a^{p),θ}}`.
pub fn module_inequality_report(
    f: &FunctionSpec,
    g: &FunctionSpec,
    params: &GrandNormParams,
    eps_bars: &[f64],
    grid: ConvGrid,
) -> Result<VerificationReport> {
    params.validate()?;
    let a = &params.weight;
    if !a.claims_beurling() {
        return Err(Error::Precondition(format!(
            "{} is not a Beurling weight, so weighted L¹ is not a convolution algebra",
            a.label()
        )));
    }
    let p = params.p;
    for &e in eps_bars {
        if !(e > 0.0 && e <= p - 1.0) {
            return Err(Error::invalid(format!("ε̄ must lie in (0, {}], got {e}", p - 1.0)));
        }
    }
    let conv = ConvolutionNorm::new(f, g, a, grid)?;
    let lhs = conv.grand_norm(params)?;
    let gn = grand_norm(g, params)?;
    let tol = params.tol;
    let (uni, uni_err) = weighted_l1(f, a, (p - 1.0) / p, tol)?;
    let label = format!(
        "{}*{}/{}/p={}/theta={}",
        f.label(),
        g.label(),
        a.label(),
        p,
        params.theta
    );
    let t = Tolerance::default();

    let mut report = VerificationReport::new("module-inequality");
    for &eb in eps_bars {
        let (end, end_err) = weighted_l1(f, a, eb / p, tol)?;
        let (mid, mid_err) = weighted_l1(f, a, eb / (p * (p - eb)), tol)?;
        let slack_end = lhs.error_bound + end_err * gn.value + end * gn.error_bound;
        let slack_mid = lhs.error_bound + mid_err * gn.value + mid * gn.error_bound;
        let rhs_mid = mid * gn.value;
        let rhs_end = end * gn.value;
        let (rhs, slack, which) = if t.holds(lhs.value, rhs_mid + slack_mid) {
            (rhs_mid, slack_mid, "middle weight a^{ε̄/(p(p-ε̄))}")
        } else {
            (rhs_end, slack_end, "end weight a^{ε̄/p}")
        };
        report.push(
            Check::inequality(
                format!("module/{label}/eps_bar={eb:.6}"),
                MODULE_PROPERTY,
                lhs.value,
                rhs + slack,
                t,
            )
            .with_detail(format!("compared against the {which}"))
            .with_constant("eps_bar", eb)
            .with_constant("lhs_error", lhs.error_bound)
            .with_constant("lhs_argmax", lhs.argmax)
            .with_constant("rhs_mid", rhs_mid)
            .with_constant("rhs_end", rhs_end)
            .with_constant("rhs_uniform", uni * gn.value)
            .with_constant("rhs_uniform_error", uni_err * gn.value + uni * gn.error_bound)
            .with_constant("combined_error", slack)
            .with_constant("g_grand_norm", gn.value),
        );

        let at = conv.phi(params, eb)?;
        let slack = at.err + slack_mid - lhs.error_bound;
        report.push(
            Check::inequality(
                format!("module-at-eps/{label}/eps={eb:.6}"),
                MODULE_PROPERTY,
                at.phi,
                rhs_mid + slack,
                t,
            )
            .with_detail("ε held fixed on both sides, middle weight a^{ε/(p(p-ε))}")
            .with_constant("eps", eb)
            .with_constant("combined_error", slack),
        );
    }
    Ok(report.sorted())
}

const FOURIER_PROPERTY: &str = "bounded Fourier transform";

/// `sup |f̂| ≤ ‖f‖₁` and `‖f̂ ĝ‖_{L_b^{q),θ₂}} ≤ ‖f‖₁ ‖ĝ‖_{L_b^{q),θ₂}}`.
pub fn fourier_side_inequality_report(
    f: &FunctionSpec,
    g: &FunctionSpec,
    freq: &GrandNormParams,
    strategy: &FourierStrategy,
) -> Result<VerificationReport> {
    freq.validate()?;
    let tol = freq.tol;
    let l1 = l1_norm(f, tol)?;
    let fs = FrequencySide::build(f, strategy, tol)?;
    let gs = FrequencySide::build(g, strategy, tol)?;
    let prod = FrequencySide::product(f, g, strategy, tol)?;
    let g_norm = gs.grand_norm(freq).map_err(|e| e.on_side(Side::Frequency))?;
    let lhs = prod.grand_norm(freq).map_err(|e| e.on_side(Side::Frequency))?;
    let label = format!("{}/{}/q={}/theta={}", f.label(), g.label(), freq.p, freq.theta);
    let t = Tolerance::default();

    let mut report = VerificationReport::new("fourier-side-inequality");
    let sup = sampled_sup(&fs);
    report.push(
        Check::inequality(format!("bounded-transform/{}", f.label()), FOURIER_PROPERTY, sup, l1, t)
            .with_detail("largest |f̂| on the dual grid against ∫|f|")
            .with_constant("transform_error", fs.diagnostics.pointwise_bound),
    );
    let slack = lhs.error_bound + l1 * g_norm.error_bound;
    report.push(
        Check::inequality(
            format!("product/{label}"),
            FOURIER_PROPERTY,
            lhs.value,
            l1 * g_norm.value + slack,
            t,
        )
        .with_constant("l1_norm_f", l1)
        .with_constant("g_hat_grand_norm", g_norm.value)
        .with_constant("combined_error", slack),
    );
    Ok(report.sorted())
}

/// Largest sampled `|f̂|` (dual grid of the default numeric route, or the
/// analytic transform on the same grid).
fn sampled_sup(side: &FrequencySide) -> f64 {
    match &side.rep {
        Rep::Sampled(s) => s.peak,
        Rep::Analytic(spec) => {
            let strategy = FourierStrategy::default();
            let step = std::f64::consts::PI / strategy.half_width;
            let n = spec.dim();
            let mut best: f64 = 0.0;
            for k in -512i32..=512 {
                let g = k as f64 * step / 8.0;
                best = best.max(spec.modulus_unchecked(&vec![g; n]));
            }
            best
        }
    }
}

/// `f ↦ 1/a` as a function together with the exponent scale, so that
/// `a^{-κ} = |h|^{κ·scale}`.
fn reciprocal(a: &WeightSpec) -> Option<(FunctionSpec, f64)> {
    let n = a.dim;
    match a.kind {
        WeightKind::Constant { c } => Some((FunctionSpec::constant(1.0 / c).with_dim(n), 1.0)),
        WeightKind::PowerGrowth { s } => Some((FunctionSpec::power_decay(1.0).with_dim(n), s)),
        WeightKind::ExpGrowth { s } => Some((FunctionSpec::exp_abs().with_dim(n), s)),
        WeightKind::PowerDecay { .. } | WeightKind::Gaussian { .. } => None,
    }
}

/// `C₁(ε, E) = ‖χ_E a^{-ε/(p(p-ε))}‖_{(p-ε)'}`.
pub fn holder_constant(a: &WeightSpec, set: &MeasurableSet, p: f64, eps: f64, tol: f64) -> Result<f64> {
    let r = p - eps;
    let kappa = eps / (p * r);
    if r <= 1.0 + 1e-15 {
        return Ok(a.min_on(set).powf(-kappa));
    }
    let conj = r / (r - 1.0);
    let (h, scale) = reciprocal(a).ok_or_else(|| Error::Precondition(format!("{} is below 1 somewhere", a.label())))?;
    let unit = WeightSpec::unit().with_dim(a.dim);
    let res =
        integrate(&IntegralTask::new(&h, kappa * conj * scale, &unit, 0.0, Domain::set(set.clone())).tolerance(tol))?;
    Ok(res.value.powf(1.0 / conj))
}

const LOCAL_PROPERTY: &str = "local L1 bound";

/// `∫_E |f| ≤ C₀ ‖f‖` with `C₀ = sup_ε C₁(ε, E)` over the time-side grid.
pub fn local_l1_bound_report(
    f: &FunctionSpec,
    set: &MeasurableSet,
    params: &APNormParams,
) -> Result<VerificationReport> {
    params.validate()?;
    set.validate()?;
    let a = &params.time.weight;
    if set.dim() != a.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            found: set.dim(),
        });
    }
    let floor = a.min_on(set);
    if floor < 1.0 {
        return Err(Error::Precondition(format!(
            "{} drops to {floor} < 1 on the set",
            a.label()
        )));
    }
    let p = params.time.p;
    let theta = params.time.theta;
    let tol = params.time.tol;
    let unit = WeightSpec::unit().with_dim(a.dim);
    let local = integrate(&IntegralTask::new(f, 1.0, &unit, 0.0, Domain::set(set.clone())).tolerance(tol))?;

    let mut c0: f64 = 0.0;
    let mut c0_eps = 0.0;
    let mut best: f64 = f64::INFINITY;
    for eps in params.time.base_grid() {
        let c1 = holder_constant(a, set, p, eps, tol * 1e-2)?;
        if c1 > c0 {
            c0 = c1;
            c0_eps = eps;
        }
        best = best.min(c1 * eps.powf(-theta));
    }
    let norm = ap_norm(f, params)?;
    let t = Tolerance::default();
    let label = format!(
        "{}/{:?}..{:?}/{}/p={}",
        f.label(),
        set.bounds().0,
        set.bounds().1,
        a.label(),
        p
    );

    let mut report = VerificationReport::new("local-l1-bound");
    let slack = local.total_error() + c0 * norm.error_bound;
    report.push(
        Check::inequality(
            format!("local-l1/{label}"),
            LOCAL_PROPERTY,
            local.value,
            c0 * norm.value + slack,
            t,
        )
        .with_detail("∫_E|f| against C₀ times the paired norm")
        .with_constant("c0", c0)
        .with_constant("c0_eps", c0_eps)
        .with_constant("ap_norm", norm.value)
        .with_constant("combined_error", slack),
    );
    let slack = local.total_error() + best * norm.time.error_bound;
    report.push(
        Check::inequality(
            format!("local-l1-holder/{label}"),
            LOCAL_PROPERTY,
            local.value,
            best * norm.time.value + slack,
            t,
        )
        .with_detail("∫_E|f| against inf_ε C₁(ε)ε^{-θ} times the time-side norm")
        .with_constant("holder_constant", best)
        .with_constant("time_norm", norm.time.value),
    );
    Ok(report.sorted())
}

/// Measured constants and norms of the three-space inclusion chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairNorms {
    pub plain: f64,
    pub grand: f64,
    pub weighted: f64,
    pub c: f64,
    pub d: f64,
}

/// `sup_ε ε^θ ‖a‖₁^{ε/(p(p-ε))}` on a dense grid including the endpoint.
pub fn embedding_constant(p: f64, theta: f64, weight_l1: f64) -> f64 {
    let n = 4096;
    (1..=n)
        .map(|k| {
            let eps = (p - 1.0) * k as f64 / n as f64;
            eps.powf(theta) * weight_l1.powf(eps / (p * (p - eps)))
        })
        .fold(0.0, f64::max)
}

const PAIR_PROPERTY: &str = "pair space inclusions";

/// `‖f‖_{A^{p-ε,q-η}(a^{ε/p}, b^{η/q})} ≤ C ‖f‖_{A^{p),θ₁}_{q),θ₂}} ≤ C D ‖f‖_{A^{p,q}}`.
pub fn theorem6_inclusion_report(
    f: &FunctionSpec,
    params: &APNormParams,
    eps: f64,
    eta: f64,
) -> Result<VerificationReport> {
    theorem6_inclusion_sweep(f, params, &[(eps, eta)])
}

/// [`theorem6_inclusion_report`] for several `(ε, η)`, sharing the pair
/// norms and the transform between them.
pub fn theorem6_inclusion_sweep(
    f: &FunctionSpec,
    params: &APNormParams,
    pairs: &[(f64, f64)],
) -> Result<VerificationReport> {
    params.validate()?;
    let (p, q) = (params.time.p, params.freq.p);
    for &(eps, eta) in pairs {
        if !(eps > 0.0 && eps <= p - 1.0) || !(eta > 0.0 && eta <= q - 1.0) {
            return Err(Error::invalid(format!(
                "need ε in (0, {}] and η in (0, {}], got {eps} and {eta}",
                p - 1.0,
                q - 1.0
            )));
        }
    }
    let (a, b) = (&params.time.weight, &params.freq.weight);
    let mut masses = [0.0; 2];
    for (slot, w) in masses.iter_mut().zip([a, b]) {
        match crate::model::grandizer_integrable(w, 1e-10)? {
            crate::model::Integrability::Integrable { value, .. } => *slot = value,
            other => {
                return Err(Error::Precondition(format!(
                    "{} is not integrable ({other:?})",
                    w.label()
                )))
            }
        }
    }
    let tol = params.time.tol;
    let unit = WeightSpec::unit().with_dim(a.dim);
    let side = FrequencySide::build(f, &params.fourier, tol).map_err(|e| e.on_side(Side::Frequency))?;

    let time_lp =
        crate::quadrature::weighted_lp_norm(f, p, &unit, 0.0, Domain::Whole, tol).map_err(|e| e.on_side(Side::Time))?;
    let freq_lp = side.norm(q, &unit, 0.0, tol).map_err(|e| e.on_side(Side::Frequency))?;
    let plain = time_lp.value + freq_lp.0;
    let plain_err = time_lp.error_bound + freq_lp.1;

    let grand = ap_norm(f, params)?;
    let d1 = embedding_constant(p, params.time.theta, masses[0]);
    let d2 = embedding_constant(q, params.freq.theta, masses[1]);
    let d = d1.max(d2);
    let t = Tolerance::default();
    let mut report = VerificationReport::new("pair-inclusions");

    for &(eps, eta) in pairs {
        let time_w = crate::quadrature::weighted_lp_norm(f, p - eps, a, eps / p, Domain::Whole, tol)
            .map_err(|e| e.on_side(Side::Time))?;
        let freq_w = side
            .norm(q - eta, b, eta / q, tol)
            .map_err(|e| e.on_side(Side::Frequency))?;
        let weighted = time_w.value + freq_w.0;
        let weighted_err = time_w.error_bound + freq_w.1;

        let c = eps.powf(-params.time.theta).max(eta.powf(-params.freq.theta));
        let label = format!("{}/p={}/q={}/eps={}/eta={}", f.label(), p, q, eps, eta);

        let slack = weighted_err + c * grand.error_bound;
        report.push(
            Check::inequality(
                format!("weighted-below-grand/{label}"),
                PAIR_PROPERTY,
                weighted,
                c * grand.value + slack,
                t,
            )
            .with_constant("c", c)
            .with_constant("measured_ratio", ratio(weighted, grand.value))
            .with_constant("combined_error", slack),
        );
        let slack = grand.error_bound + d * plain_err;
        report.push(
            Check::inequality(
                format!("grand-below-plain/{label}"),
                PAIR_PROPERTY,
                grand.value,
                d * plain + slack,
                t,
            )
            .with_constant("d", d)
            .with_constant("d_time", d1)
            .with_constant("d_freq", d2)
            .with_constant("measured_ratio", ratio(grand.value, plain))
            .with_constant("combined_error", slack),
        );
        report.push(
            Check::compare(format!("d-at-least-one/{label}"), PAIR_PROPERTY, 1.0, d, d >= 1.0)
                .with_detail("the plain pair norm must dominate with a constant D >= 1"),
        );
        report.push(
            Check::data(format!("pair-norms/{label}"), PAIR_PROPERTY)
                .with_sides(weighted, plain)
                .with_detail("lhs = weighted pair norm, rhs = plain pair norm")
                .with_constant("plain", plain)
                .with_constant("grand", grand.value)
                .with_constant("weighted", weighted)
                .with_constant("c", c)
                .with_constant("d", d),
        );
    }
    Ok(report.sorted())
}

fn ratio(a: f64, b: f64) -> f64 {
    if b > 0.0 {
        a / b
    } else {
        0.0
    }
}

/// The three pair norms and both constants as plain numbers.
pub fn pair_norms(f: &FunctionSpec, params: &APNormParams, eps: f64, eta: f64) -> Result<PairNorms> {
    let report = theorem6_inclusion_report(f, params, eps, eta)?;
    let data = report
        .checks
        .iter()
        .find(|c| c.name.starts_with("pair-norms/"))
        .expect("report carries the pair norms");
    let k = |name: &str| data.constants[name];
    Ok(PairNorms {
        plain: k("plain"),
        grand: k("grand"),
        weighted: k("weighted"),
        c: k("c"),
        d: k("d"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grand_norm::GrandNormParams;

    fn pd2() -> WeightSpec {
        WeightSpec::power_decay(2.0)
    }

    fn params(p: f64, q: f64, a: WeightSpec, b: WeightSpec) -> APNormParams {
        APNormParams::new(GrandNormParams::new(p, 1.0, a), GrandNormParams::new(q, 1.0, b))
    }

    #[test]
    fn gaussian_pair_norm_is_sum_of_sides() {
        let f = FunctionSpec::gaussian(0.5);
        let pr = params(2.0, 2.0, pd2(), pd2());
        let n = ap_norm(&f, &pr).unwrap();
        let t = grand_norm(&f, &pr.time).unwrap();
        let hat = FunctionSpec::gaussian(0.5).scale((2.0 * std::f64::consts::PI).sqrt());
        let s = grand_norm(&hat, &pr.freq).unwrap();
        assert!((n.value - t.value - s.value).abs() < 1e-12);
        assert_eq!(n.diagnostics.route, TransformRoute::Analytic);
    }

    #[test]
    fn zero_function_has_zero_norm() {
        let f = FunctionSpec::gaussian(1.0).scale(0.0);
        let n = ap_norm(&f, &params(2.0, 2.0, pd2(), pd2())).unwrap();
        assert_eq!(n.value, 0.0);
    }

    #[test]
    fn frequency_failure_names_its_side() {
        // 2/(1+γ²) to the power q-ε against a constant weight is fine, but the
        // numeric tail bound (1+|γ|)^{-1} is not integrable at r = 1
        let f = FunctionSpec::power_decay(3.0);
        let pr = params(2.0, 2.0, pd2(), WeightSpec::unit());
        let err = ap_norm(&f, &pr).unwrap_err();
        match err {
            Error::Side { side, .. } => assert_eq!(side, Side::Frequency),
            other => panic!("unexpected {other:?}"),
        }
        let pr = params(2.0, 2.0, WeightSpec::unit(), pd2());
        let err = ap_norm(
            &FunctionSpec::constant(1.0)
                .restrict(&MeasurableSet::interval(0.0, 1.0))
                .unwrap()
                .plus(FunctionSpec::power_decay(0.4))
                .unwrap(),
            &pr,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Side { side: Side::Time, .. }));
        assert!(err.is_membership_failure());
    }

    #[test]
    fn numeric_frequency_side_tracks_analytic() {
        let f = FunctionSpec::gaussian(0.5);
        let freq = GrandNormParams::new(2.0, 1.0, pd2()).grid(32).tolerance(1e-7);
        let analytic = FrequencySide::build(&f, &FourierStrategy::default(), 1e-8).unwrap();
        let numeric = FrequencySide::build(&f, &FourierStrategy::numeric(40.0, 1 << 12), 1e-8).unwrap();
        let a = analytic.grand_norm(&freq).unwrap();
        let n = numeric.grand_norm(&freq).unwrap();
        assert!(
            (a.value - n.value).abs() <= n.error_bound + 1e-6,
            "{} vs {} ± {}",
            a.value,
            n.value,
            n.error_bound
        );
    }

    #[test]
    fn holder_constant_for_unit_weight() {
        let e = MeasurableSet::interval(-1.0, 1.0);
        for eps in [0.1, 0.5, 0.9, 1.0] {
            let c = holder_constant(&WeightSpec::unit(), &e, 2.0, eps, 1e-12).unwrap();
            let expect = 2f64.powf((1.0 - eps) / (2.0 - eps));
            assert!((c - expect).abs() < 1e-10, "{eps}: {c} vs {expect}");
        }
    }

    #[test]
    fn holder_constant_for_growing_weight() {
        // ‖χ_[0,1] (1+x)^{-κ}‖_s with s = conj(p-ε)
        let (p, eps) = (2.0, 0.4);
        let r: f64 = p - eps;
        let s = r / (r - 1.0);
        let kappa = 2.0 * eps / (p * r);
        let c = holder_constant(
            &WeightSpec::power_growth(2.0),
            &MeasurableSet::interval(0.0, 1.0),
            p,
            eps,
            1e-12,
        )
        .unwrap();
        let k = kappa * s;
        let expect = ((2f64.powf(1.0 - k) - 1.0) / (1.0 - k)).powf(1.0 / s);
        assert!((c - expect).abs() < 1e-10, "{c} vs {expect}");
    }

    #[test]
    fn local_bound_refuses_small_weights() {
        let pr = params(2.0, 2.0, pd2(), pd2());
        let err =
            local_l1_bound_report(&FunctionSpec::gaussian(0.5), &MeasurableSet::interval(-1.0, 1.0), &pr).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn module_report_refuses_non_beurling() {
        let pr = GrandNormParams::new(2.0, 1.0, pd2());
        let f = FunctionSpec::gaussian(1.0);
        let err = module_inequality_report(&f, &f, &pr, &[1.0], ConvGrid::default()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn module_report_for_gaussians() {
        let pr = GrandNormParams::new(2.0, 1.0, WeightSpec::unit());
        let f = FunctionSpec::gaussian(1.0);
        let r = module_inequality_report(&f, &f, &pr, &[1.0], ConvGrid::default()).unwrap();
        assert!(r.all_passed());
        let c = &r.checks[0];
        assert!(c.lhs.unwrap() < c.rhs.unwrap());
    }

    #[test]
    fn pair_inclusions_refuse_non_integrable_weights() {
        let pr = params(2.0, 2.0, WeightSpec::unit(), pd2());
        let err = theorem6_inclusion_report(&FunctionSpec::gaussian(0.5), &pr, 0.5, 0.5).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }
}
