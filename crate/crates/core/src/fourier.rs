//! Fourier transforms with `f̂(γ) = ∫ f(x) e^{-i⟨γ,x⟩} dx`.
//!
//! The analytic route pattern-matches the catalog and unwinds translate,
//! modulate, scale and sum wrappers. The numeric route samples `f` on
//! `x_j = -R + jΔx` and applies a phase-corrected FFT, giving `f̂` on the
//! dual grid `γ_k = kΔγ`, `Δγ = 2π/(NΔx)`, `k ∈ [-N/2, N/2)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{interp_position, FunctionSpec, MeasurableSet, Vector, WeightSpec};
use crate::quadrature::{integrate, Domain, IntegralTask};

pub const DEFAULT_FFT_N: usize = 1 << 14;
pub const DEFAULT_FFT_R: f64 = 40.0;

/// Fraction of the dual grid at each end inspected for aliasing.
const ALIAS_BAND: usize = 16;
const ALIAS_RATIO: f64 = 1e-3;
const EDGE_RATIO: f64 = 1e-6;

/// Result of the analytic route. `Unsupported` is an answer, not a failure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Analytic {
    Transform { spec: FunctionSpec, formula: String },
    Unsupported { reason: String },
}

impl Analytic {
    pub fn spec(&self) -> Option<&FunctionSpec> {
        match self {
            Analytic::Transform { spec, .. } => Some(spec),
            Analytic::Unsupported { .. } => None,
        }
    }
}

pub fn fourier_analytic(f: &FunctionSpec) -> Analytic {
    if let Err(e) = f.validate() {
        return Analytic::Unsupported { reason: e.to_string() };
    }
    match transform(f) {
        Ok(spec) => {
            let formula = formula(&spec);
            Analytic::Transform { spec, formula }
        }
        Err(reason) => Analytic::Unsupported { reason },
    }
}

fn transform(f: &FunctionSpec) -> std::result::Result<FunctionSpec, String> {
    use FunctionSpec as F;
    Ok(match f {
        F::ExpAbs { dim } => {
            let n = *dim as f64;
            // c_n = 2^n π^{(n-1)/2} Γ((n+1)/2)
            let c = 2f64.powi(*dim as i32) * PI.powf((n - 1.0) / 2.0) * gamma_half_integer(*dim + 1);
            F::InverseQuadratic {
                power: (n + 1.0) / 2.0,
                dim: *dim,
            }
            .scale(c)
        }
        F::Gaussian { q, dim } => F::Gaussian {
            q: 1.0 / (4.0 * q),
            dim: *dim,
        }
        .scale((PI / q).powf(*dim as f64 / 2.0)),
        F::Indicator { lo, hi } => box_transform(lo, hi, 1.0),
        F::Restrict { f, set } => match (f.as_ref(), set) {
            (F::Constant { c, .. }, set) => {
                let (lo, hi) = set.bounds();
                box_transform(&Vector(lo), &Vector(hi), *c)
            }
            _ => return Err(format!("no closed form for {}", f.label() + " restricted to a set")),
        },
        F::Translate { f, shift } => {
            let neg: Vec<f64> = shift.0.iter().map(|v| -v).collect();
            modulated(transform(f)?, neg)
        }
        F::Modulate { f, freq } => {
            let inner = transform(f)?;
            if freq.is_zero() {
                inner
            } else {
                F::Translate {
                    f: Box::new(inner),
                    shift: freq.clone(),
                }
            }
        }
        F::Scale { factor, f } => transform(f)?.scale(*factor),
        F::Sum { f, g } => F::Sum {
            f: Box::new(transform(f)?),
            g: Box::new(transform(g)?),
        },
        F::Constant { .. } => return Err("the transform of a constant is not a function".into()),
        F::PowerDecay { .. } => return Err("power_decay transforms are numeric only".into()),
        other => return Err(format!("{} is outside the analytic catalog", other.label())),
    })
}

fn modulated(spec: FunctionSpec, freq: Vec<f64>) -> FunctionSpec {
    if freq.iter().all(|v| *v == 0.0) {
        spec
    } else {
        FunctionSpec::Modulate {
            f: Box::new(spec),
            freq: Vector(freq),
        }
    }
}

/// `c · χ_(lo,hi)` ↦ `c · e^{-i⟨γ,centre⟩} Π 2 sin(h_k γ_k)/γ_k`.
fn box_transform(lo: &Vector, hi: &Vector, c: f64) -> FunctionSpec {
    let dim = lo.dim();
    let half: Vec<f64> = lo.0.iter().zip(&hi.0).map(|(a, b)| 0.5 * (b - a)).collect();
    if c == 0.0 || half.contains(&0.0) {
        return FunctionSpec::Constant { c: 0.0, dim };
    }
    let centre: Vec<f64> = lo.0.iter().zip(&hi.0).map(|(a, b)| -0.5 * (a + b)).collect();
    let sinc = FunctionSpec::Sinc {
        half_width: Vector(half),
    };
    let spec = modulated(sinc, centre);
    if c == 1.0 {
        spec
    } else {
        spec.scale(c)
    }
}

/// Γ(k/2) for a positive integer k.
fn gamma_half_integer(k: usize) -> f64 {
    let mut g = if k.is_multiple_of(2) { 1.0 } else { PI.sqrt() };
    let mut x = if k.is_multiple_of(2) { 1.0 } else { 0.5 };
    while x < k as f64 / 2.0 - 1e-12 {
        g *= x;
        x += 1.0;
    }
    g
}

/// True when `spec` contains a sinc factor, whose `|·|^r` integrals over the
/// line converge only algebraically through oscillation.
pub fn has_oscillatory_tail(spec: &FunctionSpec) -> bool {
    use FunctionSpec as F;
    match spec {
        F::Sinc { .. } => true,
        F::Translate { f, .. } | F::Modulate { f, .. } | F::Scale { f, .. } | F::Restrict { f, .. } => {
            has_oscillatory_tail(f)
        }
        F::Sum { f, g } | F::Mul { f, g } => has_oscillatory_tail(f) || has_oscillatory_tail(g),
        _ => false,
    }
}

/// Plain-text formula of a transform spec in the variable `g`.
pub fn formula(spec: &FunctionSpec) -> String {
    use FunctionSpec as F;
    let var = |dim: usize| {
        if dim == 1 {
            "g^2".to_string()
        } else {
            "|g|^2".to_string()
        }
    };
    match spec {
        F::Constant { c, .. } => format!("{c}"),
        F::InverseQuadratic { power, dim } => {
            if *power == 1.0 {
                format!("1/(1+{})", var(*dim))
            } else {
                format!("(1+{})^(-{power})", var(*dim))
            }
        }
        F::Gaussian { q, dim } => format!("exp(-{q}*{})", var(*dim)),
        F::Sinc { half_width } => {
            if half_width.dim() == 1 {
                format!("2*sin({}*g)/g", half_width.0[0])
            } else {
                let parts: Vec<String> = half_width
                    .0
                    .iter()
                    .enumerate()
                    .map(|(k, h)| format!("2*sin({h}*g{k})/g{k}"))
                    .collect();
                parts.join("*")
            }
        }
        F::Scale { factor, f } => match f.as_ref() {
            F::InverseQuadratic { power, dim } if *power == 1.0 => format!("{factor}/(1+{})", var(*dim)),
            inner => format!("{factor}*{}", formula(inner)),
        },
        F::Modulate { f, freq } => format!("exp(i*<{:?},g>)*{}", freq.0, formula(f)),
        F::Translate { f, shift } => format!("[{}](g - {:?})", formula(f), shift.0),
        F::Sum { f, g } => format!("{} + {}", formula(f), formula(g)),
        other => other.label(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransformWarning {
    /// `|f̂|` on the outer band of the dual grid is not small relative to its peak.
    Aliasing { edge_ratio: f64 },
    /// `|f(±R)|` is not small relative to `max |f|`.
    Truncation { edge_ratio: f64 },
}

/// `f̂` sampled on `γ_k = gamma_start + k·gamma_step`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericTransform {
    pub half_width: f64,
    pub samples: usize,
    pub dx: f64,
    pub gamma_start: f64,
    pub gamma_step: f64,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    /// Halving estimate of the discretization error plus the truncation tail
    /// and a rounding floor.
    pub error_estimate: f64,
    pub truncation_bound: f64,
    pub warnings: Vec<TransformWarning>,
}

impl NumericTransform {
    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    pub fn gamma(&self, k: usize) -> f64 {
        self.gamma_start + k as f64 * self.gamma_step
    }

    pub fn value(&self, k: usize) -> Complex64 {
        Complex64::new(self.re[k], self.im[k])
    }

    /// Linear interpolation between dual-grid samples; zero outside.
    pub fn eval(&self, gamma: f64) -> Complex64 {
        match interp_position(self.gamma_start, self.gamma_step, self.len(), gamma) {
            None => Complex64::new(0.0, 0.0),
            Some((j, w)) => self.value(j) * (1.0 - w) + self.value(j + 1) * w,
        }
    }

    /// The sampled transform as a function of γ.
    pub fn to_spec(&self) -> FunctionSpec {
        FunctionSpec::Sampled {
            start: self.gamma_start,
            step: self.gamma_step,
            re: self.re.clone(),
            im: self.im.clone(),
        }
    }

    /// `|f̂|` as a sampled function of γ.
    pub fn modulus_spec(&self) -> FunctionSpec {
        FunctionSpec::sampled(
            self.gamma_start,
            self.gamma_step,
            self.re.iter().zip(&self.im).map(|(a, b)| a.hypot(*b)).collect(),
        )
    }

    pub fn max_modulus(&self) -> f64 {
        self.re
            .iter()
            .zip(&self.im)
            .map(|(a, b)| a.hypot(*b))
            .fold(0.0, f64::max)
    }

    pub fn has_warnings(&self) -> bool {
        !self.warnings.is_empty()
    }
}

/// Phase-corrected FFT approximation of `f̂` (one dimension).
pub fn fourier_numeric(f: &FunctionSpec, half_width: f64, samples: usize) -> Result<NumericTransform> {
    f.validate()?;
    check_grid(f, half_width, samples)?;
    let env = f.envelope()?;
    let unit = WeightSpec::unit();
    if !env.integrable(1.0, &unit, 0.0) {
        return Err(Error::NoDecayCertificate(format!(
            "{} is not certified integrable, so its transform is not a function",
            f.label()
        )));
    }
    let truncation_bound = env.tail(1.0, &unit, 0.0, 1, half_width).unwrap_or(f64::INFINITY);

    let (fine, fmax) = dft(f, half_width, samples);
    let (coarse, _) = dft(f, half_width, samples / 2);
    let n = samples as i64;
    // both grids share Δγ = π/R; compare where they overlap
    let mut halving: f64 = 0.0;
    for k in -(n / 4)..(n / 4) {
        let a = fine[(k + n / 2) as usize];
        let b = coarse[(k + n / 4) as usize];
        halving = halving.max((a - b).norm());
    }

    let dx = 2.0 * half_width / samples as f64;
    let step = 2.0 * PI / (samples as f64 * dx);
    let mut warnings = Vec::new();
    let peak = fine.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let band = samples / ALIAS_BAND;
    let edge = fine[..band]
        .iter()
        .chain(&fine[samples - band..])
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    if peak > 0.0 && edge > ALIAS_RATIO * peak {
        warnings.push(TransformWarning::Aliasing {
            edge_ratio: edge / peak,
        });
    }
    let edge_f = f
        .modulus_unchecked(&[-half_width])
        .max(f.modulus_unchecked(&[half_width * (1.0 - 1e-15)]));
    if fmax > 0.0 && edge_f > EDGE_RATIO * fmax {
        warnings.push(TransformWarning::Truncation {
            edge_ratio: edge_f / fmax,
        });
    }

    // rounding in the FFT and in the phase factors e^{iγR}, |γR| ≤ πN/2
    let roundoff = f64::EPSILON * ((samples as f64).log2() + PI * samples as f64 / 2.0) * fmax * 2.0 * half_width;

    Ok(NumericTransform {
        half_width,
        samples,
        dx,
        gamma_start: -(samples as f64 / 2.0) * step,
        gamma_step: step,
        re: fine.iter().map(|v| v.re).collect(),
        im: fine.iter().map(|v| v.im).collect(),
        error_estimate: halving + truncation_bound + roundoff,
        truncation_bound,
        warnings,
    })
}

fn check_grid(f: &FunctionSpec, half_width: f64, samples: usize) -> Result<()> {
    if f.dim() != 1 {
        return Err(Error::invalid("numeric transforms are one-dimensional"));
    }
    if samples < 64 || !samples.is_power_of_two() {
        return Err(Error::invalid(format!(
            "sample count must be a power of two >= 64, got {samples}"
        )));
    }
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(Error::invalid(format!("half width must be positive, got {half_width}")));
    }
    Ok(())
}

/// Samples of `f` at `-R + jΔx`, averaging one-sided limits at jumps.
pub(crate) fn sample_grid(f: &FunctionSpec, half_width: f64, samples: usize) -> Vec<Complex64> {
    let dx = 2.0 * half_width / samples as f64;
    let mut nodes = f.landmarks().nodes.swap_remove(0);
    nodes.sort_by(f64::total_cmp);
    (0..samples)
        .map(|j| {
            let x = -half_width + j as f64 * dx;
            let near = nodes
                .binary_search_by(|v| v.total_cmp(&x))
                .map(|_| true)
                .unwrap_or_else(|i| {
                    let close = |v: f64| (v - x).abs() <= 1e-9 * dx;
                    (i > 0 && close(nodes[i - 1])) || (i < nodes.len() && close(nodes[i]))
                });
            if near {
                let h = 1e-7 * dx;
                0.5 * (f.eval_unchecked(&[x - h]) + f.eval_unchecked(&[x + h]))
            } else {
                f.eval_unchecked(&[x])
            }
        })
        .collect()
}

/// `f̂(γ_k)` for `k = -N/2..N/2` (stored from index 0) and `max |f(x_j)|`.
fn dft(f: &FunctionSpec, half_width: f64, samples: usize) -> (Vec<Complex64>, f64) {
    let dx = 2.0 * half_width / samples as f64;
    let mut buf = sample_grid(f, half_width, samples);
    let fmax = buf.iter().map(|v| v.norm()).fold(0.0, f64::max);
    FftPlanner::<f64>::new().plan_fft_forward(samples).process(&mut buf);
    let step = 2.0 * PI / (samples as f64 * dx);
    let n = samples as i64;
    let out = (-(n / 2)..(n / 2))
        .map(|k| {
            let gamma = k as f64 * step;
            let idx = k.rem_euclid(n) as usize;
            buf[idx] * Complex64::from_polar(dx, gamma * half_width)
        })
        .collect();
    (out, fmax)
}

/// `max |analytic - numeric|` over dual-grid points with `|γ| ≤ gamma_box`.
pub fn transform_sup_error(f: &FunctionSpec, half_width: f64, samples: usize, gamma_box: f64) -> Result<f64> {
    let analytic = match fourier_analytic(f) {
        Analytic::Transform { spec, .. } => spec,
        Analytic::Unsupported { reason } => return Err(Error::Precondition(reason)),
    };
    let num = fourier_numeric(f, half_width, samples)?;
    Ok(sup_difference(&analytic, &num, gamma_box))
}

pub(crate) fn sup_difference(analytic: &FunctionSpec, num: &NumericTransform, gamma_box: f64) -> f64 {
    (0..num.len())
        .filter(|&k| num.gamma(k).abs() <= gamma_box)
        .map(|k| (analytic.eval_unchecked(&[num.gamma(k)]) - num.value(k)).norm())
        .fold(0.0, f64::max)
}

/// `∫ |f|` over ℝⁿ, the bound on `sup |f̂|`.
pub fn l1_norm(f: &FunctionSpec, tol: f64) -> Result<f64> {
    let unit = WeightSpec::unit().with_dim(f.dim());
    let res = integrate(&IntegralTask::new(f, 1.0, &unit, 0.0, Domain::Whole).tolerance(tol))?;
    Ok(res.value + res.total_error())
}

/// A sampled function on a uniform 1-D grid with an error estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Convolution {
    pub spec: FunctionSpec,
    /// Sup-norm error estimate of the samples against `f ∗ g`.
    pub error_estimate: f64,
    /// Part of `error_estimate` from sampling `f_R ∗ g_R`, the convolution
    /// of the restrictions to `[-R, R]`.
    pub discretization_error: f64,
    /// Truncation half width `R` (zero for the closed form).
    pub half_width: f64,
    /// True when the closed-form gaussian rule was used.
    pub analytic: bool,
}

/// Grid parameters for numeric convolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvGrid {
    pub half_width: f64,
    pub samples: usize,
}

impl Default for ConvGrid {
    fn default() -> Self {
        ConvGrid {
            half_width: 32.0,
            samples: 1 << 13,
        }
    }
}

/// `f ∗ g`: closed form for two (scaled) gaussians, otherwise zero-padded FFT
/// convolution of the samples on `[-R, R)`.
pub fn convolve(f: &FunctionSpec, g: &FunctionSpec, grid: ConvGrid) -> Result<Convolution> {
    f.validate()?;
    g.validate()?;
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: g.dim(),
        });
    }
    if let Some(spec) = gaussian_pair(f, g) {
        return Ok(Convolution {
            spec,
            error_estimate: 0.0,
            discretization_error: 0.0,
            half_width: 0.0,
            analytic: true,
        });
    }
    check_grid(f, grid.half_width, grid.samples)?;
    let unit = WeightSpec::unit();
    let mut tails = [0.0; 2];
    let mut sups = [0.0; 2];
    let mut radii = [Some(0.0); 2];
    for (i, h) in [f, g].into_iter().enumerate() {
        let env = h.envelope()?;
        if !env.integrable(1.0, &unit, 0.0) {
            return Err(Error::NoDecayCertificate(format!(
                "{} is not certified integrable",
                h.label()
            )));
        }
        tails[i] = env.tail(1.0, &unit, 0.0, 1, grid.half_width).unwrap_or(f64::INFINITY);
        sups[i] = env.sup_bound().unwrap_or(f64::INFINITY);
        radii[i] = env.compact_radius();
    }
    let fine = fft_convolve(f, g, grid.half_width, grid.samples);
    let coarse = fft_convolve(f, g, grid.half_width, grid.samples / 2);
    // the coarse grid point i sits on fine point 2i
    let halving = coarse
        .iter()
        .enumerate()
        .map(|(i, c)| (fine[2 * i] - c).norm())
        .fold(0.0, f64::max);
    let truncation = tails[0] * sups[1] + tails[1] * sups[0];
    let dx = 2.0 * grid.half_width / grid.samples as f64;
    let start = -2.0 * grid.half_width;

    let mut fine = fine;
    if let (Some(rf), Some(rg)) = (radii[0], radii[1]) {
        // f_R ∗ g_R vanishes outside the sum of the supports; what the FFT
        // leaves there is rounding noise
        let reach = rf + rg;
        for (k, v) in fine.iter_mut().enumerate() {
            if (start + k as f64 * dx).abs() > reach + dx {
                *v = Complex64::new(0.0, 0.0);
            }
        }
    }
    let peak = fine.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let cut = 1e-16 * peak;
    let first = fine.iter().position(|v| v.norm() > cut).unwrap_or(0).saturating_sub(1);
    let last = fine
        .iter()
        .rposition(|v| v.norm() > cut)
        .map_or(fine.len() - 1, |i| (i + 1).min(fine.len() - 1));
    let (first, last) = if last <= first + 1 {
        (0, fine.len() - 1)
    } else {
        (first, last)
    };
    let kept = &fine[first..=last];
    let real = kept.iter().all(|v| v.im == 0.0) || (f.is_real() && g.is_real());
    let spec = FunctionSpec::Sampled {
        start: start + first as f64 * dx,
        step: dx,
        re: kept.iter().map(|v| v.re).collect(),
        im: if real {
            Vec::new()
        } else {
            kept.iter().map(|v| v.im).collect()
        },
    };
    Ok(Convolution {
        spec,
        error_estimate: halving + truncation,
        discretization_error: halving,
        half_width: grid.half_width,
        analytic: false,
    })
}

/// `Δx Σ_j f(x_j) g(y_k - x_j)` on `y_k = -2R + kΔx`, `k = 0..2N-1`.
fn fft_convolve(f: &FunctionSpec, g: &FunctionSpec, half_width: f64, samples: usize) -> Vec<Complex64> {
    let dx = 2.0 * half_width / samples as f64;
    let len = 2 * samples;
    let mut a = sample_grid(f, half_width, samples);
    let mut b = sample_grid(g, half_width, samples);
    a.resize(len, Complex64::new(0.0, 0.0));
    b.resize(len, Complex64::new(0.0, 0.0));
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(len);
    fwd.process(&mut a);
    fwd.process(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    planner.plan_fft_inverse(len).process(&mut a);
    let scale = dx / len as f64;
    let real = f.is_real() && g.is_real();
    a.truncate(len - 1);
    a.into_iter()
        .map(|v| {
            let v = v * scale;
            if real {
                Complex64::new(v.re, 0.0)
            } else {
                v
            }
        })
        .collect()
}

/// `λ e^{-a|t|²} ∗ μ e^{-b|t|²} = λμ (π/(a+b))^{n/2} e^{-ab/(a+b) |t|²}`.
fn gaussian_pair(f: &FunctionSpec, g: &FunctionSpec) -> Option<FunctionSpec> {
    fn unpack(h: &FunctionSpec) -> Option<(f64, f64, usize)> {
        match h {
            FunctionSpec::Gaussian { q, dim } => Some((1.0, *q, *dim)),
            FunctionSpec::Scale { factor, f } => unpack(f).map(|(c, q, d)| (c * factor, q, d)),
            _ => None,
        }
    }
    let (c1, a, n) = unpack(f)?;
    let (c2, b, _) = unpack(g)?;
    let coef = c1 * c2 * (PI / (a + b)).powf(n as f64 / 2.0);
    Some(
        FunctionSpec::Gaussian {
            q: a * b / (a + b),
            dim: n,
        }
        .scale(coef),
    )
}

/// Interval on which a sampled spec lives, for callers building domains.
pub(crate) fn sampled_span(spec: &FunctionSpec) -> Option<MeasurableSet> {
    match spec {
        FunctionSpec::Sampled { start, step, re, .. } => {
            Some(MeasurableSet::interval(*start, start + (re.len() - 1) as f64 * step))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(spec: &FunctionSpec, g: f64) -> Complex64 {
        spec.eval(&[g]).unwrap()
    }

    #[test]
    fn catalog_entries() {
        let t = fourier_analytic(&FunctionSpec::exp_abs());
        let spec = t.spec().unwrap();
        for g in [0.0, 0.5, 3.0] {
            assert!((at(spec, g).re - 2.0 / (1.0 + g * g)).abs() < 1e-15);
        }
        assert!(matches!(&t, Analytic::Transform { formula, .. } if formula == "2/(1+g^2)"));

        let t = fourier_analytic(&FunctionSpec::gaussian(0.5));
        let spec = t.spec().unwrap();
        for g in [0.0f64, 1.0, 2.5] {
            let exact = (2.0 * PI).sqrt() * (-g * g / 2.0).exp();
            assert!((at(spec, g).re - exact).abs() < 1e-14);
        }

        let t = fourier_analytic(&FunctionSpec::interval(-1.0, 1.0));
        let spec = t.spec().unwrap();
        assert_eq!(at(spec, 0.0).re, 2.0);
        assert!((at(spec, 1.3).re - 2.0 * 1.3f64.sin() / 1.3).abs() < 1e-15);

        assert!(matches!(
            fourier_analytic(&FunctionSpec::power_decay(3.0)),
            Analytic::Unsupported { .. }
        ));
    }

    #[test]
    fn higher_dimensional_exp_abs() {
        // n = 3: c_3 = 8π, transform 8π (1+|γ|²)^{-2}
        let spec = transform(&FunctionSpec::exp_abs().with_dim(3)).unwrap();
        let v = spec.eval(&[0.0, 0.0, 0.0]).unwrap().re;
        assert!((v - 8.0 * PI).abs() < 1e-12);
        // n = 2: c_2 = 2π, power 3/2
        let spec = transform(&FunctionSpec::exp_abs().with_dim(2)).unwrap();
        let v = spec.eval(&[1.0, 0.0]).unwrap().re;
        assert!((v - 2.0 * PI * 2f64.powf(-1.5)).abs() < 1e-12);
    }

    #[test]
    fn shift_and_modulation_rules() {
        let f = FunctionSpec::gaussian(1.0);
        let base = transform(&f).unwrap();
        let shifted = transform(&f.clone().translate(1.5).unwrap()).unwrap();
        let modulated = transform(&f.clone().modulate(2.0).unwrap()).unwrap();
        for g in [-2.0, 0.0, 0.7, 3.0] {
            let expect = Complex64::from_polar(1.0, -g * 1.5) * at(&base, g);
            assert!((at(&shifted, g) - expect).norm() < 1e-14);
            assert!((at(&modulated, g) - at(&base, g - 2.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn numeric_matches_analytic() {
        let e = transform_sup_error(&FunctionSpec::exp_abs(), 40.0, 1 << 14, 10.0).unwrap();
        assert!(e < 1e-3, "{e}");
        let e = transform_sup_error(&FunctionSpec::gaussian(0.5), 40.0, 1 << 14, 10.0).unwrap();
        assert!(e < 1e-8, "{e}");
    }

    #[test]
    fn numeric_zero_frequency_is_total_mass() {
        let t = fourier_numeric(&FunctionSpec::power_decay(3.0), 40.0, 1 << 14).unwrap();
        let k0 = t.len() / 2;
        assert_eq!(t.gamma(k0), 0.0);
        let mass = 1.0 - 41f64.powi(-2);
        assert!((t.value(k0).re - mass).abs() < 1e-4);
    }

    #[test]
    fn refuses_without_decay_certificate() {
        let sinc = FunctionSpec::Sinc { half_width: 1.0.into() };
        assert!(matches!(
            fourier_numeric(&sinc, 40.0, 1024),
            Err(Error::NoDecayCertificate(_))
        ));
        assert!(fourier_numeric(&FunctionSpec::exp_abs(), 40.0, 1000).is_err());
    }

    #[test]
    fn aliasing_and_truncation_warnings() {
        let t = fourier_numeric(&FunctionSpec::interval(0.0, 1.0), 40.0, 256).unwrap();
        assert!(t
            .warnings
            .iter()
            .any(|w| matches!(w, TransformWarning::Aliasing { .. })));
        let t = fourier_numeric(&FunctionSpec::power_decay(2.0), 4.0, 1024).unwrap();
        assert!(t
            .warnings
            .iter()
            .any(|w| matches!(w, TransformWarning::Truncation { .. })));
    }

    #[test]
    fn gaussian_convolution_closed_form() {
        let g = FunctionSpec::gaussian(1.0);
        let c = convolve(&g, &g, ConvGrid::default()).unwrap();
        assert!(c.analytic);
        // e^{-t²} ∗ e^{-t²} = √(π/2) e^{-t²/2}
        let v = c.spec.eval(&[1.0]).unwrap().re;
        assert!((v - (PI / 2.0).sqrt() * (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn hat_function_from_indicators() {
        let u = FunctionSpec::interval(0.0, 1.0);
        let c = convolve(&u, &u, ConvGrid::default()).unwrap();
        for (x, expect) in [(0.5, 0.5), (1.0, 1.0), (1.5, 0.5), (2.5, 0.0), (-0.5, 0.0)] {
            let v = c.spec.eval(&[x]).unwrap().re;
            assert!((v - expect).abs() <= c.error_estimate, "{x}: {v}");
        }
        assert!(c.error_estimate < 1e-2);
    }
}
