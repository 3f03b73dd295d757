use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::set::{euclid, MeasurableSet, Vector};
use crate::error::{Error, Result};

/// Largest dimension the toolkit evaluates and integrates in.
pub const MAX_DIM: usize = 3;

/// Sampled grids above this many nodes only contribute their end points as
/// quadrature breakpoints.
const MAX_NODE_BREAKPOINTS: usize = 1 << 17;

/// Symbolic description of a function on ℝⁿ.
///
/// Catalog kinds carry closed-form values, integrals and transforms; the
/// composite kinds (`restrict`, `translate`, `modulate`, `scale`, `sum`,
/// `mul`) expand pointwise. `sampled` is a one-dimensional piecewise-linear
/// interpolant that vanishes outside its grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    /// `c` everywhere.
    Constant {
        c: f64,
        #[serde(default = "one")]
        dim: usize,
    },
    /// `exp(-|t|)`.
    ExpAbs {
        #[serde(default = "one")]
        dim: usize,
    },
    /// `exp(-q |t|²)`.
    Gaussian {
        q: f64,
        #[serde(default = "one")]
        dim: usize,
    },
    /// Indicator of the open box `(lo, hi)`.
    Indicator {
        lo: Vector,
        hi: Vector,
    },
    /// `(1 + |t|)^(-s)`.
    PowerDecay {
        s: f64,
        #[serde(default = "one")]
        dim: usize,
    },
    /// `(Σ c_k |t|^k) exp(-q |t|²)`.
    PolyGaussian {
        coeffs: Vec<f64>,
        q: f64,
        #[serde(default = "one")]
        dim: usize,
    },
    /// `(1 + |t|²)^(-power)`.
    InverseQuadratic {
        power: f64,
        #[serde(default = "one")]
        dim: usize,
    },
    /// `Π_k 2 sin(h_k t_k) / t_k`, the transform of the centred box with
    /// half widths `h`.
    Sinc {
        half_width: Vector,
    },
    /// Linear interpolation of `re + i·im` on `start + j·step`; zero outside.
    Sampled {
        start: f64,
        step: f64,
        re: Vec<f64>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        im: Vec<f64>,
    },
    /// `f · χ_E`.
    Restrict {
        f: Box<FunctionSpec>,
        set: MeasurableSet,
    },
    /// `t ↦ f(t - shift)`.
    Translate {
        f: Box<FunctionSpec>,
        shift: Vector,
    },
    /// `t ↦ exp(i⟨freq, t⟩) f(t)`.
    Modulate {
        f: Box<FunctionSpec>,
        freq: Vector,
    },
    Scale {
        factor: f64,
        f: Box<FunctionSpec>,
    },
    Sum {
        f: Box<FunctionSpec>,
        g: Box<FunctionSpec>,
    },
    /// Pointwise product.
    Mul {
        f: Box<FunctionSpec>,
        g: Box<FunctionSpec>,
    },
}

fn one() -> usize {
    1
}

/// Quadrature landmarks: `nodes` are kinks and jumps, `centers` are the
/// points around which a catalog function concentrates.
#[derive(Debug, Clone, Default)]
pub(crate) struct Landmarks {
    pub nodes: Vec<Vec<f64>>,
    pub centers: Vec<Vec<f64>>,
}

impl Landmarks {
    pub fn new(dim: usize) -> Self {
        Landmarks {
            nodes: vec![Vec::new(); dim],
            centers: vec![Vec::new(); dim],
        }
    }

    fn shifted(mut self, shift: &[f64]) -> Self {
        for (axis, s) in shift.iter().enumerate() {
            self.nodes[axis].iter_mut().for_each(|v| *v += s);
            self.centers[axis].iter_mut().for_each(|v| *v += s);
        }
        self
    }

    fn merge(&mut self, other: Landmarks) {
        for (a, b) in self.nodes.iter_mut().zip(other.nodes) {
            a.extend(b);
        }
        for (a, b) in self.centers.iter_mut().zip(other.centers) {
            a.extend(b);
        }
    }

    fn origin(dim: usize) -> Self {
        Landmarks {
            nodes: vec![vec![0.0]; dim],
            centers: vec![vec![0.0]; dim],
        }
    }
}

impl FunctionSpec {
    pub fn constant(c: f64) -> Self {
        FunctionSpec::Constant { c, dim: 1 }
    }

    pub fn exp_abs() -> Self {
        FunctionSpec::ExpAbs { dim: 1 }
    }

    pub fn gaussian(q: f64) -> Self {
        FunctionSpec::Gaussian { q, dim: 1 }
    }

    pub fn power_decay(s: f64) -> Self {
        FunctionSpec::PowerDecay { s, dim: 1 }
    }

    pub fn inverse_quadratic(power: f64) -> Self {
        FunctionSpec::InverseQuadratic { power, dim: 1 }
    }

    pub fn poly_gaussian(coeffs: Vec<f64>, q: f64) -> Self {
        FunctionSpec::PolyGaussian { coeffs, q, dim: 1 }
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        FunctionSpec::Indicator {
            lo: lo.into(),
            hi: hi.into(),
        }
    }

    pub fn indicator(lo: impl Into<Vector>, hi: impl Into<Vector>) -> Self {
        FunctionSpec::Indicator {
            lo: lo.into(),
            hi: hi.into(),
        }
    }

    pub fn sampled(start: f64, step: f64, values: Vec<f64>) -> Self {
        FunctionSpec::Sampled {
            start,
            step,
            re: values,
            im: Vec::new(),
        }
    }

    /// Sets the dimension of a radial catalog kind; composites and boxes
    /// carry their dimension in their parameters and are returned unchanged.
    pub fn with_dim(mut self, n: usize) -> Self {
        match &mut self {
            FunctionSpec::Constant { dim, .. }
            | FunctionSpec::ExpAbs { dim }
            | FunctionSpec::Gaussian { dim, .. }
            | FunctionSpec::PowerDecay { dim, .. }
            | FunctionSpec::PolyGaussian { dim, .. }
            | FunctionSpec::InverseQuadratic { dim, .. } => *dim = n,
            _ => {}
        }
        self
    }

    pub fn scale(self, factor: f64) -> Self {
        FunctionSpec::Scale {
            factor,
            f: Box::new(self),
        }
    }

    pub fn plus(self, g: FunctionSpec) -> Result<Self> {
        same_dim(self.dim(), g.dim())?;
        Ok(FunctionSpec::Sum {
            f: Box::new(self),
            g: Box::new(g),
        })
    }

    pub fn times(self, g: FunctionSpec) -> Result<Self> {
        same_dim(self.dim(), g.dim())?;
        Ok(FunctionSpec::Mul {
            f: Box::new(self),
            g: Box::new(g),
        })
    }

    /// `f(· - shift)`.
    pub fn translate(self, shift: impl Into<Vector>) -> Result<Self> {
        let shift = shift.into();
        same_dim(self.dim(), shift.dim())?;
        Ok(FunctionSpec::Translate {
            f: Box::new(self),
            shift,
        })
    }

    /// `exp(i⟨freq, ·⟩) f`.
    pub fn modulate(self, freq: impl Into<Vector>) -> Result<Self> {
        let freq = freq.into();
        same_dim(self.dim(), freq.dim())?;
        Ok(FunctionSpec::Modulate {
            f: Box::new(self),
            freq,
        })
    }

    /// `f · χ_E`. Restricting twice to the same set is a no-op.
    pub fn restrict(self, set: &MeasurableSet) -> Result<Self> {
        set.validate()?;
        same_dim(self.dim(), set.dim())?;
        if let FunctionSpec::Restrict { set: inner, .. } = &self {
            if inner == set {
                return Ok(self);
            }
        }
        Ok(FunctionSpec::Restrict {
            f: Box::new(self),
            set: set.clone(),
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            FunctionSpec::Constant { dim, .. }
            | FunctionSpec::ExpAbs { dim }
            | FunctionSpec::Gaussian { dim, .. }
            | FunctionSpec::PowerDecay { dim, .. }
            | FunctionSpec::PolyGaussian { dim, .. }
            | FunctionSpec::InverseQuadratic { dim, .. } => *dim,
            FunctionSpec::Indicator { lo, .. } => lo.dim(),
            FunctionSpec::Sinc { half_width } => half_width.dim(),
            FunctionSpec::Sampled { .. } => 1,
            FunctionSpec::Restrict { f, .. }
            | FunctionSpec::Translate { f, .. }
            | FunctionSpec::Modulate { f, .. }
            | FunctionSpec::Scale { f, .. }
            | FunctionSpec::Sum { f, .. }
            | FunctionSpec::Mul { f, .. } => f.dim(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::invalid(format!("dimension must be in 1..={MAX_DIM}, got {dim}")));
        }
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(format!("{name} must be positive and finite, got {v}")))
            }
        };
        let finite = |name: &str, v: &[f64]| {
            if v.iter().all(|c| c.is_finite()) {
                Ok(())
            } else {
                Err(Error::invalid(format!("{name} must be finite")))
            }
        };
        match self {
            FunctionSpec::Constant { c, .. } => finite("c", &[*c]),
            FunctionSpec::ExpAbs { .. } => Ok(()),
            FunctionSpec::Gaussian { q, .. } => positive("q", *q),
            FunctionSpec::PowerDecay { s, .. } => positive("s", *s),
            FunctionSpec::InverseQuadratic { power, .. } => positive("power", *power),
            FunctionSpec::PolyGaussian { coeffs, q, .. } => {
                positive("q", *q)?;
                finite("coeffs", coeffs)
            }
            FunctionSpec::Indicator { lo, hi } => MeasurableSet::Box {
                lo: lo.clone(),
                hi: hi.clone(),
            }
            .validate(),
            FunctionSpec::Sinc { half_width } => {
                for &h in &half_width.0 {
                    positive("half_width", h)?;
                }
                Ok(())
            }
            FunctionSpec::Sampled { start, step, re, im } => {
                finite("start", &[*start])?;
                positive("step", *step)?;
                if re.len() < 2 {
                    return Err(Error::invalid("sampled grid needs at least two values"));
                }
                if !im.is_empty() && im.len() != re.len() {
                    return Err(Error::invalid("sampled imaginary part length differs"));
                }
                finite("values", re)?;
                finite("values", im)
            }
            FunctionSpec::Restrict { f, set } => {
                set.validate()?;
                same_dim(f.dim(), set.dim())?;
                f.validate()
            }
            FunctionSpec::Translate { f, shift: v } | FunctionSpec::Modulate { f, freq: v } => {
                same_dim(f.dim(), v.dim())?;
                finite("vector", &v.0)?;
                f.validate()
            }
            FunctionSpec::Scale { factor, f } => {
                finite("factor", &[*factor])?;
                f.validate()
            }
            FunctionSpec::Sum { f, g } | FunctionSpec::Mul { f, g } => {
                same_dim(f.dim(), g.dim())?;
                f.validate()?;
                g.validate()
            }
        }
    }

    /// `f(x)`. Fails on dimension mismatch or a non-finite point.
    pub fn eval(&self, x: &[f64]) -> Result<Complex64> {
        self.check_point(x)?;
        let v = self.eval_unchecked(x);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation {
                point: x.to_vec(),
                reason: "value is not finite".into(),
            })
        }
    }

    /// `|f(x)|`, skipping unimodular phases.
    pub fn modulus(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        Ok(self.modulus_unchecked(x))
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        if x.iter().any(|c| !c.is_finite()) {
            return Err(Error::Evaluation {
                point: x.to_vec(),
                reason: "point is not finite".into(),
            });
        }
        Ok(())
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> Complex64 {
        match self {
            FunctionSpec::Modulate { f, freq } => {
                let phase: f64 = freq.0.iter().zip(x).map(|(a, b)| a * b).sum();
                Complex64::from_polar(1.0, phase) * f.eval_unchecked(x)
            }
            FunctionSpec::Sampled { start, step, re, im } => match interp_position(*start, *step, re.len(), x[0]) {
                None => Complex64::new(0.0, 0.0),
                Some((j, w)) => {
                    let r = re[j] * (1.0 - w) + re[j + 1] * w;
                    let i = if im.is_empty() {
                        0.0
                    } else {
                        im[j] * (1.0 - w) + im[j + 1] * w
                    };
                    Complex64::new(r, i)
                }
            },
            FunctionSpec::Restrict { f, set } => {
                if set.contains(x) {
                    f.eval_unchecked(x)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            FunctionSpec::Translate { f, shift } => {
                let mut buf = [0.0; MAX_DIM];
                let y = offset(x, &shift.0, &mut buf);
                f.eval_unchecked(y)
            }
            FunctionSpec::Scale { factor, f } => f.eval_unchecked(x) * *factor,
            FunctionSpec::Sum { f, g } => f.eval_unchecked(x) + g.eval_unchecked(x),
            FunctionSpec::Mul { f, g } => f.eval_unchecked(x) * g.eval_unchecked(x),
            real => Complex64::new(real.eval_real_leaf(x), 0.0),
        }
    }

    pub(crate) fn modulus_unchecked(&self, x: &[f64]) -> f64 {
        match self {
            FunctionSpec::Modulate { f, .. } => f.modulus_unchecked(x),
            FunctionSpec::Restrict { f, set } => {
                if set.contains(x) {
                    f.modulus_unchecked(x)
                } else {
                    0.0
                }
            }
            FunctionSpec::Translate { f, shift } => {
                let mut buf = [0.0; MAX_DIM];
                let y = offset(x, &shift.0, &mut buf);
                f.modulus_unchecked(y)
            }
            FunctionSpec::Scale { factor, f } => {
                if *factor == 0.0 {
                    0.0
                } else {
                    factor.abs() * f.modulus_unchecked(x)
                }
            }
            FunctionSpec::Mul { f, g } => f.modulus_unchecked(x) * g.modulus_unchecked(x),
            FunctionSpec::Sum { .. } | FunctionSpec::Sampled { .. } => self.eval_unchecked(x).norm(),
            real => real.eval_real_leaf(x).abs(),
        }
    }

    fn eval_real_leaf(&self, x: &[f64]) -> f64 {
        match self {
            FunctionSpec::Constant { c, .. } => *c,
            FunctionSpec::ExpAbs { .. } => (-euclid(x)).exp(),
            FunctionSpec::Gaussian { q, .. } => (-q * norm_sq(x)).exp(),
            FunctionSpec::Indicator { lo, hi } => {
                let inside = x
                    .iter()
                    .zip(lo.0.iter().zip(&hi.0))
                    .all(|(&c, (&a, &b))| a < c && c < b);
                if inside {
                    1.0
                } else {
                    0.0
                }
            }
            FunctionSpec::PowerDecay { s, .. } => (1.0 + euclid(x)).powf(-s),
            FunctionSpec::PolyGaussian { coeffs, q, .. } => {
                let r2 = norm_sq(x);
                let rho = r2.sqrt();
                let poly = coeffs.iter().rev().fold(0.0, |acc, c| acc * rho + c);
                poly * (-q * r2).exp()
            }
            FunctionSpec::InverseQuadratic { power, .. } => (1.0 + norm_sq(x)).powf(-power),
            FunctionSpec::Sinc { half_width } => half_width.0.iter().zip(x).map(|(&h, &t)| sinc_factor(h, t)).product(),
            _ => unreachable!("composite kinds are handled by eval_unchecked"),
        }
    }

    pub(crate) fn landmarks(&self) -> Landmarks {
        let dim = self.dim();
        match self {
            FunctionSpec::Constant { .. } => Landmarks::new(dim),
            FunctionSpec::ExpAbs { .. }
            | FunctionSpec::Gaussian { .. }
            | FunctionSpec::PowerDecay { .. }
            | FunctionSpec::PolyGaussian { .. }
            | FunctionSpec::InverseQuadratic { .. }
            | FunctionSpec::Sinc { .. } => Landmarks::origin(dim),
            FunctionSpec::Indicator { lo, hi } => {
                let mut l = Landmarks::new(dim);
                for axis in 0..dim {
                    l.nodes[axis] = vec![lo.0[axis], hi.0[axis]];
                    l.centers[axis] = vec![0.5 * (lo.0[axis] + hi.0[axis])];
                }
                l
            }
            FunctionSpec::Sampled { start, step, re, .. } => {
                let mut l = Landmarks::new(1);
                let n = re.len();
                if n <= MAX_NODE_BREAKPOINTS {
                    l.nodes[0] = (0..n).map(|j| start + j as f64 * step).collect();
                } else {
                    l.nodes[0] = vec![*start, start + (n - 1) as f64 * step];
                }
                l
            }
            FunctionSpec::Restrict { f, set } => {
                let mut l = f.landmarks();
                let (lo, hi) = set.bounds();
                for axis in 0..dim {
                    l.nodes[axis].push(lo[axis]);
                    l.nodes[axis].push(hi[axis]);
                    l.centers[axis].push(0.5 * (lo[axis] + hi[axis]));
                }
                l
            }
            FunctionSpec::Translate { f, shift } => f.landmarks().shifted(&shift.0),
            FunctionSpec::Modulate { f, .. } | FunctionSpec::Scale { f, .. } => f.landmarks(),
            FunctionSpec::Sum { f, g } | FunctionSpec::Mul { f, g } => {
                let mut l = f.landmarks();
                l.merge(g.landmarks());
                l
            }
        }
    }

    /// Short human-readable label.
    pub fn label(&self) -> String {
        match self {
            FunctionSpec::Constant { c, .. } => format!("constant({c})"),
            FunctionSpec::ExpAbs { .. } => "exp_abs".into(),
            FunctionSpec::Gaussian { q, .. } => format!("gaussian({q})"),
            FunctionSpec::Indicator { lo, hi } => format!("indicator({:?},{:?})", lo.0, hi.0),
            FunctionSpec::PowerDecay { s, .. } => format!("power_decay({s})"),
            FunctionSpec::PolyGaussian { coeffs, q, .. } => format!("poly_gaussian({coeffs:?},{q})"),
            FunctionSpec::InverseQuadratic { power, .. } => format!("inverse_quadratic({power})"),
            FunctionSpec::Sinc { half_width } => format!("sinc({:?})", half_width.0),
            FunctionSpec::Sampled { re, .. } => format!("sampled[{}]", re.len()),
            FunctionSpec::Restrict { f, set } => {
                let (lo, hi) = set.bounds();
                format!("restrict({}, {:?}..{:?})", f.label(), lo, hi)
            }
            FunctionSpec::Translate { f, shift } => format!("translate({}, {:?})", f.label(), shift.0),
            FunctionSpec::Modulate { f, freq } => format!("modulate({}, {:?})", f.label(), freq.0),
            FunctionSpec::Scale { factor, f } => format!("{factor}*{}", f.label()),
            FunctionSpec::Sum { f, g } => format!("({} + {})", f.label(), g.label()),
            FunctionSpec::Mul { f, g } => format!("({} * {})", f.label(), g.label()),
        }
    }

    /// True when the function only takes real values.
    pub fn is_real(&self) -> bool {
        match self {
            FunctionSpec::Modulate { freq, f } => freq.is_zero() && f.is_real(),
            FunctionSpec::Sampled { im, .. } => im.iter().all(|v| *v == 0.0),
            FunctionSpec::Restrict { f, .. } | FunctionSpec::Translate { f, .. } | FunctionSpec::Scale { f, .. } => {
                f.is_real()
            }
            FunctionSpec::Sum { f, g } | FunctionSpec::Mul { f, g } => f.is_real() && g.is_real(),
            _ => true,
        }
    }
}

fn same_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|c| c * c).sum()
}

fn offset<'a>(x: &[f64], shift: &[f64], buf: &'a mut [f64; MAX_DIM]) -> &'a [f64] {
    for (i, (a, b)) in x.iter().zip(shift).enumerate() {
        buf[i] = a - b;
    }
    &buf[..x.len()]
}

/// `2 sin(h t) / t`, continuous at `t = 0`.
fn sinc_factor(h: f64, t: f64) -> f64 {
    let ht = h * t;
    if ht.abs() < 1e-4 {
        let ht2 = ht * ht;
        2.0 * h * (1.0 - ht2 / 6.0 * (1.0 - ht2 / 20.0))
    } else {
        2.0 * (h * t).sin() / t
    }
}

/// Interval index and fractional position of `x` on a uniform grid.
pub(crate) fn interp_position(start: f64, step: f64, len: usize, x: f64) -> Option<(usize, f64)> {
    let u = (x - start) / step;
    let last = (len - 1) as f64;
    if !(0.0..=last).contains(&u) {
        return None;
    }
    let j = (u.floor() as usize).min(len - 2);
    Some((j, u - j as f64))
}
