//! Radial majorants ("decay certificates") used to truncate integrals over
//! ℝⁿ with an explicit tail bound.
//!
//! A term bounds a function by `coef · exp(-a ρ² - b ρ) (1 + ρ)^m` with
//! `ρ = |x - c|`, `|c| = shift`, optionally cut off at `ρ_0 = |x| > cutoff`.

use super::weight::{RadialForm, WeightSpec};
use super::FunctionSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Term {
    pub coef: f64,
    pub shift: f64,
    pub a: f64,
    pub b: f64,
    pub m: f64,
    /// The term vanishes for `|x| > cutoff`.
    pub cutoff: Option<f64>,
}

impl Term {
    fn radial(coef: f64, a: f64, b: f64, m: f64) -> Self {
        Term {
            coef,
            shift: 0.0,
            a,
            b,
            m,
            cutoff: None,
        }
    }

    fn compact(coef: f64, radius: f64) -> Self {
        Term {
            cutoff: Some(radius),
            ..Term::radial(coef, 0.0, 0.0, 0.0)
        }
    }

    /// Bound of the same shape centred at the origin, valid on all of ℝⁿ.
    fn recentred(self) -> Self {
        let s = self.shift;
        if s == 0.0 {
            return self;
        }
        // |x-c|² ≥ |x|²/2 - s², (1+|x|) ≤ (1+|x-c|)(1+s), |x-c| ≥ |x| - s
        Term {
            coef: self.coef * (self.a * s * s + self.b * s).exp() * (1.0 + s).powf(self.m.abs()),
            shift: 0.0,
            a: self.a / 2.0,
            b: self.b,
            m: self.m,
            cutoff: self.cutoff,
        }
    }
}

/// Sum of radial majorant terms.
///
/// `tight` means the bound is also of the right order from below at
/// infinity, so a divergent majorant proves divergence. Composite sums lose
/// that property (cancellation), which turns a divergent bound into an
/// undecided verdict.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Envelope {
    pub terms: Vec<Term>,
    pub tight: bool,
}

impl Envelope {
    fn single(term: Term) -> Self {
        Envelope {
            terms: vec![term],
            tight: true,
        }
    }

    fn zero() -> Self {
        Envelope {
            terms: Vec::new(),
            tight: true,
        }
    }

    /// Largest shift or cutoff radius; the integrand has no structure that
    /// matters for truncation beyond this.
    pub fn extent(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.cutoff.unwrap_or(0.0).max(t.shift))
            .fold(0.0, f64::max)
    }

    /// True when every term is compactly supported.
    pub fn is_compact(&self) -> bool {
        self.terms.iter().all(|t| t.cutoff.is_some())
    }

    pub fn compact_radius(&self) -> Option<f64> {
        if self.is_compact() {
            Some(self.terms.iter().filter_map(|t| t.cutoff).fold(0.0, f64::max))
        } else {
            None
        }
    }

    /// Majorant value at radius `rho` (origin centred), used for sup bounds.
    pub fn sup_bound(&self) -> Option<f64> {
        let mut total = 0.0;
        for t in &self.terms {
            let t = t.recentred();
            // sup over ρ ≥ 0 of exp(-aρ² - bρ)(1+ρ)^m
            if t.m <= 0.0 && t.b >= 0.0 {
                total += t.coef;
            } else {
                let r = t.cutoff?;
                let (a, b, m) = (t.a, t.b, t.m);
                let grid = 256;
                let mut best: f64 = 0.0;
                for k in 0..=grid {
                    let rho = r * k as f64 / grid as f64;
                    best = best.max((-a * rho * rho - b * rho).exp() * (1.0 + rho).powf(m));
                }
                // slack for the sampled maximum of a log-concave-ish profile
                total += t.coef * best * (1.0 + (m.abs() + b.abs() + 2.0 * a * r) * r / grid as f64).exp();
            }
        }
        Some(total)
    }

    /// Whether `∫ envelope^r w^σ` converges over ℝⁿ.
    pub fn integrable(&self, r: f64, weight: &WeightSpec, sigma: f64) -> bool {
        let w = weight.radial_form();
        self.terms.iter().all(|t| {
            let p = powered(t, r, &w, sigma, 1);
            p.cutoff.is_some()
                || p.a > 0.0
                || (p.a == 0.0 && p.b > 0.0)
                || (p.a == 0.0 && p.b == 0.0 && p.m < -(weight.dim as f64))
        })
    }

    /// Upper bound on `∫_{|x|>R} |f|^r w^σ dx` in dimension `dim`.
    /// Returns `None` when the bound is infinite at this radius or
    /// requires a larger `R` (log-derivative not yet positive).
    pub fn tail(&self, r: f64, weight: &WeightSpec, sigma: f64, dim: usize, radius: f64) -> Option<f64> {
        let k = self.terms.len();
        if k == 0 {
            return Some(0.0);
        }
        let mult = if r > 1.0 { (k as f64).powf(r - 1.0) } else { 1.0 };
        let w = weight.radial_form();
        let sphere = match dim {
            1 => 2.0,
            2 => 2.0 * std::f64::consts::PI,
            _ => 4.0 * std::f64::consts::PI,
        };
        let mut total = 0.0;
        for t in &self.terms {
            if let Some(cut) = t.cutoff {
                if radius >= cut {
                    continue;
                }
            }
            let s = t.shift;
            if radius <= s {
                return None;
            }
            // outward bound for ρ ≥ R > s, still with respect to |x - c|
            let mut coef = t.coef;
            let mut a = t.a;
            if s > 0.0 {
                coef *= (t.b * s).exp();
                a *= (1.0 - s / radius).powi(2);
                if t.m < 0.0 {
                    coef *= ((1.0 + radius) / (1.0 + radius - s)).powf(-t.m);
                } else {
                    coef *= ((1.0 + radius + s) / (1.0 + radius)).powf(t.m);
                }
            }
            let shaped = Term {
                coef,
                shift: 0.0,
                a,
                b: t.b,
                m: t.m,
                cutoff: None,
            };
            let g = powered(&shaped, r, &w, sigma, dim);
            total += tail_integral(g.coef, g.a, g.b, g.m, radius)?;
        }
        Some(mult * sphere * total)
    }
}

/// `(term)^r · w^σ · (1+ρ)^{dim-1}` as a single radial form.
fn powered(t: &Term, r: f64, w: &RadialForm, sigma: f64, dim: usize) -> Term {
    Term {
        coef: t.coef.powf(r) * if sigma == 0.0 { 1.0 } else { w.c.powf(sigma) },
        shift: t.shift,
        a: t.a * r + w.a * sigma,
        b: t.b * r + w.b * sigma,
        m: t.m * r + w.m * sigma + (dim as f64 - 1.0),
        cutoff: t.cutoff,
    }
}

/// `∫_R^∞ C exp(-Aρ² - Bρ)(1+ρ)^M dρ`, bounded above in closed form.
pub(crate) fn tail_integral(c: f64, a: f64, b: f64, m: f64, radius: f64) -> Option<f64> {
    if c == 0.0 {
        return Some(0.0);
    }
    if a > 0.0 || b > 0.0 {
        let kappa = 2.0 * a * radius + b - m.max(0.0) / (1.0 + radius);
        if kappa <= 0.0 {
            return None;
        }
        let log_g = c.ln() - a * radius * radius - b * radius + m * (1.0 + radius).ln();
        return Some(log_g.exp() / kappa);
    }
    if b == 0.0 && m < -1.0 {
        return Some(c * (1.0 + radius).powf(m + 1.0) / (-m - 1.0));
    }
    None
}

impl FunctionSpec {
    /// Radial majorant of `|f|`, or an error naming the kind that has none.
    pub(crate) fn envelope(&self) -> Result<Envelope> {
        let env = match self {
            FunctionSpec::Constant { c, .. } => {
                if *c == 0.0 {
                    Envelope::zero()
                } else {
                    Envelope::single(Term::radial(c.abs(), 0.0, 0.0, 0.0))
                }
            }
            FunctionSpec::ExpAbs { .. } => Envelope::single(Term::radial(1.0, 0.0, 1.0, 0.0)),
            FunctionSpec::Gaussian { q, .. } => Envelope::single(Term::radial(1.0, *q, 0.0, 0.0)),
            FunctionSpec::PowerDecay { s, .. } => Envelope::single(Term::radial(1.0, 0.0, 0.0, -s)),
            FunctionSpec::InverseQuadratic { power, .. } => {
                // (1+ρ)² ≤ 2(1+ρ²)
                Envelope::single(Term::radial(2f64.powf(*power), 0.0, 0.0, -2.0 * power))
            }
            FunctionSpec::PolyGaussian { coeffs, q, .. } => {
                let c: f64 = coeffs.iter().map(|v| v.abs()).sum();
                let deg = coeffs.len().saturating_sub(1) as f64;
                if c == 0.0 {
                    Envelope::zero()
                } else {
                    Envelope {
                        terms: vec![Term::radial(c, *q, 0.0, deg)],
                        tight: false,
                    }
                }
            }
            FunctionSpec::Indicator { lo, hi } => {
                let set = super::MeasurableSet::Box {
                    lo: lo.clone(),
                    hi: hi.clone(),
                };
                if set.measure() == 0.0 {
                    Envelope::zero()
                } else {
                    Envelope::single(Term::compact(1.0, set.outer_radius()))
                }
            }
            FunctionSpec::Sinc { half_width } => {
                if half_width.dim() != 1 {
                    return Err(Error::NoDecayCertificate(
                        "multi-dimensional sinc products decay only along diagonals".into(),
                    ));
                }
                // |2 sin(ht)/t| ≤ min(2h, 2/|t|) ≤ max(4, 4h)/(1+|t|)
                let h = half_width.0[0];
                Envelope::single(Term::radial(4f64.max(4.0 * h), 0.0, 0.0, -1.0))
            }
            FunctionSpec::Sampled { start, step, re, im } => {
                let end = start + (re.len() - 1) as f64 * step;
                let peak = re
                    .iter()
                    .zip(im.iter().chain(std::iter::repeat(&0.0)))
                    .map(|(a, b)| a.hypot(*b))
                    .fold(0.0, f64::max);
                if peak == 0.0 {
                    Envelope::zero()
                } else {
                    Envelope::single(Term::compact(peak, start.abs().max(end.abs())))
                }
            }
            FunctionSpec::Restrict { f, set } => {
                let radius = set.outer_radius();
                let mut env = f.envelope().or_else(|_| f.sup_envelope(radius))?;
                for t in &mut env.terms {
                    t.cutoff = Some(t.cutoff.map_or(radius, |c| c.min(radius)));
                }
                if set.measure() == 0.0 {
                    env = Envelope::zero();
                }
                env
            }
            FunctionSpec::Translate { f, shift } => {
                let d = shift.norm();
                let mut env = f.envelope()?;
                for t in &mut env.terms {
                    match t.cutoff {
                        Some(c) if t.a == 0.0 && t.b == 0.0 && t.m == 0.0 => t.cutoff = Some(c + d),
                        Some(c) => {
                            t.shift += d;
                            t.cutoff = Some(c + d);
                        }
                        None => t.shift += d,
                    }
                }
                env
            }
            FunctionSpec::Modulate { f, .. } => f.envelope()?,
            FunctionSpec::Scale { factor, f } => {
                if *factor == 0.0 {
                    Envelope::zero()
                } else {
                    let mut env = f.envelope()?;
                    env.terms.iter_mut().for_each(|t| t.coef *= factor.abs());
                    env
                }
            }
            FunctionSpec::Sum { f, g } => {
                let mut a = f.envelope()?;
                let b = g.envelope()?;
                a.terms.extend(b.terms);
                a.tight = false;
                a
            }
            FunctionSpec::Mul { f, g } => {
                let a = f.envelope();
                let b = g.envelope();
                let (a, b) = match (a, b) {
                    (Ok(a), Ok(b)) => (a, b),
                    (Err(e), Ok(b)) => match b.compact_radius() {
                        Some(r) => (f.sup_envelope(r)?, b),
                        None => return Err(e),
                    },
                    (Ok(a), Err(e)) => match a.compact_radius() {
                        Some(r) => (a, g.sup_envelope(r)?),
                        None => return Err(e),
                    },
                    (Err(e), Err(_)) => return Err(e),
                };
                let tight = a.tight && b.tight && a.terms.len() == 1 && b.terms.len() == 1;
                let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
                for s in &a.terms {
                    for t in &b.terms {
                        let (s, t) = (s.recentred(), t.recentred());
                        let cutoff = match (s.cutoff, t.cutoff) {
                            (Some(x), Some(y)) => Some(x.min(y)),
                            (x, y) => x.or(y),
                        };
                        terms.push(Term {
                            coef: s.coef * t.coef,
                            shift: 0.0,
                            a: s.a + t.a,
                            b: s.b + t.b,
                            m: s.m + t.m,
                            cutoff,
                        });
                    }
                }
                Envelope { terms, tight }
            }
        };
        Ok(env)
    }

    /// Constant majorant on the ball of radius `radius`, for kinds whose
    /// global envelope is missing but which are bounded.
    fn sup_envelope(&self, radius: f64) -> Result<Envelope> {
        match self {
            FunctionSpec::Sinc { half_width } => {
                let peak: f64 = half_width.0.iter().map(|h| 2.0 * h).product();
                Ok(Envelope::single(Term::compact(peak, radius)))
            }
            other => Err(Error::NoDecayCertificate(format!(
                "{} has no decay certificate",
                other.label()
            ))),
        }
    }

    /// True when the kind carries a certificate that makes `∫|f|^r w^σ`
    /// finite over ℝⁿ.
    pub fn has_decay_certificate(&self, r: f64, weight: &WeightSpec, sigma: f64) -> bool {
        self.envelope().map(|e| e.integrable(r, weight, sigma)).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MeasurableSet;

    fn unit() -> WeightSpec {
        WeightSpec::unit()
    }

    #[test]
    fn tail_of_exp_abs_is_exact() {
        // ∫_{|t|>R} e^{-t} = 2e^{-R}
        let env = FunctionSpec::exp_abs().envelope().unwrap();
        let t = env.tail(1.0, &unit(), 0.0, 1, 10.0).unwrap();
        assert!((t - 2.0 * (-10.0f64).exp()).abs() < 1e-18);
    }

    #[test]
    fn tail_of_power_decay_is_exact() {
        // ∫_{|t|>R} (1+t)^{-3} = (1+R)^{-2}
        let env = FunctionSpec::power_decay(3.0).envelope().unwrap();
        let t = env.tail(1.0, &unit(), 0.0, 1, 9.0).unwrap();
        assert!((t - 0.01).abs() < 1e-15);
    }

    #[test]
    fn tail_dominates_gaussian_tail() {
        // 2∫_R^∞ e^{-t²} = √π erfc(R); erfc(3) = 2.209049699858544e-5
        let env = FunctionSpec::gaussian(1.0).envelope().unwrap();
        let t = env.tail(1.0, &unit(), 0.0, 1, 3.0).unwrap();
        let exact = std::f64::consts::PI.sqrt() * 2.209049699858544e-5;
        assert!(t >= exact && t < 1.2 * exact, "{t} vs {exact}");
    }

    #[test]
    fn shifted_tails_dominate() {
        let f = FunctionSpec::exp_abs().translate(3.0).unwrap();
        let env = f.envelope().unwrap();
        // exact: ∫_{t>R} e^{-(t-3)} + ∫_{t<-R} e^{-(|t|+3)} = e^{3-R} + e^{-3-R}
        let r: f64 = 10.0;
        let exact = (3.0 - r).exp() + (-3.0 - r).exp();
        let t = env.tail(1.0, &unit(), 0.0, 1, r).unwrap();
        assert!(t >= exact && t < 2.5 * exact);
        assert!(env.tail(1.0, &unit(), 0.0, 1, 2.0).is_none());
    }

    #[test]
    fn weights_change_integrability() {
        let env = FunctionSpec::power_decay(3.0).envelope().unwrap();
        assert!(env.integrable(1.0, &unit(), 0.0));
        assert!(!env.integrable(1.0, &WeightSpec::power_growth(2.0), 1.0));
        assert!(env.integrable(0.5, &WeightSpec::power_decay(2.0), 1.0));
        assert!(!env.integrable(0.3, &unit(), 0.0));
        let c = FunctionSpec::constant(1.0).envelope().unwrap();
        assert!(!c.integrable(1.0, &unit(), 1.0));
        assert!(c.integrable(1.0, &WeightSpec::power_decay(2.0), 1.0));
    }

    #[test]
    fn compact_kinds_have_no_tail() {
        let f = FunctionSpec::exp_abs()
            .restrict(&MeasurableSet::interval(0.0, 1.0))
            .unwrap();
        let env = f.envelope().unwrap();
        assert_eq!(env.compact_radius(), Some(1.0));
        assert_eq!(env.tail(1.0, &WeightSpec::exp_growth(3.0), 1.0, 1, 1.0), Some(0.0));
        let sinc = FunctionSpec::Sinc { half_width: 1.0.into() };
        assert!(sinc.envelope().unwrap().integrable(2.0, &unit(), 0.0));
        assert!(!sinc.envelope().unwrap().integrable(1.0, &unit(), 0.0));
    }

    #[test]
    fn tail_integral_cases() {
        assert!(tail_integral(1.0, 0.0, 0.0, -1.0, 5.0).is_none());
        assert!(tail_integral(1.0, 0.0, -1.0, -3.0, 5.0).is_none());
        // growing power with exponential decay needs R past the bump
        assert!(tail_integral(1.0, 0.0, 1.0, 10.0, 2.0).is_none());
        assert!(tail_integral(1.0, 0.0, 1.0, 10.0, 20.0).is_some());
    }
}
