use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point or direction in ℝⁿ.
///
/// Serializes as a JSON array; a bare number is accepted on input as a
/// one-dimensional vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "VectorRepr", into = "Vec<f64>")]
pub struct Vector(pub Vec<f64>);

#[derive(Deserialize)]
#[serde(untagged)]
enum VectorRepr {
    Scalar(f64),
    Many(Vec<f64>),
}

impl From<VectorRepr> for Vector {
    fn from(repr: VectorRepr) -> Self {
        match repr {
            VectorRepr::Scalar(x) => Vector(vec![x]),
            VectorRepr::Many(v) => Vector(v),
        }
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Self {
        v.0
    }
}

impl From<f64> for Vector {
    fn from(x: f64) -> Self {
        Vector(vec![x])
    }
}

impl From<Vec<f64>> for Vector {
    fn from(v: Vec<f64>) -> Self {
        Vector(v)
    }
}

impl<const N: usize> From<[f64; N]> for Vector {
    fn from(v: [f64; N]) -> Self {
        Vector(v.to_vec())
    }
}

impl Vector {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        euclid(&self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }
}

pub(crate) fn euclid(x: &[f64]) -> f64 {
    match x {
        [a] => a.abs(),
        _ => x.iter().map(|c| c * c).sum::<f64>().sqrt(),
    }
}

/// Measurable subsets of ℝⁿ used for restriction and bounded integration
/// domains. Boxes are open; boundaries are a null set for every integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasurableSet {
    Box {
        lo: Vector,
        hi: Vector,
    },
    /// The shrinking interval family `(n/(n+1), 1)`, n ≥ 1.
    IntervalFamily {
        n: u32,
    },
}

impl MeasurableSet {
    pub fn interval(lo: f64, hi: f64) -> Self {
        MeasurableSet::Box {
            lo: lo.into(),
            hi: hi.into(),
        }
    }

    pub fn cube(dim: usize, lo: f64, hi: f64) -> Self {
        MeasurableSet::Box {
            lo: Vector(vec![lo; dim]),
            hi: Vector(vec![hi; dim]),
        }
    }

    pub fn family(n: u32) -> Self {
        MeasurableSet::IntervalFamily { n }
    }

    pub fn dim(&self) -> usize {
        match self {
            MeasurableSet::Box { lo, .. } => lo.dim(),
            MeasurableSet::IntervalFamily { .. } => 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MeasurableSet::Box { lo, hi } => {
                if lo.dim() == 0 {
                    return Err(Error::invalid("box must have dimension at least 1"));
                }
                if lo.dim() != hi.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: lo.dim(),
                        found: hi.dim(),
                    });
                }
                for (a, b) in lo.0.iter().zip(&hi.0) {
                    if !(a.is_finite() && b.is_finite()) || a > b {
                        return Err(Error::invalid(format!(
                            "box bounds must be finite with lo <= hi, got [{a}, {b}]"
                        )));
                    }
                }
                Ok(())
            }
            MeasurableSet::IntervalFamily { n } => {
                if *n == 0 {
                    Err(Error::invalid("interval family index must be >= 1"))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Lower and upper corners.
    pub fn bounds(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            MeasurableSet::Box { lo, hi } => (lo.0.clone(), hi.0.clone()),
            MeasurableSet::IntervalFamily { n } => {
                let n = f64::from(*n);
                (vec![n / (n + 1.0)], vec![1.0])
            }
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            MeasurableSet::Box { lo, hi } => x
                .iter()
                .zip(lo.0.iter().zip(&hi.0))
                .all(|(&c, (&a, &b))| a < c && c < b),
            MeasurableSet::IntervalFamily { n } => {
                let n = f64::from(*n);
                let c = x[0];
                n / (n + 1.0) < c && c < 1.0
            }
        }
    }

    pub fn measure(&self) -> f64 {
        let (lo, hi) = self.bounds();
        lo.iter().zip(&hi).map(|(a, b)| b - a).product()
    }

    /// Distance from the origin to the farthest point of the closure.
    pub fn outer_radius(&self) -> f64 {
        let (lo, hi) = self.bounds();
        let far: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| a.abs().max(b.abs())).collect();
        euclid(&far)
    }

    /// Distance from the origin to the nearest point of the closure.
    pub fn inner_radius(&self) -> f64 {
        let (lo, hi) = self.bounds();
        let near: Vec<f64> = lo
            .iter()
            .zip(&hi)
            .map(|(&a, &b)| {
                if a <= 0.0 && 0.0 <= b {
                    0.0
                } else {
                    a.abs().min(b.abs())
                }
            })
            .collect();
        euclid(&near)
    }
}
