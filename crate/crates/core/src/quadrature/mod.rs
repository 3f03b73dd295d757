//! Adaptive integration of `|f|^r w^σ` over boxes and over ℝⁿ.
//!
//! Unbounded domains are truncated to `[-R, R]ⁿ`, with `R` chosen from the
//! function's radial majorant so that the analytic tail bound stays below
//! half the tolerance. Inside the box a global adaptive bisection with a
//! tensor Gauss–Kronrod 7/15 rule drives `|K - G|` below the other half.

mod gk;

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::envelope::Envelope;
use crate::model::{FunctionSpec, MeasurableSet, WeightSpec, MAX_DIM};

/// Default relative tolerance.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Default bisection depth limit per axis.
pub const DEFAULT_MAX_DEPTH: u32 = 50;
/// Truncation radii above this are treated as an accuracy failure.
pub const MAX_RADIUS: f64 = 1e12;
/// Absolute floor below which the relative tolerance is measured.
pub const ABS_FLOOR: f64 = 1e-300;

const DEFAULT_MAX_EVALS: usize = 40_000_000;
const COARSE_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    /// All of ℝⁿ.
    Whole,
    Set {
        set: MeasurableSet,
    },
}

impl Domain {
    pub fn set(set: MeasurableSet) -> Self {
        Domain::Set { set }
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        Domain::Set {
            set: MeasurableSet::interval(lo, hi),
        }
    }
}

/// `∫_domain |f|^r w^σ` with a relative tolerance.
#[derive(Debug, Clone)]
pub struct IntegralTask<'a> {
    pub f: &'a FunctionSpec,
    pub r: f64,
    pub weight: &'a WeightSpec,
    pub sigma: f64,
    pub domain: Domain,
    pub tol: f64,
    pub max_depth: u32,
    pub max_evals: usize,
    /// Forces the truncation radius instead of deriving it from the tail bound.
    pub radius: Option<f64>,
}

impl<'a> IntegralTask<'a> {
    pub fn new(f: &'a FunctionSpec, r: f64, weight: &'a WeightSpec, sigma: f64, domain: Domain) -> Self {
        IntegralTask {
            f,
            r,
            weight,
            sigma,
            domain,
            tol: DEFAULT_TOL,
            max_depth: DEFAULT_MAX_DEPTH,
            max_evals: DEFAULT_MAX_EVALS,
            radius: None,
        }
    }

    pub fn tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn max_depth(mut self, depth: u32) -> Self {
        self.max_depth = depth;
        self
    }

    pub fn max_evals(mut self, evals: usize) -> Self {
        self.max_evals = evals;
        self
    }

    pub fn truncation_radius(mut self, radius: f64) -> Self {
        self.radius = Some(radius);
        self
    }

    fn validate(&self) -> Result<()> {
        self.f.validate()?;
        self.weight.validate()?;
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(Error::invalid(format!("exponent r must be positive, got {}", self.r)));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::invalid(format!(
                "weight exponent must be >= 0, got {}",
                self.sigma
            )));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::invalid(format!("tolerance must be in (0, 1), got {}", self.tol)));
        }
        if self.max_depth == 0 {
            return Err(Error::invalid("max_depth must be >= 1"));
        }
        let dim = self.f.dim();
        if self.weight.dim != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.weight.dim,
            });
        }
        if let Domain::Set { set } = &self.domain {
            set.validate()?;
            if set.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: set.dim(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: f64,
    /// Estimated quadrature error inside the truncated domain.
    pub error_bound: f64,
    /// Rigorous bound on the omitted tail (zero for bounded domains).
    pub tail_bound: f64,
    pub truncation_radius: Option<f64>,
    pub cells: usize,
    pub evaluations: usize,
}

impl IntegralResult {
    pub fn total_error(&self) -> f64 {
        self.error_bound + self.tail_bound
    }

    fn zero() -> Self {
        IntegralResult {
            value: 0.0,
            error_bound: 0.0,
            tail_bound: 0.0,
            truncation_radius: None,
            cells: 0,
            evaluations: 0,
        }
    }
}

/// Evaluates `task`; see the module documentation for the error model.
pub fn integrate(task: &IntegralTask<'_>) -> Result<IntegralResult> {
    task.validate()?;
    let f = task.f;
    let dim = f.dim();
    let (r, sigma) = (task.r, task.sigma);
    let integrand = |x: &[f64]| -> f64 {
        let m = f.modulus_unchecked(x);
        if m == 0.0 {
            return 0.0;
        }
        let v = if r == 1.0 { m } else { m.powf(r) };
        v * task.weight.eval_pow(x, sigma)
    };

    match &task.domain {
        Domain::Set { set } => {
            let (lo, hi) = set.bounds();
            if set.measure() == 0.0 {
                return Ok(IntegralResult::zero());
            }
            let out = adaptive(integrand, &grid(f, &lo, &hi), task, task.tol)?;
            Ok(out.into_result(0.0, None))
        }
        Domain::Whole => {
            let env = certify(f, r, task.weight, sigma)?;
            if env.terms.is_empty() {
                return Ok(IntegralResult::zero());
            }
            if let Some(radius) = task.radius {
                let tail = env.tail(r, task.weight, sigma, dim, radius).unwrap_or(f64::INFINITY);
                let (lo, hi) = (vec![-radius; dim], vec![radius; dim]);
                let out = adaptive(integrand, &grid(f, &lo, &hi), task, task.tol / 2.0)?;
                return Ok(out.into_result(tail, Some(radius)));
            }
            if let Some(radius) = env.compact_radius() {
                let radius = radius.max(f64::MIN_POSITIVE);
                let (lo, hi) = (vec![-radius; dim], vec![radius; dim]);
                let out = adaptive(integrand, &grid(f, &lo, &hi), task, task.tol)?;
                return Ok(out.into_result(0.0, Some(radius)));
            }

            let core = 1.0 + env.extent();
            let (lo, hi) = (vec![-core; dim], vec![core; dim]);
            let coarse_task = IntegralTask {
                tol: COARSE_TOL,
                ..task.clone()
            };
            let coarse = adaptive(integrand, &grid(f, &lo, &hi), &coarse_task, COARSE_TOL)?;
            // the final value over a larger box can only be larger
            let scale = (coarse.value - coarse.error).max(0.5 * coarse.value).max(ABS_FLOOR);
            let budget = 0.5 * task.tol * scale;
            let (radius, tail) = choose_radius(&env, task, core, budget).ok_or(Error::Accuracy {
                estimate: coarse.value,
                error_bound: f64::INFINITY,
            })?;
            let (lo, hi) = (vec![-radius; dim], vec![radius; dim]);
            let out = adaptive(integrand, &grid(f, &lo, &hi), task, task.tol / 2.0)?;
            Ok(out.into_result(tail, Some(radius)))
        }
    }
}

/// The majorant of `f`, provided `∫ |f|^r w^σ` over ℝⁿ is certified finite.
pub(crate) fn certify(f: &FunctionSpec, r: f64, weight: &WeightSpec, sigma: f64) -> Result<Envelope> {
    let env = f.envelope()?;
    if env.integrable(r, weight, sigma) {
        return Ok(env);
    }
    let what = format!(
        "∫ |{}|^{} · {}^{} over ℝ^{} has a non-integrable majorant",
        f.label(),
        r,
        weight.label(),
        sigma,
        f.dim()
    );
    Err(if env.tight {
        Error::Divergent(what)
    } else {
        Error::Undecided(what)
    })
}

/// Smallest radius (up to a factor close to one) whose tail bound fits the
/// budget.
fn choose_radius(env: &Envelope, task: &IntegralTask<'_>, start: f64, budget: f64) -> Option<(f64, f64)> {
    let dim = task.f.dim();
    let tail = |r: f64| env.tail(task.r, task.weight, task.sigma, dim, r);
    let fits = |r: f64| matches!(tail(r), Some(t) if t <= budget);
    let mut hi = start.max(1.0);
    while !fits(hi) {
        hi *= 2.0;
        if hi > MAX_RADIUS {
            return None;
        }
    }
    let mut lo = (hi / 2.0).max(start);
    if lo < hi {
        if fits(lo) {
            hi = lo;
        } else {
            while hi / lo > 1.0 + 1e-3 {
                let mid = (lo * hi).sqrt();
                if fits(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
        }
    }
    Some((hi, tail(hi).unwrap_or(f64::INFINITY)))
}

/// Per-axis breakpoints inside `[lo, hi]`: the function's kinks and jumps,
/// the origin (weights are radial), and a geometric grading around every
/// centre so slowly decaying tails get cells of proportional size.
fn grid(f: &FunctionSpec, lo: &[f64], hi: &[f64]) -> Vec<Vec<f64>> {
    let dim = lo.len();
    let marks = f.landmarks();
    let ratio = if dim == 1 { 2.0 } else { 4.0 };
    let mut axes = Vec::with_capacity(dim);
    for d in 0..dim {
        let (a, b) = (lo[d], hi[d]);
        let mut pts = vec![a, b, 0.0];
        pts.extend(marks.nodes[d].iter().copied());
        let mut centres = marks.centers[d].clone();
        centres.push(0.0);
        centres.sort_by(f64::total_cmp);
        centres.dedup();
        for &c in &centres {
            let mut step = 1.0;
            while c - step > a || c + step < b {
                pts.push(c - step);
                pts.push(c + step);
                step *= ratio;
            }
        }
        pts.retain(|&p| p >= a && p <= b && p.is_finite());
        pts.sort_by(f64::total_cmp);
        let span = (b - a).max(f64::MIN_POSITIVE);
        pts.dedup_by(|x, y| (*x - *y).abs() <= 1e-13 * span.max(y.abs()));
        if pts.len() == 1 {
            pts.push(b);
        }
        axes.push(pts);
    }
    axes
}

struct Outcome {
    value: f64,
    error: f64,
    cells: usize,
    evals: usize,
}

impl Outcome {
    fn into_result(self, tail: f64, radius: Option<f64>) -> IntegralResult {
        IntegralResult {
            value: self.value,
            error_bound: self.error,
            tail_bound: tail,
            truncation_radius: radius,
            cells: self.cells,
            evaluations: self.evals,
        }
    }
}

#[derive(Debug, Clone)]
struct Cell {
    lo: [f64; MAX_DIM],
    hi: [f64; MAX_DIM],
    value: f64,
    err: f64,
    depth: u32,
    id: u64,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Cell {}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err).then_with(|| other.id.cmp(&self.id))
    }
}

/// Global adaptive bisection over the tensor grid `axes`, stopping when the
/// summed `|K - G|` is within `rel_tol · max(|value|, floor)` or roundoff.
fn adaptive(
    mut integrand: impl FnMut(&[f64]) -> f64,
    axes: &[Vec<f64>],
    task: &IntegralTask<'_>,
    rel_tol: f64,
) -> Result<Outcome> {
    let dim = axes.len();
    let rule = gk::Rule::new();
    let per_cell = gk::POINTS.pow(dim as u32);
    let max_depth = task.max_depth * dim as u32;
    let mut evals = 0usize;
    let mut next_id = 0u64;
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Cell> = Vec::new();
    let mut non_finite = None;

    let mut eval_cell = |lo: [f64; MAX_DIM], hi: [f64; MAX_DIM], depth: u32, id: u64, evals: &mut usize| {
        let (k, g) = rule.apply(&mut integrand, &lo[..dim], &hi[..dim]);
        *evals += per_cell;
        Cell {
            lo,
            hi,
            value: k,
            err: (k - g).abs(),
            depth,
            id,
        }
    };

    // initial tensor grid
    let counts: Vec<usize> = axes.iter().map(|a| a.len() - 1).collect();
    let total: usize = counts.iter().product();
    let mut idx = [0usize; MAX_DIM];
    for _ in 0..total {
        let mut lo = [0.0; MAX_DIM];
        let mut hi = [0.0; MAX_DIM];
        for d in 0..dim {
            lo[d] = axes[d][idx[d]];
            hi[d] = axes[d][idx[d] + 1];
        }
        let cell = eval_cell(lo, hi, 0, next_id, &mut evals);
        next_id += 1;
        heap.push(cell);
        for d in 0..dim {
            idx[d] += 1;
            if idx[d] < counts[d] {
                break;
            }
            idx[d] = 0;
        }
    }

    let mut value: f64 = heap.iter().map(|c| c.value).sum();
    let mut err: f64 = heap.iter().map(|c| c.err).sum();
    let mut frozen_err = 0.0;
    let mut iter = 0usize;
    let target = |v: f64, abs_v: f64| (rel_tol * v.abs().max(ABS_FLOOR)).max(64.0 * f64::EPSILON * abs_v);
    let converged = loop {
        if !value.is_finite() || !err.is_finite() {
            non_finite = Some(value);
            break false;
        }
        if err <= target(value, value.abs()) {
            break true;
        }
        if frozen_err > target(value, value.abs()) {
            break false;
        }
        if evals >= task.max_evals {
            break false;
        }
        let Some(cell) = heap.pop() else { break false };
        if cell.depth >= max_depth {
            frozen_err += cell.err;
            frozen.push(cell);
            continue;
        }
        // bisect the widest axis
        let axis = (0..dim)
            .max_by(|&a, &b| (cell.hi[a] - cell.lo[a]).total_cmp(&(cell.hi[b] - cell.lo[b])))
            .unwrap_or(0);
        let mid = 0.5 * (cell.lo[axis] + cell.hi[axis]);
        if mid <= cell.lo[axis] || mid >= cell.hi[axis] {
            frozen_err += cell.err;
            frozen.push(cell);
            continue;
        }
        let mut left_hi = cell.hi;
        left_hi[axis] = mid;
        let mut right_lo = cell.lo;
        right_lo[axis] = mid;
        let left = eval_cell(cell.lo, left_hi, cell.depth + 1, next_id, &mut evals);
        let right = eval_cell(right_lo, cell.hi, cell.depth + 1, next_id + 1, &mut evals);
        next_id += 2;
        value += left.value + right.value - cell.value;
        err += left.err + right.err - cell.err;
        heap.push(left);
        heap.push(right);
        iter += 1;
        if iter.is_multiple_of(512) {
            let (v, e) = exact_totals(heap.iter().chain(frozen.iter()));
            value = v;
            err = e;
        }
    };

    let mut cells: Vec<Cell> = heap.into_vec();
    cells.extend(frozen);
    // position order makes the final sum independent of refinement history
    cells.sort_by(|a, b| {
        a.lo[..dim]
            .iter()
            .zip(&b.lo[..dim])
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    });
    let (value, error) = exact_totals(cells.iter());
    if let Some(v) = non_finite {
        return Err(Error::Evaluation {
            point: Vec::new(),
            reason: format!("integrand produced a non-finite value ({v})"),
        });
    }
    let target_final = target(value, value.abs());
    if !converged && error > target_final {
        return Err(Error::Accuracy {
            estimate: value,
            error_bound: error,
        });
    }
    Ok(Outcome {
        value,
        error,
        cells: cells.len(),
        evals,
    })
}

/// Neumaier-compensated sums of cell values and errors.
fn exact_totals<'c>(cells: impl Iterator<Item = &'c Cell>) -> (f64, f64) {
    let mut v = Neumaier::default();
    let mut e = Neumaier::default();
    for c in cells {
        v.add(c.value);
        e.add(c.err);
    }
    (v.total(), e.total())
}

#[derive(Default)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `(∫ |f|^p w^σ)^{1/p}` with its propagated error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LpNorm {
    pub value: f64,
    pub error_bound: f64,
    /// Set when `p < 1`: the result is a quasi-norm.
    pub quasi: bool,
}

pub fn weighted_lp_norm(
    f: &FunctionSpec,
    p_eff: f64,
    weight: &WeightSpec,
    sigma: f64,
    domain: Domain,
    tol: f64,
) -> Result<LpNorm> {
    let task = IntegralTask::new(f, p_eff, weight, sigma, domain).tolerance(tol);
    let res = integrate(&task)?;
    let (value, error_bound) = root_with_error(res.value, res.total_error(), p_eff);
    Ok(LpNorm {
        value,
        error_bound,
        quasi: p_eff < 1.0,
    })
}

/// `I^{1/p}` and the widest deviation of `J^{1/p}` over `|J - I| ≤ δ`, `J ≥ 0`.
pub(crate) fn root_with_error(integral: f64, delta: f64, p: f64) -> (f64, f64) {
    let i = integral.max(0.0);
    let e = 1.0 / p;
    let v = i.powf(e);
    let up = (i + delta).powf(e) - v;
    let down = v - (i - delta).max(0.0).powf(e);
    (v, up.max(down).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn whole(f: &FunctionSpec, r: f64, w: &WeightSpec, sigma: f64, tol: f64) -> IntegralResult {
        integrate(&IntegralTask::new(f, r, w, sigma, Domain::Whole).tolerance(tol)).unwrap()
    }

    #[test]
    fn closed_forms_on_the_line() {
        let one = WeightSpec::unit();
        let r = whole(&FunctionSpec::exp_abs(), 1.0, &one, 0.0, 1e-10);
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-9);
        assert!(r.total_error() <= 1e-10 * 2.0);
        let r = whole(&FunctionSpec::gaussian(1.0), 1.0, &one, 0.0, 1e-10);
        assert_relative_eq!(r.value, std::f64::consts::PI.sqrt(), max_relative = 1e-9);
        let r = whole(&FunctionSpec::power_decay(3.0), 1.0, &one, 0.0, 1e-10);
        assert_relative_eq!(r.value, 1.0, max_relative = 1e-8);
        let unit = integrate(
            &IntegralTask::new(&FunctionSpec::constant(1.0), 1.0, &one, 0.0, Domain::interval(0.0, 1.0))
                .tolerance(1e-12),
        )
        .unwrap();
        assert_relative_eq!(unit.value, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn weighted_norm_examples() {
        let one = WeightSpec::unit();
        let n = weighted_lp_norm(&FunctionSpec::interval(0.0, 1.0), 1.5, &one, 0.0, Domain::Whole, 1e-10).unwrap();
        assert_relative_eq!(n.value, 1.0, max_relative = 1e-12);
        let n = weighted_lp_norm(&FunctionSpec::exp_abs(), 2.0, &one, 0.0, Domain::Whole, 1e-10).unwrap();
        assert_relative_eq!(n.value, 1.0, max_relative = 1e-9);
        let n = weighted_lp_norm(&FunctionSpec::exp_abs(), 0.5, &one, 0.0, Domain::Whole, 1e-10).unwrap();
        assert!(n.quasi);
        // ∫ e^{-|t|/2} = 4, 4^2 = 16
        assert_relative_eq!(n.value, 16.0, max_relative = 1e-8);
    }

    #[test]
    fn divergence_verdicts() {
        let one = WeightSpec::unit();
        let slow = FunctionSpec::power_decay(1.0);
        let task = IntegralTask::new(&slow, 1.0, &one, 0.0, Domain::Whole);
        assert!(matches!(integrate(&task), Err(Error::Divergent(_))));
        let sum = FunctionSpec::power_decay(1.0).plus(FunctionSpec::exp_abs()).unwrap();
        let task = IntegralTask::new(&sum, 1.0, &one, 0.0, Domain::Whole);
        assert!(matches!(integrate(&task), Err(Error::Undecided(_))));
        let grow = WeightSpec::exp_growth(2.0);
        let e = FunctionSpec::exp_abs();
        let task = IntegralTask::new(&e, 1.0, &grow, 1.0, Domain::Whole);
        assert!(matches!(integrate(&task), Err(Error::Divergent(_))));
    }

    #[test]
    fn depth_limit_reports_accuracy_failure() {
        let one = WeightSpec::unit();
        let f = FunctionSpec::power_decay(1.5);
        let task = IntegralTask::new(&f, 1.0, &one, 0.0, Domain::Whole)
            .tolerance(1e-12)
            .max_depth(1);
        match integrate(&task) {
            Err(Error::Accuracy { estimate, .. }) => assert!(estimate > 0.0),
            other => panic!("expected accuracy failure, got {other:?}"),
        }
    }

    #[test]
    fn compact_support_ignores_growing_weights() {
        let f = FunctionSpec::interval(0.0, 1.0);
        let w = WeightSpec::exp_growth(1.0);
        let r = whole(&f, 2.0, &w, 1.0, 1e-10);
        assert_relative_eq!(r.value, std::f64::consts::E - 1.0, max_relative = 1e-9);
        assert_eq!(r.tail_bound, 0.0);
    }

    #[test]
    fn two_dimensional_gaussian() {
        let f = FunctionSpec::gaussian(1.0).with_dim(2);
        let w = WeightSpec::unit().with_dim(2);
        let r = whole(&f, 1.0, &w, 0.0, 1e-9);
        assert_relative_eq!(r.value, std::f64::consts::PI, max_relative = 1e-8);
    }

    #[test]
    fn root_error_is_symmetric_enough() {
        let (v, e) = root_with_error(4.0, 0.04, 2.0);
        assert_eq!(v, 2.0);
        assert!((e - (2.0 - 3.96f64.sqrt())).abs() < 1e-15);
    }
}
