//! Norms of `e^{-|t|} χ_{E_n}`, `E_n = (n/(n+1), 1)`, with `a = (1+|t|)^{-2}`.

use serde::{Deserialize, Serialize};

use super::SuiteConfig;
use crate::ap_space::{ap_norm, APNormParams, FourierStrategy};
use crate::error::{Error, Result};
use crate::grand_norm::{grand_norm, GrandNormParams};
use crate::model::{FunctionSpec, MeasurableSet, WeightSpec};
use crate::report::{Check, VerificationReport};

const PROP: &str = "absolutely continuous norm counterexample";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prop5Row {
    pub n: u32,
    pub norm: f64,
    pub error_bound: f64,
    pub argmax: f64,
    /// The closed-form lower bound at the fixed `ε₀`.
    pub lower_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prop5Sequence {
    pub p: f64,
    pub theta: f64,
    pub eps0: f64,
    pub rows: Vec<Prop5Row>,
    /// Last computed norm.
    pub observed_limit: f64,
    /// `-d log‖f_n‖ / d log n` fitted over the second half of the rows.
    pub fitted_rate: f64,
    pub bound_limit: f64,
}

fn restricted(n: u32) -> Result<FunctionSpec> {
    FunctionSpec::exp_abs().restrict(&MeasurableSet::family(n))
}

fn check_args(p: f64, theta: f64, n_max: u32) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::invalid(format!("p must be in (1, ∞), got {p}")));
    }
    if !(theta >= 0.0 && theta.is_finite()) {
        return Err(Error::invalid(format!("θ must be >= 0, got {theta}")));
    }
    if n_max == 0 {
        return Err(Error::invalid("n_max must be >= 1"));
    }
    Ok(())
}

/// `ε₀^θ (1/4)^{ε₀/(p(p-ε₀))} (e^{-p})^{1/(p-ε₀)} [(e^{ε₀} - e^{nε₀/(n+1)})/ε₀]^{1/(p-ε₀)}`.
///
/// On `E_n ⊂ (1/2, 1)` the weight power is at least `(1/4)^{ε₀/p}` and
/// `e^{-(p-ε₀)t} ≥ e^{-p} e^{ε₀ t}`, so this never exceeds `φ(ε₀)`.
pub fn prop5_lower_bound(p: f64, theta: f64, n: u32, eps0: f64) -> f64 {
    let r = p - eps0;
    let nf = n as f64;
    let bracket = (eps0.exp() - (nf * eps0 / (nf + 1.0)).exp()) / eps0;
    eps0.powf(theta) * 0.25f64.powf(eps0 / (p * r)) * (-p).exp().powf(1.0 / r) * bracket.powf(1.0 / r)
}

/// Grand norms of the restrictions for `n = 1..=n_max` next to the lower
/// bound at `ε₀` (default `(p-1)/2`).
pub fn prop5_sequence(p: f64, theta: f64, n_max: u32, eps0: Option<f64>, tol: f64) -> Result<Prop5Sequence> {
    check_args(p, theta, n_max)?;
    let eps0 = eps0.unwrap_or((p - 1.0) / 2.0);
    if !(eps0 > 0.0 && eps0 < p - 1.0 + 1e-15) {
        return Err(Error::invalid(format!("ε₀ must lie in (0, {}], got {eps0}", p - 1.0)));
    }
    let params = GrandNormParams::new(p, theta, WeightSpec::power_decay(2.0)).tolerance(tol);
    let mut rows = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let r = grand_norm(&restricted(n)?, &params)?;
        rows.push(Prop5Row {
            n,
            norm: r.value,
            error_bound: r.error_bound,
            argmax: r.argmax,
            lower_bound: prop5_lower_bound(p, theta, n, eps0),
        });
    }
    let tail = &rows[rows.len() / 2..];
    let fitted_rate = if tail.len() >= 2 {
        let xs: Vec<f64> = tail.iter().map(|r| (r.n as f64).ln()).collect();
        let ys: Vec<f64> = tail.iter().map(|r| r.norm.ln()).collect();
        let mx = xs.iter().sum::<f64>() / xs.len() as f64;
        let my = ys.iter().sum::<f64>() / ys.len() as f64;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        -sxy / sxx
    } else {
        f64::NAN
    };
    let last = rows[rows.len() - 1];
    Ok(Prop5Sequence {
        p,
        theta,
        eps0,
        observed_limit: last.norm,
        fitted_rate,
        bound_limit: last.lower_bound,
        rows,
    })
}

/// Memberships of `e^{-|t|}` and its transform, and the domination of the
/// pair norm of each restriction over its time part.
pub fn prop6_check(
    p: f64,
    theta1: f64,
    theta2: f64,
    n_max: u32,
    strategy: &FourierStrategy,
    tol: f64,
) -> Result<VerificationReport> {
    check_args(p, theta1, n_max)?;
    check_args(2.0, theta2, n_max)?;
    let a = WeightSpec::power_decay(2.0);
    let time = GrandNormParams::new(p, theta1, a.clone()).tolerance(tol);
    let freq = GrandNormParams::new(2.0, theta2, a).tolerance(tol);
    let mut report = VerificationReport::new("prop6");

    let f = grand_norm(&FunctionSpec::exp_abs(), &time)?;
    report.push(
        Check::condition(
            format!("prop6/time-finite/p={p}/theta={theta1}"),
            PROP,
            f.value.is_finite(),
        )
        .with_sides(f.value, f64::INFINITY)
        .with_constant("error_bound", f.error_bound),
    );
    let transform = FunctionSpec::inverse_quadratic(1.0).scale(2.0);
    let fh = grand_norm(&transform, &freq)?;
    report.push(
        Check::condition(
            format!("prop6/frequency-finite/q=2/theta={theta2}"),
            PROP,
            fh.value.is_finite(),
        )
        .with_sides(fh.value, f64::INFINITY)
        .with_constant("error_bound", fh.error_bound),
    );

    let params = APNormParams::new(time.clone(), freq).strategy(*strategy);
    let mut worst: Option<(f64, f64, u32)> = None;
    for n in 1..=n_max {
        let g = restricted(n)?;
        let t = grand_norm(&g, &time)?;
        let full = ap_norm(&g, &params)?;
        let (lhs, rhs) = (t.value, full.value + full.error_bound + t.error_bound);
        if worst.is_none_or(|(l, r, _)| lhs - rhs > l - r) {
            worst = Some((lhs, rhs, n));
        }
    }
    let (lhs, rhs, n) = worst.expect("n_max >= 1");
    report.push(
        Check::inequality(
            format!("prop6/pair-dominates-time/p={p}/theta1={theta1}/theta2={theta2}"),
            PROP,
            lhs,
            rhs,
            Default::default(),
        )
        .with_constant("worst_n", n as f64)
        .with_constant("n_max", n_max as f64),
    );
    Ok(report.sorted())
}

pub(super) fn suite(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let (p, theta) = (cfg.focus_p, cfg.focus_theta);
    let seq = prop5_sequence(p, theta, cfg.prop5_n, None, cfg.quad_tol)?;
    let tag = format!("p={p}/theta={theta}");
    let mut report = VerificationReport::new("");

    let mut worst_rise = f64::NEG_INFINITY;
    for w in seq.rows.windows(2) {
        worst_rise = worst_rise.max(w[1].norm - w[0].norm - w[0].error_bound - w[1].error_bound);
    }
    if seq.rows.len() > 1 {
        report.push(
            Check::inequality(
                format!("prop5/nonincreasing/{tag}"),
                PROP,
                worst_rise,
                0.0,
                cfg.tolerance,
            )
            .with_detail("E_{n+1} ⊂ E_n, so the norms cannot grow"),
        );
    }
    let worst = seq
        .rows
        .iter()
        .map(|r| (r.lower_bound, r.norm + r.error_bound, r.n))
        .max_by(|a, b| (a.0 - a.1).total_cmp(&(b.0 - b.1)))
        .expect("rows nonempty");
    report.push(
        Check::inequality(
            format!("prop5/bound-below-norm/{tag}"),
            PROP,
            worst.0,
            worst.1,
            cfg.tolerance,
        )
        .with_constant("worst_n", worst.2 as f64)
        .with_constant("eps0", seq.eps0),
    );
    let decreasing = seq.rows.windows(2).all(|w| w[1].lower_bound < w[0].lower_bound);
    report.push(
        Check::condition(format!("prop5/bound-decreasing/{tag}"), PROP, decreasing)
            .with_sides(seq.bound_limit, seq.rows[0].lower_bound)
            .with_detail("the bracket e^{ε₀} - e^{nε₀/(n+1)} shrinks to 0"),
    );

    let mut data = Check::data(format!("prop5/sequence/{tag}"), PROP)
        .with_sides(seq.observed_limit, seq.bound_limit)
        .with_constant("observed_limit", seq.observed_limit)
        .with_constant("fitted_rate", seq.fitted_rate)
        .with_constant("eps0", seq.eps0);
    for r in &seq.rows {
        data = data
            .with_constant(format!("norm/n={:02}", r.n), r.norm)
            .with_constant(format!("bound/n={:02}", r.n), r.lower_bound);
    }
    report.push(data.with_detail("lhs = last computed norm, rhs = last lower bound"));
    report.push(
        Check::data(format!("prop5/discrepancy/{tag}"), PROP)
            .with_sides(seq.observed_limit, seq.bound_limit)
            .with_constant("fitted_rate", seq.fitted_rate)
            .with_detail(format!(
                "the stated conclusion is that these norms stay bounded away from 0, but the lower bound used for it \
                 tends to 0 and the computed norms decay like n^(-{:.3}); neither side is asserted",
                seq.fitted_rate
            )),
    );

    report.extend(prop6_check(
        p,
        theta,
        theta,
        cfg.prop5_n,
        &cfg.prop6_fourier,
        cfg.quad_tol,
    )?);
    Ok(report)
}
