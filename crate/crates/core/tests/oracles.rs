//! Closed-form values, each recomputed here from its formula.

use std::f64::consts::PI;

use approx::assert_relative_eq;
use grand_lebesgue::grand_norm::equivalence_ratio;
use grand_lebesgue::*;

/// Max of `phi` over a fine grid of (0, top], then golden-section polish.
fn grid_max(phi: impl Fn(f64) -> f64, top: f64) -> (f64, f64) {
    let n = 20_000;
    let (mut best, mut at) = (f64::NEG_INFINITY, top);
    for k in 1..=n {
        let e = top * k as f64 / n as f64;
        let v = phi(e);
        if v > best {
            best = v;
            at = e;
        }
    }
    let h = top / n as f64;
    let (mut lo, mut hi) = ((at - h).max(1e-12), (at + h).min(top));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let (x1, x2) = (hi - g * (hi - lo), lo + g * (hi - lo));
        if phi(x1) < phi(x2) {
            lo = x1;
        } else {
            hi = x2;
        }
    }
    let m = 0.5 * (lo + hi);
    if phi(m) > best {
        (phi(m), m)
    } else {
        (best, at)
    }
}

#[test]
fn exp_abs_unweighted_theta_zero() {
    // ∫ e^{-(2-ε)|t|} = 2/(2-ε)
    let r = grand_norm(
        &FunctionSpec::exp_abs(),
        &GrandNormParams::new(2.0, 0.0, WeightSpec::unit()),
    )
    .unwrap();
    let (oracle, _) = grid_max(|e| (2.0 / (2.0 - e)).powf(1.0 / (2.0 - e)), 1.0);
    assert_relative_eq!(r.value, oracle, max_relative = 1e-7);
}

#[test]
fn exp_abs_theta_one_interior_peak() {
    let p = 3.0;
    let r = grand_norm(
        &FunctionSpec::exp_abs(),
        &GrandNormParams::new(p, 1.0, WeightSpec::unit()),
    )
    .unwrap();
    let (oracle, at) = grid_max(|e| e * (2.0 / (p - e)).powf(1.0 / (p - e)), p - 1.0);
    assert_relative_eq!(r.value, oracle, max_relative = 1e-7);
    assert!((r.argmax - at).abs() < 1e-3, "argmax {} vs {at}", r.argmax);
}

#[test]
fn indicator_classical_variant() {
    // (ε |E|)^{1/(p-ε)} with |E| = 1
    let p = 2.5;
    let params = GrandNormParams::new(p, 0.0, WeightSpec::unit()).variant(Variant::Classical);
    let r = grand_norm(&FunctionSpec::interval(0.0, 1.0), &params).unwrap();
    let (oracle, _) = grid_max(|e| e.powf(1.0 / (p - e)), p - 1.0);
    assert_relative_eq!(r.value, oracle, max_relative = 1e-8);
}

#[test]
fn gaussian_weighted_lp() {
    // ∫ e^{-q r x²} dx = √(π/(q r))
    let (q, r) = (0.5, 1.7);
    let n = weighted_lp_norm(
        &FunctionSpec::gaussian(q),
        r,
        &WeightSpec::unit(),
        0.0,
        Domain::Whole,
        1e-12,
    )
    .unwrap();
    assert_relative_eq!(n.value, (PI / (q * r)).sqrt().powf(1.0 / r), max_relative = 1e-10);
}

#[test]
fn power_decay_l1_mass() {
    // ∫ (1+|x|)^{-s} = 2/(s-1)
    for s in [2.0, 3.0, 4.5] {
        let res = integrate(
            &IntegralTask::new(
                &FunctionSpec::power_decay(s),
                1.0,
                &WeightSpec::unit(),
                0.0,
                Domain::Whole,
            )
            .tolerance(1e-10),
        )
        .unwrap();
        assert_relative_eq!(res.value, 2.0 / (s - 1.0), max_relative = 1e-8);
    }
}

#[test]
fn weighted_exp_abs_against_substitution() {
    // ∫ e^{-r|t|} (1+|t|)^{-2σ} dt, brute-force midpoint sum on [0, 60]
    let (r, sigma) = (1.5, 0.25);
    let h = 1e-4;
    let brute: f64 = 2.0
        * (0..600_000)
            .map(|k| {
                let t = (k as f64 + 0.5) * h;
                (-r * t).exp() * (1.0 + t).powf(-2.0 * sigma)
            })
            .sum::<f64>()
        * h;
    let res = integrate(
        &IntegralTask::new(
            &FunctionSpec::exp_abs(),
            r,
            &WeightSpec::power_decay(2.0),
            sigma,
            Domain::Whole,
        )
        .tolerance(1e-11),
    )
    .unwrap();
    assert_relative_eq!(res.value, brute, max_relative = 1e-7);
}

#[test]
fn equivalent_variant_ratio_with_unit_weight() {
    // With a = 1 the two variants differ only in where ε^θ sits.
    let p = 2.0;
    let params = GrandNormParams::new(p, 1.0, WeightSpec::unit());
    let r = equivalence_ratio(&FunctionSpec::interval(0.0, 1.0), &params).unwrap();
    let (oracle, _) = grid_max(|e| e.powf(1.0 / (p - e)), p - 1.0);
    assert_relative_eq!(r.generalized, 1.0, max_relative = 1e-8);
    assert_relative_eq!(r.equivalent, oracle, max_relative = 1e-8);
}

#[test]
fn analytic_catalog_formulas() {
    let exp = fourier_analytic(&FunctionSpec::exp_abs());
    let spec = exp.spec().expect("exp_abs is in the catalog");
    for g in [0.0, 0.5, 3.0] {
        assert_relative_eq!(spec.eval(&[g]).unwrap().re, 2.0 / (1.0 + g * g), max_relative = 1e-14);
    }
    let gauss = fourier_analytic(&FunctionSpec::gaussian(2.0));
    let spec = gauss.spec().unwrap();
    for g in [0.0f64, 1.0, 2.5] {
        let exact = (PI / 2.0).sqrt() * (-g * g / 8.0).exp();
        assert_relative_eq!(spec.eval(&[g]).unwrap().re, exact, max_relative = 1e-13);
    }
    // ∫_0^1 e^{-iγx} dx = (1 - e^{-iγ}) / (iγ)
    let ind = fourier_analytic(&FunctionSpec::interval(0.0, 1.0));
    let spec = ind.spec().unwrap();
    for g in [0.3, 2.0, 7.0] {
        let z = num_complex::Complex64::new(0.0, g);
        let exact = (1.0 - (-z).exp()) / z;
        assert!((spec.eval(&[g]).unwrap() - exact).norm() < 1e-13);
    }
    assert!(matches!(
        fourier_analytic(&FunctionSpec::power_decay(3.0)),
        Analytic::Unsupported { .. }
    ));
}

#[test]
fn gaussian_self_convolution() {
    // e^{-x²} * e^{-x²} = √(π/2) e^{-x²/2}
    let c = convolve(
        &FunctionSpec::gaussian(1.0),
        &FunctionSpec::gaussian(1.0),
        ConvGrid::default(),
    )
    .unwrap();
    for x in [0.0f64, 0.7, 2.0] {
        let exact = (PI / 2.0).sqrt() * (-x * x / 2.0).exp();
        assert_relative_eq!(c.spec.eval(&[x]).unwrap().re, exact, max_relative = 1e-12);
    }
}

#[test]
fn fft_convolution_of_indicators_is_a_tent() {
    let f = FunctionSpec::interval(0.0, 1.0);
    let c = convolve(&f, &f, ConvGrid::default()).unwrap();
    for x in [0.25, 1.0, 1.5] {
        let tent = 1.0 - (x - 1.0f64).abs();
        let v = c.spec.eval(&[x]).unwrap().re;
        assert!((v - tent).abs() <= c.error_estimate + 1e-12, "x={x}: {v} vs {tent}");
    }
}

#[test]
fn closure_verdicts() {
    let ind = FunctionSpec::interval(0.0, 1.0);
    let flat = vanishing_limit(&ind, &GrandNormParams::new(2.0, 0.0, WeightSpec::unit()), 20, 1e-3).unwrap();
    assert_eq!(flat.verdict, ClosureVerdict::DoesNotVanish);
    let decaying = vanishing_limit(&ind, &GrandNormParams::new(2.0, 1.0, WeightSpec::unit()), 20, 1e-3).unwrap();
    assert_eq!(decaying.verdict, ClosureVerdict::Vanishes);
    // φ(ε) = ε for this pair, so the log-log slope is 1.
    assert_relative_eq!(decaying.tail_slope, 1.0, max_relative = 1e-6);
}

#[test]
fn counterexample_bound_formula() {
    let (p, theta, eps0): (f64, f64, f64) = (2.0, 1.0, 0.5);
    for n in [1u32, 4, 16] {
        let nf = n as f64;
        let r = p - eps0;
        let bracket = (eps0.exp() - (nf * eps0 / (nf + 1.0)).exp()) / eps0;
        let by_hand = eps0.powf(theta) * 0.25f64.powf(eps0 / (p * r)) * (-p / r).exp() * bracket.powf(1.0 / r);
        assert_relative_eq!(prop5_lower_bound(p, theta, n, eps0), by_hand, max_relative = 1e-13);
    }
}

#[test]
fn counterexample_first_term() {
    // n = 1: E_1 = (1/2, 1); the norm is at least φ at the bound's ε₀.
    let seq = prop5_sequence(2.0, 1.0, 2, None, 1e-10).unwrap();
    let first = seq.rows[0];
    assert!(first.lower_bound <= first.norm);
    assert!(seq.rows[1].norm <= first.norm + first.error_bound);
}

#[test]
fn embedding_constant_for_power_decay() {
    // ‖(1+|t|)^{-2}‖₁ = 2, so sup_ε ε 2^{ε/(2(2-ε))} sits at ε = 1: √2.
    assert_relative_eq!(
        ap_space::embedding_constant(2.0, 1.0, 2.0),
        2f64.sqrt(),
        max_relative = 1e-12
    );
}
