use grand_lebesgue::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn roster() -> impl Strategy<Value = FunctionSpec> {
    prop_oneof![
        Just(FunctionSpec::exp_abs()),
        (0.2f64..2.0).prop_map(FunctionSpec::gaussian),
        (-2.0f64..2.0, 0.2f64..3.0).prop_map(|(lo, w)| FunctionSpec::interval(lo, lo + w)),
        (2.5f64..4.0).prop_map(FunctionSpec::power_decay),
    ]
}

fn weights() -> impl Strategy<Value = WeightSpec> {
    prop_oneof![
        Just(WeightSpec::unit()),
        (1.5f64..3.0).prop_map(WeightSpec::power_decay),
        (0.0f64..1.5).prop_map(WeightSpec::power_growth),
    ]
}

fn close(a: f64, b: f64, err: f64) -> bool {
    (a - b).abs() <= 1e-6 * a.abs().max(b.abs()) + 1e-9 + err
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn homogeneity(f in roster(), w in weights(), p in 1.2f64..4.0, theta in 0.0f64..2.0, lambda in 0.05f64..20.0) {
        let params = GrandNormParams::new(p, theta, w);
        let base = grand_norm(&f, &params);
        prop_assume!(base.is_ok());
        let base = base.unwrap();
        let scaled = grand_norm(&f.clone().scale(lambda), &params).unwrap();
        prop_assert!(close(scaled.value, lambda * base.value, scaled.error_bound + lambda * base.error_bound));
    }

    #[test]
    fn triangle(f in roster(), g in roster(), p in 1.2f64..3.0, theta in 0.0f64..2.0) {
        let params = GrandNormParams::new(p, theta, WeightSpec::power_decay(2.0));
        let (a, b) = (grand_norm(&f, &params).unwrap(), grand_norm(&g, &params).unwrap());
        let s = grand_norm(&f.plus(g).unwrap(), &params).unwrap();
        let slack = a.error_bound + b.error_bound + s.error_bound;
        prop_assert!(s.value <= (a.value + b.value) * (1.0 + 1e-6) + 1e-9 + slack);
    }

    #[test]
    fn supremum_dominates_samples(f in roster(), w in weights(), p in 1.2f64..4.0, theta in 0.0f64..2.0, t in 0.01f64..1.0) {
        let params = GrandNormParams::new(p, theta, w);
        let r = grand_norm(&f, &params);
        prop_assume!(r.is_ok());
        let r = r.unwrap();
        let pt = grand_lebesgue::grand_norm::phi(&f, &params, t * (p - 1.0)).unwrap();
        prop_assert!(pt.phi <= r.value * (1.0 + 1e-6) + 1e-9 + pt.err + r.error_bound);
    }

    #[test]
    fn unit_weight_translation_invariance(f in roster(), h in -5.0f64..5.0, p in 1.2f64..3.0) {
        let params = GrandNormParams::new(p, 1.0, WeightSpec::unit());
        let a = grand_norm(&f, &params).unwrap();
        let b = grand_norm(&f.clone().translate(h).unwrap(), &params).unwrap();
        prop_assert!(close(a.value, b.value, a.error_bound + b.error_bound));
    }

    #[test]
    fn modulation_leaves_norm_unchanged(f in roster(), w in weights(), xi in -4.0f64..4.0) {
        let params = GrandNormParams::new(2.0, 1.0, w);
        let a = grand_norm(&f, &params);
        prop_assume!(a.is_ok());
        let a = a.unwrap();
        let b = grand_norm(&f.clone().modulate(xi).unwrap(), &params).unwrap();
        prop_assert!(close(a.value, b.value, a.error_bound + b.error_bound));
    }

    #[test]
    fn theta_raises_shrink_norm_when_range_below_one(f in roster(), t1 in 0.0f64..2.0, dt in 0.0f64..1.0) {
        // For p ≤ 2, ε ≤ 1 and ε^θ decreases in θ.
        let p = 1.8;
        let lo = grand_norm(&f, &GrandNormParams::new(p, t1 + dt, WeightSpec::unit())).unwrap();
        let hi = grand_norm(&f, &GrandNormParams::new(p, t1, WeightSpec::unit())).unwrap();
        prop_assert!(lo.value <= hi.value * (1.0 + 1e-6) + lo.error_bound + hi.error_bound);
    }

    #[test]
    fn numeric_shift_rule(h in -3.0f64..3.0, q in 0.3f64..2.0) {
        let f = FunctionSpec::gaussian(q);
        let base = fourier_numeric(&f, 40.0, 1 << 12).unwrap();
        let moved = fourier_numeric(&f.translate(h).unwrap(), 40.0, 1 << 12).unwrap();
        let worst = (0..base.len())
            .filter(|&k| base.gamma(k).abs() <= 10.0)
            .map(|k| (moved.value(k) - Complex64::from_polar(1.0, -base.gamma(k) * h) * base.value(k)).norm())
            .fold(0.0, f64::max);
        prop_assert!(worst <= base.error_estimate + moved.error_estimate + 1e-12, "worst {worst}");
    }

    #[test]
    fn transform_bounded_by_l1(f in roster()) {
        let num = fourier_numeric(&f, 40.0, 1 << 13).unwrap();
        let l1 = grand_lebesgue::fourier::l1_norm(&f, 1e-10).unwrap();
        prop_assert!(num.max_modulus() <= l1 + num.error_estimate + 1e-9);
    }

    #[test]
    fn power_growth_is_submultiplicative(s in 0.0f64..3.0, seed in any::<u64>()) {
        let w = WeightSpec::power_growth(s);
        let rep = model::check_submultiplicative_seeded(&w, 200, &MeasurableSet::interval(-50.0, 50.0), seed).unwrap();
        prop_assert!(rep.all_passed());
    }

    #[test]
    fn spec_json_round_trip(f in roster(), w in weights()) {
        let fj = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<FunctionSpec>(&fj).unwrap(), f);
        let wj = serde_json::to_string(&w).unwrap();
        prop_assert_eq!(serde_json::from_str::<WeightSpec>(&wj).unwrap(), w);
    }

    #[test]
    fn slow_tails_are_refused_not_guessed(s in 1.05f64..1.5) {
        // ∫ (1+|x|)^{-s} needs a truncation radius beyond the cap.
        let res = grand_lebesgue::fourier::l1_norm(&FunctionSpec::power_decay(s), 1e-10);
        prop_assert!(matches!(res, Err(Error::Accuracy { .. })), "{res:?}");
    }

    #[test]
    fn tolerance_policy(x in -1e3f64..1e3, d in 0.0f64..10.0) {
        let t = Tolerance::default();
        prop_assert!(t.holds(x, x));
        prop_assert!(t.holds(x, x + d));
        if d > 1e-3 + 2e-3 * x.abs() * t.rtol {
            prop_assert!(!t.holds(x + d, x));
        }
    }
}
