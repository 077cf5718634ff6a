use proptest::prelude::*;
use tfloc::regimes::{classify, conjugate_exponent, g_eval, kappa, threshold_lower, threshold_upper};
use tfloc::solver::{constraint_system, u_eval, VariationalSolution};
use tfloc::{ProblemParams, Regime};

mod common;

fn exponent() -> impl Strategy<Value = f64> {
    1.01f64..50.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn conjugate_product_is_at_least_one(p in exponent(), q in exponent()) {
        let (pc, qc) = (conjugate_exponent(p).unwrap(), conjugate_exponent(q).unwrap());
        let v = (pc / qc).powf(1.0 / qc) * (p / q).powf(1.0 / q);
        prop_assert!(v >= 1.0 - 1e-15, "{v}");
    }

    #[test]
    fn thresholds_are_ordered(p in exponent(), q in exponent(), d in 1u32..4) {
        prop_assume!((p - q).abs() > 1e-6);
        let (lo, up) = (threshold_lower(p, q, d).unwrap(), threshold_upper(p, q, d).unwrap());
        prop_assert!(lo < up, "{lo} {up}");
        let lieb = (kappa(p).unwrap().powf(kappa(p).unwrap()) / kappa(q).unwrap().powf(kappa(q).unwrap())).powi(d as i32);
        prop_assert!(up >= lieb * (1.0 - 1e-12), "{up} {lieb}");
    }

    #[test]
    fn classify_is_a_partition(p in exponent(), q in exponent(), ratio in 0.01f64..100.0) {
        let params = ProblemParams::new(1, p, q, 1.0, ratio).unwrap();
        let d = classify(&params);
        let expected = if p == q {
            Regime::DegenerateEqualExponents
        } else if ratio >= d.threshold_upper {
            Regime::PDominant
        } else if ratio <= d.threshold_lower {
            Regime::QDominant
        } else {
            Regime::Intermediate
        };
        prop_assert_eq!(d.regime, expected);
    }

    #[test]
    fn conjugation_is_an_involution(p in exponent()) {
        let back = conjugate_exponent(conjugate_exponent(p).unwrap()).unwrap();
        prop_assert!((back - p).abs() < 1e-12 * p);
        prop_assert!((kappa(p).unwrap() + kappa(conjugate_exponent(p).unwrap()).unwrap() - 1.0).abs() < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn psi_inverts_u(l1 in 0.05f64..3.0, l2 in 0.05f64..3.0, p in 1.1f64..6.0, q in 1.1f64..6.0, frac in 0.01f64..0.99) {
        let sol = VariationalSolution::from_multipliers(1, p, q, l1, l2).unwrap();
        let t = frac * sol.t_end;
        let v = u_eval(t, l1, l2, p, q, 1).unwrap();
        let back = sol.psi(v).unwrap();
        prop_assert!((back - t).abs() < 1e-12 * sol.t_end.max(1.0), "{t} {back}");
    }

    #[test]
    fn f_decreases_in_c2(c1 in 0.05f64..2.0, c2 in 0.05f64..2.0, p in 1.2f64..5.0, q in 1.2f64..5.0, d in 1u32..4) {
        let j = constraint_system(c1, c2, p, q, d).unwrap();
        prop_assert!(j.df_dc2 < 0.0 && j.df_dc1 < 0.0 && j.dg_dc1 < 0.0 && j.dg_dc2 < 0.0);
        let h = 1e-6 * c2;
        let fd = (constraint_system(c1, c2 + h, p, q, d).unwrap().f - constraint_system(c1, c2 - h, p, q, d).unwrap().f) / (2.0 * h);
        prop_assert!((fd - j.df_dc2).abs() < 1e-5 * j.df_dc2.abs(), "{fd} vs {}", j.df_dc2);
    }
}

#[test]
fn g_is_monotone_and_bounded() {
    for d in 1..=3 {
        let mut prev = 0.0;
        for i in 1..=2000 {
            let s = i as f64 * 0.05;
            let g = g_eval(s, d).unwrap();
            // strictly increasing until the increments drop below one ulp of 1
            assert!(g > prev || (g == prev && 1.0 - g < 1e-12), "d={d} s={s}");
            assert!(g <= s.min(1.0));
            prev = g;
        }
        assert!(g_eval(1e4, d).unwrap() > 1.0 - 1e-12);
    }
}

#[test]
fn g_matches_riemann_oracle() {
    for d in 1..=3 {
        for i in 0..100 {
            let s = 0.05 + i as f64 * 0.2;
            let (closed, brute) = (g_eval(s, d).unwrap(), common::g_riemann(s, d));
            assert!((closed - brute).abs() < 1e-10, "d={d} s={s}: {closed} vs {brute}");
        }
    }
}
