use gelfand_core::{MonotoneTable, Nonlinearity};
use proptest::prelude::*;

fn families() -> Vec<Nonlinearity> {
    let s: Vec<f64> = (0..=400).map(|i| i as f64 * 0.05).collect();
    let f: Vec<f64> = s.iter().map(|x| 1.0 + x + 0.25 * x * x).collect();
    vec![
        Nonlinearity::Exponential,
        Nonlinearity::power(2.0).unwrap(),
        Nonlinearity::power(0.5).unwrap(),
        Nonlinearity::custom(MonotoneTable::new(s, f).unwrap()),
    ]
}

proptest! {
    #[test]
    fn strictly_increasing(a in 0.0f64..19.0, gap in 1e-6f64..1.0) {
        for model in families() {
            let b = a + gap;
            prop_assert!(model.f(a).unwrap() < model.f(b).unwrap(), "{} at {a}, {b}", model.id());
        }
    }

    #[test]
    fn inverse_round_trip(s in 0.0f64..20.0) {
        for model in families() {
            let back = model.f_inv(model.f(s).unwrap()).unwrap();
            prop_assert!((back - s).abs() <= 1e-10 * (1.0 + s), "{}: {s} -> {back}", model.id());
        }
    }

    #[test]
    fn antiderivative_slope(s in 0.001f64..15.0) {
        let h = 1e-4;
        for model in families() {
            let slope = (model.F(s + h).unwrap() - model.F(s - h).unwrap()) / (2.0 * h);
            let f = model.f(s).unwrap();
            prop_assert!((slope - f).abs() <= 1e-6 * f.max(1.0), "{}: {slope} vs {f}", model.id());
        }
    }

    #[test]
    fn antiderivative_below_secant_bound(s in 0.0f64..20.0) {
        for model in families() {
            prop_assert!(model.F(s).unwrap() <= model.f(s).unwrap() * s * (1.0 + 1e-14));
        }
    }

    #[test]
    fn maximizer_matches_closed_form(p in 1.05f64..4.0, m in 3.2f64..6.0) {
        for model in [Nonlinearity::Exponential, Nonlinearity::power(m).unwrap()] {
            let (alpha, value) = model.fp_closed_form(p).unwrap();
            let fp = model.maximize_fp(p).unwrap();
            prop_assert!(((fp.fp_max - value) / value).abs() <= 1e-8);
            prop_assert!(((fp.alpha_bar - alpha) / alpha).abs() <= 1e-4);
        }
    }
}
