use std::collections::BTreeSet;

use gelfand_core::one_dim::{
    build_solution_1d, classify_1d, validate_solution_1d, Classification1D, IntervalUnion,
};
use gelfand_core::Nonlinearity;
use proptest::prelude::*;

fn union() -> impl Strategy<Value = IntervalUnion> {
    prop::collection::vec((0.01f64..3.0, 0.0f64..1.0), 1..8).prop_map(|pieces| {
        let mut left = -2.0;
        let mut out = Vec::new();
        for (len, gap) in pieces {
            out.push((left, left + len));
            left += len + gap;
        }
        IntervalUnion::new(out).unwrap()
    })
}

fn families() -> [Nonlinearity; 2] {
    [Nonlinearity::Exponential, Nonlinearity::power(2.0).unwrap()]
}

proptest! {
    #[test]
    fn threshold_sharpness(domain in union(), scale in 0.01f64..4.0) {
        for model in families() {
            let lambda = scale * domain.lambda_star(&model);
            let none = classify_1d(&domain, &model, lambda).unwrap() == Classification1D::NoSolution;
            prop_assert_eq!(none, lambda * domain.max_len() * model.f0() > 2.0);
        }
    }

    #[test]
    fn nonexistence_is_monotone(domain in union(), a in 0.01f64..4.0, b in 0.01f64..4.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        for model in families() {
            let star = domain.lambda_star(&model);
            if classify_1d(&domain, &model, lo * star).unwrap() == Classification1D::NoSolution {
                prop_assert_eq!(classify_1d(&domain, &model, hi * star).unwrap(), Classification1D::NoSolution);
            }
        }
    }

    #[test]
    fn positive_exactly_on_active_set(domain in union(), scale in 0.05f64..0.999, mask in any::<u8>()) {
        for model in families() {
            let lambda = scale * domain.lambda_star(&model);
            let active: BTreeSet<usize> = (0..domain.len()).filter(|i| mask >> i & 1 == 1).collect();
            let sol = build_solution_1d(&domain, &model, lambda, &active).unwrap();
            for (i, v) in sol.values.iter().enumerate() {
                prop_assert_eq!(*v > 0.0, active.contains(&i));
            }
            prop_assert!(validate_solution_1d(&sol, &model).unwrap().is_solution(1e-12));
        }
    }

    #[test]
    fn longest_intervals_vanish_at_threshold(domain in union()) {
        for model in families() {
            // the float nearest 2/(L f(0)) need not make the product exactly 2
            let f0 = model.f0();
            let exact = [domain.lambda_star(&model), domain.lambda_star(&model).next_up(), domain.lambda_star(&model).next_down()]
                .into_iter()
                .find(|l| l * domain.max_len() * f0 == 2.0);
            prop_assume!(exact.is_some());
            let star = exact.unwrap();
            prop_assert_eq!(classify_1d(&domain, &model, star).unwrap(), Classification1D::TrivialMinimal);
            let longest: Vec<usize> =
                (0..domain.len()).filter(|&i| {
                    let (a, b) = domain.intervals()[i];
                    b - a == domain.max_len()
                }).collect();
            let all: BTreeSet<usize> = (0..domain.len()).collect();
            prop_assert!(build_solution_1d(&domain, &model, star, &all).is_err());
            let others: BTreeSet<usize> = all.difference(&longest.iter().copied().collect()).copied().collect();
            let sol = build_solution_1d(&domain, &model, star, &others).unwrap();
            for i in longest {
                prop_assert_eq!(sol.values[i], 0.0);
            }
        }
    }
}

#[test]
fn shrinking_intervals_give_unbounded_values() {
    // geometric prefix of the countable family: lengths 2^{-k}
    let mut pieces = Vec::new();
    let mut left = 0.0;
    for k in 0..20 {
        let len = 0.5f64.powi(k);
        pieces.push((left, left + len));
        left += 2.0 * len;
    }
    let domain = IntervalUnion::new(pieces).unwrap();
    let model = Nonlinearity::Exponential;
    let lambda = 0.5 * domain.lambda_star(&model);
    let sol = build_solution_1d(&domain, &model, lambda, &(0..20).collect()).unwrap();
    let residual = validate_solution_1d(&sol, &model).unwrap();
    // slopes reach 2/2^-19, so the equation residual is judged relative to them
    let steepest = 2.0 / 0.5f64.powi(19);
    assert!(
        residual.z_excess == 0.0 && residual.boundary_violations == 0,
        "{residual:?}"
    );
    assert!(residual.equation <= 1e-15 * steepest, "{residual:?}");
    for (k, (&(a, b), &v)) in domain.intervals().iter().zip(&sol.values).enumerate() {
        let expected = (2.0 / ((b - a) * lambda)).ln();
        assert!((v - expected).abs() < 1e-12, "interval {k}");
    }
    // each halving adds ln 2
    for w in sol.values.windows(2) {
        assert!((w[1] - w[0] - std::f64::consts::LN_2).abs() < 1e-12);
    }
    assert!(sol.values[19] > 19.0 * std::f64::consts::LN_2);
}
