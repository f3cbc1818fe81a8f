use gelfand_core::radial1::{discontinuous_solution, jump_residual, lambda_bar};
use gelfand_core::Nonlinearity;
use proptest::prelude::*;

proptest! {
    #[test]
    fn jump_residual_is_positive(dim in 2usize..=6, frac in 0.01f64..=1.0, rho in 0.01f64..0.99, power in any::<bool>()) {
        let model = if power { Nonlinearity::power(2.0).unwrap() } else { Nonlinearity::Exponential };
        let lambda = frac * lambda_bar(dim, &model);
        prop_assert!(jump_residual(dim, &model, lambda, rho).unwrap() > 0.0);
    }

    #[test]
    fn sup_norm_decreases_in_rho(dim in 2usize..=5, frac in 0.05f64..=1.0, a in 0.02f64..0.98, b in 0.02f64..0.98) {
        prop_assume!((a - b).abs() > 1e-6);
        let model = Nonlinearity::Exponential;
        let lambda = frac * lambda_bar(dim, &model);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let inner = discontinuous_solution(dim, &model, lambda, lo).unwrap().sup_norm().unwrap();
        let outer = discontinuous_solution(dim, &model, lambda, hi).unwrap().sup_norm().unwrap();
        prop_assert!(inner > outer);
        prop_assert!(outer > model.f_inv(dim as f64 / lambda).unwrap());
    }
}

#[test]
fn sup_norm_limits() {
    let model = Nonlinearity::Exponential;
    let (dim, lambda) = (3, 1.0);
    let floor = model.f_inv(dim as f64 / lambda).unwrap();
    let near_one = discontinuous_solution(dim, &model, lambda, 1.0 - 1e-9)
        .unwrap()
        .sup_norm()
        .unwrap();
    assert!((near_one - floor).abs() < 1e-6);
    let near_zero = discontinuous_solution(dim, &model, lambda, 1e-12)
        .unwrap()
        .sup_norm()
        .unwrap();
    assert!(near_zero > 25.0);
}
