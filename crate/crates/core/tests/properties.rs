//! Property tests over seeded random fields.

mod common;

use common::random_field;
use evenscalar::multiplier::{
    apply_gamma, apply_gamma_inverse, apply_t1, apply_t2, perp_gradient, OddSymbol,
};
use evenscalar::stress::{relaxed_residual, stress};
use evenscalar::torus::{
    besov_holder_norm, exact_product, helmholtz_split, modulate, Phase, SpectralField, TorusGrid,
};
use evenscalar::wave::{decomposition_residual, solve_coeffs, x_norm, DirectionFrame};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sym(i: usize) -> OddSymbol {
    OddSymbol::registry()[i % 3]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn physical_round_trip(seed in any::<u64>(), radius in 0.0f64..15.0) {
        let grid = TorusGrid::new(32).unwrap();
        let f = random_field(&grid, radius, &mut ChaCha8Rng::seed_from_u64(seed), false);
        let back = SpectralField::from_physical(&grid, &f.to_physical()).unwrap();
        prop_assert!((&back - &f).max_coeff() <= 1e-14 * (1.0 + f.max_coeff()));
    }

    #[test]
    fn gamma_inverse_undoes_gamma(seed in any::<u64>(), s in 0usize..3) {
        let grid = TorusGrid::new(32).unwrap();
        let f = random_field(&grid, 10.0, &mut ChaCha8Rng::seed_from_u64(seed), true);
        let sym = sym(s);
        let theta = apply_gamma(&sym, &f);
        let (back, _) = apply_gamma_inverse(&sym, &theta).unwrap();
        // modes with sigma = 0 are annihilated, so compare after a second application
        prop_assert!((&apply_gamma(&sym, &back) - &theta).max_coeff() <= 1e-12 * theta.max_coeff().max(1e-300));
    }

    #[test]
    fn product_is_symmetric(seed in any::<u64>()) {
        let grid = TorusGrid::new(32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_field(&grid, 6.0, &mut rng, false);
        let b = random_field(&grid, 7.0, &mut rng, false);
        let ab = exact_product(&a, &b).unwrap();
        let ba = exact_product(&b, &a).unwrap();
        prop_assert!((&ab - &ba).max_coeff() <= 1e-14 * ab.max_coeff());
        prop_assert!(ab.support_radius() <= a.support_radius() + b.support_radius() + 1e-9);
    }

    #[test]
    fn modulation_is_a_coefficient_shift(seed in any::<u64>(), lambda in 1u64..3, j in 0usize..2, sine in any::<bool>()) {
        let grid = TorusGrid::new(64).unwrap();
        let a = random_field(&grid, 6.0, &mut ChaCha8Rng::seed_from_u64(seed), false);
        let c = DirectionFrame::carrier(lambda, j);
        let (wave, phase) = if sine {
            (SpectralField::sine(&grid, c, 1.0), Phase::Sin)
        } else {
            (SpectralField::cosine(&grid, c, 1.0), Phase::Cos)
        };
        let direct = exact_product(&a, &wave).unwrap();
        let shifted = modulate(&a, c, phase).unwrap();
        prop_assert!((&direct - &shifted).max_coeff() <= 1e-14 * (1.0 + a.max_coeff()));
    }

    #[test]
    fn three_term_identity(seed in any::<u64>(), s in 0usize..3, lambda in 1u64..3, j in 0usize..2) {
        let grid = TorusGrid::new(64).unwrap();
        let sym = sym(s);
        let a = random_field(&grid, 6.0, &mut ChaCha8Rng::seed_from_u64(seed), false);
        let c = DirectionFrame::carrier(lambda, j);
        let direct = apply_gamma(&sym, &modulate(&a, c, Phase::Cos).unwrap());
        let mc = sym.sigma(c);
        let rebuilt = &(&modulate(&a, c, Phase::Sin).unwrap().scale(-mc)
            + &modulate(&apply_t1(&sym, &a, c).unwrap(), c, Phase::Cos).unwrap())
            + &modulate(&apply_t2(&sym, &a, c).unwrap(), c, Phase::Sin).unwrap();
        prop_assert!((&direct - &rebuilt).max_coeff() <= 1e-10 * direct.max_coeff());
    }

    #[test]
    fn decomposition_holds(seed in any::<u64>(), s in 0usize..3) {
        let grid = TorusGrid::new(64).unwrap();
        let g = random_field(&grid, 16.0, &mut ChaCha8Rng::seed_from_u64(seed), true);
        let coeffs = solve_coeffs(&sym(s)).unwrap();
        prop_assert!(decomposition_residual(&coeffs, &g) <= 1e-12);
        prop_assert!(x_norm(&coeffs, &g) >= g.sup_norm());
    }

    #[test]
    fn helmholtz_pieces_are_pure(seed in any::<u64>()) {
        let grid = TorusGrid::new(32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_field(&grid, 10.0, &mut rng, true);
        let h = helmholtz_split(&perp_gradient(&v));
        prop_assert!(h.gradient.max_coeff() <= 1e-14 * v.max_coeff());
        prop_assert!((&h.rotational - &v).max_coeff() <= 1e-14 * v.max_coeff());
    }

    #[test]
    fn stress_split_is_exact(seed in any::<u64>(), s in 0usize..3, gamma in 0.1f64..1.9) {
        let grid = TorusGrid::new(32).unwrap();
        let f = random_field(&grid, 7.0, &mut ChaCha8Rng::seed_from_u64(seed), true);
        let st = stress(&sym(s), gamma, &f).unwrap();
        let h = helmholtz_split(&st);
        prop_assert!(relaxed_residual(&st, &h) <= 1e-12);
    }

    #[test]
    fn besov_proxy_scales_linearly(seed in any::<u64>(), c in -5.0f64..5.0, s in 0.0f64..1.0) {
        let grid = TorusGrid::new(32).unwrap();
        let f = random_field(&grid, 12.0, &mut ChaCha8Rng::seed_from_u64(seed), false);
        let lhs = besov_holder_norm(&f.scale(c), s);
        let rhs = c.abs() * besov_holder_norm(&f, s);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
        prop_assert!(besov_holder_norm(&f, s) >= besov_holder_norm(&f, 0.0) - 1e-12);
    }
}

#[test]
fn single_mode_is_read_back() {
    let grid = TorusGrid::new(16).unwrap();
    let f = SpectralField::from_modes(&grid, &[([2, -3], Complex64::new(0.25, -0.5))]);
    assert_eq!(f.coeff([2, -3]), Complex64::new(0.25, -0.5));
    assert_eq!(f.coeff([-2, 3]), Complex64::new(0.25, 0.5));
}
