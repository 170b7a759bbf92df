mod common;

use bezier_simplex::expmodel::{
    bezier_exp_closed_form, bezier_of_exp_polynomial, error_budget, residual_rn,
};
use bezier_simplex::harness::fit_power_law;
use bezier_simplex::lattice::{enumerate_multi_indices, multinomial_log};
use bezier_simplex::operator::{barycentric_grid, basis_values};
use bezier_simplex::{BarycentricPoint, ControlNet, ExpPolynomial, ExpTerm, Simplex};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{dot, random_direction, random_simplex, random_weights};

fn setup(seed: u64, dim: usize) -> (ChaCha8Rng, Simplex) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = random_simplex(&mut rng, dim);
    (rng, s)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn barycentric_round_trip(seed in any::<u64>(), dim in 1usize..=4) {
        let (mut rng, s) = setup(seed, dim);
        let t = BarycentricPoint::new(random_weights(&mut rng, dim)).unwrap();
        let x = s.point_from_barycentric(&t).unwrap();
        let back = s.barycentric(&x).unwrap();
        for (a, b) in t.weights().iter().zip(back.weights()) {
            prop_assert!((a - b).abs() < 1e-9);
        }
        let again = s.point_from_barycentric(&back).unwrap();
        for (a, b) in x.iter().zip(again.iter()) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn barycentric_map_is_affine(seed in any::<u64>(), dim in 1usize..=3, lambda in 0.0f64..1.0) {
        let (mut rng, s) = setup(seed, dim);
        let p = common::random_interior_point(&mut rng, &s);
        let q = common::random_interior_point(&mut rng, &s);
        let mix: Vec<f64> = p.iter().zip(q.iter()).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
        let (sp, sq, sm) = (s.barycentric(&p).unwrap(), s.barycentric(&q).unwrap(), s.barycentric(&mix).unwrap());
        for j in 0..=dim {
            let expected = lambda * sp.weights()[j] + (1.0 - lambda) * sq.weights()[j];
            prop_assert!((sm.weights()[j] - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn multinomial_theorem(dim in 1usize..=3, n in 0u32..=12, raw in prop::collection::vec(0.1f64..2.0, 4)) {
        let y = &raw[..=dim];
        let total: f64 = enumerate_multi_indices(n, dim)
            .unwrap()
            .iter()
            .map(|k| {
                multinomial_log(k).exp()
                    * k.entries().iter().zip(y).map(|(&kj, yj)| yj.powi(kj as i32)).product::<f64>()
            })
            .sum();
        let expected = y.iter().sum::<f64>().powi(n as i32);
        prop_assert!((total - expected).abs() <= 1e-11 * expected);
    }

    #[test]
    fn basis_is_a_partition_of_unity(seed in any::<u64>(), dim in 1usize..=3, n in 0u32..=15) {
        let (mut rng, s) = setup(seed, dim);
        let x = common::random_interior_point(&mut rng, &s);
        let values = basis_values(&s, n, &x).unwrap();
        prop_assert!(values.iter().all(|(_, v)| *v >= 0.0));
        let sum: f64 = values.iter().map(|(_, v)| v).sum();
        prop_assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn evaluators_agree(seed in any::<u64>(), dim in 1usize..=3, n in 1u32..=12) {
        let (mut rng, s) = setup(seed, dim);
        let a = random_direction(&mut rng, dim, 2.0);
        let net = ControlNet::sample(&s, n, |x| (dot(&a, x)).sin()).unwrap();
        let t = BarycentricPoint::new(random_weights(&mut rng, dim)).unwrap();
        let x = s.point_from_barycentric(&t).unwrap();
        let direct = net.eval_direct(&x).unwrap();
        let dc = net.eval_de_casteljau(&t).unwrap();
        prop_assert!((direct - dc).abs() <= 1e-12 * net.max_abs().max(1.0));
    }

    #[test]
    fn closed_form_matches_direct_sum(seed in any::<u64>(), dim in 1usize..=3, n in 1u32..=12) {
        let (mut rng, s) = setup(seed, dim);
        let a = random_direction(&mut rng, dim, 2.0);
        let net = ControlNet::sample(&s, n, |x| dot(&a, x).exp()).unwrap();
        let x = common::random_interior_point(&mut rng, &s);
        let direct = net.eval_direct(&x).unwrap();
        let closed = bezier_exp_closed_form(&s, n, &a, &x).unwrap();
        prop_assert!(((closed - direct) / direct).abs() < 1e-10);
    }

    #[test]
    fn exp_polynomial_is_linear(seed in any::<u64>(), dim in 1usize..=3, n in 1u32..=10,
                                c1 in -3.0f64..3.0, c2 in -3.0f64..3.0) {
        let (mut rng, s) = setup(seed, dim);
        let a1 = random_direction(&mut rng, dim, 2.0);
        let a2 = random_direction(&mut rng, dim, 2.0);
        let p = ExpPolynomial::new(vec![ExpTerm::new(c1, a1.clone()), ExpTerm::new(c2, a2.clone())]).unwrap();
        let net = ControlNet::sample(&s, n, |x| p.eval(x).unwrap()).unwrap();
        let x = common::random_interior_point(&mut rng, &s);
        let lhs = bezier_of_exp_polynomial(&s, n, &p, &x).unwrap();
        let rhs = c1 * bezier_exp_closed_form(&s, n, &a1, &x).unwrap()
            + c2 * bezier_exp_closed_form(&s, n, &a2, &x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (c1.abs() + c2.abs()) * 10.0);
        prop_assert!((lhs - net.eval_direct(&x).unwrap()).abs() <= 1e-10 * net.max_abs().max(1.0));
    }

    /// `n²|r_n| ≤ C` always; the sharper `K1` holds when every `a·x_j ≥ 0`.
    #[test]
    fn residual_is_second_order(seed in any::<u64>(), dim in 1usize..=3, n in 5u32..=400) {
        let (mut rng, s) = setup(seed, dim);
        let a = random_direction(&mut rng, dim, 2.0);
        let budget = error_budget(&s, &a, n).unwrap();
        let nonnegative = s.vertices().iter().all(|v| dot(&a, v) >= 0.0);
        let x = common::random_interior_point(&mut rng, &s);
        let scaled = (n as f64).powi(2) * residual_rn(&s, n, &a, &x).unwrap().abs();
        prop_assert!(scaled <= budget.c * (1.0 + 1e-9) + 1e-12);
        if nonnegative {
            prop_assert!(scaled <= budget.k1 * (1.0 + 1e-9) + 1e-12);
        }
    }
}

#[test]
fn exponentials_decay_at_first_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for dim in 1..=2 {
        let s = random_simplex(&mut rng, dim);
        let a = random_direction(&mut rng, dim, 2.0);
        let grid = barycentric_grid(&s, 20).unwrap();
        let points: Vec<(f64, f64)> = [10u32, 20, 40, 80, 160]
            .iter()
            .map(|&n| {
                let err = grid
                    .iter()
                    .map(|x| {
                        let f = dot(&a, x).exp();
                        ((bezier_exp_closed_form(&s, n, &a, x).unwrap() - f) / f).abs()
                    })
                    .fold(0.0, f64::max);
                (n as f64, err)
            })
            .collect();
        let fit = fit_power_law(&points).unwrap();
        assert!((-1.1..=-0.9).contains(&fit.slope), "D={dim}: slope {}", fit.slope);
    }
}
