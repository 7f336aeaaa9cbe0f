//! Property tests for the invariants of each module. Strategies draw seeds and
//! shapes; matrices and polynomials are built from named seeded streams.

mod common;

use proptest::prelude::*;
use rand::Rng;
use ssflab::deriv::{derivative_moi, derivative_poly_path, remainder_via_integral, taylor_remainder};
use ssflab::moi::{
    diagonal_compression, diagonal_compression_product, diagonal_moi, discrete_unitary_average,
    estimate_multilinear_norm, moi_apply, region_additivity_check, EstimateOptions, MoiOperator, MoiSymbol, Region,
    Rel,
};
use ssflab::numlin::random::{circle_point, complex_normal, gaussian_matrix, stream};
use ssflab::numlin::{operator_norm, random_unitary, schatten_from_singular, schatten_norm, singular_values};
use ssflab::poly::{divided_difference, eval_phi, integrate_simplex, MultiPoly, SymbolPhi};
use ssflab::ssf::{pairing, pairing_quadrature, reconstruct_ssf, remainder_moment, PAIRING_QUADRATURE_POINTS};
use ssflab::{CMatrix, Complex64, Polynomial, SpectralUnitary};

const EXPONENTS: [f64; 6] = [1.0, 1.5, 2.0, 3.0, 4.0, f64::INFINITY];

fn exponent() -> impl Strategy<Value = f64> {
    prop::sample::select(EXPONENTS.to_vec())
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn random_trig(seed: u64, arity: usize) -> MoiSymbol {
    let mut rng = stream(seed, "trig");
    let terms = (0..3)
        .map(|_| ((0..arity).map(|_| rng.random_range(-2..=2)).collect(), complex_normal(&mut rng).scale(0.4)))
        .collect();
    MoiSymbol::Trig { arity, terms }
}

fn positive_term<R: Rng>(rng: &mut R, nvars: usize) -> MultiPoly {
    let e: Vec<u32> = (0..nvars).map(|_| rng.random_range(0..4)).collect();
    MultiPoly::monomial(e, Complex64::new(rng.random_range(0.1..2.0), 0.0))
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn schatten_holder(seed: u64, dim in 1usize..7, p in exponent(), q in exponent()) {
        prop_assume!(1.0 / p + 1.0 / q <= 1.0);
        let r = 1.0 / (1.0 / p + 1.0 / q);
        let mut rng = stream(seed, "holder");
        let (x, y) = (gaussian_matrix(&mut rng, dim, dim), gaussian_matrix(&mut rng, dim, dim));
        let lhs = schatten_norm(&x.matmul(&y), r).unwrap();
        let rhs = schatten_norm(&x, p).unwrap() * schatten_norm(&y, q).unwrap();
        prop_assert!(lhs <= rhs + 1e-9, "{lhs} > {rhs}");
    }

    #[test]
    fn schatten_unitary_invariance(seed: u64, dim in 1usize..7, p in exponent()) {
        let x = gaussian_matrix(&mut stream(seed, "x"), dim, dim);
        let u = random_unitary(dim, seed ^ 1).unwrap().matrix();
        let w = random_unitary(dim, seed ^ 2).unwrap().matrix();
        let a = schatten_norm(&u.matmul(&x).matmul(&w), p).unwrap();
        let b = schatten_norm(&x, p).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * b.max(1.0));
    }

    #[test]
    fn schatten_nonincreasing_in_p(seed: u64, dim in 1usize..7) {
        let x = gaussian_matrix(&mut stream(seed, "x"), dim, dim);
        let sigma = singular_values(&x).unwrap();
        let norms: Vec<f64> = EXPONENTS.iter().map(|&p| schatten_from_singular(&sigma, p).unwrap()).collect();
        for w in norms.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12), "{norms:?}");
        }
    }

    #[test]
    fn spectral_round_trip(seed: u64, dim in 1usize..7, grid in prop::option::of(2usize..6)) {
        let base = random_unitary(dim, seed).unwrap();
        // Coarse grids produce groups of rank above one.
        let spec = match grid {
            Some(n) => base.discretize(n).unwrap(),
            None => base,
        };
        let pairs: Vec<(Complex64, CMatrix)> = spec.groups().iter().map(|g| (g.eigenvalue, g.projection())).collect();
        let again = SpectralUnitary::from_projections(dim, &pairs).unwrap();
        prop_assert!((&again.matrix() - &spec.matrix()).max_abs() < 1e-10);
    }

    #[test]
    fn divided_difference_is_symmetric(seed: u64, deg in 0usize..=20, n in 1usize..=4) {
        let mut rng = stream(seed, "dd");
        let f = Polynomial::random(&mut rng, deg);
        let nodes: Vec<Complex64> = (0..=n).map(|_| circle_point(&mut rng)).collect();
        let mut shuffled = nodes.clone();
        shuffled.rotate_left(1);
        shuffled.swap(0, n);
        let (a, b) = (divided_difference(&f, &nodes), divided_difference(&f, &shuffled));
        prop_assert!((a - b).norm() <= 1e-10 * a.norm().max(1.0));
    }

    #[test]
    fn phi_is_polynomial_in_each_node(seed: u64, n in 1usize..=4, deg in 0usize..=6, m in 0usize..3, k in 0usize..3, slot in 0usize..5) {
        let slot = slot % (n + 1);
        let mut rng = stream(seed, "phi");
        let sym = SymbolPhi::new(n, Polynomial::random(&mut rng, deg), m, k).unwrap();
        let nodes: Vec<Complex64> = (0..=n).map(|_| circle_point(&mut rng)).collect();
        let at = |z: Complex64| {
            let mut pts = nodes.clone();
            pts[slot] = z;
            eval_phi(&sym, &pts).unwrap()
        };
        // The argument of h is affine in each node, so phi has degree <= deg h in it.
        let xs: Vec<Complex64> = (0..deg + 2).map(|_| circle_point(&mut rng)).collect();
        let ys: Vec<Complex64> = xs.iter().map(|&x| at(x)).collect();
        let probe = circle_point(&mut rng).scale(0.7);
        let mut lagrange = Complex64::new(0.0, 0.0);
        for (i, (&xi, &yi)) in xs.iter().zip(&ys).enumerate() {
            let mut basis = Complex64::new(1.0, 0.0);
            for (j, &xj) in xs.iter().enumerate() {
                if i != j {
                    basis *= (probe - xj) / (xi - xj);
                }
            }
            lagrange += yi * basis;
        }
        let direct = at(probe);
        prop_assert!((lagrange - direct).norm() <= 1e-8 * direct.norm().max(1.0), "{lagrange} vs {direct}");
    }

    #[test]
    fn simplex_integral_linear_and_positive(seed: u64, nvars in 1usize..5) {
        let mut rng = stream(seed, "simplex");
        let p = positive_term(&mut rng, nvars).add(&positive_term(&mut rng, nvars));
        let q = positive_term(&mut rng, nvars);
        let (a, b) = (complex_normal(&mut rng), complex_normal(&mut rng));
        let ip = integrate_simplex(&p, nvars).unwrap();
        let iq = integrate_simplex(&q, nvars).unwrap();
        prop_assert!(ip.re > 0.0 && ip.im == 0.0);
        let combined = integrate_simplex(&p.scale(a).add(&q.scale(b)), nvars).unwrap();
        prop_assert!((combined - (a * ip + b * iq)).norm() < 1e-14);
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn moi_is_linear_in_every_slot(seed: u64, dim in 1usize..6, n in 1usize..=3, slot in 0usize..3) {
        let slot = slot % n;
        let spec = random_unitary(dim, seed).unwrap();
        let sym = random_trig(seed, n + 1);
        let region = Region::order(&[(0, Rel::Le, n)]);
        let mut rng = stream(seed, "xs");
        let xs = common::unit_matrices(&mut rng, dim, n);
        let y = common::unit_matrices(&mut rng, dim, 1).remove(0);
        let (a, b) = (complex_normal(&mut rng), complex_normal(&mut rng));
        let with = |x: CMatrix| {
            let mut args = xs.clone();
            args[slot] = x;
            moi_apply(&spec, &sym, &region, &args).unwrap()
        };
        let mixed = &xs[slot].scale(a) + &y.scale(b);
        let expected = &with(xs[slot].clone()).scale(a) + &with(y).scale(b);
        prop_assert!(operator_norm(&(&with(mixed) - &expected)).unwrap() < 1e-11);
    }

    #[test]
    fn region_additivity_on_disjoint_pairs(seed: u64, dim in 1usize..6, n in 1usize..=3, cut in 0usize..3) {
        let spec = random_unitary(dim, seed).unwrap();
        let sym = random_trig(seed, n + 1);
        let xs = common::unit_matrices(&mut stream(seed, "xs"), dim, n);
        let b = match cut {
            0 => Region::Diagonal,
            1 => Region::order(&[(0, Rel::Lt, n)]),
            _ => Region::Arcs { count: 2, ks: vec![0; n + 1] },
        };
        let c = b.clone().complement();
        prop_assert!(region_additivity_check(&spec, &sym, &b, &c, &xs).unwrap() < 1e-11);
    }

    #[test]
    fn delta_one_matches_compressions_and_average(seed: u64, dim in 1usize..6, n in 1usize..=2, grid in 3usize..8) {
        let spec = random_unitary(dim, seed).unwrap().discretize(grid).unwrap().on_full_grid().unwrap();
        let xs = common::unit_matrices(&mut stream(seed, "xs"), dim, n);
        let delta = diagonal_moi(&spec, &MoiSymbol::one(n + 1), &xs).unwrap();
        let composed = diagonal_compression_product(&spec, &xs).unwrap();
        prop_assert!(operator_norm(&(&delta - &composed)).unwrap() < 1e-12);
        let average = discrete_unitary_average(&spec, &xs).unwrap();
        prop_assert!(operator_norm(&(&delta - &average)).unwrap() < 1e-11);
    }

    #[test]
    fn diagonal_compression_contracts_schatten_norms(seed: u64, dim in 1usize..7, p in exponent()) {
        let spec = random_unitary(dim, seed).unwrap();
        let x = gaussian_matrix(&mut stream(seed, "x"), dim, dim);
        let pinched = diagonal_compression(&spec, &x).unwrap();
        prop_assert!(schatten_norm(&pinched, p).unwrap() <= schatten_norm(&x, p).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn estimator_monotone_in_trials(seed: u64, dim in 2usize..6, few in 1usize..4, extra in 1usize..4) {
        let spec = random_unitary(dim, seed).unwrap();
        let op = MoiOperator::new(&spec, MoiSymbol::Phase { arity: 2, i: 0, j: 1, power: 1 }, Region::Full).unwrap();
        let opts = |trials| EstimateOptions { trials, seed, polish_rounds: 2 };
        let a = estimate_multilinear_norm(&op, &[3.0], opts(few)).unwrap().value;
        let b = estimate_multilinear_norm(&op, &[3.0], opts(few + extra)).unwrap().value;
        prop_assert!(b >= a, "{b} < {a}");
    }

    #[test]
    fn derivative_routes_linear_in_f(seed: u64, dim in 1usize..6, n in 1usize..=3, t0 in 0.0f64..=1.0, df in 0usize..=8, dg in 0usize..=8) {
        let (u0, pair) = common::unitary_path(dim, seed);
        let mut rng = stream(seed, "f");
        let f = Polynomial::random(&mut rng, df);
        let g = Polynomial::random(&mut rng, dg);
        let (a, b) = (complex_normal(&mut rng), complex_normal(&mut rng));
        let h = f.scale(a).add(&g.scale(b));
        let combine = |x: CMatrix, y: CMatrix| &x.scale(a) + &y.scale(b);
        let path = |p: &Polynomial| derivative_poly_path(&pair, p, n, t0).unwrap();
        let moi = |p: &Polynomial| derivative_moi(&u0, pair.v(), p, n).unwrap();
        let rem = |p: &Polynomial| taylor_remainder(&pair, p, n).unwrap();
        let integral = |p: &Polynomial| remainder_via_integral(&pair, p, n).unwrap();
        let routes: [&dyn Fn(&Polynomial) -> CMatrix; 4] = [&path, &moi, &rem, &integral];
        for route in routes {
            let (lhs, rhs) = (route(&h), combine(route(&f), route(&g)));
            // Unit floor: remainders of degree below n are pure round-off.
            let scale = operator_norm(&lhs).unwrap().max(operator_norm(&rhs).unwrap()).max(1.0);
            prop_assert!(operator_norm(&(&lhs - &rhs)).unwrap() < 1e-11 * scale);
        }
    }

    #[test]
    fn pairing_ignores_analytic_part(seed: u64, n in 1usize..=3, truncation in 1usize..10, dphi in 0usize..10, extra in 0usize..8) {
        let pair = common::contraction_path(4, seed);
        let series = reconstruct_ssf(&pair, n, truncation).unwrap();
        let mut rng = stream(seed, "phi");
        let phi = Polynomial::random(&mut rng, dphi.min(truncation));
        let analytic = Polynomial::random(&mut rng, extra);
        let exact = pairing(&phi, &series).unwrap();
        let shifted = pairing_quadrature(&phi, |z| series.eval(z) + analytic.eval(z), PAIRING_QUADRATURE_POINTS);
        let scale = phi.coeffs().iter().map(|c| c.norm()).sum::<f64>() * (1.0 + analytic.sup_norm_circle());
        prop_assert!((shifted - exact).norm() <= 1e-9 * scale, "{shifted} vs {exact}");
    }

    #[test]
    fn coefficients_are_scaled_remainder_traces(seed: u64, dim in 1usize..6, n in 1usize..=3, truncation in 1usize..12) {
        let pair = common::contraction_path(dim, seed);
        let series = reconstruct_ssf(&pair, n, truncation).unwrap();
        for j in 1..=truncation + 1 {
            let k = n + j - 1;
            let ratio: f64 = (k - n + 1..=k).map(|i| i as f64).product();
            let expected = remainder_moment(&pair, n, k).unwrap() / (Complex64::new(0.0, std::f64::consts::TAU) * ratio);
            let c = series.coeff(j);
            prop_assert!((c - expected).norm() <= 1e-12 * expected.norm().max(1e-3), "c_{j} = {c} vs {expected}");
        }
    }
}
