use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use finslerkit::finsler::{
    arith_family, crucial_identity_check, max_family, path_length, reverse_lagrangian, sum_lagrangian, Quadrature,
};
use finslerkit::funk::{
    funk_distance, funk_lagrangian, funk_metric, hilbert_distance, hilbert_lagrangian, weighted_funk_arith,
};
use finslerkit::metric::{arith_symmetrise, max_symmetrise, reverse_metric};
use finslerkit::{ConvexBody, Lagrangian, Point, PolylinePath, Polytope, Weight};

fn config() -> Config {
    Config {
        cases: 512,
        rng_seed: RngSeed::Fixed(20_240_611),
        failure_persistence: None,
        ..Config::default()
    }
}

fn disc() -> Arc<ConvexBody> {
    Arc::new(ConvexBody::unit_ball(2))
}

fn triangle_body() -> Arc<ConvexBody> {
    let p = Polytope::new(vec![
        finslerkit::HalfSpace {
            normal: vec![0.0, -1.0],
            offset: 1.0,
        },
        finslerkit::HalfSpace {
            normal: vec![1.0, 1.0],
            offset: 1.0,
        },
        finslerkit::HalfSpace {
            normal: vec![-1.0, 1.0],
            offset: 1.0,
        },
    ])
    .unwrap();
    Arc::new(ConvexBody::Polytope(p))
}

/// Points of the open unit disc, kept away from the boundary.
fn in_disc() -> impl Strategy<Value = Vec<f64>> {
    (0.0..std::f64::consts::TAU, 0.0..0.95f64).prop_map(|(a, r)| vec![r * a.cos(), r * a.sin()])
}

/// Points of the triangle `y > -1, y < 1 - |x|`, kept away from its boundary.
fn in_triangle() -> impl Strategy<Value = Vec<f64>> {
    (-0.9..0.9f64, 0.0..0.9f64).prop_map(|(x, s)| {
        let top = 1.0 - x.abs();
        vec![x, -1.0 + 0.05 + s * (top - (-1.0) - 0.1)]
    })
}

fn direction() -> impl Strategy<Value = Vec<f64>> {
    (0.0..std::f64::consts::TAU, 0.1..3.0f64).prop_map(|(a, r)| vec![r * a.cos(), r * a.sin()])
}

fn weight() -> impl Strategy<Value = Weight> {
    (0.0..=1.0f64).prop_map(|t| Weight::new(t).unwrap())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn lagrangians() -> Vec<Lagrangian> {
    let d = disc();
    vec![
        funk_lagrangian(d.clone()),
        reverse_lagrangian(&funk_lagrangian(d.clone())),
        hilbert_lagrangian(d.clone()),
        arith_family(&funk_lagrangian(d.clone()), Weight::new(0.3).unwrap()),
        max_family(&funk_lagrangian(d.clone()), Weight::new(0.7).unwrap()),
        funk_lagrangian(triangle_body()),
    ]
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn lagrangians_are_positively_homogeneous(x in in_disc(), v in direction(), c in 0.01..100.0f64) {
        let x = vec![x[0] * 0.5, x[1] * 0.5 - 0.2];
        for f in lagrangians() {
            let cv: Vec<f64> = v.iter().map(|a| c * a).collect();
            let lhs = f.eval(&x, &cv).unwrap();
            let rhs = c * f.eval(&x, &v).unwrap();
            prop_assert!(close(lhs, rhs, 1e-12), "{}: {lhs} vs {rhs}", f.label());
        }
    }

    #[test]
    fn lagrangians_are_subadditive(x in in_disc(), v in direction(), w in direction()) {
        let x = vec![x[0] * 0.5, x[1] * 0.5 - 0.2];
        for f in lagrangians() {
            let vw: Vec<f64> = v.iter().zip(&w).map(|(a, b)| a + b).collect();
            let lhs = f.eval(&x, &vw).unwrap();
            let rhs = f.eval(&x, &v).unwrap() + f.eval(&x, &w).unwrap();
            prop_assert!(lhs <= rhs + 1e-12 * (1.0 + rhs), "{}: {lhs} > {rhs}", f.label());
        }
    }

    #[test]
    fn ray_exit_is_inverse_homogeneous(x in in_disc(), v in direction(), c in 0.01..100.0f64) {
        for body in [disc(), triangle_body()] {
            if !body.contains(&x).unwrap() {
                continue;
            }
            let cv: Vec<f64> = v.iter().map(|a| c * a).collect();
            let s = body.ray_exit(&x, &v).unwrap().value();
            let sc = body.ray_exit(&x, &cv).unwrap().value();
            prop_assert!(close(sc, s / c, 1e-12));
        }
    }

    #[test]
    fn ray_exit_agrees_with_membership(x in in_triangle(), v in direction()) {
        for body in [disc(), triangle_body()] {
            if body.interior_margin(&x) < 1e-6 {
                continue;
            }
            let s = body.ray_exit(&x, &v).unwrap().value();
            let at = |r: f64| -> Vec<f64> { x.iter().zip(&v).map(|(a, b)| a + r * b).collect() };
            prop_assert!(body.contains(&at(s * (1.0 - 1e-9))).unwrap());
            prop_assert!(!body.contains(&at(s * (1.0 + 1e-9))).unwrap());
        }
    }

    #[test]
    fn chord_endpoints_swap_with_arguments(x in in_disc(), y in in_disc()) {
        prop_assume!(x != y);
        let body = disc();
        let (plus, minus) = body.chord_endpoints(&x, &y).unwrap();
        let (plus_r, minus_r) = body.chord_endpoints(&y, &x).unwrap();
        let (plus, minus, plus_r, minus_r) = (plus.unwrap(), minus.unwrap(), plus_r.unwrap(), minus_r.unwrap());
        for i in 0..2 {
            prop_assert!((plus[i] - minus_r[i]).abs() < 1e-12);
            prop_assert!((minus[i] - plus_r[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn funk_is_additive_along_chords(x in in_disc(), y in in_disc(), s in 0.0..1.0f64) {
        prop_assume!(x != y);
        let body = disc();
        let z: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + s * (b - a)).collect();
        let sum = funk_distance(&body, &x, &z).unwrap() + funk_distance(&body, &z, &y).unwrap();
        prop_assert!(close(sum, funk_distance(&body, &x, &y).unwrap(), 1e-12));
    }

    #[test]
    fn hilbert_is_the_half_arithmetic_symmetrisation(x in in_disc(), y in in_disc()) {
        let body = disc();
        let h = hilbert_distance(&body, &x, &y).unwrap();
        prop_assert!(close(h, weighted_funk_arith(&body, Weight::HALF, &x, &y).unwrap(), 1e-15));
        prop_assert!(close(h, hilbert_distance(&body, &y, &x).unwrap(), 1e-12));
    }

    #[test]
    fn symmetriser_identities(x in in_disc(), y in in_disc(), t in weight()) {
        let d = funk_metric(disc());
        let (xy, yx) = (d.eval(&x, &y).unwrap(), d.eval(&y, &x).unwrap());
        let rr = reverse_metric(&reverse_metric(&d));
        prop_assert_eq!(rr.eval(&x, &y).unwrap(), xy);
        prop_assert_eq!(arith_symmetrise(&d, Weight::ZERO).eval(&x, &y).unwrap(), xy);
        prop_assert_eq!(arith_symmetrise(&d, Weight::ONE).eval(&x, &y).unwrap(), yx);
        prop_assert_eq!(max_symmetrise(&d, Weight::ZERO).eval(&x, &y).unwrap(), xy);
        prop_assert_eq!(max_symmetrise(&d, Weight::ONE).eval(&x, &y).unwrap(), yx);
        let a = arith_symmetrise(&d, t).eval(&x, &y).unwrap();
        let m = max_symmetrise(&d, t).eval(&x, &y).unwrap();
        prop_assert!(a >= m);
        let half = arith_symmetrise(&d, Weight::HALF);
        prop_assert!((half.eval(&x, &y).unwrap() - half.eval(&y, &x).unwrap()).abs() <= 1e-12);
        let half = max_symmetrise(&d, Weight::HALF);
        prop_assert!((half.eval(&x, &y).unwrap() - half.eval(&y, &x).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn reverse_lagrangian_is_an_involution(x in in_disc(), v in direction()) {
        let f = funk_lagrangian(disc());
        let rr = reverse_lagrangian(&reverse_lagrangian(&f));
        prop_assert_eq!(rr.eval(&x, &v).unwrap(), f.eval(&x, &v).unwrap());
        let back: Vec<f64> = v.iter().map(|c| -c).collect();
        prop_assert_eq!(reverse_lagrangian(&f).eval(&x, &v).unwrap(), f.eval(&x, &back).unwrap());
    }

    #[test]
    fn quadrature_is_linear(nodes in prop::collection::vec((0.3..3.0f64, 0.2..3.0f64), 2..8), t in weight()) {
        let path = PolylinePath::new(nodes.iter().map(|&(a, b)| Point::from([a, b])).collect()).unwrap();
        let f1 = Lagrangian::euclidean(2);
        let f2 = Lagrangian::hyperbolic(2).unwrap();
        let quad = Quadrature::default();
        prop_assert!(crucial_identity_check(&f1, &f2, t, &path, &quad).unwrap() <= 1e-12);
        prop_assert!(crucial_identity_check(&f2, &f2, t, &path, &quad).unwrap() <= 1e-12);
        prop_assert_eq!(crucial_identity_check(&f1, &f2, Weight::ZERO, &path, &quad).unwrap(), 0.0);
    }

    #[test]
    fn midpoint_insertion_keeps_length(nodes in prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 2..8)) {
        let path = PolylinePath::new(nodes.iter().map(|&(a, b)| Point::from([a, b])).collect()).unwrap();
        let quad = Quadrature::default();
        let f = sum_lagrangian(&Lagrangian::euclidean(2), &Lagrangian::diagonal_norm(vec![4.0, 9.0]).unwrap()).unwrap();
        let before = path_length(&f, &path, &quad).unwrap();
        let after = path_length(&f, &path.refined(), &quad).unwrap();
        prop_assert!(close(before, after, 1e-12));
        let reversed = path_length(&f, &path.reversed(), &quad).unwrap();
        prop_assert!(close(before, reversed, 1e-12));
    }

    #[test]
    fn funk_length_of_straight_segment_is_the_distance(x in in_disc(), y in in_disc()) {
        let body = disc();
        let path = PolylinePath::straight(&Point::from([x[0], x[1]]), &Point::from([y[0], y[1]]), 65).unwrap();
        let len = path_length(&funk_lagrangian(body.clone()), &path, &Quadrature::gauss_legendre(8).unwrap()).unwrap();
        prop_assert!((len - funk_distance(&body, &x, &y).unwrap()).abs() <= 1e-6);
    }
}
