use std::sync::Arc;

use finslerkit::experiments::body_pairs;
use finslerkit::finsler::{induced_distance, max_lagrangian, path_length, sum_lagrangian, GeodesicOptions, Quadrature};
use finslerkit::funk::{funk_distance, funk_lagrangian, weighted_funk_arith, weighted_funk_lagrangian};
use finslerkit::{ConvexBody, Lagrangian, Point, PolylinePath, Weight};

fn opts() -> GeodesicOptions {
    GeodesicOptions {
        multistart: 1,
        ..GeodesicOptions::default()
    }
}

fn disc() -> Arc<ConvexBody> {
    Arc::new(ConvexBody::unit_ball(2))
}

#[test]
fn funk_chord_from_center() {
    let r = induced_distance(
        &funk_lagrangian(disc()),
        &Point::from([0.0, 0.0]),
        &Point::from([0.5, 0.0]),
        &opts(),
    )
    .unwrap();
    assert!((r.length - 2f64.ln()).abs() < 1e-4, "{}", r.length);
}

#[test]
fn straight_funk_path_with_fine_quadrature() {
    let path = PolylinePath::straight(&Point::from([0.0, 0.0]), &Point::from([0.5, 0.0]), 65).unwrap();
    let len = path_length(&funk_lagrangian(disc()), &path, &Quadrature::gauss_legendre(8).unwrap()).unwrap();
    assert!((len - 2f64.ln()).abs() < 1e-6);
}

#[test]
fn result_invariants() {
    let quad = Quadrature::default();
    let f = sum_lagrangian(&Lagrangian::euclidean(2), &Lagrangian::hyperbolic(2).unwrap()).unwrap();
    let (x, y) = (Point::from([0.0, 1.0]), Point::from([1.0, 2.0]));
    let r = induced_distance(&f, &x, &y, &GeodesicOptions::default()).unwrap();
    assert!((r.length - path_length(&f, &r.path, &quad).unwrap()).abs() <= 1e-12);
    let straight = path_length(&f, &PolylinePath::straight(&x, &y, 2).unwrap(), &quad).unwrap();
    assert!(r.length <= straight + 1e-12);
    for w in r.history.windows(2) {
        assert!(w[1].0 == 2 * w[0].0 - 1);
        assert!(w[1].1 <= w[0].1 * (1.0 + 1e-4), "{:?}", r.history);
    }
    assert_eq!(r.path.start(), &x);
    assert_eq!(r.path.end(), &y);
}

#[test]
fn doubling_nodes_does_not_lengthen() {
    let cases: Vec<(Lagrangian, Point, Point)> = vec![
        (
            max_lagrangian(&Lagrangian::euclidean(2), &Lagrangian::hyperbolic(2).unwrap()).unwrap(),
            Point::from([0.0, 0.5]),
            Point::from([0.0, 2.0]),
        ),
        (
            weighted_funk_lagrangian(disc(), Weight::new(0.3).unwrap()),
            Point::from([0.3, -0.5]),
            Point::from([-0.6, 0.4]),
        ),
        (
            Lagrangian::hyperbolic(2).unwrap(),
            Point::from([-1.0, 1.0]),
            Point::from([1.0, 1.0]),
        ),
    ];
    // At 9 nodes the kink of the max Lagrangian falls inside a long segment and
    // 4-point Gauss underestimates the length by about 1e-4, so independent
    // solves start at 17.
    for (f, x, y) in cases {
        for n in [17, 33] {
            let coarse = GeodesicOptions {
                nodes: n,
                max_nodes: n,
                ..opts()
            };
            let fine = GeodesicOptions {
                nodes: 2 * n - 1,
                max_nodes: 2 * n - 1,
                ..opts()
            };
            let a = induced_distance(&f, &x, &y, &coarse).unwrap().length;
            let b = induced_distance(&f, &x, &y, &fine).unwrap().length;
            assert!(b <= a * (1.0 + 1e-4), "{}: N={n} {a} -> {b}", f.label());
        }
    }
}

#[test]
fn weighted_length_dominates_weighted_distances() {
    let body = disc();
    let o = opts();
    let f = funk_lagrangian(body.clone());
    for (i, (x, y)) in body_pairs(&body, 4, 5).into_iter().enumerate() {
        let t = Weight::new([0.2, 0.4, 0.6, 0.8][i]).unwrap();
        let forward = induced_distance(&f, &x, &y, &o).unwrap().length;
        let backward = induced_distance(&f, &y, &x, &o).unwrap().length;
        let combined = induced_distance(&weighted_funk_lagrangian(body.clone(), t), &x, &y, &o)
            .unwrap()
            .length;
        let scale = forward.max(backward);
        let lower = t.complement() * forward + t.value() * backward;
        assert!(combined >= lower - 2.0 * o.tolerance * scale, "{combined} < {lower}");
        // Straight chords are geodesic in both directions, so equality holds.
        let exact = weighted_funk_arith(&body, t, &x, &y).unwrap();
        assert!((combined - exact).abs() <= 1e-3 * exact);
        assert!((forward - funk_distance(&body, &x, &y).unwrap()).abs() <= 1e-3 * forward);
    }
}

#[test]
fn asymmetric_lengths_are_not_shortcut() {
    let f = funk_lagrangian(disc());
    let quad = Quadrature::default();
    let path = PolylinePath::straight(&Point::from([0.0, 0.0]), &Point::from([0.5, 0.0]), 33).unwrap();
    let forward = path_length(&f, &path, &quad).unwrap();
    let backward = path_length(&f, &path.reversed(), &quad).unwrap();
    assert!((forward - 2f64.ln()).abs() < 1e-6);
    assert!((backward - 1.5f64.ln()).abs() < 1e-6);
}

#[test]
fn multistart_is_deterministic() {
    let f = max_lagrangian(&Lagrangian::euclidean(2), &Lagrangian::hyperbolic(2).unwrap()).unwrap();
    let o = GeodesicOptions {
        multistart: 4,
        seed: 17,
        ..GeodesicOptions::default()
    };
    let (x, y) = (Point::from([0.2, 0.5]), Point::from([0.7, 1.5]));
    let a = induced_distance(&f, &x, &y, &o).unwrap();
    let b = induced_distance(&f, &x, &y, &o).unwrap();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
}

#[test]
fn endpoints_outside_domain_are_rejected() {
    let f = funk_lagrangian(disc());
    assert!(induced_distance(&f, &Point::from([0.0, 0.0]), &Point::from([1.5, 0.0]), &opts()).is_err());
    let h = Lagrangian::hyperbolic(2).unwrap();
    assert!(induced_distance(&h, &Point::from([0.0, -1.0]), &Point::from([0.0, 1.0]), &opts()).is_err());
}
