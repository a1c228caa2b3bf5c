use nc_core::dpc::separation;
use nc_core::harness::{generate_pairs, ClassFilter};
use nc_core::lines::{
    abcd_from_john, abcd_from_plucker, fit_quadric, incidence_residual, incident, john_coords, john_from_abcd,
    plucker_from_abcd, transversal_through_point, verify_rulsurf, LineABCD, Quadric,
};
use proptest::prelude::*;

fn line() -> impl Strategy<Value = LineABCD> {
    prop::array::uniform4(-3.0..3.0f64).prop_map(|[a, b, c, d]| LineABCD::new(a, b, c, d))
}

/// A line through the point of `l` at height z with a random direction.
fn meeting(l: &LineABCD, z: f64, a: f64, c: f64) -> LineABCD {
    let p = l.point_at(z);
    LineABCD::new(a, p[0] - a * p[2], c, p[1] - c * p[2])
}

proptest! {
    #[test]
    fn chart_identity(l in line(), m in line()) {
        let x = john_from_abcd(&l);
        let y = john_from_abcd(&m);
        let rhs = 4.0 * ((l.a - m.a) * (l.d - m.d) - (l.b - m.b) * (l.c - m.c));
        let scale = 1.0 + x.euclid().powi(2) + y.euclid().powi(2);
        prop_assert!((separation(&x, &y) - rhs).abs() <= 1e-12 * scale);
    }

    #[test]
    fn chart_roundtrips(l in line()) {
        let back = abcd_from_john(&john_from_abcd(&l));
        let via = abcd_from_plucker(&plucker_from_abcd(&l)).unwrap();
        let x = john_coords(&plucker_from_abcd(&l)).unwrap();
        for k in [(back.a, l.a), (back.b, l.b), (back.c, l.c), (back.d, l.d),
                  (via.a, l.a), (via.b, l.b), (via.c, l.c), (via.d, l.d)] {
            prop_assert!((k.0 - k.1).abs() <= 1e-12 * (1.0 + k.1.abs()));
        }
        prop_assert!((x - john_from_abcd(&l)).euclid() <= 1e-12 * (1.0 + x.euclid()));
    }

    #[test]
    fn incidence_is_null_separation(l in line(), m in line(), z in -2.0..2.0f64, meet in any::<bool>()) {
        let m = if meet { meeting(&l, z, m.a, m.c) } else { m };
        let x = john_from_abcd(&l);
        let y = john_from_abcd(&m);
        let scale = 1.0 + l.a * l.a + l.b * l.b + l.c * l.c + l.d * l.d + m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d;
        let null = separation(&x, &y).abs() <= 4e-9 * scale;
        prop_assert_eq!(incident(&l, &m, 1e-9), null);
        if meet {
            prop_assert!(incident(&l, &m, 1e-9));
        }
        prop_assert!((4.0 * incidence_residual(&l, &m) - separation(&x, &y)).abs() <= 1e-12 * 4.0 * scale);
    }

    #[test]
    fn transversals_meet_both(l in line(), m in line(), p in prop::array::uniform3(-3.0..3.0f64)) {
        let Ok(Some(t)) = transversal_through_point(&p, &l, &m) else { return Ok(()) };
        for other in [&l, &m] {
            let scale = 1.0 + t.a * t.a + t.b * t.b + t.c * t.c + t.d * t.d
                + other.a * other.a + other.b * other.b + other.c * other.c + other.d * other.d;
            prop_assert!(incidence_residual(&t, other).abs() <= 1e-10 * scale);
        }
        prop_assert!(t.distance_to(&p) <= 1e-10 * (1.0 + p.iter().map(|v| v.abs()).sum::<f64>()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fit_is_scale_equivariant(seed in any::<u64>()) {
        let pair = generate_pairs(seed, 1, ClassFilter::Circles).remove(0);
        let report = verify_rulsurf(&pair, 12).unwrap();
        let pts: Vec<[f64; 3]> = report.surface_points.iter().map(|s| s.3).collect();
        let q1 = fit_quadric(&pts).unwrap().quadric;
        let scaled: Vec<[f64; 3]> = pts.iter().map(|p| [2.0 * p[0], 2.0 * p[1], 2.0 * p[2]]).collect();
        let q2 = fit_quadric(&scaled).unwrap().quadric;
        // Points 2X lie on D^T Q D with D = diag(1/2, 1/2, 1/2, 1).
        let d = [0.5, 0.5, 0.5, 1.0];
        let expected = Quadric::canonical(std::array::from_fn(|i| std::array::from_fn(|j| d[i] * q1.q[i][j] * d[j])));
        prop_assert!(q2.max_deviation(&expected) <= 1e-8);
    }
}
