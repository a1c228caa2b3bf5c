use nc_core::dpc::{
    classify_dpc, dpc_from_hypersphere, hypersphere_from_dpc, phi, point_on, separation, Dpc, Hypersphere,
};
use nc_core::{inner33, Point22};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = Point22> {
    prop::array::uniform4(-3.0..3.0f64).prop_map(Point22)
}

fn scale() -> impl Strategy<Value = f64> {
    (-6.0..6.0f64, any::<bool>()).prop_map(|(e, neg)| 10f64.powf(e) * if neg { -1.0 } else { 1.0 })
}

fn hypersphere() -> impl Strategy<Value = Hypersphere> {
    prop_oneof![
        (point(), -4.0..4.0f64).prop_map(|(c, r)| Hypersphere::proper(c, r)),
        point().prop_map(Hypersphere::cone),
        (point(), -3.0..3.0f64)
            .prop_filter("nonzero normal", |(a, _)| a.euclid() > 1e-3)
            .prop_map(|(a, b)| Hypersphere::plane(a, b).unwrap()),
    ]
}

proptest! {
    #[test]
    fn projective_invariance(h in hypersphere(), c in scale(), x in point()) {
        let d = dpc_from_hypersphere(&h).unwrap();
        let dc = Dpc(d.0.scale(c));
        prop_assert_eq!(classify_dpc(&d), classify_dpc(&dc));
        let a = hypersphere_from_dpc(&d).unwrap();
        let b = hypersphere_from_dpc(&dc).unwrap();
        match (a, b) {
            (Hypersphere::Proper { center: p, radius_sq: r }, Hypersphere::Proper { center: q, radius_sq: s }) => {
                prop_assert!((p - q).euclid() <= 1e-10 * (1.0 + p.euclid()));
                prop_assert!((r - s).abs() <= 1e-10 * (1.0 + r.abs()));
            }
            (Hypersphere::Plane { normal: a1, offset: b1 }, Hypersphere::Plane { normal: a2, offset: b2 }) => {
                prop_assert!((a1 - a2).euclid() <= 1e-10);
                prop_assert!((b1 - b2).abs() <= 1e-10 * (1.0 + b1.abs()));
            }
            other => prop_assert!(false, "kind changed: {:?}", other),
        }
        // A point on H and a point off it.
        let on = match h {
            Hypersphere::Proper { center, .. } => Hypersphere::proper(center, (x - center).norm_sq()),
            Hypersphere::Plane { normal, .. } => Hypersphere::plane(normal, normal.inner(&x)).unwrap(),
            Hypersphere::Empty => unreachable!(),
        };
        let s = dpc_from_hypersphere(&on).unwrap();
        prop_assert!(point_on(&s, &x));
        prop_assert!(point_on(&Dpc(s.0.scale(c)), &x));
        let off = match on {
            Hypersphere::Proper { center, radius_sq } => Hypersphere::proper(center, radius_sq + 1.0),
            Hypersphere::Plane { normal, offset } => Hypersphere::plane(normal, offset + normal.euclid()).unwrap(),
            Hypersphere::Empty => unreachable!(),
        };
        let s = dpc_from_hypersphere(&off).unwrap();
        prop_assert!(!point_on(&s, &x));
        prop_assert!(!point_on(&Dpc(s.0.scale(c)), &x));
    }

    #[test]
    fn phi_lands_in_q1(x in point()) {
        let p = phi(&x).0;
        prop_assert!(inner33(&p, &p).abs() <= 1e-12 * (1.0 + x.norm_sq().abs()));
        prop_assert!((p.0[0] + p.0[5] - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn distance_vs_product(a in point(), b in point()) {
        let lhs = inner33(&phi(&a).0, &phi(&b).0);
        prop_assert!((lhs + 0.5 * separation(&a, &b)).abs() <= 1e-12 * (1.0 + a.euclid().powi(2) + b.euclid().powi(2)));
    }

    #[test]
    fn json_roundtrip_is_exact(h in hypersphere()) {
        let text = serde_json::to_string(&h).unwrap();
        prop_assert_eq!(serde_json::from_str::<Hypersphere>(&text).unwrap(), h);
    }
}
