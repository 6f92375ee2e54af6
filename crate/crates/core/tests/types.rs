use ainf::{delta_set, fiber, validate, Configuration, FiberKey, ImHPoint, OrderType};
use num_complex::Complex64;
use proptest::prelude::*;

fn centers(max: usize) -> impl Strategy<Value = Vec<ImHPoint>> {
    prop::collection::btree_set((-20i32..20, -3i32..3, -3i32..3), 1..=max).prop_map(|s| {
        s.into_iter()
            .map(|(t, a, b)| ImHPoint::new(f64::from(t) + 0.5, f64::from(a), f64::from(b)))
            .collect()
    })
}

proptest! {
    #[test]
    fn json_round_trip(cs in centers(10)) {
        let c = Configuration::finite(cs).unwrap();
        let back = Configuration::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
        prop_assert_eq!(back.listed(), c.listed());
    }

    #[test]
    fn finite_fibers_have_finite_order_type(cs in centers(10)) {
        let c = Configuration::finite(cs.clone()).unwrap();
        for z in delta_set(&c, 100.0).unwrap() {
            let count = cs.iter().filter(|p| FiberKey::new(-p.z) == FiberKey::new(z)).count();
            prop_assert_eq!(c.order_type(z).unwrap(), OrderType::Finite(count));
            let f = fiber(&c, z, (-100.0, 100.0)).unwrap();
            prop_assert_eq!(f.points.len(), count);
            prop_assert!(f.points.windows(2).all(|w| w[0].1 < w[1].1));
        }
    }

    #[test]
    fn delta_set_grows_with_the_radius(cs in centers(10), r1 in 0.0..5.0f64, dr in 0.0..5.0f64) {
        let c = Configuration::finite(cs).unwrap();
        let small: Vec<FiberKey> = delta_set(&c, r1).unwrap().into_iter().map(FiberKey::new).collect();
        let large: Vec<FiberKey> = delta_set(&c, r1 + dr).unwrap().into_iter().map(FiberKey::new).collect();
        prop_assert!(small.iter().all(|k| large.contains(k)));
    }

    #[test]
    fn translation_moves_fiber_points(cs in centers(6), t in -5.0..5.0f64, re in -2.0..2.0f64) {
        let c = Configuration::finite(cs).unwrap();
        let moved = c.translated(ImHPoint::new(t, re, 0.0)).unwrap();
        for n in 1..=c.listed().unwrap().len() {
            let ((z0, h0), (z1, h1)) = (c.fiber_point(n), moved.fiber_point(n));
            prop_assert!((h1 - (h0 - t)).abs() < 1e-12);
            prop_assert!((z1 - (z0 - re)).norm() < 1e-12);
        }
    }
}

#[test]
fn negative_zero_folds_into_one_fiber() {
    assert_eq!(
        FiberKey::new(Complex64::new(-0.0, 0.0)),
        FiberKey::new(Complex64::new(0.0, -0.0))
    );
}

#[test]
fn duplicates_are_not_generic() {
    let p = ImHPoint::new(1.0, 2.0, 0.0);
    match Configuration::finite(vec![p, p]) {
        Err(_) => {}
        Ok(c) => assert!(!validate(&c).generic),
    }
}

#[test]
fn power_law_axis() {
    let c = Configuration::power_law(2.0).unwrap();
    assert_eq!(delta_set(&c, 10.0).unwrap(), vec![Complex64::new(0.0, 0.0)]);
    assert_eq!(c.order_type(Complex64::new(0.0, 0.0)).unwrap(), OrderType::OmegaDown);
    assert_eq!(c.order_type(Complex64::new(1.0, 0.0)).unwrap(), OrderType::Finite(0));
    let f = fiber(&c, Complex64::new(0.0, 0.0), (-30.0, 0.0)).unwrap();
    let heights: Vec<f64> = f.points.iter().map(|p| p.1).collect();
    assert_eq!(heights, vec![-25.0, -16.0, -9.0, -4.0, -1.0]);
}
