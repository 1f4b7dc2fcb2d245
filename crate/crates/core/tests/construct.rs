use std::sync::Arc;

use heisenberg_qc::construct::{construct, lambda, xi0_integral, UnitJacobian, XiRule};
use heisenberg_qc::contact::{ContactField, PotentialField};
use heisenberg_qc::flow::ComposedMap;
use heisenberg_qc::iterate::{iterate, IterationConfig};
use heisenberg_qc::potential::{regularize, Measure};
use heisenberg_qc::{Point, QuadratureConfig};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = Point> {
    (-2.0..2.0f64, -2.0..2.0f64, -3.0..3.0f64).prop_map(|(x, y, t)| Point::new(x, y, t))
}

#[test]
fn rules_integrate_xi0_exactly() {
    for rule in [XiRule::product(4, 8, 4), XiRule::monte_carlo(4, 64, 3)] {
        let total: f64 = rule.weights.iter().sum();
        assert!((total / xi0_integral() - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn identity_lambda_is_proportional_to_distance(p in point(), q in point()) {
        prop_assume!(p.dist(q) > 1e-6);
        let c0 = xi0_integral().powf(0.25);
        let l = lambda(&UnitJacobian, p, q, &XiRule::default());
        prop_assert!((l / p.dist(q) / c0 - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn lambda_is_symmetric_for_identity(p in point(), q in point()) {
        let rule = XiRule::default();
        let a = lambda(&UnitJacobian, p, q, &rule);
        let b = lambda(&UnitJacobian, q, p, &rule);
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-300));
    }
}

fn psi() -> Measure {
    let cfg = QuadratureConfig { grid_resolution: 6, ..QuadratureConfig::default() };
    regularize(&Measure::atom(Point::new(0.5, 0.3, 0.2), 0.1), 2.0, &cfg).unwrap()
}

#[test]
fn constructed_field_vanishes_at_origin() {
    let phi = construct(&ComposedMap::identity(), &psi(), XiRule::default(), 1e-4).unwrap();
    let v = ContactField::new(PotentialField::from_arc(Arc::new(phi), 1e-4)).eval(Point::ORIGIN);
    assert!(v.iter().all(|c| c.abs() < 1e-9), "{v:?}");
}

#[test]
fn zero_density_iteration_is_trivial() {
    let cfg = IterationConfig { m: 2, ..IterationConfig::default() };
    let res = iterate(&ComposedMap::identity(), &Measure::default(), &cfg).unwrap();
    assert_eq!(res.steps.len(), 2);
    for s in &res.steps {
        assert!(s.v0_norm < 1e-12);
        assert!((s.p0_gauge - 1.0).abs() < 1e-9);
    }
}

#[test]
fn iteration_rejects_zero_steps() {
    let cfg = IterationConfig { m: 0, ..IterationConfig::default() };
    assert!(iterate(&ComposedMap::identity(), &psi(), &cfg).is_err());
}
