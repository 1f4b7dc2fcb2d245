use heisenberg_qc::potential::{bump, bump_k, is_admissible, regularize, restrict, LogPotential, Measure, PotentialValue};
use heisenberg_qc::quadrature::polar_integrate;
use heisenberg_qc::{Point, QuadratureConfig};
use proptest::prelude::*;

#[test]
fn scaled_bump_has_unit_integral_and_small_support() {
    let cfg = QuadratureConfig { grid_resolution: 24, ..QuadratureConfig::default() };
    let total = polar_integrate(|p| bump_k(3.0, p), 1.0 / 3.0, &cfg).unwrap();
    assert!((total - 1.0).abs() < 1e-6, "{total}");
    assert_eq!(bump_k(3.0, Point::new(0.34, 0.0, 0.0)), 0.0);
    assert!(bump(Point::new(0.0, 0.0, 0.9)) > 0.0);
}

#[test]
fn atoms_give_signed_poles() {
    let a = Point::new(0.5, 0.3, 0.2);
    let plus = LogPotential::new(Measure::atom(a, 1.0)).unwrap();
    let minus = LogPotential::new(Measure::atom(a, -1.0)).unwrap();
    assert_eq!(plus.eval(a), PotentialValue::PlusInfinity);
    assert_eq!(minus.eval(a), PotentialValue::MinusInfinity);
    let q = Point::new(-0.2, 0.1, 0.7);
    let v = plus.eval(q).finite().unwrap();
    assert!((v + q.dist(a).ln()).abs() < 1e-14);
}

#[test]
fn empty_measure_is_not_admissible() {
    let rep = is_admissible(&Measure::default(), 1e-3);
    assert!(!rep.admissible);
    assert!(is_admissible(&Measure::atom(Point::ORIGIN, 0.5), 1e-3).admissible);
}

#[test]
fn restriction_drops_far_atoms() {
    let mu = Measure::atom(Point::new(3.0, 0.0, 0.0), 1.0);
    assert_eq!(restrict(&mu, 2.0).total_mass(), 0.0);
    assert_eq!(restrict(&mu, 4.0).total_mass(), 1.0);
}

#[test]
fn measure_json_round_trips() {
    let mu = Measure::atom(Point::new(0.1, -0.2, 0.3), 0.75);
    assert_eq!(Measure::from_json(&mu.to_json()).unwrap(), mu);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn regularization_preserves_mass(x in -1.0..1.0f64, y in -1.0..1.0f64, t in -1.0..1.0f64, m in -2.0..2.0f64, k in 1.0..4.0f64) {
        prop_assume!(m.abs() > 1e-3);
        let cfg = QuadratureConfig { grid_resolution: 8, ..QuadratureConfig::default() };
        let psi = regularize(&Measure::atom(Point::new(x, y, t), m), k, &cfg).unwrap();
        prop_assert!((psi.total_mass() - m).abs() <= 1e-10 * m.abs());
    }

    #[test]
    fn potential_is_left_invariant(a in -1.0..1.0f64, b in -1.0..1.0f64, c in -1.0..1.0f64, qx in -2.0..2.0f64, qt in -2.0..2.0f64) {
        // Lambda of a translated measure is the translated Lambda.
        let shift = Point::new(a, b, c);
        let atom = Point::new(0.4, -0.1, 0.3);
        let q = Point::new(qx, 0.5, qt);
        prop_assume!(q.dist(atom) > 1e-3);
        let base = LogPotential::new(Measure::atom(atom, 1.3)).unwrap().eval(q).finite().unwrap();
        let moved = LogPotential::new(Measure::atom(shift * atom, 1.3)).unwrap().eval(shift * q).finite().unwrap();
        prop_assert!((base - moved).abs() <= 1e-10);
    }
}
