use std::sync::Arc;

use heisenberg_qc::contact::{ContactField, GaussianBump, RadialStretch, TranslationPotential};
use heisenberg_qc::flow::{contact_residual, ComposedMap, FlowMap, Letter};
use heisenberg_qc::{Point, QuadratureConfig};
use proptest::prelude::*;

fn flow<P: heisenberg_qc::contact::Potential + 'static>(p: P, s: f64, steps: usize) -> FlowMap {
    FlowMap::new(Arc::new(ContactField::from_potential(p, &QuadratureConfig::default())), s).with_steps(steps)
}

fn point() -> impl Strategy<Value = Point> {
    (-1.5..1.5f64, -1.5..1.5f64, -1.5..1.5f64).prop_map(|(x, y, t)| Point::new(x, y, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn radial_stretch_contracts_norm_by_power(p in point(), s in -0.8..0.8f64) {
        prop_assume!(p.gauge() > 0.2);
        let q = flow(RadialStretch, s, 128).apply(p).unwrap();
        let expected = p.gauge().powf((-s).exp());
        prop_assert!((q.gauge() - expected).abs() <= 1e-6 * expected);
    }

    #[test]
    fn translation_flow_commutes_with_right_translation(p in point(), q in point()) {
        let h = flow(TranslationPotential { c: [0.3, -0.2, 0.4] }, 0.7, 64);
        let lhs = h.apply(p * q).unwrap();
        let rhs = h.apply(p).unwrap() * q;
        prop_assert!(lhs.euclid_dist(rhs) <= 1e-9 * (1.0 + rhs.t.abs()));
    }

    #[test]
    fn flows_compose_additively(p in point()) {
        let g = GaussianBump { amplitude: 0.5, center: [0.0, 0.2, 0.1], width: 0.7 };
        let whole = flow(g.clone(), 0.6, 240).apply(p).unwrap();
        let half = flow(g, 0.3, 120);
        let twice = half.apply(half.apply(p).unwrap()).unwrap();
        prop_assert!(whole.euclid_dist(twice) <= 1e-8);
    }

    #[test]
    fn gaussian_flow_is_contact(p in point()) {
        let w = ComposedMap::new(vec![Letter::Flow(flow(GaussianBump { amplitude: 0.6, center: [0.2, 0.1, -0.1], width: 0.8 }, 0.5, 64))]);
        let r = contact_residual(&w, p, 1e-5).unwrap();
        prop_assert!(r[0].abs().max(r[1].abs()) <= 1e-5, "{r:?}");
    }
}

#[test]
fn composed_map_inverse_undoes_word() {
    let w = ComposedMap::new(vec![
        Letter::Flow(flow(RadialStretch, 0.4, 64)),
        Letter::Dilation(0.5),
        Letter::Translation(Point::new(0.1, 0.2, -0.3)),
    ]);
    let p = Point::new(0.7, -0.4, 0.2);
    let back = w.apply_inverse(w.apply(p).unwrap()).unwrap();
    assert!(back.euclid_dist(p) < 1e-8, "{back:?}");
}

#[test]
fn trajectory_has_one_row_per_step() {
    let h = flow(RadialStretch, 1.0, 32);
    let rows = h.trajectory(Point::new(0.6, 0.2, 0.3)).unwrap();
    assert_eq!(rows.len(), 33);
    assert_eq!(rows[0].sigma, 0.0);
    assert!((rows[32].sigma - 1.0).abs() < 1e-12);
}
