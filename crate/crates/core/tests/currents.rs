use duplex_em::algebra::Complex;
use duplex_em::cavity::{CavityModel, Convention, Grid, ModeState};
use duplex_em::constants::PhysicalConstants;
use duplex_em::currents::{
    charge_ratio_estimate, continuity_residual, lagrange_residual, noether_charge, q2_from_analyticity,
    quantized_current, spirality, ClosedFormCurrent, CurrentField, FieldFunctionSet, ModeFunction, Perturbed, PmSign,
    PolyTrigMode,
};
use std::sync::Arc;

fn model(n: usize) -> CavityModel {
    CavityModel::uniform(1.0, 1.0, n, 1.0, PhysicalConstants::natural()).unwrap()
}

fn state() -> ModeState {
    ModeState::new(
        vec![Complex::new(0.4, -0.2), Complex::new(-0.3, 0.5)],
        vec![Complex::new(0.1, 0.7), Complex::new(0.6, 0.2)],
    )
    .unwrap()
}

fn set() -> FieldFunctionSet {
    FieldFunctionSet::maxwellian(model(2), &state(), PmSign::Plus, Convention::SecularFree).unwrap()
}

#[test]
fn closed_forms_match_field_functions() {
    let cf = ClosedFormCurrent::new(model(2), state()).unwrap();
    let s = set();
    for (z, t) in [(0.1, 0.0), (0.45, 0.7), (0.9, 2.3)] {
        let (a, b) = (cf.current(z, t), s.current(z, t));
        for (x, y) in [(a.j3_1, b.j3_1), (a.j3_2, b.j3_2), (a.j4_1, b.j4_1), (a.j4_2, b.j4_2)] {
            assert!((x - y).norm() <= 1e-10 * x.norm().max(1.0), "{x} vs {y}");
        }
    }
}

#[test]
fn perturbation_shows_up_as_rate_over_c() {
    let m = model(2);
    let grid = Grid::for_model(&m, 24, 24);
    let rate = 0.25;
    let c = m.constants.c;
    let p = Perturbed {
        inner: ClosedFormCurrent::new(m, state()).unwrap(),
        rate,
    };
    let r = continuity_residual(&p, &grid).unwrap();
    assert!((r - rate / c).abs() < 1e-9, "residual {r}");
}

#[test]
fn lagrange_equation_holds_with_gauge_factor() {
    let s = set();
    let g = set().with_gauge(0.7, 1.9);
    for (z, t) in [(0.2, 0.1), (0.6, 1.4)] {
        assert!(lagrange_residual(&s, z, t) < 1e-10);
        assert!(lagrange_residual(&g, z, t) < 1e-10);
    }
}

#[test]
fn analyticity_charge_scales_q2() {
    let s = set();
    let t = 0.37;
    let (v, energy) = (0.3, 2.0);
    let q = noether_charge(&s, t).unwrap();
    let a = q2_from_analyticity(&s, t, v, energy).unwrap();
    let k = s.model.constants;
    let want = v * energy / (k.hbar * k.c) * q.q2.abs();
    assert!((a.norm() - want).abs() <= 1e-10 * want.max(1.0), "{} vs {want}", a.norm());
}

#[test]
fn zero_field_has_zero_charge() {
    let s = FieldFunctionSet::maxwellian(model(2), &ModeState::zeros(2), PmSign::Minus, Convention::SecularFree).unwrap();
    let q = noether_charge(&s, 0.5).unwrap();
    assert_eq!((q.q1, q.q2), (0.0, 0.0));
}

#[test]
fn spirality_is_additive_over_ranges() {
    let s = set();
    let t = 0.8;
    let whole = spirality(&s, t, Some((0.0, 0.9))).unwrap().s4_3;
    let parts = spirality(&s, t, Some((0.0, 0.35))).unwrap().s4_3 + spirality(&s, t, Some((0.35, 0.9))).unwrap().s4_3;
    assert!((whole - parts).abs() < 1e-10 * whole.abs().max(1.0));
    let full = spirality(&s, t, None).unwrap();
    assert_eq!(full.s4_12.len(), 2);
    assert!(full.s4_3.abs() < 1e-10);
}

#[test]
fn poly_trig_modes_have_no_first_sector_space_current() {
    let m = model(1);
    let mode = PolyTrigMode {
        poly: vec![Complex::new(1.0, 0.0), Complex::new(0.2, -0.1), Complex::new(0.05, 0.0)],
        nu: 2.0,
        omega: m.omega(1),
    };
    assert!((mode.omega() - m.omega(1)).abs() == 0.0);
    let s = FieldFunctionSet::new(m, vec![Arc::new(mode) as Arc<dyn ModeFunction>], PmSign::Plus).unwrap();
    for (z, t) in [(0.2, 0.3), (0.7, 1.1)] {
        assert!(s.current(z, t).j3_1.norm() < 1e-12);
    }
}

#[test]
fn quantized_current_needs_three_states() {
    let m = model(1);
    assert!(quantized_current(&m, 2, 0.3, 0.0, 1.0).is_err());
    let q = quantized_current(&m, 4, 0.3, 0.0, 1.0).unwrap();
    assert_eq!(q.dim, 4);
}

#[test]
fn charge_ratio_is_square_root() {
    assert!((charge_ratio_estimate(1.44e4, 1.0).unwrap() - 120.0).abs() < 1e-12);
    assert!(charge_ratio_estimate(1.0, 0.0).is_err());
    assert!(charge_ratio_estimate(-1.0, 1.0).is_err());
}
