//! Infinite-chain closed forms against the finite-chain pipeline.

use spinenv::analytic::{
    concurrence_saturated_closed, concurrence_zero_field_closed, envelope_slope, esd_root, gamma,
    required_truncation, thermo_bloch_xy, thermo_sz, transverse_factor_pauli, zeta, ClosedFormConstant,
};
use spinenv::chain::GroundStateCorrelators;
use spinenv::entanglement::{concurrence_trace, time_grid, BellKind};
use spinenv::{SubsystemModel, SubsystemSpec};

fn side(n: usize, h: f64, h0: f64) -> SubsystemSpec<f64> {
    SubsystemSpec::homogeneous(n, 1.0, h, 1.0, h0).unwrap()
}

#[test]
fn zero_field_closed_form_matches_pipeline() {
    let s = side(50, 0.0, 0.0);
    let grid = time_grid(2.0, 0.02).unwrap();
    let trace = concurrence_trace(&s, &s, BellKind::PsiMinus, &grid).unwrap();
    for (&t, &c) in grid.iter().zip(&trace.c) {
        assert!((c - concurrence_zero_field_closed(t, ClosedFormConstant::Corrected)).abs() < 1e-3);
    }
    assert!((trace.t_esd.unwrap() - esd_root::<f64>()).abs() < 1e-6);
}

#[test]
fn finite_chain_gamma_at_two() {
    let m = SubsystemModel::new(side(50, 0.0, 0.0)).unwrap();
    let a = m.bloch_map(2.0).unwrap().a;
    assert!((a[(2, 2)] - 2.0 * gamma(2.0)).abs() < 1e-3);
}

#[test]
fn saturated_closed_forms_match_resonant_pipeline() {
    // the closed forms assume the qubit shares the chain field
    let grid = time_grid(20.0, 0.05).unwrap();
    let s = side(50, 5.0, 5.0);
    let anti = concurrence_trace(&s, &s, BellKind::PsiPlus, &grid).unwrap();
    let par = concurrence_trace(&s, &s, BellKind::PhiPlus, &grid).unwrap();
    for (i, &t) in grid.iter().enumerate() {
        let (ca, cp) = concurrence_saturated_closed(t, None);
        assert!((anti.c[i] - ca).abs() < 1e-2, "Ca t={t}: {} vs {ca}", anti.c[i]);
        assert!((par.c[i] - cp).abs() < 1e-2, "Cp t={t}: {} vs {cp}", par.c[i]);
    }
}

#[test]
fn saturated_pipeline_is_field_independent_when_resonant() {
    let grid = time_grid(10.0, 0.1).unwrap();
    let lo = side(30, 1.5, 1.5);
    let hi = side(30, 5.0, 5.0);
    let a = concurrence_trace(&lo, &lo, BellKind::PsiPlus, &grid).unwrap();
    let b = concurrence_trace(&hi, &hi, BellKind::PsiPlus, &grid).unwrap();
    for (x, y) in a.c.iter().zip(&b.c) {
        assert!((x - y).abs() < 1e-10);
    }
    assert_eq!(concurrence_saturated_closed(3.0f64, None), concurrence_saturated_closed(3.0f64, None));
}

#[test]
fn saturated_longitudinal_matches_finite_chain() {
    let m = SubsystemModel::new(side(50, 5.0, 5.0)).unwrap();
    let corr = GroundStateCorrelators::saturated(80);
    for &t in &[0.5, 3.0, 9.0, 15.0, 20.0] {
        let map = m.bloch_map(t).unwrap();
        let (a_zz, m_z) = thermo_sz(t, &corr, required_truncation(2.0 * t)).unwrap();
        assert!((map.a[(2, 2)] - a_zz).abs() < 1e-3);
        assert!((map.m[2] - m_z).abs() < 1e-3);
        assert!((m_z - 2.0 * zeta(t)).abs() < 1e-12);
    }
}

#[test]
fn transverse_block_matches_finite_chain_with_field() {
    for &h in &[0.0, 0.25, 0.8, 3.0] {
        let m = SubsystemModel::new(side(50, h, h)).unwrap();
        for &t in &[0.7, 4.0, 12.5, 20.0] {
            let a = m.bloch_map(t).unwrap().a;
            let b = thermo_bloch_xy(t, h);
            for i in 0..2 {
                for j in 0..2 {
                    assert!((a[(i, j)] - b[(i, j)]).abs() < 1e-3, "h={h} t={t}");
                }
            }
        }
    }
}

#[test]
fn long_time_power_laws() {
    let transverse = envelope_slope(|t: f64| transverse_factor_pauli(t), 10.0, 40.0, 0.01).unwrap();
    let g = envelope_slope(|t: f64| gamma(t), 10.0, 40.0, 0.01).unwrap();
    assert!((transverse.slope + 1.5).abs() < 0.1, "{}", transverse.slope);
    assert!((g.slope + 3.0).abs() < 0.1, "{}", g.slope);
}

#[test]
fn printed_constant_contradicts_anchor() {
    // -1/2 gives C(0) = 1/2 and an early sudden death near 0.55
    let grid = time_grid(2.0f64, 0.001).unwrap();
    let first_zero = grid
        .iter()
        .copied()
        .find(|&t| concurrence_zero_field_closed(t, ClosedFormConstant::Printed) == 0.0)
        .unwrap();
    assert!((first_zero - 0.55).abs() < 0.02, "{first_zero}");
    assert!((esd_root::<f64>() - first_zero).abs() > 0.3);
}

