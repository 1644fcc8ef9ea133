//! Acceptance criteria 1-8, one PASS/FAIL line each.
//!
//! Run with `cargo test -p spinenv --test acceptance -- --nocapture` to see
//! the report.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinenv::analytic::{
    self, concurrence_zero_field_closed, envelope_slope, gamma, linear_fit, transverse_factor_pauli,
    ClosedFormConstant, ThermodynamicSubsystem,
};
use spinenv::entanglement::{
    bell_state, concurrence_trace, switching_trace, time_averaged, time_grid, BellKind, PairModel,
};
use spinenv::oracle::oracle_concurrence_trace;
use spinenv::{ChannelTensor, SubsystemModel, SubsystemSpec};

// pinned tolerances
const ESD_TARGET: f64 = 0.9037;
const ESD_TOL: f64 = 1e-3;
const ESD_RUNTIME: Duration = Duration::from_secs(10);
const CLOSED_FORM_TOL: f64 = 1e-3;
const THERMO_TOL: f64 = 1e-3;
const ORACLE_TOL: f64 = 1e-8;
const ORACLE_RUNTIME: Duration = Duration::from_secs(300);
const REVIVAL_REL_TOL: f64 = 0.15;
const R2_MIN: f64 = 0.95;
const FLUX_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const CHOI_FLOOR: f64 = -1e-8;
const DISJOINT_TOL: f64 = 1e-12;
const SWITCH_TOL: f64 = 1e-8;
const SLOPE_TOL: f64 = 0.1;

const N: usize = 50;
const WINDOW: (f64, f64) = (10.0, 45.0);

fn side(n: usize, j0: f64, h: f64, h0: f64) -> SubsystemSpec<f64> {
    SubsystemSpec::homogeneous(n, 1.0, h, j0, h0).unwrap()
}

fn report(id: u32, name: &str, pass: bool, detail: String) -> bool {
    println!("criterion {id} [{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}

fn criterion_1() -> bool {
    let start = Instant::now();
    let s = side(N, 1.0, 0.0, 0.0);
    let grid = time_grid(2.0, 0.01).unwrap();
    let trace = concurrence_trace(&s, &s, BellKind::PhiPlus, &grid).unwrap();
    let elapsed = start.elapsed();
    let t = trace.t_esd;
    let pass = matches!(t, Some(t) if (t - ESD_TARGET).abs() <= ESD_TOL) && elapsed < ESD_RUNTIME;
    report(1, "t_ESD reproduction", pass, format!("t_ESD = {t:?} (target {ESD_TARGET} +- {ESD_TOL}), {elapsed:.2?}"))
}

fn criterion_2() -> bool {
    let s = side(N, 1.0, 0.0, 0.0);
    let grid = time_grid(2.0, 0.01).unwrap();
    let mut worst_c = 0.0f64;
    for kind in BellKind::ALL {
        let trace = concurrence_trace(&s, &s, kind, &grid).unwrap();
        for (&t, &c) in grid.iter().zip(&trace.c) {
            worst_c = worst_c.max((c - concurrence_zero_field_closed(t, ClosedFormConstant::Corrected)).abs());
        }
    }

    // The transverse block and A_zz depend on the flux coefficients alone and
    // are compared at every field. m_z also carries the chain correlators,
    // which are size independent only at half filling and saturation.
    let mut worst_b = 0.0f64;
    let thermo_grid = time_grid(20.0, 0.05).unwrap();
    for &(h, full_map) in &[(0.0, true), (0.3, false), (1.5, true)] {
        let finite = SubsystemModel::new(side(N, 1.0, h, h)).unwrap();
        let thermo = ThermodynamicSubsystem::new(&side(N, 1.0, h, h), 20.0).unwrap();
        for &t in &thermo_grid {
            let (f, th) = (finite.bloch_map(t).unwrap(), thermo.bloch_map(t).unwrap());
            let d = if full_map { f.max_abs_diff(&th) } else { (f.a - th.a).amax() };
            worst_b = worst_b.max(d);
        }
    }
    let pass = worst_c <= CLOSED_FORM_TOL && worst_b <= THERMO_TOL;
    report(
        2,
        "analytic/numeric agreement",
        pass,
        format!("closed-form C max dev {worst_c:.2e} (t <= 2), Bloch factors max dev {worst_b:.2e} (t <= 20)"),
    )
}

fn criterion_3() -> bool {
    let start = Instant::now();
    let grid = time_grid(3.0, 0.1).unwrap();
    let mut worst = 0.0f64;
    let mut cases = 0;
    for &j0 in &[0.5, 1.0, 3.0] {
        for anisotropic in [false, true] {
            for &h in &[0.0, 0.5, 2.0] {
                let mut s = side(6, j0, h, 0.0);
                if anisotropic {
                    s = s.with_qubit_coupling(j0, 0.0).unwrap();
                }
                for kind in BellKind::ALL {
                    let exact = oracle_concurrence_trace(&s, &s, kind, &grid).unwrap();
                    let ff = concurrence_trace(&s, &s, kind, &grid).unwrap();
                    for (a, b) in exact.c.iter().zip(&ff.c) {
                        worst = worst.max((a - b).abs());
                    }
                    cases += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = worst <= ORACLE_TOL && elapsed < ORACLE_RUNTIME;
    report(3, "oracle equivalence", pass, format!("{cases} cases, max |dC| = {worst:.2e}, {elapsed:.2?}"))
}

fn esd_and_revival(j0: f64, t_max: f64, step: f64) -> (Option<f64>, Option<f64>) {
    let s = side(N, j0, 0.0, 0.0);
    let grid = time_grid(t_max, step).unwrap();
    let trace = concurrence_trace(&s, &s, BellKind::PhiPlus, &grid).unwrap();
    (trace.t_esd, trace.t_rev)
}

fn criterion_4() -> bool {
    let mut ok = true;
    let mut prev = f64::INFINITY;
    let mut parts = Vec::new();
    for &j0 in &[3.5, 4.0, 4.5, 5.0] {
        let (_, rev) = esd_and_revival(j0, 4.0, 0.002);
        let expected = std::f64::consts::PI / j0;
        match rev {
            Some(r) => {
                ok &= ((r - expected) / expected).abs() <= REVIVAL_REL_TOL && r < prev;
                prev = r;
                parts.push(format!("J0={j0}: {r:.4} (pi/J0 = {expected:.4})"));
            }
            None => {
                ok = false;
                parts.push(format!("J0={j0}: none"));
            }
        }
    }
    report(4, "revival scaling", ok, parts.join(", "))
}

fn criterion_5() -> bool {
    let values = [0.125, 0.2, 0.4, 0.5, 1.0, 3.5, 4.0, 4.5, 5.0];
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut missing = Vec::new();
    for &j0 in &values {
        match esd_and_revival(j0, 45.0, 0.01).0 {
            Some(t) => {
                xs.push(f64::log10(j0));
                ys.push(t.log10());
            }
            None => missing.push(j0),
        }
    }
    if !missing.is_empty() || xs.len() < 3 {
        return report(5, "quasi-linear trends", false, format!("no sudden death for J0 = {missing:?}"));
    }
    let all = linear_fit(&xs, &ys).unwrap();
    let split = xs.iter().position(|&x| x >= 0.0).unwrap();
    let weak = linear_fit(&xs[..=split], &ys[..=split]).unwrap();
    let strong = linear_fit(&xs[split..], &ys[split..]).unwrap();
    let pass = all.r_squared >= R2_MIN && weak.slope.abs() > strong.slope.abs();
    let t_esd: Vec<String> = ys.iter().map(|y| format!("{:.4}", 10f64.powf(*y))).collect();
    report(
        5,
        "quasi-linear trends",
        pass,
        format!(
            "R^2 = {:.4}, slope {:.3}; J0<1 slope {:.3}, J0>1 slope {:.3}; t_ESD = [{}]",
            all.r_squared,
            all.slope,
            weak.slope,
            strong.slope,
            t_esd.join(", ")
        ),
    )
}

fn averages(a: &SubsystemSpec<f64>) -> (f64, f64) {
    let grid = time_grid(WINDOW.1, 0.02).unwrap();
    let anti = concurrence_trace(a, a, BellKind::PsiPlus, &grid).unwrap();
    let par = concurrence_trace(a, a, BellKind::PhiPlus, &grid).unwrap();
    let ca = time_averaged(&anti, WINDOW).unwrap().1;
    let cp = time_averaged(&par, WINDOW).unwrap().0;
    (ca, cp)
}

fn criterion_6() -> bool {
    let hs = [0.8, 0.9, 1.0, 1.1, 1.5, 2.0, 5.0];
    let diffs: Vec<f64> = hs
        .iter()
        .map(|&h| {
            let (ca, cp) = averages(&side(N, 1.0, h, 0.0));
            ca - cp
        })
        .collect();
    let best = (0..hs.len()).max_by(|&i, &j| diffs[i].total_cmp(&diffs[j])).unwrap();
    let pass = hs[best] == 1.0;
    let table: Vec<String> = hs.iter().zip(&diffs).map(|(h, d)| format!("{h}:{d:.4}")).collect();
    report(6, "QPT peak", pass, format!("Ca-Cp by h/J = [{}], max at {}", table.join(", "), hs[best]))
}

fn criterion_7() -> bool {
    let h0s = [0.8, 0.9, 1.0, 1.1, 1.2, 1.5, 2.0];
    let vals: Vec<(f64, f64)> = h0s.iter().map(|&h0| averages(&side(N, 1.0, 0.0, h0))).collect();
    let monotone = vals.windows(2).all(|w| w[1].0 > w[0].0);
    let dominant = vals.iter().all(|(ca, cp)| ca >= cp);
    let table: Vec<String> = h0s.iter().zip(&vals).map(|(h, (a, p))| format!("{h}:{a:.4}/{p:.4}")).collect();
    report(
        7,
        "field protection",
        monotone && dominant,
        format!("Ca/Cp by h0/J = [{}]; monotone {monotone}, Ca >= Cp {dominant}", table.join(", ")),
    )
}

fn criterion_8() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut flux = 0.0f64;
    let mut trace_def = 0.0f64;
    let mut choi_min = f64::INFINITY;
    let mut ca_minus_cp = f64::INFINITY;
    let mut disjoint = 0.0f64;
    let grid = time_grid(6.0, 0.25).unwrap();
    for _ in 0..100 {
        let n = rng.gen_range(4..=20);
        let j = rng.gen_range(0.5..1.5);
        let h = rng.gen_range(-2.0..2.0);
        let j0 = rng.gen_range(0.1..3.0);
        let h0 = rng.gen_range(-2.0..2.0);
        let s = SubsystemSpec::homogeneous(n, j, h, j0, h0).unwrap();
        let model = SubsystemModel::new(s.clone()).unwrap();
        for &t in &grid {
            let c = model.coefficients(t);
            let (fx, fy): (f64, f64) = c.flux();
            flux = flux.max((fx - 1.0).abs()).max((fy - 1.0).abs());
            let k: ChannelTensor<f64> = spinenv::channel::channel_superop(&model.bloch_map(t).unwrap()).unwrap();
            trace_def = trace_def.max(k.trace_defect());
            choi_min = choi_min.min(k.min_choi_eigenvalue());
        }
        let pair = PairModel::new(model.clone(), model);
        for &t in &grid {
            let a = pair.components_at(&bell_state(BellKind::PsiPlus), t).unwrap().concurrence;
            let p_state = pair.state_at(&bell_state(BellKind::PhiPlus), t).unwrap();
            let p = spinenv::entanglement::concurrence_components(&p_state).concurrence;
            ca_minus_cp = ca_minus_cp.min(a - p);
            disjoint = disjoint.max(p_state.element(2, 3).norm()).max(p_state.element(3, 2).norm());
        }
    }

    // anisotropic switching against its closed form
    let mut switch_dev = 0.0f64;
    let sgrid = time_grid(20.0, 0.05).unwrap();
    for &(ja, jb, ha, hb) in &[(1.0, 1.0, 0.0, 0.0), (0.5, 2.0, 1.0, 2.0), (1.0, 1.0, 10.0, 0.5)] {
        let a = side(N, ja, ha, 0.0).with_qubit_coupling(ja, 0.0).unwrap();
        let b = side(N, jb, hb, 0.0).with_qubit_coupling(jb, 0.0).unwrap();
        for kind in [BellKind::PhiPlus, BellKind::PsiMinus] {
            match switching_trace(&a, &b, kind, &sgrid) {
                Ok(sw) => switch_dev = switch_dev.max(sw.max_deviation),
                Err(_) => switch_dev = f64::INFINITY,
            }
        }
    }

    // long-time envelopes of the infinite-chain factors
    let transverse = envelope_slope(|t: f64| transverse_factor_pauli(t), 10.0, 40.0, 0.01).unwrap().slope;
    let gam = envelope_slope(|t: f64| gamma(t), 10.0, 40.0, 0.01).unwrap().slope;

    let checks = [
        flux <= FLUX_TOL,
        trace_def <= TRACE_TOL,
        choi_min >= CHOI_FLOOR,
        ca_minus_cp >= -1e-12,
        disjoint <= DISJOINT_TOL,
        switch_dev <= SWITCH_TOL,
        (transverse + 1.5).abs() <= SLOPE_TOL,
        (gam + 3.0).abs() <= SLOPE_TOL,
    ];
    report(
        8,
        "property suites",
        checks.iter().all(|&c| c),
        format!(
            "flux {flux:.1e}, trace {trace_def:.1e}, Choi min {choi_min:.1e}, min(Ca-Cp) {ca_minus_cp:.1e}, \
             rho23 leak {disjoint:.1e}, switching {switch_dev:.1e}, slopes {transverse:.3}/{gam:.3}"
        ),
    )
}

fn main() {
    let _ = analytic::esd_root::<f64>();
    let results = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, &p)| !p).map(|(i, _)| i + 1).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("acceptance: all 8 criteria pass");
}
