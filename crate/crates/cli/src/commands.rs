//! Command implementations.

use rayon::prelude::*;
use spinenv::entanglement::{bell_state, switching_trace, time_averaged, time_grid};
use spinenv::oracle::oracle_concurrence_trace;
use spinenv::{BellKind, ConcurrenceTrace};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::{fmt_opt, Output};
use crate::source;

/// Agreement required between pipeline and oracle in `verify`.
pub const VERIFY_TOLERANCE: f64 = 1e-8;
/// Time span checked by `verify`.
pub const VERIFY_T_MAX: f64 = 3.0;

pub const FIGURES: [&str; 8] = ["2", "3a", "3b", "4a", "4b", "5a", "5b", "6"];

const WEAK_J0: [f64; 4] = [0.5, 0.4, 0.2, 0.125];
const STRONG_J0: [f64; 5] = [3.5, 4.0, 4.5, 5.0, 1.0];
const ESD_J0: [f64; 9] = [0.125, 0.2, 0.4, 0.5, 1.0, 3.5, 4.0, 4.5, 5.0];
const QUBIT_FIELDS: [f64; 7] = [0.8, 0.9, 1.0, 1.1, 1.2, 1.5, 2.0];
const CHAIN_FIELDS: [f64; 7] = [0.8, 0.9, 1.0, 1.1, 1.5, 2.0, 5.0];
const SWITCH_FIELDS: [f64; 3] = [1.0, 2.0, 10.0];

fn meta(cmd: &str, cfg: &ExperimentConfig) -> String {
    format!("command={cmd} | {}", cfg.echo())
}

fn trace_for(cfg: &ExperimentConfig, kind: BellKind) -> Result<ConcurrenceTrace<f64>, CliError> {
    let grid = time_grid(cfg.time.max, cfg.time.step)?;
    Ok(source::pair(cfg)?.trace(&bell_state(kind), &grid)?)
}

fn with(cfg: &ExperimentConfig, keys: &[(&str, f64)]) -> Result<ExperimentConfig, CliError> {
    let mut c = cfg.clone();
    for (k, v) in keys {
        c.set(k, &v.to_string())?;
    }
    c.validate()?;
    Ok(c)
}

fn label(x: f64) -> String {
    x.to_string()
}

#[derive(Debug, Clone, Copy)]
pub struct Averages {
    /// Antiparallel average of a `psi+` input.
    pub c_a: f64,
    /// Parallel average of a `phi+` input.
    pub c_p: f64,
}

pub fn averages(cfg: &ExperimentConfig) -> Result<Averages, CliError> {
    let window = (cfg.window[0], cfg.window[1]);
    let anti = trace_for(cfg, BellKind::PsiPlus)?;
    let par = trace_for(cfg, BellKind::PhiPlus)?;
    Ok(Averages { c_a: time_averaged(&anti, window)?.1, c_p: time_averaged(&par, window)?.0 })
}

pub fn trace(cfg: &ExperimentConfig, out: &Output) -> Result<(), CliError> {
    let kind = cfg.bell()?;
    let t = trace_for(cfg, kind)?;
    let path = out.trace(&format!("trace_{}.csv", kind.as_str()), &meta("trace", cfg), &t)?;
    println!("wrote {}", path.display());
    println!("t_esd={}", opt(t.t_esd));
    println!("t_rev={}", opt(t.t_rev));
    Ok(())
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "none".into(), |v| v.to_string())
}

pub fn esd(cfg: &ExperimentConfig, out: &Output) -> Result<(), CliError> {
    let t = trace_for(cfg, cfg.bell()?)?;
    out.table("esd.csv", &meta("esd", cfg), &["t_esd"], &[vec![fmt_opt(t.t_esd)]])?;
    println!("t_esd={}", opt(t.t_esd));
    Ok(())
}

pub fn revival(cfg: &ExperimentConfig, out: &Output) -> Result<(), CliError> {
    let t = trace_for(cfg, cfg.bell()?)?;
    out.table("revival.csv", &meta("revival", cfg), &["t_esd", "t_rev"], &[vec![fmt_opt(t.t_esd), fmt_opt(t.t_rev)]])?;
    println!("t_rev={}", opt(t.t_rev));
    Ok(())
}

pub fn average(cfg: &ExperimentConfig, out: &Output) -> Result<(), CliError> {
    let a = averages(cfg)?;
    let row = vec![Some(a.c_a.to_string()), Some(a.c_p.to_string()), Some((a.c_a - a.c_p).to_string())];
    out.table("average.csv", &meta("average", cfg), &["C_a", "C_p", "diff"], &[row])?;
    println!("C_a={}", a.c_a);
    println!("C_p={}", a.c_p);
    println!("diff={}", a.c_a - a.c_p);
    Ok(())
}

/// One row per value: `value, t_esd, t_rev, C_a, C_p, diff`.
pub fn sweep(cfg: &ExperimentConfig, out: &Output, param: &str, values: &[String]) -> Result<(), CliError> {
    let configs = values
        .iter()
        .map(|v| {
            let mut c = cfg.clone();
            c.set(param, v)?;
            c.validate()?;
            Ok(c)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let rows = configs
        .par_iter()
        .zip(values)
        .map(|(c, v)| {
            let t = trace_for(c, c.bell()?)?;
            let a = averages(c)?;
            Ok(vec![
                Some(v.clone()),
                fmt_opt(t.t_esd),
                fmt_opt(t.t_rev),
                Some(a.c_a.to_string()),
                Some(a.c_p.to_string()),
                Some((a.c_a - a.c_p).to_string()),
            ])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let header = [param, "t_esd", "t_rev", "C_a", "C_p", "diff"];
    let path = out.table(&format!("sweep_{}.csv", param.replace('.', "_")), &meta("sweep", cfg), &header, &rows)?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn figure(cfg: &ExperimentConfig, out: &Output, id: &str) -> Result<(), CliError> {
    let j = cfg.side('A').j;
    let cmd = format!("figure {id}");
    let mut written = Vec::new();
    match id {
        "2" => {
            for r in WEAK_J0 {
                let c = with(cfg, &[("J0", r * j), ("h", 0.0), ("h0", 0.0)])?;
                let t = trace_for(&c, c.bell()?)?;
                written.push(out.trace(&format!("fig2_J0_{}.csv", label(r)), &meta(&cmd, &c), &t)?);
            }
        }
        "3a" | "3b" => {
            let configs = ESD_J0
                .iter()
                .map(|r| with(cfg, &[("J0", r * j), ("h", 0.0), ("h0", 0.0)]))
                .collect::<Result<Vec<_>, _>>()?;
            let traces = configs
                .par_iter()
                .map(|c| trace_for(c, c.bell()?))
                .collect::<Result<Vec<_>, CliError>>()?;
            let (col, pick): (&str, fn(&ConcurrenceTrace<f64>) -> Option<f64>) =
                if id == "3a" { ("t_esd", |t| t.t_esd) } else { ("t_rev", |t| t.t_rev) };
            let rows: Vec<_> = ESD_J0.iter().zip(&traces).map(|(r, t)| vec![Some(label(*r)), fmt_opt(pick(t))]).collect();
            written.push(out.table(&format!("fig{id}.csv"), &meta(&cmd, cfg), &["J0_over_J", col], &rows)?);
            if id == "3b" {
                for r in STRONG_J0 {
                    let c = with(cfg, &[("J0", r * j), ("h", 0.0), ("h0", 0.0)])?;
                    let t = trace_for(&c, c.bell()?)?;
                    written.push(out.trace(&format!("fig3b_J0_{}.csv", label(r)), &meta(&cmd, &c), &t)?);
                }
            }
        }
        "4a" | "5a" => {
            let (key, values, other) = field_set(id);
            for v in values {
                let c = with(cfg, &[("J0", j), (key, v * j), (other, 0.0)])?;
                let t = trace_for(&c, BellKind::PsiPlus)?;
                written.push(out.trace(&format!("fig{id}_{key}_{}.csv", label(v)), &meta(&cmd, &c), &t)?);
            }
        }
        "4b" | "5b" => {
            let (key, values, other) = field_set(id);
            let configs = values
                .iter()
                .map(|v| with(cfg, &[("J0", j), (key, v * j), (other, 0.0)]))
                .collect::<Result<Vec<_>, _>>()?;
            let avgs = configs.par_iter().map(averages).collect::<Result<Vec<_>, _>>()?;
            let rows: Vec<_> = values
                .iter()
                .zip(&avgs)
                .map(|(v, a)| {
                    vec![Some(label(*v)), Some(a.c_a.to_string()), Some(a.c_p.to_string()), Some((a.c_a - a.c_p).to_string())]
                })
                .collect();
            let x = format!("{key}_over_J");
            written.push(out.table(&format!("fig{id}.csv"), &meta(&cmd, cfg), &[&x, "C_a", "C_p", "diff"], &rows)?);
        }
        "6" => {
            for h_a in SWITCH_FIELDS {
                let mut c = with(cfg, &[("J0", j), ("J0y", 0.0), ("h", 0.0), ("h0", 0.0)])?;
                c.set("A.h", &h_a.to_string())?;
                c.validate()?;
                let (a, b) = (c.side('A').spec()?, c.side('B').spec()?);
                let grid = time_grid(c.time.max, c.time.step)?;
                let s = switching_trace(&a, &b, c.bell()?, &grid)?;
                let rows: Vec<_> = (0..s.trace.len())
                    .map(|i| {
                        let comp = &s.trace.components[i];
                        [s.trace.times[i], s.trace.c[i], comp.upup, comp.updown, s.closed_form[i]]
                            .iter()
                            .map(|x| Some(x.to_string()))
                            .collect()
                    })
                    .collect();
                let header = ["t", "C", "C_upup", "C_updown", "closed_form"];
                written.push(out.table(&format!("fig6_hA_{}.csv", label(h_a)), &meta(&cmd, &c), &header, &rows)?);
                log::info!("h_A = {h_a}: closed-form deviation {:e}, {} switches", s.max_deviation, s.switch_points().len());
            }
        }
        _ => {
            return Err(CliError::Config(format!("unknown figure '{id}', expected one of {}", FIGURES.join(", "))));
        }
    }
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn field_set(id: &str) -> (&'static str, [f64; 7], &'static str) {
    if id.starts_with('4') {
        ("h0", QUBIT_FIELDS, "h")
    } else {
        ("h", CHAIN_FIELDS, "h0")
    }
}

/// Oracle equivalence on `t <= 3` for all four Bell inputs with chains of
/// `n` sites; fails with a numerical diagnostic above [`VERIFY_TOLERANCE`].
pub fn verify(cfg: &ExperimentConfig, out: &Output, n: usize) -> Result<(), CliError> {
    let c = with(cfg, &[("N", n as f64)])?;
    let (a, b) = (c.side('A').spec()?, c.side('B').spec()?);
    let grid = time_grid(VERIFY_T_MAX.min(c.time.max), c.time.step)?;
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for kind in BellKind::ALL {
        let oracle = oracle_concurrence_trace(&a, &b, kind, &grid)?;
        let pipe = spinenv::entanglement::concurrence_trace(&a, &b, kind, &grid)?;
        let d_rho = pipe.states.iter().zip(&oracle.states).map(|(p, o)| p.max_abs_diff(o)).fold(0.0, f64::max);
        let d_c = pipe.c.iter().zip(&oracle.c).map(|(p, o)| (p - o).abs()).fold(0.0, f64::max);
        worst = worst.max(d_rho).max(d_c);
        println!("{kind}: max |rho diff| = {d_rho:e}, max |C diff| = {d_c:e}");
        rows.push(vec![
            Some(kind.as_str().to_string()),
            Some(d_rho.to_string()),
            Some(d_c.to_string()),
            fmt_opt(pipe.t_esd),
            fmt_opt(oracle.t_esd),
        ]);
    }
    let header = ["initial_state", "max_rho_diff", "max_C_diff", "t_esd_pipeline", "t_esd_oracle"];
    out.table("verify.csv", &meta("verify", &c), &header, &rows)?;
    if worst > VERIFY_TOLERANCE {
        return Err(CliError::Numerical(format!("pipeline and oracle differ by {worst:e} (tolerance {VERIFY_TOLERANCE:e})")));
    }
    println!("verify passed: max deviation {worst:e}");
    Ok(())
}
