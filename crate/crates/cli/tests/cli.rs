use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinenv"))
        .arg("--output")
        .arg(dir)
        .args(args)
        .env("SPINENV_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout_value(out: &Output, key: &str) -> f64 {
    let text = String::from_utf8_lossy(&out.stdout);
    let line = text.lines().find_map(|l| l.strip_prefix(&format!("{key}="))).expect("key printed");
    line.trim().parse().expect("numeric value")
}

fn csv_body(path: &Path) -> Vec<String> {
    fs::read_to_string(path).unwrap().lines().map(str::to_owned).collect()
}

#[test]
fn esd_with_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["esd"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!((stdout_value(&out, "t_esd") - 0.9037).abs() < 1e-3);
    let lines = csv_body(&dir.path().join("esd.csv"));
    assert!(lines[0].starts_with("# spinenv-cli "));
    assert!(lines[0].contains("N=50"));
    assert_eq!(lines[1], "t_esd");
}

#[test]
fn trace_is_byte_deterministic() {
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["trace", "--set", "time.max=4", "--set", "initial_state=psi-", "--set", "A.h=0.3"];
    assert!(run(d1.path(), &args).status.success());
    assert!(run(d2.path(), &args).status.success());
    let a = fs::read(d1.path().join("trace_psi-.csv")).unwrap();
    let b = fs::read(d2.path().join("trace_psi-.csv")).unwrap();
    assert_eq!(a, b);
    let lines = csv_body(&d1.path().join("trace_psi-.csv"));
    assert_eq!(lines[1], "t,C,C_par,C_anti,rho11,rho22,rho33,rho44,rho14_re,rho14_im,rho23_re,rho23_im");
    assert_eq!(lines.len(), 2 + 401);
    let first: Vec<f64> = lines[2].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(first[0], 0.0);
    assert!((first[1] - 1.0).abs() < 1e-12);
    assert!((first[10] + 0.5).abs() < 1e-12 && first[11] == 0.0, "psi- coherence");
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "N = 30\nJ0 = 0.5\ninitial_state = \"phi-\"\ntime.max = 5.0\n").unwrap();
    let out = run(dir.path(), &["--config", cfg.to_str().unwrap(), "revival"]);
    assert!(out.status.success());
    let lines = csv_body(&dir.path().join("revival.csv"));
    assert!(lines[0].contains("N=30 J=1 h=0 J0=0.5"));
    assert!(lines[0].contains("initial_state=phi-"));
    let esd: f64 = lines[2].split(',').next().unwrap().parse().unwrap();
    assert!(esd > 1.5 && esd < 3.0, "{esd}");
}

#[test]
fn bad_configuration_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "Jz = 1.0\n").unwrap();
    assert_eq!(run(dir.path(), &["--config", cfg.to_str().unwrap(), "esd"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["--config", "/nonexistent/x.toml", "esd"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["--set", "time.step=0", "esd"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["--set", "mode=thermodynamic", "--set", "h0=0.5", "esd"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["figure", "7"]).status.code(), Some(1));
}

#[test]
fn verify_passes_and_caps_size() {
    let dir = tempfile::tempdir().unwrap();
    let ok = run(dir.path(), &["verify", "--N", "4", "--set", "A.h=0.3", "--set", "J0y=0.4"]);
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stderr));
    assert_eq!(csv_body(&dir.path().join("verify.csv")).len(), 2 + 4);
    assert_eq!(run(dir.path(), &["verify", "--N", "13"]).status.code(), Some(3));
}

#[test]
fn figure_two_writes_four_traces_and_scripts() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["--plot", "figure", "2", "--set", "time.max=3"]);
    assert!(out.status.success());
    for r in ["0.5", "0.4", "0.2", "0.125"] {
        let csv = dir.path().join(format!("fig2_J0_{r}.csv"));
        assert!(csv_body(&csv)[0].contains(&format!("J0={r} ")));
        let script = fs::read_to_string(csv.with_extension("py")).unwrap();
        assert!(script.contains(&format!("fig2_J0_{r}.csv")));
    }
}

#[test]
fn thermodynamic_mode_matches_closed_form_esd() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["esd", "--set", "mode=thermodynamic", "--set", "time.max=3"]);
    assert!(out.status.success());
    assert!((stdout_value(&out, "t_esd") - 0.90372).abs() < 1e-4);
}

#[test]
fn sweep_rows_follow_values() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sweep", "--param", "h", "--values", "0.5,1,2", "--set", "N=20", "--set", "time.max=12", "--set", "window=2,12"];
    let out = run(dir.path(), &args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let lines = csv_body(&dir.path().join("sweep_h.csv"));
    assert_eq!(lines[1], "h,t_esd,t_rev,C_a,C_p,diff");
    let firsts: Vec<&str> = lines[2..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(firsts, ["0.5", "1", "2"]);
    for l in &lines[2..] {
        let v: Vec<f64> = l.split(',').skip(3).map(|x| x.parse().unwrap()).collect();
        assert!((v[0] - v[1] - v[2]).abs() < 1e-15);
    }
}

#[test]
fn switching_figure_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(dir.path(), &["figure", "6", "--set", "time.max=10"]).status.success());
    for h in ["1", "2", "10"] {
        let lines = csv_body(&dir.path().join(format!("fig6_hA_{h}.csv")));
        for l in &lines[2..] {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            assert!((2.0 * v[2] - v[4]).abs() < 1e-8);
        }
    }
}
