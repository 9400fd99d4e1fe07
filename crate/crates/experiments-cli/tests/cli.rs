use std::fs;
use std::path::Path;
use std::process::Command;

use euler_core::GasParams;
use experiments::*;
use proptest::prelude::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hyperwedge"))
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn first_line(p: &Path) -> String {
    fs::read_to_string(p).unwrap().lines().next().unwrap().to_string()
}

#[test]
fn config_parsing() {
    let cfg = ExperimentConfig::from_json(r#"{"tau_grid":[0.1,0.05],"scenario":"riemann-pair","params":{"below":[1,0,0,0.17857142857142858],"above":[1.001,0,0,0.179]}}"#).unwrap();
    assert_eq!(cfg.scenario, Scenario::RiemannPair);
    assert_eq!(cfg.engine, EngineSettings::default());
    let cfg = ExperimentConfig::wedge_default();
    let text = serde_json::to_string(&cfg).unwrap();
    assert_eq!(ExperimentConfig::from_json(&text).unwrap(), cfg);
    for bad in [
        r#"{"tau_grid":[0.1],"scenario":"wedge","extra":1}"#,
        r#"{"tau_grid":[0.1],"scenario":"wedge","engine":{"nu":10,"typo":1}}"#,
        r#"{"tau_grid":[0.0],"scenario":"wedge"}"#,
        r#"{"tau_grid":[2.5],"scenario":"wedge"}"#,
        r#"{"tau_grid":[],"scenario":"wedge"}"#,
        r#"{"tau_grid":[0.1],"scenario":"nozzle"}"#,
        r#"{"tau_grid":[0.1],"scenario":"wedge","params":{"amplitude":0.1}}"#,
        r#"{"tau_grid":[0.1],"scenario":"riemann-pair"}"#,
    ] {
        let e = ExperimentConfig::from_json(bad).unwrap_err();
        assert_eq!(e.exit_code(), 2, "{bad}");
    }
}

#[test]
fn special_trivial_and_closed_forms() {
    let g = GasParams::new(1.4, 2.0, 0.0).unwrap();
    let r = special_report(0.0, &[0.1, 0.05], 1.0, &g).unwrap();
    assert!(r.fit.errors.iter().all(|e| *e == 0.0));
    assert!(r.fit.slope.is_nan());
    assert_eq!(special_error_coefficient(2.0), 2.125);
    let (lb, la) = literal_special_data(1e-3, &g);
    assert!((la.rho - lb.rho - 2e-3).abs() < 1e-15);
    let (ub, ua) = special_data(1e-3, &g).unwrap();
    assert_eq!(ub, lb);
    assert!((ua.p - ub.p - 5e-4).abs() < 1e-15);
    let r = special_report(1e-3, &[0.05], 1.0, &g).unwrap();
    let pt = &r.points[0];
    assert!(pt.limit.strengths[1..].iter().all(|s| s.abs() < 1e-14));
    // vanishes on identical fans and reproduces the reported error at x = 1
    let g1 = g.with_tau(0.05);
    assert_eq!(fan_l1_distance(&pt.scaled, &g1, &pt.scaled, &g1, 1.0), 0.0);
    let d = fan_l1_distance(&pt.limit, &g, &pt.scaled, &g1, 1.0);
    assert!((d - pt.error).abs() < 1e-18);
}

#[test]
fn special_coefficients_tighten() {
    let g = GasParams::new(1.4, 2.0, 0.0).unwrap();
    let path = [(1e-2, 0.1), (3e-3, 0.05), (1e-3, 0.025), (3e-4, 0.0125)];
    let mut prev = [f64::INFINITY; 3];
    for (eps, tau) in path {
        let r = special_report(eps, &[tau], 1.0, &g).unwrap();
        let get = |p: &str| r.rows.iter().find(|x| x.name.starts_with(p)).unwrap().rel_err;
        let now = [get("sigma_alpha1_over_eps"), get("sigma_beta1_correction"), get("sigma_beta4")];
        for k in 0..3 {
            assert!(now[k] < prev[k], "eps {eps}: {now:?} vs {prev:?}");
        }
        prev = now;
    }
}

#[test]
fn convergence_and_stability_reports() {
    let cfg = ExperimentConfig::wedge_default();
    let fit = run_convergence(&cfg).unwrap();
    assert_eq!(fit.taus, cfg.tau_grid);
    assert!(fit.errors.iter().all(|e| *e > 0.0));
    assert!(fit.slope > 1.9 && fit.slope < 2.1, "{}", fit.slope);
    assert!(fit.plateau_spread() < 0.25);
    let runs = simulate(&cfg).unwrap();
    for t in &runs {
        assert_eq!(station_distance(t, t, 1.0).unwrap(), 0.0);
    }
    let stab = ExperimentConfig { scenario: Scenario::Stability, tau_grid: vec![0.05], ..cfg.clone() };
    let r = run_stability(&stab).unwrap();
    assert_eq!(r.cases[0].name, "zero");
    assert_eq!(r.cases[0].output_delta, 0.0);
    assert_eq!(r.cases.len(), 1 + 3 * stab.params.cases);
    assert!(r.cases.iter().all(|c| c.ratio.is_finite() && c.ratio >= 0.0));
    // measured maximum 6.06 on the default grid, frozen with margin
    assert!(r.lipschitz > 0.0 && r.lipschitz < 8.0, "{}", r.lipschitz);
    assert!(run_stability(&cfg).is_err());
    assert!(run_convergence(&stab).is_err());
}

#[test]
fn csv_writers() {
    let fit = fit_rate(&[0.5, 0.25], &[0.125, 0.03125], 1.0).unwrap();
    let mut buf = vec![];
    write_rate_csv(&fit, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), "tau,E,E_over_eps_x_tau2\n0.5,0.125,0.5\n0.25,0.03125,0.5\n");
    let mut buf = vec![];
    write_coeffs_csv(&[CoefficientRow::new("c".into(), 0.3, 0.25)], &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("name,measured,closed_form,rel_err\nc,0.3,0.25,0.19999"));
    assert_eq!(CoefficientRow::new("z".into(), -0.5, 0.0).rel_err, 0.5);
}

proptest! {
    #[test]
    fn fit_recovers_power_laws(c in 1e-3..10.0f64, k in 0.5..3.0f64, t0 in 0.05..0.2f64) {
        let taus = [t0, t0 / 2.0, t0 / 4.0];
        let errs: Vec<f64> = taus.iter().map(|t| c * t.powf(k)).collect();
        let fit = fit_rate(&taus, &errs, 1.0).unwrap();
        prop_assert!((fit.slope - k).abs() < 1e-9);
        prop_assert!((fit.intercept - c.ln()).abs() < 1e-8);
    }
}

#[test]
fn cli_exit_codes_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let wedge = write(d, "w.json", r#"{"tau_grid":[0.1,0.05,0.025],"scenario":"wedge"}"#);
    let out = d.join("cv");
    let st = bin().args(["converge", "--config"]).arg(&wedge).arg("--out").arg(&out).status().unwrap();
    assert_eq!(st.code(), Some(0));
    assert_eq!(first_line(&out.join("rate.csv")), "tau,E,E_over_eps_x_tau2");

    let bad = write(d, "bad.json", r#"{"tau_grid":[0.1],"scenario":"wedge","oops":true}"#);
    let st = bin().args(["converge", "--config"]).arg(&bad).arg("--out").arg(&out).status().unwrap();
    assert_eq!(st.code(), Some(2));
    let st = bin().args(["stability", "--config"]).arg(&wedge).arg("--out").arg(&out).status().unwrap();
    assert_eq!(st.code(), Some(2));
    let st = bin().args(["converge", "--config"]).arg(d.join("missing.json")).arg("--out").arg(&out).status().unwrap();
    assert_eq!(st.code(), Some(2));

    let stab = write(d, "s.json", r#"{"tau_grid":[0.05],"scenario":"stability","params":{"cases":2}}"#);
    let so = d.join("st");
    let st = bin().args(["stability", "--config"]).arg(&stab).arg("--out").arg(&so).status().unwrap();
    assert_eq!(st.code(), Some(0));
    assert_eq!(first_line(&so.join("stability.csv")), "case,input_delta,output_delta,ratio");

    let sp = d.join("sp");
    let st = bin()
        .args(["special", "--eps", "1e-3", "--tau", "0.1,0.05", "--gamma", "1.4", "--a", "2", "--x", "1", "--out"])
        .arg(&sp)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    assert_eq!(first_line(&sp.join("coeffs.csv")), "name,measured,closed_form,rel_err");
    assert_eq!(fs::read_to_string(sp.join("rate.csv")).unwrap().lines().count(), 3);
    let st = bin().args(["special", "--eps", "0.5", "--tau", "0.1", "--out"]).arg(&sp).status().unwrap();
    assert_eq!(st.code(), Some(2));

    let r = bin()
        .args(["riemann", "--below", "1,0,0,0.17857142857142858", "--above", "1.001,0,0.001,0.1787", "--tau", "0.05"])
        .args(["--gamma", "1.4", "--a", "2", "--theta", "-0.01"])
        .output()
        .unwrap();
    assert_eq!(r.status.code(), Some(0));
    let text = String::from_utf8(r.stdout).unwrap();
    assert!(text.starts_with("family,strength,lower_speed,upper_speed\n1,"));
    assert!(text.contains("boundary_state,"));
    let st = bin().args(["riemann", "--below", "1,0,0,0.1786", "--above", "1.3,0,0,0.1786"]).status().unwrap();
    assert_eq!(st.code(), Some(3));
    let st = bin().args(["riemann", "--below", "1,0,0", "--above", "1,0,0,0.1786"]).status().unwrap();
    assert_eq!(st.code(), Some(2));
}

#[test]
fn simulate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cfg = write(d, "c.json", r#"{"tau_grid":[0.05],"scenario":"special","engine":{"x_end":0.5},"x_station":0.5}"#);
    let mut outputs = vec![];
    for k in 0..2 {
        let out = d.join(format!("run{k}"));
        let st = bin().args(["simulate", "--config"]).arg(&cfg).arg("--out").arg(&out).status().unwrap();
        assert_eq!(st.code(), Some(0));
        let traj = fs::read(out.join("trajectory_tau0.05.txt")).unwrap();
        let trace = fs::read_to_string(out.join("glimm_tau0.05.csv")).unwrap();
        assert!(trace.starts_with("x,value,event_kind\n"));
        outputs.push((traj, trace));
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert!(text.lines().nth(2).unwrap().starts_with("SLICE x="));
}
