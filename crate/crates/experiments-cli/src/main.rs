use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use euler_core::{GasParams, State};
use experiments::{
    run_convergence, run_stability, simulate, special_report, write_coeffs_csv, write_rate_csv, write_stability_csv,
    ExperimentConfig, ExperimentError, Scenario,
};
use front_tracking::{format_float, write_trajectory};
use functionals::{glimm_trace, GlimmWeights};
use riemann::{solve_boundary_riemann, solve_riemann};

#[derive(Parser)]
#[command(name = "hyperwedge", about = "Front tracking for steady supersonic flow past wedges")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Runs the configured scenario for every tau and writes trajectories and Glimm traces.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solves one interior Riemann problem and optionally the boundary problem above it.
    Riemann {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        below: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        above: Vec<f64>,
        #[arg(long, default_value_t = 0.0)]
        tau: f64,
        #[arg(long, default_value_t = 1.4)]
        gamma: f64,
        #[arg(long, default_value_t = 2.0)]
        a: f64,
        /// Wall inclination for the boundary problem issued from the upper state.
        #[arg(long, allow_negative_numbers = true)]
        theta: Option<f64>,
    },
    /// Special-solution coefficients and rate table.
    Special {
        #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
        eps: f64,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.05,0.025")]
        tau: Vec<f64>,
        #[arg(long, default_value_t = 1.4)]
        gamma: f64,
        #[arg(long, default_value_t = 2.0)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        x: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Convergence-rate sweep of the wedge scenario.
    Converge {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Empirical Lipschitz constant over a perturbation grid.
    Stability {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn config_err(msg: impl Into<String>) -> anyhow::Error {
    ExperimentError::Config(msg.into()).into()
}

fn out_dir(out: Option<PathBuf>, cfg: &ExperimentConfig) -> Result<PathBuf> {
    let dir = out.or_else(|| cfg.output_dir.clone()).ok_or_else(|| config_err("no --out and no output_dir"))?;
    fs::create_dir_all(&dir).map_err(|e| config_err(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir)
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    let f = File::create(&path).map_err(|e| config_err(format!("cannot write {}: {e}", path.display())))?;
    Ok(BufWriter::new(f))
}

fn load(path: &Path, scenario: Option<Scenario>) -> Result<ExperimentConfig> {
    let cfg = ExperimentConfig::from_file(path)?;
    if let Some(s) = scenario {
        if cfg.scenario != s {
            return Err(config_err(format!("expected scenario {s:?}, found {:?}", cfg.scenario)));
        }
    }
    Ok(cfg)
}

fn state_arg(name: &str, v: &[f64]) -> Result<State> {
    match v {
        [rho, u, w, p] => Ok(State::new(*rho, *u, *w, *p)),
        _ => Err(config_err(format!("--{name} needs four comma-separated values rho,u,v,p"))),
    }
}

fn print_state(out: &mut impl Write, label: &str, u: &State) -> io::Result<()> {
    let f = format_float;
    writeln!(out, "{label},{},{},{},{}", f(u.rho), f(u.u), f(u.v), f(u.p))
}

fn execute(cmd: Command) -> Result<()> {
    let stdout = io::stdout();
    let mut o = stdout.lock();
    match cmd {
        Command::Simulate { config, out } => {
            let cfg = load(&config, None)?;
            let dir = out_dir(out, &cfg)?;
            let runs = simulate(&cfg)?;
            for t in &runs {
                let tag = format!("{}", t.gas.tau);
                let mut w = create(&dir, &format!("trajectory_tau{tag}.txt"))?;
                write_trajectory(t, &mut w).context("writing trajectory")?;
                w.flush()?;
                let weights = GlimmWeights::background(&t.gas).map_err(ExperimentError::from)?;
                let mut w = create(&dir, &format!("glimm_tau{tag}.csv"))?;
                glimm_trace(t, &weights).write_csv(&mut w).context("writing Glimm trace")?;
                w.flush()?;
                writeln!(o, "tau={tag} events={} slices={}", t.events.len(), t.slices.len())?;
            }
        }
        Command::Riemann { below, above, tau, gamma, a, theta } => {
            let g = GasParams::new(gamma, a, tau).map_err(|e| config_err(e.to_string()))?;
            let ub = state_arg("below", &below)?;
            let ua = state_arg("above", &above)?;
            let sol = solve_riemann(&ub, &ua, &g).map_err(ExperimentError::from)?;
            writeln!(o, "family,strength,lower_speed,upper_speed")?;
            for j in 0..4 {
                let s = sol.speeds[j];
                writeln!(
                    o,
                    "{},{},{},{}",
                    j + 1,
                    format_float(sol.strengths[j]),
                    format_float(s.lower()),
                    format_float(s.upper())
                )?;
            }
            for (i, s) in sol.states.iter().enumerate() {
                print_state(&mut o, &format!("state{i}"), s)?;
            }
            if let Some(th) = theta {
                let (sigma, top) = solve_boundary_riemann(&ua, th, &g).map_err(ExperimentError::from)?;
                writeln!(o, "boundary_strength,{}", format_float(sigma))?;
                print_state(&mut o, "boundary_state", &top)?;
            }
        }
        Command::Special { eps, tau, gamma, a, x, out } => {
            let g = GasParams::new(gamma, a, 0.0).map_err(|e| config_err(e.to_string()))?;
            for &t in &tau {
                if !(t > 0.0 && t < a) {
                    return Err(config_err(format!("tau = {t} must lie in (0, a)")));
                }
            }
            if !(x > 0.0) {
                return Err(config_err("x must be positive"));
            }
            fs::create_dir_all(&out).map_err(|e| config_err(format!("cannot create {}: {e}", out.display())))?;
            let r = special_report(eps, &tau, x, &g)?;
            let mut w = create(&out, "rate.csv")?;
            write_rate_csv(&r.fit, &mut w)?;
            w.flush()?;
            let mut w = create(&out, "coeffs.csv")?;
            write_coeffs_csv(&r.rows, &mut w)?;
            w.flush()?;
            writeln!(o, "slope={}", r.fit.slope)?;
        }
        Command::Converge { config, out } => {
            let cfg = load(&config, Some(Scenario::Wedge))?;
            let dir = out_dir(out, &cfg)?;
            let fit = run_convergence(&cfg)?;
            let mut w = create(&dir, "rate.csv")?;
            write_rate_csv(&fit, &mut w)?;
            w.flush()?;
            writeln!(o, "slope={} intercept={} spread={}", fit.slope, fit.intercept, fit.plateau_spread())?;
        }
        Command::Stability { config, out } => {
            let cfg = load(&config, Some(Scenario::Stability))?;
            let dir = out_dir(out, &cfg)?;
            let r = run_stability(&cfg)?;
            let mut w = create(&dir, "stability.csv")?;
            write_stability_csv(&r, &mut w)?;
            w.flush()?;
            writeln!(o, "lipschitz={}", r.lipschitz)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<ExperimentError>().map_or(2, |x| x.exit_code());
            ExitCode::from(code as u8)
        }
    }
}
