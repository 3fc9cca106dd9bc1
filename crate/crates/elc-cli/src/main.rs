//! `elc`: pseudo-spectral simulation of nematic liquid-crystal flow on the
//! periodic torus, with coefficient-regime analysis and plane-wave linear
//! stability tools.
//!
//! Exit codes: 0 success, 1 domain/config error, 2 numerical blowup,
//! 3 IO error.

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand};
use elc_cli::config::{CoeffsFragment, ConfigFile, Overrides};
use elc_cli::report::{build_summary, regime_name, write_summary};
use elc_cli::sinks::RunSinks;
use elc_cli::snapshot::write_snapshot;
use elc_cli::verify::{run_verify, VerifyOptions};
use elc_core::coefficients::{
    classify_regime_default, derive_constants, dissipation_margin, LeslieCoefficients,
};
use elc_core::linstab::{
    dispersion_roots, gpq, in_plane_geometry, linearized_residuals, solve_pq_system,
    unstable_mode, LeslieUnstableParams,
};
use elc_core::solver::{simulate, simulate_from};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "elc", version, about = "Nematic liquid-crystal flow on the periodic torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a time integration from a JSON config.
    Simulate(SimulateArgs),
    /// Report derived constants and the dissipation regime of a
    /// coefficient set.
    Coeffs(CoeffsArgs),
    /// Plane-wave linear stability: alignment angles, dispersion roots and
    /// the growing mode.
    Linstab(LinstabArgs),
    /// Run the numerical identity and property suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (series.csv, summary.json, snapshots/).
    #[arg(long)]
    out: PathBuf,
    /// Override the random seed of a random_smooth init.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the time step.
    #[arg(long)]
    dt: Option<f64>,
    /// Override the final time.
    #[arg(long, value_name = "T")]
    t_end: Option<f64>,
    /// Override the grid size per axis (power of two >= 8).
    #[arg(long)]
    n: Option<usize>,
    /// Override the dimension (2 or 3).
    #[arg(long)]
    dim: Option<usize>,
}

#[derive(Args)]
struct CoeffsArgs {
    /// JSON file {"mu": [mu1..mu6], "eps_penalty": e}; optional when --mu
    /// is given.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Inline coefficients mu1,mu2,mu3,mu4,mu5,mu6.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    mu: Option<Vec<f64>>,
    /// Penalty length scale (with --mu).
    #[arg(long, default_value_t = 1.0)]
    eps_penalty: f64,
    /// Parodi tolerance override.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct LinstabArgs {
    /// JSON file {"mu": [...], "eps_penalty": e, "epsilon_leslie": x}.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Inline coefficients mu1,...,mu6.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    mu: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    eps_penalty: f64,
    /// The epsilon gap of the mu3 relation for the unstable window.
    #[arg(long)]
    epsilon_leslie: Option<f64>,
    /// Wave numbers for the dispersion table.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
    m: Vec<f64>,
    /// Sample count of the optional theta sweep CSV written to stdout
    /// after the JSON report.
    #[arg(long)]
    theta_samples: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Small grids and fewer draws (CI profile).
    #[arg(long)]
    small: bool,
    /// Run only checks whose name contains this substring.
    #[arg(long)]
    filter: Option<String>,
    /// Grid size for the field-based checks.
    #[arg(long)]
    grid_size: Option<usize>,
}

fn main() -> ExitCode {
    // Parallelism cap honoured for interface compatibility: the solver is
    // single-threaded by design (bit-reproducible reductions), so any value
    // caps at one worker.
    let _threads = std::env::var("ELC_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .map(|t| t.clamp(1, 1));
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Coeffs(args) => cmd_coeffs(args),
        Command::Linstab(args) => cmd_linstab(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = classify_error(&err);
            ExitCode::from(code)
        }
    }
}

/// Maps error chains onto the documented exit codes.
fn classify_error(err: &anyhow::Error) -> u8 {
    if let Some(core) = err.downcast_ref::<elc_core::Error>() {
        return match core {
            elc_core::Error::Blowup { .. } => 2,
            elc_core::Error::Io(_) => 3,
            _ => 1,
        };
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return 3;
    }
    for cause in err.chain() {
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 3;
        }
    }
    1
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode> {
    let file = ConfigFile::from_path(&args.config)?;
    let overrides = Overrides {
        seed: args.seed,
        dt: args.dt,
        t_end: args.t_end,
        n: args.n,
        dim: args.dim,
    };
    let resolved = file.resolve(&overrides)?;
    let cfg = resolved.config;
    cfg.validate().map_err(anyhow::Error::new)?;
    std::fs::create_dir_all(&args.out)?;
    let mut sinks = RunSinks::new(&args.out, true, true)?;
    let final_state = match resolved.snapshot_state {
        Some(state) => simulate_from(state, &cfg, &mut sinks),
        None => simulate(&cfg, &mut sinks),
    }
    .map_err(anyhow::Error::new)?;
    let warnings = sinks.warnings.len();
    let reports = sinks.finalize(&cfg.mu)?;
    write_snapshot(&args.out.join("final.elc"), &final_state)?;
    let summary = build_summary(&reports, &cfg.mu, &final_state, &cfg, warnings);
    write_summary(&args.out.join("summary.json"), &summary)?;
    println!(
        "{} steps to t = {}; regime {}; energy monotone: {}",
        cfg.n_steps(),
        final_state.t,
        summary.regime,
        summary.monotone
    );
    Ok(ExitCode::SUCCESS)
}

fn coefficients_from(args_config: Option<&PathBuf>, mu: Option<&Vec<f64>>, eps: f64) -> Result<(LeslieCoefficients, Option<f64>)> {
    if let Some(path) = args_config {
        let frag = CoeffsFragment::from_path(path)?;
        Ok((frag.coefficients(), frag.epsilon_leslie))
    } else if let Some(values) = mu {
        let arrformed: [f64; 6] = values
            .as_slice()
            .try_into()
            .map_err(|_| anyhow!("--mu needs exactly six values"))?;
        Ok((LeslieCoefficients::new(arrformed, eps), None))
    } else {
        Err(anyhow!("provide --config or --mu"))
    }
}

fn cmd_coeffs(args: CoeffsArgs) -> Result<ExitCode> {
    let (mu, _) = coefficients_from(args.config.as_ref(), args.mu.as_ref(), args.eps_penalty)?;
    let derived = derive_constants(&mu);
    let regime = match args.tol {
        Some(tol) => elc_core::coefficients::classify_regime(&mu, tol),
        None => classify_regime_default(&mu),
    };
    let margin = dissipation_margin(&mu).ok();
    let report = json!({
        "mu": mu.as_array(),
        "eps_penalty": mu.eps_penalty,
        "lambda1": derived.lambda1,
        "lambda2": derived.lambda2,
        "alpha": derived.alpha,
        "parodi_defect": derived.parodi_defect,
        "parodi": mu.satisfies_parodi(mu.default_parodi_tol()),
        "regime": regime_name(regime.tag),
        "margin": margin,
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_linstab(args: LinstabArgs) -> Result<ExitCode> {
    let (mu, eps_from_file) =
        coefficients_from(args.config.as_ref(), args.mu.as_ref(), args.eps_penalty)?;
    let epsilon_leslie = args
        .epsilon_leslie
        .or(eps_from_file)
        .ok_or_else(|| anyhow!("provide --epsilon-leslie (or epsilon_leslie in the config)"))?;
    let params = LeslieUnstableParams { mu, epsilon_leslie };
    params.validate().map_err(anyhow::Error::new)?;
    let theta0 = params.theta0().map_err(anyhow::Error::new)?;
    let (g, p, q) = gpq(theta0, &mu);
    let pq_root = solve_pq_system(&mu, mu.default_parodi_tol()).unwrap_or(None);

    let mut roots = Vec::new();
    let mut any_unstable = false;
    for &m in &args.m {
        for theta in [0.0, theta0, std::f64::consts::FRAC_PI_2] {
            let (w1, w2) = dispersion_roots(m, theta, &mu).map_err(anyhow::Error::new)?;
            any_unstable |= w1.im > 1e-12 || w2.im > 1e-12;
            roots.push(json!({
                "m": m,
                "theta": theta,
                "omega1": [w1.re, w1.im],
                "omega2": [w2.re, w2.im],
                "stable": w1.im <= 1e-12 && w2.im <= 1e-12,
            }));
        }
    }
    let (nu, n) = in_plane_geometry(theta0, 0.0);
    let reference_m = args.m.first().copied().unwrap_or(2.0);
    let mode = unstable_mode(&params, reference_m, nu, n).map_err(anyhow::Error::new)?;
    let residuals = linearized_residuals(&mode, &mu);
    let report = json!({
        "theta0": theta0,
        "cos2_theta0": theta0.cos() * theta0.cos(),
        "g": g,
        "p": p,
        "q": q,
        "pq_common_root": pq_root,
        "roots": roots,
        "verdict": if any_unstable { "unstable" } else { "stable" },
        "mode": {
            "m": mode.m,
            "nu": mode.nu,
            "n": mode.n,
            "a": mode.a,
            "b": mode.b,
            "omega": [mode.omega.re, mode.omega.im],
            "growth_rate": mode.growth_rate(),
            "C": [mode.c_amp.re, mode.c_amp.im],
            "D": [mode.d_amp.re, mode.d_amp.im],
            "linearized_residuals": residuals,
        },
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    if let Some(samples) = args.theta_samples {
        println!("theta,g,p,q");
        for k in 0..samples {
            let theta = k as f64 * std::f64::consts::FRAC_PI_2 / (samples.max(2) - 1) as f64;
            let (g, p, q) = gpq(theta, &mu);
            println!("{theta},{g},{p},{q}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let opts = VerifyOptions { small: args.small, grid_n: args.grid_size };
    let outcomes = run_verify(&opts, args.filter.as_deref());
    if outcomes.is_empty() {
        return Err(anyhow!("no checks match filter {:?}", args.filter));
    }
    let mut all_passed = true;
    for o in &outcomes {
        all_passed &= o.passed;
        println!("{} {:<28} {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
    }
    if all_passed {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(anyhow!("{} checks failed", outcomes.iter().filter(|o| !o.passed).count()))
    }
}
