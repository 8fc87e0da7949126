use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};

use ait_core::amplitudes::{amplitude_pair, eternal_unruh_amplitude, unruh_transition_probability};
use ait_core::fieldstate::{find_ait_gap, transition_probability};
use ait_core::sweep::output::{format_significant, partial_path};
use ait_core::sweep::svg::render_svg;
use ait_core::sweep::{
    parse_config, render_csv, run_gap_sweep, run_temperature_sweep, write_atomic, write_partial, RunConfig, Sweep,
    SweepFailure, SweepOutcome,
};
use ait_core::worldline::build_phase_function;
use ait_core::Error;

const THREADS_ENV: &str = "AIT_LAB_THREADS";

#[derive(Parser)]
#[command(
    name = "ait-lab",
    version,
    about = "Acceleration-induced transparency and entanglement sweeps"
)]
struct Cli {
    /// Worker threads (falls back to AIT_LAB_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gap sweep of absorption/Unruh terms and their ratio.
    AitScan(SweepArgs),
    /// Gap sweep with two-detector concurrence.
    EntangleScan(SweepArgs),
    /// Temperature sweep at a fixed gap.
    TempScan(SweepArgs),
    /// Closed-form eternal-acceleration checks.
    UnruhCheck {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        omega: f64,
    },
    /// Locate the transparency dip and check it against longer tails.
    FindGap { config: PathBuf },
}

#[derive(Args)]
struct SweepArgs {
    config: PathBuf,
    /// CSV destination (stdout when neither this nor output.csv is set).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Significant digits in the CSV, 6 to 17.
    #[arg(long)]
    precision: Option<usize>,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config { .. } | Error::InvalidInput(_) => 2,
        Error::Io(_) => 4,
        _ => 3,
    }
}

fn resolve_threads(flag: Option<usize>) -> Result<Option<usize>, Error> {
    let threads = match flag {
        Some(t) => Some(t),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::config(THREADS_ENV, format!("`{v}` is not a thread count")))?,
            ),
            Err(_) => None,
        },
    };
    if threads == Some(0) {
        return Err(Error::config("--threads", "must be at least 1"));
    }
    Ok(threads)
}

fn load_config(path: &Path) -> Result<RunConfig, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config(path.display().to_string(), format!("cannot read config: {e}")))?;
    let cfg = parse_config(&text)?;
    for d in &cfg.defaults_applied {
        info!("default: {d}");
    }
    Ok(cfg)
}

fn run_sweep(kind: &str, args: &SweepArgs, threads: Option<usize>) -> Result<(), Error> {
    let mut cfg = load_config(&args.config)?;
    if let Some(p) = args.precision {
        if !(6..=17).contains(&p) {
            return Err(Error::config("--precision", format!("{p} must lie in [6, 17]")));
        }
        cfg.outputs.precision = p;
    }
    if let Some(out) = &args.out {
        cfg.outputs.csv_path = Some(out.clone());
    }
    if let Some(svg) = &args.svg {
        cfg.outputs.svg_path = Some(svg.clone());
    }

    let is_temperature = matches!(cfg.sweep, Sweep::Temperature { .. });
    if is_temperature != (kind == "temp-scan") {
        let want = if kind == "temp-scan" { "temperature" } else { "gap" };
        return Err(Error::config("sweep.kind", format!("`{kind}` needs a {want} sweep")));
    }
    if is_temperature {
        info!("temperature sweep: the background is thermal at each row; [field] is ignored");
    }

    let hash = cfg.config_hash();
    let digits = cfg.outputs.precision;
    let result = if is_temperature {
        run_temperature_sweep(&cfg, threads)
    } else {
        run_gap_sweep(&cfg, threads)
    };
    let outcome: SweepOutcome = match result {
        Ok(o) => o,
        Err(SweepFailure { error, partial }) => {
            if let Some(path) = &cfg.outputs.csv_path {
                let _ = std::fs::remove_file(partial_path(path));
                match write_partial(path, &render_csv(&partial, &hash, digits)) {
                    Ok(p) => warn!("{} completed rows written to {}", partial.len(), p.display()),
                    Err(e) => warn!("could not write partial results: {e}"),
                }
            }
            return Err(error);
        }
    };

    let csv = render_csv(&outcome.rows, &hash, digits);
    match &cfg.outputs.csv_path {
        Some(path) => {
            write_atomic(path, &csv)?;
            info!("{} rows written to {}", outcome.rows.len(), path.display());
        }
        None => print!("{csv}"),
    }
    if let Some(svg_path) = &cfg.outputs.svg_path {
        let label = if is_temperature { "temperature" } else { "Omega" };
        write_atomic(svg_path, &render_svg(&outcome.rows, label, !is_temperature))?;
    }
    info!("evaluations: {}", outcome.evaluations);
    if is_temperature {
        eprintln!("concurrence_non_increasing = {}", outcome.concurrence_non_increasing());
    }
    Ok(())
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Error> {
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| Error::InvalidInput(format!("cannot build a pool of {t} threads: {e}"))),
        None => Ok(f()),
    }
}

fn find_gap(path: &Path, threads: Option<usize>) -> Result<(), Error> {
    let cfg = load_config(path)?;
    let (lo, hi, grid_n, tol) = match (cfg.gap_search, cfg.sweep) {
        (Some(g), _) => (g.lo, g.hi, g.grid_n, g.window_tolerance),
        (None, Sweep::Gap { lo, hi, .. }) => {
            info!("default: gap search over the sweep range with 64 points");
            (lo, hi, 64, 0.01)
        }
        (None, Sweep::Temperature { .. }) => {
            return Err(Error::config(
                "gap_search",
                "required when the sweep is a temperature sweep",
            ))
        }
    };
    let pf = build_phase_function(&cfg.worldline, cfg.mode_k)?;
    let scan = with_threads(threads, || find_ait_gap(&pf, &cfg.field, (lo, hi), grid_n, &cfg.window))??;

    let t2 = cfg.worldline.accelerated_end().unwrap_or(0.0);
    let longer = cfg.window.extend_tails(2.0, 0.0, t2)?;
    let ap = amplitude_pair(&pf, scan.gap, &cfg.window)?;
    let ap_long = amplitude_pair(&pf, scan.gap, &longer)?;
    let drift = (ap_long.amplitude_ratio() - ap.amplitude_ratio()).abs() / ap.amplitude_ratio();
    let tp = transition_probability(&ap, &cfg.field, cfg.mode_k, cfg.lambda);

    let p = |x: f64| format_significant(x, 10);
    println!("omega_star = {}", p(scan.gap));
    println!("ratio_at_gap = {}", p(scan.ratio_at_gap));
    println!("amplitude_ratio_at_gap = {}", p(scan.amplitude_ratio_at_gap));
    println!("abs_over_unruh = {}", p(tp.abs_term / tp.unruh_term));
    println!("window_drift = {}", p(drift));
    println!("window_stable = {}", drift <= tol);
    if drift > tol {
        return Err(Error::Convergence(format!(
            "dip ratio moves by {drift:e} when the tails are doubled (tolerance {tol})"
        )));
    }
    Ok(())
}

fn unruh_check(a: f64, omega: f64) -> Result<(), Error> {
    if !(a > 0.0) || !(omega > 0.0) {
        return Err(Error::InvalidInput("--a and --omega must be positive".into()));
    }
    let up = eternal_unruh_amplitude(omega, a)?;
    let down = eternal_unruh_amplitude(-omega, a)?;
    let balance = up.norm_sqr() / down.norm_sqr();
    let boltzmann = (2.0 * PI * omega / a).exp();
    let p = |x: f64| format_significant(x, 12);
    println!("i_plus = {} {}i", p(up.re), p(up.im));
    println!("i_plus_sq = {}", p(up.norm_sqr()));
    println!("detailed_balance = {}", p(balance));
    println!("boltzmann_factor = {}", p(boltzmann));
    println!("detailed_balance_rel_err = {}", p((balance / boltzmann - 1.0).abs()));
    println!("planck_probability = {}", p(unruh_transition_probability(omega, a)));
    println!("unruh_temperature = {}", p(a / (2.0 * PI)));
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let result = resolve_threads(cli.threads).and_then(|threads| match &cli.command {
        Command::AitScan(args) => run_sweep("ait-scan", args, threads),
        Command::EntangleScan(args) => run_sweep("entangle-scan", args, threads),
        Command::TempScan(args) => run_sweep("temp-scan", args, threads),
        Command::UnruhCheck { a, omega } => unruh_check(*a, *omega),
        Command::FindGap { config } => find_gap(config, threads),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
