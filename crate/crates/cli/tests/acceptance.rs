//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use ait_core::amplitudes::{
    amplitude_analytic, amplitude_numeric, eternal_unruh_amplitude, unruh_transition_probability, Sign, Tails, Window,
};
use ait_core::entanglement::{concurrence_wootters, concurrence_xstate, evolve_xstate, DetectorChannel, XState};
use ait_core::sweep::{evaluate_point, parse_config, RunConfig};
use ait_core::worldline::{build_phase_function, WorldlineSpec};
use ait_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PAPER_GAP: f64 = 0.00762;

type Check = std::result::Result<String, String>;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn ait_lab(args: &[&str]) -> std::result::Result<(String, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_ait-lab"))
        .args(args)
        .env_remove("AIT_LAB_THREADS")
        .env("RUST_LOG", "warn")
        .output()
        .map_err(|e| format!("cannot run ait-lab: {e}"))?;
    let stdout = String::from_utf8_lossy(&out.stdout).into_owned();
    let stderr = String::from_utf8_lossy(&out.stderr).into_owned();
    if !out.status.success() {
        return Err(format!(
            "ait-lab {args:?} exited with {:?}: {stderr}",
            out.status.code()
        ));
    }
    Ok((stdout, stderr))
}

fn config_path(name: &str) -> String {
    configs().join(name).display().to_string()
}

fn load(name: &str) -> RunConfig {
    parse_config(&std::fs::read_to_string(configs().join(name)).expect("shipped config")).expect("valid config")
}

fn report_value(text: &str, key: &str) -> std::result::Result<f64, String> {
    let prefix = format!("{key} = ");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .ok_or_else(|| format!("`{key}` missing from output"))?
        .trim()
        .parse()
        .map_err(|e| format!("`{key}`: {e}"))
}

/// Data rows of a CSV as `[sweep_value, abs, unruh, ratio, concurrence]`.
fn csv_rows(text: &str) -> Vec<[f64; 5]> {
    text.lines()
        .skip(2)
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|c| c.parse().expect("numeric cell")).collect();
            [v[0], v[1], v[2], v[3], v[4]]
        })
        .collect()
}

fn within(limit: Duration, start: Instant) -> std::result::Result<(), String> {
    let took = start.elapsed();
    if took > limit {
        return Err(format!("took {:.1} s, limit {} s", took.as_secs_f64(), limit.as_secs()));
    }
    Ok(())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn find_gap(config: &str) -> std::result::Result<String, String> {
    ait_lab(&["find-gap", &config_path(config)]).map(|(out, _)| out)
}

fn gap_anchor() -> Check {
    let start = Instant::now();
    let out = find_gap("fig1.toml")?;
    within(Duration::from_secs(120), start)?;
    let gap = report_value(&out, "omega_star")?;
    let drift = report_value(&out, "window_drift")?;
    let rel = (gap - PAPER_GAP).abs() / PAPER_GAP;
    ensure(rel <= 0.05, || {
        format!("Omega* = {gap} is {:.2}% from {PAPER_GAP}", 100.0 * rel)
    })?;
    ensure(drift <= 0.01, || format!("window drift {drift:e} > 1%"))?;
    Ok(format!(
        "Omega* = {gap:.6e} ({:.2}% off), tail drift {drift:.1e}",
        100.0 * rel
    ))
}

fn ait_ordering() -> Check {
    let report = find_gap("fig1.toml")?;
    let gap = report_value(&report, "omega_star")?;
    let at_gap = report_value(&report, "abs_over_unruh")?;
    ensure(at_gap <= 0.1, || format!("abs/unruh at the dip is {at_gap}"))?;
    let (csv, _) = ait_lab(&["ait-scan", &config_path("fig1.toml")])?;
    let off: Vec<f64> = csv_rows(&csv)
        .iter()
        .filter(|r| r[0] <= gap / 3.0 || r[0] >= 3.0 * gap)
        .map(|r| r[3])
        .collect();
    ensure(!off.is_empty(), || "no off-dip rows".into())?;
    let min_off = off.iter().copied().fold(f64::INFINITY, f64::min);
    ensure(min_off >= 10.0 * at_gap, || {
        format!("off-dip ratio {min_off:e} is within 10x of the dip value {at_gap:e}")
    })?;
    Ok(format!(
        "dip ratio {at_gap:.2e}, smallest off-dip ratio {min_off:.2e} over {} rows",
        off.len()
    ))
}

fn entanglement_protection() -> Check {
    let start = Instant::now();
    let gap = report_value(&find_gap("fig2.toml")?, "omega_star")?;
    let cfg = load("fig2.toml");
    let pf = build_phase_function(&cfg.worldline, cfg.mode_k).map_err(|e| e.to_string())?;
    let (row, _) = evaluate_point(&pf, &cfg, &cfg.field, gap, gap).map_err(|e| e.to_string())?;
    let (csv, _) = ait_lab(&["entangle-scan", &config_path("fig2.toml")])?;
    within(Duration::from_secs(120), start)?;
    let mut off: Vec<f64> = csv_rows(&csv)
        .iter()
        .filter(|r| r[0] <= gap / 3.0 || r[0] >= 3.0 * gap)
        .map(|r| r[4])
        .collect();
    off.sort_by(f64::total_cmp);
    let median = off[off.len() / 2];
    let at_dip = row.concurrence;
    ensure(at_dip > 0.0, || "concurrence at the dip is zero".into())?;
    ensure(median < 0.1 * at_dip, || {
        format!("median off-dip concurrence {median} vs dip {at_dip}")
    })?;
    Ok(format!("C(Omega*) = {at_dip:.4}, median off-dip C = {median:.2e}"))
}

fn temperature_degradation() -> Check {
    let start = Instant::now();
    let (csv, stderr) = ait_lab(&["temp-scan", &config_path("fig3.toml")])?;
    within(Duration::from_secs(60), start)?;
    let rows = csv_rows(&csv);
    for w in rows.windows(2) {
        ensure(w[1][4] <= w[0][4] + 1e-10, || {
            format!(
                "concurrence rises from {} to {} between T = {} and {}",
                w[0][4], w[1][4], w[0][0], w[1][0]
            )
        })?;
    }
    ensure(stderr.contains("concurrence_non_increasing = true"), || {
        "binary disagrees on monotonicity".into()
    })?;
    let threshold = rows
        .iter()
        .position(|r| r[4] < 1e-3)
        .map(|i| rows[i][0])
        .ok_or_else(|| "concurrence never drops below 1e-3".to_string())?;
    Ok(format!(
        "C falls from {:.4} at T = {} to {:.1e} at T = {}; below 1e-3 from T = {threshold:.3}",
        rows[0][4],
        rows[0][0],
        rows[rows.len() - 1][4],
        rows[rows.len() - 1][0]
    ))
}

fn unruh_suite() -> Check {
    let start = Instant::now();
    let mut worst_balance: f64 = 0.0;
    let mut worst_planck: f64 = 0.0;
    for a in [0.5, 1.0, 2.0] {
        for i in 0..50 {
            let x = 0.1 + 4.9 * i as f64 / 49.0;
            let up = eternal_unruh_amplitude(x * a, a).map_err(|e| e.to_string())?.norm_sqr();
            let down = eternal_unruh_amplitude(-x * a, a)
                .map_err(|e| e.to_string())?
                .norm_sqr();
            worst_balance = worst_balance.max((up / down / (2.0 * PI * x).exp() - 1.0).abs());
            // response ratios between neighbouring gaps follow the Planck form
            let y = x + 0.37;
            let next = eternal_unruh_amplitude(-y * a, a)
                .map_err(|e| e.to_string())?
                .norm_sqr();
            let planck = unruh_transition_probability(y * a, a) / unruh_transition_probability(x * a, a);
            worst_planck = worst_planck.max((next / down / planck - 1.0).abs());
        }
    }
    ensure(worst_balance <= 1e-9, || {
        format!("detailed balance off by {worst_balance:e}")
    })?;
    ensure(worst_planck <= 1e-9, || {
        format!("Planck ratios off by {worst_planck:e}")
    })?;

    let a = 1.0;
    let pf = build_phase_function(&WorldlineSpec::Eternal { a }, 1.0).map_err(|e| e.to_string())?;
    let w = Window::new(-8.0, 40.0, Tails::Adiabatic).map_err(|e| e.to_string())?;
    let norm = 4.0 * PI * PI.sqrt();
    let mut worst_shape: f64 = 0.0;
    for i in 0..7 {
        let x = 0.5 + 1.5 * i as f64 / 6.0;
        let numeric = amplitude_numeric(&pf, x * a, Sign::Plus, &w).map_err(|e| e.to_string())?;
        let closed = eternal_unruh_amplitude(x * a, a).map_err(|e| e.to_string())?;
        worst_shape = worst_shape.max((numeric.norm() / (norm * closed.norm()) - 1.0).abs());
    }
    ensure(worst_shape <= 0.05, || {
        format!("quadrature modulus off by {:.2}%", 100.0 * worst_shape)
    })?;
    within(Duration::from_secs(60), start)?;
    Ok(format!(
        "balance {worst_balance:.1e}, Planck {worst_planck:.1e}, quadrature shape {worst_shape:.1e}"
    ))
}

fn oracle_equivalences() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_amp: f64 = 0.0;
    let mut cases = 0;
    while cases < 200 {
        let t1 = rng.gen_range(0.5..5.0);
        let spec = WorldlineSpec::PhaseSlope {
            v0: rng.gen_range(0.2..2.0),
            v1: rng.gen_range(0.2..2.0),
            v2: rng.gen_range(0.2..2.0),
            t1,
            t2: t1 + rng.gen_range(0.5..15.0),
        };
        let pf = build_phase_function(&spec, rng.gen_range(0.5..2.0)).map_err(|e| e.to_string())?;
        let pad = rng.gen_range(0.5..5.0);
        let tails = match cases % 3 {
            0 => Tails::Sharp,
            1 => Tails::CosineRamp { width: 0.4 * pad },
            _ => Tails::Adiabatic,
        };
        let w = Window::new(-pad, spec.accelerated_end().unwrap() + pad, tails).map_err(|e| e.to_string())?;
        let omega: f64 = rng.gen_range(0.01..3.0);
        let clear = [w.tau_min, w.tau_max]
            .iter()
            .all(|&t| (omega.abs() - pf.slope(t).abs()).abs() > 0.05);
        if tails == Tails::Adiabatic && !clear {
            continue;
        }
        for sign in [Sign::Minus, Sign::Plus] {
            let a = amplitude_analytic(&pf, omega, sign, &w).map_err(|e| e.to_string())?;
            let n = amplitude_numeric(&pf, omega, sign, &w).map_err(|e| e.to_string())?;
            worst_amp = worst_amp.max((a - n).norm() / a.norm().max(1.0));
        }
        cases += 1;
    }
    ensure(worst_amp <= 1e-6, || {
        format!("analytic vs quadrature off by {worst_amp:e}")
    })?;

    let mut worst_c: f64 = 0.0;
    for _ in 0..1000 {
        let d: Vec<f64> = (0..4).map(|_| rng.gen_range(0.0..1.0)).collect();
        let t: f64 = d.iter().sum();
        let (d11, d22, d33, d44) = (d[0] / t, d[1] / t, d[2] / t, d[3] / t);
        let x41 = Complex64::from_polar(rng.gen_range(0.0..1.0) * (d11 * d44).sqrt(), rng.gen_range(-PI..PI));
        let x32 = Complex64::from_polar(rng.gen_range(0.0..1.0) * (d22 * d33).sqrt(), rng.gen_range(-PI..PI));
        let rho = XState {
            d11,
            d22,
            d33,
            d44,
            x41,
            x32,
            trace_norm: 1.0,
        };
        let oracle = concurrence_wootters(&rho.to_matrix()).map_err(|e| e.to_string())?;
        worst_c = worst_c.max((concurrence_xstate(&rho) - oracle).abs());
    }
    ensure(worst_c <= 1e-10, || format!("X-state vs Wootters off by {worst_c:e}"))?;

    let cfg = load("fig2.toml");
    let pf = build_phase_function(&cfg.worldline, cfg.mode_k).map_err(|e| e.to_string())?;
    let ap = ait_core::amplitudes::amplitude_pair(&pf, 0.02, &cfg.window).map_err(|e| e.to_string())?;
    let n = cfg.field.mean_occupation(cfg.mode_k);
    let c0 = cfg.init_state.concurrence();
    let loss = |lambda: f64| -> std::result::Result<f64, String> {
        let ch = DetectorChannel::new(&ap, n, lambda);
        let rho = evolve_xstate(&cfg.init_state, &ch, &ch).map_err(|e| e.to_string())?;
        Ok(c0 - concurrence_xstate(&rho))
    };
    let (l1, l2) = (1e-4, 1e-2);
    let exponent = (loss(l2)? / loss(l1)?).ln() / (l2 / l1).ln();
    ensure((exponent - 2.0).abs() <= 0.1, || {
        format!("approach exponent {exponent}")
    })?;
    within(Duration::from_secs(60), start)?;
    Ok(format!(
        "amplitudes {worst_amp:.1e}, concurrence {worst_c:.1e}, exponent {exponent:.4}"
    ))
}

fn determinism() -> Check {
    let runs = [
        ("ait-scan", "fig1.toml"),
        ("entangle-scan", "fig2.toml"),
        ("temp-scan", "fig3.toml"),
    ];
    for (cmd, cfg) in runs {
        let path = config_path(cfg);
        let reference = ait_lab(&["--threads", "1", cmd, &path])?.0;
        for threads in ["1", "2", "4", "8"] {
            let again = ait_lab(&["--threads", threads, cmd, &path])?.0;
            ensure(again == reference, || {
                format!("{cmd} {cfg} differs with {threads} threads")
            })?;
        }
    }
    Ok("fig1/fig2/fig3 CSVs identical across 1, 2, 4, 8 threads and repeats".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 7] = [
        ("gap anchor", gap_anchor),
        ("transparency ordering", ait_ordering),
        ("entanglement protection", entanglement_protection),
        ("temperature degradation", temperature_degradation),
        ("eternal acceleration", unruh_suite),
        ("oracle equivalences", oracle_equivalences),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {} ({name}): PASS [{secs:.2} s] {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{secs:.2} s] {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
