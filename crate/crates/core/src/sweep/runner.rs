//! Parallel sweep execution with index-addressed row assembly.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rayon::prelude::*;

use super::config::{RunConfig, Sweep};
use crate::amplitudes::amplitude_pair;
use crate::entanglement::{concurrence_xstate, evolve_xstate, DetectorChannel, PERTURBATIVE_WARN};
use crate::error::{Error, Result};
use crate::fieldstate::{ait_ratio, geometric_grid, transition_probability, FieldState};
use crate::worldline::{build_phase_function, PhaseFunction};

/// Slack allowed per step when judging monotone decrease.
pub const MONOTONE_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    /// Ω for gap sweeps, temperature `1/β` for temperature sweeps.
    pub sweep_value: f64,
    pub abs_term: f64,
    pub unruh_term: f64,
    pub ratio: f64,
    pub concurrence: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    /// Pipeline evaluations issued.
    pub evaluations: usize,
    /// Largest `λ²(⟨n⟩+1)max|I±|²` seen.
    pub max_perturbative: f64,
}

impl SweepOutcome {
    /// Concurrence never rises by more than [`MONOTONE_SLACK`] between rows.
    pub fn concurrence_non_increasing(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].concurrence <= w[0].concurrence + MONOTONE_SLACK)
    }
}

/// A sweep that stopped on a hard error, with the rows that did complete.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepFailure {
    pub error: Error,
    pub partial: Vec<SweepRow>,
}

impl From<Error> for SweepFailure {
    fn from(error: Error) -> Self {
        Self {
            error,
            partial: Vec::new(),
        }
    }
}

/// One pass through amplitudes → field state → two-detector state.
/// Both detectors share the worldline, mode and background.
pub fn evaluate_point(
    pf: &PhaseFunction,
    cfg: &RunConfig,
    field: &FieldState,
    omega: f64,
    sweep_value: f64,
) -> Result<(SweepRow, f64)> {
    let ap = amplitude_pair(pf, omega, &cfg.window)?;
    let k = cfg.mode_k;
    let tp = transition_probability(&ap, field, k, cfg.lambda);
    let ratio = ait_ratio(&ap, field, k)?;
    let channel = DetectorChannel::new(&ap, field.mean_occupation(k), cfg.lambda);
    let rho = evolve_xstate(&cfg.init_state, &channel, &channel)?;
    let row = SweepRow {
        sweep_value,
        abs_term: tp.abs_term,
        unruh_term: tp.unruh_term,
        ratio,
        concurrence: concurrence_xstate(&rho),
    };
    let finite = [row.abs_term, row.unruh_term, row.ratio, row.concurrence]
        .iter()
        .all(|v| v.is_finite());
    if !finite {
        return Err(Error::Accuracy(format!("non-finite row at sweep value {sweep_value}")));
    }
    Ok((row, channel.perturbative_parameter()))
}

fn run_points<F>(n: usize, threads: Option<usize>, eval: F) -> std::result::Result<SweepOutcome, SweepFailure>
where
    F: Fn(usize) -> Result<(SweepRow, f64)> + Sync,
{
    let cancelled = AtomicBool::new(false);
    let evaluations = AtomicUsize::new(0);
    let work = || -> Vec<Option<Result<(SweepRow, f64)>>> {
        (0..n)
            .into_par_iter()
            .map(|i| {
                if cancelled.load(Ordering::Relaxed) {
                    return None;
                }
                evaluations.fetch_add(1, Ordering::Relaxed);
                let r = eval(i);
                if r.is_err() {
                    cancelled.store(true, Ordering::Relaxed);
                }
                Some(r)
            })
            .collect()
    };
    let slots = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidInput(format!("cannot build a pool of {t} threads: {e}")))?
            .install(work),
        None => work(),
    };

    let mut rows = Vec::with_capacity(n);
    let mut max_perturbative: f64 = 0.0;
    let mut first_error = None;
    for slot in slots {
        match slot {
            Some(Ok((row, p))) => {
                rows.push(row);
                max_perturbative = max_perturbative.max(p);
            }
            Some(Err(e)) if first_error.is_none() => first_error = Some(e),
            _ => {}
        }
    }
    if let Some(error) = first_error {
        return Err(SweepFailure { error, partial: rows });
    }
    if max_perturbative > PERTURBATIVE_WARN {
        log::warn!(
            "perturbative parameter reaches {max_perturbative:.3e} (> {PERTURBATIVE_WARN}); \
             first-order results are qualitative there"
        );
    }
    Ok(SweepOutcome {
        rows,
        evaluations: evaluations.into_inner(),
        max_perturbative,
    })
}

/// Gap values of a gap sweep, ascending.
pub fn gap_values(sweep: &Sweep) -> Option<Vec<f64>> {
    match *sweep {
        Sweep::Gap { lo, hi, n, log_spaced } => Some(if log_spaced {
            geometric_grid(lo, hi, n)
        } else {
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        hi
                    } else {
                        lo + (hi - lo) * i as f64 / (n - 1) as f64
                    }
                })
                .collect()
        }),
        Sweep::Temperature { .. } => None,
    }
}

/// Temperatures of a temperature sweep, ascending.
pub fn temperature_values(sweep: &Sweep) -> Option<Vec<f64>> {
    match *sweep {
        Sweep::Temperature {
            beta_lo, beta_hi, n, ..
        } => {
            let (t_lo, t_hi) = (1.0 / beta_hi, 1.0 / beta_lo);
            Some(
                (0..n)
                    .map(|i| match i {
                        0 => t_lo,
                        _ if i == n - 1 => t_hi,
                        _ => t_lo + (t_hi - t_lo) * i as f64 / (n - 1) as f64,
                    })
                    .collect(),
            )
        }
        Sweep::Gap { .. } => None,
    }
}

/// One row per gap value in ascending order.
pub fn run_gap_sweep(cfg: &RunConfig, threads: Option<usize>) -> std::result::Result<SweepOutcome, SweepFailure> {
    let omegas = gap_values(&cfg.sweep).ok_or_else(|| Error::InvalidInput("run_gap_sweep needs a gap sweep".into()))?;
    let pf = build_phase_function(&cfg.worldline, cfg.mode_k)?;
    run_points(omegas.len(), threads, |i| {
        evaluate_point(&pf, cfg, &cfg.field, omegas[i], omegas[i])
    })
}

/// One row per temperature in ascending order, at the configured gap.
/// The background is thermal at each temperature; `[field]` is not used.
pub fn run_temperature_sweep(
    cfg: &RunConfig,
    threads: Option<usize>,
) -> std::result::Result<SweepOutcome, SweepFailure> {
    let temps = temperature_values(&cfg.sweep)
        .ok_or_else(|| Error::InvalidInput("run_temperature_sweep needs a temperature sweep".into()))?;
    let Sweep::Temperature { omega, .. } = cfg.sweep else {
        unreachable!("checked above")
    };
    let pf = build_phase_function(&cfg.worldline, cfg.mode_k)?;
    run_points(temps.len(), threads, |i| {
        let field = FieldState::Thermal { beta: 1.0 / temps[i] };
        evaluate_point(&pf, cfg, &field, omega, temps[i])
    })
}
