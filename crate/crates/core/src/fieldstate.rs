//! Field states, detector transition probabilities, and the AIT gap finder.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amplitudes::{amplitude_pair, AmplitudePair, Window};
use crate::error::{Error, Result};
use crate::optimize::golden_section;
use crate::worldline::PhaseFunction;

/// Relative Ω tolerance of the dip refinement.
pub const GAP_REL_TOL: f64 = 1e-5;

/// Smallest `|I+|²` for which the AIT ratio is considered defined.
pub const DEGENERATE_FLOOR: f64 = f64::MIN_POSITIVE;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FieldState {
    Vacuum,
    Fock { n: u64 },
    Thermal { beta: f64 },
}

impl FieldState {
    pub fn validate(&self) -> Result<()> {
        if let FieldState::Thermal { beta } = *self {
            if !(beta > 0.0) || beta.is_nan() {
                return Err(Error::InvalidInput(format!(
                    "inverse temperature beta = {beta} must be positive"
                )));
            }
        }
        Ok(())
    }

    /// Mean occupation of a mode with frequency ω.
    pub fn mean_occupation(&self, omega: f64) -> f64 {
        match *self {
            FieldState::Vacuum => 0.0,
            FieldState::Fock { n } => n as f64,
            FieldState::Thermal { beta } => 1.0 / (beta * omega).exp_m1(),
        }
    }

    /// `⟨n⟩ / (⟨n⟩ + 1)`; for a thermal state this is `e^{-βω}`.
    pub fn absorption_weight(&self, omega: f64) -> f64 {
        match *self {
            FieldState::Thermal { beta } => (-beta * omega).exp(),
            _ => {
                let n = self.mean_occupation(omega);
                n / (n + 1.0)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionProbability {
    pub abs_term: f64,
    pub unruh_term: f64,
    pub total: f64,
}

/// Excitation probability `λ²(⟨n⟩|I-|² + (⟨n⟩+1)|I+|²)` of a detector
/// starting in its ground state. Fock states use the exact integer `n`.
pub fn transition_probability(ap: &AmplitudePair, s: &FieldState, omega: f64, lambda: f64) -> TransitionProbability {
    let lam2 = lambda * lambda;
    let (n, n1) = match *s {
        FieldState::Fock { n } => (n as f64, (n + 1) as f64),
        _ => {
            let n = s.mean_occupation(omega);
            (n, n + 1.0)
        }
    };
    let abs_term = lam2 * n * ap.i_minus.norm_sqr();
    let unruh_term = lam2 * n1 * ap.i_plus.norm_sqr();
    TransitionProbability {
        abs_term,
        unruh_term,
        total: abs_term + unruh_term,
    }
}

/// Stimulated absorption over Unruh contribution, `⟨n⟩/(⟨n⟩+1) · |I-|²/|I+|²`.
pub fn ait_ratio(ap: &AmplitudePair, s: &FieldState, omega: f64) -> Result<f64> {
    let plus = ap.i_plus.norm_sqr();
    if !(plus >= DEGENERATE_FLOOR) {
        return Err(Error::Degenerate(format!(
            "|I+|² = {plus:e} at Omega = {}; the ratio is undefined",
            ap.omega
        )));
    }
    Ok(s.absorption_weight(omega) * ap.i_minus.norm_sqr() / plus)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint {
    pub omega: f64,
    pub i_minus_sq: f64,
    pub i_plus_sq: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AitScanResult {
    pub gap: f64,
    pub ratio_at_gap: f64,
    /// `|I-|²/|I+|²` at the gap, independent of the field state.
    pub amplitude_ratio_at_gap: f64,
    pub scan_table: Vec<ScanPoint>,
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (l, h) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| match i {
            0 => lo,
            _ if i == n - 1 => hi,
            _ => (l + (h - l) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}

fn scan_point(pf: &PhaseFunction, s: &FieldState, omega: f64, w: &Window) -> Result<ScanPoint> {
    let ap = amplitude_pair(pf, omega, w)?;
    Ok(ScanPoint {
        omega,
        i_minus_sq: ap.i_minus.norm_sqr(),
        i_plus_sq: ap.i_plus.norm_sqr(),
        ratio: ait_ratio(&ap, s, pf.mode_k)?,
    })
}

/// Locates the AIT dip on `[lo, hi]`.
///
/// The dip is where `|I-|²/|I+|²` is smallest; the field state only scales
/// the reported ratio, so vacuum backgrounds still have a well-defined dip
/// location. A geometric grid is scanned in parallel, then the best grid
/// point is refined by golden section on the log of the amplitude ratio.
pub fn find_ait_gap(
    pf: &PhaseFunction,
    s: &FieldState,
    range: (f64, f64),
    grid_n: usize,
    w: &Window,
) -> Result<AitScanResult> {
    let (lo, hi) = range;
    if !(lo > 0.0) || !(hi > lo) || !hi.is_finite() {
        return Err(Error::InvalidInput(format!(
            "scan range ({lo}, {hi}) must satisfy 0 < lo < hi"
        )));
    }
    if grid_n < 16 {
        return Err(Error::InvalidInput(format!("grid_n = {grid_n} must be at least 16")));
    }
    s.validate()?;
    if pf.is_inertial() {
        return Err(Error::NoDip("inertial worldline has no transparency structure".into()));
    }

    let grid = geometric_grid(lo, hi, grid_n);
    let table: Vec<ScanPoint> = grid
        .par_iter()
        .map(|&omega| scan_point(pf, s, omega, w))
        .collect::<Result<_>>()?;

    let key = |p: &ScanPoint| p.i_minus_sq / p.i_plus_sq;
    let best = table
        .iter()
        .enumerate()
        .min_by(|a, b| key(a.1).total_cmp(&key(b.1)))
        .map(|(i, _)| i)
        .expect("grid is non-empty");
    if best == 0 || best == grid_n - 1 {
        return Err(Error::NoDip(format!(
            "minimum of the ratio sits on the scan boundary Omega = {}",
            grid[best]
        )));
    }

    let objective = |omega: f64| -> Result<f64> {
        let ap = amplitude_pair(pf, omega, w)?;
        if ap.i_plus.norm_sqr() < DEGENERATE_FLOOR {
            return Err(Error::Degenerate(format!("|I+|² underflows at Omega = {omega}")));
        }
        Ok(ap.amplitude_ratio().ln())
    };
    let refined = golden_section(objective, grid[best - 1], grid[best + 1], GAP_REL_TOL, 500)?;

    let grid_best = &table[best];
    let (gap, point) = if refined.fx <= key(grid_best).ln() {
        (refined.x, scan_point(pf, s, refined.x, w)?)
    } else {
        (grid_best.omega, *grid_best)
    };
    Ok(AitScanResult {
        gap,
        ratio_at_gap: point.ratio,
        amplitude_ratio_at_gap: point.i_minus_sq / point.i_plus_sq,
        scan_table: table,
    })
}
