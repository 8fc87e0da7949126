//! Transition amplitudes `I±(Ω) = ∫ χ(τ) exp(i(Ωτ ± π(τ))) dτ`.
//!
//! `I-` weights stimulated absorption and `I+` the Unruh (counter-rotating)
//! process. The coupling constant is not included; it is applied downstream.
//!
//! The switching function χ is 1 on a finite [`Window`] and is continued
//! outside it according to [`Tails`]:
//!
//! * `Sharp`: χ = 0 outside the window.
//! * `CosineRamp`: χ rises as sin² over `width` at each end of the window.
//! * `Adiabatic`: the inertial tails are integrated analytically with an
//!   exponentially slow switch-off `e^{-ε|τ|}`, `ε → 0`. For a linear phase
//!   this leaves exactly `e^{iΦ}/(iΦ')` at each window edge, so the result
//!   does not depend on where the window edges sit inside the tails. For a
//!   curved tail phase the same term is the leading one, with a relative
//!   correction of order `Φ''/Φ'²` at the edge.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_panels, QuadResult, QuadSettings};
use crate::specfun::{ln_gamma, quad_phase_integral, QuadPhase};
use crate::worldline::{eval_phase, PhaseFunction, PhaseProfile, WorldlineSpec};

/// Default tail padding as a fraction of the accelerated stretch.
pub const DEFAULT_PAD_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Tails {
    Sharp,
    CosineRamp { width: f64 },
    Adiabatic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub tau_min: f64,
    pub tau_max: f64,
    pub tails: Tails,
}

impl Window {
    pub fn new(tau_min: f64, tau_max: f64, tails: Tails) -> Result<Self> {
        if !tau_min.is_finite() || !tau_max.is_finite() || !(tau_min < tau_max) {
            return Err(Error::InvalidInput(format!(
                "window [{tau_min}, {tau_max}] must be finite with tau_min < tau_max"
            )));
        }
        if let Tails::CosineRamp { width } = tails {
            if !(width > 0.0) || 2.0 * width > tau_max - tau_min {
                return Err(Error::InvalidInput(format!(
                    "ramp width {width} must be positive and fit twice into the window"
                )));
            }
        }
        Ok(Self {
            tau_min,
            tau_max,
            tails,
        })
    }

    pub fn sharp(tau_min: f64, tau_max: f64) -> Result<Self> {
        Self::new(tau_min, tau_max, Tails::Sharp)
    }

    /// `[-pad, T2 + pad]` with `pad = pad_fraction · T2`.
    pub fn padded(spec: &WorldlineSpec, pad_fraction: f64, tails: Tails) -> Result<Self> {
        let t2 = spec.accelerated_end().ok_or_else(|| {
            Error::UnsupportedWorldline("padded windows need a worldline with a finite accelerated stretch".into())
        })?;
        if !(pad_fraction > 0.0) || !pad_fraction.is_finite() {
            return Err(Error::InvalidInput(format!(
                "pad fraction {pad_fraction} must be positive"
            )));
        }
        let pad = pad_fraction * t2;
        Self::new(-pad, t2 + pad, tails)
    }

    pub fn span(&self) -> f64 {
        self.tau_max - self.tau_min
    }

    /// Lengthens the parts of the window outside `[core_lo, core_hi]` by `factor`.
    pub fn extend_tails(&self, factor: f64, core_lo: f64, core_hi: f64) -> Result<Self> {
        let lo = core_lo - factor * (core_lo - self.tau_min).max(0.0);
        let hi = core_hi + factor * (self.tau_max - core_hi).max(0.0);
        Self::new(lo, hi, self.tails)
    }

    /// Rejects windows that cut into the accelerated stretch.
    pub fn check_covers(&self, pf: &PhaseFunction) -> Result<()> {
        let bps = pf.breakpoints();
        if let (Some(&first), Some(&last)) = (bps.first(), bps.last()) {
            if self.tau_min > first || self.tau_max < last {
                return Err(Error::InvalidInput(format!(
                    "window [{}, {}] must contain the accelerated stretch [{first}, {last}]",
                    self.tau_min, self.tau_max
                )));
            }
        }
        Ok(())
    }

    /// χ(τ) inside the window.
    pub fn switching(&self, tau: f64) -> f64 {
        match self.tails {
            Tails::CosineRamp { width } => {
                let edge = (tau - self.tau_min).min(self.tau_max - tau);
                if edge >= width {
                    1.0
                } else {
                    let s = (0.5 * PI * edge / width).sin();
                    s * s
                }
            }
            _ => 1.0,
        }
    }

    // Pieces of the window with χ written as Σ coef·e^{i(c0 + c1 τ)}.
    fn pieces(&self) -> Vec<(f64, f64, Vec<ExpTerm>)> {
        let flat = vec![ExpTerm {
            coef: 1.0,
            c0: 0.0,
            c1: 0.0,
        }];
        match self.tails {
            Tails::CosineRamp { width } => {
                let kappa = PI / width;
                let up = vec![
                    ExpTerm {
                        coef: 0.5,
                        c0: 0.0,
                        c1: 0.0,
                    },
                    ExpTerm {
                        coef: -0.25,
                        c0: -kappa * self.tau_min,
                        c1: kappa,
                    },
                    ExpTerm {
                        coef: -0.25,
                        c0: kappa * self.tau_min,
                        c1: -kappa,
                    },
                ];
                let down = vec![
                    ExpTerm {
                        coef: 0.5,
                        c0: 0.0,
                        c1: 0.0,
                    },
                    ExpTerm {
                        coef: -0.25,
                        c0: kappa * self.tau_max,
                        c1: -kappa,
                    },
                    ExpTerm {
                        coef: -0.25,
                        c0: -kappa * self.tau_max,
                        c1: kappa,
                    },
                ];
                let mut out = vec![(self.tau_min, self.tau_min + width, up)];
                if self.tau_max - width > self.tau_min + width {
                    out.push((self.tau_min + width, self.tau_max - width, flat));
                }
                out.push((self.tau_max - width, self.tau_max, down));
                out
            }
            _ => vec![(self.tau_min, self.tau_max, flat)],
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct ExpTerm {
    coef: f64,
    c0: f64,
    c1: f64,
}

/// Amplitude pair for one gap and mode, with the inputs that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudePair {
    pub i_minus: Complex64,
    pub i_plus: Complex64,
    pub omega: f64,
    pub k: f64,
    pub window: Window,
}

impl AmplitudePair {
    /// `|I-|² / |I+|²`
    pub fn amplitude_ratio(&self) -> f64 {
        self.i_minus.norm_sqr() / self.i_plus.norm_sqr()
    }
}

fn total_phase_slope(pf: &PhaseFunction, omega: f64, s: f64, tau: f64) -> f64 {
    omega + s * pf.slope(tau)
}

// Boundary terms of the adiabatically switched inertial tails.
fn adiabatic_tails(pf: &PhaseFunction, omega: f64, s: f64, w: &Window) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for (tau, sense) in [(w.tau_min, 1.0), (w.tau_max, -1.0)] {
        let slope = total_phase_slope(pf, omega, s, tau);
        let scale = omega.abs() + pf.slope(tau).abs();
        if slope.abs() <= 1e-12 * scale || slope == 0.0 {
            return Err(Error::Resonance { omega });
        }
        let phase = omega * tau + s * eval_phase(pf, tau);
        sum += sense * Complex64::from_polar(1.0, phase) / Complex64::new(0.0, slope);
    }
    Ok(sum)
}

fn ensure_finite(v: Complex64, what: &str) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Accuracy(format!("{what} is not finite")))
    }
}

/// Closed-form `I±` for piecewise-quadratic phases: the window is cut at
/// every breakpoint and each piece is a quadratic-phase integral.
pub fn amplitude_analytic(pf: &PhaseFunction, omega: f64, sign: Sign, w: &Window) -> Result<Complex64> {
    let segments = match &pf.profile {
        PhaseProfile::Piecewise(s) => s,
        PhaseProfile::Hyperbolic { .. } => {
            return Err(Error::UnsupportedWorldline(
                "eternal acceleration has no piecewise-quadratic phase; use the closed form".into(),
            ))
        }
    };
    if !omega.is_finite() {
        return Err(Error::InvalidInput(format!("gap {omega} is not finite")));
    }
    w.check_covers(pf)?;
    let s = sign.factor();
    let mut total = Complex64::new(0.0, 0.0);
    for (lo, hi, terms) in w.pieces() {
        for seg in segments {
            let a = lo.max(seg.start);
            let b = hi.min(seg.end);
            if a >= b {
                continue;
            }
            let o = seg.origin;
            for t in &terms {
                let phase = QuadPhase::new(
                    omega * o + s * (seg.phase.q0 + pf.offset) + t.c0 + t.c1 * o,
                    omega + s * seg.phase.q1 + t.c1,
                    s * seg.phase.q2,
                );
                total += t.coef * quad_phase_integral(&phase, a - o, b - o)?;
            }
        }
    }
    if w.tails == Tails::Adiabatic {
        total += adiabatic_tails(pf, omega, s, w)?;
    }
    ensure_finite(total, "amplitude")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericSettings {
    pub quad: QuadSettings,
    /// Upper bound on `(|Ω| + max|π̇|)·span / 2π`.
    pub max_oscillations: f64,
}

impl Default for NumericSettings {
    fn default() -> Self {
        Self {
            quad: QuadSettings::default(),
            max_oscillations: 1e6,
        }
    }
}

/// Quadrature path for `I±`, used as the oracle for [`amplitude_analytic`].
pub fn amplitude_numeric(pf: &PhaseFunction, omega: f64, sign: Sign, w: &Window) -> Result<Complex64> {
    amplitude_numeric_with(pf, omega, sign, w, &NumericSettings::default()).map(|r| r.value)
}

pub fn amplitude_numeric_with(
    pf: &PhaseFunction,
    omega: f64,
    sign: Sign,
    w: &Window,
    settings: &NumericSettings,
) -> Result<QuadResult> {
    if !omega.is_finite() {
        return Err(Error::InvalidInput(format!("gap {omega} is not finite")));
    }
    w.check_covers(pf)?;
    let s = sign.factor();

    // Fixed points of the panel layout: window edges, breakpoints, ramp ends.
    let mut marks = vec![w.tau_min, w.tau_max];
    marks.extend(pf.breakpoints().into_iter().filter(|&t| t > w.tau_min && t < w.tau_max));
    if let Tails::CosineRamp { width } = w.tails {
        marks.push(w.tau_min + width);
        marks.push(w.tau_max - width);
    }
    marks.sort_by(f64::total_cmp);
    marks.dedup();

    let max_slope = marks.iter().map(|&t| pf.slope(t).abs()).fold(0.0, f64::max);
    let oscillations = (omega.abs() + max_slope) * w.span() / (2.0 * PI);
    if oscillations > settings.max_oscillations {
        return Err(Error::Convergence(format!(
            "{oscillations:.3e} oscillations exceed the budget of {:.3e}",
            settings.max_oscillations
        )));
    }

    // About one local period per initial panel.
    let freq = |t: f64| omega.abs() + pf.slope(t).abs();
    let mut edges = vec![marks[0]];
    for pair in marks.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let mut t = lo;
        while t < hi {
            let h0 = 2.0 * PI / freq(t).max(1e-300);
            let h = (2.0 * PI / freq(t).max(freq((t + h0).min(hi))).max(1e-300)).min(hi - t);
            t = if hi - (t + h) < 1e-9 * h { hi } else { t + h };
            edges.push(t);
        }
    }

    let integrand = |tau: f64| {
        let phase = omega * tau + s * eval_phase(pf, tau);
        Complex64::from_polar(w.switching(tau), phase)
    };
    let mut result = integrate_panels(integrand, &edges, &settings.quad)?;
    if w.tails == Tails::Adiabatic {
        result.value += adiabatic_tails(pf, omega, s, w)?;
    }
    Ok(result)
}

/// Both amplitudes from the closed-form path.
pub fn amplitude_pair(pf: &PhaseFunction, omega: f64, w: &Window) -> Result<AmplitudePair> {
    Ok(AmplitudePair {
        i_minus: amplitude_analytic(pf, omega, Sign::Minus, w)?,
        i_plus: amplitude_analytic(pf, omega, Sign::Plus, w)?,
        omega,
        k: pf.mode_k,
        window: *w,
    })
}

/// Closed-form Unruh amplitude for eternal uniform acceleration (k = 1):
/// `I+ = (-i / (4aπ√π)) e^{-i/a} e^{i(Ω/a) ln(-i/a)} Γ(-iΩ/a)`,
/// with the principal branch `ln(-i/a) = ln(1/a) - iπ/2`.
pub fn eternal_unruh_amplitude(omega: f64, a: f64) -> Result<Complex64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidInput(format!("acceleration a = {a} must be positive")));
    }
    if !omega.is_finite() {
        return Err(Error::InvalidInput(format!("gap {omega} is not finite")));
    }
    let x = omega / a;
    let log_branch = Complex64::new((1.0 / a).ln(), -0.5 * PI);
    let i = Complex64::i();
    let exponent = ln_gamma(Complex64::new(0.0, -x))? + i * x * log_branch - i / a;
    let prefactor = -i / (4.0 * a * PI * PI.sqrt());
    ensure_finite(prefactor * exponent.exp(), "eternal amplitude")
}

/// Planck-form response of an eternally accelerated detector,
/// `2π / (Ωa (e^{Ω/T_U} - 1))` with `T_U = a/2π`.
pub fn unruh_transition_probability(omega: f64, a: f64) -> f64 {
    2.0 * PI / (omega * a * (2.0 * PI * omega / a).exp_m1())
}
