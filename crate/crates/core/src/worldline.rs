//! Detector worldlines and the phase function `π(τ) = k^μ x_μ(τ)` of a
//! single massless field mode along them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::QuadPhase;

/// Declarative description of detector motion.
///
/// `PhaseSlope` describes the motion through the slope of the phase
/// function, `π̇ = k·profile(τ)` with a piecewise-linear profile:
/// `v0` before `τ = 0`, ramping to `v1` at `t1`, ramping to `v2` at `t2`,
/// constant afterwards.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WorldlineSpec {
    Eternal {
        a: f64,
    },
    PhaseSlope {
        v0: f64,
        v1: f64,
        v2: f64,
        t1: f64,
        t2: f64,
    },
}

impl WorldlineSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            WorldlineSpec::Eternal { a } => {
                if !(a > 0.0) || !a.is_finite() {
                    return Err(Error::Spec(format!("acceleration a = {a} must be positive and finite")));
                }
            }
            WorldlineSpec::PhaseSlope { v0, v1, v2, t1, t2 } => {
                for (name, v) in [("v0", v0), ("v1", v1), ("v2", v2)] {
                    if !v.is_finite() {
                        return Err(Error::Spec(format!("{name} = {v} is not finite")));
                    }
                }
                if !(t1 > 0.0) || !t1.is_finite() {
                    return Err(Error::Spec(format!("t1 = {t1} must be positive and finite")));
                }
                if !(t2 > t1) || !t2.is_finite() {
                    return Err(Error::Spec(format!("t2 = {t2} must be finite and exceed t1 = {t1}")));
                }
                let (a1, a2) = self.ramp_rates().expect("phase-slope spec");
                if !a1.is_finite() || !a2.is_finite() {
                    return Err(Error::Spec(format!("ramp rates a1 = {a1}, a2 = {a2} are not finite")));
                }
            }
        }
        Ok(())
    }

    /// `(a1, a2)` for phase-slope worldlines.
    pub fn ramp_rates(&self) -> Option<(f64, f64)> {
        match *self {
            WorldlineSpec::PhaseSlope { v0, v1, v2, t1, t2 } => Some(((v1 - v0) / t1, (v2 - v1) / (t2 - t1))),
            WorldlineSpec::Eternal { .. } => None,
        }
    }

    /// End of the accelerated stretch, if the worldline has one.
    pub fn accelerated_end(&self) -> Option<f64> {
        match *self {
            WorldlineSpec::PhaseSlope { t2, .. } => Some(t2),
            WorldlineSpec::Eternal { .. } => None,
        }
    }
}

/// One piece of a piecewise-quadratic phase, expressed in the local
/// variable `u = τ - origin` so that coefficients stay well scaled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSegment {
    /// Inclusive start; `-inf` for the first segment.
    pub start: f64,
    /// Exclusive end; `+inf` for the last segment.
    pub end: f64,
    pub origin: f64,
    pub phase: QuadPhase,
}

impl PhaseSegment {
    pub fn contains(&self, tau: f64) -> bool {
        self.start <= tau && tau < self.end
    }

    pub fn eval(&self, tau: f64) -> f64 {
        self.phase.eval(tau - self.origin)
    }

    pub fn slope(&self, tau: f64) -> f64 {
        self.phase.slope(tau - self.origin)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PhaseProfile {
    Piecewise(Vec<PhaseSegment>),
    /// `π(τ) = (k/a)(e^{-aτ} - 1)`, the right-moving mode seen from the
    /// eternally accelerated trajectory. Not quadratic; amplitudes on it go
    /// through the closed form or the quadrature path.
    Hyperbolic {
        a: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFunction {
    pub profile: PhaseProfile,
    pub mode_k: f64,
    /// Constant added to π everywhere.
    pub offset: f64,
}

impl PhaseFunction {
    /// Same function with `c` added to the phase.
    pub fn shifted(&self, c: f64) -> Self {
        Self {
            offset: self.offset + c,
            ..self.clone()
        }
    }

    pub fn segments(&self) -> Option<&[PhaseSegment]> {
        match &self.profile {
            PhaseProfile::Piecewise(s) => Some(s),
            PhaseProfile::Hyperbolic { .. } => None,
        }
    }

    /// Interior breakpoints of a piecewise profile.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.profile {
            PhaseProfile::Piecewise(s) => s.iter().skip(1).map(|seg| seg.start).collect(),
            PhaseProfile::Hyperbolic { .. } => Vec::new(),
        }
    }

    /// True when π̇ is the same constant everywhere.
    pub fn is_inertial(&self) -> bool {
        match &self.profile {
            PhaseProfile::Piecewise(s) => {
                let slope = s[0].phase.q1;
                s.iter().all(|seg| seg.phase.q2 == 0.0 && seg.phase.q1 == slope)
            }
            PhaseProfile::Hyperbolic { .. } => false,
        }
    }

    fn segment_at(segments: &[PhaseSegment], tau: f64) -> &PhaseSegment {
        segments
            .iter()
            .find(|s| s.contains(tau))
            .unwrap_or(&segments[segments.len() - 1])
    }

    pub fn slope(&self, tau: f64) -> f64 {
        match &self.profile {
            PhaseProfile::Piecewise(s) => Self::segment_at(s, tau).slope(tau),
            PhaseProfile::Hyperbolic { a } => -self.mode_k * (-a * tau).exp(),
        }
    }
}

/// Builds π(τ) for mode wavenumber `k` (ω_k = k), with `π(0) = 0`.
pub fn build_phase_function(spec: &WorldlineSpec, k: f64) -> Result<PhaseFunction> {
    spec.validate()?;
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::Spec(format!(
            "mode wavenumber k = {k} must be positive and finite"
        )));
    }
    let profile = match *spec {
        WorldlineSpec::Eternal { a } => PhaseProfile::Hyperbolic { a },
        WorldlineSpec::PhaseSlope { v0, v1, v2, t1, t2 } => {
            let (a1, a2) = spec.ramp_rates().expect("phase-slope spec");
            let d = t2 - t1;
            let p1 = k * (v0 * t1 + 0.5 * a1 * t1 * t1);
            let p2 = p1 + k * (v1 * d + 0.5 * a2 * d * d);
            PhaseProfile::Piecewise(vec![
                PhaseSegment {
                    start: f64::NEG_INFINITY,
                    end: 0.0,
                    origin: 0.0,
                    phase: QuadPhase::linear(0.0, k * v0),
                },
                PhaseSegment {
                    start: 0.0,
                    end: t1,
                    origin: 0.0,
                    phase: QuadPhase::new(0.0, k * v0, 0.5 * k * a1),
                },
                PhaseSegment {
                    start: t1,
                    end: t2,
                    origin: t1,
                    phase: QuadPhase::new(p1, k * v1, 0.5 * k * a2),
                },
                PhaseSegment {
                    start: t2,
                    end: f64::INFINITY,
                    origin: t2,
                    phase: QuadPhase::linear(p2, k * v2),
                },
            ])
        }
    };
    Ok(PhaseFunction {
        profile,
        mode_k: k,
        offset: 0.0,
    })
}

/// π(τ) from the containing segment.
pub fn eval_phase(pf: &PhaseFunction, tau: f64) -> f64 {
    let base = match &pf.profile {
        PhaseProfile::Piecewise(s) => PhaseFunction::segment_at(s, tau).eval(tau),
        PhaseProfile::Hyperbolic { a } => pf.mode_k / a * (-a * tau).exp_m1(),
    };
    base + pf.offset
}

/// Eternal uniform acceleration: `(t, z) = (sinh aτ, cosh aτ) / a`.
pub fn uniform_trajectory(a: f64, tau: f64) -> (f64, f64) {
    ((a * tau).sinh() / a, (a * tau).cosh() / a)
}
