//! Closed-form integrals of `exp(i (q0 + q1 τ + q2 τ²))` over finite intervals.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::erf::faddeeva_upper;
use crate::error::{Error, Result};

/// Below this value of `|q2| (τb - τa)²` the linear branch is used.
pub const CURVATURE_THRESHOLD: f64 = 1e-8;

/// Quadratic phase `q0 + q1 τ + q2 τ²` in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadPhase {
    pub q0: f64,
    pub q1: f64,
    pub q2: f64,
}

impl QuadPhase {
    pub const fn new(q0: f64, q1: f64, q2: f64) -> Self {
        Self { q0, q1, q2 }
    }

    pub const fn linear(q0: f64, q1: f64) -> Self {
        Self { q0, q1, q2: 0.0 }
    }

    pub fn eval(&self, tau: f64) -> f64 {
        self.q0 + tau * (self.q1 + tau * self.q2)
    }

    pub fn slope(&self, tau: f64) -> f64 {
        self.q1 + 2.0 * self.q2 * tau
    }

    pub fn is_finite(&self) -> bool {
        self.q0.is_finite() && self.q1.is_finite() && self.q2.is_finite()
    }

    fn negated(&self) -> Self {
        Self::new(-self.q0, -self.q1, -self.q2)
    }
}

/// `∫_{τa}^{τb} exp(i φ(τ)) dτ` for a quadratic phase φ.
///
/// Reversed limits give the negated integral.
pub fn quad_phase_integral(p: &QuadPhase, tau_a: f64, tau_b: f64) -> Result<Complex64> {
    if !p.is_finite() || !tau_a.is_finite() || !tau_b.is_finite() {
        return Err(Error::InvalidInput(format!(
            "non-finite phase {p:?} or limits [{tau_a}, {tau_b}]"
        )));
    }
    if tau_a == tau_b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if tau_a > tau_b {
        return quad_phase_integral(p, tau_b, tau_a).map(|v| -v);
    }
    if p.q2 < 0.0 {
        return quad_phase_integral(&p.negated(), tau_a, tau_b).map(|v| v.conj());
    }
    let width = tau_b - tau_a;
    let value = if p.q2 * width * width < CURVATURE_THRESHOLD {
        linear_branch(p, tau_a, tau_b)
    } else {
        quadratic_branch(p, tau_a, tau_b)
    };
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::Accuracy(format!(
            "segment integral of {p:?} over [{tau_a}, {tau_b}] is not finite"
        )));
    }
    Ok(value)
}

/// Expansion about the midpoint, keeping the curvature to first order.
///
/// With `u = τ - m`, `h = (τb - τa)/2` and `p = φ'(m)`:
/// `∫ e^{iφ} = e^{iφ(m)} [∫ e^{ipu} du + i q2 ∫ u² e^{ipu} du] + O((q2 h²)²)`.
pub(crate) fn linear_branch(p: &QuadPhase, tau_a: f64, tau_b: f64) -> Complex64 {
    let mid = 0.5 * (tau_a + tau_b);
    let half = 0.5 * (tau_b - tau_a);
    let slope = p.slope(mid);
    let x = slope * half;
    let j0 = 2.0 * half * sinc(x);
    let j2 = 2.0 * half * half * half * cos_moment2(x);
    Complex64::from_polar(1.0, p.eval(mid)) * Complex64::new(j0, p.q2 * j2)
}

/// Error-function route, written in terms of the Faddeeva function so that
/// nothing is ever subtracted from 1 when both endpoints sit far from the
/// stationary point. Requires `q2 > 0`.
pub(crate) fn quadratic_branch(p: &QuadPhase, tau_a: f64, tau_b: f64) -> Complex64 {
    debug_assert!(p.q2 > 0.0);
    // φ(τ) = c + q2 (τ + s)²
    let shift = p.q1 / (2.0 * p.q2);
    let root = (0.5 * p.q2).sqrt();
    // w = sqrt(-i q2) = sqrt(q2/2) (1 - i);  i·w·u = sqrt(q2/2) (1 + i) u
    let w = Complex64::new(root, -root);
    let prefactor = PI.sqrt() / (2.0 * w);
    let ua = tau_a + shift;
    let ub = tau_b + shift;
    let upper = |u: f64| faddeeva_upper(Complex64::new(root * u, root * u));
    let lower = |u: f64| faddeeva_upper(Complex64::new(-root * u, -root * u));
    let ea = Complex64::from_polar(1.0, p.eval(tau_a));
    let eb = Complex64::from_polar(1.0, p.eval(tau_b));

    if ua >= 0.0 {
        prefactor * (ea * upper(ua) - eb * upper(ub))
    } else if ub <= 0.0 {
        prefactor * (eb * lower(ub) - ea * lower(ua))
    } else {
        // stationary point inside: |shift| < width keeps c well conditioned
        let c = p.q0 - p.q2 * shift * shift;
        prefactor * (2.0 * Complex64::from_polar(1.0, c) - eb * upper(ub) - ea * lower(ua))
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `∫_0^1 t² cos(x t) dt`
fn cos_moment2(x: f64) -> f64 {
    if x.abs() < 1.0 {
        // Σ (-1)^n x^{2n} / ((2n)! (2n + 3))
        let x2 = x * x;
        let mut term = 1.0;
        let mut sum = 1.0 / 3.0;
        for n in 1..12 {
            term *= -x2 / ((2 * n - 1) * (2 * n)) as f64;
            sum += term / (2 * n + 3) as f64;
        }
        sum
    } else {
        let (s, c) = x.sin_cos();
        s / x + 2.0 * c / (x * x) - 2.0 * s / (x * x * x)
    }
}
