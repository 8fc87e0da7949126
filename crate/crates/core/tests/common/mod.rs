#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite 20-point Gauss-Legendre with panels no wider than `max_h`.
pub fn composite_gl<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, max_h: f64) -> Complex64 {
    let rule = gauss_legendre(20);
    let n = ((b - a) / max_h).ceil().max(1.0) as usize;
    let h = (b - a) / n as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for p in 0..n {
        let lo = a + p as f64 * h;
        let c = lo + 0.5 * h;
        let mut panel = Complex64::new(0.0, 0.0);
        for &(x, w) in &rule {
            panel += w * f(c + 0.5 * h * x);
        }
        sum += panel * (0.5 * h);
    }
    sum
}

/// `∫_a^b exp(i(q0 + q1 τ + q2 τ²)) dτ` with panels of at most half a local period.
pub fn quad_phase_oracle(q0: f64, q1: f64, q2: f64, a: f64, b: f64) -> Complex64 {
    let fmax = q1.abs() + 2.0 * q2.abs() * a.abs().max(b.abs());
    let h = if fmax > 0.0 { (PI / fmax).min(b - a) } else { b - a };
    composite_gl(
        |t| Complex64::from_polar(1.0, q0 + t * (q1 + t * q2)),
        a,
        b,
        h.max(1e-6),
    )
}

pub fn rel_err(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm()
}
