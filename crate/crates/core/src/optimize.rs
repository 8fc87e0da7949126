//! Golden-section minimisation on a bracket.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub fx: f64,
    pub evaluations: usize,
}

/// Minimises `f` on `[lo, hi]` until the bracket is narrower than
/// `rel_tol * |x|`.
///
/// The returned point is the best interior point evaluated; for a unimodal
/// `f` this is within the final bracket of the true minimiser.
pub fn golden_section<F>(f: F, lo: f64, hi: f64, rel_tol: f64, max_iter: usize) -> Result<Minimum>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidInput(format!("bad bracket [{lo}, {hi}]")));
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut evaluations = 2;
    let mut iter = 0;
    while (b - a) > rel_tol * c.abs().max(d.abs()) {
        if iter == max_iter {
            return Err(Error::Convergence(format!(
                "golden section did not reach {rel_tol:e} in {max_iter} iterations"
            )));
        }
        iter += 1;
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
        evaluations += 1;
    }
    let (x, fx) = if fc <= fd { (c, fc) } else { (d, fd) };
    Ok(Minimum { x, fx, evaluations })
}
