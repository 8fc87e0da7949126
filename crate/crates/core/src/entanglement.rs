//! Two-detector X-states and their concurrence.
//!
//! Both detectors start in `c_ge|ge⟩ + c_eg|eg⟩` and each couples to the
//! field through its own channel. The evolved state keeps the X shape in the
//! basis `|gg⟩, |ge⟩, |eg⟩, |ee⟩`.

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::amplitudes::AmplitudePair;
use crate::error::{Error, Result};

/// Normalised diagonals above this negativity are clipped to zero.
pub const POSITIVITY_SLACK: f64 = 1e-9;

/// Perturbative parameter above which results deserve a warning.
pub const PERTURBATIVE_WARN: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialAmplitudes {
    pub c_ge: Complex64,
    pub c_eg: Complex64,
}

impl InitialAmplitudes {
    pub fn new(c_ge: Complex64, c_eg: Complex64) -> Result<Self> {
        let norm = c_ge.norm_sqr() + c_eg.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "normalization: |c_ge|² + |c_eg|² = {norm}, expected 1"
            )));
        }
        Ok(Self { c_ge, c_eg })
    }

    /// `(|ge⟩ + |eg⟩)/√2`
    pub fn bell() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            c_ge: Complex64::new(h, 0.0),
            c_eg: Complex64::new(h, 0.0),
        }
    }

    /// Concurrence of the initial state, `2|c_ge c_eg|`.
    pub fn concurrence(&self) -> f64 {
        2.0 * (self.c_ge * self.c_eg).norm()
    }
}

/// Per-detector inputs: amplitudes without coupling, occupation, coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorChannel {
    pub i_minus: Complex64,
    pub i_plus: Complex64,
    pub mean_n: f64,
    pub lambda: f64,
}

impl DetectorChannel {
    pub fn new(ap: &AmplitudePair, mean_n: f64, lambda: f64) -> Self {
        Self {
            i_minus: ap.i_minus,
            i_plus: ap.i_plus,
            mean_n,
            lambda,
        }
    }

    /// `λ²(⟨n⟩+1)·max(|I-|², |I+|²)`; first-order results need this ≪ 1.
    pub fn perturbative_parameter(&self) -> f64 {
        self.lambda * self.lambda * (self.mean_n + 1.0) * self.i_minus.norm_sqr().max(self.i_plus.norm_sqr())
    }

    fn validate(&self) -> Result<()> {
        if !(self.mean_n >= 0.0) || !(self.lambda >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "channel needs mean_n >= 0 and lambda >= 0, got {} and {}",
                self.mean_n, self.lambda
            )));
        }
        Ok(())
    }
}

/// Trace-normalised X-state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState {
    pub d11: f64,
    pub d22: f64,
    pub d33: f64,
    pub d44: f64,
    /// ⟨ee|ρ|gg⟩, shown at the (1,4) corner.
    pub x41: Complex64,
    /// ⟨eg|ρ|ge⟩, shown at the (2,3) position.
    pub x32: Complex64,
    /// Trace before normalisation.
    pub trace_norm: f64,
}

impl XState {
    pub fn trace(&self) -> f64 {
        self.d11 + self.d22 + self.d33 + self.d44
    }

    pub fn to_matrix(&self) -> Matrix4<Complex64> {
        let r = |x: f64| Complex64::new(x, 0.0);
        let z = Complex64::new(0.0, 0.0);
        #[rustfmt::skip]
        let m = Matrix4::new(
            r(self.d11), z, z, self.x41,
            z, r(self.d22), self.x32, z,
            z, self.x32.conj(), r(self.d33), z,
            self.x41.conj(), z, z, r(self.d44),
        );
        m
    }
}

/// Evolved X-state to the order of the first-order evolution operator.
///
/// Every amplitude carries its detector's coupling. Elements with one
/// amplitude pair per detector are second order in λ; the corrections
/// inside the `|ge⟩`/`|eg⟩` block are fourth order.
pub fn evolve_xstate(init: &InitialAmplitudes, a: &DetectorChannel, b: &DetectorChannel) -> Result<XState> {
    a.validate()?;
    b.validate()?;
    let worst = a.perturbative_parameter().max(b.perturbative_parameter());
    if worst > PERTURBATIVE_WARN {
        log::debug!("perturbative parameter {worst:.3e} exceeds {PERTURBATIVE_WARN}");
    }

    let (al, be) = (init.c_ge, init.c_eg);
    let (a2, b2) = (al.norm_sqr(), be.norm_sqr());
    let (na, nb) = (a.mean_n, b.mean_n);
    let ima = a.i_minus * a.lambda;
    let ipa = a.i_plus * a.lambda;
    let imb = b.i_minus * b.lambda;
    let ipb = b.i_plus * b.lambda;
    let (ima2, ipa2, imb2, ipb2) = (ima.norm_sqr(), ipa.norm_sqr(), imb.norm_sqr(), ipb.norm_sqr());

    let r11 = a2 * (nb * ipb2 + (nb + 1.0) * imb2) + b2 * na * ipa2 + b2 * (na + 1.0) * ima2;

    let r41 = (2.0 * nb + 1.0) * al.conj() * be * imb * ipb + be.conj() * al * (2.0 * na + 1.0) * ipa * ima;

    let r22 = a2
        + b2 * ipa2 * na * (nb + 1.0) * ipb2
        + b2 * ima2 * na * nb * ipb2
        + b2 * ima2 * (na + 1.0) * (nb + 1.0) * ipb2
        + b2 * ima2 * nb * (na + 1.0) * imb2;

    let ba = be.conj() * al;
    let r32 = al.conj() * be
        + ba * na * (nb + 1.0) * ipa * ipb.conj() * ima * imb.conj()
        + ba * na * nb * ipa * imb.conj() * ima * ipb.conj()
        + ba * (na + 1.0) * (nb + 1.0) * ima * ipb.conj() * ipa * imb.conj()
        + ba * (na + 1.0) * nb * ima * imb.conj() * ipa * ipb.conj();

    let r33 = b2
        + a2 * ima2 * na * (nb + 1.0) * imb2
        + a2 * ima2 * na * nb * ipb2
        + a2 * ipa2 * (na + 1.0) * (nb + 1.0) * imb2
        + a2 * ipa2 * (na + 1.0) * nb * ipb2;

    let r44 = b2 * (nb * imb2 + (nb + 1.0) * ipb2) + a2 * (na * ima2 + (na + 1.0) * ipa2);

    let trace = r11 + r22 + r33 + r44;
    if !(trace > 0.0) || !trace.is_finite() {
        return Err(Error::Positivity(format!("trace {trace} is not positive")));
    }
    let mut diag = [r11 / trace, r22 / trace, r33 / trace, r44 / trace];
    for (i, d) in diag.iter_mut().enumerate() {
        if *d < -POSITIVITY_SLACK {
            return Err(Error::Positivity(format!(
                "normalised diagonal element {} is {d:e}; first-order evolution has broken down",
                i + 1
            )));
        }
        *d = d.max(0.0);
    }
    Ok(XState {
        d11: diag[0],
        d22: diag[1],
        d33: diag[2],
        d44: diag[3],
        x41: r41 / trace,
        x32: r32 / trace,
        trace_norm: trace,
    })
}

/// `C = 2 max(0, |ρ23| - √(ρ11ρ44), |ρ41| - √(ρ22ρ33))`.
pub fn concurrence_xstate(rho: &XState) -> f64 {
    let c1 = rho.x32.norm() - (rho.d11 * rho.d44).sqrt();
    let c2 = rho.x41.norm() - (rho.d22 * rho.d33).sqrt();
    2.0 * c1.max(c2).max(0.0)
}

/// Wootters concurrence of a general two-qubit density matrix.
///
/// Uses the eigenvalues of `√ρ ρ̃ √ρ`, which share the spectrum of `ρρ̃`
/// but are Hermitian, so a symmetric eigensolver applies.
pub fn concurrence_wootters(rho: &Matrix4<Complex64>) -> Result<f64> {
    let herm_err = (rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if herm_err > 1e-9 {
        return Err(Error::Shape(format!(
            "matrix is not Hermitian (deviation {herm_err:e})"
        )));
    }
    let rho = (rho + rho.adjoint()) * Complex64::new(0.5, 0.0);

    let eig = SymmetricEigen::new(rho);
    if let Some(&low) = eig.eigenvalues.iter().min_by(|x, y| x.total_cmp(y)) {
        if low < -1e-9 {
            return Err(Error::Shape(format!("matrix has eigenvalue {low:e} < 0")));
        }
    }
    let clipped = eig.eigenvalues.map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0));
    let sqrt_rho = &eig.eigenvectors * Matrix4::from_diagonal(&clipped) * eig.eigenvectors.adjoint();

    // σy ⊗ σy
    let r = |x: f64| Complex64::new(x, 0.0);
    let z = r(0.0);
    #[rustfmt::skip]
    let yy = Matrix4::new(
        z, z, z, r(-1.0),
        z, z, r(1.0), z,
        z, r(1.0), z, z,
        r(-1.0), z, z, z,
    );
    let flipped = yy * rho.map(|c| c.conj()) * yy;
    let m = &sqrt_rho * flipped * &sqrt_rho;
    let m = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut lam: Vec<f64> = SymmetricEigen::new(m)
        .eigenvalues
        .iter()
        .map(|&l| l.max(0.0).sqrt())
        .collect();
    lam.sort_by(|x, y| y.total_cmp(x));
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).max(0.0))
}
