//! Destination noise covariance `R = sum_k |rho f_k|^2 (A_k^H A_k + B_k^H B_k) + I`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::channel::ChannelRealization;
use crate::code::DistributedCode;
use crate::gauss::GaussianIntMatrix;

/// The `T x T` Hermitian positive-definite noise covariance of one realization.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseCovariance(pub DMatrix<Complex64>);

impl NoiseCovariance {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn is_diagonal(&self) -> bool {
        let m = &self.0;
        (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| i == j || m[(i, j)] == Complex64::new(0.0, 0.0)))
    }

    /// Inverse via Cholesky; the identity summand keeps every eigenvalue >= 1.
    pub fn inverse(&self) -> DMatrix<Complex64> {
        self.0
            .clone()
            .cholesky()
            .expect("noise covariance is positive definite")
            .inverse()
    }

    /// Smallest eigenvalue of the Hermitian matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        self.0
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CovarianceError {
    #[error("channel realization has {found} relays, code has {expected}")]
    RelayCount { expected: usize, found: usize },
    #[error("amplifying coefficient must be positive and finite, got {0}")]
    BadRho(f64),
}

/// Per-relay exact Gram matrices `A_k^H A_k + B_k^H B_k`.
pub fn relay_grams(code: &DistributedCode) -> Vec<GaussianIntMatrix> {
    code.relays()
        .iter()
        .map(|p| {
            let a = p.a.to_gauss();
            let b = p.b.to_gauss();
            &(&a.adjoint() * &a) + &(&b.adjoint() * &b)
        })
        .collect()
}

pub fn noise_covariance(
    code: &DistributedCode,
    channels: &ChannelRealization,
    rho: f64,
) -> Result<NoiseCovariance, CovarianceError> {
    if channels.relays() != code.n_relays() {
        return Err(CovarianceError::RelayCount {
            expected: code.n_relays(),
            found: channels.relays(),
        });
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(CovarianceError::BadRho(rho));
    }
    Ok(covariance_from_grams(&relay_grams(code), channels.f(), rho))
}

pub(crate) fn covariance_from_grams(grams: &[GaussianIntMatrix], f: &[Complex64], rho: f64) -> NoiseCovariance {
    let t = grams.first().map_or(0, |g| g.rows());
    let mut r = DMatrix::<Complex64>::identity(t, t);
    for (g, fk) in grams.iter().zip(f) {
        let w = (rho * fk.norm()).powi(2);
        for i in 0..t {
            for j in 0..t {
                let v = g[(i, j)];
                if !v.is_zero() {
                    r[(i, j)] += v.to_complex() * w;
                }
            }
        }
    }
    NoiseCovariance(r)
}
