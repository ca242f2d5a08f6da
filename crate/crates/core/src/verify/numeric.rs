//! Floating-point checks of the noise-weighted orthogonality `X R^-1 X^H`.
//!
//! The per-symbol coefficients are fitted from single-symbol draws and then
//! confirmed on a fresh full symbol vector (and, for the no-CSI form, a fresh
//! first-hop draw with the same second hop, hence the same `R`).

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::{complex_normal, ChannelRealization};
use crate::code::{render_numeric, DistributedCode};
use crate::verify::covariance::{covariance_from_grams, relay_grams};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericOptions {
    pub draws: usize,
    /// Relative tolerance against `||X||_F^2`.
    pub tol: f64,
    pub seed: u64,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions {
            draws: 20,
            tol: 1e-9,
            seed: 0x0d05_7bc5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("at least one channel draw is required")]
    NoDraws,
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
}

impl NumericOptions {
    pub(crate) fn validate(&self) -> Result<(), VerifyError> {
        if self.draws == 0 {
            return Err(VerifyError::NoDraws);
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(VerifyError::BadTolerance(self.tol));
        }
        Ok(())
    }
}

pub(crate) struct NumericOutcome {
    pub violation: Option<(String, String)>,
    /// Profile fitted on the first draw, `[n][k]`.
    pub profile: Option<Vec<Vec<f64>>>,
    pub notes: Vec<String>,
}

fn to_matrix(rows: Vec<Vec<Complex64>>) -> DMatrix<Complex64> {
    let k = rows.len();
    let t = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(k, t, |i, j| rows[i][j])
}

fn nonzero_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let z = complex_normal(rng);
        if z.norm() > 0.1 && z.re.is_finite() && z.im.is_finite() {
            return z;
        }
    }
}

fn finite_channels(k: usize, rng: &mut ChaCha8Rng) -> ChannelRealization {
    loop {
        let ch = ChannelRealization::draw(k, rng);
        if ch.h().iter().chain(ch.f()).all(|z| z.re.is_finite() && z.im.is_finite()) {
            return ch;
        }
    }
}

/// Largest off-diagonal magnitude as `(i, j, |m_ij|)`.
fn worst_off_diagonal(m: &DMatrix<Complex64>) -> (usize, usize, f64) {
    let mut worst = (0, 0, 0.0);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j && m[(i, j)].norm() > worst.2 {
                worst = (i, j, m[(i, j)].norm());
            }
        }
    }
    worst
}

/// `cpi = false`: Definition-1 form with `D_n = diag[|h_k|^2 D_{n,k}]`.
/// `cpi = true`: Definition-2 form with `F_n = diag[F_{n,k}]`.
pub(crate) fn weighted_orthogonality(code: &DistributedCode, cpi: bool, opts: &NumericOptions) -> NumericOutcome {
    let label = if cpi { "Eq20" } else { "Eq12" };
    let coef = if cpi { "F" } else { "D" };
    let n = code.n_symbols();
    let k = code.n_relays();
    let grams = relay_grams(code);
    let mut first_profile = None;
    let mut notes = Vec::new();

    for draw in 0..opts.draws {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(draw as u64);
        let fit_ch = finite_channels(k, &mut rng);
        let r_inv = covariance_from_grams(&grams, fit_ch.f(), 1.0).inverse();
        let weight = |ch: &ChannelRealization, r: usize| if cpi { 1.0 } else { ch.h()[r].norm_sqr() };

        let product = |ch: &ChannelRealization, s: &[Complex64]| {
            let x = to_matrix(render_numeric(code, cpi, Some(ch), s).expect("dimensions match"));
            let scale = x.norm_squared();
            (&x * &r_inv * x.adjoint(), scale)
        };

        // Fit the per-symbol diagonal coefficients.
        let mut profile = vec![vec![0.0; k]; n];
        for sym in 0..n {
            let mut s = vec![Complex64::new(0.0, 0.0); n];
            s[sym] = nonzero_normal(&mut rng);
            let (m, scale) = product(&fit_ch, &s);
            let (i, j, off) = worst_off_diagonal(&m);
            if off > opts.tol * scale {
                return NumericOutcome {
                    violation: Some((
                        format!("{label} draw {} off-diagonal ({},{}) with s{} alone", draw + 1, i + 1, j + 1, sym + 1),
                        format!("|residual| = {off:.3e}, tolerance {:.3e}", opts.tol * scale),
                    )),
                    profile: first_profile,
                    notes,
                };
            }
            for r in 0..k {
                let d = m[(r, r)];
                if d.im.abs() > opts.tol * scale.max(f64::MIN_POSITIVE) {
                    return NumericOutcome {
                        violation: Some((
                            format!("{label} draw {} diagonal k={} not real", draw + 1, r + 1),
                            format!("{d}"),
                        )),
                        profile: first_profile,
                        notes,
                    };
                }
                profile[sym][r] = d.re / (weight(&fit_ch, r) * s[sym].norm_sqr());
            }
        }

        let max_abs = profile.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
        for (sym, row) in profile.iter().enumerate() {
            for (r, v) in row.iter().enumerate() {
                if v.abs() <= opts.tol * max_abs || max_abs == 0.0 {
                    return NumericOutcome {
                        violation: Some((
                            format!("{label} draw {} {coef}_{{{},{}}} vanishes", draw + 1, sym + 1, r + 1),
                            format!("{v:.3e} against max {max_abs:.3e}"),
                        )),
                        profile: first_profile,
                        notes,
                    };
                }
                if v.abs() <= 1e3 * opts.tol * max_abs {
                    notes.push(format!(
                        "draw {}: {coef}_{{{},{}}} = {v:.3e} is borderline",
                        draw + 1,
                        sym + 1,
                        r + 1
                    ));
                }
            }
        }

        // Confirm on a full symbol vector and a fresh first hop with the same second hop.
        let check_ch = if cpi {
            fit_ch.clone()
        } else {
            let fresh = finite_channels(k, &mut rng);
            ChannelRealization::new(fresh.h().to_vec(), fit_ch.f().to_vec())
        };
        let s: Vec<Complex64> = (0..n).map(|_| nonzero_normal(&mut rng)).collect();
        let (m, scale) = product(&check_ch, &s);
        let (i, j, off) = worst_off_diagonal(&m);
        if off > opts.tol * scale {
            return NumericOutcome {
                violation: Some((
                    format!("{label} draw {} off-diagonal ({},{})", draw + 1, i + 1, j + 1),
                    format!("|residual| = {off:.3e}, tolerance {:.3e}", opts.tol * scale),
                )),
                profile: first_profile,
                notes,
            };
        }
        for r in 0..k {
            let predicted: f64 = weight(&check_ch, r)
                * (0..n).map(|sym| s[sym].norm_sqr() * profile[sym][r]).sum::<f64>();
            let err = (m[(r, r)] - Complex64::new(predicted, 0.0)).norm();
            if err > opts.tol * scale {
                return NumericOutcome {
                    violation: Some((
                        format!("{label} draw {} diagonal k={} not a |s_n|^2 combination", draw + 1, r + 1),
                        format!("got {}, predicted {predicted:.6e}", m[(r, r)]),
                    )),
                    profile: first_profile,
                    notes,
                };
            }
        }
        if first_profile.is_none() {
            first_profile = Some(profile);
        }
    }
    NumericOutcome {
        violation: None,
        profile: first_profile,
        notes,
    }
}
