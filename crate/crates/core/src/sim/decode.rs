//! Destination ML decoding with the noise-whitened metric
//! `(y - wX) R^-1 (y - wX)^H`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::channel::ChannelRealization;
use crate::code::DistributedCode;
use crate::sim::constellation::Constellation;
use crate::sim::link::{CompiledCode, PowerConfig};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const JOINT_BUDGET: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error("{count} joint hypotheses exceed the budget of {budget}")]
    HypothesisBudget { count: String, budget: u128 },
}

/// `R^-1`, kept as a vector when `R` is diagonal.
#[derive(Clone, Debug)]
pub(crate) enum Whitener {
    Diagonal(Vec<f64>),
    Full(DMatrix<Complex64>),
}

impl Whitener {
    fn new(code: &CompiledCode, f: &[Complex64], rho: f64) -> Self {
        match &code.gram_diag {
            Some(diag) => {
                let mut r = vec![1.0; code.t];
                for (d, fk) in diag.iter().zip(f) {
                    let w = (rho * fk.norm()).powi(2);
                    for (rt, dt) in r.iter_mut().zip(d) {
                        *rt += w * dt;
                    }
                }
                Whitener::Diagonal(r.into_iter().map(f64::recip).collect())
            }
            None => {
                let r = crate::verify::covariance_from_grams(&code.grams, f, rho);
                assert!(r.min_eigenvalue() >= 1.0 - 1e-9, "noise covariance must have eigenvalues >= 1");
                Whitener::Full(r.inverse())
            }
        }
    }

    /// `v R^-1` for a row vector `v`.
    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        match self {
            Whitener::Diagonal(d) => v.iter().zip(d).map(|(x, w)| x * w).collect(),
            Whitener::Full(m) => (0..v.len())
                .map(|j| v.iter().enumerate().map(|(i, x)| x * m[(i, j)]).sum())
                .collect(),
        }
    }

    /// `u R^-1 v^H`.
    fn quad(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        match self {
            Whitener::Diagonal(d) => u.iter().zip(v).zip(d).map(|((a, b), w)| a * b.conj() * w).sum(),
            Whitener::Full(_) => dot_conj(&self.apply(u), v),
        }
    }
}

/// `y = sum_n (s_n a_n + s_n* b_n) + noise` for one channel realization.
#[derive(Clone, Debug)]
pub(crate) struct EffectiveModel {
    a: Vec<Vec<Complex64>>,
    b: Vec<Vec<Complex64>>,
    whitener: Whitener,
}

fn dot_conj(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

impl EffectiveModel {
    pub fn new(code: &CompiledCode, channels: &ChannelRealization, rho: f64, cpi: bool) -> Self {
        let mut a = vec![vec![ZERO; code.t]; code.n];
        let mut b = vec![vec![ZERO; code.t]; code.n];
        for (k, entries) in code.relays.iter().enumerate() {
            let h = channels.h()[k];
            let (wa, wb) = if cpi {
                let w = rho * channels.f()[k] * h.norm();
                (w, w)
            } else {
                let w = rho * channels.f()[k];
                (w * h, w * h.conj())
            };
            for e in entries {
                if e.conj {
                    b[e.symbol][e.slot] += wb * e.coeff;
                } else {
                    a[e.symbol][e.slot] += wa * e.coeff;
                }
            }
        }
        EffectiveModel {
            a,
            b,
            whitener: Whitener::new(code, channels.f(), rho),
        }
    }

    /// Per-symbol minimization of
    /// `-2 Re{s* p a^H + s p b^H} + |s|^2 (a R^-1 a^H + b R^-1 b^H) + 2 Re{s^2 a R^-1 b^H}`
    /// with `p = y R^-1`; ties go to the lower label.
    pub fn ss_decode(&self, y: &[Complex64], points: &[Complex64]) -> Vec<usize> {
        let p = self.whitener.apply(y);
        (0..self.a.len())
            .map(|n| {
                let (a, b) = (&self.a[n], &self.b[n]);
                let pa = dot_conj(&p, a);
                let pb = dot_conj(&p, b);
                let alpha = (self.whitener.quad(a, a) + self.whitener.quad(b, b)).re;
                let beta = self.whitener.quad(a, b);
                let mut best = (f64::INFINITY, 0);
                for (label, &s) in points.iter().enumerate() {
                    let m = -2.0 * (s.conj() * pa + s * pb).re + s.norm_sqr() * alpha + 2.0 * (s * s * beta).re;
                    if m < best.0 {
                        best = (m, label);
                    }
                }
                best.1
            })
            .collect()
    }

    /// Full metric of one hypothesis.
    pub fn metric(&self, y: &[Complex64], symbols: &[Complex64]) -> f64 {
        let mut e = y.to_vec();
        for (n, s) in symbols.iter().enumerate() {
            for t in 0..e.len() {
                e[t] -= s * self.a[n][t] + s.conj() * self.b[n][t];
            }
        }
        self.whitener.quad(&e, &e).re
    }

    /// Exhaustive minimization over all hypotheses in lexicographic label
    /// order (symbol 1 most significant); ties go to the earliest hypothesis.
    pub fn joint_decode(&self, y: &[Complex64], points: &[Complex64]) -> Result<Vec<usize>, DecodeError> {
        let n = self.a.len();
        let m = points.len();
        let count = (m as u128).checked_pow(n as u32);
        let total = match count {
            Some(c) if c <= JOINT_BUDGET => c as usize,
            _ => {
                return Err(DecodeError::HypothesisBudget {
                    count: count.map_or_else(|| format!("{m}^{n}"), |c| c.to_string()),
                    budget: JOINT_BUDGET,
                })
            }
        };
        let mut labels = vec![0usize; n];
        let mut symbols = vec![ZERO; n];
        let mut best = (f64::INFINITY, vec![0usize; n]);
        for idx in 0..total {
            let mut x = idx;
            for i in (0..n).rev() {
                labels[i] = x % m;
                symbols[i] = points[labels[i]];
                x /= m;
            }
            let v = self.metric(y, &symbols);
            if v < best.0 {
                best = (v, labels.clone());
            }
        }
        Ok(best.1)
    }
}

fn scaled_points(constellation: &Constellation, power: &PowerConfig) -> Vec<Complex64> {
    let g = power.es().sqrt();
    constellation.points().iter().map(|p| p * g).collect()
}

/// Single-symbol ML decoding; returns one constellation label per symbol.
///
/// Candidates are the constellation points scaled by `sqrt(E_s)`. The result
/// equals [`joint_ml_decode`] whenever the code satisfies its definitional
/// orthogonality condition.
pub fn ss_ml_decode(
    y: &[Complex64],
    channels: &ChannelRealization,
    code: &DistributedCode,
    power: &PowerConfig,
    cpi: bool,
    constellation: &Constellation,
) -> Vec<usize> {
    assert_eq!(y.len(), code.n_slots(), "one received sample per slot");
    let compiled = CompiledCode::new(code);
    EffectiveModel::new(&compiled, channels, power.rho(), cpi).ss_decode(y, &scaled_points(constellation, power))
}

/// Exhaustive ML decoding over `|constellation|^N <= 10^6` hypotheses.
pub fn joint_ml_decode(
    y: &[Complex64],
    channels: &ChannelRealization,
    code: &DistributedCode,
    power: &PowerConfig,
    cpi: bool,
    constellation: &Constellation,
) -> Result<Vec<usize>, DecodeError> {
    assert_eq!(y.len(), code.n_slots(), "one received sample per slot");
    let compiled = CompiledCode::new(code);
    EffectiveModel::new(&compiled, channels, power.rho(), cpi).joint_decode(y, &scaled_points(constellation, power))
}
