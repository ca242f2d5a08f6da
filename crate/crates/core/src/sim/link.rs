//! Two-hop amplify-and-forward link: source, relays and destination.

use num_complex::Complex64;
use rand::Rng;

use crate::channel::{complex_normal, ChannelRealization};
use crate::code::DistributedCode;
use crate::gauss::GaussianIntMatrix;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Source power `E_s`, per-relay power `E_r` and the amplifying coefficient
/// `rho = sqrt(E_r / (1 + E_s))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerConfig {
    es: f64,
    er: f64,
    rho: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("powers must be positive and finite (E_s={es}, E_r={er})")]
pub struct PowerError {
    pub es: f64,
    pub er: f64,
}

impl PowerConfig {
    pub fn new(es: f64, er: f64) -> Result<Self, PowerError> {
        if !(es > 0.0 && er > 0.0 && es.is_finite() && er.is_finite()) {
            return Err(PowerError { es, er });
        }
        Ok(PowerConfig {
            es,
            er,
            rho: (er / (1.0 + es)).sqrt(),
        })
    }

    /// `E_r = snr_per_bit * bits`, `E_s = K E_r`.
    pub fn from_snr_per_bit(snr_db: f64, bits_per_symbol: u32, relays: usize) -> Result<Self, PowerError> {
        let er = 10f64.powf(snr_db / 10.0) * bits_per_symbol as f64;
        Self::new(relays as f64 * er, er)
    }

    pub fn es(&self) -> f64 {
        self.es
    }

    pub fn er(&self) -> f64 {
        self.er
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
}

/// One non-zero entry of an associated matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Entry {
    pub symbol: usize,
    pub slot: usize,
    pub coeff: Complex64,
    /// Entry of `B_k` (acts on the conjugate).
    pub conj: bool,
}

/// Sparse per-relay form of a code for the simulation hot path.
#[derive(Clone, Debug)]
pub(crate) struct CompiledCode {
    pub n: usize,
    pub t: usize,
    pub relays: Vec<Vec<Entry>>,
    /// `A_k^H A_k + B_k^H B_k` per relay.
    pub grams: Vec<GaussianIntMatrix>,
    /// Their diagonals when every Gram is diagonal.
    pub gram_diag: Option<Vec<Vec<f64>>>,
}

impl CompiledCode {
    pub fn new(code: &DistributedCode) -> Self {
        let relays = code
            .relays()
            .iter()
            .map(|p| {
                let mut v: Vec<Entry> = p
                    .a
                    .nonzeros()
                    .map(|(n, t, c)| Entry {
                        symbol: n,
                        slot: t,
                        coeff: c.to_complex(),
                        conj: false,
                    })
                    .collect();
                v.extend(p.b.nonzeros().map(|(n, t, c)| Entry {
                    symbol: n,
                    slot: t,
                    coeff: c.to_complex(),
                    conj: true,
                }));
                v
            })
            .collect();
        let grams = crate::verify::relay_grams(code);
        let gram_diag = grams
            .iter()
            .all(|g| g.is_diagonal())
            .then(|| grams.iter().map(|g| g.diagonal().iter().map(|d| d.re as f64).collect()).collect());
        CompiledCode {
            n: code.n_symbols(),
            t: code.n_slots(),
            relays,
            grams,
            gram_diag,
        }
    }

    pub fn k(&self) -> usize {
        self.relays.len()
    }

    pub fn relay_output(&self, k: usize, y: &[Complex64], cpi: bool, theta: f64, rho: f64) -> Vec<Complex64> {
        let rot = if cpi { Complex64::from_polar(1.0, -theta) } else { Complex64::new(1.0, 0.0) };
        let mut x = vec![ZERO; self.t];
        for e in &self.relays[k] {
            let v = y[e.symbol] * rot;
            x[e.slot] += e.coeff * if e.conj { v.conj() } else { v };
        }
        for v in &mut x {
            *v *= rho;
        }
        x
    }
}

/// `rho (y A_k + y* B_k)`, applied to `e^{-j theta_k} y` when `cpi` is set.
///
/// Panics if `y_k` does not have one entry per symbol.
pub fn relay_process(code: &DistributedCode, k: usize, y_k: &[Complex64], cpi: bool, theta_k: f64, rho: f64) -> Vec<Complex64> {
    assert_eq!(y_k.len(), code.n_symbols(), "relay input has one entry per symbol");
    CompiledCode::new(code).relay_output(k, y_k, cpi, theta_k, rho)
}

/// `sum_k f_k x_k + noise`.
pub fn destination_receive(xs: &[Vec<Complex64>], f: &[Complex64], noise: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(xs.len(), f.len(), "one second-hop gain per relay");
    let mut y = noise.to_vec();
    for (x, fk) in xs.iter().zip(f) {
        assert_eq!(x.len(), y.len(), "relay output spans the code length");
        for (yt, xt) in y.iter_mut().zip(x) {
            *yt += fk * xt;
        }
    }
    y
}

/// Runs one codeword through both hops with unit-variance relay and
/// destination noise (both omitted when `noiseless`).
pub(crate) fn transmit_compiled<R: Rng + ?Sized>(
    code: &CompiledCode,
    channels: &ChannelRealization,
    rho: f64,
    cpi: bool,
    symbols: &[Complex64],
    noiseless: bool,
    rng: &mut R,
) -> Vec<Complex64> {
    let xs: Vec<Vec<Complex64>> = (0..code.k())
        .map(|k| {
            let y_k: Vec<Complex64> = symbols
                .iter()
                .map(|s| channels.h()[k] * s + if noiseless { ZERO } else { complex_normal(rng) })
                .collect();
            code.relay_output(k, &y_k, cpi, channels.theta()[k], rho)
        })
        .collect();
    let noise: Vec<Complex64> = (0..code.t)
        .map(|_| if noiseless { ZERO } else { complex_normal(rng) })
        .collect();
    destination_receive(&xs, channels.f(), &noise)
}

/// Received destination vector for one codeword; see [`relay_process`] and
/// [`destination_receive`].
pub fn transmit<R: Rng + ?Sized>(
    code: &DistributedCode,
    channels: &ChannelRealization,
    power: &PowerConfig,
    cpi: bool,
    symbols: &[Complex64],
    noiseless: bool,
    rng: &mut R,
) -> Vec<Complex64> {
    assert_eq!(symbols.len(), code.n_symbols(), "one value per symbol");
    assert_eq!(channels.relays(), code.n_relays(), "one channel pair per relay");
    transmit_compiled(&CompiledCode::new(code), channels, power.rho(), cpi, symbols, noiseless, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct;
    use crate::verify::noise_covariance;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rho_identity() {
        for (es, er) in [(4.0, 1.0), (1e6, 2.5e5), (0.3, 7.0)] {
            let p = PowerConfig::new(es, er).unwrap();
            assert!(((p.rho() * p.rho() * (1.0 + es)) - er).abs() <= 1e-12 * er);
        }
        let p = PowerConfig::from_snr_per_bit(10.0, 2, 4).unwrap();
        assert!((p.er() - 20.0).abs() < 1e-12);
        assert!((p.es() - 80.0).abs() < 1e-12);
        assert!(PowerConfig::new(0.0, 1.0).is_err());
    }

    #[test]
    fn alamouti_relay_one() {
        let code = construct::alamouti();
        let h = c(0.6, -0.8) * 1.7;
        let s = [c(1.0, 2.0), c(-0.5, 0.25)];
        let y: Vec<Complex64> = s.iter().map(|v| h * v).collect();
        let rho = 0.37;
        let x = relay_process(&code, 0, &y, false, h.arg(), rho);
        for t in 0..2 {
            assert!((x[t] - rho * h * s[t]).norm() < 1e-12);
        }
        let x = relay_process(&code, 0, &y, true, h.arg(), rho);
        for t in 0..2 {
            assert!((x[t] - rho * h.norm() * s[t]).norm() < 1e-12);
        }
        let x = relay_process(&code, 1, &[c(0.0, 0.0); 2], true, 1.0, rho);
        assert!(x.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn destination_superposition() {
        let x = vec![vec![c(1.0, -1.0), c(0.5, 0.0)]];
        assert_eq!(destination_receive(&x, &[c(1.0, 0.0)], &[c(0.0, 0.0); 2]), x[0]);
        let noise = vec![c(0.1, 0.2), c(-0.3, 0.4)];
        let xs = vec![x[0].clone(), x[0].clone()];
        assert_eq!(destination_receive(&xs, &[c(0.0, 0.0); 2], &noise), noise);
    }

    #[test]
    fn repetition_is_slotwise() {
        let code = construct::repetition(2).unwrap();
        let ch = ChannelRealization::new(vec![c(1.0, 0.5), c(-0.2, 0.9)], vec![c(0.3, -0.1), c(1.1, 0.4)]);
        let p = PowerConfig::new(2.0, 1.0).unwrap();
        let s = [c(0.7, -0.7)];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let y = transmit(&code, &ch, &p, false, &s, true, &mut rng);
        for k in 0..2 {
            let expected = ch.f()[k] * p.rho() * ch.h()[k] * s[0];
            assert!((y[k] - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn noise_only_output_matches_covariance() {
        let code = construct::rate_halving(4, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let ch = ChannelRealization::draw(4, &mut rng);
        let p = PowerConfig::new(4.0, 1.0).unwrap();
        let zeros = [c(0.0, 0.0); 4];
        let draws = 20_000;
        let t = code.n_slots();
        let mut acc = nalgebra::DMatrix::<Complex64>::zeros(t, t);
        for _ in 0..draws {
            let n = transmit(&code, &ch, &p, true, &zeros, false, &mut rng);
            let v = nalgebra::DMatrix::from_row_slice(1, t, &n);
            acc += v.adjoint() * v;
        }
        acc /= c(draws as f64, 0.0);
        let r = noise_covariance(&code, &ch, p.rho()).unwrap();
        let err = (acc - r.matrix()).norm() / r.matrix().norm();
        assert!(err < 0.05, "relative error {err}");
    }
}
