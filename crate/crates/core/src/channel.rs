//! Per-relay channel gains of the two-hop network.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

/// First-hop gains `h_k`, second-hop gains `f_k` and the phases `theta_k = arg(h_k)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChannelRealization {
    h: Vec<Complex64>,
    f: Vec<Complex64>,
    theta: Vec<f64>,
}

impl ChannelRealization {
    /// Panics if `h` and `f` have different lengths.
    pub fn new(h: Vec<Complex64>, f: Vec<Complex64>) -> Self {
        assert_eq!(h.len(), f.len(), "one first-hop and one second-hop gain per relay");
        let theta = h.iter().map(|z| z.arg()).collect();
        ChannelRealization { h, f, theta }
    }

    /// Independent circular Gaussian gains with zero mean and unit variance.
    pub fn draw<R: Rng + ?Sized>(relays: usize, rng: &mut R) -> Self {
        let h = (0..relays).map(|_| complex_normal(rng)).collect();
        let f = (0..relays).map(|_| complex_normal(rng)).collect();
        Self::new(h, f)
    }

    pub fn relays(&self) -> usize {
        self.h.len()
    }

    pub fn h(&self) -> &[Complex64] {
        &self.h
    }

    pub fn f(&self) -> &[Complex64] {
        &self.f
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }
}

/// One draw of `CN(0, 1)`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}
