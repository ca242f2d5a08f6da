//! Unit-average-energy Gray-mapped square QAM constellations.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modulation {
    Qpsk,
    Qam16,
    Qam64,
    Qam256,
}

impl Modulation {
    pub const ALL: [Modulation; 4] = [Modulation::Qpsk, Modulation::Qam16, Modulation::Qam64, Modulation::Qam256];

    pub fn bits_per_symbol(self) -> u32 {
        match self {
            Modulation::Qpsk => 2,
            Modulation::Qam16 => 4,
            Modulation::Qam64 => 6,
            Modulation::Qam256 => 8,
        }
    }

    pub fn order(self) -> usize {
        1 << self.bits_per_symbol()
    }

    pub fn name(self) -> &'static str {
        match self {
            Modulation::Qpsk => "qpsk",
            Modulation::Qam16 => "qam16",
            Modulation::Qam64 => "qam64",
            Modulation::Qam256 => "qam256",
        }
    }
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown constellation `{0}` (expected qpsk, qam16, qam64 or qam256)")]
pub struct UnknownModulation(pub String);

impl FromStr for Modulation {
    type Err = UnknownModulation;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "qpsk" | "qam4" | "4qam" => Ok(Modulation::Qpsk),
            "qam16" | "16qam" => Ok(Modulation::Qam16),
            "qam64" | "64qam" => Ok(Modulation::Qam64),
            "qam256" | "256qam" => Ok(Modulation::Qam256),
            _ => Err(UnknownModulation(s.to_string())),
        }
    }
}

/// Points indexed by their bit label.
#[derive(Clone, Debug, PartialEq)]
pub struct Constellation {
    modulation: Modulation,
    points: Vec<Complex64>,
}

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

impl Constellation {
    /// The upper half of the label selects the in-phase level, the lower half
    /// the quadrature level; each axis is Gray-coded.
    pub fn new(modulation: Modulation) -> Self {
        let half = modulation.bits_per_symbol() / 2;
        let levels = 1usize << half;
        let scale = (2.0 * ((levels * levels - 1) as f64) / 3.0).sqrt().recip();
        let amplitude = |i: usize| (2 * i) as f64 - (levels - 1) as f64;
        let mut points = vec![Complex64::new(0.0, 0.0); modulation.order()];
        for i in 0..levels {
            for q in 0..levels {
                let label = (gray(i) << half) | gray(q);
                points[label] = Complex64::new(amplitude(i), amplitude(q)) * scale;
            }
        }
        Constellation { modulation, points }
    }

    pub fn modulation(&self) -> Modulation {
        self.modulation
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn point(&self, label: usize) -> Complex64 {
        self.points[label]
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn bits_per_symbol(&self) -> u32 {
        self.modulation.bits_per_symbol()
    }

    /// Differing bits between two labels.
    pub fn bit_errors(a: usize, b: usize) -> u32 {
        (a ^ b).count_ones()
    }
}
