//! Monte Carlo bit-error-rate estimation.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelRealization;
use crate::code::DistributedCode;
use crate::sim::constellation::{Constellation, Modulation};
use crate::sim::decode::EffectiveModel;
use crate::sim::link::{transmit_compiled, CompiledCode, PowerConfig};
use crate::verify::{check_definition1, check_definition2, NumericOptions};

/// Trials per RNG stream.
const BLOCK: u64 = 1024;
/// Blocks per stopping-rule check.
const ROUND_BLOCKS: u64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// No channel information at the relays.
    Dostbc,
    /// Relays remove the first-hop phase.
    DostbcCpi,
    /// One relay per slot.
    Repetition,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Dostbc => "dostbc",
            Scheme::DostbcCpi => "dostbc_cpi",
            Scheme::Repetition => "repetition",
        }
    }

    pub fn uses_phase(self) -> bool {
        self == Scheme::DostbcCpi
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown scheme `{0}` (expected dostbc, dostbc_cpi or repetition)")]
pub struct UnknownScheme(pub String);

impl FromStr for Scheme {
    type Err = UnknownScheme;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "dostbc" => Ok(Scheme::Dostbc),
            "dostbc_cpi" | "cpi" => Ok(Scheme::DostbcCpi),
            "repetition" => Ok(Scheme::Repetition),
            _ => Err(UnknownScheme(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub scheme: Scheme,
    /// Name written to the `scheme` column; defaults to the scheme name.
    pub label: Option<String>,
    pub code: DistributedCode,
    pub modulation: Modulation,
    pub snr_db_points: Vec<f64>,
    pub min_trials: u64,
    pub min_bit_errors: u64,
    /// Hard cap per point, reached only when errors are too rare.
    pub max_trials: u64,
    pub seed: u64,
    /// Debug switch: no relay or destination noise.
    pub noiseless: bool,
}

impl SimConfig {
    pub fn new(scheme: Scheme, code: DistributedCode, modulation: Modulation, snr_db_points: Vec<f64>) -> Self {
        SimConfig {
            scheme,
            label: None,
            code,
            modulation,
            snr_db_points,
            min_trials: 10_000,
            min_bit_errors: 100,
            max_trials: 50_000_000,
            seed: 0,
            noiseless: false,
        }
    }

    pub fn label(&self) -> String {
        self.label.clone().unwrap_or_else(|| self.scheme.name().to_string())
    }

    /// Spectral efficiency in bits per channel use.
    pub fn bits_per_channel_use(&self) -> f64 {
        (self.code.n_symbols() as f64 * self.modulation.bits_per_symbol() as f64) / self.code.n_slots() as f64
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("at least one SNR point is required")]
    NoSnrPoints,
    #[error("SNR point {0} dB is not finite")]
    BadSnr(f64),
    #[error("min_trials must be positive and no larger than max_trials ({min} > {max})")]
    BadTrials { min: u64, max: u64 },
    #[error("code rejected for scheme {scheme}: {condition}")]
    CodeRejected { scheme: Scheme, condition: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BerPoint {
    pub scheme: String,
    pub snr_db: f64,
    pub trials: u64,
    pub bit_errors: u64,
    pub ber: f64,
}

impl BerPoint {
    /// Half-width of the 3-sigma binomial confidence interval.
    pub fn three_sigma(&self, bits_per_trial: u64) -> f64 {
        let n = (self.trials * bits_per_trial) as f64;
        3.0 * (self.ber * (1.0 - self.ber) / n).sqrt()
    }
}

impl SimConfig {
    /// Checks the SNR list and trial counts, and that the code passes the
    /// membership check matching the scheme.
    pub fn validate(&self) -> Result<(), SimError> {
        validate(self)
    }
}

fn validate(cfg: &SimConfig) -> Result<(), SimError> {
    if cfg.snr_db_points.is_empty() {
        return Err(SimError::NoSnrPoints);
    }
    if let Some(&s) = cfg.snr_db_points.iter().find(|s| !s.is_finite()) {
        return Err(SimError::BadSnr(s));
    }
    if cfg.min_trials == 0 || cfg.min_trials > cfg.max_trials {
        return Err(SimError::BadTrials {
            min: cfg.min_trials,
            max: cfg.max_trials,
        });
    }
    let opts = NumericOptions::default();
    let report = if cfg.scheme.uses_phase() {
        check_definition2(&cfg.code, &opts)
    } else {
        check_definition1(&cfg.code, &opts)
    }
    .expect("default options are valid");
    if !report.passed() {
        return Err(SimError::CodeRejected {
            scheme: cfg.scheme,
            condition: report.failed_condition.unwrap_or_default(),
        });
    }
    Ok(())
}

/// RNG of one block: key from `(seed, snr index)`, stream from the block index.
fn block_rng(seed: u64, snr_index: usize, block: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(snr_index as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(block);
    rng
}

struct PointRunner<'a> {
    code: &'a CompiledCode,
    constellation: &'a Constellation,
    power: PowerConfig,
    cpi: bool,
    noiseless: bool,
}

impl PointRunner<'_> {
    fn run_block(&self, rng: &mut ChaCha8Rng, trials: u64) -> u64 {
        let gain = self.power.es().sqrt();
        let points: Vec<Complex64> = self.constellation.points().iter().map(|p| p * gain).collect();
        let mut errors = 0u64;
        let mut labels = vec![0usize; self.code.n];
        let mut symbols = vec![Complex64::new(0.0, 0.0); self.code.n];
        for _ in 0..trials {
            for (l, s) in labels.iter_mut().zip(symbols.iter_mut()) {
                *l = rng.random_range(0..points.len());
                *s = points[*l];
            }
            let ch = ChannelRealization::draw(self.code.k(), rng);
            let y = transmit_compiled(self.code, &ch, self.power.rho(), self.cpi, &symbols, self.noiseless, rng);
            let model = EffectiveModel::new(self.code, &ch, self.power.rho(), self.cpi);
            let decoded = model.ss_decode(&y, &points);
            errors += labels
                .iter()
                .zip(&decoded)
                .map(|(&a, &b)| u64::from(Constellation::bit_errors(a, b)))
                .sum::<u64>();
        }
        errors
    }
}

/// Runs every SNR point until both `min_trials` and `min_bit_errors` are met
/// (or `max_trials` is reached).
///
/// The stopping rule is checked after fixed rounds of blocks, each block
/// owning its own RNG stream, so results do not depend on the thread count.
pub fn run_ber(cfg: &SimConfig) -> Result<Vec<BerPoint>, SimError> {
    validate(cfg)?;
    let code = CompiledCode::new(&cfg.code);
    let constellation = Constellation::new(cfg.modulation);
    let bits_per_trial = (cfg.code.n_symbols() as u64) * u64::from(cfg.modulation.bits_per_symbol());
    let k = cfg.code.n_relays();

    let points = cfg
        .snr_db_points
        .iter()
        .enumerate()
        .map(|(si, &snr_db)| {
            let runner = PointRunner {
                code: &code,
                constellation: &constellation,
                power: PowerConfig::from_snr_per_bit(snr_db, cfg.modulation.bits_per_symbol(), k)
                    .expect("finite SNR gives positive powers"),
                cpi: cfg.scheme.uses_phase(),
                noiseless: cfg.noiseless,
            };
            let (mut trials, mut errors, mut next_block) = (0u64, 0u64, 0u64);
            while trials < cfg.max_trials && (trials < cfg.min_trials || errors < cfg.min_bit_errors) {
                let blocks: Vec<(u64, u64)> = (0..ROUND_BLOCKS)
                    .map(|b| {
                        let start = trials + b * BLOCK;
                        (next_block + b, BLOCK.min(cfg.max_trials.saturating_sub(start)))
                    })
                    .filter(|&(_, n)| n > 0)
                    .collect();
                let results: Vec<(u64, u64)> = blocks
                    .par_iter()
                    .map(|&(b, n)| (n, runner.run_block(&mut block_rng(cfg.seed, si, b), n)))
                    .collect();
                for (n, e) in results {
                    trials += n;
                    errors += e;
                }
                next_block += ROUND_BLOCKS;
            }
            BerPoint {
                scheme: cfg.label(),
                snr_db,
                trials,
                bit_errors: errors,
                ber: errors as f64 / (trials * bits_per_trial) as f64,
            }
        })
        .collect();
    Ok(points)
}

pub const CSV_HEADER: &str = "scheme,snr_db,trials,bit_errors,ber";

/// CSV rows with the standard header; floats in shortest round-trip form.
pub fn to_csv(points: &[BerPoint]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&format!("{},{},{},{},{}\n", p.scheme, p.snr_db, p.trials, p.bit_errors, p.ber));
    }
    out
}

/// Companion matplotlib script plotting BER against SNR on a log axis.
pub fn plot_script(csv_name: &str) -> String {
    format!(
        r#"#!/usr/bin/env python3
import csv
import sys
from collections import defaultdict

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "{csv_name}"
curves = defaultdict(list)
with open(path) as fh:
    for row in csv.DictReader(fh):
        if int(row["bit_errors"]) > 0:
            curves[row["scheme"]].append((float(row["snr_db"]), float(row["ber"])))

for scheme, pts in curves.items():
    pts.sort()
    plt.semilogy([p[0] for p in pts], [p[1] for p in pts], marker="o", label=scheme)
plt.xlabel("SNR per bit (dB)")
plt.ylabel("BER")
plt.grid(True, which="both", alpha=0.3)
plt.legend()
plt.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
"#
    )
}
