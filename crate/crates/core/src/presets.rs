//! Named simulation and search configurations shipped with the toolkit.

use crate::construct;
use crate::oracle::{SearchSpace, Structure};
use crate::sim::{Modulation, Scheme, SimConfig};

#[derive(Clone, Debug, PartialEq)]
pub struct SimPreset {
    pub name: &'static str,
    pub description: &'static str,
    /// Provenance of the codes and constellations, written into run headers.
    pub notes: Vec<String>,
    pub runs: Vec<SimConfig>,
}

pub const SIM_PRESETS: [&str; 3] = ["fig1-trend", "fig2-trend", "diversity-slope"];

fn run(scheme: Scheme, code: crate::DistributedCode, m: Modulation, snr: &[f64], seed: u64) -> SimConfig {
    SimConfig {
        seed,
        ..SimConfig::new(scheme, code, m, snr.to_vec())
    }
}

/// `None` for an unknown name.
pub fn sim_preset(name: &str, seed: u64) -> Option<SimPreset> {
    match name {
        "fig1-trend" => {
            let snr = [0.0, 5.0, 10.0, 15.0, 20.0];
            Some(SimPreset {
                name: "fig1-trend",
                description: "N=4, K=4 at 2 bits per channel use: CPI vs no-CSI vs repetition",
                notes: vec![
                    "dostbc_cpi: rate-halving code from the 4x4 real orthogonal design, rate 1/2, qam16".into(),
                    "dostbc: pairwise Alamouti arrangement (two relays per slot pair), rate 1/2, qam16".into(),
                    "repetition: one relay per slot, rate 1/4, qam256".into(),
                ],
                runs: vec![
                    run(Scheme::DostbcCpi, construct::rate_halving(4, 4).expect("supported"), Modulation::Qam16, &snr, seed),
                    run(Scheme::Dostbc, construct::pairwise_alamouti(4, 4).expect("even"), Modulation::Qam16, &snr, seed),
                    run(Scheme::Repetition, construct::repetition(4).expect("K>0"), Modulation::Qam256, &snr, seed),
                ],
            })
        }
        "fig2-trend" => {
            let snr = [0.0, 5.0, 10.0, 15.0];
            Some(SimPreset {
                name: "fig2-trend",
                description: "N=8, K=6 at 2 bits per channel use: CPI vs no-CSI",
                notes: vec![
                    "dostbc_cpi: rate-halving code from the first 6 rows of the 8x8 real orthogonal design, rate 1/2, qam16".into(),
                    "dostbc: pairwise Alamouti arrangement, rate 8/24 = 1/3 (meets the no-CSI bound), qam64".into(),
                ],
                runs: vec![
                    run(Scheme::DostbcCpi, construct::rate_halving(8, 6).expect("supported"), Modulation::Qam16, &snr, seed),
                    run(Scheme::Dostbc, construct::pairwise_alamouti(8, 6).expect("even"), Modulation::Qam64, &snr, seed),
                ],
            })
        }
        "diversity-slope" => {
            let snr = [15.0, 20.0, 25.0, 30.0];
            let mut single = run(Scheme::Repetition, construct::repetition(1).expect("K>0"), Modulation::Qpsk, &snr, seed);
            single.label = Some("single_relay".into());
            Some(SimPreset {
                name: "diversity-slope",
                description: "Alamouti with phase information vs a single-relay path, qpsk",
                notes: vec![
                    "dostbc_cpi: Alamouti code on two relays, rate 1".into(),
                    "single_relay: one relay, one slot, rate 1".into(),
                ],
                runs: vec![
                    run(Scheme::DostbcCpi, construct::alamouti(), Modulation::Qpsk, &snr, seed),
                    single,
                ],
            })
        }
        _ => None,
    }
}

/// Desk-scale search spaces, each with at most 10^6 raw candidates.
pub fn search_presets() -> Vec<(&'static str, SearchSpace)> {
    use Structure::{ColumnMonomialDostbc as D, RowMonomialCpi as C};
    [
        ("cpi-1-1-1", 1, 1, 1, C),
        ("cpi-1-2-1", 1, 2, 1, C),
        ("cpi-1-2-2", 1, 2, 2, C),
        ("cpi-1-2-3", 1, 2, 3, C),
        ("cpi-1-3-1", 1, 3, 1, C),
        ("cpi-1-3-2", 1, 3, 2, C),
        ("cpi-1-4-1", 1, 4, 1, C),
        ("cpi-2-1-1", 2, 1, 1, C),
        ("cpi-2-1-2", 2, 1, 2, C),
        ("cpi-2-2-1", 2, 2, 1, C),
        ("cpi-3-1-1", 3, 1, 1, C),
        ("dostbc-1-1-2", 1, 1, 2, D),
        ("dostbc-1-2-1", 1, 2, 1, D),
        ("dostbc-1-2-2", 1, 2, 2, D),
        ("dostbc-1-3-1", 1, 3, 1, D),
        ("dostbc-2-1-2", 2, 1, 2, D),
        ("dostbc-2-2-1", 2, 2, 1, D),
        ("dostbc-2-3-1", 2, 3, 1, D),
        ("dostbc-3-2-1", 3, 2, 1, D),
    ]
    .into_iter()
    .map(|(name, n, k, t, s)| (name, SearchSpace::new(n, k, t, s)))
    .collect()
}
