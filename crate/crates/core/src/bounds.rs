//! Data-rate upper bounds and the equal-noise column partition of CPI codes.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::code::{AssociatedPair, DistributedCode, Rate, RateString};
use crate::verify::{check_definition2, relay_grams, NumericOptions};

/// Bound for no-CSI codes: `N / ceil(NK/2)`.
pub fn dostbc_rate_bound(n: usize, k: usize) -> Rate {
    assert!(n >= 1 && k >= 1, "N and K must be positive");
    let slots = (n * k).div_ceil(2);
    Rate::new(n as u64, slots as u64)
}

/// Bound for row-monomial CPI codes: 1 for up to two relays, 1/2 beyond,
/// independent of `N` and of `K`.
pub fn cpi_rate_bound(k: usize) -> Rate {
    assert!(k >= 1, "K must be positive");
    if k <= 2 {
        Rate::new(1, 1)
    } else {
        Rate::new(1, 2)
    }
}

/// Classical bound for generalized complex orthogonal designs.
pub fn generalized_design_rate_bound(k: usize) -> Rate {
    assert!(k >= 1, "K must be positive");
    if k <= 2 {
        Rate::new(1, 1)
    } else {
        Rate::new(4, 5)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CodeFamily {
    /// No channel information at the relays.
    NoCsi,
    /// Row-monomial codes with channel phase information.
    Cpi,
    GeneralizedDesign,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundSource {
    Theorem2,
    Theorem5,
    #[serde(rename = "Alamouti-K2")]
    AlamoutiK2,
    #[serde(rename = "GOD-4/5")]
    God45,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RateReport {
    pub rate: RateString,
    pub bound: RateString,
    pub achieves_bound: bool,
    pub bound_source: BoundSource,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoundsError {
    #[error("rate {rate} exceeds the {family:?} bound {bound}")]
    BoundViolated { family: CodeFamily, rate: String, bound: String },
    #[error("noise covariance is not diagonal: relay {relay} couples slots {t1} and {t2}")]
    CorrelatedNoise { relay: usize, t1: usize, t2: usize },
    #[error("block {block} is not a valid CPI code: {condition}")]
    InvalidBlock { block: usize, condition: String },
}

fn rate_str(r: Rate) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl RateReport {
    pub fn new(code: &DistributedCode, family: CodeFamily) -> Self {
        let k = code.n_relays();
        let (bound, bound_source) = match family {
            CodeFamily::NoCsi => (dostbc_rate_bound(code.n_symbols(), k), BoundSource::Theorem2),
            CodeFamily::Cpi if k <= 2 => (cpi_rate_bound(k), BoundSource::AlamoutiK2),
            CodeFamily::Cpi => (cpi_rate_bound(k), BoundSource::Theorem5),
            CodeFamily::GeneralizedDesign => (generalized_design_rate_bound(k), BoundSource::God45),
        };
        let rate = code.rate();
        RateReport {
            rate: RateString(rate),
            bound: RateString(bound),
            achieves_bound: rate == bound,
            bound_source,
        }
    }

    pub fn family(&self) -> CodeFamily {
        match self.bound_source {
            BoundSource::Theorem2 => CodeFamily::NoCsi,
            BoundSource::Theorem5 | BoundSource::AlamoutiK2 => CodeFamily::Cpi,
            BoundSource::God45 => CodeFamily::GeneralizedDesign,
        }
    }

    /// Errors if a verified code sits above its bound (an implementation bug).
    pub fn ensure_within_bound(&self) -> Result<(), BoundsError> {
        if self.rate.0 > self.bound.0 {
            return Err(BoundsError::BoundViolated {
                family: self.family(),
                rate: rate_str(self.rate.0),
                bound: rate_str(self.bound.0),
            });
        }
        Ok(())
    }
}

/// Columns sharing one noise level, with the sub-code on their non-zero rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    /// 0-based slot indices of the original code.
    pub columns: Vec<usize>,
    /// 0-based relays with a non-zero entry in these columns.
    pub relays: Vec<usize>,
    /// 0-based symbols present in these columns.
    pub symbols: Vec<usize>,
    /// Per-relay diagonal coefficient of `A_k^H A_k + B_k^H B_k` shared by every column.
    pub coefficients: Vec<i64>,
    /// `None` when every relay is silent on these columns.
    pub code: Option<DistributedCode>,
}

impl Block {
    /// `(K_w, T_w, N_w)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.relays.len(), self.columns.len(), self.symbols.len())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionResult {
    pub blocks: Vec<Block>,
}

impl PartitionResult {
    pub fn groups(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.columns.clone()).collect()
    }
}

/// Groups slots by their exact per-relay noise coefficient vectors.
///
/// Two slots share a group iff their diagonal entries of `R` agree for every
/// channel realization. Groups are ordered by their first slot.
pub fn partition(code: &DistributedCode) -> Result<PartitionResult, BoundsError> {
    let grams = relay_grams(code);
    for (k, g) in grams.iter().enumerate() {
        if let Some((t1, t2, _)) = g.first_off_diagonal() {
            return Err(BoundsError::CorrelatedNoise {
                relay: k + 1,
                t1: t1 + 1,
                t2: t2 + 1,
            });
        }
    }
    let coeff_of = |t: usize| -> Vec<i64> { grams.iter().map(|g| g[(t, t)].re).collect() };

    let mut keys: Vec<Vec<i64>> = Vec::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for t in 0..code.n_slots() {
        let c = coeff_of(t);
        match keys.iter().position(|k| *k == c) {
            Some(i) => groups[i].push(t),
            None => {
                keys.push(c);
                groups.push(vec![t]);
            }
        }
    }

    let blocks = groups
        .into_iter()
        .zip(keys)
        .map(|(columns, coefficients)| {
            let relays: Vec<usize> = (0..code.n_relays()).filter(|&k| coefficients[k] > 0).collect();
            let mut symbols = BTreeSet::new();
            for &k in &relays {
                let pair = code.relay(k);
                for m in [&pair.a, &pair.b] {
                    for (n, t, _) in m.nonzeros() {
                        if columns.contains(&t) {
                            symbols.insert(n);
                        }
                    }
                }
            }
            let symbols: Vec<usize> = symbols.into_iter().collect();
            let sub = if relays.is_empty() {
                None
            } else {
                let pairs = relays
                    .iter()
                    .map(|&k| {
                        let p = code.relay(k);
                        AssociatedPair::new(p.a.select(&symbols, &columns), p.b.select(&symbols, &columns))
                    })
                    .collect();
                Some(DistributedCode::new(symbols.len(), columns.len(), pairs).expect("non-empty block"))
            };
            Block {
                columns,
                relays,
                symbols,
                coefficients,
                code: sub,
            }
        })
        .collect();
    Ok(PartitionResult { blocks })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockVerdict {
    /// More than two active relays and rate exactly 1/2.
    EqualsHalf,
    /// At most two active relays and rate at most 1.
    AtMostOne,
    /// More than two active relays but a rate other than 1/2.
    ViolatesHalf,
    /// At most two active relays but a rate above 1.
    ViolatesOne,
    /// No relay transmits on these slots.
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockRate {
    pub block: usize,
    pub k_w: usize,
    pub t_w: usize,
    pub n_w: usize,
    pub rate: RateString,
    pub verdict: BlockVerdict,
}

/// Verifies every block as a CPI code and classifies its rate.
pub fn block_rate_check(pr: &PartitionResult, opts: &NumericOptions) -> Result<Vec<BlockRate>, BoundsError> {
    pr.blocks
        .iter()
        .enumerate()
        .map(|(w, b)| {
            let (k_w, t_w, n_w) = b.dims();
            let rate = Rate::new(n_w as u64, t_w as u64);
            let verdict = match &b.code {
                None => BlockVerdict::Empty,
                Some(sub) => {
                    let report = check_definition2(sub, opts).expect("options validated by caller");
                    if !report.passed() {
                        return Err(BoundsError::InvalidBlock {
                            block: w + 1,
                            condition: report.failed_condition.unwrap_or_default(),
                        });
                    }
                    match (k_w > 2, rate) {
                        (true, r) if r == Rate::new(1, 2) => BlockVerdict::EqualsHalf,
                        (true, _) => BlockVerdict::ViolatesHalf,
                        (false, r) if r <= Rate::new(1, 1) => BlockVerdict::AtMostOne,
                        (false, _) => BlockVerdict::ViolatesOne,
                    }
                }
            };
            Ok(BlockRate {
                block: w + 1,
                k_w,
                t_w,
                n_w,
                rate: RateString(rate),
                verdict,
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionEntry {
    /// 1-based slots.
    pub columns: Vec<usize>,
    /// 1-based relays.
    pub relays: Vec<usize>,
    pub n_w: usize,
}

/// Machine-readable summary: rate, bound, partition and per-block verdicts.
#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    pub rate: RateString,
    pub bound: RateString,
    pub partition: Vec<PartitionEntry>,
    pub verdicts: Vec<BlockRate>,
}

impl BoundsReport {
    pub fn new(code: &DistributedCode, pr: &PartitionResult, verdicts: Vec<BlockRate>) -> Self {
        let rr = RateReport::new(code, CodeFamily::Cpi);
        BoundsReport {
            rate: rr.rate,
            bound: rr.bound,
            partition: pr
                .blocks
                .iter()
                .map(|b| PartitionEntry {
                    columns: b.columns.iter().map(|c| c + 1).collect(),
                    relays: b.relays.iter().map(|k| k + 1).collect(),
                    n_w: b.symbols.len(),
                })
                .collect(),
            verdicts,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{parse_code, MonoMatrix};
    use crate::construct;

    #[test]
    fn dostbc_bound_values() {
        assert_eq!(dostbc_rate_bound(4, 4), Rate::new(1, 2));
        assert_eq!(dostbc_rate_bound(8, 6), Rate::new(1, 3));
        assert_eq!(dostbc_rate_bound(1, 1), Rate::new(1, 1));
        assert_eq!(dostbc_rate_bound(3, 3), Rate::new(3, 5));
        assert_eq!(dostbc_rate_bound(1, 2), Rate::new(1, 1));
    }

    #[test]
    fn cpi_bound_values() {
        assert_eq!(cpi_rate_bound(1), Rate::new(1, 1));
        assert_eq!(cpi_rate_bound(2), Rate::new(1, 1));
        assert_eq!(cpi_rate_bound(4), Rate::new(1, 2));
        assert_eq!(cpi_rate_bound(100), Rate::new(1, 2));
        assert_eq!(generalized_design_rate_bound(4), Rate::new(4, 5));
    }

    #[test]
    fn rate_reports() {
        let rr = RateReport::new(&construct::rate_halving(4, 4).unwrap(), CodeFamily::Cpi);
        assert!(rr.achieves_bound);
        assert_eq!(rr.bound_source, BoundSource::Theorem5);
        let rr = RateReport::new(&construct::alamouti(), CodeFamily::Cpi);
        assert_eq!(rr.bound_source, BoundSource::AlamoutiK2);
        assert!(rr.achieves_bound);
        let rr = RateReport::new(&construct::pairwise_alamouti(8, 6).unwrap(), CodeFamily::NoCsi);
        assert!(rr.achieves_bound);
        assert!(rr.ensure_within_bound().is_ok());
        let rr = RateReport::new(&construct::rate_halving(4, 4).unwrap(), CodeFamily::NoCsi);
        assert!(rr.ensure_within_bound().is_ok());
        assert_eq!(
            serde_json::to_value(&rr).unwrap()["rate"],
            serde_json::Value::String("1/2".into())
        );
    }

    #[test]
    fn rate_halving_is_one_block() {
        let pr = partition(&construct::rate_halving(4, 4).unwrap()).unwrap();
        assert_eq!(pr.blocks.len(), 1);
        assert_eq!(pr.blocks[0].dims(), (4, 8, 4));
        assert_eq!(pr.blocks[0].coefficients, vec![1, 1, 1, 1]);
        let checks = block_rate_check(&pr, &NumericOptions::default()).unwrap();
        assert_eq!(checks[0].verdict, BlockVerdict::EqualsHalf);
        assert_eq!(checks[0].rate, RateString(Rate::new(1, 2)));
    }

    #[test]
    fn repetition_splits_per_slot() {
        let pr = partition(&construct::repetition(3).unwrap()).unwrap();
        assert_eq!(pr.groups(), vec![vec![0], vec![1], vec![2]]);
        for b in &pr.blocks {
            assert_eq!(b.dims(), (1, 1, 1));
        }
        let checks = block_rate_check(&pr, &NumericOptions::default()).unwrap();
        assert!(checks.iter().all(|c| c.verdict == BlockVerdict::AtMostOne));
    }

    #[test]
    fn alamouti_plus_repetition_two_blocks() {
        let text = "dostbc 2 3 3\n\
            relay 1\n1 0 0\n0 1 0\n--\n0 0 0\n0 0 0\n\
            relay 2\n0 0 0\n0 0 0\n--\n0 1 0\n-1 0 0\n\
            relay 3\n0 0 1\n0 0 0\n--\n0 0 0\n0 0 0\n";
        let code = parse_code(text).unwrap();
        let pr = partition(&code).unwrap();
        assert_eq!(pr.groups(), vec![vec![0, 1], vec![2]]);
        assert_eq!(pr.blocks[0].coefficients, vec![1, 1, 0]);
        assert_eq!(pr.blocks[1].coefficients, vec![0, 0, 1]);
        assert_eq!(pr.blocks[0].dims(), (2, 2, 2));
        assert_eq!(pr.blocks[1].dims(), (1, 1, 1));
        let checks = block_rate_check(&pr, &NumericOptions::default()).unwrap();
        assert_eq!(checks[0].verdict, BlockVerdict::AtMostOne);
        let total: usize = pr.blocks.iter().map(|b| b.symbols.len()).sum();
        assert!(total >= code.n_symbols());
    }

    #[test]
    fn correlated_noise_rejected() {
        let mut pair = AssociatedPair::zeros(1, 2);
        pair.a = MonoMatrix::from_ints(&[&[1, 1]]);
        let code = DistributedCode::new(1, 2, vec![pair]).unwrap();
        assert!(matches!(partition(&code), Err(BoundsError::CorrelatedNoise { .. })));
    }

    #[test]
    fn invalid_block_reported() {
        let code = parse_code("dostbc 1 2 1\nrelay 1\n1\n--\n0\nrelay 2\n1\n--\n0\n").unwrap();
        let pr = partition(&code).unwrap();
        assert!(matches!(
            block_rate_check(&pr, &NumericOptions::default()),
            Err(BoundsError::InvalidBlock { block: 1, .. })
        ));
    }
}
