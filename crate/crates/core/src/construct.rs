//! Known code constructions.

use crate::code::{AssociatedPair, DistributedCode, MonoMatrix};
use crate::coeff::MonoCoeff;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructError {
    #[error("no rate-halving code for N={n}, K={k}: supported sizes are N=2 (K=2), N=4 (K=3..4), N=8 (K=5..8)")]
    UnsupportedRateHalving { n: usize, k: usize },
    #[error("the pairwise construction needs even N and even K, got N={n}, K={k}")]
    OddPairwise { n: usize, k: usize },
    #[error("relay count must be positive")]
    NoRelays,
}

/// Square real orthogonal designs, rows = relays, columns = slots.
/// Entry `+-m` stands for `+-s_m` (1-based).
const DESIGN_2: [[i8; 2]; 2] = [[1, -2], [2, 1]];

const DESIGN_4: [[i8; 4]; 4] = [[1, -2, -3, -4], [2, 1, 4, -3], [3, -4, 1, 2], [4, 3, -2, 1]];

const DESIGN_8: [[i8; 8]; 8] = [
    [1, -2, -3, -4, -5, -6, -7, -8],
    [2, 1, -4, 3, -6, 5, 8, -7],
    [3, 4, 1, -2, -7, -8, 5, 6],
    [4, -3, 2, 1, -8, 7, -6, 5],
    [5, 6, 7, 8, 1, -2, -3, -4],
    [6, -5, 8, -7, 2, 1, 4, -3],
    [7, -8, -5, 6, 3, -4, 1, 2],
    [8, 7, -6, -5, 4, 3, -2, 1],
];

fn design_rows(size: usize) -> Vec<Vec<i8>> {
    match size {
        2 => DESIGN_2.iter().map(|r| r.to_vec()).collect(),
        4 => DESIGN_4.iter().map(|r| r.to_vec()).collect(),
        8 => DESIGN_8.iter().map(|r| r.to_vec()).collect(),
        _ => unreachable!(),
    }
}

fn sign(v: i8) -> MonoCoeff {
    if v > 0 {
        MonoCoeff::PlusOne
    } else {
        MonoCoeff::MinusOne
    }
}

/// Alamouti code on two relays: `X = [[s1, s2], [-s2*, s1*]]`.
pub fn alamouti() -> DistributedCode {
    let relay1 = AssociatedPair::new(MonoMatrix::from_ints(&[&[1, 0], &[0, 1]]), MonoMatrix::zeros(2, 2));
    let relay2 = AssociatedPair::new(MonoMatrix::zeros(2, 2), MonoMatrix::from_ints(&[&[0, 1], &[-1, 0]]));
    DistributedCode::new(2, 2, vec![relay1, relay2]).expect("static dimensions")
}

/// Rate-1/2 code `[G(s), G(s)*]` built from a real orthogonal design `G`.
///
/// `K = 3` keeps the first three rows of the 4-symbol design and `K = 5..7`
/// the first rows of the 8-symbol design.
pub fn rate_halving(n: usize, k: usize) -> Result<DistributedCode, ConstructError> {
    let size = match k {
        2 => 2,
        3 | 4 => 4,
        5..=8 => 8,
        _ => return Err(ConstructError::UnsupportedRateHalving { n, k }),
    };
    if n != size {
        return Err(ConstructError::UnsupportedRateHalving { n, k });
    }
    let slots = 2 * size;
    let relays = design_rows(size)
        .into_iter()
        .take(k)
        .map(|row| {
            let mut pair = AssociatedPair::zeros(n, slots);
            for (t, &v) in row.iter().enumerate() {
                let symbol = v.unsigned_abs() as usize - 1;
                pair.a.set(symbol, t, sign(v));
                pair.b.set(symbol, size + t, sign(v));
            }
            pair
        })
        .collect();
    Ok(DistributedCode::new(n, slots, relays).expect("design dimensions"))
}

/// Repetition-based cooperation: relay `k` forwards `s_1` alone in slot `k`.
pub fn repetition(k: usize) -> Result<DistributedCode, ConstructError> {
    if k == 0 {
        return Err(ConstructError::NoRelays);
    }
    let relays = (0..k)
        .map(|r| {
            let mut pair = AssociatedPair::zeros(1, k);
            pair.a.set(0, r, MonoCoeff::PlusOne);
            pair
        })
        .collect();
    Ok(DistributedCode::new(1, k, relays).expect("positive dimensions"))
}

/// No-CSI code for even `N` and even `K` reaching `N / (NK/2)`.
///
/// Relays are grouped in pairs and symbols in pairs; every (relay pair, symbol
/// pair) combination gets its own two slots carrying an Alamouti block, so
/// exactly two relays are active in each slot and `T = NK/2`.
pub fn pairwise_alamouti(n: usize, k: usize) -> Result<DistributedCode, ConstructError> {
    if n == 0 || k == 0 || n % 2 == 1 || k % 2 == 1 {
        return Err(ConstructError::OddPairwise { n, k });
    }
    let slots = n * k / 2;
    let mut relays = vec![AssociatedPair::zeros(n, slots); k];
    for p in 0..k / 2 {
        for q in 0..n / 2 {
            let base = 2 * (p * n / 2 + q);
            let (sa, sb) = (2 * q, 2 * q + 1);
            let first = &mut relays[2 * p];
            first.a.set(sa, base, MonoCoeff::PlusOne);
            first.a.set(sb, base + 1, MonoCoeff::PlusOne);
            let second = &mut relays[2 * p + 1];
            second.b.set(sb, base, MonoCoeff::MinusOne);
            second.b.set(sa, base + 1, MonoCoeff::PlusOne);
        }
    }
    Ok(DistributedCode::new(n, slots, relays).expect("positive dimensions"))
}
