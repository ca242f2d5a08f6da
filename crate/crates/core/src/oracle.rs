//! Exhaustive search over small spaces of structured codes.
//!
//! Candidates are indexed in mixed radix, most significant digit first, so the
//! raw stream order is the lexicographic order of digit vectors.
//!
//! * Row-monomial (CPI) space: one digit per `(relay, matrix, symbol row)`,
//!   `0` for an empty row, otherwise a slot and a unit coefficient.
//! * Column-monomial (no-CSI) space: one digit per `(relay, matrix, slot column)`,
//!   `0` for an empty column, otherwise a symbol and a unit coefficient.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::code::{serialize_code, AssociatedPair, DistributedCode, MonoMatrix, Rate, RateString};
use crate::coeff::MonoCoeff;
use crate::verify::{check_definition2, check_definition2_exact, check_theorem1, NumericOptions};

pub const DEFAULT_BUDGET: u128 = 1_000_000_000;
const PROGRESS_EVERY: u128 = 1_000_000;
const CHUNK: u128 = 1 << 16;
const SUB_CHUNK: u128 = 1 << 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Structure {
    RowMonomialCpi,
    ColumnMonomialDostbc,
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Structure::RowMonomialCpi => "row_monomial_cpi",
            Structure::ColumnMonomialDostbc => "column_monomial_dostbc",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchSpace {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub structure: Structure,
    pub canonicalize: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("search space has {count} raw candidates, budget is {budget}")]
    BudgetExceeded { count: String, budget: u128 },
    #[error("dimensions must be positive (N={n}, K={k}, T={t})")]
    EmptySpace { n: usize, k: usize, t: usize },
}

/// Raw candidate count, or `None` when it does not fit in `u128`.
fn checked_count(base: u128, exp: usize) -> Option<u128> {
    base.checked_pow(u32::try_from(exp).ok()?)
}

impl SearchSpace {
    pub fn new(n: usize, k: usize, t: usize, structure: Structure) -> Self {
        SearchSpace {
            n,
            k,
            t,
            structure,
            canonicalize: false,
        }
    }

    pub fn canonical(mut self, on: bool) -> Self {
        self.canonicalize = on;
        self
    }

    /// Number of mixed-radix digits.
    fn digits(&self) -> usize {
        match self.structure {
            Structure::RowMonomialCpi => 2 * self.k * self.n,
            Structure::ColumnMonomialDostbc => 2 * self.k * self.t,
        }
    }

    fn radix(&self) -> u128 {
        match self.structure {
            Structure::RowMonomialCpi => 4 * self.t as u128 + 1,
            Structure::ColumnMonomialDostbc => 4 * self.n as u128 + 1,
        }
    }

    /// `(4T+1)^(2KN)` for the row-monomial space, `(4N+1)^(2KT)` for the column-monomial one.
    pub fn raw_count(&self) -> Option<u128> {
        checked_count(self.radix(), self.digits())
    }

    fn raw_count_string(&self) -> String {
        match self.raw_count() {
            Some(c) => c.to_string(),
            None => format!("{}^{}", self.radix(), self.digits()),
        }
    }

    fn validate(&self, budget: u128) -> Result<u128, OracleError> {
        if self.n == 0 || self.k == 0 || self.t == 0 {
            return Err(OracleError::EmptySpace {
                n: self.n,
                k: self.k,
                t: self.t,
            });
        }
        match self.raw_count() {
            Some(c) if c <= budget => Ok(c),
            _ => Err(OracleError::BudgetExceeded {
                count: self.raw_count_string(),
                budget,
            }),
        }
    }
}

impl fmt::Display for SearchSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} N={} K={} T={}", self.structure, self.n, self.k, self.t)?;
        if self.canonicalize {
            f.write_str(" canonical")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchOptions {
    pub budget: u128,
    pub numeric: NumericOptions,
    /// Print a progress line to stderr every 10^6 raw candidates.
    pub progress: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: DEFAULT_BUDGET,
            numeric: NumericOptions::default(),
            progress: false,
        }
    }
}

/// Digit vectors and their transforms, independent of the concrete code type.
struct Layout {
    space: SearchSpace,
    digits: usize,
    radix: u8,
    perms: Vec<Vec<usize>>,
}

fn permutations(t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..t).collect();
    fn rec(i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for j in i..cur.len() {
            cur.swap(i, j);
            rec(i + 1, cur, out);
            cur.swap(i, j);
        }
    }
    rec(0, &mut cur, &mut out);
    out.sort();
    out
}

fn unit_index(c: MonoCoeff) -> u8 {
    MonoCoeff::UNITS.iter().position(|&u| u == c).expect("unit") as u8
}

impl Layout {
    fn new(space: SearchSpace) -> Self {
        Layout {
            space,
            digits: space.digits(),
            radix: space.radix() as u8,
            perms: if space.canonicalize { permutations(space.t) } else { Vec::new() },
        }
    }

    /// Digit position of `(relay, matrix, row-or-column)`.
    fn pos(&self, k: usize, m: usize, i: usize) -> usize {
        let inner = match self.space.structure {
            Structure::RowMonomialCpi => self.space.n,
            Structure::ColumnMonomialDostbc => self.space.t,
        };
        (k * 2 + m) * inner + i
    }

    fn decode(&self, mut index: u128, out: &mut [u8]) {
        let r = self.radix as u128;
        for d in out.iter_mut().rev() {
            *d = (index % r) as u8;
            index /= r;
        }
    }

    /// `(slot, symbol, coefficient)` of a non-zero digit at `(k, m, i)`.
    fn entry(&self, i: usize, d: u8) -> (usize, usize, MonoCoeff) {
        let v = (d - 1) as usize;
        let c = MonoCoeff::UNITS[v % 4];
        match self.space.structure {
            Structure::RowMonomialCpi => (v / 4, i, c),
            Structure::ColumnMonomialDostbc => (i, v / 4, c),
        }
    }

    fn digit(&self, slot: usize, symbol: usize, c: MonoCoeff) -> (usize, u8) {
        match self.space.structure {
            Structure::RowMonomialCpi => (symbol, 1 + (slot * 4) as u8 + unit_index(c)),
            Structure::ColumnMonomialDostbc => (slot, 1 + (symbol * 4) as u8 + unit_index(c)),
        }
    }

    /// Some symbol never appears in any relay.
    fn degenerate(&self, digits: &[u8]) -> bool {
        let mut seen = vec![false; self.space.n];
        self.for_each_entry(digits, |_, _, _, sym, _| seen[sym] = true);
        !seen.iter().all(|&s| s)
    }

    /// Some relay misses some symbol; every valid code has a strictly positive
    /// per-relay, per-symbol diagonal profile, so this is a necessary condition.
    fn relay_misses_symbol(&self, digits: &[u8]) -> bool {
        let n = self.space.n;
        let mut seen = vec![false; self.space.k * n];
        self.for_each_entry(digits, |k, _, _, sym, _| seen[k * n + sym] = true);
        !seen.iter().all(|&s| s)
    }

    fn for_each_entry(&self, digits: &[u8], mut f: impl FnMut(usize, usize, usize, usize, MonoCoeff)) {
        let inner = digits.len() / (2 * self.space.k);
        for (p, &d) in digits.iter().enumerate() {
            if d != 0 {
                let (k, m, i) = (p / (2 * inner), (p / inner) % 2, p % inner);
                let (slot, sym, c) = self.entry(i, d);
                f(k, m, slot, sym, c);
            }
        }
    }

    /// Applies a slot permutation and per-symbol unit rotations `s_n -> u_n s_n`.
    fn transform(&self, digits: &[u8], perm: &[usize], rot: &[MonoCoeff], out: &mut [u8]) {
        out.iter_mut().for_each(|d| *d = 0);
        let inner = digits.len() / (2 * self.space.k);
        self.for_each_entry(digits, |k, m, slot, sym, c| {
            let u = if m == 0 { rot[sym] } else { rot[sym].conj() };
            let (i, d) = self.digit(perm[slot], sym, c * u);
            out[(k * 2 + m) * inner + i] = d;
        });
    }

    /// Whether the digit vector is the lexicographic minimum of its orbit.
    fn is_canonical(&self, digits: &[u8], scratch: &mut [u8]) -> bool {
        let n = self.space.n;
        let mut rot = vec![MonoCoeff::PlusOne; n];
        for perm in &self.perms {
            for r in 0..4usize.pow(n as u32) {
                let mut x = r;
                for u in rot.iter_mut() {
                    *u = MonoCoeff::UNITS[x % 4];
                    x /= 4;
                }
                self.transform(digits, perm, &rot, scratch);
                if scratch[..] < digits[..] {
                    return false;
                }
            }
        }
        true
    }

    /// Candidate belongs to the (possibly canonical) stream.
    fn yields(&self, digits: &[u8], scratch: &mut [u8]) -> bool {
        !self.degenerate(digits) && (!self.space.canonicalize || self.is_canonical(digits, scratch))
    }

    fn build(&self, digits: &[u8]) -> DistributedCode {
        let (n, t) = (self.space.n, self.space.t);
        let mut pairs: Vec<[MonoMatrix; 2]> = (0..self.space.k)
            .map(|_| [MonoMatrix::zeros(n, t), MonoMatrix::zeros(n, t)])
            .collect();
        self.for_each_entry(digits, |k, m, slot, sym, c| pairs[k][m].set(sym, slot, c));
        let relays = pairs.into_iter().map(|[a, b]| AssociatedPair::new(a, b)).collect();
        DistributedCode::new(n, t, relays).expect("positive dimensions")
    }

    /// Full membership test of a yielded candidate.
    fn accepts(&self, digits: &[u8], numeric: &NumericOptions) -> Option<DistributedCode> {
        if self.relay_misses_symbol(digits) {
            return None;
        }
        let code = self.build(digits);
        let ok = match self.space.structure {
            Structure::RowMonomialCpi => {
                check_definition2_exact(&code).passed()
                    && check_definition2(&code, numeric).expect("validated options").passed()
            }
            Structure::ColumnMonomialDostbc => check_theorem1(&code).passed(),
        };
        ok.then_some(code)
    }
}

/// Streams every candidate of the space in raw index order, skipping
/// degenerate ones and, with `canonicalize`, non-canonical ones.
pub fn enumerate_codes(
    space: SearchSpace,
    budget: u128,
) -> Result<impl Iterator<Item = DistributedCode>, OracleError> {
    let count = space.validate(budget)?;
    let layout = Layout::new(space);
    let mut digits = vec![0u8; layout.digits];
    let mut scratch = vec![0u8; layout.digits];
    Ok((0..count).filter_map(move |i| {
        layout.decode(i, &mut digits);
        layout.yields(&digits, &mut scratch).then(|| layout.build(&digits))
    }))
}

/// Canonical representative of a code's orbit within its search space.
pub fn canonical_form(code: &DistributedCode, structure: Structure) -> DistributedCode {
    let space = SearchSpace::new(code.n_symbols(), code.n_relays(), code.n_slots(), structure).canonical(true);
    let layout = Layout::new(space);
    let digits = encode(&layout, code).expect("code fits the structure");
    let mut best = digits.clone();
    let mut scratch = vec![0u8; digits.len()];
    let n = space.n;
    let mut rot = vec![MonoCoeff::PlusOne; n];
    for perm in &layout.perms {
        for r in 0..4usize.pow(n as u32) {
            let mut x = r;
            for u in rot.iter_mut() {
                *u = MonoCoeff::UNITS[x % 4];
                x /= 4;
            }
            layout.transform(&digits, perm, &rot, &mut scratch);
            if scratch < best {
                best.copy_from_slice(&scratch);
            }
        }
    }
    layout.build(&best)
}

/// Digit vector of a code, or `None` if it is not row- (column-) monomial.
fn encode(layout: &Layout, code: &DistributedCode) -> Option<Vec<u8>> {
    let mut digits = vec![0u8; layout.digits];
    for (k, pair) in code.relays().iter().enumerate() {
        for (m, mat) in [&pair.a, &pair.b].into_iter().enumerate() {
            for (sym, slot, c) in mat.nonzeros() {
                let (i, d) = layout.digit(slot, sym, c);
                let p = layout.pos(k, m, i);
                if digits[p] != 0 {
                    return None;
                }
                digits[p] = d;
            }
        }
    }
    Some(digits)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchVerdict {
    Exists,
    None,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub space: SearchSpace,
    pub raw_count: u128,
    /// Candidates yielded by the stream up to and including the witness.
    pub enumerated: u64,
    pub witness: Option<DistributedCode>,
}

impl SearchOutcome {
    pub fn exists(&self) -> bool {
        self.witness.is_some()
    }

    pub fn verdict(&self) -> SearchVerdict {
        if self.exists() {
            SearchVerdict::Exists
        } else {
            SearchVerdict::None
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "space": self.space,
            "raw_count": self.raw_count.to_string(),
            "enumerated": self.enumerated,
            "witnesses": self.witness.iter().map(serialize_code).collect::<Vec<_>>(),
            "verdict": self.verdict(),
        })
    }
}

/// Searches the space for a valid code: [`check_definition2`] for the
/// row-monomial space, [`check_theorem1`] for the column-monomial one.
///
/// The witness is the first valid candidate in stream order, so the outcome
/// is deterministic regardless of thread count.
pub fn exists_code(space: SearchSpace, opts: &SearchOptions) -> Result<SearchOutcome, OracleError> {
    let count = space.validate(opts.budget)?;
    let layout = Layout::new(space);
    let mut enumerated = 0u64;
    let mut next_report = PROGRESS_EVERY;
    let mut start = 0u128;
    while start < count {
        let end = (start + CHUNK).min(count);
        let subs: Vec<(u128, u128)> = (start..end)
            .step_by(SUB_CHUNK as usize)
            .map(|s| (s, (s + SUB_CHUNK).min(end)))
            .collect();
        let results: Vec<(u64, Option<u128>)> = subs
            .par_iter()
            .map(|&(s, e)| {
                let mut digits = vec![0u8; layout.digits];
                let mut scratch = vec![0u8; layout.digits];
                let mut yielded = 0u64;
                for i in s..e {
                    layout.decode(i, &mut digits);
                    if layout.yields(&digits, &mut scratch) {
                        yielded += 1;
                        if layout.accepts(&digits, &opts.numeric).is_some() {
                            return (yielded, Some(i));
                        }
                    }
                }
                (yielded, None)
            })
            .collect();
        for (yielded, hit) in results {
            enumerated += yielded;
            if let Some(i) = hit {
                let mut digits = vec![0u8; layout.digits];
                layout.decode(i, &mut digits);
                return Ok(SearchOutcome {
                    space,
                    raw_count: count,
                    enumerated,
                    witness: layout.accepts(&digits, &opts.numeric),
                });
            }
        }
        start = end;
        if opts.progress && start >= next_report {
            eprintln!("[search] {space}: {start}/{count} raw candidates, {enumerated} enumerated");
            next_report += PROGRESS_EVERY;
        }
    }
    Ok(SearchOutcome {
        space,
        raw_count: count,
        enumerated,
        witness: None,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaxRateOutcome {
    /// One outcome per searched `T`, ascending, ending at the first success.
    pub per_t: Vec<SearchOutcome>,
    pub t_max: usize,
}

impl MaxRateOutcome {
    pub fn minimal_t(&self) -> Option<usize> {
        self.per_t.iter().find(|o| o.exists()).map(|o| o.space.t)
    }

    /// `N / T_min`, the best rate reachable within `T <= t_max`.
    pub fn best_rate(&self) -> Option<Rate> {
        self.per_t
            .iter()
            .find(|o| o.exists())
            .map(|o| Rate::new(o.space.n as u64, o.space.t as u64))
    }

    pub fn witness(&self) -> Option<&DistributedCode> {
        self.per_t.iter().find_map(|o| o.witness.as_ref())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "t_max": self.t_max,
            "minimal_t": self.minimal_t(),
            "best_rate": self.best_rate().map(RateString),
            "verdict": if self.minimal_t().is_some() { "exists".to_string() } else { format!("none <= T_max={}", self.t_max) },
            "per_t": self.per_t.iter().map(SearchOutcome::to_json).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("T={t}: {source}")]
pub struct MaxRateError {
    pub t: usize,
    #[source]
    pub source: OracleError,
}

/// Sweeps `T = 1..=t_max` and stops at the first `T` admitting a valid code.
pub fn max_rate(
    n: usize,
    k: usize,
    t_max: usize,
    structure: Structure,
    canonicalize: bool,
    opts: &SearchOptions,
) -> Result<MaxRateOutcome, MaxRateError> {
    let mut per_t = Vec::new();
    for t in 1..=t_max {
        let space = SearchSpace::new(n, k, t, structure).canonical(canonicalize);
        let outcome = exists_code(space, opts).map_err(|source| MaxRateError { t, source })?;
        let found = outcome.exists();
        per_t.push(outcome);
        if found {
            break;
        }
    }
    Ok(MaxRateOutcome { per_t, t_max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{cpi_rate_bound, dostbc_rate_bound};
    use crate::construct;

    fn cpi(n: usize, k: usize, t: usize) -> SearchSpace {
        SearchSpace::new(n, k, t, Structure::RowMonomialCpi)
    }

    fn dostbc(n: usize, k: usize, t: usize) -> SearchSpace {
        SearchSpace::new(n, k, t, Structure::ColumnMonomialDostbc)
    }

    #[test]
    fn raw_counts() {
        assert_eq!(cpi(1, 1, 1).raw_count(), Some(25));
        assert_eq!(cpi(1, 2, 1).raw_count(), Some(625));
        assert_eq!(cpi(1, 2, 2).raw_count(), Some(6561));
        assert_eq!(cpi(1, 3, 1).raw_count(), Some(15625));
        assert_eq!(dostbc(1, 2, 1).raw_count(), Some(625));
        assert_eq!(dostbc(2, 2, 2).raw_count(), Some(9u128.pow(8)));
        assert_eq!(cpi(8, 6, 16).raw_count(), None);
    }

    #[test]
    fn degenerate_filter_counts() {
        assert_eq!(enumerate_codes(cpi(1, 1, 1), DEFAULT_BUDGET).unwrap().count(), 24);
        assert_eq!(enumerate_codes(cpi(1, 2, 1), DEFAULT_BUDGET).unwrap().count(), 624);
    }

    #[test]
    fn budget_is_enforced() {
        let err = enumerate_codes(cpi(1, 2, 2), 1000).err().unwrap();
        assert_eq!(
            err,
            OracleError::BudgetExceeded {
                count: "6561".into(),
                budget: 1000
            }
        );
        let opts = SearchOptions {
            budget: 10,
            ..SearchOptions::default()
        };
        assert!(exists_code(cpi(1, 1, 1), &opts).is_err());
    }

    #[test]
    fn canonical_stream_is_smaller() {
        let raw = enumerate_codes(cpi(1, 2, 2), DEFAULT_BUDGET).unwrap().count();
        let canon = enumerate_codes(cpi(1, 2, 2).canonical(true), DEFAULT_BUDGET).unwrap().count();
        assert!(canon < raw, "{canon} !< {raw}");
        assert!(canon > 0);
    }

    #[test]
    fn canonical_stream_covers_every_orbit() {
        let space = cpi(1, 2, 2);
        let canon: std::collections::HashSet<DistributedCode> =
            enumerate_codes(space.canonical(true), DEFAULT_BUDGET).unwrap().collect();
        for code in enumerate_codes(space, DEFAULT_BUDGET).unwrap() {
            assert!(canon.contains(&canonical_form(&code, Structure::RowMonomialCpi)));
        }
    }

    #[test]
    fn small_nonexistence() {
        let opts = SearchOptions::default();
        assert!(!exists_code(cpi(1, 2, 1), &opts).unwrap().exists());
        assert!(!exists_code(dostbc(1, 2, 1), &opts).unwrap().exists());
    }

    #[test]
    fn two_relay_single_symbol_needs_two_slots() {
        let out = max_rate(1, 2, 2, Structure::RowMonomialCpi, false, &SearchOptions::default()).unwrap();
        assert_eq!(out.minimal_t(), Some(2));
        assert_eq!(out.best_rate(), Some(Rate::new(1, 2)));
        assert!(!out.per_t[0].exists());
    }

    #[test]
    fn rediscovers_alamouti() {
        let out = max_rate(2, 2, 2, Structure::RowMonomialCpi, true, &SearchOptions::default()).unwrap();
        assert_eq!(out.minimal_t(), Some(2));
        let w = out.witness().unwrap();
        assert_eq!(w.rate(), Rate::new(1, 1));
        // Each symbol at unit energy per relay, no zero entries: an Alamouti-type arrangement.
        for row in w.symbolic_rows() {
            assert!(row.iter().all(|terms| terms.len() == 1));
        }
        assert!(w.rate() <= cpi_rate_bound(2));
    }

    #[test]
    fn witnesses_respect_bounds() {
        let opts = SearchOptions::default();
        for space in [cpi(1, 2, 2), cpi(2, 2, 2).canonical(true), dostbc(1, 2, 2), dostbc(2, 2, 2).canonical(true)] {
            let out = exists_code(space, &opts).unwrap();
            let w = out.witness.expect("space admits a code");
            match space.structure {
                Structure::RowMonomialCpi => assert!(w.rate() <= cpi_rate_bound(space.k)),
                Structure::ColumnMonomialDostbc => assert!(w.rate() <= dostbc_rate_bound(space.n, space.k)),
            }
        }
    }

    #[test]
    fn raw_and_canonical_agree() {
        let opts = SearchOptions::default();
        for space in [cpi(1, 1, 1), cpi(1, 2, 1), cpi(1, 2, 2), cpi(2, 1, 1), dostbc(1, 2, 1), dostbc(1, 2, 2), dostbc(2, 1, 2)] {
            let raw = exists_code(space, &opts).unwrap();
            let canon = exists_code(space.canonical(true), &opts).unwrap();
            assert_eq!(raw.exists(), canon.exists(), "{space}");
            assert!(canon.enumerated <= raw.enumerated || !raw.exists());
        }
    }

    #[test]
    fn monotone_in_t() {
        let opts = SearchOptions::default();
        let verdicts: Vec<bool> = (1..=3).map(|t| exists_code(cpi(1, 2, t), &opts).unwrap().exists()).collect();
        assert_eq!(verdicts, vec![false, true, true]);
    }

    #[test]
    fn canonical_form_is_orbit_invariant() {
        let code = construct::alamouti();
        let swapped = code.permute_slots(&[1, 0]);
        assert_eq!(
            canonical_form(&code, Structure::RowMonomialCpi),
            canonical_form(&swapped, Structure::RowMonomialCpi)
        );
    }

    #[test]
    fn json_shape() {
        let out = exists_code(cpi(1, 2, 2), &SearchOptions::default()).unwrap();
        let v = out.to_json();
        assert_eq!(v["verdict"], "exists");
        assert_eq!(v["raw_count"], "6561");
        assert_eq!(v["witnesses"].as_array().unwrap().len(), 1);
        assert_eq!(v["space"]["structure"], "row_monomial_cpi");
    }
}
