//! Exact symbolic expansion of `X X^H` for the channel-free code matrix.
//!
//! Every entry of `X X^H` is a quadratic polynomial in `s_n` and `s_n*`
//! with Gaussian-integer coefficients.

use std::fmt;

use crate::code::{DistributedCode, Term};
use crate::gauss::GaussianInt;

/// Quadratic monomials, symbol indices 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Monomial {
    /// `s_a * conj(s_b)`; `Mixed(n, n)` is `|s_n|^2`.
    Mixed(usize, usize),
    /// `s_a * s_b` with `a <= b`.
    Plain(usize, usize),
    /// `conj(s_a) * conj(s_b)` with `a <= b`.
    Conj(usize, usize),
}

impl Monomial {
    /// The monomial of `u * conj(v)`.
    fn of_product(u: &Term, v: &Term) -> Self {
        let (a, b) = (u.symbol, v.symbol);
        match (u.conjugated, v.conjugated) {
            (false, false) => Monomial::Mixed(a, b),
            (false, true) => Monomial::Plain(a.min(b), a.max(b)),
            (true, false) => Monomial::Conj(a.min(b), a.max(b)),
            (true, true) => Monomial::Mixed(b, a),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Monomial::Mixed(a, b) if a == b => write!(f, "|s{}|^2", a + 1),
            Monomial::Mixed(a, b) => write!(f, "s{} s{}*", a + 1, b + 1),
            Monomial::Plain(a, b) => write!(f, "s{} s{}", a + 1, b + 1),
            Monomial::Conj(a, b) => write!(f, "s{}* s{}*", a + 1, b + 1),
        }
    }
}

/// Sparse polynomial with no zero coefficients, sorted by monomial.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: Vec<(Monomial, GaussianInt)>,
}

impl Polynomial {
    fn accumulate(&mut self, m: Monomial, c: GaussianInt) {
        match self.terms.iter_mut().find(|(x, _)| *x == m) {
            Some((_, acc)) => *acc += c,
            None => self.terms.push((m, c)),
        }
    }

    fn finish(mut self) -> Self {
        self.terms.retain(|(_, c)| !c.is_zero());
        self.terms.sort();
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, GaussianInt)] {
        &self.terms
    }

    pub fn coeff(&self, m: Monomial) -> GaussianInt {
        self.terms
            .iter()
            .find(|(x, _)| *x == m)
            .map_or(GaussianInt::ZERO, |(_, c)| *c)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.im == 0 {
                write!(f, "{}{}", c.re, m)?;
            } else {
                write!(f, "({c}){m}")?;
            }
        }
        Ok(())
    }
}

fn row_product(x: &[Vec<Term>], y: &[Vec<Term>]) -> Polynomial {
    let mut p = Polynomial::default();
    for (us, vs) in x.iter().zip(y) {
        for u in us {
            for v in vs {
                let c = GaussianInt::from(u.coeff) * GaussianInt::from(v.coeff).conj();
                p.accumulate(Monomial::of_product(u, v), c);
            }
        }
    }
    p.finish()
}

/// Entry `(k1, k2)` of `X X^H` for the channel-free code matrix.
pub fn gram_entry(code: &DistributedCode, k1: usize, k2: usize) -> Polynomial {
    let rows = code.symbolic_rows();
    row_product(&rows[k1], &rows[k2])
}

/// Full `K x K` expansion of `X X^H`.
pub fn gram_polynomials(code: &DistributedCode) -> Vec<Vec<Polynomial>> {
    let rows = code.symbolic_rows();
    rows.iter()
        .map(|r1| rows.iter().map(|r2| row_product(r1, r2)).collect())
        .collect()
}

/// Checks `X X^H = sum_n |s_n|^2 G_n` with every `G_{n,k} > 0`.
///
/// Returns the exact `G` (indexed `[n][k]`) or the first violation as
/// `(condition, witness)`.
pub(crate) fn orthogonality_profile(code: &DistributedCode) -> Result<Vec<Vec<i64>>, (String, String)> {
    let rows = code.symbolic_rows();
    let k = code.n_relays();
    let n = code.n_symbols();
    let mut g = vec![vec![0i64; k]; n];
    for k1 in 0..k {
        for k2 in k1..k {
            let p = row_product(&rows[k1], &rows[k2]);
            if k1 != k2 {
                if !p.is_zero() {
                    return Err((format!("Eq21 k1={} k2={}", k1 + 1, k2 + 1), p.to_string()));
                }
                continue;
            }
            for &(m, c) in p.terms() {
                match m {
                    Monomial::Mixed(a, b) if a == b && c.im == 0 => g[a][k1] = c.re,
                    _ => {
                        return Err((format!("Eq21 diagonal k={}", k1 + 1), p.to_string()));
                    }
                }
            }
            if let Some(sym) = (0..n).find(|&s| g[s][k1] <= 0) {
                return Err((
                    format!("Eq21 G k={} n={} not positive", k1 + 1, sym + 1),
                    p.to_string(),
                ));
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct;

    #[test]
    fn alamouti_gram_is_scaled_identity() {
        let code = construct::alamouti();
        let g = gram_polynomials(&code);
        let expected_diag = vec![
            (Monomial::Mixed(0, 0), GaussianInt::ONE),
            (Monomial::Mixed(1, 1), GaussianInt::ONE),
        ];
        assert_eq!(g[0][0].terms(), expected_diag.as_slice());
        assert_eq!(g[1][1].terms(), expected_diag.as_slice());
        assert!(g[0][1].is_zero() && g[1][0].is_zero());
        assert_eq!(g[0][0].to_string(), "1|s1|^2 + 1|s2|^2");
    }

    #[test]
    fn products_follow_conjugation_rules() {
        let s = |symbol, conjugated| Term {
            coeff: crate::coeff::MonoCoeff::PlusOne,
            symbol,
            conjugated,
        };
        assert_eq!(Monomial::of_product(&s(0, false), &s(1, false)), Monomial::Mixed(0, 1));
        assert_eq!(Monomial::of_product(&s(1, false), &s(0, true)), Monomial::Plain(0, 1));
        assert_eq!(Monomial::of_product(&s(1, true), &s(0, false)), Monomial::Conj(0, 1));
        assert_eq!(Monomial::of_product(&s(0, true), &s(1, true)), Monomial::Mixed(1, 0));
    }
}
