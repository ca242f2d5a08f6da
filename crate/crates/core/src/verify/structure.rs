//! Monomial structure of associated matrices.

use crate::code::{DistributedCode, MonoMatrix};

/// At most one non-zero entry on every row.
pub fn is_row_monomial(m: &MonoMatrix) -> bool {
    (0..m.rows()).all(|r| m.row(r).iter().filter(|c| !c.is_zero()).count() <= 1)
}

/// At most one non-zero entry on every column.
pub fn is_column_monomial(m: &MonoMatrix) -> bool {
    (0..m.cols()).all(|c| (0..m.rows()).filter(|&r| !m.get(r, c).is_zero()).count() <= 1)
}

pub(crate) fn first_matrix_violation(
    code: &DistributedCode,
    pred: fn(&MonoMatrix) -> bool,
) -> Option<(String, String)> {
    for (k, pair) in code.relays().iter().enumerate() {
        for (name, m) in [("A", &pair.a), ("B", &pair.b)] {
            if !pred(m) {
                return Some((format!("{name}_{}", k + 1), m.to_gauss().to_string()));
            }
        }
    }
    None
}

/// Every code-matrix entry must be a single monomial `c * s_n` or `c * s_n*`.
///
/// Returns the first offending entry as `(relay, slot)`, 1-based, with its terms.
pub(crate) fn single_term_violation(code: &DistributedCode) -> Option<(String, String)> {
    for (k, row) in code.symbolic_rows().iter().enumerate() {
        for (t, terms) in row.iter().enumerate() {
            if terms.len() > 1 {
                let rendered: Vec<String> = terms
                    .iter()
                    .map(|term| {
                        format!(
                            "{}*s{}{}",
                            term.coeff,
                            term.symbol + 1,
                            if term.conjugated { "*" } else { "" }
                        )
                    })
                    .collect();
                return Some((format!("D1.1 entry ({},{})", k + 1, t + 1), rendered.join(" + ")));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct;

    #[test]
    fn row_and_column_monomial() {
        let id = MonoMatrix::from_ints(&[&[1, 0], &[0, 1]]);
        assert!(is_row_monomial(&id));
        assert!(is_column_monomial(&id));
        let two_in_row = MonoMatrix::from_ints(&[&[1, 1], &[0, 0]]);
        assert!(!is_row_monomial(&two_in_row));
        assert!(is_column_monomial(&two_in_row));
        let two_in_col = MonoMatrix::from_ints(&[&[1, 0], &[1, 0]]);
        assert!(!is_column_monomial(&two_in_col));
        assert!(is_row_monomial(&two_in_col));
    }

    #[test]
    fn constructions_are_monomial() {
        let rh = construct::rate_halving(4, 4).unwrap();
        for p in rh.relays() {
            assert!(is_row_monomial(&p.a) && is_row_monomial(&p.b));
        }
        let al = construct::alamouti();
        for p in al.relays() {
            assert!(is_column_monomial(&p.a) && is_column_monomial(&p.b));
            assert!(is_row_monomial(&p.a) && is_row_monomial(&p.b));
        }
        assert!(single_term_violation(&rh).is_none());
    }
}
