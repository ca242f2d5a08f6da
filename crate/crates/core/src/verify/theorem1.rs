//! Channel-free necessary conditions on the associated matrices of a no-CSI code:
//!
//! ```text
//! A_k1 A_k2^H = 0                      (k1 != k2)     Econd1
//! B_k1 B_k2^H = 0                      (k1 != k2)     Econd2
//! A_k1 B_k2^H + B_k2^* A_k1^T = 0                     Econd3
//! B_k1 A_k2^H + A_k2^* B_k1^T = 0                     Econd4
//! A_k A_k^H + B_k^* B_k^T = diag[E_1k, ..., E_Nk]     Econd5, E > 0
//! ```

use crate::code::DistributedCode;
use crate::gauss::GaussianIntMatrix;
use crate::verify::report::{DiagonalProfile, FamilyOutcome, ProfileKind, VerificationReport};
use crate::verify::structure::{first_matrix_violation, is_column_monomial, single_term_violation};

struct Exact {
    a: Vec<GaussianIntMatrix>,
    b: Vec<GaussianIntMatrix>,
}

impl Exact {
    fn new(code: &DistributedCode) -> Self {
        Exact {
            a: code.relays().iter().map(|p| p.a.to_gauss()).collect(),
            b: code.relays().iter().map(|p| p.b.to_gauss()).collect(),
        }
    }
}

fn first_nonzero_pair(
    name: &str,
    k: usize,
    distinct: bool,
    f: impl Fn(usize, usize) -> GaussianIntMatrix,
) -> Option<(String, String)> {
    for k1 in 0..k {
        for k2 in 0..k {
            if distinct && k1 == k2 {
                continue;
            }
            let m = f(k1, k2);
            if !m.is_zero() {
                return Some((format!("{name} k1={} k2={}", k1 + 1, k2 + 1), m.to_string()));
            }
        }
    }
    None
}

/// Exact evaluation of every condition family; on success the report carries
/// the strictly positive integer profile `E`.
pub fn check_theorem1(code: &DistributedCode) -> VerificationReport {
    let k = code.n_relays();
    let n = code.n_symbols();
    let ex = Exact::new(code);

    let mut families = vec![
        FamilyOutcome::from_violation("Lemma1 column-monomial", first_matrix_violation(code, is_column_monomial)),
        FamilyOutcome::from_violation("D1.1", single_term_violation(code)),
        FamilyOutcome::from_violation(
            "Econd1",
            first_nonzero_pair("Econd1", k, true, |i, j| &ex.a[i] * &ex.a[j].adjoint()),
        ),
        FamilyOutcome::from_violation(
            "Econd2",
            first_nonzero_pair("Econd2", k, true, |i, j| &ex.b[i] * &ex.b[j].adjoint()),
        ),
        FamilyOutcome::from_violation(
            "Econd3",
            first_nonzero_pair("Econd3", k, false, |i, j| {
                &(&ex.a[i] * &ex.b[j].adjoint()) + &(&ex.b[j].conj() * &ex.a[i].transpose())
            }),
        ),
        FamilyOutcome::from_violation(
            "Econd4",
            first_nonzero_pair("Econd4", k, false, |i, j| {
                &(&ex.b[i] * &ex.a[j].adjoint()) + &(&ex.a[j].conj() * &ex.b[i].transpose())
            }),
        ),
    ];

    let mut e = vec![vec![0i64; k]; n];
    let mut econd5 = None;
    for r in 0..k {
        let m = &(&ex.a[r] * &ex.a[r].adjoint()) + &(&ex.b[r].conj() * &ex.b[r].transpose());
        if let Some((i, j, _)) = m.first_off_diagonal() {
            econd5 = Some((format!("Econd5 k={} entry ({},{})", r + 1, i + 1, j + 1), m.to_string()));
            break;
        }
        for (sym, d) in m.diagonal().into_iter().enumerate() {
            e[sym][r] = d.re;
        }
        if let Some(sym) = (0..n).find(|&s| e[s][r] <= 0) {
            econd5 = Some((format!("Econd5 E k={} n={} not positive", r + 1, sym + 1), m.to_string()));
            break;
        }
    }
    let econd5_ok = econd5.is_none();
    families.push(FamilyOutcome::from_violation("Econd5", econd5));

    let profiles = if econd5_ok {
        vec![DiagonalProfile::exact(ProfileKind::E, e)]
    } else {
        vec![]
    };
    VerificationReport::from_families(families, profiles, vec![])
}
