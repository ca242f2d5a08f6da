//! Definitional and derived algebraic checks on distributed codes.
//!
//! Exact checks run over the Gaussian integers; the noise-weighted conditions
//! involve `R^-1` and are checked numerically over random channel draws.

mod covariance;
mod numeric;
mod report;
mod structure;
mod symbolic;
mod theorem1;

pub use covariance::{noise_covariance, relay_grams, CovarianceError, NoiseCovariance};
pub use numeric::{NumericOptions, VerifyError};
pub use report::{DiagonalProfile, FamilyOutcome, ProfileKind, ProfileValues, VerificationReport, Verdict};
pub use structure::{is_column_monomial, is_row_monomial};
pub use symbolic::{gram_entry, gram_polynomials, Monomial, Polynomial};
pub use theorem1::check_theorem1;

pub(crate) use covariance::covariance_from_grams;

use crate::code::DistributedCode;

/// No-CSI membership: single-monomial entries and `X_D R^-1 X_D^H = sum |s_n|^2 D_n`
/// with `D_n = diag[|h_k|^2 D_{n,k}]`, all `D_{n,k}` non-zero, on every draw.
pub fn check_definition1(code: &DistributedCode, opts: &NumericOptions) -> Result<VerificationReport, VerifyError> {
    opts.validate()?;
    let d11 = FamilyOutcome::from_violation("D1.1", structure::single_term_violation(code));
    if !d11.passed {
        return Ok(VerificationReport::from_families(vec![d11], vec![], vec![]));
    }
    let outcome = numeric::weighted_orthogonality(code, false, opts);
    let profiles = outcome
        .profile
        .filter(|_| outcome.violation.is_none())
        .map(|p| DiagonalProfile::numeric(ProfileKind::D, p))
        .into_iter()
        .collect();
    Ok(VerificationReport::from_families(
        vec![d11, FamilyOutcome::from_violation("Eq12", outcome.violation)],
        profiles,
        outcome.notes,
    ))
}

/// Exact structural and channel-free conditions of a row-monomial CPI code:
/// row-monomial associated matrices, single-monomial entries and
/// `X_C X_C^H = sum |s_n|^2 G_n` with every `G_{n,k} > 0`.
pub fn check_definition2_exact(code: &DistributedCode) -> VerificationReport {
    let row_mono = FamilyOutcome::from_violation(
        "row-monomial",
        structure::first_matrix_violation(code, is_row_monomial),
    );
    let d11 = FamilyOutcome::from_violation("D1.1", structure::single_term_violation(code));
    let (eq21, profiles) = match symbolic::orthogonality_profile(code) {
        Ok(g) => (FamilyOutcome::pass("Eq21"), vec![DiagonalProfile::exact(ProfileKind::G, g)]),
        Err(v) => (FamilyOutcome::from_violation("Eq21", Some(v)), vec![]),
    };
    VerificationReport::from_families(vec![row_mono, d11, eq21], profiles, vec![])
}

/// Full CPI membership: [`check_definition2_exact`] plus the noise-weighted
/// condition `X_C R^-1 X_C^H = sum |s_n|^2 F_n` over `opts.draws` draws.
pub fn check_definition2(code: &DistributedCode, opts: &NumericOptions) -> Result<VerificationReport, VerifyError> {
    opts.validate()?;
    let exact = check_definition2_exact(code);
    let mut families = exact.families;
    let mut profiles = exact.profiles;
    let structural_ok = families.iter().take(2).all(|f| f.passed);
    let mut notes = Vec::new();
    if structural_ok {
        let outcome = numeric::weighted_orthogonality(code, true, opts);
        if outcome.violation.is_none() {
            if let Some(p) = outcome.profile {
                profiles.push(DiagonalProfile::numeric(ProfileKind::F, p));
            }
        }
        families.push(FamilyOutcome::from_violation("Eq20", outcome.violation));
        notes = outcome.notes;
    }
    Ok(VerificationReport::from_families(families, profiles, notes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{parse_code, AssociatedPair, MonoMatrix};
    use crate::construct;

    fn opts() -> NumericOptions {
        NumericOptions::default()
    }

    #[test]
    fn definition1_alamouti_passes() {
        let report = check_definition1(&construct::alamouti(), &opts()).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn definition1_pairwise_passes() {
        let report = check_definition1(&construct::pairwise_alamouti(4, 4).unwrap(), &opts()).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn definition1_double_transmit_fails() {
        let one = MonoMatrix::from_ints(&[&[1]]);
        let zero = MonoMatrix::zeros(1, 1);
        let code = crate::code::DistributedCode::new(
            1,
            1,
            vec![
                AssociatedPair::new(one.clone(), zero.clone()),
                AssociatedPair::new(one, zero),
            ],
        )
        .unwrap();
        let report = check_definition1(&code, &opts()).unwrap();
        assert!(!report.passed());
        assert!(report.failed_condition.unwrap().contains("off-diagonal (1,2)"));
    }

    #[test]
    fn definition1_rejects_rate_halving() {
        let report = check_definition1(&construct::rate_halving(4, 4).unwrap(), &opts()).unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn definition2_rate_halving_profile() {
        let report = check_definition2(&construct::rate_halving(4, 4).unwrap(), &opts()).unwrap();
        assert!(report.passed(), "{report}");
        let g = report.profile(ProfileKind::G).unwrap().exact_values().unwrap();
        assert!(g.iter().flatten().all(|&v| v == 2));
        assert!(report.profile(ProfileKind::F).is_some());
    }

    #[test]
    fn definition2_repetition_profile() {
        let report = check_definition2(&construct::repetition(3).unwrap(), &opts()).unwrap();
        assert!(report.passed(), "{report}");
        let g = report.profile(ProfileKind::G).unwrap().exact_values().unwrap();
        assert_eq!(g, &[vec![1, 1, 1]]);
    }

    #[test]
    fn definition2_column_code_fails_eq21() {
        // Two relays, one slot, both transmit s1: off-diagonal |s1|^2 survives.
        let code = parse_code("dostbc 1 2 1\nrelay 1\n1\n--\n0\nrelay 2\n1\n--\n0\n").unwrap();
        let report = check_definition2(&code, &opts()).unwrap();
        assert!(!report.passed());
        assert_eq!(report.failed_condition.as_deref(), Some("Eq21 k1=1 k2=2"));
        assert_eq!(report.witness.as_deref(), Some("1|s1|^2"));
    }

    #[test]
    fn definition2_rejects_non_row_monomial() {
        let code = parse_code("dostbc 1 1 2\nrelay 1\n1 1\n--\n0 0\n").unwrap();
        let report = check_definition2(&code, &opts()).unwrap();
        assert_eq!(report.failed_condition.as_deref(), Some("A_1"));
    }

    #[test]
    fn option_validation() {
        let code = construct::alamouti();
        let bad = NumericOptions { draws: 0, ..opts() };
        assert_eq!(check_definition1(&code, &bad), Err(VerifyError::NoDraws));
        let bad = NumericOptions { tol: 0.0, ..opts() };
        assert!(matches!(check_definition2(&code, &bad), Err(VerifyError::BadTolerance(_))));
    }
}
