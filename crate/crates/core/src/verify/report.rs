use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Which per-symbol diagonal profile a set of coefficients describes.
///
/// `E` and `G` come from the exact channel-free products `X X^H`; `D` and `F`
/// from the noise-weighted products `X R^-1 X^H` (no-CSI and CPI respectively).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProfileKind {
    D,
    E,
    F,
    G,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ProfileValues {
    Exact(Vec<Vec<i64>>),
    Numeric(Vec<Vec<f64>>),
}

/// `values[n][k]` is the coefficient of `|s_n|^2` on relay `k`'s diagonal entry.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagonalProfile {
    pub kind: ProfileKind,
    pub values: ProfileValues,
}

impl DiagonalProfile {
    pub fn exact(kind: ProfileKind, values: Vec<Vec<i64>>) -> Self {
        DiagonalProfile {
            kind,
            values: ProfileValues::Exact(values),
        }
    }

    pub fn numeric(kind: ProfileKind, values: Vec<Vec<f64>>) -> Self {
        DiagonalProfile {
            kind,
            values: ProfileValues::Numeric(values),
        }
    }

    pub fn exact_values(&self) -> Option<&[Vec<i64>]> {
        match &self.values {
            ProfileValues::Exact(v) => Some(v),
            ProfileValues::Numeric(_) => None,
        }
    }

    pub fn numeric_values(&self) -> Option<&[Vec<f64>]> {
        match &self.values {
            ProfileValues::Numeric(v) => Some(v),
            ProfileValues::Exact(_) => None,
        }
    }
}

/// Outcome of one family of conditions (e.g. all `Econd1` pairs).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyOutcome {
    pub family: String,
    pub passed: bool,
    pub failed_condition: Option<String>,
    pub witness: Option<String>,
}

impl FamilyOutcome {
    pub fn pass(family: &str) -> Self {
        FamilyOutcome {
            family: family.to_string(),
            passed: true,
            failed_condition: None,
            witness: None,
        }
    }

    pub fn fail(family: &str, condition: String, witness: String) -> Self {
        FamilyOutcome {
            family: family.to_string(),
            passed: false,
            failed_condition: Some(condition),
            witness: Some(witness),
        }
    }

    pub(crate) fn from_violation(family: &str, v: Option<(String, String)>) -> Self {
        match v {
            None => Self::pass(family),
            Some((c, w)) => Self::fail(family, c, w),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub verdict: Verdict,
    pub failed_condition: Option<String>,
    pub witness: Option<String>,
    pub families: Vec<FamilyOutcome>,
    pub profiles: Vec<DiagonalProfile>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn from_families(families: Vec<FamilyOutcome>, profiles: Vec<DiagonalProfile>, notes: Vec<String>) -> Self {
        let first = families.iter().find(|f| !f.passed);
        VerificationReport {
            verdict: if first.is_some() { Verdict::Fail } else { Verdict::Pass },
            failed_condition: first.and_then(|f| f.failed_condition.clone()),
            witness: first.and_then(|f| f.witness.clone()),
            families,
            profiles,
            notes,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn profile(&self, kind: ProfileKind) -> Option<&DiagonalProfile> {
        self.profiles.iter().find(|p| p.kind == kind)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.verdict {
            Verdict::Pass => writeln!(f, "verdict: PASS")?,
            Verdict::Fail => writeln!(
                f,
                "verdict: FAIL at {}",
                self.failed_condition.as_deref().unwrap_or("?")
            )?,
        }
        for fam in &self.families {
            match &fam.failed_condition {
                None => writeln!(f, "  [ok]   {}", fam.family)?,
                Some(c) => writeln!(
                    f,
                    "  [fail] {}: {} -> {}",
                    fam.family,
                    c,
                    fam.witness.as_deref().unwrap_or("")
                )?,
            }
        }
        for p in &self.profiles {
            writeln!(f, "  profile {:?} (rows = symbols, columns = relays):", p.kind)?;
            match &p.values {
                ProfileValues::Exact(v) => {
                    for row in v {
                        writeln!(f, "    {row:?}")?;
                    }
                }
                ProfileValues::Numeric(v) => {
                    for row in v {
                        let cells: Vec<String> = row.iter().map(|x| format!("{x:.6}")).collect();
                        writeln!(f, "    [{}]", cells.join(", "))?;
                    }
                }
            }
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
