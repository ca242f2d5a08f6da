//! The five-letter coefficient alphabet `{0, +1, -1, +j, -j}` of associated matrices.

use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MonoCoeff {
    #[default]
    Zero,
    PlusOne,
    MinusOne,
    PlusJ,
    MinusJ,
}

impl MonoCoeff {
    pub const ALL: [MonoCoeff; 5] = [
        MonoCoeff::Zero,
        MonoCoeff::PlusOne,
        MonoCoeff::MinusOne,
        MonoCoeff::PlusJ,
        MonoCoeff::MinusJ,
    ];

    /// The four units of `Z[j]`.
    pub const UNITS: [MonoCoeff; 4] = [
        MonoCoeff::PlusOne,
        MonoCoeff::MinusOne,
        MonoCoeff::PlusJ,
        MonoCoeff::MinusJ,
    ];

    /// Real and imaginary parts.
    pub const fn parts(self) -> (i8, i8) {
        match self {
            MonoCoeff::Zero => (0, 0),
            MonoCoeff::PlusOne => (1, 0),
            MonoCoeff::MinusOne => (-1, 0),
            MonoCoeff::PlusJ => (0, 1),
            MonoCoeff::MinusJ => (0, -1),
        }
    }

    fn from_parts(re: i8, im: i8) -> Self {
        match (re, im) {
            (0, 0) => MonoCoeff::Zero,
            (1, 0) => MonoCoeff::PlusOne,
            (-1, 0) => MonoCoeff::MinusOne,
            (0, 1) => MonoCoeff::PlusJ,
            (0, -1) => MonoCoeff::MinusJ,
            _ => unreachable!("units of Z[j] are closed under multiplication"),
        }
    }

    pub fn is_zero(self) -> bool {
        self == MonoCoeff::Zero
    }

    pub fn conj(self) -> Self {
        match self {
            MonoCoeff::PlusJ => MonoCoeff::MinusJ,
            MonoCoeff::MinusJ => MonoCoeff::PlusJ,
            other => other,
        }
    }

    pub fn magnitude(self) -> u8 {
        u8::from(!self.is_zero())
    }

    pub fn to_complex(self) -> Complex64 {
        let (re, im) = self.parts();
        Complex64::new(re as f64, im as f64)
    }

    /// Token used by the code-file format.
    pub fn token(self) -> &'static str {
        match self {
            MonoCoeff::Zero => "0",
            MonoCoeff::PlusOne => "1",
            MonoCoeff::MinusOne => "-1",
            MonoCoeff::PlusJ => "j",
            MonoCoeff::MinusJ => "-j",
        }
    }
}

impl Neg for MonoCoeff {
    type Output = Self;
    fn neg(self) -> Self {
        let (re, im) = self.parts();
        MonoCoeff::from_parts(-re, -im)
    }
}

impl Mul for MonoCoeff {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = self.parts();
        let (c, d) = rhs.parts();
        MonoCoeff::from_parts(a * c - b * d, a * d + b * c)
    }
}

impl fmt::Display for MonoCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown coefficient token `{0}` (expected one of 0, 1, -1, j, -j)")]
pub struct UnknownToken(pub String);

impl FromStr for MonoCoeff {
    type Err = UnknownToken;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "0" | "-0" => Ok(MonoCoeff::Zero),
            "1" | "+1" => Ok(MonoCoeff::PlusOne),
            "-1" => Ok(MonoCoeff::MinusOne),
            "j" | "+j" => Ok(MonoCoeff::PlusJ),
            "-j" => Ok(MonoCoeff::MinusJ),
            other => Err(UnknownToken(other.to_string())),
        }
    }
}
