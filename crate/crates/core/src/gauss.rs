//! Exact arithmetic over the Gaussian integers `Z[j]`.
//!
//! Every product and sum of associated-matrix entries lands in `Z[j]`, so the
//! definitional checks run here without any rounding.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::Serialize;

use crate::coeff::MonoCoeff;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

impl GaussianInt {
    pub const ZERO: GaussianInt = GaussianInt { re: 0, im: 0 };
    pub const ONE: GaussianInt = GaussianInt { re: 1, im: 0 };

    pub const fn new(re: i64, im: i64) -> Self {
        GaussianInt { re, im }
    }

    pub fn conj(self) -> Self {
        GaussianInt::new(self.re, -self.im)
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    /// Squared magnitude, always a non-negative integer.
    pub fn norm_sqr(self) -> i64 {
        self.re * self.re + self.im * self.im
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re as f64, self.im as f64)
    }
}

impl From<MonoCoeff> for GaussianInt {
    fn from(c: MonoCoeff) -> Self {
        let (re, im) = c.parts();
        GaussianInt::new(re as i64, im as i64)
    }
}

impl From<i64> for GaussianInt {
    fn from(re: i64) -> Self {
        GaussianInt::new(re, 0)
    }
}

impl Add for GaussianInt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        GaussianInt::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl AddAssign for GaussianInt {
    fn add_assign(&mut self, rhs: Self) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl Sub for GaussianInt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        GaussianInt::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for GaussianInt {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianInt::new(-self.re, -self.im)
    }
}

impl Mul for GaussianInt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        GaussianInt::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (re, 0) => write!(f, "{re}"),
            (0, 1) => write!(f, "j"),
            (0, -1) => write!(f, "-j"),
            (0, im) => write!(f, "{im}j"),
            (re, im) if im < 0 => write!(f, "{re}-{}j", -im),
            (re, im) => write!(f, "{re}+{im}j"),
        }
    }
}

/// Dense row-major matrix over `Z[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianIntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussianInt>,
}

impl GaussianIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        GaussianIntMatrix {
            rows,
            cols,
            data: vec![GaussianInt::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = GaussianInt::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> GaussianInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        GaussianIntMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)].conj())
    }

    /// Hermitian transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self[(r, c)].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<GaussianInt> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    /// First non-zero entry in row-major order, as `(row, col, value)`.
    pub fn first_nonzero(&self) -> Option<(usize, usize, GaussianInt)> {
        self.data
            .iter()
            .position(|z| !z.is_zero())
            .map(|i| (i / self.cols, i % self.cols, self.data[i]))
    }

    /// First non-zero off-diagonal entry.
    pub fn first_off_diagonal(&self) -> Option<(usize, usize, GaussianInt)> {
        (0..self.rows)
            .flat_map(|r| (0..self.cols).map(move |c| (r, c)))
            .filter(|&(r, c)| r != c)
            .find(|&(r, c)| !self[(r, c)].is_zero())
            .map(|(r, c)| (r, c, self[(r, c)]))
    }

    pub fn scale(&self, k: GaussianInt) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)] * k)
    }
}

impl std::ops::Index<(usize, usize)> for GaussianIntMatrix {
    type Output = GaussianInt;
    fn index(&self, (r, c): (usize, usize)) -> &GaussianInt {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for GaussianIntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut GaussianInt {
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &GaussianIntMatrix {
    type Output = GaussianIntMatrix;
    fn add(self, rhs: Self) -> GaussianIntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "dimension mismatch");
        GaussianIntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl Mul for &GaussianIntMatrix {
    type Output = GaussianIntMatrix;
    fn mul(self, rhs: Self) -> GaussianIntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = GaussianIntMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    out[(r, c)] += a * rhs[(k, c)];
                }
            }
        }
        out
    }
}

impl fmt::Display for GaussianIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
        }
        write!(f, "]")
    }
}
