use std::fmt;
use std::ops::{Add, AddAssign};

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Polynomial in `q` with non-negative integer coefficients; index `k`
/// holds the number of objects with statistic `k`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct QPolynomial(Vec<BigUint>);

impl QPolynomial {
    pub fn zero() -> Self {
        QPolynomial(Vec::new())
    }

    pub fn one() -> Self {
        QPolynomial(vec![BigUint::one()])
    }

    pub fn monomial(k: usize) -> Self {
        let mut c = vec![BigUint::zero(); k + 1];
        c[k] = BigUint::one();
        QPolynomial(c)
    }

    pub fn from_coefficients(coefficients: impl IntoIterator<Item = u64>) -> Self {
        let mut p = QPolynomial(coefficients.into_iter().map(BigUint::from).collect());
        p.trim();
        p
    }

    pub fn coefficients(&self) -> &[BigUint] {
        &self.0
    }

    pub fn coefficient(&self, k: usize) -> BigUint {
        self.0.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Value at `q = 1`.
    pub fn eval_one(&self) -> BigUint {
        self.0.iter().sum()
    }

    /// Multiply by `q^k`.
    pub fn shifted(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut c = vec![BigUint::zero(); k];
        c.extend(self.0.iter().cloned());
        QPolynomial(c)
    }

    /// `q^d p(1/q)`; coefficients beyond `d` are dropped.
    pub fn reflected(&self, d: usize) -> Self {
        let mut p = QPolynomial((0..=d).map(|k| self.coefficient(d - k)).collect());
        p.trim();
        p
    }

    pub(crate) fn add_at(&mut self, k: usize, amount: u64) {
        if self.0.len() <= k {
            self.0.resize(k + 1, BigUint::zero());
        }
        self.0[k] += amount;
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }
}

impl AddAssign<&QPolynomial> for QPolynomial {
    fn add_assign(&mut self, rhs: &QPolynomial) {
        if self.0.len() < rhs.0.len() {
            self.0.resize(rhs.0.len(), BigUint::zero());
        }
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a += b;
        }
        self.trim();
    }
}

impl Add for QPolynomial {
    type Output = QPolynomial;
    fn add(mut self, rhs: QPolynomial) -> QPolynomial {
        self += &rhs;
        self
    }
}

/// Renders as a JSON-compatible array, e.g. `[1,1,2,1]`.
impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
