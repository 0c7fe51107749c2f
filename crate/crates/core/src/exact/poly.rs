//! Dense univariate polynomials over exact rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use super::rational::{self, Rational};

/// Dense polynomial; `coeffs[k]` is the coefficient of `x^k`. No trailing zero
/// coefficient is ever stored, so the zero polynomial has an empty list and
/// `degree() == None`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly {
            coeffs: vec![Rational::zero(), Rational::one()],
        }
    }

    pub fn constant(c: Rational) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(k: usize, c: Rational) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    /// Builds from ascending coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Degree of the polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `x^k` (zero beyond the stored length).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplication by `x`.
    pub fn mul_x(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Exact Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * x + c;
        }
        acc
    }

    /// Synthetic division by `x - c`: returns `(quotient, remainder)` with
    /// `self = quotient * (x - c) + remainder`.
    pub fn div_linear(&self, c: &Rational) -> (Poly, Rational) {
        if self.is_zero() {
            return (Poly::zero(), Rational::zero());
        }
        let mut quotient = vec![Rational::zero(); self.coeffs.len() - 1];
        let mut carry = Rational::zero();
        for (k, coeff) in self.coeffs.iter().enumerate().rev() {
            let value = coeff + &carry * c;
            if k == 0 {
                return (Poly::from_coeffs(quotient), value);
            }
            quotient[k - 1] = value.clone();
            carry = value;
        }
        unreachable!("loop returns at k = 0");
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        Poly::from_coeffs(coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        Poly::from_coeffs(coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        // Leading term is a product of nonzero rationals, so no trim is needed,
        // but from_coeffs keeps the invariant obvious.
        Poly::from_coeffs(coeffs)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let s = rational::to_string(&num::Signed::abs(c));
            let sign = if num::Signed::is_negative(c) { "-" } else { "+" };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            match k {
                0 => write!(f, "{s}")?,
                _ => {
                    if s == "1" {
                        write!(f, "{}", term(k))?;
                    } else {
                        write!(f, "{s}·{}", term(k))?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn term(k: usize) -> String {
    if k == 1 {
        "x".to_string()
    } else {
        format!("x^{k}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn p(coeffs: &[(i64, i64)]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn product_difference_of_squares() {
        // (x-2)(x+2) = x^2 - 4
        let a = p(&[(-2, 1), (1, 1)]);
        let b = p(&[(2, 1), (1, 1)]);
        assert_eq!(&a * &b, p(&[(-4, 1), (0, 1), (1, 1)]));
    }

    #[test]
    fn product_with_zero() {
        let a = Poly::zero();
        let b = p(&[(1, 1), (0, 1), (0, 1), (1, 1)]);
        assert_eq!(&a * &b, Poly::zero());
        assert_eq!(&b * &a, Poly::zero());
    }

    #[test]
    fn exact_square() {
        // (x + 1/2)^2 = x^2 + x + 1/4
        let a = p(&[(1, 2), (1, 1)]);
        assert_eq!(&a * &a, p(&[(1, 4), (1, 1), (1, 1)]));
    }

    #[test]
    fn horner_eval() {
        // x^2 - 1/3 at 1 -> 2/3
        let a = p(&[(-1, 3), (0, 1), (1, 1)]);
        assert_eq!(a.eval(&rat(1, 1)), rat(2, 3));
        // zero polynomial at 7 -> 0
        assert_eq!(Poly::zero().eval(&rat(7, 1)), rat(0, 1));
        // x + 1/6 at -1/6 -> 0
        let b = p(&[(1, 6), (1, 1)]);
        assert_eq!(b.eval(&rat(-1, 6)), rat(0, 1));
    }

    #[test]
    fn degree_and_trim() {
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(Poly::one().degree(), Some(0));
        let trimmed = Poly::from_coeffs(vec![rat(1, 1), rat(0, 1), rat(0, 1)]);
        assert_eq!(trimmed.degree(), Some(0));
        let diff = &p(&[(1, 1), (1, 1)]) - &p(&[(0, 1), (1, 1)]);
        assert_eq!(diff.degree(), Some(0));
    }
}
