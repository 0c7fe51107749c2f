//! Moment functionals and their algebra.
//!
//! A linear functional on polynomials is represented by its truncated moment
//! sequence `mu_k = <u, x^k>`, `k = 0..=K`. The truncation depth `K` is
//! explicit state and every operation checks it, so "holds for all
//! polynomials" claims always come with the horizon at which they were
//! verified.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::matrix::Matrix;
use crate::exact::poly::Poly;
use crate::exact::rational::Rational;

/// Truncated moment sequence of a linear functional.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MomentFunctional {
    moments: Vec<Rational>,
}

impl MomentFunctional {
    /// A functional normalized by `<u, 1> = 1`; rejects anything else.
    pub fn new_normalized(moments: Vec<Rational>) -> Result<Self> {
        if moments.is_empty() {
            return Err(Error::InsufficientCoefficients {
                what: "moments",
                needed: 0,
                available: 0,
            });
        }
        if !moments[0].is_one() {
            return Err(Error::InvalidParameter(format!(
                "functional must be normalized: mu_0 = {} != 1",
                crate::exact::rational::to_string(&moments[0])
            )));
        }
        Ok(MomentFunctional { moments })
    }

    /// A possibly unnormalized moment sequence (output of [`poly_mod`]).
    pub fn from_raw_moments(moments: Vec<Rational>) -> Self {
        MomentFunctional { moments }
    }

    /// Truncation depth: moments are available for `0..=K`.
    pub fn truncation(&self) -> usize {
        self.moments.len() - 1
    }

    pub fn moments(&self) -> &[Rational] {
        &self.moments
    }

    pub fn moment(&self, k: usize) -> Result<&Rational> {
        self.moments.get(k).ok_or(Error::TruncationExceeded {
            needed: k,
            available: self.truncation(),
        })
    }

    /// `<u, p>` — exact action on a polynomial.
    pub fn apply(&self, p: &Poly) -> Result<Rational> {
        if let Some(d) = p.degree() {
            if d > self.truncation() {
                return Err(Error::TruncationExceeded {
                    needed: d,
                    available: self.truncation(),
                });
            }
        }
        Ok(p.coeffs()
            .iter()
            .zip(&self.moments)
            .map(|(c, m)| c * m)
            .sum())
    }

    /// The modified functional `phi * u`, defined by
    /// `<phi u, x^k> = <u, phi x^k>`. The result is NOT renormalized: its
    /// zeroth moment is `<u, phi>`, whatever that is. Truncation drops by
    /// `deg phi`.
    pub fn poly_mod(&self, phi: &Poly) -> Result<MomentFunctional> {
        let d = match phi.degree() {
            Some(d) => d,
            None => {
                // phi = 0: the zero functional at full depth.
                return Ok(MomentFunctional::from_raw_moments(vec![
                    Rational::zero();
                    self.moments.len()
                ]));
            }
        };
        if d > self.truncation() {
            return Err(Error::TruncationExceeded {
                needed: d,
                available: self.truncation(),
            });
        }
        let new_len = self.moments.len() - d;
        let moments = (0..new_len)
            .map(|k| {
                phi.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(j, c)| c * &self.moments[k + j])
                    .sum()
            })
            .collect();
        Ok(MomentFunctional::from_raw_moments(moments))
    }

    /// `p / <u, p^2>` — the normalized polynomial written `P-bar` next to a
    /// MOPS. Fails with `ZeroNorm` when `<u, p^2> = 0`, which is exactly a
    /// non-regularity witness.
    pub fn normalized(&self, p: &Poly) -> Result<Poly> {
        let norm = self.apply(&(p * p))?;
        if norm.is_zero() {
            return Err(Error::ZeroNorm { degree: p.degree() });
        }
        Ok(p.scale(&(Rational::one() / norm)))
    }

    /// Hankel determinants `Delta_m = det [mu_{i+j}]_{i,j=0..m}` for
    /// `m = 0..=n`. The functional is regular through degree `n` iff all of
    /// them are nonzero.
    pub fn hankel_regular(&self, n: usize) -> Result<RegularityCertificate> {
        if 2 * n > self.truncation() {
            return Err(Error::TruncationExceeded {
                needed: 2 * n,
                available: self.truncation(),
            });
        }
        let dets = crate::exec::map_range(0..n + 1, |m| {
            Matrix::from_fn(m + 1, m + 1, |i, j| self.moments[i + j].clone())
                .det()
                .expect("hankel matrices are square")
        });
        Ok(RegularityCertificate {
            n_checked: n,
            hankel_dets: dets,
        })
    }
}

/// Outcome of a Hankel regularity check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RegularityCertificate {
    pub n_checked: usize,
    /// `Delta_0 ..= Delta_{n_checked}`.
    pub hankel_dets: Vec<Rational>,
}

impl RegularityCertificate {
    /// Regular through `n_checked` iff every listed determinant is nonzero.
    pub fn is_regular(&self) -> bool {
        self.hankel_dets.iter().all(|d| !d.is_zero())
    }

    /// Index of the first vanishing Hankel determinant, if any.
    pub fn first_zero(&self) -> Option<usize> {
        self.hankel_dets.iter().position(Zero::is_zero)
    }
}
