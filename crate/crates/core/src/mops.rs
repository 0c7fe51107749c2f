//! Monic orthogonal polynomial sequences: generation from three-term
//! recurrences, recurrence extraction from moments, exact classical families,
//! and the Favard oracle used as ground truth by the orthogonality checks.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::poly::Poly;
use crate::exact::rational::{self, int, rat, Rational};
use crate::functionals::MomentFunctional;

/// Recurrence coefficients of `P_{n+1} = (x - beta_n) P_n - gamma_n P_{n-1}`.
///
/// Holds `beta_0..beta_{len-1}` and `gamma_1..gamma_{len-1}`; every stored
/// gamma is nonzero (Favard condition), enforced at construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RecurrenceCoeffs {
    betas: Vec<Rational>,
    gammas: Vec<Rational>,
}

impl RecurrenceCoeffs {
    /// `betas[n] = beta_n`, `gammas[n-1] = gamma_n`. Requires
    /// `gammas.len() + 1 == betas.len()` when nonempty and every gamma nonzero.
    pub fn new(betas: Vec<Rational>, gammas: Vec<Rational>) -> Result<Self> {
        if !betas.is_empty() && gammas.len() + 1 != betas.len() {
            return Err(Error::InsufficientCoefficients {
                what: "gammas",
                needed: betas.len().saturating_sub(1),
                available: gammas.len(),
            });
        }
        if let Some(i) = gammas.iter().position(Zero::is_zero) {
            return Err(Error::FavardGate { index: i + 1 });
        }
        Ok(RecurrenceCoeffs { betas, gammas })
    }

    /// Number of beta coefficients; polynomials can be generated through
    /// degree `len()`.
    pub fn len(&self) -> usize {
        self.betas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.betas.is_empty()
    }

    pub fn betas(&self) -> &[Rational] {
        &self.betas
    }

    pub fn gammas(&self) -> &[Rational] {
        &self.gammas
    }

    pub fn beta(&self, n: usize) -> Result<&Rational> {
        self.betas.get(n).ok_or(Error::InsufficientCoefficients {
            what: "beta",
            needed: n,
            available: self.betas.len(),
        })
    }

    /// `gamma_n` for `n >= 1`.
    pub fn gamma(&self, n: usize) -> Result<&Rational> {
        if n == 0 {
            return Err(Error::IndexOutOfRange("gamma_0 is not defined".into()));
        }
        self.gammas
            .get(n - 1)
            .ok_or(Error::InsufficientCoefficients {
                what: "gamma",
                needed: n,
                available: self.gammas.len(),
            })
    }
}

/// Generates the monic polynomials `P_0..=P_{n_max}` from a recurrence, with
/// `P_0 = 1`, `P_{-1} = 0`.
pub fn generate(rc: &RecurrenceCoeffs, n_max: usize) -> Result<Vec<Poly>> {
    if n_max > 0 && rc.len() < n_max {
        return Err(Error::InsufficientCoefficients {
            what: "recurrence",
            needed: n_max,
            available: rc.len(),
        });
    }
    let mut polys = Vec::with_capacity(n_max + 1);
    polys.push(Poly::one());
    for n in 0..n_max {
        let x_shift = polys[n].mul_x();
        let mut next = &x_shift - &polys[n].scale(rc.beta(n)?);
        if n >= 1 {
            next = &next - &polys[n - 1].scale(rc.gamma(n)?);
        }
        polys.push(next);
    }
    Ok(polys)
}

/// Extracts recurrence coefficients from moments by iterative
/// orthogonalization: `beta_n = <u, x P_n^2> / h_n`, `gamma_n = h_n / h_{n-1}`.
/// Needs moments through `2 * n_max`. Fails with `NotRegular` at the first
/// vanishing norm.
pub fn recurrence_from_moments(u: &MomentFunctional, n_max: usize) -> Result<RecurrenceCoeffs> {
    Ok(orthogonalize(u, n_max)?.0)
}

/// Recurrence plus polynomials plus norms, in one pass.
fn orthogonalize(
    u: &MomentFunctional,
    n_max: usize,
) -> Result<(RecurrenceCoeffs, Vec<Poly>, Vec<Rational>)> {
    if 2 * n_max > u.truncation() {
        return Err(Error::TruncationExceeded {
            needed: 2 * n_max,
            available: u.truncation(),
        });
    }
    let mut polys = vec![Poly::one()];
    let mut norms = vec![u.apply(&Poly::one())?];
    if norms[0].is_zero() {
        return Err(Error::NotRegular { order: 0 });
    }
    let mut betas = Vec::new();
    let mut gammas = Vec::new();
    for n in 0..n_max {
        let pn = &polys[n];
        let pn_sq = pn * pn;
        let beta = u.apply(&pn_sq.mul_x())? / &norms[n];
        let mut next = &pn.mul_x() - &pn.scale(&beta);
        if n >= 1 {
            let gamma = &norms[n] / &norms[n - 1];
            next = &next - &polys[n - 1].scale(&gamma);
            gammas.push(gamma);
        }
        betas.push(beta);
        let h = u.apply(&(&next * &next))?;
        if h.is_zero() {
            // h_{n+1} = 0 is exactly a vanishing Hankel determinant of order
            // n+1; callers rely on every stored norm being invertible.
            return Err(Error::NotRegular { order: n + 1 });
        }
        norms.push(h);
        polys.push(next);
    }
    let rc = RecurrenceCoeffs::new(betas, gammas).map_err(|e| match e {
        Error::FavardGate { index } => Error::NotRegular { order: index },
        other => other,
    })?;
    Ok((rc, polys, norms))
}

/// Moments `mu_0..=mu_k_max` of the normalized functional whose MOPS obeys the
/// given recurrence: expand `x^k` in the `P` basis and read off the `P_0`
/// coefficient. Needs the recurrence through index `k_max - 1`.
pub fn moments_from_recurrence(rc: &RecurrenceCoeffs, k_max: usize) -> Result<Vec<Rational>> {
    let polys = generate(rc, k_max)?;
    let mut moments = Vec::with_capacity(k_max + 1);
    let mut power = Poly::one();
    for _ in 0..=k_max {
        let coeffs = expand_in_basis(&power, &polys)?;
        moments.push(coeffs.first().cloned().unwrap_or_else(Rational::zero));
        power = power.mul_x();
    }
    Ok(moments)
}

/// A monic orthogonal polynomial sequence bundled with its functional,
/// recurrence, and norms `h_n = <u, P_n^2>`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mops {
    polys: Vec<Poly>,
    functional: MomentFunctional,
    recurrence: RecurrenceCoeffs,
    norms: Vec<Rational>,
}

impl Mops {
    /// Orthogonalizes `u` through degree `n_max`.
    pub fn from_functional(u: MomentFunctional, n_max: usize) -> Result<Self> {
        let (recurrence, polys, norms) = orthogonalize(&u, n_max)?;
        Ok(Mops {
            polys,
            functional: u,
            recurrence,
            norms,
        })
    }

    /// Builds the sequence from a recurrence, deriving moments to depth
    /// `k_depth` (which must be at least `2 * n_max`).
    pub fn from_recurrence(rc: &RecurrenceCoeffs, n_max: usize, k_depth: usize) -> Result<Self> {
        if k_depth < 2 * n_max {
            return Err(Error::InvalidParameter(format!(
                "moment depth {k_depth} below 2 * n_max = {}",
                2 * n_max
            )));
        }
        let moments = moments_from_recurrence(rc, k_depth)?;
        let u = MomentFunctional::new_normalized(moments)?;
        Mops::from_functional(u, n_max)
    }

    pub fn n_max(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn poly(&self, n: usize) -> &Poly {
        &self.polys[n]
    }

    pub fn functional(&self) -> &MomentFunctional {
        &self.functional
    }

    pub fn recurrence(&self) -> &RecurrenceCoeffs {
        &self.recurrence
    }

    pub fn norms(&self) -> &[Rational] {
        &self.norms
    }

    /// `h_n = <u, P_n^2>`.
    pub fn norm(&self, n: usize) -> Result<&Rational> {
        self.norms.get(n).ok_or(Error::InsufficientCoefficients {
            what: "norms",
            needed: n,
            available: self.norms.len(),
        })
    }

    /// `P_n / h_n`, the normalized polynomial paired against the functional.
    pub fn normalized_poly(&self, n: usize) -> Result<Poly> {
        let h = self.norm(n)?;
        Ok(self.poly(n).scale(&(Rational::one() / h)))
    }

    /// `<P-bar_j u, p> = <u, P_j p> / h_j`.
    pub fn dual_pairing(&self, j: usize, p: &Poly) -> Result<Rational> {
        let h = self.norm(j)?;
        Ok(self.functional.apply(&(self.poly(j) * p))? / h)
    }
}

/// Classical families with exact rational moments.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ClassicalFamily {
    Legendre,
    ChebyshevT,
    ChebyshevU,
    Jacobi { alpha: Rational, beta: Rational },
    Laguerre { alpha: Rational },
    Hermite,
}

impl ClassicalFamily {
    /// Exact moments through index `k_max`, normalized by `mu_0 = 1`.
    ///
    /// Jacobi moments follow the integration-by-parts recursion
    /// `mu_{k+1} = ((b - a) mu_k + k mu_{k-1}) / (a + b + k + 2)` for the
    /// weight `(1-x)^a (1+x)^b` on `[-1, 1]`; Laguerre uses
    /// `mu_{k+1} = (alpha + k + 1) mu_k`; Hermite (weight `e^{-x^2}`,
    /// normalized) uses `mu_{k+1} = (k/2) mu_{k-1}`.
    pub fn moments(&self, k_max: usize) -> Result<Vec<Rational>> {
        match self {
            ClassicalFamily::Legendre => jacobi_moments(&int(0), &int(0), k_max),
            ClassicalFamily::ChebyshevT => jacobi_moments(&rat(-1, 2), &rat(-1, 2), k_max),
            ClassicalFamily::ChebyshevU => jacobi_moments(&rat(1, 2), &rat(1, 2), k_max),
            ClassicalFamily::Jacobi { alpha, beta } => jacobi_moments(alpha, beta, k_max),
            ClassicalFamily::Laguerre { alpha } => {
                if rational::is_at_most_minus_one(alpha) {
                    return Err(Error::InvalidParameter(format!(
                        "laguerre alpha must be > -1, got {}",
                        rational::to_string(alpha)
                    )));
                }
                let mut out = vec![int(1)];
                for k in 0..k_max {
                    let next = (alpha + int(k as i64 + 1)) * &out[k];
                    out.push(next);
                }
                Ok(out)
            }
            ClassicalFamily::Hermite => {
                let mut out = vec![int(1)];
                if k_max >= 1 {
                    out.push(int(0));
                }
                for k in 1..k_max {
                    let next = rat(k as i64, 2) * &out[k - 1];
                    out.push(next);
                }
                Ok(out)
            }
        }
    }

    /// Moments through `k_max` together with the recurrence extracted from
    /// them (single code path: families are defined by their moments, the
    /// recurrences are derived, never transcribed).
    pub fn functional_and_recurrence(
        &self,
        k_max: usize,
    ) -> Result<(MomentFunctional, RecurrenceCoeffs)> {
        let u = MomentFunctional::new_normalized(self.moments(k_max)?)?;
        let rc = recurrence_from_moments(&u, k_max / 2)?;
        Ok((u, rc))
    }
}

fn jacobi_moments(a: &Rational, b: &Rational, k_max: usize) -> Result<Vec<Rational>> {
    if rational::is_at_most_minus_one(a) || rational::is_at_most_minus_one(b) {
        return Err(Error::InvalidParameter(format!(
            "jacobi parameters must be > -1, got alpha = {}, beta = {}",
            rational::to_string(a),
            rational::to_string(b)
        )));
    }
    let mut out = vec![int(1)];
    for k in 0..k_max {
        let prev = if k == 0 { int(0) } else { out[k - 1].clone() };
        let num = (b - a) * &out[k] + int(k as i64) * prev;
        let den = a + b + int(k as i64 + 2);
        out.push(num / den);
    }
    Ok(out)
}

/// Expands `p` in the monic graded basis `basis[0..]`, returning the
/// coefficients `c_k` with `p = sum c_k basis[k]`. The basis must satisfy
/// `deg basis[n] = n` and reach `deg p`.
pub fn expand_in_basis(p: &Poly, basis: &[Poly]) -> Result<Vec<Rational>> {
    let deg = match p.degree() {
        None => return Ok(Vec::new()),
        Some(d) => d,
    };
    if basis.len() <= deg {
        return Err(Error::InsufficientCoefficients {
            what: "basis",
            needed: deg,
            available: basis.len(),
        });
    }
    let mut coeffs = vec![Rational::zero(); deg + 1];
    let mut rest = p.clone();
    while let Some(d) = rest.degree() {
        let b = &basis[d];
        debug_assert_eq!(b.degree(), Some(d));
        let lead_b = b.leading().expect("nonzero basis element");
        let c = rest.coeff(d) / lead_b;
        rest = &rest - &b.scale(&c);
        coeffs[d] = c;
        if rest.degree() == Some(d) {
            return Err(Error::NotABasis(format!(
                "basis element of degree {d} did not eliminate the leading term"
            )));
        }
    }
    Ok(coeffs)
}

/// Verdict of the Favard oracle.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FavardVerdict {
    /// The sequence satisfies a three-term recurrence with nonzero gammas;
    /// these are the extracted coefficients.
    Mops(RecurrenceCoeffs),
    /// The recurrence fails at step `n`.
    Violation(FavardViolation),
}

/// Witness for a failed three-term recurrence check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FavardViolation {
    /// `x * seq[n]` has a nonzero component on `seq[k]` with `k < n - 1`.
    NonzeroLowCoeff { n: usize, k: usize, value: Rational },
    /// The coefficient on `seq[n-1]` (the would-be `gamma_n`) vanishes.
    ZeroGamma { n: usize },
}

impl FavardVerdict {
    pub fn is_mops(&self) -> bool {
        matches!(self, FavardVerdict::Mops(_))
    }
}

/// Independent three-term-recurrence check: expands `x * seq[n]` in the basis
/// `seq` by back-substitution and demands that every component below index
/// `n - 1` vanish and the `n - 1` component be nonzero. On success returns the
/// extracted recurrence coefficients.
///
/// `seq` must be a monic simple set (`deg seq[n] = n`); checked, with
/// `NotABasis` otherwise. A sequence of length <= 2 is vacuously a MOPS
/// prefix.
pub fn favard_oracle(seq: &[Poly]) -> Result<FavardVerdict> {
    for (n, p) in seq.iter().enumerate() {
        if p.degree() != Some(n) {
            return Err(Error::NotABasis(format!(
                "element {n} has degree {:?}, expected {n}",
                p.degree()
            )));
        }
        if !p.is_monic() {
            return Err(Error::NotABasis(format!("element {n} is not monic")));
        }
    }
    if seq.is_empty() {
        return Err(Error::NotABasis("empty sequence".into()));
    }
    let top = seq.len() - 1;
    let mut betas = Vec::new();
    let mut gammas = Vec::new();
    for n in 0..top {
        let coeffs = expand_in_basis(&seq[n].mul_x(), seq)?;
        debug_assert!(coeffs[n + 1].is_one());
        if n >= 1 {
            for (k, c) in coeffs.iter().enumerate().take(n.saturating_sub(1)) {
                if !c.is_zero() {
                    return Ok(FavardVerdict::Violation(FavardViolation::NonzeroLowCoeff {
                        n,
                        k,
                        value: c.clone(),
                    }));
                }
            }
            if coeffs[n - 1].is_zero() {
                return Ok(FavardVerdict::Violation(FavardViolation::ZeroGamma { n }));
            }
            gammas.push(coeffs[n - 1].clone());
        }
        betas.push(coeffs[n].clone());
    }
    Ok(FavardVerdict::Mops(RecurrenceCoeffs::new(betas, gammas)?))
}
