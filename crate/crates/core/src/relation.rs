//! Structure relations between two monic polynomial sequences and the pairing
//! matrices built from them.
//!
//! The relation is
//!
//! ```text
//! P_n + sum_{i=1..N} r_{i,n} P_{n-i} = Q_n + sum_{i=1..M} s_{i,n} Q_{n-i}
//! ```
//!
//! with the convention that `r_{i,n} = 0` whenever `i > n` (stored as data, not
//! as a code path) and an empty sum equal to zero. `R_n` names the common value
//! of the two sides.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::matrix::Matrix;
use crate::exact::poly::Poly;
use crate::exact::rational::{self, Rational};
use crate::functionals::MomentFunctional;
use crate::mops::{self, FavardVerdict, Mops};

/// Coefficient tables of the relation; `N` and `M` are the window widths.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StructureRelation {
    n_window: usize,
    m_window: usize,
    /// `r[i-1][n] = r_{i,n}` for `i = 1..=N`.
    r: Vec<Vec<Rational>>,
    /// `s[i-1][n] = s_{i,n}` for `i = 1..=M`.
    s: Vec<Vec<Rational>>,
}

impl StructureRelation {
    /// Validates table shapes and the `r_{i,n} = 0 for i > n` convention.
    pub fn new(
        n_window: usize,
        m_window: usize,
        r: Vec<Vec<Rational>>,
        s: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        if r.len() != n_window {
            return Err(Error::InsufficientCoefficients {
                what: "r table rows",
                needed: n_window,
                available: r.len(),
            });
        }
        if s.len() != m_window {
            return Err(Error::InsufficientCoefficients {
                what: "s table rows",
                needed: m_window,
                available: s.len(),
            });
        }
        let mut table_len: Option<usize> = None;
        for (label, table) in [("r", &r), ("s", &s)] {
            for (idx, row) in table.iter().enumerate() {
                match table_len {
                    None => table_len = Some(row.len()),
                    Some(l) if l == row.len() => {}
                    Some(l) => {
                        return Err(Error::InsufficientCoefficients {
                            what: "relation table row length",
                            needed: l,
                            available: row.len(),
                        })
                    }
                }
                let i = idx + 1;
                for (n, value) in row.iter().enumerate().take(i.min(row.len())) {
                    if !value.is_zero() {
                        return Err(Error::InvalidParameter(format!(
                            "{label}_{{{i},{n}}} = {} violates the convention that \
                             coefficients vanish for i > n",
                            rational::to_string(value)
                        )));
                    }
                }
            }
        }
        Ok(StructureRelation {
            n_window,
            m_window,
            r,
            s,
        })
    }

    /// The trivial relation `P_n = Q_n` (`N = M = 0`).
    pub fn identity() -> Self {
        StructureRelation {
            n_window: 0,
            m_window: 0,
            r: Vec::new(),
            s: Vec::new(),
        }
    }

    pub fn n_window(&self) -> usize {
        self.n_window
    }

    pub fn m_window(&self) -> usize {
        self.m_window
    }

    /// Largest `n` covered by the tables; `None` when `N = M = 0`.
    pub fn table_max(&self) -> Option<usize> {
        self.r
            .first()
            .or_else(|| self.s.first())
            .map(|row| row.len() - 1)
    }

    /// `r_{i,n}` for `1 <= i <= N`, `n` inside the table.
    pub fn r(&self, i: usize, n: usize) -> Result<&Rational> {
        table_get(&self.r, "r", i, n)
    }

    /// `s_{i,n}` for `1 <= i <= M`, `n` inside the table.
    pub fn s(&self, i: usize, n: usize) -> Result<&Rational> {
        table_get(&self.s, "s", i, n)
    }

    /// `r_{i,n}` extended by zero for `i > N` or `i = 0`; `n` must be in range.
    pub fn r_or_zero(&self, i: usize, n: usize) -> Result<Rational> {
        if i == 0 || i > self.n_window {
            return Ok(Rational::zero());
        }
        self.r(i, n).cloned()
    }

    /// `s_{i,n}` extended by zero for `i > M` or `i = 0`; `n` must be in range.
    pub fn s_or_zero(&self, i: usize, n: usize) -> Result<Rational> {
        if i == 0 || i > self.m_window {
            return Ok(Rational::zero());
        }
        self.s(i, n).cloned()
    }

    /// Returns a copy with `r_{i,n}` overwritten (tests and perturbation
    /// corpora use this; the convention gate still applies).
    pub fn with_r(&self, i: usize, n: usize, value: Rational) -> Result<Self> {
        let mut r = self.r.clone();
        *table_get_mut(&mut r, "r", i, n)? = value;
        StructureRelation::new(self.n_window, self.m_window, r, self.s.clone())
    }

    /// Returns a copy with `s_{i,n}` overwritten.
    pub fn with_s(&self, i: usize, n: usize, value: Rational) -> Result<Self> {
        let mut s = self.s.clone();
        *table_get_mut(&mut s, "s", i, n)? = value;
        StructureRelation::new(self.n_window, self.m_window, self.r.clone(), s)
    }

    /// The matrix `A` of the dual-basis expansion
    /// `A (c_0..c_{M+N-1})^T = (a_0..a_{M-1}, b_0..b_{N-1})^T`, computed from
    /// the coefficient tables alone: the P-dual rows read off the P-side
    /// expansion of `R_k`, the Q-dual rows the Q-side expansion. Defined for
    /// `N + M >= 1`; needs tables through `n = M + N - 1`.
    pub fn dual_basis_matrix(&self) -> Result<Matrix> {
        let (n_w, m_w) = (self.n_window, self.m_window);
        let dim = n_w + m_w;
        if dim == 0 {
            return Err(Error::IndexOutOfRange(
                "matrix A is undefined for N = M = 0".into(),
            ));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in 0..dim {
            for k in 0..dim {
                let value = if row < m_w {
                    // coefficient of P_row in R_k
                    let i = row;
                    if k == i {
                        Rational::one()
                    } else if k > i && k - i <= n_w {
                        self.r(k - i, k)?.clone()
                    } else {
                        Rational::zero()
                    }
                } else {
                    // coefficient of Q_{row - M} in R_k
                    let j = row - m_w;
                    if k == j {
                        Rational::one()
                    } else if k > j && k - j <= m_w {
                        self.s(k - j, k)?.clone()
                    } else {
                        Rational::zero()
                    }
                };
                data.push(value);
            }
        }
        Matrix::new(dim, dim, data)
    }
}

fn table_get<'t>(
    table: &'t [Vec<Rational>],
    label: &'static str,
    i: usize,
    n: usize,
) -> Result<&'t Rational> {
    let row = table
        .get(i.wrapping_sub(1))
        .ok_or_else(|| Error::IndexOutOfRange(format!("{label}_{{{i},{n}}}: no such row")))?;
    row.get(n).ok_or(Error::InsufficientCoefficients {
        what: "relation table",
        needed: n,
        available: row.len(),
    })
}

fn table_get_mut<'t>(
    table: &'t mut [Vec<Rational>],
    label: &'static str,
    i: usize,
    n: usize,
) -> Result<&'t mut Rational> {
    let len = table.len();
    let row = table.get_mut(i.wrapping_sub(1)).ok_or_else(|| {
        Error::IndexOutOfRange(format!("{label}_{{{i},{n}}}: no such row (of {len})"))
    })?;
    let row_len = row.len();
    row.get_mut(n).ok_or(Error::InsufficientCoefficients {
        what: "relation table",
        needed: n,
        available: row_len,
    })
}

/// `R_n = P_n + sum r_{i,n} P_{n-i}` for every degree the inputs cover.
pub fn build_r(p_polys: &[Poly], rel: &StructureRelation) -> Result<Vec<Poly>> {
    let mut out = Vec::with_capacity(p_polys.len());
    for n in 0..p_polys.len() {
        let mut r_n = p_polys[n].clone();
        for i in 1..=rel.n_window().min(n) {
            r_n = &r_n + &p_polys[n - i].scale(rel.r(i, n)?);
        }
        out.push(r_n);
    }
    Ok(out)
}

/// The unique monic solution of `R_n = Q_n + sum s_{i,n} Q_{n-i}` (triangular
/// back-substitution).
pub fn solve_q(r_polys: &[Poly], rel: &StructureRelation) -> Result<Vec<Poly>> {
    let mut out: Vec<Poly> = Vec::with_capacity(r_polys.len());
    for n in 0..r_polys.len() {
        let mut q_n = r_polys[n].clone();
        for i in 1..=rel.m_window().min(n) {
            q_n = &q_n - &out[n - i].scale(rel.s(i, n)?);
        }
        out.push(q_n);
    }
    Ok(out)
}

/// One orthogonal side of an instance: a functional, the polynomials it makes
/// orthogonal, and their norms. This is what the pairing matrices consume; the
/// other sequence enters only as plain polynomials, which is exactly the
/// hypothesis split of the determinant lemma.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrthoSide {
    functional: MomentFunctional,
    polys: Vec<Poly>,
    norms: Vec<Rational>,
}

impl OrthoSide {
    /// Computes norms `<f, polys[j]^2>` as deep as the truncation allows; every
    /// norm must be nonzero (regularity of the side through that depth).
    pub fn new(functional: MomentFunctional, polys: Vec<Poly>) -> Result<Self> {
        let depth = polys.len().min(functional.truncation() / 2 + 1);
        let mut norms = Vec::with_capacity(depth);
        for (j, p) in polys.iter().take(depth).enumerate() {
            let h = functional.apply(&(p * p))?;
            if h.is_zero() {
                return Err(Error::ZeroNorm { degree: Some(j) });
            }
            norms.push(h);
        }
        Ok(OrthoSide {
            functional,
            polys,
            norms,
        })
    }

    pub fn from_mops(mops: &Mops) -> Self {
        OrthoSide {
            functional: mops.functional().clone(),
            polys: mops.polys().to_vec(),
            norms: mops.norms().to_vec(),
        }
    }

    pub fn functional(&self) -> &MomentFunctional {
        &self.functional
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn norm(&self, j: usize) -> Result<&Rational> {
        self.norms.get(j).ok_or(Error::InsufficientCoefficients {
            what: "side norms",
            needed: j,
            available: self.norms.len(),
        })
    }

    /// Largest index with a computed norm.
    pub fn norm_depth(&self) -> usize {
        self.norms.len() - 1
    }

    /// `<polys[j]-bar f, p> = <f, polys[j] * p> / h_j`.
    pub fn dual_pairing(&self, j: usize, p: &Poly) -> Result<Rational> {
        let poly_j = self
            .polys
            .get(j)
            .ok_or(Error::InsufficientCoefficients {
                what: "side polynomials",
                needed: j,
                available: self.polys.len(),
            })?;
        Ok(self.functional.apply(&(poly_j * p))? / self.norm(j)?)
    }

    /// Largest degree `d` such that `dual_pairing(j, poly of degree d)` stays
    /// within the moment truncation.
    pub fn pairing_limit(&self, j: usize) -> usize {
        self.functional.truncation().saturating_sub(j)
    }
}

/// The `dim x dim` pairing matrix with entries
/// `side-dual_{dim-1-l} applied to other[n-j]` — `B_n` when `side` is the
/// `(Q, v)` data and `other` the `P` polynomials, `B~_n` in the mirrored case.
/// Requires `n >= dim - 1`.
pub fn pairing_matrix(
    side: &OrthoSide,
    other: &[Poly],
    dim: usize,
    n: usize,
) -> Result<Matrix> {
    if dim == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    if n + 1 < dim {
        return Err(Error::IndexOutOfRange(format!(
            "pairing matrix of size {dim} needs n >= {}, got {n}",
            dim - 1
        )));
    }
    if n >= other.len() {
        return Err(Error::InsufficientCoefficients {
            what: "other-side polynomials",
            needed: n,
            available: other.len(),
        });
    }
    let mut data = Vec::with_capacity(dim * dim);
    for j in 0..dim {
        for l in 0..dim {
            data.push(side.dual_pairing(dim - 1 - l, &other[n - j])?);
        }
    }
    Matrix::new(dim, dim, data)
}

/// The same matrix with column `col` (counted from the leftmost, index 0)
/// replaced by the vector of pairings against `side`'s element of index `dim`.
/// Column `col` of the unreplaced matrix corresponds to the unknown of index
/// `dim - 1 - col` in the Cramer systems.
pub fn pairing_matrix_replaced(
    side: &OrthoSide,
    other: &[Poly],
    dim: usize,
    n: usize,
    col: usize,
) -> Result<Matrix> {
    if col >= dim {
        return Err(Error::IndexOutOfRange(format!(
            "replacement column {col} of a {dim}x{dim} matrix"
        )));
    }
    let base = pairing_matrix(side, other, dim, n)?;
    let column: Vec<Rational> = (0..dim)
        .map(|j| side.dual_pairing(dim, &other[n - j]))
        .collect::<Result<_>>()?;
    base.with_column(col, &column)
}

/// Where the `v` side of an instance came from.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum VOrigin {
    /// Supplied with the instance (deep truncation available).
    Given,
    /// Derived from the recurrence the solved `Q` satisfies; moments are only
    /// determined through `n_max`, which shrinks pairing ranges.
    Derived,
    /// Not available: `Q` is not orthogonal within the horizon.
    Unavailable(String),
}

/// A fully built relation instance: the relation, the `P` MOPS, the auxiliary
/// `R_n`, the solved `Q_n`, and (when it exists) the `(Q, v)` side.
#[derive(Clone, Debug)]
pub struct RelationInstance {
    relation: StructureRelation,
    p: Mops,
    r_polys: Vec<Poly>,
    q_polys: Vec<Poly>,
    v_side: Option<OrthoSide>,
    v_origin: VOrigin,
}

impl RelationInstance {
    /// Builds `R` and `Q` from `P` and the relation. The tables must cover
    /// `0..=n_max` of the MOPS.
    pub fn build(p: Mops, relation: StructureRelation) -> Result<Self> {
        if let Some(table_max) = relation.table_max() {
            if table_max < p.n_max() {
                return Err(Error::InsufficientCoefficients {
                    what: "relation tables vs n_max",
                    needed: p.n_max(),
                    available: table_max,
                });
            }
        }
        let r_polys = build_r(p.polys(), &relation)?;
        let q_polys = solve_q(&r_polys, &relation)?;
        Ok(RelationInstance {
            relation,
            p,
            r_polys,
            q_polys,
            v_side: None,
            v_origin: VOrigin::Unavailable("not yet certified".into()),
        })
    }

    /// Attaches an explicitly given `v`; checks that the MOPS of `v`
    /// reproduces the solved `Q` exactly.
    pub fn attach_v(&mut self, v: MomentFunctional) -> Result<()> {
        let depth = (v.truncation() / 2).min(self.n_max());
        let v_mops = Mops::from_functional(v.clone(), depth)?;
        for n in 0..=depth {
            if v_mops.poly(n) != &self.q_polys[n] {
                return Err(Error::InconsistentInstance(format!(
                    "MOPS of the given v differs from the solved Q at degree {n}: {} vs {}",
                    v_mops.poly(n),
                    self.q_polys[n]
                )));
            }
        }
        self.v_side = Some(OrthoSide::new(v, self.q_polys.clone())?);
        self.v_origin = VOrigin::Given;
        Ok(())
    }

    /// Certifies the `Q` side by the Favard oracle and, on success, derives
    /// `v` from the extracted recurrence (moments determined through `n_max`).
    /// Returns the oracle verdict either way.
    pub fn certify_q_side(&mut self) -> Result<FavardVerdict> {
        let verdict = mops::favard_oracle(&self.q_polys)?;
        match &verdict {
            FavardVerdict::Mops(rc) => {
                let moments = mops::moments_from_recurrence(rc, self.n_max())?;
                let v = MomentFunctional::new_normalized(moments)?;
                self.v_side = Some(OrthoSide::new(v, self.q_polys.clone())?);
                self.v_origin = VOrigin::Derived;
            }
            FavardVerdict::Violation(violation) => {
                self.v_origin =
                    VOrigin::Unavailable(format!("Q fails the Favard oracle: {violation:?}"));
            }
        }
        Ok(verdict)
    }

    pub fn relation(&self) -> &StructureRelation {
        &self.relation
    }

    pub fn p(&self) -> &Mops {
        &self.p
    }

    pub fn u_side(&self) -> OrthoSide {
        OrthoSide::from_mops(&self.p)
    }

    pub fn r_polys(&self) -> &[Poly] {
        &self.r_polys
    }

    pub fn q_polys(&self) -> &[Poly] {
        &self.q_polys
    }

    pub fn v_side(&self) -> Result<&OrthoSide> {
        self.v_side
            .as_ref()
            .ok_or(Error::MissingFunctional("v is not available"))
    }

    pub fn v_origin(&self) -> &VOrigin {
        &self.v_origin
    }

    pub fn n_max(&self) -> usize {
        self.p.n_max()
    }

    /// `B_n` (size `N x N`, pairings of the `(Q, v)` side against `P`).
    pub fn matrix_b(&self, n: usize) -> Result<Matrix> {
        pairing_matrix(self.v_side()?, self.p.polys(), self.relation.n_window(), n)
    }

    /// `B_n` with column `col` replaced by the `Q-bar_N` pairings.
    pub fn matrix_b_replaced(&self, n: usize, col: usize) -> Result<Matrix> {
        pairing_matrix_replaced(
            self.v_side()?,
            self.p.polys(),
            self.relation.n_window(),
            n,
            col,
        )
    }

    /// `B~_n` (size `M x M`, pairings of the `(P, u)` side against `Q`).
    pub fn matrix_btilde(&self, n: usize) -> Result<Matrix> {
        pairing_matrix(
            &self.u_side(),
            &self.q_polys,
            self.relation.m_window(),
            n,
        )
    }

    /// `B~_n` with column `col` replaced by the `P-bar_M` pairings.
    pub fn matrix_btilde_replaced(&self, n: usize, col: usize) -> Result<Matrix> {
        pairing_matrix_replaced(
            &self.u_side(),
            &self.q_polys,
            self.relation.m_window(),
            n,
            col,
        )
    }

    /// The matrix `A` by functional pairing: row `i < M` pairs `P-bar_i u`
    /// against `R_k`, row `M + j` pairs `Q-bar_j v`. Also checks that the
    /// pairings vanish for `k >= M + N` as far as the truncations allow —
    /// that vanishing is what makes `A` square.
    pub fn matrix_a(&self) -> Result<Matrix> {
        let (n_w, m_w) = (self.relation.n_window(), self.relation.m_window());
        let dim = n_w + m_w;
        if dim == 0 {
            return Err(Error::IndexOutOfRange(
                "matrix A is undefined for N = M = 0".into(),
            ));
        }
        let u_side = self.u_side();
        let v_side = self.v_side()?;
        let pair = |row: usize, k: usize| -> Result<Rational> {
            if row < m_w {
                u_side.dual_pairing(row, &self.r_polys[k])
            } else {
                v_side.dual_pairing(row - m_w, &self.r_polys[k])
            }
        };
        let mut data = Vec::with_capacity(dim * dim);
        for row in 0..dim {
            for k in 0..dim {
                data.push(pair(row, k)?);
            }
        }
        for row in 0..dim {
            let limit = if row < m_w {
                u_side.pairing_limit(row)
            } else {
                v_side.pairing_limit(row - m_w)
            };
            for k in dim..=self.n_max().min(limit) {
                let value = pair(row, k)?;
                if !value.is_zero() {
                    return Err(Error::HypothesisFail(format!(
                        "dual pairing of row {row} against R_{k} is {} instead of 0; \
                         the sides are not orthogonal as declared",
                        rational::to_string(&value)
                    )));
                }
            }
        }
        Matrix::new(dim, dim, data)
    }
}

/// Exact residuals `det B_n - (-1)^N r_{N,n} det B_{n-1}` for `n` in the given
/// range (part (a) of the determinant lemma; hypothesis: `Q` orthogonal with
/// respect to the side's functional).
pub fn lemma_residuals_a(
    v_side: &OrthoSide,
    p_polys: &[Poly],
    rel: &StructureRelation,
    n_from: usize,
    n_to: usize,
) -> Result<Vec<(usize, Rational)>> {
    lemma_residuals(v_side, p_polys, rel.n_window(), n_from, n_to, |n| {
        rel.r(rel.n_window(), n).cloned()
    })
}

/// Mirror of [`lemma_residuals_a`]: `det B~_n - (-1)^M s_{M,n} det B~_{n-1}`
/// (part (b); hypothesis: `P` orthogonal).
pub fn lemma_residuals_b(
    u_side: &OrthoSide,
    q_polys: &[Poly],
    rel: &StructureRelation,
    n_from: usize,
    n_to: usize,
) -> Result<Vec<(usize, Rational)>> {
    lemma_residuals(u_side, q_polys, rel.m_window(), n_from, n_to, |n| {
        rel.s(rel.m_window(), n).cloned()
    })
}

fn lemma_residuals<F>(
    side: &OrthoSide,
    other: &[Poly],
    dim: usize,
    n_from: usize,
    n_to: usize,
    lead: F,
) -> Result<Vec<(usize, Rational)>>
where
    F: Fn(usize) -> Result<Rational> + Sync,
{
    if dim == 0 {
        return Ok(Vec::new());
    }
    let sign = if dim.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    };
    let results = crate::exec::map_range(n_from..n_to + 1, |n| -> Result<(usize, Rational)> {
        let det_n = pairing_matrix(side, other, dim, n)?.det()?;
        let det_prev = pairing_matrix(side, other, dim, n - 1)?.det()?;
        let residual = det_n - &sign * lead(n)? * det_prev;
        Ok((n, residual))
    });
    results.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};
    use crate::mops::ClassicalFamily;

    fn legendre_mops(n_max: usize) -> Mops {
        let (u, _) = ClassicalFamily::Legendre
            .functional_and_recurrence(2 * n_max + 6)
            .unwrap();
        Mops::from_functional(u, n_max).unwrap()
    }

    fn chebyshev_u_mops(n_max: usize) -> Mops {
        let (u, _) = ClassicalFamily::ChebyshevU
            .functional_and_recurrence(2 * n_max + 6)
            .unwrap();
        Mops::from_functional(u, n_max).unwrap()
    }

    /// Relation tables with constant columns: `r_{i,n} = value` for `n >= i`.
    fn constant_table(window: usize, table_len: usize, values: &[Rational]) -> Vec<Vec<Rational>> {
        (1..=window)
            .map(|i| {
                (0..table_len)
                    .map(|n| {
                        if n >= i {
                            values[i - 1].clone()
                        } else {
                            int(0)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn convention_gate() {
        // r_{2,1} != 0 violates i > n.
        let bad = vec![vec![int(0); 5], {
            let mut row = vec![int(0); 5];
            row[1] = int(1);
            row
        }];
        assert!(StructureRelation::new(2, 0, bad, vec![]).is_err());
    }

    #[test]
    fn build_r_empty_sum() {
        let p = legendre_mops(4);
        let rel = StructureRelation::identity();
        let r = build_r(p.polys(), &rel).unwrap();
        assert_eq!(r, p.polys());
    }

    #[test]
    fn build_r_legendre_shift() {
        // N = 1, r_{1,n} = 1 for n >= 1: R_2 = P_2 + P_1 = x^2 + x - 1/3.
        let p = legendre_mops(4);
        let rel =
            StructureRelation::new(1, 0, constant_table(1, 5, &[int(1)]), vec![]).unwrap();
        let r = build_r(p.polys(), &rel).unwrap();
        assert_eq!(
            r[2],
            Poly::from_coeffs(vec![rat(-1, 3), int(1), int(1)])
        );
    }

    #[test]
    fn build_r_chebyshev_pair() {
        // N = 2, r_{2,n} = -1/4 on monic U gives monic T.
        let p = chebyshev_u_mops(4);
        let rel = StructureRelation::new(
            2,
            0,
            constant_table(2, 5, &[int(0), rat(-1, 4)]),
            vec![],
        )
        .unwrap();
        let r = build_r(p.polys(), &rel).unwrap();
        assert_eq!(
            r[2],
            Poly::from_coeffs(vec![rat(-1, 2), int(0), int(1)])
        );
    }

    #[test]
    fn solve_q_empty_sum() {
        let p = legendre_mops(3);
        let rel = StructureRelation::identity();
        let q = solve_q(p.polys(), &rel).unwrap();
        assert_eq!(q, p.polys());
    }

    #[test]
    fn solve_q_constant_coefficient() {
        // M = 1, s_{1,n} = c, R_n = x^n: Q_1 = x - c, Q_2 = x^2 - c x + c^2.
        let c = rat(3, 7);
        let r_polys: Vec<Poly> = (0..4).map(|n| Poly::monomial(n, int(1))).collect();
        let rel = StructureRelation::new(
            0,
            1,
            vec![],
            constant_table(1, 4, std::slice::from_ref(&c)),
        )
        .unwrap();
        let q = solve_q(&r_polys, &rel).unwrap();
        assert_eq!(q[1], Poly::from_coeffs(vec![-c.clone(), int(1)]));
        assert_eq!(q[2], Poly::from_coeffs(vec![&c * &c, -c.clone(), int(1)]));
    }

    #[test]
    fn solve_q_chebyshev_orientation() {
        // R = monic T, M = 2, s_{2,n} = -1/4: Q = monic U.
        let (t_func, _) = ClassicalFamily::ChebyshevT.functional_and_recurrence(14).unwrap();
        let t = Mops::from_functional(t_func, 5).unwrap();
        let rel = StructureRelation::new(
            0,
            2,
            vec![],
            constant_table(2, 6, &[int(0), rat(-1, 4)]),
        )
        .unwrap();
        let q = solve_q(t.polys(), &rel).unwrap();
        let u = chebyshev_u_mops(5);
        assert_eq!(q, u.polys());
    }

    #[test]
    fn re_substitution_round_trip() {
        // Q_n + sum s_{i,n} Q_{n-i} must rebuild R exactly.
        let p = legendre_mops(8);
        let rel = StructureRelation::new(
            1,
            2,
            constant_table(1, 9, &[rat(1, 2)]),
            constant_table(2, 9, &[rat(-1, 3), rat(2, 5)]),
        )
        .unwrap();
        let r = build_r(p.polys(), &rel).unwrap();
        let q = solve_q(&r, &rel).unwrap();
        for n in 0..=8 {
            let mut back = q[n].clone();
            for i in 1..=rel.m_window().min(n) {
                back = &back + &q[n - i].scale(rel.s(i, n).unwrap());
            }
            assert_eq!(back, r[n], "n = {n}");
        }
    }

    #[test]
    fn dual_basis_matrix_identity_cases() {
        // M = 0: R = Q, so the Q-dual rows pair to the identity.
        let rel = StructureRelation::new(
            2,
            0,
            constant_table(2, 6, &[int(1), rat(-1, 4)]),
            vec![],
        )
        .unwrap();
        let a = rel.dual_basis_matrix().unwrap();
        assert_eq!(a, Matrix::identity(2));
    }

    #[test]
    fn dual_basis_matrix_degenerate_zero_det() {
        // P = Q with r = s: the a-row and b-row coincide.
        let table = constant_table(1, 4, &[int(1)]);
        let rel = StructureRelation::new(1, 1, table.clone(), table).unwrap();
        let a = rel.dual_basis_matrix().unwrap();
        assert_eq!(a.det().unwrap(), int(0));
    }

    #[test]
    fn pairing_matrix_needs_range() {
        let p = legendre_mops(4);
        let side = OrthoSide::from_mops(&p);
        assert!(pairing_matrix(&side, p.polys(), 3, 1).is_err());
        assert!(pairing_matrix(&side, p.polys(), 2, 1).is_ok());
    }

    #[test]
    fn b_matrix_one_dimensional() {
        // N = 1: B_n = [<v, P_n>] with Q-bar_0 = 1.
        let p = legendre_mops(4);
        let side = OrthoSide::from_mops(&p);
        let b = pairing_matrix(&side, p.polys(), 1, 2).unwrap();
        assert_eq!(*b.entry(0, 0), int(0)); // <u, P_2> = 0
    }
}
