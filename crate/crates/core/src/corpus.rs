//! Instance builders for tests, benchmarks, and the equivalence sweep.
//!
//! Three independent constructions live here:
//!
//! * the Christoffel machinery (normalized `(x - c) u` functionals and kernel
//!   polynomials by synthetic division), used as oracles against the solver;
//! * the exact fit oracle, which recovers relation tables from two given
//!   monic sequences by solving the per-`n` coefficient systems;
//! * seeded corpus generation: valid instances (identity, Christoffel chains
//!   forward and mirrored, the Chebyshev T/U pair, two-sided common-ancestor
//!   transforms found by the fit oracle) plus single-entry perturbations of
//!   each, for the verdict-vs-oracle equivalence sweep.

use num::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::matrix::Matrix;
use crate::exact::poly::Poly;
use crate::exact::rational::{int, rat, to_string, Rational};
use crate::exec;
use crate::functionals::MomentFunctional;
use crate::mops::{self, ClassicalFamily, Mops};
use crate::ortho::{self, TheoremCheck};
use crate::relation::{RelationInstance, StructureRelation};

/// `phi * u`, renormalized to `mu_0 = 1`. Errors when `<u, phi> = 0` (the
/// modification is not normalizable).
pub fn normalized_modification(u: &MomentFunctional, phi: &Poly) -> Result<MomentFunctional> {
    let raw = u.poly_mod(phi)?;
    let scale = raw.moment(0)?.clone();
    if scale.is_zero() {
        return Err(Error::InvalidParameter(
            "<u, phi> = 0: modified functional cannot be normalized".into(),
        ));
    }
    MomentFunctional::new_normalized(raw.moments().iter().map(|m| m / &scale).collect())
}

/// The Christoffel transform: normalized `(x - c) u`.
pub fn christoffel(u: &MomentFunctional, c: &Rational) -> Result<MomentFunctional> {
    let phi = Poly::from_coeffs(vec![-c.clone(), int(1)]);
    normalized_modification(u, &phi)
}

/// Monic kernel polynomials of `p` at `c`:
/// `K_n = (P_{n+1} - (P_{n+1}(c) / P_n(c)) P_n) / (x - c)`.
/// These are the MOPS of the Christoffel transform at `c`; this construction
/// is independent of the moment machinery and serves as its oracle.
pub fn kernel_polys(p: &Mops, c: &Rational) -> Result<Vec<Poly>> {
    let mut out = Vec::with_capacity(p.n_max());
    for n in 0..p.n_max() {
        let pn_c = p.poly(n).eval(c);
        if pn_c.is_zero() {
            return Err(Error::InvalidParameter(format!(
                "P_{n}({}) = 0: kernel polynomials undefined at a zero",
                to_string(c)
            )));
        }
        let t = p.poly(n + 1).eval(c) / pn_c;
        let numerator = p.poly(n + 1) - &p.poly(n).scale(&t);
        let (quotient, remainder) = numerator.div_linear(c);
        assert!(remainder.is_zero(), "kernel numerator must vanish at c");
        out.push(quotient);
    }
    Ok(out)
}

/// Recovers the `(N, M)` relation tables linking two given monic sequences by
/// solving, for every `n`, the coefficient system
/// `P_n - Q_n = sum s_{j,n} Q_{n-j} - sum r_{i,n} P_{n-i}`.
/// Underdetermined low-`n` windows pin their free coefficients to zero (any
/// particular solution is a valid table row); an inconsistent system means no
/// `(N, M)` relation exists and is an error.
pub fn fit_relation(
    p_polys: &[Poly],
    q_polys: &[Poly],
    n_window: usize,
    m_window: usize,
) -> Result<StructureRelation> {
    let n_max = p_polys.len().min(q_polys.len()) - 1;
    let mut r_table = vec![vec![Rational::zero(); n_max + 1]; n_window];
    let mut s_table = vec![vec![Rational::zero(); n_max + 1]; m_window];
    for n in 0..=n_max {
        let r_active = n_window.min(n);
        let s_active = m_window.min(n);
        let unknowns = r_active + s_active;
        let target = &p_polys[n] - &q_polys[n];
        if unknowns == 0 {
            if !target.is_zero() {
                return Err(Error::InconsistentInstance(format!(
                    "P_{n} != Q_{n} with no relation coefficients available"
                )));
            }
            continue;
        }
        let rows = n; // coefficients x^0 .. x^{n-1}
        let system = Matrix::from_fn(rows, unknowns, |coeff_idx, col| {
            if col < r_active {
                -p_polys[n - (col + 1)].coeff(coeff_idx)
            } else {
                q_polys[n - (col - r_active + 1)].coeff(coeff_idx)
            }
        });
        let rhs: Vec<Rational> = (0..rows).map(|k| target.coeff(k)).collect();
        match system.solve_particular(&rhs)? {
            None => {
                return Err(Error::InconsistentInstance(format!(
                    "no ({n_window}, {m_window}) relation: coefficient system at n = {n} \
                     is inconsistent"
                )))
            }
            Some((x, _free)) => {
                for i in 0..r_active {
                    r_table[i][n] = x[i].clone();
                }
                for j in 0..s_active {
                    s_table[j][n] = x[r_active + j].clone();
                }
            }
        }
    }
    StructureRelation::new(n_window, m_window, r_table, s_table)
}

/// How a corpus instance was built.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Construction {
    /// Built so that `Q` is orthogonal.
    Valid,
    /// A valid instance with one table entry changed.
    Perturbed,
}

/// One instance of the equivalence corpus.
#[derive(Clone, Debug)]
pub struct CorpusInstance {
    pub name: String,
    pub construction: Construction,
    pub instance: RelationInstance,
}

/// One row of the verdict-vs-oracle sweep.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub name: String,
    pub construction: Construction,
    /// `None` when the theorem hypotheses failed (no verdict to compare).
    pub verdict: Option<bool>,
    pub oracle_is_mops: bool,
    pub agrees: bool,
}

fn sweep_one(ci: &CorpusInstance) -> SweepRow {
    let oracle = mops::favard_oracle(ci.instance.q_polys())
        .map(|v| v.is_mops())
        .unwrap_or(false);
    match ortho::theorem_main_check(&ci.instance) {
        Ok(TheoremCheck {
            pass,
            oracle_is_mops,
            oracle_agrees,
            ..
        }) => SweepRow {
            name: ci.name.clone(),
            construction: ci.construction,
            verdict: Some(pass),
            oracle_is_mops,
            agrees: oracle_agrees,
        },
        Err(_) => SweepRow {
            name: ci.name.clone(),
            construction: ci.construction,
            verdict: None,
            oracle_is_mops: oracle,
            agrees: false,
        },
    }
}

/// Runs the combined check on every instance and compares with the Favard
/// ground truth (parallel when the feature is on).
pub fn equivalence_sweep(corpus: &[CorpusInstance]) -> Vec<SweepRow> {
    exec::map_slice(corpus, sweep_one)
}

/// Always-sequential twin of [`equivalence_sweep`] for the benchmarks.
pub fn equivalence_sweep_seq(corpus: &[CorpusInstance]) -> Vec<SweepRow> {
    exec::map_slice_seq(corpus, sweep_one)
}

/// Moment depth every corpus instance carries.
fn depth_for(n_max: usize) -> usize {
    2 * n_max + 10
}

fn base_functional(family: &ClassicalFamily, extra: usize, n_max: usize) -> Result<MomentFunctional> {
    MomentFunctional::new_normalized(family.moments(depth_for(n_max) + extra)?)
}

/// A valid instance linking the MOPS of `u` to the MOPS of `v` with declared
/// windows `(N, M)`, with tables recovered by the fit oracle.
fn fitted_instance(
    name: String,
    u: MomentFunctional,
    v: MomentFunctional,
    n_window: usize,
    m_window: usize,
    n_max: usize,
) -> Result<CorpusInstance> {
    let p = Mops::from_functional(u, n_max)?;
    let q = Mops::from_functional(v.clone(), n_max)?;
    let rel = fit_relation(p.polys(), q.polys(), n_window, m_window)?;
    // The fit solves each window system; re-substitution is the exactness
    // proof that the declared windows really link the two sequences.
    let mut instance = RelationInstance::build(p, rel)?;
    if instance.q_polys() != q.polys() {
        return Err(Error::InconsistentInstance(format!(
            "{name}: fitted relation does not reproduce the target MOPS"
        )));
    }
    instance.attach_v(v)?;
    Ok(CorpusInstance {
        name,
        construction: Construction::Valid,
        instance,
    })
}

/// The forward Chebyshev pair: `P` = monic T, `Q` = monic U,
/// `s_{1,n} = 0`, `s_{2,n} = -1/4`.
pub fn chebyshev_tu_instance(n_max: usize) -> Result<CorpusInstance> {
    let u = base_functional(&ClassicalFamily::ChebyshevT, 0, n_max)?;
    let v = base_functional(&ClassicalFamily::ChebyshevU, 0, n_max)?;
    fitted_instance("tu".into(), u, v, 0, 2, n_max)
}

/// The mirrored Chebyshev pair: `P` = monic U, `Q` = monic T,
/// `r_{2,n} = -1/4`.
pub fn chebyshev_tu_mirrored_instance(n_max: usize) -> Result<CorpusInstance> {
    let u = base_functional(&ClassicalFamily::ChebyshevU, 0, n_max)?;
    let v = base_functional(&ClassicalFamily::ChebyshevT, 0, n_max)?;
    fitted_instance("tu-mirrored".into(), u, v, 2, 0, n_max)
}

/// Christoffel chain instance: `Q` side is the chain transform of the `P`
/// side at `points` (windows `(0, k)`).
pub fn christoffel_chain_instance(
    base: &ClassicalFamily,
    points: &[Rational],
    n_max: usize,
) -> Result<CorpusInstance> {
    let u = base_functional(base, points.len(), n_max)?;
    let mut v = u.clone();
    for c in points {
        v = christoffel(&v, c)?;
    }
    let name = format!(
        "christoffel[{}]",
        points.iter().map(to_string).collect::<Vec<_>>().join(",")
    );
    fitted_instance(name, u, v, 0, points.len(), n_max)
}

/// Mirrored chain: the `P` side is the transformed functional (windows
/// `(k, 0)`).
pub fn christoffel_chain_mirrored_instance(
    base: &ClassicalFamily,
    points: &[Rational],
    n_max: usize,
) -> Result<CorpusInstance> {
    let v = base_functional(base, points.len(), n_max)?;
    let mut u = v.clone();
    for c in points {
        u = christoffel(&u, c)?;
    }
    let name = format!(
        "christoffel-mirrored[{}]",
        points.iter().map(to_string).collect::<Vec<_>>().join(",")
    );
    fitted_instance(name, u, v, points.len(), 0, n_max)
}

/// Two-sided transform: both sides are Christoffel chains of a common base,
/// `u` at `a_points`, `v` at `b_points`; then
/// `prod_B (x - b) u` is proportional to `prod_A (x - a) v` and the windows
/// are `(|A|, |B|)`.
pub fn common_base_instance(
    base: &ClassicalFamily,
    a_points: &[Rational],
    b_points: &[Rational],
    n_max: usize,
) -> Result<CorpusInstance> {
    let extra = a_points.len().max(b_points.len());
    let w = base_functional(base, extra, n_max)?;
    let mut u = w.clone();
    for a in a_points {
        u = christoffel(&u, a)?;
    }
    let mut v = w;
    for b in b_points {
        v = christoffel(&v, b)?;
    }
    let name = format!(
        "common-base[{}|{}]",
        a_points.iter().map(to_string).collect::<Vec<_>>().join(","),
        b_points.iter().map(to_string).collect::<Vec<_>>().join(",")
    );
    fitted_instance(name, u, v, a_points.len(), b_points.len(), n_max)
}

/// Identity instance (`N = M = 0`) on a classical family.
pub fn identity_instance(family: &ClassicalFamily, n_max: usize) -> Result<CorpusInstance> {
    let u = base_functional(family, 0, n_max)?;
    let p = Mops::from_functional(u.clone(), n_max)?;
    let mut instance = RelationInstance::build(p, StructureRelation::identity())?;
    instance.attach_v(u)?;
    Ok(CorpusInstance {
        name: format!("identity[{family:?}]"),
        construction: Construction::Valid,
        instance,
    })
}

/// Single-entry perturbations of a valid instance, keeping the theorem
/// hypotheses intact (the lead coefficients stay nonzero and the perturbed
/// index stays at `n >= N + M + 1`, away from the matrix `A` window).
fn perturbations_of(
    base: &CorpusInstance,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<CorpusInstance>> {
    let rel = base.instance.relation().clone();
    let (n_w, m_w) = (rel.n_window(), rel.m_window());
    if n_w + m_w == 0 {
        return Ok(Vec::new());
    }
    let n_max = base.instance.n_max();
    let lo = n_w + m_w + 1;
    if lo >= n_max {
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let use_r = if n_w == 0 {
            false
        } else if m_w == 0 {
            true
        } else {
            rng.gen_bool(0.5)
        };
        let window = if use_r { n_w } else { m_w };
        let i = rng.gen_range(1..=window);
        let n0 = rng.gen_range(lo..=n_max.min(lo + 6));
        let delta = rat(rng.gen_range(1..=3), rng.gen_range(1..=4));
        let old = if use_r {
            rel.r(i, n0)?.clone()
        } else {
            rel.s(i, n0)?.clone()
        };
        let mut new_value = &old + &delta;
        if i == window && new_value.is_zero() {
            new_value += int(1);
        }
        let perturbed = if use_r {
            rel.with_r(i, n0, new_value)?
        } else {
            rel.with_s(i, n0, new_value)?
        };
        let instance = RelationInstance::build(base.instance.p().clone(), perturbed)?;
        out.push(CorpusInstance {
            name: format!(
                "{}/perturb-{}{}@{}",
                base.name,
                if use_r { "r" } else { "s" },
                i,
                n0
            ),
            construction: Construction::Perturbed,
            instance,
        });
    }
    Ok(out)
}

/// Builds the seeded equivalence corpus: valid constructions over windows
/// `N, M <= 3` plus single-entry perturbations of each, at the given `n_max`.
pub fn build_sweep_corpus(n_max: usize, seed: u64) -> Result<Vec<CorpusInstance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut valid = Vec::new();

    for family in [
        ClassicalFamily::Legendre,
        ClassicalFamily::ChebyshevT,
        ClassicalFamily::Hermite,
    ] {
        valid.push(identity_instance(&family, n_max)?);
    }
    valid.push(chebyshev_tu_instance(n_max)?);
    valid.push(chebyshev_tu_mirrored_instance(n_max)?);

    let point_sets: [&[Rational]; 5] = [
        &[int(2)],
        &[rat(5, 2)],
        &[int(2), int(3)],
        &[rat(5, 2), rat(7, 2)],
        &[int(2), int(3), int(4)],
    ];
    for points in point_sets {
        valid.push(christoffel_chain_instance(
            &ClassicalFamily::Legendre,
            points,
            n_max,
        )?);
        valid.push(christoffel_chain_mirrored_instance(
            &ClassicalFamily::Legendre,
            points,
            n_max,
        )?);
    }
    valid.push(christoffel_chain_instance(
        &ClassicalFamily::ChebyshevU,
        &[int(3)],
        n_max,
    )?);
    valid.push(christoffel_chain_mirrored_instance(
        &ClassicalFamily::ChebyshevT,
        &[rat(-5, 2)],
        n_max,
    )?);

    let splits: [(&[Rational], &[Rational]); 7] = [
        (&[int(2)], &[int(3)]),
        (&[rat(5, 2)], &[int(4), int(5)]),
        (&[int(2), int(3)], &[int(4)]),
        (&[int(2)], &[int(3), int(4), int(5)]),
        (&[int(2), int(3)], &[int(4), int(5)]),
        (&[int(2), int(3), int(4)], &[int(5)]),
        (&[int(2), int(3), int(4)], &[int(5), int(6), int(7)]),
    ];
    for (a, b) in splits {
        valid.push(common_base_instance(&ClassicalFamily::Legendre, a, b, n_max)?);
    }

    let mut corpus = Vec::new();
    for v in valid {
        let perturbed = perturbations_of(&v, 9, &mut rng)?;
        corpus.push(v);
        corpus.extend(perturbed);
    }
    Ok(corpus)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn christoffel_legendre_moments() {
        // v = (2 - x) u / 2 gives (1, -1/6, 1/3, -1/10, ...); christoffel()
        // normalizes (x - 2) u, which is the same functional.
        let u = base_functional(&ClassicalFamily::Legendre, 1, 4).unwrap();
        let v = christoffel(&u, &int(2)).unwrap();
        assert_eq!(*v.moment(0).unwrap(), int(1));
        assert_eq!(*v.moment(1).unwrap(), rat(-1, 6));
        assert_eq!(*v.moment(2).unwrap(), rat(1, 3));
        assert_eq!(*v.moment(3).unwrap(), rat(-1, 10));
    }

    #[test]
    fn kernel_polys_match_mops_of_transform() {
        let u = base_functional(&ClassicalFamily::Legendre, 1, 6).unwrap();
        let p = Mops::from_functional(u.clone(), 6).unwrap();
        let kernels = kernel_polys(&p, &int(2)).unwrap();
        assert_eq!(
            kernels[1],
            Poly::from_coeffs(vec![rat(1, 6), int(1)])
        );
        let v = christoffel(&u, &int(2)).unwrap();
        let q = Mops::from_functional(v, 5).unwrap();
        assert_eq!(&kernels[..6], q.polys());
    }

    #[test]
    fn fit_recovers_christoffel_table() {
        let u = base_functional(&ClassicalFamily::Legendre, 1, 5).unwrap();
        let v = christoffel(&u, &int(2)).unwrap();
        let p = Mops::from_functional(u, 5).unwrap();
        let q = Mops::from_functional(v, 5).unwrap();
        let rel = fit_relation(p.polys(), q.polys(), 0, 1).unwrap();
        assert_eq!(*rel.s(1, 1).unwrap(), rat(-1, 6));
        assert_eq!(*rel.s(1, 2).unwrap(), rat(-8, 55));
    }

    #[test]
    fn fit_recovers_tu_table() {
        let inst = chebyshev_tu_instance(8).unwrap();
        let rel = inst.instance.relation();
        for n in 0..=8 {
            assert!(rel.s(1, n).unwrap().is_zero());
            if n >= 2 {
                assert_eq!(*rel.s(2, n).unwrap(), rat(-1, 4), "s_2,{n}");
            }
        }
    }

    #[test]
    fn common_base_two_sided_fit_exists() {
        // Both sides Christoffel transforms of Legendre: a (1,1) relation
        // must link the two kernel families.
        let inst = common_base_instance(
            &ClassicalFamily::Legendre,
            &[int(2)],
            &[int(3)],
            8,
        )
        .unwrap();
        let rel = inst.instance.relation();
        assert_eq!((rel.n_window(), rel.m_window()), (1, 1));
        // and the instance must be genuinely orthogonal on the Q side
        let verdict = mops::favard_oracle(inst.instance.q_polys()).unwrap();
        assert!(verdict.is_mops());
    }

    #[test]
    fn sweep_smoke() {
        let corpus = build_sweep_corpus(8, 7).unwrap();
        assert!(corpus.len() >= 100, "corpus has {} instances", corpus.len());
        let rows = equivalence_sweep(&corpus);
        for row in &rows {
            assert!(
                row.verdict.is_some(),
                "{}: hypotheses unexpectedly failed",
                row.name
            );
            assert!(row.agrees, "{}: verdict disagrees with the oracle", row.name);
            if row.construction == Construction::Valid {
                assert!(
                    row.oracle_is_mops,
                    "{}: valid construction is not orthogonal",
                    row.name
                );
            }
        }
    }
}
