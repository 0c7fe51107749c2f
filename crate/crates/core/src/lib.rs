//! Exact-arithmetic toolkit for linearly related monic orthogonal polynomial
//! sequences (MOPS).
//!
//! Two monic polynomial families `(P_n)` and `(Q_n)` may be linked by a finite
//! linear structure relation
//!
//! ```text
//! P_n(x) + sum_{i=1..N} r_{i,n} P_{n-i}(x) = Q_n(x) + sum_{i=1..M} s_{i,n} Q_{n-i}(x)
//! ```
//!
//! Given such a relation and one orthogonal side, this crate decides — in exact
//! rational arithmetic, so every "nonzero" claim is a real decision — whether the
//! other side is orthogonal, constructs the rational relation `Phi_M u = Psi_N v`
//! between the two moment functionals, and certifies the determinant and
//! coefficient conditions behind those facts.
//!
//! The crate is organized around the pipeline:
//!
//! * [`exact`] — rationals, dense polynomials, small matrices, fraction-free
//!   determinants;
//! * [`functionals`] — truncated moment functionals and Hankel regularity;
//! * [`mops`] — recurrence/moment conversions, classical families, the Favard
//!   oracle;
//! * [`relation`] — structure relations, the auxiliary `R_n`, the pairing
//!   matrices `A`, `B_n`, `B~_n`;
//! * [`inverse`] — initial conditions, Cramer solves for `Psi_N`/`Phi_M`,
//!   constancy/nonvanishing/uniqueness certificates;
//! * [`ortho`] — recurrence-coefficient characterizations of orthogonality for
//!   the derived sequences;
//! * [`pipeline`] — JSON instance parsing, check orchestration, reports.
//!
//! With the `parallel` feature (on by default) the per-index loops — grid rows,
//! per-`n` Cramer solves, corpus sweeps — run on rayon; without it the same code
//! runs sequentially.

pub mod corpus;
pub mod error;
pub mod exact;
pub mod exec;
pub mod functionals;
pub mod inverse;
pub mod mops;
pub mod ortho;
pub mod pipeline;
pub mod relation;
pub mod report;

pub use error::Error;
pub use exact::rational::Rational;
