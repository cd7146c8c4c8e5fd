//! Exact computation of vanishing ideals of finite point sets.
//!
//! The crate computes the reduced Gröbner basis `G` and the monomial basis `B`
//! of `k[x_1, ..., x_n] / I(P)` for a finite set of points `P`, using the
//! Buchberger–Möller algorithm. Candidate monomials are kept in a sorted list
//! that remembers, for each pair of neighbours, the first position where their
//! order vectors differ; merging new candidates into that list reuses this
//! information instead of comparing vectors from scratch (see [`delta_merge`]).
//! When there are fewer points than variables the computation is moved to the
//! essential variables only and lifted back afterwards (see [`projection`]).

pub mod bm;
pub mod delta_merge;
pub mod field;
pub mod functionals;
pub mod linalg;
pub mod orders;
pub mod poly;
pub mod projection;

pub use bm::{bm, normal_form, occ_skip, BmError, BmStats, GroebnerResult, PointSet, Variant};
pub use delta_merge::{DeltaList, LexKey, LocateResult, MergeCounters, MergeError};
pub use field::{AnyField, Field, FieldError, FieldSpec, PrimeField, Rationals};
pub use functionals::{algorithm1, FunctionalSystem, MatrixActionSystem, PointEvaluation};
pub use linalg::{EchelonAccumulator, LinalgError, Reduction};
pub use orders::{Monomial, OrderError, OrderKind, OrderSpec, OrderVector};
pub use poly::Polynomial;
pub use projection::{bm_projected, bm_with_mode, essential_variables, EssentialSet, ProjectMode};
