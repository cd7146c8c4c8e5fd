//! Running BM on the essential variables only.
//!
//! Variables are scanned from smallest to largest. A variable whose values
//! are a linear combination of the constant and the variables kept so far is
//! dropped, together with that relation; the others form `Ess`. The quotient
//! basis only involves `Ess`, so BM can run on the projected points with the
//! restricted order. Its result is embedded back and completed with one
//! generator `x_k − nf(x_k)` per dropped variable.

use std::collections::HashSet;
use std::fmt;

use crate::bm::{run_mmm, BmError, BmStats, GroebnerResult, PointSet};
use crate::field::Field;
use crate::functionals::{FunctionalSystem, PointEvaluation, Restricted};
use crate::linalg::EchelonAccumulator;
use crate::orders::{Monomial, OrderSpec};
use crate::poly::{reindex_monomial, Polynomial};

/// `x_var = constant + Σ coeff · x_j` over the essential variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation<E> {
    pub var: usize,
    pub constant: E,
    pub terms: Vec<(usize, E)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EssentialSet<E> {
    /// Essential variables, largest first under the order.
    pub ess: Vec<usize>,
    /// One relation per dropped variable, smallest variable first.
    pub relations: Vec<Relation<E>>,
}

impl<E> EssentialSet<E> {
    pub fn is_everything(&self, n: usize) -> bool {
        self.ess.len() == n
    }
}

/// Whether to project before running BM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProjectMode {
    /// Project when some variable can be dropped.
    #[default]
    Auto,
    On,
    Off,
}

impl fmt::Display for ProjectMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProjectMode::Auto => "auto",
            ProjectMode::On => "on",
            ProjectMode::Off => "off",
        })
    }
}

impl std::str::FromStr for ProjectMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(ProjectMode::Auto),
            "on" => Ok(ProjectMode::On),
            "off" => Ok(ProjectMode::Off),
            _ => Err(format!("unknown projection mode {s:?}")),
        }
    }
}

/// Everything produced by a projected run.
#[derive(Debug, Clone)]
pub struct ProjectedRun<E> {
    pub essential: EssentialSet<E>,
    /// Result in the variables of `essential.ess`.
    pub sub: GroebnerResult<E>,
    pub sub_order: OrderSpec,
    pub result: GroebnerResult<E>,
}

pub fn essential_variables<F: Field>(
    points: &PointSet<F>,
    order: &OrderSpec,
) -> Result<EssentialSet<F::Elem>, BmError> {
    essential_variables_functional(&PointEvaluation::from_points(points), order)
}

/// Essential variables of a functional system: `Ψ(x_k)` replaces `x_k(P)`.
pub fn essential_variables_functional<F: Field, S: FunctionalSystem<F>>(
    sys: &S,
    order: &OrderSpec,
) -> Result<EssentialSet<F::Elem>, BmError> {
    if order.arity() != sys.arity() {
        return Err(BmError::OrderArity {
            expected: sys.arity(),
            got: order.arity(),
        });
    }
    let field = sys.field();
    let one = sys.psi_one();
    // Tags: None for the constant, Some(k) for variable k.
    let mut acc: EchelonAccumulator<F, Option<usize>> = EchelonAccumulator::new(field.clone(), sys.dim());
    acc.try_insert(&one, None)?;
    let mut ess = Vec::new();
    let mut relations = Vec::new();
    for &k in order.varord().iter().rev() {
        let v = sys.step(&one, k);
        let red = acc.reduce(&v)?;
        if !acc.is_zero_residual(&red) {
            acc.insert(red, Some(k))?;
            ess.push(k);
            continue;
        }
        let mut constant = field.zero();
        let mut terms = Vec::new();
        for (c, tag) in red.coeffs.into_iter().zip(acc.tags()) {
            match tag {
                None => constant = c,
                Some(j) if !field.is_zero(&c) => terms.push((*j, c)),
                Some(_) => {}
            }
        }
        relations.push(Relation {
            var: k,
            constant,
            terms,
        });
    }
    ess.reverse();
    Ok(EssentialSet { ess, relations })
}

/// `π(P)`: the coordinates of `es.ess`, in that order.
pub fn project<F: Field>(points: &PointSet<F>, es: &EssentialSet<F::Elem>) -> Result<PointSet<F>, BmError> {
    let rows = points
        .points()
        .iter()
        .map(|p| es.ess.iter().map(|&k| p[k].clone()).collect())
        .collect();
    PointSet::new(points.field().clone(), es.ess.len(), rows)
        .map_err(|e| BmError::Internal(format!("projection is not injective: {e}")))
}

/// Embeds a result computed on `π(P)` with the restricted order into the
/// full ring.
pub fn lift<F: Field>(
    sub: &GroebnerResult<F::Elem>,
    es: &EssentialSet<F::Elem>,
    points: &PointSet<F>,
    order: &OrderSpec,
) -> Result<GroebnerResult<F::Elem>, BmError> {
    let full = PointEvaluation::from_points(points);
    let sub_sys = Restricted {
        inner: &full,
        ess: &es.ess,
    };
    let acc = crate::bm::basis_accumulator(&sub_sys, &sub.basis)?;
    lift_with(&full, sub, &acc, es, order)
}

fn lift_with<F: Field, S: FunctionalSystem<F>>(
    sys: &S,
    sub: &GroebnerResult<F::Elem>,
    acc: &EchelonAccumulator<F, usize>,
    es: &EssentialSet<F::Elem>,
    order: &OrderSpec,
) -> Result<GroebnerResult<F::Elem>, BmError> {
    let n = sys.arity();
    let field = sys.field();
    let basis: Vec<Monomial> = sub.basis.iter().map(|b| reindex_monomial(b, &es.ess, n)).collect();
    let mut groebner: Vec<Polynomial<F::Elem>> = sub.groebner.iter().map(|g| g.reindex(&es.ess, n)).collect();

    let ops_before = acc.field_ops();
    let one = sys.psi_one();
    let essential: HashSet<usize> = es.ess.iter().copied().collect();
    let mut calls = 0;
    for k in (0..n).filter(|k| !essential.contains(k)) {
        let v = sys.step(&one, k);
        calls += 1;
        let coeffs = acc
            .coordinates(&v)?
            .ok_or_else(|| BmError::Internal(format!("x{} is not in the span of the basis", k + 1)))?;
        let mut terms = vec![(field.one(), Monomial::var(n, k))];
        for (c, &tag) in coeffs.iter().zip(acc.tags()) {
            if !field.is_zero(c) {
                terms.push((field.neg(c), basis[tag].clone()));
            }
        }
        let g = Polynomial::from_terms(field, order, terms);
        if g.leading_monomial() != Some(&Monomial::var(n, k)) {
            return Err(BmError::Internal(format!(
                "x{} is not the leading term of its relation",
                k + 1
            )));
        }
        groebner.push(g);
    }
    let keys = |m: &Monomial| order.order_vector(m).expect("arity").0;
    groebner.sort_by_cached_key(|g| keys(g.leading_monomial().expect("nonzero")));
    let mut basis = basis;
    basis.sort_by_cached_key(|b| keys(b));
    let stats = BmStats {
        field_ops: sub.stats.field_ops + acc.field_ops() - ops_before,
        functional_calls: sub.stats.functional_calls + calls,
        relations: n - es.ess.len(),
        n_bar: es.ess.len(),
        ..sub.stats
    };
    Ok(GroebnerResult { groebner, basis, stats })
}

/// Essential variables, projection, BM on the projected points, lifting.
pub fn bm_projected<F: Field>(points: &PointSet<F>, order: &OrderSpec) -> Result<GroebnerResult<F::Elem>, BmError> {
    Ok(bm_projected_detailed(points, order)?.result)
}

pub fn bm_projected_detailed<F: Field>(
    points: &PointSet<F>,
    order: &OrderSpec,
) -> Result<ProjectedRun<F::Elem>, BmError> {
    let essential = essential_variables(points, order)?;
    let projected = project(points, &essential)?;
    let sub_order = order.restrict(&essential.ess)?;
    let (sub, acc) = run_mmm(&PointEvaluation::from_points(&projected), &sub_order, None)?;
    let full = PointEvaluation::from_points(points);
    let result = lift_with(&full, &sub, &acc, &essential, order)?;
    Ok(ProjectedRun {
        essential,
        sub,
        sub_order,
        result,
    })
}

/// The same pipeline for a functional system, restricting `Ψ` to `Ess`.
pub fn algorithm1_projected<F: Field, S: FunctionalSystem<F>>(
    sys: &S,
    order: &OrderSpec,
) -> Result<ProjectedRun<F::Elem>, BmError> {
    let essential = essential_variables_functional(sys, order)?;
    let sub_order = order.restrict(&essential.ess)?;
    let restricted = Restricted {
        inner: sys,
        ess: &essential.ess,
    };
    let (sub, acc) = run_mmm(&restricted, &sub_order, None)?;
    if acc.rank() < sys.dim() {
        return Err(BmError::InconsistentSystem(
            "projection needs the functional values to span".into(),
        ));
    }
    let result = lift_with(sys, &sub, &acc, &essential, order)?;
    Ok(ProjectedRun {
        essential,
        sub,
        sub_order,
        result,
    })
}

/// BM with the mmm variant, projecting according to `mode`.
pub fn bm_with_mode<F: Field>(
    points: &PointSet<F>,
    order: &OrderSpec,
    mode: ProjectMode,
) -> Result<GroebnerResult<F::Elem>, BmError> {
    match mode {
        ProjectMode::Off => crate::bm::bm(points, order, crate::bm::Variant::Mmm),
        ProjectMode::On => bm_projected(points, order),
        ProjectMode::Auto => {
            let run = bm_projected_detailed(points, order)?;
            if run.essential.is_everything(points.arity()) {
                crate::bm::bm(points, order, crate::bm::Variant::Mmm)
            } else {
                Ok(run.result)
            }
        }
    }
}
