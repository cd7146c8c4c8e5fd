//! The Buchberger–Möller algorithm for vanishing ideals of points.
//!
//! Two variants share the linear algebra and differ in how the candidate
//! list `L` is maintained:
//!
//! * [`Variant::Mmm`] keeps `L` as a [`DeltaList`] of order vectors with
//!   duplicates. The smallest candidates are popped as a run, and a candidate
//!   is skipped exactly when its support is larger than its multiplicity.
//!   New candidates are generated already sorted and merged in.
//! * [`Variant::Abbott`] keeps `L` unsorted and without duplicates, finds the
//!   minimum by scanning, and only admits candidates that are not multiples
//!   of something in `L` or of a leading monomial in `G`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::delta_merge::{DeltaList, LexKey, MergeError};
use crate::field::Field;
use crate::functionals::{FunctionalSystem, PointEvaluation};
use crate::linalg::{EchelonAccumulator, LinalgError};
use crate::orders::{Monomial, OrderError, OrderSpec, OrderVector};
use crate::poly::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BmError {
    #[error("point set is empty")]
    EmptyPointSet,
    #[error("points {0} and {1} coincide")]
    DuplicatePoints(usize, usize),
    #[error("point {row} has {got} coordinates, expected {expected}")]
    PointArity { row: usize, expected: usize, got: usize },
    #[error("order has {got} variables, expected {expected}")]
    OrderArity { expected: usize, got: usize },
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("inconsistent functional system: {0}")]
    InconsistentSystem(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl From<MergeError> for BmError {
    fn from(e: MergeError) -> Self {
        BmError::Internal(e.to_string())
    }
}

impl From<LinalgError> for BmError {
    fn from(e: LinalgError) -> Self {
        BmError::Internal(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Abbott,
    Mmm,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Abbott => "abbott",
            Variant::Mmm => "mmm",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "abbott" => Ok(Variant::Abbott),
            "mmm" => Ok(Variant::Mmm),
            _ => Err(format!("unknown variant {s:?}")),
        }
    }
}

/// Finitely many distinct points of `k^n`.
#[derive(Debug, Clone)]
pub struct PointSet<F: Field> {
    field: F,
    n: usize,
    points: Vec<Vec<F::Elem>>,
}

impl<F: Field> PointSet<F> {
    pub fn new(field: F, n: usize, points: Vec<Vec<F::Elem>>) -> Result<Self, BmError> {
        if points.is_empty() {
            return Err(BmError::EmptyPointSet);
        }
        let mut seen: HashMap<&[F::Elem], usize> = HashMap::with_capacity(points.len());
        for (row, p) in points.iter().enumerate() {
            if p.len() != n {
                return Err(BmError::PointArity {
                    row,
                    expected: n,
                    got: p.len(),
                });
            }
            if let Some(&first) = seen.get(p.as_slice()) {
                return Err(BmError::DuplicatePoints(first, row));
            }
            seen.insert(p, row);
        }
        Ok(PointSet { field, n, points })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<F::Elem>] {
        &self.points
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BmStats {
    /// Entry comparisons between order vectors.
    pub element_cmps: u64,
    /// Comparisons between stored first-difference indices.
    pub delta_cmps: u64,
    /// Field multiplications in the linear algebra.
    pub field_ops: u64,
    /// Evaluations of `Ψ(1)` or `Ψ(x_i t)`.
    pub functional_calls: u64,
    /// Largest length of the candidate list.
    pub l_max: usize,
    /// Number of variables in the run that did the work.
    pub n_bar: usize,
    /// Variables eliminated through linear relations.
    pub relations: usize,
    /// Rank of the functional values reached, `|B|`.
    pub rank: usize,
}

/// A reduced Gröbner basis with its quotient basis.
///
/// `groebner` is sorted by ascending leading monomial, `basis` ascending.
/// Equality ignores the statistics.
#[derive(Debug, Clone)]
pub struct GroebnerResult<E> {
    pub groebner: Vec<Polynomial<E>>,
    pub basis: Vec<Monomial>,
    pub stats: BmStats,
}

impl<E: PartialEq> PartialEq for GroebnerResult<E> {
    fn eq(&self, other: &Self) -> bool {
        self.groebner == other.groebner && self.basis == other.basis
    }
}

impl<E: Clone> GroebnerResult<E> {
    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.groebner.iter().filter_map(|g| g.leading_monomial())
    }
}

/// Whether the smallest candidate `t`, occurring `occ` times in the list,
/// is a multiple of a leading monomial already found.
pub fn occ_skip(t: &Monomial, occ: usize) -> bool {
    t.support_size() > occ
}

/// One popped run of the candidate list, recorded for inspection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub monomial: Monomial,
    pub occ: usize,
    pub skipped: bool,
    /// `|G|` at the time of the decision.
    pub g_len: usize,
}

#[derive(Debug, Clone)]
struct Candidate {
    ov: OrderVector,
    mono: Monomial,
    /// Index in `B` of `t / x_var`, and `var`; `None` for `1`.
    parent: Option<(usize, usize)>,
}

impl LexKey for Candidate {
    type Entry = num_bigint::BigInt;
    fn key(&self) -> &[num_bigint::BigInt] {
        &self.ov.0
    }
}

pub fn bm<F: Field>(
    points: &PointSet<F>,
    order: &OrderSpec,
    variant: Variant,
) -> Result<GroebnerResult<F::Elem>, BmError> {
    let sys = PointEvaluation::from_points(points);
    match variant {
        Variant::Mmm => Ok(run_mmm(&sys, order, None)?.0),
        Variant::Abbott => run_abbott(&sys, order),
    }
}

/// The list-merging variant, also returning the final echelon form whose
/// tags are indices into `basis`. `trace` receives every popped run.
pub fn run_mmm<F: Field, S: FunctionalSystem<F>>(
    sys: &S,
    order: &OrderSpec,
    mut trace: Option<&mut Vec<TraceEvent>>,
) -> Result<(GroebnerResult<F::Elem>, EchelonAccumulator<F, usize>), BmError> {
    let n = sys.arity();
    check_order(order, n)?;
    let field = sys.field().clone();
    let mut acc: EchelonAccumulator<F, usize> = EchelonAccumulator::new(field.clone(), sys.dim());
    let mut stats = BmStats {
        n_bar: n,
        ..BmStats::default()
    };
    let one = Monomial::one(n);
    let width = order.order_vector(&one)?.len();
    let mut list = DeltaList::from_sorted(
        width,
        vec![Candidate {
            ov: order.order_vector(&one)?,
            mono: one,
            parent: None,
        }],
    )?;
    let mut basis: Vec<Monomial> = Vec::new();
    let mut psis: Vec<Vec<F::Elem>> = Vec::new();
    let mut groebner = Vec::new();
    let steps: Vec<usize> = order.varord().iter().rev().copied().collect();

    while !list.is_empty() {
        stats.l_max = stats.l_max.max(list.len());
        let mut run = list.pop_front_run();
        let occ = run.len();
        let t = run.swap_remove(0);
        let skipped = occ_skip(&t.mono, occ);
        if let Some(tr) = trace.as_deref_mut() {
            tr.push(TraceEvent {
                monomial: t.mono.clone(),
                occ,
                skipped,
                g_len: groebner.len(),
            });
        }
        if skipped {
            continue;
        }
        let psi = match t.parent {
            None => sys.psi_one(),
            Some((b, var)) => sys.step(&psis[b], var),
        };
        stats.functional_calls += 1;
        let red = acc.reduce(&psi)?;
        if acc.is_zero_residual(&red) {
            groebner.push(relation_polynomial(&field, &t.mono, &red.coeffs, acc.tags(), &basis));
            continue;
        }
        let idx = basis.len();
        acc.insert(red, idx)?;
        basis.push(t.mono.clone());
        psis.push(psi);

        let mut fresh = Vec::with_capacity(n);
        for &var in &steps {
            let mono = t.mono.mul_var(var).ok_or(OrderError::DegreeOverflow)?;
            fresh.push(Candidate {
                ov: order.order_vector_step(&t.ov, var),
                mono,
                parent: Some((idx, var)),
            });
        }
        let fresh = DeltaList::from_sorted(width, fresh)?;
        stats.element_cmps += fresh.counters().element_cmps;
        list = DeltaList::merge(list, fresh)?;
        let c = list.counters();
        stats.element_cmps += c.element_cmps;
        stats.delta_cmps += c.delta_cmps;
    }
    stats.field_ops = acc.field_ops();
    stats.rank = acc.rank();
    Ok((GroebnerResult { groebner, basis, stats }, acc))
}

/// The scanning variant. `L` holds no duplicates and nothing divisible by
/// another entry of `L` or by a leading monomial of `G`.
pub fn run_abbott<F: Field, S: FunctionalSystem<F>>(
    sys: &S,
    order: &OrderSpec,
) -> Result<GroebnerResult<F::Elem>, BmError> {
    let n = sys.arity();
    check_order(order, n)?;
    let field = sys.field().clone();
    let mut acc: EchelonAccumulator<F, usize> = EchelonAccumulator::new(field.clone(), sys.dim());
    let mut stats = BmStats {
        n_bar: n,
        ..BmStats::default()
    };
    let one = Monomial::one(n);
    let mut list = vec![Candidate {
        ov: order.order_vector(&one)?,
        mono: one,
        parent: None,
    }];
    let mut basis: Vec<Monomial> = Vec::new();
    let mut psis: Vec<Vec<F::Elem>> = Vec::new();
    let mut groebner: Vec<Polynomial<F::Elem>> = Vec::new();

    while !list.is_empty() {
        stats.l_max = stats.l_max.max(list.len());
        let mut best = 0;
        for k in 1..list.len() {
            let (ord, _) = order.compare(&list[k].ov, &list[best].ov, &mut stats.element_cmps);
            if ord.is_lt() {
                best = k;
            }
        }
        let t = list.swap_remove(best);
        let psi = match t.parent {
            None => sys.psi_one(),
            Some((b, var)) => sys.step(&psis[b], var),
        };
        stats.functional_calls += 1;
        let red = acc.reduce(&psi)?;
        if acc.is_zero_residual(&red) {
            groebner.push(relation_polynomial(&field, &t.mono, &red.coeffs, acc.tags(), &basis));
            continue;
        }
        let idx = basis.len();
        acc.insert(red, idx)?;
        basis.push(t.mono.clone());
        psis.push(psi);
        for var in 0..n {
            let mono = t.mono.mul_var(var).ok_or(OrderError::DegreeOverflow)?;
            let blocked = list.iter().any(|c| c.mono.divides(&mono))
                || groebner
                    .iter()
                    .any(|g| g.leading_monomial().is_some_and(|lt| lt.divides(&mono)));
            if !blocked {
                list.push(Candidate {
                    ov: order.order_vector_step(&t.ov, var),
                    mono,
                    parent: Some((idx, var)),
                });
            }
        }
    }
    stats.field_ops = acc.field_ops();
    stats.rank = acc.rank();
    // Both lists are built in increasing order already.
    Ok(GroebnerResult { groebner, basis, stats })
}

fn check_order(order: &OrderSpec, n: usize) -> Result<(), BmError> {
    if order.arity() != n {
        return Err(BmError::OrderArity {
            expected: n,
            got: order.arity(),
        });
    }
    Ok(())
}

/// `t − Σ c_k b_{tag_k}`, with terms in descending order since every basis
/// monomial is smaller than `t` and `basis` is ascending.
fn relation_polynomial<F: Field>(
    field: &F,
    t: &Monomial,
    coeffs: &[F::Elem],
    tags: &[usize],
    basis: &[Monomial],
) -> Polynomial<F::Elem> {
    let mut by_basis = vec![field.zero(); basis.len()];
    for (c, &tag) in coeffs.iter().zip(tags) {
        by_basis[tag] = c.clone();
    }
    let mut terms = vec![(field.one(), t.clone())];
    for (c, b) in by_basis.iter().zip(basis).rev() {
        if !field.is_zero(c) {
            terms.push((field.neg(c), b.clone()));
        }
    }
    Polynomial::from_sorted_terms(terms)
}

/// The representative of `f` modulo the vanishing ideal that is supported on
/// the quotient basis, found by writing `f(P)` in the coordinates of `B(P)`.
pub fn normal_form<F: Field>(
    f: &Polynomial<F::Elem>,
    result: &GroebnerResult<F::Elem>,
    points: &PointSet<F>,
    order: &OrderSpec,
) -> Result<Polynomial<F::Elem>, BmError> {
    let field = points.field();
    let sys = PointEvaluation::from_points(points);
    let acc = basis_accumulator(&sys, &result.basis)?;
    let values: Vec<F::Elem> = points.points().iter().map(|p| f.evaluate(field, p)).collect();
    let coeffs = acc
        .coordinates(&values)?
        .ok_or_else(|| BmError::Internal("basis values do not span".into()))?;
    let terms = coeffs
        .into_iter()
        .zip(acc.tags())
        .map(|(c, &k)| (c, result.basis[k].clone()))
        .collect();
    Ok(Polynomial::from_terms(field, order, terms))
}

/// Echelon form of `Ψ(b)` for the monomials `b` of `basis`, tagged by index.
pub fn basis_accumulator<F: Field, S: FunctionalSystem<F>>(
    sys: &S,
    basis: &[Monomial],
) -> Result<EchelonAccumulator<F, usize>, BmError> {
    let mut acc = EchelonAccumulator::new(sys.field().clone(), sys.dim());
    for (k, b) in basis.iter().enumerate() {
        let v = psi_of(sys, b);
        if !acc.try_insert(&v, k)? {
            return Err(BmError::Internal(format!("basis monomial {b} is dependent")));
        }
    }
    Ok(acc)
}

/// `Ψ(t)` computed from `Ψ(1)` one variable at a time.
pub fn psi_of<F: Field, S: FunctionalSystem<F>>(sys: &S, t: &Monomial) -> Vec<F::Elem> {
    let mut v = sys.psi_one();
    for (var, &e) in t.exponents().iter().enumerate() {
        for _ in 0..e {
            v = sys.step(&v, var);
        }
    }
    v
}
