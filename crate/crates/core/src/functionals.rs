//! Linear functional systems driving the BM loop.
//!
//! A [`FunctionalSystem`] supplies `Ψ(1) ∈ k^m` and the rule producing
//! `Ψ(x_i·t)` from a cached `Ψ(t)`. Evaluation at points gives the classical
//! BM setting; multiplication matrices of a quotient ring give FGLM.

use crate::bm::{run_mmm, BmError, GroebnerResult};
use crate::field::Field;
use crate::orders::OrderSpec;

pub trait FunctionalSystem<F: Field> {
    fn field(&self) -> &F;
    /// Number of variables `n`.
    fn arity(&self) -> usize;
    /// Number of functionals `m`.
    fn dim(&self) -> usize;
    fn psi_one(&self) -> Vec<F::Elem>;
    /// `Ψ(x_var · t)` given `Ψ(t)`.
    fn step(&self, psi: &[F::Elem], var: usize) -> Vec<F::Elem>;
}

/// `Ψ(f) = (f(p_1), ..., f(p_m))`.
#[derive(Debug, Clone)]
pub struct PointEvaluation<F: Field> {
    field: F,
    /// `columns[i]` is `x_i(P)`.
    columns: Vec<Vec<F::Elem>>,
    m: usize,
}

impl<F: Field> PointEvaluation<F> {
    pub fn new(field: F, n: usize, points: &[Vec<F::Elem>]) -> Self {
        let columns = (0..n).map(|i| points.iter().map(|p| p[i].clone()).collect()).collect();
        PointEvaluation {
            field,
            columns,
            m: points.len(),
        }
    }

    pub fn from_points(points: &crate::bm::PointSet<F>) -> Self {
        PointEvaluation::new(points.field().clone(), points.arity(), points.points())
    }

    pub fn column(&self, var: usize) -> &[F::Elem] {
        &self.columns[var]
    }
}

impl<F: Field> FunctionalSystem<F> for PointEvaluation<F> {
    fn field(&self) -> &F {
        &self.field
    }

    fn arity(&self) -> usize {
        self.columns.len()
    }

    fn dim(&self) -> usize {
        self.m
    }

    fn psi_one(&self) -> Vec<F::Elem> {
        vec![self.field.one(); self.m]
    }

    fn step(&self, psi: &[F::Elem], var: usize) -> Vec<F::Elem> {
        psi.iter()
            .zip(&self.columns[var])
            .map(|(a, b)| self.field.mul(a, b))
            .collect()
    }
}

/// `Ψ(x_i · t) = M_i · Ψ(t)` for pairwise commuting square matrices `M_i`.
#[derive(Debug, Clone)]
pub struct MatrixActionSystem<F: Field> {
    field: F,
    psi_one: Vec<F::Elem>,
    /// Row-major `m × m` matrices, one per variable.
    matrices: Vec<Vec<Vec<F::Elem>>>,
}

impl<F: Field> MatrixActionSystem<F> {
    pub fn new(field: F, psi_one: Vec<F::Elem>, matrices: Vec<Vec<Vec<F::Elem>>>) -> Result<Self, BmError> {
        let m = psi_one.len();
        if m == 0 {
            return Err(BmError::InconsistentSystem("no functionals".into()));
        }
        for (i, a) in matrices.iter().enumerate() {
            if a.len() != m || a.iter().any(|row| row.len() != m) {
                return Err(BmError::InconsistentSystem(format!("matrix {} is not {m}x{m}", i + 1)));
            }
        }
        let sys = MatrixActionSystem {
            field,
            psi_one,
            matrices,
        };
        for i in 0..sys.matrices.len() {
            for j in i + 1..sys.matrices.len() {
                if sys.product(i, j) != sys.product(j, i) {
                    return Err(BmError::InconsistentSystem(format!(
                        "matrices {} and {} do not commute",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(sys)
    }

    pub fn matrices(&self) -> &[Vec<Vec<F::Elem>>] {
        &self.matrices
    }

    fn product(&self, i: usize, j: usize) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let (a, b) = (&self.matrices[i], &self.matrices[j]);
        let m = a.len();
        (0..m)
            .map(|r| {
                (0..m)
                    .map(|c| (0..m).fold(f.zero(), |acc, k| f.add(&acc, &f.mul(&a[r][k], &b[k][c]))))
                    .collect()
            })
            .collect()
    }
}

impl<F: Field> FunctionalSystem<F> for MatrixActionSystem<F> {
    fn field(&self) -> &F {
        &self.field
    }

    fn arity(&self) -> usize {
        self.matrices.len()
    }

    fn dim(&self) -> usize {
        self.psi_one.len()
    }

    fn psi_one(&self) -> Vec<F::Elem> {
        self.psi_one.clone()
    }

    fn step(&self, psi: &[F::Elem], var: usize) -> Vec<F::Elem> {
        let f = &self.field;
        self.matrices[var]
            .iter()
            .map(|row| {
                row.iter()
                    .zip(psi)
                    .filter(|(a, b)| !f.is_zero(a) && !f.is_zero(b))
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect()
    }
}

/// A system seen through a subset of its variables: new variable `j` is
/// `ess[j]` of the inner system.
pub struct Restricted<'a, S> {
    pub inner: &'a S,
    pub ess: &'a [usize],
}

impl<F: Field, S: FunctionalSystem<F>> FunctionalSystem<F> for Restricted<'_, S> {
    fn field(&self) -> &F {
        self.inner.field()
    }

    fn arity(&self) -> usize {
        self.ess.len()
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn psi_one(&self) -> Vec<F::Elem> {
        self.inner.psi_one()
    }

    fn step(&self, psi: &[F::Elem], var: usize) -> Vec<F::Elem> {
        self.inner.step(psi, self.ess[var])
    }
}

/// BM driven by an arbitrary functional system: candidates are taken in
/// increasing order, `Ψ(t)` is reduced against the values kept so far, and
/// the run ends when no candidates remain.
///
/// When the values `Ψ(t)` do not span `k^m`, `|B|` equals the rank reached
/// and `stats.rank` reports it.
pub fn algorithm1<F: Field, S: FunctionalSystem<F>>(
    sys: &S,
    order: &OrderSpec,
) -> Result<GroebnerResult<F::Elem>, BmError> {
    Ok(run_mmm(sys, order, None)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn point_evaluation_steps_multiply() {
        let f = Rationals;
        let pts = vec![vec![f.from_i64(2), f.from_i64(3)], vec![f.from_i64(-1), f.from_i64(0)]];
        let sys = PointEvaluation::new(f, 2, &pts);
        let one = sys.psi_one();
        let x1 = sys.step(&one, 0);
        assert_eq!(x1, vec![f.from_i64(2), f.from_i64(-1)]);
        assert_eq!(sys.step(&x1, 1), vec![f.from_i64(6), f.from_i64(0)]);
    }

    #[test]
    fn commuting_check() {
        let f = PrimeField::new(7).unwrap();
        let a = vec![vec![0, 1], vec![0, 0]];
        let b = vec![vec![1, 0], vec![0, 2]];
        assert!(MatrixActionSystem::new(f, vec![1, 0], vec![a.clone(), a.clone()]).is_ok());
        assert!(matches!(
            MatrixActionSystem::new(f, vec![1, 0], vec![a, b]),
            Err(BmError::InconsistentSystem(_))
        ));
        assert!(MatrixActionSystem::new(f, vec![1, 0], vec![vec![vec![1]]]).is_err());
    }

    #[test]
    fn zero_action_annihilates_every_variable() {
        let f = Rationals;
        let sys = MatrixActionSystem::new(f, vec![f.one()], vec![vec![vec![f.zero()]]; 3]).unwrap();
        let r = algorithm1(&sys, &OrderSpec::lex(3)).unwrap();
        assert_eq!(r.basis, vec![crate::Monomial::one(3)]);
        let lts: Vec<String> = r.groebner.iter().map(|g| g.to_string()).collect();
        assert_eq!(lts, vec!["x3", "x2", "x1"]);
    }

    #[test]
    fn non_surjective_reports_rank() {
        // Ψ(1) = (1, 0) and x acts by zero: the span stays one-dimensional.
        let f = Rationals;
        let z = vec![vec![f.zero(), f.zero()], vec![f.zero(), f.zero()]];
        let sys = MatrixActionSystem::new(f, vec![f.one(), f.zero()], vec![z]).unwrap();
        let r = algorithm1(&sys, &OrderSpec::lex(1)).unwrap();
        assert_eq!(r.basis.len(), 1);
        assert_eq!(r.stats.rank, 1);
    }
}
