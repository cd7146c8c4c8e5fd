//! Incremental exact row reduction.
//!
//! [`EchelonAccumulator`] holds vectors of a fixed length `m` in reduced row
//! echelon form. Every row remembers how it was built from the vectors that
//! were originally inserted, so a reduction can be reported directly as a
//! combination of those originals.

use std::cell::Cell;

use thiserror::Error;

use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("cannot insert a vector that reduces to zero")]
    InsertZero,
    #[error("vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Result of reducing `v` against the accumulator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction<E> {
    /// `v` minus its projection onto the row space; zero on every pivot column.
    pub residual: Vec<E>,
    /// `coeffs[k]` multiplies the `k`-th inserted vector, so that
    /// `v = residual + Σ coeffs[k] · original[k]`.
    pub coeffs: Vec<E>,
}

#[derive(Debug, Clone)]
pub struct EchelonAccumulator<F: Field, T = ()> {
    field: F,
    m: usize,
    /// Rows sorted by pivot column.
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
    /// `history[r][k]`: coefficient of original `k` in row `r`.
    history: Vec<Vec<F::Elem>>,
    tags: Vec<T>,
    ops: Cell<u64>,
}

impl<F: Field, T> EchelonAccumulator<F, T> {
    pub fn new(field: F, m: usize) -> Self {
        EchelonAccumulator {
            field,
            m,
            rows: Vec::new(),
            pivots: Vec::new(),
            history: Vec::new(),
            tags: Vec::new(),
            ops: Cell::new(0),
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn width(&self) -> usize {
        self.m
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.m
    }

    /// Tags of the inserted vectors, in insertion order.
    pub fn tags(&self) -> &[T] {
        &self.tags
    }

    pub fn rows(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Field multiplications performed so far.
    pub fn field_ops(&self) -> u64 {
        self.ops.get()
    }

    fn count(&self, k: usize) {
        self.ops.set(self.ops.get() + k as u64);
    }

    pub fn reduce(&self, v: &[F::Elem]) -> Result<Reduction<F::Elem>, LinalgError> {
        if v.len() != self.m {
            return Err(LinalgError::LengthMismatch {
                expected: self.m,
                got: v.len(),
            });
        }
        let f = &self.field;
        let mut residual = v.to_vec();
        let mut coeffs = vec![f.zero(); self.rank()];
        for (r, &p) in self.pivots.iter().enumerate() {
            // Pivot columns of other rows are zero, so v[p] is the row coefficient.
            let c = v[p].clone();
            if f.is_zero(&c) {
                continue;
            }
            for (x, y) in residual.iter_mut().zip(&self.rows[r]) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&c, y));
                }
            }
            for (x, h) in coeffs.iter_mut().zip(&self.history[r]) {
                if !f.is_zero(h) {
                    *x = f.add(x, &f.mul(&c, h));
                }
            }
            self.count(self.m + self.rank());
        }
        Ok(Reduction { residual, coeffs })
    }

    /// Coordinates of `v` over the inserted vectors, if `v` lies in their span.
    pub fn coordinates(&self, v: &[F::Elem]) -> Result<Option<Vec<F::Elem>>, LinalgError> {
        let red = self.reduce(v)?;
        Ok(self.is_zero_residual(&red).then_some(red.coeffs))
    }

    pub fn is_zero_residual(&self, red: &Reduction<F::Elem>) -> bool {
        red.residual.iter().all(|x| self.field.is_zero(x))
    }

    /// Adds the vector behind `red` as a new row and returns its pivot column.
    pub fn insert(&mut self, red: Reduction<F::Elem>, tag: T) -> Result<usize, LinalgError> {
        let f = self.field.clone();
        let p = red
            .residual
            .iter()
            .position(|x| !f.is_zero(x))
            .ok_or(LinalgError::InsertZero)?;
        if red.coeffs.len() != self.rank() {
            return Err(LinalgError::LengthMismatch {
                expected: self.rank(),
                got: red.coeffs.len(),
            });
        }
        let inv = f.inv(&red.residual[p]).expect("pivot is nonzero");
        let row: Vec<F::Elem> = red.residual.iter().map(|x| f.mul(x, &inv)).collect();
        let minus_inv = f.neg(&inv);
        let mut hist: Vec<F::Elem> = red.coeffs.iter().map(|c| f.mul(c, &minus_inv)).collect();
        hist.push(inv);
        self.count(self.m + hist.len());

        for h in &mut self.history {
            h.push(f.zero());
        }
        for r in 0..self.rows.len() {
            let c = self.rows[r][p].clone();
            if f.is_zero(&c) {
                continue;
            }
            for (x, y) in self.rows[r].iter_mut().zip(&row) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&c, y));
                }
            }
            for (x, y) in self.history[r].iter_mut().zip(&hist) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&c, y));
                }
            }
            self.count(self.m + hist.len());
        }

        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, row);
        self.pivots.insert(at, p);
        self.history.insert(at, hist);
        self.tags.push(tag);
        Ok(p)
    }

    /// Reduces `v` and inserts it when it is independent. Returns whether it was.
    pub fn try_insert(&mut self, v: &[F::Elem], tag: T) -> Result<bool, LinalgError> {
        let red = self.reduce(v)?;
        if self.is_zero_residual(&red) {
            return Ok(false);
        }
        self.insert(red, tag)?;
        Ok(true)
    }

    /// Checks the reduced echelon shape: increasing pivots, each pivot 1, zero
    /// elsewhere in its column and to its left.
    pub fn is_reduced_echelon(&self) -> bool {
        let f = &self.field;
        if !self.pivots.windows(2).all(|w| w[0] < w[1]) {
            return false;
        }
        self.rows.iter().zip(&self.pivots).all(|(row, &p)| {
            f.is_one(&row[p])
                && row[..p].iter().all(|x| f.is_zero(x))
                && self.pivots.iter().filter(|&&q| q != p).all(|&q| f.is_zero(&row[q]))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn q(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| Rationals.from_i64(x)).collect()
    }

    #[test]
    fn empty_accumulator_leaves_vector() {
        let acc: EchelonAccumulator<Rationals> = EchelonAccumulator::new(Rationals, 4);
        let r = acc.reduce(&q(&[1, 1, 1, 1])).unwrap();
        assert_eq!(r.residual, q(&[1, 1, 1, 1]));
        assert!(r.coeffs.is_empty());
    }

    #[test]
    fn dependent_variable_in_worked_example() {
        // Columns are the four example points; rows are 1, x5, x2.
        let mut acc = EchelonAccumulator::new(Rationals, 4);
        assert!(acc.try_insert(&q(&[1, 1, 1, 1]), "1").unwrap());
        assert!(acc.try_insert(&q(&[0, 1, -1, 2]), "x5").unwrap());
        let r = acc.reduce(&q(&[1, 2, 0, 3])).unwrap();
        assert!(acc.is_zero_residual(&r));
        assert_eq!(r.coeffs, q(&[1, 1]));
        assert!(acc.try_insert(&q(&[0, 1, 1, 4]), "x3").unwrap());
        assert_eq!(acc.rank(), 3);
        assert_eq!(acc.tags(), &["1", "x5", "x3"]);
        assert!(acc.is_reduced_echelon());
    }

    #[test]
    fn insert_zero_is_rejected() {
        let mut acc: EchelonAccumulator<Rationals> = EchelonAccumulator::new(Rationals, 2);
        acc.try_insert(&q(&[1, 2]), ()).unwrap();
        let r = acc.reduce(&q(&[2, 4])).unwrap();
        assert_eq!(acc.insert(r, ()), Err(LinalgError::InsertZero));
    }

    #[test]
    fn full_rank_then_everything_reduces_to_zero() {
        let f = PrimeField::new(7).unwrap();
        let mut acc: EchelonAccumulator<PrimeField> = EchelonAccumulator::new(f, 3);
        for v in [[1u64, 2, 3], [0, 1, 5], [4, 4, 1]] {
            acc.try_insert(&v, ()).unwrap();
        }
        assert_eq!(acc.rank(), 3);
        assert!(acc.coordinates(&[6, 0, 2]).unwrap().is_some());
    }

    #[test]
    fn length_mismatch() {
        let acc: EchelonAccumulator<Rationals> = EchelonAccumulator::new(Rationals, 3);
        assert!(acc.reduce(&q(&[1, 2])).is_err());
    }

    proptest! {
        #[test]
        fn reductions_recombine(vs in proptest::collection::vec(proptest::collection::vec(0u64..5, 4), 1..8)) {
            let f = PrimeField::new(5).unwrap();
            let mut acc: EchelonAccumulator<PrimeField> = EchelonAccumulator::new(f, 4);
            let mut originals: Vec<Vec<u64>> = Vec::new();
            for v in &vs {
                let red = acc.reduce(v).unwrap();
                // v = residual + Σ coeffs · originals
                let mut sum = red.residual.clone();
                for (c, o) in red.coeffs.iter().zip(&originals) {
                    for (s, x) in sum.iter_mut().zip(o) {
                        *s = f.add(s, &f.mul(c, x));
                    }
                }
                prop_assert_eq!(&sum, v);
                for &p in acc.pivots() {
                    prop_assert_eq!(red.residual[p], 0);
                }
                if !acc.is_zero_residual(&red) {
                    acc.insert(red, ()).unwrap();
                    originals.push(v.clone());
                    prop_assert!(acc.is_reduced_echelon());
                }
                prop_assert!(acc.rank() <= 4);
            }
        }
    }
}
