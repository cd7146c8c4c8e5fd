//! Monomials and admissible term orders.
//!
//! Every order is represented by its order vector: comparing two monomials is
//! the same as comparing their order vectors lexicographically. The standard
//! orders use closed forms for the vector; matrix orders use `A·α`.
//!
//! Variable indices are 0-based in the API. Order vector positions reported by
//! [`OrderSpec::compare`] are 1-based, with `len + 1` meaning "equal".

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::delta_merge::LexKey;

/// Cap on total degree; multiplications that would exceed it fail.
pub const MAX_DEGREE: u64 = (1 << 31) - 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("order matrix is singular")]
    SingularMatrix,
    #[error("column {col} of the order matrix has a negative leading entry")]
    NonAdmissibleColumn { col: usize },
    #[error("order matrix must be square, got a row of length {got} for {expected} rows")]
    NotSquare { expected: usize, got: usize },
    #[error("{0:?} is not a permutation of the variables")]
    NotAPermutation(Vec<usize>),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("variable index {0} out of range")]
    VariableOutOfRange(usize),
    #[error("total degree exceeds {MAX_DEGREE}")]
    DegreeOverflow,
    #[error("cannot parse order {0:?}")]
    Parse(String),
}

/// A power product `x_1^a_1 ... x_n^a_n`, stored as its exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
    degree: u64,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial {
            exps: vec![0; n],
            degree: 0,
        }
    }

    pub fn new(exps: Vec<u32>) -> Result<Self, OrderError> {
        let degree: u64 = exps.iter().map(|&e| e as u64).sum();
        if degree > MAX_DEGREE {
            return Err(OrderError::DegreeOverflow);
        }
        Ok(Monomial { exps, degree })
    }

    /// The single variable `x_i` in `n` variables.
    pub fn var(n: usize, i: usize) -> Self {
        let mut exps = vec![0; n];
        exps[i] = 1;
        Monomial { exps, degree: 1 }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn arity(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    /// Number of variables occurring in the monomial.
    pub fn support_size(&self) -> usize {
        self.exps.iter().filter(|&&e| e > 0).count()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }

    /// `self | other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.len() == other.exps.len() && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `x_i · self`, or `None` if the degree cap would be exceeded.
    pub fn mul_var(&self, i: usize) -> Option<Monomial> {
        if self.degree >= MAX_DEGREE {
            return None;
        }
        let mut exps = self.exps.clone();
        exps[i] = exps[i].checked_add(1)?;
        Some(Monomial {
            exps,
            degree: self.degree + 1,
        })
    }

    /// `self / x_i` when `x_i` divides `self`.
    pub fn div_var(&self, i: usize) -> Option<Monomial> {
        if self.exps[i] == 0 {
            return None;
        }
        let mut exps = self.exps.clone();
        exps[i] -= 1;
        Some(Monomial {
            exps,
            degree: self.degree - 1,
        })
    }

    pub fn mul(&self, other: &Monomial) -> Option<Monomial> {
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Option<Vec<_>>>()?;
        Monomial::new(exps).ok()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// The integer vector an order assigns to a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderVector(pub Vec<BigInt>);

impl OrderVector {
    pub fn zero(len: usize) -> Self {
        OrderVector(vec![BigInt::zero(); len])
    }

    pub fn from_i64(v: &[i64]) -> Self {
        OrderVector(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl LexKey for OrderVector {
    type Entry = BigInt;
    fn key(&self) -> &[BigInt] {
        &self.0
    }
}

/// Lexicographic comparison of `a` and `b` starting at 1-based position
/// `from`; entries before `from` must already be known to agree.
///
/// Returns the ordering of `a` relative to `b` and the first position where
/// they differ (`len + 1` if equal). Adds one to `counter` per entry pair
/// inspected.
pub fn compare_from<E: Ord>(a: &[E], b: &[E], from: usize, counter: &mut u64) -> (Ordering, usize) {
    debug_assert_eq!(a.len(), b.len());
    let n = a.len();
    for k in from.max(1)..=n {
        *counter += 1;
        match a[k - 1].cmp(&b[k - 1]) {
            Ordering::Equal => {}
            o => return (o, k),
        }
    }
    (Ordering::Equal, n + 1)
}

/// Bits needed to store `a` including a sign bit: 2 for zero, otherwise
/// `floor(log2 |a|) + 2`.
pub fn numbits(a: &BigInt) -> u64 {
    if a.is_zero() {
        2
    } else {
        a.abs().bits() + 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Lex,
    DegLex,
    DegRevLex,
    Matrix,
}

impl OrderKind {
    fn name(self) -> &'static str {
        match self {
            OrderKind::Lex => "lex",
            OrderKind::DegLex => "deglex",
            OrderKind::DegRevLex => "degrevlex",
            OrderKind::Matrix => "matrix",
        }
    }
}

/// An admissible monomial order on `n` variables.
///
/// For the standard kinds `perm` lists the variables from largest to smallest
/// and is supplied by the caller. For matrix orders it is derived from the
/// columns of the matrix at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderSpec {
    kind: OrderKind,
    perm: Vec<usize>,
    /// Inverse of `perm`: `pos[var]` is the rank of `var`, 0 for the largest.
    pos: Vec<usize>,
    matrix: Option<Vec<Vec<BigInt>>>,
}

impl OrderSpec {
    pub fn lex(n: usize) -> Self {
        Self::identity(OrderKind::Lex, n)
    }

    pub fn deglex(n: usize) -> Self {
        Self::identity(OrderKind::DegLex, n)
    }

    pub fn degrevlex(n: usize) -> Self {
        Self::identity(OrderKind::DegRevLex, n)
    }

    fn identity(kind: OrderKind, n: usize) -> Self {
        OrderSpec {
            kind,
            perm: (0..n).collect(),
            pos: (0..n).collect(),
            matrix: None,
        }
    }

    /// A standard order with `perm[0] ≻ perm[1] ≻ ...`.
    pub fn standard(kind: OrderKind, perm: Vec<usize>) -> Result<Self, OrderError> {
        if kind == OrderKind::Matrix {
            return Err(OrderError::Parse("matrix orders need a matrix".into()));
        }
        let pos = inverse_permutation(&perm)?;
        Ok(OrderSpec {
            kind,
            perm,
            pos,
            matrix: None,
        })
    }

    /// A matrix order. The matrix must be square, invertible over Q, and the
    /// first nonzero entry of every column must be positive.
    pub fn matrix(rows: Vec<Vec<BigInt>>) -> Result<Self, OrderError> {
        let n = rows.len();
        for r in &rows {
            if r.len() != n {
                return Err(OrderError::NotSquare {
                    expected: n,
                    got: r.len(),
                });
            }
        }
        check_matrix(&rows)?;
        let mut perm: Vec<usize> = (0..n).collect();
        let col = |j: usize| rows.iter().map(|r| r[j].clone()).collect::<Vec<_>>();
        let cols: Vec<Vec<BigInt>> = (0..n).map(col).collect();
        perm.sort_by(|&i, &j| cols[j].cmp(&cols[i]));
        let pos = inverse_permutation(&perm)?;
        Ok(OrderSpec {
            kind: OrderKind::Matrix,
            perm,
            pos,
            matrix: Some(rows),
        })
    }

    pub fn matrix_i64(rows: &[&[i64]]) -> Result<Self, OrderError> {
        Self::matrix(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// Parses `lex`, `deglex`, `degrevlex`, optionally followed by
    /// `:i1,i2,...` (1-based, largest variable first).
    pub fn parse_standard(text: &str, n: usize) -> Result<Self, OrderError> {
        let err = || OrderError::Parse(text.to_string());
        let (name, perm) = match text.split_once(':') {
            Some((a, b)) => (a.trim(), Some(b)),
            None => (text.trim(), None),
        };
        let kind = match name {
            "lex" => OrderKind::Lex,
            "deglex" => OrderKind::DegLex,
            "degrevlex" => OrderKind::DegRevLex,
            _ => return Err(err()),
        };
        let perm = match perm {
            None => (0..n).collect(),
            Some(p) => p
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .ok()
                        .filter(|&i| i >= 1)
                        .map(|i| i - 1)
                        .ok_or_else(err)
                })
                .collect::<Result<Vec<_>, _>>()?,
        };
        if perm.len() != n {
            return Err(OrderError::ArityMismatch {
                expected: n,
                got: perm.len(),
            });
        }
        Self::standard(kind, perm)
    }

    /// Parses a matrix given as whitespace-separated integer rows.
    pub fn parse_matrix(text: &str) -> Result<Self, OrderError> {
        let rows = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                l.split_whitespace()
                    .map(|t| t.parse::<BigInt>().map_err(|_| OrderError::Parse(t.to_string())))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::matrix(rows)
    }

    /// Re-checks the invariants of `self`.
    pub fn validate(&self) -> Result<(), OrderError> {
        inverse_permutation(&self.perm)?;
        if let Some(rows) = &self.matrix {
            check_matrix(rows)?;
        }
        Ok(())
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn arity(&self) -> usize {
        self.perm.len()
    }

    pub fn matrix_rows(&self) -> Option<&[Vec<BigInt>]> {
        self.matrix.as_deref()
    }

    pub fn is_standard(&self) -> bool {
        self.kind != OrderKind::Matrix
    }

    /// Variables from largest to smallest.
    pub fn varord(&self) -> &[usize] {
        &self.perm
    }

    pub fn order_vector(&self, m: &Monomial) -> Result<OrderVector, OrderError> {
        let n = self.arity();
        if m.arity() != n {
            return Err(OrderError::ArityMismatch {
                expected: n,
                got: m.arity(),
            });
        }
        let a = m.exponents();
        let big = |e: u32| BigInt::from(e);
        let v = match self.kind {
            OrderKind::Lex => self.perm.iter().map(|&i| big(a[i])).collect(),
            OrderKind::DegLex => {
                let mut v = Vec::with_capacity(n);
                if n > 0 {
                    v.push(BigInt::from(m.degree()));
                    v.extend(self.perm[..n - 1].iter().map(|&i| big(a[i])));
                }
                v
            }
            OrderKind::DegRevLex => {
                let mut v = Vec::with_capacity(n);
                if n > 0 {
                    v.push(BigInt::from(m.degree()));
                    v.extend(self.perm[1..].iter().rev().map(|&i| -big(a[i])));
                }
                v
            }
            OrderKind::Matrix => self
                .matrix
                .as_ref()
                .unwrap()
                .iter()
                .map(|row| row.iter().zip(a).map(|(c, &e)| c * e).sum())
                .collect(),
        };
        Ok(OrderVector(v))
    }

    /// `ov(x_var · m)` from `ov(m)`.
    pub fn order_vector_step(&self, ov: &OrderVector, var: usize) -> OrderVector {
        let mut out = ov.clone();
        self.step_in_place(&mut out, var);
        out
    }

    /// In-place form of [`order_vector_step`](Self::order_vector_step). The
    /// standard kinds touch at most two entries.
    pub fn step_in_place(&self, ov: &mut OrderVector, var: usize) {
        let n = self.arity();
        let p = self.pos[var];
        let v = &mut ov.0;
        match self.kind {
            OrderKind::Lex => v[p] += 1,
            OrderKind::DegLex => {
                v[0] += 1;
                if p + 1 < n {
                    v[p + 1] += 1;
                }
            }
            OrderKind::DegRevLex => {
                v[0] += 1;
                if p > 0 {
                    v[n - p] -= 1;
                }
            }
            OrderKind::Matrix => {
                for (entry, row) in v.iter_mut().zip(self.matrix.as_ref().unwrap()) {
                    *entry += &row[var];
                }
            }
        }
    }

    /// Lexicographic comparison of two order vectors. Returns the ordering of
    /// `a` relative to `b` and the 1-based first differing position
    /// (`len + 1` when equal); `counter` grows by the entry comparisons made.
    pub fn compare(&self, a: &OrderVector, b: &OrderVector, counter: &mut u64) -> (Ordering, usize) {
        compare_from(&a.0, &b.0, 1, counter)
    }

    /// Uncounted monomial comparison; computes both order vectors.
    pub fn cmp_monomials(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let va = self.order_vector(a).expect("arity");
        let vb = self.order_vector(b).expect("arity");
        va.0.cmp(&vb.0)
    }

    /// The order induced on the variables `ess`, renumbered so that new
    /// variable `j` is old variable `ess[j]`.
    ///
    /// Matrix orders keep the columns of `ess`, drop rows that depend on
    /// earlier rows, and scale the reduced rows back to integers.
    pub fn restrict(&self, ess: &[usize]) -> Result<OrderSpec, OrderError> {
        let n = self.arity();
        let mut seen = vec![false; n];
        for &v in ess {
            if v >= n {
                return Err(OrderError::VariableOutOfRange(v));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(OrderError::NotAPermutation(ess.to_vec()));
            }
        }
        match &self.matrix {
            None => {
                let mut perm: Vec<usize> = (0..ess.len()).collect();
                perm.sort_by_key(|&j| self.pos[ess[j]]);
                OrderSpec::standard(self.kind, perm)
            }
            Some(rows) => {
                let sub: Vec<Vec<BigRational>> = rows
                    .iter()
                    .map(|r| ess.iter().map(|&j| BigRational::from_integer(r[j].clone())).collect())
                    .collect();
                let kept = forward_reduce(&sub, ess.len());
                let int_rows = kept.into_iter().map(|(_, row)| clear_denominators(&row)).collect();
                OrderSpec::matrix(int_rows)
            }
        }
    }
}

impl fmt::Display for OrderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.matrix {
            None => {
                write!(f, "{}", self.kind.name())?;
                if self.perm.iter().enumerate().any(|(i, &p)| i != p) {
                    let idx: Vec<String> = self.perm.iter().map(|p| (p + 1).to_string()).collect();
                    write!(f, ":{}", idx.join(","))?;
                }
                Ok(())
            }
            Some(rows) => {
                let rs: Vec<String> = rows
                    .iter()
                    .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
                    .collect();
                write!(f, "matrix[{}]", rs.join("; "))
            }
        }
    }
}

pub fn validate_order(spec: OrderSpec) -> Result<OrderSpec, OrderError> {
    spec.validate()?;
    Ok(spec)
}

fn inverse_permutation(perm: &[usize]) -> Result<Vec<usize>, OrderError> {
    let n = perm.len();
    let mut pos = vec![usize::MAX; n];
    for (rank, &v) in perm.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return Err(OrderError::NotAPermutation(perm.to_vec()));
        }
        pos[v] = rank;
    }
    Ok(pos)
}

fn check_matrix(rows: &[Vec<BigInt>]) -> Result<(), OrderError> {
    let n = rows.len();
    for col in 0..n {
        match rows.iter().map(|r| &r[col]).find(|x| !x.is_zero()) {
            None => return Err(OrderError::SingularMatrix),
            Some(x) if x.is_negative() => return Err(OrderError::NonAdmissibleColumn { col }),
            Some(_) => {}
        }
    }
    let q: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    if forward_reduce(&q, n).len() != n {
        return Err(OrderError::SingularMatrix);
    }
    Ok(())
}

/// Scans rows top to bottom, reducing each against the rows kept so far and
/// keeping it when something nonzero remains. Returns the original index and
/// the reduced form of every kept row, stopping once `limit` rows are kept.
fn forward_reduce(rows: &[Vec<BigRational>], limit: usize) -> Vec<(usize, Vec<BigRational>)> {
    let mut kept: Vec<(usize, Vec<BigRational>, usize)> = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        if kept.len() == limit {
            break;
        }
        let mut r = row.clone();
        for (_, k, piv) in &kept {
            if r[*piv].is_zero() {
                continue;
            }
            let c = &r[*piv] / &k[*piv];
            for (x, y) in r.iter_mut().zip(k) {
                *x -= &c * y;
            }
        }
        if let Some(piv) = r.iter().position(|x| !x.is_zero()) {
            kept.push((idx, r, piv));
        }
    }
    kept.into_iter().map(|(i, r, _)| (i, r)).collect()
}

fn clear_denominators(row: &[BigRational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter()
        .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
        .collect()
}
