//! Sparse polynomials with terms kept in descending order.

use std::fmt;

use crate::field::Field;
use crate::orders::{Monomial, OrderSpec};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<E> {
    terms: Vec<(E, Monomial)>,
}

impl<E: Clone> Polynomial<E> {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    /// Wraps terms that are already strictly descending with nonzero
    /// coefficients.
    pub fn from_sorted_terms(terms: Vec<(E, Monomial)>) -> Self {
        Polynomial { terms }
    }

    /// Collects like terms, drops zeros and sorts descending under `order`.
    pub fn from_terms<F>(field: &F, order: &OrderSpec, terms: Vec<(E, Monomial)>) -> Self
    where
        F: Field<Elem = E>,
    {
        let mut keyed: Vec<_> = terms
            .into_iter()
            .map(|(c, m)| (order.order_vector(&m).expect("arity").0, c, m))
            .collect();
        keyed.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(E, Monomial)> = Vec::with_capacity(keyed.len());
        for (_, c, m) in keyed {
            match out.last_mut() {
                Some((acc, last)) if *last == m => *acc = field.add(acc, &c),
                _ => out.push((c, m)),
            }
        }
        out.retain(|(c, _)| !field.is_zero(c));
        Polynomial { terms: out }
    }

    pub fn terms(&self) -> &[(E, Monomial)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(_, m)| m)
    }

    pub fn leading_coefficient(&self) -> Option<&E> {
        self.terms.first().map(|(c, _)| c)
    }

    /// Everything but the leading term.
    pub fn tail(&self) -> &[(E, Monomial)] {
        self.terms.get(1..).unwrap_or(&[])
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter().map(|(_, m)| m)
    }

    pub fn evaluate<F>(&self, field: &F, point: &[E]) -> E
    where
        F: Field<Elem = E>,
    {
        self.terms.iter().fold(field.zero(), |acc, (c, m)| {
            field.add(&acc, &field.mul(c, &evaluate_monomial(field, m, point)))
        })
    }

    pub fn add<F>(&self, field: &F, order: &OrderSpec, other: &Self) -> Self
    where
        F: Field<Elem = E>,
    {
        let terms = self.terms.iter().chain(&other.terms).cloned().collect();
        Polynomial::from_terms(field, order, terms)
    }

    pub fn scale<F>(&self, field: &F, c: &E) -> Self
    where
        F: Field<Elem = E>,
    {
        if field.is_zero(c) {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(a, m)| (field.mul(a, c), m.clone())).collect(),
        }
    }

    /// Renames variable `j` to `map[j]` in a ring with `n` variables.
    pub fn reindex(&self, map: &[usize], n: usize) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(c, m)| (c.clone(), reindex_monomial(m, map, n)))
                .collect(),
        }
    }
}

/// Embeds a monomial in `n` variables, sending variable `j` to `map[j]`.
pub fn reindex_monomial(m: &Monomial, map: &[usize], n: usize) -> Monomial {
    let mut exps = vec![0; n];
    for (j, &e) in m.exponents().iter().enumerate() {
        exps[map[j]] = e;
    }
    Monomial::new(exps).expect("degree is unchanged")
}

pub fn evaluate_monomial<F: Field>(field: &F, m: &Monomial, point: &[F::Elem]) -> F::Elem {
    m.exponents()
        .iter()
        .zip(point)
        .filter(|(&e, _)| e > 0)
        .fold(field.one(), |acc, (&e, x)| field.mul(&acc, &pow(field, x, e)))
}

pub fn pow<F: Field>(field: &F, x: &F::Elem, mut e: u32) -> F::Elem {
    let mut base = x.clone();
    let mut acc = field.one();
    while e > 0 {
        if e & 1 == 1 {
            acc = field.mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = field.mul(&base, &base);
        }
    }
    acc
}

impl<E: fmt::Display> fmt::Display for Polynomial<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (c, m)) in self.terms.iter().enumerate() {
            let c = c.to_string();
            let (neg, mag) = match c.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, c.as_str()),
            };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}
