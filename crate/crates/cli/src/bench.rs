//! Merging the terms of `x_3 g` into `x_2 f` for `f = x_1x_3 + x_2x_s` and
//! `g = x_1x_2 + ... + x_{n-1}x_n`, `n = 2s`, under degrevlex.

use std::cmp::Reverse;
use std::fmt;

use num_bigint::BigInt;

use vanishing::{DeltaList, MergeCounters, Monomial, OrderSpec};
use vanishing_oracles::naive_merge;

use crate::io::CliError;

type Key = Vec<Reverse<BigInt>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpolyBench {
    pub s: usize,
    pub n: usize,
    pub b_len: usize,
    pub b_deltas: Vec<usize>,
    /// Position of `a` in the merged list (0-based).
    pub a_position: usize,
    pub delta: MergeCounters,
    pub naive: u64,
}

impl SpolyBench {
    pub fn delta_bound(&self) -> u64 {
        3 * self.s as u64 - 1
    }
}

fn mono(n: usize, vars: &[(usize, u32)]) -> Monomial {
    let mut e = vec![0; n];
    for &(v, k) in vars {
        e[v - 1] += k;
    }
    Monomial::new(e).expect("small degree")
}

/// `a = x_2^2 x_s` and the first `s - 2` terms of `x_3 g` after the leading
/// one: `x_2x_3^2, x_3^2x_4, x_3x_4x_5, ...`.
pub fn spoly_lists(s: usize) -> (Monomial, Vec<Monomial>) {
    let n = 2 * s;
    let a = mono(n, &[(2, 2), (s, 1)]);
    let b = (1..=s - 2)
        .map(|j| match j {
            1 => mono(n, &[(2, 1), (3, 2)]),
            2 => mono(n, &[(3, 2), (4, 1)]),
            _ => mono(n, &[(3, 1), (j + 1, 1), (j + 2, 1)]),
        })
        .collect();
    (a, b)
}

fn key(order: &OrderSpec, m: &Monomial) -> Key {
    order
        .order_vector(m)
        .expect("small degree")
        .0
        .into_iter()
        .map(Reverse)
        .collect()
}

pub fn run_spoly(s: usize) -> Result<SpolyBench, CliError> {
    if s < 3 {
        return Err(CliError::Validation(format!(
            "InvalidSize: s must be at least 3, got {s}"
        )));
    }
    let n = 2 * s;
    let order = OrderSpec::degrevlex(n);
    let (a, b) = spoly_lists(s);
    let a_keys = vec![key(&order, &a)];
    let b_keys: Vec<Key> = b.iter().map(|m| key(&order, m)).collect();

    // Both lists are sorted decreasingly, so the keys are reversed.
    let la = DeltaList::from_sorted(n, a_keys.clone()).map_err(|e| CliError::Validation(e.to_string()))?;
    let lb = DeltaList::from_sorted(n, b_keys.clone()).map_err(|e| CliError::Validation(e.to_string()))?;
    let b_deltas = lb.deltas().to_vec();
    let merged = DeltaList::merge(la, lb).map_err(|e| CliError::Validation(e.to_string()))?;
    let (naive_out, naive) = naive_merge(&a_keys, &b_keys);
    if merged.items() != naive_out.as_slice() {
        return Err(CliError::Validation("Internal: merges disagree".into()));
    }
    let a_position = merged
        .items()
        .iter()
        .position(|k| *k == a_keys[0])
        .expect("a is merged");
    Ok(SpolyBench {
        s,
        n,
        b_len: b.len(),
        b_deltas,
        a_position,
        delta: merged.counters(),
        naive,
    })
}

impl fmt::Display for SpolyBench {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.s as u64;
        writeln!(f, "s = {}, n = {}, |b| = {}", self.s, self.n, self.b_len)?;
        let d: Vec<String> = self.b_deltas.iter().map(|d| d.to_string()).collect();
        writeln!(f, "b deltas: ({})", d.join(", "))?;
        writeln!(f, "a lands at position {} of {}", self.a_position + 1, self.b_len + 1)?;
        writeln!(
            f,
            "delta merge: {} element + {} delta comparisons = {} (3s-1 = {})",
            self.delta.element_cmps,
            self.delta.delta_cmps,
            self.delta.total(),
            self.delta_bound()
        )?;
        write!(
            f,
            "naive merge: {} element comparisons (s^2-4 = {})",
            self.naive,
            s * s - 4
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_are_sorted_decreasingly() {
        for s in 3..12 {
            let order = OrderSpec::degrevlex(2 * s);
            let (a, b) = spoly_lists(s);
            assert!(b.windows(2).all(|w| order.cmp_monomials(&w[0], &w[1]).is_gt()));
            // a belongs right before the last b item.
            assert!(b[..s - 3].iter().all(|x| order.cmp_monomials(x, &a).is_gt()), "s = {s}");
            assert!(order.cmp_monomials(&a, &b[s - 3]).is_gt(), "s = {s}");
        }
    }

    #[test]
    fn counts_follow_closed_forms() {
        for s in 4..30 {
            let r = run_spoly(s).unwrap();
            let s = s as u64;
            assert_eq!(r.delta.element_cmps, s + 4, "s = {s}");
            assert_eq!(r.delta.delta_cmps, s - 3, "s = {s}");
            assert_eq!(r.naive, s * s - 3, "s = {s}");
            assert_eq!(r.a_position as u64, s - 3);
        }
    }

    #[test]
    fn degenerate_size() {
        let r = run_spoly(3).unwrap();
        assert!(r.delta.total() <= 6 && r.naive <= 6);
        assert!(run_spoly(2).is_err());
    }
}
