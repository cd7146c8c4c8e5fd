//! Sorted tuple lists that remember where neighbours differ.
//!
//! A [`DeltaList`] keeps its items in ascending lexicographic order together
//! with `Δ(c_k, c_{k+1})` for every adjacent pair: the 1-based position of the
//! first entry where the two tuples differ, or `arity + 1` if they are equal.
//!
//! With those values at hand an element can be placed in the list while
//! touching each tuple entry at most once ([`DeltaList::locate`]), and two
//! lists can be merged with at most `max(s, t) + min(s, t) · arity` entry
//! comparisons ([`DeltaList::merge`]). The bookkeeping relies on two facts for
//! `u < v`, `u < w`:
//!
//! * if `Δ(u, w) < Δ(u, v)` then `v < w` and `Δ(v, w) = Δ(u, w)`;
//! * `Δ(v, w) ≥ min(Δ(u, v), Δ(u, w))`.

use std::cmp::Ordering;

use thiserror::Error;

use crate::orders::compare_from;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MergeError {
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("items {0} and {1} are out of order")]
    Unsorted(usize, usize),
}

/// Anything that is compared as a tuple of ordered entries.
pub trait LexKey {
    type Entry: Ord;
    fn key(&self) -> &[Self::Entry];
}

impl<E: Ord> LexKey for Vec<E> {
    type Entry = E;
    fn key(&self) -> &[E] {
        self
    }
}

/// Work done by one top-level operation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MergeCounters {
    /// Comparisons between tuple entries.
    pub element_cmps: u64,
    /// Comparisons between Δ values.
    pub delta_cmps: u64,
}

impl MergeCounters {
    pub fn total(&self) -> u64 {
        self.element_cmps + self.delta_cmps
    }
}

impl std::ops::AddAssign for MergeCounters {
    fn add_assign(&mut self, rhs: Self) {
        self.element_cmps += rhs.element_cmps;
        self.delta_cmps += rhs.delta_cmps;
    }
}

/// Outcome of [`DeltaList::locate`]: `a_1 ≤ ... ≤ a_index < b ≤ a_{index+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocateResult {
    /// Number of list items strictly below `b`.
    pub index: usize,
    /// `Δ(a_index, b)` when `index ≥ 1`.
    pub delta_left: Option<usize>,
    /// `Δ(b, a_{index+1})` when `index < len`.
    pub delta_right: Option<usize>,
    pub counters: MergeCounters,
}

/// Which side of a run of equal items a located element goes to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    /// `a_i < b ≤ a_{i+1}`
    Before,
    /// `a_i ≤ b < a_{i+1}`
    After,
}

/// First differing position of two tuples (1-based), `len + 1` when equal.
pub fn delta<E: Ord>(v: &[E], w: &[E]) -> Result<usize, MergeError> {
    if v.len() != w.len() {
        return Err(MergeError::ArityMismatch {
            expected: v.len(),
            got: w.len(),
        });
    }
    let mut unused = 0;
    Ok(compare_from(v, w, 1, &mut unused).1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaList<T> {
    arity: usize,
    items: Vec<T>,
    deltas: Vec<usize>,
    counters: MergeCounters,
}

impl<T: LexKey> DeltaList<T> {
    pub fn new(arity: usize) -> Self {
        DeltaList {
            arity,
            items: Vec::new(),
            deltas: Vec::new(),
            counters: MergeCounters::default(),
        }
    }

    /// Builds a list from items already in ascending order, computing the Δ
    /// values. The counters record the comparisons spent doing so.
    pub fn from_sorted(arity: usize, items: Vec<T>) -> Result<Self, MergeError> {
        let mut counters = MergeCounters::default();
        let mut deltas = Vec::with_capacity(items.len().saturating_sub(1));
        for (k, it) in items.iter().enumerate() {
            if it.key().len() != arity {
                return Err(MergeError::ArityMismatch {
                    expected: arity,
                    got: it.key().len(),
                });
            }
            if k > 0 {
                let (ord, d) = compare_from(items[k - 1].key(), it.key(), 1, &mut counters.element_cmps);
                if ord == Ordering::Greater {
                    return Err(MergeError::Unsorted(k - 1, k));
                }
                deltas.push(d);
            }
        }
        Ok(DeltaList {
            arity,
            items,
            deltas,
            counters,
        })
    }

    /// Assembles a list from parts the caller has already computed.
    ///
    /// Debug builds verify the Δ values.
    pub fn from_parts(arity: usize, items: Vec<T>, deltas: Vec<usize>) -> Self {
        debug_assert_eq!(deltas.len(), items.len().saturating_sub(1));
        debug_assert!(items
            .windows(2)
            .zip(&deltas)
            .all(|(w, &d)| w[0].key() <= w[1].key() && delta(w[0].key(), w[1].key()) == Ok(d)));
        DeltaList {
            arity,
            items,
            deltas,
            counters: MergeCounters::default(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[T] {
        &self.items
    }

    pub fn deltas(&self) -> &[usize] {
        &self.deltas
    }

    pub fn counters(&self) -> MergeCounters {
        self.counters
    }

    pub fn into_items(self) -> Vec<T> {
        self.items
    }

    /// Removes the leading run of items equal to the first one.
    pub fn pop_front_run(&mut self) -> Vec<T> {
        if self.items.is_empty() {
            return Vec::new();
        }
        let eq = self.arity + 1;
        let run = 1 + self.deltas.iter().take_while(|&&d| d == eq).count();
        let n_deltas = run.min(self.deltas.len());
        self.deltas.drain(..n_deltas);
        self.items.drain(..run).collect()
    }

    /// Finds where `b` belongs: the number `i` of items strictly below `b`,
    /// together with `Δ(a_i, b)` and `Δ(b, a_{i+1})`.
    ///
    /// `hint`, when given, is a lower bound on `Δ(a_1, b)`; entries before it
    /// are not compared.
    pub fn locate(&self, b: &T, hint: Option<usize>) -> Result<LocateResult, MergeError> {
        if b.key().len() != self.arity {
            return Err(MergeError::ArityMismatch {
                expected: self.arity,
                got: b.key().len(),
            });
        }
        let mut counters = MergeCounters::default();
        let loc = locate_in(
            &self.items,
            &self.deltas,
            self.arity,
            b,
            hint.unwrap_or(1),
            Side::Before,
            &mut counters,
        );
        Ok(LocateResult {
            index: loc.index,
            delta_left: loc.left,
            delta_right: loc.right,
            counters,
        })
    }

    /// Merges two sorted lists, keeping duplicates. When an item of `b` equals
    /// items of `a`, the `b` item comes first.
    ///
    /// Each item of the shorter list is located in the remainder of the longer
    /// one, starting where the previous search stopped and skipping the prefix
    /// already known to agree. The returned list's counters describe this
    /// merge only.
    pub fn merge(a: DeltaList<T>, b: DeltaList<T>) -> Result<DeltaList<T>, MergeError> {
        if a.arity != b.arity {
            return Err(MergeError::ArityMismatch {
                expected: a.arity,
                got: b.arity,
            });
        }
        let arity = a.arity;
        if b.is_empty() {
            return Ok(DeltaList {
                counters: MergeCounters::default(),
                ..a
            });
        }
        if a.is_empty() {
            return Ok(DeltaList {
                counters: MergeCounters::default(),
                ..b
            });
        }

        let (base, ins, side) = if b.len() <= a.len() {
            (a, b, Side::Before)
        } else {
            (b, a, Side::After)
        };
        let mut counters = MergeCounters::default();
        let t = base.items.len();
        let s = ins.items.len();

        // `picks[k]` is true when output position k takes the next inserted item.
        let mut picks = Vec::with_capacity(s + t);
        let mut deltas = Vec::with_capacity(s + t - 1);
        let mut start = 0;
        let mut hint = 1;
        // Δ(ins_{j-1}, base[start]) from the previous search.
        let mut right_prev: Option<usize> = None;

        for j in 0..s {
            let loc = locate_in(
                &base.items[start..],
                &base.deltas[start.min(base.deltas.len())..],
                arity,
                &ins.items[j],
                hint,
                side,
                &mut counters,
            );
            for k in start..start + loc.index {
                if !picks.is_empty() {
                    let d = if k == start {
                        right_prev.expect("search reported a right delta")
                    } else {
                        base.deltas[k - 1]
                    };
                    deltas.push(d);
                }
                picks.push(false);
            }
            if !picks.is_empty() {
                let d = if loc.index > 0 {
                    loc.left.expect("search reported a left delta")
                } else {
                    ins.deltas[j - 1]
                };
                deltas.push(d);
            }
            picks.push(true);

            start += loc.index;
            right_prev = loc.right;
            if start < t && j + 1 < s {
                hint = loc.right.unwrap().min(ins.deltas[j]);
                counters.delta_cmps += 1;
            }
        }
        for k in start..t {
            let d = if k == start {
                right_prev.expect("search reported a right delta")
            } else {
                base.deltas[k - 1]
            };
            deltas.push(d);
            picks.push(false);
        }

        let mut base_it = base.items.into_iter();
        let mut ins_it = ins.items.into_iter();
        let items = picks
            .into_iter()
            .map(|from_ins| {
                if from_ins {
                    ins_it.next().unwrap()
                } else {
                    base_it.next().unwrap()
                }
            })
            .collect();
        Ok(DeltaList {
            arity,
            items,
            deltas,
            counters,
        })
    }
}

struct Located {
    index: usize,
    left: Option<usize>,
    right: Option<usize>,
}

/// Staged search for `b` in `items`.
///
/// Stage 0 compares `b` with the first item from position `hint`. At stage
/// `i` (with `a_i` on the correct side of `b` and `d = Δ(a_i, b)` known) the
/// stored `e = Δ(a_i, a_{i+1})` decides the next step without touching the
/// tuples unless `d == e`, in which case comparison resumes at position `d`.
fn locate_in<T: LexKey>(
    items: &[T],
    deltas: &[usize],
    arity: usize,
    b: &T,
    hint: usize,
    side: Side,
    c: &mut MergeCounters,
) -> Located {
    let t = items.len();
    if t == 0 {
        return Located {
            index: 0,
            left: None,
            right: None,
        };
    }
    let eq = arity + 1;
    let (ord, mut d) = compare_from(items[0].key(), b.key(), hint, &mut c.element_cmps);
    let advance = match side {
        Side::Before => ord == Ordering::Less,
        Side::After => ord != Ordering::Greater,
    };
    if !advance {
        return Located {
            index: 0,
            left: None,
            right: Some(d),
        };
    }
    // Invariant: items[..=i] are on the left of b and d = Δ(items[i], b).
    let mut i = 0;
    loop {
        if i + 1 == t {
            return Located {
                index: t,
                left: Some(d),
                right: None,
            };
        }
        let e = deltas[i];
        c.delta_cmps += 1;
        let stop = |d: usize, right: usize| Located {
            index: i + 1,
            left: Some(d),
            right: Some(right),
        };
        if d == eq {
            // Only reachable with Side::After: b equals items[i].
            if e == eq {
                i += 1;
                continue;
            }
            return stop(d, e);
        }
        if e == eq || d < e {
            i += 1;
            continue;
        }
        if d > e {
            return stop(d, e);
        }
        let (ord, k) = compare_from(items[i + 1].key(), b.key(), d, &mut c.element_cmps);
        match (ord, side) {
            (Ordering::Greater, _) => return stop(d, k),
            (Ordering::Equal, Side::Before) => return stop(d, eq),
            (Ordering::Less, _) | (Ordering::Equal, Side::After) => {
                d = k;
                i += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn list(arity: usize, rows: &[&[i64]]) -> DeltaList<Vec<i64>> {
        DeltaList::from_sorted(arity, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    const A: [&[i64]; 6] = [
        &[1, 0, 2, 2, 0],
        &[1, 0, 3, 0, 0],
        &[2, 0, 0, 1, 0],
        &[2, 1, 0, 0, 1],
        &[2, 1, 0, 2, 1],
        &[3, 0, 0, 0, 0],
    ];
    const B: [&[i64]; 4] = [&[1, 0, 0, 0, 0], &[1, 0, 2, 0, 0], &[2, 1, 0, 1, 1], &[2, 1, 0, 2, 1]];

    #[test]
    fn delta_examples() {
        assert_eq!(delta(B[0], A[0]), Ok(3));
        assert_eq!(delta(A[0], A[0]), Ok(6));
        assert_eq!(delta(B[2], B[3]), Ok(4));
        assert!(delta(&[1, 2][..], &[1, 2, 3][..]).is_err());
    }

    #[test]
    fn example_list_deltas() {
        assert_eq!(list(5, &A).deltas(), &[3, 1, 2, 4, 1]);
        assert_eq!(list(5, &B).deltas(), &[3, 1, 4]);
        assert!(DeltaList::from_sorted(5, vec![A[1].to_vec(), A[0].to_vec()]).is_err());
    }

    #[test]
    fn locate_example() {
        let a = list(5, &A);
        let r = a.locate(&B[2].to_vec(), None).unwrap();
        assert_eq!((r.index, r.delta_left, r.delta_right), (4, Some(4), Some(4)));
    }

    #[test]
    fn locate_equal_element() {
        let a = list(3, &[&[1, 2, 3]]);
        let r = a.locate(&vec![1, 2, 3], None).unwrap();
        assert_eq!((r.index, r.delta_left, r.delta_right), (0, None, Some(4)));
        // Equal to an interior element: placed before it.
        let a = list(3, &[&[0, 0, 0], &[1, 2, 3], &[1, 2, 3], &[2, 0, 0]]);
        let r = a.locate(&vec![1, 2, 3], None).unwrap();
        assert_eq!((r.index, r.delta_left, r.delta_right), (1, Some(1), Some(4)));
    }

    #[test]
    fn locate_past_the_end() {
        let a = list(5, &A);
        let r = a.locate(&vec![4, 0, 0, 0, 0], None).unwrap();
        assert_eq!((r.index, r.delta_left, r.delta_right), (6, Some(1), None));
        let r = DeltaList::<Vec<i64>>::new(5).locate(&vec![0; 5], None).unwrap();
        assert_eq!((r.index, r.delta_left, r.delta_right), (0, None, None));
    }

    #[test]
    fn locate_with_hint_skips_prefix() {
        let a = list(5, &A);
        let b = vec![1, 0, 2, 1, 0];
        let full = a.locate(&b, None).unwrap();
        let hinted = a.locate(&b, Some(3)).unwrap();
        assert_eq!((full.index, full.delta_right), (0, Some(4)));
        assert_eq!((hinted.index, hinted.delta_right), (0, Some(4)));
        assert_eq!(full.counters.element_cmps, 4);
        assert_eq!(hinted.counters.element_cmps, 2);
    }

    #[test]
    fn merge_example() {
        let c = DeltaList::merge(list(5, &A), list(5, &B)).unwrap();
        let expected: Vec<Vec<i64>> = [B[0], B[1], A[0], A[1], A[2], A[3], B[2], B[3], A[4], A[5]]
            .iter()
            .map(|r| r.to_vec())
            .collect();
        assert_eq!(c.items(), &expected[..]);
        assert_eq!(c.deltas(), &[3, 4, 3, 1, 2, 4, 4, 6, 1]);
        assert!(c.counters().element_cmps <= 6 + 4 * 5);
    }

    #[test]
    fn merge_with_empty() {
        let a = list(5, &A);
        let c = DeltaList::merge(a.clone(), DeltaList::new(5)).unwrap();
        assert_eq!(c.items(), a.items());
        assert_eq!(c.deltas(), a.deltas());
        assert_eq!(c.counters(), MergeCounters::default());
        let c = DeltaList::merge(DeltaList::new(5), a.clone()).unwrap();
        assert_eq!(c.items(), a.items());
        assert_eq!(c.counters(), MergeCounters::default());
    }

    #[test]
    fn merge_equal_singletons() {
        let c = DeltaList::merge(list(3, &[&[1, 2, 3]]), list(3, &[&[1, 2, 3]])).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.deltas(), &[4]);
    }

    #[test]
    fn merge_arity_mismatch() {
        assert!(DeltaList::merge(list(2, &[&[1, 2]]), list(3, &[&[1, 2, 3]])).is_err());
    }

    #[test]
    fn pop_front_run_takes_duplicates() {
        let mut l = list(2, &[&[0, 1], &[0, 1], &[0, 1], &[1, 0]]);
        assert_eq!(l.pop_front_run().len(), 3);
        assert_eq!(l.items(), &[vec![1, 0]]);
        assert!(l.deltas().is_empty());
        let mut l = list(2, &[&[0, 1], &[0, 1]]);
        assert_eq!(l.pop_front_run().len(), 2);
        assert!(l.is_empty());
    }

    /// Ties are observable through a payload that does not take part in the key.
    #[derive(Debug, Clone, PartialEq)]
    struct Tagged(Vec<u8>, char);
    impl LexKey for Tagged {
        type Entry = u8;
        fn key(&self) -> &[u8] {
            &self.0
        }
    }

    #[test]
    fn ties_put_b_first_whichever_list_is_longer() {
        let mk = |rows: &[&[u8]], tag| {
            DeltaList::from_sorted(2, rows.iter().map(|r| Tagged(r.to_vec(), tag)).collect()).unwrap()
        };
        // b shorter than a.
        let c = DeltaList::merge(mk(&[&[1, 1], &[1, 1], &[2, 0]], 'a'), mk(&[&[1, 1]], 'b')).unwrap();
        let tags: String = c.items().iter().map(|t| t.1).collect();
        assert_eq!(tags, "baaa");
        // b longer than a.
        let c = DeltaList::merge(mk(&[&[1, 1]], 'a'), mk(&[&[0, 5], &[1, 1], &[1, 1], &[3, 0]], 'b')).unwrap();
        let tags: String = c.items().iter().map(|t| t.1).collect();
        assert_eq!(tags, "bbbab");
        assert_eq!(c.deltas(), &[1, 3, 3, 1]);
    }

    fn sorted_rows(n: usize, max_len: usize) -> impl Strategy<Value = Vec<Vec<u8>>> {
        proptest::collection::vec(proptest::collection::vec(0u8..4, n), 0..max_len).prop_map(|mut v| {
            v.sort();
            v
        })
    }

    proptest! {
        #[test]
        fn rebuild_reproduces_deltas(rows in sorted_rows(4, 20)) {
            let l = DeltaList::from_sorted(4, rows.clone()).unwrap();
            let again = DeltaList::from_sorted(4, l.items().to_vec()).unwrap();
            prop_assert_eq!(l.deltas(), again.deltas());
        }

        #[test]
        fn locate_brackets_b(rows in sorted_rows(3, 20), b in proptest::collection::vec(0u8..4, 3)) {
            let l = DeltaList::from_sorted(3, rows.clone()).unwrap();
            let r = l.locate(&b, None).unwrap();
            let i = r.index;
            prop_assert!(rows[..i].iter().all(|x| x < &b));
            prop_assert!(rows[i..].iter().all(|x| x >= &b));
            if i > 0 { prop_assert_eq!(r.delta_left, Some(delta(&rows[i - 1], &b).unwrap())); }
            if i < rows.len() { prop_assert_eq!(r.delta_right, Some(delta(&b, &rows[i]).unwrap())); }
            prop_assert!(r.counters.element_cmps as usize <= rows.len() + 3);
        }

        #[test]
        fn first_difference_properties(u in proptest::collection::vec(0u8..3, 4),
                                   v in proptest::collection::vec(0u8..3, 4),
                                   w in proptest::collection::vec(0u8..3, 4)) {
            prop_assume!(u < v && u < w);
            let (uv, uw, vw) = (delta(&u, &v).unwrap(), delta(&u, &w).unwrap(), delta(&v, &w).unwrap());
            prop_assert!(vw >= uv.min(uw));
            if uw < uv {
                prop_assert!(v < w);
                prop_assert_eq!(vw, uw);
            }
        }
    }
}
