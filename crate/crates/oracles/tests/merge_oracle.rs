use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vanishing::delta_merge::delta;
use vanishing::DeltaList;
use vanishing_oracles::{naive_deltas, naive_merge, random_sorted_tuples};

fn check(a: Vec<Vec<i64>>, b: Vec<Vec<i64>>, n: usize) -> Result<(), String> {
    let (expected, _) = naive_merge(&a, &b);
    let (s, t) = (b.len() as u64, a.len() as u64);
    let la = DeltaList::from_sorted(n, a).unwrap();
    let lb = DeltaList::from_sorted(n, b).unwrap();
    let c = DeltaList::merge(la, lb).unwrap();
    if c.items() != &expected[..] {
        return Err(format!("items differ: {:?} vs {:?}", c.items(), expected));
    }
    if c.deltas() != &naive_deltas(&expected)[..] {
        return Err("deltas differ".into());
    }
    let bound = s.max(t) + s.min(t) * n as u64;
    if c.counters().element_cmps > bound {
        return Err(format!("{} comparisons exceed {bound}", c.counters().element_cmps));
    }
    Ok(())
}

#[test]
fn thousand_seeded_instances_match_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_24);
    for k in 0..1200 {
        let n = rng.gen_range(1..=12);
        // Narrow entry ranges give many equal prefixes and duplicates.
        let max_entry = if k % 2 == 0 { 20 } else { 2 };
        let (la, lb) = (rng.gen_range(0..=60), rng.gen_range(0..=60));
        let a = random_sorted_tuples(&mut rng, n, la, max_entry);
        let b = random_sorted_tuples(&mut rng, n, lb, max_entry);
        check(a, b, n).unwrap_or_else(|e| panic!("instance {k}: {e}"));
    }
}

#[test]
fn worked_example_orders_like_the_oracle() {
    let a: Vec<Vec<i64>> = vec![
        vec![1, 0, 2, 2, 0],
        vec![1, 0, 3, 0, 0],
        vec![2, 0, 0, 1, 0],
        vec![2, 1, 0, 0, 1],
        vec![2, 1, 0, 2, 1],
        vec![3, 0, 0, 0, 0],
    ];
    let b: Vec<Vec<i64>> = vec![
        vec![1, 0, 0, 0, 0],
        vec![1, 0, 2, 0, 0],
        vec![2, 1, 0, 1, 1],
        vec![2, 1, 0, 2, 1],
    ];
    let (naive, _) = naive_merge(&a, &b);
    let c = DeltaList::merge(
        DeltaList::from_sorted(5, a).unwrap(),
        DeltaList::from_sorted(5, b).unwrap(),
    )
    .unwrap();
    assert_eq!(c.items(), &naive[..]);
    assert_eq!(naive_deltas(&naive), vec![3, 4, 3, 1, 2, 4, 4, 6, 1]);
}

fn lists() -> impl Strategy<Value = (usize, Vec<Vec<u8>>, Vec<Vec<u8>>)> {
    (1usize..=6).prop_flat_map(|n| {
        let list = proptest::collection::vec(proptest::collection::vec(0u8..3, n), 0..25).prop_map(|mut v| {
            v.sort();
            v
        });
        (Just(n), list.clone(), list)
    })
}

proptest! {
    #[test]
    fn merge_matches_oracle((n, a, b) in lists()) {
        let (expected, _) = naive_merge(&a, &b);
        let (s, t) = (b.len() as u64, a.len() as u64);
        let c = DeltaList::merge(DeltaList::from_sorted(n, a).unwrap(), DeltaList::from_sorted(n, b).unwrap()).unwrap();
        prop_assert_eq!(c.items(), &expected[..]);
        for (k, d) in c.deltas().iter().enumerate() {
            prop_assert_eq!(*d, delta(&expected[k], &expected[k + 1]).unwrap());
        }
        prop_assert!(c.counters().element_cmps <= s.max(t) + s.min(t) * n as u64);
    }

    #[test]
    fn locate_hint_does_not_change_the_answer((n, a, _b) in lists(), x in proptest::collection::vec(0u8..3, 6)) {
        let x = x[..n].to_vec();
        let l = DeltaList::from_sorted(n, a.clone()).unwrap();
        let plain = l.locate(&x, None).unwrap();
        if let Some(first) = a.first() {
            let hint = delta(first, &x).unwrap();
            let hinted = l.locate(&x, Some(hint)).unwrap();
            prop_assert_eq!((plain.index, plain.delta_left, plain.delta_right),
                            (hinted.index, hinted.delta_left, hinted.delta_right));
            prop_assert!(hinted.counters.element_cmps <= plain.counters.element_cmps);
        }
    }
}
