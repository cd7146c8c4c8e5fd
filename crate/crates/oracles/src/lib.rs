//! Slow, obviously-correct reference code for checking `vanishing`.
//!
//! Nothing here reuses the optimized paths of the core crate: merges compare
//! tuples entry by entry from the start, evaluation multiplies factor by
//! factor, ranks come from a fresh elimination. Generators are seeded and
//! deterministic.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vanishing::{
    Field, FunctionalSystem, GroebnerResult, Monomial, OrderSpec, PointSet, Polynomial, PrimeField, Rationals,
};

/// Entry-wise comparison counting every entry pair inspected.
pub fn naive_compare<E: Ord>(a: &[E], b: &[E], counter: &mut u64) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        *counter += 1;
        match x.cmp(y) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    Ordering::Equal
}

/// Textbook two-list merge. On ties the item of `b` goes first. Returns the
/// merged list and the number of entry comparisons.
pub fn naive_merge<E: Ord + Clone>(a: &[Vec<E>], b: &[Vec<E>]) -> (Vec<Vec<E>>, u64) {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut count = 0;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if naive_compare(&b[j], &a[i], &mut count) != Ordering::Greater {
            out.push(b[j].clone());
            j += 1;
        } else {
            out.push(a[i].clone());
            i += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    (out, count)
}

/// `len` random tuples of length `n` with entries in `0..=max_entry`,
/// sorted ascending.
pub fn random_sorted_tuples(rng: &mut ChaCha8Rng, n: usize, len: usize, max_entry: i64) -> Vec<Vec<i64>> {
    let mut v: Vec<Vec<i64>> = (0..len)
        .map(|_| (0..n).map(|_| rng.gen_range(0..=max_entry)).collect())
        .collect();
    v.sort();
    v
}

/// First differing position (1-based), `len + 1` when equal.
pub fn naive_delta<E: Ord>(v: &[E], w: &[E]) -> usize {
    v.iter().zip(w).position(|(x, y)| x != y).map_or(v.len() + 1, |k| k + 1)
}

pub fn naive_deltas<E: Ord>(items: &[Vec<E>]) -> Vec<usize> {
    items.windows(2).map(|w| naive_delta(&w[0], &w[1])).collect()
}

fn divides(a: &Monomial, b: &Monomial) -> bool {
    a.exponents().iter().zip(b.exponents()).all(|(x, y)| x <= y)
}

/// Whether `t` is a multiple of an element of `l` or of `ini_g`.
pub fn naive_divisibility_filter(t: &Monomial, l: &[Monomial], ini_g: &[Monomial]) -> bool {
    l.iter().chain(ini_g).any(|u| divides(u, t))
}

/// Field elements that can be drawn at random.
pub trait Sample: Field {
    /// `small` draws from a handful of values so that coincidences and
    /// linear dependencies are common.
    fn sample(&self, rng: &mut ChaCha8Rng, small: bool) -> Self::Elem;
}

impl Sample for Rationals {
    fn sample(&self, rng: &mut ChaCha8Rng, small: bool) -> Self::Elem {
        let bound = if small { 2 } else { 9 };
        let num = rng.gen_range(-bound..=bound);
        let den = if rng.gen_bool(0.25) { rng.gen_range(1..=3) } else { 1 };
        self.mul(&self.from_i64(num), &self.inv(&self.from_i64(den)).unwrap())
    }
}

impl Sample for PrimeField {
    fn sample(&self, rng: &mut ChaCha8Rng, small: bool) -> u64 {
        let p = self.modulus();
        if small {
            rng.gen_range(0..p.min(5))
        } else {
            rng.gen_range(0..p)
        }
    }
}

/// `m` distinct random points of `k^n`, resampled until distinct.
///
/// About half of the seeds draw coordinates from a small range.
pub fn random_point_set<F: Sample>(seed: u64, field: &F, n: usize, m: usize) -> PointSet<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let small = rng.gen_bool(0.5);
    let mut points: Vec<Vec<F::Elem>> = Vec::with_capacity(m);
    let mut attempts = 0;
    while points.len() < m {
        attempts += 1;
        assert!(
            attempts < 1000 * (m + 1),
            "seed {seed}: cannot find {m} distinct points"
        );
        let small_now = small && attempts < 50 * (m + 1);
        let p: Vec<F::Elem> = (0..n).map(|_| field.sample(&mut rng, small_now)).collect();
        if !points.contains(&p) {
            points.push(p);
        }
    }
    PointSet::new(field.clone(), n, points).unwrap_or_else(|e| panic!("seed {seed}: {e}"))
}

/// A random admissible matrix order with entries in `[-max_entry, max_entry]`.
/// Columns whose first nonzero entry is negative are negated; singular
/// draws are rejected.
pub fn random_matrix_order(seed: u64, n: usize, max_entry: i64) -> OrderSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut a: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(-max_entry..=max_entry)).collect())
            .collect();
        for c in 0..n {
            if let Some(r) = (0..n).find(|&r| a[r][c] != 0) {
                if a[r][c] < 0 {
                    for row in a.iter_mut() {
                        row[c] = -row[c];
                    }
                }
            }
        }
        let rows = a
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect();
        if let Ok(o) = OrderSpec::matrix(rows) {
            return o;
        }
    }
}

/// Term-by-term evaluation with one multiplication per factor.
pub fn naive_evaluate<F: Field>(field: &F, f: &Polynomial<F::Elem>, point: &[F::Elem]) -> F::Elem {
    let mut total = field.zero();
    for (c, m) in f.terms() {
        let mut term = c.clone();
        for (x, &e) in point.iter().zip(m.exponents()) {
            for _ in 0..e {
                term = field.mul(&term, x);
            }
        }
        total = field.add(&total, &term);
    }
    total
}

/// `f ∈ I(P)`, decided by evaluating at every point.
pub fn membership_by_evaluation<F: Field>(f: &Polynomial<F::Elem>, points: &PointSet<F>) -> bool {
    let field = points.field();
    points
        .points()
        .iter()
        .all(|p| field.is_zero(&naive_evaluate(field, f, p)))
}

/// Rank by Gaussian elimination on a copy of `rows`.
pub fn naive_rank<F: Field>(field: &F, rows: &[Vec<F::Elem>]) -> usize {
    let mut a = rows.to_vec();
    let width = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..a.len()).find(|&r| !field.is_zero(&a[r][col])) else {
            continue;
        };
        a.swap(rank, pivot);
        let inv = field.inv(&a[rank][col]).unwrap();
        for r in rank + 1..a.len() {
            let factor = field.mul(&a[r][col], &inv);
            if field.is_zero(&factor) {
                continue;
            }
            for c in col..width {
                let sub = field.mul(&factor, &a[rank][c]);
                a[r][c] = field.sub(&a[r][c], &sub);
            }
        }
        rank += 1;
    }
    rank
}

/// `Ψ(t)` by applying one variable step per unit of exponent.
pub fn naive_psi<F: Field, S: FunctionalSystem<F>>(sys: &S, t: &Monomial) -> Vec<F::Elem> {
    let mut v = sys.psi_one();
    for (var, &e) in t.exponents().iter().enumerate() {
        for _ in 0..e {
            v = sys.step(&v, var);
        }
    }
    v
}

/// `Ψ(f)` for a polynomial `f`.
pub fn naive_psi_poly<F: Field, S: FunctionalSystem<F>>(sys: &S, f: &Polynomial<F::Elem>) -> Vec<F::Elem> {
    let field = sys.field();
    let mut total = vec![field.zero(); sys.dim()];
    for (c, t) in f.terms() {
        for (acc, x) in total.iter_mut().zip(naive_psi(sys, t)) {
            *acc = field.add(acc, &field.mul(c, &x));
        }
    }
    total
}

/// Checks everything a reduced Gröbner basis of the kernel of `Ψ` with its
/// quotient basis must satisfy: `B` ascending, an order ideal containing 1,
/// with `Ψ(B)` independent; every `g` monic, strictly descending, killed by
/// `Ψ`, with its tail in `B`; leading monomials ascending, pairwise
/// indivisible, and exactly the minimal monomials outside `B`.
///
/// `expected_dim` is the required `|B|`, when known.
pub fn check_functional_result<F: Field, S: FunctionalSystem<F>>(
    sys: &S,
    order: &OrderSpec,
    r: &GroebnerResult<F::Elem>,
    expected_dim: Option<usize>,
) -> Result<(), String> {
    let field = sys.field();
    let n = sys.arity();
    let b = &r.basis;
    let mut errs = String::new();
    let mut fail = |msg: String| {
        let _ = writeln!(errs, "{msg}");
    };
    let cmp = |x: &Monomial, y: &Monomial| order.cmp_monomials(x, y);

    if let Some(d) = expected_dim {
        if b.len() != d {
            fail(format!("|B| = {}, expected {d}", b.len()));
        }
    }
    if !b.is_empty() && !b.contains(&Monomial::one(n)) {
        fail("1 is not in B".into());
    }
    if !b.windows(2).all(|w| cmp(&w[0], &w[1]) == Ordering::Less) {
        fail("B is not strictly ascending".into());
    }
    for t in b {
        for i in 0..n {
            if let Some(d) = t.div_var(i) {
                if !b.contains(&d) {
                    fail(format!("B is not closed under division: {t} / x{}", i + 1));
                }
            }
        }
    }
    let psis: Vec<Vec<F::Elem>> = b.iter().map(|t| naive_psi(sys, t)).collect();
    if naive_rank(field, &psis) != b.len() {
        fail("values of B are dependent".into());
    }

    let lts: Vec<&Monomial> = r.groebner.iter().filter_map(|g| g.leading_monomial()).collect();
    if lts.len() != r.groebner.len() {
        fail("G contains zero".into());
    }
    if !lts.windows(2).all(|w| cmp(w[0], w[1]) == Ordering::Less) {
        fail("G is not sorted by ascending leading monomial".into());
    }
    for (i, x) in lts.iter().enumerate() {
        for (j, y) in lts.iter().enumerate() {
            if i != j && divides(x, y) {
                fail(format!("leading monomial {x} divides {y}"));
            }
        }
    }
    for g in &r.groebner {
        if !g.leading_coefficient().is_some_and(|c| field.is_one(c)) {
            fail(format!("{g} is not monic"));
        }
        if !g.terms().windows(2).all(|w| cmp(&w[0].1, &w[1].1) == Ordering::Greater) {
            fail(format!("terms of {g} are not strictly descending"));
        }
        if g.terms().iter().any(|(c, _)| field.is_zero(c)) {
            fail(format!("{g} has a zero coefficient"));
        }
        for t in g.tail().iter().map(|(_, t)| t) {
            if !b.contains(t) {
                fail(format!("tail monomial {t} of {g} is not in B"));
            }
        }
        if naive_psi_poly(sys, g).iter().any(|x| !field.is_zero(x)) {
            fail(format!("{g} is not in the kernel"));
        }
    }
    // The leading monomials are the minimal monomials outside B: each one has
    // all its divisors in B, and every border monomial is a multiple of one.
    for lt in &lts {
        if b.contains(lt) {
            fail(format!("leading monomial {lt} lies in B"));
        }
        for i in 0..n {
            if let Some(d) = lt.div_var(i) {
                if !b.contains(&d) {
                    fail(format!("leading monomial {lt} is not minimal"));
                }
            }
        }
    }
    let border = b.iter().flat_map(|t| (0..n).filter_map(move |i| t.mul_var(i)));
    for u in border {
        if !b.contains(&u) && !lts.iter().any(|lt| divides(lt, &u)) {
            fail(format!("{u} is neither in B nor a multiple of a leading monomial"));
        }
    }
    if b.is_empty() && !(lts.len() == 1 && lts[0].is_one()) {
        fail("empty B requires G = {1}".into());
    }

    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs)
    }
}

/// The full invariant suite for a BM run on points, including vanishing
/// checked by direct evaluation.
pub fn check_result<F: Field>(
    points: &PointSet<F>,
    order: &OrderSpec,
    r: &GroebnerResult<F::Elem>,
) -> Result<(), String> {
    let sys = vanishing::PointEvaluation::from_points(points);
    check_functional_result(&sys, order, r, Some(points.len()))?;
    for g in &r.groebner {
        if !membership_by_evaluation(g, points) {
            return Err(format!("{g} does not vanish on the points"));
        }
    }
    Ok(())
}

/// `|G| ≤ n + min(n, m − 1) · m + 1`.
pub fn groebner_size_bound(n: usize, m: usize) -> usize {
    n + n.min(m.saturating_sub(1)) * m + 1
}

/// A seeded BM test case: field, sizes and order. Points are generated on
/// demand with [`random_point_set`] from `seed`.
#[derive(Debug, Clone)]
pub struct Instance {
    pub seed: u64,
    /// `Some(p)` for `Z/pZ`, `None` for the rationals.
    pub prime: Option<u64>,
    pub n: usize,
    pub m: usize,
    pub order: OrderSpec,
}

impl std::fmt::Display for Instance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let field = self.prime.map_or("QQ".to_string(), |p| format!("GF({p})"));
        write!(
            f,
            "seed={} field={field} n={} m={} order={}",
            self.seed, self.n, self.m, self.order
        )
    }
}

/// Something to run on an instance, for each field type.
pub trait Visitor {
    fn visit<F: Sample>(&mut self, inst: &Instance, points: &PointSet<F>) -> Result<(), String>;
}

impl Instance {
    pub fn run<V: Visitor>(&self, v: &mut V) -> Result<(), String> {
        let res = match self.prime {
            None => v.visit(self, &random_point_set(self.seed, &Rationals, self.n, self.m)),
            Some(p) => {
                let f = PrimeField::new(p).map_err(|e| e.to_string())?;
                v.visit(self, &random_point_set(self.seed, &f, self.n, self.m))
            }
        };
        res.map_err(|e| format!("[{self}] {e}"))
    }
}

/// `count` instances with `n ≤ max_n`, `m ≤ max_m`, alternating fields and
/// cycling through lex, deglex, degrevlex and a random matrix order. The
/// sizes are spread over `m < n`, `m = n` and `m > n`.
pub fn corpus(seed: u64, count: usize, max_n: usize, max_m: usize) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let n = rng.gen_range(1..=max_n);
            let m = match k % 3 {
                0 if n > 1 => rng.gen_range(1..n.min(max_m + 1)),
                1 if n <= max_m => n,
                _ => rng.gen_range(1..=max_m),
            };
            let inst_seed = rng.gen();
            let order = match k % 4 {
                0 => OrderSpec::lex(n),
                1 => OrderSpec::deglex(n),
                2 => OrderSpec::degrevlex(n),
                _ => random_matrix_order(inst_seed, n, 3),
            };
            let prime = if k % 2 == 0 { Some(32003) } else { None };
            Instance {
                seed: inst_seed,
                prime,
                n,
                m,
                order,
            }
        })
        .collect()
}
