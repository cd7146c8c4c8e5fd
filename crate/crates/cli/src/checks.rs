//! One check per acceptance criterion, shared by `selftest` and the
//! acceptance test target.

use std::collections::HashSet;
use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vanishing::functionals::algorithm1;
use vanishing::projection::{bm_projected_detailed, project};
use vanishing::{bm, DeltaList, Monomial, OrderSpec, PointEvaluation, PointSet, ProjectMode, Rationals, Variant};
use vanishing_oracles::{
    check_result, corpus, groebner_size_bound, naive_deltas, naive_merge, random_sorted_tuples, Instance, Sample,
    Visitor,
};

use crate::bench::run_spoly;
use crate::commands::{compute_basis, merge_tuples};
use crate::io::{parse_points, parse_tuples, polys_from_terms, LoadedPoints};

pub const EXAMPLE_POINTS: &str = include_str!("../golden/example_points.json");
pub const EXAMPLE_LIST_A: &str = include_str!("../golden/example_list_a.txt");
pub const EXAMPLE_LIST_B: &str = include_str!("../golden/example_list_b.txt");

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
}

impl Outcome {
    fn new(
        id: u8,
        title: &'static str,
        limit: Option<f64>,
        start: Instant,
        failures: Vec<String>,
        summary: String,
    ) -> Self {
        let elapsed = start.elapsed();
        let limit = limit.map(Duration::from_secs_f64);
        let mut failures = failures;
        if let Some(l) = limit {
            if elapsed > l {
                failures.push(format!(
                    "took {:.3}s, limit {:.3}s",
                    elapsed.as_secs_f64(),
                    l.as_secs_f64()
                ));
            }
        }
        let passed = failures.is_empty();
        let detail = if passed { summary } else { failures.join("; ") };
        Outcome {
            id,
            title,
            passed,
            detail,
            elapsed,
            limit,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {}: {} {} ({:.3}s) {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

fn expect<T: PartialEq + fmt::Debug>(failures: &mut Vec<String>, what: &str, got: T, want: T) {
    if got != want {
        failures.push(format!("{what}: got {got:?}, expected {want:?}"));
    }
}

/// The four rational points in five variables under lex.
pub fn golden_example() -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut run = || -> Result<(), String> {
        let points = parse_points(EXAMPLE_POINTS).map_err(|e| e.to_string())?;
        let field = Rationals;
        let want_b: Vec<Vec<u32>> = (0..4).map(|k| vec![0, 0, 0, 0, k]).collect();
        let want_g = [
            "x5^4 - 2*x5^3 - x5^2 + 2*x5",
            "x4 - 1",
            "x3 - x5^2",
            "x2 - x5 - 1",
            "x1 - x5^2 - 1",
        ];
        for mode in [ProjectMode::Off, ProjectMode::On] {
            let r = compute_basis(&points, "lex", Variant::Mmm, mode).map_err(|e| e.to_string())?;
            expect(&mut fails, &format!("B ({mode})"), r.basis.clone(), want_b.clone());
            let g = r.to_groebner(&field).map_err(|e| e.to_string())?;
            let shown: Vec<String> = g.groebner.iter().map(|p| p.to_string()).collect();
            expect(
                &mut fails,
                &format!("G ({mode})"),
                shown,
                want_g.iter().map(|s| s.to_string()).collect(),
            );
            if mode == ProjectMode::On {
                let Some(p) = r.projection else {
                    fails.push("no projection data".into());
                    continue;
                };
                let mut ess = p.ess.clone();
                ess.sort();
                expect(&mut fails, "Ess", ess, vec![3, 5]);
                let s = |rows: &[[&str; 2]]| rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
                expect(
                    &mut fails,
                    "projected points",
                    p.projected_points,
                    Some(s(&[["0", "0"], ["1", "1"], ["1", "-1"], ["4", "2"]])),
                );
                let sub_g = polys_from_terms(&field, &p.sub_groebner).map_err(|e| e.to_string())?;
                let shown: Vec<String> = sub_g.iter().map(|p| p.to_string()).collect();
                expect(
                    &mut fails,
                    "sub-run G",
                    shown,
                    vec!["x2^4 - 2*x2^3 - x2^2 + 2*x2".to_string(), "x1 - x2^2".to_string()],
                );
            }
        }
        Ok(())
    };
    if let Err(e) = run() {
        fails.push(e);
    }
    Outcome::new(
        1,
        "worked example",
        Some(1.0),
        start,
        fails,
        "B, G, Ess, projected points and G' match".into(),
    )
}

/// The two example lists of exponent vectors under lex.
pub fn merge_example() -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    match parse_tuples(EXAMPLE_LIST_A)
        .and_then(|a| Ok((a, parse_tuples(EXAMPLE_LIST_B)?)))
        .and_then(|(a, b)| merge_tuples(a, b))
    {
        Ok(r) => {
            expect(
                &mut fails,
                "order",
                r.labels.join(" "),
                "b1 b2 a1 a2 a3 a4 b3 b4 a5 a6".to_string(),
            );
            expect(&mut fails, "deltas", r.deltas.clone(), vec![3, 4, 3, 1, 2, 4, 4, 6, 1]);
        }
        Err(e) => fails.push(e.to_string()),
    }
    Outcome::new(
        2,
        "merge example",
        Some(0.1),
        start,
        fails,
        "order and deltas match".into(),
    )
}

/// What the naive count at `s = 10` is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NaiveTarget {
    /// The stated value `s^2 - 4 = 96`.
    Stated,
    /// `s^2 - 3`: the last b item shares `x_s` with `a`, so deciding it
    /// takes one more entry comparison than the others.
    Counted,
}

pub fn spoly_counts(target: NaiveTarget) -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut summary = String::new();
    let mut run = || -> Result<(), String> {
        let r10 = run_spoly(10).map_err(|e| e.to_string())?;
        if r10.delta.total() > 29 {
            fails.push(format!("delta merge used {} comparisons, bound 29", r10.delta.total()));
        }
        let want = match target {
            NaiveTarget::Stated => 96,
            NaiveTarget::Counted => 97,
        };
        expect(&mut fails, "naive count at s = 10", r10.naive, want);
        let r3 = run_spoly(3).map_err(|e| e.to_string())?;
        if r3.delta.total() > 6 || r3.naive > 6 {
            fails.push(format!("s = 3 used {} and {} comparisons", r3.delta.total(), r3.naive));
        }
        let (r50, r100) = (
            run_spoly(50).map_err(|e| e.to_string())?,
            run_spoly(100).map_err(|e| e.to_string())?,
        );
        let delta_ratio = r100.delta.total() as f64 / r50.delta.total() as f64;
        let naive_ratio = r100.naive as f64 / r50.naive as f64;
        if delta_ratio >= 2.5 {
            fails.push(format!("delta counter grew {delta_ratio:.2}x"));
        }
        if naive_ratio <= 3.5 {
            fails.push(format!("naive counter grew {naive_ratio:.2}x"));
        }
        summary = format!(
            "s=10: delta {} (element {}, delta {}), naive {}; s=50->100: delta x{delta_ratio:.2}, naive x{naive_ratio:.2}",
            r10.delta.total(),
            r10.delta.element_cmps,
            r10.delta.delta_cmps,
            r10.naive
        );
        Ok(())
    };
    if let Err(e) = run() {
        fails.push(e);
    }
    if !fails.is_empty() && !summary.is_empty() {
        fails.push(summary.clone());
    }
    Outcome::new(3, "S-polynomial counters", Some(1.0), start, fails, summary)
}

pub fn merge_bound(seed: u64, count: usize) -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0f64;
    for k in 0..count {
        let n = rng.gen_range(1..=12);
        let max_entry = if k % 2 == 0 { 20 } else { 2 };
        let (la, lb) = (rng.gen_range(0..=60), rng.gen_range(0..=60));
        let a = random_sorted_tuples(&mut rng, n, la, max_entry);
        let b = random_sorted_tuples(&mut rng, n, lb, max_entry);
        let (expected, _) = naive_merge(&a, &b);
        let (s, t) = (a.len() as u64, b.len() as u64);
        let merged = DeltaList::from_sorted(n, a)
            .and_then(|a| Ok((a, DeltaList::from_sorted(n, b)?)))
            .and_then(|(a, b)| DeltaList::merge(a, b));
        let c = match merged {
            Ok(c) => c,
            Err(e) => {
                fails.push(format!("instance {k}: {e}"));
                continue;
            }
        };
        if c.items() != expected.as_slice() || c.deltas() != naive_deltas(&expected).as_slice() {
            fails.push(format!("instance {k}: output differs from the naive merge"));
        }
        let bound = s.max(t) + s.min(t) * n as u64;
        if c.counters().element_cmps > bound {
            fails.push(format!(
                "instance {k}: {} comparisons, bound {bound}",
                c.counters().element_cmps
            ));
        }
        if bound > 0 {
            worst = worst.max(c.counters().element_cmps as f64 / bound as f64);
        }
    }
    fails.truncate(5);
    Outcome::new(
        4,
        "merge comparison bound",
        Some(10.0),
        start,
        fails,
        format!("{count} instances, worst count/bound {worst:.2}"),
    )
}

/// `|G|` against its bound over every run of criteria 5 and 6.
#[derive(Debug, Clone, Default)]
pub struct SizeTally {
    pub runs: usize,
    pub violations: Vec<String>,
}

impl SizeTally {
    fn record(&mut self, inst: &Instance, g: usize) {
        self.runs += 1;
        let bound = groebner_size_bound(inst.n, inst.m);
        if g > bound {
            self.violations.push(format!("[{inst}] |G| = {g} > {bound}"));
        }
    }
}

struct Agreement<'a>(&'a mut SizeTally);

impl Visitor for Agreement<'_> {
    fn visit<F: Sample>(&mut self, inst: &Instance, points: &PointSet<F>) -> Result<(), String> {
        let mmm = bm(points, &inst.order, Variant::Mmm).map_err(|e| e.to_string())?;
        let abbott = bm(points, &inst.order, Variant::Abbott).map_err(|e| e.to_string())?;
        self.0.record(inst, mmm.groebner.len());
        if mmm != abbott {
            return Err("variants disagree".into());
        }
        check_result(points, &inst.order, &mmm)
    }
}

pub fn variant_agreement(seed: u64, count: usize, tally: &mut SizeTally) -> Outcome {
    let start = Instant::now();
    let cases = corpus(seed, count, 10, 30);
    let mut fails: Vec<String> = cases
        .iter()
        .filter_map(|c| c.run(&mut Agreement(tally)).err())
        .collect();
    let rational = cases.iter().filter(|c| c.prime.is_none()).count();
    if rational == 0 || rational == cases.len() {
        fails.push("corpus does not cover both fields".into());
    }
    fails.truncate(5);
    Outcome::new(
        5,
        "variant agreement",
        Some(60.0),
        start,
        fails,
        format!(
            "{} point sets ({rational} over QQ), invariant suite passed",
            cases.len()
        ),
    )
}

struct Projection<'a>(&'a mut SizeTally);

impl Visitor for Projection<'_> {
    fn visit<F: Sample>(&mut self, inst: &Instance, points: &PointSet<F>) -> Result<(), String> {
        let run = bm_projected_detailed(points, &inst.order).map_err(|e| e.to_string())?;
        let direct = bm(points, &inst.order, Variant::Mmm).map_err(|e| e.to_string())?;
        self.0.record(inst, run.result.groebner.len());
        if run.result != direct {
            return Err("projected and direct results differ".into());
        }
        let ess = &run.essential.ess;
        if ess.len() > inst.n.min(inst.m - 1) {
            return Err(format!("|Ess| = {}", ess.len()));
        }
        let ess: HashSet<usize> = ess.iter().copied().collect();
        if let Some(b) = run.result.basis.iter().find(|b| b.support().any(|v| !ess.contains(&v))) {
            return Err(format!("{b} is not supported on Ess"));
        }
        project(points, &run.essential).map(|_| ()).map_err(|e| e.to_string())
    }
}

pub fn projection_equivalence(seed: u64, count: usize, tally: &mut SizeTally) -> Outcome {
    let start = Instant::now();
    let cases: Vec<Instance> = corpus(seed, count * 5, 10, 30)
        .into_iter()
        .filter(|c| c.m < c.n)
        .take(count)
        .collect();
    let mut fails: Vec<String> = cases
        .iter()
        .filter_map(|c| c.run(&mut Projection(tally)).err())
        .collect();
    if cases.len() < count {
        fails.push(format!("only {} instances with m < n", cases.len()));
    }
    fails.truncate(5);
    Outcome::new(
        6,
        "projection equivalence",
        Some(60.0),
        start,
        fails,
        format!("{} point sets with m < n", cases.len()),
    )
}

pub fn groebner_size(tally: &SizeTally) -> Outcome {
    let start = Instant::now();
    let mut fails = tally.violations.clone();
    if tally.runs == 0 {
        fails.push("no runs recorded".into());
    }
    fails.truncate(5);
    Outcome::new(
        7,
        "basis-count bound",
        None,
        start,
        fails,
        format!("{} runs within bound", tally.runs),
    )
}

struct Functional;

impl Visitor for Functional {
    fn visit<F: Sample>(&mut self, inst: &Instance, points: &PointSet<F>) -> Result<(), String> {
        let r = algorithm1(&PointEvaluation::from_points(points), &inst.order).map_err(|e| e.to_string())?;
        let direct = bm(points, &inst.order, Variant::Mmm).map_err(|e| e.to_string())?;
        if r != direct {
            return Err("functional run differs from bm".into());
        }
        let limit = (r.groebner.len() + inst.m) as u64;
        if r.stats.functional_calls > limit {
            return Err(format!("{} functional calls, bound {limit}", r.stats.functional_calls));
        }
        Ok(())
    }
}

pub fn functional_engine(seed: u64, count: usize) -> Outcome {
    let start = Instant::now();
    let cases = corpus(seed, count, 10, 30);
    let mut fails: Vec<String> = cases.iter().filter_map(|c| c.run(&mut Functional).err()).collect();
    fails.truncate(5);
    Outcome::new(
        8,
        "functional engine",
        Some(30.0),
        start,
        fails,
        format!("{} instances agree with bm", cases.len()),
    )
}

pub fn matrix_orders() -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut monos = Vec::new();
    for d in 0..=10u32 {
        for a in 0..=d {
            for b in 0..=d - a {
                monos.push(Monomial::new(vec![a, b, d - a - b]).expect("small"));
            }
        }
    }
    let pairs = [
        (
            "lex",
            OrderSpec::lex(3),
            OrderSpec::matrix_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
        ),
        (
            "deglex",
            OrderSpec::deglex(3),
            OrderSpec::matrix_i64(&[&[1, 1, 1], &[1, 0, 0], &[0, 1, 0]]),
        ),
        (
            "degrevlex",
            OrderSpec::degrevlex(3),
            OrderSpec::matrix_i64(&[&[1, 1, 1], &[0, 0, -1], &[0, -1, 0]]),
        ),
    ];
    let mut compared = 0u64;
    for (name, std, mat) in pairs {
        let mat = match mat {
            Ok(m) => m,
            Err(e) => {
                fails.push(format!("{name} matrix: {e}"));
                continue;
            }
        };
        let vs: Vec<_> = monos
            .iter()
            .map(|m| (std.order_vector(m), mat.order_vector(m)))
            .collect();
        'outer: for (i, x) in monos.iter().enumerate() {
            for (j, y) in monos.iter().enumerate() {
                compared += 1;
                let by_std = std.cmp_monomials(x, y);
                let by_mat = mat.cmp_monomials(x, y);
                let (mut c1, mut c2) = (0, 0);
                let by_vec = match (&vs[i], &vs[j]) {
                    ((Ok(a), Ok(ma)), (Ok(b), Ok(mb))) => {
                        Some((std.compare(a, b, &mut c1).0, mat.compare(ma, mb, &mut c2).0))
                    }
                    _ => None,
                };
                if by_std != by_mat || by_vec != Some((by_std, by_std)) {
                    fails.push(format!("{name}: {x} vs {y}"));
                    break 'outer;
                }
            }
        }
    }
    Outcome::new(
        9,
        "matrix-order fidelity",
        Some(10.0),
        start,
        fails,
        format!("{compared} ordered pairs of degree <= 10 in 3 variables"),
    )
}

/// Every criterion in order, with corpora derived from `seed`.
pub fn run_all(seed: u64, target: NaiveTarget) -> Vec<Outcome> {
    let mut tally = SizeTally::default();
    let mut out = vec![
        golden_example(),
        merge_example(),
        spoly_counts(target),
        merge_bound(seed, 1000),
    ];
    out.push(variant_agreement(seed.wrapping_add(1), 220, &mut tally));
    out.push(projection_equivalence(seed.wrapping_add(2), 210, &mut tally));
    out.push(groebner_size(&tally));
    out.push(functional_engine(seed.wrapping_add(3), 110));
    out.push(matrix_orders());
    out
}

/// Loads the worked example, for tests that need the raw points.
pub fn example_points() -> PointSet<Rationals> {
    match parse_points(EXAMPLE_POINTS).expect("bundled file parses") {
        LoadedPoints::Rational(p) => p,
        LoadedPoints::Prime(_) => unreachable!("bundled file is rational"),
    }
}
