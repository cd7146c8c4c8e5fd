use std::fmt;
use std::path::Path;
use std::time::Instant;

use vanishing::functionals::algorithm1;
use vanishing::projection::{algorithm1_projected, bm_projected_detailed, essential_variables_functional};
use vanishing::{
    bm, DeltaList, Field, FunctionalSystem, LexKey, MatrixActionSystem, MergeCounters, PointSet, ProjectMode, Variant,
};

use crate::checks::{run_all, NaiveTarget, Outcome};
use crate::io::{
    parse_order, parse_points, parse_system, parse_tuples, read_file, write_file, CliError, LoadedPoints, LoadedSystem,
    ResultFile,
};
use crate::stats::RunStats;

fn basis_in<F: Field>(
    points: &PointSet<F>,
    order_text: &str,
    variant: Variant,
    mode: ProjectMode,
) -> Result<ResultFile, CliError> {
    let n = points.arity();
    let order = parse_order(order_text, n)?;
    let start = Instant::now();
    let (file, stats) = match (variant, mode) {
        (Variant::Abbott, ProjectMode::On) => {
            return Err(CliError::Validation(
                "UnsupportedCombination: projection runs the mmm variant; use --variant mmm or --project off".into(),
            ))
        }
        (Variant::Abbott, _) | (Variant::Mmm, ProjectMode::Off) => {
            let r = bm(points, &order, variant)?;
            (
                ResultFile::new(points.field().spec(), n, &order, &variant.to_string(), &r),
                r.stats,
            )
        }
        (Variant::Mmm, _) => {
            let run = bm_projected_detailed(points, &order)?;
            if mode == ProjectMode::Auto && run.essential.is_everything(n) {
                let r = bm(points, &order, variant)?;
                (
                    ResultFile::new(points.field().spec(), n, &order, &variant.to_string(), &r),
                    r.stats,
                )
            } else {
                let file = ResultFile::new(points.field().spec(), n, &order, &variant.to_string(), &run.result)
                    .with_projection(Some(points), &run);
                (file, run.result.stats)
            }
        }
    };
    Ok(ResultFile {
        stats: Some(RunStats::from_bm(&stats, start.elapsed().as_secs_f64())),
        ..file
    })
}

/// Runs BM on loaded points; the result embeds its statistics.
pub fn compute_basis(
    points: &LoadedPoints,
    order: &str,
    variant: Variant,
    mode: ProjectMode,
) -> Result<ResultFile, CliError> {
    match points {
        LoadedPoints::Rational(p) => basis_in(p, order, variant, mode),
        LoadedPoints::Prime(p) => basis_in(p, order, variant, mode),
    }
}

/// Writes the result to `out` (or returns it for stdout) and the statistics
/// to `stats_path` if given, otherwise into the result.
fn emit(mut result: ResultFile, out: Option<&Path>, stats_path: Option<&Path>) -> Result<String, CliError> {
    if let Some(path) = stats_path {
        let stats = result.stats.take().unwrap_or_default();
        let v = serde_json::to_value(stats).expect("serializable");
        write_file(path, &crate::io::to_pretty(&v))?;
    }
    let text = result.to_json();
    match out {
        Some(path) => {
            write_file(path, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

pub fn cmd_basis(
    points_path: &Path,
    order: &str,
    variant: Variant,
    mode: ProjectMode,
    out: Option<&Path>,
    stats: Option<&Path>,
) -> Result<String, CliError> {
    let points = parse_points(&read_file(points_path)?)?;
    emit(compute_basis(&points, order, variant, mode)?, out, stats)
}

fn functional_in<F: Field>(
    sys: &MatrixActionSystem<F>,
    order_text: &str,
    mode: ProjectMode,
) -> Result<ResultFile, CliError> {
    let n = sys.matrices().len();
    let order = parse_order(order_text, n)?;
    let start = Instant::now();
    let spec = sys.field().spec();
    let project = match mode {
        ProjectMode::On => true,
        ProjectMode::Off => false,
        ProjectMode::Auto => !essential_variables_functional(sys, &order)?.is_everything(n),
    };
    let (file, stats) = if project {
        let run = algorithm1_projected(sys, &order)?;
        let file = ResultFile::new(spec, n, &order, "mmm", &run.result).with_projection::<F>(None, &run);
        (file, run.result.stats)
    } else {
        let r = algorithm1(sys, &order)?;
        (ResultFile::new(spec, n, &order, "mmm", &r), r.stats)
    };
    Ok(ResultFile {
        stats: Some(RunStats::from_bm(&stats, start.elapsed().as_secs_f64())),
        ..file
    })
}

pub fn compute_functional(sys: &LoadedSystem, order: &str, mode: ProjectMode) -> Result<ResultFile, CliError> {
    match sys {
        LoadedSystem::Rational(s) => functional_in(s, order, mode),
        LoadedSystem::Prime(s) => functional_in(s, order, mode),
    }
}

pub fn cmd_functional(
    system_path: &Path,
    order: &str,
    mode: ProjectMode,
    out: Option<&Path>,
    stats: Option<&Path>,
) -> Result<String, CliError> {
    let sys = parse_system(&read_file(system_path)?)?;
    emit(compute_functional(&sys, order, mode)?, out, stats)
}

struct Labeled {
    key: Vec<i64>,
    label: String,
}

impl LexKey for Labeled {
    type Entry = i64;
    fn key(&self) -> &[i64] {
        &self.key
    }
}

/// A merged list with each item labeled by its origin (`a3`, `b1`, ...).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeReport {
    pub labels: Vec<String>,
    pub tuples: Vec<Vec<i64>>,
    pub deltas: Vec<usize>,
    pub counters: MergeCounters,
}

fn labeled_list(name: &str, tuples: Vec<Vec<i64>>, arity: usize) -> Result<DeltaList<Labeled>, CliError> {
    let items = tuples
        .into_iter()
        .enumerate()
        .map(|(k, key)| Labeled {
            key,
            label: format!("{name}{}", k + 1),
        })
        .collect();
    DeltaList::from_sorted(arity, items).map_err(|e| match e {
        vanishing::MergeError::Unsorted(i, j) => CliError::Validation(format!(
            "Unsorted: list {name} is not ascending at items {} and {}",
            i + 1,
            j + 1
        )),
        other => CliError::Validation(format!("ArityMismatch: list {name}: {other}")),
    })
}

pub fn merge_tuples(a: Vec<Vec<i64>>, b: Vec<Vec<i64>>) -> Result<MergeReport, CliError> {
    let arity = a.first().or(b.first()).map_or(0, |t| t.len());
    let la = labeled_list("a", a, arity)?;
    let lb = labeled_list("b", b, arity)?;
    let merged = DeltaList::merge(la, lb).map_err(|e| CliError::Validation(e.to_string()))?;
    let counters = merged.counters();
    let deltas = merged.deltas().to_vec();
    let (labels, tuples) = merged.into_items().into_iter().map(|x| (x.label, x.key)).unzip();
    Ok(MergeReport {
        labels,
        tuples,
        deltas,
        counters,
    })
}

impl fmt::Display for MergeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "merged: {}", self.labels.join(" "))?;
        for (l, t) in self.labels.iter().zip(&self.tuples) {
            let t: Vec<String> = t.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  {l}\t({})", t.join(","))?;
        }
        let d: Vec<String> = self.deltas.iter().map(|x| x.to_string()).collect();
        writeln!(f, "deltas: ({})", d.join(","))?;
        writeln!(f, "element comparisons: {}", self.counters.element_cmps)?;
        write!(f, "delta comparisons: {}", self.counters.delta_cmps)
    }
}

pub fn cmd_merge(a_path: &Path, b_path: &Path) -> Result<String, CliError> {
    let a = parse_tuples(&read_file(a_path)?)?;
    let b = parse_tuples(&read_file(b_path)?)?;
    if let (Some(x), Some(y)) = (a.first(), b.first()) {
        if x.len() != y.len() {
            return Err(CliError::Validation(format!(
                "ArityMismatch: list a has tuples of length {}, list b of length {}",
                x.len(),
                y.len()
            )));
        }
    }
    Ok(merge_tuples(a, b)?.to_string())
}

pub fn cmd_bench_spoly(s: usize) -> Result<String, CliError> {
    Ok(crate::bench::run_spoly(s)?.to_string())
}

/// Runs every check; the report lists one line per criterion.
pub fn cmd_selftest(seed: u64) -> (String, Vec<Outcome>) {
    let outcomes = run_all(seed, NaiveTarget::Counted);
    let text = outcomes.iter().map(|o| o.to_string()).collect::<Vec<_>>().join("\n");
    (text, outcomes)
}
