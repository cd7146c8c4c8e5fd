//! File formats: point sets, matrix-action systems, orders, merge lists and
//! result files.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use vanishing::field::parse_modulus;
use vanishing::projection::ProjectedRun;
use vanishing::{
    BmError, Field, FieldError, FieldSpec, GroebnerResult, MatrixActionSystem, Monomial, OrderError, OrderSpec,
    PointSet, Polynomial, PrimeField, Rationals,
};

use crate::stats::RunStats;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
    #[error("selftest failed: {0}")]
    Selftest(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Selftest(_) => 3,
        }
    }
}

impl From<BmError> for CliError {
    fn from(e: BmError) -> Self {
        let name = match &e {
            BmError::EmptyPointSet => "EmptyPointSet",
            BmError::DuplicatePoints(..) => "DuplicatePoints",
            BmError::PointArity { .. } => "PointArity",
            BmError::OrderArity { .. } => "OrderArity",
            BmError::Order(o) => return order_error(o.clone()),
            BmError::InconsistentSystem(_) => "InconsistentSystem",
            BmError::Internal(_) => "Internal",
        };
        CliError::Validation(format!("{name}: {e}"))
    }
}

impl From<OrderError> for CliError {
    fn from(e: OrderError) -> Self {
        order_error(e)
    }
}

fn order_error(e: OrderError) -> CliError {
    let name = match &e {
        OrderError::Parse(_) => return CliError::Parse(e.to_string()),
        OrderError::SingularMatrix => "SingularMatrix",
        OrderError::NonAdmissibleColumn { .. } => "NonAdmissibleColumn",
        OrderError::NotSquare { .. } => "NotSquare",
        OrderError::NotAPermutation(_) => "NotAPermutation",
        OrderError::ArityMismatch { .. } => "ArityMismatch",
        OrderError::VariableOutOfRange(_) => "VariableOutOfRange",
        OrderError::DegreeOverflow => "DegreeOverflow",
    };
    CliError::Validation(format!("{name}: {e}"))
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// `{"type": "rational"}` or `{"type": "prime", "p": ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum FieldDesc {
    Rational,
    Prime { p: Value },
}

impl FieldDesc {
    pub fn spec(&self) -> Result<FieldSpec, CliError> {
        match self {
            FieldDesc::Rational => Ok(FieldSpec::Rational),
            FieldDesc::Prime { p } => {
                let text = match p {
                    Value::Number(x) => x.to_string(),
                    Value::String(s) => s.clone(),
                    _ => return Err(CliError::Parse(format!("prime modulus must be a number, got {p}"))),
                };
                if text.contains(['.', 'e', 'E']) {
                    return Err(CliError::Validation(format!(
                        "ModulusTooLarge: modulus {text} exceeds the 63-bit limit"
                    )));
                }
                let p = parse_modulus(&text).map_err(|e| match e {
                    FieldError::ModulusTooLarge(_) => CliError::Validation(format!("ModulusTooLarge: {e}")),
                    _ => CliError::Parse(format!("prime modulus: {e}")),
                })?;
                PrimeField::new(p).map_err(|e| CliError::Validation(format!("NotPrime: {e}")))?;
                Ok(FieldSpec::Prime(p))
            }
        }
    }

    pub fn from_spec(spec: FieldSpec) -> Self {
        match spec {
            FieldSpec::Rational => FieldDesc::Rational,
            FieldSpec::Prime(p) => FieldDesc::Prime { p: Value::from(p) },
        }
    }
}

/// Points in either supported field.
#[derive(Debug, Clone)]
pub enum LoadedPoints {
    Rational(PointSet<Rationals>),
    Prime(PointSet<PrimeField>),
}

impl LoadedPoints {
    pub fn arity(&self) -> usize {
        match self {
            LoadedPoints::Rational(p) => p.arity(),
            LoadedPoints::Prime(p) => p.arity(),
        }
    }
}

#[derive(Debug, Deserialize)]
struct PointsFile {
    field: FieldDesc,
    n: usize,
    points: Vec<Vec<Value>>,
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(x) if x.is_i64() || x.is_u64() => Some(x.to_string()),
        _ => None,
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(format!("{what}: {e}")))
}

fn parse_elems<F: Field>(field: &F, row: &[Value], ctx: &dyn Fn(usize) -> String) -> Result<Vec<F::Elem>, CliError> {
    row.iter()
        .enumerate()
        .map(|(j, v)| {
            let text =
                scalar_text(v).ok_or_else(|| CliError::Parse(format!("{}: expected a string, got {v}", ctx(j))))?;
            field
                .parse(&text)
                .map_err(|e| CliError::Parse(format!("{}: {e}", ctx(j))))
        })
        .collect()
}

fn build_points<F: Field>(field: F, file: &PointsFile) -> Result<PointSet<F>, CliError> {
    let mut rows = Vec::with_capacity(file.points.len());
    for (i, row) in file.points.iter().enumerate() {
        if row.len() != file.n {
            return Err(CliError::Validation(format!(
                "PointArity: point {} has {} coordinates, expected {}",
                i + 1,
                row.len(),
                file.n
            )));
        }
        rows.push(parse_elems(&field, row, &|j| {
            format!("point {}, coordinate {}", i + 1, j + 1)
        })?);
    }
    PointSet::new(field, file.n, rows).map_err(|e| match e {
        BmError::DuplicatePoints(a, b) => {
            CliError::Validation(format!("DuplicatePoints: points {} and {} coincide", a + 1, b + 1))
        }
        other => other.into(),
    })
}

pub fn parse_points(text: &str) -> Result<LoadedPoints, CliError> {
    let file: PointsFile = parse_json(text, "points file")?;
    Ok(match file.field.spec()? {
        FieldSpec::Rational => LoadedPoints::Rational(build_points(Rationals, &file)?),
        FieldSpec::Prime(p) => LoadedPoints::Prime(build_points(PrimeField::new(p).expect("checked"), &file)?),
    })
}

/// Serializes a point set in the input format.
pub fn points_json<F: Field>(points: &PointSet<F>) -> String {
    let v = serde_json::json!({
        "field": FieldDesc::from_spec(points.field().spec()),
        "n": points.arity(),
        "points": points
            .points()
            .iter()
            .map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    });
    to_pretty(&v)
}

#[derive(Debug, Deserialize)]
struct SystemFile {
    field: FieldDesc,
    n: usize,
    m: usize,
    psi_one: Vec<Value>,
    matrices: Vec<Vec<Vec<Value>>>,
}

#[derive(Debug, Clone)]
pub enum LoadedSystem {
    Rational(MatrixActionSystem<Rationals>),
    Prime(MatrixActionSystem<PrimeField>),
}

fn build_system<F: Field>(field: F, file: &SystemFile) -> Result<MatrixActionSystem<F>, CliError> {
    if file.matrices.len() != file.n {
        return Err(CliError::Validation(format!(
            "InconsistentSystem: {} matrices given, expected {}",
            file.matrices.len(),
            file.n
        )));
    }
    if file.psi_one.len() != file.m {
        return Err(CliError::Validation(format!(
            "InconsistentSystem: psi_one has {} entries, expected {}",
            file.psi_one.len(),
            file.m
        )));
    }
    let psi_one = parse_elems(&field, &file.psi_one, &|j| format!("psi_one entry {}", j + 1))?;
    let mut matrices = Vec::with_capacity(file.n);
    for (k, mat) in file.matrices.iter().enumerate() {
        let mut rows = Vec::with_capacity(file.m);
        for (r, row) in mat.iter().enumerate() {
            rows.push(parse_elems(&field, row, &|c| {
                format!("matrix {}, row {}, column {}", k + 1, r + 1, c + 1)
            })?);
        }
        matrices.push(rows);
    }
    Ok(MatrixActionSystem::new(field, psi_one, matrices)?)
}

pub fn parse_system(text: &str) -> Result<LoadedSystem, CliError> {
    let file: SystemFile = parse_json(text, "system file")?;
    Ok(match file.field.spec()? {
        FieldSpec::Rational => LoadedSystem::Rational(build_system(Rationals, &file)?),
        FieldSpec::Prime(p) => LoadedSystem::Prime(build_system(PrimeField::new(p).expect("checked"), &file)?),
    })
}

/// `lex`, `deglex`, `degrevlex` with optional `:i1,...,in`, or
/// `matrix:<path>` naming a file of integer rows.
pub fn parse_order(text: &str, n: usize) -> Result<OrderSpec, CliError> {
    let order = match text.strip_prefix("matrix:") {
        Some(path) => OrderSpec::parse_matrix(&read_file(Path::new(path))?)?,
        None => OrderSpec::parse_standard(text, n)?,
    };
    if order.arity() != n {
        return Err(CliError::Validation(format!(
            "ArityMismatch: order has {} variables, points have {n}",
            order.arity()
        )));
    }
    Ok(order)
}

/// One comma-separated tuple per line; blank lines and `#` comments skipped.
pub fn parse_tuples(text: &str) -> Result<Vec<Vec<i64>>, CliError> {
    let mut out: Vec<Vec<i64>> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let line = line.trim_start_matches('(').trim_end_matches(')');
        let mut tuple = Vec::new();
        for (col, tok) in line.split(',').enumerate() {
            let v = tok.trim().parse::<i64>().map_err(|_| {
                CliError::Parse(format!(
                    "line {}, entry {}: not an integer: {:?}",
                    ln + 1,
                    col + 1,
                    tok.trim()
                ))
            })?;
            tuple.push(v);
        }
        if let Some(first) = out.first() {
            if first.len() != tuple.len() {
                return Err(CliError::Validation(format!(
                    "ArityMismatch: line {} has {} entries, expected {}",
                    ln + 1,
                    tuple.len(),
                    first.len()
                )));
            }
        }
        out.push(tuple);
    }
    Ok(out)
}

pub type Term = (String, Vec<u32>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationOut {
    pub var: usize,
    pub constant: String,
    pub terms: Vec<(usize, String)>,
}

/// Intermediate data of a projected run; variables are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionInfo {
    pub ess: Vec<usize>,
    pub relations: Vec<RelationOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projected_points: Option<Vec<Vec<String>>>,
    pub sub_order: String,
    pub sub_basis: Vec<Vec<u32>>,
    pub sub_groebner: Vec<Vec<Term>>,
}

/// The output of `basis` and `functional`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub field: FieldDesc,
    pub n: usize,
    pub order: String,
    pub variant: String,
    pub basis: Vec<Vec<u32>>,
    pub groebner: Vec<Vec<Term>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projection: Option<ProjectionInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<RunStats>,
}

fn poly_terms<E: fmt::Display + Clone>(g: &Polynomial<E>) -> Vec<Term> {
    g.terms()
        .iter()
        .map(|(c, m)| (c.to_string(), m.exponents().to_vec()))
        .collect()
}

impl ResultFile {
    pub fn new<E: fmt::Display + Clone>(
        field: FieldSpec,
        n: usize,
        order: &OrderSpec,
        variant: &str,
        r: &GroebnerResult<E>,
    ) -> Self {
        ResultFile {
            field: FieldDesc::from_spec(field),
            n,
            order: order.to_string(),
            variant: variant.to_string(),
            basis: r.basis.iter().map(|b| b.exponents().to_vec()).collect(),
            groebner: r.groebner.iter().map(poly_terms).collect(),
            projection: None,
            stats: None,
        }
    }

    /// Records a projected run; `points` are the original points, if any.
    pub fn with_projection<F: Field>(mut self, points: Option<&PointSet<F>>, run: &ProjectedRun<F::Elem>) -> Self {
        let es = &run.essential;
        let projected_points = points.map(|p| {
            p.points()
                .iter()
                .map(|q| es.ess.iter().map(|&k| q[k].to_string()).collect())
                .collect()
        });
        self.projection = Some(ProjectionInfo {
            ess: es.ess.iter().map(|k| k + 1).collect(),
            relations: es
                .relations
                .iter()
                .map(|r| RelationOut {
                    var: r.var + 1,
                    constant: r.constant.to_string(),
                    terms: r.terms.iter().map(|(j, c)| (j + 1, c.to_string())).collect(),
                })
                .collect(),
            projected_points,
            sub_order: run.sub_order.to_string(),
            sub_basis: run.sub.basis.iter().map(|b| b.exponents().to_vec()).collect(),
            sub_groebner: run.sub.groebner.iter().map(poly_terms).collect(),
        });
        self
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        parse_json(text, "result file")
    }

    pub fn to_json(&self) -> String {
        to_pretty(&serde_json::to_value(self).expect("serializable"))
    }

    /// Rebuilds the polynomials over `field`.
    pub fn to_groebner<F: Field>(&self, field: &F) -> Result<GroebnerResult<F::Elem>, CliError> {
        let basis = self.basis.iter().map(|e| monomial(e)).collect::<Result<Vec<_>, _>>()?;
        Ok(GroebnerResult {
            groebner: polys_from_terms(field, &self.groebner)?,
            basis,
            stats: Default::default(),
        })
    }
}

fn monomial(e: &[u32]) -> Result<Monomial, CliError> {
    Monomial::new(e.to_vec()).map_err(CliError::from)
}

pub fn polys_from_terms<F: Field>(field: &F, polys: &[Vec<Term>]) -> Result<Vec<Polynomial<F::Elem>>, CliError> {
    polys
        .iter()
        .map(|g| {
            let terms = g
                .iter()
                .map(|(c, e)| {
                    Ok((
                        field.parse(c).map_err(|x| CliError::Parse(x.to_string()))?,
                        monomial(e)?,
                    ))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(Polynomial::from_sorted_terms(terms))
        })
        .collect()
}

/// Pretty JSON with short scalar arrays kept on one line.
pub fn to_pretty(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(is_flat),
        Value::Object(map) => map.values().all(is_flat),
        _ => true,
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::Array(items) => format!("[{}]", items.iter().map(inline).collect::<Vec<_>>().join(", ")),
        Value::Object(map) => {
            let parts: Vec<String> = map
                .iter()
                .map(|(k, x)| format!("{}: {}", serde_json::to_string(k).unwrap(), inline(x)))
                .collect();
            format!("{{{}}}", parts.join(", "))
        }
        scalar => serde_json::to_string(scalar).unwrap(),
    }
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |k: usize| "  ".repeat(k);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(_) if is_flat(v) && inline(v).len() <= 72 => out.push_str(&inline(v)),
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(x, indent + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(_) if indent > 0 && is_flat(v) && inline(v).len() <= 72 => out.push_str(&inline(v)),
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(key).unwrap());
                out.push_str(": ");
                write_value(x, indent + 1, out);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&serde_json::to_string(scalar).unwrap()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuples_parse_with_comments_and_parentheses() {
        let t = parse_tuples("# list a\n(1,0,2)\n\n3, 4, 5\n").unwrap();
        assert_eq!(t, vec![vec![1, 0, 2], vec![3, 4, 5]]);
        assert!(matches!(parse_tuples("1,x"), Err(CliError::Parse(_))));
        assert!(matches!(parse_tuples("1,2\n1"), Err(CliError::Validation(_))));
    }

    #[test]
    fn points_errors_name_the_row() {
        let bad = r#"{"field":{"type":"rational"},"n":2,"points":[["1","2"],["3"]]}"#;
        let e = parse_points(bad).unwrap_err();
        assert_eq!(e.exit_code(), 1);
        assert!(e.to_string().contains("point 2"), "{e}");
        let dup = r#"{"field":{"type":"prime","p":7},"n":1,"points":[["1"],["8"]]}"#;
        assert!(parse_points(dup)
            .unwrap_err()
            .to_string()
            .starts_with("DuplicatePoints"));
        let not_prime = r#"{"field":{"type":"prime","p":8},"n":1,"points":[["1"]]}"#;
        assert!(parse_points(not_prime).unwrap_err().to_string().starts_with("NotPrime"));
        let garbage = r#"{"field":{"type":"rational"},"n":1,"points":[["1/0"]]}"#;
        assert_eq!(parse_points(garbage).unwrap_err().exit_code(), 2);
        let syntax = "{\"field\": \n oops}";
        let e = parse_points(syntax).unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
    }

    #[test]
    fn integers_are_accepted_as_coordinates() {
        let text = r#"{"field":{"type":"prime","p":"32003"},"n":2,"points":[[1,2],["-1","1/2"]]}"#;
        match parse_points(text).unwrap() {
            LoadedPoints::Prime(p) => assert_eq!(p.points()[1], vec![32002, 16002]),
            _ => panic!("wrong field"),
        }
    }

    #[test]
    fn huge_modulus_is_rejected() {
        let text = r#"{"field":{"type":"prime","p":"170141183460469231731687303715884105727"},"n":1,"points":[["1"]]}"#;
        assert!(parse_points(text)
            .unwrap_err()
            .to_string()
            .starts_with("ModulusTooLarge"));
    }

    #[test]
    fn pretty_printer_keeps_rows_inline() {
        let v = serde_json::json!({"a": [[1, 2], [3, 4]], "b": {"c": "x"}});
        assert_eq!(
            to_pretty(&v),
            "{\n  \"a\": [[1, 2], [3, 4]],\n  \"b\": {\"c\": \"x\"}\n}\n"
        );
        let back: Value = serde_json::from_str(&to_pretty(&v)).unwrap();
        assert_eq!(back, v);
    }
}
