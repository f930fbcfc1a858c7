//! Request validation and dispatch.

use std::path::{Path, PathBuf};
use std::time::Instant;

use etale_core::classify::{
    cover_standard_smooth, cover_standard_unramified, is_etale, is_smooth_of_dim, is_unramified, smooth_dimensions, Certificate,
    Cover, StandardChart, UnitCombination, Verdict,
};
use etale_core::corering::{Field, Polynomial, Scalar};
use etale_core::groebner::Caps;
use etale_core::liftlab::{default_suite, oracle_compare, FiniteAlgebra, TestExtension, HOM_CAP};
use etale_core::linalg::Matrix;
use etale_core::scheme::{jacobian_at, kaehler_presentation, parse_point, rational_points, FpAlgebra, RationalPoint};
use etale_core::tangent::{cotangent_at, differential_at, tangent_basis, tangent_enum_fp, PolyMap, ENUMERATION_CAP};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::input::{load_scheme, SchemeInput};
use crate::report::{Report, VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    Tangent,
    Cover,
    Kaehler,
    Lift,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Tangent => "tangent",
            Command::Cover => "cover",
            Command::Kaehler => "kaehler",
            Command::Lift => "lift",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropertyArg {
    Unramified,
    Smooth,
    Etale,
}

impl PropertyArg {
    pub fn name(self) -> &'static str {
        match self {
            PropertyArg::Unramified => "unramified",
            PropertyArg::Smooth => "smooth",
            PropertyArg::Etale => "etale",
        }
    }
}

#[derive(Clone, Debug)]
pub struct AnalysisRequest {
    pub command: Command,
    pub property: Option<PropertyArg>,
    pub dim: Option<usize>,
    pub point: Option<String>,
    pub suite: Option<PathBuf>,
    pub seed: u64,
    pub caps: Caps,
}

impl AnalysisRequest {
    pub fn new(command: Command) -> Self {
        AnalysisRequest {
            command,
            property: None,
            dim: None,
            point: None,
            suite: None,
            seed: 0,
            caps: Caps::default(),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::parse(format!("{}: {m}", self.command.name())));
        match self.command {
            Command::Check | Command::Cover => {
                if self.property.is_none() {
                    return bad("--property is required");
                }
                if self.dim.is_some() && self.property != Some(PropertyArg::Smooth) {
                    return bad("--dim only applies to --property smooth");
                }
                if self.command == Command::Cover && self.property == Some(PropertyArg::Smooth) && self.dim.is_none() {
                    return bad("--dim is required for a smooth cover");
                }
                if self.point.is_some() || self.suite.is_some() {
                    return bad("--point and --suite do not apply");
                }
            }
            Command::Tangent | Command::Kaehler => {
                if self.property.is_some() || self.dim.is_some() || self.suite.is_some() {
                    return bad("only --point applies");
                }
            }
            Command::Lift => {
                if self.property.is_some() || self.dim.is_some() || self.point.is_some() {
                    return bad("only --suite applies");
                }
            }
        }
        Ok(())
    }

    fn parameters(&self) -> Map<String, Value> {
        let mut m = Map::new();
        if let Some(p) = self.property {
            m.insert("property".into(), json!(p.name()));
        }
        if let Some(k) = self.dim {
            m.insert("dim".into(), json!(k));
        }
        if let Some(p) = &self.point {
            m.insert("point".into(), json!(p));
        }
        if let Some(s) = &self.suite {
            let name = s.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            m.insert("suite".into(), json!(name));
        }
        m.insert("seed".into(), json!(self.seed.to_string()));
        m.insert("max_basis".into(), json!(self.caps.max_basis));
        m.insert("max_degree".into(), json!(self.caps.max_degree));
        m
    }
}

fn poly_strings(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(ToString::to_string).collect()
}

fn scalar_strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn matrix_json(m: &Matrix) -> Value {
    json!((0..m.rows()).map(|i| scalar_strings(m.row(i))).collect::<Vec<_>>())
}

fn combination_json(c: &UnitCombination) -> Value {
    json!({
        "generators": poly_strings(&c.generators),
        "cofactors": poly_strings(&c.cofactors),
    })
}

fn chart_json(c: &StandardChart) -> Value {
    json!({
        "rows": c.rows,
        "cols": c.cols,
        "determinant": c.determinant.to_string(),
        "dimension": c.dimension(),
        "variables": c.ring.vars(),
        "relations": poly_strings(&c.relations),
        "inverse": c.inverse.to_string(),
    })
}

fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::UnitIdealCombination(u) => {
            let mut v = combination_json(u);
            v["kind"] = json!("unit_ideal_combination");
            v
        }
        Certificate::ChartList { charts, combination } => json!({
            "kind": "chart_list",
            "charts": charts.iter().map(chart_json).collect::<Vec<_>>(),
            "covering": combination_json(combination),
        }),
        Certificate::Counterexample {
            residual,
            point,
            tangent_dimension,
        } => json!({
            "kind": "counterexample",
            "residual": poly_strings(residual),
            "point": point.as_ref().map(|p| scalar_strings(p.coords())),
            "tangent_dimension": tangent_dimension,
        }),
    }
}

fn verdict_parts(v: Verdict) -> (Option<bool>, Option<Value>, Vec<String>) {
    (Some(v.value), Some(certificate_json(&v.certificate)), v.diagnostics)
}

fn resolve_point(req: &AnalysisRequest, input: &SchemeInput) -> Result<Option<RationalPoint>, CliError> {
    let a = &input.algebra;
    match &req.point {
        Some(p) => match input.points.get(p) {
            Some(x) => Ok(Some(x.clone())),
            None => Ok(Some(parse_point(a, p)?)),
        },
        None => Ok(None),
    }
}

/// A rational point chosen by `seed` among all of them, over a prime field.
fn seeded_point(a: &FpAlgebra, seed: u64) -> Result<RationalPoint, CliError> {
    if a.field() == Field::Rationals {
        return Err(CliError::parse("--point is required over Q"));
    }
    let points = rational_points(a, ENUMERATION_CAP)?;
    if points.is_empty() {
        return Err(CliError::parse("the scheme has no rational points"));
    }
    let i = ChaCha8Rng::seed_from_u64(seed).gen_range(0..points.len());
    Ok(points[i].clone())
}

fn check(req: &AnalysisRequest, a: &FpAlgebra) -> Result<(Option<bool>, Option<Value>, Vec<String>), CliError> {
    Ok(match (req.property.expect("validated"), req.dim) {
        (PropertyArg::Unramified, _) => verdict_parts(is_unramified(a)?),
        (PropertyArg::Etale, _) => verdict_parts(is_etale(a)?),
        (PropertyArg::Smooth, Some(k)) => verdict_parts(is_smooth_of_dim(a, k)?),
        (PropertyArg::Smooth, None) => {
            let (dims, notes) = smooth_dimensions(a)?;
            let cert = json!({"kind": "dimension_scan", "dimensions": dims});
            (Some(!dims.is_empty()), Some(cert), notes)
        }
    })
}

fn cover(req: &AnalysisRequest, a: &FpAlgebra) -> Result<(Option<bool>, Option<Value>, Vec<String>), CliError> {
    let c: Cover = match req.property.expect("validated") {
        PropertyArg::Unramified => cover_standard_unramified(a)?,
        PropertyArg::Smooth => cover_standard_smooth(a, req.dim.expect("validated"))?,
        PropertyArg::Etale => cover_standard_smooth(a, 0)?,
    };
    let mut cert = json!({
        "charts": c.charts.iter().map(chart_json).collect::<Vec<_>>(),
    });
    if let Some(comb) = &c.combination {
        cert["covering"] = combination_json(comb);
    } else {
        cert["residual"] = json!(poly_strings(&c.residual));
    }
    let diag = vec![format!("{} chart(s) in row-then-column minor order", c.charts.len())];
    Ok((Some(c.covering), Some(cert), diag))
}

fn tangent(req: &AnalysisRequest, input: &SchemeInput) -> Result<(Option<bool>, Option<Value>, Vec<String>), CliError> {
    let a = &input.algebra;
    let mut diag = Vec::new();
    let x = match resolve_point(req, input)? {
        Some(x) => x,
        None => {
            let x = seeded_point(a, req.seed)?;
            diag.push(format!("point chosen by seed {}", req.seed));
            x
        }
    };
    let fiber = tangent_basis(a, &x)?;
    let cot = cotangent_at(a, &x)?;
    if let Some(span) = fiber.span_fp() {
        let m = a.nvars() as u32;
        let p = a.field().characteristic() as u128;
        if p.saturating_pow(m) <= ENUMERATION_CAP {
            let oracle = tangent_enum_fp(a, &x, ENUMERATION_CAP)?;
            if oracle != span {
                return Err(CliError::internal("tangent basis disagrees with dual-number enumeration"));
            }
            diag.push(format!("dual-number enumeration agrees ({} vectors)", oracle.len()));
        }
    }
    let mut maps = Map::new();
    for (name, (coords, target)) in &input.maps {
        let dir = input.base_dir.clone().unwrap_or_default();
        let target_input = load_scheme(&dir.join(target), a.caps())?;
        let f = PolyMap::new(a.clone(), target_input.algebra, coords.clone())?;
        let y = f.apply(&x)?;
        let d = differential_at(&f, &x)?;
        maps.insert(
            name.clone(),
            json!({
                "image": scalar_strings(y.coords()),
                "differential": matrix_json(&d),
                "rank": d.rank(),
            }),
        );
    }
    let mut cert = json!({
        "point": scalar_strings(x.coords()),
        "dimension": fiber.dimension(),
        "basis": fiber.basis.iter().map(|v| scalar_strings(v)).collect::<Vec<_>>(),
        "cotangent_dimension": cot.dimension(),
    });
    if !maps.is_empty() {
        cert["maps"] = Value::Object(maps);
    }
    Ok((None, Some(cert), diag))
}

fn kaehler(req: &AnalysisRequest, input: &SchemeInput) -> Result<(Option<bool>, Option<Value>, Vec<String>), CliError> {
    let a = &input.algebra;
    let k = kaehler_presentation(a);
    let rows: Vec<Vec<String>> = k.relations.entries.iter().map(|r| poly_strings(r)).collect();
    let mut cert = json!({
        "generators": k.generators,
        "relations": rows,
    });
    if let Some(x) = resolve_point(req, input)? {
        let fiber = k.at(&x)?;
        let canon = fiber.canonical();
        let jac = jacobian_at(a, &x)?;
        cert["fiber"] = json!({
            "point": scalar_strings(x.coords()),
            "dimension": canon.dimension,
            "echelon": matrix_json(&canon.echelon),
            "tangent_dimension": jac.kernel_basis().len(),
        });
    }
    Ok((None, Some(cert), Vec::new()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SuiteEntry {
    name: String,
    vars: Vec<String>,
    relations: Vec<String>,
    nilpotent: Vec<String>,
}

pub fn load_suite(path: &Path, field: Field) -> Result<Vec<TestExtension>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
    let entries: Vec<SuiteEntry> = serde_json::from_str(&text)?;
    entries
        .iter()
        .map(|e| {
            let v: Vec<&str> = e.vars.iter().map(String::as_str).collect();
            let r: Vec<&str> = e.relations.iter().map(String::as_str).collect();
            let n: Vec<&str> = e.nilpotent.iter().map(String::as_str).collect();
            Ok(TestExtension::parse(&e.name, field, &v, &r, &n)?)
        })
        .collect()
}

fn element_text(b: &FiniteAlgebra, v: &[u32]) -> String {
    b.to_poly(v).to_string()
}

fn lift(req: &AnalysisRequest, a: &FpAlgebra) -> Result<(Option<bool>, Option<Value>, Vec<String>), CliError> {
    let Field::Prime(p) = a.field() else {
        return Err(CliError::parse("lift needs a scheme over a prime field"));
    };
    let suite = match &req.suite {
        Some(path) => load_suite(path, a.field())?,
        None => default_suite(p)?,
    };
    let report = oracle_compare(a, &suite, HOM_CAP)?;
    let extensions: Vec<Value> = suite
        .iter()
        .zip(&report.censuses)
        .map(|(ext, c)| {
            let q = ext.quotient();
            json!({
                "name": ext.name,
                "dimension": ext.algebra().dimension(),
                "nil_dimension": ext.nil_dimension(),
                "square_zero": ext.is_square_zero(),
                "min": c.min(),
                "max": c.max(),
                "census": c.entries.iter().map(|e| json!({
                    "downstairs": e.downstairs.iter().map(|v| element_text(q, v)).collect::<Vec<_>>(),
                    "lifts": e.lifts,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let comparisons: Vec<Value> = report
        .comparisons
        .iter()
        .map(|c| {
            json!({
                "property": c.property.to_string(),
                "verdict": c.verdict,
                "per_extension": c.per_extension.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "overall": c.overall.to_string(),
            })
        })
        .collect();
    let diag = vec![format!(
        "over F{p} the suite sees rational lifting problems only; a false smooth verdict with every count >= 1 is SUITE-INCONCLUSIVE"
    )];
    let cert = json!({"extensions": extensions, "comparisons": comparisons});
    Ok((Some(!report.has_mismatch()), Some(cert), diag))
}

/// Runs one analysis. The verdict's truth never turns into an error.
pub fn run_command(req: &AnalysisRequest, input: &SchemeInput) -> Result<Report, CliError> {
    req.validate()?;
    let start = Instant::now();
    let a = &input.algebra;
    let (verdict, certificate, diagnostics) = match req.command {
        Command::Check => check(req, a)?,
        Command::Cover => cover(req, a)?,
        Command::Tangent => tangent(req, input)?,
        Command::Kaehler => kaehler(req, input)?,
        Command::Lift => lift(req, a)?,
    };
    Ok(Report {
        version: VERSION.to_string(),
        input_digest: input.digest.clone(),
        command: req.command.name().to_string(),
        parameters: req.parameters(),
        verdict,
        certificate,
        diagnostics,
        timing_ms: start.elapsed().as_millis() as u64,
    })
}

pub fn run_path(req: &AnalysisRequest, path: &Path) -> Result<Report, CliError> {
    let input = load_scheme(path, req.caps)?;
    run_command(req, &input)
}

/// Every `*.json` file directly inside `dir`, by file name.
pub fn batch_inputs(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

/// Analyzes a directory in parallel; results keep file-name order.
pub fn run_batch(req: &AnalysisRequest, dir: &Path, threads: Option<usize>) -> Result<Vec<(String, Result<Report, CliError>)>, CliError> {
    let files = batch_inputs(dir)?;
    let work = || -> Vec<(String, Result<Report, CliError>)> {
        files
            .par_iter()
            .map(|f| {
                let name = f.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                (name, run_path(req, f))
            })
            .collect()
    };
    match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::internal(format!("thread pool: {e}")))?;
            Ok(pool.install(work))
        }
        None => Ok(work()),
    }
}

/// Batch results as one JSON document: `[{input, report | error}]`.
pub fn batch_json(results: &[(String, Result<Report, CliError>)]) -> Value {
    let items: Vec<Value> = results
        .iter()
        .map(|(name, r)| match r {
            Ok(rep) => json!({"input": name, "report": rep.to_value()}),
            Err(e) => json!({"input": name, "error": {"message": e.message, "exit_code": e.exit_code()}}),
        })
        .collect();
    Value::Array(items)
}

/// Worst exit code over a batch, `0` when every file was analyzed.
pub fn batch_exit_code(results: &[(String, Result<Report, CliError>)]) -> i32 {
    results
        .iter()
        .filter_map(|(_, r)| r.as_ref().err().map(CliError::exit_code))
        .max()
        .unwrap_or(0)
}

