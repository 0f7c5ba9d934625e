//! `htaut` command line front end. Every subcommand prints one JSON document
//! on standard output. Exit codes: 0 success, 2 invalid input or a failed
//! validation, 3 an internal invariant breach.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use htaut::algebra::{format_rational, Rational};
use htaut::delliptic::{
    delta00_number, delta00_strata, delta01_number, delta01_strata, normalized_series, quasimodularity_report,
    StratumContribution,
};
use htaut::gcover::{
    boundary_intersection_h, hurwitz_cover_count, pullback_psi_kappa_hurwitz, AdmissibleGGraph, BranchFiber,
    CountMode, GGraphJson, HurwitzSpaceId, HurwitzSpaceJson, PullbackRequest,
};
use htaut::graphs::{GraphJson, GraphMorphism, StableGraph};
use htaut::mbar::{boundary_intersection, integrate_monomial, integrate_stratum_class, StratumClass};
use htaut::qmod::is_quasimodular;
use htaut::{Error, QSeries};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "htaut", version, about = "Exact intersection numbers on moduli of curves and admissible G-covers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a ψ/κ monomial, or a decorated class read from JSON.
    Integrate(IntegrateArgs),
    /// ξ_A^* ξ_{B*}(1) for two stable graphs.
    IntersectBoundary { a: PathBuf, b: PathBuf },
    /// Check an admissible G-graph against its Hurwitz space.
    ValidateGgraph { input: PathBuf },
    /// Count genus zero covers with given branch profiles.
    HurwitzCount(HurwitzArgs),
    /// Equivariant boundary intersection of two admissible G-graphs.
    IntersectGgraph { a: PathBuf, b: PathBuf },
    /// Pullback of a ψ or κ class along restriction, corestriction or a forgetful map.
    Pullback { input: PathBuf },
    /// Intersections of the genus two d-elliptic locus with the boundary divisors.
    Delliptic(DellipticArgs),
    /// Membership of a q-series in the truncated space of quasimodular forms.
    QmodCheck(QmodArgs),
}

#[derive(Args)]
struct IntegrateArgs {
    #[arg(long, conflicts_with = "class")]
    genus: Option<u32>,
    /// Comma separated ψ exponents, one per leg.
    #[arg(long, value_delimiter = ',')]
    psi: Vec<u32>,
    /// Comma separated κ indices; repeats multiply.
    #[arg(long, value_delimiter = ',')]
    kappa: Vec<u32>,
    /// A decorated class in JSON instead of a monomial.
    #[arg(long)]
    class: Option<PathBuf>,
}

#[derive(Args)]
struct HurwitzArgs {
    /// JSON file with `degree`, `fibers` and optional `target_genus`.
    #[arg(conflicts_with = "totally_ramified")]
    input: Option<PathBuf>,
    /// Shortcut `A,B`: total ramification, a simple branch point and a
    /// labelled fiber of profile (A, B).
    #[arg(long, value_delimiter = ',')]
    totally_ramified: Option<Vec<u32>>,
    #[arg(long, value_enum, default_value = "calibrated")]
    mode: Mode,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Mode {
    Tuples,
    Orbits,
    Weighted,
    Calibrated,
}

impl From<Mode> for CountMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Tuples => CountMode::Tuples,
            Mode::Orbits => CountMode::Orbits,
            Mode::Weighted => CountMode::Weighted,
            Mode::Calibrated => CountMode::Calibrated,
        }
    }
}

#[derive(Args)]
struct DellipticArgs {
    #[arg(long)]
    dmax: u64,
    /// JSON output, the default.
    #[arg(long, conflicts_with = "human")]
    json: bool,
    /// Aligned table instead of JSON.
    #[arg(long)]
    human: bool,
    /// Include the two normalized series and their quasimodularity verdicts.
    #[arg(long)]
    series: bool,
    /// Include the per-stratum contributions for every degree.
    #[arg(long)]
    strata: bool,
}

#[derive(Args)]
struct QmodArgs {
    input: PathBuf,
    #[arg(long)]
    weight: u32,
    #[arg(long)]
    fit: usize,
    #[arg(long)]
    holdout: usize,
    /// Take the series from this field of the document, e.g. the
    /// `delta01_series` of `delliptic --series`.
    #[arg(long)]
    field: Option<String>,
}

#[derive(Deserialize)]
struct HurwitzInput {
    degree: usize,
    fibers: Vec<BranchFiber>,
    #[serde(default)]
    target_genus: u32,
}

#[derive(Deserialize)]
struct ValidateInput {
    graph: GGraphJson,
    /// Defaults to the space read off the graph.
    #[serde(default)]
    space: Option<HurwitzSpaceJson>,
}

#[derive(Serialize)]
struct TermOut<G> {
    graph: G,
    to_a: GraphMorphism,
    to_b: GraphMorphism,
    excess_edges: Vec<[usize; 2]>,
}

enum Failure {
    Input(Error),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(w) => Failure::Internal(w),
            e => Failure::Input(e),
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(Error::Parse(format!("{}: {e}", path.display()))))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(Error::Parse(format!("{}: {e}", path.display()))))
}

fn r(x: &Rational) -> String {
    format_rational(x)
}

fn pairs(v: &[(usize, usize)]) -> Vec<[usize; 2]> {
    v.iter().map(|&(a, b)| [a, b]).collect()
}

fn integrate(a: &IntegrateArgs) -> Result<Value, Failure> {
    if let Some(path) = &a.class {
        let class: StratumClass = read_json(path)?;
        let value = integrate_stratum_class(&class)?;
        return Ok(json!({ "g": class.g, "n": class.n, "value": r(&value) }));
    }
    let g = a.genus.ok_or_else(|| Error::Parse("either --genus or --class is required".into()))?;
    let value = integrate_monomial(g, &a.psi, &a.kappa)?;
    Ok(json!({ "g": g, "n": a.psi.len(), "psi": a.psi, "kappa": a.kappa, "value": r(&value) }))
}

fn intersect_boundary(a: &Path, b: &Path) -> Result<Value, Failure> {
    let ga = StableGraph::from_json(&read_json::<GraphJson>(a)?)?;
    let gb = StableGraph::from_json(&read_json::<GraphJson>(b)?)?;
    let bi = boundary_intersection(&ga, &gb)?;
    let terms: Vec<_> = bi
        .terms
        .iter()
        .map(|t| TermOut {
            graph: t.triple.gamma.to_json(),
            to_a: t.triple.to_a.clone(),
            to_b: t.triple.to_b.clone(),
            excess_edges: pairs(&t.excess_edges),
        })
        .collect();
    Ok(json!({
        "g": ga.genus(),
        "n": ga.num_legs(),
        "terms": terms,
        "class": bi.class(),
    }))
}

fn validate_ggraph(path: &Path) -> Result<Value, Failure> {
    let input: ValidateInput = read_json(path)?;
    let gg = AdmissibleGGraph::from_json(&input.graph)?;
    let id = match &input.space {
        Some(s) => HurwitzSpaceId::from_json(s)?,
        None => gg.id()?,
    };
    gg.validate(&id)?;
    Ok(json!({
        "valid": true,
        "space": id.to_json(),
        "target_genus": id.target_genus,
        "marked_points": id.marked_points,
        "vertex_orbits": orbit_count(gg.graph().num_vertices(), |v| (0..gg.group().order()).map(|t| gg.act_vertex(t, v)).min().unwrap()),
        "edge_orbits": gg.edge_orbits().len(),
    }))
}

fn orbit_count(n: usize, rep: impl Fn(usize) -> usize) -> usize {
    (0..n).filter(|&x| rep(x) == x).count()
}

fn hurwitz_count(a: &HurwitzArgs) -> Result<Value, Failure> {
    let input = match (&a.input, &a.totally_ramified) {
        (Some(p), None) => read_json::<HurwitzInput>(p)?,
        (None, Some(ab)) => {
            if ab.len() != 2 || ab.contains(&0) {
                return Err(Error::Parse("--totally-ramified takes two positive integers A,B".into()).into());
            }
            let d = (ab[0] + ab[1]) as usize;
            if d < 2 {
                return Err(Error::Domain("need a + b >= 2".into()).into());
            }
            HurwitzInput {
                degree: d,
                fibers: vec![
                    BranchFiber::new(&[ab[0] + ab[1]], false),
                    BranchFiber::simple(d),
                    BranchFiber::new(ab, true),
                ],
                target_genus: 0,
            }
        }
        _ => return Err(Error::Parse("give an input file or --totally-ramified A,B".into()).into()),
    };
    let count = hurwitz_cover_count(input.degree, &input.fibers, input.target_genus)?;
    let mode: CountMode = a.mode.into();
    Ok(json!({
        "degree": input.degree,
        "fibers": input.fibers,
        "mode": mode,
        "count": r(count.get(mode)),
        "counts": count,
    }))
}

fn intersect_ggraph(a: &Path, b: &Path) -> Result<Value, Failure> {
    let ga = AdmissibleGGraph::from_json(&read_json(a)?)?;
    let gb = AdmissibleGGraph::from_json(&read_json(b)?)?;
    let bi = boundary_intersection_h(&ga, &gb)?;
    let terms: Vec<_> = bi
        .terms
        .iter()
        .map(|t| TermOut {
            graph: t.graph.to_json(),
            to_a: t.to_a.clone(),
            to_b: t.to_b.clone(),
            excess_edges: pairs(&t.excess_edges),
        })
        .collect();
    let (g, n) = (ga.graph().genus() as u32, ga.graph().num_legs());
    Ok(json!({ "g": g, "n": n, "terms": terms, "class": bi.class(g, n) }))
}

fn pullback(path: &Path) -> Result<Value, Failure> {
    let req: PullbackRequest = read_json(path)?;
    let formula = pullback_psi_kappa_hurwitz(&req)?;
    Ok(json!({ "request": req, "formula": formula.to_string(), "terms": formula.terms }))
}

fn stratum_json(c: &StratumContribution) -> Value {
    serde_json::to_value(c).expect("plain data")
}

fn delliptic(a: &DellipticArgs) -> Result<Value, Failure> {
    let mut rows = Vec::new();
    for d in 2..=a.dmax {
        let d00 = delta00_number(d)?;
        let d01 = delta01_number(d)?;
        let f = marking(d);
        let mut row = json!({
            "d": d,
            "delta00": r(&d00),
            "delta01": r(&d01),
            "delta00_normalized": r(&(&d00 / &f)),
            "delta01_normalized": r(&(&d01 / &f)),
        });
        if a.strata {
            row["delta00_strata"] = delta00_strata(d)?.iter().map(stratum_json).collect();
            row["delta01_strata"] = delta01_strata(d)?.iter().map(stratum_json).collect();
        }
        rows.push(row);
    }
    let mut out = json!({ "dmax": a.dmax, "marking_factor": "(d-2)!^2", "degrees": rows });
    if a.series {
        if a.dmax >= 10 {
            let report = quasimodularity_report(a.dmax)?;
            out["delta01_series"] = serde_json::to_value(&report.delta01_series).expect("plain data");
            out["delta00_series"] = serde_json::to_value(&report.delta00_series).expect("plain data");
            out["quasimodularity"] = json!({
                "weight_bound": report.weight_bound,
                "delta01": report.delta01,
                "delta00": report.delta00,
                "delta01_minimal_weight": report.delta01_minimal_weight,
                "delta00_minimal_weight": report.delta00_minimal_weight,
            });
        } else {
            out["delta01_series"] = serde_json::to_value(normalized_series(a.dmax, delta01_number)?).expect("plain data");
            out["delta00_series"] = serde_json::to_value(normalized_series(a.dmax, delta00_number)?).expect("plain data");
        }
    }
    Ok(out)
}

fn marking(d: u64) -> Rational {
    let f = Rational::from_integer(htaut::algebra::factorial(d - 2));
    &f * &f
}

fn delliptic_human(v: &Value) -> String {
    let head = ["d", "delta00", "delta01", "delta00/(d-2)!^2", "delta01/(d-2)!^2"];
    let keys = ["d", "delta00", "delta01", "delta00_normalized", "delta01_normalized"];
    let rows: Vec<Vec<String>> = v["degrees"]
        .as_array()
        .expect("rows")
        .iter()
        .map(|row| {
            keys.iter()
                .map(|k| match &row[*k] {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect()
        })
        .collect();
    let widths: Vec<usize> =
        (0..head.len()).map(|i| rows.iter().map(|r| r[i].len()).chain([head[i].len()]).max().unwrap()).collect();
    let line = |cells: Vec<&str>| {
        cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ") + "\n"
    };
    let mut out = line(head.to_vec());
    for r in &rows {
        out += &line(r.iter().map(String::as_str).collect());
    }
    out
}

fn qmod_check(a: &QmodArgs) -> Result<Value, Failure> {
    let doc: Value = read_json(&a.input)?;
    let target = match &a.field {
        Some(f) => doc.get(f).cloned().ok_or_else(|| Error::Parse(format!("no field `{f}` in the input")))?,
        None => doc,
    };
    let s: QSeries = serde_json::from_value(target).map_err(|e| Error::Parse(format!("q-series: {e}")))?;
    let verdict = is_quasimodular(&s, a.weight, a.fit, a.holdout)?;
    Ok(serde_json::to_value(verdict).expect("plain data"))
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let value = match &cli.command {
        Command::Integrate(a) => integrate(a)?,
        Command::IntersectBoundary { a, b } => intersect_boundary(a, b)?,
        Command::ValidateGgraph { input } => validate_ggraph(input)?,
        Command::HurwitzCount(a) => hurwitz_count(a)?,
        Command::IntersectGgraph { a, b } => intersect_ggraph(a, b)?,
        Command::Pullback { input } => pullback(input)?,
        Command::Delliptic(a) => {
            let v = delliptic(a)?;
            if a.human {
                return Ok(delliptic_human(&v));
            }
            v
        }
        Command::QmodCheck(a) => qmod_check(a)?,
    };
    Ok(serde_json::to_string_pretty(&value).expect("plain data") + "\n")
}

fn error_json(kind: &str, label: Option<&str>, message: &str) -> String {
    let mut e = json!({ "kind": kind, "message": message });
    if let Some(l) = label {
        e["label"] = json!(l);
    }
    serde_json::to_string_pretty(&json!({ "error": e })).expect("plain data") + "\n"
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(e)) => {
            let label = match &e {
                Error::Violation { label, .. } => Some(label.as_str()),
                _ => None,
            };
            print!("{}", error_json(e.kind(), label, &e.to_string()));
            ExitCode::from(2)
        }
        Err(Failure::Internal(w)) => {
            print!("{}", error_json("internal", None, &w));
            ExitCode::from(3)
        }
    }
}
