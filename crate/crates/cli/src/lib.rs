//! The `gkm` command line. Every subcommand produces one report (JSON with
//! `"schema": 1`, or indented text) and an exit code:
//! 0 success, 1 validation failure, 2 property refuted, 3 parse or IO error.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use gkm_core::acs::{find_acs_lift, recognize_bott, LiftSearch};
use gkm_core::cohomology::{betti_numbers, equivariant_basis, ordinary_basis, CohomologyError};
use gkm_core::covering::{build_covering, deck_group, CoveringReport, Factor};
use gkm_core::exactla::HomogPoly;
use gkm_core::extension::{extend_to_gkm_n, ExtensionReport};
use gkm_core::faces::{check_small_three_faces, enumerate_faces, FaceReport};
use gkm_core::graph::{infer_connection, validate_document, GkmGraph, GraphDocument};
use gkm_core::models::{
    hirzebruch_model, hypercube_involution_model, product_model, sigma_model, simplex_model,
    standard_product, weighted_projective_model, BottTower, BottTowerSpec, CharacteristicPair,
};
use gkm_core::pipeline::{build_model, classify_orbit_space, OrbitSpace};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_REFUTED: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

pub const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "gkm",
    version,
    about = "GKM graphs: faces, coverings, extensions and cohomology"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Worker threads; results never depend on it.
    #[arg(long, default_value_t = 1, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: u16,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Structural, independence and connection checks.
    Validate { file: PathBuf },
    /// All faces of one dimension.
    Faces {
        file: PathBuf,
        #[arg(long, short)]
        dim: usize,
    },
    /// Types of the two- and three-dimensional faces.
    Classify { file: PathBuf },
    /// The covering by a product of simplices and Σ's.
    Cover { file: PathBuf },
    /// Deck transformations of the covering.
    Deck { file: PathBuf },
    /// Extension of a product-shaped graph to full rank.
    Extend { file: PathBuf },
    /// Equivariant dimensions and Betti numbers.
    Betti { file: PathBuf },
    /// Equivariant classes of one degree.
    Ring {
        file: PathBuf,
        #[arg(long, short, default_value_t = 1)]
        degree: usize,
    },
    /// Emit a built-in model as graph JSON.
    Model {
        #[command(subcommand)]
        kind: ModelKind,
    },
    /// Cohomology ring of a generalized Bott tower given as JSON.
    Bott { file: PathBuf },
    /// Search for a lift with p = 1 and integral q.
    Acs {
        file: PathBuf,
        /// Also run the generalized Bott recognition.
        #[arg(long)]
        recognize: bool,
    },
    /// End-to-end runs.
    Pipeline {
        #[command(subcommand)]
        verb: PipelineVerb,
    },
}

#[derive(Subcommand, Debug)]
pub enum ModelKind {
    Simplex {
        n: usize,
    },
    Sigma {
        m: usize,
    },
    /// Product of factors such as `D2 S2 D1`.
    Product {
        #[arg(required = true)]
        factors: Vec<Factor>,
    },
    Hirzebruch {
        #[arg(allow_hyphen_values = true)]
        a: i64,
    },
    /// Weighted projective plane with third label (alpha, beta).
    Wps {
        #[arg(allow_hyphen_values = true)]
        alpha: i64,
        #[arg(allow_hyphen_values = true)]
        beta: i64,
    },
    /// The hypercube with its antipodal involution.
    Hypercube {
        n: usize,
        #[arg(long, value_enum, default_value_t = HypercubePart::Quotient)]
        part: HypercubePart,
    },
    /// Characteristic pair `{factors, lambda}` as JSON.
    Pair {
        file: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HypercubePart {
    Total,
    Projected,
    Quotient,
}

#[derive(Subcommand, Debug)]
pub enum PipelineVerb {
    Model {
        file: PathBuf,
    },
    Classify {
        file: PathBuf,
        /// Exit 2 unless the graph is a product.
        #[arg(long)]
        expect_product: bool,
    },
}

/// A report, or a failure with its exit code.
struct Outcome {
    code: i32,
    body: Body,
}

enum Body {
    Report(Value),
    /// Emitted verbatim (graph documents).
    Raw(String),
}

impl Outcome {
    fn report(code: i32, value: impl Serialize) -> Self {
        Outcome {
            code,
            body: Body::Report(serde_json::to_value(value).expect("reports serialize")),
        }
    }

    fn ok(value: impl Serialize) -> Self {
        Self::report(EXIT_OK, value)
    }

    fn fail(code: i32, kind: &str, message: impl ToString) -> Self {
        Self::report(
            code,
            json!({ "error": { "kind": kind, "message": message.to_string() } }),
        )
    }
}

type Step<T> = Result<T, Outcome>;

fn read_input(path: &PathBuf, stdin: &mut dyn Read) -> Step<String> {
    let mut text = String::new();
    let read = if path.as_os_str() == "-" {
        stdin.read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| Outcome::fail(EXIT_INPUT, "io", format!("{}: {e}", path.display())))?;
    Ok(text)
}

fn parse_document(text: &str) -> Step<GraphDocument> {
    GraphDocument::from_json(text).map_err(|e| Outcome::fail(EXIT_INPUT, "parse", e))
}

/// Graph with a connection; an absent one is inferred.
fn load_graph(path: &PathBuf, stdin: &mut dyn Read) -> Step<GkmGraph> {
    let doc = parse_document(&read_input(path, stdin)?)?;
    let g = doc
        .to_graph()
        .map_err(|e| Outcome::fail(EXIT_INVALID, "graph", e))?;
    if g.has_connection() {
        return Ok(g);
    }
    infer_connection(&g).map_err(|e| Outcome::fail(EXIT_INVALID, "connection", e))
}

fn load_json<T: serde::de::DeserializeOwned>(path: &PathBuf, stdin: &mut dyn Read) -> Step<T> {
    let text = read_input(path, stdin)?;
    serde_json::from_str(&text).map_err(|e| Outcome::fail(EXIT_INPUT, "parse", e))
}

fn cmd_validate(file: &PathBuf, stdin: &mut dyn Read) -> Step<Outcome> {
    let doc = parse_document(&read_input(file, stdin)?)?;
    let report = validate_document(&doc);
    let code = if report.passed() {
        EXIT_OK
    } else {
        EXIT_INVALID
    };
    Ok(Outcome::report(
        code,
        json!({ "passed": report.passed(), "checks": report.checks, "gkm_order": report.gkm_order }),
    ))
}

fn cmd_faces(g: &GkmGraph, dim: usize) -> Step<Outcome> {
    let faces = enumerate_faces(g, dim).map_err(|e| Outcome::fail(EXIT_INVALID, "faces", e))?;
    let reports: Vec<FaceReport> = faces.iter().map(|f| FaceReport::new(g, f)).collect();
    Ok(Outcome::ok(
        json!({ "dim": dim, "count": reports.len(), "faces": reports }),
    ))
}

fn type_counts(g: &GkmGraph, l: usize) -> Step<Map<String, Value>> {
    let mut counts = std::collections::BTreeMap::<String, usize>::new();
    if l <= g.valence() {
        for f in enumerate_faces(g, l).map_err(|e| Outcome::fail(EXIT_INVALID, "faces", e))? {
            *counts.entry(f.kind.to_string()).or_default() += 1;
        }
    }
    Ok(counts.into_iter().map(|(k, v)| (k, json!(v))).collect())
}

fn cmd_classify(g: &GkmGraph) -> Step<Outcome> {
    let verdict = check_small_three_faces(g);
    Ok(Outcome::ok(json!({
        "two_faces": type_counts(g, 2)?,
        "three_faces": type_counts(g, 3)?,
        "small_three_faces": verdict.passed(),
        "witness": verdict.witness(),
    })))
}

fn cmd_cover(g: &GkmGraph) -> Step<Outcome> {
    let c = build_covering(g, 0).map_err(|e| Outcome::fail(EXIT_REFUTED, "covering", e))?;
    let deck = deck_group(&c).map_err(|e| Outcome::fail(EXIT_REFUTED, "deck", e))?;
    Ok(Outcome::ok(CoveringReport::new(&c, deck.order())))
}

fn cmd_deck(g: &GkmGraph) -> Step<Outcome> {
    let c = build_covering(g, 0).map_err(|e| Outcome::fail(EXIT_REFUTED, "covering", e))?;
    let deck = deck_group(&c).map_err(|e| Outcome::fail(EXIT_REFUTED, "deck", e))?;
    let t = &c.total.graph;
    let elements: Vec<Value> = deck
        .elements
        .iter()
        .map(|psi| {
            let map: Map<String, Value> = (0..t.vertex_count())
                .map(|v| {
                    (
                        t.vertex_name(v).to_string(),
                        json!(t.vertex_name(psi.vertex(v))),
                    )
                })
                .collect();
            Value::Object(map)
        })
        .collect();
    Ok(Outcome::ok(json!({
        "order": deck.order(),
        "table": deck.table,
        "elements": elements,
        "factors": c.total.factors,
    })))
}

fn cmd_extend(g: &GkmGraph) -> Step<Outcome> {
    let ext = extend_to_gkm_n(g).map_err(|e| Outcome::fail(EXIT_REFUTED, "extension", e))?;
    Ok(Outcome::ok(ExtensionReport::new(&ext)))
}

fn cmd_betti(g: &GkmGraph) -> Step<Outcome> {
    match betti_numbers(g) {
        Ok(b) => Ok(Outcome::ok(b)),
        Err(e @ CohomologyError::FormalityViolation(_)) => {
            Err(Outcome::fail(EXIT_INVALID, "formality", e))
        }
        Err(e) => Err(Outcome::fail(EXIT_INVALID, "cohomology", e)),
    }
}

fn class_entries(g: &GkmGraph, entries: &[HomogPoly]) -> Value {
    let map: Map<String, Value> = entries
        .iter()
        .enumerate()
        .map(|(v, p)| (g.vertex_name(v).to_string(), json!(p.to_string())))
        .collect();
    Value::Object(map)
}

fn cmd_ring(g: &GkmGraph, degree: usize) -> Step<Outcome> {
    let basis = equivariant_basis(g, degree);
    let ordinary = ordinary_basis(g, degree);
    Ok(Outcome::ok(json!({
        "degree": degree,
        "equivariant_dimension": basis.len(),
        "ordinary_dimension": ordinary.len(),
        "basis": basis.iter().map(|c| class_entries(g, &c.entries)).collect::<Vec<_>>(),
        "ordinary_basis": ordinary.iter().map(|c| class_entries(g, &c.entries)).collect::<Vec<_>>(),
    })))
}

fn cmd_model(kind: &ModelKind, stdin: &mut dyn Read) -> Step<Outcome> {
    let invalid = |e: &dyn std::fmt::Display| Outcome::fail(EXIT_INVALID, "model", e.to_string());
    let g = match kind {
        ModelKind::Simplex { n } => simplex_model(*n).map_err(|e| invalid(&e))?,
        ModelKind::Sigma { m } => sigma_model(*m).map_err(|e| invalid(&e))?,
        ModelKind::Product { factors } => standard_product(factors).map_err(|e| invalid(&e))?.graph,
        ModelKind::Hirzebruch { a } => hirzebruch_model(*a).map_err(|e| invalid(&e))?,
        ModelKind::Wps { alpha, beta } => {
            weighted_projective_model(*alpha, *beta).map_err(|e| invalid(&e))?
        }
        ModelKind::Hypercube { n, part } => {
            let m = hypercube_involution_model(*n).map_err(|e| invalid(&e))?;
            match part {
                HypercubePart::Total => m.total.graph,
                HypercubePart::Projected => m.projected,
                HypercubePart::Quotient => m.quotient.graph,
            }
        }
        ModelKind::Pair { file } => {
            let pair: CharacteristicPair = load_json(file, stdin)?;
            product_model(&pair).map_err(|e| invalid(&e))?
        }
    };
    Ok(Outcome {
        code: EXIT_OK,
        body: Body::Raw(GraphDocument::from_graph(&g).to_json()),
    })
}

fn cmd_bott(file: &PathBuf, stdin: &mut dyn Read) -> Step<Outcome> {
    let spec: BottTowerSpec = load_json(file, stdin)?;
    let t = BottTower::new(&spec).map_err(|e| Outcome::fail(EXIT_INVALID, "bott", e))?;
    let r = t.generators();
    let basis: Vec<Vec<String>> = (0..=t.dimension())
        .map(|d| {
            t.basis(d)
                .into_iter()
                .map(|e| {
                    HomogPoly::from_terms(r, d, [(e, gkm_core::exactla::rat(1))])
                        .expect("monomial")
                        .to_string()
                })
                .collect()
        })
        .collect();
    Ok(Outcome::ok(json!({
        "generators": r,
        "dimension": t.dimension(),
        "betti": t.betti(),
        "relations": t.relations().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "basis": basis,
    })))
}

fn cmd_acs(g: &GkmGraph, recognize: bool) -> Step<Outcome> {
    let search = find_acs_lift(g).map_err(|e| Outcome::fail(EXIT_INVALID, "acs", e))?;
    let mut report = match &search {
        LiftSearch::Found { lift, table } => {
            let signs: Map<String, Value> = lift
                .signs
                .iter()
                .enumerate()
                .map(|(i, s)| (g.edge_id(i).to_string(), json!(s)))
                .collect();
            json!({ "result": "LIFT_FOUND", "signs": signs, "table": table })
        }
        LiftSearch::NoLift(w) => json!({ "result": "NO_LIFT", "witness": w }),
    };
    let mut code = if search.lift().is_some() {
        EXIT_OK
    } else {
        EXIT_REFUTED
    };
    if recognize {
        let r = recognize_bott(g);
        if r.is_err() {
            code = EXIT_REFUTED;
        }
        report["recognition"] = match r {
            Ok(ok) => json!(ok),
            Err(refusal) => json!({ "refused": refusal }),
        };
    }
    Ok(Outcome::report(code, report))
}

fn cmd_pipeline(verb: &PipelineVerb, stdin: &mut dyn Read) -> Step<Outcome> {
    match verb {
        PipelineVerb::Model { file } => {
            let g = load_graph(file, stdin)?;
            let r = build_model(&g).map_err(|e| {
                Outcome::report(
                    EXIT_REFUTED,
                    json!({ "error": { "kind": "pipeline", "stage": e.stage, "message": e.message } }),
                )
            })?;
            Ok(Outcome::ok(r))
        }
        PipelineVerb::Classify {
            file,
            expect_product,
        } => {
            let g = load_graph(file, stdin)?;
            let v = classify_orbit_space(&g).map_err(|e| {
                Outcome::report(
                    EXIT_REFUTED,
                    json!({ "error": { "kind": "pipeline", "stage": e.stage, "message": e.message } }),
                )
            })?;
            let refuted = *expect_product && !matches!(v, OrbitSpace::Product { .. });
            Ok(Outcome::report(
                if refuted { EXIT_REFUTED } else { EXIT_OK },
                v,
            ))
        }
    }
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read) -> Outcome {
    let result = (|| -> Step<Outcome> {
        match &cli.command {
            Command::Validate { file } => cmd_validate(file, stdin),
            Command::Faces { file, dim } => cmd_faces(&load_graph(file, stdin)?, *dim),
            Command::Classify { file } => cmd_classify(&load_graph(file, stdin)?),
            Command::Cover { file } => cmd_cover(&load_graph(file, stdin)?),
            Command::Deck { file } => cmd_deck(&load_graph(file, stdin)?),
            Command::Extend { file } => cmd_extend(&load_graph(file, stdin)?),
            Command::Betti { file } => cmd_betti(&load_graph(file, stdin)?),
            Command::Ring { file, degree } => cmd_ring(&load_graph(file, stdin)?, *degree),
            Command::Model { kind } => cmd_model(kind, stdin),
            Command::Bott { file } => cmd_bott(file, stdin),
            Command::Acs { file, recognize } => cmd_acs(&load_graph(file, stdin)?, *recognize),
            Command::Pipeline { verb } => cmd_pipeline(verb, stdin),
        }
    })();
    result.unwrap_or_else(|o| o)
}

fn with_schema(report: Value) -> Value {
    let mut out = Map::new();
    out.insert("schema".into(), json!(SCHEMA));
    match report {
        Value::Object(m) => out.extend(m),
        other => {
            out.insert("report".into(), other);
        }
    }
    Value::Object(out)
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Object(m) if m.is_empty() => Some("{}".into()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => Some(format!(
            "[{}]",
            a.iter()
                .map(|x| scalar(x).unwrap())
                .collect::<Vec<_>>()
                .join(", ")
        )),
        _ => None,
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 2, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render_text(x, indent + 2, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap())),
    }
}

/// Parses `args` (program name first), runs, writes the report and returns
/// the exit code.
pub fn run<I, S>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = write!(stdout, "{}", e.render());
            return code;
        }
    };
    let outcome = dispatch(&cli, stdin);
    let text = match outcome.body {
        Body::Raw(s) => s + "\n",
        Body::Report(v) => match cli.format {
            Format::Json => {
                serde_json::to_string_pretty(&with_schema(v)).expect("serializes") + "\n"
            }
            Format::Text => {
                let mut s = String::new();
                if let Some(r) = v.get("result").and_then(Value::as_str) {
                    s.push_str(r);
                    s.push('\n');
                }
                render_text(&with_schema(v), 0, &mut s);
                s
            }
        },
    };
    if stdout.write_all(text.as_bytes()).is_err() {
        return EXIT_INPUT;
    }
    outcome.code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str], input: &str) -> (i32, String) {
        let mut out = Vec::new();
        let code = run(
            std::iter::once("gkm").chain(args.iter().copied()),
            &mut input.as_bytes(),
            &mut out,
        );
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn usage_errors_are_input_errors() {
        assert_eq!(run_str(&["frobnicate"], "").0, EXIT_INPUT);
        assert_eq!(run_str(&["--help"], "").0, EXIT_OK);
        assert_eq!(run_str(&["--jobs", "0", "betti", "-"], "").0, EXIT_INPUT);
    }

    #[test]
    fn text_rendering_is_indented() {
        let mut s = String::new();
        render_text(
            &json!({"a": 1, "b": {"c": [1, 2]}, "d": [{"e": "x"}]}),
            0,
            &mut s,
        );
        assert_eq!(s, "a: 1\nb:\n  c: [1, 2]\nd:\n  -\n    e: x\n");
    }

    #[test]
    fn model_round_trips_through_validate() {
        let (code, graph) = run_str(&["model", "simplex", "3"], "");
        assert_eq!(code, EXIT_OK);
        let (code, report) = run_str(&["validate", "-"], &graph);
        assert_eq!(code, EXIT_OK, "{report}");
        assert!(report.contains("\"schema\": 1"));
    }
}
