//! `hforest`: command line access to Hubbard forest documents.
//!
//! Every command reads one document (two for `iso`), writes its result to
//! standard output or `--out`, and exits 0 on success, 2 on a semantic
//! failure (violations, negative verdicts, impossible requests), and 1 on
//! usage or parse errors.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use hubbard_forest::{
    anchor_choices, compose, external_arguments, forest_isomorphic, homogenize_cycle, hull,
    parse_document, planar_layout, restrict_to_cycle, return_forest, serialize_document,
    AnchorChoice, AnchorSite, CycleContext, CycleError, Document, HubbardForest, PseudoAccess,
    SchemaVertexId, ValidationReport, VertexId,
};

#[derive(Parser)]
#[command(name = "hforest", version, about = "Inspect and transform Hubbard forest documents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the result to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the six forest conditions and report violations.
    Validate {
        file: PathBuf,
        /// Require a critical vertex in every component, not just every
        /// tree cycle.
        #[arg(long)]
        strict_components: bool,
    },
    /// Homogenize every covering around the schema cycle and emit the
    /// extended forest.
    Homogenize { file: PathBuf },
    /// Compose the covering at a schema vertex with the covering one step
    /// further along, and report the composite.
    Compose {
        file: PathBuf,
        /// Schema vertex whose covering is the inner factor.
        #[arg(long, value_name = "VERTEX")]
        at: String,
    },
    /// Collapse weight-zero schema vertices and report the reduced schema.
    ReduceSchema { file: PathBuf },
    /// Decide whether two forest documents are isomorphic.
    Iso { left: PathBuf, right: PathBuf },
    /// Extract the regulated hull of the marked vertices.
    Hull {
        file: PathBuf,
        /// Comma separated vertex names; defaults to the document's marked
        /// section, or to every vertex.
        #[arg(long, value_delimiter = ',', value_name = "IDS")]
        marked: Option<Vec<String>>,
    },
    /// Build the first-return tree of the schema cycle as a self-covered
    /// forest.
    ReturnTree {
        file: PathBuf,
        /// Cycle position whose tree carries the return dynamics.
        #[arg(long, default_value_t = 0)]
        base: usize,
    },
    /// List the admissible zeros of the return argument dynamics.
    Anchors {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        base: usize,
    },
    /// Assign external arguments to every Julia access of the return tree.
    ExternalArgs {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        base: usize,
        /// Anchor index from `anchors`.
        #[arg(long, default_value_t = 0)]
        anchor: usize,
    },
    /// Emit planar coordinates for every tree.
    Layout { file: PathBuf },
}

/// A failure without a result document: the exit code and a message for
/// standard error.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

fn semantic(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

/// A produced result: the text to emit and the exit code (`validate` emits
/// its report with code 2 when violations exist).
struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = run(&cli.command);
    match result {
        Ok(out) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &out.text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: &Command) -> Result<Output, Failure> {
    match command {
        Command::Validate { file, strict_components } => {
            let doc = load(file)?;
            let report = doc.forest.validate(*strict_components);
            let code = if report.is_valid() { 0 } else { 2 };
            Ok(Output { text: render(report_json(&report)), code })
        }
        Command::Homogenize { file } => {
            let ctx = cycle_context(&load(file)?)?;
            let forest = extended_forest(&ctx)?;
            Ok(Output::ok(serialize_document(&Document { forest, marked: None })))
        }
        Command::Compose { file, at } => {
            let doc = load(file)?;
            check_valid(&doc.forest)?;
            let u = SchemaVertexId::new(at.clone());
            if !doc.forest.trees().contains_key(&u) {
                return Err(usage(format!("no schema vertex named {at}")));
            }
            let inner = doc.forest.covering_at(&u);
            let next = doc.forest.schema().map()[&u].clone();
            let outer = doc.forest.covering_at(&next);
            let composite = compose(&outer, &inner)
                .map_err(|e| semantic(format!("cannot compose at {at}: {e}")))?;
            Ok(Output::ok(render(covering_json(&composite))))
        }
        Command::ReduceSchema { file } => {
            let doc = load(file)?;
            let reduced = doc
                .forest
                .schema()
                .reduce()
                .map_err(|e| semantic(e.to_string()))?;
            Ok(Output::ok(render(json!({
                "vertices": reduced.vertices().map(ToString::to_string).collect::<Vec<_>>(),
                "f": reduced.map().iter()
                    .map(|(a, b)| (a.to_string(), Value::from(b.to_string())))
                    .collect::<serde_json::Map<_, _>>(),
                "w": reduced.weights().iter()
                    .map(|(a, n)| (a.to_string(), Value::from(*n)))
                    .collect::<serde_json::Map<_, _>>(),
                "total_weight": reduced.total_weight(),
            }))))
        }
        Command::Iso { left, right } => {
            let l = load(left)?;
            let r = load(right)?;
            check_valid(&l.forest)?;
            check_valid(&r.forest)?;
            match forest_isomorphic(&l.forest, &r.forest) {
                Some(w) => Ok(Output::ok(render(json!({
                    "isomorphic": true,
                    "schema_map": w.schema_map.iter()
                        .map(|(a, b)| (a.to_string(), Value::from(b.to_string())))
                        .collect::<serde_json::Map<_, _>>(),
                    "vertex_map": w.vertex_map.iter()
                        .map(|(a, b)| (a.to_string(), Value::from(b.to_string())))
                        .collect::<serde_json::Map<_, _>>(),
                })))),
                None => Ok(Output {
                    text: render(json!({ "isomorphic": false })),
                    code: 2,
                }),
            }
        }
        Command::Hull { file, marked } => {
            let doc = load(file)?;
            check_valid(&doc.forest)?;
            let set: BTreeSet<VertexId> = match marked {
                Some(names) => names.iter().map(VertexId::new).collect(),
                None => match &doc.marked {
                    Some(m) => m.clone(),
                    None => doc.forest.global_vertices().cloned().collect(),
                },
            };
            let hulled = hull(&doc.forest, &set).map_err(|e| semantic(e.to_string()))?;
            Ok(Output::ok(serialize_document(&Document {
                forest: hulled,
                marked: Some(set),
            })))
        }
        Command::ReturnTree { file, base } => {
            let ctx = cycle_context(&load(file)?)?;
            let forest = return_forest(&ctx, *base).map_err(cycle_failure)?;
            Ok(Output::ok(serialize_document(&Document { forest, marked: None })))
        }
        Command::Anchors { file, base } => {
            let ctx = cycle_context(&load(file)?)?;
            let choices = anchor_choices(&ctx, *base).map_err(cycle_failure)?;
            Ok(Output::ok(render(json!({
                "base": ctx.cycle()[*base].to_string(),
                "m": ctx.m(),
                "count": choices.len(),
                "anchors": choices.iter().map(anchor_json).collect::<Vec<_>>(),
            }))))
        }
        Command::ExternalArgs { file, base, anchor } => {
            let ctx = cycle_context(&load(file)?)?;
            let assignment =
                external_arguments(&ctx, *base, *anchor).map_err(cycle_failure)?;
            Ok(Output::ok(render(json!({
                "base": ctx.cycle()[*base].to_string(),
                "m": assignment.m,
                "anchor": anchor_json(&assignment.anchor),
                "arguments": assignment.arguments.iter().map(|(a, angle)| {
                    json!({
                        "vertex": a.vertex.to_string(),
                        "from": a.from.to_string(),
                        "angle": hubbard_forest::format_rational(angle.turns()),
                    })
                }).collect::<Vec<_>>(),
            }))))
        }
        Command::Layout { file } => {
            let doc = load(file)?;
            let trees: serde_json::Map<String, Value> = doc
                .forest
                .trees()
                .iter()
                .map(|(u, t)| {
                    let coords: serde_json::Map<String, Value> = planar_layout(t)
                        .iter()
                        .map(|(v, (x, y))| {
                            (
                                v.to_string(),
                                json!([
                                    hubbard_forest::format_rational(x),
                                    hubbard_forest::format_rational(y),
                                ]),
                            )
                        })
                        .collect();
                    (u.to_string(), Value::Object(coords))
                })
                .collect();
            Ok(Output::ok(render(json!({ "trees": trees }))))
        }
    }
}

fn load(path: &Path) -> Result<Document, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Validates, and on violations fails with code 2 and the report on stderr.
fn check_valid(forest: &HubbardForest) -> Result<(), Failure> {
    let report = forest.validate(false);
    if report.is_valid() {
        Ok(())
    } else {
        Err(semantic(format!("invalid forest\n{}", render(report_json(&report)))))
    }
}

fn cycle_context(doc: &Document) -> Result<CycleContext, Failure> {
    check_valid(&doc.forest)?;
    let restricted = restrict_to_cycle(&doc.forest).map_err(cycle_failure)?;
    homogenize_cycle(&restricted).map_err(cycle_failure)
}

fn cycle_failure(e: CycleError) -> Failure {
    match e {
        CycleError::BadBase { .. } | CycleError::BadAnchor { .. } => usage(e.to_string()),
        other => semantic(other.to_string()),
    }
}

/// Rebuilds the forest whose trees are the cycle extensions and whose
/// coverings are the homogenized steps.
fn extended_forest(ctx: &CycleContext) -> Result<HubbardForest, Failure> {
    let cycle = ctx.cycle();
    let mut trees = BTreeMap::new();
    let mut maps = BTreeMap::new();
    let mut degrees = BTreeMap::new();
    for (j, step) in ctx.steps().iter().enumerate() {
        trees.insert(cycle[j].clone(), step.domain().clone());
        maps.insert(cycle[j].clone(), step.map().clone());
        degrees.insert(cycle[j].clone(), step.degrees().clone());
    }
    HubbardForest::new(ctx.forest().schema().clone(), trees, maps, degrees)
        .map_err(|e| semantic(format!("homogenized forest does not assemble: {e}")))
}

fn render(v: Value) -> String {
    let mut text = serde_json::to_string_pretty(&v).expect("json rendering is infallible");
    text.push('\n');
    text
}

fn report_json(report: &ValidationReport) -> Value {
    json!({
        "valid": report.is_valid(),
        "violations": report.violations.iter().map(|v| {
            json!({ "tag": v.condition.to_string(), "detail": v.detail })
        }).collect::<Vec<_>>(),
    })
}

fn covering_json(c: &hubbard_forest::Covering) -> Value {
    json!({
        "degree": c.covering_degree(),
        "homogeneous": c.is_homogeneous(),
        "domain_vertices": c.domain().vertices().map(ToString::to_string).collect::<Vec<_>>(),
        "codomain_vertices": c.codomain().vertices().map(ToString::to_string).collect::<Vec<_>>(),
        "map": c.map().iter()
            .map(|(a, b)| (a.to_string(), Value::from(b.to_string())))
            .collect::<serde_json::Map<_, _>>(),
        "degrees": c.degrees().iter()
            .map(|(a, d)| (a.to_string(), Value::from(*d)))
            .collect::<serde_json::Map<_, _>>(),
    })
}

fn access_json(a: &PseudoAccess) -> Value {
    json!({ "vertex": a.vertex.to_string(), "from": a.from.to_string() })
}

fn anchor_json(choice: &AnchorChoice) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("index".into(), Value::from(choice.index));
    match &choice.site {
        AnchorSite::JuliaAccess(a) => {
            obj.insert("kind".into(), Value::from("julia-access"));
            obj.insert("at".into(), access_json(a));
        }
        AnchorSite::FatouAccess(a) => {
            obj.insert("kind".into(), Value::from("fatou-access"));
            obj.insert("at".into(), access_json(a));
        }
        AnchorSite::Gap { after } => {
            obj.insert("kind".into(), Value::from("gap"));
            obj.insert("after".into(), access_json(after));
        }
        AnchorSite::Interior => {
            obj.insert("kind".into(), Value::from("interior"));
        }
    }
    obj.insert(
        "cut".into(),
        match &choice.cut {
            Some(c) => Value::from(hubbard_forest::format_rational(c)),
            None => Value::Null,
        },
    );
    Value::Object(obj)
}
