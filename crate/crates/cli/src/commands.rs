use std::fmt::Write as _;

use diricci::families::{self, TreeSpec};
use diricci::io::{parse_graph, write_graph};
use diricci::verify::{run_fixtures, Outcome};
use diricci::{
    alpha_curvature_report, build_walk_measure, check_condition, curvature_report, parse_rational,
    Condition, ConditionVerdict, CurvatureError, CurvatureReport, DegreeConvention,
    DirectedGraph, DistanceMatrix, GraphFormat, Infinitesimal, Rational, RicciCurvature, Scalar,
    SparseMeasure, TransportResult, Witness,
};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::args::{CheckKind, Cli, Command, Convention, Family, FileFormat, GraphArg, OutputFormat, TreeShape};

/// Exit status and message of a failed run.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }

    fn undefined(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<CurvatureError> for Failure {
    fn from(e: CurvatureError) -> Self {
        if e.is_undefined_computation() {
            Failure::undefined(e.to_string())
        } else {
            Failure::invalid(e.to_string())
        }
    }
}

/// What a successful run prints, and whether it still signals failure.
pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

enum Alpha {
    Exact(Rational),
    Limit,
}

fn parse_alpha(text: &str) -> Result<Alpha, Failure> {
    if text == "limit" {
        return Ok(Alpha::Limit);
    }
    let alpha = parse_rational(text).map_err(|e| Failure::invalid(format!("--alpha: {e}")))?;
    if alpha < Rational::zero() || alpha > Rational::one() {
        return Err(Failure::invalid(format!("--alpha: {alpha} outside [0, 1]")));
    }
    Ok(Alpha::Exact(alpha))
}

fn file_format(format: FileFormat) -> GraphFormat {
    match format {
        FileFormat::Edges => GraphFormat::EdgeList,
        FileFormat::Json => GraphFormat::Json,
        FileFormat::Matrix => GraphFormat::Matrix,
    }
}

fn load(cli: &Cli, arg: &GraphArg) -> Result<DirectedGraph, Failure> {
    let path = &arg.graph;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    let format = cli.graph_format.map_or_else(|| GraphFormat::from_path(path), file_format);
    let convention = match cli.degree_convention {
        Convention::Strict => DegreeConvention::Strict,
        Convention::Split => DegreeConvention::Split,
    };
    parse_graph(&text, format, convention).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn check_vertex(graph: &DirectedGraph, v: usize) -> Result<(), Failure> {
    graph.check_vertex(v).map_err(|e| Failure::invalid(e.to_string()))
}

fn decimal(value: &Rational) -> String {
    format!("{:.6}", value.to_f64().unwrap_or(f64::NAN))
}

pub fn run(cli: &Cli) -> Result<Output, Failure> {
    let format = cli.format;
    match &cli.command {
        Command::Gen { family } => {
            let graph = generate(family).map_err(|e| Failure::invalid(e.to_string()))?;
            let target = cli.graph_format.map(file_format).unwrap_or_else(|| {
                cli.output.as_deref().map_or(GraphFormat::EdgeList, GraphFormat::from_path)
            });
            Ok(Output::ok(write_graph(&graph, target)))
        }
        Command::Distances(arg) => {
            let graph = load(cli, arg)?;
            Ok(Output::ok(render_distances(&DistanceMatrix::complete(&graph), format)))
        }
        Command::Measure { graph, x, alpha } => {
            let graph = load(cli, graph)?;
            check_vertex(&graph, *x)?;
            let text = match parse_alpha(alpha)? {
                Alpha::Exact(a) => render_measure(&measure(&graph, *x, &a)?, *x, &a.to_string(), format),
                Alpha::Limit => {
                    let a = Infinitesimal::one_minus_epsilon();
                    render_measure(&measure(&graph, *x, &a)?, *x, "limit", format)
                }
            };
            Ok(Output::ok(text))
        }
        Command::Wasserstein { graph, x, y, alpha } => {
            let graph = load(cli, graph)?;
            check_vertex(&graph, *x)?;
            check_vertex(&graph, *y)?;
            let curvature = RicciCurvature::new(&graph);
            let text = match parse_alpha(alpha)? {
                Alpha::Exact(a) => render_transport(&curvature.transport(*x, *y, &a)?, format),
                Alpha::Limit => {
                    render_transport(&curvature.transport(*x, *y, &Infinitesimal::one_minus_epsilon())?, format)
                }
            };
            Ok(Output::ok(text))
        }
        Command::Curvature { graph, pair, alpha } => {
            let graph = load(cli, graph)?;
            let alpha = parse_alpha(alpha)?;
            let label = match &alpha {
                Alpha::Exact(a) => a.to_string(),
                Alpha::Limit => "limit".into(),
            };
            match pair.as_deref() {
                Some(&[x, y]) => {
                    let curvature = RicciCurvature::new(&graph);
                    let kappa = match &alpha {
                        Alpha::Exact(a) => curvature.alpha_ricci(x, y, a)?,
                        Alpha::Limit => curvature.ricci(x, y)?,
                    };
                    Ok(Output::ok(render_pair(x, y, &label, &kappa, format)))
                }
                Some(_) => Err(Failure::invalid("--pair takes exactly two vertices")),
                None => {
                    let report = match &alpha {
                        Alpha::Exact(a) => alpha_curvature_report(&graph, a)?,
                        Alpha::Limit => curvature_report(&graph)?,
                    };
                    Ok(Output::ok(render_report(&report, &label, format)))
                }
            }
        }
        Command::Bound { graph, x, y } => {
            let graph = load(cli, graph)?;
            let bound = RicciCurvature::new(&graph).upper_bound(*x, *y)?;
            Ok(Output::ok(render_bound(*x, *y, &bound, format)))
        }
        Command::Check { graph, condition } => {
            let graph = load(cli, graph)?;
            let text = match condition {
                CheckKind::Flat => render_flat(&curvature_report(&graph)?, format),
                kind => {
                    let condition = match kind {
                        CheckKind::A => Condition::A,
                        CheckKind::Outdeg => Condition::EqualOutDegree,
                        CheckKind::Phi => Condition::MatchingPhi,
                        _ => Condition::B,
                    };
                    render_verdict(&check_condition(&graph, condition)?, format)
                }
            };
            Ok(Output::ok(text))
        }
        Command::Verify => {
            let report = run_fixtures();
            let text = match format {
                OutputFormat::Json => pretty(&serde_json::to_value(&report).expect("plain data")),
                OutputFormat::Csv => {
                    let mut out = String::from("outcome,name,detail\n");
                    for r in &report.results {
                        writeln!(out, "{},{},{}", r.outcome, csv_field(&r.name), csv_field(&r.detail)).unwrap();
                    }
                    out
                }
                OutputFormat::Table => {
                    let mut out = String::new();
                    for r in &report.results {
                        writeln!(out, "[{}] {}: {}", r.outcome, r.name, r.detail).unwrap();
                    }
                    writeln!(
                        out,
                        "{} passed, {} warned, {} failed",
                        report.count(Outcome::Pass),
                        report.count(Outcome::Warn),
                        report.count(Outcome::Fail)
                    )
                    .unwrap();
                    out
                }
            };
            Ok(Output { text, code: if report.all_passed() { 0 } else { 1 } })
        }
    }
}

fn generate(family: &Family) -> Result<DirectedGraph, diricci::FamilyError> {
    match family {
        Family::Complete { n } => families::oriented_complete(*n),
        Family::Cycle { n } => families::directed_cycle(*n),
        Family::Product { g, h } => families::cycle_product(*g, *h),
        Family::Circulant { n, offsets } => families::circulant(*n, offsets),
        Family::Tree { shape } => families::rooted_in_tree(&match shape {
            TreeShape::Star { leaves } => TreeSpec::star(*leaves),
            TreeShape::Caterpillar { spine, legs } => TreeSpec::caterpillar(*spine, *legs),
            TreeShape::Binary { depth } => TreeSpec::full_binary(*depth),
        }),
    }
}

fn measure<S: Scalar>(graph: &DirectedGraph, x: usize, alpha: &S) -> Result<SparseMeasure<S>, Failure> {
    build_walk_measure(graph, x, alpha).map_err(|e| Failure::invalid(e.to_string()))
}

fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("plain data");
    text.push('\n');
    text
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn render_distances(distances: &DistanceMatrix<'_>, format: OutputFormat) -> String {
    let n = distances.graph().num_vertices();
    let cell = |d: Option<u32>| d.map_or_else(|| "inf".to_string(), |d| d.to_string());
    match format {
        OutputFormat::Json => {
            let rows: Vec<Vec<Value>> = (0..n)
                .map(|u| distances.row(u).iter().map(|d| d.map_or(json!("inf"), |d| json!(d))).collect())
                .collect();
            pretty(&json!({ "num_vertices": n, "distances": rows }))
        }
        OutputFormat::Csv => (0..n)
            .map(|u| distances.row(u).iter().map(|&d| cell(d)).collect::<Vec<_>>().join(",") + "\n")
            .collect(),
        OutputFormat::Table => {
            let width = (0..n)
                .flat_map(|u| distances.row(u).iter().map(|&d| cell(d).len()))
                .chain([n.saturating_sub(1).to_string().len()])
                .max()
                .unwrap_or(1);
            let mut out = format!("{:>width$}", "");
            for v in 0..n {
                write!(out, " {v:>width$}").unwrap();
            }
            out.push('\n');
            for u in 0..n {
                write!(out, "{u:>width$}").unwrap();
                for &d in distances.row(u) {
                    write!(out, " {:>width$}", cell(d)).unwrap();
                }
                out.push('\n');
            }
            out
        }
    }
}

fn render_measure<S: Scalar>(measure: &SparseMeasure<S>, x: usize, alpha: &str, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let masses: Vec<_> =
                measure.iter().map(|(v, m)| json!({ "vertex": v, "mass": m.to_string() })).collect();
            pretty(&json!({ "x": x, "alpha": alpha, "masses": masses }))
        }
        OutputFormat::Csv => {
            let mut out = String::from("vertex,mass\n");
            for (v, m) in measure.iter() {
                writeln!(out, "{v},{m}").unwrap();
            }
            out
        }
        OutputFormat::Table => measure.to_string(),
    }
}

fn render_transport<S: Scalar>(result: &TransportResult<S>, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let coupling: Vec<_> = result
                .coupling
                .iter()
                .map(|((u, v), m)| json!({ "from": u, "to": v, "mass": m.to_string() }))
                .collect();
            let potential: Vec<_> =
                result.potential.iter().map(|(z, f)| json!({ "vertex": z, "value": f.to_string() })).collect();
            pretty(&json!({ "value": result.value.to_string(), "coupling": coupling, "potential": potential }))
        }
        OutputFormat::Csv => {
            let mut out = String::from("kind,u,v,value\n");
            writeln!(out, "value,,,{}", result.value).unwrap();
            for ((u, v), m) in result.coupling.iter() {
                writeln!(out, "coupling,{u},{v},{m}").unwrap();
            }
            for (z, f) in result.potential.iter() {
                writeln!(out, "potential,{z},,{f}").unwrap();
            }
            out
        }
        OutputFormat::Table => {
            let mut out = format!("W = {}\ncoupling:\n", result.value);
            for ((u, v), m) in result.coupling.iter() {
                writeln!(out, "  {u} -> {v}: {m}").unwrap();
            }
            out.push_str("potential:\n");
            for (z, f) in result.potential.iter() {
                writeln!(out, "  f({z}) = {f}").unwrap();
            }
            out
        }
    }
}

fn render_pair(x: usize, y: usize, alpha: &str, kappa: &Rational, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => pretty(&json!({ "x": x, "y": y, "alpha": alpha, "kappa": kappa.to_string() })),
        OutputFormat::Csv => format!(
            "x,y,alpha,kappa_num,kappa_den,kappa_approx\n{x},{y},{alpha},{},{},{}\n",
            kappa.numer(),
            kappa.denom(),
            decimal(kappa)
        ),
        OutputFormat::Table => format!("{kappa}\n"),
    }
}

fn render_report(report: &CurvatureReport, alpha: &str, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut value = report.to_json();
            value["alpha"] = json!(alpha);
            pretty(&value)
        }
        OutputFormat::Csv => report.to_csv(),
        OutputFormat::Table => {
            let mut out = String::new();
            for (&(u, v), k) in &report.per_edge {
                writeln!(out, "{u} -> {v}: {k}").unwrap();
            }
            writeln!(out, "min: {}\nmax: {}", report.min, report.max).unwrap();
            match &report.constant_value {
                Some(c) => writeln!(out, "constant: {c}").unwrap(),
                None => writeln!(out, "constant: no").unwrap(),
            }
            writeln!(out, "ricci_flat: {}", report.is_ricci_flat).unwrap();
            out
        }
    }
}

fn render_bound(x: usize, y: usize, bound: &Rational, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => pretty(&json!({ "x": x, "y": y, "bound": bound.to_string() })),
        OutputFormat::Csv => format!(
            "x,y,bound_num,bound_den,bound_approx\n{x},{y},{},{},{}\n",
            bound.numer(),
            bound.denom(),
            decimal(bound)
        ),
        OutputFormat::Table => format!("{bound}\n"),
    }
}

fn render_flat(report: &CurvatureReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => pretty(&json!({
            "condition": "flat",
            "ricci_flat": report.is_ricci_flat,
            "min": report.min.to_string(),
            "max": report.max.to_string(),
        })),
        OutputFormat::Csv => format!("condition,ricci_flat,min,max\nflat,{},{},{}\n", report.is_ricci_flat, report.min, report.max),
        OutputFormat::Table => format!("ricci_flat: {}\nmin: {}\nmax: {}\n", report.is_ricci_flat, report.min, report.max),
    }
}

fn witness_line(witness: &Witness) -> String {
    let list = |vs: &[usize]| vs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    match witness {
        Witness::SharedOutNeighbors { x, y, shared } => format!("edge ({x}, {y}) shares out-neighbours [{}]", list(shared)),
        Witness::OutDegree { vertex, out_degree, expected } => {
            format!("vertex {vertex} has out-degree {out_degree}, expected {expected}")
        }
        Witness::NoBijection { u, v, matched, needed } => {
            format!("edge ({u}, {v}) matches {matched} of {needed} out-neighbours")
        }
        Witness::Bypass { x, y, z, common } => {
            format!("path {x} -> {y} -> {z} has common vertices [{}]", list(common))
        }
    }
}

fn render_verdict(verdict: &ConditionVerdict, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => pretty(&serde_json::to_value(verdict).expect("plain data")),
        OutputFormat::Csv => {
            let mut out = String::from("condition,holds,witness\n");
            if verdict.witnesses.is_empty() {
                writeln!(out, "{},{},", verdict.condition, verdict.holds).unwrap();
            }
            for w in &verdict.witnesses {
                writeln!(out, "{},{},{}", verdict.condition, verdict.holds, csv_field(&witness_line(w))).unwrap();
            }
            out
        }
        OutputFormat::Table => {
            let mut out = format!("condition: {}\nholds: {}\n", verdict.condition, verdict.holds);
            for w in &verdict.witnesses {
                writeln!(out, "  {}", witness_line(w)).unwrap();
            }
            out
        }
    }
}
