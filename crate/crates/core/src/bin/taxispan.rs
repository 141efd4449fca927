use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use taxispan::cylinder::{build_cylinder, embed_center_cylinder, metric_quotient};
use taxispan::io::{self, Input};
use taxispan::manhattan::center_sequence;
use taxispan::metric::trim_sequence;
use taxispan::oracle::{default_step, validate_tight_span};
use taxispan::svg::{render_centers, render_cylinder, render_tight_span, SvgOptions};
use taxispan::tight_span::assemble_tight_span;
use taxispan::{Config, Error};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    /// Trimming sequence of a point set or distance matrix.
    Trim,
    /// Metric center sequence of a point set.
    Centers,
    /// Trimming cylinder and its metric quotient.
    Cylinder,
    /// Tight span of a point set.
    Tightspan,
    /// Tight span certified by the grid oracle.
    Validate,
    /// SVG drawing of the tight span.
    Render,
}

/// Exact tight spans of finite sets in the Manhattan plane.
#[derive(Debug, Parser)]
#[command(name = "taxispan", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON ({"points": ...} or {"matrix": ..., "labels": ...}) or CSV of x,y rows.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long = "out", value_name = "FILE")]
    output: Option<PathBuf>,
    /// Grid pitch for validate, e.g. 1/2; defaults to half the coordinate gcd.
    #[arg(long, value_name = "Q", allow_hyphen_values = true)]
    step: Option<String>,
    /// Merge repeated points instead of rejecting them.
    #[arg(long)]
    dedupe: bool,
    /// Also write an SVG drawing.
    #[arg(long, value_name = "FILE")]
    svg: Option<PathBuf>,
    /// Depth of the cylinder quotient; defaults to the stabilization depth.
    #[arg(long, value_name = "K")]
    depth: Option<usize>,
    /// SVG pixels per unit.
    #[arg(long, default_value_t = 40.0)]
    scale: f64,
    /// Leave the coordinate grid out of SVG output.
    #[arg(long)]
    no_grid: bool,
}

enum Failure {
    Input(String),
    Internal(String),
    Validation,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

fn points(input: Input) -> Result<Config, Failure> {
    match input {
        Input::Points(c) => Ok(c),
        Input::Metric(_) => Err(Failure::Input("this command needs a point set, not a matrix".into())),
    }
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let text = fs::read_to_string(&cli.input)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", cli.input.display())))?;
    let input = io::parse_input(&text, cli.dedupe)?;
    let opts = SvgOptions {
        scale: cli.scale,
        grid: !cli.no_grid,
    };
    let mut svg = None;
    let mut failed = false;
    let doc: Value = match cli.command {
        Command::Trim => {
            let metric = match input {
                Input::Points(c) => c.induced_metric(),
                Input::Metric(m) => m,
            };
            io::trim_json(&trim_sequence(&metric)?)
        }
        Command::Centers => {
            let trace = center_sequence(&points(input)?)?;
            svg = Some(render_centers(&trace, opts));
            io::centers_json(&trace)
        }
        Command::Cylinder => match input {
            Input::Metric(m) => {
                let g = build_cylinder(&trim_sequence(&m)?);
                let quotient = metric_quotient(&g, &m, cli.depth.unwrap_or(g.depth()))?;
                json!({ "graph": io::cylinder_graph_json(&g), "quotient": io::quotient_json(&quotient) })
            }
            Input::Points(c) => {
                let trace = center_sequence(&c)?;
                let base = c.induced_metric();
                let g = build_cylinder(&trace);
                let quotient = metric_quotient(&g, &base, cli.depth.unwrap_or(g.depth()))?;
                let embedded = embed_center_cylinder(&trace);
                svg = Some(render_cylinder(&embedded, opts));
                json!({
                    "graph": io::cylinder_graph_json(&g),
                    "quotient": io::quotient_json(&quotient),
                    "embedded": io::embedded_cylinder_json(&embedded),
                })
            }
        },
        Command::Tightspan | Command::Render => {
            let span = assemble_tight_span(&points(input)?)?;
            svg = Some(render_tight_span(&span, opts));
            if cli.command == Command::Render {
                let drawing = svg.take().expect("rendered");
                return match &cli.svg {
                    Some(p) => write_out(Some(p), &drawing),
                    None => write_out(cli.output.as_ref(), &drawing),
                };
            }
            io::tight_span_json(&span)
        }
        Command::Validate => {
            let x = points(input)?;
            let step = match &cli.step {
                Some(s) => io::parse_positive(s)?,
                None => default_step(&x),
            };
            let span = assemble_tight_span(&x)?;
            let report = validate_tight_span(&x, &span, &step)?;
            failed = !report.passed;
            svg = Some(render_tight_span(&span, opts));
            io::report_json(&report, &step)
        }
    };
    write_out(cli.output.as_ref(), &io::to_text(&doc))?;
    if let (Some(path), Some(drawing)) = (&cli.svg, svg) {
        write_out(Some(path), &drawing)?;
    }
    if failed {
        return Err(Failure::Validation);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are input errors; exit code 2 is reserved
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("taxispan: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("taxispan: internal error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Validation) => {
            eprintln!("taxispan: validation failed");
            ExitCode::from(3)
        }
    }
}
