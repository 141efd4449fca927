//! Input parsing and canonical JSON output.
//!
//! Scalars are read from JSON numbers, integer or decimal strings and
//! `"p/q"` strings, always exactly. On output a scalar is a plain JSON
//! integer when it is whole and a `"p/q"` string otherwise, so documents
//! survive tools that parse numbers as floats.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::{self, Deserializer};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::cylinder::{CylinderGraph, EmbeddedCylinder, QuotientGraph};
use crate::error::{Error, Result};
use crate::manhattan::{CenterTrace, PlanarConfig, Point2, Rect};
use crate::metric::{FiniteMetric, TrimTrace};
use crate::oracle::ValidationReport;
use crate::region::RectRegion;
use crate::tight_span::TightSpan;
use crate::Rational;

/// Parsed input document.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Points(PlanarConfig<Rational>),
    Metric(FiniteMetric<Rational>),
}

/// Parses `-3`, `2.75`, `-1e-2`, `7/4`.
pub fn parse_scalar(text: &str) -> Option<Rational> {
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        return (!q.is_zero()).then(|| Rational::new(p, q));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(k) => (&t[..k], t[k + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !(int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())) {
        return None;
    }
    let all: BigInt = format!("{int}{frac}").parse().ok()?;
    let shift = exponent - i32::try_from(frac.len()).ok()?;
    let ten = BigInt::from(10);
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    let mut v = if shift >= 0 {
        Rational::from_integer(all * scale)
    } else {
        Rational::new(all, scale)
    };
    if neg {
        v = -v;
    }
    Some(v)
}

pub fn format_scalar(v: &Rational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn scalar_json(v: &Rational) -> Value {
    if v.is_integer() {
        Value::Number(v.numer().to_string().parse().expect("integer literal"))
    } else {
        Value::String(format_scalar(v))
    }
}

fn scalar_from_json(v: &Value) -> Option<Rational> {
    match v {
        Value::Number(n) => parse_scalar(&n.to_string()),
        Value::String(s) => parse_scalar(s),
        _ => None,
    }
}

struct JsonScalar(Rational);

impl<'de> Deserialize<'de> for JsonScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        scalar_from_json(&v)
            .map(JsonScalar)
            .ok_or_else(|| de::Error::custom(format!("expected a number or \"p/q\" string, found {v}")))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    points: Option<Vec<(JsonScalar, JsonScalar)>>,
    matrix: Option<Vec<Vec<JsonScalar>>>,
    labels: Option<Vec<String>>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string().split(" at line").next().unwrap_or_default().to_string(),
    }
}

fn points_config(points: Vec<Point2<Rational>>, dedupe: bool) -> Result<PlanarConfig<Rational>> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    if dedupe {
        PlanarConfig::dedup(points)
    } else {
        PlanarConfig::new(points)
    }
}

pub fn parse_json_input(text: &str, dedupe: bool) -> Result<Input> {
    let raw: RawInput = serde_json::from_str(text).map_err(json_error)?;
    match (raw.points, raw.matrix) {
        (Some(points), None) => {
            if raw.labels.is_some() {
                return Err(Error::InvalidDocument("labels only apply to a matrix".into()));
            }
            let pts = points.into_iter().map(|(x, y)| Point2::new(x.0, y.0)).collect();
            Ok(Input::Points(points_config(pts, dedupe)?))
        }
        (None, Some(matrix)) => {
            let n = matrix.len();
            let labels = raw.labels.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
            let dist = matrix
                .into_iter()
                .map(|row| row.into_iter().map(|s| s.0).collect())
                .collect();
            Ok(Input::Metric(FiniteMetric::new(labels, dist)?))
        }
        _ => Err(Error::InvalidDocument(
            "expected exactly one of \"points\" or \"matrix\"".into(),
        )),
    }
}

/// `x,y` rows; an optional header row and `#` comment lines are skipped.
pub fn parse_csv_input(text: &str, dedupe: bool) -> Result<Input> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut points = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            column: 1,
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 2 {
            return Err(Error::Parse {
                line,
                column: 1,
                message: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let parsed: Vec<Option<Rational>> = record.iter().map(parse_scalar).collect();
        if row == 0 && parsed.iter().all(Option::is_none) {
            continue;
        }
        let mut coords = Vec::with_capacity(2);
        for (k, (field, value)) in record.iter().zip(parsed).enumerate() {
            coords.push(value.ok_or_else(|| Error::Parse {
                line,
                column: k + 1,
                message: format!("not a number: {field:?}"),
            })?);
        }
        let y = coords.pop().expect("two fields");
        let x = coords.pop().expect("two fields");
        points.push(Point2::new(x, y));
    }
    Ok(Input::Points(points_config(points, dedupe)?))
}

/// JSON when the first non-blank character is `{`, CSV otherwise.
pub fn parse_input(text: &str, dedupe: bool) -> Result<Input> {
    if text.trim_start().starts_with('{') {
        parse_json_input(text, dedupe)
    } else {
        parse_csv_input(text, dedupe)
    }
}

pub fn point_json(p: &Point2<Rational>) -> Value {
    json!([scalar_json(&p.x), scalar_json(&p.y)])
}

fn points_json(ps: &[Point2<Rational>]) -> Value {
    Value::Array(ps.iter().map(point_json).collect())
}

fn scalars_json(vs: &[Rational]) -> Value {
    Value::Array(vs.iter().map(scalar_json).collect())
}

pub fn region_json(r: &RectRegion<Rational>) -> Value {
    let boxes = r
        .boxes()
        .iter()
        .map(|b| json!([scalar_json(&b.x_lo), scalar_json(&b.y_lo), scalar_json(&b.x_hi), scalar_json(&b.y_hi)]))
        .collect();
    json!({ "boxes": Value::Array(boxes) })
}

pub fn metric_json(m: &FiniteMetric<Rational>) -> Value {
    json!({
        "labels": m.labels(),
        "matrix": Value::Array(m.matrix().iter().map(|row| scalars_json(row)).collect()),
    })
}

pub fn tight_span_json(span: &TightSpan<Rational>) -> Value {
    json!({
        "is_tree": span.is_tree,
        "region": region_json(&span.region),
        "trees": Value::Array(span.trees.iter().map(|t| points_json(t)).collect()),
        "roots": points_json(&span.roots),
        "tips": points_json(&span.tips),
        "center_layers": Value::Array(span.center_layers.iter().map(|l| points_json(l)).collect()),
        "pendant": Value::Array(span.pendant.iter().map(|p| scalars_json(p)).collect()),
    })
}

pub fn trim_json(trace: &TrimTrace<Rational>) -> Value {
    let layers: Vec<Value> = trace
        .layers
        .iter()
        .map(|l| {
            json!({
                "labels": l.metric.labels(),
                "matrix": metric_json(&l.metric)["matrix"].clone(),
                "pendant": scalars_json(&l.pendant),
                "classes": l.classes,
                "projection": l.projection,
                "closure_pairs": l.closure_pairs,
            })
        })
        .collect();
    json!({
        "sizes": trace.sizes(),
        "trim": trace.layers.len() == 1,
        "layers": layers,
    })
}

pub fn centers_json(trace: &CenterTrace<Rational>) -> Value {
    json!({
        "depth": trace.depth(),
        "sizes": trace.sizes(),
        "layers": Value::Array(trace.layers.iter().map(|l| points_json(l.points())).collect()),
        "projections": trace.projections,
        "pendant": Value::Array(trace.pendant.iter().map(|p| scalars_json(p)).collect()),
    })
}

pub fn cylinder_graph_json(g: &CylinderGraph<Rational>) -> Value {
    json!({
        "sizes": g.sizes,
        "targets": g.targets,
        "weights": Value::Array(g.weights.iter().map(|w| scalars_json(w)).collect()),
    })
}

pub fn quotient_json(q: &QuotientGraph<Rational>) -> Value {
    json!({
        "classes": q.classes,
        "edges": Value::Array(q.edges.iter().map(|(a, b, w)| json!([a, b, scalar_json(w)])).collect()),
        "total_length": scalar_json(&q.total_length()),
    })
}

pub fn embedded_cylinder_json(c: &EmbeddedCylinder<Rational>) -> Value {
    json!({
        "trees": Value::Array(c.trees.iter().map(|t| points_json(t)).collect()),
        "roots": points_json(&c.roots),
        "edges": Value::Array(c.edges().iter().map(|(u, v)| json!([point_json(u), point_json(v)])).collect()),
    })
}

pub fn report_json(report: &ValidationReport<Rational>, step: &Rational) -> Value {
    json!({
        "passed": report.passed,
        "step": scalar_json(step),
        "extremality_failures": points_json(&report.extremality_failures),
        "completeness_failures": points_json(&report.completeness_failures),
        "convexity_failures": points_json(&report.convexity_failures),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::InvalidDocument(format!("missing field {key}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::InvalidDocument(format!("{what} is not an array")))
}

fn scalar_value(v: &Value, what: &str) -> Result<Rational> {
    scalar_from_json(v).ok_or_else(|| Error::InvalidDocument(format!("{what}: bad scalar {v}")))
}

fn point_value(v: &Value) -> Result<Point2<Rational>> {
    match array(v, "point")?.as_slice() {
        [x, y] => Ok(Point2::new(scalar_value(x, "x")?, scalar_value(y, "y")?)),
        _ => Err(Error::InvalidDocument(format!("point {v} does not have two coordinates"))),
    }
}

fn point_list(v: &Value) -> Result<Vec<Point2<Rational>>> {
    array(v, "point list")?.iter().map(point_value).collect()
}

/// Reads back the output of [`tight_span_json`].
pub fn parse_tight_span_json(text: &str) -> Result<TightSpan<Rational>> {
    let v: Value = serde_json::from_str(text).map_err(json_error)?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::InvalidDocument("top level is not an object".into()))?;
    let is_tree = field(obj, "is_tree")?
        .as_bool()
        .ok_or_else(|| Error::InvalidDocument("is_tree is not a boolean".into()))?;
    let region_obj = field(obj, "region")?
        .as_object()
        .ok_or_else(|| Error::InvalidDocument("region is not an object".into()))?;
    let boxes = array(field(region_obj, "boxes")?, "boxes")?
        .iter()
        .map(|b| match array(b, "box")?.as_slice() {
            [x0, y0, x1, y1] => Ok(Rect::spanning(
                scalar_value(x0, "box")?,
                scalar_value(x1, "box")?,
                scalar_value(y0, "box")?,
                scalar_value(y1, "box")?,
            )),
            _ => Err(Error::InvalidDocument(format!("box {b} does not have four entries"))),
        })
        .collect::<Result<Vec<_>>>()?;
    let nested = |key: &str| -> Result<Vec<Vec<Point2<Rational>>>> {
        array(field(obj, key)?, key)?.iter().map(point_list).collect()
    };
    let pendant = array(field(obj, "pendant")?, "pendant")?
        .iter()
        .map(|row| array(row, "pendant")?.iter().map(|s| scalar_value(s, "pendant")).collect())
        .collect::<Result<Vec<Vec<Rational>>>>()?;
    Ok(TightSpan {
        is_tree,
        region: if boxes.is_empty() {
            RectRegion::empty()
        } else {
            RectRegion::from_boxes(boxes)
        },
        trees: nested("trees")?,
        roots: point_list(field(obj, "roots")?)?,
        tips: point_list(field(obj, "tips")?)?,
        center_layers: nested("center_layers")?,
        pendant,
    })
}

/// Exact value of a `--step` style argument; must be positive.
pub fn parse_positive(text: &str) -> Result<Rational> {
    match parse_scalar(text) {
        Some(v) if v > Rational::zero() => Ok(v),
        _ => Err(Error::BadStep(format!("{text:?} is not a positive number"))),
    }
}
