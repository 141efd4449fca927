//! Deterministic SVG drawings of regions, trees and point sets.
//!
//! The y axis points up as in the usual mathematical orientation. Styles are
//! fixed and coordinates are printed with a fixed number of decimals, so the
//! same input always yields the same bytes.

use std::fmt::Write;

use crate::cylinder::EmbeddedCylinder;
use crate::manhattan::{CenterTrace, Point2, Rect};
use crate::region::RectRegion;
use crate::scalar::Scalar;
use crate::tight_span::TightSpan;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgOptions {
    /// Pixels per unit.
    pub scale: f64,
    /// Draw the integer grid behind the figure.
    pub grid: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions { scale: 40.0, grid: true }
    }
}

const MARGIN: f64 = 1.0;
const REGION_FILL: &str = "#9ecae1";
const REGION_STROKE: &str = "#3182bd";
const TREE_STROKE: &str = "#222222";
const POINT_FILL: &str = "#d62728";
const ROOT_FILL: &str = "#2ca02c";
const GRID_STROKE: &str = "#e0e0e0";

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

struct Canvas {
    x_min: f64,
    y_max: f64,
    width: f64,
    height: f64,
    opts: SvgOptions,
    body: String,
}

impl Canvas {
    fn new<S: Scalar>(points: &[Point2<S>], opts: SvgOptions) -> Self {
        let xs = points.iter().map(|p| p.x.to_f64());
        let ys = points.iter().map(|p| p.y.to_f64());
        let (x_lo, x_hi) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        let (y_lo, y_hi) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        let (x_lo, x_hi, y_lo, y_hi) = if x_lo.is_finite() {
            (x_lo.floor(), x_hi.ceil(), y_lo.floor(), y_hi.ceil())
        } else {
            (0.0, 0.0, 0.0, 0.0)
        };
        Canvas {
            x_min: x_lo - MARGIN,
            y_max: y_hi + MARGIN,
            width: x_hi - x_lo + 2.0 * MARGIN,
            height: y_hi - y_lo + 2.0 * MARGIN,
            opts,
            body: String::new(),
        }
    }

    fn px(&self, x: f64) -> String {
        num((x - self.x_min) * self.opts.scale)
    }

    fn py(&self, y: f64) -> String {
        num((self.y_max - y) * self.opts.scale)
    }

    fn at<S: Scalar>(&self, p: &Point2<S>) -> String {
        format!("{} {}", self.px(p.x.to_f64()), self.py(p.y.to_f64()))
    }

    fn grid(&mut self) {
        if !self.opts.grid {
            return;
        }
        let mut d = String::new();
        let (x0, y_top) = (self.x_min, self.y_max);
        let (x1, y_bottom) = (self.x_min + self.width, self.y_max - self.height);
        for k in 0..=self.width as i64 {
            let x = x0 + k as f64;
            let _ = write!(d, "M{} {}V{}", self.px(x), self.py(y_top), self.py(y_bottom));
        }
        for k in 0..=self.height as i64 {
            let y = y_bottom + k as f64;
            let _ = write!(d, "M{} {}H{}", self.px(x0), self.py(y), self.px(x1));
        }
        let _ = writeln!(
            self.body,
            r#"<path class="grid" d="{d}" fill="none" stroke="{GRID_STROKE}" stroke-width="1"/>"#
        );
    }

    fn region<S: Scalar>(&mut self, region: &RectRegion<S>) {
        for b in region.boxes() {
            self.rect(b);
        }
    }

    fn rect<S: Scalar>(&mut self, b: &Rect<S>) {
        let (x0, x1) = (self.px(b.x_lo.to_f64()), self.px(b.x_hi.to_f64()));
        let (y0, y1) = (self.py(b.y_lo.to_f64()), self.py(b.y_hi.to_f64()));
        let line = if b.dimension() == 2 {
            format!(
                r#"<path class="region" d="M{x0} {y0}H{x1}V{y1}H{x0}Z" fill="{REGION_FILL}" stroke="{REGION_STROKE}" stroke-width="2"/>"#
            )
        } else {
            format!(
                r#"<path class="region" d="M{x0} {y0}L{x1} {y1}" fill="none" stroke="{REGION_STROKE}" stroke-width="4" stroke-linecap="round"/>"#
            )
        };
        let _ = writeln!(self.body, "{line}");
    }

    fn polyline<S: Scalar>(&mut self, line: &[Point2<S>]) {
        if line.len() < 2 {
            return;
        }
        let d: Vec<String> = line.iter().map(|p| self.at(p)).collect();
        let _ = writeln!(
            self.body,
            r#"<path class="tree" d="M{}" fill="none" stroke="{TREE_STROKE}" stroke-width="3" stroke-linejoin="round"/>"#,
            d.join("L")
        );
    }

    fn dot<S: Scalar>(&mut self, p: &Point2<S>) {
        let _ = writeln!(
            self.body,
            r#"<circle class="point" cx="{}" cy="{}" r="5" fill="{POINT_FILL}"/>"#,
            self.px(p.x.to_f64()),
            self.py(p.y.to_f64())
        );
    }

    fn square<S: Scalar>(&mut self, p: &Point2<S>) {
        let _ = writeln!(
            self.body,
            r#"<rect class="root" x="{}" y="{}" width="10" height="10" fill="{ROOT_FILL}"/>"#,
            num((p.x.to_f64() - self.x_min) * self.opts.scale - 5.0),
            num((self.y_max - p.y.to_f64()) * self.opts.scale - 5.0)
        );
    }

    fn finish(self) -> String {
        let (w, h) = (num(self.width * self.opts.scale), num(self.height * self.opts.scale));
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
             <rect width=\"{w}\" height=\"{h}\" fill=\"#ffffff\"/>\n{}</svg>\n",
            self.body
        )
    }
}

fn region_corners<S: Scalar>(region: &RectRegion<S>) -> Vec<Point2<S>> {
    region
        .boxes()
        .iter()
        .flat_map(|b| [Point2::new(b.x_lo.clone(), b.y_lo.clone()), Point2::new(b.x_hi.clone(), b.y_hi.clone())])
        .collect()
}

pub fn render_tight_span<S: Scalar>(span: &TightSpan<S>, opts: SvgOptions) -> String {
    let mut extent = region_corners(&span.region);
    extent.extend(span.tips.iter().cloned());
    extent.extend(span.roots.iter().cloned());
    let mut c = Canvas::new(&extent, opts);
    c.grid();
    c.region(&span.region);
    for tree in &span.trees {
        c.polyline(tree);
    }
    for r in &span.roots {
        c.square(r);
    }
    for p in &span.tips {
        c.dot(p);
    }
    c.finish()
}

pub fn render_cylinder<S: Scalar>(cyl: &EmbeddedCylinder<S>, opts: SvgOptions) -> String {
    let extent: Vec<Point2<S>> = cyl.trees.iter().flatten().cloned().collect();
    let mut c = Canvas::new(&extent, opts);
    c.grid();
    for tree in &cyl.trees {
        c.polyline(tree);
    }
    for r in &cyl.roots {
        c.square(r);
    }
    for tree in &cyl.trees {
        c.dot(&tree[0]);
    }
    c.finish()
}

/// Every layer of the center sequence; the last one drawn as roots.
pub fn render_centers<S: Scalar>(trace: &CenterTrace<S>, opts: SvgOptions) -> String {
    let extent: Vec<Point2<S>> = trace.layers.iter().flat_map(|l| l.points().iter().cloned()).collect();
    let mut c = Canvas::new(&extent, opts);
    c.grid();
    for (i, proj) in trace.projections.iter().enumerate() {
        for (k, &j) in proj.iter().enumerate() {
            let (a, b) = (&trace.layers[i].points()[k], &trace.layers[i + 1].points()[j]);
            if a != b {
                c.polyline(&[a.clone(), b.clone()]);
            }
        }
    }
    for p in trace.last().points() {
        c.square(p);
    }
    for p in trace.first().points() {
        c.dot(p);
    }
    c.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manhattan::fixtures::*;
    use crate::tight_span::assemble_tight_span;
    use crate::Rational;

    #[test]
    fn numbers() {
        assert_eq!(num(1.5), "1.5");
        assert_eq!(num(2.0), "2");
        assert_eq!(num(-0.0001), "0");
        assert_eq!(num(1.0 / 3.0), "0.333");
    }

    #[test]
    fn example_1_figure() {
        let span = assemble_tight_span(&config::<Rational>(&EXAMPLE_1)).unwrap();
        let svg = render_tight_span(&span, SvgOptions::default());
        assert_eq!(svg, render_tight_span(&span, SvgOptions::default()));
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches(r#"class="region""#).count(), span.region.boxes().len());
        assert_eq!(svg.matches(r#"class="tree""#).count(), 4);
        assert_eq!(svg.matches(r#"class="point""#).count(), 9);
        assert_eq!(svg.matches(r#"class="root""#).count(), 7);
    }

    #[test]
    fn trim_and_tree_figures() {
        let trim = assemble_tight_span(&config::<Rational>(&[(0, 0), (0, 2), (3, 0), (3, 2)])).unwrap();
        let svg = render_tight_span(&trim, SvgOptions { scale: 10.0, grid: false });
        assert_eq!(svg.matches(r#"class="tree""#).count(), 0);
        assert_eq!(svg.matches(r#"class="grid""#).count(), 0);
        assert!(svg.contains(r#"d="M10 30H40V10H10Z""#), "{svg}");

        let line = assemble_tight_span(&collinear::<Rational>()).unwrap();
        let svg = render_tight_span(&line, SvgOptions::default());
        assert_eq!(svg.matches(r#"class="region""#).count(), 0);
        assert_eq!(svg.matches(r#"class="tree""#).count(), 4);
    }
}
