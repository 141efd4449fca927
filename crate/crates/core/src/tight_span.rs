//! Tight spans of finite subsets of the Manhattan plane.
//!
//! For a trim set `A` the tight span is the smallest closed geodesically
//! convex region containing `A`. It is obtained from the minimal rectangle by
//! carving a staircase out of each corner that does not belong to `A`. The
//! corners are processed bottom-left, top-left, top-right, bottom-right, and
//! the staircase vertices added by one corner stay in `A` for the next ones;
//! this is what keeps bridges between otherwise separated blocks.
//!
//! A general set is first reduced to its stabilized metric center set; the
//! tight span is the region of that set with the center trees attached at
//! their roots.

use crate::cylinder::{embed_center_cylinder, EmbeddedCylinder};
use crate::error::{Error, Result};
use crate::manhattan::{center_sequence, is_trim_planar, minimal_rectangle, PlanarConfig, Point2, Rect};
use crate::region::{HalfOpenBox, OpenSides, RectRegion};
use crate::scalar::{self, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corner {
    BottomLeft,
    TopLeft,
    TopRight,
    BottomRight,
}

impl Corner {
    /// Carving order.
    pub const ORDER: [Corner; 4] = [
        Corner::BottomLeft,
        Corner::TopLeft,
        Corner::TopRight,
        Corner::BottomRight,
    ];

    fn is_left(self) -> bool {
        matches!(self, Corner::BottomLeft | Corner::TopLeft)
    }

    fn is_bottom(self) -> bool {
        matches!(self, Corner::BottomLeft | Corner::BottomRight)
    }

    pub fn anchor<S: Scalar>(self, r: &Rect<S>) -> Point2<S> {
        let x = if self.is_left() { &r.x_lo } else { &r.x_hi };
        let y = if self.is_bottom() { &r.y_lo } else { &r.y_hi };
        Point2::new(x.clone(), y.clone())
    }

    pub fn name(self) -> &'static str {
        match self {
            Corner::BottomLeft => "bottom-left",
            Corner::TopLeft => "top-left",
            Corner::TopRight => "top-right",
            Corner::BottomRight => "bottom-right",
        }
    }

    /// `[a_x, b_x) × [a_y, d_y)` for the bottom-left corner and its mirror
    /// images: closed on the anchor's sides, open towards `b` and `d`.
    fn hole<S: Scalar>(self, a: &Point2<S>, b_x: &S, d_y: &S) -> HalfOpenBox<S> {
        let rect = Rect::spanning(a.x.clone(), b_x.clone(), a.y.clone(), d_y.clone());
        let open = OpenSides {
            left: !self.is_left(),
            right: self.is_left(),
            bottom: !self.is_bottom(),
            top: self.is_bottom(),
        };
        HalfOpenBox::new(rect, open)
    }
}

/// Runs one corner procedure on `region` with the current point set
/// `points`, returning the carved region and the enlarged point set.
pub fn carve_corner<S: Scalar>(
    region: &RectRegion<S>,
    points: &PlanarConfig<S>,
    corner: Corner,
    bounds: &Rect<S>,
) -> Result<(RectRegion<S>, PlanarConfig<S>)> {
    let mut region = region.clone();
    let mut pts: Vec<Point2<S>> = points.points().to_vec();
    let mut a = corner.anchor(bounds);
    let limit = 2 * pts.len() + 2;
    let mut steps = 0;
    while !pts.contains(&a) {
        steps += 1;
        if steps > limit {
            return Err(Error::MalformedInput(format!(
                "{} corner procedure did not terminate",
                corner.name()
            )));
        }
        // closest point on the anchor's horizontal line, towards the interior
        let b = pts
            .iter()
            .filter(|p| p.y == a.y && if corner.is_left() { p.x >= a.x } else { p.x <= a.x })
            .min_by(|p, q| scalar::cmp(&(p.x.clone() - a.x.clone()).abs(), &(q.x.clone() - a.x.clone()).abs()))
            .cloned()
            .ok_or_else(|| {
                Error::MalformedInput(format!("{} corner: no point on the line through {a}", corner.name()))
            })?;
        // nearest point beyond the line inside the strip between a and b
        let d = pts
            .iter()
            .filter(|p| {
                scalar::in_span(&p.x, &a.x, &b.x) && if corner.is_bottom() { p.y > a.y } else { p.y < a.y }
            })
            .min_by(|p, q| {
                scalar::cmp(&(p.y.clone() - a.y.clone()).abs(), &(q.y.clone() - a.y.clone()).abs())
                    .then_with(|| p.lex_cmp(q))
            })
            .cloned()
            .ok_or_else(|| {
                Error::MalformedInput(format!("{} corner: empty strip above {a}", corner.name()))
            })?;
        region = region.subtract(&corner.hole(&a, &b.x, &d.y));
        let added = Point2::new(b.x.clone(), d.y.clone());
        if !pts.contains(&added) {
            pts.push(added);
        }
        a = Point2::new(a.x.clone(), d.y.clone());
    }
    Ok((region, PlanarConfig::dedup(pts)?))
}

/// Region of the tight span of a trim set with at least four points.
pub fn tight_span_region<S: Scalar>(trim: &PlanarConfig<S>) -> Result<RectRegion<S>> {
    Ok(carve_all(trim)?.0)
}

/// Like [`tight_span_region`], also returning the final point set including
/// the staircase vertices added by the corner procedures.
pub fn carve_all<S: Scalar>(trim: &PlanarConfig<S>) -> Result<(RectRegion<S>, PlanarConfig<S>)> {
    if trim.len() < 4 {
        return Err(Error::TooFewPoints {
            needed: 4,
            got: trim.len(),
        });
    }
    if !is_trim_planar(trim) {
        return Err(Error::NotTrim);
    }
    let bounds = minimal_rectangle(trim)?;
    let mut region = RectRegion::from_rect(bounds.clone());
    let mut pts = trim.clone();
    for corner in Corner::ORDER {
        (region, pts) = carve_corner(&region, &pts, corner, &bounds)?;
    }
    Ok((region, pts))
}

/// Tight span of a finite planar set: a rectilinear region (empty when the
/// span is a tree) with trees attached at the roots.
#[derive(Debug, Clone, PartialEq)]
pub struct TightSpan<S> {
    pub is_tree: bool,
    pub region: RectRegion<S>,
    /// One polyline per input point, from the point (tip) to its root.
    pub trees: Vec<Vec<Point2<S>>>,
    pub roots: Vec<Point2<S>>,
    pub tips: Vec<Point2<S>>,
    pub center_layers: Vec<Vec<Point2<S>>>,
    pub pendant: Vec<Vec<S>>,
}

impl<S: Scalar> TightSpan<S> {
    /// Distinct non-degenerate tree segments, each oriented away from its tip
    /// and listed once.
    pub fn tree_edges(&self) -> Vec<(Point2<S>, Point2<S>)> {
        EmbeddedCylinder::edges_of(&self.trees)
    }

    /// Membership in the region or on a (straight) tree segment.
    pub fn contains(&self, p: &Point2<S>) -> bool {
        self.region.contains(p)
            || self.roots.contains(p)
            || self.tree_edges().iter().any(|(u, v)| on_segment(p, u, v))
    }
}

/// Whether `p` lies on the straight segment `[u, v]`.
pub fn on_segment<S: Scalar>(p: &Point2<S>, u: &Point2<S>, v: &Point2<S>) -> bool {
    let cross = (p.x.clone() - u.x.clone()) * (v.y.clone() - u.y.clone())
        - (p.y.clone() - u.y.clone()) * (v.x.clone() - u.x.clone());
    cross.is_zero() && scalar::in_span(&p.x, &u.x, &v.x) && scalar::in_span(&p.y, &u.y, &v.y)
}

pub fn assemble_tight_span<S: Scalar>(x: &PlanarConfig<S>) -> Result<TightSpan<S>> {
    let trace = center_sequence(x)?;
    let cylinder = embed_center_cylinder(&trace);
    let root_set = trace.last();
    let is_tree = root_set.len() == 1;
    let region = if is_tree {
        RectRegion::empty()
    } else {
        tight_span_region(root_set)?
    };
    Ok(TightSpan {
        is_tree,
        region,
        trees: cylinder.trees,
        roots: cylinder.roots,
        tips: x.points().to_vec(),
        center_layers: trace.layers.iter().map(|l| l.points().to_vec()).collect(),
        pendant: trace.pendant,
    })
}
