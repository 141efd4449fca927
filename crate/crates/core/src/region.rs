//! Closed rectilinear regions: finite unions of closed axis-parallel boxes,
//! where boxes may degenerate to segments or points.
//!
//! Regions are kept in a canonical form so that set equality is
//! representation equality. The canonical form is computed on the cell
//! complex cut out by the box coordinates: every open 2-cell, open edge and
//! vertex is either in the region or not. Grid lines across which nothing
//! changes are dropped, then the remaining cells are re-assembled into boxes
//! deterministically (2-cells row by row, then uncovered edges, then
//! uncovered vertices).

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::manhattan::{Point2, Rect};
use crate::scalar::{self, Scalar};

/// Which sides of a box are open. A side is open when the boundary line
/// itself is excluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OpenSides {
    pub left: bool,
    pub right: bool,
    pub bottom: bool,
    pub top: bool,
}

/// Box with independently open or closed sides, e.g. `[a, b) × (c, d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfOpenBox<S> {
    pub rect: Rect<S>,
    pub open: OpenSides,
}

impl<S: Scalar> HalfOpenBox<S> {
    pub fn new(rect: Rect<S>, open: OpenSides) -> Self {
        HalfOpenBox { rect, open }
    }

    pub fn contains(&self, p: &Point2<S>) -> bool {
        let r = &self.rect;
        let lower = |v: &S, lo: &S, open: bool| if open { v > lo } else { v >= lo };
        let upper = |v: &S, hi: &S, open: bool| if open { v < hi } else { v <= hi };
        lower(&p.x, &r.x_lo, self.open.left)
            && upper(&p.x, &r.x_hi, self.open.right)
            && lower(&p.y, &r.y_lo, self.open.bottom)
            && upper(&p.y, &r.y_hi, self.open.top)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RectRegion<S> {
    boxes: Vec<Rect<S>>,
}

fn box_cmp<S: Scalar>(a: &Rect<S>, b: &Rect<S>) -> Ordering {
    scalar::cmp(&a.x_lo, &b.x_lo)
        .then_with(|| scalar::cmp(&a.y_lo, &b.y_lo))
        .then_with(|| scalar::cmp(&a.x_hi, &b.x_hi))
        .then_with(|| scalar::cmp(&a.y_hi, &b.y_hi))
}

impl<S: Scalar> RectRegion<S> {
    pub fn empty() -> Self {
        RectRegion { boxes: Vec::new() }
    }

    pub fn from_rect(r: Rect<S>) -> Self {
        RectRegion { boxes: vec![r] }
    }

    /// Union of the given boxes, normalized.
    pub fn from_boxes(boxes: Vec<Rect<S>>) -> Self {
        CellGrid::from_boxes(&boxes, &[], &[]).into_region()
    }

    /// Closure of the interior of a simple rectilinear polygon given by its
    /// vertex cycle.
    pub fn from_rectilinear_polygon(vertices: &[Point2<S>]) -> Result<Self> {
        let n = vertices.len();
        if n < 4 {
            return Err(Error::TooFewPoints { needed: 4, got: n });
        }
        let edges: Vec<(&Point2<S>, &Point2<S>)> =
            (0..n).map(|i| (&vertices[i], &vertices[(i + 1) % n])).collect();
        if let Some((a, b)) = edges.iter().find(|(a, b)| a.x != b.x && a.y != b.y) {
            return Err(Error::MalformedInput(format!("polygon edge {a}-{b} is not axis-parallel")));
        }
        let xs = sorted_unique(vertices.iter().map(|p| p.x.clone()).collect());
        let ys = sorted_unique(vertices.iter().map(|p| p.y.clone()).collect());
        let mut grid = CellGrid::new(xs, ys);
        for i in (1..grid.width()).step_by(2) {
            for j in (1..grid.height()).step_by(2) {
                let probe = grid.representative(i, j);
                let crossings = edges
                    .iter()
                    .filter(|(a, b)| a.x == b.x && a.x > probe.x && scalar::in_span(&probe.y, &a.y, &b.y))
                    .count();
                if crossings % 2 == 1 {
                    grid.fill_closed(i - 1, i + 1, j - 1, j + 1);
                }
            }
        }
        Ok(grid.into_region())
    }

    pub fn boxes(&self) -> &[Rect<S>] {
        &self.boxes
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn contains(&self, p: &Point2<S>) -> bool {
        self.boxes.iter().any(|b| b.contains(p))
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut boxes = self.boxes.clone();
        boxes.extend(other.boxes.iter().cloned());
        RectRegion::from_boxes(boxes)
    }

    /// `self ∖ hole`. The region stays closed as long as the open sides of
    /// `hole` face the interior of `self`; otherwise the closure of the
    /// difference is returned.
    pub fn subtract(&self, hole: &HalfOpenBox<S>) -> Self {
        if self.is_empty() {
            return self.clone();
        }
        let extra_x = [hole.rect.x_lo.clone(), hole.rect.x_hi.clone()];
        let extra_y = [hole.rect.y_lo.clone(), hole.rect.y_hi.clone()];
        let mut grid = CellGrid::from_boxes(&self.boxes, &extra_x, &extra_y);
        for i in 0..grid.width() {
            for j in 0..grid.height() {
                if grid.get(i, j) && hole.contains(&grid.representative(i, j)) {
                    grid.set(i, j, false);
                }
            }
        }
        grid.into_region()
    }

    /// Smallest rectangle containing the region.
    pub fn bounds(&self) -> Option<Rect<S>> {
        let first = self.boxes.first()?;
        let mut r = first.clone();
        for b in &self.boxes[1..] {
            r.x_lo = scalar::min(&r.x_lo, &b.x_lo);
            r.x_hi = scalar::max(&r.x_hi, &b.x_hi);
            r.y_lo = scalar::min(&r.y_lo, &b.y_lo);
            r.y_hi = scalar::max(&r.y_hi, &b.y_hi);
        }
        Some(r)
    }

    /// Distinct x and y coordinates used by the canonical boxes.
    pub fn coordinates(&self) -> (Vec<S>, Vec<S>) {
        let xs = self.boxes.iter().flat_map(|b| [b.x_lo.clone(), b.x_hi.clone()]).collect();
        let ys = self.boxes.iter().flat_map(|b| [b.y_lo.clone(), b.y_hi.clone()]).collect();
        (sorted_unique(xs), sorted_unique(ys))
    }
}

fn sorted_unique<S: Scalar>(mut v: Vec<S>) -> Vec<S> {
    v.sort_by(scalar::cmp);
    v.dedup();
    v
}

fn index_of<S: Scalar>(coords: &[S], v: &S) -> usize {
    coords
        .binary_search_by(|c| scalar::cmp(c, v))
        .expect("coordinate present in grid")
}

/// Cells of the arrangement cut by `xs × ys`. Cell `(i, j)` with even `i`
/// lies on the line `x = xs[i / 2]`; odd `i` is the open interval between
/// consecutive coordinates. Same for `j`.
#[derive(Debug, Clone)]
struct CellGrid<S> {
    xs: Vec<S>,
    ys: Vec<S>,
    filled: Vec<bool>,
}

impl<S: Scalar> CellGrid<S> {
    fn new(xs: Vec<S>, ys: Vec<S>) -> Self {
        let w = (2 * xs.len()).saturating_sub(1);
        let h = (2 * ys.len()).saturating_sub(1);
        CellGrid {
            xs,
            ys,
            filled: vec![false; w * h],
        }
    }

    fn from_boxes(boxes: &[Rect<S>], extra_x: &[S], extra_y: &[S]) -> Self {
        let xs = sorted_unique(
            boxes
                .iter()
                .flat_map(|b| [b.x_lo.clone(), b.x_hi.clone()])
                .chain(extra_x.iter().cloned())
                .collect(),
        );
        let ys = sorted_unique(
            boxes
                .iter()
                .flat_map(|b| [b.y_lo.clone(), b.y_hi.clone()])
                .chain(extra_y.iter().cloned())
                .collect(),
        );
        let mut grid = CellGrid::new(xs, ys);
        for b in boxes {
            let (i0, i1) = (2 * index_of(&grid.xs, &b.x_lo), 2 * index_of(&grid.xs, &b.x_hi));
            let (j0, j1) = (2 * index_of(&grid.ys, &b.y_lo), 2 * index_of(&grid.ys, &b.y_hi));
            grid.fill_closed(i0, i1, j0, j1);
        }
        grid
    }

    fn width(&self) -> usize {
        (2 * self.xs.len()).saturating_sub(1)
    }

    fn height(&self) -> usize {
        (2 * self.ys.len()).saturating_sub(1)
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.filled[i * self.height() + j]
    }

    fn get_or_empty(&self, i: isize, j: isize) -> bool {
        i >= 0
            && j >= 0
            && (i as usize) < self.width()
            && (j as usize) < self.height()
            && self.get(i as usize, j as usize)
    }

    fn set(&mut self, i: usize, j: usize, v: bool) {
        let h = self.height();
        self.filled[i * h + j] = v;
    }

    fn fill_closed(&mut self, i0: usize, i1: usize, j0: usize, j1: usize) {
        for i in i0..=i1 {
            for j in j0..=j1 {
                self.set(i, j, true);
            }
        }
    }

    fn coord(coords: &[S], k: usize) -> S {
        if k.is_multiple_of(2) {
            coords[k / 2].clone()
        } else {
            (coords[k / 2].clone() + coords[k / 2 + 1].clone()).half()
        }
    }

    fn representative(&self, i: usize, j: usize) -> Point2<S> {
        Point2::new(Self::coord(&self.xs, i), Self::coord(&self.ys, j))
    }

    /// Drops grid lines across which membership never changes.
    fn minimize(self) -> Self {
        let (w, h) = (self.width() as isize, self.height() as isize);
        let keep_x: Vec<bool> = (0..self.xs.len() as isize)
            .map(|a| {
                let c = 2 * a;
                (0..h).any(|j| {
                    let mid = self.get_or_empty(c, j);
                    mid != self.get_or_empty(c - 1, j) || mid != self.get_or_empty(c + 1, j)
                })
            })
            .collect();
        let keep_y: Vec<bool> = (0..self.ys.len() as isize)
            .map(|b| {
                let c = 2 * b;
                (0..w).any(|i| {
                    let mid = self.get_or_empty(i, c);
                    mid != self.get_or_empty(i, c - 1) || mid != self.get_or_empty(i, c + 1)
                })
            })
            .collect();
        let xs: Vec<S> = self.xs.iter().zip(&keep_x).filter(|(_, &k)| k).map(|(v, _)| v.clone()).collect();
        let ys: Vec<S> = self.ys.iter().zip(&keep_y).filter(|(_, &k)| k).map(|(v, _)| v.clone()).collect();
        // Map a new cell index to an old one with the same membership.
        let remap = |keep: &[bool]| -> Vec<usize> {
            let kept: Vec<usize> = keep.iter().enumerate().filter(|(_, &k)| k).map(|(a, _)| a).collect();
            let mut out = Vec::new();
            for (n, &a) in kept.iter().enumerate() {
                out.push(2 * a);
                if n + 1 < kept.len() {
                    out.push(2 * a + 1);
                }
            }
            out
        };
        let (mx, my) = (remap(&keep_x), remap(&keep_y));
        let mut out = CellGrid::new(xs, ys);
        for (ni, &oi) in mx.iter().enumerate() {
            for (nj, &oj) in my.iter().enumerate() {
                out.set(ni, nj, self.get(oi, oj));
            }
        }
        out
    }

    /// Adds the boundary cells of every filled cell.
    fn close(mut self) -> Self {
        let (w, h) = (self.width(), self.height());
        for i in 0..w {
            for j in 0..h {
                if self.get(i, j) && (i % 2 == 1 || j % 2 == 1) {
                    let (i0, i1) = if i % 2 == 1 { (i - 1, i + 1) } else { (i, i) };
                    let (j0, j1) = if j % 2 == 1 { (j - 1, j + 1) } else { (j, j) };
                    self.fill_closed(i0, i1, j0, j1);
                }
            }
        }
        self
    }

    fn into_region(self) -> RectRegion<S> {
        let g = self.close().minimize();
        let (w, h) = (g.width(), g.height());
        let mut covered = vec![false; w * h];
        let cover = |covered: &mut [bool], (i0, i1, j0, j1): (usize, usize, usize, usize)| {
            for i in i0..=i1 {
                for j in j0..=j1 {
                    covered[i * h + j] = true;
                }
            }
        };
        let mut cells: Vec<(usize, usize, usize, usize)> = Vec::new();

        // 2-cells: horizontal runs per row, stacked while identical.
        let mut active: Vec<(usize, usize, usize, usize)> = Vec::new();
        for j in (1..h).step_by(2) {
            let mut runs = Vec::new();
            let mut i = 1;
            while i < w {
                if g.get(i, j) {
                    let start = i;
                    while i + 2 < w && g.get(i + 2, j) {
                        i += 2;
                    }
                    runs.push((start, i));
                }
                i += 2;
            }
            let mut next_active = Vec::new();
            for &(a, b) in &runs {
                match active.iter().position(|&(x0, x1, _, y1)| x0 == a && x1 == b && y1 + 2 == j) {
                    Some(k) => {
                        let (x0, x1, y0, _) = active.remove(k);
                        next_active.push((x0, x1, y0, j));
                    }
                    None => next_active.push((a, b, j, j)),
                }
            }
            cells.append(&mut active);
            active = next_active;
        }
        cells.append(&mut active);
        let mut boxes: Vec<(usize, usize, usize, usize)> = cells
            .into_iter()
            .map(|(i0, i1, j0, j1)| (i0 - 1, i1 + 1, j0 - 1, j1 + 1))
            .collect();
        for &b in &boxes {
            cover(&mut covered, b);
        }

        // Uncovered horizontal then vertical edges, merged along their line.
        let mut segments = Vec::new();
        for j in (0..h).step_by(2) {
            let mut i = 1;
            while i < w {
                if g.get(i, j) && !covered[i * h + j] {
                    let start = i;
                    while i + 2 < w && g.get(i + 2, j) && !covered[(i + 2) * h + j] {
                        i += 2;
                    }
                    segments.push((start - 1, i + 1, j, j));
                }
                i += 2;
            }
        }
        for i in (0..w).step_by(2) {
            let mut j = 1;
            while j < h {
                if g.get(i, j) && !covered[i * h + j] {
                    let start = j;
                    while j + 2 < h && g.get(i, j + 2) && !covered[i * h + j + 2] {
                        j += 2;
                    }
                    segments.push((i, i, start - 1, j + 1));
                }
                j += 2;
            }
        }
        for &b in &segments {
            cover(&mut covered, b);
        }
        boxes.extend(segments);

        for i in (0..w).step_by(2) {
            for j in (0..h).step_by(2) {
                if g.get(i, j) && !covered[i * h + j] {
                    boxes.push((i, i, j, j));
                }
            }
        }

        let mut rects: Vec<Rect<S>> = boxes
            .into_iter()
            .map(|(i0, i1, j0, j1)| Rect {
                x_lo: g.xs[i0 / 2].clone(),
                x_hi: g.xs[i1 / 2].clone(),
                y_lo: g.ys[j0 / 2].clone(),
                y_hi: g.ys[j1 / 2].clone(),
            })
            .collect();
        rects.sort_by(box_cmp);
        RectRegion { boxes: rects }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type Q = BigRational;

    fn r(x_lo: i64, x_hi: i64, y_lo: i64, y_hi: i64) -> Rect<Q> {
        Rect::spanning(Q::from_int(x_lo), Q::from_int(x_hi), Q::from_int(y_lo), Q::from_int(y_hi))
    }

    fn p(x: i64, y: i64) -> Point2<Q> {
        Point2::from_ints(x, y)
    }

    fn hole(rect: Rect<Q>, left: bool, right: bool, bottom: bool, top: bool) -> HalfOpenBox<Q> {
        HalfOpenBox::new(rect, OpenSides { left, right, bottom, top })
    }

    #[test]
    fn subtract_leaves_boundary_segment() {
        let region = RectRegion::from_rect(r(-1, 5, 0, 2));
        let out = region.subtract(&hole(r(3, 5, 0, 2), true, false, true, false));
        assert_eq!(out, RectRegion::from_boxes(vec![r(-1, 3, 0, 2), r(3, 5, 0, 0)]));
        assert_eq!(out.boxes(), &[r(-1, 3, 0, 2), r(3, 5, 0, 0)]);
    }

    #[test]
    fn subtract_disjoint_is_noop() {
        let region = RectRegion::from_boxes(vec![r(0, 2, 0, 2), r(2, 4, 0, 0)]);
        let out = region.subtract(&hole(r(10, 12, 10, 12), false, false, false, false));
        assert_eq!(out, region);
    }

    #[test]
    fn subtract_lower_left_leaves_two_edges() {
        let region = RectRegion::from_rect(r(0, 1, 0, 1));
        let out = region.subtract(&hole(r(0, 1, 0, 1), false, true, false, true));
        assert_eq!(out, RectRegion::from_boxes(vec![r(1, 1, 0, 1), r(0, 1, 1, 1)]));
        assert!(out.contains(&p(1, 0)) && out.contains(&p(0, 1)));
        assert!(!out.contains(&p(0, 0)));
    }

    #[test]
    fn normalization_is_representation_independent() {
        let a = RectRegion::from_boxes(vec![r(0, 2, 0, 1)]);
        let b = RectRegion::from_boxes(vec![r(0, 1, 0, 1), r(1, 2, 0, 1), r(1, 1, 0, 1)]);
        assert_eq!(a, b);
        let c = RectRegion::from_boxes(vec![r(0, 2, 0, 1), r(0, 1, 0, 0), r(5, 6, 3, 3), r(5, 5, 3, 3)]);
        assert_eq!(c.boxes(), &[r(0, 2, 0, 1), r(5, 6, 3, 3)]);
    }

    #[test]
    fn polygon_interiors() {
        let l_shape = [p(0, 0), p(2, 0), p(2, 1), p(1, 1), p(1, 2), p(0, 2)];
        let region = RectRegion::from_rectilinear_polygon(&l_shape).unwrap();
        assert_eq!(region, RectRegion::from_boxes(vec![r(0, 2, 0, 1), r(0, 1, 1, 2)]));
        assert!(!region.contains(&Point2::new(Q::new(3.into(), 2.into()), Q::new(3.into(), 2.into()))));
        assert!(RectRegion::from_rectilinear_polygon(&[p(0, 0), p(1, 1), p(0, 1), p(1, 0)]).is_err());
    }

    fn arb_box() -> impl Strategy<Value = Rect<Q>> {
        (-4i64..4, 0i64..3, -4i64..4, 0i64..3).prop_map(|(x, w, y, h)| r(x, x + w, y, y + h))
    }

    fn grid_points() -> Vec<Point2<Q>> {
        let half = Q::new(1.into(), 2.into());
        let mut out = Vec::new();
        for i in -12..=16 {
            for j in -12..=16 {
                out.push(Point2::new(Q::from_int(i) * half.clone(), Q::from_int(j) * half.clone()));
            }
        }
        out
    }

    proptest! {
        #[test]
        fn canonical_form_preserves_membership_and_is_order_free(
            mut boxes in prop::collection::vec(arb_box(), 1..5),
            cut in arb_box(),
            open in (any::<bool>(), any::<bool>(), any::<bool>(), any::<bool>()),
        ) {
            let region = RectRegion::from_boxes(boxes.clone());
            boxes.reverse();
            prop_assert_eq!(&RectRegion::from_boxes(boxes.clone()), &region);
            for q in grid_points() {
                prop_assert_eq!(region.contains(&q), boxes.iter().any(|b| b.contains(&q)));
            }
            let h = HalfOpenBox::new(cut, OpenSides { left: open.0, right: open.1, bottom: open.2, top: open.3 });
            let diff = region.subtract(&h);
            for q in grid_points() {
                let expected = region.contains(&q) && !h.contains(&q);
                // the difference may only gain boundary points of the hole through closure
                if expected {
                    prop_assert!(diff.contains(&q));
                } else if diff.contains(&q) {
                    prop_assert!(region.contains(&q) && h.contains(&q));
                }
            }
            prop_assert_eq!(RectRegion::from_boxes(diff.boxes().to_vec()), diff.clone());
            for (i, a) in diff.boxes().iter().enumerate() {
                for (j, b) in diff.boxes().iter().enumerate() {
                    prop_assert!(i == j || !a.contains_rect(b));
                }
            }
        }
    }
}
