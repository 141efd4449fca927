//! Geometry of finite subsets of the Manhattan plane.
//!
//! Trimming a planar set under the L1 metric can be carried out inside the
//! plane: every point is replaced by its metric center, the nearest point of
//! the secondary rectangle spanned by the second smallest and second largest
//! coordinates. The center set is isometric to the abstract trimming, so
//! iterating it (the metric center sequence) realizes the whole trimming
//! sequence geometrically.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::metric::FiniteMetric;
use crate::scalar::{self, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point2<S> {
    pub x: S,
    pub y: S,
}

impl<S> Point2<S> {
    pub const fn new(x: S, y: S) -> Self {
        Point2 { x, y }
    }
}

impl<S: Scalar> Point2<S> {
    pub fn from_ints(x: i64, y: i64) -> Self {
        Point2::new(S::from_int(x), S::from_int(y))
    }

    /// Lexicographic order, x first.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        scalar::cmp(&self.x, &other.x).then_with(|| scalar::cmp(&self.y, &other.y))
    }

    pub fn midpoint(&self, other: &Self) -> Self {
        Point2::new(
            (self.x.clone() + other.x.clone()).half(),
            (self.y.clone() + other.y.clone()).half(),
        )
    }

    /// `(1 - t) * self + t * other`.
    pub fn lerp(&self, other: &Self, t: &S) -> Self {
        let s = S::one() - t.clone();
        Point2::new(
            s.clone() * self.x.clone() + t.clone() * other.x.clone(),
            s * self.y.clone() + t.clone() * other.y.clone(),
        )
    }
}

impl<S: fmt::Display> fmt::Display for Point2<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Closed axis-parallel rectangle; segments and points are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rect<S> {
    pub x_lo: S,
    pub x_hi: S,
    pub y_lo: S,
    pub y_hi: S,
}

impl<S: Scalar> Rect<S> {
    /// Builds the rectangle spanned by the two ranges, ordering each pair.
    pub fn spanning(xa: S, xb: S, ya: S, yb: S) -> Self {
        let (x_lo, x_hi) = if xa <= xb { (xa, xb) } else { (xb, xa) };
        let (y_lo, y_hi) = if ya <= yb { (ya, yb) } else { (yb, ya) };
        Rect {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
        }
    }

    pub fn point(p: &Point2<S>) -> Self {
        Rect {
            x_lo: p.x.clone(),
            x_hi: p.x.clone(),
            y_lo: p.y.clone(),
            y_hi: p.y.clone(),
        }
    }

    /// Rectangle with `a` and `b` as opposite corners.
    pub fn from_corners(a: &Point2<S>, b: &Point2<S>) -> Self {
        Rect::spanning(a.x.clone(), b.x.clone(), a.y.clone(), b.y.clone())
    }

    pub fn contains(&self, p: &Point2<S>) -> bool {
        self.x_lo <= p.x && p.x <= self.x_hi && self.y_lo <= p.y && p.y <= self.y_hi
    }

    pub fn contains_rect(&self, other: &Rect<S>) -> bool {
        self.x_lo <= other.x_lo
            && other.x_hi <= self.x_hi
            && self.y_lo <= other.y_lo
            && other.y_hi <= self.y_hi
    }

    /// Nearest point of the rectangle (coordinatewise clamp).
    pub fn clamp(&self, p: &Point2<S>) -> Point2<S> {
        Point2::new(
            scalar::clamp(&p.x, &self.x_lo, &self.x_hi),
            scalar::clamp(&p.y, &self.y_lo, &self.y_hi),
        )
    }

    /// Corners in the order bottom-left, top-left, top-right, bottom-right.
    pub fn corners(&self) -> [Point2<S>; 4] {
        [
            Point2::new(self.x_lo.clone(), self.y_lo.clone()),
            Point2::new(self.x_lo.clone(), self.y_hi.clone()),
            Point2::new(self.x_hi.clone(), self.y_hi.clone()),
            Point2::new(self.x_hi.clone(), self.y_lo.clone()),
        ]
    }

    /// 0 for a point, 1 for a segment, 2 for a proper rectangle.
    pub fn dimension(&self) -> u8 {
        u8::from(self.x_lo < self.x_hi) + u8::from(self.y_lo < self.y_hi)
    }
}

pub fn l1_distance<S: Scalar>(p: &Point2<S>, q: &Point2<S>) -> S {
    (p.x.clone() - q.x.clone()).abs() + (p.y.clone() - q.y.clone()).abs()
}

/// Menger betweenness in the L1 plane: coordinatewise interval membership.
pub fn is_between<S: Scalar>(m: &Point2<S>, a: &Point2<S>, b: &Point2<S>) -> bool {
    let coordinatewise = scalar::in_span(&m.x, &a.x, &b.x) && scalar::in_span(&m.y, &a.y, &b.y);
    debug_assert_eq!(
        coordinatewise,
        l1_distance(a, b) == l1_distance(a, m) + l1_distance(m, b)
    );
    coordinatewise
}

/// Distinct points of the plane in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarConfig<S> {
    points: Vec<Point2<S>>,
}

impl<S: Scalar> PlanarConfig<S> {
    /// Sorts the points; duplicates are rejected.
    pub fn new(mut points: Vec<Point2<S>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        points.sort_by(Point2::lex_cmp);
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoint(w[0].to_string()));
        }
        Ok(PlanarConfig { points })
    }

    /// Sorts the points and merges duplicates.
    pub fn dedup(mut points: Vec<Point2<S>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        points.sort_by(Point2::lex_cmp);
        points.dedup();
        Ok(PlanarConfig { points })
    }

    pub fn from_ints(coords: &[(i64, i64)]) -> Result<Self> {
        PlanarConfig::new(coords.iter().map(|&(x, y)| Point2::from_ints(x, y)).collect())
    }

    pub fn points(&self) -> &[Point2<S>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, p: &Point2<S>) -> Option<usize> {
        self.points.binary_search_by(|q| q.lex_cmp(p)).ok()
    }

    pub fn contains(&self, p: &Point2<S>) -> bool {
        self.index_of(p).is_some()
    }

    /// The L1 distance matrix, labeled by coordinates.
    pub fn induced_metric(&self) -> FiniteMetric<S> {
        let labels = self.points.iter().map(|p| p.to_string()).collect();
        let dist = self
            .points
            .iter()
            .map(|p| self.points.iter().map(|q| l1_distance(p, q)).collect())
            .collect();
        FiniteMetric::new(labels, dist).expect("L1 distances of distinct points form a metric")
    }

    fn sorted_coords(&self) -> (Vec<S>, Vec<S>) {
        let mut xs: Vec<S> = self.points.iter().map(|p| p.x.clone()).collect();
        let mut ys: Vec<S> = self.points.iter().map(|p| p.y.clone()).collect();
        xs.sort_by(scalar::cmp);
        ys.sort_by(scalar::cmp);
        (xs, ys)
    }
}

/// `R_X`: the smallest axis-parallel rectangle containing every point.
pub fn minimal_rectangle<S: Scalar>(x: &PlanarConfig<S>) -> Result<Rect<S>> {
    let (xs, ys) = x.sorted_coords();
    match (xs.first(), xs.last(), ys.first(), ys.last()) {
        (Some(x_lo), Some(x_hi), Some(y_lo), Some(y_hi)) => Ok(Rect {
            x_lo: x_lo.clone(),
            x_hi: x_hi.clone(),
            y_lo: y_lo.clone(),
            y_hi: y_hi.clone(),
        }),
        _ => Err(Error::EmptyInput),
    }
}

/// `S_X = [x₂, x_{n-1}] × [y₂, y_{n-1}]` over the sorted coordinate
/// multisets (ties kept). For two points the bounds cross and the rectangle
/// they span is returned.
pub fn secondary_rectangle<S: Scalar>(x: &PlanarConfig<S>) -> Result<Rect<S>> {
    let n = x.len();
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    let (xs, ys) = x.sorted_coords();
    Ok(Rect::spanning(
        xs[1].clone(),
        xs[n - 2].clone(),
        ys[1].clone(),
        ys[n - 2].clone(),
    ))
}

/// The metric center of `a`: its nearest point in the secondary rectangle.
pub fn metric_center_point<S: Scalar>(x: &PlanarConfig<S>, a: &Point2<S>) -> Result<Point2<S>> {
    if x.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: x.len(),
        });
    }
    if !x.contains(a) {
        return Err(Error::PointNotInConfig(a.to_string()));
    }
    Ok(secondary_rectangle(x)?.clamp(a))
}

/// The center set `m(X)` and the index map sending each point to its center.
pub fn metric_center_set<S: Scalar>(x: &PlanarConfig<S>) -> Result<(PlanarConfig<S>, Vec<usize>)> {
    let images: Vec<Point2<S>> = match x.len() {
        0 => return Err(Error::EmptyInput),
        1 => return Ok((x.clone(), vec![0])),
        2 => {
            let mid = x.points[0].midpoint(&x.points[1]);
            vec![mid.clone(), mid]
        }
        _ => {
            let s = secondary_rectangle(x)?;
            x.points.iter().map(|p| s.clamp(p)).collect()
        }
    };
    let centers = PlanarConfig::dedup(images.clone())?;
    let map = images
        .iter()
        .map(|p| centers.index_of(p).expect("image is a center"))
        .collect();
    Ok((centers, map))
}

/// Planar trim criterion: at least four points with every edge of `R_X`
/// carrying two of them, or a single point.
pub fn is_trim_planar<S: Scalar>(x: &PlanarConfig<S>) -> bool {
    match x.len() {
        0 => false,
        1 => true,
        2 | 3 => false,
        _ => {
            let r = minimal_rectangle(x).expect("non-empty");
            let count = |f: &dyn Fn(&Point2<S>) -> bool| x.points.iter().filter(|p| f(p)).count();
            count(&|p| p.x == r.x_lo) >= 2
                && count(&|p| p.x == r.x_hi) >= 2
                && count(&|p| p.y == r.y_lo) >= 2
                && count(&|p| p.y == r.y_hi) >= 2
        }
    }
}

/// The metric center sequence `X, m(X), m²(X), …` up to stabilization.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterTrace<S> {
    pub layers: Vec<PlanarConfig<S>>,
    /// `projections[i][k]` is the index in layer `i + 1` of the center of
    /// point `k` of layer `i`.
    pub projections: Vec<Vec<usize>>,
    /// `pendant[i][k]` is the L1 distance from point `k` of layer `i` to its
    /// center; all zero on the final layer.
    pub pendant: Vec<Vec<S>>,
}

impl<S: Scalar> CenterTrace<S> {
    pub fn first(&self) -> &PlanarConfig<S> {
        &self.layers[0]
    }

    pub fn last(&self) -> &PlanarConfig<S> {
        self.layers.last().expect("trace is never empty")
    }

    /// Number of center steps taken before stabilization.
    pub fn depth(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.layers.iter().map(PlanarConfig::len).collect()
    }

    /// Image of point `k` of layer 0 in layer `i`.
    pub fn trajectory_index(&self, k: usize, i: usize) -> usize {
        self.projections[..i].iter().fold(k, |idx, proj| proj[idx])
    }

    /// `[x, m(x), m²(x), …]` for point `k` of layer 0.
    pub fn trajectory(&self, k: usize) -> Vec<Point2<S>> {
        let mut idx = k;
        let mut out = vec![self.layers[0].points[k].clone()];
        for (i, proj) in self.projections.iter().enumerate() {
            idx = proj[idx];
            out.push(self.layers[i + 1].points[idx].clone());
        }
        out
    }
}

pub fn center_sequence<S: Scalar>(x: &PlanarConfig<S>) -> Result<CenterTrace<S>> {
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    let cap = x.len() + 1;
    let mut layers = vec![x.clone()];
    let mut projections = Vec::new();
    let mut pendant = Vec::new();
    for _ in 0..=cap {
        let current = layers.last().expect("non-empty");
        if is_trim_planar(current) {
            pendant.push(vec![S::zero(); current.len()]);
            return Ok(CenterTrace {
                layers,
                projections,
                pendant,
            });
        }
        let (next, map) = metric_center_set(current)?;
        pendant.push(
            current
                .points
                .iter()
                .zip(&map)
                .map(|(p, &j)| l1_distance(p, &next.points[j]))
                .collect(),
        );
        projections.push(map);
        layers.push(next);
    }
    Err(Error::MalformedInput(format!(
        "center sequence did not stabilize within {cap} steps"
    )))
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;
    type P = Point2<Q>;

    fn p(x: i64, y: i64) -> P {
        Point2::from_ints(x, y)
    }

    fn rect(x_lo: i64, x_hi: i64, y_lo: i64, y_hi: i64) -> Rect<Q> {
        Rect::spanning(Q::from_int(x_lo), Q::from_int(x_hi), Q::from_int(y_lo), Q::from_int(y_hi))
    }

    #[test]
    fn distances() {
        assert_eq!(l1_distance(&p(0, 0), &p(0, 0)), Q::from_int(0));
        assert_eq!(l1_distance(&p(-5, 1), &p(-3, 4)), Q::from_int(5));
        assert_eq!(l1_distance(&p(5, -5), &p(7, -4)), Q::from_int(3));
    }

    #[test]
    fn betweenness() {
        assert!(is_between(&p(1, 1), &p(1, 1), &p(4, -2)));
        assert!(is_between(&p(0, 0), &p(-1, -1), &p(1, 1)));
        assert!(!is_between(&p(2, 0), &p(0, 0), &p(1, 1)));
    }

    #[test]
    fn rectangles_of_example_1() {
        let x = config::<Q>(&EXAMPLE_1);
        assert_eq!(minimal_rectangle(&x).unwrap(), rect(-5, 7, -5, 4));
        assert_eq!(secondary_rectangle(&x).unwrap(), rect(-5, 5, -4, 2));
        assert_eq!(minimal_rectangle(&config::<Q>(&EXAMPLE_4)).unwrap(), rect(-5, 8, -5, 3));
        assert_eq!(minimal_rectangle(&config::<Q>(&[(3, 2)])).unwrap(), rect(3, 3, 2, 2));
        assert_eq!(
            secondary_rectangle(&config::<Q>(&[(0, 5), (3, 1), (7, 2)])).unwrap(),
            rect(3, 3, 2, 2)
        );
        assert!(matches!(
            secondary_rectangle(&config::<Q>(&[(0, 0)])),
            Err(Error::TooFewPoints { .. })
        ));
    }

    #[test]
    fn centers_of_example_1() {
        let x = config::<Q>(&EXAMPLE_1);
        assert_eq!(metric_center_point(&x, &p(-3, 4)).unwrap(), p(-3, 2));
        assert_eq!(metric_center_point(&x, &p(7, -4)).unwrap(), p(5, -4));
        assert_eq!(metric_center_point(&x, &p(-2, -1)).unwrap(), p(-2, -1));
        assert!(matches!(
            metric_center_point(&x, &p(0, 0)),
            Err(Error::PointNotInConfig(_))
        ));
        let (m, map) = metric_center_set(&x).unwrap();
        let expected = config::<Q>(&[
            (-5, -3),
            (-5, 1),
            (-3, 2),
            (-2, -1),
            (1, 2),
            (2, -2),
            (4, -3),
            (5, -4),
        ]);
        assert_eq!(m, expected);
        let target = m.index_of(&p(5, -4)).unwrap();
        assert_eq!(map[x.index_of(&p(5, -5)).unwrap()], target);
        assert_eq!(map[x.index_of(&p(7, -4)).unwrap()], target);
    }

    #[test]
    fn small_center_sets() {
        let line = collinear::<Q>();
        assert_eq!(metric_center_point(&line, &p(1, 0)).unwrap(), p(2, 0));
        let (m, map) = metric_center_set(&config::<Q>(&[(0, 0), (4, 2)])).unwrap();
        assert_eq!(m.points(), &[p(2, 1)]);
        assert_eq!(map, vec![0, 0]);
        let single = config::<Q>(&[(3, 3)]);
        assert_eq!(metric_center_set(&single).unwrap(), (single.clone(), vec![0]));
        let square = config::<Q>(&[(0, 0), (0, 1), (1, 0), (1, 1)]);
        let (m, map) = metric_center_set(&square).unwrap();
        assert_eq!(m, square);
        assert_eq!(map, vec![0, 1, 2, 3]);
    }

    #[test]
    fn sequences() {
        let t = center_sequence(&config::<Q>(&EXAMPLE_1)).unwrap();
        assert_eq!(t.depth(), 3);
        assert_eq!(
            t.last(),
            &config::<Q>(&[(-5, -3), (-5, 1), (-3, 2), (-2, -1), (1, 2), (2, -2), (2, -3)])
        );
        assert_eq!(
            secondary_rectangle(&t.layers[2]).unwrap(),
            rect(-5, 2, -3, 2)
        );
        let t4 = center_sequence(&config::<Q>(&EXAMPLE_4)).unwrap();
        assert_eq!(t4.depth(), 2);
        assert_eq!(
            t4.last(),
            &config::<Q>(&[(-1, 0), (-1, 2), (3, 2), (4, -3), (5, -3), (5, -1)])
        );
        assert_eq!(center_sequence(&collinear::<Q>()).unwrap().sizes(), vec![5, 3, 1]);
    }

    #[test]
    fn trim_criterion() {
        assert!(!is_trim_planar(&config::<Q>(&EXAMPLE_1)));
        let t = center_sequence(&config::<Q>(&EXAMPLE_1)).unwrap();
        assert!(is_trim_planar(t.last()));
        assert!(!is_trim_planar(&config::<Q>(&[(0, 0), (1, 5), (2, 2)])));
        assert!(!is_trim_planar(&config::<Q>(&[(0, 0), (1, 5)])));
        assert!(is_trim_planar(&config::<Q>(&[(1, 5)])));
    }

    #[test]
    fn duplicates_rejected_or_merged() {
        let pts = vec![p(1, 1), p(0, 0), p(1, 1)];
        assert!(matches!(PlanarConfig::new(pts.clone()), Err(Error::DuplicatePoint(_))));
        assert_eq!(PlanarConfig::dedup(pts).unwrap().points(), &[p(0, 0), p(1, 1)]);
    }

    #[test]
    fn trajectories() {
        let t = center_sequence(&config::<Q>(&EXAMPLE_1)).unwrap();
        let k = t.first().index_of(&p(5, -5)).unwrap();
        assert_eq!(t.trajectory(k), vec![p(5, -5), p(5, -4), p(4, -3), p(2, -3)]);
        assert_eq!(t.pendant[0][k], Q::from_int(1));
    }
}
