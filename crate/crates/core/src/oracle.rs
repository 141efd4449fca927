//! Independent certification of tight spans.
//!
//! A point `p` of the plane gives the function `f = d₁(p, ·)` on `X`. The
//! tight span consists of the extremal such functions, those where every
//! `x` has a partner `y` with `f(x) + f(y) = d(x, y)`. Because tree arcs can
//! be drawn along any monotone staircase, results are compared with the
//! extremal set up to equality of distance vectors ("twins"), not as point
//! sets.
//!
//! All checks run on a grid of pitch `step` over the minimal rectangle of
//! `X`. Grid arithmetic is done in integer grid units; only the twin search
//! for points without a grid twin falls back to exact scalar arithmetic.

use std::collections::{HashSet, VecDeque};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::manhattan::{l1_distance, minimal_rectangle, PlanarConfig, Point2, Rect};
use crate::scalar::{self, Scalar};
use crate::tight_span::TightSpan;
use crate::Rational;

/// `d₁(p, x)` for every `x` of the configuration, in configuration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DistanceVector<S>(pub Vec<S>);

pub fn distance_vector<S: Scalar>(x: &PlanarConfig<S>, p: &Point2<S>) -> DistanceVector<S> {
    DistanceVector(x.points().iter().map(|q| l1_distance(p, q)).collect())
}

fn extremal_vector<S: Scalar>(points: &[Point2<S>], f: &[S]) -> bool {
    (0..points.len()).all(|i| {
        (0..points.len()).any(|j| f[i].clone() + f[j].clone() == l1_distance(&points[i], &points[j]))
    })
}

pub fn is_extremal<S: Scalar>(x: &PlanarConfig<S>, p: &Point2<S>) -> bool {
    extremal_vector(x.points(), &distance_vector(x, p).0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport<S> {
    /// Output grid points that are not extremal.
    pub extremality_failures: Vec<Point2<S>>,
    /// Extremal grid points without a twin in the output.
    pub completeness_failures: Vec<Point2<S>>,
    /// Region grid points with some grid geodesic longer than the L1 distance.
    pub convexity_failures: Vec<Point2<S>>,
    pub passed: bool,
}

/// Largest grid cap accepted by [`validate_tight_span`].
pub const MAX_GRID_POINTS: usize = 4_000_000;

/// Half the gcd of all coordinate gaps of `x` (1/2 for integer input).
pub fn default_step(x: &PlanarConfig<Rational>) -> Rational {
    let mut g = Rational::zero();
    for axis in [0, 1] {
        let coord = |p: &Point2<Rational>| if axis == 0 { p.x.clone() } else { p.y.clone() };
        let Some(first) = x.points().first().map(coord) else {
            continue;
        };
        for p in x.points() {
            g = rational_gcd(&g, &(coord(p) - first.clone()).abs());
        }
    }
    if g.is_zero() {
        g = Rational::one();
    }
    g / Rational::from_int(2)
}

fn rational_gcd(a: &Rational, b: &Rational) -> Rational {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let den = a.denom().lcm(b.denom());
    let an = a.numer() * (&den / a.denom());
    let bn = b.numer() * (&den / b.denom());
    Rational::new(an.gcd(&bn), den)
}

struct Grid<S> {
    origin: Point2<S>,
    step: S,
    width: usize,
    height: usize,
}

impl<S: Scalar> Grid<S> {
    fn new(bounds: &Rect<S>, step: &S) -> Result<Self> {
        if *step <= S::zero() {
            return Err(Error::BadStep(format!("step {step} is not positive")));
        }
        let count = |span: S| {
            (span / step.clone())
                .to_exact_int()
                .and_then(|n| usize::try_from(n).ok())
                .ok_or_else(|| Error::BadStep(format!("step {step} does not divide the bounding box")))
        };
        let width = count(bounds.x_hi.clone() - bounds.x_lo.clone())? + 1;
        let height = count(bounds.y_hi.clone() - bounds.y_lo.clone())? + 1;
        if width.saturating_mul(height) > MAX_GRID_POINTS {
            return Err(Error::BadStep(format!("step {step} gives a grid of {width}x{height} points")));
        }
        Ok(Grid {
            origin: Point2::new(bounds.x_lo.clone(), bounds.y_lo.clone()),
            step: step.clone(),
            width,
            height,
        })
    }

    fn index(&self, p: &Point2<S>) -> Result<(i64, i64)> {
        let f = |v: S, o: &S| {
            ((v - o.clone()) / self.step.clone())
                .to_exact_int()
                .ok_or_else(|| Error::BadStep(format!("step {} does not divide the gaps at {p}", self.step)))
        };
        Ok((f(p.x.clone(), &self.origin.x)?, f(p.y.clone(), &self.origin.y)?))
    }

    /// Point at grid coordinates `(2i + di) / 2, (2j + dj) / 2`, i.e. with an
    /// optional half-step offset.
    fn point(&self, i: usize, j: usize, di: bool, dj: bool) -> Point2<S> {
        let coord = |o: &S, k: usize, half: bool| {
            let mut v = o.clone() + self.step.clone() * S::from_int(k as i64);
            if half {
                v = v + self.step.half();
            }
            v
        };
        Point2::new(coord(&self.origin.x, i, di), coord(&self.origin.y, j, dj))
    }
}

/// Checks extremality, completeness and grid geodesic convexity of `span`
/// against the tight span of `x`.
pub fn validate_tight_span<S: Scalar>(
    x: &PlanarConfig<S>,
    span: &TightSpan<S>,
    step: &S,
) -> Result<ValidationReport<S>> {
    let bounds = minimal_rectangle(x)?;
    let grid = Grid::new(&bounds, step)?;
    let sites: Vec<(i64, i64)> = x.points().iter().map(|p| grid.index(p)).collect::<Result<_>>()?;
    let edges = span.tree_edges();
    let vector = |i: i64, j: i64| -> Vec<i64> {
        sites.iter().map(|&(a, b)| (i - a).abs() + (j - b).abs()).collect()
    };
    let site_dist: Vec<Vec<i64>> = sites
        .iter()
        .map(|&(a, b)| sites.iter().map(|&(c, d)| (a - c).abs() + (b - d).abs()).collect())
        .collect();
    let extremal = |f: &[i64]| {
        (0..f.len()).all(|k| (0..f.len()).any(|l| f[k] + f[l] == site_dist[k][l]))
    };

    let mut extremality_failures = Vec::new();
    let mut in_region = vec![false; grid.width * grid.height];
    let mut output_vectors: HashSet<Vec<i64>> = HashSet::new();
    let mut extremal_points = Vec::new();
    for i in 0..grid.width {
        for j in 0..grid.height {
            let p = grid.point(i, j, false, false);
            let f = vector(i as i64, j as i64);
            let ext = extremal(&f);
            let region = span.region.contains(&p);
            in_region[i * grid.height + j] = region;
            let output = region
                || span.roots.contains(&p)
                || edges.iter().any(|(u, v)| crate::tight_span::on_segment(&p, u, v));
            if output {
                if !ext {
                    extremality_failures.push(p.clone());
                }
                output_vectors.insert(f.clone());
            }
            if ext {
                extremal_points.push((p, f));
            }
        }
    }

    let mut completeness_failures = Vec::new();
    for (p, f) in extremal_points {
        if output_vectors.contains(&f) {
            continue;
        }
        let target: Vec<S> = f.iter().map(|&v| S::from_int(v) * step.clone()).collect();
        if find_twin(x.points(), span, &edges, &target).is_none() {
            completeness_failures.push(p);
        }
    }

    let convexity_failures = convexity_failures(&grid, span, &in_region);
    let passed =
        extremality_failures.is_empty() && completeness_failures.is_empty() && convexity_failures.is_empty();
    Ok(ValidationReport {
        extremality_failures,
        completeness_failures,
        convexity_failures,
        passed,
    })
}

fn convexity_failures<S: Scalar>(grid: &Grid<S>, span: &TightSpan<S>, in_region: &[bool]) -> Vec<Point2<S>> {
    let (w, h) = (grid.width, grid.height);
    let id = |i: usize, j: usize| i * h + j;
    // neighbours joined when the midpoint of the grid edge is in the region
    let mut right = vec![false; w * h];
    let mut up = vec![false; w * h];
    for i in 0..w {
        for j in 0..h {
            if !in_region[id(i, j)] {
                continue;
            }
            if i + 1 < w && in_region[id(i + 1, j)] {
                right[id(i, j)] = span.region.contains(&grid.point(i, j, true, false));
            }
            if j + 1 < h && in_region[id(i, j + 1)] {
                up[id(i, j)] = span.region.contains(&grid.point(i, j, false, true));
            }
        }
    }
    let cells: Vec<(usize, usize)> = (0..w)
        .flat_map(|i| (0..h).map(move |j| (i, j)))
        .filter(|&(i, j)| in_region[id(i, j)])
        .collect();
    let mut failures = Vec::new();
    let mut dist = vec![usize::MAX; w * h];
    let mut queue = VecDeque::new();
    for &(si, sj) in &cells {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[id(si, sj)] = 0;
        queue.push_back((si, sj));
        while let Some((i, j)) = queue.pop_front() {
            let d = dist[id(i, j)] + 1;
            let mut visit = |a: usize, b: usize, queue: &mut VecDeque<(usize, usize)>| {
                if dist[id(a, b)] == usize::MAX {
                    dist[id(a, b)] = d;
                    queue.push_back((a, b));
                }
            };
            if right[id(i, j)] {
                visit(i + 1, j, &mut queue);
            }
            if i > 0 && right[id(i - 1, j)] {
                visit(i - 1, j, &mut queue);
            }
            if up[id(i, j)] {
                visit(i, j + 1, &mut queue);
            }
            if j > 0 && up[id(i, j - 1)] {
                visit(i, j - 1, &mut queue);
            }
        }
        let bad = cells
            .iter()
            .any(|&(i, j)| dist[id(i, j)] != si.abs_diff(i) + sj.abs_diff(j));
        if bad {
            failures.push(grid.point(si, sj, false, false));
        }
    }
    failures
}

/// A point of the output whose distance vector is exactly `target`.
pub fn find_twin<S: Scalar>(
    x: &[Point2<S>],
    span: &TightSpan<S>,
    edges: &[(Point2<S>, Point2<S>)],
    target: &[S],
) -> Option<Point2<S>> {
    span.region
        .boxes()
        .iter()
        .find_map(|b| twin_in_box(x, b, target))
        .or_else(|| edges.iter().find_map(|(u, v)| twin_on_segment(x, u, v, target)))
        .or_else(|| span.roots.iter().find(|r| matches_vector(x, r, target)).cloned())
}

fn matches_vector<S: Scalar>(x: &[Point2<S>], p: &Point2<S>, target: &[S]) -> bool {
    x.iter().zip(target).all(|(q, f)| l1_distance(p, q) == *f)
}

/// Consecutive closed pieces of `[lo, hi]` cut at the given coordinates.
fn pieces<S: Scalar>(lo: &S, hi: &S, cuts: impl Iterator<Item = S>) -> Vec<(S, S)> {
    let mut inner: Vec<S> = cuts.filter(|c| c > lo && c < hi).collect();
    inner.sort_by(scalar::cmp);
    inner.dedup();
    let mut bounds = vec![lo.clone()];
    bounds.extend(inner);
    bounds.push(hi.clone());
    bounds.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect()
}

/// On a piece where no site coordinate lies strictly inside, every distance
/// is linear: `d(q, x) = σ(q_x − x_x) + τ(q_y − x_y)`, so each equation
/// reads `q_x ± q_y = c`.
fn twin_in_box<S: Scalar>(x: &[Point2<S>], b: &Rect<S>, target: &[S]) -> Option<Point2<S>> {
    for (x_lo, x_hi) in pieces(&b.x_lo, &b.x_hi, x.iter().map(|p| p.x.clone())) {
        for (y_lo, y_hi) in pieces(&b.y_lo, &b.y_hi, x.iter().map(|p| p.y.clone())) {
            let mut sum: Option<S> = None;
            let mut diff: Option<S> = None;
            let mut consistent = true;
            for (p, f) in x.iter().zip(target) {
                let sigma = if p.x <= x_lo { S::one() } else { -S::one() };
                let tau = if p.y <= y_lo { S::one() } else { -S::one() };
                let s = sigma.clone() * tau;
                let c = sigma * f.clone() + p.x.clone() + s.clone() * p.y.clone();
                let slot = if s.is_positive() { &mut sum } else { &mut diff };
                match slot {
                    Some(existing) if *existing != c => consistent = false,
                    _ => *slot = Some(c),
                }
            }
            if !consistent {
                continue;
            }
            let q = match (sum, diff) {
                (Some(cp), Some(cm)) => Point2::new(
                    (cp.clone() + cm.clone()).half(),
                    (cp - cm).half(),
                ),
                (Some(cp), None) => {
                    let qx = scalar::clamp(&(cp.clone() - y_lo.clone()), &x_lo, &x_hi);
                    Point2::new(qx.clone(), cp - qx)
                }
                (None, Some(cm)) => {
                    let qx = scalar::clamp(&(cm.clone() + y_lo.clone()), &x_lo, &x_hi);
                    Point2::new(qx.clone(), qx - cm)
                }
                (None, None) => Point2::new(x_lo.clone(), y_lo.clone()),
            };
            let piece = Rect::spanning(x_lo.clone(), x_hi.clone(), y_lo.clone(), y_hi.clone());
            if piece.contains(&q) && matches_vector(x, &q, target) {
                return Some(q);
            }
        }
    }
    None
}

/// Same idea along the straight segment `u + t (v − u)`, `t ∈ [0, 1]`.
fn twin_on_segment<S: Scalar>(x: &[Point2<S>], u: &Point2<S>, v: &Point2<S>, target: &[S]) -> Option<Point2<S>> {
    let dx = v.x.clone() - u.x.clone();
    let dy = v.y.clone() - u.y.clone();
    let mut cuts = Vec::new();
    for p in x {
        if !dx.is_zero() {
            cuts.push((p.x.clone() - u.x.clone()) / dx.clone());
        }
        if !dy.is_zero() {
            cuts.push((p.y.clone() - u.y.clone()) / dy.clone());
        }
    }
    for (t0, t1) in pieces(&S::zero(), &S::one(), cuts.into_iter()) {
        let mid = u.lerp(v, &(t0.clone() + t1.clone()).half());
        // slope of each distance on this piece
        let mut t = t0.clone();
        for (p, f) in x.iter().zip(target) {
            let sx = if p.x <= mid.x { S::one() } else { -S::one() };
            let sy = if p.y <= mid.y { S::one() } else { -S::one() };
            let slope = sx * dx.clone() + sy * dy.clone();
            if !slope.is_zero() {
                let start = l1_distance(&u.lerp(v, &t0), p);
                t = t0.clone() + (f.clone() - start) / slope;
                break;
            }
        }
        if t < t0 || t > t1 {
            continue;
        }
        let q = u.lerp(v, &t);
        if matches_vector(x, &q, target) {
            return Some(q);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manhattan::fixtures::*;
    use crate::region::{HalfOpenBox, OpenSides, RectRegion};
    use crate::tight_span::assemble_tight_span;

    type Q = Rational;

    fn p(x: i64, y: i64) -> Point2<Q> {
        Point2::from_ints(x, y)
    }

    fn half() -> Q {
        Q::new(1.into(), 2.into())
    }

    #[test]
    fn extremality_examples() {
        let two = config::<Q>(&[(0, 0), (2, 2)]);
        assert!(is_extremal(&two, &p(1, 0)));
        assert!(is_extremal(&two, &p(0, 0)));
        assert!(!is_extremal(&two, &p(3, 0)));
        let trim = config::<Q>(&[(-5, -3), (-5, 1), (-3, 2), (-2, -1), (1, 2), (2, -2), (2, -3)]);
        assert!(!is_extremal(&trim, &p(-4, 2)));
        assert!(is_extremal(&trim, &p(-4, 1)));
    }

    #[test]
    fn default_steps() {
        assert_eq!(default_step(&config(&EXAMPLE_1)), half());
        let x = PlanarConfig::new(vec![
            Point2::new(Q::new(1.into(), 3.into()), Q::zero()),
            Point2::new(Q::one(), Q::new(2.into(), 3.into())),
        ])
        .unwrap();
        assert_eq!(default_step(&x), Q::new(1.into(), 3.into()));
    }

    #[test]
    fn fixtures_pass() {
        for pts in [&EXAMPLE_1[..], &EXAMPLE_4[..]] {
            let x = config::<Q>(pts);
            let span = assemble_tight_span(&x).unwrap();
            let report = validate_tight_span(&x, &span, &half()).unwrap();
            assert!(report.passed, "{report:?}");
        }
    }

    #[test]
    fn deleted_cell_fails_completeness() {
        let x = config::<Q>(&EXAMPLE_1);
        let mut span = assemble_tight_span(&x).unwrap();
        let hole = HalfOpenBox::new(
            Rect::spanning(Q::from_int(-5), Q::from_int(-4), Q::zero(), Q::one()),
            OpenSides {
                right: true,
                bottom: true,
                ..Default::default()
            },
        );
        span.region = span.region.subtract(&hole);
        let report = validate_tight_span(&x, &span, &half()).unwrap();
        assert!(!report.passed);
        assert!(report.completeness_failures.contains(&Point2::new(
            Q::from_int(-9) * half(),
            half()
        )));
    }

    #[test]
    fn extra_cell_fails_extremality() {
        let x = config::<Q>(&EXAMPLE_1);
        let mut span = assemble_tight_span(&x).unwrap();
        span.region = span
            .region
            .union(&RectRegion::from_rect(Rect::spanning(Q::from_int(-5), Q::from_int(-4), Q::one(), Q::from_int(2))));
        let report = validate_tight_span(&x, &span, &half()).unwrap();
        assert!(report.extremality_failures.contains(&p(-5, 2)));
    }

    #[test]
    fn two_point_collapse() {
        let x = config::<Q>(&[(0, 0), (3, 2)]);
        let span = assemble_tight_span(&x).unwrap();
        let edges = span.tree_edges();
        let bounds = minimal_rectangle(&x).unwrap();
        for i in -2..=8 {
            for j in -2..=6 {
                let q = Point2::new(Q::from_int(i) * half(), Q::from_int(j) * half());
                assert_eq!(is_extremal(&x, &q), bounds.contains(&q));
                if bounds.contains(&q) {
                    let twin = find_twin(x.points(), &span, &edges, &distance_vector(&x, &q).0).unwrap();
                    assert!(crate::tight_span::on_segment(&twin, &p(0, 0), &p(3, 2)));
                }
            }
        }
        assert!(validate_tight_span(&x, &span, &half()).unwrap().passed);
    }

    #[test]
    fn bad_steps() {
        let x = config::<Q>(&EXAMPLE_1);
        let span = assemble_tight_span(&x).unwrap();
        assert!(matches!(validate_tight_span(&x, &span, &Q::zero()), Err(Error::BadStep(_))));
        assert!(matches!(
            validate_tight_span(&x, &span, &Q::from_int(2)),
            Err(Error::BadStep(_))
        ));
    }
}
