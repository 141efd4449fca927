//! Trimming cylinders.
//!
//! The cylinder of a trimming (or metric center) sequence is the layered
//! graph whose layer `i` is the `i`-th trimmed space and whose edges join
//! each vertex to its class in the next layer, weighted by the pendant
//! length. Turaev's pseudo-metric `ρ` extends the base metric to points on
//! these edges.

use crate::disjoint_sets::DisjointSets;
use crate::error::{Error, Result};
use crate::manhattan::{CenterTrace, Point2};
use crate::metric::{FiniteMetric, TrimTrace};
use crate::scalar::{self, Scalar};

/// Anything that looks like a sequence of layers with projections and
/// pendant lengths.
pub trait LayeredTrace<S> {
    fn layer_sizes(&self) -> Vec<usize>;
    /// Projection from layer `i` into layer `i + 1`.
    fn projection(&self, i: usize) -> &[usize];
    fn pendant(&self, i: usize) -> &[S];
}

impl<S: Scalar> LayeredTrace<S> for TrimTrace<S> {
    fn layer_sizes(&self) -> Vec<usize> {
        self.sizes()
    }

    fn projection(&self, i: usize) -> &[usize] {
        self.layers[i]
            .projection
            .as_deref()
            .expect("only the last layer lacks a projection")
    }

    fn pendant(&self, i: usize) -> &[S] {
        &self.layers[i].pendant
    }
}

impl<S: Scalar> LayeredTrace<S> for CenterTrace<S> {
    fn layer_sizes(&self) -> Vec<usize> {
        self.sizes()
    }

    fn projection(&self, i: usize) -> &[usize] {
        &self.projections[i]
    }

    fn pendant(&self, i: usize) -> &[S] {
        &self.pendant[i]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CylinderGraph<S> {
    pub sizes: Vec<usize>,
    /// `targets[i][v]` is the endpoint in layer `i + 1` of the edge leaving `v`.
    pub targets: Vec<Vec<usize>>,
    /// `weights[i][v]` is the length of that edge.
    pub weights: Vec<Vec<S>>,
    /// `ancestors[i][v]` is some layer-0 vertex whose trajectory passes
    /// through `v`.
    pub ancestors: Vec<Vec<usize>>,
}

/// A point on the cylinder: vertex `vertex` of layer `layer` moved the
/// fraction `t` along its outgoing edge.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderPoint<S> {
    pub layer: usize,
    pub vertex: usize,
    pub t: S,
}

impl<S: Scalar> CylinderPoint<S> {
    pub fn vertex(layer: usize, vertex: usize) -> Self {
        CylinderPoint {
            layer,
            vertex,
            t: S::zero(),
        }
    }

    pub fn on_edge(layer: usize, vertex: usize, t: S) -> Self {
        CylinderPoint { layer, vertex, t }
    }
}

/// Builds the cylinder. A trace with a single layer (an already trim space)
/// gets a second identical layer joined by zero-length edges.
pub fn build_cylinder<S: Scalar, T: LayeredTrace<S>>(trace: &T) -> CylinderGraph<S> {
    let mut sizes = trace.layer_sizes();
    let mut targets: Vec<Vec<usize>> = (0..sizes.len() - 1).map(|i| trace.projection(i).to_vec()).collect();
    let mut weights: Vec<Vec<S>> = (0..sizes.len() - 1).map(|i| trace.pendant(i).to_vec()).collect();
    if sizes.len() == 1 {
        targets.push((0..sizes[0]).collect());
        weights.push(vec![S::zero(); sizes[0]]);
        sizes.push(sizes[0]);
    }
    let mut ancestors = vec![(0..sizes[0]).collect::<Vec<_>>()];
    for (i, proj) in targets.iter().enumerate() {
        let mut next = vec![usize::MAX; sizes[i + 1]];
        for (v, &w) in proj.iter().enumerate() {
            if next[w] == usize::MAX {
                next[w] = ancestors[i][v];
            }
        }
        ancestors.push(next);
    }
    CylinderGraph {
        sizes,
        targets,
        weights,
        ancestors,
    }
}

impl<S: Scalar> CylinderGraph<S> {
    pub fn depth(&self) -> usize {
        self.sizes.len() - 1
    }

    fn validate(&self, p: &CylinderPoint<S>) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidPoint(format!("{p:?}: {why}")));
        if p.layer >= self.sizes.len() {
            return bad("layer out of range");
        }
        if p.vertex >= self.sizes[p.layer] {
            return bad("vertex out of range");
        }
        if p.t < S::zero() || p.t > S::one() {
            return bad("edge parameter outside [0, 1]");
        }
        if p.layer == self.depth() && !p.t.is_zero() {
            return bad("final layer has no outgoing edge");
        }
        Ok(())
    }

    fn weight(&self, layer: usize, vertex: usize) -> S {
        if layer < self.depth() {
            self.weights[layer][vertex].clone()
        } else {
            S::zero()
        }
    }

    /// Image of `vertex` in layer `to`.
    fn image(&self, from: usize, vertex: usize, to: usize) -> usize {
        (from..to).fold(vertex, |v, i| self.targets[i][v])
    }

    /// `Σ_{n<to} d̲ⁿ` along the trajectory of `vertex` starting at layer `from`.
    fn path_length(&self, from: usize, vertex: usize, to: usize) -> S {
        let mut v = vertex;
        let mut total = S::zero();
        for i in from..to {
            total = total + self.weights[i][v].clone();
            v = self.targets[i][v];
        }
        total
    }

    /// Whether `v` lies on the forward trajectory of `u`.
    fn is_below(&self, u: &CylinderPoint<S>, v: &CylinderPoint<S>) -> bool {
        if v.layer < u.layer || self.image(u.layer, u.vertex, v.layer) != v.vertex {
            return false;
        }
        v.layer > u.layer || v.t >= u.t
    }

    fn below_distance(&self, u: &CylinderPoint<S>, v: &CylinderPoint<S>) -> S {
        self.path_length(u.layer, u.vertex, v.layer) + v.t.clone() * self.weight(v.layer, v.vertex)
            - u.t.clone() * self.weight(u.layer, u.vertex)
    }
}

/// Turaev's pseudo-metric `ρ(u, v)`; `base` is the layer-0 metric.
pub fn cylinder_distance<S: Scalar>(
    g: &CylinderGraph<S>,
    base: &FiniteMetric<S>,
    u: &CylinderPoint<S>,
    v: &CylinderPoint<S>,
) -> Result<S> {
    if base.len() != g.sizes[0] {
        return Err(Error::MalformedInput(format!(
            "base metric has {} points, cylinder layer 0 has {}",
            base.len(),
            g.sizes[0]
        )));
    }
    g.validate(u)?;
    g.validate(v)?;
    if g.is_below(u, v) {
        return Ok(g.below_distance(u, v));
    }
    if g.is_below(v, u) {
        return Ok(g.below_distance(v, u));
    }
    let x = g.ancestors[u.layer][u.vertex];
    let y = g.ancestors[v.layer][v.vertex];
    Ok(base.d(x, y).clone()
        - g.path_length(0, x, u.layer)
        - g.path_length(0, y, v.layer)
        - u.t.clone() * g.weight(u.layer, u.vertex)
        - v.t.clone() * g.weight(v.layer, v.vertex))
}

/// Metric quotient of the cylinder restricted to layers `0..=k`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientGraph<S> {
    /// Vertex classes as `(layer, vertex)` lists, ordered by first member.
    pub classes: Vec<Vec<(usize, usize)>>,
    /// Distinct positive-weight edges `(a, b, w)` between classes, `a < b`.
    pub edges: Vec<(usize, usize, S)>,
}

impl<S: Scalar> QuotientGraph<S> {
    pub fn total_length(&self) -> S {
        self.edges.iter().fold(S::zero(), |acc, (_, _, w)| acc + w.clone())
    }

    pub fn degree(&self, class: usize) -> usize {
        self.edges.iter().filter(|(a, b, _)| *a == class || *b == class).count()
    }

    /// Connected, acyclic, and no vertex of degree above two.
    pub fn is_path(&self) -> bool {
        let n = self.classes.len();
        if self.edges.len() + 1 != n {
            return false;
        }
        let mut sets = DisjointSets::new(n);
        for (a, b, _) in &self.edges {
            if !sets.union(*a, *b) {
                return false;
            }
        }
        (0..n).all(|c| self.degree(c) <= 2)
    }
}

pub fn metric_quotient<S: Scalar>(
    g: &CylinderGraph<S>,
    base: &FiniteMetric<S>,
    k: usize,
) -> Result<QuotientGraph<S>> {
    if k > g.depth() {
        return Err(Error::IndexOutOfRange {
            index: k,
            len: g.sizes.len(),
        });
    }
    let vertices: Vec<(usize, usize)> = (0..=k).flat_map(|i| (0..g.sizes[i]).map(move |v| (i, v))).collect();
    let mut sets = DisjointSets::new(vertices.len());
    for a in 0..vertices.len() {
        for b in a + 1..vertices.len() {
            let (u, v) = (vertices[a], vertices[b]);
            let rho = cylinder_distance(
                g,
                base,
                &CylinderPoint::vertex(u.0, u.1),
                &CylinderPoint::vertex(v.0, v.1),
            )?;
            if rho.is_zero() {
                sets.union(a, b);
            }
        }
    }
    let classes_idx = sets.classes();
    let mut class_of = vec![0; vertices.len()];
    for (c, members) in classes_idx.iter().enumerate() {
        for &m in members {
            class_of[m] = c;
        }
    }
    let offset: Vec<usize> = (0..=k).scan(0, |acc, i| {
        let o = *acc;
        *acc += g.sizes[i];
        Some(o)
    }).collect();
    let mut edges: Vec<(usize, usize, S)> = Vec::new();
    for i in 0..k {
        for v in 0..g.sizes[i] {
            let w = g.weights[i][v].clone();
            if w.is_zero() {
                continue;
            }
            let a = class_of[offset[i] + v];
            let b = class_of[offset[i + 1] + g.targets[i][v]];
            let e = (a.min(b), a.max(b), w);
            if !edges.contains(&e) {
                edges.push(e);
            }
        }
    }
    edges.sort_by(|p, q| (p.0, p.1).cmp(&(q.0, q.1)).then_with(|| scalar::cmp(&p.2, &q.2)));
    let classes = classes_idx
        .into_iter()
        .map(|members| members.into_iter().map(|m| vertices[m]).collect())
        .collect();
    Ok(QuotientGraph { classes, edges })
}

/// The metric center cylinder drawn in the plane: one polyline per input
/// point, following its centers down to the stabilized set.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedCylinder<S> {
    pub trees: Vec<Vec<Point2<S>>>,
    pub roots: Vec<Point2<S>>,
}

impl<S: Scalar> EmbeddedCylinder<S> {
    pub fn edges(&self) -> Vec<(Point2<S>, Point2<S>)> {
        Self::edges_of(&self.trees)
    }

    /// Distinct segments of the polylines, sorted.
    pub fn edges_of(trees: &[Vec<Point2<S>>]) -> Vec<(Point2<S>, Point2<S>)> {
        let mut out: Vec<(Point2<S>, Point2<S>)> = trees
            .iter()
            .flat_map(|t| t.windows(2).map(|w| (w[0].clone(), w[1].clone())))
            .collect();
        out.sort_by(|a, b| a.0.lex_cmp(&b.0).then_with(|| a.1.lex_cmp(&b.1)));
        out.dedup();
        out
    }
}

pub fn embed_center_cylinder<S: Scalar>(trace: &CenterTrace<S>) -> EmbeddedCylinder<S> {
    let trees = (0..trace.first().len())
        .map(|k| {
            let mut line = trace.trajectory(k);
            line.dedup();
            line
        })
        .collect();
    EmbeddedCylinder {
        trees,
        roots: trace.last().points().to_vec(),
    }
}

/// Position in the plane of a cylinder point of a center trace.
pub fn embedded_point<S: Scalar>(trace: &CenterTrace<S>, p: &CylinderPoint<S>) -> Point2<S> {
    let here = &trace.layers[p.layer].points()[p.vertex];
    if p.layer + 1 < trace.layers.len() {
        let there = &trace.layers[p.layer + 1].points()[trace.projections[p.layer][p.vertex]];
        here.lerp(there, &p.t)
    } else {
        here.clone()
    }
}
