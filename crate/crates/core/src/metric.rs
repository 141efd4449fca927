//! Finite metric spaces and the trimming operation.
//!
//! A space is trimmed by measuring every point's pendant length (its
//! smallest Gromov product), identifying points `x`, `y` with
//! `d(x, y) = pendant(x) + pendant(y)` and shrinking the remaining distances
//! by both pendant lengths. Iterating until the space is trim (all pendants
//! zero) or a single point yields the trimming sequence.

use crate::disjoint_sets::DisjointSets;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Labeled symmetric distance matrix of a genuine metric.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetric<S> {
    labels: Vec<String>,
    dist: Vec<Vec<S>>,
}

impl<S: Scalar> FiniteMetric<S> {
    /// Validates shape, zero diagonal, symmetry, positivity and the triangle
    /// inequality.
    pub fn new(labels: Vec<String>, dist: Vec<Vec<S>>) -> Result<Self> {
        let n = dist.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        if labels.len() != n {
            return Err(Error::NonMetricMatrix(format!(
                "{} labels for a {n}x{n} matrix",
                labels.len()
            )));
        }
        for (i, row) in dist.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NonMetricMatrix(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
        }
        for i in 0..n {
            if !dist[i][i].is_zero() {
                return Err(Error::NonMetricMatrix(format!("d({0},{0}) is not zero", labels[i])));
            }
            for j in (i + 1)..n {
                if dist[i][j] != dist[j][i] {
                    return Err(Error::NonMetricMatrix(format!(
                        "d({},{}) is not symmetric",
                        labels[i], labels[j]
                    )));
                }
                if !dist[i][j].is_positive() {
                    return Err(Error::NonMetricMatrix(format!(
                        "d({},{}) = {:?} is not positive",
                        labels[i], labels[j], dist[i][j]
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i][k] > dist[i][j].clone() + dist[j][k].clone() {
                        return Err(Error::NonMetricMatrix(format!(
                            "triangle inequality fails for {}, {}, {}",
                            labels[i], labels[j], labels[k]
                        )));
                    }
                }
            }
        }
        Ok(FiniteMetric { labels, dist })
    }

    /// The one-point space.
    pub fn singleton(label: impl Into<String>) -> Self {
        FiniteMetric {
            labels: vec![label.into()],
            dist: vec![vec![S::zero()]],
        }
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn matrix(&self) -> &[Vec<S>] {
        &self.dist
    }

    pub fn d(&self, i: usize, j: usize) -> &S {
        &self.dist[i][j]
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            })
        }
    }
}

/// `(d(x,y) + d(x,z) - d(y,z)) / 2`, the Gromov product at `x`.
pub fn gromov_product<S: Scalar>(m: &FiniteMetric<S>, x: usize, y: usize, z: usize) -> Result<S> {
    m.check_index(x)?;
    m.check_index(y)?;
    m.check_index(z)?;
    if x == y || x == z || y == z {
        return Err(Error::NotDistinct);
    }
    Ok(raw_gromov(m, x, y, z))
}

fn raw_gromov<S: Scalar>(m: &FiniteMetric<S>, x: usize, y: usize, z: usize) -> S {
    (m.d(x, y).clone() + m.d(x, z).clone() - m.d(y, z).clone()).half()
}

/// Minimal Gromov product at `x`; `d/2` in a two-point space and zero in a
/// one-point space.
pub fn pendant_length<S: Scalar>(m: &FiniteMetric<S>, x: usize) -> Result<S> {
    m.check_index(x)?;
    let n = m.len();
    Ok(match n {
        1 => S::zero(),
        2 => m.d(0, 1).half(),
        _ => {
            let mut best: Option<S> = None;
            for y in 0..n {
                for z in (y + 1)..n {
                    if y == x || z == x {
                        continue;
                    }
                    let g = raw_gromov(m, x, y, z);
                    if best.as_ref().is_none_or(|b| g < *b) {
                        best = Some(g);
                    }
                }
            }
            best.expect("at least one pair for n >= 3")
        }
    })
}

pub fn pendant_lengths<S: Scalar>(m: &FiniteMetric<S>) -> Vec<S> {
    (0..m.len())
        .map(|i| pendant_length(m, i).expect("index in range"))
        .collect()
}

/// Trim means every pendant length vanishes. A singleton is trim.
pub fn is_trim<S: Scalar>(m: &FiniteMetric<S>) -> bool {
    m.len() == 1 || pendant_lengths(m).iter().all(|p| p.is_zero())
}

/// One layer of a trimming sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct TrimLayer<S> {
    pub metric: FiniteMetric<S>,
    pub pendant: Vec<S>,
    /// Index of each point's class in the next layer; `None` on the last layer.
    pub projection: Option<Vec<usize>>,
    pub classes: Vec<Vec<usize>>,
    /// Pairs joined only through the transitive closure of the trim relation,
    /// i.e. same class but `d(x,y) != pendant(x) + pendant(y)`.
    pub closure_pairs: Vec<(usize, usize)>,
}

/// Result of one trimming step: the annotated source layer and the quotient.
#[derive(Debug, Clone, PartialEq)]
pub struct TrimStep<S> {
    pub layer: TrimLayer<S>,
    pub quotient: FiniteMetric<S>,
}

/// Layers `X, t(X), t²(X), …` ending at a trim space or a single point.
#[derive(Debug, Clone, PartialEq)]
pub struct TrimTrace<S> {
    pub layers: Vec<TrimLayer<S>>,
}

impl<S: Scalar> TrimTrace<S> {
    pub fn last(&self) -> &TrimLayer<S> {
        self.layers.last().expect("trace is never empty")
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.layers.iter().map(|l| l.metric.len()).collect()
    }

    /// Whether any layer needed transitive closure to build its classes.
    pub fn closure_changed_partition(&self) -> bool {
        self.layers.iter().any(|l| !l.closure_pairs.is_empty())
    }
}

fn class_label<S>(m: &FiniteMetric<S>, class: &[usize]) -> String {
    class
        .iter()
        .map(|&i| m.labels[i].as_str())
        .collect::<Vec<_>>()
        .join("+")
}

fn partition_projection(classes: &[Vec<usize>], n: usize) -> Vec<usize> {
    let mut proj = vec![0; n];
    for (c, members) in classes.iter().enumerate() {
        for &i in members {
            proj[i] = c;
        }
    }
    proj
}

/// Trims `m` once.
pub fn trim_once<S: Scalar>(m: &FiniteMetric<S>) -> Result<TrimStep<S>> {
    let n = m.len();
    let pendant = pendant_lengths(m);
    if n <= 2 {
        let classes = vec![(0..n).collect::<Vec<_>>()];
        let quotient = FiniteMetric::singleton(class_label(m, &classes[0]));
        return Ok(TrimStep {
            layer: TrimLayer {
                metric: m.clone(),
                pendant,
                projection: Some(vec![0; n]),
                classes,
                closure_pairs: Vec::new(),
            },
            quotient,
        });
    }

    let related = |i: usize, j: usize| *m.d(i, j) == pendant[i].clone() + pendant[j].clone();
    let mut ds = DisjointSets::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if related(i, j) {
                ds.union(i, j);
            }
        }
    }
    let classes = ds.classes();
    let mut closure_pairs = Vec::new();
    for class in &classes {
        for (a, &i) in class.iter().enumerate() {
            for &j in &class[a + 1..] {
                if !related(i, j) {
                    closure_pairs.push((i, j));
                }
            }
        }
    }

    let reduced = |i: usize, j: usize| m.d(i, j).clone() - pendant[i].clone() - pendant[j].clone();
    let k = classes.len();
    let mut dist = vec![vec![S::zero(); k]; k];
    for a in 0..k {
        for b in (a + 1)..k {
            let value = reduced(classes[a][0], classes[b][0]);
            for &i in &classes[a] {
                for &j in &classes[b] {
                    if reduced(i, j) != value {
                        return Err(Error::QuotientNotMetric(format!(
                            "reduced distance between classes {} and {} depends on representatives",
                            class_label(m, &classes[a]),
                            class_label(m, &classes[b])
                        )));
                    }
                }
            }
            dist[a][b] = value.clone();
            dist[b][a] = value;
        }
    }
    let labels = classes.iter().map(|c| class_label(m, c)).collect();
    let quotient = FiniteMetric::new(labels, dist).map_err(|e| Error::QuotientNotMetric(e.to_string()))?;
    Ok(TrimStep {
        layer: TrimLayer {
            metric: m.clone(),
            pendant,
            projection: Some(partition_projection(&classes, n)),
            classes,
            closure_pairs,
        },
        quotient,
    })
}

/// Trims repeatedly until the current layer is trim or a single point.
pub fn trim_sequence<S: Scalar>(m: &FiniteMetric<S>) -> Result<TrimTrace<S>> {
    let cap = m.len() + 1;
    let mut layers = Vec::new();
    let mut current = m.clone();
    for _ in 0..=cap {
        if current.len() == 1 || is_trim(&current) {
            let n = current.len();
            layers.push(TrimLayer {
                pendant: pendant_lengths(&current),
                projection: None,
                classes: (0..n).map(|i| vec![i]).collect(),
                closure_pairs: Vec::new(),
                metric: current,
            });
            return Ok(TrimTrace { layers });
        }
        let step = trim_once(&current)?;
        let bijective = step.quotient.len() == current.len();
        layers.push(step.layer);
        current = step.quotient;
        if bijective && !is_trim(&current) {
            return Err(Error::QuotientNotMetric(
                "bijective trimming produced a non-trim space".into(),
            ));
        }
    }
    Err(Error::QuotientNotMetric(format!(
        "trimming did not stabilize within {cap} steps"
    )))
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn int_metric<S: Scalar>(labels: &[&str], rows: &[&[i64]]) -> FiniteMetric<S> {
        FiniteMetric::new(
            labels.iter().map(|s| s.to_string()).collect(),
            rows.iter()
                .map(|r| r.iter().map(|&v| S::from_int(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    pub fn line<S: Scalar>(n: i64) -> FiniteMetric<S> {
        let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let rows = (1..=n)
            .map(|i| (1..=n).map(|j| S::from_int((i - j).abs())).collect())
            .collect();
        FiniteMetric::new(labels, rows).unwrap()
    }

    /// Shortest-path distances of the weighted graph with pendant edges of
    /// weight one hanging off a 2x1 rectangle.
    pub fn fig2<S: Scalar>() -> FiniteMetric<S> {
        int_metric(
            &["x", "y", "z", "t"],
            &[&[0, 4, 5, 3], &[4, 0, 3, 5], &[5, 3, 0, 4], &[3, 5, 4, 0]],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(v: i64) -> Q {
        Q::from_int(v)
    }

    #[test]
    fn gromov_on_line() {
        let m = line::<Q>(5);
        assert_eq!(gromov_product(&m, 1, 0, 2).unwrap(), q(0));
        assert_eq!(gromov_product(&m, 0, 1, 2).unwrap(), q(1));
        assert_eq!(gromov_product(&m, 0, 0, 2), Err(Error::NotDistinct));
        assert!(matches!(
            gromov_product(&m, 0, 1, 9),
            Err(Error::IndexOutOfRange { index: 9, len: 5 })
        ));
    }

    #[test]
    fn gromov_on_fig2() {
        let m = fig2::<Q>();
        assert_eq!(gromov_product(&m, 0, 1, 3).unwrap(), q(1));
    }

    #[test]
    fn pendant_lengths_match_hand_values() {
        let m = line::<Q>(5);
        assert_eq!(pendant_length(&m, 0).unwrap(), q(1));
        assert_eq!(pendant_length(&m, 2).unwrap(), q(0));
        assert_eq!(pendant_length(&fig2::<Q>(), 0).unwrap(), q(1));
        let pair = int_metric::<Q>(&["a", "b"], &[&[0, 6], &[6, 0]]);
        assert_eq!(pendant_length(&pair, 0).unwrap(), q(3));
        assert_eq!(pendant_length(&FiniteMetric::<Q>::singleton("p"), 0).unwrap(), q(0));
        assert!(pendant_length(&pair, 2).is_err());
    }

    #[test]
    fn trim_predicate() {
        assert!(!is_trim(&line::<Q>(5)));
        assert!(is_trim(&FiniteMetric::<Q>::singleton("p")));
        let square = int_metric::<Q>(
            &["px", "py", "pz", "pt"],
            &[&[0, 2, 3, 1], &[2, 0, 1, 3], &[3, 1, 0, 2], &[1, 3, 2, 0]],
        );
        assert!(is_trim(&square));
    }

    #[test]
    fn construction_rejects_non_metrics() {
        let bad = |rows: Vec<Vec<i64>>| {
            let n = rows.len();
            FiniteMetric::<Q>::new(
                (0..n).map(|i| i.to_string()).collect(),
                rows.into_iter().map(|r| r.into_iter().map(q).collect()).collect(),
            )
        };
        assert!(matches!(bad(vec![vec![0, 1], vec![2, 0]]), Err(Error::NonMetricMatrix(_))));
        assert!(matches!(bad(vec![vec![0, 0], vec![0, 0]]), Err(Error::NonMetricMatrix(_))));
        assert!(matches!(
            bad(vec![vec![0, 1, 5], vec![1, 0, 1], vec![5, 1, 0]]),
            Err(Error::NonMetricMatrix(_))
        ));
        assert!(matches!(bad(vec![]), Err(Error::EmptyInput)));
    }

    #[test]
    fn trim_line_once() {
        let step = trim_once(&line::<Q>(5)).unwrap();
        assert_eq!(step.layer.classes, vec![vec![0, 1], vec![2], vec![3, 4]]);
        assert_eq!(step.layer.projection, Some(vec![0, 0, 1, 2, 2]));
        let t = &step.quotient;
        assert_eq!(t.labels(), &["1+2", "3", "4+5"]);
        assert_eq!(*t.d(0, 1), q(1));
        assert_eq!(*t.d(1, 2), q(1));
        assert_eq!(*t.d(0, 2), q(2));
        assert_eq!(pendant_length(t, 0).unwrap(), q(1));
        assert!(step.layer.closure_pairs.is_empty());
    }

    #[test]
    fn trim_fig2_once() {
        let step = trim_once(&fig2::<Q>()).unwrap();
        assert_eq!(step.layer.classes.len(), 4);
        let t = &step.quotient;
        let cycle: Vec<Q> = (0..4).map(|i| t.d(i, (i + 1) % 4).clone()).collect();
        assert_eq!(cycle, vec![q(2), q(1), q(2), q(1)]);
        assert_eq!((t.d(0, 2).clone(), t.d(1, 3).clone()), (q(3), q(3)));
        assert!(is_trim(t));
    }

    #[test]
    fn three_points_collapse() {
        let m = int_metric::<Q>(&["a", "b", "c"], &[&[0, 3, 4], &[3, 0, 5], &[4, 5, 0]]);
        let step = trim_once(&m).unwrap();
        assert_eq!(step.quotient.len(), 1);
        assert_eq!(step.layer.classes, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn trim_on_trim_space_is_identity() {
        let t = trim_once(&fig2::<Q>()).unwrap().quotient;
        let again = trim_once(&t).unwrap();
        assert_eq!(again.quotient.matrix(), t.matrix());
        assert_eq!(again.layer.projection, Some(vec![0, 1, 2, 3]));
    }

    #[test]
    fn sequences() {
        let tr = trim_sequence(&line::<Q>(5)).unwrap();
        assert_eq!(tr.sizes(), vec![5, 3, 1]);
        assert_eq!(tr.layers[1].pendant[0], q(1));
        assert!(tr.last().projection.is_none());
        assert_eq!(trim_sequence(&fig2::<Q>()).unwrap().sizes(), vec![4, 4]);
        assert_eq!(trim_sequence(&FiniteMetric::<Q>::singleton("p")).unwrap().sizes(), vec![1]);
    }

    #[test]
    fn float_scalar_agrees_on_integer_line() {
        let tr = trim_sequence(&line::<f64>(5)).unwrap();
        assert_eq!(tr.sizes(), vec![5, 3, 1]);
        assert_eq!(tr.layers[0].pendant, vec![1.0, 0.0, 0.0, 0.0, 1.0]);
    }
}
