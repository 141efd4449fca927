//! Trimming of finite metric spaces and exact tight spans of finite subsets
//! of the Manhattan plane.
//!
//! The pipeline for a planar point set `X`:
//!
//! 1. [`manhattan::center_sequence`] iterates metric centers until the set is
//!    trim (or a single point), which realizes the trimming sequence of the
//!    induced L1 metric inside the plane.
//! 2. [`cylinder::embed_center_cylinder`] records the trees traced by every
//!    point on its way to the stabilized set.
//! 3. [`tight_span::tight_span_region`] carves the minimal rectangle of the
//!    stabilized set corner by corner into a rectilinear region.
//! 4. [`tight_span::assemble_tight_span`] joins region and trees.
//!
//! [`oracle`] certifies results against the function-space description of
//! the tight span. All algorithms are generic over [`Scalar`]; the aliases
//! below fix the exact rational instantiation used by the command line tool.

pub mod cylinder;
mod disjoint_sets;
pub mod error;
pub mod io;
pub mod manhattan;
pub mod metric;
pub mod oracle;
pub mod region;
pub mod scalar;
pub mod svg;
pub mod tight_span;

pub use error::{Error, Result};
pub use manhattan::{Point2, PlanarConfig, Rect};
pub use metric::FiniteMetric;
pub use region::RectRegion;
pub use scalar::Scalar;
pub use tight_span::TightSpan;

/// Arbitrary precision rational, the default scalar.
pub type Rational = num_rational::BigRational;
/// Rational with 64-bit parts; faster, overflows on large inputs.
pub type Rational64 = num_rational::Rational64;

pub type Point = Point2<Rational>;
pub type Config = PlanarConfig<Rational>;
pub type Metric = FiniteMetric<Rational>;
pub type Region = RectRegion<Rational>;
pub type Span = TightSpan<Rational>;
