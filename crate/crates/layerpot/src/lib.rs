//! Numerical potential theory on rough (Ahlfors-regular) Jordan curves.
//!
//! The crate evaluates Cauchy-type integrals and the logarithmic double
//! layer potential off a closed rectifiable Jordan curve, estimates their
//! boundary limits, and computes the curve-regularity functionals that
//! govern when those limits exist: disk-neighborhood arc measures, ray
//! crossing counts, argument variations, oscillation counts, angular
//! shadows, moduli of continuity and Dini-type integrals.
//!
//! Curves are adaptive polylines (optionally backed by an analytic
//! generator for resampling); all integrals are polyline sums with exact
//! per-chord argument increments, so results are deterministic across
//! thread counts.

pub mod argtrack;
pub mod curve;
pub mod density;
pub mod diagnostics;
pub mod geom;
pub mod integrals;
pub mod policy;
pub mod report;
pub mod zoo;

pub use curve::{Curve, CurveError, NeighborhoodSlice, ResolutionPolicy, TangentAngle};
pub use density::{Density, DensityRule};
pub use geom::Point;
pub use policy::{ConvergencePolicy, TracedLimit, Trend};
