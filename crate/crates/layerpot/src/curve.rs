//! Closed rectifiable Jordan curves as adaptive polylines.
//!
//! A [`Curve`] stores an ordered, positively oriented vertex loop with its
//! cumulative arc-length table, an optional handle to the analytic generator
//! it was sampled from (so geometry can be resampled rather than merely
//! subdivided), the total length, and the diameter. Every integral in this
//! crate is a polyline sum, so neighborhood measures, clips and winding
//! numbers are exact for the stored polyline.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{
    self, point_segment_distance, point_set_diameter, seg_disk_interval, segment_distance,
    signed_area, winding_number, Accum, Point,
};

/// Closure mismatch is measured against this fraction of the diameter.
pub const CLOSURE_TOL_REL: f64 = 1e-9;
/// Non-adjacent segments closer than this are reported as self-intersections.
/// For segments shorter than 4e-12 the threshold shrinks proportionally, so
/// legitimately tiny geometry (deep spiral sampling) is not rejected.
pub const SELF_INTERSECTION_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum CurveError {
    #[error("curve is not closed: endpoint gap {gap:.3e} exceeds tolerance {tol:.3e}")]
    NotClosed { gap: f64, tol: f64 },
    #[error("self-intersection between segments at arc coordinates {s1:.6e} and {s2:.6e}")]
    SelfIntersection { s1: f64, s2: f64 },
    #[error("curve is not positively oriented (signed area {area:.3e})")]
    NegativeOrientation { area: f64 },
    #[error("degenerate curve: {0}")]
    Degenerate(&'static str),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("evaluation point lies on or too close to the curve (distance {dist:.3e}); exclude a neighborhood")]
    Singularity { dist: f64 },
}

pub type Result<T> = std::result::Result<T, CurveError>;

/// Analytic generator of a closed curve; `u` runs over [0, 1] with
/// `point(0) == point(1)`.
pub trait Parametrization: Send + Sync {
    fn point(&self, u: f64) -> Point;
}

impl<F> Parametrization for F
where
    F: Fn(f64) -> Point + Send + Sync,
{
    fn point(&self, u: f64) -> Point {
        self(u)
    }
}

/// Controls adaptive sampling of a generator into a polyline.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ResolutionPolicy {
    /// Maximum chord length of a segment.
    pub max_chord: f64,
    /// Maximum turning (radians) between consecutive chords.
    pub max_turn: f64,
    /// Initial uniform subdivision of the parameter interval.
    pub initial: usize,
    /// Recursion depth cap for the adaptive splitter.
    pub max_depth: u32,
}

impl Default for ResolutionPolicy {
    fn default() -> Self {
        Self {
            max_chord: 2e-3,
            max_turn: 0.05,
            initial: 64,
            max_depth: 40,
        }
    }
}

impl ResolutionPolicy {
    pub fn with_chord(max_chord: f64) -> Self {
        Self {
            max_chord,
            ..Self::default()
        }
    }
}

/// Tangent direction at an arc coordinate. Corner points report both
/// one-sided angles instead of failing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TangentAngle {
    Smooth(f64),
    Corner { incoming: f64, outgoing: f64 },
}

impl TangentAngle {
    /// A single representative angle (mean direction at corners).
    pub fn angle(&self) -> f64 {
        match *self {
            TangentAngle::Smooth(a) => a,
            TangentAngle::Corner { incoming, outgoing } => {
                let d = Point::new(incoming.cos() + outgoing.cos(), incoming.sin() + outgoing.sin());
                d.im.atan2(d.re)
            }
        }
    }
}

/// The part of a curve within distance `radius` of `center`:
/// connected components as arc-length intervals plus their total measure.
#[derive(Debug, Clone, Serialize)]
pub struct NeighborhoodSlice {
    pub center: (f64, f64),
    pub radius: f64,
    /// Arc-length intervals (merged across the closure seam for counting).
    pub subarcs: Vec<(f64, f64)>,
    /// Total arc measure of the neighborhood.
    pub measure: f64,
}

/// A closed, simple, positively oriented polyline curve.
#[derive(Clone)]
pub struct Curve {
    verts: Vec<Point>,
    arc: Vec<f64>,
    params: Option<Vec<f64>>,
    generator: Option<Arc<dyn Parametrization>>,
    generator_id: Option<String>,
    generator_params: Option<serde_json::Value>,
    length: f64,
    diameter: f64,
}

impl std::fmt::Debug for Curve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Curve")
            .field("vertices", &self.verts.len())
            .field("length", &self.length)
            .field("diameter", &self.diameter)
            .field("generator_id", &self.generator_id)
            .finish()
    }
}

impl Curve {
    /// Validate a vertex loop and build the curve. The final vertex must
    /// coincide with the first within the closure tolerance; it is snapped
    /// exactly onto it.
    pub fn from_vertices(mut verts: Vec<Point>) -> Result<Self> {
        dedup_consecutive(&mut verts);
        if verts.len() < 4 {
            return Err(CurveError::Degenerate("fewer than three distinct vertices"));
        }
        let diam_est = point_set_diameter(&verts);
        if diam_est == 0.0 {
            return Err(CurveError::Degenerate("all vertices coincide"));
        }
        let gap = (verts[verts.len() - 1] - verts[0]).norm();
        let tol = CLOSURE_TOL_REL * diam_est;
        if gap > tol {
            return Err(CurveError::NotClosed { gap, tol });
        }
        let n = verts.len();
        verts[n - 1] = verts[0];
        Self::from_closed_loop(verts, None, None, None, None)
    }

    fn from_closed_loop(
        verts: Vec<Point>,
        params: Option<Vec<f64>>,
        generator: Option<Arc<dyn Parametrization>>,
        generator_id: Option<String>,
        generator_params: Option<serde_json::Value>,
    ) -> Result<Self> {
        let arc = cumulative_arc(&verts);
        let length = *arc.last().unwrap();
        if !(length > 0.0) {
            return Err(CurveError::Degenerate("zero length"));
        }
        let area = signed_area(&verts);
        if area <= 0.0 {
            return Err(CurveError::NegativeOrientation { area });
        }
        check_simple(&verts, &arc)?;
        let diameter = point_set_diameter(&verts);
        debug_assert!(diameter <= length + 1e-9 * length);
        Ok(Self {
            verts,
            arc,
            params,
            generator,
            generator_id,
            generator_params,
            length,
            diameter,
        })
    }

    /// Assemble from explicit vertices and generator data; used by the zoo.
    pub(crate) fn from_sampled_generator(
        verts: Vec<Point>,
        params: Vec<f64>,
        generator: Arc<dyn Parametrization>,
        generator_id: String,
        generator_params: serde_json::Value,
    ) -> Result<Self> {
        let mut verts = verts;
        let mut params = params;
        dedup_consecutive_with(&mut verts, &mut params);
        if verts.len() < 4 {
            return Err(CurveError::Degenerate("fewer than three distinct vertices"));
        }
        let diam_est = point_set_diameter(&verts);
        let gap = (verts[verts.len() - 1] - verts[0]).norm();
        let tol = CLOSURE_TOL_REL * diam_est;
        if gap > tol {
            return Err(CurveError::NotClosed { gap, tol });
        }
        let n = verts.len();
        verts[n - 1] = verts[0];
        Self::from_closed_loop(verts, Some(params), Some(generator), Some(generator_id), Some(generator_params))
    }

    pub fn vertices(&self) -> &[Point] {
        &self.verts
    }

    pub fn arc_coords(&self) -> &[f64] {
        &self.arc
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn generator_id(&self) -> Option<&str> {
        self.generator_id.as_deref()
    }

    pub fn n_segments(&self) -> usize {
        self.verts.len() - 1
    }

    pub fn segment(&self, i: usize) -> (Point, Point) {
        (self.verts[i], self.verts[i + 1])
    }

    /// Arc-length interval covered by segment `i`.
    pub fn segment_span(&self, i: usize) -> (f64, f64) {
        (self.arc[i], self.arc[i + 1])
    }

    /// Point at arc coordinate `s` (wrapped into [0, L)).
    pub fn point_at(&self, s: f64) -> Point {
        let s = wrap_arc(s, self.length);
        let i = self.segment_index(s);
        let (s0, s1) = self.segment_span(i);
        let u = if s1 > s0 { (s - s0) / (s1 - s0) } else { 0.0 };
        self.verts[i] + (self.verts[i + 1] - self.verts[i]) * u
    }

    fn segment_index(&self, s: f64) -> usize {
        let idx = self.arc.partition_point(|&a| a <= s);
        idx.clamp(1, self.arc.len() - 1) - 1
    }

    /// Distance from `z` to the polyline.
    pub fn distance_to(&self, z: Point) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.n_segments() {
            let d = point_segment_distance(z, self.verts[i], self.verts[i + 1]);
            if d < best {
                best = d;
            }
        }
        best
    }

    /// Arc coordinate of the vertex closest to `z`.
    pub fn closest_vertex(&self, z: Point) -> (usize, f64) {
        let mut best = (0usize, f64::INFINITY);
        for (i, &v) in self.verts.iter().enumerate().take(self.verts.len() - 1) {
            let d = (v - z).norm();
            if d < best.1 {
                best = (i, d);
            }
        }
        best
    }

    /// Winding number of the curve around `z`: 1 inside, 0 outside.
    pub fn winding(&self, z: Point) -> i32 {
        winding_number(&self.verts, z)
    }

    /// Resample the attached generator at per-segment fraction `u` of
    /// segment `i`; `None` for bare polylines.
    pub fn generator_point(&self, i: usize, u: f64) -> Option<Point> {
        match (self.params.as_ref(), self.generator.as_ref()) {
            (Some(ps), Some(gen)) => Some(gen.point(ps[i] + u * (ps[i + 1] - ps[i]))),
            _ => None,
        }
    }

    /// Signed polygon area.
    pub fn area(&self) -> f64 {
        signed_area(&self.verts)
    }

    /// The curve neighborhood `{t : |t - center| <= radius}` as arc
    /// intervals; `measure` is the arc measure theta_center(radius).
    pub fn neighborhood(&self, center: Point, radius: f64) -> Result<NeighborhoodSlice> {
        if !(radius > 0.0) {
            return Err(CurveError::Domain(format!("neighborhood radius must be positive, got {radius}")));
        }
        let mut intervals: Vec<(f64, f64)> = Vec::new();
        for i in 0..self.n_segments() {
            let (a, b) = self.segment(i);
            if let Some((u0, u1)) = seg_disk_interval(a, b, center, radius) {
                let (s0, s1) = self.segment_span(i);
                intervals.push((s0 + u0 * (s1 - s0), s0 + u1 * (s1 - s0)));
            }
        }
        let merged = merge_intervals(intervals, self.length);
        let mut acc = Accum::new();
        for &(a, b) in &merged {
            acc.add(b - a);
        }
        Ok(NeighborhoodSlice {
            center: (center.re, center.im),
            radius,
            subarcs: merged,
            measure: acc.value().min(self.length),
        })
    }

    /// Tangent angle at arc coordinate `s`. Interior vertex points whose
    /// adjacent chords disagree by more than `corner_tol` radians report a
    /// corner with both one-sided angles.
    pub fn tangent_angle(&self, s: f64, corner_tol: f64) -> TangentAngle {
        let s = wrap_arc(s, self.length);
        let i = self.segment_index(s);
        let (s0, s1) = self.segment_span(i);
        let at_start = (s - s0).abs() <= 1e-12 * self.length;
        let at_end = (s1 - s).abs() <= 1e-12 * self.length;
        if !(at_start || at_end) {
            return TangentAngle::Smooth(self.segment_angle(i));
        }
        let (prev, next) = if at_start {
            (if i == 0 { self.n_segments() - 1 } else { i - 1 }, i)
        } else {
            (i, if i + 1 >= self.n_segments() { 0 } else { i + 1 })
        };
        let a_in = self.segment_angle(prev);
        let a_out = self.segment_angle(next);
        let diff = geom::angle_between(
            Point::new(a_in.cos(), a_in.sin()),
            Point::new(a_out.cos(), a_out.sin()),
        );
        if diff.abs() <= corner_tol {
            TangentAngle::Smooth(a_out)
        } else {
            TangentAngle::Corner { incoming: a_in, outgoing: a_out }
        }
    }

    fn segment_angle(&self, i: usize) -> f64 {
        let d = self.verts[i + 1] - self.verts[i];
        d.im.atan2(d.re)
    }

    /// Unwrapped chord angles along the whole loop: (midpoint arc
    /// coordinate, angle). Consecutive values differ by the principal
    /// angle difference, so the profile is continuous along smooth runs.
    pub fn tangent_profile(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.n_segments());
        let mut prev: Option<f64> = None;
        for i in 0..self.n_segments() {
            let raw = self.segment_angle(i);
            let unwrapped = match prev {
                None => raw,
                Some(p) => {
                    let mut a = raw;
                    while a - p > std::f64::consts::PI {
                        a -= 2.0 * std::f64::consts::PI;
                    }
                    while p - a > std::f64::consts::PI {
                        a += 2.0 * std::f64::consts::PI;
                    }
                    a
                }
            };
            prev = Some(unwrapped);
            let (s0, s1) = self.segment_span(i);
            out.push((0.5 * (s0 + s1), unwrapped));
        }
        out
    }

    /// Subdivide (or resample, when a generator is attached) all segments
    /// within `radius` of `center` by `factor`. Far geometry is untouched.
    pub fn refine_near(&self, center: Point, radius: f64, factor: usize) -> Result<Curve> {
        if factor <= 1 {
            return Ok(self.clone());
        }
        let mut verts: Vec<Point> = Vec::with_capacity(self.verts.len() * 2);
        let mut params: Option<Vec<f64>> = self.params.as_ref().map(|_| Vec::new());
        for i in 0..self.n_segments() {
            let (a, b) = self.segment(i);
            verts.push(a);
            if let (Some(ps), Some(out)) = (self.params.as_ref(), params.as_mut()) {
                out.push(ps[i]);
            }
            let near = point_segment_distance(center, a, b) <= radius;
            if near {
                for k in 1..factor {
                    let u = k as f64 / factor as f64;
                    match (self.params.as_ref(), self.generator.as_ref()) {
                        (Some(ps), Some(gen)) => {
                            let t = ps[i] + u * (ps[i + 1] - ps[i]);
                            verts.push(gen.point(t));
                            params.as_mut().unwrap().push(t);
                        }
                        _ => verts.push(a + (b - a) * u),
                    }
                }
            }
        }
        verts.push(self.verts[0]);
        if let (Some(ps), Some(out)) = (self.params.as_ref(), params.as_mut()) {
            out.push(*ps.last().unwrap());
        }
        let mut params = params;
        dedup_maybe(&mut verts, &mut params);
        let arc = cumulative_arc(&verts);
        let length = *arc.last().unwrap();
        let area = signed_area(&verts);
        if area <= 0.0 {
            return Err(CurveError::NegativeOrientation { area });
        }
        Ok(Curve {
            diameter: point_set_diameter(&verts),
            verts,
            arc,
            params,
            generator: self.generator.clone(),
            generator_id: self.generator_id.clone(),
            generator_params: self.generator_params.clone(),
            length,
        })
    }

    /// Serializable record of this curve.
    pub fn record(&self) -> CurveRecord {
        CurveRecord {
            generator_id: self.generator_id.clone(),
            params: self.generator_params.clone(),
            vertices: self.verts.iter().map(|p| [p.re, p.im]).collect(),
            arc_coords: self.arc.clone(),
            length: self.length,
            diameter: self.diameter,
        }
    }

    /// Rebuild a curve from a serialized record (generator handle is lost;
    /// the polyline is authoritative).
    pub fn from_record(rec: &CurveRecord) -> Result<Self> {
        let verts: Vec<Point> = rec.vertices.iter().map(|&[x, y]| Point::new(x, y)).collect();
        Self::from_vertices(verts)
    }

    /// CSV vertex table (header `x,y`).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y\n");
        for v in &self.verts {
            out.push_str(&format!("{},{}\n", fmt17(v.re), fmt17(v.im)));
        }
        out
    }

    /// Parse a CSV vertex table (headers optional). The loop must close.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut verts = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split(',');
            let x = parts.next().map(str::trim).unwrap_or("");
            let y = parts.next().map(str::trim).unwrap_or("");
            match (x.parse::<f64>(), y.parse::<f64>()) {
                (Ok(x), Ok(y)) => verts.push(Point::new(x, y)),
                _ => continue, // header or malformed row
            }
        }
        Self::from_vertices(verts)
    }
}

/// JSON-facing curve record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveRecord {
    pub generator_id: Option<String>,
    pub params: Option<serde_json::Value>,
    pub vertices: Vec<[f64; 2]>,
    pub arc_coords: Vec<f64>,
    pub length: f64,
    pub diameter: f64,
}

/// Format a float with 17 significant digits (lossless f64 round trip).
pub fn fmt17(x: f64) -> String {
    format!("{:.16e}", x)
}

/// Sample an analytic generator into a validated curve.
///
/// Splits intervals until each chord satisfies the policy chord bound and
/// the bend between a chord's halves stays under the turn bound.
pub fn build_polyline(
    generator: Arc<dyn Parametrization>,
    policy: &ResolutionPolicy,
    generator_id: &str,
    generator_params: serde_json::Value,
) -> Result<Curve> {
    let mut us: Vec<f64> = Vec::new();
    let n0 = policy.initial.max(8);
    for k in 0..n0 {
        let u0 = k as f64 / n0 as f64;
        let u1 = (k + 1) as f64 / n0 as f64;
        us.push(u0);
        subdivide(generator.as_ref(), u0, u1, policy, 0, &mut us);
    }
    us.push(1.0);
    let verts: Vec<Point> = us.iter().map(|&u| generator.point(u)).collect();
    Curve::from_sampled_generator(verts, us, generator, generator_id.to_string(), generator_params)
}

fn subdivide(
    gen: &dyn Parametrization,
    u0: f64,
    u1: f64,
    policy: &ResolutionPolicy,
    depth: u32,
    out: &mut Vec<f64>,
) {
    let p0 = gen.point(u0);
    let p1 = gen.point(u1);
    let um = 0.5 * (u0 + u1);
    let pm = gen.point(um);
    let chord = (p1 - p0).norm();
    let bend = geom::angle_between(pm - p0, p1 - pm).abs();
    let sag = point_segment_distance(pm, p0, p1);
    let fine = chord <= policy.max_chord && bend <= policy.max_turn && sag <= 0.25 * policy.max_chord;
    if fine || depth >= policy.max_depth {
        return;
    }
    subdivide(gen, u0, um, policy, depth + 1, out);
    out.push(um);
    subdivide(gen, um, u1, policy, depth + 1, out);
}

fn cumulative_arc(verts: &[Point]) -> Vec<f64> {
    let mut arc = Vec::with_capacity(verts.len());
    let mut acc = 0.0f64;
    arc.push(0.0);
    for w in verts.windows(2) {
        acc += (w[1] - w[0]).norm();
        arc.push(acc);
    }
    arc
}

fn wrap_arc(s: f64, len: f64) -> f64 {
    let mut s = s % len;
    if s < 0.0 {
        s += len;
    }
    s
}

fn dedup_consecutive(verts: &mut Vec<Point>) {
    verts.dedup_by(|a, b| (*a - *b).norm() == 0.0);
}

fn dedup_consecutive_with(verts: &mut Vec<Point>, params: &mut Vec<f64>) {
    let mut keep = vec![true; verts.len()];
    for i in 1..verts.len() {
        if (verts[i] - verts[i - 1]).norm() == 0.0 {
            keep[i] = false;
        }
    }
    let mut vi = keep.iter();
    verts.retain(|_| *vi.next().unwrap());
    let mut pi = keep.iter();
    params.retain(|_| *pi.next().unwrap());
}

fn dedup_maybe(verts: &mut Vec<Point>, params: &mut Option<Vec<f64>>) {
    match params {
        Some(ps) => dedup_consecutive_with(verts, ps),
        None => dedup_consecutive(verts),
    }
}

/// Merge overlapping/touching arc intervals; the pair that meets across the
/// closure seam (s = 0 = L) is merged so component counts are correct.
fn merge_intervals(mut iv: Vec<(f64, f64)>, length: f64) -> Vec<(f64, f64)> {
    if iv.is_empty() {
        return iv;
    }
    iv.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let tol = 1e-12 * length.max(1.0);
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(iv.len());
    for (a, b) in iv {
        match merged.last_mut() {
            Some(last) if a <= last.1 + tol => last.1 = last.1.max(b),
            _ => merged.push((a, b)),
        }
    }
    if merged.len() > 1 {
        let first = merged[0];
        let last = *merged.last().unwrap();
        if first.0 <= tol && last.1 >= length - tol {
            // single component through the seam
            merged[0].0 = last.0 - length;
            merged.pop();
        }
    }
    merged
}

/// Simplicity scan: sweep over x-sorted segment boxes, testing only
/// overlapping pairs. Adjacent segments (sharing an endpoint) are exempt.
fn check_simple(verts: &[Point], arc: &[f64]) -> Result<()> {
    let n = verts.len() - 1;
    let mut order: Vec<usize> = (0..n).collect();
    let xmin = |i: usize| verts[i].re.min(verts[i + 1].re);
    let xmax = |i: usize| verts[i].re.max(verts[i + 1].re);
    order.sort_by(|&a, &b| xmin(a).partial_cmp(&xmin(b)).unwrap());
    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        let xi = xmin(i);
        active.retain(|&j| xmax(j) >= xi);
        for &j in &active {
            if adjacent(i, j, n) {
                continue;
            }
            let (lo, hi) = if i < j { (i, j) } else { (j, i) };
            let (a0, a1) = (verts[lo], verts[lo + 1]);
            let (b0, b1) = (verts[hi], verts[hi + 1]);
            let ymin_a = a0.im.min(a1.im);
            let ymax_a = a0.im.max(a1.im);
            let ymin_b = b0.im.min(b1.im);
            let ymax_b = b0.im.max(b1.im);
            let tol = SELF_INTERSECTION_TOL
                .min(0.25 * (a1 - a0).norm())
                .min(0.25 * (b1 - b0).norm());
            if ymin_a > ymax_b + tol || ymin_b > ymax_a + tol {
                continue;
            }
            if segment_distance(a0, a1, b0, b1) < tol {
                return Err(CurveError::SelfIntersection { s1: arc[lo], s2: arc[hi] });
            }
        }
        active.push(i);
    }
    Ok(())
}

fn adjacent(i: usize, j: usize, n: usize) -> bool {
    let d = if i > j { i - j } else { j - i };
    d <= 1 || d == n - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    pub fn unit_circle(h: f64) -> Curve {
        let gen = Arc::new(move |u: f64| Point::new((2.0 * PI * u).cos(), (2.0 * PI * u).sin()));
        build_polyline(
            gen,
            &ResolutionPolicy::with_chord(h),
            "circle",
            serde_json::json!({"radius": 1.0}),
        )
        .unwrap()
    }

    #[test]
    fn circle_length_and_diameter() {
        let c = unit_circle(1e-3);
        assert!((c.length() - 2.0 * PI).abs() < 1e-5);
        assert!((c.diameter() - 2.0).abs() < 1e-6);
        assert!(c.diameter() <= c.length());
    }

    #[test]
    fn figure_eight_rejected() {
        // a lemniscate-like loop crosses itself at the origin
        let gen = Arc::new(|u: f64| {
            let t = 2.0 * PI * u;
            Point::new(t.sin(), (2.0 * t).sin())
        });
        let err = build_polyline(gen, &ResolutionPolicy::with_chord(5e-2), "eight", serde_json::Value::Null);
        assert!(matches!(err, Err(CurveError::SelfIntersection { .. })));
    }

    #[test]
    fn open_polyline_rejected() {
        let verts = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
            Point::new(0.05, 0.9),
        ];
        assert!(matches!(Curve::from_vertices(verts), Err(CurveError::NotClosed { .. })));
    }

    #[test]
    fn clockwise_rejected() {
        let verts = vec![
            Point::new(0.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 0.0),
        ];
        assert!(matches!(Curve::from_vertices(verts), Err(CurveError::NegativeOrientation { .. })));
    }

    #[test]
    fn neighborhood_circle_closed_form() {
        let c = unit_circle(1e-3);
        let slice = c.neighborhood(Point::new(1.0, 0.0), 0.5).unwrap();
        // arc within chord distance eps of a boundary point: 4 asin(eps/2)
        let expect = 4.0 * (0.25f64).asin();
        assert_eq!(slice.subarcs.len(), 1);
        assert!((slice.measure - expect).abs() < 1e-4, "got {}", slice.measure);
    }

    #[test]
    fn neighborhood_covers_whole_curve() {
        let c = unit_circle(5e-3);
        let slice = c.neighborhood(Point::new(1.0, 0.0), 2.5).unwrap();
        assert_eq!(slice.subarcs.len(), 1);
        assert!((slice.measure - c.length()).abs() < 1e-12);
    }

    #[test]
    fn neighborhood_rejects_nonpositive_radius() {
        let c = unit_circle(5e-3);
        assert!(c.neighborhood(Point::new(1.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn tangent_angle_on_circle() {
        let c = unit_circle(1e-3);
        for &s in &[0.3, 1.0, 2.5, 4.0, 6.0] {
            match c.tangent_angle(s, 0.05) {
                TangentAngle::Smooth(a) => {
                    let expect = (s + PI / 2.0) % (2.0 * PI);
                    let d = geom::angle_between(
                        Point::new(a.cos(), a.sin()),
                        Point::new(expect.cos(), expect.sin()),
                    );
                    assert!(d.abs() < 2e-3, "s={s} angle {a} vs {expect}");
                }
                TangentAngle::Corner { .. } => panic!("circle has no corners at s={s}"),
            }
        }
    }

    #[test]
    fn corner_reports_two_angles() {
        let verts = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
            Point::new(0.0, 0.0),
        ];
        let sq = Curve::from_vertices(verts).unwrap();
        match sq.tangent_angle(1.0, 1e-6) {
            TangentAngle::Corner { incoming, outgoing } => {
                assert!((incoming - 0.0).abs() < 1e-12);
                assert!((outgoing - PI / 2.0).abs() < 1e-12);
            }
            TangentAngle::Smooth(_) => panic!("square corner not detected"),
        }
    }

    #[test]
    fn refine_near_identity_when_factor_one() {
        let c = unit_circle(1e-2);
        let r = c.refine_near(Point::new(1.0, 0.0), 0.1, 1).unwrap();
        assert_eq!(r.vertices().len(), c.vertices().len());
    }

    #[test]
    fn refine_near_resamples_analytically() {
        let c = unit_circle(1e-4);
        let n0 = c.n_segments();
        let r = c.refine_near(Point::new(1.0, 0.0), 0.1, 4).unwrap();
        assert!(r.n_segments() > n0 + 100);
        // analytic resampling keeps the length essentially unchanged
        assert!((r.length() - c.length()).abs() <= 1e-10, "dL={}", (r.length() - c.length()).abs());
        // segment count near the center roughly quadruples
        let near_before = count_near(&c, Point::new(1.0, 0.0), 0.1);
        let near_after = count_near(&r, Point::new(1.0, 0.0), 0.1);
        assert!(near_after >= 4 * near_before - 8, "{near_before} -> {near_after}");
    }

    fn count_near(c: &Curve, z: Point, radius: f64) -> usize {
        (0..c.n_segments())
            .filter(|&i| {
                let (a, b) = c.segment(i);
                point_segment_distance(z, a, b) <= radius
            })
            .count()
    }

    #[test]
    fn csv_round_trip() {
        let c = unit_circle(1e-2);
        let csv = c.to_csv();
        let back = Curve::from_csv(&csv).unwrap();
        assert_eq!(back.vertices().len(), c.vertices().len());
        assert!((back.length() - c.length()).abs() < 1e-12);
    }

    #[test]
    fn record_round_trip() {
        let c = unit_circle(1e-2);
        let rec = c.record();
        let json = serde_json::to_string(&rec).unwrap();
        let rec2: CurveRecord = serde_json::from_str(&json).unwrap();
        let back = Curve::from_record(&rec2).unwrap();
        assert!((back.length() - c.length()).abs() < 1e-12);
        assert!((back.diameter() - c.diameter()).abs() < 1e-12);
    }
}
