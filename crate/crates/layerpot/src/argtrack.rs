//! Continuous branches of arg(t - xi) along curve arcs, their variations,
//! and Stieltjes integrals against d arg(t - xi).
//!
//! On a straight chord the argument seen from an external point is
//! monotone, and its total increment is the signed angle between the end
//! vectors. Chord increments are therefore exact; recursive bisection is
//! only used where a sampled branch or a midpoint quadrature needs finer
//! granularity near the base point.

use serde::Serialize;

use crate::curve::{Curve, CurveError, Result};
use crate::density::Density;
use crate::geom::{angle_between, seg_annulus_intervals, seg_disk_complement, Accum, Point};
use crate::policy::{ConvergencePolicy, TracedLimit};

/// Per-sample continuity bound enforced while tracking.
pub const MAX_SUBTENDED: f64 = std::f64::consts::PI / 64.0;
/// Chord-to-distance ratio bound near the base point.
pub const CHORD_DIST_RATIO: f64 = 0.125;
const MAX_DEPTH: u32 = 48;

/// Geometric exclusion schedule delta_k = start * 2^-k, k = 0..steps.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DyadicSchedule {
    pub start: f64,
    pub steps: usize,
}

impl DyadicSchedule {
    pub fn new(start: f64, steps: usize) -> Self {
        assert!(steps >= 4, "schedule length must be at least 4");
        assert!(start > 0.0);
        Self { start, steps }
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.steps).map(move |k| self.start * 0.5f64.powi(k as i32))
    }
}

/// A continuous branch of arg(t - base) along an arc, with unwrapped values.
#[derive(Debug, Clone)]
pub struct ArgBranch {
    pub base: Point,
    /// (arc coordinate, unwrapped argument).
    pub samples: Vec<(f64, f64)>,
    /// Largest single-step increment encountered.
    pub subtended_max: f64,
}

impl ArgBranch {
    /// Total argument increment over the tracked arc.
    pub fn increment(&self) -> f64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(&(_, a)), Some(&(_, b))) => b - a,
            _ => 0.0,
        }
    }
}

/// Track a continuous branch of arg(t - xi) along the arc from arc
/// coordinate `s0` forward to `s1` (wrapping past the seam when `s1 <= s0`).
///
/// Fails when the arc passes too close to `xi` for refinement to resolve;
/// exclude a neighborhood of `xi` first.
pub fn track_arg(curve: &Curve, s_range: (f64, f64), xi: Point) -> Result<ArgBranch> {
    let len = curve.length();
    let (s0, mut s1) = s_range;
    if s1 <= s0 {
        s1 += len;
    }
    if s1 - s0 > len + 1e-9 * len {
        return Err(CurveError::Domain("arc longer than the curve".into()));
    }
    let min_dist = 1e-13 * curve.diameter();

    // walk vertices strictly inside (s0, s1), plus interpolated endpoints
    let mut pts: Vec<(f64, Point)> = Vec::new();
    pts.push((s0, curve.point_at(s0)));
    let arcs = curve.arc_coords();
    let n = curve.n_segments();
    let mut i = arcs.partition_point(|&a| a <= s0).min(n);
    let mut s_abs = arcs[i.min(n)];
    let mut wraps = 0.0;
    loop {
        let s_here = s_abs + wraps;
        if s_here >= s1 {
            break;
        }
        pts.push((s_here, curve.vertices()[i]));
        i += 1;
        if i >= n {
            i = 0;
            wraps += len;
        }
        s_abs = arcs[i];
    }
    pts.push((s1, curve.point_at(s1)));

    let mut samples: Vec<(f64, f64)> = Vec::new();
    let mut subtended_max: f64 = 0.0;
    let (s_first, p_first) = pts[0];
    let d0 = p_first - xi;
    if d0.norm() <= min_dist {
        return Err(CurveError::Singularity { dist: d0.norm() });
    }
    samples.push((s_first, d0.im.atan2(d0.re)));
    for w in pts.windows(2) {
        let (sa, pa) = w[0];
        let (sb, pb) = w[1];
        refine_branch(xi, sa, pa, sb, pb, min_dist, 0, &mut samples, &mut subtended_max)?;
    }
    Ok(ArgBranch {
        base: xi,
        samples,
        subtended_max,
    })
}

#[allow(clippy::too_many_arguments)]
fn refine_branch(
    xi: Point,
    sa: f64,
    pa: Point,
    sb: f64,
    pb: Point,
    min_dist: f64,
    depth: u32,
    samples: &mut Vec<(f64, f64)>,
    subtended_max: &mut f64,
) -> Result<()> {
    let va = pa - xi;
    let vb = pb - xi;
    if vb.norm() <= min_dist {
        return Err(CurveError::Singularity { dist: vb.norm() });
    }
    let mid = (pa + pb) * 0.5;
    let step = angle_between(va, vb);
    let fine = step.abs() <= MAX_SUBTENDED && (pb - pa).norm() <= CHORD_DIST_RATIO * (mid - xi).norm();
    if fine || depth >= MAX_DEPTH {
        if depth >= MAX_DEPTH && (mid - xi).norm() <= min_dist {
            return Err(CurveError::Singularity { dist: (mid - xi).norm() });
        }
        let prev = samples.last().unwrap().1;
        samples.push((sb, prev + step));
        *subtended_max = subtended_max.max(step.abs());
        return Ok(());
    }
    let sm = 0.5 * (sa + sb);
    refine_branch(xi, sa, pa, sm, mid, min_dist, depth + 1, samples, subtended_max)?;
    refine_branch(xi, sm, mid, sb, pb, min_dist, depth + 1, samples, subtended_max)
}

/// Variation of arg(t - xi) over the curve minus the closed delta-disk
/// around xi. The walk is anchored at the curve point nearest xi, follows
/// the orientation, and counts principal jumps across excluded gaps (but
/// not across the anchor itself). Chord contributions are exact.
pub fn arg_variation(curve: &Curve, xi: Point, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(CurveError::Domain("exclusion radius must be positive".into()));
    }
    variation_walk(curve, xi, delta, None)
}

/// Variation of arg(t - xi) over the annulus delta < |t - xi| <= outer.
pub fn arg_variation_within(curve: &Curve, xi: Point, outer: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < outer) {
        return Err(CurveError::Domain("need 0 < delta < outer".into()));
    }
    variation_walk(curve, xi, delta, Some(outer))
}

fn variation_walk(curve: &Curve, xi: Point, delta: f64, outer: Option<f64>) -> Result<f64> {
    let n = curve.n_segments();
    let (anchor, _) = curve.closest_vertex(xi);
    let mut acc = Accum::new();
    let mut prev: Option<Point> = None;
    for k in 0..n {
        let i = (anchor + k) % n;
        let (a, b) = curve.segment(i);
        let kept = match outer {
            None => seg_disk_complement(a, b, xi, delta),
            Some(r) => seg_annulus_intervals(a, b, xi, delta, Some(r)),
        };
        for (u0, u1) in kept {
            let pa = a + (b - a) * u0;
            let pb = a + (b - a) * u1;
            if let Some(p) = prev {
                // bridge across an excluded gap (zero when contiguous)
                acc.add(angle_between(p - xi, pa - xi).abs());
            }
            acc.add(angle_between(pa - xi, pb - xi).abs());
            prev = Some(pb);
        }
    }
    Ok(acc.value())
}

/// Variation estimates over a shrinking exclusion schedule, classified by
/// the shared convergence policy. Divergence is a result, not an error.
pub fn total_arg_variation(
    curve: &Curve,
    xi: Point,
    schedule: &DyadicSchedule,
    policy: &ConvergencePolicy,
) -> Result<TracedLimit> {
    let mut trace = Vec::with_capacity(schedule.steps);
    for delta in schedule.values() {
        trace.push((delta, arg_variation(curve, xi, delta)?));
    }
    Ok(TracedLimit::from_trace(trace, policy))
}

/// Stieltjes integral of (g(t) - g(xi)) d arg(t - xi) over the annulus
/// delta < |t - xi| <= eps (`None` means the whole curve outside delta).
///
/// Midpoint rule per refined chord: the argument increment is exact, the
/// density is evaluated at chord midpoints.
pub fn stieltjes_arg_integral(
    curve: &Curve,
    density: &Density,
    xi: Point,
    delta: f64,
    eps: Option<f64>,
) -> Result<f64> {
    if let Some(e) = eps {
        if !(delta < e) {
            return Err(CurveError::Domain(format!("need delta < eps, got {delta} >= {e}")));
        }
    }
    if !(delta > 0.0) {
        return Err(CurveError::Domain("exclusion radius must be positive".into()));
    }
    let (vi, _) = curve.closest_vertex(xi);
    let s_xi = curve.arc_coords()[vi];
    let g_xi = density.eval(xi, s_xi);
    let mut acc = Accum::new();
    for i in 0..curve.n_segments() {
        let (a, b) = curve.segment(i);
        let (s0, s1) = curve.segment_span(i);
        for (u0, u1) in seg_annulus_intervals(a, b, xi, delta, eps) {
            let pa = a + (b - a) * u0;
            let pb = a + (b - a) * u1;
            let sa = s0 + u0 * (s1 - s0);
            let sb = s0 + u1 * (s1 - s0);
            stieltjes_chord(density, xi, g_xi, pa, sa, pb, sb, 0, &mut acc);
        }
    }
    Ok(acc.value())
}

#[allow(clippy::too_many_arguments)]
fn stieltjes_chord(
    density: &Density,
    xi: Point,
    g_xi: f64,
    pa: Point,
    sa: f64,
    pb: Point,
    sb: f64,
    depth: u32,
    acc: &mut Accum,
) {
    let step = angle_between(pa - xi, pb - xi);
    let mid = (pa + pb) * 0.5;
    let fine = step.abs() <= MAX_SUBTENDED && (pb - pa).norm() <= CHORD_DIST_RATIO * (mid - xi).norm();
    if fine || depth >= MAX_DEPTH {
        let sm = 0.5 * (sa + sb);
        acc.add((density.eval(mid, sm) - g_xi) * step);
        return;
    }
    let sm = 0.5 * (sa + sb);
    stieltjes_chord(density, xi, g_xi, pa, sa, mid, sm, depth + 1, acc);
    stieltjes_chord(density, xi, g_xi, mid, sm, pb, sb, depth + 1, acc);
}
