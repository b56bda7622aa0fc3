//! Built-in curve constructors: reference shapes (circle, ellipse, smooth
//! blob) and the four multi-scale example curves exercised by the
//! diagnostics and the acceptance suite, plus the matching log density.
//!
//! The infinitely-pieced constructions are truncated at a depth `N`; the
//! residual gap near the accumulation point 0 is closed with a straight
//! stitch whose length shrinks with the depth. All constructors return
//! fully validated positively oriented Jordan polylines with an attached
//! piecewise-analytic generator, so local refinement can resample the true
//! geometry.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::curve::{build_polyline, Curve, CurveError, Parametrization, ResolutionPolicy, Result};
use crate::density::Density;
use crate::geom::Point;

/// Sampling knobs for the zoo constructors.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ZooPolicy {
    /// Target chord length on unit-scale pieces.
    pub resolution: f64,
    /// Segment cap per dyadic piece (small pieces get proportionally fewer).
    pub dyadic_cap: usize,
}

impl Default for ZooPolicy {
    fn default() -> Self {
        Self {
            resolution: 2e-3,
            dyadic_cap: 64,
        }
    }
}

impl ZooPolicy {
    pub fn with_resolution(resolution: f64) -> Self {
        Self {
            resolution,
            ..Self::default()
        }
    }
}

/// Names accepted by the CLI.
pub const ZOO_NAMES: &[&str] = &["circle", "ellipse", "lyapunov", "ex1", "ex2", "ex3", "ex4"];

/// Build a zoo curve by CLI name.
pub fn by_name(name: &str, depth: usize, policy: &ZooPolicy) -> Result<Curve> {
    match name {
        "circle" => make_circle(1.0, policy),
        "ellipse" => make_ellipse(2.0, 1.0, policy),
        "lyapunov" => make_lyapunov_blob(0.1, 3, 1.0, policy),
        "ex1" => make_example1(depth, policy),
        "ex2" => make_example2(policy),
        "ex3" => make_example3(depth, policy),
        "ex4" => make_example4(depth, policy),
        other => Err(CurveError::Construction(format!("unknown zoo curve `{other}`"))),
    }
}

pub fn make_circle(radius: f64, policy: &ZooPolicy) -> Result<Curve> {
    assert!(radius > 0.0, "circle radius must be positive");
    let r = radius;
    let gen = Arc::new(move |u: f64| Point::new(r * (2.0 * PI * u).cos(), r * (2.0 * PI * u).sin()));
    build_polyline(
        gen,
        &ResolutionPolicy::with_chord(policy.resolution),
        "circle",
        json!({ "radius": radius }),
    )
}

pub fn make_ellipse(a: f64, b: f64, policy: &ZooPolicy) -> Result<Curve> {
    assert!(a > 0.0 && b > 0.0, "ellipse semi-axes must be positive");
    let gen = Arc::new(move |u: f64| Point::new(a * (2.0 * PI * u).cos(), b * (2.0 * PI * u).sin()));
    build_polyline(
        gen,
        &ResolutionPolicy::with_chord(policy.resolution),
        "ellipse",
        json!({ "a": a, "b": b }),
    )
}

/// Smooth perturbed circle whose tangent angle is a trigonometric
/// polynomial, hence Hoelder-alpha for every alpha in (0, 1]. The `alpha`
/// argument is recorded with the curve, not used in the construction.
pub fn make_lyapunov_blob(amplitude: f64, harmonics: usize, alpha: f64, policy: &ZooPolicy) -> Result<Curve> {
    let amp = amplitude;
    let h = harmonics.max(1);
    let gen = Arc::new(move |u: f64| {
        let phi = 2.0 * PI * u;
        let mut r = 1.0;
        for k in 1..=h {
            let kf = k as f64;
            r += amp * (kf * phi + 0.7 * kf).cos() / (kf * kf);
        }
        Point::new(r * phi.cos(), r * phi.sin())
    });
    build_polyline(
        gen,
        &ResolutionPolicy::with_chord(policy.resolution),
        "lyapunov",
        json!({ "amplitude": amplitude, "harmonics": h, "alpha": alpha }),
    )
}

// ---------------------------------------------------------------------------
// piecewise assembly

type PieceFn = Arc<dyn Fn(f64) -> Point + Send + Sync>;

struct PiecewisePath {
    pieces: Vec<PieceFn>,
}

impl Parametrization for PiecewisePath {
    fn point(&self, u: f64) -> Point {
        let p = self.pieces.len() as f64;
        let scaled = (u.clamp(0.0, 1.0)) * p;
        let k = (scaled.floor() as usize).min(self.pieces.len() - 1);
        let tau = scaled - k as f64;
        (self.pieces[k])(tau)
    }
}

struct Assembler {
    pieces: Vec<PieceFn>,
    counts: Vec<usize>,
}

impl Assembler {
    fn new() -> Self {
        Self {
            pieces: Vec::new(),
            counts: Vec::new(),
        }
    }

    fn piece<F>(&mut self, f: F, segments: usize)
    where
        F: Fn(f64) -> Point + Send + Sync + 'static,
    {
        self.pieces.push(Arc::new(f));
        self.counts.push(segments.max(1));
    }

    fn finish(self, id: &str, params: serde_json::Value) -> Result<Curve> {
        let p = self.pieces.len();
        let mut verts = Vec::new();
        let mut us = Vec::new();
        for (k, (f, &count)) in self.pieces.iter().zip(self.counts.iter()).enumerate() {
            let start = f(0.0);
            if k > 0 {
                let prev_end = (self.pieces[k - 1])(1.0);
                let gap = (start - prev_end).norm();
                let tol = 1e-9 * (1.0 + prev_end.norm());
                if gap > tol {
                    return Err(CurveError::Construction(format!(
                        "pieces {k} and {} fail to chain: gap {gap:.3e}",
                        k - 1
                    )));
                }
            }
            for j in 0..count {
                let tau = j as f64 / count as f64;
                verts.push(f(tau));
                us.push((k as f64 + tau) / p as f64);
            }
        }
        verts.push((self.pieces[p - 1])(1.0));
        us.push(1.0);
        let path = Arc::new(PiecewisePath { pieces: self.pieces });
        Curve::from_sampled_generator(verts, us, path, id.to_string(), params)
    }
}

fn segs_for_arc(span: f64, cap: usize) -> usize {
    ((span / 0.02).ceil() as usize).clamp(8, cap)
}

fn segs_for_segment(len: f64, h: f64, cap: usize) -> usize {
    ((len / h).ceil() as usize).clamp(2, cap)
}

// ---------------------------------------------------------------------------
// the four example curves

/// First example curve: upper unit semicircle, the segment [-1, 0], and a
/// dyadic cascade of real-axis segments, circular arcs of angle 2^-m and
/// spiral pieces r e^{ir}, truncated at depth `n`. Not of bounded rotation,
/// but the argument seen from every base point has bounded variation.
pub fn make_example1(n: usize, policy: &ZooPolicy) -> Result<Curve> {
    assert!(n >= 2, "depth must be at least 2");
    dyadic_example(n, policy, "ex1", |m| 0.5f64.powi(m as i32), |r| r)
}

/// Fourth example curve: same skeleton as the first, but the arcs span
/// angle 1/m and the spirals follow r e^{-i ln2/ln r}. Ahlfors-regular with
/// an explicit constant, yet the argument variation from 0 diverges
/// harmonically.
pub fn make_example4(n: usize, policy: &ZooPolicy) -> Result<Curve> {
    assert!(n >= 2, "depth must be at least 2");
    dyadic_example(n, policy, "ex4", |m| 1.0 / m as f64, |r| -(2.0f64.ln()) / r.ln())
}

/// Density paired with the fourth example: -1/(ln|t| - 1), zero at the
/// accumulation point.
pub fn make_density_example4() -> Density {
    Density::log_reciprocal()
}

/// Shared skeleton of examples 1 and 4. `arc_span(m)` is the angular span
/// of the radius-2^-m arc; `spiral_angle(r)` the polar angle of the spiral
/// at radius r. The two agree at every junction radius by construction.
fn dyadic_example(
    n: usize,
    policy: &ZooPolicy,
    id: &str,
    arc_span: impl Fn(usize) -> f64 + Copy,
    spiral_angle: impl Fn(f64) -> f64 + Send + Sync + Copy + 'static,
) -> Result<Curve> {
    let h = policy.resolution;
    let cap = policy.dyadic_cap;
    let mut asm = Assembler::new();
    let r_inner = 0.5f64.powi(2 * n as i32);

    // stitch from the accumulation point 0 out to the innermost retained arc
    asm.piece(move |t| Point::new(t * r_inner, 0.0), 2);

    for level in (1..=n).rev() {
        let m_hi = 2 * level; // inner arc index
        let m_lo = 2 * level - 1; // outer arc index
        let r_lo = 0.5f64.powi(m_hi as i32);
        let r_hi = 0.5f64.powi(m_lo as i32);

        // arc at radius 2^-m_hi from the real axis up to the spiral junction
        let span_hi = arc_span(m_hi);
        asm.piece(
            move |t| {
                let phi = t * span_hi;
                Point::new(r_lo * phi.cos(), r_lo * phi.sin())
            },
            segs_for_arc(span_hi, cap),
        );

        // spiral from radius 2^-2l out to 2^-(2l-1)
        asm.piece(
            move |t| {
                let r = r_lo * (1.0 + t); // linear radius over one octave
                let phi = spiral_angle(r);
                Point::new(r * phi.cos(), r * phi.sin())
            },
            32.min(cap).max(16),
        );

        // arc at radius 2^-m_lo traversed back down to the real axis
        let span_lo = arc_span(m_lo);
        asm.piece(
            move |t| {
                let phi = (1.0 - t) * span_lo;
                Point::new(r_hi * phi.cos(), r_hi * phi.sin())
            },
            segs_for_arc(span_lo, cap),
        );

        // real-axis segment [2^-(2l-1), 2^-(2l-2)]
        let seg_hi = 0.5f64.powi(m_lo as i32 - 1);
        asm.piece(
            move |t| Point::new(r_hi + t * (seg_hi - r_hi), 0.0),
            segs_for_segment(seg_hi - r_hi, h, cap),
        );
    }

    // upper unit semicircle from 1 to -1
    asm.piece(
        move |t| {
            let phi = t * PI;
            Point::new(phi.cos(), phi.sin())
        },
        ((PI / h).ceil() as usize).clamp(64, 20000),
    );

    // segment [-1, 0] back to the accumulation point
    asm.piece(
        move |t| Point::new(-1.0 + t, 0.0),
        ((1.0 / h).ceil() as usize).clamp(32, 20000),
    );

    asm.finish(id, json!({ "depth": n, "resolution": h }))
}

/// Radius where the real part of the spiral derivative first vanishes;
/// the spiral is t(r) = r exp(-i/ln r).
pub fn example2_turning_radius() -> f64 {
    let re_tprime = |r: f64| {
        let l = r.ln();
        let theta = -1.0 / l;
        theta.cos() - theta.sin() / (l * l)
    };
    let mut lo = 1e-3;
    let mut hi = lo;
    let mut prev = re_tprime(lo);
    let mut found = false;
    let mut r = lo;
    while r < 0.999 {
        r += 1e-4;
        let v = re_tprime(r);
        if prev > 0.0 && v <= 0.0 {
            hi = r;
            lo = r - 1e-4;
            found = true;
            break;
        }
        prev = v;
    }
    if !found {
        panic!("failed to bracket the turning radius");
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if re_tprime(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Second example curve: the smooth spiral arc t(r) = r exp(-i/ln r) up to
/// the first radius with vertical tangent, closed by the axis-aligned
/// ellipse through 0 and the spiral end. Smooth, and a Kral curve, while
/// the argument modulus of continuity at 0 fails the Dini test.
///
/// The spiral is sampled down to e^-200 so the variation tail 1/|ln r| is
/// resolved well below the acceptance tolerances.
pub fn make_example2(policy: &ZooPolicy) -> Result<Curve> {
    let r0 = example2_turning_radius();
    let t_end = spiral2_point(r0);
    let (ax, cy) = (t_end.re, t_end.im);
    if !(ax > 0.0 && cy > 0.0) {
        return Err(CurveError::Construction("degenerate spiral end".into()));
    }
    let r_min = (-200.0f64).exp();
    let h = policy.resolution;

    let mut asm = Assembler::new();
    // stitch 0 -> t(r_min)
    let start = spiral2_point(r_min);
    asm.piece(move |t| start * t, 2);
    // deep spiral: log-uniform in r, chords ~ 4% of the local radius
    let rel = 0.04;
    let r_break = (h / rel).min(0.5 * r0);
    let ln_lo = r_min.ln();
    let ln_break = r_break.ln();
    let deep_count = (((ln_break - ln_lo) / rel).ceil() as usize).max(64);
    asm.piece(
        move |t| {
            let l = ln_lo + t * (ln_break - ln_lo);
            spiral2_point(l.exp())
        },
        deep_count,
    );
    // outer spiral: uniform in r with chords ~ h
    let outer_count = (((r0 - r_break) / h).ceil() as usize).max(64);
    asm.piece(
        move |t| spiral2_point(r_break + t * (r0 - r_break)),
        outer_count,
    );
    // ellipse x^2/ax^2 + (y-cy)^2/cy^2 = 1 from the spiral end (psi = 0)
    // counterclockwise over the top back to the origin (psi = 3 pi / 2)
    let ell_count = ((1.5 * PI * ax.max(cy) / h).ceil() as usize).clamp(64, 20000);
    asm.piece(
        move |t| {
            let psi = t * 1.5 * PI;
            Point::new(ax * psi.cos(), cy + cy * psi.sin())
        },
        ell_count,
    );
    asm.finish("ex2", json!({ "r0": r0, "resolution": h }))
}

fn spiral2_point(r: f64) -> Point {
    let theta = -1.0 / r.ln();
    Point::new(r * theta.cos(), r * theta.sin())
}

/// Third example curve: the oscillating smooth arc
/// t(r) = r exp(-i (r/ln r) cos(pi/r)) for r in [2^-n, 1/2], closed by an
/// axis-aligned ellipse solved from the two glue conditions. Smooth, with
/// Hoelder-1/2 argument on each side arc, but its argument variation from
/// 0 grows without bound as the truncation deepens.
pub fn make_example3(n: usize, policy: &ZooPolicy) -> Result<Curve> {
    assert!(n >= 2, "depth must be at least 2");
    let h = policy.resolution;
    let q_max = 2u64.pow(n as u32) as f64; // r_min = 1/q_max = 2^-n
    let t_end = spiral3_point(0.5);
    let tangent = spiral3_tangent(0.5);

    // glue: ellipse (a cos psi, b + b sin psi) passes through t_end with the
    // counterclockwise direction parallel to `tangent`; psi1 in (0, pi/2)
    let f = |psi: f64| {
        let a = t_end.re / psi.cos();
        let b = t_end.im / (1.0 + psi.sin());
        -a * psi.sin() * tangent.im - b * psi.cos() * tangent.re
    };
    let mut lo = 1e-9;
    let mut hi = PI / 2.0 - 1e-9;
    if f(lo) <= 0.0 || f(hi) >= 0.0 {
        return Err(CurveError::Construction("ellipse glue root not bracketed".into()));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let psi1 = 0.5 * (lo + hi);
    let a = t_end.re / psi1.cos();
    let b = t_end.im / (1.0 + psi1.sin());

    let mut asm = Assembler::new();
    let r_min = 1.0 / q_max;
    let start = spiral3_point(r_min);
    asm.piece(move |t| start * t, 2);

    // oscillation intervals q = 1/r in [k, k+1], finest first; each interval
    // is one half-period of cos(pi/r) and gets >= 32 segments
    let mut q_hi = q_max;
    while q_hi > 2.0 {
        let q_lo = (q_hi - 1.0).max(2.0);
        let r_lo = 1.0 / q_hi;
        let r_hi = 1.0 / q_lo;
        let count = (((r_hi - r_lo) / h).ceil() as usize).clamp(32, 512);
        asm.piece(
            move |t| {
                let q = q_hi + t * (q_lo - q_hi);
                spiral3_point(1.0 / q)
            },
            count,
        );
        q_hi = q_lo;
    }

    // ellipse from psi1 counterclockwise to the origin at psi = 3 pi / 2
    let ell_count = (((1.5 * PI - psi1) * a.max(b) / h).ceil() as usize).clamp(64, 20000);
    asm.piece(
        move |t| {
            let psi = psi1 + t * (1.5 * PI - psi1);
            Point::new(a * psi.cos(), b + b * psi.sin())
        },
        ell_count,
    );
    asm.finish("ex3", json!({ "depth": n, "resolution": h, "ellipse_a": a, "ellipse_b": b }))
}

fn spiral3_angle(r: f64) -> f64 {
    -(r / r.ln()) * (PI / r).cos()
}

fn spiral3_point(r: f64) -> Point {
    let eta = spiral3_angle(r);
    Point::new(r * eta.cos(), r * eta.sin())
}

fn spiral3_tangent(r: f64) -> Point {
    let l = r.ln();
    let eta = spiral3_angle(r);
    let deta = -(((l - 1.0) / (l * l)) * (PI / r).cos() + PI * (PI / r).sin() / (r * l));
    let e = Point::new(eta.cos(), eta.sin());
    let v = e * Point::new(1.0, r * deta);
    v / v.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::TangentAngle;

    fn policy() -> ZooPolicy {
        ZooPolicy::default()
    }

    #[test]
    fn circle_and_ellipse_basics() {
        let c = make_circle(1.0, &policy()).unwrap();
        assert!((c.length() - 2.0 * PI).abs() < 1e-6 * 10.0);
        let e = make_ellipse(1.0, 1.0, &policy()).unwrap();
        // degenerate ellipse coincides with the circle
        for &s in &[0.0, 1.0, 3.0, 5.0] {
            let p = e.point_at(s);
            assert!((p.norm() - 1.0).abs() < 1e-9);
        }
        let e2 = make_ellipse(2.0, 1.0, &policy()).unwrap();
        assert!((e2.area() - 2.0 * PI).abs() < 1e-5);
        assert!((e2.diameter() - 4.0).abs() < 1e-6);
    }

    #[test]
    fn example1_constructs_and_chains() {
        for &n in &[2usize, 3, 6] {
            let c = make_example1(n, &policy()).unwrap();
            assert!((c.diameter() - 2.0).abs() < 1e-3);
            // lengths at successive depths differ by at most the small-piece mass
            if n == 3 {
                let c2 = make_example1(2, &policy()).unwrap();
                let dl = (c.length() - c2.length()).abs();
                assert!(dl <= 0.5f64.powi(3), "length gap {dl}");
            }
        }
    }

    #[test]
    fn example4_constructs() {
        let c = make_example4(6, &policy()).unwrap();
        assert!((c.diameter() - 2.0).abs() < 1e-3);
        // vertex at the accumulation point
        let (i, d) = c.closest_vertex(Point::new(0.0, 0.0));
        assert!(d == 0.0, "no vertex exactly at 0 (closest {i} at {d:.2e})");
    }

    #[test]
    fn example2_turning_radius_is_root() {
        let r0 = example2_turning_radius();
        let l = r0.ln();
        let theta = -1.0 / l;
        let re = theta.cos() - theta.sin() / (l * l);
        assert!(re.abs() <= 1e-10, "Re t'(r0) = {re:.3e}");
        assert!(r0 > 0.1 && r0 < 0.9);
    }

    #[test]
    fn example2_glues_smoothly() {
        let c = make_example2(&policy()).unwrap();
        let r0 = example2_turning_radius();
        let t_end = spiral2_point(r0);
        // locate the junction and compare one-sided tangents there
        let (i, d) = c.closest_vertex(t_end);
        assert!(d < 1e-9);
        let s = c.arc_coords()[i];
        match c.tangent_angle(s, 0.05) {
            TangentAngle::Smooth(_) => {}
            TangentAngle::Corner { incoming, outgoing } => {
                panic!("corner at spiral/ellipse junction: {incoming} vs {outgoing}")
            }
        }
        // tangent at the origin end tends to the positive real axis
        let near0 = c.point_at(1e-30);
        assert!(near0.im.abs() < 0.02 * near0.re.max(1e-300));
    }

    #[test]
    fn example3_constructs_and_variation_grows() {
        let c6 = make_example3(6, &policy()).unwrap();
        let c8 = make_example3(8, &policy()).unwrap();
        assert!(c8.n_segments() > c6.n_segments());
        // partial arg variation over the oscillating arc grows with depth
        let v6 = oscillation_variation(&c6);
        let v8 = oscillation_variation(&c8);
        assert!(v8 > v6, "v6={v6} v8={v8}");
    }

    fn oscillation_variation(c: &Curve) -> f64 {
        // direct vertex-wise variation of the polar angle along the arc part
        let mut v = 0.0;
        let mut prev: Option<f64> = None;
        for p in c.vertices() {
            let r = p.norm();
            if r == 0.0 || r > 0.5 {
                prev = None;
                continue;
            }
            let a = p.im.atan2(p.re);
            if let Some(q) = prev {
                v += (a - q).abs();
            }
            prev = Some(a);
        }
        v
    }

    #[test]
    fn lyapunov_blob_reduces_to_circle() {
        let c = make_lyapunov_blob(0.0, 3, 0.5, &policy()).unwrap();
        for &s in &[0.5, 2.0, 4.0] {
            assert!((c.point_at(s).norm() - 1.0).abs() < 1e-9);
        }
        let blob = make_lyapunov_blob(0.1, 3, 0.5, &policy()).unwrap();
        assert!(blob.area() > 0.0);
    }
}
