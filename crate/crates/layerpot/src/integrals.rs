//! Cauchy-type integrals off the curve, principal-value boundary
//! formulas, boundary-limit extrapolation and the boundary-criterion
//! functional.
//!
//! Per chord with a linear density the integral of g(t)/(t - z) has a
//! closed form built on the principal log of the end-vector ratio, so a
//! constant density integrates to exactly 2 pi i times the winding
//! number. Adaptive subdivision (resampling the generator where one is
//! attached) controls the geometric and density-interpolation error.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::argtrack::{stieltjes_arg_integral, DyadicSchedule};
use crate::curve::{Curve, CurveError, Result, TangentAngle};
use crate::density::Density;
use crate::geom::{seg_disk_complement, Point};
use crate::policy::{ConvergencePolicy, Trend};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Closed-form integral of a linear density over one chord:
/// g(u) = ga + u (gb - ga) on t = a + u (b - a), integrand g/(t - z).
fn chord_integral(a: Point, b: Point, ga: f64, gb: f64, z: Point) -> Complex64 {
    let d = b - a;
    let w = a - z;
    let l = ((b - z) / w).ln(); // principal: |Im| = subtended angle < pi
    let dg = gb - ga;
    Complex64::new(ga, 0.0) * l + Complex64::new(dg, 0.0) * (Complex64::new(1.0, 0.0) - (w / d) * l)
}

struct ChordCtx<'a> {
    curve: &'a Curve,
    density: &'a Density,
    z: Point,
    shift: f64, // subtracted from the density (g(xi) for reduced integrals)
    tol_per_len: f64,
}

/// Recursive chord evaluation. Midpoints come from the generator when one
/// is attached (true geometry), otherwise from the chord itself.
#[allow(clippy::too_many_arguments)]
fn eval_chord(
    ctx: &ChordCtx<'_>,
    seg: usize,
    ua: f64,
    ub: f64,
    pa: Point,
    pb: Point,
    ga: f64,
    gb: f64,
    depth: u32,
    out: &mut Complex64,
) -> Result<()> {
    let chord = (pb - pa).norm();
    let lin_mid = (pa + pb) * 0.5;
    // generator-backed midpoint if available; u are per-segment fractions
    let (pm, sm) = self::midpoint(ctx.curve, seg, ua, ub, lin_mid);
    let gm = ctx.density.eval(pm, sm) - ctx.shift;
    let dist = (pm - ctx.z).norm();
    if dist < 1e-14 * ctx.curve.diameter().max(1.0) {
        return Err(CurveError::Singularity { dist });
    }
    let sag = (pm - lin_mid).norm();
    let g_nonlin = (gm - 0.5 * (ga + gb)).abs();
    let g_scale = ga.abs().max(gb.abs()).max(1.0);
    let err_density = sag * g_scale / (dist * dist) + g_nonlin / dist;
    let fine = chord <= 2.0 * dist && err_density <= ctx.tol_per_len;
    if fine || depth >= 40 {
        *out += chord_integral(pa, pb, ga, gb, ctx.z);
        return Ok(());
    }
    let um = 0.5 * (ua + ub);
    eval_chord(ctx, seg, ua, um, pa, pm, ga, gm, depth + 1, out)?;
    eval_chord(ctx, seg, um, ub, pm, pb, gm, gb, depth + 1, out)
}

/// Point and arc coordinate at per-segment fraction (ua+ub)/2; resamples
/// the generator when the curve carries one.
fn midpoint(curve: &Curve, seg: usize, ua: f64, ub: f64, lin_mid: Point) -> (Point, f64) {
    let (s0, s1) = curve.segment_span(seg);
    let um = 0.5 * (ua + ub);
    let sm = s0 + um * (s1 - s0);
    match curve.generator_point(seg, um) {
        Some(p) => (p, sm),
        None => (lin_mid, sm),
    }
}

fn integral_pass(curve: &Curve, density: &Density, z: Point, shift: f64, tol: f64) -> Result<Complex64> {
    let ctx = ChordCtx {
        curve,
        density,
        z,
        shift,
        tol_per_len: tol / curve.length(),
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..curve.n_segments() {
        let (a, b) = curve.segment(i);
        let (s0, s1) = curve.segment_span(i);
        let ga = density.eval(a, s0) - shift;
        let gb = density.eval(b, s1) - shift;
        eval_chord(&ctx, i, 0.0, 1.0, a, b, ga, gb, 0, &mut acc)?;
    }
    Ok(acc)
}

/// Cauchy-type integral (1/2 pi i) contour integral of g(t)/(t - z) dt for
/// z off the curve. Refines until two successive passes agree within
/// `tol * max(1, 1/dist(z, curve))`.
pub fn cauchy_integral(curve: &Curve, density: &Density, z: Point, tol: f64) -> Result<Complex64> {
    let dist = curve.distance_to(z);
    if dist < 1e-12 {
        return Err(CurveError::Singularity { dist });
    }
    let bound = tol * 1.0f64.max(1.0 / dist);
    let inv_2pii = Complex64::new(0.0, -1.0 / TWO_PI);
    let mut prev = integral_pass(curve, density, z, 0.0, tol)? * inv_2pii;
    for round in 1..=2 {
        let finer = integral_pass(curve, density, z, 0.0, tol * 0.0625f64.powi(round))? * inv_2pii;
        if (finer - prev).norm() <= bound {
            return Ok(finer);
        }
        prev = finer;
    }
    Ok(prev)
}

/// Real part of the Cauchy-type integral: the double layer potential.
pub fn double_layer_potential(curve: &Curve, density: &Density, z: Point, tol: f64) -> Result<f64> {
    Ok(cauchy_integral(curve, density, z, tol)?.re)
}

/// Reduced singular integral: partials of (g(t) - g(xi))/(t - xi) over the
/// curve minus a shrinking disk, with per-component trend classification.
#[derive(Debug, Clone, Serialize)]
pub struct PVResult {
    pub value: (f64, f64),
    /// (delta, Re partial, Im partial), delta strictly decreasing.
    pub trace: Vec<(f64, f64, f64)>,
    pub re_trend: Trend,
    pub im_trend: Trend,
}

impl PVResult {
    pub fn value_c(&self) -> Complex64 {
        Complex64::new(self.value.0, self.value.1)
    }

    pub fn fully_converged(&self) -> bool {
        self.re_trend == Trend::Converged && self.im_trend == Trend::Converged
    }

    pub fn im_converged(&self) -> bool {
        self.im_trend == Trend::Converged
    }
}

pub fn pv_reduced_singular(
    curve: &Curve,
    density: &Density,
    xi: Point,
    schedule: &DyadicSchedule,
    policy: &ConvergencePolicy,
) -> Result<PVResult> {
    let (vi, _) = curve.closest_vertex(xi);
    let s_xi = curve.arc_coords()[vi];
    let g_xi = density.eval(xi, s_xi);
    let tol = (policy.tol * 1e-3).max(1e-12);
    let mut trace = Vec::with_capacity(schedule.steps);
    for delta in schedule.values() {
        let mut acc = Complex64::new(0.0, 0.0);
        let ctx = ChordCtx {
            curve,
            density,
            z: xi,
            shift: g_xi,
            tol_per_len: tol / curve.length(),
        };
        for i in 0..curve.n_segments() {
            let (a, b) = curve.segment(i);
            let (s0, s1) = curve.segment_span(i);
            for (u0, u1) in seg_disk_complement(a, b, xi, delta) {
                let pa = a + (b - a) * u0;
                let pb = a + (b - a) * u1;
                let ga = density.eval(pa, s0 + u0 * (s1 - s0)) - g_xi;
                let gb = density.eval(pb, s0 + u1 * (s1 - s0)) - g_xi;
                eval_chord(&ctx, i, u0, u1, pa, pb, ga, gb, 0, &mut acc)?;
            }
        }
        trace.push((delta, acc.re, acc.im));
    }
    let re_vals: Vec<f64> = trace.iter().map(|t| t.1).collect();
    let im_vals: Vec<f64> = trace.iter().map(|t| t.2).collect();
    Ok(PVResult {
        value: (*re_vals.last().unwrap(), *im_vals.last().unwrap()),
        trace,
        re_trend: policy.classify(&re_vals),
        im_trend: policy.classify(&im_vals),
    })
}

/// One-sided boundary values assembled from the reduced singular integral.
/// Degrades to real parts only when just the imaginary part converges.
#[derive(Debug, Clone, Serialize)]
pub enum SokhotskiValues {
    Full {
        plus: (f64, f64),
        minus: (f64, f64),
    },
    RealOnly {
        plus_re: f64,
        minus_re: f64,
    },
    NotConverged,
}

impl SokhotskiValues {
    pub fn plus_re(&self) -> Option<f64> {
        match self {
            SokhotskiValues::Full { plus, .. } => Some(plus.0),
            SokhotskiValues::RealOnly { plus_re, .. } => Some(*plus_re),
            SokhotskiValues::NotConverged => None,
        }
    }

    pub fn minus_re(&self) -> Option<f64> {
        match self {
            SokhotskiValues::Full { minus, .. } => Some(minus.0),
            SokhotskiValues::RealOnly { minus_re, .. } => Some(*minus_re),
            SokhotskiValues::NotConverged => None,
        }
    }
}

pub fn sokhotski_values(
    curve: &Curve,
    density: &Density,
    xi: Point,
    schedule: &DyadicSchedule,
    policy: &ConvergencePolicy,
) -> Result<(SokhotskiValues, PVResult)> {
    let pv = pv_reduced_singular(curve, density, xi, schedule, policy)?;
    let (vi, _) = curve.closest_vertex(xi);
    let g_xi = density.eval(xi, curve.arc_coords()[vi]);
    let values = if pv.fully_converged() {
        let jump = pv.value_c() * Complex64::new(0.0, -1.0 / TWO_PI); // pv / (2 pi i)
        SokhotskiValues::Full {
            plus: (g_xi + jump.re, jump.im),
            minus: (jump.re, jump.im),
        }
    } else if pv.im_converged() {
        let re_part = pv.value.1 / TWO_PI; // Re(pv / 2 pi i) = Im pv / 2 pi
        SokhotskiValues::RealOnly {
            plus_re: g_xi + re_part,
            minus_re: re_part,
        }
    } else {
        SokhotskiValues::NotConverged
    };
    Ok((values, pv))
}

/// Approach side for boundary limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Interior,
    Exterior,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryValueResult {
    pub xi: (f64, f64),
    pub side: Side,
    pub direction: (f64, f64),
    /// (h, Re g~ at xi + h * direction).
    pub approach: Vec<(f64, f64)>,
    pub extrapolated: f64,
    pub converged: bool,
    /// Boundary formula value (when the Stieltjes limit converged).
    pub formula: Option<f64>,
    pub discrepancy: Option<f64>,
}

/// Richardson-extrapolated boundary limit of Re g~ along a geometric
/// approach schedule, checked against the boundary formula value.
///
/// The approach direction is the one-sided-tangent normal; when approach
/// points fail the winding-number membership test the direction fans out
/// around the normal until every point lies on the requested side.
pub fn boundary_limit(
    curve: &Curve,
    density: &Density,
    xi: Point,
    side: Side,
    h0: f64,
    steps: usize,
    policy: &ConvergencePolicy,
) -> Result<BoundaryValueResult> {
    assert!(steps >= 4);
    let (vi, _) = curve.closest_vertex(xi);
    let s_xi = curve.arc_coords()[vi];
    let tangent = curve.tangent_angle(s_xi, 1e-9).angle();
    let inward = tangent + std::f64::consts::FRAC_PI_2;
    let base = match side {
        Side::Interior => inward,
        Side::Exterior => inward + std::f64::consts::PI,
    };
    let want = match side {
        Side::Interior => 1,
        Side::Exterior => 0,
    };
    let hs: Vec<f64> = (0..steps).map(|k| h0 * 0.5f64.powi(k as i32)).collect();
    let mut chosen: Option<f64> = None;
    'fan: for spread in [
        0.0, 0.17, -0.17, 0.35, -0.35, 0.52, -0.52, 0.7, -0.7, 0.87, -0.87, 1.05, -1.05,
    ] {
        let ang = base + spread;
        let dir = Point::new(ang.cos(), ang.sin());
        for &h in &hs {
            if curve.winding(xi + dir * h) != want {
                continue 'fan;
            }
        }
        chosen = Some(ang);
        break;
    }
    let ang = chosen.ok_or_else(|| {
        CurveError::Construction(format!(
            "no admissible approach direction at ({}, {})",
            xi.re, xi.im
        ))
    })?;
    let dir = Point::new(ang.cos(), ang.sin());

    let approach: Vec<(f64, f64)> = hs
        .par_iter()
        .map(|&h| {
            let z = xi + dir * h;
            double_layer_potential(curve, density, z, 1e-9).map(|v| (h, v))
        })
        .collect::<Result<Vec<_>>>()?;

    // local density modulus at the approach scales, for the stop rule
    let g_xi = density.eval(xi, s_xi);
    let local_omega = |h: f64| -> f64 {
        let mut w: f64 = 0.0;
        for &ds in &[-1.0, -0.5, 0.5, 1.0] {
            let s = s_xi + ds * h;
            let p = curve.point_at(s);
            w = w.max((density.eval(p, s) - g_xi).abs());
        }
        w
    };

    // order-1 Richardson: e_k = 2 v_{k+1} - v_k
    let ext: Vec<f64> = approach.windows(2).map(|w| 2.0 * w[1].1 - w[0].1).collect();
    let mut extrapolated = *ext.last().unwrap();
    let mut converged = false;
    for k in 1..ext.len() {
        let tol_k = 1e-6 + 1e-3 * local_omega(approach[k].0);
        if (ext[k] - ext[k - 1]).abs() < tol_k {
            extrapolated = ext[k];
            converged = true;
        }
    }

    // boundary formula via the Stieltjes limit
    let schedule = DyadicSchedule::new(0.25 * curve.diameter(), 18);
    let mut st_trace = Vec::new();
    for delta in schedule.values() {
        st_trace.push((delta, stieltjes_arg_integral(curve, density, xi, delta, None)?));
    }
    let st_vals: Vec<f64> = st_trace.iter().map(|t| t.1).collect();
    let st_trend = policy.classify(&st_vals);
    let formula = if st_trend == Trend::Converged {
        let st = *st_vals.last().unwrap();
        Some(match side {
            Side::Interior => g_xi + st / TWO_PI,
            Side::Exterior => st / TWO_PI,
        })
    } else {
        None
    };
    let discrepancy = formula.map(|f| (extrapolated - f).abs());
    Ok(BoundaryValueResult {
        xi: (xi.re, xi.im),
        side,
        direction: (dir.re, dir.im),
        approach,
        extrapolated,
        converged,
        formula,
        discrepancy,
    })
}

/// Sampled boundary-criterion functional: sup over the base-point grid and
/// the exclusion grid of |integral of (g - g(xi)) d arg(t - xi)| over the
/// annulus (delta, eps]. A lower bound of the true sup-sup.
pub fn criterion_functional(
    curve: &Curve,
    density: &Density,
    eps: f64,
    xi_grid: &[Point],
    delta_grid: &[f64],
) -> Result<f64> {
    for &d in delta_grid {
        if !(d > 0.0 && d < eps) {
            return Err(CurveError::Domain(format!("delta {d} outside (0, eps)")));
        }
    }
    let sups: Vec<f64> = xi_grid
        .par_iter()
        .map(|&xi| {
            let mut best: f64 = 0.0;
            for &delta in delta_grid {
                match stieltjes_arg_integral(curve, density, xi, delta, Some(eps)) {
                    Ok(v) => best = best.max(v.abs()),
                    Err(_) => {}
                }
            }
            best
        })
        .collect();
    Ok(sups.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{self, ZooPolicy};
    use std::f64::consts::PI;

    fn circle() -> Curve {
        zoo::make_circle(1.0, &ZooPolicy::with_resolution(1e-3)).unwrap()
    }

    /// Independent oracle: plain midpoint rule on the analytic circle
    /// parameterization (spectrally accurate for off-curve points).
    fn circle_oracle(g: impl Fn(Point) -> f64, z: Point, n: usize) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let phi = TWO_PI * (k as f64 + 0.5) / n as f64;
            let t = Point::new(phi.cos(), phi.sin());
            let dt = Complex64::new(0.0, 1.0) * t * (TWO_PI / n as f64);
            acc += g(t) * dt / (t - z);
        }
        acc * Complex64::new(0.0, -1.0 / TWO_PI)
    }

    #[test]
    fn cauchy_constant_density() {
        let c = circle();
        let g = Density::constant(1.0);
        let inside = cauchy_integral(&c, &g, Point::new(0.3, 0.1), 1e-8).unwrap();
        assert!((inside - Complex64::new(1.0, 0.0)).norm() < 1e-8);
        let outside = cauchy_integral(&c, &g, Point::new(3.0, 0.0), 1e-8).unwrap();
        assert!(outside.norm() < 1e-8);
    }

    #[test]
    fn cauchy_re_density_residue_values() {
        let c = circle();
        let g = Density::re_part();
        // interior: z/2 by the residue computation on (t + 1/t)/2
        for &(x, y) in &[(0.3, 0.1), (-0.4, 0.2), (0.0, 0.55), (0.1, -0.6)] {
            let z = Point::new(x, y);
            let got = cauchy_integral(&c, &g, z, 1e-9).unwrap();
            assert!((got - z * 0.5).norm() < 1e-7, "z={z} got {got}");
            let oracle = circle_oracle(|t| t.re, z, 4096);
            assert!((got - oracle).norm() < 1e-7);
        }
        // exterior: -1/(2z), the residue at the origin only
        let z = Point::new(2.0, 0.0);
        let got = cauchy_integral(&c, &g, z, 1e-9).unwrap();
        assert!((got - Complex64::new(-0.25, 0.0)).norm() < 1e-7, "got {got}");
        let oracle = circle_oracle(|t| t.re, z, 4096);
        assert!((got - oracle).norm() < 1e-9);
    }

    #[test]
    fn singularity_error_on_curve() {
        let c = circle();
        let g = Density::constant(1.0);
        assert!(matches!(
            cauchy_integral(&c, &g, Point::new(1.0, 0.0), 1e-8),
            Err(CurveError::Singularity { .. })
        ));
    }

    #[test]
    fn double_layer_is_re_part() {
        let c = circle();
        let g = Density::log_reciprocal();
        let z = Point::new(-0.5, 0.3);
        let full = cauchy_integral(&c, &g, z, 1e-8).unwrap();
        let re = double_layer_potential(&c, &g, z, 1e-8).unwrap();
        assert_eq!(full.re, re);
    }

    #[test]
    fn pv_constant_density_vanishes() {
        let c = circle();
        let g = Density::constant(4.0);
        let pv = pv_reduced_singular(
            &c,
            &g,
            Point::new(1.0, 0.0),
            &DyadicSchedule::new(0.25, 8),
            &ConvergencePolicy::default(),
        )
        .unwrap();
        for (_, re, im) in &pv.trace {
            assert_eq!(*re, 0.0);
            assert_eq!(*im, 0.0);
        }
    }

    #[test]
    fn pv_re_density_imaginary_part() {
        // Im PV = -pi at xi = 1 (from the boundary value 1/2 = g + St/2pi)
        let c = circle();
        let g = Density::re_part();
        let pv = pv_reduced_singular(
            &c,
            &g,
            Point::new(1.0, 0.0),
            &DyadicSchedule::new(0.25, 12),
            &ConvergencePolicy::with_tol(1e-4),
        )
        .unwrap();
        assert!(pv.im_converged());
        assert!((pv.value.1 + PI).abs() < 1e-4, "Im PV = {}", pv.value.1);
    }

    #[test]
    fn sokhotski_constant_density() {
        let c = circle();
        let g = Density::constant(1.0);
        let (vals, _) = sokhotski_values(
            &c,
            &g,
            Point::new(0.0, 1.0),
            &DyadicSchedule::new(0.25, 8),
            &ConvergencePolicy::default(),
        )
        .unwrap();
        match vals {
            SokhotskiValues::Full { plus, minus } => {
                assert!((plus.0 - 1.0).abs() < 1e-12 && plus.1.abs() < 1e-12);
                assert!(minus.0.abs() < 1e-12 && minus.1.abs() < 1e-12);
            }
            _ => panic!("constant density must converge fully"),
        }
    }

    #[test]
    fn sokhotski_re_density_jump() {
        let c = circle();
        let g = Density::re_part();
        let xi = Point::new(1.0, 0.0);
        let (vals, _) = sokhotski_values(
            &c,
            &g,
            xi,
            &DyadicSchedule::new(0.25, 14),
            &ConvergencePolicy::with_tol(1e-4),
        )
        .unwrap();
        let plus = vals.plus_re().unwrap();
        let minus = vals.minus_re().unwrap();
        assert!((plus - 0.5).abs() < 1e-3, "Re+ {plus}");
        assert!((minus + 0.5).abs() < 1e-3, "Re- {minus}");
        // jump identity holds by construction
        assert!((plus - minus - 1.0).abs() < 1e-12);
    }

    #[test]
    fn boundary_limit_constant() {
        let c = circle();
        let g = Density::constant(1.0);
        let res = boundary_limit(
            &c,
            &g,
            Point::new(1.0, 0.0),
            Side::Interior,
            0.1,
            10,
            &ConvergencePolicy::default(),
        )
        .unwrap();
        assert!(res.converged);
        assert!((res.extrapolated - 1.0).abs() < 1e-6);
        assert!(res.discrepancy.unwrap() < 1e-6);
    }

    #[test]
    fn boundary_limit_re_density() {
        let c = circle();
        let g = Density::re_part();
        let res = boundary_limit(
            &c,
            &g,
            Point::new(1.0, 0.0),
            Side::Interior,
            0.05,
            11,
            &ConvergencePolicy::default(),
        )
        .unwrap();
        assert!((res.extrapolated - 0.5).abs() < 1e-4, "limit {}", res.extrapolated);
        assert!(res.discrepancy.unwrap() < 1e-4);
    }

    #[test]
    fn criterion_zero_for_constant() {
        let c = circle();
        let g = Density::constant(2.0);
        let xi = vec![Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
        let v = criterion_functional(&c, &g, 0.25, &xi, &[0.125, 0.0625]).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn harmonic_mean_value_probe() {
        let c = circle();
        let g = Density::re_part();
        let z0 = Point::new(0.2, 0.3);
        let r = 1e-2 * c.distance_to(z0);
        let center = double_layer_potential(&c, &g, z0, 1e-9).unwrap();
        let mut ring = 0.0;
        let m = 5;
        for k in 0..m {
            let phi = TWO_PI * k as f64 / m as f64;
            ring += double_layer_potential(&c, &g, z0 + Point::new(r * phi.cos(), r * phi.sin()), 1e-9)
                .unwrap();
        }
        assert!((ring / m as f64 - center).abs() < 1e-6);
    }

    #[test]
    fn decay_at_infinity() {
        let c = circle();
        let g = Density::re_part();
        let mut fitted: Vec<f64> = Vec::new();
        for &radius in &[20.0, 40.0, 80.0] {
            let z = Point::new(radius, radius * 0.3);
            let v = cauchy_integral(&c, &g, z, 1e-10).unwrap();
            fitted.push(v.norm() * z.norm());
        }
        // |g~| <= C/|z| with a stable fitted constant
        for w in fitted.windows(2) {
            assert!((w[1] - w[0]).abs() < 0.05 * w[0].max(1e-12));
        }
    }

    #[test]
    fn linearity_in_the_density() {
        let c = circle();
        let z = Point::new(0.4, -0.2);
        let g1 = cauchy_integral(&c, &Density::re_part(), z, 1e-10).unwrap();
        let g2 = cauchy_integral(&c, &Density::im_part(), z, 1e-10).unwrap();
        // a g1 + b g2 with a=2, b=-3 against the table density built from the rule
        let combo = Density::from_table({
            let mut v = Vec::new();
            let n = c.n_segments();
            for i in 0..=n {
                let s = c.arc_coords()[i.min(n - 1)];
                let p = c.point_at(s);
                v.push((s, 2.0 * p.re - 3.0 * p.im));
            }
            v
        });
        let gc = cauchy_integral(&c, &combo, z, 1e-10).unwrap();
        assert!((gc - (g1 * 2.0 - g2 * 3.0)).norm() < 1e-6, "combo {gc}");
    }

    #[test]
    fn pv_imaginary_part_matches_stieltjes() {
        let c = circle();
        let g = Density::re_part();
        let xi = Point::new(0.0, 1.0);
        let pv = pv_reduced_singular(
            &c,
            &g,
            xi,
            &DyadicSchedule::new(0.25, 12),
            &ConvergencePolicy::with_tol(1e-4),
        )
        .unwrap();
        let st = stieltjes_arg_integral(&c, &g, xi, 0.25 * 0.5f64.powi(11), None).unwrap();
        assert!((pv.value.1 - st).abs() < 1e-4, "{} vs {}", pv.value.1, st);
    }
}
