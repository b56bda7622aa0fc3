//! Plane geometry primitives shared by the curve model and the integral
//! evaluators: signed angles, segment clipping against disks, robust
//! segment intersection tests, convex-hull diameter and winding numbers.

use num_complex::Complex64;

/// A point of the complex plane.
pub type Point = Complex64;

pub fn cross(a: Point, b: Point) -> f64 {
    a.re * b.im - a.im * b.re
}

pub fn dot(a: Point, b: Point) -> f64 {
    a.re * b.re + a.im * b.im
}

/// Signed angle from `a` to `b` in (-pi, pi].
///
/// This is the exact argument increment subtended by the straight segment
/// that moves a viewpoint-anchored ray from direction `a` to direction `b`.
pub fn angle_between(a: Point, b: Point) -> f64 {
    cross(a, b).atan2(dot(a, b))
}

/// Compensated (Neumaier) accumulator. Summation order is fixed by the
/// caller, so results are bit-reproducible run to run.
#[derive(Debug, Clone, Copy, Default)]
pub struct Accum {
    sum: f64,
    comp: f64,
}

impl Accum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Interval of the segment parameter u in [0,1] with |p(u) - center| <= radius,
/// where p(u) = a + u (b - a). Returns `None` when the segment misses the disk.
pub fn seg_disk_interval(a: Point, b: Point, center: Point, radius: f64) -> Option<(f64, f64)> {
    let d = b - a;
    let w = a - center;
    let qa = dot(d, d);
    if qa == 0.0 {
        return if w.norm() <= radius { Some((0.0, 1.0)) } else { None };
    }
    let qb = 2.0 * dot(d, w);
    let qc = dot(w, w) - radius * radius;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc <= 0.0 {
        // tangency has zero measure; treat as a miss
        return None;
    }
    let s = disc.sqrt();
    let u0 = ((-qb - s) / (2.0 * qa)).max(0.0);
    let u1 = ((-qb + s) / (2.0 * qa)).min(1.0);
    if u0 < u1 {
        Some((u0, u1))
    } else {
        None
    }
}

/// Parts of [0,1] lying outside the closed disk (complement of
/// [`seg_disk_interval`]); at most two intervals.
pub fn seg_disk_complement(a: Point, b: Point, center: Point, radius: f64) -> Vec<(f64, f64)> {
    match seg_disk_interval(a, b, center, radius) {
        None => vec![(0.0, 1.0)],
        Some((u0, u1)) => {
            let mut out = Vec::with_capacity(2);
            if u0 > 0.0 {
                out.push((0.0, u0));
            }
            if u1 < 1.0 {
                out.push((u1, 1.0));
            }
            out
        }
    }
}

/// Parameter ranges of the segment inside the annulus `inner < |p - c| <= outer`.
pub fn seg_annulus_intervals(
    a: Point,
    b: Point,
    center: Point,
    inner: f64,
    outer: Option<f64>,
) -> Vec<(f64, f64)> {
    let keep_outer: Vec<(f64, f64)> = match outer {
        Some(r) => match seg_disk_interval(a, b, center, r) {
            Some(iv) => vec![iv],
            None => return Vec::new(),
        },
        None => vec![(0.0, 1.0)],
    };
    let mut out = Vec::new();
    for (lo, hi) in keep_outer {
        if inner <= 0.0 {
            out.push((lo, hi));
            continue;
        }
        match seg_disk_interval(a, b, center, inner) {
            None => out.push((lo, hi)),
            Some((i0, i1)) => {
                if lo < i0.min(hi) {
                    out.push((lo, i0.min(hi)));
                }
                if i1.max(lo) < hi {
                    out.push((i1.max(lo), hi));
                }
            }
        }
    }
    out.retain(|(u0, u1)| u1 > u0);
    out
}

pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = b - a;
    let len2 = dot(d, d);
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let u = (dot(p - a, d) / len2).clamp(0.0, 1.0);
    (a + d * u - p).norm()
}

/// Shortest distance between two segments.
pub fn segment_distance(a0: Point, a1: Point, b0: Point, b1: Point) -> f64 {
    if segments_properly_intersect(a0, a1, b0, b1) {
        return 0.0;
    }
    point_segment_distance(a0, b0, b1)
        .min(point_segment_distance(a1, b0, b1))
        .min(point_segment_distance(b0, a0, a1))
        .min(point_segment_distance(b1, a0, a1))
}

/// Strict proper crossing test (interiors intersect transversally).
pub fn segments_properly_intersect(a0: Point, a1: Point, b0: Point, b1: Point) -> bool {
    let d1 = cross(a1 - a0, b0 - a0);
    let d2 = cross(a1 - a0, b1 - a0);
    let d3 = cross(b1 - b0, a0 - b0);
    let d4 = cross(b1 - b0, a1 - b0);
    (d1 > 0.0) != (d2 > 0.0) && (d3 > 0.0) != (d4 > 0.0) && d1 != 0.0 && d2 != 0.0
}

/// Winding number of a closed polyline around `z` (vertices with
/// `verts[0] == verts[n-1]`). Exact up to floating point: accumulates the
/// subtended angle of every chord and rounds the total to turns.
pub fn winding_number(verts: &[Point], z: Point) -> i32 {
    let mut acc = Accum::new();
    for w in verts.windows(2) {
        acc.add(angle_between(w[0] - z, w[1] - z));
    }
    (acc.value() / (2.0 * std::f64::consts::PI)).round() as i32
}

/// Convex hull (monotone chain); input order is not preserved.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|p, q| {
        p.re
            .partial_cmp(&q.re)
            .unwrap()
            .then(p.im.partial_cmp(&q.im).unwrap())
    });
    pts.dedup_by(|p, q| p.re == q.re && p.im == q.im);
    let n = pts.len();
    if n < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * n);
    for &p in pts.iter().chain(pts.iter().rev().skip(1)) {
        while hull.len() >= 2 && cross(hull[hull.len() - 1] - hull[hull.len() - 2], p - hull[hull.len() - 2]) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Max pairwise distance over a point set, via rotating calipers on the hull.
pub fn point_set_diameter(points: &[Point]) -> f64 {
    let hull = convex_hull(points);
    let m = hull.len();
    if m < 2 {
        return 0.0;
    }
    if m == 2 {
        return (hull[1] - hull[0]).norm();
    }
    // antipodal pairs: advance j while the opposite edge still turns with edge i
    let mut best: f64 = 0.0;
    let mut j = 1;
    for i in 0..m {
        let edge = hull[(i + 1) % m] - hull[i];
        loop {
            let next = (j + 1) % m;
            if cross(edge, hull[next] - hull[j]) > 0.0 {
                j = next;
            } else {
                break;
            }
        }
        best = best.max((hull[j] - hull[i]).norm());
        best = best.max((hull[j] - hull[(i + 1) % m]).norm());
    }
    best
}

/// Signed area of the closed polyline (shoelace).
pub fn signed_area(verts: &[Point]) -> f64 {
    let mut acc = Accum::new();
    for w in verts.windows(2) {
        acc.add(cross(w[0], w[1]));
    }
    0.5 * acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn angle_between_quarter_turn() {
        let a = c(1.0, 0.0);
        let b = c(0.0, 1.0);
        assert!((angle_between(a, b) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((angle_between(b, a) + std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn disk_clip_straddles() {
        // segment from -2 to 2 on the real axis, unit disk at origin
        let iv = seg_disk_interval(c(-2.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), 1.0).unwrap();
        assert!((iv.0 - 0.25).abs() < 1e-12 && (iv.1 - 0.75).abs() < 1e-12);
        let outside = seg_disk_complement(c(-2.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), 1.0);
        assert_eq!(outside.len(), 2);
    }

    #[test]
    fn annulus_clip_two_pieces() {
        let iv = seg_annulus_intervals(c(-2.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), 0.5, Some(1.0));
        assert_eq!(iv.len(), 2);
        let total: f64 = iv.iter().map(|(a, b)| b - a).sum();
        assert!((total - 0.25).abs() < 1e-12);
    }

    #[test]
    fn winding_square() {
        let sq = [c(1.0, 1.0), c(-1.0, 1.0), c(-1.0, -1.0), c(1.0, -1.0), c(1.0, 1.0)];
        assert_eq!(winding_number(&sq, c(0.0, 0.0)), 1);
        assert_eq!(winding_number(&sq, c(3.0, 0.0)), 0);
        assert!((signed_area(&sq) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn diameter_of_rectangle() {
        let pts = [c(0.0, 0.0), c(4.0, 0.0), c(4.0, 3.0), c(0.0, 3.0)];
        assert!((point_set_diameter(&pts) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn proper_crossing() {
        assert!(segments_properly_intersect(
            c(-1.0, -1.0),
            c(1.0, 1.0),
            c(-1.0, 1.0),
            c(1.0, -1.0)
        ));
        assert!(!segments_properly_intersect(
            c(0.0, 0.0),
            c(1.0, 0.0),
            c(2.0, 0.1),
            c(3.0, 0.1)
        ));
    }
}
