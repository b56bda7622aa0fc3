//! Boundary densities: real-valued functions on a curve, either closed-form
//! rules or sampled tables interpolated in arc length.

use serde::{Deserialize, Serialize};

use crate::geom::Point;

/// Closed-form density rules understood by the CLI and the zoo.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "rule_id", content = "params")]
pub enum DensityRule {
    /// g(t) = c
    Const { c: f64 },
    /// g(t) = Re t
    RePart,
    /// g(t) = Im t
    ImPart,
    /// g(t) = -1/(ln|t| - 1) for t != 0, g(0) = 0.
    ///
    /// Continuous at 0 but with a logarithmic modulus of continuity, so it
    /// fails the Dini test there.
    LogReciprocal,
    /// g(t) = |t - center|^alpha, a Hoelder-alpha peak anchored on the curve.
    HolderPeak { center_re: f64, center_im: f64, alpha: f64 },
    /// Piecewise-linear table in arc length; (s, value) pairs sorted by s.
    Table { samples: Vec<(f64, f64)> },
}

/// A real-valued boundary function.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Density {
    pub rule: DensityRule,
}

impl Density {
    pub fn constant(c: f64) -> Self {
        Self { rule: DensityRule::Const { c } }
    }

    pub fn re_part() -> Self {
        Self { rule: DensityRule::RePart }
    }

    pub fn im_part() -> Self {
        Self { rule: DensityRule::ImPart }
    }

    /// The density used with the fourth zoo curve: -1/(ln|t| - 1), 0 at 0.
    pub fn log_reciprocal() -> Self {
        Self { rule: DensityRule::LogReciprocal }
    }

    pub fn holder_peak(center: Point, alpha: f64) -> Self {
        Self {
            rule: DensityRule::HolderPeak {
                center_re: center.re,
                center_im: center.im,
                alpha,
            },
        }
    }

    pub fn from_table(mut samples: Vec<(f64, f64)>) -> Self {
        samples.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        Self { rule: DensityRule::Table { samples } }
    }

    /// Evaluate at a curve point. `s` is the arc coordinate, used only by
    /// table densities.
    pub fn eval(&self, t: Point, s: f64) -> f64 {
        match &self.rule {
            DensityRule::Const { c } => *c,
            DensityRule::RePart => t.re,
            DensityRule::ImPart => t.im,
            DensityRule::LogReciprocal => {
                let r = t.norm();
                if r == 0.0 {
                    0.0
                } else {
                    -1.0 / (r.ln() - 1.0)
                }
            }
            DensityRule::HolderPeak { center_re, center_im, alpha } => {
                (t - Point::new(*center_re, *center_im)).norm().powf(*alpha)
            }
            DensityRule::Table { samples } => eval_table(samples, s),
        }
    }
}

fn eval_table(samples: &[(f64, f64)], s: f64) -> f64 {
    match samples.len() {
        0 => 0.0,
        1 => samples[0].1,
        _ => {
            let (s0, _) = samples[0];
            let (s1, _) = *samples.last().unwrap();
            let x = s.clamp(s0, s1);
            let idx = samples.partition_point(|&(si, _)| si <= x).min(samples.len() - 1);
            let i = idx.max(1);
            let (sa, va) = samples[i - 1];
            let (sb, vb) = samples[i];
            if sb == sa {
                va
            } else {
                va + (vb - va) * (x - sa) / (sb - sa)
            }
        }
    }
}
