//! Shared classification of truncation traces.
//!
//! Every limit process in this crate (argument variations as the excluded
//! radius shrinks, Dini-type integrals as the lower limit shrinks,
//! principal-value schedules) produces a trace of partial values. A single
//! policy record decides whether the trace converged, diverges, or is
//! inconclusive, so verdicts are consistent across modules.

use serde::{Deserialize, Serialize};

/// Trend classification of a partial-value trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Trend {
    Converged,
    Divergent,
    Inconclusive,
}

/// Policy knobs for [`classify`].
///
/// A trace converges when its last increment drops below `tol`. It is
/// declared divergent when the last `window` increments all exceed `tol`
/// and none of them decays faster than `ratio_floor`: this catches both
/// growing increments and the harmonic/log-harmonic profiles (increments
/// ~ 1/k whose ratios tend to 1) while a geometrically decaying tail
/// (ratio well under the floor, or under `tol`) is left to converge.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ConvergencePolicy {
    pub tol: f64,
    pub ratio_floor: f64,
    pub window: usize,
}

impl Default for ConvergencePolicy {
    fn default() -> Self {
        Self {
            tol: 1e-3,
            ratio_floor: 0.75,
            window: 3,
        }
    }
}

impl ConvergencePolicy {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    /// Classify a sequence of partial values (ordered by shrinking cutoff).
    pub fn classify(&self, values: &[f64]) -> Trend {
        if values.len() < 2 {
            return Trend::Inconclusive;
        }
        let incs: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        let last = *incs.last().unwrap();
        if last <= self.tol {
            return Trend::Converged;
        }
        if incs.len() >= self.window {
            let tail = &incs[incs.len() - self.window..];
            let all_big = tail.iter().all(|&i| i > self.tol);
            let slow = tail.windows(2).all(|w| w[1] >= self.ratio_floor * w[0]);
            if all_big && slow {
                return Trend::Divergent;
            }
        }
        Trend::Inconclusive
    }
}

/// A limit estimated from a truncation schedule together with its trace.
#[derive(Debug, Clone, Serialize)]
pub struct TracedLimit {
    /// The last partial value (the best available estimate of the limit).
    pub value: f64,
    /// Pairs (cutoff, partial value), cutoff strictly decreasing.
    pub trace: Vec<(f64, f64)>,
    pub trend: Trend,
}

impl TracedLimit {
    pub fn from_trace(trace: Vec<(f64, f64)>, policy: &ConvergencePolicy) -> Self {
        let values: Vec<f64> = trace.iter().map(|&(_, v)| v).collect();
        let trend = policy.classify(&values);
        Self {
            value: values.last().copied().unwrap_or(f64::NAN),
            trace,
            trend,
        }
    }

    pub fn converged(&self) -> bool {
        self.trend == Trend::Converged
    }

    pub fn divergent(&self) -> bool {
        self.trend == Trend::Divergent
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_tail_converges() {
        let p = ConvergencePolicy::default();
        // increments 0.1 * 2^-k fall under tol quickly
        let mut v = vec![0.0];
        for k in 0..14 {
            v.push(v[k] + 0.1 * 0.5f64.powi(k as i32));
        }
        assert_eq!(p.classify(&v), Trend::Converged);
    }

    #[test]
    fn harmonic_tail_diverges() {
        let p = ConvergencePolicy::default();
        // increments 1/k: partial sums of the harmonic series
        let mut v = vec![0.0];
        for k in 1..20 {
            v.push(v[k - 1] + 1.0 / k as f64);
        }
        assert_eq!(p.classify(&v), Trend::Divergent);
    }

    #[test]
    fn log_harmonic_tail_diverges() {
        let p = ConvergencePolicy::default();
        // increments 1/(k ln k), the Example-3 profile
        let mut v = vec![0.0];
        for k in 2..24 {
            let k = k as f64;
            v.push(v.last().unwrap() + 1.0 / (k * k.ln()));
        }
        assert_eq!(p.classify(&v), Trend::Divergent);
    }

    #[test]
    fn short_trace_is_inconclusive() {
        let p = ConvergencePolicy::default();
        assert_eq!(p.classify(&[1.0]), Trend::Inconclusive);
    }
}
