//! Summary metrics computed from a completed log.
//!
//! Metrics are pure functions of the log (plus the Lyapunov weights for the
//! gain bound), so recomputing them from a deserialized CSV reproduces the
//! original values exactly.

use crate::sim::log::TimeSeriesLog;
use crate::stability::{check_gain_trajectory, lmax_lemma, LyapunovWeights};

/// Tracking quality of one constant-reference segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentMetrics {
    pub start_time: f64,
    pub reference: f64,
    /// RMS of `y - x_m` over the segment.
    pub rms_tracking: f64,
}

/// Observer-gain bound verdict for the whole run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainBoundMetrics {
    pub l_max: f64,
    pub pass: bool,
    pub first_violation_time: Option<f64>,
}

/// Run summary.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMetrics {
    /// RMS of `y - x_m` over the full run.
    pub rms_tracking_overall: f64,
    /// RMS of `x_hat - x` over the full run.
    pub rms_estimation: f64,
    /// Least-squares slope of `|k_hat| + |l_hat|` over the trailing half of
    /// the run (the steady window used to quantify noise-driven drift).
    pub param_drift_rate: f64,
    pub final_k_hat: f64,
    pub final_l_hat: f64,
    pub final_w_hat: f64,
    /// Set when a run was aborted; completed runs always report `false`.
    pub diverged: bool,
    pub gain_bound: GainBoundMetrics,
    pub segments: Vec<SegmentMetrics>,
}

/// Computes the summary for a completed log.
pub fn compute_metrics(log: &TimeSeriesLog, weights: &LyapunovWeights) -> RunMetrics {
    assert!(!log.is_empty(), "metrics need at least one sample");
    let n = log.len();
    let last = n - 1;

    let rms_tracking_overall = rms((0..n).map(|i| log.y[i] - log.x_m[i]));
    let rms_estimation = rms((0..n).map(|i| log.x_hat[i] - log.x[i]));

    // Trailing-half drift of the adapted feedback gains.
    let half_t = log.t[last] / 2.0;
    let start = log.t.partition_point(|&t| t < half_t);
    let ts = &log.t[start..];
    let drift: Vec<f64> = (start..n).map(|i| log.k_hat[i].abs() + log.l_hat[i].abs()).collect();
    let param_drift_rate = linear_slope(ts, &drift);

    let l_max = lmax_lemma(weights).expect("weights validated at construction");
    let report = check_gain_trajectory(&log.l, &log.p, l_max);
    let first_violation = report
        .first_out_of_bounds
        .into_iter()
        .chain(report.first_non_monotone)
        .min();
    let gain_bound = GainBoundMetrics {
        l_max,
        pass: report.pass(),
        first_violation_time: first_violation.map(|i| log.t[i]),
    };

    RunMetrics {
        rms_tracking_overall,
        rms_estimation,
        param_drift_rate,
        final_k_hat: log.k_hat[last],
        final_l_hat: log.l_hat[last],
        final_w_hat: log.w_hat[last],
        diverged: false,
        gain_bound,
        segments: segment_metrics(log),
    }
}

/// Per-segment tracking RMS; segments are derived from changes in the logged
/// reference, so they are recoverable from the CSV alone.
pub fn segment_metrics(log: &TimeSeriesLog) -> Vec<SegmentMetrics> {
    let mut out = Vec::new();
    let n = log.len();
    if n == 0 {
        return out;
    }
    let mut seg_start = 0;
    for i in 1..=n {
        if i == n || log.r[i] != log.r[seg_start] {
            out.push(SegmentMetrics {
                start_time: log.t[seg_start],
                reference: log.r[seg_start],
                rms_tracking: rms((seg_start..i).map(|j| log.y[j] - log.x_m[j])),
            });
            seg_start = i;
        }
    }
    out
}

fn rms(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut count = 0usize;
    for v in values {
        sum += v * v;
        count += 1;
    }
    if count == 0 {
        0.0
    } else {
        (sum / count as f64).sqrt()
    }
}

/// Ordinary least-squares slope of `v` against `t`.
pub fn linear_slope(t: &[f64], v: &[f64]) -> f64 {
    assert_eq!(t.len(), v.len());
    let n = t.len();
    if n < 2 {
        return 0.0;
    }
    let t_mean = t.iter().sum::<f64>() / n as f64;
    let v_mean = v.iter().sum::<f64>() / n as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        let dt = t[i] - t_mean;
        num += dt * (v[i] - v_mean);
        den += dt * dt;
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}
