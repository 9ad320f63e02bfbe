use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::geom::{segment_intersection, Vec2};
use crate::surface::ConeSurface;

use super::{trace, GeodesicState, TraceError, TraceOptions, TraceResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PredictionError {
    #[error("cone angle {0} is outside (0, pi)")]
    AngleOutOfRange(f64),
    #[error("closest distance must be positive, got {0}")]
    NonPositiveDistance(f64),
}

/// Where a geodesic passing a cone point of angle `theta < pi` at closest
/// distance `c0` meets itself: at parameters `t_i +- t_prime`, at distance
/// `t` from the cone point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SelfIntersectionPrediction {
    pub t_prime: f64,
    pub t: f64,
}

pub fn predict_self_intersection(c0: f64, theta: f64) -> Result<SelfIntersectionPrediction, PredictionError> {
    if !(theta > 0.0 && theta < PI) {
        return Err(PredictionError::AngleOutOfRange(theta));
    }
    if !(c0 > 0.0) {
        return Err(PredictionError::NonPositiveDistance(c0));
    }
    let half = theta / 2.0;
    Ok(SelfIntersectionPrediction { t_prime: c0 * half.tan(), t: c0 / half.cos() })
}

/// A point visited twice by a trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SelfIntersection {
    pub first: f64,
    pub second: f64,
    pub chart: usize,
    pub point: Vec2,
}

/// All pairs of segments of a trace that meet inside a common chart at
/// arclengths more than `min_gap` apart.
pub fn self_intersections(trace: &TraceResult, tol: f64, min_gap: f64) -> Vec<SelfIntersection> {
    let segs = &trace.segments;
    let mut out = Vec::new();
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            let (a, b) = (&segs[i], &segs[j]);
            if a.chart != b.chart || a.length() <= 0.0 || b.length() <= 0.0 {
                continue;
            }
            if let Some((s, u)) = segment_intersection(a.start, a.end, b.start, b.end, tol) {
                let first = a.start_arclength + s * a.length();
                let second = b.start_arclength + u * b.length();
                // a crossing on a glued edge shows up once in each chart copy
                let seen = out.iter().any(|x: &SelfIntersection| (x.first - first).abs() <= tol && (x.second - second).abs() <= tol);
                if second - first > min_gap && !seen {
                    out.push(SelfIntersection { first, second, chart: a.chart, point: a.start + (a.end - a.start) * s });
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinDistanceReport {
    /// `(T_i, m(T_i))` for each requested length.
    pub series: Vec<(f64, f64)>,
    pub non_increasing: bool,
    pub final_value: f64,
    pub threshold: f64,
    pub below_threshold: bool,
    /// Arclength where the trace stopped early (cone hit or closure).
    pub stopped_at: Option<f64>,
}

/// Distance from the trace to the singular set at each of the lengths.
pub fn min_distance_experiment(
    surface: &ConeSurface,
    start: GeodesicState,
    lengths: &[f64],
    threshold: f64,
) -> Result<MinDistanceReport, TraceError> {
    let t_max = lengths.iter().copied().fold(0.0, f64::max);
    let r = trace(surface, start, TraceOptions::new(t_max))?;
    let stopped_at = (r.total_length < t_max - 1e-9).then_some(r.total_length);
    let series: Vec<(f64, f64)> = lengths
        .iter()
        .map(|&t| {
            let m = if t > r.total_length { r.final_min_distance() } else { r.min_distance_at(t) };
            (t, m)
        })
        .collect();
    let non_increasing = series.windows(2).all(|w| w[1].1 <= w[0].1);
    let final_value = series.last().map(|p| p.1).unwrap_or(f64::INFINITY);
    Ok(MinDistanceReport { series, non_increasing, final_value, threshold, below_threshold: final_value < threshold, stopped_at })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use std::f64::consts::{FRAC_PI_2, SQRT_2};

    #[test]
    fn closed_forms() {
        let p = predict_self_intersection(1.0, FRAC_PI_2).unwrap();
        assert!((p.t_prime - 1.0).abs() < 1e-15 && (p.t - SQRT_2).abs() < 1e-15);
        let p = predict_self_intersection(2.0, 2.0 * PI / 3.0).unwrap();
        assert!((p.t_prime - 2.0 * 3f64.sqrt()).abs() < 1e-12 && (p.t - 4.0).abs() < 1e-12);
        assert_eq!(predict_self_intersection(1.0, PI), Err(PredictionError::AngleOutOfRange(PI)));
    }

    #[test]
    fn closed_direction_keeps_half_distance() {
        let s = corpus::marked_torus();
        let st = GeodesicState::new(0, Vec2::new(0.5, 0.5), Vec2::new(1.0, 0.0));
        let r = min_distance_experiment(&s, st, &[1.0, 10.0, 100.0], 0.1).unwrap();
        for (_, m) in &r.series {
            assert!((m - 0.5).abs() < 1e-12);
        }
        assert!(!r.below_threshold && r.non_increasing);
    }
}
