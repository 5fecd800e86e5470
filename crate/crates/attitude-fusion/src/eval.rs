//! Error metrics and timing measurements for estimate tracks.
//!
//! RMSE is computed per axis on wrapped residuals — yaw lives on a circle,
//! and a benign ±π crossing must not count as a 2π error. The windowed
//! variant reports the same metric over consecutive time windows, which is
//! how drift shows up as a growing staircase for an uncompensated filter.

use std::time::Instant;

use crate::attitude::{angle_diff, Attitude};
use crate::datagen::Dataset;
use crate::filters::{run_filter, FilterKind, FilterParams};
use crate::{Error, Result};

/// Per-axis RMSE between a reference track and an estimate track, in
/// radians, with residuals wrapped onto (−π, π].
pub fn rmse(reference: &[Attitude], estimate: &[Attitude]) -> Result<[f64; 3]> {
    if reference.len() != estimate.len() {
        return Err(Error::LengthMismatch {
            left: reference.len(),
            right: estimate.len(),
        });
    }
    if reference.is_empty() {
        return Err(Error::EmptyTrack);
    }
    let mut sum_sq = [0.0f64; 3];
    for (r, e) in reference.iter().zip(estimate) {
        let residual = [
            angle_diff(r.roll, e.roll),
            angle_diff(r.pitch, e.pitch),
            angle_diff(r.yaw, e.yaw),
        ];
        for axis in 0..3 {
            sum_sq[axis] += residual[axis] * residual[axis];
        }
    }
    let n = reference.len() as f64;
    Ok([
        (sum_sq[0] / n).sqrt(),
        (sum_sq[1] / n).sqrt(),
        (sum_sq[2] / n).sqrt(),
    ])
}

/// Arithmetic mean of the three per-axis RMSE values.
pub fn average_rmse(per_axis: [f64; 3]) -> f64 {
    (per_axis[0] + per_axis[1] + per_axis[2]) / 3.0
}

/// Mean of a slice.
pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Population standard deviation (divides by n) of a slice.
pub fn population_std(values: &[f64]) -> f64 {
    let m = mean(values);
    (values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / values.len() as f64).sqrt()
}

/// RMSE of one time window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowRmse {
    /// Window start time in seconds (relative timeline of the track).
    pub start: f64,
    /// Per-axis RMSE within the window.
    pub rmse: [f64; 3],
}

impl WindowRmse {
    pub fn average(&self) -> f64 {
        average_rmse(self.rmse)
    }
}

/// Per-axis RMSE over consecutive non-overlapping windows of `window`
/// seconds. A final partial window is kept only when it holds at least 10%
/// of a full window's samples; if the whole track is shorter than one
/// window, the single partial window is the result.
pub fn windowed_rmse(
    reference: &[Attitude],
    estimate: &[Attitude],
    times: &[f64],
    window: f64,
) -> Result<Vec<WindowRmse>> {
    if reference.len() != estimate.len() || reference.len() != times.len() {
        return Err(Error::LengthMismatch {
            left: reference.len(),
            right: estimate.len(),
        });
    }
    if reference.is_empty() {
        return Err(Error::EmptyTrack);
    }
    if window.is_nan() || window <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "window must be positive, got {window}"
        )));
    }

    let t0 = times[0];
    let mut boundaries = vec![0usize];
    let mut bucket = 0usize;
    for (i, t) in times.iter().enumerate() {
        let b = ((t - t0) / window).floor() as usize;
        while bucket < b {
            bucket += 1;
            boundaries.push(i);
        }
    }
    boundaries.push(times.len());

    let mut out = Vec::new();
    for (w, pair) in boundaries.windows(2).enumerate() {
        let (lo, hi) = (pair[0], pair[1]);
        if lo == hi {
            continue;
        }
        out.push(WindowRmse {
            start: t0 + w as f64 * window,
            rmse: rmse(&reference[lo..hi], &estimate[lo..hi])?,
        });
    }

    // drop an underfull trailing window, unless it is the only one
    if out.len() > 1 {
        let span = *times.last().unwrap() - t0;
        let nominal = reference.len() as f64 / (span / window).max(1.0);
        let last = boundaries[boundaries.len() - 2]..boundaries[boundaries.len() - 1];
        if (last.len() as f64) < 0.1 * nominal {
            out.pop();
        }
    }
    Ok(out)
}

/// Wall-clock timing of one filter over a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct TimingReport {
    pub kind: FilterKind,
    /// Mean whole-dataset run time over all repetitions, seconds.
    pub mean_run_s: f64,
    /// Mean per-sample step time, seconds.
    pub mean_step_s: f64,
    /// Run time divided by the slowest filter's run time; the slowest is 1.
    pub normalized: f64,
    pub repetitions: usize,
}

/// Run every filter `repetitions` times over the same dataset and report
/// mean run times normalized to the slowest filter.
///
/// Runs are strictly sequential; benchmarking filters concurrently would
/// contaminate the timings.
pub fn bench_filters(
    kinds: &[FilterKind],
    params: &FilterParams,
    dataset: &Dataset,
    repetitions: usize,
) -> Result<Vec<TimingReport>> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if repetitions == 0 {
        return Err(Error::InvalidParams("repetitions must be ≥ 1".into()));
    }
    let mut means = Vec::with_capacity(kinds.len());
    for &kind in kinds {
        let mut total = 0.0;
        for _ in 0..repetitions {
            let start = Instant::now();
            let track = run_filter(kind, params, dataset)?;
            total += start.elapsed().as_secs_f64();
            std::hint::black_box(&track);
        }
        means.push(total / repetitions as f64);
    }
    let slowest = means.iter().cloned().fold(f64::MIN, f64::max);
    Ok(kinds
        .iter()
        .zip(means)
        .map(|(&kind, mean_run_s)| TimingReport {
            kind,
            mean_run_s,
            mean_step_s: mean_run_s / dataset.len() as f64,
            normalized: mean_run_s / slowest,
            repetitions,
        })
        .collect())
}

/// Scored run of one filter: per-axis, average and windowed RMSE.
#[derive(Debug, Clone, PartialEq)]
pub struct RmseReport {
    pub kind: FilterKind,
    pub params: FilterParams,
    pub rmse_roll: f64,
    pub rmse_pitch: f64,
    pub rmse_yaw: f64,
    pub rmse_average: f64,
    pub windowed: Vec<WindowRmse>,
}

impl RmseReport {
    pub fn compute(
        kind: FilterKind,
        params: &FilterParams,
        reference: &[Attitude],
        estimate: &[Attitude],
        times: &[f64],
        window: f64,
    ) -> Result<Self> {
        let axes = rmse(reference, estimate)?;
        Ok(RmseReport {
            kind,
            params: params.clone(),
            rmse_roll: axes[0],
            rmse_pitch: axes[1],
            rmse_yaw: axes[2],
            rmse_average: average_rmse(axes),
            windowed: windowed_rmse(reference, estimate, times, window)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn track(values: &[(f64, f64, f64)]) -> Vec<Attitude> {
        values
            .iter()
            .map(|&(r, p, y)| Attitude::new(r, p, y))
            .collect()
    }

    #[test]
    fn identical_tracks_have_zero_rmse() {
        let t = track(&[(0.1, 0.2, 0.3), (0.4, 0.5, 0.6)]);
        assert_eq!(rmse(&t, &t).unwrap(), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn constant_offset_is_the_rmse() {
        let reference = track(&[(0.1, 0.0, 0.0); 10]);
        let estimate = track(&[(0.0, 0.0, 0.0); 10]);
        let e = rmse(&reference, &estimate).unwrap();
        assert!((e[0] - 0.1).abs() < 1e-12);
        assert_eq!(e[1], 0.0);
        assert_eq!(e[2], 0.0);
    }

    #[test]
    fn yaw_residuals_wrap() {
        let reference = track(&[(0.0, 0.0, PI - 0.05); 8]);
        let estimate = track(&[(0.0, 0.0, -PI + 0.05); 8]);
        let e = rmse(&reference, &estimate).unwrap();
        assert!((e[2] - 0.1).abs() < 1e-12, "wrapped yaw rmse {e:?}");
    }

    #[test]
    fn rmse_is_symmetric() {
        let a = track(&[(0.1, -0.4, 3.0), (0.2, 0.1, -3.0)]);
        let b = track(&[(0.15, -0.38, -3.1), (0.3, 0.0, 3.1)]);
        let ab = rmse(&a, &b).unwrap();
        let ba = rmse(&b, &a).unwrap();
        for axis in 0..3 {
            assert!((ab[axis] - ba[axis]).abs() < 1e-15);
        }
    }

    #[test]
    fn length_and_empty_errors() {
        let a = track(&[(0.0, 0.0, 0.0)]);
        assert!(matches!(rmse(&a, &[]), Err(Error::LengthMismatch { .. })));
        assert!(matches!(rmse(&[], &[]), Err(Error::EmptyTrack)));
    }

    #[test]
    fn average_rmse_examples() {
        assert!((average_rmse([0.042, 0.042, 0.042]) - 0.042).abs() < 1e-15);
        assert!((average_rmse([0.03, 0.06, 0.09]) - 0.06).abs() < 1e-15);
    }

    #[test]
    fn windowed_rmse_single_window_covers_the_track() {
        let reference = track(&[(0.0, 0.0, 0.0); 10]);
        let estimate = track(&[(0.1, 0.0, 0.0); 10]);
        let times: Vec<f64> = (0..10).map(|k| k as f64 * 0.1).collect();
        let windows = windowed_rmse(&reference, &estimate, &times, 100.0).unwrap();
        assert_eq!(windows.len(), 1);
        assert_eq!(windows[0].start, 0.0);
        assert_eq!(windows[0].rmse, rmse(&reference, &estimate).unwrap());
    }

    #[test]
    fn windowed_rmse_splits_two_halves() {
        // first half exact, second half constant 0.1 roll residual
        let n = 100;
        let reference = track(&vec![(0.0, 0.0, 0.0); n]);
        let mut estimate = reference.clone();
        for e in estimate.iter_mut().skip(n / 2) {
            e.roll = 0.1;
        }
        let times: Vec<f64> = (0..n).map(|k| k as f64 * 0.1).collect();
        let windows = windowed_rmse(&reference, &estimate, &times, 5.0).unwrap();
        assert_eq!(windows.len(), 2);
        assert_eq!(windows[0].rmse[0], 0.0);
        assert!((windows[1].rmse[0] - 0.1).abs() < 1e-12);
        assert!((windows[1].start - 5.0).abs() < 1e-12);
    }

    #[test]
    fn windowed_rmse_tiles_exactly() {
        // whole-track RMSE² = sample-count-weighted mean of window RMSE²
        let n = 400;
        let reference: Vec<Attitude> = (0..n)
            .map(|k| Attitude::new((k as f64 * 0.01).sin(), 0.0, 0.0))
            .collect();
        let estimate: Vec<Attitude> = (0..n)
            .map(|k| Attitude::new((k as f64 * 0.013).cos(), 0.0, 0.0))
            .collect();
        let times: Vec<f64> = (0..n).map(|k| k as f64 * 0.01).collect();
        let windows = windowed_rmse(&reference, &estimate, &times, 1.0).unwrap();
        assert_eq!(windows.len(), 4);
        let whole = rmse(&reference, &estimate).unwrap();
        let weighted: f64 = windows
            .iter()
            .map(|w| w.rmse[0] * w.rmse[0] * (n / 4) as f64)
            .sum::<f64>()
            / n as f64;
        assert!((whole[0] * whole[0] - weighted).abs() < 1e-10);
    }

    #[test]
    fn trailing_sliver_is_dropped() {
        let n = 102; // 100 samples in the first window, 2 in the next
        let reference = track(&vec![(0.0, 0.0, 0.0); n]);
        let estimate = track(&vec![(0.1, 0.0, 0.0); n]);
        let times: Vec<f64> = (0..n).map(|k| k as f64 * 0.01).collect();
        let windows = windowed_rmse(&reference, &estimate, &times, 1.0).unwrap();
        assert_eq!(windows.len(), 1);
    }

    #[test]
    fn table_footer_statistics() {
        // regression fixture: a 12-value column with hand-checked footer statistics
        let column = [
            0.042, 0.042, 0.042, 0.046, 0.046, 0.046, 0.264, 0.276, 0.383, 0.436, 1.237, 9.118,
        ];
        assert!((mean(&column) - 0.998).abs() < 0.001);
        assert!((population_std(&column) - 2.470).abs() < 0.001);
    }

    #[test]
    fn report_average_is_mean_of_axes() {
        let reference = track(&[(0.1, 0.0, 0.0); 20]);
        let estimate = track(&[(0.0, 0.05, 0.0); 20]);
        let times: Vec<f64> = (0..20).map(|k| k as f64 * 0.01).collect();
        let report = RmseReport::compute(
            FilterKind::Ccf,
            &FilterParams::default(),
            &reference,
            &estimate,
            &times,
            1.0,
        )
        .unwrap();
        let expected = (report.rmse_roll + report.rmse_pitch + report.rmse_yaw) / 3.0;
        assert!((report.rmse_average - expected).abs() < 1e-12);
    }
}
