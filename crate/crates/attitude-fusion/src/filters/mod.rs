//! Attitude estimators with a common per-sample stepping interface.
//!
//! Seven estimators share one contract: construct from a parameter set and
//! the first sample (the attitude seed comes from that sample's
//! accelerometer/magnetometer solution), then advance one sample at a time
//! through [`AttitudeFilter::step`]. [`run_filter`] drives a whole
//! [`Dataset`] and returns the estimate track, one attitude per sample.
//!
//! Two auxiliary estimators, [`FilterKind::GyroOnly`] and
//! [`FilterKind::AccelMag`], expose the raw single-sensor solutions that the
//! fusion filters are measured against.

mod cf;
mod direct;
mod kalman;
mod madgwick;
mod mahony;
mod quat;

pub use cf::{Ccf, Lcf, Ncf};
pub use direct::{AccelMagDirect, GyroIntegrator};
pub use kalman::{Ckf, Ekf};
pub use madgwick::Madgwick;
pub use mahony::Mahony;
pub use quat::Quaternion;

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, Matrix6};

use crate::attitude::Attitude;
use crate::datagen::Dataset;
use crate::{Error, Result, SensorSample};

/// Per-axis gains for the complementary-filter family. Most uses share one
/// gain set across roll, pitch and yaw; per-axis tuning is the escape hatch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfAxisGains {
    pub alpha: [f64; 3],
    pub kp: [f64; 3],
    pub ki: [f64; 3],
}

impl CfAxisGains {
    pub fn shared(alpha: f64, kp: f64, ki: f64) -> Self {
        CfAxisGains {
            alpha: [alpha; 3],
            kp: [kp; 3],
            ki: [ki; 3],
        }
    }

    fn validate(&self) -> Result<()> {
        for i in 0..3 {
            if !(0.0..=1.0).contains(&self.alpha[i]) || !self.alpha[i].is_finite() {
                return Err(Error::InvalidParams(format!(
                    "alpha must lie in [0, 1], got {}",
                    self.alpha[i]
                )));
            }
            if self.kp[i] < 0.0 || !self.kp[i].is_finite() {
                return Err(Error::InvalidParams(format!(
                    "kp must be ≥ 0, got {}",
                    self.kp[i]
                )));
            }
            if self.ki[i] < 0.0 || !self.ki[i].is_finite() {
                return Err(Error::InvalidParams(format!(
                    "ki must be ≥ 0, got {}",
                    self.ki[i]
                )));
            }
        }
        Ok(())
    }
}

/// The full gain set consumed by [`run_filter`].
///
/// Defaults: `α = 0.7`, `KP = 25`, `KI = 0.1` for the complementary family,
/// `KP = 1.5` for Mahony, `β = 0.2` for Madgwick, and the diagonal Q/R sets
/// listed on [`FilterParams::default`] for the Kalman filters.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterParams {
    /// Blend weight of the linear stage, in `[0, 1]`; 1 trusts the gyro path.
    pub alpha: f64,
    /// Proportional gain of the PI correction (1/s).
    pub kp: f64,
    /// Integral gain of the PI correction (1/s²).
    pub ki: f64,
    /// Optional per-axis override of `alpha`/`kp`/`ki`.
    pub per_axis: Option<CfAxisGains>,
    /// Mahony proportional gain.
    pub mahony_kp: f64,
    /// Mahony integral gain; zero disables the integral term.
    pub mahony_ki: f64,
    /// Madgwick gradient-step gain.
    pub madgwick_beta: f64,
    /// EKF process noise (rad²/s, applied as `Q·dt` per step).
    pub q_ekf: Matrix3<f64>,
    /// EKF measurement noise (rad²).
    pub r_ekf: Matrix3<f64>,
    /// CKF process noise for [attitude error; gyro bias] (applied as `Q·dt`).
    pub q_ckf: Matrix6<f64>,
    /// CKF measurement noise (rad²).
    pub r_ckf: Matrix3<f64>,
}

impl Default for FilterParams {
    fn default() -> Self {
        FilterParams {
            alpha: 0.7,
            kp: 25.0,
            ki: 0.1,
            per_axis: None,
            mahony_kp: 1.5,
            mahony_ki: 0.0,
            madgwick_beta: 0.2,
            q_ekf: Matrix3::from_diagonal(&[5.0, 0.05, 10.0].into()),
            r_ekf: Matrix3::from_diagonal(&[0.1, 0.001, 0.8].into()),
            q_ckf: Matrix6::from_diagonal(&[60.0, 5.0, 10.0, 0.0, 0.0, 0.0].into()),
            r_ckf: Matrix3::from_diagonal(&[0.1, 0.01, 0.8].into()),
        }
    }
}

impl FilterParams {
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_gains(mut self, kp: f64, ki: f64) -> Self {
        self.kp = kp;
        self.ki = ki;
        self
    }

    pub fn with_cf(mut self, alpha: f64, kp: f64, ki: f64) -> Self {
        self.alpha = alpha;
        self.kp = kp;
        self.ki = ki;
        self
    }

    /// Effective complementary-filter gains: the per-axis override when set,
    /// otherwise the shared scalars on every axis.
    pub fn cf_gains(&self) -> CfAxisGains {
        self.per_axis
            .unwrap_or_else(|| CfAxisGains::shared(self.alpha, self.kp, self.ki))
    }

    pub fn validate(&self) -> Result<()> {
        self.cf_gains().validate()?;
        for (name, g) in [
            ("mahony_kp", self.mahony_kp),
            ("mahony_ki", self.mahony_ki),
            ("madgwick_beta", self.madgwick_beta),
        ] {
            if g < 0.0 || !g.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be ≥ 0, got {g}")));
            }
        }
        check_psd("q_ekf", &self.q_ekf, false)?;
        check_psd("r_ekf", &self.r_ekf, true)?;
        check_psd6("q_ckf", &self.q_ckf)?;
        check_psd("r_ckf", &self.r_ckf, true)?;
        Ok(())
    }
}

const PSD_TOL: f64 = 1e-9;

fn check_psd(name: &str, m: &Matrix3<f64>, strict: bool) -> Result<()> {
    if (m - m.transpose()).abs().max() > PSD_TOL {
        return Err(Error::InvalidParams(format!("{name} is not symmetric")));
    }
    let min_eig = m.symmetric_eigenvalues().min();
    if strict && min_eig <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "{name} must be positive definite"
        )));
    }
    if min_eig < -PSD_TOL {
        return Err(Error::InvalidParams(format!(
            "{name} must be positive semidefinite"
        )));
    }
    Ok(())
}

fn check_psd6(name: &str, m: &Matrix6<f64>) -> Result<()> {
    if (m - m.transpose()).abs().max() > PSD_TOL {
        return Err(Error::InvalidParams(format!("{name} is not symmetric")));
    }
    if m.symmetric_eigenvalues().min() < -PSD_TOL {
        return Err(Error::InvalidParams(format!(
            "{name} must be positive semidefinite"
        )));
    }
    Ok(())
}

/// Which estimator to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FilterKind {
    /// Linear complementary filter: fixed `α` blend of the gyro path and the
    /// accelerometer/magnetometer attitude.
    Lcf,
    /// Nonlinear complementary filter: PI correction driven by the
    /// accel/mag error steers the gyro integration.
    Ncf,
    /// Cascaded complementary filter: the PI stage corrects the gyro rates,
    /// a linear `α` blend then forms the attitude.
    Ccf,
    /// Separate-bias complementary Kalman filter.
    Ckf,
    /// 3-state Euler-angle extended Kalman filter.
    Ekf,
    /// Mahony passive quaternion filter.
    Mahony,
    /// Madgwick gradient-descent quaternion filter.
    Madgwick,
    /// Raw gyro integration from the seeded attitude; drifts with bias.
    GyroOnly,
    /// Raw accelerometer/magnetometer solution per sample.
    AccelMag,
}

impl FilterKind {
    /// The seven fusion estimators, in benchmark order.
    pub const FUSION: [FilterKind; 7] = [
        FilterKind::Lcf,
        FilterKind::Ncf,
        FilterKind::Ccf,
        FilterKind::Ckf,
        FilterKind::Ekf,
        FilterKind::Mahony,
        FilterKind::Madgwick,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FilterKind::Lcf => "lcf",
            FilterKind::Ncf => "ncf",
            FilterKind::Ccf => "ccf",
            FilterKind::Ckf => "ckf",
            FilterKind::Ekf => "ekf",
            FilterKind::Mahony => "mahony",
            FilterKind::Madgwick => "madgwick",
            FilterKind::GyroOnly => "gyro",
            FilterKind::AccelMag => "accelmag",
        }
    }
}

impl fmt::Display for FilterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FilterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lcf" => Ok(FilterKind::Lcf),
            "ncf" => Ok(FilterKind::Ncf),
            "ccf" => Ok(FilterKind::Ccf),
            "ckf" => Ok(FilterKind::Ckf),
            "ekf" => Ok(FilterKind::Ekf),
            "mahony" => Ok(FilterKind::Mahony),
            "madgwick" => Ok(FilterKind::Madgwick),
            "gyro" | "gyro-only" => Ok(FilterKind::GyroOnly),
            "accelmag" | "accel-mag" => Ok(FilterKind::AccelMag),
            other => Err(Error::InvalidParams(format!("unknown filter '{other}'"))),
        }
    }
}

/// A per-sample attitude estimator.
///
/// Implementations are pure state machines: identical step sequences yield
/// identical estimates, and no step performs I/O.
pub trait AttitudeFilter: Send {
    /// Advance by one sample taken `dt` seconds after the previous one and
    /// return the new attitude estimate.
    fn step(&mut self, sample: &SensorSample, dt: f64) -> Result<Attitude>;

    /// Current attitude estimate.
    fn estimate(&self) -> Attitude;
}

/// Construct the estimator for `kind`, seeded from `first`.
pub fn make_filter(
    kind: FilterKind,
    params: &FilterParams,
    first: &SensorSample,
) -> Result<Box<dyn AttitudeFilter>> {
    params.validate()?;
    Ok(match kind {
        FilterKind::Lcf => Box::new(Lcf::new(params, first)?),
        FilterKind::Ncf => Box::new(Ncf::new(params, first)?),
        FilterKind::Ccf => Box::new(Ccf::new(params, first)?),
        FilterKind::Ckf => Box::new(Ckf::new(params, first)?),
        FilterKind::Ekf => Box::new(Ekf::new(params, first)?),
        FilterKind::Mahony => Box::new(Mahony::new(params, first)?),
        FilterKind::Madgwick => Box::new(Madgwick::new(params, first)?),
        FilterKind::GyroOnly => Box::new(GyroIntegrator::new(first)?),
        FilterKind::AccelMag => Box::new(AccelMagDirect::new(first)?),
    })
}

/// Run one estimator over an entire dataset and collect its estimate track.
///
/// The track has exactly one attitude per sample; the first entry is the
/// seeded initial estimate. `dt` comes from consecutive timestamps, which
/// must be strictly increasing.
pub fn run_filter(
    kind: FilterKind,
    params: &FilterParams,
    dataset: &Dataset,
) -> Result<Vec<Attitude>> {
    let samples = &dataset.samples;
    if samples.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut filter = make_filter(kind, params, &samples[0])?;
    let mut track = Vec::with_capacity(samples.len());
    track.push(filter.estimate());
    for (index, pair) in samples.windows(2).enumerate() {
        let dt = pair[1].t - pair[0].t;
        if dt <= 0.0 {
            return Err(Error::NonMonotonicTime {
                index: index + 1,
                prev: pair[0].t,
                t: pair[1].t,
            });
        }
        track.push(filter.step(&pair[1], dt)?);
    }
    Ok(track)
}
