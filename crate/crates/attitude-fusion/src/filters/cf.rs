//! The complementary-filter family: linear, nonlinear (PI) and cascaded.
//!
//! All three run three independent scalar loops, one per Euler axis. The
//! gyro contribution of each axis is the Euler-angle rate produced by the
//! body rates at the previous estimate, and every `measured − estimated`
//! term passes through [`angle_diff`] so a yaw crossing of ±π cannot inject
//! a 2π impulse into the loop. The continuous-time loops are discretized
//! with one forward-Euler step per sample.

use crate::attitude::{accel_mag_attitude, angle_diff, euler_rates, Attitude};
use crate::filters::{AttitudeFilter, CfAxisGains, FilterParams};
use crate::{Result, SensorSample};

/// Cap on the PI output `KI·I` in rad/s. Keeps tiny-KP configurations from
/// winding up without bound; far outside the range any sane loop visits.
const INTEGRAL_LIMIT: f64 = 10.0;

fn clamp_integral(integral: f64, ki: f64) -> f64 {
    if ki > 0.0 {
        integral.clamp(-INTEGRAL_LIMIT / ki, INTEGRAL_LIMIT / ki)
    } else {
        integral
    }
}

/// Circular blend: `measured + α · wrap(propagated − measured)`. Equals the
/// straight affine blend when both angles are on the same branch.
fn blend(alpha: f64, propagated: f64, measured: f64) -> f64 {
    measured + alpha * angle_diff(propagated, measured)
}

fn seed(first: &SensorSample) -> Result<Attitude> {
    let att = accel_mag_attitude(first.accel, first.mag)?;
    Ok(Attitude::wrapped(att.roll, att.pitch, att.yaw))
}

/// Linear complementary filter.
///
/// Per axis: `x̂ ← α (x̂ + dt·ẋ_g) + (1 − α) x_a`, where `ẋ_g` is the
/// Euler-angle rate at the previous estimate and `x_a` the accel/mag
/// attitude of the current sample. `α = 0` passes the accel/mag solution
/// through; `α = 1` is pure gyro propagation.
#[derive(Debug, Clone)]
pub struct Lcf {
    alpha: [f64; 3],
    estimate: Attitude,
}

impl Lcf {
    pub fn new(params: &FilterParams, first: &SensorSample) -> Result<Self> {
        Self::with_gains(params.cf_gains(), first)
    }

    pub fn with_gains(gains: CfAxisGains, first: &SensorSample) -> Result<Self> {
        Ok(Lcf {
            alpha: gains.alpha,
            estimate: seed(first)?,
        })
    }
}

impl AttitudeFilter for Lcf {
    fn step(&mut self, sample: &SensorSample, dt: f64) -> Result<Attitude> {
        let measured = accel_mag_attitude(sample.accel, sample.mag)?.as_array();
        let rate = euler_rates(self.estimate, sample.gyro)?;
        let prev = self.estimate.as_array();
        let mut next = [0.0; 3];
        for axis in 0..3 {
            next[axis] = blend(
                self.alpha[axis],
                prev[axis] + dt * rate[axis],
                measured[axis],
            );
        }
        self.estimate = Attitude::wrapped(next[0], next[1], next[2]);
        Ok(self.estimate)
    }

    fn estimate(&self) -> Attitude {
        self.estimate
    }
}

/// Nonlinear complementary filter.
///
/// Per axis, with `e = wrap(x_a − x̂)`:
///
/// ```text
/// I ← I + dt·e
/// x̂ ← x̂ + dt · (ẋ_g + KP·e + KI·I)
/// ```
///
/// The integral term tracks the negated gyro bias at steady state, which is
/// what removes the drift a fixed blend cannot.
#[derive(Debug, Clone)]
pub struct Ncf {
    kp: [f64; 3],
    ki: [f64; 3],
    estimate: Attitude,
    integral: [f64; 3],
}

impl Ncf {
    pub fn new(params: &FilterParams, first: &SensorSample) -> Result<Self> {
        Self::with_gains(params.cf_gains(), first)
    }

    pub fn with_gains(gains: CfAxisGains, first: &SensorSample) -> Result<Self> {
        Ok(Ncf {
            kp: gains.kp,
            ki: gains.ki,
            estimate: seed(first)?,
            integral: [0.0; 3],
        })
    }

    /// Accumulated error integral per axis (rad·s).
    pub fn integral(&self) -> [f64; 3] {
        self.integral
    }

    /// PI integral output `KI·I` per axis (rad/s); converges to the negated
    /// gyro bias under static conditions.
    pub fn integral_correction(&self) -> [f64; 3] {
        [
            self.ki[0] * self.integral[0],
            self.ki[1] * self.integral[1],
            self.ki[2] * self.integral[2],
        ]
    }

    /// Estimated additive gyro bias per axis (rad/s).
    pub fn bias_estimate(&self) -> [f64; 3] {
        let c = self.integral_correction();
        [-c[0], -c[1], -c[2]]
    }
}

impl AttitudeFilter for Ncf {
    fn step(&mut self, sample: &SensorSample, dt: f64) -> Result<Attitude> {
        let measured = accel_mag_attitude(sample.accel, sample.mag)?.as_array();
        let rate = euler_rates(self.estimate, sample.gyro)?;
        let prev = self.estimate.as_array();
        let mut next = [0.0; 3];
        for axis in 0..3 {
            let e = angle_diff(measured[axis], prev[axis]);
            self.integral[axis] = clamp_integral(self.integral[axis] + dt * e, self.ki[axis]);
            let correction = self.kp[axis] * e + self.ki[axis] * self.integral[axis];
            next[axis] = prev[axis] + dt * (rate[axis] + correction);
        }
        self.estimate = Attitude::wrapped(next[0], next[1], next[2]);
        Ok(self.estimate)
    }

    fn estimate(&self) -> Attitude {
        self.estimate
    }
}

/// Cascaded complementary filter.
///
/// The PI stage corrects the gyro rate, the corrected rate propagates the
/// previous estimate, and a linear `α` blend with the accel/mag attitude
/// forms the output. Per axis, with `e = wrap(x_a − x̂)`:
///
/// ```text
/// I    ← I + dt·e
/// ẋ_gᶜ = ẋ_g + KP·e + KI·I
/// x̂    ← α (x̂ + dt·ẋ_gᶜ) + (1 − α) x_a
/// ```
///
/// With `α = 1` the step is exactly the nonlinear filter; with
/// `KP = KI = 0` it is exactly the linear one. Because the bias is removed
/// before the blend, the output is largely insensitive to the gain choice.
#[derive(Debug, Clone)]
pub struct Ccf {
    gains: CfAxisGains,
    estimate: Attitude,
    integral: [f64; 3],
}

impl Ccf {
    pub fn new(params: &FilterParams, first: &SensorSample) -> Result<Self> {
        Self::with_gains(params.cf_gains(), first)
    }

    pub fn with_gains(gains: CfAxisGains, first: &SensorSample) -> Result<Self> {
        Ok(Ccf {
            gains,
            estimate: seed(first)?,
            integral: [0.0; 3],
        })
    }

    /// Accumulated error integral per axis (rad·s).
    pub fn integral(&self) -> [f64; 3] {
        self.integral
    }

    /// PI integral output `KI·I` per axis (rad/s).
    pub fn integral_correction(&self) -> [f64; 3] {
        [
            self.gains.ki[0] * self.integral[0],
            self.gains.ki[1] * self.integral[1],
            self.gains.ki[2] * self.integral[2],
        ]
    }

    /// Estimated additive gyro bias per axis (rad/s).
    pub fn bias_estimate(&self) -> [f64; 3] {
        let c = self.integral_correction();
        [-c[0], -c[1], -c[2]]
    }
}

impl AttitudeFilter for Ccf {
    fn step(&mut self, sample: &SensorSample, dt: f64) -> Result<Attitude> {
        let measured = accel_mag_attitude(sample.accel, sample.mag)?.as_array();
        let rate = euler_rates(self.estimate, sample.gyro)?;
        let prev = self.estimate.as_array();
        let mut next = [0.0; 3];
        for axis in 0..3 {
            let e = angle_diff(measured[axis], prev[axis]);
            self.integral[axis] = clamp_integral(self.integral[axis] + dt * e, self.gains.ki[axis]);
            let corrected_rate =
                rate[axis] + self.gains.kp[axis] * e + self.gains.ki[axis] * self.integral[axis];
            let propagated = prev[axis] + dt * corrected_rate;
            next[axis] = blend(self.gains.alpha[axis], propagated, measured[axis]);
        }
        self.estimate = Attitude::wrapped(next[0], next[1], next[2]);
        Ok(self.estimate)
    }

    fn estimate(&self) -> Attitude {
        self.estimate
    }
}
