//! Attitude kinematics shared by every estimator.
//!
//! Orientation is parameterized by aerospace Euler angles: roll `ϕ` about the
//! body x axis, pitch `θ` about y, yaw `ψ` about z, composed world→body in
//! z-y-x order. Body angular rates are `p`, `q`, `r`. Tilt is recovered from
//! the accelerometer and heading from the tilt-compensated magnetometer,
//! both with two-argument arctangents so the full angle range is available.
//!
//! The Euler parameterization is singular at pitch ±π/2; [`euler_rates`]
//! refuses to evaluate inside a small band around the singularity and
//! [`integrate_attitude`] clamps pitch just inside that band so a run can
//! continue past a grazing encounter.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::{Error, Result};

/// Pitch band around ±π/2 treated as gimbal lock by [`euler_rates`].
pub const GIMBAL_MARGIN: f64 = 1e-6;

/// Pitch magnitude that [`integrate_attitude`] clamps to. One extra margin
/// inside the gimbal band, so a clamped attitude can still be propagated.
pub const PITCH_CLAMP: f64 = FRAC_PI_2 - 2.0 * GIMBAL_MARGIN;

const DEGENERATE_NORM: f64 = 1e-12;

/// Roll/pitch/yaw Euler angles in radians.
///
/// A normalized attitude has roll and yaw in `[−π, π)` and pitch in
/// `[−π/2, π/2]`; [`Attitude::wrapped`] produces that form.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Attitude {
    pub roll: f64,
    pub pitch: f64,
    pub yaw: f64,
}

impl Attitude {
    pub const ZERO: Attitude = Attitude {
        roll: 0.0,
        pitch: 0.0,
        yaw: 0.0,
    };

    pub fn new(roll: f64, pitch: f64, yaw: f64) -> Self {
        Attitude { roll, pitch, yaw }
    }

    /// Normalized constructor: wraps roll and yaw onto `[−π, π)` and clamps
    /// pitch to `±PITCH_CLAMP`.
    pub fn wrapped(roll: f64, pitch: f64, yaw: f64) -> Self {
        Attitude {
            roll: wrap_angle(roll),
            pitch: pitch.clamp(-PITCH_CLAMP, PITCH_CLAMP),
            yaw: wrap_angle(yaw),
        }
    }

    pub fn as_array(self) -> [f64; 3] {
        [self.roll, self.pitch, self.yaw]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Attitude {
            roll: a[0],
            pitch: a[1],
            yaw: a[2],
        }
    }

    pub fn is_finite(self) -> bool {
        self.roll.is_finite() && self.pitch.is_finite() && self.yaw.is_finite()
    }
}

/// Body angular rates in rad/s about the x, y and z axes.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BodyRates {
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl BodyRates {
    pub fn new(p: f64, q: f64, r: f64) -> Self {
        BodyRates { p, q, r }
    }
}

/// A 3-vector in one consistent physical unit.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// Wrap an angle onto `[−π, π)`.
pub fn wrap_angle(x: f64) -> f64 {
    let r = (x + PI).rem_euclid(TAU) - PI;
    // rem_euclid can round up to exactly TAU for inputs a hair below a period
    if r >= PI {
        r - TAU
    } else {
        r
    }
}

/// Shortest signed arc from `b` to `a`: `wrap_angle(a − b)`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    wrap_angle(a - b)
}

/// Euler-angle rates `[ϕ̇, θ̇, ψ̇]` produced by body rates at an attitude.
///
/// ```text
/// ϕ̇ = p + q sinϕ tanθ + r cosϕ tanθ
/// θ̇ = q cosϕ − r sinϕ
/// ψ̇ = q sinϕ secθ + r cosϕ secθ
/// ```
///
/// Fails with [`Error::GimbalLock`] when `|pitch| ≥ π/2 − GIMBAL_MARGIN`.
pub fn euler_rates(att: Attitude, rates: BodyRates) -> Result<[f64; 3]> {
    if att.pitch.abs() >= FRAC_PI_2 - GIMBAL_MARGIN {
        return Err(Error::GimbalLock { pitch: att.pitch });
    }
    let (sin_r, cos_r) = att.roll.sin_cos();
    let tan_p = att.pitch.tan();
    let sec_p = 1.0 / att.pitch.cos();
    let BodyRates { p, q, r } = rates;
    let lateral = q * sin_r + r * cos_r;
    Ok([p + lateral * tan_p, q * cos_r - r * sin_r, lateral * sec_p])
}

/// Roll and pitch from an accelerometer reading:
/// `roll = atan2(a_y, a_z)`, `pitch = atan2(−a_x, a_y sin(roll) + a_z cos(roll))`.
///
/// The result is scale invariant; only the direction of the vector matters.
pub fn accel_attitude(accel: Vec3) -> Result<(f64, f64)> {
    if accel.norm() <= DEGENERATE_NORM {
        return Err(Error::DegenerateVector(
            "accelerometer reading is near zero",
        ));
    }
    let roll = accel.y.atan2(accel.z);
    let (sin_r, cos_r) = roll.sin_cos();
    let pitch = (-accel.x).atan2(accel.y * sin_r + accel.z * cos_r);
    Ok((roll, pitch))
}

/// Tilt-compensated heading from a magnetometer reading:
/// `yaw = atan2(m_z sinϕ − m_y cosϕ, m_x cosθ + m_y sinθ sinϕ + m_z sinθ cosϕ)`.
pub fn mag_yaw(mag: Vec3, roll: f64, pitch: f64) -> Result<f64> {
    let (sin_r, cos_r) = roll.sin_cos();
    let (sin_p, cos_p) = pitch.sin_cos();
    let num = mag.z * sin_r - mag.y * cos_r;
    let den = mag.x * cos_p + mag.y * sin_p * sin_r + mag.z * sin_p * cos_r;
    if num.hypot(den) <= DEGENERATE_NORM * mag.norm().max(1.0) {
        return Err(Error::DegenerateVector(
            "magnetometer gives no horizontal component",
        ));
    }
    Ok(num.atan2(den))
}

/// Full accelerometer + magnetometer attitude: tilt from the accelerometer,
/// heading from the magnetometer at that tilt. Pitch is left unclamped, so
/// the result may sit right at ±π/2 for extreme tilts.
pub fn accel_mag_attitude(accel: Vec3, mag: Vec3) -> Result<Attitude> {
    let (roll, pitch) = accel_attitude(accel)?;
    let yaw = mag_yaw(mag, roll, pitch)?;
    Ok(Attitude { roll, pitch, yaw })
}

/// One forward-Euler attitude step: `att + dt · euler_rates(att, rates)`,
/// wrapped and with pitch clamped to `±PITCH_CLAMP`.
pub fn integrate_attitude(att: Attitude, rates: BodyRates, dt: f64) -> Result<Attitude> {
    debug_assert!(dt > 0.0, "dt must be positive");
    let rate = euler_rates(att, rates)?;
    Ok(Attitude::wrapped(
        att.roll + dt * rate[0],
        att.pitch + dt * rate[1],
        att.yaw + dt * rate[2],
    ))
}
