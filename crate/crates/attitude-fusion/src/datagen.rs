//! Reproducible synthetic ground truth and corrupted 9-DOF sensor streams.
//!
//! A [`TrajectorySpec`] describes the true motion; [`gen_trajectory`] turns
//! it into an attitude track and the body-rate track that is its exact
//! inverse kinematics, so integrating the rates reproduces the attitude up
//! to integration error. [`simulate_sensors`] then corrupts ideal readings
//! with white noise and a random-walk gyro bias, all from a seeded
//! generator: the same spec and seed always produce the same bytes.

use std::f64::consts::FRAC_PI_2;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::attitude::{Attitude, BodyRates, Vec3};
use crate::{Error, Result, SensorSample};

/// Largest pitch magnitude a trajectory may command; keeps every generated
/// dataset clear of the kinematic singularity.
pub const PITCH_BOUND: f64 = FRAC_PI_2 - 0.1;

/// True motion of the body.
#[derive(Debug, Clone, PartialEq)]
pub enum Motion {
    /// Constant attitude.
    Static { attitude: Attitude },
    /// Independent sinusoids per axis: `angle_i(t) = A_i sin(2π f_i t + φ_i)`.
    Sinusoidal {
        amplitude: [f64; 3],
        frequency: [f64; 3],
        phase: [f64; 3],
    },
    /// Random waypoints every `segment` seconds, joined by a smoothstep so
    /// the rate track is continuous.
    PiecewiseRandomSmooth { segment: f64, max_amplitude: f64 },
}

impl Motion {
    pub fn level() -> Self {
        Motion::Static {
            attitude: Attitude::ZERO,
        }
    }

    pub fn sinusoidal(amplitude: [f64; 3], frequency: [f64; 3]) -> Self {
        Motion::Sinusoidal {
            amplitude,
            frequency,
            phase: [0.0; 3],
        }
    }
}

/// Duration, rate, motion and seed of one synthetic run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySpec {
    /// Length of the run in seconds.
    pub duration: f64,
    /// Sample rate in Hz.
    pub rate: f64,
    pub motion: Motion,
    /// Seed for any randomness in the motion itself.
    pub seed: u64,
}

impl TrajectorySpec {
    /// 600 s at 100 Hz: the short benchmark configuration.
    pub fn benchmark(motion: Motion, seed: u64) -> Self {
        TrajectorySpec {
            duration: 600.0,
            rate: 100.0,
            motion,
            seed,
        }
    }

    /// 7200 s at 100 Hz: the long-run drift configuration.
    pub fn long_run(motion: Motion, seed: u64) -> Self {
        TrajectorySpec {
            duration: 7200.0,
            rate: 100.0,
            motion,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.duration.is_nan() || self.duration <= 0.0 {
            return Err(Error::InvalidTrajectory("duration must be positive".into()));
        }
        if self.rate.is_nan() || self.rate <= 0.0 {
            return Err(Error::InvalidTrajectory("rate must be positive".into()));
        }
        match &self.motion {
            Motion::Static { attitude } => {
                if attitude.pitch.abs() > PITCH_BOUND {
                    return Err(Error::InvalidTrajectory(format!(
                        "static pitch {} exceeds the ±{PITCH_BOUND:.3} rad bound",
                        attitude.pitch
                    )));
                }
            }
            Motion::Sinusoidal {
                amplitude,
                frequency,
                ..
            } => {
                if amplitude[1].abs() > PITCH_BOUND {
                    return Err(Error::InvalidTrajectory(format!(
                        "pitch amplitude {} exceeds the ±{PITCH_BOUND:.3} rad bound",
                        amplitude[1]
                    )));
                }
                if amplitude.iter().any(|a| !a.is_finite())
                    || frequency.iter().any(|f| !f.is_finite() || *f < 0.0)
                {
                    return Err(Error::InvalidTrajectory(
                        "non-finite sinusoid parameters".into(),
                    ));
                }
            }
            Motion::PiecewiseRandomSmooth {
                segment,
                max_amplitude,
            } => {
                if segment.is_nan() || *segment <= 0.0 {
                    return Err(Error::InvalidTrajectory(
                        "segment length must be positive".into(),
                    ));
                }
                if *max_amplitude > PITCH_BOUND || *max_amplitude < 0.0 {
                    return Err(Error::InvalidTrajectory(format!(
                        "max amplitude {max_amplitude} outside [0, {PITCH_BOUND:.3}]"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Additive error model applied to ideal sensor readings.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorErrorModel {
    /// Gyro bias at t = 0, rad/s per axis.
    pub gyro_bias_initial: [f64; 3],
    /// Bias random-walk intensity, rad/s/√s.
    pub gyro_bias_walk_std: f64,
    /// White gyro noise, rad/s.
    pub gyro_noise_std: f64,
    /// White accelerometer noise, same unit as the accel output.
    pub accel_noise_std: f64,
    /// White magnetometer noise, same unit as the mag output.
    pub mag_noise_std: f64,
    /// Gravity magnitude; sets the accel output scale.
    pub gravity_mag: f64,
    /// World-frame reference field. Must not be parallel to gravity.
    pub mag_field: Vec3,
}

impl Default for SensorErrorModel {
    fn default() -> Self {
        SensorErrorModel {
            gyro_bias_initial: [0.0; 3],
            gyro_bias_walk_std: 0.0,
            gyro_noise_std: 0.005,
            accel_noise_std: 0.05,
            mag_noise_std: 0.005,
            gravity_mag: 9.80665,
            // unit field dipping 60° below horizontal, no declination
            mag_field: Vec3 {
                x: 0.5,
                y: 0.0,
                z: -0.866_025_403_784_438_6,
            },
        }
    }
}

impl SensorErrorModel {
    /// Ideal sensors: every filter should recover the reference exactly.
    pub fn noise_free() -> Self {
        SensorErrorModel {
            gyro_noise_std: 0.0,
            accel_noise_std: 0.0,
            mag_noise_std: 0.0,
            ..SensorErrorModel::default()
        }
    }

    pub fn with_bias(mut self, bias: [f64; 3]) -> Self {
        self.gyro_bias_initial = bias;
        self
    }

    pub fn with_walk(mut self, walk_std: f64) -> Self {
        self.gyro_bias_walk_std = walk_std;
        self
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("gyro_bias_walk_std", self.gyro_bias_walk_std),
            ("gyro_noise_std", self.gyro_noise_std),
            ("accel_noise_std", self.accel_noise_std),
            ("mag_noise_std", self.mag_noise_std),
        ] {
            if v < 0.0 || !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be ≥ 0, got {v}")));
            }
        }
        if self.mag_field.norm() <= 0.0 {
            return Err(Error::InvalidParams("mag_field must be non-zero".into()));
        }
        if self.mag_field.x.hypot(self.mag_field.y) < 1e-9 * self.mag_field.norm() {
            return Err(Error::InvalidParams(
                "mag_field must not be parallel to gravity".into(),
            ));
        }
        Ok(())
    }
}

/// A sample sequence plus an optional time-aligned reference attitude track.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub samples: Vec<SensorSample>,
    pub reference: Option<Vec<Attitude>>,
    /// Nominal sample rate in Hz.
    pub rate: f64,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn validate(&self) -> Result<()> {
        for (index, pair) in self.samples.windows(2).enumerate() {
            if pair[1].t <= pair[0].t {
                return Err(Error::NonMonotonicTime {
                    index: index + 1,
                    prev: pair[0].t,
                    t: pair[1].t,
                });
            }
        }
        if let Some(reference) = &self.reference {
            if reference.len() != self.samples.len() {
                return Err(Error::LengthMismatch {
                    left: reference.len(),
                    right: self.samples.len(),
                });
            }
        }
        Ok(())
    }
}

/// Seeded standard-normal source: ChaCha8 stream plus a Box–Muller
/// transform, so identical seeds give identical noise on every platform.
struct GaussianSource {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianSource {
    fn new(seed: u64) -> Self {
        GaussianSource {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.uniform(); // (0, 1]
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let (sin, cos) = (std::f64::consts::TAU * u2).sin_cos();
        self.spare = Some(radius * sin);
        radius * cos
    }
}

/// Rotate a world-frame vector into the body frame of `att` (yaw, then
/// pitch, then roll).
pub fn world_to_body(att: Attitude, v: Vec3) -> Vec3 {
    let (sy, cy) = att.yaw.sin_cos();
    let (sp, cp) = att.pitch.sin_cos();
    let (sr, cr) = att.roll.sin_cos();
    let (x1, y1, z1) = (v.x * cy + v.y * sy, -v.x * sy + v.y * cy, v.z);
    let (x2, y2, z2) = (x1 * cp - z1 * sp, y1, x1 * sp + z1 * cp);
    Vec3 {
        x: x2,
        y: y2 * cr + z2 * sr,
        z: -y2 * sr + z2 * cr,
    }
}

/// Body rates that produce the given Euler-angle rates at an attitude (the
/// inverse of the Euler-rate map).
fn inverse_kinematics(att: Attitude, euler_dot: [f64; 3]) -> BodyRates {
    let (sr, cr) = att.roll.sin_cos();
    let (sp, cp) = att.pitch.sin_cos();
    let [roll_dot, pitch_dot, yaw_dot] = euler_dot;
    BodyRates {
        p: roll_dot - yaw_dot * sp,
        q: pitch_dot * cr + yaw_dot * cp * sr,
        r: -pitch_dot * sr + yaw_dot * cp * cr,
    }
}

/// Evaluate the true attitude and its analytic time derivative at `t`.
struct MotionEval {
    motion: Motion,
    segment_points: [Vec<f64>; 3],
}

impl MotionEval {
    fn new(motion: Motion, duration: f64, seed: u64) -> Self {
        let mut segment_points: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        if let Motion::PiecewiseRandomSmooth {
            segment,
            max_amplitude,
        } = &motion
        {
            let mut rng = GaussianSource::new(seed);
            let count = (duration / segment).ceil() as usize + 2;
            for axis in &mut segment_points {
                axis.push(0.0); // every run starts level
                for _ in 1..count {
                    axis.push((2.0 * rng.uniform() - 1.0) * max_amplitude);
                }
            }
        }
        MotionEval {
            motion,
            segment_points,
        }
    }

    fn eval(&self, t: f64) -> (Attitude, [f64; 3]) {
        match &self.motion {
            Motion::Static { attitude } => (*attitude, [0.0; 3]),
            Motion::Sinusoidal {
                amplitude,
                frequency,
                phase,
            } => {
                let mut angle = [0.0; 3];
                let mut rate = [0.0; 3];
                for axis in 0..3 {
                    let omega = std::f64::consts::TAU * frequency[axis];
                    let arg = omega * t + phase[axis];
                    angle[axis] = amplitude[axis] * arg.sin();
                    rate[axis] = amplitude[axis] * omega * arg.cos();
                }
                (Attitude::from_array(angle), rate)
            }
            Motion::PiecewiseRandomSmooth { segment, .. } => {
                let index = (t / segment).floor() as usize;
                let u = (t - index as f64 * segment) / segment;
                let ease = u * u * (3.0 - 2.0 * u);
                let ease_dot = 6.0 * u * (1.0 - u) / segment;
                let mut angle = [0.0; 3];
                let mut rate = [0.0; 3];
                for axis in 0..3 {
                    let points = &self.segment_points[axis];
                    let a = points[index.min(points.len() - 2)];
                    let b = points[(index + 1).min(points.len() - 1)];
                    angle[axis] = a + (b - a) * ease;
                    rate[axis] = (b - a) * ease_dot;
                }
                (Attitude::from_array(angle), rate)
            }
        }
    }
}

/// Sample the true attitude track and its exact body-rate track.
pub fn gen_trajectory(spec: &TrajectorySpec) -> Result<(Vec<Attitude>, Vec<BodyRates>)> {
    spec.validate()?;
    let dt = 1.0 / spec.rate;
    let count = (spec.duration * spec.rate).round() as usize;
    let eval = MotionEval::new(spec.motion.clone(), spec.duration, spec.seed);
    let mut attitude = Vec::with_capacity(count);
    let mut rates = Vec::with_capacity(count);
    for k in 0..count {
        let (att, euler_dot) = eval.eval(k as f64 * dt);
        rates.push(inverse_kinematics(att, euler_dot));
        attitude.push(att);
    }
    Ok((attitude, rates))
}

/// Corrupt ideal readings of a truth track into a [`Dataset`].
///
/// Per sample: gyro = true rates + bias + white noise, with the bias doing a
/// per-axis random walk from its initial value; accel = gravity reaction
/// rotated into the body frame + noise; mag = reference field rotated into
/// the body frame + noise. The reference track is the truth itself.
pub fn simulate_sensors(
    attitude: &[Attitude],
    rates: &[BodyRates],
    rate_hz: f64,
    err: &SensorErrorModel,
    seed: u64,
) -> Result<Dataset> {
    err.validate()?;
    if attitude.len() != rates.len() {
        return Err(Error::LengthMismatch {
            left: attitude.len(),
            right: rates.len(),
        });
    }
    let dt = 1.0 / rate_hz;
    let sqrt_dt = dt.sqrt();
    let mut rng = GaussianSource::new(seed);
    let mut bias = err.gyro_bias_initial;
    let gravity = Vec3 {
        x: 0.0,
        y: 0.0,
        z: err.gravity_mag,
    };

    let mut samples = Vec::with_capacity(attitude.len());
    for (k, (att, rate)) in attitude.iter().zip(rates).enumerate() {
        let gyro = BodyRates {
            p: rate.p + bias[0] + err.gyro_noise_std * rng.standard_normal(),
            q: rate.q + bias[1] + err.gyro_noise_std * rng.standard_normal(),
            r: rate.r + bias[2] + err.gyro_noise_std * rng.standard_normal(),
        };
        let g_body = world_to_body(*att, gravity);
        let accel = Vec3 {
            x: g_body.x + err.accel_noise_std * rng.standard_normal(),
            y: g_body.y + err.accel_noise_std * rng.standard_normal(),
            z: g_body.z + err.accel_noise_std * rng.standard_normal(),
        };
        let m_body = world_to_body(*att, err.mag_field);
        let mag = Vec3 {
            x: m_body.x + err.mag_noise_std * rng.standard_normal(),
            y: m_body.y + err.mag_noise_std * rng.standard_normal(),
            z: m_body.z + err.mag_noise_std * rng.standard_normal(),
        };
        samples.push(SensorSample {
            t: k as f64 * dt,
            gyro,
            accel,
            mag,
        });
        for b in &mut bias {
            *b += err.gyro_bias_walk_std * sqrt_dt * rng.standard_normal();
        }
    }
    Ok(Dataset {
        samples,
        reference: Some(attitude.to_vec()),
        rate: rate_hz,
    })
}

/// Generate a trajectory and simulate its sensors in one call. The sensor
/// noise stream is derived from the trajectory seed.
pub fn synthesize(spec: &TrajectorySpec, err: &SensorErrorModel) -> Result<Dataset> {
    let (attitude, rates) = gen_trajectory(spec)?;
    simulate_sensors(
        &attitude,
        &rates,
        spec.rate,
        err,
        spec.seed ^ 0xA076_1D64_78BD_642F,
    )
}
