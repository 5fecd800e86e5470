//! Mahony's passive complementary filter on the quaternion group.
//!
//! The correction term is the sum of two vector cross products: measured vs
//! estimated gravity direction and measured vs estimated field direction.
//! A proportional (optionally proportional-integral) gain feeds the
//! correction back into the rate integration.

use crate::attitude::Attitude;
use crate::filters::{AttitudeFilter, FilterParams, Quaternion};
use crate::{Result, SensorSample};

#[derive(Debug, Clone)]
pub struct Mahony {
    kp: f64,
    ki: f64,
    q: Quaternion,
    integral: [f64; 3],
}

fn normalize3(v: [f64; 3]) -> Option<[f64; 3]> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if n < 1e-12 {
        None
    } else {
        Some([v[0] / n, v[1] / n, v[2] / n])
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

impl Mahony {
    pub fn new(params: &FilterParams, first: &SensorSample) -> Result<Self> {
        let seed = crate::attitude::accel_mag_attitude(first.accel, first.mag)?;
        Ok(Mahony {
            kp: params.mahony_kp,
            ki: params.mahony_ki,
            q: Quaternion::from_euler(seed),
            integral: [0.0; 3],
        })
    }

    pub fn quaternion(&self) -> Quaternion {
        self.q
    }
}

impl AttitudeFilter for Mahony {
    fn step(&mut self, sample: &SensorSample, dt: f64) -> Result<Attitude> {
        let mut error = [0.0; 3];

        if let Some(a) = normalize3([sample.accel.x, sample.accel.y, sample.accel.z]) {
            // estimated gravity direction in the body frame
            let v = self.q.rotate_inverse([0.0, 0.0, 1.0]);
            let e = cross(a, v);
            error[0] += e[0];
            error[1] += e[1];
            error[2] += e[2];

            if let Some(m) = normalize3([sample.mag.x, sample.mag.y, sample.mag.z]) {
                // world-frame field from the measurement, flattened onto the
                // (horizontal, vertical) plane, then mapped back to the body
                let h = self.q.rotate(m);
                let b = [h[0].hypot(h[1]), 0.0, h[2]];
                let w = self.q.rotate_inverse(b);
                let e = cross(m, w);
                error[0] += e[0];
                error[1] += e[1];
                error[2] += e[2];
            }
        }

        let mut rate = [sample.gyro.p, sample.gyro.q, sample.gyro.r];
        for axis in 0..3 {
            if self.ki > 0.0 {
                self.integral[axis] += self.ki * error[axis] * dt;
                rate[axis] += self.integral[axis];
            }
            rate[axis] += self.kp * error[axis];
        }

        let omega = Quaternion::new(0.0, rate[0], rate[1], rate[2]);
        let q_dot = (self.q * omega).scaled(0.5);
        self.q = (self.q + q_dot.scaled(dt)).normalized();
        Ok(self.estimate())
    }

    fn estimate(&self) -> Attitude {
        let e = self.q.to_euler();
        Attitude::wrapped(e.roll, e.pitch, e.yaw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attitude::{BodyRates, Vec3};
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    fn level(t: f64) -> SensorSample {
        SensorSample {
            t,
            gyro: BodyRates::default(),
            accel: Vec3::new(0.0, 0.0, 9.81),
            mag: Vec3::new(1.0, 0.0, 0.0),
        }
    }

    #[test]
    fn zero_error_is_a_fixed_point() {
        let mut f = Mahony::new(&FilterParams::default(), &level(0.0)).unwrap();
        let q0 = f.quaternion();
        for k in 1..100 {
            f.step(&level(k as f64 * 0.01), 0.01).unwrap();
        }
        let q1 = f.quaternion();
        assert!((q0.w - q1.w).abs() < 1e-12);
        assert!((q0.x - q1.x).abs() < 1e-12);
        assert!((q0.y - q1.y).abs() < 1e-12);
        assert!((q0.z - q1.z).abs() < 1e-12);
    }

    #[test]
    fn quaternion_stays_unit_over_a_million_random_steps() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut unit = || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0;
        let mut f = Mahony::new(&FilterParams::default(), &level(0.0)).unwrap();
        for k in 1..=1_000_000u64 {
            let s = SensorSample {
                t: k as f64 * 0.01,
                gyro: BodyRates::new(5.0 * unit(), 5.0 * unit(), 5.0 * unit()),
                accel: Vec3::new(unit(), unit(), 1.0 + unit()),
                mag: Vec3::new(1.0 + unit(), unit(), unit()),
            };
            f.step(&s, 0.01).unwrap();
            let n = f.quaternion().norm();
            assert!((n - 1.0).abs() < 1e-9, "step {k}: |q| = {n}");
        }
    }
}
