//! Madgwick's gradient-descent orientation filter (MARG form).
//!
//! Each step integrates the gyro rates and descends the combined
//! gravity/field alignment objective by one normalized gradient step of
//! length `β·dt`.

use crate::attitude::Attitude;
use crate::filters::{AttitudeFilter, FilterParams, Quaternion};
use crate::{Result, SensorSample};

#[derive(Debug, Clone)]
pub struct Madgwick {
    beta: f64,
    q: Quaternion,
}

fn normalize3(v: [f64; 3]) -> Option<[f64; 3]> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if n < 1e-12 {
        None
    } else {
        Some([v[0] / n, v[1] / n, v[2] / n])
    }
}

/// Alignment residuals of the estimate `q` against normalized gravity `a`
/// and field `m` readings, given the world-frame field `(bx, 0, bz)`.
/// Six components: three gravity, three field.
pub(crate) fn objective(q: Quaternion, a: [f64; 3], m: [f64; 3], bx: f64, bz: f64) -> [f64; 6] {
    let Quaternion { w, x, y, z } = q;
    [
        2.0 * (x * z - w * y) - a[0],
        2.0 * (w * x + y * z) - a[1],
        2.0 * (0.5 - x * x - y * y) - a[2],
        2.0 * bx * (0.5 - y * y - z * z) + 2.0 * bz * (x * z - w * y) - m[0],
        2.0 * bx * (x * y - w * z) + 2.0 * bz * (w * x + y * z) - m[1],
        2.0 * bx * (w * y + x * z) + 2.0 * bz * (0.5 - x * x - y * y) - m[2],
    ]
}

/// `Jᵀ f` for the combined objective: the unnormalized gradient.
fn gradient(q: Quaternion, f: [f64; 6], bx: f64, bz: f64) -> Quaternion {
    let Quaternion { w, x, y, z } = q;
    let (fg1, fg2, fg3, fb1, fb2, fb3) = (f[0], f[1], f[2], f[3], f[4], f[5]);

    let gw = -2.0 * y * fg1
        + 2.0 * x * fg2
        + (-2.0 * bz * y) * fb1
        + (-2.0 * bx * z + 2.0 * bz * x) * fb2
        + (2.0 * bx * y) * fb3;
    let gx = 2.0 * z * fg1 + 2.0 * w * fg2 - 4.0 * x * fg3
        + (2.0 * bz * z) * fb1
        + (2.0 * bx * y + 2.0 * bz * w) * fb2
        + (2.0 * bx * z - 4.0 * bz * x) * fb3;
    let gy = -2.0 * w * fg1 + 2.0 * z * fg2 - 4.0 * y * fg3
        + (-4.0 * bx * y - 2.0 * bz * w) * fb1
        + (2.0 * bx * x + 2.0 * bz * z) * fb2
        + (2.0 * bx * w - 4.0 * bz * y) * fb3;
    let gz = 2.0 * x * fg1
        + 2.0 * y * fg2
        + (-4.0 * bx * z + 2.0 * bz * x) * fb1
        + (-2.0 * bx * w + 2.0 * bz * y) * fb2
        + (2.0 * bx * x) * fb3;

    Quaternion::new(gw, gx, gy, gz)
}

impl Madgwick {
    pub fn new(params: &FilterParams, first: &SensorSample) -> Result<Self> {
        let seed = crate::attitude::accel_mag_attitude(first.accel, first.mag)?;
        Ok(Madgwick {
            beta: params.madgwick_beta,
            q: Quaternion::from_euler(seed),
        })
    }

    pub fn quaternion(&self) -> Quaternion {
        self.q
    }

    /// World-frame reference field from a body-frame measurement: horizontal
    /// magnitude and vertical component.
    pub(crate) fn reference_field(q: Quaternion, m: [f64; 3]) -> (f64, f64) {
        let h = q.rotate(m);
        (h[0].hypot(h[1]), h[2])
    }
}

impl AttitudeFilter for Madgwick {
    fn step(&mut self, sample: &SensorSample, dt: f64) -> Result<Attitude> {
        let omega = Quaternion::new(0.0, sample.gyro.p, sample.gyro.q, sample.gyro.r);
        let mut q_dot = (self.q * omega).scaled(0.5);

        let accel = normalize3([sample.accel.x, sample.accel.y, sample.accel.z]);
        let mag = normalize3([sample.mag.x, sample.mag.y, sample.mag.z]);
        if let (Some(a), Some(m)) = (accel, mag) {
            let (bx, bz) = Self::reference_field(self.q, m);
            let f = objective(self.q, a, m, bx, bz);
            let grad = gradient(self.q, f, bx, bz);
            let n = grad.norm();
            // ignore float dust: normalizing it would turn perfect alignment
            // into a full-length step in an arbitrary direction
            if n > 1e-12 {
                let step = grad.scaled(self.beta / n);
                q_dot = q_dot + step.scaled(-1.0);
            }
        }

        self.q = (self.q + q_dot.scaled(dt)).normalized();
        Ok(self.estimate())
    }

    fn estimate(&self) -> Attitude {
        let e = self.q.to_euler();
        Attitude::wrapped(e.roll, e.pitch, e.yaw)
    }
}
