//! Kalman baselines: a 3-state Euler-angle EKF and a separate-bias
//! complementary Kalman filter.
//!
//! Both filters measure the accelerometer/magnetometer attitude, wrap every
//! residual onto (−π, π], propagate process noise as `Q·dt`, update the
//! covariance in Joseph form and verify after every step that it stayed
//! symmetric and positive semidefinite (within 1e-9), failing with
//! [`Error::NumericalFailure`] otherwise.

use nalgebra::{Matrix3, Matrix6, Matrix6x3, Vector3};

use crate::attitude::{accel_mag_attitude, angle_diff, euler_rates, Attitude, BodyRates};
use crate::filters::{AttitudeFilter, FilterParams};
use crate::{Error, Result, SensorSample};

const COV_TOL: f64 = 1e-9;

fn seed(first: &SensorSample) -> Result<Attitude> {
    let att = accel_mag_attitude(first.accel, first.mag)?;
    Ok(Attitude::wrapped(att.roll, att.pitch, att.yaw))
}

fn check_covariance3(p: &Matrix3<f64>) -> Result<()> {
    if (p - p.transpose()).abs().max() > COV_TOL {
        return Err(Error::NumericalFailure(
            "EKF covariance lost symmetry".into(),
        ));
    }
    if p.symmetric_eigenvalues().min() < -COV_TOL {
        return Err(Error::NumericalFailure(
            "EKF covariance lost positive semidefiniteness".into(),
        ));
    }
    Ok(())
}

fn check_covariance6(p: &Matrix6<f64>) -> Result<()> {
    if (p - p.transpose()).abs().max() > COV_TOL {
        return Err(Error::NumericalFailure(
            "CKF covariance lost symmetry".into(),
        ));
    }
    if p.symmetric_eigenvalues().min() < -COV_TOL {
        return Err(Error::NumericalFailure(
            "CKF covariance lost positive semidefiniteness".into(),
        ));
    }
    Ok(())
}

/// Jacobian of the Euler-rate map with respect to (roll, pitch, yaw).
fn euler_rate_jacobian(att: Attitude, rates: BodyRates) -> Matrix3<f64> {
    let (sin_r, cos_r) = att.roll.sin_cos();
    let cos_p = att.pitch.cos();
    let tan_p = att.pitch.tan();
    let sec_p = 1.0 / cos_p;
    let BodyRates { q, r, .. } = rates;
    let lateral = q * sin_r + r * cos_r;
    let lateral_d = q * cos_r - r * sin_r;
    #[rustfmt::skip]
    let jacobian = Matrix3::new(
        lateral_d * tan_p, lateral * sec_p * sec_p, 0.0,
        -lateral,          0.0,                     0.0,
        lateral_d * sec_p, lateral * sec_p * tan_p, 0.0,
    );
    jacobian
}

/// 3-state Euler-angle extended Kalman filter.
///
/// Prediction integrates the Euler kinematics with the analytic Jacobian as
/// the transition linearization; the update observes the accel/mag attitude
/// directly (`H = I`).
#[derive(Debug, Clone)]
pub struct Ekf {
    x: Attitude,
    p: Matrix3<f64>,
    q: Matrix3<f64>,
    r: Matrix3<f64>,
}

impl Ekf {
    pub fn new(params: &FilterParams, first: &SensorSample) -> Result<Self> {
        Ok(Ekf {
            x: seed(first)?,
            p: Matrix3::identity() * 0.1,
            q: params.q_ekf,
            r: params.r_ekf,
        })
    }

    pub fn covariance(&self) -> &Matrix3<f64> {
        &self.p
    }
}

impl AttitudeFilter for Ekf {
    fn step(&mut self, sample: &SensorSample, dt: f64) -> Result<Attitude> {
        // predict
        let rate = euler_rates(self.x, sample.gyro)?;
        let f = Matrix3::identity() + dt * euler_rate_jacobian(self.x, sample.gyro);
        let predicted = Attitude::wrapped(
            self.x.roll + dt * rate[0],
            self.x.pitch + dt * rate[1],
            self.x.yaw + dt * rate[2],
        );
        self.p = f * self.p * f.transpose() + self.q * dt;

        // update against the accel/mag attitude
        let z = accel_mag_attitude(sample.accel, sample.mag)?;
        let innovation = Vector3::new(
            angle_diff(z.roll, predicted.roll),
            angle_diff(z.pitch, predicted.pitch),
            angle_diff(z.yaw, predicted.yaw),
        );
        let s = self.p + self.r;
        let s_inv = s
            .try_inverse()
            .ok_or_else(|| Error::NumericalFailure("EKF innovation covariance singular".into()))?;
        let gain = self.p * s_inv;
        let dx = gain * innovation;
        self.x = Attitude::wrapped(
            predicted.roll + dx[0],
            predicted.pitch + dx[1],
            predicted.yaw + dx[2],
        );

        // Joseph-form covariance update, then re-symmetrize
        let a = Matrix3::identity() - gain;
        self.p = a * self.p * a.transpose() + gain * self.r * gain.transpose();
        self.p = (self.p + self.p.transpose()) * 0.5;
        check_covariance3(&self.p)?;
        Ok(self.x)
    }

    fn estimate(&self) -> Attitude {
        self.x
    }
}

/// Separate-bias complementary Kalman filter.
///
/// The attitude track integrates bias-corrected gyro rates outside the
/// filter. A 6-state KF over [attitude error; rate correction] observes the
/// wrapped difference between that track and the accel/mag attitude
/// (`H = [I 0]`). After each update the attitude error is fed back into the
/// track and reset; the rate-correction states persist and are added to the
/// measured rates, so they converge to the negated gyro bias.
#[derive(Debug, Clone)]
pub struct Ckf {
    attitude: Attitude,
    /// Additive rate correction (rad/s); ≈ −(gyro bias) once converged.
    correction: Vector3<f64>,
    p: Matrix6<f64>,
    q: Matrix6<f64>,
    r: Matrix3<f64>,
}

impl Ckf {
    pub fn new(params: &FilterParams, first: &SensorSample) -> Result<Self> {
        Ok(Ckf {
            attitude: seed(first)?,
            correction: Vector3::zeros(),
            p: Matrix6::identity() * 0.1,
            q: params.q_ckf,
            r: params.r_ckf,
        })
    }

    pub fn covariance(&self) -> &Matrix6<f64> {
        &self.p
    }

    /// Estimated additive gyro bias per axis (rad/s).
    pub fn gyro_bias(&self) -> [f64; 3] {
        [
            -self.correction[0],
            -self.correction[1],
            -self.correction[2],
        ]
    }
}

impl AttitudeFilter for Ckf {
    fn step(&mut self, sample: &SensorSample, dt: f64) -> Result<Attitude> {
        // attitude computation outside the filter, on corrected rates
        let corrected = BodyRates::new(
            sample.gyro.p + self.correction[0],
            sample.gyro.q + self.correction[1],
            sample.gyro.r + self.correction[2],
        );
        self.attitude = crate::attitude::integrate_attitude(self.attitude, corrected, dt)?;

        // covariance prediction; the bias block couples into the attitude
        // error with −dt. The error mean is zero after each reset, so only
        // the covariance propagates.
        let mut f = Matrix6::<f64>::identity();
        f.fixed_view_mut::<3, 3>(0, 3)
            .copy_from(&(Matrix3::identity() * -dt));
        self.p = f * self.p * f.transpose() + self.q * dt;

        // observed attitude error of the track
        let z = accel_mag_attitude(sample.accel, sample.mag)?;
        let innovation = Vector3::new(
            angle_diff(self.attitude.roll, z.roll),
            angle_diff(self.attitude.pitch, z.pitch),
            angle_diff(self.attitude.yaw, z.yaw),
        );
        let s = self.p.fixed_view::<3, 3>(0, 0) + self.r;
        let s_inv = s
            .try_inverse()
            .ok_or_else(|| Error::NumericalFailure("CKF innovation covariance singular".into()))?;
        let gain: Matrix6x3<f64> = self.p.fixed_view::<6, 3>(0, 0) * s_inv;
        let dx = gain * innovation;

        // feedback: remove the estimated error from the track (error-state
        // reset) and fold the bias part into the persistent correction
        self.attitude = Attitude::wrapped(
            self.attitude.roll - dx[0],
            self.attitude.pitch - dx[1],
            self.attitude.yaw - dx[2],
        );
        self.correction[0] += dx[3];
        self.correction[1] += dx[4];
        self.correction[2] += dx[5];

        let mut a = Matrix6::<f64>::identity();
        let left = a.fixed_view::<6, 3>(0, 0) - gain;
        a.fixed_view_mut::<6, 3>(0, 0).copy_from(&left);
        self.p = a * self.p * a.transpose() + gain * self.r * gain.transpose();
        self.p = (self.p + self.p.transpose()) * 0.5;
        check_covariance6(&self.p)?;
        Ok(self.attitude)
    }

    fn estimate(&self) -> Attitude {
        self.attitude
    }
}
