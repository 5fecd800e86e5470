//! Single-sensor reference estimators: raw gyro integration and the raw
//! accelerometer/magnetometer solution. Useful as baselines when plotting
//! what fusion buys.

use crate::attitude::{accel_mag_attitude, integrate_attitude, Attitude};
use crate::filters::AttitudeFilter;
use crate::{Result, SensorSample};

/// Forward-Euler gyro integration from the seeded attitude. Any rate bias
/// integrates into unbounded drift.
#[derive(Debug, Clone)]
pub struct GyroIntegrator {
    estimate: Attitude,
}

impl GyroIntegrator {
    pub fn new(first: &SensorSample) -> Result<Self> {
        let att = accel_mag_attitude(first.accel, first.mag)?;
        Ok(GyroIntegrator {
            estimate: Attitude::wrapped(att.roll, att.pitch, att.yaw),
        })
    }
}

impl AttitudeFilter for GyroIntegrator {
    fn step(&mut self, sample: &SensorSample, dt: f64) -> Result<Attitude> {
        self.estimate = integrate_attitude(self.estimate, sample.gyro, dt)?;
        Ok(self.estimate)
    }

    fn estimate(&self) -> Attitude {
        self.estimate
    }
}

/// Per-sample accelerometer/magnetometer attitude, no filtering at all.
#[derive(Debug, Clone)]
pub struct AccelMagDirect {
    estimate: Attitude,
}

impl AccelMagDirect {
    pub fn new(first: &SensorSample) -> Result<Self> {
        let att = accel_mag_attitude(first.accel, first.mag)?;
        Ok(AccelMagDirect {
            estimate: Attitude::wrapped(att.roll, att.pitch, att.yaw),
        })
    }
}

impl AttitudeFilter for AccelMagDirect {
    fn step(&mut self, sample: &SensorSample, _dt: f64) -> Result<Attitude> {
        let att = accel_mag_attitude(sample.accel, sample.mag)?;
        self.estimate = Attitude::wrapped(att.roll, att.pitch, att.yaw);
        Ok(self.estimate)
    }

    fn estimate(&self) -> Attitude {
        self.estimate
    }
}
