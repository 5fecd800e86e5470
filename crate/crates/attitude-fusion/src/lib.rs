//! 9-DOF attitude estimation in Euler angles.
//!
//! The crate implements a family of complementary attitude estimators — a
//! fixed-blend linear filter, a PI-corrected nonlinear filter, and a cascaded
//! combination in which the PI stage compensates gyroscope bias before a
//! linear blend produces the attitude — together with the usual baselines:
//! a 3-state extended Kalman filter, a separate-bias complementary Kalman
//! filter, and the Mahony and Madgwick quaternion filters.
//!
//! Supporting modules generate reproducible synthetic sensor streams
//! ([`datagen`]), evaluate the filters' transfer functions ([`freq`]), and
//! score estimate tracks against a reference ([`eval`]).
//!
//! ```
//! use attitude_fusion::datagen::{synthesize, Motion, SensorErrorModel, TrajectorySpec};
//! use attitude_fusion::filters::{run_filter, FilterKind, FilterParams};
//! use attitude_fusion::eval::{average_rmse, rmse};
//!
//! let spec = TrajectorySpec {
//!     duration: 10.0,
//!     rate: 50.0,
//!     motion: Motion::sinusoidal([0.3, 0.2, 0.4], [0.1, 0.07, 0.05]),
//!     seed: 7,
//! };
//! let dataset = synthesize(&spec, &SensorErrorModel::default()).unwrap();
//! let track = run_filter(FilterKind::Ccf, &FilterParams::default(), &dataset).unwrap();
//! let err = rmse(dataset.reference.as_ref().unwrap(), &track).unwrap();
//! assert!(average_rmse(err) < 0.5);
//! ```

pub mod attitude;
pub mod datagen;
pub mod eval;
pub mod filters;
pub mod freq;

pub use attitude::{Attitude, BodyRates, Vec3};
pub use datagen::Dataset;
pub use filters::{run_filter, FilterKind, FilterParams};

/// One timestamped 9-DOF reading: gyroscope rates plus accelerometer and
/// magnetometer vectors.
///
/// Accelerometer and magnetometer values may be in any consistent unit; the
/// attitude computations only use component ratios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorSample {
    /// Timestamp in seconds.
    pub t: f64,
    /// Body angular rates in rad/s.
    pub gyro: BodyRates,
    /// Specific-force reading; (0, 0, +g) at rest and level.
    pub accel: Vec3,
    /// Magnetic field reading in the body frame.
    pub mag: Vec3,
}

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Pitch too close to ±π/2 for the Euler-rate map to be evaluated.
    #[error("gimbal lock: pitch {pitch} rad is inside the singular band at ±π/2")]
    GimbalLock { pitch: f64 },
    /// A sensor vector was too close to zero to define an angle.
    #[error("degenerate vector: {0}")]
    DegenerateVector(&'static str),
    /// A filter lost numerical health (e.g. covariance no longer PSD).
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    /// A dataset with no samples was supplied.
    #[error("empty dataset")]
    EmptyDataset,
    /// Timestamps must be strictly increasing.
    #[error("non-monotonic time: sample {index} has t = {t}, previous t = {prev}")]
    NonMonotonicTime { index: usize, prev: f64, t: f64 },
    /// Two tracks that should be aligned have different lengths.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    /// An operation requiring at least one sample got none.
    #[error("empty track")]
    EmptyTrack,
    /// Filter parameters violate their documented ranges.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    /// A trajectory specification violates its documented bounds.
    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),
}

pub type Result<T> = std::result::Result<T, Error>;

// The guide chapters double as doc-tests so their snippets stay in sync with
// the API. mdbook renders the same files from book/.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            pub struct $name;
        };
    }

    chapter!(Introduction, "../../../book/src/introduction.md");
    chapter!(
        AttitudeKinematics,
        "../../../book/src/attitude-kinematics.md"
    );
    chapter!(
        ComplementaryFilters,
        "../../../book/src/complementary-filters.md"
    );
    chapter!(CascadedFilter, "../../../book/src/cascaded-filter.md");
    chapter!(FrequencyResponse, "../../../book/src/frequency-response.md");
    chapter!(KalmanBaselines, "../../../book/src/kalman-baselines.md");
    chapter!(SyntheticData, "../../../book/src/synthetic-data.md");
    chapter!(Evaluation, "../../../book/src/evaluation.md");
    chapter!(CommandLine, "../../../book/src/cli.md");
}
