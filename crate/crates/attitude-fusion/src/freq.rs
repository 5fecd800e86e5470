//! Transfer functions of the complementary filters and their frequency
//! response.
//!
//! Each filter splits into a high-pass path (gyro side) and a low-pass path
//! (accelerometer/magnetometer side) whose transfer functions share a
//! denominator and sum to exactly one — the fused channel passes every
//! frequency with unit gain and zero phase. [`complementary_check`] measures
//! how far a pair deviates from that identity on a frequency grid.

use num_complex::Complex64;

use crate::{Error, Result};

/// Real-coefficient rational function of `s`, both polynomials stored in
/// descending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalTf {
    num: Vec<f64>,
    den: Vec<f64>,
}

impl RationalTf {
    /// Build from descending-power coefficients. The leading denominator
    /// coefficient must be non-zero and the numerator degree must not exceed
    /// the denominator degree (the response would be unbounded otherwise).
    pub fn new(mut num: Vec<f64>, den: Vec<f64>) -> Result<Self> {
        if den.is_empty() || den[0] == 0.0 {
            return Err(Error::InvalidParams(
                "leading denominator coefficient must be non-zero".into(),
            ));
        }
        while num.len() > 1 && num[0] == 0.0 {
            num.remove(0);
        }
        if num.len() > den.len() {
            return Err(Error::InvalidParams(
                "numerator degree must not exceed denominator degree".into(),
            ));
        }
        if num.iter().chain(&den).any(|c| !c.is_finite()) {
            return Err(Error::InvalidParams("non-finite coefficient".into()));
        }
        Ok(RationalTf { num, den })
    }

    /// Numerator coefficients, descending powers of `s`.
    pub fn num(&self) -> &[f64] {
        &self.num
    }

    /// Denominator coefficients, descending powers of `s`.
    pub fn den(&self) -> &[f64] {
        &self.den
    }

    /// Horner evaluation of the response at `s = jω`.
    pub fn eval(&self, omega: f64) -> Complex64 {
        let s = Complex64::new(0.0, omega);
        horner(&self.num, s) / horner(&self.den, s)
    }
}

fn horner(coeffs: &[f64], s: Complex64) -> Complex64 {
    coeffs
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
}

/// One point of a frequency response: magnitude in dB and phase in degrees,
/// phase reported in (−180°, 180°].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodePoint {
    pub omega: f64,
    pub magnitude_db: f64,
    pub phase_deg: f64,
}

/// Magnitude and phase of a transfer function at `ω` rad/s.
pub fn eval_tf(tf: &RationalTf, omega: f64) -> Result<BodePoint> {
    if omega.is_nan() || omega <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "omega must be positive, got {omega}"
        )));
    }
    let h = tf.eval(omega);
    Ok(BodePoint {
        omega,
        magnitude_db: 20.0 * h.norm().log10(),
        phase_deg: h.arg().to_degrees(),
    })
}

/// High-pass/low-pass pair of the linear filter with time constant `tau`:
/// `τs/(1 + τs)` and `1/(1 + τs)`.
pub fn lcf_tf(tau: f64) -> Result<(RationalTf, RationalTf)> {
    if tau.is_nan() || tau <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "tau must be positive, got {tau}"
        )));
    }
    let hpf = RationalTf::new(vec![tau, 0.0], vec![tau, 1.0])?;
    let lpf = RationalTf::new(vec![1.0], vec![tau, 1.0])?;
    Ok((hpf, lpf))
}

/// High-pass/low-pass pair of the PI-corrected filter:
/// `s²/(s² + KP·s + KI)` and `(KP·s + KI)/(s² + KP·s + KI)`.
pub fn ncf_tf(kp: f64, ki: f64) -> Result<(RationalTf, RationalTf)> {
    if kp < 0.0 || ki < 0.0 || (kp == 0.0 && ki == 0.0) {
        return Err(Error::InvalidParams(
            "kp and ki must be ≥ 0 and not both zero".into(),
        ));
    }
    let den = vec![1.0, kp, ki];
    let hpf = RationalTf::new(vec![1.0, 0.0, 0.0], den.clone())?;
    let lpf = RationalTf::new(vec![kp, ki], den)?;
    Ok((hpf, lpf))
}

/// High-pass/low-pass pair of the cascaded filter:
/// `αs²/(s² + αKP·s + αKI)` and `((1−α)s² + αKP·s + αKI)/(s² + αKP·s + αKI)`.
pub fn ccf_tf(alpha: f64, kp: f64, ki: f64) -> Result<(RationalTf, RationalTf)> {
    if alpha.is_nan() || alpha <= 0.0 || alpha > 1.0 {
        return Err(Error::InvalidParams(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )));
    }
    if kp < 0.0 || ki < 0.0 {
        return Err(Error::InvalidParams("kp and ki must be ≥ 0".into()));
    }
    let den = vec![1.0, alpha * kp, alpha * ki];
    let hpf = RationalTf::new(vec![alpha, 0.0, 0.0], den.clone())?;
    let lpf = RationalTf::new(vec![1.0 - alpha, alpha * kp, alpha * ki], den)?;
    Ok((hpf, lpf))
}

/// Maximum deviation of `H(jω) + L(jω)` from 1 over a frequency grid.
pub fn complementary_check(hpf: &RationalTf, lpf: &RationalTf, omegas: &[f64]) -> f64 {
    omegas
        .iter()
        .map(|&w| (hpf.eval(w) + lpf.eval(w) - 1.0).norm())
        .fold(0.0, f64::max)
}

/// `n` logarithmically spaced points over `[lo, hi]` (inclusive).
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n > 1, "need 0 < lo < hi and n > 1");
    let (log_lo, log_hi) = (lo.log10(), hi.log10());
    let step = (log_hi - log_lo) / (n - 1) as f64;
    (0..n)
        .map(|i| 10f64.powf(log_lo + step * i as f64))
        .collect()
}

/// Default frequency grid: 100 log-spaced points over 1e-3..1e3 rad/s.
pub fn default_grid() -> Vec<f64> {
    log_space(1e-3, 1e3, 100)
}
