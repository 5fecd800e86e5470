//! Minimal quaternion support for the Mahony and Madgwick filters.

use std::ops::{Add, Mul};

use crate::attitude::Attitude;

/// Unit quaternion `(w, x, y, z)` mapping body coordinates to world
/// coordinates via `v_world = q ⊗ (0, v_body) ⊗ q*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const IDENTITY: Quaternion = Quaternion {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn conjugate(self) -> Self {
        Quaternion {
            w: self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    pub fn norm(self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        if n < f64::EPSILON {
            return Quaternion::IDENTITY;
        }
        Quaternion {
            w: self.w / n,
            x: self.x / n,
            y: self.y / n,
            z: self.z / n,
        }
    }

    pub fn scaled(self, k: f64) -> Self {
        Quaternion {
            w: k * self.w,
            x: k * self.x,
            y: k * self.y,
            z: k * self.z,
        }
    }

    /// Rotate a body-frame vector into the world frame.
    pub fn rotate(self, v: [f64; 3]) -> [f64; 3] {
        let p = self * Quaternion::new(0.0, v[0], v[1], v[2]) * self.conjugate();
        [p.x, p.y, p.z]
    }

    /// Rotate a world-frame vector into the body frame.
    pub fn rotate_inverse(self, v: [f64; 3]) -> [f64; 3] {
        self.conjugate().rotate(v)
    }

    /// Build from roll/pitch/yaw applied in z-y-x order.
    pub fn from_euler(att: Attitude) -> Self {
        let (sr, cr) = (att.roll / 2.0).sin_cos();
        let (sp, cp) = (att.pitch / 2.0).sin_cos();
        let (sy, cy) = (att.yaw / 2.0).sin_cos();
        // q = q_z(ψ) ⊗ q_y(θ) ⊗ q_x(ϕ)
        Quaternion {
            w: cy * cp * cr + sy * sp * sr,
            x: cy * cp * sr - sy * sp * cr,
            y: cy * sp * cr + sy * cp * sr,
            z: sy * cp * cr - cy * sp * sr,
        }
    }

    /// Extract roll/pitch/yaw; pitch is clamped onto [−π/2, π/2].
    pub fn to_euler(self) -> Attitude {
        let Quaternion { w, x, y, z } = self;
        let roll = (2.0 * (w * x + y * z)).atan2(1.0 - 2.0 * (x * x + y * y));
        let sin_pitch = (2.0 * (w * y - x * z)).clamp(-1.0, 1.0);
        let pitch = sin_pitch.asin();
        let yaw = (2.0 * (w * z + x * y)).atan2(1.0 - 2.0 * (y * y + z * z));
        Attitude { roll, pitch, yaw }
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    fn mul(self, rhs: Quaternion) -> Quaternion {
        Quaternion {
            w: self.w * rhs.w - self.x * rhs.x - self.y * rhs.y - self.z * rhs.z,
            x: self.w * rhs.x + self.x * rhs.w + self.y * rhs.z - self.z * rhs.y,
            y: self.w * rhs.y - self.x * rhs.z + self.y * rhs.w + self.z * rhs.x,
            z: self.w * rhs.z + self.x * rhs.y - self.y * rhs.x + self.z * rhs.w,
        }
    }
}

impl Add for Quaternion {
    type Output = Quaternion;

    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion {
            w: self.w + rhs.w,
            x: self.x + rhs.x,
            y: self.y + rhs.y,
            z: self.z + rhs.z,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attitude::angle_diff;
    use proptest::prelude::*;

    #[test]
    fn euler_round_trip_simple_axes() {
        for att in [
            Attitude::new(0.4, 0.0, 0.0),
            Attitude::new(0.0, -0.7, 0.0),
            Attitude::new(0.0, 0.0, 2.1),
        ] {
            let back = Quaternion::from_euler(att).to_euler();
            assert!((back.roll - att.roll).abs() < 1e-12);
            assert!((back.pitch - att.pitch).abs() < 1e-12);
            assert!((back.yaw - att.yaw).abs() < 1e-12);
        }
    }

    #[test]
    fn rotation_matches_euler_frame_convention() {
        // gravity seen in the body frame at roll ϕ, pitch θ is
        // (−sinθ, cosθ sinϕ, cosθ cosϕ)
        let att = Attitude::new(0.3, -0.5, 1.2);
        let q = Quaternion::from_euler(att);
        let g_body = q.rotate_inverse([0.0, 0.0, 1.0]);
        assert!((g_body[0] + att.pitch.sin()).abs() < 1e-12);
        assert!((g_body[1] - att.pitch.cos() * att.roll.sin()).abs() < 1e-12);
        assert!((g_body[2] - att.pitch.cos() * att.roll.cos()).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn euler_round_trip(
            roll in -3.0..3.0f64, pitch in -1.5..1.5f64, yaw in -3.0..3.0f64,
        ) {
            let att = Attitude::new(roll, pitch, yaw);
            let back = Quaternion::from_euler(att).to_euler();
            prop_assert!(angle_diff(back.roll, roll).abs() < 1e-9);
            prop_assert!((back.pitch - pitch).abs() < 1e-9);
            prop_assert!(angle_diff(back.yaw, yaw).abs() < 1e-9);
        }

        #[test]
        fn product_preserves_unit_norm(
            a in -1.0..1.0f64, b in -1.0..1.0f64, c in -1.0..1.0f64,
        ) {
            let q = Quaternion::from_euler(Attitude::new(a, b, c));
            let p = Quaternion::from_euler(Attitude::new(c, a * 0.4, b));
            prop_assert!(((q * p).norm() - 1.0).abs() < 1e-12);
        }
    }
}
