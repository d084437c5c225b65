//! Cartesian points and spherical directions.
//!
//! Angles are stored in degrees at the API boundary and converted to
//! radians only where trigonometry happens.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A point or displacement in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, other: Vec3) -> f64 {
        (self - other).norm()
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self * (1.0 / n))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Polar angle `theta` in `[0, 180]` and azimuth `phi` in `(-180, 180]`, both in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalDir {
    pub theta: f64,
    pub phi: f64,
}

impl SphericalDir {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// Direction of a non-zero vector, with the polar axis along +z.
    pub fn from_vector(v: Vec3) -> Option<Self> {
        let r = v.norm();
        if !(r > 0.0) || !r.is_finite() {
            return None;
        }
        let theta = (v.z / r).clamp(-1.0, 1.0).acos().to_degrees();
        let mut phi = v.y.atan2(v.x).to_degrees();
        if phi <= -180.0 {
            phi += 360.0;
        }
        Some(Self { theta, phi })
    }

    /// Unit vector pointing along this direction.
    pub fn unit_vector(self) -> Vec3 {
        let (st, ct) = self.theta.to_radians().sin_cos();
        let (sp, cp) = self.phi.to_radians().sin_cos();
        Vec3::new(st * cp, st * sp, ct)
    }

    /// Great-circle separation to another direction, in degrees.
    pub fn angular_distance(self, other: SphericalDir) -> f64 {
        let c = self.unit_vector().dot(other.unit_vector()).clamp(-1.0, 1.0);
        c.acos().to_degrees()
    }
}
