//! Integral Hamilton quaternions.
//!
//! `Z^4` is identified with the quaternion ring via
//! `(a, b, c, d) -> a + b i + c j + d k`, and `Z^3` with the traceless
//! quaternions via `(x, y, z) -> x i + y j + z k`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Quaternion {
    pub x0: i64,
    pub x1: i64,
    pub x2: i64,
    pub x3: i64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0, 0, 0, 0);
    pub const ONE: Self = Self::new(1, 0, 0, 0);
    pub const I: Self = Self::new(0, 1, 0, 0);
    pub const J: Self = Self::new(0, 0, 1, 0);
    pub const K: Self = Self::new(0, 0, 0, 1);

    pub const fn new(x0: i64, x1: i64, x2: i64, x3: i64) -> Self {
        Self { x0, x1, x2, x3 }
    }

    pub const fn from_vec4(v: [i64; 4]) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub const fn to_vec4(self) -> [i64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }

    pub const fn conj(self) -> Self {
        Self::new(self.x0, -self.x1, -self.x2, -self.x3)
    }

    /// Reduced norm `x0^2 + x1^2 + x2^2 + x3^2`.
    pub const fn nr(self) -> i64 {
        self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    /// Reduced trace `q + conj(q) = 2 x0`.
    pub const fn tr(self) -> i64 {
        2 * self.x0
    }

    /// Euclidean inner product of the coefficient vectors.
    pub const fn dot(self, other: Self) -> i64 {
        self.x0 * other.x0 + self.x1 * other.x1 + self.x2 * other.x2 + self.x3 * other.x3
    }

    /// `q - tr(q)/2`, the traceless part. Only integral; `x0` is dropped.
    pub const fn pure_part(self) -> TracelessQuaternion {
        TracelessQuaternion::new(self.x1, self.x2, self.x3)
    }
}

impl Mul for Quaternion {
    type Output = Self;

    fn mul(self, r: Self) -> Self {
        let q = self;
        Self::new(
            q.x0 * r.x0 - q.x1 * r.x1 - q.x2 * r.x2 - q.x3 * r.x3,
            q.x0 * r.x1 + q.x1 * r.x0 + q.x2 * r.x3 - q.x3 * r.x2,
            q.x0 * r.x2 - q.x1 * r.x3 + q.x2 * r.x0 + q.x3 * r.x1,
            q.x0 * r.x3 + q.x1 * r.x2 - q.x2 * r.x1 + q.x3 * r.x0,
        )
    }
}

impl Add for Quaternion {
    type Output = Self;

    fn add(self, r: Self) -> Self {
        Self::new(self.x0 + r.x0, self.x1 + r.x1, self.x2 + r.x2, self.x3 + r.x3)
    }
}

impl Sub for Quaternion {
    type Output = Self;

    fn sub(self, r: Self) -> Self {
        Self::new(self.x0 - r.x0, self.x1 - r.x1, self.x2 - r.x2, self.x3 - r.x3)
    }
}

impl Neg for Quaternion {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.x0, -self.x1, -self.x2, -self.x3)
    }
}

impl From<i64> for Quaternion {
    fn from(x: i64) -> Self {
        Self::new(x, 0, 0, 0)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.x0, self.x1, self.x2, self.x3)
    }
}

/// A quaternion with zero real part, i.e. a vector in `Z^3`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TracelessQuaternion {
    pub x1: i64,
    pub x2: i64,
    pub x3: i64,
}

impl TracelessQuaternion {
    pub const fn new(x1: i64, x2: i64, x3: i64) -> Self {
        Self { x1, x2, x3 }
    }

    pub const fn from_vec3(v: [i64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub const fn to_vec3(self) -> [i64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub const fn nr(self) -> i64 {
        self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    pub const fn is_zero(self) -> bool {
        self.x1 == 0 && self.x2 == 0 && self.x3 == 0
    }

    pub const fn to_quaternion(self) -> Quaternion {
        Quaternion::new(0, self.x1, self.x2, self.x3)
    }
}

impl Neg for TracelessQuaternion {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.x1, -self.x2, -self.x3)
    }
}

impl From<TracelessQuaternion> for Quaternion {
    fn from(t: TracelessQuaternion) -> Self {
        t.to_quaternion()
    }
}
