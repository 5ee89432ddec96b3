//! Minimal 3-vector with the cylindrical helpers the catalogue needs.

use crate::scalar::Real;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Vec3<T> {
    pub const fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    /// Point with cylindrical coordinates (rho, phi, z).
    pub fn from_cylindrical(rho: T, phi: T, z: T) -> Self {
        Self::new(rho * phi.cos(), rho * phi.sin(), z)
    }

    /// Vector with components (v_rho, v_phi, v_z) in the frame at azimuth `phi`.
    pub fn from_cylindrical_components(v_rho: T, v_phi: T, v_z: T, phi: T) -> Self {
        let (s, c) = phi.sin_cos();
        Self::new(v_rho * c - v_phi * s, v_rho * s + v_phi * c, v_z)
    }

    /// Components (v_rho, v_phi, v_z) in the frame at azimuth `phi`.
    pub fn cylindrical_components(self, phi: T) -> (T, T, T) {
        let (s, c) = phi.sin_cos();
        (self.x * c + self.y * s, -self.x * s + self.y * c, self.z)
    }

    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm_sqr(self) -> T {
        self.dot(self)
    }

    pub fn norm(self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(self) -> T {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    /// Distance from the z-axis.
    pub fn rho(self) -> T {
        self.x.hypot(self.y)
    }

    /// Azimuth in (−π, π].
    pub fn phi(self) -> T {
        self.y.atan2(self.x)
    }

    /// Unit azimuthal vector at this point's azimuth.
    pub fn e_phi(self) -> Self {
        let phi = self.phi();
        Self::new(-phi.sin(), phi.cos(), T::zero())
    }

    pub fn e_rho(self) -> Self {
        let phi = self.phi();
        Self::new(phi.cos(), phi.sin(), T::zero())
    }

    pub fn map(self, f: impl Fn(T) -> T) -> Self {
        Self::new(f(self.x), f(self.y), f(self.z))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl<T: Real> Add for Vec3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> Sub for Vec3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> AddAssign for Vec3<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> SubAssign for Vec3<T> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Real> Mul<T> for Vec3<T> {
    type Output = Self;
    fn mul(self, k: T) -> Self {
        Self::new(self.x * k, self.y * k, self.z * k)
    }
}

impl<T: Real> Neg for Vec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<T> Index<usize> for Vec3<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

impl<T> IndexMut<usize> for Vec3<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        match i {
            0 => &mut self.x,
            1 => &mut self.y,
            2 => &mut self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}
