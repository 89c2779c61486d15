//! Minimal 2x2 complex matrix type for the frame representations.

use crate::C64;
use std::ops::{Add, Mul, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub e: [[C64; 2]; 2],
}

impl Mat2 {
    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2 { e: [[a, b], [c, d]] }
    }

    pub fn zero() -> Self {
        let z = C64::new(0.0, 0.0);
        Mat2::new(z, z, z, z)
    }

    /// diag(t, -t)
    pub fn diag_pm(t: C64) -> Self {
        let z = C64::new(0.0, 0.0);
        Mat2::new(t, z, z, -t)
    }

    pub fn trace(&self) -> C64 {
        self.e[0][0] + self.e[1][1]
    }

    pub fn scale(&self, s: C64) -> Self {
        Mat2::new(
            self.e[0][0] * s,
            self.e[0][1] * s,
            self.e[1][0] * s,
            self.e[1][1] * s,
        )
    }

    pub fn commutator(&self, other: &Mat2) -> Mat2 {
        *self * *other - *other * *self
    }

    /// Entrywise max modulus.
    pub fn max_norm(&self) -> f64 {
        self.e
            .iter()
            .flatten()
            .map(|x| x.norm())
            .fold(0.0, f64::max)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.e[0][0] + o.e[0][0],
            self.e[0][1] + o.e[0][1],
            self.e[1][0] + o.e[1][0],
            self.e[1][1] + o.e[1][1],
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.e[0][0] - o.e[0][0],
            self.e[0][1] - o.e[0][1],
            self.e[1][0] - o.e[1][0],
            self.e[1][1] - o.e[1][1],
        )
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let mut r = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                r.e[i][j] = self.e[i][0] * o.e[0][j] + self.e[i][1] * o.e[1][j];
            }
        }
        r
    }
}
