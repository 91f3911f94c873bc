use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

use super::Bivector3;

/// A general element of Cl(3,0), stored densely.
///
/// Component order is `1, e1, e2, e3, e12, e13, e23, e123`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Multivector3 {
    pub s: f64,
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
    pub b12: f64,
    pub b13: f64,
    pub b23: f64,
    pub p: f64,
}

impl Multivector3 {
    pub const ZERO: Multivector3 = Multivector3::from_array([0.0; 8]);
    pub const ONE: Multivector3 = Multivector3::scalar(1.0);
    pub const E1: Multivector3 = Multivector3::vector(1.0, 0.0, 0.0);
    pub const E2: Multivector3 = Multivector3::vector(0.0, 1.0, 0.0);
    pub const E3: Multivector3 = Multivector3::vector(0.0, 0.0, 1.0);
    pub const E12: Multivector3 = Multivector3::bivector(1.0, 0.0, 0.0);
    pub const E13: Multivector3 = Multivector3::bivector(0.0, 1.0, 0.0);
    pub const E23: Multivector3 = Multivector3::bivector(0.0, 0.0, 1.0);
    pub const E123: Multivector3 = Multivector3::pseudoscalar(1.0);

    pub const fn from_array(c: [f64; 8]) -> Self {
        Multivector3 {
            s: c[0],
            v1: c[1],
            v2: c[2],
            v3: c[3],
            b12: c[4],
            b13: c[5],
            b23: c[6],
            p: c[7],
        }
    }

    pub const fn to_array(self) -> [f64; 8] {
        [
            self.s, self.v1, self.v2, self.v3, self.b12, self.b13, self.b23, self.p,
        ]
    }

    pub const fn scalar(s: f64) -> Self {
        let mut m = Multivector3::from_array([0.0; 8]);
        m.s = s;
        m
    }

    pub const fn vector(v1: f64, v2: f64, v3: f64) -> Self {
        let mut m = Multivector3::from_array([0.0; 8]);
        m.v1 = v1;
        m.v2 = v2;
        m.v3 = v3;
        m
    }

    pub const fn bivector(b12: f64, b13: f64, b23: f64) -> Self {
        let mut m = Multivector3::from_array([0.0; 8]);
        m.b12 = b12;
        m.b13 = b13;
        m.b23 = b23;
        m
    }

    pub const fn pseudoscalar(p: f64) -> Self {
        let mut m = Multivector3::from_array([0.0; 8]);
        m.p = p;
        m
    }

    pub fn from_vec3(v: [f64; 3]) -> Self {
        Multivector3::vector(v[0], v[1], v[2])
    }

    /// Grade-1 coefficients, ignoring everything else.
    pub fn vec3(&self) -> [f64; 3] {
        [self.v1, self.v2, self.v3]
    }

    pub fn bivector_part(&self) -> Bivector3 {
        Bivector3::new(self.b12, self.b13, self.b23)
    }

    /// Full Cl(3,0) geometric product with `e_i^2 = +1`.
    pub fn geometric_product(&self, b: &Multivector3) -> Multivector3 {
        let a = self;
        Multivector3 {
            s: a.s * b.s + a.v1 * b.v1 + a.v2 * b.v2 + a.v3 * b.v3
                - a.b12 * b.b12
                - a.b13 * b.b13
                - a.b23 * b.b23
                - a.p * b.p,
            v1: a.s * b.v1 + a.v1 * b.s - a.v2 * b.b12 - a.v3 * b.b13 + a.b12 * b.v2 + a.b13 * b.v3
                - a.b23 * b.p
                - a.p * b.b23,
            v2: a.s * b.v2 + a.v2 * b.s + a.v1 * b.b12 - a.v3 * b.b23 - a.b12 * b.v1
                + a.b13 * b.p
                + a.b23 * b.v3
                + a.p * b.b13,
            v3: a.s * b.v3 + a.v3 * b.s + a.v1 * b.b13 + a.v2 * b.b23
                - a.b12 * b.p
                - a.b13 * b.v1
                - a.b23 * b.v2
                - a.p * b.b12,
            b12: a.s * b.b12 + a.b12 * b.s + a.v1 * b.v2 - a.v2 * b.v1 + a.v3 * b.p - a.b13 * b.b23
                + a.b23 * b.b13
                + a.p * b.v3,
            b13: a.s * b.b13 + a.b13 * b.s + a.v1 * b.v3 - a.v3 * b.v1 - a.v2 * b.p + a.b12 * b.b23
                - a.b23 * b.b12
                - a.p * b.v2,
            b23: a.s * b.b23 + a.b23 * b.s + a.v2 * b.v3 - a.v3 * b.v2 + a.v1 * b.p - a.b12 * b.b13
                + a.b13 * b.b12
                + a.p * b.v1,
            p: a.s * b.p + a.p * b.s + a.v1 * b.b23 - a.v2 * b.b13 + a.v3 * b.b12 + a.b12 * b.v3
                - a.b13 * b.v2
                + a.b23 * b.v1,
        }
    }

    /// Reversion: grades 2 and 3 change sign.
    pub fn reverse(&self) -> Multivector3 {
        Multivector3 {
            b12: -self.b12,
            b13: -self.b13,
            b23: -self.b23,
            p: -self.p,
            ..*self
        }
    }

    /// Projection onto grade `k`.
    pub fn grade(&self, k: usize) -> Result<Multivector3> {
        let mut out = Multivector3::ZERO;
        match k {
            0 => out.s = self.s,
            1 => {
                out.v1 = self.v1;
                out.v2 = self.v2;
                out.v3 = self.v3;
            }
            2 => {
                out.b12 = self.b12;
                out.b13 = self.b13;
                out.b23 = self.b23;
            }
            3 => out.p = self.p,
            _ => return Err(Error::arg(format!("grade {k} out of range 0..=3"))),
        }
        Ok(out)
    }

    /// True when every component outside grade 1 is exactly zero.
    pub fn is_vector(&self) -> bool {
        self.s == 0.0 && self.b12 == 0.0 && self.b13 == 0.0 && self.b23 == 0.0 && self.p == 0.0
    }

    pub fn norm_sq(&self) -> f64 {
        self.to_array().iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, k: f64) -> Multivector3 {
        Multivector3::from_array(self.to_array().map(|c| c * k))
    }

    pub fn max_abs_diff(&self, other: &Multivector3) -> f64 {
        let a = self.to_array();
        let b = other.to_array();
        (0..8).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max)
    }
}

/// Product of two vectors: `u·v + u∧v`.
///
/// Equal to `geometric_product` on grade-1 inputs, without the zero terms.
#[inline]
pub fn vector_product(u: [f64; 3], v: [f64; 3]) -> Multivector3 {
    Multivector3::from_array([
        u[0] * v[0] + u[1] * v[1] + u[2] * v[2],
        0.0,
        0.0,
        0.0,
        u[0] * v[1] - u[1] * v[0],
        u[0] * v[2] - u[2] * v[0],
        u[1] * v[2] - u[2] * v[1],
        0.0,
    ])
}

impl Add for Multivector3 {
    type Output = Multivector3;
    fn add(self, rhs: Multivector3) -> Multivector3 {
        let a = self.to_array();
        let b = rhs.to_array();
        Multivector3::from_array(std::array::from_fn(|i| a[i] + b[i]))
    }
}

impl Sub for Multivector3 {
    type Output = Multivector3;
    fn sub(self, rhs: Multivector3) -> Multivector3 {
        self + (-rhs)
    }
}

impl Neg for Multivector3 {
    type Output = Multivector3;
    fn neg(self) -> Multivector3 {
        self.scale(-1.0)
    }
}

impl Mul for Multivector3 {
    type Output = Multivector3;
    fn mul(self, rhs: Multivector3) -> Multivector3 {
        self.geometric_product(&rhs)
    }
}

impl Mul<f64> for Multivector3 {
    type Output = Multivector3;
    fn mul(self, rhs: f64) -> Multivector3 {
        self.scale(rhs)
    }
}

impl From<Bivector3> for Multivector3 {
    fn from(b: Bivector3) -> Self {
        Multivector3::bivector(b.b12, b.b13, b.b23)
    }
}

impl fmt::Display for Multivector3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 8] = ["", "e1", "e2", "e3", "e12", "e13", "e23", "e123"];
        let mut first = true;
        for (c, name) in self.to_array().iter().zip(NAMES) {
            if *c == 0.0 {
                continue;
            }
            if first {
                write!(f, "{c}{name}")?;
            } else if *c < 0.0 {
                write!(f, " - {}{name}", -c)?;
            } else {
                write!(f, " + {c}{name}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const M: Multivector3 = Multivector3::from_array([1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0]);

    #[test]
    fn basis_squares() {
        assert_eq!(Multivector3::E1 * Multivector3::E1, Multivector3::ONE);
        assert_eq!(Multivector3::E12 * Multivector3::E12, -Multivector3::ONE);
        assert_eq!(Multivector3::E123 * Multivector3::E123, -Multivector3::ONE);
    }

    #[test]
    fn anticommuting_vectors() {
        assert_eq!(Multivector3::E3 * Multivector3::E1, -Multivector3::E13);
        assert_eq!(Multivector3::E1 * Multivector3::E3, Multivector3::E13);
    }

    #[test]
    fn bilinear_expansion() {
        let lhs = (Multivector3::E1 + Multivector3::E2) * Multivector3::E2;
        assert_eq!(lhs, Multivector3::ONE + Multivector3::E12);
    }

    #[test]
    fn reverse_signs() {
        assert_eq!(Multivector3::E12.reverse(), -Multivector3::E12);
        assert_eq!(Multivector3::E1.reverse(), Multivector3::E1);
        assert_eq!(
            M.reverse(),
            Multivector3::from_array([1.0, 1.0, 0.0, 0.0, -1.0, 0.0, 0.0, -1.0])
        );
        assert_eq!(M.reverse().reverse(), M);
    }

    #[test]
    fn grade_projection() {
        let m = Multivector3::ONE + Multivector3::E12 * 2.0;
        assert_eq!(m.grade(0).unwrap(), Multivector3::ONE);
        assert_eq!(m.grade(2).unwrap(), Multivector3::E12 * 2.0);
        assert_eq!(Multivector3::E123.grade(2).unwrap(), Multivector3::ZERO);
        assert!(m.grade(4).is_err());
    }

    #[test]
    fn grades_sum_back() {
        let m = Multivector3::from_array([1.5, -2.0, 3.0, 0.25, -1.0, 7.0, 0.5, -0.125]);
        let sum = (0..4)
            .map(|k| m.grade(k).unwrap())
            .fold(Multivector3::ZERO, |a, b| a + b);
        assert_eq!(sum, m);
    }

    #[test]
    fn vector_product_matches_full_product() {
        let u = [0.3, -1.2, 2.5];
        let v = [1.1, 0.4, -0.7];
        let full = Multivector3::from_vec3(u) * Multivector3::from_vec3(v);
        assert!(full.max_abs_diff(&vector_product(u, v)) < 1e-15);
    }

    #[test]
    fn display() {
        assert_eq!(
            format!("{}", Multivector3::ONE * 4.0 - Multivector3::E13 * 4.0),
            "4 - 4e13"
        );
        assert_eq!(format!("{}", Multivector3::ZERO), "0");
    }
}
