use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::Matrix3;

use crate::error::{Error, Result};

use super::Multivector3;

/// Tolerance on `|plane| = 1` and `|rotor| = 1` checks.
pub const UNIT_TOLERANCE: f64 = 1e-9;

/// Relative size below which a bivector part counts as zero.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

/// A grade-2 element `b12 e12 + b13 e13 + b23 e23`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Bivector3 {
    pub b12: f64,
    pub b13: f64,
    pub b23: f64,
}

impl Bivector3 {
    pub const ZERO: Bivector3 = Bivector3::new(0.0, 0.0, 0.0);
    pub const E12: Bivector3 = Bivector3::new(1.0, 0.0, 0.0);
    pub const E13: Bivector3 = Bivector3::new(0.0, 1.0, 0.0);
    pub const E23: Bivector3 = Bivector3::new(0.0, 0.0, 1.0);

    pub const fn new(b12: f64, b13: f64, b23: f64) -> Self {
        Bivector3 { b12, b13, b23 }
    }

    /// The plane orthogonal to `axis`, oriented so that a positive rotation
    /// in the plane is a right-handed rotation about the axis.
    pub fn from_axis(axis: [f64; 3]) -> Self {
        Bivector3::new(axis[2], -axis[1], axis[0])
    }

    /// Inverse of [`Bivector3::from_axis`].
    pub fn axis(&self) -> [f64; 3] {
        [self.b23, -self.b13, self.b12]
    }

    pub fn norm_sq(&self) -> f64 {
        self.b12 * self.b12 + self.b13 * self.b13 + self.b23 * self.b23
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn normalized(&self) -> Option<Bivector3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| *self * (1.0 / n))
    }

    pub fn is_unit(&self) -> bool {
        (self.norm() - 1.0).abs() <= UNIT_TOLERANCE
    }

    /// Euclidean inner product of the coefficients.
    pub fn dot(&self, other: &Bivector3) -> f64 {
        self.b12 * other.b12 + self.b13 * other.b13 + self.b23 * other.b23
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.b12, self.b13, self.b23]
    }

    fn require_unit(&self) -> Result<()> {
        if self.is_unit() {
            Ok(())
        } else {
            Err(Error::arg(format!(
                "plane {self} is not a unit bivector (norm {})",
                self.norm()
            )))
        }
    }
}

impl Add for Bivector3 {
    type Output = Bivector3;
    fn add(self, o: Bivector3) -> Bivector3 {
        Bivector3::new(self.b12 + o.b12, self.b13 + o.b13, self.b23 + o.b23)
    }
}

impl Sub for Bivector3 {
    type Output = Bivector3;
    fn sub(self, o: Bivector3) -> Bivector3 {
        self + (-o)
    }
}

impl Neg for Bivector3 {
    type Output = Bivector3;
    fn neg(self) -> Bivector3 {
        Bivector3::new(-self.b12, -self.b13, -self.b23)
    }
}

impl Mul<f64> for Bivector3 {
    type Output = Bivector3;
    fn mul(self, k: f64) -> Bivector3 {
        Bivector3::new(self.b12 * k, self.b13 * k, self.b23 * k)
    }
}

impl fmt::Display for Bivector3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}e12, {}e13, {}e23)", self.b12, self.b13, self.b23)
    }
}

/// An even-grade element `s + B`. Rotors built by [`exp_bivector`] are unit;
/// correlation values wrapped in a `Rotor3` generally are not.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotor3 {
    pub s: f64,
    pub b: Bivector3,
}

/// Angle and unit plane of a polar form `|r| e^{angle * plane}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnglePlane {
    pub angle: f64,
    pub plane: Bivector3,
    /// The bivector part vanished; `plane` is the `e12` fallback.
    pub degenerate: bool,
}

impl Default for Rotor3 {
    fn default() -> Self {
        Rotor3::IDENTITY
    }
}

impl Rotor3 {
    pub const IDENTITY: Rotor3 = Rotor3 {
        s: 1.0,
        b: Bivector3::ZERO,
    };

    pub const fn new(s: f64, b: Bivector3) -> Self {
        Rotor3 { s, b }
    }

    /// Scalar and bivector parts of `m`; grades 1 and 3 are dropped.
    pub fn from_even(m: &Multivector3) -> Self {
        Rotor3::new(m.s, m.bivector_part())
    }

    pub fn to_multivector(&self) -> Multivector3 {
        let mut m = Multivector3::from(self.b);
        m.s = self.s;
        m
    }

    pub fn norm(&self) -> f64 {
        (self.s * self.s + self.b.norm_sq()).sqrt()
    }

    pub fn is_unit(&self) -> bool {
        (self.norm() - 1.0).abs() <= UNIT_TOLERANCE
    }

    pub fn reverse(&self) -> Rotor3 {
        Rotor3::new(self.s, -self.b)
    }

    /// `r` and `-r` rotate identically; pick the one with `s >= 0`.
    pub fn canonical(&self) -> Rotor3 {
        if self.s < 0.0 {
            -*self
        } else {
            *self
        }
    }

    /// Polar decomposition: `angle = atan2(|B|, s)` in `[0, π]`, `plane = B/|B|`.
    pub fn log(&self) -> Result<AnglePlane> {
        rotor_log(self)
    }

    /// `r̃ v r`, where `r = e^{φ/2 Q}` rotates `v` by `φ` in the plane `Q`.
    pub fn sandwich(&self, v: &Multivector3) -> Result<Multivector3> {
        sandwich(self, v)
    }

    /// Matrix of the linear map `v ↦ r̃ v r` restricted to vectors.
    pub fn to_matrix(&self) -> Matrix3<f64> {
        let r = self.to_multivector();
        let rr = self.reverse().to_multivector();
        let mut m = Matrix3::zeros();
        for (j, e) in [Multivector3::E1, Multivector3::E2, Multivector3::E3]
            .iter()
            .enumerate()
        {
            let col = rr.geometric_product(e).geometric_product(&r);
            m[(0, j)] = col.v1;
            m[(1, j)] = col.v2;
            m[(2, j)] = col.v3;
        }
        m
    }
}

impl Mul for Rotor3 {
    type Output = Rotor3;
    fn mul(self, rhs: Rotor3) -> Rotor3 {
        Rotor3::from_even(&(self.to_multivector() * rhs.to_multivector()))
    }
}

impl Neg for Rotor3 {
    type Output = Rotor3;
    fn neg(self) -> Rotor3 {
        Rotor3::new(-self.s, -self.b)
    }
}

impl fmt::Display for Rotor3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_multivector())
    }
}

/// `e^{angle * plane} = cos(angle) + sin(angle) plane` for a unit plane.
pub fn exp_bivector(plane: Bivector3, angle: f64) -> Result<Rotor3> {
    plane.require_unit()?;
    Ok(Rotor3::new(angle.cos(), plane * angle.sin()))
}

/// Angle in `[0, π]` and unit plane of a nonzero even element.
///
/// A bivector part below `DEGENERACY_THRESHOLD * |s|` is treated as zero:
/// the angle is then `0` or `π` by the sign of `s` and the plane is `e12`.
pub fn rotor_log(r: &Rotor3) -> Result<AnglePlane> {
    let bn = r.b.norm();
    if bn == 0.0 && r.s == 0.0 {
        return Err(Error::arg("logarithm of the zero rotor"));
    }
    if bn <= DEGENERACY_THRESHOLD * r.s.abs() {
        let angle = if r.s > 0.0 { 0.0 } else { std::f64::consts::PI };
        return Ok(AnglePlane {
            angle,
            plane: Bivector3::E12,
            degenerate: true,
        });
    }
    Ok(AnglePlane {
        angle: bn.atan2(r.s),
        plane: r.b * (1.0 / bn),
        degenerate: false,
    })
}

/// `r̃ v r` for a unit rotor `r`.
pub fn sandwich(r: &Rotor3, v: &Multivector3) -> Result<Multivector3> {
    if !r.is_unit() {
        return Err(Error::arg(format!(
            "sandwich needs a unit rotor, got norm {}",
            r.norm()
        )));
    }
    let rm = r.to_multivector();
    Ok(r.reverse().to_multivector() * *v * rm)
}

/// Angle and plane of the single rotation equal to rotating by `alpha` in `p`
/// and then by `phi` in `q`: `e^{β/2 R} = e^{α/2 P} e^{φ/2 Q}`, `β ∈ [0, π]`.
pub fn compose_rotation(alpha: f64, p: Bivector3, phi: f64, q: Bivector3) -> Result<AnglePlane> {
    let r = (exp_bivector(p, alpha / 2.0)? * exp_bivector(q, phi / 2.0)?).canonical();
    let half = rotor_log(&r)?;
    Ok(AnglePlane {
        angle: 2.0 * half.angle,
        ..half
    })
}

/// The part of vector `v` lying in the plane `q`: `-(v·Q)Q` with
/// `v·Q = ½(vQ - Qv)`.
pub fn project_parallel(v: &Multivector3, q: &Bivector3) -> Result<Multivector3> {
    if !v.is_vector() {
        return Err(Error::arg(format!(
            "project_parallel needs a vector, got {v}"
        )));
    }
    q.require_unit()?;
    let qm = Multivector3::from(*q);
    let contraction = ((*v * qm - qm * *v) * 0.5).grade(1)?;
    (-(contraction * qm)).grade(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn close(a: &Multivector3, b: &Multivector3, tol: f64) -> bool {
        a.max_abs_diff(b) <= tol
    }

    #[test]
    fn exp_identity_and_definition() {
        assert_eq!(exp_bivector(Bivector3::E12, 0.0).unwrap(), Rotor3::IDENTITY);
        let r = exp_bivector(Bivector3::E13, FRAC_PI_4).unwrap();
        assert_eq!(r.s, FRAC_PI_4.cos());
        assert_eq!(r.b, Bivector3::E13 * FRAC_PI_4.sin());
        assert!(r.is_unit());
    }

    #[test]
    fn exp_squares_to_double_angle() {
        let r = exp_bivector(Bivector3::E12, FRAC_PI_2).unwrap();
        let r2 = exp_bivector(Bivector3::E12, PI).unwrap();
        assert!(close(
            &(r * r).to_multivector(),
            &r2.to_multivector(),
            1e-15
        ));
    }

    #[test]
    fn exp_rejects_non_unit_plane() {
        assert!(exp_bivector(Bivector3::new(1.0, 1.0, 0.0), 0.3).is_err());
        assert!(exp_bivector(Bivector3::ZERO, 0.3).is_err());
    }

    #[test]
    fn log_of_scaled_correlation_rotor() {
        let k = 32f64.sqrt();
        let r = Rotor3::new(k * FRAC_PI_4.cos(), Bivector3::E13 * (-k * FRAC_PI_4.sin()));
        let lp = rotor_log(&r).unwrap();
        assert!((lp.angle - FRAC_PI_4).abs() < 1e-15);
        assert!((lp.plane - (-Bivector3::E13)).norm() < 1e-15);
        assert!(!lp.degenerate);
    }

    #[test]
    fn log_degenerate_cases() {
        let one = rotor_log(&Rotor3::IDENTITY).unwrap();
        assert_eq!(one.angle, 0.0);
        assert_eq!(one.plane, Bivector3::E12);
        assert!(one.degenerate);

        let minus = rotor_log(&-Rotor3::IDENTITY).unwrap();
        assert_eq!(minus.angle, PI);
        assert!(minus.degenerate);

        assert!(rotor_log(&Rotor3::new(0.0, Bivector3::ZERO)).is_err());
    }

    #[test]
    fn log_pure_bivector_is_right_angle() {
        let lp = rotor_log(&Rotor3::new(0.0, Bivector3::E23 * 3.0)).unwrap();
        assert_eq!(lp.angle, FRAC_PI_2);
        assert_eq!(lp.plane, Bivector3::E23);
    }

    #[test]
    fn sandwich_quarter_turn() {
        let r = exp_bivector(Bivector3::E12, FRAC_PI_4).unwrap();
        let out = sandwich(&r, &Multivector3::E1).unwrap();
        assert!(close(&out, &Multivector3::E2, 1e-15));
    }

    #[test]
    fn sandwich_identity_and_normal() {
        let v = Multivector3::vector(0.2, -0.7, 1.3);
        assert_eq!(sandwich(&Rotor3::IDENTITY, &v).unwrap(), v);
        for theta in [0.1, 1.0, 2.5, PI] {
            let r = exp_bivector(Bivector3::E12, theta / 2.0).unwrap();
            assert!(close(
                &sandwich(&r, &Multivector3::E3).unwrap(),
                &Multivector3::E3,
                1e-15
            ));
        }
    }

    #[test]
    fn sandwich_rejects_non_unit() {
        let r = Rotor3::new(2.0, Bivector3::ZERO);
        assert!(sandwich(&r, &Multivector3::E1).is_err());
    }

    #[test]
    fn compose_with_identity() {
        let p = Bivector3::new(0.6, 0.0, 0.8);
        let c = compose_rotation(1.2, p, 0.0, Bivector3::E23).unwrap();
        assert!((c.angle - 1.2).abs() < 1e-14);
        assert!((c.plane - p).norm() < 1e-14);
    }

    #[test]
    fn compose_coplanar_adds() {
        let c = compose_rotation(FRAC_PI_2, Bivector3::E12, FRAC_PI_2, Bivector3::E12).unwrap();
        assert!((c.angle - PI).abs() < 1e-14);
        assert!((c.plane - Bivector3::E12).norm() < 1e-14);
    }

    #[test]
    fn compose_orthogonal_planes() {
        let c = compose_rotation(FRAC_PI_2, Bivector3::E12, FRAC_PI_2, Bivector3::E13).unwrap();
        assert!((c.angle - 2.0 * 0.5f64.acos()).abs() < 1e-14);
        let expect = Bivector3::new(1.0, 1.0, -1.0).normalized().unwrap();
        assert!((c.plane - expect).norm() < 1e-14);
    }

    #[test]
    fn compose_canonicalizes_past_pi() {
        // 3π/4 + 3π/4 in one plane is 3π/2, i.e. π/2 the other way round.
        let c = compose_rotation(
            3.0 * FRAC_PI_4,
            Bivector3::E12,
            3.0 * FRAC_PI_4,
            Bivector3::E12,
        )
        .unwrap();
        assert!((c.angle - FRAC_PI_2).abs() < 1e-14);
        assert!((c.plane + Bivector3::E12).norm() < 1e-14);
    }

    #[test]
    fn projection_examples() {
        let e12 = Bivector3::E12;
        assert!(close(
            &project_parallel(&Multivector3::E1, &e12).unwrap(),
            &Multivector3::E1,
            0.0
        ));
        assert_eq!(
            project_parallel(&Multivector3::E3, &e12).unwrap(),
            Multivector3::ZERO
        );
        let v = Multivector3::E1 + Multivector3::E3;
        assert!(close(
            &project_parallel(&v, &e12).unwrap(),
            &Multivector3::E1,
            0.0
        ));
        assert!(project_parallel(&Multivector3::E12, &e12).is_err());
        assert!(project_parallel(&Multivector3::E1, &Bivector3::ZERO).is_err());
    }

    #[test]
    fn axis_round_trip() {
        let b = Bivector3::new(0.3, -0.4, 0.5);
        assert_eq!(Bivector3::from_axis(b.axis()), b);
        // e23 is the plane of rotations about e1
        assert_eq!(Bivector3::E23.axis(), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn matrix_matches_sandwich() {
        let r = exp_bivector(Bivector3::new(0.48, -0.6, 0.64), 0.9).unwrap();
        let m = r.to_matrix();
        let v = Multivector3::vector(0.3, 1.0, -2.0);
        let mv = m * nalgebra::Vector3::new(0.3, 1.0, -2.0);
        let sv = sandwich(&r, &v).unwrap();
        assert!((mv - nalgebra::Vector3::from(sv.vec3())).norm() < 1e-14);
    }
}
