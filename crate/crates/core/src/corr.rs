//! Geometric cross-correlation of two vector fields at the origin and the
//! rotor it encodes.

use crate::error::Result;
use crate::field::{CompensatedSum, VectorField};
use crate::ga3::{rotor_log, vector_product, Bivector3, Multivector3, Rotor3};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationResult {
    /// `Σ reverse(u(x)) v(x) · cell volume`.
    pub raw: Multivector3,
    /// `raw / (‖u‖ ‖v‖)`, zero when either field is zero.
    pub normalized: Multivector3,
    /// Polar angle of `raw`, in `[0, π]`.
    pub angle: f64,
    /// Unit plane of `raw`; `e12` when degenerate.
    pub plane: Bivector3,
    /// The bivector part is negligible against the scalar part, or the
    /// correlation vanished altogether.
    pub degenerate: bool,
}

impl CorrelationResult {
    /// Scalar part of the normalized correlation, the cosine-like alignment
    /// score in `[-1, 1]`.
    pub fn alignment(&self) -> f64 {
        self.normalized.s
    }
}

/// Correlation of `u` against `v` at zero shift.
pub fn correlate_origin(u: &VectorField, v: &VectorField) -> Result<CorrelationResult> {
    u.same_grid(v)?;
    let mut acc = [CompensatedSum::default(); 4];
    for (a, b) in u.values().iter().zip(v.values()) {
        // reverse() is the identity on vectors
        let p = vector_product(*a, *b);
        acc[0].add(p.s);
        acc[1].add(p.b12);
        acc[2].add(p.b13);
        acc[3].add(p.b23);
    }
    let dv = u.cell_volume();
    let mut raw = Multivector3::bivector(
        acc[1].value() * dv,
        acc[2].value() * dv,
        acc[3].value() * dv,
    );
    raw.s = acc[0].value() * dv;

    let norms = (u.l2_norm_sq() * v.l2_norm_sq()).sqrt();
    let normalized = if norms > 0.0 {
        raw.scale(1.0 / norms)
    } else {
        Multivector3::ZERO
    };

    let even = Rotor3::from_even(&raw);
    if even.s == 0.0 && even.b.norm() == 0.0 {
        return Ok(CorrelationResult {
            raw,
            normalized,
            angle: 0.0,
            plane: Bivector3::E12,
            degenerate: true,
        });
    }
    let polar = rotor_log(&even)?;
    Ok(CorrelationResult {
        raw,
        normalized,
        angle: polar.angle,
        plane: polar.plane,
        degenerate: polar.degenerate,
    })
}

/// Correlation of the in-plane parts of `u` and `v` with respect to `q`.
pub fn correlate_projected(
    u: &VectorField,
    v: &VectorField,
    q: &Bivector3,
) -> Result<CorrelationResult> {
    u.same_grid(v)?;
    correlate_origin(&u.project_parallel(q)?, &v.project_parallel(q)?)
}
