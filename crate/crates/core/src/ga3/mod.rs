//! Arithmetic in the Clifford algebra Cl(3,0).
//!
//! Multivectors are dense 8-component values. Rotations use the convention
//! `v ↦ r̃ v r` with `r = e^{φ/2 Q}`, which turns `v` by `φ` inside the plane
//! `Q` (for `Q = e12`, `e1` turns towards `e2`).

mod multivector;
mod rotor;

pub use multivector::{vector_product, Multivector3};
pub use rotor::{
    compose_rotation, exp_bivector, project_parallel, rotor_log, sandwich, AnglePlane, Bivector3,
    Rotor3, DEGENERACY_THRESHOLD, UNIT_TOLERANCE,
};
