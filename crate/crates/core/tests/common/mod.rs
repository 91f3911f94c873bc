#![allow(dead_code)]

use geocorr::ga3::{Bivector3, Multivector3};
use nalgebra::{Rotation3, Unit, Vector3};

/// Blade bitmask for each component slot: 1, e1, e2, e3, e12, e13, e23, e123.
const MASKS: [usize; 8] = [0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111];

fn slot(mask: usize) -> usize {
    MASKS.iter().position(|&m| m == mask).unwrap()
}

/// Sign from reordering the product of two basis blades into canonical
/// order, Euclidean metric.
fn reorder_sign(a: usize, b: usize) -> f64 {
    let mut swaps = 0;
    let mut a = a >> 1;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Geometric product by summing all 64 basis-blade products.
pub fn brute_product(x: &Multivector3, y: &Multivector3) -> Multivector3 {
    let (xa, ya) = (x.to_array(), y.to_array());
    let mut out = [0.0; 8];
    for i in 0..8 {
        for j in 0..8 {
            let (a, b) = (MASKS[i], MASKS[j]);
            out[slot(a ^ b)] += reorder_sign(a, b) * xa[i] * ya[j];
        }
    }
    Multivector3::from_array(out)
}

/// Rotation by `angle` in the oriented plane `plane` (e1 toward e2 for e12)
/// as a matrix, built from the dual axis.
pub fn oracle_rotation(plane: &Bivector3, angle: f64) -> Rotation3<f64> {
    let axis = Vector3::new(plane.b23, -plane.b13, plane.b12);
    Rotation3::from_axis_angle(&Unit::new_normalize(axis), angle)
}

pub fn unit_plane(x: [f64; 3]) -> Option<Bivector3> {
    Bivector3 {
        b12: x[0],
        b13: x[1],
        b23: x[2],
    }
    .normalized()
}
