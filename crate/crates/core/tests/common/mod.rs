#![allow(dead_code)]

use conerank::{AlternativeSet, PolyhedralCone, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small-integer points keep arrangement cells wide enough for sampling.
pub fn random_set(rng: &mut ChaCha8Rng, n: usize, d: usize, lo: i64, hi: i64) -> AlternativeSet {
    let pts: Vec<Vec<i64>> = (0..n).map(|_| (0..d).map(|_| rng.random_range(lo..=hi)).collect()).collect();
    let refs: Vec<&[i64]> = pts.iter().map(|p| p.as_slice()).collect();
    AlternativeSet::from_i64(&refs).unwrap()
}

pub fn random_point(rng: &mut ChaCha8Rng, d: usize, lo: i64, hi: i64) -> Vector {
    let c: Vec<i64> = (0..d).map(|_| rng.random_range(lo..=hi)).collect();
    Vector::from_i64(&c).unwrap()
}

/// A random pointed, full-dimensional cone with small integer rays.
pub fn random_pointed_cone(rng: &mut ChaCha8Rng, d: usize) -> PolyhedralCone {
    loop {
        let k = rng.random_range(d..=d + 1);
        let rays: Vec<Vector> = (0..k).map(|_| random_point(rng, d, -3, 3)).collect();
        if rays.iter().any(Vector::is_zero) {
            continue;
        }
        let c = PolyhedralCone::from_rays(d, &rays).unwrap();
        if c.is_pointed() && c.is_full_dimensional() && c.validate_proper().is_ok() {
            return c;
        }
    }
}

/// Orthant half of the time, a random pointed cone otherwise.
pub fn random_cone(rng: &mut ChaCha8Rng, d: usize) -> PolyhedralCone {
    if rng.random_bool(0.5) {
        PolyhedralCone::nonnegative_orthant(d)
    } else {
        random_pointed_cone(rng, d)
    }
}

/// A random element of the cone: nonnegative integer combination of its rays.
pub fn random_cone_element(rng: &mut ChaCha8Rng, cone: &PolyhedralCone) -> Vector {
    let rays = cone.rays();
    let mut acc = Vector::from_i64(&vec![0; cone.dim()]).unwrap();
    for r in &rays {
        let s: i64 = rng.random_range(0..=3);
        acc = acc.add(&r.scale(&conerank::number::int(s)));
    }
    acc
}

/// A random element of the interior: positive combination of all rays.
pub fn random_interior_element(rng: &mut ChaCha8Rng, cone: &PolyhedralCone) -> Vector {
    let rays = cone.rays();
    let mut acc = Vector::from_i64(&vec![0; cone.dim()]).unwrap();
    for r in &rays {
        let s: i64 = rng.random_range(1..=3);
        acc = acc.add(&r.scale(&conerank::number::int(s)));
    }
    acc
}
