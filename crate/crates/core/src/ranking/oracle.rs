//! Sampling oracle for `r_{X,C}`: an upper bound on the exact minimum built
//! from the dual rays and random convex combinations of them.
//!
//! Each alternative's sign pattern over the dual rays is computed exactly
//! first; only those with mixed signs are evaluated per sample, in floating
//! point with an exact fallback inside the rounding error bound.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::data::AlternativeSet;
use crate::error::{Error, Result};
use crate::geometry::{PolyhedralCone, Vector};
use crate::number::{self, IVec, Rational};

use super::{check_rankable, rank_w};

pub const DEFAULT_SEED: u64 = 0x5eed_c0de;

struct Prepared {
    /// Dual rays, L1-normalized.
    gens: Vec<Vector>,
}

fn prepare(x: &AlternativeSet, cone: &PolyhedralCone) -> Result<Prepared> {
    if cone.dim() != x.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: cone.dim() });
    }
    check_rankable(cone)?;
    let gens: Vec<Vector> = cone
        .int_normals()
        .iter()
        .map(|g: &IVec| Vector::from_ivec(g).normalized_l1())
        .collect();
    Ok(Prepared { gens })
}

/// Sign pattern of `w·(x - z)` over the open simplex of weights, from the
/// exact values `c_j = g_j·(x - z)` at the dual rays.
enum Term {
    /// `w·(x - z) <= 0` for every weight in the cone.
    Always,
    /// `w·(x - z) > 0` for every weight with all `λ_j > 0`.
    Never,
    /// Mixed signs: decided per sample.
    Mixed { exact: Vec<Rational>, approx: Vec<f64> },
}

fn classify_term(c: Vec<Rational>) -> Term {
    let zero = Rational::from_integer(0.into());
    if c.iter().all(|v| *v <= zero) {
        Term::Always
    } else if c.iter().all(|v| *v >= zero) {
        Term::Never
    } else {
        let approx = c.iter().map(number::to_f64).collect();
        Term::Mixed { exact: c, approx }
    }
}

fn count_sample(lambda: &[f64], fixed: usize, mixed: &[(&[Rational], &[f64])]) -> usize {
    let mut count = fixed;
    for (exact, approx) in mixed {
        let mut s = 0.0;
        let mut mag = 0.0;
        for (l, c) in lambda.iter().zip(approx.iter()) {
            s += l * c;
            mag += (l * c).abs();
        }
        let bound = 1e-12 * (mag + 1.0);
        if s < -bound {
            count += 1;
        } else if s <= bound {
            // Too close to call in floating point: evaluate with λ taken as
            // exact binary fractions.
            let mut acc = Rational::from_integer(0.into());
            for (l, c) in lambda.iter().zip(exact.iter()) {
                acc += number::from_f64(*l).expect("finite") * c;
            }
            if acc <= Rational::from_integer(0.into()) {
                count += 1;
            }
        }
    }
    count
}

/// Convex weights with every component strictly positive.
fn sample_lambda(rng: &mut ChaCha8Rng, m: usize, s: usize, samples: usize) -> Vec<f64> {
    loop {
        let lambda = if m == 2 {
            // Jittered stratification of the segment.
            let t = (s as f64 + rng.random::<f64>()) / samples as f64;
            vec![1.0 - t, t]
        } else {
            let e: Vec<f64> = (0..m).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
            let total: f64 = e.iter().sum();
            e.into_iter().map(|x| x / total).collect()
        };
        if lambda.iter().all(|l| *l > 0.0) {
            return lambda;
        }
    }
}

fn oracle_one(x: &AlternativeSet, p: &Prepared, z: &Vector, samples: usize, seed: u64) -> Result<usize> {
    let mut best = usize::MAX;
    for g in &p.gens {
        best = best.min(rank_w(x, g, z)?);
    }
    let m = p.gens.len();
    if m < 2 {
        return Ok(best);
    }
    let terms: Vec<Term> = x
        .points()
        .map(|q| {
            let diff = q.sub(z);
            classify_term(p.gens.iter().map(|g| g.dot(&diff)).collect())
        })
        .collect();
    let fixed = terms.iter().filter(|t| matches!(t, Term::Always)).count();
    let mixed: Vec<(&[Rational], &[f64])> = terms
        .iter()
        .filter_map(|t| match t {
            Term::Mixed { exact, approx } => Some((exact.as_slice(), approx.as_slice())),
            _ => None,
        })
        .collect();
    if mixed.is_empty() {
        return Ok(best.min(fixed));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in 0..samples {
        let lambda = sample_lambda(&mut rng, m, s, samples);
        best = best.min(count_sample(&lambda, fixed, &mixed));
        if best == fixed {
            break;
        }
    }
    Ok(best)
}

/// Sampled upper bound on `r_{X,C}(z)` using `samples` random weights in `C⁺`
/// besides its extreme rays.
pub fn rank_cone_oracle(
    x: &AlternativeSet,
    cone: &PolyhedralCone,
    z: &Vector,
    samples: usize,
    seed: u64,
) -> Result<usize> {
    z.check_dim(x.dim())?;
    let p = prepare(x, cone)?;
    oracle_one(x, &p, z, samples, seed)
}

/// [`rank_cone_oracle`] at every alternative; alternative `i` uses seed `seed + i`.
pub fn rank_all_oracle(x: &AlternativeSet, cone: &PolyhedralCone, samples: usize, seed: u64) -> Result<Vec<usize>> {
    let p = prepare(x, cone)?;
    x.items()
        .par_iter()
        .enumerate()
        .map(|(i, a)| oracle_one(x, &p, &a.value, samples, seed.wrapping_add(i as u64)))
        .collect()
}
