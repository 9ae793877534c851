//! Exact minimization over a planar wedge `C⁺ = cone{u, v}`.
//!
//! Along `w(t) = (1 - t) u + t v` the sign of `w(t)·δ` changes at most once, so
//! the count is piecewise constant with breakpoints `t = a / (a - b)` where
//! `a = u·δ`, `b = v·δ`. Evaluating at the breakpoints, the endpoints and the
//! midpoints between them covers every piece.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::geometry::Vector;
use crate::number::{idot, IVec, Rational};

pub(super) fn wedge_min(u: &IVec, v: &IVec, diffs: &[IVec]) -> (usize, Vec<Vector>) {
    let mut base = 0usize;
    // Counted for t <= t_i.
    let mut left: Vec<Rational> = Vec::new();
    // Counted for t >= t_i.
    let mut right: Vec<Rational> = Vec::new();
    for d in diffs {
        let a = idot(u, d);
        let b = idot(v, d);
        let a_pos = a.is_positive();
        let b_pos = b.is_positive();
        match (a_pos, b_pos) {
            (false, false) => base += 1,
            (true, true) => {}
            _ => {
                let t = Rational::new(a.clone(), &a - &b);
                if a_pos {
                    right.push(t);
                } else {
                    left.push(t);
                }
            }
        }
    }
    left.sort();
    right.sort();

    let count = |t: &Rational| -> usize {
        // #{l : t <= l} + #{r : r <= t}
        let below = left.partition_point(|l| l < t);
        let upto = right.partition_point(|r| r <= t);
        base + (left.len() - below) + upto
    };

    let mut breaks: Vec<Rational> = left.iter().chain(&right).cloned().collect();
    breaks.push(Rational::zero());
    breaks.push(Rational::one());
    breaks.sort();
    breaks.dedup();
    let two = Rational::from_integer(BigInt::from(2));
    let mut candidates = Vec::with_capacity(2 * breaks.len());
    for (i, t) in breaks.iter().enumerate() {
        candidates.push(t.clone());
        if let Some(next) = breaks.get(i + 1) {
            candidates.push((t + next) / &two);
        }
    }

    let values: Vec<usize> = candidates.iter().map(&count).collect();
    let best = *values.iter().min().expect("at least the endpoints");
    let point = |t: &Rational| -> Vector {
        let one_minus = Rational::one() - t;
        let coords = u
            .iter()
            .zip(v)
            .map(|(a, b)| &one_minus * Rational::from_integer(a.clone()) + t * Rational::from_integer(b.clone()))
            .collect();
        Vector::new(coords).expect("dimension 2")
    };
    let witnesses = candidates
        .iter()
        .zip(&values)
        .filter(|(_, &v)| v == best)
        .map(|(t, _)| point(t))
        .collect();
    (best, witnesses)
}
