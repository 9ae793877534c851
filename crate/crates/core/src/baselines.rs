//! Reference rankings: TOPSIS and plain weighted sums, plus a synthetic
//! student cohort (grade points and credit points) to compare them on.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::{Alternative, AlternativeSet};
use crate::error::{Error, Result};
use crate::geometry::Vector;
use crate::number::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Benefit,
    Cost,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopsisConfig {
    pub weights: Vec<f64>,
    pub senses: Vec<Sense>,
}

impl TopsisConfig {
    /// Equal weights, all criteria benefits.
    pub fn equal(d: usize) -> Self {
        Self { weights: vec![1.0 / d as f64; d], senses: vec![Sense::Benefit; d] }
    }

    fn validate(&self, d: usize) -> Result<()> {
        if self.weights.len() != d || self.senses.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: self.weights.len() });
        }
        if self.weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidWeights("weights must be finite and nonnegative".into()));
        }
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidWeights(format!("weights must sum to 1, got {sum}")));
        }
        Ok(())
    }
}

/// TOPSIS closeness `d⁻ / (d⁺ + d⁻)` per alternative, in the order of `X`.
/// Columns are vector-normalized; distances are Euclidean. When an
/// alternative coincides with both ideal points the closeness is 0.5.
pub fn topsis_rank(x: &AlternativeSet, cfg: &TopsisConfig) -> Result<Vec<(String, f64)>> {
    let d = x.dim();
    cfg.validate(d)?;
    let rows: Vec<Vec<f64>> = x.points().map(Vector::to_f64).collect();
    let mut norms = vec![0.0; d];
    for r in &rows {
        for (n, v) in norms.iter_mut().zip(r) {
            *n += v * v;
        }
    }
    for (j, n) in norms.iter_mut().enumerate() {
        *n = n.sqrt();
        if *n == 0.0 {
            return Err(Error::DegenerateColumn(j));
        }
    }
    let weighted: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.iter().enumerate().map(|(j, v)| cfg.weights[j] * v / norms[j]).collect())
        .collect();
    let mut ideal = vec![0.0; d];
    let mut anti = vec![0.0; d];
    for j in 0..d {
        let col = weighted.iter().map(|r| r[j]);
        let (lo, hi) = col.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        (ideal[j], anti[j]) = match cfg.senses[j] {
            Sense::Benefit => (hi, lo),
            Sense::Cost => (lo, hi),
        };
    }
    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
    Ok(x.ids()
        .zip(&weighted)
        .map(|(id, r)| {
            let plus = dist(r, &ideal);
            let minus = dist(r, &anti);
            let c = if plus + minus == 0.0 { 0.5 } else { minus / (plus + minus) };
            (id.to_string(), c)
        })
        .collect())
}

/// Exact weighted sums `w·x`, in the order of `X`.
pub fn weighted_sum_rank(x: &AlternativeSet, w: &Vector) -> Result<Vec<(String, Rational)>> {
    w.check_dim(x.dim())?;
    if w.is_zero() {
        return Err(Error::ZeroWeight);
    }
    Ok(x.iter().map(|a| (a.id.clone(), w.dot(&a.value))).collect())
}

/// Synthetic cohort: `n` students with a grade-point average in `[1.0, 4.0]`
/// (one decimal, higher is better) and earned credit points in `[0, 180]`
/// (multiples of 5). Credits correlate loosely with grades.
pub fn synthetic_cohort(n: usize, seed: u64) -> Result<AlternativeSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let items = (0..n)
        .map(|i| {
            let grade: i64 = rng.random_range(10..=40);
            let base = (grade - 10) * 3;
            let credits: i64 = (base + rng.random_range(0..=90)).clamp(0, 180) / 5 * 5;
            Ok(Alternative {
                id: format!("s{:03}", i + 1),
                value: Vector::new(vec![number::rat(grade, 10), number::int(credits)])?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    AlternativeSet::new(items)
}
