use itertools::Itertools;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{PolyhedralCone, Vector};
use crate::error::{Error, Result};
use crate::number::{self, Rational};

/// Lower and upper bounds on each criterion weight. Together with the unit
/// simplex they cut out the weight polytope
/// `W = {w >= 0 : sum w = 1, mins <= w <= maxs}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightBounds {
    mins: Vec<Rational>,
    maxs: Vec<Rational>,
}

/// JSON form `{"min": [...], "max": [...]}`; entries are numbers or exact strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightBoundsJson {
    pub min: Vec<serde_json::Value>,
    pub max: Vec<serde_json::Value>,
}

impl WeightBounds {
    pub fn new(mins: Vec<Rational>, maxs: Vec<Rational>) -> Result<Self> {
        if mins.len() != maxs.len() {
            return Err(Error::DimensionMismatch { expected: mins.len(), found: maxs.len() });
        }
        if mins.len() < 2 {
            return Err(Error::DimensionTooSmall(mins.len()));
        }
        let b = Self { mins, maxs };
        b.check_feasible()?;
        Ok(b)
    }

    pub fn parse<S: AsRef<str>>(mins: &[S], maxs: &[S]) -> Result<Self> {
        let p = |v: &[S]| -> Result<Vec<Rational>> {
            v.iter().map(|s| number::parse_rational(s.as_ref())).collect()
        };
        Self::new(p(mins)?, p(maxs)?)
    }

    /// Unconstrained weights: `W` is the whole unit simplex.
    pub fn unconstrained(dim: usize) -> Self {
        Self { mins: vec![Rational::zero(); dim], maxs: vec![Rational::one(); dim] }
    }

    pub fn dim(&self) -> usize {
        self.mins.len()
    }

    pub fn mins(&self) -> &[Rational] {
        &self.mins
    }

    pub fn maxs(&self) -> &[Rational] {
        &self.maxs
    }

    fn check_feasible(&self) -> Result<()> {
        let unit = Rational::zero()..=Rational::one();
        for (i, (lo, hi)) in self.mins.iter().zip(&self.maxs).enumerate() {
            if !unit.contains(lo) || !unit.contains(hi) {
                return Err(Error::InfeasibleBounds(format!("bounds of weight {i} leave [0, 1]")));
            }
            if lo > hi {
                return Err(Error::InfeasibleBounds(format!("min exceeds max for weight {i}")));
            }
        }
        let lo: Rational = self.mins.iter().sum();
        let hi: Rational = self.maxs.iter().sum();
        if lo > Rational::one() || hi < Rational::one() {
            return Err(Error::InfeasibleBounds(format!(
                "need sum(min) <= 1 <= sum(max), got {} and {}",
                number::format_exact(&lo),
                number::format_exact(&hi)
            )));
        }
        Ok(())
    }

    /// Vertices of `W`: all but one coordinate sit at a bound, the remaining
    /// coordinate is fixed by the simplex equation and must respect its bounds.
    pub fn vertices(&self) -> Vec<Vector> {
        let d = self.dim();
        let mut out: Vec<Vec<Rational>> = Vec::new();
        for free in 0..d {
            let others: Vec<usize> = (0..d).filter(|&i| i != free).collect();
            for pattern in (0..others.len()).map(|_| [false, true]).multi_cartesian_product() {
                let mut w = vec![Rational::zero(); d];
                for (&i, &upper) in others.iter().zip(&pattern) {
                    w[i] = if upper { self.maxs[i].clone() } else { self.mins[i].clone() };
                }
                let rest: Rational = w.iter().sum();
                let value = Rational::one() - rest;
                if value >= self.mins[free] && value <= self.maxs[free] {
                    w[free] = value;
                    out.push(w);
                }
            }
        }
        out.sort();
        out.dedup();
        out.into_iter().map(|w| Vector::new(w).expect("dimension >= 2")).collect()
    }

    /// The cone `C` whose dual is generated by `W`.
    pub fn to_cone(&self) -> Result<PolyhedralCone> {
        self.check_feasible()?;
        PolyhedralCone::from_dual_rays(self.dim(), &self.vertices())
    }
}
