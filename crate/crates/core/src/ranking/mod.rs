//! The w-ranking `r_{X,w}` and the cone ranking `r_{X,C}`.
//!
//! `r_{X,w}(z)` counts the alternatives whose weighted sum does not exceed that
//! of `z`; `r_{X,C}(z)` is the minimum of that count over all nonzero weights in
//! the dual cone `C⁺`. The minimum is evaluated exactly: in the plane by a sweep
//! over the wedge `C⁺`, in higher dimensions by enumerating the cells of the
//! arrangement of hyperplanes `{w : w·(x - z) = 0}` inside `C⁺`.

pub(crate) mod cells;
mod oracle;
mod sweep;

use std::sync::atomic::{AtomicBool, Ordering};

use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::data::AlternativeSet;
use crate::error::{Error, Result};
use crate::geometry::{PolyhedralCone, Vector, VectorJson};
use crate::number::{is_zero_vec, primitive, IVec};

pub use oracle::{rank_all_oracle, rank_cone_oracle, DEFAULT_SEED};

/// Exact cone rank of a point with the weights attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankResult {
    pub value: usize,
    /// Minimizing weights in `C⁺`, unit L1 norm, sorted lexicographically.
    pub witness_weights: Vec<Vector>,
    /// Ids counted by the first witness, i.e. `{x : w·x <= w·z}`.
    pub counted_ids: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RankResultJson {
    pub value: usize,
    pub witness_weights: Vec<VectorJson>,
    pub counted_ids: Vec<String>,
}

impl From<&RankResult> for RankResultJson {
    fn from(r: &RankResult) -> Self {
        Self {
            value: r.value,
            witness_weights: r.witness_weights.iter().map(VectorJson::from).collect(),
            counted_ids: r.counted_ids.clone(),
        }
    }
}

/// `r_{X,C}` for every alternative of `X`, in the order of `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ranking {
    pub ids: Vec<String>,
    pub results: Vec<RankResult>,
}

impl Ranking {
    pub fn value(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|i| i == id).map(|p| self.results[p].value)
    }

    pub fn values(&self) -> Vec<usize> {
        self.results.iter().map(|r| r.value).collect()
    }

    pub fn max_value(&self) -> usize {
        self.results.iter().map(|r| r.value).max().unwrap_or(0)
    }

    pub fn get(&self, id: &str) -> Option<&RankResult> {
        self.ids.iter().position(|i| i == id).map(|p| &self.results[p])
    }
}

/// `r_{X,w}(z) = #{x ∈ X : w·x <= w·z}`.
pub fn rank_w(x: &AlternativeSet, w: &Vector, z: &Vector) -> Result<usize> {
    w.check_dim(x.dim())?;
    z.check_dim(x.dim())?;
    if w.is_zero() {
        return Err(Error::ZeroWeight);
    }
    let wz = w.dot(z);
    Ok(x.points().filter(|p| w.dot(p) <= wz).count())
}

/// [`rank_w`] after checking that `w` is a nonzero element of `C⁺`.
pub fn rank_w_in(x: &AlternativeSet, cone: &PolyhedralCone, w: &Vector, z: &Vector) -> Result<usize> {
    w.check_dim(cone.dim())?;
    if !cone.dual().contains(w)? {
        return Err(Error::WeightOutsideDual);
    }
    rank_w(x, w, z)
}

/// Ids of `{x ∈ X : w·x <= w·z}`.
pub fn counted_by(x: &AlternativeSet, w: &Vector, z: &Vector) -> Vec<String> {
    let wz = w.dot(z);
    x.iter().filter(|a| w.dot(&a.value) <= wz).map(|a| a.id.clone()).collect()
}

/// Cones the ranking engine accepts: proper, and pointed unless a halfspace.
pub fn check_rankable(cone: &PolyhedralCone) -> Result<()> {
    cone.validate_proper()?;
    if !cone.is_pointed() && !cone.is_halfspace() {
        return Err(Error::NonPointedCone);
    }
    Ok(())
}

enum Mode {
    /// `C⁺` is a single ray.
    SingleRay(IVec),
    /// `d = 2`, `C⁺` a wedge between two rays.
    Wedge(IVec, IVec),
    /// General case: `C⁺ = {w : w·r >= 0 for rays r of C}`, full-dimensional.
    Cells { constraints: Vec<IVec> },
}

/// Precomputed cone data shared by all queries against one `(X, C)`.
pub struct Ranker<'a> {
    x: &'a AlternativeSet,
    mode: Mode,
}

impl<'a> Ranker<'a> {
    pub fn new(x: &'a AlternativeSet, cone: &PolyhedralCone) -> Result<Self> {
        if cone.dim() != x.dim() {
            return Err(Error::DimensionMismatch { expected: x.dim(), found: cone.dim() });
        }
        check_rankable(cone)?;
        let dual_rays = cone.int_normals();
        let mode = if dual_rays.len() == 1 {
            Mode::SingleRay(dual_rays[0].clone())
        } else if cone.dim() == 2 && dual_rays.len() == 2 {
            Mode::Wedge(dual_rays[0].clone(), dual_rays[1].clone())
        } else {
            Mode::Cells { constraints: cone.int_rays().to_vec() }
        };
        Ok(Self { x, mode })
    }

    /// Differences `x - z` scaled to primitive integer vectors; zero
    /// differences (copies of `z`) are only counted.
    fn differences(&self, z: &Vector) -> (usize, Vec<IVec>) {
        let mut zeros = 0;
        let mut diffs = Vec::with_capacity(self.x.len());
        for p in self.x.points() {
            let d = p.sub(z).direction();
            if is_zero_vec(&d) {
                zeros += 1;
            } else {
                diffs.push(d);
            }
        }
        (zeros, diffs)
    }

    pub fn rank(&self, z: &Vector) -> Result<RankResult> {
        z.check_dim(self.x.dim())?;
        let (zeros, diffs) = self.differences(z);
        let (value, mut witnesses) = match &self.mode {
            Mode::SingleRay(g) => {
                let count = diffs.iter().filter(|d| !crate::number::idot(g, d).is_positive()).count();
                (zeros + count, vec![Vector::from_ivec(g)])
            }
            Mode::Wedge(u, v) => {
                let (count, ws) = sweep::wedge_min(u, v, &diffs);
                (zeros + count, ws)
            }
            Mode::Cells { constraints } => {
                let mut merged: std::collections::BTreeMap<IVec, u64> = Default::default();
                for d in diffs {
                    *merged.entry(primitive(d)).or_default() += 1;
                }
                let problem = cells::CellProblem {
                    dim: self.x.dim(),
                    facets: constraints.clone(),
                    weighted: merged.into_iter().collect(),
                };
                let best = cells::min_cell(&problem)
                    .expect("a full-dimensional dual cone always has an admissible cell");
                let ws = best.witnesses.iter().map(|w| Vector::from_ivec(w)).collect();
                (zeros + best.cost as usize, ws)
            }
        };
        let mut normalized: Vec<Vector> = witnesses.drain(..).map(|w| w.normalized_l1()).collect();
        normalized.sort();
        normalized.dedup();
        let counted_ids = counted_by(self.x, &normalized[0], z);
        debug_assert_eq!(counted_ids.len(), value);
        Ok(RankResult { value, witness_weights: normalized, counted_ids })
    }
}

/// `r_{X,C}(z)` with witnesses.
pub fn rank_cone(x: &AlternativeSet, cone: &PolyhedralCone, z: &Vector) -> Result<RankResult> {
    Ranker::new(x, cone)?.rank(z)
}

/// `r_{X,C}` at every alternative, evaluated in parallel.
pub fn rank_all(x: &AlternativeSet, cone: &PolyhedralCone) -> Result<Ranking> {
    rank_all_cancellable(x, cone, &AtomicBool::new(false))
}

/// [`rank_all`] that stops with [`Error::Cancelled`] once `cancel` is set.
pub fn rank_all_cancellable(
    x: &AlternativeSet,
    cone: &PolyhedralCone,
    cancel: &AtomicBool,
) -> Result<Ranking> {
    let ranker = Ranker::new(x, cone)?;
    let results = x
        .items()
        .par_iter()
        .map(|a| {
            if cancel.load(Ordering::Relaxed) {
                return Err(Error::Cancelled);
            }
            ranker.rank(&a.value)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Ranking { ids: x.ids().map(str::to_string).collect(), results })
}

/// Rank values only, for callers that do not need witnesses.
pub fn rank_values(x: &AlternativeSet, cone: &PolyhedralCone) -> Result<Vec<usize>> {
    Ok(rank_all(x, cone)?.values())
}
