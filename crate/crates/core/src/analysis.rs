//! Pareto maximality, rank reversals, iterative peeling and outliers.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::data::{Alternative, AlternativeSet};
use crate::error::{Error, Result};
use crate::geometry::PolyhedralCone;
use crate::ranking::{rank_all, Ranking};

fn require_pointed(x: &AlternativeSet, cone: &PolyhedralCone) -> Result<()> {
    if cone.dim() != x.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: cone.dim() });
    }
    cone.validate_proper()?;
    if !cone.is_pointed() {
        return Err(Error::NonPointedCone);
    }
    Ok(())
}

/// `dominators[i]` lists `j != i` with `x_i ≤_C x_j`.
fn dominators(x: &AlternativeSet, cone: &PolyhedralCone) -> Result<Vec<Vec<usize>>> {
    let items = x.items();
    let mut out = vec![Vec::new(); items.len()];
    for (i, a) in items.iter().enumerate() {
        for (j, b) in items.iter().enumerate() {
            if i != j && cone.leq(&a.value, &b.value)? {
                out[i].push(j);
            }
        }
    }
    Ok(out)
}

/// Ids of alternatives not dominated by any other alternative.
///
/// With a pointed cone `x ≤_C y ≤_C x` forces `x = y`, so exact duplicates
/// dominate each other and are both non-maximal only if a third point is above them.
pub fn pareto_maximal(x: &AlternativeSet, cone: &PolyhedralCone) -> Result<Vec<String>> {
    require_pointed(x, cone)?;
    let items = x.items();
    let dom = dominators(x, cone)?;
    Ok(items
        .iter()
        .enumerate()
        .filter(|(i, a)| dom[*i].iter().all(|&j| items[j].value == a.value))
        .map(|(_, a)| a.id.clone())
        .collect())
}

/// Number of other alternatives that each alternative dominates.
pub fn dominated_counts(x: &AlternativeSet, cone: &PolyhedralCone) -> Result<BTreeMap<String, usize>> {
    let items = x.items();
    let mut out = BTreeMap::new();
    for (i, a) in items.iter().enumerate() {
        let mut n = 0;
        for (j, b) in items.iter().enumerate() {
            if i != j && cone.leq(&b.value, &a.value)? {
                n += 1;
            }
        }
        out.insert(a.id.clone(), n);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaximalityReport {
    pub maximal_ids: Vec<String>,
    pub max_rank: usize,
    pub max_rank_ids: Vec<String>,
    /// Every max-rank alternative is Pareto maximal.
    pub max_rank_are_maximal: bool,
    /// Maximal alternatives whose rank is below the maximum.
    pub maximal_below_max_rank: Vec<String>,
}

pub fn check_max_rank_maximality(x: &AlternativeSet, cone: &PolyhedralCone) -> Result<MaximalityReport> {
    let maximal_ids = pareto_maximal(x, cone)?;
    let ranking = rank_all(x, cone)?;
    Ok(maximality_from_ranking(&ranking, maximal_ids))
}

fn maximality_from_ranking(ranking: &Ranking, maximal_ids: Vec<String>) -> MaximalityReport {
    let max_rank = ranking.max_value();
    let max_rank_ids: Vec<String> = ranking
        .ids
        .iter()
        .zip(&ranking.results)
        .filter(|(_, r)| r.value == max_rank)
        .map(|(id, _)| id.clone())
        .collect();
    let max_rank_are_maximal = max_rank_ids.iter().all(|id| maximal_ids.contains(id));
    let maximal_below_max_rank = maximal_ids
        .iter()
        .filter(|id| ranking.value(id).is_some_and(|v| v < max_rank))
        .cloned()
        .collect();
    MaximalityReport { maximal_ids, max_rank, max_rank_ids, max_rank_are_maximal, maximal_below_max_rank }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReversalKind {
    Strict,
    Weak,
}

/// `x` was ranked at most `y` before and at least `y` after, with at least one strict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReversalPair {
    pub x: String,
    pub y: String,
    pub kind: ReversalKind,
    pub ranks_before: (usize, usize),
    pub ranks_after: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReversalReport {
    pub ranks_before: BTreeMap<String, usize>,
    pub ranks_after: BTreeMap<String, usize>,
    pub pairs: Vec<ReversalPair>,
    /// For a single addition: whether every rank grew by 0 or 1.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub single_addition_bound: Option<bool>,
}

impl ReversalReport {
    pub fn strict_pairs(&self) -> impl Iterator<Item = &ReversalPair> {
        self.pairs.iter().filter(|p| p.kind == ReversalKind::Strict)
    }
}

/// Ranks of `x` before and after adding `additions`, and all reversal pairs
/// among members of `x` that are incomparable under `≤_C`.
pub fn detect_reversals(x: &AlternativeSet, additions: &[Alternative], cone: &PolyhedralCone) -> Result<ReversalReport> {
    if additions.is_empty() {
        return Err(Error::InvalidParameter("additions must be nonempty".into()));
    }
    let z = x.with_added(additions)?;
    let before = rank_all(x, cone)?;
    let after = rank_all(&z, cone)?;
    let mut report = reversal_between(x, &before, &after, cone)?;
    if additions.len() == 1 {
        report.single_addition_bound = Some(x.ids().all(|id| {
            let (b, a) = (report.ranks_before[id], report.ranks_after[id]);
            a == b || a == b + 1
        }));
    }
    Ok(report)
}

/// Reversal pairs over the ids of `base`, given rankings before and after an edit.
/// Only ids present in both rankings are considered.
pub fn reversal_between(
    base: &AlternativeSet,
    before: &Ranking,
    after: &Ranking,
    cone: &PolyhedralCone,
) -> Result<ReversalReport> {
    let common: Vec<&Alternative> =
        base.iter().filter(|a| before.value(&a.id).is_some() && after.value(&a.id).is_some()).collect();
    let ranks_before: BTreeMap<String, usize> =
        common.iter().map(|a| (a.id.clone(), before.value(&a.id).unwrap())).collect();
    let ranks_after: BTreeMap<String, usize> =
        common.iter().map(|a| (a.id.clone(), after.value(&a.id).unwrap())).collect();
    let mut pairs = Vec::new();
    for a in &common {
        for b in &common {
            if a.id == b.id {
                continue;
            }
            let (bx, by) = (ranks_before[&a.id], ranks_before[&b.id]);
            let (ax, ay) = (ranks_after[&a.id], ranks_after[&b.id]);
            let kind = if bx < by && ay < ax {
                ReversalKind::Strict
            } else if (bx < by && ay == ax) || (bx == by && ay < ax) {
                ReversalKind::Weak
            } else {
                continue;
            };
            if cone.leq(&a.value, &b.value)? || cone.leq(&b.value, &a.value)? {
                continue;
            }
            pairs.push(ReversalPair {
                x: a.id.clone(),
                y: b.id.clone(),
                kind,
                ranks_before: (bx, by),
                ranks_after: (ax, ay),
            });
        }
    }
    Ok(ReversalReport { ranks_before, ranks_after, pairs, single_addition_bound: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Layer {
    /// Ranks within the remainder at this step.
    pub ranks: BTreeMap<String, usize>,
    pub best_rank: usize,
    pub best_ids: Vec<String>,
    /// Best alternatives plus everything they dominate.
    pub removed_ids: Vec<String>,
}

/// Rank, remove the max-rank alternatives with all they dominate, and repeat
/// on the remainder until nothing is left.
pub fn peel_ranking(x: &AlternativeSet, cone: &PolyhedralCone) -> Result<Vec<Layer>> {
    require_pointed(x, cone)?;
    let mut rest = x.clone();
    let mut layers = Vec::new();
    while !rest.is_empty() {
        let ranking = rank_all(&rest, cone)?;
        let best_rank = ranking.max_value();
        let best: Vec<&Alternative> =
            rest.iter().zip(&ranking.results).filter(|(_, r)| r.value == best_rank).map(|(a, _)| a).collect();
        let mut removed = Vec::new();
        for a in rest.iter() {
            let mut hit = false;
            for b in &best {
                if cone.leq(&a.value, &b.value)? {
                    hit = true;
                    break;
                }
            }
            if hit {
                removed.push(a.id.clone());
            }
        }
        layers.push(Layer {
            ranks: ranking.ids.iter().cloned().zip(ranking.values()).collect(),
            best_rank,
            best_ids: best.iter().map(|a| a.id.clone()).collect(),
            removed_ids: removed.clone(),
        });
        rest = rest.subset_unchecked(|a| !removed.contains(&a.id))?;
    }
    Ok(layers)
}

/// Default outlier gap `⌈N/4⌉`.
pub fn default_outlier_gap(n: usize) -> usize {
    n.div_ceil(4).max(1)
}

/// Alternatives with rank at most `max_rank - gap` that no other alternative dominates.
pub fn flag_outliers(x: &AlternativeSet, cone: &PolyhedralCone, gap: usize) -> Result<Vec<String>> {
    if gap == 0 {
        return Err(Error::InvalidParameter("gap must be at least 1".into()));
    }
    let ranking = rank_all(x, cone)?;
    let dom = dominators(x, cone)?;
    let max = ranking.max_value();
    Ok(x.iter()
        .zip(&ranking.results)
        .enumerate()
        .filter(|(i, (_, r))| r.value + gap <= max && dom[*i].is_empty())
        .map(|(_, (a, _))| a.id.clone())
        .collect())
}

/// Two alternatives dominating equally many others but with very different ranks.
#[derive(Clone, Debug, Serialize)]
pub struct EqualDominationWitness {
    pub points: Vec<Vec<i64>>,
    pub x: usize,
    pub y: usize,
    pub dominated_count: usize,
    pub ranks: (usize, usize),
}

/// Random search (orthant cone, small integer grids) for a pair dominating the
/// same number of alternatives whose ranks differ by at least `min_gap`.
/// Returns `None` if nothing is found within `trials` instances.
pub fn search_equal_domination_gap(
    d: usize,
    n: usize,
    min_gap: usize,
    trials: usize,
    seed: u64,
) -> Result<Option<EqualDominationWitness>> {
    let cone = PolyhedralCone::nonnegative_orthant(d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let points: Vec<Vec<i64>> = (0..n).map(|_| (0..d).map(|_| rng.random_range(0..10)).collect()).collect();
        let refs: Vec<&[i64]> = points.iter().map(|p| p.as_slice()).collect();
        let x = AlternativeSet::from_i64(&refs)?;
        let counts = dominated_counts(&x, &cone)?;
        let ranks = rank_all(&x, &cone)?.values();
        let ids: Vec<&str> = x.ids().collect();
        for i in 0..n {
            for j in 0..n {
                if counts[ids[i]] == counts[ids[j]] && ranks[j] >= ranks[i] + min_gap {
                    return Ok(Some(EqualDominationWitness {
                        points,
                        x: i,
                        y: j,
                        dominated_count: counts[ids[i]],
                        ranks: (ranks[i], ranks[j]),
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vector;

    fn reversal_fixture() -> (AlternativeSet, Vec<Alternative>) {
        let x = AlternativeSet::new(vec![
            Alternative { id: "x".into(), value: Vector::from_i64(&[1, 0]).unwrap() },
            Alternative { id: "y".into(), value: Vector::from_i64(&[0, 2]).unwrap() },
            Alternative { id: "p".into(), value: Vector::from_i64(&[-1, 1]).unwrap() },
        ])
        .unwrap();
        let adds = (1..=5)
            .map(|k| Alternative {
                id: format!("z{k}"),
                value: Vector::new(vec![crate::number::rat(9 - k, 10), crate::number::rat(-k, 10)]).unwrap(),
            })
            .collect();
        (x, adds)
    }

    #[test]
    fn maximal_elements() {
        let c = PolyhedralCone::nonnegative_orthant(2);
        let chain = AlternativeSet::from_i64(&[&[0, 0], &[1, 1]]).unwrap();
        assert_eq!(pareto_maximal(&chain, &c).unwrap(), vec!["x2"]);
        let anti = AlternativeSet::from_i64(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(pareto_maximal(&anti, &c).unwrap(), vec!["x1", "x2"]);
        let h = PolyhedralCone::halfspace(&Vector::from_i64(&[1, 1]).unwrap()).unwrap();
        assert!(matches!(pareto_maximal(&chain, &h), Err(Error::NonPointedCone)));
    }

    #[test]
    fn result_one_reversal() {
        let (x, adds) = reversal_fixture();
        let c = PolyhedralCone::nonnegative_orthant(2);
        let r = detect_reversals(&x, &adds, &c).unwrap();
        assert_eq!((r.ranks_before["x"], r.ranks_before["y"]), (1, 2));
        assert_eq!((r.ranks_after["x"], r.ranks_after["y"]), (6, 2));
        let strict: Vec<_> = r.strict_pairs().collect();
        assert!(strict.iter().any(|p| p.x == "x" && p.y == "y" && p.ranks_after == (6, 2)));
        assert!(r.single_addition_bound.is_none());
        // p ≤ y, so (p, y) is never reported.
        assert!(r.pairs.iter().all(|p| !(p.x == "p" && p.y == "y") && !(p.x == "y" && p.y == "p")));
    }

    #[test]
    fn peeling_and_outliers() {
        let (x, adds) = reversal_fixture();
        let c = PolyhedralCone::nonnegative_orthant(2);
        let z = x.with_added(&adds).unwrap();
        let layers = peel_ranking(&z, &c).unwrap();
        assert_eq!(layers.len(), 2);
        assert_eq!(layers[0].best_ids, vec!["x"]);
        assert_eq!(layers[1].best_ids, vec!["y"]);
        assert_eq!(flag_outliers(&z, &c, 3).unwrap(), vec!["y"]);
        let chain = AlternativeSet::from_i64(&[&[0, 0], &[1, 1], &[2, 2]]).unwrap();
        assert_eq!(peel_ranking(&chain, &c).unwrap().len(), 1);
        assert!(flag_outliers(&chain, &c, 1).unwrap().is_empty());
        let anti = AlternativeSet::from_i64(&[&[0, 4], &[1, 1], &[4, 0]]).unwrap();
        let l = peel_ranking(&anti, &c).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l[0].best_ids.len(), 3);
        assert!(flag_outliers(&anti, &c, 1).unwrap().is_empty());
    }

    #[test]
    fn wedge_fixture_maximality() {
        let c = PolyhedralCone::nonnegative_orthant(2);
        let x = AlternativeSet::from_decimal(&[
            &["0", "4"],
            &["1.5", "1.5"],
            &["4", "0"],
            &["1.4", "0.3"],
            &["1.0", "0.8"],
            &["0.3", "1.4"],
        ])
        .unwrap();
        let r = check_max_rank_maximality(&x, &c).unwrap();
        assert_eq!(r.maximal_ids, vec!["x1", "x2", "x3"]);
        assert_eq!(r.max_rank, 4);
        assert_eq!(r.max_rank_ids, vec!["x2"]);
        assert!(r.max_rank_are_maximal);
        assert_eq!(r.maximal_below_max_rank, vec!["x1", "x3"]);
    }
}
