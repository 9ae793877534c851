//! Level sets `L_{X,C}(n) = {z : r_{X,C}(z) >= n}` and what is built on them:
//! α-best selection, good/bad/ugly clustering, threshold fitting, label
//! propagation along `≤_C`, and cone alignment with a max-margin normal.

pub mod svm;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::data::{AlternativeSet, Label, LabeledSet};
use crate::error::{Error, Result};
use crate::geometry::{PolyhedralCone, Vector};
use crate::number::{self, Rational};
use crate::ranking::{rank_all, rank_cone};

/// `z ∈ L_{X,C}(n)`.
pub fn level_member(x: &AlternativeSet, cone: &PolyhedralCone, n: usize, z: &Vector) -> Result<bool> {
    if n == 0 {
        z.check_dim(x.dim())?;
        return Ok(true);
    }
    Ok(rank_cone(x, cone, z)?.value >= n)
}

/// Ids of `X ∩ L_{X,C}(n)`.
pub fn level_set(x: &AlternativeSet, cone: &PolyhedralCone, n: usize) -> Result<Vec<String>> {
    let ranks = rank_all(x, cone)?;
    Ok(ids_with_rank_at_least(&ranks.ids, &ranks.values(), n))
}

fn ids_with_rank_at_least(ids: &[String], ranks: &[usize], n: usize) -> Vec<String> {
    ids.iter().zip(ranks).filter(|(_, r)| **r >= n).map(|(id, _)| id.clone()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaBest {
    pub n: usize,
    pub members: Vec<String>,
}

/// Largest `n` with `#(X ∩ L_{X,C}(n)) >= N α / 100`, compared without rounding.
pub fn alpha_best(x: &AlternativeSet, cone: &PolyhedralCone, alpha: &Rational) -> Result<AlphaBest> {
    let zero = Rational::from_integer(0.into());
    let hundred = Rational::from_integer(100.into());
    if *alpha <= zero || *alpha > hundred {
        return Err(Error::InvalidParameter("alpha must lie in (0, 100]".into()));
    }
    let ranking = rank_all(x, cone)?;
    let values = ranking.values();
    let need = Rational::from_integer(x.len().into()) * alpha / hundred;
    let mut best = 0;
    for n in 0..=x.len() {
        let count = values.iter().filter(|r| **r >= n).count();
        if Rational::from_integer(count.into()) >= need {
            best = n;
        }
    }
    Ok(AlphaBest { n: best, members: ids_with_rank_at_least(&ranking.ids, &values, best) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Clusters {
    pub threshold: usize,
    pub good: Vec<String>,
    pub bad: Vec<String>,
    pub ugly: Vec<String>,
    /// Alternatives that met both thresholds and were placed in `ugly`.
    pub overlap: Vec<String>,
}

/// Threshold of the good/bad clustering: the smallest rank strictly above `N/2`.
pub fn gbu_threshold(n: usize) -> usize {
    n / 2 + 1
}

/// Good: rank under `C` at least the threshold. Bad: rank under `-C` at least
/// the threshold. Ugly: the rest, including alternatives that are both.
pub fn cluster_gbu(x: &AlternativeSet, cone: &PolyhedralCone) -> Result<Clusters> {
    if !cone.is_pointed() {
        return Err(Error::NonPointedCone);
    }
    let threshold = gbu_threshold(x.len());
    let up = rank_all(x, cone)?.values();
    let down = rank_all(x, &cone.negated())?.values();
    let mut c = Clusters { threshold, good: vec![], bad: vec![], ugly: vec![], overlap: vec![] };
    for ((id, u), d) in x.ids().zip(up).zip(down) {
        let id = id.to_string();
        match (u >= threshold, d >= threshold) {
            (true, false) => c.good.push(id),
            (false, true) => c.bad.push(id),
            (true, true) => {
                c.overlap.push(id.clone());
                c.ugly.push(id);
            }
            (false, false) => c.ugly.push(id),
        }
    }
    Ok(c)
}

/// Predicts acceptable iff `r_{X,C}(x) >= n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationModel {
    pub cone: PolyhedralCone,
    pub n: usize,
    pub labeled: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    pub ranks: BTreeMap<String, usize>,
}

impl ClassificationModel {
    pub fn errors(&self) -> usize {
        self.false_positives + self.false_negatives
    }

    pub fn error_rate(&self) -> f64 {
        self.errors() as f64 / self.labeled as f64
    }

    pub fn predict_rank(&self, rank: usize) -> Label {
        if rank >= self.n {
            Label::Acceptable
        } else {
            Label::Unacceptable
        }
    }
}

/// Misclassifications of threshold `n` on the labeled alternatives.
pub fn threshold_errors(ranks: &BTreeMap<String, usize>, labels: &LabeledSet, n: usize) -> (usize, usize) {
    let (mut fp, mut fneg) = (0, 0);
    for (id, r) in ranks {
        match (labels.label(id), *r >= n) {
            (Label::Unacceptable, true) => fp += 1,
            (Label::Acceptable, false) => fneg += 1,
            _ => {}
        }
    }
    (fp, fneg)
}

/// Scans `n = 0..=N+1` and keeps the smallest `n` with the fewest
/// false positives plus false negatives.
pub fn fit_threshold(labels: &LabeledSet, cone: &PolyhedralCone) -> Result<ClassificationModel> {
    let labeled = labels.labeled_count();
    if labeled == 0 {
        return Err(Error::EmptyLabels);
    }
    let x = &labels.alternatives;
    let ranking = rank_all(x, cone)?;
    let ranks: BTreeMap<String, usize> = ranking.ids.iter().cloned().zip(ranking.values()).collect();
    let mut best: Option<(usize, usize, usize)> = None;
    for n in 0..=x.len() + 1 {
        let (fp, fneg) = threshold_errors(&ranks, labels, n);
        if best.map_or(true, |(_, a, b)| fp + fneg < a + b) {
            best = Some((n, fp, fneg));
        }
    }
    let (n, false_positives, false_negatives) = best.expect("scan is nonempty");
    Ok(ClassificationModel { cone: cone.clone(), n, labeled, false_positives, false_negatives, ranks })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Propagation {
    pub labels: LabeledSet,
    pub newly_acceptable: Vec<String>,
    pub newly_unacceptable: Vec<String>,
    /// Unlabeled alternatives above an acceptable and below an unacceptable one.
    pub conflicts: Vec<String>,
}

/// Labels unlabeled `x` acceptable when it dominates an acceptable alternative
/// and unacceptable when it is dominated by an unacceptable one. Existing labels
/// are never changed and conflicts stay unlabeled.
pub fn propagate_labels(labels: &LabeledSet, cone: &PolyhedralCone) -> Result<Propagation> {
    let x = &labels.alternatives;
    let mut out = labels.clone();
    let mut p = Propagation {
        labels: labels.clone(),
        newly_acceptable: vec![],
        newly_unacceptable: vec![],
        conflicts: vec![],
    };
    for a in x.iter() {
        if labels.label(&a.id) != Label::Unlabeled {
            continue;
        }
        let mut up = false;
        let mut down = false;
        for b in x.iter() {
            match labels.label(&b.id) {
                Label::Acceptable if !up => up = cone.leq(&b.value, &a.value)?,
                Label::Unacceptable if !down => down = cone.leq(&a.value, &b.value)?,
                _ => {}
            }
        }
        match (up, down) {
            (true, false) => {
                out.labels.insert(a.id.clone(), Label::Acceptable);
                p.newly_acceptable.push(a.id.clone());
            }
            (false, true) => {
                out.labels.insert(a.id.clone(), Label::Unacceptable);
                p.newly_unacceptable.push(a.id.clone());
            }
            (true, true) => p.conflicts.push(a.id.clone()),
            (false, false) => {}
        }
    }
    p.labels = out;
    Ok(p)
}

/// Result of rotating `C⁺` toward the max-margin normal.
#[derive(Clone, Debug)]
pub struct Alignment {
    pub cone: PolyhedralCone,
    pub w_svm: Vec<f64>,
    pub w_int: Vec<f64>,
    /// Rotation angle in radians.
    pub angle: f64,
    /// Rotated dual rays before rationalization.
    pub rotated_dual_rays: Vec<Vec<f64>>,
}

/// Decimal places kept when rotated dual rays are turned back into rationals.
pub const ROTATION_DECIMALS: u32 = 9;

/// Rotates `C⁺` in the plane of `w_int` (mean of the L1-normalized dual rays)
/// and `w_SVM`, carrying `w_int` onto `w_SVM`, and returns the cone whose dual
/// is the rotated `C⁺`.
pub fn align_cone_svm(labels: &LabeledSet, cone: &PolyhedralCone) -> Result<Alignment> {
    cone.validate_proper()?;
    let x = &labels.alternatives;
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for a in x.iter() {
        match labels.label(&a.id) {
            Label::Acceptable => pos.push(a.value.to_f64()),
            Label::Unacceptable => neg.push(a.value.to_f64()),
            Label::Unlabeled => {}
        }
    }
    if pos.is_empty() && neg.is_empty() {
        return Err(Error::EmptyLabels);
    }
    let w_svm = svm::max_margin_normal(&pos, &neg)?;
    let dual = cone.dual();
    let rays: Vec<Vec<f64>> = dual.rays().iter().map(|r| r.normalized_l1().to_f64()).collect();
    let d = cone.dim();
    let mut w_int = vec![0.0; d];
    for r in &rays {
        for (a, b) in w_int.iter_mut().zip(r) {
            *a += b / rays.len() as f64;
        }
    }
    let Some(rot) = svm::plane_rotation(&w_int, &w_svm)? else {
        return Ok(Alignment { cone: cone.clone(), w_svm, w_int, angle: 0.0, rotated_dual_rays: rays });
    };
    let cos = {
        let n1 = w_int.iter().map(|v| v * v).sum::<f64>().sqrt();
        w_int.iter().zip(&w_svm).map(|(a, b)| a * b).sum::<f64>() / n1
    };
    let rotated: Vec<Vec<f64>> = rays.iter().map(|r| svm::apply(&rot, r)).collect();
    let exact = rotated
        .iter()
        .map(|r| {
            let coords = r
                .iter()
                .map(|v| number::from_f64_rounded(*v, ROTATION_DECIMALS))
                .collect::<Result<Vec<_>>>()?;
            Vector::new(coords)
        })
        .collect::<Result<Vec<_>>>()?;
    let aligned = PolyhedralCone::from_dual_rays(d, &exact)?;
    Ok(Alignment { cone: aligned, w_svm, w_int, angle: cos.clamp(-1.0, 1.0).acos(), rotated_dual_rays: rotated })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: i64) -> AlternativeSet {
        let pts: Vec<Vec<i64>> = (0..n).map(|i| vec![i, i]).collect();
        let refs: Vec<&[i64]> = pts.iter().map(|p| p.as_slice()).collect();
        AlternativeSet::from_i64(&refs).unwrap()
    }

    fn labeled(x: AlternativeSet, l: &[(&str, Label)]) -> LabeledSet {
        LabeledSet::new(x, l.iter().map(|(i, v)| (i.to_string(), *v)).collect()).unwrap()
    }

    #[test]
    fn level_sets() {
        let c = PolyhedralCone::nonnegative_orthant(2);
        let x = AlternativeSet::from_i64(&[&[0, 4], &[2, 2], &[4, 0]]).unwrap();
        assert_eq!(level_set(&x, &c, 2).unwrap(), vec!["x2"]);
        assert_eq!(level_set(&x, &c, 1).unwrap().len(), 3);
        assert!(level_member(&x, &c, 0, &Vector::from_i64(&[-9, -9]).unwrap()).unwrap());
    }

    #[test]
    fn alpha_best_examples() {
        let c = PolyhedralCone::nonnegative_orthant(2);
        let r = alpha_best(&chain(2), &c, &number::int(50)).unwrap();
        assert_eq!((r.n, r.members), (2, vec!["x2".to_string()]));
        let anti = AlternativeSet::from_i64(&[&[0, 10], &[2, 4], &[4, 2], &[10, 0]]).unwrap();
        assert_eq!(alpha_best(&anti, &c, &number::int(25)).unwrap().n, 1);
        assert_eq!(alpha_best(&chain(4), &c, &number::int(100)).unwrap().n, 1);
        assert!(alpha_best(&chain(4), &c, &number::int(0)).is_err());
    }

    #[test]
    fn good_bad_ugly() {
        let c = PolyhedralCone::nonnegative_orthant(2);
        let g = cluster_gbu(&chain(4), &c).unwrap();
        assert_eq!(g.good, vec!["x3", "x4"]);
        assert_eq!(g.bad, vec!["x1", "x2"]);
        assert!(g.ugly.is_empty());
        let g2 = cluster_gbu(&chain(2), &c).unwrap();
        assert_eq!((g2.good, g2.bad), (vec!["x2".to_string()], vec!["x1".to_string()]));
        let anti = AlternativeSet::from_i64(&[&[0, 10], &[2, 4], &[4, 2], &[10, 0]]).unwrap();
        let g3 = cluster_gbu(&anti, &c).unwrap();
        assert!(g3.good.is_empty() && g3.bad.is_empty());
        assert_eq!(g3.ugly.len(), 4);
    }

    #[test]
    fn threshold_fitting() {
        let c = PolyhedralCone::nonnegative_orthant(2);
        let l = labeled(
            chain(4),
            &[("x1", Label::Unacceptable), ("x2", Label::Unacceptable), ("x3", Label::Acceptable), ("x4", Label::Acceptable)],
        );
        let m = fit_threshold(&l, &c).unwrap();
        assert_eq!((m.n, m.errors()), (3, 0));
        let all = labeled(chain(3), &[("x1", Label::Acceptable), ("x2", Label::Acceptable), ("x3", Label::Acceptable)]);
        let m = fit_threshold(&all, &c).unwrap();
        assert!(m.n <= 1 && m.errors() == 0);
        // Acceptable point below an unacceptable one.
        let bad = labeled(chain(2), &[("x1", Label::Acceptable), ("x2", Label::Unacceptable)]);
        assert_eq!(fit_threshold(&bad, &c).unwrap().errors(), 1);
        let none = labeled(chain(2), &[]);
        assert!(matches!(fit_threshold(&none, &c), Err(Error::EmptyLabels)));
    }

    #[test]
    fn propagation() {
        let c = PolyhedralCone::nonnegative_orthant(2);
        let x = AlternativeSet::from_i64(&[&[1, 1], &[2, 2], &[5, -5], &[3, 3], &[4, 4]]).unwrap();
        let l = labeled(x, &[("x1", Label::Acceptable), ("x5", Label::Unacceptable)]);
        let p = propagate_labels(&l, &c).unwrap();
        assert!(p.newly_acceptable.is_empty());
        assert_eq!(p.conflicts, vec!["x2", "x4"]);
        assert_eq!(p.labels.label("x3"), Label::Unlabeled);
        let x = AlternativeSet::from_i64(&[&[1, 1], &[2, 2], &[0, 0]]).unwrap();
        let l = labeled(x, &[("x1", Label::Acceptable)]);
        let p = propagate_labels(&l, &c).unwrap();
        assert_eq!(p.newly_acceptable, vec!["x2"]);
        assert_eq!(p.labels.label("x3"), Label::Unlabeled);
        let again = propagate_labels(&p.labels, &c).unwrap();
        assert_eq!(again.labels, p.labels);
    }

    #[test]
    fn svm_rotation_in_the_plane() {
        let c = PolyhedralCone::nonnegative_orthant(2);
        let x = AlternativeSet::from_i64(&[&[0, 0], &[0, 3], &[4, 0], &[4, 3]]).unwrap();
        let l = labeled(
            x,
            &[("x1", Label::Unacceptable), ("x2", Label::Unacceptable), ("x3", Label::Acceptable), ("x4", Label::Acceptable)],
        );
        let a = align_cone_svm(&l, &c).unwrap();
        assert!((a.w_svm[0] - 1.0).abs() < 1e-9);
        assert!((a.angle - std::f64::consts::FRAC_PI_4).abs() < 1e-9);
        // Dual rays (1,0),(0,1) turn by -45°.
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut got = a.rotated_dual_rays.clone();
        got.sort_by(|p, q| p[1].total_cmp(&q[1]));
        assert!((got[0][0] - r).abs() < 1e-9 && (got[0][1] + r).abs() < 1e-9);
        assert!((got[1][0] - r).abs() < 1e-9 && (got[1][1] - r).abs() < 1e-9);
        let w = Vector::from_i64(&[1, 0]).unwrap();
        assert!(a.cone.dual().contains(&w).unwrap());
        let before = fit_threshold(&l, &c).unwrap().errors();
        let after = fit_threshold(&l, &a.cone).unwrap().errors();
        assert!(after <= before);
    }

    #[test]
    fn aligned_already_is_unchanged() {
        let h = PolyhedralCone::halfspace(&Vector::from_i64(&[1, 0]).unwrap()).unwrap();
        let x = AlternativeSet::from_i64(&[&[0, 0], &[2, 0]]).unwrap();
        let l = labeled(x, &[("x1", Label::Unacceptable), ("x2", Label::Acceptable)]);
        let a = align_cone_svm(&l, &h).unwrap();
        assert!(a.cone.same_set(&h));
    }
}
