//! Rankings of sets of alternatives.
//!
//! `R▽_C(A) = max_{a ∈ A} r_{X,C}(a)` and
//! `𝒞_X(A) = #{x ∈ X : a ≥_C x for some a ∈ A}`, together with the set order
//! `A ⪰_C B` (every `b ∈ B` is dominated by some `a ∈ A`).

use rayon::prelude::*;
use serde::Serialize;

use crate::data::{Alternative, AlternativeSet};
use crate::error::{Error, Result};
use crate::geometry::{PolyhedralCone, Vector, VectorJson};
use crate::ranking::{rank_w, Ranker};

/// A subset `A ⊆ R^d`: alternatives of `X` referenced by id, or external points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternativeSubset {
    items: Vec<Alternative>,
}

impl AlternativeSubset {
    pub fn empty() -> Self {
        Self { items: Vec::new() }
    }

    /// Members of `x` listed by id.
    pub fn from_ids<S: AsRef<str>>(x: &AlternativeSet, ids: &[S]) -> Result<Self> {
        let mut items = Vec::with_capacity(ids.len());
        for id in ids {
            let id = id.as_ref();
            let value = x.get(id).ok_or_else(|| Error::UnknownId(id.to_string()))?;
            if !items.iter().any(|a: &Alternative| a.id == id) {
                items.push(Alternative { id: id.to_string(), value: value.clone() });
            }
        }
        Ok(Self { items })
    }

    /// Arbitrary points, named `a1, a2, ...`.
    pub fn from_points(points: Vec<Vector>) -> Self {
        let items = points
            .into_iter()
            .enumerate()
            .map(|(i, value)| Alternative { id: format!("a{}", i + 1), value })
            .collect();
        Self { items }
    }

    pub fn from_alternatives(items: Vec<Alternative>) -> Self {
        Self { items }
    }

    pub fn items(&self) -> &[Alternative] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        self.items.iter().try_for_each(|a| a.value.check_dim(d))
    }
}

/// Value of `R▽` or `𝒞_X` with its explanation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetRankResult {
    pub value: usize,
    /// Element of `A` realizing the maximum (`R▽` only; `None` for empty `A`).
    pub attaining_element: Option<Alternative>,
    /// `{x ∈ X : ∃a ∈ A, a ≥_C x}` by id (`𝒞_X` only).
    pub dominated_witnesses: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SetRankResultJson {
    pub value: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attaining_id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attaining_element: Option<VectorJson>,
    pub dominated_witnesses: Vec<String>,
}

impl From<&SetRankResult> for SetRankResultJson {
    fn from(r: &SetRankResult) -> Self {
        Self {
            value: r.value,
            attaining_id: r.attaining_element.as_ref().map(|a| a.id.clone()),
            attaining_element: r.attaining_element.as_ref().map(|a| VectorJson::from(&a.value)),
            dominated_witnesses: r.dominated_witnesses.clone(),
        }
    }
}

/// `A ⪰_C B`: each `b ∈ B` has some `a ∈ A` with `b ≤_C a`.
pub fn set_dominates(a: &AlternativeSubset, b: &AlternativeSubset, cone: &PolyhedralCone) -> Result<bool> {
    a.check_dim(cone.dim())?;
    b.check_dim(cone.dim())?;
    for bi in &b.items {
        let mut covered = false;
        for ai in &a.items {
            if cone.leq(&bi.value, &ai.value)? {
                covered = true;
                break;
            }
        }
        if !covered {
            return Ok(false);
        }
    }
    Ok(true)
}

fn argmax(a: &AlternativeSubset, values: Vec<usize>) -> SetRankResult {
    // First maximizer in the order of `A`.
    let mut best: Option<(usize, usize)> = None;
    for (i, v) in values.into_iter().enumerate() {
        if best.map_or(true, |(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    match best {
        None => SetRankResult { value: 0, attaining_element: None, dominated_witnesses: Vec::new() },
        Some((i, v)) => SetRankResult {
            value: v,
            attaining_element: Some(a.items[i].clone()),
            dominated_witnesses: Vec::new(),
        },
    }
}

/// `R▽_C(A)`; `R▽_C(∅) = 0`.
pub fn set_rank(a: &AlternativeSubset, x: &AlternativeSet, cone: &PolyhedralCone) -> Result<SetRankResult> {
    a.check_dim(x.dim())?;
    let ranker = Ranker::new(x, cone)?;
    let values = a
        .items
        .par_iter()
        .map(|ai| ranker.rank(&ai.value).map(|r| r.value))
        .collect::<Result<Vec<_>>>()?;
    Ok(argmax(a, values))
}

/// `R▽_w(A) = max_{a ∈ A} r_{X,w}(a)`.
pub fn set_rank_w(a: &AlternativeSubset, x: &AlternativeSet, w: &Vector) -> Result<SetRankResult> {
    a.check_dim(x.dim())?;
    let values = a.items.iter().map(|ai| rank_w(x, w, &ai.value)).collect::<Result<Vec<_>>>()?;
    Ok(argmax(a, values))
}

/// `𝒞_X(A)` with the dominated alternatives sorted by id.
pub fn indicator_cx(a: &AlternativeSubset, x: &AlternativeSet, cone: &PolyhedralCone) -> Result<SetRankResult> {
    a.check_dim(x.dim())?;
    if cone.dim() != x.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: cone.dim() });
    }
    let mut dominated = Vec::new();
    for xi in x.iter() {
        for ai in &a.items {
            if cone.leq(&xi.value, &ai.value)? {
                dominated.push(xi.id.clone());
                break;
            }
        }
    }
    dominated.sort();
    Ok(SetRankResult { value: dominated.len(), attaining_element: None, dominated_witnesses: dominated })
}

/// How two indicator values compare.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Greater,
    Equal,
    Less,
}

impl Relation {
    fn of(a: usize, b: usize) -> Self {
        match a.cmp(&b) {
            std::cmp::Ordering::Greater => Relation::Greater,
            std::cmp::Ordering::Equal => Relation::Equal,
            std::cmp::Ordering::Less => Relation::Less,
        }
    }
}

/// Whether `𝒞_X` and `R▽` strictly respect a strict set domination `A ≻_C B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefinementReport {
    pub a_dominates_b: bool,
    pub b_dominates_a: bool,
    /// `A ⪰_C B` and not `B ⪰_C A`.
    pub strict: bool,
    pub cx: (usize, usize),
    pub rnabla: (usize, usize),
    pub cx_relation: Relation,
    pub rnabla_relation: Relation,
    /// Strict domination and `𝒞_X(A) > 𝒞_X(B)`.
    pub cx_strict: bool,
    /// Strict domination and `R▽(A) > R▽(B)`.
    pub rnabla_strict: bool,
}

/// Compares `A` and `B` (both subsets of `X`) under `⪰_C`, `𝒞_X` and `R▽`.
pub fn refinement_check(
    a: &AlternativeSubset,
    b: &AlternativeSubset,
    x: &AlternativeSet,
    cone: &PolyhedralCone,
) -> Result<RefinementReport> {
    for item in a.items.iter().chain(&b.items) {
        match x.get(&item.id) {
            Some(v) if *v == item.value => {}
            _ => return Err(Error::UnknownId(item.id.clone())),
        }
    }
    let a_dominates_b = set_dominates(a, b, cone)?;
    let b_dominates_a = set_dominates(b, a, cone)?;
    let strict = a_dominates_b && !b_dominates_a;
    let cx = (indicator_cx(a, x, cone)?.value, indicator_cx(b, x, cone)?.value);
    let rnabla = (set_rank(a, x, cone)?.value, set_rank(b, x, cone)?.value);
    Ok(RefinementReport {
        a_dominates_b,
        b_dominates_a,
        strict,
        cx,
        rnabla,
        cx_relation: Relation::of(cx.0, cx.1),
        rnabla_relation: Relation::of(rnabla.0, rnabla.1),
        cx_strict: strict && cx.0 > cx.1,
        rnabla_strict: strict && rnabla.0 > rnabla.1,
    })
}
