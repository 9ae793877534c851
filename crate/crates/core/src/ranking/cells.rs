//! Minimum-weight cell of a central hyperplane arrangement inside a polyhedral cone.
//!
//! Given constraint normals `f` (a cell is admissible when `f·y > 0` for all of
//! them) and weighted normals `n` (a cell pays the weight of every `n` with
//! `n·y < 0`), find the admissible full-dimensional cells of minimum cost.
//!
//! Every cell other than the whole space has a facet lying on some hyperplane
//! `ℓ` of the arrangement. The cells adjacent to `ℓ` are exactly the pairs
//! (lower-dimensional cell of the arrangement restricted to `ℓ`, side of `ℓ`),
//! and the cost splits into a part depending only on the restricted cell and a
//! part depending only on the side. Recursing on `ℓ` down to the plane, where
//! an angular sweep handles the circle in `O(n log n)`, visits every cell.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::geometry::linalg::complement_basis;
use crate::number::{idot, is_zero_vec, line_key, primitive, IVec};

#[derive(Clone, Debug, Default)]
pub(crate) struct CellProblem {
    pub dim: usize,
    pub facets: Vec<IVec>,
    pub weighted: Vec<(IVec, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct CellMin {
    pub cost: u64,
    /// One interior point per optimal cell reached, as integer vectors.
    pub witnesses: Vec<IVec>,
}

/// All normals on one line through the origin, with orientation relative to `key`.
#[derive(Default)]
struct LineGroup {
    key: IVec,
    facet_orients: Vec<i8>,
    /// Weight paid on side `+` (`key·y > 0`) and on side `-`.
    cost_pos: u64,
    cost_neg: u64,
}

impl LineGroup {
    fn side_allowed(&self, side: i8) -> bool {
        self.facet_orients.iter().all(|&o| o == side)
    }

    fn side_cost(&self, side: i8) -> u64 {
        if side > 0 {
            self.cost_pos
        } else {
            self.cost_neg
        }
    }
}

fn group_lines(p: &CellProblem) -> Vec<LineGroup> {
    let mut groups: BTreeMap<IVec, LineGroup> = BTreeMap::new();
    for f in &p.facets {
        if is_zero_vec(f) {
            continue;
        }
        let (key, same) = line_key(f);
        let g = groups.entry(key.clone()).or_insert_with(|| LineGroup { key, ..Default::default() });
        g.facet_orients.push(if same { 1 } else { -1 });
    }
    for (n, w) in &p.weighted {
        if is_zero_vec(n) {
            continue;
        }
        let (key, same) = line_key(n);
        let g = groups.entry(key.clone()).or_insert_with(|| LineGroup { key, ..Default::default() });
        // n·y < 0 happens on the side opposite to n's orientation.
        if same {
            g.cost_neg += w;
        } else {
            g.cost_pos += w;
        }
    }
    groups.into_values().collect()
}

fn sign(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn scaled(v: &[BigInt], s: &BigInt) -> IVec {
    v.iter().map(|x| x * s).collect()
}

fn add(a: &[BigInt], b: &[BigInt]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn min_cell(p: &CellProblem) -> Option<CellMin> {
    let groups = group_lines(p);
    if groups.is_empty() {
        // No hyperplanes at all: the whole space is a single cell.
        let mut y = vec![BigInt::zero(); p.dim];
        y[0] = BigInt::one();
        return Some(CellMin { cost: 0, witnesses: vec![y] });
    }
    match p.dim {
        0 => None,
        1 => min_cell_line(&groups),
        2 => min_cell_plane(&groups),
        _ => min_cell_recursive(p, &groups),
    }
}

fn min_cell_line(groups: &[LineGroup]) -> Option<CellMin> {
    // In one dimension every normal is a multiple of the single key (1).
    debug_assert_eq!(groups.len(), 1);
    let g = &groups[0];
    let mut best: Option<CellMin> = None;
    for side in [1i8, -1] {
        if !g.side_allowed(side) {
            continue;
        }
        let y = vec![BigInt::from(side) * &g.key[0]];
        offer(&mut best, g.side_cost(side), y);
    }
    best
}

fn offer(best: &mut Option<CellMin>, cost: u64, witness: IVec) {
    match best {
        Some(b) if cost > b.cost => {}
        Some(b) if cost == b.cost => b.witnesses.push(witness),
        _ => *best = Some(CellMin { cost, witnesses: vec![witness] }),
    }
}

fn half(v: &[BigInt]) -> u8 {
    if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
        0
    } else {
        1
    }
}

fn angle_cmp(a: &[BigInt], b: &[BigInt]) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| {
        let cross = &a[0] * &b[1] - &a[1] * &b[0];
        if cross.is_positive() {
            Ordering::Less
        } else if cross.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// Angular sweep around the circle.
fn min_cell_plane(groups: &[LineGroup]) -> Option<CellMin> {
    if groups.len() == 1 {
        let g = &groups[0];
        let mut best = None;
        for side in [1i8, -1] {
            if g.side_allowed(side) {
                offer(&mut best, g.side_cost(side), scaled(&g.key, &BigInt::from(side)));
            }
        }
        return best;
    }

    // Boundary directions: both rays of every line.
    let mut dirs: Vec<(IVec, usize)> = Vec::with_capacity(2 * groups.len());
    for (gi, g) in groups.iter().enumerate() {
        let p = vec![-g.key[1].clone(), g.key[0].clone()];
        let q = vec![g.key[1].clone(), -g.key[0].clone()];
        dirs.push((p, gi));
        dirs.push((q, gi));
    }
    dirs.sort_by(|a, b| angle_cmp(&a.0, &b.0));

    let m = dirs.len();
    // Sector j lies strictly between dirs[j] and dirs[j + 1]; with at least two
    // distinct lines every sector spans less than a half-turn.
    let sample = |j: usize| primitive(add(&dirs[j].0, &dirs[(j + 1) % m].0));

    let first = sample(0);
    let mut sides: Vec<i8> = groups.iter().map(|g| sign(&idot(&g.key, &first))).collect();
    let mut cost: u64 = 0;
    let mut violations: usize = 0;
    for (g, &s) in groups.iter().zip(&sides) {
        cost += g.side_cost(s);
        violations += (!g.side_allowed(s)) as usize;
    }

    let mut best = None;
    for j in 0..m {
        if j > 0 {
            let gi = dirs[j].1;
            let g = &groups[gi];
            let old = sides[gi];
            cost -= g.side_cost(old);
            violations -= (!g.side_allowed(old)) as usize;
            sides[gi] = -old;
            cost += g.side_cost(-old);
            violations += (!g.side_allowed(-old)) as usize;
        }
        if violations == 0 {
            offer(&mut best, cost, sample(j));
        }
    }
    best
}

fn min_cell_recursive(p: &CellProblem, groups: &[LineGroup]) -> Option<CellMin> {
    let mut best: Option<CellMin> = None;
    for (gi, g) in groups.iter().enumerate() {
        let sides: Vec<i8> = [1i8, -1].into_iter().filter(|&s| g.side_allowed(s)).collect();
        let Some(side_cost) = sides.iter().map(|&s| g.side_cost(s)).min() else {
            continue;
        };
        if let Some(b) = &best {
            if side_cost > b.cost {
                continue;
            }
        }
        let basis = complement_basis(&g.key);
        let restrict = |n: &IVec| -> IVec { primitive(basis.iter().map(|e| idot(e, n)).collect()) };

        // Everything off this line, restricted to the hyperplane key^⊥.
        let mut others: Vec<IVec> = Vec::new();
        let mut sub = CellProblem { dim: p.dim - 1, ..Default::default() };
        for (hi, h) in groups.iter().enumerate() {
            if hi == gi {
                continue;
            }
            let r = restrict(&h.key);
            for &o in &h.facet_orients {
                sub.facets.push(scaled(&r, &BigInt::from(o)));
            }
            if h.cost_neg > 0 {
                sub.weighted.push((r.clone(), h.cost_neg));
            }
            if h.cost_pos > 0 {
                sub.weighted.push((r.iter().map(|x| -x).collect(), h.cost_pos));
            }
            others.push(h.key.clone());
        }

        let Some(inner) = min_cell(&sub) else {
            continue;
        };
        let total = inner.cost + side_cost;
        if let Some(b) = &best {
            if total > b.cost {
                continue;
            }
        }
        for c in &inner.witnesses {
            // Lift the restricted witness back into the current space.
            let mut y_face = vec![BigInt::zero(); p.dim];
            for (cj, e) in c.iter().zip(&basis) {
                if !cj.is_zero() {
                    y_face = add(&y_face, &scaled(e, cj));
                }
            }
            // Push off the hyperplane by one unit of `key`, scaling the face
            // point so no other normal changes sign.
            let mut big = BigInt::one();
            for o in &others {
                let on_face = idot(o, &y_face).abs();
                debug_assert!(!on_face.is_zero());
                let along = idot(o, &g.key).abs();
                let q = along.div_floor(&on_face) + BigInt::one();
                if q > big {
                    big = q;
                }
            }
            for &s in &sides {
                if g.side_cost(s) != side_cost {
                    continue;
                }
                let y = add(&scaled(&y_face, &big), &scaled(&g.key, &BigInt::from(s)));
                offer(&mut best, total, primitive(y));
            }
        }
    }
    if let Some(b) = &mut best {
        b.witnesses.sort();
        b.witnesses.dedup();
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::ivec_from_i64;

    fn cost_at(p: &CellProblem, y: &IVec) -> Option<u64> {
        if p.facets.iter().any(|f| !idot(f, y).is_positive()) {
            return None;
        }
        let mut c = 0;
        for (n, w) in &p.weighted {
            let s = idot(n, y);
            assert!(!s.is_zero(), "witness on a hyperplane");
            if s.is_negative() {
                c += w;
            }
        }
        Some(c)
    }

    /// Brute force over a dense integer grid of directions.
    fn grid_min(p: &CellProblem, radius: i64) -> Option<u64> {
        let mut best: Option<u64> = None;
        let coords = -radius..=radius;
        let mut stack = vec![Vec::new()];
        while let Some(prefix) = stack.pop() {
            if prefix.len() == p.dim {
                let y = ivec_from_i64(&prefix);
                if is_zero_vec(&y) {
                    continue;
                }
                if p.weighted.iter().any(|(n, _)| idot(n, &y).is_zero())
                    || p.facets.iter().any(|f| idot(f, &y).is_zero())
                {
                    continue;
                }
                if let Some(c) = cost_at(p, &y) {
                    best = Some(best.map_or(c, |b| b.min(c)));
                }
                continue;
            }
            for x in coords.clone() {
                let mut next = prefix.clone();
                next.push(x);
                stack.push(next);
            }
        }
        best
    }

    fn problem(dim: usize, facets: &[&[i64]], weighted: &[(&[i64], u64)]) -> CellProblem {
        CellProblem {
            dim,
            facets: facets.iter().map(|f| ivec_from_i64(f)).collect(),
            weighted: weighted.iter().map(|(n, w)| (ivec_from_i64(n), *w)).collect(),
        }
    }

    #[test]
    fn plane_sweep_matches_grid() {
        let p = problem(2, &[&[1, 0], &[0, 1]], &[(&[1, -1], 1), (&[-2, 1], 2), (&[1, 3], 1)]);
        let got = min_cell(&p).unwrap();
        assert_eq!(Some(got.cost), grid_min(&p, 12));
        for w in &got.witnesses {
            assert_eq!(cost_at(&p, w), Some(got.cost));
        }
    }

    #[test]
    fn three_dimensional_matches_grid() {
        let p = problem(
            3,
            &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]],
            &[(&[1, -1, 0], 1), (&[0, 1, -1], 1), (&[-1, 0, 1], 1), (&[-1, -1, 2], 2)],
        );
        let got = min_cell(&p).unwrap();
        assert_eq!(Some(got.cost), grid_min(&p, 6));
        for w in &got.witnesses {
            assert_eq!(cost_at(&p, w), Some(got.cost));
        }
    }

    #[test]
    fn infeasible_constraints_give_none() {
        let p = problem(2, &[&[1, 0], &[-1, 0]], &[(&[0, 1], 1)]);
        assert!(min_cell(&p).is_none());
    }

    #[test]
    fn no_hyperplanes_is_one_cell() {
        let p = problem(3, &[], &[]);
        assert_eq!(min_cell(&p).unwrap().cost, 0);
    }
}
