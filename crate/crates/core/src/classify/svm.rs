//! Hard-margin linear separation and the plane rotation used to align a cone.

use crate::error::{Error, Result};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Normal of the maximum-margin hyperplane separating `pos` from `neg`,
/// oriented so that `w·p > w·n`, with unit Euclidean norm.
///
/// The normal is the minimum-norm point of `conv(pos) - conv(neg)`, found
/// with Wolfe's minimum-norm-point method using a support oracle on the
/// Minkowski difference. Separation is verified on the data, so a
/// non-separable input is always reported.
pub fn max_margin_normal(pos: &[Vec<f64>], neg: &[Vec<f64>]) -> Result<Vec<f64>> {
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::InvalidParameter("both classes need at least one labeled point".into()));
    }
    let scale = pos.iter().chain(neg).map(|v| norm(v)).fold(1.0, f64::max);
    let diff = |i: usize, j: usize| -> Vec<f64> { pos[i].iter().zip(&neg[j]).map(|(a, b)| a - b).collect() };

    // Corral of difference points with convex weights.
    let mut corral: Vec<(usize, usize)> = vec![(0, 0)];
    let mut weights: Vec<f64> = vec![1.0];
    let mut x = diff(0, 0);
    for _ in 0..10_000 {
        let xx = dot(&x, &x);
        if xx.sqrt() <= 1e-12 * scale {
            return Err(Error::NonSeparable);
        }
        let i = (0..pos.len()).min_by(|&a, &b| dot(&pos[a], &x).total_cmp(&dot(&pos[b], &x))).unwrap();
        let j = (0..neg.len()).max_by(|&a, &b| dot(&neg[a], &x).total_cmp(&dot(&neg[b], &x))).unwrap();
        let s = diff(i, j);
        if xx - dot(&x, &s) <= 1e-12 * scale * scale || corral.contains(&(i, j)) {
            break;
        }
        corral.push((i, j));
        weights.push(0.0);
        loop {
            let pts: Vec<Vec<f64>> = corral.iter().map(|&(a, b)| diff(a, b)).collect();
            let Some(alpha) = affine_min_norm(&pts) else {
                // Degenerate corral: drop the oldest point and retry.
                corral.remove(0);
                weights.remove(0);
                continue;
            };
            if alpha.iter().all(|&a| a > 1e-14) {
                weights = alpha;
                break;
            }
            // Move toward the affine minimizer until a weight hits zero.
            let mut theta = 1.0f64;
            for (w, a) in weights.iter().zip(&alpha) {
                if *a <= 1e-14 && w - a > 0.0 {
                    theta = theta.min(w / (w - a));
                }
            }
            for (w, a) in weights.iter_mut().zip(&alpha) {
                *w = (1.0 - theta) * *w + theta * a;
            }
            let mut k = 0;
            while k < weights.len() {
                if weights[k] <= 1e-14 {
                    weights.remove(k);
                    corral.remove(k);
                } else {
                    k += 1;
                }
            }
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= total);
        }
        x = vec![0.0; x.len()];
        for (&(a, b), w) in corral.iter().zip(&weights) {
            for (xk, dk) in x.iter_mut().zip(diff(a, b)) {
                *xk += w * dk;
            }
        }
    }
    let n = norm(&x);
    if n <= 1e-12 * scale {
        return Err(Error::NonSeparable);
    }
    let w: Vec<f64> = x.iter().map(|v| v / n).collect();
    let lo = pos.iter().map(|v| dot(v, &w)).fold(f64::INFINITY, f64::min);
    let hi = neg.iter().map(|v| dot(v, &w)).fold(f64::NEG_INFINITY, f64::max);
    if lo <= hi {
        return Err(Error::NonSeparable);
    }
    Ok(w)
}

/// Weights `α` (summing to one) of the minimum-norm point of the affine hull.
fn affine_min_norm(pts: &[Vec<f64>]) -> Option<Vec<f64>> {
    let k = pts.len();
    // [G 1; 1ᵀ 0] [α; μ] = [0; 1]
    let mut m = vec![vec![0.0; k + 2]; k + 1];
    for i in 0..k {
        for j in 0..k {
            m[i][j] = dot(&pts[i], &pts[j]);
        }
        m[i][k] = 1.0;
        m[k][i] = 1.0;
    }
    m[k][k + 1] = 1.0;
    let n = k + 1;
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() < 1e-14 {
            return None;
        }
        m.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..=n {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    Some((0..k).map(|i| m[i][n] / m[i][i]).collect())
}

/// Rotation taking the direction of `from` to that of `to` inside their
/// common plane and fixing its orthogonal complement. `None` when the
/// directions already agree.
pub fn plane_rotation(from: &[f64], to: &[f64]) -> Result<Option<Vec<Vec<f64>>>> {
    let d = from.len();
    let u: Vec<f64> = from.iter().map(|x| x / norm(from)).collect();
    let t: Vec<f64> = to.iter().map(|x| x / norm(to)).collect();
    let c = dot(&u, &t).clamp(-1.0, 1.0);
    if c >= 1.0 - 1e-15 {
        return Ok(None);
    }
    let mut v: Vec<f64> = t.iter().zip(&u).map(|(ti, ui)| ti - c * ui).collect();
    let vn = norm(&v);
    if vn <= 1e-12 {
        return Err(Error::AntipodalRotation);
    }
    v.iter_mut().for_each(|x| *x /= vn);
    let s = vn;
    // R = I + s (v uᵀ - u vᵀ) + (c - 1)(u uᵀ + v vᵀ)
    let mut r = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in 0..d {
            let id = if i == j { 1.0 } else { 0.0 };
            r[i][j] = id + s * (v[i] * u[j] - u[i] * v[j]) + (c - 1.0) * (u[i] * u[j] + v[i] * v[j]);
        }
    }
    Ok(Some(r))
}

pub fn apply(r: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    r.iter().map(|row| dot(row, x)).collect()
}
