//! Polyhedral cones, their duals, and the vector preorder they generate.

pub mod linalg;
mod weights;

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::number::{self, idot, is_zero_vec, line_key, primitive, scale_to_integers, IVec, Rational};

pub use weights::{WeightBounds, WeightBoundsJson};

/// A point of `R^d` with exact rational coordinates, `d >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector(Vec<Rational>);

impl Vector {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::DimensionTooSmall(coords.len()));
        }
        Ok(Self(coords))
    }

    pub fn from_i64(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&x| number::int(x)).collect())
    }

    /// Exact binary value of each float.
    pub fn from_f64(coords: &[f64]) -> Result<Self> {
        Self::new(coords.iter().map(|&x| number::from_f64(x)).collect::<Result<_>>()?)
    }

    /// Parses decimal or `num/den` strings exactly.
    pub fn parse<S: AsRef<str>>(coords: &[S]) -> Result<Self> {
        Self::new(coords.iter().map(|s| number::parse_rational(s.as_ref())).collect::<Result<_>>()?)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(number::to_f64).collect()
    }

    pub fn to_exact_strings(&self) -> Vec<String> {
        self.0.iter().map(number::format_exact).collect()
    }

    pub fn dot(&self, other: &Vector) -> Rational {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, s: &Rational) -> Vector {
        Vector(self.0.iter().map(|a| a * s).collect())
    }

    pub fn neg(&self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Rescales to unit L1 norm (unit coordinate sum for nonnegative weights).
    pub fn normalized_l1(&self) -> Vector {
        let norm: Rational = self.0.iter().map(|x| x.abs()).sum();
        if norm.is_zero() {
            return self.clone();
        }
        Vector(self.0.iter().map(|x| x / &norm).collect())
    }

    pub(crate) fn from_ivec(v: &[BigInt]) -> Vector {
        Vector(number::ivec_to_rational(v))
    }

    /// Primitive integer vector pointing in the same direction.
    pub(crate) fn direction(&self) -> IVec {
        scale_to_integers(&self.0)
    }

    pub(crate) fn check_dim(&self, d: usize) -> Result<()> {
        if self.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: self.dim() });
        }
        Ok(())
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(number::format_exact).join(", "))
    }
}

/// Serialized as an array of floats plus a parallel array of exact strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorJson {
    pub coords: Vec<f64>,
    pub exact: Vec<String>,
}

impl From<&Vector> for VectorJson {
    fn from(v: &Vector) -> Self {
        Self { coords: v.to_f64(), exact: v.to_exact_strings() }
    }
}

/// A closed convex polyhedral cone `C` in `R^d`, kept in both representations:
/// generator rays (`C = cone(rays)`) and inequality normals
/// (`C = {z : n·z >= 0 for every normal n}`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyhedralCone {
    dim: usize,
    rays: Vec<IVec>,
    normals: Vec<IVec>,
    pointed: bool,
    full_dimensional: bool,
}

/// Inequality description of `cone(gens)`: returns (pruned generators, normals).
fn describe_generated(dim: usize, gens: Vec<IVec>) -> (Vec<IVec>, Vec<IVec>) {
    let gens: Vec<IVec> = gens
        .into_iter()
        .filter(|g| !is_zero_vec(g))
        .map(primitive)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let k = linalg::rank(&gens);
    let lineal_complement = linalg::null_space(&gens, dim);

    let mut normals: BTreeSet<IVec> = BTreeSet::new();
    for l in &lineal_complement {
        normals.insert(l.clone());
        normals.insert(l.iter().map(|x| -x).collect());
    }
    if k >= 1 {
        for subset in gens.iter().combinations(k - 1) {
            let rows: Vec<IVec> = subset.iter().map(|g| (*g).clone()).collect();
            if linalg::rank(&rows) != k - 1 {
                continue;
            }
            let mut all = rows;
            all.extend(lineal_complement.iter().cloned());
            let ker = linalg::null_space(&all, dim);
            if ker.len() != 1 {
                continue;
            }
            let n = &ker[0];
            let signs: Vec<BigInt> = gens.iter().map(|g| idot(g, n)).collect();
            let nonneg = signs.iter().all(|s| !s.is_negative());
            let nonpos = signs.iter().all(|s| !s.is_positive());
            // Both hold only when every generator lies on the hyperplane,
            // which cannot happen for an independent subset of size k - 1.
            if nonneg && !nonpos {
                normals.insert(primitive(n.clone()));
            } else if nonpos && !nonneg {
                normals.insert(primitive(n.iter().map(|x| -x).collect()));
            }
        }
    }
    let normals: Vec<IVec> = normals.into_iter().collect();

    let pointed = linalg::rank(&normals) == dim;
    let gens = if pointed {
        gens.into_iter()
            .filter(|g| {
                let tight: Vec<IVec> =
                    normals.iter().filter(|n| idot(n, g).is_zero()).cloned().collect();
                linalg::rank(&tight) + 1 >= dim
            })
            .collect()
    } else {
        gens
    };
    (gens, normals)
}

impl PolyhedralCone {
    /// `C = cone(rays)`.
    pub fn from_rays(dim: usize, rays: &[Vector]) -> Result<Self> {
        for r in rays {
            r.check_dim(dim)?;
        }
        Ok(Self::from_int_rays(dim, rays.iter().map(Vector::direction).collect()))
    }

    /// `C = {z : n·z >= 0}` for the given normals; equivalently `C⁺ = cone(normals)`.
    pub fn from_normals(dim: usize, normals: &[Vector]) -> Result<Self> {
        for n in normals {
            n.check_dim(dim)?;
        }
        Ok(Self::from_int_normals(dim, normals.iter().map(Vector::direction).collect()))
    }

    /// The cone whose dual is generated by `dual_rays`.
    pub fn from_dual_rays(dim: usize, dual_rays: &[Vector]) -> Result<Self> {
        Self::from_normals(dim, dual_rays)
    }

    pub(crate) fn from_int_rays(dim: usize, rays: Vec<IVec>) -> Self {
        let (rays, normals) = describe_generated(dim, rays);
        let full_dimensional = linalg::rank(&rays) == dim;
        let pointed = linalg::rank(&normals) == dim;
        Self { dim, rays, normals, pointed, full_dimensional }
    }

    pub(crate) fn from_int_normals(dim: usize, normals: Vec<IVec>) -> Self {
        Self::from_int_rays(dim, normals).dual()
    }

    /// `R^d_+`.
    pub fn nonnegative_orthant(dim: usize) -> Self {
        let rays = (0..dim)
            .map(|i| (0..dim).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();
        Self::from_int_rays(dim, rays)
    }

    /// `H⁺(w) = {z : w·z >= 0}`.
    pub fn halfspace(w: &Vector) -> Result<Self> {
        if w.is_zero() {
            return Err(Error::ZeroWeight);
        }
        Self::from_normals(w.dim(), std::slice::from_ref(w))
    }

    /// `{0}`; representable for duality tests but rejected for ranking.
    pub fn zero(dim: usize) -> Self {
        Self::from_int_rays(dim, Vec::new())
    }

    /// `R^d`; representable for duality tests but rejected for ranking.
    pub fn whole_space(dim: usize) -> Self {
        Self::from_int_normals(dim, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> Vec<Vector> {
        self.rays.iter().map(|r| Vector::from_ivec(r)).collect()
    }

    pub fn normals(&self) -> Vec<Vector> {
        self.normals.iter().map(|n| Vector::from_ivec(n)).collect()
    }

    pub(crate) fn int_rays(&self) -> &[IVec] {
        &self.rays
    }

    pub(crate) fn int_normals(&self) -> &[IVec] {
        &self.normals
    }

    pub fn is_pointed(&self) -> bool {
        self.pointed
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.full_dimensional
    }

    /// `C⁺ = {v : v·z >= 0 for all z in C}`: generators and normals swap roles.
    pub fn dual(&self) -> Self {
        Self {
            dim: self.dim,
            rays: self.normals.clone(),
            normals: self.rays.clone(),
            pointed: self.full_dimensional,
            full_dimensional: self.pointed,
        }
    }

    /// `-C`.
    pub fn negated(&self) -> Self {
        let neg = |v: &IVec| v.iter().map(|x| -x).collect::<IVec>();
        Self {
            dim: self.dim,
            rays: self.rays.iter().map(neg).collect(),
            normals: self.normals.iter().map(neg).collect(),
            pointed: self.pointed,
            full_dimensional: self.full_dimensional,
        }
    }

    /// Image `A C` under a linear map given by its rows.
    pub fn linear_image(&self, rows: &[Vec<Rational>]) -> Result<Self> {
        if rows.len() != self.dim || rows.iter().any(|r| r.len() != self.dim) {
            return Err(Error::DimensionMismatch { expected: self.dim, found: rows.len() });
        }
        let rays = self
            .rays
            .iter()
            .map(|r| {
                let img: Vec<Rational> = rows
                    .iter()
                    .map(|row| {
                        row.iter().zip(r).map(|(a, b)| a * Rational::from_integer(b.clone())).sum()
                    })
                    .collect();
                scale_to_integers(&img)
            })
            .collect();
        Ok(Self::from_int_rays(self.dim, rays))
    }

    /// Rejects `{0}` and `R^d`, for which the cone ranking degenerates.
    pub fn validate_proper(&self) -> Result<()> {
        if self.rays.is_empty() {
            return Err(Error::ImproperCone("cone is {0}".into()));
        }
        if self.normals.is_empty() {
            return Err(Error::ImproperCone("cone is all of R^d".into()));
        }
        Ok(())
    }

    /// True when `C` is a closed halfspace, i.e. `C⁺` is a single ray.
    pub fn is_halfspace(&self) -> bool {
        self.normals.len() == 1
    }

    pub(crate) fn contains_int(&self, z: &[BigInt]) -> bool {
        self.normals.iter().all(|n| !idot(n, z).is_negative())
    }

    pub(crate) fn interior_contains_int(&self, z: &[BigInt]) -> bool {
        self.normals.iter().all(|n| idot(n, z).is_positive())
    }

    /// Closed membership `z ∈ C`.
    pub fn contains(&self, z: &Vector) -> Result<bool> {
        z.check_dim(self.dim)?;
        Ok(self.contains_int(&z.direction()))
    }

    /// `y ≤_C z` iff `z - y ∈ C`.
    pub fn leq(&self, y: &Vector, z: &Vector) -> Result<bool> {
        y.check_dim(self.dim)?;
        self.contains(&z.sub(y))
    }

    /// `y <_C z` iff `z - y ∈ int C`; requires a full-dimensional cone.
    pub fn lt(&self, y: &Vector, z: &Vector) -> Result<bool> {
        y.check_dim(self.dim)?;
        z.check_dim(self.dim)?;
        if !self.full_dimensional {
            return Err(Error::NoInterior);
        }
        Ok(self.interior_contains_int(&z.sub(y).direction()))
    }

    /// True when both cones are the same set.
    pub fn same_set(&self, other: &PolyhedralCone) -> bool {
        self.dim == other.dim
            && self.rays.iter().all(|r| other.contains_int(r))
            && other.rays.iter().all(|r| self.contains_int(r))
    }

    /// True when `self ⊆ other`.
    pub fn is_subset_of(&self, other: &PolyhedralCone) -> bool {
        self.dim == other.dim && self.rays.iter().all(|r| other.contains_int(r))
    }

    /// Canonical line representatives of the rays, for order-free comparisons.
    pub fn ray_set(&self) -> BTreeSet<IVec> {
        self.rays.iter().map(|r| primitive(r.clone())).collect()
    }

    /// Lines spanned by the rays, ignoring orientation.
    pub fn ray_lines(&self) -> BTreeSet<IVec> {
        self.rays.iter().map(|r| line_key(r).0).collect()
    }
}
