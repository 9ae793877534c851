//! Cone configuration JSON: exactly one of `rays`, `dual_rays` or
//! `weight_bounds`. Numbers may be JSON numbers or exact strings such as
//! `"7/10"`; JSON numbers are read from their decimal text, so `0.7` is 7/10.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::{PolyhedralCone, Vector, WeightBounds, WeightBoundsJson};
use crate::number::{self, Rational};

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rays: Option<Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_rays: Option<Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_bounds: Option<WeightBoundsJson>,
}

pub fn exact_number(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(n) => number::parse_rational(&n.to_string()),
        Value::String(s) => number::parse_rational(s),
        other => Err(Error::Parse(format!("expected a number, got {other}"))),
    }
}

pub fn exact_vector(v: &[Value]) -> Result<Vector> {
    Vector::new(v.iter().map(exact_number).collect::<Result<_>>()?)
}

impl ConeConfig {
    pub fn from_value(v: Value) -> Result<Self> {
        let cfg: Self = serde_json::from_value(v).map_err(|e| Error::Parse(format!("cone config: {e}")))?;
        let keys = [cfg.rays.is_some(), cfg.dual_rays.is_some(), cfg.weight_bounds.is_some()];
        if keys.iter().filter(|k| **k).count() != 1 {
            return Err(Error::Parse(
                "cone config needs exactly one of `rays`, `dual_rays`, `weight_bounds`".into(),
            ));
        }
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_value(serde_json::from_str(text)?)
    }

    pub fn to_cone(&self, dim: usize) -> Result<PolyhedralCone> {
        let vectors = |rows: &[Vec<Value>]| -> Result<Vec<Vector>> {
            rows.iter().map(|r| exact_vector(r)).collect()
        };
        let cone = if let Some(rays) = &self.rays {
            PolyhedralCone::from_rays(dim, &vectors(rays)?)?
        } else if let Some(dual) = &self.dual_rays {
            PolyhedralCone::from_dual_rays(dim, &vectors(dual)?)?
        } else if let Some(b) = &self.weight_bounds {
            let mins = b.min.iter().map(exact_number).collect::<Result<Vec<_>>>()?;
            let maxs = b.max.iter().map(exact_number).collect::<Result<Vec<_>>>()?;
            let bounds = WeightBounds::new(mins, maxs)?;
            if bounds.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: bounds.dim() });
            }
            bounds.to_cone()?
        } else {
            unreachable!("validated on construction")
        };
        cone.validate_proper()?;
        Ok(cone)
    }
}

/// The cone from an optional config; `R^d_+` when absent.
pub fn cone_or_orthant(cfg: Option<&ConeConfig>, dim: usize) -> Result<PolyhedralCone> {
    match cfg {
        Some(c) => c.to_cone(dim),
        None => Ok(PolyhedralCone::nonnegative_orthant(dim)),
    }
}

/// Exact description of a cone for responses.
#[derive(Clone, Debug, Serialize)]
pub struct ConeJson {
    pub rays: Vec<Vec<String>>,
    pub dual_rays: Vec<Vec<String>>,
    pub pointed: bool,
}

impl From<&PolyhedralCone> for ConeJson {
    fn from(c: &PolyhedralCone) -> Self {
        let exact = |vs: Vec<Vector>| vs.iter().map(Vector::to_exact_strings).collect();
        Self { rays: exact(c.rays()), dual_rays: exact(c.normals()), pointed: c.is_pointed() }
    }
}
