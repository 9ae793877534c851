//! Cone distribution rankings for multi-criteria decision making.
//!
//! Alternatives are points in `R^d`; preferences are an ordering cone `C`.
//! The rank of `z` is the smallest number of alternatives that some weight in
//! the dual cone `C⁺` places at or below `z`.

pub mod analysis;
pub mod baselines;
pub mod classify;
pub mod data;
pub mod error;
pub mod geometry;
pub mod number;
pub mod ranking;
pub mod service;
pub mod set_ranking;

pub use data::{read_csv, Alternative, AlternativeSet, Label, LabeledSet};
pub use error::{Error, ErrorKind, Result};
pub use geometry::{PolyhedralCone, Vector, WeightBounds};
pub use ranking::{rank_all, rank_cone, rank_w, RankResult, Ranking};
