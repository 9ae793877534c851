//! Alternatives, labels and CSV ingestion.

use std::collections::{BTreeMap, HashSet};
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vector;
use crate::number;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alternative {
    pub id: String,
    pub value: Vector,
}

/// The finite set `X` of `N >= 2` alternatives in `R^d`, with unique ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternativeSet {
    dim: usize,
    items: Vec<Alternative>,
}

impl AlternativeSet {
    pub fn new(items: Vec<Alternative>) -> Result<Self> {
        if items.len() < 2 {
            return Err(Error::TooFewAlternatives(items.len()));
        }
        Self::new_unchecked_size(items)
    }

    /// Like [`AlternativeSet::new`] but allows fewer than two alternatives.
    /// Used for intermediate sets such as the remainder during peeling.
    pub(crate) fn new_unchecked_size(items: Vec<Alternative>) -> Result<Self> {
        let dim = items.first().map(|a| a.value.dim()).unwrap_or(2);
        let mut seen = HashSet::new();
        for a in &items {
            a.value.check_dim(dim)?;
            if !seen.insert(a.id.as_str()) {
                return Err(Error::DuplicateId(a.id.clone()));
            }
        }
        Ok(Self { dim, items })
    }

    /// Alternatives named `x1, x2, ...`.
    pub fn from_vectors(points: Vec<Vector>) -> Result<Self> {
        Self::new(
            points
                .into_iter()
                .enumerate()
                .map(|(i, value)| Alternative { id: format!("x{}", i + 1), value })
                .collect(),
        )
    }

    pub fn from_i64(points: &[&[i64]]) -> Result<Self> {
        Self::from_vectors(points.iter().map(|p| Vector::from_i64(p)).collect::<Result<_>>()?)
    }

    pub fn from_decimal(points: &[&[&str]]) -> Result<Self> {
        Self::from_vectors(points.iter().map(|p| Vector::parse(p)).collect::<Result<_>>()?)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[Alternative] {
        &self.items
    }

    pub fn iter(&self) -> impl Iterator<Item = &Alternative> {
        self.items.iter()
    }

    pub fn points(&self) -> impl Iterator<Item = &Vector> {
        self.items.iter().map(|a| &a.value)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.items.iter().map(|a| a.id.as_str())
    }

    pub fn get(&self, id: &str) -> Option<&Vector> {
        self.items.iter().find(|a| a.id == id).map(|a| &a.value)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.items.iter().position(|a| a.id == id)
    }

    /// `X ∪ additions`; additions keep their own ids.
    pub fn with_added(&self, additions: &[Alternative]) -> Result<Self> {
        let mut items = self.items.clone();
        items.extend(additions.iter().cloned());
        Self::new(items)
    }

    /// `X` without the listed ids; unknown ids are an error.
    pub fn without(&self, ids: &[String]) -> Result<Self> {
        for id in ids {
            if self.get(id).is_none() {
                return Err(Error::UnknownId(id.clone()));
            }
        }
        Self::new(self.items.iter().filter(|a| !ids.contains(&a.id)).cloned().collect())
    }

    pub(crate) fn subset_unchecked(&self, keep: impl Fn(&Alternative) -> bool) -> Result<Self> {
        Self::new_unchecked_size(self.items.iter().filter(|a| keep(a)).cloned().collect())
    }
}

/// Label of an alternative for supervised use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Acceptable,
    Unacceptable,
    Unlabeled,
}

impl Label {
    /// CSV encoding: `1`, `0` or empty.
    pub fn parse_cell(s: &str) -> Result<Self> {
        match s.trim() {
            "1" => Ok(Label::Acceptable),
            "0" => Ok(Label::Unacceptable),
            "" => Ok(Label::Unlabeled),
            other => Err(Error::Parse(format!("label must be 1, 0 or empty, got `{other}`"))),
        }
    }

    pub fn to_cell(self) -> &'static str {
        match self {
            Label::Acceptable => "1",
            Label::Unacceptable => "0",
            Label::Unlabeled => "",
        }
    }
}

/// Alternatives with an acceptable / unacceptable / unlabeled tag each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledSet {
    pub alternatives: AlternativeSet,
    pub labels: BTreeMap<String, Label>,
}

impl LabeledSet {
    pub fn new(alternatives: AlternativeSet, labels: BTreeMap<String, Label>) -> Result<Self> {
        for id in labels.keys() {
            if alternatives.get(id).is_none() {
                return Err(Error::UnknownId(id.clone()));
            }
        }
        let mut full = BTreeMap::new();
        for id in alternatives.ids() {
            full.insert(id.to_string(), labels.get(id).copied().unwrap_or(Label::Unlabeled));
        }
        Ok(Self { alternatives, labels: full })
    }

    pub fn label(&self, id: &str) -> Label {
        self.labels.get(id).copied().unwrap_or(Label::Unlabeled)
    }

    pub fn labeled_count(&self) -> usize {
        self.labels.values().filter(|l| **l != Label::Unlabeled).count()
    }
}

/// Parsed CSV: alternatives plus optional labels.
#[derive(Clone, Debug)]
pub struct ParsedCsv {
    pub alternatives: AlternativeSet,
    pub criteria: Vec<String>,
    pub labels: Option<BTreeMap<String, Label>>,
}

/// Reads `id,c1,...,cd[,label]`. The id column is the first column (or the
/// column named `id`), the label column is the one named `label`.
pub fn read_csv<R: Read>(reader: R) -> Result<ParsedCsv> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    let id_col = headers.iter().position(|h| h.eq_ignore_ascii_case("id")).unwrap_or(0);
    let label_col = headers.iter().position(|h| h.eq_ignore_ascii_case("label"));
    let criteria_cols: Vec<usize> =
        (0..headers.len()).filter(|&c| c != id_col && Some(c) != label_col).collect();
    if criteria_cols.len() < 2 {
        return Err(Error::DimensionTooSmall(criteria_cols.len()));
    }
    let criteria = criteria_cols.iter().map(|&c| headers[c].to_string()).collect();

    let mut items = Vec::new();
    let mut labels = BTreeMap::new();
    let mut seen = HashSet::new();
    for (i, record) in rdr.records().enumerate() {
        // Header is line 1.
        let line = i + 2;
        let record = record.map_err(|e| Error::Parse(format!("row {line}: {e}")))?;
        let id = record.get(id_col).unwrap_or("").to_string();
        if id.is_empty() {
            return Err(Error::Parse(format!("row {line}: empty id")));
        }
        if !seen.insert(id.clone()) {
            return Err(Error::Parse(format!("row {line}: duplicate id `{id}`")));
        }
        let coords = criteria_cols
            .iter()
            .map(|&c| {
                let cell = record.get(c).unwrap_or("");
                number::parse_rational(cell)
                    .map_err(|_| Error::Parse(format!("row {line}: non-numeric cell `{cell}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(lc) = label_col {
            let label = Label::parse_cell(record.get(lc).unwrap_or(""))
                .map_err(|e| Error::Parse(format!("row {line}: {e}")))?;
            labels.insert(id.clone(), label);
        }
        items.push(Alternative { id, value: Vector::new(coords)? });
    }
    let alternatives = AlternativeSet::new(items)?;
    Ok(ParsedCsv { alternatives, criteria, labels: label_col.map(|_| labels) })
}
