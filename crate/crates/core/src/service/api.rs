//! Request dispatch shared by the CLI and the HTTP server. Both front ends
//! hand the same method, path and body to [`dispatch`] and emit its body
//! verbatim, so their JSON is byte-identical.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use super::config::{cone_or_orthant, exact_vector, ConeConfig, ConeJson};
use super::store::{DatasetRecord, Store};
use crate::analysis::{pareto_maximal, reversal_between};
use crate::baselines::{topsis_rank, weighted_sum_rank, Sense, TopsisConfig};
use crate::classify::{align_cone_svm, alpha_best, cluster_gbu, fit_threshold, propagate_labels};
use crate::data::{read_csv, Alternative, AlternativeSet, Label, LabeledSet};
use crate::error::{Error, Result};
use crate::geometry::{PolyhedralCone, Vector, VectorJson};
use crate::number::{self, Rational};
use crate::ranking::{rank_all_cancellable, rank_all_oracle, RankResultJson, Ranker, Ranking, DEFAULT_SEED};
use crate::set_ranking::{indicator_cx, refinement_check, set_rank, AlternativeSubset, SetRankResultJson};

/// Above these sizes exact ranking is slow; responses carry a warning.
const WARN_N: usize = 200;
const WARN_D: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApiResponse {
    pub status: u16,
    pub body: String,
    /// CLI exit status: 0 on success, otherwise the error's exit code.
    pub exit_code: i32,
}

impl ApiResponse {
    fn ok(status: u16, v: &Value) -> Self {
        Self { status, body: to_body(v), exit_code: 0 }
    }

    fn error(e: &Error) -> Self {
        Self::error_with(e.http_status(), e.code(), &e.to_string(), e.exit_code())
    }

    fn error_with(status: u16, code: &str, message: &str, exit_code: i32) -> Self {
        let v = json!({ "error": { "code": code, "message": message } });
        Self { status, body: to_body(&v), exit_code }
    }
}

fn to_body(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Routes one request. `target` is the path with an optional query string.
pub fn dispatch(store: &Store, method: &str, target: &str, body: &[u8], cancel: &AtomicBool) -> ApiResponse {
    let (path, query) = target.split_once('?').unwrap_or((target, ""));
    let query = parse_query(query);
    let path = path.trim_end_matches('/');
    let result = match (method, path) {
        ("GET", "/health") => Ok((200, json!({ "status": "ok", "version": env!("CARGO_PKG_VERSION") }))),
        ("POST", "/datasets") => ingest(store, body),
        ("GET", p) if p.starts_with("/datasets/") => get_dataset(store, &p["/datasets/".len()..], &query),
        ("POST", "/rank") => with_body(body, |b| rank(store, b, cancel)),
        ("POST", "/setrank") => with_body(body, |b| setrank(store, b)),
        ("POST", "/whatif") => with_body(body, |b| whatif(store, b, &query, cancel)),
        ("POST", "/classify") => with_body(body, |b| classify(store, b)),
        ("POST", "/align") => with_body(body, |b| align(store, b)),
        ("POST", "/compare") => with_body(body, |b| compare(store, b)),
        _ => {
            return ApiResponse::error_with(404, "unknown_route", &format!("no route for {method} {path}"), 2);
        }
    };
    match result {
        Ok((status, v)) => ApiResponse::ok(status, &v),
        Err(e) => ApiResponse::error(&e),
    }
}

fn parse_query(q: &str) -> BTreeMap<String, String> {
    q.split('&')
        .filter(|kv| !kv.is_empty())
        .map(|kv| {
            let (k, v) = kv.split_once('=').unwrap_or((kv, ""));
            (k.to_string(), v.to_string())
        })
        .collect()
}

fn query_flag(query: &BTreeMap<String, String>, key: &str) -> Result<bool> {
    match query.get(key).map(String::as_str) {
        None | Some("false") | Some("0") => Ok(false),
        Some("") | Some("true") | Some("1") => Ok(true),
        Some(other) => Err(Error::InvalidParameter(format!("`{key}` must be true or false, got `{other}`"))),
    }
}

type Handled = Result<(u16, Value)>;

fn with_body(body: &[u8], f: impl FnOnce(Map<String, Value>) -> Handled) -> Handled {
    let text = std::str::from_utf8(body).map_err(|_| Error::Parse("request body is not UTF-8".into()))?;
    let text = if text.trim().is_empty() { "{}" } else { text };
    match serde_json::from_str::<Value>(text).map_err(|e| Error::Parse(format!("request body: {e}")))? {
        Value::Object(m) => f(m),
        _ => Err(Error::Parse("request body must be a JSON object".into())),
    }
}

fn ingest(store: &Store, body: &[u8]) -> Handled {
    let parsed = read_csv(body)?;
    let (record, created) = store.ingest(&parsed)?;
    Ok((if created { 201 } else { 200 }, serde_json::to_value(&record)?))
}

fn get_dataset(store: &Store, id: &str, query: &BTreeMap<String, String>) -> Handled {
    let revision = match query.get("revision") {
        Some(r) => Some(r.parse().map_err(|_| Error::InvalidParameter(format!("bad revision `{r}`")))?),
        None => None,
    };
    Ok((200, serde_json::to_value(store.get(id, revision)?)?))
}

/// Where the alternatives come from: a stored dataset or an inline CSV.
pub struct Source {
    pub record: Option<DatasetRecord>,
    pub labeled: LabeledSet,
    pub has_labels: bool,
}

impl Source {
    pub fn x(&self) -> &AlternativeSet {
        &self.labeled.alternatives
    }

    fn describe(&self) -> Value {
        match &self.record {
            Some(r) => json!({ "dataset": r.id, "revision": r.revision }),
            None => json!({ "inline": true }),
        }
    }
}

/// Removes the source fields from a request body and loads the alternatives.
pub fn load_source(store: &Store, body: &mut Map<String, Value>) -> Result<Source> {
    let dataset = body.remove("dataset");
    let revision = body.remove("revision");
    let csv = body.remove("csv");
    match (dataset, csv) {
        (Some(Value::String(id)), None) => {
            let revision = match revision {
                None | Some(Value::Null) => None,
                Some(v) => Some(v.as_u64().ok_or_else(|| Error::Parse("`revision` must be an integer".into()))?),
            };
            let record = store.current(&id, revision)?;
            let labeled = record.labeled_set()?;
            let has_labels = record.labels.is_some();
            Ok(Source { record: Some(record), labeled, has_labels })
        }
        (None, Some(Value::String(text))) => {
            if revision.is_some() {
                return Err(Error::Parse("`revision` applies to stored datasets only".into()));
            }
            let parsed = read_csv(text.as_bytes())?;
            let has_labels = parsed.labels.is_some();
            let labeled = LabeledSet::new(parsed.alternatives, parsed.labels.unwrap_or_default())?;
            Ok(Source { record: None, labeled, has_labels })
        }
        (None, None) => Err(Error::Parse("request needs `dataset` or `csv`".into())),
        (Some(_), Some(_)) => Err(Error::Parse("give either `dataset` or `csv`, not both".into())),
        _ => Err(Error::Parse("`dataset` and `csv` must be strings".into())),
    }
}

fn parse_rest<T: DeserializeOwned>(body: Map<String, Value>) -> Result<T> {
    serde_json::from_value(Value::Object(body)).map_err(|e| Error::Parse(format!("request body: {e}")))
}

fn parse_cone(cfg: Option<Value>, dim: usize) -> Result<PolyhedralCone> {
    let cfg = cfg.map(ConeConfig::from_value).transpose()?;
    cone_or_orthant(cfg.as_ref(), dim)
}

fn warnings(x: &AlternativeSet) -> Vec<String> {
    let mut w = Vec::new();
    if x.len() > WARN_N {
        w.push(format!("N = {} exceeds {WARN_N}; exact ranking may be slow", x.len()));
    }
    if x.dim() > WARN_D {
        w.push(format!("d = {} exceeds {WARN_D}; exact ranking may be slow", x.dim()));
    }
    w
}

fn insert_warnings(out: &mut Value, x: &AlternativeSet) {
    let w = warnings(x);
    if !w.is_empty() {
        out["warnings"] = json!(w);
    }
}

fn ranks_map(r: &Ranking) -> BTreeMap<String, usize> {
    r.ids.iter().cloned().zip(r.values()).collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointJson {
    pub id: String,
    pub coords: Vec<Value>,
}

fn alternatives_of(points: &[PointJson], dim: usize) -> Result<Vec<Alternative>> {
    points
        .iter()
        .map(|p| {
            let value = exact_vector(&p.coords)?;
            value.check_dim(dim)?;
            Ok(Alternative { id: p.id.clone(), value })
        })
        .collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RankBody {
    cone: Option<Value>,
    #[serde(default)]
    points: Vec<PointJson>,
    oracle_samples: Option<usize>,
    seed: Option<u64>,
}

fn rank(store: &Store, mut body: Map<String, Value>, cancel: &AtomicBool) -> Handled {
    let src = load_source(store, &mut body)?;
    let req: RankBody = parse_rest(body)?;
    let x = src.x();
    let cone = parse_cone(req.cone, x.dim())?;
    let ranking = rank_all_cancellable(x, &cone, cancel)?;
    let results: BTreeMap<&str, RankResultJson> =
        ranking.ids.iter().map(String::as_str).zip(ranking.results.iter().map(RankResultJson::from)).collect();
    let mut out = json!({
        "source": src.describe(),
        "cone": ConeJson::from(&cone),
        "ranks": ranks_map(&ranking),
        "max_rank": ranking.max_value(),
        "results": results,
    });
    // Maximality is defined for pointed cones; halfspaces are rankable but not pointed.
    if cone.is_pointed() {
        out["maximal"] = json!(pareto_maximal(x, &cone)?);
    }
    if !req.points.is_empty() {
        let ranker = Ranker::new(x, &cone)?;
        let mut queries = Map::new();
        for a in alternatives_of(&req.points, x.dim())? {
            if cancel.load(Ordering::Relaxed) {
                return Err(Error::Cancelled);
            }
            let r = ranker.rank(&a.value)?;
            queries.insert(
                a.id.clone(),
                json!({ "coords": VectorJson::from(&a.value), "rank": RankResultJson::from(&r) }),
            );
        }
        out["queries"] = Value::Object(queries);
    }
    if let Some(samples) = req.oracle_samples {
        if samples == 0 {
            return Err(Error::InvalidParameter("oracle_samples must be positive".into()));
        }
        let seed = req.seed.unwrap_or(DEFAULT_SEED);
        let sampled = rank_all_oracle(x, &cone, samples, seed)?;
        let sampled: BTreeMap<String, usize> = x.ids().map(str::to_string).zip(sampled).collect();
        let mismatches: Vec<&String> =
            sampled.iter().filter(|(id, v)| ranking.value(id) != Some(**v)).map(|(id, _)| id).collect();
        out["oracle"] = json!({ "samples": samples, "seed": seed, "ranks": sampled, "mismatches": mismatches });
    }
    insert_warnings(&mut out, x);
    Ok((200, out))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SetRankBody {
    cone: Option<Value>,
    sets: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    compare: Vec<(String, String)>,
}

fn setrank(store: &Store, mut body: Map<String, Value>) -> Handled {
    let src = load_source(store, &mut body)?;
    let req: SetRankBody = parse_rest(body)?;
    let x = src.x();
    let cone = parse_cone(req.cone, x.dim())?;
    let mut subsets = BTreeMap::new();
    let mut sets = Map::new();
    for (name, ids) in &req.sets {
        let s = AlternativeSubset::from_ids(x, ids)?;
        let rnabla = set_rank(&s, x, &cone)?;
        let cx = indicator_cx(&s, x, &cone)?;
        sets.insert(
            name.clone(),
            json!({
                "ids": s.items().iter().map(|a| a.id.as_str()).collect::<Vec<_>>(),
                "rnabla": SetRankResultJson::from(&rnabla),
                "cx": SetRankResultJson::from(&cx),
            }),
        );
        subsets.insert(name.clone(), s);
    }
    let mut comparisons = Vec::new();
    for (a, b) in &req.compare {
        let sa = subsets.get(a).ok_or_else(|| Error::InvalidParameter(format!("unknown set `{a}`")))?;
        let sb = subsets.get(b).ok_or_else(|| Error::InvalidParameter(format!("unknown set `{b}`")))?;
        let report = refinement_check(sa, sb, x, &cone)?;
        comparisons.push(json!({ "a": a, "b": b, "report": report }));
    }
    let mut out = json!({
        "source": src.describe(),
        "cone": ConeJson::from(&cone),
        "sets": sets,
    });
    if !comparisons.is_empty() {
        out["comparisons"] = json!(comparisons);
    }
    insert_warnings(&mut out, x);
    Ok((200, out))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WhatIfBody {
    cone: Option<Value>,
    #[serde(default)]
    add: Vec<PointJson>,
    #[serde(default)]
    remove: Vec<String>,
}

fn whatif(store: &Store, mut body: Map<String, Value>, query: &BTreeMap<String, String>, cancel: &AtomicBool) -> Handled {
    let commit = query_flag(query, "commit")?;
    let src = load_source(store, &mut body)?;
    let req: WhatIfBody = parse_rest(body)?;
    if req.add.is_empty() && req.remove.is_empty() {
        return Err(Error::InvalidParameter("what-if needs `add` or `remove`".into()));
    }
    let x = src.x();
    let cone = parse_cone(req.cone, x.dim())?;
    let additions = alternatives_of(&req.add, x.dim())?;
    let edited = x.without(&req.remove)?.with_added(&additions)?;
    let before = rank_all_cancellable(x, &cone, cancel)?;
    let after = rank_all_cancellable(&edited, &cone, cancel)?;
    let mut report = reversal_between(x, &before, &after, &cone)?;
    if additions.len() == 1 && req.remove.is_empty() {
        report.single_addition_bound = Some(
            report.ranks_before.iter().all(|(id, b)| report.ranks_after[id] == *b || report.ranks_after[id] == b + 1),
        );
    }
    let added: BTreeMap<String, usize> =
        additions.iter().map(|a| (a.id.clone(), after.value(&a.id).unwrap_or(0))).collect();
    let mut out = json!({
        "source": src.describe(),
        "cone": ConeJson::from(&cone),
        "added": added,
        "removed": req.remove,
        "report": report,
    });
    if commit {
        let record = src
            .record
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("commit requires a stored dataset".into()))?;
        let next = store.commit(&record.id, record.revision, &edited)?;
        out["committed"] = json!({ "dataset": next.id, "revision": next.revision });
    }
    insert_warnings(&mut out, &edited);
    Ok((200, out))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassifyBody {
    cone: Option<Value>,
    alpha: Option<Value>,
    n: Option<usize>,
}

fn members_at_least(ranks: &BTreeMap<String, usize>, ids: &AlternativeSet, n: usize) -> Vec<String> {
    ids.ids().filter(|id| ranks[*id] >= n).map(str::to_string).collect()
}

fn classify(store: &Store, mut body: Map<String, Value>) -> Handled {
    let src = load_source(store, &mut body)?;
    let req: ClassifyBody = parse_rest(body)?;
    let x = src.x();
    let cone = parse_cone(req.cone, x.dim())?;
    let ranking = rank_all_cancellable(x, &cone, &AtomicBool::new(false))?;
    let ranks = ranks_map(&ranking);
    let mut out = json!({
        "source": src.describe(),
        "cone": ConeJson::from(&cone),
        "ranks": ranks,
        "clusters": cluster_gbu(x, &cone)?,
    });
    if let Some(alpha) = &req.alpha {
        let a: Rational = super::config::exact_number(alpha)?;
        let best = alpha_best(x, &cone, &a)?;
        out["alpha_best"] = json!({ "alpha": number::format_exact(&a), "n": best.n, "members": best.members });
    }
    if let Some(n) = req.n {
        out["level_set"] = json!({ "n": n, "members": members_at_least(&ranks, x, n) });
    }
    if src.has_labels && src.labeled.labeled_count() > 0 {
        let model = fit_threshold(&src.labeled, &cone)?;
        out["model"] = json!({
            "n": model.n,
            "labeled": model.labeled,
            "false_positives": model.false_positives,
            "false_negatives": model.false_negatives,
            "error_rate": model.error_rate(),
        });
        let p = propagate_labels(&src.labeled, &cone)?;
        let labels: BTreeMap<&String, Label> = p.labels.labels.iter().map(|(k, v)| (k, *v)).collect();
        out["propagation"] = json!({
            "labels": labels,
            "newly_acceptable": p.newly_acceptable,
            "newly_unacceptable": p.newly_unacceptable,
            "conflicts": p.conflicts,
        });
    }
    insert_warnings(&mut out, x);
    Ok((200, out))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AlignBody {
    cone: Option<Value>,
}

fn align(store: &Store, mut body: Map<String, Value>) -> Handled {
    let src = load_source(store, &mut body)?;
    let req: AlignBody = parse_rest(body)?;
    let x = src.x();
    let cone = parse_cone(req.cone, x.dim())?;
    if src.labeled.labeled_count() == 0 {
        return Err(Error::EmptyLabels);
    }
    let a = align_cone_svm(&src.labeled, &cone)?;
    let before = fit_threshold(&src.labeled, &cone)?;
    let after = fit_threshold(&src.labeled, &a.cone)?;
    let fit = |m: &crate::classify::ClassificationModel| {
        json!({ "n": m.n, "errors": m.errors(), "error_rate": m.error_rate() })
    };
    let mut out = json!({
        "source": src.describe(),
        "cone": ConeJson::from(&cone),
        "aligned_cone": ConeJson::from(&a.cone),
        "w_svm": a.w_svm,
        "w_int": a.w_int,
        "angle": a.angle,
        "rotated_dual_rays": a.rotated_dual_rays,
        "fit_before": fit(&before),
        "fit_after": fit(&after),
    });
    insert_warnings(&mut out, x);
    Ok((200, out))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CompareBody {
    cone: Option<Value>,
    weights: Option<Vec<f64>>,
    senses: Option<Vec<Sense>>,
}

fn compare(store: &Store, mut body: Map<String, Value>) -> Handled {
    let src = load_source(store, &mut body)?;
    let req: CompareBody = parse_rest(body)?;
    let x = src.x();
    let d = x.dim();
    let cone = parse_cone(req.cone, d)?;
    let mut topsis_cfg = TopsisConfig::equal(d);
    if let Some(w) = req.weights {
        topsis_cfg.weights = w;
    }
    if let Some(s) = req.senses {
        topsis_cfg.senses = s;
    }
    let topsis = topsis_rank(x, &topsis_cfg)?;
    // Weighted sums use the same weights, read exactly from their shortest
    // decimal form (TOPSIS has already rejected non-finite weights).
    let w = Vector::new(
        topsis_cfg.weights.iter().map(|v| number::parse_rational(&v.to_string())).collect::<Result<_>>()?,
    )?;
    let sums = weighted_sum_rank(x, &w)?;
    let ranking = rank_all_cancellable(x, &cone, &AtomicBool::new(false))?;
    let rows: Vec<Value> = x
        .ids()
        .zip(topsis.iter().zip(&sums))
        .zip(ranking.values())
        .map(|((id, ((_, t), (_, s))), r)| {
            json!({
                "id": id,
                "topsis": t,
                "weighted_sum": { "value": number::to_f64(s), "exact": number::format_exact(s) },
                "cone_rank": r,
            })
        })
        .collect();
    let mut out = json!({
        "source": src.describe(),
        "cone": ConeJson::from(&cone),
        "weights": topsis_cfg.weights,
        "senses": topsis_cfg.senses,
        "rows": rows,
    });
    insert_warnings(&mut out, x);
    Ok((200, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn store() -> (tempfile::TempDir, Store) {
        let dir = tempfile::tempdir().unwrap();
        let s = Store::open(dir.path()).unwrap();
        (dir, s)
    }

    fn call(s: &Store, method: &str, target: &str, body: &str) -> (u16, Value) {
        let r = dispatch(s, method, target, body.as_bytes(), &AtomicBool::new(false));
        (r.status, serde_json::from_str(&r.body).unwrap())
    }

    #[test]
    fn chain_ranks_inline() {
        let (_d, s) = store();
        let (status, v) = call(&s, "POST", "/rank", r#"{"csv": "id,c1,c2\na,0,0\nb,1,1\n"}"#);
        assert_eq!(status, 200);
        assert_eq!(v["ranks"], json!({ "a": 1, "b": 2 }));
    }

    #[test]
    fn errors_map_to_status() {
        let (_d, s) = store();
        assert_eq!(call(&s, "GET", "/nope", "").0, 404);
        assert_eq!(call(&s, "GET", "/datasets/abcdef", "").0, 404);
        assert_eq!(call(&s, "POST", "/rank", "[]").0, 400);
        let (status, v) =
            call(&s, "POST", "/rank", r#"{"csv": "id,c1,c2\na,0,0\nb,1,1\n", "cone": {"rays": []}}"#);
        assert_eq!(status, 400);
        assert_eq!(v["error"]["code"], "improper_cone");
        let (status, _) = call(
            &s,
            "POST",
            "/rank",
            r#"{"csv": "id,c1,c2,c3\na,0,0,0\nb,1,1,1\n", "cone": {"rays": [[1,0,0],[-1,0,0],[0,1,0]]}}"#,
        );
        assert_eq!(status, 422);
    }

    #[test]
    fn whatif_commit_creates_revision() {
        let (_d, s) = store();
        let (status, rec) = call(&s, "POST", "/datasets", "id,c1,c2\nx,1,2\ny,2,1\n");
        assert_eq!(status, 201);
        let id = rec["id"].as_str().unwrap().to_string();
        let body = json!({ "dataset": id, "add": [{ "id": "z", "coords": [3, 0] }] }).to_string();
        let first = dispatch(&s, "POST", "/whatif", body.as_bytes(), &AtomicBool::new(false));
        let second = dispatch(&s, "POST", "/whatif", body.as_bytes(), &AtomicBool::new(false));
        assert_eq!(first, second);
        assert_eq!(call(&s, "GET", &format!("/datasets/{id}"), "").1["revision"], 1);
        let (status, v) = call(&s, "POST", "/whatif?commit=true", &body);
        assert_eq!(status, 200);
        assert_eq!(v["committed"]["revision"], 2);
        let stale = json!({ "dataset": id, "revision": 1 }).to_string();
        assert_eq!(call(&s, "POST", "/rank", &stale).0, 409);
    }
}
