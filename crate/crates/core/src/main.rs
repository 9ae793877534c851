use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::AtomicBool;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use conerank::service::api::load_source;
use conerank::service::{dispatch, plot, ApiResponse, Store};
use conerank::Error;

#[derive(Parser)]
#[command(name = "conerank", version, about = "Cone distribution rankings for multi-criteria decisions")]
struct Cli {
    /// Dataset store directory.
    #[arg(long, env = "CONERANK_STORE", default_value = "conerank-store", global = true)]
    store: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct SourceArgs {
    /// Stored dataset id.
    #[arg(long, conflicts_with = "csv")]
    dataset: Option<String>,
    /// Revision the request is made against; must be the latest.
    #[arg(long, requires = "dataset")]
    revision: Option<u64>,
    /// Inline CSV file instead of a stored dataset.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Cone config JSON file (or inline JSON). Defaults to the nonnegative orthant.
    #[arg(long)]
    cone: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a CSV and store it as a dataset.
    Ingest { file: PathBuf },
    /// Exact cone ranks with witnesses.
    Rank {
        #[command(flatten)]
        source: SourceArgs,
        /// Extra query point `id=c1,c2,...`; repeatable.
        #[arg(long = "point")]
        points: Vec<String>,
        /// Also run the sampling oracle with this many samples.
        #[arg(long)]
        oracle_samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Write an SVG scatter here plus a JSON description next to it.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Set rankings and refinement checks.
    Setrank {
        #[command(flatten)]
        source: SourceArgs,
        /// Set definition `name=id1,id2,...`; repeatable.
        #[arg(long = "set", required = true)]
        sets: Vec<String>,
        /// Pair of set names `a:b` to compare; repeatable.
        #[arg(long = "compare")]
        compare: Vec<String>,
    },
    /// Rank reversals caused by adding or removing alternatives.
    Reversal {
        #[command(flatten)]
        source: SourceArgs,
        /// CSV file of alternatives to add (header row, id first).
        #[arg(long)]
        add: Option<PathBuf>,
        /// Ids to remove, comma separated.
        #[arg(long, value_delimiter = ',')]
        remove: Vec<String>,
        /// Store the edited set as a new revision.
        #[arg(long)]
        commit: bool,
    },
    /// Level sets, clusters, threshold fit and label propagation.
    Classify {
        #[command(flatten)]
        source: SourceArgs,
        /// Alpha-best percentage.
        #[arg(long)]
        alpha: Option<String>,
        /// Level-set threshold.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Rotate the cone toward the maximum-margin separator of the labels.
    Align {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// TOPSIS and weighted sums next to the cone rank.
    Compare {
        #[command(flatten)]
        source: SourceArgs,
        /// Criterion weights summing to 1, comma separated.
        #[arg(long, value_delimiter = ',')]
        weights: Vec<f64>,
        /// `benefit` or `cost` per criterion, comma separated.
        #[arg(long, value_delimiter = ',')]
        senses: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Send a raw API request without a server.
    Request {
        method: String,
        path: String,
        /// Body file, `-` for standard input.
        body: Option<PathBuf>,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        bind: String,
        /// Concurrent computations.
        #[arg(long, default_value_t = 4)]
        workers: usize,
    },
    /// Print a synthetic student cohort as CSV.
    Cohort {
        #[arg(long, default_value_t = 30)]
        n: usize,
        #[arg(long, default_value_t = conerank::ranking::DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn read_text(path: &Path) -> Result<String, Error> {
    if path.as_os_str() == "-" {
        return Ok(std::io::read_to_string(std::io::stdin())?);
    }
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn cone_value(arg: &str) -> Result<Value, Error> {
    let text = if arg.trim_start().starts_with('{') { arg.to_string() } else { read_text(Path::new(arg))? };
    Ok(serde_json::from_str(&text)?)
}

fn source_body(s: &SourceArgs) -> Result<Map<String, Value>, Error> {
    let mut m = Map::new();
    if let Some(id) = &s.dataset {
        m.insert("dataset".into(), json!(id));
    }
    if let Some(r) = s.revision {
        m.insert("revision".into(), json!(r));
    }
    if let Some(path) = &s.csv {
        m.insert("csv".into(), json!(read_text(path)?));
    }
    if let Some(c) = &s.cone {
        m.insert("cone".into(), cone_value(c)?);
    }
    Ok(m)
}

/// `id=1,2.5,3/4` into `{"id": ..., "coords": [...]}`.
fn parse_point(s: &str) -> Result<Value, Error> {
    let (id, coords) = s.split_once('=').ok_or_else(|| Error::Parse(format!("expected id=c1,c2,..., got `{s}`")))?;
    Ok(json!({ "id": id.trim(), "coords": coords.split(',').map(str::trim).collect::<Vec<_>>() }))
}

fn parse_list(s: &str, what: &str) -> Result<(String, Vec<String>), Error> {
    let (name, ids) = s.split_once('=').ok_or_else(|| Error::Parse(format!("expected name=id1,id2,... for {what}")))?;
    let ids = ids.split(',').map(str::trim).filter(|i| !i.is_empty()).map(str::to_string).collect();
    Ok((name.trim().to_string(), ids))
}

fn additions_csv(path: &Path) -> Result<Vec<Value>, Error> {
    let text = read_text(path)?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(format!("row {}: {e}", i + 2)))?;
        let mut cells = rec.iter();
        let id = cells.next().unwrap_or("");
        out.push(json!({ "id": id, "coords": cells.collect::<Vec<_>>() }));
    }
    Ok(out)
}

fn run(store: &Store, method: &str, target: &str, body: &[u8]) -> ApiResponse {
    dispatch(store, method, target, body, &AtomicBool::new(false))
}

fn emit(r: &ApiResponse) -> ExitCode {
    print!("{}", r.body);
    if r.exit_code != 0 {
        if let Ok(v) = serde_json::from_str::<Value>(&r.body) {
            if let Some(msg) = v["error"]["message"].as_str() {
                eprintln!("error: {msg}");
            }
        }
    }
    ExitCode::from(r.exit_code as u8)
}

fn post(store: &Store, target: &str, body: Map<String, Value>) -> ApiResponse {
    run(store, "POST", target, Value::Object(body).to_string().as_bytes())
}

fn write_plot(store: &Store, path: &Path, request: &Map<String, Value>, response: &ApiResponse) -> Result<(), Error> {
    let mut req = request.clone();
    let src = load_source(store, &mut req)?;
    let out: Value = serde_json::from_str(&response.body)?;
    let ranks: Vec<usize> =
        src.x().ids().map(|id| out["ranks"][id].as_u64().unwrap_or(0) as usize).collect();
    let cfg = req.remove("cone").map(conerank::service::ConeConfig::from_value).transpose()?;
    let cone = conerank::service::config::cone_or_orthant(cfg.as_ref(), src.x().dim())?;
    let criteria = src.record.as_ref().map(|r| r.criteria.clone()).unwrap_or_default();
    let scatter = plot::scatter(src.x(), &criteria, &ranks, &cone);
    std::fs::write(path, plot::svg(&scatter))?;
    let mut text = serde_json::to_string_pretty(&scatter)?;
    text.push('\n');
    std::fs::write(path.with_extension("json"), text)?;
    Ok(())
}

fn rows_csv(body: &str) -> Result<String, Error> {
    let v: Value = serde_json::from_str(body)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(["id", "topsis", "weighted_sum", "weighted_sum_exact", "cone_rank"]).map_err(io)?;
    for row in v["rows"].as_array().into_iter().flatten() {
        w.write_record([
            row["id"].as_str().unwrap_or("").to_string(),
            row["topsis"].to_string(),
            row["weighted_sum"]["value"].to_string(),
            row["weighted_sum"]["exact"].as_str().unwrap_or("").to_string(),
            row["cone_rank"].to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Cohort { n, seed } = cli.command {
        return match conerank::baselines::synthetic_cohort(n, seed) {
            Ok(x) => {
                println!("id,grade,credits");
                for a in x.iter() {
                    let v = a.value.to_f64();
                    println!("{},{},{}", a.id, v[0], v[1]);
                }
                ExitCode::SUCCESS
            }
            Err(e) => fail(&e),
        };
    }
    let store = match Store::open(&cli.store) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    match execute(&store, cli.command) {
        Ok(code) => code,
        Err(e) => fail(&e),
    }
}

fn execute(store: &Store, command: Command) -> Result<ExitCode, Error> {
    let code = match command {
        Command::Ingest { file } => {
            let text = read_text(&file)?;
            emit(&run(store, "POST", "/datasets", text.as_bytes()))
        }
        Command::Rank { source, points, oracle_samples, seed, plot } => {
            let mut body = source_body(&source)?;
            if !points.is_empty() {
                body.insert("points".into(), Value::Array(points.iter().map(|p| parse_point(p)).collect::<Result<_, _>>()?));
            }
            if let Some(k) = oracle_samples {
                body.insert("oracle_samples".into(), json!(k));
            }
            if let Some(s) = seed {
                body.insert("seed".into(), json!(s));
            }
            let r = post(store, "/rank", body.clone());
            if let (Some(path), 0) = (&plot, r.exit_code) {
                write_plot(store, path, &body, &r)?;
            }
            emit(&r)
        }
        Command::Setrank { source, sets, compare } => {
            let mut body = source_body(&source)?;
            let mut defs = Map::new();
            for s in &sets {
                let (name, ids) = parse_list(s, "--set")?;
                defs.insert(name, json!(ids));
            }
            body.insert("sets".into(), Value::Object(defs));
            let pairs = compare
                .iter()
                .map(|c| {
                    c.split_once(':')
                        .map(|(a, b)| json!([a.trim(), b.trim()]))
                        .ok_or_else(|| Error::Parse(format!("expected a:b for --compare, got `{c}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if !pairs.is_empty() {
                body.insert("compare".into(), Value::Array(pairs));
            }
            emit(&post(store, "/setrank", body))
        }
        Command::Reversal { source, add, remove, commit } => {
            let mut body = source_body(&source)?;
            if let Some(path) = &add {
                body.insert("add".into(), Value::Array(additions_csv(path)?));
            }
            if !remove.is_empty() {
                body.insert("remove".into(), json!(remove));
            }
            let target = if commit { "/whatif?commit=true" } else { "/whatif" };
            emit(&post(store, target, body))
        }
        Command::Classify { source, alpha, n } => {
            let mut body = source_body(&source)?;
            if let Some(a) = alpha {
                body.insert("alpha".into(), json!(a));
            }
            if let Some(n) = n {
                body.insert("n".into(), json!(n));
            }
            emit(&post(store, "/classify", body))
        }
        Command::Align { source } => emit(&post(store, "/align", source_body(&source)?)),
        Command::Compare { source, weights, senses, format } => {
            let mut body = source_body(&source)?;
            if !weights.is_empty() {
                body.insert("weights".into(), json!(weights));
            }
            if !senses.is_empty() {
                body.insert("senses".into(), json!(senses));
            }
            let r = post(store, "/compare", body);
            match (format, r.exit_code) {
                (Format::Csv, 0) => {
                    print!("{}", rows_csv(&r.body)?);
                    ExitCode::SUCCESS
                }
                _ => emit(&r),
            }
        }
        Command::Request { method, path, body } => {
            let text = match &body {
                Some(p) => read_text(p)?,
                None => String::new(),
            };
            emit(&run(store, &method.to_ascii_uppercase(), &path, text.as_bytes()))
        }
        Command::Serve { port, bind, workers } => {
            let addr: SocketAddr = format!("{bind}:{port}")
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad bind address `{bind}:{port}`")))?;
            let store = Arc::new(Store::open(store.root())?);
            let rt = tokio::runtime::Runtime::new()?;
            eprintln!("listening on http://{addr}");
            rt.block_on(conerank::service::http::serve(store, addr, workers, None))?;
            ExitCode::SUCCESS
        }
        Command::Cohort { .. } => unreachable!("handled before the store is opened"),
    };
    Ok(code)
}
