//! Golden request fixtures replayed through the CLI binary and the HTTP
//! server against the same store.

#![allow(dead_code)]

use std::io::{Read, Write};
use std::net::{SocketAddr, TcpStream};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;

use conerank::data::read_csv;
use conerank::service::Store;
use conerank::{Alternative, Vector};
use serde_json::Value;

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub struct Fixture {
    pub name: String,
    pub method: String,
    pub path: String,
    pub body: Vec<u8>,
    pub expected: PathBuf,
}

pub fn load_fixtures() -> Vec<Fixture> {
    let dir = fixtures_dir().join("golden");
    let mut names: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.to_string_lossy().ends_with(".request.json"))
        .collect();
    names.sort();
    names
        .into_iter()
        .map(|p| {
            let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
            let name = p.file_name().unwrap().to_string_lossy().trim_end_matches(".request.json").to_string();
            let body = match &v["body"] {
                Value::Null => Vec::new(),
                Value::String(s) => s.clone().into_bytes(),
                other => other.to_string().into_bytes(),
            };
            Fixture {
                expected: dir.join(format!("{name}.expected.json")),
                name,
                method: v["method"].as_str().unwrap().to_string(),
                path: v["path"].as_str().unwrap().to_string(),
                body,
            }
        })
        .collect()
}

/// Ingests every fixture dataset; `revised` gains a second revision.
pub fn seed_store(root: &Path) -> Store {
    let store = Store::open(root).unwrap();
    let data = fixtures_dir().join("data");
    for name in ["chain", "triangle", "reversal", "antichain", "labeled", "revised"] {
        let text = std::fs::read(data.join(format!("{name}.csv"))).unwrap();
        let (rec, _) = store.ingest(&read_csv(text.as_slice()).unwrap()).unwrap();
        if name == "revised" && store.latest_revision(&rec.id).unwrap() == 1 {
            let w = Alternative { id: "w".into(), value: Vector::from_i64(&[2, 2]).unwrap() };
            let x = rec.alternative_set().unwrap().with_added(&[w]).unwrap();
            store.commit(&rec.id, 1, &x).unwrap();
        }
    }
    store
}

pub struct Server {
    pub addr: SocketAddr,
    _runtime: tokio::runtime::Runtime,
}

pub fn start_server(root: &Path) -> Server {
    let runtime = tokio::runtime::Builder::new_multi_thread().worker_threads(2).enable_all().build().unwrap();
    let store = Arc::new(Store::open(root).unwrap());
    let (tx, rx) = tokio::sync::oneshot::channel();
    let addr: SocketAddr = "127.0.0.1:0".parse().unwrap();
    runtime.spawn(async move {
        conerank::service::http::serve(store, addr, 2, Some(tx)).await.unwrap();
    });
    let addr = runtime.block_on(rx).unwrap();
    Server { addr, _runtime: runtime }
}

fn decode_chunked(mut body: &[u8]) -> Vec<u8> {
    let mut out = Vec::new();
    loop {
        let line_end = body.windows(2).position(|w| w == b"\r\n").unwrap();
        let size = usize::from_str_radix(std::str::from_utf8(&body[..line_end]).unwrap().trim(), 16).unwrap();
        body = &body[line_end + 2..];
        if size == 0 {
            return out;
        }
        out.extend_from_slice(&body[..size]);
        body = &body[size + 2..];
    }
}

/// Minimal HTTP/1.1 client: one request per connection.
pub fn http(addr: SocketAddr, method: &str, path: &str, body: &[u8]) -> (u16, Vec<u8>) {
    let mut s = TcpStream::connect(addr).unwrap();
    write!(
        s,
        "{method} {path} HTTP/1.1\r\nHost: localhost\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
        body.len()
    )
    .unwrap();
    s.write_all(body).unwrap();
    let mut raw = Vec::new();
    s.read_to_end(&mut raw).unwrap();
    let split = raw.windows(4).position(|w| w == b"\r\n\r\n").unwrap();
    let head = String::from_utf8_lossy(&raw[..split]).to_ascii_lowercase();
    let status: u16 = head.split_whitespace().nth(1).unwrap().parse().unwrap();
    let rest = &raw[split + 4..];
    let body = if head.contains("transfer-encoding: chunked") { decode_chunked(rest) } else { rest.to_vec() };
    (status, body)
}

pub fn cli(root: &Path, method: &str, path: &str, body: &[u8]) -> (i32, Vec<u8>) {
    let file = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(file.path(), body).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_conerank"))
        .args(["request", method, path])
        .arg(file.path())
        .env("CONERANK_STORE", root)
        .output()
        .unwrap();
    (out.status.code().unwrap_or(-1), out.stdout)
}

/// Timestamps differ between runs; everything else must match the golden file.
pub fn normalize(bytes: &[u8]) -> String {
    let text = String::from_utf8_lossy(bytes);
    text.lines()
        .map(|l| match l.find("\"created_at\": \"") {
            Some(i) => format!("{}\"created_at\": \"<timestamp>\",", &l[..i]),
            None => l.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n")
        + "\n"
}

pub struct ParityReport {
    pub total: usize,
    pub identical: usize,
    pub golden_matches: usize,
    pub failures: Vec<String>,
}

/// Replays every fixture. With `CONERANK_BLESS=1` the golden files are rewritten.
pub fn run_parity() -> ParityReport {
    let dir = tempfile::tempdir().unwrap();
    seed_store(dir.path());
    let server = start_server(dir.path());
    let bless = std::env::var("CONERANK_BLESS").is_ok_and(|v| v == "1");
    let fixtures = load_fixtures();
    let mut report = ParityReport { total: fixtures.len(), identical: 0, golden_matches: 0, failures: Vec::new() };
    for f in &fixtures {
        let (code, cli_body) = cli(dir.path(), &f.method, &f.path, &f.body);
        let (status, http_body) = http(server.addr, &f.method, &f.path, &f.body);
        let success_agrees = (code == 0) == (200..300).contains(&status);
        if cli_body == http_body && success_agrees {
            report.identical += 1;
        } else {
            report.failures.push(format!("{}: cli exit {code} vs http {status}, bodies differ: {}", f.name, cli_body != http_body));
        }
        let got = normalize(&http_body);
        if bless {
            std::fs::write(&f.expected, &got).unwrap();
        }
        match std::fs::read_to_string(&f.expected) {
            Ok(want) if want == got => report.golden_matches += 1,
            Ok(_) => report.failures.push(format!("{}: differs from golden output", f.name)),
            Err(_) => report.failures.push(format!("{}: golden output missing", f.name)),
        }
    }
    report
}
