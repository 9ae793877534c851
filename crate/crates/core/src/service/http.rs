//! HTTP front end. Every request is forwarded to [`dispatch`] on a blocking
//! worker; a semaphore bounds the number of concurrent computations.

use std::net::SocketAddr;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use axum::body::Bytes;
use axum::http::{header, Method, StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::Router;
use tokio::net::TcpListener;
use tokio::sync::Semaphore;

use super::api::dispatch;
use super::store::Store;

#[derive(Clone)]
struct AppState {
    store: Arc<Store>,
    workers: Arc<Semaphore>,
}

/// Sets the flag when the request future is dropped, e.g. on client disconnect.
struct CancelOnDrop {
    flag: Arc<AtomicBool>,
    armed: bool,
}

impl Drop for CancelOnDrop {
    fn drop(&mut self) {
        if self.armed {
            self.flag.store(true, Ordering::Relaxed);
        }
    }
}

pub fn router(store: Arc<Store>, workers: usize) -> Router {
    let state = AppState { store, workers: Arc::new(Semaphore::new(workers.max(1))) };
    Router::new().fallback(handle).with_state(state)
}

async fn handle(
    axum::extract::State(state): axum::extract::State<AppState>,
    method: Method,
    uri: Uri,
    body: Bytes,
) -> Response {
    let cancel = Arc::new(AtomicBool::new(false));
    let mut guard = CancelOnDrop { flag: cancel.clone(), armed: true };
    let Ok(permit) = state.workers.clone().acquire_owned().await else {
        return (StatusCode::SERVICE_UNAVAILABLE, "shutting down").into_response();
    };
    let target = uri.path_and_query().map(|pq| pq.as_str().to_string()).unwrap_or_else(|| uri.path().to_string());
    let store = state.store.clone();
    // The permit travels with the work, so a cancelled request keeps its
    // slot until the computation has actually stopped.
    let result = tokio::task::spawn_blocking(move || {
        let _permit = permit;
        dispatch(&store, method.as_str(), &target, &body, &cancel)
    })
    .await;
    guard.armed = false;
    match result {
        Ok(r) => {
            let status = StatusCode::from_u16(r.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
            (status, [(header::CONTENT_TYPE, "application/json")], r.body).into_response()
        }
        Err(e) => (StatusCode::INTERNAL_SERVER_ERROR, e.to_string()).into_response(),
    }
}

/// Serves until the process is stopped. `ready` receives the bound address.
pub async fn serve(
    store: Arc<Store>,
    addr: SocketAddr,
    workers: usize,
    ready: Option<tokio::sync::oneshot::Sender<SocketAddr>>,
) -> std::io::Result<()> {
    let listener = TcpListener::bind(addr).await?;
    let local = listener.local_addr()?;
    if let Some(tx) = ready {
        let _ = tx.send(local);
    }
    axum::serve(listener, router(store, workers)).await
}
