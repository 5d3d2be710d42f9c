//! HTTP session service: each session owns one resumable minimization that
//! clients advance in chunks, perturb, reshape and export, with progress
//! streamed as server-sent events.

pub mod api;
mod error;
mod session;

use std::collections::HashMap;
use std::convert::Infallible;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::sse::{KeepAlive, Sse};
use axum::response::IntoResponse;
use axum::routing::{get, post};
use axum::{Json, Router};
use tokio::sync::{broadcast, Mutex, RwLock};
use tokio_stream::wrappers::BroadcastStream;
use tokio_stream::{Stream, StreamExt};

pub use api::*;
pub use error::{ApiError, ErrorBody};
pub use session::{Defaults, Session, HISTORY_CAP, SNAPSHOT_EVERY, STATE_RESOLUTION_PER_DOMAIN};

const EVENT_BUFFER: usize = 4096;

struct Handle {
    session: Arc<Mutex<Session>>,
    events: broadcast::Sender<Event>,
    cancel: Arc<AtomicBool>,
}

/// Shared service state: the session table and creation defaults.
#[derive(Clone, Default)]
pub struct AppState {
    sessions: Arc<RwLock<HashMap<String, Arc<Handle>>>>,
    defaults: Arc<Defaults>,
}

impl AppState {
    pub fn new(defaults: Defaults) -> Self {
        Self { sessions: Arc::default(), defaults: Arc::new(defaults) }
    }

    async fn handle(&self, id: &str) -> Result<Arc<Handle>, ApiError> {
        self.sessions.read().await.get(id).cloned().ok_or_else(|| ApiError::not_found(id))
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_state).delete(delete_session))
        .route("/sessions/{id}/step", post(step))
        .route("/sessions/{id}/perturb", post(perturb))
        .route("/sessions/{id}/reshape", post(reshape))
        .route("/sessions/{id}/orbit", get(export_orbit))
        .route("/sessions/{id}/events", get(events))
        .with_state(state)
}

/// Serves the router on an already bound listener until the task is dropped.
pub async fn serve(listener: tokio::net::TcpListener, defaults: Defaults) -> std::io::Result<()> {
    axum::serve(listener, router(AppState::new(defaults))).await
}

/// Decodes a JSON body, reporting serde's message (which names the offending
/// field) in the service error format.
fn parse_body<T: serde::de::DeserializeOwned>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "parse", e.to_string()))
}

fn new_id() -> String {
    format!("{:032x}", rand::random::<u128>())
}

/// Runs `f` on the session off the async runtime, holding its lock so that
/// commands to one session apply in arrival order.
async fn with_session<T: Send + 'static>(
    handle: &Handle,
    f: impl FnOnce(&mut Session, &AtomicBool) -> Result<T, ApiError> + Send + 'static,
) -> Result<T, ApiError> {
    let mut guard = handle.session.clone().lock_owned().await;
    let cancel = handle.cancel.clone();
    tokio::task::spawn_blocking(move || f(&mut guard, &cancel))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))?
}

async fn create_session(
    State(app): State<AppState>,
    body: Bytes,
) -> Result<(StatusCode, Json<CreateResponse>), ApiError> {
    let req: CreateRequest = parse_body(&body)?;
    let (events, _) = broadcast::channel(EVENT_BUFFER);
    let defaults = app.defaults.clone();
    let tx = events.clone();
    let (session, resp) = tokio::task::spawn_blocking(move || Session::create(new_id(), req, &defaults, tx))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))??;
    let handle = Handle { session: Arc::new(Mutex::new(session)), events, cancel: Arc::default() };
    app.sessions.write().await.insert(resp.id.clone(), Arc::new(handle));
    Ok((StatusCode::CREATED, Json(resp)))
}

async fn step(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<StepResponse>, ApiError> {
    let req: StepRequest = if body.is_empty() { StepRequest::default() } else { parse_body(&body)? };
    let handle = app.handle(&id).await?;
    with_session(&handle, move |s, cancel| s.step(req.iterations, cancel)).await.map(Json)
}

async fn perturb(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<SessionState>, ApiError> {
    let req: PerturbRequest = parse_body(&body)?;
    let handle = app.handle(&id).await?;
    with_session(&handle, move |s, _| s.perturb(&req)).await.map(Json)
}

async fn reshape(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<SessionState>, ApiError> {
    let req: ReshapeRequest = parse_body(&body)?;
    let handle = app.handle(&id).await?;
    with_session(&handle, move |s, _| s.reshape(&req)).await.map(Json)
}

async fn get_state(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<StateQuery>,
) -> Result<Json<SessionState>, ApiError> {
    let handle = app.handle(&id).await?;
    with_session(&handle, move |s, _| s.state(q.resolution)).await.map(Json)
}

async fn export_orbit(State(app): State<AppState>, Path(id): Path<String>) -> Result<impl IntoResponse, ApiError> {
    let handle = app.handle(&id).await?;
    let text = with_session(&handle, |s, _| s.export()).await?;
    Ok(([(header::CONTENT_TYPE, "application/json")], text))
}

async fn delete_session(State(app): State<AppState>, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    let handle = app.sessions.write().await.remove(&id).ok_or_else(|| ApiError::not_found(&id))?;
    handle.cancel.store(true, Ordering::Relaxed);
    Ok(StatusCode::NO_CONTENT)
}

async fn events(
    State(app): State<AppState>,
    Path(id): Path<String>,
) -> Result<Sse<impl Stream<Item = Result<axum::response::sse::Event, Infallible>>>, ApiError> {
    let handle = app.handle(&id).await?;
    let stream = BroadcastStream::new(handle.events.subscribe()).filter_map(|ev| {
        // lagged receivers skip what they missed and resync from the next event
        let ev = ev.ok()?;
        let name = match &ev {
            Event::Progress { .. } => "progress",
            Event::Snapshot { .. } => "snapshot",
            Event::Status { .. } => "status",
        };
        let data = serde_json::to_string(&ev).ok()?;
        Some(Ok(axum::response::sse::Event::default().event(name).data(data)))
    });
    Ok(Sse::new(stream).keep_alive(KeepAlive::default()))
}
