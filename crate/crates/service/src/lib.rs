//! HTTP+JSON API over in-memory pairwise-comparison sessions.
//!
//! Every mutation recomputes the full [`AnalysisReport`] so a client always
//! sees K, D, κ and the worst triad for the current judgments. Mutations on
//! one session are serialised by a per-session lock; distinct sessions are
//! independent.

mod error;
mod session;

use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::StatusCode;
use axum::routing::{get, post, put};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

use pcrank_core::matrix::parse_number;
use pcrank_core::reduction::DEFAULT_THETA;
use pcrank_core::{analyze, suggest_revision, AnalysisReport, EigenOptions, Revision};

pub use error::ApiError;
pub use session::{Session, SessionStore, MAX_CONCEPTS, MIN_CONCEPTS};

pub type SharedState = Arc<AppState>;

pub struct AppState {
    pub store: SessionStore,
    pub eigen: EigenOptions,
}

impl AppState {
    pub fn new(snapshot_dir: Option<PathBuf>, eigen: EigenOptions) -> std::io::Result<SharedState> {
        Ok(Arc::new(Self {
            store: SessionStore::open(snapshot_dir)?,
            eigen,
        }))
    }

    pub fn in_memory() -> SharedState {
        Arc::new(Self {
            store: SessionStore::default(),
            eigen: EigenOptions::default(),
        })
    }
}

/// API routes, plus static assets from `static_dir` when it exists.
pub fn router(state: SharedState, static_dir: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/api/health", get(health))
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/{id}", get(get_session))
        .route("/api/sessions/{id}/judgments/{i}/{j}", put(put_judgment))
        .route("/api/sessions/{id}/analysis", get(get_analysis))
        .route("/api/sessions/{id}/suggestion", get(get_suggestion))
        .route("/api/sessions/{id}/suggestion/apply", post(apply_suggestion))
        .with_state(state);
    match static_dir {
        Some(dir) if dir.is_dir() => api.fallback_service(ServeDir::new(dir)),
        _ => api,
    }
}

/// Serves `router` on an already-bound listener until the process stops.
pub async fn serve(listener: tokio::net::TcpListener, router: Router) -> std::io::Result<()> {
    axum::serve(listener, router).await
}

type ApiResult<T> = Result<T, ApiError>;

async fn health() -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok" }))
}

#[derive(Debug, Deserialize)]
struct CreateSession {
    n: usize,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionView {
    #[serde(flatten)]
    pub session: Session,
    pub analysis: AnalysisReport,
}

fn view(state: &AppState, session: Session) -> ApiResult<SessionView> {
    let analysis = analyze(&session.matrix, state.eigen)?;
    Ok(SessionView { session, analysis })
}

async fn create_session(
    State(state): State<SharedState>,
    body: Result<Json<CreateSession>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<SessionView>)> {
    let Json(body) = body?;
    let session = state.store.create(body.n, body.labels)?;
    Ok((StatusCode::CREATED, Json(view(&state, session)?)))
}

async fn get_session(
    State(state): State<SharedState>,
    UrlPath(id): UrlPath<String>,
) -> ApiResult<Json<SessionView>> {
    let session = state.store.read(&id, |s| s.clone())?;
    Ok(Json(view(&state, session)?))
}

/// Judgment value: a JSON number or a string holding a decimal or fraction.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Value {
    Number(f64),
    Text(String),
}

#[derive(Debug, Deserialize)]
struct JudgmentBody {
    value: Value,
}

fn parse_index(text: &str, what: &str) -> ApiResult<usize> {
    text.parse()
        .map_err(|_| ApiError::bad_request(format!("{what} must be a non-negative integer, got {text:?}")))
}

async fn put_judgment(
    State(state): State<SharedState>,
    UrlPath((id, i, j)): UrlPath<(String, String, String)>,
    body: Result<Json<JudgmentBody>, JsonRejection>,
) -> ApiResult<Json<AnalysisReport>> {
    let (i, j) = (parse_index(&i, "i")?, parse_index(&j, "j")?);
    if i >= j {
        return Err(ApiError::bad_request(format!(
            "judgments are set on the upper triangle: need i < j, got ({i},{j})"
        )));
    }
    let Json(body) = body?;
    let value = match body.value {
        Value::Number(v) => v,
        Value::Text(t) => parse_number(&t).map_err(ApiError::bad_request)?,
    };
    let report = state.store.update(&id, |session| {
        let matrix = session.matrix.with_judgment(i, j, value)?;
        let report = analyze(&matrix, state.eigen)?;
        session.matrix = matrix;
        Ok(report)
    })?;
    Ok(Json(report))
}

async fn get_analysis(
    State(state): State<SharedState>,
    UrlPath(id): UrlPath<String>,
) -> ApiResult<Json<AnalysisReport>> {
    let matrix = state.store.read(&id, |s| s.matrix.clone())?;
    Ok(Json(analyze(&matrix, state.eigen)?))
}

#[derive(Debug, Default, Deserialize)]
struct ThetaQuery {
    theta: Option<f64>,
}

async fn get_suggestion(
    State(state): State<SharedState>,
    UrlPath(id): UrlPath<String>,
    query: Result<Query<ThetaQuery>, QueryRejection>,
) -> ApiResult<Json<Revision>> {
    let Query(query) = query?;
    let theta = query.theta.unwrap_or(DEFAULT_THETA);
    let matrix = state.store.read(&id, |s| s.matrix.clone())?;
    Ok(Json(suggest_revision(&matrix, theta, state.eigen)?))
}

/// Optional body for the apply endpoint. When the expected entry is given,
/// the request fails with `stale_suggestion` unless the freshly computed
/// suggestion still matches it.
#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "camelCase")]
struct ApplyBody {
    theta: Option<f64>,
    i: Option<usize>,
    j: Option<usize>,
    new_value: Option<f64>,
}

async fn apply_suggestion(
    State(state): State<SharedState>,
    UrlPath(id): UrlPath<String>,
    query: Result<Query<ThetaQuery>, QueryRejection>,
    body: Option<Json<ApplyBody>>,
) -> ApiResult<Json<AnalysisReport>> {
    let Query(query) = query?;
    let body = body.map(|Json(b)| b).unwrap_or_default();
    let theta = body.theta.or(query.theta).unwrap_or(DEFAULT_THETA);
    let report = state.store.update(&id, |session| {
        let rev = suggest_revision(&session.matrix, theta, state.eigen)?;
        let stale = body.i.is_some_and(|i| i != rev.i)
            || body.j.is_some_and(|j| j != rev.j)
            || body.new_value.is_some_and(|v| v != rev.new_value);
        if stale {
            return Err(ApiError::conflict(
                "stale_suggestion",
                "the matrix changed since the suggestion was fetched",
            ));
        }
        let matrix = rev.apply(&session.matrix)?;
        let report = analyze(&matrix, state.eigen)?;
        session.matrix = matrix;
        session.history.push(rev);
        Ok(report)
    })?;
    Ok(Json(report))
}
