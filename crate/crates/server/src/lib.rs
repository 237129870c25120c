//! JSON-over-HTTP service for the edge-toggle flux game.
//!
//! Sessions live in memory. Each session sits behind its own mutex, so
//! requests against one session are serialized while different sessions
//! proceed independently.

use std::collections::{BTreeMap, HashMap};
use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use parking_lot::{Mutex, RwLock};
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;
use uuid::Uuid;

use bistable::builders::{build_system, catalog_entry, CatalogEntry, SystemSpec, CATALOG};
use bistable::flux::{scramble, BoundaryMode, GameSession, GameState, Reachability};
use bistable::{BitVector, CellComplex, Error, SCHEMA_VERSION};

/// Shared server state.
#[derive(Debug, Default)]
pub struct AppState {
    sessions: RwLock<HashMap<Uuid, Arc<Mutex<GameSession>>>>,
    default_board: Option<String>,
}

impl AppState {
    /// `default_board` is used when a new session names no complex.
    pub fn new(default_board: Option<String>) -> Self {
        Self { sessions: RwLock::default(), default_board }
    }

    pub fn session_count(&self) -> usize {
        self.sessions.read().len()
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<GameSession>>, ApiError> {
        let unknown = || ApiError::new(StatusCode::NOT_FOUND, "unknown_session", format!("no session {id}"));
        let id = Uuid::parse_str(id).map_err(|_| unknown())?;
        self.sessions.read().get(&id).cloned().ok_or_else(unknown)
    }
}

#[derive(Debug, Serialize)]
struct Envelope<T> {
    schema_version: u32,
    #[serde(flatten)]
    body: T,
}

fn reply<T: Serialize>(body: T) -> Json<Envelope<T>> {
    Json(Envelope { schema_version: SCHEMA_VERSION, body })
}

/// Error body: `{schema_version, error: {code, message, rule?}}`.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
    rule: Option<&'static str>,
}

const FROZEN_RULE: &str = "with a frozen boundary only interior edges toggle; \
    this conserves the flux class relative to the boundary";

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        Self { status, code, message: message.into(), rule: None }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "invalid_request", message)
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        match e {
            Error::FrozenEdge(_) => Self {
                rule: Some(FROZEN_RULE),
                ..Self::new(StatusCode::UNPROCESSABLE_ENTITY, "frozen_edge", e.to_string())
            },
            Error::OutOfRange { .. } => Self::new(StatusCode::BAD_REQUEST, "out_of_range", e.to_string()),
            other => Self::bad_request(other.to_string()),
        }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        Self::bad_request(r.body_text())
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    code: &'a str,
    message: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    rule: Option<&'a str>,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        #[derive(Serialize)]
        struct Wrap<'a> {
            error: ErrorBody<'a>,
        }
        let body = reply(Wrap { error: ErrorBody { code: self.code, message: &self.message, rule: self.rule } });
        (self.status, body).into_response()
    }
}

type ApiResult<T> = Result<Json<Envelope<T>>, ApiError>;

/// Body of `POST /session`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateSession {
    /// Catalog board kind, built with `params`.
    pub complex_id: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, i64>,
    /// Inline complex, instead of `complex_id`.
    pub complex: Option<CellComplex>,
    #[serde(default)]
    pub mode: BoundaryMode,
    /// Starting flux; all zero when absent.
    pub start: Option<BitVector>,
    /// Target flux; when absent, a seeded scramble of the start if `seed`
    /// is given, else all zero.
    pub target: Option<BitVector>,
    pub seed: Option<u64>,
}

#[derive(Serialize)]
struct Created {
    session_id: String,
    state: GameState,
    complex: CellComplex,
}

#[derive(Serialize)]
struct StateBody {
    session_id: String,
    #[serde(flatten)]
    state: GameState,
}

#[derive(Serialize)]
struct Solvable {
    solvable: bool,
    /// Sector of the current flux.
    invariant: BitVector,
    target_invariant: BitVector,
    #[serde(skip_serializing_if = "Option::is_none")]
    solution: Option<Vec<usize>>,
}

#[derive(Serialize)]
struct Board {
    #[serde(flatten)]
    entry: &'static CatalogEntry,
    complex: CellComplex,
}

#[derive(Serialize)]
struct Catalog {
    complexes: Vec<Board>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Toggle {
    edge: usize,
}

fn board(kind: &str, params: BTreeMap<String, i64>) -> Result<CellComplex, ApiError> {
    match catalog_entry(kind) {
        Some(e) if e.board => Ok(build_system(&SystemSpec { kind: kind.to_string(), params })?.complex().clone()),
        Some(_) => Err(ApiError::bad_request(format!("{kind} is not a game board"))),
        None => Err(ApiError::bad_request(format!("unknown complex {kind}"))),
    }
}

async fn create(
    State(app): State<Arc<AppState>>,
    body: Result<Json<CreateSession>, JsonRejection>,
) -> Result<(StatusCode, Json<Envelope<Created>>), ApiError> {
    let Json(req) = body?;
    let complex = match (req.complex_id, req.complex) {
        (Some(_), Some(_)) => return Err(ApiError::bad_request("give complex_id or complex, not both")),
        (Some(id), None) => board(&id, req.params)?,
        (None, Some(x)) => x,
        (None, None) => match &app.default_board {
            Some(id) => board(id, req.params)?,
            None => return Err(ApiError::bad_request("no complex given and no default board")),
        },
    };
    if complex.n_faces() == 0 {
        return Err(ApiError::bad_request("board has no faces"));
    }
    let start = req.start.unwrap_or_else(|| BitVector::zeros(complex.n_faces()));
    let target = match (req.target, req.seed) {
        (Some(t), _) => t,
        (None, Some(seed)) => scramble(&complex, &start, req.mode, seed)?,
        (None, None) => BitVector::zeros(complex.n_faces()),
    };
    let session = GameSession::new(Arc::new(complex.clone()), req.mode, start, target)?;
    let state = session.state()?;
    let id = Uuid::new_v4();
    app.sessions.write().insert(id, Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, reply(Created { session_id: id.to_string(), state, complex })))
}

async fn show(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<StateBody> {
    let state = app.session(&id)?.lock().state()?;
    Ok(reply(StateBody { session_id: id, state }))
}

async fn toggle(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<Toggle>, JsonRejection>,
) -> ApiResult<StateBody> {
    let session = app.session(&id)?;
    let Json(Toggle { edge }) = body?;
    let mut s = session.lock();
    s.toggle(edge)?;
    let state = s.state()?;
    Ok(reply(StateBody { session_id: id, state }))
}

async fn reset(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<StateBody> {
    let session = app.session(&id)?;
    let mut s = session.lock();
    s.reset();
    let state = s.state()?;
    Ok(reply(StateBody { session_id: id, state }))
}

async fn solvable(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Solvable> {
    let session = app.session(&id)?;
    let s = session.lock();
    let invariant = s.sector()?;
    let target_invariant = bistable::flux::sector_in(s.complex(), s.target(), s.mode())?;
    let body = match s.solve()? {
        Reachability::Reachable { moves } => {
            Solvable { solvable: true, invariant, target_invariant, solution: Some(moves) }
        }
        Reachability::Unreachable { .. } => Solvable { solvable: false, invariant, target_invariant, solution: None },
    };
    Ok(reply(body))
}

async fn complexes() -> ApiResult<Catalog> {
    let complexes = CATALOG
        .iter()
        .filter(|e| e.board)
        .map(|entry| Ok(Board { entry, complex: build_system(&SystemSpec::new(entry.kind))?.complex().clone() }))
        .collect::<Result<_, Error>>()?;
    Ok(reply(Catalog { complexes }))
}

async fn fallback() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "not_found", "no such route")
}

/// The service router over the given state.
pub fn app(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/session", post(create))
        .route("/session/{id}", get(show))
        .route("/session/{id}/toggle", post(toggle))
        .route("/session/{id}/reset", post(reset))
        .route("/session/{id}/solvable", get(solvable))
        .route("/complexes", get(complexes))
        .fallback(fallback)
        .layer(CorsLayer::permissive())
        .with_state(state)
}

/// Serves until ctrl-c.
pub async fn serve(addr: SocketAddr, default_board: Option<String>) -> std::io::Result<()> {
    if let Some(b) = &default_board {
        board(b, BTreeMap::new()).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidInput, e.message))?;
    }
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, app(Arc::new(AppState::new(default_board))))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
