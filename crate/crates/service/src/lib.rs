//! HTTP service letting a person play the decision-maker against an expert.
//!
//! Endpoints (all JSON; errors are `{"code", "message"}`):
//!
//! | method | path                       | body / result                         |
//! |--------|----------------------------|---------------------------------------|
//! | POST   | `/sessions`                | [`CreateSession`] -> [`SessionView`]  |
//! | GET    | `/sessions/{id}`           | [`SessionView`]                       |
//! | POST   | `/sessions/{id}/decision`  | [`SubmitDecision`] -> [`Outcome`]     |
//! | GET    | `/sessions/{id}/debrief`   | [`Debrief`], finished sessions only   |
//! | GET    | `/export`                  | finished games as JSONL game logs     |
//!
//! See `API.md` next to this crate for the field-level schema.

pub mod api;
pub mod session;
pub mod store;

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use parking_lot::Mutex;
use persuasion::dataset::{write_game_logs, Corpus};
use persuasion::experts::{ExpertError, ExpertRegistry};
use tokio::sync::Semaphore;
use tower_http::cors::{AllowOrigin, CorsLayer};

pub use api::{CreateSession, Debrief, ErrorBody, Outcome, SessionView, SubmitDecision};
use session::{hotel_order, Event, Session, SessionError};
pub use store::{EventStore, StoreError};

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    /// Expert used when a request does not name one.
    pub default_expert: String,
    pub horizon: usize,
    /// Idle time after which a session is rejected as expired.
    pub ttl: Duration,
    /// Show the lottery result of rejected trials.
    pub lottery_visible: bool,
    /// Journal for crash recovery; in memory only when `None`.
    pub journal: Option<PathBuf>,
    /// Expert computations allowed to run at once.
    pub workers: usize,
    /// Browser origin allowed by CORS; any origin when `None`.
    pub cors_origin: Option<String>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            default_expert: "ae".into(),
            horizon: 10,
            ttl: Duration::from_secs(60 * 60),
            lottery_visible: true,
            journal: None,
            workers: 4,
            cors_origin: None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ServiceError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("journal replay failed for session {session}: {message}")]
    Replay { session: String, message: String },
    #[error("configuration error: {0}")]
    Config(String),
}

/// An error response.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            code,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ErrorBody {
            code: self.code.into(),
            message: self.message,
        };
        (self.status, Json(body)).into_response()
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let msg = e.to_string();
        match e {
            SessionError::WrongTrial { .. } => ApiError::new(StatusCode::CONFLICT, "wrong_trial", msg),
            SessionError::Conflict { .. } => ApiError::new(StatusCode::CONFLICT, "decision_conflict", msg),
            SessionError::NotFinished => ApiError::new(StatusCode::CONFLICT, "not_finished", msg),
            SessionError::Expert(_) | SessionError::Replay(_) => ApiError::internal(msg),
        }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "bad_request", e.body_text())
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        ApiError::internal(e.to_string())
    }
}

fn now_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis() as u64)
}

/// Shared service state.
pub struct Service {
    config: ServiceConfig,
    corpus: Corpus,
    experts: ExpertRegistry,
    sessions: Mutex<HashMap<String, Arc<Mutex<Session>>>>,
    store: Option<EventStore>,
    workers: Semaphore,
}

impl Service {
    /// Builds the service and replays the journal, if any.
    pub fn new(config: ServiceConfig, corpus: Corpus, experts: ExpertRegistry) -> Result<Arc<Service>, ServiceError> {
        if corpus.len() < config.horizon || config.horizon == 0 {
            return Err(ServiceError::Config(format!(
                "{} hotels cannot fill a {}-trial game",
                corpus.len(),
                config.horizon
            )));
        }
        if config.workers == 0 {
            return Err(ServiceError::Config("workers must be positive".into()));
        }
        let (store, events) = match &config.journal {
            Some(path) => {
                let (s, e) = EventStore::open(path)?;
                (Some(s), e)
            }
            None => (None, Vec::new()),
        };
        let service = Service {
            workers: Semaphore::new(config.workers),
            config,
            corpus,
            experts,
            sessions: Mutex::new(HashMap::new()),
            store,
        };
        service.replay(events)?;
        Ok(Arc::new(service))
    }

    fn replay(&self, events: Vec<Event>) -> Result<(), ServiceError> {
        let mut sessions = self.sessions.lock();
        for event in events {
            let fail = |message: String| ServiceError::Replay {
                session: event.session_id().to_string(),
                message,
            };
            match event.clone() {
                Event::Created {
                    session_id,
                    expert,
                    seed,
                    lottery_visible,
                    hotels,
                    first_review,
                    at_ms,
                } => {
                    let hotels = hotels
                        .iter()
                        .map(|id| self.corpus.hotel(id).cloned().ok_or_else(|| format!("unknown hotel {id}")))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(fail)?;
                    let e = self.experts.create(&expert).map_err(|e| fail(e.to_string()))?;
                    let s = Session::restore(session_id.clone(), expert, e, hotels, seed, lottery_visible, first_review, at_ms)
                        .map_err(|e| fail(e.to_string()))?;
                    sessions.insert(session_id, Arc::new(Mutex::new(s)));
                }
                Event::Decided {
                    session_id,
                    record,
                    next_review,
                    at_ms,
                } => {
                    let s = sessions.get(&session_id).ok_or_else(|| fail("decision before creation".into()))?;
                    s.lock().replay(record, next_review, at_ms).map_err(|e| fail(e.to_string()))?;
                }
            }
        }
        Ok(())
    }

    pub fn session_count(&self) -> usize {
        self.sessions.lock().len()
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        let s = self
            .sessions
            .lock()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "session_not_found", format!("no session {id}")))?;
        let idle = now_ms().saturating_sub(s.lock().last_active_ms());
        if u128::from(idle) > self.config.ttl.as_millis() {
            return Err(ApiError::new(
                StatusCode::GONE,
                "session_expired",
                format!("session {id} expired after {} s idle", self.config.ttl.as_secs()),
            ));
        }
        Ok(s)
    }

    fn record(&self, event: &Event) -> Result<(), ApiError> {
        if let Some(store) = &self.store {
            store.append(event)?;
        }
        Ok(())
    }

    /// Runs expert work on the blocking pool, at most `workers` at a time.
    async fn run<T: Send + 'static>(&self, f: impl FnOnce() -> T + Send + 'static) -> Result<T, ApiError> {
        let _permit = self.workers.acquire().await.map_err(|e| ApiError::internal(e.to_string()))?;
        tokio::task::spawn_blocking(f)
            .await
            .map_err(|e| ApiError::internal(e.to_string()))
    }
}

fn token() -> String {
    format!("{:032x}", rand::random::<u128>())
}

async fn create_session(
    State(svc): State<Arc<Service>>,
    body: Result<Json<CreateSession>, JsonRejection>,
) -> Result<(StatusCode, Json<SessionView>), ApiError> {
    let Json(req) = body?;
    let name = req.expert.unwrap_or_else(|| svc.config.default_expert.clone());
    let expert = svc.experts.create(&name).map_err(|e| match e {
        ExpertError::Unknown(_) => ApiError::new(StatusCode::NOT_FOUND, "unknown_expert", e.to_string()),
        ExpertError::Unavailable { .. } => ApiError::new(StatusCode::SERVICE_UNAVAILABLE, "expert_unavailable", e.to_string()),
        other => ApiError::internal(other.to_string()),
    })?;
    let seed = req.seed.unwrap_or_else(rand::random);
    let hotels = hotel_order(svc.corpus.hotels(), seed, svc.config.horizon);
    let visible = svc.config.lottery_visible;
    let id = token();
    let (session, event) = svc
        .run(move || Session::start(id, name, expert, hotels, seed, visible, now_ms()))
        .await??;
    svc.record(&event)?;
    let view = session.view();
    svc.sessions
        .lock()
        .insert(session.id().to_string(), Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_session(State(svc): State<Arc<Service>>, Path(id): Path<String>) -> Result<Json<SessionView>, ApiError> {
    let s = svc.session(&id)?;
    let view = s.lock().view();
    Ok(Json(view))
}

async fn submit_decision(
    State(svc): State<Arc<Service>>,
    Path(id): Path<String>,
    body: Result<Json<SubmitDecision>, JsonRejection>,
) -> Result<Json<Outcome>, ApiError> {
    let Json(req) = body?;
    let s = svc.session(&id)?;
    // The lock is held for the whole decision, so requests for one session
    // are serialized while other sessions proceed.
    let svc2 = svc.clone();
    svc.run(move || {
        let mut session = s.lock();
        let (outcome, event) = session.decide(req.trial, req.decision, now_ms())?;
        if let Some(e) = event {
            svc2.record(&e)?;
        }
        Ok::<_, ApiError>(outcome)
    })
    .await?
    .map(Json)
}

async fn debrief(State(svc): State<Arc<Service>>, Path(id): Path<String>) -> Result<Json<Debrief>, ApiError> {
    let s = svc.session(&id)?;
    let d = s.lock().debrief()?;
    Ok(Json(d))
}

/// Logs of finished sessions. Unfinished ones are left out: their records
/// carry scores the player must not see before the debrief.
async fn export(State(svc): State<Arc<Service>>) -> Response {
    let sessions: Vec<Arc<Mutex<Session>>> = svc.sessions.lock().values().cloned().collect();
    let mut logs: Vec<_> = sessions
        .iter()
        .map(|s| s.lock())
        .filter(|s| s.is_finished())
        .map(|s| s.to_log())
        .collect();
    logs.sort_by(|a, b| a.game_id.cmp(&b.game_id));
    (
        [(header::CONTENT_TYPE, HeaderValue::from_static("application/x-ndjson"))],
        write_game_logs(&logs),
    )
        .into_response()
}

async fn not_found() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "not_found", "no such endpoint")
}

/// The service's routes with CORS applied.
pub fn router(svc: Arc<Service>) -> Router {
    let origin = match &svc.config.cors_origin {
        Some(o) => match HeaderValue::from_str(o) {
            Ok(v) => AllowOrigin::exact(v),
            Err(_) => AllowOrigin::any(),
        },
        None => AllowOrigin::any(),
    };
    let cors = CorsLayer::new()
        .allow_origin(origin)
        .allow_methods([axum::http::Method::GET, axum::http::Method::POST])
        .allow_headers([header::CONTENT_TYPE]);
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/decision", post(submit_decision))
        .route("/sessions/{id}/debrief", get(debrief))
        .route("/export", get(export))
        .fallback(not_found)
        .layer(cors)
        .with_state(svc)
}

/// Serves until the listener fails or `shutdown` resolves.
pub async fn serve(
    svc: Arc<Service>,
    listener: tokio::net::TcpListener,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(svc)).with_graceful_shutdown(shutdown).await
}
