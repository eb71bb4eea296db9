//! Session-based JSON API for an interactive flip explorer.
//!
//! A session holds an initial seed, the current seed and the flip history. Every
//! mutation bumps a version; a request carrying an older `version` is refused with 409.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::sync::RwLock;
use tower_http::cors::{Any, CorsLayer};

use crate::cli::{resolve_seed, seed_from_json};
use crate::cluster::Seed;
use crate::geometry::{Chord, CsPair, Dn};

/// Largest rank a session or flip graph request may ask for.
pub const MAX_RANK: usize = 8;

#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError { status, message: message.into() }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({"error": self.message}))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

struct Session {
    dn: Dn,
    initial: Seed,
    seed: Seed,
    history: Vec<(CsPair, CsPair)>,
    version: u64,
}

/// What persistence stores: enough to replay a session.
#[derive(Serialize, Deserialize)]
struct StoredSession {
    n: usize,
    initial: Value,
    history: Vec<(CsPair, CsPair)>,
    version: u64,
}

#[derive(Clone, Default)]
pub struct AppState {
    sessions: Arc<RwLock<HashMap<String, Session>>>,
    persist: Option<PathBuf>,
}

impl AppState {
    pub fn new(persist: Option<PathBuf>) -> AppState {
        AppState { sessions: Arc::default(), persist }
    }

    /// Loads persisted sessions by replaying their histories.
    pub fn load(persist: PathBuf) -> std::io::Result<AppState> {
        let mut map = HashMap::new();
        if persist.exists() {
            let text = std::fs::read_to_string(&persist)?;
            let stored: HashMap<String, StoredSession> =
                serde_json::from_str(&text).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
            for (id, st) in stored {
                let bad = |m: String| std::io::Error::new(std::io::ErrorKind::InvalidData, m);
                let dn = Dn::new(st.n).map_err(|e| bad(e.to_string()))?;
                let initial = seed_from_json(&dn, &st.initial).map_err(|e| bad(e.to_string()))?;
                let mut seed = initial.clone();
                for (chi, new) in &st.history {
                    let (next, got) = seed.mutate(&dn, chi).map_err(|e| bad(e.to_string()))?;
                    if got != *new {
                        return Err(bad(format!("history of session {} does not replay", id)));
                    }
                    seed = next;
                }
                map.insert(id, Session { dn, initial, seed, history: st.history, version: st.version });
            }
        }
        Ok(AppState { sessions: Arc::new(RwLock::new(map)), persist: Some(persist) })
    }

    async fn save(&self) {
        let Some(path) = &self.persist else { return };
        let sessions = self.sessions.read().await;
        let stored: HashMap<&String, StoredSession> = sessions
            .iter()
            .map(|(id, s)| {
                let initial = json!({
                    "n": s.dn.n(),
                    "chords": crate::cluster::variable_order(&s.initial).iter().map(|p| p.rep).collect::<Vec<Chord>>(),
                    "names": s.initial.names,
                });
                (id, StoredSession { n: s.dn.n(), initial, history: s.history.clone(), version: s.version })
            })
            .collect();
        match serde_json::to_string_pretty(&stored) {
            Ok(text) => {
                if let Err(e) = std::fs::write(path, text) {
                    log::warn!("cannot persist sessions to {}: {}", path.display(), e);
                }
            }
            Err(e) => log::warn!("cannot serialize sessions: {}", e),
        }
    }
}

fn state_json(id: &str, s: &Session) -> Value {
    let dn = &s.dn;
    let names = &s.seed.names;
    let flips: Vec<Value> = s
        .seed
        .t
        .pairs
        .iter()
        .filter_map(|chi| {
            let (next, new) = s.seed.mutate(dn, chi).ok()?;
            Some(json!({
                "pair": chi,
                "name": chi.to_string(),
                "replacement": new,
                "replacementName": new.to_string(),
                "preview": next.var(&new).to_fraction_string(names),
            }))
        })
        .collect();
    json!({
        "sessionId": id,
        "version": s.version,
        "n": dn.n(),
        "pseudotriangulation": s.seed.t,
        "classification": dn.classify(&s.seed.t),
        "names": names,
        "variables": s.seed.variables_json(),
        "quiver": s.seed.quiver.to_json(),
        "flips": flips,
        "history": s.history.iter().map(|(a, b)| json!({"removed": a, "added": b})).collect::<Vec<_>>(),
    })
}

fn parse_body(body: &Bytes) -> ApiResult<Value> {
    if body.is_empty() {
        return Ok(json!({}));
    }
    let v: Value = serde_json::from_slice(body).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, format!("malformed JSON: {}", e)))?;
    if !v.is_object() {
        return Err(ApiError::new(StatusCode::BAD_REQUEST, "body must be a JSON object"));
    }
    Ok(v)
}

fn bad(m: impl ToString) -> ApiError {
    ApiError::new(StatusCode::BAD_REQUEST, m.to_string())
}

fn check_version(body: &Value, s: &Session) -> ApiResult<()> {
    match body.get("version") {
        None | Some(Value::Null) => Ok(()),
        Some(v) => {
            let v = v.as_u64().ok_or_else(|| bad("version must be a non-negative integer"))?;
            if v != s.version {
                Err(ApiError::new(StatusCode::CONFLICT, format!("stale version {}; current is {}", v, s.version)))
            } else {
                Ok(())
            }
        }
    }
}

/// A pair named by a chord string, a chord object, or a pair object.
fn parse_pair(dn: &Dn, v: &Value) -> ApiResult<CsPair> {
    let chord: Chord = match v {
        Value::String(s) => s.parse().map_err(bad)?,
        Value::Object(o) if o.contains_key("rep") => serde_json::from_value(o["rep"].clone()).map_err(bad)?,
        Value::Object(_) => serde_json::from_value(v.clone()).map_err(bad)?,
        _ => return Err(bad("pair must be a chord name or object")),
    };
    let chord = dn.canonical(chord).map_err(bad)?;
    Ok(dn.pair_of(chord))
}

async fn create(State(app): State<AppState>, body: Bytes) -> ApiResult<(StatusCode, Json<Value>)> {
    let body = parse_body(&body)?;
    let n = body.get("n").and_then(Value::as_u64).ok_or_else(|| bad("n is required"))? as usize;
    if n > MAX_RANK {
        return Err(bad(format!("n must be at most {}", MAX_RANK)));
    }
    let dn = Dn::new(n).map_err(bad)?;
    let seed = match body.get("seed") {
        None | Some(Value::Null) => resolve_seed(&dn, "star-left"),
        Some(Value::String(name)) if !name.ends_with(".json") => resolve_seed(&dn, name),
        Some(v @ Value::Object(_)) => seed_from_json(&dn, v),
        Some(_) => return Err(bad("seed must be a name or a JSON object")),
    }
    .map_err(bad)?;
    let id = uuid::Uuid::new_v4().to_string();
    let session = Session { dn, initial: seed.clone(), seed, history: vec![], version: 0 };
    let state = state_json(&id, &session);
    app.sessions.write().await.insert(id.clone(), session);
    app.save().await;
    Ok((StatusCode::CREATED, Json(json!({"sessionId": id, "state": state}))))
}

fn not_found(id: &str) -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, format!("no session {}", id))
}

async fn show(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let sessions = app.sessions.read().await;
    let s = sessions.get(&id).ok_or_else(|| not_found(&id))?;
    Ok(Json(state_json(&id, s)))
}

async fn flip(State(app): State<AppState>, Path(id): Path<String>, body: Bytes) -> ApiResult<Json<Value>> {
    let body = parse_body(&body)?;
    let out = {
        let mut sessions = app.sessions.write().await;
        let s = sessions.get_mut(&id).ok_or_else(|| not_found(&id))?;
        let pair = body.get("pair").ok_or_else(|| bad("pair is required"))?;
        let chi = parse_pair(&s.dn, pair)?;
        check_version(&body, s)?;
        if !s.seed.t.contains(&chi) {
            return Err(ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, format!("{} is not in the current cluster", chi)));
        }
        let (next, new) = s.seed.mutate(&s.dn, &chi).map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
        s.seed = next;
        s.history.push((chi, new));
        s.version += 1;
        state_json(&id, s)
    };
    app.save().await;
    Ok(Json(out))
}

async fn undo(State(app): State<AppState>, Path(id): Path<String>, body: Bytes) -> ApiResult<Json<Value>> {
    let body = parse_body(&body)?;
    let out = {
        let mut sessions = app.sessions.write().await;
        let s = sessions.get_mut(&id).ok_or_else(|| not_found(&id))?;
        check_version(&body, s)?;
        let (_, added) = *s.history.last().ok_or_else(|| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "nothing to undo"))?;
        let (prev, _) = s.seed.mutate(&s.dn, &added).map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
        s.seed = prev;
        s.history.pop();
        s.version += 1;
        state_json(&id, s)
    };
    app.save().await;
    Ok(Json(out))
}

async fn variables(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let sessions = app.sessions.read().await;
    let s = sessions.get(&id).ok_or_else(|| not_found(&id))?;
    Ok(Json(json!({"version": s.version, "names": s.seed.names, "variables": s.seed.variables_json()})))
}

async fn quiver(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let sessions = app.sessions.read().await;
    let s = sessions.get(&id).ok_or_else(|| not_found(&id))?;
    Ok(Json(json!({"version": s.version, "quiver": s.seed.quiver.to_json(), "dot": s.seed.quiver.to_dot()})))
}

#[derive(Deserialize)]
struct GraphQuery {
    n: Option<String>,
}

async fn flipgraph(Query(q): Query<GraphQuery>) -> ApiResult<Json<Value>> {
    let n: usize = q.n.as_deref().ok_or_else(|| bad("query parameter n is required"))?.parse().map_err(|_| bad("n must be an integer"))?;
    if n > 7 {
        return Err(bad("flip graphs are served for n <= 7"));
    }
    let dn = Dn::new(n).map_err(bad)?;
    let g = tokio::task::spawn_blocking(move || dn.enumerate(1))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    Ok(Json(g.to_json()))
}

pub fn router(app: AppState) -> Router {
    let cors = CorsLayer::new().allow_origin(Any).allow_methods(Any).allow_headers(Any);
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(show))
        .route("/sessions/{id}/flip", post(flip))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/variables", get(variables))
        .route("/sessions/{id}/quiver", get(quiver))
        .route("/meta/flipgraph", get(flipgraph))
        .layer(cors)
        .with_state(app)
}

pub async fn serve(host: &str, port: u16, persist: Option<PathBuf>) -> std::io::Result<()> {
    let app = match persist {
        Some(p) => AppState::load(p)?,
        None => AppState::new(None),
    };
    let listener = tokio::net::TcpListener::bind((host, port)).await?;
    log::info!("listening on {}", listener.local_addr()?);
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(app))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
