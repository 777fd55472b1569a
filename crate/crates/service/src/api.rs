//! HTTP endpoints. Every handler is a thin projection of a library call on one snapshot.

use std::collections::BTreeMap;
use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use ciro_core::query::{
    co_attendees, find_intersections, neighborhood, IntersectionScope, OverlapMode, DEFAULT_FANOUT,
};
use ciro_core::rdf::{parse_date_time, parse_turtle, serialize_turtle, Graph, Term, Triple};
use ciro_core::reasoner::Classification;
use ciro_core::risk::Dimension;
use serde::Deserialize;
use serde_json::{json, Value};
use tower_http::services::ServeDir;

use crate::error::ApiError;
use crate::event_doc::EventDocument;
use crate::names;
use crate::state::AppState;

const TURTLE: &str = "text/turtle";

pub fn router(state: Arc<AppState>) -> Router {
    let ui = state.ui_dir.clone();
    let r = Router::new()
        .route("/import", post(import))
        .route("/events", post(post_event))
        .route("/reason", post(reason))
        .route("/save", post(save))
        .route("/events/{id}/risk", get(event_risk))
        .route("/queries/intersections", get(intersections))
        .route("/queries/co-attendees", get(co_attendees_handler))
        .route("/graph", get(export_graph))
        .route("/graph/neighborhood", get(neighborhood_handler))
        .route("/vocabulary", get(vocabulary))
        .method_not_allowed_fallback(|| async {
            ApiError::new(StatusCode::METHOD_NOT_ALLOWED, "method-not-allowed", "method not allowed on this path")
        })
        .with_state(state);
    match ui {
        Some(dir) => r.fallback_service(ServeDir::new(dir)),
        None => r.fallback(|| async { ApiError::not_found("no-route", "no such endpoint") }),
    }
}

fn wants_turtle(headers: &HeaderMap) -> bool {
    headers
        .get(header::ACCEPT)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.split(',').any(|m| m.trim().starts_with(TURTLE)))
}

fn turtle(graph: &Graph) -> Response {
    ([(header::CONTENT_TYPE, "text/turtle; charset=utf-8")], serialize_turtle(graph)).into_response()
}

fn query_params<T>(q: Result<Query<T>, QueryRejection>) -> Result<T, ApiError> {
    q.map(|Query(t)| t).map_err(|e| ApiError::bad_request("invalid-query", e.body_text()))
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError::internal(e.to_string()))
}

async fn import(State(state): State<Arc<AppState>>, body: String) -> Result<Json<Value>, ApiError> {
    let parsed = blocking(move || parse_turtle(&body)).await??;
    let added = state.write(|g| g.merge(&parsed));
    Ok(Json(json!({ "added": added, "triples": state.snapshot().asserted.len() })))
}

async fn post_event(
    State(state): State<Arc<AppState>>,
    body: Result<Json<EventDocument>, JsonRejection>,
) -> Result<(StatusCode, Json<Value>), ApiError> {
    let Json(doc) = body.map_err(|e| ApiError::bad_request("invalid-event", e.body_text()))?;
    let (event, g) = doc.to_graph()?;
    let added = state.write(|store| store.merge(&g));
    Ok((StatusCode::CREATED, Json(json!({ "event": event, "added": added }))))
}

/// Level counts and diagnostics of a classification, as returned by `POST /reason`.
pub fn reason_summary(c: &Classification) -> Value {
    let counts: BTreeMap<String, _> =
        Dimension::ALL.into_iter().map(|d| (d.to_string(), c.event_level_counts(d))).collect();
    json!({
        "events": c.events().count(),
        "situations": c.situations().count(),
        "inferred_triples": c.inferred.len(),
        "counts": counts,
        "diagnostics": c.diagnostics,
    })
}

async fn reason(State(state): State<Arc<AppState>>) -> Result<Json<Value>, ApiError> {
    let c = blocking(move || state.reason()).await??;
    Ok(Json(reason_summary(&c)))
}

async fn save(State(state): State<Arc<AppState>>) -> Result<Json<Value>, ApiError> {
    let Some(path) = state.store_path.clone() else {
        return Err(ApiError::conflict("no-store-path", "server was started without a store file"));
    };
    let snap = state.snapshot();
    std::fs::write(&path, serialize_turtle(&snap.asserted))
        .map_err(|e| ApiError::internal(format!("{}: {e}", path.display())))?;
    Ok(Json(json!({ "path": path, "triples": snap.asserted.len() })))
}

async fn event_risk(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let iri = names::entity(&id)?;
    let snap = state.snapshot();
    if !snap.asserted.mentions(&Term::Iri(iri.clone())) {
        return Err(ApiError::not_found("unknown-iri", format!("{iri} does not occur in the store")));
    }
    let c = snap.require_classification()?;
    match c.get(&iri) {
        Some(a) => Ok(Json(a).into_response()),
        None => Err(ApiError::not_found("not-an-event", format!("{iri} is neither an event nor a situation"))),
    }
}

#[derive(Debug, Default, Deserialize)]
pub struct IntersectionParams {
    pub place: Option<String>,
    pub city: Option<String>,
    pub from: Option<String>,
    pub to: Option<String>,
    pub mode: Option<String>,
}

impl IntersectionParams {
    pub fn scope(&self) -> Result<IntersectionScope, ApiError> {
        let time = |s: &String| {
            parse_date_time(s).ok_or_else(|| ApiError::bad_request("invalid-time", format!("`{s}` is not an xsd:dateTime")))
        };
        let window = match (&self.from, &self.to) {
            (Some(f), Some(t)) => Some((time(f)?, time(t)?)),
            (None, None) => None,
            _ => return Err(ApiError::bad_request("invalid-query", "`from` and `to` go together")),
        };
        let mode = match &self.mode {
            Some(m) => m.parse::<OverlapMode>().map_err(|e| ApiError::bad_request("invalid-query", e.to_string()))?,
            None => OverlapMode::default(),
        };
        Ok(IntersectionScope {
            place: self.place.as_deref().map(names::entity).transpose()?,
            city: self.city.clone(),
            window,
            mode,
        })
    }
}

async fn intersections(
    State(state): State<Arc<AppState>>,
    q: Result<Query<IntersectionParams>, QueryRejection>,
) -> Result<Json<Value>, ApiError> {
    let scope = query_params(q)?.scope()?;
    let snap = state.snapshot();
    let rows = blocking(move || find_intersections(&snap.asserted, &scope)).await?;
    Ok(Json(json!(rows)))
}

#[derive(Debug, Deserialize)]
struct CoAttendeeParams {
    person: String,
    risk: String,
}

async fn co_attendees_handler(
    State(state): State<Arc<AppState>>,
    q: Result<Query<CoAttendeeParams>, QueryRejection>,
) -> Result<Json<Value>, ApiError> {
    let p = query_params(q)?;
    let snap = state.snapshot();
    let person = names::person(&snap.asserted, &p.person)?;
    let risk = names::term(&p.risk)?;
    let out = co_attendees(&snap.layers(), &state.vocab, &person, &risk)?;
    Ok(Json(json!({ "person": person, "risk": risk, "rows": out.rows, "diagnostics": out.diagnostics })))
}

#[derive(Debug, Deserialize)]
struct NeighborhoodParams {
    center: String,
    depth: Option<usize>,
    limit: Option<usize>,
}

async fn neighborhood_handler(
    State(state): State<Arc<AppState>>,
    headers: HeaderMap,
    q: Result<Query<NeighborhoodParams>, QueryRejection>,
) -> Result<Response, ApiError> {
    let p = query_params(q)?;
    let center = names::entity(&p.center)?;
    let snap = state.snapshot();
    let n = neighborhood(
        &snap.layers(),
        snap.classification.as_deref(),
        &center,
        p.depth.unwrap_or(1),
        p.limit.unwrap_or(DEFAULT_FANOUT),
    )?;
    if wants_turtle(&headers) {
        let mut g = Graph::new();
        for e in &n.edges {
            g.insert(Triple::new(e.subject.clone(), e.predicate.clone(), e.object.clone()));
        }
        return Ok(turtle(&g));
    }
    Ok(Json(n).into_response())
}

#[derive(Debug, Deserialize)]
struct GraphParams {
    layer: Option<String>,
}

/// The asserted graph; `?layer=inferred` or `?layer=all` for the inference layer or the union.
async fn export_graph(
    State(state): State<Arc<AppState>>,
    q: Result<Query<GraphParams>, QueryRejection>,
) -> Result<Response, ApiError> {
    let p = query_params(q)?;
    let snap = state.snapshot();
    let g = match p.layer.as_deref().unwrap_or("asserted") {
        "asserted" => (*snap.asserted).clone(),
        "inferred" => snap.require_classification()?.inferred.clone(),
        "all" => {
            let mut g = (*snap.asserted).clone();
            g.merge(&snap.require_classification()?.inferred);
            g
        }
        other => return Err(ApiError::bad_request("invalid-query", format!("unknown layer `{other}`"))),
    };
    Ok(turtle(&g))
}

async fn vocabulary(State(state): State<Arc<AppState>>, headers: HeaderMap) -> Response {
    if wants_turtle(&headers) {
        return turtle(&state.vocab.to_graph());
    }
    Json(state.vocab.registry()).into_response()
}
