use std::sync::Arc;

use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use ciro_core::datagen::DEMO_TURTLE;
use ciro_core::query::{co_attendees, find_intersections, neighborhood, IntersectionScope};
use ciro_core::rdf::{ns, parse_turtle, Graph, Layers};
use ciro_core::reasoner::classify_all;
use ciro_core::vocab::Vocabulary;
use ciro_service::api::router;
use ciro_service::AppState;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

fn app_with(graph: Graph) -> (Arc<AppState>, Router) {
    let state = Arc::new(AppState::new(graph, Vocabulary::standard()));
    (state.clone(), router(state))
}

async fn send(app: &Router, method: Method, uri: &str, body: Option<(&str, String)>) -> (StatusCode, Vec<u8>) {
    let mut req = Request::builder().method(method).uri(uri);
    let body = match body {
        Some((ct, b)) => {
            req = req.header(header::CONTENT_TYPE, ct);
            Body::from(b)
        }
        None => Body::empty(),
    };
    let resp = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = resp.status();
    (status, resp.into_body().collect().await.unwrap().to_bytes().to_vec())
}

async fn json_of(app: &Router, method: Method, uri: &str, body: Option<(&str, String)>) -> (StatusCode, Value) {
    let (s, b) = send(app, method, uri, body).await;
    (s, serde_json::from_slice(&b).unwrap_or_else(|_| panic!("not JSON: {}", String::from_utf8_lossy(&b))))
}

fn assert_api_error(v: &Value, code: &str) {
    assert_eq!(v["code"], code, "{v}");
    assert!(v["message"].is_string());
}

fn dinner() -> Value {
    json!({
        "id": "event_a1",
        "agents": ["person_a_A", "person_b_B", "person_c_C"],
        "location": "restaurant_a1",
        "location_types": ["Restaurant"],
        "contexts": ["relax"],
        "time": { "begin": "2020-04-01T12:00:00", "end": "2020-04-01T13:00:00" }
    })
}

#[tokio::test]
async fn posted_dinner_is_high_closeness() {
    let (_, app) = app_with(Graph::new());
    let (s, v) = json_of(&app, Method::POST, "/events", Some(("application/json", dinner().to_string()))).await;
    assert_eq!(s, StatusCode::CREATED, "{v}");
    let (s, v) = json_of(&app, Method::POST, "/reason", None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["events"], 1);
    let (s, v) = json_of(&app, Method::GET, "/events/event_a1/risk", None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["closeness"], "high");
}

#[tokio::test]
async fn posted_event_equals_turtle_import() {
    let (_, app) = app_with(Graph::new());
    send(&app, Method::POST, "/events", Some(("application/json", dinner().to_string()))).await;
    let ttl = r#"
        @prefix id: <http://plod.info/rdf/id/> .
        id:event_a1 a schema:Event ;
            plod:agent id:person_a_A, id:person_b_B, id:person_c_C ;
            schema:location id:restaurant_a1 ;
            plod:context plod:relax ;
            plod:time id:event_a1_time .
        id:restaurant_a1 a plod:Restaurant .
        id:event_a1_time a time:TemporalEntity ;
            time:hasBeginning "2020-04-01T12:00:00"^^xsd:dateTime ;
            time:hasEnd "2020-04-01T13:00:00"^^xsd:dateTime .
    "#;
    let (s2, app2) = app_with(Graph::new());
    let (s, _) = send(&app2, Method::POST, "/import", Some((
        "text/turtle",
        ttl.to_string(),
    )))
    .await;
    assert_eq!(s, StatusCode::OK);
    let a = json_of(&app, Method::POST, "/reason", None).await.1;
    let b = json_of(&app2, Method::POST, "/reason", None).await.1;
    assert_eq!(a, b);
    let ra = json_of(&app, Method::GET, "/events/event_a1/risk", None).await.1;
    let rb = json_of(&app2, Method::GET, "/events/event_a1/risk", None).await.1;
    assert_eq!(ra, rb);
    assert_eq!(s2.snapshot().asserted.len(), parse_turtle(ttl).unwrap().len());
}

#[tokio::test]
async fn error_statuses() {
    let (_, app) = app_with(Graph::new());
    let (s, v) = json_of(&app, Method::POST, "/reason", None).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_api_error(&v, "empty-store");

    let (s, v) = json_of(&app, Method::POST, "/import", Some(("text/turtle", "id:x plod:p".into()))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_api_error(&v, "parse-error");

    let (s, v) = json_of(&app, Method::POST, "/events", Some(("application/json", "{\"agents\": 3}".into()))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_api_error(&v, "invalid-event");

    send(&app, Method::POST, "/import", Some(("text/turtle", DEMO_TURTLE.into()))).await;
    let (s, v) = json_of(&app, Method::GET, "/events/event_a1/risk", None).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_api_error(&v, "not-reasoned");

    send(&app, Method::POST, "/reason", None).await;
    let (s, v) = json_of(&app, Method::GET, "/events/no_such_event/risk", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_api_error(&v, "unknown-iri");

    let (s, v) = json_of(&app, Method::GET, "/queries/co-attendees?person=A&risk=NotARisk", None).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_api_error(&v, "unknown-risk-class");

    let (s, v) = json_of(&app, Method::GET, "/queries/co-attendees?person=Nobody&risk=ClosedSpace", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_api_error(&v, "unknown-iri");

    let (s, v) = json_of(&app, Method::GET, "/graph/neighborhood?center=nowhere", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_api_error(&v, "unknown-iri");

    let (s, v) = json_of(&app, Method::GET, "/graph/neighborhood", None).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_api_error(&v, "invalid-query");

    let (s, v) = json_of(&app, Method::GET, "/nope", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_api_error(&v, "no-route");

    let (s, v) = json_of(&app, Method::GET, "/reason", None).await;
    assert_eq!(s, StatusCode::METHOD_NOT_ALLOWED);
    assert_api_error(&v, "method-not-allowed");
}

#[tokio::test]
async fn writes_drop_the_inference_layer() {
    let (state, app) = app_with(parse_turtle(DEMO_TURTLE).unwrap());
    send(&app, Method::POST, "/reason", None).await;
    assert!(state.snapshot().classification.is_some());
    send(&app, Method::POST, "/events", Some(("application/json", json!({"id": "event_new"}).to_string()))).await;
    assert!(state.snapshot().classification.is_none());
}

#[tokio::test]
async fn queries_equal_library_calls() {
    let graph = parse_turtle(DEMO_TURTLE).unwrap();
    let vocab = Vocabulary::standard();
    let c = classify_all(&graph, &vocab);
    let layers = Layers::new(&graph, Some(&c.inferred));
    let (_, app) = app_with(graph.clone());
    send(&app, Method::POST, "/reason", None).await;

    let (s, v) = json_of(&app, Method::GET, "/queries/intersections", None).await;
    assert_eq!(s, StatusCode::OK);
    let lib = find_intersections(&graph, &IntersectionScope::default());
    assert_eq!(v, serde_json::to_value(&lib).unwrap());
    let bar = |a: &str, b: &str| {
        v.as_array().unwrap().iter().any(|r| {
            r["event1"] == ns::id(a).as_str() && r["event2"] == ns::id(b).as_str() && r["city1"] == "minato-ku"
        })
    };
    assert!(bar("event_c16", "event_a21") && bar("event_a21", "event_c16"));

    let (_, v) = json_of(&app, Method::GET, "/queries/intersections?city=minato-ku&mode=possible", None).await;
    let scope = IntersectionScope { city: Some("minato-ku".into()), mode: "possible".parse().unwrap(), ..Default::default() };
    assert_eq!(v, serde_json::to_value(find_intersections(&graph, &scope)).unwrap());

    let (s, v) = json_of(&app, Method::GET, "/queries/co-attendees?person=A&risk=ClosedSpace", None).await;
    assert_eq!(s, StatusCode::OK);
    let lib = co_attendees(&layers, &vocab, &ns::id("person_a_A"), &ns::plod("ClosedSpace")).unwrap();
    assert_eq!(v["rows"], serde_json::to_value(&lib.rows).unwrap());
    assert!(!lib.rows.is_empty());
    let counts: Vec<u64> = v["rows"].as_array().unwrap().iter().map(|r| r["cnt"].as_u64().unwrap()).collect();
    assert!(counts.windows(2).all(|w| w[0] >= w[1]));

    let (s, v) = json_of(&app, Method::GET, "/graph/neighborhood?center=event_a1&depth=2&limit=10", None).await;
    assert_eq!(s, StatusCode::OK);
    let lib = neighborhood(&layers, Some(&c), &ns::id("event_a1"), 2, 10).unwrap();
    assert_eq!(v, serde_json::to_value(&lib).unwrap());

    let (_, v) = json_of(&app, Method::GET, "/events/event_a1/risk", None).await;
    assert_eq!(v, serde_json::to_value(c.get(&ns::id("event_a1")).unwrap()).unwrap());
}

#[tokio::test]
async fn dinner_neighborhood_shows_people_and_badged_restaurant() {
    let (_, app) = app_with(parse_turtle(DEMO_TURTLE).unwrap());
    send(&app, Method::POST, "/reason", None).await;
    let (_, v) = json_of(&app, Method::GET, "/graph/neighborhood?center=event_a1", None).await;
    let ids: Vec<&str> = v["nodes"].as_array().unwrap().iter().filter_map(|n| n["id"]["value"].as_str()).collect();
    for p in ["person_a_A", "person_b_B", "person_c_C", "restaurant_a1"] {
        assert!(ids.contains(&ns::id(p).as_str()), "{p} missing from {ids:?}");
    }
    let center = v["nodes"].as_array().unwrap().iter().find(|n| n["id"]["value"] == ns::id("event_a1").as_str()).unwrap();
    assert_eq!(center["badge"]["closeness"], "high");
}

#[tokio::test]
async fn turtle_exports() {
    let (_, app) = app_with(parse_turtle(DEMO_TURTLE).unwrap());
    let (s, body) = send(&app, Method::GET, "/graph", None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(String::from_utf8(body).unwrap(), DEMO_TURTLE);

    let req = Request::get("/graph/neighborhood?center=event_a1").header(header::ACCEPT, "text/turtle").body(Body::empty());
    let resp = app.clone().oneshot(req.unwrap()).await.unwrap();
    assert!(resp.headers()[header::CONTENT_TYPE].to_str().unwrap().starts_with("text/turtle"));
    let text = String::from_utf8(resp.into_body().collect().await.unwrap().to_bytes().to_vec()).unwrap();
    assert!(parse_turtle(&text).unwrap().len() > 3);

    let (s, v) = json_of(&app, Method::GET, "/graph?layer=inferred", None).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_api_error(&v, "not-reasoned");
}

#[tokio::test]
async fn vocabulary_document() {
    let (_, app) = app_with(Graph::new());
    let (s, v) = json_of(&app, Method::GET, "/vocabulary", None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["thresholds"]["duration-threshold"], 15.0);
    assert!(v["classes"].as_object().unwrap().contains_key(ns::plod("ClosedSpace").as_str()));
}

#[tokio::test]
async fn serves_ui_bundle() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<html>explorer</html>").unwrap();
    let mut state = AppState::new(Graph::new(), Vocabulary::standard());
    state.ui_dir = Some(dir.path().to_path_buf());
    let app = router(Arc::new(state));
    let (s, body) = send(&app, Method::GET, "/index.html", None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(body, b"<html>explorer</html>");
    let (s, _) = send(&app, Method::GET, "/vocabulary", None).await;
    assert_eq!(s, StatusCode::OK);
}

#[tokio::test]
async fn save_writes_the_store() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("store.ttl");
    let mut state = AppState::new(parse_turtle(DEMO_TURTLE).unwrap(), Vocabulary::standard());
    state.store_path = Some(path.clone());
    let app = router(Arc::new(state));
    let (s, _) = send(&app, Method::POST, "/save", None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(std::fs::read_to_string(path).unwrap(), DEMO_TURTLE);
}
