use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use pseudotri::laurent::LaurentPoly;
use pseudotri::service::{router, AppState};
use serde_json::{json, Value};
use tower::ServiceExt;

async fn send(app: &axum::Router, method: &str, uri: &str, body: Option<&str>) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map(|b| Body::from(b.to_string())).unwrap_or_else(Body::empty))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let v = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, v)
}

async fn new_session(app: &axum::Router, body: &str) -> (String, Value) {
    let (status, v) = send(app, "POST", "/sessions", Some(body)).await;
    assert_eq!(status, StatusCode::CREATED, "{}", v);
    (v["sessionId"].as_str().unwrap().to_string(), v["state"].clone())
}

fn var_of(state: &Value, name: &str) -> LaurentPoly {
    let row = state["variables"].as_array().unwrap().iter().find(|r| r["name"] == name).unwrap_or_else(|| panic!("{} in {}", name, state));
    LaurentPoly::from_json(&row["json"]).unwrap()
}

/// State without the fields that record how it was reached.
fn content(state: &Value) -> Value {
    let mut s = state.clone();
    s.as_object_mut().unwrap().remove("version");
    s.as_object_mut().unwrap().remove("history");
    s
}

#[tokio::test]
async fn create_flip_undo() {
    let app = router(AppState::new(None));
    let (id, state) = new_session(&app, r#"{"n": 3, "seed": "central:0"}"#).await;
    assert_eq!(state["pseudotriangulation"]["pairs"].as_array().unwrap().len(), 3);
    assert_eq!(state["flips"].as_array().unwrap().len(), 3);
    assert_eq!(state["classification"], json!({"type": "central", "p": 0}));

    let before = var_of(&state, "0L");
    let straight = var_of(&state, "[0,2]");
    let (status, after) = send(&app, "POST", &format!("/sessions/{}/flip", id), Some(r#"{"pair": "0L"}"#)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(after["version"], 1);
    // the removed central variable times the new one is the straight variable plus one
    let new = var_of(&after, "2R");
    assert_eq!(&before * &new, &straight + &LaurentPoly::one(3));

    let (status, undone) = send(&app, "POST", &format!("/sessions/{}/undo", id), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(undone["version"], 2);
    assert_eq!(content(&undone), content(&state));
    let (_, shown) = send(&app, "GET", &format!("/sessions/{}", id), None).await;
    assert_eq!(shown, undone);
}

#[tokio::test]
async fn previews_match_flips() {
    let app = router(AppState::new(None));
    let (id, state) = new_session(&app, r#"{"n": 4, "seed": "star-right"}"#).await;
    for f in state["flips"].as_array().unwrap().clone() {
        let body = json!({"pair": f["pair"]}).to_string();
        let (status, after) = send(&app, "POST", &format!("/sessions/{}/flip", id), Some(&body)).await;
        assert_eq!(status, StatusCode::OK);
        let name = f["replacementName"].as_str().unwrap();
        let row = after["variables"].as_array().unwrap().iter().find(|r| r["name"] == name).unwrap().clone();
        assert_eq!(row["fraction"], f["preview"]);
        let (status, _) = send(&app, "POST", &format!("/sessions/{}/undo", id), Some("{}")).await;
        assert_eq!(status, StatusCode::OK);
    }
}

#[tokio::test]
async fn variables_quiver_and_flip_graph() {
    let app = router(AppState::new(None));
    let (id, _) = new_session(&app, r#"{"n": 3, "seed": {"chords": ["1R", "0R", "[1,3]"], "names": ["x", "y", "z"]}}"#).await;
    let (status, v) = send(&app, "GET", &format!("/sessions/{}/variables", id), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["variables"].as_array().unwrap().len(), 3);
    assert_eq!(v["names"], json!(["x", "y", "z"]));
    let (status, q) = send(&app, "GET", &format!("/sessions/{}/quiver", id), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(q["quiver"]["nodes"].as_array().unwrap().len(), 3);
    assert!(q["dot"].as_str().unwrap().starts_with("digraph"));
    let (status, g) = send(&app, "GET", "/meta/flipgraph?n=4", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(g["nodes"].as_array().unwrap().len(), 50);
    let (status, _) = send(&app, "GET", "/meta/flipgraph", None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = send(&app, "GET", "/meta/flipgraph?n=x", None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn error_statuses() {
    let app = router(AppState::new(None));
    let (status, _) = send(&app, "GET", "/sessions/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = send(&app, "POST", "/sessions/nope/flip", Some(r#"{"pair": "0L"}"#)).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = send(&app, "POST", "/sessions", Some("{not json")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = send(&app, "POST", "/sessions", Some(r#"{"n": 3, "seed": "central:77"}"#)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let (id, _) = new_session(&app, r#"{"n": 3, "seed": "central:0"}"#).await;
    let flip = format!("/sessions/{}/flip", id);
    let (status, _) = send(&app, "POST", &flip, Some(r#"{"pair": "[1,3]"}"#)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let (status, _) = send(&app, "POST", &flip, Some(r#"{"pair": "9Q"}"#)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = send(&app, "POST", &flip, Some(r#"{"pair": {"kind": "central", "p": 17, "side": "L"}}"#)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = send(&app, "POST", &flip, Some("[]")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = send(&app, "POST", &format!("/sessions/{}/undo", id), None).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);

    let (status, _) = send(&app, "POST", &flip, Some(r#"{"pair": "0L", "version": 0}"#)).await;
    assert_eq!(status, StatusCode::OK);
    // a second writer still holding version 0 is refused
    let (status, _) = send(&app, "POST", &flip, Some(r#"{"pair": "0R", "version": 0}"#)).await;
    assert_eq!(status, StatusCode::CONFLICT);
}

#[tokio::test]
async fn concurrent_flips_are_serialized() {
    let app = router(AppState::new(None));
    let (id, _) = new_session(&app, r#"{"n": 4, "seed": "star-left"}"#).await;
    let flip = format!("/sessions/{}/flip", id);
    let (_, state) = send(&app, "GET", &format!("/sessions/{}", id), None).await;
    let pairs: Vec<Value> = state["flips"].as_array().unwrap().iter().map(|f| f["pair"].clone()).collect();
    let mut handles = vec![];
    for p in pairs {
        let app = app.clone();
        let flip = flip.clone();
        handles.push(tokio::spawn(async move {
            let body = json!({"pair": p, "version": 0}).to_string();
            send(&app, "POST", &flip, Some(&body)).await.0
        }));
    }
    let mut codes = vec![];
    for h in handles {
        codes.push(h.await.unwrap());
    }
    assert_eq!(codes.iter().filter(|&&c| c == StatusCode::OK).count(), 1);
    assert_eq!(codes.iter().filter(|&&c| c == StatusCode::CONFLICT).count(), 3);
}

#[tokio::test]
async fn cors_headers_present() {
    let app = router(AppState::new(None));
    let req = Request::builder()
        .method("GET")
        .uri("/meta/flipgraph?n=3")
        .header("origin", "http://localhost:5173")
        .body(Body::empty())
        .unwrap();
    let resp = app.oneshot(req).await.unwrap();
    assert!(resp.headers().contains_key("access-control-allow-origin"));
}

#[tokio::test]
async fn sessions_survive_a_restart_when_persisted() {
    let path = std::env::temp_dir().join(format!("pseudotri-sessions-{}.json", std::process::id()));
    let _ = std::fs::remove_file(&path);
    let app = router(AppState::load(path.clone()).unwrap());
    let (id, _) = new_session(&app, r#"{"n": 3, "seed": "star-left"}"#).await;
    let (_, state) = send(&app, "GET", &format!("/sessions/{}", id), None).await;
    let first = state["flips"][0]["name"].as_str().unwrap().to_string();
    let body = json!({"pair": first}).to_string();
    let (_, flipped) = send(&app, "POST", &format!("/sessions/{}/flip", id), Some(&body)).await;

    let restarted = router(AppState::load(path.clone()).unwrap());
    let (status, again) = send(&restarted, "GET", &format!("/sessions/{}", id), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(again, flipped);
    let _ = std::fs::remove_file(&path);
}
