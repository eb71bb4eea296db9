//! Drives the session API in process: create, flip, undo.
//!
//! `pseudotri serve --port 8080` exposes the same router over TCP.

use axum::body::Body;
use axum::http::Request;
use http_body_util::BodyExt;
use pseudotri::service::{router, AppState};
use tower::ServiceExt;

async fn call(app: &axum::Router, method: &str, uri: &str, body: &str) -> serde_json::Value {
    let req = Request::builder().method(method).uri(uri).body(Body::from(body.to_string())).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
    println!("{} {} -> {}", method, uri, status);
    v
}

#[tokio::main]
async fn main() {
    let app = router(AppState::new(None));
    let created = call(&app, "POST", "/sessions", r#"{"n": 3, "seed": "central:0"}"#).await;
    let id = created["sessionId"].as_str().unwrap().to_string();
    for f in created["state"]["flips"].as_array().unwrap() {
        println!("  {} -> {} gives {}", f["name"], f["replacementName"], f["preview"]);
    }
    let after = call(&app, "POST", &format!("/sessions/{}/flip", id), r#"{"pair": "0L", "version": 0}"#).await;
    println!("  now {}", after["pseudotriangulation"]);
    let stale = call(&app, "POST", &format!("/sessions/{}/flip", id), r#"{"pair": "0R", "version": 0}"#).await;
    println!("  {}", stale["error"]);
    let undone = call(&app, "POST", &format!("/sessions/{}/undo", id), "").await;
    println!("  back to {}", undone["pseudotriangulation"]);
}
