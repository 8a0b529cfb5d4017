//! `/generate` and `/healthz` over a scripted backend.

use std::io::Write;
use std::sync::Arc;

use anyhow::{Context, Result};
use axum::extract::State;
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};
use frameparse::pipeline::ScriptedBackend;
use serde::{Deserialize, Serialize};

#[derive(Deserialize)]
struct GenerateRequest {
    inputs: Vec<String>,
    #[allow(dead_code)]
    #[serde(default)]
    max_new_tokens: Option<usize>,
}

#[derive(Serialize)]
struct GenerateResponse {
    outputs: Vec<String>,
}

async fn generate(State(backend): State<Arc<ScriptedBackend>>, Json(req): Json<GenerateRequest>) -> Json<GenerateResponse> {
    Json(GenerateResponse {
        outputs: req.inputs.iter().map(|i| backend.respond(i)).collect(),
    })
}

async fn healthz() -> (StatusCode, &'static str) {
    (StatusCode::OK, "ok")
}

pub fn router(backend: ScriptedBackend) -> Router {
    Router::new()
        .route("/generate", post(generate))
        .route("/healthz", get(healthz))
        .with_state(Arc::new(backend))
}

pub fn serve(backend: ScriptedBackend, host: &str, port: u16) -> Result<()> {
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind((host, port))
            .await
            .with_context(|| format!("binding {host}:{port}"))?;
        let addr = listener.local_addr()?;
        {
            let mut out = std::io::stdout().lock();
            writeln!(out, "http://{addr}")?;
            out.flush()?;
        }
        log::info!("serving {} scripted exchanges on {addr}", backend.len());
        axum::serve(listener, router(backend))
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await?;
        Ok(())
    })
}
