//! Stateless HTTP front end: `POST /segment`, `POST /autoseed`, `GET /health`.
//!
//! Images and masks travel as base64 PNG. Every failure answers with a JSON
//! body `{"error": "..."}`.

use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine as _;
use growcut::de::{generate_seeds, DeParams};
use growcut::io::{decode_gray_image, encode_png, image_to_mask, mask_to_image, records_to_seeds, SeedRecord};
use growcut::metrics::{metrics_report, MetricsReport};
use growcut::mlt::{ssgc_stages, SsgcConfig};
use growcut::{Error, GrayImage, SeedSet};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::methods::{segment, Method, MethodConfig};
use crate::overlay::main_contour;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentRequest {
    pub image: String,
    #[serde(default)]
    pub seeds: Vec<SeedRecord>,
    pub method: String,
    /// Fields of the chosen method's config block.
    #[serde(default)]
    pub params: Value,
    /// Optional ground-truth mask; when present the response carries metrics.
    #[serde(default)]
    pub gt: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentResponse {
    pub mask: String,
    pub contour: Vec<[usize; 2]>,
    pub iterations: usize,
    pub converged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<MetricsReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Mlt,
    De,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutoseedRequest {
    pub image: String,
    pub strategy: Strategy,
    /// `SsgcConfig` fields for `mlt`, `DeParams` fields for `de`.
    #[serde(default)]
    pub params: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutoseedResponse {
    pub seeds: Vec<SeedRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub status: StatusCode,
    pub message: String,
}

impl ApiError {
    fn bad_request(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            message: message.into(),
        }
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::NoForegroundSeed
            | Error::BackgroundSeed
            | Error::SeedOutOfBounds { .. }
            | Error::ConflictingSeed { .. }
            | Error::UnlabeledSeed
            | Error::DimensionMismatch(_) => StatusCode::UNPROCESSABLE_ENTITY,
            Error::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::BAD_REQUEST,
        };
        ApiError {
            status,
            message: e.to_string(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(serde_json::json!({ "error": self.message }))).into_response()
    }
}

type ApiResult<T> = std::result::Result<T, ApiError>;

fn decode_image(field: &str, b64: &str) -> ApiResult<GrayImage> {
    let bytes = B64
        .decode(b64.trim())
        .map_err(|e| ApiError::bad_request(format!("{field}: invalid base64: {e}")))?;
    decode_gray_image(&bytes).map_err(|e| ApiError::bad_request(format!("{field}: {e}")))
}

fn params<T: DeserializeOwned + Default>(v: &Value) -> ApiResult<T> {
    if v.is_null() {
        return Ok(T::default());
    }
    serde_json::from_value(v.clone()).map_err(|e| ApiError::bad_request(format!("params: {e}")))
}

/// The `/segment` computation without the transport. Seedless methods
/// ignore `seeds`; the others need at least one foreground seed.
pub fn handle_segment(req: &SegmentRequest, defaults: &MethodConfig) -> ApiResult<SegmentResponse> {
    let method: Method = req.method.parse()?;
    let img = decode_image("image", &req.image)?;
    let cfg = defaults.with_params(method, &req.params)?;
    let seeds = records_to_seeds(&req.seeds)?;
    seeds.validate(img.width(), img.height())?;
    if method != Method::Ssgc && !seeds.has_foreground() {
        return Err(Error::NoForegroundSeed.into());
    }
    let res = segment(method, &img, Some(&seeds), &cfg)?;
    let metrics = match &req.gt {
        Some(gt) => {
            let gt = image_to_mask(&decode_image("gt", gt)?);
            if gt.dims() != img.dims() {
                return Err(Error::DimensionMismatch("gt and image sizes differ".into()).into());
            }
            Some(metrics_report(&img, &res.mask, &gt)?)
        }
        None => None,
    };
    Ok(SegmentResponse {
        mask: B64.encode(encode_png(&mask_to_image(&res.mask))),
        contour: main_contour(&res.mask),
        iterations: res.iterations_used,
        converged: res.converged,
        metrics,
    })
}

pub fn handle_autoseed(req: &AutoseedRequest) -> ApiResult<AutoseedResponse> {
    let img = decode_image("image", &req.image)?;
    let seeds: SeedSet = match req.strategy {
        Strategy::Mlt => ssgc_stages(&img, &params::<SsgcConfig>(&req.params)?)?.seeds,
        Strategy::De => generate_seeds(&img, &params::<DeParams>(&req.params)?)?,
    };
    Ok(AutoseedResponse {
        seeds: seeds.iter().map(SeedRecord::from).collect(),
    })
}

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("malformed request: {e}")))
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> ApiResult<T> + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError {
        status: StatusCode::INTERNAL_SERVER_ERROR,
        message: e.to_string(),
    })?
}

async fn segment_route(State(defaults): State<Arc<MethodConfig>>, body: Bytes) -> ApiResult<Json<SegmentResponse>> {
    let req: SegmentRequest = parse_body(&body)?;
    blocking(move || handle_segment(&req, &defaults)).await.map(Json)
}

async fn autoseed_route(body: Bytes) -> ApiResult<Json<AutoseedResponse>> {
    let req: AutoseedRequest = parse_body(&body)?;
    blocking(move || handle_autoseed(&req)).await.map(Json)
}

/// Routes with `defaults` as the base config that request params override.
pub fn router(defaults: MethodConfig) -> Router {
    Router::new()
        .route("/health", get(|| async { "ok" }))
        .route("/segment", post(segment_route))
        .route("/autoseed", post(autoseed_route))
        .with_state(Arc::new(defaults))
}

pub async fn serve(addr: SocketAddr, defaults: MethodConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(defaults)).await
}

#[cfg(test)]
mod tests {
    use super::*;
    use growcut::io::seeds_to_records;
    use growcut::phantom::{phantom, Shape};

    fn request(method: &str) -> SegmentRequest {
        let p = phantom(Shape::Disc);
        SegmentRequest {
            image: B64.encode(encode_png(&p.image)),
            seeds: seeds_to_records(&p.growcut_seeds()),
            method: method.into(),
            params: Value::Null,
            gt: Some(B64.encode(encode_png(&mask_to_image(&p.truth)))),
        }
    }

    #[test]
    fn segment_with_metrics() {
        let r = handle_segment(&request("growcut"), &MethodConfig::default()).unwrap();
        assert!(r.metrics.unwrap().overlap.dsc > 0.95);
        assert!(!r.contour.is_empty());
    }

    #[test]
    fn error_statuses() {
        let mut req = request("growcut");
        req.seeds.retain(|s| s.label == growcut::io::SeedLabel::Bg);
        assert_eq!(handle_segment(&req, &MethodConfig::default()).unwrap_err().status, StatusCode::UNPROCESSABLE_ENTITY);
        let mut req = request("fuzzy");
        req.seeds.clear();
        assert_eq!(handle_segment(&req, &MethodConfig::default()).unwrap_err().status, StatusCode::UNPROCESSABLE_ENTITY);
        let mut req = request("ssgc");
        req.seeds.clear();
        assert!(handle_segment(&req, &MethodConfig::default()).is_ok());
        let mut req = request("growcut");
        req.image = "!!!".into();
        assert_eq!(handle_segment(&req, &MethodConfig::default()).unwrap_err().status, StatusCode::BAD_REQUEST);
        let req = request("snakes");
        assert_eq!(handle_segment(&req, &MethodConfig::default()).unwrap_err().status, StatusCode::BAD_REQUEST);
    }

    #[test]
    fn autoseed_mlt_gives_both_classes() {
        let p = phantom(Shape::Disc);
        let r = handle_autoseed(&AutoseedRequest {
            image: B64.encode(encode_png(&p.image)),
            strategy: Strategy::Mlt,
            params: Value::Null,
        })
        .unwrap();
        let set = records_to_seeds(&r.seeds).unwrap();
        assert!(set.has_foreground() && set.background().count() > 0);
    }
}
