//! Starts the HTTP service, sends one segmentation request to it and prints
//! a digest of the reply. Pass `--forever` to keep serving afterwards.
//!
//! `cargo run --example serve [-- --forever]`

use std::net::SocketAddr;

use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine as _;
use growcut::io::{encode_png, mask_to_image, seeds_to_records};
use growcut::phantom::{phantom, Shape};
use growcut_harness::service::{router, SegmentRequest, SegmentResponse};
use growcut_harness::MethodConfig;
use tokio::io::{AsyncReadExt, AsyncWriteExt};

async fn post(addr: SocketAddr, path: &str, body: &[u8]) -> anyhow::Result<String> {
    let mut s = tokio::net::TcpStream::connect(addr).await?;
    let head = format!(
        "POST {path} HTTP/1.1\r\nhost: {addr}\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n",
        body.len()
    );
    s.write_all(head.as_bytes()).await?;
    s.write_all(body).await?;
    let mut out = String::new();
    s.read_to_string(&mut out).await?;
    Ok(out)
}

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await?;
    let addr = listener.local_addr()?;
    println!("listening on http://{addr}");
    tokio::spawn(async move { axum::serve(listener, router(MethodConfig::default())).await });

    let p = phantom(Shape::Ellipse);
    let req = SegmentRequest {
        image: B64.encode(encode_png(&p.image)),
        seeds: seeds_to_records(&p.growcut_seeds()),
        method: "growcut".into(),
        params: serde_json::Value::Null,
        gt: Some(B64.encode(encode_png(&mask_to_image(&p.truth)))),
    };
    let reply = post(addr, "/segment", &serde_json::to_vec(&req)?).await?;
    let (status, body) = reply.split_once("\r\n\r\n").unwrap_or((&reply, ""));
    println!("{}", status.lines().next().unwrap_or_default());
    let resp: SegmentResponse = serde_json::from_str(body)?;
    println!("iterations: {}", resp.iterations);
    println!("contour: {} points starting at {:?}", resp.contour.len(), resp.contour.first());
    if let Some(m) = resp.metrics {
        println!("DSC {:.4}, form factor {:.3} (truth {:.3})", m.overlap.dsc, m.shape.form_factor, m.gt_shape.form_factor);
    }

    if std::env::args().any(|a| a == "--forever") {
        println!("serving until interrupted");
        std::future::pending::<()>().await;
    }
    Ok(())
}
