//! Semi-supervised GrowCut: automatic seeding from a multilevel threshold.
//!
//! Pipeline: edge-stopping diffusion, nested super-level sets at descending
//! thresholds, largest-region selection over the innermost layers, then
//! background seeds on a ring around the dilated region and foreground seeds
//! around its centroid, followed by classical GrowCut.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::growcut::{self, GrowCutConfig, SegmentationResult};
use crate::grid::{BinaryMask, GrayImage, Neighborhood, Seed, SeedSet};
use crate::io;
use crate::morphology::{centroid, dilate_disc, inner_boundary, largest_component};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct MltParams {
    /// Intensity step between consecutive thresholds.
    pub level: u32,
    /// Number of innermost layers merged before region selection.
    pub depth: usize,
}

impl Default for MltParams {
    fn default() -> Self {
        Self { level: 10, depth: 2 }
    }
}

impl MltParams {
    pub fn validate(&self) -> Result<()> {
        if self.level == 0 || self.depth == 0 {
            return Err(Error::InvalidParameter("level and depth must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DiffusionParams {
    pub iterations: usize,
    pub time_step: f64,
    /// Gradient magnitude at which the diffusivity has dropped to 1/e.
    pub contrast: f64,
    /// Gaussian width for the gradient that drives the diffusivity; 0 gives
    /// the unregularized scheme, which keeps isolated noise spikes.
    pub presmooth_sigma: f64,
}

impl Default for DiffusionParams {
    fn default() -> Self {
        Self {
            iterations: 15,
            time_step: 0.2,
            contrast: 15.0,
            presmooth_sigma: 1.0,
        }
    }
}

impl DiffusionParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.time_step > 0.0 && self.time_step <= 0.25) {
            return Err(Error::InvalidParameter(
                "time_step must lie in (0, 0.25]".into(),
            ));
        }
        if !(self.contrast > 0.0) {
            return Err(Error::InvalidParameter("contrast must be positive".into()));
        }
        if !(self.presmooth_sigma >= 0.0) {
            return Err(Error::InvalidParameter("presmooth_sigma must be >= 0".into()));
        }
        Ok(())
    }
}

/// Seeding geometry for the automatic pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SeedingParams {
    pub dilation_radius: usize,
    pub centroid_radius: usize,
}

impl Default for SeedingParams {
    fn default() -> Self {
        Self {
            dilation_radius: 5,
            centroid_radius: 2,
        }
    }
}

/// Explicit Perona–Malik scheme with exponential diffusivity on a 4-neighbor
/// stencil and reflecting borders. The diffusivity is computed from a
/// Gaussian-smoothed copy of the current image (Catté et al.). Fluxes are
/// antisymmetric, so total intensity is conserved before the final rounding.
pub fn diffuse(img: &GrayImage, p: &DiffusionParams) -> Result<GrayImage> {
    p.validate()?;
    if p.iterations == 0 {
        return Ok(img.clone());
    }
    let (w, h) = img.dims();
    let k2 = p.contrast * p.contrast;
    let mut u: Vec<f64> = img.pixels().iter().map(|&v| f64::from(v)).collect();
    let mut flux_x = vec![0.0; w * h];
    let mut flux_y = vec![0.0; w * h];
    let diffusivity = |d: f64| (-(d * d) / k2).exp();
    for _ in 0..p.iterations {
        let s = gaussian_blur(&u, w, h, p.presmooth_sigma);
        // flux_x[i]: flow from i+1 into i; flux_y[i]: flow from i+w into i
        for y in 0..h {
            for x in 0..w {
                let i = y * w + x;
                flux_x[i] = if x + 1 < w { diffusivity(s[i + 1] - s[i]) * (u[i + 1] - u[i]) } else { 0.0 };
                flux_y[i] = if y + 1 < h { diffusivity(s[i + w] - s[i]) * (u[i + w] - u[i]) } else { 0.0 };
            }
        }
        for y in 0..h {
            for x in 0..w {
                let i = y * w + x;
                let mut div = flux_x[i] + flux_y[i];
                if x > 0 {
                    div -= flux_x[i - 1];
                }
                if y > 0 {
                    div -= flux_y[i - w];
                }
                u[i] += p.time_step * div;
            }
        }
    }
    GrayImage::new(
        w,
        h,
        u.iter().map(|&v| v.round().clamp(0.0, 255.0) as u8).collect(),
    )
}

/// Separable Gaussian blur with mirrored borders; `sigma == 0` copies.
fn gaussian_blur(u: &[f64], w: usize, h: usize, sigma: f64) -> Vec<f64> {
    if sigma == 0.0 {
        return u.to_vec();
    }
    let r = (3.0 * sigma).ceil() as isize;
    let mut k: Vec<f64> = (-r..=r).map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp()).collect();
    let total: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= total);
    let mirror = |i: isize, n: usize| -> usize {
        let n = n as isize;
        let mut i = i;
        while i < 0 || i >= n {
            i = if i < 0 { -i - 1 } else { 2 * n - i - 1 };
        }
        i as usize
    };
    let mut tmp = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            tmp[y * w + x] = (-r..=r)
                .map(|d| k[(d + r) as usize] * u[y * w + mirror(x as isize + d, w)])
                .sum();
        }
    }
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            out[y * w + x] = (-r..=r)
                .map(|d| k[(d + r) as usize] * tmp[mirror(y as isize + d, h) * w + x])
                .sum();
        }
    }
    out
}

/// Descending thresholds `max - k·level`, stopping before the minimum
/// intensity is reached (a layer covering every pixel carries no shape).
pub fn threshold_schedule(img: &GrayImage, p: &MltParams) -> Vec<u8> {
    let max = i64::from(img.max());
    let min = i64::from(img.min());
    (1..)
        .map(|k| max - k * i64::from(p.level))
        .take_while(|&t| t > min)
        .map(|t| t as u8)
        .collect()
}

/// Super-level sets `{pixel >= t}` for each threshold, in the given order.
pub fn threshold_layers(img: &GrayImage, thresholds: &[u8]) -> Vec<BinaryMask> {
    thresholds
        .iter()
        .map(|&t| BinaryMask::from_fn(img.width(), img.height(), |x, y| img.get(x, y) >= t))
        .collect()
}

/// Nested layers, brightest first.
pub fn multilevel_threshold(img: &GrayImage, p: &MltParams) -> Result<Vec<BinaryMask>> {
    p.validate()?;
    Ok(threshold_layers(img, &threshold_schedule(img, p)))
}

/// Merges the innermost `depth` layers and keeps the largest 8-connected
/// component. Returns an empty mask when nothing passes.
pub fn select_mass_region(layers: &[BinaryMask], depth: usize, dims: (usize, usize)) -> BinaryMask {
    let (w, h) = dims;
    let merged = layers
        .iter()
        .take(depth.max(1))
        .fold(BinaryMask::empty(w, h), |acc, l| acc.union(l));
    largest_component(&merged, Neighborhood::Moore8)
}

/// Background seeds on the outer ring of the dilated region, foreground seeds
/// within `centroid_radius` of the region centroid.
pub fn synthesize_seeds(region: &BinaryMask, p: &SeedingParams) -> Result<SeedSet> {
    let (w, h) = region.dims();
    let (cx, cy) = centroid(region).ok_or(Error::EmptyRegion)?;
    if region.count() == w * h {
        return Err(Error::RegionFillsFrame);
    }
    let dilated = dilate_disc(region, p.dilation_radius.max(1));
    let outside = |m: &BinaryMask| BinaryMask::from_fn(w, h, |x, y| m.get(x, y) && !region.get(x, y));
    let mut ring = outside(&inner_boundary(&dilated));
    if ring.is_empty() {
        // dilation reached every frame edge; fall back to the whole band
        ring = outside(&dilated);
    }

    let snap = |v: f64| (v - 0.5).ceil().max(0.0) as usize;
    let (mut fx, mut fy) = (snap(cx).min(w - 1), snap(cy).min(h - 1));
    if !region.get(fx, fy) {
        // concave region: nearest region pixel, first in scan order on ties
        let d2 = |(x, y): (usize, usize)| (x as f64 - cx).powi(2) + (y as f64 - cy).powi(2);
        (fx, fy) = region
            .foreground()
            .fold(None, |best: Option<((usize, usize), f64)>, q| {
                let d = d2(q);
                match best {
                    Some((_, bd)) if bd <= d => best,
                    _ => Some((q, d)),
                }
            })
            .map(|(q, _)| q)
            .expect("region is non-empty");
    }
    let r2 = (p.centroid_radius * p.centroid_radius) as isize;
    let fg = region.foreground().filter(|&(x, y)| {
        let dx = x as isize - fx as isize;
        let dy = y as isize - fy as isize;
        dx * dx + dy * dy <= r2
    });
    let seeds: Vec<Seed> = fg
        .map(|(x, y)| Seed::fg(x, y))
        .chain(ring.foreground().map(|(x, y)| Seed::bg(x, y)))
        .collect();
    SeedSet::new(seeds)
}

/// Intermediate products of one pipeline run.
#[derive(Debug, Clone)]
pub struct SsgcStages {
    pub diffused: GrayImage,
    pub layers: Vec<BinaryMask>,
    pub region: BinaryMask,
    pub seeds: SeedSet,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SsgcConfig {
    pub mlt: MltParams,
    pub diffusion: DiffusionParams,
    pub seeding: SeedingParams,
    pub growcut: GrowCutConfig,
}

/// Runs the automatic seeding stages without the final GrowCut.
pub fn ssgc_stages(img: &GrayImage, cfg: &SsgcConfig) -> Result<SsgcStages> {
    let diffused = diffuse(img, &cfg.diffusion)?;
    let layers = multilevel_threshold(&diffused, &cfg.mlt)?;
    let region = select_mass_region(&layers, cfg.mlt.depth, img.dims());
    let seeds = match synthesize_seeds(&region, &cfg.seeding) {
        Err(Error::EmptyRegion) | Err(Error::RegionFillsFrame) => return Err(Error::NoMassCandidate),
        other => other?,
    };
    Ok(SsgcStages {
        diffused,
        layers,
        region,
        seeds,
    })
}

/// GrowCut on the original image, seeded from the diffused one.
pub fn run_ssgc(img: &GrayImage, cfg: &SsgcConfig) -> Result<SegmentationResult> {
    let stages = ssgc_stages(img, cfg)?;
    growcut::run(img, &stages.seeds, &cfg.growcut)
}

/// Writes `diffused.png`, `layer_XX.png`, `region.png` and `seeds.png`
/// (white = foreground seed, gray = background seed) into `dir`.
pub fn dump_stages(stages: &SsgcStages, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    io::save_gray_image(&stages.diffused, dir.join("diffused.png"))?;
    for (i, layer) in stages.layers.iter().enumerate() {
        io::save_mask(layer, dir.join(format!("layer_{i:02}.png")))?;
    }
    io::save_mask(&stages.region, dir.join("region.png"))?;
    let (w, h) = stages.region.dims();
    let mut overlay = vec![0u8; w * h];
    for s in stages.seeds.iter() {
        overlay[s.y * w + s.x] = if s.label == crate::grid::Label::Foreground {
            255
        } else {
            128
        };
    }
    io::save_gray_image(&GrayImage::new(w, h, overlay)?, dir.join("seeds.png"))?;
    Ok(())
}
