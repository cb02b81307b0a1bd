//! Synthetic test images with known ground truth: a bright shape on a dark
//! background plus additive Gaussian noise.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{BinaryMask, GrayImage, Seed, SeedSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Disc,
    Ellipse,
    /// Five-pointed spiculated blob.
    Star,
}

impl Shape {
    pub const ALL: [Shape; 3] = [Shape::Disc, Shape::Ellipse, Shape::Star];

    pub fn name(self) -> &'static str {
        match self {
            Shape::Disc => "disc",
            Shape::Ellipse => "ellipse",
            Shape::Star => "star",
        }
    }

    /// Boundary distance from the centre along direction `theta`.
    pub fn radius(self, theta: f64, scale: f64) -> f64 {
        match self {
            Shape::Disc => scale,
            Shape::Ellipse => {
                let (a, b) = (scale * 1.35, scale * 0.7);
                a * b / ((b * theta.cos()).powi(2) + (a * theta.sin()).powi(2)).sqrt()
            }
            Shape::Star => scale * (0.72 + 0.28 * (5.0 * theta).cos()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PhantomParams {
    pub size: usize,
    /// Nominal radius in pixels.
    pub scale: f64,
    pub foreground: f64,
    pub background: f64,
    pub noise_sigma: f64,
    pub rng_seed: u64,
}

impl Default for PhantomParams {
    fn default() -> Self {
        Self {
            size: 64,
            scale: 18.0,
            foreground: 180.0,
            background: 60.0,
            noise_sigma: 10.0,
            rng_seed: 7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Phantom {
    pub shape: Shape,
    pub image: GrayImage,
    pub truth: BinaryMask,
    params: PhantomParams,
}

impl Phantom {
    pub fn new(shape: Shape, params: PhantomParams) -> Result<Self> {
        if params.size < 8 || !(params.scale > 0.0) || !(params.noise_sigma >= 0.0) {
            return Err(Error::InvalidParameter("phantom needs size >= 8, scale > 0, noise >= 0".into()));
        }
        let n = params.size;
        let c = Self::center_of(n);
        let truth = BinaryMask::from_fn(n, n, |x, y| {
            let (dx, dy) = (x as f64 - c, y as f64 - c);
            dx.hypot(dy) <= shape.radius(dy.atan2(dx), params.scale)
        });
        let noise = Normal::new(0.0, params.noise_sigma).expect("sigma checked above");
        let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
        let mut px = Vec::with_capacity(n * n);
        for &inside in truth.bits() {
            let base = if inside { params.foreground } else { params.background };
            px.push((base + noise.sample(&mut rng)).round().clamp(0.0, 255.0) as u8);
        }
        Ok(Self {
            shape,
            image: GrayImage::new(n, n, px)?,
            truth,
            params,
        })
    }

    fn center_of(size: usize) -> f64 {
        (size as f64 - 1.0) / 2.0
    }

    pub fn center(&self) -> f64 {
        Self::center_of(self.params.size)
    }

    pub fn params(&self) -> &PhantomParams {
        &self.params
    }

    fn polar(&self, theta: f64, r: f64) -> (usize, usize) {
        let c = self.center();
        let max = (self.params.size - 1) as f64;
        let x = (c + r * theta.cos()).round().clamp(0.0, max);
        let y = (c + r * theta.sin()).round().clamp(0.0, max);
        (x as usize, y as usize)
    }

    /// `n` points at `fraction` of the boundary radius, evenly spaced in angle.
    fn ring(&self, n: usize, fraction: f64, phase: f64) -> Vec<(usize, usize)> {
        (0..n)
            .map(|k| {
                let t = phase + 2.0 * PI * k as f64 / n as f64;
                self.polar(t, fraction * self.shape.radius(t, self.params.scale))
            })
            .collect()
    }

    /// Six foreground seeds well inside the shape and six background seeds
    /// beyond its outline.
    pub fn growcut_seeds(&self) -> SeedSet {
        let fg = self.ring(6, 0.45, 0.0).into_iter().map(|(x, y)| Seed::fg(x, y));
        let outer = self.params.scale * 1.45;
        let bg = (0..6).map(|k| {
            let (x, y) = self.polar(PI / 6.0 + PI * k as f64 / 3.0, outer.max(self.shape.radius(0.0, self.params.scale) + 5.0));
            Seed::bg(x, y)
        });
        SeedSet::new(fg.chain(bg)).expect("seed rings are disjoint")
    }

    /// Eight foreground-only seeds spread over the shape, sized so the
    /// fitted membership frontier sits near the outline.
    pub fn fuzzy_seeds(&self) -> SeedSet {
        SeedSet::new(self.ring(8, 0.85, PI / 8.0).into_iter().map(|(x, y)| Seed::fg(x, y)))
            .expect("foreground-only seeds never conflict")
    }

    /// A background pixel just outside the outline, used to corrupt a seed set.
    pub fn misplaced_point(&self) -> (usize, usize) {
        let r = self.shape.radius(0.0, self.params.scale);
        self.polar(0.0, r + 8.0)
    }
}

pub fn phantom(shape: Shape) -> Phantom {
    Phantom::new(shape, PhantomParams::default()).expect("default phantom parameters are valid")
}
