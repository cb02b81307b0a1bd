//! Fuzzy GrowCut: a GrowCut variant driven only by foreground seeds.
//!
//! The seeds define a separable Gaussian membership `μ_Obj` centred on their
//! centre of mass, with spread taken from the seed coordinates' standard
//! deviations. Cells where the background membership `1 - μ_Obj` dominates act
//! as full-strength background attackers, so the background class never needs
//! to be seeded. Only the centre-of-mass cell starts labeled, which keeps a
//! stray seed from injecting full-strength foreground into the background.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::growcut::{fill_rows, GrowCutConfig, SegmentationResult, StepStats};
use crate::grid::{offset, Cell, CellGrid, GrayImage, Label, Neighborhood, SeedSet};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FuzzyGrowCutConfig {
    pub neighborhood: Neighborhood,
    pub max_iterations: usize,
    pub max_intensity_norm: f64,
    /// Gaussian width multiplier, applied to both axes.
    pub alpha: f64,
    /// Lower bound on the per-axis seed spread, in pixels.
    pub sigma_floor: f64,
}

impl Default for FuzzyGrowCutConfig {
    fn default() -> Self {
        Self {
            neighborhood: Neighborhood::Moore8,
            max_iterations: 10_000,
            max_intensity_norm: 255.0,
            alpha: 2.0,
            sigma_floor: 1.0,
        }
    }
}

impl FuzzyGrowCutConfig {
    pub fn validate(&self) -> Result<()> {
        self.growcut().validate()?;
        if !(self.alpha > 0.0) {
            return Err(Error::InvalidParameter("alpha must be positive".into()));
        }
        if !(self.sigma_floor > 0.0) {
            return Err(Error::InvalidParameter("sigma_floor must be positive".into()));
        }
        Ok(())
    }

    fn growcut(&self) -> GrowCutConfig {
        GrowCutConfig {
            neighborhood: self.neighborhood,
            max_iterations: self.max_iterations,
            max_intensity_norm: self.max_intensity_norm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianFuzzyModel {
    pub x_m: f64,
    pub y_m: f64,
    pub s_x: f64,
    pub s_y: f64,
    pub alpha_x: f64,
    pub alpha_y: f64,
}

impl GaussianFuzzyModel {
    pub fn mu_obj(&self, x: f64, y: f64) -> f64 {
        let dx = x - self.x_m;
        let dy = y - self.y_m;
        (-(dx * dx) / (2.0 * self.alpha_x * self.s_x * self.s_x)).exp()
            * (-(dy * dy) / (2.0 * self.alpha_y * self.s_y * self.s_y)).exp()
    }

    pub fn mu_bkg(&self, x: f64, y: f64) -> f64 {
        1.0 - self.mu_obj(x, y)
    }

    /// Background membership strictly dominates at the cell.
    pub fn is_background(&self, x: usize, y: usize) -> bool {
        let obj = self.mu_obj(x as f64, y as f64);
        1.0 - obj > obj
    }

    /// Model strength: 1 where the background dominates, the cell's own
    /// strength otherwise.
    pub fn model_strength(&self, x: usize, y: usize, theta: f64) -> f64 {
        if self.is_background(x, y) {
            1.0
        } else {
            theta
        }
    }

    /// Label an attack from `(x, y)` carries.
    pub fn model_label(&self, x: usize, y: usize, label: Label) -> Label {
        if self.is_background(x, y) {
            Label::Background
        } else {
            label
        }
    }

    /// Nearest grid cell to the centre of mass; halves round toward the
    /// lower index and the result is clamped into the image.
    pub fn center_cell(&self, width: usize, height: usize) -> (usize, usize) {
        let snap = |v: f64, n: usize| ((v - 0.5).ceil().max(0.0) as usize).min(n - 1);
        (snap(self.x_m, width), snap(self.y_m, height))
    }
}

/// Fits the membership model to a foreground-only seed set.
pub fn fit_model(seeds: &SeedSet, cfg: &FuzzyGrowCutConfig) -> Result<GaussianFuzzyModel> {
    cfg.validate()?;
    if seeds.background().next().is_some() {
        return Err(Error::BackgroundSeed);
    }
    let pts: Vec<(f64, f64)> = seeds.foreground().map(|s| (s.x as f64, s.y as f64)).collect();
    if pts.is_empty() {
        return Err(Error::NoForegroundSeed);
    }
    let n = pts.len() as f64;
    let x_m = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let y_m = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let s_x = (pts.iter().map(|p| (p.0 - x_m).powi(2)).sum::<f64>() / n).sqrt();
    let s_y = (pts.iter().map(|p| (p.1 - y_m).powi(2)).sum::<f64>() / n).sqrt();
    Ok(GaussianFuzzyModel {
        x_m,
        y_m,
        s_x: s_x.max(cfg.sigma_floor),
        s_y: s_y.max(cfg.sigma_floor),
        alpha_x: cfg.alpha,
        alpha_y: cfg.alpha,
    })
}

pub fn mu_obj(model: &GaussianFuzzyModel, x: f64, y: f64) -> f64 {
    model.mu_obj(x, y)
}

pub fn mu_bkg(model: &GaussianFuzzyModel, x: f64, y: f64) -> f64 {
    model.mu_bkg(x, y)
}

pub fn model_strength(model: &GaussianFuzzyModel, cell: (usize, usize), theta: f64) -> f64 {
    model.model_strength(cell.0, cell.1, theta)
}

pub fn model_label(model: &GaussianFuzzyModel, q: (usize, usize), label: Label) -> Label {
    model.model_label(q.0, q.1, label)
}

/// Only the centre-of-mass cell starts labeled (foreground, strength 1).
pub fn init_fuzzy(img: &GrayImage, seeds: &SeedSet, model: &GaussianFuzzyModel) -> Result<CellGrid> {
    seeds.validate(img.width(), img.height())?;
    let mut grid = CellGrid::empty(img.width(), img.height());
    let (cx, cy) = model.center_cell(img.width(), img.height());
    grid.set(cx, cy, Cell::seed(Label::Foreground));
    Ok(grid)
}

/// Background-dominance flags, precomputed once per run since the model is fixed.
fn background_field(model: &GaussianFuzzyModel, width: usize, height: usize) -> Vec<bool> {
    (0..height)
        .flat_map(|y| (0..width).map(move |x| (x, y)))
        .map(|(x, y)| model.is_background(x, y))
        .collect()
}

#[inline]
fn evolve_cell(
    img: &GrayImage,
    grid: &CellGrid,
    outside: &[bool],
    cfg: &GrowCutConfig,
    x: usize,
    y: usize,
) -> Cell {
    let (w, h) = img.dims();
    let p = y * w + x;
    let c_p = f64::from(img.get(x, y));
    let mut next = grid.get(x, y);
    let mut defence = if outside[p] { 1.0 } else { next.strength };
    for &(dx, dy) in cfg.neighborhood.offsets() {
        let Some((qx, qy)) = offset(w, h, x, y, dx, dy) else {
            continue;
        };
        let q = qy * w + qx;
        let cell_q = grid.cells()[q];
        let model_q = if outside[q] { 1.0 } else { cell_q.strength };
        let attack = cfg.g((c_p - f64::from(img.get(qx, qy))).abs()) * model_q;
        if attack > defence {
            defence = attack;
            next = Cell {
                label: if outside[q] {
                    Label::Background
                } else {
                    cell_q.label
                },
                strength: attack,
            };
        }
    }
    next
}

/// One synchronous Fuzzy GrowCut generation.
pub fn fuzzy_step(
    img: &GrayImage,
    grid: &CellGrid,
    model: &GaussianFuzzyModel,
    cfg: &FuzzyGrowCutConfig,
) -> Result<(CellGrid, StepStats)> {
    grid.check_dims(img)?;
    let outside = background_field(model, img.width(), img.height());
    Ok(step_with_field(img, grid, &outside, &cfg.growcut()))
}

fn step_with_field(img: &GrayImage, grid: &CellGrid, outside: &[bool], cfg: &GrowCutConfig) -> (CellGrid, StepStats) {
    let w = img.width();
    let mut next = vec![Cell::EMPTY; grid.cells().len()];
    fill_rows(&mut next, w, |x, y| evolve_cell(img, grid, outside, cfg, x, y));
    let mut stats = StepStats::default();
    for (a, b) in grid.cells().iter().zip(&next) {
        stats.relabeled += usize::from(a.label != b.label);
        stats.updated += usize::from(a != b);
    }
    (CellGrid::from_cells(w, img.height(), next), stats)
}

/// Fits the model, seeds the centre of mass and iterates to convergence.
pub fn run_fuzzy(img: &GrayImage, seeds: &SeedSet, cfg: &FuzzyGrowCutConfig) -> Result<SegmentationResult> {
    let model = fit_model(seeds, cfg)?;
    run_with_model(img, seeds, &model, cfg)
}

/// Like [`run_fuzzy`] with an already fitted model.
pub fn run_with_model(
    img: &GrayImage,
    seeds: &SeedSet,
    model: &GaussianFuzzyModel,
    cfg: &FuzzyGrowCutConfig,
) -> Result<SegmentationResult> {
    cfg.validate()?;
    let gc = cfg.growcut();
    let mut grid = init_fuzzy(img, seeds, model)?;
    let outside = background_field(model, img.width(), img.height());
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.max_iterations {
        let (next, stats) = step_with_field(img, &grid, &outside, &gc);
        grid = next;
        iterations += 1;
        if stats.updated == 0 {
            converged = true;
            break;
        }
    }
    Ok(SegmentationResult {
        mask: grid.foreground_mask(),
        iterations_used: iterations,
        converged,
        final_grid: grid,
    })
}
