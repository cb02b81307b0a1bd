//! Classical GrowCut cellular automaton.
//!
//! Every cell carries a label and a strength in `[0, 1]`. On each synchronous
//! generation a cell `p` is attacked by its neighbors `q`; an attack of
//! strength `g(|C_p - C_q|) * Θ_q` that exceeds the defender's strength
//! conquers the cell, which adopts the attacker's label together with the
//! attack strength. `g(x) = 1 - x / max‖C‖` attenuates attacks across
//! intensity edges.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{offset, BinaryMask, Cell, CellGrid, GrayImage, Neighborhood, SeedSet};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GrowCutConfig {
    pub neighborhood: Neighborhood,
    pub max_iterations: usize,
    pub max_intensity_norm: f64,
}

impl Default for GrowCutConfig {
    fn default() -> Self {
        Self {
            neighborhood: Neighborhood::Moore8,
            max_iterations: 10_000,
            max_intensity_norm: 255.0,
        }
    }
}

impl GrowCutConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.max_intensity_norm > 0.0) || !self.max_intensity_norm.is_finite() {
            return Err(Error::InvalidParameter(
                "max_intensity_norm must be positive".into(),
            ));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter("max_iterations must be >= 1".into()));
        }
        Ok(())
    }

    /// Attenuation for an intensity difference, clamped at zero for
    /// differences beyond the configured norm.
    #[inline]
    pub(crate) fn g(&self, diff: f64) -> f64 {
        (1.0 - diff / self.max_intensity_norm).max(0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationResult {
    pub mask: BinaryMask,
    /// Generations executed, including the final quiescent one when converged.
    pub iterations_used: usize,
    pub converged: bool,
    pub final_grid: CellGrid,
}

/// Changes produced by one generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StepStats {
    /// Cells whose label changed.
    pub relabeled: usize,
    /// Cells whose label or strength changed.
    pub updated: usize,
}

/// `g(x) = 1 - x / max_intensity_norm` on `[0, max_intensity_norm]`.
pub fn attenuation_g(x: f64, cfg: &GrowCutConfig) -> Result<f64> {
    cfg.validate()?;
    if !(0.0..=cfg.max_intensity_norm).contains(&x) {
        return Err(Error::OutOfRange {
            value: x,
            max: cfg.max_intensity_norm,
        });
    }
    Ok(1.0 - x / cfg.max_intensity_norm)
}

/// Seed cells start with their label at full strength, every other cell
/// unlabeled at zero strength.
pub fn init_grid(img: &GrayImage, seeds: &SeedSet) -> Result<CellGrid> {
    seeds.validate(img.width(), img.height())?;
    let mut grid = CellGrid::empty(img.width(), img.height());
    for s in seeds.iter() {
        grid.set(s.x, s.y, Cell::seed(s.label));
    }
    Ok(grid)
}

#[inline]
fn evolve_cell(img: &GrayImage, grid: &CellGrid, cfg: &GrowCutConfig, x: usize, y: usize) -> Cell {
    let (w, h) = img.dims();
    let c_p = f64::from(img.get(x, y));
    let mut next = grid.get(x, y);
    for &(dx, dy) in cfg.neighborhood.offsets() {
        let Some((qx, qy)) = offset(w, h, x, y, dx, dy) else {
            continue;
        };
        let q = grid.get(qx, qy);
        let attack = cfg.g((c_p - f64::from(img.get(qx, qy))).abs()) * q.strength;
        // strict: on equal attacks the earlier neighbor keeps the cell
        if attack > next.strength {
            next = Cell {
                label: q.label,
                strength: attack,
            };
        }
    }
    next
}

fn tally(before: &CellGrid, after: &[Cell]) -> StepStats {
    before
        .cells()
        .iter()
        .zip(after)
        .fold(StepStats::default(), |mut s, (a, b)| {
            if a.label != b.label {
                s.relabeled += 1;
            }
            if a != b {
                s.updated += 1;
            }
            s
        })
}

/// Grids smaller than this are updated on the calling thread.
pub(crate) const PARALLEL_MIN_CELLS: usize = 4096;

/// Fills `next` row by row, in parallel for large grids.
pub(crate) fn fill_rows(next: &mut [Cell], w: usize, f: impl Fn(usize, usize) -> Cell + Sync) {
    let row = |(y, cells): (usize, &mut [Cell])| {
        for (x, cell) in cells.iter_mut().enumerate() {
            *cell = f(x, y);
        }
    };
    if next.len() >= PARALLEL_MIN_CELLS {
        next.par_chunks_mut(w).enumerate().for_each(row);
    } else {
        next.chunks_mut(w).enumerate().for_each(row);
    }
}

/// One synchronous generation: all reads from `grid`, all writes to a fresh grid.
pub fn step(img: &GrayImage, grid: &CellGrid, cfg: &GrowCutConfig) -> Result<(CellGrid, StepStats)> {
    grid.check_dims(img)?;
    let w = img.width();
    let mut next = vec![Cell::EMPTY; grid.cells().len()];
    fill_rows(&mut next, w, |x, y| evolve_cell(img, grid, cfg, x, y));
    let stats = tally(grid, &next);
    Ok((CellGrid::from_cells(w, img.height(), next), stats))
}

/// Sequential generation visiting cells in the given linear order.
#[cfg(test)]
pub(crate) fn step_in_order(
    img: &GrayImage,
    grid: &CellGrid,
    cfg: &GrowCutConfig,
    order: &[usize],
) -> CellGrid {
    let w = img.width();
    let mut next = vec![Cell::EMPTY; grid.cells().len()];
    for &i in order {
        next[i] = evolve_cell(img, grid, cfg, i % w, i / w);
    }
    CellGrid::from_cells(w, img.height(), next)
}

/// Runs generations from an initial grid until nothing changes or the
/// iteration budget is spent.
pub fn run_from_grid(img: &GrayImage, mut grid: CellGrid, cfg: &GrowCutConfig) -> Result<SegmentationResult> {
    cfg.validate()?;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.max_iterations {
        let (next, stats) = step(img, &grid, cfg)?;
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

/// Supervised GrowCut. Requires at least one foreground seed; cells still
/// unlabeled at termination count as background in the mask.
pub fn run(img: &GrayImage, seeds: &SeedSet, cfg: &GrowCutConfig) -> Result<SegmentationResult> {
    if !seeds.has_foreground() {
        return Err(Error::NoForegroundSeed);
    }
    let grid = init_grid(img, seeds)?;
    run_from_grid(img, grid, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Label, Seed};
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn cfg() -> GrowCutConfig {
        GrowCutConfig::default()
    }

    #[test]
    fn attenuation_values() {
        let c = cfg();
        assert_eq!(attenuation_g(0.0, &c).unwrap(), 1.0);
        assert_eq!(attenuation_g(255.0, &c).unwrap(), 0.0);
        assert_eq!(attenuation_g(127.5, &c).unwrap(), 0.5);
        assert!(attenuation_g(-1.0, &c).is_err());
        assert!(attenuation_g(256.0, &c).is_err());
        let bad = GrowCutConfig {
            max_intensity_norm: 0.0,
            ..c
        };
        assert!(attenuation_g(0.0, &bad).is_err());
    }

    #[test]
    fn init_grid_cases() {
        let img = GrayImage::filled(3, 3, 10).unwrap();
        let g = init_grid(&img, &SeedSet::default()).unwrap();
        assert!(g.cells().iter().all(|c| *c == Cell::EMPTY));

        let g = init_grid(&img, &SeedSet::new([Seed::fg(1, 1)]).unwrap()).unwrap();
        assert_eq!(g.get(1, 1), Cell::seed(Label::Foreground));
        assert_eq!(g.labels().filter(|&l| l != Label::Unlabeled).count(), 1);

        let g = init_grid(&img, &SeedSet::new([Seed::fg(0, 0), Seed::bg(2, 2)]).unwrap()).unwrap();
        assert_eq!(g.get(2, 2), Cell::seed(Label::Background));
        assert_eq!(g.labels().filter(|&l| l == Label::Unlabeled).count(), 7);

        assert!(init_grid(&img, &SeedSet::new([Seed::fg(3, 0)]).unwrap()).is_err());
    }

    #[test]
    fn uniform_image_single_step_floods_neighbors() {
        let img = GrayImage::filled(3, 3, 90).unwrap();
        let grid = init_grid(&img, &SeedSet::new([Seed::fg(1, 1)]).unwrap()).unwrap();
        let (next, stats) = step(&img, &grid, &cfg()).unwrap();
        assert_eq!(stats.relabeled, 8);
        for c in next.cells() {
            assert_eq!(*c, Cell::seed(Label::Foreground));
        }
    }

    #[test]
    fn full_contrast_blocks_attack() {
        let img = GrayImage::new(2, 1, vec![0, 255]).unwrap();
        let grid = init_grid(&img, &SeedSet::new([Seed::fg(0, 0)]).unwrap()).unwrap();
        let (next, stats) = step(&img, &grid, &cfg()).unwrap();
        assert_eq!(next.get(1, 0), Cell::EMPTY);
        assert_eq!(stats.relabeled, 0);
    }

    #[test]
    fn converged_grid_is_fixed_point() {
        let img = GrayImage::filled(3, 3, 90).unwrap();
        let seeds = SeedSet::new([Seed::fg(1, 1)]).unwrap();
        let res = run(&img, &seeds, &cfg()).unwrap();
        assert!(res.converged);
        let (again, stats) = step(&img, &res.final_grid, &cfg()).unwrap();
        assert_eq!(stats, StepStats::default());
        assert_eq!(again, res.final_grid);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let img = GrayImage::filled(3, 3, 0).unwrap();
        let grid = CellGrid::empty(2, 3);
        assert!(matches!(
            step(&img, &grid, &cfg()),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn fully_seeded_converges_in_one_step() {
        let img = GrayImage::new(2, 2, vec![0, 255, 30, 200]).unwrap();
        let seeds =
            SeedSet::new([Seed::fg(0, 0), Seed::bg(1, 0), Seed::fg(0, 1), Seed::bg(1, 1)]).unwrap();
        let res = run(&img, &seeds, &cfg()).unwrap();
        assert!(res.converged);
        assert_eq!(res.iterations_used, 1);
        assert_eq!(res.mask.bits(), &[true, false, true, false]);
    }

    #[test]
    fn requires_foreground_seed() {
        let img = GrayImage::filled(3, 3, 0).unwrap();
        let seeds = SeedSet::new([Seed::bg(0, 0)]).unwrap();
        assert!(matches!(run(&img, &seeds, &cfg()), Err(Error::NoForegroundSeed)));
    }

    #[test]
    fn truncated_run_reports_not_converged() {
        let img = GrayImage::filled(16, 16, 50).unwrap();
        let seeds = SeedSet::new([Seed::fg(8, 8), Seed::bg(0, 0)]).unwrap();
        let c = GrowCutConfig {
            max_iterations: 1,
            ..cfg()
        };
        let res = run(&img, &seeds, &c).unwrap();
        assert!(!res.converged);
        assert_eq!(res.iterations_used, 1);
    }

    #[test]
    fn unreached_cells_are_background() {
        // the 255 column cannot be reached from the 0 column
        let img = GrayImage::new(2, 2, vec![0, 255, 0, 255]).unwrap();
        let res = run(&img, &SeedSet::new([Seed::fg(0, 0)]).unwrap(), &cfg()).unwrap();
        assert_eq!(res.final_grid.get(1, 0).label, Label::Unlabeled);
        assert_eq!(res.mask.bits(), &[true, false, true, false]);
    }

    fn arb_image(max: usize) -> impl Strategy<Value = GrayImage> {
        (2usize..max, 2usize..max).prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<u8>(), w * h)
                .prop_map(move |px| GrayImage::new(w, h, px).unwrap())
        })
    }

    #[test]
    fn parallel_step_matches_sequential_order() {
        let img = GrayImage::from_fn(80, 60, |x, y| ((x * 37 + y * 11) % 251) as u8).unwrap();
        assert!(80 * 60 >= PARALLEL_MIN_CELLS);
        let seeds = SeedSet::new([Seed::fg(40, 30), Seed::bg(0, 0), Seed::bg(79, 59)]).unwrap();
        let mut grid = init_grid(&img, &seeds).unwrap();
        let order: Vec<usize> = (0..80 * 60).rev().collect();
        for _ in 0..6 {
            let (par, _) = step(&img, &grid, &cfg()).unwrap();
            assert_eq!(par, step_in_order(&img, &grid, &cfg(), &order));
            grid = par;
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn label_changes_strictly_increase_strength(img in arb_image(10), sx in 0usize..100, sy in 0usize..100, bx in 0usize..100, by in 0usize..100) {
            let (w, h) = img.dims();
            let fg = Seed::fg(sx % w, sy % h);
            let bg = Seed::bg(bx % w, by % h);
            prop_assume!((fg.x, fg.y) != (bg.x, bg.y));
            let mut grid = init_grid(&img, &SeedSet::new([fg, bg]).unwrap()).unwrap();
            for _ in 0..200 {
                let (next, stats) = step(&img, &grid, &cfg()).unwrap();
                for (a, b) in grid.cells().iter().zip(next.cells()) {
                    if a.label != b.label {
                        prop_assert!(b.strength > a.strength);
                    }
                    prop_assert!((0.0..=1.0).contains(&b.strength));
                    prop_assert!(b.label != Label::Unlabeled || b.strength == 0.0);
                }
                grid = next;
                if stats.updated == 0 { break; }
            }
        }

        #[test]
        fn step_is_independent_of_visit_order(img in arb_image(9), seed in any::<u64>()) {
            let (w, h) = img.dims();
            let seeds = SeedSet::new([Seed::fg(w / 2, h / 2), Seed::bg(0, 0)]).unwrap();
            let mut grid = init_grid(&img, &seeds).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..4 {
                let mut order: Vec<usize> = (0..w * h).collect();
                let forward = step_in_order(&img, &grid, &cfg(), &order);
                order.shuffle(&mut rng);
                let shuffled = step_in_order(&img, &grid, &cfg(), &order);
                let (parallel, _) = step(&img, &grid, &cfg()).unwrap();
                prop_assert_eq!(&forward, &shuffled);
                prop_assert_eq!(&forward, &parallel);
                grid = forward;
            }
        }

        /// A seed whose intensity differs from every neighbor cannot be
        /// conquered: the only attack able to reach strength 1 is g(0)·1.
        #[test]
        fn seeds_with_unique_intensity_persist(img in arb_image(10), sx in 0usize..100, sy in 0usize..100) {
            let (w, h) = img.dims();
            let (fx, fy) = (sx % w, sy % h);
            let mut px = img.pixels().to_vec();
            let v = px[fy * w + fx];
            for (nx, ny) in crate::grid::neighbors(w, h, fx, fy, Neighborhood::Moore8) {
                if px[ny * w + nx] == v {
                    px[ny * w + nx] = v.wrapping_add(1);
                }
            }
            let img = GrayImage::new(w, h, px).unwrap();
            let bx = (fx + w / 2) % w;
            let by = (fy + h / 2) % h;
            prop_assume!((bx, by) != (fx, fy));
            let seeds = SeedSet::new([Seed::fg(fx, fy), Seed::bg(bx, by)]).unwrap();
            let res = run(&img, &seeds, &cfg()).unwrap();
            prop_assert_eq!(res.final_grid.get(fx, fy), Cell::seed(Label::Foreground));
        }

        #[test]
        fn runs_are_deterministic(img in arb_image(12)) {
            let (w, h) = img.dims();
            let mut s = vec![Seed::fg(w / 2, h / 2), Seed::bg(0, 0)];
            if (w - 1, h - 1) != (w / 2, h / 2) {
                s.push(Seed::bg(w - 1, h - 1));
            }
            let seeds = SeedSet::new(s).unwrap();
            let a = run(&img, &seeds, &cfg()).unwrap();
            let b = run(&img, &seeds, &cfg()).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
