//! Seeded region growing baseline.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::growcut::SegmentationResult;
use crate::grid::{offset, BinaryMask, Cell, CellGrid, GrayImage, Label, Neighborhood, SeedSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Criterion {
    /// Compare against the mean intensity of the foreground seeds.
    #[default]
    SeedMean,
    /// Compare against the mean of the region grown so far (order dependent).
    RunningMean,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RegionGrowConfig {
    pub tolerance: f64,
    pub neighborhood: Neighborhood,
    pub criterion: Criterion,
}

impl Default for RegionGrowConfig {
    fn default() -> Self {
        Self {
            tolerance: 32.0,
            neighborhood: Neighborhood::Moore8,
            criterion: Criterion::SeedMean,
        }
    }
}

/// Breadth-first flood from the foreground seeds (background seeds are
/// ignored). Seeds always belong to the region; a neighbor joins when its
/// intensity is within `tolerance` of the reference mean. The queue starts
/// with the seeds in row-major order.
pub fn region_grow(img: &GrayImage, seeds: &SeedSet, cfg: &RegionGrowConfig) -> Result<SegmentationResult> {
    if !(cfg.tolerance >= 0.0) {
        return Err(Error::InvalidParameter("tolerance must be >= 0".into()));
    }
    seeds.validate(img.width(), img.height())?;
    let mut starts: Vec<(usize, usize)> = seeds.foreground().map(|s| (s.x, s.y)).collect();
    if starts.is_empty() {
        return Err(Error::NoForegroundSeed);
    }
    starts.sort_by_key(|&(x, y)| (y, x));

    let (w, h) = img.dims();
    let mut mask = BinaryMask::empty(w, h);
    let mut sum = 0.0;
    let mut count = 0usize;
    let mut queue = VecDeque::new();
    for &(x, y) in &starts {
        mask.set(x, y, true);
        sum += f64::from(img.get(x, y));
        count += 1;
        queue.push_back((x, y, 0usize));
    }
    let seed_mean = sum / count as f64;
    let mut waves = 0;
    while let Some((x, y, depth)) = queue.pop_front() {
        waves = waves.max(depth);
        for &(dx, dy) in cfg.neighborhood.offsets() {
            let Some((nx, ny)) = offset(w, h, x, y, dx, dy) else {
                continue;
            };
            if mask.get(nx, ny) {
                continue;
            }
            let reference = match cfg.criterion {
                Criterion::SeedMean => seed_mean,
                Criterion::RunningMean => sum / count as f64,
            };
            let v = f64::from(img.get(nx, ny));
            if (v - reference).abs() <= cfg.tolerance {
                mask.set(nx, ny, true);
                sum += v;
                count += 1;
                queue.push_back((nx, ny, depth + 1));
            }
        }
    }
    let cells = mask
        .bits()
        .iter()
        .map(|&b| if b { Cell::seed(Label::Foreground) } else { Cell::EMPTY })
        .collect();
    Ok(SegmentationResult {
        final_grid: CellGrid::from_cells(w, h, cells),
        mask,
        iterations_used: waves + 1,
        converged: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Seed;
    use crate::morphology::label_components;
    use proptest::prelude::*;

    fn two_valued() -> GrayImage {
        GrayImage::from_fn(8, 6, |x, y| if x >= 3 && y >= 1 && y < 5 { 200 } else { 50 }).unwrap()
    }

    #[test]
    fn constant_image_fills_frame() {
        let img = GrayImage::filled(7, 5, 77).unwrap();
        let seeds = SeedSet::new([Seed::fg(2, 2)]).unwrap();
        let cfg = RegionGrowConfig {
            tolerance: 0.0,
            ..Default::default()
        };
        assert_eq!(region_grow(&img, &seeds, &cfg).unwrap().mask.count(), 35);
    }

    #[test]
    fn hard_boundary_is_respected() {
        let img = two_valued();
        let seeds = SeedSet::new([Seed::fg(5, 2), Seed::bg(0, 0)]).unwrap();
        let cfg = RegionGrowConfig {
            tolerance: 10.0,
            ..Default::default()
        };
        let res = region_grow(&img, &seeds, &cfg).unwrap();
        assert_eq!(res.mask, BinaryMask::from_fn(8, 6, |x, y| img.get(x, y) == 200));
    }

    #[test]
    fn full_tolerance_fills_frame() {
        let img = two_valued();
        let seeds = SeedSet::new([Seed::fg(0, 0)]).unwrap();
        let cfg = RegionGrowConfig {
            tolerance: 255.0,
            ..Default::default()
        };
        assert_eq!(region_grow(&img, &seeds, &cfg).unwrap().mask.count(), 48);
    }

    #[test]
    fn needs_foreground_seed() {
        let img = two_valued();
        let seeds = SeedSet::new([Seed::bg(0, 0)]).unwrap();
        assert!(matches!(
            region_grow(&img, &seeds, &RegionGrowConfig::default()),
            Err(Error::NoForegroundSeed)
        ));
    }

    #[test]
    fn running_mean_drifts() {
        // a ramp: the running mean follows the gradient further than the seed mean
        let img = GrayImage::from_fn(20, 1, |x, _| (x * 10) as u8).unwrap();
        let seeds = SeedSet::new([Seed::fg(0, 0)]).unwrap();
        let fixed = RegionGrowConfig {
            tolerance: 15.0,
            ..Default::default()
        };
        let running = RegionGrowConfig {
            criterion: Criterion::RunningMean,
            ..fixed
        };
        let a = region_grow(&img, &seeds, &fixed).unwrap().mask.count();
        let b = region_grow(&img, &seeds, &running).unwrap().mask.count();
        assert_eq!(a, 2);
        assert!(b > a);
    }

    /// Connected component of `{|I - mean| <= t}` touching a seed, by brute force.
    fn oracle(img: &GrayImage, seeds: &[(usize, usize)], t: f64, n: Neighborhood) -> BinaryMask {
        let mean = seeds.iter().map(|&(x, y)| f64::from(img.get(x, y))).sum::<f64>() / seeds.len() as f64;
        let (w, h) = img.dims();
        let pass = BinaryMask::from_fn(w, h, |x, y| {
            seeds.contains(&(x, y)) || (f64::from(img.get(x, y)) - mean).abs() <= t
        });
        let (ids, _) = label_components(&pass, n);
        let keep: Vec<usize> = seeds.iter().filter_map(|&(x, y)| ids[y * w + x]).collect();
        BinaryMask::from_fn(w, h, |x, y| ids[y * w + x].is_some_and(|i| keep.contains(&i)))
    }

    fn arb_case() -> impl Strategy<Value = (GrayImage, Vec<(usize, usize)>)> {
        (2usize..12, 2usize..12).prop_flat_map(|(w, h)| {
            (
                proptest::collection::vec(0u8..=255, w * h),
                proptest::collection::vec((0..w, 0..h), 1..4),
            )
                .prop_map(move |(px, s)| (GrayImage::new(w, h, px).unwrap(), s))
        })
    }

    proptest! {
        #[test]
        fn seed_mean_equals_component_oracle((img, pts) in arb_case(), t in 0.0f64..120.0, moore in any::<bool>()) {
            let n = if moore { Neighborhood::Moore8 } else { Neighborhood::VonNeumann4 };
            let seeds = SeedSet::new(pts.iter().map(|&(x, y)| Seed::fg(x, y))).unwrap();
            let cfg = RegionGrowConfig { tolerance: t, neighborhood: n, criterion: Criterion::SeedMean };
            let res = region_grow(&img, &seeds, &cfg).unwrap();
            let uniq: Vec<_> = seeds.iter().map(|s| (s.x, s.y)).collect();
            prop_assert_eq!(&res.mask, &oracle(&img, &uniq, t, n));
            for &(x, y) in &uniq {
                prop_assert!(res.mask.get(x, y));
            }
        }

        #[test]
        fn seed_mean_is_monotone_in_tolerance((img, pts) in arb_case(), t1 in 0.0f64..100.0, dt in 0.0f64..100.0) {
            let seeds = SeedSet::new(pts.iter().map(|&(x, y)| Seed::fg(x, y))).unwrap();
            let a = region_grow(&img, &seeds, &RegionGrowConfig { tolerance: t1, ..Default::default() }).unwrap();
            let b = region_grow(&img, &seeds, &RegionGrowConfig { tolerance: t1 + dt, ..Default::default() }).unwrap();
            prop_assert!(a.mask.is_subset_of(&b.mask));
        }

        #[test]
        fn single_seed_region_is_connected((img, pts) in arb_case(), t in 0.0f64..80.0, running in any::<bool>()) {
            let (x, y) = pts[0];
            let seeds = SeedSet::new([Seed::fg(x, y)]).unwrap();
            let criterion = if running { Criterion::RunningMean } else { Criterion::SeedMean };
            let res = region_grow(&img, &seeds, &RegionGrowConfig { tolerance: t, criterion, ..Default::default() }).unwrap();
            let (_, areas) = label_components(&res.mask, Neighborhood::Moore8);
            prop_assert_eq!(areas.len(), 1);
        }
    }
}
