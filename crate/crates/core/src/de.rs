//! Differential-evolution search for foreground seed points.
//!
//! A candidate solution is a set of points inside the ROI. Fitness rewards
//! bright positions and a large minimum pairwise distance, so the points
//! spread over the brightest structure instead of collapsing onto one pixel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GrayImage, Seed, SeedSet};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DeParams {
    pub points_per_solution: usize,
    pub population_size: usize,
    pub generations: usize,
    /// Differential weight `F`.
    pub differential_weight: f64,
    /// Binomial crossover rate `CR`.
    pub crossover_rate: f64,
    /// Weight of the brightness term; the spread term gets `1 - w`.
    pub brightness_weight: f64,
    pub rng_seed: u64,
}

impl Default for DeParams {
    fn default() -> Self {
        Self {
            points_per_solution: 30,
            population_size: 20,
            generations: 100,
            differential_weight: 0.8,
            crossover_rate: 0.9,
            brightness_weight: 0.5,
            rng_seed: 0,
        }
    }
}

impl DeParams {
    pub fn validate(&self) -> Result<()> {
        if self.points_per_solution == 0 {
            return Err(Error::InvalidParameter("points_per_solution must be >= 1".into()));
        }
        if self.population_size < 4 {
            return Err(Error::InvalidParameter("population_size must be >= 4".into()));
        }
        if !(self.differential_weight > 0.0 && self.differential_weight <= 2.0) {
            return Err(Error::InvalidParameter("differential_weight must lie in (0, 2]".into()));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return Err(Error::InvalidParameter("crossover_rate must lie in [0, 1]".into()));
        }
        if !(0.0..=1.0).contains(&self.brightness_weight) {
            return Err(Error::InvalidParameter("brightness_weight must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedSolution {
    pub points: Vec<(f64, f64)>,
    pub fitness: f64,
}

/// Both fitness components, each normalised to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitnessTerms {
    /// Sum of gray levels over `255 · n`.
    pub brightness: f64,
    /// Minimum pairwise distance over the ROI diagonal; 1 for a single point.
    pub spread: f64,
}

impl FitnessTerms {
    pub fn combine(&self, w: f64) -> f64 {
        w * self.brightness + (1.0 - w) * self.spread
    }
}

#[inline]
fn pixel_of(p: (f64, f64), img: &GrayImage) -> (usize, usize) {
    let snap = |v: f64, n: usize| (v.round().max(0.0) as usize).min(n - 1);
    (snap(p.0, img.width()), snap(p.1, img.height()))
}

/// Evaluated on the rounded pixel positions, i.e. on the seeds that would
/// actually be emitted.
pub fn fitness_terms(points: &[(f64, f64)], img: &GrayImage) -> FitnessTerms {
    let pixels: Vec<(usize, usize)> = points.iter().map(|&p| pixel_of(p, img)).collect();
    let gray: f64 = pixels.iter().map(|&(x, y)| f64::from(img.get(x, y))).sum();
    let brightness = gray / (255.0 * pixels.len().max(1) as f64);
    let diag = (((img.width() - 1).pow(2) + (img.height() - 1).pow(2)) as f64).sqrt();
    let spread = if pixels.len() < 2 || diag == 0.0 {
        1.0
    } else {
        let mut min_d2 = usize::MAX;
        for (i, a) in pixels.iter().enumerate() {
            for b in &pixels[i + 1..] {
                let d2 = a.0.abs_diff(b.0).pow(2) + a.1.abs_diff(b.1).pow(2);
                min_d2 = min_d2.min(d2);
            }
        }
        (min_d2 as f64).sqrt() / diag
    };
    FitnessTerms { brightness, spread }
}

pub fn fitness(points: &[(f64, f64)], img: &GrayImage, w: f64) -> f64 {
    fitness_terms(points, img).combine(w)
}

/// Result of a run plus the best fitness after every generation
/// (index 0 is the initial population).
#[derive(Debug, Clone, PartialEq)]
pub struct DeTrace {
    pub best: SeedSolution,
    pub history: Vec<f64>,
}

/// DE/rand/1/bin over flattened `(x0, y0, x1, y1, ...)` vectors with
/// clamping repair and greedy one-to-one replacement.
pub fn evolve_traced(img: &GrayImage, p: &DeParams) -> Result<DeTrace> {
    p.validate()?;
    let (w, h) = img.dims();
    if w < 2 || h < 2 {
        return Err(Error::DegenerateRoi { width: w, height: h });
    }
    let dim = 2 * p.points_per_solution;
    let upper: Vec<f64> = (0..dim)
        .map(|k| if k % 2 == 0 { (w - 1) as f64 } else { (h - 1) as f64 })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(p.rng_seed);
    let eval = |v: &[f64]| fitness(&as_points(v), img, p.brightness_weight);

    let mut pop: Vec<Vec<f64>> = (0..p.population_size)
        .map(|_| upper.iter().map(|&u| rng.random_range(0.0..=u)).collect())
        .collect();
    let mut fit: Vec<f64> = pop.iter().map(|v| eval(v)).collect();
    let best_of = |fit: &[f64]| {
        fit.iter()
            .enumerate()
            .fold(0, |b, (i, &f)| if f > fit[b] { i } else { b })
    };
    let mut history = vec![fit[best_of(&fit)]];

    let n = p.population_size;
    for _ in 0..p.generations {
        for target in 0..n {
            let mut pick = |taken: &[usize]| loop {
                let i = rng.random_range(0..n);
                if !taken.contains(&i) {
                    break i;
                }
            };
            let a = pick(&[target]);
            let b = pick(&[target, a]);
            let c = pick(&[target, a, b]);
            let forced = rng.random_range(0..dim);
            let trial: Vec<f64> = (0..dim)
                .map(|k| {
                    if k == forced || rng.random::<f64>() < p.crossover_rate {
                        let v = pop[a][k] + p.differential_weight * (pop[b][k] - pop[c][k]);
                        v.clamp(0.0, upper[k])
                    } else {
                        pop[target][k]
                    }
                })
                .collect();
            let f = eval(&trial);
            if f >= fit[target] {
                pop[target] = trial;
                fit[target] = f;
            }
        }
        history.push(fit[best_of(&fit)]);
    }
    let best = best_of(&fit);
    Ok(DeTrace {
        best: SeedSolution {
            points: as_points(&pop[best]),
            fitness: fit[best],
        },
        history,
    })
}

pub fn evolve(img: &GrayImage, p: &DeParams) -> Result<SeedSolution> {
    evolve_traced(img, p).map(|t| t.best)
}

fn as_points(v: &[f64]) -> Vec<(f64, f64)> {
    v.chunks_exact(2).map(|c| (c[0], c[1])).collect()
}

/// Rounds solution points to pixels and labels them foreground, dropping duplicates.
pub fn solution_to_seeds(sol: &SeedSolution, img: &GrayImage) -> SeedSet {
    SeedSet::new(sol.points.iter().map(|&p| {
        let (x, y) = pixel_of(p, img);
        Seed::fg(x, y)
    }))
    .expect("foreground-only seeds never conflict")
}

pub fn generate_seeds(img: &GrayImage, p: &DeParams) -> Result<SeedSet> {
    Ok(solution_to_seeds(&evolve(img, p)?, img))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Label;

    #[test]
    fn collapsed_points_on_brightest_pixel() {
        let img = GrayImage::from_fn(8, 8, |x, y| if (x, y) == (3, 5) { 255 } else { 10 }).unwrap();
        let t = fitness_terms(&[(3.0, 5.0); 4], &img);
        assert_eq!(t.spread, 0.0);
        assert_eq!(t.brightness, 1.0);
    }

    #[test]
    fn opposite_corners_on_black() {
        let img = GrayImage::filled(8, 6, 0).unwrap();
        let t = fitness_terms(&[(0.0, 0.0), (7.0, 5.0)], &img);
        assert_eq!(t.brightness, 0.0);
        assert_eq!(t.spread, 1.0);
        assert_eq!(fitness(&[(0.0, 0.0), (7.0, 5.0)], &img, 0.5), 0.5);
    }

    #[test]
    fn single_point_spread_is_one() {
        let img = GrayImage::filled(4, 4, 51).unwrap();
        let t = fitness_terms(&[(1.2, 2.7)], &img);
        assert_eq!(t.spread, 1.0);
        assert!((t.brightness - 0.2).abs() < 1e-12);
    }

    #[test]
    fn rejects_tiny_roi_and_bad_params() {
        let img = GrayImage::filled(1, 5, 0).unwrap();
        assert!(matches!(
            evolve(&img, &DeParams::default()),
            Err(Error::DegenerateRoi { .. })
        ));
        let img = GrayImage::filled(5, 5, 0).unwrap();
        let bad = DeParams {
            population_size: 3,
            ..Default::default()
        };
        assert!(evolve(&img, &bad).is_err());
    }

    #[test]
    fn rounding_and_dedup() {
        let img = GrayImage::filled(6, 6, 0).unwrap();
        let sol = SeedSolution {
            points: vec![(3.4, 2.6), (3.2, 3.1), (0.0, 5.0)],
            fitness: 0.0,
        };
        let seeds = solution_to_seeds(&sol, &img);
        assert_eq!(seeds.seeds(), &[Seed::fg(3, 3), Seed::fg(0, 5)]);
        assert!(seeds.iter().all(|s| s.label == Label::Foreground));
    }

    #[test]
    fn same_seed_same_result() {
        let img = GrayImage::from_fn(16, 12, |x, y| ((x * 13 + y * 7) % 256) as u8).unwrap();
        let p = DeParams {
            points_per_solution: 5,
            generations: 30,
            rng_seed: 99,
            ..Default::default()
        };
        assert_eq!(generate_seeds(&img, &p).unwrap(), generate_seeds(&img, &p).unwrap());
        let other = DeParams { rng_seed: 100, ..p };
        assert_ne!(evolve(&img, &p).unwrap(), evolve(&img, &other).unwrap());
    }

    #[test]
    fn history_is_monotone() {
        let img = GrayImage::from_fn(20, 20, |x, y| ((x * y) % 200) as u8).unwrap();
        let p = DeParams {
            points_per_solution: 6,
            generations: 60,
            rng_seed: 3,
            ..Default::default()
        };
        let t = evolve_traced(&img, &p).unwrap();
        assert_eq!(t.history.len(), 61);
        assert!(t.history.windows(2).all(|w| w[1] >= w[0]));
        assert_eq!(*t.history.last().unwrap(), t.best.fitness);
    }
}
