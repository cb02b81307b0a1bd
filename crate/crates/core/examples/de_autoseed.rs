//! Differential-evolution seed search on a phantom, followed by Fuzzy GrowCut
//! on the evolved foreground seeds.

use growcut::de::{evolve_traced, fitness_terms, solution_to_seeds, DeParams};
use growcut::fuzzy::{run_fuzzy, FuzzyGrowCutConfig};
use growcut::metrics::overlap_stats;
use growcut::phantom::{phantom, Shape};

fn main() -> growcut::Result<()> {
    let p = phantom(Shape::Ellipse);
    let params = DeParams {
        rng_seed: 42,
        ..Default::default()
    };
    let trace = evolve_traced(&p.image, &params)?;
    for (g, f) in trace.history.iter().enumerate().step_by(20) {
        println!("generation {g:3}: best fitness {f:.4}");
    }
    let terms = fitness_terms(&trace.best.points, &p.image);
    println!(
        "final {:.4} (brightness {:.4}, spread {:.4})",
        trace.best.fitness, terms.brightness, terms.spread
    );
    let seeds = solution_to_seeds(&trace.best, &p.image);
    let inside = seeds.iter().filter(|s| p.truth.get(s.x, s.y)).count();
    println!("{} distinct seeds, {inside} on the object", seeds.len());

    let res = run_fuzzy(&p.image, &seeds, &FuzzyGrowCutConfig::default())?;
    println!("fuzzy growcut dsc {:.4}", overlap_stats(&res.mask, &p.truth)?.dsc);
    Ok(())
}
