//! One seed dropped on the background: Fuzzy GrowCut shrugs it off, while
//! classical GrowCut grows a foreground island around it.

use growcut::fuzzy::{fit_model, run_fuzzy, FuzzyGrowCutConfig};
use growcut::growcut::{run, GrowCutConfig};
use growcut::metrics::overlap_stats;
use growcut::phantom::{phantom, Shape};
use growcut::{Seed, SeedSet};

fn main() -> growcut::Result<()> {
    let p = phantom(Shape::Disc);
    let (mx, my) = p.misplaced_point();
    let stray = Seed::fg(mx, my);
    println!("stray seed at ({mx}, {my})");

    let cfg = FuzzyGrowCutConfig {
        alpha: 4.0,
        ..Default::default()
    };
    let clean = p.fuzzy_seeds();
    let dirty = SeedSet::new(clean.iter().copied().chain([stray]))?;
    for (name, seeds) in [("clean", &clean), ("stray", &dirty)] {
        let m = fit_model(seeds, &cfg)?;
        let res = run_fuzzy(&p.image, seeds, &cfg)?;
        println!(
            "fuzzy   {name}: dsc {:.4}  centre ({:.1}, {:.1})  spread ({:.1}, {:.1})",
            overlap_stats(&res.mask, &p.truth)?.dsc,
            m.x_m,
            m.y_m,
            m.s_x,
            m.s_y
        );
    }

    let clean = p.growcut_seeds();
    let dirty = SeedSet::new(clean.iter().copied().chain([stray]))?;
    for (name, seeds) in [("clean", &clean), ("stray", &dirty)] {
        let res = run(&p.image, seeds, &GrowCutConfig::default())?;
        println!("growcut {name}: dsc {:.4}", overlap_stats(&res.mask, &p.truth)?.dsc);
    }
    Ok(())
}
