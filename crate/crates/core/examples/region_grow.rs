//! Region-growing baseline against GrowCut as the tolerance varies.

use growcut::growcut::{run, GrowCutConfig};
use growcut::metrics::overlap_stats;
use growcut::phantom::{phantom, Shape};
use growcut::regiongrow::{region_grow, Criterion, RegionGrowConfig};

fn main() -> growcut::Result<()> {
    let p = phantom(Shape::Star);
    let seeds = p.growcut_seeds();
    let gc = run(&p.image, &seeds, &GrowCutConfig::default())?;
    println!("growcut          dsc {:.4}", overlap_stats(&gc.mask, &p.truth)?.dsc);
    for criterion in [Criterion::SeedMean, Criterion::RunningMean] {
        for tolerance in [10.0, 25.0, 40.0, 80.0] {
            let cfg = RegionGrowConfig {
                tolerance,
                criterion,
                ..Default::default()
            };
            let res = region_grow(&p.image, &seeds, &cfg)?;
            println!(
                "{criterion:?} t={tolerance:<4} dsc {:.4}  area {}",
                overlap_stats(&res.mask, &p.truth)?.dsc,
                res.mask.count()
            );
        }
    }
    Ok(())
}
