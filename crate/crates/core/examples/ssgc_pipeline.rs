//! Automatic seeding by diffusion + multilevel thresholding, then GrowCut.
//!
//!     cargo run --example ssgc_pipeline [stage_dir]

use growcut::growcut::run;
use growcut::metrics::overlap_stats;
use growcut::mlt::{dump_stages, ssgc_stages, threshold_schedule, SsgcConfig};
use growcut::phantom::{phantom, Shape};

fn main() -> growcut::Result<()> {
    let cfg = SsgcConfig::default();
    for shape in Shape::ALL {
        let p = phantom(shape);
        let stages = ssgc_stages(&p.image, &cfg)?;
        let res = run(&p.image, &stages.seeds, &cfg.growcut)?;
        println!(
            "{:8} thresholds {:?}",
            shape.name(),
            threshold_schedule(&stages.diffused, &cfg.mlt)
        );
        println!(
            "         region {} px, seeds {} fg / {} bg, dsc {:.4}",
            stages.region.count(),
            stages.seeds.foreground().count(),
            stages.seeds.background().count(),
            overlap_stats(&res.mask, &p.truth)?.dsc
        );
        if let Some(dir) = std::env::args().nth(1) {
            let dir = std::path::Path::new(&dir).join(shape.name());
            std::fs::create_dir_all(&dir)?;
            dump_stages(&stages, &dir)?;
        }
    }
    Ok(())
}
