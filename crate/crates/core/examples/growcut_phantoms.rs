//! Classical GrowCut on the three noisy phantoms with six seeds per class.
//!
//!     cargo run --example growcut_phantoms [out_dir]

use std::path::PathBuf;
use std::time::Instant;

use growcut::growcut::{run, GrowCutConfig};
use growcut::io::{save_gray_image, save_mask, save_seeds};
use growcut::metrics::overlap_stats;
use growcut::phantom::{phantom, Shape};

fn main() -> growcut::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from);
    if let Some(dir) = &out {
        std::fs::create_dir_all(dir)?;
    }
    for shape in Shape::ALL {
        let p = phantom(shape);
        let seeds = p.growcut_seeds();
        let t = Instant::now();
        let res = run(&p.image, &seeds, &GrowCutConfig::default())?;
        let ov = overlap_stats(&res.mask, &p.truth)?;
        println!(
            "{:8} dsc {:.4}  sens {:.4}  spec {:.4}  generations {:3}  {:?}",
            shape.name(),
            ov.dsc,
            ov.sensitivity,
            ov.specificity,
            res.iterations_used,
            t.elapsed()
        );
        if let Some(dir) = &out {
            save_gray_image(&p.image, dir.join(format!("{}.png", shape.name())))?;
            save_mask(&res.mask, dir.join(format!("{}.mask.png", shape.name())))?;
            save_seeds(&seeds, dir.join(format!("{}.seeds.json", shape.name())))?;
        }
    }
    Ok(())
}
