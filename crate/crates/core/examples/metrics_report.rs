//! Shape and overlap metrics, relative errors and the slope-spectrum test for
//! a deliberately imperfect segmentation.

use growcut::metrics::{metrics_report, shape_stats, slope_spectrum, wilcoxon_signed_rank};
use growcut::morphology::dilate_disc;
use growcut::phantom::{phantom, Shape};

fn main() -> growcut::Result<()> {
    let p = phantom(Shape::Disc);
    let seg = dilate_disc(&p.truth, 2);
    let report = metrics_report(&p.image, &seg, &p.truth)?;
    println!("segmentation {:?}", report.shape);
    println!("ground truth {:?}", report.gt_shape);
    println!("overlap      {:?}", report.overlap);
    for (k, v) in &report.relative_errors {
        println!("  rel. error {k:12} {v:.4}");
    }
    println!("spectrum test: {:?}", report.ssp);

    let spec = slope_spectrum(&p.image, &p.truth)?;
    println!("ground-truth spectrum {:?}", spec.bins);

    for shape in Shape::ALL {
        let s = shape_stats(&phantom(shape).truth)?;
        println!("{:8} form factor {:.3}  solidity {:.3}", shape.name(), s.form_factor, s.solidity);
    }

    let a = [0.12, 0.30, 0.08, 0.25, 0.19, 0.40, 0.22];
    let b = [0.10, 0.21, 0.09, 0.15, 0.11, 0.28, 0.20];
    println!("paired errors: {:?}", wilcoxon_signed_rank(&a, &b, 0.05)?);
    Ok(())
}
