//! Shape, overlap and intensity-signature metrics for comparing a
//! segmentation with its ground truth.

mod overlap;
mod shape;
mod spectrum;
mod wilcoxon;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{BinaryMask, GrayImage};

pub use overlap::{bac, overlap_stats, Confusion, OverlapStats};
pub use shape::{convex_area, shape_stats, ShapeStats};
pub use spectrum::{slope_spectrum, SlopeSpectrum};
pub use wilcoxon::{wilcoxon_signed_rank, WilcoxonResult, EXACT_MAX_N};

/// Significance level for the spectrum comparison.
pub const SSP_ALPHA: f64 = 0.05;

/// Shape metrics compared through relative errors, in report order.
pub const SHAPE_METRICS: [&str; 6] = ["area", "perimeter", "form_factor", "solidity", "feret_x", "feret_y"];

/// `|1 - seg / gt|`.
pub fn relative_error(metric_seg: f64, metric_gt: f64) -> Result<f64> {
    if metric_gt == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok((1.0 - metric_seg / metric_gt).abs())
}

impl ShapeStats {
    pub fn metric(&self, name: &str) -> Option<f64> {
        Some(match name {
            "area" => self.area as f64,
            "perimeter" => self.perimeter,
            "form_factor" => self.form_factor,
            "solidity" => self.solidity,
            "feret_x" => self.feret_x as f64,
            "feret_y" => self.feret_y as f64,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub shape: ShapeStats,
    pub gt_shape: ShapeStats,
    pub overlap: OverlapStats,
    pub relative_errors: BTreeMap<String, f64>,
    pub ssp: WilcoxonResult,
    pub ssp_pvalue: f64,
}

/// Everything for one (segmentation, ground truth) pair. The slope spectra
/// of `img` under each mask are compared bin by bin with the signed-rank
/// test. A zero ground-truth metric gives relative error 0 when the
/// segmentation matches it and is an error otherwise.
pub fn metrics_report(img: &GrayImage, seg: &BinaryMask, gt: &BinaryMask) -> Result<MetricsReport> {
    let overlap = overlap_stats(seg, gt)?;
    let shape = shape_stats(seg)?;
    let gt_shape = shape_stats(gt)?;
    let mut relative_errors = BTreeMap::new();
    for name in SHAPE_METRICS {
        let (s, g) = (shape.metric(name).unwrap(), gt_shape.metric(name).unwrap());
        let e = if g == 0.0 && s == 0.0 { 0.0 } else { relative_error(s, g)? };
        relative_errors.insert(name.to_string(), e);
    }
    let (a, b) = slope_spectrum(img, seg)?.paired(&slope_spectrum(img, gt)?);
    let ssp = if a.is_empty() {
        WilcoxonResult {
            w_plus: 0.0,
            n: 0,
            p_value: 1.0,
            reject: false,
            exact: true,
        }
    } else {
        wilcoxon_signed_rank(&a, &b, SSP_ALPHA)?
    };
    Ok(MetricsReport {
        shape,
        gt_shape,
        overlap,
        relative_errors,
        ssp_pvalue: ssp.p_value,
        ssp,
    })
}
