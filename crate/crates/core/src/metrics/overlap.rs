use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::BinaryMask;

/// Pixel counts of a segmentation against its ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl Confusion {
    pub fn of(seg: &BinaryMask, gt: &BinaryMask) -> Result<Self> {
        if seg.dims() != gt.dims() {
            return Err(Error::DimensionMismatch(format!(
                "segmentation {:?} vs ground truth {:?}",
                seg.dims(),
                gt.dims()
            )));
        }
        let mut c = Confusion::default();
        for (&s, &g) in seg.bits().iter().zip(gt.bits()) {
            match (s, g) {
                (true, true) => c.tp += 1,
                (true, false) => c.fp += 1,
                (false, false) => c.tn += 1,
                (false, true) => c.fn_ += 1,
            }
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlapStats {
    pub dsc: f64,
    pub sensitivity: f64,
    pub specificity: f64,
    pub bac: f64,
}

/// `a / b`, with an empty reference class counting as fully recovered.
fn rate(a: usize, b: usize) -> f64 {
    if b == 0 {
        1.0
    } else {
        a as f64 / b as f64
    }
}

pub fn bac(sensitivity: f64, specificity: f64) -> f64 {
    (sensitivity + specificity) / 2.0
}

pub fn overlap_stats(seg: &BinaryMask, gt: &BinaryMask) -> Result<OverlapStats> {
    let c = Confusion::of(seg, gt)?;
    let denom = 2 * c.tp + c.fp + c.fn_;
    if denom == 0 {
        return Err(Error::UndefinedDice);
    }
    let sensitivity = rate(c.tp, c.tp + c.fn_);
    let specificity = rate(c.tn, c.tn + c.fp);
    Ok(OverlapStats {
        dsc: 2.0 * c.tp as f64 / denom as f64,
        sensitivity,
        specificity,
        bac: bac(sensitivity, specificity),
    })
}
