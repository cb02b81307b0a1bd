use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{BinaryMask, GrayImage};

/// Histogram of increasing-run lengths: run length → count.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SlopeSpectrum {
    pub bins: BTreeMap<usize, usize>,
}

impl SlopeSpectrum {
    pub fn count(&self, len: usize) -> usize {
        self.bins.get(&len).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    /// Counts of both spectra over the union of their bins, in ascending length.
    pub fn paired(&self, other: &SlopeSpectrum) -> (Vec<f64>, Vec<f64>) {
        let mut keys: Vec<usize> = self.bins.keys().chain(other.bins.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        keys.iter()
            .map(|&k| (self.count(k) as f64, other.count(k) as f64))
            .unzip()
    }
}

/// Scans each row, splits it into horizontally contiguous masked segments
/// and records the lengths of maximal strictly increasing runs (length ≥ 2).
pub fn slope_spectrum(img: &GrayImage, mask: &BinaryMask) -> Result<SlopeSpectrum> {
    if img.dims() != mask.dims() {
        return Err(Error::DimensionMismatch(format!(
            "image {:?} vs mask {:?}",
            img.dims(),
            mask.dims()
        )));
    }
    if mask.is_empty() {
        return Err(Error::EmptyMask);
    }
    let mut bins = BTreeMap::new();
    let (w, h) = img.dims();
    for y in 0..h {
        let mut run = 0usize;
        let mut prev: Option<u8> = None;
        for x in 0..=w {
            let v = (x < w && mask.get(x, y)).then(|| img.get(x, y));
            match (prev, v) {
                (Some(p), Some(c)) if c > p => run += 1,
                _ => {
                    if run >= 2 {
                        *bins.entry(run).or_insert(0) += 1;
                    }
                    run = usize::from(v.is_some());
                }
            }
            prev = v;
        }
    }
    Ok(SlopeSpectrum { bins })
}
