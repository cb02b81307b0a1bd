//! Method selection and per-method parameter blocks.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use growcut::de::{generate_seeds, DeParams};
use growcut::fuzzy::{run_fuzzy, FuzzyGrowCutConfig};
use growcut::growcut::{run, GrowCutConfig};
use growcut::mlt::{run_ssgc, SsgcConfig};
use growcut::regiongrow::{region_grow, RegionGrowConfig};
use growcut::{Error, GrayImage, Result, SeedSet, SegmentationResult};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "growcut")]
    GrowCut,
    #[serde(rename = "fuzzy")]
    FuzzyGrowCut,
    #[serde(rename = "ssgc")]
    Ssgc,
    #[serde(rename = "regiongrow")]
    RegionGrow,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::GrowCut, Method::FuzzyGrowCut, Method::Ssgc, Method::RegionGrow];

    pub fn name(self) -> &'static str {
        match self {
            Method::GrowCut => "growcut",
            Method::FuzzyGrowCut => "fuzzy",
            Method::Ssgc => "ssgc",
            Method::RegionGrow => "regiongrow",
        }
    }

    /// Whether a corpus entry must ship a seed file for this method.
    pub fn needs_seeds(self) -> bool {
        matches!(self, Method::GrowCut | Method::RegionGrow)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown method {s:?} (expected growcut, fuzzy, ssgc or regiongrow)")))
    }
}

/// Parameter blocks for every method; JSON keys mirror the field names and
/// omitted keys take their defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MethodConfig {
    pub growcut: GrowCutConfig,
    pub fuzzy: FuzzyGrowCutConfig,
    pub ssgc: SsgcConfig,
    pub regiongrow: RegionGrowConfig,
    /// Seed search used by Fuzzy GrowCut when no seeds are supplied.
    pub de: DeParams,
}

impl MethodConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::UnreadableFile {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        serde_json::from_str(&text).map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))
    }

    /// Replaces the block of `method` with `params`, which holds that
    /// block's fields (missing ones fall back to the defaults).
    pub fn with_params(mut self, method: Method, params: &serde_json::Value) -> Result<Self> {
        if params.is_null() {
            return Ok(self);
        }
        let bad = |e: serde_json::Error| Error::InvalidParameter(format!("params: {e}"));
        match method {
            Method::GrowCut => self.growcut = serde_json::from_value(params.clone()).map_err(bad)?,
            Method::FuzzyGrowCut => self.fuzzy = serde_json::from_value(params.clone()).map_err(bad)?,
            Method::Ssgc => self.ssgc = serde_json::from_value(params.clone()).map_err(bad)?,
            Method::RegionGrow => self.regiongrow = serde_json::from_value(params.clone()).map_err(bad)?,
        }
        Ok(self)
    }
}

/// Runs one method. GrowCut and region growing need seeds; Fuzzy GrowCut
/// falls back to differential-evolution seeds when none are given; SSGC
/// always seeds itself.
pub fn segment(
    method: Method,
    img: &GrayImage,
    seeds: Option<&SeedSet>,
    cfg: &MethodConfig,
) -> Result<SegmentationResult> {
    let given = seeds.filter(|s| !s.is_empty());
    match method {
        Method::GrowCut => run(img, given.ok_or(Error::NoForegroundSeed)?, &cfg.growcut),
        Method::RegionGrow => region_grow(img, given.ok_or(Error::NoForegroundSeed)?, &cfg.regiongrow),
        Method::FuzzyGrowCut => match given {
            Some(s) => run_fuzzy(img, s, &cfg.fuzzy),
            None => run_fuzzy(img, &generate_seeds(img, &cfg.de)?, &cfg.fuzzy),
        },
        Method::Ssgc => run_ssgc(img, &cfg.ssgc),
    }
}
