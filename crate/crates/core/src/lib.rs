//! Seeded segmentation with the GrowCut cellular automaton.
//!
//! - [`growcut`]: classical GrowCut from labeled foreground/background seeds.
//! - [`fuzzy`]: Fuzzy GrowCut, which needs foreground seeds only.
//! - [`mlt`]: automatic seeding by multilevel thresholding (SSGC pipeline).
//! - [`de`]: automatic seeding by differential evolution.
//! - [`regiongrow`]: intensity-tolerance region growing baseline.
//! - [`metrics`]: shape, overlap and slope-spectrum comparison.

pub mod contour;
pub mod de;
pub mod error;
pub mod fuzzy;
pub mod grid;
pub mod growcut;
pub mod io;
pub mod metrics;
pub mod mlt;
pub mod morphology;
pub mod phantom;
pub mod regiongrow;

pub use error::{Error, Result};
pub use grid::{BinaryMask, Cell, CellGrid, GrayImage, Label, Neighborhood, Seed, SeedSet};
pub use growcut::{GrowCutConfig, SegmentationResult};
