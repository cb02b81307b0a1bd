//! Image, automaton-grid, seed and mask types shared by every segmentation method.
//!
//! All grids are row-major with the origin at the top-left corner; `x` is the
//! column index and `y` the row index.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 8-bit grayscale raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ZeroDimension { width, height });
        }
        if pixels.len() != width * height {
            return Err(Error::BufferSize {
                expected: width * height,
                actual: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Constant image.
    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn max(&self) -> u8 {
        self.pixels.iter().copied().max().unwrap_or(0)
    }

    pub fn min(&self) -> u8 {
        self.pixels.iter().copied().min().unwrap_or(0)
    }

    pub fn mean(&self) -> f64 {
        self.pixels.iter().map(|&p| f64::from(p)).sum::<f64>() / self.pixels.len() as f64
    }

    /// Extracts the `w`×`h` sub-image whose top-left corner is `(x0, y0)`.
    pub fn crop_roi(&self, x0: usize, y0: usize, w: usize, h: usize) -> Result<GrayImage> {
        let fits = w >= 1
            && h >= 1
            && x0.checked_add(w).is_some_and(|r| r <= self.width)
            && y0.checked_add(h).is_some_and(|b| b <= self.height);
        if !fits {
            return Err(Error::OutOfBounds {
                x0,
                y0,
                w,
                h,
                width: self.width,
                height: self.height,
            });
        }
        GrayImage::from_fn(w, h, |x, y| self.get(x0 + x, y0 + y))
    }
}

/// Cell label of the automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Label {
    #[default]
    Unlabeled,
    #[serde(rename = "fg")]
    Foreground,
    #[serde(rename = "bg")]
    Background,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Cell {
    pub label: Label,
    pub strength: f64,
}

impl Cell {
    pub const EMPTY: Cell = Cell {
        label: Label::Unlabeled,
        strength: 0.0,
    };

    pub fn seed(label: Label) -> Cell {
        Cell {
            label,
            strength: 1.0,
        }
    }
}

/// Per-pixel automaton state (label and strength).
#[derive(Debug, Clone, PartialEq)]
pub struct CellGrid {
    width: usize,
    height: usize,
    cells: Vec<Cell>,
}

impl CellGrid {
    /// Grid with every cell unlabeled and at zero strength.
    pub fn empty(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            cells: vec![Cell::EMPTY; width * height],
        }
    }

    pub(crate) fn from_cells(width: usize, height: usize, cells: Vec<Cell>) -> Self {
        debug_assert_eq!(cells.len(), width * height);
        Self {
            width,
            height,
            cells,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Cell {
        self.cells[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, cell: Cell) {
        self.cells[y * self.width + x] = cell;
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.cells.iter().map(|c| c.label)
    }

    /// Foreground cells become mask foreground; unlabeled and background cells do not.
    pub fn foreground_mask(&self) -> BinaryMask {
        BinaryMask {
            width: self.width,
            height: self.height,
            bits: self
                .cells
                .iter()
                .map(|c| c.label == Label::Foreground)
                .collect(),
        }
    }

    pub(crate) fn check_dims(&self, img: &GrayImage) -> Result<()> {
        if self.dims() != img.dims() {
            return Err(Error::DimensionMismatch(format!(
                "grid is {}x{}, image is {}x{}",
                self.width,
                self.height,
                img.width(),
                img.height()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed {
    pub x: usize,
    pub y: usize,
    pub label: Label,
}

impl Seed {
    pub fn fg(x: usize, y: usize) -> Self {
        Seed {
            x,
            y,
            label: Label::Foreground,
        }
    }

    pub fn bg(x: usize, y: usize) -> Self {
        Seed {
            x,
            y,
            label: Label::Background,
        }
    }
}

/// Labeled seed pixels. Construction removes exact duplicates and rejects
/// coordinates that carry two different labels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SeedSet {
    seeds: Vec<Seed>,
}

impl SeedSet {
    pub fn new(seeds: impl IntoIterator<Item = Seed>) -> Result<Self> {
        let mut seen: HashMap<(usize, usize), Label> = HashMap::new();
        let mut out = Vec::new();
        for s in seeds {
            if s.label == Label::Unlabeled {
                return Err(Error::UnlabeledSeed);
            }
            match seen.get(&(s.x, s.y)) {
                Some(&l) if l == s.label => continue,
                Some(_) => return Err(Error::ConflictingSeed { x: s.x, y: s.y }),
                None => {
                    seen.insert((s.x, s.y), s.label);
                    out.push(s);
                }
            }
        }
        Ok(Self { seeds: out })
    }

    /// Builds a set and checks every seed against the image bounds.
    pub fn for_image(seeds: impl IntoIterator<Item = Seed>, img: &GrayImage) -> Result<Self> {
        let set = Self::new(seeds)?;
        set.validate(img.width(), img.height())?;
        Ok(set)
    }

    pub fn validate(&self, width: usize, height: usize) -> Result<()> {
        match self.seeds.iter().find(|s| s.x >= width || s.y >= height) {
            Some(s) => Err(Error::SeedOutOfBounds {
                x: s.x as i64,
                y: s.y as i64,
                width,
                height,
            }),
            None => Ok(()),
        }
    }

    pub fn seeds(&self) -> &[Seed] {
        &self.seeds
    }

    pub fn len(&self) -> usize {
        self.seeds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seeds.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Seed> {
        self.seeds.iter()
    }

    pub fn foreground(&self) -> impl Iterator<Item = &Seed> {
        self.seeds.iter().filter(|s| s.label == Label::Foreground)
    }

    pub fn background(&self) -> impl Iterator<Item = &Seed> {
        self.seeds.iter().filter(|s| s.label == Label::Background)
    }

    pub fn has_foreground(&self) -> bool {
        self.foreground().next().is_some()
    }
}

/// Row-major foreground/background flags.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BinaryMask {
    pub fn empty(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn full(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![true; width * height],
        }
    }

    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ZeroDimension { width, height });
        }
        if bits.len() != width * height {
            return Err(Error::BufferSize {
                expected: width * height,
                actual: bits.len(),
            });
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                bits.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            bits,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    /// Like `get` but treats out-of-bounds coordinates as background.
    #[inline]
    pub fn get_signed(&self, x: isize, y: isize) -> bool {
        x >= 0
            && y >= 0
            && (x as usize) < self.width
            && (y as usize) < self.height
            && self.bits[y as usize * self.width + x as usize]
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.bits[y * self.width + x] = value;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// Foreground coordinates in row-major order.
    pub fn foreground(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i % w, i / w))
    }

    pub fn union(&self, other: &BinaryMask) -> BinaryMask {
        debug_assert_eq!(self.dims(), other.dims());
        BinaryMask {
            width: self.width,
            height: self.height,
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a || b)
                .collect(),
        }
    }

    pub fn is_subset_of(&self, other: &BinaryMask) -> bool {
        self.dims() == other.dims() && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Neighborhood {
    #[default]
    Moore8,
    VonNeumann4,
}

const MOORE: [(isize, isize); 8] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (-1, 0),
    (1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];
const VON_NEUMANN: [(isize, isize); 4] = [(0, -1), (-1, 0), (1, 0), (0, 1)];

impl Neighborhood {
    /// `(dx, dy)` offsets in row-major scan order.
    pub fn offsets(self) -> &'static [(isize, isize)] {
        match self {
            Neighborhood::Moore8 => &MOORE,
            Neighborhood::VonNeumann4 => &VON_NEUMANN,
        }
    }
}

/// In-bounds neighbors of `(x, y)` in row-major offset order.
pub fn neighbors(
    width: usize,
    height: usize,
    x: usize,
    y: usize,
    n: Neighborhood,
) -> Vec<(usize, usize)> {
    n.offsets()
        .iter()
        .filter_map(|&(dx, dy)| offset(width, height, x, y, dx, dy))
        .collect()
}

#[inline]
pub(crate) fn offset(
    width: usize,
    height: usize,
    x: usize,
    y: usize,
    dx: isize,
    dy: isize,
) -> Option<(usize, usize)> {
    let nx = x.checked_add_signed(dx)?;
    let ny = y.checked_add_signed(dy)?;
    (nx < width && ny < height).then_some((nx, ny))
}
