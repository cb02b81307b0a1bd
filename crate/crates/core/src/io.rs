//! File I/O for images (binary PGM and grayscale PNG), masks and seed lists.
//!
//! Masks use 0 for background and 255 for foreground; any nonzero sample reads
//! back as foreground. Seeds are stored either as a JSON array of
//! `{"x": int, "y": int, "label": "fg" | "bg"}` objects or as `x,y,label` CSV.

use std::io::Cursor;
use std::path::Path;

use image::{DynamicImage, ImageFormat};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{BinaryMask, GrayImage, Label, Seed, SeedSet};

const PNG_MAGIC: &[u8] = b"\x89PNG\r\n\x1a\n";

fn unreadable(path: &Path, reason: impl Into<String>) -> Error {
    Error::UnreadableFile {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

pub fn load_gray_image(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| unreadable(path, e.to_string()))?;
    decode_gray_image(&bytes).map_err(|e| match e {
        Error::UnreadableFile { reason, .. } => unreadable(path, reason),
        other => other,
    })
}

/// Decodes PGM (P5) or PNG bytes, sniffing the format from the header.
pub fn decode_gray_image(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.starts_with(b"P5") {
        decode_pgm(bytes)
    } else if bytes.starts_with(PNG_MAGIC) {
        decode_png(bytes)
    } else {
        Err(Error::UnsupportedFormat(
            "expected a binary PGM (P5) or PNG file".into(),
        ))
    }
}

fn pgm_error(reason: &str) -> Error {
    Error::UnreadableFile {
        path: Default::default(),
        reason: reason.to_string(),
    }
}

fn decode_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in &mut fields {
        // whitespace and comments
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                Some(_) => break,
                None => return Err(pgm_error("truncated PGM header")),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err(pgm_error("malformed PGM header"));
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| pgm_error("malformed PGM header"))?;
    }
    // exactly one whitespace byte separates the header from the raster
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(pgm_error("truncated PGM header"));
    }
    pos += 1;
    let [width, height, maxval] = fields;
    if width == 0 || height == 0 {
        return Err(Error::ZeroDimension { width, height });
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::UnsupportedFormat(format!("PGM maxval {maxval}")));
    }
    let n = width * height;
    let data = &bytes[pos..];
    let pixels = if maxval < 256 {
        if data.len() < n {
            return Err(pgm_error("truncated PGM raster"));
        }
        if maxval == 255 {
            data[..n].to_vec()
        } else {
            data[..n]
                .iter()
                .map(|&v| ((v as usize).min(maxval) * 255 / maxval) as u8)
                .collect()
        }
    } else {
        if data.len() < 2 * n {
            return Err(pgm_error("truncated PGM raster"));
        }
        data[..2 * n]
            .chunks_exact(2)
            .map(|c| {
                let v = (u16::from_be_bytes([c[0], c[1]]) as usize).min(maxval);
                (v * 255 / maxval) as u8
            })
            .collect()
    };
    GrayImage::new(width, height, pixels)
}

fn decode_png(bytes: &[u8]) -> Result<GrayImage> {
    let img = image::load_from_memory_with_format(bytes, ImageFormat::Png)
        .map_err(|e| pgm_error(&e.to_string()))?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    let pixels = match img {
        DynamicImage::ImageLuma8(buf) => buf.into_raw(),
        DynamicImage::ImageLumaA8(buf) => buf.into_raw().chunks_exact(2).map(|c| c[0]).collect(),
        DynamicImage::ImageLuma16(buf) => {
            buf.into_raw().into_iter().map(|v| (v / 257) as u8).collect()
        }
        other => {
            return Err(Error::UnsupportedFormat(format!(
                "PNG color type {:?} is not grayscale",
                other.color()
            )))
        }
    };
    GrayImage::new(w, h, pixels)
}

pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}

pub fn encode_png(img: &GrayImage) -> Vec<u8> {
    let buf = image::GrayImage::from_raw(
        img.width() as u32,
        img.height() as u32,
        img.pixels().to_vec(),
    )
    .expect("buffer size checked at construction");
    let mut out = Cursor::new(Vec::new());
    buf.write_to(&mut out, ImageFormat::Png)
        .expect("in-memory PNG encoding");
    out.into_inner()
}

/// Writes PNG unless the extension is `.pgm`.
pub fn save_gray_image(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes = if is_pgm(path) {
        encode_pgm(img)
    } else {
        encode_png(img)
    };
    std::fs::write(path, bytes)?;
    Ok(())
}

fn is_pgm(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("pgm"))
}

pub fn mask_to_image(mask: &BinaryMask) -> GrayImage {
    GrayImage::new(
        mask.width(),
        mask.height(),
        mask.bits().iter().map(|&b| if b { 255 } else { 0 }).collect(),
    )
    .expect("mask dims are non-zero")
}

pub fn image_to_mask(img: &GrayImage) -> BinaryMask {
    BinaryMask::new(
        img.width(),
        img.height(),
        img.pixels().iter().map(|&p| p != 0).collect(),
    )
    .expect("image dims are non-zero")
}

pub fn load_mask(path: impl AsRef<Path>) -> Result<BinaryMask> {
    load_gray_image(path).map(|img| image_to_mask(&img))
}

pub fn save_mask(mask: &BinaryMask, path: impl AsRef<Path>) -> Result<()> {
    save_gray_image(&mask_to_image(mask), path)
}

/// Wire form of one seed; coordinates are signed so that negative values
/// surface as bounds errors instead of parse failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRecord {
    pub x: i64,
    pub y: i64,
    pub label: SeedLabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeedLabel {
    #[serde(rename = "fg")]
    Fg,
    #[serde(rename = "bg")]
    Bg,
}

impl From<&Seed> for SeedRecord {
    fn from(s: &Seed) -> Self {
        SeedRecord {
            x: s.x as i64,
            y: s.y as i64,
            label: match s.label {
                Label::Background => SeedLabel::Bg,
                _ => SeedLabel::Fg,
            },
        }
    }
}

/// Converts wire records to a seed set, rejecting negative coordinates.
/// Upper bounds are checked separately against the image.
pub fn records_to_seeds(records: &[SeedRecord]) -> Result<SeedSet> {
    let seeds = records
        .iter()
        .map(|r| {
            if r.x < 0 || r.y < 0 {
                return Err(Error::SeedOutOfBounds {
                    x: r.x,
                    y: r.y,
                    width: 0,
                    height: 0,
                });
            }
            Ok(Seed {
                x: r.x as usize,
                y: r.y as usize,
                label: match r.label {
                    SeedLabel::Fg => Label::Foreground,
                    SeedLabel::Bg => Label::Background,
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SeedSet::new(seeds)
}

pub fn seeds_to_records(seeds: &SeedSet) -> Vec<SeedRecord> {
    seeds.iter().map(SeedRecord::from).collect()
}

pub fn seeds_to_json(seeds: &SeedSet) -> String {
    serde_json::to_string(&seeds_to_records(seeds)).expect("seed records serialize")
}

pub fn seeds_from_json(text: &str) -> Result<SeedSet> {
    let records: Vec<SeedRecord> =
        serde_json::from_str(text).map_err(|e| Error::SeedFormat(e.to_string()))?;
    records_to_seeds(&records)
}

pub fn seeds_to_csv(seeds: &SeedSet) -> String {
    let mut out = String::from("x,y,label\n");
    for r in seeds_to_records(seeds) {
        let label = match r.label {
            SeedLabel::Fg => "fg",
            SeedLabel::Bg => "bg",
        };
        out.push_str(&format!("{},{},{}\n", r.x, r.y, label));
    }
    out
}

/// Parses `x,y,label` rows; a leading `x,y,label` header is optional.
pub fn seeds_from_csv(text: &str) -> Result<SeedSet> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| Error::SeedFormat(e.to_string()))?;
        if i == 0 && row.get(0) == Some("x") {
            continue;
        }
        if row.len() != 3 {
            return Err(Error::SeedFormat(format!(
                "row {} has {} fields",
                i + 1,
                row.len()
            )));
        }
        let coord = |k: usize| {
            row[k]
                .parse::<i64>()
                .map_err(|_| Error::SeedFormat(format!("row {}: bad coordinate {:?}", i + 1, &row[k])))
        };
        let label = match &row[2] {
            "fg" => SeedLabel::Fg,
            "bg" => SeedLabel::Bg,
            other => {
                return Err(Error::SeedFormat(format!(
                    "row {}: unknown label {other:?}",
                    i + 1
                )))
            }
        };
        records.push(SeedRecord {
            x: coord(0)?,
            y: coord(1)?,
            label,
        });
    }
    records_to_seeds(&records)
}

/// Loads seeds from `.json` or `.csv` (chosen by extension).
pub fn load_seeds(path: impl AsRef<Path>) -> Result<SeedSet> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| unreadable(path, e.to_string()))?;
    match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("csv") => seeds_from_csv(&text),
        _ => seeds_from_json(&text),
    }
}

pub fn save_seeds(seeds: &SeedSet, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("csv") => seeds_to_csv(seeds),
        _ => seeds_to_json(seeds),
    };
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn decodes_small_pgm() {
        let mut bytes = b"P5\n2 2\n255\n".to_vec();
        bytes.extend([0, 128, 255, 64]);
        let img = decode_gray_image(&bytes).unwrap();
        assert_eq!(img.dims(), (2, 2));
        assert_eq!(img.pixels(), &[0, 128, 255, 64]);
    }

    #[test]
    fn decodes_single_pixel_with_comment() {
        let mut bytes = b"P5 # one pixel\n1 1\n255\n".to_vec();
        bytes.push(255);
        assert_eq!(decode_gray_image(&bytes).unwrap().pixels(), &[255]);
    }

    #[test]
    fn sixteen_bit_pgm_is_rescaled() {
        let mut bytes = b"P5\n3 1\n65535\n".to_vec();
        for v in [0u16, 32896, 65535] {
            bytes.extend(v.to_be_bytes());
        }
        assert_eq!(decode_gray_image(&bytes).unwrap().pixels(), &[0, 128, 255]);
    }

    #[test]
    fn truncated_file_is_unreadable() {
        let mut bytes = b"P5\n2 2\n255\n".to_vec();
        bytes.extend([1, 2]);
        assert!(matches!(
            decode_gray_image(&bytes),
            Err(Error::UnreadableFile { .. })
        ));
        assert!(matches!(
            decode_gray_image(b"P5\n2"),
            Err(Error::UnreadableFile { .. })
        ));
    }

    #[test]
    fn zero_dimension_and_unknown_format() {
        assert!(matches!(
            decode_gray_image(b"P5\n0 2\n255\n"),
            Err(Error::ZeroDimension { .. })
        ));
        assert!(matches!(
            decode_gray_image(b"GIF89a"),
            Err(Error::UnsupportedFormat(_))
        ));
    }

    #[test]
    fn missing_file_is_unreadable() {
        assert!(matches!(
            load_gray_image("/nonexistent/nothing.pgm"),
            Err(Error::UnreadableFile { .. })
        ));
    }

    #[test]
    fn seed_formats_parse() {
        let json = r#"[{"x":1,"y":2,"label":"fg"},{"x":0,"y":0,"label":"bg"}]"#;
        let a = seeds_from_json(json).unwrap();
        let b = seeds_from_csv("x,y,label\n1,2,fg\n0,0,bg\n").unwrap();
        let c = seeds_from_csv("1, 2, fg\n0,0,bg").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.seeds()[0], Seed::fg(1, 2));
        assert!(seeds_from_json(r#"[{"x":-1,"y":2,"label":"fg"}]"#).is_err());
        assert!(seeds_from_csv("1,2,maybe").is_err());
        assert!(seeds_from_json(r#"[{"x":1,"y":2,"label":"obj"}]"#).is_err());
    }

    #[test]
    fn seed_files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let seeds = SeedSet::new([Seed::fg(3, 4), Seed::bg(0, 9)]).unwrap();
        for name in ["s.json", "s.csv"] {
            let p = dir.path().join(name);
            save_seeds(&seeds, &p).unwrap();
            assert_eq!(load_seeds(&p).unwrap(), seeds);
        }
    }

    fn arb_image() -> impl Strategy<Value = GrayImage> {
        (1usize..9, 1usize..9).prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<u8>(), w * h)
                .prop_map(move |px| GrayImage::new(w, h, px).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn image_files_round_trip(img in arb_image(), png in any::<bool>()) {
            let dir = tempfile::tempdir().unwrap();
            let p = dir.path().join(if png { "a.png" } else { "a.pgm" });
            save_gray_image(&img, &p).unwrap();
            prop_assert_eq!(load_gray_image(&p).unwrap(), img);
        }

        #[test]
        fn mask_files_round_trip(img in arb_image(), png in any::<bool>()) {
            let mask = BinaryMask::from_fn(img.width(), img.height(), |x, y| img.get(x, y) > 127);
            let dir = tempfile::tempdir().unwrap();
            let p = dir.path().join(if png { "m.png" } else { "m.pgm" });
            save_mask(&mask, &p).unwrap();
            prop_assert_eq!(load_mask(&p).unwrap(), mask);
        }
    }
}
