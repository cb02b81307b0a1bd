//! Contour polylines and colour overlays.

use growcut::contour::trace_all;
use growcut::{BinaryMask, GrayImage};
use image::{Rgb, RgbImage};

pub const SEGMENTATION: Rgb<u8> = Rgb([0, 255, 0]);
pub const GROUND_TRUTH: Rgb<u8> = Rgb([0, 0, 0]);

/// Outer contour of the largest 8-connected component (the first one on
/// ties), as boundary pixels in clockwise order; empty for an empty mask.
pub fn main_contour(mask: &BinaryMask) -> Vec<[usize; 2]> {
    trace_all(mask)
        .into_iter()
        .map(|c| c.points())
        .fold(Vec::new(), |best, pts| if pts.len() > best.len() { pts } else { best })
        .into_iter()
        .map(|(x, y)| [x, y])
        .collect()
}

/// Gray image with the ground-truth outline in black and the segmentation
/// outline in green on top.
pub fn draw_overlay(img: &GrayImage, seg: &BinaryMask, gt: Option<&BinaryMask>) -> RgbImage {
    let (w, h) = img.dims();
    let mut out = RgbImage::from_fn(w as u32, h as u32, |x, y| {
        let v = img.get(x as usize, y as usize);
        Rgb([v, v, v])
    });
    let mut paint = |mask: &BinaryMask, colour: Rgb<u8>| {
        for c in trace_all(mask) {
            for (x, y) in c.points() {
                out.put_pixel(x as u32, y as u32, colour);
            }
        }
    };
    if let Some(gt) = gt {
        paint(gt, GROUND_TRUTH);
    }
    paint(seg, SEGMENTATION);
    out
}
