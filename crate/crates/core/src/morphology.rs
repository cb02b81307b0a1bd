//! Binary-mask helpers: connected components, disc dilation, centroids.

use std::collections::VecDeque;

use crate::grid::{offset, BinaryMask, Neighborhood};

/// Component id per pixel (`None` for background) plus component areas;
/// ids are assigned in row-major order of each component's first pixel.
pub fn label_components(mask: &BinaryMask, conn: Neighborhood) -> (Vec<Option<usize>>, Vec<usize>) {
    let (w, h) = mask.dims();
    let mut ids = vec![None; w * h];
    let mut areas = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..w * h {
        if !mask.bits()[start] || ids[start].is_some() {
            continue;
        }
        let id = areas.len();
        let mut area = 0;
        ids[start] = Some(id);
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            area += 1;
            let (x, y) = (i % w, i / w);
            for &(dx, dy) in conn.offsets() {
                if let Some((nx, ny)) = offset(w, h, x, y, dx, dy) {
                    let j = ny * w + nx;
                    if mask.bits()[j] && ids[j].is_none() {
                        ids[j] = Some(id);
                        queue.push_back(j);
                    }
                }
            }
        }
        areas.push(area);
    }
    (ids, areas)
}

/// Largest connected component (first one in scan order on ties); empty
/// mask when there is no foreground.
pub fn largest_component(mask: &BinaryMask, conn: Neighborhood) -> BinaryMask {
    let (ids, areas) = label_components(mask, conn);
    let best = areas
        .iter()
        .enumerate()
        .fold(None, |acc: Option<(usize, usize)>, (i, &a)| match acc {
            Some((_, best)) if best >= a => acc,
            _ => Some((i, a)),
        });
    let (w, h) = mask.dims();
    match best {
        None => BinaryMask::empty(w, h),
        Some((id, _)) => BinaryMask::new(w, h, ids.iter().map(|&c| c == Some(id)).collect())
            .expect("dims come from an existing mask"),
    }
}

/// Dilation by a Euclidean disc of the given radius, clipped to the frame.
pub fn dilate_disc(mask: &BinaryMask, radius: usize) -> BinaryMask {
    let (w, h) = mask.dims();
    let r = radius as isize;
    let disc: Vec<(isize, isize)> = (-r..=r)
        .flat_map(|dy| (-r..=r).map(move |dx| (dx, dy)))
        .filter(|&(dx, dy)| dx * dx + dy * dy <= r * r)
        .collect();
    let mut out = BinaryMask::empty(w, h);
    for (x, y) in mask.foreground() {
        for &(dx, dy) in &disc {
            if let Some((nx, ny)) = offset(w, h, x, y, dx, dy) {
                out.set(nx, ny, true);
            }
        }
    }
    out
}

/// Foreground pixels with at least one in-bounds 4-neighbor outside the mask.
pub fn inner_boundary(mask: &BinaryMask) -> BinaryMask {
    let (w, h) = mask.dims();
    BinaryMask::from_fn(w, h, |x, y| {
        mask.get(x, y)
            && Neighborhood::VonNeumann4
                .offsets()
                .iter()
                .filter_map(|&(dx, dy)| offset(w, h, x, y, dx, dy))
                .any(|(nx, ny)| !mask.get(nx, ny))
    })
}

/// Mean foreground coordinate, `None` for an empty mask.
pub fn centroid(mask: &BinaryMask) -> Option<(f64, f64)> {
    let (mut sx, mut sy, mut n) = (0.0, 0.0, 0usize);
    for (x, y) in mask.foreground() {
        sx += x as f64;
        sy += y as f64;
        n += 1;
    }
    (n > 0).then(|| (sx / n as f64, sy / n as f64))
}
