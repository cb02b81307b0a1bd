use serde::{Deserialize, Serialize};

use crate::contour::trace_all;
use crate::error::{Error, Result};
use crate::grid::BinaryMask;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeStats {
    pub area: usize,
    pub perimeter: f64,
    pub form_factor: f64,
    pub solidity: f64,
    pub feret_x: usize,
    pub feret_y: usize,
}

/// Area, outline perimeter summed over 8-connected components, `4π·A/P²`,
/// area over convex-hull area, and the axis-aligned extents.
pub fn shape_stats(mask: &BinaryMask) -> Result<ShapeStats> {
    let pts: Vec<(usize, usize)> = mask.foreground().collect();
    if pts.is_empty() {
        return Err(Error::EmptyMask);
    }
    let area = pts.len();
    let perimeter: f64 = trace_all(mask).iter().map(|c| c.perimeter()).sum();
    let form_factor = 4.0 * std::f64::consts::PI * area as f64 / (perimeter * perimeter);
    let (mut x0, mut x1, mut y0, mut y1) = (usize::MAX, 0, usize::MAX, 0);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    Ok(ShapeStats {
        area,
        perimeter,
        form_factor,
        solidity: area as f64 / convex_area(&pts) as f64,
        feret_x: x1 - x0 + 1,
        feret_y: y1 - y0 + 1,
    })
}

/// Number of lattice points inside or on the convex hull of `pts`.
pub fn convex_area(pts: &[(usize, usize)]) -> usize {
    let hull = convex_hull(pts.iter().map(|&(x, y)| (x as i64, y as i64)).collect());
    match hull.len() {
        0 => 0,
        1 => 1,
        2 => gcd(hull[0].0.abs_diff(hull[1].0), hull[0].1.abs_diff(hull[1].1)) as usize + 1,
        n => {
            // Pick: A = I + B/2 - 1, so I + B = (2A + B + 2) / 2
            let mut twice_area = 0i64;
            let mut boundary = 0u64;
            for i in 0..n {
                let (a, b) = (hull[i], hull[(i + 1) % n]);
                twice_area += a.0 * b.1 - b.0 * a.1;
                boundary += gcd(a.0.abs_diff(b.0), a.1.abs_diff(b.1));
            }
            ((twice_area.unsigned_abs() + boundary + 2) / 2) as usize
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Andrew's monotone chain; collinear points are dropped, so a degenerate
/// input yields one or two vertices.
fn convex_hull(mut pts: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut hull: Vec<(i64, i64)> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(i64, i64)>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() == 2 && hull[0] == hull[1] {
        hull.pop();
    }
    hull
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn disc(r: f64, size: usize) -> BinaryMask {
        let c = (size as f64 - 1.0) / 2.0;
        BinaryMask::from_fn(size, size, |x, y| (x as f64 - c).powi(2) + (y as f64 - c).powi(2) <= r * r)
    }

    fn square(n: usize) -> BinaryMask {
        BinaryMask::from_fn(n + 4, n + 4, |x, y| (2..n + 2).contains(&x) && (2..n + 2).contains(&y))
    }

    #[test]
    fn disc_form_factor_near_one() {
        let s = shape_stats(&disc(20.0, 48)).unwrap();
        assert!((s.form_factor - 1.0).abs() <= 0.05, "{}", s.form_factor);
        assert!(s.solidity > 0.97 && s.solidity <= 1.0);
    }

    #[test]
    fn square_form_factor_near_quarter_pi() {
        for n in [20, 48, 64, 100] {
            let s = shape_stats(&square(n)).unwrap();
            assert!((s.form_factor - PI / 4.0).abs() <= 0.08, "n={n}: {}", s.form_factor);
            assert_eq!(s.solidity, 1.0);
            assert_eq!(s.area, n * n);
        }
    }

    #[test]
    fn hole_lowers_solidity() {
        let mut m = square(10);
        m.set(6, 6, false);
        m.set(7, 6, false);
        assert!(shape_stats(&m).unwrap().solidity < 1.0);
    }

    #[test]
    fn rectangle_feret() {
        let m = BinaryMask::from_fn(14, 8, |x, y| (2..12).contains(&x) && (3..7).contains(&y));
        let s = shape_stats(&m).unwrap();
        assert_eq!((s.feret_x, s.feret_y), (10, 4));
    }

    #[test]
    fn single_pixel_and_empty() {
        let mut m = BinaryMask::empty(3, 3);
        assert!(matches!(shape_stats(&m), Err(Error::EmptyMask)));
        m.set(1, 1, true);
        let s = shape_stats(&m).unwrap();
        assert_eq!((s.area, s.perimeter, s.solidity), (1, PI, 1.0));
        assert!((s.form_factor - 4.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn convex_area_of_triangle_and_segment() {
        // right triangle with legs 4: 15 lattice points
        let tri: Vec<_> = (0..5).flat_map(|y| (0..5 - y).map(move |x| (x, y))).collect();
        assert_eq!(convex_area(&[(0, 0), (4, 0), (0, 4)]), 15);
        assert_eq!(convex_area(&tri), 15);
        assert_eq!(convex_area(&[(0, 0), (6, 3)]), 4);
        assert_eq!(convex_area(&[(2, 2), (2, 2)]), 1);
    }

    proptest! {
        #[test]
        fn convex_shapes_respect_isoperimetric_bound(rx in 10.0f64..28.0, ry in 10.0f64..28.0, c in 31.0f64..32.0) {
            let size = 64;
            let m = BinaryMask::from_fn(size, size, |x, y| {
                ((x as f64 - c) / rx).powi(2) + ((y as f64 - c) / ry).powi(2) <= 1.0
            });
            let s = shape_stats(&m).unwrap();
            prop_assert!(s.form_factor <= 1.0 + 0.08, "ff {}", s.form_factor);
            prop_assert!(s.solidity <= 1.0 + 1e-12);
        }

        #[test]
        fn solidity_in_unit_interval(bits in proptest::collection::vec(any::<bool>(), 64)) {
            let m = BinaryMask::new(8, 8, bits).unwrap();
            if let Ok(s) = shape_stats(&m) {
                prop_assert!(s.solidity > 0.0 && s.solidity <= 1.0);
                prop_assert_eq!(s.area, m.count());
            }
        }
    }
}
