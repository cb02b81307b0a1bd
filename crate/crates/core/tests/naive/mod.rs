//! Straight-line reference simulators written directly from the update
//! rules, on plain vectors, with none of the library's data structures.
#![allow(dead_code)]

/// 0 = unlabeled, 1 = foreground, 2 = background.
pub type Lab = u8;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub labels: Vec<Lab>,
    pub strengths: Vec<f64>,
    pub iterations: usize,
}

const MOORE: [(i64, i64); 8] = [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)];

fn g(a: u8, b: u8) -> f64 {
    1.0 - (f64::from(a) - f64::from(b)).abs() / 255.0
}

/// Runs synchronous generations until one changes nothing.
fn iterate(
    w: usize,
    h: usize,
    px: &[u8],
    mut lab: Vec<Lab>,
    mut th: Vec<f64>,
    // strength and label a cell shows to (or defends with) the update rule
    shown: &dyn Fn(usize, Lab, f64) -> (Lab, f64),
) -> Outcome {
    let mut it = 0;
    loop {
        it += 1;
        let mut nl = lab.clone();
        let mut nt = th.clone();
        for y in 0..h as i64 {
            for x in 0..w as i64 {
                let p = (y as usize) * w + x as usize;
                let mut best = shown(p, lab[p], th[p]).1;
                for (dx, dy) in MOORE {
                    let (qx, qy) = (x + dx, y + dy);
                    if qx < 0 || qy < 0 || qx >= w as i64 || qy >= h as i64 {
                        continue;
                    }
                    let q = (qy as usize) * w + qx as usize;
                    let (ql, qt) = shown(q, lab[q], th[q]);
                    let a = g(px[p], px[q]) * qt;
                    if a > best {
                        best = a;
                        nl[p] = ql;
                        nt[p] = a;
                    }
                }
            }
        }
        let same = nl == lab && nt == th;
        lab = nl;
        th = nt;
        if same || it >= 10_000 {
            return Outcome {
                labels: lab,
                strengths: th,
                iterations: it,
            };
        }
    }
}

/// Classical GrowCut: seeds start with strength 1.
pub fn growcut(w: usize, h: usize, px: &[u8], seeds: &[(usize, usize, Lab)]) -> Outcome {
    let mut lab = vec![0; w * h];
    let mut th = vec![0.0; w * h];
    for &(x, y, l) in seeds {
        lab[y * w + x] = l;
        th[y * w + x] = 1.0;
    }
    iterate(w, h, px, lab, th, &|_, l, t| (l, t))
}

/// Fuzzy GrowCut from foreground seed positions.
pub fn fuzzy(w: usize, h: usize, px: &[u8], fg: &[(usize, usize)], alpha: f64) -> Outcome {
    let n = fg.len() as f64;
    let mx = fg.iter().map(|p| p.0 as f64).sum::<f64>() / n;
    let my = fg.iter().map(|p| p.1 as f64).sum::<f64>() / n;
    let sx = (fg.iter().map(|p| (p.0 as f64 - mx).powi(2)).sum::<f64>() / n).sqrt().max(1.0);
    let sy = (fg.iter().map(|p| (p.1 as f64 - my).powi(2)).sum::<f64>() / n).sqrt().max(1.0);
    let bkg: Vec<bool> = (0..w * h)
        .map(|i| {
            let (x, y) = ((i % w) as f64, (i / w) as f64);
            let obj = (-(x - mx).powi(2) / (2.0 * alpha * sx * sx)).exp()
                * (-(y - my).powi(2) / (2.0 * alpha * sy * sy)).exp();
            1.0 - obj > obj
        })
        .collect();
    // nearest cell to the centre of mass, halves toward the lower index
    let near = |v: f64, n: usize| {
        let lo = v.floor();
        let c = if v - lo > 0.5 { lo + 1.0 } else { lo };
        (c.max(0.0) as usize).min(n - 1)
    };
    let mut lab = vec![0; w * h];
    let mut th = vec![0.0; w * h];
    let c = near(my, h) * w + near(mx, w);
    lab[c] = 1;
    th[c] = 1.0;
    iterate(w, h, px, lab, th, &|i, l, t| if bkg[i] { (2, 1.0) } else { (l, t) })
}
