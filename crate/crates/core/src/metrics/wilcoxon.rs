use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Largest sample (after dropping zero differences) that gets the exact null.
pub const EXACT_MAX_N: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// Sum of ranks of the positive differences `a - b`.
    pub w_plus: f64,
    /// Pairs left after dropping zero differences.
    pub n: usize,
    pub p_value: f64,
    pub reject: bool,
    pub exact: bool,
}

/// Two-sided signed-rank test of `a` against `b`. Ties in `|a - b|` get
/// average ranks. If every difference is zero the result is `p = 1`.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64], alpha: f64) -> Result<WilcoxonResult> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!("samples of length {} and {}", a.len(), b.len())));
    }
    if a.is_empty() {
        return Err(Error::InvalidParameter("samples must be non-empty".into()));
    }
    let mut d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).filter(|v| *v != 0.0).collect();
    let n = d.len();
    if n == 0 {
        return Ok(WilcoxonResult {
            w_plus: 0.0,
            n: 0,
            p_value: 1.0,
            reject: false,
            exact: true,
        });
    }
    d.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
    // doubled average ranks stay integral
    let mut ranks2 = vec![0u64; n];
    let mut tie_groups = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && d[j + 1].abs() == d[i].abs() {
            j += 1;
        }
        let r2 = (i + 1 + j + 1) as u64;
        ranks2[i..=j].fill(r2);
        tie_groups.push(j - i + 1);
        i = j + 1;
    }
    let w2: u64 = d.iter().zip(&ranks2).filter(|(v, _)| **v > 0.0).map(|(_, r)| r).sum();
    let w_plus = w2 as f64 / 2.0;
    let exact = n <= EXACT_MAX_N;
    let p_value = if exact {
        exact_p(&ranks2, w2)
    } else {
        normal_p(n, w_plus, &tie_groups)
    };
    Ok(WilcoxonResult {
        w_plus,
        n,
        p_value,
        reject: p_value < alpha,
        exact,
    })
}

/// Two-sided p from the exact null of the doubled-rank sum, counting all
/// `2^n` sign assignments by dynamic programming.
fn exact_p(ranks2: &[u64], w2: u64) -> f64 {
    let total: u64 = ranks2.iter().sum();
    let mut ways = vec![0f64; total as usize + 1];
    ways[0] = 1.0;
    let mut reach = 0usize;
    for &r in ranks2 {
        let r = r as usize;
        for s in (0..=reach).rev() {
            if ways[s] != 0.0 {
                ways[s + r] += ways[s];
            }
        }
        reach += r;
    }
    let all = 2f64.powi(ranks2.len() as i32);
    let lower: f64 = ways[..=w2 as usize].iter().sum::<f64>() / all;
    let upper: f64 = ways[w2 as usize..].iter().sum::<f64>() / all;
    (2.0 * lower.min(upper)).min(1.0)
}

fn normal_p(n: usize, w_plus: f64, tie_groups: &[usize]) -> f64 {
    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let tie: f64 = tie_groups.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / 48.0;
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie;
    if var <= 0.0 {
        return 1.0;
    }
    let z = (w_plus - mean).abs() / var.sqrt();
    let std = Normal::new(0.0, 1.0).expect("unit normal");
    (2.0 * std.sf(z)).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two-sided p by listing every sign assignment of the given ranks.
    fn enumerate_p(ranks: &[f64], w: f64) -> f64 {
        let n = ranks.len();
        let (mut le, mut ge) = (0u64, 0u64);
        for bits in 0u64..(1 << n) {
            let s: f64 = (0..n).filter(|i| bits >> i & 1 == 1).map(|i| ranks[i]).sum();
            le += u64::from(s <= w + 1e-9);
            ge += u64::from(s >= w - 1e-9);
        }
        let all = (1u64 << n) as f64;
        (2.0 * (le as f64 / all).min(ge as f64 / all)).min(1.0)
    }

    #[test]
    fn all_positive_six() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let b = [0.0; 6];
        let r = wilcoxon_signed_rank(&a, &b, 0.05).unwrap();
        assert_eq!(r.w_plus, 21.0);
        assert_eq!(r.p_value, 0.03125);
        assert!(r.reject);
    }

    #[test]
    fn equal_samples() {
        let a = [0.3, 1.0, 7.0];
        let r = wilcoxon_signed_rank(&a, &a, 0.05).unwrap();
        assert_eq!((r.p_value, r.reject, r.n), (1.0, false, 0));
    }

    #[test]
    fn ties_get_average_ranks() {
        // |d| = 1, 1, 2 → ranks 1.5, 1.5, 3; positives: second and third
        let r = wilcoxon_signed_rank(&[0.0, 1.0, 2.0], &[1.0, 0.0, 0.0], 0.05).unwrap();
        assert_eq!(r.w_plus, 4.5);
        assert!((r.p_value - enumerate_p(&[1.5, 1.5, 3.0], 4.5)).abs() < 1e-12);
    }

    #[test]
    fn matches_enumeration_small_n() {
        for n in 1..=10usize {
            let d: Vec<f64> = (1..=n).map(|k| if (k * 7) % 3 == 0 { -(k as f64) } else { k as f64 + 0.5 }).collect();
            let r = wilcoxon_signed_rank(&d, &vec![0.0; n], 0.05).unwrap();
            let mut mags: Vec<f64> = d.iter().map(|v| v.abs()).collect();
            mags.sort_by(f64::total_cmp);
            let ranks: Vec<f64> = (1..=n).map(|k| k as f64).collect();
            assert!((r.p_value - enumerate_p(&ranks, r.w_plus)).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn normal_branch_is_close_to_exact_at_the_boundary() {
        let n = 26;
        let a: Vec<f64> = (0..n).map(|k| (k as f64 + 1.0) * if k % 3 == 0 { -1.0 } else { 1.0 }).collect();
        let r = wilcoxon_signed_rank(&a, &vec![0.0; n], 0.05).unwrap();
        assert!(!r.exact);
        let mut ranks2: Vec<u64> = (1..=n as u64).map(|k| 2 * k).collect();
        ranks2.sort_unstable();
        let exact = exact_p(&ranks2, (2.0 * r.w_plus) as u64);
        assert!((r.p_value - exact).abs() < 0.02, "{} vs {}", r.p_value, exact);
    }

    #[test]
    fn length_mismatch() {
        assert!(wilcoxon_signed_rank(&[1.0], &[1.0, 2.0], 0.05).is_err());
        assert!(wilcoxon_signed_rank(&[], &[], 0.05).is_err());
    }
}
