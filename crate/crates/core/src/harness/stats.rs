//! Area under a sampled curve and Wilcoxon tests.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Largest sample (rank-sum: both samples together; signed-rank: nonzero
/// pairs) handled by exact enumeration.
pub const EXACT_LIMIT: usize = 12;

const SPACING_TOLERANCE: f64 = 1e-9;

/// Integrates sampled `ys` over `xs`.
///
/// The abscissae are split into maximal runs of equal spacing. Each run is
/// integrated with composite Simpson; an odd interval count closes with the
/// three-eighths rule on its last three intervals, and a run of a single
/// interval uses the trapezoid.
pub fn simpson_auc(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 2 {
        return Err(Error::InsufficientData("need at least 2 samples".into()));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::Config("samples must be finite".into()));
    }
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("abscissae must be strictly increasing".into()));
    }
    let mut area = 0.0;
    let mut start = 0;
    while start + 1 < xs.len() {
        let h = xs[start + 1] - xs[start];
        let mut end = start + 1;
        while end + 1 < xs.len() && ((xs[end + 1] - xs[end]) - h).abs() <= SPACING_TOLERANCE * h {
            end += 1;
        }
        area += uniform_segment(&ys[start..=end], (xs[end] - xs[start]) / (end - start) as f64);
        start = end;
    }
    Ok(area)
}

fn uniform_segment(y: &[f64], h: f64) -> f64 {
    let m = y.len() - 1;
    match m {
        1 => h * (y[0] + y[1]) / 2.0,
        _ if m % 2 == 0 => simpson(y, h),
        _ => {
            let split = m - 3;
            let head = if split > 0 { simpson(&y[..=split], h) } else { 0.0 };
            let t = &y[split..];
            head + 3.0 * h / 8.0 * (t[0] + 3.0 * t[1] + 3.0 * t[2] + t[3])
        }
    }
}

fn simpson(y: &[f64], h: f64) -> f64 {
    let m = y.len() - 1;
    let inner: f64 = (1..m).map(|i| if i % 2 == 1 { 4.0 * y[i] } else { 2.0 * y[i] }).sum();
    h / 3.0 * (y[0] + inner + y[m])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WilcoxonMode {
    RankSum,
    SignedRank,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestResult {
    /// Rank sum of the first sample, or the sum of positive signed ranks.
    pub statistic: f64,
    /// Two-sided.
    pub p_value: f64,
    pub exact: bool,
}

pub fn wilcoxon(a: &[f64], b: &[f64], mode: WilcoxonMode) -> Result<TestResult> {
    match mode {
        WilcoxonMode::RankSum => rank_sum(a, b),
        WilcoxonMode::SignedRank => signed_rank(a, b),
    }
}

/// Average ranks, doubled so ties stay integral: a value tied over
/// positions `i..j` (1-based) gets `i + j`.
fn doubled_ranks(values: &[f64]) -> (Vec<u64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&x, &y| values[x].total_cmp(&values[y]));
    let mut ranks = vec![0u64; values.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        for &o in &order[i..=j] {
            ranks[o] = (i + 1 + j + 1) as u64;
        }
        if j > i {
            ties.push(j - i + 1);
        }
        i = j + 1;
    }
    (ranks, ties)
}

fn check_finite(s: &[f64]) -> Result<()> {
    if s.iter().any(|v| !v.is_finite()) {
        return Err(Error::Config("samples must be finite".into()));
    }
    Ok(())
}

fn two_sided(lower: f64, upper: f64) -> f64 {
    (2.0 * lower.min(upper)).min(1.0)
}

fn normal_p(stat: f64, mean: f64, var: f64) -> f64 {
    if var <= 0.0 {
        return 1.0;
    }
    let z = ((stat - mean).abs() - 0.5).max(0.0) / var.sqrt();
    let std = Normal::new(0.0, 1.0).expect("standard normal");
    (2.0 * std.sf(z)).min(1.0)
}

/// Rank-sum test of `a` against `b`.
pub fn rank_sum(a: &[f64], b: &[f64]) -> Result<TestResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InsufficientData("rank-sum needs two nonempty samples".into()));
    }
    check_finite(a)?;
    check_finite(b)?;
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (ranks, ties) = doubled_ranks(&pooled);
    let (n, total) = (a.len(), pooled.len());
    let observed: u64 = ranks[..n].iter().sum();
    let statistic = observed as f64 / 2.0;
    if total <= EXACT_LIMIT {
        let (mut le, mut ge, mut count) = (0u64, 0u64, 0u64);
        for_each_subset_sum(&ranks, n, &mut |s| {
            count += 1;
            le += u64::from(s <= observed);
            ge += u64::from(s >= observed);
        });
        return Ok(TestResult {
            statistic,
            p_value: two_sided(le as f64 / count as f64, ge as f64 / count as f64),
            exact: true,
        });
    }
    let (nf, mf, tf) = (n as f64, b.len() as f64, total as f64);
    let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / (tf * (tf - 1.0));
    let var = nf * mf / 12.0 * ((tf + 1.0) - tie_term);
    Ok(TestResult {
        statistic,
        p_value: normal_p(statistic, nf * (tf + 1.0) / 2.0, var),
        exact: false,
    })
}

fn for_each_subset_sum(values: &[u64], size: usize, f: &mut impl FnMut(u64)) {
    fn rec(values: &[u64], size: usize, from: usize, acc: u64, f: &mut impl FnMut(u64)) {
        if size == 0 {
            f(acc);
            return;
        }
        for i in from..=values.len() - size {
            rec(values, size - 1, i + 1, acc + values[i], f);
        }
    }
    rec(values, size, 0, 0, f);
}

/// Signed-rank test of the paired differences `a[i] - b[i]`; zero
/// differences are dropped.
pub fn signed_rank(a: &[f64], b: &[f64]) -> Result<TestResult> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(Error::InsufficientData("signed-rank needs at least one pair".into()));
    }
    check_finite(a)?;
    check_finite(b)?;
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).filter(|d| *d != 0.0).collect();
    let n = diffs.len();
    if n == 0 {
        return Ok(TestResult {
            statistic: 0.0,
            p_value: 1.0,
            exact: true,
        });
    }
    let magnitudes: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let (ranks, ties) = doubled_ranks(&magnitudes);
    let observed: u64 = ranks.iter().zip(&diffs).filter(|(_, d)| **d > 0.0).map(|(r, _)| r).sum();
    let statistic = observed as f64 / 2.0;
    if n <= EXACT_LIMIT {
        let (mut le, mut ge) = (0u64, 0u64);
        let count = 1u64 << n;
        for mask in 0..count {
            let s: u64 = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
            le += u64::from(s <= observed);
            ge += u64::from(s >= observed);
        }
        return Ok(TestResult {
            statistic,
            p_value: two_sided(le as f64 / count as f64, ge as f64 / count as f64),
            exact: true,
        });
    }
    let nf = n as f64;
    let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / 48.0;
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term;
    Ok(TestResult {
        statistic,
        p_value: normal_p(statistic, nf * (nf + 1.0) / 4.0, var),
        exact: false,
    })
}
