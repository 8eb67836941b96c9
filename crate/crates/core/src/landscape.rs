//! Local-optima sampling and fitness-distance correlation.

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;

use crate::coarsening::{coarsen, CoarseningConfig, DynamicHypergraph};
use crate::error::{Error, Result};
use crate::fm::{FmConfig, FmEngine};
use crate::hypergraph::partition::BlockId;
use crate::hypergraph::{Hypergraph, Weight};
use crate::memetic::hamming;
use crate::pool::random_partition;
use crate::rng;

#[derive(Clone, Debug, PartialEq)]
pub struct LocalOptimumRecord {
    pub genes: Vec<BlockId>,
    pub cut: Weight,
    /// `cut / best`, or `(cut + 1) / (best + 1)` when the best cut is zero.
    pub relative_cut: f64,
}

#[derive(Clone, Debug)]
pub struct LandscapeSample {
    /// The hypergraph the optima live on.
    pub coarse: Hypergraph,
    pub records: Vec<LocalOptimumRecord>,
    /// Indices of the minimum-cut records.
    pub quasi_global: Vec<usize>,
}

impl LandscapeSample {
    pub fn best_cut(&self) -> Weight {
        self.records[self.quasi_global[0]].cut
    }

    /// Distance of every record to its nearest quasi-global optimum.
    pub fn distances(&self) -> Vec<f64> {
        let set: Vec<&[BlockId]> = self.quasi_global.iter().map(|&i| self.records[i].genes.as_slice()).collect();
        self.records
            .iter()
            .map(|r| min_scaled_distance(&r.genes, &set).expect("equal lengths"))
            .collect()
    }
}

pub fn relative_cut(cut: Weight, best: Weight) -> f64 {
    if best == 0 {
        (cut + 1) as f64
    } else {
        cut as f64 / best as f64
    }
}

/// Coarsens `hg` per `coarsening`, then FM-refines `n` random balanced
/// bipartitions of the coarse hypergraph.
pub fn sample_local_optima<R: Rng + ?Sized>(
    hg: &Hypergraph,
    coarsening: &CoarseningConfig,
    fm: FmConfig,
    n: usize,
    rng: &mut R,
) -> Result<LandscapeSample> {
    if n == 0 {
        return Err(Error::Config("sample count must be at least 1".into()));
    }
    if hg.num_vertices() == 0 {
        return Err(Error::Config("cannot sample an empty hypergraph".into()));
    }
    fm.validate()?;
    let mut dynamic = DynamicHypergraph::from(hg);
    coarsen(&mut dynamic, coarsening, rng)?;
    let (coarse, _) = dynamic.snapshot();
    let base: u64 = rng.gen();
    let optima: Vec<(Vec<BlockId>, Weight)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::derive(base, i as u64, 0);
            let mut part = random_partition(&coarse, fm.epsilon, &mut r);
            let mut engine = FmEngine::new(&coarse, fm).expect("validated config");
            engine.refine(&mut part, &mut r).expect("bipartition");
            let cut = crate::hypergraph::metrics::cut_of(&coarse, part.blocks());
            (part.into_blocks(), cut)
        })
        .collect();
    let best = optima.iter().map(|o| o.1).min().expect("n >= 1");
    let quasi_global = (0..n).filter(|&i| optima[i].1 == best).collect();
    let records = optima
        .into_iter()
        .map(|(genes, cut)| LocalOptimumRecord {
            genes,
            cut,
            relative_cut: relative_cut(cut, best),
        })
        .collect();
    Ok(LandscapeSample {
        coarse,
        records,
        quasi_global,
    })
}

/// Hamming distance to `g` of `l` or its complement, whichever is smaller,
/// divided by the gene count.
pub fn scaled_distance(l: &[BlockId], g: &[BlockId]) -> Result<f64> {
    if l.len() != g.len() {
        return Err(Error::LengthMismatch(l.len(), g.len()));
    }
    if l.is_empty() {
        return Ok(0.0);
    }
    let h = hamming(l, g);
    Ok(h.min(l.len() - h) as f64 / l.len() as f64)
}

/// [`scaled_distance`] to the nearest member of `set`.
pub fn min_scaled_distance<G: AsRef<[BlockId]>>(l: &[BlockId], set: &[G]) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::InsufficientData("empty reference set".into()));
    }
    set.iter()
        .map(|g| scaled_distance(l, g.as_ref()))
        .try_fold(f64::INFINITY, |m, d| d.map(|d| m.min(d)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdcModel {
    /// Slope of the through-origin model `y = m x`.
    pub slope: f64,
    /// Uncentered coefficient of determination of the through-origin model.
    pub r_squared: f64,
    pub samples: usize,
    /// Ordinary least squares with intercept; absent when all x coincide.
    pub with_intercept: Option<LinearFit>,
}

/// Fits relative cut against distance.
pub fn fdc_fit(records: &[LocalOptimumRecord], distances: &[f64]) -> Result<FdcModel> {
    if records.len() != distances.len() {
        return Err(Error::LengthMismatch(records.len(), distances.len()));
    }
    let ys: Vec<f64> = records.iter().map(|r| r.relative_cut).collect();
    fdc_fit_xy(distances, &ys)
}

pub fn fdc_fit_xy(xs: &[f64], ys: &[f64]) -> Result<FdcModel> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 2 {
        return Err(Error::InsufficientData("need at least 2 points".into()));
    }
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all distances are zero".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let syy: f64 = ys.iter().map(|y| y * y).sum();
    let slope = sxy / sxx;
    let sse: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x).powi(2)).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    Ok(FdcModel {
        slope,
        r_squared,
        samples: xs.len(),
        with_intercept: ols(xs, ys),
    })
}

fn ols(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(LinearFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    })
}

/// `index,distance,relative_cut,cut`, one row per record in order.
pub fn export_landscape<W: Write>(records: &[LocalOptimumRecord], distances: &[f64], mut out: W) -> Result<()> {
    if records.len() != distances.len() {
        return Err(Error::LengthMismatch(records.len(), distances.len()));
    }
    writeln!(out, "index,distance,relative_cut,cut")?;
    for (i, (r, d)) in records.iter().zip(distances).enumerate() {
        writeln!(out, "{i},{d},{},{}", r.relative_cut, r.cut)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fm::improving_move_exists;
    use crate::hypergraph::fixtures::h4;
    use crate::hypergraph::partition::Partition;
    use crate::rng::seeded;

    #[test]
    fn distances() {
        assert_eq!(scaled_distance(&[0, 1, 1, 0], &[0, 1, 1, 0]).unwrap(), 0.0);
        assert_eq!(scaled_distance(&[1, 0, 0, 1], &[0, 1, 1, 0]).unwrap(), 0.0);
        assert_eq!(scaled_distance(&[0, 1, 1, 0], &[0, 1, 0, 0]).unwrap(), 0.25);
        assert!(scaled_distance(&[0], &[0, 1]).is_err());
        let set = [vec![0, 0, 0, 0], vec![0, 1, 0, 0]];
        assert_eq!(min_scaled_distance(&[0, 1, 1, 0], &set).unwrap(), 0.25);
    }

    #[test]
    fn through_origin_fit() {
        let m = fdc_fit_xy(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap();
        assert_eq!((m.slope, m.r_squared, m.samples), (2.0, 1.0, 3));
        let i = m.with_intercept.unwrap();
        assert!((i.slope - 2.0).abs() < 1e-12 && i.intercept.abs() < 1e-12);

        let m = fdc_fit_xy(&[1.0, 1.0], &[1.0, 3.0]).unwrap();
        assert_eq!(m.slope, 2.0);
        assert!((m.r_squared - 0.8).abs() < 1e-15);
        assert!(m.with_intercept.is_none());

        assert!(fdc_fit_xy(&[1.0], &[1.0]).is_err());
        assert!(fdc_fit_xy(&[0.0, 0.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn h4_landscape() {
        let hg = h4();
        let cfg = CoarseningConfig { threshold: 2, ..CoarseningConfig::default() };
        let s = sample_local_optima(&hg, &cfg, FmConfig::default(), 50, &mut seeded(1)).unwrap();
        assert_eq!(s.records.len(), 50);
        assert_eq!(s.best_cut(), 2);
        let min_rel = s.records.iter().map(|r| r.relative_cut).fold(f64::INFINITY, f64::min);
        assert_eq!(min_rel, 1.0);
        for r in &s.records {
            let p = Partition::new(&s.coarse, r.genes.clone(), 2).unwrap();
            assert!(!improving_move_exists(&s.coarse, &p, 0.1).unwrap());
        }
        let d = s.distances();
        assert!(d.iter().all(|x| (0.0..=1.0).contains(x)));
        for &q in &s.quasi_global {
            assert_eq!(d[q], 0.0);
        }
        let mut buf = Vec::new();
        export_landscape(&s.records, &d, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 51);
    }

    #[test]
    fn zero_best_cut_is_shifted() {
        assert_eq!(relative_cut(0, 0), 1.0);
        assert_eq!(relative_cut(3, 0), 4.0);
        assert_eq!(relative_cut(3, 2), 1.5);
    }
}
