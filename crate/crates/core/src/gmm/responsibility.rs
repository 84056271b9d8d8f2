use alloc::vec::Vec;
use core::sync::atomic::{AtomicBool, Ordering};

use super::{Density, SuperpixelParams};
use crate::error::{Error, Result};
use crate::features::FeatureImage;
use crate::grid::{Candidates, GridGeometry};
use crate::math::{exp, log_sum_exp};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq)]
struct PixelRow {
    len: u8,
    superpixels: [u32; Candidates::MAX],
    weights: [f64; Candidates::MAX],
}

const EMPTY_ROW: PixelRow = PixelRow {
    len: 0,
    superpixels: [0; Candidates::MAX],
    weights: [0.0; Candidates::MAX],
};

/// Sparse posterior table `R_{i,k}`: one row per pixel holding its candidate
/// superpixels in ascending order and their responsibilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponsibilityTable {
    width: usize,
    height: usize,
    rows: Vec<PixelRow>,
}

impl ResponsibilityTable {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            rows: alloc::vec![EMPTY_ROW; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn num_pixels(&self) -> usize {
        self.rows.len()
    }

    /// Candidate superpixels of pixel `i`.
    pub fn superpixels(&self, i: usize) -> &[u32] {
        let r = &self.rows[i];
        &r.superpixels[..r.len as usize]
    }

    /// Responsibilities of pixel `i`, aligned with [`superpixels`](Self::superpixels).
    pub fn weights(&self, i: usize) -> &[f64] {
        let r = &self.rows[i];
        &r.weights[..r.len as usize]
    }

    /// `(k, R_{i,k})` pairs of pixel `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.superpixels(i)
            .iter()
            .zip(self.weights(i))
            .map(|(&k, &w)| (k as usize, w))
    }

    /// `R_{i,k}`, or `None` when `k ∉ K_i`.
    #[inline]
    pub fn weight(&self, i: usize, k: usize) -> Option<f64> {
        let r = &self.rows[i];
        r.superpixels[..r.len as usize]
            .iter()
            .position(|&c| c as usize == k)
            .map(|s| r.weights[s])
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.weights(i).iter().sum()
    }
}

fn densities(features: &FeatureImage, params: &[SuperpixelParams]) -> Vec<Density> {
    let model = features.model();
    par::map_indexed(params.len(), |k| params[k].density(model))
}

fn check_dims(features: &FeatureImage, geom: &GridGeometry, params: &[SuperpixelParams]) -> Result<()> {
    if (features.width(), features.height()) != (geom.width(), geom.height()) {
        return Err(Error::mismatch(
            (features.width(), features.height()),
            (geom.width(), geom.height()),
        ));
    }
    if params.len() != geom.num_superpixels() {
        return Err(Error::Internal("parameter count differs from superpixel count"));
    }
    Ok(())
}

/// Recomputes every row of `out` as the normalized candidate densities of
/// the pixel. Rows are independent and may be filled in parallel.
pub fn e_step(
    features: &FeatureImage,
    geom: &GridGeometry,
    params: &[SuperpixelParams],
    out: &mut ResponsibilityTable,
) -> Result<()> {
    check_dims(features, geom, params)?;
    if (out.width, out.height) != (geom.width(), geom.height()) {
        *out = ResponsibilityTable::new(geom.width(), geom.height());
    }
    let dens = densities(features, params);
    let width = geom.width();
    let fault = AtomicBool::new(false);
    par::for_each_chunk(&mut out.rows, width, |y, row| {
        for (x, cell) in row.iter_mut().enumerate() {
            let z = features.at(x, y);
            let cands = geom.candidates_of(x, y);
            let mut logs = [0.0; Candidates::MAX];
            let mut n = 0;
            let mut max = f64::NEG_INFINITY;
            for k in cands.iter() {
                let l = dens[k].log_pdf(z);
                cell.superpixels[n] = k as u32;
                logs[n] = l;
                max = max.max(l);
                n += 1;
            }
            cell.len = n as u8;
            if !max.is_finite() {
                fault.store(true, Ordering::Relaxed);
                continue;
            }
            let mut sum = 0.0;
            for (w, &l) in cell.weights[..n].iter_mut().zip(&logs[..n]) {
                *w = exp(l - max);
                sum += *w;
            }
            for w in &mut cell.weights[..n] {
                *w /= sum;
            }
        }
    });
    if fault.load(Ordering::Relaxed) {
        return Err(Error::Internal("all candidate densities of a pixel vanished"));
    }
    Ok(())
}

/// `Σ_i ln Σ_{k ∈ K_i} p(z_i; θ_k)`, evaluated in the log domain. Partial
/// sums are taken per image row and combined in row order.
pub fn log_likelihood(
    features: &FeatureImage,
    geom: &GridGeometry,
    params: &[SuperpixelParams],
) -> Result<f64> {
    check_dims(features, geom, params)?;
    let dens = densities(features, params);
    let rows = par::map_indexed(geom.height(), |y| {
        let mut acc = 0.0;
        let mut logs = [0.0; Candidates::MAX];
        for x in 0..geom.width() {
            let z = features.at(x, y);
            let mut n = 0;
            for k in geom.candidates_of(x, y).iter() {
                logs[n] = dens[k].log_pdf(z);
                n += 1;
            }
            acc += log_sum_exp(&logs[..n]);
        }
        acc
    });
    Ok(rows.iter().sum())
}
