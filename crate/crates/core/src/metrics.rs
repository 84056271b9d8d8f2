//! Accuracy against ground-truth segmentations: boundary recall (BR),
//! under-segmentation error (UE) and achievable segmentation accuracy (ASA).
//!
//! Boundary pixels use a one-sided convention: a pixel is on a boundary when
//! its right or lower neighbour carries a different label, so each label
//! change marks exactly one pixel. Recall tolerance is a Chebyshev distance.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::labeling::LabelMap;

/// Boundary-match tolerance in pixels.
pub const DEFAULT_BOUNDARY_TOLERANCE: usize = 2;

/// Overlap fraction a superpixel must exceed with a segment before its size
/// is charged to that segment in UE.
pub const LEAK_FRACTION: f64 = 0.05;

/// A human annotation: one segment id per pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth(LabelMap);

impl GroundTruth {
    pub fn new(width: usize, height: usize, segments: Vec<u32>) -> Result<Self> {
        LabelMap::new(width, height, segments).map(Self)
    }

    pub fn segments(&self) -> &LabelMap {
        &self.0
    }
}

impl From<LabelMap> for GroundTruth {
    fn from(m: LabelMap) -> Self {
        Self(m)
    }
}

/// Scores of one segmentation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracy {
    pub boundary_recall: f64,
    pub undersegmentation_error: f64,
    pub achievable_accuracy: f64,
}

fn check(labels: &LabelMap, gt: &GroundTruth) -> Result<()> {
    if labels.dims() != gt.0.dims() {
        return Err(Error::mismatch(labels.dims(), gt.0.dims()));
    }
    Ok(())
}

/// One-sided boundary map (right/lower neighbour differs).
pub fn boundary_pixels(labels: &LabelMap) -> Vec<bool> {
    let (w, h) = labels.dims();
    let l = labels.as_slice();
    (0..w * h)
        .map(|i| {
            let (x, y) = (i % w, i / w);
            (x + 1 < w && l[i + 1] != l[i]) || (y + 1 < h && l[i + w] != l[i])
        })
        .collect()
}

pub fn boundary_pixel_count(labels: &LabelMap) -> usize {
    boundary_pixels(labels).into_iter().filter(|&b| b).count()
}

// Chebyshev dilation as a row pass followed by a column pass.
fn dilate(mask: &[bool], w: usize, h: usize, r: usize) -> Vec<bool> {
    let mut rows = alloc::vec![false; w * h];
    for y in 0..h {
        for x in 0..w {
            let lo = x.saturating_sub(r);
            let hi = (x + r).min(w - 1);
            rows[y * w + x] = mask[y * w + lo..=y * w + hi].iter().any(|&b| b);
        }
    }
    let mut out = alloc::vec![false; w * h];
    for y in 0..h {
        let lo = y.saturating_sub(r);
        let hi = (y + r).min(h - 1);
        for x in 0..w {
            out[y * w + x] = (lo..=hi).any(|yy| rows[yy * w + x]);
        }
    }
    out
}

fn recall(labels: &LabelMap, gt_boundary: &[bool], tol: usize) -> f64 {
    let (w, h) = labels.dims();
    let near = dilate(&boundary_pixels(labels), w, h, tol);
    let mut total = 0usize;
    let mut hit = 0usize;
    for (g, n) in gt_boundary.iter().zip(&near) {
        if *g {
            total += 1;
            hit += *n as usize;
        }
    }
    if total == 0 {
        1.0
    } else {
        hit as f64 / total as f64
    }
}

/// Fraction of ground-truth boundary pixels within `tol` (Chebyshev) of a
/// superpixel boundary pixel. A ground truth without boundaries scores 1.
pub fn boundary_recall(labels: &LabelMap, gt: &GroundTruth, tol: usize) -> Result<f64> {
    check(labels, gt)?;
    Ok(recall(labels, &boundary_pixels(&gt.0), tol))
}

/// Boundary recall against the union of several annotations' boundaries.
pub fn boundary_recall_union(labels: &LabelMap, gts: &[GroundTruth], tol: usize) -> Result<f64> {
    let mut union = alloc::vec![false; labels.len()];
    for gt in gts {
        check(labels, gt)?;
        for (u, b) in union.iter_mut().zip(boundary_pixels(&gt.0)) {
            *u |= b;
        }
    }
    Ok(recall(labels, &union, tol))
}

type Overlaps = (Vec<(u32, u32, usize)>, Vec<(u32, usize)>);

/// Intersection sizes `|s_k ∩ s_g|` as `(k, g, count)`, sorted by `(k, g)`,
/// plus superpixel sizes keyed by `k`.
fn overlaps(labels: &LabelMap, gt: &GroundTruth) -> Overlaps {
    let mut pairs: Vec<(u32, u32)> = labels
        .as_slice()
        .iter()
        .copied()
        .zip(gt.0.as_slice().iter().copied())
        .collect();
    pairs.sort_unstable();
    let mut inter: Vec<(u32, u32, usize)> = Vec::new();
    for p in pairs {
        match inter.last_mut() {
            Some(last) if (last.0, last.1) == p => last.2 += 1,
            _ => inter.push((p.0, p.1, 1)),
        }
    }
    let mut sizes: Vec<(u32, usize)> = Vec::new();
    for &(k, _, n) in &inter {
        match sizes.last_mut() {
            Some(last) if last.0 == k => last.1 += n,
            _ => sizes.push((k, n)),
        }
    }
    (inter, sizes)
}

/// `UE = −1 + (1/N)·Σ |s_k|` over pairs `(k, g)` with
/// `|s_k ∩ s_g| > 0.05·|s_k|` (strict).
pub fn undersegmentation_error(labels: &LabelMap, gt: &GroundTruth) -> Result<f64> {
    check(labels, gt)?;
    let (inter, sizes) = overlaps(labels, gt);
    let mut charged = 0usize;
    let mut s = 0;
    for &(k, _, n) in &inter {
        while sizes[s].0 != k {
            s += 1;
        }
        let size = sizes[s].1;
        if n as f64 > LEAK_FRACTION * size as f64 {
            charged += size;
        }
    }
    Ok(charged as f64 / labels.len() as f64 - 1.0)
}

/// `ASA = (1/N)·Σ_k max_g |s_k ∩ s_g|`.
pub fn achievable_accuracy(labels: &LabelMap, gt: &GroundTruth) -> Result<f64> {
    check(labels, gt)?;
    let (inter, _) = overlaps(labels, gt);
    let mut total = 0usize;
    let mut i = 0;
    while i < inter.len() {
        let k = inter[i].0;
        let mut best = 0;
        while i < inter.len() && inter[i].0 == k {
            best = best.max(inter[i].2);
            i += 1;
        }
        total += best;
    }
    Ok(total as f64 / labels.len() as f64)
}

/// Scores against one or more annotations: BR over the union of their
/// boundaries, UE and ASA averaged across annotations.
pub fn evaluate(labels: &LabelMap, gts: &[GroundTruth], tol: usize) -> Result<Accuracy> {
    if gts.is_empty() {
        return Err(Error::Config("at least one ground truth is required"));
    }
    let br = boundary_recall_union(labels, gts, tol)?;
    let mut ue = 0.0;
    let mut asa = 0.0;
    for gt in gts {
        ue += undersegmentation_error(labels, gt)?;
        asa += achievable_accuracy(labels, gt)?;
    }
    let n = gts.len() as f64;
    Ok(Accuracy {
        boundary_recall: br,
        undersegmentation_error: ue / n,
        achievable_accuracy: asa / n,
    })
}
