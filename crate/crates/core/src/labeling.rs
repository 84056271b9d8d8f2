//! Posterior labeling and connectivity enforcement.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::features::FeatureImage;
use crate::gmm::SuperpixelParams;
use crate::grid::GridGeometry;
use crate::math::sqrt;
use crate::par;

/// Neighbourhood used for components, boundaries and merging.
pub const CONNECTIVITY: usize = 4;

/// Per-pixel superpixel ids, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelMap {
    width: usize,
    height: usize,
    labels: Vec<u32>,
}

impl LabelMap {
    pub fn new(width: usize, height: usize, labels: Vec<u32>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage);
        }
        if labels.len() != width * height {
            return Err(Error::RasterSize {
                expected: width * height,
                actual: labels.len(),
            });
        }
        Ok(Self { width, height, labels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.labels
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.labels
    }

    /// Number of distinct label values.
    pub fn count_distinct(&self) -> usize {
        let mut v = self.labels.clone();
        v.sort_unstable();
        v.dedup();
        v.len()
    }

    /// Renumbers labels densely (`0..n`) in row-major first-occurrence order.
    pub fn relabeled(&self) -> Self {
        let mut v = self.labels.clone();
        v.sort_unstable();
        v.dedup();
        let mut remap: Vec<u32> = alloc::vec![u32::MAX; v.len()];
        let mut next = 0u32;
        let labels = self
            .labels
            .iter()
            .map(|l| {
                let slot = v.binary_search(l).expect("label present");
                if remap[slot] == u32::MAX {
                    remap[slot] = next;
                    next += 1;
                }
                remap[slot]
            })
            .collect();
        Self {
            width: self.width,
            height: self.height,
            labels,
        }
    }

    /// Pixels with a 4-neighbour carrying a different label.
    pub fn boundary_mask(&self) -> Vec<bool> {
        let (w, h) = (self.width, self.height);
        let mut mask = alloc::vec![false; w * h];
        for y in 0..h {
            for x in 0..w {
                let i = y * w + x;
                let l = self.labels[i];
                if x + 1 < w && self.labels[i + 1] != l {
                    mask[i] = true;
                    mask[i + 1] = true;
                }
                if y + 1 < h && self.labels[i + w] != l {
                    mask[i] = true;
                    mask[i + w] = true;
                }
            }
        }
        mask
    }
}

/// `L_i = argmax_{k ∈ K_i} p(z_i; θ_k)`; the posterior denominator is shared
/// by all candidates of a pixel and drops out. Ties go to the smallest `k`.
pub fn assign_labels(
    features: &FeatureImage,
    geom: &GridGeometry,
    params: &[SuperpixelParams],
) -> Result<LabelMap> {
    if (features.width(), features.height()) != (geom.width(), geom.height()) {
        return Err(Error::mismatch(
            (features.width(), features.height()),
            (geom.width(), geom.height()),
        ));
    }
    let model = features.model();
    let dens: Vec<_> = par::map_indexed(params.len(), |k| params[k].density(model));
    let width = geom.width();
    let mut labels = alloc::vec![0u32; geom.num_pixels()];
    par::for_each_chunk(&mut labels, width, |y, row| {
        for (x, out) in row.iter_mut().enumerate() {
            let z = features.at(x, y);
            let mut best = (usize::MAX, f64::NEG_INFINITY);
            for k in geom.candidates_of(x, y).iter() {
                let l = dens[k].log_pdf(z);
                if best.0 == usize::MAX || l > best.1 {
                    best = (k, l);
                }
            }
            *out = best.0 as u32;
        }
    });
    LabelMap::new(geom.width(), geom.height(), labels)
}

/// One 4-connected component of a label map.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    /// Label value shared by the component's pixels.
    pub label: u32,
    pub pixel_count: usize,
    /// Mean colour components (`L, a, b`, or intensity in slot 0).
    pub mean_color: [f64; 3],
    /// Adjacent component ids, ascending.
    pub neighbors: Vec<u32>,
}

/// Component decomposition: `component_of[i]` indexes into `regions`.
/// Components are numbered in row-major order of their first pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct Components {
    pub component_of: Vec<u32>,
    pub regions: Vec<Region>,
}

/// Component id per pixel plus the component count.
pub fn component_map(labels: &LabelMap) -> (Vec<u32>, usize) {
    let (w, h) = labels.dims();
    let src = labels.as_slice();
    let mut comp = alloc::vec![u32::MAX; w * h];
    let mut stack = Vec::new();
    let mut next = 0u32;
    for start in 0..w * h {
        if comp[start] != u32::MAX {
            continue;
        }
        let l = src[start];
        comp[start] = next;
        stack.push(start);
        while let Some(i) = stack.pop() {
            let (x, y) = (i % w, i / w);
            let mut visit = |j: usize| {
                if comp[j] == u32::MAX && src[j] == l {
                    comp[j] = next;
                    stack.push(j);
                }
            };
            if x > 0 {
                visit(i - 1);
            }
            if x + 1 < w {
                visit(i + 1);
            }
            if y > 0 {
                visit(i - w);
            }
            if y + 1 < h {
                visit(i + w);
            }
        }
        next += 1;
    }
    (comp, next as usize)
}

pub fn connected_components(labels: &LabelMap, features: &FeatureImage) -> Result<Components> {
    if labels.dims() != (features.width(), features.height()) {
        return Err(Error::mismatch(
            labels.dims(),
            (features.width(), features.height()),
        ));
    }
    let (w, h) = labels.dims();
    let (comp, n) = component_map(labels);
    let cd = features.model().color_dim();

    let mut regions: Vec<Region> = (0..n)
        .map(|_| Region {
            label: 0,
            pixel_count: 0,
            mean_color: [0.0; 3],
            neighbors: Vec::new(),
        })
        .collect();
    let mut sums = alloc::vec![[0.0f64; 3]; n];
    for (i, &c) in comp.iter().enumerate() {
        let r = &mut regions[c as usize];
        r.label = labels.as_slice()[i];
        r.pixel_count += 1;
        for (s, v) in sums[c as usize].iter_mut().zip(features.color(i)) {
            *s += v;
        }
    }
    for (r, s) in regions.iter_mut().zip(&sums) {
        for (m, v) in r.mean_color.iter_mut().zip(&s[..cd]) {
            *m = v / r.pixel_count as f64;
        }
    }

    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if x + 1 < w && comp[i] != comp[i + 1] {
                edges.push((comp[i], comp[i + 1]));
                edges.push((comp[i + 1], comp[i]));
            }
            if y + 1 < h && comp[i] != comp[i + w] {
                edges.push((comp[i], comp[i + w]));
                edges.push((comp[i + w], comp[i]));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    for (a, b) in edges {
        regions[a as usize].neighbors.push(b);
    }
    Ok(Components {
        component_of: comp,
        regions,
    })
}

/// Smallest region size tolerated after postprocessing: a quarter of one
/// grid cell, rounded up.
pub fn min_region_size(geom: &GridGeometry) -> usize {
    (geom.interval_x() * geom.interval_y()).div_ceil(4)
}

fn color_distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    sqrt(d2)
}

/// Merges every 4-connected component smaller than [`min_region_size`] into
/// the adjacent component with the closest mean colour.
///
/// Components are visited once in ascending order of their initial size
/// (ties by component id). A merged source's size drops to zero and the
/// destination absorbs its size and colour mass. Output labels are dense in
/// row-major first-occurrence order.
pub fn enforce_connectivity(
    labels: &LabelMap,
    features: &FeatureImage,
    geom: &GridGeometry,
) -> Result<LabelMap> {
    if labels.dims() != (geom.width(), geom.height()) {
        return Err(Error::mismatch(labels.dims(), (geom.width(), geom.height())));
    }
    let Components {
        component_of,
        regions,
    } = connected_components(labels, features)?;
    let threshold = min_region_size(geom);
    let n = regions.len();

    let mut size: Vec<usize> = regions.iter().map(|r| r.pixel_count).collect();
    let mut mean: Vec<[f64; 3]> = regions.iter().map(|r| r.mean_color).collect();
    let mut neighbors: Vec<Vec<u32>> = regions.into_iter().map(|r| r.neighbors).collect();
    let mut parent: Vec<u32> = (0..n as u32).collect();

    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by_key(|&c| (size[c as usize], c));

    for c in order {
        let c = c as usize;
        if size[c] >= threshold {
            continue;
        }
        let mut best: Option<(usize, f64)> = None;
        let adj = core::mem::take(&mut neighbors[c]);
        for &nb in &adj {
            let d = find(&mut parent, nb as usize);
            if d == c {
                continue;
            }
            let dist = color_distance(&mean[c], &mean[d]);
            let better = match best {
                None => true,
                Some((bd, bdist)) => dist < bdist || (dist == bdist && d < bd),
            };
            if better {
                best = Some((d, dist));
            }
        }
        let Some((dst, _)) = best else {
            neighbors[c] = adj;
            continue;
        };
        parent[c] = dst as u32;
        let (sc, sd) = (size[c] as f64, size[dst] as f64);
        let src = mean[c];
        for (m, v) in mean[dst].iter_mut().zip(src) {
            *m = (*m * sd + v * sc) / (sd + sc);
        }
        size[dst] += size[c];
        size[c] = 0;
        let merged = &mut neighbors[dst];
        merged.extend(adj);
        merged.sort_unstable();
        merged.dedup();
    }

    let roots: Vec<u32> = (0..n).map(|c| find(&mut parent, c) as u32).collect();
    let merged: Vec<u32> = component_of.iter().map(|&c| roots[c as usize]).collect();
    Ok(LabelMap::new(labels.width(), labels.height(), merged)?.relabeled())
}

fn find(parent: &mut [u32], mut c: usize) -> usize {
    while parent[c] as usize != c {
        let grand = parent[parent[c] as usize];
        parent[c] = grand;
        c = grand as usize;
    }
    c
}
