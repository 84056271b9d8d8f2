#![allow(dead_code)]

use gmmsp_core::{ColorModel, FeatureImage, LabelMap, RasterImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rgb(rng: &mut ChaCha8Rng, w: usize, h: usize) -> RasterImage {
    let data = (0..w * h * 3).map(|_| rng.gen()).collect();
    RasterImage::new(w, h, 3, data).unwrap()
}

pub fn flat_rgb(w: usize, h: usize, rgb: [u8; 3]) -> RasterImage {
    let data = (0..w * h).flat_map(|_| rgb).collect();
    RasterImage::new(w, h, 3, data).unwrap()
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box–Muller
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Left half drawn around one Lab colour, right half around another, with
/// isotropic noise of standard deviation `sigma`.
pub fn two_gaussian(rng: &mut ChaCha8Rng, w: usize, h: usize, sigma: f64) -> FeatureImage {
    let colors: Vec<[f64; 3]> = (0..w * h)
        .map(|i| {
            let base = if i % w < w / 2 { [35.0, 20.0, -30.0] } else { [70.0, -25.0, 40.0] };
            [
                base[0] + sigma * normal(rng),
                base[1] + sigma * normal(rng),
                base[2] + sigma * normal(rng),
            ]
        })
        .collect();
    FeatureImage::from_colors(w, h, ColorModel::Lab, &colors)
}

/// Two strongly contrasting regions split by `y = h/2 + amp·sin(2πx/period)`.
/// Returns the raster and the region id per pixel.
pub fn sinusoid(w: usize, h: usize, amp: f64, period: f64) -> (RasterImage, Vec<u32>) {
    let mut data = Vec::with_capacity(w * h * 3);
    let mut regions = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let edge = h as f64 / 2.0 + amp * (2.0 * std::f64::consts::PI * x as f64 / period).sin();
            let below = (y as f64) >= edge;
            regions.push(below as u32);
            data.extend_from_slice(if below { &[230, 200, 40] } else { &[20, 40, 160] });
        }
    }
    (RasterImage::new(w, h, 3, data).unwrap(), regions)
}

/// Random label map with `n` distinct labels.
pub fn random_labels(rng: &mut ChaCha8Rng, w: usize, h: usize, n: u32) -> LabelMap {
    LabelMap::new(w, h, (0..w * h).map(|_| rng.gen_range(0..n)).collect()).unwrap()
}

/// Blocky random map: a coarse random grid upsampled, so components are
/// larger than single pixels.
pub fn blocky_labels(rng: &mut ChaCha8Rng, w: usize, h: usize, block: usize, n: u32) -> LabelMap {
    let bw = w.div_ceil(block);
    let coarse: Vec<u32> = (0..bw * h.div_ceil(block)).map(|_| rng.gen_range(0..n)).collect();
    LabelMap::new(w, h, (0..w * h).map(|i| coarse[(i / w / block) * bw + (i % w) / block]).collect()).unwrap()
}

/// Image with salt-and-pepper noise on a smooth gradient.
pub fn salt_noise(rng: &mut ChaCha8Rng, w: usize, h: usize, density: f64) -> RasterImage {
    let mut data = Vec::with_capacity(w * h * 3);
    for y in 0..h {
        for x in 0..w {
            let px = if rng.gen_bool(density) {
                if rng.gen_bool(0.5) { [255, 255, 255] } else { [0, 0, 0] }
            } else {
                [(x * 255 / w) as u8, (y * 255 / h) as u8, 128]
            };
            data.extend_from_slice(&px);
        }
    }
    RasterImage::new(w, h, 3, data).unwrap()
}

/// 4-connectivity check by independent BFS: every label's pixel set forms a
/// single component.
pub fn every_label_connected(m: &LabelMap) -> bool {
    let (w, h) = m.dims();
    let l = m.as_slice();
    let mut seen = vec![false; w * h];
    let mut started = std::collections::HashSet::new();
    for s in 0..w * h {
        if seen[s] {
            continue;
        }
        if !started.insert(l[s]) {
            return false;
        }
        let mut queue = std::collections::VecDeque::from([s]);
        seen[s] = true;
        while let Some(i) = queue.pop_front() {
            let (x, y) = (i % w, i / w);
            let mut nb = Vec::new();
            if x > 0 { nb.push(i - 1) }
            if x + 1 < w { nb.push(i + 1) }
            if y > 0 { nb.push(i - w) }
            if y + 1 < h { nb.push(i + w) }
            for j in nb {
                if !seen[j] && l[j] == l[i] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    true
}

pub fn label_sizes(m: &LabelMap) -> std::collections::HashMap<u32, usize> {
    let mut sizes = std::collections::HashMap::new();
    for &l in m.as_slice() {
        *sizes.entry(l).or_insert(0) += 1;
    }
    sizes
}

/// `|a − b| ≤ tol·max(1, |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}
