//! Set-intersection and neighbourhood-scan versions of the metrics.

use std::collections::{HashMap, HashSet};

use gmmsp_core::LabelMap;

fn pixel_sets(m: &LabelMap) -> HashMap<u32, HashSet<usize>> {
    let mut sets: HashMap<u32, HashSet<usize>> = HashMap::new();
    for (i, &l) in m.as_slice().iter().enumerate() {
        sets.entry(l).or_default().insert(i);
    }
    sets
}

pub fn undersegmentation_error(sp: &LabelMap, gt: &LabelMap) -> f64 {
    let (s, g) = (pixel_sets(sp), pixel_sets(gt));
    let mut sum = 0usize;
    for sk in s.values() {
        for sg in g.values() {
            let inter = sk.intersection(sg).count();
            if inter as f64 > 0.05 * sk.len() as f64 {
                sum += sk.len();
            }
        }
    }
    sum as f64 / sp.len() as f64 - 1.0
}

pub fn achievable_accuracy(sp: &LabelMap, gt: &LabelMap) -> f64 {
    let (s, g) = (pixel_sets(sp), pixel_sets(gt));
    let total: usize = s
        .values()
        .map(|sk| g.values().map(|sg| sk.intersection(sg).count()).max().unwrap())
        .sum();
    total as f64 / sp.len() as f64
}

// Boundary pixels: right or lower neighbour differs. Recall by scanning the
// full (2·tol+1)² neighbourhood of every ground-truth boundary pixel.
pub fn boundary_recall(sp: &LabelMap, gt: &LabelMap, tol: i64) -> f64 {
    let (w, h) = sp.dims();
    let is_b = |m: &LabelMap, x: usize, y: usize| {
        (x + 1 < w && m.get(x + 1, y) != m.get(x, y)) || (y + 1 < h && m.get(x, y + 1) != m.get(x, y))
    };
    let (mut total, mut hit) = (0, 0);
    for y in 0..h {
        for x in 0..w {
            if !is_b(gt, x, y) {
                continue;
            }
            total += 1;
            let mut found = false;
            for dy in -tol..=tol {
                for dx in -tol..=tol {
                    let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                    if nx >= 0 && ny >= 0 && (nx as usize) < w && (ny as usize) < h && is_b(sp, nx as usize, ny as usize) {
                        found = true;
                    }
                }
            }
            hit += found as usize;
        }
    }
    if total == 0 { 1.0 } else { hit as f64 / total as f64 }
}
