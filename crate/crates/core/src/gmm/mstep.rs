use alloc::vec::Vec;

use super::{EmConfig, ResponsibilityTable, SuperpixelParams};
use crate::eigen::Sym2;
use crate::features::{ColorModel, FeatureImage};
use crate::grid::GridGeometry;
use crate::par;

/// Initial parameters: means at the grid-cell centre pixels, spatial
/// covariance `diag(v_x², v_y²)`, colour covariance `λ²·I`, all floored.
pub fn init_params(features: &FeatureImage, geom: &GridGeometry, cfg: &EmConfig) -> Vec<SuperpixelParams> {
    let vx = geom.interval_x() as f64;
    let vy = geom.interval_y() as f64;
    let var = cfg.lambda * cfg.lambda;
    (0..geom.num_superpixels())
        .map(|k| {
            SuperpixelParams {
                mean: *features.get(geom.center_pixel(k)),
                spatial: Sym2::diag(vx * vx, vy * vy),
                lum_var: var,
                chroma: Sym2::diag(var, var),
            }
            .regularized(cfg)
        })
        .collect()
}

/// Weighted mean and scatter of every superpixel over its window, followed
/// by the eigenvalue floors. The mean is updated first and the scatter uses
/// the new mean. Pixels are accumulated in row-major window order.
///
/// A superpixel whose window carries no responsibility mass at all keeps its
/// `previous` parameters.
pub fn m_step(
    features: &FeatureImage,
    geom: &GridGeometry,
    r: &ResponsibilityTable,
    cfg: &EmConfig,
    previous: &[SuperpixelParams],
) -> Vec<SuperpixelParams> {
    debug_assert_eq!(previous.len(), geom.num_superpixels());
    let model = features.model();
    par::map_indexed(geom.num_superpixels(), |k| {
        update_one(features, geom, r, k, model).map_or(previous[k], |p| p.regularized(cfg))
    })
}

fn update_one(
    features: &FeatureImage,
    geom: &GridGeometry,
    r: &ResponsibilityTable,
    k: usize,
    model: ColorModel,
) -> Option<SuperpixelParams> {
    let window = geom.window_of(k);
    let width = geom.width();
    let dim = model.dim();

    let mut total = 0.0;
    let mut weighted = [0.0; 5];
    for (x, y) in window.pixels() {
        let i = y * width + x;
        let w = r.weight(i, k).unwrap_or(0.0);
        let z = features.get(i);
        total += w;
        for d in 0..dim {
            weighted[d] += w * z[d];
        }
    }
    if !(total > 0.0 && total.is_finite()) {
        return None;
    }
    let mut mean = [0.0; 5];
    for d in 0..dim {
        mean[d] = weighted[d] / total;
    }

    let mut s = [0.0; 3];
    let mut lum = 0.0;
    let mut c = [0.0; 3];
    for (x, y) in window.pixels() {
        let i = y * width + x;
        let w = r.weight(i, k).unwrap_or(0.0);
        let z = features.get(i);
        let (dx, dy) = (z[0] - mean[0], z[1] - mean[1]);
        s[0] += w * dx * dx;
        s[1] += w * dx * dy;
        s[2] += w * dy * dy;
        let dl = z[2] - mean[2];
        lum += w * dl * dl;
        if model == ColorModel::Lab {
            let (da, db) = (z[3] - mean[3], z[4] - mean[4]);
            c[0] += w * da * da;
            c[1] += w * da * db;
            c[2] += w * db * db;
        }
    }
    Some(SuperpixelParams {
        mean,
        spatial: Sym2::new(s[0] / total, s[1] / total, s[2] / total),
        lum_var: lum / total,
        chroma: Sym2::new(c[0] / total, c[1] / total, c[2] / total),
    })
}
