//! Direct, unoptimized translations of the model equations. Shares no code
//! with the library beyond plain data types: full D×D covariance matrices,
//! Gauss–Jordan inversion, LU determinants, explicit densities, brute-force
//! window membership and a Jacobi-angle 2×2 eigensolver.
#![allow(dead_code, clippy::needless_range_loop)]

pub mod metrics;

use gmmsp_core::eigen::Sym2;
use gmmsp_core::{ColorModel, FeatureImage, SuperpixelParams};

pub struct Grid {
    pub w: usize,
    pub h: usize,
    pub vx: usize,
    pub vy: usize,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn new(w: usize, h: usize, vx: usize, vy: usize) -> Self {
        Self { w, h, vx, vy, nx: w / vx, ny: h / vy }
    }

    pub fn k(&self) -> usize {
        self.nx * self.ny
    }

    pub fn in_window(&self, k: usize, x: usize, y: usize) -> bool {
        let (kx, ky) = ((k % self.nx) as i64, (k / self.nx) as i64);
        let (vx, vy) = (self.vx as i64, self.vy as i64);
        let xb = (vx * (kx - 1)).max(0);
        let xe = (vx * (kx + 2)).min(self.w as i64);
        let yb = (vy * (ky - 1)).max(0);
        let ye = (vy * (ky + 2)).min(self.h as i64);
        let (x, y) = (x as i64, y as i64);
        xb <= x && x < xe && yb <= y && y < ye
    }

    pub fn candidates(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.k()).filter(|&k| self.in_window(k, x, y)).collect()
    }
}

pub fn dim(model: ColorModel) -> usize {
    match model {
        ColorModel::Gray => 3,
        ColorModel::Lab => 5,
    }
}

/// Full covariance matrix assembled from the blocks.
pub fn full_cov(p: &SuperpixelParams, model: ColorModel) -> Vec<Vec<f64>> {
    let d = dim(model);
    let mut m = vec![vec![0.0; d]; d];
    m[0][0] = p.spatial.xx;
    m[0][1] = p.spatial.xy;
    m[1][0] = p.spatial.xy;
    m[1][1] = p.spatial.yy;
    m[2][2] = p.lum_var;
    if model == ColorModel::Lab {
        m[3][3] = p.chroma.xx;
        m[3][4] = p.chroma.xy;
        m[4][3] = p.chroma.xy;
        m[4][4] = p.chroma.yy;
    }
    m
}

pub fn invert(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, piv);
        let p = a[c][c];
        for v in a[c].iter_mut() {
            *v /= p;
        }
        for r in 0..n {
            if r != c {
                let f = a[r][c];
                if f != 0.0 {
                    for j in 0..2 * n {
                        a[r][j] -= f * a[c][j];
                    }
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

pub fn det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = 1.0;
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        if piv != c {
            a.swap(c, piv);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for j in c..n {
                a[r][j] -= f * a[c][j];
            }
        }
    }
    det
}

/// `p(z; θ)` evaluated literally: normalizer times `exp(−½ (z−μ)ᵀ Σ⁻¹ (z−μ))`.
pub fn pdf(z: &[f64; 5], p: &SuperpixelParams, model: ColorModel) -> f64 {
    let d = dim(model);
    let cov = full_cov(p, model);
    let inv = invert(&cov);
    let diff: Vec<f64> = (0..d).map(|j| z[j] - p.mean[j]).collect();
    let mut q = 0.0;
    for r in 0..d {
        for c in 0..d {
            q += diff[r] * inv[r][c] * diff[c];
        }
    }
    let norm = (2.0 * std::f64::consts::PI).powf(d as f64 / 2.0) * det(&cov).sqrt();
    (-0.5 * q).exp() / norm
}

pub fn densities(f: &FeatureImage, g: &Grid, params: &[SuperpixelParams]) -> Vec<Vec<(usize, f64)>> {
    (0..g.w * g.h)
        .map(|i| {
            let (x, y) = (i % g.w, i / g.w);
            g.candidates(x, y)
                .into_iter()
                .map(|k| (k, pdf(f.get(i), &params[k], f.model())))
                .collect()
        })
        .collect()
}

/// `R_{i,k} = p_k / Σ_{k'} p_{k'}`.
pub fn e_step(f: &FeatureImage, g: &Grid, params: &[SuperpixelParams]) -> Vec<Vec<(usize, f64)>> {
    densities(f, g, params)
        .into_iter()
        .map(|row| {
            let s: f64 = row.iter().map(|e| e.1).sum();
            row.into_iter().map(|(k, p)| (k, p / s)).collect()
        })
        .collect()
}

pub fn log_likelihood(f: &FeatureImage, g: &Grid, params: &[SuperpixelParams]) -> f64 {
    densities(f, g, params)
        .into_iter()
        .map(|row| row.iter().map(|e| e.1).sum::<f64>().ln())
        .sum()
}

/// Posterior argmax, ties to the smallest index.
pub fn labels(f: &FeatureImage, g: &Grid, params: &[SuperpixelParams]) -> Vec<u32> {
    e_step(f, g, params)
        .into_iter()
        .map(|row| {
            let mut best = row[0];
            for &(k, r) in &row[1..] {
                if r > best.1 {
                    best = (k, r);
                }
            }
            best.0 as u32
        })
        .collect()
}

/// Jacobi-rotation eigendecomposition, floor, reconstruction.
pub fn regularize(m: Sym2, eps: f64) -> Sym2 {
    let theta = 0.5 * (2.0 * m.xy).atan2(m.xx - m.yy);
    let (s, c) = theta.sin_cos();
    let l1 = m.xx * c * c + 2.0 * m.xy * s * c + m.yy * s * s;
    let l2 = m.xx * s * s - 2.0 * m.xy * s * c + m.yy * c * c;
    let (l1, l2) = (l1.max(eps), l2.max(eps));
    Sym2::new(
        l1 * c * c + l2 * s * s,
        (l1 - l2) * s * c,
        l1 * s * s + l2 * c * c,
    )
}

/// Weighted mean and block scatter over `I_k` for responsibilities `r`
/// (`r[i]` holds `(k, R_{i,k})` pairs), then the eigenvalue floors.
pub fn m_step(
    f: &FeatureImage,
    g: &Grid,
    r: &[Vec<(usize, f64)>],
    eps_s: f64,
    eps_c: f64,
) -> Vec<SuperpixelParams> {
    let model = f.model();
    let d = dim(model);
    (0..g.k())
        .map(|k| {
            let members: Vec<(usize, f64)> = (0..g.w * g.h)
                .filter(|&i| g.in_window(k, i % g.w, i / g.w))
                .map(|i| (i, r[i].iter().find(|e| e.0 == k).map_or(0.0, |e| e.1)))
                .collect();
            let total: f64 = members.iter().map(|m| m.1).sum();
            let mut mean = [0.0; 5];
            for &(i, w) in &members {
                for j in 0..d {
                    mean[j] += w * f.get(i)[j] / total;
                }
            }
            let mut scatter = vec![vec![0.0; d]; d];
            for &(i, w) in &members {
                let z = f.get(i);
                for a in 0..d {
                    for b in 0..d {
                        scatter[a][b] += w * (z[a] - mean[a]) * (z[b] - mean[b]) / total;
                    }
                }
            }
            let spatial = regularize(Sym2::new(scatter[0][0], scatter[0][1], scatter[1][1]), eps_s);
            let lum_var = scatter[2][2].max(eps_c);
            let chroma = if model == ColorModel::Lab {
                regularize(Sym2::new(scatter[3][3], scatter[3][4], scatter[4][4]), eps_c)
            } else {
                Sym2::default()
            };
            SuperpixelParams { mean, spatial, lum_var, chroma }
        })
        .collect()
}

/// Largest mixed absolute/relative discrepancy seen while comparing library
/// results against the oracles along an EM run.
#[derive(Debug, Default, Clone, Copy)]
pub struct Discrepancy {
    pub e_step: f64,
    pub m_step: f64,
    pub log_likelihood: f64,
    pub label_mismatches: usize,
    pub checks: usize,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn param_diff(a: &SuperpixelParams, b: &SuperpixelParams, model: ColorModel) -> f64 {
    let d = dim(model);
    let mut m = 0.0f64;
    for j in 0..d {
        m = m.max(rel(a.mean[j], b.mean[j]));
    }
    m = m.max(rel(a.spatial.xx, b.spatial.xx)).max(rel(a.spatial.xy, b.spatial.xy)).max(rel(a.spatial.yy, b.spatial.yy));
    m = m.max(rel(a.lum_var, b.lum_var));
    if model == ColorModel::Lab {
        m = m.max(rel(a.chroma.xx, b.chroma.xx)).max(rel(a.chroma.xy, b.chroma.xy)).max(rel(a.chroma.yy, b.chroma.yy));
    }
    m
}

/// Runs EM on `f` and, at every iteration, re-derives the E-step, M-step,
/// log-likelihood and posterior labels with the oracles.
pub fn compare_run(
    f: &FeatureImage,
    geom: &gmmsp_core::GridGeometry,
    cfg: &gmmsp_core::EmConfig,
) -> Discrepancy {
    use gmmsp_core::gmm;
    let g = Grid::new(geom.width(), geom.height(), geom.interval_x(), geom.interval_y());
    let model = f.model();
    let mut out = Discrepancy::default();
    let mut history: Vec<(Vec<SuperpixelParams>, gmm::ResponsibilityTable)> = Vec::new();
    gmm::run_em_observed(f, geom, cfg, |p| {
        history.push((p.params.to_vec(), p.responsibilities.clone()));
    })
    .unwrap();

    for (t, (params, r)) in history.iter().enumerate() {
        // E-step: table produced from `params`.
        let want = e_step(f, &g, params);
        for (i, row) in want.iter().enumerate() {
            let got: Vec<(usize, f64)> = r.row(i).collect();
            assert_eq!(got.len(), row.len(), "candidate count at pixel {i}");
            for ((gk, gw), (wk, ww)) in got.iter().zip(row) {
                assert_eq!(gk, wk);
                out.e_step = out.e_step.max((gw - ww).abs());
            }
        }
        // M-step: next parameters from this table.
        if let Some((next, _)) = history.get(t + 1) {
            let want_r: Vec<Vec<(usize, f64)>> = (0..g.w * g.h).map(|i| r.row(i).collect()).collect();
            let want = m_step(f, &g, &want_r, cfg.eps_spatial, cfg.eps_color);
            let lib = gmm::m_step(f, geom, r, cfg, params);
            for k in 0..g.k() {
                out.m_step = out.m_step.max(param_diff(&lib[k], &want[k], model));
                out.m_step = out.m_step.max(param_diff(&next[k], &want[k], model));
            }
        }
        let l = gmm::log_likelihood(f, geom, params).unwrap();
        out.log_likelihood = out.log_likelihood.max(rel(l, log_likelihood(f, &g, params)));
        let lab = gmmsp_core::labeling::assign_labels(f, geom, params).unwrap();
        out.label_mismatches += lab
            .as_slice()
            .iter()
            .zip(labels(f, &g, params))
            .filter(|(a, b)| **a != *b)
            .count();
        out.checks += 1;
    }
    out
}
