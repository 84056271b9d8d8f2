//! The mixture model and its EM estimator.
//!
//! Covariances are block diagonal: a 2×2 spatial block, then either a single
//! intensity variance (gray) or a luminance variance plus a 2×2 `(a, b)`
//! block (CIELAB). Every block is eigenvalue-floored after each update, so
//! densities are always finite.

mod em;
mod mstep;
mod responsibility;

pub use em::{run_em, run_em_observed, EmOutcome, EmProgress};
pub use mstep::{init_params, m_step};
pub use responsibility::{e_step, log_likelihood, ResponsibilityTable};

use crate::eigen::{regularize_scalar, Sym2};
use crate::error::{Error, Result};
use crate::features::{ColorModel, Feature};
use crate::math::{ln, LN_2PI};

/// Estimator settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmConfig {
    /// Number of M/E rounds after the initial E-step.
    pub iterations: usize,
    /// Colour distance whose square seeds the colour variances.
    pub lambda: f64,
    /// Eigenvalue floor for spatial blocks.
    pub eps_spatial: f64,
    /// Eigenvalue floor for colour blocks. Larger values give more regular
    /// superpixels.
    pub eps_color: f64,
}

impl Default for EmConfig {
    fn default() -> Self {
        Self {
            iterations: 10,
            lambda: 8.0,
            eps_spatial: 2.0,
            eps_color: 8.0,
        }
    }
}

impl EmConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if self.iterations == 0 {
            return Err(Error::Config("iteration count must be at least 1"));
        }
        if !positive(self.lambda) {
            return Err(Error::Config("lambda must be positive"));
        }
        if !positive(self.eps_spatial) {
            return Err(Error::Config("spatial eigenvalue floor must be positive"));
        }
        if !positive(self.eps_color) {
            return Err(Error::Config("colour eigenvalue floor must be positive"));
        }
        Ok(())
    }
}

/// Parameters `θ_k` of one superpixel's Gaussian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpixelParams {
    /// Mean in feature layout `(x, y, c0, c1, c2)`.
    pub mean: Feature,
    pub spatial: Sym2,
    /// Luminance variance (CIELAB) or intensity variance (gray).
    pub lum_var: f64,
    /// `(a, b)` block; unused for gray images.
    pub chroma: Sym2,
}

impl SuperpixelParams {
    /// Applies the eigenvalue floors to every block.
    pub fn regularized(mut self, cfg: &EmConfig) -> Self {
        self.spatial = self.spatial.regularize(cfg.eps_spatial);
        self.lum_var = regularize_scalar(self.lum_var, cfg.eps_color);
        self.chroma = self.chroma.regularize(cfg.eps_color);
        self
    }

    /// Precomputes inverse blocks and the log normalizer.
    pub fn density(&self, model: ColorModel) -> Density {
        let color = model == ColorModel::Lab;
        let mut log_det = ln(self.spatial.det()) + ln(self.lum_var);
        if color {
            log_det += ln(self.chroma.det());
        }
        let dim = model.dim() as f64;
        Density {
            mean: self.mean,
            spatial_inv: self.spatial.inverse(),
            lum_inv: 1.0 / self.lum_var,
            chroma_inv: if color { self.chroma.inverse() } else { Sym2::default() },
            log_norm: -0.5 * dim * LN_2PI - 0.5 * log_det,
            color,
        }
    }
}

/// A superpixel Gaussian prepared for repeated evaluation.
#[derive(Debug, Clone, Copy)]
pub struct Density {
    mean: Feature,
    spatial_inv: Sym2,
    lum_inv: f64,
    chroma_inv: Sym2,
    log_norm: f64,
    color: bool,
}

impl Density {
    #[inline]
    pub fn log_pdf(&self, z: &Feature) -> f64 {
        let m = &self.mean;
        let mut maha = self.spatial_inv.quad(z[0] - m[0], z[1] - m[1]);
        let dl = z[2] - m[2];
        maha += dl * dl * self.lum_inv;
        if self.color {
            maha += self.chroma_inv.quad(z[3] - m[3], z[4] - m[4]);
        }
        self.log_norm - 0.5 * maha
    }
}

/// `ln p(z; θ)` for a block-diagonal Gaussian.
pub fn log_gaussian(z: &Feature, params: &SuperpixelParams, model: ColorModel) -> f64 {
    params.density(model).log_pdf(z)
}
