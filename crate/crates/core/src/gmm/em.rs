use alloc::vec::Vec;

use super::{e_step, init_params, m_step, EmConfig, ResponsibilityTable, SuperpixelParams};
use crate::error::{Error, Result};
use crate::features::FeatureImage;
use crate::grid::GridGeometry;

/// Final estimate of the EM loop.
#[derive(Debug, Clone)]
pub struct EmOutcome {
    pub params: Vec<SuperpixelParams>,
    pub responsibilities: ResponsibilityTable,
}

/// State handed to an observer after each E-step. `iteration` is 0 for the
/// E-step that follows initialization.
#[derive(Debug)]
pub struct EmProgress<'a> {
    pub iteration: usize,
    pub params: &'a [SuperpixelParams],
    pub responsibilities: &'a ResponsibilityTable,
}

/// Runs initialization, one E-step, then a fixed number of M/E rounds.
pub fn run_em(features: &FeatureImage, geom: &GridGeometry, cfg: &EmConfig) -> Result<EmOutcome> {
    run_em_observed(features, geom, cfg, |_| {})
}

pub fn run_em_observed<F>(
    features: &FeatureImage,
    geom: &GridGeometry,
    cfg: &EmConfig,
    mut observer: F,
) -> Result<EmOutcome>
where
    F: FnMut(&EmProgress<'_>),
{
    cfg.validate()?;
    if (features.width(), features.height()) != (geom.width(), geom.height()) {
        return Err(Error::mismatch(
            (features.width(), features.height()),
            (geom.width(), geom.height()),
        ));
    }
    let mut params = init_params(features, geom, cfg);
    let mut r = ResponsibilityTable::new(geom.width(), geom.height());
    e_step(features, geom, &params, &mut r)?;
    observer(&EmProgress {
        iteration: 0,
        params: &params,
        responsibilities: &r,
    });
    for t in 1..=cfg.iterations {
        params = m_step(features, geom, &r, cfg, &params);
        e_step(features, geom, &params, &mut r)?;
        observer(&EmProgress {
            iteration: t,
            params: &params,
            responsibilities: &r,
        });
    }
    Ok(EmOutcome {
        params,
        responsibilities: r,
    })
}
