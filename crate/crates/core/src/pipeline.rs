use alloc::vec::Vec;

use crate::error::Result;
use crate::features::FeatureImage;
use crate::gmm::{run_em, EmConfig, SuperpixelParams};
use crate::grid::GridGeometry;
use crate::labeling::{assign_labels, enforce_connectivity, LabelMap};

/// Output of the full segmentation pipeline.
#[derive(Debug, Clone)]
pub struct Segmentation {
    /// Final, 4-connected, densely numbered labels.
    pub labels: LabelMap,
    /// Posterior argmax labels before connectivity enforcement.
    pub raw_labels: LabelMap,
    pub params: Vec<SuperpixelParams>,
}

/// EM estimation, posterior labeling and connectivity enforcement.
pub fn segment(features: &FeatureImage, geom: &GridGeometry, cfg: &EmConfig) -> Result<Segmentation> {
    let em = run_em(features, geom, cfg)?;
    let raw_labels = assign_labels(features, geom, &em.params)?;
    let labels = enforce_connectivity(&raw_labels, features, geom)?;
    Ok(Segmentation {
        labels,
        raw_labels,
        params: em.params,
    })
}
