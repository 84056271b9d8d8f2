use std::path::Path;

use gmmsp_core::{Error as CoreError, LabelMap, RasterImage};

use crate::error::Result;
use crate::io::save_image;

pub const BOUNDARY_COLOR: [u8; 3] = [255, 0, 0];

/// Paints every pixel with a differently labelled 4-neighbour in `color`.
/// Gray inputs are expanded to RGB so the colour can be shown.
pub fn draw_boundaries(img: &RasterImage, labels: &LabelMap, color: [u8; 3]) -> Result<RasterImage> {
    if labels.dims() != (img.width(), img.height()) {
        return Err(CoreError::mismatch((img.width(), img.height()), labels.dims()).into());
    }
    let mask = labels.boundary_mask();
    let mut data = Vec::with_capacity(mask.len() * 3);
    for (i, &edge) in mask.iter().enumerate() {
        let px = img.pixel(i);
        let rgb = if edge {
            color
        } else if px.len() == 1 {
            [px[0]; 3]
        } else {
            [px[0], px[1], px[2]]
        };
        data.extend_from_slice(&rgb);
    }
    Ok(RasterImage::new(img.width(), img.height(), 3, data)?)
}

pub fn save_label_overlay(img: &RasterImage, labels: &LabelMap, path: &Path) -> Result<()> {
    save_label_overlay_with(img, labels, path, BOUNDARY_COLOR)
}

pub fn save_label_overlay_with(img: &RasterImage, labels: &LabelMap, path: &Path, color: [u8; 3]) -> Result<()> {
    save_image(&draw_boundaries(img, labels, color)?, path)
}
