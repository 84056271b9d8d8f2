//! Per-pixel feature vectors `z_i = (x, y, colour)`.

use alloc::vec::Vec;

use crate::color::{linear_rgb_to_xyz, linearization_table, xyz_to_lab};
use crate::par;
use crate::raster::RasterImage;

/// Feature vector `(x, y, c0, c1, c2)`. Colour images store `(L, a, b)` in the
/// last three slots; grayscale stores the raw intensity in `c0` and zeros in
/// the rest.
pub type Feature = [f64; 5];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColorModel {
    /// Single intensity channel in `[0, 255]`.
    Gray,
    /// CIELAB (D65).
    Lab,
}

impl ColorModel {
    /// Feature dimension `D`.
    pub fn dim(self) -> usize {
        match self {
            ColorModel::Gray => 3,
            ColorModel::Lab => 5,
        }
    }

    /// Number of colour components.
    pub fn color_dim(self) -> usize {
        self.dim() - 2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureImage {
    width: usize,
    height: usize,
    model: ColorModel,
    data: Vec<Feature>,
}

impl FeatureImage {
    /// Builds features from a raster: RGB goes through sRGB → linear → XYZ →
    /// CIELAB, gray intensities pass through unscaled.
    pub fn from_raster(img: &RasterImage) -> Self {
        let (width, height) = (img.width(), img.height());
        let model = if img.channels() == 1 {
            ColorModel::Gray
        } else {
            ColorModel::Lab
        };
        let table = linearization_table();
        let mut data = alloc::vec![[0.0; 5]; width * height];
        par::for_each_chunk(&mut data, width, |y, row| {
            for (x, z) in row.iter_mut().enumerate() {
                let px = img.pixel(y * width + x);
                z[0] = x as f64;
                z[1] = y as f64;
                match model {
                    ColorModel::Gray => z[2] = px[0] as f64,
                    ColorModel::Lab => {
                        let lin = [
                            table[px[0] as usize],
                            table[px[1] as usize],
                            table[px[2] as usize],
                        ];
                        let lab = xyz_to_lab(linear_rgb_to_xyz(lin));
                        z[2..5].copy_from_slice(&lab);
                    }
                }
            }
        });
        Self {
            width,
            height,
            model,
            data,
        }
    }

    /// Features from explicit colour values (`colors[i]` holds the colour
    /// components of pixel `i`; extra slots are ignored for gray).
    pub fn from_colors(width: usize, height: usize, model: ColorModel, colors: &[[f64; 3]]) -> Self {
        assert_eq!(colors.len(), width * height, "colour count must equal pixel count");
        let cd = model.color_dim();
        let data = colors
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut z = [(i % width) as f64, (i / width) as f64, 0.0, 0.0, 0.0];
                z[2..2 + cd].copy_from_slice(&c[..cd]);
                z
            })
            .collect();
        Self {
            width,
            height,
            model,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn model(&self) -> ColorModel {
        self.model
    }

    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> &Feature {
        &self.data[i]
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> &Feature {
        &self.data[y * self.width + x]
    }

    pub fn as_slice(&self) -> &[Feature] {
        &self.data
    }

    /// Colour part of pixel `i` (length `D - 2`).
    #[inline]
    pub fn color(&self, i: usize) -> &[f64] {
        &self.data[i][2..self.dim()]
    }
}
