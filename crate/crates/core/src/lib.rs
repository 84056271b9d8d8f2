//! Superpixel segmentation with pixel-local Gaussian mixture models.
//!
//! Every superpixel is a Gaussian over the joint `(x, y, colour)` feature
//! space. A pixel may only be generated by the (at most nine) superpixels
//! whose grid windows cover it, so each pixel carries its own small mixture.
//! Parameters are estimated with expectation-maximization using
//! block-diagonal covariances whose eigenvalues are floored, labels are read
//! off the posterior, and a final pass merges small disconnected fragments.
//!
//! The crate is `no_std` + `alloc` with default features disabled. The
//! default `parallel` feature runs the E-step across pixels and the M-step
//! across superpixels on the current rayon pool; results are bit-identical
//! for any worker count.
//!
//! ```
//! use gmmsp_core::{segment, EmConfig, FeatureImage, GridGeometry, RasterImage};
//!
//! let raster = RasterImage::new(32, 32, 3, vec![90; 32 * 32 * 3]).unwrap();
//! let features = FeatureImage::from_raster(&raster);
//! let geom = GridGeometry::from_count(32, 32, 16).unwrap();
//! let seg = segment(&features, &geom, &EmConfig::default()).unwrap();
//! assert_eq!(seg.labels.width(), 32);
//! ```
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod color;
pub mod eigen;
mod error;
pub mod features;
pub mod gmm;
pub mod grid;
pub mod labeling;
mod math;
pub mod metrics;
mod par;
mod pipeline;
pub mod raster;

pub use error::{Error, Result};
pub use features::{ColorModel, Feature, FeatureImage};
pub use gmm::{EmConfig, ResponsibilityTable, SuperpixelParams};
pub use grid::{Candidates, GridGeometry, Window};
pub use labeling::LabelMap;
pub use pipeline::{segment, Segmentation};
pub use raster::RasterImage;
