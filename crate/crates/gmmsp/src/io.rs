//! File-level image and label-map IO. Formats are detected from content on
//! read and chosen by extension on write.

use std::fs;
use std::io::Cursor;
use std::path::Path;

use gmmsp_core::{LabelMap, RasterImage};

use crate::error::{Error, Result};
use crate::pnm;

const PNG_SIGNATURE: &[u8] = b"\x89PNG\r\n\x1a\n";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Png,
    Pnm,
}

impl Format {
    pub fn from_path(path: &Path) -> Result<Self> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase);
        match ext.as_deref() {
            Some("png") => Ok(Self::Png),
            Some("pgm" | "ppm" | "pnm") => Ok(Self::Pnm),
            _ => Err(Error::Usage(format!(
                "{}: output extension must be .png, .ppm, .pgm or .pnm",
                path.display()
            ))),
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Decodes PNG, PGM (`P5`) or PPM (`P6`) bytes into an 8-bit raster.
/// Alpha channels are dropped; palette and sub-byte PNGs are expanded.
pub fn decode_image(bytes: &[u8]) -> Result<RasterImage> {
    if bytes.starts_with(PNG_SIGNATURE) {
        let (w, h, channels, depth, data) = decode_png(bytes)?;
        if depth != 8 {
            return Err(Error::Unsupported(format!("{depth}-bit PNG (only 8-bit samples are accepted)")));
        }
        let data = match channels {
            1 | 3 => data,
            2 => data.chunks_exact(2).map(|p| p[0]).collect(),
            4 => data.chunks_exact(4).flat_map(|p| [p[0], p[1], p[2]]).collect(),
            c => return Err(Error::Unsupported(format!("{c}-channel PNG"))),
        };
        let channels = if channels <= 2 { 1 } else { 3 };
        Ok(RasterImage::new(w, h, channels, data)?)
    } else if pnm::is_pnm(bytes) {
        pnm::decode(bytes)
    } else {
        Err(Error::Malformed("unrecognised format (expected PNG, P5 or P6)".into()))
    }
}

fn decode_png(bytes: &[u8]) -> Result<(usize, usize, usize, u8, Vec<u8>)> {
    let malformed = |e: png::DecodingError| Error::Malformed(e.to_string());
    let mut decoder = png::Decoder::new(Cursor::new(bytes));
    decoder.set_transformations(png::Transformations::EXPAND);
    let mut reader = decoder.read_info().map_err(malformed)?;
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::Unsupported("PNG too large".into()))?;
    let mut buf = vec![0; size];
    let info = reader.next_frame(&mut buf).map_err(malformed)?;
    buf.truncate(info.buffer_size());
    let channels = info.color_type.samples();
    let depth = match info.bit_depth {
        png::BitDepth::Sixteen => 16,
        _ => 8,
    };
    Ok((info.width as usize, info.height as usize, channels, depth, buf))
}

pub fn load_image(path: &Path) -> Result<RasterImage> {
    decode_image(&read(path)?).map_err(|e| e.in_file(path))
}

pub fn encode_png(img: &RasterImage) -> Result<Vec<u8>> {
    let color = if img.channels() == 1 {
        png::ColorType::Grayscale
    } else {
        png::ColorType::Rgb
    };
    encode_png_raw(img.width(), img.height(), color, png::BitDepth::Eight, img.data())
}

fn encode_png_raw(w: usize, h: usize, color: png::ColorType, depth: png::BitDepth, data: &[u8]) -> Result<Vec<u8>> {
    let failed = |e: png::EncodingError| Error::Report(format!("PNG encoding failed: {e}"));
    let mut out = Vec::new();
    let mut enc = png::Encoder::new(&mut out, w as u32, h as u32);
    enc.set_color(color);
    enc.set_depth(depth);
    let mut writer = enc.write_header().map_err(failed)?;
    writer.write_image_data(data).map_err(failed)?;
    writer.finish().map_err(failed)?;
    Ok(out)
}

/// Encodes `img` in the format implied by `path`'s extension.
pub fn encode_image_for(path: &Path, img: &RasterImage) -> Result<Vec<u8>> {
    match Format::from_path(path)? {
        Format::Png => encode_png(img),
        Format::Pnm => Ok(pnm::encode(img)),
    }
}

pub fn save_image(img: &RasterImage, path: &Path) -> Result<()> {
    write(path, &encode_image_for(path, img)?)
}

/// Reads a ground-truth or label map: 8/16-bit `P5`, or a single-channel
/// 8/16-bit PNG.
pub fn load_labels(path: &Path) -> Result<LabelMap> {
    let bytes = read(path)?;
    let decoded = if bytes.starts_with(PNG_SIGNATURE) {
        decode_png(&bytes).and_then(|(w, h, channels, depth, data)| {
            if channels != 1 {
                return Err(Error::Unsupported("label PNG must be single-channel".into()));
            }
            let labels = if depth == 16 {
                data.chunks_exact(2).map(|b| u16::from_be_bytes([b[0], b[1]]) as u32).collect()
            } else {
                data.into_iter().map(u32::from).collect()
            };
            Ok(LabelMap::new(w, h, labels)?)
        })
    } else {
        pnm::decode_labels(&bytes)
    };
    decoded.map_err(|e| e.in_file(path))
}

/// Encodes labels as 16-bit `P5`, or as a 16-bit grayscale PNG for `.png`.
pub fn encode_labels_for(path: &Path, labels: &LabelMap) -> Result<Vec<u8>> {
    let raw = pnm::encode_labels(labels)?;
    match Format::from_path(path)? {
        Format::Pnm => Ok(raw),
        Format::Png => {
            let (_, samples) = pnm::parse_header(&raw)?;
            encode_png_raw(
                labels.width(),
                labels.height(),
                png::ColorType::Grayscale,
                png::BitDepth::Sixteen,
                samples,
            )
        }
    }
}

pub fn save_labels(labels: &LabelMap, path: &Path) -> Result<()> {
    write(path, &encode_labels_for(path, labels)?)
}
