//! Binary PGM (`P5`) and PPM (`P6`).
//!
//! Images are 8-bit. Label maps are written as 16-bit big-endian `P5` with
//! maxval 65535; 8-bit `P5` label maps are also read.

use gmmsp_core::{LabelMap, RasterImage};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub channels: usize,
    pub width: usize,
    pub height: usize,
    pub maxval: u32,
}

impl Header {
    pub fn bytes_per_sample(&self) -> usize {
        if self.maxval > 255 {
            2
        } else {
            1
        }
    }

    fn payload_len(&self) -> Option<usize> {
        self.width
            .checked_mul(self.height)?
            .checked_mul(self.channels)?
            .checked_mul(self.bytes_per_sample())
    }
}

pub fn is_pnm(bytes: &[u8]) -> bool {
    matches!(bytes, [b'P', b'5' | b'6', ..])
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u64> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Malformed(format!("missing {what} in header")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Malformed(format!("{what} out of range")))
    }
}

/// Parses the header and returns it with the payload slice.
pub fn parse_header(bytes: &[u8]) -> Result<(Header, &[u8])> {
    let channels = match bytes {
        [b'P', b'5', ..] => 1,
        [b'P', b'6', ..] => 3,
        _ => return Err(Error::Malformed("not a binary PGM/PPM file".into())),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::Malformed("zero image dimension".into()));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::Malformed(format!("maxval {maxval} outside 1..=65535")));
    }
    // exactly one whitespace byte separates the header from the samples
    if !bytes.get(cur.pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(Error::Malformed("header not terminated".into()));
    }
    let header = Header {
        channels,
        width: usize::try_from(width).map_err(|_| Error::Malformed("width out of range".into()))?,
        height: usize::try_from(height).map_err(|_| Error::Malformed("height out of range".into()))?,
        maxval: maxval as u32,
    };
    let payload = &bytes[cur.pos + 1..];
    let need = header
        .payload_len()
        .ok_or_else(|| Error::Malformed("dimensions overflow".into()))?;
    if payload.len() < need {
        return Err(Error::Malformed(format!("truncated: {} of {need} sample bytes", payload.len())));
    }
    Ok((header, &payload[..need]))
}

/// Decodes an 8-bit `P5`/`P6` image. Samples are kept as stored.
pub fn decode(bytes: &[u8]) -> Result<RasterImage> {
    let (h, payload) = parse_header(bytes)?;
    if h.maxval > 255 {
        return Err(Error::Unsupported(format!("maxval {} (only 8-bit samples are accepted)", h.maxval)));
    }
    Ok(RasterImage::new(h.width, h.height, h.channels, payload.to_vec())?)
}

pub fn encode(img: &RasterImage) -> Vec<u8> {
    let magic = if img.channels() == 1 { "P5" } else { "P6" };
    let mut out = format!("{magic}\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.data());
    out
}

/// Decodes a `P5` label map of 8- or 16-bit depth.
pub fn decode_labels(bytes: &[u8]) -> Result<LabelMap> {
    let (h, payload) = parse_header(bytes)?;
    if h.channels != 1 {
        return Err(Error::Unsupported("label maps must be single-channel PGM".into()));
    }
    let labels = if h.bytes_per_sample() == 2 {
        payload
            .chunks_exact(2)
            .map(|b| u16::from_be_bytes([b[0], b[1]]) as u32)
            .collect()
    } else {
        payload.iter().map(|&b| b as u32).collect()
    };
    Ok(LabelMap::new(h.width, h.height, labels)?)
}

/// Encodes labels as 16-bit big-endian `P5`; labels must fit in `u16`.
pub fn encode_labels(labels: &LabelMap) -> Result<Vec<u8>> {
    let mut out = format!("P5\n{} {}\n65535\n", labels.width(), labels.height()).into_bytes();
    out.reserve(labels.len() * 2);
    for &l in labels.as_slice() {
        let v = u16::try_from(l).map_err(|_| Error::Unsupported(format!("label {l} exceeds 16 bits")))?;
        out.extend_from_slice(&v.to_be_bytes());
    }
    Ok(out)
}
