//! Regular grid geometry: sampling intervals, per-superpixel windows and
//! per-pixel candidate sets.
//!
//! Superpixel `k` sits in grid cell `(k mod n_x, ⌊k / n_x⌋)` and may only
//! claim pixels in the 3×3 block of cells around it. Windows of the last
//! column and row run to the image edge, which is how pixels in a remainder
//! strip (`W mod v_x ≠ 0`) get covered.

use crate::error::{Error, Result};
use crate::math::isqrt;

/// Grid layout of superpixels over a `width × height` image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridGeometry {
    width: usize,
    height: usize,
    interval_x: usize,
    interval_y: usize,
    cols: usize,
    rows: usize,
}

impl GridGeometry {
    /// Geometry from explicit sampling intervals.
    pub fn from_intervals(
        width: usize,
        height: usize,
        interval_x: usize,
        interval_y: usize,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage);
        }
        let too_large = Error::IntervalTooLarge {
            width,
            height,
            interval_x,
            interval_y,
        };
        if interval_x == 0 || interval_y == 0 {
            return Err(too_large);
        }
        let cols = width / interval_x;
        let rows = height / interval_y;
        if cols == 0 || rows == 0 {
            return Err(too_large);
        }
        Ok(Self {
            width,
            height,
            interval_x,
            interval_y,
            cols,
            rows,
        })
    }

    /// Geometry from a requested superpixel count. Both intervals become
    /// `⌊√(W·H / K)⌋`; the actual count is recomputed from them and may
    /// differ from the request.
    pub fn from_count(width: usize, height: usize, requested: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage);
        }
        let pixels = width * height;
        if requested == 0 || requested > pixels {
            return Err(Error::TooManySuperpixels { requested, pixels });
        }
        // ⌊√x⌋ = ⌊√⌊x⌋⌋ for real x ≥ 0
        let interval = isqrt(pixels / requested);
        Self::from_intervals(width, height, interval, interval)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn interval_x(&self) -> usize {
        self.interval_x
    }

    pub fn interval_y(&self) -> usize {
        self.interval_y
    }

    /// Number of grid columns, `n_x`.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of grid rows, `n_y`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Total superpixel count `K = n_x · n_y`.
    pub fn num_superpixels(&self) -> usize {
        self.cols * self.rows
    }

    pub fn num_pixels(&self) -> usize {
        self.width * self.height
    }

    /// Grid cell `(k_x, k_y)` of superpixel `k` (row-major indexing).
    #[inline]
    pub fn cell_of(&self, k: usize) -> (usize, usize) {
        (k % self.cols, k / self.cols)
    }

    /// Pixel window `I_k` from which superpixel `k` may draw pixels.
    pub fn window_of(&self, k: usize) -> Window {
        debug_assert!(k < self.num_superpixels());
        let (kx, ky) = self.cell_of(k);
        let (x_begin, x_end) = span(kx, self.interval_x, self.width);
        let (y_begin, y_end) = span(ky, self.interval_y, self.height);
        Window {
            x_begin,
            x_end,
            y_begin,
            y_end,
        }
    }

    /// Superpixels `K_i` whose windows contain pixel `(x, y)`, in ascending
    /// index order.
    #[inline]
    pub fn candidates_of(&self, x: usize, y: usize) -> Candidates {
        debug_assert!(x < self.width && y < self.height);
        let (kx_begin, kx_end) = neighbor_range(x / self.interval_x, self.cols);
        let (ky_begin, ky_end) = neighbor_range(y / self.interval_y, self.rows);
        let c = Candidates {
            kx_begin: kx_begin as u32,
            kx_end: kx_end as u32,
            ky_begin: ky_begin as u32,
            ky_end: ky_end as u32,
            cols: self.cols as u32,
        };
        #[cfg(debug_assertions)]
        for k in c.iter() {
            debug_assert!(self.window_of(k).contains(x, y));
        }
        c
    }

    /// Index of the pixel at which superpixel `k`'s mean is initialized.
    pub fn center_pixel(&self, k: usize) -> usize {
        let (kx, ky) = self.cell_of(k);
        let x = kx * self.interval_x + self.interval_x / 2;
        let y = ky * self.interval_y + self.interval_y / 2;
        x + self.width * y
    }
}

fn span(cell: usize, interval: usize, extent: usize) -> (usize, usize) {
    let begin = interval * cell.saturating_sub(1);
    let end = (interval * (cell + 2)).min(extent);
    (begin, end)
}

// Cells c-1..=c+1 clipped to the grid. `cell` may equal `count` for pixels in
// the remainder strip; only the last cell reaches them.
fn neighbor_range(cell: usize, count: usize) -> (usize, usize) {
    let begin = cell.saturating_sub(1);
    let end = (cell + 2).min(count);
    (begin, end)
}

/// Half-open rectangle of pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    pub x_begin: usize,
    pub x_end: usize,
    pub y_begin: usize,
    pub y_end: usize,
}

impl Window {
    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        (self.x_begin..self.x_end).contains(&x) && (self.y_begin..self.y_end).contains(&y)
    }

    pub fn width(&self) -> usize {
        self.x_end - self.x_begin
    }

    pub fn height(&self) -> usize {
        self.y_end - self.y_begin
    }

    pub fn area(&self) -> usize {
        self.width() * self.height()
    }

    /// Pixel coordinates in row-major order.
    pub fn pixels(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (self.y_begin..self.y_end).flat_map(move |y| (self.x_begin..self.x_end).map(move |x| (x, y)))
    }
}

/// Candidate superpixels of one pixel: a rectangle of at most 3×3 grid cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Candidates {
    kx_begin: u32,
    kx_end: u32,
    ky_begin: u32,
    ky_end: u32,
    cols: u32,
}

impl Candidates {
    /// Most candidates any pixel can have.
    pub const MAX: usize = 9;

    #[inline]
    pub fn len(&self) -> usize {
        ((self.kx_end - self.kx_begin) * (self.ky_end - self.ky_begin)) as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Superpixel indices in ascending order.
    #[inline]
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let cols = self.cols as usize;
        (self.ky_begin..self.ky_end).flat_map(move |ky| {
            (self.kx_begin..self.kx_end).map(move |kx| ky as usize * cols + kx as usize)
        })
    }

    /// Position of `k` within [`iter`](Self::iter), if it is a candidate.
    #[inline]
    pub fn slot_of(&self, k: usize) -> Option<usize> {
        let cols = self.cols as usize;
        let (kx, ky) = ((k % cols) as u32, (k / cols) as u32);
        if kx < self.kx_begin || kx >= self.kx_end || ky < self.ky_begin || ky >= self.ky_end {
            return None;
        }
        let w = self.kx_end - self.kx_begin;
        Some(((ky - self.ky_begin) * w + (kx - self.kx_begin)) as usize)
    }
}
