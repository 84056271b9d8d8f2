//! sRGB (D65) to CIELAB conversion.

use crate::math::{cbrt, powf};

/// D65 reference white in XYZ, scaled so that `Y_n = 100`.
pub const WHITE_D65: [f64; 3] = [95.047, 100.0, 108.883];

const SRGB_TO_XYZ: [[f64; 3]; 3] = [
    [0.412_456_4, 0.357_576_1, 0.180_437_5],
    [0.212_672_9, 0.715_152_2, 0.072_175_0],
    [0.019_333_9, 0.119_192_0, 0.950_304_1],
];

/// Undoes sRGB companding of one 8-bit channel, returning linear light in `[0, 1]`.
pub fn srgb_to_linear(value: u8) -> f64 {
    let c = value as f64 / 255.0;
    if c <= 0.040_45 {
        c / 12.92
    } else {
        powf((c + 0.055) / 1.055, 2.4)
    }
}

/// Linear RGB in `[0, 1]` to XYZ with `Y` in `[0, 100]`.
pub fn linear_rgb_to_xyz(rgb: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (o, row) in out.iter_mut().zip(SRGB_TO_XYZ.iter()) {
        *o = 100.0 * (row[0] * rgb[0] + row[1] * rgb[1] + row[2] * rgb[2]);
    }
    out
}

pub fn xyz_to_lab(xyz: [f64; 3]) -> [f64; 3] {
    const DELTA: f64 = 6.0 / 29.0;
    let f = |t: f64| {
        if t > DELTA * DELTA * DELTA {
            cbrt(t)
        } else {
            t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
        }
    };
    let fx = f(xyz[0] / WHITE_D65[0]);
    let fy = f(xyz[1] / WHITE_D65[1]);
    let fz = f(xyz[2] / WHITE_D65[2]);
    [116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)]
}

/// Converts an 8-bit sRGB triple to `(L, a, b)`.
pub fn srgb_to_lab(rgb: [u8; 3]) -> [f64; 3] {
    let lin = [
        srgb_to_linear(rgb[0]),
        srgb_to_linear(rgb[1]),
        srgb_to_linear(rgb[2]),
    ];
    xyz_to_lab(linear_rgb_to_xyz(lin))
}

/// Per-channel linearization table, `table[v] == srgb_to_linear(v)`.
pub fn linearization_table() -> [f64; 256] {
    let mut table = [0.0; 256];
    for (v, t) in table.iter_mut().enumerate() {
        *t = srgb_to_linear(v as u8);
    }
    table
}
