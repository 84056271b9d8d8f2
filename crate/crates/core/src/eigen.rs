//! Closed-form eigendecomposition of 2×2 symmetric matrices and the
//! eigenvalue floor applied to covariance blocks.

use crate::math::sqrt;

/// Off-diagonal magnitude below which a block is treated as already diagonal.
const DIAGONAL_TOL: f64 = 1e-12;

/// Symmetric 2×2 matrix `[[xx, xy], [xy, yy]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Sym2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

/// Eigenvalues and orthonormal eigenvectors; `vectors[j]` belongs to `values[j]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigen2 {
    pub values: [f64; 2],
    pub vectors: [[f64; 2]; 2],
}

impl Sym2 {
    pub const fn new(xx: f64, xy: f64, yy: f64) -> Self {
        Self { xx, xy, yy }
    }

    pub const fn diag(xx: f64, yy: f64) -> Self {
        Self { xx, xy: 0.0, yy }
    }

    pub fn trace(&self) -> f64 {
        self.xx + self.yy
    }

    pub fn det(&self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    /// Inverse; the caller guarantees a nonzero determinant.
    pub fn inverse(&self) -> Self {
        let inv_det = 1.0 / self.det();
        Self {
            xx: self.yy * inv_det,
            xy: -self.xy * inv_det,
            yy: self.xx * inv_det,
        }
    }

    /// `vᵀ M v` for `v = (dx, dy)`.
    #[inline]
    pub fn quad(&self, dx: f64, dy: f64) -> f64 {
        dx * dx * self.xx + 2.0 * dx * dy * self.xy + dy * dy * self.yy
    }

    /// Eigendecomposition from the trace/determinant quadratic. Values are
    /// returned in descending order except for the diagonal shortcut, which
    /// keeps them in axis order with `Q = I`.
    pub fn eigen(&self) -> Eigen2 {
        if self.xy.abs() < DIAGONAL_TOL {
            return Eigen2 {
                values: [self.xx, self.yy],
                vectors: [[1.0, 0.0], [0.0, 1.0]],
            };
        }
        let half_trace = 0.5 * self.trace();
        let half_gap = 0.5 * (self.xx - self.yy);
        let disc = sqrt(half_gap * half_gap + self.xy * self.xy);
        let hi = half_trace + disc;
        let lo = half_trace - disc;

        // (M - hi·I) has rows (xx - hi, xy) and (xy, yy - hi); the eigenvector
        // is orthogonal to either. Take the better conditioned one.
        let a = [hi - self.yy, self.xy];
        let b = [self.xy, hi - self.xx];
        let na = a[0] * a[0] + a[1] * a[1];
        let nb = b[0] * b[0] + b[1] * b[1];
        let (v, n) = if na >= nb { (a, na) } else { (b, nb) };
        let n = sqrt(n);
        let v1 = [v[0] / n, v[1] / n];
        Eigen2 {
            values: [hi, lo],
            vectors: [v1, [-v1[1], v1[0]]],
        }
    }

    /// `Q Λ Qᵀ`.
    pub fn from_eigen(e: &Eigen2) -> Self {
        let [l0, l1] = e.values;
        let [u, v] = e.vectors;
        Self {
            xx: l0 * u[0] * u[0] + l1 * v[0] * v[0],
            xy: l0 * u[0] * u[1] + l1 * v[0] * v[1],
            yy: l0 * u[1] * u[1] + l1 * v[1] * v[1],
        }
    }

    /// Raises every eigenvalue below `eps` to `eps` and reconstructs. Blocks
    /// whose eigenvalues already satisfy the floor are returned unchanged.
    pub fn regularize(&self, eps: f64) -> Self {
        let mut e = self.eigen();
        if e.values.iter().all(|&l| l >= eps) {
            return *self;
        }
        for l in &mut e.values {
            *l = clamp_eigenvalue(*l, eps);
        }
        Self::from_eigen(&e)
    }
}

#[inline]
fn clamp_eigenvalue(value: f64, eps: f64) -> f64 {
    if value >= eps {
        value
    } else {
        eps
    }
}

/// Scalar variance floor; a 1×1 block is its own eigenvalue.
#[inline]
pub fn regularize_scalar(variance: f64, eps: f64) -> f64 {
    clamp_eigenvalue(variance, eps)
}
