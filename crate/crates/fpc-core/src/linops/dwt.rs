//! Orthogonal 2D Daubechies-3 wavelet transform with periodic boundaries.
//!
//! The 2D transform is separable: one analysis level filters every row, then
//! every column, and the next level recurses on the approximation quadrant.
//! Periodization keeps the transform exactly orthogonal on finite grids, so
//! the inverse is the adjoint and both are cheap to state as one transpose.
//!
//! Coefficient layout after `levels` steps on an H×W grid: level-k detail
//! blocks occupy the outer quadrants of the top-left (H/2^{k-1})×(W/2^{k-1})
//! block, and the final approximation lives in the top-left
//! (H/2^levels)×(W/2^levels) corner.

use alloc::vec;

use super::LinearOperator;
use crate::error::Error;
use crate::vector::Vector;

/// Daubechies-3 analysis low-pass filter (6 taps, orthonormal: the taps sum
/// to √2). Closed form with m = √10, s = √(5 + 2√10):
/// (1+m+s, 5+m+3s, 10−2m+2s, 10−2m−2s, 5+m−3s, 1+m−s) / (16√2).
/// The filter-bank identities are enforced by tests rather than trusted.
pub const DB3_LOWPASS: [f64; 6] = [
    0.33267055295008263,
    0.8068915093110925,
    0.45987750211849154,
    -0.13501102001025458,
    -0.08544127388202666,
    0.03522629188570953,
];

/// Quadrature-mirror high-pass: g[t] = (−1)^t · h[5−t].
pub const DB3_HIGHPASS: [f64; 6] = [
    DB3_LOWPASS[5],
    -DB3_LOWPASS[4],
    DB3_LOWPASS[3],
    -DB3_LOWPASS[2],
    DB3_LOWPASS[1],
    -DB3_LOWPASS[0],
];

const FILTER_LEN: usize = 6;

/// One periodic analysis step: approx[i] = Σ_t h[t]·src[(2i+t) mod n] into
/// the front half, detail into the back half.
fn analyze_1d(src: &[f64], out: &mut [f64]) {
    let n = src.len();
    debug_assert!(n >= 2 && n % 2 == 0);
    let half = n / 2;
    for i in 0..half {
        let mut a = 0.0;
        let mut d = 0.0;
        for t in 0..FILTER_LEN {
            let mut idx = 2 * i + t;
            while idx >= n {
                idx -= n;
            }
            a += DB3_LOWPASS[t] * src[idx];
            d += DB3_HIGHPASS[t] * src[idx];
        }
        out[i] = a;
        out[half + i] = d;
    }
}

/// Exact transpose of `analyze_1d`; for an orthogonal filter bank this is
/// also the inverse.
fn synthesize_1d(src: &[f64], out: &mut [f64]) {
    let n = src.len();
    debug_assert!(n >= 2 && n % 2 == 0);
    let half = n / 2;
    for o in out.iter_mut() {
        *o = 0.0;
    }
    for i in 0..half {
        let a = src[i];
        let d = src[half + i];
        for t in 0..FILTER_LEN {
            let mut idx = 2 * i + t;
            while idx >= n {
                idx -= n;
            }
            out[idx] += DB3_LOWPASS[t] * a + DB3_HIGHPASS[t] * d;
        }
    }
}

/// Multi-level separable 2D transform on flattened H×W grids.
///
/// As a [`LinearOperator`], `apply` is the analysis direction (image →
/// coefficients) and `adjoint` the synthesis; orthogonality makes the
/// adjoint the exact inverse.
#[derive(Debug, Clone)]
pub struct Dwt2d {
    height: usize,
    width: usize,
    levels: usize,
}

impl Dwt2d {
    pub fn new(height: usize, width: usize, levels: usize) -> Result<Self, Error> {
        if levels == 0 {
            return Err(Error::InvalidParameter {
                context: "Dwt2d::new",
                message: alloc::string::String::from("levels must be at least 1"),
            });
        }
        let div = 1usize << levels;
        for (name, dim) in [("height", height), ("width", width)] {
            if dim == 0 || dim % div != 0 {
                return Err(Error::InvalidParameter {
                    context: "Dwt2d::new",
                    message: alloc::format!(
                        "{name} {dim} is not divisible by 2^levels = {div}"
                    ),
                });
            }
        }
        Ok(Dwt2d {
            height,
            width,
            levels,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }
    pub fn width(&self) -> usize {
        self.width
    }
    pub fn levels(&self) -> usize {
        self.levels
    }
    pub fn dim(&self) -> usize {
        self.height * self.width
    }

    /// Analysis: image-domain vector → wavelet coefficients, same length.
    pub fn forward(&self, v: &Vector) -> Vector {
        assert_eq!(v.len(), self.dim(), "Dwt2d::forward: dimension mismatch");
        let mut data = v.as_slice().to_vec();
        let mut buf_in = vec![0.0; self.height.max(self.width)];
        let mut buf_out = vec![0.0; self.height.max(self.width)];
        let (mut ch, mut cw) = (self.height, self.width);
        for _ in 0..self.levels {
            for r in 0..ch {
                let base = r * self.width;
                buf_in[..cw].copy_from_slice(&data[base..base + cw]);
                analyze_1d(&buf_in[..cw], &mut buf_out[..cw]);
                data[base..base + cw].copy_from_slice(&buf_out[..cw]);
            }
            for c in 0..cw {
                for r in 0..ch {
                    buf_in[r] = data[r * self.width + c];
                }
                analyze_1d(&buf_in[..ch], &mut buf_out[..ch]);
                for r in 0..ch {
                    data[r * self.width + c] = buf_out[r];
                }
            }
            ch /= 2;
            cw /= 2;
        }
        Vector::new(data)
    }

    /// Synthesis: wavelet coefficients → image-domain vector. Inverts
    /// [`Dwt2d::forward`] exactly up to rounding.
    pub fn inverse(&self, coeffs: &Vector) -> Vector {
        assert_eq!(
            coeffs.len(),
            self.dim(),
            "Dwt2d::inverse: dimension mismatch"
        );
        let mut data = coeffs.as_slice().to_vec();
        let mut buf_in = vec![0.0; self.height.max(self.width)];
        let mut buf_out = vec![0.0; self.height.max(self.width)];
        // undo levels coarsest-first, columns before rows (transpose order)
        for k in (0..self.levels).rev() {
            let ch = self.height >> k;
            let cw = self.width >> k;
            for c in 0..cw {
                for r in 0..ch {
                    buf_in[r] = data[r * self.width + c];
                }
                synthesize_1d(&buf_in[..ch], &mut buf_out[..ch]);
                for r in 0..ch {
                    data[r * self.width + c] = buf_out[r];
                }
            }
            for r in 0..ch {
                let base = r * self.width;
                buf_in[..cw].copy_from_slice(&data[base..base + cw]);
                synthesize_1d(&buf_in[..cw], &mut buf_out[..cw]);
                data[base..base + cw].copy_from_slice(&buf_out[..cw]);
            }
        }
        Vector::new(data)
    }

    /// The synthesis direction packaged as its own operator (apply = inverse
    /// transform), for building compositions like blur ∘ synthesis.
    pub fn synthesis(&self) -> DwtSynthesis {
        DwtSynthesis(self.clone())
    }
}

impl LinearOperator for Dwt2d {
    fn in_dim(&self) -> usize {
        self.dim()
    }
    fn out_dim(&self) -> usize {
        self.dim()
    }
    fn apply(&self, x: &Vector) -> Vector {
        self.forward(x)
    }
    fn adjoint(&self, y: &Vector) -> Vector {
        self.inverse(y)
    }
}

/// Wavelet synthesis (inverse transform) as a linear operator; its adjoint
/// is the forward transform.
#[derive(Debug, Clone)]
pub struct DwtSynthesis(pub Dwt2d);

impl LinearOperator for DwtSynthesis {
    fn in_dim(&self) -> usize {
        self.0.dim()
    }
    fn out_dim(&self) -> usize {
        self.0.dim()
    }
    fn apply(&self, x: &Vector) -> Vector {
        self.0.inverse(x)
    }
    fn adjoint(&self, y: &Vector) -> Vector {
        self.0.forward(y)
    }
}
