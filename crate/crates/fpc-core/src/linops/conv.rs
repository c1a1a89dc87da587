//! 2D convolution with periodic (wrap-around) boundary handling.
//!
//! Periodic boundaries make the adjoint exact: the adjoint of convolution
//! with kernel k is convolution with the point-reflected kernel.

use alloc::vec;
use alloc::vec::Vec;

use super::LinearOperator;
use crate::error::Error;
use crate::math;
use crate::vector::{Image, Vector};

/// A centered square convolution kernel with odd side length.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvKernel {
    taps: Vec<f64>,
    side: usize,
}

impl ConvKernel {
    pub fn new(taps: Vec<f64>, side: usize) -> Result<Self, Error> {
        if side % 2 == 0 || side == 0 {
            return Err(Error::InvalidParameter {
                context: "ConvKernel::new",
                message: alloc::format!("kernel side must be odd and positive, got {side}"),
            });
        }
        if taps.len() != side * side {
            return Err(Error::DimensionMismatch {
                context: "ConvKernel::new",
                expected: side * side,
                found: taps.len(),
            });
        }
        Ok(ConvKernel { taps, side })
    }

    /// Dirac kernel: convolution with it is the identity.
    pub fn delta(side: usize) -> Result<Self, Error> {
        let mut taps = vec![0.0; side * side];
        taps[(side / 2) * side + side / 2] = 1.0;
        ConvKernel::new(taps, side)
    }

    /// Truncated Gaussian normalized to tap sum 1.
    pub fn gaussian(side: usize, sigma: f64) -> Result<Self, Error> {
        if sigma <= 0.0 {
            return Err(Error::InvalidParameter {
                context: "ConvKernel::gaussian",
                message: alloc::format!("sigma must be positive, got {sigma}"),
            });
        }
        let c = (side / 2) as isize;
        let mut taps = Vec::with_capacity(side * side);
        for a in 0..side as isize {
            for b in 0..side as isize {
                let d2 = ((a - c) * (a - c) + (b - c) * (b - c)) as f64;
                taps.push(math::exp(-d2 / (2.0 * sigma * sigma)));
            }
        }
        let sum: f64 = taps.iter().sum();
        for t in taps.iter_mut() {
            *t /= sum;
        }
        ConvKernel::new(taps, side)
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn tap_sum(&self) -> f64 {
        self.taps.iter().sum()
    }

    /// Point reflection about the center; convolving with it is the adjoint
    /// of convolving with `self`.
    pub fn flipped(&self) -> ConvKernel {
        let n = self.side * self.side;
        ConvKernel {
            taps: (0..n).map(|i| self.taps[n - 1 - i]).collect(),
            side: self.side,
        }
    }
}

fn check_fits(kernel: &ConvKernel, height: usize, width: usize) -> Result<(), Error> {
    if kernel.side > height || kernel.side > width {
        return Err(Error::DimensionMismatch {
            context: "conv2d_periodic: kernel larger than image",
            expected: height.min(width),
            found: kernel.side,
        });
    }
    Ok(())
}

/// out[i][j] = Σ_{a,b} taps[a][b] · in[(i − a + c) mod h][(j − b + c) mod w]
fn convolve(pixels: &[f64], height: usize, width: usize, kernel: &ConvKernel) -> Vec<f64> {
    let side = kernel.side;
    let c = side / 2;
    let mut out = vec![0.0; height * width];
    // Wrapped row index per tap, hoisted out of the column loop. The shifted
    // index i + c − a lies in [−c, h + c), so one add/sub of the period wraps.
    let mut rows = vec![0usize; side];
    for i in 0..height {
        for (a, slot) in rows.iter_mut().enumerate() {
            let mut r = i as isize + c as isize - a as isize;
            if r < 0 {
                r += height as isize;
            } else if r >= height as isize {
                r -= height as isize;
            }
            *slot = r as usize;
        }
        for j in 0..width {
            let mut acc = 0.0;
            for a in 0..side {
                let row_base = rows[a] * width;
                let tap_base = a * side;
                for b in 0..side {
                    let mut cidx = j as isize + c as isize - b as isize;
                    if cidx < 0 {
                        cidx += width as isize;
                    } else if cidx >= width as isize {
                        cidx -= width as isize;
                    }
                    acc += kernel.taps[tap_base + b] * pixels[row_base + cidx as usize];
                }
            }
            out[i * width + j] = acc;
        }
    }
    out
}

/// Convolve an image with a centered kernel under periodic boundaries.
pub fn conv2d_periodic(image: &Image, kernel: &ConvKernel) -> Result<Image, Error> {
    check_fits(kernel, image.height(), image.width())?;
    let out = convolve(image.pixels(), image.height(), image.width(), kernel);
    Image::from_pixels(out, image.height(), image.width())
}

/// Periodic 2D convolution as a linear operator on flattened images.
#[derive(Debug, Clone)]
pub struct Conv2dPeriodic {
    kernel: ConvKernel,
    flipped: ConvKernel,
    height: usize,
    width: usize,
}

impl Conv2dPeriodic {
    pub fn new(kernel: ConvKernel, height: usize, width: usize) -> Result<Self, Error> {
        check_fits(&kernel, height, width)?;
        let flipped = kernel.flipped();
        Ok(Conv2dPeriodic {
            kernel,
            flipped,
            height,
            width,
        })
    }

    pub fn kernel(&self) -> &ConvKernel {
        &self.kernel
    }
}

impl LinearOperator for Conv2dPeriodic {
    fn in_dim(&self) -> usize {
        self.height * self.width
    }
    fn out_dim(&self) -> usize {
        self.height * self.width
    }
    fn apply(&self, x: &Vector) -> Vector {
        assert_eq!(x.len(), self.in_dim(), "Conv2dPeriodic::apply");
        Vector::new(convolve(x.as_slice(), self.height, self.width, &self.kernel))
    }
    fn adjoint(&self, y: &Vector) -> Vector {
        assert_eq!(y.len(), self.out_dim(), "Conv2dPeriodic::adjoint");
        Vector::new(convolve(
            y.as_slice(),
            self.height,
            self.width,
            &self.flipped,
        ))
    }
}
