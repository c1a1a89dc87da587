//! Dense real vectors and row-major greyscale images.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::Error;
use crate::math;

/// A dense vector in ℝ^d.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    data: Vec<f64>,
}

impl Vector {
    pub fn new(data: Vec<f64>) -> Self {
        Vector { data }
    }

    pub fn zeros(len: usize) -> Self {
        Vector {
            data: vec![0.0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn iter(&self) -> core::slice::Iter<'_, f64> {
        self.data.iter()
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        assert_eq!(self.len(), other.len(), "dot: length mismatch");
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|a| a * a).sum()
    }

    pub fn norm(&self) -> f64 {
        math::sqrt(self.norm_sq())
    }

    /// Euclidean distance ‖self − other‖₂.
    pub fn dist(&self, other: &Vector) -> f64 {
        assert_eq!(self.len(), other.len(), "dist: length mismatch");
        let sum: f64 = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        math::sqrt(sum)
    }

    pub fn scaled(&self, c: f64) -> Vector {
        Vector {
            data: self.data.iter().map(|a| c * a).collect(),
        }
    }

    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.len(), other.len(), "add: length mismatch");
        Vector {
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        assert_eq!(self.len(), other.len(), "sub: length mismatch");
        Vector {
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// self += c · other
    pub fn add_scaled(&mut self, c: f64, other: &Vector) {
        assert_eq!(self.len(), other.len(), "add_scaled: length mismatch");
        for (a, b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += c * b;
        }
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|a| a.is_finite())
    }

    pub fn first_non_finite(&self) -> Option<usize> {
        self.data.iter().position(|a| !a.is_finite())
    }

    /// Seeded vector with entries uniform in [-1, 1).
    pub fn random_symmetric(len: usize, rng: &mut crate::rng::DetRng) -> Vector {
        Vector {
            data: (0..len).map(|_| rng.next_symmetric()).collect(),
        }
    }
}

impl From<Vec<f64>> for Vector {
    fn from(data: Vec<f64>) -> Self {
        Vector { data }
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.data[i]
    }
}

impl IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.data[i]
    }
}

/// A row-major greyscale image; pixel values are plain reals (nominally in
/// [0, 1] but intermediate stages may leave that range).
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    pixels: Vec<f64>,
    height: usize,
    width: usize,
}

impl Image {
    pub fn zeros(height: usize, width: usize) -> Self {
        Image {
            pixels: vec![0.0; height * width],
            height,
            width,
        }
    }

    pub fn from_pixels(pixels: Vec<f64>, height: usize, width: usize) -> Result<Self, Error> {
        if pixels.len() != height * width {
            return Err(Error::DimensionMismatch {
                context: "Image::from_pixels",
                expected: height * width,
                found: pixels.len(),
            });
        }
        Ok(Image {
            pixels,
            height,
            width,
        })
    }

    pub fn from_vector(v: &Vector, height: usize, width: usize) -> Result<Self, Error> {
        Self::from_pixels(v.as_slice().to_vec(), height, width)
    }

    pub fn to_vector(&self) -> Vector {
        Vector::new(self.pixels.clone())
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [f64] {
        &mut self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.pixels[row * self.width + col] = value;
    }
}
