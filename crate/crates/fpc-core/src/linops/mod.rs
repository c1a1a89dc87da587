//! Linear operators: apply/adjoint pairs with declared dimensions.
//!
//! Every shipped operator satisfies the adjoint identity
//! ⟨A x, y⟩ = ⟨x, A* y⟩; [`adjoint_residual`] measures the relative defect on
//! a concrete pair and is what the test suites drive with random probes.

mod conv;
mod dwt;
mod norm;

pub use conv::{conv2d_periodic, Conv2dPeriodic, ConvKernel};
pub use dwt::{Dwt2d, DwtSynthesis, DB3_HIGHPASS, DB3_LOWPASS};
pub use norm::{operator_norm_sq, power_iteration, PowerIteration};

use alloc::vec::Vec;

use crate::error::Error;
use crate::vector::Vector;

pub trait LinearOperator {
    fn in_dim(&self) -> usize;
    fn out_dim(&self) -> usize;
    /// y = A x. Panics if `x.len() != in_dim()`.
    fn apply(&self, x: &Vector) -> Vector;
    /// x = A* y. Panics if `y.len() != out_dim()`.
    fn adjoint(&self, y: &Vector) -> Vector;
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn in_dim(&self) -> usize {
        (**self).in_dim()
    }
    fn out_dim(&self) -> usize {
        (**self).out_dim()
    }
    fn apply(&self, x: &Vector) -> Vector {
        (**self).apply(x)
    }
    fn adjoint(&self, y: &Vector) -> Vector {
        (**self).adjoint(y)
    }
}

/// The identity on ℝ^dim.
#[derive(Debug, Clone)]
pub struct Identity {
    dim: usize,
}

impl Identity {
    pub fn new(dim: usize) -> Self {
        Identity { dim }
    }
}

impl LinearOperator for Identity {
    fn in_dim(&self) -> usize {
        self.dim
    }
    fn out_dim(&self) -> usize {
        self.dim
    }
    fn apply(&self, x: &Vector) -> Vector {
        assert_eq!(x.len(), self.dim, "Identity::apply: dimension mismatch");
        x.clone()
    }
    fn adjoint(&self, y: &Vector) -> Vector {
        assert_eq!(y.len(), self.dim, "Identity::adjoint: dimension mismatch");
        y.clone()
    }
}

/// Diagonal scaling by a fixed entry vector.
#[derive(Debug, Clone)]
pub struct Diagonal {
    entries: Vec<f64>,
}

impl Diagonal {
    pub fn new(entries: Vec<f64>) -> Self {
        Diagonal { entries }
    }
}

impl LinearOperator for Diagonal {
    fn in_dim(&self) -> usize {
        self.entries.len()
    }
    fn out_dim(&self) -> usize {
        self.entries.len()
    }
    fn apply(&self, x: &Vector) -> Vector {
        assert_eq!(x.len(), self.entries.len(), "Diagonal::apply");
        Vector::new(
            x.iter()
                .zip(self.entries.iter())
                .map(|(a, d)| a * d)
                .collect(),
        )
    }
    fn adjoint(&self, y: &Vector) -> Vector {
        // real diagonal matrices are self-adjoint
        self.apply(y)
    }
}

/// Dense row-major matrix, mostly for tests and small instances.
#[derive(Debug, Clone)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, Error> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "DenseMatrix::new",
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn random(rows: usize, cols: usize, rng: &mut crate::rng::DetRng) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: (0..rows * cols).map(|_| rng.next_symmetric()).collect(),
        }
    }
}

impl LinearOperator for DenseMatrix {
    fn in_dim(&self) -> usize {
        self.cols
    }
    fn out_dim(&self) -> usize {
        self.rows
    }
    fn apply(&self, x: &Vector) -> Vector {
        assert_eq!(x.len(), self.cols, "DenseMatrix::apply");
        let mut out = Vector::zeros(self.rows);
        for r in 0..self.rows {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            out[r] = row.iter().zip(x.iter()).map(|(m, v)| m * v).sum();
        }
        out
    }
    fn adjoint(&self, y: &Vector) -> Vector {
        assert_eq!(y.len(), self.rows, "DenseMatrix::adjoint");
        let mut out = Vector::zeros(self.cols);
        for r in 0..self.rows {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            let yr = y[r];
            for (o, m) in out.as_mut_slice().iter_mut().zip(row.iter()) {
                *o += m * yr;
            }
        }
        out
    }
}

/// outer ∘ inner, with adjoint inner* ∘ outer*.
#[derive(Debug, Clone)]
pub struct Composed<O, I> {
    outer: O,
    inner: I,
}

impl<O: LinearOperator, I: LinearOperator> Composed<O, I> {
    pub fn new(outer: O, inner: I) -> Result<Self, Error> {
        if inner.out_dim() != outer.in_dim() {
            return Err(Error::DimensionMismatch {
                context: "compose",
                expected: outer.in_dim(),
                found: inner.out_dim(),
            });
        }
        Ok(Composed { outer, inner })
    }
}

impl<O: LinearOperator, I: LinearOperator> LinearOperator for Composed<O, I> {
    fn in_dim(&self) -> usize {
        self.inner.in_dim()
    }
    fn out_dim(&self) -> usize {
        self.outer.out_dim()
    }
    fn apply(&self, x: &Vector) -> Vector {
        self.outer.apply(&self.inner.apply(x))
    }
    fn adjoint(&self, y: &Vector) -> Vector {
        self.inner.adjoint(&self.outer.adjoint(y))
    }
}

/// Compose two operators; fails if the inner output dimension does not match
/// the outer input dimension.
pub fn compose<O: LinearOperator, I: LinearOperator>(
    outer: O,
    inner: I,
) -> Result<Composed<O, I>, Error> {
    Composed::new(outer, inner)
}

/// Relative adjoint defect |⟨Ax, y⟩ − ⟨x, A*y⟩| / (‖x‖ ‖y‖) for one probe pair.
pub fn adjoint_residual<A: LinearOperator>(op: &A, x: &Vector, y: &Vector) -> f64 {
    let lhs = op.apply(x).dot(y);
    let rhs = x.dot(&op.adjoint(y));
    let scale = x.norm() * y.norm();
    if scale == 0.0 {
        return 0.0;
    }
    crate::math::abs(lhs - rhs) / scale
}
