use num_complex::Complex64 as C64;

use super::matrix::ComplexMatrix;

/// A linear map on `C^dim`, applied without exposing its storage.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;

    /// Writes `A x` into `y`, overwriting it.
    fn apply_into(&self, x: &[C64], y: &mut [C64]);

    fn apply(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); self.dim()];
        self.apply_into(x, &mut y);
        y
    }
}

impl LinearOperator for ComplexMatrix {
    fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows()
    }

    fn apply_into(&self, x: &[C64], y: &mut [C64]) {
        self.mat_vec_into(x, y);
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply_into(&self, x: &[C64], y: &mut [C64]) {
        (**self).apply_into(x, y)
    }
}

/// Operator defined only by its action on vectors.
pub struct MatrixFreeOperator<F> {
    dim: usize,
    apply: F,
}

impl<F> MatrixFreeOperator<F>
where
    F: Fn(&[C64], &mut [C64]) + Sync,
{
    pub fn new(dim: usize, apply: F) -> Self {
        MatrixFreeOperator { dim, apply }
    }
}

impl<F> LinearOperator for MatrixFreeOperator<F>
where
    F: Fn(&[C64], &mut [C64]) + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply_into(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        (self.apply)(x, y)
    }
}

/// Diagonal operator, mostly useful for tests and preconditioning checks.
pub struct DiagonalOperator(pub Vec<f64>);

impl LinearOperator for DiagonalOperator {
    fn dim(&self) -> usize {
        self.0.len()
    }

    fn apply_into(&self, x: &[C64], y: &mut [C64]) {
        for ((yi, xi), d) in y.iter_mut().zip(x).zip(&self.0) {
            *yi = xi * d;
        }
    }
}
