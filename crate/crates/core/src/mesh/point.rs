use super::{Discretization, FieldOps};
use crate::error::Result;
use crate::scalar::Real;

/// A single dof. Used as both the edge and the cell field of [`PointModel`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point<T>(pub T);

impl<T: Real> FieldOps<T> for Point<T> {
    fn zeros_like(&self) -> Self {
        Point(T::zero())
    }

    fn axpy_mut(&mut self, a: T, x: &Self) {
        self.0 += a * x.0;
    }

    fn scale_mut(&mut self, a: T) {
        self.0 *= a;
    }

    fn dot(&self, other: &Self) -> T {
        self.0 * other.0
    }

    fn dof_count(&self) -> usize {
        1
    }
}

/// Spatially uniform reduction: one dof per field and identically zero curls.
/// The integrator then reduces to a scalar recurrence in `(E, H, P)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PointModel;

impl<T: Real> Discretization<T> for PointModel {
    type Edge = Point<T>;
    type Cell = Point<T>;

    fn zero_edge(&self, _constrained: bool) -> Point<T> {
        Point(T::zero())
    }

    fn zero_cell(&self) -> Point<T> {
        Point(T::zero())
    }

    fn apply_curl_h(&self, _h: &Point<T>) -> Point<T> {
        Point(T::zero())
    }

    fn apply_curl_e(&self, _e: &Point<T>) -> Point<T> {
        Point(T::zero())
    }

    fn edge_inner(&self, a: &Point<T>, b: &Point<T>) -> T {
        a.0 * b.0
    }

    fn cell_inner(&self, a: &Point<T>, b: &Point<T>) -> T {
        a.0 * b.0
    }

    fn constrain(&self, _e: &mut Point<T>) {}

    fn check_edge(&self, _e: &Point<T>, _constrained: bool) -> Result<()> {
        Ok(())
    }

    fn check_cell(&self, _h: &Point<T>) -> Result<()> {
        Ok(())
    }

    fn default_cg_maxit(&self) -> usize {
        4
    }
}
