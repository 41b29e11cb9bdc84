//! Spatial discretisations of the transverse-electric curl pair.
//!
//! The time integrator only needs a handful of things from space: two field
//! types (edge-like for `E` and `P`, cell-like for `H`), the two curls, the
//! discrete `L^2` pairings, and a way to clamp constrained dofs. The
//! [`Discretization`] trait captures exactly that. [`GridSpec`] is the real
//! staggered grid; [`PointModel`] is the spatially uniform reduction used to
//! check the time stepping against hand-solved scalar systems.

mod field;
mod grid;
mod point;

pub use field::{ScalarField, VecField};
pub use grid::{curl_e, curl_h, inner_e, inner_h, norm_e, norm_h, GridSpec};
pub use point::{Point, PointModel};

use std::fmt::Debug;

use crate::error::Result;
use crate::scalar::Real;

/// Vector-space operations the integrator needs on a field.
///
/// Operands are always built on the same discretisation, so these panic on a
/// shape mismatch instead of returning an error; the public shape-checked
/// variants live on the concrete field types.
pub trait FieldOps<T: Real>: Clone + Debug + Send + Sync {
    fn zeros_like(&self) -> Self;

    /// `self += a * x`
    fn axpy_mut(&mut self, a: T, x: &Self);

    fn scale_mut(&mut self, a: T);

    /// Unweighted Euclidean dot product over all stored dofs.
    fn dot(&self, other: &Self) -> T;

    fn dof_count(&self) -> usize;

    /// `self = a * self + b * x`
    fn lincomb_mut(&mut self, a: T, b: T, x: &Self) {
        self.scale_mut(a);
        self.axpy_mut(b, x);
    }
}

pub trait Discretization<T: Real>: Clone + Debug + Send + Sync {
    /// Edge dofs carrying `E` and `P`.
    type Edge: FieldOps<T>;
    /// Cell dofs carrying `H`.
    type Cell: FieldOps<T>;

    fn zero_edge(&self, constrained: bool) -> Self::Edge;
    fn zero_cell(&self) -> Self::Cell;

    /// Discrete `(dH/dy, -dH/dx)`; output satisfies the boundary constraint.
    fn apply_curl_h(&self, h: &Self::Cell) -> Self::Edge;
    /// Discrete `dE2/dx - dE1/dy`.
    fn apply_curl_e(&self, e: &Self::Edge) -> Self::Cell;

    fn edge_inner(&self, a: &Self::Edge, b: &Self::Edge) -> T;
    fn cell_inner(&self, a: &Self::Cell, b: &Self::Cell) -> T;

    /// Zeroes the boundary-constrained dofs of an edge field in place.
    fn constrain(&self, e: &mut Self::Edge);

    fn check_edge(&self, e: &Self::Edge, constrained: bool) -> Result<()>;
    fn check_cell(&self, h: &Self::Cell) -> Result<()>;

    fn default_cg_maxit(&self) -> usize;

    fn edge_norm(&self, a: &Self::Edge) -> T {
        self.edge_inner(a, a).sqrt()
    }

    fn cell_norm(&self, a: &Self::Cell) -> T {
        self.cell_inner(a, a).sqrt()
    }
}
