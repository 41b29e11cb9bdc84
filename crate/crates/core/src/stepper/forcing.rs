use crate::mesh::{Discretization, GridSpec, Point, PointModel, ScalarField, VecField};
use crate::scalar::Real;

/// Source terms of the three equations sampled at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampled<E, C> {
    /// Right-hand side of the electric field equation (edge dofs).
    pub f1: E,
    /// Right-hand side of the magnetic field equation (cell dofs).
    pub f2: C,
    /// Right-hand side of the polarisation equation (edge dofs).
    pub f3: E,
}

pub trait Forcing<T: Real, D: Discretization<T>>: Sync {
    /// Samples all three sources at dof locations at time `t`.
    fn sample(&self, disc: &D, t: T) -> Sampled<D::Edge, D::Cell>;
}

/// Point-wise sources `f(x, y, t)` on the staggered grid.
pub struct SourceSet<F1, F2, F3> {
    pub f1: F1,
    pub f2: F2,
    pub f3: F3,
}

impl<T, F1, F2, F3> Forcing<T, GridSpec<T>> for SourceSet<F1, F2, F3>
where
    T: Real,
    F1: Fn(T, T, T) -> [T; 2] + Sync,
    F2: Fn(T, T, T) -> T + Sync,
    F3: Fn(T, T, T) -> [T; 2] + Sync,
{
    fn sample(&self, grid: &GridSpec<T>, t: T) -> Sampled<VecField<T>, ScalarField<T>> {
        Sampled {
            f1: VecField::sample(grid, false, |x, y| (self.f1)(x, y, t)),
            f2: ScalarField::sample(grid, |x, y| (self.f2)(x, y, t)),
            f3: VecField::sample(grid, false, |x, y| (self.f3)(x, y, t)),
        }
    }
}

/// Time-only sources for [`PointModel`].
pub struct PointSources<F1, F2, F3> {
    pub f1: F1,
    pub f2: F2,
    pub f3: F3,
}

impl<T, F1, F2, F3> Forcing<T, PointModel> for PointSources<F1, F2, F3>
where
    T: Real,
    F1: Fn(T) -> T + Sync,
    F2: Fn(T) -> T + Sync,
    F3: Fn(T) -> T + Sync,
{
    fn sample(&self, _disc: &PointModel, t: T) -> Sampled<Point<T>, Point<T>> {
        Sampled {
            f1: Point((self.f1)(t)),
            f2: Point((self.f2)(t)),
            f3: Point((self.f3)(t)),
        }
    }
}
