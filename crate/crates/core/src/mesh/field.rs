use super::{FieldOps, GridSpec};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Edge field on the staggered grid.
///
/// `ex` lives at `(x_{i+1/2}, y_j)` with shape `nx x (ny+1)`, `ey` at
/// `(x_i, y_{j+1/2})` with shape `(nx+1) x ny`; both stored row-major in `i`.
/// A field flagged `pec` keeps `ex` on rows `j = 0, ny` and `ey` on columns
/// `i = 0, nx` at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct VecField<T> {
    nx: usize,
    ny: usize,
    ex: Vec<T>,
    ey: Vec<T>,
    pec: bool,
}

impl<T: Real> VecField<T> {
    pub fn zeros(grid: &GridSpec<T>, pec: bool) -> Self {
        let (nx, ny) = (grid.nx(), grid.ny());
        Self {
            nx,
            ny,
            ex: vec![T::zero(); nx * (ny + 1)],
            ey: vec![T::zero(); (nx + 1) * ny],
            pec,
        }
    }

    /// Samples `f(x, y) = [f1, f2]` with `f1` at `ex` dofs and `f2` at `ey`
    /// dofs. Constrained dofs are zeroed when `pec` is set.
    pub fn sample(grid: &GridSpec<T>, pec: bool, f: impl Fn(T, T) -> [T; 2]) -> Self {
        let mut out = Self::zeros(grid, pec);
        let (nx, ny) = (grid.nx(), grid.ny());
        for i in 0..nx {
            for j in 0..=ny {
                let (x, y) = grid.ex_point(i, j);
                out.ex[i * (ny + 1) + j] = f(x, y)[0];
            }
        }
        for i in 0..=nx {
            for j in 0..ny {
                let (x, y) = grid.ey_point(i, j);
                out.ey[i * ny + j] = f(x, y)[1];
            }
        }
        out.enforce_pec();
        out
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn is_pec(&self) -> bool {
        self.pec
    }

    pub fn ex(&self, i: usize, j: usize) -> T {
        self.ex[i * (self.ny + 1) + j]
    }

    pub fn ey(&self, i: usize, j: usize) -> T {
        self.ey[i * self.ny + j]
    }

    pub fn set_ex(&mut self, i: usize, j: usize, v: T) {
        self.ex[i * (self.ny + 1) + j] = v;
    }

    pub fn set_ey(&mut self, i: usize, j: usize, v: T) {
        self.ey[i * self.ny + j] = v;
    }

    pub fn ex_data(&self) -> &[T] {
        &self.ex
    }

    pub fn ey_data(&self) -> &[T] {
        &self.ey
    }

    /// Returns the same values with the constraint flag replaced. Turning the
    /// flag on zeroes the boundary dofs.
    pub fn with_pec(mut self, pec: bool) -> Self {
        self.set_pec(pec);
        self
    }

    pub fn set_pec(&mut self, pec: bool) {
        self.pec = pec;
        self.enforce_pec();
    }

    /// True when every tangential boundary dof is exactly zero.
    pub fn satisfies_pec(&self) -> bool {
        let (nx, ny) = (self.nx, self.ny);
        (0..nx).all(|i| self.ex(i, 0) == T::zero() && self.ex(i, ny) == T::zero())
            && (0..ny).all(|j| self.ey(0, j) == T::zero() && self.ey(nx, j) == T::zero())
    }

    pub fn enforce_pec(&mut self) {
        if !self.pec {
            return;
        }
        let (nx, ny) = (self.nx, self.ny);
        for i in 0..nx {
            self.ex[i * (ny + 1)] = T::zero();
            self.ex[i * (ny + 1) + ny] = T::zero();
        }
        for j in 0..ny {
            self.ey[j] = T::zero();
            self.ey[nx * ny + j] = T::zero();
        }
    }

    /// `(i, j, value)` over `ex` then `ey` is available through these.
    pub fn ex_entries(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        let ny = self.ny;
        self.ex
            .iter()
            .enumerate()
            .map(move |(k, &v)| (k / (ny + 1), k % (ny + 1), v))
    }

    pub fn ey_entries(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        let ny = self.ny;
        self.ey
            .iter()
            .enumerate()
            .map(move |(k, &v)| (k / ny, k % ny, v))
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self.nx == other.nx && self.ny == other.ny {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "edge fields {}x{} and {}x{}",
                self.nx, self.ny, other.nx, other.ny
            )))
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            nx: self.nx,
            ny: self.ny,
            ex: self
                .ex
                .iter()
                .zip(&other.ex)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            ey: self
                .ey
                .iter()
                .zip(&other.ey)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            pec: self.pec && other.pec,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = self.clone();
        out.scale_mut(s);
        out
    }

    /// `a * x + self`
    pub fn axpy(&self, a: T, x: &Self) -> Result<Self> {
        self.zip_with(x, |s, xv| s + a * xv)
    }

    /// `(1 - theta) * self + theta * old`
    pub fn combine_theta(&self, old: &Self, theta: T) -> Result<Self> {
        let keep = T::one() - theta;
        self.zip_with(old, |new, old| keep * new + theta * old)
    }
}

impl<T: Real> FieldOps<T> for VecField<T> {
    fn zeros_like(&self) -> Self {
        Self {
            nx: self.nx,
            ny: self.ny,
            ex: vec![T::zero(); self.ex.len()],
            ey: vec![T::zero(); self.ey.len()],
            pec: self.pec,
        }
    }

    fn axpy_mut(&mut self, a: T, x: &Self) {
        assert!(
            self.nx == x.nx && self.ny == x.ny,
            "edge field shape mismatch"
        );
        self.ex
            .iter_mut()
            .zip(&x.ex)
            .for_each(|(s, &v)| *s += a * v);
        self.ey
            .iter_mut()
            .zip(&x.ey)
            .for_each(|(s, &v)| *s += a * v);
        self.pec &= x.pec;
    }

    fn scale_mut(&mut self, a: T) {
        self.ex.iter_mut().for_each(|v| *v *= a);
        self.ey.iter_mut().for_each(|v| *v *= a);
    }

    fn dot(&self, other: &Self) -> T {
        assert!(
            self.nx == other.nx && self.ny == other.ny,
            "edge field shape mismatch"
        );
        let mut acc = T::zero();
        for (&a, &b) in self.ex.iter().zip(&other.ex) {
            acc += a * b;
        }
        for (&a, &b) in self.ey.iter().zip(&other.ey) {
            acc += a * b;
        }
        acc
    }

    fn dof_count(&self) -> usize {
        self.ex.len() + self.ey.len()
    }
}

/// Cell-centred scalar field, shape `nx x ny`, row-major in `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField<T> {
    nx: usize,
    ny: usize,
    h: Vec<T>,
}

impl<T: Real> ScalarField<T> {
    pub fn zeros(grid: &GridSpec<T>) -> Self {
        Self {
            nx: grid.nx(),
            ny: grid.ny(),
            h: vec![T::zero(); grid.nx() * grid.ny()],
        }
    }

    pub fn sample(grid: &GridSpec<T>, f: impl Fn(T, T) -> T) -> Self {
        let mut out = Self::zeros(grid);
        for i in 0..grid.nx() {
            for j in 0..grid.ny() {
                let (x, y) = grid.cell_point(i, j);
                out.h[i * grid.ny() + j] = f(x, y);
            }
        }
        out
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.h[i * self.ny + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.h[i * self.ny + j] = v;
    }

    pub fn data(&self) -> &[T] {
        &self.h
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        let ny = self.ny;
        self.h
            .iter()
            .enumerate()
            .map(move |(k, &v)| (k / ny, k % ny, v))
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self.nx == other.nx && self.ny == other.ny {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "cell fields {}x{} and {}x{}",
                self.nx, self.ny, other.nx, other.ny
            )))
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            nx: self.nx,
            ny: self.ny,
            h: self
                .h
                .iter()
                .zip(&other.h)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = self.clone();
        out.scale_mut(s);
        out
    }

    pub fn axpy(&self, a: T, x: &Self) -> Result<Self> {
        self.zip_with(x, |s, xv| s + a * xv)
    }

    pub fn combine_theta(&self, old: &Self, theta: T) -> Result<Self> {
        let keep = T::one() - theta;
        self.zip_with(old, |new, old| keep * new + theta * old)
    }
}

impl<T: Real> FieldOps<T> for ScalarField<T> {
    fn zeros_like(&self) -> Self {
        Self {
            nx: self.nx,
            ny: self.ny,
            h: vec![T::zero(); self.h.len()],
        }
    }

    fn axpy_mut(&mut self, a: T, x: &Self) {
        assert!(
            self.nx == x.nx && self.ny == x.ny,
            "cell field shape mismatch"
        );
        self.h.iter_mut().zip(&x.h).for_each(|(s, &v)| *s += a * v);
    }

    fn scale_mut(&mut self, a: T) {
        self.h.iter_mut().for_each(|v| *v *= a);
    }

    fn dot(&self, other: &Self) -> T {
        assert!(
            self.nx == other.nx && self.ny == other.ny,
            "cell field shape mismatch"
        );
        let mut acc = T::zero();
        for (&a, &b) in self.h.iter().zip(&other.h) {
            acc += a * b;
        }
        acc
    }

    fn dof_count(&self) -> usize {
        self.h.len()
    }
}
