use super::{Discretization, ScalarField, VecField};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform rectangle `(0, lx) x (0, ly)` split into `nx x ny` cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    nx: usize,
    ny: usize,
    lx: T,
    ly: T,
}

impl<T: Real> GridSpec<T> {
    pub fn new(nx: usize, ny: usize, lx: T, ly: T) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 cells per axis, got {nx}x{ny}"
            )));
        }
        if !(lx > T::zero() && ly > T::zero() && lx.is_finite() && ly.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "edge lengths must be positive, got {lx} x {ly}"
            )));
        }
        Ok(Self { nx, ny, lx, ly })
    }

    /// `nx x ny` cells on the unit square.
    pub fn unit(nx: usize, ny: usize) -> Result<Self> {
        Self::new(nx, ny, T::one(), T::one())
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn lx(&self) -> T {
        self.lx
    }

    pub fn ly(&self) -> T {
        self.ly
    }

    pub fn dx(&self) -> T {
        self.lx / T::from_index(self.nx)
    }

    pub fn dy(&self) -> T {
        self.ly / T::from_index(self.ny)
    }

    pub fn cell_area(&self) -> T {
        self.dx() * self.dy()
    }

    fn node_x(&self, i: usize) -> T {
        self.lx * T::from_index(i) / T::from_index(self.nx)
    }

    fn node_y(&self, j: usize) -> T {
        self.ly * T::from_index(j) / T::from_index(self.ny)
    }

    fn mid_x(&self, i: usize) -> T {
        self.lx * T::from_index(2 * i + 1) / T::from_index(2 * self.nx)
    }

    fn mid_y(&self, j: usize) -> T {
        self.ly * T::from_index(2 * j + 1) / T::from_index(2 * self.ny)
    }

    /// Location of `ex[i][j]`: `(x_{i+1/2}, y_j)`.
    pub fn ex_point(&self, i: usize, j: usize) -> (T, T) {
        (self.mid_x(i), self.node_y(j))
    }

    /// Location of `ey[i][j]`: `(x_i, y_{j+1/2})`.
    pub fn ey_point(&self, i: usize, j: usize) -> (T, T) {
        (self.node_x(i), self.mid_y(j))
    }

    /// Location of `h[i][j]`: `(x_{i+1/2}, y_{j+1/2})`.
    pub fn cell_point(&self, i: usize, j: usize) -> (T, T) {
        (self.mid_x(i), self.mid_y(j))
    }

    fn check_vec(&self, e: &VecField<T>) -> Result<()> {
        if e.nx() == self.nx && e.ny() == self.ny {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "edge field {}x{} on grid {}x{}",
                e.nx(),
                e.ny(),
                self.nx,
                self.ny
            )))
        }
    }

    fn check_scalar(&self, h: &ScalarField<T>) -> Result<()> {
        if h.nx() == self.nx && h.ny() == self.ny {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "cell field {}x{} on grid {}x{}",
                h.nx(),
                h.ny(),
                self.nx,
                self.ny
            )))
        }
    }
}

/// Discrete `curl H = (dH/dy, -dH/dx)` onto edges; boundary rows and columns
/// are left at zero so the result is always PEC-compliant.
pub fn curl_h<T: Real>(h: &ScalarField<T>, grid: &GridSpec<T>) -> Result<VecField<T>> {
    grid.check_scalar(h)?;
    let (nx, ny) = (grid.nx, grid.ny);
    let inv_dx = T::one() / grid.dx();
    let inv_dy = T::one() / grid.dy();
    let mut out = VecField::zeros(grid, true);
    for i in 0..nx {
        for j in 1..ny {
            out.set_ex(i, j, (h.get(i, j) - h.get(i, j - 1)) * inv_dy);
        }
    }
    for i in 1..nx {
        for j in 0..ny {
            out.set_ey(i, j, -(h.get(i, j) - h.get(i - 1, j)) * inv_dx);
        }
    }
    Ok(out)
}

/// Discrete `curl E = dE2/dx - dE1/dy` at cell centres.
pub fn curl_e<T: Real>(e: &VecField<T>, grid: &GridSpec<T>) -> Result<ScalarField<T>> {
    grid.check_vec(e)?;
    let inv_dx = T::one() / grid.dx();
    let inv_dy = T::one() / grid.dy();
    let mut out = ScalarField::zeros(grid);
    for i in 0..grid.nx {
        for j in 0..grid.ny {
            let v = (e.ey(i + 1, j) - e.ey(i, j)) * inv_dx - (e.ex(i, j + 1) - e.ex(i, j)) * inv_dy;
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// `dx dy (sum ex ex' + sum ey ey')`, accumulated in storage order.
pub fn inner_e<T: Real>(u: &VecField<T>, v: &VecField<T>, grid: &GridSpec<T>) -> Result<T> {
    grid.check_vec(u)?;
    grid.check_vec(v)?;
    let mut acc = T::zero();
    for (&a, &b) in u.ex_data().iter().zip(v.ex_data()) {
        acc += a * b;
    }
    let mut acc_y = T::zero();
    for (&a, &b) in u.ey_data().iter().zip(v.ey_data()) {
        acc_y += a * b;
    }
    Ok(grid.cell_area() * (acc + acc_y))
}

/// `dx dy sum h h'`.
pub fn inner_h<T: Real>(p: &ScalarField<T>, q: &ScalarField<T>, grid: &GridSpec<T>) -> Result<T> {
    grid.check_scalar(p)?;
    grid.check_scalar(q)?;
    let mut acc = T::zero();
    for (&a, &b) in p.data().iter().zip(q.data()) {
        acc += a * b;
    }
    Ok(grid.cell_area() * acc)
}

pub fn norm_e<T: Real>(u: &VecField<T>, grid: &GridSpec<T>) -> Result<T> {
    Ok(inner_e(u, u, grid)?.sqrt())
}

pub fn norm_h<T: Real>(p: &ScalarField<T>, grid: &GridSpec<T>) -> Result<T> {
    Ok(inner_h(p, p, grid)?.sqrt())
}

const SAME_GRID: &str = "field built on the simulation grid";

impl<T: Real> Discretization<T> for GridSpec<T> {
    type Edge = VecField<T>;
    type Cell = ScalarField<T>;

    fn zero_edge(&self, constrained: bool) -> VecField<T> {
        VecField::zeros(self, constrained)
    }

    fn zero_cell(&self) -> ScalarField<T> {
        ScalarField::zeros(self)
    }

    fn apply_curl_h(&self, h: &ScalarField<T>) -> VecField<T> {
        curl_h(h, self).expect(SAME_GRID)
    }

    fn apply_curl_e(&self, e: &VecField<T>) -> ScalarField<T> {
        curl_e(e, self).expect(SAME_GRID)
    }

    fn edge_inner(&self, a: &VecField<T>, b: &VecField<T>) -> T {
        inner_e(a, b, self).expect(SAME_GRID)
    }

    fn cell_inner(&self, a: &ScalarField<T>, b: &ScalarField<T>) -> T {
        inner_h(a, b, self).expect(SAME_GRID)
    }

    fn constrain(&self, e: &mut VecField<T>) {
        e.set_pec(true);
    }

    fn check_edge(&self, e: &VecField<T>, constrained: bool) -> Result<()> {
        self.check_vec(e)?;
        if constrained && !e.satisfies_pec() {
            return Err(Error::InvalidConfig(
                "electric field violates the PEC boundary condition".into(),
            ));
        }
        Ok(())
    }

    fn check_cell(&self, h: &ScalarField<T>) -> Result<()> {
        self.check_scalar(h)
    }

    fn default_cg_maxit(&self) -> usize {
        10 * (self.nx + self.ny)
    }
}
