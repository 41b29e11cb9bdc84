use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::weights::check_alpha;

/// Physical coefficients of the Cole-Cole system.
///
/// `c_e = eps0 eps_inf`, `c_m = mu0`, `c_p = eps0 (eps_s - eps_inf)`,
/// `tau0` the relaxation time and `alpha` the relaxation order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams<T> {
    pub c_e: T,
    pub c_m: T,
    pub c_p: T,
    pub tau0: T,
    pub alpha: T,
}

impl<T: Real> MaterialParams<T> {
    pub fn new(c_e: T, c_m: T, c_p: T, tau0: T, alpha: T) -> Result<Self> {
        let m = Self {
            c_e,
            c_m,
            c_p,
            tau0,
            alpha,
        };
        m.validate()?;
        Ok(m)
    }

    /// All coefficients equal to one.
    pub fn unit(alpha: T) -> Result<Self> {
        Self::new(T::one(), T::one(), T::one(), T::one(), alpha)
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        for (name, v) in [
            ("c_e", self.c_e),
            ("c_m", self.c_m),
            ("c_p (requires eps_s > eps_inf)", self.c_p),
            ("tau0", self.tau0),
        ] {
            if !(v > T::zero() && v.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "material coefficient {name} = {v} must be positive"
                )));
            }
        }
        Ok(())
    }
}

/// Which convolution quadrature approximates the Caputo derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quadrature {
    /// Shifted fractional trapezoidal rule (energy-decay preserving).
    Sftr,
    /// Shift-averaged fractional BDF-2.
    Fbdf2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig<T> {
    pub theta: T,
    pub tau: T,
    pub n_steps: usize,
    pub quadrature: Quadrature,
    pub cg_tol: T,
    /// `None` picks the discretisation default, `10 (nx + ny)` on a grid.
    pub cg_maxit: Option<usize>,
}

impl<T: Real> SchemeConfig<T> {
    pub fn new(theta: T, tau: T, n_steps: usize, quadrature: Quadrature) -> Result<Self> {
        let c = Self {
            theta,
            tau,
            n_steps,
            quadrature,
            cg_tol: T::default_solver_tol(),
            cg_maxit: None,
        };
        c.validate()?;
        Ok(c)
    }

    /// Splits `[0, t_final]` into `n_steps` equal steps.
    pub fn over_interval(
        theta: T,
        t_final: T,
        n_steps: usize,
        quadrature: Quadrature,
    ) -> Result<Self> {
        if n_steps == 0 {
            return Err(Error::InvalidConfig("need at least one step".into()));
        }
        Self::new(theta, t_final / T::from_index(n_steps), n_steps, quadrature)
    }

    pub fn with_solver(mut self, cg_tol: T, cg_maxit: Option<usize>) -> Self {
        self.cg_tol = cg_tol;
        self.cg_maxit = cg_maxit;
        self
    }

    pub fn final_time(&self) -> T {
        self.tau * T::from_index(self.n_steps)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta > T::zero() && self.theta <= T::lit(0.5)) {
            return Err(Error::InvalidTheta(self.theta.as_f64()));
        }
        if !(self.tau > T::zero() && self.tau.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "time step tau = {} must be positive",
                self.tau
            )));
        }
        if !(self.cg_tol > T::zero()) {
            return Err(Error::InvalidConfig(
                "solver tolerance must be positive".into(),
            ));
        }
        Ok(())
    }
}
