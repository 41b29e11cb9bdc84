//! Closed-form test solution on the unit square and the temporal convergence
//! driver built on it.
//!
//! ```text
//! E = e^-t ((x^2+1) sin(pi y), sin(pi x)(y - 1/2))
//! P = t^3  ((x^2+1) y (y-1),  x (x-1)(y - 1/2))
//! H = e^-t (x^3+1)(y^3+1)
//! ```

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mesh::{Discretization, GridSpec, ScalarField, VecField};
use crate::scalar::Real;
use crate::stepper::{Forcing, MaterialParams, Quadrature, Sampled, SchemeConfig, SimState};

/// `sin(pi x)`, exactly zero at integers.
fn sin_pi<T: Real>(x: T) -> T {
    if x == x.round() {
        T::zero()
    } else {
        (T::PI() * x).sin()
    }
}

/// Caputo derivative of `t^3`: `6 t^{3-alpha} / Gamma(4 - alpha)`.
pub fn caputo_cubic<T: Real>(t: T, alpha: T) -> T {
    T::lit(6.0) * t.powf(T::lit(3.0) - alpha) / (T::lit(4.0) - alpha).gamma()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactFields<T> {
    pub e: [T; 2],
    pub p: [T; 2],
    pub h: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceValues<T> {
    pub f1: [T; 2],
    pub f2: T,
    pub f3: [T; 2],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManufacturedCase<T> {
    material: MaterialParams<T>,
}

impl<T: Real> ManufacturedCase<T> {
    /// Unit material coefficients.
    pub fn new(alpha: T) -> Result<Self> {
        Ok(Self {
            material: MaterialParams::unit(alpha)?,
        })
    }

    pub fn with_material(material: MaterialParams<T>) -> Result<Self> {
        material.validate()?;
        Ok(Self { material })
    }

    pub fn material(&self) -> &MaterialParams<T> {
        &self.material
    }

    pub fn alpha(&self) -> T {
        self.material.alpha
    }

    pub fn exact_fields(&self, x: T, y: T, t: T) -> ExactFields<T> {
        let half = T::lit(0.5);
        let decay = (-t).exp();
        let cube = t * t * t;
        ExactFields {
            e: [
                decay * (x * x + T::one()) * sin_pi(y),
                decay * sin_pi(x) * (y - half),
            ],
            p: [
                cube * (x * x + T::one()) * y * (y - T::one()),
                cube * x * (x - T::one()) * (y - half),
            ],
            h: decay * (x * x * x + T::one()) * (y * y * y + T::one()),
        }
    }

    /// Sources that make the exact fields solve the forced system.
    pub fn sources(&self, x: T, y: T, t: T) -> SourceValues<T> {
        let MaterialParams {
            c_e,
            c_m,
            c_p,
            tau0,
            alpha,
        } = self.material;
        let half = T::lit(0.5);
        let three = T::lit(3.0);
        let pi = T::PI();
        let decay = (-t).exp();
        let ex = self.exact_fields(x, y, t);
        let shape_p = [
            (x * x + T::one()) * y * (y - T::one()),
            x * (x - T::one()) * (y - half),
        ];
        let dp_dt = three * t * t;
        let curl_h = [
            decay * three * y * y * (x * x * x + T::one()),
            -decay * three * x * x * (y * y * y + T::one()),
        ];
        let curl_e =
            decay * (pi * (pi * x).cos() * (y - half) - pi * (x * x + T::one()) * (pi * y).cos());
        let frac = tau0.powf(alpha) * caputo_cubic(t, alpha);
        SourceValues {
            f1: [
                -c_e * ex.e[0] + dp_dt * shape_p[0] - curl_h[0],
                -c_e * ex.e[1] + dp_dt * shape_p[1] - curl_h[1],
            ],
            f2: -c_m * ex.h + curl_e,
            f3: [
                frac * shape_p[0] + ex.p[0] - c_p * ex.e[0],
                frac * shape_p[1] + ex.p[1] - c_p * ex.e[1],
            ],
        }
    }

    pub fn sample_e(&self, grid: &GridSpec<T>, t: T) -> VecField<T> {
        VecField::sample(grid, true, |x, y| self.exact_fields(x, y, t).e)
    }

    pub fn sample_p(&self, grid: &GridSpec<T>, t: T) -> VecField<T> {
        VecField::sample(grid, false, |x, y| self.exact_fields(x, y, t).p)
    }

    pub fn sample_h(&self, grid: &GridSpec<T>, t: T) -> ScalarField<T> {
        ScalarField::sample(grid, |x, y| self.exact_fields(x, y, t).h)
    }

    /// Integrator state initialised by sampling the exact fields at `t = 0`.
    pub fn initial_state(
        &self,
        grid: GridSpec<T>,
        config: SchemeConfig<T>,
    ) -> Result<SimState<T, GridSpec<T>>> {
        let e0 = self.sample_e(&grid, T::zero());
        let h0 = self.sample_h(&grid, T::zero());
        SimState::init(grid, self.material, config, e0, h0)
    }

    /// Discrete `L^2` errors `(E, H, P)` of a state against the exact fields
    /// at the state's time.
    pub fn error_norms(&self, state: &SimState<T, GridSpec<T>>) -> Result<(T, T, T)> {
        let grid = state.disc();
        let t = state.time();
        let de = self.sample_e(grid, t).sub(state.e())?;
        let dh = self.sample_h(grid, t).sub(state.h())?;
        let dp = self.sample_p(grid, t).sub(state.p())?;
        Ok((
            grid.edge_norm(&de),
            grid.cell_norm(&dh),
            grid.edge_norm(&dp),
        ))
    }
}

impl<T: Real> Forcing<T, GridSpec<T>> for ManufacturedCase<T> {
    fn sample(&self, grid: &GridSpec<T>, t: T) -> Sampled<VecField<T>, ScalarField<T>> {
        Sampled {
            f1: VecField::sample(grid, false, |x, y| self.sources(x, y, t).f1),
            f2: ScalarField::sample(grid, |x, y| self.sources(x, y, t).f2),
            f3: VecField::sample(grid, false, |x, y| self.sources(x, y, t).f3),
        }
    }
}

/// Global (max over steps) errors for one step size, with observed orders
/// against the previous row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow<T> {
    pub tau: T,
    pub err_e: T,
    pub err_h: T,
    pub err_p: T,
    pub rate_e: Option<T>,
    pub rate_h: Option<T>,
    pub rate_p: Option<T>,
}

/// Runs to `t = 1` once per step size and returns the global errors.
pub fn convergence_run<T: Real>(
    case: &ManufacturedCase<T>,
    quadrature: Quadrature,
    theta: T,
    tau: T,
    grid: GridSpec<T>,
) -> Result<(T, T, T)> {
    let steps = (T::one() / tau).round();
    if !(steps >= T::one()) || ((steps * tau) - T::one()).abs() > T::lit(1e-9) {
        return Err(Error::InvalidConfig(format!(
            "tau = {tau} does not divide the unit time interval"
        )));
    }
    let steps = steps.to_usize().expect("step count fits usize");
    let config = SchemeConfig::over_interval(theta, T::one(), steps, quadrature)?;
    let mut state = case.initial_state(grid, config)?;
    let mut worst = (T::zero(), T::zero(), T::zero());
    state.run(Some(case), |s, _| {
        let (e, h, p) = case.error_norms(s)?;
        worst = (worst.0.max(e), worst.1.max(h), worst.2.max(p));
        Ok(())
    })?;
    Ok(worst)
}

pub fn convergence_table<T: Real>(
    case: &ManufacturedCase<T>,
    quadrature: Quadrature,
    theta: T,
    taus: &[T],
    grid: GridSpec<T>,
) -> Result<Vec<ConvergenceRow<T>>> {
    let errors = taus
        .par_iter()
        .map(|&tau| convergence_run(case, quadrature, theta, tau, grid))
        .collect::<Result<Vec<_>>>()?;
    let rate = |prev: T, cur: T, tp: T, tc: T| (prev / cur).ln() / (tp / tc).ln();
    Ok(errors
        .iter()
        .enumerate()
        .map(|(i, &(e, h, p))| {
            let prev = i.checked_sub(1).map(|j| (errors[j], taus[j]));
            ConvergenceRow {
                tau: taus[i],
                err_e: e,
                err_h: h,
                err_p: p,
                rate_e: prev.map(|((pe, _, _), pt)| rate(pe, e, pt, taus[i])),
                rate_h: prev.map(|((_, ph, _), pt)| rate(ph, h, pt, taus[i])),
                rate_p: prev.map(|((_, _, pp), pt)| rate(pp, p, pt, taus[i])),
            }
        })
        .collect())
}
