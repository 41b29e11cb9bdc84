//! Source-free energy experiment.

use crate::energy::{dissipation_from_energies, state_energy, EnergyTrace};
use crate::error::Result;
use crate::mesh::{GridSpec, ScalarField, VecField};
use crate::scalar::Real;
use crate::stepper::{MaterialParams, Quadrature, SchemeConfig, SimState};

/// Initial data of the energy experiment: `E0 = ((x^2+1) sin(pi y),
/// sin(pi x)(y - 1/2))`, `H0 = (x^3+1)(y^3+1)`, `P0 = 0`.
pub fn pulse_initial_fields<T: Real>(grid: &GridSpec<T>) -> (VecField<T>, ScalarField<T>) {
    let pi = T::PI();
    let half = T::lit(0.5);
    let e0 = VecField::sample(grid, true, |x, y| {
        [
            (x * x + T::one()) * (pi * y).sin(),
            (pi * x).sin() * (y - half),
        ]
    });
    let h0 = ScalarField::sample(grid, |x, y| (x * x * x + T::one()) * (y * y * y + T::one()));
    (e0, h0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySettings<T> {
    pub alpha: T,
    pub theta: T,
    pub quadrature: Quadrature,
    pub tau: T,
    pub n_steps: usize,
    /// Also evaluate the equation defects after each step.
    pub check_defects: bool,
}

#[derive(Debug, Clone)]
pub struct EnergyRun<T> {
    pub trace: EnergyTrace<T>,
    /// Largest defect norm over all steps and equations.
    pub max_defect: T,
    /// Largest `10 cg_tol max(1, |rhs|)` bound seen, for comparison with
    /// `max_defect`.
    pub defect_bound: T,
    pub cg_iterations: usize,
}

/// Unit-coefficient source-free run from [`pulse_initial_fields`].
pub fn energy_run<T: Real>(grid: GridSpec<T>, settings: EnergySettings<T>) -> Result<EnergyRun<T>> {
    let material = MaterialParams::unit(settings.alpha)?;
    let config = SchemeConfig::new(
        settings.theta,
        settings.tau,
        settings.n_steps,
        settings.quadrature,
    )?;
    let (e0, h0) = pulse_initial_fields(&grid);
    let mut state = SimState::init(grid, material, config, e0, h0)?;
    let varpi0 = state.varpi()[0];
    let mut trace = EnergyTrace::new(state_energy(&state)?);
    let mut prev_energy = trace.records()[0].energy;
    let mut max_defect = T::zero();
    let mut defect_bound = T::zero();
    let mut cg_iterations = 0;

    while !state.is_finished() {
        let (e_prev, h_prev) = if settings.check_defects {
            (Some(state.e().clone()), Some(state.h().clone()))
        } else {
            (None, None)
        };
        let report = state.step(None)?;
        cg_iterations += report.cg_iterations;
        let energy = state_energy(&state)?;
        let r = dissipation_from_energies(&state, prev_energy, energy, varpi0)?;
        trace.push(settings.tau, energy, Some(r));
        prev_energy = energy;
        if let (Some(e_prev), Some(h_prev)) = (e_prev, h_prev) {
            let res = state.last_step_residual(&e_prev, &h_prev, None)?;
            max_defect = res.into_iter().fold(max_defect, T::max);
            let bound = T::lit(10.0) * state.config().cg_tol * report.rhs_norm.max(T::one());
            defect_bound = defect_bound.max(bound);
        }
    }
    Ok(EnergyRun {
        trace,
        max_defect,
        defect_bound,
        cg_iterations,
    })
}
