//! Discrete energy of the SFTR-theta scheme and its decay diagnostics.
//!
//! ```text
//! E^n = tau0^alpha tau^alpha sum_{k=0}^{n} a_k s_{n-k}
//!     + |P^n|^2 + c_p (c_e |E^n|^2 + c_m |H^n|^2)
//! ```
//!
//! with `s_j = |D^alpha P^{j - theta}|^2` and `s_0 = 0`. For `theta` in
//! `[alpha/2, 1/2]` the per-step quantity
//! `(E^n - E^{n-1})/tau + tau0^alpha tau^{1-alpha} / varpi_0 |dP|^2` is
//! non-positive in exact arithmetic.

use crate::error::{Error, Result};
use crate::mesh::{Discretization, FieldOps};
use crate::scalar::Real;
use crate::stepper::SimState;
use crate::weights::{WeightKind, WeightSequence};

fn check_kernel<T: Real, D: Discretization<T>>(
    state: &SimState<T, D>,
    a_seq: &WeightSequence<T>,
) -> Result<()> {
    if a_seq.kind() != WeightKind::CumulativeA {
        return Err(Error::KindMismatch {
            expected: WeightKind::CumulativeA,
            found: a_seq.kind(),
        });
    }
    let params = state.params();
    if a_seq.alpha() != params.alpha() || a_seq.theta() != Some(params.theta()) {
        return Err(Error::ParamMismatch(format!(
            "kernel built for alpha={}, theta={:?}; state has alpha={}, theta={}",
            a_seq.alpha(),
            a_seq.theta(),
            params.alpha(),
            params.theta()
        )));
    }
    if a_seq.len() < state.n() + 1 {
        return Err(Error::ParamMismatch(format!(
            "kernel has {} terms, step {} needs {}",
            a_seq.len(),
            state.n(),
            state.n() + 1
        )));
    }
    Ok(())
}

/// `tau0^alpha tau^alpha sum_k a_k s_{n-k}`, summed from scratch.
pub fn memory_term<T: Real, D: Discretization<T>>(
    state: &SimState<T, D>,
    a_seq: &WeightSequence<T>,
) -> Result<T> {
    check_kernel(state, a_seq)?;
    let n = state.n();
    let s = state.s_norm_sq();
    let a = a_seq.values();
    let mut acc = T::zero();
    for k in 0..=n {
        acc += a[k] * s[n - k];
    }
    let m = state.material();
    Ok(m.tau0.powf(m.alpha) * state.config().tau.powf(m.alpha) * acc)
}

/// `|P|^2 + c_p (c_e |E|^2 + c_m |H|^2)`.
pub fn field_energy<T: Real, D: Discretization<T>>(state: &SimState<T, D>) -> T {
    let d = state.disc();
    let m = state.material();
    let e2 = d.edge_inner(state.e(), state.e());
    let h2 = d.cell_inner(state.h(), state.h());
    let p2 = d.edge_inner(state.p(), state.p());
    p2 + m.c_p * (m.c_e * e2 + m.c_m * h2)
}

pub fn discrete_energy<T: Real, D: Discretization<T>>(
    state: &SimState<T, D>,
    a_seq: &WeightSequence<T>,
) -> Result<T> {
    Ok(memory_term(state, a_seq)? + field_energy(state))
}

/// Energy with the state's own SFTR companion kernel.
pub fn state_energy<T: Real, D: Discretization<T>>(state: &SimState<T, D>) -> Result<T> {
    discrete_energy(state, state.cumulative())
}

/// `(E^n - E^{n-1})/tau + tau0^alpha tau^{1-alpha}/varpi0 |(P^n - P^{n-1})/tau|^2`
/// from already computed energies; `state` is the state after the step.
pub fn dissipation_from_energies<T: Real, D: Discretization<T>>(
    state: &SimState<T, D>,
    energy_prev: T,
    energy_new: T,
    varpi0: T,
) -> Result<T> {
    let n = state.n();
    if n == 0 {
        return Err(Error::Domain("no step has been taken".into()));
    }
    let tau = state.config().tau;
    let m = state.material();
    let hist = state.p_history();
    let mut dp = hist[n].clone();
    dp.axpy_mut(-T::one(), &hist[n - 1]);
    dp.scale_mut(T::one() / tau);
    let dp2 = state.disc().edge_inner(&dp, &dp);
    Ok((energy_new - energy_prev) / tau
        + m.tau0.powf(m.alpha) * tau.powf(T::one() - m.alpha) / varpi0 * dp2)
}

/// Per-step dissipation residual between consecutive source-free states.
pub fn dissipation_check<T: Real, D: Discretization<T>>(
    prev: &SimState<T, D>,
    new: &SimState<T, D>,
    varpi0: T,
) -> Result<T> {
    if new.n() != prev.n() + 1 {
        return Err(Error::Domain("states are not consecutive".into()));
    }
    dissipation_from_energies(new, state_energy(prev)?, state_energy(new)?, varpi0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyRecord<T> {
    pub n: usize,
    pub t: T,
    pub energy: T,
    /// Dissipation residual of the step ending here; absent at `n = 0`.
    pub dissipation: Option<T>,
    /// `E^n - E^{n-1}` when positive.
    pub violation: Option<T>,
}

/// Energy per step, indexed contiguously from 0.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyTrace<T> {
    records: Vec<EnergyRecord<T>>,
    tol: T,
}

impl<T: Real> EnergyTrace<T> {
    /// Starts a trace at `E^0`; the violation tolerance is
    /// `1e-10 (1 + E^0)`.
    pub fn new(initial_energy: T) -> Self {
        Self {
            records: vec![EnergyRecord {
                n: 0,
                t: T::zero(),
                energy: initial_energy,
                dissipation: None,
                violation: None,
            }],
            tol: T::lit(1e-10) * (T::one() + initial_energy),
        }
    }

    /// Trace of a plain list of energies at `t_n = n tau`.
    pub fn from_energies(tau: T, energies: &[T]) -> Self {
        let mut it = energies.iter();
        let mut trace = Self::new(*it.next().expect("at least one energy value"));
        for &e in it {
            trace.push(tau, e, None);
        }
        trace
    }

    pub fn push(&mut self, tau: T, energy: T, dissipation: Option<T>) {
        let last = self.records.last().expect("trace starts non-empty");
        let n = last.n + 1;
        let rise = energy - last.energy;
        self.records.push(EnergyRecord {
            n,
            t: T::from_index(n) * tau,
            energy,
            dissipation,
            violation: (rise > T::zero()).then_some(rise),
        });
    }

    pub fn records(&self) -> &[EnergyRecord<T>] {
        &self.records
    }

    pub fn tol(&self) -> T {
        self.tol
    }

    pub fn energies(&self) -> impl Iterator<Item = T> + '_ {
        self.records.iter().map(|r| r.energy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayReport<T> {
    /// Steps whose energy rose by more than the trace tolerance.
    pub violations: usize,
    /// Largest rise over all steps, zero for a monotone trace.
    pub max_violation: T,
    pub first_violation: Option<usize>,
    /// Largest per-step dissipation residual recorded, if any.
    pub max_dissipation: Option<T>,
}

pub fn decay_report<T: Real>(trace: &EnergyTrace<T>) -> DecayReport<T> {
    let mut report = DecayReport {
        violations: 0,
        max_violation: T::zero(),
        first_violation: None,
        max_dissipation: None,
    };
    for r in trace.records() {
        if let Some(v) = r.violation {
            report.max_violation = report.max_violation.max(v);
            if v > trace.tol {
                report.violations += 1;
                report.first_violation.get_or_insert(r.n);
            }
        }
        if let Some(d) = r.dissipation {
            report.max_dissipation = Some(report.max_dissipation.map_or(d, |m| m.max(d)));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monotone_trace_is_clean() {
        let t = EnergyTrace::from_energies(0.1, &[3.0, 2.5, 2.5, 1.0]);
        let r = decay_report(&t);
        assert_eq!(r.violations, 0);
        assert_eq!(r.first_violation, None);
        assert_eq!(r.max_violation, 0.0);
    }

    #[test]
    fn single_rise_is_reported() {
        let t = EnergyTrace::<f64>::from_energies(0.1, &[1.0, 1.1, 0.9]);
        let r = decay_report(&t);
        assert_eq!(r.violations, 1);
        assert_eq!(r.first_violation, Some(1));
        assert!((r.max_violation - 0.1).abs() < 1e-15);
        assert_eq!(t.records()[2].violation, None);
    }

    #[test]
    fn rounding_level_rise_is_tolerated() {
        let t = EnergyTrace::from_energies(0.1, &[1.0, 1.0 + 1e-14]);
        let r = decay_report(&t);
        assert_eq!(r.violations, 0);
        assert!(r.max_violation > 0.0);
    }
}
