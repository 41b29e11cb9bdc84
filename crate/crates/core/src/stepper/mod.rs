//! Implicit SFTR-theta time stepping for the Cole-Cole Maxwell system.
//!
//! Each step solves, at the shifted time level `t_{n - theta}`,
//!
//! ```text
//! c_e dE + dP - curl_h Hbar = f1
//! c_m dH + curl_e Ebar      = f2
//! tau0^alpha D^alpha P + Pbar - c_p Ebar = f3
//! ```
//!
//! where `d` is the backward difference quotient, `ubar = (1-theta) u^n +
//! theta u^{n-1}` and `D^alpha` a convolution quadrature over the stored
//! polarisation history. The polarisation equation is dof-local, so `P^n` is
//! eliminated as an affine function of `E^n`; substituting `H^n` from the
//! magnetic equation leaves one SPD system in `E^n`,
//!
//! ```text
//! [(c_e + a)/tau I + (1-theta)^2 (tau/c_m) curl_h curl_e] E^n = rhs,
//! ```
//!
//! solved matrix-free with conjugate gradients.

mod cg;
mod config;
mod forcing;

pub use cg::{solve_spd, CgOutcome};
pub use config::{MaterialParams, Quadrature, SchemeConfig};
pub use forcing::{Forcing, PointSources, Sampled, SourceSet};

use crate::error::{Error, Result};
use crate::mesh::{Discretization, FieldOps};
use crate::scalar::Real;
use crate::weights::{
    cumulative_a, fbdf2_weights, sftr_weights, shift_combine, varpi_weights, SchemeParams,
    WeightSequence,
};

/// Solver statistics of one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport<T> {
    pub n: usize,
    pub cg_iterations: usize,
    pub cg_residual: T,
    /// Weighted `L^2` norm of the assembled right-hand side.
    pub rhs_norm: T,
}

/// Defect fields of the three discrete equations.
#[derive(Debug, Clone, PartialEq)]
pub struct Defects<E, C> {
    pub r1: E,
    pub r2: C,
    pub r3: E,
}

/// Integrator state after `n` steps.
#[derive(Debug, Clone)]
pub struct SimState<T: Real, D: Discretization<T>> {
    disc: D,
    material: MaterialParams<T>,
    config: SchemeConfig<T>,
    params: SchemeParams<T>,
    n: usize,
    e: D::Edge,
    h: D::Cell,
    p: D::Edge,
    /// `P^0 .. P^n`.
    p_history: Vec<D::Edge>,
    /// `|D^alpha P^{j - theta}|^2`, with entry 0 fixed at zero.
    s_norm_sq: Vec<T>,
    /// Quadrature weights or the Fbdf2 base weights, indices `0..=n_steps`.
    weights: WeightSequence<T>,
    /// Convolution kernel applied to the history, indices `0..=n_steps`.
    kernel: Vec<T>,
    varpi: WeightSequence<T>,
    cumulative: WeightSequence<T>,
}

impl<T: Real, D: Discretization<T>> SimState<T, D> {
    /// State at `t = 0` with zero polarisation.
    pub fn init(
        disc: D,
        material: MaterialParams<T>,
        config: SchemeConfig<T>,
        e0: D::Edge,
        h0: D::Cell,
    ) -> Result<Self> {
        material.validate()?;
        config.validate()?;
        disc.check_edge(&e0, true)?;
        disc.check_cell(&h0)?;
        let params = SchemeParams::new(material.alpha, config.theta)?;
        let n_max = config.n_steps;
        let (weights, kernel) = match config.quadrature {
            Quadrature::Sftr => {
                let w = sftr_weights(params, n_max);
                let k = w.values().to_vec();
                (w, k)
            }
            Quadrature::Fbdf2 => {
                let w = fbdf2_weights(params.alpha(), n_max)?;
                let mut k = shift_combine(w.values(), params.theta());
                k.truncate(n_max + 1);
                (w, k)
            }
        };
        let varpi = varpi_weights(params, n_max);
        let cumulative = cumulative_a(&varpi)?;
        let p0 = disc.zero_edge(false);
        Ok(Self {
            material,
            config,
            params,
            n: 0,
            e: e0,
            h: h0,
            p: p0.clone(),
            p_history: vec![p0],
            s_norm_sq: vec![T::zero()],
            weights,
            kernel,
            varpi,
            cumulative,
            disc,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn time(&self) -> T {
        T::from_index(self.n) * self.config.tau
    }

    pub fn disc(&self) -> &D {
        &self.disc
    }

    pub fn material(&self) -> &MaterialParams<T> {
        &self.material
    }

    pub fn config(&self) -> &SchemeConfig<T> {
        &self.config
    }

    pub fn params(&self) -> SchemeParams<T> {
        self.params
    }

    pub fn e(&self) -> &D::Edge {
        &self.e
    }

    pub fn h(&self) -> &D::Cell {
        &self.h
    }

    pub fn p(&self) -> &D::Edge {
        &self.p
    }

    pub fn p_history(&self) -> &[D::Edge] {
        &self.p_history
    }

    pub fn s_norm_sq(&self) -> &[T] {
        &self.s_norm_sq
    }

    /// Weights the Caputo quadrature is built from (`omega` or the F-BDF-2
    /// base weights).
    pub fn weights(&self) -> &WeightSequence<T> {
        &self.weights
    }

    /// Kernel actually convolved with the history.
    pub fn kernel(&self) -> &[T] {
        &self.kernel
    }

    /// SFTR companion weights for the same `(alpha, theta)`.
    pub fn varpi(&self) -> &WeightSequence<T> {
        &self.varpi
    }

    /// Partial sums of [`SimState::varpi`]; the energy memory kernel.
    pub fn cumulative(&self) -> &WeightSequence<T> {
        &self.cumulative
    }

    pub fn is_finished(&self) -> bool {
        self.n >= self.config.n_steps
    }

    /// `tau^-alpha` times the quadrature applied to `history` followed by
    /// `p_new`, i.e. the discrete Caputo derivative at level
    /// `history.len() - theta`.
    fn frac_deriv_with(&self, history: &[D::Edge], p_new: &D::Edge) -> D::Edge {
        let m = history.len();
        let scale = self.config.tau.powf(-self.params.alpha());
        let k = &self.kernel;
        let mut acc = p_new.clone();
        acc.scale_mut(k[0]);
        match self.config.quadrature {
            Quadrature::Sftr => {
                // sum_{j=1}^{m} omega_{m-j} (P^j - P^0), with P^m = p_new
                let mut base_coeff = k[0];
                for (j, pj) in history.iter().enumerate().skip(1) {
                    acc.axpy_mut(k[m - j], pj);
                    base_coeff += k[m - j];
                }
                acc.axpy_mut(-base_coeff, &history[0]);
            }
            Quadrature::Fbdf2 => {
                for (j, pj) in history.iter().enumerate() {
                    acc.axpy_mut(k[m - j], pj);
                }
            }
        }
        acc.scale_mut(scale);
        acc
    }

    /// Discrete Caputo derivative at `t_{n+1-theta}` if `P^{n+1} = p_new`.
    pub fn frac_deriv_current(&self, p_new: &D::Edge) -> Result<D::Edge> {
        if self.p_history.len() != self.n + 1 {
            return Err(Error::HistoryMismatch {
                expected: self.n + 1,
                found: self.p_history.len(),
            });
        }
        if self.n + 1 >= self.kernel.len() {
            return Err(Error::InvalidConfig(format!(
                "weights cover {} steps only",
                self.kernel.len() - 1
            )));
        }
        self.disc.check_edge(p_new, false)?;
        Ok(self.frac_deriv_with(&self.p_history, p_new))
    }

    /// Discrete Caputo derivative at `t_{k-theta}` recomputed from the stored
    /// history, `1 <= k <= n`.
    pub fn frac_deriv_at(&self, k: usize) -> Result<D::Edge> {
        if k == 0 || k > self.n {
            return Err(Error::Domain(format!(
                "step index {k} outside 1..={}",
                self.n
            )));
        }
        Ok(self.frac_deriv_with(&self.p_history[..k], &self.p_history[k]))
    }

    fn sources_at(&self, sources: Option<&dyn Forcing<T, D>>, t: T) -> Sampled<D::Edge, D::Cell> {
        match sources {
            Some(f) => f.sample(&self.disc, t),
            None => Sampled {
                f1: self.disc.zero_edge(false),
                f2: self.disc.zero_cell(),
                f3: self.disc.zero_edge(false),
            },
        }
    }

    /// Advances one step, `n -> n + 1`.
    pub fn step(&mut self, sources: Option<&dyn Forcing<T, D>>) -> Result<StepReport<T>> {
        if self.is_finished() {
            return Err(Error::InvalidConfig(format!(
                "all {} configured steps already taken",
                self.config.n_steps
            )));
        }
        let n = self.n + 1;
        let theta = self.config.theta;
        let keep = T::one() - theta;
        let tau = self.config.tau;
        let MaterialParams {
            c_e,
            c_m,
            c_p,
            tau0,
            alpha,
        } = self.material;
        let memory = tau0.powf(alpha);
        let t_mid = (T::from_index(n) - theta) * tau;
        let Sampled { f1, f2, f3 } = self.sources_at(sources, t_mid);

        // Polarisation: P^n = a E^n + g.
        let history_part = self.frac_deriv_with(&self.p_history, &self.disc.zero_edge(false));
        let kappa = memory * tau.powf(-alpha) * self.kernel[0];
        let denom = kappa + keep;
        let a = keep * c_p / denom;
        let mut g = f3;
        g.axpy_mut(theta * c_p, &self.e);
        g.axpy_mut(-theta, &self.p);
        g.axpy_mut(-memory, &history_part);
        g.scale_mut(T::one() / denom);

        // H^n = H^{n-1} - (tau/c_m)[(1-theta) curl E^n + theta curl E^{n-1} - f2]
        let curl_e_old = self.disc.apply_curl_e(&self.e);
        let lag = tau / c_m;
        let mut h_shift = self.h.clone();
        let mut lagged = curl_e_old.clone();
        lagged.scale_mut(theta);
        lagged.axpy_mut(-T::one(), &f2);
        h_shift.axpy_mut(-keep * lag, &lagged);

        let mut rhs = f1;
        let inv_tau = T::one() / tau;
        rhs.axpy_mut(c_e * inv_tau, &self.e);
        rhs.axpy_mut(-inv_tau, &g);
        rhs.axpy_mut(inv_tau, &self.p);
        rhs.axpy_mut(T::one(), &self.disc.apply_curl_h(&h_shift));
        self.disc.constrain(&mut rhs);

        let diag = (c_e + a) * inv_tau;
        let beta = keep * keep * lag;
        let disc = &self.disc;
        let apply = |x: &D::Edge| {
            let mut y = disc.apply_curl_h(&disc.apply_curl_e(x));
            y.lincomb_mut(beta, diag, x);
            y
        };
        let maxit = self
            .config
            .cg_maxit
            .unwrap_or_else(|| self.disc.default_cg_maxit());
        let solved = solve_spd(apply, &rhs, Some(self.e.clone()), self.config.cg_tol, maxit)?;
        let e_new = solved.solution;

        let mut h_new = self.h.clone();
        let mut curl_bar = self.disc.apply_curl_e(&e_new);
        curl_bar.lincomb_mut(keep, theta, &curl_e_old);
        curl_bar.axpy_mut(-T::one(), &f2);
        h_new.axpy_mut(-lag, &curl_bar);

        let mut p_new = g;
        p_new.axpy_mut(a, &e_new);

        let mut d_alpha = history_part;
        d_alpha.axpy_mut(tau.powf(-alpha) * self.kernel[0], &p_new);
        let s = self.disc.edge_inner(&d_alpha, &d_alpha);

        self.e = e_new;
        self.h = h_new;
        self.p = p_new.clone();
        self.p_history.push(p_new);
        self.s_norm_sq.push(s);
        self.n = n;

        Ok(StepReport {
            n,
            cg_iterations: solved.iterations,
            cg_residual: solved.residual,
            rhs_norm: self.disc.edge_norm(&rhs),
        })
    }

    /// Runs the remaining steps, calling `observe` after each one.
    pub fn run(
        &mut self,
        sources: Option<&dyn Forcing<T, D>>,
        mut observe: impl FnMut(&Self, &StepReport<T>) -> Result<()>,
    ) -> Result<()> {
        while !self.is_finished() {
            let report = self.step(sources)?;
            observe(self, &report)?;
        }
        Ok(())
    }

    fn defects_core(
        &self,
        history: &[D::Edge],
        e_prev: &D::Edge,
        h_prev: &D::Cell,
        e_new: &D::Edge,
        h_new: &D::Cell,
        p_new: &D::Edge,
        sources: Option<&dyn Forcing<T, D>>,
    ) -> Defects<D::Edge, D::Cell> {
        let n = history.len();
        let theta = self.config.theta;
        let keep = T::one() - theta;
        let tau = self.config.tau;
        let inv_tau = T::one() / tau;
        let MaterialParams {
            c_e,
            c_m,
            c_p,
            tau0,
            alpha,
        } = self.material;
        let p_prev = &history[n - 1];
        let t_mid = (T::from_index(n) - theta) * tau;
        let Sampled { f1, f2, f3 } = self.sources_at(sources, t_mid);

        let mut e_bar = e_new.clone();
        e_bar.lincomb_mut(keep, theta, e_prev);
        let mut h_bar = h_new.clone();
        h_bar.lincomb_mut(keep, theta, h_prev);
        let mut p_bar = p_new.clone();
        p_bar.lincomb_mut(keep, theta, p_prev);

        let mut r1 = self.disc.apply_curl_h(&h_bar);
        r1.scale_mut(-T::one());
        r1.axpy_mut(c_e * inv_tau, e_new);
        r1.axpy_mut(-c_e * inv_tau, e_prev);
        r1.axpy_mut(inv_tau, p_new);
        r1.axpy_mut(-inv_tau, p_prev);
        r1.axpy_mut(-T::one(), &f1);
        self.disc.constrain(&mut r1);

        let mut r2 = self.disc.apply_curl_e(&e_bar);
        r2.axpy_mut(c_m * inv_tau, h_new);
        r2.axpy_mut(-c_m * inv_tau, h_prev);
        r2.axpy_mut(-T::one(), &f2);

        let mut r3 = self.frac_deriv_with(history, p_new);
        r3.scale_mut(tau0.powf(alpha));
        r3.axpy_mut(T::one(), &p_bar);
        r3.axpy_mut(-c_p, &e_bar);
        r3.axpy_mut(-T::one(), &f3);

        Defects { r1, r2, r3 }
    }

    /// Defects of candidate fields for the next step, taking `self` as the
    /// previous state. Affine in `(e_new, h_new, p_new)`.
    pub fn defects_for(
        &self,
        e_new: &D::Edge,
        h_new: &D::Cell,
        p_new: &D::Edge,
        sources: Option<&dyn Forcing<T, D>>,
    ) -> Result<Defects<D::Edge, D::Cell>> {
        self.disc.check_edge(e_new, false)?;
        self.disc.check_cell(h_new)?;
        self.disc.check_edge(p_new, false)?;
        if self.n + 1 >= self.kernel.len() {
            return Err(Error::InvalidConfig("no step left to check".into()));
        }
        Ok(self.defects_core(
            &self.p_history,
            &self.e,
            &self.h,
            e_new,
            h_new,
            p_new,
            sources,
        ))
    }

    /// Defects of the most recent step, given the fields it started from.
    /// The polarisation history is taken from `self`, so the previous state
    /// does not need to be kept around.
    pub fn last_step_defects(
        &self,
        e_prev: &D::Edge,
        h_prev: &D::Cell,
        sources: Option<&dyn Forcing<T, D>>,
    ) -> Result<Defects<D::Edge, D::Cell>> {
        if self.n == 0 {
            return Err(Error::Domain("no step has been taken".into()));
        }
        Ok(self.defects_core(
            &self.p_history[..self.n],
            e_prev,
            h_prev,
            &self.e,
            &self.h,
            &self.p,
            sources,
        ))
    }

    /// Weighted `L^2` norms of the three defects of the most recent step.
    pub fn last_step_residual(
        &self,
        e_prev: &D::Edge,
        h_prev: &D::Cell,
        sources: Option<&dyn Forcing<T, D>>,
    ) -> Result<[T; 3]> {
        let d = self.last_step_defects(e_prev, h_prev, sources)?;
        Ok(defect_norms(&self.disc, &d))
    }
}

fn defect_norms<T: Real, D: Discretization<T>>(disc: &D, d: &Defects<D::Edge, D::Cell>) -> [T; 3] {
    [
        disc.edge_norm(&d.r1),
        disc.cell_norm(&d.r2),
        disc.edge_norm(&d.r3),
    ]
}

/// Defect fields of the step from `prev` to `new`.
pub fn scheme_defects<T: Real, D: Discretization<T>>(
    prev: &SimState<T, D>,
    new: &SimState<T, D>,
    sources: Option<&dyn Forcing<T, D>>,
) -> Result<Defects<D::Edge, D::Cell>> {
    if new.n != prev.n + 1 {
        return Err(Error::Domain(format!(
            "states at steps {} and {} are not consecutive",
            prev.n, new.n
        )));
    }
    prev.defects_for(&new.e, &new.h, &new.p, sources)
}

/// `[|r1|, |r2|, |r3|]` for the step from `prev` to `new`.
pub fn scheme_residual<T: Real, D: Discretization<T>>(
    prev: &SimState<T, D>,
    new: &SimState<T, D>,
    sources: Option<&dyn Forcing<T, D>>,
) -> Result<[T; 3]> {
    let d = scheme_defects(prev, new, sources)?;
    Ok(defect_norms(&prev.disc, &d))
}
