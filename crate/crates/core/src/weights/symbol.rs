//! Accuracy of the companion generating functions on the exponential curve.
//!
//! Evaluating `varpi(e^-tau)` and `a(e^-tau)` with the right scaling must give
//! `1 + O(tau^2)`; the residual here is the measurable deviation.

use super::{cumulative_a, varpi_weights, SchemeParams};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    /// `tau^-(1-alpha) e^{(1/2 - theta) tau} varpi(e^-tau)`
    Varpi,
    /// `tau^alpha e^{-theta tau} a(e^-tau)`
    Cumulative,
}

/// `ceil(60 / tau)` terms: the damping `e^{-k tau}` is below `e^-60` past it.
pub fn default_truncation<T: Real>(tau: T) -> usize {
    (T::lit(60.0) / tau).ceil().to_usize().unwrap_or(usize::MAX)
}

/// `|scaled symbol - 1|` with the series truncated to `k_terms` terms.
///
/// Fails when the estimated truncated tail exceeds `1e-3 tau^2`, so the
/// residual never mixes truncation with the quadrature error being measured.
pub fn symbol_residual<T: Real>(
    kind: SymbolKind,
    params: SchemeParams<T>,
    tau: T,
    k_terms: usize,
) -> Result<T> {
    if !(tau > T::zero()) {
        return Err(Error::Domain(format!("tau = {tau} must be positive")));
    }
    let limit = T::lit(1e-3) * tau * tau;
    if k_terms < 2 {
        return Err(Error::TruncationTooShort {
            k: k_terms,
            bound: f64::INFINITY,
            limit: limit.as_f64(),
        });
    }
    let varpi = varpi_weights(params, k_terms - 1);
    let (coeffs, prefactor) = match kind {
        SymbolKind::Varpi => (
            varpi.into_values(),
            tau.powf(params.alpha() - T::one()) * ((T::lit(0.5) - params.theta()) * tau).exp(),
        ),
        SymbolKind::Cumulative => (
            cumulative_a(&varpi)?.into_values(),
            tau.powf(params.alpha()) * (-params.theta() * tau).exp(),
        ),
    };

    // Tail terms are monotone in magnitude past a few indices for both
    // families; twice the last retained magnitude bounds every later one.
    let last = coeffs[k_terms - 1].abs().max(coeffs[k_terms - 2].abs());
    let damp = (-T::from_index(k_terms) * tau).exp();
    let bound = prefactor * T::lit(2.0) * last * damp / (T::one() - (-tau).exp());
    if !(bound <= limit) {
        return Err(Error::TruncationTooShort {
            k: k_terms,
            bound: bound.as_f64(),
            limit: limit.as_f64(),
        });
    }

    let ratio = (-tau).exp();
    let mut z = T::one();
    let mut sum = T::zero();
    for &c in &coeffs {
        sum += c * z;
        z *= ratio;
    }
    Ok((prefactor * sum - T::one()).abs())
}
