//! Convolution quadrature weights for the Caputo derivative.
//!
//! Four families are produced here, all as truncated Taylor coefficient
//! sequences of a generating function in `zeta`:
//!
//! * `SftrOmega`: `[(1 - z) / (0.5 (1 + z) + (theta/alpha)(1 - z))]^alpha`,
//!   the shifted fractional trapezoidal rule.
//! * `Varpi`: `(1 - z) / omega(z)`, the companion sequence that turns a first
//!   difference into a convolution of fractional derivative values.
//! * `CumulativeA`: partial sums of `Varpi`, i.e. the coefficients of
//!   `1 / omega(z)`; kernel of the discrete fractional integral.
//! * `Fbdf2`: `(3/2 - 2 z + z^2 / 2)^alpha`, the fractional BDF-2 rule.
//!
//! Sequences are computed with O(n^2) truncated convolutions, which is fine for
//! the few thousand terms the integrator needs.

mod gap;
mod symbol;

pub use gap::{min_theta_gap, min_theta_gap_grid, theta_gap, GapGrid};
pub use symbol::{default_truncation, symbol_residual, SymbolKind};

use std::ops::Index;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Fractional order and shift of the SFTR-theta rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeParams<T> {
    alpha: T,
    theta: T,
}

impl<T: Real> SchemeParams<T> {
    pub fn new(alpha: T, theta: T) -> Result<Self> {
        check_alpha(alpha)?;
        if !(theta > T::zero() && theta <= T::lit(0.5)) {
            return Err(Error::InvalidTheta(theta.as_f64()));
        }
        Ok(Self { alpha, theta })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    /// `theta / alpha`, the ratio every recurrence is written in.
    pub fn ratio(&self) -> T {
        self.theta / self.alpha
    }

    /// True when `theta >= alpha / 2`, the range in which the discrete energy
    /// is provably non-increasing.
    pub fn decay_guaranteed(&self) -> bool {
        self.theta >= self.alpha / T::lit(2.0)
    }

    /// Constant and linear coefficients of `0.5 (1 + z) + (theta/alpha)(1 - z)`.
    fn denominator(&self) -> (T, T) {
        let half = T::lit(0.5);
        (half + self.ratio(), half - self.ratio())
    }
}

pub(crate) fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha < T::one() {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha.as_f64()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightKind {
    SftrOmega,
    Varpi,
    CumulativeA,
    Fbdf2,
}

/// Prefix `values[0..=n]` of one weight family.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence<T> {
    kind: WeightKind,
    alpha: T,
    /// `None` for `Fbdf2`, which does not depend on the shift.
    theta: Option<T>,
    values: Vec<T>,
}

impl<T: Real> WeightSequence<T> {
    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn theta(&self) -> Option<T> {
        self.theta
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    fn expect_kind(&self, expected: WeightKind) -> Result<()> {
        if self.kind == expected {
            Ok(())
        } else {
            Err(Error::KindMismatch {
                expected,
                found: self.kind,
            })
        }
    }
}

impl<T> Index<usize> for WeightSequence<T> {
    type Output = T;

    fn index(&self, k: usize) -> &T {
        &self.values[k]
    }
}

/// First `n + 1` Taylor coefficients of `(1 + scale * z)^gamma`.
pub fn binomial_series<T: Real>(gamma: T, scale: T, n: usize) -> Vec<T> {
    let mut c = Vec::with_capacity(n + 1);
    c.push(T::one());
    for k in 1..=n {
        let kf = T::from_index(k);
        let next = c[k - 1] * scale * (gamma - kf + T::one()) / kf;
        c.push(next);
    }
    c
}

/// Cauchy product of two coefficient sequences truncated to `n + 1` terms.
pub fn convolve<T: Real>(a: &[T], b: &[T], n: usize) -> Vec<T> {
    (0..=n)
        .map(|k| {
            let lo = k.saturating_sub(b.len().saturating_sub(1));
            let hi = k.min(a.len().saturating_sub(1));
            if a.is_empty() || b.is_empty() || lo > hi {
                return T::zero();
            }
            let mut acc = T::zero();
            for j in lo..=hi {
                acc += a[j] * b[k - j];
            }
            acc
        })
        .collect()
}

/// SFTR-theta weights `omega_0..omega_n`.
///
/// Uses `omega(z) = d0^-alpha (1 - z)^alpha (1 + (d1/d0) z)^-alpha` with
/// `d0 = 1/2 + theta/alpha > 0`, `d1 = 1/2 - theta/alpha`.
pub fn sftr_weights<T: Real>(params: SchemeParams<T>, n: usize) -> WeightSequence<T> {
    let alpha = params.alpha;
    let (d0, d1) = params.denominator();
    let gl = binomial_series(alpha, -T::one(), n);
    let mut tail = binomial_series(-alpha, d1 / d0, n);
    let lead = d0.powf(-alpha);
    tail.iter_mut().for_each(|c| *c *= lead);
    WeightSequence {
        kind: WeightKind::SftrOmega,
        alpha,
        theta: Some(params.theta),
        values: convolve(&gl, &tail, n),
    }
}

/// Companion weights `varpi_0..varpi_n` from their three-term recursion.
pub fn varpi_weights<T: Real>(params: SchemeParams<T>, n: usize) -> WeightSequence<T> {
    let alpha = params.alpha;
    let r = params.ratio();
    let half = T::lit(0.5);
    let lead = r + half;

    let mut w = Vec::with_capacity(n + 1);
    w.push(lead.powf(alpha));
    if n >= 1 {
        w.push((alpha - r - half) / lead * w[0]);
    }
    for k in 2..=n {
        let kf = T::from_index(k);
        let a1 = r * (T::lit(2.0) * kf - T::lit(3.0)) + alpha - half;
        let a2 = (r - half) * (T::lit(3.0) - kf);
        w.push((a1 * w[k - 1] + a2 * w[k - 2]) / (lead * kf));
    }
    WeightSequence {
        kind: WeightKind::Varpi,
        alpha,
        theta: Some(params.theta),
        values: w,
    }
}

/// Partial sums `a_j = varpi_0 + ... + varpi_j`.
pub fn cumulative_a<T: Real>(varpi: &WeightSequence<T>) -> Result<WeightSequence<T>> {
    varpi.expect_kind(WeightKind::Varpi)?;
    let mut acc = T::zero();
    let values = varpi
        .values
        .iter()
        .map(|&w| {
            acc += w;
            acc
        })
        .collect();
    Ok(WeightSequence {
        kind: WeightKind::CumulativeA,
        alpha: varpi.alpha,
        theta: varpi.theta,
        values,
    })
}

/// Coefficients of `1 / omega(z) = (1 - z)^-alpha (d0 + d1 z)^alpha`,
/// evaluated directly as a product of binomial series.
pub fn cumulative_a_series<T: Real>(params: SchemeParams<T>, n: usize) -> Vec<T> {
    let alpha = params.alpha;
    let (d0, d1) = params.denominator();
    let inv = binomial_series(-alpha, -T::one(), n);
    let mut poly = binomial_series(alpha, d1 / d0, n);
    let lead = d0.powf(alpha);
    poly.iter_mut().for_each(|c| *c *= lead);
    convolve(&inv, &poly, n)
}

/// Fractional BDF-2 weights, `(3/2)^alpha (1 - z)^alpha (1 - z/3)^alpha`.
pub fn fbdf2_weights<T: Real>(alpha: T, n: usize) -> Result<WeightSequence<T>> {
    check_alpha(alpha)?;
    let mut gl = binomial_series(alpha, -T::one(), n);
    let lead = T::lit(1.5).powf(alpha);
    gl.iter_mut().for_each(|c| *c *= lead);
    let third = binomial_series(alpha, -T::one() / T::lit(3.0), n);
    Ok(WeightSequence {
        kind: WeightKind::Fbdf2,
        alpha,
        theta: None,
        values: convolve(&gl, &third, n),
    })
}

/// Kernel `(1 - theta) w_j + theta w_{j-1}` with `w_{-1} = 0`.
///
/// The output has one more entry than the input; the last is `theta * w_n`.
///
/// # Panics
///
/// If `theta` lies outside `[0, 1/2]`.
pub fn shift_combine<T: Real>(w: &[T], theta: T) -> Vec<T> {
    assert!(
        theta >= T::zero() && theta <= T::lit(0.5),
        "shift must lie in [0, 1/2]"
    );
    let keep = T::one() - theta;
    (0..=w.len())
        .map(|j| {
            let cur = if j < w.len() { w[j] } else { T::zero() };
            let prev = if j > 0 { w[j - 1] } else { T::zero() };
            keep * cur + theta * prev
        })
        .collect()
}
