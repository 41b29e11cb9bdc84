//! The auxiliary function whose positivity closes the sign argument for the
//! companion weights, and the grid scan that visualises it.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;

fn rho<T: Real>(alpha: T, theta: T, k: T) -> T {
    let r = theta / alpha;
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    (r - half) * (k - two) / (r * (two * k - T::one()) + alpha - half) * T::lit(4.0) * theta
        / (two * theta + alpha)
        * (T::one() + T::one() / k)
}

fn rho_tilde<T: Real>(alpha: T, theta: T, m: T) -> T {
    let r = theta / alpha;
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    (r * (two * m - T::lit(3.0)) + alpha - half) / ((r + half) * m)
        * (T::one() + (two * theta + alpha) / (T::lit(4.0) * theta) * (m - T::one()) / m)
}

fn gap_unchecked<T: Real>(x: T, alpha: T, theta: T) -> T {
    let m = T::lit(4.0) / x;
    rho_tilde(alpha, theta, m) - rho(alpha, theta, m)
}

/// `rho_tilde(alpha, theta, 4/x) - rho(alpha, theta, 4/x)` with `m = 4/x` real.
pub fn theta_gap<T: Real>(x: T, alpha: T, theta: T) -> Result<T> {
    if !(x > T::zero() && x <= T::one()) {
        return Err(Error::Domain(format!("x = {x} must lie in (0, 1]")));
    }
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(Error::Domain(format!("alpha = {alpha} must lie in (0, 1)")));
    }
    if !(theta >= alpha / T::lit(2.0) && theta <= T::lit(0.5)) {
        return Err(Error::Domain(format!(
            "theta = {theta} must lie in [alpha/2, 1/2] = [{}, 0.5]",
            alpha / T::lit(2.0)
        )));
    }
    Ok(gap_unchecked(x, alpha, theta))
}

/// Minimum of the gap over `samples` equispaced shifts in `[alpha/2, 1/2]`.
pub fn min_theta_gap<T: Real>(x: T, alpha: T, samples: usize) -> Result<T> {
    theta_gap(x, alpha, T::lit(0.5))?;
    if samples < 2 {
        return Err(Error::Domain("need at least two theta samples".into()));
    }
    Ok(min_unchecked(x, alpha, samples))
}

fn min_unchecked<T: Real>(x: T, alpha: T, samples: usize) -> T {
    let lo = alpha / T::lit(2.0);
    let width = T::lit(0.5) - lo;
    let last = T::from_index(samples - 1);
    (0..samples)
        .map(|s| {
            let theta = if s + 1 == samples {
                T::lit(0.5)
            } else {
                lo + width * T::from_index(s) / last
            };
            gap_unchecked(x, alpha, theta)
        })
        .fold(T::infinity(), T::min)
}

/// Scan of `min_theta gap(x, alpha, theta)` over `x_i = i / nx`,
/// `alpha_j = j / (na + 1)`; stored x-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GapGrid<T> {
    pub xs: Vec<T>,
    pub alphas: Vec<T>,
    pub values: Vec<T>,
}

impl<T: Real> GapGrid<T> {
    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[i * self.alphas.len() + j]
    }

    pub fn min(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    /// `(x, alpha, value)` triples in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (T, T, T)> + '_ {
        let na = self.alphas.len();
        self.values
            .iter()
            .enumerate()
            .map(move |(idx, &v)| (self.xs[idx / na], self.alphas[idx % na], v))
    }
}

pub fn min_theta_gap_grid<T: Real>(
    x_points: usize,
    alpha_points: usize,
    theta_samples: usize,
) -> Result<GapGrid<T>> {
    if x_points < 2 || alpha_points < 2 || theta_samples < 2 {
        return Err(Error::Domain("grid resolutions must be at least 2".into()));
    }
    let xs: Vec<T> = (1..=x_points)
        .map(|i| T::from_index(i) / T::from_index(x_points))
        .collect();
    let alphas: Vec<T> = (1..=alpha_points)
        .map(|j| T::from_index(j) / T::from_index(alpha_points + 1))
        .collect();
    let values = xs
        .par_iter()
        .flat_map_iter(|&x| {
            alphas
                .iter()
                .map(move |&a| min_unchecked(x, a, theta_samples))
        })
        .collect();
    Ok(GapGrid { xs, alphas, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grunwald_shift_has_zero_rho() {
        for &a in &[0.1, 0.5, 0.9] {
            for &x in &[0.1, 0.5, 1.0] {
                assert_eq!(rho(a, a / 2.0, 4.0 / x), 0.0);
                assert!(theta_gap(x, a, a / 2.0).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn hand_evaluated_point() {
        let g = theta_gap::<f64>(1.0, 0.5, 0.25).unwrap();
        assert!((g - 1.09375).abs() < 1e-15);
        assert!(theta_gap(0.5, 0.5, 0.5).unwrap() > 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(theta_gap(0.0, 0.5, 0.3).is_err());
        assert!(theta_gap(1.5, 0.5, 0.3).is_err());
        assert!(theta_gap(0.5, 0.5, 0.2).is_err());
        assert!(theta_gap(0.5, 1.0, 0.5).is_err());
        assert!(min_theta_gap_grid::<f64>(1, 5, 5).is_err());
    }

    #[test]
    fn degenerate_shift_range() {
        let a = 1.0 - 1e-12;
        for &x in &[0.2, 0.7, 1.0] {
            let m = min_theta_gap::<f64>(x, a, 7).unwrap();
            let at_half = theta_gap(x, a, 0.5).unwrap();
            assert!((m - at_half).abs() < 1e-9);
        }
    }

    #[test]
    fn coarse_scan_shape() {
        let g = min_theta_gap_grid::<f64>(2, 2, 2).unwrap();
        assert_eq!(g.values.len(), 4);
        assert_eq!(g.xs, vec![0.5, 1.0]);
        assert_eq!(g.alphas, vec![1.0 / 3.0, 2.0 / 3.0]);
        assert_eq!(g.iter().count(), 4);
        assert!(g.min() > 0.0);
    }
}
