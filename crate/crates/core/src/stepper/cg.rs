//! Matrix-free conjugate gradients on a constrained field space.

use crate::error::{Error, Result};
use crate::mesh::FieldOps;
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct CgOutcome<X, T> {
    pub solution: X,
    pub iterations: usize,
    /// Final relative residual `|rhs - A x| / |rhs|` (recursively updated).
    pub residual: T,
}

/// Solves `apply(x) = rhs` for a symmetric positive definite `apply`.
///
/// `apply`, `rhs` and `x0` must all respect the same constraint (PEC dofs
/// held at zero); CG then never leaves the constrained subspace.
pub fn solve_spd<T, X, A>(
    apply: A,
    rhs: &X,
    x0: Option<X>,
    tol: T,
    maxit: usize,
) -> Result<CgOutcome<X, T>>
where
    T: Real,
    X: FieldOps<T>,
    A: Fn(&X) -> X,
{
    let b_norm = rhs.dot(rhs).sqrt();
    if b_norm == T::zero() {
        return Ok(CgOutcome {
            solution: rhs.zeros_like(),
            iterations: 0,
            residual: T::zero(),
        });
    }
    let target = tol * b_norm;

    let mut x = x0.unwrap_or_else(|| rhs.zeros_like());
    let mut r = rhs.clone();
    r.axpy_mut(-T::one(), &apply(&x));
    let mut rr = r.dot(&r);
    if rr.sqrt() <= target {
        return Ok(CgOutcome {
            solution: x,
            iterations: 0,
            residual: rr.sqrt() / b_norm,
        });
    }

    let mut p = r.clone();
    for it in 1..=maxit {
        let ap = apply(&p);
        let pap = p.dot(&ap);
        if !(pap > T::zero()) {
            return Err(Error::NotConverged {
                iterations: it,
                residual: (rr.sqrt() / b_norm).as_f64(),
            });
        }
        let step = rr / pap;
        x.axpy_mut(step, &p);
        r.axpy_mut(-step, &ap);
        let rr_next = r.dot(&r);
        if rr_next.sqrt() <= target {
            return Ok(CgOutcome {
                solution: x,
                iterations: it,
                residual: rr_next.sqrt() / b_norm,
            });
        }
        p.lincomb_mut(rr_next / rr, T::one(), &r);
        rr = rr_next;
    }
    Err(Error::NotConverged {
        iterations: maxit,
        residual: (rr.sqrt() / b_norm).as_f64(),
    })
}
