//! Float helpers and the deterministic power iteration used for all
//! spectral norms in this crate.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;

#[cfg(feature = "std")]
#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    x.sqrt()
}

#[cfg(all(not(feature = "std"), feature = "libm"))]
#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[cfg(feature = "std")]
#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    x.abs()
}

#[cfg(all(not(feature = "std"), feature = "libm"))]
#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("boxspace needs either the `std` or the `libm` feature");

/// Deterministic seed: all ones plus a fixed small perturbation so that the
/// start vector is never exactly orthogonal to the top eigenspace of a
/// generic operator. The perturbation is tiny (1e-8 scale) so that in
/// degenerate top eigenspaces the limit stays numerically close to the
/// projection of the all-ones vector.
pub(crate) fn seed_vector(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 1.0 + 1e-8 * ((i % 8) as f64 + 1.0))
        .collect()
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = sqrt(v.iter().map(|x| x * x).sum::<f64>());
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    norm
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Top eigenpair of a symmetric positive semidefinite operator given by
/// `apply` (w = S v). Convergence requires three things: successive
/// square-root Rayleigh estimates differ by less than `tol`, the
/// geometric tail bound `diff * q / (1 - q)` (with `q` the observed ratio
/// of consecutive differences) certifies an absolute error below
/// `tol * (1 + estimate)`, and the eigen-residual `||Sv - rho v||` drops
/// below `residual_tol * max(rho, 1e-300)`.
///
/// Iteration cap is `10 n + 1000`; hitting it returns
/// [`Error::NoConvergence`] carrying the last estimate.
pub(crate) fn top_eigenpair<F>(
    mut apply: F,
    n: usize,
    tol: f64,
    residual_tol: f64,
) -> Result<(f64, Vec<f64>), Error>
where
    F: FnMut(&[f64], &mut [f64]),
{
    if n == 0 {
        return Ok((0.0, Vec::new()));
    }
    let cap = 10 * n + 1000;
    let mut v = seed_vector(n);
    normalize(&mut v);
    let mut w = vec![0.0; n];
    apply(&v, &mut w);
    let mut rho = dot(&v, &w);

    if rho <= 0.0 {
        // Seed landed in the kernel. S is PSD, so any nonzero diagonal entry
        // exposes a direction with positive Rayleigh quotient; probe basis
        // vectors in canonical order.
        let mut found = false;
        for j in 0..n {
            for (i, x) in v.iter_mut().enumerate() {
                *x = if i == j { 1.0 } else { 0.0 };
            }
            apply(&v, &mut w);
            rho = dot(&v, &w);
            if rho > 0.0 {
                found = true;
                break;
            }
        }
        if !found {
            return Ok((0.0, seed_unit(n)));
        }
    }

    let mut last_est = sqrt(rho.max(0.0));
    let mut last_diff = f64::INFINITY;
    for _ in 0..cap {
        // w = S v from the previous round becomes the next iterate.
        let wnorm = normalize(&mut w);
        if wnorm == 0.0 {
            // Rayleigh quotients are nondecreasing along power iteration,
            // so this only happens for the zero operator.
            return Ok((0.0, seed_unit(n)));
        }
        core::mem::swap(&mut v, &mut w);
        apply(&v, &mut w);
        rho = dot(&v, &w);
        let est = sqrt(rho.max(0.0));
        let diff = abs(est - last_est);
        let value_ok = if diff == 0.0 {
            true
        } else if diff < tol && last_diff.is_finite() && last_diff > 0.0 {
            let q = diff / last_diff;
            q < 1.0 && diff * q / (1.0 - q) <= tol * (1.0 + est)
        } else {
            false
        };
        if value_ok {
            let residual = {
                let mut s = 0.0;
                for i in 0..n {
                    let d = w[i] - rho * v[i];
                    s += d * d;
                }
                sqrt(s)
            };
            if residual <= residual_tol * rho.max(1e-300) {
                return Ok((rho, v));
            }
        }
        last_diff = diff;
        last_est = est;
    }
    Err(Error::NoConvergence {
        last_estimate: last_est,
    })
}

fn seed_unit(n: usize) -> Vec<f64> {
    let mut v = seed_vector(n);
    normalize(&mut v);
    v
}
