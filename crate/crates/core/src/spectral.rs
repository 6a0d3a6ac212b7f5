//! Reference spectral radius: shifted power iteration on each irreducible block.
//!
//! ρ(A) is the maximum of ρ over the diagonal blocks given by the strongly
//! connected components. For an irreducible block B, B + I is primitive, so
//! power iteration on B + I from the all-ones vector converges to
//! ρ(B) + 1 without any knowledge of the period of B.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::NonnegMatrix;
use crate::structure::scc_blocks;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("power iteration did not reach tolerance {tol:e} within {max_iters} iterations")]
    NoConvergence { max_iters: usize, tol: f64 },
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectralMethod {
    PowerIterationPerBlock,
    /// Every block is 1×1, so ρ is read off the diagonal.
    ExactSmall,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralEstimate {
    pub rho: f64,
    /// Total iterations across all blocks.
    pub iterations: usize,
    /// Largest final relative change of the estimate over the blocks.
    pub residual: f64,
    pub method: SpectralMethod,
}

/// Consecutive iterations the relative change must stay below `tol`.
const STABLE_STREAK: usize = 3;

fn iteration_cap(k: usize) -> usize {
    100 * k * k + 10_000
}

pub fn spectral_radius(a: &NonnegMatrix, tol: f64) -> Result<SpectralEstimate, SpectralError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(SpectralError::BadTolerance(tol));
    }
    let mut est = SpectralEstimate {
        rho: 0.0,
        iterations: 0,
        residual: 0.0,
        method: SpectralMethod::ExactSmall,
    };
    for block in scc_blocks(a) {
        let (rho, iters, change) = if block.len() == 1 {
            (a.get(block[0], block[0]), 0, 0.0)
        } else {
            est.method = SpectralMethod::PowerIterationPerBlock;
            block_radius(&a.principal_submatrix(&block), tol)?
        };
        est.rho = est.rho.max(rho);
        est.iterations += iters;
        est.residual = est.residual.max(change);
    }
    Ok(est)
}

/// Returns (ρ, iterations, final relative change) for an irreducible block.
fn block_radius(b: &NonnegMatrix, tol: f64) -> Result<(f64, usize, f64), SpectralError> {
    let k = b.n();
    let cap = iteration_cap(k);
    let mut x = vec![1.0; k];
    let mut y = vec![0.0; k];
    let mut prev = f64::NAN;
    let mut streak = 0;
    for it in 1..=cap {
        b.mul_vec(&x, &mut y);
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi += xi;
        }
        // x is scaled to max-norm 1, so the max-norm ratio is max(y).
        let lambda = y.iter().cloned().fold(0.0, f64::max);
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / lambda;
        }
        let change = ((lambda - prev) / lambda).abs();
        if change < tol {
            streak += 1;
            if streak >= STABLE_STREAK {
                return Ok((lambda - 1.0, it, change));
            }
        } else {
            streak = 0;
        }
        prev = lambda;
    }
    Err(SpectralError::NoConvergence {
        max_iters: cap,
        tol,
    })
}
