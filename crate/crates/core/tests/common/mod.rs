#![allow(dead_code)]

pub mod oracle;

use specbound::{spectral_radius, NonnegMatrix, DEFAULT_TOL};

/// Slack allowed around ρ in every sandwich check.
pub fn eps(rho: f64) -> f64 {
    1e-8 * rho.abs().max(1.0)
}

pub fn rel_close(a: f64, b: f64, rtol: f64) -> bool {
    (a - b).abs() <= rtol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

pub fn rho(a: &NonnegMatrix) -> f64 {
    spectral_radius(a, DEFAULT_TOL)
        .expect("power iteration converges")
        .rho
}
