//! Spectral radius bounds for nonnegative matrices built from average 2-row
//! sums, the row-sum bounds they are compared against, equality certificates
//! for irreducible matrices, and their instantiations on graph matrices.
//!
//! The building blocks:
//!
//! - [`matrix`]: dense nonnegative matrices, row statistics and the text format.
//! - [`structure`]: strongly connected components and irreducibility.
//! - [`spectral`]: the per-block shifted power iteration used as the reference ρ.
//! - [`bounds`]: the φ/ψ curves, the row-sum Φ/Ψ curves, the minimizing index
//!   and the equality certificates.
//! - [`graph`] and [`graph_bounds`]: graphs, their five matrices, and the
//!   closed-form graph bounds.
//! - [`report`], [`scan`] and [`fixtures`]: the pieces behind the CLI.

pub mod bounds;
pub mod fixtures;
pub mod graph;
pub mod graph_bounds;
pub mod matrix;
pub mod report;
pub mod scan;
pub mod spectral;
pub mod structure;

pub use bounds::{
    best_l, duan_phi_curve, duan_psi, lower_certificate, phi_curve, psi,
    symmetric_certificate_form, upper_certificate, BoundError, CertificateReason, Direction,
    EqualityCertificate, LowerBoundKind, LowerBoundValue, UpperBoundCurve,
};
pub use graph::{
    apsp, build_matrix, parse_edge_list, DistanceData, Graph, GraphError, GraphMatrixKind,
};
pub use graph_bounds::{graph_bound, GraphBoundReport};
pub use matrix::{avg_two_row_sums, profile, row_sums, MatrixError, NonnegMatrix, Profile};
pub use spectral::{spectral_radius, SpectralError, SpectralEstimate};
pub use structure::{is_irreducible, scc_blocks};

/// Relative tolerance used for the exact algebraic comparisons in certificates.
pub const CERT_RTOL: f64 = 1e-9;

/// Default tolerance of the power iteration.
pub const DEFAULT_TOL: f64 = 1e-12;

/// `|a - b| <= rtol * max(|a|, |b|)`; zero only equals zero.
pub fn approx_eq(a: f64, b: f64, rtol: f64) -> bool {
    (a - b).abs() <= rtol * a.abs().max(b.abs())
}
