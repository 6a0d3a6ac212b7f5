//! Spectral radius bounds from average 2-row sums (φ, ψ) and from plain row
//! sums (Φ, Ψ), the index minimizing φ, and the equality certificates.
//!
//! Every bound here is the larger root of the same quadratic. For a
//! descending sequence x_1 ≥ … ≥ x_n, a diagonal extreme `d` and an
//! off-diagonal weight `w`, the l-th value is
//!
//! ```text
//! (x_l + d - w + sqrt((x_l - d + w)^2 + 4 w Σ_{i<l} (x_i - x_l))) / 2
//! ```
//!
//! with (x, d, w) = (m, M, N·b) for φ, (m, S, T·c) for ψ at l = n,
//! (r, M, N) for Φ and (r, S, T) for Ψ at l = n.

mod certificate;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{profile, MatrixError, NonnegMatrix, Profile};
use crate::{approx_eq, CERT_RTOL};

pub use certificate::{
    duan_lower_certificate, duan_upper_certificate, lower_certificate, symmetric_certificate_form,
    upper_certificate, CertificateReason, ConditionCheck, EqualityCertificate, SymmetricConditions,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("matrix has no positive off-diagonal entry (N = 0); only l = 1 is defined")]
    ZeroOffDiagonal,
    #[error("equality is only characterized for irreducible matrices")]
    RefusedReducible,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("index l = {l} out of range 1..={n}")]
    InvalidIndex { l: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Upper,
    Lower,
}

/// Values of an upper bound for l = 1..=n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpperBoundCurve {
    pub values: Vec<f64>,
    /// 1-based.
    pub best_l: usize,
    pub best_value: f64,
    /// Set when N = 0 (or n = 1): only the l = 1 value exists.
    pub degenerate: bool,
}

impl UpperBoundCurve {
    /// Value at the 1-based index `l`.
    pub fn at(&self, l: usize) -> f64 {
        self.values[l - 1]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LowerBoundKind {
    Avg2,
    Rowsum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundValue {
    pub value: f64,
    pub kind: LowerBoundKind,
}

/// Larger root of `(x - base)(x - diag + weight) = weight * excess`.
pub fn quadratic_bound(base: f64, diag: f64, weight: f64, excess: f64) -> f64 {
    let shift = base - diag + weight;
    let disc = (shift * shift + 4.0 * weight * excess).sqrt();
    if shift > 0.0 {
        // avoids cancelling disc against shift
        base + 2.0 * weight * excess / (disc + shift)
    } else {
        (base + diag - weight + disc) / 2.0
    }
}

/// Upper curve over a descending sequence.
pub fn upper_curve(sorted: &[f64], diag: f64, weight: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(sorted.len());
    let mut excess = 0.0;
    for (k, &x) in sorted.iter().enumerate() {
        if k > 0 {
            // Σ_{i<l+1}(x_i - x_{l+1}) = Σ_{i<l}(x_i - x_l) + l (x_l - x_{l+1})
            excess += k as f64 * (sorted[k - 1] - x);
        }
        out.push(if k == 0 {
            x
        } else {
            quadratic_bound(x, diag, weight, excess)
        });
    }
    out
}

/// Lower value at l = n over a descending sequence.
pub fn lower_value(sorted: &[f64], diag: f64, weight: f64) -> f64 {
    let last = *sorted.last().expect("nonempty");
    if weight == 0.0 {
        return last;
    }
    let excess: f64 = sorted.iter().map(|x| x - last).sum();
    quadratic_bound(last, diag, weight, excess)
}

/// Σ_{i≤l} m_i − l(N b l + M − N b), for 1-based `l`. Its sign decides
/// whether φ_l ≥ φ_{l+1} (nonnegative) or φ_l ≤ φ_{l+1} (negative).
pub fn crossing_criterion(sorted: &[f64], diag: f64, weight: f64, l: usize) -> f64 {
    let head: f64 = sorted[..l].iter().sum();
    let lf = l as f64;
    head - lf * (weight * lf + diag - weight)
}

/// Smallest l in 2..=n with a negative crossing criterion; 1 for the
/// constant-diagonal/constant-off-diagonal matrix.
pub(crate) fn analytic_best_l(
    sorted: &[f64],
    diag: f64,
    weight: f64,
    extremal: bool,
    curve: &[f64],
) -> usize {
    let n = sorted.len();
    if extremal || n == 1 {
        return 1;
    }
    (2..=n)
        .find(|&l| crossing_criterion(sorted, diag, weight, l) < 0.0)
        // rounding at the boundary of the extremal case; the curve is flat there
        .unwrap_or_else(|| argmin(curve))
}

fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (k, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = k;
        }
    }
    best + 1
}

/// Diagonal all equal to `diag` and off-diagonal all equal to `off`.
pub(crate) fn is_constant_matrix(a: &NonnegMatrix, diag: f64, off: f64) -> bool {
    let n = a.n();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let target = if i == j { diag } else { off };
            approx_eq(a.get(i, j), target, CERT_RTOL)
        })
    })
}

fn curve_with_best(values: Vec<f64>, best_l: usize, degenerate: bool) -> UpperBoundCurve {
    UpperBoundCurve {
        best_value: values[best_l - 1],
        values,
        best_l,
        degenerate,
    }
}

pub(crate) fn phi_from_profile(a: &NonnegMatrix, p: &Profile) -> UpperBoundCurve {
    let sorted = p.sorted_avg2();
    match p.max_off {
        Some(n_off) if n_off > 0.0 => {
            let weight = n_off * p.max_ratio;
            let values = upper_curve(&sorted, p.max_diag, weight);
            let extremal = is_constant_matrix(a, p.max_diag, n_off);
            let l = analytic_best_l(&sorted, p.max_diag, weight, extremal, &values);
            curve_with_best(values, l, false)
        }
        _ => curve_with_best(vec![sorted[0]], 1, true),
    }
}

pub(crate) fn psi_from_profile(p: &Profile) -> LowerBoundValue {
    let sorted = p.sorted_avg2();
    let value = match p.min_off {
        Some(t) if t > 0.0 => lower_value(&sorted, p.min_diag, t * p.min_ratio),
        _ => *sorted.last().unwrap(),
    };
    LowerBoundValue {
        value,
        kind: LowerBoundKind::Avg2,
    }
}

pub(crate) fn duan_phi_from_profile(p: &Profile) -> UpperBoundCurve {
    let sorted = p.sorted_row_sums();
    match p.max_off {
        Some(n_off) if n_off > 0.0 => {
            let values = upper_curve(&sorted, p.max_diag, n_off);
            let l = argmin(&values);
            curve_with_best(values, l, false)
        }
        _ => curve_with_best(vec![sorted[0]], 1, true),
    }
}

pub(crate) fn duan_psi_from_profile(p: &Profile) -> LowerBoundValue {
    let sorted = p.sorted_row_sums();
    let value = match p.min_off {
        Some(t) if t > 0.0 => lower_value(&sorted, p.min_diag, t),
        _ => *sorted.last().unwrap(),
    };
    LowerBoundValue {
        value,
        kind: LowerBoundKind::Rowsum,
    }
}

/// φ_1, …, φ_n. When N = 0 the curve holds only φ_1 = m_1 and is flagged
/// `degenerate`.
pub fn phi_curve(a: &NonnegMatrix) -> Result<UpperBoundCurve, BoundError> {
    let p = profile(a)?;
    Ok(phi_from_profile(a, &p))
}

/// ψ_n; equals m_n exactly when T = 0.
pub fn psi(a: &NonnegMatrix) -> Result<LowerBoundValue, BoundError> {
    let p = profile(a)?;
    Ok(psi_from_profile(&p))
}

/// Row-sum upper bounds Φ_1, …, Φ_n. `best_l` is the plain argmin.
pub fn duan_phi_curve(a: &NonnegMatrix) -> Result<UpperBoundCurve, BoundError> {
    let p = profile(a)?;
    Ok(duan_phi_from_profile(&p))
}

/// Row-sum lower bound Ψ_n.
pub fn duan_psi(a: &NonnegMatrix) -> Result<LowerBoundValue, BoundError> {
    let p = profile(a)?;
    Ok(duan_psi_from_profile(&p))
}

/// Index l (1-based) picked by the crossing criterion, at which φ attains its
/// minimum. On flat stretches this may be later than the first minimizer.
pub fn best_l(a: &NonnegMatrix) -> Result<usize, BoundError> {
    let p = profile(a)?;
    match p.max_off {
        Some(n_off) if n_off > 0.0 => Ok(phi_from_profile(a, &p).best_l),
        _ => Err(BoundError::ZeroOffDiagonal),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn assert_close(got: &[f64], want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len(), "{got:?} vs {want:?}");
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() <= tol, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn quadratic_bound_forms_agree() {
        let cases: [(f64, f64, f64, f64); 4] = [
            (4.6, 0.0, 10.0 / 3.0, 0.4),
            (1.0, 5.0, 0.5, 2.0),
            (3.0, 3.0, 1.0, 0.0),
            (2.0, 0.0, 3.0, 6.0),
        ];
        for (base, diag, w, ex) in cases {
            let direct =
                (base + diag - w + ((base - diag + w).powi(2) + 4.0 * w * ex).sqrt()) / 2.0;
            assert!((quadratic_bound(base, diag, w, ex) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn phi_of_a1_follows_the_theorem_formula() {
        // m = (5, 4.6, 4.6, 4.6): the excess Σ_{i<l}(m_i − m_l) is 0.4 for
        // every l ≥ 2, so φ_2 = φ_3 = φ_4.
        let c = phi_curve(&fixtures::a1()).unwrap();
        let phi2 = quadratic_bound(4.6, 0.0, 10.0 / 3.0, 0.4);
        assert!((phi2 - 4.7647).abs() < 1e-4);
        assert_close(&c.values, &[5.0, phi2, phi2, phi2], 1e-12);
        assert_eq!(c.best_l, 3);
        assert!((c.best_value - c.min()).abs() < 1e-12);
    }

    #[test]
    fn phi_of_a2() {
        let c = phi_curve(&fixtures::a2()).unwrap();
        assert_close(&c.values, &[3.0, 3.0, 3.0, 3.6904], 1e-4);
        assert_eq!(c.best_l, 3);
        assert_eq!(best_l(&fixtures::a2()).unwrap(), 3);
    }

    #[test]
    fn constant_matrix_is_flat() {
        let j = fixtures::all_ones(4);
        let c = phi_curve(&j).unwrap();
        assert_eq!(c.values, vec![4.0; 4]);
        assert_eq!(best_l(&j).unwrap(), 1);
        assert_eq!(duan_phi_curve(&j).unwrap().values, vec![4.0; 4]);
        assert_eq!(psi(&j).unwrap().value, 4.0);
        assert_eq!(duan_psi(&j).unwrap().value, 4.0);
    }

    #[test]
    fn psi_worked_values() {
        let v = psi(&fixtures::a1()).unwrap();
        assert!((v.value - (2.0 + 7f64.sqrt())).abs() < 1e-12);
        assert_eq!(v.kind, LowerBoundKind::Avg2);
        assert!((psi(&fixtures::a3_prime()).unwrap().value - 6.2506).abs() < 1e-4);
    }

    #[test]
    fn psi_with_zero_off_diagonal_is_m_n() {
        let a = fixtures::a2();
        assert_eq!(psi(&a).unwrap().value, 1.0);
    }

    #[test]
    fn duan_paper_values() {
        // Σ_{i<l}(r_i − r_l) on r = (3, 1, 1, 1) is 2 for every l ≥ 2.
        let c = duan_phi_curve(&fixtures::a2_prime()).unwrap();
        let s3 = 3f64.sqrt();
        assert_close(&c.values, &[3.0, s3, s3, s3], 1e-12);
        let c = duan_phi_curve(&fixtures::a1_prime()).unwrap();
        assert_close(&c.values, &[5.0, 5.0, 5.0, 4.7720], 1e-4);
        let v = duan_psi(&fixtures::a3()).unwrap();
        assert!((v.value - 6.3665).abs() < 1e-4);
        assert_eq!(v.kind, LowerBoundKind::Rowsum);
        assert!((duan_psi(&fixtures::a1_prime()).unwrap().value - 4.1623).abs() < 1e-4);
    }

    #[test]
    fn diagonal_matrix_gives_one_point_curve() {
        let d = NonnegMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 3.0]]).unwrap();
        let c = phi_curve(&d).unwrap();
        assert!(c.degenerate);
        assert_eq!(c.values, vec![3.0]);
        assert_eq!(best_l(&d), Err(BoundError::ZeroOffDiagonal));
        assert!(duan_phi_curve(&d).unwrap().degenerate);
    }

    #[test]
    fn one_by_one() {
        let a = NonnegMatrix::from_rows(&[vec![7.0]]).unwrap();
        assert_eq!(phi_curve(&a).unwrap().values, vec![7.0]);
        assert_eq!(psi(&a).unwrap().value, 7.0);
        assert_eq!(duan_phi_curve(&a).unwrap().values, vec![7.0]);
        assert_eq!(duan_psi(&a).unwrap().value, 7.0);
    }

    #[test]
    fn zero_row_is_an_error() {
        let a = NonnegMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            phi_curve(&a),
            Err(BoundError::Matrix(MatrixError::ZeroRowSum(2)))
        ));
    }

    #[test]
    fn crossing_criterion_on_a2() {
        let m = [3.0, 3.0, 3.0, 1.0];
        assert_eq!(crossing_criterion(&m, 0.0, 3.0, 2), 0.0);
        assert!(crossing_criterion(&m, 0.0, 3.0, 3) < 0.0);
    }
}
