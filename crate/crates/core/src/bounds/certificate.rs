//! Structural equality certificates for irreducible matrices.
//!
//! A certificate never looks at ρ. It checks the conditions under which a
//! bound is attained: either the key sequence (m, or r for the row-sum
//! bounds) is constant, or for the first t−1 rows in descending key order
//!
//! - (i) the diagonal entry is the extreme diagonal value,
//! - (ii) the remaining keys m_t = … = m_n coincide,
//! - (iii) every entry a_ik in those columns (k ≠ i) is the extreme
//!   off-diagonal value and, for the average 2-row sum bounds,
//!   r_k / r_i is the extreme row-sum ratio.
//!
//! The rows are taken as the set {i : key_i > min key}, which is exactly the
//! first t−1 rows for the only t that can satisfy (ii), whatever the tie
//! order of the sort.

use serde::{Deserialize, Serialize};

use super::{is_constant_matrix, BoundError, Direction};
use crate::matrix::{profile, NonnegMatrix, Profile};
use crate::structure::is_irreducible;
use crate::{approx_eq, CERT_RTOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateReason {
    AllMEqual,
    ConditionsT,
    AllREqual,
    RefusedReducible,
    Fails,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub condition: String,
    pub passed: bool,
    /// First violating (row, column), 1-based.
    pub violation: Option<(usize, usize)>,
}

impl ConditionCheck {
    fn new(condition: &str, violation: Option<(usize, usize)>) -> Self {
        Self {
            condition: condition.to_string(),
            passed: violation.is_none(),
            violation,
        }
    }

    fn flag(condition: &str, passed: bool) -> Self {
        Self {
            condition: condition.to_string(),
            passed,
            violation: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EqualityCertificate {
    pub verdict: bool,
    pub reason: CertificateReason,
    /// Witness t (1-based, in 2..=n); present iff `reason` is `ConditionsT`.
    pub t: Option<usize>,
    pub conditions: Vec<ConditionCheck>,
}

impl EqualityCertificate {
    pub fn refused() -> Self {
        Self {
            verdict: false,
            reason: CertificateReason::RefusedReducible,
            t: None,
            conditions: Vec::new(),
        }
    }
}

struct Rule<'a> {
    key: &'a [f64],
    all_equal: CertificateReason,
    diag: f64,
    off: f64,
    /// Required r_k / r_i; `None` for the row-sum bounds.
    ratio: Option<f64>,
    /// Largest admissible t.
    t_max: usize,
    /// Lower bounds additionally need T > 0.
    need_positive_off: bool,
}

fn certify(a: &NonnegMatrix, p: &Profile, rule: Rule<'_>) -> EqualityCertificate {
    let n = a.n();
    let key_min = rule.key.iter().cloned().fold(f64::INFINITY, f64::min);
    let dominant: Vec<usize> = (0..n)
        .filter(|&i| !approx_eq(rule.key[i], key_min, CERT_RTOL))
        .collect();
    if dominant.is_empty() {
        return EqualityCertificate {
            verdict: true,
            reason: rule.all_equal,
            t: None,
            conditions: vec![ConditionCheck::flag("all-equal", true)],
        };
    }

    let t = dominant.len() + 1;
    let mut conditions = vec![ConditionCheck::flag("all-equal", false)];
    if rule.need_positive_off {
        conditions.push(ConditionCheck::flag("T>0", rule.off > 0.0));
    }
    conditions.push(ConditionCheck::flag(
        &format!("t={t}<={}", rule.t_max),
        t <= rule.t_max,
    ));

    let diag_bad = dominant
        .iter()
        .find(|&&i| !approx_eq(a.get(i, i), rule.diag, CERT_RTOL))
        .map(|&i| (i + 1, i + 1));
    conditions.push(ConditionCheck::new("(i)", diag_bad));

    // holds by the choice of the dominant set
    conditions.push(ConditionCheck::flag("(ii)", true));

    let mut off_bad = None;
    'rows: for i in 0..n {
        for &k in dominant.iter().filter(|&&k| k != i) {
            let entry_ok = approx_eq(a.get(i, k), rule.off, CERT_RTOL);
            let ratio_ok = rule
                .ratio
                .is_none_or(|b| approx_eq(p.row_sums[k] / p.row_sums[i], b, CERT_RTOL));
            if !(entry_ok && ratio_ok) {
                off_bad = Some((i + 1, k + 1));
                break 'rows;
            }
        }
    }
    conditions.push(ConditionCheck::new("(iii)", off_bad));

    let verdict = conditions.iter().skip(1).all(|c| c.passed);
    EqualityCertificate {
        verdict,
        reason: if verdict {
            CertificateReason::ConditionsT
        } else {
            CertificateReason::Fails
        },
        t: verdict.then_some(t),
        conditions,
    }
}

fn irreducible_profile(a: &NonnegMatrix) -> Result<Profile, BoundError> {
    if !is_irreducible(a) {
        return Err(BoundError::RefusedReducible);
    }
    Ok(profile(a)?)
}

fn positive_max_off(p: &Profile) -> Result<f64, BoundError> {
    match p.max_off {
        Some(v) if v > 0.0 => Ok(v),
        // n = 1: only the all-equal branch can apply
        None => Ok(0.0),
        Some(_) => Err(BoundError::ZeroOffDiagonal),
    }
}

fn check_l(l: usize, n: usize) -> Result<(), BoundError> {
    if l == 0 || l > n {
        Err(BoundError::InvalidIndex { l, n })
    } else {
        Ok(())
    }
}

/// Whether ρ(A) = φ_l, decided structurally.
pub fn upper_certificate(a: &NonnegMatrix, l: usize) -> Result<EqualityCertificate, BoundError> {
    check_l(l, a.n())?;
    let p = irreducible_profile(a)?;
    let off = positive_max_off(&p)?;
    Ok(certify(
        a,
        &p,
        Rule {
            key: &p.avg2,
            all_equal: CertificateReason::AllMEqual,
            diag: p.max_diag,
            off,
            ratio: Some(p.max_ratio),
            t_max: l,
            need_positive_off: false,
        },
    ))
}

/// Whether ρ(A) = ψ_n, decided structurally.
pub fn lower_certificate(a: &NonnegMatrix) -> Result<EqualityCertificate, BoundError> {
    let p = irreducible_profile(a)?;
    Ok(certify(
        a,
        &p,
        Rule {
            key: &p.avg2,
            all_equal: CertificateReason::AllMEqual,
            diag: p.min_diag,
            off: p.min_off.unwrap_or(0.0),
            ratio: Some(p.min_ratio),
            t_max: a.n(),
            need_positive_off: true,
        },
    ))
}

/// Whether ρ(A) = Φ_l, decided structurally.
pub fn duan_upper_certificate(
    a: &NonnegMatrix,
    l: usize,
) -> Result<EqualityCertificate, BoundError> {
    check_l(l, a.n())?;
    let p = irreducible_profile(a)?;
    let off = positive_max_off(&p)?;
    Ok(certify(
        a,
        &p,
        Rule {
            key: &p.row_sums,
            all_equal: CertificateReason::AllREqual,
            diag: p.max_diag,
            off,
            ratio: None,
            t_max: l,
            need_positive_off: false,
        },
    ))
}

/// Whether ρ(A) = Ψ_n, decided structurally.
pub fn duan_lower_certificate(a: &NonnegMatrix) -> Result<EqualityCertificate, BoundError> {
    let p = irreducible_profile(a)?;
    Ok(certify(
        a,
        &p,
        Rule {
            key: &p.row_sums,
            all_equal: CertificateReason::AllREqual,
            diag: p.min_diag,
            off: p.min_off.unwrap_or(0.0),
            ratio: None,
            t_max: a.n(),
            need_positive_off: true,
        },
    ))
}

/// The t = 2 form of the certificate for symmetric matrices, read on the
/// first row in descending m order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetricConditions {
    /// (i″): that row's diagonal is the extreme diagonal value and its
    /// off-diagonal row and column entries are the extreme off-diagonal value.
    pub first_row_extreme: bool,
    /// (ii″): r_2 = … = r_n.
    pub rest_row_sums_equal: bool,
    /// (iii″): m_2 = … = m_n.
    pub rest_avg2_equal: bool,
    /// A is the constant-diagonal, constant-off-diagonal matrix (every t ≥ 3
    /// case collapses to it).
    pub constant_matrix: bool,
}

impl SymmetricConditions {
    pub fn all(&self) -> bool {
        self.first_row_extreme && self.rest_row_sums_equal && self.rest_avg2_equal
    }
}

pub fn symmetric_certificate_form(
    a: &NonnegMatrix,
    direction: Direction,
) -> Result<SymmetricConditions, BoundError> {
    if !a.is_symmetric(1e-12) {
        return Err(BoundError::NotSymmetric);
    }
    let p = irreducible_profile(a)?;
    let (diag, off) = match direction {
        Direction::Upper => (p.max_diag, p.max_off.unwrap_or(0.0)),
        Direction::Lower => (p.min_diag, p.min_off.unwrap_or(0.0)),
    };
    let n = a.n();
    let first = p.order[0];
    let first_row_extreme = approx_eq(a.get(first, first), diag, CERT_RTOL)
        && (0..n).filter(|&j| j != first).all(|j| {
            approx_eq(a.get(first, j), off, CERT_RTOL) && approx_eq(a.get(j, first), off, CERT_RTOL)
        });
    let rest = &p.order[1..];
    let all_same = |v: &[f64]| {
        rest.first()
            .is_none_or(|&r0| rest.iter().all(|&i| approx_eq(v[i], v[r0], CERT_RTOL)))
    };
    Ok(SymmetricConditions {
        first_row_extreme,
        rest_row_sums_equal: all_same(&p.row_sums),
        rest_avg2_equal: all_same(&p.avg2),
        constant_matrix: is_constant_matrix(a, diag, off),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    /// Q(W_6): hub 0 joined to the 5-cycle 1..5.
    fn wheel6_signless_laplacian() -> NonnegMatrix {
        let mut rows = vec![vec![0.0; 6]; 6];
        rows[0][0] = 5.0;
        for i in 1..6 {
            rows[0][i] = 1.0;
            rows[i][0] = 1.0;
            rows[i][i] = 3.0;
            let next = if i == 5 { 1 } else { i + 1 };
            rows[i][next] = 1.0;
            rows[next][i] = 1.0;
        }
        NonnegMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn constant_matrix_certifies_everywhere() {
        let j = fixtures::all_ones(4);
        for l in 1..=4 {
            let c = upper_certificate(&j, l).unwrap();
            assert!(c.verdict);
            assert_eq!(c.reason, CertificateReason::AllMEqual);
            assert_eq!(c.t, None);
        }
        let c = lower_certificate(&j).unwrap();
        assert_eq!((c.verdict, c.reason), (true, CertificateReason::AllMEqual));
        assert_eq!(
            duan_lower_certificate(&j).unwrap().reason,
            CertificateReason::AllREqual
        );
    }

    #[test]
    fn a1_upper_fails_lower_passes() {
        let c = upper_certificate(&fixtures::a1(), 4).unwrap();
        assert!(!c.verdict);
        assert_eq!(c.reason, CertificateReason::Fails);
        let iii = c
            .conditions
            .iter()
            .find(|c| c.condition == "(iii)")
            .unwrap();
        // a_21 = 1 ≠ N = 2
        assert_eq!(iii.violation, Some((2, 1)));

        let c = lower_certificate(&fixtures::a1()).unwrap();
        assert!(c.verdict, "{c:?}");
        assert_eq!(c.reason, CertificateReason::ConditionsT);
        assert_eq!(c.t, Some(2));
    }

    #[test]
    fn a3_prime_lower_fails() {
        let c = lower_certificate(&fixtures::a3_prime()).unwrap();
        assert!(!c.verdict);
        assert_eq!(c.t, None);
    }

    #[test]
    fn wheel_upper_certificate() {
        let q = wheel6_signless_laplacian();
        let c = upper_certificate(&q, 2).unwrap();
        assert!(c.verdict, "{c:?}");
        assert_eq!(c.t, Some(2));
        // l = 1 leaves no room for t
        assert!(!upper_certificate(&q, 1).unwrap().verdict);
    }

    #[test]
    fn reducible_is_refused() {
        let d = NonnegMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(lower_certificate(&d), Err(BoundError::RefusedReducible));
        let t = NonnegMatrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(upper_certificate(&t, 1), Err(BoundError::RefusedReducible));
        assert_eq!(
            upper_certificate(&fixtures::a1(), 5),
            Err(BoundError::InvalidIndex { l: 5, n: 4 })
        );
    }

    #[test]
    fn lower_needs_positive_off_diagonal() {
        // A(K_{1,3}): irreducible, T = 0, m not constant
        let c = lower_certificate(&fixtures::a2()).unwrap();
        assert!(!c.verdict);
        let tpos = c.conditions.iter().find(|c| c.condition == "T>0").unwrap();
        assert!(!tpos.passed);
    }

    #[test]
    fn duan_certificates_on_a2_prime() {
        // ρ = √3 = Φ_2: r = (3,1,1,1), a_11 = 0 = M, column 1 entries all 1 = N
        let c = duan_upper_certificate(&fixtures::a2_prime(), 2).unwrap();
        assert!(c.verdict, "{c:?}");
        assert_eq!(c.t, Some(2));
    }

    #[test]
    fn symmetric_forms() {
        let s = symmetric_certificate_form(&fixtures::a1(), Direction::Lower).unwrap();
        assert!(s.first_row_extreme && s.rest_row_sums_equal && s.rest_avg2_equal);
        assert!(!s.constant_matrix);

        let s = symmetric_certificate_form(&fixtures::all_ones(4), Direction::Upper).unwrap();
        assert!(s.constant_matrix && s.all());

        let s = symmetric_certificate_form(&fixtures::a2_prime(), Direction::Upper).unwrap();
        assert!(!s.first_row_extreme);

        assert_eq!(
            symmetric_certificate_form(&fixtures::a3(), Direction::Upper),
            Err(BoundError::NotSymmetric)
        );
    }
}
