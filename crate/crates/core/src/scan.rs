//! Seeded randomized comparison of the bound families.
//!
//! Instance `i` draws from ChaCha8 seeded with `seed` on stream `i`, so any
//! instance can be regenerated alone and results do not depend on platform
//! or evaluation order.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{build_matrix, Graph, GraphMatrixKind};
use crate::graph_bounds::{graph_bound_with_tol, GraphBound};
use crate::matrix::NonnegMatrix;
use crate::report::{matrix_report, BoundReport, Source, Winner};
use crate::Direction;

/// Largest tolerated sandwich violation, relative to max(1, ρ).
pub const VIOLATION_TOL: f64 = 1e-8;

/// Largest tolerated gap between closed-form graph bounds and the general engine.
pub const IDENTITY_TOL: f64 = 1e-12;

const MAX_CONNECT_ATTEMPTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Matrix,
    Graph,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub count: usize,
    pub seed: u64,
    pub n_min: usize,
    pub n_max: usize,
    pub density: f64,
    pub family: Family,
    /// Graph family only; all kinds when absent.
    pub kind: Option<GraphMatrixKind>,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScanError {
    #[error("count must be at least 1")]
    EmptyScan,
    #[error("invalid size range {0}..={1}")]
    BadRange(usize, usize),
    #[error("density must lie in [0, 1], got {0}")]
    BadDensity(f64),
    #[error("no connected graph on {n} vertices after {attempts} draws at density {density}")]
    NoConnectedGraph {
        n: usize,
        attempts: usize,
        density: f64,
    },
    #[error("instance {id}: {message}")]
    Evaluation { id: String, message: String },
    #[error("instance {}: invariant violated: {}", .0.id, .0.message)]
    Violation(Box<ViolationDump>),
}

/// Everything needed to reproduce a failing instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationDump {
    pub id: String,
    pub message: String,
    /// The instance in its file format (matrix text or edge list).
    pub instance: String,
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub id: String,
    pub n: usize,
    pub rho: f64,
    pub psi: f64,
    pub best_phi: f64,
    pub best_l: usize,
    pub duan_psi: f64,
    #[serde(rename = "best_Phi")]
    pub best_duan_phi: f64,
    pub winner: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WinCounts {
    pub avg2: usize,
    pub rowsum: usize,
    pub tie: usize,
}

impl WinCounts {
    fn add(&mut self, w: Winner) {
        match w {
            Winner::Avg2 => self.avg2 += 1,
            Winner::Rowsum => self.rowsum += 1,
            Winner::Tie => self.tie += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.avg2 + self.rowsum + self.tie
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateHits {
    pub phi: usize,
    pub psi: usize,
    pub duan_phi: usize,
    pub duan_psi: usize,
    /// Graph family: closed-form bounds whose general certificate holds.
    pub graph: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub seed: u64,
    pub count: usize,
    pub family: Family,
    /// Rows evaluated: `count` for matrices, `count` × kinds for graphs.
    pub evaluated: usize,
    /// Smaller best upper bound: φ vs Φ.
    pub upper_wins: WinCounts,
    /// Larger lower bound: ψ vs Ψ.
    pub lower_wins: WinCounts,
    pub certificate_hits: CertificateHits,
    pub max_violation: f64,
    /// Graph family only.
    pub max_instantiation_gap: f64,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanOutput {
    pub rows: Vec<ScanRow>,
    pub summary: ScanSummary,
}

pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Entries are 0 with probability 1 − `density`, else 1 or 2 with equal
/// odds; then a random directed Hamiltonian cycle sets its zero entries to 1.
pub fn random_matrix<R: Rng>(rng: &mut R, n: usize, density: f64) -> NonnegMatrix {
    let mut a = NonnegMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(density) {
                a.set(i, j, rng.gen_range(1..=2) as f64);
            }
        }
    }
    if n > 1 {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        for k in 0..n {
            let (u, v) = (perm[k], perm[(k + 1) % n]);
            if a.get(u, v) == 0.0 {
                a.set(u, v, 1.0);
            }
        }
    }
    a
}

/// Erdős–Rényi G(n, p), redrawn until connected.
pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Result<Graph, ScanError> {
    for _ in 0..MAX_CONNECT_ATTEMPTS {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, &edges).expect("generated edges are valid");
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(ScanError::NoConnectedGraph {
        n,
        attempts: MAX_CONNECT_ATTEMPTS,
        density: p,
    })
}

fn lower_winner(r: &BoundReport) -> Winner {
    let (p, d) = (r.psi.value, r.duan_psi.value);
    if crate::approx_eq(p, d, 1e-12) {
        Winner::Tie
    } else if p > d {
        Winner::Avg2
    } else {
        Winner::Rowsum
    }
}

fn row(id: String, r: &BoundReport) -> ScanRow {
    ScanRow {
        id,
        n: r.n,
        rho: r.rho.rho,
        psi: r.psi.value,
        best_phi: r.phi.best_value,
        best_l: r.phi.best_l,
        duan_psi: r.duan_psi.value,
        best_duan_phi: r.duan_phi.min(),
        winner: r.upper_winner().name().to_string(),
    }
}

struct Acc {
    rows: Vec<ScanRow>,
    summary: ScanSummary,
}

impl Acc {
    fn record(
        &mut self,
        id: String,
        r: &BoundReport,
        instance: impl Fn() -> String,
    ) -> Result<(), ScanError> {
        let s = &mut self.summary;
        s.evaluated += 1;
        s.upper_wins.add(r.upper_winner());
        s.lower_wins.add(lower_winner(r));
        let hit =
            |c: &Option<crate::EqualityCertificate>| c.as_ref().is_some_and(|c| c.verdict) as usize;
        s.certificate_hits.phi += hit(&r.certificates.phi);
        s.certificate_hits.duan_phi += hit(&r.certificates.duan_phi);
        s.certificate_hits.psi += r.certificates.psi.verdict as usize;
        s.certificate_hits.duan_psi += r.certificates.duan_psi.verdict as usize;
        let v = r.max_violation();
        s.max_violation = s.max_violation.max(v);
        if v > VIOLATION_TOL {
            return Err(violation(
                &id,
                format!("sandwich violated by {v:e}"),
                instance(),
            ));
        }
        self.rows.push(row(id, r));
        Ok(())
    }
}

fn violation(id: &str, message: String, instance: String) -> ScanError {
    ScanError::Violation(Box::new(ViolationDump {
        id: id.to_string(),
        message,
        instance,
    }))
}

fn eval_err(id: &str, e: impl std::fmt::Display) -> ScanError {
    ScanError::Evaluation {
        id: id.to_string(),
        message: e.to_string(),
    }
}

pub fn run_scan(cfg: &ScanConfig) -> Result<ScanOutput, ScanError> {
    if cfg.count == 0 {
        return Err(ScanError::EmptyScan);
    }
    let min_n = if cfg.family == Family::Graph { 2 } else { 1 };
    if cfg.n_min < min_n || cfg.n_min > cfg.n_max {
        return Err(ScanError::BadRange(cfg.n_min, cfg.n_max));
    }
    if !(0.0..=1.0).contains(&cfg.density) {
        return Err(ScanError::BadDensity(cfg.density));
    }
    let mut acc = Acc {
        rows: Vec::new(),
        summary: ScanSummary {
            seed: cfg.seed,
            count: cfg.count,
            family: cfg.family,
            evaluated: 0,
            upper_wins: WinCounts::default(),
            lower_wins: WinCounts::default(),
            certificate_hits: CertificateHits::default(),
            max_violation: 0.0,
            max_instantiation_gap: 0.0,
            failures: Vec::new(),
        },
    };
    for i in 0..cfg.count {
        let mut rng = instance_rng(cfg.seed, i as u64);
        let n = rng.gen_range(cfg.n_min..=cfg.n_max);
        match cfg.family {
            Family::Matrix => {
                let a = random_matrix(&mut rng, n, cfg.density);
                let id = i.to_string();
                let r = matrix_report(&a, Source::Matrix { path: None }, cfg.tol)
                    .map_err(|e| eval_err(&id, e))?;
                acc.record(id, &r, || a.to_text())?;
            }
            Family::Graph => {
                let g = random_connected_graph(&mut rng, n, cfg.density)?;
                let kinds = match cfg.kind {
                    Some(k) => vec![k],
                    None => GraphMatrixKind::ALL.to_vec(),
                };
                for kind in kinds {
                    scan_graph(&mut acc, i, &g, kind, cfg.tol)?;
                }
            }
        }
    }
    Ok(ScanOutput {
        rows: acc.rows,
        summary: acc.summary,
    })
}

fn scan_graph(
    acc: &mut Acc,
    i: usize,
    g: &Graph,
    kind: GraphMatrixKind,
    tol: f64,
) -> Result<(), ScanError> {
    let id = format!("{i}-{kind}");
    let a = build_matrix(g, kind).map_err(|e| eval_err(&id, e))?;
    let r =
        matrix_report(&a, Source::Graph { path: None, kind }, tol).map_err(|e| eval_err(&id, e))?;
    for direction in [Direction::Upper, Direction::Lower] {
        let gb = graph_bound_with_tol(g, kind, direction, tol).map_err(|e| eval_err(&id, e))?;
        let s = &mut acc.summary;
        s.max_instantiation_gap = s.max_instantiation_gap.max(gb.instantiation_gap);
        s.certificate_hits.graph += gb.general_certificate.verdict as usize;
        if gb.instantiation_gap > IDENTITY_TOL {
            return Err(violation(
                &id,
                format!(
                    "closed form differs from the general engine by {:e}",
                    gb.instantiation_gap
                ),
                g.to_text(),
            ));
        }
        let rho = gb.rho.rho;
        let scale = rho.max(1.0);
        let v = match &gb.bound {
            GraphBound::Upper(c) => c
                .values
                .iter()
                .map(|x| (rho - x) / scale)
                .fold(0.0, f64::max),
            GraphBound::Lower(x) => ((x.value - rho) / scale).max(0.0),
        };
        s.max_violation = s.max_violation.max(v);
        if v > VIOLATION_TOL {
            return Err(violation(
                &id,
                format!("graph bound violated by {v:e}"),
                g.to_text(),
            ));
        }
    }
    acc.record(id, &r, || g.to_text())
}

pub fn rows_to_csv(rows: &[ScanRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        let mut r = r.clone();
        for x in [
            &mut r.rho,
            &mut r.psi,
            &mut r.best_phi,
            &mut r.duan_psi,
            &mut r.best_duan_phi,
        ] {
            *x = crate::report::round_sig(*x);
        }
        w.serialize(r).unwrap();
    }
    if rows.is_empty() {
        return "id,n,rho,psi,best_phi,best_l,duan_psi,best_Phi,winner\n".into();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(family: Family, count: usize) -> ScanConfig {
        ScanConfig {
            count,
            seed: 42,
            n_min: 3,
            n_max: 8,
            density: 0.5,
            family,
            kind: None,
            tol: crate::DEFAULT_TOL,
        }
    }

    #[test]
    fn matrices_are_irreducible_with_small_entries() {
        let mut rng = instance_rng(7, 0);
        for _ in 0..50 {
            let a = random_matrix(&mut rng, 6, 0.2);
            assert!(crate::is_irreducible(&a));
            assert!(a
                .rows()
                .iter()
                .flatten()
                .all(|&x| x == 0.0 || x == 1.0 || x == 2.0));
        }
        let full = random_matrix(&mut rng, 4, 1.0);
        assert!(full.rows().iter().flatten().all(|&x| x > 0.0));
    }

    #[test]
    fn streams_are_independent_of_order() {
        let a = random_matrix(&mut instance_rng(1, 5), 5, 0.5);
        let _ = random_matrix(&mut instance_rng(1, 4), 5, 0.5);
        assert_eq!(a, random_matrix(&mut instance_rng(1, 5), 5, 0.5));
        assert_ne!(a, random_matrix(&mut instance_rng(1, 6), 5, 0.5));
    }

    #[test]
    fn matrix_scan_is_deterministic() {
        let a = run_scan(&cfg(Family::Matrix, 40)).unwrap();
        let b = run_scan(&cfg(Family::Matrix, 40)).unwrap();
        assert_eq!(rows_to_csv(&a.rows), rows_to_csv(&b.rows));
        assert_eq!(a.summary, b.summary);
        assert_eq!(a.summary.upper_wins.total(), 40);
        assert!(a.summary.max_violation <= VIOLATION_TOL);
    }

    #[test]
    fn graph_scan_checks_every_kind() {
        let out = run_scan(&cfg(Family::Graph, 10)).unwrap();
        assert_eq!(out.summary.evaluated, 50);
        assert!(out.summary.max_instantiation_gap <= IDENTITY_TOL);
        assert!(out.rows[0].id.ends_with("adjacency"));
    }

    #[test]
    fn rejects_bad_configs() {
        let mut c = cfg(Family::Matrix, 0);
        assert_eq!(run_scan(&c).unwrap_err(), ScanError::EmptyScan);
        c.count = 1;
        c.density = 1.5;
        assert_eq!(run_scan(&c).unwrap_err(), ScanError::BadDensity(1.5));
        c.density = 0.5;
        c.n_min = 9;
        assert_eq!(run_scan(&c).unwrap_err(), ScanError::BadRange(9, 8));
    }

    #[test]
    fn csv_header_matches_columns() {
        let out = run_scan(&cfg(Family::Matrix, 2)).unwrap();
        let text = rows_to_csv(&out.rows);
        assert!(text.starts_with("id,n,rho,psi,best_phi,best_l,duan_psi,best_Phi,winner\n"));
        assert_eq!(text.lines().count(), 3);
    }
}
