//! Closed-form bounds for the five graph matrices.
//!
//! Each bound is the general φ/ψ engine with parameters read off the graph:
//!
//! | kind | direction | diag | off | ratio |
//! |------|-----------|------|-----|-------|
//! | adjacency | upper | 0 | 1 | d_max/d_min |
//! | signless Laplacian | upper | d_max | 1 | d_max/d_min |
//! | distance | upper | 0 | diameter | D_max/D_min |
//! | distance | lower | 0 | 1 | D_min/D_max |
//! | distance signless Laplacian | upper | D_max | diameter | D_max/D_min |
//! | distance signless Laplacian | lower | D_min | 1 | D_min/D_max |
//! | reciprocal distance | upper | 0 | 1 | R_max/R_min |
//!
//! Lower bounds for the adjacency, signless Laplacian and reciprocal kinds are
//! the same engine with (S, T, c) taken from the graph and are reported as
//! plain instantiations (`stated_theorem = false`).
//!
//! The average 2-quantities are recomputed here from degrees, transmissions
//! and reciprocal transmissions, independently of the matrix route, and every
//! report records how far the two routes differ.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{
    analytic_best_l, is_constant_matrix, lower_certificate, lower_value, phi_from_profile,
    psi_from_profile, quadratic_bound, upper_certificate, upper_curve, BoundError, Direction,
    EqualityCertificate, LowerBoundKind, LowerBoundValue, UpperBoundCurve,
};
use crate::graph::{
    apsp, build_matrix, require_connected, DistanceData, Graph, GraphError, GraphMatrixKind,
};
use crate::matrix::{descending, profile, NonnegMatrix};
use crate::spectral::{spectral_radius, SpectralError, SpectralEstimate};
use crate::{approx_eq, CERT_RTOL, DEFAULT_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphBoundError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

/// (M, N, b) for upper bounds, (S, T, c) for lower bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParameters {
    pub diag: f64,
    pub off: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "direction")]
pub enum GraphBound {
    Upper(UpperBoundCurve),
    Lower(LowerBoundValue),
}

impl GraphBound {
    /// Best value of the curve, or the lower value.
    pub fn best(&self) -> f64 {
        match self {
            GraphBound::Upper(c) => c.best_value,
            GraphBound::Lower(v) => v.value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PredicateBranch {
    AllEqual,
    DominantVertex,
}

/// The vertex singled out by a "X_1 = n−1 > X_2 = … = X_n" condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredicateWitness {
    /// 1-based.
    pub vertex: usize,
    pub value: f64,
    /// Values of the remaining vertices, in vertex order.
    pub others: Vec<f64>,
}

/// The graph-level equality condition printed with a theorem. Reported only;
/// equality claims rest on [`EqualityCertificate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatedPredicate {
    pub condition: String,
    pub holds: bool,
    pub branch: Option<PredicateBranch>,
    pub witness: Option<PredicateWitness>,
    /// Whether the dominant-vertex branch also holds when vertex 1 is read as
    /// the vertex with the largest average 2-quantity.
    pub holds_with_m_sorted_vertex: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphBoundReport {
    pub kind: GraphMatrixKind,
    pub direction: Direction,
    /// Whether the bound is a stated theorem rather than a plain
    /// instantiation of the general engine.
    pub stated_theorem: bool,
    pub bound: GraphBound,
    pub parameters: BoundParameters,
    /// Average 2-quantities of the vertices, in vertex order.
    pub avg2: Vec<f64>,
    pub stated_predicate: Option<StatedPredicate>,
    pub general_certificate: EqualityCertificate,
    pub rho: SpectralEstimate,
    /// bound − ρ (nonnegative for upper, nonpositive for lower).
    pub gap: f64,
    /// Largest relative difference between the closed form and the general
    /// engine applied to the built matrix.
    pub instantiation_gap: f64,
}

/// Graph-side data every kind draws from.
struct GraphData {
    degrees: Vec<f64>,
    dist: Option<DistanceData>,
    reciprocal: Option<Vec<f64>>,
}

impl GraphData {
    fn new(g: &Graph, kind: GraphMatrixKind) -> Result<Self, GraphError> {
        let degrees: Vec<f64> = g.degrees().into_iter().map(|d| d as f64).collect();
        let (dist, reciprocal) = if kind.needs_connectivity() {
            let d = apsp(g);
            require_connected(&d)?;
            let n = g.n();
            let r: Vec<f64> = (0..n)
                .map(|i| {
                    (0..n)
                        .filter(|&j| j != i)
                        .map(|j| 1.0 / d.d(i, j) as f64)
                        .sum()
                })
                .collect();
            (Some(d), Some(r))
        } else {
            (None, None)
        };
        Ok(Self {
            degrees,
            dist,
            reciprocal,
        })
    }

    fn transmissions(&self) -> Vec<f64> {
        self.dist
            .as_ref()
            .expect("distance kind")
            .transmissions
            .iter()
            .map(|&t| t as f64)
            .collect()
    }
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Average 2-degree, 2-transmission, etc. computed from graph data.
fn graph_avg2(g: &Graph, kind: GraphMatrixKind, data: &GraphData) -> Vec<f64> {
    let n = g.n();
    match kind {
        GraphMatrixKind::Adjacency | GraphMatrixKind::SignlessLaplacian => {
            let d = &data.degrees;
            (0..n)
                .map(|i| {
                    let avg: f64 = g.neighbors(i).iter().map(|&j| d[j]).sum::<f64>() / d[i];
                    if kind == GraphMatrixKind::SignlessLaplacian {
                        d[i] + avg
                    } else {
                        avg
                    }
                })
                .collect()
        }
        GraphMatrixKind::Distance | GraphMatrixKind::DistanceSignlessLaplacian => {
            let dd = data.dist.as_ref().unwrap();
            let t = data.transmissions();
            (0..n)
                .map(|i| {
                    let s: f64 = (0..n).map(|j| dd.d(i, j) as f64 * t[j]).sum::<f64>() / t[i];
                    if kind == GraphMatrixKind::DistanceSignlessLaplacian {
                        t[i] + s
                    } else {
                        s
                    }
                })
                .collect()
        }
        GraphMatrixKind::ReciprocalDistance => {
            let dd = data.dist.as_ref().unwrap();
            let r = data.reciprocal.as_ref().unwrap();
            (0..n)
                .map(|i| {
                    (0..n)
                        .filter(|&j| j != i)
                        .map(|j| r[j] / dd.d(i, j) as f64)
                        .sum::<f64>()
                        / r[i]
                })
                .collect()
        }
    }
}

/// Parameters from graph invariants, per the table in the module docs.
fn graph_parameters(
    g: &Graph,
    kind: GraphMatrixKind,
    direction: Direction,
    data: &GraphData,
) -> BoundParameters {
    let n = g.n();
    let complete = g.edge_count() == n * (n - 1) / 2;
    let (dmax, dmin) = (max_of(&data.degrees), min_of(&data.degrees));
    let (up, low) = match kind {
        GraphMatrixKind::Adjacency => {
            let t = if complete { 1.0 } else { 0.0 };
            ((0.0, 1.0, dmax / dmin), (0.0, t, dmin / dmax))
        }
        GraphMatrixKind::SignlessLaplacian => {
            let t = if complete { 1.0 } else { 0.0 };
            ((dmax, 1.0, dmax / dmin), (dmin, t, dmin / dmax))
        }
        GraphMatrixKind::Distance | GraphMatrixKind::DistanceSignlessLaplacian => {
            let t = data.transmissions();
            let (tmax, tmin) = (max_of(&t), min_of(&t));
            let diam = data.dist.as_ref().unwrap().diameter as f64;
            if kind == GraphMatrixKind::Distance {
                ((0.0, diam, tmax / tmin), (0.0, 1.0, tmin / tmax))
            } else {
                ((tmax, diam, tmax / tmin), (tmin, 1.0, tmin / tmax))
            }
        }
        GraphMatrixKind::ReciprocalDistance => {
            let r = data.reciprocal.as_ref().unwrap();
            let (rmax, rmin) = (max_of(r), min_of(r));
            let diam = data.dist.as_ref().unwrap().diameter as f64;
            ((0.0, 1.0, rmax / rmin), (0.0, 1.0 / diam, rmin / rmax))
        }
    };
    let (diag, off, ratio) = match direction {
        Direction::Upper => up,
        Direction::Lower => low,
    };
    BoundParameters { diag, off, ratio }
}

fn is_stated(kind: GraphMatrixKind, direction: Direction) -> bool {
    match direction {
        Direction::Upper => true,
        Direction::Lower => matches!(
            kind,
            GraphMatrixKind::Distance | GraphMatrixKind::DistanceSignlessLaplacian
        ),
    }
}

/// Which quantity, if any, the dominant-vertex branch of the stated
/// condition is about, and whether that vertex's value is above (true) or
/// below (false) the rest.
fn dominant_condition(kind: GraphMatrixKind, direction: Direction) -> Option<(&'static str, bool)> {
    match (kind, direction) {
        (GraphMatrixKind::Adjacency | GraphMatrixKind::SignlessLaplacian, Direction::Upper) => {
            Some(("d", true))
        }
        (GraphMatrixKind::ReciprocalDistance, Direction::Upper) => Some(("R", true)),
        (
            GraphMatrixKind::Distance | GraphMatrixKind::DistanceSignlessLaplacian,
            Direction::Lower,
        ) => Some(("D", false)),
        _ => None,
    }
}

fn dominant_holds(values: &[f64], v: usize, above: bool) -> bool {
    let n = values.len();
    let target = (n - 1) as f64;
    if !approx_eq(values[v], target, CERT_RTOL) {
        return false;
    }
    let others: Vec<f64> = (0..n).filter(|&j| j != v).map(|j| values[j]).collect();
    let first = others[0];
    others.iter().all(|&x| approx_eq(x, first, CERT_RTOL))
        && if above {
            target > first && !approx_eq(target, first, CERT_RTOL)
        } else {
            target < first && !approx_eq(target, first, CERT_RTOL)
        }
}

fn witness(values: &[f64], v: usize) -> PredicateWitness {
    PredicateWitness {
        vertex: v + 1,
        value: values[v],
        others: (0..values.len())
            .filter(|&j| j != v)
            .map(|j| values[j])
            .collect(),
    }
}

fn predicate_from_parts(
    kind: GraphMatrixKind,
    direction: Direction,
    avg2: &[f64],
    data: &GraphData,
) -> Option<StatedPredicate> {
    if !is_stated(kind, direction) {
        return None;
    }
    let m_min = min_of(avg2);
    let all_equal = avg2.iter().all(|&m| approx_eq(m, m_min, CERT_RTOL));
    let dominant = dominant_condition(kind, direction);
    let condition = match dominant {
        Some((q, true)) => format!("m_1=...=m_n or {q}_1=n-1>{q}_2=...={q}_n"),
        Some((q, false)) => format!("m_1=...=m_n or {q}_1=n-1<{q}_2=...={q}_n"),
        None => "m_1=...=m_n".to_string(),
    };
    let mut pred = StatedPredicate {
        condition,
        holds: all_equal,
        branch: all_equal.then_some(PredicateBranch::AllEqual),
        witness: None,
        holds_with_m_sorted_vertex: false,
    };
    if let Some((q, above)) = dominant {
        let values = match q {
            "d" => data.degrees.clone(),
            "D" => data.transmissions(),
            _ => data.reciprocal.clone().unwrap(),
        };
        let first_by_m = descending(avg2)[0];
        pred.holds_with_m_sorted_vertex = dominant_holds(&values, first_by_m, above);
        let found = (0..values.len()).find(|&v| dominant_holds(&values, v, above));
        if let Some(v) = found {
            if !pred.holds {
                pred.holds = true;
                pred.branch = Some(PredicateBranch::DominantVertex);
            }
            pred.witness = Some(witness(&values, v));
        } else {
            pred.witness = Some(witness(&values, first_by_m));
        }
    }
    Some(pred)
}

/// The equality condition printed with the theorem for (`kind`,
/// `direction`); `None` when no theorem is stated for that pair. The
/// dominant vertex may be any vertex; the report also says whether the
/// vertex with the largest average 2-quantity satisfies it.
pub fn stated_equality_predicate(
    g: &Graph,
    kind: GraphMatrixKind,
    direction: Direction,
) -> Result<Option<StatedPredicate>, GraphError> {
    require_connected(&apsp(g))?;
    let data = GraphData::new(g, kind)?;
    if g.n() < 2 {
        return Err(GraphError::TooFewVertices);
    }
    if !kind.needs_connectivity() {
        if let Some(v) = data.degrees.iter().position(|&d| d == 0.0) {
            return Err(GraphError::IsolatedVertex(v + 1));
        }
    }
    let avg2 = graph_avg2(g, kind, &data);
    Ok(predicate_from_parts(kind, direction, &avg2, &data))
}

fn closed_form_bound(
    avg2: &[f64],
    params: BoundParameters,
    direction: Direction,
    a: &NonnegMatrix,
) -> GraphBound {
    let order = descending(avg2);
    let sorted: Vec<f64> = order.iter().map(|&i| avg2[i]).collect();
    let weight = params.off * params.ratio;
    match direction {
        Direction::Upper => {
            let values = upper_curve(&sorted, params.diag, weight);
            let extremal = is_constant_matrix(a, params.diag, params.off);
            let best_l = analytic_best_l(&sorted, params.diag, weight, extremal, &values);
            GraphBound::Upper(UpperBoundCurve {
                best_value: values[best_l - 1],
                values,
                best_l,
                degenerate: false,
            })
        }
        Direction::Lower => GraphBound::Lower(LowerBoundValue {
            value: lower_value(&sorted, params.diag, weight),
            kind: LowerBoundKind::Avg2,
        }),
    }
}

fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

pub fn graph_bound(
    g: &Graph,
    kind: GraphMatrixKind,
    direction: Direction,
) -> Result<GraphBoundReport, GraphBoundError> {
    graph_bound_with_tol(g, kind, direction, DEFAULT_TOL)
}

pub fn graph_bound_with_tol(
    g: &Graph,
    kind: GraphMatrixKind,
    direction: Direction,
    tol: f64,
) -> Result<GraphBoundReport, GraphBoundError> {
    if g.n() < 2 {
        return Err(GraphError::TooFewVertices.into());
    }
    let a = build_matrix(g, kind)?;
    let data = GraphData::new(g, kind)?;
    let avg2 = graph_avg2(g, kind, &data);
    let parameters = graph_parameters(g, kind, direction, &data);
    let bound = closed_form_bound(&avg2, parameters, direction, &a);

    let p = profile(&a).map_err(BoundError::from)?;
    let instantiation_gap = match (&bound, direction) {
        (GraphBound::Upper(c), _) => {
            let general = phi_from_profile(&a, &p);
            c.values
                .iter()
                .zip(&general.values)
                .map(|(x, y)| rel_diff(*x, *y))
                .fold(0.0, f64::max)
        }
        (GraphBound::Lower(v), _) => rel_diff(v.value, psi_from_profile(&p).value),
    };

    let general_certificate = match direction {
        Direction::Upper => upper_certificate(&a, bound_best_l(&bound)),
        Direction::Lower => lower_certificate(&a),
    }
    .or_else(|e| match e {
        BoundError::RefusedReducible => Ok(EqualityCertificate::refused()),
        other => Err(other),
    })?;

    let stated_predicate = if data
        .dist
        .as_ref()
        .map_or_else(|| g.is_connected(), |d| d.connected)
    {
        predicate_from_parts(kind, direction, &avg2, &data)
    } else {
        None
    };

    let rho = spectral_radius(&a, tol)?;
    Ok(GraphBoundReport {
        kind,
        direction,
        stated_theorem: is_stated(kind, direction),
        gap: bound.best() - rho.rho,
        bound,
        parameters,
        avg2,
        stated_predicate,
        general_certificate,
        rho,
        instantiation_gap,
    })
}

fn bound_best_l(b: &GraphBound) -> usize {
    match b {
        GraphBound::Upper(c) => c.best_l,
        GraphBound::Lower(_) => 1,
    }
}

/// The adjacency bound with Σ_{i<l}(m_i − m_l) replaced by (l−1)(m_1 − m_l).
pub fn adjacency_upper_simple(g: &Graph, l: usize) -> Result<f64, GraphError> {
    let n = g.n();
    if n < 2 {
        return Err(GraphError::TooFewVertices);
    }
    if l == 0 || l > n {
        return Err(GraphError::InvalidIndex { l, n });
    }
    let data = GraphData::new(g, GraphMatrixKind::Adjacency)?;
    if let Some(v) = data.degrees.iter().position(|&d| d == 0.0) {
        return Err(GraphError::IsolatedVertex(v + 1));
    }
    let avg2 = graph_avg2(g, GraphMatrixKind::Adjacency, &data);
    let mut sorted = avg2.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let b = max_of(&data.degrees) / min_of(&data.degrees);
    let (m1, ml) = (sorted[0], sorted[l - 1]);
    Ok(quadratic_bound(ml, 0.0, b, (l - 1) as f64 * (m1 - ml)))
}
