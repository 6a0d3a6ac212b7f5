mod common;

use proptest::prelude::*;

use common::{eps, oracle, rel_close, rho};
use specbound::bounds::crossing_criterion;
use specbound::graph_bounds::{graph_bound, GraphBound};
use specbound::report::{matrix_report, to_json, BoundReport, Source};
use specbound::{
    build_matrix, duan_phi_curve, duan_psi, lower_certificate, parse_edge_list, phi_curve, profile,
    psi, upper_certificate, Direction, Graph, GraphMatrixKind, NonnegMatrix, DEFAULT_TOL,
};

const ENTRY_VALUES: [f64; 6] = [0.0, 0.0, 0.5, 1.0, 2.0, 3.75];

/// Square nonnegative matrix with a Hamiltonian cycle of positive entries,
/// so it is irreducible with positive row sums.
fn irreducible(max_n: usize) -> impl Strategy<Value = NonnegMatrix> {
    (2..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(proptest::sample::select(&ENTRY_VALUES[..]), n * n),
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            )
        })
        .prop_map(|(n, mut data, perm)| {
            for k in 0..n {
                let (u, v) = (perm[k], perm[(k + 1) % n]);
                if data[u * n + v] == 0.0 {
                    data[u * n + v] = 1.0;
                }
            }
            NonnegMatrix::new(n, data).unwrap()
        })
}

/// Any nonnegative matrix with positive row sums (possibly reducible).
fn positive_rows(max_n: usize) -> impl Strategy<Value = NonnegMatrix> {
    (1..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(proptest::sample::select(&ENTRY_VALUES[..]), n * n),
            )
        })
        .prop_map(|(n, mut data)| {
            for i in 0..n {
                if data[i * n..(i + 1) * n].iter().all(|&x| x == 0.0) {
                    data[i * n + i] = 1.0;
                }
            }
            NonnegMatrix::new(n, data).unwrap()
        })
}

fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(any::<bool>(), n * (n - 1) / 2),
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            )
        })
        .prop_map(|(n, bits, perm)| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            // a random spanning path keeps it connected
            for w in perm.windows(2) {
                let e = (w[0].min(w[1]), w[0].max(w[1]));
                if !edges.contains(&e) {
                    edges.push(e);
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
}

fn report(a: &NonnegMatrix) -> BoundReport {
    matrix_report(a, Source::Matrix { path: None }, DEFAULT_TOL).unwrap()
}

fn assert_sandwiches(a: &NonnegMatrix) -> Result<(), TestCaseError> {
    let r = report(a);
    let (rho, e) = (r.rho.rho, eps(r.rho.rho));
    for &v in r.phi.values.iter().chain(&r.duan_phi.values) {
        prop_assert!(rho <= v + e, "upper {v} below rho {rho}");
    }
    prop_assert!(r.psi.value - e <= rho);
    prop_assert!(r.duan_psi.value - e <= rho);
    let p = profile(a).unwrap();
    prop_assert!(p.min_row_sum() - e <= rho && rho <= p.max_row_sum() + e);
    prop_assert!(p.min_avg2() - e <= rho && rho <= p.max_avg2() + e);
    Ok(())
}

// the oracle itself, on closed forms
#[test]
fn char_poly_of_two_by_two() {
    // [[1,2],[3,4]] -> x^2 - 5x - 2
    let p = oracle::char_poly(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
    let f: Vec<f64> = p
        .iter()
        .map(|c| num_traits::ToPrimitive::to_f64(c).unwrap())
        .collect();
    assert_eq!(f, vec![-2.0, -5.0, 1.0]);
}

#[test]
fn perron_root_closed_forms() {
    let star = vec![
        vec![0.0, 1.0, 1.0, 1.0],
        vec![1.0, 0.0, 0.0, 0.0],
        vec![1.0, 0.0, 0.0, 0.0],
        vec![1.0, 0.0, 0.0, 0.0],
    ];
    assert!((oracle::perron_root(&star) - 3f64.sqrt()).abs() < 1e-12);
    let j4 = vec![vec![1.0; 4]; 4];
    assert!((oracle::perron_root(&j4) - 4.0).abs() < 1e-12);
    // repeated Perron root from two identical diagonal blocks
    let blocks = vec![
        vec![0.0, 2.0, 0.0, 0.0],
        vec![2.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 2.0],
        vec![0.0, 0.0, 2.0, 0.0],
    ];
    assert!((oracle::perron_root(&blocks) - 2.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn sandwich_on_irreducible(a in irreducible(9)) {
        assert_sandwiches(&a)?;
    }

    #[test]
    fn sandwich_on_any_positive_row_sums(a in positive_rows(7)) {
        assert_sandwiches(&a)?;
    }

    #[test]
    fn power_iteration_matches_oracle(a in positive_rows(6)) {
        let exact = oracle::perron_root(&a.rows());
        let got = rho(&a);
        prop_assert!(rel_close(got, exact, 1e-8) || (got - exact).abs() < 1e-12, "{got} vs {exact}");
    }

    #[test]
    fn bounds_ignore_relabelling(
        (a, perm) in irreducible(8).prop_flat_map(|a| {
            let n = a.n();
            (Just(a), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
    ) {
        let b = a.permuted(&perm);
        let (pa, pb) = (phi_curve(&a).unwrap(), phi_curve(&b).unwrap());
        for (x, y) in pa.values.iter().zip(&pb.values) {
            prop_assert!(rel_close(*x, *y, 1e-12));
        }
        prop_assert!(rel_close(psi(&a).unwrap().value, psi(&b).unwrap().value, 1e-12));
        let (da, db) = (duan_phi_curve(&a).unwrap(), duan_phi_curve(&b).unwrap());
        for (x, y) in da.values.iter().zip(&db.values) {
            prop_assert!(rel_close(*x, *y, 1e-12));
        }
        prop_assert!(rel_close(duan_psi(&a).unwrap().value, duan_psi(&b).unwrap().value, 1e-12));
        prop_assert!(rel_close(rho(&a), rho(&b), 1e-9));
    }

    #[test]
    fn bounds_scale_linearly(a in irreducible(8), alpha in 0.01f64..100.0) {
        let b = a.scaled(alpha);
        let (pa, pb) = (phi_curve(&a).unwrap(), phi_curve(&b).unwrap());
        for (x, y) in pa.values.iter().zip(&pb.values) {
            prop_assert!(rel_close(alpha * x, *y, 1e-12));
        }
        prop_assert!(rel_close(alpha * psi(&a).unwrap().value, psi(&b).unwrap().value, 1e-12));
        prop_assert!(rel_close(alpha * rho(&a), rho(&b), 1e-9));
    }

    #[test]
    fn crossing_criterion_orders_consecutive_values(a in irreducible(10)) {
        let c = phi_curve(&a).unwrap();
        let p = profile(&a).unwrap();
        let sorted = p.sorted_avg2();
        let weight = p.max_off.unwrap() * p.max_ratio;
        let min = c.min();
        prop_assert!(rel_close(c.best_value, min, 1e-12), "{:?} best_l {}", c.values, c.best_l);
        for l in 1..a.n() {
            let diff = c.at(l) - c.at(l + 1);
            if diff.abs() > 1e-9 {
                let crit = crossing_criterion(&sorted, p.max_diag, weight, l);
                prop_assert_eq!(diff > 0.0, crit > 0.0, "l = {}, diff {}, crit {}", l, diff, crit);
            }
        }
    }

    #[test]
    fn certificates_are_sound(a in irreducible(6)) {
        let rho = rho(&a);
        let c = phi_curve(&a).unwrap();
        for l in 1..=a.n() {
            if upper_certificate(&a, l).unwrap().verdict {
                prop_assert!((c.at(l) - rho).abs() <= eps(rho));
            }
        }
        if lower_certificate(&a).unwrap().verdict {
            prop_assert!((psi(&a).unwrap().value - rho).abs() <= eps(rho));
        }
    }

    #[test]
    fn graph_bounds_sandwich_and_match_engine(g in connected_graph(9)) {
        for kind in GraphMatrixKind::ALL {
            for direction in [Direction::Upper, Direction::Lower] {
                let r = graph_bound(&g, kind, direction).unwrap();
                let (rho, e) = (r.rho.rho, eps(r.rho.rho));
                prop_assert!(r.instantiation_gap <= 1e-12, "{} {:?}: {}", kind, direction, r.instantiation_gap);
                match &r.bound {
                    GraphBound::Upper(c) => {
                        for &v in &c.values {
                            prop_assert!(rho <= v + e);
                        }
                        if r.general_certificate.verdict {
                            prop_assert!((c.best_value - rho).abs() <= e);
                        }
                    }
                    GraphBound::Lower(v) => {
                        prop_assert!(v.value - e <= rho);
                        if r.general_certificate.verdict {
                            prop_assert!((v.value - rho).abs() <= e);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn distance_upper_equality_needs_equal_avg2(g in connected_graph(8)) {
        let r = graph_bound(&g, GraphMatrixKind::Distance, Direction::Upper).unwrap();
        if let GraphBound::Upper(c) = &r.bound {
            if (c.min() - r.rho.rho).abs() <= eps(r.rho.rho) {
                let m0 = r.avg2[0];
                prop_assert!(r.avg2.iter().all(|&m| rel_close(m, m0, 1e-9)), "{:?}", r.avg2);
            }
        }
    }

    #[test]
    fn cones_over_regular_graphs_certify(k in 3usize..9, hub_kind in 0usize..2) {
        // cones over cycles and complete graphs: hub row extreme, rim rows equal
        let rim = if hub_kind == 0 { Graph::cycle(k) } else { Graph::complete(k) };
        let g = rim.cone();
        let r = graph_bound(&g, GraphMatrixKind::SignlessLaplacian, Direction::Upper).unwrap();
        prop_assert!(r.general_certificate.verdict);
        prop_assert!((r.bound.best() - r.rho.rho).abs() <= eps(r.rho.rho));
        let a = build_matrix(&g, GraphMatrixKind::Distance).unwrap();
        let lower = lower_certificate(&a).unwrap();
        prop_assert!(lower.verdict);
        prop_assert!((psi(&a).unwrap().value - rho(&a)).abs() <= eps(rho(&a)));
    }

    #[test]
    fn json_rendering_is_a_fixed_point(a in positive_rows(6)) {
        let text = to_json(&report(&a));
        let back: BoundReport = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(to_json(&back), text);
    }

    #[test]
    fn matrix_text_round_trips(a in positive_rows(6)) {
        prop_assert_eq!(NonnegMatrix::parse(&a.to_text()).unwrap(), a);
    }

    #[test]
    fn edge_list_round_trips(g in connected_graph(9)) {
        prop_assert_eq!(parse_edge_list(&g.to_text()).unwrap(), g);
    }
}
