//! The worked example matrices, embedded so the regression does not depend
//! on any file layout.

use crate::matrix::NonnegMatrix;

fn m(rows: &[[f64; 4]; 4]) -> NonnegMatrix {
    let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
    NonnegMatrix::from_rows(&rows).expect("fixture is valid")
}

/// Distance matrix of the star K_{1,3}.
pub fn a1() -> NonnegMatrix {
    m(&[
        [0.0, 1.0, 1.0, 1.0],
        [1.0, 0.0, 2.0, 2.0],
        [1.0, 2.0, 0.0, 2.0],
        [1.0, 2.0, 2.0, 0.0],
    ])
}

pub fn a1_prime() -> NonnegMatrix {
    m(&[
        [0.0, 2.0, 2.0, 1.0],
        [2.0, 0.0, 2.0, 1.0],
        [2.0, 2.0, 0.0, 1.0],
        [1.0, 1.0, 1.0, 0.0],
    ])
}

/// Adjacency matrix of K_{1,3} with the hub last.
pub fn a2() -> NonnegMatrix {
    m(&[
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 0.0, 1.0],
        [1.0, 1.0, 1.0, 0.0],
    ])
}

pub fn a2_prime() -> NonnegMatrix {
    m(&[
        [0.0, 1.0, 1.0, 1.0],
        [1.0, 0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
    ])
}

pub fn a3() -> NonnegMatrix {
    m(&[
        [0.0, 2.0, 2.0, 4.0],
        [2.0, 0.0, 2.0, 2.0],
        [2.0, 2.0, 0.0, 2.0],
        [1.9, 1.9, 1.9, 0.0],
    ])
}

pub fn a3_prime() -> NonnegMatrix {
    m(&[
        [0.0, 1.9, 1.9, 1.9],
        [2.0, 0.0, 2.0, 2.0],
        [2.0, 2.0, 0.0, 2.0],
        [4.0, 2.0, 2.0, 0.0],
    ])
}

/// J_n.
pub fn all_ones(n: usize) -> NonnegMatrix {
    NonnegMatrix::new(n, vec![1.0; n * n]).expect("valid")
}
