//! Dense nonnegative matrices and their row statistics.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("matrix order must be at least 1")]
    Empty,
    #[error("expected {expected} entries for an {n}x{n} matrix, got {got}")]
    NotSquare {
        n: usize,
        expected: usize,
        got: usize,
    },
    #[error("entry ({row}, {col}) is negative: {value}")]
    Negative { row: usize, col: usize, value: f64 },
    #[error("entry ({row}, {col}) is not finite")]
    NotFinite { row: usize, col: usize },
    #[error("row {0} has zero row sum")]
    ZeroRowSum(usize),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

/// Square matrix with nonnegative finite entries, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct NonnegMatrix {
    n: usize,
    data: Vec<f64>,
}

impl NonnegMatrix {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self, MatrixError> {
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        if data.len() != n * n {
            return Err(MatrixError::NotSquare {
                n,
                expected: n * n,
                got: data.len(),
            });
        }
        for (k, &v) in data.iter().enumerate() {
            let (row, col) = (k / n + 1, k % n + 1);
            if !v.is_finite() {
                return Err(MatrixError::NotFinite { row, col });
            }
            if v < 0.0 {
                return Err(MatrixError::Negative { row, col, value: v });
            }
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, MatrixError> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(MatrixError::NotSquare {
                n,
                expected: n,
                got: bad.len(),
            });
        }
        Self::new(n, rows.concat())
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0);
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Caller keeps the entry nonnegative and finite.
    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(v.is_finite() && v >= 0.0);
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    /// Simultaneous row/column permutation: entry (i, j) of the result is
    /// entry (perm[i], perm[j]) of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for &pi in perm {
            for &pj in perm {
                data.push(self.get(pi, pj));
            }
        }
        Self { n, data }
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        assert!(alpha.is_finite() && alpha > 0.0);
        Self {
            n: self.n,
            data: self.data.iter().map(|v| v * alpha).collect(),
        }
    }

    pub fn principal_submatrix(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * idx.len());
        for &i in idx {
            for &j in idx {
                data.push(self.get(i, j));
            }
        }
        Self { n: idx.len(), data }
    }

    pub fn is_symmetric(&self, atol: f64) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= atol))
    }

    /// `y = A x`.
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    /// Text form: the order on the first line, then one row per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for i in 0..self.n {
            let line: Vec<String> = self.row(i).iter().map(|v| format!("{v}")).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the text format: line 1 is `n`, then `n` rows of `n`
    /// whitespace-separated nonnegative decimals. `#` lines and blank lines
    /// are skipped.
    pub fn parse(text: &str) -> Result<Self, MatrixError> {
        let perr = |line: usize, column: usize, message: String| MatrixError::Parse {
            line,
            column,
            message,
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l))
            .filter(|(_, l)| {
                let t = l.trim();
                !t.is_empty() && !t.starts_with('#')
            });

        let (hline, header) = lines
            .next()
            .ok_or_else(|| perr(1, 1, "missing matrix order".into()))?;
        let htoks = tokens(header);
        if htoks.len() != 1 {
            return Err(perr(
                hline,
                1,
                "first line must hold only the order n".into(),
            ));
        }
        let n: usize = htoks[0]
            .1
            .parse()
            .map_err(|_| perr(hline, htoks[0].0, format!("invalid order {:?}", htoks[0].1)))?;
        if n == 0 {
            return Err(perr(
                hline,
                htoks[0].0,
                "matrix order must be at least 1".into(),
            ));
        }

        let mut data = Vec::with_capacity(n * n);
        let mut last_line = hline;
        for r in 0..n {
            let (lno, line) = lines
                .next()
                .ok_or_else(|| perr(last_line + 1, 1, format!("expected {n} rows, found {r}")))?;
            last_line = lno;
            let toks = tokens(line);
            if toks.len() != n {
                let col = toks.get(n).map_or(line.len() + 1, |t| t.0);
                return Err(perr(
                    lno,
                    col,
                    format!("row {} has {} entries, expected {n}", r + 1, toks.len()),
                ));
            }
            for (col, tok) in toks {
                let v: f64 = tok
                    .parse()
                    .map_err(|_| perr(lno, col, format!("invalid number {tok:?}")))?;
                if !v.is_finite() {
                    return Err(perr(lno, col, format!("entry {tok:?} is not finite")));
                }
                if v < 0.0 {
                    return Err(perr(lno, col, format!("negative entry {tok}")));
                }
                // normalizes -0
                data.push(v.abs());
            }
        }
        if let Some((lno, _)) = lines.next() {
            return Err(perr(lno, 1, format!("trailing data after {n} rows")));
        }
        Self::new(n, data)
    }
}

/// Whitespace tokens with their 1-based character column.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((line[..s].chars().count() + 1, &line[s..k]));
            }
        } else if start.is_none() {
            start = Some(k);
        }
    }
    if let Some(s) = start {
        out.push((line[..s].chars().count() + 1, &line[s..]));
    }
    out
}

impl TryFrom<Vec<Vec<f64>>> for NonnegMatrix {
    type Error = MatrixError;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self, Self::Error> {
        Self::from_rows(&rows)
    }
}

impl From<NonnegMatrix> for Vec<Vec<f64>> {
    fn from(m: NonnegMatrix) -> Self {
        m.rows()
    }
}

impl fmt::Display for NonnegMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn row_sums(a: &NonnegMatrix) -> Vec<f64> {
    (0..a.n()).map(|i| a.row(i).iter().sum()).collect()
}

/// m_i = (Σ_k a_ik r_k) / r_i.
pub fn avg_two_row_sums(a: &NonnegMatrix) -> Result<Vec<f64>, MatrixError> {
    let r = row_sums(a);
    if let Some(i) = r.iter().position(|&ri| ri <= 0.0) {
        return Err(MatrixError::ZeroRowSum(i + 1));
    }
    let mut weighted = vec![0.0; a.n()];
    a.mul_vec(&r, &mut weighted);
    Ok(weighted.iter().zip(&r).map(|(w, ri)| w / ri).collect())
}

/// Row statistics the bounds are built from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub row_sums: Vec<f64>,
    pub avg2: Vec<f64>,
    /// 0-based indices sorting `avg2` descending, ties by ascending index.
    pub order: Vec<usize>,
    /// M: largest diagonal entry.
    pub max_diag: f64,
    /// N: largest off-diagonal entry; absent when n = 1.
    pub max_off: Option<f64>,
    /// S: smallest diagonal entry.
    pub min_diag: f64,
    /// T: smallest off-diagonal entry; absent when n = 1.
    pub min_off: Option<f64>,
    /// b = max r_j / r_i.
    pub max_ratio: f64,
    /// c = min r_j / r_i.
    pub min_ratio: f64,
}

impl Profile {
    pub fn n(&self) -> usize {
        self.row_sums.len()
    }

    /// m values in descending order (m_1 ≥ … ≥ m_n).
    pub fn sorted_avg2(&self) -> Vec<f64> {
        self.order.iter().map(|&i| self.avg2[i]).collect()
    }

    pub fn sorted_row_sums(&self) -> Vec<f64> {
        descending(&self.row_sums)
            .into_iter()
            .map(|i| self.row_sums[i])
            .collect()
    }

    pub fn min_avg2(&self) -> f64 {
        self.avg2.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_avg2(&self) -> f64 {
        self.avg2.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_row_sum(&self) -> f64 {
        self.row_sums.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_row_sum(&self) -> f64 {
        self.row_sums
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Stable descending order of `values` (ties keep ascending index).
pub fn descending(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    idx
}

pub fn profile(a: &NonnegMatrix) -> Result<Profile, MatrixError> {
    let n = a.n();
    let row_sums = row_sums(a);
    let avg2 = avg_two_row_sums(a)?;
    let order = descending(&avg2);

    let diag = (0..n).map(|i| a.get(i, i));
    let max_diag = diag.clone().fold(f64::NEG_INFINITY, f64::max);
    let min_diag = diag.fold(f64::INFINITY, f64::min);

    let (mut max_off, mut min_off) = (None::<f64>, None::<f64>);
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let v = a.get(i, j);
            max_off = Some(max_off.map_or(v, |m| m.max(v)));
            min_off = Some(min_off.map_or(v, |m| m.min(v)));
        }
    }

    let rmax = row_sums.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let rmin = row_sums.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(Profile {
        row_sums,
        avg2,
        order,
        max_diag,
        max_off,
        min_diag,
        min_off,
        max_ratio: rmax / rmin,
        min_ratio: rmin / rmax,
    })
}
