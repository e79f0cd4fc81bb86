use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Absolute tolerance on generator row sums.
pub const GENERATOR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NotSquare { rows: usize, cols: usize },
    NonFinite { row: usize, col: usize },
    NegativeOffDiagonal { row: usize, col: usize, value: f64 },
    RowSum { row: usize, sum: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotSquare { rows, cols } => write!(f, "matrix is {rows}x{cols}, not square"),
            Violation::NonFinite { row, col } => write!(f, "entry ({row}, {col}) is not finite"),
            Violation::NegativeOffDiagonal { row, col, value } => {
                write!(f, "off-diagonal entry ({row}, {col}) is negative ({value})")
            }
            Violation::RowSum { row, sum } => write!(f, "row {row} sums to {}", fmt_sum(*sum)),
        }
    }
}

// Row sums come out of float addition; print them the way a person would
// write them (-0.1 rather than -0.09999999999999998).
fn fmt_sum(x: f64) -> String {
    let s = format!("{:.12}", x);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_string() } else { s.to_string() }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        let msgs: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&msgs.join("; "))
    }
}

/// Checks conservativity: off-diagonals `>= -tol` and `|row sum| <= tol`.
pub fn validate_generator(m: &DMatrix<f64>, tol: f64) -> ValidationReport {
    let mut violations = Vec::new();
    if m.nrows() != m.ncols() {
        violations.push(Violation::NotSquare { rows: m.nrows(), cols: m.ncols() });
        return ValidationReport { violations };
    }
    for i in 0..m.nrows() {
        let mut sum = 0.0;
        let mut finite = true;
        for j in 0..m.ncols() {
            let x = m[(i, j)];
            if !x.is_finite() {
                violations.push(Violation::NonFinite { row: i, col: j });
                finite = false;
                continue;
            }
            if i != j && x < -tol {
                violations.push(Violation::NegativeOffDiagonal { row: i, col: j, value: x });
            }
            sum += x;
        }
        if finite && sum.abs() > tol {
            violations.push(Violation::RowSum { row: i, sum });
        }
    }
    ValidationReport { violations }
}

/// A conservative rate matrix: nonnegative off-diagonals, zero row sums.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrix(DMatrix<f64>);

impl GeneratorMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let report = validate_generator(&m, GENERATOR_TOL);
        if !report.is_ok() {
            return Err(Error::InvalidGenerator(report.to_string()));
        }
        Ok(GeneratorMatrix(m))
    }

    /// Builds from row-major rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::InvalidGenerator(format!(
                "row {i} has {} entries, expected {n}",
                r.len()
            )));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn zeros(dim: usize) -> Self {
        GeneratorMatrix(DMatrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    /// Total exit rate `-G(i,i)`.
    pub fn exit_rate(&self, i: usize) -> f64 {
        -self.0[(i, i)]
    }
}
