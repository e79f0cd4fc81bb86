use nalgebra::{Complex, DMatrix};

use crate::chain::{DriftModel, GeneratorMatrix};
use crate::error::{Error, Result};
use crate::wh::schur::schur;

type C = Complex<f64>;

/// Eigenvalues closer than this to the imaginary axis abort the split.
pub const AXIS_GAP: f64 = 1e-9;

/// Tolerance for the sub-probability / sub-generator class checks.
pub const CLASS_TOL: f64 = 1e-10;

/// Wiener-Hopf factors of one generator with killing rate `c`.
///
/// `lambda_plus` is `|E-| x |E+|`, `lambda_minus` is `|E+| x |E-|`,
/// `g_plus` and `g_minus` are sub-generators on E+ and E-. Rows and columns
/// follow the order of `DriftModel::plus_states` / `minus_states`.
#[derive(Debug, Clone, PartialEq)]
pub struct WHQuadruple {
    pub lambda_plus: DMatrix<f64>,
    pub lambda_minus: DMatrix<f64>,
    pub g_plus: DMatrix<f64>,
    pub g_minus: DMatrix<f64>,
    pub killing: f64,
}

/// Spectrum of `V^{-1}(G - cI)` split by the sign of the real part.
#[derive(Debug, Clone)]
pub struct SpectralSplit {
    pub eigenvalues: Vec<C>,
    /// Orthonormal basis of the invariant subspace for Re < 0 (dimension |E+|).
    pub plus_basis: DMatrix<C>,
    /// Orthonormal basis of the invariant subspace for Re > 0 (dimension |E-|).
    pub minus_basis: DMatrix<C>,
}

/// `V^{-1}(G - cI)` with rows and columns in sign-major order.
pub(crate) fn scaled_generator(g: &DMatrix<f64>, drift: &DriftModel, c: f64) -> DMatrix<f64> {
    let order = drift.sign_major_order();
    let n = order.len();
    DMatrix::from_fn(n, n, |a, b| {
        let (i, j) = (order[a], order[b]);
        let shifted = g[(i, j)] - if i == j { c } else { 0.0 };
        shifted / drift.rate(i)
    })
}

pub fn spectral_split(m: &DMatrix<f64>, n_plus: usize) -> Result<SpectralSplit> {
    let mc = m.map(|x| C::new(x, 0.0));
    spectral_split_complex(&mc, n_plus)
}

pub(crate) fn spectral_split_complex(m: &DMatrix<C>, n_plus: usize) -> Result<SpectralSplit> {
    let n = m.nrows();
    let mut s = schur(m)?;
    let eigenvalues = s.eigenvalues();
    let scale = 1.0 + m.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if let Some(z) = eigenvalues.iter().find(|z| z.re.abs() <= AXIS_GAP * scale) {
        return Err(Error::SpectralSplit(format!(
            "eigenvalue {z} lies within {AXIS_GAP:e} of the imaginary axis"
        )));
    }
    let stable = s.reorder(|z| z.re < 0.0);
    if stable != n_plus {
        return Err(Error::SpectralSplit(format!(
            "{stable} eigenvalues with negative real part, expected {n_plus} (= |E+|)"
        )));
    }
    let plus_basis = s.q.columns(0, n_plus).into_owned();
    s.reorder(|z| z.re > 0.0);
    let minus_basis = s.q.columns(0, n - n_plus).into_owned();
    Ok(SpectralSplit { eigenvalues, plus_basis, minus_basis })
}

/// `top * bottom^{-1}`-style ratio `x * y^{-1}`, failing on a singular `y`.
fn right_divide(x: &DMatrix<C>, y: &DMatrix<C>, what: &str) -> Result<DMatrix<C>> {
    let lu = y.transpose().lu();
    let u = lu.u();
    let pivots: Vec<f64> = (0..u.nrows()).map(|i| u[(i, i)].norm()).collect();
    let largest = pivots.iter().copied().fold(0.0, f64::max);
    let smallest = pivots.iter().copied().fold(f64::INFINITY, f64::min);
    if !(smallest > 1e-13 * largest) {
        return Err(Error::SpectralSplit(format!(
            "invariant subspace is not a graph over {what} (defective or ill-posed split)"
        )));
    }
    let sol = lu
        .solve(&x.transpose())
        .ok_or_else(|| Error::SpectralSplit(format!("singular basis block over {what}")))?;
    Ok(sol.transpose())
}

/// Complex-valued factors, used for the real case and for complex killing.
pub(crate) struct ComplexFactors {
    pub lambda_plus: DMatrix<C>,
    pub lambda_minus: DMatrix<C>,
    pub g_plus: DMatrix<C>,
    pub g_minus: DMatrix<C>,
}

pub(crate) fn factor_scaled(m: &DMatrix<C>, n_plus: usize) -> Result<ComplexFactors> {
    let n = m.nrows();
    let n_minus = n - n_plus;
    let split = spectral_split_complex(m, n_plus)?;
    let w = &split.plus_basis;
    let lambda_plus = right_divide(&w.rows(n_plus, n_minus).into_owned(), &w.rows(0, n_plus).into_owned(), "E+")?;
    let u = &split.minus_basis;
    let lambda_minus = right_divide(&u.rows(0, n_plus).into_owned(), &u.rows(n_plus, n_minus).into_owned(), "E-")?;
    let m_pp = m.view((0, 0), (n_plus, n_plus));
    let m_pm = m.view((0, n_plus), (n_plus, n_minus));
    let m_mp = m.view((n_plus, 0), (n_minus, n_plus));
    let m_mm = m.view((n_plus, n_plus), (n_minus, n_minus));
    let g_plus = m_pp + m_pm * &lambda_plus;
    let g_minus = -(m_mp * &lambda_minus + m_mm);
    Ok(ComplexFactors { lambda_plus, lambda_minus, g_plus, g_minus })
}

/// The unique quadruple `(Lambda+, Lambda-, G+, G-)` solving
/// `V^{-1}(G - cI) [I Lambda-; Lambda+ I] = [I Lambda-; Lambda+ I] diag(G+, -G-)`.
pub fn classical_factorize(g: &GeneratorMatrix, drift: &DriftModel, c: f64) -> Result<WHQuadruple> {
    if g.dim() != drift.dim() {
        return Err(Error::Dimension(format!(
            "generator is {}x{}, drift has {} states",
            g.dim(),
            g.dim(),
            drift.dim()
        )));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::NonPositiveKilling(c));
    }
    let m = scaled_generator(g.matrix(), drift, c).map(|x| C::new(x, 0.0));
    let f = factor_scaled(&m, drift.plus_states().len())?;
    Ok(WHQuadruple {
        lambda_plus: f.lambda_plus.map(|z| z.re),
        lambda_minus: f.lambda_minus.map(|z| z.re),
        g_plus: f.g_plus.map(|z| z.re),
        g_minus: f.g_minus.map(|z| z.re),
        killing: c,
    })
}

/// Max-norm of `LHS - RHS` of the factorization identity, sign-major.
pub fn factorization_residual(g: &GeneratorMatrix, drift: &DriftModel, c: f64, quad: &WHQuadruple) -> Result<f64> {
    let np = drift.plus_states().len();
    let nm = drift.minus_states().len();
    let shapes = [
        (quad.lambda_plus.shape(), (nm, np)),
        (quad.lambda_minus.shape(), (np, nm)),
        (quad.g_plus.shape(), (np, np)),
        (quad.g_minus.shape(), (nm, nm)),
    ];
    if g.dim() != drift.dim() || shapes.iter().any(|(a, b)| a != b) {
        return Err(Error::Dimension("quadruple does not match the drift partition".into()));
    }
    let m = scaled_generator(g.matrix(), drift, c);
    let n = np + nm;
    let mut frame = DMatrix::<f64>::identity(n, n);
    frame.view_mut((0, np), (np, nm)).copy_from(&quad.lambda_minus);
    frame.view_mut((np, 0), (nm, np)).copy_from(&quad.lambda_plus);
    let mut diag = DMatrix::<f64>::zeros(n, n);
    diag.view_mut((0, 0), (np, np)).copy_from(&quad.g_plus);
    diag.view_mut((np, np), (nm, nm)).copy_from(&(-&quad.g_minus));
    let lhs = &m * &frame;
    let rhs = &frame * &diag;
    Ok((lhs - rhs).abs().max())
}

impl WHQuadruple {
    /// Largest violation of the class constraints: `Lambda` rows are
    /// sub-probability vectors, `G` matrices are sub-generators.
    pub fn class_violation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for lam in [&self.lambda_plus, &self.lambda_minus] {
            for row in lam.row_iter() {
                for &x in row.iter() {
                    worst = worst.max(-x).max(x - 1.0);
                }
                worst = worst.max(row.sum() - 1.0);
            }
        }
        for g in [&self.g_plus, &self.g_minus] {
            worst = worst.max(sub_generator_violation(g));
        }
        worst
    }
}

pub(crate) fn sub_generator_violation(g: &DMatrix<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, row) in g.row_iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if i != j {
                worst = worst.max(-x);
            }
        }
        worst = worst.max(row.sum());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_generator_has_closed_form() {
        let drift = DriftModel::from_rates(&[2.0, -3.0, 0.5]).unwrap();
        let g = GeneratorMatrix::zeros(3);
        let c = 0.7;
        let quad = classical_factorize(&g, &drift, c).unwrap();
        assert!(quad.lambda_plus.abs().max() < 1e-15);
        assert!(quad.lambda_minus.abs().max() < 1e-15);
        // plus states in order: 0 (v=2), 2 (v=0.5)
        assert!((quad.g_plus[(0, 0)] + c / 2.0).abs() < 1e-14);
        assert!((quad.g_plus[(1, 1)] + c / 0.5).abs() < 1e-14);
        assert!((quad.g_minus[(0, 0)] + c / 3.0).abs() < 1e-14);
        assert!(factorization_residual(&g, &drift, c, &quad).unwrap() < 1e-14);
    }

    #[test]
    fn rejects_nonpositive_killing() {
        let drift = DriftModel::from_rates(&[1.0, -1.0]).unwrap();
        assert!(classical_factorize(&GeneratorMatrix::zeros(2), &drift, 0.0).is_err());
    }

    #[test]
    fn residual_detects_perturbation() {
        let drift = DriftModel::from_rates(&[2.0, -3.0]).unwrap();
        let g = GeneratorMatrix::from_rows(&[vec![-2.0, 2.0], vec![1.0, -1.0]]).unwrap();
        let mut quad = classical_factorize(&g, &drift, 0.5).unwrap();
        assert!(factorization_residual(&g, &drift, 0.5, &quad).unwrap() < 1e-12);
        quad.lambda_plus[(0, 0)] += 1e-4;
        assert!(factorization_residual(&g, &drift, 0.5, &quad).unwrap() >= 1e-6);
    }
}
