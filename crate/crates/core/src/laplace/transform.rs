use num_complex::{Complex, Complex64};
use num_rational::BigRational;

use crate::error::{Error, Result};

/// A multivariate Laplace transform `f^(q_1, ..., q_n)`.
///
/// Every transform evaluates at positive real tuples. Closed forms may also
/// evaluate exactly in rationals, which removes evaluator noise from the
/// Gaver sums, and analytic ones on complex tuples for Talbot.
pub trait LaplaceTransform: Sync {
    fn arity(&self) -> usize;

    fn eval(&self, q: &[f64]) -> Result<f64>;

    fn has_exact(&self) -> bool {
        false
    }

    fn eval_exact(&self, _q: &[BigRational]) -> Result<BigRational> {
        Err(Error::Inversion("transform has no exact evaluator".into()))
    }

    fn has_complex(&self) -> bool {
        false
    }

    fn eval_complex(&self, _q: &[Complex64]) -> Result<Complex64> {
        Err(Error::Inversion("transform is not defined off the real axis".into()))
    }

    /// Exact evaluation at complex rational points. When present, Talbot
    /// sums run in rationals with high-precision contour constants.
    fn has_complex_exact(&self) -> bool {
        false
    }

    fn eval_complex_exact(&self, _q: &[Complex<BigRational>]) -> Result<Complex<BigRational>> {
        Err(Error::Inversion("transform has no exact complex evaluator".into()))
    }
}

type RealFn<'a> = Box<dyn Fn(&[f64]) -> f64 + Send + Sync + 'a>;
type ExactFn<'a> = Box<dyn Fn(&[BigRational]) -> BigRational + Send + Sync + 'a>;
type ComplexFn<'a> = Box<dyn Fn(&[Complex64]) -> Complex64 + Send + Sync + 'a>;
type ComplexExactFn<'a> = Box<dyn Fn(&[Complex<BigRational>]) -> Complex<BigRational> + Send + Sync + 'a>;

/// A transform given by closures.
///
/// ```
/// use fluctuation::laplace::{invert, ClosedForm, InversionConfig};
///
/// let f = ClosedForm::new(1, |q| 1.0 / (q[0] + 1.0))
///     .with_complex(|q| 1.0 / (q[0] + 1.0));
/// let v = invert(&f, &[1.0], &InversionConfig::talbot(32)).unwrap();
/// assert!((v - (-1.0f64).exp()).abs() < 1e-10);
/// ```
pub struct ClosedForm<'a> {
    arity: usize,
    real: RealFn<'a>,
    exact: Option<ExactFn<'a>>,
    complex: Option<ComplexFn<'a>>,
    complex_exact: Option<ComplexExactFn<'a>>,
}

impl<'a> ClosedForm<'a> {
    pub fn new(arity: usize, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'a) -> Self {
        ClosedForm { arity, real: Box::new(f), exact: None, complex: None, complex_exact: None }
    }

    pub fn with_exact(mut self, f: impl Fn(&[BigRational]) -> BigRational + Send + Sync + 'a) -> Self {
        self.exact = Some(Box::new(f));
        self
    }

    pub fn with_complex(mut self, f: impl Fn(&[Complex64]) -> Complex64 + Send + Sync + 'a) -> Self {
        self.complex = Some(Box::new(f));
        self
    }

    pub fn with_complex_exact(
        mut self,
        f: impl Fn(&[Complex<BigRational>]) -> Complex<BigRational> + Send + Sync + 'a,
    ) -> Self {
        self.complex_exact = Some(Box::new(f));
        self
    }
}

impl LaplaceTransform for ClosedForm<'_> {
    fn arity(&self) -> usize {
        self.arity
    }

    fn eval(&self, q: &[f64]) -> Result<f64> {
        Ok((self.real)(q))
    }

    fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    fn eval_exact(&self, q: &[BigRational]) -> Result<BigRational> {
        match &self.exact {
            Some(f) => Ok(f(q)),
            None => Err(Error::Inversion("transform has no exact evaluator".into())),
        }
    }

    fn has_complex(&self) -> bool {
        self.complex.is_some()
    }

    fn eval_complex(&self, q: &[Complex64]) -> Result<Complex64> {
        match &self.complex {
            Some(f) => Ok(f(q)),
            None => Err(Error::Inversion("transform is not defined off the real axis".into())),
        }
    }

    fn has_complex_exact(&self) -> bool {
        self.complex_exact.is_some()
    }

    fn eval_complex_exact(&self, q: &[Complex<BigRational>]) -> Result<Complex<BigRational>> {
        match &self.complex_exact {
            Some(f) => Ok(f(q)),
            None => Err(Error::Inversion("transform has no exact complex evaluator".into())),
        }
    }
}
