use nalgebra::DVector;

use crate::error::{Error, Result};

/// State labels together with the nonzero drift `v` on each state.
///
/// States with `v > 0` form E+ and states with `v < 0` form E-. Both sides
/// must be nonempty. Index order is the order of `labels`; the "sign-major"
/// order used by the factorization lists E+ first, then E-, each in index
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftModel {
    labels: Vec<String>,
    rates: Vec<f64>,
    plus: Vec<usize>,
    minus: Vec<usize>,
}

impl DriftModel {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>, rates: &[f64]) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != rates.len() {
            return Err(Error::InvalidDrift(format!(
                "{} labels but {} drift values",
                labels.len(),
                rates.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidDrift(format!("duplicate state label `{l}`")));
            }
        }
        for (l, &v) in labels.iter().zip(rates) {
            if v == 0.0 || !v.is_finite() {
                return Err(Error::InvalidDrift(format!(
                    "state `{l}` has drift {v}; drift must be finite and nonzero"
                )));
            }
        }
        let plus: Vec<usize> = (0..rates.len()).filter(|&i| rates[i] > 0.0).collect();
        let minus: Vec<usize> = (0..rates.len()).filter(|&i| rates[i] < 0.0).collect();
        if plus.is_empty() || minus.is_empty() {
            return Err(Error::InvalidDrift(
                "both the positive-drift and negative-drift state sets must be nonempty".into(),
            ));
        }
        Ok(DriftModel { labels, rates: rates.to_vec(), plus, minus })
    }

    /// Convenience constructor labelling states `0, 1, ...`.
    pub fn from_rates(rates: &[f64]) -> Result<Self> {
        Self::new((0..rates.len()).map(|i| i.to_string()), rates)
    }

    pub fn dim(&self) -> usize {
        self.rates.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn rate(&self, i: usize) -> f64 {
        self.rates[i]
    }

    pub fn plus_states(&self) -> &[usize] {
        &self.plus
    }

    pub fn minus_states(&self) -> &[usize] {
        &self.minus
    }

    pub fn is_plus(&self, i: usize) -> bool {
        self.rates[i] > 0.0
    }

    /// Position of state `i` inside E+ or E- (whichever contains it).
    pub fn side_position(&self, i: usize) -> usize {
        let side = if self.is_plus(i) { &self.plus } else { &self.minus };
        side.iter().position(|&s| s == i).expect("state belongs to exactly one side")
    }

    /// Index order of the sign-major arrangement: E+ then E-.
    pub fn sign_major_order(&self) -> Vec<usize> {
        self.plus.iter().chain(&self.minus).copied().collect()
    }

    /// Diagonal of `V` restricted to E+ (positive entries).
    pub fn v_plus(&self) -> DVector<f64> {
        DVector::from_iterator(self.plus.len(), self.plus.iter().map(|&i| self.rates[i]))
    }

    /// Diagonal of `V` restricted to E- (negative entries).
    pub fn v_minus(&self) -> DVector<f64> {
        DVector::from_iterator(self.minus.len(), self.minus.iter().map(|&i| self.rates[i]))
    }

    /// Same states, drift negated: E+ and E- swap.
    pub fn reflect(&self) -> Self {
        let rates: Vec<f64> = self.rates.iter().map(|v| -v).collect();
        DriftModel {
            labels: self.labels.clone(),
            rates,
            plus: self.minus.clone(),
            minus: self.plus.clone(),
        }
    }
}
