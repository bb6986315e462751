//! Empirical distribution functions over finite samples.

use crate::{Error, Result};

/// A sorted sample vector representing an empirical step CDF.
///
/// `F(x) = (1/n) * #{i : samples[i] <= x}`. The sample vector is kept sorted
/// ascending and is immutable after construction, so values are safe to share
/// across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Edf {
    samples: Vec<f64>,
}

impl Edf {
    /// Builds an EDF from raw samples, sorting them. Rejects empty or
    /// non-finite input.
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySample);
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("non-finite sample".into()));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { samples })
    }

    /// Builds an EDF from samples already sorted ascending.
    pub fn from_sorted(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySample);
        }
        debug_assert!(samples.windows(2).all(|w| w[0] <= w[1]));
        Ok(Self { samples })
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn min(&self) -> f64 {
        self.samples[0]
    }

    pub fn max(&self) -> f64 {
        self.samples[self.samples.len() - 1]
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    /// Evaluates the step CDF at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        let k = self.samples.partition_point(|&s| s <= x);
        k as f64 / self.samples.len() as f64
    }

    /// Generalized inverse `F^{-1}(beta) = inf { x : F(x) >= beta }`.
    ///
    /// For the step CDF this is the order statistic `x_(k)` with
    /// `k = ceil(n * beta)`, clamped to `[1, n]`.
    pub fn quantile(&self, beta: f64) -> f64 {
        let n = self.samples.len();
        let k = (n as f64 * beta).ceil() as usize;
        self.samples[k.clamp(1, n) - 1]
    }

    /// Truncation at `tau`: every sample `x` with `x < -tau` or `x >= tau`
    /// is replaced by 0, realizing the CDF of `X 1{-tau <= X < tau}`.
    pub fn truncate(&self, tau: f64) -> Result<Edf> {
        if !(tau > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "truncation level must be positive, got {tau}"
            )));
        }
        let mapped: Vec<f64> = self
            .samples
            .iter()
            .map(|&x| if x < -tau || x >= tau { 0.0 } else { x })
            .collect();
        Edf::new(mapped)
    }

    /// Samplewise shift, used by translation-equivariance tests.
    pub fn shift(&self, c: f64) -> Edf {
        Edf {
            samples: self.samples.iter().map(|x| x + c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edf(v: &[f64]) -> Edf {
        Edf::new(v.to_vec()).unwrap()
    }

    #[test]
    fn eval_counts_samples_at_or_below() {
        let f = edf(&[1.0, 2.0, 2.0, 5.0]);
        assert_eq!(f.eval(0.0), 0.0);
        assert_eq!(f.eval(1.0), 0.25);
        assert_eq!(f.eval(2.0), 0.75);
        assert_eq!(f.eval(10.0), 1.0);
    }

    #[test]
    fn quantile_is_generalized_inverse() {
        let f = edf(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(f.quantile(0.25), 1.0);
        assert_eq!(f.quantile(0.26), 2.0);
        assert_eq!(f.quantile(0.5), 2.0);
        assert_eq!(f.quantile(1.0), 4.0);
    }

    #[test]
    fn truncate_maps_out_of_window_to_zero() {
        let f = edf(&[-5.0, -1.0, 0.0, 2.0, 9.0]);
        let t = f.truncate(3.0).unwrap();
        assert_eq!(t.samples(), &[-1.0, 0.0, 0.0, 0.0, 2.0]);
    }

    #[test]
    fn truncate_is_identity_when_tau_exceeds_range() {
        let f = edf(&[1.0, 2.0]);
        assert_eq!(f.truncate(10.0).unwrap().samples(), &[1.0, 2.0]);
    }

    #[test]
    fn truncate_keeps_lower_boundary() {
        // -tau is included by the indicator; +tau is not.
        let f = edf(&[-1.0]);
        assert_eq!(f.truncate(1.0).unwrap().samples(), &[-1.0]);
        let g = edf(&[3.0]);
        assert_eq!(g.truncate(3.0).unwrap().samples(), &[0.0]);
    }

    #[test]
    fn empty_sample_rejected() {
        assert!(matches!(Edf::new(vec![]), Err(Error::EmptySample)));
    }
}
