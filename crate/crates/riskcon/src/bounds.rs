//! Concentration tail bounds and confidence radii for empirical risk
//! estimators over the three distribution classes.
//!
//! The literature leaves the leading constants of these bounds abstract, so
//! they live in [`BoundParams`] as configuration with documented defaults;
//! validation elsewhere targets decay *rates*, not constants. All tail
//! values are probability bounds and clamp to `[0, 1]`.

use serde::{Deserialize, Serialize};

use crate::risk::{tau_bounded, RiskSpec, T2Constants};
use crate::{Error, Result};

/// Configurable constants of the tail bounds and the LCB policy.
///
/// `big_c` and `lcb_c` are the `(C, c)` pair of the bandit confidence
/// radius `mult * L * (log(C t) / (c T))^(kappa/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BoundParams {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub big_c: f64,
    pub lcb_c: f64,
    /// Leading factor of the LCB confidence radius.
    pub radius_mult: f64,
    /// Heavy-tail slack `eta` in `(0, beta)`; `None` means `beta / 2`.
    pub eta: Option<f64>,
}

impl Default for BoundParams {
    fn default() -> Self {
        Self {
            c1: 2.0,
            c2: 0.5,
            c3: 0.5,
            big_c: 4.0,
            // Calibrated so the default confidence radius resolves
            // unit-size gaps within desk-scale horizons; see README.
            lcb_c: 16.0,
            radius_mult: 2.0,
            eta: None,
        }
    }
}

impl BoundParams {
    pub fn validate(&self) -> Result<()> {
        let all_pos = [self.c1, self.c2, self.c3, self.big_c, self.lcb_c, self.radius_mult]
            .iter()
            .all(|v| *v > 0.0);
        if !all_pos {
            return Err(Error::InvalidParameter("bound constants must be positive".into()));
        }
        if let Some(eta) = self.eta {
            if !(eta > 0.0) {
                return Err(Error::InvalidParameter("eta must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn eta_for(&self, beta: f64) -> f64 {
        self.eta.unwrap_or(beta / 2.0)
    }
}

fn clamp01(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

fn extract_t2(spec: &RiskSpec) -> Result<T2Constants> {
    spec.t2_constants()
        .ok_or_else(|| Error::Unsupported("risk measure is not of the truncated class".into()))
}

// ---------------------------------------------------------------------------
// Type-1 tails
// ---------------------------------------------------------------------------

/// Tail bound for type-1 estimators under the exponential-moment class with
/// exponent `beta > 1`: exponential in `n (eps/L)^{2/kappa}` below the
/// scale `L`, and in `n (eps/L)^{beta/kappa}` above it.
pub fn tail_t1_c1(eps: f64, n: usize, l: f64, kappa: f64, beta: f64, p: &BoundParams) -> Result<f64> {
    if !(0.0 < kappa && kappa <= 1.0) {
        return Err(Error::InvalidParameter(format!("kappa must lie in (0,1], got {kappa}")));
    }
    if !(beta > 1.0) {
        return Err(Error::InvalidParameter(format!("beta must exceed 1, got {beta}")));
    }
    if !(eps > 0.0) || n == 0 {
        return Err(Error::InvalidParameter("need eps > 0 and n >= 1".into()));
    }
    let r = eps / l;
    let v = if eps <= l {
        p.c1 * (-p.c2 * n as f64 * r.powf(2.0 / kappa)).exp()
    } else {
        p.c1 * (-p.c3 * n as f64 * r.powf(beta / kappa)).exp()
    };
    Ok(clamp01(v))
}

/// Tail bound for type-1 estimators under the sub-exponential class;
/// applicable only when `(eps/L)^{1/kappa} > c2 / sqrt(n)`.
pub fn tail_t1_subexp(eps: f64, n: usize, l: f64, kappa: f64, p: &BoundParams) -> Result<f64> {
    if !(eps > 0.0) || n == 0 {
        return Err(Error::InvalidParameter("need eps > 0 and n >= 1".into()));
    }
    let n_f = n as f64;
    let t = (eps / l).powf(1.0 / kappa);
    let shift = p.c2 / n_f.sqrt();
    if !(t > shift) {
        return Err(Error::BoundNotApplicable(format!(
            "(eps/L)^(1/kappa) = {t} must exceed c2/sqrt(n) = {shift}"
        )));
    }
    Ok(clamp01((-p.c1 * n_f * (t - shift).powi(2)).exp()))
}

/// Tail bound for type-1 estimators under the polynomial-moment class
/// (`E|X|^beta` finite, `beta > 2`): sub-Gaussian shape below the scale
/// `L`, polynomial `n (n (eps/L)^{1/kappa})^{-(beta-eta)}` above it.
pub fn tail_t1_heavy(
    eps: f64,
    n: usize,
    l: f64,
    kappa: f64,
    beta: f64,
    eta: f64,
    p: &BoundParams,
) -> Result<f64> {
    if !(beta > 2.0) {
        return Err(Error::InvalidParameter(format!("beta must exceed 2, got {beta}")));
    }
    if !(0.0 < eta && eta < beta) {
        return Err(Error::InvalidParameter(format!("eta must lie in (0, beta), got {eta}")));
    }
    if !(eps > 0.0) || n == 0 {
        return Err(Error::InvalidParameter("need eps > 0 and n >= 1".into()));
    }
    let n_f = n as f64;
    let r = eps / l;
    let v = if eps <= l {
        p.c1 * (-p.c2 * n_f * r.powf(2.0 / kappa)).exp()
    } else {
        p.c1 * n_f * (n_f * r.powf(1.0 / kappa)).powf(-(beta - eta))
    };
    Ok(clamp01(v))
}

// ---------------------------------------------------------------------------
// Type-2 tails
// ---------------------------------------------------------------------------

/// Bounded-support tail bound for truncated type-2 estimators, with
/// constants supplied directly.
pub fn tail_t2_bounded_c(
    eps: f64,
    n: usize,
    t2: &T2Constants,
    b1: f64,
    b2: f64,
    p: &BoundParams,
) -> Result<f64> {
    if !(eps > 0.0) || n == 0 {
        return Err(Error::InvalidParameter("need eps > 0 and n >= 1".into()));
    }
    let tau = tau_bounded(t2, b1, b2);
    let scale = t2.l1 * tau.powf(t2.gamma);
    Ok(clamp01(
        p.c1 * (-p.c2 * n as f64 * (eps / scale).powf(2.0 / t2.a1)).exp(),
    ))
}

/// Bounded-support tail bound with the truncation level `max(B1/K1, B2/K2)`
/// at which the tail corrections vanish.
pub fn tail_t2_bounded(
    eps: f64,
    n: usize,
    spec: &RiskSpec,
    b1: f64,
    b2: f64,
    p: &BoundParams,
) -> Result<f64> {
    tail_t2_bounded_c(eps, n, &extract_t2(spec)?, b1, b2, p)
}

/// Additive correction `eps - eps'` of the fixed-truncation type-2 bound
/// under the exponential-moment class with exponent `beta`; `gamma_exp` is
/// the exponential-moment constant (distinct from the type-2 exponent
/// `gamma`).
pub fn t2_c1_correction(t2: &T2Constants, tau: f64, beta: f64, gamma_exp: f64) -> f64 {
    let side = |l: f64, a: f64, kt: f64| {
        l * (-a * gamma_exp * kt.powf(beta)).exp() / (kt.powf(beta - 1.0) * a * gamma_exp * (beta - 1.0))
    };
    side(t2.l2, t2.a2, t2.k1 * tau) + side(t2.l3, t2.a3, t2.k2 * tau)
}

/// Fixed-truncation type-2 tail bound under the exponential-moment class
/// (`beta > 1`), constants supplied directly.
pub fn tail_t2_c1_c(
    eps: f64,
    tau: f64,
    n: usize,
    t2: &T2Constants,
    beta: f64,
    gamma_exp: f64,
    p: &BoundParams,
) -> Result<f64> {
    if !(beta > 1.0) || !(gamma_exp > 0.0) || !(tau > 0.0) {
        return Err(Error::InvalidParameter(
            "need beta > 1, gamma_exp > 0, tau > 0".into(),
        ));
    }
    let eps_prime = eps - t2_c1_correction(t2, tau, beta, gamma_exp);
    if !(eps_prime > 0.0) {
        return Err(Error::BoundNotApplicable(format!(
            "eps = {eps} does not exceed the truncation correction"
        )));
    }
    let scale = t2.l1 * tau.powf(t2.gamma);
    Ok(clamp01(
        p.c1 * (-p.c2 * n as f64 * (eps_prime / scale).powf(2.0 / t2.a1)).exp(),
    ))
}

pub fn tail_t2_c1(
    eps: f64,
    tau: f64,
    n: usize,
    spec: &RiskSpec,
    beta: f64,
    gamma_exp: f64,
    p: &BoundParams,
) -> Result<f64> {
    tail_t2_c1_c(eps, tau, n, &extract_t2(spec)?, beta, gamma_exp, p)
}

/// Additive correction of the fixed-truncation type-2 bound under the
/// sub-exponential class with moment constant `c_se`.
pub fn t2_subexp_correction(t2: &T2Constants, tau: f64, c_se: f64) -> f64 {
    t2.l2 / (c_se * t2.a2) * (-t2.a2 * c_se * t2.k1 * tau).exp()
        + t2.l3 / (c_se * t2.a3) * (-t2.a3 * c_se * t2.k2 * tau).exp()
}

/// Fixed-truncation type-2 tail bound under the sub-exponential class,
/// constants supplied directly.
pub fn tail_t2_subexp_c(
    eps: f64,
    tau: f64,
    n: usize,
    t2: &T2Constants,
    c_se: f64,
    p: &BoundParams,
) -> Result<f64> {
    if !(c_se > 0.0) || !(tau > 0.0) {
        return Err(Error::InvalidParameter("need c_se > 0 and tau > 0".into()));
    }
    let eps_prime = eps - t2_subexp_correction(t2, tau, c_se);
    if !(eps_prime > 0.0) {
        return Err(Error::BoundNotApplicable(format!(
            "eps = {eps} does not exceed the truncation correction"
        )));
    }
    let n_f = n as f64;
    let scale = t2.l1 * tau.powf(t2.gamma);
    let t = (eps_prime / scale).powf(1.0 / t2.a1);
    let shift = p.c2 / n_f.sqrt();
    if !(t > shift) {
        return Err(Error::BoundNotApplicable(format!(
            "(eps'/scale)^(1/a1) = {t} must exceed c2/sqrt(n) = {shift}"
        )));
    }
    Ok(clamp01((-p.c1 * n_f * (t - shift).powi(2)).exp()))
}

pub fn tail_t2_subexp(
    eps: f64,
    tau: f64,
    n: usize,
    spec: &RiskSpec,
    c_se: f64,
    p: &BoundParams,
) -> Result<f64> {
    tail_t2_subexp_c(eps, tau, n, &extract_t2(spec)?, c_se, p)
}

// ---------------------------------------------------------------------------
// Radius inversion
// ---------------------------------------------------------------------------

/// Smallest `eps` at which the applicable tail bound drops to `delta`,
/// inverted in closed form on the small-`eps` branch. Supported pairs:
/// type-1 measure with a sub-Gaussian source, type-2 measure with a
/// bounded source.
pub fn radius(
    delta: f64,
    n: usize,
    spec: &RiskSpec,
    dist: &crate::distributions::DistSpec,
    p: &BoundParams,
) -> Result<f64> {
    use crate::distributions::TailClass;
    use crate::risk::TypeConstants;
    if !(0.0 < delta && delta < 1.0) {
        return Err(Error::InvalidLevel(delta));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("need n >= 1".into()));
    }
    let n_f = n as f64;
    match spec.constants() {
        TypeConstants::T1 { l, kappa } => match dist.tail() {
            TailClass::SubGaussian { .. } => {
                Ok(l * ((2.0 * p.c1 / delta).ln() / (p.c2 * n_f)).powf(kappa / 2.0))
            }
            _ => Err(Error::Unsupported(
                "radius inversion for type-1 measures requires a sub-Gaussian source".into(),
            )),
        },
        TypeConstants::T2(t2) => match dist.support() {
            Some((b1, b2)) => {
                let tau = tau_bounded(&t2, b1, b2);
                Ok(t2.l1
                    * tau.powf(t2.gamma)
                    * ((p.c1 / delta).ln() / (p.c2 * n_f)).powf(t2.a1 / 2.0))
            }
            None => Err(Error::Unsupported(
                "radius inversion for type-2 measures requires bounded support".into(),
            )),
        },
    }
}
