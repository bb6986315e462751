//! Seeded samplers for the three distribution classes, closed-form and
//! quadrature ground-truth risk values, and EDF construction.
//!
//! A [`DistSpec`] pairs a concrete family with a declared tail class
//! (sub-Gaussian, sub-exponential, or heavy-tailed with a polynomial moment
//! bound). The tail class is declared, not inferred, and consistency between
//! the two is checked at construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Continuous, ContinuousCDF, Normal, StudentsT};

use crate::quadrature::adaptive_simpson;
use crate::risk::{RiskSpec, Spectrum, Utility};
use crate::{Edf, Error, Result};

/// Absolute tolerance of the quadrature oracles. Chosen so the oracle error
/// is negligible against estimator noise.
const QUAD_TOL: f64 = 1e-8;

/// Distribution family with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    BoundedUniform { a: f64, b: f64 },
    BernoulliScaled { p: f64, lo: f64, hi: f64 },
    Gaussian { mu: f64, sigma: f64 },
    Laplace { mu: f64, b: f64 },
    Exponential { lambda: f64 },
    Pareto {
        scale: f64,
        shape: f64,
        /// Shift samples to mean zero.
        #[serde(default)]
        center: bool,
    },
    StudentT { nu: f64, scale: f64 },
}

/// Declared tail class with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailClass {
    SubGaussian { sigma: f64 },
    SubExponential { c: f64 },
    /// Polynomial moment bound: `E|X|^beta < moment_bound` with `beta > 2`.
    HeavyTail { beta: f64, moment_bound: f64 },
}

/// A source distribution together with its tail class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistSpecRaw")]
pub struct DistSpec {
    family: Family,
    tail: TailClass,
}

#[derive(Deserialize)]
struct DistSpecRaw {
    family: Family,
    tail: TailClass,
}

impl TryFrom<DistSpecRaw> for DistSpec {
    type Error = Error;
    fn try_from(raw: DistSpecRaw) -> Result<Self> {
        DistSpec::new(raw.family, raw.tail)
    }
}

impl DistSpec {
    /// Validates family parameters and family/tail-class consistency.
    pub fn new(family: Family, tail: TailClass) -> Result<Self> {
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.into()));
        match &family {
            Family::BoundedUniform { a, b } => {
                if !(a < b) {
                    return bad("bounded-uniform requires a < b");
                }
            }
            Family::BernoulliScaled { p, lo, hi } => {
                if !(0.0..=1.0).contains(p) {
                    return bad("bernoulli-scaled requires p in [0,1]");
                }
                if !(lo <= hi) {
                    return bad("bernoulli-scaled requires lo <= hi");
                }
            }
            Family::Gaussian { sigma, .. } => {
                if !(*sigma > 0.0) {
                    return bad("gaussian requires sigma > 0");
                }
            }
            Family::Laplace { b, .. } => {
                if !(*b > 0.0) {
                    return bad("laplace requires b > 0");
                }
            }
            Family::Exponential { lambda } => {
                if !(*lambda > 0.0) {
                    return bad("exponential requires lambda > 0");
                }
            }
            Family::Pareto { scale, shape, .. } => {
                if !(*scale > 0.0) || !(*shape > 1.0) {
                    return bad("pareto requires scale > 0 and shape > 1");
                }
            }
            Family::StudentT { nu, scale } => {
                if !(*nu > 2.0) {
                    return bad("student-t requires nu > 2");
                }
                if !(*scale > 0.0) {
                    return bad("student-t requires scale > 0");
                }
            }
        }
        match (&family, &tail) {
            (
                Family::BoundedUniform { .. }
                | Family::BernoulliScaled { .. }
                | Family::Gaussian { .. },
                TailClass::SubGaussian { sigma },
            ) => {
                if !(*sigma > 0.0) {
                    return bad("sub-gaussian parameter sigma must be positive");
                }
            }
            (
                Family::Laplace { .. } | Family::Exponential { .. },
                TailClass::SubExponential { c },
            ) => {
                if !(*c > 0.0) {
                    return bad("sub-exponential parameter c must be positive");
                }
            }
            (
                Family::Pareto { shape, .. },
                TailClass::HeavyTail { beta, moment_bound },
            ) => {
                if !(*beta > 2.0) {
                    return bad("heavy-tail requires beta > 2");
                }
                if !(beta < shape) {
                    return bad("pareto moment condition requires beta < shape");
                }
                if !(*moment_bound > 0.0) {
                    return bad("moment bound must be positive");
                }
            }
            (Family::StudentT { nu, .. }, TailClass::HeavyTail { beta, moment_bound }) => {
                if !(*beta > 2.0) {
                    return bad("heavy-tail requires beta > 2");
                }
                if !(beta < nu) {
                    return bad("student-t moment condition requires beta < nu");
                }
                if !(*moment_bound > 0.0) {
                    return bad("moment bound must be positive");
                }
            }
            _ => return bad("family and tail class are inconsistent"),
        }
        Ok(Self { family, tail })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn tail(&self) -> &TailClass {
        &self.tail
    }

    /// Support bounds `(B1, B2)` such that `X` lies a.s. in `[-B2, B1]`,
    /// when the family is bounded.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self.family {
            Family::BoundedUniform { a, b } => Some((b.max(0.0), (-a).max(0.0))),
            Family::BernoulliScaled { lo, hi, .. } => Some((hi.max(0.0), (-lo).max(0.0))),
            _ => None,
        }
    }

    /// Distribution mean.
    pub fn mean(&self) -> f64 {
        match self.family {
            Family::BoundedUniform { a, b } => 0.5 * (a + b),
            Family::BernoulliScaled { p, lo, hi } => lo + p * (hi - lo),
            Family::Gaussian { mu, .. } => mu,
            Family::Laplace { mu, .. } => mu,
            Family::Exponential { lambda } => 1.0 / lambda,
            Family::Pareto { scale, shape, center } => {
                if center {
                    0.0
                } else {
                    shape * scale / (shape - 1.0)
                }
            }
            Family::StudentT { .. } => 0.0,
        }
    }

    /// CDF of the family at `x`.
    pub fn cdf(&self, x: f64) -> f64 {
        match self.family {
            Family::BoundedUniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            Family::BernoulliScaled { p, lo, hi } => {
                if x < lo {
                    0.0
                } else if x < hi {
                    1.0 - p
                } else {
                    1.0
                }
            }
            Family::Gaussian { mu, sigma } => {
                Normal::new(mu, sigma).expect("validated").cdf(x)
            }
            Family::Laplace { mu, b } => {
                if x < mu {
                    0.5 * ((x - mu) / b).exp()
                } else {
                    1.0 - 0.5 * (-(x - mu) / b).exp()
                }
            }
            Family::Exponential { lambda } => {
                if x <= 0.0 {
                    0.0
                } else {
                    1.0 - (-lambda * x).exp()
                }
            }
            Family::Pareto { scale, shape, center } => {
                let shift = if center { shape * scale / (shape - 1.0) } else { 0.0 };
                let y = x + shift;
                if y < scale {
                    0.0
                } else {
                    1.0 - (scale / y).powf(shape)
                }
            }
            Family::StudentT { nu, scale } => StudentsT::new(0.0, 1.0, nu)
                .expect("validated")
                .cdf(x / scale),
        }
    }

    /// Generalized inverse CDF at `beta` in `(0, 1)`.
    pub fn quantile(&self, beta: f64) -> f64 {
        let beta = beta.clamp(1e-15, 1.0 - 1e-15);
        match self.family {
            Family::BoundedUniform { a, b } => a + beta * (b - a),
            Family::BernoulliScaled { p, lo, hi } => {
                if beta <= 1.0 - p {
                    lo
                } else {
                    hi
                }
            }
            Family::Gaussian { mu, sigma } => {
                Normal::new(mu, sigma).expect("validated").inverse_cdf(beta)
            }
            Family::Laplace { mu, b } => {
                if beta < 0.5 {
                    mu + b * (2.0 * beta).ln()
                } else {
                    mu - b * (2.0 * (1.0 - beta)).ln()
                }
            }
            Family::Exponential { lambda } => -(1.0 - beta).ln() / lambda,
            Family::Pareto { scale, shape, center } => {
                let shift = if center { shape * scale / (shape - 1.0) } else { 0.0 };
                scale * (1.0 - beta).powf(-1.0 / shape) - shift
            }
            Family::StudentT { nu, scale } => {
                scale
                    * StudentsT::new(0.0, 1.0, nu)
                        .expect("validated")
                        .inverse_cdf(beta)
            }
        }
    }
}

/// SplitMix64 step, used to derive independent per-(seed, tag) streams.
pub fn derive_seed(seed: u64, tags: &[u64]) -> u64 {
    let mut z = seed;
    let step = |mut x: u64| {
        x = x.wrapping_add(0x9E3779B97F4A7C15);
        x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
        x ^ (x >> 31)
    };
    z = step(z);
    for &t in tags {
        z = step(z ^ t);
    }
    z
}

/// Draws `n` i.i.d. samples from `spec` in stream order (unsorted).
/// Deterministic in `(spec, n, seed)`; a prefix of a longer stream with the
/// same seed is identical.
pub fn draws(spec: &DistSpec, n: usize, seed: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[0x5a_17]));
    let mut out = Vec::with_capacity(n);
    match spec.family {
        Family::BoundedUniform { a, b } => {
            for _ in 0..n {
                out.push(rng.gen_range(a..b));
            }
        }
        Family::BernoulliScaled { p, lo, hi } => {
            for _ in 0..n {
                out.push(if rng.gen::<f64>() < p { hi } else { lo });
            }
        }
        Family::Gaussian { mu, sigma } => {
            let d = rand_distr::Normal::new(mu, sigma)
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            for _ in 0..n {
                out.push(d.sample(&mut rng));
            }
        }
        Family::Laplace { mu, b } => {
            for _ in 0..n {
                let u: f64 = rng.gen::<f64>() - 0.5;
                out.push(mu - b * u.signum() * (1.0 - 2.0 * u.abs()).ln());
            }
        }
        Family::Exponential { lambda } => {
            let d = rand_distr::Exp::new(lambda)
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            for _ in 0..n {
                out.push(d.sample(&mut rng));
            }
        }
        Family::Pareto { scale, shape, center } => {
            let d = rand_distr::Pareto::new(scale, shape)
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            let shift = if center { shape * scale / (shape - 1.0) } else { 0.0 };
            for _ in 0..n {
                out.push(d.sample(&mut rng) - shift);
            }
        }
        Family::StudentT { nu, scale } => {
            let d = rand_distr::StudentT::new(nu)
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            for _ in 0..n {
                out.push(scale * d.sample(&mut rng));
            }
        }
    }
    Ok(out)
}

/// Draws `n` i.i.d. samples from `spec` into an EDF. Deterministic in
/// `(spec, n, seed)`.
pub fn sample(spec: &DistSpec, n: usize, seed: u64) -> Result<Edf> {
    Edf::new(draws(spec, n, seed)?)
}

/// A ground-truth risk value: either a closed form or a high-precision
/// quadrature value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrueRisk {
    Exact(f64),
    Numerical(f64),
}

impl TrueRisk {
    pub fn value(&self) -> f64 {
        match *self {
            TrueRisk::Exact(v) | TrueRisk::Numerical(v) => v,
        }
    }
}

/// Exact risk value of `risk` under `spec`, when a closed form or a
/// quadrature route is implemented. `None` means "absent".
pub fn true_risk(spec: &DistSpec, risk: &RiskSpec) -> Option<TrueRisk> {
    match risk {
        RiskSpec::Cvar { alpha } => true_cvar(spec, *alpha),
        RiskSpec::Srm { spectrum } => match spectrum {
            Spectrum::Constant => Some(TrueRisk::Exact(spec.mean())),
            Spectrum::CvarTail { alpha } => true_cvar(spec, *alpha),
            _ => {
                if is_discrete(spec) {
                    return None;
                }
                let v = quantile_quadrature(spec, &|beta| spectrum.density(beta));
                Some(TrueRisk::Numerical(v))
            }
        },
        RiskSpec::Ubsr { utility, target, .. } => match utility {
            Utility::Linear { slope } => {
                Some(TrueRisk::Exact(spec.mean() - target / slope))
            }
            _ => {
                if is_discrete(spec) {
                    return None;
                }
                Some(TrueRisk::Numerical(true_ubsr_numeric(spec, utility, *target)?))
            }
        },
        RiskSpec::Cpt { params } => {
            if is_discrete(spec) {
                return None;
            }
            let gain = adaptive_simpson(
                &|x: f64| params.w_gain.eval(1.0 - spec.cdf(x)) * params.u_gain_deriv(x),
                0.0,
                upper_limit(spec),
                QUAD_TOL,
            );
            let loss = adaptive_simpson(
                &|y: f64| params.w_loss.eval(spec.cdf(-y)) * params.u_loss_deriv(-y),
                0.0,
                lower_limit(spec),
                QUAD_TOL,
            );
            Some(TrueRisk::Numerical(gain - loss))
        }
        RiskSpec::Rdeu { utility, weight } => {
            if is_discrete(spec) {
                return None;
            }
            let gain = adaptive_simpson(
                &|x: f64| (1.0 - weight.eval(spec.cdf(x))) * utility.deriv(x),
                0.0,
                upper_limit(spec),
                QUAD_TOL,
            );
            let loss = adaptive_simpson(
                &|y: f64| weight.eval(spec.cdf(-y)) * utility.deriv(-y),
                0.0,
                lower_limit(spec),
                QUAD_TOL,
            );
            Some(TrueRisk::Numerical(gain - loss))
        }
    }
}

fn is_discrete(spec: &DistSpec) -> bool {
    matches!(spec.family, Family::BernoulliScaled { .. })
}

/// Integration cutoff beyond which the upper tail is negligible.
fn upper_limit(spec: &DistSpec) -> f64 {
    match spec.family {
        Family::BoundedUniform { b, .. } => b.max(0.0),
        _ => spec.quantile(1.0 - 1e-14).max(0.0) + 1.0,
    }
}

fn lower_limit(spec: &DistSpec) -> f64 {
    match spec.family {
        Family::BoundedUniform { a, .. } => (-a).max(0.0),
        _ => (-spec.quantile(1e-14)).max(0.0) + 1.0,
    }
}

fn true_cvar(spec: &DistSpec, alpha: f64) -> Option<TrueRisk> {
    if !(0.0 < alpha && alpha < 1.0) {
        return None;
    }
    match spec.family {
        Family::Gaussian { mu, sigma } => {
            let std = Normal::new(0.0, 1.0).expect("unit normal");
            let z = std.inverse_cdf(alpha);
            Some(TrueRisk::Exact(mu + sigma * std.pdf(z) / (1.0 - alpha)))
        }
        Family::BoundedUniform { a, b } => {
            Some(TrueRisk::Exact(a + (b - a) * (1.0 + alpha) / 2.0))
        }
        Family::BernoulliScaled { p, lo, hi } => {
            // Average of the quantile function over (alpha, 1].
            let v = if alpha >= 1.0 - p {
                hi
            } else {
                ((1.0 - p - alpha) * lo + p * hi) / (1.0 - alpha)
            };
            Some(TrueRisk::Exact(v))
        }
        Family::Exponential { lambda } => {
            Some(TrueRisk::Exact((1.0 - (1.0 - alpha).ln()) / lambda))
        }
        Family::Pareto { scale, shape, center } => {
            let shift = if center { shape * scale / (shape - 1.0) } else { 0.0 };
            let v = scale * shape / (shape - 1.0) * (1.0 - alpha).powf(-1.0 / shape);
            Some(TrueRisk::Exact(v - shift))
        }
        _ => {
            let v = quantile_quadrature(spec, &|beta| {
                if beta >= alpha {
                    1.0 / (1.0 - alpha)
                } else {
                    0.0
                }
            });
            Some(TrueRisk::Numerical(v))
        }
    }
}

/// Quadrature of `weight(beta) * F^{-1}(beta)` over the unit interval.
fn quantile_quadrature(spec: &DistSpec, weight: &dyn Fn(f64) -> f64) -> f64 {
    let eps = 1e-12;
    adaptive_simpson(
        &|beta: f64| weight(beta) * spec.quantile(beta),
        eps,
        1.0 - eps,
        QUAD_TOL,
    )
}

fn true_ubsr_numeric(spec: &DistSpec, utility: &Utility, target: f64) -> Option<f64> {
    let g = |xi: f64| {
        let eps = 1e-12;
        adaptive_simpson(
            &|beta: f64| utility.eval(spec.quantile(beta) - xi),
            eps,
            1.0 - eps,
            QUAD_TOL,
        )
    };
    // g is nonincreasing in xi; bracket then bisect.
    let mut lo = spec.quantile(1e-9) - 1.0;
    let mut hi = spec.quantile(1.0 - 1e-9) + 1.0;
    let mut width = hi - lo;
    for _ in 0..60 {
        if g(lo) > target && g(hi) <= target {
            break;
        }
        width *= 2.0;
        if g(lo) <= target {
            lo -= width;
        }
        if g(hi) > target {
            hi += width;
        }
    }
    if !(g(lo) > target && g(hi) <= target) {
        return None;
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if g(mid) <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::risk::RiskSpec;

    fn gaussian(mu: f64, sigma: f64) -> DistSpec {
        DistSpec::new(
            Family::Gaussian { mu, sigma },
            TailClass::SubGaussian { sigma },
        )
        .unwrap()
    }

    #[test]
    fn degenerate_bernoulli_is_constant() {
        let spec = DistSpec::new(
            Family::BernoulliScaled { p: 1.0, lo: 0.0, hi: 3.0 },
            TailClass::SubGaussian { sigma: 3.0 },
        )
        .unwrap();
        let edf = sample(&spec, 4, 123).unwrap();
        assert_eq!(edf.samples(), &[3.0, 3.0, 3.0, 3.0]);
    }

    #[test]
    fn gaussian_sample_mean_near_zero() {
        let n = 100_000;
        let edf = sample(&gaussian(0.0, 1.0), n, 7).unwrap();
        // CLT tolerance 4/sqrt(n).
        assert!(edf.mean().abs() < 4.0 / (n as f64).sqrt());
    }

    #[test]
    fn sampling_is_deterministic() {
        let spec = gaussian(1.0, 2.0);
        assert_eq!(sample(&spec, 500, 42).unwrap(), sample(&spec, 500, 42).unwrap());
    }

    #[test]
    fn samples_are_sorted() {
        let edf = sample(&gaussian(0.0, 1.0), 1000, 9).unwrap();
        assert!(edf.samples().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(DistSpec::new(
            Family::Gaussian { mu: 0.0, sigma: -1.0 },
            TailClass::SubGaussian { sigma: 1.0 },
        )
        .is_err());
        // student-t with nu <= 2 violates the moment condition
        assert!(DistSpec::new(
            Family::StudentT { nu: 2.0, scale: 1.0 },
            TailClass::HeavyTail { beta: 1.5, moment_bound: 10.0 },
        )
        .is_err());
        // pareto declared sub-gaussian is inconsistent
        assert!(DistSpec::new(
            Family::Pareto { scale: 1.0, shape: 3.0, center: false },
            TailClass::SubGaussian { sigma: 1.0 },
        )
        .is_err());
    }

    #[test]
    fn gaussian_cvar_closed_form() {
        let v = true_risk(&gaussian(0.0, 1.0), &RiskSpec::Cvar { alpha: 0.95 }).unwrap();
        assert!((v.value() - 2.0627128).abs() < 1e-6);
    }

    #[test]
    fn constant_spectrum_gives_mean() {
        let spec = gaussian(1.5, 0.5);
        let v = true_risk(&spec, &RiskSpec::Srm { spectrum: Spectrum::Constant }).unwrap();
        assert_eq!(v.value(), 1.5);
    }

    #[test]
    fn bernoulli_cvar_discrete_formula() {
        let spec = DistSpec::new(
            Family::BernoulliScaled { p: 0.5, lo: 0.0, hi: 1.0 },
            TailClass::SubGaussian { sigma: 1.0 },
        )
        .unwrap();
        let v = true_risk(&spec, &RiskSpec::Cvar { alpha: 0.5 }).unwrap();
        assert_eq!(v.value(), 1.0);
    }

    #[test]
    fn subgaussian_tail_sanity() {
        // Empirical tails dominated by 2 exp(-eps^2 / (2 (2 sigma)^2)).
        let sigma = 1.0;
        let edf = sample(&gaussian(0.0, sigma), 1_000_000, 11).unwrap();
        let n = edf.n() as f64;
        for k in [1.0, 2.0, 3.0] {
            let eps = k * sigma;
            let exceed = edf
                .samples()
                .iter()
                .filter(|x| x.abs() >= eps)
                .count() as f64
                / n;
            let bound = 2.0 * (-eps * eps / (2.0 * (2.0 * sigma).powi(2))).exp();
            assert!(exceed <= bound, "eps={eps}: {exceed} > {bound}");
        }
    }

    #[test]
    fn laplace_quantile_cdf_roundtrip() {
        let spec = DistSpec::new(
            Family::Laplace { mu: 0.5, b: 2.0 },
            TailClass::SubExponential { c: 0.5 },
        )
        .unwrap();
        for beta in [0.05, 0.3, 0.5, 0.7, 0.99] {
            let x = spec.quantile(beta);
            assert!((spec.cdf(x) - beta).abs() < 1e-12);
        }
    }
}
