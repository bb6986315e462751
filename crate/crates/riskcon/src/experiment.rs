//! Config-driven experiment runner emitting deterministic CSV.
//!
//! Each invocation runs one experiment described by a TOML config. Trials
//! parallelize across a worker pool with per-(n, trial) derived seeds, and
//! rows are assembled in key order, so the output is a pure function of the
//! config.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bandit::{self, BanditConfig};
use crate::bounds::{self, BoundParams};
use crate::distributions::{self, derive_seed, DistSpec, TailClass};
use crate::risk::{self, RiskSpec, TypeConstants};
use crate::wasserstein;
use crate::{Edf, Error, Result};

/// Experiment kind; must match the CLI subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Estimate,
    Concentration,
    Continuity,
    Bandit,
    Selftest,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Estimate => "estimate",
            Kind::Concentration => "concentration",
            Kind::Continuity => "continuity",
            Kind::Bandit => "bandit",
            Kind::Selftest => "selftest",
        }
    }
}

fn one() -> usize {
    1
}

/// Declarative description of a single experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: Kind,
    #[serde(default)]
    pub seed: u64,
    pub dist: Option<DistSpec>,
    pub risk: Option<RiskSpec>,
    /// Sample sizes (estimate/concentration) or report horizons (bandit).
    #[serde(default)]
    pub sizes: Vec<usize>,
    /// Trials per n; doubles as the pair count for continuity runs.
    #[serde(default = "one")]
    pub trials: usize,
    #[serde(default)]
    pub eps_grid: Vec<f64>,
    #[serde(default)]
    pub bounds: BoundParams,
    pub bandit: Option<BanditConfig>,
    /// Number of independent bandit runs.
    #[serde(default = "one")]
    pub bandit_seeds: usize,
    /// Also run the uniform-random baseline policy (bandit kind).
    #[serde(default)]
    pub baseline: bool,
}

impl ExperimentConfig {
    fn dist(&self) -> Result<&DistSpec> {
        self.dist
            .as_ref()
            .ok_or_else(|| Error::Config(format!("dist: required for kind={}", self.kind.name())))
    }

    fn risk(&self) -> Result<&RiskSpec> {
        self.risk
            .as_ref()
            .ok_or_else(|| Error::Config(format!("risk: required for kind={}", self.kind.name())))
    }

    fn validate(&self) -> Result<()> {
        self.bounds.validate().map_err(|e| Error::Config(format!("bounds: {e}")))?;
        if self.trials == 0 {
            return Err(Error::Config("trials: must be >= 1".into()));
        }
        match self.kind {
            Kind::Estimate | Kind::Concentration => {
                self.dist()?;
                self.risk()?;
                if self.sizes.is_empty() {
                    return Err(Error::Config("sizes: must be nonempty".into()));
                }
                if self.kind == Kind::Concentration && self.eps_grid.is_empty() {
                    return Err(Error::Config("eps_grid: must be nonempty".into()));
                }
            }
            Kind::Continuity => {
                self.risk()?;
            }
            Kind::Bandit => {
                let b = self
                    .bandit
                    .as_ref()
                    .ok_or_else(|| Error::Config("bandit: required for kind=bandit".into()))?;
                b.validate().map_err(|e| Error::Config(format!("bandit: {e}")))?;
                if self.bandit_seeds == 0 {
                    return Err(Error::Config("bandit_seeds: must be >= 1".into()));
                }
                for &n in &self.sizes {
                    if n > b.horizon || n == 0 {
                        return Err(Error::Config(
                            "sizes: bandit report horizons must lie in [1, horizon]".into(),
                        ));
                    }
                }
            }
            Kind::Selftest => {}
        }
        Ok(())
    }
}

/// Fixed-width scientific float formatting: 12 significant digits, so the
/// CSV round-trips through oracle comparisons without loss.
pub fn fmt(x: f64) -> String {
    format!("{x:.11e}")
}

fn p95(sorted: &[f64]) -> f64 {
    let m = sorted.len();
    let idx = ((0.95 * m as f64).ceil() as usize).clamp(1, m) - 1;
    sorted[idx]
}

/// Truncation level for the estimator if the measure is of the truncated
/// class, `None` otherwise.
fn tau_for(risk_spec: &RiskSpec, dist: &DistSpec, n: usize) -> Result<Option<f64>> {
    match risk_spec.constants() {
        TypeConstants::T1 { .. } => Ok(None),
        TypeConstants::T2(_) => Ok(Some(risk::tau_schedule(risk_spec, dist, n)?)),
    }
}

fn trial_error(
    dist: &DistSpec,
    risk_spec: &RiskSpec,
    truth: f64,
    n: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let edf = distributions::sample(dist, n, seed)?;
    let tau = tau_for(risk_spec, dist, n)?;
    let est = risk::estimate(&edf, risk_spec, tau)?;
    Ok((est, (est - truth).abs()))
}

/// Point estimates and absolute errors per `(n, trial)`, plus per-n
/// summary rows.
pub fn run_estimate(cfg: &ExperimentConfig) -> Result<String> {
    cfg.validate()?;
    let dist = cfg.dist()?;
    let risk_spec = cfg.risk()?;
    let truth = distributions::true_risk(dist, risk_spec)
        .ok_or_else(|| Error::TrueRiskUnavailable("no oracle for this (dist, risk) pair".into()))?
        .value();

    let keys: Vec<(usize, usize)> = cfg
        .sizes
        .iter()
        .flat_map(|&n| (0..cfg.trials).map(move |t| (n, t)))
        .collect();
    let results: Vec<(f64, f64)> = keys
        .par_iter()
        .map(|&(n, t)| {
            trial_error(
                dist,
                risk_spec,
                truth,
                n,
                derive_seed(cfg.seed, &[1, n as u64, t as u64]),
            )
        })
        .collect::<Result<_>>()?;

    let mut out = String::from("n,trial,estimate,abs_error\n");
    for ((n, t), (est, err)) in keys.iter().zip(&results) {
        out.push_str(&format!("{n},{t},{},{}\n", fmt(*est), fmt(*err)));
    }
    out.push_str("n,mean_abs_error,p95_abs_error\n");
    for &n in &cfg.sizes {
        let mut errs: Vec<f64> = keys
            .iter()
            .zip(&results)
            .filter(|((kn, _), _)| *kn == n)
            .map(|(_, (_, e))| *e)
            .collect();
        errs.sort_by(f64::total_cmp);
        let mean = errs.iter().sum::<f64>() / errs.len() as f64;
        out.push_str(&format!("{n},{},{}\n", fmt(mean), fmt(p95(&errs))));
    }
    Ok(out)
}

/// Tail-bound value at `(eps, n)` for the configured (risk, dist) pair.
/// `Ok(None)` means the bound exists but its precondition fails at this
/// point; an `Unsupported` error means no bound exists for the pair.
pub fn bound_value(
    eps: f64,
    n: usize,
    risk_spec: &RiskSpec,
    dist: &DistSpec,
    p: &BoundParams,
) -> Result<Option<f64>> {
    let not_applicable = |r: Result<f64>| match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::BoundNotApplicable(_)) => Ok(None),
        Err(e) => Err(e),
    };
    match risk_spec.constants() {
        TypeConstants::T1 { l, kappa } => match *dist.tail() {
            // Sub-Gaussian satisfies the exponential-moment condition with
            // exponent 2.
            TailClass::SubGaussian { .. } => {
                Ok(Some(bounds::tail_t1_c1(eps, n, l, kappa, 2.0, p)?))
            }
            TailClass::SubExponential { .. } => {
                not_applicable(bounds::tail_t1_subexp(eps, n, l, kappa, p))
            }
            TailClass::HeavyTail { beta, .. } => Ok(Some(bounds::tail_t1_heavy(
                eps,
                n,
                l,
                kappa,
                beta,
                p.eta_for(beta),
                p,
            )?)),
        },
        TypeConstants::T2(t2) => {
            if let Some((b1, b2)) = dist.support() {
                return Ok(Some(bounds::tail_t2_bounded_c(eps, n, &t2, b1, b2, p)?));
            }
            let tau = risk::tau_schedule(risk_spec, dist, n)?;
            match *dist.tail() {
                TailClass::SubGaussian { sigma } => {
                    let gamma_exp = 1.0 / (2.0 * sigma * sigma);
                    not_applicable(bounds::tail_t2_c1_c(eps, tau, n, &t2, 2.0, gamma_exp, p))
                }
                TailClass::SubExponential { c } => {
                    not_applicable(bounds::tail_t2_subexp_c(eps, tau, n, &t2, c, p))
                }
                TailClass::HeavyTail { .. } => Err(Error::Unsupported(
                    "no tail bound for truncated measures under the heavy-tailed class".into(),
                )),
            }
        }
    }
}

/// Empirical exceedance frequencies against the applicable tail bound.
pub fn run_concentration(cfg: &ExperimentConfig) -> Result<String> {
    cfg.validate()?;
    let dist = cfg.dist()?;
    let risk_spec = cfg.risk()?;
    let truth = distributions::true_risk(dist, risk_spec)
        .ok_or_else(|| Error::TrueRiskUnavailable("no oracle for this (dist, risk) pair".into()))?
        .value();

    let mut out = String::from("n,eps,empirical_tail,bound_value,applicable\n");
    for &n in &cfg.sizes {
        let errs: Vec<f64> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                trial_error(
                    dist,
                    risk_spec,
                    truth,
                    n,
                    derive_seed(cfg.seed, &[2, n as u64, t as u64]),
                )
                .map(|(_, e)| e)
            })
            .collect::<Result<_>>()?;
        for &eps in &cfg.eps_grid {
            let tail = errs.iter().filter(|&&e| e > eps).count() as f64 / errs.len() as f64;
            let (bound, applicable) = match bound_value(eps, n, risk_spec, dist, &cfg.bounds)? {
                Some(v) => (fmt(v), 1),
                None => ("nan".to_string(), 0),
            };
            out.push_str(&format!("{n},{},{},{bound},{applicable}\n", fmt(eps), fmt(tail)));
        }
    }
    Ok(out)
}

/// One randomized continuity check; returns `(w1, lhs, rhs)`.
///
/// Measures of the plain Hoelder class compare `|rho(F) - rho(G)|` against
/// `L W1^kappa`; truncated-class measures compare `|rho(F) - rho(G|tau)|`
/// against the three-term right-hand side with the tail integrals of `F`.
pub fn continuity_case(risk_spec: &RiskSpec, pair_seed: u64) -> Result<(f64, f64, f64)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(pair_seed);
    let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
        let n = rng.gen_range(1..=120usize);
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-4.0..4.0)).collect();
        Edf::new(v)
    };
    let f = draw(&mut rng)?;
    let g = draw(&mut rng)?;
    let w1 = wasserstein::w1_edf(&f, &g)?;
    match risk_spec.constants() {
        TypeConstants::T1 { l, kappa } => {
            let lhs =
                (risk::estimate(&f, risk_spec, None)? - risk::estimate(&g, risk_spec, None)?).abs();
            Ok((w1, lhs, l * w1.powf(kappa)))
        }
        TypeConstants::T2(t2) => {
            let tau: f64 = rng.gen_range(0.5..6.0);
            let lhs = (risk::estimate(&f, risk_spec, None)?
                - risk::estimate(&g, risk_spec, Some(tau))?)
            .abs();
            let rhs = t2.l1 * w1.powf(t2.a1) * tau.powf(t2.gamma)
                + t2.l2 * risk::upper_tail_integral(&f, t2.k1 * tau, t2.a2)
                + t2.l3 * risk::lower_tail_integral(&f, t2.k2 * tau, t2.a3);
            Ok((w1, lhs, rhs))
        }
    }
}

/// Continuity-inequality audit over randomized EDF pairs.
pub fn run_continuity(cfg: &ExperimentConfig) -> Result<String> {
    cfg.validate()?;
    let risk_spec = cfg.risk()?;
    let rows: Vec<(f64, f64, f64)> = (0..cfg.trials)
        .into_par_iter()
        .map(|id| continuity_case(risk_spec, derive_seed(cfg.seed, &[3, id as u64])))
        .collect::<Result<_>>()?;
    let mut out = String::from("pair_id,w1,lhs,rhs,holds\n");
    for (id, (w1, lhs, rhs)) in rows.iter().enumerate() {
        let holds = u8::from(*lhs <= rhs + 1e-10);
        out.push_str(&format!("{id},{},{},{},{holds}\n", fmt(*w1), fmt(*lhs), fmt(*rhs)));
    }
    Ok(out)
}

/// Per-seed LCB traces plus aggregate regret statistics and the two
/// regret-bound values at each report horizon.
pub fn run_bandit(cfg: &ExperimentConfig) -> Result<String> {
    cfg.validate()?;
    let base = cfg.bandit.as_ref().expect("validated");
    let k = base.arms.len();
    let horizons = if cfg.sizes.is_empty() { vec![base.horizon] } else { cfg.sizes.clone() };

    let traces: Vec<bandit::RegretTrace> = (0..cfg.bandit_seeds)
        .into_par_iter()
        .map(|s| {
            let mut c = base.clone();
            c.seed = derive_seed(cfg.seed, &[4, s as u64]);
            bandit::run(&c)
        })
        .collect::<Result<_>>()?;

    let mut out = String::from("seed,t,arm,sample");
    for i in 1..=k {
        out.push_str(&format!(",T_{i}"));
    }
    for i in 1..=k {
        out.push_str(&format!(",est_{i}"));
    }
    for i in 1..=k {
        out.push_str(&format!(",lcb_{i}"));
    }
    out.push_str(",regret\n");
    for (s, trace) in traces.iter().enumerate() {
        for r in &trace.rounds {
            out.push_str(&format!("{s},{},{},{}", r.t, r.arm, fmt(r.sample)));
            for &c in &r.counts {
                out.push_str(&format!(",{c}"));
            }
            for &e in &r.estimates {
                out.push_str(&format!(",{}", fmt(e)));
            }
            for &l in &r.lcbs {
                out.push_str(&format!(",{}", fmt(l)));
            }
            out.push_str(&format!(",{}\n", fmt(r.regret)));
        }
    }

    out.push_str("n,mean_regret,p95_regret,gap_dep_bound,gap_free_bound\n");
    for &n in &horizons {
        let mut regrets: Vec<f64> =
            traces.iter().map(|tr| tr.rounds[n - 1].regret).collect();
        regrets.sort_by(f64::total_cmp);
        let mean = regrets.iter().sum::<f64>() / regrets.len() as f64;
        let (dep, free) = bandit::regret_bounds(base, n)?;
        out.push_str(&format!(
            "{n},{},{},{},{}\n",
            fmt(mean),
            fmt(p95(&regrets)),
            fmt(dep),
            fmt(free)
        ));
    }

    if cfg.baseline {
        let base_regrets: Vec<Vec<f64>> = (0..cfg.bandit_seeds)
            .into_par_iter()
            .map(|s| {
                let mut c = base.clone();
                c.seed = derive_seed(cfg.seed, &[4, s as u64]);
                bandit::run_uniform(&c)
                    .map(|tr| tr.rounds.iter().map(|r| r.regret).collect())
            })
            .collect::<Result<_>>()?;
        out.push_str("n,baseline_mean_regret\n");
        for &n in &horizons {
            let mean = base_regrets.iter().map(|r| r[n - 1]).sum::<f64>()
                / base_regrets.len() as f64;
            out.push_str(&format!("{n},{}\n", fmt(mean)));
        }
    }
    Ok(out)
}

fn grid_w1_oracle(f: &Edf, g: &Edf) -> f64 {
    // Brute-force vertical integral over [-5, 5] with step 1e-4.
    let step = 1e-4;
    let m = (10.0 / step) as usize;
    (0..m)
        .map(|i| {
            let x = -5.0 + (i as f64 + 0.5) * step;
            (f.eval(x) - g.eval(x)).abs() * step
        })
        .sum()
}

fn grid_cvar_oracle(f: &Edf, alpha: f64) -> f64 {
    // Brute-force minimization of xi + mean(x - xi)^+ / (1 - alpha) over a
    // xi grid with step 1e-4.
    let step = 1e-4;
    let (lo, hi) = (f.min(), f.max());
    let m = ((hi - lo) / step).ceil() as usize + 1;
    let n = f.n() as f64;
    (0..=m)
        .map(|i| {
            let xi = lo + i as f64 * step;
            let excess: f64 = f.samples().iter().map(|x| (x - xi).max(0.0)).sum();
            xi + excess / (n * (1.0 - alpha))
        })
        .fold(f64::INFINITY, f64::min)
}

/// Quick brute-force oracle audit; rows `check,status`.
pub fn run_selftest(cfg: &ExperimentConfig) -> Result<String> {
    use rand::{Rng, SeedableRng};
    cfg.validate()?;
    let mut checks: Vec<(&str, bool)> = Vec::new();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, &[5]));

    let draw = |rng: &mut rand_chacha::ChaCha8Rng, max_n: usize| {
        let n = rng.gen_range(1..=max_n);
        Edf::new((0..n).map(|_| rng.gen_range(-4.9..4.9)).collect()).expect("nonempty")
    };

    let mut w1_ok = true;
    for _ in 0..20 {
        let f = draw(&mut rng, 60);
        let g = draw(&mut rng, 60);
        let exact = wasserstein::w1_edf(&f, &g)?;
        let quant = wasserstein::w1_quantile(&f, &g)?;
        w1_ok &= (exact - quant).abs() < 1e-10;
        w1_ok &= (exact - grid_w1_oracle(&f, &g)).abs() < 1e-3;
    }
    checks.push(("w1_grid_oracle", w1_ok));

    let mut cvar_ok = true;
    for _ in 0..20 {
        let f = draw(&mut rng, 40);
        for alpha in [0.1, 0.5, 0.9] {
            let closed = risk::cvar(&f, alpha)?;
            cvar_ok &= (closed - grid_cvar_oracle(&f, alpha)).abs() < 1e-3;
        }
    }
    checks.push(("cvar_grid_oracle", cvar_ok));

    let mut rdeu_ok = true;
    for _ in 0..100 {
        let f = draw(&mut rng, 80);
        let u = risk::RdeuUtility::LinearTanh { a: rng.gen_range(0.5..2.0), c: rng.gen_range(0.0..1.0) };
        let w = risk::Weight::Power { h: rng.gen_range(0.3..1.0) };
        // Direct rank-dependent sum over the quantile cells.
        let n = f.n() as f64;
        let direct: f64 = f
            .samples()
            .iter()
            .enumerate()
            .map(|(idx, &x)| {
                let i = idx as f64 + 1.0;
                u.eval(x) * (w.eval(i / n) - w.eval((i - 1.0) / n))
            })
            .sum();
        rdeu_ok &= (risk::rdeu(&f, &u, &w) - direct).abs() < 1e-12;
    }
    checks.push(("rdeu_direct_sum", rdeu_ok));

    let mut cont_ok = true;
    let cvar_spec = RiskSpec::Cvar { alpha: 0.9 };
    for id in 0..200u64 {
        let (_, lhs, rhs) = continuity_case(&cvar_spec, derive_seed(cfg.seed, &[6, id]))?;
        cont_ok &= lhs <= rhs + 1e-10;
    }
    checks.push(("cvar_continuity", cont_ok));

    let mut out = String::from("check,status\n");
    for (name, ok) in checks {
        out.push_str(&format!("{name},{}\n", if ok { "pass" } else { "fail" }));
    }
    Ok(out)
}

/// Dispatches on the config kind.
pub fn run(cfg: &ExperimentConfig) -> Result<String> {
    match cfg.kind {
        Kind::Estimate => run_estimate(cfg),
        Kind::Concentration => run_concentration(cfg),
        Kind::Continuity => run_continuity(cfg),
        Kind::Bandit => run_bandit(cfg),
        Kind::Selftest => run_selftest(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::Family;

    fn gaussian_cfg(kind: Kind) -> ExperimentConfig {
        ExperimentConfig {
            kind,
            seed: 11,
            dist: Some(
                DistSpec::new(
                    Family::Gaussian { mu: 0.0, sigma: 1.0 },
                    TailClass::SubGaussian { sigma: 1.0 },
                )
                .unwrap(),
            ),
            risk: Some(RiskSpec::Cvar { alpha: 0.9 }),
            sizes: vec![50, 100],
            trials: 8,
            eps_grid: vec![0.2, 0.5],
            bounds: BoundParams::default(),
            bandit: None,
            bandit_seeds: 1,
            baseline: false,
        }
    }

    #[test]
    fn estimate_csv_shape_and_determinism() {
        let cfg = gaussian_cfg(Kind::Estimate);
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        assert_eq!(a, b);
        let lines: Vec<&str> = a.lines().collect();
        assert_eq!(lines[0], "n,trial,estimate,abs_error");
        // 16 detail rows + 2 headers + 2 summary rows.
        assert_eq!(lines.len(), 20);
        assert_eq!(lines[17], "n,mean_abs_error,p95_abs_error");
    }

    #[test]
    fn estimate_point_mass_zero_error() {
        let mut cfg = gaussian_cfg(Kind::Estimate);
        cfg.dist = Some(
            DistSpec::new(
                Family::BernoulliScaled { p: 1.0, lo: 2.0, hi: 2.0 },
                TailClass::SubGaussian { sigma: 1.0 },
            )
            .unwrap(),
        );
        let out = run(&cfg).unwrap();
        for line in out.lines().skip(1).take(16) {
            let err: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
            assert_eq!(err, 0.0);
        }
    }

    #[test]
    fn concentration_rows_and_monotonicity() {
        let mut cfg = gaussian_cfg(Kind::Concentration);
        cfg.trials = 64;
        let out = run(&cfg).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "n,eps,empirical_tail,bound_value,applicable");
        assert_eq!(lines.len(), 1 + 2 * 2);
        // Empirical tail nonincreasing in eps at each n.
        for chunk in lines[1..].chunks(2) {
            let tail = |l: &str| l.split(',').nth(2).unwrap().parse::<f64>().unwrap();
            assert!(tail(chunk[0]) >= tail(chunk[1]));
        }
    }

    #[test]
    fn concentration_subexp_not_applicable_flagged() {
        let mut cfg = gaussian_cfg(Kind::Concentration);
        cfg.dist = Some(
            DistSpec::new(
                Family::Exponential { lambda: 1.0 },
                TailClass::SubExponential { c: 1.0 },
            )
            .unwrap(),
        );
        cfg.risk = Some(RiskSpec::Cvar { alpha: 0.5 });
        cfg.sizes = vec![4];
        cfg.trials = 4;
        cfg.eps_grid = vec![1e-6, 1.0];
        let out = run(&cfg).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert!(lines[1].ends_with(",nan,0"));
        assert!(lines[2].ends_with(",1"));
    }

    #[test]
    fn continuity_all_hold() {
        let mut cfg = gaussian_cfg(Kind::Continuity);
        cfg.trials = 50;
        let out = run(&cfg).unwrap();
        for line in out.lines().skip(1) {
            assert!(line.ends_with(",1"), "violated: {line}");
        }
        // Truncated-class variant.
        cfg.risk = Some(RiskSpec::Cpt { params: crate::risk::CptParams::tversky() });
        let out = run(&cfg).unwrap();
        for line in out.lines().skip(1) {
            assert!(line.ends_with(",1"), "violated: {line}");
        }
    }

    #[test]
    fn bandit_csv_aggregate() {
        let arm = |mu: f64| {
            DistSpec::new(
                Family::Gaussian { mu, sigma: 1.0 },
                TailClass::SubGaussian { sigma: 1.0 },
            )
            .unwrap()
        };
        let cfg = ExperimentConfig {
            kind: Kind::Bandit,
            seed: 5,
            dist: None,
            risk: None,
            sizes: vec![20, 40],
            trials: 1,
            eps_grid: vec![],
            bounds: BoundParams::default(),
            bandit: Some(BanditConfig {
                arms: vec![arm(0.0), arm(1.0)],
                risk: RiskSpec::Cvar { alpha: 0.9 },
                horizon: 40,
                bounds: BoundParams::default(),
                seed: 0,
            }),
            bandit_seeds: 3,
            baseline: true,
        };
        let out = run(&cfg).unwrap();
        assert!(out.starts_with("seed,t,arm,sample,T_1,T_2,est_1,est_2,lcb_1,lcb_2,regret\n"));
        assert!(out.contains("n,mean_regret,p95_regret,gap_dep_bound,gap_free_bound\n"));
        assert!(out.contains("n,baseline_mean_regret\n"));
        assert_eq!(run(&cfg).unwrap(), out);
    }

    #[test]
    fn selftest_passes() {
        let cfg = ExperimentConfig {
            kind: Kind::Selftest,
            seed: 1,
            dist: None,
            risk: None,
            sizes: vec![],
            trials: 1,
            eps_grid: vec![],
            bounds: BoundParams::default(),
            bandit: None,
            bandit_seeds: 1,
            baseline: false,
        };
        let out = run(&cfg).unwrap();
        for line in out.lines().skip(1) {
            assert!(line.ends_with(",pass"), "{line}");
        }
    }

    #[test]
    fn config_validation_errors_name_fields() {
        let mut cfg = gaussian_cfg(Kind::Estimate);
        cfg.sizes = vec![];
        let err = run(&cfg).unwrap_err().to_string();
        assert!(err.contains("sizes"), "{err}");
        let mut cfg = gaussian_cfg(Kind::Estimate);
        cfg.risk = None;
        let err = run(&cfg).unwrap_err().to_string();
        assert!(err.contains("risk"), "{err}");
    }

    #[test]
    fn toml_round_trip() {
        let text = r#"
kind = "estimate"
seed = 3
sizes = [100]
trials = 2

[dist.family.gaussian]
mu = 0.0
sigma = 1.0

[dist.tail.sub-gaussian]
sigma = 1.0

[risk.cvar]
alpha = 0.9
"#;
        let cfg: ExperimentConfig = toml::from_str(text).unwrap();
        assert_eq!(cfg.kind, Kind::Estimate);
        assert!(run(&cfg).is_ok());
    }
}
