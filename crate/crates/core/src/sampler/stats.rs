use serde::Serialize;

use super::{sample_spectrum, SampleStream, SamplerConfig, Target};
use crate::ensembles::{joint_moment, moment, negative_moment, secular_mean, EnsembleSpec};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Batches per chain for the batch-means variance.
const BATCHES: usize = 32;
/// `|z|` above this is flagged.
pub const Z_LIMIT: f64 = 4.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalStats {
    pub target: String,
    pub estimate: f64,
    pub std_error: f64,
    pub effective_samples: f64,
    /// Potential scale reduction over batch means; near 1 when chains agree.
    pub rhat: f64,
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn var(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let m = mean(v);
    v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() - 1) as f64
}

/// Mean of `target` over all retained samples, with a standard error from
/// batch means pooled across chains.
///
/// With `m` batches per chain, `W` the mean within-chain variance of batch
/// means and `B/m` the variance of chain means, the variance of one batch
/// mean is estimated by `((m−1)/m) W + B/m`, so disagreement between chains
/// widens the error.
pub fn empirical_statistic(stream: &SampleStream, target: &Target) -> Result<EmpiricalStats> {
    target.check(&stream.spec)?;
    if stream.chains.len() < 2 {
        return Err(Error::Domain("standard errors need at least 2 chains".into()));
    }
    let n = stream.n();
    let per_chain: Vec<Vec<f64>> =
        stream.chains.iter().map(|c| c.samples(n).map(|x| target.evaluate(x)).collect()).collect();
    let len = per_chain.iter().map(Vec::len).min().unwrap_or(0);
    let m = BATCHES.min(len);
    if m < 2 {
        return Err(Error::Domain("too few samples per chain for batch means".into()));
    }
    let size = len / m;

    let all: Vec<f64> = per_chain.iter().flatten().copied().collect();
    let estimate = mean(&all);
    let mut within = 0.0;
    let mut chain_means = Vec::with_capacity(per_chain.len());
    for v in &per_chain {
        let batches: Vec<f64> = v[..m * size].chunks_exact(size).map(mean).collect();
        within += var(&batches);
        chain_means.push(mean(&batches));
    }
    let chains = per_chain.len() as f64;
    within /= chains;
    let between = var(&chain_means);
    let mf = m as f64;
    let pooled = (mf - 1.0) / mf * within + between;
    let std_error = (pooled / (mf * chains)).sqrt();
    let sample_var = var(&all);
    let effective_samples = if std_error > 0.0 { sample_var / (std_error * std_error) } else { all.len() as f64 };
    let rhat = if within > 0.0 { (pooled / within).sqrt() } else { 1.0 };
    Ok(EmpiricalStats { target: target.to_string(), estimate, std_error, effective_samples, rhat })
}

/// Exact expectation of `target` from the ensembles module.
pub fn exact_value(spec: &EnsembleSpec, target: &Target) -> Result<Rational> {
    target.check(spec)?;
    Ok(match target {
        Target::Moment(0) => Rational::from(spec.n()),
        Target::Moment(k) if *k > 0 => moment(*k as usize, spec)?.value,
        Target::Moment(k) => negative_moment(k.unsigned_abs() as usize, spec, None)?.value,
        Target::Secular(k) => secular_mean(*k, spec)?.value,
        Target::Joint(mu) => joint_moment(mu, spec)?.value,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareRow {
    pub target: String,
    pub exact: Rational,
    pub exact_float: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub effective_samples: f64,
    pub z: f64,
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareReport {
    pub ensemble: EnsembleSpec,
    pub config: SamplerConfig,
    pub acceptance: Vec<Option<f64>>,
    pub acceptance_flagged: bool,
    pub rows: Vec<CompareRow>,
}

impl CompareReport {
    /// No target has `|z| > 4`.
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| !r.flagged)
    }
}

fn z_score(estimate: f64, exact: f64, se: f64) -> f64 {
    let d = estimate - exact;
    if se > 0.0 {
        d / se
    } else if d.abs() <= 1e-12 * exact.abs().max(1.0) {
        0.0
    } else {
        d.signum() * f64::INFINITY
    }
}

impl SampleStream {
    /// Compares this stream against the exact values of `targets`.
    pub fn compare(&self, targets: &[Target]) -> Result<CompareReport> {
        let mut rows = Vec::with_capacity(targets.len());
        for t in targets {
            let exact = exact_value(&self.spec, t)?;
            let s = empirical_statistic(self, t)?;
            let exact_float = exact.to_f64();
            let z = z_score(s.estimate, exact_float, s.std_error);
            rows.push(CompareRow {
                target: s.target,
                exact,
                exact_float,
                estimate: s.estimate,
                std_error: s.std_error,
                effective_samples: s.effective_samples,
                z,
                flagged: z.is_nan() || z.abs() > Z_LIMIT,
            });
        }
        Ok(CompareReport {
            ensemble: self.spec.clone(),
            config: self.config.clone(),
            acceptance: self.chains.iter().map(|c| c.acceptance).collect(),
            acceptance_flagged: self.acceptance_flagged(),
            rows,
        })
    }
}

/// Samples `spec` and reports `(exact, estimate, std_error, z)` per target.
pub fn compare(spec: &EnsembleSpec, targets: &[Target], config: &SamplerConfig) -> Result<CompareReport> {
    for t in targets {
        t.check(spec)?;
    }
    if config.chains < 2 {
        return Err(Error::Domain("compare needs at least 2 chains".into()));
    }
    sample_spectrum(spec, config)?.compare(targets)
}
