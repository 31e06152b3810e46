//! Monte Carlo sampling of the eigenvalue density
//! `∏ w(x_i) ∏_{i<j} |x_i − x_j|^β`, used as a statistical oracle for the
//! exact results.

mod chain;
mod stats;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ensembles::{EnsembleKind, EnsembleSpec};
use crate::error::{Error, Result};
use crate::partition::Partition;

pub use chain::{log_accept_ratio, log_density, sample_spectrum, ChainSamples, SampleStream};
pub use stats::{compare, empirical_statistic, exact_value, CompareReport, CompareRow, EmpiricalStats, Z_LIMIT};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Metropolis,
    Tridiagonal,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Metropolis => "metropolis",
            Method::Tridiagonal => "tridiagonal",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "metropolis" | "mh" => Ok(Method::Metropolis),
            "tridiagonal" | "tridiag" => Ok(Method::Tridiagonal),
            _ => Err(Error::Parse(format!("unknown sampling method '{s}'"))),
        }
    }
}

/// Sampler settings. For Metropolis one step is a sweep of `N`
/// single-coordinate proposals; `steps_per_chain` counts retained samples.
/// The tridiagonal path draws independent samples and ignores `burn_in`,
/// `thinning` and `proposal_scale`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub chains: usize,
    pub steps_per_chain: usize,
    pub burn_in: usize,
    pub thinning: usize,
    pub master_seed: u64,
    /// Initial random-walk step; adapted during burn-in only.
    pub proposal_scale: f64,
    pub method: Method,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            chains: 2,
            steps_per_chain: 100_000,
            burn_in: 5_000,
            thinning: 1,
            master_seed: 42,
            proposal_scale: 0.5,
            method: Method::Metropolis,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.chains == 0 {
            return Err(Error::Domain("chains must be positive".into()));
        }
        if self.steps_per_chain == 0 {
            return Err(Error::Domain("steps_per_chain must be positive".into()));
        }
        if self.thinning == 0 {
            return Err(Error::Domain("thinning must be positive".into()));
        }
        if !(self.proposal_scale.is_finite() && self.proposal_scale > 0.0) {
            return Err(Error::Domain(format!("proposal_scale must be positive (got {})", self.proposal_scale)));
        }
        Ok(())
    }
}

/// A per-sample statistic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    /// `Σ x_i^k`; negative `k` allowed on positive domains.
    Moment(i64),
    /// `e_k(x)`.
    Secular(usize),
    /// `∏_j p_{μ_j}(x)`.
    Joint(Partition),
}

impl Target {
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        match self {
            Target::Moment(k) => power_sum(x, *k),
            Target::Secular(k) => elementary(x, *k),
            Target::Joint(mu) => mu.parts().iter().map(|&m| power_sum(x, m as i64)).product(),
        }
    }

    pub fn check(&self, spec: &EnsembleSpec) -> Result<()> {
        match self {
            Target::Secular(k) if *k > spec.n() => {
                Err(Error::Domain(format!("secular k = {k} exceeds N = {}", spec.n())))
            }
            Target::Moment(k) if *k < 0 && spec.kind() == EnsembleKind::Gaussian => {
                Err(Error::Domain("negative moments are defined for laguerre and jacobi only".into()))
            }
            Target::Joint(mu) if mu.is_empty() => Err(Error::Domain("joint moment needs a nonempty partition".into())),
            _ => Ok(()),
        }
    }

    /// Parses a comma-separated list like `m1,m2,sc2,p1.1,tr2`.
    pub fn parse_list(s: &str) -> Result<Vec<Target>> {
        s.split(',').filter(|t| !t.trim().is_empty()).map(str::parse).collect()
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Moment(k) => write!(f, "m{k}"),
            Target::Secular(k) => write!(f, "sc{k}"),
            Target::Joint(mu) => {
                let parts: Vec<String> = mu.parts().iter().map(|p| p.to_string()).collect();
                write!(f, "p{}", parts.join("."))
            }
        }
    }
}

/// `m<k>` (k may be negative), `sc<k>`, `p<μ1>.<μ2>...`, or `tr<r>` for `(tr X)^r`.
impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let bad = || Error::Parse(format!("bad target '{s}'"));
        if let Some(r) = t.strip_prefix("sc") {
            return Ok(Target::Secular(r.parse().map_err(|_| bad())?));
        }
        if let Some(r) = t.strip_prefix("tr") {
            let r: usize = r.parse().map_err(|_| bad())?;
            if r == 0 {
                return Err(bad());
            }
            return Ok(Target::Joint(Partition::new(vec![1; r])?));
        }
        if let Some(r) = t.strip_prefix('m') {
            return Ok(Target::Moment(r.parse().map_err(|_| bad())?));
        }
        if let Some(r) = t.strip_prefix('p') {
            let mut parts = r
                .split('.')
                .map(|p| p.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            if parts.contains(&0) {
                return Err(bad());
            }
            parts.sort_unstable_by(|a, b| b.cmp(a));
            return Ok(Target::Joint(Partition::new(parts)?));
        }
        Err(bad())
    }
}

fn power_sum(x: &[f64], k: i64) -> f64 {
    match k {
        0 => x.len() as f64,
        1 => x.iter().sum(),
        _ => x.iter().map(|v| v.powi(k as i32)).sum(),
    }
}

/// `e_k(x)` by the usual one-pass recurrence.
fn elementary(x: &[f64], k: usize) -> f64 {
    if k > x.len() {
        return 0.0;
    }
    let mut e = vec![0.0; k + 1];
    e[0] = 1.0;
    for &v in x {
        for j in (1..=k).rev() {
            e[j] += v * e[j - 1];
        }
    }
    e[k]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn targets_round_trip() {
        for s in ["m1", "m-2", "sc3", "p2.1.1"] {
            let t: Target = s.parse().unwrap();
            assert_eq!(t.to_string(), s);
        }
        assert_eq!("tr2".parse::<Target>().unwrap(), Target::Joint(Partition::new(vec![1, 1]).unwrap()));
        assert_eq!("p1.2".parse::<Target>().unwrap().to_string(), "p2.1");
        assert!("q3".parse::<Target>().is_err());
        assert!("p0".parse::<Target>().is_err());
        assert_eq!(Target::parse_list("m1, sc2").unwrap().len(), 2);
    }

    #[test]
    fn elementary_values() {
        let x = [1.0, 2.0, 3.0];
        assert_eq!(elementary(&x, 0), 1.0);
        assert_eq!(elementary(&x, 1), 6.0);
        assert_eq!(elementary(&x, 2), 11.0);
        assert_eq!(elementary(&x, 3), 6.0);
        assert_eq!(elementary(&x, 4), 0.0);
        assert_eq!(power_sum(&x, -1), 1.0 + 0.5 + 1.0 / 3.0);
        assert_eq!(Target::Joint("2,1".parse().unwrap()).evaluate(&x), 14.0 * 6.0);
    }
}
