use std::io::{self, Write};

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::Serialize;

use super::{Method, SamplerConfig};
use crate::ensembles::{EnsembleKind, EnsembleSpec};
use crate::error::{Error, Result};

/// Burn-in sweeps between two proposal-scale updates.
const ADAPT_WINDOW: usize = 50;
const TARGET_ACCEPT: (f64, f64) = (0.2, 0.5);
const ALLOWED_ACCEPT: (f64, f64) = (0.1, 0.6);

/// Float copy of the ensemble parameters.
#[derive(Clone, Copy, Debug)]
struct Density {
    kind: EnsembleKind,
    beta: f64,
    g1: f64,
    g2: f64,
}

impl Density {
    fn new(spec: &EnsembleSpec) -> Self {
        let (g1, g2) = match spec.kind() {
            EnsembleKind::Gaussian => (0.0, 0.0),
            EnsembleKind::Laguerre => (spec.gamma().to_f64(), 0.0),
            EnsembleKind::Jacobi => {
                let (a, b) = spec.gammas();
                (a.to_f64(), b.to_f64())
            }
        };
        Density { kind: spec.kind(), beta: spec.beta().to_f64(), g1, g2 }
    }

    fn in_domain(&self, v: f64) -> bool {
        match self.kind {
            EnsembleKind::Gaussian => v.is_finite(),
            EnsembleKind::Laguerre => v > 0.0 && v.is_finite(),
            EnsembleKind::Jacobi => v > 0.0 && v < 1.0,
        }
    }

    /// `log w(v)`; callers check the domain first.
    fn log_weight(&self, v: f64) -> f64 {
        match self.kind {
            EnsembleKind::Gaussian => -0.5 * v * v,
            EnsembleKind::Laguerre => self.g1 * v.ln() - v,
            EnsembleKind::Jacobi => self.g1 * v.ln() + self.g2 * (1.0 - v).ln(),
        }
    }

    /// Folds a random-walk proposal back into the domain. The fold is
    /// symmetric, so the proposal kernel stays symmetric.
    fn reflect(&self, v: f64) -> f64 {
        match self.kind {
            EnsembleKind::Gaussian => v,
            EnsembleKind::Laguerre => v.abs(),
            EnsembleKind::Jacobi => {
                let y = v.rem_euclid(2.0);
                if y > 1.0 {
                    2.0 - y
                } else {
                    y
                }
            }
        }
    }

    fn log_density(&self, x: &[f64]) -> f64 {
        let mut s = 0.0;
        for (i, &xi) in x.iter().enumerate() {
            if !self.in_domain(xi) {
                return f64::NEG_INFINITY;
            }
            s += self.log_weight(xi);
            for &xj in &x[i + 1..] {
                if xi == xj {
                    return f64::NEG_INFINITY;
                }
                s += self.beta * (xi - xj).abs().ln();
            }
        }
        s
    }

    fn log_ratio(&self, x: &[f64], j: usize, new: f64) -> f64 {
        if !self.in_domain(new) {
            return f64::NEG_INFINITY;
        }
        let old = x[j];
        let mut vdm = 0.0;
        for (i, &xi) in x.iter().enumerate() {
            if i == j {
                continue;
            }
            if xi == new {
                return f64::NEG_INFINITY;
            }
            vdm += ((xi - new).abs() / (xi - old).abs()).ln();
        }
        self.log_weight(new) - self.log_weight(old) + self.beta * vdm
    }

    fn start(&self, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| match self.kind {
                EnsembleKind::Gaussian => i as f64 - (n as f64 - 1.0) / 2.0,
                EnsembleKind::Laguerre => 1.0 + self.g1.max(0.0) + 2.0 * i as f64,
                EnsembleKind::Jacobi => (i as f64 + 1.0) / (n as f64 + 1.0),
            })
            .collect()
    }
}

/// Unnormalized log-density `Σ log w(x_i) + β Σ_{i<j} log|x_i − x_j|`;
/// `−∞` outside the domain or on coincident coordinates.
pub fn log_density(spec: &EnsembleSpec, x: &[f64]) -> f64 {
    Density::new(spec).log_density(x)
}

/// Log acceptance ratio for moving coordinate `j` of `x` to `new`.
pub fn log_accept_ratio(spec: &EnsembleSpec, x: &[f64], j: usize, new: f64) -> f64 {
    Density::new(spec).log_ratio(x, j, new)
}

/// Retained samples of one chain, stored row-major (`N` values per sample).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainSamples {
    pub values: Vec<f64>,
    /// Post-burn-in acceptance rate (Metropolis only).
    pub acceptance: Option<f64>,
    /// Frozen proposal scale after burn-in.
    pub proposal_scale: f64,
}

impl ChainSamples {
    pub fn samples(&self, n: usize) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(n)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleStream {
    pub spec: EnsembleSpec,
    pub config: SamplerConfig,
    pub chains: Vec<ChainSamples>,
}

impl SampleStream {
    pub fn n(&self) -> usize {
        self.spec.n()
    }

    pub fn total_samples(&self) -> usize {
        self.chains.iter().map(|c| c.values.len() / self.n()).sum()
    }

    /// True when some chain's acceptance rate left `[0.1, 0.6]`.
    pub fn acceptance_flagged(&self) -> bool {
        self.chains
            .iter()
            .filter_map(|c| c.acceptance)
            .any(|a| !(ALLOWED_ACCEPT.0..=ALLOWED_ACCEPT.1).contains(&a))
    }

    /// Writes one row per retained sample, chains in order, after a
    /// commented header naming the ensemble, seed and chain layout.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let c = &self.config;
        writeln!(
            w,
            "# {} method={} master_seed={} chains={} samples_per_chain={}",
            self.spec, c.method, c.master_seed, c.chains, c.steps_per_chain
        )?;
        let header: Vec<String> = (1..=self.n()).map(|i| format!("x{i}")).collect();
        writeln!(w, "{}", header.join(","))?;
        for chain in &self.chains {
            for s in chain.samples(self.n()) {
                let row: Vec<String> = s.iter().map(|v| format!("{v:e}")).collect();
                writeln!(w, "{}", row.join(","))?;
            }
        }
        Ok(())
    }
}

fn chain_rng(seed: u64, chain: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chain as u64);
    rng
}

fn run_metropolis(d: Density, n: usize, cfg: &SamplerConfig, chain: usize) -> ChainSamples {
    let mut rng = chain_rng(cfg.master_seed, chain);
    let mut x = d.start(n);
    let mut scale = cfg.proposal_scale;

    let sweep = |x: &mut [f64], scale: f64, rng: &mut ChaCha8Rng| -> usize {
        let mut accepted = 0;
        for j in 0..n {
            let z: f64 = rng.sample(StandardNormal);
            let new = d.reflect(x[j] + scale * z);
            let r = d.log_ratio(x, j, new);
            let u: f64 = rng.random();
            if r >= 0.0 || u.ln() < r {
                x[j] = new;
                accepted += 1;
            }
        }
        accepted
    };

    let mut done = 0;
    while done < cfg.burn_in {
        let len = ADAPT_WINDOW.min(cfg.burn_in - done);
        let acc: usize = (0..len).map(|_| sweep(&mut x, scale, &mut rng)).sum();
        let rate = acc as f64 / (len * n) as f64;
        if rate < TARGET_ACCEPT.0 {
            scale *= 0.7;
        } else if rate > TARGET_ACCEPT.1 {
            scale *= 1.4;
        }
        if d.kind == EnsembleKind::Jacobi {
            scale = scale.min(2.0);
        }
        done += len;
    }

    let mut values = Vec::with_capacity(cfg.steps_per_chain * n);
    let mut accepted = 0usize;
    for _ in 0..cfg.steps_per_chain {
        for _ in 0..cfg.thinning {
            accepted += sweep(&mut x, scale, &mut rng);
        }
        values.extend_from_slice(&x);
    }
    let proposals = cfg.steps_per_chain * cfg.thinning * n;
    ChainSamples { values, acceptance: Some(accepted as f64 / proposals as f64), proposal_scale: scale }
}

fn chi(rng: &mut ChaCha8Rng, dof: f64) -> f64 {
    ChiSquared::new(dof).expect("positive degrees of freedom").sample(rng).sqrt()
}

fn sorted_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Gaussian: symmetric tridiagonal with `N(0,1)` diagonal and off-diagonal
/// `χ_{β(N−i)}/√2`; its eigenvalue density is `∏ e^{−x²/2} |Δ|^β`.
///
/// Laguerre: lower bidiagonal `B` with `B_ii = χ_{2a−β(i−1)}` and
/// `B_{i+1,i} = χ_{β(N−i)}`, `a = γ + 1 + β(N−1)/2`. The eigenvalues `λ` of
/// `BBᵀ` have density `∏ λ^γ e^{−λ/2} |Δ|^β`, so `x = λ/2` carries the
/// weight `x^γ e^{−x}`.
fn run_tridiagonal(d: Density, n: usize, cfg: &SamplerConfig, chain: usize) -> ChainSamples {
    let mut rng = chain_rng(cfg.master_seed, chain);
    let mut values = Vec::with_capacity(cfg.steps_per_chain * n);
    let b = d.beta;
    for _ in 0..cfg.steps_per_chain {
        let ev = match d.kind {
            EnsembleKind::Gaussian => {
                let mut m = DMatrix::zeros(n, n);
                for i in 0..n {
                    m[(i, i)] = rng.sample::<f64, _>(StandardNormal);
                }
                for i in 1..n {
                    let v = chi(&mut rng, b * (n - i) as f64) / std::f64::consts::SQRT_2;
                    m[(i, i - 1)] = v;
                    m[(i - 1, i)] = v;
                }
                sorted_eigenvalues(m)
            }
            EnsembleKind::Laguerre => {
                let a = d.g1 + 1.0 + b * (n as f64 - 1.0) / 2.0;
                let mut bm = DMatrix::zeros(n, n);
                for i in 0..n {
                    bm[(i, i)] = chi(&mut rng, 2.0 * a - b * i as f64);
                    if i + 1 < n {
                        bm[(i + 1, i)] = chi(&mut rng, b * (n - i - 1) as f64);
                    }
                }
                let l = &bm * bm.transpose();
                sorted_eigenvalues(l).into_iter().map(|v| v / 2.0).collect()
            }
            EnsembleKind::Jacobi => unreachable!("checked by sample_spectrum"),
        };
        values.extend_from_slice(&ev);
    }
    ChainSamples { values, acceptance: None, proposal_scale: cfg.proposal_scale }
}

/// Draws `config.chains` independent chains. Chain `c` uses the ChaCha8
/// stream `c` of `master_seed`, so output is bit-reproducible and does not
/// depend on scheduling.
pub fn sample_spectrum(spec: &EnsembleSpec, config: &SamplerConfig) -> Result<SampleStream> {
    config.validate()?;
    if config.method == Method::Tridiagonal && spec.kind() == EnsembleKind::Jacobi {
        return Err(Error::Domain("the jacobi ensemble has no tridiagonal model; use metropolis".into()));
    }
    let d = Density::new(spec);
    let n = spec.n();
    let run = |c: usize| match config.method {
        Method::Metropolis => run_metropolis(d, n, config, c),
        Method::Tridiagonal => run_tridiagonal(d, n, config, c),
    };
    #[cfg(not(target_arch = "wasm32"))]
    let chains = std::thread::scope(|s| {
        let handles: Vec<_> = (0..config.chains).map(|c| s.spawn(move || run(c))).collect();
        handles.into_iter().map(|h| h.join().expect("sampler thread panicked")).collect()
    });
    #[cfg(target_arch = "wasm32")]
    let chains = (0..config.chains).map(run).collect();
    Ok(SampleStream { spec: spec.clone(), config: config.clone(), chains })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn specs() -> Vec<EnsembleSpec> {
        vec![
            EnsembleSpec::gaussian(4, q("1/2")).unwrap(),
            EnsembleSpec::laguerre(3, q("2"), q("1/3")).unwrap(),
            EnsembleSpec::jacobi(5, q("1"), q("-1/2"), q("2")).unwrap(),
        ]
    }

    #[test]
    fn ratio_matches_density_difference() {
        let mut rng = chain_rng(7, 0);
        for spec in specs() {
            let d = Density::new(&spec);
            for _ in 0..200 {
                let mut x: Vec<f64> = (0..spec.n())
                    .map(|_| {
                        let u: f64 = rng.random();
                        match spec.kind() {
                            EnsembleKind::Gaussian => 4.0 * u - 2.0,
                            EnsembleKind::Laguerre => 5.0 * u + 1e-3,
                            EnsembleKind::Jacobi => 0.98 * u + 0.01,
                        }
                    })
                    .collect();
                let j = rng.random_range(0..spec.n());
                let new = d.reflect(x[j] + rng.sample::<f64, _>(StandardNormal));
                let r = log_accept_ratio(&spec, &x, j, new);
                let before = log_density(&spec, &x);
                x[j] = new;
                let after = log_density(&spec, &x);
                assert!((r - (after - before)).abs() < 1e-9 * (1.0 + before.abs()), "{spec}");
            }
        }
    }

    #[test]
    fn coincident_and_out_of_domain_rejected() {
        let spec = EnsembleSpec::laguerre(3, q("1"), q("0")).unwrap();
        let x = [1.0, 2.0, 3.0];
        assert_eq!(log_accept_ratio(&spec, &x, 0, 2.0), f64::NEG_INFINITY);
        assert_eq!(log_accept_ratio(&spec, &x, 0, 0.0), f64::NEG_INFINITY);
        assert_eq!(log_density(&spec, &[1.0, 1.0, 2.0]), f64::NEG_INFINITY);
    }

    #[test]
    fn reflection_stays_in_domain() {
        let spec = EnsembleSpec::jacobi(2, q("1"), q("0"), q("0")).unwrap();
        let d = Density::new(&spec);
        for v in [-3.7, -0.2, 0.4, 1.3, 2.6, 5.01] {
            let r = d.reflect(v);
            assert!((0.0..=1.0).contains(&r), "{v} -> {r}");
        }
        assert!((d.reflect(1.3) - 0.7).abs() < 1e-12);
        assert!((d.reflect(-0.2) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn reproducible_and_thread_independent() {
        let spec = EnsembleSpec::gaussian(3, q("1")).unwrap();
        let cfg = SamplerConfig { steps_per_chain: 500, burn_in: 100, chains: 3, ..Default::default() };
        let a = sample_spectrum(&spec, &cfg).unwrap();
        let b = sample_spectrum(&spec, &cfg).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.chains[0].values, a.chains[1].values);
        let one = sample_spectrum(&spec, &SamplerConfig { chains: 1, ..cfg.clone() }).unwrap();
        assert_eq!(one.chains[0], a.chains[0]);
    }

    #[test]
    fn scale_frozen_after_burn_in() {
        let spec = EnsembleSpec::laguerre(2, q("1"), q("1")).unwrap();
        let cfg = SamplerConfig { steps_per_chain: 10, burn_in: 500, proposal_scale: 40.0, ..Default::default() };
        let short = sample_spectrum(&spec, &cfg).unwrap();
        let long = sample_spectrum(&spec, &SamplerConfig { steps_per_chain: 5000, ..cfg.clone() }).unwrap();
        assert!(short.chains[0].proposal_scale < 40.0);
        assert_eq!(short.chains[0].proposal_scale, long.chains[0].proposal_scale);
        assert_eq!(&long.chains[0].values[..20], &short.chains[0].values[..]);
    }

    #[test]
    fn jacobi_has_no_tridiagonal_path() {
        let spec = EnsembleSpec::jacobi(2, q("1"), q("0"), q("0")).unwrap();
        let cfg = SamplerConfig { method: Method::Tridiagonal, ..Default::default() };
        assert!(matches!(sample_spectrum(&spec, &cfg), Err(Error::Domain(_))));
    }

    #[test]
    fn csv_layout() {
        let spec = EnsembleSpec::gaussian(2, q("1")).unwrap();
        let cfg = SamplerConfig { steps_per_chain: 3, burn_in: 0, ..Default::default() };
        let s = sample_spectrum(&spec, &cfg).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].contains("master_seed=42"));
        assert!(lines[0].contains("gaussian N=2"));
        assert_eq!(lines[1], "x1,x2");
        assert_eq!(lines.len(), 2 + 6);
        let v: f64 = lines[2].split(',').next().unwrap().parse().unwrap();
        assert_eq!(v, s.chains[0].values[0]);
    }
}
