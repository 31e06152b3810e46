//! Exact ensemble averages: Jack expectations, spectral moments (positive,
//! negative and joint), mean secular coefficients and Selberg constants.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jack::{engine, kappa_k_closed, JackEngine};
use crate::mvop::{self, HermiteRoute};
use crate::partition::{hook_products, partitions_of, Partition};
use crate::rational::{factorial_q, sign, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnsembleKind {
    Gaussian,
    Laguerre,
    Jacobi,
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnsembleKind::Gaussian => "gaussian",
            EnsembleKind::Laguerre => "laguerre",
            EnsembleKind::Jacobi => "jacobi",
        })
    }
}

impl std::str::FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "hermite" => Ok(EnsembleKind::Gaussian),
            "laguerre" => Ok(EnsembleKind::Laguerre),
            "jacobi" => Ok(EnsembleKind::Jacobi),
            _ => Err(Error::Parse(format!("unknown ensemble '{s}'"))),
        }
    }
}

/// One of the three β-ensembles with its parameters. `β = 2/α`.
///
/// Weights: `e^{−x²/2}` on ℝ, `x^γ e^{−x}` on `[0, ∞)`, and
/// `x^{γ1} (1−x)^{γ2}` on `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct EnsembleSpec {
    kind: EnsembleKind,
    n: usize,
    alpha: Rational,
    gamma: Option<Rational>,
    gamma1: Option<Rational>,
    gamma2: Option<Rational>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawSpec {
    kind: EnsembleKind,
    #[serde(rename = "N")]
    n: usize,
    alpha: Rational,
    #[serde(default, skip_deserializing)]
    beta: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gamma: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gamma1: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gamma2: Option<Rational>,
}

impl TryFrom<RawSpec> for EnsembleSpec {
    type Error = Error;

    fn try_from(r: RawSpec) -> Result<Self> {
        let need = |v: Option<Rational>, name: &str| {
            v.ok_or_else(|| Error::Domain(format!("{} ensemble needs {name}", r.kind)))
        };
        match r.kind {
            EnsembleKind::Gaussian => EnsembleSpec::gaussian(r.n, r.alpha),
            EnsembleKind::Laguerre => EnsembleSpec::laguerre(r.n, r.alpha.clone(), need(r.gamma.clone(), "gamma")?),
            EnsembleKind::Jacobi => EnsembleSpec::jacobi(
                r.n,
                r.alpha.clone(),
                need(r.gamma1.clone(), "gamma1")?,
                need(r.gamma2.clone(), "gamma2")?,
            ),
        }
    }
}

impl From<EnsembleSpec> for RawSpec {
    fn from(s: EnsembleSpec) -> Self {
        RawSpec {
            kind: s.kind,
            n: s.n,
            beta: Some(s.beta()),
            alpha: s.alpha,
            gamma: s.gamma,
            gamma1: s.gamma1,
            gamma2: s.gamma2,
        }
    }
}

fn check_common(n: usize, alpha: &Rational) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    if !alpha.is_positive() {
        return Err(Error::Domain(format!("alpha must be positive (got {alpha})")));
    }
    Ok(())
}

fn check_exponent(name: &str, g: &Rational) -> Result<()> {
    if g > &-Rational::one() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must exceed -1 (got {g})")))
    }
}

impl EnsembleSpec {
    pub fn gaussian(n: usize, alpha: Rational) -> Result<Self> {
        check_common(n, &alpha)?;
        Ok(EnsembleSpec { kind: EnsembleKind::Gaussian, n, alpha, gamma: None, gamma1: None, gamma2: None })
    }

    pub fn laguerre(n: usize, alpha: Rational, gamma: Rational) -> Result<Self> {
        check_common(n, &alpha)?;
        check_exponent("gamma", &gamma)?;
        Ok(EnsembleSpec { kind: EnsembleKind::Laguerre, n, alpha, gamma: Some(gamma), gamma1: None, gamma2: None })
    }

    pub fn jacobi(n: usize, alpha: Rational, gamma1: Rational, gamma2: Rational) -> Result<Self> {
        check_common(n, &alpha)?;
        check_exponent("gamma1", &gamma1)?;
        check_exponent("gamma2", &gamma2)?;
        Ok(EnsembleSpec {
            kind: EnsembleKind::Jacobi,
            n,
            alpha,
            gamma: None,
            gamma1: Some(gamma1),
            gamma2: Some(gamma2),
        })
    }

    pub fn kind(&self) -> EnsembleKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> Rational {
        Rational::from(2) / &self.alpha
    }

    /// Laguerre `γ`; panics for other kinds.
    pub fn gamma(&self) -> &Rational {
        self.gamma.as_ref().expect("laguerre spec has gamma")
    }

    /// Jacobi `(γ1, γ2)`; panics for other kinds.
    pub fn gammas(&self) -> (&Rational, &Rational) {
        (
            self.gamma1.as_ref().expect("jacobi spec has gamma1"),
            self.gamma2.as_ref().expect("jacobi spec has gamma2"),
        )
    }

    fn engine(&self) -> Result<std::sync::Arc<JackEngine>> {
        engine(&self.alpha)
    }
}

impl fmt::Display for EnsembleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} N={} alpha={}", self.kind, self.n, self.alpha)?;
        if let Some(g) = &self.gamma {
            write!(f, " gamma={g}")?;
        }
        if let (Some(a), Some(b)) = (&self.gamma1, &self.gamma2) {
            write!(f, " gamma1={a} gamma2={b}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermValue {
    pub partition: Partition,
    pub value: Rational,
}

/// An exact moment together with its per-partition contributions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentResult {
    pub ensemble: EnsembleSpec,
    pub k: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Partition>,
    pub value: Rational,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<TermValue>,
}

impl MomentResult {
    fn from_terms(ensemble: &EnsembleSpec, k: i64, mu: Option<Partition>, terms: Vec<TermValue>) -> Self {
        let value = terms.iter().map(|t| &t.value).sum();
        MomentResult { ensemble: ensemble.clone(), k, mu, value, terms }
    }
}

/// `E{C_λ}` under the ensemble.
pub fn expect_jack_c(lambda: &Partition, spec: &EnsembleSpec) -> Result<Rational> {
    let (a, n) = (&spec.alpha, spec.n);
    match spec.kind {
        EnsembleKind::Laguerre => mvop::laguerre_at_zero(lambda, a, spec.gamma(), n),
        EnsembleKind::Jacobi => {
            let (g1, g2) = spec.gammas();
            mvop::jacobi_at_zero(lambda, a, g1, g2, n)
        }
        EnsembleKind::Gaussian => {
            let k = lambda.size();
            if k % 2 == 1 {
                return Ok(Rational::zero());
            }
            Ok(sign(k / 2) * mvop::hermite_at_zero(lambda, a, n, HermiteRoute::Okounkov)?)
        }
    }
}

/// `(1/(α^k k!)) j_λ`, the weight converting a κ-row entry into a moment term.
fn moment_weight(lambda: &Partition, alpha: &Rational) -> Result<Rational> {
    let k = lambda.size();
    Ok(hook_products(lambda, alpha)?.j / (alpha.pow(k as i32) * factorial_q(k)))
}

/// `M_k = E Σ_i x_i^k = (1/(α^k k!)) Σ_{λ⊢k} j_λ κ^λ_{(k)} E{C_λ}`.
pub fn moment(k: usize, spec: &EnsembleSpec) -> Result<MomentResult> {
    if k == 0 {
        return Err(Error::Domain("moment order k must be at least 1".into()));
    }
    spec.engine()?.check_k_max(k)?;
    let a = &spec.alpha;
    let mut terms = Vec::new();
    for lambda in partitions_of(k, Some(spec.n)) {
        let v = moment_weight(&lambda, a)? * kappa_k_closed(&lambda, a)? * expect_jack_c(&lambda, spec)?;
        terms.push(TermValue { partition: lambda, value: v });
    }
    Ok(MomentResult::from_terms(spec, k as i64, None, terms))
}

/// `E p_μ = E ∏_j (Σ_i x_i^{μ_j})`, through the full κ table of degree `|μ|`.
pub fn joint_moment(mu: &Partition, spec: &EnsembleSpec) -> Result<MomentResult> {
    let k = mu.size();
    if k == 0 {
        return Err(Error::Domain("joint moment needs a nonempty partition".into()));
    }
    let e = spec.engine()?;
    let kappa = e.kappa_table(k)?;
    let mut terms = Vec::new();
    for lambda in partitions_of(k, Some(spec.n)) {
        let v = moment_weight(&lambda, &spec.alpha)? * kappa.get(&lambda, mu) * expect_jack_c(&lambda, spec)?;
        terms.push(TermValue { partition: lambda, value: v });
    }
    Ok(MomentResult::from_terms(spec, k as i64, Some(mu.clone()), terms))
}

/// A product `(2π)^{p} ∏ Γ(a_i)^{e_i}` kept symbolically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaProduct {
    pub two_pi_power: Rational,
    /// `(argument, exponent)`, merged so every argument appears once.
    pub factors: Vec<(Rational, i64)>,
}

impl GammaProduct {
    pub fn new(two_pi_power: Rational, factors: impl IntoIterator<Item = (Rational, i64)>) -> Self {
        let mut merged: BTreeMap<Rational, i64> = BTreeMap::new();
        for (a, e) in factors {
            *merged.entry(a).or_insert(0) += e;
        }
        GammaProduct { two_pi_power, factors: merged.into_iter().filter(|(_, e)| *e != 0).collect() }
    }

    /// `self / other` as an exact rational, when every Gamma factor cancels
    /// up to integer shifts (and the powers of 2π agree).
    pub fn ratio(&self, other: &GammaProduct) -> Option<Rational> {
        if self.two_pi_power != other.two_pi_power {
            return None;
        }
        let all = self.factors.iter().cloned().chain(other.factors.iter().map(|(a, e)| (a.clone(), -e)));
        // Group by fractional part; within a group use Γ(b+n) = Γ(b) (b)_n.
        let mut classes: BTreeMap<Rational, Vec<(Rational, i64)>> = BTreeMap::new();
        for (a, e) in all {
            let frac = &a - Rational::from_bigint(a.floor());
            classes.entry(frac).or_default().push((a, e));
        }
        let mut out = Rational::one();
        for (_, members) in classes {
            if members.iter().map(|(_, e)| e).sum::<i64>() != 0 {
                return None;
            }
            let base = members.iter().map(|(a, _)| a.clone()).min().expect("class is nonempty");
            for (a, e) in members {
                let shift = (&a - &base).to_i64().expect("integer shift") as usize;
                let p = base.rising(shift);
                if p.is_zero() {
                    return None;
                }
                out *= p.pow(e as i32);
            }
        }
        Some(out)
    }
}

impl fmt::Display for GammaProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.two_pi_power.is_zero() {
            parts.push(format!("(2π)^({})", self.two_pi_power));
        }
        for (a, e) in &self.factors {
            if *e == 1 {
                parts.push(format!("Γ({a})"));
            } else {
                parts.push(format!("Γ({a})^({e})"));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" · "))
        }
    }
}

fn selberg_common(n: usize, alpha: &Rational) -> Vec<(Rational, i64)> {
    let one = Rational::one();
    let mut f = Vec::new();
    for i in 0..n {
        f.push((&one + Rational::from(i + 1) / alpha, 1));
        f.push((&one + alpha.recip(), -1));
    }
    f
}

fn selberg_laguerre(n: usize, alpha: &Rational, gamma: &Rational) -> GammaProduct {
    let mut f = selberg_common(n, alpha);
    for i in 0..n {
        f.push((Rational::one() + Rational::from(i) / alpha + gamma, 1));
    }
    GammaProduct::new(Rational::zero(), f)
}

fn selberg_jacobi(n: usize, alpha: &Rational, g1: &Rational, g2: &Rational) -> GammaProduct {
    let mut f = selberg_common(n, alpha);
    let one = Rational::one();
    for i in 0..n {
        let ia = Rational::from(i) / alpha;
        f.push((g1 + &ia + &one, 1));
        f.push((g2 + &ia + &one, 1));
        f.push((g1 + g2 + Rational::from(n + i - 1) / alpha + Rational::from(2), -1));
    }
    GammaProduct::new(Rational::zero(), f)
}

/// Normalization integral of the unnormalized eigenvalue density.
pub fn selberg_norm(spec: &EnsembleSpec) -> GammaProduct {
    let (n, a) = (spec.n, &spec.alpha);
    match spec.kind {
        EnsembleKind::Gaussian => GammaProduct::new(Rational::new(n as i64, 2), selberg_common(n, a)),
        EnsembleKind::Laguerre => selberg_laguerre(n, a, spec.gamma()),
        EnsembleKind::Jacobi => {
            let (g1, g2) = spec.gammas();
            selberg_jacobi(n, a, g1, g2)
        }
    }
}

/// `E{C_λ(1/x)}` through the reflection `λ → (t^N − λ)^+` and the shifted
/// weight exponent. Returns `None` when the formal shifted evaluation hits a pole.
fn expect_jack_c_inverse(lambda: &Partition, spec: &EnsembleSpec, t: usize) -> Result<Option<Rational>> {
    let (n, a) = (spec.n, &spec.alpha);
    let k = lambda.size();
    let comp = lambda.complement(n, t)?;
    let c_lam = hook_products(lambda, a)?.upper;
    let c_comp = hook_products(&comp, a)?.upper;
    let pref = factorial_q(k) * a.pow(2 * k as i32 - (n * t) as i32) / factorial_q(n * t - k) * c_comp / c_lam;
    let shift = Rational::from(t);
    let e = engine(a)?;
    let ones = e.eval_ones(&comp, n)?;
    let (ratio, shifted) = match spec.kind {
        EnsembleKind::Laguerre => {
            let g = spec.gamma();
            let gt = g - &shift;
            let ratio = selberg_laguerre(n, a, &gt).ratio(&selberg_laguerre(n, a, g));
            let lag = mvop::laguerre_shift(a, &gt, n);
            (ratio, crate::partition::gen_pochhammer(&lag, a, &comp)? * ones)
        }
        EnsembleKind::Jacobi => {
            let (g1, g2) = spec.gammas();
            let g1t = g1 - &shift;
            let ratio = selberg_jacobi(n, a, &g1t, g2).ratio(&selberg_jacobi(n, a, g1, g2));
            let (sa, sb) = mvop::jacobi_shifts(a, &g1t, g2, n);
            let den = crate::partition::gen_pochhammer(&sb, a, &comp)?;
            if den.is_zero() {
                return Ok(None);
            }
            (ratio, crate::partition::gen_pochhammer(&sa, a, &comp)? / den * ones)
        }
        EnsembleKind::Gaussian => unreachable!("checked by caller"),
    };
    Ok(ratio.map(|r| pref * r * shifted))
}

fn negative_terms(k: usize, spec: &EnsembleSpec, t: usize) -> Result<Option<Vec<TermValue>>> {
    let a = &spec.alpha;
    let mut terms = Vec::new();
    for lambda in partitions_of(k, Some(spec.n)) {
        let Some(ex) = expect_jack_c_inverse(&lambda, spec, t)? else {
            return Ok(None);
        };
        let v = moment_weight(&lambda, a)? * kappa_k_closed(&lambda, a)? * ex;
        terms.push(TermValue { partition: lambda, value: v });
    }
    Ok(Some(terms))
}

/// `M_{−k} = E Σ_i x_i^{−k}` for the Laguerre and Jacobi ensembles.
///
/// `t ≥ k` selects the reflection; the default is `t = k`. The value is
/// recomputed at `t + 1` and must agree.
pub fn negative_moment(k: usize, spec: &EnsembleSpec, t: Option<usize>) -> Result<MomentResult> {
    if k == 0 {
        return Err(Error::Domain("moment order k must be at least 1".into()));
    }
    let limit = Rational::from(k as i64 - 1);
    match spec.kind {
        EnsembleKind::Gaussian => {
            return Err(Error::Domain("negative moments are defined for laguerre and jacobi only".into()))
        }
        EnsembleKind::Laguerre => {
            if spec.gamma() <= &limit {
                return Err(Error::Domain(format!(
                    "gamma must exceed k-1 for negative moments (gamma = {}, k = {k})",
                    spec.gamma()
                )));
            }
        }
        EnsembleKind::Jacobi => {
            if spec.gammas().0 <= &limit {
                return Err(Error::Domain(format!(
                    "gamma1 must exceed k-1 for negative moments (gamma1 = {}, k = {k})",
                    spec.gammas().0
                )));
            }
        }
    }
    let t = t.unwrap_or(k);
    if t < k {
        return Err(Error::Domain(format!("t must be at least k (t = {t}, k = {k})")));
    }
    let terms = negative_terms(k, spec, t)?
        .ok_or_else(|| Error::Internal(format!("pole in the reflected expectation at t = {t}")))?;
    let result = MomentResult::from_terms(spec, -(k as i64), None, terms);
    if let Some(check) = negative_terms(k, spec, t + 1)? {
        let v: Rational = check.iter().map(|t| &t.value).sum();
        if v != result.value {
            return Err(Error::Internal(format!(
                "negative moment depends on t: {} at t = {t}, {v} at t = {}",
                result.value,
                t + 1
            )));
        }
    }
    Ok(result)
}

/// Mean secular coefficient `E{Sc_k} = E{e_k(x)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecularResult {
    pub ensemble: EnsembleSpec,
    pub k: usize,
    pub value: Rational,
    /// Set when `k > N`, where `e_k` vanishes identically.
    pub vanishes: bool,
}

/// `E{Sc_k} = ((α)_k / (α^k k!)) E{C_{(1^k)}}`.
pub fn secular_mean(k: usize, spec: &EnsembleSpec) -> Result<SecularResult> {
    let mk = |value, vanishes| SecularResult { ensemble: spec.clone(), k, value, vanishes };
    if k > spec.n {
        return Ok(mk(Rational::zero(), true));
    }
    if k == 0 {
        return Ok(mk(Rational::one(), false));
    }
    let e = spec.engine()?;
    let v = e.elementary_as_jack(k) * expect_jack_c(&Partition::column(k), spec)?;
    Ok(mk(v, false))
}

/// `(−1)^{k/2} (k−1)!! / α^{k/2} · binom(N, k)` for even `k`, zero for odd.
pub fn gaussian_secular_closed(k: usize, n: usize, alpha: &Rational) -> Rational {
    if k % 2 == 1 || k > n {
        return Rational::zero();
    }
    let double_fact: Rational = (1..k).step_by(2).map(Rational::from).product();
    sign(k / 2) * double_fact / alpha.pow(k as i32 / 2) * Rational::from(n).binomial(k)
}
