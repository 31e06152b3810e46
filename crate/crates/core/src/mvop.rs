//! Multivariate Laguerre, Jacobi and Hermite polynomials: expansion
//! coefficients in the Jack basis and values at the origin.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jack::{engine, rho, JackEngine};
use crate::partition::{gen_pochhammer, subpartitions, Partition};
use crate::rational::{factorial_q, sign, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Laguerre,
    Jacobi,
    Hermite,
}

/// Which computation produces `H_λ(0)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HermiteRoute {
    /// Closed form through the `p_2^{k/2}` coefficient of `C_λ`.
    #[default]
    Okounkov,
    /// Downward recurrence for the expansion coefficients.
    Recurrence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub alpha: Rational,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma1: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma2: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OriginValue {
    pub lambda: Partition,
    pub family: Family,
    pub params: FamilyParams,
    pub value: Rational,
}

/// Coefficients indexed by `σ ⊆ λ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionCoeffs {
    pub lambda: Partition,
    pub family: Family,
    pub coeffs: BTreeMap<Partition, Rational>,
}

impl ExpansionCoeffs {
    pub fn get(&self, sigma: &Partition) -> Rational {
        self.coeffs.get(sigma).cloned().unwrap_or_default()
    }
}

fn check_gamma(name: &str, g: &Rational) -> Result<()> {
    if g > &-Rational::one() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must exceed -1 (got {g})")))
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::Domain("N must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `γ + 1 + (N−1)/α`.
pub fn laguerre_shift(alpha: &Rational, gamma: &Rational, n: usize) -> Rational {
    gamma + Rational::one() + Rational::from(n as i64 - 1) / alpha
}

/// `(γ1 + 1 + (N−1)/α, γ1 + γ2 + 2 + 2(N−1)/α)`.
pub fn jacobi_shifts(alpha: &Rational, g1: &Rational, g2: &Rational, n: usize) -> (Rational, Rational) {
    let d = Rational::from(n as i64 - 1) / alpha;
    let a = g1 + Rational::one() + &d;
    let b = g1 + g2 + Rational::from(2) + Rational::from(2) * d;
    (a, b)
}

/// `L^{α,γ}_λ(0) = (γ + 1 + (N−1)/α)^α_λ C_λ(1^N)`.
pub fn laguerre_at_zero(lambda: &Partition, alpha: &Rational, gamma: &Rational, n: usize) -> Result<Rational> {
    check_gamma("gamma", gamma)?;
    check_n(n)?;
    let e = engine(alpha)?;
    let a = laguerre_shift(alpha, gamma, n);
    Ok(gen_pochhammer(&a, alpha, lambda)? * e.eval_ones(lambda, n)?)
}

/// `J^{α,γ1,γ2}_λ(0) = (a)^α_λ / (b)^α_λ · C_λ(1^N)` with the shifts of [`jacobi_shifts`].
pub fn jacobi_at_zero(
    lambda: &Partition,
    alpha: &Rational,
    gamma1: &Rational,
    gamma2: &Rational,
    n: usize,
) -> Result<Rational> {
    check_gamma("gamma1", gamma1)?;
    check_gamma("gamma2", gamma2)?;
    check_n(n)?;
    let e = engine(alpha)?;
    let (a, b) = jacobi_shifts(alpha, gamma1, gamma2, n);
    let ones = e.eval_ones(lambda, n)?;
    if ones.is_zero() {
        return Ok(ones);
    }
    Ok(gen_pochhammer(&a, alpha, lambda)? / gen_pochhammer(&b, alpha, lambda)? * ones)
}

/// `H_λ(0) = (−1)^{k/2} j_λ / (α^{3k/2} k!) · C_λ(1^N) · b(λ, α)` for even `k`.
fn hermite_okounkov(e: &JackEngine, lambda: &Partition, n: usize) -> Result<Rational> {
    let k = lambda.size();
    if k % 2 == 1 {
        return Ok(Rational::zero());
    }
    let h = e.hooks(lambda)?;
    let b = e.p2_power_coefficient(lambda)?;
    let ones = e.eval_ones(lambda, n)?;
    Ok(sign(k / 2) * h.j / (e.alpha().pow(3 * k as i32 / 2) * factorial_q(k)) * ones * b)
}

pub fn hermite_at_zero(lambda: &Partition, alpha: &Rational, n: usize, route: HermiteRoute) -> Result<Rational> {
    check_n(n)?;
    match route {
        HermiteRoute::Okounkov => hermite_okounkov(&*engine(alpha)?, lambda, n),
        HermiteRoute::Recurrence => Ok(hermite_omega_coeffs(lambda, alpha, n)?.get(&Partition::empty())),
    }
}

/// Adds a box in row `i` (zero-based), keeping the result inside `lambda`
/// and within `n` rows.
fn grow(sigma: &Partition, i: usize, lambda: &Partition, n: usize) -> Option<Partition> {
    if i >= n {
        return None;
    }
    sigma.add_box(i).filter(|s| s.is_contained_in(lambda))
}

/// Jacobi expansion coefficients `v_{λσ}`, normalized by `v_{λλ} = 1`:
/// `v_σ = Σ_i binom(σ^{(i)}, σ) v_{σ^{(i)}} / (b(|λ|−|σ|) + ρ_λ − ρ_σ)`.
pub fn jacobi_v_coeffs(
    lambda: &Partition,
    alpha: &Rational,
    gamma1: &Rational,
    gamma2: &Rational,
    n: usize,
) -> Result<ExpansionCoeffs> {
    check_gamma("gamma1", gamma1)?;
    check_gamma("gamma2", gamma2)?;
    check_n(n)?;
    let e = engine(alpha)?;
    let (_, b) = jacobi_shifts(alpha, gamma1, gamma2, n);
    let rho_l = rho(lambda, alpha);
    let mut v: BTreeMap<Partition, Rational> = BTreeMap::new();
    for sigma in subpartitions(lambda) {
        if sigma.length() > n {
            continue;
        }
        if sigma == *lambda {
            v.insert(sigma, Rational::one());
            continue;
        }
        let mut acc = Rational::zero();
        for i in 0..=sigma.length() {
            if let Some(up) = grow(&sigma, i, lambda, n) {
                let vu = v.get(&up).cloned().unwrap_or_default();
                if !vu.is_zero() {
                    acc += e.generalized_binomial(&up, &sigma)? * vu;
                }
            }
        }
        let den = &b * Rational::from(lambda.size() - sigma.size()) + &rho_l - rho(&sigma, alpha);
        if den.is_zero() {
            return Err(Error::Internal(format!("vanishing denominator at {sigma} in {lambda}")));
        }
        v.insert(sigma, acc / den);
    }
    Ok(ExpansionCoeffs { lambda: lambda.clone(), family: Family::Jacobi, coeffs: v })
}

/// `E{C_λ}` under the Jacobi weight, recovered from the `v` coefficients
/// through orthogonality of `J_λ` to constants, recursively in `|λ|`.
pub fn jacobi_expectation_via_v(
    lambda: &Partition,
    alpha: &Rational,
    gamma1: &Rational,
    gamma2: &Rational,
    n: usize,
) -> Result<Rational> {
    let e = engine(alpha)?;
    if lambda.length() > n {
        return Ok(Rational::zero());
    }
    let (a, _) = jacobi_shifts(alpha, gamma1, gamma2, n);
    // Normalized expectations E{C_σ}/((a)_σ C_σ(1)), filled bottom-up.
    let mut norm: BTreeMap<Partition, Rational> = BTreeMap::new();
    let mut subs = subpartitions(lambda);
    subs.reverse();
    for tau in subs {
        if tau.is_empty() {
            norm.insert(tau, Rational::one());
            continue;
        }
        let v = jacobi_v_coeffs(&tau, alpha, gamma1, gamma2, n)?;
        let mut acc = Rational::zero();
        for (sigma, c) in &v.coeffs {
            if sigma != &tau {
                acc += sign(sigma.size()) * c * &norm[sigma];
            }
        }
        norm.insert(tau.clone(), -sign(tau.size()) * acc);
    }
    Ok(&norm[lambda] * gen_pochhammer(&a, alpha, lambda)? * e.eval_ones(lambda, n)?)
}

/// Hermite expansion coefficients `ω_{λσ}` with `ω_{λλ} = C_λ(1^N)`, for the
/// weight `e^{−x²/2}`:
/// `ω_σ = −1/(|λ|−|σ|) [Σ_i binom(σ^{(i)(i)}, σ^{(i)}) binom(σ^{(i)}, σ) ω_{σ^{(i)(i)}}
///  + Σ_{i≠j} (σ_i − σ_j − (i−j)/α) binom(σ^{(i)(j)}, σ^{(j)}) binom(σ^{(j)}, σ) ω_{σ^{(i)(j)}}]`.
pub fn hermite_omega_coeffs(lambda: &Partition, alpha: &Rational, n: usize) -> Result<ExpansionCoeffs> {
    check_n(n)?;
    let e = engine(alpha)?;
    let inv_alpha = alpha.recip();
    let mut w: BTreeMap<Partition, Rational> = BTreeMap::new();
    let get = |w: &BTreeMap<Partition, Rational>, p: &Partition| w.get(p).cloned().unwrap_or_default();
    for sigma in subpartitions(lambda) {
        if sigma.length() > n {
            continue;
        }
        if sigma == *lambda {
            w.insert(sigma, e.eval_ones(lambda, n)?);
            continue;
        }
        let gap = lambda.size() - sigma.size();
        if gap % 2 == 1 {
            continue;
        }
        let rows = (sigma.length() + 1).min(n);
        let mut acc = Rational::zero();
        for i in 0..rows {
            let Some(si) = grow(&sigma, i, lambda, n) else { continue };
            if let Some(sii) = grow(&si, i, lambda, n) {
                let wv = get(&w, &sii);
                if !wv.is_zero() {
                    acc += e.generalized_binomial(&sii, &si)? * e.generalized_binomial(&si, &sigma)? * wv;
                }
            }
        }
        for j in 0..rows {
            let Some(sj) = grow(&sigma, j, lambda, n) else { continue };
            let b_j = e.generalized_binomial(&sj, &sigma)?;
            for i in 0..(sj.length() + 1).min(n) {
                if i == j {
                    continue;
                }
                let Some(sij) = grow(&sj, i, lambda, n) else { continue };
                let wv = get(&w, &sij);
                if wv.is_zero() {
                    continue;
                }
                let coef = Rational::from(sigma.part(i) as i64 - sigma.part(j) as i64)
                    - &inv_alpha * Rational::from(i as i64 - j as i64);
                acc += coef * e.generalized_binomial(&sij, &sj)? * &b_j * wv;
            }
        }
        w.insert(sigma, -acc / Rational::from(gap));
    }
    w.retain(|_, v| !v.is_zero());
    Ok(ExpansionCoeffs { lambda: lambda.clone(), family: Family::Hermite, coeffs: w })
}

/// Coefficients of `C_σ(x)/C_σ(1^N)` in `L^{α,γ}_λ(x)`:
/// `(a)_λ C_λ(1^N) (−1)^{|σ|} binom(λ, σ) / (a)_σ` with `a = γ + 1 + (N−1)/α`.
pub fn laguerre_coeffs(lambda: &Partition, alpha: &Rational, gamma: &Rational, n: usize) -> Result<ExpansionCoeffs> {
    check_gamma("gamma", gamma)?;
    check_n(n)?;
    let e = engine(alpha)?;
    let a = laguerre_shift(alpha, gamma, n);
    let top = gen_pochhammer(&a, alpha, lambda)? * e.eval_ones(lambda, n)?;
    let mut coeffs = BTreeMap::new();
    for sigma in subpartitions(lambda) {
        if sigma.length() > n {
            continue;
        }
        let c = &top * sign(sigma.size()) * e.generalized_binomial(lambda, &sigma)?
            / gen_pochhammer(&a, alpha, &sigma)?;
        if !c.is_zero() {
            coeffs.insert(sigma, c);
        }
    }
    Ok(ExpansionCoeffs { lambda: lambda.clone(), family: Family::Laguerre, coeffs })
}
