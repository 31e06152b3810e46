use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use super::classical::{tables, DegreeTables};
use super::sympoly::{Basis, SymPoly};
use super::transfer::{TransferKind, TransferMatrix};
use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::partition::{dominated_by, gen_pochhammer, hook_products, HookProducts, Partition};
use crate::rational::{factorial_q, Rational};

/// Environment variable overriding the default cap on transfer-matrix degree.
pub const K_MAX_ENV: &str = "BETAJACK_KMAX";

pub const DEFAULT_K_MAX: usize = 12;

/// `DEFAULT_K_MAX`, unless overridden through [`K_MAX_ENV`].
pub fn default_k_max() -> usize {
    std::env::var(K_MAX_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_K_MAX)
}

/// Jack data for one degree at a fixed α.
#[derive(Debug)]
pub struct JackDegree {
    pub tables: Arc<DegreeTables>,
    /// Row `λ` holds the monomial coefficients of `P_λ`.
    pub p_matrix: RatMatrix,
    pub p_inverse: RatMatrix,
    pub hooks: Vec<HookProducts>,
    /// `C_λ = c_factor[λ] · P_λ`, i.e. `α^k k! / c′_λ`.
    pub c_factor: Vec<Rational>,
}

impl JackDegree {
    /// Factor `s` with `X_λ = s · C_λ` for the Jack basis `X`.
    pub fn scale_to_c(&self, i: usize, basis: Basis) -> Rational {
        match basis {
            Basis::JackP => self.c_factor[i].recip(),
            Basis::JackJ => &self.hooks[i].lower / &self.c_factor[i],
            Basis::JackC => Rational::one(),
            _ => panic!("scale_to_c on non-Jack basis"),
        }
    }
}

/// `ρ^α_λ = Σ_j λ_j (λ_j − 1 − (2/α)(j − 1))`.
pub fn rho(lambda: &Partition, alpha: &Rational) -> Rational {
    let two_over = Rational::from(2) / alpha;
    lambda
        .parts()
        .iter()
        .enumerate()
        .map(|(j, &l)| Rational::from(l) * (Rational::from(l as i64 - 1) - &two_over * Rational::from(j)))
        .sum()
}

/// Symmetric-function engine for a fixed α. All results are cached.
#[derive(Debug)]
pub struct JackEngine {
    alpha: Rational,
    k_max: usize,
    degrees: RwLock<HashMap<usize, Arc<JackDegree>>>,
    transfer: RwLock<HashMap<(usize, TransferKind), Arc<TransferMatrix>>>,
    pub(super) binomials: RwLock<HashMap<Partition, Arc<BTreeMap<Partition, Rational>>>>,
}

pub(super) fn cached<K: std::hash::Hash + Eq + Clone, V>(
    lock: &RwLock<HashMap<K, Arc<V>>>,
    key: &K,
    make: impl FnOnce() -> Result<V>,
) -> Result<Arc<V>> {
    if let Some(v) = lock.read().expect("cache poisoned").get(key) {
        return Ok(Arc::clone(v));
    }
    let v = Arc::new(make()?);
    let mut w = lock.write().expect("cache poisoned");
    Ok(Arc::clone(w.entry(key.clone()).or_insert(v)))
}

impl JackEngine {
    pub fn new(alpha: Rational, k_max: usize) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(Error::Domain(format!("alpha must be positive (got {alpha})")));
        }
        Ok(JackEngine {
            alpha,
            k_max,
            degrees: RwLock::default(),
            transfer: RwLock::default(),
            binomials: RwLock::default(),
        })
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Per-degree Jack data; degrees above `k_max` are a resource error.
    pub fn degree(&self, k: usize) -> Result<Arc<JackDegree>> {
        self.check_k_max(k)?;
        cached(&self.degrees, &k, || self.build_degree(k))
    }

    fn build_degree(&self, k: usize) -> Result<JackDegree> {
        let alpha = &self.alpha;
        let t = tables(k);
        let n = t.len();
        let two_over = Rational::from(2) / alpha;
        let rhos: Vec<Rational> = t.partitions.iter().map(|p| rho(p, alpha)).collect();
        let mut p_matrix = RatMatrix::zeros(n, n);
        for (l, lambda) in t.partitions.iter().enumerate() {
            let mut u = vec![Rational::zero(); n];
            u[l] = Rational::one();
            for i in l + 1..n {
                let nu = &t.partitions[i];
                if !dominated_by(nu, lambda) {
                    continue;
                }
                let mut acc = Rational::zero();
                for &(mu, w) in &t.raise[i] {
                    if mu >= l && !u[mu].is_zero() {
                        acc += &u[mu] * Rational::from(w as i64);
                    }
                }
                if acc.is_zero() {
                    continue;
                }
                let gap = &rhos[l] - &rhos[i];
                if gap.is_zero() {
                    return Err(Error::Internal(format!(
                        "degenerate eigenvalue for {lambda} and {nu} at alpha {alpha}"
                    )));
                }
                u[i] = &two_over * acc / gap;
            }
            for (i, v) in u.into_iter().enumerate() {
                p_matrix.set(l, i, v);
            }
        }
        let p_inverse = p_matrix.inverse()?;
        let hooks = t
            .partitions
            .iter()
            .map(|p| hook_products(p, alpha))
            .collect::<Result<Vec<_>>>()?;
        let scale = alpha.pow(k as i32) * factorial_q(k);
        let c_factor = hooks.iter().map(|h| &scale / &h.upper).collect();
        Ok(JackDegree { tables: t, p_matrix, p_inverse, hooks, c_factor })
    }

    /// `P_λ`, `J_λ` or `C_λ` expanded in monomials.
    pub fn jack(&self, lambda: &Partition, normalization: Basis) -> Result<SymPoly> {
        if !normalization.is_jack() {
            return Err(Error::Parse(format!("{normalization} is not a Jack normalization")));
        }
        let d = self.degree(lambda.size())?;
        let i = d.tables.idx(lambda);
        let scale = match normalization {
            Basis::JackP => Rational::one(),
            Basis::JackJ => d.hooks[i].lower.clone(),
            _ => d.c_factor[i].clone(),
        };
        let row = d.p_matrix.row(i);
        SymPoly::from_terms(
            lambda.size(),
            Basis::Monomial,
            None,
            d.tables.partitions.iter().cloned().zip(row.iter().map(|c| c * &scale)),
        )
    }

    pub fn jack_p(&self, lambda: &Partition) -> Result<SymPoly> {
        self.jack(lambda, Basis::JackP)
    }

    fn check_alpha(&self, f: &SymPoly) -> Result<()> {
        if f.basis().is_jack() && f.alpha() != Some(&self.alpha) {
            return Err(Error::Domain(format!(
                "expansion is in a Jack basis for alpha {:?}, engine has {}",
                f.alpha().map(ToString::to_string),
                self.alpha
            )));
        }
        Ok(())
    }

    /// Dense monomial coefficients of `f`, indexed like `tables(k).partitions`.
    pub fn to_monomial_vec(&self, f: &SymPoly) -> Result<Vec<Rational>> {
        self.check_alpha(f)?;
        let k = f.degree();
        self.check_k_max(k)?;
        let t = tables(k);
        let mut v = vec![Rational::zero(); t.len()];
        for (lam, c) in f.terms() {
            v[t.idx(lam)] = c.clone();
        }
        let out = match f.basis() {
            Basis::Monomial => v,
            Basis::PowerSum => t.p_to_m.left_apply(&v),
            Basis::Elementary => t.e_to_m.left_apply(&v),
            b => {
                let d = self.degree(k)?;
                let scaled: Vec<Rational> =
                    v.iter().enumerate().map(|(i, c)| c * d.scale_to_c(i, b) * &d.c_factor[i]).collect();
                d.p_matrix.left_apply(&scaled)
            }
        };
        Ok(out)
    }

    fn monomial_vec_into(&self, k: usize, v: &[Rational], target: Basis) -> Result<SymPoly> {
        self.check_k_max(k)?;
        let t = tables(k);
        let coeffs = match target {
            Basis::Monomial => v.to_vec(),
            Basis::PowerSum => t.m_to_p.left_apply(v),
            Basis::Elementary => t.m_to_e.left_apply(v),
            b => {
                let d = self.degree(k)?;
                let in_p = d.p_inverse.left_apply(v);
                in_p.iter()
                    .enumerate()
                    .map(|(i, c)| c / (d.scale_to_c(i, b) * &d.c_factor[i]))
                    .collect()
            }
        };
        let alpha = target.is_jack().then(|| self.alpha.clone());
        SymPoly::from_terms(k, target, alpha, t.partitions.iter().cloned().zip(coeffs))
    }

    /// Exact change of basis.
    pub fn convert(&self, f: &SymPoly, target: Basis) -> Result<SymPoly> {
        if f.basis() == target {
            self.check_alpha(f)?;
            return Ok(f.clone());
        }
        if f.basis().is_jack() && target.is_jack() {
            return self.renormalize(f, target);
        }
        let v = self.to_monomial_vec(f)?;
        self.monomial_vec_into(f.degree(), &v, target)
    }

    /// Rewrites a Jack-basis expansion in another Jack normalization.
    pub fn renormalize(&self, f: &SymPoly, target: Basis) -> Result<SymPoly> {
        self.check_alpha(f)?;
        if !f.basis().is_jack() || !target.is_jack() {
            return Err(Error::Parse("renormalize works between Jack normalizations only".into()));
        }
        let d = self.degree(f.degree())?;
        let terms = f.terms().map(|(lam, c)| {
            let i = d.tables.idx(lam);
            (lam.clone(), c * d.scale_to_c(i, f.basis()) / d.scale_to_c(i, target))
        });
        SymPoly::from_terms(f.degree(), target, Some(self.alpha.clone()), terms.collect::<Vec<_>>())
    }

    /// `X_λ` as a one-term expansion in Jack basis `X`.
    pub fn jack_element(&self, lambda: &Partition, basis: Basis) -> SymPoly {
        SymPoly::basis_element(lambda, basis, Some(self.alpha.clone()))
    }

    pub fn hooks(&self, lambda: &Partition) -> Result<HookProducts> {
        hook_products(lambda, &self.alpha)
    }

    /// `C_λ(1^N) = α^{2k} k! (N/α)^α_λ / j_λ`; zero when `ℓ(λ) > N`.
    pub fn eval_ones(&self, lambda: &Partition, n: usize) -> Result<Rational> {
        let k = lambda.size();
        let h = self.hooks(lambda)?;
        let t = Rational::from(n) / &self.alpha;
        let poch = gen_pochhammer(&t, &self.alpha, lambda)?;
        Ok(self.alpha.pow(2 * k as i32) * factorial_q(k) * poch / h.j)
    }

    /// Replaces every `p_λ` by `Y^{ℓ(λ)}`.
    pub fn epsilon_y(&self, f: &SymPoly, y: &Rational) -> Result<Rational> {
        let p = self.convert(f, Basis::PowerSum)?;
        Ok(p.terms().map(|(lam, c)| c * y.pow(lam.length() as i32)).sum())
    }

    /// Coefficient of `p_2^{k/2}` in the power-sum expansion of `C_λ`.
    pub fn p2_power_coefficient(&self, lambda: &Partition) -> Result<Rational> {
        let k = lambda.size();
        if k % 2 == 1 {
            return Ok(Rational::zero());
        }
        let c = self.convert(&self.jack_element(lambda, Basis::JackC), Basis::PowerSum)?;
        Ok(c.coeff(&Partition::from_unsorted(vec![2; k / 2])))
    }

    /// Coefficient in `e_k = coeff · C_{(1^k)}`, i.e. `(α)_k / (α^k k!)`.
    pub fn elementary_as_jack(&self, k: usize) -> Rational {
        self.alpha.rising(k) / (self.alpha.pow(k as i32) * factorial_q(k))
    }

    /// `⟨p_λ, p_μ⟩ = α^{ℓ(λ)} z_λ δ_{λμ}`, extended bilinearly.
    pub fn scalar_product(&self, f: &SymPoly, g: &SymPoly) -> Result<Rational> {
        if f.degree() != g.degree() {
            return Err(Error::DegreeMismatch(f.degree(), g.degree()));
        }
        let fp = self.convert(f, Basis::PowerSum)?;
        let gp = self.convert(g, Basis::PowerSum)?;
        Ok(fp
            .terms()
            .map(|(lam, c)| {
                let z = Rational::from_bigint(crate::partition::z_factor(lam));
                c * gp.coeff(lam) * self.alpha.pow(lam.length() as i32) * z
            })
            .sum())
    }

    /// Degrees above `k_max` are a resource error.
    pub fn check_k_max(&self, k: usize) -> Result<()> {
        if k > self.k_max {
            Err(Error::Resource { degree: k, k_max: self.k_max })
        } else {
            Ok(())
        }
    }

    /// `θ^λ_μ`: coefficient of `p_μ` in `J_λ`.
    pub fn theta_table(&self, k: usize) -> Result<Arc<TransferMatrix>> {
        self.check_k_max(k)?;
        cached(&self.transfer, &(k, TransferKind::Theta), || {
            let d = self.degree(k)?;
            let n = d.tables.len();
            let mut j_matrix = d.p_matrix.clone();
            for i in 0..n {
                for col in 0..n {
                    let v = j_matrix.get(i, col);
                    if !v.is_zero() {
                        let s = v * &d.hooks[i].lower;
                        j_matrix.set(i, col, s);
                    }
                }
            }
            let entries = j_matrix.mul(&d.tables.m_to_p);
            Ok(TransferMatrix::new(k, TransferKind::Theta, self.alpha.clone(), d.tables.partitions.clone(), entries))
        })
    }

    /// `κ^λ_μ`: the inverse transfer, `p_μ = Σ_λ κ^λ_μ J_λ`.
    pub fn kappa_table(&self, k: usize) -> Result<Arc<TransferMatrix>> {
        self.check_k_max(k)?;
        cached(&self.transfer, &(k, TransferKind::Kappa), || {
            let theta = self.theta_table(k)?;
            let inv = theta.entries().inverse()?;
            Ok(TransferMatrix::new(
                k,
                TransferKind::Kappa,
                self.alpha.clone(),
                theta.partitions().to_vec(),
                inv.transpose(),
            ))
        })
    }
}

/// Shared engine for `alpha`, using [`default_k_max`].
pub fn engine(alpha: &Rational) -> Result<Arc<JackEngine>> {
    static ENGINES: OnceLock<RwLock<HashMap<Rational, Arc<JackEngine>>>> = OnceLock::new();
    let lock = ENGINES.get_or_init(Default::default);
    cached(lock, alpha, || JackEngine::new(alpha.clone(), default_k_max()))
}
