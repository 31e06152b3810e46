//! Transition matrices between the monomial, power-sum and elementary bases.
//!
//! Tables are built once per degree and shared process-wide.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use crate::matrix::RatMatrix;
use crate::partition::{partitions_of, z_factor, Partition};
use crate::rational::{sign, Rational};

/// All fixed-α data for one degree `k`.
#[derive(Debug)]
pub struct DegreeTables {
    pub degree: usize,
    /// Partitions of `k` in descending lexicographic order.
    pub partitions: Vec<Partition>,
    pub index: HashMap<Partition, usize>,
    /// Row `μ` holds the monomial coefficients of `p_μ`.
    pub p_to_m: RatMatrix,
    pub m_to_p: RatMatrix,
    /// Row `μ` holds the monomial coefficients of `e_μ`.
    pub e_to_m: RatMatrix,
    pub m_to_e: RatMatrix,
    /// `raise[ν]` lists `(μ, w)`: the off-diagonal part of the
    /// Laplace–Beltrami operator sends `m_μ` to `(2/α) w m_ν + ...`.
    pub raise: Vec<Vec<(usize, u64)>>,
}

impl DegreeTables {
    pub fn idx(&self, lambda: &Partition) -> usize {
        self.index[lambda]
    }

    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }
}

type Sparse = BTreeMap<Partition, Rational>;

/// Multiplies a monomial expansion by `p_r`.
fn times_power_sum(f: &Sparse, r: usize) -> Sparse {
    let mut out: Sparse = BTreeMap::new();
    for (nu, c) in f {
        let mut seen = Vec::new();
        let parts = nu.parts();
        for i in 0..=parts.len() {
            if i < parts.len() && i > 0 && parts[i] == parts[i - 1] {
                continue;
            }
            let mut v = parts.to_vec();
            if i == v.len() {
                v.push(r);
            } else {
                v[i] += r;
            }
            let rho = Partition::from_unsorted(v);
            if seen.contains(&rho) {
                continue;
            }
            // Number of ways to reach x^ρ from x^ν · x_i^r.
            let mult = rho
                .parts()
                .iter()
                .enumerate()
                .filter(|&(j, &rj)| {
                    if rj < r {
                        return false;
                    }
                    let mut w = rho.parts().to_vec();
                    w[j] -= r;
                    Partition::from_unsorted(w) == *nu
                })
                .count();
            *out.entry(rho.clone()).or_insert_with(Rational::zero) += c * Rational::from(mult);
            seen.push(rho);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn powersum_in_monomials(mu: &Partition) -> Sparse {
    let mut f: Sparse = BTreeMap::new();
    f.insert(Partition::empty(), Rational::one());
    for &r in mu.parts() {
        f = times_power_sum(&f, r);
    }
    f
}

/// Power-sum expansion of `e_r = Σ_{ν⊢r} (−1)^{r−ℓ(ν)} p_ν / z_ν`.
fn elementary_in_powersums(r: usize) -> Sparse {
    partitions_of(r, None)
        .into_iter()
        .map(|nu| {
            let c = sign(r - nu.length()) / Rational::from_bigint(z_factor(&nu));
            (nu, c)
        })
        .collect()
}

fn powersum_product(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out: Sparse = BTreeMap::new();
    for (x, cx) in a {
        for (y, cy) in b {
            let mut parts = x.parts().to_vec();
            parts.extend_from_slice(y.parts());
            *out.entry(Partition::from_unsorted(parts)).or_insert_with(Rational::zero) += cx * cy;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn raise_table(partitions: &[Partition], index: &HashMap<Partition, usize>) -> Vec<Vec<(usize, u64)>> {
    partitions
        .iter()
        .map(|nu| {
            let parts = nu.parts();
            let mut acc: BTreeMap<usize, u64> = BTreeMap::new();
            for j in 0..parts.len() {
                for k in j + 1..parts.len() {
                    let s = parts[j] + parts[k];
                    let lo = parts[j].min(parts[k]);
                    for q in 0..lo {
                        let p = s - q;
                        let mut v = parts.to_vec();
                        v[j] = p;
                        v[k] = q;
                        let mu = Partition::from_unsorted(v);
                        *acc.entry(index[&mu]).or_insert(0) += (p - q) as u64;
                    }
                }
            }
            acc.into_iter().collect()
        })
        .collect()
}

fn build(k: usize) -> DegreeTables {
    let partitions = partitions_of(k, None);
    let index: HashMap<Partition, usize> =
        partitions.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let n = partitions.len();

    let mut p_to_m = RatMatrix::zeros(n, n);
    for (i, mu) in partitions.iter().enumerate() {
        for (lam, c) in powersum_in_monomials(mu) {
            p_to_m.set(i, index[&lam], c);
        }
    }

    let mut e_in_p = RatMatrix::zeros(n, n);
    for (i, mu) in partitions.iter().enumerate() {
        let mut f: Sparse = BTreeMap::new();
        f.insert(Partition::empty(), Rational::one());
        for &r in mu.parts() {
            f = powersum_product(&f, &elementary_in_powersums(r));
        }
        for (lam, c) in f {
            e_in_p.set(i, index[&lam], c);
        }
    }
    let e_to_m = e_in_p.mul(&p_to_m);

    let m_to_p = p_to_m.inverse().expect("power sums form a basis");
    let m_to_e = e_to_m.inverse().expect("elementary functions form a basis");
    let raise = raise_table(&partitions, &index);
    DegreeTables { degree: k, partitions, index, p_to_m, m_to_p, e_to_m, m_to_e, raise }
}

/// Shared tables for degree `k`.
pub fn tables(k: usize) -> Arc<DegreeTables> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<DegreeTables>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.read().expect("table cache poisoned").get(&k) {
        return Arc::clone(t);
    }
    let built = Arc::new(build(k));
    let mut w = cache.write().expect("table cache poisoned");
    Arc::clone(w.entry(k).or_insert(built))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn p21_in_monomials() {
        let t = tables(3);
        // p_2 p_1 = m_3 + m_21
        let row = t.p_to_m.row(t.idx(&p("2,1")));
        assert_eq!(row[t.idx(&p("3"))], Rational::one());
        assert_eq!(row[t.idx(&p("2,1"))], Rational::one());
        assert_eq!(row[t.idx(&p("1,1,1"))], Rational::zero());
        // p_1^3 = m_3 + 3 m_21 + 6 m_111
        let row = t.p_to_m.row(t.idx(&p("1,1,1")));
        assert_eq!(row[t.idx(&p("2,1"))], Rational::from(3));
        assert_eq!(row[t.idx(&p("1,1,1"))], Rational::from(6));
    }

    #[test]
    fn elementary_are_monomials_of_columns() {
        let t = tables(4);
        // e_4 = m_1111
        let row = t.e_to_m.row(t.idx(&p("4")));
        for (j, lam) in t.partitions.iter().enumerate() {
            let want = if *lam == p("1,1,1,1") { Rational::one() } else { Rational::zero() };
            assert_eq!(row[j], want);
        }
        // e_2 e_1 = m_21 + 3 m_111 in degree 3
        let t = tables(3);
        let row = t.e_to_m.row(t.idx(&p("2,1")));
        assert_eq!(row[t.idx(&p("2,1"))], Rational::one());
        assert_eq!(row[t.idx(&p("1,1,1"))], Rational::from(3));
        assert_eq!(row[t.idx(&p("3"))], Rational::zero());
    }

    #[test]
    fn inverses_are_consistent() {
        let t = tables(5);
        assert!(t.p_to_m.mul(&t.m_to_p).is_identity());
        assert!(t.e_to_m.mul(&t.m_to_e).is_identity());
    }

    #[test]
    fn raise_degree_two() {
        let t = tables(2);
        // m_2 contributes 2·(2/α) to m_11.
        assert_eq!(t.raise[t.idx(&p("1,1"))], vec![(t.idx(&p("2")), 2)]);
        assert!(t.raise[t.idx(&p("2"))].is_empty());
    }
}
