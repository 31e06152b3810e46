//! Generalized binomial coefficients `binom(κ, σ)`, defined by
//! `C_κ(1+t)/C_κ(1) = Σ_σ binom(κ, σ) C_σ(t)/C_σ(1)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::engine::{cached, JackEngine};
use super::sympoly::Basis;
use crate::error::{Error, Result};
use crate::partition::{partitions_of, Partition};
use crate::rational::Rational;

fn pascal(n: usize) -> Vec<Vec<u128>> {
    let mut t = vec![vec![0u128; n + 1]; n + 1];
    for i in 0..=n {
        t[i][0] = 1;
        for j in 1..=i {
            t[i][j] = t[i - 1][j - 1] + if j < i { t[i - 1][j] } else { 0 };
        }
    }
    t
}

/// Advances `v` to the next lexicographic permutation; false when done.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl JackEngine {
    /// All `binom(κ, σ)` for `σ ⊆ κ`, computed in `|κ|` variables and
    /// spot-checked in `|κ| + 1`.
    pub fn binomial_row(&self, kappa: &Partition) -> Result<Arc<BTreeMap<Partition, Rational>>> {
        cached(&self.binomials, kappa, || {
            let n = kappa.size().max(1);
            let row = self.binomial_row_in(kappa, n)?;
            if row != self.binomial_row_in(kappa, n + 1)? {
                return Err(Error::Internal(format!("binomials of {kappa} depend on the variable count")));
            }
            Ok(row)
        })
    }

    /// Same as [`binomial_row`](Self::binomial_row) but expanding in `n ≥ |κ|`
    /// variables; the result does not depend on `n`.
    pub fn binomial_row_in(&self, kappa: &Partition, n: usize) -> Result<BTreeMap<Partition, Rational>> {
        let k = kappa.size();
        if n < k.max(1) {
            return Err(Error::Domain(format!("need at least {k} variables, got {n}")));
        }
        let c = self.jack(kappa, Basis::JackC)?;
        let binom = pascal(k);
        let targets: Vec<Vec<Partition>> = (0..=k).map(|s| partitions_of(s, Some(n))).collect();
        // coef[s][μ] = coefficient of t^μ in C_κ(1 + t).
        let mut coef: Vec<Vec<Rational>> = targets.iter().map(|ts| vec![Rational::zero(); ts.len()]).collect();
        for (nu, cnu) in c.terms() {
            let mut sums: Vec<Vec<u128>> = targets.iter().map(|ts| vec![0u128; ts.len()]).collect();
            let mut a: Vec<usize> = nu.parts().to_vec();
            a.resize(n, 0);
            a.sort_unstable();
            loop {
                for (s, ts) in targets.iter().enumerate() {
                    for (m, mu) in ts.iter().enumerate() {
                        let mut prod = 1u128;
                        for (i, &mi) in mu.parts().iter().enumerate() {
                            if mi > a[i] {
                                prod = 0;
                                break;
                            }
                            prod *= binom[a[i]][mi];
                        }
                        sums[s][m] += prod;
                    }
                }
                if !next_permutation(&mut a) {
                    break;
                }
            }
            for (s, row) in sums.iter().enumerate() {
                for (m, &v) in row.iter().enumerate() {
                    if v != 0 {
                        coef[s][m] += cnu * Rational::from_bigint(v.into());
                    }
                }
            }
        }

        let top = self.eval_ones(kappa, n)?;
        let mut out = BTreeMap::new();
        for (s, ts) in targets.iter().enumerate() {
            let f = crate::jack::SymPoly::from_terms(
                s,
                Basis::Monomial,
                None,
                ts.iter().cloned().zip(coef[s].iter().cloned()),
            )?;
            let in_c = self.convert(&f, Basis::JackC)?;
            for (sigma, d) in in_c.terms() {
                let v = d * self.eval_ones(sigma, n)? / &top;
                out.insert(sigma.clone(), v);
            }
        }
        Ok(out)
    }

    /// `binom(κ, σ)`; zero unless `σ ⊆ κ`.
    pub fn generalized_binomial(&self, kappa: &Partition, sigma: &Partition) -> Result<Rational> {
        if !sigma.is_contained_in(kappa) {
            return Ok(Rational::zero());
        }
        Ok(self.binomial_row(kappa)?.get(sigma).cloned().unwrap_or_default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn permutations_are_distinct() {
        let mut v = vec![0, 0, 1, 2];
        let mut count = 1;
        while next_permutation(&mut v) {
            count += 1;
        }
        assert_eq!(count, 12);
    }

    #[test]
    fn simple_binomials() {
        let e = JackEngine::new(Rational::new(2, 3), 12).unwrap();
        assert_eq!(e.generalized_binomial(&p("3,1"), &Partition::empty()).unwrap(), Rational::one());
        assert_eq!(e.generalized_binomial(&p("1"), &p("1")).unwrap(), Rational::one());
        assert_eq!(e.generalized_binomial(&p("2"), &p("1,1")).unwrap(), Rational::zero());
        // binom(κ, (1)) = |κ|.
        for lam in ["2", "1,1", "3,1", "2,2,1"] {
            let lam = p(lam);
            assert_eq!(e.generalized_binomial(&lam, &p("1")).unwrap(), Rational::from(lam.size()));
        }
    }

    #[test]
    fn independent_of_variable_count() {
        let e = JackEngine::new(Rational::new(5, 2), 12).unwrap();
        for lam in ["2,1", "3,1", "2,2"] {
            let lam = p(lam);
            let a = e.binomial_row_in(&lam, lam.size()).unwrap();
            let b = e.binomial_row_in(&lam, lam.size() + 1).unwrap();
            assert_eq!(a, b);
        }
    }
}
