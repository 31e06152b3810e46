//! Explicit polynomials in a fixed number of variables and the
//! Laplace–Beltrami operator
//! `Δ = Σ_i x_i² ∂_i² + (2/α) Σ_{i≠j} x_i²/(x_i − x_j) ∂_i`.
//!
//! This is deliberately independent of the monomial-basis machinery in the
//! engine; it is used to check the eigenfunction property directly.

use std::collections::BTreeMap;

use super::sympoly::{Basis, SymPoly};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A polynomial in `n` variables: exponent vector to coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MultiPoly {
    pub n: usize,
    pub terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero(n: usize) -> Self {
        MultiPoly { n, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(exps).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, c: &Rational) -> MultiPoly {
        let mut out = MultiPoly::zero(self.n);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, v) in &other.terms {
            out.add_term(e.clone(), v.clone());
        }
        out
    }

    /// Expands a monomial-basis symmetric function in `n` variables.
    pub fn from_symmetric(f: &SymPoly, n: usize) -> Result<MultiPoly> {
        if f.basis() != Basis::Monomial {
            return Err(Error::Internal("expected a monomial-basis expansion".into()));
        }
        let mut out = MultiPoly::zero(n);
        for (lam, c) in f.terms() {
            if lam.length() > n {
                continue;
            }
            let mut a: Vec<u32> = lam.parts().iter().map(|&p| p as u32).collect();
            a.resize(n, 0);
            a.sort_unstable();
            loop {
                out.add_term(a.clone(), c.clone());
                if !next_perm(&mut a) {
                    break;
                }
            }
        }
        Ok(out)
    }

    /// `x_i^2 ∂_i^2` (when `second`) or `x_i^2 ∂_i`.
    fn x2_derivative(&self, i: usize, second: bool) -> MultiPoly {
        let mut out = MultiPoly::zero(self.n);
        for (e, c) in &self.terms {
            let a = e[i];
            let factor = if second { a * a.saturating_sub(1) } else { a };
            if factor == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] = if second { a } else { a + 1 };
            out.add_term(e2, c * Rational::from(factor as i64));
        }
        out
    }

    /// Exact quotient by `x_i − x_j`; errors if the division leaves a remainder.
    pub fn divide_by_difference(&self, i: usize, j: usize) -> Result<MultiPoly> {
        let mut rem = self.clone();
        let mut q = MultiPoly::zero(self.n);
        while let Some((lead, c)) =
            rem.terms.iter().max_by(|a, b| (a.0[i], a.0).cmp(&(b.0[i], b.0))).map(|(e, c)| (e.clone(), c.clone()))
        {
            if lead[i] == 0 {
                return Err(Error::Internal("polynomial is not divisible by x_i - x_j".into()));
            }
            let mut qe = lead.clone();
            qe[i] -= 1;
            let mut shifted = qe.clone();
            shifted[j] += 1;
            rem.add_term(lead, -c.clone());
            rem.add_term(shifted, c.clone());
            q.add_term(qe, c);
        }
        Ok(q)
    }

    pub fn laplace_beltrami(&self, alpha: &Rational) -> Result<MultiPoly> {
        let n = self.n;
        let mut out = MultiPoly::zero(n);
        let first: Vec<MultiPoly> = (0..n).map(|i| self.x2_derivative(i, false)).collect();
        for i in 0..n {
            out = out.add(&self.x2_derivative(i, true));
        }
        let two_over = Rational::from(2) / alpha;
        for i in 0..n {
            for j in i + 1..n {
                let diff = first[i].add(&first[j].scaled(&-Rational::one()));
                out = out.add(&diff.divide_by_difference(i, j)?.scaled(&two_over));
            }
        }
        Ok(out)
    }
}

fn next_perm(v: &mut [u32]) -> bool {
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
