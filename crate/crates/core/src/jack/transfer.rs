//! Jack-character transfer matrices and their closed-form rows.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::partition::{hook_products, Partition};
use crate::rational::{factorial_q, sign, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransferKind {
    /// `θ^λ_μ`, the coefficient of `p_μ` in `J_λ`.
    Theta,
    /// `κ^λ_μ`, the coefficient of `J_λ` in `p_μ`.
    Kappa,
}

/// Square table indexed by `(λ, μ)`, both partitions of `degree`.
#[derive(Clone, Debug)]
pub struct TransferMatrix {
    degree: usize,
    kind: TransferKind,
    alpha: Rational,
    partitions: Vec<Partition>,
    index: HashMap<Partition, usize>,
    entries: RatMatrix,
}

impl TransferMatrix {
    /// `entries[i][j]` is the entry for `(partitions[i], partitions[j])`.
    pub fn new(
        degree: usize,
        kind: TransferKind,
        alpha: Rational,
        partitions: Vec<Partition>,
        entries: RatMatrix,
    ) -> Self {
        let index = partitions.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        TransferMatrix { degree, kind, alpha, partitions, index, entries }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn kind(&self) -> TransferKind {
        self.kind
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    /// Row and column labels, descending lexicographic.
    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn entries(&self) -> &RatMatrix {
        &self.entries
    }

    pub fn get(&self, lambda: &Partition, mu: &Partition) -> Rational {
        self.entries.get(self.index[lambda], self.index[mu]).clone()
    }

    pub fn to_json(&self) -> TransferJson {
        TransferJson {
            degree: self.degree,
            kind: self.kind,
            alpha: self.alpha.clone(),
            partitions: self.partitions.clone(),
            entries: (0..self.partitions.len()).map(|i| self.entries.row(i).to_vec()).collect(),
        }
    }
}

/// Wire form: `entries[i][j]` belongs to `(partitions[i], partitions[j])`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferJson {
    pub degree: usize,
    pub kind: TransferKind,
    pub alpha: Rational,
    pub partitions: Vec<Partition>,
    pub entries: Vec<Vec<Rational>>,
}

/// `∏_{s∈λ, s≠(1,1)} (α a′(s) − l′(s))`.
fn content_product_off_corner(lambda: &Partition, alpha: &Rational) -> Rational {
    lambda
        .boxes()
        .filter(|b| !(b.row == 1 && b.col == 1))
        .map(|b| alpha * Rational::from(b.coarm) - Rational::from(b.coleg))
        .product()
}

/// `κ^λ_{(k)} = (αk / j_λ) ∏_{s≠(1,1)} (α a′(s) − l′(s))`.
pub fn kappa_k_closed(lambda: &Partition, alpha: &Rational) -> Result<Rational> {
    let h = hook_products(lambda, alpha)?;
    if lambda.is_empty() {
        return Ok(Rational::one());
    }
    let k = Rational::from(lambda.size());
    Ok(alpha * k / h.j * content_product_off_corner(lambda, alpha))
}

/// Row-by-row form of [`kappa_k_closed`]:
/// `(−1)^{k−λ_1} α^k k (λ_1−1)! / j_λ · ∏_{i≥1} binom(i/α, λ_{i+1}) λ_{i+1}!`.
pub fn kappa_k_closed_rows(lambda: &Partition, alpha: &Rational) -> Result<Rational> {
    let h = hook_products(lambda, alpha)?;
    if lambda.is_empty() {
        return Ok(Rational::one());
    }
    let k = lambda.size();
    let l1 = lambda.first();
    let mut v = sign(k - l1) * alpha.pow(k as i32) * Rational::from(k) * factorial_q(l1 - 1) / h.j;
    for (i, &part) in lambda.parts().iter().enumerate().skip(1) {
        let x = Rational::from(i) / alpha;
        v *= x.binomial(part) * factorial_q(part);
    }
    Ok(v)
}

/// The three rows of `θ^λ` available in closed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaSpecialRows {
    /// `θ^λ_{(k)} = ∏_{s≠(1,1)} (α a′ − l′)`.
    pub row: Rational,
    /// `θ^λ_{(1^k)} = 1`.
    pub column: Rational,
    /// `θ^λ_{(2,1^{k−2})} = α n(λ′) − n(λ)`; absent for `k < 2`.
    pub hook: Option<Rational>,
}

pub fn theta_special_rows(lambda: &Partition, alpha: &Rational) -> Result<ThetaSpecialRows> {
    if !alpha.is_positive() {
        return Err(Error::Domain(format!("alpha must be positive (got {alpha})")));
    }
    let hook = (lambda.size() >= 2).then(|| {
        alpha * Rational::from(lambda.conjugate().n_statistic()) - Rational::from(lambda.n_statistic())
    });
    Ok(ThetaSpecialRows {
        row: content_product_off_corner(lambda, alpha),
        column: Rational::one(),
        hook,
    })
}

/// `κ^λ_{(1^k)} = α^k k! / j_λ`.
pub fn kappa_column_closed(lambda: &Partition, alpha: &Rational) -> Result<Rational> {
    let h = hook_products(lambda, alpha)?;
    let k = lambda.size();
    Ok(alpha.pow(k as i32) * factorial_q(k) / h.j)
}

/// `∏_{s∈λ} (Y + α a′(s) − l′(s))`.
pub fn content_polynomial(lambda: &Partition, alpha: &Rational, y: &Rational) -> Rational {
    lambda
        .boxes()
        .map(|b| y + alpha * Rational::from(b.coarm) - Rational::from(b.coleg))
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn closed_kappa_small() {
        let a = Rational::new(3, 2);
        let den = Rational::one() + &a;
        assert_eq!(kappa_k_closed(&p("2"), &a).unwrap(), den.recip());
        assert_eq!(kappa_k_closed(&p("1,1"), &a).unwrap(), -den.recip());
        assert_eq!(kappa_k_closed(&p("1"), &a).unwrap(), Rational::one());
        for lam in ["2", "1,1", "3,1", "2,2,1", "4,1,1"] {
            assert_eq!(kappa_k_closed(&p(lam), &a).unwrap(), kappa_k_closed_rows(&p(lam), &a).unwrap());
        }
    }

    #[test]
    fn special_rows_degree_two() {
        let a = Rational::new(7, 2);
        let r = theta_special_rows(&p("2"), &a).unwrap();
        assert_eq!(r.row, a);
        assert_eq!(r.hook, Some(a.clone()));
        let r = theta_special_rows(&p("1,1"), &a).unwrap();
        assert_eq!(r.hook, Some(-Rational::one()));
        assert_eq!(theta_special_rows(&p("1"), &a).unwrap().hook, None);
    }
}
