use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::rational::Rational;

/// Basis in which a [`SymPoly`] is expanded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Monomial,
    #[serde(rename = "powersum")]
    PowerSum,
    Elementary,
    #[serde(rename = "jackP")]
    JackP,
    #[serde(rename = "jackJ")]
    JackJ,
    #[serde(rename = "jackC")]
    JackC,
}

impl Basis {
    pub fn is_jack(self) -> bool {
        matches!(self, Basis::JackP | Basis::JackJ | Basis::JackC)
    }

    pub fn name(self) -> &'static str {
        match self {
            Basis::Monomial => "monomial",
            Basis::PowerSum => "powersum",
            Basis::Elementary => "elementary",
            Basis::JackP => "jackP",
            Basis::JackJ => "jackJ",
            Basis::JackC => "jackC",
        }
    }

    /// Symbol used when printing terms, e.g. `p_(2,1)`.
    pub fn symbol(self) -> &'static str {
        match self {
            Basis::Monomial => "m",
            Basis::PowerSum => "p",
            Basis::Elementary => "e",
            Basis::JackP => "P",
            Basis::JackJ => "J",
            Basis::JackC => "C",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "monomial" | "m" => Basis::Monomial,
            "powersum" | "power-sum" | "p" => Basis::PowerSum,
            "elementary" | "e" => Basis::Elementary,
            "jackp" => Basis::JackP,
            "jackj" => Basis::JackJ,
            "jackc" => Basis::JackC,
            _ => return Err(Error::Parse(format!("unknown basis '{s}'"))),
        })
    }
}

/// A homogeneous symmetric function of fixed degree, expanded in one basis.
///
/// Keys are partitions of `degree`; zero coefficients are never stored. Jack
/// bases carry the parameter α they were built for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPoly {
    degree: usize,
    basis: Basis,
    alpha: Option<Rational>,
    coeffs: BTreeMap<Partition, Rational>,
}

impl SymPoly {
    pub fn zero(degree: usize, basis: Basis, alpha: Option<Rational>) -> Self {
        SymPoly { degree, basis, alpha: if basis.is_jack() { alpha } else { None }, coeffs: BTreeMap::new() }
    }

    /// A single basis element `b_λ`.
    pub fn basis_element(lambda: &Partition, basis: Basis, alpha: Option<Rational>) -> Self {
        let mut f = SymPoly::zero(lambda.size(), basis, alpha);
        f.add_term(lambda.clone(), Rational::one());
        f
    }

    pub fn from_terms(
        degree: usize,
        basis: Basis,
        alpha: Option<Rational>,
        terms: impl IntoIterator<Item = (Partition, Rational)>,
    ) -> Result<Self> {
        let mut f = SymPoly::zero(degree, basis, alpha);
        for (lam, c) in terms {
            if lam.size() != degree {
                return Err(Error::DegreeMismatch(degree, lam.size()));
            }
            f.add_term(lam, c);
        }
        Ok(f)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn alpha(&self) -> Option<&Rational> {
        self.alpha.as_ref()
    }

    /// Adds `c` to the coefficient of `lambda`, dropping it if it cancels.
    ///
    /// Panics if `lambda` has the wrong size.
    pub fn add_term(&mut self, lambda: Partition, c: Rational) {
        assert_eq!(lambda.size(), self.degree, "partition size must equal degree");
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(lambda);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, lambda: &Partition) -> Rational {
        self.coeffs.get(lambda).cloned().unwrap_or_default()
    }

    /// Terms in descending lexicographic order of the partition.
    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.coeffs.iter().rev()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scaled(&self, c: &Rational) -> SymPoly {
        let mut out = SymPoly::zero(self.degree, self.basis, self.alpha.clone());
        for (lam, v) in &self.coeffs {
            out.add_term(lam.clone(), v * c);
        }
        out
    }

    /// Sum of two expansions in the same basis.
    pub fn add(&self, other: &SymPoly) -> Result<SymPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (lam, v) in &other.coeffs {
            out.add_term(lam.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SymPoly) -> Result<SymPoly> {
        self.add(&other.scaled(&-Rational::one()))
    }

    /// Product of two power-sum expansions (`p_λ p_μ = p_{λ∪μ}`).
    pub fn mul_powersum(&self, other: &SymPoly) -> Result<SymPoly> {
        if self.basis != Basis::PowerSum || other.basis != Basis::PowerSum {
            return Err(Error::Internal("mul_powersum needs power-sum operands".into()));
        }
        let mut out = SymPoly::zero(self.degree + other.degree, Basis::PowerSum, None);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                let mut parts = a.parts().to_vec();
                parts.extend_from_slice(b.parts());
                out.add_term(Partition::from_unsorted(parts), ca * cb);
            }
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &SymPoly) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        if self.basis != other.basis || self.alpha != other.alpha {
            return Err(Error::Internal(format!(
                "cannot combine {} and {} expansions directly",
                self.basis, other.basis
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> SymPolyJson {
        SymPolyJson {
            degree: self.degree,
            basis: self.basis,
            alpha: self.alpha.clone(),
            terms: self
                .terms()
                .map(|(p, c)| TermJson { partition: p.clone(), coeff: c.clone() })
                .collect(),
        }
    }

    pub fn from_json(j: &SymPolyJson) -> Result<SymPoly> {
        SymPoly::from_terms(
            j.degree,
            j.basis,
            j.alpha.clone(),
            j.terms.iter().map(|t| (t.partition.clone(), t.coeff.clone())),
        )
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (lam, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) {}_{lam}", self.basis.symbol())?;
        }
        Ok(())
    }
}

/// Wire form: `{"degree": k, "basis": name, "terms": [{"partition": [..], "coeff": "p/q"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymPolyJson {
    pub degree: usize,
    pub basis: Basis,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Rational>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub partition: Partition,
    pub coeff: Rational,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn zero_terms_are_dropped() {
        let mut f = SymPoly::zero(2, Basis::Monomial, None);
        f.add_term(p("2"), Rational::one());
        f.add_term(p("2"), -Rational::one());
        assert!(f.is_zero());
    }

    #[test]
    fn powersum_product() {
        let p1 = SymPoly::basis_element(&p("1"), Basis::PowerSum, None);
        let p2 = SymPoly::basis_element(&p("2"), Basis::PowerSum, None);
        let prod = p2.mul_powersum(&p1).unwrap().mul_powersum(&p1).unwrap();
        assert_eq!(prod.coeff(&p("2,1,1")), Rational::one());
        assert_eq!(prod.degree(), 4);
    }

    #[test]
    fn json_shape() {
        let f = SymPoly::from_terms(
            2,
            Basis::PowerSum,
            None,
            vec![(p("1,1"), Rational::one()), (p("2"), Rational::new(-1, 2))],
        )
        .unwrap();
        let s = serde_json::to_string(&f.to_json()).unwrap();
        assert_eq!(
            s,
            r#"{"degree":2,"basis":"powersum","terms":[{"partition":[2],"coeff":"-1/2"},{"partition":[1,1],"coeff":"1"}]}"#
        );
        let back: SymPolyJson = serde_json::from_str(&s).unwrap();
        assert_eq!(SymPoly::from_json(&back).unwrap(), f);
    }

    #[test]
    fn size_mismatch_rejected() {
        assert!(SymPoly::from_terms(3, Basis::Monomial, None, vec![(p("2"), Rational::one())]).is_err());
    }
}
