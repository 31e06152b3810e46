//! Integer partitions and Ferrers-diagram statistics.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{factorial, Rational};

/// A weakly decreasing sequence of positive integers.
///
/// Trailing zeros are stripped on construction, so every partition has a
/// unique representation. The derived `Ord` is the lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition, normalizing away zeros. Errors if the nonzero
    /// parts are not weakly decreasing.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        let mut parts = parts;
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!(
                "parts {parts:?} are not a weakly decreasing sequence of positive integers"
            )));
        }
        Ok(Partition { parts })
    }

    /// Sorts arbitrary nonnegative parts into a partition.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The single-row partition `(k)`.
    pub fn row(k: usize) -> Self {
        Partition::from_unsorted(vec![k])
    }

    /// The single-column partition `(1^k)`.
    pub fn column(k: usize) -> Self {
        Partition { parts: vec![1; k] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `|λ|`.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `ℓ(λ)`.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part `i` (zero-based), zero past the end.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn first(&self) -> usize {
        self.part(0)
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.first();
        let parts = (1..=first)
            .map(|j| self.parts.iter().filter(|&&p| p >= j).count())
            .collect();
        Partition { parts }
    }

    /// `σ ⊆ λ` on Ferrers diagrams.
    pub fn is_contained_in(&self, other: &Partition) -> bool {
        self.length() <= other.length() && self.parts.iter().zip(&other.parts).all(|(a, b)| a <= b)
    }

    /// Multiplicities `r_j` for `j = 1..=λ_1` (index 0 is unused).
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut r = vec![0; self.first() + 1];
        for &p in &self.parts {
            r[p] += 1;
        }
        r
    }

    /// Adds one box to row `i` (zero-based); `None` if the result is not a partition.
    pub fn add_box(&self, i: usize) -> Option<Partition> {
        if i > self.length() {
            return None;
        }
        if i > 0 && self.part(i) + 1 > self.part(i - 1) {
            return None;
        }
        let mut parts = self.parts.clone();
        if i == parts.len() {
            parts.push(1);
        } else {
            parts[i] += 1;
        }
        Some(Partition { parts })
    }

    /// Removes one box from row `i`; `None` if the result is not a partition.
    pub fn remove_box(&self, i: usize) -> Option<Partition> {
        if i >= self.length() || self.part(i) <= self.part(i + 1) {
            return None;
        }
        let mut parts = self.parts.clone();
        parts[i] -= 1;
        if parts[i] == 0 {
            parts.pop();
        }
        Some(Partition { parts })
    }

    /// Every box `(i, j)` (one-based) with its statistics, row by row.
    pub fn boxes(&self) -> impl Iterator<Item = BoxStats> + '_ {
        let conj = self.conjugate();
        self.parts.iter().enumerate().flat_map(move |(r, &len)| {
            let conj = conj.clone();
            (1..=len).map(move |j| {
                let i = r + 1;
                BoxStats {
                    row: i,
                    col: j,
                    arm: len - j,
                    leg: conj.part(j - 1) - i,
                    coarm: j - 1,
                    coleg: i - 1,
                }
            })
        })
    }

    /// `(t^N − λ)^+ = (t − λ_N, …, t − λ_1)`; requires `ℓ(λ) ≤ N` and `t ≥ λ_1`.
    pub fn complement(&self, n: usize, t: usize) -> Result<Partition> {
        if self.length() > n || self.first() > t {
            return Err(Error::Domain(format!(
                "complement needs ℓ(λ) ≤ N and t ≥ λ_1 (λ = {self}, N = {n}, t = {t})"
            )));
        }
        Ok(Partition::from_unsorted((0..n).map(|i| t - self.part(i)).collect()))
    }

    /// `n(λ) = Σ (i−1) λ_i`.
    pub fn n_statistic(&self) -> usize {
        self.parts.iter().enumerate().map(|(i, &p)| i * p).sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `3,1,1` (also accepts surrounding parentheses and `0` / empty for ∅).
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if t.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = t
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad partition part '{p}' in '{s}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(deserializer)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

/// Arm, leg, co-arm and co-leg of one box `s = (row, col)` (one-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoxStats {
    pub row: usize,
    pub col: usize,
    pub arm: usize,
    pub leg: usize,
    pub coarm: usize,
    pub coleg: usize,
}

impl BoxStats {
    /// Upper hook `l + α(1 + a)`.
    pub fn upper_hook(&self, alpha: &Rational) -> Rational {
        Rational::from(self.leg) + alpha * Rational::from(1 + self.arm)
    }

    /// Lower hook `l + 1 + α a`.
    pub fn lower_hook(&self, alpha: &Rational) -> Rational {
        Rational::from(self.leg + 1) + alpha * Rational::from(self.arm)
    }
}

/// Every partition of `k` (optionally with at most `max_length` parts), in
/// descending lexicographic order.
pub fn partitions_of(k: usize, max_length: Option<usize>) -> Vec<Partition> {
    fn rec(
        remaining: usize,
        max_part: usize,
        slots: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Partition>,
    ) {
        if remaining == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=max_part.min(remaining)).rev() {
            cur.push(p);
            rec(remaining - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k, max_length.unwrap_or(usize::MAX), &mut Vec::new(), &mut out);
    out
}

/// Every partition contained in `lambda` (including ∅ and `lambda`), in
/// order of decreasing size and, within a size, descending lexicographic order.
pub fn subpartitions(lambda: &Partition) -> Vec<Partition> {
    fn rec(lambda: &Partition, i: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if i == lambda.length() {
            out.push(Partition::from_unsorted(cur.clone()));
            return;
        }
        let cap = if i == 0 { lambda.part(0) } else { cur[i - 1].min(lambda.part(i)) };
        for p in (0..=cap).rev() {
            cur.push(p);
            rec(lambda, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(lambda, 0, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| b.size().cmp(&a.size()).then_with(|| b.cmp(a)));
    out.dedup();
    out
}

/// Result of comparing two partitions in the dominance order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dominance {
    Less,
    Equal,
    Greater,
    Incomparable,
}

/// Partial-sum comparison of partitions of the same integer.
pub fn compare_dominance(lambda: &Partition, mu: &Partition) -> Result<Dominance> {
    if lambda.size() != mu.size() {
        return Err(Error::DegreeMismatch(lambda.size(), mu.size()));
    }
    let len = lambda.length().max(mu.length());
    let (mut sl, mut sm) = (0usize, 0usize);
    let (mut le, mut ge) = (true, true);
    for i in 0..len {
        sl += lambda.part(i);
        sm += mu.part(i);
        le &= sl <= sm;
        ge &= sl >= sm;
    }
    Ok(match (le, ge) {
        (true, true) => Dominance::Equal,
        (true, false) => Dominance::Less,
        (false, true) => Dominance::Greater,
        (false, false) => Dominance::Incomparable,
    })
}

/// `λ ⪯ μ` for partitions of equal size; false on size mismatch.
pub fn dominated_by(lambda: &Partition, mu: &Partition) -> bool {
    matches!(compare_dominance(lambda, mu), Ok(Dominance::Less | Dominance::Equal))
}

/// Lower hook product `c`, upper hook product `c′` and `j = c c′`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HookProducts {
    pub lower: Rational,
    pub upper: Rational,
    pub j: Rational,
}

fn check_alpha(alpha: &Rational) -> Result<()> {
    if alpha.is_positive() {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha must be positive (got {alpha})")))
    }
}

pub fn hook_products(lambda: &Partition, alpha: &Rational) -> Result<HookProducts> {
    check_alpha(alpha)?;
    let mut lower = Rational::one();
    let mut upper = Rational::one();
    for b in lambda.boxes() {
        lower *= b.lower_hook(alpha);
        upper *= b.upper_hook(alpha);
    }
    let j = &lower * &upper;
    Ok(HookProducts { lower, upper, j })
}

/// Generalized Pochhammer symbol `(t)^α_λ = ∏_{s∈λ} (t − l′(s)/α + a′(s))`.
pub fn gen_pochhammer(t: &Rational, alpha: &Rational, lambda: &Partition) -> Result<Rational> {
    check_alpha(alpha)?;
    let inv = alpha.recip();
    Ok(lambda
        .boxes()
        .map(|b| t - &inv * Rational::from(b.coleg) + Rational::from(b.coarm))
        .product())
}

/// `z_λ = ∏_j j^{r_j} r_j!`.
pub fn z_factor(lambda: &Partition) -> BigInt {
    lambda
        .multiplicities()
        .iter()
        .enumerate()
        .skip(1)
        .fold(BigInt::from(1), |acc, (j, &r)| acc * BigInt::from(j).pow(r as u32) * factorial(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn enumerates_in_descending_lex_order() {
        assert_eq!(partitions_of(3, None), vec![p("3"), p("2,1"), p("1,1,1")]);
        assert_eq!(partitions_of(0, None), vec![Partition::empty()]);
        assert_eq!(partitions_of(5, Some(2)), vec![p("5"), p("4,1"), p("3,2")]);
        let six = partitions_of(6, None);
        assert!(six.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn normalization_and_validation() {
        assert_eq!(Partition::new(vec![3, 1, 0, 0]).unwrap(), p("3,1"));
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0, 1]).is_err());
        assert_eq!(p("(2,1)").to_string(), "(2,1)");
        assert_eq!(p(""), Partition::empty());
    }

    #[test]
    fn dominance_examples() {
        assert_eq!(compare_dominance(&p("4,1,1"), &p("3,3")).unwrap(), Dominance::Incomparable);
        assert_eq!(compare_dominance(&p("1,1,1,1"), &p("2,2")).unwrap(), Dominance::Less);
        assert_eq!(compare_dominance(&p("3,3,2,1"), &p("3,3,1,1,1")).unwrap(), Dominance::Greater);
        assert!(p("3,3,2,1") > p("3,3,1,1,1"));
        assert!(compare_dominance(&p("2"), &p("1")).is_err());
    }

    #[test]
    fn figure_two_box() {
        let lam = p("6,5,3,2");
        let s = lam.boxes().find(|b| b.row == 2 && b.col == 2).unwrap();
        assert_eq!((s.arm, s.leg), (3, 2));
        assert_eq!(s.lower_hook(&Rational::one()), q("6"));
        assert_eq!(s.upper_hook(&Rational::one()), q("6"));
    }

    #[test]
    fn hook_product_examples() {
        let a = q("3/7");
        let h = hook_products(&p("1"), &a).unwrap();
        assert_eq!((h.lower, h.upper, h.j), (Rational::one(), a.clone(), a.clone()));
        let h2 = hook_products(&p("2"), &a).unwrap();
        assert_eq!(h2.j, Rational::from(2) * &a * &a * (Rational::one() + &a));
        assert!(hook_products(&p("1"), &Rational::zero()).is_err());
    }

    #[test]
    fn pochhammer_examples() {
        let a = q("2/5");
        let t = q("7/3");
        assert_eq!(gen_pochhammer(&t, &a, &p("4")).unwrap(), t.rising(4));
        assert_eq!(gen_pochhammer(&t, &a, &p("1,1")).unwrap(), &t * (&t - a.recip()));
        assert_eq!(gen_pochhammer(&t, &a, &Partition::empty()).unwrap(), Rational::one());
        // t = N/α kills any λ with N+1 rows
        let n = 3;
        let t = Rational::from(n) / &a;
        assert!(gen_pochhammer(&t, &a, &p("2,1,1,1")).unwrap().is_zero());
    }

    #[test]
    fn z_examples() {
        assert_eq!(z_factor(&p("5")), BigInt::from(5));
        assert_eq!(z_factor(&p("1,1,1,1")), BigInt::from(24));
        assert_eq!(z_factor(&p("2,1,1")), BigInt::from(4));
        assert_eq!(z_factor(&Partition::empty()), BigInt::from(1));
    }

    #[test]
    fn box_moves_and_complement() {
        let lam = p("2,1");
        assert_eq!(lam.add_box(0), Some(p("3,1")));
        assert_eq!(lam.add_box(1), Some(p("2,2")));
        assert_eq!(lam.add_box(2), Some(p("2,1,1")));
        assert_eq!(lam.add_box(3), None);
        assert_eq!(p("2,2").add_box(1), None);
        assert_eq!(lam.remove_box(0), Some(p("1,1")));
        assert_eq!(p("2,2").remove_box(0), None);
        assert_eq!(lam.complement(3, 2).unwrap(), p("2,1"));
        assert_eq!(lam.complement(3, 3).unwrap(), p("3,2,1"));
        assert!(lam.complement(1, 3).is_err());
    }

    #[test]
    fn subpartition_lattice() {
        let subs = subpartitions(&p("2,1"));
        assert_eq!(subs, vec![p("2,1"), p("2"), p("1,1"), p("1"), Partition::empty()]);
    }
}
