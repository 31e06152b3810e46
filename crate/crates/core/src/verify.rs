//! Invariant suites: each runs a family of exact identities and reports
//! pass/fail per case.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::ensembles::{moment, EnsembleSpec};
use crate::error::{Error, Result};
use crate::jack::operator::MultiPoly;
use crate::jack::{
    content_polynomial, engine, kappa_column_closed, kappa_k_closed, kappa_k_closed_rows, rho, theta_special_rows,
    Basis, SymPoly,
};
use crate::mvop::{hermite_at_zero, jacobi_at_zero, jacobi_expectation_via_v, HermiteRoute};
use crate::partition::{hook_products, partitions_of, Partition};
use crate::rational::{sign, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Normalization,
    Eigen,
    Orthogonality,
    HermiteRoutes,
    JacobiRoutes,
    ClosedMoments,
    Transfer,
    Epsilon,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Normalization,
        Suite::Eigen,
        Suite::Orthogonality,
        Suite::HermiteRoutes,
        Suite::JacobiRoutes,
        Suite::ClosedMoments,
        Suite::Transfer,
        Suite::Epsilon,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Normalization => "normalization",
            Suite::Eigen => "eigen",
            Suite::Orthogonality => "orthogonality",
            Suite::HermiteRoutes => "hermite-routes",
            Suite::JacobiRoutes => "jacobi-routes",
            Suite::ClosedMoments => "paper-moments",
            Suite::Transfer => "transfer",
            Suite::Epsilon => "epsilon",
        }
    }

    pub fn default_k_max(self) -> usize {
        match self {
            Suite::Normalization | Suite::Transfer => 7,
            Suite::ClosedMoments => 3,
            _ => 6,
        }
    }

    pub fn default_alphas(self) -> Vec<Rational> {
        let v: &[&str] = match self {
            Suite::HermiteRoutes | Suite::JacobiRoutes => &["1/2", "2"],
            Suite::ClosedMoments => &["1/2", "1", "2", "5/2"],
            _ => &["1/3", "1", "2", "7/2"],
        };
        v.iter().map(|s| s.parse().expect("literal rational")).collect()
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseResult {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub k_max: usize,
    pub alphas: Vec<Rational>,
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.passed)
    }
}

/// Collects failing items of one case.
struct Case {
    name: String,
    bad: Vec<String>,
}

impl Case {
    fn new(name: String) -> Self {
        Case { name, bad: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.bad.push(what());
        }
    }

    fn finish(self) -> CaseResult {
        let passed = self.bad.is_empty();
        CaseResult { name: self.name, passed, detail: (!passed).then(|| self.bad.join("; ")) }
    }
}

/// Runs `suite` up to degree `k_max` at each α (suite defaults when `None`).
pub fn run_suite(suite: Suite, k_max: Option<usize>, alphas: Option<&[Rational]>) -> Result<SuiteReport> {
    let k_max = k_max.unwrap_or(suite.default_k_max());
    let alphas = alphas.map(<[Rational]>::to_vec).unwrap_or_else(|| suite.default_alphas());
    if let Some(a) = alphas.iter().find(|a| !a.is_positive()) {
        return Err(Error::Domain(format!("alpha must be positive (got {a})")));
    }
    let mut cases = Vec::new();
    for a in &alphas {
        let per_alpha = match suite {
            Suite::Normalization => normalization(a, k_max)?,
            Suite::Eigen => eigen(a, k_max)?,
            Suite::Orthogonality => orthogonality(a, k_max)?,
            Suite::HermiteRoutes => hermite_routes(a, k_max)?,
            Suite::JacobiRoutes => jacobi_routes(a, k_max)?,
            Suite::ClosedMoments => closed_moments(a)?,
            Suite::Transfer => transfer(a, k_max)?,
            Suite::Epsilon => epsilon(a, k_max)?,
        };
        cases.extend(per_alpha);
    }
    Ok(SuiteReport { suite, k_max, alphas, cases })
}

fn normalization(a: &Rational, k_max: usize) -> Result<Vec<CaseResult>> {
    let e = engine(a)?;
    let mut out = Vec::new();
    for k in 1..=k_max {
        let mut case = Case::new(format!("alpha={a} k={k}: sum of C_lambda = p_1^k"));
        let mut sum = SymPoly::zero(k, Basis::PowerSum, Some(a.clone()));
        for lam in partitions_of(k, None) {
            sum = sum.add(&e.convert(&e.jack_element(&lam, Basis::JackC), Basis::PowerSum)?)?;
        }
        let want = SymPoly::basis_element(&Partition::column(k), Basis::PowerSum, Some(a.clone()));
        case.check(sum == want, || format!("got {sum}"));
        for n in 1..=4usize {
            let total: Rational = partitions_of(k, Some(n)).iter().map(|l| e.eval_ones(l, n)).sum::<Result<_>>()?;
            case.check(total == Rational::from(n).pow(k as i32), || format!("N={n}: sum of C(1^N) = {total}"));
        }
        out.push(case.finish());
    }
    Ok(out)
}

fn eigen(a: &Rational, k_max: usize) -> Result<Vec<CaseResult>> {
    let e = engine(a)?;
    let mut out = Vec::new();
    for k in 1..=k_max {
        let mut case = Case::new(format!("alpha={a} k={k}: P_lambda is an eigenfunction"));
        for lam in partitions_of(k, None) {
            let n = lam.length() + 1;
            let p = MultiPoly::from_symmetric(&e.jack_p(&lam)?, n)?;
            let ev = rho(&lam, a) + Rational::from(2) / a * Rational::from(k * (n - 1));
            let lhs = p.laplace_beltrami(a)?;
            case.check(lhs == p.scaled(&ev), || format!("lambda={lam} N={n}"));
        }
        out.push(case.finish());
    }
    Ok(out)
}

fn orthogonality(a: &Rational, k_max: usize) -> Result<Vec<CaseResult>> {
    let e = engine(a)?;
    let mut out = Vec::new();
    for k in 1..=k_max {
        let mut case = Case::new(format!("alpha={a} k={k}: <P,P> diagonal, <J,J> = j"));
        let parts = partitions_of(k, None);
        let ps: Vec<SymPoly> = parts.iter().map(|l| e.jack_element(l, Basis::JackP)).collect();
        for (i, li) in parts.iter().enumerate() {
            for (j, lj) in parts.iter().enumerate().skip(i + 1) {
                let s = e.scalar_product(&ps[i], &ps[j])?;
                case.check(s.is_zero(), || format!("<P_{li}, P_{lj}> = {s}"));
            }
            let jl = e.jack_element(li, Basis::JackJ);
            let norm = e.scalar_product(&jl, &jl)?;
            let want = hook_products(li, a)?.j;
            case.check(norm == want, || format!("<J_{li}, J_{li}> = {norm}, want {want}"));
        }
        out.push(case.finish());
    }
    Ok(out)
}

/// `H_{(1^k)}(0) = α^{k/2} k! (k−1)!! / (α)_k · binom(N, k)` for even `k`.
pub fn hermite_column_closed(k: usize, a: &Rational, n: usize) -> Rational {
    if k % 2 == 1 || k > n {
        return Rational::zero();
    }
    let df: Rational = (1..k).step_by(2).map(Rational::from).product();
    a.pow(k as i32 / 2) * crate::rational::factorial_q(k) * df / a.rising(k) * Rational::from(n).binomial(k)
}

fn hermite_routes(a: &Rational, k_max: usize) -> Result<Vec<CaseResult>> {
    let mut out = Vec::new();
    for k in 1..=k_max {
        let mut case = Case::new(format!("alpha={a} k={k}: okounkov = recurrence"));
        for n in [k, k + 2] {
            for lam in partitions_of(k, Some(n)) {
                let x = hermite_at_zero(&lam, a, n, HermiteRoute::Okounkov)?;
                let y = hermite_at_zero(&lam, a, n, HermiteRoute::Recurrence)?;
                case.check(x == y, || format!("lambda={lam} N={n}: {x} vs {y}"));
            }
            let col = Partition::column(k);
            let want = hermite_column_closed(k, a, n);
            let got = hermite_at_zero(&col, a, n, HermiteRoute::Okounkov)?;
            case.check(got == want, || format!("H_(1^{k})(0) at N={n}: {got}, want {want}"));
        }
        out.push(case.finish());
    }
    Ok(out)
}

fn jacobi_routes(a: &Rational, k_max: usize) -> Result<Vec<CaseResult>> {
    let half = Rational::new(1, 2);
    let mut out = Vec::new();
    for k in 1..=k_max {
        let mut case = Case::new(format!("alpha={a} k={k}: closed form = v recurrence"));
        for (g1, g2) in [(Rational::zero(), half.clone()), (Rational::one(), Rational::new(1, 3))] {
            for n in [2usize, 3] {
                for lam in partitions_of(k, Some(n)) {
                    let x = jacobi_at_zero(&lam, a, &g1, &g2, n)?;
                    let y = jacobi_expectation_via_v(&lam, a, &g1, &g2, n)?;
                    case.check(x == y, || format!("lambda={lam} N={n} g=({g1},{g2}): {x} vs {y}"));
                }
            }
        }
        out.push(case.finish());
    }
    Ok(out)
}

/// Closed-form Laguerre moments `M_1, M_2, M_3` as polynomials in `N, γ, 1/α`.
pub fn laguerre_closed_form(n: usize, a: &Rational, g: &Rational) -> [Rational; 3] {
    let n = Rational::from(n);
    let one = Rational::one();
    let r = |p: i64| Rational::from(p);
    let ia = a.recip();
    let ia2 = ia.pow(2);
    let ia3 = ia.pow(3);
    let g2 = g.pow(2);
    let g3 = g.pow(3);
    let m1 = &n * (g + &one - &ia) + n.pow(2) * &ia;
    let m2 = &n * (&g2 + r(3) * g - r(4) * &ia - r(3) * g * &ia + r(2) + r(2) * &ia2)
        + n.pow(2) * (r(3) * g * &ia - r(4) * &ia2 + r(4) * &ia)
        + r(2) * n.pow(3) * &ia2;
    let m3 = &n
        * (&g3 - r(6) * &ia3 + r(11) * g + r(11) * g * &ia2 + r(17) * &ia2 - r(17) * &ia
            + r(6)
            + r(6) * &g2
            - r(6) * &g2 * &ia
            - r(21) * g * &ia)
        + n.pow(2)
            * (r(21) * g * &ia + r(17) * &ia3 + r(6) * &g2 * &ia + r(17) * &ia - r(21) * g * &ia2 - r(33) * &ia2)
        + n.pow(3) * (r(16) * &ia2 - r(16) * &ia3 + r(10) * g * &ia2)
        + r(5) * n.pow(4) * &ia3;
    [m1, m2, m3]
}

/// Closed-form Jacobi moments `M_1, M_2`.
///
/// The factor `γ2α + γ1α + 2N − 3 + 2α` in the denominator of `M_2` can
/// vanish (e.g. `N = 1`, `α = 1/2`, `γ1 = γ2 = 0`) together with the
/// numerator; the value there is the limit in `γ2`.
pub fn jacobi_closed_form(n: usize, a: &Rational, g1: &Rational, g2: &Rational) -> Result<[Rational; 2]> {
    let n = Rational::from(n);
    let r = |p: i64| Rational::from(p);
    let s = g2 * a + g1 * a + r(2) * &n;
    let m1 = &n * (g1 * a + &n - r(1) + a) / (&s - r(2) + r(2) * a);
    let a2 = a.pow(2);
    let poly = g1.pow(2) * &a2 + r(4) * g1 * &a2 + g1 * &a2 * g2 + r(4) * &a2 + r(2) * g2 * &a2 + r(7) * &n * a
        + r(2) * &n * g2 * a
        + r(3) * g1 * a * &n
        - r(9) * a
        - r(4) * g1 * a
        - r(2) * g2 * a
        + r(4)
        - r(7) * &n
        + r(3) * n.pow(2);
    let front = &n * (g1 * a + &n - r(1) + a);
    let d1 = &s - r(3) + r(2) * a;
    let rest = (&s - r(2) + r(3) * a) * (&s - r(2) + r(2) * a);
    let m2 = if !d1.is_zero() {
        &front * &poly / (d1 * rest)
    } else if (&front * &poly).is_zero() {
        // d/dγ2 of numerator and denominator; `d1` is linear in γ2 with slope α.
        let dpoly = g1 * &a2 + r(2) * &a2 + r(2) * &n * a - r(2) * a;
        &front * dpoly / (a * rest)
    } else {
        return Err(Error::Domain("closed-form jacobi M2 has a pole at these parameters".into()));
    };
    Ok([m1, m2])
}

fn closed_moments(a: &Rational) -> Result<Vec<CaseResult>> {
    let grid: Vec<Rational> = ["0", "1/3", "2"].iter().map(|s| s.parse().expect("literal")).collect();
    let gj: Vec<Rational> = ["0", "1/2", "1"].iter().map(|s| s.parse().expect("literal")).collect();
    let mut lag = Case::new(format!("alpha={a}: laguerre M1..M3 match the closed-form polynomials"));
    let mut jac = Case::new(format!("alpha={a}: jacobi M1, M2 match the closed-form expressions"));
    for n in 1..=6usize {
        for g in &grid {
            let spec = EnsembleSpec::laguerre(n, a.clone(), g.clone())?;
            let closed = laguerre_closed_form(n, a, g);
            for (k, want) in closed.iter().enumerate() {
                let got = moment(k + 1, &spec)?.value;
                lag.check(&got == want, || format!("N={n} gamma={g} M{}: {got} vs {want}", k + 1));
            }
        }
        for g1 in &gj {
            for g2 in &gj {
                let spec = EnsembleSpec::jacobi(n, a.clone(), g1.clone(), g2.clone())?;
                let closed = jacobi_closed_form(n, a, g1, g2)?;
                for (k, want) in closed.iter().enumerate() {
                    let got = moment(k + 1, &spec)?.value;
                    jac.check(&got == want, || format!("N={n} gammas=({g1},{g2}) M{}: {got} vs {want}", k + 1));
                }
            }
        }
    }
    Ok(vec![lag.finish(), jac.finish()])
}

fn transfer(a: &Rational, k_max: usize) -> Result<Vec<CaseResult>> {
    let e = engine(a)?;
    let mut out = Vec::new();
    for k in 1..=k_max {
        let mut case = Case::new(format!("alpha={a} k={k}: theta/kappa tables and closed rows"));
        let theta = e.theta_table(k)?;
        let kappa = e.kappa_table(k)?;
        // Rows of θ and of κᵀ are dual bases: Σ_μ θ^λ_μ κ^ν_μ = δ_λν.
        let prod = theta.entries().mul(&kappa.entries().transpose());
        case.check(prod.is_identity(), || "theta * kappa^T is not the identity".into());
        let row_k = Partition::row(k);
        let col_k = Partition::column(k);
        let hook = (k >= 2).then(|| Partition::from_unsorted([vec![2], vec![1; k - 2]].concat()));
        for lam in theta.partitions() {
            let closed = kappa_k_closed(lam, a)?;
            case.check(kappa.get(lam, &row_k) == closed, || format!("kappa_(k) at {lam}"));
            case.check(kappa_k_closed_rows(lam, a)? == closed, || format!("two kappa_(k) forms differ at {lam}"));
            case.check(kappa.get(lam, &col_k) == kappa_column_closed(lam, a)?, || format!("kappa_(1^k) at {lam}"));
            let rows = theta_special_rows(lam, a)?;
            case.check(theta.get(lam, &row_k) == rows.row, || format!("theta_(k) at {lam}"));
            case.check(theta.get(lam, &col_k) == rows.column, || format!("theta_(1^k) at {lam}"));
            if let (Some(h), Some(want)) = (&hook, &rows.hook) {
                case.check(&theta.get(lam, h) == want, || format!("theta_(2,1^(k-2)) at {lam}"));
            }
        }
        out.push(case.finish());
    }
    Ok(out)
}

/// `e_j` of a multiset.
fn elementary_of(values: &[Rational], j: usize) -> Rational {
    let mut e = vec![Rational::zero(); j + 1];
    e[0] = Rational::one();
    for v in values {
        for i in (1..=j).rev() {
            let add = &e[i - 1] * v;
            e[i] += add;
        }
    }
    e[j].clone()
}

fn epsilon(a: &Rational, k_max: usize) -> Result<Vec<CaseResult>> {
    let e = engine(a)?;
    let mut out = Vec::new();
    for k in 1..=k_max {
        let mut case = Case::new(format!("alpha={a} k={k}: epsilon_Y(J) product and alternating sums"));
        let theta = e.theta_table(k)?;
        for lam in partitions_of(k, None) {
            let j = e.jack_element(&lam, Basis::JackJ);
            for y in 1..=k as i64 + 1 {
                let y = Rational::from(y);
                let got = e.epsilon_y(&j, &y)?;
                let want = content_polynomial(&lam, a, &y);
                case.check(got == want, || format!("epsilon_{y}(J_{lam}) = {got}, want {want}"));
            }
            let contents: Vec<Rational> =
                lam.boxes().map(|b| Rational::from(b.coleg) - a * Rational::from(b.coarm)).collect();
            for len in 1..=k {
                let sum: Rational =
                    theta.partitions().iter().filter(|m| m.length() == len).map(|m| theta.get(&lam, m)).sum();
                let want = sign(k - len) * elementary_of(&contents, k - len);
                case.check(sum == want, || format!("lambda={lam} length {len}: {sum} vs {want}"));
            }
        }
        out.push(case.finish());
    }
    Ok(out)
}
