//! Acceptance gate: one PASS/FAIL line per criterion. Runs without the test
//! harness so the lines appear in `cargo test` output.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use betajack::ensembles::{
    gaussian_secular_closed, joint_moment, moment, negative_moment, secular_mean, EnsembleSpec,
};
use betajack::jack::engine;
use betajack::mvop::{hermite_at_zero, HermiteRoute};
use betajack::partition::{hook_products, z_factor};
use betajack::sampler::{compare, SamplerConfig, Target};
use betajack::verify::{hermite_column_closed, jacobi_closed_form, laguerre_closed_form, run_suite, Suite};
use betajack::{Error, Partition, Rational};

mod common;

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn qs(v: &[&str]) -> Vec<Rational> {
    v.iter().map(|s| q(s)).collect()
}

/// Outcome of one criterion: failing items plus a short summary.
struct Outcome {
    checks: usize,
    failures: Vec<String>,
    note: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome { checks: 0, failures: Vec::new(), note: String::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn suite(&mut self, suite: Suite, k_max: usize, alphas: &[Rational]) {
        match run_suite(suite, Some(k_max), Some(alphas)) {
            Ok(r) => {
                for c in r.cases {
                    let name = format!("{suite}: {}", c.name);
                    let detail = c.detail.unwrap_or_default();
                    self.check(c.passed, || format!("{name}: {detail}"));
                }
            }
            Err(e) => self.check(false, || format!("{suite}: {e}")),
        }
    }
}

const GRID_ALPHAS: [&str; 4] = ["1/2", "1", "2", "5/2"];

fn laguerre_closed_form_moments() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    for n in 1..=6usize {
        for a in qs(&GRID_ALPHAS) {
            for g in qs(&["0", "1/3", "2"]) {
                let spec = EnsembleSpec::laguerre(n, a.clone(), g.clone()).unwrap();
                for (k, want) in laguerre_closed_form(n, &a, &g).iter().enumerate() {
                    let got = moment(k + 1, &spec).unwrap().value;
                    o.check(&got == want, || format!("{spec} M{}: {got} vs {want}", k + 1));
                }
            }
        }
    }
    let el = t.elapsed();
    o.check(el < Duration::from_secs(10), || format!("took {el:?}"));
    o
}

fn jacobi_closed_form_moments() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    let gs = qs(&["0", "1/2", "1"]);
    for n in 1..=6usize {
        for a in qs(&GRID_ALPHAS) {
            for g1 in &gs {
                for g2 in &gs {
                    let spec = EnsembleSpec::jacobi(n, a.clone(), g1.clone(), g2.clone()).unwrap();
                    match jacobi_closed_form(n, &a, g1, g2) {
                        Ok(closed) => {
                            for (k, want) in closed.iter().enumerate() {
                                let got = moment(k + 1, &spec).unwrap().value;
                                o.check(&got == want, || format!("{spec} M{}: {got} vs {want}", k + 1));
                            }
                        }
                        Err(e) => o.check(false, || format!("{spec}: {e}")),
                    }
                }
            }
        }
    }
    let el = t.elapsed();
    o.check(el < Duration::from_secs(10), || format!("took {el:?}"));
    o
}

fn gaussian_structure() -> Outcome {
    let mut o = Outcome::new();
    for a in qs(&GRID_ALPHAS) {
        for n in 1..=6usize {
            let spec = EnsembleSpec::gaussian(n, a.clone()).unwrap();
            for k in (1..=9).step_by(2) {
                let v = moment(k, &spec).unwrap().value;
                o.check(v.is_zero(), || format!("{spec} M{k} = {v}"));
            }
        }
        for k in 1..=8usize {
            for n in [k, k + 1, k + 3] {
                let want = hermite_column_closed(k, &a, n);
                for route in [HermiteRoute::Okounkov, HermiteRoute::Recurrence] {
                    let got = hermite_at_zero(&Partition::column(k), &a, n, route).unwrap();
                    o.check(got == want, || format!("alpha={a} N={n} H_(1^{k})(0) {route:?}: {got} vs {want}"));
                }
            }
        }
    }
    o
}

fn transfer_suite() -> Outcome {
    let mut o = Outcome::new();
    o.suite(Suite::Transfer, 7, &qs(&["1/3", "1", "2", "7/2"]));
    let one = Rational::one();
    let e = engine(&one).unwrap();
    for k in 1..=5 {
        let theta = e.theta_table(k).unwrap();
        for lam in theta.partitions() {
            let h = hook_products(lam, &one).unwrap().lower;
            for mu in theta.partitions() {
                let chi = theta.get(lam, mu) * Rational::from_bigint(z_factor(mu)) / &h;
                let want = common::mn_character(lam.parts(), mu.parts());
                o.check(chi == Rational::from(want), || format!("chi^{lam}({mu}) = {chi}, want {want}"));
            }
        }
    }
    o
}

fn jack_engine_suite() -> Outcome {
    let mut o = Outcome::new();
    let alphas = qs(&["1/3", "1", "2", "7/2"]);
    o.suite(Suite::Normalization, 7, &alphas);
    o.suite(Suite::Eigen, 6, &alphas);
    o.suite(Suite::Orthogonality, 6, &alphas);
    o
}

fn epsilon_suite() -> Outcome {
    let mut o = Outcome::new();
    o.suite(Suite::Epsilon, 6, &qs(&["1/3", "1", "2", "7/2"]));
    o
}

fn negative_moments() -> Outcome {
    let mut o = Outcome::new();
    for a in qs(&["1/2", "2"]) {
        for n in 1..=4usize {
            for k in 1..=3usize {
                let specs = [
                    EnsembleSpec::laguerre(n, a.clone(), q("11/2")).unwrap(),
                    EnsembleSpec::laguerre(n, a.clone(), q("4")).unwrap(),
                    EnsembleSpec::jacobi(n, a.clone(), q("9/2"), q("1")).unwrap(),
                    EnsembleSpec::jacobi(n, a.clone(), q("7/3"), q("0")).unwrap(),
                ];
                for spec in specs {
                    let x = negative_moment(k, &spec, Some(k)).map(|r| r.value);
                    let y = negative_moment(k, &spec, Some(k + 1)).map(|r| r.value);
                    o.check(matches!((&x, &y), (Ok(x), Ok(y)) if x == y), || format!("{spec} k={k}: {x:?} vs {y:?}"));
                }
            }
        }
        // One variable: Γ(γ+1−k)/Γ(γ+1) and B(γ1+1−k, γ2+1)/B(γ1+1, γ2+1).
        let (g, g2) = (q("17/4"), q("2/3"));
        for k in 1..=3usize {
            let low = &g + Rational::one() - Rational::from(k);
            let spec = EnsembleSpec::laguerre(1, a.clone(), g.clone()).unwrap();
            let got = negative_moment(k, &spec, None).unwrap().value;
            o.check(got == low.rising(k).recip(), || format!("{spec} k={k}: {got}"));
            let spec = EnsembleSpec::jacobi(1, a.clone(), g.clone(), g2.clone()).unwrap();
            let got = negative_moment(k, &spec, None).unwrap().value;
            let want = (&low + &g2 + Rational::one()).rising(k) / low.rising(k);
            o.check(got == want, || format!("{spec} k={k}: {got} vs {want}"));
        }
    }
    let spec = EnsembleSpec::laguerre(3, q("1"), q("1")).unwrap();
    let err = negative_moment(2, &spec, None);
    o.check(
        matches!(&err, Err(Error::Domain(m)) if m.contains("gamma must exceed k-1 for negative moments")),
        || format!("gamma = k-1 gave {err:?}"),
    );
    let spec = EnsembleSpec::jacobi(3, q("1"), q("1/2"), q("1")).unwrap();
    let err = negative_moment(2, &spec, None);
    o.check(matches!(err, Err(Error::Domain(_))), || format!("gamma1 < k-1 gave {err:?}"));
    o
}

fn secular_means() -> Outcome {
    let mut o = Outcome::new();
    for a in qs(&GRID_ALPHAS) {
        for n in 1..=6usize {
            let spec = EnsembleSpec::gaussian(n, a.clone()).unwrap();
            for k in 0..=n {
                let got = secular_mean(k, &spec).unwrap().value;
                let want = if k == 0 { Rational::one() } else { gaussian_secular_closed(k, n, &a) };
                o.check(got == want, || format!("{spec} Sc{k}: {got} vs {want}"));
            }
        }
        // Sc_2 = (p_1² − p_2)/2.
        for n in 2..=5usize {
            for spec in [
                EnsembleSpec::gaussian(n, a.clone()).unwrap(),
                EnsembleSpec::laguerre(n, a.clone(), q("1/3")).unwrap(),
                EnsembleSpec::jacobi(n, a.clone(), q("1/2"), q("1")).unwrap(),
            ] {
                let sc2 = secular_mean(2, &spec).unwrap().value;
                let p11 = joint_moment(&q_part("1,1"), &spec).unwrap().value;
                let m2 = moment(2, &spec).unwrap().value;
                let bridge = (p11 - m2) / Rational::from(2);
                o.check(sc2 == bridge, || format!("{spec}: Sc2 {sc2} vs bridge {bridge}"));
            }
        }
    }
    o
}

fn q_part(s: &str) -> Partition {
    s.parse().unwrap()
}

fn monte_carlo() -> Outcome {
    let mut o = Outcome::new();
    let targets = Target::parse_list("m1,m2,m3,m4,sc2,tr2").unwrap();
    let cfg = |seed| SamplerConfig {
        chains: 2,
        steps_per_chain: 500_000,
        burn_in: 5_000,
        thinning: 1,
        master_seed: seed,
        ..Default::default()
    };
    let mut worst: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    let mut seed = 1000;
    let mut run = |spec: EnsembleSpec, targets: &[Target], o: &mut Outcome| {
        seed += 1;
        let t = Instant::now();
        match compare(&spec, targets, &cfg(seed)) {
            Ok(r) => {
                for row in &r.rows {
                    worst = worst.max(row.z.abs());
                    o.check(!row.flagged, || {
                        format!("{spec} {}: exact {} estimate {:.6} se {:.2e} z {:.2}", row.target, row.exact_float, row.estimate, row.std_error, row.z)
                    });
                }
                o.check(!r.acceptance_flagged, || format!("{spec}: acceptance {:?}", r.acceptance));
            }
            Err(e) => o.check(false, || format!("{spec}: {e}")),
        }
        slowest = slowest.max(t.elapsed());
    };
    for (n, beta) in [(4usize, "1"), (4, "2"), (5, "4"), (4, "3")] {
        let a = q("2") / q(beta);
        run(EnsembleSpec::gaussian(n, a.clone()).unwrap(), &targets, &mut o);
        run(EnsembleSpec::laguerre(n, a.clone(), q("1")).unwrap(), &targets, &mut o);
        run(EnsembleSpec::jacobi(n, a.clone(), q("1/2"), q("1")).unwrap(), &targets, &mut o);
    }
    // Beyond k = N.
    let high = Target::parse_list("m4,m5").unwrap();
    run(EnsembleSpec::gaussian(3, q("1")).unwrap(), &high, &mut o);
    run(EnsembleSpec::laguerre(3, q("1"), q("1")).unwrap(), &high, &mut o);
    run(EnsembleSpec::jacobi(3, q("1"), q("1/2"), q("1")).unwrap(), &high, &mut o);

    // Bit-reproducibility of a full report.
    let spec = EnsembleSpec::laguerre(4, q("1"), q("1")).unwrap();
    let small = SamplerConfig { steps_per_chain: 20_000, ..cfg(7) };
    let a = compare(&spec, &targets, &small).unwrap();
    let b = compare(&spec, &targets, &small).unwrap();
    o.check(a == b, || "repeated run differs".into());
    o.note = format!("max |z| {worst:.2}, slowest configuration {slowest:.2?}");
    o
}

fn cross_routes() -> Outcome {
    let mut o = Outcome::new();
    let alphas = qs(&["1/2", "2"]);
    o.suite(Suite::HermiteRoutes, 6, &alphas);
    o.suite(Suite::JacobiRoutes, 6, &alphas);
    o
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("laguerre closed-form moments M1..M3 on the full grid", laguerre_closed_form_moments),
        ("jacobi closed-form moments M1, M2 on the full grid", jacobi_closed_form_moments),
        ("gaussian odd moments vanish; H_(1^k)(0) closed form, both routes", gaussian_structure),
        ("transfer matrices, closed rows, alpha=1 characters", transfer_suite),
        ("jack normalization, eigenfunction, orthogonality", jack_engine_suite),
        ("epsilon_Y product and alternating sums", epsilon_suite),
        ("negative moments: t-independence, one variable, domain error", negative_moments),
        ("secular means and the Sc2 bridge", secular_means),
        ("monte carlo concordance", monte_carlo),
        ("cross-route agreement (hermite, jacobi)", cross_routes),
    ];
    let mut all = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f();
        let ok = o.failures.is_empty();
        all &= ok;
        let note = if o.note.is_empty() { String::new() } else { format!("; {}", o.note) };
        println!(
            "[{}] criterion {}: {name} ({} checks, {:.2?}{note})",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            o.checks,
            t.elapsed()
        );
        for f in o.failures.iter().take(10) {
            println!("       {f}");
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
