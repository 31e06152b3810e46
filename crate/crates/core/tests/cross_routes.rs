use betajack::ensembles::{negative_moment, EnsembleSpec};
use betajack::mvop::{
    hermite_at_zero, jacobi_at_zero, jacobi_expectation_via_v, jacobi_shifts, jacobi_v_coeffs, laguerre_coeffs, laguerre_shift,
    HermiteRoute,
};
use betajack::partition::{gen_pochhammer, partitions_of};
use betajack::rational::sign;
use betajack::Rational;

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

#[test]
fn hermite_routes_agree() {
    for a in ["1/2", "1", "2"] {
        let a = q(a);
        for k in 1..=6 {
            for lam in partitions_of(k, None) {
                for n in [k, k + 2] {
                    let ok = hermite_at_zero(&lam, &a, n, HermiteRoute::Okounkov).unwrap();
                    let rec = hermite_at_zero(&lam, &a, n, HermiteRoute::Recurrence).unwrap();
                    assert_eq!(ok, rec, "lambda {lam} alpha {a} N {n}");
                }
            }
        }
    }
}

#[test]
fn jacobi_v_route_matches_closed_form() {
    for a in ["1/2", "2"] {
        let a = q(a);
        for (g1, g2) in [("0", "1/2"), ("1", "1/3")] {
            let (g1, g2) = (q(g1), q(g2));
            for k in 1..=5 {
                for n in [2usize, 3] {
                    for lam in partitions_of(k, Some(n)) {
                        let closed = jacobi_at_zero(&lam, &a, &g1, &g2, n).unwrap();
                        let via_v = jacobi_expectation_via_v(&lam, &a, &g1, &g2, n).unwrap();
                        assert_eq!(closed, via_v, "lambda {lam} alpha {a} N {n}");
                    }
                }
            }
        }
    }
}

#[test]
fn jacobi_v_orthogonal_to_constants() {
    let a = q("3/2");
    let (g1, g2) = (q("1/2"), q("2"));
    for n in [2usize, 4] {
        let (_, b) = jacobi_shifts(&a, &g1, &g2, n);
        for k in 1..=5 {
            for lam in partitions_of(k, Some(n)) {
                let v = jacobi_v_coeffs(&lam, &a, &g1, &g2, n).unwrap();
                let s: Rational = v
                    .coeffs
                    .iter()
                    .map(|(sig, c)| sign(sig.size()) * c / gen_pochhammer(&b, &a, sig).unwrap())
                    .sum();
                assert!(s.is_zero(), "lambda {lam}");
            }
        }
    }
}

#[test]
fn laguerre_polynomials_orthogonal_to_constants() {
    let a = q("2/3");
    for k in 1..=5 {
        for lam in partitions_of(k, Some(3)) {
            let c = laguerre_coeffs(&lam, &a, &q("1/2"), 3).unwrap();
            let top = c.get(&betajack::Partition::empty());
            // E{C_σ}/C_σ(1) = (γ + 1 + (N−1)/α)_σ, so E{L_λ} = 0 reads:
            let shift = laguerre_shift(&a, &q("1/2"), 3);
            let s: Rational =
                c.coeffs.iter().map(|(sig, v)| v * gen_pochhammer(&shift, &a, sig).unwrap()).sum();
            assert!(!top.is_zero());
            assert!(s.is_zero(), "lambda {lam}");
        }
    }
}

#[test]
fn negative_moments_t_independent() {
    for n in 1..=4 {
        for k in 1..=3 {
            let spec = EnsembleSpec::laguerre(n, q("2"), q("11/2")).unwrap();
            let a = negative_moment(k, &spec, Some(k)).unwrap().value;
            let b = negative_moment(k, &spec, Some(k + 1)).unwrap().value;
            assert_eq!(a, b);
            let spec = EnsembleSpec::jacobi(n, q("1/2"), q("9/2"), q("1")).unwrap();
            let a = negative_moment(k, &spec, Some(k)).unwrap().value;
            let b = negative_moment(k, &spec, Some(k + 2)).unwrap().value;
            assert_eq!(a, b);
        }
    }
}
