use betajack::jack::{engine, Basis, SymPoly};
use betajack::partition::{compare_dominance, gen_pochhammer, hook_products, partitions_of, Dominance};
use betajack::sampler::Target;
use betajack::{Partition, Rational};
use proptest::prelude::*;

fn partition() -> impl Strategy<Value = Partition> {
    prop::collection::vec(1usize..7, 0..6).prop_map(Partition::from_unsorted)
}

fn rational() -> impl Strategy<Value = Rational> {
    (-10_000i64..10_000, 1i64..500).prop_map(|(p, q)| Rational::new(p, q))
}

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..40, 1i64..12).prop_map(|(p, q)| Rational::new(p, q))
}

proptest! {
    #[test]
    fn conjugation_is_an_involution(lam in partition()) {
        let c = lam.conjugate();
        prop_assert_eq!(c.size(), lam.size());
        prop_assert_eq!(c.length(), lam.first());
        prop_assert_eq!(c.conjugate(), lam);
    }

    #[test]
    fn dominance_reverses_under_conjugation(k in 1usize..9, i in 0usize..30, j in 0usize..30) {
        let ps = partitions_of(k, None);
        let (a, b) = (&ps[i % ps.len()], &ps[j % ps.len()]);
        let d = compare_dominance(a, b).unwrap();
        let dc = compare_dominance(&b.conjugate(), &a.conjugate()).unwrap();
        prop_assert_eq!(d, dc);
        if d == Dominance::Greater {
            prop_assert!(a > b, "dominance refines lexicographic order");
        }
    }

    #[test]
    fn complement_is_an_involution(lam in partition(), extra_n in 0usize..3, extra_t in 0usize..3) {
        let n = lam.length() + extra_n;
        let t = lam.first() + extra_t;
        let c = lam.complement(n, t).unwrap();
        prop_assert_eq!(c.size() + lam.size(), n * t);
        prop_assert_eq!(c.complement(n, t).unwrap(), lam);
    }

    #[test]
    fn hook_products_transpose(lam in partition(), a in positive_rational()) {
        // c_λ(α) = α^{|λ|} c′_{λ′}(1/α).
        let h = hook_products(&lam, &a).unwrap();
        let hc = hook_products(&lam.conjugate(), &a.recip()).unwrap();
        prop_assert_eq!(h.lower, a.pow(lam.size() as i32) * hc.upper);
    }

    #[test]
    fn pochhammer_is_a_product_over_rows(lam in partition(), t in rational(), a in positive_rational()) {
        let by_rows: Rational = lam
            .parts()
            .iter()
            .enumerate()
            .map(|(i, &p)| (&t - Rational::from(i) / &a).rising(p))
            .product();
        prop_assert_eq!(gen_pochhammer(&t, &a, &lam).unwrap(), by_rows);
    }

    #[test]
    fn rational_text_round_trip(r in rational()) {
        let s = r.to_string();
        prop_assert_eq!(s.parse::<Rational>().unwrap(), r.clone());
        let j = serde_json::to_string(&r).unwrap();
        prop_assert_eq!(serde_json::from_str::<Rational>(&j).unwrap(), r);
    }

    #[test]
    fn partition_text_round_trip(lam in partition()) {
        prop_assert_eq!(lam.to_string().parse::<Partition>().unwrap(), lam.clone());
        let j = serde_json::to_string(&lam).unwrap();
        prop_assert_eq!(serde_json::from_str::<Partition>(&j).unwrap(), lam);
    }

    #[test]
    fn target_text_round_trip(k in -4i64..9, mu in partition()) {
        let t = Target::Moment(k);
        prop_assert_eq!(t.to_string().parse::<Target>().unwrap(), t);
        if !mu.is_empty() {
            let t = Target::Joint(mu);
            prop_assert_eq!(t.to_string().parse::<Target>().unwrap(), t);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn basis_conversions_round_trip(
        k in 1usize..6,
        coeffs in prop::collection::vec(-20i64..20, 7),
        a in positive_rational(),
        from in 0usize..6,
        to in 0usize..6,
    ) {
        let bases = [Basis::Monomial, Basis::PowerSum, Basis::Elementary, Basis::JackP, Basis::JackJ, Basis::JackC];
        let e = engine(&a).unwrap();
        let ps = partitions_of(k, None);
        let alpha = bases[from].is_jack().then(|| a.clone());
        let f = SymPoly::from_terms(
            k,
            bases[from],
            alpha,
            ps.iter().cloned().zip(coeffs.iter().map(|&c| Rational::from(c))),
        )
        .unwrap();
        let g = e.convert(&f, bases[to]).unwrap();
        let back = e.convert(&g, bases[from]).unwrap();
        prop_assert_eq!(back, f.clone());
        let json = serde_json::to_string(&f.to_json()).unwrap();
        let parsed = SymPoly::from_json(&serde_json::from_str(&json).unwrap()).unwrap();
        prop_assert_eq!(parsed, f);
    }
}
