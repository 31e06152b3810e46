use betajack::verify::{run_suite, Suite};

#[test]
fn all_suites_pass_at_defaults() {
    for s in Suite::ALL {
        let t = std::time::Instant::now();
        let r = run_suite(s, None, None).unwrap();
        let failures: Vec<_> = r.failures().collect();
        assert!(failures.is_empty(), "{s}: {failures:?}");
        eprintln!("{s}: {} cases in {:?}", r.cases.len(), t.elapsed());
    }
}
