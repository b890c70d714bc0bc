use proptest::prelude::*;
use qrel_core::selftest::{suite, SuiteReport};

fn run(name: &str, seed: u64, cases: usize) -> SuiteReport {
    (suite(name).expect("known suite").run)(seed, cases)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn cheap_suites_hold_for_any_seed(seed in any::<u64>()) {
        for (name, cases) in [("classical", 20), ("lattice", 10), ("dagger-compact", 5), ("quantifier", 4), ("weaver", 5)] {
            let r = run(name, seed, cases);
            prop_assert!(r.passed(), "{r:#?}");
            prop_assert_eq!(r.cases, cases);
        }
    }
}

#[test]
fn structure_suites_hold() {
    for (name, cases) in [("equality", 1), ("correspondence", 2), ("games", 2), ("quantum-group", 1)] {
        let r = run(name, 11, cases);
        assert!(r.passed(), "{r:#?}");
        assert!(r.checks > 0);
    }
}

#[test]
fn suites_replay_from_the_seed() {
    let a = run("quantifier", 5, 3);
    let b = run("quantifier", 5, 3);
    assert_eq!((a.checks, a.failures, a.max_margin), (b.checks, b.failures, b.max_margin));
}
