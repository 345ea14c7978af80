use std::time::Instant;

use morita_core::laws::{essential_equivalence, run_suite, LawConfig, Suite};

#[test]
fn full_suites_pass() {
    let config = LawConfig::default();
    for suite in Suite::ALL {
        let start = Instant::now();
        let outcome = run_suite(suite, &config);
        eprintln!("{outcome} in {:?}", start.elapsed());
        assert!(outcome.ok(), "{outcome}");
    }
}

#[test]
fn small_actions_alone_miss_non_faithful_functors() {
    let outcome = essential_equivalence(&LawConfig::default(), false);
    eprintln!("{outcome}");
    assert!(!outcome.ok());
}
