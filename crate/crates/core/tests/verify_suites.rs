use weylball::verify::{run, Suite};

#[test]
fn every_suite_passes() {
    for report in run(Suite::All).unwrap() {
        for c in &report.checks {
            assert!(c.passed, "{}: {} ({})", report.suite, c.name, c.detail);
        }
    }
}

#[test]
fn suite_names_parse() {
    for name in Suite::NAMES {
        assert_eq!(name.parse::<Suite>().unwrap().as_str(), name);
    }
    assert!("bogus".parse::<Suite>().is_err());
}
