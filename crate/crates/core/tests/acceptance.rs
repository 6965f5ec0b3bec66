//! One line per acceptance criterion. Run with `--nocapture` to see them.

use rectsurf::acceptance;
use rectsurf::tolerances::Tolerances;

#[test]
fn acceptance_criteria() {
    let results = acceptance::run(&Tolerances::default());
    for r in &results {
        println!("{}", r.line());
    }
    let ids: Vec<&str> = results.iter().map(|r| r.id.as_str()).collect();
    for k in 1..=12 {
        assert!(ids.iter().any(|id| id.trim_end_matches(char::is_alphabetic) == k.to_string()), "criterion {k} missing");
    }
    let unexpected: Vec<String> = results.iter().filter(|r| !r.ok()).map(|r| r.line()).collect();
    assert!(unexpected.is_empty(), "{unexpected:#?}");
}
