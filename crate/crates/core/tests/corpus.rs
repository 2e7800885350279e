//! Example corpus against the checked-in golden reports.
//!
//! `MOTGRAPH_BLESS=1 cargo test --test corpus` rewrites the goldens.

use std::path::PathBuf;

use motgraph::corpus::{names, verify_example};
use motgraph::Budget;

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus/golden").join(format!("{name}.json"))
}

#[test]
fn reports_match_goldens() {
    let bless = std::env::var_os("MOTGRAPH_BLESS").is_some();
    for name in names() {
        let report = verify_example(name, 6, &Budget::default()).unwrap();
        let text = serde_json::to_string_pretty(&report).unwrap() + "\n";
        let path = golden_path(name);
        if bless {
            std::fs::write(&path, &text).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {}", path.display()));
        assert_eq!(text, want, "{name} differs from its golden report");
    }
}

#[test]
fn verdicts() {
    let b = Budget::default();
    for name in ["herbert4", "slashedbox-5", "necklace-4"] {
        let r = verify_example(name, 6, &b).unwrap();
        assert!(r.passed(), "{name}: {r:?}");
        assert!(r.as_listed(), "{name} needs no sign change");
    }
    // two summands have a vertex with no incoming edge; with a sign flip on the
    // last two summands the sum still lifts
    let r = verify_example("slashedbox-6", 6, &b).unwrap();
    assert!(!r.admissible && r.completely_decomposable);
    assert_eq!(r.signs, [1, 1, 1, 1, -1, -1]);
    // no sign pattern closes the drawn variant: nine connected boundary terms
    // against six summands, several of them private to one summand
    let r = verify_example("herbert4-variant", 6, &b).unwrap();
    assert!(r.admissible && !r.completely_decomposable);
    // four summands vanish (odd automorphism through orientation reversal) and
    // the first two are equivalent, so every sign pattern gives 0 or 2·G
    let r = verify_example("sauron", 6, &b).unwrap();
    assert_eq!(r.sum.as_array().unwrap().len(), 1);
    assert!(!r.completely_decomposable);
}

#[test]
fn same_handle_counts() {
    for name in names() {
        let r = verify_example(name, 6, &Budget::default()).unwrap();
        assert!(r.same_handles(), "{name}: {:?}", r.handles);
    }
}
