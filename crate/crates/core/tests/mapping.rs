//! The claims table in `docs/claims.md` agrees with the sources.

use std::collections::BTreeSet;
use std::path::PathBuf;

use bnet::mapping::{check_mapping, collect_claim_tags, parse_table};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// Names of every `fn` in the crate's sources and tests.
fn function_names() -> BTreeSet<String> {
    let mut names = BTreeSet::new();
    let mut stack = vec![root().join("src"), root().join("tests")];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else if p.extension().is_some_and(|x| x == "rs") {
                let text = std::fs::read_to_string(&p).unwrap();
                for part in text.split("fn ").skip(1) {
                    let name: String = part
                        .chars()
                        .take_while(|c| c.is_alphanumeric() || *c == '_')
                        .collect();
                    names.insert(name);
                }
            }
        }
    }
    names
}

#[test]
fn claims_table_matches_sources() {
    let text = std::fs::read_to_string(root().join("../../docs/claims.md")).unwrap();
    let rows = parse_table(&text).unwrap();
    let tags = collect_claim_tags(&root().join("src")).unwrap();
    for (id, files) in &tags {
        assert_eq!(
            files.len(),
            1,
            "claim {id} is annotated more than once: {files:?}"
        );
    }
    let report = check_mapping(&rows, tags.keys().map(String::as_str));
    assert!(report.ok(), "{report:#?}");

    let fns = function_names();
    for r in rows.iter().filter(|r| r.status != "out-of-scope") {
        assert!(
            fns.contains(&r.operation),
            "{}: no fn {}",
            r.claim,
            r.operation
        );
        assert!(
            r.test == "acceptance" || fns.contains(&r.test),
            "{}: no test {}",
            r.claim,
            r.test
        );
    }
}
