//! Consistency of the claims table in `docs/claims.md` with the
//! `// claim: <id>` annotations in the sources.
//!
//! The table is a markdown table with the columns
//! `claim | description | operation | test | criterion | status`.
//! Rows with status `out-of-scope` have no annotation in the sources.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub const STATUSES: [&str; 3] = [
    "verified-deterministic",
    "verified-statistical",
    "out-of-scope",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingRow {
    pub claim: String,
    pub description: String,
    pub operation: String,
    pub test: String,
    pub criterion: String,
    pub status: String,
}

/// Parse the table rows. The header and separator lines are skipped, as is
/// everything outside the table.
pub fn parse_table(text: &str) -> Result<Vec<MappingRow>> {
    let mut rows = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| l.starts_with('|')) {
        let cells: Vec<&str> = line.trim_matches('|').split('|').map(str::trim).collect();
        if cells
            .iter()
            .all(|c| c.chars().all(|ch| ch == '-' || ch == ':'))
            || cells[0] == "claim"
        {
            continue;
        }
        if cells.len() != 6 {
            return Err(Error::Degenerate(format!(
                "table row needs 6 cells: {line}"
            )));
        }
        let strip = |s: &str| s.trim_matches('`').to_string();
        rows.push(MappingRow {
            claim: strip(cells[0]),
            description: cells[1].to_string(),
            operation: strip(cells[2]),
            test: strip(cells[3]),
            criterion: cells[4].to_string(),
            status: cells[5].to_string(),
        });
    }
    Ok(rows)
}

/// Every `// claim: <id>` annotation in the `.rs` files under `dir`, with the
/// file it came from.
pub fn collect_claim_tags(dir: &Path) -> Result<BTreeMap<String, Vec<String>>> {
    let mut tags: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        let mut entries: Vec<_> = fs::read_dir(&d)?.collect::<std::io::Result<_>>()?;
        entries.sort_by_key(|e| e.path());
        for e in entries {
            let p = e.path();
            if p.is_dir() {
                stack.push(p);
            } else if p.extension().is_some_and(|x| x == "rs") {
                for line in fs::read_to_string(&p)?.lines() {
                    if let Some(id) = line.trim().strip_prefix("// claim: ") {
                        tags.entry(id.trim().to_string())
                            .or_default()
                            .push(p.display().to_string());
                    }
                }
            }
        }
    }
    Ok(tags)
}

/// Differences between the table and the annotations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MappingReport {
    /// Annotated in the sources but absent from the table.
    pub missing: Vec<String>,
    /// In the table (and not out of scope) but never annotated.
    pub extra: Vec<String>,
    /// Listed more than once in the table.
    pub duplicated: Vec<String>,
    /// Rows with an unknown status.
    pub bad_status: Vec<String>,
}

impl MappingReport {
    pub fn ok(&self) -> bool {
        self.missing.is_empty()
            && self.extra.is_empty()
            && self.duplicated.is_empty()
            && self.bad_status.is_empty()
    }
}

pub fn check_mapping<'a>(
    rows: &[MappingRow],
    tags: impl IntoIterator<Item = &'a str>,
) -> MappingReport {
    let tags: BTreeSet<&str> = tags.into_iter().collect();
    let mut seen = BTreeSet::new();
    let mut r = MappingReport::default();
    for row in rows {
        if !seen.insert(row.claim.as_str()) {
            r.duplicated.push(row.claim.clone());
        }
        if !STATUSES.contains(&row.status.as_str()) {
            r.bad_status.push(row.claim.clone());
        }
        if row.status != "out-of-scope" && !tags.contains(row.claim.as_str()) {
            r.extra.push(row.claim.clone());
        }
    }
    r.missing = tags
        .iter()
        .filter(|t| !seen.contains(*t))
        .map(|t| t.to_string())
        .collect();
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE: &str = "\
| claim | description | operation | test | criterion | status |
|---|---|---|---|---|---|
| `a` | first | `f` | `t_a` | 1 | verified-statistical |
| `b` | second | `g` | `t_b` | - | verified-deterministic |
| `c` | not simulated | - | - | 11 | out-of-scope |
";

    #[test]
    fn agreeing_table() {
        let rows = parse_table(TABLE).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].operation, "f");
        assert!(check_mapping(&rows, ["a", "b"]).ok());
    }

    #[test]
    fn deleted_row_is_missing() {
        let rows = parse_table(TABLE).unwrap();
        let r = check_mapping(&rows[1..], ["a", "b"]);
        assert_eq!(r.missing, vec!["a"]);
        assert!(!r.ok());
    }

    #[test]
    fn unreferenced_row_is_extra() {
        let rows = parse_table(TABLE).unwrap();
        let r = check_mapping(&rows, ["b"]);
        assert_eq!(r.extra, vec!["a"]);
    }

    #[test]
    fn duplicates_and_statuses() {
        let t = format!("{TABLE}| `a` | again | `f` | `t` | 1 | maybe |\n");
        let r = check_mapping(&parse_table(&t).unwrap(), ["a", "b"]);
        assert_eq!(r.duplicated, vec!["a"]);
        assert_eq!(r.bad_status, vec!["a"]);
        assert!(parse_table("| a | b |").is_err());
    }
}
