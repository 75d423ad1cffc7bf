use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DegreeRow {
    pub degree: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PageRow {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub dim: usize,
    pub boundary: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Assertion {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct NamedTable {
    pub name: String,
    pub rows: Vec<DegreeRow>,
}

/// Everything a job produces. Field order is fixed so that JSON output is
/// byte-for-byte reproducible.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Report {
    pub job: String,
    pub field: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trunc: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poly_trunc: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub validated: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<DegreeRow>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub extra_tables: Vec<NamedTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pages: Option<Vec<PageRow>>,
    pub assertions: Vec<Assertion>,
    pub passed: bool,
}

impl Report {
    pub fn new(job: &str, field: String) -> Self {
        Report {
            job: job.into(),
            field,
            trunc: None,
            poly_trunc: None,
            validated: Vec::new(),
            table: None,
            extra_tables: Vec::new(),
            pages: None,
            assertions: Vec::new(),
            passed: true,
        }
    }

    pub fn degrees(&mut self, first: usize, dims: &[usize]) {
        self.table = Some(rows(first, dims));
    }

    pub fn assert(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.passed &= pass;
        self.assertions.push(Assertion {
            name: name.into(),
            pass,
            detail: if pass { String::new() } else { detail.into() },
        });
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// The primary table (or the page dump) as TSV.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        if let Some(pages) = &self.pages {
            out.push_str("p\tq\tr\tdim\tboundary\n");
            for row in pages {
                let _ = writeln!(out, "{}\t{}\t{}\t{}\t{}", row.p, row.q, row.r, row.dim, row.boundary);
            }
        } else if let Some(table) = &self.table {
            out.push_str("degree\tdim\n");
            for row in table {
                let _ = writeln!(out, "{}\t{}", row.degree, row.dim);
            }
        }
        out
    }

    /// One line per assertion, for stderr in TSV mode.
    pub fn assertion_lines(&self) -> String {
        let mut out = String::new();
        for a in &self.assertions {
            let verdict = if a.pass { "PASS" } else { "FAIL" };
            if a.detail.is_empty() {
                let _ = writeln!(out, "{verdict} {}", a.name);
            } else {
                let _ = writeln!(out, "{verdict} {}: {}", a.name, a.detail);
            }
        }
        out
    }
}

pub fn rows(first: usize, dims: &[usize]) -> Vec<DegreeRow> {
    dims.iter()
        .enumerate()
        .map(|(i, &dim)| DegreeRow { degree: first + i, dim })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_failing_assertion_fails_the_report() {
        let mut r = Report::new("check", "Q".into());
        r.assert("a", true, "ignored");
        assert!(r.passed && r.assertions[0].detail.is_empty());
        r.assert("b", false, "why");
        r.assert("c", true, "");
        assert!(!r.passed);
        assert_eq!(r.assertion_lines(), "PASS a\nFAIL b: why\nPASS c\n");
    }

    #[test]
    fn tsv_prefers_pages() {
        let mut r = Report::new("x", "Q".into());
        r.degrees(2, &[1, 0]);
        assert_eq!(r.to_tsv(), "degree\tdim\n2\t1\n3\t0\n");
        r.pages = Some(vec![PageRow { p: 0, q: 1, r: 2, dim: 3, boundary: true }]);
        assert_eq!(r.to_tsv(), "p\tq\tr\tdim\tboundary\n0\t1\t2\t3\ttrue\n");
    }
}
