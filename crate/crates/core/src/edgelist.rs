//! Plain-text edge-list format.
//!
//! ```text
//! # comment
//! p 4
//! e 0 1
//! e 2 3
//! ```
//!
//! The first non-comment line is `p <n>`; every following line is
//! `e <u> <v>` with `0 <= u < v < n`. Lines starting with `#` and blank
//! lines are ignored. Serialization writes edges in lexicographic order,
//! one per line, with a trailing newline.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse { line: line_no, message };
        let mut fields = line.split_whitespace();
        let tag = fields.next().unwrap_or_default();
        let nums: Vec<&str> = fields.collect();
        let parse_num = |s: &str| s.parse::<usize>().map_err(|_| err(format!("invalid integer {s:?}")));
        match (tag, n) {
            ("p", None) => {
                if nums.len() != 1 {
                    return Err(err("expected \"p <n>\"".into()));
                }
                n = Some(parse_num(nums[0])?);
            }
            ("p", Some(_)) => return Err(err("duplicate \"p\" line".into())),
            ("e", None) => return Err(err("edge before \"p <n>\" line".into())),
            ("e", Some(n)) => {
                if nums.len() != 2 {
                    return Err(err("expected \"e <u> <v>\"".into()));
                }
                let u = parse_num(nums[0])?;
                let v = parse_num(nums[1])?;
                if u == v {
                    return Err(err(format!("self-loop on vertex {u}")));
                }
                if u >= n || v >= n {
                    return Err(err(format!("vertex {} out of range for n = {n}", u.max(v))));
                }
                if u > v {
                    return Err(err(format!("edge endpoints must satisfy u < v, got {u} {v}")));
                }
                edges.push((u, v));
            }
            _ => return Err(err(format!("unrecognized line {line:?}"))),
        }
    }
    let n = n.ok_or(Error::Parse { line: 0, message: "missing \"p <n>\" line".into() })?;
    Graph::new(n, &edges)
}

pub fn serialize_graph(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "p {}", g.n()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}
