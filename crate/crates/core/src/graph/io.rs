//! Plain-text graph files.
//!
//! ```text
//! p is <num_vertices> <num_edges>
//! e <u> <v>          one per edge, 0-indexed, u < v, sorted
//! l <v> <L|R>        optional side labels
//! g <v> <group_id>   optional group ids
//! ```

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::Path;

use super::{Graph, Side};
use crate::error::{Error, Result};

pub fn to_text(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "p is {} {}", g.num_vertices(), g.num_edges()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    for (v, s) in g.sides().iter().enumerate() {
        if let Some(s) = s {
            writeln!(out, "l {v} {s}").unwrap();
        }
    }
    for (v, grp) in g.groups().iter().enumerate() {
        if let Some(grp) = grp {
            writeln!(out, "g {v} {grp}").unwrap();
        }
    }
    out
}

pub fn write_graph<W: Write>(g: &Graph, mut w: W) -> Result<()> {
    w.write_all(to_text(g).as_bytes())?;
    Ok(())
}

pub fn save(g: &Graph, path: &Path) -> Result<()> {
    std::fs::write(path, to_text(g))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<Graph> {
    read_graph(std::io::BufReader::new(std::fs::File::open(path)?))
}

pub fn from_text(text: &str) -> Result<Graph> {
    read_graph(text.as_bytes())
}

pub fn read_graph<R: BufRead>(r: R) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut sides = Vec::new();
    let mut groups = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let err = |msg: String| Error::Parse { line: lineno, msg };
        let tok: Vec<&str> = line.split_ascii_whitespace().collect();
        let Some(&tag) = tok.first() else { continue };
        let field = |i: usize, what: &str| -> Result<usize> {
            tok.get(i)
                .ok_or_else(|| err(format!("missing {what}")))?
                .parse::<usize>()
                .map_err(|e| err(format!("bad {what}: {e}")))
        };
        match (tag, header) {
            ("p", None) => {
                if tok.get(1) != Some(&"is") {
                    return Err(err("expected `p is <n> <m>`".into()));
                }
                header = Some((field(2, "vertex count")?, field(3, "edge count")?));
            }
            ("p", Some(_)) => return Err(err("duplicate header".into())),
            (_, None) => return Err(err("first line must be `p is <n> <m>`".into())),
            ("e", Some(_)) => edges.push((field(1, "endpoint")?, field(2, "endpoint")?)),
            ("l", Some((n, _))) => {
                let v = field(1, "vertex")?;
                if v >= n {
                    return Err(err("label vertex out of range".into()));
                }
                let s = match tok.get(2) {
                    Some(&"L") => Side::L,
                    Some(&"R") => Side::R,
                    _ => return Err(err("side must be L or R".into())),
                };
                sides.push((v, s));
            }
            ("g", Some((n, _))) => {
                let v = field(1, "vertex")?;
                if v >= n {
                    return Err(err("group vertex out of range".into()));
                }
                let id = u32::try_from(field(2, "group id")?)
                    .map_err(|_| err("group id too large".into()))?;
                groups.push((v, id));
            }
            _ => return Err(err(format!("unknown line tag `{tag}`"))),
        }
    }
    let (n, m) = header.ok_or(Error::Parse { line: 0, msg: "empty graph file".into() })?;
    if edges.len() != m {
        return Err(Error::Parse {
            line: 1,
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    let mut g = Graph::from_edges(n, edges)?;
    if !sides.is_empty() {
        let mut s = vec![None; n];
        for (v, side) in sides {
            s[v] = Some(side);
        }
        g = g.with_sides(s)?;
    }
    if !groups.is_empty() {
        let mut gr = vec![None; n];
        for (v, id) in groups {
            gr[v] = Some(id);
        }
        g = g.with_groups(gr)?;
    }
    Ok(g)
}
