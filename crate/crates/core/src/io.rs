//! Plain-text MDP files.
//!
//! ```text
//! # comment lines and blank lines are ignored
//! mdp <n> <m>
//! v <id> <P1|R> [priority]
//! e <u> <v>
//! ```
//!
//! The header comes first. Every id in `0..n` gets exactly one `v` line,
//! either all of them or none carry a priority, and there are exactly `m`
//! distinct `e` lines. Self-loops and vertices without successors are
//! rejected.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::explicit::ExplicitMdp;

pub fn read_mdp(path: &Path) -> Result<ExplicitMdp> {
    parse_mdp(&std::fs::read_to_string(path)?)
}

pub fn write_mdp(path: &Path, g: &ExplicitMdp) -> Result<()> {
    std::fs::write(path, format_mdp(g))?;
    Ok(())
}

struct Fields<'a> {
    line: usize,
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Fields<'a> {
    fn new(line: usize, text: &'a str) -> Self {
        let mut items = Vec::new();
        let mut start = None;
        for (i, c) in text.char_indices().chain([(text.len(), ' ')]) {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    items.push((s + 1, &text[s..i]));
                    start = None;
                }
                _ => {}
            }
        }
        Fields { line, items, pos: 0 }
    }

    fn error(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn end_column(&self) -> usize {
        self.items.last().map_or(1, |(c, s)| c + s.len())
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let item = self
            .items
            .get(self.pos)
            .copied()
            .ok_or_else(|| self.error(self.end_column(), format!("expected {what}")))?;
        self.pos += 1;
        Ok(item)
    }

    fn number<T: std::str::FromStr>(&mut self, what: &str) -> Result<(usize, T)> {
        let (col, s) = self.next(what)?;
        s.parse()
            .map(|v| (col, v))
            .map_err(|_| self.error(col, format!("expected {what}, found `{s}`")))
    }

    fn optional(&mut self) -> Option<(usize, &'a str)> {
        let item = self.items.get(self.pos).copied();
        self.pos += item.is_some() as usize;
        item
    }

    fn finish(&self) -> Result<()> {
        match self.items.get(self.pos) {
            Some(&(col, s)) => Err(self.error(col, format!("unexpected `{s}`"))),
            None => Ok(()),
        }
    }
}

pub fn parse_mdp(text: &str) -> Result<ExplicitMdp> {
    let mut header: Option<(usize, usize)> = None;
    let mut random: Vec<Option<bool>> = Vec::new();
    let mut priority: Vec<Option<u32>> = Vec::new();
    let mut with_priority: Option<bool> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let mut f = Fields::new(line, content);
        let Some((col, kind)) = f.optional() else { continue };
        match (kind, header) {
            ("mdp", None) => {
                let (_, n) = f.number::<usize>("vertex count")?;
                let (_, m) = f.number::<usize>("edge count")?;
                f.finish()?;
                if n == 0 {
                    return Err(f.error(col, "an MDP needs at least one vertex"));
                }
                header = Some((n, m));
                random = vec![None; n];
                priority = vec![None; n];
            }
            ("mdp", Some(_)) => return Err(f.error(col, "duplicate header")),
            (_, None) => return Err(f.error(col, "expected header `mdp <n> <m>`")),
            ("v", Some((n, _))) => {
                let (idc, id) = f.number::<usize>("vertex id")?;
                if id >= n {
                    return Err(f.error(idc, format!("vertex id {id} out of range 0..{n}")));
                }
                if random[id].is_some() {
                    return Err(f.error(idc, format!("vertex {id} declared twice")));
                }
                let (pc, player) = f.next("player `P1` or `R`")?;
                random[id] = Some(match player {
                    "P1" => false,
                    "R" => true,
                    other => return Err(f.error(pc, format!("expected player `P1` or `R`, found `{other}`"))),
                });
                let pr = match f.optional() {
                    Some((c, s)) => Some(
                        s.parse::<u32>()
                            .map_err(|_| f.error(c, format!("expected priority, found `{s}`")))?,
                    ),
                    None => None,
                };
                f.finish()?;
                match with_priority {
                    None => with_priority = Some(pr.is_some()),
                    Some(w) if w != pr.is_some() => {
                        return Err(f.error(f.end_column(), "either every vertex has a priority or none does"));
                    }
                    _ => {}
                }
                priority[id] = pr;
            }
            ("e", Some((n, _))) => {
                let (uc, u) = f.number::<usize>("source id")?;
                let (vc, v) = f.number::<usize>("target id")?;
                f.finish()?;
                for (c, x) in [(uc, u), (vc, v)] {
                    if x >= n {
                        return Err(f.error(c, format!("edge endpoint {x} out of range 0..{n}")));
                    }
                }
                if u == v {
                    return Err(f.error(
                        uc,
                        format!("self-loop on vertex {u} (MDP vertices must not have self-loops)"),
                    ));
                }
                if !seen.insert((u, v)) {
                    return Err(f.error(uc, format!("duplicate edge {u} -> {v}")));
                }
                edges.push((u, v));
            }
            (other, Some(_)) => return Err(f.error(col, format!("unknown record `{other}`"))),
        }
    }

    let Some((n, m)) = header else {
        return Err(Error::Parse {
            line: last_line.max(1),
            column: 1,
            message: "missing header `mdp <n> <m>`".into(),
        });
    };
    if let Some(v) = random.iter().position(Option::is_none) {
        return Err(Error::Validation(format!("vertex {v} is never declared")));
    }
    if edges.len() != m {
        return Err(Error::Validation(format!(
            "header announces {m} edges but {} are listed",
            edges.len()
        )));
    }
    let random = random.into_iter().map(Option::unwrap_or_default).collect();
    let mut g = ExplicitMdp::from_edges(n, random, edges);
    if with_priority == Some(true) {
        g = g.with_priorities(priority.into_iter().map(Option::unwrap_or_default).collect());
    }
    g.validate()?;
    Ok(g)
}

/// Canonical text form: vertices in id order, edges sorted.
pub fn format_mdp(g: &ExplicitMdp) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "mdp {} {}", g.n(), g.m());
    for v in 0..g.n() {
        let player = if g.is_random(v) { "R" } else { "P1" };
        match g.priorities() {
            Some(p) => {
                let _ = writeln!(out, "v {v} {player} {}", p[v]);
            }
            None => {
                let _ = writeln!(out, "v {v} {player}");
            }
        }
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {u} {v}");
    }
    out
}
