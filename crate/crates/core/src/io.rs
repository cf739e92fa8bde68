//! Text formats for graphs, set-function specs and hitting instances.
//!
//! All formats are line based with `#` comments. Writers emit the canonical
//! form, which parses back to the same value and re-serialises byte for byte.
//!
//! Graph: `n <count>`, then `e <u> <v>` per edge, then optionally one
//! `rot <v> <edge ids...>` line per vertex (a loop's id appears twice).
//!
//! Function: a kind line (`modular`, `colors`, `graphic-rank`,
//! `partition-matroid`, `lb-f`, `lb-fc`) followed by `w <elem> <weight>`,
//! `c <elem> <color>`, optional `n`/`e` lines, `block <cap> <elem...>`,
//! `lb <k> <p>` or `lb <k> <p> cycle <edge ids...>`.
//!
//! Hitting instance: `k <k>`, `u <size>`, then `family` blocks of
//! `set <elem...>` lines.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::adversary::{LowerBoundF, LowerBoundFC};
use crate::graph::Multigraph;
use crate::oracle::{Coverage, GraphicRank, Modular, PartitionRank, SetFunction};
use crate::planar::EmbeddedMultigraph;
use crate::wfh::WfhInstance;
use crate::{Error, Result};

/// Non-empty, comment-stripped lines with their 1-based numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("");
        let words: Vec<&str> = body.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn num<T: FromStr>(line: usize, word: &str, what: &str) -> Result<T> {
    word.parse()
        .map_err(|_| Error::parse(line, format!("bad {what} '{word}'")))
}

fn arity(line: usize, words: &[&str], n: usize) -> Result<()> {
    if words.len() == n {
        Ok(())
    } else {
        Err(Error::parse(
            line,
            format!(
                "'{}' takes {} fields, got {}",
                words[0],
                n - 1,
                words.len() - 1
            ),
        ))
    }
}

fn join(items: impl IntoIterator<Item = usize>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: Multigraph,
    /// Edge-id rotation per vertex, when the file has `rot` lines.
    pub rotation: Option<Vec<Vec<usize>>>,
}

impl GraphFile {
    pub fn embedded(&self) -> Result<EmbeddedMultigraph> {
        let rotation = self
            .rotation
            .clone()
            .ok_or_else(|| Error::InvalidArgument("graph file has no rot lines".into()))?;
        EmbeddedMultigraph::from_edge_rotation(self.graph.clone(), rotation)
    }
}

pub fn parse_graph(text: &str) -> Result<GraphFile> {
    let mut graph: Option<Multigraph> = None;
    let mut rotation: Option<Vec<Vec<usize>>> = None;
    let mut seen_rot: Vec<bool> = Vec::new();
    for (line, words) in records(text) {
        match words[0] {
            "n" => {
                arity(line, &words, 2)?;
                if graph.is_some() {
                    return Err(Error::parse(line, "repeated 'n' line"));
                }
                graph = Some(Multigraph::new(num(line, words[1], "vertex count")?));
            }
            "e" => {
                arity(line, &words, 3)?;
                let g = graph
                    .as_mut()
                    .ok_or_else(|| Error::parse(line, "'e' before 'n'"))?;
                if rotation.is_some() {
                    return Err(Error::parse(line, "'e' after 'rot'"));
                }
                let u = num(line, words[1], "vertex")?;
                let v = num(line, words[2], "vertex")?;
                g.add_edge(u, v)
                    .map_err(|e| Error::parse(line, e.to_string()))?;
            }
            "rot" => {
                let g = graph
                    .as_ref()
                    .ok_or_else(|| Error::parse(line, "'rot' before 'n'"))?;
                if words.len() < 2 {
                    return Err(Error::parse(line, "'rot' needs a vertex"));
                }
                let v: usize = num(line, words[1], "vertex")?;
                if v >= g.vertex_count() {
                    return Err(Error::parse(line, format!("vertex {v} out of range")));
                }
                let rot = rotation.get_or_insert_with(|| vec![Vec::new(); g.vertex_count()]);
                seen_rot.resize(g.vertex_count(), false);
                if std::mem::replace(&mut seen_rot[v], true) {
                    return Err(Error::parse(line, format!("second 'rot' line for {v}")));
                }
                for w in &words[2..] {
                    let e: usize = num(line, w, "edge id")?;
                    if e >= g.edge_count() {
                        return Err(Error::parse(line, format!("edge {e} out of range")));
                    }
                    rot[v].push(e);
                }
            }
            other => return Err(Error::parse(line, format!("unknown record '{other}'"))),
        }
    }
    let graph = graph.ok_or_else(|| Error::parse(0, "missing 'n' line"))?;
    Ok(GraphFile { graph, rotation })
}

pub fn write_graph(file: &GraphFile) -> String {
    let mut out = format!("n {}\n", file.graph.vertex_count());
    for &(u, v) in file.graph.edges() {
        let _ = writeln!(out, "e {u} {v}");
    }
    if let Some(rot) = &file.rotation {
        for (v, ids) in rot.iter().enumerate() {
            if ids.is_empty() {
                let _ = writeln!(out, "rot {v}");
            } else {
                let _ = writeln!(out, "rot {v} {}", join(ids.iter().copied()));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight {
    Int(i64),
    Real(f64),
}

impl Weight {
    fn as_f64(self) -> f64 {
        match self {
            Weight::Int(x) => x as f64,
            Weight::Real(x) => x,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    Modular(Vec<(usize, Weight)>),
    Colors(Vec<(usize, usize)>),
    /// Rank over the edges of its own graph, or of the input graph when `None`.
    GraphicRank(Option<Multigraph>),
    PartitionMatroid(Vec<(usize, Vec<usize>)>),
    LowerBound {
        k: usize,
        p: usize,
        cycle: Option<Vec<usize>>,
    },
}

/// An oracle built from a spec, with its value type resolved.
pub enum BuiltOracle {
    Integer(Box<dyn SetFunction<Value = i64>>),
    Real(Box<dyn SetFunction<Value = f64>>),
}

impl std::fmt::Debug for BuiltOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BuiltOracle::Integer(o) => write!(f, "Integer(ground {})", o.ground_size()),
            BuiltOracle::Real(o) => write!(f, "Real(ground {})", o.ground_size()),
        }
    }
}

impl BuiltOracle {
    pub fn ground_size(&self) -> usize {
        match self {
            BuiltOracle::Integer(o) => o.ground_size(),
            BuiltOracle::Real(o) => o.ground_size(),
        }
    }
}

impl FunctionSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            FunctionSpec::Modular(_) => "modular",
            FunctionSpec::Colors(_) => "colors",
            FunctionSpec::GraphicRank(_) => "graphic-rank",
            FunctionSpec::PartitionMatroid(_) => "partition-matroid",
            FunctionSpec::LowerBound { cycle: None, .. } => "lb-f",
            FunctionSpec::LowerBound { cycle: Some(_), .. } => "lb-fc",
        }
    }

    /// Builds the oracle over `ground` elements; `graph` is the input graph,
    /// used by `graphic-rank` without its own edges.
    pub fn build(&self, ground: usize, graph: &Multigraph) -> Result<BuiltOracle> {
        let check = |x: usize| {
            if x < ground {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!(
                    "element {x} outside ground set of size {ground}"
                )))
            }
        };
        let mismatch = |own: usize| {
            Err(Error::InvalidArgument(format!(
                "{} function has {own} elements but {ground} are needed",
                self.kind()
            )))
        };
        Ok(match self {
            FunctionSpec::Modular(ws) => {
                for &(x, _) in ws {
                    check(x)?;
                }
                if ws.iter().all(|(_, w)| matches!(w, Weight::Int(_))) {
                    let mut weights = vec![0i64; ground];
                    for &(x, w) in ws {
                        if let Weight::Int(w) = w {
                            weights[x] = w;
                        }
                    }
                    BuiltOracle::Integer(Box::new(Modular::new(weights)?))
                } else {
                    let mut weights = vec![0f64; ground];
                    for &(x, w) in ws {
                        weights[x] = w.as_f64();
                    }
                    BuiltOracle::Real(Box::new(Modular::new(weights)?))
                }
            }
            FunctionSpec::Colors(cs) => {
                let mut colors = vec![None; ground];
                for &(x, c) in cs {
                    check(x)?;
                    colors[x] = Some(c);
                }
                BuiltOracle::Integer(Box::new(Coverage::new(colors)))
            }
            FunctionSpec::GraphicRank(own) => {
                let g = own.clone().unwrap_or_else(|| graph.clone());
                if g.edge_count() != ground {
                    return mismatch(g.edge_count());
                }
                BuiltOracle::Integer(Box::new(GraphicRank::new(g)))
            }
            FunctionSpec::PartitionMatroid(blocks) => {
                BuiltOracle::Integer(Box::new(PartitionRank::new(ground, blocks.clone())?))
            }
            FunctionSpec::LowerBound { k, p, cycle } => {
                let own = k * p + 1;
                if own != ground {
                    return mismatch(own);
                }
                match cycle {
                    None => BuiltOracle::Integer(Box::new(LowerBoundF::new(*k, *p)?)),
                    Some(c) => BuiltOracle::Integer(Box::new(LowerBoundFC::new(*k, *p, c)?)),
                }
            }
        })
    }
}

fn parse_weight(line: usize, word: &str) -> Result<Weight> {
    if let Ok(x) = word.parse::<i64>() {
        return Ok(Weight::Int(x));
    }
    match word.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(Weight::Real(x)),
        _ => Err(Error::parse(line, format!("bad weight '{word}'"))),
    }
}

pub fn parse_function(text: &str) -> Result<FunctionSpec> {
    let mut lines = records(text);
    let (first, words) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "empty function file"))?;
    arity(first, &words, 1)?;
    let kind = words[0];
    let mut spec = match kind {
        "modular" => FunctionSpec::Modular(Vec::new()),
        "colors" => FunctionSpec::Colors(Vec::new()),
        "graphic-rank" => FunctionSpec::GraphicRank(None),
        "partition-matroid" => FunctionSpec::PartitionMatroid(Vec::new()),
        "lb-f" | "lb-fc" => FunctionSpec::LowerBound {
            k: 0,
            p: 0,
            cycle: None,
        },
        other => {
            return Err(Error::parse(
                first,
                format!("unknown function kind '{other}'"),
            ))
        }
    };
    let mut seen = std::collections::BTreeSet::new();
    let mut lb_seen = false;
    for (line, words) in lines {
        match (&mut spec, words[0]) {
            (FunctionSpec::Modular(ws), "w") => {
                arity(line, &words, 3)?;
                let x: usize = num(line, words[1], "element")?;
                if !seen.insert(x) {
                    return Err(Error::parse(line, format!("element {x} given twice")));
                }
                ws.push((x, parse_weight(line, words[2])?));
            }
            (FunctionSpec::Colors(cs), "c") => {
                arity(line, &words, 3)?;
                let x: usize = num(line, words[1], "element")?;
                if !seen.insert(x) {
                    return Err(Error::parse(line, format!("element {x} given twice")));
                }
                cs.push((x, num(line, words[2], "color")?));
            }
            (FunctionSpec::GraphicRank(g), "n") => {
                arity(line, &words, 2)?;
                if g.is_some() {
                    return Err(Error::parse(line, "repeated 'n' line"));
                }
                *g = Some(Multigraph::new(num(line, words[1], "vertex count")?));
            }
            (FunctionSpec::GraphicRank(g), "e") => {
                arity(line, &words, 3)?;
                let g = g
                    .as_mut()
                    .ok_or_else(|| Error::parse(line, "'e' before 'n'"))?;
                let u = num(line, words[1], "vertex")?;
                let v = num(line, words[2], "vertex")?;
                g.add_edge(u, v)
                    .map_err(|e| Error::parse(line, e.to_string()))?;
            }
            (FunctionSpec::PartitionMatroid(blocks), "block") => {
                if words.len() < 2 {
                    return Err(Error::parse(line, "'block' needs a capacity"));
                }
                let cap = num(line, words[1], "capacity")?;
                let elems = words[2..]
                    .iter()
                    .map(|w| num(line, w, "element"))
                    .collect::<Result<Vec<usize>>>()?;
                for &x in &elems {
                    if !seen.insert(x) {
                        return Err(Error::parse(line, format!("element {x} in two blocks")));
                    }
                }
                blocks.push((cap, elems));
            }
            (FunctionSpec::LowerBound { k, p, cycle }, "lb") => {
                if std::mem::replace(&mut lb_seen, true) {
                    return Err(Error::parse(line, "repeated 'lb' line"));
                }
                if words.len() < 3 {
                    return Err(Error::parse(line, "'lb' needs k and p"));
                }
                *k = num(line, words[1], "k")?;
                *p = num(line, words[2], "p")?;
                match (kind, words.get(3)) {
                    ("lb-f", None) => {}
                    ("lb-fc", Some(&"cycle")) => {
                        *cycle = Some(
                            words[4..]
                                .iter()
                                .map(|w| num(line, w, "edge id"))
                                .collect::<Result<Vec<usize>>>()?,
                        );
                    }
                    ("lb-f", Some(_)) => return Err(Error::parse(line, "lb-f takes only k and p")),
                    _ => return Err(Error::parse(line, "lb-fc needs 'cycle <edge ids>'")),
                }
            }
            (_, other) => {
                return Err(Error::parse(
                    line,
                    format!("record '{other}' does not belong to a {kind} function"),
                ))
            }
        }
    }
    if matches!(spec, FunctionSpec::LowerBound { .. }) && !lb_seen {
        return Err(Error::parse(first, format!("{kind} needs an 'lb' line")));
    }
    Ok(spec)
}

pub fn write_function(spec: &FunctionSpec) -> String {
    let mut out = format!("{}\n", spec.kind());
    match spec {
        FunctionSpec::Modular(ws) => {
            for &(x, w) in ws {
                let _ = match w {
                    Weight::Int(w) => writeln!(out, "w {x} {w}"),
                    Weight::Real(w) => writeln!(out, "w {x} {w:?}"),
                };
            }
        }
        FunctionSpec::Colors(cs) => {
            for &(x, c) in cs {
                let _ = writeln!(out, "c {x} {c}");
            }
        }
        FunctionSpec::GraphicRank(Some(g)) => {
            let _ = writeln!(out, "n {}", g.vertex_count());
            for &(u, v) in g.edges() {
                let _ = writeln!(out, "e {u} {v}");
            }
        }
        FunctionSpec::GraphicRank(None) => {}
        FunctionSpec::PartitionMatroid(blocks) => {
            for (cap, elems) in blocks {
                if elems.is_empty() {
                    let _ = writeln!(out, "block {cap}");
                } else {
                    let _ = writeln!(out, "block {cap} {}", join(elems.iter().copied()));
                }
            }
        }
        FunctionSpec::LowerBound { k, p, cycle } => {
            let _ = match cycle {
                None => writeln!(out, "lb {k} {p}"),
                Some(c) => writeln!(out, "lb {k} {p} cycle {}", join(c.iter().copied())),
            };
        }
    }
    out
}

pub fn parse_wfh(text: &str) -> Result<WfhInstance> {
    let mut k: Option<usize> = None;
    let mut u: Option<usize> = None;
    let mut families: Vec<Vec<Vec<usize>>> = Vec::new();
    for (line, words) in records(text) {
        match words[0] {
            "k" | "u" => {
                arity(line, &words, 2)?;
                if !families.is_empty() {
                    return Err(Error::parse(line, format!("'{}' after a family", words[0])));
                }
                let slot = if words[0] == "k" { &mut k } else { &mut u };
                if slot.replace(num(line, words[1], words[0])?).is_some() {
                    return Err(Error::parse(line, format!("repeated '{}' line", words[0])));
                }
            }
            "family" => {
                arity(line, &words, 1)?;
                families.push(Vec::new());
            }
            "set" => {
                let size = u.ok_or_else(|| Error::parse(line, "'set' before 'u'"))?;
                let family = families
                    .last_mut()
                    .ok_or_else(|| Error::parse(line, "'set' outside a family"))?;
                let mut set = Vec::with_capacity(words.len() - 1);
                for w in &words[1..] {
                    let x: usize = num(line, w, "element")?;
                    if x >= size {
                        return Err(Error::parse(
                            line,
                            format!("element {x} outside universe of size {size}"),
                        ));
                    }
                    set.push(x);
                }
                family.push(set);
            }
            other => return Err(Error::parse(line, format!("unknown record '{other}'"))),
        }
    }
    let k = k.ok_or_else(|| Error::parse(0, "missing 'k' line"))?;
    let u = u.ok_or_else(|| Error::parse(0, "missing 'u' line"))?;
    WfhInstance::new(k, u, families)
}

pub fn write_wfh(inst: &WfhInstance) -> String {
    let mut out = format!("k {}\nu {}\n", inst.k(), inst.universe());
    for family in inst.families() {
        out.push_str("family\n");
        for set in family {
            if set.count_ones(..) == 0 {
                out.push_str("set\n");
            } else {
                let _ = writeln!(out, "set {}", join(set.ones()));
            }
        }
    }
    out
}
