//! Quivers with structured vertex labels, paths, cycle search and the `.quiver` text format.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Vertex label: an opaque id, a composition tuple, or a residue tuple with its moduli.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexLabel {
    Id(u32),
    Tuple(Vec<u32>),
    Residue { values: Vec<u32>, orders: Vec<u32> },
}

impl VertexLabel {
    pub fn tuple(&self) -> Option<&[u32]> {
        match self {
            VertexLabel::Tuple(t) => Some(t),
            VertexLabel::Residue { values, .. } => Some(values),
            VertexLabel::Id(_) => None,
        }
    }

    /// Short form used inside arrow names: digits run together when every entry is a
    /// single digit (`210`), otherwise separated by commas.
    pub fn compact(&self) -> String {
        match self {
            VertexLabel::Id(i) => i.to_string(),
            VertexLabel::Tuple(t) | VertexLabel::Residue { values: t, .. } => {
                if t.iter().all(|&x| x < 10) {
                    t.iter().map(|x| x.to_string()).collect()
                } else {
                    t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
                }
            }
        }
    }

    pub fn parse(text: &str) -> Option<VertexLabel> {
        let t = text.trim();
        if let Some((vals, ords)) = t.split_once(")/(") {
            let values = parse_tuple(&format!("{vals})"))?;
            let orders = parse_tuple(&format!("({ords}"))?;
            if values.len() != orders.len() || values.iter().zip(&orders).any(|(v, o)| v >= o) {
                return None;
            }
            return Some(VertexLabel::Residue { values, orders });
        }
        if t.starts_with('(') {
            return parse_tuple(t).map(VertexLabel::Tuple);
        }
        t.parse().ok().map(VertexLabel::Id)
    }
}

fn parse_tuple(t: &str) -> Option<Vec<u32>> {
    let inner = t.trim().strip_prefix('(')?.strip_suffix(')')?;
    if inner.trim().is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(|x| x.trim().parse().ok()).collect()
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |t: &[u32]| t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            VertexLabel::Id(i) => write!(f, "{i}"),
            VertexLabel::Tuple(t) => write!(f, "({})", join(t)),
            VertexLabel::Residue { values, orders } => {
                write!(f, "({})/({})", join(values), join(orders))
            }
        }
    }
}

/// Arrow specification used when building a quiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowSpec {
    pub name: String,
    pub source: VertexLabel,
    pub target: VertexLabel,
    pub degree: i32,
}

impl ArrowSpec {
    pub fn new(name: impl Into<String>, source: VertexLabel, target: VertexLabel, degree: i32) -> Self {
        ArrowSpec { name: name.into(), source, target, degree }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub degree: i32,
}

/// A path: a start vertex and a composable arrow sequence (empty = lazy path).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn lazy(v: usize) -> Self {
        Path { source: v, arrows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<VertexLabel>,
    arrows: Vec<Arrow>,
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
    vertex_index: HashMap<VertexLabel, usize>,
    arrow_index: HashMap<String, usize>,
}

impl Quiver {
    /// Validates and canonically orders vertices (by label) and arrows (by source, target, name).
    pub fn new(vertices: Vec<VertexLabel>, arrows: Vec<ArrowSpec>) -> Result<Quiver> {
        let mut verts = vertices;
        verts.sort();
        for w in verts.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Invalid(format!("duplicate vertex {}", w[0])));
            }
        }
        let vertex_index: HashMap<VertexLabel, usize> =
            verts.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let mut list = Vec::with_capacity(arrows.len());
        for a in arrows {
            let s = *vertex_index
                .get(&a.source)
                .ok_or_else(|| Error::Invalid(format!("arrow {} has undeclared source {}", a.name, a.source)))?;
            let t = *vertex_index
                .get(&a.target)
                .ok_or_else(|| Error::Invalid(format!("arrow {} has undeclared target {}", a.name, a.target)))?;
            if a.name.is_empty() || a.name.contains(|c: char| c.is_whitespace() || c == ':' || c == '.') {
                return Err(Error::Invalid(format!("bad arrow name {:?}", a.name)));
            }
            list.push(Arrow { name: a.name, source: s, target: t, degree: a.degree });
        }
        list.sort_by(|x, y| (x.source, x.target, &x.name).cmp(&(y.source, y.target, &y.name)));
        let mut arrow_index = HashMap::new();
        for (i, a) in list.iter().enumerate() {
            if arrow_index.insert(a.name.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate arrow {}", a.name)));
            }
        }
        let mut outgoing = vec![Vec::new(); verts.len()];
        let mut incoming = vec![Vec::new(); verts.len()];
        for (i, a) in list.iter().enumerate() {
            outgoing[a.source].push(i);
            incoming[a.target].push(i);
        }
        Ok(Quiver { vertices: verts, arrows: list, outgoing, incoming, vertex_index, arrow_index })
    }

    pub fn empty() -> Quiver {
        Quiver::new(Vec::new(), Vec::new()).expect("empty quiver is valid")
    }

    pub fn vertices(&self) -> &[VertexLabel] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex(&self, label: &VertexLabel) -> Option<usize> {
        self.vertex_index.get(label).copied()
    }

    pub fn arrow(&self, name: &str) -> Option<usize> {
        self.arrow_index.get(name).copied()
    }

    pub fn outgoing(&self, v: usize) -> &[usize] {
        &self.outgoing[v]
    }

    pub fn incoming(&self, v: usize) -> &[usize] {
        &self.incoming[v]
    }

    pub fn arrow_specs(&self) -> Vec<ArrowSpec> {
        self.arrows
            .iter()
            .map(|a| ArrowSpec {
                name: a.name.clone(),
                source: self.vertices[a.source].clone(),
                target: self.vertices[a.target].clone(),
                degree: a.degree,
            })
            .collect()
    }

    pub fn path_target(&self, p: &Path) -> usize {
        p.arrows.last().map_or(p.source, |&a| self.arrows[a].target)
    }

    pub fn path_degree(&self, p: &Path) -> i32 {
        p.arrows.iter().map(|&a| self.arrows[a].degree).sum()
    }

    pub fn is_path(&self, p: &Path) -> bool {
        let mut at = p.source;
        for &a in &p.arrows {
            if a >= self.arrows.len() || self.arrows[a].source != at {
                return false;
            }
            at = self.arrows[a].target;
        }
        p.source < self.vertices.len()
    }

    /// Builds a path from a start vertex and arrow names; `None` if not composable.
    pub fn path_from_names(&self, names: &[&str]) -> Option<Path> {
        let ids: Vec<usize> = names.iter().map(|n| self.arrow(n)).collect::<Option<_>>()?;
        let source = self.arrows[*ids.first()?].source;
        let p = Path { source, arrows: ids };
        self.is_path(&p).then_some(p)
    }

    pub fn path_name(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            return format!("e_{}", self.vertices[p.source]);
        }
        p.arrows.iter().map(|&a| self.arrows[a].name.as_str()).collect::<Vec<_>>().join(".")
    }

    /// All paths of the given length, lexicographic in arrow ids.
    pub fn enumerate_paths(&self, length: usize) -> Vec<Path> {
        if length == 0 {
            return (0..self.vertices.len()).map(Path::lazy).collect();
        }
        let mut out = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        for a in 0..self.arrows.len() {
            stack.clear();
            stack.push(a);
            self.extend_paths(&mut stack, length, &mut out);
        }
        out
    }

    fn extend_paths(&self, stack: &mut Vec<usize>, length: usize, out: &mut Vec<Path>) {
        if stack.len() == length {
            out.push(Path { source: self.arrows[stack[0]].source, arrows: stack.clone() });
            return;
        }
        let at = self.arrows[*stack.last().expect("nonempty")].target;
        for &b in &self.outgoing[at] {
            stack.push(b);
            self.extend_paths(stack, length, out);
            stack.pop();
        }
    }

    /// Adds a reversed arrow `name*` for every arrow.
    pub fn doubled(&self) -> Quiver {
        let mut specs = self.arrow_specs();
        for a in self.arrow_specs() {
            specs.push(ArrowSpec { name: star(&a.name), source: a.target, target: a.source, degree: a.degree });
        }
        Quiver::new(self.vertices.clone(), specs).expect("doubling preserves validity")
    }

    /// Same vertices, every arrow reversed and its name starred (or unstarred).
    pub fn opposite(&self) -> Quiver {
        let specs = self
            .arrow_specs()
            .into_iter()
            .map(|a| ArrowSpec { name: star(&a.name), source: a.target, target: a.source, degree: a.degree })
            .collect();
        Quiver::new(self.vertices.clone(), specs).expect("opposite preserves validity")
    }

    /// Oriented cycles through `n` pairwise distinct vertices, each listed once with its
    /// least vertex first.
    pub fn oriented_cycles(&self, n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        let succ: Vec<BTreeSet<usize>> = (0..self.vertices.len())
            .map(|v| self.outgoing[v].iter().map(|&a| self.arrows[a].target).collect())
            .collect();
        for start in 0..self.vertices.len() {
            if n == 1 {
                if succ[start].contains(&start) {
                    out.push(vec![start]);
                }
                continue;
            }
            let mut path = vec![start];
            self.cycle_search(&succ, start, n, &mut path, &mut out);
        }
        out
    }

    fn cycle_search(
        &self,
        succ: &[BTreeSet<usize>],
        start: usize,
        n: usize,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let last = *path.last().expect("nonempty");
        if path.len() == n {
            if succ[last].contains(&start) {
                out.push(path.clone());
            }
            return;
        }
        for &w in &succ[last] {
            if w > start && !path.contains(&w) {
                path.push(w);
                self.cycle_search(succ, start, n, path, out);
                path.pop();
            }
        }
    }

    /// Serializes to the `.quiver` text format.
    pub fn to_text(&self) -> String {
        let mut s = String::from("[vertices]\n");
        for v in &self.vertices {
            s.push_str(&format!("{v}\n"));
        }
        s.push_str("[arrows]\n");
        for a in &self.arrows {
            s.push_str(&format!(
                "{}: {} -> {} @{}\n",
                a.name, self.vertices[a.source], self.vertices[a.target], a.degree
            ));
        }
        s
    }

    /// Parses the `.quiver` format (sections `[vertices]` and `[arrows]`, `#` comments).
    pub fn from_text(text: &str) -> Result<Quiver> {
        let sections = split_sections(text)?;
        let mut vertices = Vec::new();
        let mut arrows = Vec::new();
        for (name, lines) in &sections {
            match name.as_str() {
                "vertices" => {
                    for l in lines {
                        vertices.push(
                            VertexLabel::parse(l).ok_or_else(|| Error::Parse(format!("bad vertex label {l:?}")))?,
                        );
                    }
                }
                "arrows" => {
                    for l in lines {
                        arrows.push(parse_arrow_line(l)?);
                    }
                }
                _ => {}
            }
        }
        Quiver::new(vertices, arrows)
    }
}

pub(crate) fn star(name: &str) -> String {
    match name.strip_suffix('*') {
        Some(base) => base.to_string(),
        None => format!("{name}*"),
    }
}

fn parse_arrow_line(l: &str) -> Result<ArrowSpec> {
    let bad = || Error::Parse(format!("bad arrow line {l:?}"));
    let (name, rest) = l.split_once(':').ok_or_else(bad)?;
    let (ends, deg) = match rest.rsplit_once('@') {
        Some((e, d)) => (e, d.trim().parse::<i32>().map_err(|_| bad())?),
        None => (rest, 1),
    };
    let (src, tgt) = ends.split_once("->").ok_or_else(bad)?;
    Ok(ArrowSpec {
        name: name.trim().to_string(),
        source: VertexLabel::parse(src).ok_or_else(bad)?,
        target: VertexLabel::parse(tgt).ok_or_else(bad)?,
        degree: deg,
    })
}

/// Splits a sectioned text file into `(section, non-empty lines)` pairs, dropping comments.
pub(crate) fn split_sections(text: &str) -> Result<Vec<(String, Vec<String>)>> {
    let mut out: Vec<(String, Vec<String>)> = Vec::new();
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
            out.push((name.trim().to_string(), Vec::new()));
        } else {
            match out.last_mut() {
                Some((_, lines)) => lines.push(line.to_string()),
                None => return Err(Error::Parse(format!("line outside a section: {line:?}"))),
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(i: u32) -> VertexLabel {
        VertexLabel::Id(i)
    }

    fn linear3() -> Quiver {
        Quiver::new(
            vec![id(1), id(2), id(3)],
            vec![ArrowSpec::new("a", id(1), id(2), 1), ArrowSpec::new("b", id(2), id(3), 1)],
        )
        .unwrap()
    }

    #[test]
    fn paths_of_linear_quiver() {
        let q = linear3();
        assert_eq!(q.enumerate_paths(0).len(), 3);
        assert_eq!(q.enumerate_paths(2).len(), 1);
        assert!(q.enumerate_paths(3).is_empty());
        assert!(q.oriented_cycles(2).is_empty());
    }

    #[test]
    fn validation_errors() {
        assert!(Quiver::new(vec![id(1), id(1)], vec![]).is_err());
        assert!(Quiver::new(vec![id(1)], vec![ArrowSpec::new("a", id(1), id(2), 1)]).is_err());
        assert!(Quiver::new(
            vec![id(1)],
            vec![ArrowSpec::new("a", id(1), id(1), 1), ArrowSpec::new("a", id(1), id(1), 1)]
        )
        .is_err());
        assert_eq!(Quiver::empty().num_vertices(), 0);
    }

    #[test]
    fn three_cycle() {
        let q = Quiver::new(
            vec![id(1), id(2), id(3)],
            vec![
                ArrowSpec::new("a1", id(1), id(2), 1),
                ArrowSpec::new("a2", id(2), id(3), 1),
                ArrowSpec::new("a3", id(3), id(1), 1),
            ],
        )
        .unwrap();
        assert_eq!(q.enumerate_paths(3).len(), 3);
        assert_eq!(q.oriented_cycles(3), vec![vec![0, 1, 2]]);
        let d = q.doubled();
        assert_eq!(d.num_arrows(), 6);
        assert_eq!(d.oriented_cycles(2).len(), 3);
        assert_eq!(d.oriented_cycles(3).len(), 2);
    }

    #[test]
    fn text_roundtrip() {
        let q = Quiver::new(
            vec![VertexLabel::Tuple(vec![1, 0]), VertexLabel::Tuple(vec![0, 1])],
            vec![ArrowSpec::new("f1_10", VertexLabel::Tuple(vec![1, 0]), VertexLabel::Tuple(vec![0, 1]), 2)],
        )
        .unwrap();
        let t = q.to_text();
        let back = Quiver::from_text(&t).unwrap();
        assert_eq!(back, q);
        assert_eq!(back.to_text(), t);
        let r = VertexLabel::Residue { values: vec![1, 2], orders: vec![3, 3] };
        assert_eq!(VertexLabel::parse(&r.to_string()), Some(r));
    }
}
