//! Multigraphs, paths and cycles, plus the structural preprocessing shared by
//! every solver.
//!
//! Vertices and edges are dense integer ids. Parallel edges and loops are
//! allowed; each edge id appears twice in the adjacency lists (twice at the same
//! vertex for a loop).

use std::collections::VecDeque;
use std::fmt;

use crate::{Error, Result};

/// Default cap for [`enumerate_cycles`].
pub const DEFAULT_CYCLE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Multigraph {
    pub fn new(n: usize) -> Self {
        Multigraph {
            n,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n],
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Multigraph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Appends an edge and returns its id.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<usize> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidArgument(format!(
                "edge ({u}, {v}) has an endpoint outside 0..{}",
                self.n
            )));
        }
        let id = self.edges.len();
        self.edges.push((u, v));
        self.adjacency[u].push((v, id));
        self.adjacency[v].push((u, id));
        Ok(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        self.edges[edge]
    }

    /// `(neighbor, edge id)` incidences of `v`.
    pub fn incidences(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|&(u, v)| u == v)
    }

    /// First edge joining `u` and `v`, if any.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.adjacency[u]
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
    }

    /// Errors unless the graph has neither loops nor parallel edges.
    pub fn ensure_simple(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::with_capacity(self.edges.len());
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            if u == v {
                return Err(Error::NotSimple(format!("edge {id} is a loop")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::NotSimple(format!(
                    "edge {id} is parallel to an earlier edge"
                )));
            }
        }
        Ok(())
    }

    /// Component id of every vertex, numbered in order of smallest vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            queue.push_back(s);
            while let Some(x) = queue.pop_front() {
                for &(y, _) in &self.adjacency[x] {
                    if comp[y] == usize::MAX {
                        comp[y] = next;
                        queue.push_back(y);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn component_count(&self) -> usize {
        self.components().iter().max().map_or(0, |&c| c + 1)
    }

    /// For every vertex, whether its connected component contains a cycle.
    pub fn on_cyclic_component(&self) -> Vec<bool> {
        let comp = self.components();
        let count = comp.iter().max().map_or(0, |&c| c + 1);
        let mut vertices = vec![0usize; count];
        let mut edges = vec![0usize; count];
        for &c in &comp {
            vertices[c] += 1;
        }
        for &(u, _) in &self.edges {
            edges[comp[u]] += 1;
        }
        comp.iter().map(|&c| edges[c] >= vertices[c]).collect()
    }

    /// Checks the [`Cycle`] invariants against this graph.
    pub fn check_cycle(&self, cycle: &Cycle) -> std::result::Result<(), String> {
        let len = cycle.vertices.len();
        if len < 2 {
            return Err(format!("cycle of length {len}"));
        }
        if cycle.edges.len() != len {
            return Err("vertex and edge sequences differ in length".into());
        }
        let mut seen_v = vec![false; self.n];
        for &v in &cycle.vertices {
            if v >= self.n || std::mem::replace(&mut seen_v[v], true) {
                return Err(format!("vertex {v} out of range or repeated"));
            }
        }
        let mut seen_e = vec![false; self.edges.len()];
        for (i, &e) in cycle.edges.iter().enumerate() {
            if e >= self.edges.len() || std::mem::replace(&mut seen_e[e], true) {
                return Err(format!("edge {e} out of range or repeated"));
            }
            let a = cycle.vertices[i];
            let b = cycle.vertices[(i + 1) % len];
            let (u, v) = self.edges[e];
            if !((u == a && v == b) || (u == b && v == a)) {
                return Err(format!("edge {e} does not join {a} and {b}"));
            }
        }
        Ok(())
    }
}

/// An ordered sequence of distinct vertices, consecutive ones adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexPath(pub Vec<usize>);

impl VertexPath {
    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_valid_in(&self, g: &Multigraph) -> bool {
        let mut seen = vec![false; g.vertex_count()];
        for &v in &self.0 {
            if v >= g.vertex_count() || std::mem::replace(&mut seen[v], true) {
                return false;
            }
        }
        self.0
            .windows(2)
            .all(|w| g.edge_between(w[0], w[1]).is_some())
    }
}

/// A cycle given by its cyclic vertex sequence and the edges realising it.
///
/// `edges[i]` joins `vertices[i]` and `vertices[(i + 1) % len]`. Constructors
/// canonicalise: the smallest vertex comes first, and the orientation is the one
/// whose second vertex is smaller (for length two, whose first edge is smaller).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    vertices: Vec<usize>,
    edges: Vec<usize>,
}

impl Cycle {
    pub fn new(vertices: Vec<usize>, edges: Vec<usize>) -> Self {
        assert_eq!(
            vertices.len(),
            edges.len(),
            "cycle sequences differ in length"
        );
        let len = vertices.len();
        if len == 0 {
            return Cycle { vertices, edges };
        }
        let start = (0..len).min_by_key(|&i| vertices[i]).unwrap();
        let mut v: Vec<usize> = (0..len).map(|i| vertices[(start + i) % len]).collect();
        let mut e: Vec<usize> = (0..len).map(|i| edges[(start + i) % len]).collect();
        let flip = match len {
            1 => false,
            2 => e[0] > e[1],
            _ => v[1] > v[len - 1],
        };
        if flip {
            let rv: Vec<usize> = (0..len).map(|j| v[(len - j) % len]).collect();
            let re: Vec<usize> = (0..len).map(|j| e[len - j - 1]).collect();
            v = rv;
            e = re;
        }
        Cycle {
            vertices: v,
            edges: e,
        }
    }

    /// Builds a cycle of a graph from its vertex sequence, picking the first edge
    /// between consecutive vertices. Intended for simple graphs.
    pub fn from_vertices(g: &Multigraph, vertices: Vec<usize>) -> Result<Self> {
        let len = vertices.len();
        let mut edges = Vec::with_capacity(len);
        for i in 0..len {
            let (a, b) = (vertices[i], vertices[(i + 1) % len]);
            let e = g.edge_between(a, b).ok_or_else(|| {
                Error::InvalidArgument(format!("vertices {a} and {b} are not adjacent"))
            })?;
            edges.push(e);
        }
        Ok(Cycle::new(vertices, edges))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Result of [`two_core`]: the peeled graph and maps back to the input ids.
#[derive(Debug, Clone)]
pub struct Core {
    pub graph: Multigraph,
    /// `vertex_map[new] = old`.
    pub vertex_map: Vec<usize>,
    /// `edge_map[new] = old`.
    pub edge_map: Vec<usize>,
}

impl Core {
    pub fn is_empty(&self) -> bool {
        self.graph.vertex_count() == 0
    }
}

/// Iteratively deletes vertices of degree at most one (loops count two).
///
/// The result is empty iff the input is a forest.
pub fn two_core(g: &Multigraph) -> Core {
    let n = g.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed_v = vec![false; n];
    let mut removed_e = vec![false; g.edge_count()];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    while let Some(v) = queue.pop_front() {
        if removed_v[v] {
            continue;
        }
        removed_v[v] = true;
        for &(w, e) in g.incidences(v) {
            if removed_e[e] {
                continue;
            }
            removed_e[e] = true;
            degree[w] -= 1;
            if !removed_v[w] && degree[w] <= 1 {
                queue.push_back(w);
            }
        }
    }
    let vertex_map: Vec<usize> = (0..n).filter(|&v| !removed_v[v]).collect();
    let mut new_id = vec![usize::MAX; n];
    for (i, &v) in vertex_map.iter().enumerate() {
        new_id[v] = i;
    }
    let mut graph = Multigraph::new(vertex_map.len());
    let mut edge_map = Vec::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if !removed_e[e] {
            graph
                .add_edge(new_id[u], new_id[v])
                .expect("surviving edges join surviving vertices");
            edge_map.push(e);
        }
    }
    Core {
        graph,
        vertex_map,
        edge_map,
    }
}

/// Result of [`subdivide`]. Edge `e` of the input becomes vertex `n + e`.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub graph: Multigraph,
    pub original_vertices: usize,
}

impl Subdivision {
    /// The input edge a subdivision vertex stands for.
    pub fn original_edge(&self, v: usize) -> Option<usize> {
        v.checked_sub(self.original_vertices)
    }

    pub fn subdivision_vertex(&self, edge: usize) -> usize {
        self.original_vertices + edge
    }

    /// Replaces every subdivision vertex by an edge between its two neighbours.
    pub fn contract_back(&self) -> Multigraph {
        let m = self.graph.vertex_count() - self.original_vertices;
        let mut g = Multigraph::new(self.original_vertices);
        for e in 0..m {
            let w = self.subdivision_vertex(e);
            let inc = self.graph.incidences(w);
            g.add_edge(inc[0].0, inc[1].0)
                .expect("subdivision neighbours are original vertices");
        }
        g
    }

    /// Maps a cycle of the subdivided graph to the corresponding cycle of the input.
    pub fn lift_cycle(&self, cycle: &Cycle) -> Cycle {
        let len = cycle.len();
        let start = (0..len)
            .find(|&i| cycle.vertices()[i] < self.original_vertices)
            .expect("a cycle of a subdivision passes through an original vertex");
        let mut vertices = Vec::with_capacity(len / 2);
        let mut edges = Vec::with_capacity(len / 2);
        for j in (0..len).step_by(2) {
            let i = (start + j) % len;
            vertices.push(cycle.vertices()[i]);
            let sub = cycle.vertices()[(i + 1) % len];
            edges.push(self.original_edge(sub).expect("alternating cycle"));
        }
        Cycle::new(vertices, edges)
    }
}

/// Subdivides every edge once. The result is simple for loop-free input.
pub fn subdivide(g: &Multigraph) -> Result<Subdivision> {
    if let Some(e) = g.edges().iter().position(|&(u, v)| u == v) {
        return Err(Error::LoopEdge(e));
    }
    let n = g.vertex_count();
    let mut graph = Multigraph::new(n + g.edge_count());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        graph.add_edge(u, n + e)?;
        graph.add_edge(n + e, v)?;
    }
    Ok(Subdivision {
        graph,
        original_vertices: n,
    })
}

/// Lists every cycle of length at least two exactly once, in canonical form.
///
/// Parallel edge pairs count as cycles of length two; loops are ignored.
pub fn enumerate_cycles(g: &Multigraph, cap: usize) -> Result<Vec<Cycle>> {
    struct Search<'a> {
        g: &'a Multigraph,
        start: usize,
        on_path: Vec<bool>,
        path_v: Vec<usize>,
        path_e: Vec<usize>,
        out: Vec<Cycle>,
        cap: usize,
    }

    impl Search<'_> {
        fn extend(&mut self, cur: usize) -> Result<()> {
            for &(w, e) in self.g.incidences(cur) {
                if w == cur {
                    continue;
                }
                if w == self.start {
                    if !self.path_e.is_empty() && !self.path_e.contains(&e) && self.path_e[0] < e {
                        if self.out.len() == self.cap {
                            return Err(Error::TooManyCycles(self.cap));
                        }
                        let mut edges = self.path_e.clone();
                        edges.push(e);
                        self.out.push(Cycle::new(self.path_v.clone(), edges));
                    }
                } else if w > self.start && !self.on_path[w] {
                    self.on_path[w] = true;
                    self.path_v.push(w);
                    self.path_e.push(e);
                    self.extend(w)?;
                    self.path_v.pop();
                    self.path_e.pop();
                    self.on_path[w] = false;
                }
            }
            Ok(())
        }
    }

    let mut search = Search {
        g,
        start: 0,
        on_path: vec![false; g.vertex_count()],
        path_v: Vec::new(),
        path_e: Vec::new(),
        out: Vec::new(),
        cap,
    };
    for s in 0..g.vertex_count() {
        search.start = s;
        search.on_path[s] = true;
        search.path_v.push(s);
        search.extend(s)?;
        search.path_v.pop();
        search.on_path[s] = false;
    }
    Ok(search.out)
}

/// Whether the path's vertex sequence occurs contiguously in the cycle, in
/// either orientation and at any rotation.
pub fn is_segment(path: &VertexPath, cycle: &Cycle) -> bool {
    let p = path.vertices();
    let c = cycle.vertices();
    let len = c.len();
    if p.is_empty() || p.len() > len {
        return false;
    }
    (0..len).any(|i| {
        let forward = p.iter().enumerate().all(|(j, &v)| c[(i + j) % len] == v);
        let backward = p
            .iter()
            .enumerate()
            .all(|(j, &v)| c[(i + len - j % len) % len] == v);
        forward || backward
    })
}
