//! Embedded planar multigraphs, their duals, and minimum cuts via dual cycles.
//!
//! Each edge `e = (u, v)` has two darts: `2e` leaves `u` and `2e + 1` leaves `v`.
//! For a loop the first listed occurrence in the rotation is `2e`. A rotation
//! system lists, for every vertex, its darts in cyclic order.

use crate::cycle::{edge_cycle, Mode, SolveStats};
use crate::graph::Multigraph;
use crate::oracle::{CostValue, SetFunction};
use crate::{element_set, ElementSet, Error, Result};

pub fn twin(dart: usize) -> usize {
    dart ^ 1
}

pub fn edge_of(dart: usize) -> usize {
    dart / 2
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedMultigraph {
    graph: Multigraph,
    rotation: Vec<Vec<usize>>,
    /// Position of each dart in its vertex's rotation.
    position: Vec<usize>,
}

impl EmbeddedMultigraph {
    /// Builds from per-vertex cyclic lists of edge ids.
    pub fn from_edge_rotation(graph: Multigraph, rotation: Vec<Vec<usize>>) -> Result<Self> {
        if rotation.len() != graph.vertex_count() {
            return Err(Error::InvalidArgument(format!(
                "rotation given for {} of {} vertices",
                rotation.len(),
                graph.vertex_count()
            )));
        }
        let mut used = vec![false; 2 * graph.edge_count()];
        let mut darts = Vec::with_capacity(rotation.len());
        for (v, ids) in rotation.iter().enumerate() {
            let mut list = Vec::with_capacity(ids.len());
            for &e in ids {
                if e >= graph.edge_count() {
                    return Err(Error::InvalidArgument(format!(
                        "rotation at {v} names unknown edge {e}"
                    )));
                }
                let (a, b) = graph.endpoints(e);
                let dart = if a == v && !used[2 * e] {
                    2 * e
                } else if b == v && !used[2 * e + 1] {
                    2 * e + 1
                } else {
                    return Err(Error::InvalidArgument(format!(
                        "rotation at {v} lists edge {e} too often or at the wrong vertex"
                    )));
                };
                used[dart] = true;
                list.push(dart);
            }
            darts.push(list);
        }
        Self::from_darts(graph, darts)
    }

    /// Builds from per-vertex cyclic lists of darts.
    pub fn from_darts(graph: Multigraph, rotation: Vec<Vec<usize>>) -> Result<Self> {
        let darts = 2 * graph.edge_count();
        let mut position = vec![usize::MAX; darts];
        if rotation.len() != graph.vertex_count() {
            return Err(Error::InvalidArgument(
                "rotation/vertex count mismatch".into(),
            ));
        }
        for (v, list) in rotation.iter().enumerate() {
            for (i, &d) in list.iter().enumerate() {
                if d >= darts || position[d] != usize::MAX {
                    return Err(Error::InvalidArgument(format!("dart {d} misplaced at {v}")));
                }
                let (a, b) = graph.endpoints(edge_of(d));
                if (if d % 2 == 0 { a } else { b }) != v {
                    return Err(Error::InvalidArgument(format!(
                        "dart {d} does not leave {v}"
                    )));
                }
                position[d] = i;
            }
        }
        if let Some(d) = position.iter().position(|&p| p == usize::MAX) {
            return Err(Error::InvalidArgument(format!(
                "edge {} is missing from the rotation",
                edge_of(d)
            )));
        }
        Ok(EmbeddedMultigraph {
            graph,
            rotation,
            position,
        })
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    /// Rotation as edge ids, the form used in files.
    pub fn edge_rotation(&self) -> Vec<Vec<usize>> {
        self.rotation
            .iter()
            .map(|l| l.iter().map(|&d| edge_of(d)).collect())
            .collect()
    }

    pub fn tail(&self, dart: usize) -> usize {
        let (a, b) = self.graph.endpoints(edge_of(dart));
        if dart.is_multiple_of(2) {
            a
        } else {
            b
        }
    }

    pub fn head(&self, dart: usize) -> usize {
        self.tail(twin(dart))
    }

    /// Next dart along the same face.
    pub fn next_in_face(&self, dart: usize) -> usize {
        let back = twin(dart);
        let list = &self.rotation[self.tail(back)];
        list[(self.position[back] + 1) % list.len()]
    }

    /// Faces as cyclic dart sequences, ordered by smallest dart.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; 2 * self.graph.edge_count()];
        let mut faces = Vec::new();
        for start in 0..seen.len() {
            if seen[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                face.push(d);
                d = self.next_in_face(d);
            }
            faces.push(face);
        }
        faces
    }

    /// Checks `n − m + F = 2` on every component.
    pub fn euler_check(&self) -> Result<()> {
        let comp = self.graph.components();
        let count = comp.iter().map(|&c| c + 1).max().unwrap_or(0);
        let mut score = vec![0i64; count];
        for &c in &comp {
            score[c] += 1;
        }
        for &(u, _) in self.graph.edges() {
            score[comp[u]] -= 1;
        }
        let mut has_edge = vec![false; count];
        for &(u, _) in self.graph.edges() {
            has_edge[comp[u]] = true;
        }
        for face in self.faces() {
            score[comp[self.tail(face[0])]] += 1;
        }
        for c in 0..count {
            if !has_edge[c] {
                score[c] += 1;
            }
            if score[c] != 2 {
                return Err(Error::NotPlanar(format!(
                    "component {c} has Euler characteristic {}",
                    score[c]
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct DualGraph {
    /// Dual vertex `i` is face `i`; dual edge `e` crosses primal edge `e`.
    pub embedded: EmbeddedMultigraph,
    pub faces: Vec<Vec<usize>>,
    pub face_of_dart: Vec<usize>,
}

impl DualGraph {
    pub fn graph(&self) -> &Multigraph {
        self.embedded.graph()
    }

    /// Primal edges whose dual is a loop.
    pub fn loops(&self) -> Vec<usize> {
        (0..self.graph().edge_count())
            .filter(|&e| self.face_of_dart[2 * e] == self.face_of_dart[2 * e + 1])
            .collect()
    }
}

/// Dual of a connected embedding, embedded itself so it can be dualised again.
pub fn build_dual(g: &EmbeddedMultigraph) -> Result<DualGraph> {
    g.euler_check()?;
    let faces = g.faces();
    let m = g.graph.edge_count();
    let mut face_of_dart = vec![0; 2 * m];
    for (i, face) in faces.iter().enumerate() {
        for &d in face {
            face_of_dart[d] = i;
        }
    }
    let mut dual = Multigraph::new(faces.len().max(1));
    for e in 0..m {
        dual.add_edge(face_of_dart[2 * e], face_of_dart[2 * e + 1])?;
    }
    let mut rotation = faces.clone();
    if rotation.is_empty() {
        rotation.push(Vec::new());
    }
    let embedded = EmbeddedMultigraph::from_darts(dual, rotation)?;
    Ok(DualGraph {
        embedded,
        faces,
        face_of_dart,
    })
}

/// Oracle on a subset of edges, renumbered, answering through the full oracle.
struct Restricted<'a, F> {
    base: &'a F,
    map: Vec<usize>,
}

impl<F: SetFunction> SetFunction for Restricted<'_, F> {
    type Value = F::Value;

    fn ground_size(&self) -> usize {
        self.map.len()
    }

    fn evaluate(&self, set: &ElementSet) -> F::Value {
        self.base.evaluate(&element_set(
            self.base.ground_size(),
            set.ones().map(|i| self.map[i]),
        ))
    }
}

#[derive(Debug, Clone)]
pub struct CutResult<V> {
    /// Cut edges, ascending.
    pub edges: Vec<usize>,
    pub cost: V,
    /// Whether the cut is a single bridge rather than a dual cycle.
    pub bridge: bool,
    pub stats: SolveStats,
}

/// Whether deleting `edges` leaves `g` disconnected.
pub fn disconnects(g: &Multigraph, edges: &[usize]) -> bool {
    let mut removed = vec![false; g.edge_count()];
    for &e in edges {
        removed[e] = true;
    }
    let rest = Multigraph::from_edges(
        g.vertex_count(),
        g.edges()
            .iter()
            .enumerate()
            .filter(|&(e, _)| !removed[e])
            .map(|(_, &uv)| uv),
    )
    .expect("same vertices");
    rest.component_count() > 1
}

/// Minimum-cost cut of a connected embedded graph under an edge oracle.
pub fn min_cut<F: SetFunction>(
    g: &EmbeddedMultigraph,
    f: &F,
    mode: Mode,
) -> Result<CutResult<F::Value>> {
    if g.graph.component_count() != 1 {
        return Err(Error::Disconnected);
    }
    let dual = build_dual(g)?;
    let ground = f.ground_size().max(g.graph.edge_count());
    let bridges = dual.loops();
    let mut stats = SolveStats::default();
    let mut best: Option<CutResult<F::Value>> = None;
    for &e in &bridges {
        let cost = f.evaluate(&element_set(ground, [e]));
        stats.queries += 1;
        if best.as_ref().is_none_or(|b| cost.definitely_less(b.cost)) {
            best = Some(CutResult {
                edges: vec![e],
                cost,
                bridge: true,
                stats: SolveStats::default(),
            });
        }
    }
    let map: Vec<usize> = (0..g.graph.edge_count())
        .filter(|e| bridges.binary_search(e).is_err())
        .collect();
    let remainder = Multigraph::from_edges(
        dual.graph().vertex_count(),
        map.iter().map(|&e| dual.graph().endpoints(e)),
    )?;
    match edge_cycle(
        &remainder,
        &Restricted {
            base: f,
            map: map.clone(),
        },
        mode,
    ) {
        Ok(r) => {
            stats.queries += r.stats.queries;
            stats.recursion_nodes += r.stats.recursion_nodes;
            stats.memo_hits += r.stats.memo_hits;
            stats.elapsed += r.stats.elapsed;
            if best
                .as_ref()
                .is_none_or(|b| !b.cost.definitely_less(r.cost))
            {
                let mut edges: Vec<usize> = r.cycle.edges().iter().map(|&i| map[i]).collect();
                edges.sort_unstable();
                best = Some(CutResult {
                    edges,
                    cost: r.cost,
                    bridge: false,
                    stats: SolveStats::default(),
                });
            }
        }
        Err(Error::NoCycle) => {}
        Err(e) => return Err(e),
    }
    let mut best = best.ok_or(Error::NoCut)?;
    if !disconnects(&g.graph, &best.edges) {
        return Err(Error::CutVerification(format!(
            "removing {:?} leaves the graph connected",
            best.edges
        )));
    }
    best.stats = stats;
    Ok(best)
}

/// Minimum of `f` over all edge sets crossing a bipartition of the vertices.
pub fn brute_force_min_cut<F: SetFunction>(g: &Multigraph, f: &F) -> Option<F::Value> {
    let n = g.vertex_count();
    assert!(n <= 20, "exhaustive bipartitions need n ≤ 20");
    if n < 2 {
        return None;
    }
    let ground = f.ground_size().max(g.edge_count());
    let mut best: Option<F::Value> = None;
    // Vertex n - 1 stays on side 0.
    for mask in 1u32..1 << (n - 1) {
        let crossing = g
            .edges()
            .iter()
            .enumerate()
            .filter(|&(_, &(u, v))| (mask >> u & 1) != (mask >> v & 1))
            .map(|(e, _)| e);
        let value = f.evaluate(&element_set(ground, crossing));
        if best.is_none_or(|b| value.definitely_less(b)) {
            best = Some(value);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Modular;

    fn triangle() -> EmbeddedMultigraph {
        let g = Multigraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        EmbeddedMultigraph::from_edge_rotation(g, vec![vec![0, 2], vec![1, 0], vec![2, 1]]).unwrap()
    }

    #[test]
    fn triangle_dual() {
        let d = build_dual(&triangle()).unwrap();
        assert_eq!(d.graph().vertex_count(), 2);
        assert_eq!(d.graph().edge_count(), 3);
        assert!(d.loops().is_empty());
        for &(a, b) in d.graph().edges() {
            assert_ne!(a, b);
        }
        let dd = build_dual(&d.embedded).unwrap();
        assert_eq!(dd.graph().vertex_count(), 3);
    }

    #[test]
    fn bridge_dual_is_loop() {
        let g = Multigraph::from_edges(2, [(0, 1)]).unwrap();
        let e = EmbeddedMultigraph::from_edge_rotation(g, vec![vec![0], vec![0]]).unwrap();
        let d = build_dual(&e).unwrap();
        assert_eq!(d.graph().vertex_count(), 1);
        assert_eq!(d.loops(), vec![0]);
    }

    #[test]
    fn square_dual() {
        let g = Multigraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let e = EmbeddedMultigraph::from_edge_rotation(
            g,
            vec![vec![0, 3], vec![1, 0], vec![2, 1], vec![3, 2]],
        )
        .unwrap();
        let d = build_dual(&e).unwrap();
        assert_eq!(d.graph().vertex_count(), 2);
        assert_eq!(d.graph().edge_count(), 4);
    }

    #[test]
    fn non_planar_rotation_rejected() {
        // K4 with a rotation that gives a torus embedding.
        let g =
            Multigraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let planar = EmbeddedMultigraph::from_edge_rotation(
            g.clone(),
            vec![vec![0, 1, 2], vec![0, 4, 3], vec![1, 3, 5], vec![2, 5, 4]],
        )
        .unwrap();
        assert!(planar.euler_check().is_ok());
        let twisted = EmbeddedMultigraph::from_edge_rotation(
            g,
            vec![vec![0, 1, 2], vec![0, 3, 4], vec![1, 3, 5], vec![2, 5, 4]],
        )
        .unwrap();
        assert!(matches!(build_dual(&twisted), Err(Error::NotPlanar(_))));
    }

    #[test]
    fn rotation_validation() {
        let g = Multigraph::from_edges(2, [(0, 1)]).unwrap();
        assert!(EmbeddedMultigraph::from_edge_rotation(g.clone(), vec![vec![0], vec![]]).is_err());
        assert!(EmbeddedMultigraph::from_edge_rotation(g, vec![vec![0, 0], vec![0]]).is_err());
    }

    #[test]
    fn loop_rotation() {
        let g = Multigraph::from_edges(1, [(0, 0)]).unwrap();
        let e = EmbeddedMultigraph::from_edge_rotation(g, vec![vec![0, 0]]).unwrap();
        assert_eq!(e.faces().len(), 2);
        e.euler_check().unwrap();
    }

    #[test]
    fn triangle_min_cut() {
        let f = Modular::new(vec![1i64, 2, 3]).unwrap();
        let r = min_cut(&triangle(), &f, Mode::Exact).unwrap();
        assert_eq!(r.cost, 3);
        assert_eq!(r.edges, vec![0, 1]);
        assert!(!r.bridge);
        assert_eq!(brute_force_min_cut(triangle().graph(), &f), Some(3));
    }

    fn two_triangles_with_bridge() -> EmbeddedMultigraph {
        let g = Multigraph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)])
            .unwrap();
        EmbeddedMultigraph::from_edge_rotation(
            g,
            vec![
                vec![0, 2],
                vec![1, 0],
                vec![2, 1, 6],
                vec![3, 5, 6],
                vec![4, 3],
                vec![5, 4],
            ],
        )
        .unwrap()
    }

    #[test]
    fn bridge_cut_when_cheap() {
        let g = two_triangles_with_bridge();
        let cheap = Modular::new(vec![3i64, 3, 3, 3, 3, 3, 5]).unwrap();
        let r = min_cut(&g, &cheap, Mode::Exact).unwrap();
        assert_eq!((r.edges.clone(), r.cost, r.bridge), (vec![6], 5, true));
        let dear = Modular::new(vec![1i64, 1, 1, 1, 1, 1, 5]).unwrap();
        let r = min_cut(&g, &dear, Mode::Exact).unwrap();
        assert_eq!(r.cost, 2);
        assert_eq!(brute_force_min_cut(g.graph(), &dear), Some(2));
    }

    #[test]
    fn zero_costs_and_disconnected() {
        let zero = Modular::new(vec![0i64; 7]).unwrap();
        assert_eq!(
            min_cut(&two_triangles_with_bridge(), &zero, Mode::Exact)
                .unwrap()
                .cost,
            0
        );
        let g = Multigraph::from_edges(3, [(0, 1)]).unwrap();
        let e = EmbeddedMultigraph::from_edge_rotation(g, vec![vec![0], vec![0], vec![]]).unwrap();
        assert!(matches!(
            min_cut(&e, &zero, Mode::Exact),
            Err(Error::Disconnected)
        ));
    }
}
