//! Seeded generators for test and experiment instances.
//!
//! Every generator draws only from the generator passed in, so a fixed seed
//! gives byte-identical output.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Multigraph;
use crate::io::{write_function, write_graph, write_wfh, FunctionSpec, GraphFile, Weight};
use crate::oracle::Modular;
use crate::planar::EmbeddedMultigraph;
use crate::wfh::WfhInstance;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Simple graph on `n` vertices, each pair joined with probability `density`,
/// redrawn until it has a cycle. Needs `n ≥ 3`.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> Multigraph {
    assert!(n >= 3, "a simple graph with a cycle needs three vertices");
    loop {
        let mut g = Multigraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(density) {
                    g.add_edge(u, v).expect("in range");
                }
            }
        }
        if g.edge_count() > g.vertex_count() - g.component_count() {
            return g;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    Modular,
    Coverage,
    GraphicRank,
    PartitionMatroid,
}

impl OracleKind {
    pub const ALL: [OracleKind; 4] = [
        OracleKind::Modular,
        OracleKind::Coverage,
        OracleKind::GraphicRank,
        OracleKind::PartitionMatroid,
    ];
}

/// Integer-valued function spec over `ground` elements.
pub fn random_function<R: Rng + ?Sized>(
    rng: &mut R,
    kind: OracleKind,
    ground: usize,
) -> FunctionSpec {
    match kind {
        OracleKind::Modular => FunctionSpec::Modular(
            (0..ground)
                .map(|x| (x, Weight::Int(rng.gen_range(0..10))))
                .collect(),
        ),
        OracleKind::Coverage => {
            let palette = (2 * ground / 3).max(1);
            let mut colors = Vec::with_capacity(ground);
            for x in 0..ground {
                if rng.gen_bool(0.9) {
                    colors.push((x, rng.gen_range(0..palette)));
                }
            }
            FunctionSpec::Colors(colors)
        }
        OracleKind::GraphicRank => {
            let n = (ground / 2 + 1).max(2);
            let mut g = Multigraph::new(n);
            for _ in 0..ground {
                g.add_edge(rng.gen_range(0..n), rng.gen_range(0..n))
                    .expect("in range");
            }
            FunctionSpec::GraphicRank(Some(g))
        }
        OracleKind::PartitionMatroid => {
            let mut elems: Vec<usize> = (0..ground).filter(|_| rng.gen_bool(0.85)).collect();
            elems.shuffle(rng);
            let mut blocks = Vec::new();
            while !elems.is_empty() {
                let size = rng.gen_range(1..=elems.len().min(4));
                let mut block: Vec<usize> = elems.drain(..size).collect();
                block.sort_unstable();
                blocks.push((rng.gen_range(1..=size), block));
            }
            FunctionSpec::PartitionMatroid(blocks)
        }
    }
}

/// Modular function with real weights in `[0, 10)`.
pub fn random_real_modular<R: Rng + ?Sized>(rng: &mut R, ground: usize) -> Modular<f64> {
    Modular::new((0..ground).map(|_| rng.gen_range(0.0..10.0)).collect()).expect("nonnegative")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WfhParams {
    pub k: usize,
    pub universe: usize,
    pub families: usize,
    pub max_family: usize,
    /// Hide a solution: one set per family is drawn inside a fixed union.
    pub planted: bool,
}

/// `k`-wide instance. Each family grows by random sets, redrawing any set that
/// would break wideness.
pub fn random_wfh<R: Rng + ?Sized>(rng: &mut R, params: WfhParams) -> WfhInstance {
    let WfhParams {
        k,
        universe,
        families,
        max_family,
        planted,
    } = params;
    let all: Vec<usize> = (0..universe).collect();
    let hidden: Vec<usize> = {
        let size = rng.gen_range(0..=k.min(universe));
        let mut h: Vec<usize> = all.choose_multiple(rng, size).copied().collect();
        h.sort_unstable();
        h
    };
    let wide_with = |family: &[Vec<usize>], s: &[usize]| {
        family.iter().all(|a| {
            let mut u: Vec<usize> = a.iter().chain(s).copied().collect();
            u.sort_unstable();
            u.dedup();
            u.len() > k
        })
    };
    let mut out = Vec::with_capacity(families);
    for _ in 0..families {
        let count = rng.gen_range(1..=max_family.max(1));
        let mut family: Vec<Vec<usize>> = Vec::with_capacity(count);
        if planted {
            let size = rng.gen_range(0..=hidden.len());
            let mut s: Vec<usize> = hidden.choose_multiple(rng, size).copied().collect();
            s.sort_unstable();
            family.push(s);
        }
        let mut attempts = 0;
        while family.len() < count && attempts < 64 {
            attempts += 1;
            let size = rng.gen_range(0..=(k + 1).min(universe));
            let mut s: Vec<usize> = all.choose_multiple(rng, size).copied().collect();
            s.sort_unstable();
            if wide_with(&family, &s) {
                family.push(s);
            }
        }
        if family.is_empty() {
            let mut s: Vec<usize> = all
                .choose_multiple(rng, (k + 1).min(universe))
                .copied()
                .collect();
            s.sort_unstable();
            family.push(s);
        }
        family.shuffle(rng);
        out.push(family);
    }
    WfhInstance::new(k, universe, out).expect("elements in range")
}

/// Connected embedded planar multigraph on `n ≥ 1` vertices: a random tree
/// grown leaf by leaf, then `chords` edges each drawn inside one face.
pub fn random_planar<R: Rng + ?Sized>(rng: &mut R, n: usize, chords: usize) -> EmbeddedMultigraph {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut rotation: Vec<Vec<usize>> = vec![Vec::new()];
    for w in 1..n.max(1) {
        let v = rng.gen_range(0..w);
        let e = edges.len();
        edges.push((v, w));
        let at = rng.gen_range(0..=rotation[v].len());
        rotation[v].insert(at, 2 * e);
        rotation.push(vec![2 * e + 1]);
    }
    let build = |edges: &[(usize, usize)], rotation: &[Vec<usize>]| {
        let g = Multigraph::from_edges(rotation.len(), edges.iter().copied()).expect("in range");
        EmbeddedMultigraph::from_darts(g, rotation.to_vec()).expect("consistent rotation")
    };
    for _ in 0..chords {
        let current = build(&edges, &rotation);
        let faces = current.faces();
        if faces.is_empty() {
            edges.push((0, 0));
            rotation[0] = vec![0, 1];
            continue;
        }
        let face = faces.choose(rng).expect("nonempty");
        let d1 = *face.choose(rng).expect("nonempty face");
        let d2 = *face.choose(rng).expect("nonempty face");
        // A corner after dart d sits at head(d), just after twin(d) in rotation.
        let (a, b) = (current.head(d1), current.head(d2));
        let e = edges.len();
        edges.push((a, b));
        let slot = |rotation: &[Vec<usize>], d: usize, v: usize| {
            rotation[v]
                .iter()
                .position(|&x| x == d ^ 1)
                .expect("twin present")
                + 1
        };
        if d1 == d2 {
            let at = slot(&rotation, d1, a);
            rotation[a].insert(at, 2 * e + 1);
            rotation[a].insert(at, 2 * e);
        } else {
            let at = slot(&rotation, d1, a);
            rotation[a].insert(at, 2 * e);
            let at = slot(&rotation, d2, b);
            rotation[b].insert(at, 2 * e + 1);
        }
    }
    let out = build(&edges, &rotation);
    debug_assert!(out.euler_check().is_ok());
    out
}

/// `G(k, p)` as a graph file with its `f` or `f_C` spec.
pub fn lower_bound_instance(
    k: usize,
    p: usize,
    cycle: Option<Vec<usize>>,
) -> (GraphFile, FunctionSpec) {
    let mut g = Multigraph::new(k + 1);
    for i in 0..k {
        for _ in 0..p {
            g.add_edge(i, i + 1).expect("in range");
        }
    }
    g.add_edge(0, k).expect("in range");
    (
        GraphFile {
            graph: g,
            rotation: None,
        },
        FunctionSpec::LowerBound { k, p, cycle },
    )
}

/// A vertex-cost cycle instance.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleCase {
    pub graph: Multigraph,
    pub function: FunctionSpec,
}

/// `count` cycle instances with `3 ≤ n ≤ max_n`, cycling through the oracle
/// kinds; every fifth instance is modular with real weights instead.
pub fn cycle_corpus(seed: u64, count: usize, max_n: usize) -> Vec<CycleCase> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let n = r.gen_range(3..=max_n.max(3));
            let density = r.gen_range(0.3..0.8);
            let graph = random_graph(&mut r, n, density);
            let function = if i % 5 == 4 {
                FunctionSpec::Modular(
                    (0..n)
                        .map(|x| (x, Weight::Real(r.gen_range(0.0..10.0))))
                        .collect(),
                )
            } else {
                random_function(&mut r, OracleKind::ALL[i % 4], n)
            };
            CycleCase { graph, function }
        })
        .collect()
}

/// An edge-cost cut instance.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarCase {
    pub graph: EmbeddedMultigraph,
    pub function: FunctionSpec,
}

/// `count` connected embedded planar multigraphs with `2 ≤ n ≤ max_n`.
pub fn planar_corpus(seed: u64, count: usize, max_n: usize) -> Vec<PlanarCase> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let n = r.gen_range(2..=max_n.max(2));
            let chords = r.gen_range(0..=n + 3);
            let graph = random_planar(&mut r, n, chords);
            let m = graph.graph().edge_count();
            let function = random_function(&mut r, OracleKind::ALL[i % 4], m);
            PlanarCase { graph, function }
        })
        .collect()
}

/// Size bounds for [`wfh_corpus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WfhBounds {
    pub max_k: usize,
    pub universe: usize,
    pub max_families: usize,
    pub max_family: usize,
}

/// `count` instances; even positions carry a planted solution.
pub fn wfh_corpus(seed: u64, count: usize, bounds: WfhBounds) -> Vec<WfhInstance> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let params = WfhParams {
                k: r.gen_range(1..=bounds.max_k.max(1)),
                universe: bounds.universe,
                families: r.gen_range(1..=bounds.max_families.max(1)),
                max_family: r.gen_range(1..=bounds.max_family.max(1)),
                planted: i % 2 == 0,
            };
            random_wfh(&mut r, params)
        })
        .collect()
}

/// Canonical text of a whole corpus, for digests.
pub fn serialize_cycle_corpus(cases: &[CycleCase]) -> String {
    cases
        .iter()
        .map(|c| {
            let file = GraphFile {
                graph: c.graph.clone(),
                rotation: None,
            };
            format!(
                "{}---\n{}===\n",
                write_graph(&file),
                write_function(&c.function)
            )
        })
        .collect()
}

pub fn serialize_planar_corpus(cases: &[PlanarCase]) -> String {
    cases
        .iter()
        .map(|c| {
            let file = GraphFile {
                graph: c.graph.graph().clone(),
                rotation: Some(c.graph.edge_rotation()),
            };
            format!(
                "{}---\n{}===\n",
                write_graph(&file),
                write_function(&c.function)
            )
        })
        .collect()
}

pub fn serialize_wfh_corpus(cases: &[WfhInstance]) -> String {
    cases
        .iter()
        .map(|w| format!("{}===\n", write_wfh(w)))
        .collect()
}
