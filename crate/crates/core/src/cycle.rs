//! Minimum-cost cycles under monotone submodular vertex or edge costs.
//!
//! [`cycle_from_root`] is a Dijkstra-style search whose labels are oracle
//! values of tree paths; it stops at the first vertex that closes a cycle and
//! returns that cycle together with the tree grown so far. Running it from every
//! root gives [`two_approx`]. [`find_cycle`] branches on the paths of
//! [`build_path_family`], contracting the oracle by each path and recursing with
//! one level less, which yields a `(1 + 2^-k)` approximation at depth `k`.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::graph::{subdivide, two_core, Cycle, Multigraph, VertexPath};
use crate::oracle::{Contracted, CostValue, CountingOracle, SetFunction};
use crate::{element_set, ElementSet, Error, Result};

/// A tree grown by [`cycle_from_root`], stored as parent pointers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    root: usize,
    /// `parent[z]` is `Some` iff `z` is in the tree; the root is its own parent.
    parent: Vec<Option<usize>>,
}

impl RootedTree {
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn contains(&self, v: usize) -> bool {
        self.parent.get(v).is_some_and(|p| p.is_some())
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent.get(v).copied().flatten()
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.parent.len()).filter(|&v| self.contains(v))
    }

    pub fn size(&self) -> usize {
        self.members().count()
    }

    /// The tree path `root, …, x`.
    pub fn path_to(&self, x: usize) -> Vec<usize> {
        let mut path = vec![x];
        let mut cur = x;
        while cur != self.root {
            cur = self.parent[cur].expect("path_to called on a tree member");
            path.push(cur);
        }
        path.reverse();
        path
    }
}

/// Output of [`cycle_from_root`].
#[derive(Debug, Clone)]
pub struct RootedTreeResult<V> {
    pub root: usize,
    pub cycle: Cycle,
    pub cycle_cost: V,
    pub tree: RootedTree,
    /// Label of the vertex at which the search stopped.
    pub h_star: V,
}

/// Paths `(tree path root..x) + y` with `x` in the tree and `y` a neighbour outside.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PathFamily {
    pub paths: Vec<VertexPath>,
}

impl PathFamily {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Paths with pairwise distinct vertex sets, first occurrence kept.
    pub fn distinct_vertex_sets(&self) -> Vec<&VertexPath> {
        let mut seen = HashSet::new();
        self.paths
            .iter()
            .filter(|p| {
                let mut key = p.vertices().to_vec();
                key.sort_unstable();
                seen.insert(key)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Queries to the caller's oracle.
    pub queries: u64,
    /// Expanded recursion nodes (calls answered from the memo table excluded).
    pub recursion_nodes: u64,
    pub memo_hits: u64,
    pub elapsed: Duration,
}

impl SolveStats {
    fn absorb(&mut self, other: &SolveStats) {
        self.queries += other.queries;
        self.recursion_nodes += other.recursion_nodes;
        self.memo_hits += other.memo_hits;
        self.elapsed += other.elapsed;
    }
}

#[derive(Debug, Clone)]
pub struct CycleResult<V> {
    pub cycle: Cycle,
    pub cost: V,
    pub stats: SolveStats,
}

/// Approximation parameter, held as an exact rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Epsilon {
    num: u128,
    den: u128,
}

impl Epsilon {
    pub fn from_ratio(num: u128, den: u128) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidArgument("epsilon must be positive".into()));
        }
        Ok(Epsilon { num, den })
    }

    /// Exact binary value of a positive finite float.
    pub fn from_f64(eps: f64) -> Result<Self> {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "epsilon must be positive, got {eps}"
            )));
        }
        let mut num = eps;
        let mut den: u128 = 1;
        while num.fract() != 0.0 {
            if den >= 1 << 100 {
                return Err(Error::InvalidArgument(format!(
                    "epsilon {eps} is too small"
                )));
            }
            num *= 2.0;
            den <<= 1;
        }
        if num >= 2f64.powi(120) {
            return Err(Error::InvalidArgument(format!(
                "epsilon {eps} is too large"
            )));
        }
        Epsilon::from_ratio(num as u128, den)
    }

    /// Smallest `k ≥ 0` with `2^k ≥ 1/ε`.
    pub fn depth(&self) -> usize {
        (0..128)
            .find(|&k| match self.num.checked_shl(k as u32) {
                Some(v) if v >> k == self.num => v >= self.den,
                _ => true,
            })
            .unwrap_or(128)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl FromStr for Epsilon {
    type Err = Error;

    /// Accepts decimals (`0.3`, `2`, `1e-2` is not supported) and ratios (`1/3`).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse epsilon {s:?}"));
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let num = a.trim().parse::<u128>().map_err(|_| bad())?;
            let den = b.trim().parse::<u128>().map_err(|_| bad())?;
            return Epsilon::from_ratio(num, den);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() && frac.is_empty()
            || !int.chars().all(|c| c.is_ascii_digit())
            || !frac.chars().all(|c| c.is_ascii_digit())
            || frac.len() > 30
        {
            return Err(bad());
        }
        let den = 10u128.pow(frac.len() as u32);
        let int_part = if int.is_empty() {
            0
        } else {
            int.parse::<u128>().map_err(|_| bad())?
        };
        let frac_part = if frac.is_empty() {
            0
        } else {
            frac.parse::<u128>().map_err(|_| bad())?
        };
        let num = int_part
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac_part))
            .ok_or_else(bad)?;
        Epsilon::from_ratio(num, den)
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Approximate(Epsilon),
    Exact,
}

struct QueueEntry<V> {
    label: V,
    vertex: usize,
}

impl<V: CostValue> PartialEq for QueueEntry<V> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<V: CostValue> Eq for QueueEntry<V> {}

impl<V: CostValue> PartialOrd for QueueEntry<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<V: CostValue> Ord for QueueEntry<V> {
    // reversed: BinaryHeap is a max-heap, we pop the smallest (label, vertex)
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .label
            .total_order(&self.label)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

/// Rooted search from `root`. The graph must be simple and `root`'s component
/// must contain a cycle.
pub fn cycle_from_root<F: SetFunction>(
    g: &Multigraph,
    root: usize,
    f: &F,
) -> Result<RootedTreeResult<F::Value>> {
    g.ensure_simple()?;
    if root >= g.vertex_count() {
        return Err(Error::InvalidArgument(format!("root {root} out of range")));
    }
    rooted_search(g, root, f)
}

fn rooted_search<F: SetFunction>(
    g: &Multigraph,
    root: usize,
    f: &F,
) -> Result<RootedTreeResult<F::Value>> {
    let n = g.vertex_count();
    let ground = f.ground_size().max(n);
    let mut label: Vec<Option<F::Value>> = vec![None; n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut popped = vec![false; n];
    let mut path_sets: Vec<Option<ElementSet>> = vec![None; n];
    let mut heap = BinaryHeap::new();

    parent[root] = Some(root);
    let root_label = f.evaluate(&element_set(ground, [root]));
    label[root] = Some(root_label);
    heap.push(QueueEntry {
        label: root_label,
        vertex: root,
    });

    while let Some(QueueEntry {
        label: d,
        vertex: x,
    }) = heap.pop()
    {
        if popped[x] || label[x].is_none_or(|cur| cur.total_order(&d) != Ordering::Equal) {
            continue;
        }
        popped[x] = true;
        let px = parent[x];

        // closing neighbour: any labelled y ≠ p(x) with d(y) ≤ d(x)
        let closing = g
            .incidences(x)
            .iter()
            .map(|&(y, _)| y)
            .filter(|&y| Some(y) != px)
            .filter_map(|y| {
                let dy = label[y]?;
                (y != x && (popped[y] || dy.at_most(d))).then_some((dy, y))
            })
            .min_by(|a, b| a.0.total_order(&b.0).then(a.1.cmp(&b.1)));

        if let Some((_, y)) = closing {
            let cycle = close_cycle(g, &parent, x, y)?;
            let cycle_set = element_set(ground, cycle.vertices().iter().copied());
            let cycle_cost = f.evaluate(&cycle_set);
            let tree = grown_tree(root, &parent, &label, &popped, x, d);
            return Ok(RootedTreeResult {
                root,
                cycle,
                cycle_cost,
                tree,
                h_star: d,
            });
        }

        let mut px_set = match px {
            Some(p) if p != x => path_sets[p].clone().expect("parents are popped first"),
            _ => ElementSet::with_capacity(ground),
        };
        px_set.insert(x);
        for &(y, _) in g.incidences(x) {
            if Some(y) == px || popped[y] {
                continue;
            }
            let mut with_y = px_set.clone();
            with_y.insert(y);
            let value = f.evaluate(&with_y);
            let improves = label[y].is_none_or(|dy| value.total_order(&dy) == Ordering::Less);
            if improves {
                label[y] = Some(value);
                parent[y] = Some(x);
                heap.push(QueueEntry {
                    label: value,
                    vertex: y,
                });
            }
        }
        path_sets[x] = Some(px_set);
    }
    Err(Error::NoCycleReachable(root))
}

/// Cycle through the edge `xy` and the tree paths of `x` and `y`, closed at
/// their lowest common ancestor.
fn close_cycle(g: &Multigraph, parent: &[Option<usize>], x: usize, y: usize) -> Result<Cycle> {
    let ancestors = |mut v: usize| {
        let mut chain = vec![v];
        while let Some(p) = parent[v] {
            if p == v {
                break;
            }
            chain.push(p);
            v = p;
        }
        chain
    };
    let x_chain = ancestors(x);
    let y_chain = ancestors(y);
    let on_x: HashMap<usize, usize> = x_chain.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let (y_idx, lca_idx) = y_chain
        .iter()
        .enumerate()
        .find_map(|(j, v)| on_x.get(v).map(|&i| (j, i)))
        .expect("both tree paths start at the root");
    let mut vertices: Vec<usize> = x_chain[..=lca_idx].to_vec();
    vertices.extend(y_chain[..y_idx].iter().rev());
    Cycle::from_vertices(g, vertices)
}

fn grown_tree<V: CostValue>(
    root: usize,
    parent: &[Option<usize>],
    label: &[Option<V>],
    popped: &[bool],
    stop: usize,
    h_star: V,
) -> RootedTree {
    let n = parent.len();
    let mut member = vec![false; n];
    member[root] = true;
    for z in 0..n {
        let below = label[z].is_some_and(|dz| dz.total_order(&h_star) == Ordering::Less);
        if z != stop && popped[z] && below {
            let mut cur = z;
            while !member[cur] {
                member[cur] = true;
                cur = parent[cur].expect("popped vertices have parents");
            }
        }
    }
    RootedTree {
        root,
        parent: (0..n)
            .map(|z| if member[z] { parent[z] } else { None })
            .collect(),
    }
}

/// Cycle and tree family of one approximation round.
#[derive(Debug, Clone)]
pub struct TwoApprox<V> {
    pub cycle: Cycle,
    pub cost: V,
    /// Result per root; `None` for roots on acyclic components.
    pub roots: Vec<Option<RootedTreeResult<V>>>,
}

impl<V> TwoApprox<V> {
    pub fn trees(&self) -> Vec<Option<&RootedTree>> {
        self.roots
            .iter()
            .map(|r| r.as_ref().map(|r| &r.tree))
            .collect()
    }
}

fn approx_round<F: SetFunction>(g: &Multigraph, f: &F) -> Result<TwoApprox<F::Value>> {
    let cyclic = g.on_cyclic_component();
    let mut roots = Vec::with_capacity(g.vertex_count());
    let mut best: Option<(Cycle, F::Value)> = None;
    for (v, &on_cycle) in cyclic.iter().enumerate() {
        if !on_cycle {
            roots.push(None);
            continue;
        }
        let r = rooted_search(g, v, f)?;
        let better = best
            .as_ref()
            .is_none_or(|(_, c)| r.cycle_cost.total_order(c) == Ordering::Less);
        if better {
            best = Some((r.cycle.clone(), r.cycle_cost));
        }
        roots.push(Some(r));
    }
    let (cycle, cost) = best.ok_or(Error::NoCycle)?;
    Ok(TwoApprox { cycle, cost, roots })
}

fn ensure_has_cycle(g: &Multigraph) -> Result<()> {
    g.ensure_simple()?;
    if two_core(g).is_empty() {
        return Err(Error::NoCycle);
    }
    Ok(())
}

/// Minimum-cost cycle over all roots; cost at most twice the optimum.
#[allow(clippy::type_complexity)]
pub fn two_approx<F: SetFunction>(
    g: &Multigraph,
    f: &F,
) -> Result<(CycleResult<F::Value>, TwoApprox<F::Value>)> {
    ensure_has_cycle(g)?;
    let start = Instant::now();
    let counted = CountingOracle::new(f);
    let round = approx_round(g, &counted)?;
    let result = CycleResult {
        cycle: round.cycle.clone(),
        cost: round.cost,
        stats: SolveStats {
            queries: counted.queries(),
            recursion_nodes: 1,
            memo_hits: 0,
            elapsed: start.elapsed(),
        },
    };
    Ok((result, round))
}

/// For every root `v` with a tree, every `y` outside it and every tree
/// neighbour `x` of `y`: the path `(v..x) + y`.
pub fn build_path_family(g: &Multigraph, trees: &[Option<&RootedTree>]) -> PathFamily {
    let mut paths = Vec::new();
    for tree in trees.iter().flatten() {
        for y in 0..g.vertex_count() {
            if tree.contains(y) {
                continue;
            }
            for &(x, _) in g.incidences(y) {
                if tree.contains(x) {
                    let mut path = tree.path_to(x);
                    path.push(y);
                    paths.push(VertexPath(path));
                }
            }
        }
    }
    PathFamily { paths }
}

/// Branch pruning for [`find_cycle_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Pruning {
    /// Expand every path of the family.
    Off,
    /// Skip work that cannot improve the guarantee of any open call: a call
    /// stops once its best cycle is within `1 + 2^-depth` of a lower bound on
    /// the optimum derived from the `h*` values, and a sub-search is abandoned once some ancestor's best
    /// is within that ancestor's factor of the cost of every cycle through
    /// the paths pinned since it.
    #[default]
    Bounds,
}

struct Search<'g, 'f, F: SetFunction> {
    graph: &'g Multigraph,
    ground: usize,
    pruning: Pruning,
    memo: HashMap<(ElementSet, usize), (Cycle, F::Value)>,
    /// Calls currently on the recursion stack, shallowest first.
    open: Vec<Open<'f, F>>,
    nodes: u64,
    memo_hits: u64,
}

/// Every cycle through `v` costs at least `h*(v)`, so the optimum is at least
/// the smallest `t` for which the vertices with `h* ≤ t` induce a cycle.
fn cycle_lower_bound<V: CostValue>(g: &Multigraph, round: &TwoApprox<V>) -> V {
    let mut order: Vec<(usize, V)> = round
        .roots
        .iter()
        .enumerate()
        .filter_map(|(v, r)| r.as_ref().map(|r| (v, r.h_star)))
        .collect();
    order.sort_by(|a, b| a.1.total_order(&b.1).then(a.0.cmp(&b.0)));
    let n = g.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut active = vec![false; n];
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (v, h) in order {
        active[v] = true;
        for &(u, _) in g.incidences(v) {
            if !active[u] {
                continue;
            }
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a == b {
                return h;
            }
            parent[a] = b;
        }
    }
    V::ZERO
}

/// A call on the recursion stack with its best cycle so far.
struct Open<'f, F: SetFunction> {
    view: Contracted<&'f F>,
    depth: usize,
    best: Cycle,
    cost: F::Value,
}

struct Outcome<V> {
    best: Option<(Cycle, V)>,
    /// Shallowest open call whose bound cut this subtree short, if any.
    cut_by: Option<usize>,
}

impl<'f, F: SetFunction> Search<'_, 'f, F> {
    /// Hands a cycle found in the current call to every open call that
    /// values it lower than its own best.
    fn offer(&mut self, cycle: &Cycle) {
        let set = element_set(self.ground, cycle.vertices().iter().copied());
        for open in self.open.iter_mut() {
            let cost = open.view.evaluate(&set);
            if cost.definitely_less(open.cost) {
                open.best = cycle.clone();
                open.cost = cost;
            }
        }
    }

    /// First open call that nothing below `view` can help. A cycle
    /// containing the vertices pinned since call `s` costs at least the
    /// cost of those vertices in `s`, plus `lower`, and at least `h*(v)` in
    /// the current frame for each such vertex `v`.
    fn cut(
        &self,
        view: &Contracted<&'f F>,
        lower: F::Value,
        round: Option<&TwoApprox<F::Value>>,
    ) -> Option<usize> {
        self.open.iter().position(|open| {
            let mut bound = lower;
            if let Some(round) = round {
                for v in view.pinned().ones() {
                    if open.view.pinned().contains(v) {
                        continue;
                    }
                    if let Some(Some(r)) = round.roots.get(v) {
                        if bound.total_order(&r.h_star) == Ordering::Less {
                            bound = r.h_star;
                        }
                    }
                }
            }
            let pinned = (view.offset() - open.view.offset()).clamp_nonneg();
            open.cost.within_factor(pinned + bound, open.depth)
        })
    }

    /// Cheap form of [`Self::cut`] using rooted searches from the vertices
    /// pinned by the last step only.
    fn cut_by_new_vertices(&self, view: &Contracted<&'f F>) -> Result<Option<usize>> {
        let Some(parent) = self.open.last() else {
            return Ok(None);
        };
        let mut bound = F::Value::ZERO;
        for v in view.pinned().ones() {
            if parent.view.pinned().contains(v) || v >= self.graph.vertex_count() {
                continue;
            }
            let h = rooted_search(self.graph, v, view)?.h_star;
            if bound.total_order(&h) == Ordering::Less {
                bound = h;
            }
        }
        Ok(self.open.iter().position(|open| {
            let pinned = (view.offset() - open.view.offset()).clamp_nonneg();
            open.cost.within_factor(pinned + bound, open.depth)
        }))
    }

    fn run(&mut self, view: Contracted<&'f F>, depth: usize) -> Result<Outcome<F::Value>> {
        let key = (view.pinned().clone(), depth);
        if let Some(hit) = self.memo.get(&key).cloned() {
            self.memo_hits += 1;
            self.offer(&hit.0);
            return Ok(Outcome {
                best: Some(hit),
                cut_by: None,
            });
        }
        let prune = self.pruning == Pruning::Bounds;
        if prune {
            if let Some(s) = self.cut(&view, F::Value::ZERO, None) {
                return Ok(Outcome {
                    best: None,
                    cut_by: Some(s),
                });
            }
        }
        if prune {
            if let Some(s) = self.cut_by_new_vertices(&view)? {
                return Ok(Outcome {
                    best: None,
                    cut_by: Some(s),
                });
            }
        }
        self.nodes += 1;
        let round = approx_round(self.graph, &view)?;
        self.offer(&round.cycle);
        let lower = cycle_lower_bound(self.graph, &round);
        if prune {
            if let Some(s) = self.cut(&view, lower, Some(&round)) {
                return Ok(Outcome {
                    best: Some((round.cycle.clone(), round.cost)),
                    cut_by: Some(s),
                });
            }
        }
        let here = self.open.len();
        self.open.push(Open {
            view,
            depth,
            best: round.cycle.clone(),
            cost: round.cost,
        });
        let mut cut_by: Option<usize> = None;
        if round.cost.is_positive() && depth > 0 {
            let family = build_path_family(self.graph, &round.trees());
            for path in family.distinct_vertex_sets() {
                if prune && self.open[here].cost.within_factor(lower, depth) {
                    break;
                }
                let pin = element_set(self.ground, path.vertices().iter().copied());
                let child = self.open[here].view.contract(&pin);
                let outcome = self.run(child, depth - 1)?;
                if let Some(s) = outcome.cut_by.filter(|&s| s < here) {
                    cut_by = Some(cut_by.map_or(s, |c| c.min(s)));
                }
            }
        }
        let open = self.open.pop().expect("pushed above");
        let best = (open.best, open.cost);
        if cut_by.is_none() {
            self.memo.insert(key, best.clone());
        }
        Ok(Outcome {
            best: Some(best),
            cut_by,
        })
    }
}

/// Recursive branching to depth `depth`; cost at most `(1 + 2^-depth)·OPT`.
///
/// Uses [`Pruning::Bounds`].
pub fn find_cycle<F: SetFunction>(
    g: &Multigraph,
    f: &F,
    depth: usize,
) -> Result<CycleResult<F::Value>> {
    find_cycle_with(g, f, depth, Pruning::default())
}

/// [`find_cycle`] with an explicit pruning rule.
///
/// Sub-searches are memoised on their pinned vertex set, which determines the
/// contracted oracle completely, so memoisation does not change the result.
pub fn find_cycle_with<F: SetFunction>(
    g: &Multigraph,
    f: &F,
    depth: usize,
    pruning: Pruning,
) -> Result<CycleResult<F::Value>> {
    ensure_has_cycle(g)?;
    let start = Instant::now();
    let counted = CountingOracle::new(f);
    let ground = f.ground_size().max(g.vertex_count());
    let mut search = Search::<CountingOracle<&F>> {
        graph: g,
        ground,
        pruning,
        memo: HashMap::new(),
        open: Vec::new(),
        nodes: 0,
        memo_hits: 0,
    };
    let root = Contracted::identity(&counted);
    let (cycle, cost) = search
        .run(root, depth)?
        .best
        .expect("the root is never cut");
    Ok(CycleResult {
        cycle,
        cost,
        stats: SolveStats {
            queries: counted.queries(),
            recursion_nodes: search.nodes,
            memo_hits: search.memo_hits,
            elapsed: start.elapsed(),
        },
    })
}

/// `(1 + ε)`-approximation: [`find_cycle`] at depth `⌈log₂ 1/ε⌉`.
pub fn ptas<F: SetFunction>(
    g: &Multigraph,
    f: &F,
    epsilon: Epsilon,
) -> Result<CycleResult<F::Value>> {
    find_cycle(g, f, epsilon.depth())
}

/// Smallest `k` with `2^k ≥ w + 1`.
fn exact_depth(w: u64) -> usize {
    (0..64).find(|&k| (1u128 << k) > w as u128).unwrap_or(64)
}

/// Optimal cycle for integer-valued oracles.
///
/// A depth-one run gives `w` with `OPT ≤ w ≤ 2·OPT`; rerunning at depth
/// `⌈log₂(w + 1)⌉` then has error below one.
pub fn exact_integer<F: SetFunction>(g: &Multigraph, f: &F) -> Result<CycleResult<F::Value>> {
    if !F::Value::INTEGER {
        return Err(Error::InvalidArgument(
            "exact search needs an integer-valued oracle".into(),
        ));
    }
    let first = find_cycle(g, f, 1)?;
    if !first.cost.is_positive() {
        return Ok(first);
    }
    let w = first.cost.to_f64() as u64;
    let mut second = find_cycle(g, f, exact_depth(w))?;
    second.stats.absorb(&first.stats);
    Ok(second)
}

/// Vertex oracle on a subdivision: `g(X) = f({e(v) : v ∈ X subdivision vertex})`.
pub struct LiftedEdgeOracle<F> {
    base: F,
    original_vertices: usize,
    edges: usize,
}

impl<F: SetFunction> LiftedEdgeOracle<F> {
    pub fn new(base: F, original_vertices: usize, edges: usize) -> Self {
        LiftedEdgeOracle {
            base,
            original_vertices,
            edges,
        }
    }
}

impl<F: SetFunction> SetFunction for LiftedEdgeOracle<F> {
    type Value = F::Value;

    fn ground_size(&self) -> usize {
        self.original_vertices + self.edges
    }

    fn evaluate(&self, set: &ElementSet) -> F::Value {
        let edges = element_set(
            self.base.ground_size().max(self.edges),
            set.ones()
                .filter(|&v| v >= self.original_vertices)
                .map(|v| v - self.original_vertices),
        );
        self.base.evaluate(&edges)
    }
}

/// Edge-cost cycle on a loop-free multigraph via the subdivision.
///
/// The returned cycle references the input's vertex and edge ids.
pub fn edge_cycle<F: SetFunction>(
    g: &Multigraph,
    f: &F,
    mode: Mode,
) -> Result<CycleResult<F::Value>> {
    let start = Instant::now();
    let sub = subdivide(g)?;
    let counted = CountingOracle::new(f);
    let lifted = LiftedEdgeOracle::new(&counted, g.vertex_count(), g.edge_count());
    let mut result = match mode {
        Mode::Approximate(eps) => ptas(&sub.graph, &lifted, eps)?,
        Mode::Exact => exact_integer(&sub.graph, &lifted)?,
    };
    result.cycle = sub.lift_cycle(&result.cycle);
    result.stats.queries = counted.queries();
    result.stats.elapsed = start.elapsed();
    Ok(result)
}

/// Checks the invariants of a [`RootedTreeResult`]: the root is in the tree,
/// the tree is induced and connected through its parent pointers, the cycle
/// costs at most `2·h*`, and every tree path extended by an outside neighbour
/// costs at least `h*`.
pub fn check_rooted_tree<F: SetFunction>(
    g: &Multigraph,
    f: &F,
    result: &RootedTreeResult<F::Value>,
) -> std::result::Result<(), String> {
    let tree = &result.tree;
    let ground = f.ground_size().max(g.vertex_count());
    if !tree.contains(result.root) {
        return Err("root is not in its tree".into());
    }
    g.check_cycle(&result.cycle)?;
    let members: Vec<usize> = tree.members().collect();
    for &z in &members {
        let path = tree.path_to(z);
        if path.len() > members.len() || path.iter().any(|&w| !tree.contains(w)) {
            return Err(format!("tree path to {z} leaves the tree"));
        }
        if let Some(p) = tree.parent(z).filter(|&p| p != z) {
            if g.edge_between(z, p).is_none() {
                return Err(format!("{z} is not adjacent to its parent {p}"));
            }
        }
    }
    let induced = g
        .edges()
        .iter()
        .filter(|&&(u, v)| tree.contains(u) && tree.contains(v))
        .count();
    if induced + 1 != members.len() {
        return Err(format!(
            "tree on {} vertices induces {induced} edges",
            members.len()
        ));
    }
    let two_h = result.h_star + result.h_star;
    if !result.cycle_cost.at_most(two_h) {
        return Err(format!(
            "cycle cost {} exceeds 2·h* = {two_h}",
            result.cycle_cost
        ));
    }
    for &x in &members {
        let path = tree.path_to(x);
        for &(y, _) in g.incidences(x) {
            if tree.contains(y) {
                continue;
            }
            let value = f.evaluate(&element_set(
                ground,
                path.iter().copied().chain(std::iter::once(y)),
            ));
            if !result.h_star.at_most(value) {
                return Err(format!(
                    "path to {x} extended by {y} costs {value} < h* = {}",
                    result.h_star
                ));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{enumerate_cycles, is_segment, DEFAULT_CYCLE_CAP};
    use crate::oracle::{Coverage, FnOracle, Modular};

    fn cycle_graph(n: usize) -> Multigraph {
        Multigraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn complete(n: usize) -> Multigraph {
        let mut g = Multigraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    #[test]
    fn triangle_from_root() {
        let g = cycle_graph(3);
        let f = Modular::new(vec![1i64; 3]).unwrap();
        let r = cycle_from_root(&g, 0, &f).unwrap();
        assert_eq!(r.cycle_cost, 3);
        assert!(2 * r.h_star >= 3);
        check_rooted_tree(&g, &f, &r).unwrap();
    }

    #[test]
    fn square_from_root() {
        let g = cycle_graph(4);
        let f = Modular::new(vec![1i64; 4]).unwrap();
        let r = cycle_from_root(&g, 0, &f).unwrap();
        assert_eq!(r.cycle.vertices(), &[0, 1, 2, 3]);
        assert_eq!(r.cycle_cost, 4);
        check_rooted_tree(&g, &f, &r).unwrap();
    }

    #[test]
    fn root_stays_in_tree_when_labels_tie() {
        let g = complete(4);
        let f = FnOracle::new(4, |s: &ElementSet| (s.count_ones(..) > 0) as i64);
        for root in 0..4 {
            let r = cycle_from_root(&g, root, &f).unwrap();
            assert_eq!(r.tree.members().collect::<Vec<_>>(), vec![root]);
            check_rooted_tree(&g, &f, &r).unwrap();
        }
    }

    #[test]
    fn tree_component_has_no_cycle() {
        let g = Multigraph::from_edges(5, [(0, 1), (1, 2), (3, 4), (4, 2), (2, 3)]).unwrap();
        let f = Modular::new(vec![1i64; 5]).unwrap();
        assert_eq!(
            cycle_from_root(&g, 0, &f).unwrap().cycle.vertices(),
            &[2, 3, 4]
        );
        let forest = Multigraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            cycle_from_root(&forest, 0, &f).unwrap_err(),
            Error::NoCycleReachable(0)
        );
        assert_eq!(two_approx(&forest, &f).unwrap_err(), Error::NoCycle);
        assert_eq!(find_cycle(&forest, &f, 2).unwrap_err(), Error::NoCycle);
    }

    #[test]
    fn rejects_multigraphs() {
        let g = Multigraph::from_edges(2, [(0, 1), (0, 1)]).unwrap();
        let f = Modular::new(vec![1i64; 2]).unwrap();
        assert!(matches!(two_approx(&g, &f), Err(Error::NotSimple(_))));
    }

    #[test]
    fn two_approx_on_triangle() {
        let g = cycle_graph(3);
        let f = Modular::new(vec![1i64; 3]).unwrap();
        let (r, family) = two_approx(&g, &f).unwrap();
        assert_eq!(r.cost, 3);
        assert_eq!(family.roots.len(), 3);
        assert!(r.stats.queries <= 3 * (2 * 3 + 3));
    }

    #[test]
    fn path_family_on_triangle_single_vertex_tree() {
        let g = cycle_graph(3);
        let tree = RootedTree {
            root: 0,
            parent: vec![Some(0), None, None],
        };
        let family = build_path_family(&g, &[Some(&tree)]);
        let paths: Vec<&[usize]> = family.paths.iter().map(|p| p.vertices()).collect();
        assert_eq!(paths, vec![&[0, 1][..], &[0, 2]]);
    }

    #[test]
    fn path_family_on_k4_edge_tree() {
        let g = complete(4);
        let tree = RootedTree {
            root: 0,
            parent: vec![Some(0), Some(0), None, None],
        };
        let family = build_path_family(&g, &[Some(&tree)]);
        let mut paths: Vec<Vec<usize>> = family.paths.iter().map(|p| p.0.clone()).collect();
        paths.sort();
        assert_eq!(
            paths,
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2], vec![0, 3]]
        );
    }

    #[test]
    fn path_family_covers_every_cycle() {
        let g = Multigraph::from_edges(
            6,
            [
                (0, 1),
                (1, 2),
                (2, 0),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 3),
                (1, 4),
            ],
        )
        .unwrap();
        let f = Coverage::from_colors(vec![0, 1, 0, 2, 1, 0]);
        let (_, round) = two_approx(&g, &f).unwrap();
        let family = build_path_family(&g, &round.trees());
        assert!(family.len() <= g.vertex_count() * g.edge_count());
        for c in enumerate_cycles(&g, DEFAULT_CYCLE_CAP).unwrap() {
            assert!(family.paths.iter().any(|p| is_segment(p, &c)), "{c}");
        }
    }

    #[test]
    fn depth_zero_matches_two_approx() {
        let g = complete(5);
        let f = Modular::new(vec![3i64, 1, 4, 1, 5]).unwrap();
        let (approx, _) = two_approx(&g, &f).unwrap();
        let r = find_cycle(&g, &f, 0).unwrap();
        assert_eq!(r.cycle, approx.cycle);
        assert_eq!(r.cost, approx.cost);
        assert_eq!(r.stats.recursion_nodes, 1);
    }

    #[test]
    fn zero_cost_stops_immediately() {
        let g = complete(4);
        let f = Modular::new(vec![0i64; 4]).unwrap();
        let r = find_cycle(&g, &f, 3).unwrap();
        assert_eq!(r.cost, 0);
        assert_eq!(r.stats.recursion_nodes, 1);
        let r = exact_integer(&g, &f).unwrap();
        assert_eq!(r.cost, 0);
        assert_eq!(r.stats.recursion_nodes, 1);
    }

    #[test]
    fn epsilon_depths() {
        assert_eq!(Epsilon::from_f64(1.0).unwrap().depth(), 0);
        assert_eq!(Epsilon::from_f64(3.0).unwrap().depth(), 0);
        assert_eq!("0.25".parse::<Epsilon>().unwrap().depth(), 2);
        assert_eq!("0.3".parse::<Epsilon>().unwrap().depth(), 2);
        assert_eq!("0.2".parse::<Epsilon>().unwrap().depth(), 3);
        assert_eq!("1/3".parse::<Epsilon>().unwrap().depth(), 2);
        assert_eq!(
            "0.2499999999999999999".parse::<Epsilon>().unwrap().depth(),
            3
        );
        assert_eq!("0.0625".parse::<Epsilon>().unwrap().depth(), 4);
        assert!("0".parse::<Epsilon>().is_err());
        assert!("-0.5".parse::<Epsilon>().is_err());
        assert!(Epsilon::from_f64(0.0).is_err());
        assert!(Epsilon::from_f64(-1.0).is_err());
    }

    #[test]
    fn exact_depths() {
        assert_eq!(exact_depth(1), 1);
        assert_eq!(exact_depth(3), 2);
        assert_eq!(exact_depth(4), 3);
        assert_eq!(exact_depth(7), 3);
        assert_eq!(exact_depth(14), 4);
    }

    #[test]
    fn exact_rejects_real_oracle() {
        let g = complete(3);
        let f = Modular::new(vec![0.5, 1.0, 2.0]).unwrap();
        assert!(matches!(
            exact_integer(&g, &f),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn theta_graph_coverage_exact() {
        // hubs 0 and 1 joined by paths 0-2-3-1, 0-4-1, 0-5-6-7-1
        let g = Multigraph::from_edges(
            8,
            [
                (0, 2),
                (2, 3),
                (3, 1),
                (0, 4),
                (4, 1),
                (0, 5),
                (5, 6),
                (6, 7),
                (7, 1),
            ],
        )
        .unwrap();
        let f = Coverage::from_colors(vec![0, 0, 1, 1, 2, 3, 1, 0]);
        // cycles: {0,1,2,3,4} colors {0,1,2}; {0,1,4,5,6,7} {0,2,3,1}; {0..3,5,6,7} {0,1,3}
        let r = exact_integer(&g, &f).unwrap();
        assert_eq!(r.cost, 3);
        let r = find_cycle(&g, &f, 3).unwrap();
        assert_eq!(r.cost, 3);
    }

    #[test]
    fn edge_cycle_three_parallel_edges() {
        let g = Multigraph::from_edges(2, [(0, 1), (0, 1), (0, 1)]).unwrap();
        let f = Modular::new(vec![1i64, 2, 4]).unwrap();
        let r = edge_cycle(&g, &f, Mode::Exact).unwrap();
        assert_eq!(r.cost, 3);
        assert_eq!(r.cycle.edges(), &[0, 1]);
        g.check_cycle(&r.cycle).unwrap();
        let zero = Modular::new(vec![0i64; 3]).unwrap();
        assert_eq!(edge_cycle(&g, &zero, Mode::Exact).unwrap().cost, 0);
    }

    #[test]
    fn edge_cycle_rejects_loops() {
        let g = Multigraph::from_edges(2, [(0, 1), (1, 1)]).unwrap();
        let f = Modular::new(vec![1i64; 2]).unwrap();
        assert_eq!(
            edge_cycle(&g, &f, Mode::Exact).unwrap_err(),
            Error::LoopEdge(1)
        );
    }

    #[test]
    fn deterministic_output() {
        let g = complete(5);
        let f = Coverage::from_colors(vec![0, 1, 2, 1, 0]);
        let a = find_cycle(&g, &f, 2).unwrap();
        let b = find_cycle(&g, &f, 2).unwrap();
        assert_eq!(a.cycle, b.cycle);
        assert_eq!(a.stats.queries, b.stats.queries);
    }

    #[test]
    fn pruning_keeps_the_guarantee() {
        use crate::corpus::{random_function, random_graph, rng, OracleKind};
        use crate::io::BuiltOracle;
        let mut r = rng(21);
        for trial in 0..40 {
            let n = 4 + trial % 5;
            let g = random_graph(&mut r, n, 0.5);
            let kind = OracleKind::ALL[trial % 4];
            let BuiltOracle::Integer(f) = random_function(&mut r, kind, n).build(n, &g).unwrap()
            else {
                panic!("integer spec");
            };
            let f = f.as_ref();
            let opt = enumerate_cycles(&g, DEFAULT_CYCLE_CAP)
                .unwrap()
                .iter()
                .map(|c| f.evaluate(&element_set(n, c.vertices().iter().copied())))
                .min()
                .unwrap();
            for depth in 0..4 {
                let off = find_cycle_with(&g, &f, depth, Pruning::Off).unwrap();
                let on = find_cycle_with(&g, &f, depth, Pruning::Bounds).unwrap();
                for res in [&off, &on] {
                    assert!(res.cost.within_factor(opt, depth), "{trial} {depth}");
                }
                assert!(on.stats.recursion_nodes <= off.stats.recursion_nodes);
            }
        }
    }
}
