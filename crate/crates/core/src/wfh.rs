//! Wide Family Hitting.
//!
//! Given `k` and families `F_1..F_m` of subsets of a universe `0..u`, pick one set
//! per family so that the union has at most `k` elements. Every family must be
//! `k`-wide: any two distinct members have a union larger than `k`.
//!
//! Includes an exact branching solver, a randomized solver for families of
//! bounded size, a brute-force dynamic program and the two reductions to and
//! from minimum-colour cycles in layered graphs.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Multigraph;
use crate::oracle::Coverage;
use crate::{element_set, ElementSet, Error, Result};

/// Largest universe [`brute_force`] accepts.
pub const BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WfhInstance {
    k: usize,
    universe: usize,
    families: Vec<Vec<ElementSet>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WfhSolution {
    /// Chosen set index for each family.
    pub choices: Vec<usize>,
    /// Union of the chosen sets, ascending.
    pub union: Vec<usize>,
}

/// Two members of one family whose union is too small.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WideViolation {
    pub family: usize,
    pub a: usize,
    pub b: usize,
}

impl WfhInstance {
    pub fn new(k: usize, universe: usize, families: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let mut built = Vec::with_capacity(families.len());
        for (i, family) in families.into_iter().enumerate() {
            let mut sets = Vec::with_capacity(family.len());
            for set in family {
                if let Some(&e) = set.iter().find(|&&e| e >= universe) {
                    return Err(Error::InvalidArgument(format!(
                        "family {i}: element {e} outside universe of size {universe}"
                    )));
                }
                sets.push(element_set(universe, set));
            }
            built.push(sets);
        }
        Ok(WfhInstance {
            k,
            universe,
            families: built,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn families(&self) -> &[Vec<ElementSet>] {
        &self.families
    }

    pub fn family_count(&self) -> usize {
        self.families.len()
    }

    /// Total size `N` of all sets.
    pub fn input_size(&self) -> usize {
        self.families
            .iter()
            .flatten()
            .map(|s| s.count_ones(..))
            .sum()
    }

    /// Largest family size `d`.
    pub fn max_family_size(&self) -> usize {
        self.families.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn wide_violation(&self) -> Option<WideViolation> {
        for (family, sets) in self.families.iter().enumerate() {
            for a in 0..sets.len() {
                for b in a + 1..sets.len() {
                    if sets[a].union_count(&sets[b]) <= self.k {
                        return Some(WideViolation { family, a, b });
                    }
                }
            }
        }
        None
    }

    pub fn is_wide(&self) -> bool {
        self.wide_violation().is_none()
    }

    pub fn validate_wide(&self) -> Result<()> {
        match self.wide_violation() {
            None => Ok(()),
            Some(v) => Err(Error::NotWide {
                k: self.k,
                family: v.family,
                a: v.a,
                b: v.b,
            }),
        }
    }

    /// Builds the solution for `choices`, or `None` if it is not valid.
    pub fn solution_for(&self, choices: &[usize]) -> Option<WfhSolution> {
        if choices.len() != self.families.len() {
            return None;
        }
        let mut union = ElementSet::with_capacity(self.universe);
        for (family, &c) in self.families.iter().zip(choices) {
            union.union_with(family.get(c)?);
        }
        (union.count_ones(..) <= self.k).then(|| WfhSolution {
            choices: choices.to_vec(),
            union: union.ones().collect(),
        })
    }

    pub fn is_solution(&self, solution: &WfhSolution) -> bool {
        self.solution_for(&solution.choices).as_ref() == Some(solution)
    }
}

/// Dynamic program over achievable unions of size at most `k`.
pub fn brute_force(inst: &WfhInstance) -> Result<Option<WfhSolution>> {
    if inst.universe > BRUTE_FORCE_LIMIT {
        return Err(Error::GroundSetTooLarge {
            size: inst.universe,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let to_mask = |s: &ElementSet| s.ones().fold(0u32, |m, e| m | 1 << e);
    let mut layers: Vec<BTreeMap<u32, (u32, usize)>> = Vec::with_capacity(inst.families.len());
    let mut frontier: Vec<u32> = vec![0];
    for family in &inst.families {
        let masks: Vec<u32> = family.iter().map(to_mask).collect();
        let mut next: BTreeMap<u32, (u32, usize)> = BTreeMap::new();
        for &prev in &frontier {
            for (idx, &m) in masks.iter().enumerate() {
                let union = prev | m;
                if union.count_ones() as usize <= inst.k {
                    next.entry(union).or_insert((prev, idx));
                }
            }
        }
        frontier = next.keys().copied().collect();
        layers.push(next);
        if frontier.is_empty() {
            return Ok(None);
        }
    }
    let Some(&last) = frontier.first() else {
        return Ok(None);
    };
    let mut choices = vec![0; inst.families.len()];
    let mut mask = last;
    for (i, layer) in layers.iter().enumerate().rev() {
        let (prev, idx) = layer[&mask];
        choices[i] = idx;
        mask = prev;
    }
    Ok(inst.solution_for(&choices))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FptResult {
    pub solution: Option<WfhSolution>,
    /// Largest-set guesses tried.
    pub candidates: u64,
    /// Branching nodes visited across all guesses.
    pub nodes: u64,
}

struct FptSearch<'a> {
    inst: &'a WfhInstance,
    alive: Vec<Vec<bool>>,
    fixed: usize,
    choices: Vec<usize>,
    nodes: u64,
}

impl FptSearch<'_> {
    fn branch(&mut self, family: usize, union: &ElementSet) -> bool {
        self.nodes += 1;
        if family == self.inst.families.len() {
            return true;
        }
        if family == self.fixed {
            return self.branch(family + 1, union);
        }
        let sets = &self.inst.families[family];
        let alive: Vec<usize> = (0..sets.len()).filter(|&j| self.alive[family][j]).collect();
        if let Some(&j) = alive.iter().find(|&&j| sets[j].is_subset(union)) {
            self.choices[family] = j;
            return self.branch(family + 1, union);
        }
        for j in alive {
            if union.union_count(&sets[j]) > self.inst.k {
                continue;
            }
            let mut next = union.clone();
            next.union_with(&sets[j]);
            self.choices[family] = j;
            if self.branch(family + 1, &next) {
                return true;
            }
        }
        false
    }
}

/// Exact solver: guess the largest chosen set, prune, then branch family by family.
pub fn fpt_solve(inst: &WfhInstance) -> Result<FptResult> {
    inst.validate_wide()?;
    let m = inst.families.len();
    if m == 0 {
        return Ok(FptResult {
            solution: inst.solution_for(&[]),
            candidates: 0,
            nodes: 0,
        });
    }
    let mut guesses: Vec<(usize, usize, usize)> = inst
        .families
        .iter()
        .enumerate()
        .flat_map(|(i, sets)| {
            sets.iter()
                .enumerate()
                .map(move |(j, s)| (s.count_ones(..), i, j))
        })
        .filter(|&(size, _, _)| size <= inst.k)
        .collect();
    guesses.sort_by(|a, b| b.0.cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));

    let mut result = FptResult {
        solution: None,
        candidates: 0,
        nodes: 0,
    };
    for (size, i, j) in guesses {
        result.candidates += 1;
        let x0 = &inst.families[i][j];
        let alive = inst
            .families
            .iter()
            .map(|sets| {
                sets.iter()
                    .map(|a| a.count_ones(..) <= size && a.union_count(x0) <= inst.k)
                    .collect()
            })
            .collect();
        let mut search = FptSearch {
            inst,
            alive,
            fixed: i,
            choices: vec![0; m],
            nodes: 0,
        };
        search.choices[i] = j;
        let found = search.branch(0, x0);
        result.nodes += search.nodes;
        if found {
            result.solution = inst.solution_for(&search.choices);
            debug_assert!(result.solution.is_some());
            break;
        }
    }
    Ok(result)
}

/// `⌈2k · d^(1 + ⌈log₂ max(k, 2)⌉)⌉`, at least 1.
pub fn default_repetitions(k: usize, d: usize) -> u64 {
    let target = k.max(2);
    let log = usize::BITS - (target - 1).leading_zeros();
    let power = (d.max(1) as u64).saturating_pow(1 + log);
    (2 * k as u64).saturating_mul(power).max(1)
}

/// Sets of `family` whose increment over `union` is at most half the budget left.
pub fn light_sets(inst: &WfhInstance, family: usize, union: &ElementSet) -> Vec<usize> {
    let size = union.count_ones(..);
    let b = inst.k.saturating_sub(size);
    inst.families[family]
        .iter()
        .enumerate()
        .filter(|(_, a)| 2 * (union.union_count(a) - size) <= b)
        .map(|(j, _)| j)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialOutcome {
    pub solution: Option<WfhSolution>,
    /// Most light sets seen in one family during the trial.
    pub max_light_sets: usize,
}

/// One randomized pass over the families.
pub fn run_trial<R: Rng + ?Sized>(inst: &WfhInstance, rng: &mut R) -> TrialOutcome {
    let d = inst.max_family_size() as f64;
    let mut union = ElementSet::with_capacity(inst.universe);
    let mut choices = Vec::with_capacity(inst.families.len());
    let mut max_light_sets = 0;
    let fail = |max_light_sets| TrialOutcome {
        solution: None,
        max_light_sets,
    };
    for sets in &inst.families {
        if let Some(j) = sets.iter().position(|a| a.is_subset(&union)) {
            choices.push(j);
            continue;
        }
        let size = union.count_ones(..);
        let b = inst.k - size;
        if b == 0 {
            return fail(max_light_sets);
        }
        let mut light = None;
        let mut heavy = Vec::new();
        let mut lights = 0;
        for (j, a) in sets.iter().enumerate() {
            let inc = union.union_count(a) - size;
            if inc > b {
                continue;
            }
            if 2 * inc <= b {
                lights += 1;
                light.get_or_insert((j, inc));
            } else {
                heavy.push(j);
            }
        }
        max_light_sets = max_light_sets.max(lights);
        let b = b as f64;
        let c = light.map_or(b / 2.0, |(_, inc)| inc as f64);
        let mut r: f64 = rng.gen();
        let mut pick = None;
        if let Some((j, _)) = light {
            let p = (b - c) / b;
            if r < p {
                pick = Some(j);
            }
            r -= p;
        }
        if pick.is_none() && r >= 0.0 {
            let p = c / (b * d);
            let slot = (r / p) as usize;
            pick = heavy.get(slot).copied();
        }
        let Some(j) = pick else {
            return fail(max_light_sets);
        };
        union.union_with(&sets[j]);
        choices.push(j);
    }
    TrialOutcome {
        solution: inst.solution_for(&choices),
        max_light_sets,
    }
}

/// Generator for trial `trial` under `seed`, independent of scheduling.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomizedResult {
    pub solution: Option<WfhSolution>,
    /// Index of the successful trial.
    pub success_trial: Option<u64>,
    pub repetitions: u64,
    pub seed: u64,
}

/// Repeats [`run_trial`] up to `repetitions` times (default [`default_repetitions`])
/// on `jobs` threads and returns the success with the lowest trial index.
pub fn randomized_solve(
    inst: &WfhInstance,
    repetitions: Option<u64>,
    seed: u64,
    jobs: usize,
) -> Result<RandomizedResult> {
    inst.validate_wide()?;
    let reps = repetitions.unwrap_or_else(|| default_repetitions(inst.k, inst.max_family_size()));
    let jobs = jobs.max(1) as u64;
    let best = AtomicU64::new(u64::MAX);
    let found: Mutex<Option<(u64, WfhSolution)>> = Mutex::new(None);
    let worker = |start: u64| {
        let mut t = start;
        while t < reps && t < best.load(Ordering::SeqCst) {
            if let Some(sol) = run_trial(inst, &mut trial_rng(seed, t)).solution {
                let mut slot = found.lock().expect("no poisoned lock");
                if slot.as_ref().is_none_or(|(i, _)| t < *i) {
                    *slot = Some((t, sol));
                    best.store(t, Ordering::SeqCst);
                }
                return;
            }
            t += jobs;
        }
    };
    if jobs == 1 {
        worker(0);
    } else {
        std::thread::scope(|s| {
            for w in 0..jobs {
                s.spawn(move || worker(w));
            }
        });
    }
    let found = found.into_inner().expect("no poisoned lock");
    Ok(RandomizedResult {
        success_trial: found.as_ref().map(|(t, _)| *t),
        solution: found.map(|(_, s)| s),
        repetitions: reps,
        seed,
    })
}

/// A vertex-coloured graph of the layered shape: hubs `v_0..v_m`, bundles of
/// internally disjoint paths between consecutive hubs and an edge `v_0 v_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HedgeGraph {
    pub graph: Multigraph,
    pub colors: Vec<usize>,
    pub hubs: Vec<usize>,
    /// Colour budget for a cycle.
    pub budget: usize,
}

impl HedgeGraph {
    pub fn coverage(&self) -> Coverage {
        Coverage::from_colors(self.colors.clone())
    }

    pub fn color_count(&self) -> usize {
        self.colors.iter().map(|&c| c + 1).max().unwrap_or(0)
    }
}

/// Builds the layered graph: hubs coloured with the extra colour `u`, one path
/// per set whose internal vertices carry the set's elements, and budget `k + 1`.
/// An empty set becomes one internal vertex of the extra colour.
pub fn wfh_to_hedge_cycle(inst: &WfhInstance) -> Result<HedgeGraph> {
    let m = inst.families.len();
    if m == 0 {
        return Err(Error::InvalidArgument("instance has no families".into()));
    }
    let special = inst.universe;
    let mut colors = vec![special; m + 1];
    let mut paths: Vec<(usize, Vec<usize>)> = Vec::new();
    for (i, sets) in inst.families.iter().enumerate() {
        for set in sets {
            let mut elems: Vec<usize> = set.ones().collect();
            if elems.is_empty() {
                elems.push(special);
            }
            paths.push((i, elems));
        }
    }
    let total: usize = paths.iter().map(|(_, e)| e.len()).sum();
    let mut graph = Multigraph::new(m + 1 + total);
    colors.reserve(total);
    let mut next = m + 1;
    for (i, elems) in paths {
        let mut prev = i;
        for e in elems {
            colors.push(e);
            graph.add_edge(prev, next)?;
            prev = next;
            next += 1;
        }
        graph.add_edge(prev, i + 1)?;
    }
    graph.add_edge(0, m)?;
    Ok(HedgeGraph {
        graph,
        colors,
        hubs: (0..=m).collect(),
        budget: inst.k + 1,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HedgeAnswer {
    /// Two paths of one bundle form a cycle within budget.
    TwoPaths {
        bundle: usize,
        first: usize,
        second: usize,
        colors: usize,
    },
    /// No cheap two-path cycle; answered through the derived instance.
    Families {
        instance: WfhInstance,
        solution: Option<WfhSolution>,
    },
}

impl HedgeAnswer {
    pub fn is_yes(&self) -> bool {
        match self {
            HedgeAnswer::TwoPaths { .. } => true,
            HedgeAnswer::Families { solution, .. } => solution.is_some(),
        }
    }
}

/// Splits a layered graph into its bundles of full hub-to-hub vertex paths.
pub fn layered_bundles(h: &HedgeGraph) -> Result<Vec<Vec<Vec<usize>>>> {
    let g = &h.graph;
    let n = g.vertex_count();
    let bad = |msg: String| Err(Error::NotLayered(msg));
    if h.colors.len() != n {
        return bad(format!("{} colours for {n} vertices", h.colors.len()));
    }
    if h.hubs.len() < 2 {
        return bad("need at least two hubs".into());
    }
    let mut hub_index = vec![None; n];
    for (i, &v) in h.hubs.iter().enumerate() {
        if v >= n || hub_index[v].is_some() {
            return bad(format!("hub {v} is out of range or repeated"));
        }
        hub_index[v] = Some(i);
    }
    let m = h.hubs.len() - 1;
    let mut closing = 0;
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if a == b {
            return bad(format!("edge {e} is a loop"));
        }
        if let (Some(i), Some(j)) = (hub_index[a], hub_index[b]) {
            if i.min(j) != 0 || i.max(j) != m {
                return bad(format!("edge {e} joins hubs {i} and {j}"));
            }
            closing += 1;
        }
    }
    if closing != 1 {
        return bad(format!(
            "expected one edge between the end hubs, found {closing}"
        ));
    }
    for v in (0..n).filter(|&v| hub_index[v].is_none()) {
        if g.degree(v) != 2 {
            return bad(format!("internal vertex {v} has degree {}", g.degree(v)));
        }
    }
    let mut visited = vec![false; n];
    let mut bundles = vec![Vec::new(); m];
    for (i, &start) in h.hubs.iter().enumerate() {
        for &(first, edge) in g.incidences(start) {
            if hub_index[first].is_some() {
                continue;
            }
            let mut path = vec![start];
            let (mut prev_edge, mut cur) = (edge, first);
            while hub_index[cur].is_none() {
                path.push(cur);
                let &(nxt, e) = g
                    .incidences(cur)
                    .iter()
                    .find(|&&(_, e)| e != prev_edge)
                    .expect("degree two");
                prev_edge = e;
                cur = nxt;
            }
            path.push(cur);
            let j = hub_index[cur].expect("hub");
            if j == i + 1 {
                for &v in &path[1..path.len() - 1] {
                    visited[v] = true;
                }
                bundles[i].push(path);
            } else if j + 1 != i {
                return bad(format!("path from hub {i} ends at hub {j}"));
            }
        }
    }
    if let Some(v) = (0..n).find(|&v| hub_index[v].is_none() && !visited[v]) {
        return bad(format!("vertex {v} lies on no hub-to-hub path"));
    }
    Ok(bundles)
}

/// Decides whether the layered graph has a cycle with at most `budget` colours.
pub fn hedge_cycle_to_wfh(h: &HedgeGraph) -> Result<HedgeAnswer> {
    let bundles = layered_bundles(h)?;
    let universe = h.color_count();
    let colour_sets: Vec<Vec<ElementSet>> = bundles
        .iter()
        .map(|paths| {
            paths
                .iter()
                .map(|p| element_set(universe, p.iter().map(|&v| h.colors[v])))
                .collect()
        })
        .collect();
    for (bundle, sets) in colour_sets.iter().enumerate() {
        for first in 0..sets.len() {
            for second in first + 1..sets.len() {
                let colors = sets[first].union_count(&sets[second]);
                if colors <= h.budget {
                    return Ok(HedgeAnswer::TwoPaths {
                        bundle,
                        first,
                        second,
                        colors,
                    });
                }
            }
        }
    }
    let families = colour_sets
        .iter()
        .map(|sets| sets.iter().map(|s| s.ones().collect()).collect())
        .collect();
    let instance = WfhInstance::new(h.budget, universe, families)?;
    let solution = fpt_solve(&instance)?.solution;
    Ok(HedgeAnswer::Families { instance, solution })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::exact_integer;
    use proptest::prelude::*;

    fn inst(k: usize, u: usize, families: &[&[&[usize]]]) -> WfhInstance {
        WfhInstance::new(
            k,
            u,
            families
                .iter()
                .map(|f| f.iter().map(|s| s.to_vec()).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn wideness_examples() {
        assert!(inst(2, 4, &[&[&[1, 2], &[2, 3]]]).is_wide());
        let narrow = inst(3, 4, &[&[&[1, 2], &[2, 3]]]);
        assert_eq!(
            narrow.wide_violation(),
            Some(WideViolation {
                family: 0,
                a: 0,
                b: 1
            })
        );
        assert!(fpt_solve(&narrow).is_err());
        assert!(randomized_solve(&narrow, None, 0, 1).is_err());
        assert!(inst(0, 4, &[&[&[1, 2]], &[&[]]]).is_wide());
    }

    #[test]
    fn single_family_single_set() {
        let i = inst(2, 3, &[&[&[0, 2]]]);
        let s = brute_force(&i).unwrap().unwrap();
        assert_eq!(s.union, vec![0, 2]);
        assert_eq!(fpt_solve(&i).unwrap().solution, Some(s));
    }

    #[test]
    fn crossing_pairs_are_no() {
        let i = inst(2, 5, &[&[&[1, 2], &[3, 4]], &[&[1, 3], &[2, 4]]]);
        assert!(i.is_wide());
        for a in 0..2 {
            for b in 0..2 {
                assert!(i.solution_for(&[a, b]).is_none());
            }
        }
        assert_eq!(brute_force(&i).unwrap(), None);
        assert_eq!(fpt_solve(&i).unwrap().solution, None);
        assert_eq!(
            randomized_solve(&i, Some(200), 3, 1).unwrap().solution,
            None
        );
    }

    #[test]
    fn empty_sets_everywhere() {
        let i = inst(0, 3, &[&[&[]], &[&[], &[0]], &[&[1], &[]]]);
        let s = fpt_solve(&i).unwrap().solution.unwrap();
        assert!(s.union.is_empty());
        assert_eq!(brute_force(&i).unwrap().unwrap().union, Vec::<usize>::new());
        let r = randomized_solve(&i, None, 1, 1).unwrap();
        assert_eq!(r.success_trial, Some(0));
    }

    #[test]
    fn brute_force_refuses_large_universe() {
        let i = inst(1, 21, &[&[&[20]]]);
        assert!(matches!(
            brute_force(&i),
            Err(Error::GroundSetTooLarge { .. })
        ));
    }

    #[test]
    fn default_repetition_values() {
        assert_eq!(default_repetitions(1, 2), 2 * 2u64.pow(2));
        assert_eq!(default_repetitions(2, 3), 4 * 3u64.pow(2));
        assert_eq!(default_repetitions(6, 3), 12 * 3u64.pow(4));
        assert_eq!(default_repetitions(0, 4), 1);
    }

    #[test]
    fn trial_success_rate_k1_d2() {
        let i = inst(1, 3, &[&[&[0], &[1]], &[&[0], &[2]]]);
        let wins = (0..4000)
            .filter(|&t| run_trial(&i, &mut trial_rng(9, t)).solution.is_some())
            .count();
        let p = wins as f64 / 4000.0;
        assert!((p - 0.25).abs() < 0.03, "rate {p}");
    }

    #[test]
    fn randomized_is_reproducible_across_jobs() {
        let i = inst(
            3,
            6,
            &[
                &[&[0, 1], &[2, 3]],
                &[&[1, 4], &[0, 5]],
                &[&[0], &[2, 3, 4]],
            ],
        );
        let a = randomized_solve(&i, Some(500), 42, 1).unwrap();
        let b = randomized_solve(&i, Some(500), 42, 4).unwrap();
        assert_eq!(a, b);
        assert!(i.is_solution(a.solution.as_ref().unwrap()));
    }

    #[test]
    fn reduction_single_set() {
        let i = inst(1, 2, &[&[&[1]]]);
        let h = wfh_to_hedge_cycle(&i).unwrap();
        assert_eq!(h.graph.vertex_count(), 3);
        assert_eq!(h.graph.edge_count(), 3);
        assert_eq!(h.budget, 2);
        let r = exact_integer(&h.graph, &h.coverage()).unwrap();
        assert_eq!(r.cost, 2);
        assert!(hedge_cycle_to_wfh(&h).unwrap().is_yes());
    }

    #[test]
    fn reduction_no_instance() {
        let i = inst(2, 5, &[&[&[1, 2], &[3, 4]], &[&[1, 3], &[2, 4]]]);
        let h = wfh_to_hedge_cycle(&i).unwrap();
        let r = exact_integer(&h.graph, &h.coverage()).unwrap();
        assert!(r.cost > h.budget as i64);
        assert!(!hedge_cycle_to_wfh(&h).unwrap().is_yes());
    }

    #[test]
    fn two_path_cycle_detected() {
        let g =
            Multigraph::from_edges(4, [(0, 2), (2, 1), (0, 3), (3, 1), (0, 1), (2, 3)]).unwrap();
        let h = HedgeGraph {
            graph: g,
            colors: vec![9, 9, 4, 4],
            hubs: vec![0, 1],
            budget: 2,
        };
        assert!(matches!(layered_bundles(&h), Err(Error::NotLayered(_))));
        let g = Multigraph::from_edges(4, [(0, 2), (2, 1), (0, 3), (3, 1), (0, 1)]).unwrap();
        let h = HedgeGraph {
            graph: g,
            colors: vec![9, 9, 4, 4],
            hubs: vec![0, 1],
            budget: 2,
        };
        assert!(matches!(
            hedge_cycle_to_wfh(&h).unwrap(),
            HedgeAnswer::TwoPaths { bundle: 0, .. }
        ));
    }

    fn wide_instance() -> impl Strategy<Value = WfhInstance> {
        (1usize..5, 1usize..4).prop_flat_map(|(k, m)| {
            let set = proptest::collection::btree_set(0usize..8, 0..=k + 1);
            let family = proptest::collection::vec(set, 1..4);
            proptest::collection::vec(family, m).prop_filter_map("not wide", move |fams| {
                let i = WfhInstance::new(
                    k,
                    8,
                    fams.into_iter()
                        .map(|f| f.into_iter().map(|s| s.into_iter().collect()).collect())
                        .collect(),
                )
                .ok()?;
                i.is_wide().then_some(i)
            })
        })
    }

    proptest! {
        #[test]
        fn fpt_matches_brute_force(i in wide_instance()) {
            let bf = brute_force(&i).unwrap();
            let fpt = fpt_solve(&i).unwrap().solution;
            prop_assert_eq!(bf.is_some(), fpt.is_some());
            if let Some(s) = fpt {
                prop_assert!(i.is_solution(&s));
            }
        }

        #[test]
        fn randomized_is_one_sided(i in wide_instance(), seed in any::<u64>()) {
            let r = randomized_solve(&i, Some(50), seed, 1).unwrap();
            if let Some(s) = r.solution {
                prop_assert!(i.is_solution(&s));
            }
            for t in 0..20 {
                prop_assert!(run_trial(&i, &mut trial_rng(seed, t)).max_light_sets <= 1);
            }
        }

        #[test]
        fn few_sets_survive_pruning(i in wide_instance(), x in proptest::collection::btree_set(0usize..8, 0..5)) {
            prop_assume!(x.len() <= i.k());
            let xs = element_set(8, x.iter().copied());
            for sets in i.families() {
                let survivors = sets
                    .iter()
                    .filter(|a| a.union_count(&xs) <= i.k() && a.count_ones(..) <= x.len())
                    .count();
                prop_assert!(survivors <= 1 << x.len());
                for (ia, a) in sets.iter().enumerate() {
                    for b in &sets[ia + 1..] {
                        let inc = a.union_count(&xs) + b.union_count(&xs) - 2 * x.len();
                        prop_assert!(inc > i.k() - x.len());
                    }
                }
            }
        }

        #[test]
        fn reductions_round_trip(i in wide_instance()) {
            let truth = brute_force(&i).unwrap().is_some();
            let h = wfh_to_hedge_cycle(&i).unwrap();
            prop_assert_eq!(hedge_cycle_to_wfh(&h).unwrap().is_yes(), truth);
        }
    }
}
