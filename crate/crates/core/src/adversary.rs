//! The `G(k, p)` lower-bound instance and a query-recording adversary.
//!
//! `G(k, p)` has vertices `0..=k` (standing for `v_1..v_{k+1}`), classes
//! `F_1..F_k` of `p` parallel edges between consecutive vertices, and one closing
//! edge between the first and last vertex. Edge ids: `F_i` holds
//! `(i-1)·p .. i·p`, the closing edge is `p·k`.
//!
//! Under [`LowerBoundF`] every cycle costs `2^{k+1} − 1`; [`LowerBoundFC`] agrees
//! with it everywhere except on one designated Hamiltonian cycle, which costs one
//! less. [`run_adversary`] answers a solver's queries with `LowerBoundF` and
//! afterwards reports whether some Hamiltonian cycle went unqueried, in which
//! case every answer given was also consistent with `f_C` for that cycle.

use std::cell::RefCell;

use crate::graph::Multigraph;
use crate::oracle::{verify_submodular_monotone, SetFunction, SubmodularityReport};
use crate::{element_set, ElementSet, Error, Result};

/// Largest edge count [`verify_lemma_4_1`] accepts.
pub const LEMMA_CHECK_LIMIT: usize = 14;

#[derive(Debug, Clone)]
pub struct LowerBoundGraph {
    k: usize,
    p: usize,
    graph: Multigraph,
}

impl LowerBoundGraph {
    pub fn new(k: usize, p: usize) -> Result<Self> {
        if k == 0 || p == 0 {
            return Err(Error::InvalidArgument(format!(
                "G(k, p) needs k ≥ 1 and p ≥ 1, got ({k}, {p})"
            )));
        }
        if k >= 62 {
            return Err(Error::InvalidArgument(format!("k = {k} overflows 2^(k+1)")));
        }
        let mut graph = Multigraph::new(k + 1);
        for i in 0..k {
            for _ in 0..p {
                graph.add_edge(i, i + 1)?;
            }
        }
        graph.add_edge(0, k)?;
        Ok(LowerBoundGraph { k, p, graph })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn edge_count(&self) -> usize {
        self.p * self.k + 1
    }

    pub fn closing_edge(&self) -> usize {
        self.p * self.k
    }

    /// Class index `0..k` of an edge, `None` for the closing edge.
    pub fn class_of(&self, edge: usize) -> Option<usize> {
        (edge < self.p * self.k).then_some(edge / self.p)
    }

    /// `p^k`, saturating.
    pub fn hamiltonian_count(&self) -> u64 {
        (self.p as u64)
            .checked_pow(self.k as u32)
            .unwrap_or(u64::MAX)
    }

    /// Edge ids of the Hamiltonian cycle picking `choice[i]` from class `i`.
    pub fn hamiltonian_cycle(&self, choice: &[usize]) -> Vec<usize> {
        assert_eq!(choice.len(), self.k);
        let mut edges: Vec<usize> = choice
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                assert!(c < self.p);
                i * self.p + c
            })
            .collect();
        edges.push(self.closing_edge());
        edges
    }

    /// Index of the Hamiltonian cycle `set` is equal to, if any.
    pub fn hamiltonian_index(&self, set: &ElementSet) -> Option<u64> {
        if set.count_ones(..) != self.k + 1 || !set.contains(self.closing_edge()) {
            return None;
        }
        let mut seen = vec![false; self.k];
        let mut index = 0u64;
        for e in set.ones().filter(|&e| e != self.closing_edge()) {
            let class = self.class_of(e)?;
            if std::mem::replace(&mut seen[class], true) {
                return None;
            }
            index += (e % self.p) as u64 * (self.p as u64).pow(class as u32);
        }
        Some(index)
    }

    /// Inverse of [`hamiltonian_index`](Self::hamiltonian_index).
    pub fn hamiltonian_by_index(&self, mut index: u64) -> Vec<usize> {
        let choice: Vec<usize> = (0..self.k)
            .map(|_| {
                let c = (index % self.p as u64) as usize;
                index /= self.p as u64;
                c
            })
            .collect();
        self.hamiltonian_cycle(&choice)
    }

    /// All `p^k` Hamiltonian cycles in index order.
    pub fn hamiltonian_cycles(&self) -> Vec<Vec<usize>> {
        (0..self.hamiltonian_count())
            .map(|i| self.hamiltonian_by_index(i))
            .collect()
    }

    pub fn optimum(&self) -> i64 {
        (1i64 << (self.k + 1)) - 1
    }

    pub fn fooled_optimum(&self) -> i64 {
        (1i64 << (self.k + 1)) - 2
    }
}

/// `2^{k+1} − 1` on sets containing a cycle, `2^{k+1} − 2^{k+1−|X|}` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LowerBoundF {
    k: usize,
    p: usize,
}

impl LowerBoundF {
    pub fn new(k: usize, p: usize) -> Result<Self> {
        LowerBoundGraph::new(k, p)?;
        Ok(LowerBoundF { k, p })
    }

    /// Whether `|X| ≥ k+1` or two edges from one class.
    pub fn contains_cycle(&self, set: &ElementSet) -> bool {
        if set.count_ones(..) > self.k {
            return true;
        }
        let mut seen = vec![false; self.k];
        set.ones()
            .filter(|&e| e < self.p * self.k)
            .any(|e| std::mem::replace(&mut seen[e / self.p], true))
    }
}

impl SetFunction for LowerBoundF {
    type Value = i64;

    fn ground_size(&self) -> usize {
        self.p * self.k + 1
    }

    fn evaluate(&self, set: &ElementSet) -> i64 {
        let top = 1i64 << (self.k + 1);
        if self.contains_cycle(set) {
            top - 1
        } else {
            top - (1i64 << (self.k + 1 - set.count_ones(..)))
        }
    }
}

/// [`LowerBoundF`] with the designated Hamiltonian cycle lowered to `2^{k+1} − 2`.
#[derive(Debug, Clone)]
pub struct LowerBoundFC {
    f: LowerBoundF,
    cycle: ElementSet,
}

impl LowerBoundFC {
    pub fn new(k: usize, p: usize, cycle_edges: &[usize]) -> Result<Self> {
        let lb = LowerBoundGraph::new(k, p)?;
        let cycle = element_set(
            lb.edge_count(),
            cycle_edges.iter().copied().filter(|&e| e < lb.edge_count()),
        );
        if cycle_edges.len() != k + 1 || lb.hamiltonian_index(&cycle).is_none() {
            return Err(Error::InvalidArgument(format!(
                "{cycle_edges:?} is not a Hamiltonian cycle of G({k}, {p})"
            )));
        }
        Ok(LowerBoundFC {
            f: LowerBoundF { k, p },
            cycle,
        })
    }

    pub fn cycle(&self) -> Vec<usize> {
        self.cycle.ones().collect()
    }
}

fn same_set(a: &ElementSet, b: &ElementSet) -> bool {
    a.ones().eq(b.ones())
}

impl SetFunction for LowerBoundFC {
    type Value = i64;

    fn ground_size(&self) -> usize {
        self.f.ground_size()
    }

    fn evaluate(&self, set: &ElementSet) -> i64 {
        if same_set(set, &self.cycle) {
            (1i64 << (self.f.k + 1)) - 2
        } else {
            self.f.evaluate(set)
        }
    }
}

/// `G(k, p)` together with `f`.
pub fn build_lower_bound(k: usize, p: usize) -> Result<(LowerBoundGraph, LowerBoundF)> {
    Ok((LowerBoundGraph::new(k, p)?, LowerBoundF::new(k, p)?))
}

/// Answers with [`LowerBoundF`] and records every query.
#[derive(Debug)]
pub struct AdversaryOracle<'a> {
    instance: &'a LowerBoundGraph,
    f: LowerBoundF,
    queries: RefCell<Vec<ElementSet>>,
    hit: RefCell<Vec<bool>>,
}

impl<'a> AdversaryOracle<'a> {
    pub fn new(instance: &'a LowerBoundGraph) -> Self {
        let count = usize::try_from(instance.hamiltonian_count()).expect("p^k fits in memory");
        AdversaryOracle {
            instance,
            f: LowerBoundF {
                k: instance.k,
                p: instance.p,
            },
            queries: RefCell::new(Vec::new()),
            hit: RefCell::new(vec![false; count]),
        }
    }

    pub fn query_count(&self) -> u64 {
        self.queries.borrow().len() as u64
    }
}

impl SetFunction for AdversaryOracle<'_> {
    type Value = i64;

    fn ground_size(&self) -> usize {
        self.f.ground_size()
    }

    fn evaluate(&self, set: &ElementSet) -> i64 {
        if let Some(i) = self.instance.hamiltonian_index(set) {
            self.hit.borrow_mut()[i as usize] = true;
        }
        self.queries.borrow_mut().push(set.clone());
        self.f.evaluate(set)
    }
}

/// What a solver reports back after running against the adversary.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolverClaim {
    pub cost: Option<i64>,
    pub cycle_edges: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    AllCyclesQueried,
    /// An unqueried Hamiltonian cycle: every answer given is consistent with
    /// `f_C` for it, under which the optimum is `fooled_optimum`.
    Fooled {
        certificate: Vec<usize>,
        fooled_optimum: i64,
    },
}

#[derive(Debug, Clone)]
pub struct AdversaryTranscript {
    pub k: usize,
    pub p: usize,
    pub hamiltonian_count: u64,
    pub queries: Vec<ElementSet>,
    /// Indices of the Hamiltonian cycles queried exactly.
    pub cycles_queried: Vec<u64>,
    pub claim: SolverClaim,
    pub verdict: Verdict,
    /// Whether the claimed cost equals the optimum under `f`.
    pub claim_matches_f: bool,
    /// Whether the output cycle is optimal under every function consistent with
    /// the answers (`f` and each `f_C` for an unqueried `C`). `None` when the
    /// solver output no cycle.
    pub output_cycle_robust: Option<bool>,
}

impl AdversaryTranscript {
    pub fn query_count(&self) -> u64 {
        self.queries.len() as u64
    }

    /// Rechecks that every recorded answer agrees with `f_C` for the certificate.
    pub fn certificate_consistent(&self) -> bool {
        match &self.verdict {
            Verdict::AllCyclesQueried => true,
            Verdict::Fooled { certificate, .. } => {
                let f = LowerBoundF {
                    k: self.k,
                    p: self.p,
                };
                let fc = LowerBoundFC::new(self.k, self.p, certificate)
                    .expect("certificate is Hamiltonian");
                self.queries.iter().all(|q| f.evaluate(q) == fc.evaluate(q))
            }
        }
    }
}

/// Runs `solver` on `G(k, p)` against the recording adversary.
pub fn run_adversary<S>(solver: S, k: usize, p: usize) -> Result<AdversaryTranscript>
where
    S: FnOnce(&Multigraph, &AdversaryOracle<'_>) -> Result<SolverClaim>,
{
    let instance = LowerBoundGraph::new(k, p)?;
    let oracle = AdversaryOracle::new(&instance);
    let claim = solver(instance.graph(), &oracle)?;
    let hit = oracle.hit.into_inner();
    let queries = oracle.queries.into_inner();
    let cycles_queried: Vec<u64> = (0..hit.len() as u64).filter(|&i| hit[i as usize]).collect();
    let unqueried: Vec<u64> = (0..hit.len() as u64)
        .filter(|&i| !hit[i as usize])
        .collect();
    let verdict = match unqueried.first() {
        None => Verdict::AllCyclesQueried,
        Some(&i) => Verdict::Fooled {
            certificate: instance.hamiltonian_by_index(i),
            fooled_optimum: instance.fooled_optimum(),
        },
    };
    let output_cycle_robust = claim.cycle_edges.as_ref().map(|edges| {
        let out = element_set(instance.edge_count(), edges.iter().copied());
        let out_index = instance.hamiltonian_index(&out);
        let optimal_under_f = LowerBoundF::new(k, p)
            .map(|f| f.contains_cycle(&out))
            .unwrap_or(false);
        optimal_under_f && unqueried.iter().all(|&i| Some(i) == out_index)
    });
    Ok(AdversaryTranscript {
        k,
        p,
        hamiltonian_count: instance.hamiltonian_count(),
        queries,
        cycles_queried,
        claim_matches_f: claim.cost == Some(instance.optimum()),
        claim,
        verdict,
        output_cycle_robust,
    })
}

#[derive(Debug, Clone)]
pub struct LemmaReport {
    pub f: SubmodularityReport,
    pub fc: SubmodularityReport,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.f.passed() && self.fc.passed()
    }
}

/// Exhaustive submodularity and monotonicity check of `f` and `f_C` on `G(k, p)`.
pub fn verify_lemma_4_1(k: usize, p: usize, cycle_edges: &[usize]) -> Result<LemmaReport> {
    let ground = p * k + 1;
    if ground > LEMMA_CHECK_LIMIT {
        return Err(Error::GroundSetTooLarge {
            size: ground,
            limit: LEMMA_CHECK_LIMIT,
        });
    }
    let fc = LowerBoundFC::new(k, p, cycle_edges)?;
    Ok(LemmaReport {
        f: verify_submodular_monotone(&LowerBoundF::new(k, p)?)?,
        fc: verify_submodular_monotone(&fc)?,
    })
}
