//! Monotone submodular cost functions behind a value-oracle interface.
//!
//! Solvers only ever see a [`SetFunction`]: a pure map from subsets of a ground
//! set to nonnegative costs. Query accounting ([`CountingOracle`]) and
//! contraction ([`Contracted`]) are wrappers that are themselves set functions,
//! so they compose freely.

use std::cell::Cell;
use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::ops::{Add, Sub};

use crate::graph::Multigraph;
use crate::{ElementSet, Error, Result};

/// Comparison tolerance for real-valued oracles.
pub const TOLERANCE: f64 = 1e-9;

/// Largest ground set [`verify_submodular_monotone`] accepts.
pub const EXHAUSTIVE_LIMIT: usize = 20;

/// Scalar type of oracle values: exact `i64` or `f64` compared with [`TOLERANCE`].
pub trait CostValue:
    Copy + PartialOrd + Debug + Display + Add<Output = Self> + Sub<Output = Self> + 'static
{
    const ZERO: Self;
    const INTEGER: bool;

    /// `self > 0`, beyond tolerance for reals.
    fn is_positive(self) -> bool;
    /// `self < other`, beyond tolerance for reals.
    fn definitely_less(self, other: Self) -> bool;
    fn clamp_nonneg(self) -> Self;
    fn to_f64(self) -> f64;
    fn total_order(&self, other: &Self) -> Ordering;

    /// `self <= other`, up to tolerance for reals.
    fn at_most(self, other: Self) -> bool {
        !other.definitely_less(self)
    }

    /// `self <= (1 + 2^-depth)·lower`, without tolerance.
    fn within_factor(self, lower: Self, depth: usize) -> bool;
}

impl CostValue for i64 {
    const ZERO: Self = 0;
    const INTEGER: bool = true;

    fn is_positive(self) -> bool {
        self > 0
    }

    fn definitely_less(self, other: Self) -> bool {
        self < other
    }

    fn clamp_nonneg(self) -> Self {
        self.max(0)
    }

    fn to_f64(self) -> f64 {
        self as f64
    }

    fn total_order(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }

    fn within_factor(self, lower: Self, depth: usize) -> bool {
        if depth >= 64 {
            return self <= lower;
        }
        let scaled = (self as i128) << depth;
        scaled <= lower as i128 * ((1i128 << depth) + 1)
    }
}

impl CostValue for f64 {
    const ZERO: Self = 0.0;
    const INTEGER: bool = false;

    fn is_positive(self) -> bool {
        self > TOLERANCE
    }

    fn definitely_less(self, other: Self) -> bool {
        self < other - TOLERANCE
    }

    fn clamp_nonneg(self) -> Self {
        self.max(0.0)
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn total_order(&self, other: &Self) -> Ordering {
        self.total_cmp(other)
    }

    fn within_factor(self, lower: Self, depth: usize) -> bool {
        self <= lower * (1.0 + (-(depth.min(1000) as f64)).exp2())
    }
}

/// A value oracle over the ground set `0..ground_size()`.
///
/// Evaluation must be pure: the same set always gets the same value.
pub trait SetFunction {
    type Value: CostValue;

    fn ground_size(&self) -> usize;

    fn evaluate(&self, set: &ElementSet) -> Self::Value;
}

impl<F: SetFunction + ?Sized> SetFunction for &F {
    type Value = F::Value;

    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }

    fn evaluate(&self, set: &ElementSet) -> Self::Value {
        (**self).evaluate(set)
    }
}

/// Counts every evaluation passed through to the wrapped function.
#[derive(Debug)]
pub struct CountingOracle<F> {
    inner: F,
    queries: Cell<u64>,
}

impl<F: SetFunction> CountingOracle<F> {
    pub fn new(inner: F) -> Self {
        CountingOracle {
            inner,
            queries: Cell::new(0),
        }
    }

    pub fn queries(&self) -> u64 {
        self.queries.get()
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }
}

impl<F: SetFunction> SetFunction for CountingOracle<F> {
    type Value = F::Value;

    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    fn evaluate(&self, set: &ElementSet) -> Self::Value {
        self.queries.set(self.queries.get() + 1);
        self.inner.evaluate(set)
    }
}

/// `X ↦ base(X ∪ A) − base(A)`, clamped at zero.
///
/// `base(A)` is computed once. Contracting a contraction again goes through
/// [`Contracted::contract`], which flattens to a single pinned set so every
/// evaluation costs exactly one base query.
#[derive(Debug, Clone)]
pub struct Contracted<F: SetFunction> {
    base: F,
    pinned: ElementSet,
    offset: F::Value,
}

impl<F: SetFunction> Contracted<F> {
    /// Contraction of `base` by `pinned`.
    pub fn new(base: F, pinned: ElementSet) -> Self {
        let mut pinned = pinned;
        pinned.grow(base.ground_size());
        let offset = base.evaluate(&pinned);
        Contracted {
            base,
            pinned,
            offset,
        }
    }

    /// `base` itself, seen as a contraction with nothing pinned and zero offset.
    pub fn identity(base: F) -> Self {
        let pinned = ElementSet::with_capacity(base.ground_size());
        Contracted {
            base,
            pinned,
            offset: F::Value::ZERO,
        }
    }

    pub fn pinned(&self) -> &ElementSet {
        &self.pinned
    }

    pub fn offset(&self) -> F::Value {
        self.offset
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    /// Contracts further by `extra`, flattening onto the same base.
    pub fn contract(&self, extra: &ElementSet) -> Contracted<F>
    where
        F: Clone,
    {
        let mut pinned = self.pinned.clone();
        pinned.union_with(extra);
        Contracted::new(self.base.clone(), pinned)
    }
}

impl<F: SetFunction> SetFunction for Contracted<F> {
    type Value = F::Value;

    fn ground_size(&self) -> usize {
        self.base.ground_size()
    }

    fn evaluate(&self, set: &ElementSet) -> Self::Value {
        let mut joined = set.clone();
        joined.grow(self.pinned.len());
        joined.union_with(&self.pinned);
        (self.base.evaluate(&joined) - self.offset).clamp_nonneg()
    }
}

/// Contraction of `base` by `pinned`.
pub fn contract<F: SetFunction>(base: F, pinned: ElementSet) -> Contracted<F> {
    Contracted::new(base, pinned)
}

/// `f(X) = Σ w(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Modular<V> {
    pub weights: Vec<V>,
}

impl<V: CostValue> Modular<V> {
    pub fn new(weights: Vec<V>) -> Result<Self> {
        if weights.iter().any(|w| w.definitely_less(V::ZERO)) {
            return Err(Error::InvalidArgument(
                "modular weights must be nonnegative".into(),
            ));
        }
        Ok(Modular { weights })
    }
}

impl<V: CostValue> SetFunction for Modular<V> {
    type Value = V;

    fn ground_size(&self) -> usize {
        self.weights.len()
    }

    fn evaluate(&self, set: &ElementSet) -> V {
        set.ones()
            .filter(|&x| x < self.weights.len())
            .fold(V::ZERO, |acc, x| acc + self.weights[x])
    }
}

/// Number of distinct colors (hedges) among the chosen elements. Uncolored
/// elements contribute nothing.
#[derive(Debug, Clone, PartialEq)]
pub struct Coverage {
    colors: Vec<Option<usize>>,
    palette: usize,
}

impl Coverage {
    pub fn new(colors: Vec<Option<usize>>) -> Self {
        let palette = colors.iter().flatten().max().map_or(0, |&c| c + 1);
        Coverage { colors, palette }
    }

    /// Every element colored.
    pub fn from_colors(colors: Vec<usize>) -> Self {
        Coverage::new(colors.into_iter().map(Some).collect())
    }

    pub fn colors(&self) -> &[Option<usize>] {
        &self.colors
    }
}

impl SetFunction for Coverage {
    type Value = i64;

    fn ground_size(&self) -> usize {
        self.colors.len()
    }

    fn evaluate(&self, set: &ElementSet) -> i64 {
        let mut seen = ElementSet::with_capacity(self.palette);
        for x in set.ones() {
            if let Some(Some(c)) = self.colors.get(x) {
                seen.insert(*c);
            }
        }
        seen.count_ones(..) as i64
    }
}

/// Rank of the graphic matroid: `n − #components(V, X)` over edge sets.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphicRank {
    graph: Multigraph,
}

impl GraphicRank {
    pub fn new(graph: Multigraph) -> Self {
        GraphicRank { graph }
    }
}

impl SetFunction for GraphicRank {
    type Value = i64;

    fn ground_size(&self) -> usize {
        self.graph.edge_count()
    }

    fn evaluate(&self, set: &ElementSet) -> i64 {
        let n = self.graph.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut rank = 0;
        for e in set.ones().filter(|&e| e < self.graph.edge_count()) {
            let (u, v) = self.graph.endpoints(e);
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru] = rv;
                rank += 1;
            }
        }
        rank
    }
}

/// Rank of a partition matroid: `Σ min(|X ∩ B_j|, c_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionRank {
    ground: usize,
    blocks: Vec<(usize, Vec<usize>)>,
    block_of: Vec<Option<usize>>,
}

impl PartitionRank {
    /// `blocks` are `(capacity, elements)` pairs; blocks must be disjoint.
    pub fn new(ground: usize, blocks: Vec<(usize, Vec<usize>)>) -> Result<Self> {
        let mut block_of = vec![None; ground];
        for (j, (_, elems)) in blocks.iter().enumerate() {
            for &x in elems {
                match block_of.get_mut(x) {
                    None => {
                        return Err(Error::InvalidArgument(format!(
                            "block element {x} outside ground set of size {ground}"
                        )))
                    }
                    Some(Some(_)) => {
                        return Err(Error::InvalidArgument(format!(
                            "element {x} appears in two blocks"
                        )))
                    }
                    Some(slot) => *slot = Some(j),
                }
            }
        }
        Ok(PartitionRank {
            ground,
            blocks,
            block_of,
        })
    }

    pub fn blocks(&self) -> &[(usize, Vec<usize>)] {
        &self.blocks
    }
}

impl SetFunction for PartitionRank {
    type Value = i64;

    fn ground_size(&self) -> usize {
        self.ground
    }

    fn evaluate(&self, set: &ElementSet) -> i64 {
        let mut counts = vec![0usize; self.blocks.len()];
        for x in set.ones() {
            if let Some(Some(j)) = self.block_of.get(x) {
                counts[*j] += 1;
            }
        }
        counts
            .iter()
            .zip(&self.blocks)
            .map(|(&c, (cap, _))| c.min(*cap) as i64)
            .sum()
    }
}

/// A set function given by a closure.
pub struct FnOracle<V, G> {
    ground: usize,
    f: G,
    _value: std::marker::PhantomData<V>,
}

impl<V, G> FnOracle<V, G>
where
    V: CostValue,
    G: Fn(&ElementSet) -> V,
{
    pub fn new(ground: usize, f: G) -> Self {
        FnOracle {
            ground,
            f,
            _value: std::marker::PhantomData,
        }
    }
}

impl<V, G> SetFunction for FnOracle<V, G>
where
    V: CostValue,
    G: Fn(&ElementSet) -> V,
{
    type Value = V;

    fn ground_size(&self) -> usize {
        self.ground
    }

    fn evaluate(&self, set: &ElementSet) -> V {
        (self.f)(set)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// `f(X) > f(X + v)`.
    Monotonicity,
    /// `f(X + v) − f(X) < f(Y + v) − f(Y)` for `X ⊆ Y`.
    Submodularity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub element: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubmodularityReport {
    pub ground_size: usize,
    pub checks: u64,
    pub violation: Option<Violation>,
}

impl SubmodularityReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

fn mask_elements(mask: u32, size: usize) -> Vec<usize> {
    (0..size).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Exhaustively checks monotonicity and diminishing returns.
///
/// All `2^n` values are tabulated first. Diminishing returns is checked on
/// every `X ⊆ Y = X + u`, `v ∉ Y`, which is equivalent to the full chain
/// condition; monotonicity on every single-element extension.
pub fn verify_submodular_monotone<F: SetFunction>(f: &F) -> Result<SubmodularityReport> {
    let n = f.ground_size();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::GroundSetTooLarge {
            size: n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let full = 1u32 << n;
    let values: Vec<F::Value> = (0..full)
        .map(|mask| {
            let set = crate::element_set(n, (0..n).filter(|&i| mask >> i & 1 == 1));
            f.evaluate(&set)
        })
        .collect();
    let mut checks = 0u64;
    for mask in 0..full {
        for v in (0..n).filter(|&v| mask >> v & 1 == 0) {
            let with_v = mask | 1 << v;
            checks += 1;
            if values[with_v as usize].definitely_less(values[mask as usize]) {
                return Ok(SubmodularityReport {
                    ground_size: n,
                    checks,
                    violation: Some(Violation {
                        kind: ViolationKind::Monotonicity,
                        x: mask_elements(mask, n),
                        y: mask_elements(mask, n),
                        element: v,
                    }),
                });
            }
            let gain_x = values[with_v as usize] - values[mask as usize];
            for u in (0..n).filter(|&u| u != v && mask >> u & 1 == 0) {
                let y = mask | 1 << u;
                let gain_y = values[(y | 1 << v) as usize] - values[y as usize];
                checks += 1;
                if gain_x.definitely_less(gain_y) {
                    return Ok(SubmodularityReport {
                        ground_size: n,
                        checks,
                        violation: Some(Violation {
                            kind: ViolationKind::Submodularity,
                            x: mask_elements(mask, n),
                            y: mask_elements(y, n),
                            element: v,
                        }),
                    });
                }
            }
        }
    }
    Ok(SubmodularityReport {
        ground_size: n,
        checks,
        violation: None,
    })
}
