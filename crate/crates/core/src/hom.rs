//! Exact homomorphism counting and density normalizations.
//!
//! Two independent routes are kept side by side: `hom_count_brute`
//! enumerates every map V(F) -> V(G) and is the oracle; `hom_count_dp` runs
//! a dynamic program over a tree decomposition of the pattern and must agree
//! exactly. All arithmetic is exact; no floating point enters this module.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow, Signed, Zero};
use thiserror::Error;

use crate::graph::Graph;
use crate::treedec::{decompose, TreeDecomposition};
use crate::BigCount;

/// Exact rational with canonical reduced form (positive denominator,
/// gcd(|num|, den) = 1) — maintained by the `Ratio` representation.
pub type ExactRational = num_rational::BigRational;

/// Enumeration budget in elementary steps. Refusals are not mathematical
/// errors; callers may retry with another method or a larger budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    steps: u64,
}

impl Budget {
    pub const DEFAULT_STEPS: u64 = 100_000_000;

    pub fn new(steps: u64) -> Self {
        Budget { steps }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(Self::DEFAULT_STEPS)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomError {
    /// Budget refusal: the computation was declined, not wrong.
    #[error("enumeration of {needed} steps exceeds budget of {budget} (raise the budget or switch method)")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("tree-decomposition DP needs |G|^{width_plus_one} = {needed} steps, over budget {budget}")]
    DecompositionBudget {
        width_plus_one: usize,
        needed: String,
        budget: u64,
    },
    #[error("host graph has no vertices")]
    EmptyHost,
    #[error("normalization requires p > 0, got {0}")]
    NonPositiveP(String),
}

impl HomError {
    /// Budget refusals are distinguished from mathematical errors so the CLI
    /// can exit 2 instead of 1.
    pub fn is_refusal(&self) -> bool {
        matches!(
            self,
            HomError::BudgetExceeded { .. } | HomError::DecompositionBudget { .. }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Brute,
    Dp,
    Auto,
}

/// Exact number of maps V(F) -> V(G) sending every edge of F to an edge of
/// G, by full enumeration. Oracle for the DP route.
pub fn hom_count_brute(pattern: &Graph, host: &Graph, budget: Budget) -> Result<BigCount, HomError> {
    check_enum_budget(pattern, host, budget)?;
    let k = pattern.vertex_count();
    let n = host.vertex_count();
    if k == 0 {
        return Ok(BigCount::one());
    }
    if n == 0 {
        return Ok(BigCount::zero());
    }
    let edges = pattern.edges();
    let mut assignment = vec![0usize; k];
    let mut count: u128 = 0;
    'outer: loop {
        if edges
            .iter()
            .all(|&(u, v)| host.has_edge(assignment[u], assignment[v]))
        {
            count += 1;
        }
        // Odometer increment.
        for slot in assignment.iter_mut() {
            *slot += 1;
            if *slot < n {
                continue 'outer;
            }
            *slot = 0;
        }
        break;
    }
    Ok(u128_to_big(count))
}

/// Number of injective homomorphisms V(F) -> V(G).
pub fn injective_hom_count(
    pattern: &Graph,
    host: &Graph,
    budget: Budget,
) -> Result<BigCount, HomError> {
    check_enum_budget(pattern, host, budget)?;
    let k = pattern.vertex_count();
    let n = host.vertex_count();
    if k == 0 {
        return Ok(BigCount::one());
    }
    if n < k {
        return Ok(BigCount::zero());
    }
    let mut assignment = vec![usize::MAX; k];
    let mut count: u128 = 0;
    // Backtracking over distinct images; edges to earlier vertices checked
    // at placement time.
    fn place(
        pattern: &Graph,
        host: &Graph,
        assignment: &mut [usize],
        depth: usize,
        count: &mut u128,
    ) {
        if depth == assignment.len() {
            *count += 1;
            return;
        }
        'image: for img in 0..host.vertex_count() {
            for prev in 0..depth {
                if assignment[prev] == img {
                    continue 'image;
                }
            }
            for &nb in pattern.neighbors(depth) {
                if nb < depth && !host.has_edge(assignment[nb], img) {
                    continue 'image;
                }
            }
            assignment[depth] = img;
            place(pattern, host, assignment, depth + 1, count);
        }
    }
    place(pattern, host, &mut assignment, 0, &mut count);
    Ok(u128_to_big(count))
}

/// Exact hom count via dynamic programming over a tree decomposition of the
/// pattern; agrees with `hom_count_brute` on all inputs.
pub fn hom_count_dp(pattern: &Graph, host: &Graph, budget: Budget) -> Result<BigCount, HomError> {
    if pattern.vertex_count() == 0 {
        return Ok(BigCount::one());
    }
    if host.vertex_count() == 0 {
        return Ok(BigCount::zero());
    }
    let mut total = BigCount::one();
    for component in components(pattern) {
        let td = decompose(&component);
        check_dp_budget(&td, host, budget)?;
        // Fast path in u64; exact fallback to big integers on any overflow.
        let part = match dp_component::<u64>(&component, &td, host) {
            Some(v) => BigCount::from(v),
            None => dp_component::<BigUint>(&component, &td, host)
                .expect("big-integer counting cannot overflow"),
        };
        total *= part;
    }
    Ok(total)
}

/// DP when feasible, otherwise brute force, otherwise a refusal.
pub fn hom_count_auto(pattern: &Graph, host: &Graph, budget: Budget) -> Result<BigCount, HomError> {
    match hom_count_dp(pattern, host, budget) {
        Err(e) if e.is_refusal() => hom_count_brute(pattern, host, budget),
        other => other,
    }
}

pub fn hom_count(
    pattern: &Graph,
    host: &Graph,
    method: Method,
    budget: Budget,
) -> Result<BigCount, HomError> {
    match method {
        Method::Brute => hom_count_brute(pattern, host, budget),
        Method::Dp => hom_count_dp(pattern, host, budget),
        Method::Auto => hom_count_auto(pattern, host, budget),
    }
}

/// t(F,G) = hom(F,G) / |G|^{|F|}, exactly.
pub fn hom_density(pattern: &Graph, host: &Graph, budget: Budget) -> Result<ExactRational, HomError> {
    if host.vertex_count() == 0 {
        return Err(HomError::EmptyHost);
    }
    let hom = hom_count_auto(pattern, host, budget)?;
    let denom = BigUint::from(host.vertex_count()).pow(pattern.vertex_count() as u32);
    Ok(ExactRational::new(
        BigInt::from(hom),
        BigInt::from(denom),
    ))
}

/// t_p(F,G) = hom(F,G) / (p^{e_F} |G|^{|F|}), exactly. Requires p > 0.
pub fn normalized_density(
    pattern: &Graph,
    host: &Graph,
    p: &ExactRational,
    budget: Budget,
) -> Result<ExactRational, HomError> {
    if !p.is_positive() {
        return Err(HomError::NonPositiveP(p.to_string()));
    }
    let t = hom_density(pattern, host, budget)?;
    Ok(t / p.pow(pattern.edge_count() as i32))
}

fn u128_to_big(x: u128) -> BigCount {
    BigCount::from(x)
}

fn check_enum_budget(pattern: &Graph, host: &Graph, budget: Budget) -> Result<(), HomError> {
    let steps = checked_pow_u128(host.vertex_count(), pattern.vertex_count())
        .map(|maps| maps.saturating_mul(pattern.edge_count().max(1) as u128));
    match steps {
        Some(s) if s <= budget.steps as u128 => Ok(()),
        Some(s) => Err(HomError::BudgetExceeded {
            needed: s.to_string(),
            budget: budget.steps,
        }),
        None => Err(HomError::BudgetExceeded {
            needed: format!(
                "{}^{}",
                host.vertex_count(),
                pattern.vertex_count()
            ),
            budget: budget.steps,
        }),
    }
}

fn check_dp_budget(td: &TreeDecomposition, host: &Graph, budget: Budget) -> Result<(), HomError> {
    let wp1 = td.width + 1;
    match checked_pow_u128(host.vertex_count(), wp1) {
        Some(s) if s <= budget.steps as u128 => Ok(()),
        Some(s) => Err(HomError::DecompositionBudget {
            width_plus_one: wp1,
            needed: s.to_string(),
            budget: budget.steps,
        }),
        None => Err(HomError::DecompositionBudget {
            width_plus_one: wp1,
            needed: format!("{}^{wp1}", host.vertex_count()),
            budget: budget.steps,
        }),
    }
}

fn checked_pow_u128(base: usize, exp: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base as u128)?;
    }
    Some(acc)
}

/// Connected components of the pattern, each relabeled to dense indices.
/// hom is multiplicative over them.
fn components(g: &Graph) -> Vec<Graph> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        let mut verts = Vec::new();
        seen[start] = true;
        while let Some(v) = stack.pop() {
            verts.push(v);
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        verts.sort_unstable();
        let index: HashMap<usize, usize> =
            verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges = g
            .edges()
            .iter()
            .filter(|(u, _)| index.contains_key(u))
            .map(|&(u, v)| (index[&u], index[&v]));
        out.push(Graph::new(verts.len(), edges).expect("component of a valid graph"));
    }
    out
}

// ---------------------------------------------------------------------------
// Tree-decomposition DP
// ---------------------------------------------------------------------------

/// Counter abstraction so the DP can run in u64 (fast path, overflow
/// detected) or BigUint (exact fallback).
trait Counter: Clone + Sized {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// Returns false on overflow.
    fn add_in_place(&mut self, other: &Self) -> bool;
    fn checked_mul(&self, other: &Self) -> Option<Self>;
    fn into_big(self) -> BigUint;
}

impl Counter for u64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add_in_place(&mut self, other: &Self) -> bool {
        match self.checked_add(*other) {
            Some(v) => {
                *self = v;
                true
            }
            None => false,
        }
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        u64::checked_mul(*self, *other)
    }
    fn into_big(self) -> BigUint {
        BigUint::from(self)
    }
}

impl Counter for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_in_place(&mut self, other: &Self) -> bool {
        *self += other;
        true
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn into_big(self) -> BigUint {
        self
    }
}

/// Table of counts indexed by an assignment of the node's separator
/// vertices (mixed radix over host vertices, least-significant first).
enum Table<C> {
    Dense(Vec<C>),
    Sparse(HashMap<u128, C>),
}

const DENSE_LIMIT: u128 = 1 << 23;

impl<C: Counter> Table<C> {
    fn new(slots: u128) -> Self {
        if slots <= DENSE_LIMIT {
            Table::Dense(vec![C::zero(); slots as usize])
        } else {
            Table::Sparse(HashMap::new())
        }
    }

    fn add(&mut self, idx: u128, value: &C) -> bool {
        match self {
            Table::Dense(v) => v[idx as usize].add_in_place(value),
            Table::Sparse(m) => m.entry(idx).or_insert_with(C::zero).add_in_place(value),
        }
    }

    fn get(&self, idx: u128) -> Option<&C> {
        match self {
            Table::Dense(v) => {
                let c = &v[idx as usize];
                if c.is_zero() {
                    None
                } else {
                    Some(c)
                }
            }
            Table::Sparse(m) => m.get(&idx),
        }
    }
}

/// Runs the DP on one connected component. Returns None on counter overflow.
fn dp_component<C: Counter>(
    pattern: &Graph,
    td: &TreeDecomposition,
    host: &Graph,
) -> Option<BigUint> {
    let table = eval_node::<C>(pattern, td, td.root, host)?;
    // The root separator is empty: exactly one slot.
    let total = match &table {
        Table::Dense(v) => v.first().cloned().unwrap_or_else(C::zero),
        Table::Sparse(m) => m.get(&0).cloned().unwrap_or_else(C::zero),
    };
    Some(total.into_big())
}

fn sep_index(sep: &[usize], images: &HashMap<usize, usize>, n: u128) -> u128 {
    let mut idx: u128 = 0;
    for &v in sep.iter().rev() {
        idx = idx * n + images[&v] as u128;
    }
    idx
}

fn eval_node<C: Counter>(
    pattern: &Graph,
    td: &TreeDecomposition,
    node: usize,
    host: &Graph,
) -> Option<Table<C>> {
    let nd = &td.nodes[node];
    let n = host.vertex_count() as u128;

    let child_tables: Vec<Table<C>> = nd
        .children
        .iter()
        .map(|&c| eval_node::<C>(pattern, td, c, host))
        .collect::<Option<_>>()?;

    let order = enumeration_order(&nd.bag, pattern);
    let pos_of: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // Child c's table is consulted as soon as the last vertex of its
    // separator is placed; an empty separator is consulted up front.
    let mut ready_at: Vec<Vec<usize>> = vec![Vec::new(); order.len() + 1];
    for (ci, &c) in nd.children.iter().enumerate() {
        let last = td.nodes[c]
            .separator
            .iter()
            .map(|v| pos_of[v] + 1)
            .max()
            .unwrap_or(0);
        ready_at[last].push(ci);
    }

    let slots = checked_pow_u128(host.vertex_count(), nd.separator.len())
        .expect("separator fits budget check");
    let mut out = Table::<C>::new(slots.max(1));

    // Pre-multiplied factor for children with empty separators.
    let mut base = C::one();
    for &ci in &ready_at[0] {
        let t = &child_tables[ci];
        match t.get(0) {
            Some(f) => base = base.checked_mul(f)?,
            None => return Some(out), // child contributes zero everywhere
        }
    }

    let mut images: HashMap<usize, usize> = HashMap::new();
    let overflow = !enumerate(
        pattern,
        host,
        &order,
        0,
        &mut images,
        &base,
        &child_tables,
        &ready_at,
        td,
        nd,
        n,
        &mut out,
    );
    if overflow {
        return None;
    }
    Some(out)
}

/// Depth-first enumeration of bag assignments consistent with the pattern
/// edges inside the bag. Returns false on counter overflow.
#[allow(clippy::too_many_arguments)]
fn enumerate<C: Counter>(
    pattern: &Graph,
    host: &Graph,
    order: &[usize],
    depth: usize,
    images: &mut HashMap<usize, usize>,
    factor: &C,
    child_tables: &[Table<C>],
    ready_at: &[Vec<usize>],
    td: &TreeDecomposition,
    nd: &crate::treedec::TdNode,
    n: u128,
    out: &mut Table<C>,
) -> bool {
    if depth == order.len() {
        let idx = sep_index(&nd.separator, images, n);
        return out.add(idx, factor);
    }
    let v = order[depth];
    // Pattern neighbors of v already placed.
    let placed: Vec<usize> = pattern
        .neighbors(v)
        .iter()
        .filter_map(|w| images.get(w).copied())
        .collect();

    // Candidate images: the neighborhood of the lowest-degree placed image,
    // or every host vertex when v is unconstrained so far.
    let all_vertices: Vec<usize>;
    let candidates: &[usize] = match placed
        .iter()
        .copied()
        .min_by_key(|&g| host.degree(g))
    {
        Some(anchor) => host.neighbors(anchor),
        None => {
            all_vertices = (0..host.vertex_count()).collect();
            &all_vertices
        }
    };

    'cand: for &img in candidates {
        for &p in &placed {
            if !host.has_edge(p, img) {
                continue 'cand;
            }
        }
        images.insert(v, img);
        // Fold in children whose separator just completed.
        let mut f = factor.clone();
        let mut dead = false;
        for &ci in &ready_at[depth + 1] {
            let child = nd.children[ci];
            let idx = sep_index(&td.nodes[child].separator, images, n);
            match child_tables[ci].get(idx) {
                Some(w) => match f.checked_mul(w) {
                    Some(v2) => f = v2,
                    None => {
                        images.remove(&v);
                        return false;
                    }
                },
                None => {
                    dead = true;
                    break;
                }
            }
        }
        if !dead
            && !enumerate(
                pattern,
                host,
                order,
                depth + 1,
                images,
                &f,
                child_tables,
                ready_at,
                td,
                nd,
                n,
                out,
            )
        {
            images.remove(&v);
            return false;
        }
        images.remove(&v);
    }
    true
}

/// Orders the bag so that as many vertices as possible are placed with at
/// least one already-placed pattern neighbor (those placements iterate a
/// neighborhood instead of the whole host).
fn enumeration_order(bag: &[usize], pattern: &Graph) -> Vec<usize> {
    let mut best: Option<(usize, Vec<usize>)> = None;
    for &first in bag {
        let mut order = vec![first];
        let mut remaining: Vec<usize> = bag.iter().copied().filter(|&v| v != first).collect();
        let mut unconstrained = 0;
        while !remaining.is_empty() {
            let (i, &v) = remaining
                .iter()
                .enumerate()
                .max_by_key(|(_, &v)| {
                    let placed = pattern
                        .neighbors(v)
                        .iter()
                        .filter(|w| order.contains(w))
                        .count();
                    (placed, std::cmp::Reverse(v))
                })
                .unwrap();
            let placed = pattern
                .neighbors(v)
                .iter()
                .filter(|w| order.contains(w))
                .count();
            if placed == 0 {
                unconstrained += 1;
            }
            order.push(v);
            remaining.remove(i);
        }
        let cand = (unconstrained, order);
        if best
            .as_ref()
            .map_or(true, |(u, o)| cand.0 < *u || (cand.0 == *u && cand.1 < *o))
        {
            best = Some(cand);
        }
    }
    best.map(|(_, o)| o).unwrap_or_default()
}
