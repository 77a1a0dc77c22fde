//! Finite block families with disjoint-sum structure, and diagonal
//! pseudo-intersections of nested chains.
//!
//! A block family is a list of pairwise disjoint finite sets `B_1..B_d` of
//! positive integers such that `(B_i + B_j) ∩ B_m` is empty unless
//! `i = j = m`, while each diagonal `(B_m + B_m) ∩ B_m` is nonempty, and
//! block `B_j` forces a `j`-dimensional witness under every `j`-coloring.
//! The construction works level by level: block `j + 1` is drawn from the
//! zero residue class modulo `x_q + 1` of the tail `{x_n : n > 2q}` of the
//! base enumeration, where `q` is the largest base index used so far. Only
//! the zero class can contain its own pairwise sums (if `a`, `b`, `a + b`
//! are all ≡ i mod M then i ≡ 0 mod M), so it is the one class worth
//! refining into.
//!
//! Block sizes come from a [`SchurNumberProvider`]: exact values from the
//! solver where affordable, upper surrogates otherwise. Surrogates are
//! sound for every check here because forcing is preserved when a prefix
//! gets longer; blocks built from surrogates are flagged in their metadata.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::enumeration::Enumeration;
use crate::group::{AmbientGroup, GroupElement};
use crate::solver::{compute_schur_number_with_budget, search_valid_coloring, Budget, SchurStatus};
use crate::Error;

/// Shape of a concretely enumerable subset of the positive integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HandleDescriptor {
    /// All positive integers.
    Naturals,
    /// `{ x >= min : x ≡ residue (mod modulus) }`.
    ResidueTail { modulus: i64, residue: i64, min: i64 },
    /// Intersection of the parts.
    Intersection(Vec<HandleDescriptor>),
}

/// A set of positive integers with a membership predicate and an increasing
/// enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchurSetHandle {
    descriptor: HandleDescriptor,
}

impl SchurSetHandle {
    pub fn naturals() -> Self {
        SchurSetHandle {
            descriptor: HandleDescriptor::Naturals,
        }
    }

    pub fn residue_tail(modulus: i64, residue: i64, min: i64) -> Result<Self, Error> {
        if modulus < 1 {
            return Err(Error::InvalidParameter("modulus must be positive"));
        }
        Ok(SchurSetHandle {
            descriptor: HandleDescriptor::ResidueTail {
                modulus,
                residue: residue.rem_euclid(modulus),
                min,
            },
        })
    }

    pub fn intersection(parts: Vec<SchurSetHandle>) -> Result<Self, Error> {
        if parts.is_empty() {
            return Err(Error::InvalidParameter("intersection needs at least one part"));
        }
        Ok(SchurSetHandle {
            descriptor: HandleDescriptor::Intersection(
                parts.into_iter().map(|h| h.descriptor).collect(),
            ),
        })
    }

    pub fn descriptor(&self) -> &HandleDescriptor {
        &self.descriptor
    }

    pub fn contains(&self, x: i64) -> bool {
        descriptor_contains(&self.descriptor, x)
    }

    /// Increasing iteration. The iterator ends once a full period of the
    /// underlying residue structure passes without a member, so empty
    /// intersections terminate.
    pub fn iter(&self) -> HandleIter<'_> {
        let (next, step) = driver(&self.descriptor);
        let lower = lower_bound(&self.descriptor);
        let mut next = next;
        if next < lower {
            let gap = lower - next;
            next += (gap + step - 1) / step * step;
        }
        HandleIter {
            handle: self,
            next,
            step,
            period: period(&self.descriptor),
        }
    }

    /// The first `count` elements; shorter if the set runs dry.
    pub fn first_elements(&self, count: usize) -> Vec<i64> {
        self.iter().take(count).collect()
    }

    /// The `n`-th element (1-based) of the increasing enumeration.
    pub fn nth(&self, n: usize) -> Option<i64> {
        if n == 0 {
            return None;
        }
        match &self.descriptor {
            HandleDescriptor::Naturals => Some(n as i64),
            HandleDescriptor::ResidueTail { .. } => self.iter().nth(n - 1),
            HandleDescriptor::Intersection(_) => self.iter().nth(n - 1),
        }
    }

    /// 1-based index of `x` in the increasing enumeration.
    pub fn index_of(&self, x: i64) -> Option<usize> {
        if !self.contains(x) {
            return None;
        }
        match &self.descriptor {
            HandleDescriptor::Naturals => Some(x as usize),
            HandleDescriptor::ResidueTail { modulus, .. } => {
                let first = self.iter().next()?;
                Some(((x - first) / modulus) as usize + 1)
            }
            HandleDescriptor::Intersection(_) => {
                self.iter().take_while(|&y| y <= x).position(|y| y == x).map(|p| p + 1)
            }
        }
    }

    /// An [`Enumeration`] of this set for the solver. Intersections are
    /// materialized up to `len_hint` elements.
    pub fn enumeration(&self, len_hint: usize) -> Result<Enumeration, Error> {
        match &self.descriptor {
            HandleDescriptor::Naturals => Ok(Enumeration::natural()),
            HandleDescriptor::ResidueTail {
                modulus,
                residue,
                min,
            } => Enumeration::residue_tail(*modulus, *residue, *min),
            HandleDescriptor::Intersection(_) => Enumeration::explicit(
                AmbientGroup::Integers,
                self.first_elements(len_hint)
                    .into_iter()
                    .map(GroupElement::Int)
                    .collect(),
            ),
        }
    }
}

fn descriptor_contains(d: &HandleDescriptor, x: i64) -> bool {
    match d {
        HandleDescriptor::Naturals => x >= 1,
        HandleDescriptor::ResidueTail {
            modulus,
            residue,
            min,
        } => x >= *min && x.rem_euclid(*modulus) == *residue,
        HandleDescriptor::Intersection(parts) => parts.iter().all(|p| descriptor_contains(p, x)),
    }
}

/// (first candidate, step) of the coarsest arithmetic progression that
/// covers the set.
fn driver(d: &HandleDescriptor) -> (i64, i64) {
    match d {
        HandleDescriptor::Naturals => (1, 1),
        HandleDescriptor::ResidueTail {
            modulus,
            residue,
            min,
        } => {
            let first = min + (residue - min).rem_euclid(*modulus);
            (first, *modulus)
        }
        HandleDescriptor::Intersection(parts) => parts
            .iter()
            .map(driver)
            .max_by_key(|&(_, step)| step)
            .expect("intersections are nonempty"),
    }
}

fn lower_bound(d: &HandleDescriptor) -> i64 {
    match d {
        HandleDescriptor::Naturals => 1,
        HandleDescriptor::ResidueTail { min, .. } => *min,
        HandleDescriptor::Intersection(parts) => {
            parts.iter().map(lower_bound).max().expect("nonempty")
        }
    }
}

/// Saturating period of the membership pattern (lcm of all moduli).
fn period(d: &HandleDescriptor) -> i64 {
    match d {
        HandleDescriptor::Naturals => 1,
        HandleDescriptor::ResidueTail { modulus, .. } => *modulus,
        HandleDescriptor::Intersection(parts) => {
            let mut acc: i64 = 1;
            for p in parts {
                let m = period(p);
                let g = gcd(acc, m);
                acc = match (acc / g).checked_mul(m) {
                    Some(v) => v,
                    None => return i64::MAX,
                };
            }
            acc
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub struct HandleIter<'a> {
    handle: &'a SchurSetHandle,
    next: i64,
    step: i64,
    period: i64,
}

impl<'a> Iterator for HandleIter<'a> {
    type Item = i64;

    fn next(&mut self) -> Option<i64> {
        let mut candidate = self.next;
        let mut span: i64 = 0;
        loop {
            if span > self.period {
                return None;
            }
            let hit = self.handle.contains(candidate);
            candidate = candidate.checked_add(self.step)?;
            span = span.saturating_add(self.step);
            if hit {
                self.next = candidate;
                return Some(candidate - self.step);
            }
        }
    }
}

/// An exact value or an upper surrogate for some `S(r, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProvidedValue {
    pub value: usize,
    pub surrogate: bool,
}

/// Supplies prefix lengths for block construction: either exact Schur
/// numbers or user-supplied upper surrogates.
pub trait SchurNumberProvider {
    /// `S(r, k)` for the increasing enumeration of `handle`, or an upper
    /// surrogate for it.
    fn provide(&mut self, r: u32, k: usize, handle: &SchurSetHandle) -> Result<ProvidedValue, Error>;
}

/// Computes exact values with the backtracking solver.
#[derive(Debug, Clone)]
pub struct SolverProvider {
    pub max_n: usize,
    pub budget: Option<Budget>,
}

impl SolverProvider {
    pub fn new(max_n: usize) -> Self {
        SolverProvider {
            max_n,
            budget: None,
        }
    }
}

impl SchurNumberProvider for SolverProvider {
    fn provide(&mut self, r: u32, k: usize, handle: &SchurSetHandle) -> Result<ProvidedValue, Error> {
        let enumeration = handle.enumeration(self.max_n)?;
        let result =
            compute_schur_number_with_budget(r, k, self.max_n, &enumeration, self.budget.as_ref())?;
        match result.status {
            SchurStatus::Exact(value) => Ok(ProvidedValue {
                value,
                surrogate: false,
            }),
            SchurStatus::LowerBound(_) | SchurStatus::Vacuous => {
                Err(Error::ProviderNoExact { r, k: k as u32 })
            }
        }
    }
}

/// Upper surrogates keyed by `(r, k)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SurrogateTable {
    entries: BTreeMap<(u32, usize), usize>,
}

impl SurrogateTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, r: u32, k: usize, value: usize) {
        self.entries.insert((r, k), value);
    }

    pub fn get(&self, r: u32, k: usize) -> Option<usize> {
        self.entries.get(&(r, k)).copied()
    }

    /// A surrogate must dominate any exact value later computed for the
    /// same key.
    pub fn check_dominates(&self, r: u32, k: usize, exact: usize) -> Result<(), Error> {
        match self.get(r, k) {
            Some(surrogate) if surrogate < exact => Err(Error::SurrogateBelowExact {
                r,
                k: k as u32,
                surrogate,
                exact,
            }),
            _ => Ok(()),
        }
    }
}

impl SchurNumberProvider for SurrogateTable {
    fn provide(&mut self, r: u32, k: usize, _handle: &SchurSetHandle) -> Result<ProvidedValue, Error> {
        self.get(r, k)
            .map(|value| ProvidedValue {
                value,
                surrogate: true,
            })
            .ok_or(Error::ProviderMissingValue { r, k: k as u32 })
    }
}

/// Uses a surrogate where one is tabled, otherwise solves exactly.
#[derive(Debug, Clone)]
pub struct TieredProvider {
    pub surrogates: SurrogateTable,
    pub solver: SolverProvider,
}

impl SchurNumberProvider for TieredProvider {
    fn provide(&mut self, r: u32, k: usize, handle: &SchurSetHandle) -> Result<ProvidedValue, Error> {
        if self.surrogates.get(r, k).is_some() {
            self.surrogates.provide(r, k, handle)
        } else {
            self.solver.provide(r, k, handle)
        }
    }
}

/// Per-block construction metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMeta {
    pub modulus: i64,
    pub residue: i64,
    pub prefix_length: usize,
    pub surrogate: bool,
    pub source: SchurSetHandle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub elements: Vec<i64>,
    pub meta: BlockMeta,
}

/// Finite blocks `B_1..B_d` with their construction metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockFamily {
    blocks: Vec<Block>,
}

impl BlockFamily {
    pub fn from_blocks(blocks: Vec<Block>) -> Self {
        BlockFamily { blocks }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn depth(&self) -> usize {
        self.blocks.len()
    }

    /// Union of all blocks, sorted.
    pub fn union(&self) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .blocks
            .iter()
            .flat_map(|b| b.elements.iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Builds the level-by-level block family over `base`.
///
/// `B_1` is the first `S(1,1)` elements of the base. At each later level,
/// with `q` the largest base index used so far and `x_q` the corresponding
/// element, the next block is the first `S(k+1, k+1)` elements of the zero
/// residue class modulo `x_q + 1` within the tail `{x_n : n > 2q}`.
///
/// A provider failure aborts the construction and reports the finished
/// levels as a partial family.
pub fn construct_block_family(
    depth: usize,
    base: &SchurSetHandle,
    provider: &mut dyn SchurNumberProvider,
) -> Result<BlockFamily, Error> {
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be positive"));
    }
    let mut family = BlockFamily { blocks: Vec::new() };
    for level in 1..=depth {
        let (handle, meta_modulus) = if level == 1 {
            (base.clone(), 1)
        } else {
            let q = max_base_index(base, &family)?;
            let x_q = base
                .nth(q)
                .ok_or(Error::UnsupportedHandle("base enumeration ran dry"))?;
            let modulus = x_q + 1;
            let tail_min = base
                .nth(2 * q + 1)
                .ok_or(Error::UnsupportedHandle("base enumeration ran dry"))?;
            (zero_class(base, modulus, tail_min)?, modulus)
        };
        let provided = provider
            .provide(level as u32, level, &handle)
            .map_err(|e| construction_error(level, &family, e))?;
        let elements = handle.first_elements(provided.value);
        if elements.len() < provided.value {
            let e = Error::UnsupportedHandle("residue class has too few elements");
            return Err(construction_error(level, &family, e));
        }
        family.blocks.push(Block {
            elements,
            meta: BlockMeta {
                modulus: meta_modulus,
                residue: 0,
                prefix_length: provided.value,
                surrogate: provided.surrogate,
                source: handle,
            },
        });
    }
    Ok(family)
}

fn construction_error(level: usize, family: &BlockFamily, source: Error) -> Error {
    Error::BlockConstruction {
        level,
        partial: Box::new(family.clone()),
        source: Box::new(source),
    }
}

fn max_base_index(base: &SchurSetHandle, family: &BlockFamily) -> Result<usize, Error> {
    family
        .blocks
        .iter()
        .flat_map(|b| b.elements.iter())
        .map(|&x| {
            base.index_of(x)
                .ok_or(Error::UnsupportedHandle("block element outside the base"))
        })
        .try_fold(0usize, |acc, idx| idx.map(|i| acc.max(i)))
}

/// The zero residue class mod `modulus` within the base, from `min` on.
fn zero_class(base: &SchurSetHandle, modulus: i64, min: i64) -> Result<SchurSetHandle, Error> {
    let class = SchurSetHandle::residue_tail(modulus, 0, min)?;
    match base.descriptor() {
        HandleDescriptor::Naturals => Ok(class),
        _ => SchurSetHandle::intersection(vec![base.clone(), class]),
    }
}

/// One `(i, j, m)` entry of a disjoint-sums check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumTripleCheck {
    pub i: usize,
    pub j: usize,
    pub m: usize,
    pub intersection: Vec<i64>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjointSumsReport {
    pub entries: Vec<SumTripleCheck>,
    pub pass: bool,
}

/// Exhaustively checks `(B_i + B_j) ∩ B_m` over all index triples: the
/// intersection must be empty off the diagonal and nonempty on it.
pub fn verify_disjoint_sums(family: &BlockFamily) -> DisjointSumsReport {
    let d = family.depth();
    let sets: Vec<BTreeSet<i64>> = family
        .blocks
        .iter()
        .map(|b| b.elements.iter().copied().collect())
        .collect();
    let mut entries = Vec::with_capacity(d * d * d);
    let mut pass = true;
    for i in 1..=d {
        for j in 1..=d {
            for m in 1..=d {
                let mut intersection = BTreeSet::new();
                for &x in &family.blocks[i - 1].elements {
                    for &y in &family.blocks[j - 1].elements {
                        if let Some(s) = x.checked_add(y) {
                            if sets[m - 1].contains(&s) {
                                intersection.insert(s);
                            }
                        }
                    }
                }
                let diagonal = i == j && j == m;
                let ok = diagonal != intersection.is_empty();
                pass &= ok;
                entries.push(SumTripleCheck {
                    i,
                    j,
                    m,
                    intersection: intersection.into_iter().collect(),
                    ok,
                });
            }
        }
    }
    DisjointSumsReport { entries, pass }
}

/// Whether block `j` (1-based) forces a `j`-dimensional witness under every
/// `j`-coloring of itself, decided by exhaustive solver search on the
/// block's inherited enumeration. Forcing for colorings of the whole union
/// follows by restriction.
pub fn verify_forcing(
    family: &BlockFamily,
    j: usize,
    budget: Option<&Budget>,
) -> Result<bool, Error> {
    let block = family
        .blocks
        .get(j.wrapping_sub(1))
        .ok_or(Error::InvalidParameter("block index out of range"))?;
    let elements = block
        .elements
        .iter()
        .map(|&x| GroupElement::Int(x))
        .collect();
    let enumeration = Enumeration::explicit(AmbientGroup::Integers, elements)?;
    let found = search_valid_coloring(j as u32, j, block.elements.len(), &enumeration, budget)?;
    Ok(found.is_none())
}

/// Checks that sum partners stay inside their own block: with `W` the union
/// of all blocks, every `a ∈ B_n` and `b ∈ W` with `a + b ∈ W` has
/// `b ∈ B_n`. This is the finite certificate that each element of `W` has
/// only finitely many sum partners within `W`.
pub fn verify_sum_partner_locality(family: &BlockFamily) -> bool {
    let union: BTreeSet<i64> = family.union().into_iter().collect();
    for block in &family.blocks {
        let own: BTreeSet<i64> = block.elements.iter().copied().collect();
        for &a in &block.elements {
            for &b in &union {
                let sum_in = a
                    .checked_add(b)
                    .map(|s| union.contains(&s))
                    .unwrap_or(false);
                if sum_in && !own.contains(&b) {
                    return false;
                }
            }
        }
    }
    true
}

/// Blocks drawn from a decreasing chain `V_1 ⊇ V_2 ⊇ ... ⊇ V_m`, realizing
/// a finite pseudo-intersection: the union `W` leaves each `V_n` only
/// through the earlier blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalFamily {
    pub family: BlockFamily,
    pub chain: Vec<SchurSetHandle>,
}

/// Takes `B_n` = the first `S(n, n)` elements of `V_n` for each chain
/// member, so that `W = ∪ B_n` satisfies `W \ V_n ⊆ B_1 ∪ ... ∪ B_{n-1}`.
pub fn diagonal_pseudo_intersection(
    chain: &[SchurSetHandle],
    provider: &mut dyn SchurNumberProvider,
) -> Result<DiagonalFamily, Error> {
    if chain.is_empty() {
        return Err(Error::InvalidParameter("chain must be nonempty"));
    }
    let mut family = BlockFamily { blocks: Vec::new() };
    for (idx, v) in chain.iter().enumerate() {
        let level = idx + 1;
        let provided = provider
            .provide(level as u32, level, v)
            .map_err(|e| construction_error(level, &family, e))?;
        let elements = v.first_elements(provided.value);
        if elements.len() < provided.value {
            let e = Error::UnsupportedHandle("chain member has too few elements");
            return Err(construction_error(level, &family, e));
        }
        let (modulus, residue) = match v.descriptor() {
            HandleDescriptor::ResidueTail {
                modulus, residue, ..
            } => (*modulus, *residue),
            _ => (1, 0),
        };
        family.blocks.push(Block {
            elements,
            meta: BlockMeta {
                modulus,
                residue,
                prefix_length: provided.value,
                surrogate: provided.surrogate,
                source: v.clone(),
            },
        });
    }
    Ok(DiagonalFamily {
        family,
        chain: chain.to_vec(),
    })
}

impl DiagonalFamily {
    pub fn union(&self) -> Vec<i64> {
        self.family.union()
    }

    /// Exhaustively checks `W \ V_n ⊆ B_1 ∪ ... ∪ B_{n-1}` for every chain
    /// member.
    pub fn verify_pseudo_intersection(&self) -> bool {
        let w = self.union();
        for (idx, v) in self.chain.iter().enumerate() {
            let earlier: BTreeSet<i64> = self.family.blocks[..idx]
                .iter()
                .flat_map(|b| b.elements.iter().copied())
                .collect();
            for &x in &w {
                if !v.contains(x) && !earlier.contains(&x) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn handle_iteration_and_membership() {
        let h = SchurSetHandle::residue_tail(3, 0, 5).unwrap();
        assert_eq!(h.first_elements(4), vec![6, 9, 12, 15]);
        assert!(h.contains(9));
        assert!(!h.contains(8));
        assert!(!h.contains(3));
        assert_eq!(h.index_of(12), Some(3));
        assert_eq!(h.nth(3), Some(12));
    }

    #[test]
    fn intersection_handles_work() {
        let a = SchurSetHandle::residue_tail(3, 0, 1).unwrap();
        let b = SchurSetHandle::residue_tail(2, 0, 1).unwrap();
        let h = SchurSetHandle::intersection(vec![a, b]).unwrap();
        assert_eq!(h.first_elements(3), vec![6, 12, 18]);
        assert_eq!(h.index_of(18), Some(3));
    }

    #[test]
    fn empty_intersection_terminates() {
        let a = SchurSetHandle::residue_tail(2, 0, 1).unwrap();
        let b = SchurSetHandle::residue_tail(2, 1, 1).unwrap();
        let h = SchurSetHandle::intersection(vec![a, b]).unwrap();
        assert_eq!(h.first_elements(1), Vec::<i64>::new());
    }

    #[test]
    fn depth_one_family_over_naturals() {
        let mut provider = SolverProvider::new(16);
        let family =
            construct_block_family(1, &SchurSetHandle::naturals(), &mut provider).unwrap();
        assert_eq!(family.blocks()[0].elements, vec![1, 2]);
        let report = verify_disjoint_sums(&family);
        assert!(report.pass);
        // diagonal: 1 + 1 = 2 lies in the block
        assert_eq!(report.entries[0].intersection, vec![2]);
        assert!(verify_sum_partner_locality(&family));
        assert!(verify_forcing(&family, 1, None).unwrap());
    }

    #[test]
    fn surrogate_table_checks_domination() {
        let mut t = SurrogateTable::new();
        t.insert(3, 3, 40);
        assert!(t.check_dominates(3, 3, 40).is_ok());
        assert!(t.check_dominates(3, 3, 39).is_ok());
        assert!(matches!(
            t.check_dominates(3, 3, 41),
            Err(Error::SurrogateBelowExact { .. })
        ));
        assert!(t.check_dominates(2, 2, 99).is_ok());
    }

    #[test]
    fn provider_failure_reports_partial_family() {
        // surrogate table that only knows level 1
        let mut t = SurrogateTable::new();
        t.insert(1, 1, 2);
        let err =
            construct_block_family(2, &SchurSetHandle::naturals(), &mut t).unwrap_err();
        match err {
            Error::BlockConstruction { level, partial, .. } => {
                assert_eq!(level, 2);
                assert_eq!(partial.depth(), 1);
                assert_eq!(partial.blocks()[0].elements, vec![1, 2]);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn singleton_chain_gives_first_block() {
        let mut provider = SolverProvider::new(16);
        let chain = vec![SchurSetHandle::naturals()];
        let d = diagonal_pseudo_intersection(&chain, &mut provider).unwrap();
        assert_eq!(d.union(), vec![1, 2]);
        assert!(d.verify_pseudo_intersection());
    }

    fn depth_two_family() -> BlockFamily {
        let mut provider = SolverProvider::new(40);
        construct_block_family(2, &SchurSetHandle::naturals(), &mut provider).unwrap()
    }

    #[test]
    fn depth_two_structure() {
        let family = depth_two_family();
        // B_1 = {1, 2}, so q = 2, modulus 3, tail from 5, zero class 6, 9, ...
        assert_eq!(family.blocks()[0].elements, vec![1, 2]);
        let b2 = &family.blocks()[1];
        assert_eq!(b2.meta.modulus, 3);
        assert_eq!(b2.meta.residue, 0);
        assert!(!b2.meta.surrogate);
        assert_eq!(b2.elements[0], 6);
        assert!(b2.elements.iter().all(|&x| x % 3 == 0 && x >= 6));
        assert!(b2.elements.windows(2).all(|w| w[1] - w[0] == 3));

        let report = verify_disjoint_sums(&family);
        assert!(report.pass);
        // (B_1 + B_1) ∩ B_2 is empty: sums reach only 4, the class starts at 6
        let entry = report
            .entries
            .iter()
            .find(|e| (e.i, e.j, e.m) == (1, 1, 2))
            .unwrap();
        assert!(entry.intersection.is_empty());
        assert!(verify_sum_partner_locality(&family));
        assert!(verify_forcing(&family, 1, None).unwrap());
        assert!(verify_forcing(&family, 2, None).unwrap());
    }

    #[test]
    fn tampered_family_is_caught() {
        let family = depth_two_family();
        let mut blocks = family.blocks().to_vec();
        // 7 = 1 + 6 with 1 in B_1 and 6 in B_2, so (B_1 + B_2) hits B_2
        blocks[1].elements.push(7);
        blocks[1].elements.sort_unstable();
        let tampered = BlockFamily::from_blocks(blocks);
        let report = verify_disjoint_sums(&tampered);
        assert!(!report.pass);
        let entry = report
            .entries
            .iter()
            .find(|e| (e.i, e.j, e.m) == (1, 2, 2))
            .unwrap();
        assert!(entry.intersection.contains(&7));
        assert!(!verify_sum_partner_locality(&tampered));
    }

    #[test]
    fn truncated_block_loses_forcing() {
        let family = depth_two_family();
        let mut blocks = family.blocks().to_vec();
        blocks[1].elements.pop();
        let truncated = BlockFamily::from_blocks(blocks);
        // |B_2| is now below S(2,2) for its enumeration, so a valid
        // 2-coloring exists
        assert!(!verify_forcing(&truncated, 2, None).unwrap());
    }

    #[test]
    fn longer_block_keeps_forcing() {
        // surrogate safety: any length at or above the exact value forces
        let family = depth_two_family();
        let mut blocks = family.blocks().to_vec();
        let p2 = blocks[1].elements.len();
        blocks[1].elements = blocks[1].meta.source.first_elements(p2 + 3);
        let extended = BlockFamily::from_blocks(blocks);
        assert!(verify_forcing(&extended, 2, None).unwrap());
    }

    #[test]
    fn oracle_confirms_level_two_size() {
        // |B_2| = S(2,2) for the enumeration 6, 9, 12, ...: the oracle
        // agrees that length-1 prefixes shorter admit valid colorings and
        // the full length does not.
        let family = depth_two_family();
        let p2 = family.blocks()[1].meta.prefix_length;
        let enumeration = Enumeration::residue_tail(3, 0, 5).unwrap();
        let at = |n: usize| {
            let prefix = enumeration.prefix(n).unwrap();
            crate::oracle::oracle_count_valid(&prefix, 2, 2).unwrap()
        };
        assert!(at(p2 - 1) > 0);
        assert_eq!(at(p2), 0);
    }

    #[test]
    fn three_chain_pseudo_intersection() {
        let mut provider = TieredProvider {
            surrogates: {
                let mut t = SurrogateTable::new();
                t.insert(3, 3, 8);
                t
            },
            solver: SolverProvider::new(40),
        };
        let chain = vec![
            SchurSetHandle::naturals(),
            SchurSetHandle::residue_tail(3, 0, 6).unwrap(),
            SchurSetHandle::residue_tail(9, 0, 18).unwrap(),
        ];
        let d = diagonal_pseudo_intersection(&chain, &mut provider).unwrap();
        assert!(d.verify_pseudo_intersection());
        let w = d.union();
        // every element outside V_2 comes from B_1
        let b1: BTreeSet<i64> = d.family.blocks()[0].elements.iter().copied().collect();
        for &x in &w {
            if !chain[1].contains(x) {
                assert!(b1.contains(&x));
            }
        }
        // |W \ V_n| is at most the size of the earlier blocks
        for (idx, v) in chain.iter().enumerate() {
            let escaped = w.iter().filter(|&&x| !v.contains(x)).count();
            let earlier: usize = d.family.blocks()[..idx]
                .iter()
                .map(|b| b.elements.len())
                .sum();
            assert!(escaped <= earlier);
        }
    }
}
