//! Exact backtracking search for `S(r, k)`.
//!
//! Positions are colored in enumeration order. The search maintains, per
//! anchor position `a` and color `c`, the number of fully assigned partners
//! `b` with `a`, `b`, `a+b` all colored `c`; a state where some counter
//! reaches `k` is a forced witness and is never retained. After assigning
//! position `m`, only triples whose latest position is `m` are re-examined:
//! a configuration becomes monochromatic exactly when its last element is
//! colored.
//!
//! Symmetry breaking restricts the search to colorings where color `j + 1`
//! first appears after color `j` first appears; every valid coloring maps to
//! such a canonical one by reordering colors by first occurrence.

use alloc::vec;
use alloc::vec::Vec;

use core::time::Duration;

use crate::coloring::Coloring;
use crate::enumeration::{Enumeration, Prefix};
use crate::witness::{enumerate_configurations, PartnerTable};
use crate::Error;

#[cfg(feature = "std")]
pub mod parallel;

/// Search effort accounting. `nodes` counts attempted assignments,
/// `backtracks` counts undone assignments. `wall` is zero without the
/// `std` feature.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub nodes: u64,
    pub backtracks: u64,
    pub wall: Duration,
    pub workers: u32,
}

impl SolverStats {
    pub(crate) fn absorb(&mut self, other: &SolverStats) {
        self.nodes += other.nodes;
        self.backtracks += other.backtracks;
        self.wall += other.wall;
    }
}

/// Optional search limits. Exhausting a budget is an error distinct from a
/// proven absence; absence claims are only ever exhaustive.
///
/// `max_millis` requires the `std` feature and is ignored without it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_millis: Option<u64>,
}

impl Budget {
    pub fn nodes(max_nodes: u64) -> Self {
        Budget {
            max_nodes: Some(max_nodes),
            max_millis: None,
        }
    }

    pub fn millis(max_millis: u64) -> Self {
        Budget {
            max_nodes: None,
            max_millis: Some(max_millis),
        }
    }
}

/// Exactness status of a computed Schur number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchurStatus {
    /// Least `n` with no valid coloring; proven by exhausting length `n`.
    Exact(usize),
    /// Valid colorings exist through `n`; the true value exceeds `n`.
    LowerBound(usize),
    /// The scanned range contains no configuration at all, so every
    /// coloring is trivially valid and the bound carries no content.
    Vacuous,
}

/// Result of a Schur-number computation, with certificate and effort stats.
///
/// An `Exact(n)` result carries a valid coloring of length `n - 1`; a
/// `LowerBound(n)` result carries one of length `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurNumberResult {
    pub r: u32,
    pub k: usize,
    pub status: SchurStatus,
    pub certificate: Option<Coloring>,
    pub stats: SolverStats,
}

/// A search decision plus its stats.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub coloring: Option<Coloring>,
    pub stats: SolverStats,
}

pub(crate) enum Interrupt {
    Budget,
    #[cfg_attr(not(feature = "std"), allow(dead_code))]
    Cancelled,
}

/// Incremental search state: a partial coloring of the positions
/// `0..depth()` together with exact per-(anchor, color) trigger counters.
///
/// Triples live in one flat array grouped by their maximum position. Each
/// entry stores the anchor's counter base and the triple's two positions
/// other than one occurrence of the maximum; the maximum itself is the
/// group index. An unassigned position reads color 0, so a stored position
/// equal to the group index acts as a wildcard until it is colored. Every
/// assignment logs the counter slots it bumped and undo replays the log.
#[derive(Debug, Clone)]
pub struct SearchState {
    n: usize,
    r: u32,
    k: u32,
    /// Start of each position's triple group; length `n + 1`.
    triple_offsets: Vec<u32>,
    /// `(anchor * r, other position 1, other position 2)` per triple,
    /// grouped by the triple's maximum position.
    triples: Vec<(u32, u32, u32)>,
    colors: Vec<u8>,
    counters: Vec<u32>,
    depth: usize,
    undo_log: Vec<u32>,
    undo_marks: Vec<u32>,
}

impl SearchState {
    pub fn new(prefix: &Prefix, r: u32, k: usize) -> Self {
        assert!((1..=250).contains(&r), "color count out of supported range");
        let n = prefix.len();
        let table = PartnerTable::new(prefix);
        let mut by_max = vec![Vec::new(); n];
        for (i, row) in table.partners.iter().enumerate() {
            for &(j, s) in row {
                let m = (i as u32).max(j).max(s);
                // drop one occurrence of the maximum; keep the other two
                let others = if i as u32 == m {
                    (j, s)
                } else if j == m {
                    (i as u32, s)
                } else {
                    (i as u32, j)
                };
                by_max[m as usize].push((i as u32 * r, others.0, others.1));
            }
        }
        let mut triple_offsets = Vec::with_capacity(n + 1);
        let mut triples = Vec::new();
        triple_offsets.push(0);
        for group in &by_max {
            triples.extend_from_slice(group);
            triple_offsets.push(triples.len() as u32);
        }
        SearchState {
            n,
            r,
            k: k as u32,
            triple_offsets,
            triples,
            colors: vec![0; n],
            counters: vec![0; n * r as usize],
            depth: 0,
            undo_log: Vec::new(),
            undo_marks: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Colors assigned so far, in position order.
    pub fn assigned_colors(&self) -> Vec<u32> {
        self.colors[..self.depth].iter().map(|&c| c as u32).collect()
    }

    /// Trigger counter for an anchor position and a color.
    pub fn counter(&self, anchor: usize, color: u32) -> u32 {
        self.counters[anchor * self.r as usize + (color - 1) as usize]
    }

    /// Colors the next position and updates the counters of every triple
    /// completed by it. Returns `false` if some counter reached `k`; the
    /// caller must still unassign before trying another color.
    #[inline]
    pub fn assign_next(&mut self, color: u32) -> bool {
        debug_assert!(self.depth < self.n);
        debug_assert!(color >= 1 && color <= self.r);
        let pos = self.depth;
        let c = color as u8;
        self.colors[pos] = c;
        self.undo_marks.push(self.undo_log.len() as u32);
        self.depth += 1;
        let lo = self.triple_offsets[pos] as usize;
        let hi = self.triple_offsets[pos + 1] as usize;
        let mut ok = true;
        for &(base, o1, o2) in &self.triples[lo..hi] {
            if self.colors[o1 as usize] == c && self.colors[o2 as usize] == c {
                let slot = (base + color - 1) as usize;
                let v = self.counters[slot] + 1;
                self.counters[slot] = v;
                self.undo_log.push(slot as u32);
                ok &= v < self.k;
            }
        }
        ok
    }

    /// Undoes the most recent assignment.
    #[inline]
    pub fn unassign_last(&mut self) {
        debug_assert!(self.depth > 0);
        let mark = self.undo_marks.pop().expect("no assignment to undo") as usize;
        for &slot in &self.undo_log[mark..] {
            self.counters[slot as usize] -= 1;
        }
        self.undo_log.truncate(mark);
        self.colors[self.depth - 1] = 0;
        self.depth -= 1;
    }

    /// Recomputes all counters from scratch over the current assignment;
    /// used to cross-check the incremental maintenance.
    pub fn recomputed_counters(&self) -> Vec<u32> {
        let mut fresh = vec![0u32; self.n * self.r as usize];
        for m in 0..self.depth {
            let cm = self.colors[m];
            let lo = self.triple_offsets[m] as usize;
            let hi = self.triple_offsets[m + 1] as usize;
            for &(base, o1, o2) in &self.triples[lo..hi] {
                if self.colors[o1 as usize] == cm && self.colors[o2 as usize] == cm {
                    fresh[(base + cm as u32 - 1) as usize] += 1;
                }
            }
        }
        fresh
    }

    /// The incrementally maintained counters, flattened as `anchor * r + (c-1)`.
    pub fn counters(&self) -> &[u32] {
        &self.counters
    }
}

/// Per-depth work sheet: the current position's triples, bucketed by the
/// color they require. The other two members of a triple keep their colors
/// for as long as the search stays at or below this depth, so the bucketing
/// is computed once per descent and each color try reduces to direct
/// counter-slot increments. The same pass derives a mask of colors whose
/// assignment is already known to violate (some bucket slot sits at
/// `k - 1`), which the branch loop skips without touching the state.
#[derive(Debug, Clone, Default)]
struct DepthWork {
    /// Counter slots bumped when this depth takes color `c`; bucket `c - 1`.
    by_color: Vec<Vec<u32>>,
    /// `anchor * r` bases of triples whose other positions are both this
    /// depth; they fire under every color.
    any_color: Vec<u32>,
    /// Colors `c` (bit `c - 1`) that immediately drive a counter to `k`.
    /// Only the first 64 colors participate; the mask is sufficient, not
    /// necessary, and the assignment path re-checks regardless.
    dead: u64,
}

impl DepthWork {
    fn rebuild(&mut self, state: &SearchState, depth: usize) {
        let r = state.r as usize;
        if self.by_color.len() != r {
            self.by_color = alloc::vec![Vec::new(); r];
        }
        for bucket in &mut self.by_color {
            bucket.clear();
        }
        self.any_color.clear();
        self.dead = 0;
        let saturating = state.k - 1;
        let lo = state.triple_offsets[depth] as usize;
        let hi = state.triple_offsets[depth + 1] as usize;
        for &(base, o1, o2) in &state.triples[lo..hi] {
            // position == depth is still uncolored and reads 0 (wildcard)
            let c1 = state.colors[o1 as usize];
            let c2 = state.colors[o2 as usize];
            let required = if c1 == 0 {
                c2
            } else if c2 == 0 || c2 == c1 {
                c1
            } else {
                continue;
            };
            if required == 0 {
                self.any_color.push(base);
            } else {
                let slot = base + required as u32 - 1;
                self.by_color[(required - 1) as usize].push(slot);
                if state.counters[slot as usize] >= saturating && required as u32 <= 64 {
                    self.dead |= 1 << (required - 1);
                }
            }
        }
        for &base in &self.any_color {
            for c in 1..=state.r.min(64) {
                if state.counters[(base + c - 1) as usize] >= saturating {
                    self.dead |= 1 << (c - 1);
                }
            }
        }
    }
}

/// Depth-first scan for the lexicographically least canonical valid
/// coloring, starting from the seeded assignment of `0..base_depth`.
/// Never backtracks past `base_depth`.
pub(crate) fn dfs_first_valid(
    state: &mut SearchState,
    base_depth: usize,
    stats: &mut SolverStats,
    poll: &mut impl FnMut(&SolverStats) -> Result<(), Interrupt>,
) -> Result<Option<Vec<u32>>, Interrupt> {
    let n = state.n();
    let r = state.r();
    let mut cursor = vec![0u32; n + 1];
    let mut max_used = vec![0u32; n + 1];
    for d in 0..base_depth {
        max_used[d + 1] = max_used[d].max(state.colors[d] as u32);
    }
    let mut work: Vec<DepthWork> = alloc::vec![DepthWork::default(); n + 1];
    let mut depth = base_depth;
    if depth == n {
        return Ok(Some(state.assigned_colors()));
    }
    cursor[depth] = 0;
    work[depth].rebuild(state, depth);
    'outer: loop {
        let limit = r.min(max_used[depth] + 1);
        let mut c = cursor[depth] + 1;
        while c <= limit {
            poll(stats)?;
            stats.nodes += 1;
            if c <= 64 && work[depth].dead & (1 << (c - 1)) != 0 {
                // the violation is already determined; skip the state churn
                stats.backtracks += 1;
                c += 1;
                continue;
            }
            if assign_bucketed(state, &work[depth], c) {
                cursor[depth] = c;
                max_used[depth + 1] = max_used[depth].max(c);
                depth += 1;
                if depth == n {
                    return Ok(Some(state.assigned_colors()));
                }
                cursor[depth] = 0;
                work[depth].rebuild(state, depth);
                continue 'outer;
            }
            state.unassign_last();
            stats.backtracks += 1;
            c += 1;
        }
        if depth == base_depth {
            return Ok(None);
        }
        depth -= 1;
        state.unassign_last();
        stats.backtracks += 1;
    }
}

/// [`SearchState::assign_next`] specialized to a prepared [`DepthWork`];
/// identical counter and undo-log effects.
#[inline]
fn assign_bucketed(state: &mut SearchState, work: &DepthWork, color: u32) -> bool {
    let pos = state.depth;
    state.colors[pos] = color as u8;
    state.undo_marks.push(state.undo_log.len() as u32);
    state.depth += 1;
    let k = state.k;
    let mut ok = true;
    for &slot in &work.by_color[(color - 1) as usize] {
        let v = state.counters[slot as usize] + 1;
        state.counters[slot as usize] = v;
        state.undo_log.push(slot);
        ok &= v < k;
    }
    for &base in &work.any_color {
        let slot = base + color - 1;
        let v = state.counters[slot as usize] + 1;
        state.counters[slot as usize] = v;
        state.undo_log.push(slot);
        ok &= v < k;
    }
    ok
}

/// Builds the per-node interrupt check for a budget. The wall clock starts
/// when the closure is created.
pub(crate) fn budget_poll(
    budget: Option<&Budget>,
) -> impl FnMut(&SolverStats) -> Result<(), Interrupt> + '_ {
    #[cfg(feature = "std")]
    let start = std::time::Instant::now();
    move |stats: &SolverStats| {
        if let Some(b) = budget {
            if let Some(max_nodes) = b.max_nodes {
                if stats.nodes >= max_nodes {
                    return Err(Interrupt::Budget);
                }
            }
            #[cfg(feature = "std")]
            if let Some(ms) = b.max_millis {
                if stats.nodes & 0x1fff == 0 && start.elapsed().as_millis() as u64 >= ms {
                    return Err(Interrupt::Budget);
                }
            }
        }
        Ok(())
    }
}

/// Searches for a valid coloring of the length-`n` prefix. `Ok(None)` means
/// nonexistence was proven exhaustively; running out of budget is an error
/// carrying the partial stats.
pub fn search_valid_coloring(
    r: u32,
    k: usize,
    n: usize,
    enumeration: &Enumeration,
    budget: Option<&Budget>,
) -> Result<Option<Coloring>, Error> {
    search_valid_coloring_with_stats(r, k, n, enumeration, budget).map(|o| o.coloring)
}

/// As [`search_valid_coloring`], also returning effort stats.
pub fn search_valid_coloring_with_stats(
    r: u32,
    k: usize,
    n: usize,
    enumeration: &Enumeration,
    budget: Option<&Budget>,
) -> Result<SearchOutcome, Error> {
    if r == 0 || k == 0 || n == 0 {
        return Err(Error::InvalidParameter("r, k, n must be positive"));
    }
    let prefix = enumeration.prefix(n)?;
    let mut state = SearchState::new(&prefix, r, k);
    let mut stats = SolverStats {
        workers: 1,
        ..SolverStats::default()
    };
    #[cfg(feature = "std")]
    let start = std::time::Instant::now();
    let mut poll = budget_poll(budget);
    let found = dfs_first_valid(&mut state, 0, &mut stats, &mut poll);
    #[cfg(feature = "std")]
    {
        stats.wall = start.elapsed();
    }
    match found {
        Ok(found) => {
            let coloring = match found {
                Some(colors) => {
                    let coloring = Coloring::new(r, colors)?;
                    debug_assert!(crate::witness::is_valid_coloring(&prefix, &coloring, k)
                        .unwrap_or(false));
                    Some(coloring)
                }
                None => None,
            };
            Ok(SearchOutcome { coloring, stats })
        }
        Err(_) => Err(Error::BudgetExhausted { stats }),
    }
}

/// Computes `S(r, k)` for the enumeration by scanning `n` upward. Each
/// `Exact` proof needs the full refutation at its length, and the upward
/// scan hands over the length-(n-1) certificate for free; binary search
/// would save nothing.
pub fn compute_schur_number(
    r: u32,
    k: usize,
    max_n: usize,
    enumeration: &Enumeration,
) -> Result<SchurNumberResult, Error> {
    compute_schur_number_with_budget(r, k, max_n, enumeration, None)
}

/// As [`compute_schur_number`] with a per-length search budget.
pub fn compute_schur_number_with_budget(
    r: u32,
    k: usize,
    max_n: usize,
    enumeration: &Enumeration,
    budget: Option<&Budget>,
) -> Result<SchurNumberResult, Error> {
    compute_schur_impl(r, k, max_n, enumeration, budget, |r, k, n, e, b| {
        search_valid_coloring_with_stats(r, k, n, e, b)
    })
}

pub(crate) fn compute_schur_impl(
    r: u32,
    k: usize,
    max_n: usize,
    enumeration: &Enumeration,
    budget: Option<&Budget>,
    mut search: impl FnMut(u32, usize, usize, &Enumeration, Option<&Budget>) -> Result<SearchOutcome, Error>,
) -> Result<SchurNumberResult, Error> {
    if max_n == 0 {
        return Err(Error::InvalidParameter("max_n must be positive"));
    }
    let effective_max = match enumeration.available_len() {
        Some(0) => return Err(Error::InvalidParameter("enumeration is empty")),
        Some(avail) => avail.min(max_n),
        None => max_n,
    };
    let mut certificate = Coloring::new(r, Vec::new())?;
    let mut agg = SolverStats::default();
    let mut workers = 1;
    for n in 1..=effective_max {
        let outcome = search(r, k, n, enumeration, budget).map_err(|e| match e {
            // fold the scan's earlier effort into the budget report
            Error::BudgetExhausted { stats } => {
                agg.absorb(&stats);
                agg.workers = stats.workers.max(1);
                Error::BudgetExhausted { stats: agg.clone() }
            }
            other => other,
        })?;
        agg.absorb(&outcome.stats);
        workers = outcome.stats.workers.max(workers);
        match outcome.coloring {
            None => {
                agg.workers = workers;
                return Ok(SchurNumberResult {
                    r,
                    k,
                    status: SchurStatus::Exact(n),
                    certificate: Some(certificate),
                    stats: agg,
                });
            }
            Some(c) => certificate = c,
        }
    }
    agg.workers = workers;
    let prefix = enumeration.prefix(effective_max)?;
    if enumerate_configurations(&prefix, k).next().is_none() {
        Ok(SchurNumberResult {
            r,
            k,
            status: SchurStatus::Vacuous,
            certificate: None,
            stats: agg,
        })
    } else {
        Ok(SchurNumberResult {
            r,
            k,
            status: SchurStatus::LowerBound(effective_max),
            certificate: Some(certificate),
            stats: agg,
        })
    }
}
