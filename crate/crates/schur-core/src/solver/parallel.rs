//! Deterministic multi-worker search.
//!
//! The canonical search tree is split at a fixed depth into disjoint
//! subtrees, one per surviving canonical assignment of the first positions,
//! indexed in lexicographic order. Workers pull subtree tasks from a shared
//! queue; the merged outcome is the one the sequential search would produce:
//! any full set of refuted subtrees proves absence, and the satisfiable
//! subtree with the lowest index supplies the canonical certificate. A
//! worker abandons its task only when some lower-indexed subtree has already
//! reported a coloring, so the merge is independent of scheduling.

use alloc::vec::Vec;

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use super::{
    compute_schur_impl, dfs_first_valid, Budget, Interrupt, SchurNumberResult, SearchOutcome,
    SearchState, SolverStats,
};
use crate::coloring::Coloring;
use crate::enumeration::Enumeration;
use crate::Error;

/// How many subtree tasks to aim for per worker.
const TASKS_PER_WORKER: usize = 8;
/// Poll cadence for cancellation, global node accounting, and deadlines.
const POLL_MASK: u64 = 0xfff;

/// Computes `S(r, k)` with `workers` threads. Status and value are
/// identical to [`super::compute_schur_number`] for every worker count.
pub fn parallel_compute(
    r: u32,
    k: usize,
    max_n: usize,
    enumeration: &Enumeration,
    workers: usize,
) -> Result<SchurNumberResult, Error> {
    parallel_compute_with_budget(r, k, max_n, enumeration, workers, None)
}

pub fn parallel_compute_with_budget(
    r: u32,
    k: usize,
    max_n: usize,
    enumeration: &Enumeration,
    workers: usize,
    budget: Option<&Budget>,
) -> Result<SchurNumberResult, Error> {
    if workers == 0 {
        return Err(Error::InvalidParameter("workers must be positive"));
    }
    if workers == 1 {
        return super::compute_schur_number_with_budget(r, k, max_n, enumeration, budget);
    }
    compute_schur_impl(r, k, max_n, enumeration, budget, |r, k, n, e, b| {
        parallel_search_valid_coloring(r, k, n, e, workers, b)
    })
}

/// One subtree decision.
enum TaskResult {
    Sat(Vec<u32>),
    Unsat,
    Cancelled,
    Budget,
}

/// Multi-worker version of [`super::search_valid_coloring_with_stats`].
pub fn parallel_search_valid_coloring(
    r: u32,
    k: usize,
    n: usize,
    enumeration: &Enumeration,
    workers: usize,
    budget: Option<&Budget>,
) -> Result<SearchOutcome, Error> {
    if r == 0 || k == 0 || n == 0 || workers == 0 {
        return Err(Error::InvalidParameter("r, k, n, workers must be positive"));
    }
    let start = Instant::now();
    let prefix = enumeration.prefix(n)?;
    let template = SearchState::new(&prefix, r, k);

    let mut seed_stats = SolverStats::default();
    let seeds = canonical_seeds(&template, TASKS_PER_WORKER * workers, &mut seed_stats);
    let finish = |coloring: Option<Coloring>, mut stats: SolverStats| {
        stats.workers = workers as u32;
        stats.wall = start.elapsed();
        Ok(SearchOutcome { coloring, stats })
    };
    if seeds.is_empty() {
        // every assignment of the split prefix is already refuted
        return finish(None, seed_stats);
    }

    let next_task = AtomicUsize::new(0);
    let best_sat = AtomicU64::new(u64::MAX);
    let global_nodes = AtomicU64::new(seed_stats.nodes);
    let results: Mutex<Vec<Option<(TaskResult, SolverStats)>>> =
        Mutex::new((0..seeds.len()).map(|_| None).collect());
    let deadline = budget
        .and_then(|b| b.max_millis)
        .map(|ms| start + core::time::Duration::from_millis(ms));
    let max_nodes = budget.and_then(|b| b.max_nodes);

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| {
                let mut state = template.clone();
                loop {
                    let t = next_task.fetch_add(1, Ordering::Relaxed);
                    if t >= seeds.len() {
                        return;
                    }
                    let outcome = run_task(
                        &mut state,
                        &seeds[t],
                        t,
                        &best_sat,
                        &global_nodes,
                        max_nodes,
                        deadline,
                    );
                    if matches!(outcome.0, TaskResult::Sat(_)) {
                        best_sat.fetch_min(t as u64, Ordering::AcqRel);
                    }
                    results.lock().unwrap()[t] = Some(outcome);
                }
            });
        }
    });

    let results = results.into_inner().unwrap();
    let mut agg = seed_stats;
    let mut sat: Option<(usize, Vec<u32>)> = None;
    let mut budget_hit = false;
    for (t, slot) in results.into_iter().enumerate() {
        let (result, stats) = slot.expect("every task index was claimed by a worker");
        agg.absorb(&stats);
        match result {
            TaskResult::Sat(colors) => {
                if sat.as_ref().map(|(best, _)| t < *best).unwrap_or(true) {
                    sat = Some((t, colors));
                }
            }
            TaskResult::Budget => budget_hit = true,
            TaskResult::Unsat | TaskResult::Cancelled => {}
        }
    }
    match sat {
        Some((_, colors)) => finish(Some(Coloring::new(r, colors)?), agg),
        None if budget_hit => {
            agg.workers = workers as u32;
            agg.wall = start.elapsed();
            Err(Error::BudgetExhausted { stats: agg })
        }
        None => finish(None, agg),
    }
}

fn run_task(
    state: &mut SearchState,
    seed: &[u32],
    index: usize,
    best_sat: &AtomicU64,
    global_nodes: &AtomicU64,
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
) -> (TaskResult, SolverStats) {
    let mut stats = SolverStats::default();
    if best_sat.load(Ordering::Acquire) < index as u64 {
        return (TaskResult::Cancelled, stats);
    }
    for &c in seed {
        let ok = state.assign_next(c);
        debug_assert!(ok, "seed assignments were pre-checked");
    }

    let mut flushed: u64 = 0;
    let mut poll = |stats: &SolverStats| -> Result<(), Interrupt> {
        if stats.nodes & POLL_MASK != 0 {
            return Ok(());
        }
        if best_sat.load(Ordering::Relaxed) < index as u64 {
            return Err(Interrupt::Cancelled);
        }
        let total = global_nodes.fetch_add(stats.nodes - flushed, Ordering::Relaxed)
            + (stats.nodes - flushed);
        flushed = stats.nodes;
        if let Some(limit) = max_nodes {
            if total >= limit {
                return Err(Interrupt::Budget);
            }
        }
        if let Some(d) = deadline {
            if Instant::now() >= d {
                return Err(Interrupt::Budget);
            }
        }
        Ok(())
    };

    let result = match dfs_first_valid(state, seed.len(), &mut stats, &mut poll) {
        Ok(Some(colors)) => TaskResult::Sat(colors),
        Ok(None) => TaskResult::Unsat,
        Err(Interrupt::Cancelled) => TaskResult::Cancelled,
        Err(Interrupt::Budget) => TaskResult::Budget,
    };
    global_nodes.fetch_add(stats.nodes - flushed, Ordering::Relaxed);
    while state.depth() > 0 {
        state.unassign_last();
    }
    (result, stats)
}

/// Enumerates the surviving canonical assignments of a split prefix, in
/// lexicographic order, deepening the split until there are at least
/// `target` of them (or the whole tree is refuted or fully expanded).
///
/// Symmetry breaking prunes most raw color tuples, so the depth is chosen
/// by the surviving-seed count rather than by `r^depth`.
fn canonical_seeds(
    template: &SearchState,
    target: usize,
    stats: &mut SolverStats,
) -> Vec<Vec<u32>> {
    let n = template.n();
    let mut depth = 1;
    loop {
        let mut state = template.clone();
        let mut seeds = Vec::new();
        enumerate_assignments(&mut state, depth, &mut seeds, stats);
        if seeds.len() >= target || depth == n || seeds.is_empty() {
            return seeds;
        }
        depth += 1;
    }
}

fn enumerate_assignments(
    state: &mut SearchState,
    depth: usize,
    out: &mut Vec<Vec<u32>>,
    stats: &mut SolverStats,
) {
    if state.depth() == depth {
        out.push(state.assigned_colors());
        return;
    }
    let max_used = state.assigned_colors().into_iter().max().unwrap_or(0);
    let limit = state.r().min(max_used + 1);
    for c in 1..=limit {
        stats.nodes += 1;
        let ok = state.assign_next(c);
        if ok {
            enumerate_assignments(state, depth, out, stats);
        }
        state.unassign_last();
        stats.backtracks += 1;
    }
}
