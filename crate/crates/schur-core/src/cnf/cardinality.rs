//! At-most-`t` constraints over trigger literals.
//!
//! The workhorse is the sequential counter: register `s_{i,j}` means "at
//! least `j+1` of the first `i+1` literals are true", and the final
//! register row blocks the `t+1`-st true literal. Size is `O(m * t)`
//! clauses with `(m-1) * t` registers. For `t = 1` over a handful of
//! literals the pairwise encoding is smaller, so it is used automatically
//! below a fixed threshold.

use alloc::vec::Vec;

use super::CnfInstance;

/// Largest literal count for which pairwise at-most-one beats the counter.
const PAIRWISE_THRESHOLD: usize = 6;

/// Adds clauses forcing at most `bound` of `lits` true. Returns the
/// register variables introduced (empty for the pairwise and trivial
/// cases).
pub(super) fn at_most(instance: &mut CnfInstance, lits: &[i32], bound: usize) -> Vec<u32> {
    let m = lits.len();
    if m <= bound {
        return Vec::new();
    }
    if bound == 0 {
        for &l in lits {
            instance.push_clause(alloc::vec![-l]);
        }
        return Vec::new();
    }
    if bound == 1 && m <= PAIRWISE_THRESHOLD {
        for a in 0..m {
            for b in a + 1..m {
                instance.push_clause(alloc::vec![-lits[a], -lits[b]]);
            }
        }
        return Vec::new();
    }
    sequential_counter(instance, lits, bound)
}

// indexing mirrors the register recurrences
#[allow(clippy::needless_range_loop)]
fn sequential_counter(instance: &mut CnfInstance, lits: &[i32], t: usize) -> Vec<u32> {
    let m = lits.len();
    debug_assert!(m > t && t >= 1);
    // registers s[i][j] for i in 0..m-1, j in 0..t, row-major
    let regs: Vec<u32> = (0..(m - 1) * t).map(|_| instance.new_var()).collect();
    let s = |i: usize, j: usize| regs[i * t + j] as i32;

    instance.push_clause(alloc::vec![-lits[0], s(0, 0)]);
    for j in 1..t {
        instance.push_clause(alloc::vec![-s(0, j)]);
    }
    for i in 1..m - 1 {
        instance.push_clause(alloc::vec![-lits[i], s(i, 0)]);
        instance.push_clause(alloc::vec![-s(i - 1, 0), s(i, 0)]);
        for j in 1..t {
            instance.push_clause(alloc::vec![-lits[i], -s(i - 1, j - 1), s(i, j)]);
            instance.push_clause(alloc::vec![-s(i - 1, j), s(i, j)]);
        }
        instance.push_clause(alloc::vec![-lits[i], -s(i - 1, t - 1)]);
    }
    instance.push_clause(alloc::vec![-lits[m - 1], -s(m - 2, t - 1)]);
    regs
}
