//! Brute-force counting oracle.
//!
//! Enumerates every one of the `r^n` colorings of a prefix and counts the
//! valid ones, with no pruning and no symmetry reduction. This is the ground
//! truth the backtracking solver and the CNF encoding are tested against.

use alloc::vec;

use crate::enumeration::Prefix;
use crate::witness::{has_witness, PartnerTable};
use crate::Error;

/// Upper bound on `r^n` accepted by [`oracle_count_valid`].
pub const ORACLE_GUARD: u64 = 100_000_000;

/// Exact number of colorings `c: prefix -> {1..r}` admitting no
/// `k`-dimensional witness.
pub fn oracle_count_valid(prefix: &Prefix, r: u32, k: usize) -> Result<u64, Error> {
    if r == 0 || k == 0 {
        return Err(Error::InvalidParameter("r and k must be positive"));
    }
    let n = prefix.len();
    let mut total: u64 = 1;
    for _ in 0..n {
        total = total
            .checked_mul(r as u64)
            .filter(|&t| t <= ORACLE_GUARD)
            .ok_or(Error::OracleGuardExceeded {
                r,
                n,
                guard: ORACLE_GUARD,
            })?;
    }

    let table = PartnerTable::new(prefix);
    let mut colors = vec![1u32; n];
    let mut count = 0u64;
    loop {
        if !has_witness(&table, &colors, k) {
            count += 1;
        }
        // odometer over all r^n assignments
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(count);
            }
            if colors[pos] < r {
                colors[pos] += 1;
                break;
            }
            colors[pos] = 1;
            pos += 1;
        }
    }
}
