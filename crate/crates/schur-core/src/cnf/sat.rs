//! Complete assignment search over a clause set: chronological backtracking
//! with unit propagation, trying variables in index order, true first. Used
//! to decide instances internally where an external solver would be
//! overkill; deliberately not a CDCL solver.

use alloc::vec;
use alloc::vec::Vec;

/// `Ok(Some(values))` with a full assignment when satisfiable, `Ok(None)`
/// when refuted, `Err(decisions)` when the decision budget ran out.
pub(crate) fn solve(
    clauses: &[Vec<i32>],
    num_vars: u32,
    max_decisions: u64,
) -> Result<Option<Vec<bool>>, u64> {
    let n = num_vars as usize;
    // 0 = unassigned, 1 = true, -1 = false
    let mut assign = vec![0i8; n + 1];
    let mut trail: Vec<u32> = Vec::new();
    // (variable, trail length before it, second phase already tried)
    let mut decisions: Vec<(u32, usize, bool)> = Vec::new();
    let mut decision_count: u64 = 0;

    if clauses.iter().any(|c| c.is_empty()) {
        return Ok(None);
    }

    loop {
        match propagate(clauses, &mut assign, &mut trail) {
            PropagationResult::Conflict => {
                // undo to the most recent decision with an untried phase
                let flipped = loop {
                    match decisions.pop() {
                        None => return Ok(None),
                        Some((var, mark, tried_both)) => {
                            while trail.len() > mark {
                                assign[trail.pop().unwrap() as usize] = 0;
                            }
                            if !tried_both {
                                assign[var as usize] = -1;
                                trail.push(var);
                                decisions.push((var, mark, true));
                                break true;
                            }
                        }
                    }
                };
                debug_assert!(flipped);
            }
            PropagationResult::Stable => {
                let unassigned = (1..=n).find(|&v| assign[v] == 0);
                match unassigned {
                    None => {
                        let values = (1..=n).map(|v| assign[v] > 0).collect();
                        return Ok(Some(values));
                    }
                    Some(var) => {
                        decision_count += 1;
                        if decision_count > max_decisions {
                            return Err(decision_count);
                        }
                        decisions.push((var as u32, trail.len(), false));
                        assign[var] = 1;
                        trail.push(var as u32);
                    }
                }
            }
        }
    }
}

enum PropagationResult {
    Stable,
    Conflict,
}

fn propagate(
    clauses: &[Vec<i32>],
    assign: &mut [i8],
    trail: &mut Vec<u32>,
) -> PropagationResult {
    loop {
        let mut changed = false;
        for clause in clauses {
            let mut satisfied = false;
            let mut unit = 0i32;
            let mut unassigned = 0usize;
            for &lit in clause {
                match assign[lit.unsigned_abs() as usize] {
                    0 => {
                        unassigned += 1;
                        unit = lit;
                        if unassigned > 1 {
                            break;
                        }
                    }
                    v => {
                        if (lit > 0) == (v > 0) {
                            satisfied = true;
                            break;
                        }
                    }
                }
            }
            if satisfied || unassigned > 1 {
                continue;
            }
            if unassigned == 0 {
                return PropagationResult::Conflict;
            }
            let var = unit.unsigned_abs();
            assign[var as usize] = if unit > 0 { 1 } else { -1 };
            trail.push(var);
            changed = true;
        }
        if !changed {
            return PropagationResult::Stable;
        }
    }
}
