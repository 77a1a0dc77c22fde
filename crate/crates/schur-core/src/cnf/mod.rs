//! Propositional encoding of "a valid `r`-coloring of the length-`n` prefix
//! exists", DIMACS output, and model decoding.
//!
//! Primary variables `x_{i,c}` (position `i`, color `c`) get the dense ids
//! `1..=n*r` in `(i, c)` lexicographic order. Each position carries an
//! at-least-one-color clause; at-most-one is intentionally omitted: every
//! non-ALO clause uses primary variables only negatively, so projecting a
//! multi-color assignment down to the least true color per position cannot
//! falsify anything.
//!
//! For `k = 1` every configuration `(a, {b})` contributes, per color, the
//! clause `¬x_{a,c} ∨ ¬x_{b,c} ∨ ¬x_{a+b,c}`, with duplicate literals
//! collapsed and one clause per distinct literal set. For `k ≥ 2` each
//! triple gets a trigger variable `t_{a,b,c}` forced true when `a`, `b`,
//! `a+b` are all colored `c` (the converse direction is omitted; it is not
//! needed to forbid witnesses and would double the instance), and each
//! `(a, c)` gets an at-most-`(k-1)` constraint over its triggers.

mod cardinality;
pub mod dimacs;
mod sat;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::coloring::Coloring;
use crate::enumeration::Enumeration;
use crate::solver::{search_valid_coloring, SolverStats};
use crate::witness::PartnerTable;
use crate::Error;

/// Default decision budget for the internal satisfiability check.
const DECISION_BUDGET: u64 = 50_000_000;

/// A CNF instance with the variable maps needed to interpret its models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfInstance {
    n: usize,
    r: u32,
    k: usize,
    num_vars: u32,
    clauses: Vec<Vec<i32>>,
    /// `(anchor position, partner position, color) -> trigger variable`,
    /// 0-based positions; populated for `k >= 2`.
    trigger_map: BTreeMap<(u32, u32, u32), u32>,
    /// `(anchor position, color) -> sequential-counter register variables`.
    counter_map: BTreeMap<(u32, u32), Vec<u32>>,
}

impl CnfInstance {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// Variable id of `x_{position, color}`; position is 0-based.
    pub fn primary_var(&self, position: usize, color: u32) -> u32 {
        debug_assert!(position < self.n && color >= 1 && color <= self.r);
        (position as u32) * self.r + color
    }

    pub fn trigger_var(&self, anchor: usize, partner: usize, color: u32) -> Option<u32> {
        self.trigger_map
            .get(&(anchor as u32, partner as u32, color))
            .copied()
    }

    pub fn trigger_map(&self) -> &BTreeMap<(u32, u32, u32), u32> {
        &self.trigger_map
    }

    pub fn counter_map(&self) -> &BTreeMap<(u32, u32), Vec<u32>> {
        &self.counter_map
    }

    fn new_var(&mut self) -> u32 {
        self.num_vars += 1;
        self.num_vars
    }

    /// Sorts by variable, collapses duplicate literals, rejects tautologies.
    fn push_clause(&mut self, mut lits: Vec<i32>) {
        lits.sort_unstable_by_key(|l| (l.unsigned_abs(), *l < 0));
        lits.dedup();
        debug_assert!(
            lits.windows(2).all(|w| w[0] != -w[1]),
            "clause contains complementary literals"
        );
        debug_assert!(!lits.is_empty());
        self.clauses.push(lits);
    }
}

/// A total assignment over an instance's variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    values: Vec<bool>,
}

impl Model {
    pub fn new(values: Vec<bool>) -> Self {
        Model { values }
    }

    /// Builds a model from signed literals, requiring every variable in
    /// `1..=num_vars` to be assigned exactly one polarity.
    pub fn from_literals(num_vars: u32, lits: impl IntoIterator<Item = i32>) -> Result<Self, Error> {
        let mut values = vec![false; num_vars as usize];
        let mut seen = vec![false; num_vars as usize];
        for lit in lits {
            if lit == 0 {
                continue;
            }
            let var = lit.unsigned_abs();
            if var > num_vars {
                return Err(Error::InvalidParameter("literal outside variable range"));
            }
            let idx = (var - 1) as usize;
            let value = lit > 0;
            if seen[idx] && values[idx] != value {
                return Err(Error::ModelConflict { variable: var });
            }
            seen[idx] = true;
            values[idx] = value;
        }
        if let Some(idx) = seen.iter().position(|&s| !s) {
            return Err(Error::ModelNotTotal {
                variable: idx as u32 + 1,
            });
        }
        Ok(Model { values })
    }

    pub fn num_vars(&self) -> u32 {
        self.values.len() as u32
    }

    pub fn value(&self, var: u32) -> bool {
        self.values[(var - 1) as usize]
    }

    pub fn satisfies_literal(&self, lit: i32) -> bool {
        let v = self.value(lit.unsigned_abs());
        (lit > 0) == v
    }

    /// Index of the first clause the model falsifies, if any.
    pub fn first_falsified(&self, instance: &CnfInstance) -> Option<usize> {
        instance
            .clauses
            .iter()
            .position(|clause| !clause.iter().any(|&l| self.satisfies_literal(l)))
    }
}

/// Encodes the existence of a valid coloring as CNF. The instance is
/// satisfiable iff a valid `r`-coloring of the length-`n` prefix exists.
pub fn encode(r: u32, k: usize, n: usize, enumeration: &Enumeration) -> Result<CnfInstance, Error> {
    if r == 0 || k == 0 || n == 0 {
        return Err(Error::InvalidParameter("r, k, n must be positive"));
    }
    let prefix = enumeration.prefix(n)?;
    let table = PartnerTable::new(&prefix);
    let mut instance = CnfInstance {
        n,
        r,
        k,
        num_vars: (n as u32) * r,
        clauses: Vec::new(),
        trigger_map: BTreeMap::new(),
        counter_map: BTreeMap::new(),
    };

    for i in 0..n {
        let alo = (1..=r).map(|c| instance.primary_var(i, c) as i32).collect();
        instance.push_clause(alo);
    }

    if k == 1 {
        // one clause per distinct {a, b, a+b} literal set and color
        let mut seen = BTreeSet::new();
        let mut sets: Vec<Vec<u32>> = Vec::new();
        for (i, row) in table.partners.iter().enumerate() {
            for &(j, s) in row {
                let mut key = vec![i as u32, j, s];
                key.sort_unstable();
                key.dedup();
                if seen.insert(key.clone()) {
                    sets.push(key);
                }
            }
        }
        for set in &sets {
            for c in 1..=r {
                let clause = set
                    .iter()
                    .map(|&p| -(instance.primary_var(p as usize, c) as i32))
                    .collect();
                instance.push_clause(clause);
            }
        }
    } else {
        for (i, row) in table.partners.iter().enumerate() {
            for &(j, s) in row {
                for c in 1..=r {
                    let t = instance.new_var();
                    instance.trigger_map.insert((i as u32, j, c), t);
                    let clause = vec![
                        -(instance.primary_var(i, c) as i32),
                        -(instance.primary_var(j as usize, c) as i32),
                        -(instance.primary_var(s as usize, c) as i32),
                        t as i32,
                    ];
                    instance.push_clause(clause);
                }
            }
        }
        for (i, row) in table.partners.iter().enumerate() {
            if row.is_empty() {
                continue;
            }
            for c in 1..=r {
                let lits: Vec<i32> = row
                    .iter()
                    .map(|&(j, _)| instance.trigger_map[&(i as u32, j, c)] as i32)
                    .collect();
                let aux = cardinality::at_most(&mut instance, &lits, k - 1);
                instance.counter_map.insert((i as u32, c), aux);
            }
        }
    }
    Ok(instance)
}

/// Decodes a satisfying model into a coloring: each position takes the
/// least color whose primary variable is true. The model must satisfy the
/// instance; it is verified literal by literal first.
pub fn decode_model(instance: &CnfInstance, model: &Model) -> Result<Coloring, Error> {
    if model.num_vars() != instance.num_vars {
        return Err(Error::InvalidParameter(
            "model size differs from instance variable count",
        ));
    }
    if let Some(clause) = model.first_falsified(instance) {
        return Err(Error::ModelDoesNotSatisfy { clause });
    }
    let mut colors = Vec::with_capacity(instance.n);
    for i in 0..instance.n {
        let color = (1..=instance.r)
            .find(|&c| model.value(instance.primary_var(i, c)))
            .ok_or(Error::ModelDecodesNoColor { position: i })?;
        colors.push(color);
    }
    Coloring::new(instance.r, colors)
}

/// Complete internal satisfiability decision (backtracking with unit
/// propagation; not a CDCL solver). Returns a model when satisfiable.
pub fn solve_instance(instance: &CnfInstance, max_decisions: u64) -> Result<Option<Model>, Error> {
    solve_clauses(&instance.clauses, instance.num_vars, max_decisions)
}

/// The same decision procedure over a bare clause set.
pub fn solve_clauses(
    clauses: &[Vec<i32>],
    num_vars: u32,
    max_decisions: u64,
) -> Result<Option<Model>, Error> {
    match sat::solve(clauses, num_vars, max_decisions) {
        Ok(answer) => Ok(answer.map(Model::new)),
        Err(decisions) => Err(Error::BudgetExhausted {
            stats: SolverStats {
                nodes: decisions,
                ..SolverStats::default()
            },
        }),
    }
}

/// Evidence for the CNF side of an equisatisfiability check.
pub enum SatEvidence<'a> {
    /// Decide internally with the complete assignment search.
    Decide,
    /// An externally produced model; verified literal by literal.
    Model(&'a Model),
    /// An external refutation claim; accepted but recorded as unverified.
    ExternalUnsat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquisatReport {
    pub native_sat: bool,
    pub cnf_sat: bool,
    pub agree: bool,
    /// Set when the CNF side rests on an unverified external UNSAT claim.
    pub unverified_external_claim: bool,
}

/// Whether native search existence agrees with instance satisfiability.
pub fn check_equisatisfiability(
    r: u32,
    k: usize,
    n: usize,
    enumeration: &Enumeration,
) -> Result<bool, Error> {
    check_equisatisfiability_with(r, k, n, enumeration, SatEvidence::Decide).map(|rep| rep.agree)
}

/// As [`check_equisatisfiability`] with an explicit evidence source for the
/// CNF side.
pub fn check_equisatisfiability_with(
    r: u32,
    k: usize,
    n: usize,
    enumeration: &Enumeration,
    evidence: SatEvidence<'_>,
) -> Result<EquisatReport, Error> {
    let native_sat = search_valid_coloring(r, k, n, enumeration, None)?.is_some();
    let instance = encode(r, k, n, enumeration)?;
    let (cnf_sat, unverified_external_claim) = match evidence {
        SatEvidence::Decide => (solve_instance(&instance, DECISION_BUDGET)?.is_some(), false),
        SatEvidence::Model(model) => {
            if let Some(clause) = model.first_falsified(&instance) {
                return Err(Error::ModelDoesNotSatisfy { clause });
            }
            (true, false)
        }
        SatEvidence::ExternalUnsat => (false, true),
    };
    Ok(EquisatReport {
        native_sat,
        cnf_sat,
        agree: native_sat == cnf_sat,
        unverified_external_claim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::is_valid_coloring;

    fn natural() -> Enumeration {
        Enumeration::natural()
    }

    #[test]
    fn smallest_instance_matches_hand_encoding() {
        let inst = encode(1, 1, 2, &natural()).unwrap();
        assert_eq!(inst.num_vars(), 2);
        // (x11), (x21), and the deduped triple (1,1,2)
        assert_eq!(
            inst.clauses(),
            &[vec![1], vec![2], vec![-1, -2]]
        );
        assert!(solve_instance(&inst, 1_000).unwrap().is_none());
    }

    #[test]
    fn k1_clause_count_closed_form() {
        // one clause per color and distinct {a, b, a+b} set:
        // floor(n/2) * ceil(n/2) sets for the natural enumeration
        for n in 1..=12usize {
            for r in 1..=3u32 {
                let inst = encode(r, 1, n, &natural()).unwrap();
                let sets = (n / 2) * n.div_ceil(2);
                assert_eq!(
                    inst.clauses().len(),
                    n + r as usize * sets,
                    "clause count at n={n} r={r}"
                );
                // the same count, derived from the configuration stream:
                // ordered pairs collapse onto sets, diagonal pairs once
                let prefix = natural().prefix(n).unwrap();
                let ordered = crate::witness::enumerate_configurations(&prefix, 1).count();
                let diagonal = n / 2;
                assert_eq!(sets, (ordered + diagonal) / 2);
            }
        }
    }

    #[test]
    fn sat_at_four_decodes_to_valid_coloring() {
        let inst = encode(2, 1, 4, &natural()).unwrap();
        let model = solve_instance(&inst, 1_000_000).unwrap().unwrap();
        let coloring = decode_model(&inst, &model).unwrap();
        let p = natural().prefix(4).unwrap();
        assert!(is_valid_coloring(&p, &coloring, 1).unwrap());
    }

    #[test]
    fn unsat_at_five() {
        let inst = encode(2, 1, 5, &natural()).unwrap();
        assert!(solve_instance(&inst, 10_000_000).unwrap().is_none());
    }

    #[test]
    fn equisatisfiable_at_boundaries() {
        assert!(check_equisatisfiability(2, 1, 4, &natural()).unwrap());
        assert!(check_equisatisfiability(2, 1, 5, &natural()).unwrap());
        for k in 1..=5usize {
            assert!(
                check_equisatisfiability(1, k, k + 1, &natural()).unwrap(),
                "k = {k}"
            );
        }
    }

    #[test]
    fn least_color_rule() {
        // force x11 and x12 both true in a 2-color instance of length 1
        let inst = encode(2, 1, 1, &natural()).unwrap();
        let model = Model::new(vec![true, true]);
        let coloring = decode_model(&inst, &model).unwrap();
        assert_eq!(coloring.color(0), 1);
    }

    #[test]
    fn non_model_is_a_precondition_error() {
        let inst = encode(1, 1, 2, &natural()).unwrap();
        let bad = Model::new(vec![true, true]); // violates (-1, -2)
        assert!(matches!(
            decode_model(&inst, &bad),
            Err(Error::ModelDoesNotSatisfy { .. })
        ));
    }

    #[test]
    fn external_unsat_is_recorded_unverified() {
        let rep =
            check_equisatisfiability_with(2, 1, 5, &natural(), SatEvidence::ExternalUnsat)
                .unwrap();
        assert!(rep.agree);
        assert!(rep.unverified_external_claim);
        // a wrong external claim shows up as disagreement
        let rep =
            check_equisatisfiability_with(2, 1, 4, &natural(), SatEvidence::ExternalUnsat)
                .unwrap();
        assert!(!rep.agree);
    }

    #[test]
    fn model_evidence_is_verified() {
        let inst = encode(2, 1, 4, &natural()).unwrap();
        let model = solve_instance(&inst, 1_000_000).unwrap().unwrap();
        let rep = check_equisatisfiability_with(2, 1, 4, &natural(), SatEvidence::Model(&model))
            .unwrap();
        assert!(rep.agree && !rep.unverified_external_claim);
        let bad = Model::new(vec![false; inst.num_vars() as usize]);
        assert!(matches!(
            check_equisatisfiability_with(2, 1, 4, &natural(), SatEvidence::Model(&bad)),
            Err(Error::ModelDoesNotSatisfy { .. })
        ));
    }

    #[test]
    fn identity_collapses_to_unit_clause() {
        // 0 + 0 = 0: the triple collapses to a single negative literal,
        // which together with the ALO clause refutes every color
        let e = Enumeration::explicit(
            crate::group::AmbientGroup::Integers,
            alloc::vec![crate::group::GroupElement::Int(0)],
        )
        .unwrap();
        let inst = encode(2, 1, 1, &e).unwrap();
        assert!(inst.clauses().iter().any(|c| c == &alloc::vec![-1]));
        assert!(solve_instance(&inst, 1_000).unwrap().is_none());
        assert!(check_equisatisfiability(2, 1, 1, &e).unwrap());
    }

    #[test]
    fn triggers_appear_for_k2() {
        let inst = encode(2, 2, 6, &natural()).unwrap();
        assert!(!inst.trigger_map().is_empty());
        // every (anchor, color) with partners has a cardinality entry
        assert!(inst.counter_map().contains_key(&(0, 1)));
        let model = solve_instance(&inst, 10_000_000).unwrap().unwrap();
        let coloring = decode_model(&inst, &model).unwrap();
        let p = natural().prefix(6).unwrap();
        assert!(is_valid_coloring(&p, &coloring, 2).unwrap());
    }
}
