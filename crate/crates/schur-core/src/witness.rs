//! Schur configurations, witness search, and certificate checking.
//!
//! A configuration over a prefix is a pair `(a, B)` with `|B| = k` and
//! `{a} ∪ B ∪ (a + B)` contained in the prefix; `a ∈ B` is permitted. A
//! witness is a configuration that is monochromatic under a coloring.

use alloc::vec::Vec;

use crate::coloring::Coloring;
use crate::enumeration::Prefix;
use crate::group::GroupElement;
use crate::Error;

/// For each anchor position `i`, the pairs `(j, s)` with
/// `element(i) + element(j) = element(s)`, ascending in `j`.
///
/// Every configuration `(a, B)` over the prefix is `a = element(i)` together
/// with a choice of `k` distinct partners `j`; the sums land inside the
/// prefix exactly when each `j` appears in `partners[i]`.
#[derive(Debug, Clone)]
pub(crate) struct PartnerTable {
    pub(crate) partners: Vec<Vec<(u32, u32)>>,
}

impl PartnerTable {
    pub(crate) fn new(prefix: &Prefix) -> Self {
        let n = prefix.len();
        let mut partners = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::new();
            for j in 0..n {
                // Positions are in-range, so the only add failure is overflow,
                // which cannot reach a prefix element anyway.
                if let Ok(Some(s)) = prefix.sum_position(i, j) {
                    row.push((j as u32, s as u32));
                }
            }
            partners.push(row);
        }
        PartnerTable { partners }
    }
}

/// First monochromatic configuration in `(anchor, basis)` position order,
/// as (anchor position, partner positions).
pub(crate) fn first_witness_positions(
    table: &PartnerTable,
    colors: &[u32],
    k: usize,
) -> Option<(usize, Vec<usize>)> {
    if k == 0 {
        return None;
    }
    for (i, row) in table.partners.iter().enumerate() {
        let c = colors[i];
        let mut chosen = Vec::new();
        for &(j, s) in row {
            if colors[j as usize] == c && colors[s as usize] == c {
                chosen.push(j as usize);
                if chosen.len() == k {
                    return Some((i, chosen));
                }
            }
        }
    }
    None
}

/// Existence-only variant of [`first_witness_positions`].
pub(crate) fn has_witness(table: &PartnerTable, colors: &[u32], k: usize) -> bool {
    if k == 0 {
        return false;
    }
    for (i, row) in table.partners.iter().enumerate() {
        let c = colors[i];
        let mut count = 0;
        for &(j, s) in row {
            if colors[j as usize] == c && colors[s as usize] == c {
                count += 1;
                if count == k {
                    return true;
                }
            }
        }
    }
    false
}

/// A pair `(a, B)` together with the sums `a + B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchurConfiguration {
    anchor: GroupElement,
    basis: Vec<GroupElement>,
    sums: Vec<GroupElement>,
}

impl SchurConfiguration {
    /// Builds a configuration, sorting the basis and computing the sums in
    /// the anchor's group. Fails on a repeated basis element.
    pub fn new(
        group: &crate::group::AmbientGroup,
        anchor: GroupElement,
        mut basis: Vec<GroupElement>,
    ) -> Result<Self, Error> {
        basis.sort();
        if basis.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicateBasisElement);
        }
        let sums = basis
            .iter()
            .map(|b| group.add(&anchor, b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SchurConfiguration {
            anchor,
            basis,
            sums,
        })
    }

    pub fn anchor(&self) -> &GroupElement {
        &self.anchor
    }

    /// The basis `B`, sorted; its length is the dimension `k`.
    pub fn basis(&self) -> &[GroupElement] {
        &self.basis
    }

    /// `a + b` for each basis element, aligned with [`basis`](Self::basis).
    pub fn sums(&self) -> &[GroupElement] {
        &self.sums
    }

    pub fn k(&self) -> usize {
        self.basis.len()
    }

    /// All elements `{a} ∪ B ∪ (a + B)` without duplicates.
    pub fn support(&self) -> Vec<GroupElement> {
        let mut out = Vec::with_capacity(1 + 2 * self.basis.len());
        out.push(self.anchor.clone());
        out.extend(self.basis.iter().cloned());
        out.extend(self.sums.iter().cloned());
        out.sort();
        out.dedup();
        out
    }
}

/// A monochromatic configuration plus the color it carries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchurWitness {
    pub configuration: SchurConfiguration,
    pub color: u32,
}

/// Streams every configuration `(a, B)` of dimension `k` over the prefix:
/// anchors by position, bases in lexicographic position order.
pub fn enumerate_configurations(prefix: &Prefix, k: usize) -> ConfigurationIter<'_> {
    let table = PartnerTable::new(prefix);
    ConfigurationIter {
        prefix,
        table,
        k,
        anchor: 0,
        combo: Vec::new(),
        fresh_anchor: true,
    }
}

pub struct ConfigurationIter<'a> {
    prefix: &'a Prefix,
    table: PartnerTable,
    k: usize,
    anchor: usize,
    /// Indices into the anchor's partner row, strictly increasing.
    combo: Vec<usize>,
    fresh_anchor: bool,
}

impl<'a> ConfigurationIter<'a> {
    fn emit(&self) -> SchurConfiguration {
        let row = &self.table.partners[self.anchor];
        let basis = self
            .combo
            .iter()
            .map(|&idx| self.prefix.element(row[idx].0 as usize).clone())
            .collect();
        SchurConfiguration::new(
            self.prefix.group(),
            self.prefix.element(self.anchor).clone(),
            basis,
        )
        .expect("positions are distinct and sums are in the prefix")
    }

    /// Advances `combo` to the next k-combination of `0..row_len`.
    fn step_combo(&mut self, row_len: usize) -> bool {
        let k = self.k;
        let mut i = k;
        while i > 0 {
            i -= 1;
            // combo[i] tops out at row_len - k + i
            if self.combo[i] != row_len - k + i {
                self.combo[i] += 1;
                for t in i + 1..k {
                    self.combo[t] = self.combo[t - 1] + 1;
                }
                return true;
            }
        }
        false
    }
}

impl<'a> Iterator for ConfigurationIter<'a> {
    type Item = SchurConfiguration;

    fn next(&mut self) -> Option<Self::Item> {
        if self.k == 0 {
            return None;
        }
        loop {
            if self.anchor >= self.prefix.len() {
                return None;
            }
            let row_len = self.table.partners[self.anchor].len();
            if self.fresh_anchor {
                self.fresh_anchor = false;
                if row_len >= self.k {
                    self.combo = (0..self.k).collect();
                    return Some(self.emit());
                }
            } else if row_len >= self.k && self.step_combo(row_len) {
                return Some(self.emit());
            }
            self.anchor += 1;
            self.fresh_anchor = true;
        }
    }
}

/// First monochromatic configuration under `coloring`, in
/// [`enumerate_configurations`] order, or `None` if the coloring is valid.
pub fn find_witness(
    prefix: &Prefix,
    coloring: &Coloring,
    k: usize,
) -> Result<Option<SchurWitness>, Error> {
    check_lengths(prefix, coloring)?;
    let table = PartnerTable::new(prefix);
    Ok(witness_from_positions(
        prefix,
        coloring,
        first_witness_positions(&table, coloring.colors(), k),
    ))
}

pub(crate) fn witness_from_positions(
    prefix: &Prefix,
    coloring: &Coloring,
    found: Option<(usize, Vec<usize>)>,
) -> Option<SchurWitness> {
    found.map(|(anchor, partners)| {
        let basis = partners
            .iter()
            .map(|&j| prefix.element(j).clone())
            .collect();
        let configuration = SchurConfiguration::new(
            prefix.group(),
            prefix.element(anchor).clone(),
            basis,
        )
        .expect("partner positions are distinct");
        SchurWitness {
            configuration,
            color: coloring.color(anchor),
        }
    })
}

/// Checks a claimed witness against a prefix and coloring: the basis must
/// have exactly `k` elements, the whole support must lie in the prefix, and
/// every support element must carry `witness.color`.
///
/// Elements outside the prefix make the witness invalid, not an error.
pub fn verify_witness(
    prefix: &Prefix,
    coloring: &Coloring,
    witness: &SchurWitness,
    k: usize,
) -> Result<bool, Error> {
    check_lengths(prefix, coloring)?;
    if witness.configuration.k() != k {
        return Ok(false);
    }
    if witness.color == 0 || witness.color > coloring.r() {
        return Ok(false);
    }
    for e in witness.configuration.support() {
        match prefix.position_of(&e) {
            Some(pos) if coloring.color(pos) == witness.color => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// `true` iff the coloring admits no `k`-dimensional witness.
pub fn is_valid_coloring(prefix: &Prefix, coloring: &Coloring, k: usize) -> Result<bool, Error> {
    check_lengths(prefix, coloring)?;
    let table = PartnerTable::new(prefix);
    Ok(!has_witness(&table, coloring.colors(), k))
}

fn check_lengths(prefix: &Prefix, coloring: &Coloring) -> Result<(), Error> {
    if coloring.len() != prefix.len() {
        return Err(Error::ColoringLengthMismatch {
            coloring: coloring.len(),
            prefix: prefix.len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::Enumeration;
    use crate::group::AmbientGroup;
    use alloc::vec;

    fn natural_prefix(n: usize) -> Prefix {
        Enumeration::natural().prefix(n).unwrap()
    }

    fn ints(config: &SchurConfiguration) -> (i64, Vec<i64>) {
        (
            config.anchor().as_int().unwrap(),
            config.basis().iter().map(|b| b.as_int().unwrap()).collect(),
        )
    }

    #[test]
    fn configurations_of_length_two_prefix() {
        let p = natural_prefix(2);
        let all: Vec<_> = enumerate_configurations(&p, 1).map(|c| ints(&c)).collect();
        assert_eq!(all, vec![(1, vec![1])]);
    }

    #[test]
    fn configurations_of_length_three_prefix() {
        let p = natural_prefix(3);
        let all: Vec<_> = enumerate_configurations(&p, 1).map(|c| ints(&c)).collect();
        assert_eq!(all, vec![(1, vec![1]), (1, vec![2]), (2, vec![1])]);
        let pairs: Vec<_> = enumerate_configurations(&p, 2).map(|c| ints(&c)).collect();
        assert_eq!(pairs, vec![(1, vec![1, 2])]);
    }

    #[test]
    fn whole_set_monochromatic_has_witness() {
        let p = natural_prefix(2);
        let c = Coloring::constant(1, 2, 1).unwrap();
        let w = find_witness(&p, &c, 1).unwrap().unwrap();
        assert_eq!(w.color, 1);
        assert_eq!(ints(&w.configuration), (1, vec![1]));
        assert!(verify_witness(&p, &c, &w, 1).unwrap());
    }

    #[test]
    fn split_coloring_of_four_is_valid() {
        let p = natural_prefix(4);
        // classes {1,4} and {2,3}
        let c = Coloring::new(2, vec![1, 2, 2, 1]).unwrap();
        assert!(find_witness(&p, &c, 1).unwrap().is_none());
        assert!(is_valid_coloring(&p, &c, 1).unwrap());
    }

    #[test]
    fn merged_class_of_five_is_invalid() {
        let p = natural_prefix(5);
        // classes {1,4,5} and {2,3}: 1 + 4 = 5 is monochromatic
        let c = Coloring::new(2, vec![1, 2, 2, 1, 1]).unwrap();
        assert!(!is_valid_coloring(&p, &c, 1).unwrap());
    }

    #[test]
    fn wrong_color_witness_rejected() {
        let p = natural_prefix(2);
        let c = Coloring::constant(2, 2, 1).unwrap();
        let config = SchurConfiguration::new(
            &AmbientGroup::Integers,
            GroupElement::Int(1),
            vec![GroupElement::Int(1)],
        )
        .unwrap();
        let w = SchurWitness {
            configuration: config,
            color: 2,
        };
        assert!(!verify_witness(&p, &c, &w, 1).unwrap());
    }

    #[test]
    fn differently_colored_support_rejected() {
        let p = natural_prefix(3);
        let c = Coloring::new(2, vec![1, 2, 1]).unwrap();
        let config = SchurConfiguration::new(
            &AmbientGroup::Integers,
            GroupElement::Int(1),
            vec![GroupElement::Int(2)],
        )
        .unwrap();
        let w = SchurWitness {
            configuration: config,
            color: 1,
        };
        // element 2 carries color 2, so the claim is false
        assert!(!verify_witness(&p, &c, &w, 1).unwrap());
    }

    #[test]
    fn length_mismatch_is_structural_error() {
        let p = natural_prefix(3);
        let c = Coloring::constant(1, 2, 1).unwrap();
        assert!(matches!(
            find_witness(&p, &c, 1),
            Err(Error::ColoringLengthMismatch { .. })
        ));
    }

    #[test]
    fn cyclic_group_configurations_wrap() {
        // Z/5 with ground set {1, 2, 3}: 3 + 3 = 1 wraps back into the set
        let group = AmbientGroup::cyclic_product(vec![5]).unwrap();
        let residue = |v: u32| GroupElement::Residues(vec![v]);
        let e = Enumeration::explicit(group, vec![residue(1), residue(2), residue(3)]).unwrap();
        let p = e.prefix(3).unwrap();
        let all: Vec<_> = enumerate_configurations(&p, 1)
            .map(|c| {
                (
                    c.anchor().clone(),
                    c.basis().to_vec(),
                    c.sums().to_vec(),
                )
            })
            .collect();
        assert_eq!(all.len(), 4);
        assert_eq!(
            all[3],
            (residue(3), vec![residue(3)], vec![residue(1)])
        );
        // the constant coloring is forced by (1, {1}) already
        let c = Coloring::constant(1, 3, 1).unwrap();
        let w = find_witness(&p, &c, 1).unwrap().unwrap();
        assert_eq!(w.configuration.anchor(), &residue(1));
    }

    #[test]
    fn find_witness_agrees_with_definitional_scan() {
        // The partner-count shortcut must return exactly the first
        // monochromatic configuration in enumeration order.
        let p = natural_prefix(7);
        for bits in 0..(1u32 << 7) {
            let colors: Vec<u32> = (0..7).map(|i| 1 + ((bits >> i) & 1)).collect();
            let coloring = Coloring::new(2, colors).unwrap();
            for k in 1..=2 {
                let fast = find_witness(&p, &coloring, k).unwrap();
                let slow = enumerate_configurations(&p, k).find(|config| {
                    let c0 = coloring.color(p.position_of(config.anchor()).unwrap());
                    config.support().iter().all(|e| {
                        p.position_of(e)
                            .map(|pos| coloring.color(pos) == c0)
                            .unwrap_or(false)
                    })
                });
                assert_eq!(fast.map(|w| w.configuration), slow);
            }
        }
    }
}
