//! Ordered ground sequences and their finite prefixes.
//!
//! Every search in this crate runs over a [`Prefix`]: the first `n` elements
//! of an injective [`Enumeration`]. The Schur numbers `S(r, k)` depend on the
//! enumeration, not just on the underlying set, so the enumeration is an
//! explicit input everywhere.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::group::{AmbientGroup, GroupElement};
use crate::Error;

/// How the ordered sequence `a_1, a_2, ...` is produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnumerationSource {
    /// `a_n = n` over the integers.
    Natural,
    /// An explicit injective list.
    Explicit(Vec<GroupElement>),
    /// Increasing enumeration of `{ x >= min : x ≡ residue (mod modulus) }`
    /// over the integers.
    ResidueTail { modulus: i64, residue: i64, min: i64 },
}

/// An injective ordered sequence of group elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    group: AmbientGroup,
    source: EnumerationSource,
}

impl Enumeration {
    /// The natural numbers `1, 2, 3, ...` inside the integers.
    pub fn natural() -> Self {
        Enumeration {
            group: AmbientGroup::Integers,
            source: EnumerationSource::Natural,
        }
    }

    /// An explicit list; fails if any element repeats or does not belong to
    /// the group.
    pub fn explicit(group: AmbientGroup, elements: Vec<GroupElement>) -> Result<Self, Error> {
        let mut seen = BTreeMap::new();
        for (i, e) in elements.iter().enumerate() {
            if !group.contains(e) {
                return Err(Error::GroupMismatch);
            }
            if seen.insert(e.clone(), i).is_some() {
                return Err(Error::DuplicateElement { index: i });
            }
        }
        Ok(Enumeration {
            group,
            source: EnumerationSource::Explicit(elements),
        })
    }

    /// Increasing enumeration of a residue class tail of the integers.
    pub fn residue_tail(modulus: i64, residue: i64, min: i64) -> Result<Self, Error> {
        if modulus < 1 {
            return Err(Error::InvalidParameter("modulus must be positive"));
        }
        Ok(Enumeration {
            group: AmbientGroup::Integers,
            source: EnumerationSource::ResidueTail {
                modulus,
                residue,
                min,
            },
        })
    }

    pub fn group(&self) -> &AmbientGroup {
        &self.group
    }

    pub fn source(&self) -> &EnumerationSource {
        &self.source
    }

    /// Number of elements available, if finite.
    pub fn available_len(&self) -> Option<usize> {
        match &self.source {
            EnumerationSource::Explicit(v) => Some(v.len()),
            _ => None,
        }
    }

    /// The `n`-th element, 1-based.
    pub fn nth(&self, n: usize) -> Result<GroupElement, Error> {
        if n == 0 {
            return Err(Error::InvalidParameter("enumeration index is 1-based"));
        }
        match &self.source {
            EnumerationSource::Natural => Ok(GroupElement::Int(n as i64)),
            EnumerationSource::Explicit(v) => v.get(n - 1).cloned().ok_or(Error::PrefixTooLong {
                requested: n,
                available: v.len(),
            }),
            EnumerationSource::ResidueTail {
                modulus,
                residue,
                min,
            } => {
                let rem = residue.rem_euclid(*modulus);
                // First x >= min with x ≡ residue (mod modulus).
                let first = min + (rem - min).rem_euclid(*modulus);
                let offset = (n as i64 - 1)
                    .checked_mul(*modulus)
                    .ok_or(Error::Overflow)?;
                first.checked_add(offset).map(GroupElement::Int).ok_or(Error::Overflow)
            }
        }
    }

    /// The prefix `{a_1, ..., a_n}` with its position index.
    pub fn prefix(&self, n: usize) -> Result<Prefix, Error> {
        if let Some(avail) = self.available_len() {
            if n > avail {
                return Err(Error::PrefixTooLong {
                    requested: n,
                    available: avail,
                });
            }
        }
        let mut elements = Vec::with_capacity(n);
        let mut index = BTreeMap::new();
        for i in 1..=n {
            let e = self.nth(i)?;
            index.insert(e.clone(), i - 1);
            elements.push(e);
        }
        Ok(Prefix {
            group: self.group.clone(),
            elements,
            index,
        })
    }
}

/// The first `n` elements of an enumeration, as an ordered ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prefix {
    group: AmbientGroup,
    elements: Vec<GroupElement>,
    index: BTreeMap<GroupElement, usize>,
}

impl Prefix {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn group(&self) -> &AmbientGroup {
        &self.group
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    /// Element at a 0-based position.
    pub fn element(&self, pos: usize) -> &GroupElement {
        &self.elements[pos]
    }

    /// 0-based position of `g`, if it is in the prefix.
    pub fn position_of(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index.contains_key(g)
    }

    /// Whether the group identity is one of the elements. Configurations
    /// through the identity are legal but trivialize forcing; callers may
    /// want to surface a diagnostic.
    pub fn contains_identity(&self) -> bool {
        self.contains(&self.group.identity())
    }

    /// Position of `element(i) + element(j)` inside the prefix, if present.
    pub fn sum_position(&self, i: usize, j: usize) -> Result<Option<usize>, Error> {
        let s = self.group.add(&self.elements[i], &self.elements[j])?;
        Ok(self.position_of(&s))
    }
}
