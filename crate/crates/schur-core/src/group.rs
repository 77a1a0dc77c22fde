//! Ambient commutative groups and their elements.

use alloc::vec;
use alloc::vec::Vec;

use core::fmt;

use crate::Error;

/// The commutative group an enumeration lives in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AmbientGroup {
    /// The integers under addition.
    Integers,
    /// A product of cyclic groups `Z/m_1 × ... × Z/m_d` with componentwise
    /// modular addition.
    CyclicProduct(Vec<u32>),
}

/// An element of an [`AmbientGroup`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupElement {
    Int(i64),
    Residues(Vec<u32>),
}

impl AmbientGroup {
    /// A validated cyclic product; every modulus must be positive.
    pub fn cyclic_product(moduli: Vec<u32>) -> Result<Self, Error> {
        if moduli.is_empty() || moduli.contains(&0) {
            return Err(Error::InvalidParameter("moduli must be positive"));
        }
        Ok(AmbientGroup::CyclicProduct(moduli))
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            AmbientGroup::Integers => GroupElement::Int(0),
            AmbientGroup::CyclicProduct(moduli) => GroupElement::Residues(vec![0; moduli.len()]),
        }
    }

    /// Whether `g` is a well-formed element of this group.
    pub fn contains(&self, g: &GroupElement) -> bool {
        match (self, g) {
            (AmbientGroup::Integers, GroupElement::Int(_)) => true,
            (AmbientGroup::CyclicProduct(moduli), GroupElement::Residues(rs)) => {
                rs.len() == moduli.len() && rs.iter().zip(moduli.iter()).all(|(r, m)| r < m)
            }
            _ => false,
        }
    }

    /// Group sum; componentwise modular for cyclic products.
    pub fn add(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, Error> {
        if !self.contains(g) || !self.contains(h) {
            return Err(Error::GroupMismatch);
        }
        match (self, g, h) {
            (AmbientGroup::Integers, GroupElement::Int(a), GroupElement::Int(b)) => {
                a.checked_add(*b).map(GroupElement::Int).ok_or(Error::Overflow)
            }
            (AmbientGroup::CyclicProduct(moduli), GroupElement::Residues(a), GroupElement::Residues(b)) => {
                let sum = moduli
                    .iter()
                    .zip(a.iter().zip(b.iter()))
                    .map(|(&m, (&x, &y))| ((x as u64 + y as u64) % m as u64) as u32)
                    .collect();
                Ok(GroupElement::Residues(sum))
            }
            _ => Err(Error::GroupMismatch),
        }
    }
}

impl GroupElement {
    /// Integer value, if this is an [`AmbientGroup::Integers`] element.
    pub fn as_int(&self) -> Option<i64> {
        match self {
            GroupElement::Int(v) => Some(*v),
            GroupElement::Residues(_) => None,
        }
    }
}

impl From<i64> for GroupElement {
    fn from(v: i64) -> Self {
        GroupElement::Int(v)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Int(v) => write!(f, "{v}"),
            GroupElement::Residues(rs) => {
                write!(f, "(")?;
                for (i, r) in rs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{r}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_addition() {
        let g = AmbientGroup::Integers;
        assert_eq!(
            g.add(&GroupElement::Int(2), &GroupElement::Int(3)).unwrap(),
            GroupElement::Int(5)
        );
    }

    #[test]
    fn identity_is_neutral() {
        let g = AmbientGroup::Integers;
        let e = g.identity();
        for v in [-3i64, 0, 7, 1 << 40] {
            let x = GroupElement::Int(v);
            assert_eq!(g.add(&x, &e).unwrap(), x);
        }
    }

    #[test]
    fn cyclic_addition_wraps() {
        let g = AmbientGroup::cyclic_product(vec![3]).unwrap();
        let two = GroupElement::Residues(vec![2]);
        assert_eq!(g.add(&two, &two).unwrap(), GroupElement::Residues(vec![1]));
    }

    #[test]
    fn mismatched_kinds_error() {
        let g = AmbientGroup::Integers;
        let err = g
            .add(&GroupElement::Int(1), &GroupElement::Residues(vec![0]))
            .unwrap_err();
        assert_eq!(err, Error::GroupMismatch);
    }

    #[test]
    fn residues_out_of_range_rejected() {
        let g = AmbientGroup::cyclic_product(vec![3, 5]).unwrap();
        assert!(g.contains(&GroupElement::Residues(vec![2, 4])));
        assert!(!g.contains(&GroupElement::Residues(vec![3, 0])));
        assert!(!g.contains(&GroupElement::Residues(vec![1])));
    }
}
