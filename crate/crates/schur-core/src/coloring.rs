//! Total colorings of prefixes.

use alloc::vec;
use alloc::vec::Vec;

use crate::Error;

/// A total assignment of colors `1..=r` to the positions of a prefix.
///
/// Quantification in `S(r, k)` runs over all functions into `{1, ..., r}`,
/// not only the surjective ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    r: u32,
    colors: Vec<u32>,
}

impl Coloring {
    pub fn new(r: u32, colors: Vec<u32>) -> Result<Self, Error> {
        if r == 0 {
            return Err(Error::InvalidParameter("r must be positive"));
        }
        for &c in &colors {
            if c == 0 || c > r {
                return Err(Error::ColorOutOfRange { color: c, r });
            }
        }
        Ok(Coloring { r, colors })
    }

    /// All positions colored `color`.
    pub fn constant(r: u32, n: usize, color: u32) -> Result<Self, Error> {
        Coloring::new(r, vec![color; n])
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Color at a 0-based position.
    pub fn color(&self, pos: usize) -> u32 {
        self.colors[pos]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// Restriction to the first `m` positions.
    pub fn restrict(&self, m: usize) -> Coloring {
        Coloring {
            r: self.r,
            colors: self.colors[..m.min(self.colors.len())].to_vec(),
        }
    }

    /// Applies a permutation of the color set; `perm[c - 1]` is the image
    /// of color `c`.
    pub fn permute(&self, perm: &[u32]) -> Result<Coloring, Error> {
        if perm.len() != self.r as usize {
            return Err(Error::InvalidParameter("permutation size must equal r"));
        }
        let colors = self
            .colors
            .iter()
            .map(|&c| perm[(c - 1) as usize])
            .collect();
        Coloring::new(self.r, colors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range_colors() {
        assert!(matches!(
            Coloring::new(2, vec![1, 3]),
            Err(Error::ColorOutOfRange { color: 3, r: 2 })
        ));
        assert!(matches!(
            Coloring::new(2, vec![0]),
            Err(Error::ColorOutOfRange { color: 0, r: 2 })
        ));
    }

    #[test]
    fn restrict_truncates() {
        let c = Coloring::new(2, vec![1, 2, 2, 1]).unwrap();
        assert_eq!(c.restrict(2).colors(), &[1, 2]);
        assert_eq!(c.restrict(9).colors(), c.colors());
    }

    #[test]
    fn permute_swaps_classes() {
        let c = Coloring::new(2, vec![1, 2, 2, 1]).unwrap();
        let swapped = c.permute(&[2, 1]).unwrap();
        assert_eq!(swapped.colors(), &[2, 1, 1, 2]);
    }
}
