//! Nonempty subsets of `[n]` packed into a machine word.
//!
//! A [`SubsetMask`] is simultaneously the index set `I`, the hyperplane
//! `H_I = { sum_{i in I} x_i = 0 }` and its 0/1 normal vector. Bit `i - 1`
//! encodes membership of `i`. Comparing masks by their integer value gives
//! the binary order used for broken circuits.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    bits: u64,
    n: u8,
}

impl SubsetMask {
    pub const MAX_N: usize = 63;

    pub fn new(bits: u64, n: usize) -> Result<Self> {
        if n == 0 || n > Self::MAX_N || bits == 0 || bits >> n != 0 {
            return Err(Error::InvalidMask { bits, n });
        }
        Ok(SubsetMask { bits, n: n as u8 })
    }

    /// Builds a mask from 1-based elements.
    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I, n: usize) -> Result<Self> {
        let mut bits = 0u64;
        for e in elements {
            if e == 0 || e > n || e > Self::MAX_N {
                return Err(Error::InvalidInput(format!("element {e} outside [1, {n}]")));
            }
            bits |= 1 << (e - 1);
        }
        Self::new(bits, n)
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn n(self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Always false; kept for API symmetry with collections.
    #[inline]
    pub fn is_empty(self) -> bool {
        false
    }

    #[inline]
    pub fn contains(self, element: usize) -> bool {
        element >= 1 && element <= self.n() && self.bits >> (element - 1) & 1 == 1
    }

    /// Sorted 1-based elements.
    pub fn elements(self) -> Vec<usize> {
        (1..=self.n()).filter(|&e| self.contains(e)).collect()
    }

    /// The characteristic vector as integers.
    pub fn to_vector(self) -> Vec<i64> {
        (0..self.n()).map(|i| ((self.bits >> i) & 1) as i64).collect()
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (idx, e) in self.elements().into_iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Checks that every mask lives in the same ambient dimension and returns it.
pub(crate) fn common_dimension(masks: &[SubsetMask]) -> Result<Option<usize>> {
    let mut dim = None;
    for m in masks {
        match dim {
            None => dim = Some(m.n()),
            Some(d) if d != m.n() => {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: m.n(),
                })
            }
            _ => {}
        }
    }
    Ok(dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_out_of_range() {
        assert!(SubsetMask::new(0, 3).is_err());
        assert!(SubsetMask::new(0b1000, 3).is_err());
        assert!(SubsetMask::new(1, 64).is_err());
        assert!(SubsetMask::new(0b111, 3).is_ok());
    }

    #[test]
    fn elements_round_trip() {
        let m = SubsetMask::from_elements([1, 3], 3).unwrap();
        assert_eq!(m.bits(), 0b101);
        assert_eq!(m.elements(), vec![1, 3]);
        assert_eq!(m.to_string(), "{1,3}");
        assert_eq!(m.to_vector(), vec![1, 0, 1]);
    }

    #[test]
    fn binary_order_is_mask_value() {
        let a = SubsetMask::from_elements([1, 2], 3).unwrap();
        let b = SubsetMask::from_elements([3], 3).unwrap();
        assert!(a < b);
    }
}
