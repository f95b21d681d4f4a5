use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A partition: a non-empty, weakly decreasing sequence of positive parts.
///
/// Partitions are stored largest part first. The statistic of interest
/// throughout this crate is the *perimeter*, the largest part plus the
/// number of parts minus one; there are exactly `2^(n-1)` partitions with
/// perimeter `n`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    /// Validates and wraps a part list.
    pub fn new(parts: Vec<u64>) -> Result<Self> {
        if parts.is_empty()
            || parts.iter().any(|&p| p == 0)
            || parts.windows(2).any(|w| w[0] < w[1])
        {
            return Err(Error::InvalidPartition);
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// Largest part.
    pub fn largest(&self) -> u64 {
        self.parts[0]
    }

    /// Smallest part.
    pub fn smallest(&self) -> u64 {
        *self.parts.last().unwrap()
    }

    /// Sum of the parts.
    pub fn size(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// The perimeter: largest part + number of parts - 1.
    pub fn perimeter(&self) -> u64 {
        self.parts[0] + self.parts.len() as u64 - 1
    }

    /// Differences between consecutive parts (one fewer than the part count).
    pub fn gaps(&self) -> impl Iterator<Item = u64> + '_ {
        self.parts.windows(2).map(|w| w[0] - w[1])
    }

    /// The conjugate: column lengths of the Young diagram. An involution
    /// that preserves the perimeter (largest part and length swap roles).
    pub fn conjugate(&self) -> Partition {
        let mut cols = Vec::with_capacity(self.parts[0] as usize);
        // Column c (1-based) has length = number of parts >= c.
        let mut row = self.parts.len();
        for col in 1..=self.parts[0] {
            while self.parts[row - 1] < col {
                row -= 1;
            }
            cols.push(row as u64);
        }
        Partition { parts: cols }
    }

    /// Largest multiplicity among the part values.
    pub fn max_run(&self) -> u64 {
        let mut best = 1u64;
        let mut run = 1u64;
        for w in self.parts.windows(2) {
            if w[0] == w[1] {
                run += 1;
                best = best.max(run);
            } else {
                run = 1;
            }
        }
        best
    }

    pub(crate) fn from_parts_unchecked(parts: Vec<u64>) -> Self {
        debug_assert!(!parts.is_empty());
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(parts.iter().all(|&p| p > 0));
        Partition { parts }
    }
}

impl fmt::Display for Partition {
    /// Comma-separated parts, the form used at the CLI boundary.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({self})")
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = crate::parse_parts(s)?;
        Partition::new(parts).map_err(|_| {
            Error::parse(s, "parts must be positive and weakly decreasing")
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perimeter_examples() {
        let p = Partition::new(vec![8, 6, 6, 5, 2]).unwrap();
        assert_eq!(p.perimeter(), 12);
        assert_eq!(Partition::new(vec![4]).unwrap().perimeter(), 4);
        assert_eq!(Partition::new(vec![1, 1, 1, 1]).unwrap().perimeter(), 4);
    }

    #[test]
    fn conjugate_pair() {
        let p = Partition::new(vec![5, 3, 1, 1]).unwrap();
        let q = Partition::new(vec![4, 2, 2, 1, 1]).unwrap();
        assert_eq!(p.conjugate(), q);
        assert_eq!(q.conjugate(), p);
        // self-conjugate
        let s = Partition::new(vec![2, 1]).unwrap();
        assert_eq!(s.conjugate(), s);
    }

    #[test]
    fn conjugate_preserves_perimeter() {
        let p = Partition::new(vec![8, 6, 6, 5, 2]).unwrap();
        assert_eq!(p.conjugate().perimeter(), p.perimeter());
    }

    #[test]
    fn rejects_invalid() {
        assert!(Partition::new(vec![]).is_err());
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn max_run_counts_repeats() {
        assert_eq!(Partition::new(vec![4, 4, 4, 1]).unwrap().max_run(), 3);
        assert_eq!(Partition::new(vec![5, 3, 1]).unwrap().max_run(), 1);
    }

    #[test]
    fn display_and_parse_round_trip() {
        let p = Partition::new(vec![5, 3, 1, 1]).unwrap();
        assert_eq!(p.to_string(), "5,3,1,1");
        assert_eq!("5,3,1,1".parse::<Partition>().unwrap(), p);
        assert!("1,2".parse::<Partition>().is_err());
        assert!("".parse::<Partition>().is_err());
    }
}
