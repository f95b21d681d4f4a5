use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest size for which composition indices fit in a `u64`.
pub const MAX_SIZE: u64 = 64;

/// A composition: a non-empty sequence of positive parts, order significant.
///
/// Compositions of `n` are the universal enumeration substrate here: they
/// biject with bitmasks in `[0, 2^(n-1))` (one bit per internal part
/// boundary), which fixes a canonical order for every enumerator in the
/// crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition {
    parts: Vec<u64>,
}

impl Composition {
    /// Validates and wraps a part list.
    pub fn new(parts: Vec<u64>) -> Result<Self> {
        if parts.is_empty() || parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidComposition);
        }
        Ok(Composition { parts })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// Sum of the parts.
    pub fn size(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// Final part.
    pub fn last(&self) -> u64 {
        *self.parts.last().unwrap()
    }

    /// Canonical rank of this composition among all compositions of its size.
    pub fn rank(&self) -> CompositionIndex {
        rank_composition(self)
    }

    pub(crate) fn from_parts_unchecked(parts: Vec<u64>) -> Self {
        debug_assert!(!parts.is_empty());
        debug_assert!(parts.iter().all(|&p| p > 0));
        Composition { parts }
    }

    pub(crate) fn into_parts(self) -> Vec<u64> {
        self.parts
    }
}

impl fmt::Display for Composition {
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

impl fmt::Debug for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Composition({self})")
    }
}

impl FromStr for Composition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Composition::new(crate::parse_parts(s)?)
            .map_err(|_| Error::parse(s, "parts must be positive integers"))
    }
}

/// Position of a composition in the canonical enumeration of its size class.
///
/// Bit `i` of `index` (0-based, `i` in `0..n-1`) is set exactly when a part
/// boundary sits after unit `i + 1`, so index 0 is `(n)` and index
/// `2^(n-1) - 1` is `(1, ..., 1)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CompositionIndex {
    pub n: u64,
    pub index: u64,
}

impl CompositionIndex {
    pub fn new(n: u64, index: u64) -> Result<Self> {
        check_size(n)?;
        if index >= composition_count(n) {
            return Err(Error::IndexOutOfRange { n, index });
        }
        Ok(CompositionIndex { n, index })
    }

    /// The composition this index stands for.
    pub fn unrank(self) -> Composition {
        let mut parts = Vec::new();
        unrank_into(self.n, self.index, &mut parts);
        Composition { parts }
    }
}

/// Decodes the boundary bitmask into a caller-provided part buffer.
pub(crate) fn unrank_into(n: u64, index: u64, out: &mut Vec<u64>) {
    out.clear();
    let mut run = 1u64;
    for unit in 1..n {
        if index >> (unit - 1) & 1 == 1 {
            out.push(run);
            run = 1;
        } else {
            run += 1;
        }
    }
    out.push(run);
}

/// Rank of a part slice (the inverse of [`unrank_into`]).
pub(crate) fn rank_parts(parts: &[u64]) -> u64 {
    let mut index = 0u64;
    let mut pos = 0u64;
    for &part in &parts[..parts.len() - 1] {
        pos += part;
        index |= 1u64 << (pos - 1);
    }
    index
}

fn check_size(n: u64) -> Result<()> {
    if n == 0 || n > MAX_SIZE {
        return Err(Error::SizeOutOfRange { n, max: MAX_SIZE });
    }
    Ok(())
}

/// Decodes the composition of `n` at the given canonical index.
pub fn unrank_composition(n: u64, index: u64) -> Result<Composition> {
    Ok(CompositionIndex::new(n, index)?.unrank())
}

/// Canonical rank of a composition: the boundary bitmask described on
/// [`CompositionIndex`]. Inverse of [`unrank_composition`].
pub fn rank_composition(c: &Composition) -> CompositionIndex {
    CompositionIndex {
        n: c.size(),
        index: rank_parts(&c.parts),
    }
}

/// All `2^(n-1)` compositions of `n` in canonical rank order.
pub fn enumerate_compositions(n: u64) -> Result<Compositions> {
    check_size(n)?;
    Ok(Compositions {
        n,
        next: 0,
        remaining: composition_count(n),
    })
}

/// Number of compositions of `n`, i.e. `2^(n-1)`. Callers must keep
/// `n` in `1..=MAX_SIZE`.
pub fn composition_count(n: u64) -> u64 {
    debug_assert!(n >= 1 && n <= MAX_SIZE);
    1u64 << (n - 1)
}

/// Iterator over the compositions of a fixed size, in rank order.
#[derive(Clone, Debug)]
pub struct Compositions {
    n: u64,
    next: u64,
    remaining: u64,
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        if self.remaining == 0 {
            return None;
        }
        let c = CompositionIndex {
            n: self.n,
            index: self.next,
        }
        .unrank();
        self.next += 1;
        self.remaining -= 1;
        Some(c)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining).ok();
        (r.unwrap_or(usize::MAX), r)
    }
}

/// The base-`m` row decomposition of a composition: part `c_i` becomes the
/// digit row `(m, ..., m, r)` with `1 <= r <= m` and digits summing to `c_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MModularDiagram {
    modulus: u64,
    rows: Vec<Vec<u64>>,
}

impl MModularDiagram {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }
}

/// Builds the `m`-modular diagram of a composition. Requires `m >= 2`.
pub fn m_modular(c: &Composition, m: u64) -> Result<MModularDiagram> {
    if m < 2 {
        return Err(Error::InvalidModulus { min: 2, got: m });
    }
    let rows = c
        .parts
        .iter()
        .map(|&part| {
            // q full digits of m, then a trailing digit in 1..=m.
            let q = (part - 1) / m;
            let r = part - q * m;
            let mut row = vec![m; q as usize];
            row.push(r);
            row
        })
        .collect();
    Ok(MModularDiagram { modulus: m, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unrank_corners() {
        assert_eq!(unrank_composition(4, 0).unwrap().parts(), &[4]);
        assert_eq!(unrank_composition(4, 7).unwrap().parts(), &[1, 1, 1, 1]);
        assert_eq!(unrank_composition(4, 1).unwrap().parts(), &[1, 3]);
        assert_eq!(unrank_composition(1, 0).unwrap().parts(), &[1]);
    }

    #[test]
    fn rank_corners() {
        let c = Composition::new(vec![4]).unwrap();
        assert_eq!(rank_composition(&c).index, 0);
        let c = Composition::new(vec![1, 1, 1, 1]).unwrap();
        assert_eq!(rank_composition(&c).index, 7);
        let c = Composition::new(vec![1, 3]).unwrap();
        assert_eq!(rank_composition(&c).index, 1);
    }

    #[test]
    fn index_out_of_range() {
        assert!(unrank_composition(4, 8).is_err());
        assert!(unrank_composition(0, 0).is_err());
        assert!(unrank_composition(65, 0).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_compositions(1).unwrap().count(), 1);
        assert_eq!(enumerate_compositions(3).unwrap().count(), 4);
        assert_eq!(enumerate_compositions(10).unwrap().count(), 512);
    }

    #[test]
    fn rank_unrank_inverse_small() {
        for n in 1..=10u64 {
            for index in 0..composition_count(n) {
                let c = unrank_composition(n, index).unwrap();
                assert_eq!(c.size(), n);
                let r = rank_composition(&c);
                assert_eq!((r.n, r.index), (n, index));
            }
        }
    }

    #[test]
    fn modular_rows_figure() {
        let c = Composition::new(vec![5, 3, 4, 2, 7]).unwrap();
        let d = m_modular(&c, 3).unwrap();
        let want: Vec<Vec<u64>> =
            vec![vec![3, 2], vec![3], vec![3, 1], vec![2], vec![3, 3, 1]];
        assert_eq!(d.rows(), &want[..]);

        let c = Composition::new(vec![7, 9, 1, 7, 3]).unwrap();
        let d = m_modular(&c, 4).unwrap();
        let want: Vec<Vec<u64>> =
            vec![vec![4, 3], vec![4, 4, 1], vec![1], vec![4, 3], vec![3]];
        assert_eq!(d.rows(), &want[..]);
    }

    #[test]
    fn modular_exact_multiple_keeps_final_digit_m() {
        let c = Composition::new(vec![3]).unwrap();
        assert_eq!(m_modular(&c, 3).unwrap().rows(), &[vec![3]]);
    }

    #[test]
    fn modular_rejects_small_modulus() {
        let c = Composition::new(vec![3]).unwrap();
        assert!(matches!(
            m_modular(&c, 1),
            Err(Error::InvalidModulus { min: 2, got: 1 })
        ));
    }

    #[test]
    fn modular_rows_sum_to_parts() {
        for n in 1..=10u64 {
            for c in enumerate_compositions(n).unwrap() {
                for m in 2..=6u64 {
                    let d = m_modular(&c, m).unwrap();
                    for (row, &part) in d.rows().iter().zip(c.parts()) {
                        assert_eq!(row.iter().sum::<u64>(), part);
                        let (last, body) = row.split_last().unwrap();
                        assert!(body.iter().all(|&x| x == m));
                        assert!(*last >= 1 && *last <= m);
                    }
                }
            }
        }
    }
}
