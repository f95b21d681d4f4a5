//! The perimeter bijection between compositions of `n` and partitions with
//! perimeter `n`.
//!
//! Row `i` of a composition contributes `c_i` boundary squares when the rows
//! are slid to overlap in exactly one column, so part `i` of the image is
//! `1 + sum_{j >= i} (c_j - 1)`. The inverse reads off successive gaps plus
//! one, with the final part passed through unchanged.

use crate::composition::{enumerate_compositions, Composition, Compositions};
use crate::error::Result;
use crate::partition::Partition;

/// Maps a composition of `n` to the partition with perimeter `n` whose
/// gaps-plus-one spell out the composition.
pub fn pi(c: &Composition) -> Partition {
    let mut parts = vec![0u64; c.len()];
    pi_into(c.parts(), &mut parts);
    Partition::from_parts_unchecked(parts)
}

/// Computes the parts of `pi` into a caller-provided buffer (resized to the
/// composition length). Hot loops reuse the buffer to avoid reallocating.
pub(crate) fn pi_into(c: &[u64], out: &mut Vec<u64>) {
    out.clear();
    out.resize(c.len(), 0);
    let mut level = 1u64;
    for (slot, &part) in out.iter_mut().zip(c).rev() {
        level += part - 1;
        *slot = level;
    }
}

/// Inverse of [`pi`]: consecutive differences plus one, then the last part.
pub fn pi_inverse(p: &Partition) -> Composition {
    let parts = p.parts();
    let mut out = Vec::with_capacity(parts.len());
    for w in parts.windows(2) {
        out.push(w[0] - w[1] + 1);
    }
    out.push(*parts.last().unwrap());
    Composition::from_parts_unchecked(out)
}

/// All `2^(n-1)` partitions with perimeter `n`, in canonical rank order of
/// their composition preimages.
pub fn enumerate_perimeter_partitions(n: u64) -> Result<PerimeterPartitions> {
    Ok(PerimeterPartitions {
        inner: enumerate_compositions(n)?,
    })
}

/// Iterator over the partitions with a fixed perimeter.
#[derive(Clone, Debug)]
pub struct PerimeterPartitions {
    inner: Compositions,
}

impl Iterator for PerimeterPartitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        self.inner.next().map(|c| pi(&c))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        self.inner.size_hint()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn comp(parts: &[u64]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    fn part(parts: &[u64]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn pi_figure_example() {
        assert_eq!(pi(&comp(&[3, 1, 2, 4, 2])), part(&[8, 6, 6, 5, 2]));
    }

    #[test]
    fn pi_single_row_and_all_ones() {
        assert_eq!(pi(&comp(&[7])), part(&[7]));
        assert_eq!(pi(&comp(&[1, 1, 1, 1])), part(&[1, 1, 1, 1]));
    }

    #[test]
    fn pi_inverse_examples() {
        assert_eq!(pi_inverse(&part(&[8, 6, 6, 5, 2])), comp(&[3, 1, 2, 4, 2]));
        assert_eq!(pi_inverse(&part(&[4, 3, 3, 1])), comp(&[2, 1, 3, 1]));
        assert_eq!(pi_inverse(&part(&[1, 1, 1, 1])), comp(&[1, 1, 1, 1]));
    }

    #[test]
    fn pi_preserves_size_as_perimeter() {
        let c = comp(&[3, 1, 2, 4, 2]);
        let p = pi(&c);
        assert_eq!(p.perimeter(), c.size());
        assert_eq!(p.len(), c.len());
    }

    #[test]
    fn perimeter_partition_set_at_4() {
        let got: HashSet<Partition> =
            enumerate_perimeter_partitions(4).unwrap().collect();
        let want: HashSet<Partition> = [
            vec![4],
            vec![3, 1],
            vec![3, 3],
            vec![3, 2],
            vec![2, 1, 1],
            vec![2, 2, 1],
            vec![2, 2, 2],
            vec![1, 1, 1, 1],
        ]
        .into_iter()
        .map(|v| Partition::new(v).unwrap())
        .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn perimeter_partition_counts() {
        assert_eq!(enumerate_perimeter_partitions(1).unwrap().count(), 1);
        assert_eq!(enumerate_perimeter_partitions(7).unwrap().count(), 64);
    }
}
