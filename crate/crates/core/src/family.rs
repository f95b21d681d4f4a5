//! Membership predicates, counters, and enumerators for every named family
//! of compositions and partitions handled by the crate.
//!
//! All counting is exhaustive: a family fixes a substrate size (usually `n`,
//! sometimes `n + m - 1` or `n + 1`), the substrate is walked in canonical
//! rank order, and the family predicate filters it. Partition families are
//! walked through their composition preimages under the perimeter map.

use std::fmt;
use std::str::FromStr;

use crate::composition::{composition_count, enumerate_compositions, Composition, Compositions};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::perimeter::{pi, pi_into};

/// Default bound on exhaustive enumeration; `2^(n-1)` growth makes larger
/// substrates a deliberate choice, not a default.
pub const DEFAULT_CAP: u64 = 30;

/// A non-empty set of residues drawn from `{1, ..., m-1}` for a modulus
/// `m >= 2`. Parametrizes the residue-class families and the digit-rotation
/// bijection.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ResidueSet {
    modulus: u64,
    residues: Vec<u64>, // sorted, deduplicated, each in 1..modulus
}

impl ResidueSet {
    pub fn new(modulus: u64, residues: impl Into<Vec<u64>>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidModulus {
                min: 2,
                got: modulus,
            });
        }
        let mut residues = residues.into();
        residues.sort_unstable();
        residues.dedup();
        if residues.is_empty() || residues.iter().any(|&r| r == 0 || r >= modulus) {
            return Err(Error::InvalidResidueSet {
                modulus,
                max: modulus - 1,
            });
        }
        Ok(ResidueSet { modulus, residues })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn contains(&self, r: u64) -> bool {
        self.residues.binary_search(&r).is_ok()
    }

    /// Every non-empty subset of `{1, ..., m-1}`, in ascending bitmask order
    /// (bit `r-1` stands for residue `r`).
    pub fn all_subsets(modulus: u64) -> Vec<ResidueSet> {
        let full = (1u64 << (modulus - 1)) - 1;
        (1..=full)
            .map(|mask| {
                let residues: Vec<u64> =
                    (1..modulus).filter(|r| mask >> (r - 1) & 1 == 1).collect();
                ResidueSet { modulus, residues }
            })
            .collect()
    }

    /// The singleton subsets `{1}, ..., {m-1}`.
    pub fn singletons(modulus: u64) -> Vec<ResidueSet> {
        (1..modulus)
            .map(|r| ResidueSet {
                modulus,
                residues: vec![r],
            })
            .collect()
    }
}

impl fmt::Display for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.residues.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Slice-level family predicates. Shared between [`FamilySpec`] membership
/// and the fused scans in the verification harness, so each definition has a
/// single home.
pub(crate) mod pred {
    use super::ResidueSet;

    /// No part divisible by `m`.
    pub fn parts_not_div(parts: &[u64], m: u64) -> bool {
        parts.iter().all(|&p| p % m != 0)
    }

    /// No value repeated `m` or more times (input weakly decreasing).
    pub fn repeats_lt(parts: &[u64], m: u64) -> bool {
        let mut run = 1u64;
        for w in parts.windows(2) {
            if w[0] == w[1] {
                run += 1;
                if run >= m {
                    return false;
                }
            } else {
                run = 1;
            }
        }
        true
    }

    /// Every suffix level `1 + sum_{j>=i} (c_j - 1)` avoids `0 (mod m)`;
    /// equivalently the perimeter image has no part divisible by `m`.
    pub fn star(c: &[u64], m: u64) -> bool {
        let mut level = 1u64;
        for &part in c.iter().rev() {
            level += part - 1;
            if level % m == 0 {
                return false;
            }
        }
        true
    }

    /// All parts at most `m` and the final part strictly below `m`.
    pub fn capped(c: &[u64], m: u64) -> bool {
        c.iter().all(|&p| p <= m) && c[c.len() - 1] < m
    }

    /// All gaps below `m` and the smallest part below `m` (input weakly
    /// decreasing).
    pub fn gaps_lt(parts: &[u64], m: u64) -> bool {
        parts.windows(2).all(|w| w[0] - w[1] < m) && parts[parts.len() - 1] < m
    }

    /// Every part congruent to some residue in the set.
    pub fn residue_class(c: &[u64], set: &ResidueSet) -> bool {
        let m = set.modulus();
        c.iter().all(|&p| set.contains(p % m))
    }

    /// Parts drawn from the residues plus `m` itself, final part a residue.
    pub fn alphabet(c: &[u64], set: &ResidueSet) -> bool {
        let m = set.modulus();
        c.iter().all(|&p| p == m || set.contains(p))
            && set.contains(c[c.len() - 1])
    }

    /// Every part congruent to 1 mod `m`.
    pub fn all_parts_one_mod(c: &[u64], m: u64) -> bool {
        c.iter().all(|&p| p % m == 1 % m)
    }

    /// Every part at least `m`.
    pub fn all_parts_ge(c: &[u64], m: u64) -> bool {
        c.iter().all(|&p| p >= m)
    }

    /// Exactly `k` parts not congruent to 1 mod `m`, each exceeding `m`.
    pub fn huang_a(c: &[u64], m: u64, k: u64) -> bool {
        let one = 1 % m;
        let mut seen = 0u64;
        for &p in c {
            if p % m != one {
                if p <= m {
                    return false;
                }
                seen += 1;
                if seen > k {
                    return false;
                }
            }
        }
        seen == k
    }

    /// Exactly `k` parts below `m`, each preceded by a part at least `m` and
    /// followed by either the final part or a part above `m`.
    pub fn huang_b(c: &[u64], m: u64, k: u64) -> bool {
        let len = c.len();
        let mut seen = 0u64;
        for (i, &p) in c.iter().enumerate() {
            if p < m {
                seen += 1;
                if seen > k {
                    return false;
                }
                if i == 0 || c[i - 1] < m {
                    return false;
                }
                if i + 1 >= len {
                    return false; // a small part needs a successor
                }
                if i + 1 != len - 1 && c[i + 1] <= m {
                    return false;
                }
            }
        }
        seen == k
    }

    /// First refined family: positions where the congruence class mod `m+1`
    /// changes (including the bottom unless it sits in class 1) number
    /// exactly `k`, each interior change crossing a gap above `m` and a
    /// bottom change requiring the final part to exceed `m+1`.
    pub fn ft1(parts: &[u64], m: u64, k: u64) -> bool {
        let modulus = m + 1;
        let len = parts.len();
        let mut seen = 0u64;
        for i in 0..len - 1 {
            if parts[i] % modulus != parts[i + 1] % modulus {
                if parts[i] - parts[i + 1] <= m {
                    return false;
                }
                seen += 1;
                if seen > k {
                    return false;
                }
            }
        }
        if parts[len - 1] % modulus != 1 % modulus {
            if parts[len - 1] <= modulus {
                return false;
            }
            seen += 1;
        }
        seen == k
    }

    /// Second refined family: gaps at least `m` with exactly `k` exceptions,
    /// each preceded by a gap at least `m` and followed by a gap above `m`
    /// unless the exception closes the partition.
    pub fn ft2(parts: &[u64], m: u64, k: u64) -> bool {
        let len = parts.len();
        let gap = |i: usize| parts[i] - parts[i + 1];
        let mut seen = 0u64;
        for i in 0..len.saturating_sub(1) {
            if gap(i) < m {
                seen += 1;
                if seen > k {
                    return false;
                }
                if i == 0 || gap(i - 1) < m {
                    return false;
                }
                // i indexes the gap between parts i+1 and i+2 (1-based);
                // the exception may close the partition, otherwise the next
                // gap must exceed m.
                if i + 2 < len && gap(i + 1) <= m {
                    return false;
                }
            }
        }
        seen == k
    }

    /// Exactly `k` parts, all at most `m`, final part below `m`.
    pub fn prop_lhs(c: &[u64], m: u64, k: u64) -> bool {
        c.len() as u64 == k && capped(c, m)
    }

    /// Exactly `n - k + 1` parts and no run of `m - 1` or more consecutive
    /// 1's among the non-final parts (a run touching the final part is
    /// measured on its prefix only).
    pub fn prop_rhs(c: &[u64], m: u64, k: u64, n: u64) -> bool {
        if c.len() as u64 + k != n + 1 {
            return false;
        }
        let mut run = 0u64;
        for &p in &c[..c.len() - 1] {
            if p == 1 {
                run += 1;
                if run >= m - 1 {
                    return false;
                }
            } else {
                run = 0;
            }
        }
        true
    }

    pub fn all_parts_odd(c: &[u64]) -> bool {
        c.iter().all(|&p| p % 2 == 1)
    }

    /// Parts 1 and 2 only, final part 1.
    pub fn one_two_last_one(c: &[u64]) -> bool {
        c.iter().all(|&p| p == 1 || p == 2) && c[c.len() - 1] == 1
    }

    pub fn all_parts_gt1(c: &[u64]) -> bool {
        c.iter().all(|&p| p > 1)
    }
}

/// A named family of compositions or partitions with its parameters.
///
/// The canonical text form is `kind:n=..,m=..[,k=..][,R=r1,r2,...]`, e.g.
/// `h:n=12,m=3`, `ft1:n=7,m=1,k=1`, `lemma-residue:n=10,m=4,R=1,3`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FamilySpec {
    /// `h`: partitions with perimeter `n`, no part divisible by `m`.
    PartNotDivM { n: u64, m: u64 },
    /// `g`: partitions with perimeter `n`, no part repeated `m` or more times.
    PartRepeatLtM { n: u64, m: u64 },
    /// `star`: compositions of `n` whose suffix levels all avoid `0 (mod m)`.
    CompStar { n: u64, m: u64 },
    /// `comp-ndiv`: compositions of `n`, no part divisible by `m`.
    CompNotDivM { n: u64, m: u64 },
    /// `comp-capped`: compositions of `n`, parts at most `m`, last below `m`.
    CompCapped { n: u64, m: u64 },
    /// `part-gap`: partitions with perimeter `n`, gaps and smallest part below `m`.
    PartGapLtM { n: u64, m: u64 },
    /// `lemma-residue`: compositions of `n` with parts congruent to the set.
    CompResidue { n: u64, set: ResidueSet },
    /// `lemma-alphabet`: compositions of `n` over the residues plus `m`, last a residue.
    CompAlphabet { n: u64, set: ResidueSet },
    /// `munagi-a`: compositions of `n` with parts congruent to 1 mod `m`.
    MunagiA { n: u64, m: u64 },
    /// `munagi-b`: compositions of `n + m - 1` with parts at least `m`.
    MunagiB { n: u64, m: u64 },
    /// `huang-a`: compositions of `n`, exactly `k` parts not 1 mod `m`, each above `m`.
    HuangA { n: u64, m: u64, k: u64 },
    /// `huang-b`: compositions of `n + m - 1`, exactly `k` guarded parts below `m`.
    HuangB { n: u64, m: u64, k: u64 },
    /// `ft1`: partitions with perimeter `n`, first refined family at `(m, k)`.
    Ft1 { n: u64, m: u64, k: u64 },
    /// `ft2`: partitions with perimeter `n`, second refined family at `(m, k)`.
    Ft2 { n: u64, m: u64, k: u64 },
    /// `prop-lhs`: compositions of `n` with `k` parts, all at most `m`, last below `m`.
    PropLhs { n: u64, m: u64, k: u64 },
    /// `prop-rhs`: compositions of `n` with `n-k+1` parts, 1-runs bounded by `m-2`.
    PropRhs { n: u64, m: u64, k: u64 },
    /// `fib-odd`: compositions of `n` with odd parts.
    FibOdd { n: u64 },
    /// `fib-12`: compositions of `n` with parts 1 and 2, last part 1.
    Fib12 { n: u64 },
    /// `fib-gt1`: compositions of `n + 1` with parts above 1.
    FibGt1 { n: u64 },
}

/// Either sort of family member.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FamilyObject {
    Partition(Partition),
    Composition(Composition),
}

impl FamilyObject {
    pub fn sort_name(&self) -> &'static str {
        match self {
            FamilyObject::Partition(_) => "partition",
            FamilyObject::Composition(_) => "composition",
        }
    }

    /// The canonical index keying this object: its own rank for a
    /// composition, the rank of the perimeter preimage for a partition.
    pub fn canonical_index(&self) -> crate::composition::CompositionIndex {
        match self {
            FamilyObject::Composition(c) => c.rank(),
            FamilyObject::Partition(p) => crate::perimeter::pi_inverse(p).rank(),
        }
    }
}

impl fmt::Display for FamilyObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyObject::Partition(p) => write!(f, "{p}"),
            FamilyObject::Composition(c) => write!(f, "{c}"),
        }
    }
}

impl FamilySpec {
    /// The family's `n` parameter (perimeter or nominal size).
    pub fn n(&self) -> u64 {
        use FamilySpec::*;
        match *self {
            PartNotDivM { n, .. }
            | PartRepeatLtM { n, .. }
            | CompStar { n, .. }
            | CompNotDivM { n, .. }
            | CompCapped { n, .. }
            | PartGapLtM { n, .. }
            | CompResidue { n, .. }
            | CompAlphabet { n, .. }
            | MunagiA { n, .. }
            | MunagiB { n, .. }
            | HuangA { n, .. }
            | HuangB { n, .. }
            | Ft1 { n, .. }
            | Ft2 { n, .. }
            | PropLhs { n, .. }
            | PropRhs { n, .. }
            | FibOdd { n }
            | Fib12 { n }
            | FibGt1 { n } => n,
        }
    }

    /// Size of the substrate actually enumerated: `n` for most families,
    /// `n + m - 1` for the shifted composition families, `n + 1` for the
    /// large-part Fibonacci family.
    pub fn substrate_size(&self) -> u64 {
        use FamilySpec::*;
        match *self {
            MunagiB { n, m } | HuangB { n, m, .. } => n + m - 1,
            FibGt1 { n } => n + 1,
            _ => self.n(),
        }
    }

    /// Whether members are partitions (otherwise compositions).
    pub fn is_partition_family(&self) -> bool {
        use FamilySpec::*;
        matches!(
            self,
            PartNotDivM { .. }
                | PartRepeatLtM { .. }
                | PartGapLtM { .. }
                | Ft1 { .. }
                | Ft2 { .. }
        )
    }

    /// Kind tag used in the canonical text form.
    pub fn kind(&self) -> &'static str {
        use FamilySpec::*;
        match self {
            PartNotDivM { .. } => "h",
            PartRepeatLtM { .. } => "g",
            CompStar { .. } => "star",
            CompNotDivM { .. } => "comp-ndiv",
            CompCapped { .. } => "comp-capped",
            PartGapLtM { .. } => "part-gap",
            CompResidue { .. } => "lemma-residue",
            CompAlphabet { .. } => "lemma-alphabet",
            MunagiA { .. } => "munagi-a",
            MunagiB { .. } => "munagi-b",
            HuangA { .. } => "huang-a",
            HuangB { .. } => "huang-b",
            Ft1 { .. } => "ft1",
            Ft2 { .. } => "ft2",
            PropLhs { .. } => "prop-lhs",
            PropRhs { .. } => "prop-rhs",
            FibOdd { .. } => "fib-odd",
            Fib12 { .. } => "fib-12",
            FibGt1 { .. } => "fib-gt1",
        }
    }

    /// Checks the parameter domain of the family.
    pub fn validate(&self) -> Result<()> {
        use FamilySpec::*;
        let n = self.n();
        if n == 0 {
            return Err(Error::SizeOutOfRange {
                n,
                max: crate::composition::MAX_SIZE,
            });
        }
        let need_modulus = |m: u64, min: u64| {
            if m < min {
                Err(Error::InvalidModulus { min, got: m })
            } else {
                Ok(())
            }
        };
        match *self {
            PartNotDivM { m, .. }
            | PartRepeatLtM { m, .. }
            | CompStar { m, .. }
            | CompNotDivM { m, .. }
            | CompCapped { m, .. }
            | PartGapLtM { m, .. } => need_modulus(m, 2),
            CompResidue { .. } | CompAlphabet { .. } => Ok(()), // ResidueSet validated at construction
            MunagiA { m, .. } | MunagiB { m, .. } | HuangA { m, .. } | HuangB { m, .. } => {
                need_modulus(m, 1)
            }
            Ft1 { m, .. } | Ft2 { m, .. } => need_modulus(m, 1),
            PropLhs { m, k, .. } | PropRhs { m, k, .. } => {
                need_modulus(m, 2)?;
                if k == 0 {
                    return Err(Error::InvalidParameters(
                        "k must be at least 1".into(),
                    ));
                }
                Ok(())
            }
            FibOdd { .. } | Fib12 { .. } | FibGt1 { .. } => Ok(()),
        }
    }

    pub(crate) fn matches_composition_parts(&self, parts: &[u64]) -> bool {
        use FamilySpec::*;
        match self {
            CompStar { m, .. } => pred::star(parts, *m),
            CompNotDivM { m, .. } => pred::parts_not_div(parts, *m),
            CompCapped { m, .. } => pred::capped(parts, *m),
            CompResidue { set, .. } => pred::residue_class(parts, set),
            CompAlphabet { set, .. } => pred::alphabet(parts, set),
            MunagiA { m, .. } => pred::all_parts_one_mod(parts, *m),
            MunagiB { m, .. } => pred::all_parts_ge(parts, *m),
            HuangA { m, k, .. } => pred::huang_a(parts, *m, *k),
            HuangB { m, k, .. } => pred::huang_b(parts, *m, *k),
            PropLhs { m, k, .. } => pred::prop_lhs(parts, *m, *k),
            PropRhs { n, m, k } => pred::prop_rhs(parts, *m, *k, *n),
            FibOdd { .. } => pred::all_parts_odd(parts),
            Fib12 { .. } => pred::one_two_last_one(parts),
            FibGt1 { .. } => pred::all_parts_gt1(parts),
            _ => unreachable!("partition family asked for composition parts"),
        }
    }

    pub(crate) fn matches_partition_parts(&self, parts: &[u64]) -> bool {
        use FamilySpec::*;
        match self {
            PartNotDivM { m, .. } => pred::parts_not_div(parts, *m),
            PartRepeatLtM { m, .. } => pred::repeats_lt(parts, *m),
            PartGapLtM { m, .. } => pred::gaps_lt(parts, *m),
            Ft1 { m, k, .. } => pred::ft1(parts, *m, *k),
            Ft2 { m, k, .. } => pred::ft2(parts, *m, *k),
            _ => unreachable!("composition family asked for partition parts"),
        }
    }

    /// True when the object satisfies the family's defining predicate.
    ///
    /// The object's sort must match the family's: handing a composition to a
    /// partition family (or vice versa) is an error, as is an object whose
    /// size/perimeter cannot place it in the substrate.
    pub fn member(&self, object: &FamilyObject) -> Result<bool> {
        self.validate()?;
        let mismatch = |expected| {
            Err(Error::SortMismatch {
                family: self.to_string(),
                expected,
                got: object.sort_name(),
            })
        };
        match (self.is_partition_family(), object) {
            (true, FamilyObject::Partition(p)) => {
                Ok(p.perimeter() == self.substrate_size()
                    && self.matches_partition_parts(p.parts()))
            }
            (false, FamilyObject::Composition(c)) => {
                Ok(c.size() == self.substrate_size()
                    && self.matches_composition_parts(c.parts()))
            }
            (true, FamilyObject::Composition(_)) => mismatch("partition"),
            (false, FamilyObject::Partition(_)) => mismatch("composition"),
        }
    }

    /// Exact cardinality by exhaustive filtered enumeration.
    pub fn count(&self, cap: u64) -> Result<u64> {
        self.validate()?;
        let substrate = self.check_cap(cap)?;
        let mut buf = Vec::new();
        let mut count = 0u64;
        for index in 0..composition_count(substrate) {
            let c = crate::composition::CompositionIndex {
                n: substrate,
                index,
            }
            .unrank();
            let hit = if self.is_partition_family() {
                pi_into(c.parts(), &mut buf);
                self.matches_partition_parts(&buf)
            } else {
                self.matches_composition_parts(c.parts())
            };
            if hit {
                count += 1;
            }
        }
        Ok(count)
    }

    /// Members in canonical rank order.
    pub fn enumerate(&self, cap: u64) -> Result<FamilyIter> {
        self.validate()?;
        let substrate = self.check_cap(cap)?;
        Ok(FamilyIter {
            spec: self.clone(),
            inner: enumerate_compositions(substrate)?,
        })
    }

    fn check_cap(&self, cap: u64) -> Result<u64> {
        let substrate = self.substrate_size();
        let max = cap.min(crate::composition::MAX_SIZE);
        if substrate > max {
            return Err(Error::CapExceeded { n: substrate, cap: max });
        }
        Ok(substrate)
    }
}

/// Iterator over a family's members in canonical rank order.
#[derive(Clone, Debug)]
pub struct FamilyIter {
    spec: FamilySpec,
    inner: Compositions,
}

impl Iterator for FamilyIter {
    type Item = FamilyObject;

    fn next(&mut self) -> Option<FamilyObject> {
        let partition_family = self.spec.is_partition_family();
        for c in self.inner.by_ref() {
            if partition_family {
                let p = pi(&c);
                if self.spec.matches_partition_parts(p.parts()) {
                    return Some(FamilyObject::Partition(p));
                }
            } else if self.spec.matches_composition_parts(c.parts()) {
                return Some(FamilyObject::Composition(c));
            }
        }
        None
    }
}

impl fmt::Display for FamilySpec {
    /// Canonical text form, parseable by [`FromStr`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FamilySpec::*;
        write!(f, "{}:n={}", self.kind(), self.n())?;
        match self {
            PartNotDivM { m, .. }
            | PartRepeatLtM { m, .. }
            | CompStar { m, .. }
            | CompNotDivM { m, .. }
            | CompCapped { m, .. }
            | PartGapLtM { m, .. }
            | MunagiA { m, .. }
            | MunagiB { m, .. } => write!(f, ",m={m}"),
            CompResidue { set, .. } | CompAlphabet { set, .. } => {
                write!(f, ",m={},R={}", set.modulus(), set)
            }
            HuangA { m, k, .. }
            | HuangB { m, k, .. }
            | Ft1 { m, k, .. }
            | Ft2 { m, k, .. }
            | PropLhs { m, k, .. }
            | PropRhs { m, k, .. } => write!(f, ",m={m},k={k}"),
            FibOdd { .. } | Fib12 { .. } | FibGt1 { .. } => Ok(()),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::parse(s, "expected `kind:params`"))?;

        // Parameters are `key=value` pairs separated by commas; a bare token
        // after `R=...` extends the residue list ("R=1,3" parses as one set).
        let mut n = None;
        let mut m = None;
        let mut k = None;
        let mut residues: Option<Vec<u64>> = None;
        let mut last_was_r = false;
        for token in rest.split(',') {
            if let Some((key, value)) = token.split_once('=') {
                last_was_r = false;
                let int = |v: &str| -> Result<u64> {
                    v.parse()
                        .map_err(|_| Error::parse(s, format!("`{v}` is not an integer")))
                };
                match key {
                    "n" => n = Some(int(value)?),
                    "m" => m = Some(int(value)?),
                    "k" => k = Some(int(value)?),
                    "R" => {
                        residues = Some(vec![int(value)?]);
                        last_was_r = true;
                    }
                    other => {
                        return Err(Error::parse(s, format!("unknown parameter `{other}`")))
                    }
                }
            } else if last_was_r {
                let v: u64 = token
                    .parse()
                    .map_err(|_| Error::parse(s, format!("`{token}` is not an integer")))?;
                residues.as_mut().unwrap().push(v);
            } else {
                return Err(Error::parse(s, format!("stray token `{token}`")));
            }
        }

        let n = n.ok_or_else(|| Error::parse(s, "missing parameter n"))?;
        let need_m = || m.ok_or_else(|| Error::parse(s, "missing parameter m"));
        let need_k = || k.ok_or_else(|| Error::parse(s, "missing parameter k"));
        let no_k = |spec: FamilySpec| -> Result<FamilySpec> {
            if k.is_some() {
                return Err(Error::parse(s, format!("{kind} takes no k parameter")));
            }
            Ok(spec)
        };
        let residue_set = |m: u64| -> Result<ResidueSet> {
            let rs = residues
                .clone()
                .ok_or_else(|| Error::parse(s, "missing parameter R"))?;
            ResidueSet::new(m, rs)
        };
        if residues.is_some() && !matches!(kind, "lemma-residue" | "lemma-alphabet") {
            return Err(Error::parse(s, format!("{kind} takes no R parameter")));
        }

        use FamilySpec::*;
        let spec = match kind {
            "h" => no_k(PartNotDivM { n, m: need_m()? })?,
            "g" => no_k(PartRepeatLtM { n, m: need_m()? })?,
            "star" => no_k(CompStar { n, m: need_m()? })?,
            "comp-ndiv" => no_k(CompNotDivM { n, m: need_m()? })?,
            "comp-capped" => no_k(CompCapped { n, m: need_m()? })?,
            "part-gap" => no_k(PartGapLtM { n, m: need_m()? })?,
            "lemma-residue" => no_k(CompResidue {
                n,
                set: residue_set(need_m()?)?,
            })?,
            "lemma-alphabet" => no_k(CompAlphabet {
                n,
                set: residue_set(need_m()?)?,
            })?,
            "munagi-a" => no_k(MunagiA { n, m: need_m()? })?,
            "munagi-b" => no_k(MunagiB { n, m: need_m()? })?,
            "huang-a" => HuangA { n, m: need_m()?, k: need_k()? },
            "huang-b" => HuangB { n, m: need_m()?, k: need_k()? },
            "ft1" => Ft1 { n, m: need_m()?, k: need_k()? },
            "ft2" => Ft2 { n, m: need_m()?, k: need_k()? },
            "prop-lhs" => PropLhs { n, m: need_m()?, k: need_k()? },
            "prop-rhs" => PropRhs { n, m: need_m()?, k: need_k()? },
            "fib-odd" => no_k(FibOdd { n })?,
            "fib-12" => no_k(Fib12 { n })?,
            "fib-gt1" => no_k(FibGt1 { n })?,
            other => return Err(Error::parse(s, format!("unknown family kind `{other}`"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(parts: &[u64]) -> FamilyObject {
        FamilyObject::Composition(Composition::new(parts.to_vec()).unwrap())
    }

    fn part(parts: &[u64]) -> FamilyObject {
        FamilyObject::Partition(Partition::new(parts.to_vec()).unwrap())
    }

    fn count(spec: &str) -> u64 {
        spec.parse::<FamilySpec>().unwrap().count(DEFAULT_CAP).unwrap()
    }

    fn members(spec: &str) -> Vec<String> {
        spec.parse::<FamilySpec>()
            .unwrap()
            .enumerate(DEFAULT_CAP)
            .unwrap()
            .map(|o| o.to_string())
            .collect()
    }

    #[test]
    fn member_examples() {
        let h3 = FamilySpec::PartNotDivM { n: 4, m: 3 };
        assert!(!h3.member(&part(&[3, 1])).unwrap());

        let star3 = FamilySpec::CompStar { n: 17, m: 3 };
        assert!(star3.member(&comp(&[6, 2, 4, 3, 2])).unwrap());

        let ft2 = FamilySpec::Ft2 { n: 7, m: 1, k: 1 };
        assert!(ft2.member(&part(&[5, 4, 4])).unwrap());

        let ft1 = FamilySpec::Ft1 { n: 7, m: 1, k: 1 };
        assert!(ft1.member(&part(&[6, 1])).unwrap());
    }

    #[test]
    fn member_rejects_sort_mismatch() {
        let h = FamilySpec::PartNotDivM { n: 4, m: 3 };
        assert!(matches!(
            h.member(&comp(&[4])),
            Err(Error::SortMismatch { .. })
        ));
        let star = FamilySpec::CompStar { n: 4, m: 3 };
        assert!(matches!(
            star.member(&part(&[4])),
            Err(Error::SortMismatch { .. })
        ));
    }

    #[test]
    fn member_requires_matching_size() {
        let h = FamilySpec::PartNotDivM { n: 4, m: 3 };
        // perimeter 5, not 4
        assert!(!h.member(&part(&[5])).unwrap());
    }

    #[test]
    fn count_examples() {
        assert_eq!(count("h:n=4,m=2"), 3);
        assert_eq!(count("g:n=4,m=2"), 3);
        assert_eq!(count("h:n=4,m=3"), 5);
        assert_eq!(count("g:n=4,m=3"), 6);
        assert_eq!(count("ft1:n=7,m=1,k=1"), 8);
        assert_eq!(count("ft2:n=7,m=1,k=1"), 8);
        assert_eq!(count("fib-odd:n=5"), 5);
    }

    #[test]
    fn frozen_counts_against_independent_oracle() {
        // Values computed by a recursive brute-force enumerator.
        assert_eq!(count("h:n=10,m=3"), 151);
        assert_eq!(count("g:n=10,m=3"), 230);
        assert_eq!(count("h:n=12,m=3"), 465);
        assert_eq!(count("g:n=12,m=3"), 778);
        assert_eq!(count("h:n=12,m=5"), 1034);
        assert_eq!(count("g:n=12,m=5"), 1732);
        assert_eq!(count("h:n=9,m=4"), 129);
        assert_eq!(count("g:n=9,m=4"), 193);
        assert_eq!(count("lemma-residue:n=10,m=4,R=1,3"), 55);
        assert_eq!(count("lemma-alphabet:n=10,m=4,R=1,3"), 55);
        assert_eq!(count("munagi-a:n=4,m=2"), 3);
        assert_eq!(count("munagi-b:n=4,m=2"), 3);
        assert_eq!(count("huang-a:n=7,m=2,k=1"), 8);
        assert_eq!(count("huang-b:n=7,m=2,k=1"), 8);
        assert_eq!(count("ft1:n=10,m=2,k=0"), 19);
        assert_eq!(count("ft1:n=10,m=2,k=1"), 24);
        assert_eq!(count("ft1:n=10,m=2,k=2"), 1);
        assert_eq!(count("ft1:n=10,m=2,k=3"), 0);
    }

    #[test]
    fn enumerate_examples() {
        let ft1: std::collections::HashSet<String> =
            members("ft1:n=7,m=1,k=1").into_iter().collect();
        let want: std::collections::HashSet<String> = [
            "6,1", "6,6", "6,3", "6,4", "4,1,1,1", "4,4,1,1", "4,4,4,1", "4,4,4,4",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        assert_eq!(ft1, want);

        let h: Vec<String> = members("h:n=4,m=3");
        assert_eq!(h, vec!["4", "2,2,2", "2,2,1", "2,1,1", "1,1,1,1"]);
    }

    #[test]
    fn enumerate_capped_in_rank_order() {
        assert_eq!(
            members("comp-capped:n=4,m=3"),
            vec!["2,2", "1,1,2", "3,1", "1,2,1", "2,1,1", "1,1,1,1"]
        );
    }

    #[test]
    fn ft2_figure_family() {
        let got: std::collections::BTreeSet<String> =
            members("ft2:n=7,m=1,k=1").into_iter().collect();
        let want: std::collections::BTreeSet<String> = [
            "4,3,3,1", "5,1,1", "4,3,1,1", "5,4,4", "4,3,2,2", "5,3,3", "4,2,1,1", "5,2,2",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn cap_is_enforced() {
        let spec: FamilySpec = "h:n=25,m=3".parse().unwrap();
        assert!(matches!(spec.count(20), Err(Error::CapExceeded { .. })));
        // substrate for the shifted family is n + m - 1
        let spec: FamilySpec = "munagi-b:n=20,m=3".parse().unwrap();
        assert!(matches!(spec.count(21), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn spec_text_round_trip() {
        for text in [
            "h:n=12,m=3",
            "ft1:n=7,m=1,k=1",
            "lemma-residue:n=10,m=4,R=1,3",
            "fib-odd:n=5",
            "prop-rhs:n=6,m=2,k=3",
        ] {
            let spec: FamilySpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
    }

    #[test]
    fn spec_parse_rejects_bad_input() {
        assert!("h:n=4".parse::<FamilySpec>().is_err()); // missing m
        assert!("h:n=4,m=1".parse::<FamilySpec>().is_err()); // modulus too small
        assert!("nope:n=4,m=2".parse::<FamilySpec>().is_err());
        assert!("h:n=4,m=2,k=1".parse::<FamilySpec>().is_err()); // stray k
        assert!("lemma-residue:n=4,m=4,R=5".parse::<FamilySpec>().is_err());
        assert!("lemma-residue:n=4,m=4".parse::<FamilySpec>().is_err()); // missing R
        assert!("h:n=4,m=2,x=1".parse::<FamilySpec>().is_err());
        assert!("prop-lhs:n=4,m=2,k=0".parse::<FamilySpec>().is_err());
    }

    #[test]
    fn residue_subsets_enumeration() {
        assert_eq!(ResidueSet::all_subsets(2).len(), 1);
        assert_eq!(ResidueSet::all_subsets(4).len(), 7);
        assert_eq!(ResidueSet::singletons(5).len(), 4);
        assert!(ResidueSet::new(4, vec![0]).is_err());
        assert!(ResidueSet::new(4, vec![4]).is_err());
        assert!(ResidueSet::new(4, vec![]).is_err());
        assert!(ResidueSet::new(1, vec![1]).is_err());
    }
}
