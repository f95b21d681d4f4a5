//! The constructive maps: digit rotation for residue classes, the
//! part-splitting injection `phi` with its trace and inverse-on-image, the
//! strict-inequality witness, the transport maps behind the refined
//! equinumerosity theorem, the Fibonacci chain maps, and a generic
//! domain-to-codomain checker.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::family::{pred, FamilyObject, FamilySpec, ResidueSet};
use crate::partition::Partition;
use crate::perimeter::{pi, pi_inverse};

/// Rewrites each part `q*m + r` (residue `r` in the set) as the digit run
/// `(m, ..., m, r)`, concatenating runs in order: the rows of the m-modular
/// diagram laid out as a single column. The result has parts in the residue
/// alphabet plus `m`, with the final part a residue, and the same size.
pub fn rotate_residues(c: &Composition, set: &ResidueSet) -> Result<Composition> {
    let m = set.modulus();
    let mut out = Vec::new();
    for (i, &part) in c.parts().iter().enumerate() {
        let r = part % m;
        if !set.contains(r) {
            return Err(Error::precondition(
                i + 1,
                format!("part {part} has residue {r} outside the set mod {m}"),
            ));
        }
        let q = (part - r) / m;
        out.extend(std::iter::repeat(m).take(q as usize));
        out.push(r);
    }
    Ok(Composition::from_parts_unchecked(out))
}

/// Inverse of [`rotate_residues`]: scanning downward, each non-`m` digit
/// closes a group made of the `m` digits accumulated above it.
pub fn unrotate_residues(c: &Composition, set: &ResidueSet) -> Result<Composition> {
    let m = set.modulus();
    let mut out = Vec::new();
    let mut acc = 0u64; // m-digits awaiting their closing residue
    for (i, &part) in c.parts().iter().enumerate() {
        if part == m {
            acc += m;
        } else if set.contains(part) {
            out.push(acc + part);
            acc = 0;
        } else {
            return Err(Error::precondition(
                i + 1,
                format!("part {part} is neither {m} nor a residue in the set"),
            ));
        }
    }
    if acc != 0 {
        return Err(Error::precondition(
            c.len(),
            format!("final part must be a residue, not {m}"),
        ));
    }
    Ok(Composition::from_parts_unchecked(out))
}

/// Which branch the splitting algorithm took at one step.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhiBranch {
    /// Part already avoids `0 (mod m)`; copied through.
    Preserve,
    /// Part divisible by `m`; split into two residue-safe pieces.
    Split,
}

/// One step of the splitting algorithm, processed from the last part upward.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PhiStep {
    /// 1-based index of the source part.
    pub source_index: usize,
    /// Running level after adding `c_i - 1`: part `i` of the perimeter image.
    pub level: u64,
    pub branch: PhiBranch,
    /// Level remainder mod `m` when splitting (never 0 on the domain).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub remainder: Option<u64>,
    /// Parts emitted for this step, in output order.
    pub emitted: Vec<u64>,
}

/// Full audit trail of one run of the splitting algorithm.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PhiTrace {
    pub modulus: u64,
    /// Steps in processing order (last source part first).
    pub steps: Vec<PhiStep>,
}

impl PhiTrace {
    /// Number of split branches taken.
    pub fn splits(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| s.branch == PhiBranch::Split)
            .count()
    }
}

/// The injection from compositions whose suffix levels avoid `0 (mod m)`
/// into compositions with no part divisible by `m`.
///
/// Walking from the last part upward with a running level `j`, parts not
/// divisible by `m` pass through; a part divisible by `m` splits into
/// `(c_i - (m - r), m - r)` where `r = j mod m`. Size is preserved and every
/// output part avoids `0 (mod m)`.
pub fn phi(c: &Composition, m: u64) -> Result<Composition> {
    Ok(phi_run(c, m)?.0)
}

/// [`phi`] plus the step-by-step trace.
pub fn phi_traced(c: &Composition, m: u64) -> Result<(Composition, PhiTrace)> {
    phi_run(c, m)
}

/// Allocation-light core of [`phi`] for hot scans: writes the image parts
/// into `out` and returns the number of splits, or the 1-based index whose
/// suffix level breaks the precondition.
pub(crate) fn phi_into(c: &[u64], m: u64, out: &mut Vec<u64>) -> std::result::Result<u64, usize> {
    out.clear();
    let mut splits = 0u64;
    let mut level = 1u64;
    for (i, &part) in c.iter().enumerate().rev() {
        level += part - 1;
        if level % m == 0 {
            return Err(i + 1);
        }
        if part % m != 0 {
            out.push(part);
        } else {
            let r = level % m;
            out.push(m - r);
            out.push(part - (m - r));
            splits += 1;
        }
    }
    out.reverse();
    Ok(splits)
}

fn phi_run(c: &Composition, m: u64) -> Result<(Composition, PhiTrace)> {
    if m < 2 {
        return Err(Error::InvalidModulus { min: 2, got: m });
    }
    let parts = c.parts();
    let mut out = Vec::with_capacity(parts.len() + 4);
    let mut steps = Vec::with_capacity(parts.len());
    let mut level = 1u64;
    for (i, &part) in parts.iter().enumerate().rev() {
        level += part - 1;
        if level % m == 0 {
            return Err(Error::precondition(
                i + 1,
                format!("suffix level {level} at part {} is divisible by {m}", i + 1),
            ));
        }
        if part % m != 0 {
            out.push(part);
            steps.push(PhiStep {
                source_index: i + 1,
                level,
                branch: PhiBranch::Preserve,
                remainder: None,
                emitted: vec![part],
            });
        } else {
            let r = level % m;
            // Emitted top-down as (c_i - (m - r), m - r); we build the output
            // reversed, so the lower piece goes first.
            out.push(m - r);
            out.push(part - (m - r));
            steps.push(PhiStep {
                source_index: i + 1,
                level,
                branch: PhiBranch::Split,
                remainder: Some(r),
                emitted: vec![part - (m - r), m - r],
            });
        }
    }
    out.reverse();
    Ok((
        Composition::from_parts_unchecked(out),
        PhiTrace { modulus: m, steps },
    ))
}

/// Reconstructs the unique preimage of `d` under [`phi`], if `d` is in the
/// image; `None` otherwise.
///
/// Runs the reverse reading (merge a pair whenever the running level hits
/// `0 (mod m)`, crediting the level by one for the undone split), then
/// validates the candidate by recomputing `phi`: the reverse reading alone
/// can fabricate a candidate from a non-image composition.
///
/// Parts of `d` divisible by `m` are a domain error rather than a `None`:
/// such a `d` is outside the codomain altogether.
pub fn phi_preimage(d: &Composition, m: u64) -> Result<Option<Composition>> {
    if m < 2 {
        return Err(Error::InvalidModulus { min: 2, got: m });
    }
    let parts = d.parts();
    if let Some(i) = parts.iter().position(|&p| p % m == 0) {
        return Err(Error::precondition(
            i + 1,
            format!("part {} is divisible by {m}, so it cannot lie in the image", parts[i]),
        ));
    }
    let mut candidate = Vec::with_capacity(parts.len());
    let mut level = 1u64;
    let mut i = parts.len();
    while i > 0 {
        i -= 1;
        level += parts[i] - 1;
        if level % m != 0 {
            candidate.push(parts[i]);
        } else {
            // The two pieces of a split sit adjacent; merge with the part
            // above. The skipped piece advances the level as usual, plus one
            // for the square the undone split consumed.
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            candidate.push(parts[i] + parts[i + 1]);
            level += parts[i];
        }
    }
    candidate.reverse();
    let candidate = Composition::from_parts_unchecked(candidate);
    match phi(&candidate, m) {
        Ok(image) if image == *d => Ok(Some(candidate)),
        _ => Ok(None),
    }
}

/// The composition `(m-1, 2, 1, ..., 1)` of size `n` (with `n - m - 1`
/// trailing 1's): a member of the non-divisible family that the injection
/// never reaches. Defined for `n > m > 2`.
pub fn strict_witness(n: u64, m: u64) -> Result<Composition> {
    if !(n > m && m > 2) {
        return Err(Error::InvalidParameters(format!(
            "witness requires n > m > 2, got n={n}, m={m}"
        )));
    }
    let mut parts = vec![m - 1, 2];
    parts.extend(std::iter::repeat(1).take((n - m - 1) as usize));
    Ok(Composition::from_parts_unchecked(parts))
}

/// Transport onto the first refined family: the perimeter map restricted to
/// compositions with exactly `k` parts off class 1 mod `m+1`, each above
/// `m+1`.
pub fn ft1_map(c: &Composition, m: u64, k: u64) -> Result<Partition> {
    let spec = FamilySpec::HuangA {
        n: c.size(),
        m: m + 1,
        k,
    };
    if !spec.matches_composition_parts(c.parts()) {
        return Err(Error::precondition(
            0,
            format!("input is not in {spec}"),
        ));
    }
    Ok(pi(c))
}

/// Transport onto the second refined family: trim `m` from the final part
/// (guaranteed to exceed `m`), then apply the perimeter map. The input is a
/// guarded-small-parts composition of size `n + m` for modulus `m + 1`.
pub fn ft2_map(c: &Composition, m: u64, k: u64) -> Result<Partition> {
    let size = c.size();
    if size <= m {
        return Err(Error::precondition(
            0,
            format!("size {size} leaves nothing once {m} is trimmed"),
        ));
    }
    let spec = FamilySpec::HuangB {
        n: size - m,
        m: m + 1,
        k,
    };
    if !spec.matches_composition_parts(c.parts()) {
        return Err(Error::precondition(0, format!("input is not in {spec}")));
    }
    let mut parts = c.parts().to_vec();
    let last = parts.last_mut().unwrap();
    if *last <= m {
        return Err(Error::precondition(
            c.len(),
            format!("final part {last} must exceed {m}"),
        ));
    }
    *last -= m;
    Ok(pi(&Composition::from_parts_unchecked(parts)))
}

/// Inverse of [`ft2_map`] on its image: read the composition back off the
/// partition and restore `m` to the final part.
pub fn ft2_unmap(p: &Partition, m: u64) -> Composition {
    let mut parts = pi_inverse(p).into_parts();
    *parts.last_mut().unwrap() += m;
    Composition::from_parts_unchecked(parts)
}

/// Fibonacci chain, odd parts to parts-in-{1,2}-ending-in-1: digit rotation
/// at modulus 2 with residue set {1}.
pub fn fib_chain_12_from_odd(c: &Composition) -> Result<Composition> {
    let set = ResidueSet::new(2, vec![1]).expect("static set");
    rotate_residues(c, &set)
}

/// Fibonacci chain, parts-in-{1,2}-ending-in-1 to parts-above-1: conjugate
/// through the perimeter world, then grow the final part by one. Sends a
/// composition of `n` to a composition of `n + 1` with every part above 1.
pub fn fib_chain_gt1_from_12(c: &Composition) -> Result<Composition> {
    if !pred::one_two_last_one(c.parts()) {
        return Err(Error::precondition(
            0,
            "input must have parts 1 and 2 with final part 1".to_string(),
        ));
    }
    let through = pi_inverse(&pi(c).conjugate());
    let mut parts = through.into_parts();
    *parts.last_mut().unwrap() += 1;
    Ok(Composition::from_parts_unchecked(parts))
}

/// Outcome of checking a map from one family into another, exhaustively.
#[derive(Clone, Debug, Serialize)]
pub struct MapReport {
    pub map: String,
    pub domain: String,
    pub codomain: String,
    pub domain_size: u64,
    pub image_size: u64,
    pub injective: bool,
    pub surjective_onto_target: bool,
    /// Codomain members never hit, in canonical rank order.
    pub missing: Vec<String>,
    /// Pairs of distinct domain members sharing an image.
    pub collisions: Vec<(String, String)>,
    /// Domain members whose image fell outside the codomain.
    pub escapes: Vec<(String, String)>,
    /// Domain members the map refused, with the reported reason.
    pub failures: Vec<(String, String)>,
}

impl MapReport {
    pub fn bijective(&self) -> bool {
        self.injective
            && self.surjective_onto_target
            && self.escapes.is_empty()
            && self.failures.is_empty()
    }
}

/// Applies `map` to every member of `domain`, recording collisions, images
/// escaping `codomain`, unhit codomain members, and precondition failures.
/// A failing member is reported, never a crash.
pub fn check_map<F>(
    name: &str,
    domain: &FamilySpec,
    codomain: &FamilySpec,
    cap: u64,
    map: F,
) -> Result<MapReport>
where
    F: Fn(&FamilyObject) -> Result<FamilyObject>,
{
    let mut domain_size = 0u64;
    // Image keyed by canonical rank for deterministic set arithmetic.
    let mut image: BTreeMap<(u64, u64), FamilyObject> = BTreeMap::new();
    let mut collisions = Vec::new();
    let mut escapes = Vec::new();
    let mut failures = Vec::new();

    for member in domain.enumerate(cap)? {
        domain_size += 1;
        match map(&member) {
            Ok(out) => {
                if !codomain.member(&out)? {
                    escapes.push((member.to_string(), out.to_string()));
                }
                let key = out.canonical_index();
                if let Some(first) = image.get(&(key.n, key.index)) {
                    collisions.push((first.to_string(), member.to_string()));
                } else {
                    image.insert((key.n, key.index), member);
                }
            }
            Err(e) => failures.push((member.to_string(), e.to_string())),
        }
    }

    let mut missing = Vec::new();
    for target in codomain.enumerate(cap)? {
        let key = target.canonical_index();
        if !image.contains_key(&(key.n, key.index)) {
            missing.push(target.to_string());
        }
    }

    Ok(MapReport {
        map: name.to_string(),
        domain: domain.to_string(),
        codomain: codomain.to_string(),
        domain_size,
        image_size: image.len() as u64,
        injective: collisions.is_empty(),
        surjective_onto_target: missing.is_empty(),
        missing,
        collisions,
        escapes,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::DEFAULT_CAP;

    fn comp(parts: &[u64]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn rotate_figure_example() {
        let set = ResidueSet::new(4, vec![1, 3]).unwrap();
        let c = comp(&[7, 9, 1, 7, 3]);
        let rotated = rotate_residues(&c, &set).unwrap();
        assert_eq!(rotated, comp(&[4, 3, 4, 4, 1, 1, 4, 3, 3]));
        assert_eq!(unrotate_residues(&rotated, &set).unwrap(), c);
    }

    #[test]
    fn rotate_small_cases() {
        let set = ResidueSet::new(2, vec![1]).unwrap();
        assert_eq!(rotate_residues(&comp(&[3, 1]), &set).unwrap(), comp(&[2, 1, 1]));
        assert_eq!(unrotate_residues(&comp(&[2, 1, 1]), &set).unwrap(), comp(&[3, 1]));
        // parts already in the residue set are fixed
        let set = ResidueSet::new(4, vec![1, 3]).unwrap();
        let c = comp(&[1, 3, 3, 1]);
        assert_eq!(rotate_residues(&c, &set).unwrap(), c);
        assert_eq!(unrotate_residues(&c, &set).unwrap(), c);
    }

    #[test]
    fn rotate_rejects_foreign_residue() {
        let set = ResidueSet::new(4, vec![1, 3]).unwrap();
        assert!(matches!(
            rotate_residues(&comp(&[7, 2]), &set),
            Err(Error::Precondition { index: 2, .. })
        ));
        assert!(unrotate_residues(&comp(&[4, 3, 4]), &set).is_err()); // last part m
        assert!(unrotate_residues(&comp(&[2, 1]), &set).is_err()); // 2 outside alphabet
    }

    #[test]
    fn phi_figure_example() {
        let c = comp(&[6, 2, 4, 3, 2]);
        let (d, trace) = phi_traced(&c, 3).unwrap();
        assert_eq!(d, comp(&[4, 2, 2, 4, 1, 2, 2]));
        assert_eq!(trace.splits(), 2);
        assert_eq!(phi_preimage(&d, 3).unwrap(), Some(c));
    }

    #[test]
    fn phi_trace_levels_are_perimeter_parts() {
        let c = comp(&[6, 2, 4, 3, 2]);
        let (_, trace) = phi_traced(&c, 3).unwrap();
        let image = pi(&c);
        for step in &trace.steps {
            assert_eq!(step.level, image.parts()[step.source_index - 1]);
        }
    }

    #[test]
    fn phi_without_divisible_parts_is_identity() {
        let c = comp(&[2, 1, 1]);
        assert_eq!(phi(&c, 3).unwrap(), c);
    }

    #[test]
    fn phi_rejects_star_violation_with_index() {
        // levels from the bottom for (3,1): 1, 3 -> level 3 at part 1
        let c = comp(&[3, 1]);
        match phi(&c, 3) {
            Err(Error::Precondition { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected precondition error, got {other:?}"),
        }
    }

    #[test]
    fn phi_preimage_of_witness_is_absent() {
        assert_eq!(phi_preimage(&comp(&[2, 2]), 3).unwrap(), None);
        assert_eq!(phi_preimage(&comp(&[4]), 3).unwrap(), Some(comp(&[4])));
    }

    #[test]
    fn phi_preimage_round_trip_with_large_remainder() {
        // Two stacked splits at m=4 with remainder 2 below: undoing the lower
        // split must advance the level by the skipped piece, not just by one,
        // or the upper split goes undetected.
        let c = comp(&[4, 4, 3]);
        let d = phi(&c, 4).unwrap();
        assert_eq!(d, comp(&[1, 3, 2, 2, 3]));
        assert_eq!(phi_preimage(&d, 4).unwrap(), Some(c));
    }

    #[test]
    fn phi_preimage_rejects_divisible_part() {
        assert!(matches!(
            phi_preimage(&comp(&[3, 1]), 3),
            Err(Error::Precondition { index: 1, .. })
        ));
    }

    #[test]
    fn phi_into_agrees_with_traced_phi() {
        let mut buf = Vec::new();
        for n in 1..=12u64 {
            for c in crate::composition::enumerate_compositions(n).unwrap() {
                for m in 2..=6u64 {
                    match (phi_into(c.parts(), m, &mut buf), phi_traced(&c, m)) {
                        (Ok(splits), Ok((d, trace))) => {
                            assert_eq!(buf, d.parts());
                            assert_eq!(splits as usize, trace.splits());
                        }
                        (Err(i), Err(Error::Precondition { index, .. })) => {
                            assert_eq!(i, index);
                        }
                        (a, b) => panic!("disagreement on {c:?} mod {m}: {a:?} vs {b:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn witness_instances() {
        assert_eq!(strict_witness(4, 3).unwrap(), comp(&[2, 2]));
        assert_eq!(strict_witness(9, 4).unwrap(), comp(&[3, 2, 1, 1, 1, 1]));
        assert_eq!(strict_witness(6, 5).unwrap(), comp(&[4, 2]));
        assert!(strict_witness(3, 3).is_err());
        assert!(strict_witness(5, 2).is_err());
    }

    #[test]
    fn ft_maps_examples() {
        let p = ft1_map(&comp(&[1, 1, 1, 4]), 1, 1).unwrap();
        assert_eq!(p, Partition::new(vec![4, 4, 4, 4]).unwrap());
        let p = ft1_map(&comp(&[6, 1]), 1, 1).unwrap();
        assert_eq!(p, Partition::new(vec![6, 1]).unwrap());
        assert!(ft1_map(&comp(&[2, 5]), 1, 1).is_err()); // 2 is even but not > 2

        let p = ft2_map(&comp(&[5, 1, 2]), 1, 1).unwrap();
        assert_eq!(p, Partition::new(vec![5, 1, 1]).unwrap());
        let p = ft2_map(&comp(&[2, 2, 1, 3]), 1, 1).unwrap();
        assert_eq!(p, Partition::new(vec![4, 3, 2, 2]).unwrap());
        assert_eq!(ft2_unmap(&p, 1), comp(&[2, 2, 1, 3]));
    }

    #[test]
    fn fib_chain_examples() {
        assert_eq!(
            fib_chain_12_from_odd(&comp(&[3, 1, 1])).unwrap(),
            comp(&[2, 1, 1, 1])
        );
        assert_eq!(fib_chain_12_from_odd(&comp(&[5])).unwrap(), comp(&[2, 2, 1]));
        assert!(fib_chain_12_from_odd(&comp(&[2, 1])).is_err());

        assert_eq!(fib_chain_gt1_from_12(&comp(&[1])).unwrap(), comp(&[2]));
        assert_eq!(fib_chain_gt1_from_12(&comp(&[2, 1])).unwrap(), comp(&[2, 2]));
        assert_eq!(
            fib_chain_gt1_from_12(&comp(&[1, 1, 1, 1, 1])).unwrap(),
            comp(&[6])
        );
        assert!(fib_chain_gt1_from_12(&comp(&[1, 2])).is_err());
    }

    #[test]
    fn check_map_phi_finds_the_missing_witness() {
        let domain = FamilySpec::CompStar { n: 4, m: 3 };
        let codomain = FamilySpec::CompNotDivM { n: 4, m: 3 };
        let report = check_map("phi", &domain, &codomain, DEFAULT_CAP, |obj| {
            let FamilyObject::Composition(c) = obj else {
                unreachable!()
            };
            phi(c, 3).map(FamilyObject::Composition)
        })
        .unwrap();
        assert!(report.injective);
        assert!(!report.surjective_onto_target);
        assert_eq!(report.missing, vec!["2,2".to_string()]);
        assert!(report.escapes.is_empty());
        assert!(report.failures.is_empty());
        assert_eq!(report.domain_size, 5);
        assert_eq!(report.image_size, 5);
    }

    #[test]
    fn check_map_reports_precondition_failures() {
        // Run phi over the whole non-divisible family: members violating the
        // suffix-level condition must be reported, not crash.
        let domain = FamilySpec::CompNotDivM { n: 4, m: 3 };
        let codomain = FamilySpec::CompNotDivM { n: 4, m: 3 };
        let report = check_map("phi", &domain, &codomain, DEFAULT_CAP, |obj| {
            let FamilyObject::Composition(c) = obj else {
                unreachable!()
            };
            phi(c, 3).map(FamilyObject::Composition)
        })
        .unwrap();
        assert!(!report.failures.is_empty());
        assert!(!report.bijective());
    }

    #[test]
    fn check_map_rotation_is_bijective() {
        let set = ResidueSet::new(4, vec![1, 3]).unwrap();
        let domain = FamilySpec::CompResidue { n: 10, set: set.clone() };
        let codomain = FamilySpec::CompAlphabet { n: 10, set: set.clone() };
        let report = check_map("rotate", &domain, &codomain, DEFAULT_CAP, |obj| {
            let FamilyObject::Composition(c) = obj else {
                unreachable!()
            };
            rotate_residues(c, &set).map(FamilyObject::Composition)
        })
        .unwrap();
        assert!(report.bijective(), "{report:?}");
        assert_eq!(report.domain_size, 55);
    }
}
