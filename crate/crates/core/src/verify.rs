//! Theorem-level verification: each suite assembles family counts and map
//! checks into a pass/fail report for one statement, and `sweep` runs whole
//! parameter grids.
//!
//! Reports are deterministic: scans shard by contiguous index ranges and
//! merge in shard order, so the serialized output is byte-identical across
//! worker counts.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::composition::{composition_count, rank_parts, unrank_into, CompositionIndex};
use crate::error::{Error, Result};
use crate::family::{pred, FamilyObject, FamilySpec, ResidueSet, DEFAULT_CAP};
use crate::maps::{
    check_map, fib_chain_12_from_odd, fib_chain_gt1_from_12, ft1_map, ft2_map, phi_into,
    strict_witness,
};
use crate::perimeter::pi_into;

/// Execution knobs shared by every suite.
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Worker threads for sharded scans; 0 uses all cores.
    pub workers: usize,
    /// Exhaustion cap on substrate sizes.
    pub cap: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            workers: 0,
            cap: DEFAULT_CAP,
        }
    }
}

/// One asserted relation inside a report.
#[derive(Clone, Debug, Serialize)]
pub struct Relation {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Relation {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Relation {
            name: name.to_string(),
            passed,
            detail: Some(detail.into()),
        }
    }

    fn equal(name: &str, lhs: u64, rhs: u64) -> Self {
        Relation::new(name, lhs == rhs, format!("{lhs} vs {rhs}"))
    }
}

/// A family and its exhaustive count.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyCount {
    pub family: String,
    pub count: u64,
}

/// Concrete objects backing failed or strict assertions.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Witnesses {
    /// The guaranteed-unreached composition, when strictness applies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strictness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub missing_count: Option<u64>,
    /// First unreached codomain members, in canonical rank order.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub missing_sample: Vec<String>,
    /// Colliding domain pairs, if any map failed injectivity.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub collisions: Vec<[String; 2]>,
}

/// Both candidate directions of the headline count inequality. The
/// constructive injection certifies `g - h >= 0`; the reversed direction is
/// recorded so a contradiction with it is explicit in the output.
#[derive(Clone, Debug, Serialize)]
pub struct DirectionCheck {
    /// Count of the non-divisible-parts family.
    pub h: u64,
    /// Count of the bounded-repetition family.
    pub g: u64,
    pub h_minus_g_nonnegative: bool,
    pub g_minus_h_nonnegative: bool,
}

/// Pass/fail record for one suite at one parameter point.
#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub suite: String,
    pub n: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residues: Option<Vec<u64>>,
    pub counts: Vec<FamilyCount>,
    pub relations: Vec<Relation>,
    /// `g - h`, signed, for the main suite.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deficiency: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<DirectionCheck>,
    pub witnesses: Witnesses,
    pub passed: bool,
    /// Wall-clock time; diagnostics only, never serialized.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl TheoremReport {
    fn seal(mut self, started: Instant) -> Self {
        self.passed = self.relations.iter().all(|r| r.passed);
        self.elapsed = started.elapsed();
        self
    }

    fn blank(suite: &str, n: u64) -> Self {
        TheoremReport {
            suite: suite.to_string(),
            n,
            m: None,
            k: None,
            residues: None,
            counts: Vec::new(),
            relations: Vec::new(),
            deficiency: None,
            direction: None,
            witnesses: Witnesses::default(),
            passed: false,
            elapsed: Duration::ZERO,
        }
    }
}

fn run_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        job()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool")
            .install(job)
    }
}

fn check_cap(substrate: u64, cap: u64) -> Result<()> {
    let max = cap.min(crate::composition::MAX_SIZE);
    if substrate > max {
        return Err(Error::CapExceeded { n: substrate, cap: max });
    }
    Ok(())
}

/// Word-aligned index ranges covering `0..total`.
fn shard_ranges(total: u64) -> Vec<(u64, u64)> {
    const MIN_PER_SHARD: u64 = 4096;
    if total <= MIN_PER_SHARD {
        return vec![(0, total)];
    }
    let shards = (total / MIN_PER_SHARD).min(256).max(1);
    let chunk = (total / shards + 63) / 64 * 64 + 64;
    let mut out = Vec::new();
    let mut lo = 0;
    while lo < total {
        let hi = (lo + chunk).min(total);
        out.push((lo, hi));
        lo = hi;
    }
    out
}

/// Per-shard accumulator for the main-theorem scan.
#[derive(Default)]
struct MainShard {
    counts: [u64; 6],
    splits: u64,
    nonidentity: u64,
    /// (image rank, source rank) for each injection run.
    image_pairs: Vec<(u64, u64)>,
    /// Bitset words for codomain (family 3) membership over this range.
    family3_words: Vec<u64>,
    /// Injection outputs falling outside family 3: (source, image) ranks.
    escapes: Vec<(u64, u64)>,
    /// Family-2 members the injection refused (never expected).
    refusals: Vec<u64>,
}

fn scan_main_range(n: u64, m: u64, lo: u64, hi: u64) -> MainShard {
    let mut shard = MainShard {
        family3_words: vec![0u64; ((hi - lo) as usize + 63) / 64],
        ..MainShard::default()
    };
    let mut comp = Vec::new();
    let mut image = Vec::new();
    let mut out = Vec::new();
    for index in lo..hi {
        unrank_into(n, index, &mut comp);
        pi_into(&comp, &mut image);

        if pred::parts_not_div(&image, m) {
            shard.counts[0] += 1;
        }
        let in_family2 = pred::star(&comp, m);
        if in_family2 {
            shard.counts[1] += 1;
        }
        if pred::parts_not_div(&comp, m) {
            shard.counts[2] += 1;
            let at = (index - lo) as usize;
            shard.family3_words[at / 64] |= 1 << (at % 64);
        }
        if pred::capped(&comp, m) {
            shard.counts[3] += 1;
        }
        if pred::gaps_lt(&image, m) {
            shard.counts[4] += 1;
        }
        if pred::repeats_lt(&image, m) {
            shard.counts[5] += 1;
        }

        if in_family2 {
            match phi_into(&comp, m, &mut out) {
                Ok(splits) => {
                    shard.splits += splits;
                    if out != comp {
                        shard.nonidentity += 1;
                    }
                    let image_rank = rank_parts(&out);
                    if pred::parts_not_div(&out, m) {
                        shard.image_pairs.push((image_rank, index));
                    } else {
                        shard.escapes.push((index, image_rank));
                    }
                }
                Err(_) => shard.refusals.push(index),
            }
        }
    }
    shard
}

fn show(n: u64, index: u64) -> String {
    CompositionIndex { n, index }.unrank().to_string()
}

/// Verifies the headline count inequality at one `(n, m)` point by a fused
/// exhaustive pass over all compositions of `n`: six family counts, the
/// injection's image, injectivity, the strictness witness, and the
/// zero-deficiency dichotomy.
pub fn verify_main(n: u64, m: u64, opts: &VerifyOptions) -> Result<TheoremReport> {
    let started = Instant::now();
    if n == 0 {
        return Err(Error::SizeOutOfRange { n, max: crate::composition::MAX_SIZE });
    }
    if m < 2 {
        return Err(Error::InvalidModulus { min: 2, got: m });
    }
    check_cap(n, opts.cap)?;

    let total = composition_count(n);
    let shards: Vec<MainShard> = run_pool(opts.workers, || {
        shard_ranges(total)
            .into_par_iter()
            .map(|(lo, hi)| scan_main_range(n, m, lo, hi))
            .collect()
    });

    // Merge in shard order; every derived artifact below is independent of
    // the worker count.
    let mut counts = [0u64; 6];
    let mut splits = 0u64;
    let mut nonidentity = 0u64;
    let mut image_pairs = Vec::new();
    let mut family3_words = Vec::new();
    let mut escapes = Vec::new();
    let mut refusals = Vec::new();
    for shard in shards {
        for (total, part) in counts.iter_mut().zip(shard.counts) {
            *total += part;
        }
        splits += shard.splits;
        nonidentity += shard.nonidentity;
        image_pairs.extend(shard.image_pairs);
        family3_words.extend(shard.family3_words);
        escapes.extend(shard.escapes);
        refusals.extend(shard.refusals);
    }

    image_pairs.sort_unstable();
    let mut collisions = Vec::new();
    for w in image_pairs.windows(2) {
        if w[0].0 == w[1].0 {
            collisions.push([show(n, w[0].1), show(n, w[1].1)]);
        }
    }

    let mut image_words = vec![0u64; family3_words.len()];
    for &(image_rank, _) in &image_pairs {
        image_words[(image_rank / 64) as usize] |= 1 << (image_rank % 64);
    }

    let mut missing_count = 0u64;
    let mut missing_sample = Vec::new();
    for (w, (&f3, &img)) in family3_words.iter().zip(&image_words).enumerate() {
        let mut unhit = f3 & !img;
        missing_count += unhit.count_ones() as u64;
        while unhit != 0 && missing_sample.len() < 8 {
            let bit = unhit.trailing_zeros() as u64;
            missing_sample.push(show(n, w as u64 * 64 + bit));
            unhit &= unhit - 1;
        }
    }

    let strict = n > m && m > 2;
    let witness = if strict { Some(strict_witness(n, m)?) } else { None };
    let witness_unreached = witness.as_ref().map(|w| {
        let rank = w.rank().index;
        image_words[(rank / 64) as usize] >> (rank % 64) & 1 == 0
    });

    let [f1, f2, f3, f4, f5, f6] = counts;
    let deficiency = f6 as i64 - f1 as i64;

    let mut relations = vec![
        Relation::equal("family1-equals-family2", f1, f2),
        Relation::equal("family3-equals-family4", f3, f4),
        Relation::equal("family4-equals-family5", f4, f5),
        Relation::equal("family5-equals-family6", f5, f6),
        Relation::new(
            "injection-total-on-family2",
            refusals.is_empty(),
            format!("{} refusals", refusals.len()),
        ),
        Relation::new(
            "injection-into-family3",
            escapes.is_empty(),
            format!("{} escapes", escapes.len()),
        ),
        Relation::new(
            "injection-injective",
            collisions.is_empty(),
            format!("{} collisions", collisions.len()),
        ),
        Relation::new(
            "family3-at-least-family2",
            f3 >= f2,
            format!("{f3} >= {f2}"),
        ),
        Relation::new(
            "deficiency-nonnegative",
            deficiency >= 0,
            format!("g - h = {deficiency}"),
        ),
        Relation::new(
            "deficiency-matches-unreached",
            deficiency == missing_count as i64,
            format!("{deficiency} vs {missing_count}"),
        ),
        Relation::new(
            "deficiency-zero-iff-m2-or-n-le-m",
            (deficiency == 0) == (m == 2 || n <= m),
            format!("deficiency {deficiency} at n={n}, m={m}"),
        ),
        Relation::new(
            "witness-unreached-iff-strict",
            witness_unreached.unwrap_or(true) && (!strict || deficiency >= 1),
            match (&witness, witness_unreached) {
                (Some(w), Some(true)) => format!("{w} unreached"),
                (Some(w), Some(false)) => format!("{w} unexpectedly reached"),
                _ => "not strict".to_string(),
            },
        ),
    ];
    if m == 2 {
        relations.push(Relation::new(
            "identity-at-modulus-2",
            splits == 0 && nonidentity == 0,
            format!("{splits} splits, {nonidentity} non-identity images"),
        ));
    }

    let spec_names: [FamilySpec; 6] = [
        FamilySpec::PartNotDivM { n, m },
        FamilySpec::CompStar { n, m },
        FamilySpec::CompNotDivM { n, m },
        FamilySpec::CompCapped { n, m },
        FamilySpec::PartGapLtM { n, m },
        FamilySpec::PartRepeatLtM { n, m },
    ];
    let counts = spec_names
        .iter()
        .zip(counts)
        .map(|(spec, count)| FamilyCount {
            family: spec.to_string(),
            count,
        })
        .collect();

    let report = TheoremReport {
        suite: "main".to_string(),
        n,
        m: Some(m),
        k: None,
        residues: None,
        counts,
        relations,
        deficiency: Some(deficiency),
        direction: Some(DirectionCheck {
            h: f1,
            g: f6,
            h_minus_g_nonnegative: f1 >= f6,
            g_minus_h_nonnegative: f6 >= f1,
        }),
        witnesses: Witnesses {
            strictness: witness.map(|w| w.to_string()),
            missing_count: Some(missing_count),
            missing_sample,
            collisions,
        },
        passed: false,
        elapsed: Duration::ZERO,
    };
    Ok(report.seal(started))
}

fn push_map_outcome(
    report: &mut TheoremReport,
    relation: &str,
    map_report: crate::maps::MapReport,
) {
    report.relations.push(Relation::new(
        relation,
        map_report.bijective(),
        format!(
            "{} -> {}: {} of {} targets hit, {} collisions, {} escapes, {} failures",
            map_report.domain,
            map_report.codomain,
            map_report.image_size,
            map_report.image_size + map_report.missing.len() as u64,
            map_report.collisions.len(),
            map_report.escapes.len(),
            map_report.failures.len(),
        ),
    ));
    report
        .witnesses
        .missing_sample
        .extend(map_report.missing.into_iter().take(8));
    report.witnesses.collisions.extend(
        map_report
            .collisions
            .into_iter()
            .map(|(a, b)| [a, b]),
    );
}

/// Verifies the refined equinumerosity statement at `(n, m, k)`: equal
/// counts plus set-level bijectivity of both transport maps.
pub fn verify_fu_tang(n: u64, m: u64, k: u64, opts: &VerifyOptions) -> Result<TheoremReport> {
    let started = Instant::now();
    if m < 1 {
        return Err(Error::InvalidModulus { min: 1, got: m });
    }
    let family1 = FamilySpec::Ft1 { n, m, k };
    let family2 = FamilySpec::Ft2 { n, m, k };
    family1.validate()?;
    let count1 = family1.count(opts.cap)?;
    let count2 = family2.count(opts.cap)?;

    let mut report = TheoremReport::blank("fu-tang", n);
    report.m = Some(m);
    report.k = Some(k);
    report.counts = vec![
        FamilyCount { family: family1.to_string(), count: count1 },
        FamilyCount { family: family2.to_string(), count: count2 },
    ];
    report.relations.push(Relation::equal("family1-equals-family2", count1, count2));

    let domain1 = FamilySpec::HuangA { n, m: m + 1, k };
    let check1 = check_map("ft1-transport", &domain1, &family1, opts.cap, |obj| {
        let FamilyObject::Composition(c) = obj else {
            return Err(Error::SortMismatch {
                family: domain1.to_string(),
                expected: "composition",
                got: obj.sort_name(),
            });
        };
        ft1_map(c, m, k).map(FamilyObject::Partition)
    })?;
    push_map_outcome(&mut report, "transport1-bijective", check1);

    let domain2 = FamilySpec::HuangB { n, m: m + 1, k };
    let check2 = check_map("ft2-transport", &domain2, &family2, opts.cap, |obj| {
        let FamilyObject::Composition(c) = obj else {
            return Err(Error::SortMismatch {
                family: domain2.to_string(),
                expected: "composition",
                got: obj.sort_name(),
            });
        };
        ft2_map(c, m, k).map(FamilyObject::Partition)
    })?;
    push_map_outcome(&mut report, "transport2-bijective", check2);

    if k == 0 {
        // With no exceptions the families collapse to plain congruence and
        // gap conditions; check the refined predicates against those.
        check_cap(n, opts.cap)?;
        let mut comp = Vec::new();
        let mut image = Vec::new();
        let mut base1 = true;
        let mut base2 = true;
        for index in 0..composition_count(n) {
            unrank_into(n, index, &mut comp);
            pi_into(&comp, &mut image);
            if pred::ft1(&image, m, 0) != pred::all_parts_one_mod(&image, m + 1) {
                base1 = false;
            }
            if pred::ft2(&image, m, 0) != image.windows(2).all(|w| w[0] - w[1] >= m) {
                base2 = false;
            }
        }
        report.relations.push(Relation::new(
            "k0-family1-is-congruence-family",
            base1,
            "parts in class 1 exactly",
        ));
        report.relations.push(Relation::new(
            "k0-family2-is-gap-family",
            base2,
            "gaps at least m exactly",
        ));
        if m == 1 {
            let odd = FamilySpec::PartNotDivM { n, m: 2 }.count(opts.cap)?;
            let distinct = FamilySpec::PartRepeatLtM { n, m: 2 }.count(opts.cap)?;
            report
                .relations
                .push(Relation::equal("k0-m1-matches-odd-parts", count1, odd));
            report
                .relations
                .push(Relation::equal("k0-m1-matches-distinct-parts", count2, distinct));
        }
    }

    Ok(report.seal(started))
}

/// Verifies the residue-rotation bijection at `(n, m, R)`: equal counts and
/// exact round-trips on every member of both families.
pub fn verify_lemma(n: u64, set: &ResidueSet, opts: &VerifyOptions) -> Result<TheoremReport> {
    let started = Instant::now();
    let residue = FamilySpec::CompResidue { n, set: set.clone() };
    let alphabet = FamilySpec::CompAlphabet { n, set: set.clone() };
    let count_residue = residue.count(opts.cap)?;
    let count_alphabet = alphabet.count(opts.cap)?;

    let mut report = TheoremReport::blank("lemma", n);
    report.m = Some(set.modulus());
    report.residues = Some(set.residues().to_vec());
    report.counts = vec![
        FamilyCount { family: residue.to_string(), count: count_residue },
        FamilyCount { family: alphabet.to_string(), count: count_alphabet },
    ];
    report
        .relations
        .push(Relation::equal("counts-equal", count_residue, count_alphabet));

    let rotate_check = check_map("rotate", &residue, &alphabet, opts.cap, |obj| {
        let FamilyObject::Composition(c) = obj else { unreachable!() };
        crate::maps::rotate_residues(c, set).map(FamilyObject::Composition)
    })?;
    push_map_outcome(&mut report, "rotate-bijective", rotate_check);

    let unrotate_check = check_map("unrotate", &alphabet, &residue, opts.cap, |obj| {
        let FamilyObject::Composition(c) = obj else { unreachable!() };
        crate::maps::unrotate_residues(c, set).map(FamilyObject::Composition)
    })?;
    push_map_outcome(&mut report, "unrotate-bijective", unrotate_check);

    let mut round_trips = true;
    for member in residue.enumerate(opts.cap)? {
        let FamilyObject::Composition(c) = member else { unreachable!() };
        let there = crate::maps::rotate_residues(&c, set)?;
        if crate::maps::unrotate_residues(&there, set)? != c {
            round_trips = false;
        }
    }
    for member in alphabet.enumerate(opts.cap)? {
        let FamilyObject::Composition(c) = member else { unreachable!() };
        let back = crate::maps::unrotate_residues(&c, set)?;
        if crate::maps::rotate_residues(&back, set)? != c {
            round_trips = false;
        }
    }
    report.relations.push(Relation::new(
        "round-trips-exact",
        round_trips,
        "unrotate(rotate(x)) = x and rotate(unrotate(y)) = y",
    ));

    Ok(report.seal(started))
}

/// Count-level check of the shifted-size composition identity.
pub fn verify_munagi(n: u64, m: u64, opts: &VerifyOptions) -> Result<TheoremReport> {
    let started = Instant::now();
    let a = FamilySpec::MunagiA { n, m };
    let b = FamilySpec::MunagiB { n, m };
    a.validate()?;
    let count_a = a.count(opts.cap)?;
    let count_b = b.count(opts.cap)?;
    let mut report = TheoremReport::blank("munagi", n);
    report.m = Some(m);
    report.counts = vec![
        FamilyCount { family: a.to_string(), count: count_a },
        FamilyCount { family: b.to_string(), count: count_b },
    ];
    report.relations.push(Relation::equal("counts-equal", count_a, count_b));
    Ok(report.seal(started))
}

/// Count-level check of the refined shifted-size identity; at `k = 0` also
/// confirms the reduction to the unrefined statement.
pub fn verify_huang(n: u64, m: u64, k: u64, opts: &VerifyOptions) -> Result<TheoremReport> {
    let started = Instant::now();
    let a = FamilySpec::HuangA { n, m, k };
    let b = FamilySpec::HuangB { n, m, k };
    a.validate()?;
    let count_a = a.count(opts.cap)?;
    let count_b = b.count(opts.cap)?;
    let mut report = TheoremReport::blank("huang", n);
    report.m = Some(m);
    report.k = Some(k);
    report.counts = vec![
        FamilyCount { family: a.to_string(), count: count_a },
        FamilyCount { family: b.to_string(), count: count_b },
    ];
    report.relations.push(Relation::equal("counts-equal", count_a, count_b));

    if k == 0 {
        let munagi_a = FamilySpec::MunagiA { n, m }.count(opts.cap)?;
        let munagi_b = FamilySpec::MunagiB { n, m }.count(opts.cap)?;
        report
            .relations
            .push(Relation::equal("k0-reduces-to-munagi-a", count_a, munagi_a));
        report
            .relations
            .push(Relation::equal("k0-reduces-to-munagi-b", count_b, munagi_b));
    }
    Ok(report.seal(started))
}

/// Verifies the bounded-parts identity at `(n, m, k)`: equal counts plus the
/// conjugation route at set level.
pub fn verify_proposition(n: u64, m: u64, k: u64, opts: &VerifyOptions) -> Result<TheoremReport> {
    let started = Instant::now();
    let lhs = FamilySpec::PropLhs { n, m, k };
    let rhs = FamilySpec::PropRhs { n, m, k };
    lhs.validate()?;
    let count_lhs = lhs.count(opts.cap)?;
    let count_rhs = rhs.count(opts.cap)?;
    let mut report = TheoremReport::blank("proposition", n);
    report.m = Some(m);
    report.k = Some(k);
    report.counts = vec![
        FamilyCount { family: lhs.to_string(), count: count_lhs },
        FamilyCount { family: rhs.to_string(), count: count_rhs },
    ];
    report.relations.push(Relation::equal("counts-equal", count_lhs, count_rhs));

    // The underlying route: members of the left family conjugate (through
    // the perimeter map) onto the perimeter images of the right family.
    let mut via_conjugate = std::collections::BTreeSet::new();
    for member in lhs.enumerate(opts.cap)? {
        let FamilyObject::Composition(c) = member else { unreachable!() };
        via_conjugate.insert(crate::perimeter::pi(&c).conjugate());
    }
    let mut direct = std::collections::BTreeSet::new();
    for member in rhs.enumerate(opts.cap)? {
        let FamilyObject::Composition(c) = member else { unreachable!() };
        direct.insert(crate::perimeter::pi(&c));
    }
    report.relations.push(Relation::new(
        "conjugation-route-set-equality",
        via_conjugate == direct,
        format!("{} vs {} partitions", via_conjugate.len(), direct.len()),
    ));

    Ok(report.seal(started))
}

/// Fibonacci numbers by the recurrence from `F_0 = 0`, `F_1 = 1`.
pub fn fibonacci(n: u64) -> u64 {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..n {
        let next = a + b;
        a = b;
        b = next;
    }
    a
}

/// Verifies that all three chained families are counted by `F_n` and that
/// both chain maps are set-level bijections.
pub fn verify_fibonacci(n: u64, opts: &VerifyOptions) -> Result<TheoremReport> {
    let started = Instant::now();
    let odd = FamilySpec::FibOdd { n };
    let one_two = FamilySpec::Fib12 { n };
    let gt1 = FamilySpec::FibGt1 { n };
    odd.validate()?;
    let count_odd = odd.count(opts.cap)?;
    let count_12 = one_two.count(opts.cap)?;
    let count_gt1 = gt1.count(opts.cap)?;
    let f_n = fibonacci(n);

    let mut report = TheoremReport::blank("fibonacci", n);
    report.counts = vec![
        FamilyCount { family: odd.to_string(), count: count_odd },
        FamilyCount { family: one_two.to_string(), count: count_12 },
        FamilyCount { family: gt1.to_string(), count: count_gt1 },
    ];
    report
        .relations
        .push(Relation::equal("odd-parts-count-is-fibonacci", count_odd, f_n));
    report
        .relations
        .push(Relation::equal("one-two-count-is-fibonacci", count_12, f_n));
    report
        .relations
        .push(Relation::equal("large-parts-count-is-fibonacci", count_gt1, f_n));

    let chain1 = check_map("fib12", &odd, &one_two, opts.cap, |obj| {
        let FamilyObject::Composition(c) = obj else { unreachable!() };
        fib_chain_12_from_odd(c).map(FamilyObject::Composition)
    })?;
    push_map_outcome(&mut report, "chain-odd-to-one-two-bijective", chain1);

    let chain2 = check_map("fib-gt1", &one_two, &gt1, opts.cap, |obj| {
        let FamilyObject::Composition(c) = obj else { unreachable!() };
        fib_chain_gt1_from_12(c).map(FamilyObject::Composition)
    })?;
    push_map_outcome(&mut report, "chain-one-two-to-large-bijective", chain2);

    Ok(report.seal(started))
}

/// The suites a sweep can run.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Suite {
    Main,
    FuTang,
    Lemma,
    Munagi,
    Huang,
    Proposition,
    Fibonacci,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Main,
        Suite::FuTang,
        Suite::Lemma,
        Suite::Munagi,
        Suite::Huang,
        Suite::Proposition,
        Suite::Fibonacci,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Main => "main",
            Suite::FuTang => "fu-tang",
            Suite::Lemma => "lemma",
            Suite::Munagi => "munagi",
            Suite::Huang => "huang",
            Suite::Proposition => "proposition",
            Suite::Fibonacci => "fibonacci",
        }
    }

    /// Grid bounds for the default full run of this suite.
    pub fn default_grid(&self) -> SweepConfig {
        let base = SweepConfig::default();
        match self {
            Suite::Main => SweepConfig { n_max: 20, m_max: 10, ..base },
            Suite::FuTang => SweepConfig { n_max: 14, m_max: 3, k_max: 4, ..base },
            Suite::Lemma => SweepConfig { n_max: 16, m_max: 5, ..base },
            Suite::Munagi => SweepConfig { n_max: 14, m_max: 4, ..base },
            Suite::Huang => SweepConfig { n_max: 14, m_max: 4, k_max: 3, ..base },
            Suite::Proposition => SweepConfig { n_max: 16, m_max: 4, k_max: u64::MAX, ..base },
            Suite::Fibonacci => SweepConfig { n_max: 24, ..base },
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::parse(s, "unknown suite"))
    }
}

/// How residue sets are drawn for lemma grids.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum RPolicy {
    #[default]
    AllSubsets,
    Singletons,
}

/// Parameter grid for a sweep: `n` runs `1..=n_max`, `m` over each suite's
/// sensible lower bound to `m_max`, `k` from the suite's base to `k_max`
/// (clamped to feasible values), residue sets per policy.
#[derive(Clone, Copy, Debug)]
pub struct SweepConfig {
    pub n_max: u64,
    pub m_max: u64,
    pub k_max: u64,
    pub r_policy: RPolicy,
    pub workers: usize,
    pub cap: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n_max: 20,
            m_max: 10,
            k_max: 4,
            r_policy: RPolicy::AllSubsets,
            workers: 0,
            cap: DEFAULT_CAP,
        }
    }
}

/// Aggregated outcome of a parameter-grid run.
#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub suites: Vec<String>,
    pub points: u64,
    pub failures: u64,
    pub passed: bool,
    pub reports: Vec<TheoremReport>,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Runs every point of each suite's grid, in a fixed order. Failures are
/// collected, never short-circuited.
pub fn sweep(suites: &[Suite], config: &SweepConfig) -> Result<SweepReport> {
    let started = Instant::now();
    let opts = VerifyOptions {
        workers: config.workers,
        cap: config.cap,
    };
    let mut reports = Vec::new();
    for suite in suites {
        match suite {
            Suite::Main => {
                for n in 1..=config.n_max {
                    for m in 2..=config.m_max {
                        reports.push(verify_main(n, m, &opts)?);
                    }
                }
            }
            Suite::FuTang => {
                for n in 1..=config.n_max {
                    for m in 1..=config.m_max {
                        for k in 0..=config.k_max {
                            reports.push(verify_fu_tang(n, m, k, &opts)?);
                        }
                    }
                }
            }
            Suite::Lemma => {
                for n in 1..=config.n_max {
                    for m in 2..=config.m_max {
                        let sets = match config.r_policy {
                            RPolicy::AllSubsets => ResidueSet::all_subsets(m),
                            RPolicy::Singletons => ResidueSet::singletons(m),
                        };
                        for set in sets {
                            reports.push(verify_lemma(n, &set, &opts)?);
                        }
                    }
                }
            }
            Suite::Munagi => {
                for n in 1..=config.n_max {
                    for m in 1..=config.m_max {
                        reports.push(verify_munagi(n, m, &opts)?);
                    }
                }
            }
            Suite::Huang => {
                for n in 1..=config.n_max {
                    for m in 1..=config.m_max {
                        for k in 0..=config.k_max {
                            reports.push(verify_huang(n, m, k, &opts)?);
                        }
                    }
                }
            }
            Suite::Proposition => {
                for n in 1..=config.n_max {
                    for m in 2..=config.m_max {
                        for k in 1..=n.min(config.k_max) {
                            reports.push(verify_proposition(n, m, k, &opts)?);
                        }
                    }
                }
            }
            Suite::Fibonacci => {
                for n in 1..=config.n_max {
                    reports.push(verify_fibonacci(n, &opts)?);
                }
            }
        }
    }

    let failures = reports.iter().filter(|r| !r.passed).count() as u64;
    Ok(SweepReport {
        suites: suites.iter().map(|s| s.name().to_string()).collect(),
        points: reports.len() as u64,
        failures,
        passed: failures == 0,
        reports,
        elapsed: started.elapsed(),
    })
}

/// The default full run: every suite over its default grid.
pub fn sweep_all_default(workers: usize, cap: u64) -> Result<SweepReport> {
    let started = Instant::now();
    let mut reports = Vec::new();
    let mut suites = Vec::new();
    for suite in Suite::ALL {
        let mut grid = suite.default_grid();
        grid.workers = workers;
        grid.cap = cap;
        let partial = sweep(&[suite], &grid)?;
        suites.push(suite.name().to_string());
        reports.extend(partial.reports);
    }
    let failures = reports.iter().filter(|r| !r.passed).count() as u64;
    Ok(SweepReport {
        suites,
        points: reports.len() as u64,
        failures,
        passed: failures == 0,
        reports,
        elapsed: started.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> VerifyOptions {
        VerifyOptions::default()
    }

    #[test]
    fn main_spot_4_3() {
        let report = verify_main(4, 3, &opts()).unwrap();
        assert!(report.passed, "{report:?}");
        let counts: Vec<u64> = report.counts.iter().map(|c| c.count).collect();
        assert_eq!(counts, vec![5, 5, 6, 6, 6, 6]);
        assert_eq!(report.deficiency, Some(1));
        assert_eq!(report.witnesses.strictness.as_deref(), Some("2,2"));
        assert_eq!(report.witnesses.missing_count, Some(1));
        assert_eq!(report.witnesses.missing_sample, vec!["2,2".to_string()]);
        let direction = report.direction.unwrap();
        assert!(!direction.h_minus_g_nonnegative);
        assert!(direction.g_minus_h_nonnegative);
    }

    #[test]
    fn main_spot_4_2_equality() {
        let report = verify_main(4, 2, &opts()).unwrap();
        assert!(report.passed);
        assert_eq!(report.deficiency, Some(0));
        assert_eq!(report.counts[0].count, 3);
        assert!(report
            .relations
            .iter()
            .any(|r| r.name == "identity-at-modulus-2" && r.passed));
    }

    #[test]
    fn main_spot_n_below_m() {
        let report = verify_main(3, 5, &opts()).unwrap();
        assert!(report.passed);
        assert_eq!(report.deficiency, Some(0));
        assert!(report.witnesses.strictness.is_none());
    }

    #[test]
    fn fu_tang_figure_point() {
        let report = verify_fu_tang(7, 1, 1, &opts()).unwrap();
        assert!(report.passed, "{report:?}");
        assert_eq!(report.counts[0].count, 8);
        assert_eq!(report.counts[1].count, 8);
    }

    #[test]
    fn fu_tang_straub_point() {
        let report = verify_fu_tang(7, 1, 0, &opts()).unwrap();
        assert!(report.passed);
        assert_eq!(report.counts[0].count, report.counts[1].count);
        assert!(report
            .relations
            .iter()
            .any(|r| r.name == "k0-m1-matches-odd-parts" && r.passed));
    }

    #[test]
    fn fu_tang_unreachable_k_is_empty() {
        let report = verify_fu_tang(4, 1, 9, &opts()).unwrap();
        assert!(report.passed);
        assert_eq!(report.counts[0].count, 0);
        assert_eq!(report.counts[1].count, 0);
    }

    #[test]
    fn lemma_spot() {
        let set = ResidueSet::new(4, vec![1, 3]).unwrap();
        let report = verify_lemma(10, &set, &opts()).unwrap();
        assert!(report.passed, "{report:?}");
        assert_eq!(report.counts[0].count, 55);

        let set = ResidueSet::new(2, vec![1]).unwrap();
        let report = verify_lemma(5, &set, &opts()).unwrap();
        assert!(report.passed);
        assert_eq!(report.counts[0].count, 5);

        let report = verify_lemma(1, &set, &opts()).unwrap();
        assert!(report.passed);
        assert_eq!(report.counts[0].count, 1);
        assert_eq!(report.counts[1].count, 1);
    }

    #[test]
    fn munagi_and_huang_spots() {
        let report = verify_munagi(4, 2, &opts()).unwrap();
        assert!(report.passed);
        assert_eq!(report.counts[0].count, 3);

        let report = verify_huang(7, 2, 1, &opts()).unwrap();
        assert!(report.passed);
        assert_eq!(report.counts[0].count, 8);

        let report = verify_huang(6, 3, 0, &opts()).unwrap();
        assert!(report.passed);
        assert!(report
            .relations
            .iter()
            .any(|r| r.name == "k0-reduces-to-munagi-a" && r.passed));
    }

    #[test]
    fn proposition_spots() {
        let report = verify_proposition(3, 2, 2, &opts()).unwrap();
        assert!(report.passed);
        assert_eq!(report.counts[0].count, 1);
        assert_eq!(report.counts[1].count, 1);

        // infeasible k: both sides empty
        let report = verify_proposition(4, 3, 1, &opts()).unwrap();
        assert!(report.passed);
        assert_eq!(report.counts[0].count, 0);

        // k = n forces all ones on the left
        let report = verify_proposition(5, 2, 5, &opts()).unwrap();
        assert!(report.passed);
        assert_eq!(report.counts[0].count, 1);
    }

    #[test]
    fn fibonacci_sequence_and_spots() {
        assert_eq!(fibonacci(0), 0);
        assert_eq!(fibonacci(1), 1);
        assert_eq!(fibonacci(5), 5);
        assert_eq!(fibonacci(24), 46368);

        for n in [1u64, 2, 5] {
            let report = verify_fibonacci(n, &opts()).unwrap();
            assert!(report.passed, "{report:?}");
            assert_eq!(report.counts[0].count, fibonacci(n));
        }
    }

    #[test]
    fn sweep_reports_every_point() {
        let config = SweepConfig {
            n_max: 6,
            m_max: 3,
            k_max: 2,
            ..SweepConfig::default()
        };
        let report = sweep(&[Suite::Main, Suite::Fibonacci], &config).unwrap();
        assert!(report.passed);
        assert_eq!(report.points, 6 * 2 + 6);
        assert_eq!(report.failures, 0);
    }

    #[test]
    fn empty_grid_is_a_passing_report() {
        let config = SweepConfig {
            n_max: 0,
            ..SweepConfig::default()
        };
        let report = sweep(&[Suite::Main], &config).unwrap();
        assert!(report.passed);
        assert_eq!(report.points, 0);
    }

    #[test]
    fn deterministic_across_worker_counts() {
        for (n, m) in [(10, 3), (12, 4)] {
            let one = verify_main(n, m, &VerifyOptions { workers: 1, cap: 30 }).unwrap();
            let four = verify_main(n, m, &VerifyOptions { workers: 4, cap: 30 }).unwrap();
            assert_eq!(
                serde_json::to_string(&one).unwrap(),
                serde_json::to_string(&four).unwrap()
            );
        }
    }

    #[test]
    fn cap_propagates() {
        let tight = VerifyOptions { workers: 0, cap: 5 };
        assert!(matches!(
            verify_main(10, 3, &tight),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            verify_fibonacci(5, &tight), // substrate n + 1 = 6
            Err(Error::CapExceeded { .. })
        ));
    }
}
