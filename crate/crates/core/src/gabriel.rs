//! Gabriel filters, torsion submodules and the named hereditary torsion theories.
//!
//! Over a finite ring every Gabriel filter has a least member `I₀`, which is an
//! idempotent two-sided ideal, and the filter is exactly the set of one-sided
//! ideals containing it. Filters still carry their full member list; the
//! minimal ideal is used for fast membership and is cross-checked against the
//! list wherever both are available.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result, Side};
use crate::finring::ideals::{self, colon, enumerate_ideals, idempotent_core, is_ideal, two_sided_core};
use crate::finring::module::{same_ring, FiniteModule};
use crate::finring::{Derivation, FiniteRing, RingRef, Subset};

/// Default bound on the number of one-sided ideals for filter enumeration.
pub const DEFAULT_MAX_IDEALS: usize = 16;

/// The enumeration bound, overridable through `TORSIONLAB_MAX_IDEALS`.
pub fn max_ideals() -> usize {
    std::env::var("TORSIONLAB_MAX_IDEALS").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_MAX_IDEALS)
}

#[derive(Clone)]
pub struct GabrielFilter {
    ring: RingRef,
    side: Side,
    members: Vec<Subset>,
    lookup: HashSet<Vec<bool>>,
    min: Subset,
}

impl fmt::Debug for GabrielFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GabrielFilter({}, {}, min {:?}, {} members)", self.ring.name(), self.side, self.min, self.members.len())
    }
}

impl PartialEq for GabrielFilter {
    fn eq(&self, other: &Self) -> bool {
        self.side == other.side && self.members == other.members
    }
}

impl Eq for GabrielFilter {}

/// First failed axiom of a candidate filter, with the ideals that witness it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterViolation {
    pub axiom: &'static str,
    pub witness: Vec<Vec<usize>>,
}

impl fmt::Display for FilterViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at {:?}", self.axiom, self.witness)
    }
}

fn violation(axiom: &'static str, witness: Vec<&[usize]>) -> FilterViolation {
    FilterViolation { axiom, witness: witness.into_iter().map(|w| w.to_vec()).collect() }
}

/// Checks T1–T4 for `members` against the full ideal list `all` of the same side.
///
/// T4 is checked with `J` the least member and `j` ranging over additive generators of `J`,
/// which is equivalent once T1–T3 hold.
pub fn check_axioms(r: &FiniteRing, side: Side, members: &[Subset], all: &[Subset]) -> Result<Option<FilterViolation>> {
    let n = r.size();
    for m in members {
        if !is_ideal(r, m, side) {
            return Err(Error::NotAnIdeal(m.members().to_vec()));
        }
    }
    let set: HashSet<&[bool]> = members.iter().map(|s| s.mask()).collect();
    let full = Subset::full(n);
    if !set.contains(full.mask()) {
        return Ok(Some(violation("T1 (whole ring)", vec![full.members()])));
    }
    for i in members {
        for j in all {
            if i.is_subset_of(j) && !set.contains(j.mask()) {
                return Ok(Some(violation("T1 (upward closure)", vec![i.members(), j.members()])));
            }
        }
    }
    for (a, i) in members.iter().enumerate() {
        for j in &members[a + 1..] {
            let k = i.intersection(j);
            if !set.contains(k.mask()) {
                return Ok(Some(violation("T2", vec![i.members(), j.members()])));
            }
        }
    }
    for i in members {
        for x in 0..n {
            let c = colon(r, i, x, side);
            if !set.contains(c.mask()) {
                return Ok(Some(violation("T3", vec![i.members(), &[x]])));
            }
        }
    }
    let least = members.iter().min().expect("non-empty");
    if members.iter().any(|m| !least.is_subset_of(m)) {
        return Ok(Some(violation("T2 (least member)", vec![least.members()])));
    }
    let least_gens = spanning_set(r, least);
    for i in all {
        if set.contains(i.mask()) {
            continue;
        }
        if least_gens.iter().all(|&j| set.contains(colon(r, i, j, side).mask())) {
            return Ok(Some(violation("T4", vec![i.members(), least.members()])));
        }
    }
    Ok(None)
}

/// Greedy additive generating set of a subgroup.
pub(crate) fn spanning_set(r: &FiniteRing, s: &Subset) -> Vec<usize> {
    let mut g = Vec::new();
    let mut mask = vec![false; r.size()];
    let mut span = vec![r.zero()];
    mask[r.zero()] = true;
    for &x in s.members() {
        if !mask[x] {
            g.push(x);
            r.group().extend_span(&mut mask, &mut span, x);
        }
    }
    g
}

/// Whether `ideals` is a Gabriel filter of the given side; on failure, the first violated axiom.
pub fn is_gabriel_filter(r: &FiniteRing, ideals: &[Subset], side: Side) -> Result<Option<FilterViolation>> {
    let all = enumerate_ideals(r, side);
    check_axioms(r, side, ideals, &all)
}

impl GabrielFilter {
    /// Validates `members` against all ideals of the side.
    pub fn from_members(ring: &RingRef, side: Side, mut members: Vec<Subset>, all: &[Subset]) -> Result<Self> {
        members.sort();
        members.dedup();
        if members.is_empty() {
            return Err(Error::MalformedSpec("a filter needs at least one member".into()));
        }
        if let Some(v) = check_axioms(ring, side, &members, all)? {
            return Err(Error::AxiomViolation { axiom: v.axiom, witness: v.witness.into_iter().flatten().collect() });
        }
        Ok(Self::build(ring, side, members))
    }

    fn build(ring: &RingRef, side: Side, members: Vec<Subset>) -> Self {
        let min = members.iter().fold(Subset::full(ring.size()), |acc, m| acc.intersection(m));
        let lookup = members.iter().map(|m| m.mask().to_vec()).collect();
        GabrielFilter { ring: ring.clone(), side, members, lookup, min }
    }

    /// The filter of all ideals containing the idempotent two-sided ideal `k`.
    pub fn generated_by_min(ring: &RingRef, side: Side, k: &Subset, all: &[Subset]) -> Result<Self> {
        let members: Vec<Subset> = all.iter().filter(|i| k.is_subset_of(i)).cloned().collect();
        let f = Self::from_members(ring, side, members, all)?;
        if f.min != *k {
            return Err(Error::InternalInconsistency(format!("least member {:?} differs from {:?}", f.min, k)));
        }
        Ok(f)
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    /// The least member `I₀`.
    pub fn min_ideal(&self) -> &Subset {
        &self.min
    }

    pub fn contains(&self, ideal: &Subset) -> bool {
        self.lookup.contains(ideal.mask())
    }

    pub fn is_improper(&self) -> bool {
        self.min.len() == 1
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    /// Member-set inclusion.
    pub fn is_subfilter_of(&self, other: &GabrielFilter) -> bool {
        self.side == other.side && self.members.iter().all(|m| other.contains(m))
    }

    pub fn member_lists(&self) -> Vec<Vec<usize>> {
        self.members.iter().map(|m| m.members().to_vec()).collect()
    }
}

/// The least Gabriel filter containing `seeds`: the ideals containing the largest
/// idempotent two-sided ideal inside every seed.
pub fn filter_closure(ring: &RingRef, seeds: &[Subset], side: Side) -> Result<GabrielFilter> {
    let all = enumerate_ideals(ring, side);
    filter_closure_in(ring, seeds, side, &all)
}

pub fn filter_closure_in(ring: &RingRef, seeds: &[Subset], side: Side, all: &[Subset]) -> Result<GabrielFilter> {
    for s in seeds {
        if !is_ideal(ring, s, side) {
            return Err(Error::NotAnIdeal(s.members().to_vec()));
        }
    }
    let meet = seeds.iter().fold(Subset::full(ring.size()), |acc, s| acc.intersection(s));
    let core = two_sided_core(ring, &meet, side);
    let k = idempotent_core(ring, &core);
    GabrielFilter::generated_by_min(ring, side, &k, all)
}

/// Smallest filter containing both.
pub fn join(a: &GabrielFilter, b: &GabrielFilter, all: &[Subset]) -> Result<GabrielFilter> {
    let seeds = vec![a.min_ideal().clone(), b.min_ideal().clone()];
    filter_closure_in(a.ring(), &seeds, a.side(), all)
}

/// All Gabriel filters of the given side, from `{R}` to the improper filter.
pub fn enumerate_gabriel_filters(ring: &RingRef, side: Side) -> Result<Vec<GabrielFilter>> {
    let bound = max_ideals();
    let count = ideals::count_ideals_bounded(ring, side, bound);
    if count > bound {
        return Err(Error::TooManyIdeals { count, bound });
    }
    let all = enumerate_ideals(ring, side);
    let mut out = Vec::new();
    for k in enumerate_ideals(ring, Side::TwoSided) {
        if ideals::is_idempotent(ring, &k) {
            out.push(GabrielFilter::generated_by_min(ring, side, &k, &all)?);
        }
    }
    out.sort_by(|a, b| a.members.len().cmp(&b.members.len()).then_with(|| a.members.cmp(&b.members)));
    Ok(out)
}

pub fn trivial_filter(ring: &RingRef, side: Side) -> GabrielFilter {
    GabrielFilter::build(ring, side, vec![Subset::full(ring.size())])
}

pub fn improper_filter(ring: &RingRef, side: Side) -> GabrielFilter {
    GabrielFilter::build(ring, side, enumerate_ideals(ring, side))
}

fn annihilator_in(m: &FiniteModule, x: usize, side: Side) -> Subset {
    m.annihilator(x, side).expect("action present")
}

/// `{x ∈ M : ann(x) ∈ F}`, annihilators taken on the filter's side.
pub fn torsion_submodule(f: &GabrielFilter, m: &FiniteModule) -> Result<Subset> {
    let t = torsion_unchecked(f, m)?;
    if !m.is_submodule(&t) {
        return Err(Error::InternalInconsistency(format!("torsion {:?} is not a submodule", t)));
    }
    let (q, _) = m.quotient(&t)?;
    let t2 = torsion_unchecked(f, &q)?;
    if t2.len() != 1 {
        return Err(Error::InternalInconsistency("M/T(M) has nonzero torsion".into()));
    }
    Ok(t)
}

pub(crate) fn torsion_unchecked(f: &GabrielFilter, m: &FiniteModule) -> Result<Subset> {
    let action = m.action(f.side())?;
    if !same_ring(action.ring(), f.ring()) {
        return Err(Error::IncompatibleActions("module and filter live over different rings".into()));
    }
    let mask = (0..m.size()).map(|x| f.contains(&annihilator_in(m, x, f.side()))).collect();
    Ok(Subset::from_mask(mask))
}

fn regular(ring: &RingRef, side: Side) -> FiniteModule {
    match side {
        Side::Left => FiniteModule::regular_left(ring),
        _ => FiniteModule::regular_right(ring),
    }
}

/// `T(R) = 0` for `R` as a module over itself on the filter's side.
pub fn is_faithful(f: &GabrielFilter) -> bool {
    torsion_unchecked(f, &regular(f.ring(), f.side())).map(|t| t.len() == 1).unwrap_or(false)
}

/// Dense ideals: right case `∀x, y≠0 ∃s: xs ∈ I, ys ≠ 0`; left case with products reversed.
pub fn is_dense(r: &FiniteRing, i: &Subset, side: Side) -> bool {
    let n = r.size();
    let mul = |a: usize, b: usize| if side == Side::Left { r.mul(b, a) } else { r.mul(a, b) };
    (0..n).all(|x| (0..n).filter(|&y| y != r.zero()).all(|y| (0..n).any(|s| i.contains(mul(x, s)) && mul(y, s) != r.zero())))
}

pub fn lambek_filter(ring: &RingRef, side: Side) -> Result<GabrielFilter> {
    let all = enumerate_ideals(ring, side);
    let members = all.iter().filter(|i| is_dense(ring, i, side)).cloned().collect();
    let f = GabrielFilter::from_members(ring, side, members, &all)
        .map_err(|e| Error::InternalInconsistency(format!("dense ideals: {e}")))?;
    if !is_faithful(&f) {
        return Err(Error::InternalInconsistency("Lambek filter is not faithful".into()));
    }
    Ok(f)
}

/// `{x : ann(x) essential}` for a module on the given side.
pub fn singular_submodule(m: &FiniteModule, side: Side, nonzero_ideals: &[Subset]) -> Subset {
    let essential = |e: &Subset| nonzero_ideals.iter().all(|l| e.intersection(l).len() > 1);
    Subset::from_mask((0..m.size()).map(|x| essential(&annihilator_in(m, x, side))).collect())
}

/// Goldie filter: ideals `I` with `Z₂(R/I) = R/I`.
pub fn goldie_filter(ring: &RingRef, side: Side) -> Result<GabrielFilter> {
    let all = enumerate_ideals(ring, side);
    let nonzero: Vec<Subset> = all.iter().filter(|i| i.len() > 1).cloned().collect();
    let reg = regular(ring, side);
    let mut members = Vec::new();
    for i in &all {
        let (m, _) = reg.quotient(i)?;
        let z = singular_submodule(&m, side, &nonzero);
        let (mz, proj) = m.quotient(&z)?;
        let z1 = singular_submodule(&mz, side, &nonzero);
        let z2 = z1.preimage(&proj);
        if z2.is_full() {
            members.push(i.clone());
        }
    }
    GabrielFilter::from_members(ring, side, members, &all).map_err(|e| Error::InternalInconsistency(format!("Goldie filter: {e}")))
}

/// Regular elements and the Ore condition on the given side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OreReport {
    pub regular: Vec<usize>,
    pub units: Vec<usize>,
    pub regular_are_units: bool,
    pub ore: bool,
    pub note: String,
}

pub fn classical_filter(ring: &RingRef, side: Side) -> Result<(GabrielFilter, OreReport)> {
    let n = ring.size();
    let regular = ring.regular_elements();
    let units = ring.units();
    for &t in &regular {
        for r in 0..n {
            // right: rT ∩ tR ≠ ∅; left: Tr ∩ Rt ≠ ∅
            let ok = regular.iter().any(|&s| {
                (0..n).any(|r2| match side {
                    Side::Left => ring.mul(s, r) == ring.mul(r2, t),
                    _ => ring.mul(r, s) == ring.mul(t, r2),
                })
            });
            if !ok {
                return Err(Error::NotOre { r, t });
            }
        }
    }
    let all = enumerate_ideals(ring, side);
    let members = all.iter().filter(|i| regular.iter().any(|&t| i.contains(t))).cloned().collect();
    let f = GabrielFilter::from_members(ring, side, members, &all)?;
    let regular_are_units = regular == units;
    let note = if regular_are_units && f.is_trivial() {
        "every regular element is a unit, so the classical filter is {R} and its ring of quotients is R itself".to_string()
    } else {
        "classical filter differs from {R}".to_string()
    };
    Ok((f, OreReport { regular, units, regular_are_units, ore: true, note }))
}

/// The named one-sided theories.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedFilter {
    Lambek,
    Goldie,
    Classical,
    Trivial,
    Improper,
}

impl NamedFilter {
    pub const ALL: [NamedFilter; 5] =
        [NamedFilter::Lambek, NamedFilter::Goldie, NamedFilter::Classical, NamedFilter::Trivial, NamedFilter::Improper];

    pub fn as_str(self) -> &'static str {
        match self {
            NamedFilter::Lambek => "lambek",
            NamedFilter::Goldie => "goldie",
            NamedFilter::Classical => "classical",
            NamedFilter::Trivial => "trivial",
            NamedFilter::Improper => "improper",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        NamedFilter::ALL.into_iter().find(|n| n.as_str() == s)
    }

    pub fn build(self, ring: &RingRef, side: Side) -> Result<GabrielFilter> {
        match self {
            NamedFilter::Lambek => lambek_filter(ring, side),
            NamedFilter::Goldie => goldie_filter(ring, side),
            NamedFilter::Classical => classical_filter(ring, side).map(|(f, _)| f),
            NamedFilter::Trivial => Ok(trivial_filter(ring, side)),
            NamedFilter::Improper => Ok(improper_filter(ring, side)),
        }
    }
}

/// A failed differentiability instance: no member works below `ideal` for `derivation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialWitness {
    pub ideal: Vec<usize>,
    pub derivation: String,
    pub element: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialVerdict {
    pub differential: bool,
    pub witness: Option<DifferentialWitness>,
}

fn image_inside(d: &[usize], j: &Subset, i: &Subset) -> Option<usize> {
    j.members().iter().copied().find(|&x| !i.contains(d[x]))
}

/// For each member `I` some member `J` has `δ(J) ⊆ I` for every supplied δ. Evaluated both by
/// definition and by `δ(I₀) ⊆ I₀`; disagreement is an error.
pub fn is_differential(f: &GabrielFilter, derivations: &[Derivation]) -> Result<DifferentialVerdict> {
    let mut definitional = true;
    for i in f.members() {
        let found = f.members().iter().any(|j| derivations.iter().all(|d| image_inside(&d.table, j, i).is_none()));
        if !found {
            definitional = false;
            break;
        }
    }
    let k = f.min_ideal();
    let mut witness = None;
    for d in derivations {
        if let Some(x) = image_inside(&d.table, k, k) {
            witness = Some(DifferentialWitness { ideal: k.members().to_vec(), derivation: d.name.clone(), element: x });
            break;
        }
    }
    let minimal = witness.is_none();
    if minimal != definitional {
        return Err(Error::EquivalenceBroken(format!(
            "differentiability: definitional {definitional}, minimal-ideal {minimal}"
        )));
    }
    Ok(DifferentialVerdict { differential: minimal, witness })
}

#[derive(Clone, Debug)]
pub struct TorsionTheoryReport {
    pub filter: GabrielFilter,
    pub faithful: bool,
    pub differential: bool,
    pub witness: Option<DifferentialWitness>,
}

pub fn analyze_filter(f: &GabrielFilter, derivations: &[Derivation]) -> Result<TorsionTheoryReport> {
    let v = is_differential(f, derivations)?;
    Ok(TorsionTheoryReport { filter: f.clone(), faithful: is_faithful(f), differential: v.differential, witness: v.witness })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;

    fn ring(r: FiniteRing) -> RingRef {
        Arc::new(r)
    }

    fn subsets(n: usize, lists: &[&[usize]]) -> Vec<Subset> {
        lists.iter().map(|l| Subset::from_members(n, l.iter().copied())).collect()
    }

    #[test]
    fn z6_even_filter_is_gabriel() {
        let r = ring(FiniteRing::zmod(6));
        let f = subsets(6, &[&[0, 2, 4], &[0, 1, 2, 3, 4, 5]]);
        assert_eq!(is_gabriel_filter(&r, &f, Side::Right).unwrap(), None);
    }

    #[test]
    fn dual_maximal_ideal_violates_t4() {
        let r = ring(FiniteRing::dual_numbers_f2());
        let f = subsets(4, &[&[0, 2], &[0, 1, 2, 3]]);
        let v = is_gabriel_filter(&r, &f, Side::Right).unwrap().unwrap();
        assert_eq!(v.axiom, "T4");
        assert_eq!(v.witness, vec![vec![0], vec![0, 2]]);
        let closed = filter_closure(&r, &subsets(4, &[&[0, 2]]), Side::Right).unwrap();
        assert!(closed.is_improper());
        assert_eq!(closed.members().len(), 3);
    }

    #[test]
    fn closure_examples() {
        let r = ring(FiniteRing::zmod(6));
        let f = filter_closure(&r, &subsets(6, &[&[0, 2, 4]]), Side::Right).unwrap();
        assert_eq!(f.member_lists(), vec![vec![0, 2, 4], vec![0, 1, 2, 3, 4, 5]]);
        assert!(filter_closure(&r, &[], Side::Right).unwrap().is_trivial());
    }

    #[test]
    fn z6_torsion_and_faithfulness() {
        let r = ring(FiniteRing::zmod(6));
        let f = filter_closure(&r, &subsets(6, &[&[0, 2, 4]]), Side::Right).unwrap();
        let m = FiniteModule::regular_right(&r);
        assert_eq!(torsion_submodule(&f, &m).unwrap().members(), &[0, 3]);
        assert!(!is_faithful(&f));
        assert!(is_faithful(&trivial_filter(&r, Side::Right)));
        assert!(!is_faithful(&improper_filter(&r, Side::Right)));
        assert!(torsion_submodule(&improper_filter(&r, Side::Right), &m).unwrap().is_full());
    }

    #[test]
    fn named_filters_on_small_rings() {
        let z6 = ring(FiniteRing::zmod(6));
        assert!(lambek_filter(&z6, Side::Right).unwrap().is_trivial());
        assert!(goldie_filter(&z6, Side::Right).unwrap().is_trivial());
        let z4 = ring(FiniteRing::zmod(4));
        assert!(goldie_filter(&z4, Side::Right).unwrap().is_improper());
        let dual = ring(FiniteRing::dual_numbers_f2());
        assert!(lambek_filter(&dual, Side::Right).unwrap().is_trivial());
        let (c, report) = classical_filter(&dual, Side::Right).unwrap();
        assert!(c.is_trivial());
        assert_eq!(report.regular, vec![1, 3]);
        let t2 = ring(FiniteRing::upper_triangular_2(2));
        let l = lambek_filter(&t2, Side::Right).unwrap();
        assert_eq!(l.member_lists(), vec![vec![0, 2, 4, 6], (0..8).collect::<Vec<_>>()]);
        assert_eq!(goldie_filter(&t2, Side::Right).unwrap(), l);
    }

    #[test]
    fn filter_counts() {
        let dual = ring(FiniteRing::dual_numbers_f2());
        assert_eq!(enumerate_gabriel_filters(&dual, Side::Right).unwrap().len(), 2);
        let z4 = ring(FiniteRing::zmod(4));
        assert_eq!(enumerate_gabriel_filters(&z4, Side::Right).unwrap().len(), 2);
    }
}
