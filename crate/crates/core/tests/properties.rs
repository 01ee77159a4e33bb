use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use torsionlab::gabriel::{enumerate_gabriel_filters, filter_closure, torsion_submodule};
use torsionlab::io::{parse_ring, to_json, RingSpecFile};
use torsionlab::quotient::{is_perfect_filter, ring_of_quotients};
use torsionlab::suites::brute_force_ideals;
use torsionlab::{
    check_ring_derivation, enumerate_derivations, enumerate_ideals, FiniteModule, FiniteRing, RingRef, Side, Subset,
};

/// Small rings: Z/n, products of two cyclic rings, and the noncommutative corpus members.
fn ring_strategy() -> impl Strategy<Value = RingRef> {
    prop_oneof![
        (2usize..=12).prop_map(FiniteRing::zmod),
        (2usize..=4, 2usize..=4).prop_map(|(a, b)| FiniteRing::product(&FiniteRing::zmod(a), &FiniteRing::zmod(b))),
        Just(FiniteRing::gf4()),
        Just(FiniteRing::dual_numbers_f2()),
        Just(FiniteRing::upper_triangular_2(2)),
    ]
    .prop_map(Arc::new)
}

type Ideal = BTreeSet<usize>;

fn set(s: &Subset) -> Ideal {
    s.members().iter().copied().collect()
}

/// `(I : r) = {x : r x ∈ I}`.
fn colon(r: &FiniteRing, i: &Ideal, a: usize) -> Ideal {
    (0..r.size()).filter(|&x| i.contains(&r.mul(a, x))).collect()
}

/// Smallest set of right ideals containing the seeds and closed under T1 to T4, by saturation.
fn saturate(r: &FiniteRing, seeds: &[Ideal]) -> BTreeSet<Ideal> {
    let all: Vec<Ideal> = brute_force_ideals(r, Side::Right).into_iter().map(|v| v.into_iter().collect()).collect();
    let mut f: BTreeSet<Ideal> = seeds.iter().cloned().collect();
    f.insert((0..r.size()).collect());
    loop {
        let mut next = f.clone();
        for i in &f {
            for j in &all {
                if i.is_subset(j) {
                    next.insert(j.clone());
                }
            }
            for j in &f {
                next.insert(i.intersection(j).copied().collect());
            }
            for a in 0..r.size() {
                next.insert(colon(r, i, a));
            }
        }
        for j in &all {
            if f.iter().any(|i| i.iter().all(|&a| f.contains(&colon(r, j, a)))) {
                next.insert(j.clone());
            }
        }
        if next == f {
            return f;
        }
        f = next;
    }
}

fn divisors(n: usize) -> usize {
    (1..=n).filter(|d| n.is_multiple_of(*d)).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ideal_enumeration_matches_subset_scan(r in ring_strategy()) {
        for side in [Side::Right, Side::Left, Side::TwoSided] {
            let found: Vec<Vec<usize>> = enumerate_ideals(&r, side).iter().map(|s| s.members().to_vec()).collect();
            prop_assert_eq!(found, brute_force_ideals(&r, side));
        }
    }

    #[test]
    fn cyclic_ring_ideals_are_divisors(n in 2usize..=30) {
        prop_assert_eq!(enumerate_ideals(&FiniteRing::zmod(n), Side::Right).len(), divisors(n));
    }

    #[test]
    fn closure_matches_saturation(r in ring_strategy(), picks in prop::collection::vec(any::<prop::sample::Index>(), 0..3)) {
        let ideals = enumerate_ideals(&r, Side::Right);
        let seeds: Vec<Subset> = picks.iter().map(|p| ideals[p.index(ideals.len())].clone()).collect();
        let f = filter_closure(&r, &seeds, Side::Right).unwrap();
        let got: BTreeSet<Ideal> = f.members().iter().map(set).collect();
        let oracle = saturate(&r, &seeds.iter().map(set).collect::<Vec<_>>());
        prop_assert_eq!(got, oracle);
    }

    #[test]
    fn ring_json_round_trip(r in ring_strategy()) {
        let text = to_json(&RingSpecFile::from_ring(&r));
        prop_assert_eq!(&*parse_ring(&text, "generated").unwrap(), &*r);
    }

    #[test]
    fn enumerated_derivations_satisfy_leibniz(r in ring_strategy()) {
        for d in enumerate_derivations(&r) {
            prop_assert!(check_ring_derivation(&r, &d.table).is_ok());
            for x in 0..r.size() {
                for y in 0..r.size() {
                    prop_assert_eq!(d.table[r.mul(x, y)], r.add(r.mul(d.table[x], y), r.mul(x, d.table[y])));
                }
            }
        }
    }

    #[test]
    fn commutative_quotient_is_the_idempotent_factor(r in ring_strategy()) {
        prop_assume!(r.is_commutative());
        for f in enumerate_gabriel_filters(&r, Side::Right).unwrap() {
            let qr = ring_of_quotients(&f).unwrap();
            prop_assert_eq!(qr.size(), f.min_ideal().len());
            prop_assert!(is_perfect_filter(&f).unwrap().perfect);
        }
    }

    #[test]
    fn torsion_of_regular_module_is_the_annihilator_side(r in ring_strategy()) {
        let m = FiniteModule::regular_right(&r);
        for f in enumerate_gabriel_filters(&r, Side::Right).unwrap() {
            let t = torsion_submodule(&f, &m).unwrap();
            let k = f.min_ideal();
            let oracle: Vec<usize> = (0..r.size()).filter(|&x| k.members().iter().all(|&a| r.mul(x, a) == r.zero())).collect();
            prop_assert_eq!(t.members(), &oracle[..]);
        }
    }
}
