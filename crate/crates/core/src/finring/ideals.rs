//! One-sided and two-sided ideals of a finite ring.

use std::collections::{BTreeSet, HashSet};

use super::ring::FiniteRing;
use super::subset::Subset;
use crate::error::Side;

/// Closure of `gens` under addition and the multiplications of `side`.
pub fn generate_ideal(r: &FiniteRing, side: Side, gens: impl IntoIterator<Item = usize>) -> Subset {
    let n = r.size();
    let mut mask = vec![false; n];
    let mut members = vec![r.zero()];
    mask[r.zero()] = true;
    let mut pending: Vec<usize> = gens.into_iter().collect();
    while let Some(g) = pending.pop() {
        if mask[g] {
            continue;
        }
        let before = members.len();
        r.group().extend_span(&mut mask, &mut members, g);
        for &y in &members[before..] {
            for s in 0..n {
                if side != Side::Left {
                    let z = r.mul(y, s);
                    if !mask[z] {
                        pending.push(z);
                    }
                }
                if side != Side::Right {
                    let z = r.mul(s, y);
                    if !mask[z] {
                        pending.push(z);
                    }
                }
            }
        }
    }
    Subset::from_mask(mask)
}

/// Whether `s` is an additive subgroup closed under the multiplications of `side`.
pub fn is_ideal(r: &FiniteRing, s: &Subset, side: Side) -> bool {
    if s.carrier_size() != r.size() || !s.contains(r.zero()) {
        return false;
    }
    let n = r.size();
    for &x in s.members() {
        for &y in s.members() {
            if !s.contains(r.add(x, y)) {
                return false;
            }
        }
        for t in 0..n {
            if side != Side::Left && !s.contains(r.mul(x, t)) {
                return false;
            }
            if side != Side::Right && !s.contains(r.mul(t, x)) {
                return false;
            }
        }
    }
    true
}

/// All ideals of the given side, ordered by size and then by member list.
pub fn enumerate_ideals(r: &FiniteRing, side: Side) -> Vec<Subset> {
    let n = r.size();
    let principal: Vec<Subset> = (0..n).map(|x| generate_ideal(r, side, [x])).collect();
    let zero = Subset::singleton(n, r.zero());
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    seen.insert(zero.mask().to_vec());
    let mut frontier = vec![zero.clone()];
    let mut out = BTreeSet::new();
    out.insert(zero);
    while let Some(i) = frontier.pop() {
        for (x, p) in principal.iter().enumerate() {
            if i.contains(x) {
                continue;
            }
            let sum = sum_of(r, &i, p);
            if seen.insert(sum.mask().to_vec()) {
                frontier.push(sum.clone());
                out.insert(sum);
            }
        }
    }
    out.into_iter().collect()
}

/// Number of ideals of the given side, stopping early once `bound` is exceeded.
pub fn count_ideals_bounded(r: &FiniteRing, side: Side, bound: usize) -> usize {
    let n = r.size();
    let principal: Vec<Subset> = (0..n).map(|x| generate_ideal(r, side, [x])).collect();
    let zero = Subset::singleton(n, r.zero());
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    seen.insert(zero.mask().to_vec());
    let mut frontier = vec![zero];
    while let Some(i) = frontier.pop() {
        for (x, p) in principal.iter().enumerate() {
            if i.contains(x) {
                continue;
            }
            let sum = sum_of(r, &i, p);
            if seen.insert(sum.mask().to_vec()) {
                if seen.len() > bound {
                    return seen.len();
                }
                frontier.push(sum);
            }
        }
    }
    seen.len()
}

/// `A + B` for additive subgroups closed under the same multiplications.
pub fn sum_of(r: &FiniteRing, a: &Subset, b: &Subset) -> Subset {
    let mut mask = vec![false; r.size()];
    for &x in a.members() {
        for &y in b.members() {
            mask[r.add(x, y)] = true;
        }
    }
    Subset::from_mask(mask)
}

/// Additive span of all products `ab` with `a ∈ A`, `b ∈ B`.
pub fn product_span(r: &FiniteRing, a: &Subset, b: &Subset) -> Subset {
    let prods: Vec<usize> = a.members().iter().flat_map(|&x| b.members().iter().map(move |&y| (x, y))).map(|(x, y)| r.mul(x, y)).collect();
    Subset::from_mask(r.group().span(prods))
}

/// Right case `(I:x) = {y : xy ∈ I}`, left case `{y : yx ∈ I}`.
pub fn colon(r: &FiniteRing, i: &Subset, x: usize, side: Side) -> Subset {
    let n = r.size();
    let mask = match side {
        Side::Left => (0..n).map(|y| i.contains(r.mul(y, x))).collect(),
        _ => (0..n).map(|y| i.contains(r.mul(x, y))).collect(),
    };
    Subset::from_mask(mask)
}

/// The largest two-sided ideal inside a one-sided ideal `a`.
pub fn two_sided_core(r: &FiniteRing, a: &Subset, side: Side) -> Subset {
    let n = r.size();
    let mask = (0..n)
        .map(|x| match side {
            Side::Left => (0..n).all(|s| a.contains(r.mul(x, s))),
            _ => (0..n).all(|s| a.contains(r.mul(s, x))),
        })
        .collect();
    Subset::from_mask(mask)
}

/// The largest idempotent two-sided ideal contained in the two-sided ideal `k`:
/// the stable value of `k ⊇ k² ⊇ k³ ⊇ …`.
pub fn idempotent_core(r: &FiniteRing, k: &Subset) -> Subset {
    let mut cur = k.clone();
    loop {
        let next = product_span(r, &cur, k);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

pub fn is_idempotent(r: &FiniteRing, k: &Subset) -> bool {
    product_span(r, k, k) == *k
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force: all subsets closed under the side's operations.
    fn oracle(r: &FiniteRing, side: Side) -> Vec<Subset> {
        let n = r.size();
        let mut out: Vec<Subset> = (0u32..1 << n)
            .map(|bits| Subset::from_mask((0..n).map(|i| bits >> i & 1 == 1).collect()))
            .filter(|s| is_ideal(r, s, side))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn ideal_counts_match_subset_oracle() {
        for (r, expected) in [
            (FiniteRing::zmod(4), 3),
            (FiniteRing::zmod(6), 4),
            (FiniteRing::upper_triangular_2(2), 7),
        ] {
            let ideals = enumerate_ideals(&r, Side::Right);
            assert_eq!(ideals.len(), expected, "{}", r.name());
            assert_eq!(ideals, oracle(&r, Side::Right));
        }
    }

    #[test]
    fn z6_ideals_in_canonical_order() {
        let members: Vec<Vec<usize>> =
            enumerate_ideals(&FiniteRing::zmod(6), Side::Right).iter().map(|s| s.members().to_vec()).collect();
        assert_eq!(members, vec![vec![0], vec![0, 3], vec![0, 2, 4], vec![0, 1, 2, 3, 4, 5]]);
    }

    #[test]
    fn left_and_two_sided_on_t2() {
        let r = FiniteRing::upper_triangular_2(2);
        assert_eq!(enumerate_ideals(&r, Side::Left), oracle(&r, Side::Left));
        assert_eq!(enumerate_ideals(&r, Side::TwoSided), oracle(&r, Side::TwoSided));
        assert_eq!(count_ideals_bounded(&r, Side::Right, 100), 7);
    }

    #[test]
    fn idempotent_core_of_dual_maximal_ideal_is_zero() {
        let r = FiniteRing::dual_numbers_f2();
        let m = Subset::from_members(4, [0, 2]);
        assert_eq!(idempotent_core(&r, &m).members(), &[0]);
    }
}
