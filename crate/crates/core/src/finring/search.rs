//! Constraint propagation over partial maps between finite carriers.
//!
//! A map `φ: 0..n → 0..m` is built by assigning seeds, closing under a rule
//! that derives new assignments from the ones already made, and branching on
//! the smallest unassigned element when propagation stalls. Rules see every
//! assignment exactly once, after it is made, together with the full partial
//! map, so pairwise laws are enforced for every pair once both ends are set.

use super::group::AbelianGroup;
use super::module::{same_ring, FiniteModule};
use super::ring::FiniteRing;

pub(crate) const UNSET: u32 = u32::MAX;

type RuleFn<'a> = dyn Fn(usize, &[u32], &mut Vec<(usize, usize)>) + Sync + 'a;

pub struct Search<'a> {
    n: usize,
    m: usize,
    seeds: Vec<(usize, usize)>,
    rule: Box<RuleFn<'a>>,
    limit: usize,
    injective: bool,
}

impl<'a> Search<'a> {
    pub fn new(n: usize, m: usize, rule: impl Fn(usize, &[u32], &mut Vec<(usize, usize)>) + Sync + 'a) -> Self {
        Search { n, m, seeds: Vec::new(), rule: Box::new(rule), limit: usize::MAX, injective: false }
    }

    pub fn seed(mut self, x: usize, y: usize) -> Self {
        self.seeds.push((x, y));
        self
    }

    pub fn seeds(mut self, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        self.seeds.extend(pairs);
        self
    }

    pub fn limit(mut self, k: usize) -> Self {
        self.limit = k;
        self
    }

    /// Only report injective maps.
    pub fn injective(mut self) -> Self {
        self.injective = true;
        self
    }

    /// Every complete map consistent with seeds and rule, in branching order.
    pub fn run(&self) -> Vec<Vec<usize>> {
        let mut assign = vec![UNSET; self.n];
        let mut out = Vec::new();
        let queue: Vec<(usize, usize)> = self.seeds.clone();
        if self.propagate(&mut assign, queue) {
            self.branch(assign, 0, &mut out);
        }
        out
    }

    fn propagate(&self, assign: &mut [u32], mut pending: Vec<(usize, usize)>) -> bool {
        let mut buf = Vec::new();
        let mut used: Option<Vec<bool>> = None;
        if self.injective {
            let mut u = vec![false; self.m];
            for &v in assign.iter() {
                if v != UNSET {
                    u[v as usize] = true;
                }
            }
            used = Some(u);
        }
        while let Some((x, v)) = pending.pop() {
            if v >= self.m {
                return false;
            }
            let cur = assign[x];
            if cur != UNSET {
                if cur as usize != v {
                    return false;
                }
                continue;
            }
            if let Some(u) = used.as_mut() {
                if std::mem::replace(&mut u[v], true) {
                    return false;
                }
            }
            assign[x] = v as u32;
            buf.clear();
            (self.rule)(x, assign, &mut buf);
            pending.extend_from_slice(&buf);
        }
        true
    }

    fn branch(&self, assign: Vec<u32>, from: usize, out: &mut Vec<Vec<usize>>) {
        if out.len() >= self.limit {
            return;
        }
        let Some(x) = (from..self.n).find(|&i| assign[i] == UNSET) else {
            out.push(assign.iter().map(|&v| v as usize).collect());
            return;
        };
        for v in 0..self.m {
            let mut next = assign.clone();
            if self.propagate(&mut next, vec![(x, v)]) {
                self.branch(next, x + 1, out);
                if out.len() >= self.limit {
                    return;
                }
            }
        }
    }
}

/// Pushes `φ(x + y) = φ(x) + φ(y)` for every assigned `y`.
#[inline]
pub(crate) fn additive_rule(dom: &AbelianGroup, cod: &AbelianGroup, x: usize, a: &[u32], out: &mut Vec<(usize, usize)>) {
    let fx = a[x] as usize;
    for (y, &fy) in a.iter().enumerate() {
        if fy != UNSET {
            out.push((dom.add(x, y), cod.add(fx, fy as usize)));
        }
    }
}

/// All module homomorphisms `a → b`, equivariant for every action both carry.
pub fn hom_set(a: &FiniteModule, b: &FiniteModule) -> Vec<Vec<usize>> {
    let right = match (a.right_ring(), b.right_ring()) {
        (Some(r), Some(s)) if same_ring(r, s) => Some(r.additive_generators()),
        _ => None,
    };
    let left = match (a.left_ring(), b.left_ring()) {
        (Some(r), Some(s)) if same_ring(r, s) => Some(r.additive_generators()),
        _ => None,
    };
    let found = Search::new(a.size(), b.size(), |x, asg, out| {
        additive_rule(a.group(), b.group(), x, asg, out);
        let fx = asg[x] as usize;
        if let Some(gens) = &right {
            for &g in gens {
                out.push((a.act_right(x, g), b.act_right(fx, g)));
            }
        }
        if let Some(gens) = &left {
            for &g in gens {
                out.push((a.act_left(g, x), b.act_left(g, fx)));
            }
        }
    })
    .seed(a.zero(), b.zero())
    .run();
    found
}

/// Unital ring homomorphisms `r → s`; with `injective`, only embeddings.
pub fn ring_homs(r: &FiniteRing, s: &FiniteRing, injective: bool, limit: usize) -> Vec<Vec<usize>> {
    let mut search = Search::new(r.size(), s.size(), |x, asg, out| {
        additive_rule(r.group(), s.group(), x, asg, out);
        let fx = asg[x] as usize;
        for (y, &fy) in asg.iter().enumerate() {
            if fy != UNSET {
                out.push((r.mul(x, y), s.mul(fx, fy as usize)));
                out.push((r.mul(y, x), s.mul(fy as usize, fx)));
            }
        }
    })
    .seed(r.zero(), s.zero())
    .seed(r.one(), s.one())
    .limit(limit);
    if injective {
        search = search.injective();
    }
    search.run()
}

/// A ring isomorphism `r → s`, if one exists.
pub fn find_ring_isomorphism(r: &FiniteRing, s: &FiniteRing) -> Option<Vec<usize>> {
    if r.size() != s.size() {
        return None;
    }
    ring_homs(r, s, true, 1).into_iter().next()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::finring::subset::Subset;

    fn brute_force_homs(a: &FiniteModule, b: &FiniteModule) -> usize {
        let (n, m) = (a.size(), b.size());
        let total = m.pow(n as u32);
        (0..total)
            .filter(|&code| {
                let mut c = code;
                let map: Vec<usize> = (0..n)
                    .map(|_| {
                        let v = c % m;
                        c /= m;
                        v
                    })
                    .collect();
                a.is_hom_to(b, &map)
            })
            .count()
    }

    #[test]
    fn hom_from_even_ideal_into_z6_mod_three() {
        let r = Arc::new(FiniteRing::zmod(6));
        let m = FiniteModule::regular_right(&r);
        let (i, _) = m.submodule(&Subset::from_members(6, [0, 2, 4])).unwrap();
        let (q, _) = m.quotient(&Subset::from_members(6, [0, 3])).unwrap();
        let homs = hom_set(&i, &q);
        assert_eq!(homs.len(), 3);
        assert_eq!(homs.len(), brute_force_homs(&i, &q));
    }

    #[test]
    fn hom_from_zero_module() {
        let r = Arc::new(FiniteRing::zmod(4));
        let zero = FiniteModule::zero_module(Some(&r), None);
        assert_eq!(hom_set(&zero, &FiniteModule::regular_right(&r)).len(), 1);
    }

    #[test]
    fn hom_from_dense_ideal_of_t2_has_sixteen_maps() {
        let r = Arc::new(FiniteRing::upper_triangular_2(2));
        let m = FiniteModule::regular_right(&r);
        let k = Subset::from_members(8, [0, 2, 4, 6]);
        let (i, _) = m.submodule(&k).unwrap();
        assert_eq!(hom_set(&i, &m).len(), 16);
        assert_eq!(brute_force_homs(&i, &m), 16);
    }

    #[test]
    fn automorphisms_and_isomorphisms() {
        let f4 = FiniteRing::gf4();
        assert_eq!(ring_homs(&f4, &f4, true, usize::MAX).len(), 2);
        let z6 = FiniteRing::zmod(6);
        let z2z3 = FiniteRing::product(&FiniteRing::zmod(2), &FiniteRing::zmod(3));
        assert!(find_ring_isomorphism(&z6, &z2z3).is_some());
        assert!(find_ring_isomorphism(&FiniteRing::zmod(4), &FiniteRing::dual_numbers_f2()).is_none());
    }
}
