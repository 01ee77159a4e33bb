use std::fmt;

use super::group::AbelianGroup;
use super::ring::{FiniteRing, RingRef};
use super::subset::Subset;
use crate::error::{Error, Result, Side};

/// A scalar action table. Right actions are indexed `x·|R| + r`, left actions `r·|M| + x`.
#[derive(Clone)]
pub struct Action {
    ring: RingRef,
    table: Vec<u32>,
}

impl Action {
    pub fn new(ring: RingRef, table: Vec<u32>) -> Self {
        Action { ring, table }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }
}

/// A finite right module, left module, or bimodule given by explicit tables.
#[derive(Clone)]
pub struct FiniteModule {
    name: String,
    group: AbelianGroup,
    right: Option<Action>,
    left: Option<Action>,
}

impl fmt::Debug for FiniteModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteModule({}, order {}, left: {}, right: {})",
            self.name,
            self.size(),
            self.left.as_ref().map_or("-", |a| a.ring.name()),
            self.right.as_ref().map_or("-", |a| a.ring.name())
        )
    }
}

pub fn same_ring(a: &FiniteRing, b: &FiniteRing) -> bool {
    std::ptr::eq(a, b) || a == b
}

impl FiniteModule {
    /// Builds and fully validates a module.
    pub fn new(
        name: impl Into<String>,
        group: AbelianGroup,
        right: Option<Action>,
        left: Option<Action>,
    ) -> Result<Self> {
        let m = FiniteModule { name: name.into(), group, right, left };
        m.check_shapes()?;
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(
        name: impl Into<String>,
        group: AbelianGroup,
        right: Option<Action>,
        left: Option<Action>,
    ) -> Self {
        FiniteModule { name: name.into(), group, right, left }
    }

    fn check_shapes(&self) -> Result<()> {
        let m = self.size();
        for (act, side) in [(&self.right, Side::Right), (&self.left, Side::Left)] {
            if let Some(a) = act {
                let n = a.ring.size();
                if a.table.len() != m * n {
                    return Err(Error::MalformedSpec(format!(
                        "{side} action table has {} entries, expected {}",
                        a.table.len(),
                        m * n
                    )));
                }
                if a.table.iter().any(|&v| v as usize >= m) {
                    return Err(Error::MalformedSpec(format!("{side} action entry out of range")));
                }
            }
        }
        Ok(())
    }

    /// Full table scan of the module axioms for every present action and, for bimodules,
    /// of `(r·x)·s = r·(x·s)`.
    pub fn validate(&self) -> Result<()> {
        let m = self.size();
        if let Some(a) = &self.right {
            let r = &a.ring;
            let n = r.size();
            for x in 0..m {
                if self.act_right(x, r.one()) != x {
                    return Err(Error::AxiomViolation { axiom: "right unit", witness: vec![x] });
                }
                for s in 0..n {
                    let xs = self.act_right(x, s);
                    for t in 0..n {
                        if self.act_right(x, r.add(s, t)) != self.add(xs, self.act_right(x, t)) {
                            return Err(Error::AxiomViolation {
                                axiom: "right action additive in scalar",
                                witness: vec![x, s, t],
                            });
                        }
                        if self.act_right(x, r.mul(s, t)) != self.act_right(xs, t) {
                            return Err(Error::AxiomViolation {
                                axiom: "right action associativity",
                                witness: vec![x, s, t],
                            });
                        }
                    }
                }
                for y in 0..m {
                    let xy = self.add(x, y);
                    for s in 0..n {
                        if self.act_right(xy, s) != self.add(self.act_right(x, s), self.act_right(y, s)) {
                            return Err(Error::AxiomViolation {
                                axiom: "right action additive in module",
                                witness: vec![x, y, s],
                            });
                        }
                    }
                }
            }
        }
        if let Some(a) = &self.left {
            let r = &a.ring;
            let n = r.size();
            for x in 0..m {
                if self.act_left(r.one(), x) != x {
                    return Err(Error::AxiomViolation { axiom: "left unit", witness: vec![x] });
                }
                for s in 0..n {
                    let sx = self.act_left(s, x);
                    for t in 0..n {
                        if self.act_left(r.add(s, t), x) != self.add(sx, self.act_left(t, x)) {
                            return Err(Error::AxiomViolation {
                                axiom: "left action additive in scalar",
                                witness: vec![s, t, x],
                            });
                        }
                        if self.act_left(r.mul(t, s), x) != self.act_left(t, sx) {
                            return Err(Error::AxiomViolation {
                                axiom: "left action associativity",
                                witness: vec![t, s, x],
                            });
                        }
                    }
                }
                for y in 0..m {
                    let xy = self.add(x, y);
                    for s in 0..n {
                        if self.act_left(s, xy) != self.add(self.act_left(s, x), self.act_left(s, y)) {
                            return Err(Error::AxiomViolation {
                                axiom: "left action additive in module",
                                witness: vec![s, x, y],
                            });
                        }
                    }
                }
            }
        }
        if let (Some(l), Some(r)) = (&self.left, &self.right) {
            for a in 0..l.ring.size() {
                for x in 0..m {
                    let ax = self.act_left(a, x);
                    for b in 0..r.ring.size() {
                        if self.act_right(ax, b) != self.act_left(a, self.act_right(x, b)) {
                            return Err(Error::AxiomViolation {
                                axiom: "bimodule compatibility",
                                witness: vec![a, x, b],
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.group.size()
    }

    #[inline]
    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    #[inline]
    pub fn zero(&self) -> usize {
        self.group.zero()
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.group.add(a, b)
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.group.neg(a)
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.group.sub(a, b)
    }

    pub fn right(&self) -> Option<&Action> {
        self.right.as_ref()
    }

    pub fn left(&self) -> Option<&Action> {
        self.left.as_ref()
    }

    pub fn right_ring(&self) -> Option<&RingRef> {
        self.right.as_ref().map(|a| &a.ring)
    }

    pub fn left_ring(&self) -> Option<&RingRef> {
        self.left.as_ref().map(|a| &a.ring)
    }

    pub fn is_bimodule(&self) -> bool {
        self.left.is_some() && self.right.is_some()
    }

    /// `x·r`. Panics when the module has no right action.
    #[inline]
    pub fn act_right(&self, x: usize, r: usize) -> usize {
        let a = self.right.as_ref().expect("right action");
        a.table[x * a.ring.size() + r] as usize
    }

    /// `r·x`. Panics when the module has no left action.
    #[inline]
    pub fn act_left(&self, r: usize, x: usize) -> usize {
        let a = self.left.as_ref().expect("left action");
        a.table[r * self.size() + x] as usize
    }

    pub fn action(&self, side: Side) -> Result<&Action> {
        match side {
            Side::Right => self.right.as_ref(),
            Side::Left => self.left.as_ref(),
            Side::TwoSided => None,
        }
        .ok_or(Error::MissingAction(side))
    }

    // ---- canonical modules ----

    /// `R` as a right module over itself.
    pub fn regular_right(r: &RingRef) -> Self {
        let action = Action::new(r.clone(), r.mul_table().to_vec());
        FiniteModule::new_unchecked(format!("{}_{}", r.name(), r.name()), r.group().clone(), Some(action), None)
    }

    /// `R` as a left module over itself.
    pub fn regular_left(r: &RingRef) -> Self {
        let action = Action::new(r.clone(), r.mul_table().to_vec());
        FiniteModule::new_unchecked(format!("{}_{}", r.name(), r.name()), r.group().clone(), None, Some(action))
    }

    /// `R` as an `R`-bimodule.
    pub fn regular_bimodule(r: &RingRef) -> Self {
        let action = Action::new(r.clone(), r.mul_table().to_vec());
        FiniteModule::new_unchecked(r.name().to_string(), r.group().clone(), Some(action.clone()), Some(action))
    }

    pub fn zero_module(right: Option<&RingRef>, left: Option<&RingRef>) -> Self {
        FiniteModule::new_unchecked(
            "0",
            AbelianGroup::cyclic(1),
            right.map(|r| Action::new(r.clone(), vec![0; r.size()])),
            left.map(|r| Action::new(r.clone(), vec![0; r.size()])),
        )
    }

    /// Drops the left action.
    pub fn right_part(&self) -> Self {
        FiniteModule::new_unchecked(self.name.clone(), self.group.clone(), self.right.clone(), None)
    }

    /// Drops the right action.
    pub fn left_part(&self) -> Self {
        FiniteModule::new_unchecked(self.name.clone(), self.group.clone(), None, self.left.clone())
    }

    /// The left action reread as a right action over `op`, which must be the opposite ring.
    pub fn left_as_right_over(&self, op: &RingRef) -> Result<Self> {
        let l = self.left.as_ref().ok_or(Error::MissingAction(Side::Left))?;
        if !same_ring(&l.ring.opposite(), op) {
            return Err(Error::IncompatibleActions("ring is not the opposite of the left ring".into()));
        }
        let (m, n) = (self.size(), op.size());
        let mut table = vec![0u32; m * n];
        for x in 0..m {
            for r in 0..n {
                table[x * n + r] = self.act_left(r, x) as u32;
            }
        }
        Ok(FiniteModule::new_unchecked(
            format!("{}^op", self.name),
            self.group.clone(),
            Some(Action::new(op.clone(), table)),
            None,
        ))
    }

    /// Closure of `gens` under addition and every present action.
    pub fn generated_submodule(&self, gens: impl IntoIterator<Item = usize>) -> Subset {
        let m = self.size();
        let mut mask = vec![false; m];
        let mut members = vec![self.zero()];
        mask[self.zero()] = true;
        let mut pending: Vec<usize> = gens.into_iter().collect();
        while let Some(g) = pending.pop() {
            if mask[g] {
                continue;
            }
            let before = members.len();
            self.group.extend_span(&mut mask, &mut members, g);
            for &y in &members[before..] {
                if let Some(a) = &self.right {
                    for r in 0..a.ring.size() {
                        let z = self.act_right(y, r);
                        if !mask[z] {
                            pending.push(z);
                        }
                    }
                }
                if let Some(a) = &self.left {
                    for r in 0..a.ring.size() {
                        let z = self.act_left(r, y);
                        if !mask[z] {
                            pending.push(z);
                        }
                    }
                }
            }
        }
        Subset::from_mask(mask)
    }

    /// Whether `s` is closed under addition, negation and every present action.
    pub fn is_submodule(&self, s: &Subset) -> bool {
        if s.carrier_size() != self.size() || !s.contains(self.zero()) {
            return false;
        }
        let mem = s.members();
        for &x in mem {
            if !s.contains(self.neg(x)) {
                return false;
            }
            for &y in mem {
                if !s.contains(self.add(x, y)) {
                    return false;
                }
            }
            if let Some(a) = &self.right {
                if (0..a.ring.size()).any(|r| !s.contains(self.act_right(x, r))) {
                    return false;
                }
            }
            if let Some(a) = &self.left {
                if (0..a.ring.size()).any(|r| !s.contains(self.act_left(r, x))) {
                    return false;
                }
            }
        }
        true
    }

    /// The submodule on `s`, elements in increasing order of their index in `self`,
    /// with the inclusion map.
    pub fn submodule(&self, s: &Subset) -> Result<(FiniteModule, Vec<usize>)> {
        if !self.is_submodule(s) {
            return Err(Error::NotAnIdeal(s.members().to_vec()));
        }
        let emb = s.members().to_vec();
        let k = emb.len();
        let mut back = vec![usize::MAX; self.size()];
        for (i, &x) in emb.iter().enumerate() {
            back[x] = i;
        }
        let mut add = vec![0u32; k * k];
        for i in 0..k {
            for j in 0..k {
                add[i * k + j] = back[self.add(emb[i], emb[j])] as u32;
            }
        }
        let zero = back[self.zero()];
        let right = self.right.as_ref().map(|a| {
            let n = a.ring.size();
            let mut t = vec![0u32; k * n];
            for i in 0..k {
                for r in 0..n {
                    t[i * n + r] = back[self.act_right(emb[i], r)] as u32;
                }
            }
            Action::new(a.ring.clone(), t)
        });
        let left = self.left.as_ref().map(|a| {
            let n = a.ring.size();
            let mut t = vec![0u32; k * n];
            for r in 0..n {
                for i in 0..k {
                    t[r * k + i] = back[self.act_left(r, emb[i])] as u32;
                }
            }
            Action::new(a.ring.clone(), t)
        });
        let group = AbelianGroup::from_table_unchecked(k, add, zero);
        Ok((FiniteModule::new_unchecked(format!("{}<sub>", self.name), group, right, left), emb))
    }

    /// `self / s` with the projection. Cosets are numbered in order of their least member.
    pub fn quotient(&self, s: &Subset) -> Result<(FiniteModule, Vec<usize>)> {
        if !self.is_submodule(s) {
            return Err(Error::NotAnIdeal(s.members().to_vec()));
        }
        let m = self.size();
        let mut proj = vec![usize::MAX; m];
        let mut reps = Vec::new();
        for x in 0..m {
            if proj[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(x);
            for &t in s.members() {
                proj[self.add(x, t)] = c;
            }
        }
        let k = reps.len();
        let mut add = vec![0u32; k * k];
        for i in 0..k {
            for j in 0..k {
                add[i * k + j] = proj[self.add(reps[i], reps[j])] as u32;
            }
        }
        let right = self.right.as_ref().map(|a| {
            let n = a.ring.size();
            let mut t = vec![0u32; k * n];
            for i in 0..k {
                for r in 0..n {
                    t[i * n + r] = proj[self.act_right(reps[i], r)] as u32;
                }
            }
            Action::new(a.ring.clone(), t)
        });
        let left = self.left.as_ref().map(|a| {
            let n = a.ring.size();
            let mut t = vec![0u32; k * n];
            for r in 0..n {
                for i in 0..k {
                    t[r * k + i] = proj[self.act_left(r, reps[i])] as u32;
                }
            }
            Action::new(a.ring.clone(), t)
        });
        let group = AbelianGroup::from_table_unchecked(k, add, proj[self.zero()]);
        Ok((FiniteModule::new_unchecked(format!("{}/K", self.name), group, right, left), proj))
    }

    /// Right case `{r : x·r = 0}`, left case `{r : r·x = 0}`.
    pub fn annihilator(&self, x: usize, side: Side) -> Result<Subset> {
        let a = self.action(side)?;
        let n = a.ring.size();
        let mask = match side {
            Side::Right => (0..n).map(|r| self.act_right(x, r) == self.zero()).collect(),
            _ => (0..n).map(|r| self.act_left(r, x) == self.zero()).collect(),
        };
        Ok(Subset::from_mask(mask))
    }

    /// Whether `map: self → other` is additive and equivariant for every action both share.
    pub fn is_hom_to(&self, other: &FiniteModule, map: &[usize]) -> bool {
        if map.len() != self.size() || map.iter().any(|&y| y >= other.size()) {
            return false;
        }
        let m = self.size();
        for x in 0..m {
            for y in 0..m {
                if map[self.add(x, y)] != other.add(map[x], map[y]) {
                    return false;
                }
            }
        }
        if let (Some(a), Some(b)) = (&self.right, &other.right) {
            if !same_ring(&a.ring, &b.ring) {
                return false;
            }
            for x in 0..m {
                for r in 0..a.ring.size() {
                    if map[self.act_right(x, r)] != other.act_right(map[x], r) {
                        return false;
                    }
                }
            }
        }
        if let (Some(a), Some(b)) = (&self.left, &other.left) {
            if !same_ring(&a.ring, &b.ring) {
                return false;
            }
            for x in 0..m {
                for r in 0..a.ring.size() {
                    if map[self.act_left(r, x)] != other.act_left(r, map[x]) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Kernel of a map `domain → codomain`.
pub fn kernel(map: &[usize], codomain_zero: usize) -> Subset {
    Subset::from_mask(map.iter().map(|&y| y == codomain_zero).collect())
}

pub fn is_injective(map: &[usize], codomain: usize) -> bool {
    let mut seen = vec![false; codomain];
    map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
}

pub fn is_bijective(map: &[usize], codomain: usize) -> bool {
    map.len() == codomain && is_injective(map, codomain)
}

pub fn compose(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&x| outer[x]).collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;

    fn z6() -> RingRef {
        Arc::new(FiniteRing::zmod(6))
    }

    #[test]
    fn annihilators_in_z6() {
        let r = z6();
        let m = FiniteModule::regular_right(&r);
        assert_eq!(m.annihilator(3, Side::Right).unwrap().members(), &[0, 2, 4]);
        assert!(m.annihilator(0, Side::Right).unwrap().is_full());
        assert_eq!(m.annihilator(1, Side::Left), Err(Error::MissingAction(Side::Left)));
    }

    #[test]
    fn annihilator_of_e12_in_t2() {
        let r = Arc::new(FiniteRing::upper_triangular_2(2));
        let m = FiniteModule::regular_right(&r);
        let e12 = r.element("e12").unwrap();
        let ann = m.annihilator(e12, Side::Right).unwrap();
        let expected = Subset::from_members(8, [0, r.element("e11").unwrap(), e12, r.element("e11+e12").unwrap()]);
        assert_eq!(ann, expected);
    }

    #[test]
    fn quotient_and_submodule_are_modules() {
        let r = z6();
        let m = FiniteModule::regular_bimodule(&r);
        let s = Subset::from_members(6, [0, 3]);
        let (q, proj) = m.quotient(&s).unwrap();
        q.validate().unwrap();
        assert_eq!(q.size(), 3);
        assert!(m.is_hom_to(&q, &proj));
        let (sub, emb) = m.submodule(&s).unwrap();
        sub.validate().unwrap();
        assert!(sub.is_hom_to(&m, &emb));
        assert!(m.quotient(&Subset::from_members(6, [0, 1])).is_err());
    }
}
