//! Modules and rings of quotients.
//!
//! Over a finite ring the directed system `Hom(I, M/T(M))`, `I ∈ F`, has a terminal
//! index, the least member `I₀`, so `M_F` is realized as `Hom(I₀, M/T(M))` with
//! `q(m)(i) = (m + T(M))·i`.

use std::collections::HashMap;

use crate::error::{Error, Result, Side};
use crate::finring::ideals::{enumerate_ideals, generate_ideal};
use crate::finring::module::{is_bijective, is_injective, kernel, same_ring};
use crate::finring::{hom_set, tensor_over_r, Action, FiniteModule, FiniteRing, RingRef, Subset};
use crate::gabriel::{enumerate_gabriel_filters, is_faithful, join, torsion_submodule, torsion_unchecked, GabrielFilter};

const NONE: usize = usize::MAX;

/// `M_F` as `Hom(I₀, M/T(M))`, with `q: M → M_F`.
#[derive(Clone, Debug)]
pub struct QuotientModule {
    filter: GabrielFilter,
    base: FiniteModule,
    torsion: Subset,
    reduced: FiniteModule,
    proj: Vec<usize>,
    ideal: Vec<usize>,
    pos: Vec<usize>,
    maps: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    module: FiniteModule,
    q: Vec<usize>,
}

/// The least member of the filter.
pub fn minimal_ideal(f: &GabrielFilter) -> Result<Subset> {
    let k = f.min_ideal().clone();
    if !f.contains(&k) {
        return Err(Error::InternalInconsistency("intersection of the filter is not a member".into()));
    }
    Ok(k)
}

pub fn module_of_quotients(f: &GabrielFilter, m: &FiniteModule) -> Result<QuotientModule> {
    if f.side() != Side::Right {
        return Err(Error::MalformedSpec("modules of quotients are built over right filters".into()));
    }
    let r = f.ring().clone();
    let mr = m.right_ring().ok_or(Error::MissingAction(Side::Right))?;
    if !same_ring(mr, &r) {
        return Err(Error::IncompatibleActions("module and filter live over different rings".into()));
    }
    let m = m.right_part();
    let k = minimal_ideal(f)?;
    let torsion = torsion_submodule(f, &m)?;
    let (reduced, proj) = m.quotient(&torsion)?;
    let (ideal_mod, ideal) = FiniteModule::regular_right(&r).submodule(&k)?;
    let mut pos = vec![NONE; r.size()];
    for (i, &x) in ideal.iter().enumerate() {
        pos[x] = i;
    }
    let mut maps = hom_set(&ideal_mod, &reduced);
    maps.sort();
    let index: HashMap<Vec<usize>, usize> = maps.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
    let c = maps.len();
    let lookup = |v: &Vec<usize>| -> Result<usize> {
        index.get(v).copied().ok_or_else(|| Error::InternalInconsistency(format!("{v:?} is not a homomorphism from I₀")))
    };

    let mut add = vec![0u32; c * c];
    for a in 0..c {
        for b in 0..c {
            let s: Vec<usize> = maps[a].iter().zip(&maps[b]).map(|(&x, &y)| reduced.add(x, y)).collect();
            add[a * c + b] = lookup(&s)? as u32;
        }
    }
    let zero = lookup(&vec![reduced.zero(); ideal.len()])?;
    let group = crate::finring::AbelianGroup::from_table(c, add, zero)?;

    let n = r.size();
    let mut act = vec![0u32; c * n];
    for a in 0..c {
        for s in 0..n {
            let v: Vec<usize> = ideal.iter().map(|&i| maps[a][pos[r.mul(s, i)]]).collect();
            act[a * n + s] = lookup(&v)? as u32;
        }
    }
    let module = FiniteModule::new(format!("{}_F", m.name()), group, Some(Action::new(r.clone(), act)), None)?;

    let mut q = Vec::with_capacity(m.size());
    for x in 0..m.size() {
        let v: Vec<usize> = ideal.iter().map(|&i| reduced.act_right(proj[x], i)).collect();
        q.push(lookup(&v)?);
    }
    let qm = QuotientModule { filter: f.clone(), base: m, torsion, reduced, proj, ideal, pos, maps, index, module, q };
    qm.check_invariants()?;
    Ok(qm)
}

impl QuotientModule {
    fn check_invariants(&self) -> Result<()> {
        if !self.base.is_hom_to(&self.module, &self.q) {
            return Err(Error::InternalInconsistency("q is not a module map".into()));
        }
        if kernel(&self.q, self.module.zero()) != self.torsion {
            return Err(Error::InternalInconsistency("ker q differs from T(M)".into()));
        }
        if torsion_unchecked(&self.filter, &self.module)?.len() != 1 {
            return Err(Error::InternalInconsistency("M_F has nonzero torsion".into()));
        }
        let image = Subset::from_members(self.size(), self.q.iter().copied());
        for f in 0..self.size() {
            let back = Subset::from_mask((0..self.ring().size()).map(|r| image.contains(self.module.act_right(f, r))).collect());
            if !self.filter.contains(&back) {
                return Err(Error::InternalInconsistency(format!("cokernel of q is not torsion at {f}")));
            }
        }
        Ok(())
    }

    pub fn filter(&self) -> &GabrielFilter {
        &self.filter
    }

    pub fn ring(&self) -> &RingRef {
        self.filter.ring()
    }

    pub fn base(&self) -> &FiniteModule {
        &self.base
    }

    pub fn min_ideal(&self) -> &Subset {
        self.filter.min_ideal()
    }

    /// Members of `I₀` in increasing order; carrier maps are indexed by position here.
    pub fn ideal_members(&self) -> &[usize] {
        &self.ideal
    }

    /// Position of a ring element inside `I₀`.
    pub fn ideal_position(&self, r: usize) -> Option<usize> {
        let p = self.pos[r];
        (p != NONE).then_some(p)
    }

    pub fn torsion(&self) -> &Subset {
        &self.torsion
    }

    /// `M/T(M)` and the projection onto it.
    pub fn reduced(&self) -> &FiniteModule {
        &self.reduced
    }

    pub fn projection(&self) -> &[usize] {
        &self.proj
    }

    /// Carrier maps, each a table over positions of `I₀`.
    pub fn carrier(&self) -> &[Vec<usize>] {
        &self.maps
    }

    pub fn size(&self) -> usize {
        self.maps.len()
    }

    /// `M_F` as a right `R`-module.
    pub fn module(&self) -> &FiniteModule {
        &self.module
    }

    pub fn q(&self) -> &[usize] {
        &self.q
    }

    pub fn q_kernel(&self) -> Subset {
        kernel(&self.q, self.module.zero())
    }

    pub fn lookup(&self, table: &[usize]) -> Option<usize> {
        self.index.get(table).copied()
    }

    /// `f(i)` for a carrier element `f` and a ring element `i ∈ I₀`.
    pub fn eval(&self, f: usize, i: usize) -> usize {
        self.maps[f][self.pos[i]]
    }

    /// `q̄: M/T(M) → M_F`, `c ↦ (i ↦ c·i)`. For `x ∈ I₀`, `f·x = q̄(f(x))`.
    pub fn qbar(&self, c: usize) -> usize {
        let v: Vec<usize> = self.ideal.iter().map(|&i| self.reduced.act_right(c, i)).collect();
        self.index[&v]
    }
}

/// `R_F` with its ring structure; the underlying module is `R_F` as a right `R`-module.
#[derive(Clone, Debug)]
pub struct QuotientRing {
    module: QuotientModule,
    ring: RingRef,
    lift: Vec<usize>,
}

pub fn ring_of_quotients(f: &GabrielFilter) -> Result<QuotientRing> {
    let r = f.ring();
    let qm = module_of_quotients(f, &FiniteModule::regular_right(r))?;
    let c = qm.size();
    // least element of I₀ over each class of R/T(R)
    let mut lift = vec![NONE; qm.reduced.size()];
    for (p, &x) in qm.ideal.iter().enumerate() {
        let cls = qm.proj[x];
        if lift[cls] == NONE {
            lift[cls] = p;
        }
    }
    let rz = qm.reduced.zero();
    for (a, fa) in qm.maps.iter().enumerate() {
        for (p, &x) in qm.ideal.iter().enumerate() {
            if qm.torsion.contains(x) && fa[p] != rz {
                return Err(Error::InternalInconsistency(format!("element {a} does not vanish on I₀ ∩ T(R) at {x}")));
            }
        }
    }
    let mut mul = vec![0u32; c * c];
    for a in 0..c {
        for b in 0..c {
            let mut v = Vec::with_capacity(qm.ideal.len());
            for &gx in &qm.maps[b] {
                let l = lift[gx];
                if l == NONE {
                    return Err(Error::InternalInconsistency(format!("g(I₀) leaves the image of I₀ at carrier {b}")));
                }
                v.push(qm.maps[a][l]);
            }
            mul[a * c + b] = qm.lookup(&v).ok_or_else(|| Error::InternalInconsistency("product is not in the carrier".into()))? as u32;
        }
    }
    let one = qm.q[r.one()];
    let ring = FiniteRing::new(format!("{}_F", r.name()), qm.module.group().clone(), mul, one, None)?;
    let qr = QuotientRing { module: qm, ring: RingRef::new(ring), lift };
    qr.check_structure()?;
    Ok(qr)
}

impl QuotientRing {
    fn check_structure(&self) -> Result<()> {
        let r = self.module.ring();
        let q = &self.module.q;
        for x in 0..r.size() {
            for y in 0..r.size() {
                if q[r.mul(x, y)] != self.ring.mul(q[x], q[y]) {
                    return Err(Error::InternalInconsistency(format!("q is not multiplicative at ({x}, {y})")));
                }
            }
        }
        for f in 0..self.ring.size() {
            for s in 0..r.size() {
                if self.ring.mul(f, q[s]) != self.module.module.act_right(f, s) {
                    return Err(Error::InternalInconsistency("ring product disagrees with the R-action".into()));
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn module(&self) -> &QuotientModule {
        &self.module
    }

    pub fn filter(&self) -> &GabrielFilter {
        &self.module.filter
    }

    pub fn q(&self) -> &[usize] {
        &self.module.q
    }

    pub fn size(&self) -> usize {
        self.ring.size()
    }

    /// Least position in `I₀` over a class of `R/T(R)`.
    pub fn lift(&self, class: usize) -> Option<usize> {
        let l = self.lift[class];
        (l != NONE).then_some(l)
    }

    /// `R_F` as a left `R`-module via `r·s = q(r)s`.
    pub fn as_left_module(&self) -> FiniteModule {
        let r = self.module.ring();
        let (n, c) = (r.size(), self.size());
        let mut t = vec![0u32; n * c];
        for x in 0..n {
            for s in 0..c {
                t[x * c + s] = self.ring.mul(self.module.q[x], s) as u32;
            }
        }
        FiniteModule::new_unchecked(self.ring.name(), self.ring.group().clone(), None, Some(Action::new(r.clone(), t)))
    }

    /// The right `R_F`-action on another module of quotients over the same filter,
    /// `(φ·s)(x) = φ(lift of s(x))`. Checked against the `R`-action along `q`.
    pub fn act_on(&self, qm: &QuotientModule) -> Result<FiniteModule> {
        if qm.filter != self.module.filter {
            return Err(Error::IncompatibleActions("modules of quotients over different filters".into()));
        }
        let (k, c) = (qm.size(), self.size());
        let mut t = vec![0u32; k * c];
        for phi in 0..k {
            for s in 0..c {
                let mut v = Vec::with_capacity(qm.ideal.len());
                for &sx in &self.module.maps[s] {
                    let l = self.lift[sx];
                    if l == NONE {
                        return Err(Error::InternalInconsistency("missing lift".into()));
                    }
                    v.push(qm.maps[phi][l]);
                }
                t[phi * c + s] = qm.lookup(&v).ok_or_else(|| Error::InternalInconsistency("R_F-action leaves the carrier".into()))? as u32;
            }
        }
        let m = FiniteModule::new(qm.module.name(), qm.module.group().clone(), Some(Action::new(self.ring.clone(), t)), None)?;
        for phi in 0..k {
            for r in 0..qm.ring().size() {
                if m.act_right(phi, self.module.q[r]) != qm.module.act_right(phi, r) {
                    return Err(Error::InternalInconsistency("R_F-action does not restrict to the R-action".into()));
                }
            }
        }
        Ok(m)
    }
}

/// `q₁₂: M_{F₁} → M_{F₂}` for `F₁ ⊆ F₂`, with `q₁₂∘q₁ = q₂` and the iterated quotient
/// `(M_{F₁})_{F₂} ≅ M_{F₂}` both verified.
pub fn q12_map(a: &QuotientModule, b: &QuotientModule) -> Result<Vec<usize>> {
    if !a.filter.is_subfilter_of(&b.filter) {
        return Err(Error::NotNested);
    }
    if a.base.size() != b.base.size() {
        return Err(Error::IncompatibleActions("modules of quotients of different modules".into()));
    }
    // π: M/T₁ → M/T₂ through any representative
    let mut pi = vec![NONE; a.reduced.size()];
    for x in 0..a.base.size() {
        pi[a.proj[x]] = b.proj[x];
    }
    let mut table = Vec::with_capacity(a.size());
    for f in &a.maps {
        let v: Vec<usize> = b.ideal.iter().map(|&x| pi[f[a.pos[x]]]).collect();
        table.push(b.lookup(&v).ok_or_else(|| Error::InternalInconsistency("q₁₂ image is not a homomorphism".into()))?);
    }
    for x in 0..a.base.size() {
        if table[a.q[x]] != b.q[x] {
            return Err(Error::InternalInconsistency(format!("q₁₂∘q₁ ≠ q₂ at {x}")));
        }
    }
    check_iterated(a, b, &table)?;
    Ok(table)
}

/// Builds `N = (M_{F₁})_{F₂}` and the map `i: N → M_{F₂}` determined by `i∘q₂' = q₁₂`.
fn check_iterated(a: &QuotientModule, b: &QuotientModule, q12: &[usize]) -> Result<()> {
    let n = module_of_quotients(&b.filter, &a.module)?;
    let mut lift = vec![NONE; n.reduced.size()];
    for s in 0..a.size() {
        let c = n.proj[s];
        if lift[c] == NONE {
            lift[c] = s;
        }
    }
    let mut iso = Vec::with_capacity(n.size());
    for h in &n.maps {
        let mut v = Vec::with_capacity(b.ideal.len());
        for &hx in h {
            let s = lift[hx];
            let target = q12[s];
            // f(x) is the element of M/T₂ whose q̄ equals f·x = q₁₂(s_x)
            let c = (0..b.reduced.size()).find(|&c| b.qbar(c) == target).ok_or_else(|| {
                Error::InternalInconsistency("q₁₂(s) is not in the image of M/T₂(M)".into())
            })?;
            v.push(c);
        }
        iso.push(b.lookup(&v).ok_or_else(|| Error::InternalInconsistency("i(h) is not a homomorphism".into()))?);
    }
    if !is_bijective(&iso, b.size()) {
        return Err(Error::InternalInconsistency("(M_F₁)_F₂ → M_F₂ is not bijective".into()));
    }
    for s in 0..a.size() {
        if iso[n.q[s]] != q12[s] {
            return Err(Error::InternalInconsistency("i∘q₂' ≠ q₁₂".into()));
        }
    }
    Ok(())
}

/// Verdicts of the two perfectness criteria.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectCertificate {
    /// `R_F ⊗_R R_F → R_F` bijective.
    pub multiplication_bijective: bool,
    /// `I ⊗_R R_F → R_F` injective for every right ideal.
    pub flat: bool,
    /// `F = {I : q(I)R_F = R_F}`.
    pub recovers_filter: bool,
    /// `R/I ⊗_R R_F → (R/I)_F` bijective for every right ideal.
    pub cyclic: bool,
    pub perfect: bool,
    pub witness: Option<String>,
}

pub fn is_perfect_filter(f: &GabrielFilter) -> Result<PerfectCertificate> {
    let qr = ring_of_quotients(f)?;
    perfect_certificate(&qr)
}

fn tensor_map(t: &crate::finring::TensorProduct, g: impl Fn(usize, usize) -> usize, add: impl Fn(usize, usize) -> usize, zero: usize) -> Vec<usize> {
    (0..t.size()).map(|z| t.representative(z).iter().fold(zero, |acc, &(x, y)| add(acc, g(x, y)))).collect()
}

pub fn perfect_certificate(qr: &QuotientRing) -> Result<PerfectCertificate> {
    let f = qr.filter();
    let r = f.ring();
    let s = qr.ring();
    let left = qr.as_left_module();
    let right = qr.module().module().clone();
    let q = qr.q();
    let mut witness = None;

    let t = tensor_over_r(&right, &left)?;
    let mul = tensor_map(&t, |x, y| s.mul(x, y), |a, b| s.add(a, b), s.zero());
    let multiplication_bijective = is_bijective(&mul, s.size());
    if !multiplication_bijective {
        witness = Some("R_F ⊗ R_F → R_F is not bijective".to_string());
    }

    let ideals = enumerate_ideals(r, Side::Right);
    let reg = FiniteModule::regular_right(r);
    let mut flat = true;
    let mut recovers_filter = true;
    let mut cyclic = true;
    for i in &ideals {
        let (im, emb) = reg.submodule(i)?;
        let t = tensor_over_r(&im, &left)?;
        let map = tensor_map(&t, |x, y| s.mul(q[emb[x]], y), |a, b| s.add(a, b), s.zero());
        if flat && !is_injective(&map, s.size()) {
            flat = false;
            witness.get_or_insert_with(|| format!("I ⊗ R_F → R_F not injective for I = {:?}", i.members()));
        }
        let gen = generate_ideal(s, Side::Right, i.members().iter().map(|&x| q[x]));
        if gen.is_full() != f.contains(i) {
            recovers_filter = false;
            witness.get_or_insert_with(|| format!("q(I)R_F = R_F disagrees with membership for I = {:?}", i.members()));
        }
        let (cyc, _) = reg.quotient(i)?;
        let qm = module_of_quotients(f, &cyc)?;
        let act = qr.act_on(&qm)?;
        let t = tensor_over_r(&cyc, &left)?;
        let map = tensor_map(&t, |m, y| act.act_right(qm.q()[m], y), |a, b| act.add(a, b), act.zero());
        if cyclic && !is_bijective(&map, act.size()) {
            cyclic = false;
            witness.get_or_insert_with(|| format!("R/I ⊗ R_F → (R/I)_F not bijective for I = {:?}", i.members()));
        }
    }
    let a = multiplication_bijective && flat && recovers_filter;
    if a != cyclic {
        return Err(Error::CriteriaDisagree(format!(
            "flat-epimorphism criterion {a}, cyclic-module criterion {cyclic} ({})",
            witness.unwrap_or_default()
        )));
    }
    Ok(PerfectCertificate { multiplication_bijective, flat, recovers_filter, cyclic, perfect: a, witness })
}

/// Join of the perfect faithful filters, or the maximal ones if the join fails.
#[derive(Clone, Debug)]
pub struct TotalReport {
    pub candidates: Vec<GabrielFilter>,
    pub filter: Option<GabrielFilter>,
    pub quotient: Option<QuotientRing>,
    pub maximal: Vec<GabrielFilter>,
    pub diagnostic: Option<String>,
}

pub fn total_filter(r: &RingRef) -> Result<TotalReport> {
    let filters = enumerate_gabriel_filters(r, Side::Right)?;
    let all = enumerate_ideals(r, Side::Right);
    let mut candidates = Vec::new();
    for f in &filters {
        if is_faithful(f) && is_perfect_filter(f)?.perfect {
            candidates.push(f.clone());
        }
    }
    let maximal: Vec<GabrielFilter> = candidates
        .iter()
        .filter(|f| !candidates.iter().any(|g| g != *f && f.is_subfilter_of(g)))
        .cloned()
        .collect();
    let mut joined = crate::gabriel::trivial_filter(r, Side::Right);
    for f in &candidates {
        joined = join(&joined, f, &all)?;
    }
    let ok = is_faithful(&joined) && is_perfect_filter(&joined)?.perfect;
    if ok {
        let quotient = ring_of_quotients(&joined)?;
        Ok(TotalReport { candidates, filter: Some(joined), quotient: Some(quotient), maximal, diagnostic: None })
    } else {
        Ok(TotalReport {
            candidates,
            filter: None,
            quotient: None,
            maximal,
            diagnostic: Some("join of the perfect faithful filters is not perfect and faithful".into()),
        })
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::finring::find_ring_isomorphism;
    use crate::gabriel::{filter_closure, improper_filter, lambek_filter, trivial_filter};

    fn z6_even() -> GabrielFilter {
        let r = Arc::new(FiniteRing::zmod(6));
        filter_closure(&r, &[Subset::from_members(6, [0, 2, 4])], Side::Right).unwrap()
    }

    #[test]
    fn z6_ring_of_quotients_is_z3() {
        let f = z6_even();
        let qr = ring_of_quotients(&f).unwrap();
        assert_eq!(qr.size(), 3);
        assert_eq!(qr.module().q_kernel().members(), &[0, 3]);
        assert!(find_ring_isomorphism(qr.ring(), &FiniteRing::zmod(3)).is_some());
    }

    #[test]
    fn every_lift_gives_the_same_product() {
        let t2 = Arc::new(FiniteRing::upper_triangular_2(2));
        for f in [lambek_filter(&t2, Side::Right).unwrap(), z6_even()] {
            let qr = ring_of_quotients(&f).unwrap();
            let qm = qr.module();
            for a in 0..qr.size() {
                for b in 0..qr.size() {
                    for (p, &gx) in qm.carrier()[b].iter().enumerate() {
                        let expected = qm.eval(qr.ring().mul(a, b), qm.ideal_members()[p]);
                        for (l, &x) in qm.ideal_members().iter().enumerate() {
                            if qm.projection()[x] == gx {
                                assert_eq!(qm.carrier()[a][l], expected);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn qmax_of_t2_is_the_matrix_ring() {
        let t2 = Arc::new(FiniteRing::upper_triangular_2(2));
        let qr = ring_of_quotients(&lambek_filter(&t2, Side::Right).unwrap()).unwrap();
        assert_eq!(qr.size(), 16);
        assert!(find_ring_isomorphism(qr.ring(), &FiniteRing::full_matrix_2(2)).is_some());
    }

    #[test]
    fn degenerate_filters() {
        let r = Arc::new(FiniteRing::zmod(4));
        let triv = module_of_quotients(&trivial_filter(&r, Side::Right), &FiniteModule::regular_right(&r)).unwrap();
        assert_eq!(triv.size(), 4);
        assert!(is_bijective(triv.q(), 4));
        let imp = ring_of_quotients(&improper_filter(&r, Side::Right)).unwrap();
        assert_eq!(imp.size(), 1);
    }

    #[test]
    fn q12_from_trivial_to_even_filter() {
        let f2 = z6_even();
        let r = f2.ring().clone();
        let m = FiniteModule::regular_right(&r);
        let a = module_of_quotients(&trivial_filter(&r, Side::Right), &m).unwrap();
        let b = module_of_quotients(&f2, &m).unwrap();
        let t = q12_map(&a, &b).unwrap();
        assert_eq!(kernel(&t, b.module().zero()).len(), 2);
        assert!(matches!(q12_map(&b, &a), Err(Error::NotNested)));
        let same = q12_map(&b, &b).unwrap();
        assert_eq!(same, (0..b.size()).collect::<Vec<_>>());
    }

    #[test]
    fn perfect_examples() {
        assert!(is_perfect_filter(&z6_even()).unwrap().perfect);
        let d = Arc::new(FiniteRing::dual_numbers_f2());
        assert!(is_perfect_filter(&trivial_filter(&d, Side::Right)).unwrap().perfect);
        assert!(is_perfect_filter(&improper_filter(&d, Side::Right)).unwrap().perfect);
        let total = total_filter(&Arc::new(FiniteRing::zmod(6))).unwrap();
        assert_eq!(total.quotient.unwrap().size(), 6);
    }
}
