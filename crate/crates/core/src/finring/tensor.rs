//! Tensor products of finite abelian groups and modules, and the ring `S ⊗ℤ R^op`.
//!
//! Both factors are presented by generators and relations; the tensor product is
//! generated by the pairs `e_i ⊗ f_j` modulo the tensored relations (and, over a
//! ring, the balance relations). The quotient is computed by [`SnfQuotient`].

use std::sync::Arc;

use super::group::{gcd, AbelianGroup, Presentation};
use super::module::{same_ring, Action, FiniteModule};
use super::ring::{FiniteRing, RingRef};
use super::snf::SnfQuotient;
use crate::error::{Error, Result};

/// `A ⊗ B` together with the bilinear map and a pure-tensor expansion of every element.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    module: FiniteModule,
    left_size: usize,
    right_size: usize,
    pure: Vec<u32>,
    reps: Vec<Vec<(usize, usize)>>,
}

impl TensorProduct {
    pub fn module(&self) -> &FiniteModule {
        &self.module
    }

    pub fn group(&self) -> &AbelianGroup {
        self.module.group()
    }

    pub fn size(&self) -> usize {
        self.module.size()
    }

    /// The class of `x ⊗ y`.
    #[inline]
    pub fn pure(&self, x: usize, y: usize) -> usize {
        self.pure[x * self.right_size + y] as usize
    }

    /// Pure tensors summing to `z`.
    pub fn representative(&self, z: usize) -> &[(usize, usize)] {
        &self.reps[z]
    }

    pub fn factor_sizes(&self) -> (usize, usize) {
        (self.left_size, self.right_size)
    }
}

struct Raw {
    snf: SnfQuotient,
    pure: Vec<u32>,
    reps: Vec<Vec<(usize, usize)>>,
}

fn pair_index(l: usize, i: usize, j: usize) -> usize {
    i * l + j
}

fn build(a: &AbelianGroup, b: &AbelianGroup, pa: &Presentation, pb: &Presentation, extra: Vec<Vec<i64>>) -> Raw {
    let (k, l) = (pa.rank(), pb.rank());
    let ngens = k * l;
    let mut relations = extra;
    for rel in &pa.relations {
        for j in 0..l {
            let mut row = vec![0i64; ngens];
            for (i, &c) in rel.iter().enumerate() {
                row[pair_index(l, i, j)] += c;
            }
            relations.push(row);
        }
    }
    for rel in &pb.relations {
        for i in 0..k {
            let mut row = vec![0i64; ngens];
            for (j, &c) in rel.iter().enumerate() {
                row[pair_index(l, i, j)] += c;
            }
            relations.push(row);
        }
    }
    let modulus = gcd(pa.exponent, pb.exponent);
    let snf = SnfQuotient::new(ngens, &relations, modulus);
    let (na, nb) = (a.size(), b.size());
    let mut pure = vec![0u32; na * nb];
    let mut w = vec![0i64; ngens];
    for x in 0..na {
        for y in 0..nb {
            for i in 0..k {
                for j in 0..l {
                    w[pair_index(l, i, j)] = pa.coords[x][i] * pb.coords[y][j];
                }
            }
            pure[x * nb + y] = snf.reduce(&w) as u32;
        }
    }
    let reps = (0..snf.order())
        .map(|z| {
            let v = snf.representative(z);
            let mut terms = Vec::new();
            for i in 0..k {
                for j in 0..l {
                    let c = v[pair_index(l, i, j)];
                    if c != 0 {
                        terms.push((a.scale(c, pa.gens[i]), pb.gens[j]));
                    }
                }
            }
            terms
        })
        .collect();
    Raw { snf, pure, reps }
}

/// `A ⊗ℤ B`.
pub fn tensor_over_z(a: &AbelianGroup, b: &AbelianGroup) -> TensorProduct {
    let (pa, pb) = (a.presentation(), b.presentation());
    let raw = build(a, b, &pa, &pb, Vec::new());
    let group = raw.snf.group();
    TensorProduct {
        module: FiniteModule::new_unchecked("A(x)B", group, None, None),
        left_size: a.size(),
        right_size: b.size(),
        pure: raw.pure,
        reps: raw.reps,
    }
}

/// `M ⊗_R N` for a right `R`-module `M` and a left `R`-module `N`. A left action on `M`
/// and a right action on `N` pass to the product.
pub fn tensor_over_r(m: &FiniteModule, n: &FiniteModule) -> Result<TensorProduct> {
    let r = m.right_ring().ok_or(Error::MissingAction(crate::error::Side::Right))?.clone();
    let r2 = n.left_ring().ok_or(Error::MissingAction(crate::error::Side::Left))?;
    if !same_ring(&r, r2) {
        return Err(Error::IncompatibleActions("factors are modules over different rings".into()));
    }
    let (pa, pb) = (m.group().presentation(), n.group().presentation());
    let (k, l) = (pa.rank(), pb.rank());
    let mut balance = Vec::new();
    for g in r.additive_generators() {
        for i in 0..k {
            for j in 0..l {
                let mut row = vec![0i64; k * l];
                let xg = m.act_right(pa.gens[i], g);
                for (p, &c) in pa.coords[xg].iter().enumerate() {
                    row[pair_index(l, p, j)] += c;
                }
                let gy = n.act_left(g, pb.gens[j]);
                for (q, &c) in pb.coords[gy].iter().enumerate() {
                    row[pair_index(l, i, q)] -= c;
                }
                balance.push(row);
            }
        }
    }
    let raw = build(m.group(), n.group(), &pa, &pb, balance);
    let group = raw.snf.group();
    let size = group.size();
    let nb = n.size();
    let pure_of = |x: usize, y: usize| raw.pure[x * nb + y] as usize;
    let sum = |terms: &mut dyn Iterator<Item = usize>| terms.fold(group.zero(), |acc, t| group.add(acc, t));

    let left = match m.left() {
        Some(a) => {
            let s = a.ring();
            let mut table = vec![0u32; s.size() * size];
            for t in 0..s.size() {
                for z in 0..size {
                    table[t * size + z] = sum(&mut raw.reps[z].iter().map(|&(x, y)| pure_of(m.act_left(t, x), y))) as u32;
                }
                for x in 0..m.size() {
                    for y in 0..nb {
                        if table[t * size + pure_of(x, y)] as usize != pure_of(m.act_left(t, x), y) {
                            return Err(Error::IllDefined("left action on the tensor product".into()));
                        }
                    }
                }
            }
            Some(Action::new(s.clone(), table))
        }
        None => None,
    };
    let right = match n.right() {
        Some(a) => {
            let u = a.ring();
            let mut table = vec![0u32; size * u.size()];
            for z in 0..size {
                for t in 0..u.size() {
                    table[z * u.size() + t] =
                        sum(&mut raw.reps[z].iter().map(|&(x, y)| pure_of(x, n.act_right(y, t)))) as u32;
                }
            }
            for x in 0..m.size() {
                for y in 0..nb {
                    for t in 0..u.size() {
                        if table[pure_of(x, y) * u.size() + t] as usize != pure_of(x, n.act_right(y, t)) {
                            return Err(Error::IllDefined("right action on the tensor product".into()));
                        }
                    }
                }
            }
            Some(Action::new(u.clone(), table))
        }
        None => None,
    };
    let module = FiniteModule::new_unchecked(format!("{}(x){}", m.name(), n.name()), group, right, left);
    Ok(TensorProduct { module, left_size: m.size(), right_size: nb, pure: raw.pure, reps: raw.reps })
}

/// The ring `S ⊗ℤ R^op` with `(a⊗b)(c⊗d) = ac ⊗ db`.
#[derive(Clone, Debug)]
pub struct TensorRing {
    ring: RingRef,
    s: RingRef,
    r: RingRef,
    tensor: TensorProduct,
}

impl TensorRing {
    pub fn new(s: &RingRef, r: &RingRef) -> Result<Self> {
        let tensor = tensor_over_z(s.group(), r.group());
        let g = tensor.group().clone();
        let n = g.size();
        let mut mul = vec![0u32; n * n];
        for z in 0..n {
            for w in 0..n {
                let mut acc = g.zero();
                for &(a, b) in tensor.representative(z) {
                    for &(c, d) in tensor.representative(w) {
                        acc = g.add(acc, tensor.pure(s.mul(a, c), r.mul(d, b)));
                    }
                }
                mul[z * n + w] = acc as u32;
            }
        }
        let one = tensor.pure(s.one(), r.one());
        let name = format!("{}(x){}^op", s.name(), r.name());
        let ring = FiniteRing::from_parts_unchecked(name, g, mul, one);
        ring.validate().map_err(|e| Error::InternalInconsistency(format!("tensor ring: {e}")))?;
        for a in 0..s.size() {
            for b in 0..r.size() {
                for c in 0..s.size() {
                    for d in 0..r.size() {
                        let lhs = ring.mul(tensor.pure(a, b), tensor.pure(c, d));
                        if lhs != tensor.pure(s.mul(a, c), r.mul(d, b)) {
                            return Err(Error::InternalInconsistency("tensor ring product on pure tensors".into()));
                        }
                    }
                }
            }
        }
        Ok(TensorRing { ring: Arc::new(ring), s: s.clone(), r: r.clone(), tensor })
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    /// The factor acting on the right of a bimodule.
    pub fn first(&self) -> &RingRef {
        &self.s
    }

    /// The factor acting on the left of a bimodule.
    pub fn second(&self) -> &RingRef {
        &self.r
    }

    #[inline]
    pub fn pure(&self, a: usize, b: usize) -> usize {
        self.tensor.pure(a, b)
    }

    pub fn representative(&self, z: usize) -> &[(usize, usize)] {
        self.tensor.representative(z)
    }

    pub fn size(&self) -> usize {
        self.ring.size()
    }

    /// Additive span of `{a ⊗ b : a ∈ A, b ∈ B}`.
    pub fn span_of_pure(&self, a: &[usize], b: &[usize]) -> Vec<bool> {
        let gens: Vec<usize> = a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).map(|(x, y)| self.pure(x, y)).collect();
        self.ring.group().span(gens)
    }
}

/// An `R`-`S`-bimodule as a right `S ⊗ R^op`-module: `x·(a⊗b) = b·x·a`.
pub fn bimodule_to_right_module(m: &FiniteModule, t: &TensorRing) -> Result<FiniteModule> {
    let (Some(sr), Some(rl)) = (m.right_ring(), m.left_ring()) else {
        return Err(Error::IncompatibleActions("bimodule needs both actions".into()));
    };
    if !same_ring(sr, t.first()) || !same_ring(rl, t.second()) {
        return Err(Error::IncompatibleActions("actions are not over the tensor factors".into()));
    }
    let n = t.size();
    let mut table = vec![0u32; m.size() * n];
    for x in 0..m.size() {
        for z in 0..n {
            let mut acc = m.zero();
            for &(a, b) in t.representative(z) {
                acc = m.add(acc, m.act_left(b, m.act_right(x, a)));
            }
            table[x * n + z] = acc as u32;
        }
    }
    let out = FiniteModule::new_unchecked(m.name().to_string(), m.group().clone(), Some(Action::new(t.ring().clone(), table)), None);
    for x in 0..m.size() {
        for a in 0..t.first().size() {
            for b in 0..t.second().size() {
                let lhs = out.act_right(x, t.pure(a, b));
                let rhs = m.act_left(b, m.act_right(x, a));
                if lhs != rhs {
                    return Err(Error::IncompatibleActions(format!("x={x}, a={a}, b={b}")));
                }
            }
        }
    }
    out.validate().map_err(|e| Error::IncompatibleActions(e.to_string()))?;
    Ok(out)
}

/// Inverse of [`bimodule_to_right_module`]: `x·s = x(s⊗1)` and `r·x = x(1⊗r)`.
pub fn right_module_to_bimodule(m: &FiniteModule, t: &TensorRing) -> Result<FiniteModule> {
    let tr = m.right_ring().ok_or(Error::MissingAction(crate::error::Side::Right))?;
    if !same_ring(tr, t.ring()) {
        return Err(Error::IncompatibleActions("module is not over the tensor ring".into()));
    }
    let (s, r) = (t.first(), t.second());
    let size = m.size();
    let mut right = vec![0u32; size * s.size()];
    for x in 0..size {
        for a in 0..s.size() {
            right[x * s.size() + a] = m.act_right(x, t.pure(a, r.one())) as u32;
        }
    }
    let mut left = vec![0u32; r.size() * size];
    for b in 0..r.size() {
        for x in 0..size {
            left[b * size + x] = m.act_right(x, t.pure(s.one(), b)) as u32;
        }
    }
    Ok(FiniteModule::new_unchecked(
        m.name().to_string(),
        m.group().clone(),
        Some(Action::new(s.clone(), right)),
        Some(Action::new(r.clone(), left)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::search::find_ring_isomorphism;
    use crate::finring::subset::Subset;

    #[test]
    fn cyclic_tensor_orders() {
        let t = tensor_over_z(&AbelianGroup::cyclic(6), &AbelianGroup::cyclic(6));
        assert_eq!(t.size(), 6);
        assert_eq!(tensor_over_z(&AbelianGroup::cyclic(4), &AbelianGroup::cyclic(3)).size(), 1);
        let e = AbelianGroup::from_orders(&[2, 2, 2]);
        assert_eq!(tensor_over_z(&e, &e).size(), 512);
    }

    #[test]
    fn pure_tensors_are_bilinear() {
        let a = AbelianGroup::from_orders(&[2, 4]);
        let b = AbelianGroup::from_orders(&[6]);
        let t = tensor_over_z(&a, &b);
        let g = t.group();
        for x in 0..a.size() {
            for y in 0..b.size() {
                for x2 in 0..a.size() {
                    assert_eq!(t.pure(a.add(x, x2), y), g.add(t.pure(x, y), t.pure(x2, y)));
                }
                for y2 in 0..b.size() {
                    assert_eq!(t.pure(x, b.add(y, y2)), g.add(t.pure(x, y), t.pure(x, y2)));
                }
            }
        }
        for z in 0..t.size() {
            let s = t.representative(z).iter().fold(g.zero(), |acc, &(x, y)| g.add(acc, t.pure(x, y)));
            assert_eq!(s, z);
        }
    }

    #[test]
    fn tensor_over_z6_examples() {
        let r = Arc::new(FiniteRing::zmod(6));
        let reg = FiniteModule::regular_bimodule(&r);
        let (q3, _) = reg.quotient(&Subset::from_members(6, [0, 3])).unwrap();
        let t = tensor_over_r(&q3.right_part(), &q3.left_part()).unwrap();
        assert_eq!(t.size(), 3);
        let (even, _) = reg.submodule(&Subset::from_members(6, [0, 2, 4])).unwrap();
        let (q2, _) = reg.quotient(&Subset::from_members(6, [0, 2, 4])).unwrap();
        assert_eq!(tensor_over_r(&even.right_part(), &q2.left_part()).unwrap().size(), 1);
        let unit = tensor_over_r(&reg.right_part(), &q3.left_part()).unwrap();
        let canon: Vec<usize> = (0..q3.size()).map(|x| unit.pure(r.one(), x)).collect();
        assert!(crate::finring::module::is_bijective(&canon, unit.size()));
    }

    #[test]
    fn tensor_rings() {
        let z6 = Arc::new(FiniteRing::zmod(6));
        let t = TensorRing::new(&z6, &z6).unwrap();
        assert_eq!(t.size(), 6);
        assert!(find_ring_isomorphism(t.ring(), &z6).is_some());
        assert_eq!(t.ring().one(), t.pure(1, 1));
        let dual = Arc::new(FiniteRing::dual_numbers_f2());
        assert_eq!(TensorRing::new(&dual, &dual).unwrap().size(), 16);
    }

    #[test]
    fn bimodule_round_trip() {
        let r = Arc::new(FiniteRing::upper_triangular_2(2));
        let t = TensorRing::new(&r, &r).unwrap();
        let m = FiniteModule::regular_bimodule(&r);
        let mt = bimodule_to_right_module(&m, &t).unwrap();
        for x in 0..8 {
            assert_eq!(mt.act_right(x, t.ring().one()), x);
        }
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(mt.act_right(r.one(), t.pure(a, b)), r.mul(b, a));
            }
        }
        let back = right_module_to_bimodule(&mt, &t).unwrap();
        back.validate().unwrap();
        for x in 0..8 {
            for s in 0..8 {
                assert_eq!(back.act_right(x, s), m.act_right(x, s));
                assert_eq!(back.act_left(s, x), m.act_left(s, x));
            }
        }
    }
}
