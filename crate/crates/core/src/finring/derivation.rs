//! Ring derivations and δ-derivations of modules.

use super::group::AbelianGroup;
use super::module::FiniteModule;
use super::ring::FiniteRing;
use super::search::{additive_rule, Search};
use crate::error::{Error, Result};

/// An additive self-map given by its table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub name: String,
    pub table: Vec<usize>,
}

impl Derivation {
    pub fn new(name: impl Into<String>, table: Vec<usize>) -> Self {
        Derivation { name: name.into(), table }
    }

    pub fn zero(size: usize, zero: usize) -> Self {
        Derivation::new("zero", vec![zero; size])
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn is_zero(&self, zero: usize) -> bool {
        self.table.iter().all(|&y| y == zero)
    }
}

fn check_shape(table: &[usize], n: usize) -> Result<()> {
    if table.len() != n || table.iter().any(|&y| y >= n) {
        return Err(Error::MalformedSpec(format!("derivation table must list {n} indices below {n}")));
    }
    Ok(())
}

fn check_additive(g: &AbelianGroup, d: &[usize]) -> Result<()> {
    let n = g.size();
    for x in 0..n {
        for y in 0..n {
            if d[g.add(x, y)] != g.add(d[x], d[y]) {
                return Err(Error::LawViolation { law: "additivity", witness: vec![x, y] });
            }
        }
    }
    Ok(())
}

/// Additivity and `δ(rs) = δ(r)s + rδ(s)` over all pairs.
pub fn check_ring_derivation(r: &FiniteRing, d: &[usize]) -> Result<()> {
    check_shape(d, r.size())?;
    check_additive(r.group(), d)?;
    let n = r.size();
    for x in 0..n {
        for y in 0..n {
            if d[r.mul(x, y)] != r.add(r.mul(d[x], y), r.mul(x, d[y])) {
                return Err(Error::LawViolation { law: "Leibniz rule", witness: vec![x, y] });
            }
        }
    }
    Ok(())
}

pub fn is_ring_derivation(r: &FiniteRing, d: &[usize]) -> bool {
    check_ring_derivation(r, d).is_ok()
}

/// δ-derivation laws for each present action: `d(xr) = d(x)r + xδ_R(r)` on the right and
/// `d(rx) = δ_S(r)x + r d(x)` on the left.
pub fn check_module_derivation_with(
    m: &FiniteModule,
    delta_right: Option<&[usize]>,
    delta_left: Option<&[usize]>,
    d: &[usize],
) -> Result<()> {
    check_shape(d, m.size())?;
    check_additive(m.group(), d)?;
    if let Some(r) = m.right_ring() {
        let delta = delta_right.ok_or_else(|| Error::MalformedSpec("missing derivation for right ring".into()))?;
        for x in 0..m.size() {
            for s in 0..r.size() {
                let lhs = d[m.act_right(x, s)];
                let rhs = m.add(m.act_right(d[x], s), m.act_right(x, delta[s]));
                if lhs != rhs {
                    return Err(Error::LawViolation { law: "right Leibniz rule", witness: vec![x, s] });
                }
            }
        }
    }
    if let Some(r) = m.left_ring() {
        let delta = delta_left.ok_or_else(|| Error::MalformedSpec("missing derivation for left ring".into()))?;
        for x in 0..m.size() {
            for s in 0..r.size() {
                let lhs = d[m.act_left(s, x)];
                let rhs = m.add(m.act_left(delta[s], x), m.act_left(s, d[x]));
                if lhs != rhs {
                    return Err(Error::LawViolation { law: "left Leibniz rule", witness: vec![s, x] });
                }
            }
        }
    }
    Ok(())
}

/// As [`check_module_derivation_with`], with the same δ on both sides.
pub fn check_module_derivation(m: &FiniteModule, delta: &[usize], d: &[usize]) -> Result<()> {
    check_module_derivation_with(m, Some(delta), Some(delta), d)
}

/// All derivations of `r`, found by propagation from additive generators.
pub fn enumerate_derivations(r: &FiniteRing) -> Vec<Derivation> {
    let tables = Search::new(r.size(), r.size(), |x, a, out| {
        additive_rule(r.group(), r.group(), x, a, out);
        let dx = a[x] as usize;
        for (y, &dy) in a.iter().enumerate() {
            if dy != super::search::UNSET {
                let dy = dy as usize;
                out.push((r.mul(x, y), r.add(r.mul(dx, y), r.mul(x, dy))));
                out.push((r.mul(y, x), r.add(r.mul(dy, x), r.mul(y, dx))));
            }
        }
    })
    .seed(r.zero(), r.zero())
    .seed(r.one(), r.zero())
    .run();
    name_derivations(r, tables)
}

/// Oracle: every additive map (via generator images) filtered by the Leibniz rule.
pub fn enumerate_derivations_exhaustive(r: &FiniteRing) -> Result<Vec<Derivation>> {
    const BOUND: usize = 16;
    if r.size() > BOUND {
        return Err(Error::SearchSpaceTooLarge { size: r.size(), bound: BOUND });
    }
    let tables = additive_maps(r.group(), r.group()).into_iter().filter(|d| is_ring_derivation(r, d)).collect();
    Ok(name_derivations(r, tables))
}

fn name_derivations(r: &FiniteRing, mut tables: Vec<Vec<usize>>) -> Vec<Derivation> {
    tables.sort();
    let inner: Vec<(usize, Vec<usize>)> = (0..r.size()).map(|a| (a, inner_derivation(r, a))).collect();
    let mut k = 0;
    tables
        .into_iter()
        .map(|t| {
            let name = if t.iter().all(|&y| y == r.zero()) {
                "zero".to_string()
            } else if let Some((a, _)) = inner.iter().find(|(_, i)| *i == t) {
                format!("ad({})", r.element_name(*a))
            } else {
                k += 1;
                format!("d{k}")
            };
            Derivation::new(name, t)
        })
        .collect()
}

/// The inner derivation `x ↦ ax − xa`.
pub fn inner_derivation(r: &FiniteRing, a: usize) -> Vec<usize> {
    (0..r.size()).map(|x| r.sub(r.mul(a, x), r.mul(x, a))).collect()
}

/// Every group homomorphism `dom → cod`, from generator images that respect the relations.
pub fn additive_maps(dom: &AbelianGroup, cod: &AbelianGroup) -> Vec<Vec<usize>> {
    let p = dom.presentation();
    let k = p.rank();
    let m = cod.size();
    let mut out = Vec::new();
    let mut images = vec![0usize; k];
    loop {
        let ok = p.relations.iter().all(|rel| {
            let mut acc = cod.zero();
            for (c, &img) in rel.iter().zip(&images) {
                acc = cod.add(acc, cod.scale(*c, img));
            }
            acc == cod.zero()
        });
        if ok {
            let table = p
                .coords
                .iter()
                .map(|c| {
                    let mut acc = cod.zero();
                    for (cc, &img) in c.iter().zip(&images) {
                        acc = cod.add(acc, cod.scale(*cc, img));
                    }
                    acc
                })
                .collect();
            out.push(table);
        }
        // next tuple in mixed radix
        let mut i = 0;
        loop {
            if i == k {
                out.sort();
                return out;
            }
            images[i] += 1;
            if images[i] < m {
                break;
            }
            images[i] = 0;
            i += 1;
        }
    }
}

/// All δ-derivations of `m` (for each present action, with the given δ), optionally capped.
pub fn enumerate_module_derivations(
    m: &FiniteModule,
    delta_right: Option<&[usize]>,
    delta_left: Option<&[usize]>,
    limit: usize,
) -> Vec<Vec<usize>> {
    let right = m.right_ring().map(|r| (r.additive_generators(), delta_right.expect("right δ")));
    let left = m.left_ring().map(|r| (r.additive_generators(), delta_left.expect("left δ")));
    let found = Search::new(m.size(), m.size(), |x, a, out| {
        additive_rule(m.group(), m.group(), x, a, out);
        let dx = a[x] as usize;
        if let Some((gens, delta)) = &right {
            for &g in gens {
                out.push((m.act_right(x, g), m.add(m.act_right(dx, g), m.act_right(x, delta[g]))));
            }
        }
        if let Some((gens, delta)) = &left {
            for &g in gens {
                out.push((m.act_left(g, x), m.add(m.act_left(delta[g], x), m.act_left(g, dx))));
            }
        }
    })
    .seed(m.zero(), m.zero())
    .limit(limit)
    .run();
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z6_has_only_the_zero_derivation() {
        let r = FiniteRing::zmod(6);
        let ders = enumerate_derivations(&r);
        assert_eq!(ders.len(), 1);
        assert!(ders[0].is_zero(0));
    }

    #[test]
    fn dual_numbers_have_four_derivations() {
        let r = FiniteRing::dual_numbers_f2();
        let ders = enumerate_derivations(&r);
        assert_eq!(ders.len(), 4);
        let eps = r.element("e").unwrap();
        let mut images: Vec<usize> = ders.iter().map(|d| d.apply(eps)).collect();
        images.sort();
        assert_eq!(images, vec![0, 1, 2, 3]);
        assert_eq!(ders, enumerate_derivations_exhaustive(&r).unwrap());
    }

    #[test]
    fn t2_derivations_include_the_four_inner_ones() {
        let r = FiniteRing::upper_triangular_2(2);
        let ders = enumerate_derivations(&r);
        let mut inner: Vec<Vec<usize>> = (0..8).map(|a| inner_derivation(&r, a)).collect();
        inner.sort();
        inner.dedup();
        assert_eq!(inner.len(), 4);
        for i in &inner {
            assert!(ders.iter().any(|d| &d.table == i));
        }
        assert_eq!(ders, enumerate_derivations_exhaustive(&r).unwrap());
    }

    #[test]
    fn corrupted_table_reports_witness() {
        let r = FiniteRing::dual_numbers_f2();
        let bad = vec![0, 1, 0, 1];
        assert!(matches!(check_ring_derivation(&r, &bad), Err(Error::LawViolation { .. })));
    }

    #[test]
    fn additive_maps_of_z4_to_z2() {
        let maps = additive_maps(&AbelianGroup::cyclic(4), &AbelianGroup::cyclic(2));
        assert_eq!(maps.len(), 2);
    }
}
