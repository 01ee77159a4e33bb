//! Finite abelian groups given by an addition table.

use crate::error::{Error, Result};

/// A finite abelian group on the dense carrier `0..size`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    size: usize,
    add: Vec<u32>,
    neg: Vec<u32>,
    zero: usize,
}

impl AbelianGroup {
    /// Builds a group from a row-major `size × size` table, checking every axiom.
    pub fn from_table(size: usize, add: Vec<u32>, zero: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::MalformedSpec("carrier must be non-empty".into()));
        }
        if add.len() != size * size {
            return Err(Error::MalformedSpec(format!(
                "addition table has {} entries, expected {}",
                add.len(),
                size * size
            )));
        }
        if zero >= size {
            return Err(Error::MalformedSpec(format!("zero index {zero} out of range")));
        }
        if let Some(pos) = add.iter().position(|&v| v as usize >= size) {
            return Err(Error::MalformedSpec(format!(
                "addition entry ({}, {}) = {} out of range",
                pos / size,
                pos % size,
                add[pos]
            )));
        }
        let at = |a: usize, b: usize| add[a * size + b] as usize;
        for a in 0..size {
            if at(zero, a) != a || at(a, zero) != a {
                return Err(Error::AxiomViolation { axiom: "additive identity", witness: vec![a] });
            }
            for b in 0..size {
                if at(a, b) != at(b, a) {
                    return Err(Error::AxiomViolation { axiom: "additive commutativity", witness: vec![a, b] });
                }
            }
        }
        for a in 0..size {
            for b in 0..size {
                let ab = at(a, b);
                for c in 0..size {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::AxiomViolation {
                            axiom: "additive associativity",
                            witness: vec![a, b, c],
                        });
                    }
                }
            }
        }
        let mut neg = vec![0u32; size];
        for a in 0..size {
            match (0..size).find(|&b| at(a, b) == zero) {
                Some(b) => neg[a] = b as u32,
                None => return Err(Error::AxiomViolation { axiom: "additive inverse", witness: vec![a] }),
            }
        }
        Ok(AbelianGroup { size, add, neg, zero })
    }

    /// Trusted constructor for tables produced internally by a verified construction.
    pub(crate) fn from_table_unchecked(size: usize, add: Vec<u32>, zero: usize) -> Self {
        let mut neg = vec![0u32; size];
        for a in 0..size {
            neg[a] = (0..size).find(|&b| add[a * size + b] as usize == zero).expect("inverse") as u32;
        }
        AbelianGroup { size, add, neg, zero }
    }

    /// The cyclic group of order `n`, elements in their natural order.
    pub fn cyclic(n: usize) -> Self {
        let add = (0..n * n).map(|i| ((i / n + i % n) % n) as u32).collect();
        Self::from_table_unchecked(n, add, 0)
    }

    /// Mixed-radix product of cyclic groups; element index `Σ c_i · Π_{j<i} n_j`.
    pub fn from_orders(orders: &[u64]) -> Self {
        let size: usize = orders.iter().map(|&o| o as usize).product();
        let digits = |mut x: usize| -> Vec<u64> {
            orders
                .iter()
                .map(|&o| {
                    let d = (x % o as usize) as u64;
                    x /= o as usize;
                    d
                })
                .collect()
        };
        let all: Vec<Vec<u64>> = (0..size).map(digits).collect();
        let mut add = vec![0u32; size * size];
        for a in 0..size {
            for b in 0..size {
                let mut idx = 0usize;
                let mut radix = 1usize;
                for (i, &o) in orders.iter().enumerate() {
                    idx += (((all[a][i] + all[b][i]) % o) as usize) * radix;
                    radix *= o as usize;
                }
                add[a * size + b] = idx as u32;
            }
        }
        Self::from_table_unchecked(size, add, 0)
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn zero(&self) -> usize {
        self.zero
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b] as usize
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn table(&self) -> &[u32] {
        &self.add
    }

    /// `k · x` for a possibly negative integer `k`.
    pub fn scale(&self, k: i64, x: usize) -> usize {
        let mut base = if k < 0 { self.neg(x) } else { x };
        let mut k = k.unsigned_abs();
        let mut acc = self.zero;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn order_of(&self, x: usize) -> u64 {
        let mut k = 1u64;
        let mut y = x;
        while y != self.zero {
            y = self.add(y, x);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> u64 {
        (0..self.size).map(|x| self.order_of(x)).fold(1, lcm)
    }

    /// Subgroup generated by `gens`, as a membership mask.
    pub fn span(&self, gens: impl IntoIterator<Item = usize>) -> Vec<bool> {
        let mut mask = vec![false; self.size];
        let mut members = vec![self.zero];
        mask[self.zero] = true;
        for g in gens {
            self.extend_span(&mut mask, &mut members, g);
        }
        mask
    }

    /// Adds `g` to the subgroup described by `mask`/`members`, in place.
    pub(crate) fn extend_span(&self, mask: &mut [bool], members: &mut Vec<usize>, g: usize) {
        if mask[g] {
            return;
        }
        let base: Vec<usize> = members.clone();
        let mut shift = g;
        while !mask[shift] {
            for &s in &base {
                let y = self.add(s, shift);
                mask[y] = true;
                members.push(y);
            }
            shift = self.add(shift, g);
        }
    }

    /// A triangular presentation: greedy generators, relations, and per-element coordinates.
    pub fn presentation(&self) -> Presentation {
        let mut gens = Vec::new();
        let mut rel_orders = Vec::new();
        let mut rel_tails: Vec<Vec<i64>> = Vec::new();
        let mut coords: Vec<Option<Vec<i64>>> = vec![None; self.size];
        coords[self.zero] = Some(Vec::new());
        let mut members = vec![self.zero];
        for g in 0..self.size {
            if coords[g].is_some() {
                continue;
            }
            let k = gens.len();
            // relative order of g modulo the current span
            let mut o = 1u64;
            let mut y = g;
            while coords[y].is_none() {
                y = self.add(y, g);
                o += 1;
            }
            let tail = coords[y].clone().unwrap();
            let base = members.clone();
            let mut shift = self.zero;
            for c in 1..o {
                shift = self.add(shift, g);
                for &s in &base {
                    let z = self.add(s, shift);
                    let mut v = coords[s].clone().unwrap();
                    v.resize(k, 0);
                    v.push(c as i64);
                    coords[z] = Some(v);
                    members.push(z);
                }
            }
            gens.push(g);
            rel_orders.push(o);
            rel_tails.push(tail);
        }
        let k = gens.len();
        let coords: Vec<Vec<i64>> = coords
            .into_iter()
            .map(|c| {
                let mut v = c.unwrap();
                v.resize(k, 0);
                v
            })
            .collect();
        let relations = rel_orders
            .iter()
            .zip(&rel_tails)
            .enumerate()
            .map(|(i, (&o, tail))| {
                let mut row = vec![0i64; k];
                for (j, &t) in tail.iter().enumerate() {
                    row[j] -= t;
                }
                row[i] += o as i64;
                row
            })
            .collect();
        Presentation { gens, relations, coords, exponent: self.exponent() }
    }
}

/// Generators `gens` with integer relations; `coords[x]` writes `x` in the generators.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub gens: Vec<usize>,
    pub relations: Vec<Vec<i64>>,
    pub coords: Vec<Vec<i64>>,
    pub exponent: u64,
}

impl Presentation {
    pub fn rank(&self) -> usize {
        self.gens.len()
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presentation_reconstructs_every_element() {
        let g = AbelianGroup::from_orders(&[2, 4, 3]);
        let p = g.presentation();
        for x in 0..g.size() {
            let mut acc = g.zero();
            for (c, &gen) in p.coords[x].iter().zip(&p.gens) {
                acc = g.add(acc, g.scale(*c, gen));
            }
            assert_eq!(acc, x);
        }
        for rel in &p.relations {
            let mut acc = g.zero();
            for (c, &gen) in rel.iter().zip(&p.gens) {
                acc = g.add(acc, g.scale(*c, gen));
            }
            assert_eq!(acc, g.zero());
        }
        assert_eq!(p.exponent, 12);
    }

    #[test]
    fn rejects_non_commutative_table() {
        let add = vec![0, 1, 2, 1, 2, 0, 2, 1, 0];
        assert!(matches!(
            AbelianGroup::from_table(3, add, 0),
            Err(Error::AxiomViolation { .. })
        ));
    }

    #[test]
    fn span_of_two_in_z6() {
        let g = AbelianGroup::cyclic(6);
        let mask = g.span([2]);
        let members: Vec<usize> = (0..6).filter(|&i| mask[i]).collect();
        assert_eq!(members, vec![0, 2, 4]);
    }
}
