use std::fmt;
use std::sync::Arc;

use super::group::AbelianGroup;
use crate::error::{Error, Result};

/// A finite unital ring on the dense carrier `0..size`.
#[derive(Clone)]
pub struct FiniteRing {
    name: String,
    group: AbelianGroup,
    mul: Vec<u32>,
    one: usize,
    names: Option<Vec<String>>,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing({}, order {})", self.name, self.size())
    }
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.mul == other.mul && self.one == other.one
    }
}

impl Eq for FiniteRing {}

/// Raw table description of a ring before validation.
#[derive(Clone, Debug, Default)]
pub struct RingTables {
    pub name: String,
    pub size: usize,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    pub zero: usize,
    pub one: usize,
    pub element_names: Option<Vec<String>>,
}

fn flatten(name: &str, size: usize, rows: &[Vec<usize>]) -> Result<Vec<u32>> {
    if rows.len() != size {
        return Err(Error::MalformedSpec(format!("{name} table has {} rows, expected {size}", rows.len())));
    }
    let mut out = Vec::with_capacity(size * size);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != size {
            return Err(Error::MalformedSpec(format!(
                "{name} table row {i} has length {}, expected {size}",
                row.len()
            )));
        }
        for (j, &x) in row.iter().enumerate() {
            if x >= size {
                return Err(Error::MalformedSpec(format!("{name}[{i}][{j}] = {x} out of range")));
            }
            out.push(x as u32);
        }
    }
    Ok(out)
}

/// Validates raw tables and returns the ring.
pub fn ring_from_tables(spec: &RingTables) -> Result<FiniteRing> {
    if spec.size == 0 {
        return Err(Error::MalformedSpec("ring must have at least one element".into()));
    }
    let add = flatten("add", spec.size, &spec.add)?;
    let mul = flatten("mul", spec.size, &spec.mul)?;
    if spec.zero >= spec.size || spec.one >= spec.size {
        return Err(Error::MalformedSpec("zero/one index out of range".into()));
    }
    if let Some(names) = &spec.element_names {
        if names.len() != spec.size {
            return Err(Error::MalformedSpec(format!(
                "{} element names for {} elements",
                names.len(),
                spec.size
            )));
        }
    }
    let group = AbelianGroup::from_table(spec.size, add, spec.zero)?;
    FiniteRing::new(spec.name.clone(), group, mul, spec.one, spec.element_names.clone())
}

impl FiniteRing {
    /// Validates the multiplicative axioms over an already validated group.
    pub fn new(
        name: impl Into<String>,
        group: AbelianGroup,
        mul: Vec<u32>,
        one: usize,
        names: Option<Vec<String>>,
    ) -> Result<Self> {
        let ring = FiniteRing { name: name.into(), group, mul, one, names };
        ring.validate()?;
        Ok(ring)
    }

    /// Full table scan of associativity, identity and both distributive laws.
    pub fn validate(&self) -> Result<()> {
        let n = self.size();
        if self.mul.len() != n * n {
            return Err(Error::MalformedSpec("multiplication table has wrong shape".into()));
        }
        for a in 0..n {
            if self.mul(self.one, a) != a || self.mul(a, self.one) != a {
                return Err(Error::AxiomViolation { axiom: "multiplicative identity", witness: vec![a] });
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                let a_plus_b = self.add(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::AxiomViolation {
                            axiom: "multiplicative associativity",
                            witness: vec![a, b, c],
                        });
                    }
                    if self.mul(c, a_plus_b) != self.add(self.mul(c, a), self.mul(c, b)) {
                        return Err(Error::AxiomViolation { axiom: "left distributivity", witness: vec![c, a, b] });
                    }
                    if self.mul(a_plus_b, c) != self.add(self.mul(a, c), self.mul(b, c)) {
                        return Err(Error::AxiomViolation {
                            axiom: "right distributivity",
                            witness: vec![a, b, c],
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Trusted constructor for tables produced by an internal construction that is
    /// validated separately.
    pub(crate) fn from_parts_unchecked(name: impl Into<String>, group: AbelianGroup, mul: Vec<u32>, one: usize) -> Self {
        FiniteRing { name: name.into(), group, mul, one, names: None }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_element_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.size());
        self.names = Some(names);
        self
    }

    pub fn element_names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn element_name(&self, x: usize) -> String {
        match &self.names {
            Some(n) => n[x].clone(),
            None => x.to_string(),
        }
    }

    /// Index of the element with the given display name.
    pub fn element(&self, name: &str) -> Option<usize> {
        match &self.names {
            Some(n) => n.iter().position(|s| s == name),
            None => name.parse().ok().filter(|&x: &usize| x < self.size()),
        }
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
    pub fn one(&self) -> usize {
        self.one
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

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size() + b] as usize
    }

    pub fn mul_table(&self) -> &[u32] {
        &self.mul
    }

    pub fn add_rows(&self) -> Vec<Vec<usize>> {
        rows(self.group.table(), self.size())
    }

    pub fn mul_rows(&self) -> Vec<Vec<usize>> {
        rows(&self.mul, self.size())
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.size();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The opposite ring: same elements, `a ·ᵒᵖ b = b · a`.
    pub fn opposite(&self) -> FiniteRing {
        let n = self.size();
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = self.mul[b * n + a];
            }
        }
        FiniteRing {
            name: format!("{}^op", self.name),
            group: self.group.clone(),
            mul,
            one: self.one,
            names: self.names.clone(),
        }
    }

    /// Elements `x` whose left and right multiplications are injective.
    pub fn regular_elements(&self) -> Vec<usize> {
        let n = self.size();
        (0..n)
            .filter(|&x| {
                (0..n).all(|y| y == self.zero() || (self.mul(x, y) != self.zero() && self.mul(y, x) != self.zero()))
            })
            .collect()
    }

    pub fn units(&self) -> Vec<usize> {
        let n = self.size();
        (0..n)
            .filter(|&x| (0..n).any(|y| self.mul(x, y) == self.one && self.mul(y, x) == self.one))
            .collect()
    }

    /// Additive generators of the carrier (greedy, smallest indices first).
    pub fn additive_generators(&self) -> Vec<usize> {
        self.group.presentation().gens
    }

    // ---- builders for the bundled corpus and test oracles ----

    /// `ℤ/n` with elements `0..n` in their natural order.
    pub fn zmod(n: usize) -> FiniteRing {
        let group = AbelianGroup::cyclic(n);
        let mul = (0..n * n).map(|i| ((i / n) * (i % n) % n) as u32).collect();
        FiniteRing {
            name: format!("Z/{n}"),
            group,
            mul,
            one: 1 % n,
            names: Some((0..n).map(|i| i.to_string()).collect()),
        }
    }

    /// Direct product; element `(a, b)` has index `a + |A|·b`.
    pub fn product(a: &FiniteRing, b: &FiniteRing) -> FiniteRing {
        let (na, nb) = (a.size(), b.size());
        let n = na * nb;
        let split = |x: usize| (x % na, x / na);
        let join = |x: usize, y: usize| (x + na * y) as u32;
        let mut add = vec![0u32; n * n];
        let mut mul = vec![0u32; n * n];
        for x in 0..n {
            let (x1, x2) = split(x);
            for y in 0..n {
                let (y1, y2) = split(y);
                add[x * n + y] = join(a.add(x1, y1), b.add(x2, y2));
                mul[x * n + y] = join(a.mul(x1, y1), b.mul(x2, y2));
            }
        }
        let names = (0..n)
            .map(|x| {
                let (x1, x2) = split(x);
                format!("({},{})", a.element_name(x1), b.element_name(x2))
            })
            .collect();
        FiniteRing {
            name: format!("{}x{}", a.name, b.name),
            group: AbelianGroup::from_table_unchecked(n, add, join(a.zero(), b.zero()) as usize),
            mul,
            one: join(a.one(), b.one()) as usize,
            names: Some(names),
        }
    }

    /// Matrices over `ℤ/p` supported on `pattern` (a set of (row, col) positions closed under
    /// matrix multiplication and containing the diagonal). Element index = bit-packed entries
    /// in the order of `pattern`, base `p`.
    fn matrix_subring(name: &str, dim: usize, p: usize, pattern: &[(usize, usize)], labels: &[&str]) -> FiniteRing {
        let k = pattern.len();
        let n = p.pow(k as u32);
        let decode = |x: usize| -> Vec<Vec<usize>> {
            let mut m = vec![vec![0usize; dim]; dim];
            let mut rest = x;
            for &(i, j) in pattern {
                m[i][j] = rest % p;
                rest /= p;
            }
            m
        };
        let encode = |m: &Vec<Vec<usize>>| -> usize {
            let mut idx = 0;
            let mut radix = 1;
            for &(i, j) in pattern {
                idx += m[i][j] * radix;
                radix *= p;
            }
            idx
        };
        let mats: Vec<_> = (0..n).map(decode).collect();
        let mut add = vec![0u32; n * n];
        let mut mul = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                let mut s = vec![vec![0usize; dim]; dim];
                let mut m = vec![vec![0usize; dim]; dim];
                for i in 0..dim {
                    for j in 0..dim {
                        s[i][j] = (mats[x][i][j] + mats[y][i][j]) % p;
                        m[i][j] = (0..dim).map(|t| mats[x][i][t] * mats[y][t][j]).sum::<usize>() % p;
                    }
                }
                add[x * n + y] = encode(&s) as u32;
                mul[x * n + y] = encode(&m) as u32;
            }
        }
        let identity: Vec<Vec<usize>> = (0..dim).map(|i| (0..dim).map(|j| (i == j) as usize).collect()).collect();
        let names = (0..n)
            .map(|x| {
                let mut terms = Vec::new();
                let mut rest = x;
                for label in labels {
                    let c = rest % p;
                    rest /= p;
                    match c {
                        0 => {}
                        1 => terms.push(label.to_string()),
                        c => terms.push(format!("{c}{label}")),
                    }
                }
                if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join("+")
                }
            })
            .collect();
        FiniteRing {
            name: name.to_string(),
            group: AbelianGroup::from_table_unchecked(n, add, 0),
            mul,
            one: encode(&identity),
            names: Some(names),
        }
    }

    /// Upper-triangular 2×2 matrices over `ℤ/p`; index `a + p·b + p²·c` for `a·e11 + b·e12 + c·e22`.
    pub fn upper_triangular_2(p: usize) -> FiniteRing {
        Self::matrix_subring(&format!("T2(F{p})"), 2, p, &[(0, 0), (0, 1), (1, 1)], &["e11", "e12", "e22"])
    }

    /// Full 2×2 matrices over `ℤ/p`; index over entries (e11, e12, e21, e22).
    pub fn full_matrix_2(p: usize) -> FiniteRing {
        Self::matrix_subring(
            &format!("M2(F{p})"),
            2,
            p,
            &[(0, 0), (0, 1), (1, 0), (1, 1)],
            &["e11", "e12", "e21", "e22"],
        )
    }

    /// `F₂[ε]/(ε²)`: index `a + 2b` for `a + bε`.
    pub fn dual_numbers_f2() -> FiniteRing {
        let n = 4;
        let mut add = vec![0u32; 16];
        let mut mul = vec![0u32; 16];
        for x in 0..n {
            for y in 0..n {
                let (a, b) = (x & 1, x >> 1);
                let (c, d) = (y & 1, y >> 1);
                add[x * n + y] = (x ^ y) as u32;
                let re = (a * c) & 1;
                let eps = (a * d + b * c) & 1;
                mul[x * n + y] = (re + 2 * eps) as u32;
            }
        }
        FiniteRing {
            name: "F2[e]/(e^2)".into(),
            group: AbelianGroup::from_table_unchecked(4, add, 0),
            mul,
            one: 1,
            names: Some(vec!["0".into(), "1".into(), "e".into(), "1+e".into()]),
        }
    }

    /// The field with four elements `F₂[w]/(w² + w + 1)`: index `a + 2b` for `a + bw`.
    pub fn gf4() -> FiniteRing {
        let n = 4;
        let mut add = vec![0u32; 16];
        let mut mul = vec![0u32; 16];
        for x in 0..n {
            for y in 0..n {
                let (a, b) = (x & 1, x >> 1);
                let (c, d) = (y & 1, y >> 1);
                add[x * n + y] = (x ^ y) as u32;
                // (a + bw)(c + dw) = ac + (ad + bc)w + bd w², w² = w + 1
                let re = (a * c + b * d) & 1;
                let w = (a * d + b * c + b * d) & 1;
                mul[x * n + y] = (re + 2 * w) as u32;
            }
        }
        FiniteRing {
            name: "F4".into(),
            group: AbelianGroup::from_table_unchecked(4, add, 0),
            mul,
            one: 1,
            names: Some(vec!["0".into(), "1".into(), "w".into(), "1+w".into()]),
        }
    }
}

fn rows(t: &[u32], n: usize) -> Vec<Vec<usize>> {
    t.chunks(n).map(|r| r.iter().map(|&x| x as usize).collect()).collect()
}

/// Raw tables of an existing ring, for serialization.
pub fn tables_of(r: &FiniteRing) -> RingTables {
    RingTables {
        name: r.name().to_string(),
        size: r.size(),
        add: r.add_rows(),
        mul: r.mul_rows(),
        zero: r.zero(),
        one: r.one(),
        element_names: r.element_names().map(|n| n.to_vec()),
    }
}

pub type RingRef = Arc<FiniteRing>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders_pass_validation() {
        for r in [
            FiniteRing::zmod(4),
            FiniteRing::zmod(6),
            FiniteRing::product(&FiniteRing::zmod(2), &FiniteRing::zmod(2)),
            FiniteRing::gf4(),
            FiniteRing::dual_numbers_f2(),
            FiniteRing::upper_triangular_2(2),
            FiniteRing::full_matrix_2(2),
        ] {
            r.validate().unwrap();
            ring_from_tables(&tables_of(&r)).unwrap();
        }
    }

    #[test]
    fn corrupted_z4_reports_a_witness() {
        let mut t = tables_of(&FiniteRing::zmod(4));
        t.mul[2][3] = 1;
        match ring_from_tables(&t) {
            Err(Error::AxiomViolation { axiom, witness }) => {
                assert!(axiom.contains("distributivity") || axiom.contains("associativity") || axiom.contains("identity"));
                assert!(!witness.is_empty());
            }
            other => panic!("expected axiom violation, got {other:?}"),
        }
    }

    #[test]
    fn wrong_row_length_is_malformed() {
        let mut t = tables_of(&FiniteRing::zmod(6));
        t.add[3].pop();
        match ring_from_tables(&t) {
            Err(Error::MalformedSpec(msg)) => assert!(msg.contains("row 3")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn finite_regular_elements_are_units() {
        for r in [FiniteRing::zmod(6), FiniteRing::dual_numbers_f2(), FiniteRing::upper_triangular_2(2)] {
            assert_eq!(r.regular_elements(), r.units());
        }
        assert_eq!(FiniteRing::zmod(6).regular_elements(), vec![1, 5]);
        assert_eq!(FiniteRing::dual_numbers_f2().regular_elements(), vec![1, 3]);
    }
}
