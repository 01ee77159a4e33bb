//! Smith normal form over `ℤ/E` for finite abelian group presentations.
//!
//! Every group handled here is a quotient of `(ℤ/E)^n` for a known exponent
//! multiple `E`, so all arithmetic is carried out on representatives in
//! `[0, E)`. Row and column operations are built from extended-gcd 2×2
//! blocks of determinant one, which stay invertible modulo `E`.

use super::group::{gcd, AbelianGroup};

/// `(ℤ/E)^n` modulo the row span of a relation matrix, diagonalized.
#[derive(Clone, Debug)]
pub struct SnfQuotient {
    modulus: i64,
    ngens: usize,
    /// Column transform `V` (n × n): new coordinates are `w · V`.
    v: Vec<Vec<i64>>,
    /// `V⁻¹`, rows indexed by new coordinates.
    v_inv: Vec<Vec<i64>>,
    /// Order of each new coordinate (1 for killed coordinates).
    orders: Vec<u64>,
    /// Indices of coordinates with order > 1, in mixed-radix order.
    kept: Vec<usize>,
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

impl SnfQuotient {
    /// Quotient of `(ℤ/modulus)^ngens` by the span of `relations`.
    pub fn new(ngens: usize, relations: &[Vec<i64>], modulus: u64) -> Self {
        let e = modulus.max(1) as i64;
        let md = |x: i64| x.rem_euclid(e);
        let mut a: Vec<Vec<i64>> = relations
            .iter()
            .map(|r| {
                debug_assert_eq!(r.len(), ngens);
                r.iter().map(|&x| md(x)).collect()
            })
            .filter(|r: &Vec<i64>| r.iter().any(|&x| x != 0))
            .collect();
        let mut v: Vec<Vec<i64>> = (0..ngens)
            .map(|i| (0..ngens).map(|j| (i == j) as i64).collect())
            .collect();
        let mut v_inv = v.clone();
        let rows = a.len();
        let mut diag = vec![0i64; ngens];

        // column op on (A, V): cols (p, q) ← (s·c_p + t·c_q, u·c_p + w·c_q)
        let col_op = |a: &mut Vec<Vec<i64>>,
                      v: &mut Vec<Vec<i64>>,
                      v_inv: &mut Vec<Vec<i64>>,
                      p: usize,
                      q: usize,
                      m: [i64; 4]| {
            let [s, t, u, w] = m;
            for row in a.iter_mut().chain(v.iter_mut()) {
                let (x, y) = (row[p], row[q]);
                row[p] = md(s * x + t * y);
                row[q] = md(u * x + w * y);
            }
            // inverse acts on rows p, q of V⁻¹: det = s·w − t·u = 1
            let (rp, rq) = (v_inv[p].clone(), v_inv[q].clone());
            for k in 0..rp.len() {
                v_inv[p][k] = md(w * rp[k] - u * rq[k]);
                v_inv[q][k] = md(-t * rp[k] + s * rq[k]);
            }
        };

        let mut p = 0;
        while p < rows.min(ngens) {
            // pick the smallest nonzero entry in the trailing block
            let mut best: Option<(i64, usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(p) {
                for (j, &x) in row.iter().enumerate().skip(p) {
                    if x != 0 && best.is_none_or(|(b, _, _)| x < b) {
                        best = Some((x, i, j));
                    }
                }
            }
            let Some((_, bi, bj)) = best else { break };
            a.swap(p, bi);
            if bj != p {
                // (c_p, c_j) ← (c_j, −c_p), determinant one
                col_op(&mut a, &mut v, &mut v_inv, p, bj, [0, 1, -1, 0]);
            }
            loop {
                for i in p + 1..rows {
                    let b = a[i][p];
                    if b == 0 {
                        continue;
                    }
                    let piv = a[p][p];
                    if b % piv == 0 {
                        let f = b / piv;
                        for k in 0..ngens {
                            a[i][k] = md(a[i][k] - f * a[p][k]);
                        }
                    } else {
                        let (g, s, t) = ext_gcd(piv, b);
                        let (u, w) = (-b / g, piv / g);
                        for k in 0..ngens {
                            let (x, y) = (a[p][k], a[i][k]);
                            a[p][k] = md(s * x + t * y);
                            a[i][k] = md(u * x + w * y);
                        }
                    }
                }
                for j in p + 1..ngens {
                    let b = a[p][j];
                    if b == 0 {
                        continue;
                    }
                    let piv = a[p][p];
                    if b % piv == 0 {
                        // c_j ← c_j − (b/piv)·c_p
                        col_op(&mut a, &mut v, &mut v_inv, j, p, [1, -(b / piv), 0, 1]);
                    } else {
                        let (g, s, t) = ext_gcd(piv, b);
                        let (u, w) = (-b / g, piv / g);
                        col_op(&mut a, &mut v, &mut v_inv, p, j, [s, t, u, w]);
                    }
                }
                if (p + 1..rows).all(|i| a[i][p] == 0) && (p + 1..ngens).all(|j| a[p][j] == 0) {
                    break;
                }
            }
            diag[p] = a[p][p];
            p += 1;
        }
        let orders: Vec<u64> = (0..ngens)
            .map(|i| {
                if diag[i] == 0 {
                    e as u64
                } else {
                    gcd(diag[i] as u64, e as u64)
                }
            })
            .collect();
        let kept = (0..ngens).filter(|&i| orders[i] > 1).collect();
        SnfQuotient { modulus: e, ngens, v, v_inv, orders, kept }
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn modulus(&self) -> u64 {
        self.modulus as u64
    }

    /// Orders of the nontrivial cyclic factors.
    pub fn invariant_orders(&self) -> Vec<u64> {
        self.kept.iter().map(|&i| self.orders[i]).collect()
    }

    pub fn order(&self) -> usize {
        self.kept.iter().map(|&i| self.orders[i] as usize).product()
    }

    /// Group structure on `0..order()` in mixed radix over the kept factors.
    pub fn group(&self) -> AbelianGroup {
        AbelianGroup::from_orders(&self.invariant_orders())
    }

    /// Element index of the class of `w ∈ ℤ^n`.
    pub fn reduce(&self, w: &[i64]) -> usize {
        let mut idx = 0usize;
        let mut radix = 1usize;
        for &c in &self.kept {
            let o = self.orders[c] as i64;
            let mut s = 0i64;
            for (k, &x) in w.iter().enumerate() {
                if x != 0 {
                    s = (s + (x.rem_euclid(self.modulus)) * self.v[k][c]) % self.modulus;
                }
            }
            idx += (s.rem_euclid(o) as usize) * radix;
            radix *= o as usize;
        }
        idx
    }

    /// A vector in `ℤ^n` whose class is element `x`.
    pub fn representative(&self, x: usize) -> Vec<i64> {
        let mut w = vec![0i64; self.ngens];
        let mut rest = x;
        for &c in &self.kept {
            let o = self.orders[c] as usize;
            let digit = (rest % o) as i64;
            rest /= o;
            if digit != 0 {
                for k in 0..self.ngens {
                    w[k] = (w[k] + digit * self.v_inv[c][k]).rem_euclid(self.modulus);
                }
            }
        }
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order_of_presented(ngens: usize, rels: &[Vec<i64>], e: u64) -> usize {
        SnfQuotient::new(ngens, rels, e).order()
    }

    #[test]
    fn cyclic_gcd() {
        // ℤ/4 ⊕ ℤ/6 with an extra relation identifying generators
        assert_eq!(order_of_presented(1, &[vec![6]], 4), 2);
        assert_eq!(order_of_presented(2, &[vec![4, 0], vec![0, 6]], 12), 24);
        assert_eq!(order_of_presented(2, &[vec![4, 0], vec![0, 6], vec![1, -1]], 12), 2);
    }

    #[test]
    fn reduce_and_representative_agree() {
        let rels = vec![vec![2, 4, 0], vec![0, 6, 3], vec![1, 1, 1]];
        let s = SnfQuotient::new(3, &rels, 12);
        for x in 0..s.order() {
            assert_eq!(s.reduce(&s.representative(x)), x);
        }
        for rel in &rels {
            assert_eq!(s.reduce(rel), 0);
        }
    }
}
