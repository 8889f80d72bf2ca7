use num_integer::Integer;

use super::matrix::{unit_normalizer, LambdaMatrix};
use super::ring::xgcd;

/// Smith form U·A·V⁻¹ = D of a relation matrix with k columns.
/// `v` is invertible with rowspan(A) = rowspan(D·v).
#[derive(Debug, Clone)]
pub struct Snf {
    pub n: u64,
    pub diag: Vec<u64>,
    pub v: LambdaMatrix,
    pub v_inv: LambdaMatrix,
}

impl Snf {
    /// Cyclic orders of Λ^k / rowspan(A), one per column, in pivot order.
    pub fn invariant_factors(&self) -> Vec<u64> {
        self.diag.iter().map(|&d| if d == 0 { self.n } else { d.gcd(&self.n) }).collect()
    }
}

struct Work {
    n: u64,
    a: Vec<Vec<u64>>,
    v: Vec<Vec<u64>>,
    v_inv: Vec<Vec<u64>>,
}

fn comb(n: u64, s: i128, x: u64, t: i128, y: u64) -> u64 {
    let n = n as i128;
    ((s.rem_euclid(n) * x as i128 + t.rem_euclid(n) * y as i128).rem_euclid(n)) as u64
}

impl Work {
    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        for row in self.v_inv.iter_mut() {
            row.swap(i, j);
        }
        self.v.swap(i, j);
    }

    /// Columns (t, j) ← (t, j)·[[s, -y/g], [u, x/g]].
    fn col_op(&mut self, t: usize, j: usize, s: i128, u: i128, xg: i128, yg: i128) {
        let n = self.n;
        for row in self.a.iter_mut().chain(self.v_inv.iter_mut()) {
            let (ct, cj) = (row[t], row[j]);
            row[t] = comb(n, s, ct, u, cj);
            row[j] = comb(n, -yg, ct, xg, cj);
        }
        let (rt, rj) = (self.v[t].clone(), self.v[j].clone());
        for c in 0..rt.len() {
            self.v[t][c] = comb(n, xg, rt[c], yg, rj[c]);
            self.v[j][c] = comb(n, -u, rt[c], s, rj[c]);
        }
    }

    fn row_op(&mut self, t: usize, i: usize, s: i128, u: i128, xg: i128, yg: i128) {
        let n = self.n;
        let (rt, ri) = (self.a[t].clone(), self.a[i].clone());
        for c in 0..rt.len() {
            self.a[t][c] = comb(n, s, rt[c], u, ri[c]);
            self.a[i][c] = comb(n, -yg, rt[c], xg, ri[c]);
        }
    }

    fn normalize_row(&mut self, t: usize, col: usize) {
        let x = self.a[t][col];
        if x == 0 {
            return;
        }
        let u = unit_normalizer(x, self.n);
        let n = self.n;
        for e in self.a[t].iter_mut() {
            *e = ((*e as u128 * u as u128) % n as u128) as u64;
        }
    }
}

/// Smith normal form of a matrix with `k` columns (rows may be empty).
pub fn smith_form(a: &LambdaMatrix, k: usize) -> Snf {
    assert_eq!(a.ncols(), k);
    let n = a.modulus();
    let ident = LambdaMatrix::identity(n, k).row_vecs();
    let mut w = Work { n, a: a.row_vecs(), v: ident.clone(), v_inv: ident };
    let r = w.a.len();
    let mut diag = vec![0u64; k];
    for t in 0..r.min(k) {
        let mut best: Option<(u64, usize, usize)> = None;
        for i in t..r {
            for j in t..k {
                let x = w.a[i][j];
                if x != 0 {
                    let g = x.gcd(&n);
                    if best.is_none_or(|(bg, _, _)| g < bg) {
                        best = Some((g, i, j));
                    }
                }
            }
        }
        let Some((_, bi, bj)) = best else { break };
        w.a.swap(t, bi);
        w.swap_cols(t, bj);
        loop {
            w.normalize_row(t, t);
            let g = w.a[t][t];
            let mut dirty = false;
            for i in t + 1..r {
                let y = w.a[i][t];
                if y == 0 {
                    continue;
                }
                if y.is_multiple_of(g) {
                    let qt = (y / g) as i128;
                    w.row_op(i, t, 1, -qt, 1, 0);
                } else {
                    let (gg, s, u) = xgcd(g, y);
                    w.row_op(t, i, s, u, (g / gg) as i128, (y / gg) as i128);
                    dirty = true;
                    break;
                }
            }
            if dirty {
                continue;
            }
            for j in t + 1..k {
                let y = w.a[t][j];
                if y == 0 {
                    continue;
                }
                if y.is_multiple_of(g) {
                    w.col_op(t, j, 1, 0, 1, (y / g) as i128);
                } else {
                    let (gg, s, u) = xgcd(g, y);
                    w.col_op(t, j, s, u, (g / gg) as i128, (y / gg) as i128);
                    dirty = true;
                    break;
                }
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..k).any(|j| !w.a[i][j].is_multiple_of(g)));
            match bad {
                Some(i) => {
                    for c in 0..k {
                        w.a[t][c] = (w.a[t][c] + w.a[i][c]) % n;
                    }
                }
                None => break,
            }
        }
        diag[t] = w.a[t][t];
    }
    Snf {
        n,
        diag,
        v: LambdaMatrix::from_u64_rows(n, k, &w.v),
        v_inv: LambdaMatrix::from_u64_rows(n, k, &w.v_inv),
    }
}
