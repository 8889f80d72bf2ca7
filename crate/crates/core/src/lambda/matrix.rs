use std::fmt;

use num_integer::Integer;

use super::ring::{inv_mod, xgcd};
use crate::error::{Error, Result};

/// Dense matrix over Z/n, row-major, entries kept in [0, n).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LambdaMatrix {
    n: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn addmod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 + b as u128) % n as u128) as u64
}

fn lin(s: i128, x: u64, t: i128, y: u64, n: u64) -> u64 {
    let n = n as i128;
    ((s.rem_euclid(n) * x as i128 + t.rem_euclid(n) * y as i128).rem_euclid(n)) as u64
}

impl LambdaMatrix {
    pub fn new(n: u64, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!("{rows}x{cols} needs {} entries, got {}", rows * cols, data.len())));
        }
        Ok(Self { n, rows, cols, data: data.into_iter().map(|x| x % n).collect() })
    }

    pub fn zeros(n: u64, rows: usize, cols: usize) -> Self {
        Self { n, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: u64, k: usize) -> Self {
        let mut m = Self::zeros(n, k, k);
        for i in 0..k {
            m.set(i, i, 1);
        }
        m
    }

    /// Build from signed rows; every row must have length `cols`.
    pub fn from_rows(n: u64, cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Shape(format!("row of length {} in a {cols}-column matrix", r.len())));
            }
            data.extend(r.iter().map(|&x| x.rem_euclid(n as i64) as u64));
        }
        Ok(Self { n, rows: rows.len(), cols, data })
    }

    pub fn from_u64_rows(n: u64, cols: usize, rows: &[Vec<u64>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend(r.iter().map(|&x| x % n));
        }
        Self { n, rows: rows.len(), cols, data }
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.n;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows || self.n != other.n {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let n = self.n as u128;
        let mut out = Self::zeros(self.n, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u128;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = ((out.data[idx] as u128 + a * other.get(k, j) as u128) % n) as u64;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("addition of differently shaped matrices".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| addmod(a, b, self.n)).collect();
        Ok(Self { data, ..self.clone() })
    }

    pub fn scale(&self, c: u64) -> Self {
        Self { data: self.data.iter().map(|&a| mulmod(a, c, self.n)).collect(), ..self.clone() }
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![0u64; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = addmod(*o, mulmod(a, self.get(i, j), self.n), self.n);
            }
        }
        out
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::Shape(format!("vstack of {} and {} columns", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self { n: self.n, rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::Shape(format!("hstack of {} and {} rows", self.rows, other.rows)));
        }
        let mut out = Self::zeros(self.n, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        Ok(out)
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.n, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    pub fn select_cols(&self, range: std::ops::Range<usize>) -> Self {
        let rows: Vec<Vec<u64>> = (0..self.rows).map(|i| self.row(i)[range.clone()].to_vec()).collect();
        Self::from_u64_rows(self.n, range.len(), &rows)
    }

    /// The Howell canonical form: a unique generating set of the row span.
    pub fn howell_form(&self) -> Self {
        let n = self.n;
        let cols = self.cols;
        let mut rows: Vec<Vec<u64>> = self.row_vecs();
        let mut r = 0usize;
        for c in 0..cols {
            if r >= rows.len() {
                break;
            }
            for i in r + 1..rows.len() {
                let b = rows[i][c];
                if b == 0 {
                    continue;
                }
                let a = rows[r][c];
                let (g, s, t) = xgcd(a, b);
                let (ag, bg) = ((a / g) as i128, (b / g) as i128);
                for k in c..cols {
                    let x = rows[r][k];
                    let y = rows[i][k];
                    rows[r][k] = lin(s, x, t, y, n);
                    rows[i][k] = lin(-bg, x, ag, y, n);
                }
            }
            let x = rows[r][c];
            if x == 0 {
                continue;
            }
            let g = x.gcd(&n);
            let u = unit_normalizer(x, n);
            for k in c..cols {
                rows[r][k] = mulmod(rows[r][k], u, n);
            }
            debug_assert_eq!(rows[r][c], g);
            for i in 0..r {
                let qt = rows[i][c] / g;
                if qt == 0 {
                    continue;
                }
                for k in c..cols {
                    rows[i][k] = addmod(rows[i][k], mulmod(n - qt % n, rows[r][k], n), n);
                }
            }
            let ann = n / g;
            let extra: Vec<u64> = rows[r].iter().map(|&v| mulmod(v, ann, n)).collect();
            if extra.iter().any(|&v| v != 0) {
                rows.push(extra);
            }
            r += 1;
        }
        rows.truncate(r.min(rows.len()));
        let rows: Vec<Vec<u64>> = rows.into_iter().filter(|row| row.iter().any(|&v| v != 0)).collect();
        Self::from_u64_rows(n, cols, &rows)
    }

    /// Pivot columns of a matrix already in Howell form, with the pivot value.
    fn pivots(&self) -> Vec<(usize, u64)> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let c = row.iter().position(|&v| v != 0).expect("Howell rows are nonzero");
                (c, row[c])
            })
            .collect()
    }

    /// Number of elements of the row span. Panics past u128.
    pub fn span_size(&self) -> u128 {
        let h = self.howell_form();
        h.pivots()
            .iter()
            .try_fold(1u128, |acc, &(_, g)| acc.checked_mul((self.n / g) as u128))
            .expect("span size overflows u128")
    }

    /// Reduce v against a Howell-form matrix; returns the remainder and the coefficients used.
    fn reduce_by_howell(&self, v: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let n = self.n;
        let mut rem = v.to_vec();
        let mut coeffs = vec![0u64; self.rows];
        for (i, (c, g)) in self.pivots().into_iter().enumerate() {
            if rem[..c].iter().any(|&x| x != 0) {
                break;
            }
            let qt = rem[c] / g;
            if !rem[c].is_multiple_of(g) {
                break;
            }
            if qt != 0 {
                coeffs[i] = qt;
                for (k, x) in rem.iter_mut().enumerate().skip(c) {
                    *x = addmod(*x, mulmod(n - qt, self.get(i, k), n), n);
                }
            }
        }
        (rem, coeffs)
    }

    /// Membership of v in the row span.
    pub fn span_contains(&self, v: &[u64]) -> bool {
        let h = self.howell_form();
        let (rem, _) = h.reduce_by_howell(v);
        rem.iter().all(|&x| x == 0)
    }

    /// Is the row span of `other` inside the row span of `self`?
    pub fn span_includes(&self, other: &Self) -> bool {
        let h = self.howell_form();
        (0..other.rows).all(|i| h.reduce_by_howell(other.row(i)).0.iter().all(|&x| x == 0))
    }

    pub fn same_span(&self, other: &Self) -> bool {
        self.howell_form() == other.howell_form()
    }

    /// All x with x·A = 0, as the rows of a Howell-form matrix.
    pub fn left_kernel(&self) -> Self {
        let aug = self.hstack(&Self::identity(self.n, self.rows)).expect("shapes agree");
        let h = aug.howell_form();
        let rows: Vec<Vec<u64>> = (0..h.rows)
            .filter(|&i| h.row(i)[..self.cols].iter().all(|&x| x == 0))
            .map(|i| h.row(i)[self.cols..].to_vec())
            .collect();
        Self::from_u64_rows(self.n, self.rows, &rows).howell_form()
    }

    /// Some x with x·A = v, if one exists.
    pub fn solve_left(&self, v: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(v.len(), self.cols);
        let aug = self.hstack(&Self::identity(self.n, self.rows)).expect("shapes agree");
        let h = aug.howell_form();
        let mut ext = v.to_vec();
        ext.extend(std::iter::repeat_n(0, self.rows));
        let (rem, _) = h.reduce_by_howell(&ext);
        if rem[..self.cols].iter().any(|&x| x != 0) {
            return None;
        }
        Some(rem[self.cols..].iter().map(|&x| (self.n - x) % self.n).collect())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Inverse over Z/n if the matrix is invertible.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let k = self.rows;
        let mut rows = Vec::with_capacity(k);
        for i in 0..k {
            let mut e = vec![0u64; k];
            e[i] = 1;
            rows.push(self.solve_left(&e)?);
        }
        Some(Self::from_u64_rows(self.n, k, &rows))
    }

    pub fn determinant(&self) -> Option<u64> {
        if !self.is_square() {
            return None;
        }
        Some(det_rec(self.n, &self.row_vecs()))
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse().is_some()
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.n, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, mulmod(a, other.get(k, l), self.n));
                    }
                }
            }
        }
        out
    }
}

fn det_rec(n: u64, m: &[Vec<u64>]) -> u64 {
    let k = m.len();
    match k {
        0 => 1 % n,
        1 => m[0][0] % n,
        _ => {
            let mut acc = 0u64;
            for j in 0..k {
                if m[0][j] == 0 {
                    continue;
                }
                let minor: Vec<Vec<u64>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect()).collect();
                let term = mulmod(m[0][j], det_rec(n, &minor), n);
                acc = if j % 2 == 0 { addmod(acc, term, n) } else { addmod(acc, n - term, n) };
            }
            acc % n
        }
    }
}

/// A unit u with u·x ≡ gcd(x, n) (mod n).
pub fn unit_normalizer(x: u64, n: u64) -> u64 {
    let g = x.gcd(&n);
    let (xp, np) = (x / g, n / g);
    let u0 = inv_mod(xp, np).unwrap_or(0);
    let mut u = u0;
    while u.gcd(&n) != 1 {
        u += np;
    }
    u % n
}

impl fmt::Display for LambdaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let parts: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", parts.join(" "))?;
        }
        write!(f, "] mod {}", self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u64, cols: usize, rows: &[&[i64]]) -> LambdaMatrix {
        LambdaMatrix::from_rows(n, cols, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn howell_examples() {
        let id = LambdaMatrix::identity(4, 2);
        assert_eq!(id.howell_form(), id);
        let a = m(4, 2, &[&[2, 2], &[0, 2]]);
        assert_eq!(a.howell_form(), m(4, 2, &[&[2, 0], &[0, 2]]));
        assert_eq!(LambdaMatrix::zeros(6, 3, 3).howell_form().nrows(), 0);
    }

    #[test]
    fn howell_needs_annihilator_rows() {
        let a = m(4, 2, &[&[2, 1]]);
        let h = a.howell_form();
        assert_eq!(h, m(4, 2, &[&[2, 1], &[0, 2]]));
        assert!(h.span_contains(&[0, 2]));
        assert_eq!(h.span_size(), 4);
    }

    #[test]
    fn unit_normalizer_finds_units() {
        for n in 2..40u64 {
            for x in 1..n {
                let u = unit_normalizer(x, n);
                assert_eq!(u.gcd(&n), 1);
                assert_eq!(mulmod(u, x, n), x.gcd(&n));
            }
        }
    }

    #[test]
    fn kernel_and_solve() {
        let a = m(5, 2, &[&[1, 4], &[1, 4]]);
        let k = a.left_kernel();
        assert_eq!(k, m(5, 2, &[&[1, 4]]));
        let x = a.solve_left(&[2, 3]).unwrap();
        assert_eq!(a.apply_row(&x), vec![2, 3]);
        assert!(a.solve_left(&[1, 1]).is_none());
    }

    #[test]
    fn inverse_and_det() {
        let a = m(9, 2, &[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), LambdaMatrix::identity(9, 2));
        assert_eq!(a.determinant(), Some(1));
        assert!(m(9, 2, &[&[3, 0], &[0, 1]]).inverse().is_none());
    }
}
