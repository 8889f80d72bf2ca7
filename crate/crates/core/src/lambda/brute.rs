//! Exhaustive enumeration over (Z/n)^r for small r, used to cross-check the
//! canonical-form algorithms.

use std::collections::HashSet;

use num_integer::Integer;

use super::matrix::LambdaMatrix;

/// Every vector of (Z/n)^r.
pub fn all_vectors(n: u64, r: usize) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::with_capacity(r)];
    for _ in 0..r {
        let mut next = Vec::with_capacity(out.len() * n as usize);
        for v in &out {
            for x in 0..n {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// The row span by closure under addition and scaling.
pub fn span(m: &LambdaMatrix) -> HashSet<Vec<u64>> {
    let n = m.modulus();
    let mut set: HashSet<Vec<u64>> = HashSet::new();
    set.insert(vec![0; m.ncols()]);
    for i in 0..m.nrows() {
        let row = m.row(i);
        let mut next = HashSet::new();
        for v in &set {
            for c in 0..n {
                next.insert(v.iter().zip(row).map(|(&a, &b)| (a + c * b) % n).collect::<Vec<u64>>());
            }
        }
        set = next;
    }
    set
}

/// All x with x·A = 0.
pub fn left_kernel(a: &LambdaMatrix) -> HashSet<Vec<u64>> {
    all_vectors(a.modulus(), a.nrows()).into_iter().filter(|x| a.apply_row(x).iter().all(|&v| v == 0)).collect()
}

/// Counts |G[d]| for each divisor d of n, for G = K/I with I ⊆ K given as element sets.
pub fn torsion_profile(n: u64, k: &HashSet<Vec<u64>>, i: &HashSet<Vec<u64>>) -> Vec<(u64, u128)> {
    divisors(n)
        .into_iter()
        .map(|d| {
            let hits = k.iter().filter(|x| i.contains(&x.iter().map(|&v| v * d % n).collect::<Vec<u64>>())).count();
            (d, (hits / i.len()) as u128)
        })
        .collect()
}

/// The same profile computed from invariant factors.
pub fn torsion_profile_of(n: u64, factors: &[u64]) -> Vec<(u64, u128)> {
    divisors(n).into_iter().map(|d| (d, factors.iter().map(|&f| d.gcd(&f) as u128).product())).collect()
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Homology at the middle of Λ^a --A--> Λ^b --B--> Λ^c by enumeration, as a torsion profile.
pub fn middle_homology_profile(a: &LambdaMatrix, b: &LambdaMatrix) -> Vec<(u64, u128)> {
    let n = b.modulus();
    let ker = left_kernel(b);
    let im = span(a);
    torsion_profile(n, &ker, &im)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_of_example() {
        let a = LambdaMatrix::from_rows(4, 2, &[vec![2, 2], vec![0, 2]]).unwrap();
        let b = LambdaMatrix::from_rows(4, 2, &[vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(span(&a), span(&b));
        assert_eq!(span(&a).len(), 4);
    }

    #[test]
    fn kernel_example() {
        let a = LambdaMatrix::from_rows(5, 2, &[vec![1, -1], vec![1, -1]]).unwrap();
        let k = left_kernel(&a);
        assert_eq!(k.len(), 5);
        assert!(k.contains(&vec![1, 4]));
    }

    #[test]
    fn profiles_agree_for_cyclic() {
        let n = 8;
        let k: HashSet<Vec<u64>> = all_vectors(n, 1).into_iter().collect();
        let i = span(&LambdaMatrix::from_rows(n, 1, &[vec![2]]).unwrap());
        assert_eq!(torsion_profile(n, &k, &i), torsion_profile_of(n, &[2]));
    }
}
