//! Integer row lattices: Hermite normal form, integral kernels, saturation.
//!
//! A lattice is given by generator rows. `hermite_form` returns the unique
//! echelon basis with positive pivots and entries above each pivot reduced
//! into `[0, pivot)`, so two generating sets span the same lattice iff their
//! Hermite forms coincide.

use crate::arith::xgcd;

pub type Rows = Vec<Vec<i64>>;

/// Row Hermite normal form; zero rows are dropped.
pub fn hermite_form(gens: &[Vec<i64>]) -> Rows {
    let mut m: Rows = gens.to_vec();
    if m.is_empty() {
        return m;
    }
    let ncols = m[0].len();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        // Fold every row below r into row r along column c.
        for i in (r + 1)..m.len() {
            let (a, b) = (m[r][c], m[i][c]);
            if b == 0 {
                continue;
            }
            let (g, x, y) = xgcd(a, b);
            let (ag, bg) = (a / g, b / g);
            for k in 0..ncols {
                let (u, v) = (m[r][k], m[i][k]);
                m[r][k] = x * u + y * v;
                m[i][k] = -bg * u + ag * v;
            }
        }
        if m[r][c] == 0 {
            continue;
        }
        if m[r][c] < 0 {
            m[r].iter_mut().for_each(|e| *e = -*e);
        }
        let piv = m[r][c];
        for i in 0..r {
            let q = m[i][c].div_euclid(piv);
            if q != 0 {
                for k in 0..ncols {
                    m[i][k] -= q * m[r][k];
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m.retain(|row| row.iter().any(|&e| e != 0));
    m
}

/// Basis (as rows) of `{x in Z^n : A x = 0}` where `A` has `n` columns.
/// The basis comes from a unimodular transform, so the result is saturated.
pub fn integer_kernel(a: &[Vec<i64>], n: usize) -> Rows {
    // Work on columns: M = A, U = I, apply unimodular column operations.
    let mut m: Rows = a.to_vec();
    let mut u: Rows = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut c = 0;
    for row in 0..m.len() {
        if c == n {
            break;
        }
        for j in (c + 1)..n {
            let (x0, y0) = (m[row][c], m[row][j]);
            if y0 == 0 {
                continue;
            }
            let (g, x, y) = xgcd(x0, y0);
            let (ag, bg) = (x0 / g, y0 / g);
            for r in m.iter_mut() {
                let (p, q) = (r[c], r[j]);
                r[c] = x * p + y * q;
                r[j] = -bg * p + ag * q;
            }
            for r in u.iter_mut() {
                let (p, q) = (r[c], r[j]);
                r[c] = x * p + y * q;
                r[j] = -bg * p + ag * q;
            }
        }
        if m[row][c] != 0 {
            c += 1;
        }
    }
    (c..n).map(|j| (0..n).map(|i| u[i][j]).collect()).collect()
}

/// `(Q L) ∩ Z^n` for the lattice `L` spanned by `gens`, in Hermite form.
pub fn saturation(gens: &[Vec<i64>], n: usize) -> Rows {
    let perp = integer_kernel(gens, n);
    if perp.is_empty() {
        return identity(n);
    }
    hermite_form(&integer_kernel(&perp, n))
}

/// Orthogonal complement `L^⊥ ∩ Z^n` in Hermite form.
pub fn orthogonal_complement(gens: &[Vec<i64>], n: usize) -> Rows {
    hermite_form(&integer_kernel(gens, n))
}

/// Index `[sat : L]` of a full-rank sublattice `L` of `sat`, both given in
/// Hermite form with the same pivot columns. `None` if the pivot structure
/// differs (then `L` is not of finite index in `sat`).
pub fn hermite_index(sub: &[Vec<i64>], sup: &[Vec<i64>]) -> Option<i64> {
    if sub.len() != sup.len() {
        return None;
    }
    let mut num = 1i64;
    let mut den = 1i64;
    for (a, b) in sub.iter().zip(sup) {
        let pa = a.iter().position(|&e| e != 0)?;
        let pb = b.iter().position(|&e| e != 0)?;
        if pa != pb {
            return None;
        }
        num *= a[pa];
        den *= b[pb];
    }
    (num % den == 0).then_some(num / den)
}

fn identity(n: usize) -> Rows {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn dot(u: &[i64], v: &[i64]) -> i64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_vec(a: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
        a.iter().map(|r| dot(r, x)).collect()
    }

    #[test]
    fn hermite_is_canonical() {
        let g1 = vec![vec![2, 4, 0], vec![0, 3, 3]];
        let g2 = vec![vec![2, 7, 3], vec![2, 4, 0], vec![-2, -1, 3]];
        assert_eq!(hermite_form(&g1), hermite_form(&g2));
        assert_eq!(hermite_form(&g1), vec![vec![2, 1, -3], vec![0, 3, 3]]);
    }

    #[test]
    fn kernel_of_row_vector() {
        let v = vec![vec![0, 1, 2]];
        let k = integer_kernel(&v, 3);
        assert_eq!(k.len(), 2);
        for r in &k {
            assert_eq!(mat_vec(&v, r), vec![0]);
        }
        let h = hermite_form(&k);
        assert_eq!(h, vec![vec![1, 0, 0], vec![0, 2, -1]]);
    }

    #[test]
    fn kernel_is_saturated_for_multi_row() {
        let a = vec![vec![1, 0, 1, 0], vec![0, 1, 0, 1]];
        let k = integer_kernel(&a, 4);
        assert_eq!(hermite_form(&k), vec![vec![1, 0, -1, 0], vec![0, 1, 0, -1]]);
    }

    #[test]
    fn saturation_and_index() {
        let l = hermite_form(&[vec![2, 0, 0, 0], vec![0, 1, 1, 0]]);
        let s = saturation(&l, 4);
        assert_eq!(s, vec![vec![1, 0, 0, 0], vec![0, 1, 1, 0]]);
        assert_eq!(hermite_index(&l, &s), Some(2));
        assert_eq!(hermite_index(&s, &s), Some(1));
    }
}
