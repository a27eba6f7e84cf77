//! Planes in `Z^4`.
//!
//! A primitive rank-2 sublattice `L = <u, v>` is named by its Plücker vector
//! `u ∧ v = (a, b, c, d, e, f)` in the basis `e12, e13, e14, e23, e24, e34`.
//! The vector is primitive, satisfies `af - be + cd = 0`, and is fixed up to
//! sign; we keep the representative whose first nonzero entry is positive.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd_all, isqrt};
use crate::error::{Error, Result};
use crate::intlat;

/// Index pairs `(i, j)`, `i < j`, in lexicographic order.
pub const WEDGE_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PluckerVector([i64; 6]);

impl PluckerVector {
    /// Validates and sign-normalises.
    pub fn new(coords: [i64; 6]) -> Result<Self> {
        if plucker_relation(&coords) != 0 {
            return Err(Error::InvalidPlucker {
                coords,
                reason: "violates af - be + cd = 0",
            });
        }
        if gcd_all(&coords) != 1 {
            return Err(Error::InvalidPlucker {
                coords,
                reason: "not primitive",
            });
        }
        Ok(Self(sign_normalize(coords)))
    }

    pub const fn coords(&self) -> [i64; 6] {
        self.0
    }

    /// `Q_{∧²I₄}`, the sum of squares of the coordinates.
    pub fn norm(&self) -> i64 {
        self.0.iter().map(|x| x * x).sum()
    }

    /// Coordinate `p_{ij}` extended antisymmetrically to all `i, j`.
    fn entry(&self, i: usize, j: usize) -> i64 {
        if i == j {
            return 0;
        }
        let (lo, hi, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
        let k = WEDGE_PAIRS.iter().position(|&p| p == (lo, hi)).unwrap();
        sign * self.0[k]
    }
}

pub fn plucker_relation(p: &[i64; 6]) -> i64 {
    let [a, b, c, d, e, f] = *p;
    a * f - b * e + c * d
}

fn sign_normalize(mut coords: [i64; 6]) -> [i64; 6] {
    if coords.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        coords.iter_mut().for_each(|x| *x = -*x);
    }
    coords
}

/// Outcome of `u ∧ v` for independent `u, v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Wedge {
    Primitive(PluckerVector),
    /// `content > 1`: the span has index `content` in its saturation.
    Imprimitive { raw: [i64; 6], content: i64 },
}

impl Wedge {
    pub fn is_primitive(&self) -> bool {
        matches!(self, Self::Primitive(_))
    }
}

pub fn wedge(u: &[i64; 4], v: &[i64; 4]) -> [i64; 6] {
    WEDGE_PAIRS.map(|(i, j)| u[i] * v[j] - u[j] * v[i])
}

pub fn plucker_of_basis(u: &[i64; 4], v: &[i64; 4]) -> Result<Wedge> {
    let raw = wedge(u, v);
    match gcd_all(&raw) {
        0 => Err(Error::DegenerateBasis),
        1 => Ok(Wedge::Primitive(PluckerVector(sign_normalize(raw)))),
        content => Ok(Wedge::Imprimitive { raw, content }),
    }
}

/// Plücker vector of `L^⊥`: `(a:b:c:d:e:f) -> (f:-e:d:c:-b:a)`.
pub fn orth_complement(p: &PluckerVector) -> PluckerVector {
    let [a, b, c, d, e, f] = p.0;
    PluckerVector(sign_normalize([f, -e, d, c, -b, a]))
}

/// A primitive plane with its Hermite-form basis and Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Plane {
    basis: [[i64; 4]; 2],
    plucker: PluckerVector,
    gram: [[i64; 2]; 2],
}

impl Plane {
    /// Plane spanned by `u, v`; fails if they are dependent or span a
    /// non-primitive lattice.
    pub fn from_basis(u: [i64; 4], v: [i64; 4]) -> Result<Self> {
        match plucker_of_basis(&u, &v)? {
            Wedge::Primitive(p) => Ok(Self::assemble(hermite2(&[u.to_vec(), v.to_vec()]), p)),
            Wedge::Imprimitive { raw, .. } => Err(Error::InvalidPlucker {
                coords: raw,
                reason: "basis spans a non-primitive lattice",
            }),
        }
    }

    /// Recover the plane from its Plücker vector.
    ///
    /// Contracting `u ∧ v` with `e_i` gives `u_i v - v_i u`, so the four
    /// contractions span a finite-index sublattice of `L`; saturating it
    /// gives `L`.
    pub fn from_plucker(p: PluckerVector) -> Self {
        let gens: Vec<Vec<i64>> = (0..4)
            .map(|i| (0..4).map(|j| p.entry(i, j)).collect())
            .collect();
        let sat = intlat::saturation(&gens, 4);
        debug_assert_eq!(sat.len(), 2);
        Self::assemble(to_basis(&sat), p)
    }

    fn assemble(basis: [[i64; 4]; 2], plucker: PluckerVector) -> Self {
        let [u, v] = basis;
        let d = |x: &[i64; 4], y: &[i64; 4]| intlat::dot(x, y);
        let gram = [[d(&u, &u), d(&u, &v)], [d(&u, &v), d(&v, &v)]];
        Self { basis, plucker, gram }
    }

    pub fn basis(&self) -> &[[i64; 4]; 2] {
        &self.basis
    }

    pub fn plucker(&self) -> PluckerVector {
        self.plucker
    }

    pub fn gram(&self) -> [[i64; 2]; 2] {
        self.gram
    }

    /// `-4 det(Gram)`.
    pub fn disc(&self) -> i64 {
        let [[a, b], [_, c]] = self.gram;
        -4 * (a * c - b * b)
    }

    /// `-4 Q_{∧²I₄}(u ∧ v)`.
    pub fn disc_from_plucker(&self) -> i64 {
        -4 * self.plucker.norm()
    }

    /// `n` with `disc = -4n`.
    pub fn n(&self) -> i64 {
        self.plucker.norm()
    }

    /// Index of `<basis>` in its saturation, computed from Hermite forms.
    pub fn saturation_index(&self) -> i64 {
        let rows: Vec<Vec<i64>> = self.basis.iter().map(|r| r.to_vec()).collect();
        let h = intlat::hermite_form(&rows);
        let sat = intlat::saturation(&rows, 4);
        intlat::hermite_index(&h, &sat).expect("same rational span")
    }

    /// `L^⊥ ∩ Z^4` computed as an integral kernel, independently of the
    /// Plücker permutation rule.
    pub fn orthogonal_plane(&self) -> Plane {
        let rows: Vec<Vec<i64>> = self.basis.iter().map(|r| r.to_vec()).collect();
        let perp = intlat::orthogonal_complement(&rows, 4);
        let [u, v] = to_basis(&perp);
        Plane::from_basis(u, v).expect("orthogonal complement is primitive")
    }

    pub fn to_record(&self) -> PlaneRecord {
        PlaneRecord {
            plucker: self.plucker.coords(),
            basis: self.basis,
            disc: self.disc(),
        }
    }
}

/// JSON shape of a plane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneRecord {
    pub plucker: [i64; 6],
    pub basis: [[i64; 4]; 2],
    pub disc: i64,
}

fn hermite2(rows: &[Vec<i64>]) -> [[i64; 4]; 2] {
    to_basis(&intlat::hermite_form(rows))
}

fn to_basis(rows: &[Vec<i64>]) -> [[i64; 4]; 2] {
    assert_eq!(rows.len(), 2, "expected a rank-2 lattice");
    let r = |k: usize| [rows[k][0], rows[k][1], rows[k][2], rows[k][3]];
    [r(0), r(1)]
}

/// Visit every Plücker vector (both signs) with norm `<= nmax` satisfying
/// the relation, restricted to `a = a0`. The relation is linear in
/// `(d, e, f)` with coefficients `(c, -b, a)`: one of them is solved for
/// and the other two are looped over.
fn visit_shard(a: i64, nmax: i64, visit: &mut impl FnMut([i64; 6])) {
    let r = isqrt(nmax).unwrap();
    let sa = a * a;
    for b in -r..=r {
        let sb = sa + b * b;
        if sb > nmax {
            continue;
        }
        for c in -r..=r {
            let s3 = sb + c * c;
            if s3 > nmax {
                continue;
            }
            let rem = nmax - s3;
            let q = isqrt(rem).unwrap();
            if a != 0 {
                // a f = b e - c d
                for d in -q..=q {
                    let rd = rem - d * d;
                    if rd < 0 {
                        continue;
                    }
                    let qe = isqrt(rd).unwrap();
                    for e in -qe..=qe {
                        let num = b * e - c * d;
                        if num % a != 0 {
                            continue;
                        }
                        let f = num / a;
                        if e * e + f * f <= rd {
                            visit([a, b, c, d, e, f]);
                        }
                    }
                }
            } else if b != 0 {
                // b e = c d
                for d in -q..=q {
                    if (c * d) % b != 0 {
                        continue;
                    }
                    let e = c * d / b;
                    let rde = rem - d * d - e * e;
                    if rde < 0 {
                        continue;
                    }
                    let qf = isqrt(rde).unwrap();
                    for f in -qf..=qf {
                        visit([a, b, c, d, e, f]);
                    }
                }
            } else if c != 0 {
                // c d = 0
                for e in -q..=q {
                    let re = rem - e * e;
                    let qf = isqrt(re).unwrap();
                    for f in -qf..=qf {
                        visit([a, b, c, 0, e, f]);
                    }
                }
            } else {
                for d in -q..=q {
                    let rd = rem - d * d;
                    let qe = isqrt(rd).unwrap();
                    for e in -qe..=qe {
                        let re = rd - e * e;
                        let qf = isqrt(re).unwrap();
                        for f in -qf..=qf {
                            visit([a, b, c, d, e, f]);
                        }
                    }
                }
            }
        }
    }
}

fn is_normalized_primitive(p: &[i64; 6]) -> bool {
    p.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0) && gcd_all(p) == 1
}

/// Sign-normalised primitive Plücker vectors of norm exactly `n`, sorted.
pub fn plucker_vectors(n: u64) -> Vec<PluckerVector> {
    let n = n as i64;
    let r = isqrt(n).unwrap();
    let mut out: Vec<PluckerVector> = (0..=r)
        .into_par_iter()
        .flat_map_iter(|a| {
            let mut shard = Vec::new();
            visit_shard(a, n, &mut |p| {
                if p.iter().map(|x| x * x).sum::<i64>() == n && is_normalized_primitive(&p) {
                    shard.push(PluckerVector(p));
                }
            });
            shard
        })
        .collect();
    out.sort_unstable();
    out
}

/// All primitive planes of discriminant `-4n`, in Plücker order.
pub fn enumerate_planes(n: u64) -> Vec<Plane> {
    assert!(n >= 1, "enumerate_planes needs n >= 1");
    plucker_vectors(n).into_iter().map(Plane::from_plucker).collect()
}

/// `counts[n] = r24(n)` for `0 <= n <= nmax` (with `counts[0] = 0`), by one
/// sweep over Plücker vectors. Sign-normalisation keeps only `a >= 0`.
pub fn plane_counts_up_to(nmax: u64) -> Vec<u64> {
    let nmax = nmax as i64;
    let r = isqrt(nmax).unwrap();
    (0..=r)
        .into_par_iter()
        .map(|a| {
            let mut counts = vec![0u64; nmax as usize + 1];
            visit_shard(a, nmax, &mut |p| {
                if is_normalized_primitive(&p) {
                    let n: i64 = p.iter().map(|x| x * x).sum();
                    counts[n as usize] += 1;
                }
            });
            counts
        })
        .reduce(
            || vec![0u64; nmax as usize + 1],
            |mut acc, c| {
                acc.iter_mut().zip(c).for_each(|(x, y)| *x += y);
                acc
            },
        )
}

/// Symmetric positive definite integral 4×4 matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SymMatrix4([[i64; 4]; 4]);

impl SymMatrix4 {
    pub fn new(m: [[i64; 4]; 4]) -> Result<Self> {
        for i in 0..4 {
            for j in 0..4 {
                if m[i][j] != m[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        let pd = (1..=4).all(|k| {
            let minor: Vec<Vec<BigRational>> = (0..k)
                .map(|i| (0..k).map(|j| BigRational::from_integer(m[i][j].into())).collect())
                .collect();
            determinant(minor).is_positive()
        });
        if !pd {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self::diag([1, 1, 1, 1]).unwrap()
    }

    pub fn diag(d: [i64; 4]) -> Result<Self> {
        let mut m = [[0; 4]; 4];
        for i in 0..4 {
            m[i][i] = d[i];
        }
        Self::new(m)
    }

    pub fn entries(&self) -> [[i64; 4]; 4] {
        self.0
    }

    /// Matrix of `Q_{∧²x}`: entry `((i,j),(k,l))` is `x_ik x_jl - x_il x_jk`.
    pub fn wedge2(&self) -> [[i64; 6]; 6] {
        let x = &self.0;
        let mut w = [[0; 6]; 6];
        for (r, &(i, j)) in WEDGE_PAIRS.iter().enumerate() {
            for (s, &(k, l)) in WEDGE_PAIRS.iter().enumerate() {
                w[r][s] = x[i][k] * x[j][l] - x[i][l] * x[j][k];
            }
        }
        w
    }

    pub fn wedge2_form(&self, v: &[i64; 6]) -> i64 {
        let w = self.wedge2();
        (0..6)
            .map(|r| (0..6).map(|s| v[r] * w[r][s] * v[s]).sum::<i64>())
            .sum()
    }

    /// Determinant of the lower-right 2×2 block.
    pub fn d2(&self) -> i64 {
        self.0[2][2] * self.0[3][3] - self.0[2][3] * self.0[3][2]
    }
}

fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in (col + 1)..n {
            let factor = &m[r][col] / &p;
            for c in col..n {
                let t = &factor * &m[col][c];
                m[r][c] -= t;
            }
        }
    }
    det
}

fn inverse_diagonal(m: &[[i64; 6]; 6]) -> [BigRational; 6] {
    // Gauss–Jordan on [M | I].
    let n = 6;
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from_integer(m[i][j].into())
                    } else {
                        BigRational::from_integer(BigInt::from(i64::from(j - n == i)))
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("invertible");
        a.swap(piv, col);
        let p = a[col][col].clone();
        a[col].iter_mut().for_each(|x| *x /= &p);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..2 * n {
                    let t = &factor * &a[col][c];
                    a[r][c] -= t;
                }
            }
        }
    }
    std::array::from_fn(|i| a[i][n + i].clone())
}

/// `counts[k] = r_P(x; k)` for `k <= kmax`: sign classes of primitive
/// Plücker vectors `v` with `Q_{∧²x}(v) = k`.
///
/// Coordinates are bounded by `v_i^2 <= kmax (M^{-1})_{ii}`, the maximum of
/// `v_i^2` on the ellipsoid `v^T M v <= kmax`.
pub fn rp_counts(x: &SymMatrix4, kmax: u64) -> Vec<u64> {
    let w = x.wedge2();
    let inv = inverse_diagonal(&w);
    let k = BigRational::from_integer(BigInt::from(kmax));
    let bound: [i64; 6] = std::array::from_fn(|i| {
        let t = (&k * &inv[i]).floor().to_integer().to_i64().unwrap();
        isqrt(t).unwrap()
    });
    let q = |v: &[i64; 6]| -> i64 {
        (0..6)
            .map(|r| (0..6).map(|s| v[r] * w[r][s] * v[s]).sum::<i64>())
            .sum()
    };
    let mut counts = vec![0u64; kmax as usize + 1];
    let mut record = |v: [i64; 6]| {
        let val = q(&v);
        if val >= 1 && val <= kmax as i64 && is_normalized_primitive(&v) {
            counts[val as usize] += 1;
        }
    };
    let rng = |i: usize| -bound[i]..=bound[i];
    for a in 0..=bound[0] {
        for b in rng(1) {
            for c in rng(2) {
                for d in rng(3) {
                    for e in rng(4) {
                        if a != 0 {
                            let num = b * e - c * d;
                            if num % a == 0 && (num / a).abs() <= bound[5] {
                                record([a, b, c, d, e, num / a]);
                            }
                        } else if b * e == c * d {
                            for f in rng(5) {
                                record([a, b, c, d, e, f]);
                            }
                        }
                    }
                }
            }
        }
    }
    counts
}

pub fn rp_count(x: &SymMatrix4, k: u64) -> u64 {
    rp_counts(x, k)[k as usize]
}

/// Value of a partial Dirichlet sum: exact for non-negative integer `s`.
#[derive(Clone, Debug, PartialEq)]
pub enum SeriesValue {
    Exact(BigRational),
    Approx(f64),
}

impl SeriesValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            Self::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Self::Approx(x) => *x,
        }
    }
}

/// `Σ_{k <= kmax} r_P(x; k) k^{-s}`.
pub fn zp_partial(x: &SymMatrix4, s: Ratio<i64>, kmax: u64) -> SeriesValue {
    let counts = if kmax == 0 { vec![0] } else { rp_counts(x, kmax) };
    if s.is_integer() && !s.is_negative() {
        let e = s.to_integer() as u32;
        let mut acc = BigRational::zero();
        for (k, &r) in counts.iter().enumerate().skip(1) {
            if r > 0 {
                acc += BigRational::new(BigInt::from(r), BigInt::from(k).pow(e));
            }
        }
        SeriesValue::Exact(acc)
    } else {
        let sf = *s.numer() as f64 / *s.denom() as f64;
        SeriesValue::Approx(
            counts
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &r)| r as f64 * (k as f64).powf(-sf))
                .sum(),
        )
    }
}

/// Groups planes by `n` for `1 <= n <= nmax`.
pub fn planes_by_norm(nmax: u64) -> BTreeMap<u64, Vec<Plane>> {
    (1..=nmax).map(|n| (n, enumerate_planes(n))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Naive six-fold loop, the reference for small norms.
    fn brute_force_count(n: i64) -> u64 {
        let r = isqrt(n).unwrap();
        let mut count = 0;
        let rr = || -r..=r;
        for a in rr() {
            for b in rr() {
                for c in rr() {
                    for d in rr() {
                        for e in rr() {
                            for f in rr() {
                                let p = [a, b, c, d, e, f];
                                if p.iter().map(|x| x * x).sum::<i64>() == n
                                    && plucker_relation(&p) == 0
                                    && gcd_all(&p) == 1
                                {
                                    count += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
        count / 2
    }

    #[test]
    fn brute_force_reference_values() {
        // frozen from the six-fold loop
        assert_eq!(brute_force_count(1), 6);
        assert_eq!(brute_force_count(2), 24);
        assert_eq!(brute_force_count(3), 32);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let counts = plane_counts_up_to(12);
        for n in 1..=12u64 {
            let bf = brute_force_count(n as i64);
            assert_eq!(plucker_vectors(n).len() as u64, bf, "n={n}");
            assert_eq!(counts[n as usize], bf, "batch n={n}");
        }
    }

    #[test]
    fn plucker_of_coordinate_planes() {
        let e = |i: usize| {
            let mut v = [0; 4];
            v[i] = 1;
            v
        };
        assert_eq!(
            plucker_of_basis(&e(0), &e(1)).unwrap(),
            Wedge::Primitive(PluckerVector([1, 0, 0, 0, 0, 0]))
        );
        assert_eq!(
            plucker_of_basis(&e(2), &e(3)).unwrap(),
            Wedge::Primitive(PluckerVector([0, 0, 0, 0, 0, 1]))
        );
    }

    #[test]
    fn plucker_of_mixed_basis() {
        let w = wedge(&[1, 0, 1, 0], &[0, 1, 0, 1]);
        assert_eq!(w, [1, 0, 1, -1, 0, 1]);
        assert_eq!(plucker_relation(&w), 0);
    }

    #[test]
    fn plucker_errors_and_imprimitive_flag() {
        assert_eq!(plucker_of_basis(&[1, 2, 3, 4], &[2, 4, 6, 8]), Err(Error::DegenerateBasis));
        let w = plucker_of_basis(&[2, 0, 0, 0], &[0, 1, 0, 0]).unwrap();
        assert_eq!(
            w,
            Wedge::Imprimitive {
                raw: [2, 0, 0, 0, 0, 0],
                content: 2
            }
        );
        assert!(PluckerVector::new([1, 1, 0, 0, 0, 0]).is_ok());
        assert!(PluckerVector::new([1, 0, 0, 0, 0, 1]).is_err());
        assert!(PluckerVector::new([2, 0, 0, 0, 0, 0]).is_err());
        assert_eq!(
            PluckerVector::new([0, -1, 0, 0, 0, 0]).unwrap().coords(),
            [0, 1, 0, 0, 0, 0]
        );
    }

    #[test]
    fn orth_complement_examples() {
        let p = PluckerVector::new([1, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(orth_complement(&p).coords(), [0, 0, 0, 0, 0, 1]);
        let q = PluckerVector::new([1, 0, 1, -1, 0, 1]).unwrap();
        assert_eq!(orth_complement(&q).coords(), [1, 0, -1, 1, 0, 1]);
        assert_eq!(orth_complement(&orth_complement(&q)), q);
    }

    #[test]
    fn disc_examples() {
        let p = Plane::from_basis([1, 0, 0, 0], [0, 1, 0, 0]).unwrap();
        assert_eq!(p.disc(), -4);
        let p = Plane::from_basis([1, 1, 0, 0], [0, 0, 1, 1]).unwrap();
        assert_eq!(p.disc(), -16);
        assert_eq!(p.disc_from_plucker(), -16);
        let p = Plane::from_plucker(PluckerVector::new([1, 0, 1, -1, 0, 1]).unwrap());
        assert_eq!(p.disc(), -16);
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_planes(1).len(), 6);
        assert!(enumerate_planes(7).is_empty());
        assert_eq!(enumerate_planes(2).len(), 24);
    }

    #[test]
    fn planes_are_consistent() {
        for n in 1..=30 {
            for plane in enumerate_planes(n) {
                assert_eq!(plane.disc(), -4 * n as i64);
                assert_eq!(plane.disc_from_plucker(), plane.disc());
                let [u, v] = plane.basis();
                assert_eq!(plucker_of_basis(u, v).unwrap(), Wedge::Primitive(plane.plucker()));
                assert_eq!(plane.saturation_index(), 1);
            }
        }
    }

    #[test]
    fn complement_formula_matches_kernel() {
        for n in 1..=25 {
            let mut from_formula = Vec::new();
            let mut all = Vec::new();
            for plane in enumerate_planes(n) {
                let perp = plane.orthogonal_plane();
                assert_eq!(perp.plucker(), orth_complement(&plane.plucker()));
                assert_eq!(perp.disc(), plane.disc());
                from_formula.push(orth_complement(&plane.plucker()));
                all.push(plane.plucker());
            }
            from_formula.sort();
            assert_eq!(from_formula, all, "orth_complement permutes R24({n})");
        }
    }

    #[test]
    fn saturation_index_detects_imprimitive() {
        let p = Plane::from_basis([1, 0, 0, 0], [0, 1, 0, 0]).unwrap();
        let doubled = Plane {
            basis: [[2, 0, 0, 0], [0, 1, 0, 0]],
            ..p
        };
        assert_eq!(doubled.saturation_index(), 2);
    }

    #[test]
    fn sym_matrix_validation() {
        assert!(SymMatrix4::diag([1, 1, 1, 0]).is_err());
        assert!(SymMatrix4::diag([1, -1, 1, 1]).is_err());
        let mut m = SymMatrix4::diag([2, 2, 1, 1]).unwrap().entries();
        m[0][1] = 1;
        assert_eq!(SymMatrix4::new(m), Err(Error::NotSymmetric));
        m[1][0] = 1;
        assert!(SymMatrix4::new(m).is_ok());
        m[0][1] = 3;
        m[1][0] = 3;
        assert_eq!(SymMatrix4::new(m), Err(Error::NotPositiveDefinite));
    }

    #[test]
    fn rp_count_identity_is_r24() {
        let id = SymMatrix4::identity();
        let counts = rp_counts(&id, 50);
        let reference = plane_counts_up_to(50);
        assert_eq!(counts, reference);
        assert_eq!(rp_count(&id, 1), 6);
    }

    #[test]
    fn rp_count_weighted_diagonal() {
        // Q = a²+b²+2c²+d²+2e²+2f²: value 1 only at e12, e13, e23.
        let x = SymMatrix4::diag([1, 1, 1, 2]).unwrap();
        assert_eq!(rp_count(&x, 1), 3);
    }

    #[test]
    fn rp_count_matches_brute_force_for_nondiagonal() {
        let x = SymMatrix4::new([[2, 1, 0, 0], [1, 2, 0, 0], [0, 0, 1, 0], [0, 0, 0, 3]]).unwrap();
        let counts = rp_counts(&x, 20);
        let mut reference = vec![0u64; 21];
        let r = 6;
        for a in -r..=r {
            for b in -r..=r {
                for c in -r..=r {
                    for d in -r..=r {
                        for e in -r..=r {
                            for f in -r..=r {
                                let v = [a, b, c, d, e, f];
                                let q = x.wedge2_form(&v);
                                if (1..=20).contains(&q) && plucker_relation(&v) == 0 && gcd_all(&v) == 1 {
                                    reference[q as usize] += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
        reference.iter_mut().for_each(|c| *c /= 2);
        assert_eq!(counts, reference);
    }

    #[test]
    fn zp_partial_examples() {
        let id = SymMatrix4::identity();
        let int = |n: i64| BigRational::from_integer(n.into());
        assert_eq!(zp_partial(&id, Ratio::from_integer(0), 3), SeriesValue::Exact(int(62)));
        assert_eq!(zp_partial(&id, Ratio::from_integer(1), 1), SeriesValue::Exact(int(6)));
        assert_eq!(zp_partial(&id, Ratio::from_integer(2), 0), SeriesValue::Exact(int(0)));
        let SeriesValue::Approx(v) = zp_partial(&id, Ratio::new(3, 2), 2) else {
            panic!("non-integer exponent must be approximate");
        };
        assert!((v - (6.0 + 24.0 / 2f64.powf(1.5))).abs() < 1e-12);
        // 6 + 24/4 + 32/9
        assert_eq!(
            zp_partial(&id, Ratio::from_integer(2), 3),
            SeriesValue::Exact(BigRational::new(140.into(), 9.into()))
        );
    }

    fn mat_mul(a: &[[i64; 4]; 4], b: &[[i64; 4]; 4]) -> [[i64; 4]; 4] {
        std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| a[i][k] * b[k][j]).sum()))
    }

    fn transpose(a: &[[i64; 4]; 4]) -> [[i64; 4]; 4] {
        std::array::from_fn(|i| std::array::from_fn(|j| a[j][i]))
    }

    /// Product of elementary row operations and row swaps, hence unimodular.
    fn unimodular(ops: &[(usize, usize, i64)]) -> [[i64; 4]; 4] {
        let mut m: [[i64; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| i64::from(i == j)));
        for &(i, j, t) in ops {
            if i == j {
                m.swap(i, (i + 1) % 4);
            } else {
                for k in 0..4 {
                    m[i][k] += t * m[j][k];
                }
            }
        }
        m
    }

    proptest::proptest! {
        #[test]
        fn bottom_minor_determinant_is_wedge_form(
            ops in proptest::collection::vec((0usize..4, 0usize..4, -2i64..=2), 1..8),
            which in 0usize..3,
        ) {
            let x = [
                SymMatrix4::identity(),
                SymMatrix4::diag([1, 1, 1, 2]).unwrap(),
                SymMatrix4::diag([1, 1, 2, 3]).unwrap(),
            ][which];
            let delta = unimodular(&ops);
            let conj = mat_mul(&mat_mul(&delta, &x.entries()), &transpose(&delta));
            let lhs = SymMatrix4(conj).d2();
            let v2 = wedge(&delta[2], &delta[3]);
            proptest::prop_assert_eq!(lhs, x.wedge2_form(&v2));
        }
    }
}
