//! Representation numbers `r3`, `r3_prim` and `r24`: brute-force counts and
//! closed formulas.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, exact_sqrt, in_plane_disc_set, isqrt, legendre, omega, prime_divisors, squarefree_decomposition};
use crate::error::{Error, Result};
use crate::klein::klein_count;
use crate::lattice::{plane_counts_up_to, plucker_vectors};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `#{(x, y, z) : x² + y² + z² = n}`.
pub fn r3(n: u64) -> u64 {
    sum_three_squares(n, false)
}

pub fn r3_prim_brute(n: u64) -> u64 {
    sum_three_squares(n, true)
}

fn sum_three_squares(n: u64, primitive: bool) -> u64 {
    let n = n as i64;
    let r = isqrt(n).unwrap();
    let mut count = 0;
    for x in -r..=r {
        for y in -r..=r {
            let rest = n - x * x - y * y;
            let Some(z) = (rest >= 0).then(|| exact_sqrt(rest)).flatten() else {
                continue;
            };
            if primitive && x.gcd(&y).gcd(&z) != 1 {
                continue;
            }
            count += if z == 0 { 1 } else { 2 };
        }
    }
    count
}

/// `r3(n0) m ∏_{p|m} (1 - (-n0/p)/p)` for `n = n0 m²` with `m` odd;
/// `None` when `m` is even.
pub fn r3_prim_formula(n: u64) -> Option<BigRational> {
    let (n0, m) = squarefree_decomposition(n);
    if m % 2 == 0 {
        return None;
    }
    let mut acc = int(r3(n0) * m);
    for p in prime_divisors(m) {
        acc *= rat(p as i64 - i64::from(legendre(-(n0 as i64), p)), p as i64);
    }
    Some(acc)
}

/// Primitive count: the formula when it applies, brute force otherwise.
pub fn r3_prim(n: u64) -> u64 {
    match r3_prim_formula(n) {
        Some(v) => {
            assert!(v.is_integer(), "r3_prim formula non-integral at {n}");
            v.to_integer().to_u64().unwrap()
        }
        None => r3_prim_brute(n),
    }
}

/// `d = d0 · 4^e · f²` with `d0` squarefree, `f` odd, `e ∈ {0, 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepDecomposition {
    pub d: u64,
    pub d0: u64,
    pub e: u32,
    pub f: u64,
}

impl RepDecomposition {
    /// `None` if the square part of `d` has a factor 4 beyond `4^1`.
    pub fn of(d: u64) -> Option<Self> {
        assert!(d >= 1);
        let (d0, s) = squarefree_decomposition(d);
        let e = s.trailing_zeros();
        (e <= 1).then(|| Self { d, d0, e, f: s >> e })
    }

    /// `c_d`.
    pub fn c_d(&self) -> BigRational {
        match self.d % 4 {
            3 => rat(1, 2),
            1 | 2 => rat(1, 6),
            _ => rat(1, 3),
        }
    }
}

/// `f² Σ_{c|f} 2^{ω(c)}/c ∏_{p|f} (1 - (-d0/p)/p)^{e_p(f/c)}` for odd `f`.
pub fn fsum_term(d0: u64, f: u64) -> BigRational {
    assert!(f % 2 == 1, "f must be odd");
    let primes = prime_divisors(f);
    let factor: Vec<BigRational> = primes
        .iter()
        .map(|&p| rat(p as i64 - i64::from(legendre(-(d0 as i64), p)), p as i64))
        .collect();
    let mut sum = BigRational::zero();
    for c in divisors(f) {
        let mut term = BigRational::new(BigInt::from(1u64 << omega(c)), BigInt::from(c));
        let cofactor = f / c;
        for (&p, a) in primes.iter().zip(&factor) {
            term *= a;
            if cofactor % p == 0 {
                term *= a;
            }
        }
        sum += term;
    }
    sum * int(f) * int(f)
}

/// Closed formula for `r24(d)`, exact.
pub fn r24_formula_exact(d: u64) -> BigRational {
    if !in_plane_disc_set(d) {
        return BigRational::zero();
    }
    let dec = RepDecomposition::of(d).expect("every d in the attainable set decomposes");
    let r = int(r3(dec.d0));
    dec.c_d() * &r * &r * fsum_term(dec.d0, dec.f)
}

pub fn r24_formula(d: u64) -> Result<u64> {
    let v = r24_formula_exact(d);
    if !v.is_integer() || v < BigRational::zero() {
        return Err(Error::NonIntegralFormula { d, value: v.to_string() });
    }
    Ok(v.to_integer().to_u64().unwrap())
}

/// `r24(d)` counted twice: Plücker vectors and Klein pairs.
pub fn r24_oracle(d: u64) -> Result<u64> {
    let plucker = plucker_vectors(d).len() as u64;
    let klein = klein_count(d);
    if plucker != klein {
        return Err(Error::OracleDisagreement { d, plucker, klein });
    }
    Ok(plucker)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRecord {
    pub d: u64,
    pub r24_formula: u64,
    pub r24_oracle: u64,
    pub agree: bool,
}

pub fn count_record(d: u64) -> Result<CountRecord> {
    let (f, o) = (r24_formula(d)?, r24_oracle(d)?);
    Ok(CountRecord { d, r24_formula: f, r24_oracle: o, agree: f == o })
}

/// `count_record` for every `1 <= d <= dmax`, with the Plücker counts
/// taken from one enumeration sweep.
pub fn count_table(dmax: u64) -> Result<Vec<CountRecord>> {
    let sweep = plane_counts_up_to(dmax);
    (1..=dmax)
        .into_par_iter()
        .map(|d| {
            let plucker = sweep[d as usize];
            let klein = klein_count(d);
            if plucker != klein {
                return Err(Error::OracleDisagreement { d, plucker, klein });
            }
            let f = r24_formula(d)?;
            Ok(CountRecord { d, r24_formula: f, r24_oracle: plucker, agree: f == plucker })
        })
        .collect()
}

/// Exact coefficients of a Dirichlet series `Σ a(d) d^{-w}`, `d <= dmax`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCoeffs {
    pub dmax: u64,
    coeffs: BTreeMap<u64, BigRational>,
}

impl DirichletCoeffs {
    pub fn get(&self, d: u64) -> BigRational {
        self.coeffs.get(&d).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.coeffs.iter().map(|(&d, c)| (d, c))
    }

    /// `Σ a(d) d^{-w}` in floating point.
    pub fn eval(&self, w: f64) -> f64 {
        self.iter()
            .map(|(d, c)| c.to_f64().unwrap() * (d as f64).powf(-w))
            .sum()
    }
}

/// `r24(d)` for `d ≡ 3 (mod 4)`, `d <= dmax`, by formula.
pub fn rs3_coeffs(dmax: u64) -> DirichletCoeffs {
    let coeffs = (1..=dmax)
        .filter(|d| d % 4 == 3)
        .map(|d| (d, r24_formula_exact(d)))
        .filter(|(_, c)| !c.is_zero())
        .collect();
    DirichletCoeffs { dmax, coeffs }
}

/// Squarefree `d0 ≡ 3 (mod 8)` up to `dmax`.
pub fn admissible_d0(dmax: u64) -> Vec<u64> {
    (1..=dmax)
        .filter(|&d| d % 8 == 3 && crate::arith::is_squarefree(d))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::enumerate_planes;

    #[test]
    fn r3_examples() {
        assert_eq!(r3(1), 6);
        assert_eq!(r3(3), 8);
        assert_eq!(r3(7), 0);
        assert_eq!(r3(11), 24);
        assert_eq!(r3(9), 30);
    }

    #[test]
    fn r3_prim_examples() {
        assert_eq!(r3_prim(1), 6);
        assert_eq!(r3_prim(9), 24);
        assert_eq!(r3_prim_brute(9), 24);
        assert_eq!(r3_prim(4), 0);
        assert_eq!(r3_prim_formula(4), None);
    }

    #[test]
    fn r3_prim_formula_matches_brute_force() {
        for n in 1..=300 {
            if let Some(v) = r3_prim_formula(n) {
                assert_eq!(v, int(r3_prim_brute(n)), "n={n}");
            }
        }
    }

    #[test]
    fn decomposition() {
        assert_eq!(RepDecomposition::of(45), Some(RepDecomposition { d: 45, d0: 5, e: 0, f: 3 }));
        assert_eq!(RepDecomposition::of(8), Some(RepDecomposition { d: 8, d0: 2, e: 1, f: 1 }));
        assert_eq!(RepDecomposition::of(36), Some(RepDecomposition { d: 36, d0: 1, e: 1, f: 3 }));
        assert_eq!(RepDecomposition::of(16), None);
    }

    #[test]
    fn r24_formula_examples() {
        assert_eq!(r24_formula(1).unwrap(), 6);
        assert_eq!(r24_formula(45).unwrap(), 768);
        assert_eq!(r24_formula(16).unwrap(), 0);
        assert_eq!(r24_formula(3).unwrap(), 32);
        assert_eq!(r24_formula(27).unwrap(), 480);
    }

    #[test]
    fn r24_oracle_examples() {
        assert_eq!(r24_oracle(2).unwrap(), 24);
        assert_eq!(r24_oracle(3).unwrap(), 32);
        assert_eq!(r24_oracle(7).unwrap(), 0);
        assert_eq!(r24_oracle(45).unwrap(), 768);
        assert_eq!(r24_oracle(27).unwrap(), 480);
    }

    #[test]
    fn formula_matches_oracle_up_to_120() {
        for row in count_table(120).unwrap() {
            assert!(row.agree, "{row:?}");
            assert_eq!(row.r24_oracle > 0, in_plane_disc_set(row.d), "{row:?}");
        }
    }

    #[test]
    fn rs3_coeff_examples() {
        let c = rs3_coeffs(100);
        assert_eq!(c.get(3), int(32));
        assert_eq!(c.get(7), BigRational::zero());
        assert_eq!(c.get(27), int(480));
        assert_eq!(c.get(5), BigRational::zero());
        assert!(c.iter().all(|(d, _)| d % 8 == 3));
    }

    #[test]
    fn fsum_is_multiplicative_in_f() {
        for d0 in [3u64, 11, 19] {
            for (f1, f2) in [(3u64, 5u64), (9, 7), (5, 11), (3, 25)] {
                assert_eq!(fsum_term(d0, f1 * f2), fsum_term(d0, f1) * fsum_term(d0, f2));
            }
        }
    }

    #[test]
    fn count_json() {
        let rec = count_record(45).unwrap();
        assert_eq!(
            serde_json::to_string(&rec).unwrap(),
            r#"{"d":45,"r24_formula":768,"r24_oracle":768,"agree":true}"#
        );
        assert_eq!(enumerate_planes(45).len(), 768);
    }
}
