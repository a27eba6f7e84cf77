//! Local factors of the A₃ quadratic multiple Dirichlet series and the
//! identity linking them to the plane-counting series.

pub mod numeric;
pub mod poly;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, legendre};
use crate::error::{Error, Result};
use crate::repnum::fsum_term;
pub use numeric::{l_value_check, rs3_identity_numeric, LValueReport, Rs3IdentityReport};
pub use poly::{rf_cross_difference, rf_equal, Monomial, MultiPoly, RationalFn, SeriesTable, P, X1, X2, Y};
use poly::q;

fn v(i: usize) -> MultiPoly {
    MultiPoly::var(i)
}

fn one() -> MultiPoly {
    MultiPoly::one()
}

fn mono(c: i64, exps: [i32; 4]) -> MultiPoly {
    MultiPoly::mono(q(c), exps)
}

/// `H(x1, x2, y)` with the sign of the `p x1² x2² y³` numerator term given
/// by `top_sign`. Only `+1` makes the local identity hold.
pub fn h_rational_with_top_sign(top_sign: i64) -> RationalFn {
    // exponents over (p, y, x1, x2)
    let num = [
        (1, [0, 0, 0, 0]),
        (-1, [0, 1, 1, 0]),
        (-1, [0, 1, 0, 1]),
        (1, [0, 1, 1, 1]),
        (1, [1, 2, 1, 1]),
        (-1, [1, 2, 1, 2]),
        (-1, [1, 2, 2, 1]),
        (top_sign, [1, 3, 2, 2]),
    ]
    .into_iter()
    .fold(MultiPoly::zero(), |acc, (c, e)| &acc + &mono(c, e));
    let den = vec![
        &one() - &v(X1),
        &one() - &v(X2),
        &one() - &v(Y),
        &one() - &mono(1, [1, 2, 2, 0]),
        &one() - &mono(1, [1, 2, 0, 2]),
        &one() - &mono(1, [2, 2, 2, 2]),
    ];
    RationalFn::new(num, den).expect("nonzero factors")
}

pub fn h_rational() -> RationalFn {
    h_rational_with_top_sign(1)
}

/// Coefficients `a(p^k, p^l, p^m)` of `H` as polynomials in `p`.
pub fn h_series(kmax: u32, lmax: u32, mmax: u32) -> SeriesTable {
    h_rational()
        .expand(&[X1, X2, Y], &[kmax as i32, lmax as i32, mmax as i32])
        .expect("H has unit constant terms")
}

fn check_eps(eps: i32) -> Result<()> {
    if !(-1..=1).contains(&eps) {
        return Err(Error::Precondition(format!("eps must be -1, 0 or 1, got {eps}")));
    }
    Ok(())
}

/// `P(y, ε)` as a rational function of `p, y`.
pub fn p_local(eps: i32) -> Result<RationalFn> {
    check_eps(eps)?;
    let e = i64::from(eps);
    let num = &(&one() + &mono(e * e - 2 * e, [0, 2, 0, 0])) + &mono(1 - 2 * e, [1, 2, 0, 0]);
    let num = &num + &mono(e * e, [1, 4, 0, 0]);
    RationalFn::new(num, vec![&one() - &mono(1, [1, 2, 0, 0]), &one() - &mono(1, [2, 2, 0, 0])])
}

/// The `p`-part of the inner `f`-sum, summed term by term up to `y^{2 fmax}`:
/// `1 + Σ_k p^{2k} y^{2k} [Σ_{j<k} 2^{[j>0]} p^{-j} A² + 2 p^{-k} A]`,
/// `A = 1 - ε/p`.
pub fn p_local_from_sum(eps: i32, fmax: u32) -> Result<SeriesTable> {
    check_eps(eps)?;
    if fmax < 1 {
        return Err(Error::Precondition("fmax must be at least 1".into()));
    }
    let a = &one() - &MultiPoly::mono(q(i64::from(eps)), [-1, 0, 0, 0]);
    let a2 = &a * &a;
    let mut poly = one();
    for k in 1..=fmax as i32 {
        let mut bracket = a.shift(P, -k).scale(&q(2));
        for j in 0..k {
            let c = if j > 0 { 2 } else { 1 };
            bracket = &bracket + &a2.shift(P, -j).scale(&q(c));
        }
        poly = &poly + &bracket.shift(P, 2 * k).shift(Y, 2 * k);
    }
    Ok(SeriesTable { vars: vec![Y], bounds: vec![2 * fmax as i32], poly })
}

/// `Q_{d0,p}(x1, x2, y)`: the even part of `H` in `y` times `(1-x1)(1-x2)`
/// when `p ∤ d0`, and `(H(y) - H(-y)) / (2y)` when `p | d0`.
pub fn q_local(divides: bool) -> RationalFn {
    q_local_from(&h_rational(), divides)
}

fn q_local_from(h: &RationalFn, divides: bool) -> RationalFn {
    if divides {
        let odd = h.odd_part(Y);
        assert!(odd.num().min_degree_in(Y).map_or(true, |d| d >= 1));
        RationalFn::new(odd.num().shift(Y, -1), odd.den().to_vec()).unwrap()
    } else {
        h.even_part(Y).mul_poly(&(&(&one() - &v(X1)) * &(&one() - &v(X2))))
    }
}

/// `Q_{d0,p}` at `(x, x, py)` with `x = ε/p` for `ε = ±1` and `x = 1/p` for
/// `ε = 0` (the case `p | d0`).
pub fn q_local_at(eps: i32) -> Result<RationalFn> {
    q_local_at_from(&h_rational(), eps)
}

fn q_local_at_from(h: &RationalFn, eps: i32) -> Result<RationalFn> {
    check_eps(eps)?;
    let x = MultiPoly::mono(q(if eps == 0 { 1 } else { i64::from(eps) }), [-1, 0, 0, 0]);
    let py = &v(P) * &v(Y);
    q_local_from(h, eps == 0).subst(X1, &x)?.subst(X2, &x)?.subst(Y, &py)
}

/// `1/((1-y²)(1-py²))`, the odd `p`-parts of `ζ₂(2w) ζ₂(2w-1)` at `y = p^{-w}`.
pub fn zeta_parts() -> RationalFn {
    RationalFn::new(one(), vec![&one() - &mono(1, [0, 2, 0, 0]), &one() - &mono(1, [1, 2, 0, 0])]).unwrap()
}

/// Closed forms of `P(y,ε)/((1-y²)(1-py²))`.
pub fn local_closed_form(eps: i32) -> Result<RationalFn> {
    check_eps(eps)?;
    let py2 = &one() - &mono(1, [1, 2, 0, 0]);
    let p2y2 = &one() - &mono(1, [2, 2, 0, 0]);
    let y2 = &one() - &mono(1, [0, 2, 0, 0]);
    match eps {
        1 => RationalFn::new(one(), vec![py2, p2y2]),
        0 => RationalFn::new(&one() + &mono(1, [1, 2, 0, 0]), vec![y2, py2.clone(), py2, p2y2]),
        _ => {
            let num = &(&(&one() + &mono(3, [0, 2, 0, 0])) + &mono(3, [1, 2, 0, 0])) + &mono(1, [1, 4, 0, 0]);
            RationalFn::new(num, vec![y2, py2.clone(), py2, p2y2])
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalIdentityCase {
    pub eps: i32,
    pub equal: bool,
    pub matches_closed_form: bool,
    pub lhs_numerator: String,
    /// Leading term of `num_lhs · den_rhs - num_rhs · den_lhs` on failure.
    pub mismatching_term: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalIdentityReport {
    pub cases: Vec<LocalIdentityCase>,
    pub all_equal: bool,
}

/// Exact check of `P(y,ε)/((1-y²)(1-py²)) = Q_{d0,p}(x, x, py)` for the
/// three values of `ε`, with symbolic `p`.
pub fn verify_local_identity() -> LocalIdentityReport {
    verify_local_identity_with(&h_rational())
}

pub fn verify_local_identity_with(h: &RationalFn) -> LocalIdentityReport {
    let cases: Vec<LocalIdentityCase> = [1, -1, 0]
        .into_iter()
        .map(|eps| {
            let lhs = p_local(eps).unwrap().mul(&zeta_parts());
            let rhs = q_local_at_from(h, eps).unwrap();
            let diff = rf_cross_difference(&lhs, &rhs);
            LocalIdentityCase {
                eps,
                equal: diff.is_zero(),
                matches_closed_form: rf_equal(&lhs, &local_closed_form(eps).unwrap()),
                lhs_numerator: p_local(eps).unwrap().num().to_string(),
                mismatching_term: diff.leading().map(|(m, c)| format!("{c}*{m}")),
            }
        })
        .collect();
    let all_equal = cases.iter().all(|c| c.equal && c.matches_closed_form);
    LocalIdentityReport { cases, all_equal }
}

/// Replaces `p` by an integer.
pub fn at_prime(r: &RationalFn, p: u64) -> RationalFn {
    r.subst(P, &MultiPoly::int(p as i64)).expect("integer substitution")
}

/// Coefficients of `y^0..=y^order` of a rational function in `y` alone.
pub fn y_coeffs(r: &RationalFn, order: u32) -> Result<Vec<BigRational>> {
    let s = r.expand(&[Y], &[order as i32])?;
    (0..=order as i32)
        .map(|k| {
            s.coeff(&[k])
                .as_constant()
                .ok_or_else(|| Error::Precondition(format!("coefficient of y^{k} is not constant")))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumericLocalCase {
    pub p: u64,
    pub d0: u64,
    pub eps: i32,
    pub order: u32,
    pub agree: bool,
    pub first_mismatch: Option<u32>,
}

/// At numeric `p`, compares the `y`-series of `Q_{d0,p}(x, x, py)` with
/// `Σ_k fsum_term(d0, p^k) y^{2k} · 1/((1-y²)(1-py²))`, to `y^order`.
pub fn local_identity_numeric(p: u64, d0: u64, order: u32) -> Result<NumericLocalCase> {
    let eps = legendre(-(d0 as i64), p);
    let q_side = y_coeffs(&at_prime(&q_local_at(eps)?, p), order)?;
    let zeta = y_coeffs(&at_prime(&zeta_parts(), p), order)?;
    let mut fsum = vec![BigRational::zero(); order as usize + 1];
    let mut pk = 1u64;
    for k in 0..=order / 2 {
        fsum[2 * k as usize] = fsum_term(d0, pk);
        pk = pk.saturating_mul(p);
    }
    let product: Vec<BigRational> = (0..=order as usize)
        .map(|n| (0..=n).map(|i| &fsum[i] * &zeta[n - i]).sum())
        .collect();
    let first_mismatch = (0..=order).find(|&n| q_side[n as usize] != product[n as usize]);
    Ok(NumericLocalCase { p, d0, eps, order, agree: first_mismatch.is_none(), first_mismatch })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FsumSeriesReport {
    pub d0: Vec<u64>,
    pub fmax: u64,
    pub checked: usize,
    pub mismatches: Vec<(u64, u64)>,
    /// Term-by-term `p`-part sums equal the expansion of `P(y,ε)`, symbolic `p`.
    pub symbolic_sum_matches: bool,
}

/// For odd `f <= fmax`: `fsum_term(d0, f) = ∏_{p^k || f} [y^{2k}] P(y, (-d0/p))`
/// at numeric `p`.
pub fn fsum_matches_series(d0s: &[u64], fmax: u64) -> Result<FsumSeriesReport> {
    let mut cache: BTreeMap<(u64, i32), Vec<BigRational>> = BTreeMap::new();
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for &d0 in d0s {
        for f in (1..=fmax).step_by(2) {
            let mut predicted = BigRational::one();
            for (p, k) in factorize(f) {
                let eps = legendre(-(d0 as i64), p);
                if !cache.contains_key(&(p, eps)) {
                    let order = 2 * (fmax as f64).log(p as f64).floor() as u32 + 2;
                    cache.insert((p, eps), y_coeffs(&at_prime(&p_local(eps)?, p), order)?);
                }
                predicted *= &cache[&(p, eps)][2 * k as usize];
            }
            checked += 1;
            if fsum_term(d0, f) != predicted {
                mismatches.push((d0, f));
            }
        }
    }
    let mut symbolic_sum_matches = true;
    for eps in [1, -1, 0] {
        let order = 10;
        let from_sum = p_local_from_sum(eps, order)?;
        let series = p_local(eps)?.expand(&[Y], &[2 * order as i32])?;
        symbolic_sum_matches &= from_sum.poly == series.poly;
    }
    Ok(FsumSeriesReport { d0: d0s.to_vec(), fmax, checked, mismatches, symbolic_sum_matches })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_series_examples() {
        let s = h_series(6, 2, 10);
        assert_eq!(s.coeff(&[0, 0, 0]), one());
        for k in 0..=6 {
            assert_eq!(s.coeff(&[k, 0, 0]), one(), "k={k}");
        }
        for m in 0..=10 {
            assert_eq!(s.coeff(&[0, 0, m]), one(), "m={m}");
        }
        assert!(s.reproduces(&h_rational()));
    }

    #[test]
    fn p_local_examples() {
        let p0 = p_local(0).unwrap();
        let expected =
            RationalFn::new(&one() + &mono(1, [1, 2, 0, 0]), vec![&one() - &mono(1, [1, 2, 0, 0]), &one() - &mono(1, [2, 2, 0, 0])])
                .unwrap();
        assert!(rf_equal(&p0, &expected));
        let m1 = p_local(-1).unwrap();
        let num = &(&(&one() + &mono(3, [0, 2, 0, 0])) + &mono(3, [1, 2, 0, 0])) + &mono(1, [1, 4, 0, 0]);
        assert_eq!(m1.num(), &num);
        let p1 = p_local(1).unwrap();
        let factored = &(&one() - &mono(1, [0, 2, 0, 0])) * &(&one() - &mono(1, [1, 2, 0, 0]));
        assert_eq!(p1.num(), &factored);
        assert!(p_local(2).is_err());
    }

    #[test]
    fn p_local_from_sum_examples() {
        for eps in [1, -1, 0] {
            let s = p_local_from_sum(eps, 10).unwrap();
            assert_eq!(s.coeff(&[0]), one());
            let series = p_local(eps).unwrap().expand(&[Y], &[20]).unwrap();
            assert_eq!(s.poly, series.poly, "eps={eps}");
        }
        let s = p_local_from_sum(1, 1).unwrap();
        assert_eq!(s.coeff(&[2]), &mono(1, [2, 0, 0, 0]) - &one());
        assert!(p_local_from_sum(1, 0).is_err());
    }

    #[test]
    fn q_local_at_zero() {
        let q0 = q_local(false).subst(Y, &MultiPoly::zero()).unwrap();
        assert!(rf_equal(&q0, &RationalFn::from_poly(one())));
        let q1 = q_local(true);
        assert!(q1.num().min_degree_in(Y).unwrap() >= 0);
    }

    #[test]
    fn local_identity_holds() {
        let rep = verify_local_identity();
        assert!(rep.all_equal, "{rep:?}");
        assert_eq!(rep.cases.len(), 3);
        assert_eq!(rep.cases[1].lhs_numerator, "p*y^4 + 3*p*y^2 + 3*y^2 + 1");
    }

    #[test]
    fn negative_top_sign_breaks_identity() {
        let rep = verify_local_identity_with(&h_rational_with_top_sign(-1));
        assert!(rep.cases.iter().all(|c| !c.equal), "{rep:?}");
        assert!(rep.cases.iter().all(|c| c.mismatching_term.is_some()));
    }

    #[test]
    fn numeric_local_identity() {
        for p in [3, 5, 7, 11, 13] {
            for d0 in [3, 11, 19] {
                let r = local_identity_numeric(p, d0, 20).unwrap();
                assert!(r.agree, "{r:?}");
            }
        }
    }

    #[test]
    fn fsum_series_agreement() {
        let rep = fsum_matches_series(&[3, 11, 19], 99).unwrap();
        assert!(rep.mismatches.is_empty(), "{rep:?}");
        assert!(rep.symbolic_sum_matches);
        assert_eq!(rep.checked, 150);
    }

    #[test]
    fn report_json() {
        let rep = verify_local_identity();
        let js = serde_json::to_value(&rep).unwrap();
        assert_eq!(js["cases"][0]["eps"], 1);
        assert!(js["cases"][0]["mismatching_term"].is_null());
    }
}
