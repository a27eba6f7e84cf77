//! Exact Laurent polynomials in `p, y, x1, x2` over `Q`, and rational
//! functions with factored denominators.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub const NVARS: usize = 4;
pub const P: usize = 0;
pub const Y: usize = 1;
pub const X1: usize = 2;
pub const X2: usize = 3;
const NAMES: [&str; NVARS] = ["p", "y", "x1", "x2"];

/// Exponent vector over `(p, y, x1, x2)`; negative exponents allowed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(pub [i32; NVARS]);

impl Monomial {
    pub fn degree(&self) -> i32 {
        self.0.iter().sum()
    }

    fn times(self, o: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

/// Graded lexicographic.
impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(Monomial::default(), c)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(q(n))
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c);
        out
    }

    pub fn var(v: usize) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: usize, e: i32) -> Self {
        let mut m = Monomial::default();
        m.0[v] = e;
        Self::term(m, BigRational::one())
    }

    /// `c · p^a y^b x1^c x2^d`.
    pub fn mono(c: BigRational, exps: [i32; NVARS]) -> Self {
        Self::term(Monomial(exps), c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The constant, if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::default()).cloned(),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Product keeping only terms accepted by `keep`.
    pub fn mul_filtered(&self, o: &Self, keep: impl Fn(&Monomial) -> bool) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m = m1.times(*m2);
                if keep(&m) {
                    out.add_term(m, c1 * c2);
                }
            }
        }
        out
    }

    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        Self { terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (*m, c.clone())).collect() }
    }

    pub fn min_degree_in(&self, v: usize) -> Option<i32> {
        self.terms.keys().map(|m| m.0[v]).min()
    }

    pub fn max_degree_in(&self, v: usize) -> Option<i32> {
        self.terms.keys().map(|m| m.0[v]).max()
    }

    /// A single term `c·m`, invertible in the Laurent ring.
    pub fn as_monomial(&self) -> Option<(Monomial, BigRational)> {
        (self.terms.len() == 1).then(|| {
            let (m, c) = self.terms.iter().next().unwrap();
            (*m, c.clone())
        })
    }

    pub fn invert_monomial(&self) -> Option<Self> {
        let (m, c) = self.as_monomial()?;
        Some(Self::term(Monomial(m.0.map(|e| -e)), c.recip()))
    }

    /// Replaces variable `v` by `value`. Negative powers of `v` need a
    /// monomial `value`.
    pub fn subst(&self, v: usize, value: &Self) -> Result<Self> {
        let inverse = value.invert_monomial();
        let mut cache: BTreeMap<i32, Self> = BTreeMap::new();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.0[v];
            if !cache.contains_key(&e) {
                let base = if e >= 0 {
                    value.clone()
                } else {
                    inverse
                        .clone()
                        .ok_or_else(|| Error::Precondition(format!("cannot invert {value} for {}^{e}", NAMES[v])))?
                };
                cache.insert(e, base.pow(e.unsigned_abs()));
            }
            let mut rest = *m;
            rest.0[v] = 0;
            for (m2, c2) in &cache[&e].terms {
                out.add_term(rest.times(*m2), c * c2);
            }
        }
        Ok(out)
    }

    /// Multiplies by `v^k`.
    pub fn shift(&self, v: usize, k: i32) -> Self {
        let mut m = Monomial::default();
        m.0[v] = k;
        Self { terms: self.terms.iter().map(|(a, c)| (a.times(m), c.clone())).collect() }
    }

    pub fn eval_f64(&self, at: &[f64; NVARS]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let c = num_traits::ToPrimitive::to_f64(c).unwrap();
                m.0.iter().zip(at).fold(c, |acc, (&e, &x)| acc * x.powi(e))
            })
            .sum()
    }

    /// `v -> -v`.
    pub fn reflect(&self, v: usize) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, if m.0[v] % 2 == 0 { c.clone() } else { -c }))
                .collect(),
        }
    }

    /// Coefficient of `v^k`, as a polynomial in the other variables.
    pub fn coeff_in(&self, v: usize, k: i32) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.0[v] == k {
                let mut r = *m;
                r.0[v] = 0;
                out.add_term(r, c.clone());
            }
        }
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", NAMES[v])?;
            } else {
                write!(f, "{}^{}", NAMES[v], e)?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else if i > 0 { "+" } else { "" };
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(sign)?;
            if i > 0 {
                f.write_str(" ")?;
            }
            let a = c.abs();
            let unit_coeff = a.is_one() && *m != Monomial::default();
            match (unit_coeff, *m == Monomial::default()) {
                (true, _) => write!(f, "{m}")?,
                (false, true) => write!(f, "{a}")?,
                (false, false) => write!(f, "{a}*{m}")?,
            }
        }
        Ok(())
    }
}

impl Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;

    fn add(self, o: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;

    fn sub(self, o: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;

    fn mul(self, o: &MultiPoly) -> MultiPoly {
        self.mul_filtered(o, |_| true)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        self.scale(&-BigRational::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, o: MultiPoly) -> MultiPoly {
                (&self).$method(&o)
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, o: &MultiPoly) -> MultiPoly {
                (&self).$method(o)
            }
        }
        impl $tr<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, o: MultiPoly) -> MultiPoly {
                self.$method(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        -&self
    }
}

/// `num / ∏ den`, denominator kept as a list of factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFn {
    num: MultiPoly,
    den: Vec<MultiPoly>,
}

impl RationalFn {
    pub fn new(num: MultiPoly, den: Vec<MultiPoly>) -> Result<Self> {
        if den.iter().any(MultiPoly::is_zero) {
            return Err(Error::Precondition("zero denominator factor".into()));
        }
        Ok(Self { num, den })
    }

    pub fn from_poly(num: MultiPoly) -> Self {
        Self { num, den: Vec::new() }
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &[MultiPoly] {
        &self.den
    }

    pub fn den_product(&self) -> MultiPoly {
        self.den.iter().fold(MultiPoly::one(), |acc, f| &acc * f)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            num: &self.num * &o.num,
            den: self.den.iter().chain(&o.den).cloned().collect(),
        }
    }

    pub fn mul_poly(&self, f: &MultiPoly) -> Self {
        Self { num: &self.num * f, den: self.den.clone() }
    }

    /// Appends a denominator factor.
    pub fn div_poly(&self, f: MultiPoly) -> Result<Self> {
        let mut den = self.den.clone();
        den.push(f);
        Self::new(self.num.clone(), den)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Sum over the least common multiple of the two factor multisets.
    pub fn add(&self, o: &Self) -> Self {
        let mut only_self = self.den.clone();
        let mut only_other = Vec::new();
        for f in &o.den {
            match only_self.iter().position(|g| g == f) {
                Some(i) => {
                    only_self.swap_remove(i);
                }
                None => only_other.push(f.clone()),
            }
        }
        let prod = |fs: &[MultiPoly]| fs.iter().fold(MultiPoly::one(), |acc, f| &acc * f);
        let num = &self.num * &prod(&only_other) + &o.num * &prod(&only_self);
        let mut den = self.den.clone();
        den.extend(only_other);
        Self { num, den }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn subst(&self, v: usize, value: &MultiPoly) -> Result<Self> {
        let den = self.den.iter().map(|f| f.subst(v, value)).collect::<Result<Vec<_>>>()?;
        Self::new(self.num.subst(v, value)?, den)
    }

    pub fn eval_f64(&self, at: &[f64; NVARS]) -> f64 {
        self.den.iter().fold(self.num.eval_f64(at), |acc, f| acc / f.eval_f64(at))
    }

    pub fn reflect(&self, v: usize) -> Self {
        Self { num: self.num.reflect(v), den: self.den.iter().map(|f| f.reflect(v)).collect() }
    }

    /// `(r(v) + r(-v)) / 2`.
    pub fn even_part(&self, v: usize) -> Self {
        self.add(&self.reflect(v)).scale(&qr(1, 2))
    }

    /// `(r(v) - r(-v)) / 2`.
    pub fn odd_part(&self, v: usize) -> Self {
        self.sub(&self.reflect(v)).scale(&qr(1, 2))
    }

    /// Truncated expansion in `vars`, dropping monomials whose exponent in
    /// `vars[i]` exceeds `bounds[i]`. The part of each denominator factor
    /// free of `vars` must be a single (invertible) term, and no negative
    /// powers of `vars` may occur.
    pub fn expand(&self, vars: &[usize], bounds: &[i32]) -> Result<SeriesTable> {
        let within = |m: &Monomial| vars.iter().zip(bounds).all(|(&v, &b)| m.0[v] <= b);
        let free = |m: &Monomial| vars.iter().all(|&v| m.0[v] == 0);
        let check = |f: &MultiPoly| -> Result<()> {
            if vars.iter().any(|&v| f.min_degree_in(v).is_some_and(|d| d < 0)) {
                return Err(Error::Precondition(format!("negative power of a series variable in {f}")));
            }
            Ok(())
        };
        check(&self.num)?;
        let total: i32 = bounds.iter().sum();
        let mut acc = self.num.filter(within);
        for f in &self.den {
            check(f)?;
            let c = f.filter(free);
            let c_inv = c
                .invert_monomial()
                .ok_or_else(|| Error::Precondition(format!("constant part of {f} is not a unit")))?;
            // 1/f = c^{-1} Σ_k (1 - f c^{-1})^k
            let r = &MultiPoly::one() - &f.mul_filtered(&c_inv, |_| true);
            let mut inv = MultiPoly::one();
            let mut power = MultiPoly::one();
            for _ in 0..total {
                power = power.mul_filtered(&r, within);
                if power.is_zero() {
                    break;
                }
                inv = &inv + &power;
            }
            acc = acc.mul_filtered(&inv.mul_filtered(&c_inv, |_| true), within);
        }
        Ok(SeriesTable { vars: vars.to_vec(), bounds: bounds.to_vec(), poly: acc })
    }
}

/// `r1 = r2` iff `num1 · den2 = num2 · den1`.
pub fn rf_equal(r1: &RationalFn, r2: &RationalFn) -> bool {
    rf_cross_difference(r1, r2).is_zero()
}

/// `num1 · den2 - num2 · den1`.
pub fn rf_cross_difference(r1: &RationalFn, r2: &RationalFn) -> MultiPoly {
    &r1.num * &r2.den_product() - &r2.num * &r1.den_product()
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.num)?;
        if !self.den.is_empty() {
            f.write_str(" / (")?;
            for (i, d) in self.den.iter().enumerate() {
                if i > 0 {
                    f.write_str(" · ")?;
                }
                write!(f, "({d})")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Truncated expansion of a rational function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesTable {
    pub vars: Vec<usize>,
    pub bounds: Vec<i32>,
    pub poly: MultiPoly,
}

impl SeriesTable {
    /// Coefficient of `∏ vars[i]^{exps[i]}`, a Laurent polynomial in the
    /// remaining variables.
    pub fn coeff(&self, exps: &[i32]) -> MultiPoly {
        let mut out = self.poly.clone();
        for (&v, &e) in self.vars.iter().zip(exps) {
            out = out.coeff_in(v, e);
        }
        out
    }

    /// Whether `series · den - num` vanishes within the bounds.
    pub fn reproduces(&self, r: &RationalFn) -> bool {
        let within = |m: &Monomial| self.vars.iter().zip(&self.bounds).all(|(&v, &b)| m.0[v] <= b);
        let prod = self.poly.mul_filtered(&r.den_product(), within);
        (&prod - &r.num().filter(within)).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn y() -> MultiPoly {
        MultiPoly::var(Y)
    }

    fn p() -> MultiPoly {
        MultiPoly::var(P)
    }

    fn one() -> MultiPoly {
        MultiPoly::one()
    }

    #[test]
    fn arithmetic_and_display() {
        let a = &one() + &y();
        let b = &one() - &y();
        assert_eq!(&a * &b, &one() - &y().pow(2));
        assert_eq!((&a * &b).to_string(), "-y^2 + 1");
        let c = MultiPoly::mono(qr(3, 2), [1, 2, 0, 0]);
        assert_eq!(c.to_string(), "3/2*p*y^2");
        assert!((&c - &c).is_zero());
    }

    #[test]
    fn rf_equal_examples() {
        let r1 = RationalFn::new(&one() - &y().pow(2), vec![&one() - &y()]).unwrap();
        let r2 = RationalFn::from_poly(&one() + &y());
        assert!(rf_equal(&r1, &r2));
        let py2 = &p() * &y().pow(2);
        let p2y2 = &p().pow(2) * &y().pow(2);
        let r3 = RationalFn::new(one(), vec![&one() - &py2]).unwrap();
        let r4 = RationalFn::new(one(), vec![&one() - &p2y2]).unwrap();
        assert!(!rf_equal(&r3, &r4));
        // 1 - (1+p) y² + p y⁴ = (1 - y²)(1 - p y²)
        let num = &(&one() - &(&(&one() + &p()) * &y().pow(2))) + &(&p() * &y().pow(4));
        let r5 = RationalFn::new(num, vec![&one() - &py2, &one() - &p2y2]).unwrap();
        let r6 = RationalFn::new(&one() - &y().pow(2), vec![&one() - &p2y2]).unwrap();
        assert!(rf_equal(&r5, &r6));
    }

    #[test]
    fn substitution_with_laurent_values() {
        let f = &one() - &MultiPoly::var(X1);
        let inv_p = MultiPoly::var_pow(P, -1);
        let g = f.subst(X1, &inv_p).unwrap();
        assert_eq!(g, &one() - &inv_p);
        let h = MultiPoly::var_pow(X1, -2).subst(X1, &p()).unwrap();
        assert_eq!(h, MultiPoly::var_pow(P, -2));
        assert!(MultiPoly::var_pow(X1, -1).subst(X1, &(&one() + &p())).is_err());
        let ev = (&p() * &y()).subst(P, &MultiPoly::int(3)).unwrap();
        assert_eq!(ev, y().scale(&q(3)));
    }

    #[test]
    fn geometric_expansion() {
        let r = RationalFn::new(one(), vec![&one() - &y()]).unwrap();
        let s = r.expand(&[Y], &[10]).unwrap();
        for k in 0..=10 {
            assert_eq!(s.coeff(&[k]), one());
        }
        assert!(s.coeff(&[11]).is_zero());
        assert!(s.reproduces(&r));
        let bad = RationalFn::new(one(), vec![&(&one() + &MultiPoly::var(X1)) - &y()]).unwrap();
        assert!(bad.expand(&[Y], &[3]).is_err());
    }

    #[test]
    fn even_and_odd_parts() {
        let r = RationalFn::new(one(), vec![&one() - &y()]).unwrap();
        let e = r.even_part(Y);
        let o = r.odd_part(Y);
        assert!(rf_equal(&e.add(&o), &r));
        let expected = RationalFn::new(one(), vec![&one() - &y().pow(2)]).unwrap();
        assert!(rf_equal(&e, &expected));
    }

    fn small_poly() -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec(((-3i64..=3), 0i32..=3, 0i32..=3), 0..5).prop_map(|ts| {
            ts.into_iter()
                .fold(MultiPoly::zero(), |acc, (c, a, b)| &acc + &MultiPoly::mono(q(c), [a, b, 0, 0]))
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn expansion_reproduces_numerator(a in small_poly(), k in 1i64..=4) {
            let den = &MultiPoly::one() - &MultiPoly::mono(q(k), [1, 1, 0, 0]);
            let den2 = &MultiPoly::one() - &MultiPoly::mono(q(1), [0, 2, 0, 0]);
            let r = RationalFn::new(a, vec![den, den2]).unwrap();
            let s = r.expand(&[Y], &[8]).unwrap();
            prop_assert!(s.reproduces(&r));
        }
    }
}
