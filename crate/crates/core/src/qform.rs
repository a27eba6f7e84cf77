//! Positive definite integral binary quadratic forms `ax² + bxy + cy²`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd_all, isqrt, xgcd};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    /// Positive definite forms only.
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let q = Self { a, b, c };
        if a <= 0 || q.disc() >= 0 {
            return Err(Error::FormNotPositiveDefinite { a, b, c });
        }
        Ok(q)
    }

    /// The binary form `q_L` of a Gram matrix `[[g11, g12], [g12, g22]]`.
    pub fn from_gram(g: [[i64; 2]; 2]) -> Result<Self> {
        Self::new(g[0][0], 2 * g[0][1], g[1][1])
    }

    /// The form with `a = 1` of discriminant `d`.
    pub fn principal(d: i64) -> Result<Self> {
        check_disc(d)?;
        let b = d.rem_euclid(2);
        Self::new(1, b, (b * b - d) / 4)
    }

    pub const fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        gcd_all(&[self.a, self.b, self.c]) == 1
    }

    pub const fn opposite(&self) -> Self {
        Self { a: self.a, b: -self.b, c: self.c }
    }

    pub const fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    /// `q ∘ g` for `g = [[p, q], [r, s]]` acting on column vectors.
    pub fn transform(&self, g: [[i64; 2]; 2]) -> Self {
        let [[p, q], [r, s]] = g;
        Self {
            a: self.eval(p, r),
            b: 2 * self.a * p * q + self.b * (p * s + q * r) + 2 * self.c * r * s,
            c: self.eval(q, s),
        }
    }

    pub const fn coeffs(&self) -> [i64; 3] {
        [self.a, self.b, self.c]
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

fn check_disc(d: i64) -> Result<()> {
    if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::NotADiscriminant(d));
    }
    Ok(())
}

/// Gauss reduction to the unique reduced form in the proper class.
pub fn reduce(q: QuadForm) -> Result<QuadForm> {
    let q = QuadForm::new(q.a, q.b, q.c)?;
    let d = q.disc() as i128;
    let (mut a, mut b, mut c) = (q.a as i128, q.b as i128, q.c as i128);
    loop {
        if b.abs() > a || b == -a {
            // b -> b + 2ka into (-a, a]
            let r = b.rem_euclid(2 * a);
            b = if r > a { r - 2 * a } else { r };
            c = (b * b - d) / (4 * a);
        }
        if a > c {
            (a, b, c) = (c, -b, a);
            continue;
        }
        break;
    }
    if b < 0 && a == c {
        b = -b;
    }
    Ok(QuadForm { a: a as i64, b: b as i64, c: c as i64 })
}

/// A proper equivalence class, stored by its reduced representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FormClass(QuadForm);

impl FormClass {
    pub fn of(q: QuadForm) -> Result<Self> {
        Ok(Self(reduce(q)?))
    }

    pub const fn rep(&self) -> QuadForm {
        self.0
    }

    pub const fn disc(&self) -> i64 {
        self.0.disc()
    }

    pub fn opposite(&self) -> Self {
        Self::of(self.0.opposite()).expect("opposite of a positive form")
    }

    pub fn is_primitive(&self) -> bool {
        self.0.is_primitive()
    }
}

/// Gaussian composition, computed by Dirichlet's method.
pub fn compose(c1: FormClass, c2: FormClass) -> Result<FormClass> {
    let (f1, f2) = (c1.rep(), c2.rep());
    if f1.disc() != f2.disc() {
        return Err(Error::DiscriminantMismatch(f1.disc(), f2.disc()));
    }
    for f in [f1, f2] {
        if !f.is_primitive() {
            return Err(Error::ImprimitiveForm { a: f.a, b: f.b, c: f.c });
        }
    }
    let f2 = coprime_leading(f2, f1.a);
    let d = f1.disc();
    let (a1, a2) = (f1.a, f2.a);
    debug_assert_eq!(gcd_all(&[a1, a2, (f1.b + f2.b) / 2]), 1);
    let m = 2 * a1 * a2;
    // Smallest B >= 0 with B = b1 (2a1), B = b2 (2a2), B² = D (4a1a2).
    let big = (0..a2)
        .map(|k| (f1.b + 2 * a1 * k).rem_euclid(m))
        .filter(|&bb| (bb - f2.b).rem_euclid(2 * a2) == 0)
        .filter(|&bb| (bb * bb - d).rem_euclid(2 * m) == 0)
        .min()
        .expect("united forms admit a common middle coefficient");
    FormClass::of(QuadForm::new(a1 * a2, big, (big * big - d) / (2 * m))?)
}

/// A form properly equivalent to `f` whose leading coefficient is coprime
/// to `a`. Searches primitive vectors `(x, y)` in order of size.
fn coprime_leading(f: QuadForm, a: i64) -> QuadForm {
    if f.a.gcd(&a) == 1 {
        return f;
    }
    for r in 1i64.. {
        for x in -r..=r {
            for y in [r - x.abs(), x.abs() - r] {
                if x.gcd(&y) != 1 || f.eval(x, y).gcd(&a) != 1 {
                    continue;
                }
                // complete (x, y) to a matrix of determinant 1
                let (_, s, t) = xgcd(x, y);
                let g = [[x, -t], [y, s]];
                return f.transform(g);
            }
        }
    }
    unreachable!()
}

/// Reduced primitive forms of discriminant `d`, sorted.
pub fn reduced_forms(d: i64) -> Result<Vec<QuadForm>> {
    check_disc(d)?;
    let amax = isqrt(-d / 3).unwrap();
    let mut out = Vec::new();
    for a in 1..=amax {
        for b in -a..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let q = QuadForm { a, b, c: num / (4 * a) };
            if q.is_reduced() && q.is_primitive() {
                out.push(q);
            }
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassGroup {
    disc: i64,
    classes: Vec<FormClass>,
    index: BTreeMap<FormClass, usize>,
    table: Vec<Vec<usize>>,
    identity: usize,
}

pub fn class_group(d: i64) -> Result<ClassGroup> {
    let classes: Vec<FormClass> = reduced_forms(d)?.into_iter().map(FormClass).collect();
    let index: BTreeMap<FormClass, usize> = classes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let identity = index[&FormClass::of(QuadForm::principal(d)?)?];
    let table = classes
        .iter()
        .map(|&x| {
            classes
                .iter()
                .map(|&y| compose(x, y).map(|z| index[&z]))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassGroup { disc: d, classes, index, table, identity })
}

impl ClassGroup {
    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn order(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[FormClass] {
        &self.classes
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn principal(&self) -> FormClass {
        self.classes[self.identity]
    }

    pub fn index_of(&self, c: &FormClass) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.index[&self.classes[i].opposite()]
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut x = i;
        while x != self.identity {
            x = self.mul(x, i);
            k += 1;
        }
        k
    }

    pub fn to_record(&self) -> ClassGroupRecord {
        ClassGroupRecord {
            disc: self.disc,
            forms: self.classes.iter().map(|c| c.rep().coeffs()).collect(),
            table: self.table.clone(),
            genera: genus_partition(self).genera,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroupRecord {
    pub disc: i64,
    pub forms: Vec<[i64; 3]>,
    pub table: Vec<Vec<usize>>,
    pub genera: Vec<Vec<usize>>,
}

/// Cosets of the subgroup of squares.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusPartition {
    genera: Vec<Vec<usize>>,
    genus_of: Vec<usize>,
    squares: Vec<usize>,
}

pub fn genus_partition(g: &ClassGroup) -> GenusPartition {
    let squares: BTreeSet<usize> = (0..g.order()).map(|i| g.mul(i, i)).collect();
    let mut genus_of = vec![usize::MAX; g.order()];
    let mut genera = Vec::new();
    for i in 0..g.order() {
        if genus_of[i] != usize::MAX {
            continue;
        }
        let mut coset: Vec<usize> = squares.iter().map(|&s| g.mul(i, s)).collect();
        coset.sort_unstable();
        for &j in &coset {
            genus_of[j] = genera.len();
        }
        genera.push(coset);
    }
    GenusPartition { genera, genus_of, squares: squares.into_iter().collect() }
}

impl GenusPartition {
    pub fn genera(&self) -> &[Vec<usize>] {
        &self.genera
    }

    pub fn count(&self) -> usize {
        self.genera.len()
    }

    pub fn genus_of(&self, class_index: usize) -> usize {
        self.genus_of[class_index]
    }

    pub fn squares(&self) -> &[usize] {
        &self.squares
    }
}

/// Number of genera of discriminant `-4n` from the count of assigned
/// characters: `2^(μ-1)`.
pub fn genus_count_by_characters(n: u64) -> usize {
    let r = crate::arith::prime_divisors(n).into_iter().filter(|&p| p != 2).count() as u32;
    let mu = match n % 8 {
        3 | 7 => r,
        1 | 2 | 5 | 6 => r + 1,
        4 => r + 1,
        _ => r + 2,
    };
    1usize << (mu - 1)
}

/// Residues mod `|D|` coprime to `D` represented by the form, sampled on
/// `0 <= x < |D|`, `0 <= y <= ymax`.
pub fn unit_values_mod_disc(q: &QuadForm, ymax: i64) -> BTreeSet<i64> {
    let m = q.disc().abs();
    let mut out = BTreeSet::new();
    for x in 0..m {
        for y in 0..=ymax {
            let v = q.eval(x, y).rem_euclid(m);
            if v.gcd(&m) == 1 {
                out.insert(v);
            }
        }
    }
    out
}

/// Improper (`GL₂(Z)`) class: the unordered pair `{c, c^op}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Gl2Class(FormClass, FormClass);

pub fn gl2_class(c: FormClass) -> Gl2Class {
    let o = c.opposite();
    Gl2Class(c.min(o), c.max(o))
}

impl Gl2Class {
    pub fn of(q: QuadForm) -> Result<Self> {
        Ok(gl2_class(FormClass::of(q)?))
    }

    /// The proper classes it contains (one or two).
    pub fn members(&self) -> Vec<FormClass> {
        if self.0 == self.1 {
            vec![self.0]
        } else {
            vec![self.0, self.1]
        }
    }

    pub fn contains(&self, c: &FormClass) -> bool {
        self.0 == *c || self.1 == *c
    }

    /// `(a, |b|, c)` of the reduced representative.
    pub fn canonical(&self) -> QuadForm {
        let q = self.0.rep();
        QuadForm { b: q.b.abs(), ..q }
    }

    pub fn disc(&self) -> i64 {
        self.0.disc()
    }

    pub fn is_primitive(&self) -> bool {
        self.0.is_primitive()
    }
}
