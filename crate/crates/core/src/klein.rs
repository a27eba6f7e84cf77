//! The Klein correspondence between planes in `Z^4` and pairs of traceless
//! quaternions, and the four CM points attached to a plane.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd_all, in_plane_disc_set, is_squarefree, isqrt};
use crate::error::{Error, Result};
use crate::intlat;
use crate::lattice::{orth_complement, Plane};
use crate::qform::{class_group, compose, genus_partition, ClassGroup, FormClass, GenusPartition, Gl2Class, QuadForm};
use crate::quaternion::{Quaternion, TracelessQuaternion};

/// `[a1, a2]` up to a common sign; the first nonzero coefficient of `a1`
/// is positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KleinPair {
    pub a1: TracelessQuaternion,
    pub a2: TracelessQuaternion,
}

impl KleinPair {
    pub fn new(a1: TracelessQuaternion, a2: TracelessQuaternion) -> Self {
        let lead = a1.to_vec3().into_iter().chain(a2.to_vec3()).find(|&x| x != 0);
        if lead.is_some_and(|x| x < 0) {
            Self { a1: -a1, a2: -a2 }
        } else {
            Self { a1, a2 }
        }
    }

    pub fn norm(&self) -> i64 {
        self.a1.nr()
    }

    pub fn is_admissible(&self) -> bool {
        let (w1, w2) = (self.a1.to_vec3(), self.a2.to_vec3());
        self.a1.nr() == self.a2.nr() && pair_primitive(&w1, &w2) && congruent_mod2(&w1, &w2)
    }
}

/// `[a1(L), a2(L)]` with `a1 = u v̄ - Tr(u v̄)/2`, `a2 = v̄ u - Tr(v̄ u)/2`.
pub fn klein_map(p: &Plane) -> KleinPair {
    let [u, v] = p.basis();
    klein_of_basis(Quaternion::from_vec4(*u), Quaternion::from_vec4(*v))
}

pub fn klein_of_basis(u: Quaternion, v: Quaternion) -> KleinPair {
    KleinPair::new((u * v.conj()).pure_part(), (v.conj() * u).pure_part())
}

fn odd_part(mut x: i64) -> i64 {
    while x != 0 && x % 2 == 0 {
        x /= 2;
    }
    x
}

/// No odd prime divides both, and not both `(w1 ± w2)/4` are integral.
pub fn pair_primitive(w1: &[i64; 3], w2: &[i64; 3]) -> bool {
    let g = gcd_all(w1).gcd(&gcd_all(w2));
    if odd_part(g) != 1 {
        return false;
    }
    let quarter = |s: i64| (0..3).all(|k| (w1[k] + s * w2[k]) % 4 == 0);
    !(quarter(1) && quarter(-1))
}

pub fn congruent_mod2(w1: &[i64; 3], w2: &[i64; 3]) -> bool {
    (0..3).all(|k| (w1[k] - w2[k]) % 2 == 0)
}

/// All `v` in `Z^3` with `|v|^2 = n`, in lexicographic order.
pub fn three_square_reps(n: u64) -> Vec<[i64; 3]> {
    let n = n as i64;
    let r = isqrt(n).unwrap();
    let mut out = Vec::new();
    for x in -r..=r {
        let rx = n - x * x;
        let ry = isqrt(rx).unwrap();
        for y in -ry..=ry {
            let rz = rx - y * y;
            if let Some(z) = crate::arith::exact_sqrt(rz) {
                out.push([x, y, -z]);
                if z != 0 {
                    out.push([x, y, z]);
                }
            }
        }
    }
    out
}

/// Sign classes of admissible pairs of norm `n`, by direct search in
/// `Z^3 × Z^3`.
pub fn admissible_pairs(n: u64) -> Vec<KleinPair> {
    let reps = three_square_reps(n);
    let mut out = Vec::new();
    for w1 in &reps {
        if w1.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            continue;
        }
        for w2 in &reps {
            if congruent_mod2(w1, w2) && pair_primitive(w1, w2) {
                out.push(KleinPair {
                    a1: TracelessQuaternion::from_vec3(*w1),
                    a2: TracelessQuaternion::from_vec3(*w2),
                });
            }
        }
    }
    out.sort_unstable();
    out
}

/// Number of admissible sign classes of norm `n`.
pub fn klein_count(n: u64) -> u64 {
    let reps = three_square_reps(n);
    let total: u64 = reps
        .iter()
        .map(|w1| {
            reps.iter()
                .filter(|w2| congruent_mod2(w1, w2) && pair_primitive(w1, w2))
                .count() as u64
        })
        .sum();
    total / 2
}

/// Class of `Q_3` restricted to `v^⊥ ∩ Z^3`.
pub fn gauss_map(v: &[i64; 3]) -> Result<Gl2Class> {
    Gl2Class::of(restricted_form(v)?)
}

/// `Q_3|_{v^⊥}` on the Hermite basis of `v^⊥`.
pub fn restricted_form(v: &[i64; 3]) -> Result<QuadForm> {
    if v.iter().all(|&x| x == 0) {
        return Err(Error::Precondition("gauss_map needs v != 0".into()));
    }
    let perp = perp3(v);
    let g = |i: usize, j: usize| intlat::dot(&perp[i], &perp[j]);
    QuadForm::from_gram([[g(0, 0), g(0, 1)], [g(1, 0), g(1, 1)]])
}

fn perp3(v: &[i64; 3]) -> intlat::Rows {
    intlat::orthogonal_complement(&[v.to_vec()], 3)
}

/// `z1 = [Q_L]`, `z2 = [Q_{L^⊥}]`, `z3 = G(a1)`, `z4 = G(a2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CmQuadruple {
    pub z: [Gl2Class; 4],
}

pub fn cm_points(p: &Plane) -> CmQuadruple {
    let perp = Plane::from_plucker(orth_complement(&p.plucker()));
    let k = klein_map(p);
    let form = |pl: &Plane| Gl2Class::of(QuadForm::from_gram(pl.gram()).unwrap()).unwrap();
    CmQuadruple {
        z: [
            form(p),
            form(&perp),
            gauss_map(&k.a1.to_vec3()).unwrap(),
            gauss_map(&k.a2.to_vec3()).unwrap(),
        ],
    }
}

impl CmQuadruple {
    pub fn discs(&self) -> [i64; 4] {
        self.z.map(|c| c.disc())
    }
}

fn orthogonal_composition_hypotheses(n: u64) -> Result<()> {
    if n % 4 == 1 && is_squarefree(n) && in_plane_disc_set(n) {
        Ok(())
    } else {
        Err(Error::HypothesesNotMet(format!(
            "n = {n} must be squarefree, 1 mod 4 and an attainable discriminant"
        )))
    }
}

/// `L ⊗ L^⊥ -> B_0(Z)`, `v ⊗ w -> v w̄` (`i = 1`) or `v̄ w` (`i = 2`).
pub fn mu(i: u8, v: Quaternion, w: Quaternion) -> TracelessQuaternion {
    let q = if i == 1 { v * w.conj() } else { v.conj() * w };
    debug_assert_eq!(q.x0, 0, "v and w must be orthogonal");
    q.pure_part()
}

/// Hermite form of the span of `μ_i(u ⊗ w)` over basis vectors of `L` and
/// `L^⊥`.
pub fn mu_image(p: &Plane, i: u8) -> Result<intlat::Rows> {
    orthogonal_composition_hypotheses(p.n() as u64)?;
    if i != 1 && i != 2 {
        return Err(Error::Precondition(format!("mu index must be 1 or 2, got {i}")));
    }
    let perp = Plane::from_plucker(orth_complement(&p.plucker()));
    let gens: Vec<Vec<i64>> = p
        .basis()
        .iter()
        .flat_map(|u| {
            perp.basis().iter().map(move |w| {
                mu(i, Quaternion::from_vec4(*u), Quaternion::from_vec4(*w))
                    .to_vec3()
                    .to_vec()
            })
        })
        .collect();
    Ok(intlat::hermite_form(&gens))
}

/// `M_i = a_i(L)^⊥ ∩ Z^3` in Hermite form.
pub fn accidental_lattice(p: &Plane, i: u8) -> intlat::Rows {
    let k = klein_map(p);
    let a = if i == 1 { k.a1 } else { k.a2 };
    perp3(&a.to_vec3())
}

/// Checks `Q_L(v) Q_{L^⊥}(w) = nr(μ_i(v ⊗ w))` for all `v, w` with
/// coordinates in `[-r, r]` in the stored bases.
pub fn legendre_identity_holds(p: &Plane, r: i64) -> bool {
    let perp = Plane::from_plucker(orth_complement(&p.plucker()));
    let comb = |b: &[[i64; 4]; 2], x: i64, y: i64| {
        Quaternion::from_vec4(std::array::from_fn(|k| x * b[0][k] + y * b[1][k]))
    };
    for x1 in -r..=r {
        for x2 in -r..=r {
            let v = comb(p.basis(), x1, x2);
            for y1 in -r..=r {
                for y2 in -r..=r {
                    let w = comb(perp.basis(), y1, y2);
                    for i in [1, 2] {
                        if v.nr() * w.nr() != mu(i, v, w).nr() {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Class group of `-4n` with its genera and the genus `G_n`.
#[derive(Clone, Debug)]
pub struct GenusContext {
    pub n: u64,
    pub group: ClassGroup,
    pub genera: GenusPartition,
    /// Genus of `G(v)` for the first `v` in `R_3(n)`.
    pub gauss_genus: usize,
}

impl GenusContext {
    pub fn new(n: u64) -> Result<Self> {
        let group = class_group(-4 * n as i64)?;
        let genera = genus_partition(&group);
        let v = *three_square_reps(n)
            .first()
            .ok_or_else(|| Error::HypothesesNotMet(format!("{n} is not a sum of three squares")))?;
        let gauss_genus = Self::genus_in(&group, &genera, &gauss_map(&v)?)?;
        Ok(Self { n, group, genera, gauss_genus })
    }

    fn genus_in(group: &ClassGroup, genera: &GenusPartition, c: &Gl2Class) -> Result<usize> {
        let member = c.members()[0];
        let idx = group
            .index_of(&member)
            .ok_or_else(|| Error::ImprimitiveForm { a: member.rep().a, b: member.rep().b, c: member.rep().c })?;
        Ok(genera.genus_of(idx))
    }

    pub fn genus_of(&self, c: &Gl2Class) -> Result<usize> {
        Self::genus_in(&self.group, &self.genera, c)
    }

    pub fn genus_of_class(&self, c: &FormClass) -> Result<usize> {
        self.genus_of(&crate::qform::gl2_class(*c))
    }

    /// Whether `genus(q1 ∘ q2)` is `G_n`.
    pub fn realizable(&self, q1: FormClass, q2: FormClass) -> Result<bool> {
        Ok(self.genus_of_class(&compose(q1, q2)?)? == self.gauss_genus)
    }
}

pub fn realizable_pair(q1: FormClass, q2: FormClass, n: u64) -> Result<bool> {
    orthogonal_composition_hypotheses(n)?;
    for q in [q1, q2] {
        if q.disc() != -4 * n as i64 {
            return Err(Error::DiscriminantMismatch(q.disc(), -4 * n as i64));
        }
    }
    GenusContext::new(n)?.realizable(q1, q2)
}

/// Image of the Gauss map on `R_3(n)` compared against the genera.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussGenusReport {
    pub n: u64,
    /// Genera met by `{G(v)}`.
    pub genera_hit: Vec<usize>,
    pub classes_hit: usize,
    pub genus_size: usize,
    pub single_genus: bool,
    /// Every proper class of the genus occurs (informational).
    pub surjective: bool,
}

pub fn gauss_genus_report(n: u64) -> Result<GaussGenusReport> {
    let ctx = GenusContext::new(n)?;
    let mut genera = BTreeSet::new();
    let mut classes = BTreeSet::new();
    for v in three_square_reps(n) {
        let c = gauss_map(&v)?;
        genera.insert(ctx.genus_of(&c)?);
        for m in c.members() {
            classes.insert(ctx.group.index_of(&m).expect("primitive"));
        }
    }
    let genus_size = ctx.genera.genera()[ctx.gauss_genus].len();
    Ok(GaussGenusReport {
        n,
        single_genus: genera.len() == 1,
        surjective: genera.len() == 1 && classes.len() == genus_size,
        genera_hit: genera.into_iter().collect(),
        classes_hit: classes.len(),
        genus_size,
    })
}

/// Observed `([Q_L], [Q_{L^⊥}])` pairs versus pairs allowed by genus theory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairComparison {
    pub observed: BTreeSet<(Gl2Class, Gl2Class)>,
    pub predicted: BTreeSet<(Gl2Class, Gl2Class)>,
}

impl PairComparison {
    pub fn agree(&self) -> bool {
        self.observed == self.predicted
    }
}

pub fn compare_pairs(n: u64, planes: &[Plane]) -> Result<PairComparison> {
    orthogonal_composition_hypotheses(n)?;
    let ctx = GenusContext::new(n)?;
    let observed = planes
        .iter()
        .map(|p| {
            let z = cm_points(p).z;
            (z[0], z[1])
        })
        .collect();
    let classes = ctx.group.classes();
    let mut predicted = BTreeSet::new();
    for &c1 in classes {
        for &c2 in classes {
            if ctx.realizable(c1, c2)? {
                predicted.insert((crate::qform::gl2_class(c1), crate::qform::gl2_class(c2)));
            }
        }
    }
    Ok(PairComparison { observed, predicted })
}

/// JSON shape of a plane with its Klein data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KleinRecord {
    pub plucker: [i64; 6],
    pub klein: [[i64; 3]; 2],
    pub cm: [[i64; 3]; 4],
    /// `None` when `n` is outside the squarefree, 1 mod 4 case.
    pub realizable: Option<bool>,
}

pub fn klein_record(p: &Plane, ctx: Option<&GenusContext>) -> Result<KleinRecord> {
    let k = klein_map(p);
    let cm = cm_points(p);
    let realizable = match ctx {
        Some(ctx) => {
            let [z1, z2, ..] = cm.z;
            Some(ctx.realizable(z1.members()[0], z2.members()[0])?)
        }
        None => None,
    };
    Ok(KleinRecord {
        plucker: p.plucker().coords(),
        klein: [k.a1.to_vec3(), k.a2.to_vec3()],
        cm: cm.z.map(|c| c.canonical().coeffs()),
        realizable,
    })
}

/// Genus context when `n` satisfies the hypotheses, else `None`.
pub fn genus_context_if_applicable(n: u64) -> Result<Option<GenusContext>> {
    if orthogonal_composition_hypotheses(n).is_ok() {
        GenusContext::new(n).map(Some)
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::enumerate_planes;
    use proptest::prelude::*;

    fn tq(x: i64, y: i64, z: i64) -> TracelessQuaternion {
        TracelessQuaternion::new(x, y, z)
    }

    #[test]
    fn klein_map_examples() {
        let p = Plane::from_basis([1, 0, 0, 0], [0, 1, 0, 0]).unwrap();
        assert_eq!(klein_map(&p), KleinPair { a1: tq(1, 0, 0), a2: tq(1, 0, 0) });
        let p = Plane::from_basis([1, 0, 0, 0], [0, 0, 1, 0]).unwrap();
        assert_eq!(klein_map(&p), KleinPair { a1: tq(0, 1, 0), a2: tq(0, 1, 0) });
    }

    #[test]
    fn klein_map_of_complement_flips_a2() {
        for n in 1..=40 {
            for p in enumerate_planes(n) {
                let k = klein_map(&p);
                let kp = klein_map(&Plane::from_plucker(orth_complement(&p.plucker())));
                assert_eq!(kp, KleinPair::new(k.a1, -k.a2));
                assert_eq!(k.norm(), n as i64);
                assert!(k.is_admissible());
            }
        }
    }

    #[test]
    fn pair_primitive_examples() {
        assert!(pair_primitive(&[1, 0, 0], &[1, 0, 0]));
        assert!(!pair_primitive(&[3, 0, 0], &[3, 3, 0]));
        assert!(!pair_primitive(&[2, 2, 0], &[2, -2, 0]));
        assert!(pair_primitive(&[2, 0, 0], &[0, 2, 0]));
    }

    #[test]
    fn klein_bijection_small() {
        for n in 1..=60 {
            let planes = enumerate_planes(n);
            let mut image: Vec<KleinPair> = planes.iter().map(klein_map).collect();
            image.sort_unstable();
            let len = image.len();
            image.dedup();
            assert_eq!(image.len(), len, "injective for n={n}");
            assert_eq!(image, admissible_pairs(n), "image for n={n}");
            assert_eq!(klein_count(n), planes.len() as u64);
        }
    }

    #[test]
    fn three_squares_examples() {
        assert_eq!(three_square_reps(1).len(), 6);
        assert_eq!(three_square_reps(3).len(), 8);
        assert!(three_square_reps(7).is_empty());
        assert_eq!(three_square_reps(5)[0], [-2, -1, 0]);
    }

    #[test]
    fn gauss_map_examples() {
        let unit = Gl2Class::of(QuadForm::new(1, 0, 1).unwrap()).unwrap();
        assert_eq!(gauss_map(&[1, 0, 0]).unwrap(), unit);
        assert_eq!(
            gauss_map(&[0, 1, 2]).unwrap(),
            Gl2Class::of(QuadForm::new(1, 0, 5).unwrap()).unwrap()
        );
        let g = gauss_map(&[1, 1, 1]).unwrap();
        assert_eq!(g.disc(), -12);
        assert_eq!(g.canonical(), QuadForm::new(2, 2, 2).unwrap());
        assert!(!g.is_primitive());
        assert!(gauss_map(&[0, 0, 0]).is_err());
    }

    #[test]
    fn cm_points_examples() {
        let p = Plane::from_basis([1, 0, 0, 0], [0, 1, 0, 0]).unwrap();
        let unit = Gl2Class::of(QuadForm::new(1, 0, 1).unwrap()).unwrap();
        assert_eq!(cm_points(&p).z, [unit; 4]);
        for n in (1..=60).filter(|&n| is_squarefree(n)) {
            for p in enumerate_planes(n) {
                assert_eq!(cm_points(&p).discs(), [-4 * n as i64; 4]);
            }
        }
        // a1 = 2i at n = 4: the accidental points drop to disc -4.
        let p = Plane::from_basis([1, 0, 0, 0], [0, 2, 0, 0]).unwrap_err();
        assert!(matches!(p, Error::InvalidPlucker { .. }));
        let p = Plane::from_basis([1, 1, 0, 0], [1, -1, 0, 0]).unwrap_err();
        assert!(matches!(p, Error::InvalidPlucker { .. }));
        let p = Plane::from_basis([1, 1, 0, 0], [0, 1, 1, 0]).unwrap();
        assert_eq!(cm_points(&p).discs()[0], -12);
        let target = Gl2Class::of(QuadForm::new(2, 2, 3).unwrap()).unwrap();
        assert!(enumerate_planes(5).iter().any(|p| cm_points(p).z[0] == target));
    }

    #[test]
    fn mu_image_examples() {
        let p = Plane::from_basis([1, 0, 0, 0], [0, 1, 0, 0]).unwrap();
        let expected = vec![vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(mu_image(&p, 1).unwrap(), expected);
        assert_eq!(accidental_lattice(&p, 1), expected);
        for p in enumerate_planes(5) {
            for i in [1, 2] {
                assert_eq!(mu_image(&p, i).unwrap(), accidental_lattice(&p, i));
            }
            assert!(legendre_identity_holds(&p, 3));
        }
        let bad = &enumerate_planes(3)[0];
        assert!(matches!(mu_image(bad, 1), Err(Error::HypothesesNotMet(_))));
    }

    #[test]
    fn realizable_examples() {
        let p = FormClass::of(QuadForm::new(1, 0, 5).unwrap()).unwrap();
        let x = FormClass::of(QuadForm::new(2, 2, 3).unwrap()).unwrap();
        assert!(realizable_pair(p, p, 5).unwrap());
        assert!(!realizable_pair(p, x, 5).unwrap());
        assert!(realizable_pair(x, x, 5).unwrap());
        assert!(realizable_pair(p, p, 3).is_err());
        assert!(realizable_pair(p, p, 13).is_err());
    }

    #[test]
    fn pairs_match_small() {
        for n in [5u64, 13, 17, 21] {
            let cmp = compare_pairs(n, &enumerate_planes(n)).unwrap();
            assert!(cmp.agree(), "n={n}");
        }
    }

    #[test]
    fn gauss_genus_small() {
        let r = gauss_genus_report(5).unwrap();
        assert!(r.single_genus);
        assert_eq!(r.genera_hit, vec![0]);
        let r = gauss_genus_report(21).unwrap();
        assert!(r.single_genus);
        assert_eq!(r.genus_size, 1);
    }

    #[test]
    fn record_shape() {
        let p = Plane::from_basis([1, 0, 0, 0], [0, 1, 0, 0]).unwrap();
        let ctx = genus_context_if_applicable(1).unwrap();
        let rec = klein_record(&p, ctx.as_ref()).unwrap();
        assert_eq!(
            serde_json::to_string(&rec).unwrap(),
            r#"{"plucker":[1,0,0,0,0,0],"klein":[[1,0,0],[1,0,0]],"cm":[[1,0,1],[1,0,1],[1,0,1],[1,0,1]],"realizable":true}"#
        );
    }

    fn rebasing() -> impl Strategy<Value = [[i64; 2]; 2]> {
        prop::collection::vec((any::<bool>(), -3i64..=3), 1..6).prop_map(|ops| {
            let mut m = [[1, 0], [0, 1]];
            for (swap, t) in ops {
                if swap {
                    m.swap(0, 1);
                } else {
                    m[0][0] += t * m[1][0];
                    m[0][1] += t * m[1][1];
                }
            }
            m
        })
    }

    proptest! {
        #[test]
        fn klein_map_is_basis_independent(n in 1u64..=40, idx in 0usize..1000, g in rebasing()) {
            let planes = enumerate_planes(n);
            prop_assume!(!planes.is_empty());
            let p = &planes[idx % planes.len()];
            let [u, v] = p.basis().map(Quaternion::from_vec4);
            let s = |a: i64, b: i64| Quaternion::from(a) * u + Quaternion::from(b) * v;
            let (u2, v2) = (s(g[0][0], g[0][1]), s(g[1][0], g[1][1]));
            prop_assert_eq!(klein_of_basis(u2, v2), klein_map(p));
        }
    }
}
