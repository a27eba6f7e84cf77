//! Verification suites, one per checked statement, with JSON reports.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::{in_plane_disc_set, is_squarefree};
use crate::error::{Error, Result};
use crate::klein::{
    accidental_lattice, admissible_pairs, compare_pairs, gauss_genus_report, klein_map, legendre_identity_holds,
    mu_image, KleinPair,
};
use crate::lattice::{enumerate_planes, orth_complement};
use crate::mds::{fsum_matches_series, l_value_check, local_identity_numeric, rs3_identity_numeric, verify_local_identity};
use crate::qform::{class_group, genus_count_by_characters, genus_partition};
use crate::repnum::{admissible_d0, count_table, r3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    fn of(ok: bool) -> Self {
        if ok {
            Self::Pass
        } else {
            Self::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub status: Status,
    pub detail: Value,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    R24,
    KleinBijection,
    Complement,
    LocalIdentity,
    FsumSeries,
    ClassNumber,
    LValue,
    GaussGenus,
    CompOrt,
    PairGenus,
    GenusCount,
    GlobalIdentity,
}

impl Check {
    pub const ALL: [Check; 12] = [
        Check::R24,
        Check::KleinBijection,
        Check::Complement,
        Check::LocalIdentity,
        Check::FsumSeries,
        Check::ClassNumber,
        Check::LValue,
        Check::GaussGenus,
        Check::CompOrt,
        Check::PairGenus,
        Check::GenusCount,
        Check::GlobalIdentity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::R24 => "r24",
            Check::KleinBijection => "klein-bijection",
            Check::Complement => "complement",
            Check::LocalIdentity => "local-identity",
            Check::FsumSeries => "fsum-series",
            Check::ClassNumber => "class-number",
            Check::LValue => "l-value",
            Check::GaussGenus => "gauss-genus",
            Check::CompOrt => "comp-ort",
            Check::PairGenus => "pair-genus",
            Check::GenusCount => "genus-count",
            Check::GlobalIdentity => "global-identity",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown check {s:?}")))
    }
}

/// Ranges used by the suites; the defaults are the full acceptance ranges.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub r24_max: u64,
    pub klein_max: u64,
    pub class_number_max: u64,
    pub gauss_max: u64,
    pub composition_max: u64,
    pub genus_max: u64,
    pub fmax: u64,
    pub series_order: u32,
    pub prime_cutoff: u64,
    pub dmax: u64,
    pub w: f64,
}

impl Default for Bounds {
    fn default() -> Self {
        Self {
            r24_max: 500,
            klein_max: 200,
            class_number_max: 200,
            gauss_max: 200,
            composition_max: 150,
            genus_max: 300,
            fmax: 99,
            series_order: 20,
            prime_cutoff: 10_000,
            dmax: 200,
            w: 4.0,
        }
    }
}

impl Bounds {
    /// Caps every discriminant range at `max_disc`.
    pub fn capped(mut self, max_disc: u64) -> Self {
        for b in [
            &mut self.r24_max,
            &mut self.klein_max,
            &mut self.class_number_max,
            &mut self.gauss_max,
            &mut self.composition_max,
            &mut self.genus_max,
            &mut self.dmax,
        ] {
            *b = (*b).min(max_disc);
        }
        self
    }
}

pub fn run_check(check: Check, b: &Bounds) -> CheckReport {
    let result = match check {
        Check::R24 => r24(b),
        Check::KleinBijection => klein_bijection(b),
        Check::Complement => complement(b),
        Check::LocalIdentity => local_identity(b),
        Check::FsumSeries => fsum_series(b),
        Check::ClassNumber => class_number(b),
        Check::LValue => l_value(b),
        Check::GaussGenus => gauss_genus(b),
        Check::CompOrt => comp_ort(b),
        Check::PairGenus => pair_genus(b),
        Check::GenusCount => genus_count(b),
        Check::GlobalIdentity => global_identity(b),
    };
    let (ok, detail) = result.unwrap_or_else(|e| (false, json!({ "error": e.to_string() })));
    CheckReport { check: check.name().to_string(), status: Status::of(ok), detail }
}

pub fn run_all(b: &Bounds) -> Vec<CheckReport> {
    Check::ALL.iter().map(|&c| run_check(c, b)).collect()
}

type Outcome = Result<(bool, Value)>;

fn failures<T: Serialize>(items: &[T]) -> Value {
    json!(items.iter().take(20).collect::<Vec<_>>())
}

fn r24(b: &Bounds) -> Outcome {
    let table = count_table(b.r24_max)?;
    let disagree: Vec<u64> = table.iter().filter(|r| !r.agree).map(|r| r.d).collect();
    let support: Vec<u64> = table
        .iter()
        .filter(|r| (r.r24_oracle > 0) != in_plane_disc_set(r.d))
        .map(|r| r.d)
        .collect();
    Ok((
        disagree.is_empty() && support.is_empty(),
        json!({ "dmax": b.r24_max, "checked": table.len(), "disagree": failures(&disagree), "support_mismatch": failures(&support) }),
    ))
}

fn klein_bijection(b: &Bounds) -> Outcome {
    let bad: Vec<u64> = (1..=b.klein_max)
        .into_par_iter()
        .filter(|&n| {
            let planes = enumerate_planes(n);
            let image: BTreeSet<KleinPair> = planes.iter().map(klein_map).collect();
            let pairs: BTreeSet<KleinPair> = admissible_pairs(n).into_iter().map(|k| KleinPair::new(k.a1, k.a2)).collect();
            let characterized = image.iter().all(|k| k.is_admissible() && k.norm() == n as i64);
            !(image.len() == planes.len() && image == pairs && characterized)
        })
        .collect();
    Ok((bad.is_empty(), json!({ "nmax": b.klein_max, "failing_n": failures(&bad) })))
}

fn complement(b: &Bounds) -> Outcome {
    let results: Vec<(u64, usize, usize)> = (1..=b.klein_max)
        .into_par_iter()
        .map(|n| {
            let planes = enumerate_planes(n);
            let bad = planes
                .iter()
                .filter(|p| {
                    let perp = p.orthogonal_plane();
                    perp.plucker() != orth_complement(&p.plucker()) || perp.disc() != p.disc()
                })
                .count();
            (n, planes.len(), bad)
        })
        .collect();
    let bad: Vec<u64> = results.iter().filter(|r| r.2 > 0).map(|r| r.0).collect();
    let planes: usize = results.iter().map(|r| r.1).sum();
    Ok((bad.is_empty(), json!({ "nmax": b.klein_max, "planes": planes, "failing_n": failures(&bad) })))
}

fn local_identity(b: &Bounds) -> Outcome {
    let exact = verify_local_identity();
    let mut numeric = Vec::new();
    for p in [3, 5, 7, 11, 13] {
        for d0 in [3, 11, 19] {
            numeric.push(local_identity_numeric(p, d0, b.series_order)?);
        }
    }
    let ok = exact.all_equal && numeric.iter().all(|c| c.agree);
    Ok((ok, json!({ "symbolic": exact, "numeric": numeric })))
}

fn fsum_series(b: &Bounds) -> Outcome {
    let rep = fsum_matches_series(&[3, 11, 19], b.fmax)?;
    Ok((rep.mismatches.is_empty() && rep.symbolic_sum_matches, serde_json::to_value(&rep).unwrap()))
}

fn class_number(b: &Bounds) -> Outcome {
    let mut rows = Vec::new();
    for d0 in 4..=b.class_number_max {
        if !is_squarefree(d0) {
            continue;
        }
        let (disc, weight) = match d0 % 8 {
            3 => (-(d0 as i64), 24),
            1 | 2 | 5 | 6 if in_plane_disc_set(d0) => (-4 * d0 as i64, 12),
            _ => continue,
        };
        let h = class_group(disc)?.order() as u64;
        rows.push((d0, disc, r3(d0), h, r3(d0) == weight * h));
    }
    let bad: Vec<_> = rows.iter().filter(|r| !r.4).collect();
    Ok((bad.is_empty(), json!({ "checked": rows.len(), "failures": failures(&bad) })))
}

fn l_value(b: &Bounds) -> Outcome {
    let reports: Vec<_> = admissible_d0(b.class_number_max)
        .into_par_iter()
        .filter(|&d0| d0 > 3)
        .map(l_value_check)
        .collect::<Result<_>>()?;
    let max = reports.iter().map(|r| r.abs_diff).fold(0.0, f64::max);
    let ok = reports.iter().all(|r| r.abs_diff < 1e-6);
    Ok((ok, json!({ "checked": reports.len(), "max_abs_diff": max, "tolerance": 1e-6 })))
}

fn gauss_genus(b: &Bounds) -> Outcome {
    let ns: Vec<u64> = (1..=b.gauss_max).filter(|&n| is_squarefree(n) && matches!(n % 4, 1 | 2)).collect();
    let reports: Vec<_> = ns.par_iter().map(|&n| gauss_genus_report(n)).collect::<Result<_>>()?;
    let bad: Vec<u64> = reports.iter().filter(|r| !r.single_genus).map(|r| r.n).collect();
    let surjective = reports.iter().filter(|r| r.surjective).count();
    Ok((
        bad.is_empty(),
        json!({ "checked": reports.len(), "not_single_genus": failures(&bad), "surjective_onto_genus": surjective }),
    ))
}

fn composition_ns(max: u64) -> Vec<u64> {
    (1..=max).filter(|&n| n % 4 == 1 && is_squarefree(n) && in_plane_disc_set(n)).collect()
}

fn comp_ort(b: &Bounds) -> Outcome {
    let results: Vec<(u64, usize, usize)> = composition_ns(b.composition_max)
        .into_par_iter()
        .map(|n| -> Result<_> {
            let planes = enumerate_planes(n);
            let mut bad = 0;
            for p in &planes {
                let image_ok = [1u8, 2].iter().try_fold(true, |ok, &i| -> Result<bool> {
                    Ok(ok && mu_image(p, i)? == accidental_lattice(p, i))
                })?;
                if !(image_ok && legendre_identity_holds(p, 3)) {
                    bad += 1;
                }
            }
            Ok((n, planes.len(), bad))
        })
        .collect::<Result<_>>()?;
    let bad: Vec<u64> = results.iter().filter(|r| r.2 > 0).map(|r| r.0).collect();
    let planes: usize = results.iter().map(|r| r.1).sum();
    Ok((bad.is_empty(), json!({ "n_values": results.len(), "planes": planes, "failing_n": failures(&bad) })))
}

fn pair_genus(b: &Bounds) -> Outcome {
    let results: Vec<(u64, usize, usize, bool)> = composition_ns(b.composition_max)
        .into_par_iter()
        .map(|n| -> Result<_> {
            let cmp = compare_pairs(n, &enumerate_planes(n))?;
            Ok((n, cmp.observed.len(), cmp.predicted.len(), cmp.agree()))
        })
        .collect::<Result<_>>()?;
    let bad: Vec<_> = results.iter().filter(|r| !r.3).collect();
    Ok((bad.is_empty(), json!({ "n_values": results.len(), "failures": failures(&bad) })))
}

fn genus_count(b: &Bounds) -> Outcome {
    let rows: Vec<(u64, usize, usize, usize)> = (1..=b.genus_max)
        .into_par_iter()
        .map(|n| -> Result<_> {
            let g = class_group(-4 * n as i64)?;
            let part = genus_partition(&g);
            let squares: BTreeSet<usize> = (0..g.order()).map(|i| g.mul(i, i)).collect();
            Ok((n, part.count(), g.order() / squares.len(), genus_count_by_characters(n)))
        })
        .collect::<Result<_>>()?;
    let bad: Vec<_> = rows
        .iter()
        .filter(|&&(_, genera, index, chars)| genera != index || !genera.is_power_of_two() || genera != chars)
        .collect();
    Ok((bad.is_empty(), json!({ "nmax": b.genus_max, "failures": failures(&bad) })))
}

fn global_identity(b: &Bounds) -> Outcome {
    let rep = rs3_identity_numeric(b.w, b.dmax, b.prime_cutoff)?;
    Ok((rep.rel_diff < 1e-4, json!({ "report": rep, "tolerance": 1e-4 })))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Bounds {
        Bounds { fmax: 15, series_order: 8, prime_cutoff: 200, ..Bounds::default() }.capped(40)
    }

    #[test]
    fn names_round_trip() {
        for c in Check::ALL {
            assert_eq!(c.name().parse::<Check>().unwrap(), c);
        }
        assert!("nope".parse::<Check>().is_err());
    }

    #[test]
    fn small_bounds_pass() {
        // the global identity needs the full d range to reach its tolerance
        for c in Check::ALL.into_iter().filter(|&c| c != Check::GlobalIdentity) {
            let r = run_check(c, &small());
            assert!(r.passed(), "{}", serde_json::to_string(&r).unwrap());
        }
    }

    #[test]
    fn report_shape() {
        let r = run_check(Check::LocalIdentity, &small());
        let js = serde_json::to_value(&r).unwrap();
        assert_eq!(js["check"], "local-identity");
        assert_eq!(js["status"], "pass");
        assert!(js["detail"]["symbolic"]["cases"].is_array());
    }
}
