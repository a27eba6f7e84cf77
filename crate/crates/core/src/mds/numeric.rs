//! Floating-point checks: `L(1, χ_{-d0})` against `r3`, and the global
//! identity truncated in `d` and over primes.

use std::f64::consts::PI;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{q_local_at, RationalFn};
use crate::arith::{is_squarefree, kronecker, legendre, primes_up_to};
use crate::error::{Error, Result};
use crate::repnum::{admissible_d0, r3, rs3_coeffs};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LValueReport {
    pub d0: u64,
    pub terms: u64,
    pub l_value: f64,
    pub predicted: f64,
    pub abs_diff: f64,
}

const L_TERMS: u64 = 1_000_000;

/// `Σ_{n<=N} χ(n)/n` with `N` a multiple of `d0` near `10⁶`, plus the tail
/// estimate `mean(S)/N` from the partial sums `S` over one period.
pub fn l_value_check(d0: u64) -> Result<LValueReport> {
    if d0 <= 3 || !is_squarefree(d0) || d0 % 8 != 3 {
        return Err(Error::Precondition(format!("d0 must be squarefree, > 3 and 3 mod 8, got {d0}")));
    }
    let chi: Vec<f64> = (0..d0).map(|r| if r == 0 { 0.0 } else { f64::from(kronecker(-(d0 as i64), r)) }).collect();
    let n_terms = L_TERMS.div_ceil(d0) * d0;
    let mut sum = 0.0;
    for base in (0..n_terms).step_by(d0 as usize) {
        let mut block = 0.0;
        for r in 1..=d0 {
            block += chi[(r % d0) as usize] / (base + r) as f64;
        }
        sum += block;
    }
    let mut partial = 0.0;
    let mut mean = 0.0;
    for r in 1..=d0 {
        partial += chi[(r % d0) as usize];
        mean += partial;
    }
    mean /= d0 as f64;
    let l_value = sum + mean / n_terms as f64;
    let predicted = PI * r3(d0) as f64 / (24.0 * (d0 as f64).sqrt());
    Ok(LValueReport { d0, terms: n_terms, l_value, predicted, abs_diff: (l_value - predicted).abs() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rs3IdentityReport {
    pub w: f64,
    pub dmax: u64,
    pub pmax: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_diff: f64,
    /// `rel_diff` had the left side used `π²/256` in place of `π²/128`.
    pub half_constant_rel_diff: f64,
}

fn rel(a: f64, b: f64) -> f64 {
    if a == 0.0 && b == 0.0 {
        0.0
    } else {
        (a - b).abs() / b.abs().max(a.abs())
    }
}

/// Left: `(π²/128) ζ₂(2w) ζ₂(2w-1) Σ_{d<=Dmax} r24(d) d^{-w}`, `d ≡ 3 (4)`.
/// Right: `(9/4)(π²/576) Σ_{d0<=Dmax} r3(d0)² d0^{-w} ∏_p Q_{d0,p}` with the
/// local factors at `(x, x, p^{1-w})`. Both Euler products run over odd
/// `p <= pmax`.
pub fn rs3_identity_numeric(w: f64, dmax: u64, pmax: u64) -> Result<Rs3IdentityReport> {
    if w <= 2.0 {
        return Err(Error::Precondition(format!("w must exceed 2, got {w}")));
    }
    let primes: Vec<u64> = primes_up_to(pmax).into_iter().filter(|&p| p > 2).collect();
    let zeta2 = |s: f64| primes.iter().map(|&p| 1.0 / (1.0 - (p as f64).powf(-s))).product::<f64>();
    let series = rs3_coeffs(dmax).eval(w);
    let lhs_core = zeta2(2.0 * w) * zeta2(2.0 * w - 1.0) * series;
    let lhs = PI * PI / 128.0 * lhs_core;

    let factors: Vec<RationalFn> = [-1, 0, 1].iter().map(|&e| q_local_at(e)).collect::<Result<_>>()?;
    let rhs_sum: f64 = admissible_d0(dmax)
        .par_iter()
        .map(|&d0| {
            let euler: f64 = primes
                .iter()
                .map(|&p| {
                    let eps = legendre(-(d0 as i64), p);
                    let at = [p as f64, (p as f64).powf(-w), 0.0, 0.0];
                    factors[(eps + 1) as usize].eval_f64(&at)
                })
                .product();
            let r = r3(d0).to_f64().unwrap();
            r * r * (d0 as f64).powf(-w) * euler
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .sum();
    let rhs = 9.0 / 4.0 * PI * PI / 576.0 * rhs_sum;
    Ok(Rs3IdentityReport {
        w,
        dmax,
        pmax,
        lhs,
        rhs,
        rel_diff: rel(lhs, rhs),
        half_constant_rel_diff: rel(lhs / 2.0, rhs),
    })
}
