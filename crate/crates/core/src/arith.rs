//! Small-integer number theory used throughout the crate.
//!
//! Everything here works on machine integers; the inputs the rest of the
//! crate feeds in are discriminants and norms in the low thousands.

use num_integer::Integer;

/// Integer square root, `None` for negative input.
pub fn isqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    Some(num_integer::Roots::sqrt(&n))
}

/// Returns `Some(r)` when `n == r * r` with `r >= 0`.
pub fn exact_sqrt(n: i64) -> Option<i64> {
    let r = isqrt(n)?;
    (r * r == n).then_some(r)
}

/// Non-negative gcd of a slice; `gcd([]) == 0`.
pub fn gcd_all(xs: &[i64]) -> i64 {
    xs.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Prime factorisation by trial division, as `(prime, exponent)` pairs in
/// increasing order. `factorize(1)` is empty.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factorize(0)");
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// Distinct prime divisors.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Number of distinct prime factors, ω(n).
pub fn omega(n: u64) -> u32 {
    factorize(n).len() as u32
}

pub fn is_squarefree(n: u64) -> bool {
    n > 0 && factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Writes `n = core * m^2` with `core` squarefree.
pub fn squarefree_decomposition(n: u64) -> (u64, u64) {
    let mut core = 1;
    let mut m = 1;
    for (p, e) in factorize(n) {
        if e % 2 == 1 {
            core *= p;
        }
        m *= p.pow(e / 2);
    }
    (core, m)
}

/// Positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let cur = ds.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            ds.extend(cur.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut b = (base % modulus) as u128;
    let mut acc = 1u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Legendre symbol `(a/p)` for an odd prime `p`, via Euler's criterion.
pub fn legendre(a: i64, p: u64) -> i32 {
    debug_assert!(p > 2 && p % 2 == 1, "legendre needs an odd prime");
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    match mod_pow(r, (p - 1) / 2, p) {
        1 => 1,
        x if x == p - 1 => -1,
        x => panic!("{p} is not prime (Euler criterion gave {x})"),
    }
}

/// Kronecker symbol `(a/n)` for `n >= 1`.
pub fn kronecker(a: i64, n: u64) -> i32 {
    assert!(n >= 1);
    let mut result = 1i32;
    for (p, e) in factorize_or_empty(n) {
        let s = if p == 2 {
            if a % 2 == 0 {
                0
            } else {
                match a.rem_euclid(8) {
                    1 | 7 => 1,
                    _ => -1,
                }
            }
        } else {
            legendre(a, p)
        };
        if s == 0 {
            return 0;
        }
        if e % 2 == 1 {
            result *= s;
        }
    }
    result
}

fn factorize_or_empty(n: u64) -> Vec<(u64, u32)> {
    if n == 1 {
        Vec::new()
    } else {
        factorize(n)
    }
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// `(g, x, y)` with `g = gcd(a, b) >= 0` and `a x + b y = g`.
pub fn xgcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Membership in the set of attainable plane discriminants: `n` not
/// congruent to 0, 7, 12 or 15 modulo 16.
pub fn in_plane_disc_set(n: u64) -> bool {
    n > 0 && !matches!(n % 16, 0 | 7 | 12 | 15)
}
