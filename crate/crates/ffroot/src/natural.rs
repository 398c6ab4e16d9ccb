//! Unbounded natural-number utilities: primality, modular inverses and
//! multiplicative orders.
//!
//! `Natural` is the canonical arbitrary-precision non-negative integer used
//! for every exponent in the crate; exponents such as (p^s - 1)/t have
//! n·log(p) bits regardless of whether p itself fits in a machine word.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use num_bigint::RandBigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Arbitrary-precision non-negative integer. Parsing and printing use plain
/// decimal digits (no sign, no whitespace), which is exactly what
/// `BigUint`'s `FromStr`/`Display` provide.
pub type Natural = BigUint;

/// Convenience constructor used throughout the tests.
pub fn nat(v: u64) -> Natural {
    Natural::from(v)
}

/// Modular inverse: the unique b < m with a·b ≡ 1 (mod m).
///
/// Rejects non-coprime inputs and m < 2.
pub fn invmod(a: &Natural, m: &Natural) -> Result<Natural> {
    if *m < nat(2) {
        return Err(Error::InvalidInput(format!("invmod modulus {m} < 2")));
    }
    let a = a % m;
    if a.is_zero() {
        return Err(Error::NotCoprime);
    }
    let e = num_bigint::BigInt::from(a).extended_gcd(&num_bigint::BigInt::from(m.clone()));
    if !e.gcd.is_one() {
        return Err(Error::NotCoprime);
    }
    let m_int = num_bigint::BigInt::from(m.clone());
    let x = ((e.x % &m_int) + &m_int) % &m_int;
    Ok(x.to_biguint().expect("non-negative after normalization"))
}

/// Least s >= 1 with p^s ≡ 1 (mod t), for prime t coprime to p.
///
/// Computed by factoring t-1 and descending along its divisors, so t must
/// fit in a machine word.
pub fn order_mod(p: &Natural, t: u64) -> Result<u64> {
    if t < 2 {
        return Err(Error::InvalidInput(format!("order_mod needs t >= 2, got {t}")));
    }
    let r = (p % nat(t)).to_u64().expect("residue below u64 t");
    if gcd_u64(r, t) != 1 {
        return Err(Error::NotCoprime);
    }
    if r == 1 {
        return Ok(1);
    }
    // s divides t-1 (t prime); strip primes of t-1 while the power stays 1.
    let mut s = t - 1;
    for (q, _) in factor_u64(t - 1) {
        while s % q == 0 && pow_mod_u64(r, s / q, t) == 1 {
            s /= q;
        }
    }
    debug_assert_eq!(pow_mod_u64(r, s, t), 1);
    Ok(s)
}

/// Probabilistic primality: deterministic Miller-Rabin witnesses below 2^64,
/// 40 pseudo-random bases above (error < 2^-80).
pub fn is_prime(n: &Natural) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    if n.is_even() {
        return false;
    }
    // Bases are drawn from a generator seeded from n itself, keeping
    // construction deterministic for a given modulus.
    let mut seed = 0xa076_1d64_78bd_642fu64;
    for b in n.to_bytes_le() {
        seed = (seed ^ b as u64).wrapping_mul(0x100_0000_01b3);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_m1 = n - 1u32;
    let s = n_m1.trailing_zeros().expect("odd n > 1");
    let d = &n_m1 >> s;
    'witness: for _ in 0..40 {
        let a = rng.gen_biguint_range(&nat(2), &n_m1);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_m1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&nat(2), n);
            if x == n_m1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    // This witness set is deterministic for all n < 2^64.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub(crate) fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod_u64(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, a, m);
        }
        a = mul_mod_u64(a, a, m);
        e >>= 1;
    }
    acc
}

/// Prime factorization of a machine word by trial division plus Pollard rho.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let push = |p: u64, out: &mut Vec<(u64, u32)>| {
        if let Some(last) = out.iter_mut().find(|(q, _)| *q == p) {
            last.1 += 1;
        } else {
            out.push((p, 1));
        }
    };
    for q in [2u64, 3, 5] {
        while n % q == 0 {
            push(q, &mut out);
            n /= q;
        }
    }
    let mut d = 7u64;
    let mut wheel = [4u64, 2, 4, 2, 4, 6, 2, 6].iter().cycle();
    while d <= 1 << 20 && d.saturating_mul(d) <= n {
        while n % d == 0 {
            push(d, &mut out);
            n /= d;
        }
        d += wheel.next().unwrap();
    }
    // Whatever is left has no factor below 2^20; split it recursively.
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            push(m, &mut out);
            continue;
        }
        let f = pollard_rho(m);
        stack.push(f);
        stack.push(m / f);
    }
    out.sort_unstable();
    out
}

/// Brent-style Pollard rho; n must be odd, composite and > 1.
fn pollard_rho(n: u64) -> u64 {
    debug_assert!(n > 3 && !is_prime_u64(n));
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod_u64(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}
