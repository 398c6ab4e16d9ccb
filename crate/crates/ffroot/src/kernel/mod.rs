//! Coefficient arithmetic lanes.
//!
//! Every polynomial algorithm in the crate is written once, generic over a
//! [`Lane`]: a word lane for p < 2^63 (u64 residues, u128 lazy dot-product
//! accumulation) and a big lane for larger p. The choice of lane is made at
//! `PrimeModulus` construction and is invisible to callers.

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, RngCore};

use crate::natural::Natural;

pub(crate) mod ops;

pub(crate) trait Lane: Send + Sync {
    type E: Clone + PartialEq + Eq + Send + Sync + std::fmt::Debug;
    /// Accumulator cell for sums of coefficient products.
    type Acc;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn is_one(&self, a: &Self::E) -> bool;
    fn from_natural(&self, v: &Natural) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Option<Self::E>;

    fn acc_new(&self) -> Self::Acc;
    fn acc_mul_add(&self, acc: &mut Self::Acc, a: &Self::E, b: &Self::E);
    fn acc_double(&self, acc: &mut Self::Acc);
    fn acc_finish(&self, acc: Self::Acc) -> Self::E;

    fn random(&self, rng: &mut dyn RngCore) -> Self::E;
}

/// Residues stored as canonical u64 values below p < 2^63.
#[derive(Clone, Debug)]
pub(crate) struct WordLane {
    pub(crate) p: u64,
    /// 2^128 mod p, used to fold accumulator carries.
    r128: u64,
}

pub(crate) const WORD_LANE_LIMIT: u64 = 1 << 63;

impl WordLane {
    pub(crate) fn new(p: u64) -> Self {
        debug_assert!(p >= 2 && p < WORD_LANE_LIMIT);
        let r128 = (BigUint::one() << 128u32) % p;
        WordLane { p, r128: r128.to_u64().expect("residue fits") }
    }
}

/// Accumulator: 128-bit window plus an overflow counter, folded with
/// 2^128 mod p on rundown. Holds any number of u64·u64 products.
#[derive(Clone, Copy)]
pub(crate) struct WordAcc {
    lo: u128,
    hi: u64,
}

impl Lane for WordLane {
    type E = u64;
    type Acc = WordAcc;

    #[inline]
    fn zero(&self) -> u64 {
        0
    }
    #[inline]
    fn one(&self) -> u64 {
        1 % self.p
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn is_one(&self, a: &u64) -> bool {
        *a == 1 % self.p
    }
    fn from_natural(&self, v: &Natural) -> u64 {
        (v % self.p).to_u64().expect("reduced value fits")
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Extended Euclid on i128; Bezout coefficients stay below the modulus.
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if r0 != 1 {
            return None; // p prime, a != 0: unreachable
        }
        let t = t0.rem_euclid(self.p as i128);
        Some(t as u64)
    }

    #[inline]
    fn acc_new(&self) -> WordAcc {
        WordAcc { lo: 0, hi: 0 }
    }
    #[inline]
    fn acc_mul_add(&self, acc: &mut WordAcc, a: &u64, b: &u64) {
        let (lo, carry) = acc.lo.overflowing_add(*a as u128 * *b as u128);
        acc.lo = lo;
        acc.hi += carry as u64;
    }
    #[inline]
    fn acc_double(&self, acc: &mut WordAcc) {
        let (lo, carry) = acc.lo.overflowing_add(acc.lo);
        acc.lo = lo;
        acc.hi = 2 * acc.hi + carry as u64;
    }
    #[inline]
    fn acc_finish(&self, acc: WordAcc) -> u64 {
        let p = self.p as u128;
        let lo = (acc.lo % p) as u64;
        if acc.hi == 0 {
            lo
        } else {
            let hi = (acc.hi as u128 % p) * self.r128 as u128 % p;
            ((hi + lo as u128) % p) as u64
        }
    }

    fn random(&self, rng: &mut dyn RngCore) -> u64 {
        rng.gen_range(0..self.p)
    }
}

/// Residues stored as canonical `BigUint` values; correct for any prime.
#[derive(Clone, Debug)]
pub(crate) struct BigLane {
    pub(crate) p: BigUint,
}

impl Lane for BigLane {
    type E = BigUint;
    type Acc = BigUint;

    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one()
    }
    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigUint) -> bool {
        a.is_one()
    }
    fn from_natural(&self, v: &Natural) -> BigUint {
        v % &self.p
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.p {
            s - &self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            a + &self.p - b
        }
    }
    fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            &self.p - a
        }
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        a * b % &self.p
    }
    fn inv(&self, a: &BigUint) -> Option<BigUint> {
        if a.is_zero() {
            return None;
        }
        let e = BigInt::from(a.clone()).extended_gcd(&BigInt::from(self.p.clone()));
        if !e.gcd.is_one() {
            return None;
        }
        let m = BigInt::from(self.p.clone());
        let x = ((e.x % &m) + &m) % &m;
        Some(x.to_biguint().expect("normalized"))
    }

    fn acc_new(&self) -> BigUint {
        BigUint::zero()
    }
    fn acc_mul_add(&self, acc: &mut BigUint, a: &BigUint, b: &BigUint) {
        *acc += a * b;
    }
    fn acc_double(&self, acc: &mut BigUint) {
        *acc *= 2u32;
    }
    fn acc_finish(&self, acc: BigUint) -> BigUint {
        acc % &self.p
    }

    fn random(&self, rng: &mut dyn RngCore) -> BigUint {
        rng.gen_biguint_below(&self.p)
    }
}

/// The lane selected for a given prime modulus.
#[derive(Clone, Debug)]
pub(crate) enum LaneKind {
    Word(WordLane),
    Big(BigLane),
}

impl LaneKind {
    pub(crate) fn for_prime(p: &Natural) -> LaneKind {
        match p.to_u64() {
            Some(v) if v < WORD_LANE_LIMIT => LaneKind::Word(WordLane::new(v)),
            _ => LaneKind::Big(BigLane { p: p.clone() }),
        }
    }
}
