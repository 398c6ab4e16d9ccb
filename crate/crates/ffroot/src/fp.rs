//! Prime-field scalars: the modulus type, canonical residues, and the
//! F_p root extractors used as the black box of the reduction when s = 1.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Zero};
use rand::RngCore;

use crate::error::{Error, Result};
use crate::kernel::{Lane, LaneKind};
use crate::natural::{is_prime, nat, Natural};

/// A prime modulus validated at construction (Miller-Rabin, error < 2^-80).
#[derive(Debug)]
pub struct PrimeModulus {
    value: Natural,
    pub(crate) lane: LaneKind,
}

impl PrimeModulus {
    pub fn new(value: Natural) -> Result<Arc<PrimeModulus>> {
        if !is_prime(&value) {
            return Err(Error::NotPrime);
        }
        let lane = LaneKind::for_prime(&value);
        Ok(Arc::new(PrimeModulus { value, lane }))
    }

    pub fn from_u64(value: u64) -> Result<Arc<PrimeModulus>> {
        PrimeModulus::new(nat(value))
    }

    pub fn value(&self) -> &Natural {
        &self.value
    }

    pub fn bits(&self) -> u64 {
        self.value.bits()
    }

    pub fn is_odd(&self) -> bool {
        self.value.is_odd()
    }
}

impl PartialEq for PrimeModulus {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}
impl Eq for PrimeModulus {}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

pub(crate) fn same_modulus(a: &Arc<PrimeModulus>, b: &Arc<PrimeModulus>) -> bool {
    Arc::ptr_eq(a, b) || a.value == b.value
}

/// Canonical residue in [0, p).
#[derive(Clone)]
pub struct FpElement {
    value: Natural,
    modulus: Arc<PrimeModulus>,
}

impl FpElement {
    pub fn new(value: Natural, modulus: &Arc<PrimeModulus>) -> FpElement {
        FpElement { value: value % modulus.value(), modulus: Arc::clone(modulus) }
    }

    pub fn from_u64(value: u64, modulus: &Arc<PrimeModulus>) -> FpElement {
        FpElement::new(nat(value), modulus)
    }

    pub fn zero(modulus: &Arc<PrimeModulus>) -> FpElement {
        FpElement { value: Natural::zero(), modulus: Arc::clone(modulus) }
    }

    pub fn one(modulus: &Arc<PrimeModulus>) -> FpElement {
        FpElement::new(Natural::one(), modulus)
    }

    pub fn value(&self) -> &Natural {
        &self.value
    }

    pub fn modulus(&self) -> &Arc<PrimeModulus> {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    fn check(&self, other: &FpElement) {
        assert!(same_modulus(&self.modulus, &other.modulus), "mixed prime moduli");
    }

    pub fn add(&self, other: &FpElement) -> FpElement {
        self.check(other);
        let s = &self.value + &other.value;
        let p = self.modulus.value();
        FpElement {
            value: if &s >= p { s - p } else { s },
            modulus: Arc::clone(&self.modulus),
        }
    }

    pub fn sub(&self, other: &FpElement) -> FpElement {
        self.check(other);
        let p = self.modulus.value();
        let value = if self.value >= other.value {
            &self.value - &other.value
        } else {
            &self.value + p - &other.value
        };
        FpElement { value, modulus: Arc::clone(&self.modulus) }
    }

    pub fn neg(&self) -> FpElement {
        let value = if self.value.is_zero() {
            Natural::zero()
        } else {
            self.modulus.value() - &self.value
        };
        FpElement { value, modulus: Arc::clone(&self.modulus) }
    }

    pub fn mul(&self, other: &FpElement) -> FpElement {
        self.check(other);
        FpElement {
            value: &self.value * &other.value % self.modulus.value(),
            modulus: Arc::clone(&self.modulus),
        }
    }

    pub fn inv(&self) -> Result<FpElement> {
        if self.value.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let value = crate::natural::invmod(&self.value, self.modulus.value())?;
        Ok(FpElement { value, modulus: Arc::clone(&self.modulus) })
    }

    /// a^e with 0^0 = 1.
    pub fn pow(&self, e: &Natural) -> FpElement {
        if e.is_zero() {
            return FpElement::one(&self.modulus);
        }
        FpElement {
            value: self.value.modpow(e, self.modulus.value()),
            modulus: Arc::clone(&self.modulus),
        }
    }
}

impl PartialEq for FpElement {
    fn eq(&self, other: &Self) -> bool {
        self.modulus.value() == other.modulus.value() && self.value == other.value
    }
}
impl Eq for FpElement {}

impl fmt::Debug for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus.value())
    }
}

impl fmt::Display for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

/// a^e in F_p.
pub fn fp_pow(a: &FpElement, e: &Natural) -> FpElement {
    a.pow(e)
}

fn random_fp(modulus: &Arc<PrimeModulus>, rng: &mut dyn RngCore) -> FpElement {
    let value = match &modulus.lane {
        LaneKind::Word(l) => nat(l.random(rng)),
        LaneKind::Big(l) => l.random(rng),
    };
    FpElement { value, modulus: Arc::clone(modulus) }
}

/// Square root in F_p (p odd) by Tonelli-Shanks. Returns either of the two
/// roots; `NotASquare` when the Euler criterion fails.
pub fn tonelli_shanks_fp(a: &FpElement, rng: &mut dyn RngCore) -> Result<FpElement> {
    let p = a.modulus().value().clone();
    if !a.modulus().is_odd() {
        return Err(Error::Unsupported("tonelli_shanks_fp needs odd p"));
    }
    if a.is_zero() {
        return Ok(a.clone());
    }
    let half = (&p - 1u32) >> 1;
    if !a.pow(&half).is_one() {
        return Err(Error::NotASquare);
    }
    if (&p % 4u32) == nat(3) {
        let e = (&p + 1u32) >> 2;
        return Ok(a.pow(&e));
    }
    // p = 1 mod 4: full discrete-log descent in the 2-Sylow subgroup.
    let p_m1 = &p - 1u32;
    let r = p_m1.trailing_zeros().expect("p odd -> p-1 even");
    let ell = &p_m1 >> r;
    let z = find_nonresidue_fp(a.modulus(), &half, rng)?;
    let mut c = z.pow(&ell);
    let mut u = a.pow(&ell);
    let mut result = a.pow(&((&ell + 1u32) >> 1));
    let mut m = r;
    while !u.is_one() {
        let mut i = 0u64;
        let mut probe = u.clone();
        while !probe.is_one() {
            probe = probe.mul(&probe);
            i += 1;
            if i == m {
                return Err(Error::NotASquare); // unreachable after Euler test
            }
        }
        let mut b = c.clone();
        for _ in 0..(m - i - 1) {
            b = b.mul(&b);
        }
        result = result.mul(&b);
        c = b.mul(&b);
        u = u.mul(&c);
        m = i;
    }
    Ok(result)
}

fn find_nonresidue_fp(
    modulus: &Arc<PrimeModulus>,
    half: &Natural,
    rng: &mut dyn RngCore,
) -> Result<FpElement> {
    for _ in 0..128 {
        let z = random_fp(modulus, rng);
        if !z.is_zero() && !z.pow(half).is_one() {
            return Ok(z);
        }
    }
    // Deterministic sweep fallback; keeps adversarial seeds terminating.
    let mut v = nat(2);
    while &v < modulus.value() {
        let z = FpElement::new(v.clone(), modulus);
        if !z.pow(half).is_one() {
            return Ok(z);
        }
        v += 1u32;
    }
    Err(Error::RetryLimitExceeded)
}

/// t-th root in F_p for prime t | p-1 (Adleman-Manders-Miller).
///
/// Returns an arbitrary valid root, or `NotAPower` when a^{(p-1)/t} != 1.
pub fn amm_root_fp(a: &FpElement, t: u64, rng: &mut dyn RngCore) -> Result<FpElement> {
    let modulus = Arc::clone(a.modulus());
    let p = modulus.value().clone();
    if t < 2 {
        return Err(Error::InvalidInput(format!("t must be >= 2, got {t}")));
    }
    let p_m1 = &p - 1u32;
    if !(&p_m1 % nat(t)).is_zero() {
        return Err(Error::Unsupported("t must divide p-1"));
    }
    if a.is_zero() {
        return Ok(a.clone());
    }
    if !a.pow(&(&p_m1 / nat(t))).is_one() {
        return Err(Error::NotAPower);
    }
    // p-1 = t^e · m with t not dividing m.
    let mut e = 0u32;
    let mut m = p_m1.clone();
    let t_nat = nat(t);
    while (&m % &t_nat).is_zero() {
        m /= &t_nat;
        e += 1;
    }
    // r0 = a^{t^{-1} mod m}; then r0^t = a·s0 with s0 in the t-Sylow part.
    // m = 1 (p-1 a power of t) degenerates to u = 0, s0 = a^{-1}.
    let u = if m.is_one() {
        Natural::zero()
    } else {
        crate::natural::invmod(&t_nat, &m).expect("gcd(t, m) = 1")
    };
    let r0 = a.pow(&u);
    if e == 1 {
        // s0 is a t-th power in a group of order t, hence trivial.
        debug_assert!(r0.pow(&t_nat) == *a);
        return Ok(r0);
    }
    let s0 = {
        // (u·t - 1) mod (p-1); negative only when u = 0.
        let exp = if u.is_zero() { &p - 2u32 } else { &u * &t_nat - 1u32 };
        a.pow(&exp)
    };
    if s0.is_one() {
        return Ok(r0);
    }
    // Generator of the t-Sylow subgroup from a t-th nonresidue.
    let nonres_exp = &p_m1 / &t_nat;
    let d = {
        let mut found = None;
        for _ in 0..128 {
            let z = random_fp(&modulus, rng);
            if !z.is_zero() && !z.pow(&nonres_exp).is_one() {
                found = Some(z);
                break;
            }
        }
        match found {
            Some(z) => z,
            None => {
                let mut v = nat(2);
                loop {
                    if &v >= &p {
                        return Err(Error::RetryLimitExceeded);
                    }
                    let z = FpElement::new(v.clone(), &modulus);
                    if !z.pow(&nonres_exp).is_one() {
                        break z;
                    }
                    v += 1u32;
                }
            }
        }
    };
    let xi = d.pow(&m); // order exactly t^e
    // Pohlig-Hellman digits of log_xi(s0), base t; the low digit is 0
    // because s0 is a t-th power inside the Sylow subgroup.
    let omega = xi.pow(&t_nat.pow(e - 1));
    let mut digit_table = std::collections::HashMap::new();
    let mut w = FpElement::one(&modulus);
    for i in 0..t {
        digit_table.insert(w.value().clone(), i);
        w = w.mul(&omega);
    }
    let mut k = Natural::zero();
    let mut xi_inv_k = FpElement::one(&modulus); // xi^{-k} built incrementally
    let xi_inv = xi.inv().expect("nonzero");
    for i in 0..e {
        let probe = s0.mul(&xi_inv_k).pow(&t_nat.pow(e - 1 - i));
        let digit = *digit_table
            .get(probe.value())
            .expect("probe lies in the order-t subgroup");
        if digit != 0 {
            let step = nat(digit) * t_nat.pow(i);
            k += &step;
            xi_inv_k = xi_inv_k.mul(&xi_inv.pow(&step));
        }
    }
    debug_assert!((&k % &t_nat).is_zero(), "s0 must be a t-th power in the Sylow subgroup");
    let tau = xi.pow(&(&k / &t_nat));
    let root = r0.mul(&tau.inv().expect("nonzero"));
    debug_assert!(root.pow(&t_nat) == *a);
    Ok(root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp(v: u64, m: &Arc<PrimeModulus>) -> FpElement {
        FpElement::from_u64(v, m)
    }

    #[test]
    fn fp_pow_examples() {
        let p7 = PrimeModulus::from_u64(7).unwrap();
        let p19 = PrimeModulus::from_u64(19).unwrap();
        assert_eq!(fp_pow(&fp(5, &p7), &nat(0)), fp(1, &p7));
        assert_eq!(fp_pow(&fp(4, &p19), &nat(5)), fp(17, &p19));
        assert_eq!(fp_pow(&fp(3, &p7), &nat(6)), fp(1, &p7));
    }

    #[test]
    fn composite_modulus_rejected() {
        assert_eq!(PrimeModulus::from_u64(1).unwrap_err(), Error::NotPrime);
        assert_eq!(PrimeModulus::from_u64(4).unwrap_err(), Error::NotPrime);
        assert_eq!(PrimeModulus::from_u64(1_000_001).unwrap_err(), Error::NotPrime);
    }

    #[test]
    fn field_axioms_spot_checks() {
        let p = PrimeModulus::from_u64(13).unwrap();
        for v in 1..13u64 {
            let a = fp(v, &p);
            assert_eq!(a.mul(&a.inv().unwrap()), fp(1, &p));
            assert_eq!(a.add(&a.neg()), fp(0, &p));
        }
        assert_eq!(fp(0, &p).inv().unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn tonelli_shanks_examples() {
        let p13 = PrimeModulus::from_u64(13).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = tonelli_shanks_fp(&fp(10, &p13), &mut rng).unwrap();
        assert!(r == fp(6, &p13) || r == fp(7, &p13));
        let r = tonelli_shanks_fp(&fp(1, &p13), &mut rng).unwrap();
        assert!(r == fp(1, &p13) || r == fp(12, &p13));
        assert_eq!(tonelli_shanks_fp(&fp(5, &p13), &mut rng).unwrap_err(), Error::NotASquare);
    }

    #[test]
    fn tonelli_shanks_exhaustive_small_primes() {
        // Every quadratic residue for every odd p <= 1000.
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for p in (3u64..=1000).filter(|&p| crate::natural::is_prime_u64(p)) {
            let m = PrimeModulus::from_u64(p).unwrap();
            for a in 1..p {
                let sq = fp(a, &m).mul(&fp(a, &m));
                let r = tonelli_shanks_fp(&sq, &mut rng).unwrap();
                assert_eq!(r.mul(&r), sq, "sqrt failed for {a}^2 mod {p}");
            }
        }
    }

    #[test]
    fn amm_examples() {
        let p7 = PrimeModulus::from_u64(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = amm_root_fp(&fp(6, &p7), 3, &mut rng).unwrap();
        assert!([fp(3, &p7), fp(5, &p7), fp(6, &p7)].contains(&r));
        let r = amm_root_fp(&fp(1, &p7), 3, &mut rng).unwrap();
        assert!([fp(1, &p7), fp(2, &p7), fp(4, &p7)].contains(&r));
        assert_eq!(amm_root_fp(&fp(2, &p7), 3, &mut rng).unwrap_err(), Error::NotAPower);
    }

    #[test]
    fn amm_succeeds_iff_residue_test_passes() {
        // Exhaustive over p <= 50, every prime t | p-1, every a != 0.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in (3u64..=50).filter(|&p| crate::natural::is_prime_u64(p)) {
            let m = PrimeModulus::from_u64(p).unwrap();
            for (t, _) in crate::natural::factor_u64(p - 1) {
                let cofactor = nat((p - 1) / t);
                for a in 1..p {
                    let a = fp(a, &m);
                    let is_power = a.pow(&cofactor).is_one();
                    match amm_root_fp(&a, t, &mut rng) {
                        Ok(r) => {
                            assert!(is_power);
                            assert_eq!(r.pow(&nat(t)), a);
                        }
                        Err(Error::NotAPower) => assert!(!is_power),
                        Err(e) => panic!("unexpected error {e:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn fp_pow_fermat_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in [13u64, 61, 1_000_003] {
            let m = PrimeModulus::from_u64(p).unwrap();
            let e = nat(p - 1);
            for _ in 0..1000 {
                let a = random_fp(&m, &mut rng);
                if a.is_zero() {
                    continue;
                }
                assert!(a.pow(&e).is_one());
            }
        }
    }
}
