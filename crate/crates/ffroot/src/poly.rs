//! Dense univariate polynomials over F_p: the M(n) layer.
//!
//! Coefficients are stored low-to-high with no trailing zeros; the zero
//! polynomial is the empty sequence and its degree is `None` (read: -inf).

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::RngCore;

use crate::error::{Error, Result};
use crate::fp::{same_modulus, FpElement, PrimeModulus};
use crate::kernel::{ops, Lane, LaneKind};
use crate::natural::{factor_u64, Natural};

pub use crate::kernel::ops::KARATSUBA_THRESHOLD;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum PolyData {
    Word(Vec<u64>),
    Big(Vec<BigUint>),
}

impl PolyData {
    pub(crate) fn len(&self) -> usize {
        match self {
            PolyData::Word(v) => v.len(),
            PolyData::Big(v) => v.len(),
        }
    }
}

/// Lane dispatch: expands the same generic body for each coefficient lane.
macro_rules! on1 {
    ($a:expr, |$l:ident, $x:ident| $body:expr) => {
        match (&$a.modulus.lane, &$a.data) {
            (LaneKind::Word($l), PolyData::Word($x)) => PolyData::Word($body),
            (LaneKind::Big($l), PolyData::Big($x)) => PolyData::Big($body),
            _ => unreachable!("lane and data always agree"),
        }
    };
}

macro_rules! on2 {
    ($a:expr, $b:expr, |$l:ident, $x:ident, $y:ident| $body:expr) => {
        match (&$a.modulus.lane, &$a.data, &$b.data) {
            (LaneKind::Word($l), PolyData::Word($x), PolyData::Word($y)) => {
                PolyData::Word($body)
            }
            (LaneKind::Big($l), PolyData::Big($x), PolyData::Big($y)) => PolyData::Big($body),
            _ => unreachable!("lane and data always agree"),
        }
    };
}

/// Dense polynomial over F_p, low-to-high coefficients, canonical form.
#[derive(Clone)]
pub struct Poly {
    pub(crate) modulus: Arc<PrimeModulus>,
    pub(crate) data: PolyData,
}

impl Poly {
    pub(crate) fn from_data(modulus: &Arc<PrimeModulus>, data: PolyData) -> Poly {
        Poly { modulus: Arc::clone(modulus), data }
    }

    pub fn zero(modulus: &Arc<PrimeModulus>) -> Poly {
        let data = match &modulus.lane {
            LaneKind::Word(_) => PolyData::Word(Vec::new()),
            LaneKind::Big(_) => PolyData::Big(Vec::new()),
        };
        Poly::from_data(modulus, data)
    }

    pub fn constant(c: &FpElement) -> Poly {
        Poly::from_naturals(c.modulus(), &[c.value().clone()])
    }

    pub fn one(modulus: &Arc<PrimeModulus>) -> Poly {
        Poly::from_u64s(modulus, &[1])
    }

    /// The monomial X.
    pub fn x(modulus: &Arc<PrimeModulus>) -> Poly {
        Poly::from_u64s(modulus, &[0, 1])
    }

    pub fn from_naturals(modulus: &Arc<PrimeModulus>, coeffs: &[Natural]) -> Poly {
        let data = match &modulus.lane {
            LaneKind::Word(l) => {
                let mut v: Vec<u64> = coeffs.iter().map(|c| l.from_natural(c)).collect();
                ops::normalize(l, &mut v);
                PolyData::Word(v)
            }
            LaneKind::Big(l) => {
                let mut v: Vec<BigUint> = coeffs.iter().map(|c| l.from_natural(c)).collect();
                ops::normalize(l, &mut v);
                PolyData::Big(v)
            }
        };
        Poly::from_data(modulus, data)
    }

    pub fn from_u64s(modulus: &Arc<PrimeModulus>, coeffs: &[u64]) -> Poly {
        let naturals: Vec<Natural> = coeffs.iter().map(|&c| Natural::from(c)).collect();
        Poly::from_naturals(modulus, &naturals)
    }

    pub fn modulus(&self) -> &Arc<PrimeModulus> {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.data.len() == 0
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        match self.data.len() {
            0 => None,
            n => Some(n - 1),
        }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.len() == 0
    }

    pub fn is_monic(&self) -> bool {
        match (&self.modulus.lane, &self.data) {
            (LaneKind::Word(l), PolyData::Word(v)) => ops::is_monic(l, v),
            (LaneKind::Big(l), PolyData::Big(v)) => ops::is_monic(l, v),
            _ => unreachable!(),
        }
    }

    pub fn is_x(&self) -> bool {
        *self == Poly::x(&self.modulus)
    }

    pub fn coeff(&self, i: usize) -> FpElement {
        let v = match &self.data {
            PolyData::Word(v) => v.get(i).map(|&c| Natural::from(c)),
            PolyData::Big(v) => v.get(i).cloned(),
        };
        FpElement::new(v.unwrap_or_default(), &self.modulus)
    }

    pub fn coeffs(&self) -> Vec<Natural> {
        match &self.data {
            PolyData::Word(v) => v.iter().map(|&c| Natural::from(c)).collect(),
            PolyData::Big(v) => v.clone(),
        }
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if same_modulus(&self.modulus, &other.modulus) {
            Ok(())
        } else {
            Err(Error::ModulusMismatch)
        }
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        Ok(Poly::from_data(&self.modulus, on2!(self, other, |l, a, b| ops::add(l, a, b))))
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        Ok(Poly::from_data(&self.modulus, on2!(self, other, |l, a, b| ops::sub(l, a, b))))
    }

    pub fn neg(&self) -> Poly {
        Poly::from_data(&self.modulus, on1!(self, |l, a| ops::neg(l, a)))
    }

    /// Product; Karatsuba above the threshold, schoolbook below.
    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        Ok(Poly::from_data(&self.modulus, on2!(self, other, |l, a, b| ops::mul(l, a, b))))
    }

    /// Product with an explicit Karatsuba crossover, for threshold tuning.
    pub fn mul_with_threshold(&self, other: &Poly, threshold: usize) -> Result<Poly> {
        self.check(other)?;
        Ok(Poly::from_data(
            &self.modulus,
            on2!(self, other, |l, a, b| ops::mul_with_threshold(l, a, b, threshold)),
        ))
    }

    /// Plain quadratic product; the oracle for the Karatsuba path.
    pub fn mul_schoolbook(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        Ok(Poly::from_data(&self.modulus, on2!(self, other, |l, a, b| ops::mul_schoolbook(l, a, b))))
    }

    /// Squaring; about half the coefficient products of a general multiply.
    pub fn sqr(&self) -> Poly {
        Poly::from_data(&self.modulus, on1!(self, |l, a| ops::sqr(l, a)))
    }

    pub fn mul_scalar(&self, s: &FpElement) -> Poly {
        let data = match (&self.modulus.lane, &self.data) {
            (LaneKind::Word(l), PolyData::Word(v)) => {
                PolyData::Word(ops::scale(l, v, &l.from_natural(s.value())))
            }
            (LaneKind::Big(l), PolyData::Big(v)) => {
                PolyData::Big(ops::scale(l, v, &l.from_natural(s.value())))
            }
            _ => unreachable!(),
        };
        Poly::from_data(&self.modulus, data)
    }

    /// Remainder modulo a monic divisor of degree >= 1.
    pub fn rem(&self, f: &Poly) -> Result<Poly> {
        self.check(f)?;
        if f.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !f.is_monic() || f.len() < 2 {
            return Err(Error::NonMonic);
        }
        Ok(Poly::from_data(&self.modulus, on2!(self, f, |l, a, d| ops::rem_schoolbook(l, a, d))))
    }

    /// Quotient and remainder by an arbitrary nonzero divisor.
    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        self.check(d)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (q, r) = match (&self.modulus.lane, &self.data, &d.data) {
            (LaneKind::Word(l), PolyData::Word(a), PolyData::Word(b)) => {
                let (q, r) = ops::divrem(l, a, b);
                (PolyData::Word(q), PolyData::Word(r))
            }
            (LaneKind::Big(l), PolyData::Big(a), PolyData::Big(b)) => {
                let (q, r) = ops::divrem(l, a, b);
                (PolyData::Big(q), PolyData::Big(r))
            }
            _ => unreachable!(),
        };
        Ok((Poly::from_data(&self.modulus, q), Poly::from_data(&self.modulus, r)))
    }

    /// a^e mod f by binary powering; f monic, deg a < deg f expected.
    pub fn powmod(&self, e: &Natural, f: &Poly) -> Result<Poly> {
        self.check(f)?;
        if f.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !f.is_monic() || f.len() < 2 {
            return Err(Error::NonMonic);
        }
        Ok(Poly::from_data(
            &self.modulus,
            on2!(self, f, |l, a, d| {
                let red = ops::reducer_new(l, d);
                ops::powmod(l, a, e, &red)
            }),
        ))
    }

    /// Extended gcd: (g monic, u, v) with u·a + v·b = g. Panics on (0, 0).
    pub fn xgcd(&self, other: &Poly) -> Result<(Poly, Poly, Poly)> {
        self.check(other)?;
        assert!(!(self.is_zero() && other.is_zero()), "xgcd(0, 0) is undefined");
        let (g, u, v) = match (&self.modulus.lane, &self.data, &other.data) {
            (LaneKind::Word(l), PolyData::Word(a), PolyData::Word(b)) => {
                let (g, u, v) = ops::xgcd(l, a, b);
                (PolyData::Word(g), PolyData::Word(u), PolyData::Word(v))
            }
            (LaneKind::Big(l), PolyData::Big(a), PolyData::Big(b)) => {
                let (g, u, v) = ops::xgcd(l, a, b);
                (PolyData::Big(g), PolyData::Big(u), PolyData::Big(v))
            }
            _ => unreachable!(),
        };
        Ok((
            Poly::from_data(&self.modulus, g),
            Poly::from_data(&self.modulus, u),
            Poly::from_data(&self.modulus, v),
        ))
    }

    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        Ok(Poly::from_data(&self.modulus, on2!(self, other, |l, a, b| ops::gcd(l, a, b))))
    }

    pub fn eval(&self, x: &FpElement) -> FpElement {
        let v = match (&self.modulus.lane, &self.data) {
            (LaneKind::Word(l), PolyData::Word(a)) => {
                Natural::from(ops::eval(l, a, &l.from_natural(x.value())))
            }
            (LaneKind::Big(l), PolyData::Big(a)) => ops::eval(l, a, &l.from_natural(x.value())),
            _ => unreachable!(),
        };
        FpElement::new(v, &self.modulus)
    }

    /// Parse space-separated decimal coefficients, low-to-high.
    pub fn parse(modulus: &Arc<PrimeModulus>, s: &str) -> Result<Poly> {
        let mut coeffs = Vec::new();
        for tok in s.split_whitespace() {
            let c: Natural = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {tok:?}")))?;
            coeffs.push(c);
        }
        Ok(Poly::from_naturals(modulus, &coeffs))
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.modulus.value() == other.modulus.value() && self.data == other.data
    }
}
impl Eq for Poly {}

impl fmt::Display for Poly {
    /// Space-separated decimal coefficients, low-to-high; "0" for zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let coeffs = self.coeffs();
        let mut first = true;
        for c in coeffs {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}] (mod {})", self, self.modulus.value())
    }
}

/// Per-modulus cached reducer (Newton inverse of the reversed modulus),
/// used wherever many reductions by one fixed monic f are needed.
pub(crate) enum ReducerKind {
    Word(ops::Reducer<u64>),
    Big(ops::Reducer<BigUint>),
}

impl ReducerKind {
    pub(crate) fn new(f: &Poly) -> ReducerKind {
        match (&f.modulus.lane, &f.data) {
            (LaneKind::Word(l), PolyData::Word(v)) => ReducerKind::Word(ops::reducer_new(l, v)),
            (LaneKind::Big(l), PolyData::Big(v)) => ReducerKind::Big(ops::reducer_new(l, v)),
            _ => unreachable!(),
        }
    }
}

/// Dispatch over a (lane, reducer, polys...) tuple from one field context.
macro_rules! with_red {
    ($m:expr, $red:expr, $a:expr, |$l:ident, $r:ident, $x:ident| $body:expr) => {
        match (&$m.lane, $red, &$a.data) {
            (LaneKind::Word($l), ReducerKind::Word($r), PolyData::Word($x)) => {
                PolyData::Word($body)
            }
            (LaneKind::Big($l), ReducerKind::Big($r), PolyData::Big($x)) => PolyData::Big($body),
            _ => unreachable!("lane and data always agree"),
        }
    };
    ($m:expr, $red:expr, $a:expr, $b:expr, |$l:ident, $r:ident, $x:ident, $y:ident| $body:expr) => {
        match (&$m.lane, $red, &$a.data, &$b.data) {
            (
                LaneKind::Word($l),
                ReducerKind::Word($r),
                PolyData::Word($x),
                PolyData::Word($y),
            ) => PolyData::Word($body),
            (LaneKind::Big($l), ReducerKind::Big($r), PolyData::Big($x), PolyData::Big($y)) => {
                PolyData::Big($body)
            }
            _ => unreachable!("lane and data always agree"),
        }
    };
}

pub(crate) use with_red;

/// res(f, a): the product of a over the roots of monic f; equals the norm
/// of (a mod f) when deg a < deg f.
pub fn resultant(f: &Poly, a: &Poly) -> Result<FpElement> {
    if !f.is_monic() || f.len() < 2 {
        return Err(Error::NonMonic);
    }
    f.check(a)?;
    let v = match (&f.modulus.lane, &f.data, &a.data) {
        (LaneKind::Word(l), PolyData::Word(x), PolyData::Word(y)) => {
            Natural::from(ops::resultant(l, x, y))
        }
        (LaneKind::Big(l), PolyData::Big(x), PolyData::Big(y)) => ops::resultant(l, x, y),
        _ => unreachable!(),
    };
    Ok(FpElement::new(v, &f.modulus))
}

/// Rabin irreducibility test: x^{p^n} = x mod f and, for each prime l | n,
/// gcd(x^{p^{n/l}} - x, f) = 1. The p^j-th powers of x are built with the
/// composition-doubling chain.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    if !f.is_monic() || f.len() < 2 {
        return Err(Error::NonMonic);
    }
    let n = f.len() - 1;
    if n == 1 {
        return Ok(true);
    }
    let chain = crate::modcomp::FrobTable::new(f)?;
    let x = Poly::x(&f.modulus);
    if chain.xi(n as u64) != x {
        return Ok(false);
    }
    for (ell, _) in factor_u64(n as u64) {
        let m = n as u64 / ell;
        let probe = chain.xi(m).sub(&x)?;
        let g = probe.gcd(f)?;
        if g.len() > 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Monic irreducible of degree exactly n by rejection sampling
/// (expected O(n) trials).
pub fn random_irreducible(
    modulus: &Arc<PrimeModulus>,
    n: usize,
    rng: &mut dyn RngCore,
) -> Poly {
    assert!(n >= 1, "degree must be at least 1");
    loop {
        let data = match &modulus.lane {
            LaneKind::Word(l) => {
                let mut v: Vec<u64> = (0..n).map(|_| l.random(rng)).collect();
                v.push(1 % l.p);
                PolyData::Word(v)
            }
            LaneKind::Big(l) => {
                let mut v: Vec<BigUint> = (0..n).map(|_| l.random(rng)).collect();
                v.push(BigUint::from(1u32));
                PolyData::Big(v)
            }
        };
        let f = Poly::from_data(modulus, data);
        if is_irreducible(&f).expect("candidate is monic of degree n") {
            return f;
        }
    }
}
