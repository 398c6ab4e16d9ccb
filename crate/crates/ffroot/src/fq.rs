//! Extension fields F_q = F_p[X]/(f): contexts, element arithmetic, trace,
//! norm and subfield embedding.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::Zero;
use rand::RngCore;

use crate::error::{Error, Result};
use crate::fp::{FpElement, PrimeModulus};
use crate::kernel::{ops, Lane, LaneKind};
use crate::modcomp::{compose_with, minimal_polynomial, FrobTable};
use crate::natural::{nat, Natural};
use crate::poly::{is_irreducible, random_irreducible, resultant, with_red, Poly, PolyData, ReducerKind};

/// Immutable descriptor of F_q = F_p[X]/(f): the prime, the degree, the
/// monic irreducible modulus, and the lazily-populated Frobenius table.
pub struct FieldCtx {
    modulus: Arc<PrimeModulus>,
    f: Poly,
    n: usize,
    frob: FrobTable,
    q: Natural,
    q_minus_1: Natural,
}

impl FieldCtx {
    /// Wrap a user-supplied modulus polynomial; validates monicity,
    /// degree >= 1 and irreducibility.
    pub fn new(f: Poly) -> Result<Arc<FieldCtx>> {
        if !f.is_monic() || f.len() < 2 {
            return Err(Error::NonMonic);
        }
        if !is_irreducible(&f)? {
            return Err(Error::NotIrreducible);
        }
        let n = f.len() - 1;
        let q = f.modulus().value().pow(n as u32);
        let frob = FrobTable::new(&f)?;
        Ok(Arc::new(FieldCtx {
            modulus: Arc::clone(f.modulus()),
            q_minus_1: &q - 1u32,
            q,
            n,
            frob,
            f,
        }))
    }

    /// Fresh context of degree n over p with a random irreducible modulus.
    pub fn random(
        p: &Arc<PrimeModulus>,
        n: usize,
        rng: &mut dyn RngCore,
    ) -> Arc<FieldCtx> {
        let f = random_irreducible(p, n, rng);
        FieldCtx::new(f).expect("random_irreducible returns a valid modulus")
    }

    /// The prime field itself, presented as F_p[X]/(X).
    pub fn prime_field(p: &Arc<PrimeModulus>) -> Arc<FieldCtx> {
        FieldCtx::new(Poly::x(p)).expect("X is monic irreducible")
    }

    pub fn p(&self) -> &Arc<PrimeModulus> {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn modulus_poly(&self) -> &Poly {
        &self.f
    }

    pub fn frobenius(&self) -> &FrobTable {
        &self.frob
    }

    /// q = p^n.
    pub fn order(&self) -> &Natural {
        &self.q
    }

    pub fn order_minus_1(&self) -> &Natural {
        &self.q_minus_1
    }

    pub(crate) fn reducer(&self) -> &ReducerKind {
        &self.frob.red
    }

    pub fn zero(self: &Arc<Self>) -> FqElement {
        FqElement { ctx: Arc::clone(self), rep: Poly::zero(&self.modulus) }
    }

    pub fn one(self: &Arc<Self>) -> FqElement {
        self.element(Poly::one(&self.modulus))
    }

    /// The residue class of X.
    pub fn gen_x(self: &Arc<Self>) -> FqElement {
        self.element(Poly::x(&self.modulus))
    }

    /// Wrap a polynomial, reducing mod f as needed.
    pub fn element(self: &Arc<Self>, rep: Poly) -> FqElement {
        assert!(
            crate::fp::same_modulus(rep.modulus(), &self.modulus),
            "element from a different prime field"
        );
        let rep = if rep.len() <= self.n {
            rep
        } else {
            let data = with_red!(self.modulus, self.reducer(), rep, |l, r, a| ops::rem_by(
                l,
                a.clone(),
                r
            ));
            Poly::from_data(&self.modulus, data)
        };
        FqElement { ctx: Arc::clone(self), rep }
    }

    pub fn element_from_u64s(self: &Arc<Self>, coeffs: &[u64]) -> FqElement {
        self.element(Poly::from_u64s(&self.modulus, coeffs))
    }

    /// Constant (prime-field) element of F_q.
    pub fn constant(self: &Arc<Self>, c: &FpElement) -> FqElement {
        self.element(Poly::constant(c))
    }

    /// The k-th element in the lexicographic enumeration of F_q
    /// (coefficients are the base-p digits of k). Used by sweeps and by the
    /// deterministic fallback of the nonresidue searches.
    pub fn element_by_index(self: &Arc<Self>, k: &Natural) -> FqElement {
        let p = self.modulus.value();
        let mut coeffs = Vec::with_capacity(self.n);
        let mut k = k.clone();
        while !k.is_zero() && coeffs.len() < self.n {
            coeffs.push(&k % p);
            k /= p;
        }
        self.element(Poly::from_naturals(&self.modulus, &coeffs))
    }

    /// Uniform element of F_q.
    pub fn random_element(self: &Arc<Self>, rng: &mut dyn RngCore) -> FqElement {
        let data = match &self.modulus.lane {
            LaneKind::Word(l) => {
                let mut v: Vec<u64> = (0..self.n).map(|_| l.random(rng)).collect();
                ops::normalize(l, &mut v);
                PolyData::Word(v)
            }
            LaneKind::Big(l) => {
                let mut v: Vec<_> = (0..self.n).map(|_| l.random(rng)).collect();
                ops::normalize(l, &mut v);
                PolyData::Big(v)
            }
        };
        FqElement { ctx: Arc::clone(self), rep: Poly::from_data(&self.modulus, data) }
    }

    /// Uniform element of F_q^*.
    pub fn random_nonzero(self: &Arc<Self>, rng: &mut dyn RngCore) -> FqElement {
        loop {
            let a = self.random_element(rng);
            if !a.is_zero() {
                return a;
            }
        }
    }

    /// Text form, three lines: p, n, then the n+1 coefficients of f.
    pub fn to_file_string(&self) -> String {
        format!("{}\n{}\n{}\n", self.modulus.value(), self.n, self.f)
    }

    /// Parse the three-line field file format.
    pub fn from_file_str(s: &str) -> Result<Arc<FieldCtx>> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let p_line = lines.next().ok_or_else(|| Error::Parse("missing p line".into()))?;
        let n_line = lines.next().ok_or_else(|| Error::Parse("missing n line".into()))?;
        let f_line = lines.next().ok_or_else(|| Error::Parse("missing f line".into()))?;
        let p: Natural = p_line
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad prime {p_line:?}")))?;
        let n: usize = n_line
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad degree {n_line:?}")))?;
        let modulus = PrimeModulus::new(p)?;
        let f = Poly::parse(&modulus, f_line)?;
        if f.len() != n + 1 {
            return Err(Error::Parse(format!(
                "modulus polynomial must have {} coefficients, found {}",
                n + 1,
                f.len()
            )));
        }
        FieldCtx::new(f)
    }
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{{{}^{}}} mod [{}]", self.modulus.value(), self.n, self.f)
    }
}

pub(crate) fn same_ctx(a: &Arc<FieldCtx>, b: &Arc<FieldCtx>) -> bool {
    Arc::ptr_eq(a, b) || (a.modulus.value() == b.modulus.value() && a.f == b.f)
}

/// Element of F_q, always stored reduced (deg < n).
#[derive(Clone)]
pub struct FqElement {
    ctx: Arc<FieldCtx>,
    rep: Poly,
}

impl FqElement {
    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn rep(&self) -> &Poly {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rep == Poly::one(&self.ctx.modulus)
    }

    fn check(&self, other: &FqElement) {
        assert!(same_ctx(&self.ctx, &other.ctx), "elements from different field contexts");
    }

    pub fn add(&self, other: &FqElement) -> FqElement {
        self.check(other);
        FqElement {
            ctx: Arc::clone(&self.ctx),
            rep: self.rep.add(&other.rep).expect("same modulus"),
        }
    }

    pub fn sub(&self, other: &FqElement) -> FqElement {
        self.check(other);
        FqElement {
            ctx: Arc::clone(&self.ctx),
            rep: self.rep.sub(&other.rep).expect("same modulus"),
        }
    }

    pub fn neg(&self) -> FqElement {
        FqElement { ctx: Arc::clone(&self.ctx), rep: self.rep.neg() }
    }

    pub fn mul(&self, other: &FqElement) -> FqElement {
        self.check(other);
        let data = with_red!(
            self.ctx.modulus,
            self.ctx.reducer(),
            self.rep,
            other.rep,
            |l, r, a, b| ops::mulmod(l, a, b, r)
        );
        FqElement { ctx: Arc::clone(&self.ctx), rep: Poly::from_data(&self.ctx.modulus, data) }
    }

    pub fn square(&self) -> FqElement {
        let data = with_red!(self.ctx.modulus, self.ctx.reducer(), self.rep, |l, r, a| {
            ops::sqrmod(l, a, r)
        });
        FqElement { ctx: Arc::clone(&self.ctx), rep: Poly::from_data(&self.ctx.modulus, data) }
    }

    /// Inverse by extended Euclid; errors on zero.
    pub fn inv(&self) -> Result<FqElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, u, _) = self.rep.xgcd(&self.ctx.f)?;
        debug_assert_eq!(g, Poly::one(&self.ctx.modulus));
        Ok(self.ctx.element(u))
    }

    /// a^e with a Natural exponent; 0^0 = 1.
    pub fn pow(&self, e: &Natural) -> FqElement {
        let data = with_red!(self.ctx.modulus, self.ctx.reducer(), self.rep, |l, r, a| {
            ops::powmod(l, a, e, r)
        });
        FqElement { ctx: Arc::clone(&self.ctx), rep: Poly::from_data(&self.ctx.modulus, data) }
    }

    pub fn pow_u64(&self, e: u64) -> FqElement {
        self.pow(&nat(e))
    }

    /// a^{p^j}: one modular composition against the Frobenius table.
    pub fn frobenius(&self, j: u64) -> FqElement {
        FqElement { ctx: Arc::clone(&self.ctx), rep: self.ctx.frob.apply(&self.rep, j) }
    }

    /// Scale by a prime-field element.
    pub fn scale(&self, c: &FpElement) -> FqElement {
        FqElement { ctx: Arc::clone(&self.ctx), rep: self.rep.mul_scalar(c) }
    }

    /// The constant value, when the element lies in the prime field.
    pub fn as_constant(&self) -> Option<FpElement> {
        match self.rep.len() {
            0 => Some(FpElement::zero(&self.ctx.modulus)),
            1 => Some(self.rep.coeff(0)),
            _ => None,
        }
    }
}

impl PartialEq for FqElement {
    fn eq(&self, other: &Self) -> bool {
        same_ctx(&self.ctx, &other.ctx) && self.rep == other.rep
    }
}
impl Eq for FqElement {}

impl fmt::Debug for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] in {:?}", self.rep, self.ctx)
    }
}

impl fmt::Display for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.rep.fmt(f)
    }
}

impl Add for &FqElement {
    type Output = FqElement;
    fn add(self, rhs: &FqElement) -> FqElement {
        FqElement::add(self, rhs)
    }
}
impl Sub for &FqElement {
    type Output = FqElement;
    fn sub(self, rhs: &FqElement) -> FqElement {
        FqElement::sub(self, rhs)
    }
}
impl Mul for &FqElement {
    type Output = FqElement;
    fn mul(self, rhs: &FqElement) -> FqElement {
        FqElement::mul(self, rhs)
    }
}
impl Neg for &FqElement {
    type Output = FqElement;
    fn neg(self) -> FqElement {
        FqElement::neg(self)
    }
}

/// Trace to the subfield F_{p^s} (s | n): sum of a^{p^{is}} for
/// i = 0 .. n/s - 1, computed by direct Frobenius applications. This is the
/// oracle form; the root-extraction path avoids it.
pub fn trace_to_subfield(a: &FqElement, s: usize) -> Result<FqElement> {
    let n = a.ctx.degree();
    if s == 0 || n % s != 0 {
        return Err(Error::InvalidInput(format!("s = {s} must divide n = {n}")));
    }
    let mut acc = a.clone();
    let mut term = a.clone();
    for _ in 1..(n / s) {
        term = term.frobenius(s as u64);
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Norm to F_p, computed as res(f, a).
pub fn norm(a: &FqElement) -> FpElement {
    resultant(&a.ctx.f, &a.rep).expect("field modulus is monic")
}

/// A subfield presentation F_p[Z]/(g) together with the root w of g inside
/// F_q; produced by minimal-polynomial computations.
#[derive(Clone, Debug)]
pub struct SubfieldImage {
    g: Poly,
    w: FqElement,
}

impl SubfieldImage {
    /// Pair a minimal polynomial with its root. Validated in debug builds.
    pub fn new(g: Poly, w: FqElement) -> SubfieldImage {
        debug_assert_eq!(
            minimal_polynomial(w.rep(), &w.ctx.f).expect("valid context"),
            g,
            "w must be a root of g"
        );
        SubfieldImage { g, w }
    }

    /// Minimal polynomial of w, and the element w itself.
    pub fn from_element(w: &FqElement) -> SubfieldImage {
        let g = minimal_polynomial(w.rep(), &w.ctx.f).expect("valid context");
        SubfieldImage { g: g.clone(), w: w.clone() }
    }

    pub fn g(&self) -> &Poly {
        &self.g
    }

    pub fn w(&self) -> &FqElement {
        &self.w
    }
}

/// Embed r (a polynomial in Z, deg r < deg g) into F_q along Z -> w: one
/// modular composition r(w) mod f.
pub fn embed(r: &Poly, img: &SubfieldImage) -> FqElement {
    assert!(r.len() < img.g.len(), "embed needs deg r < deg g");
    let ctx = &img.w.ctx;
    let rep = compose_with(r, img.w.rep(), ctx.reducer());
    FqElement { ctx: Arc::clone(ctx), rep }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f9() -> Arc<FieldCtx> {
        let p = PrimeModulus::from_u64(3).unwrap();
        FieldCtx::new(Poly::from_u64s(&p, &[1, 0, 1])).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let f9 = f9();
        let x = f9.gen_x();
        assert_eq!(x.mul(&x), f9.element_from_u64s(&[2]));
        let a = f9.element_from_u64s(&[1, 1]);
        assert_eq!(a.inv().unwrap(), f9.element_from_u64s(&[2, 1]));
        assert_eq!(a.pow(&nat(1)), a);
        assert_eq!(f9.zero().inv().unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn pow_lagrange_exhaustive_f9() {
        let f9 = f9();
        let q1 = f9.order_minus_1().clone();
        for k in 1..9u64 {
            let a = f9.element_by_index(&nat(k));
            assert!(a.pow(&q1).is_one());
        }
    }

    #[test]
    fn trace_examples() {
        let f9 = f9();
        let x = f9.gen_x();
        assert!(trace_to_subfield(&x, 1).unwrap().is_zero());
        let one = f9.one();
        assert_eq!(trace_to_subfield(&one, 1).unwrap(), f9.element_from_u64s(&[2]));
        let a = f9.element_from_u64s(&[1, 2]);
        assert_eq!(trace_to_subfield(&a, 2).unwrap(), a);
        assert!(trace_to_subfield(&a, 3).is_err());
    }

    #[test]
    fn trace_is_linear_and_subfield_fixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (p_val, n) in [(3u64, 4usize), (5, 4), (7, 2)] {
            let p = PrimeModulus::from_u64(p_val).unwrap();
            let ctx = FieldCtx::random(&p, n, &mut rng);
            for s in (1..=n).filter(|s| n % s == 0) {
                for _ in 0..25 {
                    let a = ctx.random_element(&mut rng);
                    let b = ctx.random_element(&mut rng);
                    let t_sum = trace_to_subfield(&a.add(&b), s).unwrap();
                    let sum_t =
                        trace_to_subfield(&a, s).unwrap().add(&trace_to_subfield(&b, s).unwrap());
                    assert_eq!(t_sum, sum_t);
                    let t = trace_to_subfield(&a, s).unwrap();
                    assert_eq!(t.frobenius(s as u64), t, "trace lands in F_{{p^s}}");
                }
            }
        }
    }

    #[test]
    fn norm_examples() {
        let f9 = f9();
        let x = f9.gen_x();
        let p = f9.p();
        assert_eq!(norm(&x), FpElement::from_u64(1, p));
        assert_eq!(norm(&f9.element_from_u64s(&[1, 1])), FpElement::from_u64(2, p));
        // norm of a constant is c^n
        assert_eq!(norm(&f9.element_from_u64s(&[2])), FpElement::from_u64(1, p));
        assert_eq!(norm(&f9.zero()), FpElement::zero(p));
    }

    #[test]
    fn norm_is_multiplicative_and_matches_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for (p_val, n) in [(3u64, 2usize), (5, 3), (7, 3)] {
            let p = PrimeModulus::from_u64(p_val).unwrap();
            let ctx = FieldCtx::random(&p, n, &mut rng);
            for _ in 0..30 {
                let a = ctx.random_element(&mut rng);
                let b = ctx.random_element(&mut rng);
                assert_eq!(norm(&a.mul(&b)), norm(&a).mul(&norm(&b)));
            }
            // norm(a)^{(p-1)/t} = a^{(q-1)/t} for t | p-1, exhaustive small t.
            use num_traits::ToPrimitive;
            for (t, _) in crate::natural::factor_u64(p_val - 1) {
                let fp_exp = nat((p_val - 1) / t);
                let fq_exp = ctx.order_minus_1() / nat(t);
                let q = ctx.order().to_u64().unwrap();
                for k in 1..q {
                    let a = ctx.element_by_index(&nat(k));
                    let lhs = ctx.constant(&norm(&a).pow(&fp_exp));
                    assert_eq!(lhs, a.pow(&fq_exp));
                }
            }
        }
    }

    #[test]
    fn embed_examples() {
        let f9 = f9();
        // w = 1 + x with minimal polynomial Z^2 + Z + 2.
        let w = f9.element_from_u64s(&[1, 1]);
        let img = SubfieldImage::from_element(&w);
        assert_eq!(img.g(), &Poly::from_u64s(f9.p(), &[2, 1, 1]));
        assert_eq!(embed(&Poly::x(f9.p()), &img), w);
        let c = Poly::from_u64s(f9.p(), &[2]);
        assert_eq!(embed(&c, &img), f9.element_from_u64s(&[2]));
        let z_plus_1 = Poly::from_u64s(f9.p(), &[1, 1]);
        assert_eq!(embed(&z_plus_1, &img), f9.element_from_u64s(&[2, 1]));
    }

    #[test]
    fn embed_is_field_hom() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let p = PrimeModulus::from_u64(5).unwrap();
        let ctx = FieldCtx::random(&p, 4, &mut rng);
        // Element of the degree-2 subfield: search by minimal polynomial.
        let w = loop {
            let cand = ctx.random_element(&mut rng);
            let g = minimal_polynomial(cand.rep(), ctx.modulus_poly()).unwrap();
            if g.len() == 3 {
                break cand;
            }
        };
        let img = SubfieldImage::from_element(&w);
        let g = img.g().clone();
        for _ in 0..40 {
            let a = Poly::from_u64s(&p, &[rng.gen_range(0..5), rng.gen_range(0..5)]);
            let b = Poly::from_u64s(&p, &[rng.gen_range(0..5), rng.gen_range(0..5)]);
            let sum = a.add(&b).unwrap().rem(&g).unwrap();
            assert_eq!(embed(&sum, &img), embed(&a, &img).add(&embed(&b, &img)));
            let prod = a.mul(&b).unwrap().rem(&g).unwrap();
            assert_eq!(embed(&prod, &img), embed(&a, &img).mul(&embed(&b, &img)));
        }
        assert_eq!(embed(&Poly::one(&p), &img), ctx.one());
    }

    #[test]
    fn random_element_uniformity_chi_squared() {
        // 10^4 draws over the 9 cells of F_9; chi^2 with 8 dof, alpha=0.001.
        use num_traits::ToPrimitive;
        let f9 = f9();
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let mut counts = [0u32; 9];
        let draws = 10_000;
        for _ in 0..draws {
            let a = f9.random_element(&mut rng);
            let idx = a.rep().coeff(0).value().to_u64().unwrap()
                + 3 * a.rep().coeff(1).value().to_u64().unwrap();
            counts[idx as usize] += 1;
        }
        let expected = draws as f64 / 9.0;
        let chi2: f64 =
            counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        assert!(chi2 < 26.12, "chi^2 = {chi2} exceeds the 0.001 critical value");
        // random_nonzero never returns zero.
        for _ in 0..100 {
            assert!(!f9.random_nonzero(&mut rng).is_zero());
        }
    }

    #[test]
    fn field_file_roundtrip() {
        let f9 = f9();
        let s = f9.to_file_string();
        assert_eq!(s, "3\n2\n1 0 1\n");
        let back = FieldCtx::from_file_str(&s).unwrap();
        assert_eq!(back.modulus_poly(), f9.modulus_poly());
        assert!(FieldCtx::from_file_str("4\n2\n1 0 1\n").is_err());
        assert!(FieldCtx::from_file_str("3\n2\n1 1\n").is_err());
        assert!(FieldCtx::from_file_str("3\n2\n2 0 1\n").is_err(), "X^2+2 is reducible over F_3");
    }

    #[test]
    fn cross_field_operations_panic() {
        let f9 = f9();
        let p5 = PrimeModulus::from_u64(5).unwrap();
        let other = FieldCtx::new(Poly::from_u64s(&p5, &[2, 0, 1])).unwrap();
        let a = f9.one();
        let b = other.one();
        let r = std::panic::catch_unwind(|| a.add(&b));
        assert!(r.is_err(), "cross-field add must panic");
    }
}
