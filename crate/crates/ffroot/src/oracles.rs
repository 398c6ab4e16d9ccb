//! Independent reference implementations used by the test suites.
//!
//! Everything here is deliberately brute force — enumeration, Sylvester
//! determinants, direct Frobenius sums — and shares no code with the
//! production paths it checks.

use std::collections::HashSet;
use std::sync::Arc;

use num_traits::ToPrimitive;

use crate::fp::{FpElement, PrimeModulus};
use crate::fq::{FieldCtx, FqElement};
use crate::natural::{nat, Natural};
use crate::poly::Poly;

/// All q elements of a small field, in index order.
pub fn field_elements(ctx: &Arc<FieldCtx>) -> Vec<FqElement> {
    let q = ctx.order().to_u64().expect("oracle fields are small");
    (0..q).map(|k| ctx.element_by_index(&nat(k))).collect()
}

/// Index of an element in the lexicographic enumeration.
pub fn element_index(a: &FqElement) -> u64 {
    let p = a.ctx().p().value().to_u64().expect("small prime");
    let mut idx = 0u64;
    for (i, c) in a.rep().coeffs().iter().enumerate() {
        idx += c.to_u64().expect("small") * p.pow(i as u32);
    }
    idx
}

/// The set of t-th powers of F_q^*, by enumeration.
pub fn tth_power_set(ctx: &Arc<FieldCtx>, t: u64) -> HashSet<u64> {
    let mut out = HashSet::new();
    for a in field_elements(ctx) {
        if a.is_zero() {
            continue;
        }
        out.insert(element_index(&a.pow(&nat(t))));
    }
    out
}

/// All t-th roots of a, by enumeration.
pub fn all_roots(ctx: &Arc<FieldCtx>, a: &FqElement, t: u64) -> Vec<FqElement> {
    field_elements(ctx)
        .into_iter()
        .filter(|r| r.pow(&nat(t)) == *a)
        .collect()
}

/// alpha_i(lambda) computed as the literal sum of powers
/// lambda^{1 + p^s + ... + p^{ks}} for k = 1..=i, via repeated Frobenius.
pub fn alpha_direct(lambda: &FqElement, i: u64, s: u64) -> FqElement {
    let mut acc = lambda.ctx().zero();
    let mut cur = lambda.clone(); // lambda^{1 + p^s + ... + p^{ks}} after k steps
    for _ in 1..=i {
        cur = cur.frobenius(s).mul(lambda);
        acc = acc.add(&cur);
    }
    acc
}

/// (xi_i, zeta_i, delta_i) from their defining formulas, by direct powering.
pub fn chain_direct(lambda: &FqElement, i: u64, s: u64) -> (FqElement, FqElement, FqElement) {
    assert!(i >= 1);
    let ctx = lambda.ctx();
    let p = ctx.p().value().clone();
    let xi = ctx.gen_x().pow(&p.pow((i * s).to_u32().expect("small oracle exponent")));
    let mut delta = ctx.zero();
    let mut exp = Natural::from(0u32);
    for k in 1..=i {
        exp += p.pow((k * s).to_u32().expect("small oracle exponent"));
        delta = delta.add(&lambda.pow(&exp));
    }
    let zeta = lambda.pow(&exp);
    (xi, zeta, delta)
}

/// Sylvester-matrix resultant by Gaussian elimination, for small degrees.
pub fn sylvester_resultant(f: &Poly, a: &Poly) -> FpElement {
    let p = f.modulus();
    let m = f.degree().expect("nonzero f");
    let Some(n) = a.degree() else {
        // res(f, 0) = 0 for deg f >= 1.
        return FpElement::zero(p);
    };
    if n == 0 {
        return a.coeff(0).pow(&nat(m as u64));
    }
    let size = m + n;
    let mut mat: Vec<Vec<FpElement>> = vec![vec![FpElement::zero(p); size]; size];
    // n rows of f's coefficients, then m rows of a's, high-to-low layout.
    for row in 0..n {
        for j in 0..=m {
            mat[row][row + j] = f.coeff(m - j);
        }
    }
    for row in 0..m {
        for j in 0..=n {
            mat[n + row][row + j] = a.coeff(n - j);
        }
    }
    gauss_det(p, mat)
}

fn gauss_det(p: &Arc<PrimeModulus>, mut mat: Vec<Vec<FpElement>>) -> FpElement {
    let size = mat.len();
    let mut det = FpElement::one(p);
    for col in 0..size {
        let Some(pivot) = (col..size).find(|&r| !mat[r][col].is_zero()) else {
            return FpElement::zero(p);
        };
        if pivot != col {
            mat.swap(pivot, col);
            det = det.neg();
        }
        let pv = mat[col][col].clone();
        det = det.mul(&pv);
        let inv = pv.inv().expect("nonzero pivot");
        for r in col + 1..size {
            if mat[r][col].is_zero() {
                continue;
            }
            let factor = mat[r][col].mul(&inv);
            for c in col..size {
                let t = factor.mul(&mat[col][c]);
                mat[r][c] = mat[r][c].sub(&t);
            }
        }
    }
    det
}

/// Irreducibility by exhaustive search for monic factors of degree
/// 1..deg/2, for tiny p and degree.
pub fn irreducible_by_search(f: &Poly) -> bool {
    let p = f.modulus();
    let pv = p.value().to_u64().expect("small prime");
    let n = f.degree().expect("nonzero");
    if n == 0 {
        return false;
    }
    for d in 1..=n / 2 {
        // Enumerate monic polynomials of degree d.
        let count = pv.pow(d as u32);
        for k in 0..count {
            let mut coeffs = Vec::with_capacity(d + 1);
            let mut idx = k;
            for _ in 0..d {
                coeffs.push(idx % pv);
                idx /= pv;
            }
            coeffs.push(1);
            let g = Poly::from_u64s(p, &coeffs);
            let (_, r) = f.divrem(&g).expect("same modulus");
            if r.is_zero() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_basics() {
        let p = PrimeModulus::from_u64(3).unwrap();
        let ctx = FieldCtx::new(Poly::from_u64s(&p, &[1, 0, 1])).unwrap();
        let elems = field_elements(&ctx);
        assert_eq!(elems.len(), 9);
        for (k, e) in elems.iter().enumerate() {
            assert_eq!(element_index(e), k as u64);
        }
        // squares of F_9^*: {1, 2, x, 2x} per hand computation
        let squares = tth_power_set(&ctx, 2);
        let expect: HashSet<u64> = [1u64, 2, 3, 6].into_iter().collect();
        assert_eq!(squares, expect);
    }
}
