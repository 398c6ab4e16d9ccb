//! Modular composition (the C(n) primitive), Frobenius power chains and
//! minimal polynomials.

use std::collections::BTreeMap;
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::kernel::ops;
use crate::poly::{with_red, Poly, PolyData, ReducerKind};

// Re-exported pattern names used by the dispatch macro.
use crate::kernel::LaneKind;

/// g evaluated at h, reduced mod f: Brent-Kung baby-step/giant-step with
/// block size ceil(sqrt(n)) and classical blocked matrix accumulation.
pub fn compose_mod(g: &Poly, h: &Poly, f: &Poly) -> Result<Poly> {
    let red = validated_reducer(g, h, f)?;
    Ok(compose_with(g, h, &red))
}

/// Same contract as [`compose_mod`], by plain Horner: the O(n·M(n)) oracle.
pub fn compose_horner(g: &Poly, h: &Poly, f: &Poly) -> Result<Poly> {
    let red = validated_reducer(g, h, f)?;
    let data = with_red!(f.modulus, &red, g, h, |l, r, x, y| ops::compose_horner(l, x, y, r));
    Ok(Poly::from_data(&f.modulus, data))
}

fn validated_reducer(g: &Poly, h: &Poly, f: &Poly) -> Result<ReducerKind> {
    if !f.is_monic() || f.len() < 2 {
        return Err(Error::NonMonic);
    }
    if g.len() >= f.len() || h.len() >= f.len() {
        return Err(Error::DegreeViolation("compose needs deg g, deg h < deg f"));
    }
    Ok(ReducerKind::new(f))
}

pub(crate) fn compose_with(g: &Poly, h: &Poly, red: &ReducerKind) -> Poly {
    let data = with_red!(g.modulus, red, g, h, |l, r, x, y| ops::compose_bk(l, x, y, r));
    Poly::from_data(&g.modulus, data)
}

/// Memoized table of Frobenius images Xi_j = x^{p^j} mod f, built from
/// Xi_1 = x^p by composition doubling: Xi_{2k} = Xi_k(Xi_k) and
/// Xi_{2k+1} = Xi_{2k}(Xi_1).
///
/// Readers either find a complete entry or recompute; entries are inserted
/// only after they are fully built, so concurrent use is safe.
pub struct FrobTable {
    f: Poly,
    pub(crate) red: ReducerKind,
    entries: RwLock<BTreeMap<u64, Poly>>,
}

impl FrobTable {
    pub fn new(f: &Poly) -> Result<FrobTable> {
        if !f.is_monic() || f.len() < 2 {
            return Err(Error::NonMonic);
        }
        Ok(FrobTable {
            f: f.clone(),
            red: ReducerKind::new(f),
            entries: RwLock::new(BTreeMap::new()),
        })
    }

    pub fn modulus_poly(&self) -> &Poly {
        &self.f
    }

    /// x^{p^j} mod f; O(log j) compositions past the single O(log p) powering.
    pub fn xi(&self, j: u64) -> Poly {
        if let Some(hit) = self.entries.read().expect("lock").get(&j) {
            return hit.clone();
        }
        let value = if j == 0 {
            let x = Poly::x(&self.f.modulus);
            if self.f.len() == 2 {
                x.rem(&self.f).expect("monic divisor")
            } else {
                x
            }
        } else if j == 1 {
            let p = self.f.modulus.value().clone();
            let x = Poly::x(&self.f.modulus);
            let data = with_red!(self.f.modulus, &self.red, x, |l, r, a| ops::powmod(l, a, &p, r));
            Poly::from_data(&self.f.modulus, data)
        } else if j % 2 == 0 {
            let half = self.xi(j / 2);
            compose_with(&half, &half, &self.red)
        } else {
            let even = self.xi(j - 1);
            let one = self.xi(1);
            compose_with(&even, &one, &self.red)
        };
        self.entries
            .write()
            .expect("lock")
            .entry(j)
            .or_insert_with(|| value.clone());
        value
    }

    /// r^{p^j} mod f = r(Xi_j): one modular composition.
    pub fn apply(&self, r: &Poly, j: u64) -> Poly {
        debug_assert!(r.len() < self.f.len());
        if j == 0 || r.len() <= 1 {
            return r.clone();
        }
        let xi = self.xi(j);
        compose_with(r, &xi, &self.red)
    }
}

/// x^{p^j} mod f, memoizing into the table.
pub fn frobenius_power(table: &FrobTable, j: u64) -> Poly {
    table.xi(j)
}

/// r^{p^j} mod f via composition with Xi_j.
pub fn apply_frobenius(r: &Poly, j: u64, table: &FrobTable) -> Poly {
    table.apply(r, j)
}

/// Minimal polynomial of b modulo a monic irreducible f: the lowest-degree
/// monic g over F_p with g(b) = 0 mod f. Power-basis linear algebra, O(n^3).
pub fn minimal_polynomial(b: &Poly, f: &Poly) -> Result<Poly> {
    if !f.is_monic() || f.len() < 2 {
        return Err(Error::NonMonic);
    }
    if b.len() >= f.len() {
        return Err(Error::DegreeViolation("minimal_polynomial needs deg b < deg f"));
    }
    let red = ReducerKind::new(f);
    let data = with_red!(f.modulus, &red, b, |l, r, x| ops::minimal_polynomial(l, x, r));
    let g = Poly::from_data(&f.modulus, data);
    #[cfg(debug_assertions)]
    {
        let n = f.len() - 1;
        let d = g.len() - 1;
        debug_assert!(d >= 1 && n % d == 0, "deg g must divide n");
        debug_assert!(crate::poly::is_irreducible(&g).unwrap(), "minimal polynomial is irreducible");
        let at_b = with_red!(f.modulus, &red, g, b, |l, r, x, y| ops::compose_bk(l, x, y, r));
        debug_assert!(
            Poly::from_data(&f.modulus, at_b).is_zero(),
            "g(b) must vanish mod f"
        );
    }
    Ok(g)
}
