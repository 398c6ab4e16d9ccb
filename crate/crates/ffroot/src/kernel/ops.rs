//! Generic polynomial algorithms over a coefficient [`Lane`].
//!
//! Coefficient vectors are dense, low-to-high, and canonical (no trailing
//! zeros) at function boundaries; the zero polynomial is the empty vector.

use super::Lane;
use crate::natural::Natural;

/// Schoolbook multiplication takes over below this many coefficients.
pub const KARATSUBA_THRESHOLD: usize = 32;

pub(crate) fn normalize<L: Lane>(l: &L, v: &mut Vec<L::E>) {
    while v.last().is_some_and(|c| l.is_zero(c)) {
        v.pop();
    }
}

pub(crate) fn is_monic<L: Lane>(l: &L, a: &[L::E]) -> bool {
    a.last().is_some_and(|c| l.is_one(c))
}

pub(crate) fn add<L: Lane>(l: &L, a: &[L::E], b: &[L::E]) -> Vec<L::E> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out: Vec<L::E> = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o = l.add(o, s);
    }
    normalize(l, &mut out);
    out
}

pub(crate) fn sub<L: Lane>(l: &L, a: &[L::E], b: &[L::E]) -> Vec<L::E> {
    let mut out: Vec<L::E> = Vec::with_capacity(a.len().max(b.len()));
    for i in 0..a.len().max(b.len()) {
        let x = a.get(i).cloned().unwrap_or_else(|| l.zero());
        let y = b.get(i).cloned().unwrap_or_else(|| l.zero());
        out.push(l.sub(&x, &y));
    }
    normalize(l, &mut out);
    out
}

pub(crate) fn neg<L: Lane>(l: &L, a: &[L::E]) -> Vec<L::E> {
    a.iter().map(|c| l.neg(c)).collect()
}

pub(crate) fn scale<L: Lane>(l: &L, a: &[L::E], s: &L::E) -> Vec<L::E> {
    let mut out: Vec<L::E> = a.iter().map(|c| l.mul(c, s)).collect();
    normalize(l, &mut out);
    out
}

/// Plain quadratic product, lazy accumulation per output coefficient.
pub(crate) fn mul_schoolbook<L: Lane>(l: &L, a: &[L::E], b: &[L::E]) -> Vec<L::E> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut grid: Vec<L::Acc> = (0..a.len() + b.len() - 1).map(|_| l.acc_new()).collect();
    for (i, ai) in a.iter().enumerate() {
        if l.is_zero(ai) {
            continue;
        }
        for (cell, bj) in grid[i..i + b.len()].iter_mut().zip(b) {
            l.acc_mul_add(cell, ai, bj);
        }
    }
    let mut out: Vec<L::E> = grid.into_iter().map(|acc| l.acc_finish(acc)).collect();
    normalize(l, &mut out);
    out
}

/// Product with Karatsuba above [`KARATSUBA_THRESHOLD`]; the threshold is a
/// parameter so the crossover can be tuned and tested.
pub(crate) fn mul_with_threshold<L: Lane>(
    l: &L,
    a: &[L::E],
    b: &[L::E],
    threshold: usize,
) -> Vec<L::E> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = kmul(l, a, b, threshold.max(2));
    normalize(l, &mut out);
    out
}

pub(crate) fn mul<L: Lane>(l: &L, a: &[L::E], b: &[L::E]) -> Vec<L::E> {
    mul_with_threshold(l, a, b, KARATSUBA_THRESHOLD)
}

fn add_assign_at<L: Lane>(l: &L, out: &mut Vec<L::E>, src: &[L::E], shift: usize) {
    if out.len() < shift + src.len() {
        out.resize(shift + src.len(), l.zero());
    }
    for (i, c) in src.iter().enumerate() {
        out[shift + i] = l.add(&out[shift + i], c);
    }
}

fn kmul<L: Lane>(l: &L, a: &[L::E], b: &[L::E], threshold: usize) -> Vec<L::E> {
    if a.len().min(b.len()) < threshold {
        return mul_schoolbook(l, a, b);
    }
    let m = a.len().max(b.len()).div_ceil(2);
    if a.len() <= m {
        // Only b is long enough to split.
        let (b0, b1) = b.split_at(m);
        let mut out = kmul(l, a, b0, threshold);
        let hi = kmul(l, a, b1, threshold);
        add_assign_at(l, &mut out, &hi, m);
        return out;
    }
    if b.len() <= m {
        let (a0, a1) = a.split_at(m);
        let mut out = kmul(l, a0, b, threshold);
        let hi = kmul(l, a1, b, threshold);
        add_assign_at(l, &mut out, &hi, m);
        return out;
    }
    let (a0, a1) = a.split_at(m);
    let (b0, b1) = b.split_at(m);
    let z0 = kmul(l, a0, b0, threshold);
    let z2 = kmul(l, a1, b1, threshold);
    let asum = add(l, a0, a1);
    let bsum = add(l, b0, b1);
    let mut z1 = kmul(l, &asum, &bsum, threshold);
    z1 = sub(l, &z1, &z0);
    z1 = sub(l, &z1, &z2);
    let mut out = z0;
    add_assign_at(l, &mut out, &z1, m);
    add_assign_at(l, &mut out, &z2, 2 * m);
    out
}

/// Squaring: the schoolbook base accumulates the strict upper triangle,
/// doubles it, and adds the diagonal — a bit over half the products of a
/// general multiplication.
pub(crate) fn sqr_schoolbook<L: Lane>(l: &L, a: &[L::E]) -> Vec<L::E> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut grid: Vec<L::Acc> = (0..2 * a.len() - 1).map(|_| l.acc_new()).collect();
    for (i, ai) in a.iter().enumerate() {
        if l.is_zero(ai) {
            continue;
        }
        let tail = &a[i + 1..];
        for (cell, aj) in grid[2 * i + 1..2 * i + 1 + tail.len()].iter_mut().zip(tail) {
            l.acc_mul_add(cell, ai, aj);
        }
    }
    for cell in grid.iter_mut() {
        l.acc_double(cell);
    }
    for (i, ai) in a.iter().enumerate() {
        l.acc_mul_add(&mut grid[2 * i], ai, ai);
    }
    let mut out: Vec<L::E> = grid.into_iter().map(|acc| l.acc_finish(acc)).collect();
    normalize(l, &mut out);
    out
}

pub(crate) fn sqr<L: Lane>(l: &L, a: &[L::E]) -> Vec<L::E> {
    let mut out = ksqr(l, a);
    normalize(l, &mut out);
    out
}

fn ksqr<L: Lane>(l: &L, a: &[L::E]) -> Vec<L::E> {
    if a.len() < KARATSUBA_THRESHOLD {
        return sqr_schoolbook(l, a);
    }
    let m = a.len().div_ceil(2);
    let (a0, a1) = a.split_at(m);
    let z0 = ksqr(l, a0);
    let z2 = ksqr(l, a1);
    let asum = add(l, a0, a1);
    let mut z1 = ksqr(l, &asum);
    z1 = sub(l, &z1, &z0);
    z1 = sub(l, &z1, &z2);
    let mut out = z0;
    add_assign_at(l, &mut out, &z1, m);
    add_assign_at(l, &mut out, &z2, 2 * m);
    out
}

/// Low k coefficients of a·b (power-series product). Inputs need not be
/// canonical; the result is truncated, not normalized. At the degrees this
/// crate reaches (n <= 512) the lazy schoolbook triangle beats a truncated
/// Karatsuba, so very large inputs are the only ones routed through it.
pub(crate) fn mul_low<L: Lane>(l: &L, a: &[L::E], b: &[L::E], k: usize) -> Vec<L::E> {
    if a.is_empty() || b.is_empty() || k == 0 {
        return Vec::new();
    }
    let k = k.min(a.len() + b.len() - 1);
    if a.len().min(b.len()) >= 1024 {
        let mut full = mul(l, a, b);
        full.truncate(k);
        return full;
    }
    let mut grid: Vec<L::Acc> = (0..k).map(|_| l.acc_new()).collect();
    for (i, ai) in a.iter().enumerate().take(k) {
        if l.is_zero(ai) {
            continue;
        }
        let cols = (k - i).min(b.len());
        for (cell, bj) in grid[i..i + cols].iter_mut().zip(&b[..cols]) {
            l.acc_mul_add(cell, ai, bj);
        }
    }
    grid.into_iter().map(|acc| l.acc_finish(acc)).collect()
}

/// Euclidean division by an arbitrary nonzero divisor: a = q·d + r.
pub(crate) fn divrem<L: Lane>(l: &L, a: &[L::E], d: &[L::E]) -> (Vec<L::E>, Vec<L::E>) {
    assert!(!d.is_empty(), "division by the zero polynomial");
    if a.len() < d.len() {
        return (Vec::new(), a.to_vec());
    }
    let lc_inv = l.inv(d.last().unwrap()).expect("leading coefficient invertible");
    let mut r: Vec<L::E> = a.to_vec();
    let mut q: Vec<L::E> = vec![l.zero(); a.len() - d.len() + 1];
    for k in (0..q.len()).rev() {
        let top = r[k + d.len() - 1].clone();
        if l.is_zero(&top) {
            continue;
        }
        let c = l.mul(&top, &lc_inv);
        for (j, dj) in d.iter().enumerate().take(d.len() - 1) {
            if !l.is_zero(dj) {
                let t = l.mul(&c, dj);
                r[k + j] = l.sub(&r[k + j], &t);
            }
        }
        r[k + d.len() - 1] = l.zero();
        q[k] = c;
    }
    r.truncate(d.len() - 1);
    normalize(l, &mut r);
    normalize(l, &mut q);
    (q, r)
}

pub(crate) fn rem_schoolbook<L: Lane>(l: &L, a: &[L::E], d: &[L::E]) -> Vec<L::E> {
    divrem(l, a, d).1
}

/// Cached inverse of the reversed modulus, for repeated reduction by one
/// fixed monic f (deg f = n). Valid for dividends of degree <= 2n-2.
pub(crate) struct Reducer<E> {
    pub(crate) f: Vec<E>,
    /// rev(f)^{-1} mod x^{n-1} as a power series (may hold trailing zeros).
    inv_rev: Vec<E>,
}

impl<E: Clone> Reducer<E> {
    pub(crate) fn degree(&self) -> usize {
        self.f.len() - 1
    }
}

pub(crate) fn reducer_new<L: Lane>(l: &L, f: &[L::E]) -> Reducer<L::E> {
    assert!(f.len() >= 2 && is_monic(l, f), "reducer needs a monic modulus of degree >= 1");
    let n = f.len() - 1;
    let frev: Vec<L::E> = f.iter().rev().cloned().collect();
    let target = n.saturating_sub(1);
    let mut g = vec![l.one()]; // frev(0) = 1 for monic f
    let mut prec = 1usize;
    while prec < target {
        let prec2 = (2 * prec).min(target);
        // g <- g·(2 - frev·g) mod x^prec2
        let t = mul_low(l, &frev[..frev.len().min(prec2)], &g, prec2);
        let two = l.add(&l.one(), &l.one());
        let mut u: Vec<L::E> = t.iter().map(|c| l.neg(c)).collect();
        if u.is_empty() {
            u.push(two);
        } else {
            u[0] = l.add(&u[0], &two);
        }
        g = mul_low(l, &g, &u, prec2);
        prec = prec2;
    }
    g.truncate(target);
    Reducer { f: f.to_vec(), inv_rev: g }
}

/// Remainder of a modulo the reducer's f, via the reverse-and-multiply
/// quotient trick; equivalent to [`rem_schoolbook`] on its domain.
pub(crate) fn rem_reduced<L: Lane>(l: &L, a: &[L::E], red: &Reducer<L::E>) -> Vec<L::E> {
    let n = red.degree();
    if a.len() <= n {
        return a.to_vec();
    }
    debug_assert!(a.len() <= 2 * n - 1, "reducer domain is deg <= 2n-2");
    debug_assert!(!l.is_zero(a.last().unwrap()));
    let k = a.len() - n; // number of quotient coefficients
    let arev: Vec<L::E> = a.iter().rev().cloned().collect();
    let qrev = mul_low(l, &arev, &red.inv_rev, k);
    let mut q: Vec<L::E> = qrev.iter().rev().cloned().collect();
    while q.len() < k {
        q.insert(0, l.zero());
    }
    let qf = mul_low(l, &q, &red.f, n);
    let mut r: Vec<L::E> = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(|| l.zero());
        let y = qf.get(i).cloned().unwrap_or_else(|| l.zero());
        r.push(l.sub(&x, &y));
    }
    normalize(l, &mut r);
    r
}

/// Reduction helper choosing the cached path when available.
pub(crate) fn rem_by<L: Lane>(l: &L, a: Vec<L::E>, red: &Reducer<L::E>) -> Vec<L::E> {
    let n = red.degree();
    if a.len() <= n {
        a
    } else if a.len() + 1 <= 2 * n {
        rem_reduced(l, &a, red)
    } else {
        rem_schoolbook(l, &a, &red.f)
    }
}

pub(crate) fn mulmod<L: Lane>(l: &L, a: &[L::E], b: &[L::E], red: &Reducer<L::E>) -> Vec<L::E> {
    rem_by(l, mul(l, a, b), red)
}

pub(crate) fn sqrmod<L: Lane>(l: &L, a: &[L::E], red: &Reducer<L::E>) -> Vec<L::E> {
    rem_by(l, sqr(l, a), red)
}

/// a^e mod f by left-to-right binary powering.
pub(crate) fn powmod<L: Lane>(l: &L, a: &[L::E], e: &Natural, red: &Reducer<L::E>) -> Vec<L::E> {
    let base = rem_by(l, a.to_vec(), red);
    let mut acc = vec![l.one()];
    let bits = e.bits();
    for i in (0..bits).rev() {
        acc = sqrmod(l, &acc, red);
        if e.bit(i) {
            acc = mulmod(l, &acc, &base, red);
        }
    }
    acc
}

/// Monic gcd.
pub(crate) fn gcd<L: Lane>(l: &L, a: &[L::E], b: &[L::E]) -> Vec<L::E> {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    while !r1.is_empty() {
        let r = rem_schoolbook(l, &r0, &r1);
        r0 = r1;
        r1 = r;
    }
    if let Some(lc) = r0.last() {
        if !l.is_one(lc) {
            let inv = l.inv(lc).expect("nonzero leading coefficient");
            r0 = scale(l, &r0, &inv);
        }
    }
    r0
}

/// Extended gcd: returns (g monic, u, v) with u·a + v·b = g.
pub(crate) fn xgcd<L: Lane>(
    l: &L,
    a: &[L::E],
    b: &[L::E],
) -> (Vec<L::E>, Vec<L::E>, Vec<L::E>) {
    assert!(!(a.is_empty() && b.is_empty()), "gcd(0, 0) is undefined");
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![l.one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![l.one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(l, &r0, &r1);
        (r0, r1) = (r1, r);
        let qs = mul(l, &q, &s1);
        let qt = mul(l, &q, &t1);
        (s0, s1) = (s1.clone(), sub(l, &s0, &qs));
        (t0, t1) = (t1.clone(), sub(l, &t0, &qt));
    }
    let lc = r0.last().expect("gcd of non-both-zero inputs is nonzero");
    if !l.is_one(lc) {
        let inv = l.inv(lc).expect("field");
        r0 = scale(l, &r0, &inv);
        s0 = scale(l, &s0, &inv);
        t0 = scale(l, &t0, &inv);
    }
    (r0, s0, t0)
}

/// Resultant via the Euclidean remainder scheme with leading-coefficient
/// tracking. res(a, b) = lc(a)^{deg b}·prod b(roots of a).
pub(crate) fn resultant<L: Lane>(l: &L, a: &[L::E], b: &[L::E]) -> L::E {
    let mut res = l.one();
    let mut neg = false;
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    loop {
        if b.is_empty() {
            // res(a, 0) = 0 unless a is a nonzero constant (empty product).
            return if a.len() == 1 { if neg { l.neg(&res) } else { res } } else { l.zero() };
        }
        if a.is_empty() {
            return if b.len() == 1 { if neg { l.neg(&res) } else { res } } else { l.zero() };
        }
        if b.len() == 1 {
            // res(a, c) = c^{deg a}
            let c = pow_elem(l, &b[0], a.len() - 1);
            res = l.mul(&res, &c);
            return if neg { l.neg(&res) } else { res };
        }
        if a.len() < b.len() {
            // res(a,b) = (-1)^{deg a · deg b} res(b,a)
            if (a.len() - 1) % 2 == 1 && (b.len() - 1) % 2 == 1 {
                neg = !neg;
            }
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        let r = rem_schoolbook(l, &a, &b);
        let drop = (a.len() - 1) - r.len().saturating_sub(1);
        let lc = pow_elem(l, b.last().unwrap(), drop);
        res = l.mul(&res, &lc);
        if (a.len() - 1) % 2 == 1 && (b.len() - 1) % 2 == 1 {
            neg = !neg;
        }
        a = b;
        b = r;
    }
}

fn pow_elem<L: Lane>(l: &L, a: &L::E, mut e: usize) -> L::E {
    let mut base = a.clone();
    let mut acc = l.one();
    while e > 0 {
        if e & 1 == 1 {
            acc = l.mul(&acc, &base);
        }
        base = l.mul(&base, &base);
        e >>= 1;
    }
    acc
}

pub(crate) fn eval<L: Lane>(l: &L, a: &[L::E], x: &L::E) -> L::E {
    let mut acc = l.zero();
    for c in a.iter().rev() {
        acc = l.mul(&acc, x);
        acc = l.add(&acc, c);
    }
    acc
}

/// Brent–Kung modular composition g(h) mod f with block size ceil(sqrt(n))
/// and classical blocked matrix accumulation.
pub(crate) fn compose_bk<L: Lane>(
    l: &L,
    g: &[L::E],
    h: &[L::E],
    red: &Reducer<L::E>,
) -> Vec<L::E> {
    let n = red.degree();
    if g.len() <= 1 {
        return g.to_vec();
    }
    let h = rem_by(l, h.to_vec(), red);
    let k = (n as f64).sqrt().ceil() as usize;
    let k = k.max(1);
    // Baby steps h^0 .. h^{k-1}.
    let mut baby: Vec<Vec<L::E>> = Vec::with_capacity(k);
    baby.push(vec![l.one()]);
    if k > 1 {
        baby.push(h.clone());
    }
    for i in 2..k {
        let next = mulmod(l, &baby[i - 1], &h, red);
        baby.push(next);
    }
    let giant = if k == 1 { h.clone() } else { mulmod(l, &baby[k - 1], &h, red) };
    // Block linear combinations: C_j = sum_i g[jk+i]·h^i, accumulated lazily.
    let blocks = g.len().div_ceil(k);
    let mut combined: Vec<Vec<L::E>> = Vec::with_capacity(blocks);
    for j in 0..blocks {
        let mut grid: Vec<L::Acc> = (0..n.max(1)).map(|_| l.acc_new()).collect();
        for i in 0..k {
            let Some(c) = g.get(j * k + i) else { break };
            if l.is_zero(c) {
                continue;
            }
            for (cell, hc) in grid.iter_mut().zip(baby[i].iter()) {
                l.acc_mul_add(cell, c, hc);
            }
        }
        let mut row: Vec<L::E> = grid.into_iter().map(|acc| l.acc_finish(acc)).collect();
        normalize(l, &mut row);
        combined.push(row);
    }
    // Horner over the giant step.
    let mut acc = combined.pop().expect("at least one block");
    while let Some(row) = combined.pop() {
        acc = mulmod(l, &acc, &giant, red);
        acc = add(l, &acc, &row);
    }
    acc
}

/// O(deg g) Horner composition; the independent oracle for [`compose_bk`].
pub(crate) fn compose_horner<L: Lane>(
    l: &L,
    g: &[L::E],
    h: &[L::E],
    red: &Reducer<L::E>,
) -> Vec<L::E> {
    let h = rem_by(l, h.to_vec(), red);
    let mut acc: Vec<L::E> = Vec::new();
    for c in g.iter().rev() {
        acc = mulmod(l, &acc, &h, red);
        if !l.is_zero(c) {
            let mut t = acc;
            if t.is_empty() {
                t.push(c.clone());
            } else {
                t[0] = l.add(&t[0], c);
            }
            normalize(l, &mut t);
            acc = t;
        }
    }
    acc
}

/// Minimal polynomial of b modulo f (f monic irreducible) by the power-basis
/// linear-algebra baseline: grow powers of b and find the first dependency
/// with incremental Gaussian elimination, tracking combination coefficients.
pub(crate) fn minimal_polynomial<L: Lane>(
    l: &L,
    b: &[L::E],
    red: &Reducer<L::E>,
) -> Vec<L::E> {
    let n = red.degree();
    // Echelon rows: (reduced vector, pivot column, combination over powers).
    let mut rows: Vec<(Vec<L::E>, usize, Vec<L::E>)> = Vec::new();
    let mut power: Vec<L::E> = vec![l.one()]; // b^0
    for k in 0..=n {
        let mut vec_k: Vec<L::E> = power.clone();
        vec_k.resize(n.max(1), l.zero());
        // combo starts as the unit vector for Z^k.
        let mut combo: Vec<L::E> = vec![l.zero(); k + 1];
        combo[k] = l.one();
        for (row, pivot, row_combo) in &rows {
            let c = vec_k[*pivot].clone();
            if l.is_zero(&c) {
                continue;
            }
            for (x, y) in vec_k.iter_mut().zip(row.iter()) {
                let t = l.mul(&c, y);
                *x = l.sub(x, &t);
            }
            for (i, y) in row_combo.iter().enumerate() {
                let t = l.mul(&c, y);
                combo[i] = l.sub(&combo[i], &t);
            }
        }
        if let Some(pivot) = vec_k.iter().position(|c| !l.is_zero(c)) {
            let inv = l.inv(&vec_k[pivot]).expect("nonzero pivot");
            let row: Vec<L::E> = vec_k.iter().map(|c| l.mul(c, &inv)).collect();
            let row_combo: Vec<L::E> = combo.iter().map(|c| l.mul(c, &inv)).collect();
            rows.push((row, pivot, row_combo));
        } else {
            // The invariant "reduced vector = sum combo_i b^i" just reached
            // zero with combo_k = 1, so combo is the monic minimal polynomial.
            debug_assert!(l.is_one(&combo[k]));
            return combo;
        }
        power = mulmod(l, &power, b, red);
    }
    unreachable!("a dependency must appear by degree n");
}
