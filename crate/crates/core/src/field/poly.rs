//! Dense univariate polynomials over a [`FieldTower`], little-endian.
//!
//! The zero polynomial is the empty vector; every function returns trimmed
//! results.

use super::{FieldElem, FieldTower};

pub type Poly = Vec<FieldElem>;

pub fn trim(a: &mut Poly) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

pub fn trimmed(a: &[FieldElem]) -> Poly {
    let mut v = a.to_vec();
    trim(&mut v);
    v
}

/// Degree, or None for the zero polynomial.
pub fn degree(a: &[FieldElem]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub fn add(f: &FieldTower, a: &[FieldElem], b: &[FieldElem]) -> Poly {
    let len = a.len().max(b.len());
    let mut out: Poly = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(f.zero());
            let y = b.get(i).copied().unwrap_or(f.zero());
            f.add(x, y)
        })
        .collect();
    trim(&mut out);
    out
}

pub fn sub(f: &FieldTower, a: &[FieldElem], b: &[FieldElem]) -> Poly {
    let nb: Poly = b.iter().map(|&c| f.neg(c)).collect();
    add(f, a, &nb)
}

pub fn scale(f: &FieldTower, a: &[FieldElem], c: FieldElem) -> Poly {
    let mut out: Poly = a.iter().map(|&x| f.mul(x, c)).collect();
    trim(&mut out);
    out
}

pub fn mul(f: &FieldTower, a: &[FieldElem], b: &[FieldElem]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(f: &FieldTower, a: &[FieldElem], b: &[FieldElem]) -> (Poly, Poly) {
    let b = trimmed(b);
    let db = degree(&b).expect("division by the zero polynomial");
    let lead_inv = f.inv(b[db]).expect("trimmed polynomial has nonzero lead");
    let mut r = trimmed(a);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut quot = vec![f.zero(); r.len() - db];
    while r.len() > db {
        let top = r.len() - 1;
        let c = f.mul(r[top], lead_inv);
        let shift = top - db;
        quot[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, bi));
        }
        trim(&mut r);
    }
    trim(&mut quot);
    (quot, r)
}

pub fn rem(f: &FieldTower, a: &[FieldElem], b: &[FieldElem]) -> Poly {
    divrem(f, a, b).1
}

pub fn monic(f: &FieldTower, a: &[FieldElem]) -> Poly {
    let a = trimmed(a);
    match a.last() {
        None => a,
        Some(&lead) => scale(f, &a, f.inv(lead).expect("nonzero lead")),
    }
}

/// Monic gcd (zero if both inputs are zero).
pub fn gcd(f: &FieldTower, a: &[FieldElem], b: &[FieldElem]) -> Poly {
    let mut x = trimmed(a);
    let mut y = trimmed(b);
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

pub fn eval(f: &FieldTower, a: &[FieldElem], x: FieldElem) -> FieldElem {
    a.iter()
        .rev()
        .fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
}

fn mul_rem(f: &FieldTower, a: &[FieldElem], b: &[FieldElem], m: &[FieldElem]) -> Poly {
    rem(f, &mul(f, a, b), m)
}

pub fn pow_rem(f: &FieldTower, base: &[FieldElem], mut k: u64, m: &[FieldElem]) -> Poly {
    let mut acc = rem(f, &[f.one()], m);
    let mut b = rem(f, base, m);
    while k > 0 {
        if k & 1 == 1 {
            acc = mul_rem(f, &acc, &b, m);
        }
        b = mul_rem(f, &b, &b, m);
        k >>= 1;
    }
    acc
}

/// Distinct roots in the tower, ascending. The zero polynomial yields no roots.
pub fn roots(f: &FieldTower, poly: &[FieldElem]) -> Vec<FieldElem> {
    let mut g = monic(f, poly);
    if g.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    if g[0].is_zero() {
        out.push(f.zero());
        while g.first().is_some_and(|c| c.is_zero()) {
            g.remove(0);
        }
    }
    if g.len() > 1 {
        let x = vec![f.zero(), f.one()];
        let frob = pow_rem(f, &x, f.order(), &g);
        let split_part = gcd(f, &g, &sub(f, &frob, &x));
        split(f, &split_part, &mut out);
    }
    out.sort();
    out.dedup();
    out
}

// g is monic, squarefree, and a product of linear factors
fn split(f: &FieldTower, g: &[FieldElem], out: &mut Vec<FieldElem>) {
    match g.len() {
        0 | 1 => return,
        2 => {
            out.push(f.neg(g[0]));
            return;
        }
        _ => {}
    }
    let deg = g.len() - 1;
    for delta in 1..f.order() {
        let delta = f.element(delta).expect("in range");
        let probe = if f.characteristic() == 2 {
            // absolute trace of delta * x, a map onto F_2
            let mut t = rem(f, &[f.zero(), delta], g);
            let mut acc = t.clone();
            for _ in 1..f.coordinates() {
                t = mul_rem(f, &t, &t, g);
                acc = add(f, &acc, &t);
            }
            acc
        } else {
            let s = pow_rem(f, &[delta, f.one()], (f.order() - 1) / 2, g);
            sub(f, &s, &[f.one()])
        };
        let h = gcd(f, g, &probe);
        let dh = h.len().saturating_sub(1);
        if dh > 0 && dh < deg {
            let (q, _) = divrem(f, g, &h);
            split(f, &h, out);
            split(f, &monic(f, &q), out);
            return;
        }
    }
    unreachable!("equal-degree splitting always finds a separating shift");
}
