//! Dense polynomials over a prime field F_p, just enough to pick a modulus.
//!
//! Coefficients are little-endian `u64` residues; the zero polynomial is the
//! empty vector.

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime, Fermat inversion
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Remainder of `a` modulo a nonzero `f`.
pub fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let df = f.len() - 1;
    let lead_inv = inv_mod(f[df], p);
    while r.len() > df {
        let top = r.len() - 1;
        let c = ((r[top] as u128 * lead_inv as u128) % p as u128) as u64;
        let shift = top - df;
        for (i, &fi) in f.iter().enumerate() {
            let sub = ((c as u128 * fi as u128) % p as u128) as u64;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

pub fn mul_rem(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u128 + ai as u128 * bj as u128) % p as u128) as u64;
        }
    }
    rem(&prod, f, p)
}

pub fn pow_rem(base: &[u64], mut exp: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], f, p);
    let mut b = rem(base, f, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_rem(&acc, &b, f, p);
        }
        b = mul_rem(&b, &b, f, p);
        exp >>= 1;
    }
    acc
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Irreducibility over F_p: no factor of degree k for any k <= deg/2,
/// detected as gcd(f, x^{p^k} - x) != 1.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x = vec![0, 1];
    let mut frob = x.clone();
    for _ in 1..=n / 2 {
        frob = pow_rem(&frob, p, f, p);
        let mut diff = frob.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = gcd(f, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// First monic irreducible polynomial of degree `n` over F_p, ordering
/// candidates by the base-p integer formed from their lower coefficients
/// (coefficient of x^{n-1} most significant).
pub fn first_irreducible(p: u64, n: usize) -> Vec<u64> {
    let mut lower = vec![0u64; n];
    loop {
        let mut f = lower.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
        // increment the little-endian counter
        for c in lower.iter_mut() {
            *c += 1;
            if *c < p {
                break;
            }
            *c = 0;
        }
    }
}
