//! Exact arithmetic in F_{q^{2d}}, q = p^e, with the embedded copy of F_{q^2}.
//!
//! A [`FieldTower`] is the field F_p[x]/(f) for the first monic irreducible
//! `f` of degree `2ed` over F_p. Elements are coordinate vectors in the basis
//! `1, x, ..., x^{2ed-1}`; a [`FieldElem`] stores them packed as the base-p
//! integer `sum c_i p^i`, which is also the order used whenever a
//! "lexicographically smallest" element is chosen.
//!
//! Fields small enough to tabulate (at most [`TABLE_LIMIT`] elements) multiply
//! through exponent/logarithm tables built from the smallest generator;
//! larger ones fall back to schoolbook multiplication with reduction by the
//! modulus. Both paths produce the same packed representation.

mod factor;
mod fp_poly;
pub mod poly;

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

pub use factor::{is_prime, prime_divisors};

/// Largest number of F_p coordinates a tower may have.
pub const MAX_COORDINATES: usize = 64;

/// Fields with at most this many elements get log/exp tables.
pub const TABLE_LIMIT: u64 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("exponent and tower degree must be positive")]
    ZeroDegree,
    #[error("F_{{{p}^{coords}}} needs {coords} coordinates, the bound is {limit}")]
    TooManyCoordinates { p: u64, coords: usize, limit: usize },
    #[error("field order {p}^{coords} does not fit in 64 bits")]
    OrderOverflow { p: u64, coords: usize },
    #[error("inversion of zero")]
    DivisionByZero,
    #[error("operands come from different field layers")]
    MixedTower,
    #[error("{n} does not divide the multiplicative group order {group}")]
    NoRootOfUnity { n: u64, group: u64 },
    #[error("bad coordinate vector: {0}")]
    BadCoordinates(String),
}

/// Element of a [`FieldTower`]; only meaningful together with its tower.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    tag: u32,
    packed: u64,
}

impl FieldElem {
    /// Base-p integer encoding of the coordinate vector.
    pub fn packed(&self) -> u64 {
        self.packed
    }

    pub fn is_zero(&self) -> bool {
        self.packed == 0
    }

    pub fn layer(&self) -> u32 {
        self.tag
    }

    pub(crate) fn zero_in(tag: u32) -> Self {
        FieldElem { tag, packed: 0 }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.packed)
    }
}

struct LogTables {
    // exp has length 2(Q-1) so that log a + log b never needs a reduction
    exp: Vec<u32>,
    log: Vec<u32>,
}

pub struct FieldTower {
    p: u64,
    e: u32,
    d: u32,
    n: usize,
    q: u64,
    order: u64,
    tag: u32,
    modulus: Vec<u64>,
    radix: Vec<u64>,
    generator: u64,
    group_primes: Vec<u64>,
    tables: Option<LogTables>,
    base: Option<Arc<FieldTower>>,
    // images of 1, y, ..., y^{2e-1} where y generates the base F_{q^2}
    embedding: Vec<u64>,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTower")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("d", &self.d)
            .field("modulus", &self.modulus)
            .finish()
    }
}

fn layer_tag(p: u64, e: u32, d: u32) -> u32 {
    // FNV-1a over the defining parameters; equal parameters give equal fields
    let mut h: u32 = 0x811c_9dc5;
    for byte in p
        .to_le_bytes()
        .into_iter()
        .chain(e.to_le_bytes())
        .chain(d.to_le_bytes())
    {
        h ^= byte as u32;
        h = h.wrapping_mul(0x0100_0193);
    }
    h
}

/// Builds the tower F_{q^{2d}} with q = p^e.
pub fn make_field_tower(p: u64, e: u32, d: u32) -> Result<FieldTower, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if e == 0 || d == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let coords = 2 * e as usize * d as usize;
    if coords > MAX_COORDINATES {
        return Err(FieldError::TooManyCoordinates {
            p,
            coords,
            limit: MAX_COORDINATES,
        });
    }
    let order = p
        .checked_pow(coords as u32)
        .ok_or(FieldError::OrderOverflow { p, coords })?;
    let q = p.pow(e);
    let base = if d > 1 {
        Some(Arc::new(make_field_tower(p, e, 1)?))
    } else {
        None
    };
    let modulus = fp_poly::first_irreducible(p, coords);
    let radix = (0..coords).map(|i| p.pow(i as u32)).collect();
    let mut tower = FieldTower {
        p,
        e,
        d,
        n: coords,
        q,
        order,
        tag: layer_tag(p, e, d),
        modulus,
        radix,
        generator: 0,
        group_primes: prime_divisors(order - 1),
        tables: None,
        base,
        embedding: Vec::new(),
    };
    tower.generator = tower.find_generator();
    if order <= TABLE_LIMIT {
        tower.tables = Some(tower.build_tables());
    }
    tower.embedding = tower.find_embedding();
    Ok(tower)
}

impl FieldTower {
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// q = p^e.
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    /// Tower degree d over F_{q^2}.
    pub fn degree(&self) -> u32 {
        self.d
    }

    /// Number of F_p coordinates, 2ed.
    pub fn coordinates(&self) -> usize {
        self.n
    }

    /// q^{2d}.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn layer(&self) -> u32 {
        self.tag
    }

    /// Defining polynomial over F_p, little-endian, monic.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The F_{q^2} layer this tower embeds (the tower itself when d = 1).
    pub fn base(&self) -> &FieldTower {
        self.base.as_deref().unwrap_or(self)
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem {
            tag: self.tag,
            packed: 0,
        }
    }

    pub fn one(&self) -> FieldElem {
        self.elem_at(1)
    }

    /// Smallest generator of the multiplicative group.
    pub fn generator(&self) -> FieldElem {
        self.elem_at(self.generator)
    }

    pub(crate) fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    /// Logarithm to the base of [`Self::generator`]; needs the tables.
    pub(crate) fn table_log(&self, x: FieldElem) -> Option<u64> {
        self.member(x);
        match &self.tables {
            Some(t) if !x.is_zero() => Some(t.log[x.packed as usize] as u64),
            _ => None,
        }
    }

    /// `generator^k`; needs the tables.
    pub(crate) fn table_exp(&self, k: u64) -> Option<FieldElem> {
        let t = self.tables.as_ref()?;
        let k = (k % (self.order - 1)) as usize;
        Some(self.elem_at(t.exp[k] as u64))
    }

    fn elem_at(&self, packed: u64) -> FieldElem {
        debug_assert!(packed < self.order);
        FieldElem {
            tag: self.tag,
            packed,
        }
    }

    /// Element with the given packed encoding.
    pub fn element(&self, packed: u64) -> Result<FieldElem, FieldError> {
        if packed >= self.order {
            return Err(FieldError::BadCoordinates(format!(
                "{packed} is not below the field order {}",
                self.order
            )));
        }
        Ok(self.elem_at(packed))
    }

    pub fn from_int(&self, k: i64) -> FieldElem {
        self.elem_at(k.rem_euclid(self.p as i64) as u64)
    }

    /// Element with the given little-endian coordinates; missing trailing
    /// coordinates are zero.
    pub fn from_coords(&self, coords: &[u64]) -> Result<FieldElem, FieldError> {
        if coords.len() > self.n {
            return Err(FieldError::BadCoordinates(format!(
                "{} coordinates for a field with {}",
                coords.len(),
                self.n
            )));
        }
        if let Some(c) = coords.iter().find(|&&c| c >= self.p) {
            return Err(FieldError::BadCoordinates(format!(
                "coordinate {c} is not reduced mod {}",
                self.p
            )));
        }
        let packed = coords
            .iter()
            .zip(&self.radix)
            .map(|(&c, &r)| c * r)
            .sum();
        Ok(self.elem_at(packed))
    }

    /// Little-endian coordinate vector of length 2ed.
    pub fn coords(&self, x: FieldElem) -> Vec<u64> {
        let mut v = x.packed;
        (0..self.n)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    pub fn contains(&self, x: FieldElem) -> bool {
        x.tag == self.tag
    }

    pub fn check(&self, x: FieldElem) -> Result<(), FieldError> {
        if x.tag == self.tag {
            Ok(())
        } else {
            Err(FieldError::MixedTower)
        }
    }

    #[inline]
    fn member(&self, x: FieldElem) {
        assert!(x.tag == self.tag, "field element from a different layer");
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        self.elem_at(rng.gen_range(0..self.order))
    }

    /// All elements in packed order. Only sensible for small fields.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.order).map(|k| self.elem_at(k))
    }

    pub fn add(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        self.member(x);
        self.member(y);
        if self.p == 2 {
            return self.elem_at(x.packed ^ y.packed);
        }
        let (mut a, mut b, mut out) = (x.packed, y.packed, 0);
        for &r in &self.radix {
            if a == 0 && b == 0 {
                break;
            }
            let s = (a % self.p + b % self.p) % self.p;
            out += s * r;
            a /= self.p;
            b /= self.p;
        }
        self.elem_at(out)
    }

    pub fn neg(&self, x: FieldElem) -> FieldElem {
        self.member(x);
        if self.p == 2 {
            return x;
        }
        let (mut a, mut out) = (x.packed, 0);
        for &r in &self.radix {
            if a == 0 {
                break;
            }
            let c = a % self.p;
            out += ((self.p - c) % self.p) * r;
            a /= self.p;
        }
        self.elem_at(out)
    }

    pub fn sub(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        self.member(x);
        self.member(y);
        if x.packed == 0 || y.packed == 0 {
            return self.zero();
        }
        match &self.tables {
            Some(t) => {
                let k = t.log[x.packed as usize] as usize + t.log[y.packed as usize] as usize;
                self.elem_at(t.exp[k] as u64)
            }
            None => self.elem_at(self.mul_schoolbook(x.packed, y.packed)),
        }
    }

    pub fn square(&self, x: FieldElem) -> FieldElem {
        self.mul(x, x)
    }

    /// x^k for k >= 0.
    pub fn pow(&self, x: FieldElem, k: u64) -> FieldElem {
        self.member(x);
        if k == 0 {
            return self.one();
        }
        if x.packed == 0 {
            return self.zero();
        }
        match &self.tables {
            Some(t) => {
                let group = self.order - 1;
                let l = (t.log[x.packed as usize] as u128 * (k % group) as u128) % group as u128;
                self.elem_at(t.exp[l as usize] as u64)
            }
            None => self.elem_at(self.pow_schoolbook(x.packed, k)),
        }
    }

    /// x^k for any integer k; zero to a negative power is an error.
    pub fn pow_signed(&self, x: FieldElem, k: i64) -> Result<FieldElem, FieldError> {
        if k >= 0 {
            Ok(self.pow(x, k as u64))
        } else {
            Ok(self.pow(self.inv(x)?, k.unsigned_abs()))
        }
    }

    pub fn inv(&self, x: FieldElem) -> Result<FieldElem, FieldError> {
        self.member(x);
        if x.packed == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match &self.tables {
            Some(t) => {
                let group = (self.order - 1) as usize;
                let l = t.log[x.packed as usize] as usize;
                self.elem_at(t.exp[(group - l) % group] as u64)
            }
            None => self.elem_at(self.pow_schoolbook(x.packed, self.order - 2)),
        })
    }

    pub fn div(&self, x: FieldElem, y: FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// x -> x^{q^2}; fixes exactly the embedded F_{q^2}.
    pub fn frobenius_q2(&self, x: FieldElem) -> FieldElem {
        self.pow(x, self.q * self.q)
    }

    pub fn checked_add(&self, x: FieldElem, y: FieldElem) -> Result<FieldElem, FieldError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add(x, y))
    }

    pub fn checked_mul(&self, x: FieldElem, y: FieldElem) -> Result<FieldElem, FieldError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    pub fn checked_inv(&self, x: FieldElem) -> Result<FieldElem, FieldError> {
        self.check(x)?;
        self.inv(x)
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, x: FieldElem) -> Result<u64, FieldError> {
        self.member(x);
        if x.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let mut ord = self.order - 1;
        for &r in &self.group_primes {
            while ord.is_multiple_of(r) && self.pow(x, ord / r) == self.one() {
                ord /= r;
            }
        }
        Ok(ord)
    }

    /// Element of multiplicative order exactly `n`, namely g^{(Q-1)/n} for
    /// the smallest generator g.
    pub fn primitive_root_of_unity(&self, n: u64) -> Result<FieldElem, FieldError> {
        let group = self.order - 1;
        if n == 0 || !group.is_multiple_of(n) {
            return Err(FieldError::NoRootOfUnity { n, group });
        }
        Ok(self.pow(self.generator(), group / n))
    }

    /// Image of an element of the base F_{q^2} in this tower.
    pub fn embed(&self, x: FieldElem) -> Result<FieldElem, FieldError> {
        let base = self.base();
        base.check(x)?;
        if self.d == 1 {
            return Ok(x);
        }
        let mut acc = self.zero();
        for (c, &img) in base.coords(x).into_iter().zip(&self.embedding) {
            if c != 0 {
                acc = self.add(acc, self.mul(self.from_int(c as i64), self.elem_at(img)));
            }
        }
        Ok(acc)
    }

    /// Roots in this tower of a polynomial with coefficients here
    /// (little-endian), sorted ascending and without multiplicity.
    pub fn roots(&self, poly: &[FieldElem]) -> Vec<FieldElem> {
        poly::roots(self, poly)
    }

    /// All n-th roots of `c` in this tower, ascending.
    pub fn nth_roots(&self, c: FieldElem, n: u64) -> Vec<FieldElem> {
        if c.is_zero() {
            return vec![self.zero()];
        }
        let mut coeffs = vec![self.zero(); n as usize + 1];
        coeffs[0] = self.neg(c);
        coeffs[n as usize] = self.one();
        self.roots(&coeffs)
    }

    fn unpack(&self, mut v: u64, out: &mut [u64]) {
        for slot in out.iter_mut().take(self.n) {
            *slot = v % self.p;
            v /= self.p;
        }
    }

    fn pack(&self, digits: &[u64]) -> u64 {
        digits
            .iter()
            .take(self.n)
            .rev()
            .fold(0, |acc, &c| acc * self.p + c)
    }

    fn mul_schoolbook(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return self.mul_binary(a, b);
        }
        let n = self.n;
        let p = self.p;
        let mut da = [0u64; MAX_COORDINATES];
        let mut db = [0u64; MAX_COORDINATES];
        self.unpack(a, &mut da);
        self.unpack(b, &mut db);
        let mut prod = [0u64; 2 * MAX_COORDINATES];
        for i in 0..n {
            if da[i] == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] = ((prod[i + j] as u128 + da[i] as u128 * db[j] as u128) % p as u128) as u64;
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            let neg = p - c;
            for i in 0..n {
                let idx = k - n + i;
                prod[idx] = ((prod[idx] as u128 + neg as u128 * self.modulus[i] as u128) % p as u128) as u64;
            }
            prod[k] = 0;
        }
        self.pack(&prod[..n])
    }

    // carry-less multiplication for p = 2, where packed values are bit masks
    fn mul_binary(&self, a: u64, b: u64) -> u64 {
        let mut prod: u128 = 0;
        let mut bb = b;
        let mut shift = 0;
        while bb != 0 {
            if bb & 1 == 1 {
                prod ^= (a as u128) << shift;
            }
            bb >>= 1;
            shift += 1;
        }
        let n = self.n;
        let low_mask: u128 = self.pack(&self.modulus[..n]) as u128;
        for k in (n..2 * n - 1).rev() {
            if (prod >> k) & 1 == 1 {
                prod ^= 1u128 << k;
                prod ^= low_mask << (k - n);
            }
        }
        prod as u64
    }

    fn pow_schoolbook(&self, mut base: u64, mut k: u64) -> u64 {
        let mut acc = 1u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_schoolbook(acc, base);
            }
            base = self.mul_schoolbook(base, base);
            k >>= 1;
        }
        acc
    }

    fn find_generator(&self) -> u64 {
        let group = self.order - 1;
        (1..self.order)
            .find(|&g| {
                self.group_primes
                    .iter()
                    .all(|&r| self.pow_schoolbook(g, group / r) != 1)
            })
            .expect("multiplicative group of a finite field is cyclic")
    }

    fn build_tables(&self) -> LogTables {
        let group = (self.order - 1) as usize;
        let mut exp = vec![0u32; 2 * group];
        let mut log = vec![0u32; self.order as usize];
        let mut cur = 1u64;
        for k in 0..group {
            exp[k] = cur as u32;
            exp[k + group] = cur as u32;
            log[cur as usize] = k as u32;
            cur = self.mul_schoolbook(cur, self.generator);
        }
        LogTables { exp, log }
    }

    fn find_embedding(&self) -> Vec<u64> {
        let Some(base) = self.base.as_deref() else {
            return Vec::new();
        };
        let coeffs: Vec<FieldElem> = base
            .modulus()
            .iter()
            .map(|&c| self.from_int(c as i64))
            .collect();
        let roots = self.roots(&coeffs);
        let root = *roots
            .first()
            .expect("the F_{q^2} modulus splits in every even-degree tower");
        let mut powers = Vec::with_capacity(base.n);
        let mut cur = self.one();
        for _ in 0..base.n {
            powers.push(cur.packed);
            cur = self.mul(cur, root);
        }
        powers
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn f5_addition() {
        let f = make_field_tower(5, 1, 1).unwrap();
        assert_eq!(f.order(), 25);
        assert_eq!(f.add(f.from_int(2), f.from_int(4)), f.from_int(1));
        assert_eq!(f.modulus(), &[2, 0, 1]);
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert_eq!(make_field_tower(4, 1, 1).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(make_field_tower(5, 0, 1).unwrap_err(), FieldError::ZeroDegree);
    }

    #[test]
    fn coordinate_bound() {
        assert!(matches!(
            make_field_tower(2, 11, 3).unwrap_err(),
            FieldError::TooManyCoordinates { coords: 66, .. }
        ));
        assert!(matches!(
            make_field_tower(7, 1, 12).unwrap_err(),
            FieldError::OrderOverflow { .. }
        ));
    }

    #[test]
    fn inverse_on_random_elements_f7_4() {
        let f = make_field_tower(7, 1, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut seen = 0;
        while seen < 100 {
            let x = f.random(&mut rng);
            if x.is_zero() {
                continue;
            }
            assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
            seen += 1;
        }
        assert_eq!(f.inv(f.zero()), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn frobenius_composed_twice_is_identity_on_f7_4() {
        let f = make_field_tower(7, 1, 2).unwrap();
        for x in f.elements() {
            assert_eq!(f.frobenius_q2(f.frobenius_q2(x)), x);
        }
    }

    #[test]
    fn frobenius_fixes_exactly_the_embedded_base() {
        let f = make_field_tower(3, 1, 2).unwrap();
        let base = f.base();
        let image: std::collections::BTreeSet<_> =
            base.elements().map(|x| f.embed(x).unwrap()).collect();
        assert_eq!(image.len() as u64, base.order());
        let fixed: std::collections::BTreeSet<_> =
            f.elements().filter(|&x| f.frobenius_q2(x) == x).collect();
        assert_eq!(image, fixed);
    }

    #[test]
    fn embedding_is_a_ring_homomorphism() {
        let f = make_field_tower(5, 1, 2).unwrap();
        let base = f.base();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let (x, y) = (base.random(&mut rng), base.random(&mut rng));
            let (ex, ey) = (f.embed(x).unwrap(), f.embed(y).unwrap());
            assert_eq!(f.embed(base.add(x, y)).unwrap(), f.add(ex, ey));
            assert_eq!(f.embed(base.mul(x, y)).unwrap(), f.mul(ex, ey));
        }
        assert_eq!(f.embed(f.one()), Err(FieldError::MixedTower));
    }

    #[test]
    fn roots_of_unity() {
        let f25 = make_field_tower(5, 1, 1).unwrap();
        let z = f25.primitive_root_of_unity(3).unwrap();
        assert_ne!(z, f25.one());
        assert_eq!(f25.pow(z, 3), f25.one());
        assert!(matches!(
            f25.primitive_root_of_unity(7),
            Err(FieldError::NoRootOfUnity { n: 7, group: 24 })
        ));
        let f49 = make_field_tower(7, 1, 1).unwrap();
        let w = f49.primitive_root_of_unity(4).unwrap();
        assert_eq!(f49.multiplicative_order(w).unwrap(), 4);
    }

    #[test]
    fn table_and_schoolbook_paths_agree() {
        // F_{2^10} and F_{13^2} are tabulated; compare against schoolbook
        for (p, e) in [(2u64, 5u32), (13, 1), (3, 2)] {
            let f = make_field_tower(p, e, 1).unwrap();
            assert!(f.tables.is_some());
            let mut rng = ChaCha8Rng::seed_from_u64(p);
            for _ in 0..500 {
                let (x, y) = (f.random(&mut rng), f.random(&mut rng));
                assert_eq!(f.mul(x, y).packed, f.mul_schoolbook(x.packed, y.packed));
            }
        }
    }

    #[test]
    fn nth_roots_match_brute_force() {
        let f = make_field_tower(3, 2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2u64, 4, 5, 10] {
            for _ in 0..20 {
                let c = f.random(&mut rng);
                let brute: Vec<_> = f.elements().filter(|&x| f.pow(x, n) == c).collect();
                assert_eq!(f.nth_roots(c, n), brute, "n = {n}");
            }
        }
    }
}
