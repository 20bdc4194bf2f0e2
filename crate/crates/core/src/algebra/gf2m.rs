use std::fmt;
use std::sync::Arc;

use super::{Field, Ring};
use crate::error::{invalid, Result};

/// Element of GF(2^m): the low `m` bits hold a polynomial residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Gf2m(pub u32);

impl Gf2m {
    pub const ZERO: Gf2m = Gf2m(0);
    pub const ONE: Gf2m = Gf2m(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Largest extension degree supported; products of two residues fit `u64`.
const MAX_DEGREE: u32 = 32;
/// Log/antilog tables are built up to this degree.
const TABLE_DEGREE: u32 = 16;

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// The field GF(2^m) = GF(2)[x] / (f) for an irreducible `f` of degree `m`.
#[derive(Clone)]
pub struct BinaryField {
    m: u32,
    /// Bit `i` is the coefficient of `x^i`, including the leading `x^m`.
    modulus: u64,
    tables: Option<Arc<Tables>>,
}

impl fmt::Debug for BinaryField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {:#x}", self.m, self.modulus)
    }
}

impl PartialEq for BinaryField {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for BinaryField {}

/// Carry-less product of two polynomials of degree < 32.
#[inline]
fn clmul(a: u64, b: u64) -> u64 {
    let mut acc = 0u64;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

fn degree(p: u64) -> u32 {
    63 - p.leading_zeros()
}

fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

/// Irreducibility over GF(2) by trial division with every polynomial of
/// degree `1..=deg/2`.
pub fn is_irreducible_gf2(poly: u64) -> bool {
    if poly < 2 {
        return false;
    }
    let m = degree(poly);
    if m == 0 {
        return false;
    }
    let max = 1u64 << (m / 2 + 1);
    (2..max).all(|d| poly_rem(poly, d) != 0)
}

impl BinaryField {
    /// Builds GF(2^m) from an explicit modulus (leading bit included).
    pub fn with_modulus(modulus: u64) -> Result<Self> {
        let m = if modulus < 2 { 0 } else { degree(modulus) };
        if m == 0 || m > MAX_DEGREE {
            return Err(invalid(format!("extension degree must be in 1..={MAX_DEGREE}")));
        }
        if !is_irreducible_gf2(modulus) {
            return Err(invalid(format!("{modulus:#x} is reducible over GF(2)")));
        }
        let mut field = BinaryField {
            m,
            modulus,
            tables: None,
        };
        if m <= TABLE_DEGREE {
            field.tables = Some(Arc::new(field.build_tables()));
        }
        Ok(field)
    }

    /// GF(2^m) with the lexicographically smallest irreducible modulus.
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 || m > MAX_DEGREE {
            return Err(invalid(format!("extension degree must be in 1..={MAX_DEGREE}")));
        }
        let top = 1u64 << m;
        let modulus = (0..top)
            .map(|low| top | low)
            .filter(|p| p & 1 == 1 || m == 1)
            .find(|&p| is_irreducible_gf2(p))
            .expect("an irreducible polynomial exists in every degree");
        Self::with_modulus(modulus)
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u64 {
        1u64 << self.m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Element from raw bits, reduced into the field.
    pub fn elem(&self, bits: u64) -> Gf2m {
        Gf2m(poly_rem(bits, self.modulus) as u32)
    }

    #[inline]
    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        poly_rem(clmul(a as u64, b as u64), self.modulus) as u32
    }

    fn build_tables(&self) -> Tables {
        let q = self.order() as usize;
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let gen = (2..q as u32)
            .chain(std::iter::once(1))
            .find(|&g| factors.iter().all(|&f| self.pow_slow(g, order / f) != 1))
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * (q - 1)];
        let mut log = vec![0u32; q];
        let mut x = 1u32;
        for i in 0..q - 1 {
            exp[i] = x;
            exp[i + q - 1] = x;
            log[x as usize] = i as u32;
            x = self.mul_slow(x, gen);
        }
        Tables { exp, log }
    }

    fn pow_slow(&self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, a);
            }
            a = self.mul_slow(a, a);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn mul_elem(&self, a: Gf2m, b: Gf2m) -> Gf2m {
        if a.0 == 0 || b.0 == 0 {
            return Gf2m::ZERO;
        }
        match &self.tables {
            Some(t) => Gf2m(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            None => Gf2m(self.mul_slow(a.0, b.0)),
        }
    }

    /// Uniform element; zero allowed.
    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Gf2m {
        Gf2m(rng.gen_range(0..self.order()) as u32)
    }

    /// Uniform nonzero element.
    pub fn random_nonzero<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Gf2m {
        Gf2m(rng.gen_range(1..self.order()) as u32)
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// GF(2^m) with `m = 2 * ceil(log2 n)`, so that `q = 2^m >= n^2`.
pub fn make_binary_field(n: usize) -> Result<BinaryField> {
    if n < 2 {
        return Err(invalid("binary field sizing needs n >= 2"));
    }
    let log = usize::BITS - (n - 1).leading_zeros();
    BinaryField::new(2 * log)
}

impl Ring for BinaryField {
    type Elem = Gf2m;

    fn zero(&self) -> Gf2m {
        Gf2m::ZERO
    }
    fn one(&self) -> Gf2m {
        Gf2m::ONE
    }
    #[inline]
    fn add(&self, a: &Gf2m, b: &Gf2m) -> Gf2m {
        Gf2m(a.0 ^ b.0)
    }
    #[inline]
    fn neg(&self, a: &Gf2m) -> Gf2m {
        *a
    }
    #[inline]
    fn sub(&self, a: &Gf2m, b: &Gf2m) -> Gf2m {
        Gf2m(a.0 ^ b.0)
    }
    #[inline]
    fn mul(&self, a: &Gf2m, b: &Gf2m) -> Gf2m {
        self.mul_elem(*a, *b)
    }
    fn is_zero(&self, a: &Gf2m) -> bool {
        a.0 == 0
    }
    fn embed(&self, v: u64) -> Gf2m {
        Gf2m((v & 1) as u32)
    }
}

impl Field for BinaryField {
    fn inv(&self, a: &Gf2m) -> Option<Gf2m> {
        if a.0 == 0 {
            return None;
        }
        match &self.tables {
            Some(t) => {
                let q1 = self.order() as u32 - 1;
                Some(Gf2m(t.exp[((q1 - t.log[a.0 as usize]) % q1) as usize]))
            }
            None => Some(Gf2m(self.pow_slow(a.0, self.order() - 2))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizing_follows_instance() {
        let f = make_binary_field(10).unwrap();
        assert_eq!(f.degree(), 8);
        assert_eq!(f.order(), 256);
        assert!(f.order() >= 100);
        let f = make_binary_field(2).unwrap();
        assert_eq!((f.degree(), f.order()), (2, 4));
        for n in 2..300usize {
            let f = make_binary_field(n).unwrap();
            assert!(f.order() >= (n * n) as u64, "n={n}");
        }
        assert!(make_binary_field(1).is_err());
    }

    /// Product of every pair of lower-degree polynomials, to cross-check
    /// the trial-division test from the other direction.
    fn reducible_by_products(m: u32) -> Vec<u64> {
        let mut out = Vec::new();
        for da in 1..m {
            let db = m - da;
            for a in (1u64 << da)..(1u64 << (da + 1)) {
                for b in (1u64 << db)..(1u64 << (db + 1)) {
                    out.push(clmul(a, b));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    #[test]
    fn irreducibility_matches_product_sieve() {
        for m in 1..=8u32 {
            let reducible = reducible_by_products(m);
            for p in (1u64 << m)..(1u64 << (m + 1)) {
                assert_eq!(
                    is_irreducible_gf2(p),
                    reducible.binary_search(&p).is_err(),
                    "poly {p:#b}"
                );
            }
        }
    }

    #[test]
    fn chosen_moduli_are_irreducible() {
        for m in 1..=20 {
            let f = BinaryField::new(m).unwrap();
            assert!(is_irreducible_gf2(f.modulus()));
        }
        assert!(BinaryField::with_modulus(0b101).is_err()); // x^2+1 = (x+1)^2
    }

    #[test]
    fn tables_agree_with_carryless() {
        let f = BinaryField::new(8).unwrap();
        for a in 0..256u32 {
            for b in 0..256u32 {
                assert_eq!(f.mul_elem(Gf2m(a), Gf2m(b)).0, f.mul_slow(a, b));
            }
        }
        // AES field as an independent reference: 0x53 * 0xCA = 1
        let aes = BinaryField::with_modulus(0x11b).unwrap();
        assert_eq!(aes.mul_elem(Gf2m(0x53), Gf2m(0xca)), Gf2m::ONE);
        assert_eq!(aes.mul_elem(Gf2m(0x57), Gf2m(0x83)), Gf2m(0xc1));
    }

    #[test]
    fn inverses_without_tables() {
        let f = BinaryField::new(24).unwrap();
        assert!(f.tables.is_none());
        for a in [1u32, 2, 3, 0x123456, 0xffffff] {
            let inv = f.inv(&Gf2m(a)).unwrap();
            assert_eq!(f.mul(&Gf2m(a), &inv), Gf2m::ONE);
        }
    }
}
