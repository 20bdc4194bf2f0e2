use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::{is_prime, Ring};
use crate::error::{invalid, Error, Result};

/// Moduli at or above this bound are rejected so products fit `u128`
/// comfortably and values fit `u64`.
const MODULUS_LIMIT: u64 = 1 << 62;

/// The residue ring Z/p^k.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidueRing {
    p: u64,
    k: u32,
    modulus: u64,
}

impl ResidueRing {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(invalid(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(invalid("residue exponent must be >= 1"));
        }
        let modulus = p
            .checked_pow(k)
            .filter(|&m| m < MODULUS_LIMIT)
            .ok_or_else(|| invalid(format!("{p}^{k} exceeds 2^62")))?;
        Ok(ResidueRing { p, k, modulus })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn elem(&self, v: u64) -> u64 {
        v % self.modulus
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.modulus as i64) as u64
    }

    /// p-adic valuation, capped at `k` (the valuation of zero).
    pub fn valuation(&self, a: u64) -> u32 {
        let mut a = a % self.modulus;
        if a == 0 {
            return self.k;
        }
        let mut v = 0;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            v += 1;
        }
        v
    }

    /// Inverse of a unit (an element not divisible by p).
    pub fn unit_inverse(&self, a: u64) -> Option<u64> {
        let (mut old_r, mut r) = ((a % self.modulus) as i128, self.modulus as i128);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        if old_r != 1 {
            return None;
        }
        Some(old_s.rem_euclid(self.modulus as i128) as u64)
    }
}

impl Ring for ResidueRing {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.modulus
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.modulus - a
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (*a as u128 * *b as u128 % self.modulus as u128) as u64
    }
    fn embed(&self, v: u64) -> u64 {
        v % self.modulus
    }
}

/// Chinese remaindering of residues `value mod p^k` for distinct primes.
/// Returns `(x, M)` with `M = prod p^k` and `0 <= x < M`.
pub fn crt_combine(residues: &[(u64, u64, u32)]) -> Result<(BigUint, BigUint)> {
    let mut primes: Vec<u64> = residues.iter().map(|r| r.1).collect();
    primes.sort_unstable();
    if primes.windows(2).any(|w| w[0] == w[1]) {
        return Err(invalid("duplicate prime in CRT input"));
    }
    let mut x = BigUint::zero();
    let mut m = BigUint::one();
    for &(value, p, k) in residues {
        let ring = ResidueRing::new(p, k)?;
        let q = ring.modulus();
        let target = value % q;
        // x' = x + m * ((target - x) * m^{-1} mod q)
        let x_mod = (&x % q).to_u64().expect("reduced below q");
        let m_mod = (&m % q).to_u64().expect("reduced below q");
        let m_inv = ring
            .unit_inverse(m_mod)
            .ok_or_else(|| Error::Algebra(format!("moduli not coprime at p = {p}")))?;
        let delta = ring.mul(&ring.sub(&target, &x_mod), &m_inv);
        x += &m * delta;
        m *= q;
        debug_assert_eq!((&x % q).to_u64(), Some(target));
    }
    Ok((x, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn construction_guards() {
        assert!(ResidueRing::new(4, 2).is_err());
        assert!(ResidueRing::new(3, 0).is_err());
        assert!(ResidueRing::new(2, 62).is_err());
        assert!(ResidueRing::new(2, 61).is_ok());
    }

    #[test]
    fn zero_divisors() {
        let r = ResidueRing::new(3, 2).unwrap();
        assert_eq!(r.mul(&3, &3), 0);
        assert_eq!(r.mul(&3, &6), 0);
        assert_eq!(r.unit_inverse(3), None);
        assert_eq!(r.mul(&r.unit_inverse(4).unwrap(), &4), 1);
        assert_eq!(r.valuation(0), 2);
        assert_eq!(r.valuation(6), 1);
        assert_eq!(r.valuation(5), 0);
        let f = ResidueRing::new(7, 1).unwrap();
        assert!((1..7).all(|a| f.unit_inverse(a).is_some()));
    }

    #[test]
    fn crt_examples() {
        let (x, m) = crt_combine(&[(1, 2, 2), (2, 3, 1)]).unwrap();
        assert_eq!((x, m), (BigUint::from(5u32), BigUint::from(12u32)));
        let (x, m) = crt_combine(&[(10, 5, 2)]).unwrap();
        assert_eq!((x, m), (BigUint::from(10u32), BigUint::from(25u32)));
        assert!(crt_combine(&[(1, 3, 1), (2, 3, 2)]).is_err());
        let (x, m) = crt_combine(&[]).unwrap();
        assert_eq!((x, m), (BigUint::zero(), BigUint::one()));
    }

    proptest! {
        #[test]
        fn crt_reconstructs(x in any::<u128>(), ks in proptest::collection::vec(1u32..4, 6)) {
            let primes = [2u64, 3, 5, 7, 11, 13];
            let input: Vec<_> = primes.iter().zip(&ks).map(|(&p, &k)| {
                let q = p.pow(k) as u128;
                ((x % q) as u64, p, k)
            }).collect();
            let (v, m) = crt_combine(&input).unwrap();
            prop_assert_eq!(&v, &(BigUint::from(x) % &m));
        }
    }
}
