use super::{Field, Ring};
use crate::error::{invalid, Error, Result};

/// The prime field GF(p), elements stored as `u64` in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(invalid(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, v: u64) -> u64 {
        v % self.p
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn embed(&self, v: u64) -> u64 {
        v % self.p
    }
}

impl Field for PrimeField {
    fn inv(&self, a: &u64) -> Option<u64> {
        if (*a).is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn primes_up_to(q: u64) -> Vec<u64> {
    (2..=q).filter(|&p| is_prime(p)).collect()
}

/// Uniform prime in `[lo, hi)` by rejection.
pub fn random_prime<R: rand::Rng + ?Sized>(lo: u64, hi: u64, rng: &mut R) -> u64 {
    loop {
        let c = rng.gen_range(lo..hi) | 1;
        if c < hi && is_prime(c) {
            return c;
        }
    }
}

/// Polynomial over GF(p) in one variable with an explicit degree bound
/// (`coeffs.len() - 1`); the top stored coefficient may be zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariatePolyPF {
    pub p: u64,
    pub coeffs: Vec<u64>,
}

impl UnivariatePolyPF {
    pub fn degree_bound(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = PrimeField { p: self.p };
        self.coeffs.iter().rev().fold(0, |acc, c| f.add(&f.mul(&acc, &x), c))
    }

    /// Highest index with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0)
    }
}

/// Lagrange interpolation of the unique polynomial of degree `<= d` through
/// the points. Uses the first `d + 1` points and checks any extra ones.
pub fn interpolate_univariate(field: &PrimeField, points: &[(u64, u64)], d: usize) -> Result<UnivariatePolyPF> {
    let p = field.modulus();
    if (p as u128) <= d as u128 + 1 {
        return Err(invalid(format!("field order {p} too small for degree bound {d}")));
    }
    if points.len() < d + 1 {
        return Err(invalid(format!(
            "need {} points for degree bound {d}, got {}",
            d + 1,
            points.len()
        )));
    }
    let pts: Vec<(u64, u64)> = points.iter().map(|&(x, y)| (x % p, y % p)).collect();
    let mut xs: Vec<u64> = pts.iter().map(|&(x, _)| x).collect();
    xs.sort_unstable();
    if xs.windows(2).any(|w| w[0] == w[1]) {
        return Err(invalid("repeated interpolation abscissa"));
    }
    let base = &pts[..d + 1];

    // master = prod (x - x_j)
    let mut master = vec![0u64; d + 2];
    master[0] = 1;
    for (j, &(xj, _)) in base.iter().enumerate() {
        let neg = field.neg(&xj);
        for i in (0..=j + 1).rev() {
            let shifted = if i > 0 { master[i - 1] } else { 0 };
            master[i] = field.add(&shifted, &field.mul(&master[i], &neg));
        }
    }

    let mut coeffs = vec![0u64; d + 1];
    let mut quotient = vec![0u64; d + 1];
    for (i, &(xi, yi)) in base.iter().enumerate() {
        // quotient = master / (x - xi), synthetic division from the top
        let mut carry = 0u64;
        for deg in (0..=d).rev() {
            carry = field.add(&master[deg + 1], &field.mul(&carry, &xi));
            quotient[deg] = carry;
        }
        let mut denom = 1u64;
        for (j, &(xj, _)) in base.iter().enumerate() {
            if j != i {
                denom = field.mul(&denom, &field.sub(&xi, &xj));
            }
        }
        let scale = field.mul(&yi, &field.inv(&denom).expect("distinct abscissae"));
        for (c, q) in coeffs.iter_mut().zip(&quotient) {
            *c = field.add(c, &field.mul(q, &scale));
        }
    }
    let poly = UnivariatePolyPF { p, coeffs };
    for &(x, y) in &pts[d + 1..] {
        if poly.eval(x) != y {
            return Err(Error::Algebra(format!(
                "points are not on a polynomial of degree <= {d}"
            )));
        }
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_primes() {
        let ps = primes_up_to(30);
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(2_147_483_649));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2,3,5,7
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn interpolates_square() {
        let f = PrimeField::new(101).unwrap();
        let pts: Vec<_> = (0..3).map(|x| (x, x * x)).collect();
        let poly = interpolate_univariate(&f, &pts, 2).unwrap();
        assert_eq!(poly.coeffs, vec![0, 0, 1]);
    }

    #[test]
    fn constant_samples() {
        let f = PrimeField::new(13).unwrap();
        let pts: Vec<_> = (0..5).map(|x| (x, 7)).collect();
        let poly = interpolate_univariate(&f, &pts, 4).unwrap();
        assert_eq!(poly.coeffs, vec![7, 0, 0, 0, 0]);
        assert_eq!(poly.degree(), Some(0));
    }

    #[test]
    fn interpolation_errors() {
        let f = PrimeField::new(101).unwrap();
        assert!(interpolate_univariate(&f, &[(1, 1), (1, 2), (3, 3)], 2).is_err());
        assert!(interpolate_univariate(&f, &[(1, 1), (2, 2)], 2).is_err());
        let small = PrimeField::new(3).unwrap();
        assert!(interpolate_univariate(&small, &[(0, 1), (1, 1), (2, 1)], 2).is_err());
        // extra point off the line
        assert!(interpolate_univariate(&f, &[(0, 0), (1, 1), (2, 5)], 1).is_err());
    }

    proptest! {
        #[test]
        fn interpolation_round_trip(coeffs in proptest::collection::vec(0u64..1_000_003, 1..12)) {
            let f = PrimeField::new(1_000_003).unwrap();
            let poly = UnivariatePolyPF { p: 1_000_003, coeffs: coeffs.clone() };
            let d = coeffs.len() - 1;
            let pts: Vec<_> = (0..=d as u64 + 2).map(|x| (x * 7 + 1, poly.eval(x * 7 + 1))).collect();
            let back = interpolate_univariate(&f, &pts, d).unwrap();
            prop_assert_eq!(back.coeffs, coeffs);
        }
    }
}
