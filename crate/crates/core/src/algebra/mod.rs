//! Ring and field arithmetic the algorithms evaluate over.
//!
//! Rings are described by a context value (modulus, irreducible polynomial,
//! group dimension, truncation degree) implementing [`Ring`]; elements are
//! plain data interpreted through that context. Nothing in here draws
//! randomness: callers sample elements and pass them in.

use std::fmt::Debug;

mod gf2m;
mod group_algebra;
mod prime;
mod residue;
mod truncated;

pub use gf2m::{is_irreducible_gf2, make_binary_field, BinaryField, Gf2m};
pub use group_algebra::{ga_mul, GroupAlgebra, GroupAlgebraElem};
pub use prime::{interpolate_univariate, is_prime, primes_up_to, random_prime, PrimeField, UnivariatePolyPF};
pub use residue::{crt_combine, ResidueRing};
pub use truncated::{TruncatedPoly, TruncatedPolyRing};

/// A commutative ring with unity.
pub trait Ring: Clone + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    /// Image of an integer under the canonical map `Z -> R`.
    fn embed(&self, mut v: u64) -> Self::Elem {
        let mut acc = self.zero();
        let mut pow = self.one();
        while v > 0 {
            if v & 1 == 1 {
                acc = self.add(&acc, &pow);
            }
            pow = self.add(&pow, &pow);
            v >>= 1;
        }
        acc
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
}
