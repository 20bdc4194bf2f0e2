use super::{BinaryField, Gf2m, Ring};
use crate::error::{invalid, Result};

/// Element of GF(2^m)[(Z/2)^k]: one coefficient per group element, group
/// elements encoded as `k`-bit masks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAlgebraElem {
    pub coeffs: Vec<Gf2m>,
}

/// The group algebra of (Z/2)^k over a binary field.
///
/// Every `unit(g) + identity` squares to zero here, which is what makes it a
/// multilinearity sieve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAlgebra {
    field: BinaryField,
    k: u32,
}

/// Dimension cap; multiplication is a naive `4^k` convolution.
const MAX_DIM: u32 = 12;

impl GroupAlgebra {
    pub fn new(field: BinaryField, k: u32) -> Result<Self> {
        if k > MAX_DIM {
            return Err(invalid(format!("group algebra dimension {k} exceeds {MAX_DIM}")));
        }
        Ok(GroupAlgebra { field, k })
    }

    pub fn field(&self) -> &BinaryField {
        &self.field
    }

    pub fn dim(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> usize {
        1 << self.k
    }

    pub fn identity(&self) -> GroupAlgebraElem {
        self.unit(0)
    }

    /// The basis element of group element `g`.
    pub fn unit(&self, g: usize) -> GroupAlgebraElem {
        let mut coeffs = vec![Gf2m::ZERO; self.size()];
        coeffs[g] = Gf2m::ONE;
        GroupAlgebraElem { coeffs }
    }

    pub fn scalar(&self, c: Gf2m) -> GroupAlgebraElem {
        let mut coeffs = vec![Gf2m::ZERO; self.size()];
        coeffs[0] = c;
        GroupAlgebraElem { coeffs }
    }

    pub fn scale(&self, x: &GroupAlgebraElem, c: Gf2m) -> GroupAlgebraElem {
        GroupAlgebraElem {
            coeffs: x.coeffs.iter().map(|&a| self.field.mul_elem(a, c)).collect(),
        }
    }

    fn check(&self, x: &GroupAlgebraElem) -> Result<()> {
        if x.coeffs.len() != self.size() {
            return Err(invalid(format!(
                "element has {} coefficients, algebra has dimension 2^{}",
                x.coeffs.len(),
                self.k
            )));
        }
        Ok(())
    }

    #[inline]
    fn convolve(&self, x: &[Gf2m], y: &[Gf2m], out: &mut [Gf2m]) {
        for (g1, &a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (g2, &b) in y.iter().enumerate() {
                let prod = self.field.mul_elem(a, b);
                out[g1 ^ g2].0 ^= prod.0;
            }
        }
    }
}

/// Xor-convolution product, checking both operands belong to `alg`.
pub fn ga_mul(alg: &GroupAlgebra, x: &GroupAlgebraElem, y: &GroupAlgebraElem) -> Result<GroupAlgebraElem> {
    alg.check(x)?;
    alg.check(y)?;
    Ok(alg.mul(x, y))
}

impl Ring for GroupAlgebra {
    type Elem = GroupAlgebraElem;

    fn zero(&self) -> GroupAlgebraElem {
        GroupAlgebraElem {
            coeffs: vec![Gf2m::ZERO; self.size()],
        }
    }
    fn one(&self) -> GroupAlgebraElem {
        self.identity()
    }
    fn add(&self, a: &GroupAlgebraElem, b: &GroupAlgebraElem) -> GroupAlgebraElem {
        GroupAlgebraElem {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| Gf2m(x.0 ^ y.0)).collect(),
        }
    }
    fn neg(&self, a: &GroupAlgebraElem) -> GroupAlgebraElem {
        a.clone()
    }
    fn sub(&self, a: &GroupAlgebraElem, b: &GroupAlgebraElem) -> GroupAlgebraElem {
        self.add(a, b)
    }
    fn add_assign(&self, a: &mut GroupAlgebraElem, b: &GroupAlgebraElem) {
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            x.0 ^= y.0;
        }
    }
    fn mul(&self, a: &GroupAlgebraElem, b: &GroupAlgebraElem) -> GroupAlgebraElem {
        debug_assert_eq!(a.coeffs.len(), self.size());
        debug_assert_eq!(b.coeffs.len(), self.size());
        let mut out = self.zero();
        self.convolve(&a.coeffs, &b.coeffs, &mut out.coeffs);
        out
    }
    fn is_zero(&self, a: &GroupAlgebraElem) -> bool {
        a.coeffs.iter().all(|c| c.is_zero())
    }
    fn embed(&self, v: u64) -> GroupAlgebraElem {
        self.scalar(Gf2m((v & 1) as u32))
    }
}
