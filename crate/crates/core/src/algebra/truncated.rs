use super::Ring;

/// Polynomial in `t` with coefficients in a base ring, all terms above the
/// cap discarded.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedPoly<E> {
    pub coeffs: Vec<E>,
}

/// R[t] / (t^(cap+1)).
#[derive(Debug, Clone)]
pub struct TruncatedPolyRing<R: Ring> {
    base: R,
    cap: usize,
}

impl<R: Ring> TruncatedPolyRing<R> {
    pub fn new(base: R, cap: usize) -> Self {
        TruncatedPolyRing { base, cap }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn constant(&self, c: R::Elem) -> TruncatedPoly<R::Elem> {
        let mut p = self.zero();
        p.coeffs[0] = c;
        p
    }

    /// `c0 + c1 t`, truncated if `cap == 0`.
    pub fn linear(&self, c0: R::Elem, c1: R::Elem) -> TruncatedPoly<R::Elem> {
        let mut p = self.constant(c0);
        if self.cap >= 1 {
            p.coeffs[1] = c1;
        }
        p
    }

    /// Builds from a coefficient list, dropping terms above the cap.
    pub fn from_coeffs(&self, coeffs: Vec<R::Elem>) -> TruncatedPoly<R::Elem> {
        let mut p = self.zero();
        for (slot, c) in p.coeffs.iter_mut().zip(coeffs) {
            *slot = c;
        }
        p
    }

    pub fn coeff<'a>(&self, p: &'a TruncatedPoly<R::Elem>, deg: usize) -> &'a R::Elem {
        &p.coeffs[deg]
    }
}

impl<R: Ring> Ring for TruncatedPolyRing<R> {
    type Elem = TruncatedPoly<R::Elem>;

    fn zero(&self) -> Self::Elem {
        TruncatedPoly {
            coeffs: vec![self.base.zero(); self.cap + 1],
        }
    }
    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        TruncatedPoly {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| self.base.add(x, y))
                .collect(),
        }
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        TruncatedPoly {
            coeffs: a.coeffs.iter().map(|x| self.base.neg(x)).collect(),
        }
    }
    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            self.base.add_assign(x, y);
        }
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut out = self.zero();
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs[..=self.cap - i].iter().enumerate() {
                if self.base.is_zero(y) {
                    continue;
                }
                let prod = self.base.mul(x, y);
                self.base.add_assign(&mut out.coeffs[i + j], &prod);
            }
        }
        out
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.coeffs.iter().all(|c| self.base.is_zero(c))
    }
    fn embed(&self, v: u64) -> Self::Elem {
        self.constant(self.base.embed(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimeField;
    use proptest::prelude::*;

    fn full_product(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(x, y));
            }
        }
        out
    }

    proptest! {
        #[test]
        fn truncation_commutes_with_product(
            a in proptest::collection::vec(0u64..97, 1..8),
            b in proptest::collection::vec(0u64..97, 1..8),
            cap in 0usize..8,
        ) {
            let f = PrimeField::new(97).unwrap();
            let ring = TruncatedPolyRing::new(f, cap);
            let prod = ring.mul(&ring.from_coeffs(a.clone()), &ring.from_coeffs(b.clone()));
            let expect = ring.from_coeffs(full_product(&f, &a, &b));
            prop_assert_eq!(prod, expect);
        }
    }

    #[test]
    fn cap_zero_is_base_ring() {
        let f = PrimeField::new(13).unwrap();
        let ring = TruncatedPolyRing::new(f, 0);
        let a = ring.linear(3, 5);
        assert_eq!(a.coeffs, vec![3]);
        assert_eq!(ring.mul(&a, &ring.constant(4)).coeffs, vec![12]);
    }
}
