//! Laplacians, puncturing and determinant kernels.
//!
//! Four kernels are provided:
//! - [`det_gauss`]: Gaussian elimination over a field.
//! - [`det_division_free`]: Berkowitz's algorithm over any commutative ring.
//! - [`det_residue`]: elimination over Z/p^k pivoting on minimum p-adic valuation.
//! - [`det_bareiss`]: fraction-free elimination over the integers.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{Field, ResidueRing, Ring};
use crate::error::{invalid, Result};
use crate::graph::Digraph;

/// Dense square matrix with a label per row/column index.
///
/// Labels are vertex ids (or column tags) and survive puncturing.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<E> {
    order: usize,
    entries: Vec<E>,
    labels: Vec<usize>,
}

impl<E: Clone> SquareMatrix<E> {
    pub fn from_fn(labels: Vec<usize>, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let order = labels.len();
        let mut entries = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                entries.push(f(i, j));
            }
        }
        SquareMatrix { order, entries, labels }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self> {
        let order = rows.len();
        if rows.iter().any(|r| r.len() != order) {
            return Err(invalid("matrix rows must all have length equal to the row count"));
        }
        Ok(SquareMatrix {
            order,
            entries: rows.into_iter().flatten().collect(),
            labels: (0..order).collect(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.entries[i * self.order + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.entries[i * self.order + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    pub fn position(&self, label: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// Deletes the row and column carrying `label`.
    pub fn puncture(&self, label: usize) -> Result<Self> {
        let idx = self
            .position(label)
            .ok_or_else(|| invalid(format!("no row/column labelled {label}")))?;
        let keep: Vec<usize> = (0..self.order).filter(|&i| i != idx).collect();
        let labels = keep.iter().map(|&i| self.labels[i]).collect();
        Ok(SquareMatrix::from_fn(labels, |i, j| self.get(keep[i], keep[j]).clone()))
    }

    pub fn map<F, T: Clone>(&self, f: F) -> SquareMatrix<T>
    where
        F: FnMut(&E) -> T,
    {
        SquareMatrix {
            order: self.order,
            entries: self.entries.iter().map(f).collect(),
            labels: self.labels.clone(),
        }
    }
}

/// Arc weights aligned with [`Digraph::arcs`].
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMap<E> {
    weights: Vec<E>,
}

impl<E: Clone> WeightMap<E> {
    pub fn from_fn(g: &Digraph, mut f: impl FnMut(usize, usize) -> E) -> Self {
        WeightMap {
            weights: g.arcs().iter().map(|&(u, v)| f(u, v)).collect(),
        }
    }

    pub fn uniform(g: &Digraph, value: E) -> Self {
        WeightMap {
            weights: vec![value; g.arc_count()],
        }
    }

    /// Weights listed in arc order.
    pub fn from_vec(weights: Vec<E>) -> Self {
        WeightMap { weights }
    }

    pub fn weights(&self) -> &[E] {
        &self.weights
    }

    pub fn get(&self, g: &Digraph, u: usize, v: usize) -> Option<&E> {
        g.arc_index(u, v).and_then(|i| self.weights.get(i))
    }
}

/// Laplacian with in-arc weight sums on the diagonal and `-x_uv` at each
/// arc `(u, v)`. Every column sums to zero.
pub fn build_laplacian<R: Ring>(ring: &R, g: &Digraph, w: &WeightMap<R::Elem>) -> Result<SquareMatrix<R::Elem>> {
    if w.weights.len() != g.arc_count() {
        return Err(invalid(format!(
            "weight map covers {} arcs, graph has {}",
            w.weights.len(),
            g.arc_count()
        )));
    }
    let n = g.n();
    let mut m = SquareMatrix::from_fn((0..n).collect(), |_, _| ring.zero());
    for (&(u, v), x) in g.arcs().iter().zip(&w.weights) {
        let diag = ring.add(m.get(v, v), x);
        m.set(v, v, diag);
        m.set(u, v, ring.neg(x));
    }
    Ok(m)
}

/// Determinant over a field by Gaussian elimination. The empty matrix has
/// determinant one.
pub fn det_gauss<F: Field>(field: &F, m: &SquareMatrix<F::Elem>) -> F::Elem {
    let n = m.order;
    let mut a = m.entries.clone();
    let mut det = field.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !field.is_zero(&a[r * n + c])) else {
            return field.zero();
        };
        if p != c {
            for j in c..n {
                a.swap(p * n + j, c * n + j);
            }
            det = field.neg(&det);
        }
        let pivot = a[c * n + c].clone();
        det = field.mul(&det, &pivot);
        let inv = field.inv(&pivot).expect("nonzero pivot");
        for r in c + 1..n {
            if field.is_zero(&a[r * n + c]) {
                continue;
            }
            let f = field.mul(&a[r * n + c], &inv);
            for j in c + 1..n {
                let t = field.mul(&f, &a[c * n + j]);
                a[r * n + j] = field.sub(&a[r * n + j], &t);
            }
        }
    }
    det
}

/// Berkowitz's division-free determinant over a commutative ring.
///
/// Builds the characteristic polynomial of each leading principal submatrix
/// from the previous one by a Toeplitz product, using `O(n^4)` ring
/// multiplications and no inverses.
pub fn det_division_free<R: Ring>(ring: &R, m: &SquareMatrix<R::Elem>) -> R::Elem {
    let n = m.order;
    if n == 0 {
        return ring.one();
    }
    let mut charpoly = vec![ring.one()];
    for r in 1..=n {
        let last = r - 1;
        let mut toeplitz = Vec::with_capacity(r + 1);
        toeplitz.push(ring.one());
        toeplitz.push(ring.neg(m.get(last, last)));

        // T[i+2] = -R M^i S, where M is the leading (r-1)x(r-1) block,
        // R the last row and S the last column restricted to it.
        let mut v: Vec<R::Elem> = (0..last).map(|i| m.get(i, last).clone()).collect();
        for i in 0..last {
            let mut dot = ring.zero();
            for (j, x) in v.iter().enumerate() {
                let rj = m.get(last, j);
                if ring.is_zero(rj) || ring.is_zero(x) {
                    continue;
                }
                ring.add_assign(&mut dot, &ring.mul(rj, x));
            }
            toeplitz.push(ring.neg(&dot));
            if i + 1 < last {
                v = (0..last)
                    .map(|a| {
                        let mut acc = ring.zero();
                        for (b, x) in v.iter().enumerate() {
                            let mab = m.get(a, b);
                            if ring.is_zero(mab) || ring.is_zero(x) {
                                continue;
                            }
                            ring.add_assign(&mut acc, &ring.mul(mab, x));
                        }
                        acc
                    })
                    .collect();
            }
        }

        let next: Vec<R::Elem> = (0..=r)
            .map(|i| {
                let mut acc = ring.zero();
                for j in 0..=i.min(r - 1) {
                    let t = &toeplitz[i - j];
                    if ring.is_zero(t) || ring.is_zero(&charpoly[j]) {
                        continue;
                    }
                    ring.add_assign(&mut acc, &ring.mul(t, &charpoly[j]));
                }
                acc
            })
            .collect();
        charpoly = next;
    }
    let det = charpoly.pop().expect("charpoly has n+1 coefficients");
    if n % 2 == 1 {
        ring.neg(&det)
    } else {
        det
    }
}

/// Determinant by elimination using only invertible pivots.
///
/// `inverse` returns the inverse of a unit and `None` otherwise. Returns
/// `None` when some column has no unit at or below the diagonal. In a
/// local ring that happens exactly when the matrix is singular modulo the
/// maximal ideal.
pub fn det_unit_pivot<R: Ring>(
    ring: &R,
    m: &SquareMatrix<R::Elem>,
    inverse: impl Fn(&R::Elem) -> Option<R::Elem>,
) -> Option<R::Elem> {
    let n = m.order;
    let mut a = m.entries.clone();
    let mut det = ring.one();
    for c in 0..n {
        let (p, inv) = (c..n).find_map(|r| inverse(&a[r * n + c]).map(|inv| (r, inv)))?;
        if p != c {
            for j in c..n {
                a.swap(p * n + j, c * n + j);
            }
            det = ring.neg(&det);
        }
        det = ring.mul(&det, &a[c * n + c]);
        for r in c + 1..n {
            if ring.is_zero(&a[r * n + c]) {
                continue;
            }
            let f = ring.mul(&a[r * n + c], &inv);
            for j in c + 1..n {
                if ring.is_zero(&a[c * n + j]) {
                    continue;
                }
                let t = ring.mul(&f, &a[c * n + j]);
                a[r * n + j] = ring.sub(&a[r * n + j], &t);
            }
        }
    }
    Some(det)
}

/// Determinant over Z/p^k by row reduction with full pivoting on minimum
/// p-adic valuation.
///
/// Every entry in the pivot column is divisible by the pivot's p-power, so
/// eliminating it only needs the inverse of the pivot's unit part.
pub fn det_residue(ring: &ResidueRing, m: &SquareMatrix<u64>) -> u64 {
    let n = m.order;
    let modulus = ring.modulus();
    let p = ring.prime();
    let k = ring.exponent();
    let mut a: Vec<u64> = m.entries.iter().map(|&x| x % modulus).collect();
    let mut det = ring.one();
    let mut det_val = 0u32;
    let mut negate = false;
    for c in 0..n {
        let mut best = (k, c, c);
        'search: for r in c..n {
            for j in c..n {
                let v = ring.valuation(a[r * n + j]);
                if v < best.0 {
                    best = (v, r, j);
                    if v == 0 {
                        break 'search;
                    }
                }
            }
        }
        let (v, pr, pc) = best;
        if v >= k {
            return 0;
        }
        det_val += v;
        if det_val >= k {
            return 0;
        }
        if pr != c {
            for j in 0..n {
                a.swap(pr * n + j, c * n + j);
            }
            negate = !negate;
        }
        if pc != c {
            for r in 0..n {
                a.swap(r * n + pc, r * n + c);
            }
            negate = !negate;
        }
        let pivot = a[c * n + c];
        det = ring.mul(&det, &pivot);
        let pv = p.pow(v);
        let unit_inv = ring.unit_inverse(pivot / pv).expect("unit part of pivot is invertible");
        for r in c + 1..n {
            let x = a[r * n + c];
            if x == 0 {
                continue;
            }
            let f = ring.mul(&(x / pv), &unit_inv);
            for j in c..n {
                let t = ring.mul(&f, &a[c * n + j]);
                a[r * n + j] = ring.sub(&a[r * n + j], &t);
            }
            debug_assert_eq!(a[r * n + c], 0);
        }
    }
    if negate {
        ring.neg(&det)
    } else {
        det
    }
}

/// Integer determinant by Bareiss fraction-free elimination.
///
/// Runs in `i128` when the Hadamard bound shows intermediates fit, and in
/// arbitrary precision otherwise.
pub fn det_bareiss(m: &SquareMatrix<i64>) -> BigInt {
    let n = m.order;
    let mut log2_bound = 0.0f64;
    for i in 0..n {
        let norm2: f64 = m.row(i).iter().map(|&x| (x as f64) * (x as f64)).sum();
        if norm2 == 0.0 {
            return BigInt::zero();
        }
        log2_bound += 0.5 * norm2.log2();
    }
    // Bareiss intermediates are products of two minors, each below the bound.
    if 2.0 * log2_bound + 4.0 < 126.0 {
        let a: Vec<i128> = m.entries.iter().map(|&x| x as i128).collect();
        BigInt::from(bareiss_i128(n, a))
    } else {
        let a: Vec<BigInt> = m.entries.iter().map(|&x| BigInt::from(x)).collect();
        bareiss_big(n, a)
    }
}

fn bareiss_i128(n: usize, mut a: Vec<i128>) -> i128 {
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k * n + k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| a[r * n + k] != 0) else {
                return 0;
            };
            for j in 0..n {
                a.swap(p * n + j, k * n + j);
            }
            sign = -sign;
        }
        let akk = a[k * n + k];
        for i in k + 1..n {
            let aik = a[i * n + k];
            for j in k + 1..n {
                a[i * n + j] = (a[i * n + j] * akk - aik * a[k * n + j]) / prev;
            }
        }
        prev = akk;
    }
    sign * a[n * n - 1]
}

fn bareiss_big(n: usize, mut a: Vec<BigInt>) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                a.swap(p * n + j, k * n + j);
            }
            negate = !negate;
        }
        let akk = a[k * n + k].clone();
        for i in k + 1..n {
            let aik = a[i * n + k].clone();
            for j in k + 1..n {
                let num = &a[i * n + j] * &akk - &aik * &a[k * n + j];
                a[i * n + j] = num / &prev;
            }
        }
        prev = akk;
    }
    let d = a[n * n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Number of spanning out-branchings rooted at `r`: the integer determinant
/// of the Laplacian punctured at `r` with unit weights.
pub fn count_out_branchings(g: &Digraph, r: usize) -> Result<BigUint> {
    if r >= g.n() {
        return Err(invalid(format!("root {r} out of range (n = {})", g.n())));
    }
    let n = g.n();
    let mut m = SquareMatrix::from_fn((0..n).collect(), |_, _| 0i64);
    for &(u, v) in g.arcs() {
        m.entries[v * n + v] += 1;
        m.entries[u * n + v] = -1;
    }
    let det = det_bareiss(&m.puncture(r)?);
    debug_assert!(!det.is_negative());
    Ok(det.to_biguint().unwrap_or_default())
}

/// Convenience: [`count_out_branchings`] as `u128` when it fits.
pub fn count_out_branchings_u128(g: &Digraph, r: usize) -> Result<Option<u128>> {
    Ok(count_out_branchings(g, r)?.to_u128())
}
