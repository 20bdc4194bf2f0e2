//! Out-branchings with many internal vertices or many leaves.
//!
//! [`detect_k_internal`] evaluates the punctured Laplacian determinant with
//! `x_uv = (1 + t r_uv Y_u) z_uv` over truncated polynomials in `t` whose
//! coefficients live in the group algebra of `(Z/2)^k`; `Y_u = g_u + 1`
//! squares to zero, so the `t^k` coefficient only keeps branchings with `k`
//! distinct internal vertices.
//!
//! [`solve_nk_dv`] decides whether a homogeneous polynomial with
//! nonnegative coefficients has a monomial with few distinct variables by
//! random `a`/`b` substitutions; [`detect_k_leaf`] applies it to
//! `y_r det L_r` with `x_uv = y_u`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{
    interpolate_univariate, make_binary_field, random_prime, BinaryField, Field, Gf2m, GroupAlgebra, PrimeField, Ring,
    TruncatedPoly, TruncatedPolyRing, UnivariatePolyPF,
};
use crate::error::{invalid, Result};
use crate::graph::Digraph;
use crate::matrix::{build_laplacian, count_out_branchings, det_division_free, det_gauss, det_unit_pivot, WeightMap};
use crate::report::{Answer, DetectionReport, RootVerdict};
use num_traits::Zero;

/// Largest `k` accepted by [`detect_k_internal`]; ring products cost `4^k`.
pub const MAX_INTERNAL_K: usize = 6;
/// Lower bound on the probability that `k` uniform vectors span `(Z/2)^k`.
const SPAN_PROBABILITY: f64 = 0.288;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InternalSieveConfig {
    /// Trials per root.
    pub trials: usize,
    pub seed: u64,
    /// Extension degree of the coefficient field GF(2^m).
    pub field_degree: u32,
}

impl InternalSieveConfig {
    /// 100 trials per root over GF(2^m), `m = max(8, 2 ceil(log2 n))`.
    pub fn new(n: usize, seed: u64) -> Self {
        let m = make_binary_field(n.max(2)).map(|f| f.degree()).unwrap_or(8);
        InternalSieveConfig {
            trials: 100,
            seed,
            field_degree: m.max(8),
        }
    }
}

type InternalRing = TruncatedPolyRing<GroupAlgebra>;
type InternalElem = TruncatedPoly<crate::algebra::GroupAlgebraElem>;

fn internal_ring(field: BinaryField, k: usize) -> Result<InternalRing> {
    Ok(TruncatedPolyRing::new(GroupAlgebra::new(field, k as u32)?, k))
}

fn scale(ring: &InternalRing, x: &InternalElem, c: Gf2m) -> InternalElem {
    TruncatedPoly {
        coeffs: x.coeffs.iter().map(|e| ring.base().scale(e, c)).collect(),
    }
}

/// Inverse in the local ring `GF(2^m)[(Z/2)^k][t]/(t^{k+1})`: an element is
/// a unit exactly when the augmentation of its constant term is nonzero.
fn local_inverse(ring: &InternalRing, u: &InternalElem) -> Option<InternalElem> {
    let alg = ring.base();
    let aug = u.coeffs[0].coeffs.iter().fold(0u32, |acc, c| acc ^ c.0);
    let c_inv = alg.field().inv(&Gf2m(aug))?;
    let nil = ring.sub(&scale(ring, u, c_inv), &ring.one());
    // (1 + n)^{-1} = 1 + n + n^2 + ... ; n^{2k+1} = 0
    let mut inv = ring.one();
    for _ in 0..2 * ring.cap() {
        inv = ring.add(&ring.one(), &ring.mul(&nil, &inv));
    }
    Some(scale(ring, &inv, c_inv))
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One evaluation of the `t^k` coefficient of `det L_root`. Returns whether
/// it is nonzero, which certifies an out-branching from `root` with at
/// least `k` internal vertices.
pub fn k_internal_trial<R: Rng + ?Sized>(
    g: &Digraph,
    k: usize,
    root: usize,
    field: &BinaryField,
    rng: &mut R,
) -> Result<bool> {
    if root >= g.n() {
        return Err(invalid(format!("root {root} out of range")));
    }
    let ring = internal_ring(field.clone(), k)?;
    let alg = ring.base();
    let group: Vec<usize> = (0..g.n()).map(|_| rng.gen_range(0..alg.size())).collect();
    let shifted: Vec<_> = group
        .iter()
        .map(|&gu| alg.add(&alg.unit(gu), &alg.identity()))
        .collect();
    let weights = WeightMap::from_fn(g, |u, _| {
        let z = field.random_nonzero(rng);
        let r = field.random_nonzero(rng);
        ring.linear(alg.scalar(z), alg.scale(&shifted[u], field.mul_elem(z, r)))
    });
    let l = build_laplacian(&ring, g, &weights)?.puncture(root)?;
    let det = det_unit_pivot(&ring, &l, |x| local_inverse(&ring, x)).unwrap_or_else(|| det_division_free(&ring, &l));
    Ok(!alg.is_zero(&det.coeffs[k]))
}

/// Is there a spanning out-branching with at least `k` internal vertices?
///
/// `Yes` is always correct. Roots without any spanning out-branching are
/// answered `No` without sampling.
pub fn detect_k_internal(g: &Digraph, k: usize, cfg: &InternalSieveConfig) -> Result<DetectionReport> {
    let n = g.n();
    if n == 0 {
        return Err(invalid("graph has no vertices"));
    }
    if k > n - 1 {
        return Err(invalid(format!("k = {k} exceeds n - 1 = {}", n - 1)));
    }
    if k > MAX_INTERNAL_K {
        return Err(invalid(format!(
            "k = {k} exceeds the supported maximum {MAX_INTERNAL_K}"
        )));
    }
    let field = BinaryField::new(cfg.field_degree)?;
    let mut per_root = Vec::new();
    let mut answer = Answer::No;
    let mut total_run = 0;
    for root in 0..n {
        if count_out_branchings(g, root)?.is_zero() {
            per_root.push(RootVerdict {
                root,
                answer: Answer::No,
                trials_run: 0,
            });
            continue;
        }
        let hit = (0..cfg.trials).into_par_iter().find_first(|&trial| {
            let mut rng = trial_rng(cfg.seed, (root as u64) << 32 | trial as u64);
            k_internal_trial(g, k, root, &field, &mut rng).expect("validated inputs")
        });
        let trials_run = hit.map_or(cfg.trials, |t| t + 1);
        total_run += trials_run;
        per_root.push(RootVerdict {
            root,
            answer: Answer::from_bool(hit.is_some()),
            trials_run,
        });
        if hit.is_some() {
            answer = Answer::Yes;
            break;
        }
    }
    let degree = (n - 1 + k) as f64;
    let per_trial = SPAN_PROBABILITY * (1.0 - degree / field.order() as f64).max(0.0);
    Ok(DetectionReport {
        answer,
        trials: cfg.trials,
        trials_run: total_run,
        seed: cfg.seed,
        field_order: Some(field.order()),
        failure_bound: if answer.is_yes() {
            0.0
        } else {
            (1.0 - per_trial).powi(cfg.trials as i32)
        },
        per_root,
        note: None,
    })
}

/// A polynomial in `n` variables, homogeneous of degree `n` with
/// nonnegative integer coefficients, available through evaluation.
pub trait PolynomialEvaluator: Sync {
    fn num_vars(&self) -> usize;
    /// `P(y)` in `field`.
    fn evaluate(&self, field: &PrimeField, y: &[u64]) -> u64;
}

/// Explicit list of `(coefficient, exponent vector)` terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomialListPoly {
    n: usize,
    terms: Vec<(u64, Vec<u32>)>,
}

impl MonomialListPoly {
    pub fn new(n: usize, terms: Vec<(u64, Vec<u32>)>) -> Result<Self> {
        for (_, e) in &terms {
            if e.len() != n {
                return Err(invalid(format!(
                    "exponent vector has {} entries, expected {n}",
                    e.len()
                )));
            }
            if e.iter().map(|&x| x as usize).sum::<usize>() != n {
                return Err(invalid("every monomial must have total degree n"));
            }
        }
        Ok(MonomialListPoly { n, terms })
    }

    pub fn terms(&self) -> &[(u64, Vec<u32>)] {
        &self.terms
    }
}

impl PolynomialEvaluator for MonomialListPoly {
    fn num_vars(&self) -> usize {
        self.n
    }

    fn evaluate(&self, field: &PrimeField, y: &[u64]) -> u64 {
        self.terms.iter().fold(0, |acc, (c, e)| {
            let term = e
                .iter()
                .zip(y)
                .fold(field.elem(*c), |t, (&d, &v)| field.mul(&t, &field.pow(&v, d as u64)));
            field.add(&acc, &term)
        })
    }
}

/// `y_root det L_root` with `x_uv = y_u`.
#[derive(Debug, Clone, Copy)]
pub struct LeafPolynomial<'a> {
    pub graph: &'a Digraph,
    pub root: usize,
}

impl PolynomialEvaluator for LeafPolynomial<'_> {
    fn num_vars(&self) -> usize {
        self.graph.n()
    }

    fn evaluate(&self, field: &PrimeField, y: &[u64]) -> u64 {
        let w = WeightMap::from_fn(self.graph, |u, _| y[u]);
        let l = build_laplacian(field, self.graph, &w)
            .and_then(|l| l.puncture(self.root))
            .expect("weights match the graph");
        field.mul(&y[self.root], &det_gauss(field, &l))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DvConfig {
    pub k: usize,
    /// Trials per evaluation prime.
    pub budget: usize,
    /// Probability of the `(y <- a, w <- b)` branch.
    pub skew: f64,
    pub s_estimate: Option<usize>,
    /// Evaluation primes; drawn from the seed when empty.
    pub primes: Vec<u64>,
    pub seed: u64,
}

impl DvConfig {
    /// Budget `4^k`, unskewed.
    pub fn new(k: usize, seed: u64) -> Self {
        DvConfig {
            k,
            budget: 4usize.saturating_pow(k as u32),
            skew: 0.5,
            s_estimate: None,
            primes: Vec::new(),
            seed,
        }
    }

    /// Skews the substitution to `k / (k + s)`.
    pub fn with_s_estimate(mut self, s: usize) -> Self {
        self.s_estimate = Some(s);
        if self.k + s > 0 {
            self.skew = self.k as f64 / (self.k + s) as f64;
        }
        self
    }

    fn primes_for(&self, n: usize) -> Result<Vec<u64>> {
        if !self.primes.is_empty() {
            for &p in &self.primes {
                if (p as u128) <= 2 * n as u128 + 1 {
                    return Err(invalid(format!(
                        "evaluation prime {p} must exceed 2n + 1 = {}",
                        2 * n + 1
                    )));
                }
                PrimeField::new(p)?;
            }
            return Ok(self.primes.clone());
        }
        let mut rng = trial_rng(self.seed, u64::MAX);
        let lo = (1u64 << 30).max(2 * n as u64 + 2);
        let first = random_prime(lo, 1 << 31, &mut rng);
        let second = loop {
            let p = random_prime(lo, 1 << 31, &mut rng);
            if p != first {
                break p;
            }
        };
        Ok(vec![first, second])
    }

    /// Per-trial success lower bound `(q^q (1-q)^{1-q})^{k+s}` with `s = k`
    /// unless estimated.
    fn per_trial_bound(&self) -> f64 {
        let q = self.skew;
        let base = q.powf(q) * (1.0 - q).powf(1.0 - q);
        base.powi((self.k + self.s_estimate.unwrap_or(self.k)) as i32)
    }
}

/// The dehomogenized (`b = 1`) substitution of `P(y) w_1 ... w_n`: index `i`
/// with `assignment[i]` takes `y_i = a, w_i = 1`, otherwise `y_i = 1, w_i = a`.
/// Recovered from `2n + 1` evaluations by interpolation.
pub fn dv_trial(poly: &dyn PolynomialEvaluator, field: &PrimeField, assignment: &[bool]) -> Result<UnivariatePolyPF> {
    let n = poly.num_vars();
    if assignment.len() != n {
        return Err(invalid(format!(
            "assignment has {} entries, expected {n}",
            assignment.len()
        )));
    }
    if (field.modulus() as u128) <= 2 * n as u128 + 1 {
        return Err(invalid(format!("prime {} must exceed 2n + 1", field.modulus())));
    }
    let w_to_a = assignment.iter().filter(|&&b| !b).count() as u64;
    let mut y = vec![0u64; n];
    let points: Vec<(u64, u64)> = (1..=2 * n as u64 + 1)
        .map(|tau| {
            for (yi, &to_a) in y.iter_mut().zip(assignment) {
                *yi = if to_a { tau } else { 1 };
            }
            let v = field.mul(&poly.evaluate(field, &y), &field.pow(&tau, w_to_a));
            (tau, v)
        })
        .collect();
    interpolate_univariate(field, &points, 2 * n)
}

/// Nonzero coefficient at `a`-degree `<= n - k` or `>= n + k`, i.e. the
/// rehomogenized polynomial is not divisible by `(ab)^{n-k+1}`.
pub fn outside_window(poly: &UnivariatePolyPF, n: usize, k: usize) -> bool {
    poly.coeffs
        .iter()
        .enumerate()
        .any(|(i, &c)| c != 0 && (i + k <= n || i >= n + k))
}

fn dv_search(poly: &dyn PolynomialEvaluator, cfg: &DvConfig, tag: u64) -> Result<(Option<usize>, f64)> {
    let n = poly.num_vars();
    if cfg.k == 0 || cfg.k > n {
        return Err(invalid(format!("k = {} must lie in 1..={n}", cfg.k)));
    }
    if !(cfg.skew > 0.0 && cfg.skew < 1.0) {
        return Err(invalid(format!("skew must lie in (0, 1), got {}", cfg.skew)));
    }
    let fields: Vec<PrimeField> = cfg
        .primes_for(n)?
        .into_iter()
        .map(PrimeField::new)
        .collect::<Result<_>>()?;
    let hit = (0..cfg.budget).into_par_iter().find_first(|&trial| {
        fields.iter().enumerate().any(|(j, field)| {
            let mut rng = trial_rng(cfg.seed, tag << 40 | (trial as u64) << 8 | j as u64);
            let assignment: Vec<bool> = (0..n).map(|_| rng.gen_bool(cfg.skew)).collect();
            let r = dv_trial(poly, field, &assignment).expect("validated field size");
            outside_window(&r, n, cfg.k)
        })
    });
    let trials = (cfg.budget * fields.len()) as i32;
    Ok((hit, (1.0 - cfg.per_trial_bound()).powi(trials)))
}

/// Decides whether `poly` has a monomial with at most `n - k` distinct
/// variables. `Yes` is always correct.
pub fn solve_nk_dv(poly: &dyn PolynomialEvaluator, cfg: &DvConfig) -> Result<DetectionReport> {
    let (hit, bound) = dv_search(poly, cfg, 0)?;
    Ok(DetectionReport {
        answer: Answer::from_bool(hit.is_some()),
        trials: cfg.budget,
        trials_run: hit.map_or(cfg.budget, |t| t + 1),
        seed: cfg.seed,
        field_order: None,
        failure_bound: if hit.is_some() { 0.0 } else { bound },
        per_root: Vec::new(),
        note: None,
    })
}

/// Is there a spanning out-branching with at least `k` leaves?
pub fn detect_k_leaf(g: &Digraph, k: usize, cfg: &DvConfig) -> Result<DetectionReport> {
    let n = g.n();
    if n < 2 {
        return Err(invalid("k-leaf detection needs n >= 2"));
    }
    if k == 0 || k > n {
        return Err(invalid(format!("k = {k} must lie in 1..={n}")));
    }
    let cfg = DvConfig { k, ..cfg.clone() };
    let mut per_root = Vec::new();
    let mut answer = Answer::No;
    let mut total_run = 0;
    let mut bound = 1.0;
    for root in 0..n {
        if count_out_branchings(g, root)?.is_zero() {
            per_root.push(RootVerdict {
                root,
                answer: Answer::No,
                trials_run: 0,
            });
            continue;
        }
        let poly = LeafPolynomial { graph: g, root };
        let (hit, b) = dv_search(&poly, &cfg, root as u64 + 1)?;
        bound = b;
        let trials_run = hit.map_or(cfg.budget, |t| t + 1);
        total_run += trials_run;
        per_root.push(RootVerdict {
            root,
            answer: Answer::from_bool(hit.is_some()),
            trials_run,
        });
        if hit.is_some() {
            answer = Answer::Yes;
            break;
        }
    }
    Ok(DetectionReport {
        answer,
        trials: cfg.budget,
        trials_run: total_run,
        seed: cfg.seed,
        field_order: None,
        failure_bound: if answer.is_yes() { 0.0 } else { bound },
        per_root,
        note: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ResidueRing;
    use crate::matrix::SquareMatrix;
    use crate::oracle::{brute_k_internal, brute_k_leaf, brute_min_distinct_vars};

    fn product_poly(n: usize) -> MonomialListPoly {
        MonomialListPoly::new(n, vec![(1, vec![1; n])]).unwrap()
    }

    fn power_poly(n: usize) -> MonomialListPoly {
        let mut e = vec![0; n];
        e[0] = n as u32;
        MonomialListPoly::new(n, vec![(1, e)]).unwrap()
    }

    #[test]
    fn local_inverse_roundtrip() {
        let field = BinaryField::new(8).unwrap();
        let ring = internal_ring(field.clone(), 3).unwrap();
        let alg = ring.base().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for _ in 0..50 {
            let coeffs = (0..4)
                .map(|_| crate::algebra::GroupAlgebraElem {
                    coeffs: (0..8).map(|_| field.random(&mut rng)).collect(),
                })
                .collect();
            let u = TruncatedPoly { coeffs };
            match local_inverse(&ring, &u) {
                Some(inv) => assert_eq!(ring.mul(&u, &inv), ring.one()),
                None => {
                    let aug = u.coeffs[0].coeffs.iter().fold(0, |a, c| a ^ c.0);
                    assert_eq!(aug, 0);
                }
            }
        }
        let nilpotent = ring.linear(alg.add(&alg.unit(3), &alg.identity()), alg.identity());
        assert!(local_inverse(&ring, &nilpotent).is_none());
    }

    #[test]
    fn unit_pivot_matches_berkowitz_in_local_rings() {
        let field = BinaryField::new(8).unwrap();
        let ring = internal_ring(field.clone(), 2).unwrap();
        let alg = ring.base().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..20 {
            let m = SquareMatrix::from_fn((0..5).collect(), |_, _| {
                let c0 = alg.scalar(field.random(&mut rng));
                let g = rng.gen_range(0..4);
                let c1 = alg.scale(&alg.add(&alg.unit(g), &alg.identity()), field.random(&mut rng));
                ring.linear(c0, c1)
            });
            let a = det_unit_pivot(&ring, &m, |x| local_inverse(&ring, x));
            if let Some(a) = a {
                assert_eq!(a, det_division_free(&ring, &m));
            }
        }
        let zp = ResidueRing::new(3, 3).unwrap();
        for _ in 0..200 {
            let m = SquareMatrix::from_fn((0..4).collect(), |_, _| rng.gen_range(0..27u64));
            if let Some(d) = det_unit_pivot(&zp, &m, |x| zp.unit_inverse(*x)) {
                assert_eq!(d, det_division_free(&zp, &m));
            }
        }
    }

    #[test]
    fn non_multilinear_products_vanish() {
        let field = BinaryField::new(8).unwrap();
        let ring = internal_ring(field.clone(), 3).unwrap();
        let alg = ring.base().clone();
        let y = alg.scale(&alg.add(&alg.unit(5), &alg.identity()), Gf2m(7));
        let z = alg.scale(&alg.add(&alg.unit(2), &alg.identity()), Gf2m(9));
        assert!(alg.is_zero(&alg.mul(&alg.mul(&y, &z), &y)));
        assert!(!alg.is_zero(&alg.mul(&y, &z)));
    }

    #[test]
    fn k_internal_examples() {
        let cfg = InternalSieveConfig::new(5, 3);
        assert!(detect_k_internal(&Digraph::path(5), 4, &cfg).unwrap().is_yes());
        let star = detect_k_internal(&Digraph::out_star(6), 2, &cfg).unwrap();
        assert!(!star.is_yes());
        assert_eq!(star.per_root[0].trials_run, 100);
        assert!(star.per_root[1..].iter().all(|r| r.trials_run == 0));
        // out-degree 2 at the only internal vertex must not hide it
        assert!(detect_k_internal(&Digraph::out_star(3), 1, &cfg).unwrap().is_yes());
        assert!(detect_k_internal(&Digraph::empty(1), 0, &cfg).unwrap().is_yes());
        assert!(detect_k_internal(&Digraph::path(3), 3, &cfg).is_err());
        assert!(detect_k_internal(&Digraph::path(9), 7, &cfg).is_err());
    }

    #[test]
    fn k_internal_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for trial in 0..25u64 {
            let n = 3 + trial as usize % 4;
            let g = Digraph::random(n, rng.gen_range(0.2..0.5), &mut rng);
            for k in 1..n.min(4) {
                let cfg = InternalSieveConfig {
                    trials: 30,
                    ..InternalSieveConfig::new(n, trial)
                };
                let got = detect_k_internal(&g, k, &cfg).unwrap().is_yes();
                assert_eq!(got, brute_k_internal(&g, k).unwrap(), "k={k} arcs {:?}", g.arcs());
            }
        }
    }

    #[test]
    fn dv_trial_examples() {
        let f = PrimeField::new(1_000_003).unwrap();
        let prod = product_poly(5);
        let r = dv_trial(&prod, &f, &[true, false, true, true, false]).unwrap();
        let mut want = vec![0; 11];
        want[5] = 1;
        assert_eq!(r.coeffs, want);
        // y1^5 with y1 -> a and w2..w5 split 2/2
        let pow = power_poly(5);
        let r = dv_trial(&pow, &f, &[true, true, false, true, false]).unwrap();
        assert_eq!(r.degree(), Some(7));
        let small = PrimeField::new(7).unwrap();
        assert!(dv_trial(&prod, &small, &[true; 5]).is_err());
        assert!(dv_trial(&prod, &f, &[true; 4]).is_err());
    }

    /// Symbolic expansion: monomial `c y^e` maps to `c a^{sum over y->a of e_i + #(w->a)}`.
    fn expand(poly: &MonomialListPoly, assignment: &[bool], p: u64) -> Vec<u64> {
        let n = poly.num_vars();
        let mut out = vec![0u64; 2 * n + 1];
        let w_to_a = assignment.iter().filter(|&&b| !b).count();
        for (c, e) in poly.terms() {
            let deg: usize = e
                .iter()
                .zip(assignment)
                .filter(|(_, &b)| b)
                .map(|(&d, _)| d as usize)
                .sum();
            out[deg + w_to_a] = (out[deg + w_to_a] + c) % p;
        }
        out
    }

    fn random_poly(n: usize, terms: usize, rng: &mut ChaCha8Rng) -> MonomialListPoly {
        let list = (0..terms)
            .map(|_| {
                let support = rng.gen_range(1..=n);
                let vars: Vec<usize> = rand::seq::index::sample(rng, n, support).into_vec();
                let mut e = vec![0u32; n];
                for &v in &vars {
                    e[v] = 1;
                }
                for _ in 0..n - support {
                    e[vars[rng.gen_range(0..support)]] += 1;
                }
                (rng.gen_range(1..5), e)
            })
            .collect();
        MonomialListPoly::new(n, list).unwrap()
    }

    #[test]
    fn interpolation_matches_symbolic_expansion() {
        let f = PrimeField::new(2_147_483_647).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..40 {
            let n = rng.gen_range(2..8);
            let poly = random_poly(n, rng.gen_range(1..=5), &mut rng);
            let assignment: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
            let got = dv_trial(&poly, &f, &assignment).unwrap();
            assert_eq!(got.coeffs, expand(&poly, &assignment, f.modulus()));
        }
    }

    #[test]
    fn dv_examples() {
        let cfg = DvConfig::new(1, 5);
        assert!(!solve_nk_dv(&product_poly(6), &cfg).unwrap().is_yes());
        let cfg = DvConfig::new(5, 5);
        assert!(solve_nk_dv(&power_poly(6), &cfg).unwrap().is_yes());
        assert!(MonomialListPoly::new(3, vec![(1, vec![1, 1])]).is_err());
        assert!(MonomialListPoly::new(3, vec![(1, vec![1, 1, 0])]).is_err());
        let bad = DvConfig {
            primes: vec![11],
            ..DvConfig::new(1, 0)
        };
        assert!(solve_nk_dv(&product_poly(6), &bad).is_err());
        let skewed = DvConfig::new(2, 0).with_s_estimate(2);
        assert!((skewed.skew - 0.5).abs() < 1e-12);
    }

    #[test]
    fn dv_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for trial in 0..40u64 {
            let n = rng.gen_range(2..8);
            let poly = random_poly(n, rng.gen_range(1..5), &mut rng);
            let k = rng.gen_range(1..=n.min(4));
            let cfg = DvConfig {
                budget: 8 * 4usize.pow(k as u32),
                ..DvConfig::new(k, trial)
            };
            let truth = brute_min_distinct_vars(poly.terms())
                .unwrap()
                .is_some_and(|m| m + k <= n);
            assert_eq!(solve_nk_dv(&poly, &cfg).unwrap().is_yes(), truth, "{poly:?} k={k}");
        }
    }

    #[test]
    fn k_leaf_examples() {
        let cfg = DvConfig::new(1, 9);
        assert!(detect_k_leaf(&Digraph::out_star(6), 5, &cfg).unwrap().is_yes());
        assert!(!detect_k_leaf(&Digraph::path(6), 2, &cfg).unwrap().is_yes());
        assert!(!detect_k_leaf(&Digraph::out_star(4), 4, &cfg).unwrap().is_yes());
        assert!(detect_k_leaf(&Digraph::empty(1), 1, &cfg).is_err());
        assert!(detect_k_leaf(&Digraph::path(3), 0, &cfg).is_err());
    }

    #[test]
    fn k_leaf_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        for trial in 0..25u64 {
            let n = rng.gen_range(3..7);
            let g = Digraph::random(n, rng.gen_range(0.2..0.6), &mut rng);
            let k = rng.gen_range(2..=n.min(4));
            let got = detect_k_leaf(&g, k, &DvConfig::new(k, trial)).unwrap().is_yes();
            assert_eq!(got, brute_k_leaf(&g, k).unwrap(), "k={k} arcs {:?}", g.arcs());
        }
    }
}
