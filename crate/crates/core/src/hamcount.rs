//! Counting Hamiltonian cycles modulo prime powers.
//!
//! The cycle count of `G` equals the number of Hamiltonian `s -> t` paths in
//! the split graph, which in turn is an inclusion–exclusion sum of punctured
//! Laplacian determinants over subsets `O` of `V_t`. With unit weights on
//! ordinary arcs and random weights on the (virtual) arcs leaving `t`, most
//! terms vanish modulo `p^k`; the meet-in-the-middle listing enumerates only
//! the subsets whose term can survive.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{crt_combine, is_prime, primes_up_to, ResidueRing, Ring};
use crate::error::{guard, invalid, Result};
use crate::graph::{split_vertex, Digraph, VertexSplit};
use crate::matrix::{det_residue, SquareMatrix};

/// Largest `|V_t|` the naive sieve will enumerate.
pub const NAIVE_MAX_SUBSET_BITS: usize = 24;
/// Lookup-table budget (stored subset ids across all blocks).
pub const TABLE_ENTRY_LIMIT: u64 = 1 << 24;
const INF: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SieveMode {
    Naive,
    Mitm,
}

impl std::str::FromStr for SieveMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(SieveMode::Naive),
            "mitm" => Ok(SieveMode::Mitm),
            other => Err(invalid(format!("unknown sieve mode {other:?}"))),
        }
    }
}

/// Parameters of one modular counting run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SieveParams {
    pub p: u64,
    pub k: u32,
    pub lambda: f64,
    pub beta: f64,
    /// Number of blocks the index set is cut into.
    pub b: usize,
    pub seed: u64,
    pub mode: SieveMode,
}

pub const DEFAULT_LAMBDA: f64 = 0.01;
pub const DEFAULT_BETA: f64 = 1.0 / 6.0;

impl SieveParams {
    /// Defaults for a split graph on `n` vertices: `k` from the runtime
    /// formula (at least 1) and `b = floor(3 log2 p)` (at least 1).
    pub fn new(n: usize, p: u64, seed: u64) -> Result<Self> {
        Self::with_options(n, p, None, DEFAULT_LAMBDA, DEFAULT_BETA, seed, SieveMode::Mitm)
    }

    pub fn with_options(
        n: usize,
        p: u64,
        k: Option<u32>,
        lambda: f64,
        beta: f64,
        seed: u64,
        mode: SieveMode,
    ) -> Result<Self> {
        if !is_prime(p) {
            return Err(invalid(format!("p = {p} is not prime")));
        }
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(invalid(format!("lambda must lie in (0, 1), got {lambda}")));
        }
        if !(beta > 0.0 && beta < 0.5) {
            return Err(invalid(format!("beta must lie in (0, 1/2), got {beta}")));
        }
        let k = k.unwrap_or_else(|| default_k(n, p, lambda, beta));
        ResidueRing::new(p, k)?;
        Ok(SieveParams {
            p,
            k,
            lambda,
            beta,
            b: default_blocks(p),
            seed,
            mode,
        })
    }

    pub fn ring(&self) -> Result<ResidueRing> {
        ResidueRing::new(self.p, self.k)
    }
}

/// `max(1, floor((1 - lambda)(1/2 - beta) n / p))`.
pub fn default_k(n: usize, p: u64, lambda: f64, beta: f64) -> u32 {
    let k = ((1.0 - lambda) * (0.5 - beta) * n as f64 / p as f64).floor();
    (k as u32).max(1)
}

/// `max(1, floor(3 log2 p))`.
pub fn default_blocks(p: u64) -> usize {
    ((3.0 * (p as f64).log2()).floor() as usize).max(1)
}

/// Random weights `x_tu in {0..p-1}` on the virtual arcs `t -> u`, `u in V_t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomTailWeights {
    /// Indexed by vertex id; the entry at `t` is unused and zero.
    pub x: Vec<u64>,
}

impl RandomTailWeights {
    /// Draws from a stream determined by `(seed, p)` only, so every `k`
    /// sees the same weights.
    pub fn draw(split: &VertexSplit, p: u64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(p);
        let n = split.graph.n();
        let x = (0..n)
            .map(|u| if u == split.t { 0 } else { rng.gen_range(0..p) })
            .collect();
        RandomTailWeights { x }
    }
}

/// Precomputed adjacency masks for evaluating sieve terms.
struct SieveContext<'a> {
    split: &'a VertexSplit,
    ring: ResidueRing,
    x: Vec<u64>,
    /// In-neighbours of each vertex, as a vertex mask.
    in_mask: Vec<u64>,
    /// `V_st` in increasing id order.
    vst: Vec<usize>,
}

impl<'a> SieveContext<'a> {
    fn new(split: &'a VertexSplit, ring: ResidueRing, w: &RandomTailWeights) -> Result<Self> {
        let g = &split.graph;
        let n = g.n();
        if n > 64 {
            return Err(guard(format!(
                "sieve supports split graphs with at most 64 vertices, got {n}"
            )));
        }
        if split.t != n - 1 || split.s >= split.t {
            return Err(invalid("split must place t last and s before it"));
        }
        let in_mask = (0..n)
            .map(|v| g.in_neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u))
            .collect();
        let vst = (0..n).filter(|&v| v != split.s && v != split.t).collect();
        Ok(SieveContext {
            split,
            x: w.x.iter().map(|&v| ring.elem(v)).collect(),
            ring,
            in_mask,
            vst,
        })
    }

    fn n(&self) -> usize {
        self.split.graph.n()
    }

    /// Diagonal entry of `L_s^O` at `v`: weights of in-arcs from `O` and from `t`.
    fn diag(&self, v: usize, o: u64) -> u64 {
        let ones = (self.in_mask[v] & o).count_ones() as u64;
        let tail = if v == self.split.t { 0 } else { self.x[v] };
        self.ring.elem(tail + ones)
    }

    /// Off-diagonal entry `(a, b)` of `L_s^O`.
    fn off(&self, a: usize, b: usize, o: u64) -> u64 {
        if a == self.split.t {
            return self.ring.neg(&self.x[b]);
        }
        if o & (1 << a) != 0 && self.split.graph.has_arc(a, b) {
            self.ring.neg(&1)
        } else {
            0
        }
    }

    /// `det L_s^O mod p^k`. Rows of `V_st \ O` carry only their diagonal,
    /// so they are factored out before eliminating the rest.
    fn term(&self, o: u64) -> u64 {
        let mut prod = self.ring.one();
        let mut keep = Vec::with_capacity(self.vst.len() + 1);
        for &v in &self.vst {
            if o & (1 << v) != 0 {
                keep.push(v);
            } else {
                prod = self.ring.mul(&prod, &self.diag(v, o));
                if prod == 0 {
                    return 0;
                }
            }
        }
        keep.push(self.split.t);
        let m = SquareMatrix::from_fn(keep.clone(), |i, j| {
            if i == j {
                self.diag(keep[i], o)
            } else {
                self.off(keep[i], keep[j], o)
            }
        });
        self.ring.mul(&prod, &det_residue(&self.ring, &m))
    }

    /// `(-1)^{|V_t \ O|} det L_s^O`.
    fn signed_term(&self, o: u64) -> u64 {
        let outside = (self.n() - 1) as u32 - o.count_ones();
        let d = self.term(o);
        if outside % 2 == 1 {
            self.ring.neg(&d)
        } else {
            d
        }
    }

    fn full_matrix(&self, o: u64) -> SquareMatrix<u64> {
        let labels: Vec<usize> = (0..self.n()).filter(|&v| v != self.split.s).collect();
        SquareMatrix::from_fn(labels.clone(), |i, j| {
            if i == j {
                self.diag(labels[i], o)
            } else {
                self.off(labels[i], labels[j], o)
            }
        })
    }
}

fn subset_mask(split: &VertexSplit, subset: &[usize]) -> Result<u64> {
    let mut o = 0u64;
    for &v in subset {
        if v >= split.t {
            return Err(invalid(format!("vertex {v} is not in V_t")));
        }
        o |= 1 << v;
    }
    Ok(o)
}

/// `L_s^O` over Z/p^k: the Laplacian punctured at `s`, with arcs leaving
/// `V_t \ O` zeroed and the virtual arcs `t -> u` carrying `x_tu`.
/// Rows and columns are labelled by vertex id.
pub fn restricted_laplacian(
    split: &VertexSplit,
    ring: ResidueRing,
    w: &RandomTailWeights,
    subset: &[usize],
) -> Result<SquareMatrix<u64>> {
    let ctx = SieveContext::new(split, ring, w)?;
    Ok(ctx.full_matrix(subset_mask(split, subset)?))
}

/// Sieve term `det L_s^O mod p^k` for one subset.
pub fn sieve_term(split: &VertexSplit, ring: ResidueRing, w: &RandomTailWeights, subset: &[usize]) -> Result<u64> {
    let ctx = SieveContext::new(split, ring, w)?;
    Ok(ctx.term(subset_mask(split, subset)?))
}

/// Hamiltonian `s -> t` paths mod `p^k`, summing all `2^{|V_t|}` terms.
pub fn naive_sieve_count(split: &VertexSplit, p: u64, k: u32, seed: u64) -> Result<u64> {
    let ring = ResidueRing::new(p, k)?;
    let w = RandomTailWeights::draw(split, p, seed);
    naive_with_weights(split, ring, &w)
}

fn naive_with_weights(split: &VertexSplit, ring: ResidueRing, w: &RandomTailWeights) -> Result<u64> {
    let bits = split.graph.n() - 1;
    if bits > NAIVE_MAX_SUBSET_BITS {
        return Err(guard(format!(
            "naive sieve enumerates 2^|V_t| subsets; |V_t| = {bits} exceeds {NAIVE_MAX_SUBSET_BITS}"
        )));
    }
    let ctx = SieveContext::new(split, ring, w)?;
    Ok((0u64..1 << bits)
        .into_par_iter()
        .map(|o| ctx.signed_term(o))
        .reduce(|| 0, |a, b| ring.add(&a, &b)))
}

/// Which half of `V_t` a z-vector was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HalfSide {
    First,
    Second,
}

/// The bipartition `V_t = V_t^(1) ∪ V_t^(2)` with `|V_t^(1)| = ceil(n/3)`,
/// and the block partition of `V_st`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Halves {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    /// `V_st` in increasing order; z-vector entries follow this order.
    pub index: Vec<usize>,
    /// Blocks as ranges of positions in `index`.
    pub blocks: Vec<(usize, usize)>,
}

impl Halves {
    pub fn new(split: &VertexSplit, b: usize) -> Self {
        let n = split.graph.n();
        let first_len = n.div_ceil(3).min(n - 1);
        let vt: Vec<usize> = (0..n).filter(|&v| v != split.t).collect();
        let index: Vec<usize> = vt.iter().copied().filter(|&v| v != split.s).collect();
        let d = index.len();
        let b = b.clamp(1, d.max(1));
        let (q, r) = (d / b, d % b);
        let mut blocks = Vec::with_capacity(b);
        let mut start = 0;
        for i in 0..b {
            let len = q + usize::from(i < r);
            blocks.push((start, start + len));
            start += len;
        }
        Halves {
            first: vt[..first_len].to_vec(),
            second: vt[first_len..].to_vec(),
            index,
            blocks,
        }
    }
}

/// Entries over `V_st`; `None` stands for infinity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZVector {
    pub side: HalfSide,
    pub entries: Vec<Option<u64>>,
}

impl ZVector {
    /// Positions where both entries are finite and equal.
    pub fn agreements(&self, other: &ZVector) -> usize {
        self.entries
            .iter()
            .zip(&other.entries)
            .filter(|(a, b)| a.is_some() && a == b)
            .count()
    }
}

/// First half: `x_tu + #{w in O1 : w -> u}` mod p. Second half:
/// `-#{w in O2 : w -> u}` mod p. Infinity on the subset itself.
pub fn z_vector(
    split: &VertexSplit,
    w: &RandomTailWeights,
    p: u64,
    halves: &Halves,
    side: HalfSide,
    subset: &[usize],
) -> Result<ZVector> {
    let half = match side {
        HalfSide::First => &halves.first,
        HalfSide::Second => &halves.second,
    };
    if let Some(v) = subset.iter().find(|v| !half.contains(v)) {
        return Err(invalid(format!("vertex {v} is outside the {side:?} half")));
    }
    let o = subset_mask(split, subset)?;
    let entries = halves
        .index
        .iter()
        .map(|&u| {
            if o & (1 << u) != 0 {
                return None;
            }
            let c = split
                .graph
                .in_neighbors(u)
                .iter()
                .filter(|&&v| o & (1 << v) != 0)
                .count() as u64
                % p;
            Some(match side {
                HalfSide::First => (w.x[u] % p + c) % p,
                HalfSide::Second => (p - c) % p,
            })
        })
        .collect();
    Ok(ZVector { side, entries })
}

/// Counters from one listing run.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SieveDiagnostics {
    /// Subsets whose determinant was evaluated.
    pub pairs_listed: u64,
    /// Table hits examined, including those rejected by the full check.
    pub pairs_visited: u64,
    /// `2^{|V_t|}`, the naive subset count.
    pub pairs_naive: u64,
    pub pruning_ratio: f64,
    pub blocks: usize,
    pub table_entries: u64,
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SieveOutcome {
    pub residue: u64,
    pub modulus: u64,
    pub p: u64,
    pub k: u32,
    /// The mode that actually ran (MITM falls back to naive past the table budget).
    pub mode: SieveMode,
    pub diagnostics: SieveDiagnostics,
}

/// Lookup tables and z-vectors of the first half.
struct Listing<'a> {
    ctx: SieveContext<'a>,
    p: u64,
    k: usize,
    halves: Halves,
    threshold: usize,
    /// z-vectors of every first-half subset, row-major by subset id.
    z1: Vec<u32>,
    /// Vertex mask of each first-half subset id.
    o1_mask: Vec<u64>,
    /// Per block: CSR lists of first-half subset ids by key.
    tables: Vec<(Vec<u32>, Vec<u32>)>,
}

fn table_size(p: u64, halves: &Halves) -> Option<u64> {
    let mut total = 0u64;
    for &(a, b) in &halves.blocks {
        let keys = (p + 1).checked_pow((b - a) as u32)?;
        total = total.checked_add(keys.checked_mul(1 << halves.first.len())?)?;
    }
    Some(total)
}

impl<'a> Listing<'a> {
    fn new(ctx: SieveContext<'a>, p: u64, k: u32, halves: Halves) -> Self {
        let d = halves.index.len();
        let b = halves.blocks.len();
        let threshold = k as usize / b;
        let f = halves.first.len();
        let mut z1 = Vec::with_capacity(d << f);
        let mut o1_mask = Vec::with_capacity(1 << f);
        for id in 0u32..1 << f {
            let o = mask_from_bits(id as u64, &halves.first);
            o1_mask.push(o);
            for &u in &halves.index {
                z1.push(if o & (1 << u) != 0 {
                    INF
                } else {
                    ((ctx.x[u] % p + (ctx.in_mask[u] & o).count_ones() as u64) % p) as u32
                });
            }
        }
        let mut tables = Vec::with_capacity(b);
        for &(lo, hi) in &halves.blocks {
            let width = hi - lo;
            let keys = (p + 1).pow(width as u32) as usize;
            let mut offsets = Vec::with_capacity(keys + 1);
            let mut ids = Vec::new();
            offsets.push(0u32);
            let mut digits = vec![0u32; width];
            for _ in 0..keys {
                for id in 0..1usize << f {
                    let z = &z1[id * d + lo..id * d + hi];
                    let agree = z
                        .iter()
                        .zip(&digits)
                        .filter(|(&a, &g)| a != INF && g as u64 != p && a == g)
                        .count();
                    if agree <= threshold {
                        ids.push(id as u32);
                    }
                }
                offsets.push(ids.len() as u32);
                // next key in mixed radix p+1; digit p encodes infinity
                for dgt in digits.iter_mut() {
                    *dgt += 1;
                    if *dgt as u64 <= p {
                        break;
                    }
                    *dgt = 0;
                }
            }
            tables.push((offsets, ids));
        }
        Listing {
            ctx,
            p,
            k: k as usize,
            halves,
            threshold,
            z1,
            o1_mask,
            tables,
        }
    }

    fn table_entries(&self) -> u64 {
        self.tables.iter().map(|(_, ids)| ids.len() as u64).sum()
    }

    fn key(&self, z: &[u32]) -> usize {
        let radix = self.p as usize + 1;
        z.iter().rev().fold(0usize, |acc, &e| {
            acc * radix + if e == INF { self.p as usize } else { e as usize }
        })
    }

    /// Calls `emit(O)` for every subset accepted with second half `o2_bits`.
    /// Returns the number of table hits examined.
    fn for_each_accepted(&self, o2_bits: u64, mut emit: impl FnMut(u64)) -> u64 {
        let d = self.halves.index.len();
        let o2 = mask_from_bits(o2_bits, &self.halves.second);
        let p = self.p as u32;
        let z2: Vec<u32> = self
            .halves
            .index
            .iter()
            .map(|&u| {
                if o2 & (1 << u) != 0 {
                    INF
                } else {
                    let c = (self.ctx.in_mask[u] & o2).count_ones() % p;
                    (p - c) % p
                }
            })
            .collect();
        let mut seen = HashSet::new();
        let mut visited = 0u64;
        let mut per_block = vec![0usize; self.halves.blocks.len()];
        for (i, &(lo, hi)) in self.halves.blocks.iter().enumerate() {
            let (offsets, ids) = &self.tables[i];
            let key = self.key(&z2[lo..hi]);
            for &id in &ids[offsets[key] as usize..offsets[key + 1] as usize] {
                visited += 1;
                let z1 = &self.z1[id as usize * d..(id as usize + 1) * d];
                let mut total = 0;
                for (j, &(a, b)) in self.halves.blocks.iter().enumerate() {
                    per_block[j] = (a..b).filter(|&x| z1[x] != INF && z1[x] == z2[x]).count();
                    total += per_block[j];
                }
                // accept only at the first qualifying block
                if per_block[..i].iter().any(|&c| c <= self.threshold) || total > self.k {
                    continue;
                }
                assert!(seen.insert(id), "subset listed twice");
                emit(self.o1_mask[id as usize] | o2);
            }
        }
        visited
    }
}

fn mask_from_bits(bits: u64, vertices: &[usize]) -> u64 {
    vertices
        .iter()
        .enumerate()
        .filter(|(i, _)| bits >> i & 1 == 1)
        .fold(0, |m, (_, &v)| m | 1 << v)
}

fn prepare_listing<'a>(
    split: &'a VertexSplit,
    params: &SieveParams,
    ring: ResidueRing,
    w: &RandomTailWeights,
) -> Result<std::result::Result<Listing<'a>, String>> {
    let ctx = SieveContext::new(split, ring, w)?;
    let halves = Halves::new(split, params.b);
    if halves.index.is_empty() {
        return Ok(Err("no index positions; listing is vacuous".into()));
    }
    match table_size(params.p, &halves) {
        Some(size) if size <= TABLE_ENTRY_LIMIT => {}
        _ => {
            return Ok(Err(format!(
                "lookup tables would exceed {TABLE_ENTRY_LIMIT} entries; fell back to the naive sieve"
            )))
        }
    }
    Ok(Ok(Listing::new(ctx, params.p, params.k, halves)))
}

/// Hamiltonian `s -> t` paths mod `p^k` by the meet-in-the-middle listing.
///
/// Gives the same residue as [`naive_sieve_count`] for the same seed: every
/// skipped subset has more than `k` rows divisible by `p`.
pub fn mitm_count_mod(split: &VertexSplit, params: &SieveParams) -> Result<SieveOutcome> {
    let ring = params.ring()?;
    let w = RandomTailWeights::draw(split, params.p, params.seed);
    let bits = split.graph.n() - 1;
    let pairs_naive = 1u64 << bits;
    let listing = match prepare_listing(split, params, ring, &w)? {
        Ok(l) => l,
        Err(warning) => {
            let residue = naive_with_weights(split, ring, &w)?;
            return Ok(SieveOutcome {
                residue,
                modulus: ring.modulus(),
                p: params.p,
                k: params.k,
                mode: SieveMode::Naive,
                diagnostics: SieveDiagnostics {
                    pairs_listed: pairs_naive,
                    pairs_visited: pairs_naive,
                    pairs_naive,
                    pruning_ratio: 1.0,
                    warning: Some(warning),
                    ..Default::default()
                },
            });
        }
    };
    let second = listing.halves.second.len();
    let (residue, listed, visited) = (0u64..1 << second)
        .into_par_iter()
        .map(|o2| {
            let mut acc = 0u64;
            let mut listed = 0u64;
            let visited = listing.for_each_accepted(o2, |o| {
                listed += 1;
                acc = ring.add(&acc, &listing.ctx.signed_term(o));
            });
            (acc, listed, visited)
        })
        .reduce(|| (0, 0, 0), |a, b| (ring.add(&a.0, &b.0), a.1 + b.1, a.2 + b.2));
    Ok(SieveOutcome {
        residue,
        modulus: ring.modulus(),
        p: params.p,
        k: params.k,
        mode: SieveMode::Mitm,
        diagnostics: SieveDiagnostics {
            pairs_listed: listed,
            pairs_visited: visited,
            pairs_naive,
            pruning_ratio: listed as f64 / pairs_naive as f64,
            blocks: listing.halves.blocks.len(),
            table_entries: listing.table_entries(),
            warning: None,
        },
    })
}

/// Every subset `O` (as a vertex mask) the listing accepts, sorted.
pub fn mitm_listed_subsets(split: &VertexSplit, params: &SieveParams) -> Result<Vec<u64>> {
    let ring = params.ring()?;
    let w = RandomTailWeights::draw(split, params.p, params.seed);
    let listing = prepare_listing(split, params, ring, &w)?.map_err(|e| guard(format!("listing unavailable: {e}")))?;
    let mut out = Vec::new();
    for o2 in 0u64..1 << listing.halves.second.len() {
        listing.for_each_accepted(o2, |o| out.push(o));
    }
    out.sort_unstable();
    Ok(out)
}

/// Hamiltonian cycles of `g` mod `p^k`, splitting vertex 0.
pub fn count_hc_mod(g: &Digraph, params: &SieveParams) -> Result<SieveOutcome> {
    if g.n() == 0 {
        return Err(invalid("graph has no vertices"));
    }
    let split = split_vertex(g, 0)?;
    match params.mode {
        SieveMode::Mitm => mitm_count_mod(&split, params),
        SieveMode::Naive => {
            let pairs_naive = 1u64 << (split.graph.n() - 1);
            Ok(SieveOutcome {
                residue: naive_sieve_count(&split, params.p, params.k, params.seed)?,
                modulus: params.ring()?.modulus(),
                p: params.p,
                k: params.k,
                mode: SieveMode::Naive,
                diagnostics: SieveDiagnostics {
                    pairs_listed: pairs_naive,
                    pairs_visited: pairs_naive,
                    pairs_naive,
                    pruning_ratio: 1.0,
                    ..Default::default()
                },
            })
        }
    }
}

/// A count known modulo `modulus`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrtCount {
    #[serde(serialize_with = "ser_big")]
    pub residue: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub modulus: BigUint,
    /// `(p, k_p)` for every prime used.
    pub prime_powers: Vec<(u64, u32)>,
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// `k_p = max(1, floor((1 - lambda) n / (3p)))`, lowered if `p^k_p` would
/// not fit the residue ring.
fn boost_exponent(n: usize, p: u64, lambda: f64) -> u32 {
    let mut k = (((1.0 - lambda) * n as f64 / (3.0 * p as f64)).floor() as u32).max(1);
    while k > 1 && ResidueRing::new(p, k).is_err() {
        k -= 1;
    }
    k
}

fn crt_over_primes(
    g: &Digraph,
    primes: impl IntoIterator<Item = u64>,
    lambda: f64,
    seed: u64,
    mode: SieveMode,
    mut stop: impl FnMut(&BigUint) -> bool,
) -> Result<CrtCount> {
    let split_n = g.n() + 1;
    let mut residues = Vec::new();
    let mut modulus = BigUint::one();
    for p in primes {
        let k = boost_exponent(g.n(), p, lambda);
        let params = SieveParams::with_options(split_n, p, Some(k), lambda, DEFAULT_BETA, seed, mode)?;
        let out = count_hc_mod(g, &params)?;
        residues.push((out.residue, p, k));
        modulus *= out.modulus;
        if stop(&modulus) {
            break;
        }
    }
    let (residue, modulus) = crt_combine(&residues)?;
    Ok(CrtCount {
        residue,
        modulus,
        prime_powers: residues.iter().map(|&(_, p, k)| (p, k)).collect(),
    })
}

/// Hamiltonian cycle count modulo `M = prod_{p <= q} p^{k_p}`.
pub fn crt_count(g: &Digraph, q: u64, lambda: f64, seed: u64, mode: SieveMode) -> Result<CrtCount> {
    if q < 2 {
        return Err(invalid("prime bound q must be at least 2"));
    }
    crt_over_primes(g, primes_up_to(q), lambda, seed, mode, |_| false)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CappedCount {
    /// The modulus exceeds `d^n`, so the residue is the count whenever the
    /// count is at most `d^n`.
    Exact {
        #[serde(serialize_with = "ser_big")]
        count: BigUint,
        #[serde(serialize_with = "ser_big")]
        modulus: BigUint,
    },
    CapExceeded {
        #[serde(serialize_with = "ser_big")]
        residue: BigUint,
        #[serde(serialize_with = "ser_big")]
        modulus: BigUint,
    },
}

/// Exact cycle count for graphs with at most `d^n` Hamiltonian cycles.
///
/// Boosts over primes up to `q = ceil(e^2 d^4)`, stopping as soon as the
/// modulus exceeds `d^n`.
pub fn count_exact_capped(g: &Digraph, d: f64, seed: u64, mode: SieveMode) -> Result<CappedCount> {
    if !d.is_finite() || d <= 1.0 {
        return Err(invalid(format!("cap base d must exceed 1, got {d}")));
    }
    let n = g.n();
    if n == 0 {
        return Err(invalid("graph has no vertices"));
    }
    let q = (std::f64::consts::E.powi(2) * d.powi(4)).ceil();
    if q > 1e7 {
        return Err(guard(format!("prime bound {q} is too large")));
    }
    let log_cap = n as f64 * d.ln();
    let exceeds = |m: &BigUint| log_big(m) > log_cap + 1e-9;
    let result = crt_over_primes(g, primes_up_to(q as u64), DEFAULT_LAMBDA, seed, mode, exceeds)?;
    Ok(if exceeds(&result.modulus) {
        CappedCount::Exact {
            count: result.residue,
            modulus: result.modulus,
        }
    } else {
        CappedCount::CapExceeded {
            residue: result.residue,
            modulus: result.modulus,
        }
    })
}

fn log_big(m: &BigUint) -> f64 {
    let bits = m.bits();
    if bits <= 1000 {
        m.to_f64().unwrap_or(f64::INFINITY).ln()
    } else {
        let shifted = m >> (bits - 64);
        shifted.to_f64().unwrap_or(0.0).ln() + (bits - 64) as f64 * std::f64::consts::LN_2
    }
}

/// Exact cycle count using `d = max(m/n, 1 + eps)`: the product of
/// out-degrees, which bounds the count, is at most `(m/n)^n`.
pub fn count_avg_degree(g: &Digraph, seed: u64, mode: SieveMode) -> Result<BigUint> {
    let n = g.n();
    if n < 2 || (0..n).any(|u| g.out_degree(u) == 0) {
        return Ok(BigUint::zero());
    }
    let d = (g.arc_count() as f64 / n as f64).max(1.0 + 1e-9);
    match count_exact_capped(g, d, seed, mode)? {
        CappedCount::Exact { count, .. } => Ok(count),
        CappedCount::CapExceeded { .. } => Err(guard("average-degree cap unexpectedly exceeded")),
    }
}
