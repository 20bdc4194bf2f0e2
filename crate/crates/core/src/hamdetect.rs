//! Directed Hamiltonicity in `O*(3^{n - alpha})` time by the quasi-Laplacian
//! determinant sieve over GF(2^m).
//!
//! Rows are indexed by vertices, columns by `B_* ∪ Y_in ∪ Y_out`, where
//! `Y` is a maximum independent set and `B` its complement. Summing
//! `det Q^{I,O,s}` over all `I ∪ O = B` with `s ∈ I` gives a polynomial that
//! is nonzero exactly when a Hamiltonian cycle exists; it is evaluated at a
//! random point.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{make_binary_field, BinaryField, Gf2m, Ring};
use crate::error::{guard, invalid, Result};
use crate::graph::{find_independent_partition, Digraph, IndependentPartition};
use crate::matrix::{det_gauss, SquareMatrix};
use crate::report::{Answer, DetectionReport};

/// Upper limit on `|B|`; the sieve visits `2 * 3^{|B|-1}` pairs.
pub const MAX_BLUE: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ColumnTag {
    /// One of the `n - 2|Y|` anonymous columns.
    BStar(usize),
    YIn(usize),
    YOut(usize),
}

/// Column bookkeeping for the quasi-Laplacian.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuasiIndex {
    pub blue: Vec<usize>,
    pub yellow: Vec<usize>,
    /// Skew vertex: the smallest blue vertex.
    pub s: usize,
    pub columns: Vec<ColumnTag>,
}

impl QuasiIndex {
    pub fn new(g: &Digraph, part: &IndependentPartition) -> Result<Self> {
        let n = g.n();
        if !part.is_valid_for(g) {
            return Err(invalid(
                "partition does not cover the graph or yellow is not independent",
            ));
        }
        if part.yellow.len() > n / 2 {
            return Err(invalid(format!(
                "|Y| = {} exceeds floor(n/2) = {}",
                part.yellow.len(),
                n / 2
            )));
        }
        let s = *part.blue.iter().min().ok_or_else(|| invalid("blue set is empty"))?;
        let mut columns: Vec<ColumnTag> = (0..n - 2 * part.yellow.len()).map(ColumnTag::BStar).collect();
        columns.extend(part.yellow.iter().map(|&y| ColumnTag::YIn(y)));
        columns.extend(part.yellow.iter().map(|&y| ColumnTag::YOut(y)));
        Ok(QuasiIndex {
            blue: part.blue.clone(),
            yellow: part.yellow.clone(),
            s,
            columns,
        })
    }

    pub fn n(&self) -> usize {
        self.columns.len()
    }

    /// `2 * 3^{|B|-1}`.
    pub fn pair_count(&self) -> u64 {
        2 * 3u64.pow(self.blue.len() as u32 - 1)
    }

    /// The `code`-th pair `(I, O)` as vertex masks. Each non-skew blue
    /// vertex takes a ternary digit (I only, O only, both) and the skew
    /// vertex a binary one (I only, both).
    pub fn pair(&self, mut code: u64) -> (u64, u64) {
        let mut i_mask = 0u64;
        let mut o_mask = 0u64;
        let s_bit = 1u64 << self.s;
        i_mask |= s_bit;
        if code % 2 == 1 {
            o_mask |= s_bit;
        }
        code /= 2;
        for &u in self.blue.iter().filter(|&&u| u != self.s) {
            match code % 3 {
                0 => i_mask |= 1 << u,
                1 => o_mask |= 1 << u,
                _ => {
                    i_mask |= 1 << u;
                    o_mask |= 1 << u;
                }
            }
            code /= 3;
        }
        (i_mask, o_mask)
    }
}

/// One field element per (arc, column), stored at `arc * n + column`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiWeights {
    pub n: usize,
    pub values: Vec<Gf2m>,
}

impl QuasiWeights {
    pub fn random<R: rand::Rng + ?Sized>(g: &Digraph, field: &BinaryField, rng: &mut R) -> Self {
        let n = g.n();
        QuasiWeights {
            n,
            values: (0..g.arc_count() * n).map(|_| field.random(rng)).collect(),
        }
    }

    pub fn scaled(&self, field: &BinaryField, c: Gf2m) -> Self {
        QuasiWeights {
            n: self.n,
            values: self.values.iter().map(|&v| field.mul_elem(v, c)).collect(),
        }
    }

    #[inline]
    fn get(&self, arc: usize, col: usize) -> Gf2m {
        self.values[arc * self.n + col]
    }
}

/// `Q^{I,O,s}` with rows labelled by vertex id and columns in
/// [`QuasiIndex::columns`] order. With `skew = false` the exclusion of `s`
/// from the out-arc cases is dropped.
pub fn build_quasi_laplacian(
    g: &Digraph,
    idx: &QuasiIndex,
    i_set: &[usize],
    o_set: &[usize],
    w: &QuasiWeights,
    skew: bool,
) -> Result<SquareMatrix<Gf2m>> {
    let mut blue = 0u64;
    for &b in &idx.blue {
        blue |= 1 << b;
    }
    let mut i_mask = 0u64;
    let mut o_mask = 0u64;
    for (set, mask) in [(i_set, &mut i_mask), (o_set, &mut o_mask)] {
        for &v in set {
            if v >= 64 || blue & (1 << v) == 0 {
                return Err(invalid(format!("vertex {v} is not blue")));
            }
            *mask |= 1 << v;
        }
    }
    Ok(quasi_matrix(g, idx, i_mask, o_mask, w, skew))
}

fn quasi_matrix(
    g: &Digraph,
    idx: &QuasiIndex,
    i_mask: u64,
    o_mask: u64,
    w: &QuasiWeights,
    skew: bool,
) -> SquareMatrix<Gf2m> {
    let n = g.n();
    let mut m = SquareMatrix::from_fn((0..n).collect(), |_, _| Gf2m::ZERO);
    let out_mask = if skew { o_mask & !(1 << idx.s) } else { o_mask };
    let in_i = |v: usize| i_mask >> v & 1 == 1;
    let in_o = |v: usize| o_mask >> v & 1 == 1;
    let in_out = |v: usize| out_mask >> v & 1 == 1;
    let add = |m: &mut SquareMatrix<Gf2m>, r: usize, c: usize, x: Gf2m| {
        let cur = *m.get(r, c);
        m.set(r, c, Gf2m(cur.0 ^ x.0));
    };
    for (col, tag) in idx.columns.iter().enumerate() {
        match *tag {
            ColumnTag::BStar(_) => {
                // (a): arc a -> b inside B, a in O, b in I
                for (e, &(a, b)) in g.arcs().iter().enumerate() {
                    if !in_i(b) {
                        continue;
                    }
                    let x = w.get(e, col);
                    if in_o(a) {
                        add(&mut m, b, col, x);
                    }
                    if in_out(a) {
                        add(&mut m, a, col, x);
                    }
                }
            }
            ColumnTag::YIn(y) => {
                for &u in g.in_neighbors(y) {
                    let e = g.arc_index(u, y).expect("arc exists");
                    let x = w.get(e, col);
                    // (b)
                    if in_out(u) {
                        add(&mut m, u, col, x);
                    }
                    // (d)
                    if in_o(u) {
                        add(&mut m, y, col, x);
                    }
                }
            }
            ColumnTag::YOut(y) => {
                for &v in g.out_neighbors(y) {
                    let e = g.arc_index(y, v).expect("arc exists");
                    let x = w.get(e, col);
                    // (c) and (e)
                    if in_i(v) {
                        add(&mut m, v, col, x);
                        add(&mut m, y, col, x);
                    }
                }
            }
        }
    }
    m
}

/// Sum of `det Q^{I,O,s}` over `I ∪ O = B`, `s ∈ I`, and the number of
/// pairs visited.
pub fn sieve_sum(g: &Digraph, field: &BinaryField, idx: &QuasiIndex, w: &QuasiWeights) -> (Gf2m, u64) {
    let total = idx.pair_count();
    let sum = (0..total)
        .into_par_iter()
        .map(|code| {
            let (i_mask, o_mask) = idx.pair(code);
            det_gauss(field, &quasi_matrix(g, idx, i_mask, o_mask, w, true)).0
        })
        .reduce(|| 0, |a, b| a ^ b);
    (Gf2m(sum), total)
}

/// Default trial count `2 ceil(log2 n) + 4`.
pub fn default_trials(n: usize) -> usize {
    let log = usize::BITS - n.saturating_sub(1).leading_zeros();
    2 * log as usize + 4
}

/// Decides whether `g` has a directed Hamiltonian cycle.
///
/// Fresh weights each trial, drawn from the stream `(seed, trial)`.
pub fn detect_hamiltonian_cycle(g: &Digraph, trials: usize, seed: u64) -> Result<DetectionReport> {
    let n = g.n();
    if n == 0 {
        return Err(invalid("graph has no vertices"));
    }
    if n == 1 {
        return Ok(DetectionReport::certain_no(trials, seed, "single vertex"));
    }
    if (0..n).any(|v| g.in_degree(v) == 0 || g.out_degree(v) == 0) {
        return Ok(DetectionReport::certain_no(
            trials,
            seed,
            "a vertex has in- or out-degree zero",
        ));
    }
    let part = find_independent_partition(g)?;
    if part.yellow.len() > n / 2 {
        return Ok(DetectionReport::certain_no(
            trials,
            seed,
            format!("independence number {} exceeds floor(n/2)", part.yellow.len()),
        ));
    }
    if part.blue.len() > MAX_BLUE {
        return Err(guard(format!(
            "|B| = {} exceeds {MAX_BLUE}; the sieve would visit 2*3^{} pairs",
            part.blue.len(),
            part.blue.len() - 1
        )));
    }
    let idx = QuasiIndex::new(g, &part)?;
    let field = make_binary_field(n)?;
    let q = field.order();
    let mut trials_run = 0;
    let mut found = false;
    for trial in 0..trials {
        trials_run += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let w = QuasiWeights::random(g, &field, &mut rng);
        let (value, _) = sieve_sum(g, &field, &idx, &w);
        if !field.is_zero(&value) {
            found = true;
            break;
        }
    }
    Ok(DetectionReport {
        answer: Answer::from_bool(found),
        trials,
        trials_run,
        seed,
        field_order: Some(q),
        failure_bound: if found {
            0.0
        } else {
            (n as f64 / q as f64).powi(trials as i32)
        },
        per_root: Vec::new(),
        note: Some(format!("|B| = {}, |Y| = {}", idx.blue.len(), idx.yellow.len())),
    })
}
