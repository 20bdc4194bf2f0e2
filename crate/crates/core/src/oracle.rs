//! Exhaustive reference implementations.
//!
//! Everything here is exponential and guarded; guards return
//! [`Error::Guard`](crate::Error::Guard) instead of truncating.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::Ring;
use crate::error::{guard, invalid, Result};
use crate::graph::Digraph;
use crate::matrix::SquareMatrix;

pub const HELD_KARP_MAX_N: usize = 22;
pub const BRANCHING_MAX_N: usize = 9;
pub const PERMUTATION_MAX_N: usize = 10;
pub const MIS_MAX_N: usize = 24;
pub const MONOMIAL_MAX_VARS: usize = 20;

fn check_size(what: &str, n: usize, max: usize) -> Result<()> {
    if n > max {
        return Err(guard(format!("{what} is limited to n <= {max}, got n = {n}")));
    }
    Ok(())
}

/// Number of directed Hamiltonian cycles, by Held–Karp over paths from vertex 0.
pub fn held_karp_count_hc(g: &Digraph) -> Result<u128> {
    let n = g.n();
    check_size("held_karp_count_hc", n, HELD_KARP_MAX_N)?;
    if n < 2 {
        return Ok(0);
    }
    let paths = held_karp_table(g, 0);
    let full = (1usize << n) - 1;
    Ok(g.in_neighbors(0).iter().map(|&v| paths[full * n + v]).sum())
}

/// Number of Hamiltonian paths from `s` to `t`.
pub fn held_karp_count_hp(g: &Digraph, s: usize, t: usize) -> Result<u128> {
    let n = g.n();
    check_size("held_karp_count_hp", n, HELD_KARP_MAX_N)?;
    if s >= n || t >= n {
        return Err(invalid(format!("endpoints ({s}, {t}) out of range for n = {n}")));
    }
    if s == t {
        return Err(invalid("Hamiltonian path endpoints must differ"));
    }
    let paths = held_karp_table(g, s);
    Ok(paths[((1usize << n) - 1) * n + t])
}

/// `table[mask * n + v]`: paths from `start` covering exactly `mask`, ending at `v`.
fn held_karp_table(g: &Digraph, start: usize) -> Vec<u128> {
    let n = g.n();
    let mut table = vec![0u128; (1usize << n) * n];
    table[(1 << start) * n + start] = 1;
    for mask in 1usize..(1 << n) {
        if mask & (1 << start) == 0 {
            continue;
        }
        for v in 0..n {
            let c = table[mask * n + v];
            if c == 0 {
                continue;
            }
            for &w in g.out_neighbors(v) {
                if mask & (1 << w) == 0 {
                    table[(mask | (1 << w)) * n + w] += c;
                }
            }
        }
    }
    table
}

/// Hamiltonian `s`-`t` paths by enumerating vertex orders.
pub fn count_hp_by_permutation(g: &Digraph, s: usize, t: usize) -> Result<u128> {
    let n = g.n();
    check_size("count_hp_by_permutation", n, PERMUTATION_MAX_N)?;
    if s == t || s >= n || t >= n {
        return Err(invalid("need distinct in-range endpoints"));
    }
    let mut middle: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
    let mut count = 0u128;
    permute(&mut middle, 0, &mut |order| {
        let mut prev = s;
        for &v in order.iter().chain(std::iter::once(&t)) {
            if !g.has_arc(prev, v) {
                return;
            }
            prev = v;
        }
        count += 1;
    });
    Ok(count)
}

fn permute(items: &mut [usize], at: usize, visit: &mut impl FnMut(&[usize])) {
    if at == items.len() {
        visit(items);
        return;
    }
    for i in at..items.len() {
        items.swap(at, i);
        permute(items, at + 1, visit);
        items.swap(at, i);
    }
}

/// One spanning out-branching with its shape statistics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Branching {
    pub arcs: Vec<(usize, usize)>,
    /// Vertices with out-degree at least one.
    pub internal: usize,
    /// Vertices with out-degree zero.
    pub leaves: usize,
    /// Internal vertices with out-degree greater than one.
    pub branching_internal: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchingList {
    pub root: usize,
    pub branchings: Vec<Branching>,
}

/// Calls `visit(parent)` for every spanning out-branching rooted at `r`,
/// where `parent[r] == usize::MAX`.
fn for_each_out_branching(g: &Digraph, r: usize, mut visit: impl FnMut(&[usize]) -> ControlFlow<()>) -> Result<()> {
    let n = g.n();
    check_size("out-branching enumeration", n, BRANCHING_MAX_N)?;
    if r >= n {
        return Err(invalid(format!("root {r} out of range (n = {n})")));
    }
    let others: Vec<usize> = (0..n).filter(|&v| v != r).collect();
    if others.iter().any(|&v| g.in_degree(v) == 0) {
        return Ok(());
    }
    let mut choice = vec![0usize; others.len()];
    let mut parent = vec![usize::MAX; n];
    loop {
        for (i, &v) in others.iter().enumerate() {
            parent[v] = g.in_neighbors(v)[choice[i]];
        }
        if reaches_root(&parent, r) && visit(&parent).is_break() {
            return Ok(());
        }
        // odometer over in-neighbour choices
        let mut i = 0;
        loop {
            if i == others.len() {
                return Ok(());
            }
            choice[i] += 1;
            if choice[i] < g.in_degree(others[i]) {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn reaches_root(parent: &[usize], r: usize) -> bool {
    let n = parent.len();
    (0..n).all(|v| {
        let mut x = v;
        for _ in 0..n {
            if x == r {
                return true;
            }
            x = parent[x];
        }
        x == r
    })
}

fn shape(parent: &[usize], r: usize) -> Branching {
    let n = parent.len();
    let mut outdeg = vec![0usize; n];
    let mut arcs = Vec::with_capacity(n.saturating_sub(1));
    for (v, &p) in parent.iter().enumerate() {
        if v != r {
            outdeg[p] += 1;
            arcs.push((p, v));
        }
    }
    arcs.sort_unstable();
    Branching {
        arcs,
        internal: outdeg.iter().filter(|&&d| d >= 1).count(),
        leaves: outdeg.iter().filter(|&&d| d == 0).count(),
        branching_internal: outdeg.iter().filter(|&&d| d > 1).count(),
    }
}

/// All spanning out-branchings rooted at `r` (guard: n <= 9).
pub fn enumerate_out_branchings(g: &Digraph, r: usize) -> Result<BranchingList> {
    let mut branchings = Vec::new();
    for_each_out_branching(g, r, |parent| {
        branchings.push(shape(parent, r));
        ControlFlow::Continue(())
    })?;
    Ok(BranchingList { root: r, branchings })
}

fn any_branching(g: &Digraph, pred: impl Fn(&Branching) -> bool) -> Result<bool> {
    check_size("branching oracle", g.n(), BRANCHING_MAX_N)?;
    for r in 0..g.n() {
        let mut found = false;
        for_each_out_branching(g, r, |parent| {
            if pred(&shape(parent, r)) {
                found = true;
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        if found {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Is there a spanning out-branching with at least `k` internal vertices?
pub fn brute_k_internal(g: &Digraph, k: usize) -> Result<bool> {
    any_branching(g, |b| b.internal >= k)
}

/// Is there a spanning out-branching with at least `k` leaves?
pub fn brute_k_leaf(g: &Digraph, k: usize) -> Result<bool> {
    any_branching(g, |b| b.leaves >= k)
}

/// A maximum independent set of the underlying undirected graph.
pub fn brute_mis(g: &Digraph) -> Result<Vec<usize>> {
    let n = g.n();
    check_size("brute_mis", n, MIS_MAX_N)?;
    let adj = g.undirected_masks()?;
    let mut best = 0u64;
    for set in 0u64..(1u64 << n) {
        if set.count_ones() <= best.count_ones() {
            continue;
        }
        let independent = (0..n).all(|v| set & (1 << v) == 0 || adj[v] & set == 0);
        if independent {
            best = set;
        }
    }
    Ok((0..n).filter(|&v| best & (1 << v) != 0).collect())
}

/// Fewest distinct variables over the monomials with nonzero coefficient,
/// or `None` for the zero polynomial. Monomials are `(coefficient, exponents)`.
pub fn brute_min_distinct_vars(monomials: &[(u64, Vec<u32>)]) -> Result<Option<usize>> {
    if let Some((_, e)) = monomials.iter().find(|(_, e)| e.len() > MONOMIAL_MAX_VARS) {
        return Err(guard(format!(
            "brute_min_distinct_vars is limited to {MONOMIAL_MAX_VARS} variables, got {}",
            e.len()
        )));
    }
    // merge equal exponent vectors before discarding zero coefficients
    let mut merged: Vec<(Vec<u32>, u64)> = Vec::new();
    for (c, e) in monomials {
        match merged.iter_mut().find(|(x, _)| x == e) {
            Some(slot) => slot.1 += c,
            None => merged.push((e.clone(), *c)),
        }
    }
    Ok(merged
        .iter()
        .filter(|(_, c)| *c != 0)
        .map(|(e, _)| e.iter().filter(|&&x| x > 0).count())
        .min())
}

/// Determinant by cofactor expansion along the first row.
pub fn det_cofactor<R: Ring>(ring: &R, m: &SquareMatrix<R::Elem>) -> R::Elem {
    let rows: Vec<usize> = (0..m.order()).collect();
    cofactor(ring, m, &rows, (1u64 << m.order()) - 1, 0)
}

fn cofactor<R: Ring>(ring: &R, m: &SquareMatrix<R::Elem>, rows: &[usize], cols: u64, depth: usize) -> R::Elem {
    if depth == rows.len() {
        return ring.one();
    }
    let mut acc = ring.zero();
    let mut sign_neg = false;
    for c in 0..m.order() {
        if cols & (1 << c) == 0 {
            continue;
        }
        let a = m.get(rows[depth], c);
        if !ring.is_zero(a) {
            let minor = cofactor(ring, m, rows, cols & !(1 << c), depth + 1);
            let term = ring.mul(a, &minor);
            acc = if sign_neg {
                ring.sub(&acc, &term)
            } else {
                ring.add(&acc, &term)
            };
        }
        sign_neg = !sign_neg;
    }
    acc
}

/// Integer determinant by cofactor expansion.
pub fn det_cofactor_int(m: &SquareMatrix<i64>) -> BigInt {
    fn go(m: &SquareMatrix<i64>, row: usize, cols: u64) -> BigInt {
        if row == m.order() {
            return BigInt::from(1);
        }
        let mut acc = BigInt::zero();
        let mut neg = false;
        for c in 0..m.order() {
            if cols & (1 << c) == 0 {
                continue;
            }
            let a = *m.get(row, c);
            if a != 0 {
                let term = go(m, row + 1, cols & !(1 << c)) * a;
                if neg {
                    acc -= term;
                } else {
                    acc += term;
                }
            }
            neg = !neg;
        }
        acc
    }
    go(m, 0, (1u64 << m.order()) - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::split_vertex;
    use crate::matrix::count_out_branchings;
    use num_bigint::BigUint;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cycle_counts() {
        assert_eq!(held_karp_count_hc(&Digraph::cycle(7)).unwrap(), 1);
        assert_eq!(held_karp_count_hc(&Digraph::complete(4)).unwrap(), 6);
        assert_eq!(held_karp_count_hc(&Digraph::complete(6)).unwrap(), 120);
        assert_eq!(held_karp_count_hc(&Digraph::transitive_tournament(6)).unwrap(), 0);
        assert_eq!(held_karp_count_hc(&Digraph::complete(2)).unwrap(), 1);
        assert_eq!(held_karp_count_hc(&Digraph::empty(1)).unwrap(), 0);
        assert!(held_karp_count_hc(&Digraph::empty(23)).is_err());
    }

    #[test]
    fn path_counts() {
        assert_eq!(held_karp_count_hp(&Digraph::path(6), 0, 5).unwrap(), 1);
        assert_eq!(held_karp_count_hp(&Digraph::path(6), 5, 0).unwrap(), 0);
        assert!(held_karp_count_hp(&Digraph::path(3), 1, 1).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..60 {
            let g = Digraph::random(7, 0.5, &mut rng);
            assert_eq!(
                held_karp_count_hp(&g, 1, 4).unwrap(),
                count_hp_by_permutation(&g, 1, 4).unwrap()
            );
        }
    }

    #[test]
    fn split_paths_equal_cycles() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..40 {
            let g = Digraph::random(8, 0.45, &mut rng);
            let hc = held_karp_count_hc(&g).unwrap();
            for u in 0..8 {
                let sp = split_vertex(&g, u).unwrap();
                assert_eq!(held_karp_count_hp(&sp.graph, sp.s, sp.t).unwrap(), hc);
            }
        }
    }

    #[test]
    fn branching_shapes() {
        let p = enumerate_out_branchings(&Digraph::path(5), 0).unwrap();
        assert_eq!(p.branchings.len(), 1);
        assert_eq!((p.branchings[0].internal, p.branchings[0].leaves), (4, 1));
        let s = enumerate_out_branchings(&Digraph::out_star(5), 0).unwrap();
        assert_eq!(s.branchings.len(), 1);
        let b = &s.branchings[0];
        assert_eq!((b.internal, b.leaves, b.branching_internal), (1, 4, 1));
        assert_eq!(
            enumerate_out_branchings(&Digraph::complete(3), 0)
                .unwrap()
                .branchings
                .len(),
            3
        );
        let single = enumerate_out_branchings(&Digraph::empty(1), 0).unwrap();
        assert_eq!(single.branchings.len(), 1);
        assert_eq!(single.branchings[0].leaves, 1);
        assert!(enumerate_out_branchings(&Digraph::empty(10), 0).is_err());
    }

    /// Exhaustive arc-subset filter: every (n-1)-subset of arcs with the
    /// right in-degrees and full reachability.
    fn branchings_by_arc_subsets(g: &Digraph, r: usize) -> usize {
        let arcs = g.arcs();
        let n = g.n();
        let mut count = 0;
        for mask in 0u32..(1 << arcs.len()) {
            if mask.count_ones() as usize != n - 1 {
                continue;
            }
            let chosen: Vec<_> = (0..arcs.len())
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| arcs[i])
                .collect();
            let mut indeg = vec![0; n];
            for &(_, v) in &chosen {
                indeg[v] += 1;
            }
            if indeg[r] != 0 || (0..n).any(|v| v != r && indeg[v] != 1) {
                continue;
            }
            let sub = Digraph::new(n, chosen).unwrap();
            let mut seen = vec![false; n];
            let mut stack = vec![r];
            seen[r] = true;
            while let Some(x) = stack.pop() {
                for &y in sub.out_neighbors(x) {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            if seen.iter().all(|&b| b) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn enumeration_matches_arc_subsets_and_matrix_tree() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..40 {
            let g = Digraph::random(5, 0.5, &mut rng);
            for r in 0..5 {
                let list = enumerate_out_branchings(&g, r).unwrap();
                assert_eq!(list.branchings.len(), branchings_by_arc_subsets(&g, r));
                assert_eq!(
                    BigUint::from(list.branchings.len()),
                    count_out_branchings(&g, r).unwrap()
                );
                for b in &list.branchings {
                    assert_eq!(b.arcs.len(), 4);
                    assert_eq!(b.internal + b.leaves, 5);
                }
            }
        }
    }

    #[test]
    fn brute_predicates() {
        assert!(brute_k_internal(&Digraph::path(6), 5).unwrap());
        assert!(!brute_k_internal(&Digraph::path(6), 6).unwrap());
        assert!(!brute_k_internal(&Digraph::out_star(6), 2).unwrap());
        assert!(brute_k_leaf(&Digraph::out_star(6), 5).unwrap());
        assert!(!brute_k_leaf(&Digraph::path(6), 2).unwrap());
        assert!(!brute_k_leaf(&Digraph::empty(3), 1).unwrap());
        assert_eq!(brute_mis(&Digraph::complete(5)).unwrap().len(), 1);
        assert_eq!(brute_mis(&Digraph::cycle(6)).unwrap().len(), 3);
        assert_eq!(brute_mis(&Digraph::empty(4)).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn min_distinct_vars() {
        assert_eq!(brute_min_distinct_vars(&[(1, vec![2, 1])]).unwrap(), Some(2));
        assert_eq!(
            brute_min_distinct_vars(&[(1, vec![1, 1, 1]), (3, vec![3, 0, 0])]).unwrap(),
            Some(1)
        );
        assert_eq!(brute_min_distinct_vars(&[(0, vec![3, 0])]).unwrap(), None);
        assert_eq!(brute_min_distinct_vars(&[]).unwrap(), None);
        assert!(brute_min_distinct_vars(&[(1, vec![0; 21])]).is_err());
    }

    #[test]
    fn cofactor_small() {
        let m = SquareMatrix::from_rows(vec![vec![1i64, 2], vec![3, 4]]).unwrap();
        assert_eq!(det_cofactor_int(&m), BigInt::from(-2));
        let e = SquareMatrix::<i64>::from_rows(vec![]).unwrap();
        assert_eq!(det_cofactor_int(&e), BigInt::from(1));
    }
}
