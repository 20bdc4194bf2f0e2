//! Directed graphs, the edge-list text format, the cycle-to-path vertex split
//! and independent-set extraction.

use std::fmt;

use rand::Rng;

use crate::error::{guard, invalid, Error, Result};

/// A loop-free simple digraph on vertices `0..n`.
///
/// Arcs are kept sorted, so an arc's position in [`Digraph::arcs`] is a
/// stable id that weight maps can index by.
#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    adj: Vec<bool>,
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.n)
            .field("arcs", &self.arcs)
            .finish()
    }
}

impl Digraph {
    /// Builds a digraph, rejecting loops and out-of-range ids. Duplicate
    /// arcs are collapsed.
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v) in arcs {
            if u >= n || v >= n {
                return Err(invalid(format!("arc ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(invalid(format!("loop arc ({u},{u})")));
            }
            list.push((u, v));
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self::from_sorted(n, list))
    }

    fn from_sorted(n: usize, arcs: Vec<(usize, usize)>) -> Self {
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        let mut adj = vec![false; n * n];
        for &(u, v) in &arcs {
            out_adj[u].push(v);
            in_adj[v].push(u);
            adj[u * n + v] = true;
        }
        for list in &mut in_adj {
            list.sort_unstable();
        }
        Digraph {
            n,
            arcs,
            out_adj,
            in_adj,
            adj,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Vec::new())
    }

    /// The directed cycle `0 -> 1 -> ... -> n-1 -> 0`.
    pub fn cycle(n: usize) -> Self {
        if n < 2 {
            return Self::empty(n);
        }
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    /// The directed path `0 -> 1 -> ... -> n-1`.
    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    pub fn complete(n: usize) -> Self {
        let arcs = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
        Self::new(n, arcs).expect("valid complete digraph")
    }

    /// Root `0` with arcs to every other vertex.
    pub fn out_star(n: usize) -> Self {
        Self::new(n, (1..n).map(|v| (0, v))).expect("valid star")
    }

    /// The acyclic tournament with arcs `u -> v` for all `u < v`.
    pub fn transitive_tournament(n: usize) -> Self {
        let arcs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::new(n, arcs).expect("valid tournament")
    }

    /// Each ordered pair becomes an arc independently with probability `p`.
    pub fn random<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Self {
        let mut arcs = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.gen_bool(p) {
                    arcs.push((u, v));
                }
            }
        }
        Self::from_sorted(n, arcs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    /// Position of the arc in [`Digraph::arcs`].
    pub fn arc_index(&self, u: usize, v: usize) -> Option<usize> {
        self.arcs.binary_search(&(u, v)).ok()
    }

    pub fn out_neighbors(&self, u: usize) -> &[usize] {
        &self.out_adj[u]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out_adj[u].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_adj[v].len()
    }

    /// Undirected adjacency bitmasks (orientation dropped). Requires `n <= 64`.
    pub fn undirected_masks(&self) -> Result<Vec<u64>> {
        if self.n > 64 {
            return Err(guard(format!("bitmask routines need n <= 64, got {}", self.n)));
        }
        let mut masks = vec![0u64; self.n];
        for &(u, v) in &self.arcs {
            masks[u] |= 1 << v;
            masks[v] |= 1 << u;
        }
        Ok(masks)
    }

    /// Rebuilds the adjacency indexes from the arc list and compares.
    pub fn check_consistency(&self) -> bool {
        let rebuilt = Self::from_sorted(self.n, self.arcs.clone());
        rebuilt.out_adj == self.out_adj
            && rebuilt.in_adj == self.in_adj
            && rebuilt.adj == self.adj
            && self.arcs.windows(2).all(|w| w[0] < w[1])
            && self.arcs.iter().all(|&(u, v)| u != v)
    }

    /// Serializes in the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.arcs.len());
        for &(u, v) in &self.arcs {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }
}

/// Result of reading an edge-list file.
#[derive(Debug, Clone)]
pub struct ParsedGraph {
    pub graph: Digraph,
    /// Number of repeated arc lines that were collapsed.
    pub duplicate_arcs: usize,
}

/// Parses the edge-list format: a header line `n m`, then `m` lines
/// `tail head` with 0-based ids. Lines starting with `#` and blank lines are
/// ignored.
pub fn parse_digraph(text: &str) -> Result<ParsedGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header line \"n m\"".into(),
    })?;
    let [n, m] = parse_pair(hline, header)?;

    let mut arcs = Vec::with_capacity(m);
    let mut last_line = hline;
    for (line, text) in lines {
        last_line = line;
        if arcs.len() == m {
            return Err(Error::Parse {
                line,
                msg: format!("more than the declared {m} arc lines"),
            });
        }
        let [u, v] = parse_pair(line, text)?;
        if u >= n || v >= n {
            return Err(Error::Parse {
                line,
                msg: format!("vertex id {} out of range (n = {n})", u.max(v)),
            });
        }
        if u == v {
            return Err(Error::Parse {
                line,
                msg: format!("loop arc ({u},{v})"),
            });
        }
        arcs.push((u, v));
    }
    if arcs.len() != m {
        return Err(Error::Parse {
            line: last_line,
            msg: format!("expected {m} arc lines, found {}", arcs.len()),
        });
    }
    arcs.sort_unstable();
    let before = arcs.len();
    arcs.dedup();
    Ok(ParsedGraph {
        duplicate_arcs: before - arcs.len(),
        graph: Digraph::from_sorted(n, arcs),
    })
}

fn parse_pair(line: usize, text: &str) -> Result<[usize; 2]> {
    let mut it = text.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = it.next().ok_or_else(|| Error::Parse {
            line,
            msg: format!("expected two integers, got {text:?}"),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("not a non-negative integer: {tok:?}"),
        })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line,
            msg: format!("trailing tokens in {text:?}"),
        });
    }
    Ok([a, b])
}

/// A vertex split into a source copy `s` and a sink copy `t`.
///
/// `s` keeps the id of the split vertex and inherits its out-arcs; `t` is the
/// new vertex `n` and inherits its in-arcs. Hamiltonian `s -> t` paths of
/// `graph` correspond one-to-one to Hamiltonian cycles of the input.
#[derive(Debug, Clone)]
pub struct VertexSplit {
    pub graph: Digraph,
    pub s: usize,
    pub t: usize,
    pub origin: usize,
}

pub fn split_vertex(g: &Digraph, u: usize) -> Result<VertexSplit> {
    if u >= g.n() {
        return Err(invalid(format!("split vertex {u} out of range (n = {})", g.n())));
    }
    let t = g.n();
    let arcs = g
        .arcs()
        .iter()
        .map(|&(a, b)| if b == u { (a, t) } else { (a, b) })
        .collect::<Vec<_>>();
    Ok(VertexSplit {
        graph: Digraph::new(g.n() + 1, arcs)?,
        s: u,
        t,
        origin: u,
    })
}

/// Vertex partition with no arc inside `yellow`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependentPartition {
    pub blue: Vec<usize>,
    pub yellow: Vec<usize>,
}

impl IndependentPartition {
    fn from_mask(n: usize, yellow: u64) -> Self {
        let (yellow, blue) = (0..n).partition(|&v| yellow >> v & 1 == 1);
        IndependentPartition { blue, yellow }
    }

    pub fn is_valid_for(&self, g: &Digraph) -> bool {
        let mut seen = vec![0u8; g.n()];
        for &v in self.blue.iter().chain(&self.yellow) {
            if v >= g.n() {
                return false;
            }
            seen[v] += 1;
        }
        seen.iter().all(|&c| c == 1) && is_independent(g, &self.yellow)
    }
}

pub fn is_independent(g: &Digraph, set: &[usize]) -> bool {
    set.iter().all(|&u| set.iter().all(|&v| !g.has_arc(u, v)))
}

/// Maximum independent set of the underlying undirected graph, by
/// branch and bound. Needs `n <= 64`.
pub fn find_independent_partition(g: &Digraph) -> Result<IndependentPartition> {
    let masks = g.undirected_masks()?;
    let all = full_mask(g.n());
    let mut best = 0u64;
    mis_branch(&masks, all, 0, &mut best);
    Ok(IndependentPartition::from_mask(g.n(), best))
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn mis_branch(adj: &[u64], mut cand: u64, mut cur: u64, best: &mut u64) {
    // Vertices of degree <= 1 inside the candidate set can always be taken.
    loop {
        let mut taken = false;
        let mut rest = cand;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if cand >> v & 1 == 0 {
                continue;
            }
            if (adj[v] & cand).count_ones() <= 1 {
                cur |= 1 << v;
                cand &= !(adj[v] | 1 << v);
                taken = true;
            }
        }
        if !taken {
            break;
        }
    }
    if cand == 0 {
        if cur.count_ones() > best.count_ones() {
            *best = cur;
        }
        return;
    }
    if cur.count_ones() + cand.count_ones() <= best.count_ones() {
        return;
    }
    let mut pick = 0;
    let mut deg = 0;
    let mut rest = cand;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let d = (adj[v] & cand).count_ones();
        if d > deg {
            deg = d;
            pick = v;
        }
    }
    mis_branch(adj, cand & !(adj[pick] | 1 << pick), cur | 1 << pick, best);
    mis_branch(adj, cand & !(1 << pick), cur, best);
}

/// Greedy maximal matching of the underlying undirected graph.
pub fn greedy_maximal_matching(g: &Digraph) -> Vec<(usize, usize)> {
    let mut matched = vec![false; g.n()];
    let mut matching = Vec::new();
    for &(u, v) in g.arcs() {
        if !matched[u] && !matched[v] {
            matched[u] = true;
            matched[v] = true;
            matching.push((u.min(v), u.max(v)));
        }
    }
    matching
}

/// Maximum independent set by enumerating the `3^|M|` ways an independent
/// set can meet a maximal matching `M`. Unmatched vertices are pairwise
/// non-adjacent, so each choice extends greedily to the best completion.
pub fn find_independent_partition_by_matching(g: &Digraph) -> Result<IndependentPartition> {
    let masks = g.undirected_masks()?;
    let matching = greedy_maximal_matching(g);
    if matching.len() > 30 {
        return Err(guard(format!("3^{} enumeration too large", matching.len())));
    }
    let mut unmatched = full_mask(g.n());
    for &(a, b) in &matching {
        unmatched &= !(1u64 << a | 1u64 << b);
    }
    let total = 3usize.pow(matching.len() as u32);
    let mut best = 0u64;
    'outer: for mut code in 0..total {
        let mut chosen = 0u64;
        for &(a, b) in &matching {
            match code % 3 {
                1 => chosen |= 1 << a,
                2 => chosen |= 1 << b,
                _ => {}
            }
            code /= 3;
        }
        let mut nbrs = 0u64;
        let mut rest = chosen;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if masks[v] & chosen != 0 {
                continue 'outer;
            }
            nbrs |= masks[v];
        }
        let set = chosen | (unmatched & !nbrs);
        if set.count_ones() > best.count_ones() {
            best = set;
        }
    }
    Ok(IndependentPartition::from_mask(g.n(), best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parses_basic_format() {
        let p = parse_digraph("3 2\n0 1\n1 2").unwrap();
        assert_eq!(p.graph.n(), 3);
        assert_eq!(p.graph.arcs(), &[(0, 1), (1, 2)]);
        assert_eq!(p.duplicate_arcs, 0);

        let p = parse_digraph("1 0").unwrap();
        assert_eq!(p.graph.n(), 1);
        assert!(p.graph.arcs().is_empty());
    }

    #[test]
    fn parse_errors_name_the_line() {
        let e = parse_digraph("2 1\n0 0").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, ref msg } if msg.contains("loop arc")));

        let e = parse_digraph("# c\n2 1\n0 5").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, ref msg } if msg.contains("out of range")));

        let e = parse_digraph("2 1\n0 x").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));

        assert!(parse_digraph("3 2\n0 1").is_err());
        assert!(parse_digraph("").is_err());
    }

    #[test]
    fn duplicates_collapse_and_comments_skip() {
        let p = parse_digraph("# header\n3 3\n0 1\n# mid\n0 1\n\n1 2\n").unwrap();
        assert_eq!(p.graph.arcs(), &[(0, 1), (1, 2)]);
        assert_eq!(p.duplicate_arcs, 1);
        assert!(p.graph.check_consistency());
    }

    #[test]
    fn edge_list_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = Digraph::random(9, 0.3, &mut rng);
        let back = parse_digraph(&g.to_edge_list()).unwrap().graph;
        assert_eq!(g, back);
    }

    #[test]
    fn split_moves_arcs() {
        let g = Digraph::cycle(3);
        let sp = split_vertex(&g, 0).unwrap();
        assert_eq!(sp.graph.n(), 4);
        assert_eq!((sp.s, sp.t), (0, 3));
        assert_eq!(sp.graph.arcs(), &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(sp.graph.in_degree(sp.s), 0);
        assert_eq!(sp.graph.out_degree(sp.t), 0);

        let g = Digraph::new(3, [(1, 2)]).unwrap();
        let sp = split_vertex(&g, 0).unwrap();
        assert_eq!(sp.graph.out_degree(sp.s) + sp.graph.in_degree(sp.s), 0);
        assert_eq!(sp.graph.out_degree(sp.t) + sp.graph.in_degree(sp.t), 0);

        assert!(split_vertex(&g, 3).is_err());
    }

    #[test]
    fn independent_partitions() {
        let p = find_independent_partition(&Digraph::cycle(4)).unwrap();
        assert_eq!(p.yellow.len(), 2);
        let p = find_independent_partition(&Digraph::complete(5)).unwrap();
        assert_eq!(p.yellow.len(), 1);
        let p = find_independent_partition(&Digraph::empty(6)).unwrap();
        assert_eq!(p.yellow.len(), 6);
        assert!(p.blue.is_empty());
    }

    #[test]
    fn both_mis_engines_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for i in 0..200 {
            let n = 2 + i % 15;
            let g = Digraph::random(n, 0.1 + 0.4 * (i % 5) as f64 / 5.0, &mut rng);
            let a = find_independent_partition(&g).unwrap();
            let b = find_independent_partition_by_matching(&g).unwrap();
            assert!(a.is_valid_for(&g));
            assert!(b.is_valid_for(&g));
            assert_eq!(a.yellow.len(), b.yellow.len(), "{g:?}");
        }
    }
}
