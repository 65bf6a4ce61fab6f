//! Dense digraph representation, path/cycle types and deterministic generators.
//!
//! Vertices are indices `0..n`. Adjacency is a dense bit matrix kept in both
//! row (out-neighbour) and column (in-neighbour) orientation, so degree scans
//! and neighbourhood intersections are word-parallel. Digraphs are immutable
//! once built; all edits go through [`DigraphBuilder`].

use crate::bits::Bitset;
use crate::error::Error;
use crate::rng::SplitMix64;
use crate::Result;

/// Loop-free digraph over indexed vertices.
#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    out: Vec<Bitset>,
    inn: Vec<Bitset>,
    is_oriented: bool,
    is_tournament: bool,
}

impl Digraph {
    /// Build from an explicit boolean matrix; entry `(i, j)` means edge `i -> j`.
    pub fn from_adjacency(matrix: &[Vec<bool>]) -> Result<Digraph> {
        let n = matrix.len();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NonSquareMatrix {
                    row: i,
                    got: row.len(),
                    expected: n,
                });
            }
            if row[i] {
                return Err(Error::LoopEdge(i));
            }
        }
        let mut b = DigraphBuilder::new(n);
        for (i, row) in matrix.iter().enumerate() {
            for (j, &present) in row.iter().enumerate() {
                if present {
                    b.add_edge(i, j);
                }
            }
        }
        Ok(b.build())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_oriented(&self) -> bool {
        self.is_oriented
    }

    pub fn is_tournament(&self) -> bool {
        self.is_tournament
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(v)
    }

    /// `true` if `u` and `v` are joined by an edge in at least one direction.
    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(v) || self.inn[u].contains(v)
    }

    pub fn out_set(&self, v: usize) -> &Bitset {
        &self.out[v]
    }

    pub fn in_set(&self, v: usize) -> &Bitset {
        &self.inn[v]
    }

    pub fn out_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.out[v].iter()
    }

    pub fn in_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.inn[v].iter()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inn[v].count()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.out_degree(v)).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.out[u].iter().map(move |v| (u, v)))
    }

    /// Per-vertex `(out, in)` degrees plus the standard aggregates.
    pub fn degrees(&self) -> DegreeReport {
        let pairs: Vec<(usize, usize)> = (0..self.n)
            .map(|v| (self.out_degree(v), self.in_degree(v)))
            .collect();
        let min_out = pairs.iter().map(|p| p.0).min().unwrap_or(0);
        let min_in = pairs.iter().map(|p| p.1).min().unwrap_or(0);
        let max_out = pairs.iter().map(|p| p.0).max().unwrap_or(0);
        let max_in = pairs.iter().map(|p| p.1).max().unwrap_or(0);
        let min_total = pairs.iter().map(|p| p.0 + p.1).min().unwrap_or(0);
        DegreeReport {
            per_vertex: pairs,
            min_out,
            min_in,
            max_out,
            max_in,
            min_semi: min_out.min(min_in),
            min_total,
        }
    }

    pub fn min_semi_degree(&self) -> usize {
        self.degrees().min_semi
    }

    pub fn min_total_degree(&self) -> usize {
        self.degrees().min_total
    }

    /// Induced subdigraph on `keep`; also returns the new->old index map.
    pub fn induced(&self, keep: &[usize]) -> Result<(Digraph, Vec<usize>)> {
        let mut seen = Bitset::new(self.n);
        for &v in keep {
            if v >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    order: self.n,
                });
            }
            seen.insert(v);
        }
        let order: Vec<usize> = seen.to_vec();
        let mut old_to_new = vec![usize::MAX; self.n];
        for (new, &old) in order.iter().enumerate() {
            old_to_new[old] = new;
        }
        let mut b = DigraphBuilder::new(order.len());
        for (new_u, &old_u) in order.iter().enumerate() {
            for old_v in self.out[old_u].iter() {
                let new_v = old_to_new[old_v];
                if new_v != usize::MAX {
                    b.add_edge(new_u, new_v);
                }
            }
        }
        Ok((b.build(), order))
    }

    /// Remove `drop` and relabel; returns the new->old index map.
    pub fn remove_vertices(&self, drop: &[usize]) -> Result<(Digraph, Vec<usize>)> {
        let mut gone = Bitset::new(self.n);
        for &v in drop {
            if v >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    order: self.n,
                });
            }
            gone.insert(v);
        }
        let keep: Vec<usize> = (0..self.n).filter(|&v| !gone.contains(v)).collect();
        self.induced(&keep)
    }

    /// Copy with the listed edges deleted (vertex set unchanged).
    pub fn remove_edges(&self, edges: &[(usize, usize)]) -> Digraph {
        let mut b = self.to_builder();
        for &(u, v) in edges {
            b.remove_edge(u, v);
        }
        b.build()
    }

    /// Copy with every edge reversed.
    pub fn reversed(&self) -> Digraph {
        Digraph {
            n: self.n,
            out: self.inn.clone(),
            inn: self.out.clone(),
            is_oriented: self.is_oriented,
            is_tournament: self.is_tournament,
        }
    }

    pub fn to_builder(&self) -> DigraphBuilder {
        DigraphBuilder {
            n: self.n,
            out: self.out.clone(),
        }
    }

    /// Transitive vertex ordering `v_0 .. v_{n-1}` with every edge pointing
    /// forward, or `None` when the tournament contains a cycle.
    pub fn transitive_order(&self) -> Result<Option<Vec<usize>>> {
        if !self.is_tournament {
            return Err(Error::NotTournament);
        }
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(self.out_degree(v)));
        for w in order.windows(2) {
            if !self.has_edge(w[0], w[1]) {
                return Ok(None);
            }
        }
        // Degrees force the order; verify all forward edges, not just consecutive.
        for i in 0..order.len() {
            for j in i + 1..order.len() {
                if !self.has_edge(order[i], order[j]) {
                    return Ok(None);
                }
            }
        }
        Ok(Some(order))
    }

    // ---- generators ----

    /// Tournament on `n` vertices with edge `i -> j` iff `i < j`.
    pub fn transitive(n: usize) -> Digraph {
        let mut b = DigraphBuilder::new(n);
        for i in 0..n {
            for j in i + 1..n {
                b.add_edge(i, j);
            }
        }
        b.build()
    }

    /// Rotational tournament on `2l + 1` vertices: `v_i -> v_{i+t}` for
    /// `t in 1..=l`, indices mod `2l + 1`. Regular of degree `l`.
    pub fn rotational(l: usize) -> Digraph {
        assert!(l >= 1);
        let n = 2 * l + 1;
        let mut b = DigraphBuilder::new(n);
        for i in 0..n {
            for t in 1..=l {
                b.add_edge(i, (i + t) % n);
            }
        }
        b.build()
    }

    /// Random tournament: each unordered pair oriented by one generator bit.
    /// Pairs are visited in row order `(i, j), i < j`; a set bit orients
    /// `i -> j`.
    pub fn random_tournament(n: usize, seed: u64) -> Digraph {
        let mut rng = SplitMix64::new(seed);
        let mut b = DigraphBuilder::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if rng.next_bool() {
                    b.add_edge(i, j);
                } else {
                    b.add_edge(j, i);
                }
            }
        }
        b.build()
    }

    /// Layered tournament on `m + 4l + 2` vertices built from two rotational
    /// blocks `A`, `B` of order `2l + 1` and a transitive block `C` of order
    /// `m`: all of `A -> C`, all of `C -> B`, and `b_j -> a_i` exactly when
    /// `i = j` (otherwise `a_i -> b_j`). Strongly `l`-connected, yet every
    /// spanning regular subdigraph has degree at most `sqrt(4l)`.
    ///
    /// Vertex layout: `a_0..a_2l`, then `b_0..b_2l`, then `c_1..c_m`.
    pub fn extremal(m: usize, l: usize) -> Digraph {
        assert!(m >= 1 && l >= 1);
        let block = 2 * l + 1;
        let n = m + 2 * block;
        let a = |i: usize| i;
        let bb = |i: usize| block + i;
        let c = |i: usize| 2 * block + i;
        let mut g = DigraphBuilder::new(n);
        for i in 0..block {
            for t in 1..=l {
                g.add_edge(a(i), a((i + t) % block));
                g.add_edge(bb(i), bb((i + t) % block));
            }
        }
        for i in 0..m {
            for j in i + 1..m {
                g.add_edge(c(i), c(j));
            }
        }
        for i in 0..block {
            for j in 0..m {
                g.add_edge(a(i), c(j));
                g.add_edge(c(j), bb(i));
            }
        }
        for i in 0..block {
            for j in 0..block {
                if i == j {
                    g.add_edge(bb(j), a(i));
                } else {
                    g.add_edge(a(i), bb(j));
                }
            }
        }
        g.build()
    }

    // ---- text format ----

    /// Serialize: first line `n`, then `n` lines of `n` characters `'0'`/`'1'`;
    /// character `j` of line `i` is `'1'` iff edge `i -> j` is present.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity((self.n + 1) * (self.n + 1) + 8);
        s.push_str(&self.n.to_string());
        s.push('\n');
        for i in 0..self.n {
            for j in 0..self.n {
                s.push(if self.has_edge(i, j) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    /// Parse the text format, reporting exact line/column on malformed input.
    pub fn from_text(text: &str) -> Result<Digraph> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            column: 1,
            message: "empty input, expected vertex count".into(),
        })?;
        let n: usize = header.trim().parse().map_err(|_| Error::Parse {
            line: 1,
            column: 1,
            message: format!("cannot parse vertex count from {header:?}"),
        })?;
        let mut b = DigraphBuilder::new(n);
        for i in 0..n {
            let line = lines.next().ok_or_else(|| Error::Parse {
                line: i + 2,
                column: 1,
                message: format!("expected {n} adjacency rows, input ended at row {i}"),
            })?;
            let row = line.trim_end();
            if row.chars().count() != n {
                return Err(Error::Parse {
                    line: i + 2,
                    column: row.chars().count() + 1,
                    message: format!("row has {} characters, expected {n}", row.chars().count()),
                });
            }
            for (j, ch) in row.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => {
                        if i == j {
                            return Err(Error::Parse {
                                line: i + 2,
                                column: j + 1,
                                message: "diagonal must be '0' (loops are forbidden)".into(),
                            });
                        }
                        b.add_edge(i, j);
                    }
                    other => {
                        return Err(Error::Parse {
                            line: i + 2,
                            column: j + 1,
                            message: format!("unexpected character {other:?}, want '0' or '1'"),
                        });
                    }
                }
            }
        }
        Ok(b.build())
    }
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Digraph(n={}, edges={}, oriented={}, tournament={})",
            self.n,
            self.edge_count(),
            self.is_oriented,
            self.is_tournament
        )
    }
}

/// Copy-on-write construction for [`Digraph`].
#[derive(Clone)]
pub struct DigraphBuilder {
    n: usize,
    out: Vec<Bitset>,
}

impl DigraphBuilder {
    pub fn new(n: usize) -> Self {
        DigraphBuilder {
            n,
            out: vec![Bitset::new(n); n],
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "loops are forbidden");
        self.out[u].insert(v);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.out[u].remove(v);
    }

    pub fn build(self) -> Digraph {
        let n = self.n;
        let mut inn = vec![Bitset::new(n); n];
        for u in 0..n {
            for v in self.out[u].iter() {
                inn[v].insert(u);
            }
        }
        let mut oriented = true;
        let mut tournament = true;
        'outer: for u in 0..n {
            for v in u + 1..n {
                let fwd = self.out[u].contains(v);
                let bwd = self.out[v].contains(u);
                if fwd && bwd {
                    oriented = false;
                    tournament = false;
                    break 'outer;
                }
                if fwd == bwd {
                    tournament = false;
                }
            }
        }
        Digraph {
            n,
            out: self.out,
            inn,
            is_oriented: oriented,
            is_tournament: tournament,
        }
    }
}

/// Aggregated degree data for a digraph.
#[derive(Clone, Debug)]
pub struct DegreeReport {
    pub per_vertex: Vec<(usize, usize)>,
    pub min_out: usize,
    pub min_in: usize,
    pub max_out: usize,
    pub max_in: usize,
    /// min over vertices of min(out, in)
    pub min_semi: usize,
    /// min over vertices of out + in
    pub min_total: usize,
}

/// Directed path as an ordered list of distinct vertices. The first vertex is
/// the tail, the last the head.
#[derive(
    Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize,
)]
pub struct Path(pub Vec<usize>);

impl Path {
    pub fn singleton(v: usize) -> Path {
        Path(vec![v])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn tail(&self) -> usize {
        *self.0.first().expect("empty path")
    }

    pub fn head(&self) -> usize {
        *self.0.last().expect("empty path")
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    /// Vertices strictly between tail and head.
    pub fn interior(&self) -> &[usize] {
        if self.0.len() <= 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    pub fn reversed(&self) -> Path {
        let mut v = self.0.clone();
        v.reverse();
        Path(v)
    }

    pub fn map_indices(&self, map: &[usize]) -> Path {
        Path(self.0.iter().map(|&v| map[v]).collect())
    }
}

/// Collection of pairwise vertex-disjoint paths.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PathSystem(pub Vec<Path>);

impl PathSystem {
    pub fn new(paths: Vec<Path>) -> PathSystem {
        PathSystem(paths)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn paths(&self) -> &[Path] {
        &self.0
    }

    pub fn heads(&self) -> Vec<usize> {
        self.0.iter().map(|p| p.head()).collect()
    }

    pub fn tails(&self) -> Vec<usize> {
        self.0.iter().map(|p| p.tail()).collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.0.iter().map(|p| p.len()).sum()
    }

    pub fn vertex_set(&self, n: usize) -> Bitset {
        let mut s = Bitset::new(n);
        for p in &self.0 {
            for &v in p.vertices() {
                s.insert(v);
            }
        }
        s
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().flat_map(|p| p.edges())
    }

    pub fn is_vertex_disjoint(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        for p in &self.0 {
            for &v in p.vertices() {
                if !seen.insert(v) {
                    return false;
                }
            }
        }
        true
    }
}

/// Directed cycle as a cyclically ordered list of distinct vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle(pub Vec<usize>);

impl Cycle {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    /// Edges including the wrap-around.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.0.len();
        (0..n).map(move |i| (self.0[i], self.0[(i + 1) % n]))
    }

    pub fn reversed(&self) -> Cycle {
        let mut v = self.0.clone();
        v.reverse();
        Cycle(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Digraph {
        Digraph::from_adjacency(&[
            vec![false, true, false],
            vec![false, false, true],
            vec![true, false, false],
        ])
        .unwrap()
    }

    #[test]
    fn triangle_is_tournament() {
        let t = triangle();
        assert!(t.is_tournament());
        assert!(t.is_oriented());
        let d = t.degrees();
        assert_eq!(d.per_vertex, vec![(1, 1); 3]);
        assert_eq!(d.min_semi, 1);
    }

    #[test]
    fn antiparallel_pair_not_oriented() {
        let g = Digraph::from_adjacency(&[vec![false, true], vec![true, false]]).unwrap();
        assert!(!g.is_oriented());
        assert!(!g.is_tournament());
    }

    #[test]
    fn loop_rejected() {
        let err = Digraph::from_adjacency(&[vec![true]]).unwrap_err();
        assert!(matches!(err, Error::LoopEdge(0)));
    }

    #[test]
    fn non_square_rejected() {
        let err = Digraph::from_adjacency(&[vec![false, true], vec![false]]).unwrap_err();
        assert!(matches!(err, Error::NonSquareMatrix { .. }));
    }

    #[test]
    fn rotational_degrees() {
        // 5 vertices, every vertex (2, 2)
        let t = Digraph::rotational(2);
        assert_eq!(t.n(), 5);
        assert!(t.is_tournament());
        for v in 0..5 {
            assert_eq!((t.out_degree(v), t.in_degree(v)), (2, 2));
        }
        assert_eq!(Digraph::rotational(1), triangle());
    }

    #[test]
    fn rotational_regular_up_to_20() {
        for l in 1..=20 {
            let t = Digraph::rotational(l);
            assert!(t.is_tournament());
            for v in 0..t.n() {
                assert_eq!(t.out_degree(v), l);
                assert_eq!(t.in_degree(v), l);
            }
        }
    }

    #[test]
    fn transitive_out_degrees_follow_order() {
        let t = Digraph::transitive(4);
        let degs: Vec<usize> = (0..4).map(|v| t.out_degree(v)).collect();
        assert_eq!(degs, vec![3, 2, 1, 0]);
        let order = t.transitive_order().unwrap().unwrap();
        assert_eq!(order, vec![0, 1, 2, 3]);
    }

    #[test]
    fn triangle_has_no_transitive_order() {
        assert_eq!(triangle().transitive_order().unwrap(), None);
    }

    #[test]
    fn rotational_not_transitive_exhaustive() {
        // cross-check by scanning all orderings of the 5 vertices
        let t = Digraph::rotational(2);
        assert_eq!(t.transitive_order().unwrap(), None);
        let mut found = false;
        let mut perm = vec![0, 1, 2, 3, 4];
        let heap = |p: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])| {
            fn go(k: usize, p: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
                if k == 1 {
                    f(p);
                    return;
                }
                for i in 0..k {
                    go(k - 1, p, f);
                    if k % 2 == 0 {
                        p.swap(i, k - 1);
                    } else {
                        p.swap(0, k - 1);
                    }
                }
            }
            go(p.len(), p, f);
        };
        heap(&mut perm, &mut |p| {
            let ok = (0..p.len())
                .all(|i| (i + 1..p.len()).all(|j| t.has_edge(p[i], p[j])));
            if ok {
                found = true;
            }
        });
        assert!(!found);
    }

    #[test]
    fn extremal_order_and_edge_count_into_a_block() {
        let t = Digraph::extremal(5, 1);
        assert_eq!(t.n(), 11);
        assert!(t.is_tournament());
        // edges from outside the A-block into the A-block
        for l in 1..=4usize {
            for m in 1..=10usize {
                let t = Digraph::extremal(m, l);
                let block = 2 * l + 1;
                let mut count = 0;
                for u in block..t.n() {
                    for v in 0..block {
                        if t.has_edge(u, v) {
                            count += 1;
                        }
                    }
                }
                assert_eq!(count, 2 * l + 1, "m={m} l={l}");
            }
        }
    }

    #[test]
    fn random_tournament_is_deterministic() {
        let a = Digraph::random_tournament(50, 7);
        let b = Digraph::random_tournament(50, 7);
        assert_eq!(a, b);
        assert!(a.is_tournament());
        for v in 0..a.n() {
            assert_eq!(a.out_degree(v) + a.in_degree(v), a.n() - 1);
        }
    }

    #[test]
    fn induced_identity_and_prefix() {
        let t = Digraph::transitive(5);
        let (same, map) = t.induced(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(same, t);
        assert_eq!(map, vec![0, 1, 2, 3, 4]);
        let (sub, map) = t.induced(&[0, 1, 2]).unwrap();
        assert_eq!(sub, Digraph::transitive(3));
        assert_eq!(map, vec![0, 1, 2]);
    }

    #[test]
    fn remove_edges_drops_degree() {
        let t = triangle();
        let g = t.remove_edges(&[(0, 1)]);
        assert!(g.is_oriented());
        assert!(!g.is_tournament());
        assert_eq!(g.out_degree(0) + g.in_degree(0), 1);
        assert_eq!(g.out_degree(1) + g.in_degree(1), 1);
    }

    #[test]
    fn text_round_trip() {
        let t = Digraph::random_tournament(23, 99);
        let text = t.to_text();
        let back = Digraph::from_text(&text).unwrap();
        assert_eq!(t, back);
    }

    #[test]
    fn digraphs_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Digraph>();
        assert_send_sync::<Path>();
        assert_send_sync::<PathSystem>();
        assert_send_sync::<Cycle>();
    }

    #[test]
    fn adjacency_round_trip() {
        let g = Digraph::random_tournament(17, 4);
        let matrix: Vec<Vec<bool>> = (0..17)
            .map(|i| (0..17).map(|j| g.has_edge(i, j)).collect())
            .collect();
        assert_eq!(Digraph::from_adjacency(&matrix).unwrap(), g);
    }

    #[test]
    fn text_parse_errors_carry_position() {
        match Digraph::from_text("2\n01\n1") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match Digraph::from_text("2\n11\n00") {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!((line, column), (2, 1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
