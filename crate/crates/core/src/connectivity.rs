//! Strong connectivity predicates, vertex-disjoint path solver, and exact
//! vertex connectivity.
//!
//! All of it reduces to unit-capacity max-flow on the standard vertex-split
//! network: vertex `v` becomes `v_in -> v_out` with capacity one, graph edges
//! get effectively infinite capacity, so every minimum cut is a set of
//! vertices.

use crate::bits::Bitset;
use crate::error::Error;
use crate::flow::{FlowNetwork, INF};
use crate::graph::{Digraph, Path, PathSystem};
use crate::Result;

/// Exact strong connectivity number plus a witness cut (absent only at the
/// `n - 1` ceiling, where no vertex set disconnects the digraph).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexCutReport {
    pub kappa: usize,
    pub witness_cut: Option<Vec<usize>>,
}

fn reach_forward(g: &Digraph, start: usize) -> Bitset {
    let mut seen = Bitset::new(g.n());
    let mut stack = vec![start];
    seen.insert(start);
    while let Some(u) = stack.pop() {
        for v in g.out_neighbors(u) {
            if !seen.contains(v) {
                seen.insert(v);
                stack.push(v);
            }
        }
    }
    seen
}

fn reach_backward(g: &Digraph, start: usize) -> Bitset {
    let mut seen = Bitset::new(g.n());
    let mut stack = vec![start];
    seen.insert(start);
    while let Some(u) = stack.pop() {
        for v in g.in_neighbors(u) {
            if !seen.contains(v) {
                seen.insert(v);
                stack.push(v);
            }
        }
    }
    seen
}

pub fn is_strongly_connected(g: &Digraph) -> bool {
    if g.n() <= 1 {
        return true;
    }
    reach_forward(g, 0).count() == g.n() && reach_backward(g, 0).count() == g.n()
}

/// Vertices not mutually reachable with vertex 0; empty iff strongly connected.
pub fn non_reachable_witness(g: &Digraph) -> Vec<usize> {
    if g.n() <= 1 {
        return Vec::new();
    }
    let fwd = reach_forward(g, 0);
    let bwd = reach_backward(g, 0);
    (0..g.n())
        .filter(|&v| !fwd.contains(v) || !bwd.contains(v))
        .collect()
}

// Node ids in the split network: in(v) = 2v, out(v) = 2v + 1.
fn node_in(v: usize) -> usize {
    2 * v
}
fn node_out(v: usize) -> usize {
    2 * v + 1
}

/// `k` fully vertex-disjoint paths from `A` to `B`, or the separating vertex
/// set of size `< k` that blocks them.
pub fn menger_paths(g: &Digraph, a: &[usize], b: &[usize], k: usize) -> Result<PathSystem> {
    if a.len() < k || b.len() < k {
        return Err(Error::EndpointSetsTooSmall {
            a: a.len(),
            b: b.len(),
            k,
        });
    }
    let n = g.n();
    let source = 2 * n;
    let sink = 2 * n + 1;
    let mut net = FlowNetwork::new(2 * n + 2);
    let mut split_edge = vec![usize::MAX; n];
    for v in 0..n {
        split_edge[v] = net.add_edge(node_in(v), node_out(v), 1);
    }
    let mut arc_edges: Vec<(usize, usize, usize)> = Vec::new();
    for (u, v) in g.edges() {
        let id = net.add_edge(node_out(u), node_in(v), INF);
        arc_edges.push((u, v, id));
    }
    let b_set = Bitset::from_iter(n, b.iter().copied());
    for &v in a {
        net.add_edge(source, node_in(v), INF);
    }
    for &v in b {
        net.add_edge(node_out(v), sink, INF);
    }
    let flow = net.max_flow(source, sink, k as i64);
    if (flow as usize) < k {
        let reach = net.residual_reachable(source);
        let cut: Vec<usize> = (0..n)
            .filter(|&v| reach[node_in(v)] && !reach[node_out(v)])
            .collect();
        debug_assert_eq!(cut.len(), flow as usize);
        return Err(Error::SeparatedByCut { want: k, cut });
    }

    // Decompose the flow into vertex-disjoint walks, truncating each at its
    // first B-vertex. Unit vertex capacities make every walk simple.
    let mut next_arc: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &(u, v, id) in &arc_edges {
        if net.flow_on(id) > 0 {
            next_arc[u].push((v, id));
        }
    }
    for outs in next_arc.iter_mut() {
        outs.sort();
    }
    let mut used_arc = std::collections::HashSet::new();
    let mut paths = Vec::new();
    for &start in a {
        if paths.len() == k {
            break;
        }
        if net.flow_on(split_edge[start]) == 0 {
            continue;
        }
        // Only count vertices fed straight from the source.
        let fed: i64 = net.flow_on(split_edge[start]);
        debug_assert!(fed == 1);
        let mut cur = start;
        let mut path = vec![cur];
        while !b_set.contains(cur) {
            let step = next_arc[cur]
                .iter()
                .find(|&&(_, id)| !used_arc.contains(&id))
                .copied();
            let (nxt, id) = step.expect("flow conservation violated during decomposition");
            used_arc.insert(id);
            cur = nxt;
            path.push(cur);
        }
        paths.push(Path(path));
    }
    // A path that begins at a non-source-fed A-vertex never exists: the unit
    // split capacity is consumed by the source edge. But multiple A-vertices
    // may carry flow that merely passes through; restrict to source-fed ones.
    let mut system = Vec::new();
    for p in paths {
        if system.len() < k {
            system.push(p);
        }
    }
    debug_assert_eq!(system.len(), k);
    let out = PathSystem::new(system);
    debug_assert!(out.is_vertex_disjoint());
    Ok(out)
}

/// Max internally disjoint `x -> y` paths; requires `xy` not an edge.
fn local_connectivity(g: &Digraph, x: usize, y: usize, limit: usize) -> (usize, Vec<usize>) {
    debug_assert!(!g.has_edge(x, y));
    let n = g.n();
    let mut net = FlowNetwork::new(2 * n);
    for v in 0..n {
        if v != x && v != y {
            net.add_edge(node_in(v), node_out(v), 1);
        }
    }
    for (u, v) in g.edges() {
        if u == y || v == x {
            continue;
        }
        net.add_edge(node_out(u), node_in(v), INF);
    }
    let flow = net.max_flow(node_out(x), node_in(y), limit as i64) as usize;
    if flow >= limit {
        return (flow, Vec::new());
    }
    let reach = net.residual_reachable(node_out(x));
    let cut: Vec<usize> = (0..n)
        .filter(|&v| v != x && v != y && reach[node_in(v)] && !reach[node_out(v)])
        .collect();
    (flow, cut)
}

/// `|D| > k` and every deletion of at most `k - 1` vertices leaves the
/// digraph strongly connected.
pub fn is_strongly_k_connected(g: &Digraph, k: usize) -> bool {
    let n = g.n();
    if n <= k {
        return false;
    }
    if k == 0 {
        return true;
    }
    // Any minimum cut misses one of k+1 distinct pivots, so scanning that many
    // pivot stars is exact.
    for pivot in 0..=k.min(n - 1) {
        for u in 0..n {
            if u == pivot {
                continue;
            }
            if !g.has_edge(pivot, u) && local_connectivity(g, pivot, u, k).0 < k {
                return false;
            }
            if !g.has_edge(u, pivot) && local_connectivity(g, u, pivot, k).0 < k {
                return false;
            }
        }
    }
    true
}

/// Exact strong vertex connectivity with a certifying cut.
pub fn vertex_connectivity(g: &Digraph) -> VertexCutReport {
    let n = g.n();
    if n <= 1 {
        return VertexCutReport {
            kappa: 0,
            witness_cut: None,
        };
    }
    let mut bound = n - 1;
    let mut witness: Option<Vec<usize>> = None;
    let mut pivot = 0;
    while pivot < n && pivot <= bound {
        for u in 0..n {
            if u == pivot {
                continue;
            }
            for (x, y) in [(pivot, u), (u, pivot)] {
                if g.has_edge(x, y) {
                    continue;
                }
                let (flow, cut) = local_connectivity(g, x, y, bound);
                if flow < bound {
                    bound = flow;
                    witness = Some(cut);
                }
            }
        }
        pivot += 1;
    }
    VertexCutReport {
        kappa: bound,
        witness_cut: witness,
    }
}

/// Exhaustive connectivity oracle: smallest vertex set whose removal breaks
/// strong connectivity, by scanning all subsets. Guarded to `n <= 12`.
pub fn brute_force_connectivity(g: &Digraph) -> Result<usize> {
    let n = g.n();
    if n > 12 {
        return Err(Error::GuardExceeded {
            what: "brute_force_connectivity order",
            got: n,
            limit: 12,
        });
    }
    if n <= 1 {
        return Ok(0);
    }
    for size in 0..n - 1 {
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let drop: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            let (sub, _) = g.remove_vertices(&drop).unwrap();
            if !is_strongly_connected(&sub) {
                return Ok(size);
            }
        }
    }
    Ok(n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotational_direct_menger() {
        // v_i -> v_{i+2} exists by construction, so two single-edge paths work
        let g = Digraph::rotational(2);
        let sys = menger_paths(&g, &[0, 1], &[2, 3], 2).unwrap();
        assert_eq!(sys.len(), 2);
        assert!(sys.is_vertex_disjoint());
        for p in sys.paths() {
            assert!([0, 1].contains(&p.tail()));
            assert!([2, 3].contains(&p.head()));
        }
    }

    #[test]
    fn single_path_in_strongly_connected() {
        let g = Digraph::rotational(3);
        for target in 1..g.n() {
            let sys = menger_paths(&g, &[0], &[target], 1).unwrap();
            assert_eq!(sys.len(), 1);
            assert_eq!(sys.paths()[0].tail(), 0);
            assert_eq!(sys.paths()[0].head(), target);
        }
    }

    #[test]
    fn extremal_b_to_a_two_paths() {
        // paths from the B-block back into the A-block exist through the
        // matching-complement edges
        let g = Digraph::extremal(3, 1);
        let block = 3;
        let a_block: Vec<usize> = (0..block).collect();
        let b_block: Vec<usize> = (block..2 * block).collect();
        let sys = menger_paths(&g, &b_block, &a_block, 2).unwrap();
        assert_eq!(sys.len(), 2);
        assert!(sys.is_vertex_disjoint());
    }

    #[test]
    fn failed_menger_returns_separating_cut() {
        // transitive tournament: nothing reaches backwards
        let g = Digraph::transitive(6);
        match menger_paths(&g, &[5], &[0], 1) {
            Err(Error::SeparatedByCut { want: 1, cut }) => assert!(cut.is_empty()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rotational_kappa_exact() {
        let g = Digraph::rotational(2);
        let report = vertex_connectivity(&g);
        assert_eq!(report.kappa, 2);
        let cut = report.witness_cut.unwrap();
        assert_eq!(cut.len(), 2);
        let (sub, _) = g.remove_vertices(&cut).unwrap();
        assert!(!is_strongly_connected(&sub));
    }

    #[test]
    fn rotational_kappa_at_least_l() {
        for l in 1..=4 {
            let g = Digraph::rotational(l);
            assert!(is_strongly_k_connected(&g, l), "l = {l}");
        }
    }

    #[test]
    fn extremal_kappa_at_least_l() {
        for (m, l) in [(3usize, 1usize), (5, 1), (4, 2), (8, 3)] {
            let g = Digraph::extremal(m, l);
            assert!(is_strongly_k_connected(&g, l), "m={m} l={l}");
        }
    }

    #[test]
    fn transitive_not_strongly_connected() {
        let g = Digraph::transitive(5);
        assert!(!is_strongly_connected(&g));
        assert_eq!(vertex_connectivity(&g).kappa, 0);
        assert!(!non_reachable_witness(&g).is_empty());
    }

    #[test]
    fn kappa_matches_brute_force_small() {
        for n in 4..=7 {
            for seed in 0..40 {
                let g = Digraph::random_tournament(n, seed);
                let fast = vertex_connectivity(&g).kappa;
                let brute = brute_force_connectivity(&g).unwrap();
                assert_eq!(fast, brute, "n={n} seed={seed}");
            }
        }
    }

    #[test]
    fn monotone_under_vertex_deletion() {
        for seed in 0..10 {
            let g = Digraph::random_tournament(9, seed);
            let k = vertex_connectivity(&g).kappa;
            let (sub, _) = g.remove_vertices(&[0]).unwrap();
            let k2 = vertex_connectivity(&sub).kappa;
            assert!(k2 + 1 >= k, "seed={seed} k={k} k2={k2}");
        }
    }
}
