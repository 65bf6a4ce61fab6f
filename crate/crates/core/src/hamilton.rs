//! Classical Hamiltonicity in tournaments: insertion paths, the
//! extend-or-absorb cycle construction, structural validators, and a
//! brute-force oracle.

use crate::connectivity::{is_strongly_connected, non_reachable_witness};
use crate::error::Error;
use crate::graph::{Cycle, Digraph, Path};
use crate::Result;

/// Hamilton path by binary-search insertion; every tournament has one.
pub fn hamilton_path(t: &Digraph) -> Result<Path> {
    if !t.is_tournament() {
        return Err(Error::NotTournament);
    }
    let n = t.n();
    if n == 0 {
        return Err(Error::InputTooSmall { need: 1, got: 0 });
    }
    let mut order: Vec<usize> = vec![0];
    for v in 1..n {
        if t.has_edge(v, order[0]) {
            order.insert(0, v);
            continue;
        }
        if t.has_edge(*order.last().unwrap(), v) {
            order.push(v);
            continue;
        }
        // invariant: order[lo] -> v and v -> order[hi]
        let (mut lo, mut hi) = (0, order.len() - 1);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if t.has_edge(order[mid], v) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        order.insert(hi, v);
    }
    debug_assert!(validate_path(t, &Path(order.clone())));
    Ok(Path(order))
}

/// Hamilton cycle of a strongly connected tournament by growing a short cycle
/// and inserting or absorbing the remaining vertices.
pub fn hamilton_cycle_camion(t: &Digraph) -> Result<Cycle> {
    if !t.is_tournament() {
        return Err(Error::NotTournament);
    }
    let n = t.n();
    if n < 3 {
        return Err(Error::InputTooSmall { need: 3, got: n });
    }
    if !is_strongly_connected(t) {
        return Err(Error::NotStronglyConnected {
            witness: non_reachable_witness(t),
        });
    }

    // seed with the lexicographically first directed triangle
    let mut cycle: Vec<usize> = 'seed: {
        for x in 0..n {
            for y in t.out_neighbors(x) {
                let mut third = t.out_set(y).clone();
                third.intersect_with(t.in_set(x));
                if let Some(z) = third.first() {
                    break 'seed vec![x, y, z];
                }
            }
        }
        // a strongly connected tournament on >= 3 vertices has a triangle
        unreachable!("strongly connected tournament without a directed triangle");
    };

    let mut outside: Vec<usize> = (0..n).filter(|v| !cycle.contains(v)).collect();
    while !outside.is_empty() {
        let mut progressed = false;

        // insertion: v fits between consecutive cycle vertices
        'insertion: for (oi, &v) in outside.iter().enumerate() {
            for i in 0..cycle.len() {
                let a = cycle[i];
                let b = cycle[(i + 1) % cycle.len()];
                if t.has_edge(a, v) && t.has_edge(v, b) {
                    cycle.insert(i + 1, v);
                    outside.remove(oi);
                    progressed = true;
                    break 'insertion;
                }
            }
        }
        if progressed {
            continue;
        }

        // no insertion point: every outside vertex either beats the whole
        // cycle or loses to it; absorb a dominated->dominating edge pair
        let mut dominated = Vec::new(); // cycle -> v for all cycle vertices
        let mut dominating = Vec::new(); // v -> cycle
        for &v in &outside {
            if cycle.iter().all(|&c| t.has_edge(c, v)) {
                dominated.push(v);
            } else {
                debug_assert!(cycle.iter().all(|&c| t.has_edge(v, c)));
                dominating.push(v);
            }
        }
        'absorb: for &u in &dominated {
            for &w in &dominating {
                if t.has_edge(u, w) {
                    // splice u, w after any cycle vertex
                    cycle.splice(1..1, [u, w]);
                    outside.retain(|&v| v != u && v != w);
                    progressed = true;
                    break 'absorb;
                }
            }
        }
        if !progressed {
            // impossible in a strongly connected tournament
            return Err(Error::NotStronglyConnected {
                witness: outside.clone(),
            });
        }
    }
    let cycle = Cycle(cycle);
    debug_assert!(validate_hamilton_cycle(t, &cycle));
    Ok(cycle)
}

/// Structural path check against the raw adjacency: distinct vertices, every
/// consecutive pair an edge.
pub fn validate_path(g: &Digraph, p: &Path) -> bool {
    if p.is_empty() {
        return false;
    }
    if p.vertices().iter().any(|&v| v >= g.n()) {
        return false;
    }
    let mut seen = std::collections::HashSet::new();
    if !p.vertices().iter().all(|&v| seen.insert(v)) {
        return false;
    }
    p.edges().all(|(u, v)| g.has_edge(u, v))
}

/// Structural cycle check: distinct vertices and every consecutive pair
/// (including the wrap) an edge.
pub fn validate_cycle(g: &Digraph, c: &Cycle) -> bool {
    if c.is_empty() || c.len() < 2 {
        return false;
    }
    if c.vertices().iter().any(|&v| v >= g.n()) {
        return false;
    }
    let mut seen = std::collections::HashSet::new();
    if !c.vertices().iter().all(|&v| seen.insert(v)) {
        return false;
    }
    c.edges().all(|(u, v)| g.has_edge(u, v))
}

pub fn validate_hamilton_cycle(g: &Digraph, c: &Cycle) -> bool {
    c.len() == g.n() && validate_cycle(g, c)
}

pub fn validate_hamilton_path(g: &Digraph, p: &Path) -> bool {
    p.len() == g.n() && validate_path(g, p)
}

/// Pairwise empty edge intersection across cycles.
pub fn edge_disjoint(cycles: &[Cycle]) -> bool {
    let mut seen = std::collections::HashSet::new();
    for c in cycles {
        for e in c.edges() {
            if !seen.insert(e) {
                return false;
            }
        }
    }
    true
}

/// Exhaustive Hamilton cycle search via subset dynamic programming; definitive
/// for `n <= 14`.
pub fn brute_force_hamilton(t: &Digraph) -> Result<Option<Cycle>> {
    let n = t.n();
    if n > 14 {
        return Err(Error::GuardExceeded {
            what: "brute_force_hamilton order",
            got: n,
            limit: 14,
        });
    }
    if n < 3 {
        return Ok(None);
    }
    // reach[mask][last]: a path over `mask` starting at 0 and ending at `last`
    let full = 1usize << n;
    let mut reach = vec![0u16; full];
    reach[1] = 1; // mask {0}, last 0
    for mask in 1..full {
        if mask & 1 == 0 || reach[mask] == 0 {
            continue;
        }
        let ends = reach[mask];
        for last in 0..n {
            if ends >> last & 1 == 0 {
                continue;
            }
            for next in t.out_neighbors(last) {
                let bit = 1usize << next;
                if mask & bit == 0 {
                    reach[mask | bit] |= 1 << next;
                }
            }
        }
    }
    let all = full - 1;
    let mut close = None;
    for last in 1..n {
        if reach[all] >> last & 1 == 1 && t.has_edge(last, 0) {
            close = Some(last);
            break;
        }
    }
    let Some(mut last) = close else {
        return Ok(None);
    };
    // reconstruct backwards
    let mut mask = all;
    let mut rev = vec![last];
    while last != 0 {
        let prev_mask = mask & !(1 << last);
        let mut step = None;
        for prev in t.in_neighbors(last) {
            if prev_mask >> prev & 1 == 1 && reach[prev_mask] >> prev & 1 == 1 {
                step = Some(prev);
                break;
            }
        }
        last = step.expect("dp reconstruction");
        mask = prev_mask;
        rev.push(last);
    }
    rev.reverse();
    let cycle = Cycle(rev);
    debug_assert!(validate_hamilton_cycle(t, &cycle));
    Ok(Some(cycle))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Digraph {
        Digraph::rotational(1)
    }

    #[test]
    fn transitive_path_is_the_order() {
        let t = Digraph::transitive(5);
        let p = hamilton_path(&t).unwrap();
        assert_eq!(p.vertices(), &[0, 1, 2, 3, 4]);
    }

    #[test]
    fn triangle_cycle() {
        let c = hamilton_cycle_camion(&triangle()).unwrap();
        assert!(validate_hamilton_cycle(&triangle(), &c));
    }

    #[test]
    fn triangle_reversed_order_rejected() {
        let t = triangle();
        assert!(validate_cycle(&t, &Cycle(vec![0, 1, 2])));
        assert!(!validate_cycle(&t, &Cycle(vec![0, 2, 1])));
    }

    #[test]
    fn transitive_cycle_fails_with_witness() {
        match hamilton_cycle_camion(&Digraph::transitive(4)) {
            Err(Error::NotStronglyConnected { witness }) => assert!(!witness.is_empty()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rotational_cycle_validates() {
        let t = Digraph::rotational(3);
        let c = hamilton_cycle_camion(&t).unwrap();
        assert!(validate_hamilton_cycle(&t, &c));
    }

    #[test]
    fn random_path_validates() {
        let t = Digraph::random_tournament(64, 3);
        let p = hamilton_path(&t).unwrap();
        assert!(validate_hamilton_path(&t, &p));
    }

    #[test]
    fn brute_force_matches_camion() {
        assert!(brute_force_hamilton(&triangle()).unwrap().is_some());
        assert!(brute_force_hamilton(&Digraph::transitive(5))
            .unwrap()
            .is_none());
        let t = Digraph::rotational(2);
        let brute = brute_force_hamilton(&t).unwrap().unwrap();
        let fast = hamilton_cycle_camion(&t).unwrap();
        assert_eq!(brute.len(), fast.len());
    }

    #[test]
    fn rotations_share_edges() {
        let c1 = Cycle(vec![0, 1, 2]);
        let c2 = Cycle(vec![1, 2, 0]);
        assert!(!edge_disjoint(&[c1, c2]));
    }

    #[test]
    fn insertion_invariant_prefix_cover() {
        // after inserting vertex i the path covers the first i+1 vertices
        let t = Digraph::random_tournament(40, 11);
        let p = hamilton_path(&t).unwrap();
        assert!(validate_hamilton_path(&t, &p));
    }
}
