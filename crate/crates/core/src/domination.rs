//! Covering edges and small transitive almost-dominating sets.
//!
//! A covering edge for `v` is an edge `x -> y` with `x -> v` and `v -> y`
//! both present: a cycle through `x -> y` can absorb `v` by rerouting through
//! it. The dominating-set constructions repeatedly pick a vertex minimising
//! the common in-(or out-)neighbourhood, which halves the undominated
//! remainder at every step.

use crate::bits::Bitset;
use crate::connectivity::is_strongly_connected;
use crate::error::Error;
use crate::graph::Digraph;
use crate::Result;

/// Edge `x -> y` covering vertex `v` (both activating edges `x -> v`,
/// `v -> y` present in the host).
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CoveringEdge {
    pub v: usize,
    pub x: usize,
    pub y: usize,
}

impl CoveringEdge {
    pub fn edge(&self) -> (usize, usize) {
        (self.x, self.y)
    }

    pub fn activating_edges(&self) -> [(usize, usize); 2] {
        [(self.x, self.v), (self.v, self.y)]
    }

    pub fn is_valid(&self, g: &Digraph) -> bool {
        self.v != self.x
            && self.v != self.y
            && self.x != self.y
            && g.has_edge(self.x, self.y)
            && g.has_edge(self.x, self.v)
            && g.has_edge(self.v, self.y)
    }
}

/// Lexicographically first covering edge for `v`: an in-neighbour to
/// out-neighbour edge, which exists whenever `T - v` is strongly connected.
pub fn covering_edge(t: &Digraph, v: usize) -> Result<CoveringEdge> {
    if v >= t.n() {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            order: t.n(),
        });
    }
    if t.in_degree(v) == 0 || t.out_degree(v) == 0 {
        return Err(Error::CoveringEdge {
            message: format!("vertex {v} lacks an in- or out-neighbour"),
        });
    }
    let (rest, map) = t.remove_vertices(&[v])?;
    if !is_strongly_connected(&rest) {
        return Err(Error::CoveringEdge {
            message: format!("removing vertex {v} disconnects the digraph"),
        });
    }
    let _ = map;
    for x in t.in_neighbors(v) {
        let mut targets = t.out_set(x).clone();
        targets.intersect_with(t.out_set(v));
        if let Some(y) = targets.first() {
            let ce = CoveringEdge { v, x, y };
            debug_assert!(ce.is_valid(t));
            return Ok(ce);
        }
    }
    Err(Error::CoveringEdge {
        message: format!("no edge from the in- to the out-neighbourhood of {v}"),
    })
}

/// Transitive almost-dominating set rooted at `v`, plus the exceptional set
/// it fails to dominate.
#[derive(Clone, Debug)]
pub struct DomSet {
    /// Construction order; the root comes first.
    pub set: Vec<usize>,
    pub exceptional: Vec<usize>,
}

fn dom_transitive(
    t: &Digraph,
    v: usize,
    c: usize,
    out_mode: bool,
) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    if v >= t.n() {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            order: t.n(),
        });
    }
    let root_degree = if out_mode {
        t.in_degree(v)
    } else {
        t.out_degree(v)
    };
    // hypothesis 2 <= c <= log d(v) - 1, i.e. d(v) >= 2^{c+1}
    if c < 2 {
        return Err(Error::Domination {
            vertex: v,
            message: format!("set-size cap must be at least 2, got {c}"),
        });
    }
    if root_degree < 1usize << (c + 1) {
        return Err(Error::Domination {
            vertex: v,
            message: format!(
                "degree {root_degree} is below 2^(c+1) = {}, cap {c} infeasible",
                1usize << (c + 1)
            ),
        });
    }
    let mut set = vec![v];
    let mut remainder = if out_mode {
        t.in_set(v).clone()
    } else {
        t.out_set(v).clone()
    };
    let mut trace = vec![remainder.count()];
    while set.len() < c && remainder.count() >= 4 {
        // vertex of minimum internal (in/out-)degree within the remainder
        let mut best = usize::MAX;
        let mut best_deg = usize::MAX;
        for u in remainder.iter() {
            let deg = if out_mode {
                t.in_set(u).intersection_count(&remainder)
            } else {
                t.out_set(u).intersection_count(&remainder)
            };
            if deg < best_deg {
                best_deg = deg;
                best = u;
            }
        }
        let picked = best;
        debug_assert!(best_deg * 2 <= remainder.count());
        set.push(picked);
        let shrink = if out_mode {
            t.in_set(picked)
        } else {
            t.out_set(picked)
        };
        remainder.intersect_with(shrink);
        let now = remainder.count();
        debug_assert!(now * 2 <= *trace.last().unwrap());
        trace.push(now);
    }
    debug_assert!(set.len() >= 2);
    Ok((set, remainder.to_vec(), trace))
}

/// Transitive subtournament with head `v` out-dominating everything outside
/// itself and the returned exceptional set; `|E| <= (1/2)^(c-1) d^-(v)`.
pub fn out_dom_transitive(t: &Digraph, v: usize, c: usize) -> Result<DomSet> {
    let (set, exceptional, _) = dom_transitive(t, v, c, true)?;
    Ok(DomSet { set, exceptional })
}

/// Mirror image: transitive subtournament with tail `v` in-dominating all but
/// the exceptional set; `|E| <= (1/2)^(c-1) d^+(v)`.
pub fn in_dom_transitive(t: &Digraph, v: usize, c: usize) -> Result<DomSet> {
    let (set, exceptional, _) = dom_transitive(t, v, c, false)?;
    Ok(DomSet { set, exceptional })
}

/// Halving trace of the construction (sizes of the undominated remainder).
pub fn dom_transitive_trace(t: &Digraph, v: usize, c: usize, out_mode: bool) -> Result<Vec<usize>> {
    let (_, _, trace) = dom_transitive(t, v, c, out_mode)?;
    Ok(trace)
}

/// Family of almost-dominating sets, one per requested root.
#[derive(Clone, Debug)]
pub struct DomFamily {
    pub roots: Vec<usize>,
    pub sets: Vec<Vec<usize>>,
    pub exceptionals: Vec<Vec<usize>>,
    /// true = out-dominating (heads at the roots), false = in-dominating
    pub out_mode: bool,
}

impl DomFamily {
    pub fn set_for(&self, root: usize) -> Option<&[usize]> {
        self.roots
            .iter()
            .position(|&r| r == root)
            .map(|i| self.sets[i].as_slice())
    }
}

fn dom_family(t: &Digraph, roots: &[usize], c: usize, out_mode: bool) -> Result<DomFamily> {
    let n = t.n();
    let hypothesis = (1usize << (c + 1)) + c * roots.len();
    let degrees = t.degrees();
    let min_deg = if out_mode {
        degrees.min_in
    } else {
        degrees.min_out
    };
    if min_deg < hypothesis {
        return Err(Error::Domination {
            vertex: roots.first().copied().unwrap_or(0),
            message: format!(
                "family hypothesis fails: min {}-degree {min_deg} < 2^(c+1) + c|U| = {hypothesis}",
                if out_mode { "in" } else { "out" }
            ),
        });
    }
    let mut sets: Vec<Vec<usize>> = Vec::with_capacity(roots.len());
    let mut exceptionals: Vec<Vec<usize>> = Vec::with_capacity(roots.len());
    let mut used = Bitset::new(n);
    let root_set = Bitset::from_iter(n, roots.iter().copied());
    for (idx, &v) in roots.iter().enumerate() {
        // work inside T minus previously used sets and the other roots
        let mut drop: Vec<usize> = used.to_vec();
        for u in root_set.iter() {
            if u != v && !used.contains(u) {
                drop.push(u);
            }
        }
        let (sub, map) = t.remove_vertices(&drop)?;
        let sub_v = map
            .iter()
            .position(|&old| old == v)
            .expect("root survives the deletions");
        let ds = match if out_mode {
            out_dom_transitive(&sub, sub_v, c)
        } else {
            in_dom_transitive(&sub, sub_v, c)
        } {
            Ok(ds) => ds,
            Err(Error::Domination { message, .. }) => {
                return Err(Error::Domination { vertex: v, message })
            }
            Err(e) => return Err(e),
        };
        let set: Vec<usize> = ds.set.iter().map(|&u| map[u]).collect();
        let exceptional: Vec<usize> = ds.exceptional.iter().map(|&u| map[u]).collect();
        for &u in &set {
            used.insert(u);
        }
        // trim the new set out of earlier exceptional sets
        for earlier in exceptionals.iter_mut() {
            earlier.retain(|u| !set.contains(u));
        }
        sets.push(set);
        exceptionals.push(exceptional);
        let _ = idx;
    }
    Ok(DomFamily {
        roots: roots.to_vec(),
        sets,
        exceptionals,
        out_mode,
    })
}

/// Pairwise disjoint transitive out-dominating sets, one per root in `roots`.
/// Requires `min in-degree >= 2^(c+1) + c |roots|`.
pub fn out_dom_family(t: &Digraph, roots: &[usize], c: usize) -> Result<DomFamily> {
    dom_family(t, roots, c, true)
}

/// In-dominating counterpart of [`out_dom_family`].
pub fn in_dom_family(t: &Digraph, roots: &[usize], c: usize) -> Result<DomFamily> {
    dom_family(t, roots, c, false)
}

/// Literal re-check of the six family guarantees against the host adjacency.
pub fn validate_dom_family(t: &Digraph, family: &DomFamily, c: usize) -> Vec<(&'static str, bool)> {
    let n = t.n();
    let out_mode = family.out_mode;
    let mut union_sets = Bitset::new(n);
    for s in &family.sets {
        for &v in s {
            union_sets.insert(v);
        }
    }

    // (i) each set dominates everything outside its exceptional set and the union
    let dominates = family.sets.iter().enumerate().all(|(i, set)| {
        let mut dominated = Bitset::new(n);
        for &u in set {
            let nbrs = if out_mode { t.out_set(u) } else { t.in_set(u) };
            dominated.union_with(nbrs);
        }
        (0..n).all(|w| {
            union_sets.contains(w)
                || family.exceptionals[i].contains(&w)
                || dominated.contains(w)
        })
    });

    // (ii) transitive with the root at the proper end
    let transitive = family.roots.iter().zip(&family.sets).all(|(&root, set)| {
        let ordered = set.iter().all(|&u| {
            set.iter().all(|&w| {
                u == w || {
                    let iu = set.iter().position(|&x| x == u).unwrap();
                    let iw = set.iter().position(|&x| x == w).unwrap();
                    // later construction picks beat earlier ones in out mode
                    if iu < iw {
                        if out_mode {
                            t.has_edge(w, u)
                        } else {
                            t.has_edge(u, w)
                        }
                    } else {
                        true
                    }
                }
            })
        });
        ordered && set.first() == Some(&root)
    });

    // (iii) exceptional sets small relative to the root degree
    let small = family.roots.iter().enumerate().all(|(i, &root)| {
        let d = if out_mode {
            t.in_degree(root)
        } else {
            t.out_degree(root)
        };
        family.exceptionals[i].len() * (1usize << (c - 1)) <= d
    });

    // (iv) sizes within [2, c]
    let sized = family.sets.iter().all(|s| s.len() >= 2 && s.len() <= c);

    // (v) sets avoid all exceptional sets
    let avoid = family.sets.iter().all(|s| {
        family
            .exceptionals
            .iter()
            .all(|e| s.iter().all(|v| !e.contains(v)))
    });

    // (vi) sets pairwise disjoint
    let disjoint = {
        let mut seen = Bitset::new(n);
        family.sets.iter().all(|s| {
            s.iter().all(|&v| {
                if seen.contains(v) {
                    false
                } else {
                    seen.insert(v);
                    true
                }
            })
        })
    };

    vec![
        ("dominates-outside-exceptional", dominates),
        ("transitive-rooted", transitive),
        ("exceptional-bound", small),
        ("size-range", sized),
        ("sets-avoid-exceptionals", avoid),
        ("pairwise-disjoint", disjoint),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotational_covering_edges() {
        let t = Digraph::rotational(2);
        let ce = covering_edge(&t, 0).unwrap();
        // scan of in-neighbours {3,4} against out-neighbours {1,2} lands on
        // the edge 4 -> 1 with activating edges 4 -> 0 and 0 -> 1
        assert!(ce.is_valid(&t));
        assert_eq!((ce.v, ce.x, ce.y), (0, 4, 1));
        for l in 2..=3 {
            let t = Digraph::rotational(l);
            for v in 0..t.n() {
                assert!(covering_edge(&t, v).unwrap().is_valid(&t));
            }
        }
    }

    #[test]
    fn triangle_covering_edge_fails() {
        let t = Digraph::rotational(1);
        assert!(matches!(
            covering_edge(&t, 0),
            Err(Error::CoveringEdge { .. })
        ));
    }

    #[test]
    fn transitive_head_dominates_quickly() {
        // global head of a transitive tournament: its in-neighbourhood is
        // everything, and the tail kills the whole remainder in one pick
        let t = Digraph::transitive(20);
        let ds = out_dom_transitive(&t, 19, 3).unwrap();
        assert_eq!(ds.set, vec![19, 0]);
        assert!(ds.exceptional.is_empty());
        // tail mirror: {tail, head} with empty remainder
        let ds = in_dom_transitive(&t, 0, 3).unwrap();
        assert_eq!(ds.set, vec![0, 19]);
        assert!(ds.exceptional.is_empty());
    }

    #[test]
    fn random_bound_and_halving() {
        let t = Digraph::random_tournament(200, 13);
        let v = (0..200).min_by_key(|&v| t.in_degree(v)).unwrap();
        let c = 4;
        if t.in_degree(v) >= 1 << (c + 1) {
            let ds = out_dom_transitive(&t, v, c).unwrap();
            assert!(ds.exceptional.len() * (1 << (c - 1)) <= t.in_degree(v));
            let trace = dom_transitive_trace(&t, v, c, true).unwrap();
            for w in trace.windows(2) {
                assert!(w[1] * 2 <= w[0]);
            }
        }
    }

    #[test]
    fn small_degree_precondition_fails() {
        let t = Digraph::rotational(2); // all degrees 2
        assert!(matches!(
            out_dom_transitive(&t, 0, 2),
            Err(Error::Domination { .. })
        ));
    }

    #[test]
    fn reversal_consistency() {
        let t = Digraph::random_tournament(150, 21);
        let rev = t.reversed();
        for v in [3, 77, 120] {
            let c = 3;
            let a = out_dom_transitive(&t, v, c);
            let b = in_dom_transitive(&rev, v, c);
            match (a, b) {
                (Ok(x), Ok(y)) => {
                    assert_eq!(x.set, y.set);
                    assert_eq!(x.exceptional, y.exceptional);
                }
                (Err(_), Err(_)) => {}
                other => panic!("diverged: {other:?}"),
            }
        }
    }

    #[test]
    fn singleton_family_matches_single_op() {
        let t = Digraph::random_tournament(300, 31);
        let c = 4;
        let fam = out_dom_family(&t, &[5], c).unwrap();
        assert_eq!(fam.sets.len(), 1);
        let checks = validate_dom_family(&t, &fam, c);
        assert!(checks.iter().all(|&(_, ok)| ok), "{checks:?}");
    }

    #[test]
    fn family_checker_passes() {
        let t = Digraph::random_tournament(500, 17);
        let roots = vec![0, 10, 20, 30, 40, 50];
        let fam = out_dom_family(&t, &roots, 4).unwrap();
        let checks = validate_dom_family(&t, &fam, 4);
        assert!(checks.iter().all(|&(_, ok)| ok), "{checks:?}");
        let fam = in_dom_family(&t, &roots, 4).unwrap();
        let checks = validate_dom_family(&t, &fam, 4);
        assert!(checks.iter().all(|&(_, ok)| ok), "{checks:?}");
    }

    #[test]
    fn family_hypothesis_failure_reported() {
        let t = Digraph::random_tournament(40, 3);
        // 2^(c+1) + c|U| = 64 + ... > any degree in a 40-tournament
        let err = out_dom_family(&t, &[0, 1], 5).unwrap_err();
        assert!(matches!(err, Error::Domination { .. }));
    }
}
