//! Path covers of oriented graphs and the head/tail extension transformations
//! that reshape a cover around bad vertex sets while keeping marked edges.

use crate::bits::Bitset;
use crate::error::Error;
use crate::graph::{Digraph, Path, PathSystem};
use crate::Result;

/// Path cover split into two parts; the extension operations treat the second
/// part as protected.
#[derive(Clone, Debug)]
pub struct CoverPartition {
    pub part1: Vec<Path>,
    pub part2: Vec<Path>,
}

impl CoverPartition {
    pub fn all_paths(&self) -> Vec<Path> {
        let mut v = self.part1.clone();
        v.extend(self.part2.iter().cloned());
        v
    }
}

/// Vertex-disjoint paths covering all of `g`, at most `n - min_total_degree`
/// of them. Tiny inputs are solved exactly by subset dynamic programming;
/// larger ones by vertex insertion with local repair.
pub fn gallai_milgram_cover(g: &Digraph) -> Result<PathSystem> {
    if !g.is_oriented() {
        return Err(Error::NotOriented);
    }
    let n = g.n();
    if n == 0 {
        return Ok(PathSystem::default());
    }
    let cover = if n <= 10 {
        exact_min_cover(g)
    } else {
        insertion_cover(g)
    };
    debug_assert!(cover.is_vertex_disjoint());
    debug_assert_eq!(cover.vertex_count(), n);
    let bound = n - g.min_total_degree();
    assert!(
        cover.len() <= bound.max(1),
        "cover of {} paths exceeds the degree bound {}",
        cover.len(),
        bound
    );
    Ok(cover)
}

// Exact minimum path partition for n <= 10: subset DP over Hamilton-path
// feasibility of induced subsets.
fn exact_min_cover(g: &Digraph) -> PathSystem {
    let n = g.n();
    let full = 1usize << n;
    // reach[mask]: bitmask of vertices that end a path spanning `mask`
    let mut reach = vec![0u16; full];
    for v in 0..n {
        reach[1 << v] = 1 << v;
    }
    for mask in 1..full {
        let ends = reach[mask];
        if ends == 0 {
            continue;
        }
        for last in 0..n {
            if ends >> last & 1 == 0 {
                continue;
            }
            for next in g.out_neighbors(last) {
                let bit = 1usize << next;
                if mask & bit == 0 {
                    reach[mask | bit] |= 1 << next;
                }
            }
        }
    }
    let mut best = vec![u32::MAX; full];
    let mut choice = vec![0usize; full];
    best[0] = 0;
    for mask in 1..full {
        let mut sub = mask;
        while sub > 0 {
            if reach[sub] != 0 && best[mask ^ sub] != u32::MAX && best[mask ^ sub] + 1 < best[mask]
            {
                best[mask] = best[mask ^ sub] + 1;
                choice[mask] = sub;
            }
            sub = (sub - 1) & mask;
        }
    }
    let mut paths = Vec::new();
    let mut mask = full - 1;
    while mask != 0 {
        let sub = choice[mask];
        paths.push(reconstruct_path(g, &reach, sub));
        mask ^= sub;
    }
    paths.sort();
    PathSystem::new(paths)
}

fn reconstruct_path(g: &Digraph, reach: &[u16], mask: usize) -> Path {
    let mut last = (0..16).find(|&v| reach[mask] >> v & 1 == 1).unwrap();
    let mut cur = mask;
    let mut rev = vec![last];
    while cur != 1 << last {
        let prev_mask = cur & !(1 << last);
        let prev = g
            .in_neighbors(last)
            .find(|&p| prev_mask >> p & 1 == 1 && reach[prev_mask] >> p & 1 == 1)
            .expect("dp reconstruction");
        cur = prev_mask;
        last = prev;
        rev.push(last);
    }
    rev.reverse();
    Path(rev)
}

// Insertion cover: add vertices in index order; when no insertion point
// exists try a one-step split-and-reattach repair before opening a new path.
//
// Size bound: a new path is opened only when every current path P has a
// vertex with no edge to or from v (if v were adjacent to all of P the
// orientations along P would have to flip somewhere, giving an insertion
// point). So at most non-degree(v) paths existed at that moment, and the
// final count is at most n - min_total_degree.
fn insertion_cover(g: &Digraph) -> PathSystem {
    let mut paths: Vec<Vec<usize>> = Vec::new();
    'vertices: for v in 0..g.n() {
        if try_insert(g, &mut paths, v) || try_repair(g, &mut paths, v) {
            continue 'vertices;
        }
        debug_assert!(paths
            .iter()
            .all(|p| p.iter().any(|&u| !g.adjacent(u, v))));
        paths.push(vec![v]);
    }
    PathSystem::new(paths.into_iter().map(Path).collect())
}

fn try_insert(g: &Digraph, paths: &mut [Vec<usize>], v: usize) -> bool {
    for path in paths.iter_mut() {
        if g.has_edge(v, path[0]) {
            path.insert(0, v);
            return true;
        }
        if g.has_edge(*path.last().unwrap(), v) {
            path.push(v);
            return true;
        }
        for i in 0..path.len() - 1 {
            if g.has_edge(path[i], v) && g.has_edge(v, path[i + 1]) {
                path.insert(i + 1, v);
                return true;
            }
        }
    }
    false
}

fn try_repair(g: &Digraph, paths: &mut Vec<Vec<usize>>, v: usize) -> bool {
    // break some path after an in-neighbour of v and re-home its suffix
    for pi in 0..paths.len() {
        for i in 0..paths[pi].len().saturating_sub(1) {
            let u = paths[pi][i];
            if !g.has_edge(u, v) {
                continue;
            }
            let suffix = paths[pi][i + 1..].to_vec();
            if let Some(attach) = find_attachment(g, paths, pi, &suffix) {
                paths[pi].truncate(i + 1);
                paths[pi].push(v);
                apply_attachment(paths, attach, suffix);
                return true;
            }
        }
    }
    // or break before an out-neighbour of v and re-home the prefix
    for pi in 0..paths.len() {
        for i in 1..paths[pi].len() {
            let w = paths[pi][i];
            if !g.has_edge(v, w) {
                continue;
            }
            let prefix = paths[pi][..i].to_vec();
            if let Some(attach) = find_attachment(g, paths, pi, &prefix) {
                let mut rest = vec![v];
                rest.extend_from_slice(&paths[pi][i..]);
                paths[pi] = rest;
                apply_attachment(paths, attach, prefix);
                return true;
            }
        }
    }
    false
}

enum Attachment {
    Append(usize),
    Prepend(usize),
}

fn find_attachment(
    g: &Digraph,
    paths: &[Vec<usize>],
    skip: usize,
    segment: &[usize],
) -> Option<Attachment> {
    for (qi, q) in paths.iter().enumerate() {
        if qi == skip {
            continue;
        }
        if g.has_edge(*q.last().unwrap(), segment[0]) {
            return Some(Attachment::Append(qi));
        }
        if g.has_edge(*segment.last().unwrap(), q[0]) {
            return Some(Attachment::Prepend(qi));
        }
    }
    None
}

fn apply_attachment(paths: &mut [Vec<usize>], attach: Attachment, segment: Vec<usize>) {
    match attach {
        Attachment::Append(qi) => paths[qi].extend(segment),
        Attachment::Prepend(qi) => {
            let mut joined = segment;
            joined.extend(paths[qi].iter().copied());
            paths[qi] = joined;
        }
    }
}

// ---- head/tail extension ----

struct CoverState {
    paths: Vec<Vec<usize>>,
}

impl CoverState {
    fn position_index(&self, n: usize) -> Vec<Option<(usize, usize)>> {
        let mut idx = vec![None; n];
        for (pi, p) in self.paths.iter().enumerate() {
            for (i, &v) in p.iter().enumerate() {
                idx[v] = Some((pi, i));
            }
        }
        idx
    }

}

fn check_cover_spans(g: &Digraph, paths: &[Path]) -> Result<()> {
    let mut seen = Bitset::new(g.n());
    for p in paths {
        for &v in p.vertices() {
            if v >= g.n() || seen.contains(v) {
                return Err(Error::Extension {
                    message: format!("input is not a path cover: vertex {v} repeated or out of range"),
                });
            }
            seen.insert(v);
        }
        if !p.edges().all(|(u, w)| g.has_edge(u, w)) {
            return Err(Error::Extension {
                message: "input cover contains a non-edge".into(),
            });
        }
    }
    if seen.count() != g.n() {
        return Err(Error::Extension {
            message: "input cover does not span the digraph".into(),
        });
    }
    Ok(())
}

// X = vertices whose closed path-neighbourhood meets I or J
fn blocked_set(state: &CoverState, n: usize, bad: &Bitset) -> Bitset {
    let mut x = Bitset::new(n);
    for p in &state.paths {
        for (i, &v) in p.iter().enumerate() {
            if bad.contains(v) {
                x.insert(v);
                if i > 0 {
                    x.insert(p[i - 1]);
                }
                if i + 1 < p.len() {
                    x.insert(p[i + 1]);
                }
            }
        }
    }
    x
}

#[allow(clippy::too_many_arguments)]
fn extension_preconditions(
    g: &Digraph,
    cover: &CoverPartition,
    i_set: &[usize],
    j_set: &[usize],
    f_edges: &[(usize, usize)],
    strengthened: bool,
    heads_mode: bool,
    check_degrees: bool,
) -> Result<()> {
    let n = g.n();
    let i_bits = Bitset::from_iter(n, i_set.iter().copied());
    for &v in j_set {
        if i_bits.contains(v) {
            return Err(Error::Extension {
                message: format!("I and J must be disjoint, both contain {v}"),
            });
        }
    }
    check_cover_spans(g, &cover.all_paths())?;
    for p in &cover.part2 {
        let guarded = if heads_mode { p.head() } else { p.tail() };
        if i_bits.contains(guarded) {
            return Err(Error::Extension {
                message: format!(
                    "protected part has a {} in I: vertex {guarded}",
                    if heads_mode { "head" } else { "tail" }
                ),
            });
        }
    }
    let cover_edges: std::collections::HashSet<(usize, usize)> = cover
        .all_paths()
        .iter()
        .flat_map(|p| p.edges().collect::<Vec<_>>())
        .collect();
    for e in f_edges {
        if !cover_edges.contains(e) {
            return Err(Error::Extension {
                message: format!("preserved edge {e:?} is not on the cover"),
            });
        }
    }
    if !check_degrees {
        return Ok(());
    }
    let p2_vertices: usize = cover.part2.iter().map(|p| p.len()).sum();
    let mut need = 3 * (i_set.len() + j_set.len()) + 2 * f_edges.len();
    if strengthened {
        need += p2_vertices;
    }
    for &v in i_set {
        let d = if heads_mode {
            g.out_degree(v)
        } else {
            g.in_degree(v)
        };
        if d <= need {
            return Err(if heads_mode {
                Error::OutDegreeTooLow {
                    vertex: v,
                    got: d,
                    need: need + 1,
                }
            } else {
                Error::InDegreeTooLow {
                    vertex: v,
                    got: d,
                    need: need + 1,
                }
            });
        }
    }
    Ok(())
}

/// Rework a path cover so no path head lies in `i_set`, preserving heads in
/// `j_set`, all tails in `i_set ∪ j_set`, and every edge of `f_edges`. With
/// `strengthened`, the protected `part2` paths survive verbatim.
pub fn extend_heads(
    g: &Digraph,
    cover: &CoverPartition,
    i_set: &[usize],
    j_set: &[usize],
    f_edges: &[(usize, usize)],
    strengthened: bool,
) -> Result<PathSystem> {
    extension_preconditions(g, cover, i_set, j_set, f_edges, strengthened, true, true)?;
    extend_loop(g, cover, i_set, j_set, f_edges, strengthened, true)
}

/// Mirror image of [`extend_heads`] under edge reversal: no tails in `i_set`.
pub fn extend_tails(
    g: &Digraph,
    cover: &CoverPartition,
    i_set: &[usize],
    j_set: &[usize],
    f_edges: &[(usize, usize)],
    strengthened: bool,
) -> Result<PathSystem> {
    extension_preconditions(g, cover, i_set, j_set, f_edges, strengthened, false, true)?;
    extend_loop(g, cover, i_set, j_set, f_edges, strengthened, false)
}

/// [`extend_heads`] without the sufficient degree precondition: structural
/// requirements are still enforced, and each round fails only if no
/// admissible neighbour actually exists.
pub fn extend_heads_lenient(
    g: &Digraph,
    cover: &CoverPartition,
    i_set: &[usize],
    j_set: &[usize],
    f_edges: &[(usize, usize)],
    strengthened: bool,
) -> Result<PathSystem> {
    extension_preconditions(g, cover, i_set, j_set, f_edges, strengthened, true, false)?;
    extend_loop(g, cover, i_set, j_set, f_edges, strengthened, true)
}

/// Lenient counterpart of [`extend_tails`]; see [`extend_heads_lenient`].
pub fn extend_tails_lenient(
    g: &Digraph,
    cover: &CoverPartition,
    i_set: &[usize],
    j_set: &[usize],
    f_edges: &[(usize, usize)],
    strengthened: bool,
) -> Result<PathSystem> {
    extension_preconditions(g, cover, i_set, j_set, f_edges, strengthened, false, false)?;
    extend_loop(g, cover, i_set, j_set, f_edges, strengthened, false)
}

fn extend_loop(
    g: &Digraph,
    cover: &CoverPartition,
    i_set: &[usize],
    j_set: &[usize],
    f_edges: &[(usize, usize)],
    strengthened: bool,
    heads_mode: bool,
) -> Result<PathSystem> {
    let n = g.n();
    let i_bits = Bitset::from_iter(n, i_set.iter().copied());
    let mut bad = i_bits.clone();
    for &v in j_set {
        bad.insert(v);
    }
    let mut forbidden = Bitset::new(n); // V(F), plus V(part2) when strengthened
    for &(a, b) in f_edges {
        forbidden.insert(a);
        forbidden.insert(b);
    }
    if strengthened {
        for p in &cover.part2 {
            for &v in p.vertices() {
                forbidden.insert(v);
            }
        }
    }

    let mut state = CoverState {
        paths: cover
            .all_paths()
            .iter()
            .map(|p| p.vertices().to_vec())
            .collect(),
    };
    let rounds = cover.part1.len();
    for round in 1..=rounds {
        let endpoint_of = |p: &Vec<usize>| if heads_mode { *p.last().unwrap() } else { p[0] };
        let exposed: Vec<usize> = state
            .paths
            .iter()
            .map(endpoint_of)
            .filter(|&h| i_bits.contains(h))
            .collect();
        if exposed.len() <= rounds - round {
            continue;
        }
        let v = *exposed.iter().min().unwrap();
        let pi = state
            .paths
            .iter()
            .position(|p| endpoint_of(p) == v)
            .unwrap();
        let x = blocked_set(&state, n, &bad);
        let neighbours = if heads_mode { g.out_set(v) } else { g.in_set(v) };
        let w = neighbours
            .iter()
            .find(|&w| !x.contains(w) && !forbidden.contains(w))
            .ok_or_else(|| Error::Extension {
                message: format!(
                    "no admissible neighbour to extend endpoint {v} at round {round}"
                ),
            })?;
        split_and_extend(&mut state, n, pi, v, w, heads_mode);
        debug_assert!({
            let still_exposed = state
                .paths
                .iter()
                .map(|p| if heads_mode { *p.last().unwrap() } else { p[0] })
                .filter(|&h| i_bits.contains(h))
                .count();
            still_exposed <= rounds - round
        });
    }
    let result = PathSystem::new(state.paths.into_iter().map(Path).collect());
    debug_assert!({
        let report = validate_extension(g, cover, &result, i_set, j_set, f_edges, strengthened, heads_mode);
        report.all_hold()
    });
    Ok(result)
}

// Split the path containing w around w, then glue w onto v's path.
fn split_and_extend(state: &mut CoverState, n: usize, pi: usize, v: usize, w: usize, heads_mode: bool) {
    let idx = state.position_index(n);
    let (qi, wpos) = idx[w].expect("w lies on the cover");
    let q = state.paths[qi].clone();
    let before: Vec<usize> = q[..wpos].to_vec();
    let after: Vec<usize> = q[wpos + 1..].to_vec();

    let make_extended = |mut seg: Vec<usize>| -> Vec<usize> {
        if heads_mode {
            seg.push(w);
            seg
        } else {
            let mut joined = vec![w];
            joined.extend(seg);
            joined
        }
    };

    if qi != pi {
        // v's path is untouched by the split
        let mut replacement = Vec::new();
        if !before.is_empty() {
            replacement.push(before);
        }
        if !after.is_empty() {
            replacement.push(after);
        }
        let extended = make_extended(state.paths[pi].clone());
        state.paths[pi] = extended;
        state.paths.splice(qi..=qi, replacement);
    } else {
        // w lies on v's own path; v sits in the segment away from w
        let v_in_before = before.contains(&v);
        let (v_segment, other) = if v_in_before {
            (before, after)
        } else {
            (after, before)
        };
        debug_assert!(v_segment.contains(&v));
        let mut replacement = Vec::new();
        if !other.is_empty() {
            replacement.push(other);
        }
        replacement.push(make_extended(v_segment));
        state.paths.splice(qi..=qi, replacement);
    }
}

/// Per-condition outcome of the six extension postconditions.
#[derive(Clone, Debug)]
pub struct ExtensionReport {
    pub conditions: Vec<(&'static str, bool)>,
}

impl ExtensionReport {
    pub fn all_hold(&self) -> bool {
        self.conditions.iter().all(|&(_, ok)| ok)
    }
}

/// Machine-check the extension postconditions; used as the test oracle.
#[allow(clippy::too_many_arguments)]
pub fn validate_extension(
    g: &Digraph,
    original: &CoverPartition,
    result: &PathSystem,
    i_set: &[usize],
    j_set: &[usize],
    f_edges: &[(usize, usize)],
    strengthened: bool,
    heads_mode: bool,
) -> ExtensionReport {
    let n = g.n();
    let i_bits = Bitset::from_iter(n, i_set.iter().copied());
    let j_bits = Bitset::from_iter(n, j_set.iter().copied());
    let result_heads: Vec<usize> = result.heads();
    let result_tails: Vec<usize> = result.tails();
    let (moved, fixed) = if heads_mode {
        (&result_heads, &result_tails)
    } else {
        (&result_tails, &result_heads)
    };
    let orig_paths = original.all_paths();
    let orig_sys = PathSystem::new(orig_paths.clone());
    let (orig_moved, orig_fixed) = if heads_mode {
        (orig_sys.heads(), orig_sys.tails())
    } else {
        (orig_sys.tails(), orig_sys.heads())
    };

    let is_cover = result.is_vertex_disjoint()
        && result.vertex_count() == n
        && result
            .paths()
            .iter()
            .all(|p| p.edges().all(|(u, w)| g.has_edge(u, w)));

    let cond1 = moved.iter().all(|&h| !i_bits.contains(h));

    let in_j = |vs: &[usize]| {
        let mut set: Vec<usize> = vs.iter().copied().filter(|&v| j_bits.contains(v)).collect();
        set.sort();
        set
    };
    let cond2 = in_j(moved) == in_j(&orig_moved);

    let in_ij = |vs: &[usize]| {
        let mut set: Vec<usize> = vs
            .iter()
            .copied()
            .filter(|&v| i_bits.contains(v) || j_bits.contains(v))
            .collect();
        set.sort();
        set
    };
    let cond3 = in_ij(fixed) == in_ij(&orig_fixed);

    let result_edges: std::collections::HashSet<(usize, usize)> =
        result.edges().collect();
    let cond4 = f_edges.iter().all(|e| result_edges.contains(e));

    let cond5 = result.len() <= orig_paths.len() + original.part1.len();

    let surviving = original
        .part2
        .iter()
        .filter(|p| result.paths().contains(p))
        .count();
    let cond6 = if strengthened {
        surviving == original.part2.len()
    } else {
        surviving + original.part1.len() >= original.part2.len()
    };

    ExtensionReport {
        conditions: vec![
            ("cover", is_cover),
            ("no-moved-endpoints-in-I", cond1),
            ("moved-endpoints-in-J-preserved", cond2),
            ("fixed-endpoints-in-I∪J-preserved", cond3),
            ("marked-edges-preserved", cond4),
            ("count-bound", cond5),
            ("protected-part-survival", cond6),
        ],
    }
}
