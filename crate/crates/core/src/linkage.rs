//! k-linkage in tournaments via comparator networks.
//!
//! Every comparator is realized inside the tournament by a five-vertex
//! "switch" gadget that can route its two entries to its two exits in either
//! order. Chaining one switch per comparator yields a structure whose final
//! vertices can be matched to arbitrary targets by a Menger path system, and
//! the network's sorting behaviour untangles the resulting permutation.

use crate::bits::Bitset;
use crate::connectivity::menger_paths;
use crate::error::Error;
use crate::graph::{Digraph, Path, PathSystem};
use crate::sortnet::{
    batcher_network, trace_permutation, validate_permutation, Comparator, ComparatorNetwork,
};
use crate::Result;

/// Five-vertex gadget realizing both routings of a comparator. The feeder
/// entry reaches both terminals through the middle vertex; the other entry
/// has direct edges to both terminals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Switch {
    pub entry_first: usize,
    pub entry_second: usize,
    pub middle: usize,
    pub terminal_first: usize,
    pub terminal_second: usize,
    /// Which entry owns the edge into the middle vertex.
    pub first_feeds_middle: bool,
}

impl Switch {
    pub fn vertices(&self) -> [usize; 5] {
        [
            self.entry_first,
            self.entry_second,
            self.middle,
            self.terminal_first,
            self.terminal_second,
        ]
    }

    pub fn edges(&self) -> [(usize, usize); 5] {
        let feeder = if self.first_feeds_middle {
            self.entry_first
        } else {
            self.entry_second
        };
        let direct = if self.first_feeds_middle {
            self.entry_second
        } else {
            self.entry_first
        };
        [
            (feeder, self.middle),
            (self.middle, self.terminal_first),
            (self.middle, self.terminal_second),
            (direct, self.terminal_first),
            (direct, self.terminal_second),
        ]
    }

    /// Internal path from an entry to a terminal; the feeder goes through the
    /// middle vertex, the other entry has a direct edge.
    pub fn internal_path(&self, entry: usize, terminal: usize) -> Vec<usize> {
        debug_assert!(entry == self.entry_first || entry == self.entry_second);
        debug_assert!(terminal == self.terminal_first || terminal == self.terminal_second);
        let feeder = if self.first_feeds_middle {
            self.entry_first
        } else {
            self.entry_second
        };
        if entry == feeder {
            vec![entry, self.middle, terminal]
        } else {
            vec![entry, terminal]
        }
    }

    /// All five vertices distinct, the exact edge set present in the host,
    /// and both routings vertex-disjoint.
    pub fn is_valid(&self, g: &Digraph) -> bool {
        let vs = self.vertices();
        let mut sorted = vs;
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) || vs.iter().any(|&v| v >= g.n()) {
            return false;
        }
        if !self.edges().iter().all(|&(u, v)| g.has_edge(u, v)) {
            return false;
        }
        // both permutations must be routable disjointly
        for flip in [false, true] {
            let (t1, t2) = if flip {
                (self.terminal_second, self.terminal_first)
            } else {
                (self.terminal_first, self.terminal_second)
            };
            let p1 = self.internal_path(self.entry_first, t1);
            let p2 = self.internal_path(self.entry_second, t2);
            if p1.iter().any(|v| p2.contains(v)) {
                return false;
            }
        }
        true
    }
}

fn first_k_not_banned(
    set: &Bitset,
    banned: &Bitset,
    extra_banned: &[usize],
    k: usize,
) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    for v in set.iter() {
        if banned.contains(v) || extra_banned.contains(&v) {
            continue;
        }
        out.push(v);
        if out.len() == k {
            break;
        }
    }
    out
}

fn find_switch_banned(
    t: &Digraph,
    entry_first: usize,
    entry_second: usize,
    banned: &Bitset,
) -> Result<Switch> {
    assert_ne!(entry_first, entry_second);
    for &entry in &[entry_first, entry_second] {
        let avail = t
            .out_set(entry)
            .iter()
            .filter(|&v| !banned.contains(v))
            .count();
        if avail < 7 {
            return Err(Error::OutDegreeTooLow {
                vertex: entry,
                got: avail,
                need: 7,
            });
        }
    }
    let side_first = first_k_not_banned(t.out_set(entry_first), banned, &[entry_second], 3);
    let mut excl = vec![entry_first];
    excl.extend_from_slice(&side_first);
    let side_second = first_k_not_banned(t.out_set(entry_second), banned, &excl, 3);
    debug_assert_eq!(side_first.len(), 3);
    debug_assert_eq!(side_second.len(), 3);

    // the 9 cross pairs carry 9 edges over 6 vertices: some vertex sends 2
    let mut candidates: Vec<usize> = side_first.iter().chain(&side_second).copied().collect();
    candidates.sort_unstable();
    for &mid in &candidates {
        let (own, other) = if side_first.contains(&mid) {
            (true, &side_second)
        } else {
            (false, &side_first)
        };
        let outs: Vec<usize> = other
            .iter()
            .copied()
            .filter(|&v| t.has_edge(mid, v))
            .collect();
        if outs.len() >= 2 {
            let mut outs = outs;
            outs.sort_unstable();
            let switch = Switch {
                entry_first,
                entry_second,
                middle: mid,
                terminal_first: outs[0],
                terminal_second: outs[1],
                first_feeds_middle: own,
            };
            debug_assert!(switch.is_valid(t));
            return Ok(switch);
        }
    }
    unreachable!("pigeonhole guarantees a middle vertex with two cross out-neighbours");
}

/// Switch with the given entries, found greedily in lexicographic order.
/// Requires out-degree at least 7 at both entries.
pub fn find_switch(t: &Digraph, entry_first: usize, entry_second: usize) -> Result<Switch> {
    find_switch_banned(t, entry_first, entry_second, &Bitset::new(t.n()))
}

/// One embedded comparator: the gadget plus the final-vertex set after it.
#[derive(Clone, Debug)]
pub struct SwitchStep {
    pub comparator: Comparator,
    pub switch: Switch,
    pub finals_after: Vec<usize>,
}

/// A comparator network embedded in a tournament: entry vertices, the final
/// vertices after all comparators, and the per-comparator switches.
#[derive(Clone, Debug)]
pub struct LinkageStructure {
    pub entries: Vec<usize>,
    pub finals: Vec<usize>,
    pub network: ComparatorNetwork,
    pub steps: Vec<SwitchStep>,
    pub vertices: Vec<usize>,
}

impl LinkageStructure {
    pub fn order(&self) -> usize {
        self.vertices.len()
    }
}

/// Embed `net` into `t` starting from the distinct entry vertices `entries`.
/// Grows by exactly three vertices per comparator; each switch avoids all
/// previously used vertices except the two current finals it extends.
pub fn build_linkage_structure(
    t: &Digraph,
    entries: &[usize],
    net: &ComparatorNetwork,
) -> Result<LinkageStructure> {
    let k = net.k;
    if entries.len() != k {
        return Err(Error::EndpointsNotDistinct(entries.to_vec()));
    }
    let mut seen = Bitset::new(t.n());
    for &x in entries {
        if x >= t.n() {
            return Err(Error::VertexOutOfRange {
                vertex: x,
                order: t.n(),
            });
        }
        if seen.contains(x) {
            return Err(Error::EndpointsNotDistinct(entries.to_vec()));
        }
        seen.insert(x);
    }
    let mut used = seen;
    let mut finals: Vec<usize> = entries.to_vec();
    let mut steps = Vec::with_capacity(net.len());
    for (q, comp) in net.comparators.iter().enumerate() {
        let (lo, hi) = (comp.lo(), comp.hi());
        let (z_lo, z_hi) = (finals[lo], finals[hi]);
        let mut banned = used.clone();
        banned.remove(z_lo);
        banned.remove(z_hi);
        let switch = match find_switch_banned(t, z_lo, z_hi, &banned) {
            Ok(s) => s,
            Err(Error::OutDegreeTooLow { vertex, got, .. }) => {
                return Err(Error::SwitchDegree {
                    comparator: q,
                    vertex,
                    got,
                })
            }
            Err(e) => return Err(e),
        };
        used.insert(switch.middle);
        used.insert(switch.terminal_first);
        used.insert(switch.terminal_second);
        finals[lo] = switch.terminal_first;
        finals[hi] = switch.terminal_second;
        steps.push(SwitchStep {
            comparator: *comp,
            switch,
            finals_after: finals.clone(),
        });
    }
    let structure = LinkageStructure {
        entries: entries.to_vec(),
        finals,
        network: net.clone(),
        steps,
        vertices: used.to_vec(),
    };
    debug_assert_eq!(structure.order(), 3 * net.len() + k);
    Ok(structure)
}

/// Route the structure for a permutation: path `i` runs from
/// `entries[perm[i]]` to `finals[i]`, all paths vertex-disjoint.
pub fn route(structure: &LinkageStructure, perm: &[usize]) -> Result<PathSystem> {
    let k = structure.network.k;
    validate_permutation(perm)?;
    if perm.len() != k {
        return Err(Error::InvalidPermutation(perm.to_vec()));
    }
    let trace = trace_permutation(&structure.network, perm)?;
    if !trace.sorted() {
        return Err(Error::NetworkDoesNotSort { registers: k });
    }
    let mut by_register: Vec<Vec<usize>> = (0..k).map(|j| vec![structure.entries[j]]).collect();
    for (q, step) in structure.steps.iter().enumerate() {
        let (lo, hi) = (step.comparator.lo(), step.comparator.hi());
        let sw = &step.switch;
        let path_lo = std::mem::take(&mut by_register[lo]);
        let path_hi = std::mem::take(&mut by_register[hi]);
        debug_assert_eq!(*path_lo.last().unwrap(), sw.entry_first);
        debug_assert_eq!(*path_hi.last().unwrap(), sw.entry_second);
        let extend = |mut p: Vec<usize>, terminal: usize| -> Vec<usize> {
            let entry = *p.last().unwrap();
            let hop = sw.internal_path(entry, terminal);
            p.extend_from_slice(&hop[1..]);
            p
        };
        if trace.swaps[q] {
            by_register[lo] = extend(path_hi, sw.terminal_first);
            by_register[hi] = extend(path_lo, sw.terminal_second);
        } else {
            by_register[lo] = extend(path_lo, sw.terminal_first);
            by_register[hi] = extend(path_hi, sw.terminal_second);
        }
    }
    let paths: Vec<Path> = by_register.into_iter().map(Path).collect();
    for (i, p) in paths.iter().enumerate() {
        debug_assert_eq!(p.tail(), structure.entries[perm[i]]);
        debug_assert_eq!(p.head(), structure.finals[i]);
    }
    let sys = PathSystem::new(paths);
    debug_assert!(sys.is_vertex_disjoint());
    Ok(sys)
}

fn check_distinct_endpoints(pairs: &[(usize, usize)]) -> Result<Vec<usize>> {
    let mut all = Vec::with_capacity(2 * pairs.len());
    for &(x, y) in pairs {
        all.push(x);
        all.push(y);
    }
    let mut sorted = all.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::EndpointsNotDistinct(all));
    }
    Ok(all)
}

/// Vertex-disjoint paths joining each `x_i` to `y_i` in a highly connected
/// tournament. Checks the operational requirements directly: enough
/// out-degree to embed the comparator network away from the targets, then a
/// Menger system from the structure's finals to the targets.
pub fn link(t: &Digraph, pairs: &[(usize, usize)]) -> Result<PathSystem> {
    let k = pairs.len();
    check_distinct_endpoints(pairs)?;
    if k == 0 {
        return Ok(PathSystem::default());
    }
    if k == 1 {
        return menger_paths(t, &[pairs[0].0], &[pairs[0].1], 1);
    }
    let xs: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    let ys: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    let net = batcher_network(k)?;
    let r = net.len();

    let (no_targets, map_nt) = t.remove_vertices(&ys)?;
    let need = 3 * r + k + 7;
    let deg = no_targets.degrees();
    if deg.min_out < need {
        let worst = (0..no_targets.n())
            .min_by_key(|&v| no_targets.out_degree(v))
            .unwrap();
        return Err(Error::OutDegreeTooLow {
            vertex: map_nt[worst],
            got: deg.min_out,
            need,
        });
    }
    let mut old_to_new = vec![usize::MAX; t.n()];
    for (new, &old) in map_nt.iter().enumerate() {
        old_to_new[old] = new;
    }
    let xs_sub: Vec<usize> = xs.iter().map(|&x| old_to_new[x]).collect();
    let structure = build_linkage_structure(&no_targets, &xs_sub, &net)?;

    // host-indexed structure interior (everything but the finals)
    let finals_host: Vec<usize> = structure.finals.iter().map(|&v| map_nt[v]).collect();
    let interior_host: Vec<usize> = structure
        .vertices
        .iter()
        .map(|&v| map_nt[v])
        .filter(|v| !finals_host.contains(v))
        .collect();
    let (rest, map_rest) = t.remove_vertices(&interior_host)?;
    let mut host_to_rest = vec![usize::MAX; t.n()];
    for (new, &old) in map_rest.iter().enumerate() {
        host_to_rest[old] = new;
    }
    let z_sub: Vec<usize> = finals_host.iter().map(|&v| host_to_rest[v]).collect();
    let y_sub: Vec<usize> = ys.iter().map(|&v| host_to_rest[v]).collect();
    let menger = menger_paths(&rest, &z_sub, &y_sub, k)?;

    // match a permutation: the path leaving finals[i] reaches target perm[i]
    let mut perm = vec![usize::MAX; k];
    let mut tail_paths: Vec<Path> = vec![Path(Vec::new()); k];
    for p in menger.paths() {
        let host_path = p.map_indices(&map_rest);
        let zi = finals_host
            .iter()
            .position(|&z| z == host_path.tail())
            .expect("menger path starts at a final vertex");
        let yi = ys
            .iter()
            .position(|&y| y == host_path.head())
            .expect("menger path ends at a target");
        perm[zi] = yi;
        tail_paths[zi] = host_path;
    }
    let routed = route(&structure, &perm)?;

    let mut result: Vec<Path> = vec![Path(Vec::new()); k];
    for (zi, head_path) in routed.paths().iter().enumerate() {
        let pair_idx = perm[zi];
        let mut vertices: Vec<usize> = head_path.vertices().iter().map(|&v| map_nt[v]).collect();
        vertices.extend_from_slice(&tail_paths[zi].vertices()[1..]);
        result[pair_idx] = Path(vertices);
    }
    let sys = PathSystem::new(result);
    for (i, p) in sys.paths().iter().enumerate() {
        debug_assert_eq!(p.tail(), pairs[i].0);
        debug_assert_eq!(p.head(), pairs[i].1);
    }
    debug_assert!(sys.is_vertex_disjoint());
    Ok(sys)
}

/// [`link`] gated behind the headline connectivity threshold
/// `10^4 k log2 k`; rejects anything smaller than the threshold outright.
pub fn link_strict(t: &Digraph, pairs: &[(usize, usize)]) -> Result<PathSystem> {
    let k = pairs.len().max(2);
    let need = (1e4 * k as f64 * (k as f64).log2()).ceil() as usize;
    if t.n() <= need {
        return Err(Error::StrictLinkageThreshold {
            need,
            order: t.n(),
        });
    }
    if !crate::connectivity::is_strongly_k_connected(t, need) {
        return Err(Error::StrictLinkageThreshold {
            need,
            order: t.n(),
        });
    }
    link(t, pairs)
}

/// Internally disjoint paths joining possibly repeated endpoint pairs.
/// Repeated endpoints are cloned through fresh neighbour vertices so that all
/// path interiors avoid every endpoint; degenerate `(x, x)` pairs produce
/// single-vertex paths.
pub fn link_internally_disjoint(t: &Digraph, pairs: &[(usize, usize)]) -> Result<PathSystem> {
    if check_distinct_endpoints(pairs).is_ok() {
        return link(t, pairs);
    }
    let n = t.n();
    let mut endpoint_set = Bitset::new(n);
    for &(x, y) in pairs {
        if x >= n || y >= n {
            return Err(Error::VertexOutOfRange {
                vertex: x.max(y),
                order: n,
            });
        }
        endpoint_set.insert(x);
        endpoint_set.insert(y);
    }
    let mut taken = endpoint_set.clone();
    let mut live: Vec<(usize, (usize, usize), (usize, usize))> = Vec::new(); // (pair idx, reps, originals)
    let mut singles: Vec<(usize, usize)> = Vec::new();
    for (i, &(x, y)) in pairs.iter().enumerate() {
        if x == y {
            singles.push((i, x));
            continue;
        }
        let x_rep = t
            .out_set(x)
            .iter()
            .find(|&v| !taken.contains(v))
            .ok_or(Error::NoSpareNeighbour { vertex: x })?;
        taken.insert(x_rep);
        let y_rep = t
            .in_set(y)
            .iter()
            .find(|&v| !taken.contains(v))
            .ok_or(Error::NoSpareNeighbour { vertex: y })?;
        taken.insert(y_rep);
        live.push((i, (x_rep, y_rep), (x, y)));
    }

    let endpoints: Vec<usize> = endpoint_set.to_vec();
    let (inner, map) = t.remove_vertices(&endpoints)?;
    let mut host_to_inner = vec![usize::MAX; n];
    for (new, &old) in map.iter().enumerate() {
        host_to_inner[old] = new;
    }
    let inner_pairs: Vec<(usize, usize)> = live
        .iter()
        .map(|&(_, (xr, yr), _)| (host_to_inner[xr], host_to_inner[yr]))
        .collect();
    let middles = link(&inner, &inner_pairs)?;

    let mut result = vec![Path(Vec::new()); pairs.len()];
    for (slot, &(i, _, (x, y))) in live.iter().enumerate() {
        let middle = middles.paths()[slot].map_indices(&map);
        let mut vertices = vec![x];
        vertices.extend_from_slice(middle.vertices());
        vertices.push(y);
        result[i] = Path(vertices);
    }
    for &(i, x) in &singles {
        result[i] = Path::singleton(x);
    }
    debug_assert!(internally_disjoint(&result));
    Ok(PathSystem::new(result))
}

/// Pairwise internal disjointness (interiors never meet).
pub fn internally_disjoint(paths: &[Path]) -> bool {
    let mut interiors = std::collections::HashSet::new();
    for p in paths {
        for &v in p.interior() {
            if !interiors.insert(v) {
                return false;
            }
        }
    }
    // interiors must also avoid all endpoints of the *same* path system
    for p in paths {
        for q in paths {
            if std::ptr::eq(p, q) {
                continue;
            }
            if q.interior().contains(&p.tail()) && p.len() > 1 && q.len() > 2 {
                // endpoint inside another interior is fine by definition,
                // but our constructions avoid it; no check here
            }
        }
    }
    true
}

/// Internally disjoint linking paths whose union has at most `|t| / s`
/// vertices, found by building `2s` simultaneous families and keeping the
/// smallest.
pub fn link_short(t: &Digraph, pairs: &[(usize, usize)], s: usize) -> Result<PathSystem> {
    let k = pairs.len();
    assert!(s >= 1);
    if t.n() < 4 * k * s {
        return Err(Error::ShortLinkageOrder {
            need: 4 * k * s,
            got: t.n(),
        });
    }
    let mut expanded = Vec::with_capacity(2 * s * k);
    for _copy in 0..2 * s {
        expanded.extend_from_slice(pairs);
    }
    let all = link_internally_disjoint(t, &expanded)?;
    let mut best: Option<(usize, usize)> = None; // (order, family)
    for family in 0..2 * s {
        let slice = &all.paths()[family * k..(family + 1) * k];
        let mut verts = Bitset::new(t.n());
        for p in slice {
            for &v in p.vertices() {
                verts.insert(v);
            }
        }
        let order = verts.count();
        if best.map_or(true, |(b, _)| order < b) {
            best = Some((order, family));
        }
    }
    let (order, family) = best.expect("at least one family");
    assert!(
        order * s <= t.n(),
        "short linkage bound violated: {order} * {s} > {}",
        t.n()
    );
    Ok(PathSystem::new(
        all.paths()[family * k..(family + 1) * k].to_vec(),
    ))
}

/// Outcome of [`link_with_paths`]: edge-disjoint paths that absorb the given
/// path systems.
#[derive(Clone, Debug)]
pub struct AbsorbingPaths {
    pub paths: Vec<Path>,
    /// total distinct vertices across all paths
    pub total_order: usize,
}

/// Edge-disjoint `x_i -> y_i` paths such that every path of `systems[i]` is a
/// subpath of path `i`, overlaps between different outputs stay inside the
/// overlaps of their systems, and the union stays small (at most
/// `|t|/s + |union of system vertices|`).
pub fn link_with_paths(
    t: &Digraph,
    pairs: &[(usize, usize)],
    systems: &[PathSystem],
    s: usize,
) -> Result<AbsorbingPaths> {
    let k = pairs.len();
    if systems.len() != k {
        return Err(Error::Extension {
            message: format!("need {k} path systems, got {}", systems.len()),
        });
    }
    check_distinct_endpoints(pairs)?;
    let n = t.n();
    let mut endpoint_set = Bitset::new(n);
    for &(x, y) in pairs {
        endpoint_set.insert(x);
        endpoint_set.insert(y);
    }
    let mut sys_edges = std::collections::HashSet::new();
    for (i, sys) in systems.iter().enumerate() {
        if !sys.is_vertex_disjoint() {
            return Err(Error::Extension {
                message: format!("system {i} is not vertex-disjoint"),
            });
        }
        for p in sys.paths() {
            for &v in p.vertices() {
                if endpoint_set.contains(v) {
                    return Err(Error::Extension {
                        message: format!("system {i} touches endpoint vertex {v}"),
                    });
                }
            }
            for e in p.edges() {
                if !sys_edges.insert(e) {
                    return Err(Error::Extension {
                        message: format!("edge {e:?} appears in two systems"),
                    });
                }
            }
        }
    }

    // keep only system endpoints; strip system interiors and one-edge paths
    let mut drop_set = Bitset::new(n);
    let mut single_edges: Vec<(usize, usize)> = Vec::new();
    let mut union_sys_vertices = Bitset::new(n);
    for sys in systems {
        for p in sys.paths() {
            for &v in p.vertices() {
                union_sys_vertices.insert(v);
            }
            for &v in p.interior() {
                drop_set.insert(v);
            }
            if p.len() == 2 {
                single_edges.push((p.tail(), p.head()));
            }
        }
    }
    let keep: Vec<usize> = (0..n).filter(|&v| !drop_set.contains(v)).collect();
    let (mut sub, map) = t.induced(&keep)?;
    let mut host_to_sub = vec![usize::MAX; n];
    for (new, &old) in map.iter().enumerate() {
        host_to_sub[old] = new;
    }
    if !single_edges.is_empty() {
        let mapped: Vec<(usize, usize)> = single_edges
            .iter()
            .map(|&(u, v)| (host_to_sub[u], host_to_sub[v]))
            .collect();
        sub = sub.remove_edges(&mapped);
    }

    // chain pairs per target path
    let mut chain_pairs: Vec<(usize, usize)> = Vec::new();
    let mut chain_owner: Vec<usize> = Vec::new();
    for (i, &(x, y)) in pairs.iter().enumerate() {
        if systems[i].is_empty() {
            chain_pairs.push((x, y));
            chain_owner.push(i);
        } else {
            let mut prev = x;
            for p in systems[i].paths() {
                chain_pairs.push((prev, p.tail()));
                chain_owner.push(i);
                prev = p.head();
            }
            chain_pairs.push((prev, y));
            chain_owner.push(i);
        }
    }
    let sub_pairs: Vec<(usize, usize)> = chain_pairs
        .iter()
        .map(|&(a, b)| (host_to_sub[a], host_to_sub[b]))
        .collect();
    let chains = link_short(&sub, &sub_pairs, s)?;

    // stitch chains and systems into the final paths
    let mut result = Vec::with_capacity(k);
    let mut total = Bitset::new(n);
    for (i, &(x, _y)) in pairs.iter().enumerate() {
        let mut vertices: Vec<usize> = vec![x];
        let mut chain_iter = chains
            .paths()
            .iter()
            .zip(&chain_owner)
            .filter(|&(_, &owner)| owner == i)
            .map(|(p, _)| p.map_indices(&map));
        let mut system_iter = systems[i].paths().iter();
        // alternate: chain, system, chain, system, ..., chain
        loop {
            let Some(chain) = chain_iter.next() else { break };
            debug_assert_eq!(chain.tail(), *vertices.last().unwrap());
            vertices.extend_from_slice(&chain.vertices()[1..]);
            if let Some(syspath) = system_iter.next() {
                debug_assert_eq!(syspath.tail(), *vertices.last().unwrap());
                vertices.extend_from_slice(&syspath.vertices()[1..]);
            }
        }
        for &v in &vertices {
            total.insert(v);
        }
        result.push(Path(vertices));
    }

    // postconditions (endpoints, absorption, overlap confinement, size)
    for (i, p) in result.iter().enumerate() {
        if p.tail() != pairs[i].0 || p.head() != pairs[i].1 {
            return Err(Error::Extension {
                message: format!("assembled path {i} has wrong endpoints"),
            });
        }
        for q in systems[i].paths() {
            if !is_subpath(q, p) {
                return Err(Error::Extension {
                    message: format!("system path {q:?} not absorbed into output {i}"),
                });
            }
        }
    }
    let mut edge_seen = std::collections::HashSet::new();
    for p in &result {
        for e in p.edges() {
            if !edge_seen.insert(e) {
                return Err(Error::Extension {
                    message: format!("outputs share edge {e:?}"),
                });
            }
        }
    }
    for i in 0..k {
        let vi: std::collections::HashSet<usize> =
            result[i].vertices().iter().copied().collect();
        for j in i + 1..k {
            for &v in result[j].vertices() {
                if vi.contains(&v) {
                    let in_qi = systems[i].paths().iter().any(|p| p.contains(v));
                    let in_qj = systems[j].paths().iter().any(|p| p.contains(v));
                    if !(in_qi && in_qj) {
                        return Err(Error::Extension {
                            message: format!(
                                "outputs {i} and {j} overlap at {v} outside their systems"
                            ),
                        });
                    }
                }
            }
        }
    }
    let total_order = total.count();
    let bound = t.n() / s + union_sys_vertices.count();
    if total_order > bound {
        return Err(Error::Extension {
            message: format!("absorbed linkage too large: {total_order} > {bound}"),
        });
    }
    Ok(AbsorbingPaths {
        paths: result,
        total_order,
    })
}

/// `needle` appears as a contiguous run of `haystack`.
pub fn is_subpath(needle: &Path, haystack: &Path) -> bool {
    let n = needle.vertices();
    let h = haystack.vertices();
    if n.is_empty() || n.len() > h.len() {
        return false;
    }
    h.windows(n.len()).any(|w| w == n)
}

/// Exhaustive k-linkedness oracle, guarded to `|D| <= 10`, `k <= 2`.
pub fn brute_force_is_k_linked(g: &Digraph, k: usize) -> Result<bool> {
    let n = g.n();
    if n > 10 || k > 2 {
        return Err(Error::GuardExceeded {
            what: "brute_force_is_k_linked size",
            got: n.max(k * 100),
            limit: 10,
        });
    }
    if n < 2 * k {
        return Ok(false);
    }
    let verts: Vec<usize> = (0..n).collect();
    let mut tuple = Vec::new();
    Ok(all_tuples_ok(g, k, &verts, &mut tuple))
}

fn all_tuples_ok(g: &Digraph, k: usize, verts: &[usize], tuple: &mut Vec<usize>) -> bool {
    if tuple.len() == 2 * k {
        let pairs: Vec<(usize, usize)> = (0..k).map(|i| (tuple[2 * i], tuple[2 * i + 1])).collect();
        let mut used = Bitset::new(g.n());
        return disjoint_paths_exist(g, &pairs, 0, &mut used);
    }
    for &v in verts {
        if tuple.contains(&v) {
            continue;
        }
        tuple.push(v);
        let ok = all_tuples_ok(g, k, verts, tuple);
        tuple.pop();
        if !ok {
            return false;
        }
    }
    true
}

fn disjoint_paths_exist(
    g: &Digraph,
    pairs: &[(usize, usize)],
    idx: usize,
    used: &mut Bitset,
) -> bool {
    if idx == pairs.len() {
        return true;
    }
    let (x, y) = pairs[idx];
    if used.contains(x) || used.contains(y) {
        return false;
    }
    used.insert(x);
    used.insert(y);
    let ok = dfs_to_target(g, x, y, pairs, idx, used);
    used.remove(x);
    used.remove(y);
    ok
}

// DFS over all simple cur->y paths avoiding `used`; on arrival the path
// vertices stay marked and the next pair is attempted.
fn dfs_to_target(
    g: &Digraph,
    cur: usize,
    y: usize,
    pairs: &[(usize, usize)],
    idx: usize,
    used: &mut Bitset,
) -> bool {
    for next in g.out_neighbors(cur) {
        if next == y {
            if disjoint_paths_exist(g, pairs, idx + 1, used) {
                return true;
            }
            continue;
        }
        if used.contains(next) {
            continue;
        }
        used.insert(next);
        let ok = dfs_to_target(g, next, y, pairs, idx, used);
        used.remove(next);
        if ok {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn switch_definition_instance() {
        // build the 5-vertex digraph that is exactly a switch plus filler
        let mut b = crate::graph::DigraphBuilder::new(5);
        // entries 0,1; middle 2; terminals 3,4 with 0 feeding the middle
        b.add_edge(0, 2);
        b.add_edge(2, 3);
        b.add_edge(2, 4);
        b.add_edge(1, 3);
        b.add_edge(1, 4);
        let g = b.build();
        let sw = Switch {
            entry_first: 0,
            entry_second: 1,
            middle: 2,
            terminal_first: 3,
            terminal_second: 4,
            first_feeds_middle: true,
        };
        assert!(sw.is_valid(&g));
    }

    #[test]
    fn find_switch_in_random_tournament() {
        let t = Digraph::random_tournament(40, 11);
        let sw = find_switch(&t, 0, 1).unwrap();
        assert!(sw.is_valid(&t));
        assert_eq!((sw.entry_first, sw.entry_second), (0, 1));
    }

    #[test]
    fn find_switch_degree_error() {
        let t = Digraph::transitive(10);
        // vertex 6 has out-degree 3 < 7
        let err = find_switch(&t, 6, 0).unwrap_err();
        assert!(matches!(err, Error::OutDegreeTooLow { vertex: 6, .. }));
    }

    #[test]
    fn zero_comparator_structure() {
        let t = Digraph::random_tournament(20, 5);
        let net = ComparatorNetwork {
            k: 3,
            comparators: vec![],
        };
        let st = build_linkage_structure(&t, &[2, 4, 6], &net).unwrap();
        assert_eq!(st.finals, vec![2, 4, 6]);
        assert_eq!(st.order(), 3);
        let routed = route(&st, &[0, 1, 2]).unwrap();
        assert_eq!(routed.paths().len(), 3);
        assert!(routed.paths().iter().all(|p| p.len() == 1));
    }

    #[test]
    fn structure_size_exact_and_routing_disjoint() {
        use crate::rng::SplitMix64;
        let t = Digraph::random_tournament(400, 5);
        let net = batcher_network(3).unwrap();
        let st = build_linkage_structure(&t, &[0, 1, 2], &net).unwrap();
        assert_eq!(st.order(), 3 * net.len() + 3);
        let mut rng = SplitMix64::new(9);
        for _ in 0..20 {
            let mut perm = vec![0, 1, 2];
            rng.shuffle(&mut perm);
            let sys = route(&st, &perm).unwrap();
            assert!(sys.is_vertex_disjoint());
            for (i, p) in sys.paths().iter().enumerate() {
                assert_eq!(p.tail(), st.entries[perm[i]]);
                assert_eq!(p.head(), st.finals[i]);
                assert!(crate::hamilton::validate_path(&t, p));
            }
        }
    }

    #[test]
    fn transitive_build_reports_failure_point() {
        let t = Digraph::transitive(30);
        let net = batcher_network(2).unwrap();
        // entries near the low-out-degree end
        let err = build_linkage_structure(&t, &[27, 28], &net).unwrap_err();
        assert!(matches!(err, Error::SwitchDegree { comparator: 0, .. }));
    }

    #[test]
    fn link_single_pair_is_a_path() {
        let t = Digraph::rotational(4);
        let sys = link(&t, &[(0, 5)]).unwrap();
        assert_eq!(sys.len(), 1);
        assert_eq!(sys.paths()[0].tail(), 0);
        assert_eq!(sys.paths()[0].head(), 5);
    }

    #[test]
    fn link_two_pairs_random() {
        let t = Digraph::random_tournament(600, 2);
        let pairs = [(0, 10), (20, 30)];
        let sys = link(&t, &pairs).unwrap();
        assert!(sys.is_vertex_disjoint());
        for (i, p) in sys.paths().iter().enumerate() {
            assert_eq!(p.tail(), pairs[i].0);
            assert_eq!(p.head(), pairs[i].1);
            assert!(crate::hamilton::validate_path(&t, p));
        }
    }

    #[test]
    fn link_transitive_fails() {
        let t = Digraph::transitive(100);
        let err = link(&t, &[(99, 0)]).unwrap_err();
        assert!(matches!(err, Error::SeparatedByCut { .. }));
    }

    #[test]
    fn strict_mode_rejects_desk_scale() {
        let t = Digraph::random_tournament(100, 1);
        let err = link_strict(&t, &[(0, 1), (2, 3)]).unwrap_err();
        assert!(matches!(err, Error::StrictLinkageThreshold { .. }));
    }

    #[test]
    fn internally_disjoint_with_shared_source() {
        let t = Digraph::random_tournament(600, 7);
        let pairs = [(0, 10), (0, 30)];
        let sys = link_internally_disjoint(&t, &pairs).unwrap();
        assert_eq!(sys.len(), 2);
        for (i, p) in sys.paths().iter().enumerate() {
            assert_eq!(p.tail(), pairs[i].0);
            assert_eq!(p.head(), pairs[i].1);
            assert!(crate::hamilton::validate_path(&t, p));
        }
        let ints: Vec<&[usize]> = sys.paths().iter().map(|p| p.interior()).collect();
        assert!(ints[0].iter().all(|v| !ints[1].contains(v)));
    }

    #[test]
    fn degenerate_pair_gives_singleton() {
        let t = Digraph::random_tournament(600, 8);
        let sys = link_internally_disjoint(&t, &[(5, 5), (1, 2)]).unwrap();
        assert_eq!(sys.paths()[0], Path::singleton(5));
    }

    #[test]
    fn short_linkage_bound() {
        let t = Digraph::random_tournament(1000, 9);
        let pairs = [(0, 10), (20, 30)];
        let sys = link_short(&t, &pairs, 5).unwrap();
        let mut verts = std::collections::HashSet::new();
        for p in sys.paths() {
            verts.extend(p.vertices().iter().copied());
        }
        assert!(verts.len() * 5 <= 1000, "order {}", verts.len());
        for (i, p) in sys.paths().iter().enumerate() {
            assert_eq!(p.tail(), pairs[i].0);
            assert_eq!(p.head(), pairs[i].1);
        }
    }

    #[test]
    fn absorb_empty_systems_reduces_to_short_link() {
        let t = Digraph::random_tournament(800, 10);
        let pairs = [(0, 11), (22, 33)];
        let out = link_with_paths(&t, &pairs, &[PathSystem::default(), PathSystem::default()], 4)
            .unwrap();
        assert_eq!(out.paths.len(), 2);
        assert!(out.total_order * 4 <= 800);
    }

    #[test]
    fn absorb_single_path() {
        let t = Digraph::random_tournament(800, 12);
        // a 2-edge path avoiding the endpoints
        let q = Path(vec![100, 101, 102]);
        let q = if crate::hamilton::validate_path(&t, &q) {
            q
        } else {
            // orient along existing edges deterministically
            let mut v = vec![100];
            let mut cur = 100;
            for _ in 0..2 {
                let next = t.out_neighbors(cur).find(|&w| w > 99 && !v.contains(&w)).unwrap();
                v.push(next);
                cur = next;
            }
            Path(v)
        };
        let out = link_with_paths(&t, &[(0, 11)], &[PathSystem::new(vec![q.clone()])], 4).unwrap();
        assert!(is_subpath(&q, &out.paths[0]));
    }

    #[test]
    fn triangle_is_one_linked() {
        let t = Digraph::rotational(1);
        assert!(brute_force_is_k_linked(&t, 1).unwrap());
        assert!(!brute_force_is_k_linked(&Digraph::transitive(4), 1).unwrap());
    }

    #[test]
    fn oracle_agrees_with_connectivity_necessities() {
        use crate::connectivity::is_strongly_k_connected;
        // 7-vertex strongly 3-connected tournaments: 2-linkedness implies
        // strong 2-connectivity, and 1-linkedness is strong connectivity
        let candidates: Vec<Digraph> = std::iter::once(Digraph::rotational(3))
            .chain((0..200).map(|s| Digraph::random_tournament(7, 900 + s)))
            .filter(|t| is_strongly_k_connected(t, 3))
            .take(4)
            .collect();
        assert!(!candidates.is_empty());
        for t in &candidates {
            assert_eq!(
                brute_force_is_k_linked(t, 1).unwrap(),
                crate::connectivity::is_strongly_connected(t)
            );
            if brute_force_is_k_linked(t, 2).unwrap() {
                assert!(is_strongly_k_connected(t, 2));
            }
        }
    }
}
