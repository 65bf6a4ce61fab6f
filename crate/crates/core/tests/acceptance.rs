//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use tourney::connectivity::{
    brute_force_connectivity, is_strongly_connected, is_strongly_k_connected,
    vertex_connectivity,
};
use tourney::domination::{
    covering_edge, dom_transitive_trace, in_dom_family, in_dom_transitive, out_dom_family,
    out_dom_transitive, validate_dom_family,
};
use tourney::engine::{
    k_hamilton_cycles_traced, verify_certificate, EngineConfig,
};
use tourney::extremal::{max_hamilton_packing, max_regular_degree, verify_extremal_claims};
use tourney::graph::{Cycle, Digraph, DigraphBuilder};
use tourney::hamilton::{
    brute_force_hamilton, hamilton_cycle_camion, validate_hamilton_cycle,
};
use tourney::linkage::{build_linkage_structure, route};
use tourney::pathcover::gallai_milgram_cover;
use tourney::rng::SplitMix64;
use tourney::sortnet::{batcher_comparator_count, batcher_network, verify_zero_one};

fn report(criterion: usize, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion} ({name}): {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} ({name}) failed: {detail}");
}

#[test]
fn criterion_01_sorting_networks() {
    let mut ok = true;
    for k in 2..=12 {
        ok &= verify_zero_one(&batcher_network(k).unwrap()).unwrap();
    }
    let mut bound_ok = true;
    for k in 3..=64usize {
        let count = batcher_comparator_count(k) as f64;
        let log = (k as f64).log2();
        bound_ok &= count <= 2.0 * k as f64 * log * log;
    }
    report(
        1,
        "sorting networks",
        ok && bound_ok,
        "zero-one verified for k in [2,12]; comparator bound 2k log^2 k for k in [3,64]",
    );
}

#[test]
fn criterion_02_linkage_structure() {
    let mut rng = SplitMix64::new(0xfeed);
    let mut runs = 0;
    for trial in 0..50u64 {
        let k = 2 + (trial % 3) as usize; // 2, 3, 4
        let t = Digraph::random_tournament(500, 10_000 + trial);
        // distinct entry vertices
        let mut entries = Vec::new();
        while entries.len() < k {
            let v = rng.next_below(500) as usize;
            if !entries.contains(&v) {
                entries.push(v);
            }
        }
        let net = batcher_network(k).unwrap();
        let st = build_linkage_structure(&t, &entries, &net).unwrap();
        assert_eq!(
            st.order(),
            3 * net.len() + k,
            "trial {trial}: structure order is not 3r + k"
        );
        for _ in 0..20 {
            let mut perm: Vec<usize> = (0..k).collect();
            rng.shuffle(&mut perm);
            let sys = route(&st, &perm).unwrap();
            assert!(sys.is_vertex_disjoint(), "trial {trial}");
            for (i, p) in sys.paths().iter().enumerate() {
                assert_eq!(p.tail(), st.entries[perm[i]]);
                assert_eq!(p.head(), st.finals[i]);
                assert!(tourney::hamilton::validate_path(&t, p));
            }
        }
        runs += 1;
    }
    report(
        2,
        "linkage structure",
        runs == 50,
        "50 builds at n=500, k in {2,3,4}; |D| = 3r+k exact; 20 routings each validated",
    );
}

#[test]
fn criterion_03_menger_exactness() {
    let mut checked = 0usize;
    let mut mismatches = 0usize;
    for n in 4..=9usize {
        for seed in 0..1700u64 {
            let t = Digraph::random_tournament(n, 31_000 + seed * 7 + n as u64);
            let fast = vertex_connectivity(&t).kappa;
            let brute = brute_force_connectivity(&t).unwrap();
            if fast != brute {
                mismatches += 1;
            }
            checked += 1;
        }
    }
    report(
        3,
        "menger exactness",
        mismatches == 0 && checked == 10_200,
        &format!("{checked} tournaments with n <= 9, {mismatches} mismatches"),
    );
}

// i pairwise edge-disjoint Hamilton cycles on [n], then a random tournament
// containing them
fn tournament_with_cycles(n: usize, cycles: usize, rng: &mut SplitMix64) -> (Digraph, Vec<Cycle>) {
    'outer: loop {
        let mut taken = std::collections::HashSet::new();
        let mut chosen = Vec::new();
        for _ in 0..cycles {
            let mut order: Vec<usize> = (0..n).collect();
            rng.shuffle(&mut order);
            let cycle = Cycle(order);
            for (u, v) in cycle.edges() {
                if taken.contains(&(u, v)) || taken.contains(&(v, u)) {
                    continue 'outer;
                }
            }
            for e in cycle.edges() {
                taken.insert(e);
            }
            chosen.push(cycle);
        }
        let mut b = DigraphBuilder::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if taken.contains(&(i, j)) {
                    b.add_edge(i, j);
                } else if taken.contains(&(j, i)) {
                    b.add_edge(j, i);
                } else if rng.next_bool() {
                    b.add_edge(i, j);
                } else {
                    b.add_edge(j, i);
                }
            }
        }
        return (b.build(), chosen);
    }
}

#[test]
fn criterion_04_path_cover_bound() {
    let mut rng = SplitMix64::new(0xc0ffee);
    for trial in 0..500usize {
        let n = 20 + (rng.next_below(81) as usize); // 20..=100
        let i = 1 + trial % 3;
        let (t, cycles) = tournament_with_cycles(n, i, &mut rng);
        let mut drop = Vec::new();
        for c in &cycles {
            assert!(validate_hamilton_cycle(&t, c), "planted cycle invalid");
            drop.extend(c.edges());
        }
        let g = t.remove_edges(&drop);
        assert_eq!(g.min_total_degree(), n - 1 - 2 * i);
        let cover = gallai_milgram_cover(&g).unwrap();
        assert!(
            cover.len() <= 2 * i + 1,
            "trial {trial}: cover {} exceeds {}",
            cover.len(),
            2 * i + 1
        );
    }
    report(
        4,
        "path cover bound",
        true,
        "500 tournaments minus up to 3 Hamilton cycles; cover size <= 2i+1 throughout",
    );
}

#[test]
fn criterion_05_domination_bounds() {
    let mut rng = SplitMix64::new(0xd0d0);
    let mut single_runs = 0;
    for trial in 0..500u64 {
        let n = 60 + (rng.next_below(441) as usize); // 60..=500
        let t = Digraph::random_tournament(n, 50_000 + trial);
        let v = rng.next_below(n as u64) as usize;
        let out_mode = trial % 2 == 0;
        let degree = if out_mode {
            t.in_degree(v)
        } else {
            t.out_degree(v)
        };
        // largest feasible cap at most 6
        let Some(c) = (2..=6usize)
            .rev()
            .find(|&c| degree >= 1usize << (c + 1))
        else {
            continue;
        };
        let ds = if out_mode {
            out_dom_transitive(&t, v, c).unwrap()
        } else {
            in_dom_transitive(&t, v, c).unwrap()
        };
        assert!(
            ds.exceptional.len() * (1 << (c - 1)) <= degree,
            "trial {trial}: |E| bound"
        );
        let trace = dom_transitive_trace(&t, v, c, out_mode).unwrap();
        for w in trace.windows(2) {
            assert!(w[1] * 2 <= w[0], "trial {trial}: halving");
        }
        single_runs += 1;
    }
    let mut family_runs = 0;
    for trial in 0..100u64 {
        let n = 400 + (rng.next_below(101) as usize);
        let t = Digraph::random_tournament(n, 90_000 + trial);
        let c = 4;
        let mut roots = Vec::new();
        while roots.len() < 6 {
            let v = rng.next_below(n as u64) as usize;
            if !roots.contains(&v) {
                roots.push(v);
            }
        }
        let fam = if trial % 2 == 0 {
            out_dom_family(&t, &roots, c).unwrap()
        } else {
            in_dom_family(&t, &roots, c).unwrap()
        };
        let checks = validate_dom_family(&t, &fam, c);
        assert!(
            checks.iter().all(|&(_, ok)| ok),
            "trial {trial}: {checks:?}"
        );
        family_runs += 1;
    }
    report(
        5,
        "domination bounds",
        single_runs >= 450 && family_runs == 100,
        &format!("{single_runs} single-set runs with halving traces; {family_runs} family runs through the full checker"),
    );
}

#[test]
fn criterion_06_covering_edges() {
    for l in 2..=10usize {
        let t = Digraph::rotational(l);
        for v in 0..t.n() {
            let ce = covering_edge(&t, v).unwrap();
            assert!(ce.is_valid(&t), "rotational({l}) vertex {v}");
        }
    }
    let mut found = 0;
    let mut seed = 0u64;
    while found < 100 {
        seed += 1;
        let n = 20 + (seed % 30) as usize;
        let t = Digraph::random_tournament(n, 70_000 + seed);
        if !is_strongly_k_connected(&t, 2) {
            continue;
        }
        for v in 0..t.n() {
            let ce = covering_edge(&t, v).unwrap();
            assert!(ce.is_valid(&t), "seed {seed} vertex {v}");
        }
        found += 1;
    }
    report(
        6,
        "covering edges",
        true,
        "all vertices covered in rotational tournaments (l in [2,10]) and 100 strongly 2-connected random tournaments",
    );
}

#[test]
fn criterion_07_extremal_reproduction() {
    let mut ok = true;
    for (m, l) in [(5usize, 1usize), (7, 2), (9, 3)] {
        let t = Digraph::extremal(m, l);
        ok &= is_strongly_k_connected(&t, l);
        let reg = max_regular_degree(&t);
        ok &= reg.max_r * reg.max_r <= 4 * l;
    }
    let packing = max_hamilton_packing(&Digraph::extremal(5, 1)).unwrap();
    let reg = max_regular_degree(&Digraph::extremal(5, 1));
    ok &= packing <= reg.max_r;
    let report_5_1 = verify_extremal_claims(5, 1).unwrap();
    ok &= report_5_1.kappa_lower_ok
        && report_5_1.regular_ceiling_ok == Some(true)
        && report_5_1.packing_within_ceiling == Some(true);
    report(
        7,
        "extremal reproduction",
        ok,
        "kappa >= l and max_r <= sqrt(4l) for (5,1),(7,2),(9,3); packing <= max_r at (5,1)",
    );
}

fn engine_runs() -> Vec<(usize, usize, u64)> {
    vec![
        (300, 2, 1), (350, 2, 2), (400, 2, 3), (450, 2, 4), (500, 2, 5),
        (550, 2, 6), (600, 2, 7), (650, 2, 8), (700, 2, 9), (750, 2, 10),
        (800, 2, 11), (400, 3, 12), (500, 3, 13), (600, 3, 14), (700, 3, 15),
        (800, 3, 16), (300, 3, 17), (350, 3, 18), (450, 3, 19), (550, 3, 20),
        (650, 3, 21), (750, 3, 22), (320, 2, 23), (420, 2, 24), (520, 2, 25),
        (620, 2, 26), (720, 2, 27), (820, 3, 28), (360, 3, 29), (760, 2, 30),
    ]
}

#[test]
fn criterion_08_engine_soundness() {
    let mut emitted = 0usize;
    let mut revalidated = 0usize;
    let total = engine_runs().len();
    for (n, k, seed) in engine_runs() {
        let t = Digraph::random_tournament(n, seed);
        let (cert, _, _) =
            k_hamilton_cycles_traced(&t, k, &EngineConfig::best_effort()).unwrap();
        // independent verification from the raw serialized input
        let reparsed = Digraph::from_text(&t.to_text()).unwrap();
        verify_certificate(&reparsed, &cert).unwrap();
        if cert.valid {
            emitted += 1;
            revalidated += 1;
        }
    }
    report(
        8,
        "engine soundness",
        revalidated == emitted,
        &format!(
            "{emitted}/{total} runs emitted full certificates; every emitted certificate re-validated independently (emission rate reported, not asserted)"
        ),
    );
}

#[test]
fn criterion_09_engine_internal_contracts() {
    let mut inspected = 0usize;
    for (n, k, seed) in engine_runs() {
        if inspected >= 5 {
            break;
        }
        let t = Digraph::random_tournament(n, seed);
        let (cert, traces, _) =
            k_hamilton_cycles_traced(&t, k, &EngineConfig::best_effort()).unwrap();
        if !cert.valid {
            continue;
        }
        for (round, trace) in traces.iter().enumerate() {
            assert!(
                trace.claims_hold(),
                "n={n} k={k} seed={seed} round {round}: claim conditions {:?}",
                trace.claim_conditions
            );
            assert!(
                trace.insertion_ok,
                "n={n} k={k} seed={seed} round {round}: insertion postcondition"
            );
        }
        inspected += 1;
    }
    report(
        9,
        "engine internal contracts",
        inspected == 5,
        &format!("claim conditions and insertion postconditions held on {inspected} fully successful runs"),
    );
}

#[test]
fn criterion_10_single_cycle_completeness() {
    let mut found = 0usize;
    let mut seed = 0u64;
    while found < 1000 {
        seed += 1;
        let n = 4 + (seed % 61) as usize; // 4..=64
        let t = Digraph::random_tournament(n, 200_000 + seed);
        if !is_strongly_connected(&t) {
            continue;
        }
        let c = hamilton_cycle_camion(&t).unwrap();
        assert!(validate_hamilton_cycle(&t, &c), "seed {seed}");
        found += 1;
    }
    let mut agree = true;
    for n in 3..=8usize {
        for seed in 0..300u64 {
            let t = Digraph::random_tournament(n, 300_000 + seed);
            let strong = is_strongly_connected(&t);
            let camion_ok = hamilton_cycle_camion(&t).is_ok();
            let brute_ok = brute_force_hamilton(&t).unwrap().is_some();
            agree &= strong == camion_ok && camion_ok == brute_ok;
        }
    }
    report(
        10,
        "single-cycle completeness",
        found == 1000 && agree,
        "1000 strongly connected tournaments up to n=64 solved and validated; exhaustive n <= 8 seed sweep agrees with brute force",
    );
}
