//! The verification checklist: nine numbered sweeps covering the catalog,
//! the witness constructions, the nice-set machinery, the sparse family,
//! and the isoperimetric inequalities. Each check reports pass/fail with a
//! reproducer for the first failing instance, so a red check is always
//! actionable.

use rayon::prelude::*;

use crate::config::{configs, Config};
use crate::digraph::Digraph;
use crate::enumerate::{
    catalog_n2, for_each_permutation, uniqueness_check_with_progress, ScanMode,
};
use crate::error::Error;
use crate::network::Network;
use crate::nice::{find_nice_set, is_nice, missing_arc_network, nice_from_missing_arc};
use crate::perm::{conjugate_unchecked, Perm};
use crate::rng::{sample_distinct, substream};
use crate::sparse::{avg_degree_check, harper_check, verify_sparse_family};
use crate::subset::CubeSubset;
use crate::witness::{
    build_x_sets, complete_witness, witness_from_fixed_points, witness_from_independent_set,
    witness_from_limit_cycles, Route,
};

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5eed_0001;

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
    /// Parameters reproducing the first failure, if any.
    pub reproducer: Option<String>,
}

impl CheckReport {
    fn pass(id: usize, name: &'static str, details: String) -> CheckReport {
        CheckReport {
            id,
            name,
            passed: true,
            details,
            reproducer: None,
        }
    }

    fn fail(id: usize, name: &'static str, details: String, reproducer: String) -> CheckReport {
        CheckReport {
            id,
            name,
            passed: false,
            details,
            reproducer: Some(reproducer),
        }
    }

    pub fn summary_line(&self) -> String {
        format!(
            "check {} ({}): {} [{}]",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.details
        )
    }
}

fn reproducer_for(seed: u64, label: &str, f: Option<&Network>, extra: &str) -> String {
    serde_json::json!({
        "seed": seed,
        "case": label,
        "network": f.map(|f| serde_json::from_str::<serde_json::Value>(&f.to_json_string()).unwrap()),
        "extra": extra,
    })
    .to_string()
}

/// Check 1: the 256 two-component networks, exhaustively.
pub fn check_catalog(_seed: u64) -> CheckReport {
    const NAME: &str = "two-component catalog";
    let report = catalog_n2();
    let details: Vec<String> = report
        .checks
        .iter()
        .map(|c| format!("{}: {}", c.name, if c.passed { "ok" } else { "FAIL" }))
        .collect();
    if report.passed {
        CheckReport::pass(1, NAME, details.join("; "))
    } else {
        CheckReport::fail(1, NAME, details.join("; "), report.to_json_string())
    }
}

/// Check 2: the guaranteed witness on seeded random networks.
pub fn check_complete_witness(seed: u64) -> CheckReport {
    const NAME: &str = "complete-graph witness on random networks";
    let cases: Vec<(usize, u64)> = (5..=8usize)
        .flat_map(|n| (0..125u64).map(move |t| (n, t)))
        .collect();
    let outcomes: Vec<Result<Route, (usize, u64, String)>> = cases
        .par_iter()
        .map(|&(n, t)| {
            let mut rng = substream(seed, "check2", (n as u64) << 32 | t);
            let f = Network::random_not_constant_or_identity(n, &mut rng);
            match complete_witness(&f) {
                Ok(w) => {
                    let g = w.h.interaction_graph();
                    if g.arc_count() == n * n {
                        Ok(w.route)
                    } else {
                        Err((n, t, format!("graph has {} arcs", g.arc_count())))
                    }
                }
                Err(e) => Err((n, t, e.to_string())),
            }
        })
        .collect();

    let mut by_route = [0usize; 6];
    for outcome in &outcomes {
        match outcome {
            Ok(route) => {
                by_route[match route {
                    Route::FixedPoints => 0,
                    Route::LimitCycles => 1,
                    Route::IndependentSetCase1 => 2,
                    Route::IndependentSetCase2a => 3,
                    Route::IndependentSetCase2b => 4,
                    Route::IndependentSetCase2c => 5,
                }] += 1;
            }
            Err((n, t, msg)) => {
                let mut rng = substream(seed, "check2", (*n as u64) << 32 | t);
                let f = Network::random_not_constant_or_identity(*n, &mut rng);
                return CheckReport::fail(
                    2,
                    NAME,
                    format!("witness failed at n={n} trial {t}: {msg}"),
                    reproducer_for(seed, "check2", Some(&f), msg),
                );
            }
        }
    }
    CheckReport::pass(
        2,
        NAME,
        format!(
            "{} witnesses verified (routes fp={} lc={} is1={} is2a={} is2b={} is2c={})",
            outcomes.len(),
            by_route[0],
            by_route[1],
            by_route[2],
            by_route[3],
            by_route[4],
            by_route[5]
        ),
    )
}

fn random_network_with_fixed_points(n: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Network {
    use rand::Rng;
    let size = 1u32 << n;
    let fixed_count = rng.random_range(2 * n..=(size as usize - 2));
    let fixed = sample_distinct(rng, 0, size, fixed_count);
    let fixed_set = CubeSubset::from_members(n, fixed.iter().copied().map(Config))
        .expect("sampled in range");
    let table = configs(n)
        .map(|x| {
            if fixed_set.contains(x) {
                x
            } else {
                loop {
                    let y = Config(rng.random_range(0..size));
                    if y != x {
                        break y;
                    }
                }
            }
        })
        .collect();
    Network::new(n, table).expect("well formed")
}

fn random_network_with_long_cycles(n: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Network {
    use rand::Rng;
    let size = 1u32 << n;
    let shuffled = sample_distinct(rng, 0, size, size as usize);
    let cycle_count = n + rng.random_range(0..=2);
    let mut table: Vec<Option<Config>> = vec![None; size as usize];
    let mut cursor = 0usize;
    let mut remaining = size as usize;
    for c in 0..cycle_count {
        let cycles_left = cycle_count - c - 1;
        let max_len = (remaining - 3 * cycles_left).min(5);
        let len = rng.random_range(3..=max_len);
        let members = &shuffled[cursor..cursor + len];
        for w in 0..len {
            table[members[w] as usize] = Some(Config(members[(w + 1) % len]));
        }
        cursor += len;
        remaining -= len;
    }
    let table = table
        .into_iter()
        .map(|slot| slot.unwrap_or_else(|| Config(rng.random_range(0..size))))
        .collect();
    Network::new(n, table).expect("well formed")
}

/// Check 3: each witness route on inputs built to satisfy its own
/// requirements.
pub fn check_route_witnesses(seed: u64) -> CheckReport {
    const NAME: &str = "route-specific witnesses";
    let cases: Vec<(usize, usize, u64)> = (0..3usize)
        .flat_map(|route| (5..=8usize).flat_map(move |n| (0..25u64).map(move |t| (route, n, t))))
        .collect();
    let failure = cases
        .par_iter()
        .find_map_any(|&(route, n, t)| {
            let key = (route as u64) << 48 | (n as u64) << 32 | t;
            let mut rng = substream(seed, "check3", key);
            let (f, result) = match route {
                0 => {
                    let f = random_network_with_fixed_points(n, &mut rng);
                    let r = witness_from_fixed_points(&f);
                    (f, r)
                }
                1 => {
                    let f = random_network_with_long_cycles(n, &mut rng);
                    let r = witness_from_limit_cycles(&f);
                    (f, r)
                }
                _ => loop {
                    let f = Network::random_not_constant_or_identity(n, &mut rng);
                    match f.large_independent_set() {
                        Err(e) => break (f, Err(e)),
                        Ok(a) if a.len() >= 2 * n => {
                            let r = witness_from_independent_set(&f, &a);
                            break (f, r);
                        }
                        Ok(_) => continue,
                    }
                },
            };
            match result {
                Ok(w) if w.h.interaction_graph().arc_count() == n * n => None,
                Ok(w) => Some((route, n, t, f, format!("incomplete graph via {:?}", w.route))),
                Err(e) => Some((route, n, t, f, e.to_string())),
            }
        });
    match failure {
        None => CheckReport::pass(
            3,
            NAME,
            "fixed-point, limit-cycle and independent-set routes verified on \
             100 instances each"
                .into(),
        ),
        Some((route, n, t, f, msg)) => CheckReport::fail(
            3,
            NAME,
            format!("route {route} failed at n={n} trial {t}: {msg}"),
            reproducer_for(seed, "check3", Some(&f), &msg),
        ),
    }
}

/// Check 4: the disjoint flip-cover sets for every size composition.
pub fn check_x_sets(seed: u64) -> CheckReport {
    const NAME: &str = "disjoint flip-cover sets";
    let mut tested = 0usize;
    for n in 5..=8usize {
        for k in 1..=n {
            for t in 0..20u64 {
                let key = (n as u64) << 40 | (k as u64) << 20 | t;
                let mut rng = substream(seed, "check4", key);
                let total = n + k;
                let mut cuts = if 2 * k - 1 > 0 {
                    sample_distinct(&mut rng, 1, total as u32, 2 * k - 1)
                } else {
                    Vec::new()
                };
                cuts.sort_unstable();
                let mut sizes = Vec::with_capacity(2 * k);
                let mut prev = 0u32;
                for &c in &cuts {
                    sizes.push((c - prev) as usize);
                    prev = c;
                }
                sizes.push(total - prev as usize);

                let sets = match build_x_sets(n, k, &sizes) {
                    Ok(sets) => sets,
                    Err(e) => {
                        return CheckReport::fail(
                            4,
                            NAME,
                            format!("n={n} k={k} sizes={sizes:?}: {e}"),
                            reproducer_for(seed, "check4", None, &format!("sizes={sizes:?}")),
                        )
                    }
                };
                // Independent re-verification of the three postconditions.
                let mut seen = CubeSubset::empty(n);
                let mut ok = sets.iter().zip(&sizes).all(|(s, &want)| s.len() == want);
                for set in &sets {
                    for &x in set {
                        ok &= seen.insert(x);
                    }
                }
                for i in 0..n {
                    let covered = (0..k).any(|p| {
                        sets[2 * p].iter().any(|&x| sets[2 * p + 1].contains(&x.flip(i)))
                    });
                    ok &= covered;
                }
                if !ok {
                    return CheckReport::fail(
                        4,
                        NAME,
                        format!("postconditions failed for n={n} k={k} sizes={sizes:?}"),
                        reproducer_for(seed, "check4", None, &format!("sizes={sizes:?}")),
                    );
                }
                tested += 1;
            }
        }
    }
    CheckReport::pass(4, NAME, format!("{tested} compositions verified"))
}

/// Check 5: nice sets, missing arcs, and the round trip between them.
pub fn check_nice_sets(seed: u64) -> CheckReport {
    const NAME: &str = "nice sets and missing arcs";
    use rand::Rng;

    let roundtrip_cases: Vec<(usize, u64)> = (5..=8usize)
        .flat_map(|n| (0..200u64).map(move |t| (n, t)))
        .collect();
    let failure = roundtrip_cases.par_iter().find_map_any(|&(n, t)| {
        let mut rng = substream(seed, "check5-roundtrip", (n as u64) << 32 | t);
        let f = Network::random(n, &mut rng);
        let i = rng.random_range(0..n);
        let j = loop {
            let j = rng.random_range(0..n);
            if j != i {
                break j;
            }
        };
        let report = match find_nice_set(&f, 1 << (n - 2)) {
            Ok(r) => r,
            Err(e) => return Some((n, t, f, format!("descent: {e}"))),
        };
        if report.members.len() != 1 << (n - 1)
            || report.preimage_size % 2 != 0
            || report.overlap_size % 2 != 0
        {
            return Some((n, t, f, "descent output fails the parity contract".into()));
        }
        let (_pi, h) = match missing_arc_network(&f, &report, i, j) {
            Ok(out) => out,
            Err(e) => return Some((n, t, f, format!("missing-arc: {e}"))),
        };
        if h.interaction_graph().has_arc(j, i) {
            return Some((n, t, f, format!("arc {}->{} still present", j + 1, i + 1)));
        }
        match nice_from_missing_arc(&h, i, j) {
            Ok(back) => {
                let slab = back.to_subset(n).expect("report members in range");
                match is_nice(&h, &slab) {
                    Ok(Some(_)) => None,
                    _ => Some((n, t, f, "returned slab is not nice".into())),
                }
            }
            Err(e) => Some((n, t, f, format!("round trip: {e}"))),
        }
    });
    if let Some((n, t, f, msg)) = failure {
        return CheckReport::fail(
            5,
            NAME,
            format!("round trip failed at n={n} trial {t}: {msg}"),
            reproducer_for(seed, "check5-roundtrip", Some(&f), &msg),
        );
    }

    // Descent across the whole guaranteed range of k.
    let descent_cases: Vec<(usize, u64)> = (4..=8usize)
        .flat_map(|n| (0..20u64).map(move |t| (n, t)))
        .collect();
    let failure = descent_cases.par_iter().find_map_any(|&(n, t)| {
        let mut rng = substream(seed, "check5-descent", (n as u64) << 32 | t);
        let f = Network::random(n, &mut rng);
        for k in 8..=(1usize << (n - 1)) {
            match find_nice_set(&f, k) {
                Ok(report) if report.members.len() == 2 * k => {}
                Ok(report) => {
                    return Some((n, t, f, format!("k={k}: size {}", report.members.len())))
                }
                Err(e) => return Some((n, t, f, format!("k={k}: {e}"))),
            }
        }
        None
    });
    match failure {
        None => CheckReport::pass(
            5,
            NAME,
            "800 round trips and the full descent range verified".into(),
        ),
        Some((n, t, f, msg)) => CheckReport::fail(
            5,
            NAME,
            format!("descent failed at n={n} trial {t}: {msg}"),
            reproducer_for(seed, "check5-descent", Some(&f), &msg),
        ),
    }
}

/// Scans for a conjugate whose graph is not complete; exhaustive fallback.
fn has_noncomplete_conjugate(f: &Network, seed: u64, key: u64) -> bool {
    let n = f.n();
    let complete = Digraph::complete(n);
    if f.interaction_graph() != complete {
        return true;
    }
    if n == 3 {
        let mut rng = substream(seed, "noncomplete-scan", key);
        for _ in 0..512 {
            let pi = Perm::random(n, &mut rng);
            let h = crate::perm::conjugate(f, &pi).expect("sizes agree");
            if h.interaction_graph() != complete {
                return true;
            }
        }
    }
    let mut found = false;
    for_each_permutation(f.size(), |map| {
        if conjugate_unchecked(f, map).interaction_graph() != complete {
            found = true;
        }
        found
    });
    found
}

/// Check 6: no family collapses to the complete graph alone at sizes 2
/// and 3.
pub fn check_not_only_complete(seed: u64) -> CheckReport {
    const NAME: &str = "families never reduce to the complete graph";
    for code in 0u32..256 {
        let table = (0..4).map(|x| Config((code >> (2 * x)) & 3)).collect();
        let f = Network::new(2, table).expect("two-component table");
        if !has_noncomplete_conjugate(&f, seed, code as u64) {
            return CheckReport::fail(
                6,
                NAME,
                format!("two-component network {code} only shows the complete graph"),
                reproducer_for(seed, "check6-n2", Some(&f), ""),
            );
        }
    }

    let failure = (0..10_000u64).into_par_iter().find_map_any(|t| {
        let mut rng = substream(seed, "check6-net", t);
        let f = Network::random(3, &mut rng);
        if has_noncomplete_conjugate(&f, seed, t) {
            None
        } else {
            Some((t, f))
        }
    });
    match failure {
        None => CheckReport::pass(
            6,
            NAME,
            "256 two-component networks exhaustively, 10000 sampled \
             three-component networks"
                .into(),
        ),
        Some((t, f)) => CheckReport::fail(
            6,
            NAME,
            format!("three-component trial {t} only shows the complete graph"),
            reproducer_for(seed, "check6-n3", Some(&f), ""),
        ),
    }
}

/// Check 7: the sparse family bound across dimensions 9 to 14.
pub fn check_sparse_family(seed: u64) -> CheckReport {
    const NAME: &str = "sparse family arc bound";
    let reports: Vec<_> = (9..=14usize)
        .into_par_iter()
        .map(|n| verify_sparse_family(n, 100, 20, seed ^ n as u64))
        .collect();
    let mut lines = Vec::new();
    for report in &reports {
        lines.push(format!(
            "n={}: min {} arcs vs bound {:.2}",
            report.n, report.min_arcs, report.bound
        ));
        if report.violations > 0 {
            return CheckReport::fail(
                7,
                NAME,
                format!("{} violations at n={}", report.violations, report.n),
                report.to_json_string(),
            );
        }
    }
    CheckReport::pass(7, NAME, lines.join("; "))
}

/// Check 8: isoperimetry, exhaustively at dimension 4 and sampled above.
pub fn check_isoperimetry(seed: u64) -> CheckReport {
    const NAME: &str = "hypercube isoperimetry";

    let exhaustive_failure = (1u32..(1 << 16)).into_par_iter().find_map_any(|mask| {
        let members = (0..16).filter(|&b| mask >> b & 1 == 1).map(Config);
        let x = CubeSubset::from_members(4, members).expect("in range");
        let harper = harper_check(&x).expect("non-empty");
        let degree = avg_degree_check(&x).expect("non-empty");
        let ok = harper.boundary >= harper.lex_boundary
            && harper.lex_boundary as f64 >= harper.corollary_bound - crate::sparse::REAL_TOLERANCE
            && degree.ok;
        if ok {
            None
        } else {
            Some(mask)
        }
    });
    if let Some(mask) = exhaustive_failure {
        return CheckReport::fail(
            8,
            NAME,
            format!("dimension-4 subset {mask:#06x} violates a bound"),
            reproducer_for(seed, "check8-exhaustive", None, &format!("mask={mask}")),
        );
    }

    for n in 5..=10usize {
        let failure = (0..100_000u64).into_par_iter().find_map_any(|t| {
            use rand::Rng;
            let mut rng = substream(seed, "check8-random", (n as u64) << 32 | t);
            let x = loop {
                let mut x = CubeSubset::empty(n);
                for v in 0..(1u32 << n) {
                    if rng.random::<bool>() {
                        x.insert(Config(v));
                    }
                }
                if !x.is_empty() {
                    break x;
                }
            };
            let harper = harper_check(&x).expect("non-empty");
            let degree = avg_degree_check(&x).expect("non-empty");
            let ok = harper.boundary >= harper.lex_boundary
                && harper.lex_boundary as f64
                    >= harper.corollary_bound - crate::sparse::REAL_TOLERANCE
                && degree.ok;
            if ok {
                None
            } else {
                Some(t)
            }
        });
        if let Some(t) = failure {
            return CheckReport::fail(
                8,
                NAME,
                format!("random subset trial {t} at n={n} violates a bound"),
                reproducer_for(seed, "check8-random", None, &format!("n={n} trial={t}")),
            );
        }
    }
    CheckReport::pass(
        8,
        NAME,
        "65535 subsets of dimension 4 exhaustively, 100000 random subsets \
         per dimension 5..=10"
            .into(),
    )
}

/// Check 9: the complete graph and a second graph are reachable for every
/// sampled three-component network.
pub fn check_three_component_complete(seed: u64) -> CheckReport {
    const NAME: &str = "three-component complete graph and non-uniqueness";
    let failure = (0..10_000u64).into_par_iter().find_map_any(|t| {
        let mut rng = substream(seed, "check9-net", t);
        let f = Network::random_not_constant_or_identity(3, &mut rng);
        let (second, complete) = crate::enumerate::scan_certificates(&f, seed, t, true);
        if second && complete {
            None
        } else {
            Some((t, f, second, complete))
        }
    });
    match failure {
        None => CheckReport::pass(
            9,
            NAME,
            "10000 sampled networks all reach the complete graph and a \
             second graph"
                .into(),
        ),
        Some((t, f, second, complete)) => CheckReport::fail(
            9,
            NAME,
            format!("trial {t}: second graph {second}, complete {complete}"),
            reproducer_for(seed, "check9", Some(&f), ""),
        ),
    }
}

/// All nine checks.
pub fn run_fast(seed: u64) -> Vec<CheckReport> {
    vec![
        check_catalog(seed),
        check_complete_witness(seed),
        check_route_witnesses(seed),
        check_x_sets(seed),
        check_nice_sets(seed),
        check_not_only_complete(seed),
        check_sparse_family(seed),
        check_isoperimetry(seed),
        check_three_component_complete(seed),
    ]
}

/// The long-running sweep over all `2^24` three-component networks.
pub fn full_sweep_three_components(
    seed: u64,
    progress: Option<&(dyn Fn(usize, usize) + Sync)>,
) -> CheckReport {
    const NAME: &str = "exhaustive three-component sweep";
    let _ = seed;
    match uniqueness_check_with_progress(3, ScanMode::Exhaustive, progress) {
        Ok(report) => {
            let clean = report.singletons.is_empty() && report.complete_failures.is_empty();
            if clean {
                CheckReport::pass(
                    10,
                    NAME,
                    format!(
                        "{} networks scanned ({} trivial skipped), all reach the \
                         complete graph and a second graph",
                        report.tested, report.skipped_trivial
                    ),
                )
            } else {
                CheckReport::fail(
                    10,
                    NAME,
                    format!(
                        "{} singletons, {} complete-graph failures",
                        report.singletons.len(),
                        report.complete_failures.len()
                    ),
                    report
                        .singletons
                        .first()
                        .or(report.complete_failures.first())
                        .map(|f| f.to_json_string())
                        .unwrap_or_default(),
                )
            }
        }
        Err(e) => CheckReport::fail(10, NAME, e.to_string(), String::new()),
    }
}

impl From<Error> for CheckReport {
    fn from(e: Error) -> Self {
        CheckReport::fail(0, "internal", e.to_string(), String::new())
    }
}
