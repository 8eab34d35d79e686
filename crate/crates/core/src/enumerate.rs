//! Ground truth at small sizes: exhaustive enumeration of the interaction
//! graphs of all conjugates of a network, the hand-checked two-component
//! catalog, and sampled under-approximations for sizes where `(2^n)!` is
//! out of reach.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{configs, Config};
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::network::Network;
use crate::perm::{conjugate_unchecked, Perm};
use crate::rng::substream;
use crate::witness::complete_witness_best_effort;

/// Where a graph family came from. Exhaustive families are exact; sampled
/// families are always subsets of the exact one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilySource {
    Exhaustive,
    Sampled { trials: usize, seed: u64 },
}

/// A deduplicated set of labeled interaction graphs, sorted by their arc
/// serialization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFamily {
    pub n: usize,
    pub source: FamilySource,
    graphs: Vec<Digraph>,
}

impl GraphFamily {
    fn from_set(n: usize, source: FamilySource, set: HashSet<Digraph>) -> GraphFamily {
        let mut graphs: Vec<Digraph> = set.into_iter().collect();
        graphs.sort_unstable();
        GraphFamily { n, source, graphs }
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn contains(&self, g: &Digraph) -> bool {
        self.graphs.binary_search(g).is_ok()
    }

    pub fn complete_included(&self) -> bool {
        self.contains(&Digraph::complete(self.n))
    }

    pub fn graphs(&self) -> &[Digraph] {
        &self.graphs
    }

    pub fn to_json_string(&self) -> String {
        let graphs: Vec<Vec<(usize, usize)>> = self
            .graphs
            .iter()
            .map(|g| g.arcs().iter().map(|&(j, i)| (j + 1, i + 1)).collect())
            .collect();
        serde_json::json!({
            "n": self.n,
            "source": self.source,
            "graphs": graphs,
        })
        .to_string()
    }
}

/// Visits every permutation of `0..m` (Heap's algorithm); stops early when
/// the visitor returns `true`.
pub(crate) fn for_each_permutation<F: FnMut(&[Config]) -> bool>(m: usize, mut visit: F) -> bool {
    let mut arr: Vec<Config> = (0..m as u32).map(Config).collect();
    if visit(&arr) {
        return true;
    }
    let mut c = vec![0usize; m];
    let mut i = 0usize;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                arr.swap(0, i);
            } else {
                arr.swap(c[i], i);
            }
            if visit(&arr) {
                return true;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    false
}

/// The exact family of interaction graphs over all conjugates of `f`,
/// by exhaustion over every permutation of `{0,1}^n`. Feasible for
/// `n <= 3` (at most `8! = 40320` permutations); `n = 4` runs only with
/// the override and larger sizes are always refused.
pub fn all_graphs(f: &Network, override_large: bool) -> Result<GraphFamily> {
    let n = f.n();
    if n > 4 || (n == 4 && !override_large) {
        return Err(Error::Precondition(format!(
            "exhaustive enumeration over (2^{n})! permutations refused{}",
            if n == 4 {
                "; pass the override to force it"
            } else {
                ""
            }
        )));
    }
    let mut set = HashSet::new();
    for_each_permutation(f.size(), |map| {
        set.insert(conjugate_unchecked(f, map).interaction_graph());
        false
    });
    Ok(GraphFamily::from_set(n, FamilySource::Exhaustive, set))
}

/// Interaction graphs of `trials` seeded random conjugates: a subset of
/// the exact family, one substream per trial so the result does not depend
/// on scheduling.
pub fn sample_graphs(f: &Network, trials: usize, seed: u64) -> GraphFamily {
    let graphs: Vec<Digraph> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = substream(seed, "sample_graphs", t as u64);
            let pi = Perm::random(f.n(), &mut rng);
            crate::perm::conjugate(f, &pi)
                .expect("sizes agree")
                .interaction_graph()
        })
        .collect();
    GraphFamily::from_set(
        f.n(),
        FamilySource::Sampled { trials, seed },
        graphs.into_iter().collect(),
    )
}

/// A lower bound on the number of distinct graphs in the family of `f`,
/// from sampled conjugates only.
pub fn gsize_estimate(f: &Network, trials: usize, seed: u64) -> (usize, usize) {
    (sample_graphs(f, trials, seed).len(), trials)
}

// The hand-checked two-component tables. Every table ships in the text
// format, row for row as written.
const F_TABLES: [&str; 6] = [
    include_str!("../fixtures/f1.txt"),
    include_str!("../fixtures/f2.txt"),
    include_str!("../fixtures/f3.txt"),
    include_str!("../fixtures/f4.txt"),
    include_str!("../fixtures/f5.txt"),
    include_str!("../fixtures/f6.txt"),
];
const H_TABLES: [&str; 6] = [
    include_str!("../fixtures/h1.txt"),
    include_str!("../fixtures/h2.txt"),
    include_str!("../fixtures/h3.txt"),
    include_str!("../fixtures/h4.txt"),
    include_str!("../fixtures/h5.txt"),
    include_str!("../fixtures/h6.txt"),
];
const G_TABLES: [&str; 3] = [
    include_str!("../fixtures/g1.txt"),
    include_str!("../fixtures/g2.txt"),
    include_str!("../fixtures/g3.txt"),
];

fn parse_fixtures(sources: &[&str]) -> Vec<Network> {
    sources
        .iter()
        .map(|s| Network::from_text(s).expect("embedded tables are well formed"))
        .collect()
}

/// The six two-component networks whose families avoid the complete graph.
pub fn catalog_counterexamples() -> Vec<Network> {
    parse_fixtures(&F_TABLES)
}

/// The six networks isomorphic to the first counterexample.
pub fn catalog_f1_family() -> Vec<Network> {
    parse_fixtures(&H_TABLES)
}

/// The three networks isomorphic to the second counterexample, all sharing
/// the loops-only interaction graph.
pub fn catalog_f2_family() -> Vec<Network> {
    parse_fixtures(&G_TABLES)
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogReport {
    pub passed: bool,
    pub checks: Vec<CatalogCheck>,
}

impl CatalogReport {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

fn network_from_code_n2(code: u32) -> Network {
    let table = (0..4).map(|x| Config((code >> (2 * x)) & 3)).collect();
    Network::new(2, table).expect("two-component table")
}

fn conjugacy_class(f: &Network) -> BTreeSet<Vec<Config>> {
    let mut class = BTreeSet::new();
    for_each_permutation(f.size(), |map| {
        class.insert(conjugate_unchecked(f, map).table().to_vec());
        false
    });
    class
}

/// Exhaustive verification of the two-component landscape: which of the
/// 256 networks avoid the complete graph, the exact families of the two
/// distinguished counterexamples, and which networks have a singleton
/// family.
pub fn catalog_n2() -> CatalogReport {
    let mut checks = Vec::new();
    let complete = Digraph::complete(2);
    let loops_only = Digraph::from_arcs(2, [(0, 0), (1, 1)]).expect("valid arcs");

    let counterexamples = catalog_counterexamples();
    let mut exceptional_tables: BTreeSet<Vec<Config>> = BTreeSet::new();
    for f in &counterexamples {
        exceptional_tables.extend(conjugacy_class(f));
    }

    let mut avoiders = 0usize;
    let mut iff_failures = Vec::new();
    let mut singleton_tables: BTreeSet<Vec<Config>> = BTreeSet::new();
    for code in 0u32..256 {
        let f = network_from_code_n2(code);
        let family = all_graphs(&f, false).expect("n = 2 is enumerable");
        if family.len() == 1 {
            singleton_tables.insert(f.table().to_vec());
        }
        if f.is_constant() || f.is_identity() {
            continue;
        }
        let avoids = !family.contains(&complete);
        let listed = exceptional_tables.contains(&f.table().to_vec());
        if avoids {
            avoiders += 1;
        }
        if avoids != listed {
            iff_failures.push(code);
        }
    }
    checks.push(CatalogCheck {
        name: "complete graph avoided exactly on the listed classes",
        passed: iff_failures.is_empty(),
        detail: if iff_failures.is_empty() {
            format!(
                "{avoiders} non-trivial networks avoid the complete graph, \
                 matching the {} listed class members",
                exceptional_tables.len()
            )
        } else {
            format!("mismatching table codes: {iff_failures:?}")
        },
    });
    checks.push(CatalogCheck {
        name: "avoider count equals listed class size",
        passed: avoiders == exceptional_tables.len(),
        detail: format!("{avoiders} avoiders vs {}", exceptional_tables.len()),
    });

    // The first counterexample: six isomorphic networks, three graphs.
    let f1 = &counterexamples[0];
    let f1_class = conjugacy_class(f1);
    let h_tables: BTreeSet<Vec<Config>> = catalog_f1_family()
        .iter()
        .map(|f| f.table().to_vec())
        .collect();
    checks.push(CatalogCheck {
        name: "first family members",
        passed: f1_class == h_tables && f1_class.len() == 6,
        detail: format!("{} conjugates", f1_class.len()),
    });
    let f1_graphs = all_graphs(f1, false).expect("n = 2");
    let expected_f1_graphs = [
        Digraph::from_arcs(2, [(0, 1), (1, 0)]).expect("valid"),
        Digraph::from_arcs(2, [(0, 0), (0, 1), (1, 1)]).expect("valid"),
        Digraph::from_arcs(2, [(0, 0), (1, 0), (1, 1)]).expect("valid"),
    ];
    let f1_graphs_ok = f1_graphs.len() == 3
        && expected_f1_graphs.iter().all(|g| f1_graphs.contains(g))
        && !f1_graphs.contains(&complete);
    checks.push(CatalogCheck {
        name: "first family graphs",
        passed: f1_graphs_ok,
        detail: format!("{} graphs", f1_graphs.len()),
    });

    // The second counterexample: three isomorphic networks, one graph.
    let f2 = &counterexamples[1];
    let f2_class = conjugacy_class(f2);
    let g_tables: BTreeSet<Vec<Config>> = catalog_f2_family()
        .iter()
        .map(|f| f.table().to_vec())
        .collect();
    let f2_graphs = all_graphs(f2, false).expect("n = 2");
    checks.push(CatalogCheck {
        name: "second family members and graph",
        passed: f2_class == g_tables
            && f2_class.len() == 3
            && f2_graphs.len() == 1
            && f2_graphs.contains(&loops_only),
        detail: format!(
            "{} conjugates, {} graphs",
            f2_class.len(),
            f2_graphs.len()
        ),
    });

    // Singleton families: the identity, the four constants, and the second
    // family; nothing else.
    let mut expected_singletons: BTreeSet<Vec<Config>> = BTreeSet::new();
    expected_singletons.insert(Network::identity(2).table().to_vec());
    for c in configs(2) {
        expected_singletons.insert(Network::constant(2, c).table().to_vec());
    }
    expected_singletons.extend(g_tables);
    checks.push(CatalogCheck {
        name: "singleton families",
        passed: singleton_tables == expected_singletons,
        detail: format!(
            "{} singleton networks, expected {}",
            singleton_tables.len(),
            expected_singletons.len()
        ),
    });

    CatalogReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

/// How to pick the networks a scan runs over.
#[derive(Debug, Clone, Copy)]
pub enum ScanMode {
    /// Every network of the given size (all `2^(n 2^n)` tables).
    Exhaustive,
    /// Seeded random tables.
    Sample { count: usize, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct UniquenessReport {
    pub n: usize,
    pub tested: usize,
    pub skipped_trivial: usize,
    /// Non-trivial networks whose family was proven to hold a single
    /// graph. Expected empty for three components.
    pub singletons: Vec<Network>,
    /// Three components only: networks where no conjugate reached the
    /// complete graph. Expected empty.
    pub complete_failures: Vec<Network>,
    pub complete_checked: bool,
}

/// Scan outcome for one network: a second distinct graph and, when asked,
/// the complete graph.
pub(crate) fn scan_certificates(
    f: &Network,
    seed: u64,
    key: u64,
    want_complete: bool,
) -> (bool, bool) {
    let n = f.n();
    let size = f.size();
    let complete = Digraph::complete(n);
    let g0 = f.interaction_graph();
    let mut second = false;
    let mut found_complete = g0 == complete;

    // Constructive fast path for the complete graph.
    if want_complete && !found_complete {
        if let Ok(Some(w)) = complete_witness_best_effort(f) {
            let g = w.h.interaction_graph();
            debug_assert!(g.is_complete());
            found_complete = true;
            second = second || g != g0;
        }
    }

    let done = |second: bool, fc: bool| second && (fc || !want_complete);

    if !done(second, found_complete) && n == 3 {
        // A short seeded stage settles almost every network before the
        // exhaustive fallback.
        let mut rng = substream(seed, "scan", key);
        for _ in 0..512 {
            let pi = Perm::random(n, &mut rng);
            let g = crate::perm::conjugate(f, &pi)
                .expect("sizes agree")
                .interaction_graph();
            second = second || g != g0;
            found_complete = found_complete || g == complete;
            if done(second, found_complete) {
                break;
            }
        }
    }

    if !done(second, found_complete) {
        for_each_permutation(size, |map| {
            let g = conjugate_unchecked(f, map).interaction_graph();
            second = second || g != g0;
            found_complete = found_complete || g == complete;
            done(second, found_complete)
        });
    }
    (second, found_complete)
}

pub fn uniqueness_check(n: usize, mode: ScanMode) -> Result<UniquenessReport> {
    uniqueness_check_with_progress(n, mode, None)
}

/// For every tested non-trivial network, certifies that its family holds
/// at least two graphs and, with three components, that it contains the
/// complete graph. Scans are early-exit; a network only lands in the
/// report's failure lists after the full permutation space was exhausted.
pub fn uniqueness_check_with_progress(
    n: usize,
    mode: ScanMode,
    progress: Option<&(dyn Fn(usize, usize) + Sync)>,
) -> Result<UniquenessReport> {
    if n > 3 {
        return Err(Error::Precondition(format!(
            "scans over (2^{n})! permutations refused"
        )));
    }
    let want_complete = n == 3;
    let seed_of = |mode: &ScanMode| match mode {
        ScanMode::Exhaustive => 0,
        ScanMode::Sample { seed, .. } => *seed,
    };
    let seed = seed_of(&mode);

    let networks: Box<dyn Iterator<Item = Network>> = match mode {
        ScanMode::Exhaustive => {
            let bits = n * (1 << n);
            Box::new((0u64..(1u64 << bits)).map(move |code| {
                let mask = (1u32 << n) - 1;
                let table = (0..(1usize << n))
                    .map(|x| Config(((code >> (n * x)) as u32) & mask))
                    .collect();
                Network::new(n, table).expect("enumerated table")
            }))
        }
        ScanMode::Sample { count, seed } => Box::new((0..count).map(move |t| {
            let mut rng = substream(seed, "uniqueness-net", t as u64);
            Network::random(n, &mut rng)
        })),
    };

    const CHUNK: usize = 1 << 14;
    let mut report = UniquenessReport {
        n,
        tested: 0,
        skipped_trivial: 0,
        singletons: Vec::new(),
        complete_failures: Vec::new(),
        complete_checked: want_complete,
    };
    let total = match mode {
        ScanMode::Exhaustive => 1usize << (n * (1 << n)),
        ScanMode::Sample { count, .. } => count,
    };

    let mut buffer: Vec<(u64, Network)> = Vec::with_capacity(CHUNK);
    let mut processed = 0usize;
    let mut networks = networks.enumerate().map(|(i, f)| (i as u64, f)).peekable();
    while networks.peek().is_some() {
        buffer.clear();
        buffer.extend(networks.by_ref().take(CHUNK));
        let outcomes: Vec<(u64, Option<(bool, bool)>)> = buffer
            .par_iter()
            .map(|(key, f)| {
                if f.is_constant() || f.is_identity() {
                    (*key, None)
                } else {
                    (*key, Some(scan_certificates(f, seed, *key, want_complete)))
                }
            })
            .collect();
        for ((_, f), (_, outcome)) in buffer.iter().zip(outcomes.iter()) {
            match outcome {
                None => report.skipped_trivial += 1,
                Some((second, complete)) => {
                    report.tested += 1;
                    if !second {
                        report.singletons.push(f.clone());
                    }
                    if want_complete && !complete {
                        report.complete_failures.push(f.clone());
                    }
                }
            }
        }
        processed += buffer.len();
        if let Some(cb) = progress {
            cb(processed, total);
        }
    }
    Ok(report)
}
