//! The sparse family: networks that collapse a small set onto `0` and fix
//! everything else. Every relabeling of such a network keeps a quadratic
//! number of arcs, which the isoperimetric toolkit below certifies
//! instance by instance.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{configs, Config};
use crate::error::{Error, Result};
use crate::network::Network;
use crate::perm::{conjugate, Perm};
use crate::rng::{sample_distinct, substream};
use crate::subset::CubeSubset;

/// `f^A`: sends every member of `A` to `0` and fixes the rest. `A` must
/// contain `0`, so `0` is a fixed point either way.
pub fn build_fa(a: &CubeSubset) -> Result<Network> {
    if !a.contains(Config::ZERO) {
        return Err(Error::Precondition(
            "the collapsed set must contain the zero configuration".into(),
        ));
    }
    let n = a.n();
    let table = configs(n)
        .map(|x| if a.contains(x) { Config::ZERO } else { x })
        .collect();
    Network::new(n, table)
}

/// Edge boundary of `X` in the hypercube graph.
pub fn boundary(x: &CubeSubset) -> u64 {
    x.boundary()
}

/// The first `k` configurations in lexicographic order, which under this
/// crate's packing is simply `{0, ..., k-1}`.
pub fn lex_prefix(n: usize, k: usize) -> Result<CubeSubset> {
    if k > 1 << n {
        return Err(Error::Precondition(format!(
            "prefix length {k} exceeds 2^{n}"
        )));
    }
    CubeSubset::from_members(n, (0..k as u32).map(Config))
}

/// The isoperimetric comparison for one set: its boundary, the boundary of
/// the lexicographic prefix of the same size, and the closed-form bound
/// `|X| (n - log2 |X|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarperCheck {
    pub boundary: u64,
    pub lex_boundary: u64,
    pub corollary_bound: f64,
}

/// Tolerance for the real-valued bounds; all decisive counts are exact
/// integers.
pub const REAL_TOLERANCE: f64 = 1e-9;

/// Computes the three quantities and asserts the chain
/// `boundary >= lex_boundary >= corollary_bound` (the latter up to the
/// floating tolerance). Both inequalities are theorems, so a failure
/// signals a broken boundary computation.
pub fn harper_check(x: &CubeSubset) -> Result<HarperCheck> {
    if x.is_empty() {
        return Err(Error::Precondition(
            "the closed-form bound needs a non-empty set".into(),
        ));
    }
    let n = x.n();
    let b = x.boundary();
    let lex = lex_prefix(n, x.len())?.boundary();
    let size = x.len() as f64;
    let bound = size * (n as f64 - size.log2());
    assert!(
        b >= lex,
        "boundary {b} below lexicographic boundary {lex} for size {}",
        x.len()
    );
    assert!(
        lex as f64 >= bound - REAL_TOLERANCE,
        "lexicographic boundary {lex} below closed-form bound {bound}"
    );
    Ok(HarperCheck {
        boundary: b,
        lex_boundary: lex,
        corollary_bound: bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AvgDegreeCheck {
    pub avg_degree: f64,
    pub ok: bool,
}

/// Average degree `d` of the hypercube subgraph induced by `A`, and the
/// size bound `|A| >= 2^d` it implies.
pub fn avg_degree_check(a: &CubeSubset) -> Result<AvgDegreeCheck> {
    if a.is_empty() {
        return Err(Error::Precondition(
            "average degree needs a non-empty set".into(),
        ));
    }
    let d = a.induced_degree_sum() as f64 / a.len() as f64;
    let ok = a.len() as f64 >= 2f64.powf(d) - REAL_TOLERANCE;
    Ok(AvgDegreeCheck { avg_degree: d, ok })
}

/// `ceil(2^(n/4))` in exact integer arithmetic: the smallest `m` with
/// `m^4 >= 2^n`.
pub fn collapsed_set_size(n: usize) -> usize {
    let target = 1u64 << n;
    let mut m = 1u64;
    while m * m * m * m < target {
        m += 1;
    }
    m as usize
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SparseReport {
    pub n: usize,
    pub trials: usize,
    pub violations: usize,
    pub min_arcs: usize,
    pub bound: f64,
}

impl SparseReport {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

/// Samples collapsed sets of size `ceil(2^(n/4))` containing `0`, and
/// checks that the interaction graph of `f^A` and of every sampled
/// conjugate has at least `n^2 / 9` arcs; also checks that translating a
/// network by any `z` (conjugation by `x -> x + z`) leaves the graph
/// unchanged. Violations are counted, never asserted: a nonzero count is a
/// falsification candidate.
///
/// For `n <= 8` the identity network already settles the bound with its
/// `n` loops, so the report carries that single exact instance instead of
/// samples.
pub fn verify_sparse_family(n: usize, trials: usize, conjugations: usize, seed: u64) -> SparseReport {
    let bound = (n * n) as f64 / 9.0;
    if n <= 8 {
        return SparseReport {
            n,
            trials: 0,
            violations: 0,
            min_arcs: n,
            bound,
        };
    }

    let meets_bound = |arcs: usize| 9 * arcs >= n * n;
    let size = collapsed_set_size(n);

    let per_trial = |trial: usize| -> (usize, usize) {
        let mut rng = substream(seed, "sparse", trial as u64);
        let mut violations = 0usize;
        let mut min_arcs = usize::MAX;

        let mut members = vec![Config::ZERO];
        members.extend(
            sample_distinct(&mut rng, 1, 1u32 << n, size - 1)
                .into_iter()
                .map(Config),
        );
        let a = CubeSubset::from_members(n, members).expect("sampled members are in range");
        let f = build_fa(&a).expect("zero is in the sampled set");

        let g = f.interaction_graph();
        min_arcs = min_arcs.min(g.arc_count());
        if !meets_bound(g.arc_count()) {
            violations += 1;
        }

        // Arcs promised directly by the construction: when some component
        // never appears in A, it reaches every component that does.
        let support: Vec<usize> = (0..n).filter(|&i| a.iter().any(|x| x.bit(i))).collect();
        if support.len() < n {
            for &i in &support {
                for j in 0..n {
                    if !support.contains(&j) && !g.has_arc(j, i) {
                        violations += 1;
                    }
                }
            }
        }

        for _ in 0..conjugations {
            let pi = Perm::random(n, &mut rng);
            let h = conjugate(&f, &pi).expect("sizes agree");
            let gh = h.interaction_graph();
            min_arcs = min_arcs.min(gh.arc_count());
            if !meets_bound(gh.arc_count()) {
                violations += 1;
            }
            let z = Config(rng.random_range(0..(1u32 << n)));
            if translate(&h, z).interaction_graph() != gh {
                violations += 1;
            }
        }
        (violations, min_arcs)
    };

    // Trials draw from independent substreams, so the merge is order-free.
    let (violations, min_arcs) = (0..trials)
        .into_par_iter()
        .map(per_trial)
        .reduce(|| (0, usize::MAX), |a, b| (a.0 + b.0, a.1.min(b.1)));
    let min_arcs = if trials == 0 { 0 } else { min_arcs };

    SparseReport {
        n,
        trials,
        violations,
        min_arcs,
        bound,
    }
}

/// `h'(x) = h(x + z) + z`: conjugation by the translation `x -> x + z`.
pub fn translate(h: &Network, z: Config) -> Network {
    let table = configs(h.n()).map(|x| h.apply(x ^ z) ^ z).collect();
    Network::new(h.n(), table).expect("translated table is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn fa_degenerate_cases() {
        let just_zero = CubeSubset::from_members(4, [Config::ZERO]).unwrap();
        assert!(build_fa(&just_zero).unwrap().is_identity());
        assert!(build_fa(&CubeSubset::full(4)).unwrap().is_constant());
        let no_zero = CubeSubset::from_members(4, [Config(3)]).unwrap();
        assert!(build_fa(&no_zero).is_err());
    }

    #[test]
    fn boundary_examples() {
        assert_eq!(boundary(&CubeSubset::from_members(4, [Config(9)]).unwrap()), 4);
        assert_eq!(boundary(&CubeSubset::full(4)), 0);
        // The length-5 prefix of {0,1}^4 has 5 internal edges, hence
        // boundary 5 * 4 - 2 * 5 = 10.
        assert_eq!(boundary(&lex_prefix(4, 5).unwrap()), 10);
    }

    #[test]
    fn lex_prefix_is_integer_range() {
        assert!(lex_prefix(4, 0).unwrap().is_empty());
        assert_eq!(lex_prefix(4, 16).unwrap(), CubeSubset::full(4));
        assert_eq!(
            lex_prefix(4, 5).unwrap().members(),
            (0..5).map(Config).collect::<Vec<_>>()
        );
        assert!(lex_prefix(4, 17).is_err());
    }

    #[test]
    fn harper_on_the_five_prefix() {
        let check = harper_check(&lex_prefix(4, 5).unwrap()).unwrap();
        assert_eq!(check.boundary, 10);
        assert_eq!(check.lex_boundary, 10);
        assert!((check.corollary_bound - 5.0 * (4.0 - 5f64.log2())).abs() < 1e-12);
        assert!((check.corollary_bound - 8.3903595).abs() < 1e-6);
    }

    #[test]
    fn harper_subcube_is_the_equality_case() {
        // A d-dimensional subcube has boundary 2^d (n - d), matching the
        // closed-form bound exactly.
        let n = 5;
        for d in 0..=n {
            let members = (0..(1u32 << d)).map(Config);
            let sub = CubeSubset::from_members(n, members).unwrap();
            let check = harper_check(&sub).unwrap();
            let expect = (1u64 << d) * (n - d) as u64;
            assert_eq!(check.boundary, expect);
            assert!((check.corollary_bound - expect as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn harper_rejects_empty_sets() {
        assert!(harper_check(&CubeSubset::empty(3)).is_err());
        assert!(avg_degree_check(&CubeSubset::empty(3)).is_err());
    }

    #[test]
    fn avg_degree_extremes() {
        let full = avg_degree_check(&CubeSubset::full(4)).unwrap();
        assert!((full.avg_degree - 4.0).abs() < 1e-12);
        assert!(full.ok);
        let single = avg_degree_check(&CubeSubset::from_members(4, [Config(7)]).unwrap()).unwrap();
        assert!((single.avg_degree - 0.0).abs() < 1e-12);
        assert!(single.ok);
    }

    #[test]
    fn collapsed_sizes() {
        assert_eq!(collapsed_set_size(9), 5);
        assert_eq!(collapsed_set_size(12), 8);
        assert_eq!(collapsed_set_size(16), 16);
    }

    #[test]
    fn translation_preserves_interaction_graph() {
        let mut rng = substream(5, "translate", 0);
        for _ in 0..20 {
            let h = Network::random(5, &mut rng);
            let z = Config(rng.random_range(0..32));
            assert_eq!(
                translate(&h, z).interaction_graph(),
                h.interaction_graph()
            );
        }
    }

    #[test]
    fn translation_normalizes_a_collapse_onto_zero() {
        // A network sending A' to some z in A' and fixing the rest becomes,
        // after translation by z, the collapse of A' + z onto 0.
        let aprime = CubeSubset::from_members(4, [Config(3), Config(5), Config(9)]).unwrap();
        let z = Config(3);
        let table: Vec<Config> = configs(4)
            .map(|x| if aprime.contains(x) { z } else { x })
            .collect();
        let h = Network::new(4, table).unwrap();
        let expected = build_fa(&aprime.translate(z)).unwrap();
        assert_eq!(translate(&h, z), expected);
    }

    #[test]
    fn small_n_reports_identity_instance() {
        let report = verify_sparse_family(6, 50, 5, 1);
        assert_eq!(report.trials, 0);
        assert_eq!(report.min_arcs, 6);
        assert_eq!(report.violations, 0);
    }

    #[test]
    fn sampled_family_meets_bound_at_n9() {
        let report = verify_sparse_family(9, 10, 3, 42);
        assert_eq!(report.violations, 0);
        assert!(report.min_arcs * 9 >= 81);
    }

    #[test]
    fn report_json_shape() {
        let report = verify_sparse_family(6, 0, 0, 0);
        let v: serde_json::Value = serde_json::from_str(&report.to_json_string()).unwrap();
        assert_eq!(v["n"], 6);
        assert_eq!(v["min_arcs"], 6);
    }
}
