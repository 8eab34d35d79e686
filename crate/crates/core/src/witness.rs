//! Constructive witnesses that the complete digraph belongs to the family
//! of interaction graphs of every network other than constants and the
//! identity, for 5 or more components.
//!
//! Each route builds a partial relabeling of configurations from structure
//! it finds in the dynamics (many fixed points, many long cycles, or a
//! large independent set), completes it to a permutation, conjugates, and
//! then re-checks the interaction graph of the result. No construction is
//! trusted blindly: a witness is returned only after its graph has been
//! recomputed and found complete, so a bug here (or a gap in the
//! underlying argument) surfaces as an `Invariant` error, never as a wrong
//! answer.

use serde::{Deserialize, Serialize};

use crate::config::{configs, Config};
use crate::dynamics::is_independent_set;
use crate::error::{Error, Result};
use crate::network::Network;
use crate::perm::{conjugate, PartialPerm, Perm};
use crate::subset::CubeSubset;

/// Which construction produced a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    FixedPoints,
    LimitCycles,
    #[serde(rename = "IndependentSet-case1")]
    IndependentSetCase1,
    #[serde(rename = "IndependentSet-case2a")]
    IndependentSetCase2a,
    #[serde(rename = "IndependentSet-case2b")]
    IndependentSetCase2b,
    #[serde(rename = "IndependentSet-case2c")]
    IndependentSetCase2c,
}

/// A verified certificate: `h = pi . f . pi^-1` and the interaction graph
/// of `h` is complete.
#[derive(Debug, Clone)]
pub struct WitnessResult {
    pub pi: Perm,
    pub h: Network,
    pub route: Route,
}

impl WitnessResult {
    pub fn to_json_string(&self) -> String {
        serde_json::json!({
            "route": self.route,
            "pi": self.pi.to_json_value(),
            "h": self.h.to_json_value(),
        })
        .to_string()
    }
}

fn verified(f: &Network, pi: Perm, route: Route) -> Result<WitnessResult> {
    let h = conjugate(f, &pi)?;
    let g = h.interaction_graph();
    if !g.is_complete() {
        return Err(Error::Invariant(format!(
            "{route:?} construction produced {} of {} arcs",
            g.arc_count(),
            f.n() * f.n()
        )));
    }
    Ok(WitnessResult { pi, h, route })
}

/// Witness from at least `2n` fixed points.
///
/// Picks a non-fixed `c`, then sends `2n - 1` fixed points (none equal to
/// `f(c)`) to `0`, the units `e_i`, and `e_1 + e_2 + e_i`, while `c` goes
/// to `e_1 + e_2` and `f(c)` to `e_1 + e_2 + 1`. With 3 components the
/// images `e_3` and `e_1 + e_2 + 1` coincide, which forces `f(c)` itself
/// to serve as the fixed point sent to `e_3`; the construction therefore
/// needs `f(c)` fixed in that case.
pub fn witness_from_fixed_points(f: &Network) -> Result<WitnessResult> {
    let n = f.n();
    if n < 3 {
        return Err(Error::Precondition(format!(
            "fixed-point witness needs at least 3 components, got {n}"
        )));
    }
    if f.is_identity() {
        return Err(Error::Precondition(
            "the identity is excluded from the fixed-point witness".into(),
        ));
    }
    let fixed = f.cycle_decomposition().fixed_points;
    if fixed.len() < 2 * n {
        return Err(Error::Precondition(format!(
            "{} fixed points, need at least {}",
            fixed.len(),
            2 * n
        )));
    }
    let fixed_set = CubeSubset::from_members(n, fixed.iter().copied())?;

    let c = if n == 3 {
        configs(n)
            .find(|&x| f.apply(x) != x && fixed_set.contains(f.apply(x)))
            .ok_or_else(|| {
                Error::Precondition(
                    "with 3 components the construction needs some non-fixed \
                     configuration whose image is fixed"
                        .into(),
                )
            })?
    } else {
        configs(n)
            .find(|&x| f.apply(x) != x)
            .expect("not the identity")
    };
    let fc = f.apply(c);

    let e12 = Config::unit(0) ^ Config::unit(1);
    let ones = Config::all_ones(n);
    let mut pp = PartialPerm::new(n);
    pp.insert(c, e12)?;
    pp.insert(fc, e12 ^ ones)?;

    let mut targets = vec![Config::ZERO];
    targets.extend((0..n).map(Config::unit));
    targets.extend((2..n).map(|i| e12 ^ Config::unit(i)));

    let mut supply = fixed.iter().copied().filter(|&x| x != fc);
    for t in targets {
        if n == 3 && t == e12 ^ ones {
            // Already pinned to f(c) above.
            continue;
        }
        let source = supply
            .next()
            .expect("2n fixed points leave enough choices besides f(c)");
        pp.insert(source, t)?;
    }
    verified(f, pp.complete(), Route::FixedPoints)
}

/// Witness from at least `n` limit cycles of length 3 or more.
///
/// Takes a representative `a^i` inside each of `n` such cycles, with
/// `b^i = f(a^i)` and `c^i = f(b^i)`, and relabels them to
/// `e_{i-1} + e_i`, `e_{i-1}`, and `e_{i-1} + 1` (indices cyclic). Then
/// the images of `e_{i-1} + e_i` and `e_{i-1}` differ in every component
/// while the arguments differ only in component `i`.
pub fn witness_from_limit_cycles(f: &Network) -> Result<WitnessResult> {
    let n = f.n();
    let decomp = f.cycle_decomposition();
    let long: Vec<&Vec<Config>> = decomp.cycles_of_length_at_least(3).collect();
    if long.len() < n {
        return Err(Error::Precondition(format!(
            "{} limit cycles of length >= 3, need at least {n}",
            long.len()
        )));
    }
    let ones = Config::all_ones(n);
    let mut pp = PartialPerm::new(n);
    for (idx, cycle) in long[..n].iter().enumerate() {
        let a = cycle[0];
        let b = f.apply(a);
        let c = f.apply(b);
        let prev = (idx + n - 1) % n;
        pp.insert(a, Config::unit(prev) ^ Config::unit(idx))?;
        pp.insert(b, Config::unit(prev))?;
        pp.insert(c, Config::unit(prev) ^ ones)?;
    }
    verified(f, pp.complete(), Route::LimitCycles)
}

/// Builds `2k` pairwise disjoint subsets of `{0,1}^n` with prescribed
/// positive sizes summing to `n + k`, such that every component `i` has a
/// flip pair across some odd/even couple: an `x` in the `2p-1`-st set with
/// `x + e_i` in the `2p`-th.
///
/// The components are split into blocks, one block per set, sized one less
/// than the target for the odd sets. Each odd set is an anchor plus double
/// flips of it, each even set the single flips; anchors are `0` for one
/// pair, `0` and `1` for two, and unit vectors chained cyclically through
/// the even blocks for three or more.
pub fn build_x_sets(n: usize, k: usize, sizes: &[usize]) -> Result<Vec<Vec<Config>>> {
    if n < 5 {
        return Err(Error::Precondition(format!(
            "disjoint flip-cover sets need n >= 5, got {n}"
        )));
    }
    if k < 1 || k > n {
        return Err(Error::Precondition(format!("k = {k} outside 1..={n}")));
    }
    if sizes.len() != 2 * k {
        return Err(Error::Precondition(format!(
            "expected 2k = {} sizes, got {}",
            2 * k,
            sizes.len()
        )));
    }
    if sizes.iter().any(|&s| s == 0) {
        return Err(Error::Precondition("sizes must be positive".into()));
    }
    if sizes.iter().sum::<usize>() != n + k {
        return Err(Error::Precondition(format!(
            "sizes sum to {}, expected n + k = {}",
            sizes.iter().sum::<usize>(),
            n + k
        )));
    }

    // Component blocks, consumed in increasing order. Odd-position sets
    // (even indices here) reserve one slot for their anchor.
    let mut blocks: Vec<Vec<usize>> = Vec::with_capacity(2 * k);
    let mut next = 0usize;
    for (c, &s) in sizes.iter().enumerate() {
        let want = if c % 2 == 0 { s - 1 } else { s };
        blocks.push((next..next + want).collect());
        next += want;
    }
    debug_assert_eq!(next, n);

    let pivots: Vec<usize> = (0..k).map(|p| blocks[2 * p + 1][0]).collect();
    let ones = Config::all_ones(n);
    let anchors: Vec<Config> = match k {
        1 => vec![Config::ZERO],
        2 => vec![Config::ZERO, ones],
        _ => (0..k)
            .map(|p| Config::unit(pivots[(p + k - 1) % k]))
            .collect(),
    };

    let mut sets: Vec<Vec<Config>> = Vec::with_capacity(2 * k);
    for p in 0..k {
        let anchor = anchors[p];
        let pivot = Config::unit(pivots[p]);
        let mut odd: Vec<Config> = std::iter::once(anchor)
            .chain(blocks[2 * p].iter().map(|&i| anchor ^ pivot ^ Config::unit(i)))
            .collect();
        odd.sort_unstable();
        let mut even: Vec<Config> = blocks[2 * p + 1]
            .iter()
            .map(|&i| anchor ^ Config::unit(i))
            .collect();
        even.sort_unstable();
        sets.push(odd);
        sets.push(even);
    }

    // Postconditions: exact sizes, pairwise disjoint, full flip coverage.
    let mut seen = CubeSubset::empty(n);
    for (c, set) in sets.iter().enumerate() {
        if set.len() != sizes[c] {
            return Err(Error::Invariant(format!(
                "set {c} has size {}, wanted {}",
                set.len(),
                sizes[c]
            )));
        }
        for &x in set {
            if !seen.insert(x) {
                return Err(Error::Invariant(format!(
                    "sets are not pairwise disjoint at {}",
                    x.0
                )));
            }
        }
    }
    let memberships: Vec<CubeSubset> = sets
        .iter()
        .map(|s| CubeSubset::from_members(n, s.iter().copied()).expect("validated members"))
        .collect();
    for i in 0..n {
        let covered = (0..k).any(|p| {
            sets[2 * p]
                .iter()
                .any(|&x| memberships[2 * p + 1].contains(x.flip(i)))
        });
        if !covered {
            return Err(Error::Invariant(format!(
                "no flip pair covers component {}",
                i + 1
            )));
        }
    }
    Ok(sets)
}

/// An independent set grouped by image: one class per image point, images
/// ascending, members ascending.
#[derive(Debug, Clone)]
struct ImageClass {
    image: Config,
    members: Vec<Config>,
}

fn partition_by_image(f: &Network, members: &[Config]) -> Vec<ImageClass> {
    let mut classes: Vec<ImageClass> = Vec::new();
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    for &x in &sorted {
        let y = f.apply(x);
        match classes.binary_search_by_key(&y, |c| c.image) {
            Ok(at) => classes[at].members.push(x),
            Err(at) => classes.insert(
                at,
                ImageClass {
                    image: y,
                    members: vec![x],
                },
            ),
        }
    }
    classes
}

/// Removes elements until `target` members remain, always taking the
/// largest-valued element of a largest class, never shrinking a class
/// below `min_size`. Classes emptied (only possible with `min_size` 0)
/// disappear.
fn trim_classes(classes: &mut Vec<ImageClass>, target: usize, min_size: usize) {
    let mut total: usize = classes.iter().map(|c| c.members.len()).sum();
    while total > target {
        let candidate = classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.members.len() > min_size)
            .max_by_key(|(_, c)| (c.members.len(), *c.members.last().expect("non-empty class")))
            .map(|(at, _)| at);
        let Some(at) = candidate else { break };
        classes[at].members.pop();
        if classes[at].members.is_empty() {
            classes.remove(at);
        }
        total -= 1;
    }
}

/// The even-image construction: needs `|f(A)| = 2k` classes and at least
/// `n + k` members. Shrinks to exactly `n + k` keeping every class
/// populated, lays the classes onto disjoint flip-cover sets, and sends
/// the `2k` image points to `y^p` and `y^p + 1` with the `y^p` chosen
/// outside everything already used.
fn even_image_witness(
    f: &Network,
    mut classes: Vec<ImageClass>,
    route: Route,
) -> Result<WitnessResult> {
    let n = f.n();
    let k = classes.len() / 2;
    debug_assert_eq!(classes.len(), 2 * k);
    trim_classes(&mut classes, n + k, 1);
    debug_assert_eq!(
        classes.iter().map(|c| c.members.len()).sum::<usize>(),
        n + k
    );

    let sizes: Vec<usize> = classes.iter().map(|c| c.members.len()).collect();
    let xsets = build_x_sets(n, k, &sizes)?;

    let mut used = CubeSubset::empty(n);
    for set in &xsets {
        for &x in set {
            used.insert(x);
        }
    }
    let ones = Config::all_ones(n);
    let ys: Vec<Config> = configs(n)
        .filter(|&y| !y.bit(0) && !used.contains(y) && !used.contains(y ^ ones))
        .take(k)
        .collect();
    if ys.len() < k {
        return Err(Error::Invariant(format!(
            "only {} spare pair anchors available, need {k}",
            ys.len()
        )));
    }

    let mut pp = PartialPerm::new(n);
    for (c, class) in classes.iter().enumerate() {
        let y = ys[c / 2];
        let image_target = if c % 2 == 0 { y } else { y ^ ones };
        pp.insert(class.image, image_target)?;
        for (&member, &target) in class.members.iter().zip(xsets[c].iter()) {
            pp.insert(member, target)?;
        }
    }
    verified(f, pp.complete(), route)
}

/// The single-image construction, split on whether the common image `a`
/// and the chosen `b` with `f(b) != a` are fixed. The mixed case hands an
/// enlarged set with two image points back to the even-image construction.
fn single_image_witness(
    f: &Network,
    classes: &[ImageClass],
    allow_recursion: bool,
) -> Result<WitnessResult> {
    let n = f.n();
    debug_assert_eq!(classes.len(), 1);
    let a = classes[0].image;
    let members = &classes[0].members;
    debug_assert!(members.len() > n);

    let b = configs(n)
        .find(|&x| f.apply(x) != a)
        .ok_or_else(|| Error::Precondition("constant networks are excluded".into()))?;
    let fa = f.apply(a);
    let ones = Config::all_ones(n);

    if fa != a {
        let mut pp = PartialPerm::new(n);
        pp.insert(a, Config::ZERO)?;
        pp.insert(fa, ones)?;
        let picks = members.iter().copied().filter(|&x| x != fa).take(n);
        for (i, x) in picks.enumerate() {
            pp.insert(x, Config::unit(i))?;
        }
        return verified(f, pp.complete(), Route::IndependentSetCase2a);
    }

    if f.apply(b) == b {
        let mut pp = PartialPerm::new(n);
        pp.insert(a, ones)?;
        pp.insert(b, Config::ZERO)?;
        for (i, &x) in members.iter().take(n).enumerate() {
            pp.insert(x, Config::unit(i))?;
        }
        return verified(f, pp.complete(), Route::IndependentSetCase2b);
    }

    if !allow_recursion {
        return Err(Error::Precondition(
            "mixed single-image case needs the even-image construction, \
             unavailable below 5 components"
                .into(),
        ));
    }

    // f(a) = a and f(b) not fixed: n members avoiding f(b), plus b, form
    // an independent set with exactly two image points.
    let fb = f.apply(b);
    let reduced: Vec<Config> = members
        .iter()
        .copied()
        .filter(|&x| x != fb)
        .take(n)
        .chain(std::iter::once(b))
        .collect();
    debug_assert_eq!(reduced.len(), n + 1);
    let two_classes = partition_by_image(f, &reduced);
    debug_assert_eq!(two_classes.len(), 2);
    even_image_witness(f, two_classes, Route::IndependentSetCase2c)
}

/// Witness from an independent set of size at least `2n` (an `A` with
/// `f(A)` disjoint from `A`), for `n >= 5`.
///
/// The set is first trimmed to exactly `2n` members. An even image count
/// goes straight to the even-image construction; a single image goes to
/// the single-image cases; an odd count of 3 or more drops a smallest
/// image class, re-adding spare members of the original set if the drop
/// overshoots, and then proceeds as even.
pub fn witness_from_independent_set(f: &Network, a: &CubeSubset) -> Result<WitnessResult> {
    let n = f.n();
    if n < 5 {
        return Err(Error::Precondition(format!(
            "independent-set witness needs at least 5 components, got {n}"
        )));
    }
    if f.is_constant() {
        return Err(Error::Precondition(
            "constant networks are excluded from the independent-set witness".into(),
        ));
    }
    if a.n() != n {
        return Err(Error::Precondition("set dimension mismatch".into()));
    }
    if !is_independent_set(f, a) {
        return Err(Error::Precondition(
            "the supplied set is not independent: it meets its own image".into(),
        ));
    }
    if a.len() < 2 * n {
        return Err(Error::Precondition(format!(
            "independent set of size {}, need at least {}",
            a.len(),
            2 * n
        )));
    }

    let original = partition_by_image(f, &a.members());
    let mut classes = original.clone();
    trim_classes(&mut classes, 2 * n, 0);

    match classes.len() {
        1 => single_image_witness(f, &classes, true),
        t if t % 2 == 0 => even_image_witness(f, classes, Route::IndependentSetCase1),
        _ => {
            // Odd image count, at least 3: drop a smallest class.
            let drop = classes
                .iter()
                .enumerate()
                .min_by_key(|(_, c)| (c.members.len(), c.image))
                .map(|(at, _)| at)
                .expect("classes are non-empty");
            let dropped_image = classes[drop].image;
            classes.remove(drop);
            let k = classes.len() / 2;

            let mut total: usize = classes.iter().map(|c| c.members.len()).sum();
            if total < n + k {
                // Refill from members of the original set that were trimmed
                // away, as long as their image class survived the drop.
                let kept = CubeSubset::from_members(
                    n,
                    classes.iter().flat_map(|c| c.members.iter().copied()),
                )?;
                let mut spare: Vec<Config> = original
                    .iter()
                    .filter(|c| c.image != dropped_image)
                    .flat_map(|c| c.members.iter().copied())
                    .filter(|&x| !kept.contains(x))
                    .collect();
                spare.sort_unstable();
                while total < n + k {
                    let Some(x) = spare.pop() else {
                        return Err(Error::Invariant(format!(
                            "odd-image reduction cannot reach {} members",
                            n + k
                        )));
                    };
                    let y = f.apply(x);
                    let at = classes
                        .iter()
                        .position(|c| c.image == y)
                        .expect("spare members keep surviving images");
                    classes[at].members.push(x);
                    classes[at].members.sort_unstable();
                    total += 1;
                }
            }
            even_image_witness(f, classes, Route::IndependentSetCase1)
        }
    }
}

/// Tries the routes in order: many fixed points, then many long limit
/// cycles, then a large independent set. With `n >= 5` one of the three
/// always applies to a network that is neither constant nor the identity,
/// so anything else is an invariant violation.
pub fn complete_witness(f: &Network) -> Result<WitnessResult> {
    let n = f.n();
    if n < 5 {
        return Err(Error::Precondition(format!(
            "guaranteed witness needs at least 5 components, got {n}; \
             use the best-effort search for smaller networks"
        )));
    }
    reject_trivial(f)?;

    let decomp = f.cycle_decomposition();
    if decomp.fixed_points.len() >= 2 * n {
        return witness_from_fixed_points(f);
    }
    if decomp.cycles_of_length_at_least(3).count() >= n {
        return witness_from_limit_cycles(f);
    }
    let a = f.large_independent_set()?;
    if a.len() < 2 * n {
        return Err(Error::Invariant(format!(
            "fewer than {} fixed points and {} long cycles must leave an \
             independent set of size {}, found {}",
            2 * n,
            n,
            2 * n,
            a.len()
        )));
    }
    witness_from_independent_set(f, &a)
}

/// Best-effort variant for fewer than 5 components: attempts every route
/// whose own requirements hold and reports `None` when none of them yields
/// a complete graph. Constants and the identity are still refused.
pub fn complete_witness_best_effort(f: &Network) -> Result<Option<WitnessResult>> {
    reject_trivial(f)?;
    let n = f.n();
    if n >= 5 {
        return complete_witness(f).map(Some);
    }

    let decomp = f.cycle_decomposition();
    if n >= 3 && decomp.fixed_points.len() >= 2 * n {
        if let Ok(w) = witness_from_fixed_points(f) {
            return Ok(Some(w));
        }
    }
    if decomp.cycles_of_length_at_least(3).count() >= n {
        if let Ok(w) = witness_from_limit_cycles(f) {
            return Ok(Some(w));
        }
    }
    if let Ok(a) = f.large_independent_set() {
        if a.len() > n {
            let classes = partition_by_image(f, &a.members());
            if classes.len() == 1 {
                if let Ok(w) = single_image_witness(f, &classes, false) {
                    return Ok(Some(w));
                }
            }
        }
    }
    Ok(None)
}

fn reject_trivial(f: &Network) -> Result<()> {
    if f.is_constant() {
        return Err(Error::Precondition(
            "constant networks keep the arcless graph under every relabeling".into(),
        ));
    }
    if f.is_identity() {
        return Err(Error::Precondition(
            "the identity keeps the loops-only graph under every relabeling".into(),
        ));
    }
    Ok(())
}
