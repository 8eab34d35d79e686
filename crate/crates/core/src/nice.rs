//! Nice sets: the parity certificates governing whether some relabeling of
//! a network drops an arc between two distinct vertices of its interaction
//! graph.
//!
//! A k-nice set of `f` is a set `A` of size `2k` such that both the full
//! preimage `f^-1(A)` and the overlap `f^-1(A) & A` have even size. Having
//! a `2^(n-2)`-nice set is equivalent to some conjugate of `f` missing the
//! arc `j -> i`, and both directions of that equivalence are implemented
//! here as executable constructions.

use serde::{Deserialize, Serialize};

use crate::config::{configs, Config};
use crate::dynamics::PreimageIndex;
use crate::error::{Error, Result};
use crate::network::Network;
use crate::perm::{conjugate, PartialPerm, Perm};
use crate::subset::CubeSubset;

/// A set together with the parity evidence that makes it k-nice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceSetReport {
    /// Members in increasing order; exactly `2k` of them.
    pub members: Vec<Config>,
    pub k: usize,
    /// `|f^-1(A)|`, even.
    pub preimage_size: usize,
    /// `|f^-1(A) & A|`, even.
    pub overlap_size: usize,
}

#[derive(Serialize, Deserialize)]
struct NiceSetWire {
    #[serde(rename = "A")]
    a: Vec<u32>,
    k: usize,
    preimage: usize,
    overlap: usize,
}

impl NiceSetReport {
    pub fn to_json_string(&self) -> String {
        let wire = NiceSetWire {
            a: self.members.iter().map(|x| x.0).collect(),
            k: self.k,
            preimage: self.preimage_size,
            overlap: self.overlap_size,
        };
        serde_json::to_string(&wire).expect("report serialization cannot fail")
    }

    pub fn to_subset(&self, n: usize) -> Result<CubeSubset> {
        CubeSubset::from_members(n, self.members.iter().copied())
    }
}

/// The three bits classifying a member of `A` during the descent: whether
/// its image stays in `A`, whether its full preimage has even size, and
/// whether its preimage inside `A` (minus itself) has even size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AbcSignature {
    pub alpha: bool,
    pub beta: bool,
    pub gamma: bool,
}

impl AbcSignature {
    pub fn of(f: &Network, a: &CubeSubset, x: Config) -> AbcSignature {
        let mut preimage = 0usize;
        let mut preimage_in_a = 0usize;
        for z in configs(f.n()) {
            if f.apply(z) == x {
                preimage += 1;
                if a.contains(z) && z != x {
                    preimage_in_a += 1;
                }
            }
        }
        AbcSignature {
            alpha: a.contains(f.apply(x)),
            beta: preimage % 2 == 0,
            gamma: preimage_in_a % 2 == 0,
        }
    }

    fn code(self) -> usize {
        (self.alpha as usize) | (self.beta as usize) << 1 | (self.gamma as usize) << 2
    }
}

/// Checks the parity conditions on an even-sized set and reports the
/// evidence, or `None` if either parity fails.
pub fn is_nice(f: &Network, a: &CubeSubset) -> Result<Option<NiceSetReport>> {
    if a.n() != f.n() {
        return Err(Error::Precondition("set dimension mismatch".into()));
    }
    if a.is_empty() || a.len() % 2 != 0 {
        return Err(Error::Precondition(format!(
            "nice sets have even positive size, got {}",
            a.len()
        )));
    }
    let mut preimage = 0usize;
    let mut overlap = 0usize;
    for x in configs(f.n()) {
        if a.contains(f.apply(x)) {
            preimage += 1;
            if a.contains(x) {
                overlap += 1;
            }
        }
    }
    if preimage % 2 != 0 || overlap % 2 != 0 {
        return Ok(None);
    }
    Ok(Some(NiceSetReport {
        members: a.members(),
        k: a.len() / 2,
        preimage_size: preimage,
        overlap_size: overlap,
    }))
}

/// Finds a k-nice set by decreasing induction from the full cube, which is
/// `2^(n-1)`-nice for every network.
///
/// Each round removes two equivalent (same signature) and independent
/// (neither maps to the other) members, which preserves all three
/// parities. A counting argument over the at most 8 signature classes
/// guarantees such a pair exists while more than 16 members remain, so `k`
/// may go down to 8; the parities are re-checked after every round and any
/// failure is reported as an invariant violation.
pub fn find_nice_set(f: &Network, k: usize) -> Result<NiceSetReport> {
    let n = f.n();
    if n < 4 {
        return Err(Error::Precondition(format!(
            "the descent needs at least 4 components, got {n}"
        )));
    }
    let half = 1usize << (n - 1);
    if !(8..=half).contains(&k) {
        return Err(Error::Precondition(format!(
            "k = {k} outside the guaranteed range 8..={half}"
        )));
    }

    let pre = PreimageIndex::build(f);
    let mut a = CubeSubset::full(n);
    // Members of A mapping to x; gamma reads its parity, adjusted when x
    // is its own preimage.
    let mut count_in_a: Vec<usize> = configs(n).map(|x| pre.indegree(x)).collect();
    let mut preimage_size = f.size();

    while a.len() > 2 * k {
        let mut buckets: Vec<Vec<Config>> = vec![Vec::new(); 8];
        for x in a.iter() {
            let gamma_count = count_in_a[x.index()] - usize::from(f.apply(x) == x);
            let sig = AbcSignature {
                alpha: a.contains(f.apply(x)),
                beta: pre.indegree(x) % 2 == 0,
                gamma: gamma_count % 2 == 0,
            };
            buckets[sig.code()].push(x);
        }

        let mut pair: Option<(Config, Config)> = None;
        'outer: for bucket in &buckets {
            for (at, &x) in bucket.iter().enumerate() {
                for &y in &bucket[at + 1..] {
                    if f.apply(x) != y && f.apply(y) != x {
                        pair = Some((x, y));
                        break 'outer;
                    }
                }
            }
            // Buckets are scanned in signature order; restarting the outer
            // scan per x keeps the choice deterministic, which is all the
            // construction needs.
        }
        let (x, y) = pair.ok_or_else(|| {
            Error::Invariant(format!(
                "no equivalent independent pair among {} members",
                a.len()
            ))
        })?;

        a.remove(x);
        a.remove(y);
        count_in_a[f.apply(x).index()] -= 1;
        count_in_a[f.apply(y).index()] -= 1;
        preimage_size -= pre.indegree(x) + pre.indegree(y);

        // Every intermediate set must stay nice; a parity break here would
        // contradict the preservation argument.
        let overlap = a.iter().filter(|&x| a.contains(f.apply(x))).count();
        if preimage_size % 2 != 0 || overlap % 2 != 0 {
            return Err(Error::Invariant(format!(
                "parities broke at size {}: preimage {preimage_size}, overlap {overlap}",
                a.len()
            )));
        }
    }

    match is_nice(f, &a)? {
        Some(report) => Ok(report),
        None => Err(Error::Invariant(
            "descent terminated on a set that is not nice".into(),
        )),
    }
}

/// From a `2^(n-2)`-nice set, builds a permutation whose conjugate has no
/// arc `j -> i` (0-based components, `i != j`).
///
/// The set and its preimage are split into balanced halves, mapped onto
/// slabs chosen so that the image of `A` is exactly `{x : x_i = 0}` and the
/// image of `f^-1(A)` is closed under flipping component `j`. Splits are
/// first-half/second-half in increasing order, and slab positions are
/// filled smallest first, so the permutation is reproducible.
pub fn missing_arc_network(
    f: &Network,
    report: &NiceSetReport,
    i: usize,
    j: usize,
) -> Result<(Perm, Network)> {
    let n = f.n();
    if i >= n || j >= n || i == j {
        return Err(Error::Precondition(format!(
            "components must be distinct and in range, got i = {i}, j = {j}"
        )));
    }
    if report.members.len() != 1 << (n - 1) {
        return Err(Error::Precondition(format!(
            "need a {}-nice set (size {}), got size {}",
            1 << (n - 2),
            1 << (n - 1),
            report.members.len()
        )));
    }
    let a = report.to_subset(n)?;
    if is_nice(f, &a)?.is_none() {
        return Err(Error::Precondition(
            "the supplied set is not nice for this network".into(),
        ));
    }

    let mut a_minus = CubeSubset::empty(n);
    for x in configs(n) {
        if a.contains(f.apply(x)) {
            a_minus.insert(x);
        }
    }

    let both: Vec<Config> = a.iter().filter(|&x| a_minus.contains(x)).collect();
    let a_only: Vec<Config> = a.iter().filter(|&x| !a_minus.contains(x)).collect();
    let minus_only: Vec<Config> = a_minus.iter().filter(|&x| !a.contains(x)).collect();
    debug_assert!(both.len() % 2 == 0 && a_only.len() % 2 == 0 && minus_only.len() % 2 == 0);

    let (a1, a2) = both.split_at(both.len() / 2);
    let (a3, a4) = a_only.split_at(a_only.len() / 2);
    let (m3, m4) = minus_only.split_at(minus_only.len() / 2);

    let y0: Vec<Config> = configs(n).filter(|x| !x.bit(i) && !x.bit(j)).collect();
    let y1: Vec<Config> = configs(n).filter(|x| x.bit(i) && !x.bit(j)).collect();
    debug_assert_eq!(a1.len() + a3.len(), y0.len());
    debug_assert!(m3.len() <= y1.len());

    let (x1, x3) = y0.split_at(a1.len());
    let xm3 = &y1[..m3.len()];

    let mut pp = PartialPerm::new(n);
    let mut assign = |sources: &[Config], targets: &[Config], flip: bool| -> Result<()> {
        debug_assert_eq!(sources.len(), targets.len());
        for (&s, &t) in sources.iter().zip(targets.iter()) {
            pp.insert(s, if flip { t.flip(j) } else { t })?;
        }
        Ok(())
    };
    assign(a1, x1, false)?;
    assign(a2, x1, true)?;
    assign(a3, x3, false)?;
    assign(a4, x3, true)?;
    assign(m3, xm3, false)?;
    assign(m4, xm3, true)?;

    let pi = pp.complete();
    let h = conjugate(f, &pi)?;
    if h.interaction_graph().has_arc(j, i) {
        return Err(Error::Invariant(format!(
            "constructed conjugate still has the arc {} -> {}",
            j + 1,
            i + 1
        )));
    }
    Ok((pi, h))
}

/// The reverse direction specialized to the identity relabeling: when the
/// graph of `h` has no arc `j -> i`, the slab `{x : x_i = 0}` is a
/// `2^(n-2)`-nice set of `h`, because its preimage is closed under
/// flipping component `j`.
pub fn nice_from_missing_arc(h: &Network, i: usize, j: usize) -> Result<NiceSetReport> {
    let n = h.n();
    if i >= n || j >= n || i == j {
        return Err(Error::Precondition(format!(
            "components must be distinct and in range, got i = {i}, j = {j}"
        )));
    }
    if h.interaction_graph().has_arc(j, i) {
        return Err(Error::Precondition(format!(
            "the interaction graph has the arc {} -> {}",
            j + 1,
            i + 1
        )));
    }
    let slab = CubeSubset::from_members(n, configs(n).filter(|x| !x.bit(i)))?;
    match is_nice(h, &slab)? {
        Some(report) => Ok(report),
        None => Err(Error::Invariant(
            "slab parities must be even when the arc is missing".into(),
        )),
    }
}

/// True iff `X + e_i = X`.
pub fn is_closed_by(x: &CubeSubset, i: usize) -> bool {
    x.is_closed_by(i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Network {
        Network::from_text("n=2\n00 01\n01 11\n10 11\n11 01\n").unwrap()
    }

    fn f6() -> Network {
        Network::from_text("n=2\n00 00\n01 00\n10 10\n11 10\n").unwrap()
    }

    fn left_rotation(n: usize) -> Network {
        let table = configs(n)
            .map(|x| Config((x.0 >> 1) | ((x.0 & 1) << (n - 1))))
            .collect();
        Network::new(n, table).unwrap()
    }

    #[test]
    fn full_cube_is_always_nice() {
        for f in [left_rotation(4), Network::identity(4), f5()] {
            let full = CubeSubset::full(f.n());
            let report = is_nice(&f, &full).unwrap().unwrap();
            assert_eq!(report.k, 1 << (f.n() - 1));
            assert_eq!(report.preimage_size, f.size());
            assert_eq!(report.overlap_size, f.size());
        }
    }

    #[test]
    fn identity_makes_every_even_set_nice() {
        let f = Network::identity(3);
        let a = CubeSubset::from_members(3, [Config(1), Config(4), Config(6), Config(7)]).unwrap();
        let report = is_nice(&f, &a).unwrap().unwrap();
        assert_eq!(report.preimage_size, 4);
        assert_eq!(report.overlap_size, 4);
    }

    #[test]
    fn odd_overlap_is_not_nice() {
        // For this network and A = {00, 01}: the preimage of A is {00, 11}
        // (even), but only 00 of A maps back into A, so the overlap is odd.
        let f = f5();
        let a = CubeSubset::from_members(2, [Config(0), Config(2)]).unwrap();
        assert!(is_nice(&f, &a).unwrap().is_none());
        let preimage = configs(2).filter(|&x| a.contains(f.apply(x))).count();
        let overlap = a.iter().filter(|&x| a.contains(f.apply(x))).count();
        assert_eq!(preimage, 2);
        assert_eq!(overlap, 1);
    }

    #[test]
    fn is_nice_rejects_odd_sizes() {
        let f = Network::identity(3);
        let a = CubeSubset::from_members(3, [Config(1)]).unwrap();
        assert!(is_nice(&f, &a).is_err());
        assert!(is_nice(&f, &CubeSubset::empty(3)).is_err());
    }

    #[test]
    fn descent_base_case_returns_full_cube() {
        let f = left_rotation(5);
        let report = find_nice_set(&f, 16).unwrap();
        assert_eq!(report.members.len(), 32);
    }

    #[test]
    fn descent_reaches_k8_on_rotation() {
        let f = left_rotation(5);
        let report = find_nice_set(&f, 8).unwrap();
        assert_eq!(report.members.len(), 16);
        assert_eq!(report.preimage_size % 2, 0);
        assert_eq!(report.overlap_size % 2, 0);
        let a = report.to_subset(5).unwrap();
        assert!(is_nice(&f, &a).unwrap().is_some());
    }

    #[test]
    fn descent_rejects_out_of_range_k() {
        let f = left_rotation(5);
        assert!(find_nice_set(&f, 7).is_err());
        assert!(find_nice_set(&f, 17).is_err());
        assert!(find_nice_set(&left_rotation(3), 8).is_err());
    }

    #[test]
    fn missing_arc_from_descent_set() {
        let f = left_rotation(5);
        let report = find_nice_set(&f, 8).unwrap();
        let (_pi, h) = missing_arc_network(&f, &report, 0, 1).unwrap();
        assert!(!h.interaction_graph().has_arc(1, 0));
    }

    #[test]
    fn missing_arc_rejects_equal_components() {
        let f = left_rotation(5);
        let report = find_nice_set(&f, 8).unwrap();
        assert!(missing_arc_network(&f, &report, 1, 1).is_err());
    }

    #[test]
    fn missing_arc_on_identity_slab() {
        let f = Network::identity(4);
        let slab = CubeSubset::from_members(4, configs(4).filter(|x| !x.bit(0))).unwrap();
        let report = is_nice(&f, &slab).unwrap().unwrap();
        let (_pi, h) = missing_arc_network(&f, &report, 0, 1).unwrap();
        assert!(!h.interaction_graph().has_arc(1, 0));
    }

    #[test]
    fn slab_report_from_missing_arc() {
        let report = nice_from_missing_arc(&Network::identity(4), 0, 1).unwrap();
        assert_eq!(report.members.len(), 8);
        assert!(report.members.iter().all(|x| !x.bit(0)));

        // G(f6) is a single loop on vertex 1, so the arc 1 -> 2 is absent.
        let report = nice_from_missing_arc(&f6(), 1, 0).unwrap();
        assert_eq!(report.members, vec![Config(0), Config(1)]);
        assert_eq!(report.preimage_size, 4);
        assert_eq!(report.overlap_size, 2);
    }

    #[test]
    fn present_arc_is_rejected() {
        let f1 = Network::from_text("n=2\n00 10\n01 00\n10 11\n11 01\n").unwrap();
        assert!(nice_from_missing_arc(&f1, 0, 1).is_err());
    }

    #[test]
    fn closure_checks() {
        assert!(is_closed_by(&CubeSubset::full(3), 0));
        let slab = CubeSubset::from_members(3, configs(3).filter(|x| !x.bit(0))).unwrap();
        assert!(is_closed_by(&slab, 1));
        assert!(!is_closed_by(&slab, 0));
    }

    #[test]
    fn closed_sets_have_even_size_exhaustively() {
        // Every subset of {0,1}^4 closed by some direction has even size,
        // and closedness is preserved by intersection.
        for mask in 0u32..(1 << 16) {
            let s = CubeSubset::from_members(
                4,
                (0..16).filter(|&b| mask >> b & 1 == 1).map(Config),
            )
            .unwrap();
            for i in 0..4 {
                if s.is_closed_by(i) {
                    assert_eq!(s.len() % 2, 0, "mask {mask:#x} direction {i}");
                }
            }
        }
        let sa = CubeSubset::from_members(4, (0..16).filter(|v| v % 2 == 0).map(Config)).unwrap();
        let sb = CubeSubset::from_members(4, (0..8).map(Config)).unwrap();
        // Both closed by direction 1; the intersection must be too.
        assert!(sa.is_closed_by(1) && sb.is_closed_by(1));
        assert!(sa.intersection(&sb).is_closed_by(1));
    }

    #[test]
    fn report_json_shape() {
        let report = nice_from_missing_arc(&f6(), 1, 0).unwrap();
        assert_eq!(
            report.to_json_string(),
            r#"{"A":[0,1],"k":1,"preimage":4,"overlap":2}"#
        );
    }
}
