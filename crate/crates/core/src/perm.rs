//! Permutations of `{0,1}^n`, conjugation `h = pi . f . pi^-1`, completion
//! of partial assignments, and brute-force isomorphism search for tiny `n`.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::{configs, Config, MAX_COMPONENTS};
use crate::dynamics::PreimageIndex;
use crate::error::{Error, Result};
use crate::network::Network;
use crate::subset::CubeSubset;

/// A bijection of `{0,1}^n`, stored as `map[x] = pi(x)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Perm {
    n: usize,
    map: Vec<Config>,
}

#[derive(Serialize, Deserialize)]
struct PermWire {
    n: usize,
    map: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm {
            n,
            map: configs(n).collect(),
        }
    }

    pub fn from_map(n: usize, map: Vec<Config>) -> Result<Perm> {
        if n < 1 || n > MAX_COMPONENTS {
            return Err(Error::Precondition(format!(
                "component count {n} outside supported range 1..={MAX_COMPONENTS}"
            )));
        }
        let size = 1usize << n;
        if map.len() != size {
            return Err(Error::Precondition(format!(
                "permutation has {} entries, expected {size}",
                map.len()
            )));
        }
        let mut seen = CubeSubset::empty(n);
        for &y in &map {
            if y.index() >= size {
                return Err(Error::Precondition(format!(
                    "permutation value {} out of range for n = {n}",
                    y.0
                )));
            }
            if !seen.insert(y) {
                return Err(Error::Precondition(format!(
                    "permutation repeats value {}",
                    y.0
                )));
            }
        }
        Ok(Perm { n, map })
    }

    /// A uniformly random permutation from the given generator.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Perm {
        let mut map: Vec<Config> = configs(n).collect();
        map.shuffle(rng);
        Perm { n, map }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn apply(&self, x: Config) -> Config {
        self.map[x.index()]
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![Config::ZERO; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y.index()] = Config(x as u32);
        }
        Perm {
            n: self.n,
            map: inv,
        }
    }

    /// `self . other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.n, other.n);
        Perm {
            n: self.n,
            map: other.map.iter().map(|&x| self.apply(x)).collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.wire()).expect("permutation serialization cannot fail")
    }

    pub(crate) fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.wire()).expect("permutation serialization cannot fail")
    }

    fn wire(&self) -> PermWire {
        PermWire {
            n: self.n,
            map: self.map.iter().map(|x| x.0).collect(),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Perm> {
        let wire: PermWire = serde_json::from_str(s)?;
        Perm::from_map(wire.n, wire.map.into_iter().map(Config).collect())
            .map_err(|e| Error::Parse(e.to_string()))
    }
}

impl std::fmt::Debug for Perm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Perm(n={}, map={:?})",
            self.n,
            self.map.iter().map(|x| x.0).collect::<Vec<_>>()
        )
    }
}

/// Conjugation by a raw map known to be a bijection; used by the
/// exhaustive scans where building a validated `Perm` per step would
/// dominate the cost.
pub(crate) fn conjugate_unchecked(f: &Network, map: &[Config]) -> Network {
    let mut table = vec![Config::ZERO; f.size()];
    for (x, &y) in f.table().iter().enumerate() {
        table[map[x].index()] = map[y.index()];
    }
    Network::new(f.n(), table).expect("conjugate table is well formed")
}

/// The conjugate `h = p . f . p^-1`, the network isomorphic to `f` through
/// the relabeling `p` of configurations.
pub fn conjugate(f: &Network, p: &Perm) -> Result<Network> {
    if f.n() != p.n() {
        return Err(Error::Precondition(format!(
            "size mismatch: network has n = {}, permutation n = {}",
            f.n(),
            p.n()
        )));
    }
    let mut table = vec![Config::ZERO; f.size()];
    for x in configs(f.n()) {
        table[p.apply(x).index()] = p.apply(f.apply(x));
    }
    let h = Network::new(f.n(), table).expect("conjugate table is well formed");
    debug_assert!(
        configs(f.n()).all(|x| h.apply(p.apply(x)) == p.apply(f.apply(x))),
        "conjugation identity h.p = p.f must hold pointwise"
    );
    Ok(h)
}

/// A consistent set of `source -> target` assignments, extendable to a full
/// permutation. The lemma constructions all start from one of these.
#[derive(Debug, Clone, Default)]
pub struct PartialPerm {
    n: usize,
    forward: BTreeMap<Config, Config>,
    used_targets: BTreeMap<Config, Config>,
}

impl PartialPerm {
    pub fn new(n: usize) -> PartialPerm {
        assert!(n >= 1 && n <= MAX_COMPONENTS);
        PartialPerm {
            n,
            forward: BTreeMap::new(),
            used_targets: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// Adds `source -> target`. Re-adding an identical pair is a no-op;
    /// clashing sources or targets are errors.
    pub fn insert(&mut self, source: Config, target: Config) -> Result<()> {
        let size = 1usize << self.n;
        if source.index() >= size || target.index() >= size {
            return Err(Error::Precondition(format!(
                "assignment {} -> {} out of range for n = {}",
                source.0, target.0, self.n
            )));
        }
        if let Some(&t) = self.forward.get(&source) {
            if t == target {
                return Ok(());
            }
            return Err(Error::Precondition(format!(
                "source {} already assigned to {}",
                source.0, t.0
            )));
        }
        if let Some(&s) = self.used_targets.get(&target) {
            return Err(Error::Precondition(format!(
                "target {} already taken by source {}",
                target.0, s.0
            )));
        }
        self.forward.insert(source, target);
        self.used_targets.insert(target, source);
        Ok(())
    }

    /// Extends the assignment to a full permutation: unassigned sources are
    /// matched to unassigned targets in increasing integer order, so every
    /// completion is reproducible.
    pub fn complete(&self) -> Perm {
        let size = 1usize << self.n;
        let mut map = vec![None; size];
        for (&s, &t) in &self.forward {
            map[s.index()] = Some(t);
        }
        let mut free_targets = configs(self.n).filter(|t| !self.used_targets.contains_key(t));
        let map = map
            .into_iter()
            .map(|slot| {
                slot.unwrap_or_else(|| free_targets.next().expect("as many free targets as free sources"))
            })
            .collect();
        Perm { n: self.n, map }
    }
}

/// Searches for `pi` with `h . pi = pi . f` by backtracking over the
/// assignments `pi(0), pi(1), ...` in increasing order, after a quick
/// rejection on the cycle structure of the iteration digraphs. Exhaustive,
/// so refused for `n > 3` unless `override_large` is set.
pub fn find_isomorphism(f: &Network, h: &Network, override_large: bool) -> Result<Option<Perm>> {
    if f.n() != h.n() {
        return Err(Error::Precondition(format!(
            "size mismatch: n = {} vs n = {}",
            f.n(),
            h.n()
        )));
    }
    if f.n() > 3 && !override_large {
        return Err(Error::Precondition(format!(
            "exhaustive isomorphism search over (2^{})! permutations refused; \
             pass the override to force it",
            f.n()
        )));
    }
    if f.cycle_decomposition().cycle_length_multiset()
        != h.cycle_decomposition().cycle_length_multiset()
    {
        return Ok(None);
    }

    let size = f.size();
    let pre_f = PreimageIndex::build(f);
    let mut assignment: Vec<Option<Config>> = vec![None; size];
    let mut used = vec![false; size];

    fn consistent(
        f: &Network,
        h: &Network,
        pre_f: &PreimageIndex,
        assignment: &[Option<Config>],
        x: Config,
        y: Config,
    ) -> bool {
        // pi(f(x)) known forces h(y); x in the preimage of a known source
        // forces h(pi(that source)).
        if let Some(t) = assignment[f.apply(x).index()] {
            if h.apply(y) != t {
                return false;
            }
        }
        for &z in pre_f.of(x) {
            if let Some(pz) = assignment[z as usize] {
                if h.apply(pz) != y {
                    return false;
                }
            }
        }
        true
    }

    fn search(
        f: &Network,
        h: &Network,
        pre_f: &PreimageIndex,
        assignment: &mut Vec<Option<Config>>,
        used: &mut Vec<bool>,
        x: usize,
    ) -> bool {
        if x == assignment.len() {
            return true;
        }
        let cx = Config(x as u32);
        for y in 0..assignment.len() {
            if used[y] {
                continue;
            }
            let cy = Config(y as u32);
            if !consistent(f, h, pre_f, assignment, cx, cy) {
                continue;
            }
            assignment[x] = Some(cy);
            used[y] = true;
            if search(f, h, pre_f, assignment, used, x + 1) {
                return true;
            }
            assignment[x] = None;
            used[y] = false;
        }
        false
    }

    if search(f, h, &pre_f, &mut assignment, &mut used, 0) {
        let map = assignment
            .into_iter()
            .map(|slot| slot.expect("complete assignment"))
            .collect();
        let pi = Perm::from_map(f.n(), map).expect("backtracking yields a bijection");
        debug_assert_eq!(&conjugate(f, &pi).unwrap(), h);
        Ok(Some(pi))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn f1() -> Network {
        Network::from_text("n=2\n00 10\n01 00\n10 11\n11 01\n").unwrap()
    }

    fn f2() -> Network {
        Network::from_text("n=2\n00 10\n01 11\n10 00\n11 01\n").unwrap()
    }

    #[test]
    fn conjugating_by_identity_is_identity() {
        let f = f1();
        assert_eq!(conjugate(&f, &Perm::identity(2)).unwrap(), f);
    }

    #[test]
    fn conjugate_rejects_size_mismatch() {
        assert!(conjugate(&f1(), &Perm::identity(3)).is_err());
    }

    #[test]
    fn partial_completion_is_greedy() {
        let empty = PartialPerm::new(2);
        assert_eq!(empty.complete(), Perm::identity(2));

        let mut pp = PartialPerm::new(2);
        pp.insert(Config(0), Config(1)).unwrap();
        pp.insert(Config(1), Config(0)).unwrap();
        let pi = pp.complete();
        assert_eq!(
            pi,
            Perm::from_map(2, vec![Config(1), Config(0), Config(2), Config(3)]).unwrap()
        );
    }

    #[test]
    fn partial_perm_rejects_inconsistencies() {
        let mut pp = PartialPerm::new(1);
        assert!(pp.insert(Config(0), Config(3)).is_err());
        let mut pp = PartialPerm::new(2);
        pp.insert(Config(0), Config(1)).unwrap();
        assert!(pp.insert(Config(0), Config(2)).is_err());
        assert!(pp.insert(Config(3), Config(1)).is_err());
        // Exact duplicates are allowed.
        pp.insert(Config(0), Config(1)).unwrap();
        assert_eq!(pp.len(), 1);
    }

    #[test]
    fn perm_json_round_trip() {
        let pi = Perm::from_map(2, vec![Config(2), Config(0), Config(3), Config(1)]).unwrap();
        let s = pi.to_json_string();
        assert_eq!(s, r#"{"n":2,"map":[2,0,3,1]}"#);
        assert_eq!(Perm::from_json_str(&s).unwrap(), pi);
        assert!(Perm::from_json_str(r#"{"n":2,"map":[0,0,3,1]}"#).is_err());
    }

    #[test]
    fn isomorphism_of_identity_is_identity() {
        let id = Network::identity(2);
        let pi = find_isomorphism(&id, &id, false).unwrap().unwrap();
        assert_eq!(pi, Perm::identity(2));
    }

    #[test]
    fn f1_and_h3_are_isomorphic() {
        let h3 = Network::from_text("n=2\n00 10\n01 11\n10 01\n11 00\n").unwrap();
        let pi = find_isomorphism(&f1(), &h3, false).unwrap().unwrap();
        assert_eq!(conjugate(&f1(), &pi).unwrap(), h3);
    }

    #[test]
    fn f1_and_f2_are_not_isomorphic() {
        // One 4-cycle against two 2-cycles.
        assert!(find_isomorphism(&f1(), &f2(), false).unwrap().is_none());
    }

    #[test]
    fn isomorphism_search_refuses_large_n() {
        let id = Network::identity(4);
        assert!(find_isomorphism(&id, &id, false).is_err());
        assert!(find_isomorphism(&id, &id, true).unwrap().is_some());
    }

    #[test]
    fn inverse_and_compose() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let p = Perm::random(3, &mut rng);
        assert_eq!(p.compose(&p.inverse()), Perm::identity(3));
        assert_eq!(p.inverse().compose(&p), Perm::identity(3));
    }
}
