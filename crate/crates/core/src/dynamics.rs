//! Dynamics of the iteration digraph: the functional graph on `{0,1}^n`
//! with an arc from `x` to `f(x)`, its fixed points and limit cycles, and
//! the bipartite independent-set construction on the acyclic remainder.

use crate::config::Config;
use crate::error::{Error, Result};
use crate::network::Network;
use crate::subset::CubeSubset;

/// The periodic part of the iteration digraph.
///
/// `fixed_points` are exactly the length-1 cycles; `cycles` holds every
/// cycle of length >= 2 in orbit order, each rotated to start at its
/// smallest configuration and sorted by that representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    pub fixed_points: Vec<Config>,
    pub cycles: Vec<Vec<Config>>,
}

impl CycleDecomposition {
    /// Cycles of length at least `min_len`.
    pub fn cycles_of_length_at_least(&self, min_len: usize) -> impl Iterator<Item = &Vec<Config>> {
        self.cycles.iter().filter(move |c| c.len() >= min_len)
    }

    /// Multiset of cycle lengths, fixed points included as length 1.
    pub fn cycle_length_multiset(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = std::iter::repeat(1)
            .take(self.fixed_points.len())
            .chain(self.cycles.iter().map(|c| c.len()))
            .collect();
        lens.sort_unstable();
        lens
    }
}

/// Preimage lists of a network in CSR layout.
pub(crate) struct PreimageIndex {
    offsets: Vec<u32>,
    items: Vec<u32>,
}

impl PreimageIndex {
    pub fn build(f: &Network) -> PreimageIndex {
        let size = f.size();
        let mut counts = vec![0u32; size + 1];
        for &y in f.table() {
            counts[y.index() + 1] += 1;
        }
        for i in 0..size {
            counts[i + 1] += counts[i];
        }
        let offsets = counts.clone();
        let mut cursor = counts;
        let mut items = vec![0u32; size];
        for (x, &y) in f.table().iter().enumerate() {
            items[cursor[y.index()] as usize] = x as u32;
            cursor[y.index()] += 1;
        }
        PreimageIndex { offsets, items }
    }

    #[inline]
    pub fn of(&self, x: Config) -> &[u32] {
        let i = x.index();
        &self.items[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    #[inline]
    pub fn indegree(&self, x: Config) -> usize {
        let i = x.index();
        (self.offsets[i + 1] - self.offsets[i]) as usize
    }
}

impl Network {
    /// Finds all fixed points and all cycles of the iteration digraph.
    /// Every periodic configuration appears exactly once across the
    /// decomposition.
    pub fn cycle_decomposition(&self) -> CycleDecomposition {
        let size = self.size();
        // 0 = unvisited, 1 = on the current path, 2 = settled.
        let mut state = vec![0u8; size];
        let mut pos_on_path = vec![0u32; size];
        let mut fixed_points = Vec::new();
        let mut cycles = Vec::new();
        let mut path = Vec::new();

        for start in 0..size {
            if state[start] != 0 {
                continue;
            }
            path.clear();
            let mut x = Config(start as u32);
            while state[x.index()] == 0 {
                state[x.index()] = 1;
                pos_on_path[x.index()] = path.len() as u32;
                path.push(x);
                x = self.apply(x);
            }
            if state[x.index()] == 1 {
                // Closed a new cycle; it is the path suffix starting at x.
                let cycle = &path[pos_on_path[x.index()] as usize..];
                if cycle.len() == 1 {
                    fixed_points.push(cycle[0]);
                } else {
                    let rot = cycle
                        .iter()
                        .enumerate()
                        .min_by_key(|(_, c)| **c)
                        .map(|(i, _)| i)
                        .expect("cycle is non-empty");
                    let mut canonical = Vec::with_capacity(cycle.len());
                    canonical.extend_from_slice(&cycle[rot..]);
                    canonical.extend_from_slice(&cycle[..rot]);
                    cycles.push(canonical);
                }
            }
            for p in &path {
                state[p.index()] = 2;
            }
        }

        fixed_points.sort_unstable();
        cycles.sort_unstable_by_key(|c| c[0]);
        CycleDecomposition {
            fixed_points,
            cycles,
        }
    }

    /// Builds an independent set `A` (meaning `f(A)` and `A` are disjoint)
    /// of size at least `(2^n - |F| - |L|) / 2`, where `F` is the fixed
    /// point set and `L` holds one representative per cycle of length >= 3.
    ///
    /// Deleting `F` and `L` from the iteration digraph leaves only cycles
    /// of length two, so each weakly connected component of the remainder
    /// is bipartite; the larger color class of each component is kept,
    /// with ties broken toward the class of the component's smallest
    /// configuration.
    pub fn large_independent_set(&self) -> Result<CubeSubset> {
        let n = self.n();
        let size = self.size();
        let decomp = self.cycle_decomposition();

        let mut deleted = CubeSubset::empty(n);
        for &x in &decomp.fixed_points {
            deleted.insert(x);
        }
        let mut long_cycles = 0usize;
        for cycle in decomp.cycles_of_length_at_least(3) {
            // Cycles are rotated to start at their minimum.
            deleted.insert(cycle[0]);
            long_cycles += 1;
        }

        let pre = PreimageIndex::build(self);
        let mut color = vec![u8::MAX; size];
        let mut queue = Vec::new();
        let mut component = Vec::new();
        let mut chosen = CubeSubset::empty(n);

        for start in 0..size {
            let start_cfg = Config(start as u32);
            if deleted.contains(start_cfg) || color[start] != u8::MAX {
                continue;
            }
            component.clear();
            queue.clear();
            color[start] = 0;
            queue.push(start_cfg);
            while let Some(x) = queue.pop() {
                component.push(x);
                let cx = color[x.index()];
                let fx = self.apply(x);
                let visit = |y: Config,
                             color: &mut Vec<u8>,
                             queue: &mut Vec<Config>|
                 -> Result<()> {
                    if deleted.contains(y) {
                        return Ok(());
                    }
                    if color[y.index()] == u8::MAX {
                        color[y.index()] = 1 - cx;
                        queue.push(y);
                    } else if color[y.index()] == cx {
                        return Err(Error::Invariant(format!(
                            "odd undirected cycle through {} after deleting \
                             fixed points and long-cycle representatives",
                            y.0
                        )));
                    }
                    Ok(())
                };
                if fx != x {
                    visit(fx, &mut color, &mut queue)?;
                }
                for &p in pre.of(x) {
                    let p = Config(p);
                    if p != x {
                        visit(p, &mut color, &mut queue)?;
                    }
                }
            }
            let zeros = component.iter().filter(|x| color[x.index()] == 0).count();
            let ones = component.len() - zeros;
            // The BFS root is the smallest configuration of its component,
            // so a tie keeps color 0.
            let keep = if ones > zeros { 1 } else { 0 };
            for &x in &component {
                if color[x.index()] == keep {
                    chosen.insert(x);
                }
            }
        }

        let guaranteed = (size - decomp.fixed_points.len() - long_cycles).div_ceil(2);
        if chosen.len() < guaranteed {
            return Err(Error::Invariant(format!(
                "independent set of size {} below guaranteed {guaranteed}",
                chosen.len()
            )));
        }
        debug_assert!(chosen.iter().all(|x| !chosen.contains(self.apply(x))));
        Ok(chosen)
    }
}

/// True iff `f(A)` and `A` are disjoint.
pub fn is_independent_set(f: &Network, a: &CubeSubset) -> bool {
    a.iter().all(|x| !a.contains(f.apply(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::configs;

    fn left_rotation(n: usize) -> Network {
        // Component i of the output copies component i+1 of the input,
        // cyclically, which is a rotate-right of the packed bits.
        let table = configs(n)
            .map(|x| Config((x.0 >> 1) | ((x.0 & 1) << (n - 1))))
            .collect();
        Network::new(n, table).unwrap()
    }

    #[test]
    fn identity_has_only_fixed_points() {
        let d = Network::identity(2).cycle_decomposition();
        assert_eq!(d.fixed_points, configs(2).collect::<Vec<_>>());
        assert!(d.cycles.is_empty());
    }

    #[test]
    fn f2_has_two_transpositions() {
        let f = Network::from_text("n=2\n00 10\n01 11\n10 00\n11 01\n").unwrap();
        let d = f.cycle_decomposition();
        assert!(d.fixed_points.is_empty());
        assert_eq!(
            d.cycles,
            vec![vec![Config(0), Config(1)], vec![Config(2), Config(3)]]
        );
    }

    #[test]
    fn rotation_orbits_match_brute_force() {
        let f = left_rotation(5);
        let d = f.cycle_decomposition();
        assert_eq!(d.fixed_points, vec![Config(0), Config(31)]);
        assert_eq!(d.cycles.len(), 6);
        assert!(d.cycles.iter().all(|c| c.len() == 5));

        // Independent oracle: follow each configuration around its orbit.
        let mut seen = vec![false; 32];
        let mut orbit_sizes = Vec::new();
        for x in configs(5) {
            if seen[x.index()] {
                continue;
            }
            let mut orbit = vec![x];
            seen[x.index()] = true;
            let mut y = f.apply(x);
            while y != x {
                seen[y.index()] = true;
                orbit.push(y);
                y = f.apply(y);
            }
            orbit_sizes.push(orbit.len());
        }
        orbit_sizes.sort_unstable();
        assert_eq!(orbit_sizes, vec![1, 1, 5, 5, 5, 5, 5, 5]);
    }

    #[test]
    fn cycles_map_back_to_their_start() {
        let f = left_rotation(5);
        for cycle in &f.cycle_decomposition().cycles {
            for w in cycle.windows(2) {
                assert_eq!(f.apply(w[0]), w[1]);
            }
            assert_eq!(f.apply(*cycle.last().unwrap()), cycle[0]);
        }
    }

    #[test]
    fn independent_set_of_constant_is_everything_else() {
        let f = Network::constant(3, Config::ZERO);
        let a = f.large_independent_set().unwrap();
        assert_eq!(a.len(), 7);
        assert!(!a.contains(Config::ZERO));
        assert!(is_independent_set(&f, &a));
    }

    #[test]
    fn independent_set_of_identity_is_empty() {
        let a = Network::identity(3).large_independent_set().unwrap();
        assert!(a.is_empty());
    }

    #[test]
    fn independent_set_of_f2_is_maximum() {
        let f = Network::from_text("n=2\n00 10\n01 11\n10 00\n11 01\n").unwrap();
        let a = f.large_independent_set().unwrap();
        assert_eq!(a.len(), 2);
        assert!(is_independent_set(&f, &a));

        // Brute force over all 16 subsets: no independent set is larger.
        let best = (0u32..16)
            .filter(|&mask| {
                let members: Vec<Config> =
                    (0..4).filter(|&b| mask >> b & 1 == 1).map(Config).collect();
                let s = CubeSubset::from_members(2, members).unwrap();
                is_independent_set(&f, &s)
            })
            .map(|mask| mask.count_ones())
            .max()
            .unwrap();
        assert_eq!(best, 2);
    }

    #[test]
    fn preimage_index_agrees_with_scan() {
        let f = Network::from_text("n=2\n00 10\n01 00\n10 11\n11 01\n").unwrap();
        let pre = PreimageIndex::build(&f);
        for y in configs(2) {
            let mut expect: Vec<u32> = configs(2)
                .filter(|&x| f.apply(x) == y)
                .map(|x| x.0)
                .collect();
            expect.sort_unstable();
            let mut got = pre.of(y).to_vec();
            got.sort_unstable();
            assert_eq!(got, expect);
            assert_eq!(pre.indegree(y), expect.len());
        }
    }
}
