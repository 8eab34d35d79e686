use crate::config::{Config, MAX_COMPONENTS};
use crate::error::{Error, Result};

/// Bit masks for swapping adjacent blocks of size `2^i` inside a word,
/// `i < 6`. `LOW[i]` selects the positions whose bit `i` is 0.
const LOW: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// A subset of `{0,1}^n`, stored as a membership bitset over all `2^n`
/// configurations. Supports the word-parallel hypercube operations used by
/// the isoperimetric checks: `X + e_i` is a block permutation of the words.
#[derive(Clone, PartialEq, Eq)]
pub struct CubeSubset {
    n: usize,
    words: Vec<u64>,
    len: usize,
}

impl CubeSubset {
    pub fn empty(n: usize) -> CubeSubset {
        assert!(n >= 1 && n <= MAX_COMPONENTS, "unsupported dimension {n}");
        let bits = 1usize << n;
        CubeSubset {
            n,
            words: vec![0; bits.div_ceil(64)],
            len: 0,
        }
    }

    pub fn full(n: usize) -> CubeSubset {
        let mut s = CubeSubset::empty(n);
        for w in &mut s.words {
            *w = u64::MAX;
        }
        if n < 6 {
            s.words[0] = (1u64 << (1 << n)) - 1;
        }
        s.len = 1 << n;
        s
    }

    pub fn from_members<I: IntoIterator<Item = Config>>(n: usize, members: I) -> Result<CubeSubset> {
        let mut s = CubeSubset::empty(n);
        for x in members {
            if x.index() >= (1 << n) {
                return Err(Error::Precondition(format!(
                    "configuration {} out of range for n = {n}",
                    x.0
                )));
            }
            s.insert(x);
        }
        Ok(s)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, x: Config) -> bool {
        let i = x.index();
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    /// Returns true if `x` was not already present.
    pub fn insert(&mut self, x: Config) -> bool {
        let i = x.index();
        let w = &mut self.words[i >> 6];
        let mask = 1u64 << (i & 63);
        let fresh = *w & mask == 0;
        *w |= mask;
        if fresh {
            self.len += 1;
        }
        fresh
    }

    /// Returns true if `x` was present.
    pub fn remove(&mut self, x: Config) -> bool {
        let i = x.index();
        let w = &mut self.words[i >> 6];
        let mask = 1u64 << (i & 63);
        let had = *w & mask != 0;
        *w &= !mask;
        if had {
            self.len -= 1;
        }
        had
    }

    /// Members in increasing integer order.
    pub fn iter(&self) -> impl Iterator<Item = Config> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let base = (wi as u32) << 6;
            BitIter { word: w, base }
        })
    }

    pub fn members(&self) -> Vec<Config> {
        self.iter().collect()
    }

    /// `X + e_i`: every member with component `i` flipped.
    pub fn shift(&self, i: usize) -> CubeSubset {
        assert!(i < self.n);
        let mut out = self.clone();
        if i < 6 {
            let s = 1u32 << i;
            for w in &mut out.words {
                *w = ((*w & LOW[i]) << s) | ((*w >> s) & LOW[i]);
            }
        } else {
            let block = 1usize << (i - 6);
            for wi in 0..self.words.len() {
                out.words[wi] = self.words[wi ^ block];
            }
        }
        out
    }

    /// `X + z`: componentwise translation by an arbitrary configuration.
    pub fn translate(&self, z: Config) -> CubeSubset {
        let mut out = self.clone();
        for i in 0..self.n {
            if z.bit(i) {
                out = out.shift(i);
            }
        }
        out
    }

    pub fn intersection(&self, other: &CubeSubset) -> CubeSubset {
        assert_eq!(self.n, other.n);
        let mut out = CubeSubset::empty(self.n);
        let mut len = 0usize;
        for (o, (a, b)) in out
            .words
            .iter_mut()
            .zip(self.words.iter().zip(other.words.iter()))
        {
            *o = a & b;
            len += o.count_ones() as usize;
        }
        out.len = len;
        out
    }

    /// Edge boundary in the hypercube graph: the number of edges with
    /// exactly one end in the set.
    pub fn boundary(&self) -> u64 {
        let mut total = 0u64;
        for i in 0..self.n {
            let shifted = self.shift(i);
            for (a, b) in self.words.iter().zip(shifted.words.iter()) {
                total += (a & !b).count_ones() as u64;
            }
        }
        total
    }

    /// Sum of degrees of the subgraph of the hypercube induced by the set.
    pub fn induced_degree_sum(&self) -> u64 {
        self.len as u64 * self.n as u64 - self.boundary()
    }

    /// True iff `X + e_i = X`.
    pub fn is_closed_by(&self, i: usize) -> bool {
        self.shift(i) == *self
    }
}

impl std::fmt::Debug for CubeSubset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

struct BitIter {
    word: u64,
    base: u32,
}

impl Iterator for BitIter {
    type Item = Config;
    fn next(&mut self) -> Option<Config> {
        if self.word == 0 {
            return None;
        }
        let t = self.word.trailing_zeros();
        self.word &= self.word - 1;
        Some(Config(self.base + t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boundary_naive(s: &CubeSubset) -> u64 {
        let mut count = 0;
        for x in s.iter() {
            for i in 0..s.n() {
                if !s.contains(x.flip(i)) {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn shift_matches_member_flip() {
        for n in [3usize, 7, 8] {
            let members: Vec<Config> = (0..(1u32 << n)).step_by(3).map(Config).collect();
            let s = CubeSubset::from_members(n, members.clone()).unwrap();
            for i in 0..n {
                let shifted = s.shift(i);
                let expect =
                    CubeSubset::from_members(n, members.iter().map(|x| x.flip(i))).unwrap();
                assert_eq!(shifted, expect, "n={n} i={i}");
            }
        }
    }

    #[test]
    fn boundary_word_parallel_matches_naive() {
        for n in [2usize, 4, 7] {
            let s = CubeSubset::from_members(
                n,
                (0..(1u32 << n)).filter(|v| v % 5 != 1).map(Config),
            )
            .unwrap();
            assert_eq!(s.boundary(), boundary_naive(&s));
        }
        assert_eq!(CubeSubset::full(5).boundary(), 0);
        let single = CubeSubset::from_members(6, [Config(9)]).unwrap();
        assert_eq!(single.boundary(), 6);
    }

    #[test]
    fn closure_by_direction() {
        let n = 4;
        // A slab on component 0 is closed by every other direction.
        let slab = CubeSubset::from_members(n, (0..16u32).map(Config).filter(|x| !x.bit(0)))
            .unwrap();
        assert!(!slab.is_closed_by(0));
        assert!(slab.is_closed_by(1));
        assert!(slab.is_closed_by(2));
        assert!(CubeSubset::full(n).is_closed_by(3));
    }

    #[test]
    fn translate_is_involutive() {
        let s = CubeSubset::from_members(5, [Config(0), Config(3), Config(17)]).unwrap();
        let z = Config(0b10110);
        assert_eq!(s.translate(z).translate(z), s);
        assert!(s.translate(z).contains(Config(3) ^ z));
    }

    #[test]
    fn members_sorted_and_len_tracked() {
        let mut s = CubeSubset::empty(3);
        for v in [5u32, 1, 7, 1] {
            s.insert(Config(v));
        }
        assert_eq!(s.len(), 3);
        assert_eq!(s.members(), vec![Config(1), Config(5), Config(7)]);
        assert!(s.remove(Config(5)));
        assert!(!s.remove(Config(5)));
        assert_eq!(s.len(), 2);
    }
}
