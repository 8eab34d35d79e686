use std::ops::BitXor;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported component count. A truth table for `n = 24` already
/// takes 16M words; everything in this crate assumes `n <= MAX_COMPONENTS`.
pub const MAX_COMPONENTS: usize = 24;

/// A point of `{0,1}^n` packed into a word: bit `i` holds component `i + 1`.
///
/// Components are 0-based throughout the crate; the 1-based labels of the
/// text, DOT and JSON formats are translated at the I/O boundary. Under
/// this packing the bit string `x_1 x_2 ... x_n` reads LSB to MSB, and
/// integer order on `[0, 2^n)` coincides with lexicographic order on the
/// strings.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Config(pub u32);

impl Config {
    pub const ZERO: Config = Config(0);

    /// `e_i`: the configuration whose only 1 is component `i` (0-based).
    #[inline]
    pub fn unit(i: usize) -> Config {
        debug_assert!(i < MAX_COMPONENTS);
        Config(1 << i)
    }

    /// The all-ones configuration of `n` components.
    #[inline]
    pub fn all_ones(n: usize) -> Config {
        debug_assert!(n >= 1 && n <= MAX_COMPONENTS);
        Config(((1u64 << n) - 1) as u32)
    }

    #[inline]
    pub fn bit(self, i: usize) -> bool {
        (self.0 >> i) & 1 == 1
    }

    /// `x + e_i`: flip component `i`.
    #[inline]
    pub fn flip(self, i: usize) -> Config {
        Config(self.0 ^ (1 << i))
    }

    /// Hamming weight `w(x)`.
    #[inline]
    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Components set to 1, ascending (the paper-style support of `x`).
    pub fn ones(self, n: usize) -> Vec<usize> {
        (0..n).filter(|&i| self.bit(i)).collect()
    }

    /// Renders `x_1 x_2 ... x_n` as a binary string.
    pub fn to_bit_string(self, n: usize) -> String {
        (0..n).map(|i| if self.bit(i) { '1' } else { '0' }).collect()
    }

    /// Parses a binary string `x_1 x_2 ... x_n` of exactly `n` characters.
    pub fn from_bit_string(s: &str, n: usize) -> Result<Config> {
        if s.len() != n {
            return Err(Error::Parse(format!(
                "expected {n} binary digits, got {:?}",
                s
            )));
        }
        let mut v = 0u32;
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => v |= 1 << i,
                '0' => {}
                other => {
                    return Err(Error::Parse(format!(
                        "non-binary character {other:?} in {s:?}"
                    )))
                }
            }
        }
        Ok(Config(v))
    }
}

impl BitXor for Config {
    type Output = Config;
    #[inline]
    fn bitxor(self, rhs: Config) -> Config {
        Config(self.0 ^ rhs.0)
    }
}

impl std::fmt::Debug for Config {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// All configurations of `{0,1}^n` in increasing integer order.
pub fn configs(n: usize) -> impl Iterator<Item = Config> {
    debug_assert!(n <= MAX_COMPONENTS);
    (0..(1u32 << n)).map(Config)
}

/// Reverses the low `n` bits of `v`. Maps integer order onto the order of
/// bit strings read most-significant-component first, which is how the
/// truth-table text format lists its rows.
pub(crate) fn bitrev(v: u32, n: usize) -> u32 {
    v.reverse_bits() >> (32 - n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_string_round_trip() {
        let x = Config::from_bit_string("0100", 4).unwrap();
        assert_eq!(x, Config(2));
        assert_eq!(x.to_bit_string(4), "0100");
        assert_eq!(x.weight(), 1);
        assert!(x.bit(1));
        assert!(!x.bit(0));
    }

    #[test]
    fn lexicographic_order_is_integer_order() {
        // L_5 for n = 4 reads 0000, 1000, 0100, 1100, 0010.
        let strings = ["0000", "1000", "0100", "1100", "0010"];
        let values: Vec<u32> = strings
            .iter()
            .map(|s| Config::from_bit_string(s, 4).unwrap().0)
            .collect();
        assert_eq!(values, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn unit_and_flip() {
        let x = Config::ZERO.flip(3);
        assert_eq!(x, Config::unit(3));
        assert_eq!(x ^ Config::unit(3), Config::ZERO);
        assert_eq!(Config::all_ones(3), Config(7));
    }

    #[test]
    fn bad_bit_strings() {
        assert!(Config::from_bit_string("01", 3).is_err());
        assert!(Config::from_bit_string("0a1", 3).is_err());
    }
}
