use serde::{Deserialize, Serialize};

use crate::config::{bitrev, configs, Config, MAX_COMPONENTS};
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::subset::CubeSubset;

/// A Boolean network with `n` components: a function `{0,1}^n -> {0,1}^n`
/// stored as a full truth table, `table[x] = f(x)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Network {
    n: usize,
    table: Vec<Config>,
}

#[derive(Serialize, Deserialize)]
struct NetworkWire {
    n: usize,
    table: Vec<u32>,
}

impl Network {
    pub fn new(n: usize, table: Vec<Config>) -> Result<Network> {
        if n < 1 || n > MAX_COMPONENTS {
            return Err(Error::Precondition(format!(
                "component count {n} outside supported range 1..={MAX_COMPONENTS}"
            )));
        }
        let size = 1usize << n;
        if table.len() != size {
            return Err(Error::Precondition(format!(
                "truth table has {} entries, expected {size}",
                table.len()
            )));
        }
        if let Some(bad) = table.iter().find(|x| x.index() >= size) {
            return Err(Error::Precondition(format!(
                "table value {} out of range for n = {n}",
                bad.0
            )));
        }
        Ok(Network { n, table })
    }

    pub fn identity(n: usize) -> Network {
        Network::new(n, configs(n).collect()).expect("identity table is well formed")
    }

    pub fn constant(n: usize, c: Config) -> Network {
        Network::new(n, vec![c; 1 << n]).expect("constant table is well formed")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of configurations, `2^n`.
    #[inline]
    pub fn size(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn apply(&self, x: Config) -> Config {
        self.table[x.index()]
    }

    pub fn table(&self) -> &[Config] {
        &self.table
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, x)| x.index() == i)
    }

    pub fn is_constant(&self) -> bool {
        self.table.iter().all(|&x| x == self.table[0])
    }

    /// Component function `f_i(x)`.
    #[inline]
    pub fn component(&self, i: usize, x: Config) -> bool {
        self.apply(x).bit(i)
    }

    pub fn image_size(&self) -> usize {
        let mut seen = CubeSubset::empty(self.n);
        for &y in &self.table {
            seen.insert(y);
        }
        seen.len()
    }

    /// The interaction graph `G(f)`: arc `j -> i` iff component `i` of the
    /// output depends on component `j` of the input, that is, iff some `x`
    /// has `f_i(x) != f_i(x + e_j)`.
    ///
    /// One pass per input component: XORing `f(x)` with `f(x + e_j)` over
    /// all pairs yields, in the accumulated OR, exactly the output
    /// components affected by `j`. Costs `O(n 2^n)` word operations.
    pub fn interaction_graph(&self) -> Digraph {
        let mut g = Digraph::new(self.n);
        for j in 0..self.n {
            let ej = 1usize << j;
            let mut row = 0u32;
            let mut x = 0usize;
            while x < self.size() {
                if x & ej == 0 {
                    row |= self.table[x].0 ^ self.table[x | ej].0;
                }
                x += 1;
            }
            g.or_into_row(j, row);
        }
        g
    }

    /// Parses the truth-table text format: a header `n=<k>` followed by
    /// exactly `2^n` lines `<x> <f(x)>`, both sides binary strings of
    /// length `n` written `x_1 x_2 ... x_n`. Row order is free; missing or
    /// duplicated `x` is an error.
    pub fn from_text(input: &str) -> Result<Network> {
        let mut lines = input.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))?;
        let n: usize = header
            .strip_prefix("n=")
            .ok_or_else(|| Error::Parse(format!("expected header n=<k>, got {header:?}")))?
            .parse()
            .map_err(|_| Error::Parse(format!("bad component count in {header:?}")))?;
        if n < 1 || n > MAX_COMPONENTS {
            return Err(Error::Parse(format!(
                "component count {n} outside supported range 1..={MAX_COMPONENTS}"
            )));
        }
        let size = 1usize << n;
        let mut table = vec![None; size];
        let mut rows = 0usize;
        for line in lines {
            rows += 1;
            let mut fields = line.split_whitespace();
            let (x, y) = match (fields.next(), fields.next(), fields.next()) {
                (Some(x), Some(y), None) => (x, y),
                _ => {
                    return Err(Error::Parse(format!(
                        "expected two fields per row, got {line:?}"
                    )))
                }
            };
            let x = Config::from_bit_string(x, n)?;
            let y = Config::from_bit_string(y, n)?;
            if table[x.index()].replace(y).is_some() {
                return Err(Error::Parse(format!(
                    "duplicate row for {}",
                    x.to_bit_string(n)
                )));
            }
        }
        if rows != size {
            return Err(Error::Parse(format!("expected {size} rows, got {rows}")));
        }
        let table = table
            .into_iter()
            .map(|y| y.expect("all rows present when counts match"))
            .collect();
        Network::new(n, table)
    }

    /// Renders the text format with rows in lexicographic order of the
    /// configuration strings, the order used by hand-written tables.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for r in 0..self.size() as u32 {
            let x = Config(bitrev(r, self.n));
            out.push_str(&format!(
                "{} {}\n",
                x.to_bit_string(self.n),
                self.apply(x).to_bit_string(self.n)
            ));
        }
        out
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.wire()).expect("network serialization cannot fail")
    }

    pub(crate) fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.wire()).expect("network serialization cannot fail")
    }

    fn wire(&self) -> NetworkWire {
        NetworkWire {
            n: self.n,
            table: self.table.iter().map(|x| x.0).collect(),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Network> {
        let wire: NetworkWire = serde_json::from_str(s)?;
        Network::new(wire.n, wire.table.into_iter().map(Config).collect())
            .map_err(|e| Error::Parse(e.to_string()))
    }
}

impl std::fmt::Debug for Network {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Network(n={}, table={:?})",
            self.n,
            self.table.iter().map(|x| x.0).collect::<Vec<_>>()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const F1: &str = "n=2\n00 10\n01 00\n10 11\n11 01\n";

    #[test]
    fn parse_text_table() {
        let f = Network::from_text(F1).unwrap();
        assert_eq!(f.table(), &[Config(1), Config(3), Config(0), Config(2)]);
        assert_eq!(f.to_text(), F1);
    }

    #[test]
    fn parse_rejects_malformed_tables() {
        assert!(Network::from_text("").is_err());
        assert!(Network::from_text("m=2\n").is_err());
        assert!(Network::from_text("n=2\n00 10\n01 00\n10 11\n").is_err());
        assert!(Network::from_text("n=2\n00 10\n00 00\n10 11\n11 01\n").is_err());
        assert!(Network::from_text("n=2\n00 10\n01 0a\n10 11\n11 01\n").is_err());
        assert!(Network::from_text("n=2\n00 10 11\n01 00\n10 11\n11 01\n").is_err());
        assert!(Network::from_text("n=0\n").is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = Network::from_text(F1).unwrap();
        let s = f.to_json_string();
        assert_eq!(s, r#"{"n":2,"table":[1,3,0,2]}"#);
        assert_eq!(Network::from_json_str(&s).unwrap(), f);
        assert!(Network::from_json_str(r#"{"n":2,"table":[1,3,0]}"#).is_err());
        assert!(Network::from_json_str(r#"{"n":2,"table":[1,3,0,4]}"#).is_err());
    }

    #[test]
    fn identity_graph_is_loops_only() {
        let g = Network::identity(3).interaction_graph();
        assert_eq!(g.arc_count(), 3);
        assert_eq!(g.loop_count(), 3);
    }

    #[test]
    fn constant_graph_has_no_arcs() {
        let g = Network::constant(3, Config::ZERO).interaction_graph();
        assert_eq!(g.arc_count(), 0);
        let g = Network::constant(3, Config(5)).interaction_graph();
        assert_eq!(g.arc_count(), 0);
    }

    #[test]
    fn f1_graph_is_the_two_cycle() {
        let f = Network::from_text(F1).unwrap();
        let g = f.interaction_graph();
        assert_eq!(g.arcs(), vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn f6_graph_is_a_single_loop() {
        let f = Network::from_text("n=2\n00 00\n01 00\n10 10\n11 10\n").unwrap();
        let g = f.interaction_graph();
        assert_eq!(g.arcs(), vec![(0, 0)]);
    }

    #[test]
    fn image_size_counts_distinct_values() {
        assert_eq!(Network::identity(3).image_size(), 8);
        assert_eq!(Network::constant(3, Config(2)).image_size(), 1);
    }
}
