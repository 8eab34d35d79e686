use serde::{Deserialize, Serialize};

use crate::config::MAX_COMPONENTS;
use crate::error::{Error, Result};

/// A labeled digraph on vertex set `{0, ..., n-1}`, stored as an adjacency
/// bit matrix: bit `i` of `rows[j]` is the arc `j -> i`.
///
/// Equality is exact labeled arc-set equality, not digraph isomorphism.
/// Families of interaction graphs distinguish, say, a graph with arc
/// `0 -> 1` from its mirror with `1 -> 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    rows: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct DigraphWire {
    n: usize,
    arcs: Vec<(usize, usize)>,
}

impl Digraph {
    pub fn new(n: usize) -> Digraph {
        assert!(n >= 1 && n <= MAX_COMPONENTS);
        Digraph {
            n,
            rows: vec![0; n],
        }
    }

    /// The complete digraph on `n` vertices, loops included: `n^2` arcs.
    pub fn complete(n: usize) -> Digraph {
        let mut g = Digraph::new(n);
        let all = ((1u64 << n) - 1) as u32;
        for row in &mut g.rows {
            *row = all;
        }
        g
    }

    pub fn from_arcs<I: IntoIterator<Item = (usize, usize)>>(n: usize, arcs: I) -> Result<Digraph> {
        let mut g = Digraph::new(n);
        for (j, i) in arcs {
            if j >= n || i >= n {
                return Err(Error::Precondition(format!(
                    "arc ({j}, {i}) out of range for n = {n}"
                )));
            }
            g.add_arc(j, i);
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_arc(&self, from: usize, to: usize) -> bool {
        (self.rows[from] >> to) & 1 == 1
    }

    #[inline]
    pub fn add_arc(&mut self, from: usize, to: usize) {
        self.rows[from] |= 1 << to;
    }

    pub(crate) fn or_into_row(&mut self, from: usize, bits: u32) {
        self.rows[from] |= bits;
    }

    pub fn arc_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_complete(&self) -> bool {
        let all = ((1u64 << self.n) - 1) as u32;
        self.rows.iter().all(|&r| r == all)
    }

    pub fn loop_count(&self) -> usize {
        (0..self.n).filter(|&v| self.has_arc(v, v)).count()
    }

    /// Arcs `(from, to)` in lexicographic order, 0-based.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.arc_count());
        for j in 0..self.n {
            for i in 0..self.n {
                if self.has_arc(j, i) {
                    out.push((j, i));
                }
            }
        }
        out
    }

    /// JSON with 1-based vertex labels, arcs sorted lexicographically.
    pub fn to_json_string(&self) -> String {
        let wire = DigraphWire {
            n: self.n,
            arcs: self.arcs().iter().map(|&(j, i)| (j + 1, i + 1)).collect(),
        };
        serde_json::to_string(&wire).expect("digraph serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<Digraph> {
        let wire: DigraphWire = serde_json::from_str(s)?;
        if wire.n < 1 || wire.n > MAX_COMPONENTS {
            return Err(Error::Parse(format!("unsupported vertex count {}", wire.n)));
        }
        for &(j, i) in &wire.arcs {
            if j < 1 || j > wire.n || i < 1 || i > wire.n {
                return Err(Error::Parse(format!("arc ({j}, {i}) out of range")));
            }
        }
        Digraph::from_arcs(wire.n, wire.arcs.iter().map(|&(j, i)| (j - 1, i - 1)))
    }

    /// DOT output with vertices named `1..n`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph G {\n");
        for v in 1..=self.n {
            out.push_str(&format!("  {v};\n"));
        }
        for (j, i) in self.arcs() {
            out.push_str(&format!("  {} -> {};\n", j + 1, i + 1));
        }
        out.push_str("}\n");
        out
    }

    /// Plain-text arc listing, 1-based, one `j -> i` per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for (j, i) in self.arcs() {
            out.push_str(&format!("{} -> {}\n", j + 1, i + 1));
        }
        out
    }
}

/// Order by the sorted arc list, so that serialized graph families are
/// sorted by their canonical serialization.
impl Ord for Digraph {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.arcs().cmp(&other.arcs()))
    }
}

impl PartialOrd for Digraph {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Digraph(n={}, arcs={:?})", self.n, self.arcs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arc_queries() {
        let mut g = Digraph::new(3);
        g.add_arc(0, 1);
        g.add_arc(2, 2);
        assert!(g.has_arc(0, 1));
        assert!(!g.has_arc(1, 0));
        assert_eq!(g.arc_count(), 2);
        assert_eq!(g.loop_count(), 1);
        assert_eq!(g.arcs(), vec![(0, 1), (2, 2)]);
    }

    #[test]
    fn complete_graph() {
        let g = Digraph::complete(4);
        assert!(g.is_complete());
        assert_eq!(g.arc_count(), 16);
        assert!(!Digraph::new(4).is_complete());
    }

    #[test]
    fn json_round_trip_is_one_based() {
        let g = Digraph::from_arcs(2, [(0, 1), (1, 0)]).unwrap();
        let s = g.to_json_string();
        assert_eq!(s, r#"{"n":2,"arcs":[[1,2],[2,1]]}"#);
        assert_eq!(Digraph::from_json_str(&s).unwrap(), g);
    }

    #[test]
    fn dot_lists_vertices_and_arcs() {
        let g = Digraph::from_arcs(2, [(0, 1)]).unwrap();
        let dot = g.to_dot();
        assert!(dot.contains("1;"));
        assert!(dot.contains("2;"));
        assert!(dot.contains("1 -> 2;"));
    }

    #[test]
    fn order_follows_arc_serialization() {
        // {(0,0),(0,2)} sorts before {(0,1)} arc-wise even though its
        // first adjacency row is the larger integer.
        let a = Digraph::from_arcs(3, [(0, 0), (0, 2)]).unwrap();
        let b = Digraph::from_arcs(3, [(0, 1)]).unwrap();
        assert!(a < b);
    }

    #[test]
    fn rejects_bad_json() {
        assert!(Digraph::from_json_str(r#"{"n":2,"arcs":[[0,1]]}"#).is_err());
        assert!(Digraph::from_json_str(r#"{"n":2,"arcs":[[3,1]]}"#).is_err());
    }
}
