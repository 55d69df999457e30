//! The seven network families and their canonical vertex layout.
//!
//! Star and Wheel put the hub at vertex 0; the Wheel rim is `1..n` in cyclic
//! order. Lattices are `side x side`, row-major, with open edges. Boundary
//! clamping is a per-vertex mask over the outer ring of the lattice, so a
//! single edge set serves free and clamped runs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphFamily {
    Empty,
    Star,
    Chain,
    Ring,
    Wheel,
    Complete,
    #[serde(rename = "lattice")]
    Lattice2D,
}

impl GraphFamily {
    pub const ALL: [GraphFamily; 7] = [
        GraphFamily::Empty,
        GraphFamily::Star,
        GraphFamily::Chain,
        GraphFamily::Ring,
        GraphFamily::Wheel,
        GraphFamily::Complete,
        GraphFamily::Lattice2D,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GraphFamily::Empty => "empty",
            GraphFamily::Star => "star",
            GraphFamily::Chain => "chain",
            GraphFamily::Ring => "ring",
            GraphFamily::Wheel => "wheel",
            GraphFamily::Complete => "complete",
            GraphFamily::Lattice2D => "lattice",
        }
    }

    pub fn min_vertices(self) -> usize {
        match self {
            GraphFamily::Star | GraphFamily::Chain => 2,
            GraphFamily::Ring => 3,
            GraphFamily::Wheel => 4,
            _ => 1,
        }
    }
}

impl fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GraphFamily::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown graph family '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Free,
    #[serde(rename = "plus")]
    PlusClamped,
    #[serde(rename = "minus")]
    MinusClamped,
}

impl Boundary {
    pub fn name(self) -> &'static str {
        match self {
            Boundary::Free => "free",
            Boundary::PlusClamped => "plus",
            Boundary::MinusClamped => "minus",
        }
    }

    pub fn clamp_value(self) -> Option<i8> {
        match self {
            Boundary::Free => None,
            Boundary::PlusClamped => Some(1),
            Boundary::MinusClamped => Some(-1),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "free" => Ok(Boundary::Free),
            "plus" | "+" => Ok(Boundary::PlusClamped),
            "minus" | "-" => Ok(Boundary::MinusClamped),
            _ => Err(Error::InvalidParameter(format!("unknown boundary '{s}'"))),
        }
    }
}

/// A validated network. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphInstance {
    family: GraphFamily,
    n: usize,
    side: Option<usize>,
    boundary: Boundary,
    hub: Option<usize>,
    /// Explicit edge list with `u < v`; empty (implicit) for the complete graph.
    edges: Vec<(usize, usize)>,
}

/// Compressed neighbour lists.
#[derive(Debug, Clone)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Adjacency {
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn build_graph(family: GraphFamily, n: usize, boundary: Boundary) -> Result<GraphInstance> {
    if n < family.min_vertices() {
        return Err(Error::TooFewVertices {
            family,
            min: family.min_vertices(),
            n,
        });
    }
    if boundary != Boundary::Free && family != GraphFamily::Lattice2D {
        return Err(Error::BoundaryNotSupported(family));
    }
    let mut side = None;
    let mut hub = None;
    let edges = match family {
        GraphFamily::Empty | GraphFamily::Complete => Vec::new(),
        GraphFamily::Star => {
            hub = Some(0);
            (1..n).map(|v| (0, v)).collect()
        }
        GraphFamily::Chain => (0..n - 1).map(|v| (v, v + 1)).collect(),
        GraphFamily::Ring => {
            let mut e: Vec<_> = (0..n - 1).map(|v| (v, v + 1)).collect();
            e.push((0, n - 1));
            e
        }
        GraphFamily::Wheel => {
            hub = Some(0);
            let mut e: Vec<_> = (1..n).map(|v| (0, v)).collect();
            e.extend((1..n - 1).map(|v| (v, v + 1)));
            e.push((1, n - 1));
            e
        }
        GraphFamily::Lattice2D => {
            let l = integer_sqrt(n).ok_or(Error::NotSquare(n))?;
            side = Some(l);
            let mut e = Vec::with_capacity(2 * l * (l - 1));
            for r in 0..l {
                for c in 0..l {
                    let v = r * l + c;
                    if c + 1 < l {
                        e.push((v, v + 1));
                    }
                    if r + 1 < l {
                        e.push((v, v + l));
                    }
                }
            }
            e
        }
    };
    Ok(GraphInstance {
        family,
        n,
        side,
        boundary,
        hub,
        edges,
    })
}

fn integer_sqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n).then_some(r)
}

impl GraphInstance {
    pub fn family(&self) -> GraphFamily {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn side(&self) -> Option<usize> {
        self.side
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn hub(&self) -> Option<usize> {
        self.hub
    }

    pub fn is_complete(&self) -> bool {
        self.family == GraphFamily::Complete
    }

    pub fn edge_count(&self) -> usize {
        if self.is_complete() {
            self.n * (self.n - 1) / 2
        } else {
            self.edges.len()
        }
    }

    pub fn edges(&self) -> Box<dyn Iterator<Item = (usize, usize)> + '_> {
        if self.is_complete() {
            let n = self.n;
            Box::new((0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v))))
        } else {
            Box::new(self.edges.iter().copied())
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        if self.is_complete() {
            return vec![self.n - 1; self.n];
        }
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Neighbour lists for sparse families; `None` for the complete graph,
    /// whose interaction is handled through the total magnetization.
    pub fn adjacency(&self) -> Option<Adjacency> {
        if self.is_complete() {
            return None;
        }
        let deg = self.degrees();
        let mut offsets = Vec::with_capacity(self.n + 1);
        offsets.push(0);
        for d in &deg {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0; offsets[self.n]];
        for &(u, v) in &self.edges {
            targets[fill[u]] = v;
            fill[u] += 1;
            targets[fill[v]] = u;
            fill[v] += 1;
        }
        Some(Adjacency { offsets, targets })
    }

    /// Frozen spin per vertex (`None` where free).
    pub fn clamp_mask(&self) -> Vec<Option<i8>> {
        let (Some(l), Some(value)) = (self.side, self.boundary.clamp_value()) else {
            return vec![None; self.n];
        };
        (0..self.n)
            .map(|v| {
                let (r, c) = (v / l, v % l);
                (r == 0 || c == 0 || r + 1 == l || c + 1 == l).then_some(value)
            })
            .collect()
    }

    pub fn free_vertices(&self) -> Vec<usize> {
        self.clamp_mask()
            .iter()
            .enumerate()
            .filter_map(|(v, c)| c.is_none().then_some(v))
            .collect()
    }
}

pub fn edge_count(g: &GraphInstance) -> usize {
    g.edge_count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn g(family: GraphFamily, n: usize) -> GraphInstance {
        build_graph(family, n, Boundary::Free).unwrap()
    }

    #[test]
    fn example_edge_counts() {
        assert_eq!(g(GraphFamily::Empty, 5).edge_count(), 0);
        assert_eq!(g(GraphFamily::Empty, 10).edge_count(), 0);
        assert_eq!(g(GraphFamily::Wheel, 5).edge_count(), 8);
        assert_eq!(g(GraphFamily::Lattice2D, 9).edge_count(), 12);
        assert_eq!(g(GraphFamily::Complete, 5).edge_count(), 10);
        assert_eq!(g(GraphFamily::Ring, 7).edge_count(), 7);
    }

    #[test]
    fn size_violations_are_rejected() {
        assert!(matches!(
            build_graph(GraphFamily::Wheel, 3, Boundary::Free),
            Err(Error::TooFewVertices { min: 4, .. })
        ));
        assert!(build_graph(GraphFamily::Ring, 2, Boundary::Free).is_err());
        assert_eq!(
            build_graph(GraphFamily::Lattice2D, 10, Boundary::Free),
            Err(Error::NotSquare(10))
        );
        assert_eq!(
            build_graph(GraphFamily::Chain, 5, Boundary::PlusClamped),
            Err(Error::BoundaryNotSupported(GraphFamily::Chain))
        );
    }

    #[test]
    fn wheel_layout_has_hub_at_zero() {
        let w = g(GraphFamily::Wheel, 6);
        assert_eq!(w.hub(), Some(0));
        assert_eq!(w.degrees(), vec![5, 3, 3, 3, 3, 3]);
    }

    #[test]
    fn lattice_clamp_mask_covers_outer_ring() {
        let lat = build_graph(GraphFamily::Lattice2D, 16, Boundary::PlusClamped).unwrap();
        let mask = lat.clamp_mask();
        assert_eq!(mask.iter().filter(|c| c.is_some()).count(), 12);
        assert_eq!(lat.free_vertices(), vec![5, 6, 9, 10]);
        assert!(mask.iter().flatten().all(|&c| c == 1));
    }

    #[test]
    fn adjacency_is_symmetric() {
        let lat = g(GraphFamily::Lattice2D, 25);
        let adj = lat.adjacency().unwrap();
        for v in 0..25 {
            for &u in adj.neighbors(v) {
                assert!(adj.neighbors(u).contains(&v));
            }
        }
        assert!(g(GraphFamily::Complete, 4).adjacency().is_none());
    }

    #[test]
    fn parse_names() {
        assert_eq!("lattice".parse::<GraphFamily>().unwrap(), GraphFamily::Lattice2D);
        assert_eq!("Wheel".parse::<GraphFamily>().unwrap(), GraphFamily::Wheel);
        assert!("torus".parse::<GraphFamily>().is_err());
        assert_eq!("plus".parse::<Boundary>().unwrap(), Boundary::PlusClamped);
    }

    fn expected_degrees(family: GraphFamily, n: usize) -> Vec<usize> {
        match family {
            GraphFamily::Empty => vec![0; n],
            GraphFamily::Complete => vec![n - 1; n],
            GraphFamily::Star => std::iter::once(n - 1).chain(std::iter::repeat(1).take(n - 1)).collect(),
            GraphFamily::Chain => (0..n).map(|v| if v == 0 || v == n - 1 { 1 } else { 2 }).collect(),
            GraphFamily::Ring => vec![2; n],
            GraphFamily::Wheel => std::iter::once(n - 1).chain(std::iter::repeat(3).take(n - 1)).collect(),
            GraphFamily::Lattice2D => {
                let l = integer_sqrt(n).unwrap();
                (0..n)
                    .map(|v| {
                        let (r, c) = (v / l, v % l);
                        [r > 0, r + 1 < l, c > 0, c + 1 < l].iter().filter(|&&b| b).count()
                    })
                    .collect()
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn degree_sequences_and_simple_edges(fam in 0usize..7, m in 1usize..40) {
            let family = GraphFamily::ALL[fam];
            let n = if family == GraphFamily::Lattice2D { m * m } else { m.max(family.min_vertices()) };
            let graph = g(family, n);
            proptest::prop_assert_eq!(graph.degrees(), expected_degrees(family, n));
            let mut seen = HashSet::new();
            for (u, v) in graph.edges() {
                proptest::prop_assert!(u < v && v < n);
                proptest::prop_assert!(seen.insert((u, v)));
            }
            proptest::prop_assert_eq!(seen.len(), graph.edge_count());
            proptest::prop_assert_eq!(graph.clone(), g(family, n));
        }
    }
}
