//! Cell graphs: undirected, loop-free neighbour relations between cells.
//!
//! Cells are indexed `0..L` internally; the JSON document format uses
//! `1..=L`:
//!
//! ```json
//! {"L": 3, "edges": [[1, 2], [2, 3]]}
//! ```

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A set of cells, stored 0-based.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellSet(BTreeSet<usize>);

impl CellSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, cell: usize) -> bool {
        self.0.contains(&cell)
    }

    pub fn insert(&mut self, cell: usize) -> bool {
        self.0.insert(cell)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &CellSet) -> CellSet {
        self.0.union(&other.0).copied().collect()
    }

    pub fn difference(&self, other: &CellSet) -> CellSet {
        self.0.difference(&other.0).copied().collect()
    }

    pub fn is_subset(&self, other: &CellSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Membership mask of length `cells`.
    pub fn mask(&self, cells: usize) -> Vec<bool> {
        let mut mask = vec![false; cells];
        for c in self.iter() {
            mask[c] = true;
        }
        mask
    }

    pub fn from_mask(mask: &[bool]) -> CellSet {
        mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i).collect()
    }

    /// Members as 1-based indices, the external convention.
    pub fn one_based(&self) -> Vec<usize> {
        self.iter().map(|c| c + 1).collect()
    }

    /// Builds a set from 1-based indices, checking bounds.
    pub fn from_one_based(cells: &[usize], bound: usize) -> Result<CellSet> {
        cells
            .iter()
            .map(
                |&c| {
                    if c == 0 || c > bound {
                        Err(Error::CellOutOfRange { cell: c, cells: bound })
                    } else {
                        Ok(c - 1)
                    }
                },
            )
            .collect()
    }
}

impl FromIterator<usize> for CellSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        CellSet(iter.into_iter().collect())
    }
}

impl fmt::Display for CellSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, c) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c + 1)?;
        }
        write!(f, "}}")
    }
}

/// Undirected loop-free graph on cells `0..L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellGraph {
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GraphDocument {
    #[serde(rename = "L")]
    cells: usize,
    edges: Vec<Vec<usize>>,
}

/// Lattice families available from [`CellGraph::generate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    /// `path(L)`: edges `(i, i+1)`.
    Path { cells: usize },
    /// `cycle(L)`: path plus the edge `(L, 1)`, `L >= 3`.
    Cycle { cells: usize },
    /// 4-neighbour rectangular lattice.
    Grid { rows: usize, cols: usize },
    /// 6-neighbour hexagonal lattice in offset-row (brick wall) layout.
    HexGrid { rows: usize, cols: usize },
}

impl CellGraph {
    /// Builds a graph on `cells` cells from 0-based edges. Rejects self-loops,
    /// duplicates and out-of-range endpoints; does not require connectivity.
    pub fn new(cells: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if cells == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut adjacency = vec![Vec::new(); cells];
        let mut seen = BTreeSet::new();
        for (a, b) in edges {
            for c in [a, b] {
                if c >= cells {
                    return Err(Error::CellOutOfRange { cell: c + 1, cells });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a + 1));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::DuplicateEdge(e.0 + 1, e.1 + 1));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        Ok(Self { adjacency, edges: seen.into_iter().collect() })
    }

    /// Like [`CellGraph::new`] but also rejects disconnected graphs.
    pub fn connected(cells: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let g = Self::new(cells, edges)?;
        g.require_connected()?;
        Ok(g)
    }

    /// Parses the JSON graph document and requires a connected graph.
    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_json_with(text, false)
    }

    /// Parses the JSON graph document; `allow_disconnected` skips the
    /// connectivity requirement.
    pub fn from_json_with(text: &str, allow_disconnected: bool) -> Result<Self> {
        let doc: GraphDocument = serde_json::from_str(text).map_err(|e| Error::MalformedGraph(e.to_string()))?;
        if doc.cells == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut edges = Vec::with_capacity(doc.edges.len());
        for pair in &doc.edges {
            let [a, b] = pair[..] else {
                return Err(Error::MalformedGraph(format!("edge {pair:?} must have exactly two endpoints")));
            };
            for c in [a, b] {
                if c == 0 || c > doc.cells {
                    return Err(Error::CellOutOfRange { cell: c, cells: doc.cells });
                }
            }
            edges.push((a - 1, b - 1));
        }
        let g = Self::new(doc.cells, edges)?;
        if !allow_disconnected {
            g.require_connected()?;
        }
        Ok(g)
    }

    /// Serializes to the JSON graph document (1-based, edges as `(min, max)`).
    pub fn to_json(&self) -> String {
        let doc =
            GraphDocument { cells: self.len(), edges: self.edges.iter().map(|&(a, b)| vec![a + 1, b + 1]).collect() };
        serde_json::to_string(&doc).expect("graph document serializes")
    }

    pub fn generate(kind: GraphKind) -> Result<Self> {
        match kind {
            GraphKind::Path { cells } => {
                if cells == 0 {
                    return Err(Error::InvalidGenerator("path needs at least one cell".into()));
                }
                Self::new(cells, (1..cells).map(|i| (i - 1, i)))
            }
            GraphKind::Cycle { cells } => {
                if cells < 3 {
                    return Err(Error::InvalidGenerator(format!("cycle needs at least 3 cells, got {cells}")));
                }
                Self::new(cells, (0..cells).map(|i| (i, (i + 1) % cells)))
            }
            GraphKind::Grid { rows, cols } => {
                if rows == 0 || cols == 0 {
                    return Err(Error::InvalidGenerator("grid dimensions must be positive".into()));
                }
                let id = |r: usize, c: usize| r * cols + c;
                let mut edges = Vec::new();
                for r in 0..rows {
                    for c in 0..cols {
                        if c + 1 < cols {
                            edges.push((id(r, c), id(r, c + 1)));
                        }
                        if r + 1 < rows {
                            edges.push((id(r, c), id(r + 1, c)));
                        }
                    }
                }
                Self::new(rows * cols, edges)
            }
            GraphKind::HexGrid { rows, cols } => {
                if rows == 0 || cols == 0 {
                    return Err(Error::InvalidGenerator("hexgrid dimensions must be positive".into()));
                }
                // Odd rows are shifted half a cell to the right: a cell in an even
                // row touches columns c-1 and c of the next row, a cell in an odd
                // row touches columns c and c+1.
                let id = |r: usize, c: usize| r * cols + c;
                let mut edges = Vec::new();
                for r in 0..rows {
                    for c in 0..cols {
                        if c + 1 < cols {
                            edges.push((id(r, c), id(r, c + 1)));
                        }
                        if r + 1 < rows {
                            let (lo, hi) = if r % 2 == 0 {
                                (c.checked_sub(1), Some(c))
                            } else {
                                (Some(c), (c + 1 < cols).then_some(c + 1))
                            };
                            for nc in [lo, hi].into_iter().flatten() {
                                edges.push((id(r, c), id(r + 1, nc)));
                            }
                        }
                    }
                }
                Self::new(rows * cols, edges)
            }
        }
    }

    /// Number of cells `L`.
    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    /// Edges as 0-based `(min, max)` pairs in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted neighbour slice of `cell`; panics when out of range.
    pub fn adj(&self, cell: usize) -> &[usize] {
        &self.adjacency[cell]
    }

    pub fn degree(&self, cell: usize) -> usize {
        self.adjacency[cell].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// The neighbour set `S(i)`.
    pub fn neighbors(&self, cell: usize) -> Result<CellSet> {
        self.check_cell(cell)?;
        Ok(self.adjacency[cell].iter().copied().collect())
    }

    /// `S(I)`: union of the neighbour sets of the members of `set`.
    pub fn neighborhood_of_set(&self, set: &CellSet) -> Result<CellSet> {
        let mut out = CellSet::new();
        for c in set.iter() {
            self.check_cell(c)?;
            for &n in &self.adjacency[c] {
                out.insert(n);
            }
        }
        Ok(out)
    }

    /// Partition of `set` into the vertex sets of the connected components
    /// of the induced subgraph `G_set`, ordered by smallest member.
    pub fn connected_components_within(&self, set: &CellSet) -> Result<Vec<CellSet>> {
        for c in set.iter() {
            self.check_cell(c)?;
        }
        Ok(self.components_of_mask(&set.mask(self.len())))
    }

    pub(crate) fn components_of_mask(&self, member: &[bool]) -> Vec<CellSet> {
        let mut seen = vec![false; self.len()];
        let mut parts = Vec::new();
        for start in 0..self.len() {
            if !member[start] || seen[start] {
                continue;
            }
            let mut part = CellSet::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(c) = queue.pop_front() {
                part.insert(c);
                for &n in &self.adjacency[c] {
                    if member[n] && !seen[n] {
                        seen[n] = true;
                        queue.push_back(n);
                    }
                }
            }
            parts.push(part);
        }
        parts
    }

    pub fn is_connected(&self) -> bool {
        self.components_of_mask(&vec![true; self.len()]).len() == 1
    }

    pub fn require_connected(&self) -> Result<()> {
        let components = self.components_of_mask(&vec![true; self.len()]).len();
        if components == 1 {
            Ok(())
        } else {
            Err(Error::Disconnected { components })
        }
    }

    /// Shortest-path distances from the nearest member of `sources`; `None`
    /// for cells in other components.
    pub fn distances_from(&self, sources: &CellSet) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        let mut queue = VecDeque::new();
        for s in sources.iter() {
            dist[s] = Some(0);
            queue.push_back(s);
        }
        while let Some(c) = queue.pop_front() {
            let d = dist[c].expect("queued cells have a distance");
            for &n in &self.adjacency[c] {
                if dist[n].is_none() {
                    dist[n] = Some(d + 1);
                    queue.push_back(n);
                }
            }
        }
        dist
    }

    /// `min { d(a, b) : a in A, b in B }`, `None` when no pair is connected.
    pub fn graph_distance(&self, a: &CellSet, b: &CellSet) -> Result<Option<usize>> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::Precondition("graph_distance needs non-empty sets".into()));
        }
        for c in a.iter().chain(b.iter()) {
            self.check_cell(c)?;
        }
        let dist = self.distances_from(a);
        Ok(b.iter().filter_map(|c| dist[c]).min())
    }

    pub(crate) fn check_cell(&self, cell: usize) -> Result<()> {
        if cell < self.len() {
            Ok(())
        } else {
            Err(Error::CellOutOfRange { cell: cell + 1, cells: self.len() })
        }
    }

    /// All cells `0..L`.
    pub fn all_cells(&self) -> CellSet {
        (0..self.len()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::connected_graph;
    use proptest::prelude::*;

    fn set(cells: &[usize]) -> CellSet {
        CellSet::from_one_based(cells, 64).unwrap()
    }

    fn path(l: usize) -> CellGraph {
        CellGraph::generate(GraphKind::Path { cells: l }).unwrap()
    }

    #[test]
    fn load_path_graph() {
        let g = CellGraph::from_json(r#"{"L":3,"edges":[[1,2],[2,3]]}"#).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.neighbors(1).unwrap(), set(&[1, 3]));
    }

    #[test]
    fn load_single_cell() {
        let g = CellGraph::from_json(r#"{"L":1,"edges":[]}"#).unwrap();
        assert!(g.neighbors(0).unwrap().is_empty());
    }

    #[test]
    fn load_normalizes_pairs() {
        let g = CellGraph::from_json(r#"{"L":3,"edges":[[2,1],[3,2]]}"#).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(g.to_json(), r#"{"L":3,"edges":[[1,2],[2,3]]}"#);
    }

    #[test]
    fn load_errors() {
        let cases = [
            (r#"{"L":2,"edges":[[1,1]]}"#, "self-loop"),
            (r#"{"L":2,"edges":[[1,3]]}"#, "out of range"),
            (r#"{"L":2,"edges":[[0,1]]}"#, "out of range"),
            (r#"{"L":2,"edges":[[1,2],[2,1]]}"#, "duplicate"),
            (r#"{"L":3,"edges":[[1,2]]}"#, "disconnected"),
            (r#"{"L":2,"edges":[[1,2,3]]}"#, "malformed"),
            (r#"{"L":2,"edges":"#, "malformed"),
            (r#"{"L":0,"edges":[]}"#, "at least one cell"),
        ];
        for (doc, needle) in cases {
            let err = CellGraph::from_json(doc).unwrap_err().to_string();
            assert!(err.contains(needle), "{doc}: {err}");
        }
        assert!(matches!(CellGraph::from_json(r#"{"L":2,"edges":[[1,1]]}"#), Err(Error::SelfLoop(1))));
    }

    #[test]
    fn allow_disconnected() {
        let g = CellGraph::from_json_with(r#"{"L":3,"edges":[[1,2]]}"#, true).unwrap();
        assert!(!g.is_connected());
    }

    #[test]
    fn neighbors_of_path() {
        let g = path(3);
        assert_eq!(g.neighbors(0).unwrap(), set(&[2]));
        assert_eq!(g.neighbors(2).unwrap(), set(&[2]));
        assert!(matches!(g.neighbors(3), Err(Error::CellOutOfRange { cell: 4, .. })));
    }

    #[test]
    fn neighborhood_of_sets() {
        let g = path(4);
        assert_eq!(g.neighborhood_of_set(&set(&[2, 3])).unwrap(), set(&[1, 2, 3, 4]));
        assert!(g.neighborhood_of_set(&CellSet::new()).unwrap().is_empty());
        assert_eq!(path(3).neighborhood_of_set(&set(&[2])).unwrap(), set(&[1, 3]));
    }

    #[test]
    fn components_within() {
        let g = path(4);
        assert_eq!(g.connected_components_within(&set(&[2, 3])).unwrap(), vec![set(&[2, 3])]);
        assert_eq!(g.connected_components_within(&set(&[1, 4])).unwrap(), vec![set(&[1]), set(&[4])]);
        assert!(g.connected_components_within(&CellSet::new()).unwrap().is_empty());
    }

    #[test]
    fn generators() {
        assert_eq!(path(4).edges(), &[(0, 1), (1, 2), (2, 3)]);
        let tri = CellGraph::generate(GraphKind::Cycle { cells: 3 }).unwrap();
        assert_eq!(tri.edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert!(CellGraph::generate(GraphKind::Cycle { cells: 2 }).is_err());
        let grid = CellGraph::generate(GraphKind::Grid { rows: 3, cols: 3 }).unwrap();
        assert_eq!(grid.degree(4), 4);
        assert_eq!(grid.edges().len(), 12);
    }

    #[test]
    fn hexgrid_degrees() {
        let small = CellGraph::generate(GraphKind::HexGrid { rows: 2, cols: 2 }).unwrap();
        assert!(small.is_connected());
        assert!((0..small.len()).all(|c| small.degree(c) <= 6));

        let g = CellGraph::generate(GraphKind::HexGrid { rows: 5, cols: 5 }).unwrap();
        assert!(g.is_connected());
        for r in 1..4 {
            for c in 1..4 {
                assert_eq!(g.degree(r * 5 + c), 6, "interior cell ({r},{c})");
            }
        }
        assert!((0..g.len()).all(|c| g.degree(c) <= 6));
    }

    #[test]
    fn distances() {
        let g = path(5);
        assert_eq!(g.graph_distance(&set(&[3]), &set(&[5])).unwrap(), Some(2));
        assert_eq!(g.graph_distance(&set(&[3]), &set(&[3])).unwrap(), Some(0));
        assert_eq!(g.graph_distance(&set(&[1]), &set(&[2, 4])).unwrap(), Some(1));
        assert!(g.graph_distance(&CellSet::new(), &set(&[1])).is_err());
    }

    proptest! {
        #[test]
        fn neighbor_relation_is_symmetric(g in connected_graph(1..=8)) {
            for i in 0..g.len() {
                prop_assert!(!g.adj(i).contains(&i));
                for &j in g.adj(i) {
                    prop_assert!(g.adj(j).contains(&i));
                }
            }
            prop_assert!(g.is_connected());
            let reparsed = CellGraph::from_json(&g.to_json()).unwrap();
            prop_assert_eq!(reparsed, g);
        }

        #[test]
        fn components_partition(g in connected_graph(1..=8), bits in any::<u8>()) {
            let subset: CellSet = (0..g.len()).filter(|c| bits >> c & 1 == 1).collect();
            let parts = g.connected_components_within(&subset).unwrap();
            let mut union = CellSet::new();
            for p in &parts {
                prop_assert!(!p.is_empty());
                prop_assert_eq!(g.connected_components_within(p).unwrap().len(), 1);
                for c in p.iter() {
                    prop_assert!(union.insert(c), "parts overlap");
                }
            }
            prop_assert_eq!(&union, &subset);
            for (x, p) in parts.iter().enumerate() {
                for q in &parts[x + 1..] {
                    for a in p.iter() {
                        for b in q.iter() {
                            prop_assert!(!g.has_edge(a, b));
                        }
                    }
                }
            }
        }

        #[test]
        fn distance_triangle_inequality(g in connected_graph(1..=8), a in 0usize..8, b in 0usize..8, c in 0usize..8) {
            let l = g.len();
            let (a, b, c) = (a % l, b % l, c % l);
            let d = |x: usize, y: usize| {
                g.graph_distance(&CellSet::from_iter([x]), &CellSet::from_iter([y])).unwrap().unwrap()
            };
            prop_assert_eq!(d(a, b), d(b, a));
            prop_assert!(d(a, c) <= d(a, b) + d(b, c));
            prop_assert_eq!(d(a, a), 0);
        }
    }
}
