//! Stable patterns (fixed points) in closed form.
//!
//! A reduced state `x` corresponds to the cell set `h(x) = {i | x_i = 1}`.
//! For `k = 1` the fixed points are exactly the states whose `h(x)` is an
//! inclusion-minimal vertex cover of the cell graph. For `k >= 2` they are
//! the `k`-minimal transversals of the hypergraph `H(k)`, whose hyperedges
//! are `{i} ∪ H` for every cell `i` and every `k`-subset `H` of `S(i)`.
//! Full-model fixed points are the lifts `(n, !n)` of reduced ones.

use crate::cellgraph::{CellGraph, CellSet};
use crate::error::{Error, Result};
use crate::netcore::{ModelKind, State};

/// The hypergraph `H(k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    cells: usize,
    edges: Vec<CellSet>,
}

impl Hypergraph {
    pub fn cells(&self) -> usize {
        self.cells
    }

    /// Hyperedges, deduplicated and sorted.
    pub fn edges(&self) -> &[CellSet] {
        &self.edges
    }

    pub fn is_transversal(&self, q: &CellSet) -> bool {
        self.edges.iter().all(|e| e.iter().any(|c| q.contains(c)))
    }
}

/// Builds `H(k)`. Cells with fewer than `k` neighbours contribute nothing.
pub fn build_hk(g: &CellGraph, k: usize) -> Result<Hypergraph> {
    if k < 1 {
        return Err(Error::InvalidThreshold(k));
    }
    let mut edges = Vec::new();
    for i in 0..g.len() {
        for subset in k_subsets(g.adj(i), k) {
            let mut e: CellSet = subset.into_iter().collect();
            e.insert(i);
            edges.push(e);
        }
    }
    edges.sort();
    edges.dedup();
    Ok(Hypergraph { cells: g.len(), edges })
}

fn k_subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= items.len() {
        rec(items, k, 0, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mark {
    Open,
    In,
    Out,
}

/// All inclusion-minimal vertex covers, in lexicographic order.
///
/// Branch and reduce: take an uncovered edge and an undecided endpoint `u`;
/// either `u` joins the cover, or `u` is excluded and all of `S(u)` joins.
/// A branch dies once some cover vertex has its whole neighbourhood in the
/// cover, since no superset of it can then be minimal.
pub fn minimal_vertex_covers(g: &CellGraph) -> Vec<CellSet> {
    fn redundant(g: &CellGraph, marks: &[Mark], v: usize) -> bool {
        marks[v] == Mark::In && g.adj(v).iter().all(|&n| marks[n] == Mark::In)
    }

    fn rec(g: &CellGraph, marks: &mut Vec<Mark>, out: &mut Vec<CellSet>) {
        let uncovered = g.edges().iter().find(|&&(a, b)| marks[a] != Mark::In && marks[b] != Mark::In);
        let Some(&(a, b)) = uncovered else {
            let cover: CellSet = (0..g.len()).filter(|&v| marks[v] == Mark::In).collect();
            if cover.iter().all(|v| !redundant(g, marks, v)) {
                out.push(cover);
            }
            return;
        };
        // An excluded endpoint has all its neighbours in the cover, so at
        // least one endpoint is still open.
        let u = if marks[a] == Mark::Open { a } else { b };
        let saved = marks.clone();

        marks[u] = Mark::In;
        if !redundant(g, marks, u) && g.adj(u).iter().all(|&n| !redundant(g, marks, n)) {
            rec(g, marks, out);
        }
        marks.clone_from(&saved);

        marks[u] = Mark::Out;
        if g.adj(u).iter().all(|&n| marks[n] != Mark::Out) {
            let mut changed = Vec::new();
            for &n in g.adj(u) {
                if marks[n] == Mark::Open {
                    marks[n] = Mark::In;
                    changed.push(n);
                }
            }
            let dead =
                changed.iter().any(|&n| redundant(g, marks, n) || g.adj(n).iter().any(|&m| redundant(g, marks, m)));
            if !dead {
                rec(g, marks, out);
            }
        }
        marks.clone_from(&saved);
    }

    let mut out = Vec::new();
    rec(g, &mut vec![Mark::Open; g.len()], &mut out);
    out.sort();
    out.dedup();
    out
}

/// `|S(i) ∩ Q| <= |S(i)| - k` for every `i` in `q`.
pub fn is_k_minimal(g: &CellGraph, q: &CellSet, k: usize) -> bool {
    q.iter().all(|i| {
        let inside = g.adj(i).iter().filter(|&&j| q.contains(j)).count();
        g.degree(i) >= k && inside <= g.degree(i) - k
    })
}

/// All transversals of `h` satisfying the `k`-minimality bound, in
/// lexicographic order.
///
/// Every such transversal is inclusion-minimal, so branching over the
/// vertices of one unhit hyperedge at a time is complete.
pub fn k_minimal_transversals(h: &Hypergraph, g: &CellGraph, k: usize) -> Result<Vec<CellSet>> {
    if k < 1 {
        return Err(Error::InvalidThreshold(k));
    }
    if h.cells() != g.len() {
        return Err(Error::DimensionMismatch { expected: g.len(), found: h.cells() });
    }

    fn rec(h: &Hypergraph, g: &CellGraph, k: usize, marks: &mut Vec<Mark>, out: &mut Vec<CellSet>) {
        let Some(edge) = h.edges().iter().find(|e| e.iter().all(|c| marks[c] != Mark::In)) else {
            out.push((0..g.len()).filter(|&v| marks[v] == Mark::In).collect());
            return;
        };
        let saved = marks.clone();
        let mut tried = Vec::new();
        for v in edge.iter() {
            if marks[v] != Mark::Open || g.degree(v) < k {
                continue;
            }
            for &t in &tried {
                marks[t] = Mark::Out;
            }
            marks[v] = Mark::In;
            let within_bound = |i: usize| {
                let inside = g.adj(i).iter().filter(|&&j| marks[j] == Mark::In).count();
                inside + k <= g.degree(i)
            };
            if within_bound(v) && g.adj(v).iter().all(|&n| marks[n] != Mark::In || within_bound(n)) {
                rec(h, g, k, marks, out);
            }
            marks.clone_from(&saved);
            tried.push(v);
        }
    }

    let mut out = Vec::new();
    rec(h, g, k, &mut vec![Mark::Open; g.len()], &mut out);
    out.sort();
    out.dedup();
    Ok(out)
}

/// One stable pattern with its cell-set encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    /// `h(n) = {i | n_i = 1}`.
    pub cover: CellSet,
    /// Reduced fixed point `n`.
    pub reduced: State,
    /// Full fixed point `(n, !n)`.
    pub full: State,
}

impl Pattern {
    pub fn from_cover(cover: CellSet, cells: usize) -> Self {
        let reduced = State::from_bits(cover.mask(cells));
        let full = reduced.lift();
        Self { cover, reduced, full }
    }

    pub fn state(&self, kind: ModelKind) -> &State {
        match kind {
            ModelKind::Full => &self.full,
            ModelKind::Reduced => &self.reduced,
        }
    }
}

/// Fixed points of `F^k` or `N^k`, ordered by cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSet {
    pub kind: ModelKind,
    pub k: usize,
    pub patterns: Vec<Pattern>,
}

impl PatternSet {
    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Fixed points in the model's own state space.
    pub fn states(&self) -> Vec<State> {
        self.patterns.iter().map(|p| p.state(self.kind).clone()).collect()
    }
}

/// Closed-form fixed points of the network of the given kind and threshold.
pub fn fixed_points(g: &CellGraph, kind: ModelKind, k: usize) -> Result<PatternSet> {
    let covers = match k {
        0 => return Err(Error::InvalidThreshold(k)),
        1 => minimal_vertex_covers(g),
        _ => k_minimal_transversals(&build_hk(g, k)?, g, k)?,
    };
    let patterns = covers.into_iter().map(|c| Pattern::from_cover(c, g.len())).collect();
    Ok(PatternSet { kind, k, patterns })
}
