//! Which patterns are reachable from a state, constructive path witnesses,
//! and weak and strong basins (`k = 1`).
//!
//! Reduced model: `y` is reachable from `x` iff every connected component
//! of the low-Notch cells of `x` contains a cell where `y` is low.
//! Full model: the reachable patterns are exactly the fixed points of the
//! minimal trap space `κ(x)`.

use std::fmt;

use crate::cellgraph::{CellGraph, CellSet};
use crate::error::{Error, Result};
use crate::netcore::oracle::{self, Stg};
use crate::netcore::{ModelKind, Network, PathWitness, State, Subspace};
use crate::patterns;
use crate::trapspaces;

/// Whether the reduced fixed point `y` is reachable from `x` in `AD_N`.
pub fn reaches_reduced(g: &CellGraph, x: &State, y: &State) -> bool {
    let zeros: Vec<bool> = (0..g.len()).map(|i| !x.get(i)).collect();
    g.components_of_mask(&zeros).iter().all(|part| part.iter().any(|i| !y.get(i)))
}

/// Fixed points of `N` reachable from `x`, ordered by cover.
pub fn reachable_fixed_points_reduced(g: &CellGraph, x: &State) -> Result<Vec<State>> {
    Network::build(g, ModelKind::Reduced, 1)?.check_dimension(x)?;
    Ok(patterns::fixed_points(g, ModelKind::Reduced, 1)?
        .states()
        .into_iter()
        .filter(|y| reaches_reduced(g, x, y))
        .collect())
}

/// Fixed points of `F` reachable from `y`: those inside `κ(y)`.
pub fn reachable_fixed_points_full(g: &CellGraph, y: &State) -> Result<Vec<State>> {
    let net = Network::build(g, ModelKind::Full, 1)?;
    let kappa = trapspaces::kappa(&net, y)?;
    Ok(patterns::fixed_points(g, ModelKind::Full, 1)?.states().into_iter().filter(|x| kappa.contains(x)).collect())
}

/// Reachable patterns for either model.
pub fn reachable_fixed_points(g: &CellGraph, kind: ModelKind, x: &State) -> Result<Vec<State>> {
    match kind {
        ModelKind::Full => reachable_fixed_points_full(g, x),
        ModelKind::Reduced => reachable_fixed_points_reduced(g, x),
    }
}

/// A homogeneous starting state. In the reduced model only `notch` is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Homogeneous {
    pub notch: bool,
    pub delta: bool,
}

impl Homogeneous {
    /// `1` (reduced) or `(1, 0)` (full).
    pub const ONES: Homogeneous = Homogeneous { notch: true, delta: false };
    /// `0` (reduced) or `(0, 1)` (full).
    pub const ZEROS: Homogeneous = Homogeneous { notch: false, delta: true };

    pub fn state(self, kind: ModelKind, cells: usize) -> State {
        match kind {
            ModelKind::Reduced => State::from_bits(vec![self.notch; cells]),
            ModelKind::Full => State::from_blocks(&vec![self.notch; cells], &vec![self.delta; cells]),
        }
    }
}

impl fmt::Display for Homogeneous {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", u8::from(self.notch), u8::from(self.delta))
    }
}

/// A path from a homogeneous state to the pattern `x`.
///
/// Reduced: from `1` flip every cell low in `x`; from `0` flip every cell high
/// in `x`, ascending. Full: each of those flips becomes the Notch flip
/// followed by the Delta flip of the same cell, starting from `(1, 0)` or
/// `(0, 1)`; `(1, 1)` and `(0, 0)` first move all Delta levels to reach one
/// of them.
pub fn witness_homogeneous_to_pattern(
    g: &CellGraph,
    kind: ModelKind,
    x: &State,
    origin: Homogeneous,
) -> Result<PathWitness> {
    let net = Network::build(g, kind, 1)?;
    net.require_fixed_point(x)?;
    let l = g.len();
    let start = origin.state(kind, l);
    let mut w = PathWitness::empty(&start);
    // Cells flipped by the reduced path, ascending.
    let flipped: Vec<usize> = (0..l).filter(|&i| x.get(i) != origin.notch).collect();
    match kind {
        ModelKind::Reduced => w.extend(flipped),
        ModelKind::Full => {
            if origin.notch == origin.delta {
                w.extend((0..l).map(|i| i + l));
            }
            w.extend(flipped.into_iter().flat_map(|i| [i, i + l]));
        }
    }
    Ok(w)
}

/// Path in `AD_N` from `x` to `x` with `j` negated, where `x` is low on the
/// connected set `i_set` and `j ⊆ i_set ∖ {root}`.
///
/// Uses a BFS spanning tree of `G_I` rooted at `root` (lowest index first)
/// and flips the members of `j` from the deepest layer up, ascending within
/// a layer; each flip is enabled by the still-low parent.
pub fn witness_tree_flips(g: &CellGraph, x: &State, i_set: &CellSet, root: usize, j: &CellSet) -> Result<PathWitness> {
    Network::build(g, ModelKind::Reduced, 1)?.check_dimension(x)?;
    for c in i_set.iter().chain(j.iter()).chain([root]) {
        g.check_cell(c)?;
    }
    if !i_set.contains(root) {
        return Err(Error::Precondition(format!("root {} is not in I", root + 1)));
    }
    if j.contains(root) || !j.is_subset(i_set) {
        return Err(Error::Precondition("J must be a subset of I without the root".into()));
    }
    if let Some(c) = i_set.iter().find(|&c| x.get(c)) {
        return Err(Error::Precondition(format!("cell {} of I is not low", c + 1)));
    }
    let dist = {
        let mask = i_set.mask(g.len());
        let mut dist = vec![None; g.len()];
        let mut queue = std::collections::VecDeque::from([root]);
        dist[root] = Some(0usize);
        while let Some(c) = queue.pop_front() {
            for &n in g.adj(c) {
                if mask[n] && dist[n].is_none() {
                    dist[n] = Some(dist[c].expect("visited") + 1);
                    queue.push_back(n);
                }
            }
        }
        dist
    };
    if i_set.iter().any(|c| dist[c].is_none()) {
        return Err(Error::Precondition("G_I must be connected".into()));
    }
    let mut order: Vec<usize> = j.iter().collect();
    order.sort_by_key(|&c| (std::cmp::Reverse(dist[c]), c));
    let mut w = PathWitness::empty(x);
    w.extend(order);
    Ok(w)
}

/// The cycle `(1,0) → (0,0) → (0,1) → (1,1) → (1,0)` of `AD_F`, `L >= 2`.
pub fn homogeneous_cycle(g: &CellGraph) -> Result<PathWitness> {
    let l = g.len();
    if l < 2 {
        return Err(Error::Precondition("the homogeneous cycle needs at least two cells".into()));
    }
    let mut w = PathWitness::empty(&Homogeneous::ONES.state(ModelKind::Full, l));
    w.extend(0..l);
    w.extend(l..2 * l);
    w.extend(0..l);
    w.extend(l..2 * l);
    Ok(w)
}

/// Path in `AD_F` from a state with `κ(x)` the full space to `(1, 0)`.
///
/// Raises the low Delta levels that are not surrounded by high-Notch,
/// low-Delta cells, then raises every Notch that sees a high Delta, then
/// lowers Delta where Notch is high. If some Notch is still low, finishes
/// along the homogeneous cycle.
pub fn witness_to_homogeneous_full(g: &CellGraph, x: &State) -> Result<PathWitness> {
    let net = Network::build(g, ModelKind::Full, 1)?;
    if !trapspaces::kappa(&net, x)?.is_full() {
        return Err(Error::Precondition(format!("{x} lies in a proper trap space")));
    }
    let l = g.len();
    let n = |s: &State, i: usize| s.get(i);
    let d = |s: &State, i: usize| s.get(i + l);
    let mut w = PathWitness::empty(x);
    let mut cur = x.clone();
    let apply = |cur: &mut State, w: &mut PathWitness, p: usize| {
        cur.flip(p);
        w.flips.push(p);
    };

    let surrounded: Vec<bool> = (0..l).map(|i| !n(x, i) && g.adj(i).iter().all(|&j| n(x, j) && !d(x, j))).collect();
    for (i, &inner) in surrounded.iter().enumerate() {
        if !inner && !n(&cur, i) && !d(&cur, i) {
            apply(&mut cur, &mut w, i + l);
        }
    }
    let raise: Vec<usize> = (0..l).filter(|&i| !n(&cur, i) && g.adj(i).iter().any(|&j| d(&cur, j))).collect();
    for i in raise {
        apply(&mut cur, &mut w, i);
    }
    for (i, &inner) in surrounded.iter().enumerate() {
        if !inner && n(&cur, i) && d(&cur, i) {
            apply(&mut cur, &mut w, i + l);
        }
    }
    if (0..l).any(|i| !n(&cur, i)) {
        // All Delta levels are low here.
        let high: Vec<usize> = (0..l).filter(|&i| n(&cur, i)).collect();
        for i in high {
            apply(&mut cur, &mut w, i);
        }
        let tail = homogeneous_cycle(g)?;
        w.extend(tail.flips[l..].iter().copied());
    }
    Ok(w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasinMode {
    /// States from which the pattern is reachable.
    Weak,
    /// States from which the pattern is the only reachable attractor.
    Strong,
}

impl fmt::Display for BasinMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BasinMode::Weak => "weak",
            BasinMode::Strong => "strong",
        })
    }
}

/// A basin, described by its membership predicate and optionally listed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasinReport {
    pub fixed_point: State,
    pub mode: BasinMode,
    pub kind: ModelKind,
    pub predicate: String,
    /// Members in index order, when enumeration was requested and feasible.
    pub states: Option<Vec<State>>,
}

/// Whether the free cells of `s` (Notch or Delta) are pairwise non-adjacent
/// and `s` is proper in the sense of the strong-basin characterization.
pub fn is_isolated_proper(g: &CellGraph, kind: ModelKind, s: &Subspace) -> bool {
    let l = g.len();
    let cell_free: Vec<bool> = (0..l).map(|i| s.is_free(i) || (kind == ModelKind::Full && s.is_free(i + l))).collect();
    let isolated = g.edges().iter().all(|&(a, b)| !(cell_free[a] && cell_free[b]));
    let proper = match kind {
        ModelKind::Reduced => (0..l).any(|i| !s.is_free(i)),
        ModelKind::Full => (0..l).any(|i| !s.is_free(i + l)),
    };
    isolated && proper
}

/// Basin membership of `y` for the pattern `fp`.
pub fn in_basin(g: &CellGraph, kind: ModelKind, fp: &State, mode: BasinMode, y: &State) -> Result<bool> {
    let net = Network::build(g, kind, 1)?;
    net.require_fixed_point(fp)?;
    net.check_dimension(y)?;
    Ok(Membership::new(&net, fp)?.test(&net, mode, y))
}

struct Membership {
    fp: State,
    unique: bool,
}

impl Membership {
    fn new(net: &Network, fp: &State) -> Result<Self> {
        let count = patterns::fixed_points(net.graph(), net.kind(), 1)?.len();
        Ok(Self { fp: fp.clone(), unique: count == 1 })
    }

    fn test(&self, net: &Network, mode: BasinMode, y: &State) -> bool {
        if self.unique {
            return true;
        }
        match (mode, net.kind()) {
            (BasinMode::Weak, ModelKind::Reduced) => reaches_reduced(net.graph(), y, &self.fp),
            (BasinMode::Weak, ModelKind::Full) => net.trap_closure(&Subspace::point(y)).contains(&self.fp),
            (BasinMode::Strong, kind) => {
                let kappa = net.trap_closure(&Subspace::point(y));
                kappa.contains(&self.fp) && is_isolated_proper(net.graph(), kind, &kappa)
            }
        }
    }
}

/// Weak or strong basin of the pattern `fp` (`k = 1`).
///
/// The states are listed when `enumerate` is set and the dimension is at
/// most `limit`.
pub fn basin(
    g: &CellGraph,
    kind: ModelKind,
    fp: &State,
    mode: BasinMode,
    enumerate: bool,
    limit: usize,
) -> Result<BasinReport> {
    let net = Network::build(g, kind, 1)?;
    net.require_fixed_point(fp)?;
    let membership = Membership::new(&net, fp)?;
    let predicate = match (membership.unique, mode, kind) {
        (true, _, _) => "every state (the pattern is the only attractor)".to_string(),
        (_, BasinMode::Weak, ModelKind::Reduced) => {
            format!("every component of the low cells of y contains a cell low in {fp}")
        }
        (_, BasinMode::Weak, ModelKind::Full) => format!("{fp} lies in the minimal trap space of y"),
        (_, BasinMode::Strong, ModelKind::Reduced) => format!(
            "the minimal trap space of y is {fp}[I] with no two cells of I adjacent and I a proper subset of the cells"
        ),
        (_, BasinMode::Strong, ModelKind::Full) => format!(
            "the minimal trap space of y is {fp}[I] with no two cells of I_N ∪ I_D adjacent and I_D a proper subset of the cells"
        ),
    };
    let n = net.dimension();
    let states = if enumerate {
        if n > limit.min(oracle::MAX_LIMIT) {
            return Err(Error::LimitExceeded { dimension: n, limit: limit.min(oracle::MAX_LIMIT) });
        }
        Some((0..1u64 << n).map(|i| State::from_index(i, n)).filter(|y| membership.test(&net, mode, y)).collect())
    } else {
        None
    };
    Ok(BasinReport { fixed_point: fp.clone(), mode, kind, predicate, states })
}

/// Ground-truth reachability by breadth-first search on the explicit
/// transition graph, with a shortest witness when reachable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OraclePath {
    pub reachable: bool,
    pub witness: Option<PathWitness>,
}

pub fn path_exists_oracle(net: &Network, from: &State, to: &State, limit: usize) -> Result<OraclePath> {
    net.check_dimension(from)?;
    net.check_dimension(to)?;
    let stg = Stg::build(net, limit)?;
    let witness = stg.shortest_path(from.index(), to.index());
    Ok(OraclePath { reachable: witness.is_some(), witness })
}

/// Fixed points reachable from `x` according to the oracle.
pub fn reachable_fixed_points_oracle(net: &Network, x: &State, limit: usize) -> Result<Vec<State>> {
    net.check_dimension(x)?;
    let stg = Stg::build(net, limit)?;
    let seen = stg.reachable_from(x.index());
    let mut out: Vec<State> = stg
        .fixed_points()
        .into_iter()
        .filter(|&f| seen[f as usize])
        .map(|f| State::from_index(f, net.dimension()))
        .collect();
    out.sort();
    Ok(out)
}
