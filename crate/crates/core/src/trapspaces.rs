//! Trap spaces of `N^k` and `F^k` through their local characterizations.
//!
//! Every trap space contains a fixed point `x` and has the form `x[I]`; for a
//! full-model subspace the free set splits positionally into `I_N` (Notch
//! positions) and `I_D` (Delta positions, shifted by `L`). Whether `x[I]` is
//! a trap space is decided cell by cell from the values of `x` outside `I`,
//! which all fixed points of `x[I]` share.

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use crate::cellgraph::{CellGraph, CellSet};
use crate::error::{Error, Result};
use crate::netcore::{ModelKind, Network, NotchRule, State, Subspace};
use crate::patterns;

/// Default cap on `L` for [`enumerate_trap_spaces`].
pub const DEFAULT_ENUMERATION_LIMIT: usize = 12;

/// One clause of the characterization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Clause {
    /// The subspace contains a fixed point.
    ContainsFixedPoint,
    /// `I_N ⊆ I_D`.
    NotchFreeImpliesDeltaFree,
    /// A fixed cell bordering free Notch cells keeps a fixed low-Notch
    /// neighbour.
    BoundaryWitness,
    /// A cell whose Delta alone is free has low Notch.
    DeltaOnlyLow,
    /// A cell whose Delta alone is free has no neighbour with free Delta.
    DeltaOnlyIsolated,
    /// A neighbour of a Delta-only cell keeps a fixed high-Delta neighbour.
    DeltaOnlyBoundaryWitness,
    /// A fixed high-Notch cell keeps at least `k` fixed active inputs.
    HighThreshold,
    /// A fixed low-Notch cell cannot reach `k` active inputs.
    LowThreshold,
}

impl Clause {
    pub fn as_str(self) -> &'static str {
        match self {
            Clause::ContainsFixedPoint => "contains-fixed-point",
            Clause::NotchFreeImpliesDeltaFree => "notch-free-implies-delta-free",
            Clause::BoundaryWitness => "boundary-witness",
            Clause::DeltaOnlyLow => "delta-only-low",
            Clause::DeltaOnlyIsolated => "delta-only-isolated",
            Clause::DeltaOnlyBoundaryWitness => "delta-only-boundary-witness",
            Clause::HighThreshold => "high-threshold",
            Clause::LowThreshold => "low-threshold",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A failed clause, with the cell it failed at when it is local.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Violation {
    pub clause: Clause,
    pub cell: Option<usize>,
}

/// Outcome of a characterization check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrapSpaceCertificate {
    pub subspace: Subspace,
    /// A fixed point inside the subspace, when one was found.
    pub representative: Option<State>,
    /// Clauses evaluated, in order.
    pub checked: Vec<Clause>,
    /// First failing clause; `None` iff the subspace is a trap space.
    pub violation: Option<Violation>,
}

impl TrapSpaceCertificate {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// Per-cell freedom pattern of a subspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Fixed,
    /// Delta free, Notch fixed (full model only).
    DeltaOnly,
    /// Notch free; in the full model Delta is free as well.
    Free,
    /// Notch free with Delta fixed: never a trap space.
    NotchOnly,
}

impl Mode {
    fn notch_free(self) -> bool {
        matches!(self, Mode::Free | Mode::NotchOnly)
    }

    fn delta_free(self) -> bool {
        matches!(self, Mode::Free | Mode::DeltaOnly)
    }
}

fn threshold(net: &Network) -> Result<usize> {
    match net.rule() {
        NotchRule::AtLeast(k) => Ok(k),
        NotchRule::All => Err(Error::Unsupported("a threshold network".into())),
    }
}

fn modes_of(s: &Subspace, kind: ModelKind, cells: usize) -> Vec<Mode> {
    (0..cells)
        .map(|i| match kind {
            ModelKind::Reduced if s.is_free(i) => Mode::Free,
            ModelKind::Reduced => Mode::Fixed,
            ModelKind::Full => match (s.is_free(i), s.is_free(i + cells)) {
                (false, false) => Mode::Fixed,
                (false, true) => Mode::DeltaOnly,
                (true, true) => Mode::Free,
                (true, false) => Mode::NotchOnly,
            },
        })
        .collect()
}

/// Clauses evaluated at cell `i` for the model, in evaluation order.
fn clauses_for(kind: ModelKind, k: usize) -> &'static [Clause] {
    match (kind, k) {
        (ModelKind::Reduced, 1) => &[Clause::BoundaryWitness],
        (ModelKind::Reduced, _) => &[Clause::HighThreshold, Clause::LowThreshold],
        (ModelKind::Full, 1) => &[
            Clause::NotchFreeImpliesDeltaFree,
            Clause::BoundaryWitness,
            Clause::DeltaOnlyLow,
            Clause::DeltaOnlyIsolated,
            Clause::DeltaOnlyBoundaryWitness,
        ],
        (ModelKind::Full, _) => &[Clause::NotchFreeImpliesDeltaFree, Clause::HighThreshold, Clause::LowThreshold],
    }
}

/// The characterization at cell `i`, where `n` is the Notch block of a fixed
/// point. Only the modes of `i` and its neighbours are read.
fn cell_violation(g: &CellGraph, kind: ModelKind, k: usize, n: &[bool], modes: &[Mode], i: usize) -> Option<Clause> {
    let adj = g.adj(i);
    let mode = modes[i];
    match (kind, k) {
        (ModelKind::Reduced, 1) => {
            let borders = adj.iter().any(|&j| modes[j].notch_free());
            let witness = adj.iter().any(|&j| !modes[j].notch_free() && !n[j]);
            (!mode.notch_free() && borders && !witness).then_some(Clause::BoundaryWitness)
        }
        (ModelKind::Reduced, _) => {
            if mode.notch_free() {
                return None;
            }
            let zeros_out = adj.iter().filter(|&&j| !modes[j].notch_free() && !n[j]).count();
            let free = adj.iter().filter(|&&j| modes[j].notch_free()).count();
            threshold_violation(n[i], zeros_out, free, k)
        }
        (ModelKind::Full, 1) => {
            if mode == Mode::NotchOnly {
                return Some(Clause::NotchFreeImpliesDeltaFree);
            }
            if !mode.notch_free() {
                let borders = adj.iter().any(|&j| modes[j].notch_free());
                let witness = adj.iter().any(|&j| !modes[j].notch_free() && !n[j]);
                if borders && !witness {
                    return Some(Clause::BoundaryWitness);
                }
            }
            if mode == Mode::DeltaOnly {
                if n[i] {
                    return Some(Clause::DeltaOnlyLow);
                }
                if adj.iter().any(|&j| modes[j].delta_free()) {
                    return Some(Clause::DeltaOnlyIsolated);
                }
            }
            if adj.iter().any(|&j| modes[j] == Mode::DeltaOnly) && !adj.iter().any(|&j| !modes[j].delta_free() && !n[j])
            {
                return Some(Clause::DeltaOnlyBoundaryWitness);
            }
            None
        }
        (ModelKind::Full, _) => {
            if mode == Mode::NotchOnly {
                return Some(Clause::NotchFreeImpliesDeltaFree);
            }
            if mode.notch_free() {
                return None;
            }
            // Fixed Delta of a fixed point is high exactly when Notch is low.
            let highs_out = adj.iter().filter(|&&j| !modes[j].delta_free() && !n[j]).count();
            let free = adj.iter().filter(|&&j| modes[j].delta_free()).count();
            threshold_violation(n[i], highs_out, free, k)
        }
    }
}

fn threshold_violation(high: bool, active_fixed: usize, free: usize, k: usize) -> Option<Clause> {
    if high && active_fixed < k {
        Some(Clause::HighThreshold)
    } else if !high && active_fixed + free >= k {
        Some(Clause::LowThreshold)
    } else {
        None
    }
}

/// Checks `s` against the characterization for `net`.
pub fn certify(net: &Network, s: &Subspace) -> Result<TrapSpaceCertificate> {
    let k = threshold(net)?;
    if s.len() != net.dimension() {
        return Err(Error::DimensionMismatch { expected: net.dimension(), found: s.len() });
    }
    let end = net.descend(s.base())?.end();
    let mut cert = TrapSpaceCertificate {
        subspace: s.clone(),
        representative: None,
        checked: vec![Clause::ContainsFixedPoint],
        violation: None,
    };
    // A trap space is closed under transitions, so the descent from one of
    // its states ends inside it.
    if !s.contains(&end) {
        cert.violation = Some(Violation { clause: Clause::ContainsFixedPoint, cell: None });
        return Ok(cert);
    }
    let g = net.graph();
    let n = end.bits()[..g.len()].to_vec();
    let modes = modes_of(s, net.kind(), g.len());
    cert.representative = Some(end);
    cert.checked.extend_from_slice(clauses_for(net.kind(), k));
    cert.violation = (0..g.len()).find_map(|i| {
        cell_violation(g, net.kind(), k, &n, &modes, i).map(|clause| Violation { clause, cell: Some(i) })
    });
    Ok(cert)
}

/// Characterization check for `N^k`.
pub fn is_trap_space_reduced(g: &CellGraph, s: &Subspace, k: usize) -> Result<TrapSpaceCertificate> {
    certify(&Network::build(g, ModelKind::Reduced, k)?, s)
}

/// Characterization check for `F^k`.
pub fn is_trap_space_full(g: &CellGraph, s: &Subspace, k: usize) -> Result<TrapSpaceCertificate> {
    certify(&Network::build(g, ModelKind::Full, k)?, s)
}

/// `(x, !x)[I ∪ (I+L)]` from a reduced trap space `x[I]`.
pub fn lift_trap_space(g: &CellGraph, s: &Subspace, k: usize) -> Result<Subspace> {
    if !is_trap_space_reduced(g, s, k)?.holds() {
        return Err(Error::NotTrapSpace(s.to_string()));
    }
    Ok(s.lift())
}

/// The minimal trap space `κ(x)` containing `x`.
pub fn kappa(net: &Network, x: &State) -> Result<Subspace> {
    net.check_dimension(x)?;
    Ok(net.trap_closure(&Subspace::point(x)))
}

/// The minimal trap space containing every state of `s`.
pub fn minimal_trap_space_containing(net: &Network, s: &Subspace) -> Result<Subspace> {
    if s.len() != net.dimension() {
        return Err(Error::DimensionMismatch { expected: net.dimension(), found: s.len() });
    }
    Ok(net.trap_closure(s))
}

/// The cell set `I = H ∪ K ∪ J` of the closed form for the minimal trap
/// space around a pattern `n` of `N` perturbed on `h`.
pub fn perturbation_closure_cells(g: &CellGraph, n: &[bool], h: &CellSet) -> CellSet {
    let in_h = h.mask(g.len());
    let h0: Vec<usize> = h.iter().filter(|&i| !n[i]).collect();
    let h1: Vec<usize> = h.iter().filter(|&i| n[i]).collect();
    let mut low = vec![false; g.len()];
    for &i in &h0 {
        low[i] = true;
    }
    let mut k_cells = CellSet::new();
    for &i in &h1 {
        for &j in g.adj(i) {
            if !in_h[j] && !n[j] {
                k_cells.insert(j);
                low[j] = true;
            }
        }
    }
    let mut out = h.union(&k_cells);
    for i in 0..g.len() {
        if !low[i] {
            continue;
        }
        for &j in g.adj(i) {
            if !in_h[j] && g.adj(j).iter().all(|&m| low[m] || n[m]) {
                out.insert(j);
            }
        }
    }
    out
}

/// Minimal trap space containing `x[H]` (reduced) or `x[H ∪ (H+L)]` (full)
/// for a fixed point `x` of `N` or `F` (`k = 1`).
pub fn minimal_trap_space_around(net: &Network, x: &State, h: &CellSet) -> Result<Subspace> {
    if net.rule() != NotchRule::AtLeast(1) {
        return Err(Error::Unsupported("k = 1; use the closure for other thresholds".into()));
    }
    net.require_fixed_point(x)?;
    let g = net.graph();
    for c in h.iter() {
        g.check_cell(c)?;
    }
    let cells = perturbation_closure_cells(g, &x.bits()[..g.len()], h);
    let free: Vec<usize> = match net.kind() {
        ModelKind::Reduced => cells.iter().collect(),
        ModelKind::Full => cells.iter().chain(cells.iter().map(|c| c + g.len())).collect(),
    };
    Ok(Subspace::with_free_positions(x, free))
}

/// Maximal proper trap spaces (`k = 1`, `L >= 2`): `x[C ∖ ({i} ∪ S(i))]` for
/// each pattern `x` and each cell `i` with `x_i = 0`, lifted for the full
/// model. Sorted.
pub fn maximal_trap_spaces(g: &CellGraph, kind: ModelKind) -> Result<Vec<Subspace>> {
    if g.len() < 2 {
        return Err(Error::Precondition("maximal trap spaces need at least two cells".into()));
    }
    let mut found = BTreeSet::new();
    for p in patterns::fixed_points(g, ModelKind::Reduced, 1)?.patterns {
        for i in (0..g.len()).filter(|&i| !p.reduced.get(i)) {
            let free = (0..g.len()).filter(|&c| c != i && !g.has_edge(c, i));
            let s = Subspace::with_free_positions(&p.reduced, free);
            found.insert(match kind {
                ModelKind::Reduced => s,
                ModelKind::Full => s.lift(),
            });
        }
    }
    let all: Vec<Subspace> = found.into_iter().collect();
    Ok(all.iter().filter(|s| !all.iter().any(|t| t != *s && s.is_subset_of(t))).cloned().collect())
}

/// Every trap space of `net`, sorted. Requires `L <= limit`.
///
/// For each fixed point, searches per-cell modes depth first and checks the
/// clause of a cell as soon as its closed neighbourhood is assigned.
pub fn enumerate_trap_spaces(net: &Network, limit: usize) -> Result<Vec<Subspace>> {
    let k = threshold(net)?;
    let g = net.graph();
    let l = g.len();
    if l > limit {
        return Err(Error::LimitExceeded { dimension: l, limit });
    }
    let options: &[Mode] = match net.kind() {
        ModelKind::Reduced => &[Mode::Fixed, Mode::Free],
        ModelKind::Full => &[Mode::Fixed, Mode::DeltaOnly, Mode::Free],
    };
    // Cells whose clause becomes decidable once cell `t` is assigned.
    let mut ready = vec![Vec::new(); l];
    for i in 0..l {
        let last = g.adj(i).iter().copied().chain([i]).max().expect("non-empty");
        ready[last].push(i);
    }

    struct Search<'a> {
        g: &'a CellGraph,
        kind: ModelKind,
        k: usize,
        n: Vec<bool>,
        x: &'a State,
        options: &'a [Mode],
        ready: &'a [Vec<usize>],
        modes: Vec<Mode>,
        found: &'a mut BTreeSet<Subspace>,
    }

    impl Search<'_> {
        fn run(&mut self, t: usize) {
            if t == self.modes.len() {
                let l = self.modes.len();
                let free = (0..l).flat_map(|i| {
                    let m = self.modes[i];
                    let notch = m.notch_free().then_some(i);
                    let delta = (self.kind == ModelKind::Full && m.delta_free()).then_some(i + l);
                    notch.into_iter().chain(delta)
                });
                self.found.insert(Subspace::with_free_positions(self.x, free.collect::<Vec<_>>()));
                return;
            }
            for &m in self.options {
                self.modes[t] = m;
                let ok = self.ready[t]
                    .iter()
                    .all(|&i| cell_violation(self.g, self.kind, self.k, &self.n, &self.modes, i).is_none());
                if ok {
                    self.run(t + 1);
                }
            }
            self.modes[t] = Mode::Fixed;
        }
    }

    let mut found = BTreeSet::new();
    for x in patterns::fixed_points(g, net.kind(), k)?.states() {
        let mut search = Search {
            g,
            kind: net.kind(),
            k,
            n: x.bits()[..l].to_vec(),
            x: &x,
            options,
            ready: &ready,
            modes: vec![Mode::Fixed; l],
            found: &mut found,
        };
        search.run(0);
    }
    Ok(found.into_iter().collect())
}

/// Cover relation of `⊆` among `spaces`: pairs `(larger, smaller)` of
/// indices with nothing strictly between them.
pub fn hasse_edges(spaces: &[Subspace]) -> Vec<(usize, usize)> {
    let below = |a: usize, b: usize| a != b && spaces[a].is_subset_of(&spaces[b]);
    let mut edges = Vec::new();
    for big in 0..spaces.len() {
        for small in 0..spaces.len() {
            if below(small, big) && !(0..spaces.len()).any(|mid| below(small, mid) && below(mid, big)) {
                edges.push((big, small));
            }
        }
    }
    edges
}

/// Graphviz rendering of the Hasse diagram, larger spaces on top.
pub fn hasse_dot(spaces: &[Subspace]) -> String {
    let mut out = String::from("digraph trapspaces {\n  rankdir=TB;\n");
    for s in spaces {
        let _ = writeln!(out, "  \"{s}\";");
    }
    for (big, small) in hasse_edges(spaces) {
        let _ = writeln!(out, "  \"{}\" -> \"{}\";", spaces[big], spaces[small]);
    }
    out.push_str("}\n");
    out
}
