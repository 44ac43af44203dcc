//! `N^k` as a strict threshold network, and its energy function.
//!
//! With `A_ij = -1` for neighbours (0 otherwise) and
//! `b_i = -|S(i)| + k - 1/2`, cell `i` turns on iff `(Ax)_i > b_i` and off
//! iff `(Ax)_i < b_i`; equality never occurs since `b_i` is a proper
//! half-integer. The energy `E(x) = -1/2 xᵀAx + bᵀx` then drops by at least
//! `1/2` along every asynchronous transition, so `AD_{N^k}` is acyclic.
//! All arithmetic is exact.

use num_rational::Ratio;

use crate::cellgraph::CellGraph;
use crate::error::{Error, Result};
use crate::netcore::oracle::{self, Stg};
use crate::netcore::{ModelKind, Network, State};

pub type Rational = Ratio<i64>;

/// The pair `(A, b)` for a graph and threshold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdParams {
    a: Vec<Vec<i64>>,
    b: Vec<Rational>,
}

impl ThresholdParams {
    pub fn cells(&self) -> usize {
        self.b.len()
    }

    /// Symmetric, zero diagonal, `-1` exactly on edges.
    pub fn a(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    fn check(&self, x: &State) -> Result<()> {
        if x.len() == self.cells() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.cells(), found: x.len() })
        }
    }

    /// `(Ax)_i - b_i`; never zero on binary states.
    pub fn margin(&self, x: &State, i: usize) -> Result<Rational> {
        self.check(x)?;
        let ax: i64 = (0..self.cells()).filter(|&j| x.get(j)).map(|j| self.a[i][j]).sum();
        Ok(Rational::from_integer(ax) - self.b[i])
    }

    /// The strict threshold update `f_i(x)`.
    pub fn update(&self, x: &State, i: usize) -> Result<bool> {
        Ok(self.margin(x, i)? > Rational::from_integer(0))
    }
}

/// Builds `(A, b)` for `N^k` on `g`.
pub fn build_threshold_params(g: &CellGraph, k: usize) -> Result<ThresholdParams> {
    if k < 1 {
        return Err(Error::InvalidThreshold(k));
    }
    let l = g.len();
    let mut a = vec![vec![0; l]; l];
    for &(i, j) in g.edges() {
        a[i][j] = -1;
        a[j][i] = -1;
    }
    let b = (0..l).map(|i| Rational::new(2 * (k as i64 - g.degree(i) as i64) - 1, 2)).collect();
    Ok(ThresholdParams { a, b })
}

/// `E(x) = -1/2 xᵀAx + bᵀx`.
pub fn energy(p: &ThresholdParams, x: &State) -> Result<Rational> {
    p.check(x)?;
    let ones: Vec<usize> = (0..p.cells()).filter(|&i| x.get(i)).collect();
    let quad: i64 = ones.iter().flat_map(|&i| ones.iter().map(move |&j| p.a[i][j])).sum();
    let linear: Rational = ones.iter().map(|&i| p.b[i]).sum();
    Ok(Rational::new(-quad, 2) + linear)
}

/// Outcome of an exhaustive energy sweep over `AD_{N^k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnergyReport {
    pub cells: usize,
    pub k: usize,
    pub states: u64,
    pub transitions: u64,
    /// Transitions along which the energy did not strictly decrease.
    pub violations: u64,
    /// Smallest observed drop `E(x) - E(x')`; `None` without transitions.
    pub min_gap: Option<Rational>,
    /// Transitions where the strict threshold rule disagrees with `N^k`.
    pub rule_mismatches: u64,
    /// Independent directed-cycle search on the transition graph.
    pub has_cycle: bool,
}

/// Checks every asynchronous transition of `N^k` on `g` for strict energy
/// decrease. Requires `L <= limit`.
pub fn verify_energy_decrease(g: &CellGraph, k: usize, limit: usize) -> Result<EnergyReport> {
    let params = build_threshold_params(g, k)?;
    let net = Network::build(g, ModelKind::Reduced, k)?;
    let stg = Stg::build(&net, limit.min(oracle::MAX_LIMIT))?;
    let l = g.len();
    let energies: Vec<Rational> =
        (0..stg.state_count()).map(|x| energy(&params, &State::from_index(x, l))).collect::<Result<_>>()?;
    let mut report = EnergyReport {
        cells: l,
        k,
        states: stg.state_count(),
        transitions: 0,
        violations: 0,
        min_gap: None,
        rule_mismatches: 0,
        has_cycle: stg.has_cycle(),
    };
    for x in 0..stg.state_count() {
        let sx = State::from_index(x, l);
        for i in 0..l {
            if params.update(&sx, i)? != (stg.image(x) >> i & 1 == 1) {
                report.rule_mismatches += 1;
            }
        }
        for y in stg.successors(x) {
            report.transitions += 1;
            let gap = energies[x as usize] - energies[y as usize];
            if gap <= Rational::from_integer(0) {
                report.violations += 1;
            }
            report.min_gap = Some(report.min_gap.map_or(gap, |m| m.min(gap)));
        }
    }
    Ok(report)
}
