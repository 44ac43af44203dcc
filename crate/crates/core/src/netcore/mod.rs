//! States, subspaces and the Delta-Notch network family.
//!
//! A full-model state on `L` cells has `2L` positions: positions `0..L` hold
//! Notch, positions `L..2L` hold Delta. Text form lists position 0 first, so
//! `"0110"` on two cells means `n = (0, 1)`, `d = (1, 0)`.

mod network;
pub mod oracle;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use network::{ModelKind, Network, NotchRule};

/// A Boolean state vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct State {
    bits: Vec<bool>,
}

impl State {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(len: usize) -> Self {
        Self { bits: vec![false; len] }
    }

    pub fn ones(len: usize) -> Self {
        Self { bits: vec![true; len] }
    }

    /// Full-model state `(notch, delta)`.
    pub fn from_blocks(notch: &[bool], delta: &[bool]) -> Self {
        Self { bits: notch.iter().chain(delta).copied().collect() }
    }

    pub fn parse(text: &str) -> Result<Self> {
        text.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidState(text.to_string())),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::from_bits)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, pos: usize) -> bool {
        self.bits[pos]
    }

    pub fn set(&mut self, pos: usize, value: bool) {
        self.bits[pos] = value;
    }

    pub fn flip(&mut self, pos: usize) {
        self.bits[pos] = !self.bits[pos];
    }

    /// Copy with position `pos` negated.
    pub fn flipped(&self, pos: usize) -> State {
        let mut s = self.clone();
        s.flip(pos);
        s
    }

    /// Bitwise negation.
    pub fn negated(&self) -> State {
        Self { bits: self.bits.iter().map(|b| !b).collect() }
    }

    /// Packs the state into an integer, bit `p` holding position `p`.
    pub fn index(&self) -> u64 {
        assert!(self.len() <= 64, "state too long to index");
        self.bits.iter().enumerate().fold(0, |acc, (p, &b)| acc | (u64::from(b) << p))
    }

    pub fn from_index(index: u64, len: usize) -> Self {
        Self { bits: (0..len).map(|p| index >> p & 1 == 1).collect() }
    }

    /// Notch block of a full-model state on `cells` cells.
    pub fn notch(&self, cells: usize) -> &[bool] {
        &self.bits[..cells]
    }

    /// Delta block of a full-model state on `cells` cells.
    pub fn delta(&self, cells: usize) -> &[bool] {
        &self.bits[cells..]
    }

    /// Reduced state `n` to the full state `(n, !n)`.
    pub fn lift(&self) -> State {
        let delta: Vec<bool> = self.bits.iter().map(|b| !b).collect();
        Self::from_blocks(&self.bits, &delta)
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for State {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// The subspace `x[I]`: all states agreeing with `x` outside the free set `I`.
///
/// Stored canonically, with the base zeroed on free positions, so derived
/// equality is set equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subspace {
    base: State,
    free: Vec<bool>,
}

impl Subspace {
    pub fn new(base: &State, free: Vec<bool>) -> Self {
        assert_eq!(base.len(), free.len(), "free mask length must match the state");
        let bits = base.bits.iter().zip(&free).map(|(&b, &f)| b && !f).collect();
        Self { base: State::from_bits(bits), free }
    }

    /// Subspace with free positions given as a list.
    pub fn with_free_positions(base: &State, free: impl IntoIterator<Item = usize>) -> Self {
        let mut mask = vec![false; base.len()];
        for p in free {
            mask[p] = true;
        }
        Self::new(base, mask)
    }

    pub fn point(state: &State) -> Self {
        Self::new(state, vec![false; state.len()])
    }

    pub fn full(len: usize) -> Self {
        Self::new(&State::zeros(len), vec![true; len])
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(text.len());
        let mut free = Vec::with_capacity(text.len());
        for c in text.chars() {
            let (b, f) = match c {
                '0' => (false, false),
                '1' => (true, false),
                '*' => (false, true),
                _ => return Err(Error::InvalidSubspace(text.to_string())),
            };
            bits.push(b);
            free.push(f);
        }
        Ok(Self::new(&State::from_bits(bits), free))
    }

    pub fn len(&self) -> usize {
        self.free.len()
    }

    pub fn is_empty(&self) -> bool {
        self.free.is_empty()
    }

    /// Canonical base (zero on free positions).
    pub fn base(&self) -> &State {
        &self.base
    }

    pub fn free_mask(&self) -> &[bool] {
        &self.free
    }

    pub fn is_free(&self, pos: usize) -> bool {
        self.free[pos]
    }

    pub fn free_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.free.iter().enumerate().filter(|(_, &f)| f).map(|(p, _)| p)
    }

    pub fn free_count(&self) -> usize {
        self.free.iter().filter(|&&f| f).count()
    }

    pub fn is_point(&self) -> bool {
        self.free_count() == 0
    }

    pub fn is_full(&self) -> bool {
        self.free.iter().all(|&f| f)
    }

    pub fn contains(&self, x: &State) -> bool {
        x.len() == self.len() && (0..self.len()).all(|p| self.free[p] || self.base.get(p) == x.get(p))
    }

    /// `self ⊆ other` as state sets.
    pub fn is_subset_of(&self, other: &Subspace) -> bool {
        self.len() == other.len()
            && (0..self.len()).all(|p| other.free[p] || (!self.free[p] && self.base.get(p) == other.base.get(p)))
    }

    /// Enlarges the free set by `pos`.
    pub fn freeing(&self, pos: usize) -> Subspace {
        let mut free = self.free.clone();
        free[pos] = true;
        Subspace::new(&self.base, free)
    }

    /// All member states, in increasing index order of the free positions.
    /// Intended for small subspaces.
    pub fn states(&self) -> impl Iterator<Item = State> + '_ {
        let free: Vec<usize> = self.free_positions().collect();
        assert!(free.len() < 64, "subspace too large to enumerate");
        (0..1u64 << free.len()).map(move |m| {
            let mut s = self.base.clone();
            for (bit, &p) in free.iter().enumerate() {
                s.set(p, m >> bit & 1 == 1);
            }
            s
        })
    }

    /// Cells whose Notch position is free, for a full-model subspace (`I_N`).
    pub fn free_notch_cells(&self, cells: usize) -> Vec<bool> {
        self.free[..cells].to_vec()
    }

    /// Cells whose Delta position is free, for a full-model subspace (`I_D`).
    pub fn free_delta_cells(&self, cells: usize) -> Vec<bool> {
        self.free[cells..].to_vec()
    }

    /// Full-model subspace `(x, !x)[I ∪ (I+L)]` from the reduced `x[I]`.
    pub fn lift(&self) -> Subspace {
        let free: Vec<bool> = self.free.iter().chain(&self.free).copied().collect();
        Subspace::new(&self.base.lift(), free)
    }

    /// Projection of a full-model subspace onto its Notch block.
    pub fn project_notch(&self, cells: usize) -> Subspace {
        Subspace::new(&State::from_bits(self.base.notch(cells).to_vec()), self.free[..cells].to_vec())
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in 0..self.len() {
            let c = match (self.free[p], self.base.get(p)) {
                (true, _) => "*",
                (false, true) => "1",
                (false, false) => "0",
            };
            f.write_str(c)?;
        }
        Ok(())
    }
}

impl FromStr for Subspace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// An edge `(x, x̄^i)` of the asynchronous dynamics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub source: State,
    pub flipped: usize,
}

impl Transition {
    pub fn target(&self) -> State {
        self.source.flipped(self.flipped)
    }
}

/// A sequence of single-position flips certifying an asynchronous path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathWitness {
    pub start: State,
    pub flips: Vec<usize>,
}

impl PathWitness {
    pub fn empty(start: &State) -> Self {
        Self { start: start.clone(), flips: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.flips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flips.is_empty()
    }

    /// Endpoint obtained by applying the flips without checking them.
    pub fn end(&self) -> State {
        let mut s = self.start.clone();
        for &p in &self.flips {
            s.flip(p);
        }
        s
    }

    /// Applies the flips one by one, checking that each is an enabled
    /// transition of `net`; returns the endpoint.
    pub fn replay(&self, net: &Network) -> Result<State> {
        net.check_dimension(&self.start)?;
        let mut s = self.start.clone();
        for (step, &p) in self.flips.iter().enumerate() {
            if p >= s.len() || net.component(p, &s) == s.get(p) {
                return Err(Error::WitnessReplay { step, position: p });
            }
            s.flip(p);
        }
        Ok(s)
    }

    /// Every intermediate state, start and end included.
    pub fn states(&self) -> Vec<State> {
        let mut out = vec![self.start.clone()];
        let mut s = self.start.clone();
        for &p in &self.flips {
            s.flip(p);
            out.push(s.clone());
        }
        out
    }

    pub fn extend(&mut self, flips: impl IntoIterator<Item = usize>) {
        self.flips.extend(flips);
    }
}
