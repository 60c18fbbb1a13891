//! Sublattice splitting `Q = Q₁ + Q₂` and the two-step cohomology
//! `H_{Q₂}(H_{Q₁})`.
//!
//! `Q₁` keeps the insertions on the sites of `S₁`, `Q₂` those on the
//! complement; amplitudes still see the whole configuration. A configuration
//! with `f₁` particles on `S₁` and `f₂` on `S₂` sits at bigrade `(f₁, f₂)`.
//! Both pieces square to zero and anticommute, since the pair terms of `Q²`
//! that cancel against each other insert on the same two sites.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::cohomology::betti_numbers;
use crate::error::{Error, Result};
use crate::linalg::{induced_quotient_map, kernel_basis, rank, Subquotient};
use crate::sparse::SparseMatrix;
use crate::state_space::{enumerate_basis, low_mask, ChainSpec, Configuration};
use crate::supercharge::{check_scheme, insertion_terms};
use crate::{QMatrix, QScheme, Rational};

/// Choice of the sublattice `S₁`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitPreset {
    /// Sites `1..=ℓ+2`.
    Prefix,
    /// Sites `1, ℓ+3, 2ℓ+5, …`, every `(ℓ+2)`-th site starting at 1.
    ThreeRule,
}

impl SplitPreset {
    pub fn name(self) -> &'static str {
        match self {
            SplitPreset::Prefix => "prefix",
            SplitPreset::ThreeRule => "three-rule",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "prefix" => Some(SplitPreset::Prefix),
            "three-rule" => Some(SplitPreset::ThreeRule),
            _ => None,
        }
    }

    /// Site mask of `S₁` (bit `i-1` for site `i`).
    pub fn mask(self, spec: &ChainSpec) -> u64 {
        let ell = spec.max_cluster;
        match self {
            SplitPreset::Prefix => low_mask((ell + 2).min(spec.n_sites)),
            SplitPreset::ThreeRule => (1..=spec.n_sites)
                .filter(|s| (s - 1) % (ell + 2) == 0)
                .fold(0, |m, s| m | 1 << (s - 1)),
        }
    }
}

pub type Bigrade = (usize, usize);

/// The bigraded pieces of `Q` for one split.
#[derive(Clone, Debug)]
pub struct BigradedComplex {
    pub spec: ChainSpec,
    pub s1: u64,
    /// Sorted configurations per bigrade; only nonempty bigrades are stored.
    pub bases: BTreeMap<Bigrade, Vec<Configuration>>,
    /// `(f₁, f₂) → (f₁+1, f₂)`.
    pub q1: BTreeMap<Bigrade, QMatrix>,
    /// `(f₁, f₂) → (f₁, f₂+1)`.
    pub q2: BTreeMap<Bigrade, QMatrix>,
}

pub fn bigrade(s1: u64, config: Configuration) -> Bigrade {
    (
        (config.0 & s1).count_ones() as usize,
        (config.0 & !s1).count_ones() as usize,
    )
}

pub fn split(spec: &ChainSpec, s1: u64, scheme: &QScheme) -> Result<BigradedComplex> {
    check_scheme(spec, scheme)?;
    if s1 & !spec.full_mask() != 0 {
        return Err(Error::Precondition(
            "S₁ contains sites outside the chain".into(),
        ));
    }
    let basis = enumerate_basis(spec)?;
    let mut bases: BTreeMap<Bigrade, Vec<Configuration>> = BTreeMap::new();
    for (_, grade) in basis.iter() {
        for c in grade {
            bases.entry(bigrade(s1, *c)).or_default().push(*c);
        }
    }
    for v in bases.values_mut() {
        v.sort_unstable();
    }
    let empty = Vec::new();
    let block = |(f1, f2): Bigrade, target: Bigrade, mask: u64| -> QMatrix {
        let source = &bases[&(f1, f2)];
        let tgt = bases.get(&target).unwrap_or(&empty);
        let triplets = source.iter().enumerate().flat_map(|(col, sigma)| {
            insertion_terms(spec, scheme, *sigma, mask).map(move |(tau, amp)| {
                let row = tgt
                    .binary_search(&tau)
                    .expect("insertion target has the raised bigrade");
                (row, col, amp)
            })
        });
        SparseMatrix::from_triplets(tgt.len(), source.len(), triplets.collect::<Vec<_>>())
    };
    let keys: Vec<Bigrade> = bases.keys().copied().collect();
    let s2 = spec.full_mask() & !s1;
    let q1 = keys
        .par_iter()
        .map(|&(a, b)| ((a, b), block((a, b), (a + 1, b), s1)))
        .collect();
    let q2 = keys
        .par_iter()
        .map(|&(a, b)| ((a, b), block((a, b), (a, b + 1), s2)))
        .collect();
    Ok(BigradedComplex {
        spec: *spec,
        s1,
        bases,
        q1,
        q2,
    })
}

/// Outcome of the exact `Q₁² = Q₂² = {Q₁, Q₂} = 0` check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AnticommutationCheck {
    pub q1_squared_zero: bool,
    pub q2_squared_zero: bool,
    pub anticommute: bool,
}

impl AnticommutationCheck {
    pub fn ok(&self) -> bool {
        self.q1_squared_zero && self.q2_squared_zero && self.anticommute
    }
}

impl BigradedComplex {
    pub fn dim(&self, g: Bigrade) -> usize {
        self.bases.get(&g).map_or(0, Vec::len)
    }

    fn block(map: &BTreeMap<Bigrade, QMatrix>, g: Bigrade) -> Option<&QMatrix> {
        map.get(&g)
    }

    pub fn check_anticommutation(&self) -> AnticommutationCheck {
        let mut out = AnticommutationCheck {
            q1_squared_zero: true,
            q2_squared_zero: true,
            anticommute: true,
        };
        for &(a, b) in self.bases.keys() {
            let q1 = &self.q1[&(a, b)];
            let q2 = &self.q2[&(a, b)];
            if let Some(next) = Self::block(&self.q1, (a + 1, b)) {
                out.q1_squared_zero &= next.mul(q1).is_zero();
            }
            if let Some(next) = Self::block(&self.q2, (a, b + 1)) {
                out.q2_squared_zero &= next.mul(q2).is_zero();
            }
            let one_two = Self::block(&self.q1, (a, b + 1)).map(|m| m.mul(q2));
            let two_one = Self::block(&self.q2, (a + 1, b)).map(|m| m.mul(q1));
            let sum_zero = match (one_two, two_one) {
                (Some(x), Some(y)) => x.add(&y).is_zero(),
                (Some(x), None) | (None, Some(x)) => x.is_zero(),
                (None, None) => true,
            };
            out.anticommute &= sum_zero;
        }
        out
    }

    /// `ker Q₁ / im Q₁` at every bigrade.
    pub fn h_q1(&self) -> Result<BTreeMap<Bigrade, Subquotient<Rational>>> {
        self.bases
            .par_iter()
            .map(|(&(a, b), basis)| {
                let ker = kernel_basis(&self.q1[&(a, b)]);
                let im = if a > 0 {
                    self.q1
                        .get(&(a - 1, b))
                        .map(|m| m.cols())
                        .unwrap_or_default()
                } else {
                    Vec::new()
                };
                Ok(((a, b), Subquotient::new(basis.len(), ker, im)?))
            })
            .collect()
    }

    /// Dimensions of `H_{Q₂}(H_{Q₁})` at every bigrade.
    pub fn h21(&self) -> Result<H21Table> {
        let hq1 = self.h_q1()?;
        // induced Q₂ along f₂ for each bigrade with a nonzero source quotient
        let induced: BTreeMap<Bigrade, usize> = hq1
            .par_iter()
            .map(|(&(a, b), src)| {
                let r = match hq1.get(&(a, b + 1)) {
                    Some(tgt) if src.dim() > 0 && tgt.dim() > 0 => {
                        rank(&induced_quotient_map(&self.q2[&(a, b)], src, tgt)?)
                    }
                    Some(tgt) => {
                        // still validates that Q₂ respects the quotients
                        induced_quotient_map(&self.q2[&(a, b)], src, tgt)?;
                        0
                    }
                    None => 0,
                };
                Ok(((a, b), r))
            })
            .collect::<Result<_>>()?;
        let cells = hq1
            .iter()
            .map(|(&(a, b), sq)| {
                let out_rank = induced[&(a, b)];
                let in_rank = if b > 0 {
                    induced.get(&(a, b - 1)).copied().unwrap_or(0)
                } else {
                    0
                };
                H21Cell {
                    f1: a,
                    f2: b,
                    dim: self.dim((a, b)),
                    h_q1: sq.dim(),
                    h21: sq.dim() - out_rank - in_rank,
                }
            })
            .collect();
        Ok(H21Table { cells })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct H21Cell {
    pub f1: usize,
    pub f2: usize,
    /// `dim V_{f₁,f₂}`.
    pub dim: usize,
    pub h_q1: usize,
    pub h21: usize,
}

/// Populated bigrade grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H21Table {
    pub cells: Vec<H21Cell>,
}

impl H21Table {
    pub fn get(&self, f1: usize, f2: usize) -> usize {
        self.cells
            .iter()
            .find(|c| c.f1 == f1 && c.f2 == f2)
            .map_or(0, |c| c.h21)
    }

    /// `Σ_{f₁+f₂=f} h21(f₁, f₂)` for `f = 0..len`.
    pub fn totals(&self, len: usize) -> Vec<usize> {
        let mut out = vec![0; len];
        for c in &self.cells {
            if c.f1 + c.f2 < len {
                out[c.f1 + c.f2] += c.h21;
            }
        }
        out
    }

    /// `f₁` values carrying nonzero entries.
    pub fn rows(&self) -> Vec<usize> {
        let mut rows: Vec<usize> = self
            .cells
            .iter()
            .filter(|c| c.h21 > 0)
            .map(|c| c.f1)
            .collect();
        rows.dedup();
        rows
    }
}

/// True when all nonzero dimensions share one `f₁`; vacuously true when all
/// vanish.
pub fn one_row_check(table: &H21Table) -> bool {
    table.rows().len() <= 1
}

/// Tic-tac-toe verification of one split.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TicTacToeReport {
    pub spec: ChainSpec,
    pub split: String,
    pub s1_sites: Vec<usize>,
    pub anticommutation: AnticommutationCheck,
    pub one_row: bool,
    pub row: Option<usize>,
    pub totals: Vec<usize>,
    pub betti: Vec<usize>,
    /// `one_row` and `totals == betti`.
    pub ok: bool,
    pub grid: H21Table,
}

pub fn tic_tac_toe(
    spec: &ChainSpec,
    s1: u64,
    name: &str,
    scheme: &QScheme,
) -> Result<TicTacToeReport> {
    let complex = split(spec, s1, scheme)?;
    let anticommutation = complex.check_anticommutation();
    if !anticommutation.ok() {
        return Err(Error::Structural(format!(
            "{spec}: split {name} does not give a double complex"
        )));
    }
    let grid = complex.h21()?;
    let betti = betti_numbers(&enumerate_basis(spec)?, scheme)?;
    let totals = grid.totals(betti.len());
    let rows = grid.rows();
    let one_row = rows.len() <= 1;
    Ok(TicTacToeReport {
        spec: *spec,
        split: name.to_string(),
        s1_sites: (1..=spec.n_sites)
            .filter(|s| (s1 >> (s - 1)) & 1 == 1)
            .collect(),
        anticommutation,
        one_row,
        row: rows.first().copied(),
        ok: one_row && totals == betti,
        totals,
        betti,
        grid,
    })
}

pub fn tic_tac_toe_preset(
    spec: &ChainSpec,
    preset: SplitPreset,
    scheme: &QScheme,
) -> Result<TicTacToeReport> {
    tic_tac_toe(spec, preset.mask(spec), preset.name(), scheme)
}
