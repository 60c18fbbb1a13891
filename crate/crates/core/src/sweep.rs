//! Verification sweeps over families of chains.
//!
//! Items are evaluated in parallel and reported in canonical `(ℓ, N,
//! boundary)` order, so output depends only on the configuration.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::cohomology::{
    full_report, parameter_independence, CohomologyReport, IndependenceResult, ReportOptions,
};
use crate::cut_paste::{verify_dimension_shift, ShiftReport};
use crate::double_complex::{tic_tac_toe_preset, SplitPreset, TicTacToeReport};
use crate::error::Result;
use crate::hamiltonian::{build_all_h, numeric_zero_modes, DEFAULT_TOL, NUMERIC_LIMIT};
use crate::oracle::{
    medium_open, medium_ring, ring, short_open, short_open_unclamped, short_ring_stated,
};
use crate::state_space::{enumerate_basis, Boundary, ChainSpec};
use crate::QScheme;

/// Version of the JSON layout of [`SweepReport`].
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundarySelection {
    Periodic,
    Free,
    Special(usize, usize),
    /// Every `(c1, cN) ∈ [0, ℓ]²`.
    AllSpecial,
}

/// Valid specs in canonical order; special caps above `ℓ` are skipped.
pub fn specs(
    ells: RangeInclusive<usize>,
    sites: RangeInclusive<usize>,
    boundaries: &[BoundarySelection],
) -> Vec<ChainSpec> {
    let mut out = BTreeSet::new();
    for ell in ells {
        for n in sites.clone() {
            for b in boundaries {
                let found: Vec<Boundary> = match *b {
                    BoundarySelection::Periodic => vec![Boundary::Periodic],
                    BoundarySelection::Free => vec![Boundary::Special { c1: ell, cn: ell }],
                    BoundarySelection::Special(c1, cn) => vec![Boundary::Special { c1, cn }],
                    BoundarySelection::AllSpecial => (0..=ell)
                        .flat_map(|c1| (0..=ell).map(move |cn| Boundary::Special { c1, cn }))
                        .collect(),
                };
                for boundary in found {
                    if let Ok(spec) = ChainSpec::new(n, ell, boundary) {
                        out.insert(spec.sort_key());
                    }
                }
            }
        }
    }
    out.into_iter()
        .map(|(ell, n, boundary)| ChainSpec {
            n_sites: n,
            max_cluster: ell,
            boundary,
        })
        .collect()
}

#[derive(Clone, Debug, Default)]
pub struct SweepConfig {
    pub specs: Vec<ChainSpec>,
    pub check_hamiltonian: bool,
    pub numeric: bool,
    pub ladder: bool,
    pub ttt: Option<SplitPreset>,
    /// Random coupling trials per spec.
    pub random_couplings: Option<usize>,
    pub seed: u64,
}

/// Numeric zero modes of `H_f` against the exact count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NumericRow {
    pub f: usize,
    pub dim: usize,
    pub numeric: Option<usize>,
    pub exact: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NumericCheck {
    pub tol: String,
    pub limit: usize,
    pub rows: Vec<NumericRow>,
    pub checked: usize,
    pub skipped: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpecResult {
    pub spec: ChainSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<CohomologyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric: Option<NumericCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ladder: Option<ShiftReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ttt: Option<TicTacToeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub independence: Option<IndependenceResult>,
    pub errors: Vec<String>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub seed: u64,
    pub items: Vec<SpecResult>,
    pub mismatches: Vec<String>,
    pub ok: bool,
}

pub fn numeric_check(spec: &ChainSpec, exact: &[usize], tol: f64) -> Result<NumericCheck> {
    let basis = enumerate_basis(spec)?;
    let hs = build_all_h(&basis, &QScheme::all_ones(spec.max_cluster))?;
    let rows: Vec<NumericRow> = hs
        .par_iter()
        .enumerate()
        .map(|(f, h)| NumericRow {
            f,
            dim: h.n_rows(),
            numeric: (h.n_rows() <= NUMERIC_LIMIT)
                .then(|| numeric_zero_modes(h, tol).expect("block within limit")),
            exact: exact[f],
        })
        .collect();
    let checked = rows.iter().filter(|r| r.numeric.is_some()).count();
    let ok = rows.iter().all(|r| r.numeric.is_none_or(|n| n == r.exact));
    Ok(NumericCheck {
        tol: format!("{tol:e}"),
        limit: NUMERIC_LIMIT,
        skipped: rows.len() - checked,
        checked,
        rows,
        ok,
    })
}

fn run_one(spec: &ChainSpec, cfg: &SweepConfig) -> SpecResult {
    let scheme = QScheme::all_ones(spec.max_cluster);
    let mut errors = Vec::new();
    let mut ok = true;
    let opts = ReportOptions {
        check_hamiltonian: cfg.check_hamiltonian,
        seed: cfg.seed,
    };
    let cohomology = match full_report(spec, &scheme, opts) {
        Ok(r) => {
            ok &= r.oracle_ok && r.witten == r.euler && r.hamiltonian_ok != Some(false);
            Some(r)
        }
        Err(e) => {
            errors.push(format!("cohomology: {e}"));
            None
        }
    };
    let numeric = match (cfg.numeric, &cohomology) {
        (true, Some(r)) => {
            let exact: Vec<usize> = r
                .grades
                .iter()
                .map(|g| g.kernel_h.unwrap_or(g.betti))
                .collect();
            match numeric_check(spec, &exact, DEFAULT_TOL) {
                Ok(n) => {
                    ok &= n.ok;
                    Some(n)
                }
                Err(e) => {
                    errors.push(format!("numeric: {e}"));
                    None
                }
            }
        }
        _ => None,
    };
    let ladder = if cfg.ladder && spec.n_sites > 2 * spec.max_cluster + 2 {
        match verify_dimension_shift(spec, &scheme) {
            Ok(r) => {
                ok &= r.shift_ok;
                Some(r)
            }
            Err(e) => {
                errors.push(format!("ladder: {e}"));
                None
            }
        }
    } else {
        None
    };
    let ttt_applies =
        |p: SplitPreset| p != SplitPreset::Prefix || spec.n_sites > 2 * spec.max_cluster + 2;
    let ttt = match cfg.ttt {
        Some(p) if ttt_applies(p) => match tic_tac_toe_preset(spec, p, &scheme) {
            Ok(r) => {
                ok &= r.ok;
                Some(r)
            }
            Err(e) => {
                errors.push(format!("ttt: {e}"));
                None
            }
        },
        _ => None,
    };
    let independence = cfg
        .random_couplings
        .map(|k| parameter_independence(spec, k, cfg.seed));
    let independence = match independence {
        Some(Ok(r)) => {
            ok &= r.ok;
            Some(r)
        }
        Some(Err(e)) => {
            errors.push(format!("independence: {e}"));
            None
        }
        None => None,
    };
    ok &= errors.is_empty();
    SpecResult {
        spec: *spec,
        cohomology,
        numeric,
        ladder,
        ttt,
        independence,
        errors,
        ok,
    }
}

pub fn run_sweep(cfg: &SweepConfig) -> SweepReport {
    let items: Vec<SpecResult> = cfg.specs.par_iter().map(|s| run_one(s, cfg)).collect();
    let mismatches: Vec<String> = items
        .iter()
        .filter(|i| !i.ok)
        .map(describe_failure)
        .collect();
    SweepReport {
        schema_version: SCHEMA_VERSION,
        seed: cfg.seed,
        ok: mismatches.is_empty(),
        items,
        mismatches,
    }
}

fn describe_failure(item: &SpecResult) -> String {
    let mut parts = Vec::new();
    if let Some(r) = &item.cohomology {
        if !r.oracle_ok {
            let bad: Vec<String> = r
                .oracle
                .iter()
                .filter(|o| !o.ok)
                .map(|o| {
                    format!(
                        "f={} predicted {} computed {}",
                        o.f, o.predicted, o.computed
                    )
                })
                .collect();
            parts.push(format!("oracle [{}]", bad.join("; ")));
        }
        if r.witten != r.euler {
            parts.push(format!("witten {} != euler {}", r.witten, r.euler));
        }
        if r.hamiltonian_ok == Some(false) {
            parts.push("ker H != betti".into());
        }
    }
    if item.numeric.as_ref().is_some_and(|n| !n.ok) {
        parts.push("numeric zero modes".into());
    }
    if item.ladder.as_ref().is_some_and(|l| !l.shift_ok) {
        parts.push("dimension shift".into());
    }
    if item.ttt.as_ref().is_some_and(|t| !t.ok) {
        parts.push("tic-tac-toe".into());
    }
    if item.independence.as_ref().is_some_and(|i| !i.ok) {
        parts.push("parameter independence".into());
    }
    parts.extend(item.errors.iter().cloned());
    format!("{}: {}", item.spec, parts.join(", "))
}

impl SweepReport {
    /// Aligned text table, one line per spec.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# schema_version={} seed={}\n",
            self.schema_version, self.seed
        );
        out.push_str(&format!(
            "{:<4} {:<4} {:<16} {:<28} {:<7} {:<6}\n",
            "ell", "N", "boundary", "betti (f:dim)", "witten", "status"
        ));
        for item in &self.items {
            let betti = item
                .cohomology
                .as_ref()
                .map(|r| {
                    r.nonzero()
                        .iter()
                        .map(|(f, b)| format!("{f}:{b}"))
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .unwrap_or_else(|| "-".into());
            let witten = item
                .cohomology
                .as_ref()
                .map_or("-".into(), |r| r.witten.to_string());
            out.push_str(&format!(
                "{:<4} {:<4} {:<16} {:<28} {:<7} {:<6}\n",
                item.spec.max_cluster,
                item.spec.n_sites,
                item.spec.boundary_label(),
                if betti.is_empty() {
                    "none".into()
                } else {
                    betti
                },
                witten,
                if item.ok { "OK" } else { "FAIL" }
            ));
        }
        for m in &self.mismatches {
            out.push_str(&format!("MISMATCH {m}\n"));
        }
        out.push_str(&format!(
            "# {} specs, {} mismatches\n",
            self.items.len(),
            self.mismatches.len()
        ));
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", CohomologyReport::csv_header());
        for item in &self.items {
            if let Some(r) = &item.cohomology {
                out.push_str(&r.to_csv_rows());
            }
        }
        out
    }
}

/// Computed versus predicted cohomology on the `(c1, cN)` grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionCell {
    pub c1: usize,
    pub cn: usize,
    pub predicted: Vec<(usize, usize)>,
    pub computed: Vec<(usize, usize)>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionDiff {
    pub ell: usize,
    pub n_sites: usize,
    pub cells: Vec<RegionCell>,
    pub ok: bool,
}

pub fn region_diff(ell: usize, n_sites: usize) -> Result<RegionDiff> {
    let cells = (0..=ell)
        .flat_map(|c1| (0..=ell).map(move |cn| (c1, cn)))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(c1, cn)| {
            let spec = ChainSpec::special(n_sites, ell, c1, cn)?;
            let r = full_report(&spec, &QScheme::all_ones(ell), ReportOptions::default())?;
            let predicted = crate::oracle::predict(&spec);
            let computed = r.nonzero();
            Ok(RegionCell {
                c1,
                cn,
                ok: predicted == computed,
                predicted,
                computed,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RegionDiff {
        ell,
        n_sites,
        ok: cells.iter().all(|c| c.ok),
        cells,
    })
}

impl RegionDiff {
    /// `cN` upwards, `c1` rightwards; cells show the computed grade, `#` when
    /// trivial, and a trailing `!` where computation and prediction differ.
    pub fn to_diagram(&self) -> String {
        let mut out = format!("ell={} N={}\n", self.ell, self.n_sites);
        for cn in (0..=self.ell).rev() {
            out.push_str(&format!("cN={cn:<2}|"));
            for c1 in 0..=self.ell {
                let cell = self
                    .cells
                    .iter()
                    .find(|c| c.c1 == c1 && c.cn == cn)
                    .expect("full grid");
                let s = match cell.computed.as_slice() {
                    [] => "#".to_string(),
                    [(f, 1)] => f.to_string(),
                    many => many
                        .iter()
                        .map(|(f, m)| format!("{f}x{m}"))
                        .collect::<Vec<_>>()
                        .join("+"),
                };
                out.push_str(&format!(" {:>3}{}", s, if cell.ok { ' ' } else { '!' }));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "  c1  {}\n",
            (0..=self.ell)
                .map(|c| format!(" {c:>3} "))
                .collect::<String>()
        ));
        out
    }
}

/// Short open chain cell: both readings of the short-chain statement against
/// computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShortOpenCell {
    pub n_sites: usize,
    pub c1: usize,
    pub cn: usize,
    pub computed: Vec<(usize, usize)>,
    pub clamped: Option<usize>,
    pub unclamped: Option<usize>,
}

/// Short closed chain: the stated particle count against computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShortRingRow {
    pub n_sites: usize,
    pub computed: Vec<(usize, usize)>,
    pub stated: Option<(usize, usize)>,
    pub ring: (usize, usize),
}

/// All chains with `N <= 2ℓ+2` at one `ℓ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShortChainAudit {
    pub ell: usize,
    pub open: Vec<ShortOpenCell>,
    pub rings: Vec<ShortRingRow>,
    /// Open chains with `N <= ℓ+2` match the clamped statement.
    pub clamped_ok: bool,
    /// Open chains with `N <= ℓ+2` match the unclamped statement.
    pub unclamped_ok: bool,
    /// Open chains with `ℓ+3 <= N <= 2ℓ+2` match the medium-length statement.
    pub medium_open_ok: bool,
    /// Closed chains match dimensions and [`ring`] grades.
    pub ring_ok: bool,
    /// Lengths where the stated particle count disagrees with computation.
    pub stated_ring_mismatch: Vec<usize>,
}

fn as_single(grade: Option<usize>) -> Vec<(usize, usize)> {
    grade.map(|f| (f, 1)).into_iter().collect()
}

pub fn short_chain_audit(ell: usize) -> Result<ShortChainAudit> {
    let scheme = QScheme::all_ones(ell);
    let opts = ReportOptions::default();
    let open = specs(ell..=ell, 1..=2 * ell + 2, &[BoundarySelection::AllSpecial])
        .par_iter()
        .map(|spec| {
            let Boundary::Special { c1, cn } = spec.boundary else {
                unreachable!("special family")
            };
            let n = spec.n_sites;
            let computed = full_report(spec, &scheme, opts)?.nonzero();
            let (clamped, unclamped) = if n <= ell + 2 {
                (
                    short_open(n, ell, c1, cn),
                    short_open_unclamped(n, ell, c1, cn),
                )
            } else {
                let m = medium_open(n, ell, c1, cn);
                (m, m)
            };
            Ok(ShortOpenCell {
                n_sites: n,
                c1,
                cn,
                computed,
                clamped,
                unclamped,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let rings = (1..=2 * ell + 2)
        .into_par_iter()
        .map(|n| {
            let spec = ChainSpec::periodic(n, ell)?;
            let computed = full_report(&spec, &scheme, opts)?.nonzero();
            let stated = if n <= ell + 2 {
                short_ring_stated(n, ell)
            } else {
                medium_ring(n, ell)
            };
            Ok(ShortRingRow {
                n_sites: n,
                computed,
                stated,
                ring: ring(n, ell),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let short: Vec<&ShortOpenCell> = open.iter().filter(|c| c.n_sites <= ell + 2).collect();
    Ok(ShortChainAudit {
        ell,
        clamped_ok: short.iter().all(|c| c.computed == as_single(c.clamped)),
        unclamped_ok: short.iter().all(|c| c.computed == as_single(c.unclamped)),
        medium_open_ok: open
            .iter()
            .filter(|c| c.n_sites > ell + 2)
            .all(|c| c.computed == as_single(c.clamped)),
        ring_ok: rings.iter().all(|r| r.computed == vec![r.ring]),
        stated_ring_mismatch: rings
            .iter()
            .filter(|r| r.stated.is_some_and(|s| r.computed != vec![s]))
            .map(|r| r.n_sites)
            .collect(),
        open,
        rings,
    })
}
