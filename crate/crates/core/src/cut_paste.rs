//! Cut-and-paste: prepending `χ = 0 1…1 0` relates an `Ñ`-site chain to one
//! with `N = Ñ + ℓ + 2` sites and the same boundary condition.
//!
//! The small chain occupies sites `ℓ+3..=N` of the big one. Since sites 1 and
//! `ℓ+2` of `χ` are empty, every allowed small configuration stays allowed
//! and no insertion on the prefix `1..=ℓ+2` survives, so the image lies in
//! `ker Q₁` of the prefix split. The overall sign `(-1)^ℓ` picked up when `Q₂`
//! passes `χ` is dropped; it does not affect any dimension.

use rayon::prelude::*;
use serde::Serialize;

use crate::cohomology::betti_numbers;
use crate::double_complex::SplitPreset;
use crate::error::{Error, Result};
use crate::linalg::kernel_basis;
use crate::sparse::SparseVec;
use crate::state_space::{
    enumerate_basis, is_allowed, Boundary, ChainSpec, Configuration, GradedBasis,
};
use crate::supercharge::{build_all_q, build_q_on_sites};
use crate::{QScheme, Rational};

/// `0 1^ℓ 0` on `ℓ+2` sites.
pub fn chi_state(ell: usize) -> Configuration {
    assert!(ell >= 1, "χ needs ℓ >= 1");
    Configuration(((1u64 << ell) - 1) << 1)
}

/// `G : V_Ñ → V_N`, `σ′ ↦ χ σ′`, between graded bases.
#[derive(Clone, Debug)]
pub struct GMap {
    pub small: GradedBasis,
    pub big: GradedBasis,
}

impl GMap {
    pub fn new(spec_small: &ChainSpec) -> Result<Self> {
        let ell = spec_small.max_cluster;
        if spec_small.n_sites <= ell {
            return Err(Error::Precondition(format!(
                "G map needs Ñ > ℓ, got Ñ={} ℓ={ell}",
                spec_small.n_sites
            )));
        }
        let big_spec = spec_small.with_sites(spec_small.n_sites + ell + 2)?;
        Ok(GMap {
            small: enumerate_basis(spec_small)?,
            big: enumerate_basis(&big_spec)?,
        })
    }

    pub fn ell(&self) -> usize {
        self.small.spec.max_cluster
    }

    pub fn map_config(&self, config: Configuration) -> Result<Configuration> {
        let ell = self.ell();
        let out = Configuration(chi_state(ell).0 | (config.0 << (ell + 2)));
        if !is_allowed(&self.big.spec, out) {
            return Err(Error::Structural(format!(
                "χ·{} is not allowed on {}",
                config.to_sites(self.small.spec.n_sites),
                self.big.spec
            )));
        }
        Ok(out)
    }

    /// Image of a grade-`f` vector; the result lives at grade `f + ℓ`.
    pub fn apply(&self, f: usize, state: &[(usize, Rational)]) -> Result<SparseVec<Rational>> {
        let src = self.small.grade(f);
        let tgt = self.big.grade(f + self.ell());
        let mut out = Vec::with_capacity(state.len());
        for (i, v) in state {
            let big = self.map_config(src[*i])?;
            let j = tgt
                .binary_search(&big)
                .map_err(|_| Error::Structural("image missing from big basis".into()))?;
            out.push((j, v.clone()));
        }
        out.sort_unstable_by_key(|e| e.0);
        Ok(out)
    }
}

/// Exact check that `G` sends every vector of `ker Q̃_f`, for every `f`, into
/// `ker Q₁` of the prefix split. Returns the number of vectors checked.
pub fn g_map_kernel_check(spec_small: &ChainSpec, scheme: &QScheme) -> Result<usize> {
    let g = GMap::new(spec_small)?;
    let q_small = build_all_q(&g.small, scheme)?;
    let prefix = SplitPreset::Prefix.mask(&g.big.spec);
    let ell = g.ell();
    let mut checked = 0;
    for (f, q) in q_small.iter().enumerate() {
        let q1 = build_q_on_sites(&g.big, scheme, f + ell, prefix)?;
        for v in kernel_basis(q) {
            let image = g.apply(f, &v)?;
            if !q1.mul_vec(&image).is_empty() {
                return Err(Error::Structural(format!(
                    "G image of a closed state at f={f} is not Q₁-closed"
                )));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftRow {
    pub f: usize,
    pub big: usize,
    /// `betti_small(f - ℓ)`, absent for `f < ℓ`.
    pub small: Option<usize>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftReport {
    pub big: ChainSpec,
    pub small: ChainSpec,
    pub betti_big: Vec<usize>,
    pub betti_small: Vec<usize>,
    pub rows: Vec<ShiftRow>,
    /// `betti_big(f) = betti_small(f-ℓ)` for all `f >= ℓ`.
    pub shift_ok: bool,
    /// `betti_big(f) = 0` for `f < ℓ`; reported separately.
    pub below_ell_ok: bool,
}

/// Compares the Betti numbers of `spec_big` with those of the chain shorter by
/// `ℓ+2` sites under the same boundary.
pub fn verify_dimension_shift(spec_big: &ChainSpec, scheme: &QScheme) -> Result<ShiftReport> {
    let ell = spec_big.max_cluster;
    if spec_big.n_sites <= 2 * ell + 2 {
        return Err(Error::Precondition(format!(
            "dimension shift needs N > 2ℓ+2, got {spec_big}"
        )));
    }
    let small = spec_big.with_sites(spec_big.n_sites - ell - 2)?;
    let betti_big = betti_numbers(&enumerate_basis(spec_big)?, scheme)?;
    let betti_small = betti_numbers(&enumerate_basis(&small)?, scheme)?;
    let len = betti_big.len().max(betti_small.len() + ell);
    let rows: Vec<ShiftRow> = (0..len)
        .map(|f| {
            let big = betti_big.get(f).copied().unwrap_or(0);
            let small = (f >= ell).then(|| betti_small.get(f - ell).copied().unwrap_or(0));
            ShiftRow {
                f,
                big,
                small,
                ok: small.map_or(big == 0, |s| s == big),
            }
        })
        .collect();
    let shift_ok = rows.iter().filter(|r| r.f >= ell).all(|r| r.ok);
    let below_ell_ok = rows.iter().filter(|r| r.f < ell).all(|r| r.ok);
    Ok(ShiftReport {
        big: *spec_big,
        small,
        betti_big,
        betti_small,
        rows,
        shift_ok,
        below_ell_ok,
    })
}

/// Shift reports for `N = 2ℓ+3 ..= n_max` with a fixed boundary.
pub fn ladder(
    ell: usize,
    boundary: Boundary,
    n_max: usize,
    scheme: &QScheme,
) -> Result<Vec<ShiftReport>> {
    (2 * ell + 3..=n_max)
        .into_par_iter()
        .map(|n| verify_dimension_shift(&ChainSpec::new(n, ell, boundary)?, scheme))
        .collect()
}
