//! Closed-form ground-state predictions.
//!
//! Every chain length is written `N = n(ℓ+2) + p + 1` with `0 <= p <= ℓ+1`.
//! Predictions are lists of `(f, multiplicity)` with `f` ascending; an empty
//! list means trivial cohomology.

use std::fmt::Write as _;

use serde::Serialize;

use crate::state_space::{Boundary, ChainSpec};

/// `(n, p)` with `N = n(ℓ+2) + p + 1`, `0 <= p <= ℓ+1`.
pub fn decompose_length(n_sites: usize, ell: usize) -> (usize, usize) {
    assert!(n_sites >= 1 && ell >= 1, "decompose_length needs N, ℓ >= 1");
    ((n_sites - 1) / (ell + 2), (n_sites - 1) % (ell + 2))
}

/// Closed chain of any length: one state at `nℓ+p` for `p <= ℓ`, `ℓ+1` states
/// at `(n+1)ℓ` for `p = ℓ+1`.
pub fn ring(n_sites: usize, ell: usize) -> (usize, usize) {
    let (n, p) = decompose_length(n_sites, ell);
    if p <= ell {
        (n * ell + p, 1)
    } else {
        ((n + 1) * ell, ell + 1)
    }
}

/// Closed chain with `N <= ℓ+2`, grades as stated: `N-1` particles throughout.
/// At `N = ℓ+2` this disagrees with [`ring`], which puts the `ℓ+1` states at
/// grade `ℓ = N-2`; exact computation sides with [`ring`].
pub fn short_ring_stated(n_sites: usize, ell: usize) -> Option<(usize, usize)> {
    match n_sites {
        0 => None,
        n if n <= ell + 1 => Some((n - 1, 1)),
        n if n == ell + 2 => Some((n - 1, ell + 1)),
        _ => None,
    }
}

/// Closed chain with `ℓ+3 <= N <= 2ℓ+2`: one state with `N-3` particles.
pub fn medium_ring(n_sites: usize, ell: usize) -> Option<(usize, usize)> {
    (ell + 3..=2 * ell + 2)
        .contains(&n_sites)
        .then(|| (n_sites - 3, 1))
}

/// Open chain with `n >= 1`: the grade of the single state, if any.
///
/// (i) `c1, cN >= p` and `c1+cN <= ℓ+p` (`p <= ℓ`) at `nℓ+p`;
/// (ii) `c1, cN < p` and `c1+cN >= p-1` (`p >= 1`) at `nℓ+p-1`.
pub fn long_open(n_sites: usize, ell: usize, c1: usize, cn: usize) -> Option<usize> {
    let (n, p) = decompose_length(n_sites, ell);
    if n == 0 {
        return None;
    }
    if p <= ell && c1 >= p && cn >= p && c1 + cn <= ell + p {
        return Some(n * ell + p);
    }
    if p >= 1 && c1 < p && cn < p && c1 + cn + 1 >= p {
        return Some(n * ell + p - 1);
    }
    None
}

/// Open chain with `N <= ℓ+2`, caps clamped to `min(c, N-1)`.
///
/// The unconstrained case `N <= min(ℓ, c1, cN)` is trivial. Otherwise
/// (i) `c1 = cN = N-1`, `N <= ℓ+1` at grade `N-1`;
/// (ii) `c1, cN <= N-2` and `c1+cN >= N-2` at grade `N-2`.
pub fn short_open(n_sites: usize, ell: usize, c1: usize, cn: usize) -> Option<usize> {
    let n = n_sites;
    if n == 0 || n > ell + 2 {
        return None;
    }
    if n <= ell.min(c1).min(cn) {
        return None;
    }
    let (a, b) = (c1.min(n - 1), cn.min(n - 1));
    if a == n - 1 && b == n - 1 && n <= ell + 1 {
        return Some(n - 1);
    }
    if n >= 2 && a + 2 <= n && b + 2 <= n && a + b + 2 >= n {
        return Some(n - 2);
    }
    None
}

/// Short open chain, unclamped reading: (i) `c1 = N-1, cN > N-1` or
/// `cN = N-1, c1 >= N-1` for `N <= ℓ+1`; (ii) as in [`short_open`] for
/// `2 <= N <= ℓ+2`.
pub fn short_open_unclamped(n_sites: usize, ell: usize, c1: usize, cn: usize) -> Option<usize> {
    let n = n_sites;
    if n == 0 || n > ell + 2 {
        return None;
    }
    let first = (c1 == n - 1 && cn > n - 1) || (cn == n - 1 && c1 >= n - 1);
    if first && n <= ell + 1 {
        return Some(n - 1);
    }
    if n >= 2 && c1 + 2 <= n && cn + 2 <= n && c1 + cn + 2 >= n {
        return Some(n - 2);
    }
    None
}

/// Open chain with `ℓ+3 <= N <= 2ℓ+2`, with `q = N-ℓ-3`:
/// (i) `c1, cN >= q` and `c1+cN < N-2` at `N-3`;
/// (ii) `N > ℓ+3`, `c1, cN < q` and `c1+cN >= q-1` at `N-4`.
pub fn medium_open(n_sites: usize, ell: usize, c1: usize, cn: usize) -> Option<usize> {
    let n = n_sites;
    if !(ell + 3..=2 * ell + 2).contains(&n) {
        return None;
    }
    let q = n - ell - 3;
    if c1 >= q && cn >= q && c1 + cn + 2 < n {
        return Some(n - 3);
    }
    if n > ell + 3 && c1 < q && cn < q && c1 + cn + 1 >= q {
        return Some(n - 4);
    }
    None
}

/// Predicted `(f, multiplicity)` pairs.
pub fn predict(spec: &ChainSpec) -> Vec<(usize, usize)> {
    let (n_sites, ell) = (spec.n_sites, spec.max_cluster);
    match spec.boundary {
        Boundary::Periodic => vec![ring(n_sites, ell)],
        Boundary::Special { c1, cn } => {
            let grade = if n_sites <= ell + 2 {
                short_open(n_sites, ell, c1, cn)
            } else {
                long_open(n_sites, ell, c1, cn)
            };
            grade.map(|f| (f, 1)).into_iter().collect()
        }
    }
}

/// Prediction as a per-grade vector of length `len` (grades beyond `len` are
/// dropped; callers size it to `f_max + 1`).
pub fn predicted_dims(spec: &ChainSpec, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for (f, m) in predict(spec) {
        if f < len {
            out[f] += m;
        }
    }
    out
}

/// `Σ (-1)^f multiplicity`.
pub fn predicted_index(spec: &ChainSpec) -> i64 {
    predict(spec)
        .iter()
        .map(|(f, m)| if f % 2 == 0 { *m as i64 } else { -(*m as i64) })
        .sum()
}

/// Predictions for every `(c1, cN) ∈ [0, ℓ]²` at fixed `ℓ, N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionTable {
    pub ell: usize,
    pub n_sites: usize,
    pub n: usize,
    pub p: usize,
    /// `cells[c1][cn]`: grade of the unique state, or `None` for trivial
    /// cohomology.
    pub cells: Vec<Vec<Option<usize>>>,
}

pub fn region_table(ell: usize, n_sites: usize) -> RegionTable {
    let (n, p) = decompose_length(n_sites, ell);
    let cells = (0..=ell)
        .map(|c1| {
            (0..=ell)
                .map(|cn| {
                    let spec =
                        ChainSpec::special(n_sites, ell, c1, cn).expect("caps within [0, ℓ]");
                    predict(&spec).first().map(|(f, _)| *f)
                })
                .collect()
        })
        .collect();
    RegionTable {
        ell,
        n_sites,
        n,
        p,
        cells,
    }
}

impl RegionTable {
    /// `c1,cN,f,dim` rows; `f` is empty for trivial cells.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("ell,N,c1,cN,f,dim\n");
        for (c1, row) in self.cells.iter().enumerate() {
            for (cn, cell) in row.iter().enumerate() {
                let f = cell.map(|f| f.to_string()).unwrap_or_default();
                let dim = usize::from(cell.is_some());
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    self.ell, self.n_sites, c1, cn, f, dim
                )
                .expect("write to string");
            }
        }
        out
    }

    /// Grid with `cN` increasing upwards and `c1` to the right. Cells carrying a
    /// state show its grade, trivial cells show `#`.
    pub fn to_diagram(&self) -> String {
        let width = self
            .cells
            .iter()
            .flatten()
            .flatten()
            .map(|f| f.to_string().len())
            .max()
            .unwrap_or(1)
            .max(1);
        let mut out = format!(
            "ell={} N={} (n={}, p={})\n",
            self.ell, self.n_sites, self.n, self.p
        );
        for cn in (0..=self.ell).rev() {
            write!(out, "cN={cn:<2}|").expect("write to string");
            for c1 in 0..=self.ell {
                let s = self.cells[c1][cn]
                    .map(|f| f.to_string())
                    .unwrap_or_else(|| "#".into());
                write!(out, " {s:>width$}").expect("write to string");
            }
            out.push('\n');
        }
        write!(out, "     +").expect("write to string");
        out.push_str(&"-".repeat((width + 1) * (self.ell + 1)));
        out.push('\n');
        write!(out, "  c1  ").expect("write to string");
        for c1 in 0..=self.ell {
            write!(out, " {c1:>width$}").expect("write to string");
        }
        out.push('\n');
        out
    }
}
