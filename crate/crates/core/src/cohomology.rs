//! Per-grade cohomology of `Q` and the derived reports.
//!
//! `betti(f) = dim V_f - rank Q_f - rank Q_{f-1}`; only ranks are needed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::couplings::random_scheme;
use crate::error::Result;
use crate::hamiltonian::{exact_zero_modes, harmonic_candidates, ZeroModeCertificate};
use crate::linalg::rank;
use crate::oracle::{predict, predicted_dims};
use crate::sparse::{SparseMatrix, SparseVec};
use crate::state_space::{enumerate_basis, ChainSpec, GradedBasis};
use crate::supercharge::build_all_q;
use crate::{QScheme, Rational};

/// Betti numbers from grade dimensions and the ranks of `Q_0, …, Q_{f_max}`.
pub fn betti_from_ranks(dims: &[usize], ranks: &[usize]) -> Vec<usize> {
    (0..dims.len())
        .map(|f| dims[f] - ranks[f] - if f > 0 { ranks[f - 1] } else { 0 })
        .collect()
}

pub fn q_ranks(q: &[SparseMatrix<Rational>]) -> Vec<usize> {
    q.par_iter().map(rank).collect()
}

pub fn betti_numbers(basis: &GradedBasis, scheme: &QScheme) -> Result<Vec<usize>> {
    let q = build_all_q(basis, scheme)?;
    Ok(betti_from_ranks(&basis.dims(), &q_ranks(&q)))
}

/// Cohomology dimension at grade `f`; zero beyond the top grade.
pub fn betti(spec: &ChainSpec, scheme: &QScheme, f: usize) -> Result<usize> {
    let basis = enumerate_basis(spec)?;
    Ok(betti_numbers(&basis, scheme)?.get(f).copied().unwrap_or(0))
}

/// `Σ (-1)^f x_f`.
pub fn alternating_sum(xs: &[usize]) -> i64 {
    xs.iter()
        .enumerate()
        .map(|(f, x)| if f % 2 == 0 { *x as i64 } else { -(*x as i64) })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradeRow {
    pub f: usize,
    pub dim: usize,
    pub betti: usize,
    /// Exact `dim ker H_f`, present when the Hamiltonian check ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_h: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleRow {
    pub f: usize,
    pub predicted: usize,
    pub computed: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub spec: ChainSpec,
    pub grades: Vec<GradeRow>,
    pub witten: i64,
    pub euler: i64,
    pub oracle: Vec<OracleRow>,
    pub oracle_ok: bool,
    /// `dim ker H_f = betti(f)` on every grade, when checked.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hamiltonian_ok: Option<bool>,
}

impl CohomologyReport {
    pub fn betti(&self) -> Vec<usize> {
        self.grades.iter().map(|g| g.betti).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.grades.iter().map(|g| g.dim).collect()
    }

    /// Nonzero `(f, betti)` pairs.
    pub fn nonzero(&self) -> Vec<(usize, usize)> {
        self.grades
            .iter()
            .filter(|g| g.betti > 0)
            .map(|g| (g.f, g.betti))
            .collect()
    }

    pub fn csv_header() -> &'static str {
        "ell,N,boundary,f,dim,betti,predicted,kernel_h"
    }

    /// One CSV row per grade, without header.
    pub fn to_csv_rows(&self) -> String {
        let mut out = String::new();
        for (g, o) in self.grades.iter().zip(&self.oracle) {
            let kh = g.kernel_h.map(|k| k.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                self.spec.max_cluster,
                self.spec.n_sites,
                self.spec.boundary_label(),
                g.f,
                g.dim,
                g.betti,
                o.predicted,
                kh
            ));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ReportOptions {
    /// Certify `dim ker H_f` exactly on every grade.
    pub check_hamiltonian: bool,
    /// Seed of the modular prime used by the Hamiltonian check.
    pub seed: u64,
}

pub fn full_report(
    spec: &ChainSpec,
    scheme: &QScheme,
    opts: ReportOptions,
) -> Result<CohomologyReport> {
    let basis = enumerate_basis(spec)?;
    let q = build_all_q(&basis, scheme)?;
    let dims = basis.dims();
    let betti = betti_from_ranks(&dims, &q_ranks(&q));
    let kernel_h: Option<Vec<ZeroModeCertificate>> = if opts.check_hamiltonian {
        Some(
            (0..dims.len())
                .into_par_iter()
                .map(|f| exact_zero_modes(&q, f, opts.seed))
                .collect::<Result<_>>()?,
        )
    } else {
        None
    };
    let predicted = predicted_dims(spec, dims.len());
    let grades: Vec<GradeRow> = (0..dims.len())
        .map(|f| GradeRow {
            f,
            dim: dims[f],
            betti: betti[f],
            kernel_h: kernel_h.as_ref().map(|k| k[f].kernel_dim),
        })
        .collect();
    let oracle: Vec<OracleRow> = (0..dims.len())
        .map(|f| OracleRow {
            f,
            predicted: predicted[f],
            computed: betti[f],
            ok: predicted[f] == betti[f],
        })
        .collect();
    // a prediction above the top grade cannot be matched
    let in_range =
        predicted.iter().sum::<usize>() == predict(spec).iter().map(|p| p.1).sum::<usize>();
    let oracle_ok = in_range && oracle.iter().all(|o| o.ok);
    let hamiltonian_ok = kernel_h.map(|k| k.iter().zip(&betti).all(|(c, b)| c.kernel_dim == *b));
    Ok(CohomologyReport {
        spec: *spec,
        witten: alternating_sum(&betti),
        euler: alternating_sum(&dims),
        grades,
        oracle,
        oracle_ok,
        hamiltonian_ok,
    })
}

/// Betti numbers under one random scheme, compared with the all-ones values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndependenceTrial {
    pub couplings: Vec<String>,
    pub betti: Vec<usize>,
    pub same: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndependenceResult {
    pub spec: ChainSpec,
    pub seed: u64,
    pub reference: Vec<usize>,
    pub trials: Vec<IndependenceTrial>,
    pub ok: bool,
}

/// Compares the all-ones Betti numbers with those of `trials` random
/// nonzero rational schemes drawn from `seed`.
pub fn parameter_independence(
    spec: &ChainSpec,
    trials: usize,
    seed: u64,
) -> Result<IndependenceResult> {
    let basis = enumerate_basis(spec)?;
    let reference = betti_numbers(&basis, &QScheme::all_ones(spec.max_cluster))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let schemes: Vec<QScheme> = (0..trials)
        .map(|_| random_scheme(spec.max_cluster, &mut rng))
        .collect();
    let trials = schemes
        .par_iter()
        .map(|s| {
            let betti = betti_numbers(&basis, s)?;
            Ok(IndependenceTrial {
                couplings: s.primitive().iter().map(|v| v.to_string()).collect(),
                same: betti == reference,
                betti,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ok = trials.iter().all(|t| t.same);
    Ok(IndependenceResult {
        spec: *spec,
        seed,
        reference,
        trials,
        ok,
    })
}

pub fn parameter_independence_check(spec: &ChainSpec, trials: usize, seed: u64) -> Result<bool> {
    Ok(parameter_independence(spec, trials, seed)?.ok)
}

/// Exact zero-energy states at grade `f`: a basis of
/// `ker Q_f ∩ ker Q_{f-1}ᵀ = ker H_f`, one harmonic representative per
/// cohomology class. Component signs follow the string convention.
pub fn ground_states(
    basis: &GradedBasis,
    scheme: &QScheme,
    f: usize,
) -> Result<Vec<SparseVec<Rational>>> {
    if f > basis.f_max() {
        return Ok(Vec::new());
    }
    let q = build_all_q(basis, scheme)?;
    Ok(harmonic_candidates(&q, f))
}
