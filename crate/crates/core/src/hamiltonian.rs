//! Grade-diagonal blocks of `H = {Q, Q†}`.

use nalgebra::DMatrix;
use rayon::prelude::*;

use serde::Serialize;

use crate::couplings::CouplingScheme;
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, rank, rank_modular};
use crate::scalar::Scalar;
use crate::sparse::{SparseMatrix, SparseVec};
use crate::state_space::GradedBasis;
use crate::supercharge::build_all_q;
use crate::Rational;

/// Largest block handed to the dense eigensolver.
pub const NUMERIC_LIMIT: usize = 2000;

/// Default zero-mode threshold for [`numeric_zero_modes`].
pub const DEFAULT_TOL: f64 = 1e-9;

/// `H_f = Q_{f-1} Q_{f-1}ᵀ + Q_fᵀ Q_f` from precomputed blocks `q[0..=f_max]`.
pub fn h_from_blocks<T: Scalar>(q: &[SparseMatrix<T>], f: usize) -> SparseMatrix<T> {
    let up = q[f].transpose().mul(&q[f]);
    if f == 0 {
        return up;
    }
    let down = q[f - 1].mul(&q[f - 1].transpose());
    down.add(&up)
}

pub fn build_h<T: Scalar>(
    basis: &GradedBasis,
    scheme: &CouplingScheme<T>,
    f: usize,
) -> Result<SparseMatrix<T>> {
    if f > basis.f_max() {
        return Err(Error::GradeOutOfRange {
            f,
            max: basis.f_max(),
        });
    }
    let q = build_all_q(basis, scheme)?;
    Ok(h_from_blocks(&q, f))
}

/// All blocks `H_0, …, H_{f_max}`.
pub fn build_all_h<T: Scalar>(
    basis: &GradedBasis,
    scheme: &CouplingScheme<T>,
) -> Result<Vec<SparseMatrix<T>>> {
    let q = build_all_q(basis, scheme)?;
    Ok((0..q.len())
        .into_par_iter()
        .map(|f| h_from_blocks(&q, f))
        .collect())
}

/// Eigenvalues of a symmetric block in ascending order, in double precision.
pub fn eigenvalues<T: Scalar>(h: &SparseMatrix<T>) -> Result<Vec<f64>> {
    let n = h.n_rows();
    if n > NUMERIC_LIMIT {
        return Err(Error::TooLarge {
            what: "dense eigenproblem",
            size: n,
            limit: NUMERIC_LIMIT,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut dense = DMatrix::<f64>::zeros(n, n);
    for (r, c, v) in h.entries() {
        dense[(*r, *c)] = v.to_f64_lossy();
    }
    let mut ev: Vec<f64> = dense.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Number of eigenvalues with `|λ| < tol`.
pub fn numeric_zero_modes<T: Scalar>(h: &SparseMatrix<T>, tol: f64) -> Result<usize> {
    Ok(eigenvalues(h)?.iter().filter(|e| e.abs() < tol).count())
}

/// Exact `dim ker H_f` with the evidence that pins it down.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroModeCertificate {
    pub f: usize,
    pub dim: usize,
    /// Exact `dim ker H_f`.
    pub kernel_dim: usize,
    /// Independent vectors verified to satisfy `H_f v = 0` exactly.
    pub verified: usize,
    pub modular_rank: usize,
    pub prime: u64,
    pub seed: u64,
    /// Whether the rational rank of `H_f` had to be computed.
    pub rational_fallback: bool,
}

/// Vectors annihilated by both `Q_f` and `Q_{f-1}ᵀ`; they lie in `ker H_f`.
pub fn harmonic_candidates(q: &[SparseMatrix<Rational>], f: usize) -> Vec<SparseVec<Rational>> {
    let stacked = if f == 0 {
        q[0].clone()
    } else {
        q[f].vstack(&q[f - 1].transpose())
    };
    kernel_basis(&stacked)
}

/// Exact kernel dimension of `H_f` computed on `H_f` itself.
///
/// `rank_p(H_f) <= rank(H_f)` for any prime `p` not dividing a denominator,
/// and `k` exactly verified independent null vectors give
/// `rank(H_f) <= dim - k`. When the bounds meet the kernel dimension is `k`;
/// otherwise the rational rank is computed.
pub fn exact_zero_modes(
    q: &[SparseMatrix<Rational>],
    f: usize,
    seed: u64,
) -> Result<ZeroModeCertificate> {
    let h = h_from_blocks(q, f);
    let dim = h.n_rows();
    let modular = rank_modular(&h, seed, false)?;
    // full modular rank already forces a trivial kernel
    let candidates = if modular.rank == dim {
        Vec::new()
    } else {
        harmonic_candidates(q, f)
    };
    if candidates.iter().any(|v| !h.mul_vec(v).is_empty()) {
        return Err(Error::Structural(format!(
            "vector of ker Q_f ∩ ker Q_(f-1)ᵀ not annihilated by H_{f}"
        )));
    }
    let verified = candidates.len();
    if modular.rank + verified > dim {
        return Err(Error::Structural(format!(
            "H_{f}: modular rank {} exceeds dim - {verified}",
            modular.rank
        )));
    }
    let (kernel_dim, rational_fallback) = if modular.rank + verified == dim {
        (verified, false)
    } else {
        (dim - rank(&h), true)
    };
    Ok(ZeroModeCertificate {
        f,
        dim,
        kernel_dim,
        verified,
        modular_rank: modular.rank,
        prime: modular.prime,
        seed,
        rational_fallback,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use crate::state_space::{enumerate_basis, ChainSpec};
    use crate::Rational;

    #[test]
    fn free_two_sites_ground_grade() {
        let b = enumerate_basis(&ChainSpec::free(2, 1).unwrap()).unwrap();
        let h = build_h(&b, &CouplingScheme::<Rational>::all_ones(1), 0).unwrap();
        assert_eq!(h.to_dense(), vec![vec![rational(2)]]);
        assert_eq!(numeric_zero_modes(&h, DEFAULT_TOL).unwrap(), 0);
    }

    #[test]
    fn three_site_ring_has_two_zero_modes() {
        let b = enumerate_basis(&ChainSpec::periodic(3, 1).unwrap()).unwrap();
        let h = build_h(&b, &CouplingScheme::<Rational>::all_ones(1), 1).unwrap();
        assert_eq!(h.shape(), (3, 3));
        assert!(h.is_symmetric());
        assert_eq!(numeric_zero_modes(&h, DEFAULT_TOL).unwrap(), 2);
        assert_eq!(crate::linalg::kernel_basis(&h).len(), 2);
    }

    #[test]
    fn empty_grade_block() {
        let q = vec![SparseMatrix::<Rational>::zeros(0, 1)];
        let h = h_from_blocks(&q, 0);
        assert_eq!(h.shape(), (1, 1));
        assert!(h.is_zero());
    }

    #[test]
    fn certified_kernel_matches_direct_rank() {
        let b = enumerate_basis(&ChainSpec::periodic(6, 2).unwrap()).unwrap();
        let q = build_all_q(&b, &CouplingScheme::<Rational>::all_ones(2)).unwrap();
        for f in 0..q.len() {
            let c = exact_zero_modes(&q, f, 3).unwrap();
            let h = h_from_blocks(&q, f);
            assert_eq!(c.kernel_dim, h.n_rows() - rank(&h));
            assert!(!c.rational_fallback);
        }
    }

    #[test]
    fn oversized_block_rejected() {
        let h = SparseMatrix::<f64>::identity(NUMERIC_LIMIT + 1);
        assert!(matches!(
            numeric_zero_modes(&h, DEFAULT_TOL),
            Err(Error::TooLarge { .. })
        ));
    }
}
