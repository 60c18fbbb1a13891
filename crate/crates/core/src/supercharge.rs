//! Grade-raising supercharge blocks `Q_f : V_f → V_{f+1}`.
//!
//! `Q` inserts a particle at an empty site `i` whenever the result is allowed,
//! weighted by `λ_{m,n}` when the new particle is the `n`-th member of an
//! `m`-cluster of the target configuration, times the string sign
//! `(-1)^{#occupied sites j < i}`. The string runs in the fixed order `1..N`
//! on closed chains as well.

use rayon::prelude::*;

use crate::couplings::CouplingScheme;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::SparseMatrix;
use crate::state_space::{
    cluster_position, is_allowed, low_mask, ChainSpec, Configuration, GradedBasis,
};

/// `(-1)^{number of occupied sites strictly left of site}`.
pub fn string_sign(config: Configuration, site: usize) -> i32 {
    if (config.0 & low_mask(site - 1))
        .count_ones()
        .is_multiple_of(2)
    {
        1
    } else {
        -1
    }
}

pub(crate) fn check_scheme<T>(spec: &ChainSpec, scheme: &CouplingScheme<T>) -> Result<()>
where
    T: Scalar,
{
    if scheme.max_cluster() != spec.max_cluster {
        return Err(Error::Precondition(format!(
            "coupling scheme has ℓ={} but chain has ℓ={}",
            scheme.max_cluster(),
            spec.max_cluster
        )));
    }
    Ok(())
}

/// Nonzero terms of `Q σ` restricted to insertions at sites in `site_mask`
/// (bit `i-1` for site `i`).
pub fn insertion_terms<'a, T: Scalar>(
    spec: &'a ChainSpec,
    scheme: &'a CouplingScheme<T>,
    config: Configuration,
    site_mask: u64,
) -> impl Iterator<Item = (Configuration, T)> + 'a {
    (1..=spec.n_sites).filter_map(move |site| {
        if config.occupied(site) || (site_mask >> (site - 1)) & 1 == 0 {
            return None;
        }
        let target = config.with_site(site);
        if !is_allowed(spec, target) {
            return None;
        }
        let (m, n) = cluster_position(spec, target, site)?;
        let lam = scheme.lambda(m, n).clone();
        let amp = if string_sign(config, site) > 0 {
            lam
        } else {
            -lam
        };
        Some((target, amp))
    })
}

/// `Q_f` restricted to insertions on `site_mask`, as a `dim(f+1) × dim(f)`
/// matrix between the grade lists of `basis`.
pub fn build_q_on_sites<T: Scalar>(
    basis: &GradedBasis,
    scheme: &CouplingScheme<T>,
    f: usize,
    site_mask: u64,
) -> Result<SparseMatrix<T>> {
    let spec = &basis.spec;
    check_scheme(spec, scheme)?;
    if f > basis.f_max() {
        return Err(Error::GradeOutOfRange {
            f,
            max: basis.f_max(),
        });
    }
    let source = basis.grade(f);
    let target = basis.grade(f + 1);
    let mut triplets = Vec::new();
    for (col, sigma) in source.iter().enumerate() {
        for (tau, amp) in insertion_terms(spec, scheme, *sigma, site_mask) {
            let row = target.binary_search(&tau).map_err(|_| {
                Error::Structural(format!(
                    "allowed insertion {} missing from basis",
                    tau.to_sites(spec.n_sites)
                ))
            })?;
            triplets.push((row, col, amp));
        }
    }
    Ok(SparseMatrix::from_triplets(
        target.len(),
        source.len(),
        triplets,
    ))
}

/// The block `Q_f : V_f → V_{f+1}`.
pub fn build_q<T: Scalar>(
    basis: &GradedBasis,
    scheme: &CouplingScheme<T>,
    f: usize,
) -> Result<SparseMatrix<T>> {
    build_q_on_sites(basis, scheme, f, basis.spec.full_mask())
}

/// All blocks `Q_0, …, Q_{f_max}`, built in parallel.
pub fn build_all_q<T: Scalar>(
    basis: &GradedBasis,
    scheme: &CouplingScheme<T>,
) -> Result<Vec<SparseMatrix<T>>> {
    (0..=basis.f_max())
        .into_par_iter()
        .map(|f| build_q(basis, scheme, f))
        .collect()
}

/// Adjoint of a block. Couplings are real and the basis orthonormal, so this is
/// the transpose.
pub fn adjoint<T: Scalar>(m: &SparseMatrix<T>) -> SparseMatrix<T> {
    m.transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use crate::state_space::enumerate_basis;
    use crate::Rational;

    fn cfg(s: &str) -> Configuration {
        Configuration::from_sites(s).unwrap()
    }

    #[test]
    fn string_signs() {
        assert_eq!(string_sign(cfg("0110"), 1), 1);
        assert_eq!(string_sign(cfg("0110"), 4), 1);
        assert_eq!(string_sign(cfg("1010"), 3), -1);
    }

    #[test]
    fn two_site_blocks() {
        let b = enumerate_basis(&ChainSpec::free(2, 1).unwrap()).unwrap();
        let s = CouplingScheme::<Rational>::all_ones(1);
        let q0 = build_q(&b, &s, 0).unwrap();
        assert_eq!(q0.to_dense(), vec![vec![rational(1)], vec![rational(1)]]);

        // ℓ = 2: grade 1 is [10, 01] (words 1, 2), grade 2 is [11]
        let b = enumerate_basis(&ChainSpec::free(2, 2).unwrap()).unwrap();
        let s = CouplingScheme::build(vec![rational(3), rational(5)]).unwrap();
        let q0 = build_q(&b, &s, 0).unwrap();
        let q1 = build_q(&b, &s, 1).unwrap();
        // |10> -> site 2 is 2nd member of the 2-cluster, one particle to its left
        // |01> -> site 1 is 1st member, empty string
        assert_eq!(
            q1.to_dense(),
            vec![vec![-s.lambda(2, 2).clone(), s.lambda(2, 1).clone()]]
        );
        assert!(q1.mul(&q0).is_zero());
    }

    #[test]
    fn top_grade_block_is_empty() {
        let b = enumerate_basis(&ChainSpec::periodic(4, 1).unwrap()).unwrap();
        let s = CouplingScheme::<Rational>::all_ones(1);
        let q = build_q(&b, &s, b.f_max()).unwrap();
        assert_eq!(q.shape(), (0, 2));
        assert!(build_q(&b, &s, b.f_max() + 1).is_err());
    }

    #[test]
    fn scheme_length_must_match() {
        let b = enumerate_basis(&ChainSpec::free(3, 2).unwrap()).unwrap();
        assert!(build_q(&b, &CouplingScheme::<Rational>::all_ones(1), 0).is_err());
    }
}
