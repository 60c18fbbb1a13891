//! Cluster amplitudes `λ_{m,n}`.
//!
//! The free parameters are the `λ_{m,1}`, `m = 1..=ℓ`. With
//! `μ_m = λ_{1,1} ⋯ λ_{m,1}` and `μ_0 = 1` the full table is
//! `λ_{m,n} = μ_m / (μ_{n-1} μ_{m-n})`, which solves the nilpotency relations
//! `λ_{m,n} λ_{m-n,p-n} = λ_{m,p} λ_{p-1,n}` for `1 <= n < p <= m`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Scalar};
use crate::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct CouplingScheme<T> {
    primitive: Vec<T>,
    mu: Vec<T>,
    /// `table[m-1][n-1] = λ_{m,n}`
    table: Vec<Vec<T>>,
}

impl<T: Scalar> CouplingScheme<T> {
    /// Builds the full table from `λ_{1,1}, …, λ_{ℓ,1}`.
    pub fn build(primitive: Vec<T>) -> Result<Self> {
        if primitive.is_empty() {
            return Err(Error::EmptyCouplings);
        }
        if let Some(i) = primitive.iter().position(T::is_zero) {
            return Err(Error::ZeroCoupling { index: i + 1 });
        }
        let ell = primitive.len();
        let mut mu = Vec::with_capacity(ell + 1);
        mu.push(T::one());
        for lam in &primitive {
            let next = mu.last().expect("mu_0 present").clone() * lam.clone();
            mu.push(next);
        }
        let table = (1..=ell)
            .map(|m| {
                (1..=m)
                    .map(|n| mu[m].clone() / (mu[n - 1].clone() * mu[m - n].clone()))
                    .collect()
            })
            .collect();
        Ok(CouplingScheme {
            primitive,
            mu,
            table,
        })
    }

    pub fn all_ones(max_cluster: usize) -> Self {
        Self::build(vec![T::one(); max_cluster]).expect("ones are nonzero")
    }

    pub fn max_cluster(&self) -> usize {
        self.primitive.len()
    }

    pub fn primitive(&self) -> &[T] {
        &self.primitive
    }

    /// `μ_m` for `m = 0..=ℓ`.
    pub fn mu(&self) -> &[T] {
        &self.mu
    }

    /// `λ_{m,n}` for `1 <= n <= m <= ℓ`.
    pub fn lambda(&self, m: usize, n: usize) -> &T {
        assert!(
            1 <= n && n <= m && m <= self.max_cluster(),
            "λ_{{{m},{n}}} out of range"
        );
        &self.table[m - 1][n - 1]
    }

    /// Copy with one table entry replaced; the result generally violates the
    /// nilpotency relations.
    pub fn with_entry(&self, m: usize, n: usize, value: T) -> Self {
        let mut out = self.clone();
        out.table[m - 1][n - 1] = value;
        out
    }
}

impl<T: Scalar + PartialEq> CouplingScheme<T> {
    /// Checks every relation `λ_{m,n} λ_{m-n,p-n} = λ_{m,p} λ_{p-1,n}`,
    /// `1 <= n < p <= m <= ℓ`, exactly.
    pub fn check_compatibility(&self) -> bool {
        let ell = self.max_cluster();
        for m in 1..=ell {
            for p in 2..=m {
                for n in 1..p {
                    let lhs = self.lambda(m, n).clone() * self.lambda(m - n, p - n).clone();
                    let rhs = self.lambda(m, p).clone() * self.lambda(p - 1, n).clone();
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Parses a comma-separated list such as `"1,2/3,-5"`.
pub fn parse_primitives(s: &str) -> Result<Vec<Rational>> {
    s.split(',')
        .map(|t| parse_rational(t).ok_or_else(|| Error::Parse(t.to_string())))
        .collect()
}

/// Random scheme with primitives `±a/b`, `a, b ∈ 1..=9`.
pub fn random_scheme<R: Rng + ?Sized>(max_cluster: usize, rng: &mut R) -> CouplingScheme<Rational> {
    let primitive = (0..max_cluster)
        .map(|_| {
            let a: i64 = rng.random_range(1..=9);
            let b: i64 = rng.random_range(1..=9);
            let sign = if rng.random_bool(0.5) { 1 } else { -1 };
            crate::scalar::ratio(sign * a, b)
        })
        .collect();
    CouplingScheme::build(primitive).expect("random primitives are nonzero")
}
