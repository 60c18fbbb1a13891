//! Exact rank and kernel against a dense rational elimination.

use mell_core::linalg::{kernel_basis, rank, rank_modular, rank_of_vectors};
use mell_core::scalar::rational;
use mell_core::{Rational, SparseMatrix};
use proptest::prelude::*;

mod common;

fn dense_rank(rows: &[Vec<i64>]) -> usize {
    common::dense_rank(
        &rows
            .iter()
            .map(|r| r.iter().map(|&v| rational(v)).collect())
            .collect::<Vec<Vec<_>>>(),
    )
}

fn to_sparse(rows: &[Vec<i64>]) -> SparseMatrix<Rational> {
    let n_cols = rows.first().map_or(0, Vec::len);
    SparseMatrix::from_triplets(
        rows.len(),
        n_cols,
        rows.iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &v)| (i, j, rational(v)))),
    )
}

/// Sparse-ish integer matrices with repeated and combined rows, so that
/// rank deficiency is common.
fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..9, 1usize..9).prop_flat_map(|(r, c)| {
        let entry = prop_oneof![3 => Just(0i64), 2 => -3i64..=3];
        (
            prop::collection::vec(prop::collection::vec(entry, c), r),
            prop::collection::vec((0..r, 0..r, -2i64..=2), 0..3),
        )
            .prop_map(|(mut rows, combos)| {
                for (i, j, k) in combos {
                    let combined: Vec<i64> = rows[i]
                        .iter()
                        .zip(&rows[j])
                        .map(|(a, b)| a + k * b)
                        .collect();
                    rows.push(combined);
                }
                rows
            })
    })
}

proptest! {
  #![proptest_config(ProptestConfig::with_cases(256))]

  #[test]
  fn rank_matches_dense_elimination(rows in matrix_strategy()) {
    prop_assert_eq!(rank(&to_sparse(&rows)), dense_rank(&rows));
  }

  #[test]
  fn rank_of_transpose(rows in matrix_strategy()) {
    let m = to_sparse(&rows);
    prop_assert_eq!(rank(&m), rank(&m.transpose()));
  }

  #[test]
  fn rank_ignores_row_order(rows in matrix_strategy(), shift in 0usize..8) {
    let mut permuted = rows.clone();
    let k = shift % permuted.len();
    permuted.rotate_left(k);
    permuted.reverse();
    prop_assert_eq!(rank(&to_sparse(&rows)), rank(&to_sparse(&permuted)));
  }

  #[test]
  fn kernel_is_a_basis_of_the_null_space(rows in matrix_strategy()) {
    let m = to_sparse(&rows);
    let k = kernel_basis(&m);
    prop_assert_eq!(k.len() + rank(&m), m.n_cols());
    prop_assert_eq!(rank_of_vectors(m.n_cols(), &k), k.len());
    for v in &k {
      prop_assert!(m.mul_vec(v).is_empty());
    }
  }

  #[test]
  fn modular_rank_is_a_lower_bound(rows in matrix_strategy(), seed in any::<u64>()) {
    let m = to_sparse(&rows);
    let r = rank_modular(&m, seed, true).unwrap();
    prop_assert!(r.rank <= r.exact.unwrap());
  }
}

#[test]
fn zero_and_empty_shapes() {
    assert_eq!(rank(&SparseMatrix::<Rational>::zeros(0, 4)), 0);
    assert_eq!(
        kernel_basis(&SparseMatrix::<Rational>::zeros(0, 3)).len(),
        3
    );
    assert!(kernel_basis(&SparseMatrix::<Rational>::zeros(2, 0)).is_empty());
}
