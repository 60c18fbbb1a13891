//! Hamiltonian blocks: symmetry, commutation with Q, and zero modes.

use mell_core::cohomology::betti_numbers;
use mell_core::couplings::random_scheme;
use mell_core::hamiltonian::{build_all_h, exact_zero_modes, numeric_zero_modes, DEFAULT_TOL};
use mell_core::state_space::enumerate_basis;
use mell_core::supercharge::build_all_q;
use mell_core::{ChainSpec, QScheme};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod common;
use common::all_specs;

fn spec_strategy() -> impl Strategy<Value = ChainSpec> {
    (
        1usize..=3,
        1usize..=10,
        0usize..=3,
        0usize..=3,
        any::<bool>(),
    )
        .prop_map(|(ell, n, c1, cn, periodic)| {
            if periodic {
                ChainSpec::periodic(n, ell).unwrap()
            } else {
                ChainSpec::special(n, ell, c1.min(ell), cn.min(ell)).unwrap()
            }
        })
}

proptest! {
  #![proptest_config(ProptestConfig::with_cases(48))]

  #[test]
  fn h_is_symmetric_and_commutes_with_q(spec in spec_strategy(), seed in any::<u64>()) {
    let scheme = random_scheme(spec.max_cluster, &mut ChaCha8Rng::seed_from_u64(seed));
    let basis = enumerate_basis(&spec).unwrap();
    let q = build_all_q(&basis, &scheme).unwrap();
    let h = build_all_h(&basis, &scheme).unwrap();
    for (f, block) in h.iter().enumerate() {
      prop_assert!(block.is_symmetric(), "{} f={}", spec, f);
    }
    for f in 0..h.len() - 1 {
      prop_assert_eq!(q[f].mul(&h[f]), h[f + 1].mul(&q[f]), "{} f={}", spec, f);
    }
  }
}

#[test]
fn exact_and_numeric_zero_modes_equal_betti() {
    for spec in all_specs(9) {
        let scheme = QScheme::all_ones(spec.max_cluster);
        let basis = enumerate_basis(&spec).unwrap();
        let betti = betti_numbers(&basis, &scheme).unwrap();
        let q = build_all_q(&basis, &scheme).unwrap();
        let h = build_all_h(&basis, &scheme).unwrap();
        for f in 0..h.len() {
            let cert = exact_zero_modes(&q, f, 17).unwrap();
            assert_eq!(cert.kernel_dim, betti[f], "{spec} f={f}");
            assert_eq!(
                numeric_zero_modes(&h[f], DEFAULT_TOL).unwrap(),
                betti[f],
                "{spec} f={f}"
            );
        }
    }
}

#[test]
fn three_site_ring_zero_modes() {
    // the N=3 ring has two states at f=1 and nothing else
    let spec = ChainSpec::periodic(3, 1).unwrap();
    let basis = enumerate_basis(&spec).unwrap();
    let h = build_all_h(&basis, &QScheme::all_ones(1)).unwrap();
    let zero: Vec<usize> = h
        .iter()
        .map(|b| numeric_zero_modes(b, DEFAULT_TOL).unwrap())
        .collect();
    assert_eq!(zero, vec![0, 2]);
}
