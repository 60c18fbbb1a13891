//! Basis enumeration against a string-based brute force.

use mell_core::state_space::enumerate_basis;
use mell_core::{ChainSpec, Configuration};

mod common;
use common::{all_specs, brute_basis};

#[test]
fn enumeration_matches_brute_force() {
    for spec in all_specs(11) {
        let basis = enumerate_basis(&spec).unwrap();
        let expected = brute_basis(&spec);
        let got: Vec<Vec<u64>> = basis
            .iter()
            .map(|(_, g)| g.iter().map(|c| c.0).collect())
            .collect();
        assert_eq!(got, expected, "{spec}");
    }
}

#[test]
fn four_site_ring_dims() {
    let basis = enumerate_basis(&ChainSpec::periodic(4, 1).unwrap()).unwrap();
    assert_eq!(basis.dims(), vec![1, 4, 2]);
}

#[test]
fn three_site_free_chain_with_pairs() {
    // the 3-cluster is the only excluded word
    let basis = enumerate_basis(&ChainSpec::free(3, 2).unwrap()).unwrap();
    assert_eq!(basis.dims(), vec![1, 3, 3]);
}

#[test]
fn index_lookup_round_trips() {
    let basis = enumerate_basis(&ChainSpec::special(9, 2, 1, 0).unwrap()).unwrap();
    for (f, grade) in basis.iter() {
        for (i, c) in grade.iter().enumerate() {
            assert_eq!(basis.index_of(*c), Some((f, i)));
        }
    }
    assert_eq!(
        basis.index_of(Configuration::from_sites("111000000").unwrap()),
        None
    );
}

#[test]
fn empty_caps_pin_end_sites() {
    // special(0,0) on N sites is the free chain on the N-2 interior sites
    for ell in 1..=3 {
        for n in 3..=11 {
            let pinned = enumerate_basis(&ChainSpec::special(n, ell, 0, 0).unwrap()).unwrap();
            let inner = enumerate_basis(&ChainSpec::free(n - 2, ell).unwrap()).unwrap();
            let shifted: Vec<Vec<u64>> = inner
                .iter()
                .map(|(_, g)| g.iter().map(|c| c.0 << 1).collect())
                .collect();
            let got: Vec<Vec<u64>> = pinned
                .iter()
                .map(|(_, g)| g.iter().map(|c| c.0).collect())
                .collect();
            assert_eq!(got, shifted, "ell={ell} N={n}");
        }
    }
}
