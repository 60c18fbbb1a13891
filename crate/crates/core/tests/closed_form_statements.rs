//! Published closed-form ground-state counts, transcribed literally and
//! compared with computed cohomology. Chain lengths are written as
//! `N = n(ℓ+2) + p + 1` with `0 <= p <= ℓ+1`.

use mell_core::cohomology::{full_report, ReportOptions};
use mell_core::{ChainSpec, QScheme};

fn computed(spec: &ChainSpec) -> Vec<(usize, usize)> {
    full_report(
        spec,
        &QScheme::all_ones(spec.max_cluster),
        ReportOptions::default(),
    )
    .unwrap()
    .nonzero()
}

fn split_length(n_sites: usize, ell: usize) -> (usize, usize) {
    ((n_sites - 1) / (ell + 2), (n_sites - 1) % (ell + 2))
}

#[test]
fn closed_chain_ground_states() {
    for ell in 1..=3 {
        for n_sites in 1..=13 {
            let (n, p) = split_length(n_sites, ell);
            let expected = if p <= ell {
                vec![(n * ell + p, 1)]
            } else {
                vec![((n + 1) * ell, ell + 1)]
            };
            assert_eq!(
                computed(&ChainSpec::periodic(n_sites, ell).unwrap()),
                expected,
                "ell={ell} N={n_sites}"
            );
        }
    }
}

#[test]
fn open_chain_regions() {
    for ell in 1..=3 {
        for n_sites in ell + 3..=13 {
            let (n, p) = split_length(n_sites, ell);
            for c1 in 0..=ell {
                for cn in 0..=ell {
                    let case_i = p <= ell && c1 >= p && cn >= p && c1 + cn <= ell + p;
                    let case_ii = p >= 1 && c1 < p && cn < p && c1 + cn + 1 >= p;
                    let expected = match (case_i, case_ii) {
                        (true, false) => vec![(n * ell + p, 1)],
                        (false, true) => vec![(n * ell + p - 1, 1)],
                        (false, false) => vec![],
                        (true, true) => unreachable!("regions are disjoint"),
                    };
                    let spec = ChainSpec::special(n_sites, ell, c1, cn).unwrap();
                    assert_eq!(computed(&spec), expected, "{spec}");
                }
            }
        }
    }
}

#[test]
fn free_chain_needs_p_at_least_ell() {
    for ell in 1..=3 {
        for n_sites in 1..=13 {
            let (n, p) = split_length(n_sites, ell);
            let expected = if p >= ell {
                vec![((n + 1) * ell, 1)]
            } else {
                vec![]
            };
            assert_eq!(
                computed(&ChainSpec::free(n_sites, ell).unwrap()),
                expected,
                "ell={ell} N={n_sites}"
            );
        }
    }
}

#[test]
fn short_open_chains() {
    for ell in 1..=3 {
        for n_sites in 1..=ell + 2 {
            let k = n_sites - 1;
            for c1 in 0..=ell {
                for cn in 0..=ell {
                    let case_i =
                        n_sites <= ell + 1 && ((c1 == k && cn > k) || (cn == k && c1 >= k));
                    let case_ii = n_sites >= 2
                        && c1 + 2 <= n_sites
                        && cn + 2 <= n_sites
                        && c1 + cn + 2 >= n_sites;
                    let expected = match (case_i, case_ii) {
                        (true, _) => vec![(n_sites - 1, 1)],
                        (false, true) => vec![(n_sites - 2, 1)],
                        (false, false) => vec![],
                    };
                    let spec = ChainSpec::special(n_sites, ell, c1, cn).unwrap();
                    assert_eq!(computed(&spec), expected, "{spec}");
                }
            }
        }
    }
}

#[test]
fn medium_open_chains() {
    for ell in 1..=3 {
        for n_sites in ell + 3..=2 * ell + 2 {
            let lo = n_sites - ell - 3;
            for c1 in 0..=ell {
                for cn in 0..=ell {
                    let case_i = c1 >= lo && cn >= lo && c1 + cn + 2 < n_sites;
                    let case_ii =
                        n_sites > ell + 3 && c1 < lo && cn < lo && c1 + cn + 4 >= n_sites - ell;
                    let expected = match (case_i, case_ii) {
                        (true, _) => vec![(n_sites - 3, 1)],
                        (false, true) => vec![(n_sites - 4, 1)],
                        (false, false) => vec![],
                    };
                    let spec = ChainSpec::special(n_sites, ell, c1, cn).unwrap();
                    assert_eq!(computed(&spec), expected, "{spec}");
                }
            }
        }
    }
}

#[test]
fn short_closed_chains() {
    for ell in 1..=3 {
        for n_sites in 1..=ell + 1 {
            assert_eq!(
                computed(&ChainSpec::periodic(n_sites, ell).unwrap()),
                vec![(n_sites - 1, 1)]
            );
        }
        for n_sites in ell + 3..=2 * ell + 2 {
            assert_eq!(
                computed(&ChainSpec::periodic(n_sites, ell).unwrap()),
                vec![(n_sites - 3, 1)]
            );
        }
    }
}

#[test]
fn closed_chain_of_length_ell_plus_two() {
    // The stated particle count N-1 = ℓ+1 disagrees with the general closed
    // chain formula; computation sides with the latter.
    for ell in 1..=3 {
        let got = computed(&ChainSpec::periodic(ell + 2, ell).unwrap());
        assert_eq!(got, vec![(ell, ell + 1)]);
        assert_ne!(got[0].0, ell + 1);
    }
}
