//! Brute-force reference constructions shared by the integration tests. They
//! work on plain strings and dense rational arrays and use nothing from the
//! library except its spec and scalar types.
#![allow(dead_code)]

use mell_core::scalar::rational;
use mell_core::{Boundary, ChainSpec, Rational};
use num_traits::Zero;

/// Allowed iff every run of `1`s is at most `ell` long; runs touching the ends
/// obey the caps on open chains, and on closed chains the two end runs join.
pub fn allowed_by_strings(occ: &[bool], ell: usize, boundary: Boundary) -> bool {
    let text: String = occ.iter().map(|&b| if b { '1' } else { '0' }).collect();
    match boundary {
        Boundary::Periodic => {
            let Some(z) = text.find('0') else {
                return false;
            };
            // rotate so the string starts just after an empty site
            let rotated = format!("{}{}", &text[z + 1..], &text[..z + 1]);
            rotated.split('0').all(|run| run.len() <= ell)
        }
        Boundary::Special { c1, cn } => {
            let runs: Vec<&str> = text.split('0').collect();
            let first = runs.first().map_or(0, |r| r.len());
            let last = runs.last().map_or(0, |r| r.len());
            runs.iter().all(|r| r.len() <= ell) && first <= c1 && last <= cn
        }
    }
}

/// Allowed words grouped by particle number, each group in increasing order.
pub fn brute_basis(spec: &ChainSpec) -> Vec<Vec<u64>> {
    let n = spec.n_sites;
    let mut grades: Vec<Vec<u64>> = vec![Vec::new(); n + 1];
    for w in 0u64..(1 << n) {
        let occ: Vec<bool> = (0..n).map(|i| (w >> i) & 1 == 1).collect();
        if allowed_by_strings(&occ, spec.max_cluster, spec.boundary) {
            grades[w.count_ones() as usize].push(w);
        }
    }
    while grades.last().is_some_and(Vec::is_empty) {
        grades.pop();
    }
    grades
}

/// `λ_{m,n} = μ_m / (μ_{n-1} μ_{m-n})` with `μ_k = λ_{1,1} ⋯ λ_{k,1}`.
pub fn lambda_from_primitives(prim: &[Rational], m: usize, n: usize) -> Rational {
    let mu = |k: usize| prim[..k].iter().fold(rational(1), |acc, x| acc * x);
    mu(m) / (mu(n - 1) * mu(m - n))
}

/// Length of the cluster of `occ` holding site index `i` and the position of
/// `i` in it, counted from the start of the cluster (cyclically on a ring).
pub fn cluster_of(occ: &[bool], i: usize, periodic: bool) -> (usize, usize) {
    let n = occ.len();
    let order: Vec<usize> = if periodic {
        let z = occ
            .iter()
            .position(|&b| !b)
            .expect("ring has an empty site");
        (1..=n).map(|k| (z + k) % n).collect()
    } else {
        (0..n).collect()
    };
    let at = order.iter().position(|&s| s == i).expect("site in order");
    let mut start = at;
    while start > 0 && occ[order[start - 1]] {
        start -= 1;
    }
    let mut end = at;
    while end + 1 < n && occ[order[end + 1]] {
        end += 1;
    }
    (end - start + 1, at - start + 1)
}

/// Dense `Q†` from grade `f+1` to grade `f` of [`brute_basis`], built by
/// removing one particle at a time.
pub fn removal_dense(spec: &ChainSpec, prim: &[Rational], f: usize) -> Vec<Vec<Rational>> {
    let basis = brute_basis(spec);
    let n = spec.n_sites;
    let periodic = matches!(spec.boundary, Boundary::Periodic);
    let empty = Vec::new();
    let (src, tgt) = (
        basis.get(f + 1).unwrap_or(&empty),
        basis.get(f).unwrap_or(&empty),
    );
    let mut out = vec![vec![Rational::zero(); src.len()]; tgt.len()];
    for (col, tau) in src.iter().enumerate() {
        let occ: Vec<bool> = (0..n).map(|s| (tau >> s) & 1 == 1).collect();
        for i in (0..n).filter(|&s| occ[s]) {
            let (m, k) = cluster_of(&occ, i, periodic);
            let left = occ[..i].iter().filter(|&&b| b).count();
            let amp = lambda_from_primitives(prim, m, k);
            let row = tgt
                .binary_search(&(tau & !(1u64 << i)))
                .expect("removal stays allowed");
            out[row][col] = if left % 2 == 1 { -amp } else { amp };
        }
    }
    out
}

/// Rank by textbook row reduction.
pub fn dense_rank(rows: &[Vec<Rational>]) -> usize {
    let mut a = rows.to_vec();
    let n_cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..n_cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let factor = &a[i][c] / &a[r][c];
                let pivot = a[r].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot) {
                    *x -= &factor * p;
                }
            }
        }
        r += 1;
    }
    r
}

/// Betti numbers from the removal operator: `rank Q_f = rank Q_f†`.
pub fn brute_betti(spec: &ChainSpec, prim: &[Rational]) -> Vec<usize> {
    let basis = brute_basis(spec);
    let ranks: Vec<usize> = (0..basis.len())
        .map(|f| dense_rank(&removal_dense(spec, prim, f)))
        .collect();
    (0..basis.len())
        .map(|f| basis[f].len() - ranks[f] - if f > 0 { ranks[f - 1] } else { 0 })
        .collect()
}

/// Every spec with `ℓ ∈ 1..=3` and `N ∈ 1..=max_sites`.
pub fn all_specs(max_sites: usize) -> Vec<ChainSpec> {
    let mut out = Vec::new();
    for ell in 1..=3 {
        for n in 1..=max_sites {
            out.push(ChainSpec::periodic(n, ell).unwrap());
            for c1 in 0..=ell {
                for cn in 0..=ell {
                    out.push(ChainSpec::special(n, ell, c1, cn).unwrap());
                }
            }
        }
    }
    out
}
