//! Occupation configurations of a chain with cluster exclusion.
//!
//! Sites `1..=N` are stored in the bits `0..N` of a `u64` word, site 1 being
//! the lowest bit. A configuration is allowed when every maximal run of
//! occupied sites (a cluster) has length at most `ℓ`; special boundary
//! conditions additionally cap the clusters touching site 1 and site N.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest chain handled by the word encoding.
pub const MAX_SITES: usize = 48;

/// Upper bound on the number of configurations materialized by
/// [`enumerate_basis`].
pub const MAX_BASIS_SIZE: usize = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    /// Open chain; the cluster containing site 1 (site N) has length at most
    /// `c1` (`cn`). `Special { c1: ℓ, cn: ℓ }` is the free chain.
    Special {
        c1: usize,
        cn: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChainSpec {
    pub n_sites: usize,
    pub max_cluster: usize,
    pub boundary: Boundary,
}

impl ChainSpec {
    pub fn new(n_sites: usize, max_cluster: usize, boundary: Boundary) -> Result<Self> {
        if n_sites == 0 {
            return Err(Error::InvalidSpec("chain needs at least one site".into()));
        }
        if n_sites > MAX_SITES {
            return Err(Error::TooLarge {
                what: "chain",
                size: n_sites,
                limit: MAX_SITES,
            });
        }
        if max_cluster == 0 {
            return Err(Error::InvalidSpec(
                "cluster bound ℓ must be at least 1".into(),
            ));
        }
        if let Boundary::Special { c1, cn } = boundary {
            if c1 > max_cluster || cn > max_cluster {
                return Err(Error::InvalidSpec(format!(
                    "special boundary ({c1},{cn}) outside [0,{max_cluster}]"
                )));
            }
        }
        Ok(ChainSpec {
            n_sites,
            max_cluster,
            boundary,
        })
    }

    pub fn periodic(n_sites: usize, max_cluster: usize) -> Result<Self> {
        Self::new(n_sites, max_cluster, Boundary::Periodic)
    }

    pub fn special(n_sites: usize, max_cluster: usize, c1: usize, cn: usize) -> Result<Self> {
        Self::new(n_sites, max_cluster, Boundary::Special { c1, cn })
    }

    /// Free open chain, `Special(ℓ, ℓ)`.
    pub fn free(n_sites: usize, max_cluster: usize) -> Result<Self> {
        Self::special(n_sites, max_cluster, max_cluster, max_cluster)
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.boundary, Boundary::Periodic)
    }

    /// Same boundary on a chain of another length.
    pub fn with_sites(&self, n_sites: usize) -> Result<Self> {
        Self::new(n_sites, self.max_cluster, self.boundary)
    }

    pub fn full_mask(&self) -> u64 {
        low_mask(self.n_sites)
    }

    /// Comma-free boundary label: `periodic` or `special:c1:cN`.
    pub fn boundary_label(&self) -> String {
        match self.boundary {
            Boundary::Periodic => "periodic".into(),
            Boundary::Special { c1, cn } => format!("special:{c1}:{cn}"),
        }
    }

    /// Sort key used for canonical report order: (ℓ, N, boundary).
    pub fn sort_key(&self) -> (usize, usize, Boundary) {
        (self.max_cluster, self.n_sites, self.boundary)
    }
}

impl fmt::Display for ChainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.boundary {
            Boundary::Periodic => write!(f, "ell={} N={} periodic", self.max_cluster, self.n_sites),
            Boundary::Special { c1, cn } => write!(
                f,
                "ell={} N={} special({},{})",
                self.max_cluster, self.n_sites, c1, cn
            ),
        }
    }
}

pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Occupation word; bit `i-1` is the occupation of site `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Configuration(pub u64);

impl Configuration {
    pub fn occupied(self, site: usize) -> bool {
        (self.0 >> (site - 1)) & 1 == 1
    }

    pub fn popcount(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn with_site(self, site: usize) -> Self {
        Configuration(self.0 | (1 << (site - 1)))
    }

    /// Parses a left-to-right site string such as `"0110"` (site 1 first).
    pub fn from_sites(s: &str) -> Option<Self> {
        let mut w = 0u64;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '1' => w |= 1 << i,
                '0' => {}
                _ => return None,
            }
        }
        Some(Configuration(w))
    }

    /// Left-to-right site string on `n` sites.
    pub fn to_sites(self, n: usize) -> String {
        (1..=n)
            .map(|s| if self.occupied(s) { '1' } else { '0' })
            .collect()
    }
}

/// Maximal run of occupied sites. On a periodic chain the fully occupied ring
/// is reported as a single cluster of length `N + 1`, which no bound admits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cluster {
    pub start_site: usize,
    pub length: usize,
}

pub fn cluster_decomposition(spec: &ChainSpec, config: Configuration) -> Vec<Cluster> {
    let n = spec.n_sites;
    let w = config.0 & spec.full_mask();
    if w == 0 {
        return Vec::new();
    }
    if spec.is_periodic() && w == spec.full_mask() {
        return vec![Cluster {
            start_site: 1,
            length: n + 1,
        }];
    }
    let mut runs = Vec::new();
    let mut i = 1;
    while i <= n {
        if config.occupied(i) {
            let start = i;
            while i <= n && config.occupied(i) {
                i += 1;
            }
            runs.push(Cluster {
                start_site: start,
                length: i - start,
            });
        } else {
            i += 1;
        }
    }
    if spec.is_periodic() && runs.len() >= 2 && config.occupied(1) && config.occupied(n) {
        let tail = runs.pop().expect("at least two runs");
        runs[0] = Cluster {
            start_site: tail.start_site,
            length: tail.length + runs[0].length,
        };
    }
    runs
}

/// Length `m` of the cluster holding the occupied `site` and the 1-based
/// position `k` of `site` inside it, counted from the cluster's start site in
/// increasing (cyclic) site order. `None` for the fully occupied ring.
pub fn cluster_position(
    spec: &ChainSpec,
    config: Configuration,
    site: usize,
) -> Option<(usize, usize)> {
    let n = spec.n_sites;
    debug_assert!(config.occupied(site));
    let periodic = spec.is_periodic();
    if periodic && config.0 & spec.full_mask() == spec.full_mask() {
        return None;
    }
    let step_left = |s: usize| -> Option<usize> {
        if s > 1 {
            Some(s - 1)
        } else if periodic {
            Some(n)
        } else {
            None
        }
    };
    let step_right = |s: usize| -> Option<usize> {
        if s < n {
            Some(s + 1)
        } else if periodic {
            Some(1)
        } else {
            None
        }
    };
    let mut left = 0;
    let mut s = site;
    while let Some(t) = step_left(s) {
        if !config.occupied(t) {
            break;
        }
        left += 1;
        s = t;
    }
    let mut right = 0;
    let mut s = site;
    while let Some(t) = step_right(s) {
        if !config.occupied(t) {
            break;
        }
        right += 1;
        s = t;
    }
    Some((left + 1 + right, left + 1))
}

pub fn is_allowed(spec: &ChainSpec, config: Configuration) -> bool {
    let n = spec.n_sites;
    if config.0 & !spec.full_mask() != 0 {
        return false;
    }
    let clusters = cluster_decomposition(spec, config);
    if spec.is_periodic() && config.0 == spec.full_mask() {
        return false;
    }
    if clusters.iter().any(|c| c.length > spec.max_cluster) {
        return false;
    }
    if let Boundary::Special { c1, cn } = spec.boundary {
        for c in &clusters {
            let end = c.start_site + c.length - 1;
            if c.start_site == 1 && c.length > c1 {
                return false;
            }
            if end == n && c.length > cn {
                return false;
            }
        }
    }
    true
}

/// Allowed configurations graded by particle number; each grade is sorted by
/// word value. Grades `0..=f_max` are all nonempty since removing a particle
/// never creates a forbidden cluster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    pub spec: ChainSpec,
    grades: Vec<Vec<Configuration>>,
}

impl GradedBasis {
    pub fn f_max(&self) -> usize {
        self.grades.len() - 1
    }

    pub fn grade(&self, f: usize) -> &[Configuration] {
        self.grades.get(f).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn dim(&self, f: usize) -> usize {
        self.grade(f).len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.grades.iter().map(Vec::len).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.grades.iter().map(Vec::len).sum()
    }

    /// `(f, position)` of an allowed configuration.
    pub fn index_of(&self, config: Configuration) -> Option<(usize, usize)> {
        let f = config.popcount();
        let pos = self.grade(f).binary_search(&config).ok()?;
        Some((f, pos))
    }

    pub fn position(&self, config: Configuration) -> Option<usize> {
        self.grade(config.popcount()).binary_search(&config).ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &[Configuration])> {
        self.grades
            .iter()
            .enumerate()
            .map(|(f, g)| (f, g.as_slice()))
    }

    pub fn to_export(&self) -> BasisExport {
        BasisExport {
            n_sites: self.spec.n_sites,
            max_cluster: self.spec.max_cluster,
            boundary: self.spec.boundary,
            grades: self
                .iter()
                .map(|(f, g)| GradeExport {
                    f,
                    dim: g.len(),
                    words: g.iter().map(|c| c.0).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisExport {
    pub n_sites: usize,
    pub max_cluster: usize,
    pub boundary: Boundary,
    pub grades: Vec<GradeExport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradeExport {
    pub f: usize,
    pub dim: usize,
    pub words: Vec<u64>,
}

/// Depth-first generation of the allowed words. Runs are pruned against `ℓ`
/// and `c1` while walking; the seam and the `cN` cap are checked on the leaves.
pub fn enumerate_basis(spec: &ChainSpec) -> Result<GradedBasis> {
    let n = spec.n_sites;
    let first_cap = match spec.boundary {
        Boundary::Special { c1, .. } => c1.min(spec.max_cluster),
        Boundary::Periodic => spec.max_cluster,
    };
    let mut words: Vec<u64> = Vec::new();
    // (next site, word, current run length, still inside the run from site 1)
    let mut stack = vec![(1usize, 0u64, 0usize, true)];
    while let Some((site, w, run, leading)) = stack.pop() {
        if site > n {
            if is_allowed(spec, Configuration(w)) {
                words.push(w);
                if words.len() > MAX_BASIS_SIZE {
                    return Err(Error::TooLarge {
                        what: "basis",
                        size: words.len(),
                        limit: MAX_BASIS_SIZE,
                    });
                }
            }
            continue;
        }
        stack.push((site + 1, w, 0, false));
        let run = run + 1;
        let cap = if leading { first_cap } else { spec.max_cluster };
        if run <= cap {
            stack.push((site + 1, w | (1 << (site - 1)), run, leading));
        }
    }
    let mut grades: Vec<Vec<Configuration>> = Vec::new();
    for w in words {
        let f = w.count_ones() as usize;
        if grades.len() <= f {
            grades.resize_with(f + 1, Vec::new);
        }
        grades[f].push(Configuration(w));
    }
    for g in &mut grades {
        g.sort_unstable();
    }
    debug_assert!(grades.iter().all(|g| !g.is_empty()));
    Ok(GradedBasis {
        spec: *spec,
        grades,
    })
}

/// Number of allowed configurations with `f` particles.
pub fn dim(spec: &ChainSpec, f: usize) -> Result<usize> {
    Ok(enumerate_basis(spec)?.dim(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(s: &str) -> Configuration {
        Configuration::from_sites(s).unwrap()
    }

    fn lengths(spec: &ChainSpec, s: &str) -> Vec<usize> {
        cluster_decomposition(spec, cfg(s))
            .iter()
            .map(|c| c.length)
            .collect()
    }

    #[test]
    fn clusters_open_and_closed() {
        let open = ChainSpec::free(12, 3).unwrap();
        assert_eq!(lengths(&open, "101110011001"), vec![1, 3, 2, 1]);
        let ring = ChainSpec::periodic(12, 3).unwrap();
        let cl = cluster_decomposition(&ring, cfg("101110011001"));
        assert_eq!(
            cl.iter().map(|c| c.length).collect::<Vec<_>>(),
            vec![2, 3, 2]
        );
        // seam cluster starts at site 12
        assert_eq!(cl[0].start_site, 12);
        assert!(lengths(&ring, "000000000000").is_empty());
    }

    #[test]
    fn full_ring_is_unbounded() {
        let ring = ChainSpec::periodic(4, 3).unwrap();
        assert_eq!(
            cluster_decomposition(&ring, cfg("1111")),
            vec![Cluster {
                start_site: 1,
                length: 5
            }]
        );
        assert!(!is_allowed(&ring, cfg("1111")));
        // even when N + 1 <= ℓ
        let tiny = ChainSpec::periodic(1, 3).unwrap();
        assert!(!is_allowed(&tiny, cfg("1")));
    }

    #[test]
    fn allowed_examples() {
        assert!(is_allowed(&ChainSpec::periodic(4, 1).unwrap(), cfg("1010")));
        assert!(!is_allowed(
            &ChainSpec::periodic(4, 1).unwrap(),
            cfg("1001")
        ));
        assert!(!is_allowed(&ChainSpec::free(3, 2).unwrap(), cfg("111")));
        let s = ChainSpec::special(4, 2, 0, 2).unwrap();
        assert!(!is_allowed(&s, cfg("1000")));
        assert!(is_allowed(&s, cfg("0011")));
        assert!(!is_allowed(
            &ChainSpec::special(4, 2, 2, 1).unwrap(),
            cfg("0011")
        ));
    }

    #[test]
    fn cluster_position_seam() {
        let ring = ChainSpec::periodic(5, 3).unwrap();
        // sites 5,1,2 form a 3-cluster starting at site 5
        let c = cfg("11001");
        assert_eq!(cluster_position(&ring, c, 5), Some((3, 1)));
        assert_eq!(cluster_position(&ring, c, 1), Some((3, 2)));
        assert_eq!(cluster_position(&ring, c, 2), Some((3, 3)));
        let open = ChainSpec::free(5, 3).unwrap();
        assert_eq!(cluster_position(&open, c, 1), Some((2, 1)));
        assert_eq!(cluster_position(&open, c, 5), Some((1, 1)));
    }

    #[test]
    fn invalid_specs() {
        assert!(ChainSpec::special(3, 2, 3, 0).is_err());
        assert!(ChainSpec::periodic(0, 1).is_err());
        assert!(ChainSpec::periodic(3, 0).is_err());
        assert!(ChainSpec::periodic(MAX_SITES + 1, 1).is_err());
    }

    #[test]
    fn grade_dims_small() {
        assert_eq!(
            enumerate_basis(&ChainSpec::periodic(4, 1).unwrap())
                .unwrap()
                .dims(),
            vec![1, 4, 2]
        );
        assert_eq!(
            enumerate_basis(&ChainSpec::free(2, 2).unwrap())
                .unwrap()
                .dims(),
            vec![1, 2, 1]
        );
        assert_eq!(dim(&ChainSpec::periodic(5, 1).unwrap(), 2).unwrap(), 5);
        assert_eq!(dim(&ChainSpec::periodic(5, 1).unwrap(), 3).unwrap(), 0);
        assert_eq!(dim(&ChainSpec::special(6, 3, 0, 1).unwrap(), 0).unwrap(), 1);
    }

    #[test]
    fn basis_lookup() {
        let b = enumerate_basis(&ChainSpec::free(5, 2).unwrap()).unwrap();
        for (f, g) in b.iter() {
            for (i, c) in g.iter().enumerate() {
                assert_eq!(b.index_of(*c), Some((f, i)));
            }
        }
        assert_eq!(b.index_of(cfg("11100")), None);
    }

    #[test]
    fn site_strings_roundtrip() {
        assert_eq!(cfg("0110").to_sites(4), "0110");
        assert_eq!(cfg("1000").0, 1);
        assert_eq!(Configuration::from_sites("01x"), None);
    }
}
