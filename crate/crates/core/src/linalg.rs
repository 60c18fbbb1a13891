//! Exact sparse linear algebra.
//!
//! Rank and kernel come from sparse Gaussian elimination with Markowitz pivot
//! selection: among the sparsest active columns the pivot minimizing
//! `(row_count - 1) * (col_count - 1)` is taken, ties going to the lowest
//! column and then the lowest row index, so the elimination order is a
//! deterministic function of the matrix.
//!
//! Rational matrices are eliminated fraction-free: each row is scaled to a
//! primitive integer vector and the update `p·r - a·s` is divided by its
//! content, which keeps coefficient growth far below that of unit-pivot
//! rational elimination. Fields such as [`Zp`] use unit pivots.
//!
//! A modular path reduces the matrix modulo a prime above `2^30`, runs the
//! sparse elimination over [`Zp`] until fill-in makes the active block dense
//! and finishes with dense elimination. Its rank never exceeds the rational rank.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{ExactField, Zp, MODULAR_PRIMES};
use crate::sparse::{SparseMatrix, SparseVec};
use crate::Rational;

/// Number of sparsest columns inspected per Markowitz search.
const MARKOWITZ_COLUMNS: usize = 4;

/// Merges two sorted sparse rows entrywise through `f`, dropping zeros.
fn merge<T, U>(
    a: &[(usize, T)],
    b: &[(usize, T)],
    f: impl Fn(Option<&T>, Option<&T>) -> U,
    is_zero: impl Fn(&U) -> bool,
) -> SparseVec<U> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ci = a.get(i).map_or(usize::MAX, |e| e.0);
        let cj = b.get(j).map_or(usize::MAX, |e| e.0);
        let (col, v) = if ci < cj {
            i += 1;
            (ci, f(Some(&a[i - 1].1), None))
        } else if cj < ci {
            j += 1;
            (cj, f(None, Some(&b[j - 1].1)))
        } else {
            i += 1;
            j += 1;
            (ci, f(Some(&a[i - 1].1), Some(&b[j - 1].1)))
        };
        if !is_zero(&v) {
            out.push((col, v));
        }
    }
    out
}

fn entry<T>(row: &[(usize, T)], col: usize) -> &T {
    &row[row
        .binary_search_by_key(&col, |e| e.0)
        .expect("entry present")]
    .1
}

/// Row arithmetic of an elimination.
trait PivotRow: Sized + Clone {
    /// Rescales a row just chosen as pivot row.
    fn normalize(row: &mut SparseVec<Self>, pivot_col: usize);

    /// Clears `pivot_col` of `target` using the pivot row.
    fn reduce(
        target: &[(usize, Self)],
        pivot: &[(usize, Self)],
        pivot_col: usize,
    ) -> SparseVec<Self>;
}

/// Unit-pivot rows over a field.
#[derive(Clone, Debug)]
struct FieldEntry<T>(T);

impl<T: ExactField> PivotRow for FieldEntry<T> {
    fn normalize(row: &mut SparseVec<Self>, pivot_col: usize) {
        let inv = entry(row, pivot_col).0.inverse();
        for e in row.iter_mut() {
            e.1 = FieldEntry(e.1 .0.mul_ref(&inv));
        }
    }

    fn reduce(
        target: &[(usize, Self)],
        pivot: &[(usize, Self)],
        pivot_col: usize,
    ) -> SparseVec<Self> {
        let factor = entry(target, pivot_col).0.clone();
        merge(
            target,
            pivot,
            |x, y| {
                let x = x.map_or_else(T::zero, |v| v.0.clone());
                FieldEntry(match y {
                    Some(y) => x.sub_mul(&factor, &y.0),
                    None => x,
                })
            },
            |v| v.0.is_zero(),
        )
    }
}

fn make_primitive(row: &mut SparseVec<BigInt>) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if !g.is_zero() {
        for e in row.iter_mut() {
            e.1 = &e.1 / &g;
        }
    }
}

impl PivotRow for BigInt {
    fn normalize(row: &mut SparseVec<Self>, pivot_col: usize) {
        make_primitive(row);
        if entry(row, pivot_col).is_negative() {
            for e in row.iter_mut() {
                e.1 = -&e.1;
            }
        }
    }

    fn reduce(
        target: &[(usize, Self)],
        pivot: &[(usize, Self)],
        pivot_col: usize,
    ) -> SparseVec<Self> {
        let a = entry(target, pivot_col);
        let p = entry(pivot, pivot_col);
        let g = a.gcd(p);
        let (x, y) = (p / &g, a / &g);
        let mut out = merge(
            target,
            pivot,
            |s, t| match (s, t) {
                (Some(s), Some(t)) => &x * s - &y * t,
                (Some(s), None) => &x * s,
                (None, Some(t)) => -(&y * t),
                (None, None) => BigInt::zero(),
            },
            BigInt::is_zero,
        );
        make_primitive(&mut out);
        out
    }
}

/// Pivot positions in elimination order and the pivot rows as they stood when
/// chosen: row `k` vanishes on the pivot columns of rows `0..k`.
struct Elimination<R> {
    pivots: Vec<(usize, usize)>,
    pivot_rows: Vec<SparseVec<R>>,
    /// Nonzero rows left over when elimination stopped early, else empty.
    remaining: Vec<SparseVec<R>>,
}

/// The sparse phase hands over to dense elimination once the active block has
/// at least this many columns and is at least `1 / DENSE_RATIO` full.
const DENSE_MIN_COLS: usize = 64;
const DENSE_RATIO: usize = 10;

fn eliminate<R: PivotRow>(n_cols: usize, rows: Vec<SparseVec<R>>) -> Elimination<R> {
    eliminate_until(n_cols, rows, false)
}

fn eliminate_until<R: PivotRow>(
    n_cols: usize,
    rows: Vec<SparseVec<R>>,
    dense_switch: bool,
) -> Elimination<R> {
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n_cols];
    for (r, row) in rows.iter().enumerate() {
        for (c, _) in row {
            col_rows[*c].insert(r);
        }
    }
    let mut active_nnz: usize = rows.iter().map(Vec::len).sum();
    let mut active_rows = rows.iter().filter(|r| !r.is_empty()).count();
    let mut rows: Vec<Option<SparseVec<R>>> = rows.into_iter().map(Some).collect();
    let mut active_cols: BTreeSet<usize> =
        (0..n_cols).filter(|c| !col_rows[*c].is_empty()).collect();
    let mut pivots = Vec::new();
    let mut pivot_rows = Vec::new();

    while !active_cols.is_empty() {
        if dense_switch
            && active_cols.len() >= DENSE_MIN_COLS
            && active_nnz * DENSE_RATIO >= active_rows * active_cols.len()
        {
            let remaining = rows
                .into_iter()
                .flatten()
                .filter(|r| !r.is_empty())
                .collect();
            return Elimination {
                pivots,
                pivot_rows,
                remaining,
            };
        }
        // sparsest columns first, lowest index on ties
        let mut candidates: Vec<(usize, usize)> = Vec::with_capacity(MARKOWITZ_COLUMNS + 1);
        for &c in &active_cols {
            let cnt = col_rows[c].len();
            if candidates.len() < MARKOWITZ_COLUMNS || cnt < candidates.last().expect("nonempty").0
            {
                let pos = candidates.partition_point(|e| e.0 <= cnt);
                candidates.insert(pos, (cnt, c));
                candidates.truncate(MARKOWITZ_COLUMNS);
                if candidates.len() == MARKOWITZ_COLUMNS
                    && candidates.last().expect("nonempty").0 == 1
                {
                    break;
                }
            }
        }
        let mut best: Option<(usize, usize, usize)> = None; // (cost, col, row)
        for &(cnt, c) in &candidates {
            for &r in &col_rows[c] {
                let len = rows[r].as_ref().expect("active row").len();
                let key = ((len - 1) * (cnt - 1), c, r);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
            }
        }
        let (_, pc, pr) = best.expect("active column has a row");
        let mut prow = rows[pr].take().expect("active row");
        active_nnz -= prow.len();
        active_rows -= 1;
        R::normalize(&mut prow, pc);
        for (c, _) in &prow {
            col_rows[*c].remove(&pr);
        }
        let others: Vec<usize> = col_rows[pc].iter().copied().collect();
        for r in others {
            let row = rows[r].take().expect("active row");
            let new_row = R::reduce(&row, &prow, pc);
            active_nnz = active_nnz + new_row.len() - row.len();
            if new_row.is_empty() {
                active_rows -= 1;
            }
            for (c, _) in &row {
                col_rows[*c].remove(&r);
            }
            for (c, _) in &new_row {
                col_rows[*c].insert(r);
            }
            rows[r] = Some(new_row);
        }
        for (c, _) in &prow {
            if col_rows[*c].is_empty() {
                active_cols.remove(c);
            }
        }
        pivots.push((pr, pc));
        pivot_rows.push(prow);
    }
    Elimination {
        pivots,
        pivot_rows,
        remaining: Vec::new(),
    }
}

/// Rank of a dense row-major `n_rows × n_cols` block modulo `P`.
fn dense_rank_mod<const P: u64>(mut a: Vec<u64>, n_rows: usize, n_cols: usize) -> usize {
    let mut rank = 0;
    for c in 0..n_cols {
        if rank == n_rows {
            break;
        }
        let Some(r) = (rank..n_rows).find(|r| a[r * n_cols + c] != 0) else {
            continue;
        };
        if r != rank {
            for j in c..n_cols {
                a.swap(r * n_cols + j, rank * n_cols + j);
            }
        }
        let inv = Zp::<P>::new(a[rank * n_cols + c] as i64).inverse().value();
        let (head, tail) = a.split_at_mut((rank + 1) * n_cols);
        let pivot = &mut head[rank * n_cols..];
        for v in &mut pivot[c..] {
            *v = *v * inv % P;
        }
        for row in tail.chunks_exact_mut(n_cols) {
            let factor = row[c];
            if factor != 0 {
                let neg = P - factor;
                for (x, p) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *x = (*x + neg * p) % P;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rows of a rational matrix scaled to integer vectors.
fn integer_rows(m: &SparseMatrix<Rational>) -> Vec<SparseVec<BigInt>> {
    m.rows()
        .into_iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |l, (_, v)| l.lcm(v.denom()));
            row.into_iter()
                .map(|(c, v)| (c, v.numer() * (&l / v.denom())))
                .collect()
        })
        .collect()
}

fn field_rows<T: ExactField>(m: &SparseMatrix<T>) -> Vec<SparseVec<FieldEntry<T>>> {
    m.rows()
        .into_iter()
        .map(|row| row.into_iter().map(|(c, v)| (c, FieldEntry(v))).collect())
        .collect()
}

/// Null space from an echelon form: one vector per free column, solved by back
/// substitution in reverse elimination order.
fn back_substitute<R, T: ExactField>(
    n_cols: usize,
    elim: &Elimination<R>,
    value: impl Fn(&R) -> T,
) -> Vec<SparseVec<T>> {
    let mut is_pivot = vec![false; n_cols];
    for (_, c) in &elim.pivots {
        is_pivot[*c] = true;
    }
    let mut out = Vec::new();
    for free in (0..n_cols).filter(|c| !is_pivot[*c]) {
        let mut x: HashMap<usize, T> = HashMap::new();
        x.insert(free, T::one());
        for (k, (_, pc)) in elim.pivots.iter().enumerate().rev() {
            let row = &elim.pivot_rows[k];
            let mut acc = T::zero();
            for (c, a) in row {
                if *c != *pc {
                    if let Some(v) = x.get(c) {
                        acc = acc.sub_mul(&value(a), v);
                    }
                }
            }
            if !acc.is_zero() {
                let p = value(entry(row, *pc));
                x.insert(*pc, acc.mul_ref(&p.inverse()));
            }
        }
        let mut v: SparseVec<T> = x.into_iter().collect();
        v.sort_unstable_by_key(|e| e.0);
        out.push(v);
    }
    out
}

/// Scalars with an exact rank and kernel.
pub trait ExactRank: ExactField {
    fn rank(m: &SparseMatrix<Self>) -> usize;
    fn kernel(m: &SparseMatrix<Self>) -> Vec<SparseVec<Self>>;
}

impl ExactRank for Rational {
    fn rank(m: &SparseMatrix<Self>) -> usize {
        eliminate(m.n_cols(), integer_rows(m)).pivots.len()
    }

    fn kernel(m: &SparseMatrix<Self>) -> Vec<SparseVec<Self>> {
        let elim = eliminate(m.n_cols(), integer_rows(m));
        back_substitute(m.n_cols(), &elim, |v: &BigInt| {
            Rational::from_integer(v.clone())
        })
    }
}

impl<const P: u64> ExactRank for Zp<P> {
    fn rank(m: &SparseMatrix<Self>) -> usize {
        eliminate(m.n_cols(), field_rows(m)).pivots.len()
    }

    fn kernel(m: &SparseMatrix<Self>) -> Vec<SparseVec<Self>> {
        let elim = eliminate(m.n_cols(), field_rows(m));
        back_substitute(m.n_cols(), &elim, |v: &FieldEntry<Self>| v.0)
    }
}

/// Exact rank.
pub fn rank<T: ExactRank>(m: &SparseMatrix<T>) -> usize {
    if m.is_zero() {
        return 0;
    }
    T::rank(m)
}

/// Exact basis of `{ v : m v = 0 }`, one vector per non-pivot column.
pub fn kernel_basis<T: ExactRank>(m: &SparseMatrix<T>) -> Vec<SparseVec<T>> {
    if m.is_zero() {
        return (0..m.n_cols()).map(|c| vec![(c, T::one())]).collect();
    }
    T::kernel(m)
}

/// Rank of a set of vectors of a common length.
pub fn rank_of_vectors<T: ExactRank>(len: usize, vectors: &[SparseVec<T>]) -> usize {
    rank(&SparseMatrix::from_cols(len, vectors))
}

/// Outcome of the modular rank path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModularRank {
    pub seed: u64,
    pub prime: u64,
    pub rank: usize,
    /// Rational rank, present when certification was requested.
    pub exact: Option<usize>,
}

/// Sparse elimination until fill-in makes the active block dense, then dense
/// elimination with the modulus known at compile time.
fn rank_mod<const P: u64>(m: &SparseMatrix<Rational>) -> Option<usize> {
    let mut triplets = Vec::with_capacity(m.nnz());
    for (r, c, v) in m.entries() {
        triplets.push((*r, *c, Zp::<P>::from_rational(v)?));
    }
    let reduced = SparseMatrix::from_triplets(m.n_rows(), m.n_cols(), triplets);
    let elim = eliminate_until(m.n_cols(), field_rows(&reduced), true);
    if elim.remaining.is_empty() {
        return Some(elim.pivots.len());
    }
    let mut cols: Vec<usize> = elim
        .remaining
        .iter()
        .flat_map(|r| r.iter().map(|e| e.0))
        .collect();
    cols.sort_unstable();
    cols.dedup();
    let (n_rows, n_cols) = (elim.remaining.len(), cols.len());
    let mut dense = vec![0u64; n_rows * n_cols];
    for (i, row) in elim.remaining.iter().enumerate() {
        for (c, v) in row {
            let j = cols.binary_search(c).expect("collected column");
            dense[i * n_cols + j] = v.0.value();
        }
    }
    Some(elim.pivots.len() + dense_rank_mod::<P>(dense, n_rows, n_cols))
}

fn rank_mod_index(m: &SparseMatrix<Rational>, idx: usize) -> Option<usize> {
    match idx {
        0 => rank_mod::<{ MODULAR_PRIMES[0] }>(m),
        1 => rank_mod::<{ MODULAR_PRIMES[1] }>(m),
        2 => rank_mod::<{ MODULAR_PRIMES[2] }>(m),
        3 => rank_mod::<{ MODULAR_PRIMES[3] }>(m),
        4 => rank_mod::<{ MODULAR_PRIMES[4] }>(m),
        5 => rank_mod::<{ MODULAR_PRIMES[5] }>(m),
        6 => rank_mod::<{ MODULAR_PRIMES[6] }>(m),
        _ => rank_mod::<{ MODULAR_PRIMES[7] }>(m),
    }
}

/// Rank modulo a prime drawn from `seed`; with `certify` the rational rank is
/// computed as well. A prime dividing some denominator is skipped.
pub fn rank_modular(m: &SparseMatrix<Rational>, seed: u64, certify: bool) -> Result<ModularRank> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = rng.random_range(0..MODULAR_PRIMES.len());
    for k in 0..MODULAR_PRIMES.len() {
        let idx = (start + k) % MODULAR_PRIMES.len();
        if let Some(r) = rank_mod_index(m, idx) {
            let exact = certify.then(|| rank(m));
            if let Some(e) = exact {
                if r > e {
                    return Err(Error::Structural(format!(
                        "modular rank {r} exceeds rational rank {e}"
                    )));
                }
            }
            return Ok(ModularRank {
                seed,
                prime: MODULAR_PRIMES[idx],
                rank: r,
                exact,
            });
        }
    }
    Err(Error::Structural(
        "every candidate prime divides a denominator".into(),
    ))
}

/// Incrementally built echelon form of a subspace of `T^len`.
///
/// Each stored row has a distinct leading index with unit coefficient and
/// carries a coordinate vector: its class in a quotient, written in the
/// complement basis chosen so far. Vectors inserted through
/// [`EchelonSpace::insert_zero_class`] span the subspace being quotiented out
/// and carry zero coordinates.
#[derive(Clone, Debug)]
pub struct EchelonSpace<T> {
    len: usize,
    rows: BTreeMap<usize, (SparseVec<T>, SparseVec<T>)>,
    complement: usize,
}

fn add_scaled<T: ExactField>(acc: &mut BTreeMap<usize, T>, factor: &T, v: &[(usize, T)]) {
    // acc -= factor * v
    for (i, x) in v {
        let cur = acc.remove(i).unwrap_or_else(T::zero);
        let nv = cur.sub_mul(factor, x);
        if !nv.is_zero() {
            acc.insert(*i, nv);
        }
    }
}

impl<T: ExactField> EchelonSpace<T> {
    pub fn new(len: usize) -> Self {
        EchelonSpace {
            len,
            rows: BTreeMap::new(),
            complement: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Number of complement vectors added by [`EchelonSpace::insert_class`].
    pub fn complement_dim(&self) -> usize {
        self.complement
    }

    /// Reduces `v`; returns the remainder and the accumulated coordinates, so
    /// that `v = Σ c_k row_k + remainder` and `class(v) = coords + class(remainder)`.
    pub fn reduce(&self, v: &[(usize, T)]) -> (SparseVec<T>, SparseVec<T>) {
        let mut acc: BTreeMap<usize, T> = v.iter().cloned().collect();
        let mut coords: BTreeMap<usize, T> = BTreeMap::new();
        let mut cursor = 0;
        while let Some((&i, x)) = acc.range(cursor..).next() {
            let x = x.clone();
            if let Some((row, class)) = self.rows.get(&i) {
                add_scaled(&mut acc, &x, row);
                // coords += x * class
                let neg = T::zero() - x;
                add_scaled(&mut coords, &neg, class);
            }
            cursor = i + 1;
        }
        (acc.into_iter().collect(), coords.into_iter().collect())
    }

    fn store(&mut self, remainder: SparseVec<T>, class: SparseVec<T>) {
        let (lead, lv) = remainder[0].clone();
        let inv = lv.inverse();
        let row = remainder
            .into_iter()
            .map(|(i, x)| (i, x.mul_ref(&inv)))
            .collect();
        let class = class
            .into_iter()
            .map(|(i, x)| (i, x.mul_ref(&inv)))
            .collect();
        self.rows.insert(lead, (row, class));
    }

    /// Adds a vector of the zero class. Returns whether it enlarged the span.
    pub fn insert_zero_class(&mut self, v: &[(usize, T)]) -> bool {
        let (rem, coords) = self.reduce(v);
        if rem.is_empty() {
            return false;
        }
        // remainder = v - Σ c_k row_k has class -coords
        let class = coords
            .into_iter()
            .map(|(i, x)| (i, T::zero() - x))
            .collect();
        self.store(rem, class);
        true
    }

    /// Adds `v` as a new complement basis vector when it is independent of the
    /// current span; returns its complement index.
    pub fn insert_class(&mut self, v: &[(usize, T)]) -> Option<usize> {
        let (rem, coords) = self.reduce(v);
        if rem.is_empty() {
            return None;
        }
        let k = self.complement;
        self.complement += 1;
        // remainder has class e_k - coords
        let mut class: BTreeMap<usize, T> = coords
            .into_iter()
            .map(|(i, x)| (i, T::zero() - x))
            .collect();
        let cur = class.remove(&k).unwrap_or_else(T::zero);
        let nv = cur + T::one();
        if !nv.is_zero() {
            class.insert(k, nv);
        }
        self.store(rem, class.into_iter().collect());
        Some(k)
    }

    /// Coordinates of `v` in the complement basis, or `None` when `v` is not in
    /// the span.
    pub fn coordinates(&self, v: &[(usize, T)]) -> Option<SparseVec<T>> {
        let (rem, coords) = self.reduce(v);
        rem.is_empty().then_some(coords)
    }

    pub fn ambient_len(&self) -> usize {
        self.len
    }
}

/// A subquotient `ker / im` inside an ambient space, with a chosen complement
/// of `im` in `ker` whose classes form the quotient basis.
#[derive(Clone, Debug)]
pub struct Subquotient<T> {
    pub ambient: usize,
    pub kernel: Vec<SparseVec<T>>,
    pub image: Vec<SparseVec<T>>,
    /// Quotient representatives, in complement order.
    pub representatives: Vec<SparseVec<T>>,
    space: EchelonSpace<T>,
}

impl<T: ExactField> Subquotient<T> {
    /// `image` spanning vectors must lie in `span(kernel)`; extra dependent
    /// vectors are allowed in both lists.
    pub fn new(
        ambient: usize,
        kernel: Vec<SparseVec<T>>,
        image: Vec<SparseVec<T>>,
    ) -> Result<Self> {
        let mut space = EchelonSpace::new(ambient);
        let mut image_basis = Vec::new();
        for v in &image {
            if space.insert_zero_class(v) {
                image_basis.push(v.clone());
            }
        }
        let mut ker_space = EchelonSpace::new(ambient);
        for v in &kernel {
            ker_space.insert_zero_class(v);
        }
        for v in &image_basis {
            if ker_space.coordinates(v).is_none() {
                return Err(Error::Structural("image not contained in kernel".into()));
            }
        }
        let mut representatives = Vec::new();
        for v in &kernel {
            if space.insert_class(v).is_some() {
                representatives.push(v.clone());
            }
        }
        Ok(Subquotient {
            ambient,
            kernel,
            image: image_basis,
            representatives,
            space,
        })
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Quotient coordinates of a vector of `ker`; `None` when outside `ker`.
    pub fn coordinates(&self, v: &[(usize, T)]) -> Option<SparseVec<T>> {
        self.space.coordinates(v)
    }
}

/// Matrix of the map `big` induces from `source = ker/im` to `target = ker/im`,
/// in the representative bases. Fails when `big` does not send the source
/// kernel into the target kernel.
pub fn induced_quotient_map<T: ExactField>(
    big: &SparseMatrix<T>,
    source: &Subquotient<T>,
    target: &Subquotient<T>,
) -> Result<SparseMatrix<T>> {
    if big.n_cols() != source.ambient || big.n_rows() != target.ambient {
        return Err(Error::Precondition(
            "induced map shape does not match the subquotients".into(),
        ));
    }
    let cols = big.cols();
    let apply = |v: &[(usize, T)]| -> SparseVec<T> {
        let mut acc: BTreeMap<usize, T> = BTreeMap::new();
        for (k, x) in v {
            let neg = T::zero() - x.clone();
            add_scaled(&mut acc, &neg, &cols[*k]);
        }
        acc.into_iter().collect()
    };
    for v in &source.image {
        if target.coordinates(&apply(v)).is_none_or(|c| !c.is_empty()) {
            return Err(Error::Structural(
                "image of a coboundary is not a coboundary".into(),
            ));
        }
    }
    let mut triplets = Vec::new();
    for (j, rep) in source.representatives.iter().enumerate() {
        let coords = target
            .coordinates(&apply(rep))
            .ok_or_else(|| Error::Structural("induced map leaves the target kernel".into()))?;
        triplets.extend(coords.into_iter().map(|(i, x)| (i, j, x)));
    }
    Ok(SparseMatrix::from_triplets(
        target.dim(),
        source.dim(),
        triplets,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn m(rows: usize, cols: usize, t: &[(usize, usize, i64)]) -> SparseMatrix<Rational> {
        SparseMatrix::from_triplets(rows, cols, t.iter().map(|(r, c, v)| (*r, *c, rational(*v))))
    }

    fn dense(rows: &[&[i64]]) -> SparseMatrix<Rational> {
        let n = rows.len();
        let k = rows.first().map_or(0, |r| r.len());
        SparseMatrix::from_triplets(
            n,
            k,
            rows.iter()
                .enumerate()
                .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, v)| (i, j, rational(*v)))),
        )
    }

    #[test]
    fn rank_basics() {
        assert_eq!(rank(&SparseMatrix::<Rational>::zeros(3, 5)), 0);
        assert_eq!(rank(&SparseMatrix::<Rational>::identity(4)), 4);
        assert_eq!(rank(&dense(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]])), 2);
        assert_eq!(rank(&dense(&[&[1], &[1], &[1]])), 1);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let a = dense(&[&[1, 2, 3, 0], &[2, 4, 6, 1], &[0, 0, 0, 1]]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 4 - rank(&a));
        for v in &k {
            assert!(a.mul_vec(v).is_empty());
        }
        assert_eq!(rank_of_vectors(4, &k), k.len());
        assert!(kernel_basis(&SparseMatrix::<Rational>::identity(3)).is_empty());
    }

    #[test]
    fn modular_agrees_on_small() {
        let a = dense(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let r = rank_modular(&a, 7, true).unwrap();
        assert_eq!(r.rank, 2);
        assert_eq!(r.exact, Some(2));
        assert!(MODULAR_PRIMES.contains(&r.prime));
    }

    #[test]
    fn dense_phase_matches_sparse_elimination() {
        // 120×100 of rank 80: product of random 120×80 and 80×100 factors
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a: Vec<Vec<i64>> = (0..120)
            .map(|_| (0..80).map(|_| rng.random_range(-3..=3)).collect())
            .collect();
        let b: Vec<Vec<i64>> = (0..80)
            .map(|_| (0..100).map(|_| rng.random_range(-3..=3)).collect())
            .collect();
        let prod: Vec<Vec<i64>> = a
            .iter()
            .map(|r| {
                (0..100)
                    .map(|j| r.iter().zip(&b).map(|(x, br)| x * br[j]).sum())
                    .collect()
            })
            .collect();
        let refs: Vec<&[i64]> = prod.iter().map(Vec::as_slice).collect();
        let m = dense(&refs);
        const P: u64 = MODULAR_PRIMES[0];
        let generic = {
            let t = m
                .entries()
                .iter()
                .map(|(r, c, v)| (*r, *c, Zp::<P>::from_rational(v).unwrap()));
            rank(&SparseMatrix::from_triplets(120, 100, t))
        };
        assert_eq!(rank_mod::<P>(&m), Some(generic));
        assert_eq!(generic, 80);
    }

    #[test]
    fn echelon_coordinates() {
        let mut s = EchelonSpace::<Rational>::new(3);
        assert!(s.insert_zero_class(&[(0, rational(1)), (1, rational(1))]));
        assert_eq!(s.insert_class(&[(1, rational(1))]), Some(0));
        assert_eq!(s.insert_class(&[(0, rational(2))]), None);
        // (1,0,0) = (1,1,0) - (0,1,0) ≡ -e_0
        assert_eq!(
            s.coordinates(&[(0, rational(1))]),
            Some(vec![(0, rational(-1))])
        );
        assert_eq!(s.coordinates(&[(2, rational(1))]), None);
    }

    #[test]
    fn full_collapse_quotient() {
        let ker = vec![vec![(0, rational(1))], vec![(1, rational(1))]];
        let sq = Subquotient::new(2, ker.clone(), ker).unwrap();
        assert_eq!(sq.dim(), 0);
        let map = induced_quotient_map(&SparseMatrix::identity(2), &sq, &sq).unwrap();
        assert_eq!(map.shape(), (0, 0));
    }

    #[test]
    fn image_outside_kernel_rejected() {
        let ker = vec![vec![(0, rational(1))]];
        let im = vec![vec![(1, rational(1))]];
        assert!(Subquotient::new(2, ker, im).is_err());
    }

    #[test]
    fn induced_map_of_projection() {
        // ambient R^2, ker = R^2, im = span(e0); map swaps coordinates
        let ker = vec![vec![(0, rational(1))], vec![(1, rational(1))]];
        let src = Subquotient::new(2, ker.clone(), vec![]).unwrap();
        let tgt = Subquotient::new(2, ker, vec![vec![(0, rational(1))]]).unwrap();
        let swap = m(2, 2, &[(0, 1, 1), (1, 0, 1)]);
        let map = induced_quotient_map(&swap, &src, &tgt).unwrap();
        // e0 -> e1 (nonzero class), e1 -> e0 (zero class)
        assert_eq!(map.shape(), (1, 2));
        assert_eq!(rank(&map), 1);
        assert_eq!(map.get(0, 1), rational(0));
    }
}
