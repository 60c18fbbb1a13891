//! Coordinate-format sparse matrices over a [`Scalar`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::Rational;

/// Sparse matrix with entries sorted by `(row, col)`, no duplicates and no
/// stored zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<T> {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<(usize, usize, T)>,
}

/// Sparse vector as `(index, value)` pairs sorted by index, no zeros.
pub type SparseVec<T> = Vec<(usize, T)>;

impl<T: Scalar> SparseMatrix<T> {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        SparseMatrix {
            n_rows,
            n_cols,
            entries: Vec::new(),
        }
    }

    /// Builds from unordered triplets, summing duplicates and dropping zeros.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Self {
        let mut acc: BTreeMap<(usize, usize), T> = BTreeMap::new();
        for (r, c, v) in triplets {
            assert!(
                r < n_rows && c < n_cols,
                "entry ({r},{c}) outside {n_rows}x{n_cols}"
            );
            match acc.get_mut(&(r, c)) {
                Some(x) => *x = x.clone() + v,
                None => {
                    acc.insert((r, c), v);
                }
            }
        }
        let entries = acc
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|((r, c), v)| (r, c, v))
            .collect();
        SparseMatrix {
            n_rows,
            n_cols,
            entries,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, T::one())))
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_rows, self.n_cols)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, usize, T)] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        match self
            .entries
            .binary_search_by(|(er, ec, _)| (*er, *ec).cmp(&(r, c)))
        {
            Ok(i) => self.entries[i].2.clone(),
            Err(_) => T::zero(),
        }
    }

    /// Transpose. With real entries and an orthonormal basis this is the adjoint.
    pub fn transpose(&self) -> Self {
        let mut entries: Vec<_> = self
            .entries
            .iter()
            .map(|(r, c, v)| (*c, *r, v.clone()))
            .collect();
        entries.sort_unstable_by_key(|e| (e.0, e.1));
        SparseMatrix {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            entries,
        }
    }

    /// Rows as sparse vectors.
    pub fn rows(&self) -> Vec<SparseVec<T>> {
        let mut rows = vec![Vec::new(); self.n_rows];
        for (r, c, v) in &self.entries {
            rows[*r].push((*c, v.clone()));
        }
        rows
    }

    /// Columns as sparse vectors.
    pub fn cols(&self) -> Vec<SparseVec<T>> {
        let mut cols = vec![Vec::new(); self.n_cols];
        for (r, c, v) in &self.entries {
            cols[*c].push((*r, v.clone()));
        }
        cols
    }

    /// Matrix whose columns are the given vectors of length `n_rows`.
    pub fn from_cols(n_rows: usize, cols: &[SparseVec<T>]) -> Self {
        Self::from_triplets(
            n_rows,
            cols.len(),
            cols.iter()
                .enumerate()
                .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v.clone()))),
        )
    }

    /// `[self; lower]`, stacking rows.
    pub fn vstack(&self, lower: &Self) -> Self {
        assert_eq!(self.n_cols, lower.n_cols, "shape mismatch in vstack");
        let mut entries = self.entries.clone();
        entries.extend(
            lower
                .entries
                .iter()
                .map(|(r, c, v)| (r + self.n_rows, *c, v.clone())),
        );
        SparseMatrix {
            n_rows: self.n_rows + lower.n_rows,
            n_cols: self.n_cols,
            entries,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n_cols, rhs.n_rows, "shape mismatch in product");
        let rhs_rows = rhs.rows();
        let mut triplets = Vec::new();
        let mut i = 0;
        while i < self.entries.len() {
            let row = self.entries[i].0;
            let mut acc: BTreeMap<usize, T> = BTreeMap::new();
            while i < self.entries.len() && self.entries[i].0 == row {
                let (_, k, a) = &self.entries[i];
                for (c, b) in &rhs_rows[*k] {
                    let term = a.clone() * b.clone();
                    match acc.get_mut(c) {
                        Some(x) => *x = x.clone() + term,
                        None => {
                            acc.insert(*c, term);
                        }
                    }
                }
                i += 1;
            }
            triplets.extend(
                acc.into_iter()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (row, c, v)),
            );
        }
        SparseMatrix {
            n_rows: self.n_rows,
            n_cols: rhs.n_cols,
            entries: triplets,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in sum");
        Self::from_triplets(
            self.n_rows,
            self.n_cols,
            self.entries.iter().chain(rhs.entries.iter()).cloned(),
        )
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_triplets(
            self.n_rows,
            self.n_cols,
            self.entries
                .iter()
                .map(|(r, c, v)| (*r, *c, v.clone() * s.clone())),
        )
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    pub fn mul_vec(&self, v: &[(usize, T)]) -> SparseVec<T> {
        let cols = self.cols();
        let mut acc: BTreeMap<usize, T> = BTreeMap::new();
        for (k, x) in v {
            for (r, a) in &cols[*k] {
                let term = a.clone() * x.clone();
                match acc.get_mut(r) {
                    Some(y) => *y = y.clone() + term,
                    None => {
                        acc.insert(*r, term);
                    }
                }
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> SparseMatrix<U> {
        SparseMatrix::from_triplets(
            self.n_rows,
            self.n_cols,
            self.entries.iter().map(|(r, c, v)| (*r, *c, f(v))),
        )
    }

    /// Restriction to the listed rows and columns, reindexed in list order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut row_map = vec![usize::MAX; self.n_rows];
        for (i, r) in rows.iter().enumerate() {
            row_map[*r] = i;
        }
        let mut col_map = vec![usize::MAX; self.n_cols];
        for (j, c) in cols.iter().enumerate() {
            col_map[*c] = j;
        }
        Self::from_triplets(
            rows.len(),
            cols.len(),
            self.entries.iter().filter_map(|(r, c, v)| {
                let (i, j) = (row_map[*r], col_map[*c]);
                (i != usize::MAX && j != usize::MAX).then(|| (i, j, v.clone()))
            }),
        )
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut d = vec![vec![T::zero(); self.n_cols]; self.n_rows];
        for (r, c, v) in &self.entries {
            d[*r][*c] = v.clone();
        }
        d
    }
}

impl<T: Scalar + PartialEq> SparseMatrix<T> {
    pub fn is_symmetric(&self) -> bool {
        self.n_rows == self.n_cols && *self == self.transpose()
    }
}

/// Coordinate export of a rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixExport {
    pub n_rows: usize,
    pub n_cols: usize,
    /// `(row, col, numerator, denominator)`
    pub entries: Vec<(usize, usize, String, String)>,
}

impl SparseMatrix<Rational> {
    pub fn to_export(&self) -> MatrixExport {
        MatrixExport {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            entries: self
                .entries
                .iter()
                .map(|(r, c, v)| (*r, *c, v.numer().to_string(), v.denom().to_string()))
                .collect(),
        }
    }

    /// Plain-text coordinate listing, one `row col numerator denominator` line
    /// per entry after a `rows cols nnz` header.
    pub fn to_coordinate_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.n_rows, self.n_cols, self.entries.len());
        for (r, c, v) in &self.entries {
            out.push_str(&format!("{} {} {} {}\n", r, c, v.numer(), v.denom()));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn m(rows: usize, cols: usize, t: &[(usize, usize, i64)]) -> SparseMatrix<Rational> {
        SparseMatrix::from_triplets(rows, cols, t.iter().map(|(r, c, v)| (*r, *c, rational(*v))))
    }

    #[test]
    fn triplets_are_canonical() {
        let a = m(2, 2, &[(1, 0, 2), (0, 1, 1), (1, 0, -2), (0, 0, 3)]);
        assert_eq!(a.entries(), &[(0, 0, rational(3)), (0, 1, rational(1))]);
    }

    #[test]
    fn transpose_column_vector() {
        let a = m(2, 1, &[(0, 0, 3), (1, 0, 5)]);
        let t = a.transpose();
        assert_eq!(t.shape(), (1, 2));
        assert_eq!(t.get(0, 1), rational(5));
        assert_eq!(t.transpose(), a);
    }

    #[test]
    fn product_and_vector() {
        let a = m(2, 3, &[(0, 0, 1), (0, 2, 2), (1, 1, -1)]);
        let b = m(3, 2, &[(0, 1, 4), (2, 0, 1), (1, 0, 3)]);
        let p = a.mul(&b);
        assert_eq!(
            p.to_dense(),
            vec![
                vec![rational(2), rational(4)],
                vec![rational(-3), rational(0)]
            ]
        );
        assert_eq!(
            a.mul_vec(&[(2, rational(1)), (1, rational(1))]),
            vec![(0, rational(2)), (1, rational(-1))]
        );
    }

    #[test]
    fn vstack_offsets_rows() {
        let a = m(1, 2, &[(0, 1, 1)]);
        let b = m(2, 2, &[(1, 0, 4)]);
        assert_eq!(
            a.vstack(&b).entries(),
            &[(0, 1, rational(1)), (2, 0, rational(4))]
        );
    }

    #[test]
    fn export_text() {
        let a = m(1, 2, &[(0, 1, -3)]);
        assert_eq!(a.to_coordinate_text(), "1 2 1\n0 1 -3 1\n");
    }
}
