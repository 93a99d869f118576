use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Rational;

/// A sparse vector: entries sorted by index, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SparseVec(Vec<(usize, Rational)>);

impl SparseVec {
    pub fn new() -> Self {
        SparseVec(Vec::new())
    }

    pub fn unit(i: usize) -> Self {
        SparseVec(vec![(i, Rational::one())])
    }

    /// Builds from arbitrary `(index, value)` pairs, summing duplicates.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, v) in pairs {
            *acc.entry(i).or_default() += &v;
        }
        SparseVec(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect())
    }

    pub fn from_dense(values: &[Rational]) -> Self {
        SparseVec(
            values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        )
    }

    pub fn to_dense(&self, len: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); len];
        for (i, v) in &self.0 {
            out[*i] = v.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Rational)> {
        self.0.iter()
    }

    pub fn leading(&self) -> Option<&(usize, Rational)> {
        self.0.first()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.last().map(|(i, _)| *i)
    }

    pub fn get(&self, i: usize) -> Rational {
        match self.0.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(pos) => self.0[pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn scale(&mut self, a: &Rational) {
        if a.is_zero() {
            self.0.clear();
            return;
        }
        for (_, v) in self.0.iter_mut() {
            *v = &*v * a;
        }
    }

    pub fn scaled(&self, a: &Rational) -> Self {
        let mut out = self.clone();
        out.scale(a);
        out
    }

    /// `self += a * other`
    pub fn axpy(&mut self, a: &Rational, other: &SparseVec) {
        if a.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        let (x, y) = (&self.0, &other.0);
        while i < x.len() || j < y.len() {
            if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
                out.push(x[i].clone());
                i += 1;
            } else if i == x.len() || y[j].0 < x[i].0 {
                out.push((y[j].0, a * &y[j].1));
                j += 1;
            } else {
                let v = &x[i].1 + &(a * &y[j].1);
                if !v.is_zero() {
                    out.push((x[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        self.0 = out;
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        out.axpy(&Rational::one(), other);
        out
    }

    pub fn dot(&self, other: &SparseVec) -> Rational {
        let mut acc = Rational::zero();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += &(&self.0[i].1 * &other.0[j].1);
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    /// Keeps only indices in `keep` (sorted), renumbered to their position there.
    pub fn restrict(&self, keep: &[usize]) -> SparseVec {
        SparseVec(
            self.0
                .iter()
                .filter_map(|(i, v)| keep.binary_search(i).ok().map(|pos| (pos, v.clone())))
                .collect(),
        )
    }

    /// Re-indexes every entry through `f`.
    pub fn reindex(&self, f: impl Fn(usize) -> usize) -> SparseVec {
        SparseVec::from_pairs(self.0.iter().map(|(i, v)| (f(*i), v.clone())))
    }
}

/// A rows×cols matrix over ℚ stored column-major with sparse columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![SparseVec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix { rows: n, cols: n, columns: (0..n).map(SparseVec::unit).collect() }
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Self {
        for c in &columns {
            if let Some(m) = c.max_index() {
                assert!(m < rows, "column entry {m} out of range for {rows} rows");
            }
        }
        SparseMatrix { rows, cols: columns.len(), columns }
    }

    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = ((usize, usize), Rational)>,
    ) -> Self {
        let mut per_col: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); cols];
        for ((r, c), v) in entries {
            assert!(r < rows && c < cols, "entry ({r},{c}) out of range");
            per_col[c].push((r, v));
        }
        let columns = per_col.into_iter().map(SparseVec::from_pairs).collect();
        SparseMatrix { rows, cols, columns }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self::from_entries(
            r,
            c,
            rows.iter().enumerate().flat_map(|(i, row)| {
                row.iter().enumerate().map(move |(j, v)| ((i, j), Rational::from_int(*v)))
            }),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.columns[c].get(r)
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &Rational)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| ((*r, c), v)))
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(SparseVec::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(SparseVec::is_zero)
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.cols]; self.rows];
        for ((r, c), v) in self.entries() {
            out[r][c] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut per_col: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col.iter() {
                per_col[*r].push((c, v.clone()));
            }
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            columns: per_col.into_iter().map(SparseVec).collect(),
        }
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, a) in v.iter() {
            out.axpy(a, &self.columns[*j]);
        }
        out
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            columns: other.columns.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            columns: self.columns.iter().zip(&other.columns).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scaled(&self, a: &Rational) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            columns: self.columns.iter().map(|c| c.scaled(a)).collect(),
        }
    }

    /// Row vectors of the matrix, for row reduction.
    pub fn row_vectors(&self) -> Vec<SparseVec> {
        self.transpose().columns
    }

    /// Block matrix `[self | other]`.
    pub fn hconcat(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.rows, other.rows);
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        SparseMatrix { rows: self.rows, cols: self.cols + other.cols, columns }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut columns = self.columns.clone();
        let off = self.rows;
        columns.extend(other.columns.iter().map(|c| c.reindex(|i| i + off)));
        SparseMatrix { rows: self.rows + other.rows, cols: self.cols + other.cols, columns }
    }
}
