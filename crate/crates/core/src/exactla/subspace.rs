use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ExactError, SparseMatrix, SparseVec};

/// A linear subspace of ℚ^n kept in reduced row echelon form.
///
/// The RREF of a row space is unique, so two `Subspace`s are equal exactly
/// when they span the same space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subspace {
    ambient_dim: usize,
    rows: BTreeMap<usize, SparseVec>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, rows: BTreeMap::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let rows = (0..ambient_dim).map(|i| (i, SparseVec::unit(i))).collect();
        Subspace { ambient_dim, rows }
    }

    pub fn span<'a>(ambient_dim: usize, vectors: impl IntoIterator<Item = &'a SparseVec>) -> Self {
        let mut s = Subspace::zero(ambient_dim);
        for v in vectors {
            s.insert(v.clone());
        }
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Basis vectors in order of increasing pivot column.
    pub fn basis(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values()
    }

    /// Columns that are not pivots; their unit vectors span a complement.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ambient_dim).filter(|c| !self.rows.contains_key(c)).collect()
    }

    /// Remainder of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut out = v.clone();
        // Pivot rows vanish on every other pivot column, so one pass clears them all.
        for (c, a) in v.iter() {
            if let Some(row) = self.rows.get(c) {
                out.axpy(&-a, row);
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the space.
    pub fn coords(&self, v: &SparseVec) -> Option<SparseVec> {
        if !self.contains(v) {
            return None;
        }
        Some(SparseVec::from_pairs(
            self.rows.keys().enumerate().map(|(k, p)| (k, v.get(*p))),
        ))
    }

    /// Inserts a vector; returns `true` if it enlarged the space.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        if let Some(m) = v.max_index() {
            assert!(m < self.ambient_dim, "vector index {m} outside ambient dimension {}", self.ambient_dim);
        }
        let mut r = self.reduce(&v);
        let Some((p, lead)) = r.leading().cloned() else {
            return false;
        };
        r.scale(&lead.recip());
        for row in self.rows.values_mut() {
            let a = row.get(p);
            if !a.is_zero() {
                row.axpy(&-a, &r);
            }
        }
        self.rows.insert(p, r);
        true
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let mut out = self.clone();
        for v in other.basis() {
            out.insert(v.clone());
        }
        out
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis().all(|v| other.contains(v))
    }

    /// Image of this subspace under `m` (ambient of the result is `m.rows()`).
    pub fn image_under(&self, m: &SparseMatrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient_dim);
        let imgs: Vec<SparseVec> = self.basis().map(|v| m.apply(v)).collect();
        Subspace::span(m.rows(), &imgs)
    }

    /// Expresses the subspace in the coordinates of a containing subspace.
    pub fn in_coords_of(&self, outer: &Subspace) -> Result<Subspace, ExactError> {
        let mut coords = Vec::with_capacity(self.dim());
        for v in self.basis() {
            coords.push(outer.coords(v).ok_or(ExactError::NotContained)?);
        }
        Ok(Subspace::span(outer.dim(), &coords))
    }

    /// Basis vectors as matrix columns.
    pub fn basis_matrix(&self) -> SparseMatrix {
        SparseMatrix::from_columns(self.ambient_dim, self.basis().cloned().collect())
    }
}

/// `dim(a) − dim(b)`, checking `b ⊆ a`.
pub fn subspace_quotient_dim(a: &Subspace, b: &Subspace) -> Result<usize, ExactError> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(ExactError::DimensionMismatch { expected: a.ambient_dim(), found: b.ambient_dim() });
    }
    if !b.is_subspace_of(a) {
        return Err(ExactError::NotContained);
    }
    Ok(a.dim() - b.dim())
}

/// Rank, kernel and image of a matrix.
pub fn rank_kernel_image(m: &SparseMatrix) -> (usize, Subspace, Subspace) {
    let image = Subspace::span(m.rows(), m.columns());
    let kernel = kernel(m);
    (image.dim(), kernel, image)
}

pub fn rank(m: &SparseMatrix) -> usize {
    // Reduce along the shorter side.
    if m.rows() < m.cols() {
        Subspace::span(m.cols(), &m.row_vectors()).dim()
    } else {
        Subspace::span(m.rows(), m.columns()).dim()
    }
}

pub fn kernel(m: &SparseMatrix) -> Subspace {
    let rowspace = Subspace::span(m.cols(), &m.row_vectors());
    let mut kernel = Subspace::zero(m.cols());
    for f in rowspace.free_columns() {
        let mut v = SparseVec::unit(f);
        for (p, row) in rowspace.pivots().zip(rowspace.basis()) {
            let a = row.get(f);
            if !a.is_zero() {
                v.axpy(&-a, &SparseVec::unit(p));
            }
        }
        kernel.insert(v);
    }
    kernel
}

/// Particular solution of `m·x = rhs` with every free variable set to zero,
/// or `None` when the system is inconsistent.
pub fn solve(m: &SparseMatrix, rhs: &SparseVec) -> Option<SparseVec> {
    if let Some(i) = rhs.max_index() {
        assert!(i < m.rows(), "rhs longer than matrix rows");
    }
    let n = m.cols();
    let mut rows = m.row_vectors();
    for (i, v) in rhs.iter() {
        rows[*i].axpy(v, &SparseVec::unit(n));
    }
    let aug = Subspace::span(n + 1, &rows);
    if aug.pivots().any(|p| p == n) {
        return None;
    }
    Some(SparseVec::from_pairs(
        aug.pivots().zip(aug.basis()).map(|(p, row)| (p, row.get(n))),
    ))
}

/// Coordinates on `ℚ^n / U`, using the non-pivot columns of `U` as basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSpace {
    relations: Subspace,
    free: Vec<usize>,
}

impl QuotientSpace {
    pub fn new(relations: Subspace) -> Self {
        let free = relations.free_columns();
        QuotientSpace { relations, free }
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.relations.ambient_dim()
    }

    pub fn relations(&self) -> &Subspace {
        &self.relations
    }

    /// Ambient index represented by quotient coordinate `i`.
    pub fn representative(&self, i: usize) -> usize {
        self.free[i]
    }

    pub fn project(&self, v: &SparseVec) -> SparseVec {
        self.relations.reduce(v).restrict(&self.free)
    }

    pub fn lift(&self, v: &SparseVec) -> SparseVec {
        v.reindex(|i| self.free[i])
    }

    /// Matrix of the projection ℚ^n → ℚ^n / U.
    pub fn projection_matrix(&self) -> SparseMatrix {
        SparseMatrix::from_columns(
            self.dim(),
            (0..self.ambient_dim()).map(|j| self.project(&SparseVec::unit(j))).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn empty_matrix() {
        let (r, k, i) = rank_kernel_image(&SparseMatrix::zero(0, 0));
        assert_eq!((r, k.dim(), i.dim()), (0, 0, 0));
    }

    #[test]
    fn identity_has_full_rank() {
        let (r, k, _) = rank_kernel_image(&SparseMatrix::identity(3));
        assert_eq!((r, k.dim()), (3, 0));
    }

    #[test]
    fn rank_one_kernel() {
        let m = SparseMatrix::from_dense(&[vec![1, 2], vec![2, 4]]);
        let (r, k, i) = rank_kernel_image(&m);
        assert_eq!(r, 1);
        assert_eq!(k, Subspace::span(2, &[SparseVec::from_dense(&[q(-2), q(1)])]));
        assert_eq!(i.dim(), 1);
    }

    #[test]
    fn quotient_dims() {
        let a = Subspace::span(
            3,
            &[SparseVec::from_dense(&[q(1), q(0), q(0)]), SparseVec::from_dense(&[q(0), q(1), q(0)])],
        );
        let b = Subspace::span(3, &[SparseVec::from_dense(&[q(1), q(1), q(0)])]);
        assert_eq!(subspace_quotient_dim(&a, &b), Ok(1));
        assert_eq!(subspace_quotient_dim(&a, &a), Ok(0));
        assert_eq!(subspace_quotient_dim(&Subspace::full(2), &Subspace::zero(2)), Ok(2));
        let c = Subspace::span(3, &[SparseVec::unit(2)]);
        assert_eq!(subspace_quotient_dim(&a, &c), Err(ExactError::NotContained));
    }

    #[test]
    fn solve_examples() {
        let v = SparseVec::from_dense(&[q(4), q(-1), q(7)]);
        assert_eq!(solve(&SparseMatrix::identity(3), &v), Some(v));
        let m = SparseMatrix::from_dense(&[vec![1, 1]]);
        assert_eq!(solve(&m, &SparseVec::from_dense(&[q(3)])), Some(SparseVec::from_dense(&[q(3), q(0)])));
        let z = SparseMatrix::from_dense(&[vec![0]]);
        assert_eq!(solve(&z, &SparseVec::unit(0)), None);
    }

    #[test]
    fn quotient_coordinates() {
        let u = Subspace::span(3, &[SparseVec::from_dense(&[q(1), q(1), q(0)])]);
        let qs = QuotientSpace::new(u);
        assert_eq!(qs.dim(), 2);
        // e0 ≡ -e1 modulo (1,1,0)
        assert_eq!(qs.project(&SparseVec::unit(0)), SparseVec::from_dense(&[q(-1), q(0)]));
        assert!(qs.project(&SparseVec::from_dense(&[q(2), q(2), q(0)])).is_zero());
    }
}
