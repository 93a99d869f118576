//! Exact sparse linear algebra over ℚ.
//!
//! Every degreewise computation in the crate bottoms out here: graded pieces
//! are finite-dimensional ℚ-vector spaces, maps between them are
//! [`SparseMatrix`] values, and kernels/images are [`Subspace`]s in reduced
//! row echelon form.

mod rational;
mod sparse;
mod subspace;

pub use rational::{ParseRationalError, Rational};
pub use sparse::{SparseMatrix, SparseVec};
pub use subspace::{
    kernel, rank, rank_kernel_image, solve, subspace_quotient_dim, QuotientSpace, Subspace,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("subspace is not contained in the ambient subspace")]
    NotContained,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn matrix() -> impl Strategy<Value = SparseMatrix> {
        (0usize..6, 0usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..4, c), r)
                .prop_map(move |rows| {
                    if r == 0 {
                        SparseMatrix::zero(0, c)
                    } else {
                        SparseMatrix::from_dense(&rows)
                    }
                })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in matrix()) {
            let (r, k, i) = rank_kernel_image(&m);
            prop_assert_eq!(r + k.dim(), m.cols());
            prop_assert_eq!(i.dim(), r);
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
            for v in k.basis() {
                prop_assert!(m.apply(v).is_zero());
            }
        }

        #[test]
        fn solve_is_consistent(m in matrix(), x in proptest::collection::vec(-3i64..4, 6)) {
            let xv = SparseVec::from_pairs(
                x.iter().take(m.cols()).enumerate().map(|(i, v)| (i, Rational::from_int(*v))),
            );
            let rhs = m.apply(&xv);
            let sol = solve(&m, &rhs).expect("consistent by construction");
            prop_assert_eq!(m.apply(&sol), rhs);
        }
    }
}
