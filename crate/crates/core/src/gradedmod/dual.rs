use std::collections::BTreeMap;

use super::module::{FPGradedModule, Window};
use crate::exactla::SparseMatrix;

/// A graded module known only through its pieces in a window: dimensions
/// and the action of each ring variable between pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreewiseModule {
    pub window: Window,
    pub var_degrees: Vec<i64>,
    pub dims: BTreeMap<i64, usize>,
    /// `(variable, d)` ↦ matrix of the variable from degree `d` to `d + |x|`,
    /// when both degrees lie in the window.
    pub actions: BTreeMap<(usize, i64), SparseMatrix>,
}

impl DegreewiseModule {
    pub fn of_module(m: &FPGradedModule, w: Window) -> Self {
        let ring = m.ring();
        let pieces: BTreeMap<i64, _> = w.degrees().map(|d| (d, m.evaluate(d))).collect();
        let dims = pieces.iter().map(|(d, p)| (*d, p.dim())).collect();
        let mut actions = BTreeMap::new();
        for v in 0..ring.nvars() {
            let deg = ring.var_degrees()[v];
            let x = ring.var(v);
            for d in w.degrees() {
                let Some(tgt) = pieces.get(&(d + deg)) else { continue };
                let src = &pieces[&d];
                let mult = m.generators().multiplication_matrix(&x, d);
                let cols = (0..src.dim()).map(|i| tgt.project(&mult.apply(&src.representative(i)))).collect();
                actions.insert((v, d), SparseMatrix::from_columns(tgt.dim(), cols));
            }
        }
        DegreewiseModule { window: w, var_degrees: ring.var_degrees().to_vec(), dims, actions }
    }

    pub fn dim(&self, d: i64) -> usize {
        self.dims.get(&d).copied().unwrap_or(0)
    }

    /// `Hom_ℚ(−, ℚ)`: degree `d` is the dual of degree `−d`, and a variable
    /// acts by the transpose of its action on the original.
    pub fn dual(&self) -> Self {
        let window = self.window.negated();
        let dims = self.dims.iter().map(|(d, n)| (-d, *n)).collect();
        let actions = self
            .actions
            .iter()
            .map(|((v, d), m)| ((*v, -d - self.var_degrees[*v]), m.transpose()))
            .collect();
        DegreewiseModule { window, var_degrees: self.var_degrees.clone(), dims, actions }
    }
}

/// The graded dual of `M` over the window `w` of `M^∨`.
pub fn graded_dual(m: &FPGradedModule, w: Window) -> DegreewiseModule {
    DegreewiseModule::of_module(m, w.negated()).dual()
}
