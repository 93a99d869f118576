use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::{koszul, KoszulSpec};
use crate::exactla::{Rational, SparseMatrix};
use crate::gradedmod::{DegreewiseModule, FPGradedModule, LinComplex, Window};
use crate::polyring::GradedPolyRing;

/// One homology cell `(homological degree, internal degree, dim)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub n: i64,
    pub d: i64,
    pub dim: usize,
}

fn cells(table: &BTreeMap<(i64, i64), usize>) -> Vec<Cell> {
    table.iter().map(|(&(n, d), &dim)| Cell { n, d, dim }).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfDualityReport {
    pub generators: usize,
    pub shift: i64,
    pub window: Window,
    pub hom_dual: Vec<Cell>,
    pub shifted: Vec<Cell>,
    pub matches: bool,
}

/// Compares `H_*(Hom_R(K, R))` with `H_*(Σ^{−n} Σ^{−c} K)` over the window,
/// where `n` is the number of generators and `c` the top internal degree.
pub fn self_duality_check(spec: &KoszulSpec, w: Window) -> SelfDualityReport {
    let k = koszul(spec);
    let n = spec.generators().len() as i64;
    let c = spec.top_degree();
    let dual = k.dual().expect("Koszul complexes are free");
    let shifted = k.suspend(-n).shift_internal(-c);
    let a = dual.homology(w);
    let b = shifted.homology(w);
    SelfDualityReport {
        generators: n as usize,
        shift: c,
        window: w,
        matches: a == b,
        hom_dual: cells(&a),
        shifted: cells(&b),
    }
}

/// A complex of graded vector spaces known degreewise on a window, with
/// variable actions commuting with the differential.
struct DwComplex {
    lo: i64,
    hi: i64,
    window: Window,
    dims: BTreeMap<(i64, i64), usize>,
    /// `(n, d)`: `C_{n,d} → C_{n−1,d}`.
    diffs: BTreeMap<(i64, i64), SparseMatrix>,
    /// `(v, n, d)`: `C_{n,d} → C_{n,d+|x_v|}`.
    actions: BTreeMap<(usize, i64, i64), SparseMatrix>,
}

fn blocks(rows: [usize; 2], cols: [usize; 2], parts: [[Option<SparseMatrix>; 2]; 2]) -> SparseMatrix {
    let mut entries = Vec::new();
    for (bi, row) in parts.iter().enumerate() {
        for (bj, m) in row.iter().enumerate() {
            if let Some(m) = m {
                let (ro, co) = (if bi == 0 { 0 } else { rows[0] }, if bj == 0 { 0 } else { cols[0] });
                for ((r, c), v) in m.entries() {
                    entries.push(((ro + r, co + c), v.clone()));
                }
            }
        }
    }
    SparseMatrix::from_entries(rows[0] + rows[1], cols[0] + cols[1], entries)
}

impl DwComplex {
    fn of_module(m: &DegreewiseModule) -> Self {
        let dims = m.dims.iter().map(|(d, n)| ((0, *d), *n)).collect();
        let actions = m.actions.iter().map(|((v, d), a)| ((*v, 0, *d), a.clone())).collect();
        DwComplex { lo: 0, hi: 0, window: m.window, dims, diffs: BTreeMap::new(), actions }
    }

    fn dim(&self, n: i64, d: i64) -> usize {
        self.dims.get(&(n, d)).copied().unwrap_or(0)
    }

    fn diff(&self, n: i64, d: i64) -> SparseMatrix {
        self.diffs.get(&(n, d)).cloned().unwrap_or_else(|| SparseMatrix::zero(self.dim(n - 1, d), self.dim(n, d)))
    }

    fn action(&self, v: usize, n: i64, d: i64, k: i64) -> SparseMatrix {
        self.actions.get(&(v, n, d)).cloned().unwrap_or_else(|| SparseMatrix::zero(self.dim(n, d + k), self.dim(n, d)))
    }

    /// Cone of `x_v : C → Σ^{−k} C`; the window shrinks by `k` at the top.
    fn cone_of_action(&self, v: usize, var_degrees: &[i64]) -> Self {
        let k = var_degrees[v];
        let window = Window { lo: self.window.lo, hi: self.window.hi - k };
        let (lo, hi) = (self.lo, self.hi + 1);
        let minus = -Rational::one();
        let mut dims = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        let mut actions = BTreeMap::new();
        for d in window.degrees() {
            for n in lo..=hi {
                dims.insert((n, d), self.dim(n, d + k) + self.dim(n - 1, d));
            }
            for n in lo + 1..=hi {
                let m = blocks(
                    [self.dim(n - 1, d + k), self.dim(n - 2, d)],
                    [self.dim(n, d + k), self.dim(n - 1, d)],
                    [
                        [Some(self.diff(n, d + k)), Some(self.action(v, n - 1, d, k))],
                        [None, Some(self.diff(n - 1, d).scaled(&minus))],
                    ],
                );
                diffs.insert((n, d), m);
            }
            for (u, &ku) in var_degrees.iter().enumerate() {
                if d + ku > window.hi {
                    continue;
                }
                for n in lo..=hi {
                    let m = blocks(
                        [self.dim(n, d + ku + k), self.dim(n - 1, d + ku)],
                        [self.dim(n, d + k), self.dim(n - 1, d)],
                        [[Some(self.action(u, n, d + k, ku)), None], [None, Some(self.action(u, n - 1, d, ku))]],
                    );
                    actions.insert((u, n, d), m);
                }
            }
        }
        DwComplex { lo, hi, window, dims, diffs, actions }
    }

    fn homology(&self) -> BTreeMap<(i64, i64), usize> {
        let mut out = BTreeMap::new();
        for d in self.window.degrees() {
            let lin = LinComplex::new(
                self.lo,
                (self.lo..=self.hi).map(|n| self.dim(n, d)).collect(),
                (self.lo + 1..=self.hi).map(|n| self.diff(n, d)).collect(),
            );
            for n in self.lo..=self.hi {
                out.insert((n, d), lin.homology(n).dim());
            }
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CofibreStep {
    pub variables: usize,
    pub cofibre: Vec<Cell>,
    pub suspended_dual: Vec<Cell>,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CofibreReport {
    pub window: Window,
    pub steps: Vec<CofibreStep>,
    pub dual_involution: bool,
    pub matches: bool,
}

/// Builds `H_*BG = R^∨` and iterates cofibres of the variable actions,
/// comparing the `i`-th cofibre with `Σ^i K(x₁,…,x_i)^∨` degreewise.
pub fn dual_cofibre_check(ring: &Arc<GradedPolyRing>, w: Window) -> CofibreReport {
    let total: i64 = ring.var_degrees().iter().sum();
    let ext = Window { lo: w.lo, hi: w.hi + total };
    let r = FPGradedModule::ring_shifted(ring, 0);
    let original = DegreewiseModule::of_module(&r, ext.negated());
    let dual = original.dual();
    let dual_involution = dual.dual() == original;
    let mut c = DwComplex::of_module(&dual);
    let mut steps = Vec::new();
    for v in 0..ring.nvars() {
        c = c.cone_of_action(v, ring.var_degrees());
        let vars: Vec<_> = (0..=v).map(|i| ring.var(i)).collect();
        let ideal = crate::polyring::HomIdeal::new(ring.clone(), vars).expect("variables");
        let k = koszul(&KoszulSpec::new(&ideal, 1).expect("power 1"));
        let i = (v + 1) as i64;
        let mut cofibre = BTreeMap::new();
        let mut suspended = BTreeMap::new();
        let all = c.homology();
        for d in w.degrees() {
            // K^∨ in degree (n, d) is the dual of K in degree (−n, −d).
            let kd = k.evaluate(-d).lin;
            let lin = LinComplex::new(
                -kd.hi(),
                (-kd.hi()..=-kd.lo()).map(|n| kd.dim(-n)).collect(),
                (-kd.hi() + 1..=-kd.lo()).map(|n| kd.diff(-n + 1).transpose()).collect(),
            );
            for n in c.lo..=c.hi {
                cofibre.insert((n, d), all[&(n, d)]);
                suspended.insert((n, d), lin.homology(n - i).dim());
            }
        }
        steps.push(CofibreStep {
            variables: v + 1,
            matches: cofibre == suspended,
            cofibre: cells(&cofibre),
            suspended_dual: cells(&suspended),
        });
    }
    let matches = steps.iter().all(|s| s.matches);
    CofibreReport { window: w, steps, dual_involution, matches }
}
