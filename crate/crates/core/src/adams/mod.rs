//! Finite groups acting on graded polynomial rings, modules over the skewed
//! group ring `R[W]`, and Ext over it.
//!
//! A module over `R[W]` is an `R`-module with a semilinear `W`-action,
//! `w·(r m) = (w r)(w m)`. The action is given on generators of the free
//! cover and extended semilinearly; its degreewise matrices may also be set
//! by hand.

mod direct;
mod ext;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use direct::ext_skewed_direct;
pub use ext::{
    e2_page, ext_skewed, projective_realization_dims, skewed_tensor, E2Cell, E2Page, RealizationDims, SkewedExt,
    SkewedExtCell, SkewedTensor,
};

use crate::exactla::{rank, Rational, SparseMatrix, SparseVec, Subspace};
use crate::gradedmod::{FPGradedModule, GradedError, Window};
use crate::polyring::{in_image, GradedPolyRing, Poly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AdamsError {
    #[error("invalid group table: {0}")]
    BadGroup(String),
    #[error("invalid ring action: {0}")]
    BadRingAction(String),
    #[error("action does not respect relations: {0}")]
    NotWellDefined(String),
    #[error("action is not a group action in degree {degree} (elements {a}, {b})")]
    NotGroupAction { a: String, b: String, degree: i64 },
    #[error("skew compatibility fails for w = {w}, r = {r}, basis element {m} of degree {degree}")]
    SkewViolation { w: String, r: String, m: usize, degree: i64 },
    #[error("Ext^{s} in internal degree {degree} is nonzero (dim {dim}) above the row bound")]
    RowBoundViolated { s: i64, degree: i64, dim: usize },
    #[error("could not lift the action along the resolution at level {0}")]
    LiftFailed(i64),
    #[error("module is not L0-complete (witness degree {0})")]
    NotComplete(i64),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroupPresentation {
    elements: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroupPresentation {
    /// Checks closure, associativity, a two-sided identity and inverses.
    pub fn new(elements: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, AdamsError> {
        let n = elements.len();
        if n == 0 || table.len() != n || table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(AdamsError::BadGroup("table must be square over the elements".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| AdamsError::BadGroup("no identity".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(AdamsError::BadGroup(format!(
                            "not associative at ({}, {}, {})",
                            elements[a], elements[b], elements[c]
                        )));
                    }
                }
            }
        }
        let inverses = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| table[a][b] == identity && table[b][a] == identity)
                    .ok_or_else(|| AdamsError::BadGroup(format!("{} has no inverse", elements[a])))
            })
            .collect::<Result<_, _>>()?;
        Ok(FiniteGroupPresentation { elements, table, identity, inverses })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `ℤ/n` with elements `e, g, g^2, …`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let names = (0..n)
            .map(|i| match i {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            })
            .collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(names, table).expect("cyclic table")
    }

    /// The symmetric group on `n` letters, elements in lexicographic order
    /// of their one-line notation; `(στ)(i) = σ(τ(i))`.
    pub fn symmetric(n: usize) -> Self {
        assert!(n >= 1);
        let mut perms: Vec<Vec<usize>> = vec![vec![0]];
        for k in 1..n {
            perms = perms
                .into_iter()
                .flat_map(|p| {
                    (0..=k).map(move |pos| {
                        let mut q = p.clone();
                        q.insert(pos, k);
                        q
                    })
                })
                .collect();
        }
        perms.sort();
        let index: BTreeMap<Vec<usize>, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let table = perms
            .iter()
            .map(|s| perms.iter().map(|t| index[&t.iter().map(|&i| s[i]).collect::<Vec<_>>()]).collect())
            .collect();
        let names = perms
            .iter()
            .map(|p| p.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(""))
            .collect();
        Self::new(names, table).expect("symmetric group table")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, a: usize) -> &str {
        &self.elements[a]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }
}

/// `W` acting on a graded ring by degree-preserving substitutions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WAction {
    group: FiniteGroupPresentation,
    ring: Arc<GradedPolyRing>,
    /// `var_images[w][i] = w · x_i`.
    var_images: Vec<Vec<Poly>>,
}

impl WAction {
    pub fn new(group: FiniteGroupPresentation, ring: Arc<GradedPolyRing>, var_images: Vec<Vec<Poly>>) -> Result<Self, AdamsError> {
        let n = ring.nvars();
        if var_images.len() != group.order() || var_images.iter().any(|v| v.len() != n) {
            return Err(AdamsError::BadRingAction("one image per element and variable".into()));
        }
        for (w, imgs) in var_images.iter().enumerate() {
            for (i, p) in imgs.iter().enumerate() {
                let p = ring.reduce(p);
                if p.is_zero() || !p.is_homogeneous() || p.degree() != Some(ring.var_degrees()[i]) {
                    return Err(AdamsError::BadRingAction(format!(
                        "{} · {} is not a nonzero form of the same degree",
                        group.name(w),
                        ring.var_names()[i]
                    )));
                }
            }
            if w == group.identity() && (0..n).any(|i| ring.reduce(&imgs[i]) != ring.var(i)) {
                return Err(AdamsError::BadRingAction("identity must act trivially".into()));
            }
            for rel in ring.relation_basis() {
                if !ring.substitute(rel, imgs).is_zero() {
                    return Err(AdamsError::BadRingAction(format!("{} does not preserve the relations", group.name(w))));
                }
            }
        }
        let act = WAction { group, ring, var_images };
        let g = &act.group;
        for a in 0..g.order() {
            for b in 0..g.order() {
                for i in 0..n {
                    if act.apply(a, &act.var_images[b][i]) != act.ring.reduce(&act.var_images[g.mul(a, b)][i]) {
                        return Err(AdamsError::BadRingAction(format!(
                            "composition of {} and {} disagrees with the table",
                            g.name(a),
                            g.name(b)
                        )));
                    }
                }
            }
        }
        Ok(act)
    }

    pub fn trivial(group: FiniteGroupPresentation, ring: &Arc<GradedPolyRing>) -> Self {
        let imgs = vec![(0..ring.nvars()).map(|i| ring.var(i)).collect(); group.order()];
        WAction::new(group, ring.clone(), imgs).expect("trivial action")
    }

    /// Each element sends `x_i` to `±x_{π(i)}`; `perms[w][i] = (π(i), sign)`.
    pub fn signed_permutations(
        group: FiniteGroupPresentation,
        ring: &Arc<GradedPolyRing>,
        perms: &[Vec<(usize, i64)>],
    ) -> Result<Self, AdamsError> {
        let imgs = perms
            .iter()
            .map(|p| p.iter().map(|&(j, s)| ring.var(j).scale(&Rational::from_int(s))).collect())
            .collect();
        WAction::new(group, ring.clone(), imgs)
    }

    pub fn group(&self) -> &FiniteGroupPresentation {
        &self.group
    }

    pub fn ring(&self) -> &Arc<GradedPolyRing> {
        &self.ring
    }

    pub fn var_images(&self, w: usize) -> &[Poly] {
        &self.var_images[w]
    }

    pub fn apply(&self, w: usize, p: &Poly) -> Poly {
        self.ring.substitute(p, &self.var_images[w])
    }

    pub fn is_trivial(&self) -> bool {
        (0..self.group.order()).all(|w| (0..self.ring.nvars()).all(|i| self.var_images[w][i] == self.ring.var(i)))
    }
}

/// A finitely presented module with a skewed `W`-action.
#[derive(Clone, Debug)]
pub struct SkewedModule {
    module: FPGradedModule,
    action: WAction,
    /// `generator_images[w][j]`: `w · g_j` as an element of the free cover.
    generator_images: Vec<Vec<Vec<Poly>>>,
    overrides: BTreeMap<(usize, i64), SparseMatrix>,
}

impl SkewedModule {
    /// Extends `w · g_j` semilinearly; fails unless every relation is sent
    /// into the span of the relations.
    pub fn new(module: FPGradedModule, action: WAction, generator_images: Vec<Vec<Vec<Poly>>>) -> Result<Self, AdamsError> {
        if module.ring() != action.ring() {
            return Err(GradedError::RingMismatch.into());
        }
        let gens = module.generators().clone();
        if generator_images.len() != action.group.order()
            || generator_images.iter().any(|imgs| imgs.len() != gens.rank() || imgs.iter().any(|v| v.len() != gens.rank()))
        {
            return Err(AdamsError::NotWellDefined("one image per element and generator".into()));
        }
        let m = SkewedModule { module, action, generator_images, overrides: BTreeMap::new() };
        for w in 0..m.action.group.order() {
            for (j, img) in m.generator_images[w].iter().enumerate() {
                let d = gens.degree(j);
                if img.iter().any(|p| !p.is_zero()) && gens.element_degree(img) != Some(d) {
                    return Err(AdamsError::NotWellDefined(format!("image of generator {j} is not homogeneous of degree {d}")));
                }
            }
            let rels = m.module.relations();
            for (k, col) in rels.columns().iter().enumerate() {
                let img = m.apply_free(w, col);
                let d = rels.source().degree(k);
                if img.iter().any(|p| !p.is_zero()) && !in_image(rels, &img, d) {
                    return Err(AdamsError::NotWellDefined(format!(
                        "{} sends relation {k} outside the relations",
                        m.action.group.name(w)
                    )));
                }
            }
        }
        Ok(m)
    }

    /// `w · g_j = χ(w) g_j` for a character `χ: W → ℚ^×`.
    pub fn with_character(module: FPGradedModule, action: WAction, chi: &[Rational]) -> Result<Self, AdamsError> {
        let r = module.generators().rank();
        let imgs = chi
            .iter()
            .map(|c| {
                (0..r)
                    .map(|j| (0..r).map(|i| if i == j { Poly::constant(c.clone(), action.ring.nvars()) } else { Poly::zero() }).collect())
                    .collect()
            })
            .collect();
        let m = Self::new(module, action, imgs)?;
        let g = &m.action.group;
        for a in 0..g.order() {
            for b in 0..g.order() {
                if chi[g.mul(a, b)] != chi[a].clone() * chi[b].clone() {
                    return Err(AdamsError::NotGroupAction { a: g.name(a).into(), b: g.name(b).into(), degree: 0 });
                }
            }
        }
        Ok(m)
    }

    /// Generators fixed by every element.
    pub fn trivial(module: FPGradedModule, action: WAction) -> Self {
        let chi = vec![Rational::one(); action.group.order()];
        Self::with_character(module, action, &chi).expect("trivial representation")
    }

    /// Generators scaled by the sign of `w` under `sign: W → {±1}`.
    pub fn sign(module: FPGradedModule, action: WAction, sign: &[i64]) -> Result<Self, AdamsError> {
        let chi: Vec<Rational> = sign.iter().map(|&s| Rational::from_int(s)).collect();
        Self::with_character(module, action, &chi)
    }

    pub fn module(&self) -> &FPGradedModule {
        &self.module
    }

    pub fn action(&self) -> &WAction {
        &self.action
    }

    pub fn group(&self) -> &FiniteGroupPresentation {
        &self.action.group
    }

    pub fn generator_images(&self, w: usize) -> &[Vec<Poly>] {
        &self.generator_images[w]
    }

    /// Semilinear action on an element of the free cover.
    pub fn apply_free(&self, w: usize, v: &[Poly]) -> Vec<Poly> {
        let ring = &self.action.ring;
        let mut out = vec![Poly::zero(); v.len()];
        for (j, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let wc = self.action.apply(w, c);
            for (i, g) in self.generator_images[w][j].iter().enumerate() {
                if !g.is_zero() {
                    out[i] = out[i].add(&ring.mul(&wc, g));
                }
            }
        }
        out
    }

    /// Matrix of `w` on the degree-`d` piece, in quotient coordinates.
    pub fn matrix(&self, w: usize, d: i64) -> SparseMatrix {
        if let Some(m) = self.overrides.get(&(w, d)) {
            return m.clone();
        }
        let piece = self.module.evaluate(d);
        let gens = self.module.generators();
        let cols = (0..piece.dim())
            .map(|i| {
                let elem = gens.from_vec(&piece.representative(i), &piece.basis);
                let img = self.apply_free(w, &elem);
                piece.project(&gens.to_vec(&img, d, &piece.basis))
            })
            .collect();
        SparseMatrix::from_columns(piece.dim(), cols)
    }

    /// Replaces the matrix of `w` in degree `d`, e.g. with hand-supplied data.
    pub fn set_matrix(&mut self, w: usize, d: i64, m: SparseMatrix) {
        self.overrides.insert((w, d), m);
    }

    /// The degreewise representation on a window.
    pub fn representation(&self, win: Window) -> GradedRep {
        let pieces = win
            .degrees()
            .map(|d| (d, (0..self.group().order()).map(|w| self.matrix(w, d)).collect()))
            .collect();
        GradedRep { group: self.group().clone(), pieces }
    }
}

/// Multiplication by `p` from degree `d` to `d + |p|`, in quotient coordinates.
pub(crate) fn module_multiplication(m: &FPGradedModule, p: &Poly, d: i64) -> SparseMatrix {
    let src = m.evaluate(d);
    let tgt = m.evaluate(d + p.degree().unwrap_or(0));
    if p.is_zero() || src.dim() == 0 || tgt.dim() == 0 {
        return SparseMatrix::zero(tgt.dim(), src.dim());
    }
    let mult = m.generators().multiplication_matrix(p, d);
    let cols = (0..src.dim()).map(|i| tgt.project(&mult.apply(&src.representative(i)))).collect();
    SparseMatrix::from_columns(tgt.dim(), cols)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewReport {
    pub window: Window,
    pub group_law_checks: usize,
    pub skew_checks: usize,
}

/// Checks on the window that the matrices form a group action and that
/// `w·(r m) = (w r)(w m)` for every basis element `m` and monomial `r`.
pub fn validate_skew(m: &SkewedModule, win: Window) -> Result<SkewReport, AdamsError> {
    let g = m.group();
    let ring = m.action.ring.clone();
    let mut group_law_checks = 0;
    let mut skew_checks = 0;
    let mats: BTreeMap<i64, Vec<SparseMatrix>> =
        win.degrees().map(|d| (d, (0..g.order()).map(|w| m.matrix(w, d)).collect())).collect();
    for (&d, ms) in &mats {
        for a in 0..g.order() {
            for b in 0..g.order() {
                group_law_checks += 1;
                if ms[a].compose(&ms[b]) != ms[g.mul(a, b)] {
                    return Err(AdamsError::NotGroupAction { a: g.name(a).into(), b: g.name(b).into(), degree: d });
                }
            }
        }
    }
    for d in win.degrees() {
        let dim = m.module.dim(d);
        if dim == 0 {
            continue;
        }
        for k in 1..=(win.hi - d) {
            for mono in ring.standard_monomials(k).iter() {
                let r = Poly::monomial(mono.clone());
                let times_r = module_multiplication(&m.module, &r, d);
                for w in 0..g.order() {
                    let wr = m.action.apply(w, &r);
                    let lhs = mats[&(d + k)][w].compose(&times_r);
                    let rhs = module_multiplication(&m.module, &wr, d).compose(&mats[&d][w]);
                    skew_checks += 1;
                    if lhs != rhs {
                        let bad = (0..dim).find(|&i| lhs.column(i) != rhs.column(i)).unwrap_or(0);
                        return Err(AdamsError::SkewViolation {
                            w: g.name(w).into(),
                            r: ring.format_poly(&r),
                            m: bad,
                            degree: d,
                        });
                    }
                }
            }
        }
    }
    Ok(SkewReport { window: win, group_law_checks, skew_checks })
}

/// A graded vector space with `W` acting degreewise: `pieces[d][w]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRep {
    pub group: FiniteGroupPresentation,
    pub pieces: BTreeMap<i64, Vec<SparseMatrix>>,
}

/// `e = |W|⁻¹ Σ_w w`.
pub fn averaging_idempotent(mats: &[SparseMatrix]) -> SparseMatrix {
    let n = mats[0].rows();
    let sum = mats.iter().fold(SparseMatrix::zero(n, n), |acc, m| acc.add(m));
    sum.scaled(&Rational::new(1, mats.len() as i64))
}

/// Degreewise image of the averaging idempotent.
pub fn w_fixed_points(v: &GradedRep) -> BTreeMap<i64, Subspace> {
    v.pieces
        .iter()
        .map(|(&d, mats)| {
            let e = averaging_idempotent(mats);
            (d, Subspace::span(e.rows(), e.columns()))
        })
        .collect()
}

pub fn w_fixed_dims(v: &GradedRep) -> BTreeMap<i64, usize> {
    v.pieces.iter().map(|(&d, mats)| (d, rank(&averaging_idempotent(mats)))).collect()
}

/// Vector with one entry per quotient coordinate, kept for reports.
pub(crate) fn sparse_to_pairs(v: &SparseVec) -> Vec<(usize, String)> {
    v.iter().map(|(i, c)| (*i, c.to_string())).collect()
}

#[cfg(test)]
mod tests;
