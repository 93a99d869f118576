use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    averaging_idempotent, module_multiplication, sparse_to_pairs, validate_skew, AdamsError, SkewedModule,
};
use crate::completion::{adic_completion, is_l0_complete, Verdict};
use crate::exactla::{SparseMatrix, SparseVec, Subspace};
use crate::gradedmod::{free_resolution, hom_complex, FPGradedModule, FreeGraded, Resolution, Window};
use crate::polyring::{lift_along, GradedPolyRing, HomIdeal, Poly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewedExtCell {
    pub s: i64,
    pub degree: i64,
    /// `dim Ext^{s,d}` over the underlying ring.
    pub underlying_dim: usize,
    /// Dimension of the `W`-fixed part.
    pub dim: usize,
    /// Fixed cocycles in coordinates of `Hom(P_s, B)_d`.
    pub basis: Vec<Vec<(usize, String)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewedExt {
    pub window: Window,
    pub s_max: usize,
    pub group_order: usize,
    pub resolution_ranks: Vec<usize>,
    pub cells: Vec<SkewedExtCell>,
    /// Agreement with a resolution over the skewed ring, when small enough to run.
    pub cross_check: Option<bool>,
}

impl SkewedExt {
    pub fn get(&self, s: i64, d: i64) -> usize {
        self.cells.iter().find(|c| c.s == s && c.degree == d).map_or(0, |c| c.dim)
    }

    pub fn underlying(&self, s: i64, d: i64) -> usize {
        self.cells.iter().find(|c| c.s == s && c.degree == d).map_or(0, |c| c.underlying_dim)
    }

    pub fn dims(&self) -> BTreeMap<(i64, i64), usize> {
        self.cells.iter().map(|c| ((c.s, c.degree), c.dim)).collect()
    }

    pub fn nonzero(&self) -> Vec<(i64, i64, usize)> {
        self.cells.iter().filter(|c| c.dim > 0).map(|c| (c.s, c.degree, c.dim)).collect()
    }
}

/// `lifts[w][s][j]`: the image of generator `j` of `P_s` under a chosen
/// semilinear chain lift of `w`.
fn lift_action(a: &SkewedModule, res: &Resolution) -> Result<Vec<Vec<Vec<Vec<Poly>>>>, AdamsError> {
    let g = a.group();
    let p = &res.complex;
    let mut lifts = Vec::with_capacity(g.order());
    for w in 0..g.order() {
        let mut levels: Vec<Vec<Vec<Poly>>> = vec![a.generator_images(w).to_vec()];
        for s in 1..=p.hi() {
            let d = p.diff(s);
            let mut imgs = Vec::with_capacity(d.source().rank());
            for (h, col) in d.columns().iter().enumerate() {
                let moved = apply_semilinear(a, w, &levels[s as usize - 1], col);
                let k = d.source().degree(h);
                imgs.push(lift_along(&d, &moved, k).ok_or(AdamsError::LiftFailed(s))?);
            }
            levels.push(imgs);
        }
        lifts.push(levels);
    }
    Ok(lifts)
}

fn apply_semilinear(a: &SkewedModule, w: usize, images: &[Vec<Poly>], v: &[Poly]) -> Vec<Poly> {
    let ring = a.action().ring();
    let len = images.first().map_or(0, |x| x.len());
    let mut out = vec![Poly::zero(); len];
    for (j, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let wc = a.action().apply(w, c);
        for (i, g) in images[j].iter().enumerate() {
            if !g.is_zero() {
                out[i] = out[i].add(&ring.mul(&wc, g));
            }
        }
    }
    out
}

/// Matrix of `φ ↦ w_B ∘ φ ∘ w_P⁻¹` on `Hom(P_s, B)_d`.
fn hom_action(
    b: &SkewedModule,
    gens: &FreeGraded,
    inverse_images: &[Vec<Poly>],
    w: usize,
    d: i64,
    cache: &mut BTreeMap<(usize, i64), SparseMatrix>,
) -> SparseMatrix {
    let bm = b.module();
    let dims: Vec<usize> = gens.degrees().iter().map(|k| bm.dim(k + d)).collect();
    let mut off = vec![0];
    for x in &dims {
        off.push(off.last().unwrap() + x);
    }
    let mut entries = Vec::new();
    for (i, c) in inverse_images.iter().enumerate() {
        let ei = gens.degree(i) + d;
        if dims[i] == 0 {
            continue;
        }
        let wb = cache.entry((w, ei)).or_insert_with(|| b.matrix(w, ei)).clone();
        for (j, p) in c.iter().enumerate() {
            if p.is_zero() || dims[j] == 0 {
                continue;
            }
            let block = wb.compose(&module_multiplication(bm, p, gens.degree(j) + d));
            for ((r, q), v) in block.entries() {
                entries.push(((off[i] + r, off[j] + q), v.clone()));
            }
        }
    }
    SparseMatrix::from_entries(off[dims.len()], off[dims.len()], entries)
}

fn validation_window(m: &FPGradedModule) -> Option<Window> {
    let gens = m.generators();
    let lo = gens.min_degree()?;
    Window::new(lo, gens.max_degree()? + 4).ok()
}

/// `Ext_{R[W]}^{s}(A, B)_d` as the `W`-fixed part of `Ext_R^s(A, B)_d`, the
/// action coming from semilinear lifts of `w` along a free resolution of
/// `A`, conjugated onto `Hom(P_s, B)` and averaged on cohomology.
pub fn ext_skewed(a: &SkewedModule, b: &SkewedModule, s_max: usize, w: Window) -> Result<SkewedExt, AdamsError> {
    for m in [a, b] {
        if let Some(win) = validation_window(m.module()) {
            validate_skew(m, win)?;
        }
    }
    let g = a.group();
    let res = free_resolution(a.module(), s_max + 1);
    let lifts = lift_action(a, &res)?;
    let mut cache = BTreeMap::new();
    let mut cells = Vec::new();
    for d in w.degrees() {
        let hc = hom_complex(&res.complex, b.module(), d);
        for s in 0..=s_max as i64 {
            let piece = hc.homology(-s);
            let underlying_dim = if s > res.length() { 0 } else { piece.dim() };
            if underlying_dim == 0 {
                cells.push(SkewedExtCell { s, degree: d, underlying_dim: 0, dim: 0, basis: vec![] });
                continue;
            }
            let gens = res.complex.generators(s);
            let induced: Vec<SparseMatrix> = (0..g.order())
                .map(|x| {
                    let t = hom_action(b, &gens, &lifts[g.inverse(x)][s as usize], x, d, &mut cache);
                    piece.induced(&t, &piece)
                })
                .collect();
            let e = averaging_idempotent(&induced);
            let fixed = Subspace::span(e.rows(), e.columns());
            let basis = fixed
                .basis()
                .map(|v| {
                    let mut z = SparseVec::new();
                    for (i, c) in v.iter() {
                        z.axpy(c, &piece.representative(*i));
                    }
                    sparse_to_pairs(&z)
                })
                .collect();
            cells.push(SkewedExtCell { s, degree: d, underlying_dim, dim: fixed.dim(), basis });
        }
    }
    let small = g.order() <= 2 && a.action().ring().nvars() == 1 && w.hi - w.lo <= 8;
    let cross_check = if small {
        super::ext_skewed_direct(a, b, s_max, w)?.map(|direct| cells.iter().all(|c| direct.get(&(c.s, c.degree)) == Some(&c.dim)))
    } else {
        None
    };
    Ok(SkewedExt { window: w, s_max, group_order: g.order(), resolution_ranks: res.ranks(), cells, cross_check })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct E2Cell {
    pub s: i64,
    /// `t = s + d`, so that the cell contributes to stem `t − s = d`.
    pub t: i64,
    pub degree: i64,
    pub dim: usize,
    pub basis: Vec<Vec<(usize, String)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct E2Page {
    pub row_bound: usize,
    pub window: Window,
    /// Rows `0..=row_bound + 1`; the last row is computed to confirm vanishing.
    pub cells: Vec<E2Cell>,
    pub extra_row_zero: bool,
    pub cross_check: Option<bool>,
    pub warnings: Vec<String>,
}

impl E2Page {
    pub fn get(&self, s: i64, t: i64) -> usize {
        self.cells.iter().find(|c| c.s == s && c.t == t).map_or(0, |c| c.dim)
    }

    pub fn nonzero(&self) -> Vec<(i64, i64, usize)> {
        self.cells.iter().filter(|c| c.dim > 0).map(|c| (c.s, c.t, c.dim)).collect()
    }
}

/// The `E₂` page `Ext_{R[W]}^{s,t}(A, B)` for `s ≤ r`, plus row `r + 1`,
/// which must vanish. `r` defaults to the number of variables.
pub fn e2_page(a: &SkewedModule, b: &SkewedModule, r: Option<usize>, w: Window) -> Result<E2Page, AdamsError> {
    let ring = a.action().ring();
    let ideal = HomIdeal::augmentation(ring);
    let mut warnings = Vec::new();
    for (name, m) in [("source", a), ("target", b)] {
        let Some(win) = validation_window(m.module()) else { continue };
        let (v, at) = is_l0_complete(m.module(), &ideal, win, None).map_err(|e| match e {
            crate::completion::CompletionError::Graded(g) => AdamsError::Graded(g),
            other => AdamsError::NotWellDefined(other.to_string()),
        })?;
        match v {
            Verdict::No => return Err(AdamsError::NotComplete(at.unwrap_or(win.lo))),
            Verdict::WindowLimited => warnings.push(format!("{name} completeness is window-limited on [{}, {}]", win.lo, win.hi)),
            Verdict::Yes => {}
        }
    }
    let r = r.unwrap_or(ring.nvars());
    let ext = ext_skewed(a, b, r + 1, w)?;
    if let Some(c) = ext.cells.iter().find(|c| c.s == r as i64 + 1 && c.dim > 0) {
        return Err(AdamsError::RowBoundViolated { s: c.s, degree: c.degree, dim: c.dim });
    }
    let mut cells: Vec<E2Cell> = ext
        .cells
        .iter()
        .map(|c| E2Cell { s: c.s, t: c.s + c.degree, degree: c.degree, dim: c.dim, basis: c.basis.clone() })
        .collect();
    cells.sort_by_key(|c| (c.s, c.t));
    Ok(E2Page { row_bound: r, window: w, cells, extra_row_zero: true, cross_check: ext.cross_check, warnings })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationDims {
    pub window: Window,
    pub group_order: usize,
    pub dims: Vec<(i64, usize)>,
    pub stabilized: bool,
}

/// Degreewise dims of `L₀(⊕ Σ^{nᵢ} R)[W]`: the completion of the free module
/// times `|W|` for the group-algebra factor.
pub fn projective_realization_dims(
    ring: &Arc<GradedPolyRing>,
    shifts: &[i64],
    group_order: usize,
    w: Window,
) -> Result<RealizationDims, AdamsError> {
    let free = FPGradedModule::free(FreeGraded::new(ring.clone(), shifts.to_vec()));
    let rep = adic_completion(&free, &HomIdeal::augmentation(ring), w, None).map_err(|e| match e {
        crate::completion::CompletionError::Graded(g) => AdamsError::Graded(g),
        other => AdamsError::NotWellDefined(other.to_string()),
    })?;
    Ok(RealizationDims {
        window: w,
        group_order,
        dims: rep.entries.iter().map(|e| (e.degree, e.dim * group_order)).collect(),
        stabilized: rep.unresolved().is_empty(),
    })
}

#[derive(Clone, Debug)]
pub struct SkewedTensor {
    pub module: SkewedModule,
    /// Diagonal action conventions are only pinned down for abelian `W`.
    pub convention_fixed: bool,
}

/// `A ⊗_R B` with `w·(a ⊗ b) = (w a) ⊗ (w b)`.
pub fn skewed_tensor(a: &SkewedModule, b: &SkewedModule) -> Result<SkewedTensor, AdamsError> {
    if a.group() != b.group() || a.action() != b.action() {
        return Err(AdamsError::NotWellDefined("factors carry different actions".into()));
    }
    let ring = a.action().ring();
    let module = a.module().tensor(b.module())?;
    let (ra, rb) = (a.module().generators().rank(), b.module().generators().rank());
    let images = (0..a.group().order())
        .map(|w| {
            let (ia, ib) = (a.generator_images(w), b.generator_images(w));
            (0..ra * rb)
                .map(|idx| {
                    let (i, j) = (idx / rb, idx % rb);
                    let mut v = vec![Poly::zero(); ra * rb];
                    for (k, p) in ia[i].iter().enumerate() {
                        for (l, q) in ib[j].iter().enumerate() {
                            if !p.is_zero() && !q.is_zero() {
                                v[k * rb + l] = v[k * rb + l].add(&ring.mul(p, q));
                            }
                        }
                    }
                    v
                })
                .collect()
        })
        .collect();
    let module = SkewedModule::new(module, a.action().clone(), images)?;
    Ok(SkewedTensor { convention_fixed: a.group().is_abelian(), module })
}

