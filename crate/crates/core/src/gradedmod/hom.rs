use std::collections::BTreeMap;

use serde::Serialize;

use super::complex::{ChainComplex, LinComplex};
use super::free::PolyMatrix;
use super::module::{FPGradedModule, ModulePiece, Window};
use crate::exactla::{kernel, SparseMatrix, SparseVec};
use crate::polyring::{minimal_generators, syzygies, Poly};

/// A free resolution `P_• → M` with the augmentation on generators.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub complex: ChainComplex,
    /// `P_0 → F_0`, the free cover of `M`.
    pub augmentation: PolyMatrix,
    /// Whether nonzero syzygies remained beyond the length bound.
    pub truncated: bool,
}

impl Resolution {
    pub fn length(&self) -> i64 {
        self.complex.hi()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.complex.objects().iter().map(|m| m.generators().rank()).collect()
    }
}

/// Free resolution by iterated minimal syzygies, stopping at
/// `length_bound` or when the syzygies vanish.
pub fn free_resolution(m: &FPGradedModule, length_bound: usize) -> Resolution {
    let f0 = m.generators().clone();
    let augmentation = PolyMatrix::identity(&f0);
    let mut diffs: Vec<PolyMatrix> = Vec::new();
    let mut truncated = false;
    let mut next = minimal_generators(m.relations());
    loop {
        if next.source().rank() == 0 {
            break;
        }
        if diffs.len() == length_bound {
            truncated = true;
            break;
        }
        let syz = syzygies(&next);
        diffs.push(next);
        next = syz;
    }
    let complex = ChainComplex::from_free_maps(0, f0, diffs).expect("syzygies compose to zero");
    Resolution { complex, augmentation, truncated }
}

/// Multiplication by a homogeneous `p` between pieces of `n`, in quotient coordinates.
fn piece_multiplication(n: &FPGradedModule, p: &Poly, src: &ModulePiece, tgt: &ModulePiece) -> SparseMatrix {
    if p.is_zero() || src.dim() == 0 || tgt.dim() == 0 {
        return SparseMatrix::zero(tgt.dim(), src.dim());
    }
    let mult = n.generators().multiplication_matrix(p, src.degree);
    let cols = (0..src.dim()).map(|i| tgt.project(&mult.apply(&src.representative(i)))).collect();
    SparseMatrix::from_columns(tgt.dim(), cols)
}

/// `Hom(G, N)_d → Hom(F, N)_d`, `φ ↦ φ ∘ a`, for a map `a: F → G` of free
/// modules. `Hom(F, N)_d` has coordinates `⊕_j N_{deg f_j + d}`.
pub fn hom_into(a: &PolyMatrix, n: &FPGradedModule, d: i64) -> SparseMatrix {
    let spieces: Vec<ModulePiece> = a.target().degrees().iter().map(|g| n.evaluate(g + d)).collect();
    let tpieces: Vec<ModulePiece> = a.source().degrees().iter().map(|g| n.evaluate(g + d)).collect();
    hom_into_pieces(a, n, &spieces, &tpieces)
}

fn hom_into_pieces(a: &PolyMatrix, n: &FPGradedModule, spieces: &[ModulePiece], tpieces: &[ModulePiece]) -> SparseMatrix {
    let soff = offsets(spieces);
    let toff = offsets(tpieces);
    let mut entries = Vec::new();
    for (j, tp) in tpieces.iter().enumerate() {
        for (i, sp) in spieces.iter().enumerate() {
            let block = piece_multiplication(n, a.entry(i, j), sp, tp);
            for ((r, c), v) in block.entries() {
                entries.push(((toff[j] + r, soff[i] + c), v.clone()));
            }
        }
    }
    SparseMatrix::from_entries(*toff.last().unwrap(), *soff.last().unwrap(), entries)
}

fn offsets(pieces: &[ModulePiece]) -> Vec<usize> {
    let mut out = vec![0];
    for p in pieces {
        out.push(out.last().unwrap() + p.dim());
    }
    out
}

/// One internal degree of `Hom_R(M, N)`; maps raise degree by `degree`.
#[derive(Clone, Debug, Serialize)]
pub struct HomPiece {
    pub degree: i64,
    pub dim: usize,
    /// Basis elements, each listing the images of the generators of `M`
    /// in quotient coordinates of the corresponding pieces of `N`.
    #[serde(skip)]
    pub basis: Vec<Vec<SparseVec>>,
}

/// `Hom_R(M, N)_d` for `d` in the window, as the kernel of
/// `∏_{J₀} N → ∏_{J₁} N` induced by the presentation of `M`.
pub fn hom_degreewise(m: &FPGradedModule, n: &FPGradedModule, w: Window) -> Vec<HomPiece> {
    let p = m.relations();
    w.degrees()
        .map(|d| {
            let spieces: Vec<ModulePiece> = p.target().degrees().iter().map(|g| n.evaluate(g + d)).collect();
            let tpieces: Vec<ModulePiece> = p.source().degrees().iter().map(|g| n.evaluate(g + d)).collect();
            let mat = hom_into_pieces(p, n, &spieces, &tpieces);
            let ker = kernel(&mat);
            let off = offsets(&spieces);
            let basis = ker
                .basis()
                .map(|v| {
                    (0..spieces.len())
                        .map(|j| {
                            let keep: Vec<usize> = (off[j]..off[j + 1]).collect();
                            v.restrict(&keep)
                        })
                        .collect()
                })
                .collect();
            HomPiece { degree: d, dim: ker.dim(), basis }
        })
        .collect()
}

/// `Ext^{s}(M, N)_d` for `s ≤ s_max` and `d` in the window, keyed `(s, d)`.
#[derive(Clone, Debug)]
pub struct ExtTable {
    pub dims: BTreeMap<(i64, i64), usize>,
    pub resolution_ranks: Vec<usize>,
    pub truncated: bool,
}

impl ExtTable {
    pub fn get(&self, s: i64, d: i64) -> usize {
        self.dims.get(&(s, d)).copied().unwrap_or(0)
    }
}

/// The cochain complex `Hom(P_•, N)_d` written as a chain complex in
/// degrees `−len..=0`, so that `H_{−s}` is `Ext^s`.
pub fn hom_complex(p: &ChainComplex, n: &FPGradedModule, d: i64) -> LinComplex {
    let len = p.hi();
    let lo = -len;
    let dims = (lo..=0)
        .map(|m| p.generators(-m).degrees().iter().map(|g| n.dim(g + d)).sum())
        .collect();
    let diffs = (lo + 1..=0).map(|m| hom_into(&p.diff(-m + 1), n, d)).collect();
    LinComplex::new(lo, dims, diffs)
}

/// Ext via a free resolution of `M`, computed for `s ≤ s_max` (one extra
/// resolution step is built so that `Ext^{s_max}` is exact).
pub fn ext(m: &FPGradedModule, n: &FPGradedModule, s_max: usize, w: Window) -> ExtTable {
    let res = free_resolution(m, s_max + 1);
    let mut dims = BTreeMap::new();
    for d in w.degrees() {
        let hc = hom_complex(&res.complex, n, d);
        for s in 0..=s_max as i64 {
            let dim = if s > res.length() { 0 } else { hc.homology(-s).dim() };
            dims.insert((s, d), dim);
        }
    }
    ExtTable { dims, resolution_ranks: res.ranks(), truncated: res.truncated }
}
