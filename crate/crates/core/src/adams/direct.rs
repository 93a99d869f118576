//! Ext over `R[W]` from a free resolution over the skewed ring itself,
//! built degree by degree with plain linear algebra. Independent of the
//! fixed-point route and used to cross-check it on small instances.

use std::collections::{BTreeMap, HashMap};

use super::{module_multiplication, AdamsError, SkewedModule};
use crate::exactla::{kernel, rank, SparseMatrix, SparseVec, Subspace};
use crate::gradedmod::Window;
use crate::polyring::{GradedPolyRing, Mono, Poly};

/// Anything an element `m·w` of the skewed ring can act on, degreewise.
trait SkewSpace {
    fn dim(&self, e: i64) -> usize;
    /// `m · (w · v)` for `v` in degree `e`.
    fn act(&self, m: &Mono, w: usize, e: i64, v: &SparseVec) -> SparseVec;
}

struct ModuleSide<'a>(&'a SkewedModule);

impl SkewSpace for ModuleSide<'_> {
    fn dim(&self, e: i64) -> usize {
        self.0.module().dim(e)
    }

    fn act(&self, m: &Mono, w: usize, e: i64, v: &SparseVec) -> SparseVec {
        let wv = self.0.matrix(w, e).apply(v);
        if m.is_one() {
            return wv;
        }
        module_multiplication(self.0.module(), &Poly::monomial(m.clone()), e).apply(&wv)
    }
}

/// A free `R[W]`-module; degree-`e` basis `(j, m, w)` stands for `m w g_j`.
struct SkewFree<'a> {
    ring: &'a GradedPolyRing,
    module: &'a SkewedModule,
    degrees: Vec<i64>,
    pieces: BTreeMap<i64, (Vec<(usize, Mono, usize)>, HashMap<(usize, Mono, usize), usize>)>,
}

impl<'a> SkewFree<'a> {
    fn new(ring: &'a GradedPolyRing, module: &'a SkewedModule) -> Self {
        SkewFree { ring, module, degrees: Vec::new(), pieces: BTreeMap::new() }
    }

    fn build_piece(&mut self, e: i64) {
        let order = self.module.group().order();
        let mut entries = Vec::new();
        for (j, &k) in self.degrees.iter().enumerate() {
            for m in self.ring.standard_monomials(e - k).iter() {
                for w in 0..order {
                    entries.push((j, m.clone(), w));
                }
            }
        }
        let index = entries.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        self.pieces.insert(e, (entries, index));
    }

    fn entries(&self, e: i64) -> &[(usize, Mono, usize)] {
        self.pieces.get(&e).map_or(&[], |p| &p.0)
    }
}

impl SkewSpace for SkewFree<'_> {
    fn dim(&self, e: i64) -> usize {
        self.entries(e).len()
    }

    fn act(&self, m: &Mono, w: usize, e: i64, v: &SparseVec) -> SparseVec {
        let group = self.module.group();
        let action = self.module.action();
        let e2 = e + m.degree();
        let Some((_, index)) = self.pieces.get(&e2) else { return SparseVec::new() };
        let mut pairs = Vec::new();
        for (i, c) in v.iter() {
            let (j, m1, w1) = &self.entries(e)[*i];
            // m · w · (m1 w1 g_j) = m (w·m1) (w w1) g_j
            let moved = action.apply(w, &Poly::monomial(m1.clone()));
            let prod = self.ring.mul_mono(m, &moved);
            let ww = group.mul(w, *w1);
            for (mono, coeff) in prod.terms() {
                pairs.push((index[&(*j, mono.clone(), ww)], c.clone() * coeff.clone()));
            }
        }
        SparseVec::from_pairs(pairs)
    }
}

/// One level: generators in `free` with images in the target, and the
/// kernel of the augmentation in each degree.
struct Level<'a> {
    free: SkewFree<'a>,
    images: Vec<SparseVec>,
    kernels: BTreeMap<i64, Subspace>,
}

fn resolve_step<'a, T: SkewSpace>(
    ring: &'a GradedPolyRing,
    module: &'a SkewedModule,
    target: &T,
    wanted: impl Fn(i64) -> Subspace,
    lo: i64,
    top: i64,
) -> Level<'a> {
    let order = module.group().order();
    let one = Mono::one(ring.nvars());
    let mut free = SkewFree::new(ring, module);
    let mut images: Vec<SparseVec> = Vec::new();
    let mut kernels = BTreeMap::new();
    for e in lo..=top {
        let tdim = target.dim(e);
        free.build_piece(e);
        let column = |free: &SkewFree, images: &[SparseVec], (j, m, w): &(usize, Mono, usize)| {
            target.act(m, *w, free.degrees[*j], &images[*j])
        };
        let cols: Vec<SparseVec> = free.entries(e).iter().map(|b| column(&free, &images, b)).collect();
        let mut span = Subspace::span(tdim, cols.iter());
        for v in wanted(e).basis() {
            if span.contains(v) {
                continue;
            }
            for w in 0..order {
                span.insert(target.act(&one, w, e, v));
            }
            free.degrees.push(e);
            images.push(v.clone());
        }
        free.build_piece(e);
        let cols: Vec<SparseVec> = free.entries(e).iter().map(|b| column(&free, &images, b)).collect();
        kernels.insert(e, kernel(&SparseMatrix::from_columns(tdim, cols)));
    }
    Level { free, images, kernels }
}

/// `Hom_{R[W]}(P, B)_d → Hom_{R[W]}(P', B)_d` for the map `P' → P` whose
/// generator images are `images`.
fn coboundary(b: &SkewedModule, p: &SkewFree, next: &Level, d: i64) -> SparseMatrix {
    let bm = b.module();
    let src_off = offsets(p.degrees.iter().map(|k| bm.dim(k + d)));
    let tgt_off = offsets(next.free.degrees.iter().map(|k| bm.dim(k + d)));
    let mut entries = Vec::new();
    let side = ModuleSide(b);
    for (i, v) in next.images.iter().enumerate() {
        let e = next.free.degrees[i];
        for (idx, c) in v.iter() {
            let (j, m, w) = &p.entries(e)[*idx];
            let kj = p.degrees[*j];
            for q in 0..bm.dim(kj + d) {
                let img = side.act(m, *w, kj + d, &SparseVec::unit(q));
                for (r, x) in img.iter() {
                    entries.push(((tgt_off[i] + r, src_off[*j] + q), c.clone() * x.clone()));
                }
            }
        }
    }
    SparseMatrix::from_entries(*tgt_off.last().unwrap(), *src_off.last().unwrap(), entries)
}

fn offsets(dims: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut out = vec![0];
    for d in dims {
        out.push(out.last().unwrap() + d);
    }
    out
}

/// `dim Ext^{s,d}_{R[W]}(A, B)` for `s ≤ s_max`, `d` in the window. Needs
/// `B` bounded above; `None` otherwise.
pub fn ext_skewed_direct(
    a: &SkewedModule,
    b: &SkewedModule,
    s_max: usize,
    w: Window,
) -> Result<Option<BTreeMap<(i64, i64), usize>>, AdamsError> {
    let ring = a.action().ring().as_ref();
    let zero_a = || w.degrees().flat_map(|d| (0..=s_max as i64).map(move |s| ((s, d), 0))).collect();
    let Some(lo) = a.module().generators().min_degree() else { return Ok(Some(zero_a())) };
    let zero = || w.degrees().flat_map(|d| (0..=s_max as i64).map(move |s| ((s, d), 0))).collect();
    let Some(b_hi) = b.module().generators().max_degree() else { return Ok(Some(zero())) };
    let Some(b_top) = b.module().top_degree(b_hi + 64) else { return Ok(None) };
    let top = b_top - w.lo;
    let mut levels: Vec<Level> = Vec::new();
    let first = resolve_step(ring, a, &ModuleSide(a), |e| Subspace::full(a.module().dim(e)), lo, top);
    levels.push(first);
    for _ in 0..=s_max {
        let prev = levels.last().unwrap();
        let next = resolve_step(ring, a, &prev.free, |e| prev.kernels.get(&e).cloned().unwrap_or(Subspace::zero(0)), lo, top);
        levels.push(next);
    }
    let mut dims = BTreeMap::new();
    for d in w.degrees() {
        let deltas: Vec<SparseMatrix> = (0..=s_max).map(|s| coboundary(b, &levels[s].free, &levels[s + 1], d)).collect();
        for s in 0..=s_max {
            let hom_dim = deltas[s].cols();
            let cycles = hom_dim - rank(&deltas[s]);
            let boundaries = if s == 0 { 0 } else { rank(&deltas[s - 1]) };
            dims.insert((s as i64, d), cycles - boundaries);
        }
    }
    Ok(Some(dims))
}
