//! Homogeneous syzygies and minimal generators, computed degree by degree.
//!
//! A Gröbner basis of the image bounds the degrees in which the syzygy
//! module needs generators (Schreyer: S-pair lcm degrees plus the degrees of
//! the original generators). Below that bound the kernel of the evaluated
//! map is computed exactly in every degree, and new generators are taken as
//! a complement of `R₊ · Z` inside `Z_d`, so the output is minimal.

use std::collections::BTreeMap;

use super::groebner::{module_groebner, s_pair_degrees, ModElem};
use super::Poly;
use crate::exactla::{kernel, SparseVec, Subspace};
use crate::gradedmod::{FreeGraded, PolyMatrix};

/// `R₊ · Z` in degree `d`, given the pieces of a submodule `Z` of `f` in lower degrees.
fn decomposables(f: &FreeGraded, pieces: &BTreeMap<i64, Subspace>, d: i64) -> Subspace {
    let ring = f.ring();
    let mut u = Subspace::zero(f.dim(d));
    for v in 0..ring.nvars() {
        let var = ring.var(v);
        if var.is_zero() {
            continue;
        }
        let w = ring.var_degrees()[v];
        if let Some(z) = pieces.get(&(d - w)) {
            if z.is_zero() {
                continue;
            }
            let mult = f.multiplication_matrix(&var, d - w);
            for b in z.basis() {
                u.insert(mult.apply(b));
            }
        }
    }
    u
}

/// A minimal generating subset of the columns of `m`, as a map into the
/// same target. Columns that are redundant modulo earlier-kept columns of
/// the same degree and `R₊` times lower-degree columns are dropped.
pub fn minimal_generators(m: &PolyMatrix) -> PolyMatrix {
    let target = m.target();
    let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for j in 0..m.source().rank() {
        if m.column(j).iter().any(|p| !p.is_zero()) {
            by_degree.entry(m.source().degree(j)).or_default().push(j);
        }
    }
    let mut pieces: BTreeMap<i64, Subspace> = BTreeMap::new();
    let mut keep = Vec::new();
    let Some((&lo, _)) = by_degree.iter().next() else {
        return m.select_columns(&[]);
    };
    let hi = *by_degree.keys().next_back().unwrap();
    for d in lo..=hi {
        let mut n = decomposables(target, &pieces, d);
        if let Some(cols) = by_degree.get(&d) {
            let basis = target.basis(d);
            for &j in cols {
                if n.insert(target.to_vec(m.column(j), d, &basis)) {
                    keep.push(j);
                }
            }
        }
        pieces.insert(d, n);
    }
    keep.sort_unstable();
    m.select_columns(&keep)
}

/// Upper bound on the degrees of a generating set of `ker m`.
fn syzygy_degree_bound(m: &PolyMatrix) -> Option<i64> {
    let ring = m.ring();
    let target = m.target();
    let mut gens: Vec<ModElem> = m.columns().iter().filter(|c| c.iter().any(|p| !p.is_zero())).cloned().collect();
    let mut bound = m.source().max_degree()?;
    for (k, &td) in target.degrees().iter().enumerate() {
        for r in ring.relation_basis() {
            let mut e = vec![Poly::zero(); target.rank()];
            e[k] = r.clone();
            bound = bound.max(td + r.degree().unwrap());
            gens.push(e);
        }
    }
    if gens.is_empty() {
        return Some(bound);
    }
    let gb = module_groebner(&gens, ring.var_degrees());
    for d in s_pair_degrees(&gb, ring.var_degrees(), target.degrees()) {
        bound = bound.max(d);
    }
    Some(bound)
}

/// Minimal homogeneous generators of the syzygy module of the columns of `m`,
/// returned as a map into `m.source()`.
pub fn syzygies(m: &PolyMatrix) -> PolyMatrix {
    let src = m.source();
    let ring = m.ring().clone();
    let Some(lo) = src.min_degree() else {
        return PolyMatrix::zero(FreeGraded::zero(ring), src.clone());
    };
    let hi = syzygy_degree_bound(m).unwrap_or(lo);
    let mut pieces: BTreeMap<i64, Subspace> = BTreeMap::new();
    let mut degrees = Vec::new();
    let mut columns = Vec::new();
    for d in lo..=hi {
        let z = kernel(&m.evaluate(d));
        if z.is_zero() {
            pieces.insert(d, z);
            continue;
        }
        let mut u = decomposables(src, &pieces, d);
        let basis = src.basis(d);
        for v in z.basis() {
            if u.insert(v.clone()) {
                degrees.push(d);
                columns.push(src.from_vec(v, &basis));
            }
        }
        pieces.insert(d, z);
    }
    PolyMatrix::new(FreeGraded::new(ring, degrees), src.clone(), columns)
        .expect("syzygies are homogeneous by construction")
}

/// Whether `v` (degree `d`) lies in the image of `m`.
pub fn in_image(m: &PolyMatrix, v: &[Poly], d: i64) -> bool {
    let tb = m.target().basis(d);
    let img = m.evaluate_with(&m.source().basis(d), &tb, d);
    Subspace::span(tb.len(), img.columns()).contains(&m.target().to_vec(v, d, &tb))
}

/// Solves `m · x = v` in degree `d`, returning `x` as an element of the source.
pub fn lift_along(m: &PolyMatrix, v: &[Poly], d: i64) -> Option<Vec<Poly>> {
    let sb = m.source().basis(d);
    let tb = m.target().basis(d);
    let mat = m.evaluate_with(&sb, &tb, d);
    let rhs: SparseVec = m.target().to_vec(v, d, &tb);
    crate::exactla::solve(&mat, &rhs).map(|x| m.source().from_vec(&x, &sb))
}
