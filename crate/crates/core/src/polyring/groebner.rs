//! Buchberger's algorithm for submodules of free modules over ℚ[x₁,…,x_r],
//! with ideals as the rank-one case.
//!
//! Module terms are ordered position-over-term: a term in a lower component
//! index is larger, and within one component monomials use the ring order.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::poly::{Mono, Poly};
use crate::exactla::Rational;

/// An element of a free module, one polynomial per component.
pub type ModElem = Vec<Poly>;

fn lead(e: &[Poly]) -> Option<(usize, &Mono, &Rational)> {
    e.iter()
        .enumerate()
        .find_map(|(i, p)| p.leading().map(|(m, c)| (i, m, c)))
}

fn is_zero(e: &[Poly]) -> bool {
    e.iter().all(Poly::is_zero)
}

fn axpy_shifted(target: &mut [Poly], c: &Rational, m: &Mono, src: &[Poly]) {
    for (t, s) in target.iter_mut().zip(src) {
        if !s.is_zero() {
            t.add_scaled_shifted(c, m, s);
        }
    }
}

/// Fully reduces `f` by `basis`: the remainder has no term divisible by a
/// leading term of `basis` (in the same component).
pub fn module_normal_form(f: &[Poly], basis: &[ModElem]) -> ModElem {
    let mut p: ModElem = f.to_vec();
    let mut rem: ModElem = vec![Poly::zero(); f.len()];
    loop {
        let Some((i, m, c)) = lead(&p).map(|(i, m, c)| (i, m.clone(), c.clone())) else {
            break;
        };
        let divisor = basis.iter().find(|g| {
            lead(g).is_some_and(|(gi, gm, _)| gi == i && gm.divides(&m))
        });
        match divisor {
            Some(g) => {
                let (_, gm, gc) = lead(g).unwrap();
                let factor = gm.quotient_of(&m);
                let coeff = -(&c / gc);
                axpy_shifted(&mut p, &coeff, &factor, g);
            }
            None => {
                p[i].add_term(m.clone(), &-c.clone());
                rem[i].add_term(m, &c);
            }
        }
    }
    rem
}

fn s_poly(f: &[Poly], g: &[Poly], weights: &[i64]) -> Option<(ModElem, i64)> {
    let (fi, fm, fc) = lead(f)?;
    let (gi, gm, gc) = lead(g)?;
    if fi != gi {
        return None;
    }
    let l = fm.lcm(gm, weights);
    let mut out = vec![Poly::zero(); f.len()];
    axpy_shifted(&mut out, &fc.recip(), &fm.quotient_of(&l), f);
    axpy_shifted(&mut out, &-gc.recip(), &gm.quotient_of(&l), g);
    Some((out, l.degree()))
}

fn monic(e: &[Poly]) -> ModElem {
    match lead(e) {
        Some((_, _, c)) => {
            let inv = c.recip();
            e.iter().map(|p| p.scale(&inv)).collect()
        }
        None => e.to_vec(),
    }
}

/// Reduced Gröbner basis of the submodule generated by `gens`.
pub fn module_groebner(gens: &[ModElem], weights: &[i64]) -> Vec<ModElem> {
    let rank = gens.first().map_or(0, Vec::len);
    let mut basis: Vec<ModElem> = Vec::new();
    let mut pairs: BinaryHeap<Reverse<(i64, usize, usize)>> = BinaryHeap::new();

    let push = |basis: &mut Vec<ModElem>, pairs: &mut BinaryHeap<Reverse<(i64, usize, usize)>>, e: ModElem| {
        let e = monic(&e);
        let (ei, em, _) = lead(&e).unwrap();
        let new = basis.len();
        for (j, g) in basis.iter().enumerate() {
            let (gi, gm, _) = lead(g).unwrap();
            if gi != ei {
                continue;
            }
            // Buchberger's coprime criterion (valid for the ideal case).
            if rank == 1 && em.coprime(gm) {
                continue;
            }
            pairs.push(Reverse((em.lcm(gm, weights).degree(), j, new)));
        }
        basis.push(e);
    };

    for g in gens {
        let r = module_normal_form(g, &basis);
        if !is_zero(&r) {
            push(&mut basis, &mut pairs, r);
        }
    }
    while let Some(Reverse((_, i, j))) = pairs.pop() {
        let Some((s, _)) = s_poly(&basis[i], &basis[j], weights) else { continue };
        let r = module_normal_form(&s, &basis);
        if !is_zero(&r) {
            push(&mut basis, &mut pairs, r);
        }
    }
    reduce_basis(basis)
}

fn reduce_basis(basis: Vec<ModElem>) -> Vec<ModElem> {
    // Drop elements whose leading term is divisible by another's.
    let mut minimal: Vec<ModElem> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let (gi, gm, _) = lead(g).unwrap();
        let redundant = basis.iter().enumerate().any(|(l, h)| {
            let (hi, hm, _) = lead(h).unwrap();
            l != k && hi == gi && hm.divides(gm) && (hm != gm || l < k)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let (gi, gm, gc) = lead(&minimal[k]).map(|(i, m, c)| (i, m.clone(), c.clone())).unwrap();
        let others: Vec<ModElem> =
            minimal.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, h)| h.clone()).collect();
        let mut tail = minimal[k].clone();
        tail[gi].add_term(gm.clone(), &-gc.clone());
        let mut r = module_normal_form(&tail, &others);
        r[gi].add_term(gm, &gc);
        reduced.push(monic(&r));
    }
    reduced.sort_by(|a, b| {
        let (ai, am, _) = lead(a).unwrap();
        let (bi, bm, _) = lead(b).unwrap();
        ai.cmp(&bi).then(am.cmp(bm))
    });
    reduced
}

/// Degree of the S-pair lcm for every pair of basis elements sharing a
/// leading component, with `component_degrees` added.
pub fn s_pair_degrees<'a>(
    basis: &'a [ModElem],
    weights: &'a [i64],
    component_degrees: &'a [i64],
) -> impl Iterator<Item = i64> + 'a {
    (0..basis.len()).flat_map(move |i| {
        (i + 1..basis.len()).filter_map(move |j| {
            let (ai, am, _) = lead(&basis[i])?;
            let (bi, bm, _) = lead(&basis[j])?;
            (ai == bi).then(|| am.lcm(bm, weights).degree() + component_degrees[ai])
        })
    })
}

/// Multivariate division remainder of `f` by `g`.
pub fn poly_normal_form(f: &Poly, g: &[Poly]) -> Poly {
    let basis: Vec<ModElem> = g.iter().filter(|p| !p.is_zero()).map(|p| vec![p.clone()]).collect();
    module_normal_form(&[f.clone()], &basis).pop().unwrap()
}

/// Reduced Gröbner basis of a polynomial ideal in the free polynomial ring.
pub fn poly_groebner(gens: &[Poly], weights: &[i64]) -> Vec<Poly> {
    let elems: Vec<ModElem> = gens.iter().filter(|p| !p.is_zero()).map(|p| vec![p.clone()]).collect();
    module_groebner(&elems, weights).into_iter().map(|mut e| e.pop().unwrap()).collect()
}
