use std::collections::BTreeMap;

use proptest::prelude::*;

use super::*;
use crate::exactla::{Rational, SparseVec, Subspace};
use crate::gradedmod::{FreeGraded, PolyMatrix};

fn qxy() -> Arc<GradedPolyRing> {
    GradedPolyRing::new(&[("x", 1), ("y", 1)]).unwrap()
}

fn p(r: &GradedPolyRing, s: &str) -> Poly {
    r.parse_poly(s).unwrap()
}

/// Coefficient vector of a homogeneous polynomial on all monomials of degree `d`.
fn coords(r: &GradedPolyRing, f: &Poly, d: i64) -> SparseVec {
    let basis = r.standard_monomials(d);
    SparseVec::from_pairs(f.terms().map(|(m, c)| (basis.iter().position(|b| b == m).unwrap(), c.clone())))
}

/// `I_d` spanned by `m·g` over all monomials `m` of complementary degree.
fn ideal_piece(r: &GradedPolyRing, gens: &[Poly], d: i64) -> Subspace {
    let mut s = Subspace::zero(r.degree_piece_dim(d));
    for g in gens {
        let gd = g.degree().unwrap();
        for m in r.standard_monomials(d - gd).iter() {
            s.insert(coords(r, &r.mul_mono(m, g), d));
        }
    }
    s
}

#[test]
fn normal_form_hand_division() {
    let r = qxy();
    let f = p(&r, "x^2*y");
    assert!(normal_form(&f, &[p(&r, "x^2")]).is_zero());
    assert!(normal_form(&f, &[p(&r, "x*y")]).is_zero());
    assert_eq!(normal_form(&f, &[p(&r, "y^2")]), f);
    assert!(normal_form(&Poly::zero(), &[p(&r, "x")]).is_zero());
    let g = p(&r, "x^2 + y^2");
    assert!(normal_form(&g, &[g.clone()]).is_zero());
}

#[test]
fn buchberger_small_ideals() {
    let r = GradedPolyRing::new(&[("x", 1)]).unwrap();
    assert_eq!(buchberger(&HomIdeal::parse(&r, &["x"]).unwrap()), vec![p(&r, "x")]);
    let r = qxy();
    let gb = buchberger(&HomIdeal::parse(&r, &["x", "y"]).unwrap());
    assert_eq!(gb.len(), 2);
    assert!(gb.contains(&p(&r, "x")) && gb.contains(&p(&r, "y")));
}

#[test]
fn buchberger_golden_against_linear_algebra() {
    let r = qxy();
    let gens = vec![p(&r, "x^2 + y^2"), p(&r, "x*y")];
    let gb = buchberger(&HomIdeal::new(r.clone(), gens.clone()).unwrap());
    let golden = vec![p(&r, "y^3"), p(&r, "x*y"), p(&r, "x^2 + y^2")];
    let mut sorted = gb.clone();
    sorted.sort_by(|a, b| a.leading_mono().cmp(&b.leading_mono()));
    let mut want = golden.clone();
    want.sort_by(|a, b| a.leading_mono().cmp(&b.leading_mono()));
    assert_eq!(sorted, want);
    // Standard monomials w.r.t. the basis count exactly dim R_d − dim I_d.
    let leads: Vec<Mono> = gb.iter().map(|g| g.leading_mono().unwrap().clone()).collect();
    for d in 0..8 {
        let std = r.standard_monomials(d).iter().filter(|m| !leads.iter().any(|l| l.divides(m))).count();
        assert_eq!(std, r.degree_piece_dim(d) - ideal_piece(&r, &gens, d).dim(), "degree {d}");
    }
}

#[test]
fn degree_piece_dims() {
    let r = GradedPolyRing::new(&[("x", 2)]).unwrap();
    assert_eq!(r.degree_piece_dim(4), 1);
    assert_eq!(r.degree_piece_dim(3), 0);
    assert_eq!(r.degree_piece_dim(-2), 0);
    assert_eq!(qxy().degree_piece_dim(3), 4);
    let q = GradedPolyRing::quotient(&[("x", 1), ("y", 1)], &["x*y"]).unwrap();
    assert_eq!(q.degree_piece_dim(5), 2);
}

#[test]
fn quotient_ring_arithmetic_reduces() {
    let q = GradedPolyRing::quotient(&[("x", 1), ("y", 1)], &["x*y"]).unwrap();
    assert!(q.mul(&q.var(0), &q.var(1)).is_zero());
    assert_eq!(q.format_poly(&q.parse_poly("(x+y)^2").unwrap()), "x^2 + y^2");
    assert_eq!(q.to_string(), "Q[x:1, y:1]/(x*y)");
}

#[test]
fn parse_and_format_roundtrip() {
    let r = qxy();
    for s in ["3/2*x^2*y - y^3", "x", "-x*y + 7", "0"] {
        let f = p(&r, s);
        assert_eq!(p(&r, &r.format_poly(&f)), f);
    }
    let mut params = BTreeMap::new();
    params.insert("i".to_string(), 3);
    assert_eq!(r.parse_poly_with("x^i", &params).unwrap(), p(&r, "x^3"));
    assert_eq!(eval_int_expr("2*i-1", &params).unwrap(), 5);
    assert!(matches!(r.parse_poly("x + z"), Err(PolyError::UnknownVariable(_))));
    assert!(matches!(r.parse_poly("x +"), Err(PolyError::Parse { .. })));
}

fn col_matrix(r: &Arc<GradedPolyRing>, gens: &[&str]) -> PolyMatrix {
    let polys: Vec<Poly> = gens.iter().map(|g| p(r, g)).collect();
    let degs = polys.iter().map(|g| g.degree().unwrap()).collect();
    PolyMatrix::new(FreeGraded::new(r.clone(), degs), FreeGraded::new(r.clone(), vec![0]), polys.into_iter().map(|g| vec![g]).collect())
        .unwrap()
}

#[test]
fn syzygy_examples() {
    let rx = GradedPolyRing::new(&[("x", 1)]).unwrap();
    assert_eq!(syzygies(&col_matrix(&rx, &["x"])).source().rank(), 0);

    let r = qxy();
    let m = col_matrix(&r, &["x", "y"]);
    let s = syzygies(&m);
    assert_eq!(s.source().degrees(), &[2]);
    let col = s.column(0);
    // Proportional to (y, −x).
    let c = col[0].coeff(&r.var_mono(1));
    assert_eq!(col[0], p(&r, "y").scale(&c));
    assert_eq!(col[1], p(&r, "-x").scale(&c));

    let m = col_matrix(&r, &["x^2", "x*y", "y^2"]);
    let s = syzygies(&m);
    assert_eq!(s.source().rank(), 2);
    assert!(m.compose(&s).is_zero());
    // Both expected syzygies are in the span of the computed ones.
    for want in [["y", "-x", "0"], ["0", "y", "-x"]] {
        let v: Vec<Poly> = want.iter().map(|w| p(&r, w)).collect();
        assert!(in_image(&s, &v, 3));
    }
}

#[test]
fn syzygies_over_quotient_ring() {
    let q = GradedPolyRing::quotient(&[("x", 1), ("y", 1)], &["x*y"]).unwrap();
    let m = col_matrix(&q, &["x"]);
    let s = syzygies(&m);
    // ann(x) = (y)
    assert_eq!(s.source().degrees(), &[2]);
    assert_eq!(s.column(0)[0].leading_mono(), Some(&q.var_mono(1)));
}

#[test]
fn minimal_generators_drop_redundant_columns() {
    let r = qxy();
    let m = col_matrix(&r, &["x", "x*y", "y", "x + y"]);
    let g = minimal_generators(&m);
    assert_eq!(g.source().rank(), 2);
}

fn arb_poly(deg: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, (deg + 1) as usize)
}

fn poly_from(r: &GradedPolyRing, d: i64, coeffs: &[i64]) -> Poly {
    let mut f = Poly::zero();
    for (m, c) in r.standard_monomials(d).iter().zip(coeffs) {
        f.add_term(m.clone(), &Rational::from_int(*c));
    }
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normal_form_is_idempotent(a in arb_poly(3), b in arb_poly(2), f in arb_poly(4)) {
        let r = qxy();
        let g = vec![poly_from(&r, 3, &a), poly_from(&r, 2, &b)];
        let g: Vec<Poly> = g.into_iter().filter(|x| !x.is_zero()).collect();
        prop_assume!(!g.is_empty());
        let f = poly_from(&r, 4, &f);
        let nf = normal_form(&f, &g);
        prop_assert_eq!(normal_form(&nf, &g), nf);
    }

    #[test]
    fn membership_matches_linear_algebra(a in arb_poly(2), b in arb_poly(2), f in arb_poly(4)) {
        let r = qxy();
        let gens: Vec<Poly> = vec![poly_from(&r, 2, &a), poly_from(&r, 2, &b)].into_iter().filter(|x| !x.is_zero()).collect();
        prop_assume!(!gens.is_empty());
        let f = poly_from(&r, 4, &f);
        let gb = buchberger(&HomIdeal::new(r.clone(), gens.clone()).unwrap());
        let by_gb = normal_form(&f, &gb).is_zero();
        let by_la = ideal_piece(&r, &gens, 4).contains(&coords(&r, &f, 4));
        prop_assert_eq!(by_gb, by_la);
    }

    #[test]
    fn groebner_basis_is_order_independent(a in arb_poly(2), b in arb_poly(3), c in arb_poly(2)) {
        let r = qxy();
        let gens: Vec<Poly> = vec![poly_from(&r, 2, &a), poly_from(&r, 3, &b), poly_from(&r, 2, &c)]
            .into_iter().filter(|x| !x.is_zero()).collect();
        prop_assume!(!gens.is_empty());
        let mut rev = gens.clone();
        rev.reverse();
        let g1 = buchberger(&HomIdeal::new(r.clone(), gens).unwrap());
        let g2 = buchberger(&HomIdeal::new(r.clone(), rev).unwrap());
        prop_assert_eq!(g1, g2);
    }
}
