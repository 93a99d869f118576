use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::exactla::rank;
use crate::gradedmod::{ChainComplex, FPGradedModule, FreeGraded, PolyMatrix, Window};
use crate::koszul::{koszul_tower, koszul_tower_on, KoszulSpec};
use crate::polyring::{GradedPolyRing, HomIdeal, Poly};

fn ring(vars: &[(&str, i64)]) -> Arc<GradedPolyRing> {
    GradedPolyRing::new(vars).unwrap()
}

fn w(lo: i64, hi: i64) -> Window {
    Window::new(lo, hi).unwrap()
}

fn xy_ideal(r: &Arc<GradedPolyRing>) -> HomIdeal {
    HomIdeal::new(r.clone(), vec![r.var(0), r.var(1)]).unwrap()
}

fn residue(r: &Arc<GradedPolyRing>) -> ChainComplex {
    ChainComplex::concentrated(FPGradedModule::residue_field(r), 0)
}

fn zero_tower(r: &Arc<GradedPolyRing>, depth: usize) -> Tower {
    let q = residue(r);
    let zero = PolyMatrix::zero(FreeGraded::new(r.clone(), vec![0]), FreeGraded::new(r.clone(), vec![0]));
    let steps = (1..depth).map(|_| ChainMap::new(q.clone(), q.clone(), [(0, zero.clone())].into()).unwrap()).collect();
    Tower::new(vec![q; depth], steps).unwrap()
}

fn truncated(r: &Arc<GradedPolyRing>, i: u32) -> FPGradedModule {
    FPGradedModule::cyclic(r, 0, &[r.pow(&r.var(0), i), r.pow(&r.var(1), i)]).unwrap()
}

/// `ann(xˢ, yˢ)` in `ℚ[x,y]/(xⁱ, yⁱ)`: monomials `xᵃyᵇ` with `a, b < i` and `a + s, b + s ≥ i`.
fn annihilator_dim(s: usize, i: usize) -> usize {
    let side = (0..i).filter(|a| a + s >= i).count();
    side * side
}

#[test]
fn constant_and_zero_towers() {
    let r = ring(&[("x", 2)]);
    let t = Tower::constant(&residue(&r), 5);
    assert!(t.check_coherence());
    let lim = lim_and_lim1(&t, w(-2, 2), 0);
    let dims: Vec<_> = lim.iter().map(|e| (e.lim_dim, e.lim1_dim, e.stabilized)).collect();
    assert_eq!(dims, vec![(0, 0, true), (0, 0, true), (1, 0, true), (0, 0, true), (0, 0, true)]);
    let z = zero_tower(&r, 5);
    assert!(lim_and_lim1(&z, w(-2, 2), 0).iter().all(|e| e.lim_dim == 0 && e.stabilized));
    assert_eq!(z.at_degree(0).dim(3, 0), 1);
}

#[test]
fn shallow_towers_are_unresolved() {
    let r = ring(&[("x", 2)]);
    let t = Tower::constant(&residue(&r), 3);
    let e = &lim_and_lim1(&t, w(0, 0), 0)[0];
    assert!(!e.stabilized);
    assert_eq!(e.lim_dim, 1);
}

#[test]
fn completion_of_ring_degreewise() {
    let r = ring(&[("x", 1), ("y", 1)]);
    let spec = KoszulSpec::new(&xy_ideal(&r), 1).unwrap();
    let t = koszul_tower(&spec, 9).unwrap();
    for e in lim_and_lim1(&t, w(-2, 5), 0) {
        assert!(e.stabilized);
        assert_eq!(e.lim_dim, r.degree_piece_dim(e.degree));
        assert_eq!(e.lim1_dim, 0);
    }
}

#[test]
fn images_are_nested() {
    let q = GradedPolyRing::quotient(&[("x", 1), ("y", 1)], &["x*y"]).unwrap();
    let spec = KoszulSpec::new(&xy_ideal(&q), 1).unwrap();
    let t = koszul_tower(&spec, 6).unwrap();
    for d in 0..=6 {
        let v = t.at_degree(d);
        for k in 0..=2 {
            for s in 1..=3 {
                for m in s + 1..6 {
                    assert!(v.image(m + 1, s, k).is_subspace_of(&v.image(m, s, k)));
                }
            }
        }
    }
}

#[test]
fn pro_zero_examples() {
    let r = ring(&[("x", 1), ("y", 1)]);
    let t = koszul_tower(&KoszulSpec::new(&xy_ideal(&r), 1).unwrap(), 6).unwrap();
    let cert = pro_zero_check(&t, 1, 2, w(0, 8)).unwrap();
    assert!(cert.witnesses.iter().all(|(s, m)| *m == s + 1));
    cert.verify().unwrap();

    let q = GradedPolyRing::quotient(&[("x", 1), ("y", 1)], &["x*y"]).unwrap();
    let t = koszul_tower(&KoszulSpec::new(&xy_ideal(&q), 1).unwrap(), 8).unwrap();
    assert!(t.at_degree(2).dim(1, 1) > 0);
    let cert = pro_zero_check(&t, 1, 4, w(0, 10)).unwrap();
    cert.verify().unwrap();
    assert_eq!(cert.witnesses.len(), 4);
    assert!(cert.witnesses.iter().all(|(s, m)| m > s && *m <= s + 4));

    let rx = ring(&[("x", 2)]);
    let c = Tower::constant(&residue(&rx), 5);
    let fail = pro_zero_check(&c, 0, 2, w(0, 0)).unwrap_err();
    assert_eq!(fail.stage, 1);
    assert!(!fail.obstructions.is_empty());
}

#[test]
fn mutated_certificate_is_rejected() {
    let q = GradedPolyRing::quotient(&[("x", 1), ("y", 1)], &["x*y"]).unwrap();
    let t = koszul_tower(&KoszulSpec::new(&xy_ideal(&q), 1).unwrap(), 6).unwrap();
    let mut cert = pro_zero_check(&t, 1, 3, w(0, 8)).unwrap();
    let mut claimed = cert.clone();
    claimed.cells[0].rank += 1;
    assert!(claimed.verify().is_err());
    // A consistent but nonzero witness matrix must also be rejected.
    let c = cert.cells.iter_mut().find(|c| c.matrix.rows() > 0 && c.matrix.cols() > 0).unwrap();
    c.matrix = crate::exactla::SparseMatrix::from_entries(c.matrix.rows(), c.matrix.cols(), vec![((0, 0), 1.into())]);
    c.rank = 1;
    assert!(cert.verify().is_err());
}

#[test]
fn weak_proregularity() {
    let r = ring(&[("x", 1), ("y", 1)]);
    let rep = weak_proregularity_check(&xy_ideal(&r), 3, 2, w(0, 8));
    assert!(rep.weakly_pro_regular);
    assert_eq!(rep.certificates.len(), 2);
    let rx = ring(&[("x", 2)]);
    let one = HomIdeal::new(rx.clone(), vec![rx.var(0)]).unwrap();
    assert!(weak_proregularity_check(&one, 3, 1, w(0, 8)).weakly_pro_regular);
    let q = GradedPolyRing::quotient(&[("x", 1), ("y", 1)], &["x*y"]).unwrap();
    let rep = weak_proregularity_check(&xy_ideal(&q), 3, 4, w(0, 10));
    assert!(rep.weakly_pro_regular);
    // H₁ is nonzero at every stage, yet each transition of span one kills it.
    let t = koszul_tower(&KoszulSpec::new(&xy_ideal(&q), 1).unwrap(), 4).unwrap();
    assert!((1..=4).all(|s| (0..=10).any(|d| t.at_degree(d).dim(s, 1) > 0)));
    assert!(rep.certificates[0].witnesses.iter().all(|(s, m)| *m == s + 1));
}

fn corrigendum_family(r: &Arc<GradedPolyRing>, n: usize) -> SumFamilyTower {
    let rr = r.clone();
    SumFamilyTower {
        ring: r.clone(),
        ideal: xy_ideal(r),
        rule: Arc::new(move |i| Ok(truncated(&rr, i as u32))),
        truncation: n,
    }
}

#[test]
fn dimension_law_for_second_homology() {
    let r = ring(&[("x", 1), ("y", 1)]);
    let spec = KoszulSpec::new(&xy_ideal(&r), 1).unwrap();
    for i in 1..=5 {
        let m = ChainComplex::concentrated(truncated(&r, i as u32), 0);
        let t = koszul_tower_on(&spec, &m, 5).unwrap();
        for s in 1..=5 {
            let total: usize = (0..=2 * i as i64 + 2 * s as i64).map(|d| t.at_degree(d).dim(s, 2)).sum();
            assert_eq!(total, annihilator_dim(s, i), "s = {s}, i = {i}");
            assert_eq!(total, s.min(i).pow(2));
        }
    }
}

#[test]
fn ml_failure_small_grid() {
    let r = ring(&[("x", 1), ("y", 1)]);
    let cert = ml_failure_certificate(&corrigendum_family(&r, 5), 2, &[1, 2], &[1, 2, 3], w(0, 20)).unwrap();
    cert.verify().unwrap();
    for i in 1..=5 {
        assert_eq!(cert.per_summand_prozero[&i], i as usize);
    }
    for t in 1..=3 {
        assert_eq!(cert.spread[&t], t as i64 + 1);
    }
    let mut bad = cert.clone();
    let cell = bad.cells.iter_mut().find(|c| c.rank > 0).unwrap();
    cell.matrix = crate::exactla::SparseMatrix::zero(cell.matrix.rows(), cell.matrix.cols());
    assert!(bad.verify().is_err());
}

#[test]
fn ml_failure_negative_controls() {
    let r = ring(&[("x", 1), ("y", 1)]);
    let rr = r.clone();
    let constant = SumFamilyTower {
        ring: r.clone(),
        ideal: xy_ideal(&r),
        rule: Arc::new(move |_| Ok(FPGradedModule::residue_field(&rr))),
        truncation: 6,
    };
    let err = ml_failure_certificate(&constant, 2, &[1, 2], &[1, 2], w(0, 10)).unwrap_err();
    assert_eq!(err.part, "spread");
    let err = ml_failure_certificate(&corrigendum_family(&r, 1), 2, &[1, 2], &[1, 2], w(0, 10)).unwrap_err();
    assert_eq!(err.part, "spread");
}

#[test]
fn pro_zero_summands_have_zero_limit() {
    let r = ring(&[("x", 1), ("y", 1)]);
    let spec = KoszulSpec::new(&xy_ideal(&r), 1).unwrap();
    // H₂ of the truncated sum ⊕_{i≤3} M_i: each summand dies after span i ≤ 3.
    let mut m = truncated(&r, 1);
    for i in 2..=3 {
        m = m.direct_sum(&truncated(&r, i)).unwrap();
    }
    let t = koszul_tower_on(&spec, &ChainComplex::concentrated(m, 0), 8).unwrap();
    assert!(lim_and_lim1(&t, w(0, 10), 2).iter().all(|e| e.stabilized && e.lim_dim == 0 && e.lim1_dim == 0));
}

fn scalar_tower(r: &Arc<GradedPolyRing>, p: &Poly, depth: usize) -> Tower {
    crate::koszul::multiplication_tower(&ChainComplex::concentrated(FPGradedModule::ring_shifted(r, 0), 0), p, depth)
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn prop_images_nested_and_ml(depth in 5usize..=8, d in 0i64..=6) {
        let r = ring(&[("x", 1), ("y", 1)]);
        let t = scalar_tower(&r, &r.parse_poly("x+y").unwrap(), depth);
        let v = t.at_degree(d);
        for m in 2..depth {
            prop_assert!(v.image(m + 1, 1, 0).is_subspace_of(&v.image(m, 1, 0)));
        }
        let e = lim_at_degree(&v, depth, 0);
        if e.stabilized {
            prop_assert_eq!(e.lim1_dim, 0);
        }
        // Finite-dimensional stages: the limit never exceeds the first stage.
        prop_assert!(e.lim_dim <= e.stage_dims[0]);
    }

    #[test]
    fn prop_direct_transitions_coherent(depth in 3usize..=5) {
        let q = GradedPolyRing::quotient(&[("x", 1), ("y", 1)], &["x*y"]).unwrap();
        let t = koszul_tower(&KoszulSpec::new(&xy_ideal(&q), 1).unwrap(), depth).unwrap();
        prop_assert!(t.check_coherence());
        for d in 0..=4 {
            let v = t.at_degree(d);
            for k in 0..=2 {
                let direct = v.map(depth, 1, k);
                let composite = v.map(2, 1, k).compose(&v.map(depth, 2, k));
                prop_assert_eq!(rank(&direct), rank(&composite));
                prop_assert_eq!(&*direct, &composite);
            }
        }
    }
}
