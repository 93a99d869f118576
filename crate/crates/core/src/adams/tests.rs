use proptest::prelude::*;

use super::*;
use crate::gradedmod::ext;

fn w(lo: i64, hi: i64) -> Window {
    Window::new(lo, hi).unwrap()
}

fn ring_c() -> Arc<GradedPolyRing> {
    GradedPolyRing::new(&[("c", 2)]).unwrap()
}

/// `ℤ/2` acting on `ℚ[c]` by `c ↦ −c`.
fn o2(r: &Arc<GradedPolyRing>) -> WAction {
    WAction::signed_permutations(FiniteGroupPresentation::cyclic(2), r, &[vec![(0, 1)], vec![(0, -1)]]).unwrap()
}

fn cyclic(r: &Arc<GradedPolyRing>, k: i64, rels: &[&str]) -> FPGradedModule {
    let polys: Vec<Poly> = rels.iter().map(|s| r.parse_poly(s).unwrap()).collect();
    FPGradedModule::cyclic(r, k, &polys).unwrap()
}

#[test]
fn group_tables() {
    let names = |n: usize| (0..n).map(|i| i.to_string()).collect::<Vec<_>>();
    assert!(FiniteGroupPresentation::new(names(2), vec![vec![0, 1], vec![1, 1]]).is_err());
    assert!(FiniteGroupPresentation::new(names(2), vec![vec![1, 1], vec![1, 1]]).is_err());
    // A unital loop of order 5 that is not associative.
    let loop5 = vec![
        vec![0, 1, 2, 3, 4],
        vec![1, 0, 3, 4, 2],
        vec![2, 4, 0, 1, 3],
        vec![3, 2, 4, 0, 1],
        vec![4, 3, 1, 2, 0],
    ];
    assert!(matches!(FiniteGroupPresentation::new(names(5), loop5), Err(AdamsError::BadGroup(_))));
    let c3 = FiniteGroupPresentation::cyclic(3);
    assert_eq!((c3.order(), c3.inverse(1), c3.is_abelian()), (3, 2, true));
    let s3 = FiniteGroupPresentation::symmetric(3);
    assert_eq!(s3.order(), 6);
    assert!(!s3.is_abelian());
    assert_eq!(s3.name(s3.identity()), "123");
}

#[test]
fn ring_actions() {
    let r = ring_c();
    assert!(o2(&r).apply(1, &r.parse_poly("c^3").unwrap()) == r.parse_poly("-c^3").unwrap());
    let z2 = FiniteGroupPresentation::cyclic(2);
    let doubling = vec![vec![r.var(0)], vec![r.parse_poly("2*c").unwrap()]];
    assert!(matches!(WAction::new(z2.clone(), r.clone(), doubling), Err(AdamsError::BadRingAction(_))));
    let r2 = GradedPolyRing::new(&[("x", 1), ("y", 2)]).unwrap();
    assert!(WAction::signed_permutations(z2, &r2, &[vec![(0, 1), (1, 1)], vec![(1, 1), (0, 1)]]).is_err());
}

#[test]
fn skew_validation() {
    let r = ring_c();
    let q = FPGradedModule::residue_field(&r);
    let triv = SkewedModule::trivial(FPGradedModule::ring_shifted(&r, 0), WAction::trivial(FiniteGroupPresentation::cyclic(3), &r));
    assert!(validate_skew(&triv, w(0, 8)).is_ok());
    assert!(validate_skew(&SkewedModule::trivial(q.clone(), o2(&r)), w(-2, 4)).is_ok());
    let free = SkewedModule::trivial(FPGradedModule::ring_shifted(&r, 0), o2(&r));
    let rep = validate_skew(&free, w(0, 8)).unwrap();
    assert!(rep.skew_checks > 0);
    assert_eq!(free.matrix(1, 2), SparseMatrix::from_dense(&[vec![-1]]));
    let mut bad = free.clone();
    bad.set_matrix(1, 2, SparseMatrix::identity(1));
    assert!(matches!(validate_skew(&bad, w(0, 8)), Err(AdamsError::SkewViolation { degree: 0, .. })));
    let mut not_action = free;
    not_action.set_matrix(1, 4, SparseMatrix::from_dense(&[vec![2]]));
    assert!(matches!(validate_skew(&not_action, w(0, 8)), Err(AdamsError::NotGroupAction { degree: 4, .. })));
    // The swap does not preserve the relation of R/(x).
    let rxy = GradedPolyRing::new(&[("x", 1), ("y", 1)]).unwrap();
    let swap = WAction::signed_permutations(FiniteGroupPresentation::cyclic(2), &rxy, &[vec![(0, 1), (1, 1)], vec![(1, 1), (0, 1)]])
        .unwrap();
    let err = SkewedModule::with_character(cyclic(&rxy, 0, &["x"]), swap.clone(), &[Rational::one(), Rational::one()]);
    assert!(matches!(err, Err(AdamsError::NotWellDefined(_))));
    assert!(SkewedModule::trivial(cyclic(&rxy, 0, &["x*y", "x^2+y^2"]), swap).matrix(1, 1) == SparseMatrix::from_dense(&[vec![0, 1], vec![1, 0]]));
}

#[test]
fn fixed_points() {
    let z2 = FiniteGroupPresentation::cyclic(2);
    let one = SparseMatrix::identity(1);
    let minus = SparseMatrix::from_dense(&[vec![-1]]);
    let swap = SparseMatrix::from_dense(&[vec![0, 1], vec![1, 0]]);
    let rep = GradedRep {
        group: z2.clone(),
        pieces: [(0, vec![one.clone(), one.clone()]), (1, vec![one.clone(), minus]), (2, vec![SparseMatrix::identity(2), swap.clone()])].into(),
    };
    let fixed = w_fixed_points(&rep);
    assert_eq!(fixed.iter().map(|(d, s)| (*d, s.dim())).collect::<Vec<_>>(), vec![(0, 1), (1, 0), (2, 1)]);
    let diag = SparseVec::from_dense(&[Rational::one(), Rational::one()]);
    assert!(fixed[&2].contains(&diag));
    let e = averaging_idempotent(&[SparseMatrix::identity(2), swap]);
    assert_eq!(e.compose(&e), e);
}

/// Character-theory count of invariants in `Λ^s` of the permutation
/// representation of `S_n`: the number of `s`-subsets up to symmetry whose
/// stabiliser acts on them by even permutations only, which for `S_n` is 1
/// when `s ≤ 1` and 0 otherwise.
fn exterior_invariants_symmetric(s: usize) -> usize {
    usize::from(s <= 1)
}

#[test]
fn permutation_action_on_koszul_ext() {
    let r = GradedPolyRing::new(&[("a", 1), ("b", 1), ("c", 1)]).unwrap();
    let s3 = FiniteGroupPresentation::symmetric(3);
    let perms: Vec<Vec<(usize, i64)>> = (0..6)
        .map(|g| {
            let name = s3.name(g);
            name.chars().map(|ch| (ch.to_digit(10).unwrap() as usize - 1, 1)).collect()
        })
        .collect();
    let act = WAction::signed_permutations(s3, &r, &perms).unwrap();
    let q = SkewedModule::trivial(FPGradedModule::residue_field(&r), act);
    let e = ext_skewed(&q, &q, 3, w(-3, 0)).unwrap();
    for s in 0..=3 {
        assert_eq!(e.underlying(s, -s), [1, 3, 3, 1][s as usize]);
        assert_eq!(e.get(s, -s), exterior_invariants_symmetric(s as usize), "s = {s}");
    }
    assert_eq!(e.cross_check, None);
}

#[test]
fn o2_examples() {
    let r = ring_c();
    let q = FPGradedModule::residue_field(&r);
    let triv = SkewedModule::trivial(q.clone(), o2(&r));
    let sign = SkewedModule::sign(q.clone(), o2(&r), &[1, -1]).unwrap();
    let tt = ext_skewed(&triv, &triv, 2, w(-6, 2)).unwrap();
    assert_eq!(tt.nonzero(), vec![(0, 0, 1)]);
    assert_eq!(tt.underlying(1, -2), 1);
    assert_eq!(tt.cross_check, Some(true));
    let ts = ext_skewed(&triv, &sign, 2, w(-6, 2)).unwrap();
    assert_eq!(ts.nonzero(), vec![(1, -2, 1)]);
    assert_eq!(ts.cross_check, Some(true));
    // Hom(R/(c²), R/(c²)) is R/(c²) with c acting by −1.
    let m = SkewedModule::trivial(cyclic(&r, 0, &["c^2"]), o2(&r));
    let mm = ext_skewed(&m, &m, 1, w(-4, 4)).unwrap();
    assert_eq!(mm.get(0, 0), 1);
    assert_eq!(mm.underlying(0, 2), 1);
    assert_eq!(mm.get(0, 2), 0);
    assert_eq!(mm.cross_check, Some(true));
}

#[test]
fn trivial_group_reduces_to_plain_ext() {
    let r = GradedPolyRing::new(&[("x", 1), ("y", 1)]).unwrap();
    let act = WAction::trivial(FiniteGroupPresentation::trivial(), &r);
    let mods = [FPGradedModule::residue_field(&r), cyclic(&r, 0, &["x^2", "y^2"]), cyclic(&r, 1, &["x*y"])];
    for a in &mods {
        for b in &mods {
            let plain = ext(a, b, 2, w(-5, 3));
            let sk = ext_skewed(&SkewedModule::trivial(a.clone(), act.clone()), &SkewedModule::trivial(b.clone(), act.clone()), 2, w(-5, 3))
                .unwrap();
            assert_eq!(sk.dims(), plain.dims);
        }
    }
}

#[test]
fn e2_pages() {
    let r = ring_c();
    let q = FPGradedModule::residue_field(&r);
    let so2 = WAction::trivial(FiniteGroupPresentation::trivial(), &r);
    let a = SkewedModule::trivial(q.clone(), so2.clone());
    let page = e2_page(&a, &a, None, w(-10, 4)).unwrap();
    assert_eq!(page.row_bound, 1);
    assert_eq!(page.nonzero(), vec![(0, 0, 1), (1, -1, 1)]);
    assert!(page.cells.iter().any(|c| c.s == 2) && page.cells.iter().filter(|c| c.s == 2).all(|c| c.dim == 0));
    assert!(page.warnings.is_empty());
    assert!(matches!(e2_page(&a, &a, Some(0), w(-10, 4)), Err(AdamsError::RowBoundViolated { s: 1, degree: -2, dim: 1 })));
    let free = SkewedModule::trivial(FPGradedModule::ring_shifted(&r, 0), so2);
    let page = e2_page(&free, &a, None, w(-10, 4)).unwrap();
    assert!(page.nonzero().iter().all(|(s, _, _)| *s == 0));
    assert_eq!(page.nonzero(), vec![(0, 0, 1)]);
}

#[test]
fn row_bounds_for_polynomial_suites() {
    let specs: [&[(&str, i64)]; 3] = [&[("x", 2)], &[("x", 1), ("y", 2)], &[("x", 1), ("y", 1), ("z", 1)]];
    for vars in specs {
        let r = GradedPolyRing::new(vars).unwrap();
        let n = r.nvars();
        let neg: Vec<(usize, i64)> = (0..n).map(|i| (i, -1)).collect();
        let actions = [
            WAction::trivial(FiniteGroupPresentation::trivial(), &r),
            WAction::signed_permutations(FiniteGroupPresentation::cyclic(2), &r, &[(0..n).map(|i| (i, 1)).collect(), neg]).unwrap(),
        ];
        let x2 = cyclic(&r, 0, &["x^2"]);
        for act in &actions {
            let mods = [
                SkewedModule::trivial(FPGradedModule::residue_field(&r), act.clone()),
                SkewedModule::trivial(x2.clone(), act.clone()),
            ];
            for a in &mods {
                for b in &mods {
                    let page = e2_page(a, b, None, w(-6, 2)).unwrap();
                    assert_eq!(page.row_bound, n);
                    assert!(page.extra_row_zero);
                }
            }
        }
    }
}

#[test]
fn realization_dims() {
    let r = ring_c();
    let one = projective_realization_dims(&r, &[0], 1, w(-2, 8)).unwrap();
    assert!(one.stabilized);
    for (d, dim) in &one.dims {
        assert_eq!(*dim, usize::from(*d >= 0 && d % 2 == 0));
    }
    let two = projective_realization_dims(&r, &[0], 2, w(-2, 8)).unwrap();
    assert!(two.dims.iter().zip(&one.dims).all(|(a, b)| a.1 == 2 * b.1));
    let sum = projective_realization_dims(&r, &[0, 3], 1, w(-2, 8)).unwrap();
    for (d, dim) in &sum.dims {
        assert_eq!(*dim, usize::from(*d >= 0 && d % 2 == 0) + usize::from(*d >= 3 && (d - 3) % 2 == 0));
    }
}

#[test]
fn diagonal_tensor() {
    let r = ring_c();
    let q = FPGradedModule::residue_field(&r);
    let sign = SkewedModule::sign(q.clone(), o2(&r), &[1, -1]).unwrap();
    let t = skewed_tensor(&sign, &sign).unwrap();
    assert!(t.convention_fixed);
    assert_eq!(t.module.matrix(1, 0), SparseMatrix::identity(1));
    let r3 = GradedPolyRing::new(&[("a", 1), ("b", 1), ("c", 1)]).unwrap();
    let s3 = FiniteGroupPresentation::symmetric(3);
    let act = WAction::trivial(s3, &r3);
    let k = SkewedModule::trivial(FPGradedModule::residue_field(&r3), act);
    assert!(!skewed_tensor(&k, &k).unwrap().convention_fixed);
}

#[test]
fn direct_route_needs_bounded_target() {
    let r = ring_c();
    let a = SkewedModule::trivial(FPGradedModule::residue_field(&r), o2(&r));
    let b = SkewedModule::trivial(FPGradedModule::ring_shifted(&r, 0), o2(&r));
    assert_eq!(ext_skewed_direct(&a, &b, 1, w(-2, 2)).unwrap(), None);
    assert_eq!(ext_skewed(&a, &b, 1, w(-2, 2)).unwrap().cross_check, None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn prop_fixed_dims_basis_independent(a in -3i64..=3, b in -3i64..=3) {
        // Conjugate the swap representation of ℤ/2 on ℚ³ by a unipotent change of basis.
        let swap = SparseMatrix::from_dense(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -1]]);
        let p = SparseMatrix::from_dense(&[vec![1, a, b], vec![0, 1, a], vec![0, 0, 1]]);
        let pinv = SparseMatrix::from_dense(&[vec![1, -a, a * a - b], vec![0, 1, -a], vec![0, 0, 1]]);
        prop_assert_eq!(p.compose(&pinv), SparseMatrix::identity(3));
        let conj = pinv.compose(&swap).compose(&p);
        let rep = |m: SparseMatrix| GradedRep { group: FiniteGroupPresentation::cyclic(2), pieces: [(0, vec![SparseMatrix::identity(3), m])].into() };
        prop_assert_eq!(w_fixed_dims(&rep(swap.clone())), w_fixed_dims(&rep(conj.clone())));
        let e = averaging_idempotent(&[SparseMatrix::identity(3), conj]);
        prop_assert_eq!(e.compose(&e), e);
    }

    #[test]
    fn prop_fixed_route_matches_direct(k in 1u32..=3, shift in 0i64..=2, sa in prop::bool::ANY, sb in prop::bool::ANY) {
        let r = ring_c();
        let m = |sgn: bool, module: FPGradedModule| {
            if sgn { SkewedModule::sign(module, o2(&r), &[1, -1]).unwrap() } else { SkewedModule::trivial(module, o2(&r)) }
        };
        let a = m(sa, cyclic(&r, shift, &[&format!("c^{k}")]));
        let b = m(sb, cyclic(&r, 0, &["c^2"]));
        let e = ext_skewed(&a, &b, 1, w(-6, 2)).unwrap();
        prop_assert_eq!(e.cross_check, Some(true));
    }
}

