use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::gradedmod::FreeGraded;
use crate::polyring::{GradedPolyRing, Poly};

fn ring(vars: &[(&str, i64)]) -> Arc<GradedPolyRing> {
    GradedPolyRing::new(vars).unwrap()
}

fn w(lo: i64, hi: i64) -> Window {
    Window::new(lo, hi).unwrap()
}

fn cyclic(r: &Arc<GradedPolyRing>, k: i64, rels: &[&str]) -> FPGradedModule {
    let polys: Vec<Poly> = rels.iter().map(|s| r.parse_poly(s).unwrap()).collect();
    FPGradedModule::cyclic(r, k, &polys).unwrap()
}

fn xy() -> (Arc<GradedPolyRing>, HomIdeal) {
    let r = ring(&[("x", 1), ("y", 1)]);
    let i = HomIdeal::augmentation(&r);
    (r, i)
}

fn assert_module_dims(rep: &CompletionReport, n: i64, m: &FPGradedModule) {
    for e in rep.entries.iter().filter(|e| e.n == n) {
        assert!(e.stabilized, "unresolved at degree {}", e.degree);
        assert_eq!(e.dim, m.dim(e.degree), "degree {}", e.degree);
    }
}

fn assert_zero(rep: &CompletionReport, n: i64) {
    for e in rep.entries.iter().filter(|e| e.n == n) {
        assert!(e.stabilized && e.dim == 0, "H_{n} in degree {} is {}", e.degree, e.dim);
    }
}

#[test]
fn adic_examples() {
    let (r, i) = xy();
    let q = FPGradedModule::residue_field(&r);
    let rep = adic_completion(&q, &i, w(-2, 6), None).unwrap();
    assert_module_dims(&rep, 0, &q);
    assert!(rep.comparison_iso(0));
    let rx = ring(&[("x", 1)]);
    let ix = HomIdeal::augmentation(&rx);
    let rr = FPGradedModule::ring_shifted(&rx, 0);
    let rep = adic_completion(&rr, &ix, w(-2, 8), None).unwrap();
    assert_module_dims(&rep, 0, &rr);
    assert!(rep.comparison_iso(0));
    let m = cyclic(&rx, 0, &["x^2"]);
    assert_module_dims(&adic_completion(&m, &ix, w(-2, 6), None).unwrap(), 0, &m);
}

#[test]
fn shallow_depth_is_flagged() {
    let rx = ring(&[("x", 1)]);
    let ix = HomIdeal::augmentation(&rx);
    let rr = FPGradedModule::ring_shifted(&rx, 0);
    let rep = adic_completion(&rr, &ix, w(0, 10), Some(5)).unwrap();
    assert!(!rep.unresolved().is_empty());
    assert_eq!(is_l0_complete(&rr, &ix, w(0, 10), Some(5)).unwrap().0, Verdict::WindowLimited);
}

#[test]
fn derived_l_examples() {
    let (r, i) = xy();
    let free = FPGradedModule::free(FreeGraded::new(r.clone(), vec![0, 2, -1]));
    let rep = derived_l(&free, &i, 2, w(-3, 6), None).unwrap();
    assert_module_dims(&rep, 0, &free);
    assert_zero(&rep, 1);
    assert_zero(&rep, 2);
    let q = FPGradedModule::residue_field(&r);
    let rep = derived_l(&q, &i, 2, w(-2, 6), None).unwrap();
    assert_eq!(rep.resolution_length, Some(2));
    assert_module_dims(&rep, 0, &q);
    assert_zero(&rep, 1);
    let m = cyclic(&r, 0, &["x^3"]);
    let rep = derived_l(&m, &i, 2, w(-2, 6), None).unwrap();
    assert_module_dims(&rep, 0, &m);
    assert_zero(&rep, 1);
    assert!(rep.comparison_iso(0));
}

#[test]
fn infinite_resolution_is_cut_above_the_range() {
    let q = GradedPolyRing::quotient(&[("x", 1), ("y", 1)], &["x*y"]).unwrap();
    let i = HomIdeal::augmentation(&q);
    let k = FPGradedModule::residue_field(&q);
    let rep = derived_l(&k, &i, 1, w(0, 4), None).unwrap();
    assert_eq!(rep.resolution_length, Some(3));
    assert!(!rep.resolution_truncated);
    assert_module_dims(&rep, 0, &k);
    assert_zero(&rep, 1);
}

#[test]
fn local_homology_examples() {
    let (r, i) = xy();
    let q = ChainComplex::concentrated(FPGradedModule::residue_field(&r), 0);
    let rep = derived_completion(&q, &i, w(-2, 5), None).unwrap();
    assert_module_dims(&rep, 0, &FPGradedModule::residue_field(&r));
    assert_zero(&rep, 1);
    assert_zero(&rep, 2);
    // K(I) ⊗ N is derived complete.
    let k = crate::koszul::koszul(&KoszulSpec::new(&i, 1).unwrap());
    let kn = k.tensor_module(&cyclic(&r, 0, &["x^2"])).unwrap();
    let rep = derived_completion(&kn, &i, w(-2, 6), None).unwrap();
    for n in kn.lo()..=kn.hi() + 2 {
        assert!(rep.comparison_iso(n), "H_{n}");
    }
    let zero = ChainComplex::concentrated(FPGradedModule::free(FreeGraded::zero(r.clone())), 0);
    let rep = derived_completion(&zero, &i, w(0, 3), None).unwrap();
    assert!(rep.entries.iter().all(|e| e.dim == 0 && e.stabilized));
}

#[test]
fn routes_agree() {
    let (r, i) = xy();
    let modules = [
        FPGradedModule::residue_field(&r),
        cyclic(&r, 0, &["x^2", "y^3"]),
        cyclic(&r, 0, &["x"]).direct_sum(&cyclic(&r, 3, &["y^2"])).unwrap(),
        FPGradedModule::free(FreeGraded::new(r.clone(), vec![0, 1])),
    ];
    for m in &modules {
        let cmp = compare_local_homology(m, &i, 2, w(-2, 6), None).unwrap();
        assert!(cmp.certificate.weakly_pro_regular);
        cmp.check().unwrap();
        assert!(cmp.local_homology.unresolved().is_empty());
    }
}

#[test]
fn verdicts() {
    let (r, i) = xy();
    let q = FPGradedModule::residue_field(&r);
    let v = completeness(&q, &i, w(-2, 4), None).unwrap();
    assert_eq!((v.l0_complete, v.derived_complete, v.witness_degree), (Verdict::Yes, Verdict::Yes, None));
    let k = crate::koszul::koszul(&KoszulSpec::new(&i, 1).unwrap());
    assert_eq!(is_derived_complete(&k, &i, w(-2, 4), None).unwrap().0, Verdict::Yes);
    // A report with a stabilized non-isomorphism yields a witness.
    let mut rep = adic_completion(&q, &i, w(0, 2), None).unwrap();
    rep.entries[1].iso = false;
    assert_eq!(Verdict::from_report(&rep, |n| n == 0), (Verdict::No, Some((0, 1))));
}

#[test]
fn biconditional_suite() {
    let (r, i) = xy();
    let k = crate::koszul::koszul(&KoszulSpec::new(&i, 1).unwrap());
    let suite = vec![
        k.clone(),
        ChainComplex::concentrated(FPGradedModule::ring_shifted(&r, 0), 0),
        ChainComplex::concentrated(cyclic(&r, 2, &["x^2", "y"]), 0),
        k.tensor_module(&cyclic(&r, 0, &["y^2"])).unwrap(),
        ChainComplex::concentrated(FPGradedModule::free(FreeGraded::zero(r.clone())), 0),
    ];
    for c in &suite {
        let rep = completeness_biconditional(c, &i, w(-1, 5), None).unwrap();
        rep.check().unwrap();
        assert_eq!(rep.derived_complete, Verdict::Yes);
    }
}

#[test]
fn tensor_laws() {
    let (r, i) = xy();
    let q = FPGradedModule::residue_field(&r);
    let rep = complete_tensor(&q, &q, &i, w(-2, 4), None).unwrap();
    assert_eq!(rep.tensor.iter().map(|(_, d)| d).sum::<usize>(), 1);
    let pairs = [
        (cyclic(&r, 0, &["x^2"]), cyclic(&r, 1, &["y"])),
        (cyclic(&r, 0, &["x^2", "y^2"]), FPGradedModule::ring_shifted(&r, 2)),
        (FPGradedModule::free(FreeGraded::new(r.clone(), vec![0, 1])), cyclic(&r, 0, &["x*y"])),
    ];
    for (m, n) in &pairs {
        let rep = complete_tensor(m, n, &i, w(-1, 6), None).unwrap();
        assert!(rep.unit_law && rep.insensitivity && rep.stabilized);
        let direct = m.tensor(n).unwrap();
        for (d, dim) in &rep.tensor {
            assert_eq!(*dim, direct.dim(*d));
        }
    }
    let other = ring(&[("z", 1)]);
    assert!(complete_tensor(&q, &FPGradedModule::residue_field(&other), &i, w(0, 1), None).is_err());
}

#[test]
fn ext_routes() {
    let rc = ring(&[("c", 2)]);
    let ic = HomIdeal::augmentation(&rc);
    let q = FPGradedModule::residue_field(&rc);
    let rep = ext_complete(&q, &q, &ic, 2, w(-6, 2)).unwrap();
    assert!(rep.agree);
    let mut nonzero: Vec<_> = rep.completed.iter().filter(|c| c.dim > 0).map(|c| (c.s, c.degree, c.dim)).collect();
    nonzero.sort();
    assert_eq!(nonzero, vec![(0, 0, 1), (1, -2, 1)]);
    let (r, i) = xy();
    let q = FPGradedModule::residue_field(&r);
    let n = cyclic(&r, 0, &["x^2", "y^2"]);
    let rep = ext_complete(&q, &n, &i, 2, w(-6, 4)).unwrap();
    assert!(rep.agree);
    let rep = ext_complete(&n, &n, &i, 1, w(-4, 4)).unwrap();
    assert!(rep.completed.iter().any(|c| c.s == 0 && c.degree == 0 && c.dim >= 1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn prop_free_modules_have_no_higher_derived(shifts in proptest::collection::vec(-2i64..=3, 1..=3)) {
        let (r, i) = xy();
        let p = FPGradedModule::free(FreeGraded::new(r.clone(), shifts));
        let rep = derived_l(&p, &i, 2, w(-3, 5), None).unwrap();
        let adic = adic_completion(&p, &i, w(-3, 5), None).unwrap();
        for d in -3..=5 {
            prop_assert_eq!(rep.dim(0, d), adic.dim(0, d));
            prop_assert_eq!(rep.dim(1, d), 0);
            prop_assert_eq!(rep.dim(2, d), 0);
        }
    }

    #[test]
    fn prop_l0_idempotent(a in 1u32..=3, b in 1u32..=3, k in 0i64..=2) {
        let (r, i) = xy();
        let m = FPGradedModule::cyclic(&r, k, &[r.pow(&r.var(0), a), r.pow(&r.var(1), b)]).unwrap();
        let win = w(-1, 6);
        let once = derived_l(&m, &i, 0, win, None).unwrap();
        let l0m = m.tensor(&power_quotient(&i, once.depth as u32)).unwrap();
        let twice = derived_l(&l0m, &i, 0, win, None).unwrap();
        prop_assert_eq!(once.table(), twice.table());
    }

    #[test]
    fn prop_collapse_for_complete_homology(a in 1u32..=2, k in 0i64..=2) {
        let (r, i) = xy();
        let m = FPGradedModule::cyclic(&r, k, &[r.pow(&r.var(0), a)]).unwrap();
        let kc = crate::koszul::koszul(&KoszulSpec::new(&i, 1).unwrap()).tensor_module(&m).unwrap();
        let rep = derived_completion(&kc, &i, w(-1, 5), None).unwrap();
        let h = kc.homology(w(-1, 5));
        for e in &rep.entries {
            prop_assert_eq!(e.dim, h.get(&(e.n, e.degree)).copied().unwrap_or(0));
        }
    }
}

