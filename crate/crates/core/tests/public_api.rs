use std::sync::Arc;

use proptest::prelude::*;

use lochom::completion::{compare_local_homology, derived_l};
use lochom::exactla::{Rational, SparseMatrix};
use lochom::gradedmod::{free_resolution, FPGradedModule, Window};
use lochom::koszul::{koszul, KoszulSpec};
use lochom::polyring::{GradedPolyRing, HomIdeal};
use lochom::towers::{weak_proregularity_check, ProZeroCert};

fn ring() -> Arc<GradedPolyRing> {
    GradedPolyRing::new(&[("x", 1), ("y", 1)]).unwrap()
}

#[test]
fn certificates_survive_serialization() {
    let q = GradedPolyRing::quotient(&[("x", 1), ("y", 1)], &["x*y"]).unwrap();
    let rep = weak_proregularity_check(&HomIdeal::augmentation(&q), 2, 3, Window::new(0, 5).unwrap());
    for cert in &rep.certificates {
        let text = serde_json::to_string(cert).unwrap();
        let back: ProZeroCert = serde_json::from_str(&text).unwrap();
        assert_eq!(&back, cert);
        back.verify().unwrap();
    }
}

#[test]
fn rationals_serialize_as_strings() {
    let r = Rational::new(-3, 4);
    assert_eq!(serde_json::to_string(&r).unwrap(), "\"-3/4\"");
    let m = SparseMatrix::from_dense(&[vec![1, -2], vec![0, 3]]);
    let back: SparseMatrix = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
    assert_eq!(back, m);
}

#[test]
fn resolution_of_residue_field_is_koszul() {
    let r = ring();
    let res = free_resolution(&FPGradedModule::residue_field(&r), 4);
    let ranks: Vec<usize> = (0..=2).map(|n| res.complex.generators(n).rank()).collect();
    assert_eq!(ranks, vec![1, 2, 1]);
    let k = koszul(&KoszulSpec::new(&HomIdeal::augmentation(&r), 1).unwrap());
    for n in 0..=2 {
        assert_eq!(res.complex.generators(n).degrees(), k.generators(n).degrees());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn truncated_quotients_agree(a in 1u32..=3, b in 1u32..=3, shift in -2i64..=2) {
        let r = ring();
        let rels = [r.pow(&r.var(0), a), r.pow(&r.var(1), b)];
        let m = FPGradedModule::cyclic(&r, shift, &rels).unwrap();
        let i = HomIdeal::augmentation(&r);
        let w = Window::new(-3, 8).unwrap();
        let cmp = compare_local_homology(&m, &i, 1, w, None).unwrap();
        prop_assert!(cmp.agree);
        // Finite length modules are already complete.
        let l = derived_l(&m, &i, 1, w, None).unwrap();
        for d in w.degrees() {
            prop_assert_eq!(l.dim(0, d), m.dim(d));
            prop_assert_eq!(l.dim(1, d), 0);
        }
    }
}
