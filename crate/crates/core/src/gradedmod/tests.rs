use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::exactla::{Rational, SparseVec, Subspace};
use crate::polyring::{GradedPolyRing, Poly};

fn ring(vars: &[(&str, i64)]) -> Arc<GradedPolyRing> {
    GradedPolyRing::new(vars).unwrap()
}

fn cyclic(r: &Arc<GradedPolyRing>, k: i64, rels: &[&str]) -> FPGradedModule {
    let polys: Vec<Poly> = rels.iter().map(|s| r.parse_poly(s).unwrap()).collect();
    FPGradedModule::cyclic(r, k, &polys).unwrap()
}

fn w(lo: i64, hi: i64) -> Window {
    Window::new(lo, hi).unwrap()
}

/// Koszul complex on the variables of `r`, built by hand (two variables).
fn koszul_xy(r: &Arc<GradedPolyRing>) -> ChainComplex {
    let x = r.var(0);
    let y = r.var(1);
    let f0 = FreeGraded::new(r.clone(), vec![0]);
    let f1 = FreeGraded::new(r.clone(), vec![1, 1]);
    let f2 = FreeGraded::new(r.clone(), vec![2]);
    let d1 = PolyMatrix::new(f1.clone(), f0.clone(), vec![vec![x.clone()], vec![y.clone()]]).unwrap();
    let d2 = PolyMatrix::new(f2, f1, vec![vec![y, x.neg()]]).unwrap();
    ChainComplex::from_free_maps(0, f0, vec![d1, d2]).unwrap()
}

#[test]
fn evaluate_degree_examples() {
    let r = ring(&[("x", 2)]);
    assert_eq!(FPGradedModule::ring_shifted(&r, 0).dim(2), 1);
    let q = FPGradedModule::residue_field(&r);
    assert_eq!(q.dim(0), 1);
    assert_eq!(q.dim(2), 0);
    let rxy = ring(&[("x", 1), ("y", 1)]);
    assert_eq!(cyclic(&rxy, 0, &["x^3", "y^3"]).dim(2), 3);
}

#[test]
fn tensor_examples() {
    let r = ring(&[("x", 1), ("y", 1)]);
    let m = cyclic(&r, 1, &["x^2", "x*y"]);
    let rr = FPGradedModule::ring_shifted(&r, 0);
    assert_eq!(m.tensor(&rr).unwrap().dims(w(-2, 6)), m.dims(w(-2, 6)));
    let a = cyclic(&r, 0, &["x"]);
    let b = cyclic(&r, 0, &["y"]);
    assert_eq!(a.tensor(&b).unwrap().dims(w(0, 5)), cyclic(&r, 0, &["x", "y"]).dims(w(0, 5)));
    let rx = ring(&[("x", 2)]);
    let q = FPGradedModule::residue_field(&rx);
    assert_eq!(q.tensor(&q).unwrap().dims(w(-2, 6)), q.dims(w(-2, 6)));
    let other = ring(&[("x", 1)]);
    assert_eq!(q.tensor(&FPGradedModule::residue_field(&other)), Err(GradedError::RingMismatch));
}

#[test]
fn hom_examples() {
    let r = ring(&[("x", 2)]);
    let q = FPGradedModule::residue_field(&r);
    let rr = FPGradedModule::ring_shifted(&r, 0);
    let n = cyclic(&r, 1, &["x^2"]);
    let hom_r = hom_degreewise(&rr, &n, w(-4, 6));
    for h in &hom_r {
        assert_eq!(h.dim, n.dim(h.degree));
    }
    let hom_qq = hom_degreewise(&q, &q, w(-4, 4));
    let dims: Vec<usize> = hom_qq.iter().map(|h| h.dim).collect();
    assert_eq!(dims, vec![0, 0, 0, 0, 1, 0, 0, 0, 0]);
    assert!(hom_degreewise(&q, &rr, w(-6, 6)).iter().all(|h| h.dim == 0));
}

#[test]
fn shift_examples() {
    let r = ring(&[("x", 1), ("y", 1)]);
    let m = cyclic(&r, 0, &["x^2", "y^3"]);
    assert_eq!(m.shift(0), m);
    assert_eq!(m.shift(3).shift(-3).dims(w(-3, 8)), m.dims(w(-3, 8)));
    for d in -3..8 {
        assert_eq!(m.shift(2).dim(d), m.dim(d - 2));
    }
    let rx = ring(&[("x", 2)]);
    assert_eq!(FPGradedModule::ring_shifted(&rx, 0).shift(2).dim(2), 1);
}

fn mult_map(r: &Arc<GradedPolyRing>, p: &str, target_degree: i64) -> ChainMap {
    let f = r.parse_poly(p).unwrap();
    let k = f.degree().unwrap();
    let src = ChainComplex::concentrated(FPGradedModule::ring_shifted(r, target_degree + k), 0);
    let tgt = ChainComplex::concentrated(FPGradedModule::ring_shifted(r, target_degree), 0);
    let a = PolyMatrix::scalar(&FreeGraded::new(r.clone(), vec![target_degree]), &f);
    ChainMap::new(src, tgt, BTreeMap::from([(0, a)])).unwrap()
}

#[test]
fn cone_and_fib_examples() {
    let r = ring(&[("x", 2)]);
    let f = mult_map(&r, "x", 0);
    let fib = f.fib().unwrap();
    let h = fib.homology(w(-4, 8));
    // fib = Σ^{−1} cone; the cone is K(x) with H₀ = ℚ in degree 0.
    for ((n, d), dim) in &h {
        let want = usize::from(*n == -1 && *d == 0);
        assert_eq!(*dim, want, "H_{n} in degree {d}");
    }
    let cone = f.cone().unwrap();
    let h = cone.homology(w(-4, 8));
    for ((n, d), dim) in &h {
        assert_eq!(*dim, usize::from(*n == 0 && *d == 0));
    }

    let m = ChainComplex::concentrated(cyclic(&r, 0, &["x^3"]), 0);
    let id = ChainMap::identity(&m);
    assert!(id.cone().unwrap().homology(w(-2, 10)).values().all(|d| *d == 0));

    let n = ChainComplex::concentrated(FPGradedModule::residue_field(&r), 0);
    let zero = ChainMap::zero(&m, &n);
    let hc = zero.cone().unwrap().homology(w(-2, 10));
    for d in -2..=10 {
        assert_eq!(hc[&(0, d)], FPGradedModule::residue_field(&r).dim(d));
        assert_eq!(hc[&(1, d)], m.object(0).unwrap().dim(d));
    }
}

#[test]
fn not_a_chain_map_is_rejected() {
    let r = ring(&[("x", 1), ("y", 1)]);
    let k = koszul_xy(&r);
    let id = PolyMatrix::identity(&k.generators(0));
    // Identity in degree 0 only does not commute with d₁.
    let res = ChainMap::new(k.clone(), k, BTreeMap::from([(0, id)]));
    assert_eq!(res.err(), Some(GradedError::NotChainMap(1)));
}

#[test]
fn homology_examples() {
    let r = ring(&[("x", 1), ("y", 1)]);
    let m = cyclic(&r, 0, &["x^2", "y"]);
    let zero_diff = ChainComplex::new(
        0,
        vec![m.clone(), m.shift(1)],
        vec![PolyMatrix::zero(m.shift(1).generators().clone(), m.generators().clone())],
    )
    .unwrap();
    let h = zero_diff.homology(w(-1, 5));
    for d in -1..=5 {
        assert_eq!(h[&(0, d)], m.dim(d));
        assert_eq!(h[&(1, d)], m.dim(d - 1));
    }
    let k = koszul_xy(&r);
    let h = k.homology(w(-5, 10));
    for ((n, d), dim) in &h {
        assert_eq!(*dim, usize::from(*n == 0 && *d == 0));
    }
    let rx = ring(&[("x", 2)]);
    let kx = mult_map(&rx, "x", 0).cone().unwrap();
    let kq = kx.tensor_module(&FPGradedModule::residue_field(&rx)).unwrap();
    let h = kq.homology(w(-2, 6));
    for ((n, d), dim) in &h {
        assert_eq!(*dim, usize::from((*n, *d) == (0, 0) || (*n, *d) == (1, 2)), "H_{n} degree {d}");
    }
}

#[test]
fn bad_complex_is_rejected() {
    let r = ring(&[("x", 1), ("y", 1)]);
    let x = r.var(0);
    let f0 = FreeGraded::new(r.clone(), vec![0]);
    let f1 = FreeGraded::new(r.clone(), vec![1]);
    let f2 = FreeGraded::new(r.clone(), vec![2]);
    let d1 = PolyMatrix::new(f1.clone(), f0.clone(), vec![vec![x.clone()]]).unwrap();
    let d2 = PolyMatrix::new(f2, f1, vec![vec![x]]).unwrap();
    assert_eq!(ChainComplex::from_free_maps(0, f0, vec![d1, d2]).err(), Some(GradedError::NotAComplex(2)));
}

#[test]
fn graded_dual_examples() {
    let r = ring(&[("x", 2)]);
    let q = FPGradedModule::residue_field(&r);
    let dq = graded_dual(&q, w(-4, 4));
    assert_eq!(dq.dims.iter().filter(|(_, n)| **n > 0).collect::<Vec<_>>(), vec![(&0, &1)]);
    let dq2 = graded_dual(&q.shift(2), w(-4, 4));
    assert_eq!(dq2.dim(-2), 1);
    assert_eq!(dq2.dim(2), 0);
    let rr = FPGradedModule::ring_shifted(&r, 0);
    let dr = graded_dual(&rr, w(-10, 2));
    for d in -10..=2 {
        assert_eq!(dr.dim(d), usize::from(d <= 0 && d % 2 == 0));
    }
    let m = DegreewiseModule::of_module(&rr, w(-3, 9));
    assert_eq!(m.dual().dual(), m);
}

#[test]
fn free_resolution_examples() {
    let r = ring(&[("x", 2)]);
    let res = free_resolution(&FPGradedModule::ring_shifted(&r, 0), 5);
    assert_eq!(res.length(), 0);
    let res = free_resolution(&FPGradedModule::residue_field(&r), 5);
    assert_eq!(res.ranks(), vec![1, 1]);
    assert_eq!(res.complex.generators(1).degrees(), &[2]);
    assert!(!res.truncated);
    let r3 = ring(&[("a", 1), ("b", 1), ("c", 1)]);
    let res = free_resolution(&FPGradedModule::residue_field(&r3), 5);
    assert_eq!(res.ranks(), vec![1, 3, 3, 1]);
    let h = res.complex.homology(w(0, 6));
    for ((n, d), dim) in &h {
        assert_eq!(*dim, usize::from(*n == 0 && *d == 0));
    }
}

#[test]
fn resolution_over_quotient_ring_is_truncated() {
    let q = GradedPolyRing::quotient(&[("x", 1), ("y", 1)], &["x*y"]).unwrap();
    let res = free_resolution(&FPGradedModule::residue_field(&q), 3);
    assert!(res.truncated);
    assert_eq!(res.length(), 3);
    let h = res.complex.homology(w(0, 5));
    for ((n, d), dim) in &h {
        if *n > 0 && *n < 3 {
            assert_eq!(*dim, 0, "H_{n} degree {d}");
        }
    }
}

#[test]
fn ext_examples() {
    let r = ring(&[("c", 2)]);
    let q = FPGradedModule::residue_field(&r);
    let e = ext(&q, &q, 3, w(-6, 4));
    for ((s, d), dim) in &e.dims {
        let want = usize::from((*s, *d) == (0, 0) || (*s, *d) == (1, -2));
        assert_eq!(*dim, want, "Ext^{s} degree {d}");
    }
    let rr = FPGradedModule::ring_shifted(&r, 0);
    let n = cyclic(&r, 1, &["c^3"]);
    let e = ext(&rr, &n, 1, w(-2, 8));
    for d in -2..=8 {
        assert_eq!(e.get(0, d), n.dim(d));
        assert_eq!(e.get(1, d), 0);
    }
    let rxy = ring(&[("x", 1), ("y", 1)]);
    let q = FPGradedModule::residue_field(&rxy);
    let e = ext(&q, &q, 4, w(-4, 2));
    assert_eq!(e.get(2, -2), 1);
    for ((s, _), dim) in &e.dims {
        if *s > 2 {
            assert_eq!(*dim, 0);
        }
    }
}

#[test]
fn ext_is_resolution_independent() {
    // A non-minimal presentation of ℚ over ℚ[x, y] gives the same Ext.
    let r = ring(&[("x", 1), ("y", 1)]);
    let q = FPGradedModule::residue_field(&r);
    let redundant = cyclic(&r, 0, &["x", "y", "x + y", "x^2"]);
    let target = cyclic(&r, 0, &["x^2", "y"]);
    let a = ext(&q, &target, 2, w(-3, 2));
    let b = ext(&redundant, &target, 2, w(-3, 2));
    assert_eq!(a.dims, b.dims);
}

/// Tensor oracle: `(M ⊗ N)_d = ⊕_a M_a ⊗ N_{d−a}` modulo `xm ⊗ n − m ⊗ xn`.
fn tensor_dim_oracle(m: &FPGradedModule, n: &FPGradedModule, d: i64) -> usize {
    let lo_m = m.generators().min_degree().unwrap_or(0);
    let lo_n = n.generators().min_degree().unwrap_or(0);
    let ring = m.ring();
    let dm = DegreewiseModule::of_module(m, Window::new(lo_m, d - lo_n).unwrap_or(Window { lo: lo_m, hi: lo_m }));
    let dn = DegreewiseModule::of_module(n, Window::new(lo_n, d - lo_m).unwrap_or(Window { lo: lo_n, hi: lo_n }));
    let mut offsets = BTreeMap::new();
    let mut total = 0;
    for a in lo_m..=d - lo_n {
        offsets.insert(a, total);
        total += dm.dim(a) * dn.dim(d - a);
    }
    let mut rel = Subspace::zero(total);
    for v in 0..ring.nvars() {
        let k = ring.var_degrees()[v];
        for a in lo_m..=d - lo_n - k {
            let b = d - a - k;
            let (Some(xm), Some(xn)) = (dm.actions.get(&(v, a)), dn.actions.get(&(v, b))) else { continue };
            let (ma, nb) = (dm.dim(a), dn.dim(b));
            let nb2 = dn.dim(b + k);
            for i in 0..ma {
                for j in 0..nb {
                    let mut vec = SparseVec::new();
                    for (r, c) in xm.column(i).iter() {
                        vec.axpy(c, &SparseVec::unit(offsets[&(a + k)] + r * nb + j));
                    }
                    for (r, c) in xn.column(j).iter() {
                        vec.axpy(&-c.clone(), &SparseVec::unit(offsets[&a] + i * nb2 + r));
                    }
                    rel.insert(vec);
                }
            }
        }
    }
    total - rel.dim()
}

fn arb_module(r: Arc<GradedPolyRing>) -> impl Strategy<Value = FPGradedModule> {
    let gens = prop::collection::vec((0u32..3, 0u32..3, -2i64..=2), 0..3);
    (gens, -1i64..=1).prop_map(move |(mons, k)| {
        let polys: Vec<Poly> = mons
            .into_iter()
            .filter(|(a, b, _)| a + b > 0)
            .map(|(a, b, c)| {
                let m = Poly::monomial(r.mono(vec![a, b]));
                let shifted = Poly::monomial(r.mono(vec![a + b, 0])).scale(&Rational::from_int(c));
                m.add(&shifted)
            })
            .collect();
        FPGradedModule::cyclic(&r, k, &polys).unwrap()
    })
}

fn xy() -> Arc<GradedPolyRing> {
    ring(&[("x", 1), ("y", 1)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tensor_matches_oracle(m in arb_module(xy()), n in arb_module(xy())) {
        let r = m.ring().clone();
        let n = FPGradedModule::new(PolyMatrix::new(
            FreeGraded::new(r.clone(), n.relations().source().degrees().to_vec()),
            FreeGraded::new(r.clone(), n.generators().degrees().to_vec()),
            n.relations().columns().to_vec(),
        ).unwrap());
        let t = m.tensor(&n).unwrap();
        for d in -2..=8 {
            prop_assert_eq!(t.dim(d), tensor_dim_oracle(&m, &n, d), "degree {}", d);
        }
    }

    #[test]
    fn euler_characteristic_of_homology(m in arb_module(xy())) {
        let r = m.ring().clone();
        let k = koszul_xy(&r).tensor_module(&m).unwrap();
        for d in -1..=6 {
            let h = k.homology(Window::new(d, d).unwrap());
            let chi_h: i64 = h.iter().map(|((n, _), dim)| if n % 2 == 0 { *dim as i64 } else { -(*dim as i64) }).sum();
            prop_assert_eq!(chi_h, k.euler_characteristic(d));
        }
    }

    #[test]
    fn dual_is_an_involution(m in arb_module(xy())) {
        let dm = DegreewiseModule::of_module(&m, Window::new(-3, 7).unwrap());
        prop_assert_eq!(dm.dual().dual(), dm.clone());
        let gd = graded_dual(&m, Window::new(-7, 3).unwrap());
        for d in -7..=3 {
            prop_assert_eq!(gd.dim(d), m.dim(-d));
        }
    }

    #[test]
    fn resolutions_are_exact(m in arb_module(xy())) {
        let res = free_resolution(&m, 4);
        prop_assert!(!res.truncated);
        prop_assert!(res.complex.validate().is_ok());
        let h = res.complex.homology(Window::new(-2, 7).unwrap());
        for ((n, d), dim) in &h {
            if *n > 0 {
                prop_assert_eq!(*dim, 0);
            } else {
                prop_assert_eq!(*dim, m.dim(*d));
            }
        }
    }

    #[test]
    fn cone_long_exact_sequence(a in arb_module(xy()), c in 0u32..3) {
        // f = multiplication by x^c on a module; check the long exact sequence
        // H_n(A) → H_n(B) → H_n(cone) → H_{n−1}(A) → H_{n−1}(B) is exact.
        let r = a.ring().clone();
        let p = r.pow(&r.var(0), c);
        let src_mod = a.shift(c as i64);
        let map = PolyMatrix::scalar(a.generators(), &p);
        let src = ChainComplex::concentrated(src_mod, 0);
        let tgt = ChainComplex::concentrated(a.clone(), 0);
        let f = ChainMap::new(src.clone(), tgt.clone(), BTreeMap::from([(0, map)])).unwrap();
        let cone = f.cone().unwrap();
        for d in -1..=6 {
            let (h0f, ha, hb) = f.on_homology(0, d);
            let rank_f = crate::exactla::rank(&h0f);
            let hc = cone.homology(Window::new(d, d).unwrap());
            // H₀(cone) = coker f, H₁(cone) = ker f.
            prop_assert_eq!(hc[&(0, d)], hb - rank_f);
            prop_assert_eq!(hc[&(1, d)], ha - rank_f);
        }
    }
}

#[test]
fn homology_modules_match_tables() {
    let q = GradedPolyRing::quotient(&[("x", 1), ("y", 1)], &["x*y"]).unwrap();
    let k = koszul_xy(&q);
    let table = k.homology(w(-1, 6));
    for n in 0..=2 {
        let h = k.homology_module(n).unwrap();
        for d in -1..=6 {
            assert_eq!(h.dim(d), table[&(n, d)], "H_{n} in degree {d}");
        }
    }
    let r = ring(&[("x", 1), ("y", 1)]);
    let m = cyclic(&r, 1, &["x^2", "x*y"]).direct_sum(&cyclic(&r, 3, &["y^2"])).unwrap();
    let c = koszul_xy(&r).tensor_module(&m).unwrap();
    let table = c.homology(w(0, 8));
    for n in 0..=2 {
        let h = c.homology_module(n).unwrap();
        for d in 0..=8 {
            assert_eq!(h.dim(d), table[&(n, d)], "H_{n} in degree {d}");
        }
    }
}
