//! Unstable Koszul complexes `K_s(I)`, their tower maps, Koszul
//! resolutions, self-duality and the dual cofibre construction.
//!
//! `K_s(x₁,…,x_n)` has a free generator `e_S` for each subset `S`, placed in
//! homological degree `|S|` and internal degree `s·Σ_{i∈S}|x_i|`, with
//! `d(e_S) = Σ_p (−1)^p x_{S_p}^s e_{S∖S_p}`. Homology is `R/(x_i^s)` in
//! degree 0. The map `K_{s+t} → K_s` sends `e_S` to `Π_{i∈S} x_i^t e_S`.

mod duality;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

pub use duality::{dual_cofibre_check, self_duality_check, CofibreReport, SelfDualityReport};

use crate::gradedmod::{ChainComplex, ChainMap, FPGradedModule, FreeGraded, GradedError, PolyMatrix, Resolution, Window};
use crate::polyring::{GradedPolyRing, HomIdeal, Poly};
use crate::towers::Tower;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KoszulError {
    #[error("power must be positive")]
    BadPower,
    #[error("transition needs from ≥ to, got {from} → {to}")]
    BadTransition { from: u32, to: u32 },
    #[error("sequence is not regular: H_{n} ≠ 0 in internal degree {d}")]
    NotRegular { n: i64, d: i64 },
    #[error(transparent)]
    Graded(#[from] GradedError),
}

/// Generators `x₁,…,x_n` of an ideal together with a power `s`.
#[derive(Clone, Debug)]
pub struct KoszulSpec {
    ring: Arc<GradedPolyRing>,
    generators: Vec<Poly>,
    power: u32,
}

impl KoszulSpec {
    pub fn new(ideal: &HomIdeal, power: u32) -> Result<Self, KoszulError> {
        if power == 0 {
            return Err(KoszulError::BadPower);
        }
        Ok(KoszulSpec { ring: ideal.ring().clone(), generators: ideal.generators().to_vec(), power })
    }

    pub fn ring(&self) -> &Arc<GradedPolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn with_power(&self, power: u32) -> Self {
        KoszulSpec { power, ..self.clone() }
    }

    /// `c = s · Σ |x_i|`, the internal degree of the top generator.
    pub fn top_degree(&self) -> i64 {
        self.power as i64 * self.generators.iter().map(|g| g.degree().unwrap()).sum::<i64>()
    }

    fn subset_degree(&self, s: &[usize]) -> i64 {
        self.power as i64 * s.iter().map(|&i| self.generators[i].degree().unwrap()).sum::<i64>()
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn stage_free(spec: &KoszulSpec, k: usize) -> FreeGraded {
    let degrees = subsets(spec.generators.len(), k).iter().map(|s| spec.subset_degree(s)).collect();
    FreeGraded::new(spec.ring.clone(), degrees)
}

/// The Koszul complex `K_s(x₁,…,x_n)`.
pub fn koszul(spec: &KoszulSpec) -> ChainComplex {
    let n = spec.generators.len();
    let ring = &spec.ring;
    let powers: Vec<Poly> = spec.generators.iter().map(|g| ring.pow(g, spec.power)).collect();
    let mut diffs = Vec::new();
    for k in 1..=n {
        let sources = subsets(n, k);
        let targets = subsets(n, k - 1);
        let index: BTreeMap<&Vec<usize>, usize> = targets.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let columns = sources
            .iter()
            .map(|s| {
                let mut col = vec![Poly::zero(); targets.len()];
                for (p, &j) in s.iter().enumerate() {
                    let mut rest = s.clone();
                    rest.remove(p);
                    let entry = if p % 2 == 0 { powers[j].clone() } else { powers[j].neg() };
                    col[index[&rest]] = entry;
                }
                col
            })
            .collect();
        diffs.push(PolyMatrix::new(stage_free(spec, k), stage_free(spec, k - 1), columns).expect("homogeneous"));
    }
    ChainComplex::from_free_maps(0, stage_free(spec, 0), diffs).expect("Koszul differentials square to zero")
}

/// The same complex built as the tensor product of the cones of `x_i^s`.
pub fn koszul_via_tensor(spec: &KoszulSpec) -> ChainComplex {
    let ring = &spec.ring;
    let mut out = ChainComplex::concentrated(FPGradedModule::ring_shifted(ring, 0), 0);
    for g in &spec.generators {
        let p = ring.pow(g, spec.power);
        let base = FreeGraded::new(ring.clone(), vec![0]);
        let d = PolyMatrix::scalar(&base, &p);
        let k = ChainComplex::from_free_maps(0, base, vec![d]).expect("two-term complex");
        out = out.tensor(&k).expect("same ring");
    }
    out
}

/// The chain map `K_from → K_to`.
#[derive(Clone, Debug)]
pub struct KoszulTransition {
    pub source_power: u32,
    pub target_power: u32,
    pub map: ChainMap,
}

pub fn koszul_transition(spec: &KoszulSpec, from: u32, to: u32) -> Result<KoszulTransition, KoszulError> {
    if to == 0 {
        return Err(KoszulError::BadPower);
    }
    if from < to {
        return Err(KoszulError::BadTransition { from, to });
    }
    let src_spec = spec.with_power(from);
    let tgt_spec = spec.with_power(to);
    let source = koszul(&src_spec);
    let target = koszul(&tgt_spec);
    let ring = &spec.ring;
    let t = from - to;
    let n = spec.generators.len();
    let mut maps = BTreeMap::new();
    for k in 0..=n {
        let columns = subsets(n, k)
            .iter()
            .enumerate()
            .map(|(idx, s)| {
                let mut c = ring.one();
                for &i in s {
                    c = ring.mul(&c, &ring.pow(&spec.generators[i], t));
                }
                let mut col = vec![Poly::zero(); subsets(n, k).len()];
                col[idx] = c;
                col
            })
            .collect();
        maps.insert(k as i64, PolyMatrix::new(stage_free(&src_spec, k), stage_free(&tgt_spec, k), columns)?);
    }
    let map = ChainMap::new(source, target, maps)?;
    Ok(KoszulTransition { source_power: from, target_power: to, map })
}

/// The tower `K_1 ⊗ C ← K_2 ⊗ C ← ⋯ ← K_depth ⊗ C`, with direct
/// transitions `K_m ⊗ C → K_s ⊗ C`.
pub fn koszul_tower_on(spec: &KoszulSpec, c: &ChainComplex, depth: usize) -> Result<Tower, KoszulError> {
    if depth == 0 {
        return Err(KoszulError::BadPower);
    }
    let stages = (1..=depth as u32)
        .map(|s| koszul(&spec.with_power(s)).tensor(c))
        .collect::<Result<Vec<_>, _>>()?;
    let spec = spec.clone();
    let c = c.clone();
    let direct = move |from: usize, to: usize| -> ChainMap {
        let t = koszul_transition(&spec, from as u32, to as u32).expect("valid powers");
        t.map.tensor_right(&c).expect("same ring")
    };
    Ok(Tower::with_direct_transitions(stages, Arc::new(direct)))
}

/// The tower of `K_s(I)`, `s = 1..=s_max`.
pub fn koszul_tower(spec: &KoszulSpec, s_max: usize) -> Result<Tower, KoszulError> {
    let unit = ChainComplex::concentrated(FPGradedModule::ring_shifted(&spec.ring, 0), 0);
    koszul_tower_on(spec, &unit, s_max)
}

/// Koszul resolution of `R/(sequence)`, checked to be exact in the window.
pub fn koszul_resolution(ideal: &HomIdeal, w: Window) -> Result<Resolution, KoszulError> {
    let spec = KoszulSpec::new(ideal, 1)?;
    let complex = koszul(&spec);
    for ((n, d), dim) in complex.homology(w) {
        if n > 0 && dim > 0 {
            return Err(KoszulError::NotRegular { n, d });
        }
    }
    let augmentation = PolyMatrix::identity(&complex.generators(0));
    Ok(Resolution { complex, augmentation, truncated: false })
}

/// `N ←x Σ^{|x|}N ←x Σ^{2|x|}N ← ⋯`: its limit is `Hom(R[1/x], N)`.
pub fn multiplication_tower(n: &ChainComplex, x: &Poly, depth: usize) -> Result<Tower, KoszulError> {
    let k = x.degree().ok_or_else(|| GradedError::NotHomogeneous(n.ring().format_poly(x)))?;
    let stages: Vec<ChainComplex> = (0..depth as i64).map(|s| n.shift_internal(s * k)).collect();
    let mut steps = Vec::new();
    for s in 0..depth.saturating_sub(1) {
        let (src, tgt) = (&stages[s + 1], &stages[s]);
        let maps = (tgt.lo()..=tgt.hi()).map(|h| (h, PolyMatrix::scalar(&tgt.generators(h), x))).collect();
        steps.push(ChainMap::new(src.clone(), tgt.clone(), maps)?);
    }
    Ok(Tower::new(stages, steps)?)
}

/// Per-degree summary used in reports.
#[derive(Clone, Debug, Serialize)]
pub struct KoszulSummary {
    pub power: u32,
    pub ranks: Vec<usize>,
    pub generator_degrees: Vec<Vec<i64>>,
}

pub fn summarize(spec: &KoszulSpec) -> KoszulSummary {
    let k = koszul(spec);
    KoszulSummary {
        power: spec.power,
        ranks: k.objects().iter().map(|m| m.generators().rank()).collect(),
        generator_degrees: k.objects().iter().map(|m| m.generators().degrees().to_vec()).collect(),
    }
}
