//! Inverse systems of complexes, evaluated one internal degree at a time.
//!
//! Limits are graded-degreewise: in each internal degree a tower of
//! complexes becomes a tower of finite-dimensional homology spaces, whose
//! images stabilize, so `lim¹` vanishes degreewise. Pro-zero and
//! Mittag-Leffler-failure claims are emitted as certificates carrying the
//! homology transition matrices they rest on.

mod certificates;

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

pub use certificates::{
    ml_failure_certificate, pro_zero_check, weak_proregularity_check, CertificateNotFound, FamilyRule, MLFailureCert,
    MatrixCell, ProZeroCert, ProZeroFailure, SumFamilyTower, WprReport,
};

use crate::exactla::{SparseMatrix, Subspace};
use crate::gradedmod::{ChainComplex, ChainMap, EvaluatedComplex, GradedError, HomologyPiece, Window};

pub type TransitionFn = Arc<dyn Fn(usize, usize) -> ChainMap + Send + Sync>;

/// Stages `1..=depth` with transitions `stage(s+1) → stage(s)`.
#[derive(Clone)]
pub struct Tower {
    stages: Vec<ChainComplex>,
    steps: Vec<ChainMap>,
    direct: Option<TransitionFn>,
    cache: Arc<Mutex<HashMap<(usize, usize), Arc<ChainMap>>>>,
}

impl std::fmt::Debug for Tower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Tower").field("depth", &self.depth()).finish()
    }
}

impl Tower {
    /// `steps[i]` maps stage `i + 2` to stage `i + 1`.
    pub fn new(stages: Vec<ChainComplex>, steps: Vec<ChainMap>) -> Result<Self, GradedError> {
        if stages.is_empty() || steps.len() + 1 != stages.len() {
            return Err(GradedError::Shape(format!("{} stages need {} transitions", stages.len(), stages.len().saturating_sub(1))));
        }
        for (i, f) in steps.iter().enumerate() {
            if f.source() != &stages[i + 1] || f.target() != &stages[i] {
                return Err(GradedError::Shape(format!("transition {} → {} has the wrong ends", i + 2, i + 1)));
            }
        }
        Ok(Tower { stages, steps, direct: None, cache: Default::default() })
    }

    /// A tower whose transition `from → to` is produced directly.
    pub fn with_direct_transitions(stages: Vec<ChainComplex>, direct: TransitionFn) -> Self {
        Tower { stages, steps: Vec::new(), direct: Some(direct), cache: Default::default() }
    }

    /// The tower with every stage equal to `c` and identity transitions.
    pub fn constant(c: &ChainComplex, depth: usize) -> Self {
        let steps = (1..depth).map(|_| ChainMap::identity(c)).collect();
        Tower::new(vec![c.clone(); depth], steps).expect("identity maps fit")
    }

    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    /// Stage `s`, 1-based.
    pub fn stage(&self, s: usize) -> &ChainComplex {
        &self.stages[s - 1]
    }

    /// The transition `stage(from) → stage(to)`, `from ≥ to`.
    pub fn transition(&self, from: usize, to: usize) -> Arc<ChainMap> {
        assert!(from >= to && to >= 1 && from <= self.depth(), "bad transition {from} → {to}");
        if let Some(m) = self.cache.lock().unwrap().get(&(from, to)) {
            return m.clone();
        }
        let m = if from == to {
            ChainMap::identity(self.stage(to))
        } else if let Some(f) = &self.direct {
            f(from, to)
        } else {
            let mut acc = self.steps[to - 1].clone();
            for s in to + 1..from {
                acc = acc.compose(&self.steps[s - 1]).expect("consecutive transitions compose");
            }
            acc
        };
        let m = Arc::new(m);
        self.cache.lock().unwrap().insert((from, to), m.clone());
        m
    }

    /// Checks `(s+2 → s) = (s+1 → s) ∘ (s+2 → s+1)` for every `s`.
    pub fn check_coherence(&self) -> bool {
        (1..self.depth().saturating_sub(1)).all(|s| {
            let direct = self.transition(s + 2, s);
            let composite = self.transition(s + 1, s).compose(&self.transition(s + 2, s + 1)).expect("composable");
            let (lo, hi) = (self.stage(s + 2).lo().min(self.stage(s).lo()), self.stage(s + 2).hi().max(self.stage(s).hi()));
            (lo..=hi).all(|n| direct.component(n) == composite.component(n))
        })
    }

    pub fn at_degree(&self, d: i64) -> TowerAtDegree<'_> {
        TowerAtDegree {
            tower: self,
            degree: d,
            evaluated: RefCell::new(HashMap::new()),
            homology: RefCell::new(HashMap::new()),
            maps: RefCell::new(HashMap::new()),
        }
    }
}

/// A tower evaluated lazily in one internal degree.
pub struct TowerAtDegree<'a> {
    tower: &'a Tower,
    degree: i64,
    evaluated: RefCell<HashMap<usize, Arc<EvaluatedComplex>>>,
    homology: RefCell<HashMap<(usize, i64), Arc<HomologyPiece>>>,
    maps: RefCell<HashMap<(usize, usize, i64), Arc<SparseMatrix>>>,
}

impl TowerAtDegree<'_> {
    pub fn degree(&self) -> i64 {
        self.degree
    }

    fn evaluated(&self, s: usize) -> Arc<EvaluatedComplex> {
        if let Some(e) = self.evaluated.borrow().get(&s) {
            return e.clone();
        }
        let e = Arc::new(self.tower.stage(s).evaluate(self.degree));
        self.evaluated.borrow_mut().insert(s, e.clone());
        e
    }

    pub fn homology(&self, s: usize, k: i64) -> Arc<HomologyPiece> {
        if let Some(h) = self.homology.borrow().get(&(s, k)) {
            return h.clone();
        }
        let h = Arc::new(self.evaluated(s).lin.homology(k));
        self.homology.borrow_mut().insert((s, k), h.clone());
        h
    }

    pub fn dim(&self, s: usize, k: i64) -> usize {
        self.homology(s, k).dim()
    }

    /// `H_k(stage from) → H_k(stage to)` in this degree.
    pub fn map(&self, from: usize, to: usize, k: i64) -> Arc<SparseMatrix> {
        if let Some(m) = self.maps.borrow().get(&(from, to, k)) {
            return m.clone();
        }
        let f = self.tower.transition(from, to);
        let src = self.evaluated(from);
        let tgt = self.evaluated(to);
        let hs = self.homology(from, k);
        let ht = self.homology(to, k);
        let chain = f.evaluate(&src, &tgt);
        let fk = chain.get(&k).cloned().unwrap_or_else(|| SparseMatrix::zero(tgt.lin.dim(k), src.lin.dim(k)));
        let m = Arc::new(hs.induced(&fk, &ht));
        self.maps.borrow_mut().insert((from, to, k), m.clone());
        m
    }

    /// `Im(H_k(stage from) → H_k(stage to))`.
    pub fn image(&self, from: usize, to: usize, k: i64) -> Subspace {
        let m = self.map(from, to, k);
        Subspace::span(m.rows(), m.columns())
    }

    /// Stable image at the largest base whose stability can be checked
    /// (`Im` from the last two stages agree), with the base.
    pub fn stable_image(&self, k: i64) -> Option<(usize, Subspace)> {
        let depth = self.tower.depth();
        if depth < 3 {
            return None;
        }
        let base = depth - 2;
        let a = self.image(depth - 1, base, k);
        let b = self.image(depth, base, k);
        (a == b).then_some((base, b))
    }
}

/// Degreewise `lim` and `lim¹` of `H_k` of a tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimEntry {
    pub degree: i64,
    pub lim_dim: usize,
    pub lim1_dim: usize,
    pub stabilized: bool,
    /// `dim H_k(stage s)` for `s = 1..=depth`.
    pub stage_dims: Vec<usize>,
    /// `dim Im(H_k(stage s) → H_k(stage 1))` for `s = 1..=depth`.
    pub image_dims: Vec<usize>,
}

/// Per internal degree: the last three stages must have equal dimension,
/// and the images at bases `depth−2` and `depth−3` must be stable (the last
/// two images agree). The stable images map onto each other, so equal
/// dimensions make the map an isomorphism and the limit has that dimension.
/// With finite-dimensional stages the image chains stabilize and `lim¹ = 0`.
/// Otherwise the entry is flagged unresolved and `lim_dim` is an upper bound.
///
/// Stabilization is declared from finitely many stages, so the depth must
/// reach past the point where the tower becomes constant in each degree.
pub fn lim_and_lim1(t: &Tower, w: Window, k: i64) -> Vec<LimEntry> {
    w.degrees().map(|d| lim_at_degree(&t.at_degree(d), t.depth(), k)).collect()
}

pub fn lim_at_degree(v: &TowerAtDegree<'_>, depth: usize, k: i64) -> LimEntry {
    let stage_dims: Vec<usize> = (1..=depth).map(|s| v.dim(s, k)).collect();
    let image_dims: Vec<usize> = (1..=depth).map(|s| v.image(s, 1, k).dim()).collect();
    let settled = depth >= 3 && stage_dims[depth - 3..].iter().all(|&x| x == stage_dims[depth - 1]);
    let (lim_dim, stabilized) = match lim_bases(v, depth, k).filter(|_| settled) {
        Some(dim) => (dim, true),
        None => {
            let upper = if depth >= 2 { v.image(depth, depth - 1, k).dim() } else { stage_dims[0] };
            (upper, false)
        }
    };
    LimEntry { degree: v.degree(), lim_dim, lim1_dim: 0, stabilized, stage_dims, image_dims }
}

fn lim_bases(v: &TowerAtDegree<'_>, depth: usize, k: i64) -> Option<usize> {
    if depth < 4 {
        return None;
    }
    let (b, c) = (depth - 2, depth - 3);
    let ib = v.image(depth, b, k);
    if ib != v.image(depth - 1, b, k) {
        return None;
    }
    let ic = v.image(depth, c, k);
    if ic != v.image(depth - 1, c, k) {
        return None;
    }
    (ib.dim() == ic.dim()).then_some(ib.dim())
}

#[cfg(test)]
mod tests;
