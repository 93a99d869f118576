//! Adic completion, its left derived functors `L_n^I`, and local homology
//! `H_n^I` computed from the Koszul tower.
//!
//! Limits are graded-degreewise. A tower `C ⊗ R/Iˢ` or `K_s ⊗ C` is
//! evaluated one internal degree at a time, and in each degree
//! `H_n = lim H_n(stage) ⊕ lim¹ H_{n+1}(stage)`. The canonical comparison
//! from the input is an isomorphism in degree `d` exactly when its rank into
//! the stable base equals both the source dimension and the limit.

mod checks;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use checks::{
    complete_tensor, completeness, completeness_biconditional, compare_local_homology, ext_complete,
    is_derived_complete, is_l0_complete, BiconditionalCell, BiconditionalReport, CompleteTensorReport,
    CompletenessVerdict, ExtCell, ExtCompleteReport, LocalHomologyComparison, Verdict,
};

use crate::exactla::{rank, SparseMatrix};
use crate::gradedmod::{free_resolution, ChainComplex, ChainMap, FPGradedModule, GradedError, PolyMatrix, Window};
use crate::koszul::{koszul, koszul_tower_on, KoszulSpec};
use crate::polyring::HomIdeal;
use crate::towers::{lim_at_degree, Tower};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompletionError {
    #[error("ideal is not certified weakly pro-regular")]
    NotWeaklyProRegular,
    #[error("routes disagree at H_{n} in degree {d} (stabilized: {stabilized})")]
    MismatchAt { n: i64, d: i64, stabilized: bool },
    #[error("biconditional fails at H_{n} in degree {d}")]
    BiconditionalViolated { n: i64, d: i64 },
    #[error("input is not L0-complete: {0}")]
    InputNotComplete(String),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Adic,
    DerivedL,
    KoszulTower,
}

/// One `(n, d)` cell of a completion report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletionEntry {
    pub n: i64,
    pub degree: i64,
    /// `lim_dim + lim1_dim`.
    pub dim: usize,
    pub lim_dim: usize,
    /// `lim¹` of `H_{n+1}`, which extends `lim H_n`.
    pub lim1_dim: usize,
    pub stabilized: bool,
    /// `dim H_n` of the input.
    pub source_dim: usize,
    /// Rank of the comparison from the input into the stable base.
    pub comparison_rank: usize,
    pub iso: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletionReport {
    pub module: Option<String>,
    pub route: Route,
    pub window: Window,
    pub depth: usize,
    pub resolution_length: Option<i64>,
    pub resolution_truncated: bool,
    pub entries: Vec<CompletionEntry>,
}

impl CompletionReport {
    pub fn entry(&self, n: i64, d: i64) -> Option<&CompletionEntry> {
        self.entries.iter().find(|e| e.n == n && e.degree == d)
    }

    pub fn dim(&self, n: i64, d: i64) -> usize {
        self.entry(n, d).map_or(0, |e| e.dim)
    }

    pub fn table(&self) -> BTreeMap<(i64, i64), usize> {
        self.entries.iter().map(|e| ((e.n, e.degree), e.dim)).collect()
    }

    pub fn unresolved(&self) -> Vec<(i64, i64)> {
        self.entries.iter().filter(|e| !e.stabilized).map(|e| (e.n, e.degree)).collect()
    }

    /// Whether the comparison is an isomorphism in every degree of `H_n`.
    pub fn comparison_iso(&self, n: i64) -> bool {
        self.entries.iter().filter(|e| e.n == n).all(|e| e.iso)
    }

    pub fn labelled(mut self, name: impl Into<String>) -> Self {
        self.module = Some(name.into());
        self
    }
}

/// `R/Iˢ` as a cyclic module.
pub fn power_quotient(ideal: &HomIdeal, s: u32) -> FPGradedModule {
    FPGradedModule::cyclic(ideal.ring(), 0, &ideal.power_generators(s)).expect("products of homogeneous generators")
}

/// Depth at which every tower built from `c` is constant in each degree of
/// the window: beyond it `Iˢ` pushes all of `c` above `w.hi`.
pub fn default_depth(c: &ChainComplex, ideal: &HomIdeal, w: Window) -> usize {
    let base = (w.height() + 4) as usize;
    let min_gen = c.objects().iter().filter_map(|m| m.generators().min_degree()).min();
    let step = ideal.generator_degrees().into_iter().min().unwrap_or(1).max(1);
    match min_gen {
        Some(lo) => base.max(((w.hi - lo).max(0) / step) as usize + 5),
        None => base,
    }
}

/// Highest degree of the window in which every stage from `depth - 3` on is
/// provably equal to `c`, so that a settled tower there is genuinely constant.
/// Above it a finite tower cannot tell a vanishing limit from a late onset.
pub fn reliable_top(c: &ChainComplex, ideal: &HomIdeal, depth: usize) -> Option<i64> {
    let lo = c.objects().iter().filter_map(|m| m.generators().min_degree()).min()?;
    let step = ideal.generator_degrees().into_iter().min().unwrap_or(1).max(1);
    Some(lo + step * (depth as i64 - 3) - 1)
}

/// Identity on generators between complexes with the same free covers,
/// the target carrying more relations.
fn quotient_map(source: &ChainComplex, target: &ChainComplex) -> ChainMap {
    let maps = (source.lo()..=source.hi()).map(|n| (n, PolyMatrix::identity(&source.generators(n)))).collect();
    ChainMap::new_unchecked(source.clone(), target.clone(), maps)
}

/// The tower `C ⊗ R/I ← C ⊗ R/I² ← ⋯` with identity-on-generators transitions.
pub fn adic_tower(c: &ChainComplex, ideal: &HomIdeal, depth: usize) -> Result<Tower, CompletionError> {
    let stages: Vec<ChainComplex> =
        (1..=depth as u32).map(|s| c.tensor_module(&power_quotient(ideal, s))).collect::<Result<_, _>>()?;
    let shared = Arc::new(stages.clone());
    let direct = move |from: usize, to: usize| quotient_map(&shared[from - 1], &shared[to - 1]);
    Ok(Tower::with_direct_transitions(stages, Arc::new(direct)))
}

/// Per `(n, d)`: `(dim H_n(source), rank of H_n(f))`.
fn comparison_ranks(f: &ChainMap, w: Window, ns: &[i64]) -> BTreeMap<(i64, i64), (usize, usize)> {
    let mut out = BTreeMap::new();
    for d in w.degrees() {
        let src = f.source().evaluate(d);
        let tgt = f.target().evaluate(d);
        let mats = f.evaluate(&src, &tgt);
        for &n in ns {
            let hs = src.lin.homology(n);
            let ht = tgt.lin.homology(n);
            let m = mats.get(&n).cloned().unwrap_or_else(|| SparseMatrix::zero(tgt.lin.dim(n), src.lin.dim(n)));
            out.insert((n, d), (hs.dim(), rank(&hs.induced(&m, &ht))));
        }
    }
    out
}

fn assemble(tower: &Tower, comparison: &ChainMap, ns: &[i64], w: Window, top: Option<i64>) -> (Vec<CompletionEntry>, usize) {
    let depth = tower.depth();
    let ranks = comparison_ranks(comparison, w, ns);
    let mut entries = Vec::new();
    for d in w.degrees() {
        let v = tower.at_degree(d);
        let lims: BTreeMap<i64, _> = ns.iter().chain(std::iter::once(&(ns[ns.len() - 1] + 1)))
            .map(|&n| (n, lim_at_degree(&v, depth, n)))
            .collect();
        for &n in ns {
            let e = &lims[&n];
            let lim1_dim = lims[&(n + 1)].lim1_dim;
            let (source_dim, comparison_rank) = ranks[&(n, d)];
            let dim = e.lim_dim + lim1_dim;
            let stabilized = e.stabilized && top.is_none_or(|t| d <= t);
            entries.push(CompletionEntry {
                n,
                degree: d,
                dim,
                lim_dim: e.lim_dim,
                lim1_dim,
                stabilized,
                source_dim,
                comparison_rank,
                iso: stabilized && comparison_rank == source_dim && source_dim == dim,
            });
        }
    }
    (entries, depth)
}

/// Degreewise `M_I^∧ = lim M/IˢM`.
pub fn adic_completion(m: &FPGradedModule, ideal: &HomIdeal, w: Window, depth: Option<usize>) -> Result<CompletionReport, CompletionError> {
    let c = ChainComplex::concentrated(m.clone(), 0);
    let depth = depth.unwrap_or_else(|| default_depth(&c, ideal, w));
    let tower = adic_tower(&c, ideal, depth)?;
    let cmp = quotient_map(&c, tower.stage(depth.saturating_sub(2).max(1)));
    let (entries, depth) = assemble(&tower, &cmp, &[0], w, reliable_top(&c, ideal, depth));
    Ok(CompletionReport {
        module: None,
        route: Route::Adic,
        window: w,
        depth,
        resolution_length: None,
        resolution_truncated: false,
        entries,
    })
}

/// `L_n^I M` for `n ≤ n_max`: homology of the stagewise completion of a
/// free resolution. The comparison is `M = H_0(P) → H_0(P ⊗ R/I^b)`.
pub fn derived_l(
    m: &FPGradedModule,
    ideal: &HomIdeal,
    n_max: usize,
    w: Window,
    depth: Option<usize>,
) -> Result<CompletionReport, CompletionError> {
    let res = free_resolution(m, n_max + 2);
    let p = &res.complex;
    let depth = depth.unwrap_or_else(|| default_depth(p, ideal, w));
    let tower = adic_tower(p, ideal, depth)?;
    let cmp = quotient_map(p, tower.stage(depth.saturating_sub(2).max(1)));
    let ns: Vec<i64> = (0..=n_max as i64).collect();
    let (entries, depth) = assemble(&tower, &cmp, &ns, w, reliable_top(p, ideal, depth));
    Ok(CompletionReport {
        module: None,
        route: Route::DerivedL,
        window: w,
        depth,
        resolution_length: Some(res.length()),
        resolution_truncated: res.truncated && res.length() <= n_max as i64 + 1,
        entries,
    })
}

/// Local homology `H_n^I(C)` from the tower `K_s(I) ⊗ C`, with the
/// comparison `C → K_b ⊗ C` through the unit `R → K_b`.
pub fn derived_completion(
    c: &ChainComplex,
    ideal: &HomIdeal,
    w: Window,
    depth: Option<usize>,
) -> Result<CompletionReport, CompletionError> {
    let spec = KoszulSpec::new(ideal, 1).expect("power 1");
    let depth = depth.unwrap_or_else(|| default_depth(c, ideal, w));
    let tower = koszul_tower_on(&spec, c, depth).map_err(|e| match e {
        crate::koszul::KoszulError::Graded(g) => CompletionError::Graded(g),
        other => CompletionError::Graded(GradedError::Shape(other.to_string())),
    })?;
    let base = depth.saturating_sub(2).max(1) as u32;
    let unit_src = ChainComplex::concentrated(FPGradedModule::ring_shifted(ideal.ring(), 0), 0);
    let kb = koszul(&spec.with_power(base));
    let unit = ChainMap::new(unit_src, kb.clone(), [(0, PolyMatrix::identity(&kb.generators(0)))].into())?;
    let cmp = unit.tensor_right(c)?;
    let ns: Vec<i64> = (c.lo()..=c.hi() + ideal.generators().len() as i64).collect();
    let (entries, depth) = assemble(&tower, &cmp, &ns, w, reliable_top(c, ideal, depth));
    Ok(CompletionReport {
        module: None,
        route: Route::KoszulTower,
        window: w,
        depth,
        resolution_length: None,
        resolution_truncated: false,
        entries,
    })
}

#[cfg(test)]
mod tests;
