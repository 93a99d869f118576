use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::Tower;
use crate::exactla::{rank, SparseMatrix};
use crate::gradedmod::{ChainComplex, FPGradedModule, Window};
use crate::koszul::{koszul_tower, koszul_tower_on, KoszulSpec};
use crate::polyring::{GradedPolyRing, HomIdeal};

/// A homology transition matrix `H_k(stage from) → H_k(stage to)` in one
/// internal degree, with its claimed rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixCell {
    pub summand: Option<i64>,
    pub from: usize,
    pub to: usize,
    pub degree: i64,
    pub rank: usize,
    pub matrix: SparseMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProZeroCert {
    pub k: i64,
    pub window: Window,
    pub depth: usize,
    pub search_bound: usize,
    /// `s ↦ m(s)` with `H_k(stage m(s)) → H_k(stage s)` zero in every degree of the window.
    pub witnesses: BTreeMap<usize, usize>,
    /// Every cell tested during the search.
    pub cells: Vec<MatrixCell>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProZeroFailure {
    pub k: i64,
    /// First base stage with no zero transition within the search bound.
    pub stage: usize,
    /// `(m, degree, rank)` of the nonzero transitions found.
    pub obstructions: Vec<(usize, i64, usize)>,
}

fn cell(summand: Option<i64>, from: usize, to: usize, degree: i64, m: &SparseMatrix) -> MatrixCell {
    MatrixCell { summand, from, to, degree, rank: rank(m), matrix: m.clone() }
}

/// Searches, for each base `s ≤ depth − search_bound`, the first
/// `m ∈ (s, s + search_bound]` whose transition on `H_k` vanishes in every
/// degree of the window.
pub fn pro_zero_check(t: &Tower, k: i64, search_bound: usize, w: Window) -> Result<ProZeroCert, ProZeroFailure> {
    let depth = t.depth();
    let views: Vec<_> = w.degrees().map(|d| t.at_degree(d)).collect();
    let mut witnesses = BTreeMap::new();
    let mut cells = Vec::new();
    for s in 1..=depth.saturating_sub(search_bound) {
        let mut obstructions = Vec::new();
        let mut found = None;
        for m in s + 1..=(s + search_bound).min(depth) {
            let mut zero = true;
            for v in &views {
                let mat = v.map(m, s, k);
                let c = cell(None, m, s, v.degree(), &mat);
                if c.rank > 0 {
                    zero = false;
                    obstructions.push((m, v.degree(), c.rank));
                }
                cells.push(c);
            }
            if zero {
                found = Some(m);
                break;
            }
        }
        match found {
            Some(m) => {
                witnesses.insert(s, m);
            }
            None => return Err(ProZeroFailure { k, stage: s, obstructions }),
        }
    }
    Ok(ProZeroCert { k, window: w, depth, search_bound, witnesses, cells })
}

impl ProZeroCert {
    /// Re-checks the certificate from its embedded matrices alone.
    pub fn verify(&self) -> Result<(), String> {
        for c in &self.cells {
            let r = rank(&c.matrix);
            if r != c.rank {
                return Err(format!("cell {}→{} degree {}: claimed rank {}, recomputed {}", c.from, c.to, c.degree, c.rank, r));
            }
        }
        for (&s, &m) in &self.witnesses {
            if m <= s || m > s + self.search_bound {
                return Err(format!("witness m({s}) = {m} outside ({s}, {}]", s + self.search_bound));
            }
            for d in self.window.degrees() {
                let Some(c) = self.cells.iter().find(|c| c.from == m && c.to == s && c.degree == d) else {
                    return Err(format!("no cell for witness {m}→{s} in degree {d}"));
                };
                if rank(&c.matrix) != 0 {
                    return Err(format!("witness {m}→{s} is nonzero in degree {d}"));
                }
            }
        }
        for s in 1..=self.depth.saturating_sub(self.search_bound) {
            if !self.witnesses.contains_key(&s) {
                return Err(format!("no witness for stage {s}"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WprReport {
    pub depth: usize,
    pub search_bound: usize,
    pub window: Window,
    pub certificates: Vec<ProZeroCert>,
    pub failures: Vec<ProZeroFailure>,
    pub weakly_pro_regular: bool,
}

/// Builds the `K_s(I)` tower up to `s_max + search_bound` and certifies
/// pro-zero for `k = 1..n` with witnesses for every base `s ≤ s_max`.
pub fn weak_proregularity_check(ideal: &HomIdeal, s_max: usize, search_bound: usize, w: Window) -> WprReport {
    let depth = s_max + search_bound;
    let spec = KoszulSpec::new(ideal, 1).expect("power 1");
    let tower = koszul_tower(&spec, depth).expect("depth ≥ 1");
    let mut certificates = Vec::new();
    let mut failures = Vec::new();
    for k in 1..=ideal.generators().len() as i64 {
        match pro_zero_check(&tower, k, search_bound, w) {
            Ok(c) => certificates.push(c),
            Err(f) => failures.push(f),
        }
    }
    WprReport { depth, search_bound, window: w, weakly_pro_regular: failures.is_empty(), certificates, failures }
}

pub type FamilyRule = Arc<dyn Fn(i64) -> Result<FPGradedModule, String> + Send + Sync>;

/// The towers `K_s(I) ⊗ M_i` for a family `i ↦ M_i`, `i = 1..=truncation`.
#[derive(Clone)]
pub struct SumFamilyTower {
    pub ring: Arc<GradedPolyRing>,
    pub ideal: HomIdeal,
    pub rule: FamilyRule,
    pub truncation: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateNotFound {
    pub part: String,
    /// Summand index (per-summand half) or span (spread half).
    pub index: i64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MLFailureCert {
    pub k: i64,
    pub truncation: usize,
    pub s_grid: Vec<usize>,
    pub t_grid: Vec<usize>,
    /// `i ↦ t(i)`: span-`t(i)` transitions of summand `i` vanish at every base in the grid.
    pub per_summand_prozero: BTreeMap<i64, usize>,
    /// `t ↦ i(t)`: summand whose span-`t` transition is nonzero at every base in the grid.
    pub spread: BTreeMap<usize, i64>,
    /// `(s, t, i) ↦` total rank of `H_k(stage s+t) → H_k(stage s)` of summand `i`.
    pub rank_grid: Vec<((usize, usize, i64), usize)>,
    /// Degrees checked per summand (its support), or the window if unknown.
    pub supports: BTreeMap<i64, Window>,
    pub hypothesis: String,
    pub cells: Vec<MatrixCell>,
}

struct Summand {
    index: i64,
    tower: Tower,
    support: Window,
}

fn summand(f: &SumFamilyTower, i: i64, depth: usize, k_top: i64, w: Window) -> Result<Summand, CertificateNotFound> {
    let m = (f.rule)(i).map_err(|e| CertificateNotFound { part: "family".into(), index: i, detail: e })?;
    let spec = KoszulSpec::new(&f.ideal, 1).expect("power 1");
    let tower = koszul_tower_on(&spec, &ChainComplex::concentrated(m.clone(), 0), depth)
        .map_err(|e| CertificateNotFound { part: "family".into(), index: i, detail: e.to_string() })?;
    // H_k(K_s ⊗ M) lives between the bottom of M and top(M) plus the top Koszul degree.
    let support = match (m.generators().min_degree(), m.top_degree(w.hi.max(0) + 64)) {
        (Some(lo), Some(top)) => Window { lo, hi: top.max(lo) + k_top * depth as i64 },
        (None, _) => Window { lo: 0, hi: 0 },
        _ => w,
    };
    Ok(Summand { index: i, tower, support })
}

/// Two-part certificate that `lim¹` of `H_k` of the summed tower is
/// nonzero: every summand tower is pro-zero, yet for every span `t` some
/// summand has a nonzero span-`t` transition at every base.
pub fn ml_failure_certificate(
    f: &SumFamilyTower,
    k: i64,
    s_grid: &[usize],
    t_grid: &[usize],
    w: Window,
) -> Result<MLFailureCert, CertificateNotFound> {
    let n = f.truncation;
    let s_max = *s_grid.iter().max().unwrap_or(&1);
    let t_max = *t_grid.iter().max().unwrap_or(&1);
    let depth = s_max + t_max.max(n);
    let ideal_top: i64 = f.ideal.generator_degrees().iter().sum();
    let mut per_summand_prozero = BTreeMap::new();
    let mut spread = BTreeMap::new();
    let mut rank_grid = Vec::new();
    let mut supports = BTreeMap::new();
    let mut cells = Vec::new();
    let mut grid_ranks: BTreeMap<(usize, usize, i64), usize> = BTreeMap::new();

    for i in 1..=n as i64 {
        let sm = summand(f, i, depth, ideal_top, w)?;
        supports.insert(i, sm.support);
        let views: Vec<_> = sm.support.degrees().map(|d| sm.tower.at_degree(d)).collect();
        let span_rank = |s: usize, t: usize, keep: bool, cells: &mut Vec<MatrixCell>| -> usize {
            let mut total = 0;
            for v in &views {
                let m = v.map(s + t, s, k);
                let c = cell(Some(sm.index), s + t, s, v.degree(), &m);
                total += c.rank;
                if keep && (c.rank > 0 || m.rows() > 0 && m.cols() > 0) {
                    cells.push(c);
                }
            }
            total
        };
        for &s in s_grid {
            for &t in t_grid {
                let r = span_rank(s, t, true, &mut cells);
                grid_ranks.insert((s, t, i), r);
            }
        }
        // Per-summand pro-zero: smallest span vanishing at every base.
        let mut witness = None;
        for t in 1..=n.max(t_max) {
            if s_grid.iter().all(|&s| {
                grid_ranks.get(&(s, t, i)).copied().unwrap_or_else(|| span_rank(s, t, false, &mut Vec::new())) == 0
            }) {
                witness = Some(t);
                break;
            }
        }
        let Some(t) = witness else {
            return Err(CertificateNotFound {
                part: "per-summand".into(),
                index: i,
                detail: format!("no span ≤ {} kills H_{k} of summand {i}", n.max(t_max)),
            });
        };
        if !t_grid.contains(&t) {
            for &s in s_grid {
                span_rank(s, t, true, &mut cells);
            }
        }
        per_summand_prozero.insert(i, t);
    }
    for &t in t_grid {
        let found = (1..=n as i64).find(|&i| s_grid.iter().all(|&s| grid_ranks[&(s, t, i)] > 0));
        match found {
            Some(i) => {
                spread.insert(t, i);
            }
            None => {
                let s = s_grid.iter().copied().find(|&s| (1..=n as i64).all(|i| grid_ranks[&(s, t, i)] == 0));
                return Err(CertificateNotFound {
                    part: "spread".into(),
                    index: t as i64,
                    detail: match s {
                        Some(s) => format!("span {t} at base {s}: every summand ≤ {n} has a zero transition"),
                        None => format!("span {t}: no single summand ≤ {n} is nonzero at every base"),
                    },
                });
            }
        }
    }
    rank_grid.extend(grid_ranks);
    Ok(MLFailureCert {
        k,
        truncation: n,
        s_grid: s_grid.to_vec(),
        t_grid: t_grid.to_vec(),
        per_summand_prozero,
        spread,
        rank_grid,
        supports,
        hypothesis: "stages are countable direct sums of finite-dimensional rational vector spaces, \
                     so Mittag-Leffler failure is equivalent to nonvanishing lim¹"
            .into(),
        cells,
    })
}

impl MLFailureCert {
    /// Re-checks both halves from the embedded matrices and rank grid.
    pub fn verify(&self) -> Result<(), String> {
        for c in &self.cells {
            let r = rank(&c.matrix);
            if r != c.rank {
                return Err(format!(
                    "summand {:?} cell {}→{} degree {}: claimed rank {}, recomputed {}",
                    c.summand, c.from, c.to, c.degree, c.rank, r
                ));
            }
        }
        let total = |i: i64, from: usize, to: usize| -> usize {
            self.cells.iter().filter(|c| c.summand == Some(i) && c.from == from && c.to == to).map(|c| c.rank).sum()
        };
        for &((s, t, i), r) in &self.rank_grid {
            if total(i, s + t, s) != r {
                return Err(format!("rank grid cell (s={s}, t={t}, i={i}) claims {r}, matrices give {}", total(i, s + t, s)));
            }
        }
        for (&i, &t) in &self.per_summand_prozero {
            for &s in &self.s_grid {
                if total(i, s + t, s) != 0 {
                    return Err(format!("summand {i}: span {t} at base {s} is nonzero"));
                }
            }
        }
        for i in 1..=self.truncation as i64 {
            if !self.per_summand_prozero.contains_key(&i) {
                return Err(format!("summand {i} has no pro-zero witness"));
            }
        }
        for &t in &self.t_grid {
            let Some(&i) = self.spread.get(&t) else {
                return Err(format!("span {t} has no spread witness"));
            };
            for &s in &self.s_grid {
                if total(i, s + t, s) == 0 {
                    return Err(format!("spread witness i={i} for span {t} vanishes at base {s}"));
                }
            }
        }
        Ok(())
    }
}
