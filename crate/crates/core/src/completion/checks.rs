use serde::{Deserialize, Serialize};

use super::{default_depth, derived_completion, derived_l, power_quotient, CompletionError, CompletionReport};
use crate::exactla::{kernel, SparseMatrix};
use crate::gradedmod::{ext, free_resolution, hom_into, ChainComplex, FPGradedModule, GradedError, LinComplex, Window};
use crate::polyring::HomIdeal;
use crate::towers::{weak_proregularity_check, WprReport};

/// Tri-state outcome of a completeness test on a window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    /// No failure seen, but some degree did not stabilize at this depth.
    WindowLimited,
}

impl Verdict {
    pub fn from_report(r: &CompletionReport, ns: impl Fn(i64) -> bool) -> (Verdict, Option<(i64, i64)>) {
        let cells: Vec<_> = r.entries.iter().filter(|e| ns(e.n)).collect();
        if let Some(e) = cells.iter().find(|e| e.stabilized && !e.iso) {
            return (Verdict::No, Some((e.n, e.degree)));
        }
        if cells.iter().any(|e| !e.stabilized) {
            return (Verdict::WindowLimited, None);
        }
        (Verdict::Yes, None)
    }

    pub fn accepted(self) -> bool {
        self != Verdict::No
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletenessVerdict {
    pub l0_complete: Verdict,
    pub derived_complete: Verdict,
    /// First failing internal degree, if either verdict is `No`.
    pub witness_degree: Option<i64>,
    pub window: Window,
}

/// `M → L_0^I M` degreewise.
pub fn is_l0_complete(m: &FPGradedModule, ideal: &HomIdeal, w: Window, depth: Option<usize>) -> Result<(Verdict, Option<i64>), CompletionError> {
    let r = derived_l(m, ideal, 0, w, depth)?;
    let (v, at) = Verdict::from_report(&r, |n| n == 0);
    Ok((v, at.map(|(_, d)| d)))
}

/// `C → Λ_I C` on homology, every homological degree, degreewise.
pub fn is_derived_complete(c: &ChainComplex, ideal: &HomIdeal, w: Window, depth: Option<usize>) -> Result<(Verdict, Option<(i64, i64)>), CompletionError> {
    let r = derived_completion(c, ideal, w, depth)?;
    Ok(Verdict::from_report(&r, |_| true))
}

pub fn completeness(m: &FPGradedModule, ideal: &HomIdeal, w: Window, depth: Option<usize>) -> Result<CompletenessVerdict, CompletionError> {
    let (l0, a) = is_l0_complete(m, ideal, w, depth)?;
    let (dc, b) = is_derived_complete(&ChainComplex::concentrated(m.clone(), 0), ideal, w, depth)?;
    Ok(CompletenessVerdict { l0_complete: l0, derived_complete: dc, witness_degree: a.or(b.map(|(_, d)| d)), window: w })
}

/// `L_*^I M` against `H_*^I M`, after certifying the ideal.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocalHomologyComparison {
    pub certificate: WprReport,
    pub derived_l: CompletionReport,
    pub local_homology: CompletionReport,
    pub agree: bool,
    pub first_mismatch: Option<(i64, i64)>,
}

impl LocalHomologyComparison {
    pub fn check(&self) -> Result<(), CompletionError> {
        match self.first_mismatch {
            None => Ok(()),
            Some((n, d)) => {
                let stabilized = [&self.derived_l, &self.local_homology]
                    .iter()
                    .all(|r| r.entry(n, d).is_some_and(|e| e.stabilized));
                Err(CompletionError::MismatchAt { n, d, stabilized })
            }
        }
    }
}

/// Runs both routes and compares `(n, d)` dimensions exactly for `n ≤ n_max`.
pub fn compare_local_homology(
    m: &FPGradedModule,
    ideal: &HomIdeal,
    n_max: usize,
    w: Window,
    depth: Option<usize>,
) -> Result<LocalHomologyComparison, CompletionError> {
    let certificate = weak_proregularity_check(ideal, 3, 3, w);
    if !certificate.weakly_pro_regular {
        return Err(CompletionError::NotWeaklyProRegular);
    }
    let c = ChainComplex::concentrated(m.clone(), 0);
    let depth = depth.unwrap_or_else(|| default_depth(&c, ideal, w));
    let left = derived_l(m, ideal, n_max, w, Some(depth))?;
    let right = derived_completion(&c, ideal, w, Some(depth))?;
    let mut first_mismatch = None;
    'outer: for n in 0..=n_max as i64 {
        for d in w.degrees() {
            if left.dim(n, d) != right.dim(n, d) {
                first_mismatch = Some((n, d));
                break 'outer;
            }
        }
    }
    Ok(LocalHomologyComparison { certificate, derived_l: left, local_homology: right, agree: first_mismatch.is_none(), first_mismatch })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiconditionalCell {
    pub n: i64,
    pub degree: i64,
    pub derived_iso: bool,
    pub homology_l0_iso: bool,
    pub stabilized: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiconditionalReport {
    pub window: Window,
    pub derived_complete: Verdict,
    pub homology_l0_complete: Vec<(i64, Verdict)>,
    pub cells: Vec<BiconditionalCell>,
    pub holds: bool,
}

impl BiconditionalReport {
    pub fn check(&self) -> Result<(), CompletionError> {
        match self.cells.iter().find(|c| c.stabilized && c.derived_iso != c.homology_l0_iso) {
            Some(c) => Err(CompletionError::BiconditionalViolated { n: c.n, d: c.degree }),
            None if self.holds => Ok(()),
            None => Err(CompletionError::BiconditionalViolated { n: 0, d: self.window.lo }),
        }
    }
}

/// A complex is derived complete iff each homology module is
/// `L_0`-complete: both sides computed per `(n, d)` and overall.
pub fn completeness_biconditional(c: &ChainComplex, ideal: &HomIdeal, w: Window, depth: Option<usize>) -> Result<BiconditionalReport, CompletionError> {
    let depth = depth.unwrap_or_else(|| default_depth(c, ideal, w));
    let derived = derived_completion(c, ideal, w, Some(depth))?;
    let (derived_complete, _) = Verdict::from_report(&derived, |_| true);
    let mut homology_l0_complete = Vec::new();
    let mut cells = Vec::new();
    for n in c.lo()..=c.hi() {
        let h = c.homology_module(n)?;
        let l0 = derived_l(&h, ideal, 0, w, Some(depth))?;
        homology_l0_complete.push((n, Verdict::from_report(&l0, |k| k == 0).0));
        for d in w.degrees() {
            let de = derived.entry(n, d).expect("degree in range");
            let le = l0.entry(0, d).expect("degree in range");
            cells.push(BiconditionalCell {
                n,
                degree: d,
                derived_iso: de.iso,
                homology_l0_iso: le.iso,
                stabilized: de.stabilized && le.stabilized,
            });
        }
    }
    // Homological degrees beyond the complex: local homology must vanish there.
    let beyond_ok = derived.entries.iter().filter(|e| e.n > c.hi() || e.n < c.lo()).all(|e| !e.stabilized || e.dim == 0);
    let lhs = derived_complete == Verdict::Yes && beyond_ok;
    let rhs = homology_l0_complete.iter().all(|(_, v)| *v == Verdict::Yes);
    let per_cell = cells.iter().all(|c| !c.stabilized || c.derived_iso == c.homology_l0_iso);
    Ok(BiconditionalReport { window: w, derived_complete, homology_l0_complete, cells, holds: lhs == rhs && per_cell })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompleteTensorReport {
    pub window: Window,
    pub depth: usize,
    /// `L_0(M ⊗ N)` per degree.
    pub tensor: Vec<(i64, usize)>,
    /// `L_0(L_0 M ⊗ N)` per degree.
    pub completed_first: Vec<(i64, usize)>,
    /// `L_0(M ⊗ R)` against `L_0(M)`.
    pub unit_law: bool,
    /// `L_0(M ⊗ N)` against `L_0(L_0 M ⊗ N)`.
    pub insensitivity: bool,
    pub stabilized: bool,
}

fn l0_dims(m: &FPGradedModule, ideal: &HomIdeal, w: Window, depth: usize) -> Result<(Vec<(i64, usize)>, bool), CompletionError> {
    let r = derived_l(m, ideal, 0, w, Some(depth))?;
    let stable = r.unresolved().is_empty();
    Ok((w.degrees().map(|d| (d, r.dim(0, d))).collect(), stable))
}

/// `L_0^I(M ⊗ N)` with the unit and completion-insensitivity laws. `L_0 M`
/// is realized as `M/I^b M` at the tower depth, which agrees with the
/// degreewise limit in every degree that reaches the window.
pub fn complete_tensor(m: &FPGradedModule, n: &FPGradedModule, ideal: &HomIdeal, w: Window, depth: Option<usize>) -> Result<CompleteTensorReport, CompletionError> {
    if m.ring() != n.ring() || m.ring() != ideal.ring() {
        return Err(GradedError::RingMismatch.into());
    }
    let mn = m.tensor(n)?;
    let depth = depth.unwrap_or_else(|| default_depth(&ChainComplex::concentrated(mn.clone(), 0), ideal, w));
    let (tensor, s1) = l0_dims(&mn, ideal, w, depth)?;
    let unit = m.tensor(&FPGradedModule::ring_shifted(m.ring(), 0))?;
    let (lhs, s2) = l0_dims(&unit, ideal, w, depth)?;
    let (rhs, s3) = l0_dims(m, ideal, w, depth)?;
    let l0m = m.tensor(&power_quotient(ideal, depth as u32))?;
    let (completed_first, s4) = l0_dims(&l0m.tensor(n)?, ideal, w, depth)?;
    Ok(CompleteTensorReport {
        window: w,
        depth,
        unit_law: lhs == rhs,
        insensitivity: tensor == completed_first,
        tensor,
        completed_first,
        stabilized: s1 && s2 && s3 && s4,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtCell {
    pub s: i64,
    pub degree: i64,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtCompleteReport {
    pub window: Window,
    pub source_verdict: Verdict,
    pub target_verdict: Verdict,
    pub plain: Vec<ExtCell>,
    pub completed: Vec<ExtCell>,
    pub agree: bool,
    pub warnings: Vec<String>,
}

/// Degrees where `m` lives, clipped to a window of the same height.
fn support_window(m: &FPGradedModule, w: Window) -> Window {
    let lo = m.generators().min_degree().unwrap_or(0);
    let hi = m.top_degree(lo + w.height().max(8)).unwrap_or(lo + w.height().max(8));
    Window { lo, hi: hi.max(lo) }
}

/// `Hom(P, N)_d` for a complex of finitely presented modules: on each
/// term, the homs from the free cover that kill the relations.
fn hom_complex_presented(p: &ChainComplex, n: &FPGradedModule, d: i64) -> LinComplex {
    let len = p.hi();
    let spaces: Vec<_> = (0..=len).map(|k| kernel(&hom_into(p.object_or_zero(k).relations(), n, d))).collect();
    let lo = -len;
    let dims = (lo..=0).map(|m| spaces[(-m) as usize].dim()).collect();
    let diffs = (lo + 1..=0)
        .map(|m| {
            let k = (-m) as usize;
            let full = hom_into(&p.diff(k as i64 + 1), n, d);
            let cols = spaces[k].basis().map(|v| spaces[k + 1].coords(&full.apply(v)).expect("relations are respected")).collect();
            SparseMatrix::from_columns(spaces[k + 1].dim(), cols)
        })
        .collect();
    LinComplex::new(lo, dims, diffs)
}

/// `Ext` between `L_0`-complete modules. The plain table comes from a free
/// resolution; the second route completes the resolution stagewise and the
/// target to `N/I^b N` with `b` past every degree the window touches.
pub fn ext_complete(
    m: &FPGradedModule,
    n: &FPGradedModule,
    ideal: &HomIdeal,
    s_max: usize,
    w: Window,
) -> Result<ExtCompleteReport, CompletionError> {
    let mut warnings = Vec::new();
    let mut verdicts = Vec::new();
    for (name, module) in [("source", m), ("target", n)] {
        let (v, at) = is_l0_complete(module, ideal, support_window(module, w), None)?;
        match v {
            Verdict::No => return Err(CompletionError::InputNotComplete(format!("{name} fails in degree {}", at.unwrap_or_default()))),
            Verdict::WindowLimited => warnings.push(format!("{name} completeness is window-limited")),
            Verdict::Yes => {}
        }
        verdicts.push(v);
    }
    let plain_table = ext(m, n, s_max, w);
    let res = free_resolution(m, s_max + 1);
    let top_gen = res.complex.objects().iter().filter_map(|o| o.generators().max_degree()).max().unwrap_or(0);
    let min_n = n.generators().min_degree().unwrap_or(0);
    let step = ideal.generator_degrees().into_iter().min().unwrap_or(1).max(1);
    let b = ((top_gen + w.hi - min_n).max(0) / step + 2) as u32;
    let quotient = power_quotient(ideal, b);
    let p_hat = res.complex.tensor_module(&quotient)?;
    let n_hat = n.tensor(&quotient)?;
    let mut plain = Vec::new();
    let mut completed = Vec::new();
    for d in w.degrees() {
        let hc = hom_complex_presented(&p_hat, &n_hat, d);
        for s in 0..=s_max as i64 {
            plain.push(ExtCell { s, degree: d, dim: plain_table.get(s, d) });
            let dim = if s > p_hat.hi() { 0 } else { hc.homology(-s).dim() };
            completed.push(ExtCell { s, degree: d, dim });
        }
    }
    Ok(ExtCompleteReport {
        window: w,
        source_verdict: verdicts[0],
        target_verdict: verdicts[1],
        agree: plain == completed,
        plain,
        completed,
        warnings,
    })
}
