//! Command lines and their dispatch to the engine.

use std::fmt;
use std::sync::Arc;

use clap::{Args, Parser, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use lochom::adams::{e2_page, AdamsError};
use lochom::completion::{
    compare_local_homology, complete_tensor, completeness, completeness_biconditional, derived_completion, derived_l, ext_complete,
    CompletionError, CompletionReport, Verdict,
};
use lochom::gradedmod::{ext, Window};
use lochom::koszul::{dual_cofibre_check, koszul, self_duality_check, summarize, KoszulSpec};
use lochom::towers::{ml_failure_certificate, weak_proregularity_check, SumFamilyTower};

use crate::error::{CommandError, Exit};
use crate::report::{Certificate, Parameters, Report, Status};
use crate::session::Session;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Op {
    Koszul,
    #[value(name = "wpr-check")]
    WprCheck,
    Lhom,
    Lderived,
    Lcompare,
    #[value(name = "complete?")]
    Complete,
    Homcomplete,
    Ctensor,
    Ext,
    Exthat,
    #[value(name = "ml-cert")]
    MlCert,
    #[value(name = "adams-e2")]
    AdamsE2,
    Selfdual,
    Dual,
}

impl Op {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }

    /// Positional arguments, by role.
    fn signature(self) -> &'static [&'static str] {
        match self {
            Op::Koszul | Op::WprCheck | Op::Selfdual => &["ideal"],
            Op::Lhom | Op::Homcomplete => &["complex", "ideal"],
            Op::Lderived | Op::Lcompare | Op::Complete => &["module", "ideal"],
            Op::Ctensor | Op::Exthat => &["module", "module", "ideal"],
            Op::Ext => &["module", "module"],
            Op::MlCert => &["family", "ideal"],
            Op::AdamsE2 => &["skewed module", "skewed module"],
            Op::Dual => &["ring"],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grid {
    pub s: usize,
    pub t: usize,
}

fn parse_window(s: &str) -> Result<Window, String> {
    let (lo, hi) = s.split_once("..").ok_or("expected lo..hi")?;
    let lo: i64 = lo.trim().parse().map_err(|_| format!("bad lower bound `{lo}`"))?;
    let hi: i64 = hi.trim().parse().map_err(|_| format!("bad upper bound `{hi}`"))?;
    Window::new(lo, hi).map_err(|e| e.to_string())
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let (a, b) = s.split_once('x').ok_or("expected SxT")?;
    let s: usize = a.parse().map_err(|_| format!("bad s extent `{a}`"))?;
    let t: usize = b.parse().map_err(|_| format!("bad t extent `{b}`"))?;
    if s == 0 || t == 0 {
        return Err("grid extents must be positive".into());
    }
    Ok(Grid { s, t })
}

#[derive(Args, Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    /// Internal degrees `lo..hi`.
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    pub window: Option<Window>,
    /// Tower depth.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Largest base stage, Ext degree, or E2 row bound.
    #[arg(long)]
    pub smax: Option<usize>,
    /// Largest derived degree.
    #[arg(long)]
    pub nmax: Option<usize>,
    /// Certificate grid `SxT`.
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<Grid>,
    /// Family truncation.
    #[arg(long)]
    pub maxsummand: Option<usize>,
    /// Homological degree for `ml-cert`.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<i64>,
    /// Witness search bound for `wpr-check`.
    #[arg(long)]
    pub bound: Option<usize>,
    /// Koszul power for `selfdual`.
    #[arg(long)]
    pub power: Option<u32>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Parser, Clone, Debug, PartialEq, Eq)]
#[command(name = "lochom", no_binary_name = true, disable_help_flag = true, disable_version_flag = true)]
pub struct CommandLine {
    pub op: Op,
    pub args: Vec<String>,
    #[command(flatten)]
    pub opts: Options,
}

impl CommandLine {
    pub fn from_words(words: &[&str]) -> Result<Self, String> {
        CommandLine::try_parse_from(words).map_err(|e| e.render().to_string().trim().to_string())
    }
}

impl fmt::Display for CommandLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.op.name())?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        let o = &self.opts;
        if let Some(w) = o.window {
            write!(f, " --window {}..{}", w.lo, w.hi)?;
        }
        let nums = [("depth", o.depth), ("smax", o.smax), ("nmax", o.nmax)];
        for (name, v) in nums {
            if let Some(v) = v {
                write!(f, " --{name} {v}")?;
            }
        }
        if let Some(g) = o.grid {
            write!(f, " --grid {}x{}", g.s, g.t)?;
        }
        if let Some(v) = o.maxsummand {
            write!(f, " --maxsummand {v}")?;
        }
        if let Some(v) = o.k {
            write!(f, " --k {v}")?;
        }
        if let Some(v) = o.bound {
            write!(f, " --bound {v}")?;
        }
        if let Some(v) = o.power {
            write!(f, " --power {v}")?;
        }
        if let Some(v) = o.format {
            write!(f, " --format {}", v.to_possible_value().unwrap().get_name())?;
        }
        if let Some(v) = &o.out {
            write!(f, " --out {v}")?;
        }
        Ok(())
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn session_err((_, message): (crate::error::ErrorKind, String)) -> CommandError {
    CommandError::input(message)
}

fn completion_err(e: CompletionError) -> CommandError {
    match e {
        CompletionError::NotWeaklyProRegular => CommandError { exit: Exit::CertificateNotFound, message: e.to_string() },
        CompletionError::MismatchAt { .. } | CompletionError::BiconditionalViolated { .. } => {
            CommandError { exit: Exit::Mismatch, message: e.to_string() }
        }
        other => CommandError::input(other.to_string()),
    }
}

fn completion_status(reports: &[&CompletionReport]) -> Status {
    let unresolved: Vec<_> = reports.iter().flat_map(|r| r.unresolved()).collect();
    let mut st = Status::ok();
    st.stabilized = unresolved.is_empty();
    st.window_limited = !unresolved.is_empty();
    if let Some((n, d)) = unresolved.first() {
        st.messages.push(format!("{} cells did not stabilize at this depth, first (n={n}, d={d})", unresolved.len()));
    }
    st
}

fn verdict_status(verdicts: &[Verdict]) -> Status {
    let mut st = Status::ok();
    if verdicts.contains(&Verdict::WindowLimited) {
        st.window_limited = true;
        st.stabilized = false;
    }
    st
}

/// Runs one command against a session.
pub fn run(session: &Session, cmd: &CommandLine) -> Result<Report, CommandError> {
    let sig = cmd.op.signature();
    if cmd.args.len() != sig.len() {
        return Err(CommandError::input(format!("`{}` takes {} argument(s): {}", cmd.op.name(), sig.len(), sig.join(", "))));
    }
    let arg = |i: usize| cmd.args[i].as_str();
    let o = &cmd.opts;
    let default_window = match cmd.op {
        Op::Ext | Op::Exthat | Op::AdamsE2 => Window { lo: -10, hi: 2 },
        _ => Window { lo: 0, hi: 10 },
    };
    let w = o.window.unwrap_or(default_window);
    let mut params = Parameters { window: Some(w), depth: o.depth, ..Default::default() };
    let mut certificates = Vec::new();
    let (result, status) = match cmd.op {
        Op::Koszul => {
            let ideal = session.ideal(arg(0)).map_err(session_err)?;
            let smax = o.smax.unwrap_or(1).max(1);
            params.s_max = Some(smax);
            let powers: Vec<Value> = (1..=smax as u32)
                .map(|s| {
                    let spec = KoszulSpec::new(ideal, s).map_err(|e| CommandError::input(e.to_string()))?;
                    let h = koszul(&spec).homology(w);
                    let cells: Vec<Value> = h.iter().filter(|(_, d)| **d > 0).map(|(&(n, d), &dim)| json!({"n": n, "degree": d, "dim": dim})).collect();
                    Ok(json!({"summary": to_value(&summarize(&spec)), "homology": cells}))
                })
                .collect::<Result<_, CommandError>>()?;
            (json!({ "powers": powers }), Status::ok())
        }
        Op::WprCheck => {
            let ideal = session.ideal(arg(0)).map_err(session_err)?;
            let (smax, bound) = (o.smax.unwrap_or(3), o.bound.unwrap_or(3));
            params.s_max = Some(smax);
            params.search_bound = Some(bound);
            let rep = weak_proregularity_check(ideal, smax, bound, w);
            params.depth = Some(rep.depth);
            let witnesses: Vec<Value> = rep.certificates.iter().map(|c| json!({"k": c.k, "witnesses": c.witnesses})).collect();
            certificates.extend(rep.certificates.iter().cloned().map(Certificate::ProZero));
            let mut st = Status::ok();
            if !rep.weakly_pro_regular {
                st = Status::failed(Exit::CertificateNotFound, "no pro-zero witness within the search bound");
            }
            (
                json!({"weakly_pro_regular": rep.weakly_pro_regular, "depth": rep.depth, "search_bound": rep.search_bound, "witnesses": witnesses, "failures": rep.failures}),
                st,
            )
        }
        Op::Lhom => {
            let c = session.complex_named(arg(0)).map_err(session_err)?;
            let ideal = session.ideal(arg(1)).map_err(session_err)?;
            let rep = derived_completion(&c, ideal, w, o.depth).map_err(completion_err)?.labelled(arg(0));
            params.depth = Some(rep.depth);
            let st = completion_status(&[&rep]);
            (to_value(&rep), st)
        }
        Op::Lderived => {
            let m = session.module_named(arg(0)).map_err(session_err)?;
            let ideal = session.ideal(arg(1)).map_err(session_err)?;
            let nmax = o.nmax.unwrap_or(2);
            params.n_max = Some(nmax);
            let rep = derived_l(m, ideal, nmax, w, o.depth).map_err(completion_err)?.labelled(arg(0));
            params.depth = Some(rep.depth);
            let st = completion_status(&[&rep]);
            (to_value(&rep), st)
        }
        Op::Lcompare => {
            let m = session.module_named(arg(0)).map_err(session_err)?;
            let ideal = session.ideal(arg(1)).map_err(session_err)?;
            let nmax = o.nmax.unwrap_or(2);
            params.n_max = Some(nmax);
            let cmp = compare_local_homology(m, ideal, nmax, w, o.depth).map_err(completion_err)?;
            params.depth = Some(cmp.derived_l.depth);
            certificates.extend(cmp.certificate.certificates.iter().cloned().map(Certificate::ProZero));
            let mut st = completion_status(&[&cmp.derived_l, &cmp.local_homology]);
            if let Err(e) = cmp.check() {
                st = Status::failed(Exit::Mismatch, &e.to_string());
            }
            let result = json!({
                "agree": cmp.agree,
                "first_mismatch": cmp.first_mismatch,
                "weakly_pro_regular": cmp.certificate.weakly_pro_regular,
                "derived_l": to_value(&cmp.derived_l.clone().labelled(arg(0))),
                "local_homology": to_value(&cmp.local_homology.clone().labelled(arg(0))),
            });
            (result, st)
        }
        Op::Complete => {
            let m = session.module_named(arg(0)).map_err(session_err)?;
            let ideal = session.ideal(arg(1)).map_err(session_err)?;
            let v = completeness(m, ideal, w, o.depth).map_err(completion_err)?;
            let st = verdict_status(&[v.l0_complete, v.derived_complete]);
            (to_value(&v), st)
        }
        Op::Homcomplete => {
            let c = session.complex_named(arg(0)).map_err(session_err)?;
            let ideal = session.ideal(arg(1)).map_err(session_err)?;
            let rep = completeness_biconditional(&c, ideal, w, o.depth).map_err(completion_err)?;
            let mut verdicts = vec![rep.derived_complete];
            verdicts.extend(rep.homology_l0_complete.iter().map(|(_, v)| *v));
            let mut st = verdict_status(&verdicts);
            if let Err(e) = rep.check() {
                st = Status::failed(Exit::Mismatch, &e.to_string());
            }
            (to_value(&rep), st)
        }
        Op::Ctensor => {
            let m = session.module_named(arg(0)).map_err(session_err)?;
            let n = session.module_named(arg(1)).map_err(session_err)?;
            let ideal = session.ideal(arg(2)).map_err(session_err)?;
            let rep = complete_tensor(m, n, ideal, w, o.depth).map_err(completion_err)?;
            params.depth = Some(rep.depth);
            let mut st = Status::ok();
            st.stabilized = rep.stabilized;
            st.window_limited = !rep.stabilized;
            if !(rep.unit_law && rep.insensitivity) {
                st = Status::failed(Exit::Mismatch, "complete tensor laws fail");
            }
            (to_value(&rep), st)
        }
        Op::Ext => {
            let m = session.module_named(arg(0)).map_err(session_err)?;
            let n = session.module_named(arg(1)).map_err(session_err)?;
            let smax = o.smax.unwrap_or(2);
            params.s_max = Some(smax);
            let t = ext(m, n, smax, w);
            let cells: Vec<Value> = t.dims.iter().map(|(&(s, d), &dim)| json!({"s": s, "degree": d, "dim": dim})).collect();
            (json!({"cells": cells, "resolution_ranks": t.resolution_ranks, "truncated": t.truncated}), Status::ok())
        }
        Op::Exthat => {
            let m = session.module_named(arg(0)).map_err(session_err)?;
            let n = session.module_named(arg(1)).map_err(session_err)?;
            let ideal = session.ideal(arg(2)).map_err(session_err)?;
            let smax = o.smax.unwrap_or(2);
            params.s_max = Some(smax);
            let rep = ext_complete(m, n, ideal, smax, w).map_err(completion_err)?;
            let mut st = verdict_status(&[rep.source_verdict, rep.target_verdict]);
            st.messages.extend(rep.warnings.iter().cloned());
            if !rep.agree {
                st = Status::failed(Exit::Mismatch, "completed and plain Ext tables differ");
            }
            (to_value(&rep), st)
        }
        Op::MlCert => {
            let family = session.family(arg(0)).map_err(session_err)?.clone();
            let ideal = session.ideal(arg(1)).map_err(session_err)?;
            let grid = o.grid.unwrap_or(Grid { s: 4, t: 4 });
            let n = o.maxsummand.unwrap_or(12);
            let k = o.k.unwrap_or(2);
            params.grid = Some(format!("{}x{}", grid.s, grid.t));
            params.max_summand = Some(n);
            params.k = Some(k);
            let f = SumFamilyTower { ring: family.ring.clone(), ideal: ideal.clone(), rule: Arc::new(move |i| family.member(i)), truncation: n };
            let s_grid: Vec<usize> = (1..=grid.s).collect();
            let t_grid: Vec<usize> = (1..=grid.t).collect();
            match ml_failure_certificate(&f, k, &s_grid, &t_grid, w) {
                Ok(cert) => {
                    let result = json!({
                        "k": cert.k,
                        "truncation": cert.truncation,
                        "per_summand_prozero": cert.per_summand_prozero,
                        "spread": cert.spread,
                        "hypothesis": cert.hypothesis,
                    });
                    certificates.push(Certificate::MlFailure(cert));
                    (result, Status::ok())
                }
                Err(nf) => {
                    let msg = format!("certificate not found ({} part, index {}): {}", nf.part, nf.index, nf.detail);
                    (json!({ "certificate_not_found": nf }), Status::failed(Exit::CertificateNotFound, &msg))
                }
            }
        }
        Op::AdamsE2 => {
            let a = session.skewed(arg(0)).map_err(session_err)?;
            let b = session.skewed(arg(1)).map_err(session_err)?;
            params.s_max = o.smax;
            match e2_page(a, b, o.smax, w) {
                Ok(page) => {
                    let mut st = Status::ok();
                    if !page.warnings.is_empty() {
                        st.window_limited = true;
                        st.messages.extend(page.warnings.iter().cloned());
                    }
                    if page.cross_check == Some(false) {
                        st = Status::failed(Exit::Mismatch, "fixed-point and direct Ext routes disagree");
                    }
                    (to_value(&page), st)
                }
                Err(e @ AdamsError::RowBoundViolated { .. }) => return Err(CommandError { exit: Exit::Mismatch, message: e.to_string() }),
                Err(e) => return Err(CommandError::input(e.to_string())),
            }
        }
        Op::Selfdual => {
            let ideal = session.ideal(arg(0)).map_err(session_err)?;
            let power = o.power.unwrap_or(1);
            params.power = Some(power);
            let spec = KoszulSpec::new(ideal, power).map_err(|e| CommandError::input(e.to_string()))?;
            let rep = self_duality_check(&spec, w);
            let st = if rep.matches { Status::ok() } else { Status::failed(Exit::Mismatch, "dual and shifted Koszul homology differ") };
            (to_value(&rep), st)
        }
        Op::Dual => {
            let ring = session.ring(arg(0)).map_err(session_err)?;
            let rep = dual_cofibre_check(ring, w);
            let st = if rep.matches { Status::ok() } else { Status::failed(Exit::Mismatch, "cofibre sequence dimensions differ") };
            (to_value(&rep), st)
        }
    };
    Ok(Report { schema: 1, command: cmd.to_string(), parameters: params, result, certificates, status })
}
