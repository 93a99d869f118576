//! The session script: declarations and commands, parsed from text and
//! printed back in canonical form.

mod parse;

use std::fmt;

pub use parse::parse_syntax;

use crate::commands::CommandLine;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SessionScript {
    pub statements: Vec<Statement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub kind: StatementKind,
    /// 1-based source position of the first token.
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StatementKind {
    Ring { name: String, vars: Vec<(String, i64)>, relations: Vec<String> },
    Ideal { name: String, ring: String, generators: Vec<String> },
    Module { name: String, expr: ModuleExpr },
    Family { name: String, param: String, expr: ModuleExpr },
    Complex { name: String, expr: ComplexExpr },
    Group { name: String, group: GroupSpec },
    Action { name: String, group: String, ring: String, rules: Vec<ActionRule> },
    Skewed { name: String, module: String, action: String, rep: RepSpec },
    Command(CommandLine),
}

/// `R(a)^k`: `k` generators in degree `−a`. Both are integer expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeTerm {
    pub ring: String,
    pub shift: String,
    pub count: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleExpr {
    Name(String),
    /// `coker target <- source [matrix]`, rows indexed by target generators.
    Coker { target: Vec<FreeTerm>, source: Vec<FreeTerm>, matrix: Vec<Vec<String>> },
    Free(Vec<FreeTerm>),
    Residue(String),
    /// `R/I` for a declared ideal.
    Quotient(String),
    Sum(Box<ModuleExpr>, Box<ModuleExpr>),
    Tensor(Box<ModuleExpr>, Box<ModuleExpr>),
    Shift(Box<ModuleExpr>, String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexExpr {
    /// A declared complex, or a module placed in homological degree 0.
    Name(String),
    Koszul { ideal: String, power: u32 },
    Tensor(Box<ComplexExpr>, Box<ComplexExpr>),
    Suspend(Box<ComplexExpr>, i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Trivial,
    Cyclic(usize),
    Symmetric(usize),
}

/// `elem: x -> p, y -> q`; unlisted variables are fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionRule {
    pub element: String,
    pub images: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepSpec {
    Trivial,
    Sign,
    Character(Vec<String>),
}

fn join<T: fmt::Display>(items: &[T], sep: &str) -> String {
    items.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(sep)
}

impl fmt::Display for FreeTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.ring, self.shift)?;
        if self.count != "1" {
            write!(f, "^{}", self.count)?;
        }
        Ok(())
    }
}

impl fmt::Display for ModuleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleExpr::Name(n) => write!(f, "{n}"),
            ModuleExpr::Coker { target, source, matrix } => {
                let rows: Vec<String> = matrix.iter().map(|r| r.join(", ")).collect();
                write!(f, "coker {} <- {} [{}]", join(target, " + "), join(source, " + "), rows.join("; "))
            }
            ModuleExpr::Free(terms) => write!(f, "free {}", join(terms, " + ")),
            ModuleExpr::Residue(r) => write!(f, "residue({r})"),
            ModuleExpr::Quotient(i) => write!(f, "quotient({i})"),
            ModuleExpr::Sum(a, b) => write!(f, "sum({a}, {b})"),
            ModuleExpr::Tensor(a, b) => write!(f, "tensor({a}, {b})"),
            ModuleExpr::Shift(a, k) => write!(f, "shift({a}, {k})"),
        }
    }
}

impl fmt::Display for ComplexExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexExpr::Name(n) => write!(f, "{n}"),
            ComplexExpr::Koszul { ideal, power: 1 } => write!(f, "koszul({ideal})"),
            ComplexExpr::Koszul { ideal, power } => write!(f, "koszul({ideal}, {power})"),
            ComplexExpr::Tensor(a, b) => write!(f, "tensor({a}, {b})"),
            ComplexExpr::Suspend(a, k) => write!(f, "suspend({a}, {k})"),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Trivial => write!(f, "trivial"),
            GroupSpec::Cyclic(n) => write!(f, "cyclic({n})"),
            GroupSpec::Symmetric(n) => write!(f, "symmetric({n})"),
        }
    }
}

impl fmt::Display for RepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepSpec::Trivial => write!(f, "trivial"),
            RepSpec::Sign => write!(f, "sign"),
            RepSpec::Character(v) => write!(f, "character({})", v.join(", ")),
        }
    }
}

impl fmt::Display for StatementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatementKind::Ring { name, vars, relations } => {
                let vs: Vec<String> = vars.iter().map(|(v, d)| format!("{v}:{d}")).collect();
                write!(f, "ring {name} = Q[{}]", vs.join(", "))?;
                if !relations.is_empty() {
                    write!(f, " / ({})", relations.join(", "))?;
                }
                Ok(())
            }
            StatementKind::Ideal { name, ring, generators } => {
                write!(f, "ideal {name} = ({}) in {ring}", generators.join(", "))
            }
            StatementKind::Module { name, expr } => write!(f, "module {name} = {expr}"),
            StatementKind::Family { name, param, expr } => write!(f, "family {name}({param}) = {expr}"),
            StatementKind::Complex { name, expr } => write!(f, "complex {name} = {expr}"),
            StatementKind::Group { name, group } => write!(f, "group {name} = {group}"),
            StatementKind::Action { name, group, ring, rules } => {
                write!(f, "action {name} = {group} on {ring}")?;
                if !rules.is_empty() {
                    let rs: Vec<String> = rules
                        .iter()
                        .map(|r| {
                            let im: Vec<String> = r.images.iter().map(|(v, p)| format!("{v} -> {p}")).collect();
                            format!("{}: {}", r.element, im.join(", "))
                        })
                        .collect();
                    write!(f, " [{}]", rs.join("; "))?;
                }
                Ok(())
            }
            StatementKind::Skewed { name, module, action, rep } => write!(f, "skewed {name} = {module} with {action} {rep}"),
            StatementKind::Command(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Display for SessionScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{};", s.kind)?;
        }
        Ok(())
    }
}

impl SessionScript {
    pub fn commands(&self) -> impl Iterator<Item = &CommandLine> {
        self.statements.iter().filter_map(|s| match &s.kind {
            StatementKind::Command(c) => Some(c),
            _ => None,
        })
    }

    /// The statements with positions dropped, for structural comparison.
    pub fn kinds(&self) -> Vec<&StatementKind> {
        self.statements.iter().map(|s| &s.kind).collect()
    }
}
