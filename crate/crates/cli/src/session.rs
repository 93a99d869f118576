//! Elaboration of a parsed script into engine objects.

use std::collections::BTreeMap;
use std::sync::Arc;

use lochom::adams::{FiniteGroupPresentation, SkewedModule, WAction};
use lochom::exactla::Rational;
use lochom::gradedmod::{ChainComplex, FPGradedModule, FreeGraded, GradedError, PolyMatrix};
use lochom::koszul::{koszul, KoszulSpec};
use lochom::polyring::{eval_int_expr, GradedPolyRing, HomIdeal, Poly, PolyError};

use crate::error::{ErrorKind, ScriptError};
use crate::script::{parse_syntax, ComplexExpr, FreeTerm, GroupSpec, ModuleExpr, RepSpec, SessionScript, StatementKind};

#[derive(Clone)]
pub struct Family {
    pub ring: Arc<GradedPolyRing>,
    pub param: String,
    pub expr: ModuleExpr,
    /// Declarations visible to the family body.
    scope: Arc<Session>,
}

impl Family {
    pub fn member(&self, i: i64) -> Result<FPGradedModule, String> {
        let params = BTreeMap::from([(self.param.clone(), i)]);
        self.scope.module(&self.expr, &params).map_err(|(_, m)| m)
    }
}

#[derive(Clone)]
pub enum Object {
    Ring(Arc<GradedPolyRing>),
    Ideal(HomIdeal),
    Module(FPGradedModule),
    Family(Family),
    Complex(ChainComplex),
    Group(FiniteGroupPresentation, GroupSpec),
    Action(WAction),
    Skewed(SkewedModule),
}

impl Object {
    fn kind(&self) -> &'static str {
        match self {
            Object::Ring(_) => "a ring",
            Object::Ideal(_) => "an ideal",
            Object::Module(_) => "a module",
            Object::Family(_) => "a family",
            Object::Complex(_) => "a complex",
            Object::Group(..) => "a group",
            Object::Action(_) => "an action",
            Object::Skewed(_) => "a skewed module",
        }
    }
}

type EResult<T> = Result<T, (ErrorKind, String)>;

fn poly_error(e: PolyError) -> (ErrorKind, String) {
    let kind = match &e {
        PolyError::Parse { .. } => ErrorKind::ParseError,
        PolyError::UnknownVariable(_) => ErrorKind::UndeclaredName,
        PolyError::NotHomogeneous(_) => ErrorKind::NotHomogeneous,
        _ => ErrorKind::Invalid,
    };
    (kind, e.to_string())
}

fn graded_error(e: GradedError) -> (ErrorKind, String) {
    let kind = match &e {
        GradedError::NotHomogeneous(_) => ErrorKind::NotHomogeneous,
        _ => ErrorKind::Invalid,
    };
    (kind, e.to_string())
}

fn invalid(e: impl ToString) -> (ErrorKind, String) {
    (ErrorKind::Invalid, e.to_string())
}

/// Declared objects by name.
#[derive(Clone, Default)]
pub struct Session {
    objects: BTreeMap<String, Object>,
}

macro_rules! getter {
    ($name:ident, $variant:ident, $ty:ty, $what:literal) => {
        pub fn $name(&self, name: &str) -> EResult<&$ty> {
            match self.get(name)? {
                Object::$variant(x) => Ok(x),
                other => Err(invalid(format!("`{name}` is {}, expected {}", other.kind(), $what))),
            }
        }
    };
}

impl Session {
    pub fn get(&self, name: &str) -> EResult<&Object> {
        self.objects.get(name).ok_or_else(|| (ErrorKind::UndeclaredName, format!("`{name}` is not declared")))
    }

    getter!(ring, Ring, Arc<GradedPolyRing>, "a ring");
    getter!(ideal, Ideal, HomIdeal, "an ideal");
    getter!(family, Family, Family, "a family");
    getter!(action, Action, WAction, "an action");
    getter!(skewed, Skewed, SkewedModule, "a skewed module");

    pub fn module_named(&self, name: &str) -> EResult<&FPGradedModule> {
        match self.get(name)? {
            Object::Module(m) => Ok(m),
            other => Err(invalid(format!("`{name}` is {}, expected a module", other.kind()))),
        }
    }

    /// A complex, or a module placed in homological degree 0.
    pub fn complex_named(&self, name: &str) -> EResult<ChainComplex> {
        match self.get(name)? {
            Object::Complex(c) => Ok(c.clone()),
            Object::Module(m) => Ok(ChainComplex::concentrated(m.clone(), 0)),
            other => Err(invalid(format!("`{name}` is {}, expected a complex or module", other.kind()))),
        }
    }

    pub fn group(&self, name: &str) -> EResult<(&FiniteGroupPresentation, &GroupSpec)> {
        match self.get(name)? {
            Object::Group(g, s) => Ok((g, s)),
            other => Err(invalid(format!("`{name}` is {}, expected a group", other.kind()))),
        }
    }

    fn declare(&mut self, name: &str, obj: Object) -> EResult<()> {
        if self.objects.contains_key(name) {
            return Err(invalid(format!("`{name}` is already declared")));
        }
        self.objects.insert(name.to_string(), obj);
        Ok(())
    }

    fn free_degrees(&self, terms: &[FreeTerm], params: &BTreeMap<String, i64>) -> EResult<(Arc<GradedPolyRing>, Vec<i64>)> {
        let ring = self.ring(&terms[0].ring)?.clone();
        let mut degrees = Vec::new();
        for t in terms {
            if *self.ring(&t.ring)? != ring {
                return Err(invalid(format!("free summands over different rings (`{}`)", t.ring)));
            }
            let shift = eval_int_expr(&t.shift, params).map_err(poly_error)?;
            let count = eval_int_expr(&t.count, params).map_err(poly_error)?;
            if count < 0 {
                return Err(invalid(format!("negative generator count in `{t}`")));
            }
            degrees.extend(std::iter::repeat_n(-shift, count as usize));
        }
        Ok((ring, degrees))
    }

    pub fn module(&self, expr: &ModuleExpr, params: &BTreeMap<String, i64>) -> EResult<FPGradedModule> {
        Ok(match expr {
            ModuleExpr::Name(n) => self.module_named(n)?.clone(),
            ModuleExpr::Coker { target, source, matrix } => {
                let (ring, tdeg) = self.free_degrees(target, params)?;
                let (sring, sdeg) = self.free_degrees(source, params)?;
                if ring != sring {
                    return Err(invalid("source and target are over different rings"));
                }
                if matrix.len() != tdeg.len() || matrix.iter().any(|r| r.len() != sdeg.len()) {
                    return Err(invalid(format!(
                        "relations matrix must be {}×{} (rows are target generators)",
                        tdeg.len(),
                        sdeg.len()
                    )));
                }
                let mut columns = vec![vec![Poly::zero(); tdeg.len()]; sdeg.len()];
                for (i, row) in matrix.iter().enumerate() {
                    for (j, entry) in row.iter().enumerate() {
                        columns[j][i] = ring.parse_homogeneous(entry, params).map_err(poly_error)?;
                    }
                }
                let rel = PolyMatrix::new(FreeGraded::new(ring.clone(), sdeg), FreeGraded::new(ring, tdeg), columns).map_err(graded_error)?;
                FPGradedModule::new(rel)
            }
            ModuleExpr::Free(terms) => {
                let (ring, degrees) = self.free_degrees(terms, params)?;
                FPGradedModule::free(FreeGraded::new(ring, degrees))
            }
            ModuleExpr::Residue(r) => FPGradedModule::residue_field(self.ring(r)?),
            ModuleExpr::Quotient(i) => {
                let ideal = self.ideal(i)?;
                FPGradedModule::cyclic(ideal.ring(), 0, ideal.generators()).map_err(graded_error)?
            }
            ModuleExpr::Sum(a, b) => self.module(a, params)?.direct_sum(&self.module(b, params)?).map_err(graded_error)?,
            ModuleExpr::Tensor(a, b) => self.module(a, params)?.tensor(&self.module(b, params)?).map_err(graded_error)?,
            ModuleExpr::Shift(a, k) => self.module(a, params)?.shift(eval_int_expr(k, params).map_err(poly_error)?),
        })
    }

    pub fn complex(&self, expr: &ComplexExpr) -> EResult<ChainComplex> {
        Ok(match expr {
            ComplexExpr::Name(n) => self.complex_named(n)?,
            ComplexExpr::Koszul { ideal, power } => koszul(&KoszulSpec::new(self.ideal(ideal)?, *power).map_err(invalid)?),
            ComplexExpr::Tensor(a, b) => self.complex(a)?.tensor(&self.complex(b)?).map_err(invalid)?,
            ComplexExpr::Suspend(a, k) => self.complex(a)?.suspend(*k),
        })
    }

    fn action_from_rules(&self, group: &str, ring: &str, rules: &[crate::script::ActionRule]) -> EResult<WAction> {
        let (g, _) = self.group(group)?;
        let ring = self.ring(ring)?;
        let vars: Vec<Poly> = (0..ring.nvars()).map(|i| ring.var(i)).collect();
        let mut known: BTreeMap<usize, Vec<Poly>> = BTreeMap::from([(g.identity(), vars.clone())]);
        for rule in rules {
            let w = g.index_of(&rule.element).ok_or_else(|| (ErrorKind::UndeclaredName, format!("`{}` is not an element of `{group}`", rule.element)))?;
            let mut imgs = vars.clone();
            for (v, p) in &rule.images {
                let i = ring.var_index(v).ok_or_else(|| (ErrorKind::UndeclaredName, format!("unknown variable `{v}`")))?;
                imgs[i] = ring.parse_homogeneous(p, &BTreeMap::new()).map_err(poly_error)?;
            }
            known.insert(w, imgs);
        }
        // Close under products: (ab)·x = a·(b·x).
        loop {
            let mut added = false;
            let snapshot: Vec<(usize, Vec<Poly>)> = known.iter().map(|(k, v)| (*k, v.clone())).collect();
            for (a, ia) in &snapshot {
                for (b, ib) in &snapshot {
                    let ab = g.mul(*a, *b);
                    if !known.contains_key(&ab) {
                        known.insert(ab, ib.iter().map(|p| ring.substitute(p, ia)).collect());
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        if known.len() != g.order() {
            return Err(invalid(format!("the listed elements do not generate `{group}`")));
        }
        WAction::new(g.clone(), ring.clone(), known.into_values().collect()).map_err(invalid)
    }

    fn sign_character(g: &FiniteGroupPresentation, spec: &GroupSpec) -> EResult<Vec<i64>> {
        match spec {
            GroupSpec::Cyclic(n) if n % 2 == 0 => Ok((0..g.order()).map(|k| if k % 2 == 0 { 1 } else { -1 }).collect()),
            GroupSpec::Symmetric(n) if *n >= 2 => Ok((0..g.order())
                .map(|w| {
                    let p: Vec<char> = g.name(w).chars().collect();
                    let inv = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
                    if inv % 2 == 0 {
                        1
                    } else {
                        -1
                    }
                })
                .collect()),
            _ => Err(invalid(format!("{spec} has no sign character"))),
        }
    }

    fn skewed_module(&self, module: &str, action: &str, rep: &RepSpec, group: &GroupSpec) -> EResult<SkewedModule> {
        let m = self.module_named(module)?.clone();
        let act = self.action(action)?.clone();
        if m.ring() != act.ring() {
            return Err(invalid(format!("`{module}` and `{action}` are over different rings")));
        }
        match rep {
            RepSpec::Trivial => Ok(SkewedModule::trivial(m, act)),
            RepSpec::Sign => {
                let s = Self::sign_character(act.group(), group)?;
                SkewedModule::sign(m, act, &s).map_err(invalid)
            }
            RepSpec::Character(vals) => {
                if vals.len() != act.group().order() {
                    return Err(invalid(format!("character needs {} values", act.group().order())));
                }
                let chi = vals
                    .iter()
                    .map(|v| v.parse::<Rational>().map_err(|e| (ErrorKind::ParseError, e.to_string())))
                    .collect::<EResult<Vec<_>>>()?;
                SkewedModule::with_character(m, act, &chi).map_err(invalid)
            }
        }
    }

    fn group_spec_of_action(&self, action: &str) -> EResult<GroupSpec> {
        let act = self.action(action)?;
        self.objects
            .values()
            .find_map(|o| match o {
                Object::Group(g, s) if g == act.group() => Some(s.clone()),
                _ => None,
            })
            .ok_or_else(|| invalid("action group is not declared"))
    }

    fn apply(&mut self, kind: &StatementKind) -> EResult<()> {
        let empty = BTreeMap::new();
        match kind {
            StatementKind::Ring { name, vars, relations } => {
                for r in relations {
                    // Classify bad relations before the ring rejects them.
                    let plain = GradedPolyRing::new(vars).map_err(poly_error)?;
                    plain.parse_homogeneous(r, &empty).map_err(poly_error)?;
                }
                let ring = if relations.is_empty() { GradedPolyRing::new(vars) } else { GradedPolyRing::quotient(vars, relations) };
                self.declare(name, Object::Ring(ring.map_err(poly_error)?))
            }
            StatementKind::Ideal { name, ring, generators } => {
                let r = self.ring(ring)?.clone();
                let gens = generators.iter().map(|g| r.parse_homogeneous(g, &empty).map_err(poly_error)).collect::<EResult<Vec<_>>>()?;
                self.declare(name, Object::Ideal(HomIdeal::new(r, gens).map_err(poly_error)?))
            }
            StatementKind::Module { name, expr } => {
                let m = self.module(expr, &empty)?;
                self.declare(name, Object::Module(m))
            }
            StatementKind::Family { name, param, expr } => {
                let scope = Arc::new(self.clone());
                let first = scope.module(expr, &BTreeMap::from([(param.clone(), 1)]))?;
                let fam = Family { ring: first.ring().clone(), param: param.clone(), expr: expr.clone(), scope };
                self.declare(name, Object::Family(fam))
            }
            StatementKind::Complex { name, expr } => {
                let c = self.complex(expr)?;
                self.declare(name, Object::Complex(c))
            }
            StatementKind::Group { name, group } => {
                let g = match group {
                    GroupSpec::Trivial => FiniteGroupPresentation::trivial(),
                    GroupSpec::Cyclic(n) => FiniteGroupPresentation::cyclic(*n),
                    GroupSpec::Symmetric(n) if *n <= 5 => FiniteGroupPresentation::symmetric(*n),
                    GroupSpec::Symmetric(_) => return Err(invalid("symmetric groups are limited to n ≤ 5")),
                };
                self.declare(name, Object::Group(g, group.clone()))
            }
            StatementKind::Action { name, group, ring, rules } => {
                let a = self.action_from_rules(group, ring, rules)?;
                self.declare(name, Object::Action(a))
            }
            StatementKind::Skewed { name, module, action, rep } => {
                let spec = self.group_spec_of_action(action)?;
                let s = self.skewed_module(module, action, rep, &spec)?;
                self.declare(name, Object::Skewed(s))
            }
            StatementKind::Command(c) => {
                for a in &c.args {
                    self.get(a)?;
                }
                Ok(())
            }
        }
    }

    /// Elaborates every declaration in order and checks that commands only
    /// refer to names declared before them.
    pub fn build(script: &SessionScript) -> Result<Session, ScriptError> {
        let mut s = Session::default();
        for st in &script.statements {
            s.apply(&st.kind).map_err(|(kind, message)| ScriptError { kind, line: st.line, col: st.col, message })?;
        }
        Ok(s)
    }
}

/// Parses and validates a script: syntax, names and homogeneity.
pub fn parse(src: &str) -> Result<SessionScript, ScriptError> {
    let script = parse_syntax(src)?;
    Session::build(&script)?;
    Ok(script)
}
