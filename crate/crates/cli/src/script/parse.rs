use super::{ActionRule, ComplexExpr, FreeTerm, GroupSpec, ModuleExpr, RepSpec, SessionScript, Statement, StatementKind};
use crate::commands::CommandLine;
use crate::error::{ErrorKind, ScriptError};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Sym(&'static str),
    Other(char),
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Int(s) => s.clone(),
            Tok::Sym(s) => s.to_string(),
            Tok::Other(c) => c.to_string(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    start: usize,
    line: usize,
    col: usize,
}

const SYMBOLS: [&str; 19] = ["->", "<-", "..", "=", ";", ",", "(", ")", "[", "]", "^", "+", "-", "*", "/", ":", "?", ".", "!"];

fn lex(src: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut line_start = 0;
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < src.len() {
        let c = src[i..].chars().next().unwrap();
        let col = src[line_start..i].chars().count() + 1;
        if c == '\n' {
            line += 1;
            i += 1;
            line_start = i;
        } else if c.is_whitespace() {
            i += c.len_utf8();
        } else if c == '#' || src[i..].starts_with("//") {
            while i < src.len() && bytes[i] != b'\n' {
                i += 1;
            }
        } else if c.is_ascii_digit() {
            let start = i;
            while i < src.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Token { tok: Tok::Int(src[start..i].into()), start, line, col });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while let Some(ch) = src[i..].chars().next().filter(|ch| ch.is_alphanumeric() || *ch == '_') {
                i += ch.len_utf8();
            }
            out.push(Token { tok: Tok::Ident(src[start..i].into()), start, line, col });
        } else if let Some(s) = SYMBOLS.iter().find(|s| src[i..].starts_with(**s)) {
            out.push(Token { tok: Tok::Sym(s), start: i, line, col });
            i += s.len();
        } else {
            out.push(Token { tok: Tok::Other(c), start: i, line, col });
            i += c.len_utf8();
        }
    }
    out
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
    current_ring: Option<String>,
}

type PResult<T> = Result<T, ScriptError>;

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn error(&self, msg: impl Into<String>) -> ScriptError {
        let (line, col) = match self.toks.get(self.pos).or(self.toks.last()) {
            Some(t) => (t.line, t.col),
            None => (1, 1),
        };
        ScriptError { kind: ErrorKind::ParseError, line, col, message: msg.into() }
    }

    fn next(&mut self) -> PResult<Tok> {
        let t = self.peek().cloned().ok_or_else(|| self.error("unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(x)) if x == w)
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.is_sym(s) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{s}`, found {}", self.describe())))
        }
    }

    fn expect_word(&mut self, w: &str) -> PResult<()> {
        if self.is_word(w) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{w}`, found {}", self.describe())))
        }
    }

    fn describe(&self) -> String {
        match self.peek() {
            Some(t) => format!("`{}`", t.text()),
            None => "end of input".into(),
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error(format!("expected a name, found {}", self.describe()))),
        }
    }

    fn int(&mut self) -> PResult<i64> {
        let neg = self.is_sym("-");
        if neg {
            self.pos += 1;
        }
        match self.peek() {
            Some(Tok::Int(s)) => {
                let v: i64 = s.parse().map_err(|_| self.error("integer out of range"))?;
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.error(format!("expected an integer, found {}", self.describe()))),
        }
    }

    /// Token text up to a top-level delimiter, concatenated without spaces.
    fn raw_until(&mut self, delims: &[&str]) -> PResult<String> {
        let mut depth = 0i32;
        let mut out = String::new();
        while let Some(t) = self.peek() {
            if depth == 0 {
                if let Tok::Sym(s) = t {
                    if delims.contains(s) || *s == ";" {
                        break;
                    }
                }
            }
            match t {
                Tok::Sym("(") | Tok::Sym("[") => depth += 1,
                Tok::Sym(")") | Tok::Sym("]") => depth -= 1,
                _ => {}
            }
            if depth < 0 {
                break;
            }
            out.push_str(&t.text());
            self.pos += 1;
        }
        if out.is_empty() {
            return Err(self.error(format!("expected an expression, found {}", self.describe())));
        }
        Ok(out)
    }

    fn raw_list(&mut self, close: &str) -> PResult<Vec<String>> {
        let mut out = vec![self.raw_until(&[",", close])?];
        while self.is_sym(",") {
            self.pos += 1;
            out.push(self.raw_until(&[",", close])?);
        }
        Ok(out)
    }

    fn statement(&mut self) -> PResult<Statement> {
        let first = &self.toks[self.pos];
        let (line, col, start) = (first.line, first.col, first.start);
        let keyword = match &first.tok {
            Tok::Ident(s) => s.clone(),
            _ => return Err(self.error(format!("expected a declaration or command, found {}", self.describe()))),
        };
        let kind = match keyword.as_str() {
            "ring" => self.ring()?,
            "ideal" => self.ideal()?,
            "module" => {
                self.pos += 1;
                let name = self.ident()?;
                self.expect_sym("=")?;
                StatementKind::Module { name, expr: self.module_expr()? }
            }
            "family" => {
                self.pos += 1;
                let name = self.ident()?;
                self.expect_sym("(")?;
                let param = self.ident()?;
                self.expect_sym(")")?;
                self.expect_sym("=")?;
                StatementKind::Family { name, param, expr: self.module_expr()? }
            }
            "complex" => {
                self.pos += 1;
                let name = self.ident()?;
                self.expect_sym("=")?;
                StatementKind::Complex { name, expr: self.complex_expr()? }
            }
            "group" => self.group()?,
            "action" => self.action()?,
            "skewed" => self.skewed()?,
            _ => self.command(start)?,
        };
        self.expect_sym(";")?;
        Ok(Statement { kind, line, col })
    }

    fn ring(&mut self) -> PResult<StatementKind> {
        self.pos += 1;
        let name = self.ident()?;
        self.expect_sym("=")?;
        self.expect_word("Q")?;
        self.expect_sym("[")?;
        let mut vars = Vec::new();
        loop {
            let v = self.ident()?;
            self.expect_sym(":")?;
            let d = self.int()?;
            vars.push((v, d));
            if self.is_sym(",") {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.expect_sym("]")?;
        let mut relations = Vec::new();
        if self.is_sym("/") {
            self.pos += 1;
            self.expect_sym("(")?;
            relations = self.raw_list(")")?;
            self.expect_sym(")")?;
        }
        self.current_ring = Some(name.clone());
        Ok(StatementKind::Ring { name, vars, relations })
    }

    fn ideal(&mut self) -> PResult<StatementKind> {
        self.pos += 1;
        let name = self.ident()?;
        self.expect_sym("=")?;
        self.expect_sym("(")?;
        let generators = self.raw_list(")")?;
        self.expect_sym(")")?;
        let ring = if self.is_word("in") {
            self.pos += 1;
            self.ident()?
        } else {
            self.current_ring.clone().ok_or_else(|| self.error("ideal declared before any ring"))?
        };
        Ok(StatementKind::Ideal { name, ring, generators })
    }

    fn free_terms(&mut self) -> PResult<Vec<FreeTerm>> {
        let mut out = vec![self.free_term()?];
        while self.is_sym("+") {
            self.pos += 1;
            out.push(self.free_term()?);
        }
        Ok(out)
    }

    fn free_term(&mut self) -> PResult<FreeTerm> {
        let ring = self.ident()?;
        self.expect_sym("(")?;
        let shift = self.raw_until(&[")"])?;
        self.expect_sym(")")?;
        let count = if self.is_sym("^") {
            self.pos += 1;
            match self.next()? {
                Tok::Int(s) | Tok::Ident(s) => s,
                Tok::Sym("(") => {
                    let e = self.raw_until(&[")"])?;
                    self.expect_sym(")")?;
                    format!("({e})")
                }
                t => return Err(self.error(format!("expected a generator count, found `{}`", t.text()))),
            }
        } else {
            "1".into()
        };
        Ok(FreeTerm { ring, shift, count })
    }

    fn call_args<T>(&mut self, mut f: impl FnMut(&mut Self, usize) -> PResult<T>, n: usize) -> PResult<Vec<T>> {
        self.expect_sym("(")?;
        let mut out = Vec::new();
        for i in 0..n {
            if i > 0 {
                self.expect_sym(",")?;
            }
            out.push(f(self, i)?);
        }
        self.expect_sym(")")?;
        Ok(out)
    }

    fn module_expr(&mut self) -> PResult<ModuleExpr> {
        let word = self.ident()?;
        let call = self.is_sym("(");
        match word.as_str() {
            "coker" => {
                let target = self.free_terms()?;
                self.expect_sym("<-")?;
                let source = self.free_terms()?;
                self.expect_sym("[")?;
                let mut matrix = Vec::new();
                loop {
                    let mut row = vec![self.raw_until(&[",", ";", "]"])?];
                    while self.is_sym(",") {
                        self.pos += 1;
                        row.push(self.raw_until(&[",", ";", "]"])?);
                    }
                    matrix.push(row);
                    if self.is_sym(";") {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                self.expect_sym("]")?;
                Ok(ModuleExpr::Coker { target, source, matrix })
            }
            "free" => Ok(ModuleExpr::Free(self.free_terms()?)),
            "residue" if call => Ok(ModuleExpr::Residue(self.call_args(|p, _| p.ident(), 1)?.remove(0))),
            "quotient" if call => Ok(ModuleExpr::Quotient(self.call_args(|p, _| p.ident(), 1)?.remove(0))),
            "sum" | "tensor" if call => {
                let mut v = self.call_args(|p, _| p.module_expr(), 2)?;
                let (b, a) = (v.pop().unwrap(), v.pop().unwrap());
                Ok(if word == "sum" { ModuleExpr::Sum(a.into(), b.into()) } else { ModuleExpr::Tensor(a.into(), b.into()) })
            }
            "shift" if call => {
                self.expect_sym("(")?;
                let a = self.module_expr()?;
                self.expect_sym(",")?;
                let k = self.raw_until(&[")"])?;
                self.expect_sym(")")?;
                Ok(ModuleExpr::Shift(a.into(), k))
            }
            _ if call => Err(self.error(format!("unknown module constructor `{word}`"))),
            _ => Ok(ModuleExpr::Name(word)),
        }
    }

    fn complex_expr(&mut self) -> PResult<ComplexExpr> {
        let word = self.ident()?;
        let call = self.is_sym("(");
        match word.as_str() {
            "koszul" if call => {
                self.expect_sym("(")?;
                let ideal = self.ident()?;
                let mut power = 1;
                if self.is_sym(",") {
                    self.pos += 1;
                    let p = self.int()?;
                    power = u32::try_from(p).ok().filter(|p| *p >= 1).ok_or_else(|| self.error("Koszul power must be positive"))?;
                }
                self.expect_sym(")")?;
                Ok(ComplexExpr::Koszul { ideal, power })
            }
            "tensor" if call => {
                let mut v = self.call_args(|p, _| p.complex_expr(), 2)?;
                let (b, a) = (v.pop().unwrap(), v.pop().unwrap());
                Ok(ComplexExpr::Tensor(a.into(), b.into()))
            }
            "suspend" if call => {
                self.expect_sym("(")?;
                let a = self.complex_expr()?;
                self.expect_sym(",")?;
                let k = self.int()?;
                self.expect_sym(")")?;
                Ok(ComplexExpr::Suspend(a.into(), k))
            }
            _ if call => Err(self.error(format!("unknown complex constructor `{word}`"))),
            _ => Ok(ComplexExpr::Name(word)),
        }
    }

    fn group(&mut self) -> PResult<StatementKind> {
        self.pos += 1;
        let name = self.ident()?;
        self.expect_sym("=")?;
        let kind = self.ident()?;
        let group = match kind.as_str() {
            "trivial" => GroupSpec::Trivial,
            "cyclic" | "symmetric" => {
                self.expect_sym("(")?;
                let n = self.int()?;
                self.expect_sym(")")?;
                let n = usize::try_from(n).ok().filter(|n| *n >= 1).ok_or_else(|| self.error("group size must be positive"))?;
                if kind == "cyclic" {
                    GroupSpec::Cyclic(n)
                } else {
                    GroupSpec::Symmetric(n)
                }
            }
            _ => return Err(self.error(format!("unknown group `{kind}`; expected trivial, cyclic(n) or symmetric(n)"))),
        };
        Ok(StatementKind::Group { name, group })
    }

    fn action(&mut self) -> PResult<StatementKind> {
        self.pos += 1;
        let name = self.ident()?;
        self.expect_sym("=")?;
        let group = self.ident()?;
        self.expect_word("on")?;
        let ring = self.ident()?;
        let mut rules = Vec::new();
        if self.is_sym("[") {
            self.pos += 1;
            loop {
                let element = self.raw_until(&[":"])?;
                self.expect_sym(":")?;
                let mut images = Vec::new();
                loop {
                    let v = self.ident()?;
                    self.expect_sym("->")?;
                    images.push((v, self.raw_until(&[",", ";", "]"])?));
                    if self.is_sym(",") {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                rules.push(ActionRule { element, images });
                if self.is_sym(";") {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            self.expect_sym("]")?;
        }
        Ok(StatementKind::Action { name, group, ring, rules })
    }

    fn skewed(&mut self) -> PResult<StatementKind> {
        self.pos += 1;
        let name = self.ident()?;
        self.expect_sym("=")?;
        let module = self.ident()?;
        self.expect_word("with")?;
        let action = self.ident()?;
        let rep = match self.ident()?.as_str() {
            "trivial" => RepSpec::Trivial,
            "sign" => RepSpec::Sign,
            "character" => {
                self.expect_sym("(")?;
                let v = self.raw_list(")")?;
                self.expect_sym(")")?;
                RepSpec::Character(v)
            }
            other => return Err(self.error(format!("unknown representation `{other}`"))),
        };
        Ok(StatementKind::Skewed { name, module, action, rep })
    }

    /// Everything up to the next `;`, read as a command line.
    fn command(&mut self, start: usize) -> PResult<StatementKind> {
        let (line, col) = (self.toks[self.pos].line, self.toks[self.pos].col);
        while self.peek().is_some() && !self.is_sym(";") {
            self.pos += 1;
        }
        let end = self.toks.get(self.pos).map_or(self.src.len(), |t| t.start);
        let words: Vec<&str> = self.src[start..end].split_whitespace().collect();
        let cmd = CommandLine::from_words(&words).map_err(|e| ScriptError { kind: ErrorKind::ParseError, line, col, message: e })?;
        Ok(StatementKind::Command(cmd))
    }
}

/// Syntax only; names and polynomials are checked when the script is
/// elaborated into a session.
pub fn parse_syntax(src: &str) -> Result<SessionScript, ScriptError> {
    let toks = lex(src);
    let mut p = Parser { src, toks, pos: 0, current_ring: None };
    let mut statements = Vec::new();
    while p.peek().is_some() {
        if p.is_sym(";") {
            p.pos += 1;
            continue;
        }
        statements.push(p.statement()?);
    }
    Ok(SessionScript { statements })
}
