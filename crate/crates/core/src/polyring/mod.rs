//! Graded polynomial rings ℚ[x₁,…,x_r]/J with positive variable degrees.
//!
//! Monomials are ordered by weighted degree, then reverse-lexicographically.
//! Quotient rings carry a frozen reduced Gröbner basis of `J`; every ring
//! operation returns elements in normal form with respect to it.
//!
//! Rings are strictly commutative. Odd-degree variables are accepted, but no
//! Koszul signs are applied to ring elements.

mod groebner;
mod parse;
mod poly;
mod syzygy;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

pub use groebner::{module_groebner, module_normal_form, s_pair_degrees, ModElem};
pub use parse::eval_int_expr;
pub use poly::{Mono, Poly};
pub use syzygy::{in_image, lift_along, minimal_generators, syzygies};

use crate::exactla::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("polynomial `{0}` is not homogeneous")]
    NotHomogeneous(String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("ideal generator `{0}` must be homogeneous of positive degree")]
    BadGenerator(String),
}

/// ℚ[x₁,…,x_r]/J, graded by positive integer variable degrees.
pub struct GradedPolyRing {
    names: Vec<String>,
    weights: Vec<i64>,
    relations: Vec<Poly>,
    gb: Vec<Poly>,
    basis_cache: Mutex<HashMap<i64, Arc<Vec<Mono>>>>,
}

impl fmt::Debug for GradedPolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl PartialEq for GradedPolyRing {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.weights == other.weights && self.gb == other.gb
    }
}

impl Eq for GradedPolyRing {}

impl fmt::Display for GradedPolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> =
            self.names.iter().zip(&self.weights).map(|(n, w)| format!("{n}:{w}")).collect();
        write!(f, "Q[{}]", vars.join(", "))?;
        if !self.relations.is_empty() {
            let rels: Vec<String> = self.relations.iter().map(|r| self.format_poly(r)).collect();
            write!(f, "/({})", rels.join(", "))?;
        }
        Ok(())
    }
}

impl GradedPolyRing {
    /// The polynomial ring on `(name, degree)` pairs.
    pub fn new<S: AsRef<str>>(vars: &[(S, i64)]) -> Result<Arc<Self>, PolyError> {
        Ok(Arc::new(Self::build(vars)?))
    }

    fn build<S: AsRef<str>>(vars: &[(S, i64)]) -> Result<Self, PolyError> {
        let mut names = Vec::new();
        let mut weights = Vec::new();
        for (n, d) in vars {
            let n = n.as_ref();
            if n.is_empty() || !n.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(PolyError::InvalidRing(format!("bad variable name `{n}`")));
            }
            if *d < 1 {
                return Err(PolyError::InvalidRing(format!("variable `{n}` has degree {d} < 1")));
            }
            if names.iter().any(|m: &String| m == n) {
                return Err(PolyError::InvalidRing(format!("duplicate variable `{n}`")));
            }
            names.push(n.to_string());
            weights.push(*d);
        }
        Ok(GradedPolyRing {
            names,
            weights,
            relations: Vec::new(),
            gb: Vec::new(),
            basis_cache: Mutex::new(HashMap::new()),
        })
    }

    /// The quotient of the polynomial ring on `vars` by homogeneous relations
    /// given in text syntax.
    pub fn quotient<S: AsRef<str>, T: AsRef<str>>(vars: &[(S, i64)], relations: &[T]) -> Result<Arc<Self>, PolyError> {
        let base = Self::build(vars)?;
        let rels = relations
            .iter()
            .map(|r| base.parse_poly(r.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::with_relations(base, rels)
    }

    fn with_relations(mut base: Self, relations: Vec<Poly>) -> Result<Arc<Self>, PolyError> {
        for r in &relations {
            match r.degree() {
                Some(d) if d > 0 => {}
                _ if r.is_zero() => {}
                _ => return Err(PolyError::NotHomogeneous(base.format_poly(r))),
            }
        }
        let relations: Vec<Poly> = relations.into_iter().filter(|r| !r.is_zero()).collect();
        base.gb = groebner::poly_groebner(&relations, &base.weights);
        base.relations = relations;
        Ok(Arc::new(base))
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.names
    }

    pub fn var_degrees(&self) -> &[i64] {
        &self.weights
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    /// Reduced Gröbner basis of the defining ideal `J`.
    pub fn relation_basis(&self) -> &[Poly] {
        &self.gb
    }

    pub fn is_polynomial_ring(&self) -> bool {
        self.gb.is_empty()
    }

    pub fn mono(&self, exps: Vec<u32>) -> Mono {
        Mono::new(exps, &self.weights)
    }

    pub fn var_mono(&self, i: usize) -> Mono {
        let mut e = vec![0; self.nvars()];
        e[i] = 1;
        self.mono(e)
    }

    pub fn var(&self, i: usize) -> Poly {
        self.reduce(&Poly::monomial(self.var_mono(i)))
    }

    pub fn one(&self) -> Poly {
        Poly::constant(Rational::one(), self.nvars())
    }

    pub fn constant(&self, c: Rational) -> Poly {
        Poly::constant(c, self.nvars())
    }

    /// Normal form modulo the relations.
    pub fn reduce(&self, p: &Poly) -> Poly {
        if self.gb.is_empty() {
            p.clone()
        } else {
            groebner::poly_normal_form(p, &self.gb)
        }
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&a.mul_raw(b))
    }

    pub fn mul_mono(&self, m: &Mono, p: &Poly) -> Poly {
        self.reduce(&p.mul_term(m, &Rational::one()))
    }

    pub fn pow(&self, p: &Poly, e: u32) -> Poly {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, p);
        }
        self.reduce(&acc)
    }

    /// Standard monomials of weighted degree `d`: a basis of the degree-`d`
    /// piece of the ring, in increasing term order.
    pub fn standard_monomials(&self, d: i64) -> Arc<Vec<Mono>> {
        if let Some(b) = self.basis_cache.lock().unwrap().get(&d) {
            return b.clone();
        }
        let mut out = Vec::new();
        if d >= 0 {
            let mut exps = vec![0u32; self.nvars()];
            self.enumerate(0, d, &mut exps, &mut out);
        }
        let lead: Vec<&Mono> = self.gb.iter().filter_map(Poly::leading_mono).collect();
        out.retain(|m| !lead.iter().any(|l| l.divides(m)));
        out.sort();
        let out = Arc::new(out);
        self.basis_cache.lock().unwrap().insert(d, out.clone());
        out
    }

    fn enumerate(&self, i: usize, rest: i64, exps: &mut Vec<u32>, out: &mut Vec<Mono>) {
        if i == self.nvars() {
            if rest == 0 {
                out.push(self.mono(exps.clone()));
            }
            return;
        }
        let w = self.weights[i];
        let mut e = 0;
        while e as i64 * w <= rest {
            exps[i] = e;
            self.enumerate(i + 1, rest - e as i64 * w, exps, out);
            e += 1;
        }
        exps[i] = 0;
    }

    /// dim_ℚ of the degree-`d` piece; zero for `d < 0`.
    pub fn degree_piece_dim(&self, d: i64) -> usize {
        self.standard_monomials(d).len()
    }

    pub fn parse_poly(&self, s: &str) -> Result<Poly, PolyError> {
        self.parse_poly_with(s, &BTreeMap::new())
    }

    pub fn parse_poly_with(&self, s: &str, params: &BTreeMap<String, i64>) -> Result<Poly, PolyError> {
        parse::parse_poly(self, s, params).map(|p| self.reduce(&p))
    }

    pub fn parse_homogeneous(&self, s: &str, params: &BTreeMap<String, i64>) -> Result<Poly, PolyError> {
        let p = self.parse_poly_with(s, params)?;
        if !p.is_homogeneous() {
            return Err(PolyError::NotHomogeneous(s.to_string()));
        }
        Ok(p)
    }

    /// Ring endomorphism sending variable `i` to `images[i]`.
    pub fn substitute(&self, p: &Poly, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars());
        let mut out = Poly::zero();
        for (m, c) in p.terms() {
            let mut t = self.constant(c.clone());
            for (i, e) in m.exps().iter().enumerate() {
                for _ in 0..*e {
                    t = self.mul(&t, &images[i]);
                }
            }
            out = out.add(&t);
        }
        self.reduce(&out)
    }

    pub fn format_mono(&self, m: &Mono) -> String {
        let parts: Vec<String> = m
            .exps()
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, e)| if *e == 1 { self.names[i].clone() } else { format!("{}^{}", self.names[i], e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn format_poly(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in p.terms().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&self.format_mono(m));
            } else {
                out.push_str(&format!("{}*{}", a, self.format_mono(m)));
            }
        }
        out
    }
}

/// A homogeneous ideal of a graded ring, generated in positive degrees.
#[derive(Clone, Debug)]
pub struct HomIdeal {
    ring: Arc<GradedPolyRing>,
    generators: Vec<Poly>,
}

impl HomIdeal {
    pub fn new(ring: Arc<GradedPolyRing>, generators: Vec<Poly>) -> Result<Self, PolyError> {
        for g in &generators {
            match g.degree() {
                Some(d) if d > 0 => {}
                _ => return Err(PolyError::BadGenerator(ring.format_poly(g))),
            }
        }
        Ok(HomIdeal { ring, generators })
    }

    pub fn parse<S: AsRef<str>>(ring: &Arc<GradedPolyRing>, gens: &[S]) -> Result<Self, PolyError> {
        let gens = gens.iter().map(|g| ring.parse_poly(g.as_ref())).collect::<Result<Vec<_>, _>>()?;
        Self::new(ring.clone(), gens)
    }

    /// The ideal generated by all ring variables.
    pub fn augmentation(ring: &Arc<GradedPolyRing>) -> Self {
        let gens = (0..ring.nvars()).map(|i| ring.var(i)).filter(|p| !p.is_zero()).collect();
        HomIdeal { ring: ring.clone(), generators: gens }
    }

    pub fn ring(&self) -> &Arc<GradedPolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn generator_degrees(&self) -> Vec<i64> {
        self.generators.iter().map(|g| g.degree().unwrap()).collect()
    }

    /// Generators of the `s`-th power (all products of `s` generators).
    pub fn power_generators(&self, s: u32) -> Vec<Poly> {
        let n = self.generators.len();
        let mut out = Vec::new();
        let mut counts = vec![0u32; n];
        fn rec(k: usize, rest: u32, counts: &mut Vec<u32>, ideal: &HomIdeal, out: &mut Vec<Poly>) {
            if k + 1 == counts.len() {
                counts[k] = rest;
                let ring = &ideal.ring;
                let mut p = ring.one();
                for (g, c) in ideal.generators.iter().zip(counts.iter()) {
                    p = ring.mul(&p, &ring.pow(g, *c));
                }
                if !p.is_zero() && !out.contains(&p) {
                    out.push(p);
                }
                return;
            }
            for c in 0..=rest {
                counts[k] = c;
                rec(k + 1, rest - c, counts, ideal, out);
            }
        }
        if n == 0 {
            return if s == 0 { vec![self.ring.one()] } else { Vec::new() };
        }
        rec(0, s, &mut counts, self, &mut out);
        out
    }
}

/// Division remainder of `f` by the list `g`.
pub fn normal_form(f: &Poly, g: &[Poly]) -> Poly {
    groebner::poly_normal_form(f, g)
}

/// Reduced Gröbner basis (monic, sorted by leading monomial) of the
/// preimage of the ideal in the ambient polynomial ring, i.e. of `I + J`.
pub fn buchberger(ideal: &HomIdeal) -> Vec<Poly> {
    let ring = ideal.ring();
    let mut gens = ideal.generators().to_vec();
    gens.extend(ring.relation_basis().iter().cloned());
    groebner::poly_groebner(&gens, ring.var_degrees())
}

#[cfg(test)]
mod tests;
