use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::exactla::Rational;

/// A monomial with its weighted degree cached.
///
/// Ordered by weighted degree, ties broken reverse-lexicographically
/// (the smaller exponent in the last differing variable is the larger
/// monomial). Monomials are only ever compared within one ring.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono {
    deg: i64,
    exps: Box<[u32]>,
}

impl Mono {
    pub fn new(exps: Vec<u32>, weights: &[i64]) -> Self {
        assert_eq!(exps.len(), weights.len());
        let deg = exps.iter().zip(weights).map(|(e, w)| *e as i64 * w).sum();
        Mono { deg, exps: exps.into_boxed_slice() }
    }

    pub fn one(nvars: usize) -> Self {
        Mono { deg: 0, exps: vec![0; nvars].into_boxed_slice() }
    }

    pub fn degree(&self) -> i64 {
        self.deg
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|e| *e == 0)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono {
            deg: self.deg + other.deg,
            exps: self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Mono) -> Mono {
        Mono {
            deg: other.deg - self.deg,
            exps: self.exps.iter().zip(other.exps.iter()).map(|(a, b)| b - a).collect(),
        }
    }

    pub fn lcm(&self, other: &Mono, weights: &[i64]) -> Mono {
        Mono::new(
            self.exps.iter().zip(other.exps.iter()).map(|(a, b)| *a.max(b)).collect(),
            weights,
        )
    }

    pub fn coprime(&self, other: &Mono) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| {
            for (a, b) in self.exps.iter().zip(other.exps.iter()).rev() {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

/// A polynomial: monomial → nonzero coefficient. The leading term is the
/// largest key.
#[derive(Clone, PartialEq, Eq, Debug, Default, Hash)]
pub struct Poly {
    terms: BTreeMap<Mono, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn constant(c: Rational, nvars: usize) -> Self {
        Self::term(Mono::one(nvars), c)
    }

    pub fn term(m: Mono, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn monomial(m: Mono) -> Self {
        Self::term(m, Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Mono) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<(&Mono, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_mono(&self) -> Option<&Mono> {
        self.terms.keys().next_back()
    }

    /// Degree of a nonzero homogeneous polynomial.
    pub fn degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(Mono::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn add_term(&mut self, m: Mono, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    /// `self += c · m · other`
    pub fn add_scaled_shifted(&mut self, c: &Rational, m: &Mono, other: &Poly) {
        for (om, oc) in &other.terms {
            self.add_term(m.mul(om), &(c * oc));
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul_term(&self, m: &Mono, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(om, v)| (m.mul(om), v * c)).collect() }
    }

    /// Product in the free polynomial ring (no reduction modulo relations).
    pub fn mul_raw(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_scaled_shifted(c, m, other);
        }
        out
    }

    /// Scales so the leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.recip()),
            None => Poly::zero(),
        }
    }
}
