use std::collections::BTreeMap;
use std::sync::Arc;

use super::free::{FreeGraded, PolyMatrix};
use super::module::{induced_piece_map, FPGradedModule, ModulePiece, Window};
use super::GradedError;
use crate::exactla::{kernel, QuotientSpace, Rational, SparseMatrix, SparseVec, Subspace};
use crate::polyring::{minimal_generators, syzygies, GradedPolyRing, Poly};

/// A bounded chain complex of finitely presented graded modules whose
/// differentials lower homological degree by one and preserve internal
/// degree. Differentials are given on the free covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    lo: i64,
    objects: Vec<FPGradedModule>,
    diffs: Vec<PolyMatrix>,
}

/// A finite-dimensional chain complex of ℚ-vector spaces.
#[derive(Clone, Debug)]
pub struct LinComplex {
    lo: i64,
    dims: Vec<usize>,
    diffs: Vec<SparseMatrix>,
}

/// A complex evaluated in one internal degree, with the module pieces that
/// fix its coordinates.
#[derive(Clone, Debug)]
pub struct EvaluatedComplex {
    pub degree: i64,
    pub lin: LinComplex,
    pub pieces: Vec<ModulePiece>,
}

/// `H_n` of a [`LinComplex`]: cycles, and the quotient of their coordinates
/// by the boundaries.
#[derive(Clone, Debug)]
pub struct HomologyPiece {
    cycles: Subspace,
    quotient: QuotientSpace,
}

/// Homology dimensions indexed by `(homological degree, internal degree)`.
pub type HomologyTable = BTreeMap<(i64, i64), usize>;

/// A degree-zero chain map, given on free covers in each homological degree.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    maps: BTreeMap<i64, PolyMatrix>,
}

fn zero_module(ring: &Arc<GradedPolyRing>) -> FPGradedModule {
    FPGradedModule::free(FreeGraded::zero(ring.clone()))
}

/// Whether every column of `a` vanishes in the module `m`.
fn columns_vanish_in(a: &PolyMatrix, m: &FPGradedModule) -> bool {
    (0..a.source().rank()).all(|j| m.is_zero_element(a.column(j), a.source().degree(j)))
}

/// Assembles a map between direct sums from blocks `(source index, target index, block)`.
fn assemble(sources: &[FreeGraded], targets: &[FreeGraded], blocks: &[(usize, usize, PolyMatrix)], ring: &Arc<GradedPolyRing>) -> PolyMatrix {
    let mut toff = vec![0];
    for t in targets {
        toff.push(toff.last().unwrap() + t.rank());
    }
    let total = *toff.last().unwrap();
    let mut source = FreeGraded::zero(ring.clone());
    let mut target = FreeGraded::zero(ring.clone());
    for t in targets {
        target = target.direct_sum(t);
    }
    let mut columns = Vec::new();
    for (si, s) in sources.iter().enumerate() {
        source = source.direct_sum(s);
        for j in 0..s.rank() {
            let mut col = vec![Poly::zero(); total];
            for (bs, bt, b) in blocks {
                if *bs != si {
                    continue;
                }
                for (i, p) in b.column(j).iter().enumerate() {
                    if !p.is_zero() {
                        col[toff[*bt] + i] = col[toff[*bt] + i].add(p);
                    }
                }
            }
            columns.push(col);
        }
    }
    PolyMatrix::new(source, target, columns).expect("blocks are homogeneous")
}

/// The rows of `m` belonging to the leading summand `head` of its target.
fn top_rows(m: &PolyMatrix, head: &FreeGraded) -> PolyMatrix {
    let columns = m.columns().iter().map(|c| c[..head.rank()].to_vec()).collect();
    PolyMatrix::new(m.source().clone(), head.clone(), columns).expect("rows of a homogeneous map")
}

impl ChainComplex {
    /// `objects[k]` sits in homological degree `lo + k`; `diffs[k]` maps
    /// the generators of `objects[k + 1]` to those of `objects[k]`.
    pub fn new(lo: i64, objects: Vec<FPGradedModule>, diffs: Vec<PolyMatrix>) -> Result<Self, GradedError> {
        let c = Self::new_unchecked(lo, objects, diffs)?;
        c.validate()?;
        Ok(c)
    }

    fn new_unchecked(lo: i64, objects: Vec<FPGradedModule>, diffs: Vec<PolyMatrix>) -> Result<Self, GradedError> {
        if objects.is_empty() {
            return Err(GradedError::Shape("a complex needs at least one object".into()));
        }
        if diffs.len() + 1 != objects.len() {
            return Err(GradedError::Shape(format!("{} objects need {} differentials", objects.len(), objects.len() - 1)));
        }
        let ring = objects[0].ring().clone();
        for (k, d) in diffs.iter().enumerate() {
            if objects[k].ring() != &ring || d.ring() != &ring {
                return Err(GradedError::RingMismatch);
            }
            if d.source() != objects[k + 1].generators() || d.target() != objects[k].generators() {
                return Err(GradedError::Shape(format!("differential out of degree {} has the wrong shape", lo + k as i64 + 1)));
            }
        }
        if objects.last().unwrap().ring() != &ring {
            return Err(GradedError::RingMismatch);
        }
        Ok(ChainComplex { lo, objects, diffs })
    }

    /// Checks that differentials respect the presentations and square to zero.
    pub fn validate(&self) -> Result<(), GradedError> {
        for (k, d) in self.diffs.iter().enumerate() {
            let n = self.lo + k as i64 + 1;
            if !columns_vanish_in(&d.compose(self.objects[k + 1].relations()), &self.objects[k]) {
                return Err(GradedError::NotWellDefined(format!("differential out of degree {n}")));
            }
            if k + 1 < self.diffs.len() && !columns_vanish_in(&d.compose(&self.diffs[k + 1]), &self.objects[k]) {
                return Err(GradedError::NotAComplex(n + 1));
            }
        }
        Ok(())
    }

    /// A complex of free modules: `base` in degree `lo`, then the sources
    /// of successive differentials.
    pub fn from_free_maps(lo: i64, base: FreeGraded, diffs: Vec<PolyMatrix>) -> Result<Self, GradedError> {
        let mut objects = vec![FPGradedModule::free(base)];
        for d in &diffs {
            objects.push(FPGradedModule::free(d.source().clone()));
        }
        Self::new(lo, objects, diffs)
    }

    /// `m` concentrated in homological degree `n`.
    pub fn concentrated(m: FPGradedModule, n: i64) -> Self {
        ChainComplex { lo: n, objects: vec![m], diffs: Vec::new() }
    }

    pub fn ring(&self) -> &Arc<GradedPolyRing> {
        self.objects[0].ring()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.objects.len() as i64 - 1
    }

    pub fn object(&self, n: i64) -> Option<&FPGradedModule> {
        if n < self.lo {
            return None;
        }
        self.objects.get((n - self.lo) as usize)
    }

    /// The object in degree `n`, or the zero module outside the range.
    pub fn object_or_zero(&self, n: i64) -> FPGradedModule {
        self.object(n).cloned().unwrap_or_else(|| zero_module(self.ring()))
    }

    pub fn generators(&self, n: i64) -> FreeGraded {
        self.object(n).map_or_else(|| FreeGraded::zero(self.ring().clone()), |m| m.generators().clone())
    }

    /// The differential `C_n → C_{n−1}` (zero outside the range).
    pub fn diff(&self, n: i64) -> PolyMatrix {
        if n > self.lo && n <= self.hi() {
            self.diffs[(n - self.lo - 1) as usize].clone()
        } else {
            PolyMatrix::zero(self.generators(n), self.generators(n - 1))
        }
    }

    pub fn objects(&self) -> &[FPGradedModule] {
        &self.objects
    }

    pub fn is_free(&self) -> bool {
        self.objects.iter().all(FPGradedModule::is_free)
    }

    pub fn evaluate(&self, d: i64) -> EvaluatedComplex {
        let pieces: Vec<ModulePiece> = self.objects.iter().map(|m| m.evaluate(d)).collect();
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(k, a)| induced_piece_map(a, &pieces[k + 1], &pieces[k]))
            .collect();
        let dims = pieces.iter().map(ModulePiece::dim).collect();
        EvaluatedComplex { degree: d, lin: LinComplex { lo: self.lo, dims, diffs }, pieces }
    }

    /// Homology dimensions for every homological degree and every internal
    /// degree in the window.
    pub fn homology(&self, w: Window) -> HomologyTable {
        let mut out = HomologyTable::new();
        for d in w.degrees() {
            let lin = self.evaluate(d).lin;
            for n in self.lo..=self.hi() {
                out.insert((n, d), lin.homology(n).dim());
            }
        }
        out
    }

    /// Per internal degree, `Σ (−1)^n dim C_n`.
    /// `H_n` as a finitely presented module: cycles on the free cover modulo
    /// boundaries and relations.
    pub fn homology_module(&self, n: i64) -> Result<FPGradedModule, GradedError> {
        let ring = self.ring().clone();
        let f = self.generators(n);
        if f.rank() == 0 {
            return Ok(zero_module(&ring));
        }
        let out = self.diff(n).hconcat(self.object_or_zero(n - 1).relations());
        let cycles = if out.target().rank() == 0 {
            PolyMatrix::identity(&f)
        } else {
            minimal_generators(&top_rows(&syzygies(&out), &f))
        };
        if cycles.source().rank() == 0 {
            return Ok(zero_module(&ring));
        }
        let inner = cycles.hconcat(&self.diff(n + 1)).hconcat(self.object_or_zero(n).relations());
        let relations = top_rows(&syzygies(&inner), cycles.source());
        Ok(FPGradedModule::new(minimal_generators(&relations)))
    }

    pub fn euler_characteristic(&self, d: i64) -> i64 {
        (self.lo..=self.hi())
            .map(|n| {
                let dim = self.object(n).unwrap().dim(d) as i64;
                if n.rem_euclid(2) == 0 {
                    dim
                } else {
                    -dim
                }
            })
            .sum()
    }

    /// Internal shift `Σ^k` applied to every object.
    pub fn shift_internal(&self, k: i64) -> Self {
        ChainComplex {
            lo: self.lo,
            objects: self.objects.iter().map(|m| m.shift(k)).collect(),
            diffs: self.diffs.iter().map(|d| d.shift(k)).collect(),
        }
    }

    /// Homological suspension: `(Σ^k C)_n = C_{n−k}` with differential `(−1)^k d`.
    pub fn suspend(&self, k: i64) -> Self {
        let sign = if k.rem_euclid(2) == 0 { Rational::one() } else { -Rational::one() };
        ChainComplex {
            lo: self.lo + k,
            objects: self.objects.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(&sign)).collect(),
        }
    }

    /// Total complex of `C ⊗_R D` with the sign `d(c ⊗ e) = dc ⊗ e + (−1)^p c ⊗ de`.
    pub fn tensor(&self, other: &ChainComplex) -> Result<Self, GradedError> {
        if self.ring() != other.ring() {
            return Err(GradedError::RingMismatch);
        }
        let ring = self.ring().clone();
        let lo = self.lo + other.lo;
        let hi = self.hi() + other.hi();
        let pairs = |n: i64| -> Vec<(i64, i64)> {
            (self.lo..=self.hi()).filter(|p| (other.lo..=other.hi()).contains(&(n - p))).map(|p| (p, n - p)).collect()
        };
        let mut objects = Vec::new();
        for n in lo..=hi {
            let mut obj = zero_module(&ring);
            for (p, q) in pairs(n) {
                obj = obj.direct_sum(&self.object(p).unwrap().tensor(other.object(q).unwrap())?)?;
            }
            objects.push(obj);
        }
        let mut diffs = Vec::new();
        for n in lo + 1..=hi {
            let src_pairs = pairs(n);
            let tgt_pairs = pairs(n - 1);
            let sources: Vec<FreeGraded> =
                src_pairs.iter().map(|(p, q)| self.generators(*p).tensor(&other.generators(*q))).collect();
            let targets: Vec<FreeGraded> =
                tgt_pairs.iter().map(|(p, q)| self.generators(*p).tensor(&other.generators(*q))).collect();
            let mut blocks = Vec::new();
            for (si, &(p, q)) in src_pairs.iter().enumerate() {
                if let Some(ti) = tgt_pairs.iter().position(|&t| t == (p - 1, q)) {
                    blocks.push((si, ti, self.diff(p).tensor(&PolyMatrix::identity(&other.generators(q)))));
                }
                if let Some(ti) = tgt_pairs.iter().position(|&t| t == (p, q - 1)) {
                    let sign = if p.rem_euclid(2) == 0 { Rational::one() } else { -Rational::one() };
                    blocks.push((si, ti, PolyMatrix::identity(&self.generators(p)).tensor(&other.diff(q)).scale(&sign)));
                }
            }
            diffs.push(assemble(&sources, &targets, &blocks, &ring));
        }
        Self::new_unchecked(lo, objects, diffs)
    }

    /// `C ⊗_R M` for a module `M` placed in degree 0.
    pub fn tensor_module(&self, m: &FPGradedModule) -> Result<Self, GradedError> {
        self.tensor(&ChainComplex::concentrated(m.clone(), 0))
    }

    /// `Hom_R(C, R)` for a complex of free modules: degree `−n` holds the
    /// dual of `C_n`, with transposed differentials.
    pub fn dual(&self) -> Result<Self, GradedError> {
        if !self.is_free() {
            return Err(GradedError::NotFree);
        }
        let ring = self.ring().clone();
        let dual_free = |f: FreeGraded| FreeGraded::new(ring.clone(), f.degrees().iter().map(|d| -d).collect());
        let lo = -self.hi();
        let mut objects = Vec::new();
        let mut diffs = Vec::new();
        for m in lo..=-self.lo {
            objects.push(FPGradedModule::free(dual_free(self.generators(-m))));
            if m > lo {
                diffs.push(self.diff(-m + 1).transpose());
            }
        }
        Self::new_unchecked(lo, objects, diffs)
    }
}

impl LinComplex {
    pub fn new(lo: i64, dims: Vec<usize>, diffs: Vec<SparseMatrix>) -> Self {
        assert_eq!(dims.len(), diffs.len() + 1);
        LinComplex { lo, dims, diffs }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn dim(&self, n: i64) -> usize {
        if n < self.lo || n > self.hi() {
            0
        } else {
            self.dims[(n - self.lo) as usize]
        }
    }

    /// The differential `C_n → C_{n−1}`.
    pub fn diff(&self, n: i64) -> SparseMatrix {
        if n > self.lo && n <= self.hi() {
            self.diffs[(n - self.lo - 1) as usize].clone()
        } else {
            SparseMatrix::zero(self.dim(n - 1), self.dim(n))
        }
    }

    pub fn is_complex(&self) -> bool {
        (self.lo + 2..=self.hi()).all(|n| self.diff(n - 1).compose(&self.diff(n)).is_zero())
    }

    pub fn homology(&self, n: i64) -> HomologyPiece {
        let cycles = kernel(&self.diff(n));
        let boundaries = self.diff(n + 1);
        let coords: Vec<SparseVec> = boundaries
            .columns()
            .iter()
            .map(|b| cycles.coords(b).expect("d∘d = 0"))
            .collect();
        let quotient = QuotientSpace::new(Subspace::span(cycles.dim(), &coords));
        HomologyPiece { cycles, quotient }
    }
}

impl HomologyPiece {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn cycles(&self) -> &Subspace {
        &self.cycles
    }

    /// Homology class of a cycle, in homology coordinates.
    pub fn class_of(&self, z: &SparseVec) -> SparseVec {
        let c = self.cycles.coords(z).expect("not a cycle");
        self.quotient.project(&c)
    }

    /// A cycle representing basis class `i`.
    pub fn representative(&self, i: usize) -> SparseVec {
        let k = self.quotient.representative(i);
        self.cycles.basis().nth(k).expect("cycle index").clone()
    }

    /// Matrix of the map induced by a chain-level map `f` into `target`.
    pub fn induced(&self, f: &SparseMatrix, target: &HomologyPiece) -> SparseMatrix {
        let cols = (0..self.dim()).map(|i| target.class_of(&f.apply(&self.representative(i)))).collect();
        SparseMatrix::from_columns(target.dim(), cols)
    }
}

impl ChainMap {
    pub fn new(source: ChainComplex, target: ChainComplex, maps: BTreeMap<i64, PolyMatrix>) -> Result<Self, GradedError> {
        if source.ring() != target.ring() {
            return Err(GradedError::RingMismatch);
        }
        let f = ChainMap { source, target, maps };
        for (n, a) in &f.maps {
            if a.source() != &f.source.generators(*n) || a.target() != &f.target.generators(*n) {
                return Err(GradedError::Shape(format!("chain map component in degree {n} has the wrong shape")));
            }
            if !columns_vanish_in(&a.compose(f.source.object_or_zero(*n).relations()), &f.target.object_or_zero(*n)) {
                return Err(GradedError::NotWellDefined(format!("chain map component in degree {n}")));
            }
        }
        let lo = f.source.lo().min(f.target.lo());
        let hi = f.source.hi().max(f.target.hi());
        for n in lo + 1..=hi {
            let lhs = f.target.diff(n).compose(&f.component(n));
            let rhs = f.component(n - 1).compose(&f.source.diff(n));
            let delta = lhs.add(&rhs.scale(&-Rational::one()));
            if !columns_vanish_in(&delta, &f.target.object_or_zero(n - 1)) {
                return Err(GradedError::NotChainMap(n));
            }
        }
        Ok(f)
    }

    /// Skips the well-definedness and commutation checks; for maps that
    /// hold by construction.
    pub fn new_unchecked(source: ChainComplex, target: ChainComplex, maps: BTreeMap<i64, PolyMatrix>) -> Self {
        ChainMap { source, target, maps }
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let maps = (c.lo()..=c.hi()).map(|n| (n, PolyMatrix::identity(&c.generators(n)))).collect();
        ChainMap { source: c.clone(), target: c.clone(), maps }
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> Self {
        ChainMap { source: source.clone(), target: target.clone(), maps: BTreeMap::new() }
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    /// The component in homological degree `n` (zero if absent).
    pub fn component(&self, n: i64) -> PolyMatrix {
        self.maps
            .get(&n)
            .cloned()
            .unwrap_or_else(|| PolyMatrix::zero(self.source.generators(n), self.target.generators(n)))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ChainMap) -> Result<ChainMap, GradedError> {
        if other.target != self.source {
            return Err(GradedError::Shape("composing incompatible chain maps".into()));
        }
        let maps = other
            .maps
            .keys()
            .filter(|n| self.maps.contains_key(n))
            .map(|&n| (n, self.component(n).compose(&other.component(n))))
            .collect();
        Ok(ChainMap { source: other.source.clone(), target: self.target.clone(), maps })
    }

    /// `f ⊗ id_D`.
    pub fn tensor_right(&self, d: &ChainComplex) -> Result<ChainMap, GradedError> {
        let source = self.source.tensor(d)?;
        let target = self.target.tensor(d)?;
        let ring = source.ring().clone();
        let mut maps = BTreeMap::new();
        for n in source.lo().min(target.lo())..=source.hi().max(target.hi()) {
            let spairs: Vec<(i64, i64)> = (self.source.lo()..=self.source.hi())
                .filter(|p| (d.lo()..=d.hi()).contains(&(n - p)))
                .map(|p| (p, n - p))
                .collect();
            let tpairs: Vec<(i64, i64)> = (self.target.lo()..=self.target.hi())
                .filter(|p| (d.lo()..=d.hi()).contains(&(n - p)))
                .map(|p| (p, n - p))
                .collect();
            let sources: Vec<FreeGraded> =
                spairs.iter().map(|(p, q)| self.source.generators(*p).tensor(&d.generators(*q))).collect();
            let targets: Vec<FreeGraded> =
                tpairs.iter().map(|(p, q)| self.target.generators(*p).tensor(&d.generators(*q))).collect();
            let mut blocks = Vec::new();
            for (si, pq) in spairs.iter().enumerate() {
                if let Some(ti) = tpairs.iter().position(|t| t == pq) {
                    blocks.push((si, ti, self.component(pq.0).tensor(&PolyMatrix::identity(&d.generators(pq.1)))));
                }
            }
            maps.insert(n, assemble(&sources, &targets, &blocks, &ring));
        }
        Ok(ChainMap { source, target, maps })
    }

    /// Component matrices in internal degree `d`, in quotient coordinates.
    pub fn evaluate(&self, src: &EvaluatedComplex, tgt: &EvaluatedComplex) -> BTreeMap<i64, SparseMatrix> {
        let mut out = BTreeMap::new();
        for n in self.source.lo()..=self.source.hi() {
            let sp = &src.pieces[(n - self.source.lo()) as usize];
            let m = match self.target.object(n) {
                Some(_) => {
                    let tp = &tgt.pieces[(n - self.target.lo()) as usize];
                    induced_piece_map(&self.component(n), sp, tp)
                }
                None => SparseMatrix::zero(0, sp.dim()),
            };
            out.insert(n, m);
        }
        out
    }

    /// Matrix of `H_n(f)` in internal degree `d`.
    pub fn on_homology(&self, n: i64, d: i64) -> (SparseMatrix, usize, usize) {
        let src = self.source.evaluate(d);
        let tgt = self.target.evaluate(d);
        let hs = src.lin.homology(n);
        let ht = tgt.lin.homology(n);
        let mats = self.evaluate(&src, &tgt);
        let f = mats.get(&n).cloned().unwrap_or_else(|| SparseMatrix::zero(tgt.lin.dim(n), src.lin.dim(n)));
        (hs.induced(&f, &ht), hs.dim(), ht.dim())
    }

    /// Mapping cone: `cone_n = B_n ⊕ A_{n−1}`, `d(b, a) = (d b + f a, −d a)`.
    pub fn cone(&self) -> Result<ChainComplex, GradedError> {
        let (a, b) = (&self.source, &self.target);
        let ring = a.ring().clone();
        let lo = b.lo().min(a.lo() + 1);
        let hi = b.hi().max(a.hi() + 1);
        let objects = (lo..=hi)
            .map(|n| b.object_or_zero(n).direct_sum(&a.object_or_zero(n - 1)))
            .collect::<Result<Vec<_>, _>>()?;
        let minus = -Rational::one();
        let diffs = (lo + 1..=hi)
            .map(|n| {
                let sources = [b.generators(n), a.generators(n - 1)];
                let targets = [b.generators(n - 1), a.generators(n - 2)];
                let blocks = [
                    (0, 0, b.diff(n)),
                    (1, 0, self.component(n - 1)),
                    (1, 1, a.diff(n - 1).scale(&minus)),
                ];
                assemble(&sources, &targets, &blocks, &ring)
            })
            .collect();
        ChainComplex::new_unchecked(lo, objects, diffs)
    }

    /// `fib(f) = Σ^{−1} cone(f)`.
    pub fn fib(&self) -> Result<ChainComplex, GradedError> {
        Ok(self.cone()?.suspend(-1))
    }
}
