//! The representation functor for `V = ℚ^d`.
//!
//! `matrix_reduce` replaces every generator `α` by the `d²` entry generators
//! `α_i_j` and evaluates the differential entrywise on the universal matrices;
//! `abelianize` passes to the graded-commutative quotient `R_V`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{
    CommMonomial, CommPoly, DgPresentation, Derivation, GenKind, Generator, Monomial, NcPoly, Poly,
    Var, Word, Q,
};

/// Separator between a base name and the matrix indices of an entry generator.
pub const ENTRY_SEPARATOR: char = '_';

/// A square matrix with polynomial entries, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix<M: Monomial> {
    dim: usize,
    entries: Vec<Poly<M>>,
}

impl<M: Monomial> PolyMatrix<M> {
    pub fn zero(dim: usize) -> Self {
        PolyMatrix {
            dim,
            entries: vec![Poly::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, Q::one())
    }

    pub fn scalar(dim: usize, c: Q) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Poly::constant(c.clone());
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Poly<M>) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        PolyMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry `(i, j)`, zero-based.
    pub fn get(&self, i: usize, j: usize) -> &Poly<M> {
        &self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Poly<M>] {
        &self.entries
    }

    pub fn mul(&self, rhs: &Self, gens: &[Generator]) -> Self {
        let d = self.dim;
        PolyMatrix::from_fn(d, |i, j| {
            let mut acc = Poly::zero();
            for k in 0..d {
                let a = self.get(i, k);
                let b = rhs.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc += &a.mul(b, gens);
                }
            }
            acc
        })
    }

    pub fn add_scaled(&mut self, rhs: &Self, c: &Q) {
        for (a, b) in self.entries.iter_mut().zip(&rhs.entries) {
            a.add_scaled(b, c);
        }
    }

    pub fn trace(&self) -> Poly<M> {
        let mut acc = Poly::zero();
        for i in 0..self.dim {
            acc += self.get(i, i);
        }
        acc
    }

    pub fn map(&self, mut f: impl FnMut(&Poly<M>) -> Result<Poly<M>>) -> Result<Self> {
        Ok(PolyMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(&mut f).collect::<Result<_>>()?,
        })
    }
}

pub fn entry_name(base: &str, i: usize, j: usize) -> String {
    format!("{}{}{}{}{}", base, ENTRY_SEPARATOR, i + 1, ENTRY_SEPARATOR, j + 1)
}

/// Index of the entry generator `(α, i, j)` (zero-based `i`, `j`).
pub fn entry_index(alpha: Var, i: usize, j: usize, dim: usize) -> Var {
    (alpha as usize * dim * dim + i * dim + j) as Var
}

/// Splits an entry index back into `(α, i, j)`.
pub fn entry_parts(v: Var, dim: usize) -> (Var, usize, usize) {
    let v = v as usize;
    let a = v / (dim * dim);
    let r = v % (dim * dim);
    (a as Var, r / dim, r % dim)
}

fn entry_generators(gens: &[Generator], dim: usize) -> Result<Vec<Generator>> {
    let mut out = Vec::with_capacity(gens.len() * dim * dim);
    for g in gens {
        if g.name.contains(ENTRY_SEPARATOR) {
            return Err(Error::NameCollision(g.name.clone()));
        }
        for i in 0..dim {
            for j in 0..dim {
                out.push(Generator {
                    name: entry_name(&g.name, i, j),
                    homdeg: g.homdeg,
                    weight: g.weight,
                    kind: g.kind,
                });
            }
        }
    }
    Ok(out)
}

/// The universal matrix `‖x^α_{ij}‖` of a base generator in any flavor.
pub fn universal_matrix<M: Monomial>(alpha: Var, dim: usize) -> PolyMatrix<M> {
    PolyMatrix::from_fn(dim, |i, j| Poly::var(entry_index(alpha, i, j, dim)))
}

/// All universal matrices of a presentation, indexed like its generators.
pub fn universal_matrices<M: Monomial>(ngens: usize, dim: usize) -> Vec<PolyMatrix<M>> {
    (0..ngens as Var).map(|a| universal_matrix(a, dim)).collect()
}

/// Evaluates an NC polynomial on the given matrices, with entries in a free
/// algebra (of either flavor) over `target_gens`.
pub fn evaluate<M: Monomial>(
    p: &NcPoly,
    mats: &[PolyMatrix<M>],
    dim: usize,
    target_gens: &[Generator],
) -> Result<PolyMatrix<M>> {
    let mut out = PolyMatrix::zero(dim);
    for (w, c) in p.terms() {
        let mut acc = PolyMatrix::scalar(dim, c.clone());
        for &v in w.letters() {
            let m = mats.get(v as usize).ok_or(Error::UnknownGenerator(v as usize))?;
            acc = acc.mul(m, target_gens);
        }
        out.add_scaled(&acc, &Q::one());
    }
    Ok(out)
}

/// The matrix-reduced presentation `R̃` on entry generators `α_i_j`.
pub fn matrix_reduce(r: &DgPresentation<Word>, dim: usize) -> Result<DgPresentation<Word>> {
    assert!(dim > 0, "dimension must be positive");
    let gens = entry_generators(r.gens(), dim)?;
    let mats = universal_matrices::<Word>(r.gens().len(), dim);
    let mut diffs = Vec::with_capacity(gens.len());
    for a in 0..r.gens().len() {
        let m = evaluate(r.d_of(a as Var), &mats, dim, &gens)?;
        diffs.extend(m.entries.into_iter());
    }
    DgPresentation::new(gens, diffs)
}

/// The image of a word-polynomial in the graded-commutative algebra on the
/// same generators.
pub fn abelianize_poly(p: &NcPoly, gens: &[Generator]) -> CommPoly {
    let mut out = CommPoly::zero();
    for (w, c) in p.terms() {
        if let Some((m, neg)) = CommMonomial::product(w.letters(), gens) {
            out.add_term(m, if neg { -c.clone() } else { c.clone() });
        }
    }
    out
}

pub fn abelianize(r: &DgPresentation<Word>) -> Result<DgPresentation<CommMonomial>> {
    let gens = r.gens().to_vec();
    let diffs = (0..gens.len())
        .map(|v| abelianize_poly(r.d_of(v as Var), &gens))
        .collect();
    DgPresentation::new(gens, diffs)
}

/// `R_V` directly: abelianization of the matrix reduction.
pub fn representation_algebra(
    r: &DgPresentation<Word>,
    dim: usize,
) -> Result<DgPresentation<CommMonomial>> {
    abelianize(&matrix_reduce(r, dim)?)
}

/// Universal matrix evaluation `π_V` of an element of `R`, with entries in
/// `R_V`.
pub fn evaluate_v(p: &NcPoly, ngens: usize, dim: usize, rv_gens: &[Generator]) -> Result<PolyMatrix<CommMonomial>> {
    let mats = universal_matrices::<CommMonomial>(ngens, dim);
    evaluate(p, &mats, dim, rv_gens)
}

/// `Tr: R → R̃`, the noncommutative trace `Σ_i π(p)_{ii}`.
pub fn trace_nc(p: &NcPoly, ngens: usize, dim: usize, rt_gens: &[Generator]) -> Result<NcPoly> {
    let mats = universal_matrices::<Word>(ngens, dim);
    Ok(evaluate(p, &mats, dim, rt_gens)?.trace())
}

/// `Tr_V: R → R_V`.
pub fn trace_v(p: &NcPoly, ngens: usize, dim: usize, rv_gens: &[Generator]) -> Result<CommPoly> {
    Ok(evaluate_v(p, ngens, dim, rv_gens)?.trace())
}

/// A finitely presented algebra: degree-0 generators and relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    pub gens: Vec<Generator>,
    pub relations: Vec<NcPoly>,
}

impl AlgebraPresentation {
    pub fn new(gens: Vec<Generator>, relations: Vec<NcPoly>) -> Result<Self> {
        for (i, g) in gens.iter().enumerate() {
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::DuplicateGenerator(g.name.clone()));
            }
            if g.homdeg != 0 {
                return Err(Error::DegreeMismatch {
                    name: g.name.clone(),
                    expected: 0,
                    found: g.homdeg,
                });
            }
            if g.weight == 0 {
                return Err(Error::ZeroWeight {
                    name: g.name.clone(),
                });
            }
        }
        for r in &relations {
            if let Some(v) = r.max_var() {
                if v as usize >= gens.len() {
                    return Err(Error::UnknownGenerator(v as usize));
                }
            }
        }
        Ok(AlgebraPresentation { gens, relations })
    }
}

/// Nonzero entries of every relation evaluated on the universal matrices;
/// their common zero locus is `Rep_V(A)`.
pub fn rep_equations(a: &AlgebraPresentation, dim: usize) -> Result<Vec<CommPoly>> {
    let rv_gens = entry_generators(&a.gens, dim)?;
    let mut out = Vec::new();
    for r in &a.relations {
        let m = evaluate_v(r, a.gens.len(), dim, &rv_gens)?;
        out.extend(m.entries.into_iter().filter(|p| !p.is_zero()));
    }
    Ok(out)
}

/// A point of `Rep_V(A)`: one rational `d×d` matrix per algebra generator,
/// row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentationPoint {
    pub dim: usize,
    pub matrices: Vec<Vec<Q>>,
}

impl RepresentationPoint {
    pub fn zero(dim: usize, ngens: usize) -> Self {
        RepresentationPoint {
            dim,
            matrices: vec![vec![Q::zero(); dim * dim]; ngens],
        }
    }

    fn mat_mul(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        let d = self.dim;
        let mut out = vec![Q::zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let x = &a[i * d + k];
                if x.is_zero() {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] += x * &b[k * d + j];
                }
            }
        }
        out
    }

    /// `ρ(p)` for a polynomial in the algebra generators.
    pub fn evaluate(&self, p: &NcPoly) -> Result<Vec<Q>> {
        let d = self.dim;
        let mut out = vec![Q::zero(); d * d];
        for (w, c) in p.terms() {
            let mut acc: Vec<Q> = (0..d * d)
                .map(|k| if k % (d + 1) == 0 { c.clone() } else { Q::zero() })
                .collect();
            for &v in w.letters() {
                let m = self
                    .matrices
                    .get(v as usize)
                    .ok_or(Error::UnknownGenerator(v as usize))?;
                acc = self.mat_mul(&acc, m);
            }
            for (o, x) in out.iter_mut().zip(acc) {
                *o += x;
            }
        }
        Ok(out)
    }

    pub fn validate(&self, a: &AlgebraPresentation) -> Result<()> {
        if self.matrices.len() != a.gens.len()
            || self.matrices.iter().any(|m| m.len() != self.dim * self.dim)
        {
            return Err(Error::DimensionMismatch(format!(
                "representation needs {} matrices of size {}x{}",
                a.gens.len(),
                self.dim,
                self.dim
            )));
        }
        for r in &a.relations {
            if self.evaluate(r)?.iter().any(|x| !x.is_zero()) {
                return Err(Error::InvalidRepresentation);
            }
        }
        Ok(())
    }
}

/// A free DG bimodule over `R` presented on a combined alphabet: the first
/// generators are those of `R`, the rest are bimodule generators (kind
/// [`GenKind::Bimodule`]) whose differentials are linear in bimodule letters.
pub fn validate_bimodule(m: &DgPresentation<Word>) -> Result<()> {
    let gens = m.gens();
    for (v, g) in gens.iter().enumerate() {
        let want = match g.kind {
            GenKind::Algebra => 0,
            GenKind::Bimodule => 1,
        };
        for (w, _) in m.d_of(v as Var).terms() {
            let count = w
                .letters()
                .iter()
                .filter(|&&l| gens[l as usize].kind == GenKind::Bimodule)
                .count();
            if count != want {
                return Err(Error::InvalidAlgebra(format!(
                    "differential of `{}` must be linear in bimodule generators",
                    g.name
                )));
            }
        }
    }
    Ok(())
}

/// The free `R_V`-module on entries `m^β_{ij}`: returned as a commutative
/// presentation on the combined entry alphabet, linear in bimodule entries.
pub fn bimodule_entries(
    m: &DgPresentation<Word>,
    dim: usize,
) -> Result<DgPresentation<CommMonomial>> {
    validate_bimodule(m)?;
    representation_algebra(m, dim)
}

/// The universal derivation `∂: R → Ω¹R` on the combined alphabet where
/// generator `v` has form letter `offset + v`.
pub fn universal_derivation(p: &NcPoly, offset: Var) -> NcPoly {
    let mut out = NcPoly::zero();
    for (w, c) in p.terms() {
        let l = w.letters();
        for i in 0..l.len() {
            let mut nw = l.to_vec();
            nw[i] += offset;
            out.add_term(Word(nw), c.clone());
        }
    }
    out
}

/// `Ω¹R` as a free bimodule on form generators `d<name>`.
pub fn one_forms(r: &DgPresentation<Word>) -> Result<DgPresentation<Word>> {
    let n = r.gens().len();
    let mut gens = r.gens().to_vec();
    for g in r.gens() {
        let name = format!("d{}", g.name);
        if r.index_of(&name).is_some() {
            return Err(Error::NameCollision(name));
        }
        gens.push(Generator {
            name,
            homdeg: g.homdeg,
            weight: g.weight,
            kind: GenKind::Bimodule,
        });
    }
    let mut diffs: Vec<NcPoly> = (0..n).map(|v| r.d_of(v as Var).clone()).collect();
    for v in 0..n {
        diffs.push(universal_derivation(r.d_of(v as Var), n as Var));
    }
    DgPresentation::new(gens, diffs)
}

/// `D_V`: the derivation of `R_V` with `D_V(x^α_{ij}) = π_V(D x^α)_{ij}`.
pub fn derivation_pushforward(
    r: &DgPresentation<Word>,
    der: &Derivation<Word>,
    dim: usize,
) -> Result<Derivation<CommMonomial>> {
    let der = Derivation::new(der.degree, der.images.clone(), r.gens())?;
    let rv_gens = entry_generators(r.gens(), dim)?;
    let mut images = Vec::with_capacity(rv_gens.len());
    for img in &der.images {
        images.extend(evaluate_v(img, r.gens().len(), dim, &rv_gens)?.entries);
    }
    Derivation::new(der.degree, images, &rv_gens)
}

/// Generators of `R̃` and `R_V` for a given `R` and `d`.
pub fn entry_gens(gens: &[Generator], dim: usize) -> Result<Vec<Generator>> {
    entry_generators(gens, dim)
}
