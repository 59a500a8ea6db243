//! Trace maps `T_n: CC_n(A) → R_V` built from the A∞ components,
//! `T_n(a_1, …, a_{n+1}) = Σ_k (−1)^{nk} Tr f_{n+1}(a_{1+k}, …, a_{n+1+k})`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use rand::Rng;

use crate::ainfty::AInftyMorphism;
use crate::cyclic::{cyclic_b, cyclic_basis, CyclicChain};
use crate::error::{Error, Limits, Result};
use crate::homology::{is_boundary, BoundaryCheck};
use crate::linalg::{SparseMatrix, SparseVec};
use crate::poly::{CommMonomial, CommPoly, DgPresentation, Generator, Monomial, NcPoly, Q};
use crate::repfun::{
    entry_gens, entry_index, entry_parts, representation_algebra, trace_nc, trace_v,
};

/// Evaluation context: the components together with `R_V` for one `d`.
pub struct TraceContext<'a> {
    pub f: &'a AInftyMorphism,
    pub dim: usize,
    pub rv: DgPresentation<CommMonomial>,
}

impl<'a> TraceContext<'a> {
    pub fn new(f: &'a AInftyMorphism, dim: usize) -> Result<Self> {
        let rv = representation_algebra(f.quotient().presentation(), dim)?;
        Ok(TraceContext { f, dim, rv })
    }

    fn ngens(&self) -> usize {
        self.f.quotient().presentation().gens().len()
    }

    pub fn tr(&self, p: &NcPoly) -> Result<CommPoly> {
        trace_v(p, self.ngens(), self.dim, self.rv.gens())
    }

    /// `T_n` on the word `(a_1, …, a_{n+1})` of basis indices.
    pub fn trace_word(&self, word: &[usize]) -> Result<CommPoly> {
        let len = word.len();
        let n = len - 1;
        let mut out = CommPoly::zero();
        for k in 0..len {
            let mut rot = Vec::with_capacity(len);
            rot.extend_from_slice(&word[k..]);
            rot.extend_from_slice(&word[..k]);
            let value = self.tr(&self.f.component(&rot)?)?;
            if (n * k) % 2 == 1 {
                out -= &value;
            } else {
                out += &value;
            }
        }
        Ok(out)
    }

    pub fn trace_chain(&self, c: &CyclicChain) -> Result<CommPoly> {
        let mut out = CommPoly::zero();
        for (w, x) in &c.terms {
            out.add_scaled(&self.trace_word(w)?, x);
        }
        Ok(out)
    }

    /// `Σ_i (ω̃(a,b) − ω̃(b,a))_{ii}` with `ω̃` an independently solved
    /// preimage of `ω(a,b) = f_1(ab) − f_1(a) f_1(b)`.
    pub fn ch2_trace(&self, a: usize, b: usize, limits: &Limits) -> Result<CommPoly> {
        let ab = self.omega_tilde(a, b, limits)?;
        let ba = self.omega_tilde(b, a, limits)?;
        self.tr(&(&ab - &ba))
    }

    fn omega_tilde(&self, a: usize, b: usize, limits: &Limits) -> Result<NcPoly> {
        let q = self.f.quotient();
        let r = q.presentation();
        let alg = q.algebra();
        let fa = q.section(&alg.basis_vec(a));
        let fb = q.section(&alg.basis_vec(b));
        let fab = q.section(alg.product(a, b));
        let omega = &fab - &r.mul(&fa, &fb);
        match is_boundary(r, &omega, 0, limits)? {
            BoundaryCheck::Boundary { preimage } => Ok(preimage),
            BoundaryCheck::NotBoundary { .. } => {
                let (h, w) = omega.bidegree(r.gens()).unwrap_or((0, 0));
                Err(Error::NotAResolution { homdeg: h, weight: w })
            }
        }
    }

    /// `NTr(a) = Σ_i f_1(a)_{ii}` in the matrix-reduced algebra `R̃`.
    pub fn ntrace(&self, a: usize) -> Result<NcPoly> {
        let q = self.f.quotient();
        let r = q.presentation();
        let gens = entry_gens(r.gens(), self.dim)?;
        trace_nc(&q.section(&q.algebra().basis_vec(a)), r.gens().len(), self.dim, &gens)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceBlock {
    pub n: usize,
    pub weight: u32,
    pub chains: usize,
    /// nonzero entries of `d T_n − T_{n−1} b` as a matrix on this block
    pub residual_nnz: usize,
}

/// Per-block chain-map residuals and trace values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TraceReport {
    pub blocks: Vec<TraceBlock>,
    /// `(word, T_n(word))` for every canonical basis word visited
    pub values: Vec<(Vec<usize>, CommPoly)>,
}

impl TraceReport {
    pub fn passed(&self) -> bool {
        self.blocks.iter().all(|b| b.residual_nnz == 0)
    }
}

/// Checks `d ∘ T_n = T_{n−1} ∘ b` on canonical cyclic words, for
/// `1 ≤ n ≤ n_max` and weights up to `w_max`.
pub fn chain_map_check(
    ctx: &TraceContext<'_>,
    n_max: usize,
    w_max: u32,
    limits: &Limits,
) -> Result<TraceReport> {
    let a = ctx.f.algebra();
    let mut report = TraceReport::default();
    for n in 0..=n_max {
        for w in 0..=w_max {
            let basis = cyclic_basis(a, n, Some(w), limits)?;
            let mut residuals = Vec::with_capacity(basis.len());
            for word in &basis {
                let t = ctx.trace_word(word)?;
                report.values.push((word.clone(), t.clone()));
                if n == 0 {
                    continue;
                }
                let lhs = ctx.rv.apply_d(&t)?;
                let rhs = ctx.trace_chain(&cyclic_b(a, &CyclicChain::from_word(word)))?;
                residuals.push(&lhs - &rhs);
            }
            if n == 0 {
                continue;
            }
            let residual_nnz = residuals.iter().map(|p| p.len()).sum();
            report.blocks.push(TraceBlock {
                n,
                weight: w,
                chains: basis.len(),
                residual_nnz,
            });
        }
    }
    Ok(report)
}

/// Residual matrix of the chain-map identity on one block, rows indexed by
/// the monomials that occur.
pub fn chain_map_residual_matrix(
    ctx: &TraceContext<'_>,
    n: usize,
    w: u32,
    limits: &Limits,
) -> Result<SparseMatrix> {
    let a = ctx.f.algebra();
    let basis = cyclic_basis(a, n, Some(w), limits)?;
    let mut monos = alloc::collections::BTreeMap::new();
    let mut cols: Vec<SparseVec> = Vec::new();
    for word in &basis {
        let lhs = ctx.rv.apply_d(&ctx.trace_word(word)?)?;
        let rhs = ctx.trace_chain(&cyclic_b(a, &CyclicChain::from_word(word)))?;
        let res = &lhs - &rhs;
        let mut col = SparseVec::new();
        for (m, c) in res.terms() {
            let k = monos.len();
            let i = *monos.entry(m.clone()).or_insert(k);
            col.insert(i, c.clone());
        }
        cols.push(col);
    }
    Ok(SparseMatrix::from_columns(monos.len(), &cols))
}

/// A `d×d` rational matrix, row-major.
pub type RatMatrix = Vec<Q>;

/// Inverse of a square matrix, or `None` when singular.
pub fn invert(m: &RatMatrix, dim: usize) -> Option<RatMatrix> {
    let rows: Vec<Vec<Q>> = (0..dim).map(|i| m[i * dim..(i + 1) * dim].to_vec()).collect();
    let red = SparseMatrix::from_dense(&rows).reduce();
    if red.rank() < dim {
        return None;
    }
    let mut inv = vec![Q::zero(); dim * dim];
    for j in 0..dim {
        let e: SparseVec = [(j, Q::one())].into_iter().collect();
        let x = red.solve(&e)?;
        for (i, c) in x {
            inv[i * dim + j] = c;
        }
    }
    Some(inv)
}

/// An invertible integer matrix with entries in `[−3, 3]`, resampled until
/// the determinant is nonzero. Returns `(g, g⁻¹)`.
pub fn sample_gl<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> (RatMatrix, RatMatrix) {
    loop {
        let g: RatMatrix = (0..dim * dim)
            .map(|_| Q::from_integer(rng.gen_range(-3i64..=3).into()))
            .collect();
        if let Some(inv) = invert(&g, dim) {
            return (g, inv);
        }
    }
}

/// Substitutes `x^α_{ij} ↦ (g⁻¹ X^α g)_{ij}` for every entry generator.
pub fn conjugate(
    p: &CommPoly,
    rv_gens: &[Generator],
    dim: usize,
    g: &RatMatrix,
    g_inv: &RatMatrix,
) -> Result<CommPoly> {
    let mut images = Vec::with_capacity(rv_gens.len());
    for v in 0..rv_gens.len() {
        let (alpha, i, j) = entry_parts(v as u32, dim);
        let mut img = CommPoly::zero();
        for k in 0..dim {
            for l in 0..dim {
                let c = &g_inv[i * dim + k] * &g[l * dim + j];
                if !c.is_zero() {
                    img.add_term(CommMonomial::var(entry_index(alpha, k, l, dim)), c);
                }
            }
        }
        images.push(img);
    }
    p.substitute(&images, rv_gens)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GlReport {
    pub samples: usize,
    pub values: usize,
    /// `(sample index, value index)` of every value that moved
    pub moved: Vec<(usize, usize)>,
}

impl GlReport {
    pub fn passed(&self) -> bool {
        self.moved.is_empty()
    }
}

/// Sampling check that every value is fixed by conjugation with random
/// `g ∈ GL_d(ℚ)`.
pub fn gl_invariance_check<R: Rng + ?Sized>(
    values: &[CommPoly],
    rv_gens: &[Generator],
    dim: usize,
    samples: usize,
    rng: &mut R,
) -> Result<GlReport> {
    let mut report = GlReport {
        samples,
        values: values.len(),
        moved: Vec::new(),
    };
    for s in 0..samples {
        let (g, g_inv) = sample_gl(rng, dim);
        for (i, v) in values.iter().enumerate() {
            if conjugate(v, rv_gens, dim, &g, &g_inv)? != *v {
                report.moved.push((s, i));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::build;
    use crate::poly::{q, Word};
    use rand::SeedableRng;

    fn ex2d() -> DgPresentation<Word> {
        let gens = vec![
            Generator::new("x", 0),
            Generator::new("y", 0),
            Generator::new("t", 1).with_weight(2),
        ];
        let dt = NcPoly::from_terms([(Word(vec![0, 1]), q(1)), (Word(vec![1, 0]), q(-1))]);
        DgPresentation::new(gens, vec![NcPoly::zero(), NcPoly::zero(), dt]).unwrap()
    }

    fn tr_t(dim: usize) -> CommPoly {
        let mut p = CommPoly::zero();
        for i in 0..dim {
            p += &CommPoly::var(entry_index(2, i, i, dim));
        }
        p
    }

    #[test]
    fn degree_zero_is_matrix_trace() {
        let f = build(&ex2d(), 2, 3, &Limits::default()).unwrap();
        let ctx = TraceContext::new(&f, 2).unwrap();
        let x = f.quotient().basis_index(&Word(vec![0])).unwrap();
        let expected = &CommPoly::var(entry_index(0, 0, 0, 2)) + &CommPoly::var(entry_index(0, 1, 1, 2));
        assert_eq!(ctx.trace_word(&[x]).unwrap(), expected);
        assert_eq!(ctx.trace_word(&[0]).unwrap(), CommPoly::constant(q(2)));
    }

    #[test]
    fn trace_of_yx_is_trace_of_t() {
        let l = Limits::default();
        let f = build(&ex2d(), 2, 2, &l).unwrap();
        let ctx = TraceContext::new(&f, 2).unwrap();
        let x = f.quotient().basis_index(&Word(vec![0])).unwrap();
        let y = f.quotient().basis_index(&Word(vec![1])).unwrap();
        assert_eq!(ctx.trace_word(&[y, x]).unwrap(), tr_t(2));
        assert_eq!(ctx.trace_word(&[x, y]).unwrap(), -tr_t(2));
        assert_eq!(ctx.ch2_trace(y, x, &l).unwrap(), tr_t(2));
        assert_eq!(ctx.ch2_trace(x, y, &l).unwrap(), -tr_t(2));
        assert!(ctx.ch2_trace(x, x, &l).unwrap().is_zero());
    }

    #[test]
    fn chain_map_identity() {
        let l = Limits::default();
        let f = build(&ex2d(), 4, 4, &l).unwrap();
        let ctx = TraceContext::new(&f, 2).unwrap();
        let rep = chain_map_check(&ctx, 3, 4, &l).unwrap();
        assert!(rep.passed(), "{:?}", rep.blocks);
        assert!(chain_map_residual_matrix(&ctx, 2, 4, &l).unwrap().is_zero());
    }

    #[test]
    fn rotation_invariance_and_unit() {
        let l = Limits::default();
        let f = build(&ex2d(), 3, 4, &l).unwrap();
        let ctx = TraceContext::new(&f, 2).unwrap();
        let x = f.quotient().basis_index(&Word(vec![0])).unwrap();
        let y = f.quotient().basis_index(&Word(vec![1])).unwrap();
        let xy = f.quotient().basis_index(&Word(vec![0, 1])).unwrap();
        let w = [xy, y, x];
        let t = ctx.trace_word(&w).unwrap();
        // t(a0,a1,a2) = (a2,a0,a1) with sign (+1) at n = 2
        assert_eq!(ctx.trace_word(&[x, xy, y]).unwrap(), t);
        assert!(ctx.trace_word(&[0, 0]).unwrap().is_zero());
        assert!(ctx.trace_word(&[0, 0, 0]).unwrap().is_zero());
    }

    #[test]
    fn ntrace_abelianizes_to_trace() {
        let f = build(&ex2d(), 1, 3, &Limits::default()).unwrap();
        let ctx = TraceContext::new(&f, 2).unwrap();
        let rt_gens = entry_gens(f.quotient().presentation().gens(), 2).unwrap();
        for a in 0..f.algebra().dim() {
            let nt = ctx.ntrace(a).unwrap();
            let ab = crate::repfun::abelianize_poly(&nt, &rt_gens);
            assert_eq!(ab, ctx.trace_word(&[a]).unwrap());
        }
        let one = ctx.ntrace(0).unwrap();
        assert_eq!(one, NcPoly::constant(q(2)));
    }

    #[test]
    fn gl_invariance() {
        let l = Limits::default();
        let f = build(&ex2d(), 2, 3, &l).unwrap();
        let ctx = TraceContext::new(&f, 2).unwrap();
        let x = f.quotient().basis_index(&Word(vec![0])).unwrap();
        let y = f.quotient().basis_index(&Word(vec![1])).unwrap();
        let values = vec![ctx.trace_word(&[x]).unwrap(), ctx.trace_word(&[y, x]).unwrap()];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let rep = gl_invariance_check(&values, ctx.rv.gens(), 2, 10, &mut rng).unwrap();
        assert!(rep.passed());
        let probe = vec![CommPoly::var(entry_index(0, 0, 1, 2))];
        let neg = gl_invariance_check(&probe, ctx.rv.gens(), 2, 10, &mut rng).unwrap();
        assert!(!neg.passed());
    }

    #[test]
    fn inverse_of_singular_is_none() {
        assert!(invert(&vec![q(1), q(2), q(2), q(4)], 2).is_none());
        let inv = invert(&vec![q(2), q(1), q(1), q(1)], 2).unwrap();
        assert_eq!(inv, vec![q(1), q(-1), q(-1), q(2)]);
    }
}
