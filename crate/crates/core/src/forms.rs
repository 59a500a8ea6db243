//! Noncommutative 1-forms, the periodicity bicomplexes `X⁺(R)` and `X⁺(R)_V`,
//! the maps `S_V`, `B_V`, and derived tangent complexes.
//!
//! Both sides live on the combined alphabet of [`one_forms`]: the form letter
//! of generator `v` is `n + v` where `n` is the number of generators of `R`.
//! An element of `Ω¹(R)_♮` is stored in canonical form `u·dα` with the form
//! letter last; an element of `R̄_♮` as the lexicographically least rotation.
//!
//! The total differential of a bicomplex with columns `p ≥ 0` is
//! `D = h + (−1)^p d`, where `h` is the horizontal map into column `p − 1`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::ainfty::require_homogeneous;
use crate::error::{Error, Limits, Result};
use crate::linalg::{span_rank, SparseMatrix, SparseVec};
use crate::poly::{
    CommMonomial, CommPoly, DgPresentation, Derivation, GenKind, Monomial, NcPoly, Poly, Var,
    Word, Q,
};
use crate::repfun::{bimodule_entries, one_forms, trace_v, universal_derivation};
use crate::repfun::{AlgebraPresentation, RepresentationPoint};

/// A chain of a total complex: `components[p]` lies in column `p` at internal
/// degree `n − p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotChain<M: Monomial> {
    pub n: u32,
    pub weight: u32,
    pub components: Vec<Poly<M>>,
}

impl<M: Monomial> TotChain<M> {
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    pub fn component(&self, p: usize) -> Poly<M> {
        self.components.get(p).cloned().unwrap_or_else(Poly::zero)
    }
}

fn matrix_of<M: Monomial>(
    source: &[M],
    target: &[M],
    mut f: impl FnMut(&M) -> Result<Poly<M>>,
) -> Result<SparseMatrix> {
    let mut m = SparseMatrix::zero(target.len(), source.len());
    for (j, s) in source.iter().enumerate() {
        for (t, c) in f(s)?.terms() {
            let i = target.binary_search(t).map_err(|_| {
                Error::DimensionMismatch(format!("image term {:?} outside the target block", t))
            })?;
            m.add_to(i, j, c.clone());
        }
    }
    Ok(m)
}

fn coords<M: Monomial>(basis: &[M], p: &Poly<M>) -> Result<SparseVec> {
    let mut v = SparseVec::new();
    for (m, c) in p.terms() {
        let i = basis.binary_search(m).map_err(|_| {
            Error::DimensionMismatch(format!("term {:?} outside the block", m))
        })?;
        v.insert(i, c.clone());
    }
    Ok(v)
}

fn element<M: Monomial>(basis: &[M], v: &SparseVec) -> Poly<M> {
    Poly::from_terms(v.iter().map(|(&i, c)| (basis[i].clone(), c.clone())))
}

/// Solves `m x = target` for `x` in `source` coordinates.
fn solve_in<M: Monomial>(
    m: &SparseMatrix,
    source: &[M],
    target_basis: &[M],
    target: &Poly<M>,
) -> Result<Option<Poly<M>>> {
    let b = coords(target_basis, target)?;
    Ok(m.reduce().solve(&b).map(|x| element(source, &x)))
}

/// The noncommutative side: `R̄`, `Ω¹(R)_♮`, `β` and `∂̄`.
#[derive(Clone, Debug)]
pub struct NcForms {
    forms: DgPresentation<Word>,
    n: usize,
    limits: Limits,
}

impl NcForms {
    pub fn new(r: &DgPresentation<Word>, limits: &Limits) -> Result<Self> {
        Ok(NcForms {
            forms: one_forms(r)?,
            n: r.gens().len(),
            limits: *limits,
        })
    }

    /// `Ω¹R` on the combined alphabet.
    pub fn presentation(&self) -> &DgPresentation<Word> {
        &self.forms
    }

    pub fn ngens(&self) -> usize {
        self.n
    }

    fn deg(&self, l: Var) -> u32 {
        self.forms.gens()[l as usize].homdeg
    }

    fn word_deg(&self, w: &[Var]) -> u32 {
        w.iter().map(|&l| self.deg(l)).sum()
    }

    fn is_form(&self, l: Var) -> bool {
        l as usize >= self.n
    }

    /// `dα` as an element of `Ω¹R`.
    pub fn form_letter(&self, v: Var) -> NcPoly {
        NcPoly::var(v + self.n as Var)
    }

    /// `∂: R → Ω¹R`.
    pub fn partial(&self, r: &NcPoly) -> NcPoly {
        universal_derivation(r, self.n as Var)
    }

    /// Reduces a 1-form modulo `[R, Ω¹R]`: `u·dα·v ↦ ±v·u·dα`.
    pub fn natural_form(&self, p: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w, c) in p.terms() {
            let l = w.letters();
            let i = l
                .iter()
                .position(|&x| self.is_form(x))
                .expect("1-form without a form letter");
            debug_assert_eq!(l.iter().filter(|&&x| self.is_form(x)).count(), 1);
            let (u, rest) = l.split_at(i);
            let v = &rest[1..];
            let e = self.word_deg(v) * (self.word_deg(u) + self.deg(rest[0]));
            let mut nw = v.to_vec();
            nw.extend_from_slice(u);
            nw.push(rest[0]);
            out.add_term(Word(nw), if e % 2 == 1 { -c.clone() } else { c.clone() });
        }
        out
    }

    /// Canonical rotation of a word in `R̄_♮`, or `None` when the graded
    /// cyclic symmetry kills it.
    pub fn necklace_word(&self, w: &Word) -> Option<(Word, bool)> {
        let mut cur = w.letters().to_vec();
        let total = self.word_deg(&cur);
        let mut neg = false;
        let mut seen: BTreeMap<Vec<Var>, bool> = BTreeMap::new();
        for _ in 0..cur.len().max(1) {
            if let Some(&s) = seen.get(&cur) {
                if s != neg {
                    return None;
                }
            } else {
                seen.insert(cur.clone(), neg);
            }
            if cur.is_empty() {
                break;
            }
            let a = cur.remove(0);
            let da = self.deg(a);
            neg ^= (da * (total - da)) % 2 == 1;
            cur.push(a);
        }
        if let Some(&s) = seen.get(&cur) {
            if s != neg {
                return None;
            }
        }
        seen.into_iter().next().map(|(k, s)| (Word(k), s))
    }

    /// `τ: R̄ → R̄_♮`.
    pub fn necklace(&self, p: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w, c) in p.terms() {
            if let Some((nw, neg)) = self.necklace_word(w) {
                out.add_term(nw, if neg { -c.clone() } else { c.clone() });
            }
        }
        out
    }

    /// `β(u·dα) = uα − (−1)^{|u||α|} αu`.
    pub fn beta(&self, omega: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w, c) in self.natural_form(omega).terms() {
            let l = w.letters();
            let (u, f) = l.split_at(l.len() - 1);
            let a = f[0] - self.n as Var;
            let mut ua = u.to_vec();
            ua.push(a);
            let mut au = vec![a];
            au.extend_from_slice(u);
            out.add_term(Word(ua), c.clone());
            let neg = (self.word_deg(u) * self.deg(a)) % 2 == 1;
            out.add_term(Word(au), if neg { c.clone() } else { -c.clone() });
        }
        out
    }

    /// `∂̄: R̄ → Ω¹(R)_♮`.
    pub fn dbar(&self, r: &NcPoly) -> NcPoly {
        self.natural_form(&self.partial(r))
    }

    /// The internal differential on `R̄` or on `Ω¹(R)_♮`.
    pub fn d(&self, p: &NcPoly) -> Result<NcPoly> {
        let dp = self.forms.apply_d(p)?;
        let has_form = p
            .terms()
            .any(|(w, _)| w.letters().iter().any(|&l| self.is_form(l)));
        Ok(if has_form { self.natural_form(&dp) } else { dp })
    }

    pub fn r_basis(&self, q: u32, w: u32) -> Result<Vec<Word>> {
        if w == 0 {
            return Ok(Vec::new());
        }
        Word::enumerate(&self.forms.gens()[..self.n], q, w, &self.limits)
    }

    pub fn omega_basis(&self, q: u32, w: u32) -> Result<Vec<Word>> {
        let gens = &self.forms.gens()[..self.n];
        let mut out = Vec::new();
        for (a, g) in gens.iter().enumerate() {
            if g.homdeg > q || g.weight > w {
                continue;
            }
            for u in Word::enumerate(gens, q - g.homdeg, w - g.weight, &self.limits)? {
                let mut l = u.0;
                l.push((a + self.n) as Var);
                out.push(Word(l));
            }
        }
        out.sort();
        self.limits.check(q, w, out.len())?;
        Ok(out)
    }

    pub fn necklace_basis(&self, q: u32, w: u32) -> Result<Vec<Word>> {
        Ok(self
            .r_basis(q, w)?
            .into_iter()
            .filter(|x| matches!(self.necklace_word(x), Some((ref c, false)) if c == x))
            .collect())
    }

    pub fn beta_matrix(&self, q: u32, w: u32) -> Result<SparseMatrix> {
        let src = self.omega_basis(q, w)?;
        let tgt = self.r_basis(q, w)?;
        matrix_of(&src, &tgt, |m| Ok(self.beta(&NcPoly::monomial(m.clone(), Q::one()))))
    }

    pub fn dbar_matrix(&self, q: u32, w: u32) -> Result<SparseMatrix> {
        let src = self.r_basis(q, w)?;
        let tgt = self.omega_basis(q, w)?;
        matrix_of(&src, &tgt, |m| Ok(self.dbar(&NcPoly::monomial(m.clone(), Q::one()))))
    }

    pub fn d_r_matrix(&self, q: u32, w: u32) -> Result<SparseMatrix> {
        let src = self.r_basis(q, w)?;
        if q == 0 {
            return Ok(SparseMatrix::zero(0, src.len()));
        }
        let tgt = self.r_basis(q - 1, w)?;
        matrix_of(&src, &tgt, |m| self.d(&NcPoly::monomial(m.clone(), Q::one())))
    }

    pub fn d_omega_matrix(&self, q: u32, w: u32) -> Result<SparseMatrix> {
        let src = self.omega_basis(q, w)?;
        if q == 0 {
            return Ok(SparseMatrix::zero(0, src.len()));
        }
        let tgt = self.omega_basis(q - 1, w)?;
        matrix_of(&src, &tgt, |m| self.d(&NcPoly::monomial(m.clone(), Q::one())))
    }

    /// The induced differential on `R̄_♮`.
    pub fn d_natural_matrix(&self, q: u32, w: u32) -> Result<SparseMatrix> {
        let src = self.necklace_basis(q, w)?;
        if q == 0 {
            return Ok(SparseMatrix::zero(0, src.len()));
        }
        let tgt = self.necklace_basis(q - 1, w)?;
        matrix_of(&src, &tgt, |m| {
            Ok(self.necklace(&self.d(&NcPoly::monomial(m.clone(), Q::one()))?))
        })
    }

    /// A basis of the cycles of `R̄_♮` in one block, as canonical words.
    pub fn natural_cycles(&self, q: u32, w: u32) -> Result<Vec<NcPoly>> {
        let basis = self.necklace_basis(q, w)?;
        let m = self.d_natural_matrix(q, w)?;
        Ok(m
            .reduce()
            .kernel_basis()
            .iter()
            .map(|v| element(&basis, v))
            .collect())
    }

    /// Graded commutators `[u, v]` of all splittings of basis words.
    pub fn commutators(&self, q: u32, w: u32) -> Result<Vec<NcPoly>> {
        let mut out = Vec::new();
        for word in self.r_basis(q, w)? {
            let l = word.letters();
            for s in 1..l.len() {
                let (u, v) = l.split_at(s);
                let mut uv = u.to_vec();
                uv.extend_from_slice(v);
                let mut vu = v.to_vec();
                vu.extend_from_slice(u);
                let neg = (self.word_deg(u) * self.word_deg(v)) % 2 == 1;
                let mut p = NcPoly::monomial(Word(uv), Q::one());
                p.add_term(Word(vu), if neg { Q::one() } else { -Q::one() });
                if !p.is_zero() {
                    out.push(p);
                }
            }
        }
        Ok(out)
    }

    /// Applies the total differential of `Tot X⁺(R)`.
    pub fn total_d(&self, c: &TotChain<Word>) -> Result<TotChain<Word>> {
        let mut out = Vec::new();
        for p in 0..c.components.len() {
            if c.n < p as u32 + 1 {
                break;
            }
            let mut acc = self.d(&c.components[p])?;
            if p % 2 == 1 {
                acc = -acc;
            }
            if let Some(x) = c.components.get(p + 1) {
                acc += &if p % 2 == 0 { self.beta(x) } else { self.dbar(x) };
            }
            out.push(acc);
        }
        Ok(TotChain {
            n: c.n.saturating_sub(1),
            weight: c.weight,
            components: out,
        })
    }

    /// Solves `τ(r_n) = r̄_n, β(ω_{n−1}) = −d r_n, ∂̄(r_{n−2}) = d ω_{n−1}, …`
    /// for a cycle `r_n` of `R̄_♮`, producing a cycle of `Tot X⁺(R)`.
    pub fn lift_cycle(&self, r: &NcPoly, n: u32, w: u32) -> Result<TotChain<Word>> {
        let mut comps = vec![r.clone()];
        let mut p = 1u32;
        while p <= n {
            let q = n - p;
            let prev = &comps[p as usize - 1];
            let next = if p % 2 == 1 {
                let target = -self.d(prev)?;
                let m = self.beta_matrix(q, w)?;
                solve_in(&m, &self.omega_basis(q, w)?, &self.r_basis(q, w)?, &target)?
            } else {
                let target = self.d(prev)?;
                let m = self.dbar_matrix(q, w)?;
                solve_in(&m, &self.r_basis(q, w)?, &self.omega_basis(q, w)?, &target)?
            };
            comps.push(next.ok_or(Error::UnsolvableLift { homdeg: q, weight: w })?);
            p += 1;
        }
        Ok(TotChain {
            n,
            weight: w,
            components: comps,
        })
    }

    /// `S(r_n, ω_{n−1}, r_{n−2}, …) = (r_{n−2}, …)`.
    pub fn s(&self, c: &TotChain<Word>) -> TotChain<Word> {
        TotChain {
            n: c.n.saturating_sub(2),
            weight: c.weight,
            components: c.components.iter().skip(2).cloned().collect(),
        }
    }
}

/// Row exactness data of `0 ← R̄_♮ ← R̄ ← Ω¹(R)_♮ ← R̄_♮ ← 0` in one block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Qper1Row {
    pub homdeg: u32,
    pub weight: u32,
    pub dim_r: usize,
    pub dim_natural: usize,
    pub dim_omega: usize,
    pub commutator_rank: usize,
    pub rank_beta: usize,
    pub rank_dbar: usize,
    /// rank of the commutators together with `Im β`
    pub joint_rank: usize,
    pub beta_dbar_zero: bool,
    pub dbar_beta_zero: bool,
}

impl Qper1Row {
    /// `Ker τ = Im β`, with `R̄_♮` counted by necklaces.
    pub fn exact_at_r(&self) -> bool {
        self.dim_r - self.rank_beta == self.dim_natural
    }

    pub fn exact_at_omega(&self) -> bool {
        self.dim_omega - self.rank_beta == self.rank_dbar
    }

    pub fn dbar_injective_on_natural(&self) -> bool {
        self.rank_dbar == self.dim_natural
    }

    pub fn image_is_commutators(&self) -> bool {
        self.rank_beta == self.commutator_rank && self.joint_rank == self.rank_beta
    }

    pub fn is_exact(&self) -> bool {
        self.exact_at_r()
            && self.exact_at_omega()
            && self.dbar_injective_on_natural()
            && self.image_is_commutators()
            && self.beta_dbar_zero
            && self.dbar_beta_zero
    }
}

pub fn qper1_row(forms: &NcForms, q: u32, w: u32) -> Result<Qper1Row> {
    let rb = forms.r_basis(q, w)?;
    let beta = forms.beta_matrix(q, w)?;
    let dbar = forms.dbar_matrix(q, w)?;
    let comms: Vec<SparseVec> = forms
        .commutators(q, w)?
        .iter()
        .map(|c| coords(&rb, c))
        .collect::<Result<_>>()?;
    let commutator_rank = span_rank(rb.len(), &comms);
    let mut joint = comms;
    joint.extend((0..beta.ncols()).map(|j| beta.column(j)));
    Ok(Qper1Row {
        homdeg: q,
        weight: w,
        dim_r: rb.len(),
        dim_natural: forms.necklace_basis(q, w)?.len(),
        dim_omega: forms.omega_basis(q, w)?.len(),
        commutator_rank,
        rank_beta: beta.rank(),
        rank_dbar: dbar.rank(),
        joint_rank: span_rank(rb.len(), &joint),
        beta_dbar_zero: beta.mul(&dbar).is_zero(),
        dbar_beta_zero: dbar.mul(&beta).is_zero(),
    })
}

/// All nonempty blocks with `1 ≤ w ≤ w_max`.
pub fn qper1_exactness(
    r: &DgPresentation<Word>,
    w_max: u32,
    limits: &Limits,
) -> Result<Vec<Qper1Row>> {
    require_homogeneous(r)?;
    let forms = NcForms::new(r, limits)?;
    let mut out = Vec::new();
    for w in 1..=w_max {
        for q in 0..=w {
            let row = qper1_row(&forms, q, w)?;
            if row.dim_r + row.dim_omega > 0 {
                out.push(row);
            }
        }
    }
    Ok(out)
}

/// The representation side: `R̄_V`, `Ω¹_com(R_V)` and the de Rham
/// differential, on the entry alphabet of `Ω¹R`.
#[derive(Clone, Debug)]
pub struct VForms {
    nc_gens: usize,
    entries: usize,
    dim: usize,
    forms: DgPresentation<CommMonomial>,
    de_rham: Derivation<CommMonomial>,
    limits: Limits,
}

impl VForms {
    pub fn new(r: &DgPresentation<Word>, dim: usize, limits: &Limits) -> Result<Self> {
        let forms = bimodule_entries(&one_forms(r)?, dim)?;
        let entries = r.gens().len() * dim * dim;
        let images = (0..forms.gens().len())
            .map(|v| {
                if v < entries {
                    CommPoly::var((v + entries) as Var)
                } else {
                    CommPoly::zero()
                }
            })
            .collect();
        let de_rham = Derivation::new(0, images, forms.gens())?;
        Ok(VForms {
            nc_gens: r.gens().len(),
            entries,
            dim,
            forms,
            de_rham,
            limits: *limits,
        })
    }

    /// `Ω¹_com(R_V)` as a commutative presentation; its first
    /// [`VForms::entries`] generators are those of `R_V`.
    pub fn presentation(&self) -> &DgPresentation<CommMonomial> {
        &self.forms
    }

    pub fn entries(&self) -> usize {
        self.entries
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `∂_V: R_V → Ω¹_com(R_V)`.
    pub fn de_rham(&self, p: &CommPoly) -> Result<CommPoly> {
        self.de_rham.apply(p, self.forms.gens())
    }

    pub fn d(&self, p: &CommPoly) -> Result<CommPoly> {
        self.forms.apply_d(p)
    }

    /// Generators `x` of `R_V` where `d(∂_V x)` and `∂_V(d x)` disagree.
    pub fn de_rham_mismatches(&self) -> Result<Vec<Var>> {
        let mut bad = Vec::new();
        for v in 0..self.entries as Var {
            let x = CommPoly::var(v);
            if self.d(&self.de_rham(&x)?)? != self.de_rham(&self.d(&x)?)? {
                bad.push(v);
            }
        }
        Ok(bad)
    }

    /// `Tr_V` on `R` and on `Ω¹R`, given on the combined alphabet.
    pub fn trace(&self, p: &NcPoly) -> Result<CommPoly> {
        trace_v(p, 2 * self.nc_gens, self.dim, self.forms.gens())
    }

    pub fn r_basis(&self, q: u32, w: u32) -> Result<Vec<CommMonomial>> {
        if w == 0 {
            return Ok(Vec::new());
        }
        CommMonomial::enumerate(&self.forms.gens()[..self.entries], q, w, &self.limits)
    }

    pub fn omega_basis(&self, q: u32, w: u32) -> Result<Vec<CommMonomial>> {
        let gens = self.forms.gens();
        let mut out = Vec::new();
        for f in self.entries..gens.len() {
            let g = &gens[f];
            if g.homdeg > q || g.weight > w {
                continue;
            }
            for m in CommMonomial::enumerate(
                &gens[..self.entries],
                q - g.homdeg,
                w - g.weight,
                &self.limits,
            )? {
                let (mf, _) = m
                    .mul(&CommMonomial::var(f as Var), gens)
                    .expect("a form letter times a function monomial is nonzero");
                out.push(mf);
            }
        }
        out.sort();
        self.limits.check(q, w, out.len())?;
        Ok(out)
    }

    pub fn dbar_matrix(&self, q: u32, w: u32) -> Result<SparseMatrix> {
        let src = self.r_basis(q, w)?;
        let tgt = self.omega_basis(q, w)?;
        matrix_of(&src, &tgt, |m| {
            self.de_rham(&CommPoly::monomial(m.clone(), Q::one()))
        })
    }

    pub fn d_r_matrix(&self, q: u32, w: u32) -> Result<SparseMatrix> {
        let src = self.r_basis(q, w)?;
        if q == 0 {
            return Ok(SparseMatrix::zero(0, src.len()));
        }
        let tgt = self.r_basis(q - 1, w)?;
        matrix_of(&src, &tgt, |m| self.d(&CommPoly::monomial(m.clone(), Q::one())))
    }

    pub fn d_omega_matrix(&self, q: u32, w: u32) -> Result<SparseMatrix> {
        let src = self.omega_basis(q, w)?;
        if q == 0 {
            return Ok(SparseMatrix::zero(0, src.len()));
        }
        let tgt = self.omega_basis(q - 1, w)?;
        matrix_of(&src, &tgt, |m| self.d(&CommPoly::monomial(m.clone(), Q::one())))
    }

    /// Applies the total differential of `Tot X⁺(R)_V`.
    pub fn total_d(&self, c: &TotChain<CommMonomial>) -> Result<TotChain<CommMonomial>> {
        let mut out = Vec::new();
        for p in 0..c.components.len() {
            if c.n < p as u32 + 1 {
                break;
            }
            let mut acc = self.d(&c.components[p])?;
            if p % 2 == 1 {
                acc = -acc;
            }
            if p % 2 == 1 {
                if let Some(x) = c.components.get(p + 1) {
                    acc += &self.de_rham(x)?;
                }
            }
            out.push(acc);
        }
        Ok(TotChain {
            n: c.n.saturating_sub(1),
            weight: c.weight,
            components: out,
        })
    }

    /// Solves `∂̄_V(r) = target` in block `(q, w)`.
    pub fn solve_dbar(&self, target: &CommPoly, q: u32, w: u32) -> Result<Option<CommPoly>> {
        let m = self.dbar_matrix(q, w)?;
        solve_in(&m, &self.r_basis(q, w)?, &self.omega_basis(q, w)?, target)
    }

    /// Completes class data `(r_n, ω_{n−1}, ω_{n−3}, …)` to a cycle of
    /// `Tot X⁺(R)_V` by solving `∂̄_V(r_{n−2k}) = d ω_{n−2k+1}`.
    pub fn lift(&self, class: &VClass) -> Result<TotChain<CommMonomial>> {
        let (n, w) = (class.n, class.weight);
        if n >= 1 && !self.d(&class.r)?.is_zero() {
            return Err(Error::UnsolvableLift { homdeg: n - 1, weight: w });
        }
        let mut comps = vec![class.r.clone()];
        let mut k = 0usize;
        while (2 * k as u32 + 1) <= n {
            let omega = class.omegas.get(k).cloned().unwrap_or_else(CommPoly::zero);
            let col = 2 * k as u32 + 1;
            if col + 1 <= n {
                let q = n - col - 1;
                let target = self.d(&omega)?;
                let r = self
                    .solve_dbar(&target, q, w)?
                    .ok_or(Error::UnsolvableLift { homdeg: q, weight: w })?;
                comps.push(omega);
                comps.push(r);
            } else {
                comps.push(omega);
            }
            k += 1;
        }
        Ok(TotChain {
            n,
            weight: w,
            components: comps,
        })
    }

    /// `Tr_V` applied componentwise to a chain of `Tot X⁺(R)`.
    pub fn trace_chain(&self, c: &TotChain<Word>) -> Result<TotChain<CommMonomial>> {
        Ok(TotChain {
            n: c.n,
            weight: c.weight,
            components: c
                .components
                .iter()
                .map(|x| self.trace(x))
                .collect::<Result<_>>()?,
        })
    }

    /// The extended trace of a cycle of `R̄_♮`: class data
    /// `(Tr r_n, Tr ω_{n−1}, Tr ω_{n−3}, …)` from a solved lift.
    pub fn extended_trace(&self, lifted: &TotChain<Word>) -> Result<VClass> {
        let t = self.trace_chain(lifted)?;
        Ok(VClass {
            n: t.n,
            weight: t.weight,
            r: t.component(0),
            omegas: t.components.iter().skip(1).step_by(2).cloned().collect(),
        })
    }
}

/// A class of `HC_n(A, V)` given by `r_n` and representatives of
/// `ω̄_{n−1}, ω̄_{n−3}, …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VClass {
    pub n: u32,
    pub weight: u32,
    pub r: CommPoly,
    pub omegas: Vec<CommPoly>,
}

/// Results of [`sv_bv`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SvBv {
    pub cycle: TotChain<CommMonomial>,
    pub s_v: TotChain<CommMonomial>,
    pub b_v: CommPoly,
}

impl SvBv {
    /// `S_V` as class data in degree `n − 2`.
    pub fn s_v_class(&self) -> VClass {
        VClass {
            n: self.s_v.n,
            weight: self.s_v.weight,
            r: self.s_v.component(0),
            omegas: self.s_v.components.iter().skip(1).step_by(2).cloned().collect(),
        }
    }
}

/// `S_V` and `B_V` of a class.
pub fn sv_bv(v: &VForms, class: &VClass) -> Result<SvBv> {
    let cycle = v.lift(class)?;
    let s_v = TotChain {
        n: cycle.n.saturating_sub(2),
        weight: cycle.weight,
        components: cycle.components.iter().skip(2).cloned().collect(),
    };
    let b_v = v.de_rham(&class.r)?;
    Ok(SvBv { cycle, s_v, b_v })
}

/// Which periodicity bicomplex a [`XComplex`] assembles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XSide {
    Noncommutative,
    Representation { dim: usize },
}

/// Block matrices of `X⁺(R)` or `X⁺(R)_V` in one weight, for internal
/// degrees `0..=q_max` and columns `0..=col_max`.
#[derive(Clone, Debug)]
pub struct XComplex {
    pub side: XSide,
    pub weight: u32,
    pub q_max: u32,
    pub col_max: u32,
    pub even_dims: Vec<usize>,
    pub odd_dims: Vec<usize>,
    /// odd column to even column: `β`, or zero on the representation side
    pub horizontal_odd: Vec<SparseMatrix>,
    /// even column to odd column: `∂̄` or `∂̄_V`
    pub horizontal_even: Vec<SparseMatrix>,
    pub vertical_even: Vec<SparseMatrix>,
    pub vertical_odd: Vec<SparseMatrix>,
}

pub fn x_complex_nc(
    r: &DgPresentation<Word>,
    weight: u32,
    q_max: u32,
    col_max: u32,
    limits: &Limits,
) -> Result<XComplex> {
    require_homogeneous(r)?;
    let f = NcForms::new(r, limits)?;
    let mut x = XComplex::empty(XSide::Noncommutative, weight, q_max, col_max);
    for q in 0..=q_max {
        x.even_dims.push(f.r_basis(q, weight)?.len());
        x.odd_dims.push(f.omega_basis(q, weight)?.len());
        x.horizontal_odd.push(f.beta_matrix(q, weight)?);
        x.horizontal_even.push(f.dbar_matrix(q, weight)?);
        x.vertical_even.push(f.d_r_matrix(q, weight)?);
        x.vertical_odd.push(f.d_omega_matrix(q, weight)?);
    }
    Ok(x)
}

pub fn x_complex_v(
    r: &DgPresentation<Word>,
    dim: usize,
    weight: u32,
    q_max: u32,
    col_max: u32,
    limits: &Limits,
) -> Result<XComplex> {
    require_homogeneous(r)?;
    let v = VForms::new(r, dim, limits)?;
    let mut x = XComplex::empty(XSide::Representation { dim }, weight, q_max, col_max);
    for q in 0..=q_max {
        let (nr, no) = (v.r_basis(q, weight)?.len(), v.omega_basis(q, weight)?.len());
        x.even_dims.push(nr);
        x.odd_dims.push(no);
        x.horizontal_odd.push(SparseMatrix::zero(nr, no));
        x.horizontal_even.push(v.dbar_matrix(q, weight)?);
        x.vertical_even.push(v.d_r_matrix(q, weight)?);
        x.vertical_odd.push(v.d_omega_matrix(q, weight)?);
    }
    Ok(x)
}

impl XComplex {
    fn empty(side: XSide, weight: u32, q_max: u32, col_max: u32) -> Self {
        XComplex {
            side,
            weight,
            q_max,
            col_max,
            even_dims: Vec::new(),
            odd_dims: Vec::new(),
            horizontal_odd: Vec::new(),
            horizontal_even: Vec::new(),
            vertical_even: Vec::new(),
            vertical_odd: Vec::new(),
        }
    }

    fn column_dim(&self, p: u32, q: u32) -> usize {
        if q > self.q_max {
            return 0;
        }
        if p % 2 == 0 {
            self.even_dims[q as usize]
        } else {
            self.odd_dims[q as usize]
        }
    }

    fn columns(&self, n: u32) -> impl Iterator<Item = u32> {
        0..=n.min(self.col_max)
    }

    pub fn total_dim(&self, n: u32) -> usize {
        self.columns(n).map(|p| self.column_dim(p, n - p)).sum()
    }

    /// `D: Tot_n → Tot_{n−1}` for `1 ≤ n ≤ q_max`.
    pub fn total_matrix(&self, n: u32) -> SparseMatrix {
        assert!(n >= 1 && n <= self.q_max, "total degree out of range");
        let mut row_off = BTreeMap::new();
        let mut acc = 0;
        for p in self.columns(n - 1) {
            row_off.insert(p, acc);
            acc += self.column_dim(p, n - 1 - p);
        }
        let mut m = SparseMatrix::zero(acc, self.total_dim(n));
        let mut col = 0;
        for p in self.columns(n) {
            let q = n - p;
            if p >= 1 {
                let h = if p % 2 == 1 {
                    &self.horizontal_odd[q as usize]
                } else {
                    &self.horizontal_even[q as usize]
                };
                place(&mut m, h, row_off[&(p - 1)], col, false);
            }
            if q >= 1 {
                let v = if p % 2 == 0 {
                    &self.vertical_even[q as usize]
                } else {
                    &self.vertical_odd[q as usize]
                };
                place(&mut m, v, row_off[&p], col, p % 2 == 1);
            }
            col += self.column_dim(p, q);
        }
        m
    }

    /// Total degrees `n` with `D_{n−1} D_n ≠ 0`.
    pub fn d_squared_failures(&self) -> Vec<u32> {
        (2..=self.q_max)
            .filter(|&n| !self.total_matrix(n - 1).mul(&self.total_matrix(n)).is_zero())
            .collect()
    }

    /// Kernel dimension of the horizontal map out of even columns, per
    /// internal degree.
    pub fn dbar_kernel_dims(&self) -> Vec<usize> {
        self.horizontal_even
            .iter()
            .map(|m| m.ncols() - m.rank())
            .collect()
    }

    /// Homology of row `q` at columns `0..col_max`.
    pub fn row_homology(&self, q: u32) -> Vec<usize> {
        let qi = q as usize;
        (0..self.col_max)
            .map(|p| {
                let dim = self.column_dim(p, q);
                let out = match p {
                    0 => 0,
                    p if p % 2 == 1 => self.horizontal_odd[qi].rank(),
                    _ => self.horizontal_even[qi].rank(),
                };
                let inc = if p % 2 == 0 {
                    self.horizontal_odd[qi].rank()
                } else {
                    self.horizontal_even[qi].rank()
                };
                dim - out - inc
            })
            .collect()
    }
}

fn place(m: &mut SparseMatrix, block: &SparseMatrix, r0: usize, c0: usize, negate: bool) {
    for i in 0..block.nrows() {
        for (&j, x) in block.row(i) {
            m.add_to(r0 + i, c0 + j, if negate { -x.clone() } else { x.clone() });
        }
    }
}

/// Homology of the derivation complex `Der(R, End V)` at a point `ρ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentComplex {
    pub chain_dims: Vec<usize>,
    /// rank of `C_n → C_{n+1}`
    pub ranks: Vec<usize>,
    pub homology: Vec<usize>,
}

type Dense = Vec<Q>;

fn dense_mul(a: &[Q], b: &[Q], d: usize) -> Dense {
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

fn dense_identity(d: usize) -> Dense {
    (0..d * d)
        .map(|k| if k % (d + 1) == 0 { Q::one() } else { Q::zero() })
        .collect()
}

/// Degree-`n` cochains are the values of a derivation on the degree-`n`
/// generators of `R`; the differential is `δ ↦ δ∘d`, evaluated through `ρ`.
/// Degree-zero generators of `R` are matched to those of `A` by name.
pub fn tangent_complex(
    a: &AlgebraPresentation,
    r: &DgPresentation<Word>,
    rho: &RepresentationPoint,
    n_max: u32,
) -> Result<TangentComplex> {
    rho.validate(a)?;
    let d = rho.dim;
    let gens = r.gens();
    let mut point: Vec<Option<Dense>> = Vec::with_capacity(gens.len());
    for g in gens {
        if g.homdeg == 0 && g.kind == GenKind::Algebra {
            let i = a
                .gens
                .iter()
                .position(|h| h.name == g.name)
                .ok_or_else(|| Error::UnknownGeneratorName(g.name.clone()))?;
            point.push(Some(rho.matrices[i].clone()));
        } else {
            point.push(None);
        }
    }
    let eval = |letters: &[Var]| -> Dense {
        letters.iter().fold(dense_identity(d), |acc, &l| {
            dense_mul(&acc, point[l as usize].as_ref().expect("degree-zero letter"), d)
        })
    };
    let of_degree = |n: u32| -> Vec<Var> {
        (0..gens.len() as Var)
            .filter(|&v| gens[v as usize].homdeg == n)
            .collect()
    };
    let dd = d * d;
    let mut chain_dims = Vec::new();
    let mut ranks = Vec::new();
    for n in 0..=n_max {
        let src = of_degree(n);
        let tgt = of_degree(n + 1);
        chain_dims.push(src.len() * dd);
        let mut m = SparseMatrix::zero(tgt.len() * dd, src.len() * dd);
        for (ti, &g2) in tgt.iter().enumerate() {
            for (w, c) in r.d_of(g2).terms() {
                let l = w.letters();
                for pos in 0..l.len() {
                    let Some(si) = src.iter().position(|&s| s == l[pos]) else {
                        continue;
                    };
                    if l.iter()
                        .enumerate()
                        .any(|(k, &x)| k != pos && gens[x as usize].homdeg != 0)
                    {
                        continue;
                    }
                    let pre = eval(&l[..pos]);
                    let suf = eval(&l[pos + 1..]);
                    for k in 0..d {
                        for ll in 0..d {
                            for i in 0..d {
                                let pk = &pre[k * d + i];
                                if pk.is_zero() {
                                    continue;
                                }
                                for j in 0..d {
                                    let sj = &suf[j * d + ll];
                                    if sj.is_zero() {
                                        continue;
                                    }
                                    m.add_to(
                                        ti * dd + k * d + ll,
                                        si * dd + i * d + j,
                                        c * pk * sj,
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
        ranks.push(m.rank());
    }
    let homology = (0..=n_max as usize)
        .map(|n| chain_dims[n] - ranks[n] - if n > 0 { ranks[n - 1] } else { 0 })
        .collect();
    Ok(TangentComplex {
        chain_dims,
        ranks,
        homology,
    })
}
