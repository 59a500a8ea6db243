//! Contracting homotopies for a resolution `R → A = H_0(R)` and the
//! recursively solved A∞ components `f_n: A^{⊗n} → R_{n−1}`.
//!
//! `A` is computed per weight: the standard monomials of weight `w` are the
//! words of `R_0(w)` that are not leading terms of `d(R_1(w))`, with leading
//! terms taken in descending word order. For `k⟨x,y;t⟩` with `dt = xy − yx`
//! this gives the basis `x^k y^m`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use crate::cyclic::{bar_b, FinDimAlgebra};
use crate::error::{Error, Limits, Result};
use crate::homology::block_basis;
use crate::linalg::{add_entry, ColumnOrder, Reduction, SparseMatrix, SparseVec};
use crate::poly::{DgPresentation, Monomial, NcPoly, Var, WeightBehavior, Word, Q};

struct WeightLevel {
    basis: Vec<Word>,
    /// pivot column and its reduced row, for the row space `d(R_1(w))`
    pivots: Vec<(usize, SparseVec)>,
}

impl WeightLevel {
    fn reduce(&self, mut v: SparseVec) -> SparseVec {
        for (pc, row) in &self.pivots {
            if let Some(c) = v.get(pc).cloned() {
                for (&j, x) in row {
                    add_entry(&mut v, j, -(&c * x));
                }
            }
        }
        v
    }
}

/// `A = H_0(R)` truncated at weight `w_max`, with its section `f_1`.
pub struct QuotientAlgebra {
    r: DgPresentation<Word>,
    w_max: u32,
    levels: Vec<WeightLevel>,
    algebra: FinDimAlgebra,
    /// basis index → standard word (`f_1` on the basis)
    sections: Vec<Word>,
    index: BTreeMap<Word, usize>,
}

pub(crate) fn require_homogeneous(r: &DgPresentation<Word>) -> Result<()> {
    if r.weight_behavior() != WeightBehavior::Homogeneous {
        let g = r.first_inhomogeneous(u32::MAX).expect("inhomogeneous generator");
        return Err(Error::NotHomogeneous(g.name.clone()));
    }
    Ok(())
}

impl QuotientAlgebra {
    pub fn new(r: DgPresentation<Word>, w_max: u32, limits: &Limits) -> Result<Self> {
        require_homogeneous(&r)?;
        let mut levels = Vec::new();
        let mut sections = Vec::new();
        for w in 0..=w_max {
            let basis = block_basis(&r, 0, w, limits)?.basis;
            let ones = block_basis(&r, 1, w, limits)?.basis;
            let mut m = SparseMatrix::zero(ones.len(), basis.len());
            for (i, g) in ones.iter().enumerate() {
                let dg = r.apply_d(&NcPoly::monomial(g.clone(), Q::one()))?;
                for (word, c) in dg.terms() {
                    let j = basis.binary_search(word).expect("degree-0 word of weight w");
                    m.set(i, j, c.clone());
                }
            }
            let red: Reduction = m.reduce_with(ColumnOrder::Reverse);
            let pivots: Vec<(usize, SparseVec)> = red
                .pivot_columns()
                .into_iter()
                .zip(red.rref_rows().into_iter().cloned())
                .collect();
            let mut standard: Vec<Word> = red
                .free_columns()
                .into_iter()
                .map(|j| basis[j].clone())
                .collect();
            standard.sort();
            sections.extend(standard);
            levels.push(WeightLevel { basis, pivots });
        }
        let gens = r.gens().to_vec();
        let index: BTreeMap<Word, usize> = sections
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let weights: Vec<u32> = sections.iter().map(|w| w.weight(&gens)).collect();
        let names: Vec<String> = sections
            .iter()
            .map(|w| {
                if w.is_one() {
                    "1".to_string()
                } else {
                    NcPoly::monomial(w.clone(), Q::one()).display(&gens).to_string()
                }
            })
            .collect();
        let mut q = QuotientAlgebra {
            r,
            w_max,
            levels,
            algebra: FinDimAlgebra::ground(),
            sections,
            index,
        };
        let n = q.sections.len();
        let mut mult = vec![vec![SparseVec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                if weights[i] + weights[j] <= w_max {
                    let w = q.sections[i].concat(&q.sections[j]);
                    mult[i][j] = q.project(&NcPoly::monomial(w, Q::one()))?;
                }
            }
        }
        q.algebra = FinDimAlgebra::new(names, mult, 0, Some(weights))?;
        Ok(q)
    }

    pub fn presentation(&self) -> &DgPresentation<Word> {
        &self.r
    }

    pub fn w_max(&self) -> u32 {
        self.w_max
    }

    /// `A/(weight > w_max)` as a finite-dimensional algebra; basis index 0
    /// is the unit.
    pub fn algebra(&self) -> &FinDimAlgebra {
        &self.algebra
    }

    pub fn section_word(&self, i: usize) -> &Word {
        &self.sections[i]
    }

    pub fn basis_index(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// `π: R_0 → A`, coordinates in the standard basis.
    pub fn project(&self, p: &NcPoly) -> Result<SparseVec> {
        let gens = self.r.gens();
        let mut by_weight: BTreeMap<u32, SparseVec> = BTreeMap::new();
        for (m, c) in p.terms() {
            if m.homdeg(gens) != 0 {
                continue;
            }
            let w = m.weight(gens);
            let level = self.levels.get(w as usize).ok_or_else(|| {
                Error::BoundsExceeded(alloc::format!("weight {w} above {}", self.w_max))
            })?;
            let j = level.basis.binary_search(m).expect("word in level");
            add_entry(by_weight.entry(w).or_default(), j, c.clone());
        }
        let mut out = SparseVec::new();
        for (w, v) in by_weight {
            let level = &self.levels[w as usize];
            for (j, c) in level.reduce(v) {
                let i = self.index[&level.basis[j]];
                add_entry(&mut out, i, c);
            }
        }
        Ok(out)
    }

    /// `f_1` on coordinates.
    pub fn section(&self, v: &SparseVec) -> NcPoly {
        NcPoly::from_terms(v.iter().map(|(&i, c)| (self.sections[i].clone(), c.clone())))
    }
}

/// A contracting homotopy `h` with `dh + hd = id − f_1 π`, built lazily per
/// block.
pub struct ContractingHomotopy {
    quotient: QuotientAlgebra,
    limits: Limits,
    order: ColumnOrder,
    solvers: BTreeMap<(u32, u32), (Vec<Word>, Vec<Word>, Reduction)>,
    cache: BTreeMap<Word, NcPoly>,
}

impl ContractingHomotopy {
    pub fn new(quotient: QuotientAlgebra, limits: Limits) -> Self {
        Self::with_order(quotient, limits, ColumnOrder::Forward)
    }

    /// Uses the given pivot policy when solving; different policies give
    /// different (homotopic) choices of `h`.
    pub fn with_order(quotient: QuotientAlgebra, limits: Limits, order: ColumnOrder) -> Self {
        ContractingHomotopy {
            quotient,
            limits,
            order,
            solvers: BTreeMap::new(),
            cache: BTreeMap::new(),
        }
    }

    pub fn quotient(&self) -> &QuotientAlgebra {
        &self.quotient
    }

    fn presentation(&self) -> &DgPresentation<Word> {
        &self.quotient.r
    }

    /// Solves `d c = target` in `R_{n+1}(w)`.
    fn solve(&mut self, n: u32, w: u32, target: &NcPoly) -> Result<NcPoly> {
        if target.is_zero() {
            return Ok(NcPoly::zero());
        }
        if !self.solvers.contains_key(&(n, w)) {
            let r = &self.quotient.r;
            let src = block_basis(r, n + 1, w, &self.limits)?.basis;
            let tgt = block_basis(r, n, w, &self.limits)?.basis;
            let mut m = SparseMatrix::zero(tgt.len(), src.len());
            for (j, g) in src.iter().enumerate() {
                let dg = r.apply_d(&NcPoly::monomial(g.clone(), Q::one()))?;
                for (word, c) in dg.terms() {
                    let i = tgt.binary_search(word).expect("homogeneous differential");
                    m.set(i, j, c.clone());
                }
            }
            let red = m.reduce_with(self.order);
            self.solvers.insert((n, w), (src, tgt, red));
        }
        let (src, tgt, red) = &self.solvers[&(n, w)];
        let mut b = SparseVec::new();
        for (m, c) in target.terms() {
            let i = tgt
                .binary_search(m)
                .map_err(|_| Error::NotAResolution { homdeg: n, weight: w })?;
            b.insert(i, c.clone());
        }
        let x = red
            .solve(&b)
            .ok_or(Error::NotAResolution { homdeg: n, weight: w })?;
        Ok(NcPoly::from_terms(
            x.into_iter().map(|(j, c)| (src[j].clone(), c)),
        ))
    }

    fn apply_monomial(&mut self, m: &Word) -> Result<NcPoly> {
        if let Some(v) = self.cache.get(m) {
            return Ok(v.clone());
        }
        let gens = self.presentation().gens().to_vec();
        let n = m.homdeg(&gens);
        let w = m.weight(&gens);
        let mono = NcPoly::monomial(m.clone(), Q::one());
        let target = if n == 0 {
            let pi = self.quotient.project(&mono)?;
            &mono - &self.quotient.section(&pi)
        } else {
            let dm = self.presentation().apply_d(&mono)?;
            let hdm = self.apply(&dm)?;
            &mono - &hdm
        };
        let out = self.solve(n, w, &target)?;
        self.cache.insert(m.clone(), out.clone());
        Ok(out)
    }

    /// `h(p)`.
    pub fn apply(&mut self, p: &NcPoly) -> Result<NcPoly> {
        let mut out = NcPoly::zero();
        for (m, c) in p.terms() {
            let hm = self.apply_monomial(m)?;
            out.add_scaled(&hm, c);
        }
        Ok(out)
    }

    /// `(dh + hd + f_1 π − id)(p)`; zero when the homotopy identity holds.
    pub fn identity_residual(&mut self, p: &NcPoly) -> Result<NcPoly> {
        let r = self.presentation().clone();
        let hp = self.apply(p)?;
        let dhp = r.apply_d(&hp)?;
        let hdp = self.apply(&r.apply_d(p)?)?;
        let pi = self.quotient.project(p)?;
        let f1pi = self.quotient.section(&pi);
        let mut res = &(&dhp + &hdp) + &f1pi;
        res -= p;
        Ok(res)
    }
}

/// The A∞ components `f_n` on words of non-unit basis elements of `A`.
pub struct AInftyMorphism {
    homotopy: ContractingHomotopy,
    n_max: usize,
    w_max: u32,
    /// `components[n]` maps basis words of length `n` to `f_n` of them
    components: Vec<BTreeMap<Vec<usize>, NcPoly>>,
}

fn sign(k: usize) -> Q {
    if k % 2 == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

impl AInftyMorphism {
    /// Solves `f_n = h(RHS_n)` for all `n ≤ n_max` on words of total weight
    /// at most `w_max` (which must not exceed the quotient's bound).
    pub fn solve_components(
        homotopy: ContractingHomotopy,
        n_max: usize,
        w_max: u32,
    ) -> Result<Self> {
        if w_max > homotopy.quotient.w_max {
            return Err(Error::BoundsExceeded(alloc::format!(
                "weight {w_max} above the quotient bound {}",
                homotopy.quotient.w_max
            )));
        }
        let a = homotopy.quotient.algebra.clone();
        let unit = a.unit();
        let mut components: Vec<BTreeMap<Vec<usize>, NcPoly>> = vec![BTreeMap::new(); n_max + 1];
        for i in 0..a.dim() {
            if a.weight(i) <= w_max {
                components[1].insert(vec![i], homotopy.quotient.section(&a.basis_vec(i)));
            }
        }
        let mut f = AInftyMorphism {
            homotopy,
            n_max,
            w_max,
            components,
        };
        for n in 2..=n_max {
            let mut words = Vec::new();
            enumerate_reduced(&a, n, w_max, &mut Vec::new(), &mut words);
            for w in words {
                debug_assert!(!w.contains(&unit));
                let rhs = f.rhs(&w)?;
                let value = f.homotopy.apply(&rhs)?;
                f.components[n].insert(w, value);
            }
        }
        Ok(f)
    }

    pub fn algebra(&self) -> &FinDimAlgebra {
        &self.homotopy.quotient.algebra
    }

    pub fn quotient(&self) -> &QuotientAlgebra {
        &self.homotopy.quotient
    }

    pub fn homotopy_mut(&mut self) -> &mut ContractingHomotopy {
        &mut self.homotopy
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn w_max(&self) -> u32 {
        self.w_max
    }

    /// `f_n` on a word of basis indices. Words containing the unit give zero
    /// for `n ≥ 2`.
    pub fn component(&self, word: &[usize]) -> Result<NcPoly> {
        let n = word.len();
        let a = self.algebra();
        if n == 0 || n > self.n_max {
            return Err(Error::BoundsExceeded(alloc::format!(
                "f_{n} requested with n_max = {}",
                self.n_max
            )));
        }
        if a.word_weight(word) > self.w_max {
            return Err(Error::BoundsExceeded(alloc::format!(
                "word weight {} above {}",
                a.word_weight(word),
                self.w_max
            )));
        }
        if n >= 2 && word.contains(&a.unit()) {
            return Ok(NcPoly::zero());
        }
        Ok(self.components[n].get(word).cloned().unwrap_or_default())
    }

    /// `f_n` extended multilinearly to a combination of words.
    pub fn component_on(&self, words: &BTreeMap<Vec<usize>, Q>) -> Result<NcPoly> {
        let mut out = NcPoly::zero();
        for (w, c) in words {
            out.add_scaled(&self.component(w)?, c);
        }
        Ok(out)
    }

    /// Overwrites a stored component (for negative tests).
    pub fn set_component(&mut self, word: Vec<usize>, value: NcPoly) {
        let n = word.len();
        self.components[n].insert(word, value);
    }

    pub fn stored_words(&self, n: usize) -> impl Iterator<Item = &Vec<usize>> {
        self.components[n].keys()
    }

    /// `Σ_{i} (−1)^{i−1} f_{n−1}(…, a_i a_{i+1}, …) + Σ_i (−1)^i f_i(a_1..a_i) f_{n−i}(a_{i+1}..a_n)`.
    fn rhs(&self, word: &[usize]) -> Result<NcPoly> {
        let n = word.len();
        let a = self.algebra();
        let gens = self.quotient().presentation().gens();
        let mut out = NcPoly::zero();
        for i in 0..n - 1 {
            for (&k, c) in a.product(word[i], word[i + 1]) {
                let mut w = word[..i].to_vec();
                w.push(k);
                w.extend_from_slice(&word[i + 2..]);
                out.add_scaled(&self.component(&w)?, &(sign(i) * c));
            }
        }
        for i in 1..n {
            let left = self.component(&word[..i])?;
            let right = self.component(&word[i..])?;
            out.add_scaled(&left.mul(&right, gens), &sign(i));
        }
        Ok(out)
    }
}

fn enumerate_reduced(
    a: &FinDimAlgebra,
    len: usize,
    rem: u32,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if cur.len() == len {
        out.push(cur.clone());
        return;
    }
    for i in 0..a.dim() {
        if i == a.unit() || a.weight(i) > rem {
            continue;
        }
        cur.push(i);
        enumerate_reduced(a, len, rem - a.weight(i), cur, out);
        cur.pop();
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistingEntry {
    pub word: Vec<usize>,
    pub residual: NcPoly,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwistingReport {
    pub checked: usize,
    pub failures: Vec<TwistingEntry>,
}

impl TwistingReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Re-checks `d f_n = f_{n−1} b' + Σ (−1)^i f_i f_{n−i}` on every word
/// (including words containing the unit) with `b'` assembled by the cyclic
/// module, and `π f_1 = id` for `n = 1`.
pub fn check_twisting(f: &AInftyMorphism, n_max: usize, w_max: u32) -> Result<TwistingReport> {
    let a = f.algebra();
    let r = f.quotient().presentation();
    let gens = r.gens();
    let mut report = TwistingReport::default();
    let limits = Limits::default();
    for n in 1..=n_max.min(f.n_max) {
        for w in 0..=w_max.min(f.w_max) {
            for word in a.words(n, Some(w), &limits)? {
                report.checked += 1;
                let residual = if n == 1 {
                    let pi = f.quotient().project(&f.component(&word)?)?;
                    let back = f.quotient().section(&pi);
                    let want = f.quotient().section(&a.basis_vec(word[0]));
                    &back - &want
                } else {
                    let lhs = r.apply_d(&f.component(&word)?)?;
                    let mut rhs = f.component_on(&bar_b(a, &word))?;
                    for i in 1..n {
                        let p = f.component(&word[..i])?.mul(&f.component(&word[i..])?, gens);
                        rhs.add_scaled(&p, &sign(i));
                    }
                    &lhs - &rhs
                };
                if !residual.is_zero() {
                    report.failures.push(TwistingEntry { word, residual });
                }
            }
        }
    }
    Ok(report)
}

/// Convenience: quotient, homotopy and components in one call.
pub fn build(
    r: &DgPresentation<Word>,
    n_max: usize,
    w_max: u32,
    limits: &Limits,
) -> Result<AInftyMorphism> {
    let q = QuotientAlgebra::new(r.clone(), w_max, limits)?;
    AInftyMorphism::solve_components(ContractingHomotopy::new(q, *limits), n_max, w_max)
}

/// Basis index of a word of algebra generators in the quotient, by name.
pub fn basis_index_of(q: &QuotientAlgebra, letters: &[Var]) -> Option<usize> {
    q.basis_index(&Word(letters.to_vec()))
}
