//! Connes' cyclic complex, the Hochschild and bar differentials, and the
//! norm map, for finite-dimensional algebras given by structure constants.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Limits, Result};
use crate::linalg::{add_entry, SparseMatrix, SparseVec};
use crate::poly::Q;

/// A finite-dimensional unital algebra on an explicit basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinDimAlgebra {
    names: Vec<String>,
    /// `mult[i][j]` = coordinates of `e_i e_j`
    mult: Vec<Vec<SparseVec>>,
    unit: usize,
    weights: Option<Vec<u32>>,
}

impl FinDimAlgebra {
    /// Validates the unit laws, associativity and weight compatibility.
    pub fn new(
        names: Vec<String>,
        mult: Vec<Vec<SparseVec>>,
        unit: usize,
        weights: Option<Vec<u32>>,
    ) -> Result<Self> {
        let n = names.len();
        if unit >= n || mult.len() != n || mult.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidAlgebra(format!(
                "structure constants must form a {n}x{n} table with a unit in range"
            )));
        }
        if mult.iter().flatten().flat_map(|v| v.keys()).any(|&k| k >= n) {
            return Err(Error::InvalidAlgebra("basis index out of range".into()));
        }
        let a = FinDimAlgebra {
            names,
            mult,
            unit,
            weights,
        };
        for i in 0..n {
            let e: SparseVec = [(i, Q::one())].into_iter().collect();
            if a.mult[unit][i] != e || a.mult[i][unit] != e {
                return Err(Error::InvalidAlgebra(format!(
                    "`{}` is not a two-sided unit",
                    a.names[unit]
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = a.mul_vec(&a.mult[i][j], &a.basis_vec(k));
                    let rhs = a.mul_vec(&a.basis_vec(i), &a.mult[j][k]);
                    if lhs != rhs {
                        return Err(Error::InvalidAlgebra(format!(
                            "multiplication is not associative on ({}, {}, {})",
                            a.names[i], a.names[j], a.names[k]
                        )));
                    }
                }
            }
        }
        if let Some(w) = &a.weights {
            if w.len() != n || w[unit] != 0 {
                return Err(Error::InvalidAlgebra(
                    "weights must cover the basis and vanish on the unit".into(),
                ));
            }
            for i in 0..n {
                for j in 0..n {
                    if a.mult[i][j].keys().any(|&k| w[k] != w[i] + w[j]) {
                        return Err(Error::InvalidAlgebra(
                            "multiplication does not preserve weights".into(),
                        ));
                    }
                }
            }
        }
        Ok(a)
    }

    /// The ground field.
    pub fn ground() -> Self {
        let one: SparseVec = [(0, Q::one())].into_iter().collect();
        Self::new(vec!["1".into()], vec![vec![one]], 0, Some(vec![0])).unwrap()
    }

    /// `k[ε]/(ε²)` with `ε` of weight one.
    pub fn dual_numbers() -> Self {
        Self::truncated_polynomial(&[("eps", 1)], 1)
    }

    /// `k × k` on the basis `1, e` with `e² = e`.
    pub fn product_kk() -> Self {
        let v = |i: usize| -> SparseVec { [(i, Q::one())].into_iter().collect() };
        Self::new(
            vec!["1".into(), "e".into()],
            vec![vec![v(0), v(1)], vec![v(1), v(1)]],
            0,
            None,
        )
        .unwrap()
    }

    /// `M_n(ℚ)` on the basis `1, E_ij ((i, j) ≠ (n, n))`.
    pub fn matrix_algebra(n: usize) -> Self {
        let mut labels = vec![(usize::MAX, usize::MAX)];
        let mut names = vec![String::from("1")];
        for i in 0..n {
            for j in 0..n {
                if (i, j) != (n - 1, n - 1) {
                    labels.push((i, j));
                    names.push(format!("E{}{}", i + 1, j + 1));
                }
            }
        }
        // coordinates of E_ij
        let coords = |i: usize, j: usize| -> SparseVec {
            let mut v = SparseVec::new();
            if (i, j) == (n - 1, n - 1) {
                v.insert(0, Q::one());
                for k in 0..n - 1 {
                    let idx = labels.iter().position(|&l| l == (k, k)).unwrap();
                    v.insert(idx, -Q::one());
                }
            } else {
                v.insert(labels.iter().position(|&l| l == (i, j)).unwrap(), Q::one());
            }
            v
        };
        // matrix of basis element b as a list of (i, j, coefficient)
        let as_matrix = |b: usize| -> Vec<(usize, usize)> {
            if b == 0 {
                (0..n).map(|i| (i, i)).collect()
            } else {
                vec![labels[b]]
            }
        };
        let dim = names.len();
        let mut mult = vec![vec![SparseVec::new(); dim]; dim];
        for a in 0..dim {
            for b in 0..dim {
                let mut acc = SparseVec::new();
                for &(i, k) in &as_matrix(a) {
                    for &(k2, j) in &as_matrix(b) {
                        if k == k2 {
                            for (idx, c) in coords(i, j) {
                                add_entry(&mut acc, idx, c);
                            }
                        }
                    }
                }
                mult[a][b] = acc;
            }
        }
        Self::new(names, mult, 0, None).unwrap()
    }

    /// `k[x_1..x_m]/(monomials of weight > max_weight)`.
    pub fn truncated_polynomial(vars: &[(&str, u32)], max_weight: u32) -> Self {
        let mut monos: Vec<Vec<u32>> = Vec::new();
        fn go(vars: &[(&str, u32)], i: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if i == vars.len() {
                out.push(cur.clone());
                return;
            }
            let w = vars[i].1;
            let mut e = 0;
            loop {
                cur.push(e);
                go(vars, i + 1, rem - e * w, cur, out);
                cur.pop();
                e += 1;
                if e * w > rem {
                    break;
                }
            }
        }
        go(vars, 0, max_weight, &mut Vec::new(), &mut monos);
        let weight = |m: &[u32]| -> u32 { m.iter().zip(vars).map(|(e, (_, w))| e * w).sum() };
        monos.sort_by(|a, b| weight(a).cmp(&weight(b)).then_with(|| b.cmp(a)));
        let names: Vec<String> = monos
            .iter()
            .map(|m| {
                let parts: Vec<String> = m
                    .iter()
                    .zip(vars)
                    .filter(|(e, _)| **e > 0)
                    .map(|(e, (n, _))| if *e == 1 { String::from(*n) } else { format!("{n}^{e}") })
                    .collect();
                if parts.is_empty() {
                    String::from("1")
                } else {
                    parts.join("*")
                }
            })
            .collect();
        let dim = monos.len();
        let mut mult = vec![vec![SparseVec::new(); dim]; dim];
        for a in 0..dim {
            for b in 0..dim {
                let prod: Vec<u32> = monos[a].iter().zip(&monos[b]).map(|(x, y)| x + y).collect();
                if let Some(k) = monos.iter().position(|m| *m == prod) {
                    mult[a][b].insert(k, Q::one());
                }
            }
        }
        let weights = monos.iter().map(|m| weight(m)).collect();
        Self::new(names, mult, 0, Some(weights)).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn weights(&self) -> Option<&[u32]> {
        self.weights.as_deref()
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.weights.as_ref().map_or(0, |w| w[i])
    }

    pub fn product(&self, i: usize, j: usize) -> &SparseVec {
        &self.mult[i][j]
    }

    pub fn basis_vec(&self, i: usize) -> SparseVec {
        [(i, Q::one())].into_iter().collect()
    }

    pub fn mul_vec(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, x) in a {
            for (&j, y) in b {
                let c = x * y;
                for (&k, z) in &self.mult[i][j] {
                    add_entry(&mut out, k, &c * z);
                }
            }
        }
        out
    }

    /// All words of the given length over the basis, of total weight
    /// `weight` when given.
    pub fn words(&self, len: usize, weight: Option<u32>, limits: &Limits) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(len);
        self.words_rec(len, weight, &mut cur, &mut out, limits)?;
        Ok(out)
    }

    fn words_rec(
        &self,
        len: usize,
        rem: Option<u32>,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limits: &Limits,
    ) -> Result<()> {
        if cur.len() == len {
            if rem.map_or(true, |r| r == 0) {
                out.push(cur.clone());
                limits.check(len as u32, 0, out.len())?;
            }
            return Ok(());
        }
        for i in 0..self.dim() {
            let w = self.weight(i);
            let next = match rem {
                Some(r) if w > r => continue,
                Some(r) => Some(r - w),
                None => None,
            };
            cur.push(i);
            self.words_rec(len, next, cur, out, limits)?;
            cur.pop();
        }
        Ok(())
    }

    /// Weight of a word.
    pub fn word_weight(&self, w: &[usize]) -> u32 {
        w.iter().map(|&i| self.weight(i)).sum()
    }
}

/// `t(a_0, …, a_n) = (−1)^n (a_n, a_0, …, a_{n−1})`; returns the rotated
/// word and whether the sign is negative.
pub fn rotate(word: &[usize]) -> (Vec<usize>, bool) {
    let n = word.len() - 1;
    let mut out = Vec::with_capacity(word.len());
    out.push(word[n]);
    out.extend_from_slice(&word[..n]);
    (out, n % 2 == 1)
}

/// Canonical representative of a word modulo `Im(1 − t)`: the lex-least
/// rotation together with the sign `±1`, or sign `0` when the orbit is
/// killed (some power of `t` fixes the word with sign −1).
pub fn cyclic_reduce(word: &[usize]) -> (Vec<usize>, i8) {
    let len = word.len();
    let n = len - 1;
    let mut best: Option<(Vec<usize>, i8)> = None;
    let mut zero = false;
    for k in 0..len {
        // t^k moves the last k letters to the front, sign (−1)^{nk}
        let mut w = Vec::with_capacity(len);
        w.extend_from_slice(&word[len - k..]);
        w.extend_from_slice(&word[..len - k]);
        let sign: i8 = if (n * k) % 2 == 1 { -1 } else { 1 };
        match &best {
            Some((b, s)) if *b == w => {
                if *s != sign {
                    zero = true;
                }
            }
            Some((b, _)) if *b < w => {}
            _ => best = Some((w, sign)),
        }
    }
    let (w, s) = best.expect("nonempty word");
    // the representative x satisfies word = sign * t^k x, so x ≡ sign * word
    (w, if zero { 0 } else { s })
}

/// An element of `CC_n(A) = A^{⊗(n+1)}/Im(1 − t)` on canonical words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CyclicChain {
    pub n: usize,
    pub terms: BTreeMap<Vec<usize>, Q>,
}

impl CyclicChain {
    pub fn new(n: usize) -> Self {
        CyclicChain {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// Adds `c · word`, reducing to the canonical representative.
    pub fn add(&mut self, word: &[usize], c: Q) {
        assert_eq!(word.len(), self.n + 1, "word length must be n + 1");
        let (w, s) = cyclic_reduce(word);
        if s == 0 || c.is_zero() {
            return;
        }
        let c = if s < 0 { -c } else { c };
        let e = self.terms.entry(w.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn from_word(word: &[usize]) -> Self {
        let mut c = CyclicChain::new(word.len() - 1);
        c.add(word, Q::one());
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Canonical nondegenerate words of `CC_n`, optionally of one weight.
pub fn cyclic_basis(
    a: &FinDimAlgebra,
    n: usize,
    weight: Option<u32>,
    limits: &Limits,
) -> Result<Vec<Vec<usize>>> {
    Ok(a.words(n + 1, weight, limits)?
        .into_iter()
        .filter(|w| {
            let (c, s) = cyclic_reduce(w);
            s != 0 && c == *w
        })
        .collect())
}

/// Hochschild boundary of a word of length `n + 1`, as words of length `n`.
pub fn hochschild_b(a: &FinDimAlgebra, word: &[usize]) -> BTreeMap<Vec<usize>, Q> {
    let n = word.len() - 1;
    let mut out = BTreeMap::new();
    if n == 0 {
        return out;
    }
    for i in 0..n {
        let sign = if i % 2 == 0 { Q::one() } else { -Q::one() };
        for (&k, c) in a.product(word[i], word[i + 1]) {
            let mut w = word[..i].to_vec();
            w.push(k);
            w.extend_from_slice(&word[i + 2..]);
            add_word(&mut out, w, &sign * c);
        }
    }
    let sign = if n % 2 == 0 { Q::one() } else { -Q::one() };
    for (&k, c) in a.product(word[n], word[0]) {
        let mut w = vec![k];
        w.extend_from_slice(&word[1..n]);
        add_word(&mut out, w, &sign * c);
    }
    out
}

/// Bar differential `b'(a_1, …, a_n) = Σ_{i<n} (−1)^{i−1} (…, a_i a_{i+1}, …)`.
pub fn bar_b(a: &FinDimAlgebra, word: &[usize]) -> BTreeMap<Vec<usize>, Q> {
    let len = word.len();
    let mut out = BTreeMap::new();
    for i in 0..len.saturating_sub(1) {
        let sign = if i % 2 == 0 { Q::one() } else { -Q::one() };
        for (&k, c) in a.product(word[i], word[i + 1]) {
            let mut w = word[..i].to_vec();
            w.push(k);
            w.extend_from_slice(&word[i + 2..]);
            add_word(&mut out, w, &sign * c);
        }
    }
    out
}

fn add_word(map: &mut BTreeMap<Vec<usize>, Q>, w: Vec<usize>, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = map.entry(w.clone()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        map.remove(&w);
    }
}

fn index_of(basis: &[Vec<usize>], w: &[usize]) -> Option<usize> {
    basis.binary_search_by(|b| b.as_slice().cmp(w)).ok()
}

/// `b` on a cyclic chain.
pub fn cyclic_b(a: &FinDimAlgebra, c: &CyclicChain) -> CyclicChain {
    let mut out = CyclicChain::new(c.n.saturating_sub(1));
    if c.n == 0 {
        return out;
    }
    for (w, x) in &c.terms {
        for (v, y) in hochschild_b(a, w) {
            out.add(&v, x * y);
        }
    }
    out
}

/// Matrices of the boundary maps in degree `n` for one weight (or all).
#[derive(Clone, Debug)]
pub struct BoundaryMaps {
    /// canonical words of `CC_n`
    pub cc_source: Vec<Vec<usize>>,
    /// canonical words of `CC_{n−1}`
    pub cc_target: Vec<Vec<usize>>,
    /// `b: CC_n → CC_{n−1}`
    pub b: SparseMatrix,
    /// words of `A^{⊗n}`
    pub bar_source: Vec<Vec<usize>>,
    /// words of `A^{⊗(n−1)}`
    pub bar_target: Vec<Vec<usize>>,
    /// `b': A^{⊗n} → A^{⊗(n−1)}`
    pub b_prime: SparseMatrix,
}

pub fn cyclic_b_matrix(
    a: &FinDimAlgebra,
    n: usize,
    weight: Option<u32>,
    limits: &Limits,
) -> Result<(Vec<Vec<usize>>, Vec<Vec<usize>>, SparseMatrix)> {
    let source = cyclic_basis(a, n, weight, limits)?;
    let target = if n == 0 {
        Vec::new()
    } else {
        cyclic_basis(a, n - 1, weight, limits)?
    };
    let mut m = SparseMatrix::zero(target.len(), source.len());
    if n > 0 {
        for (j, w) in source.iter().enumerate() {
            let img = cyclic_b(a, &CyclicChain::from_word(w));
            for (v, c) in img.terms {
                let i = index_of(&target, &v).expect("canonical word in basis");
                m.add_to(i, j, c);
            }
        }
    }
    Ok((source, target, m))
}

fn raw_matrix(
    a: &FinDimAlgebra,
    src_len: usize,
    weight: Option<u32>,
    limits: &Limits,
    f: impl Fn(&FinDimAlgebra, &[usize]) -> BTreeMap<Vec<usize>, Q>,
) -> Result<(Vec<Vec<usize>>, Vec<Vec<usize>>, SparseMatrix)> {
    let source = a.words(src_len, weight, limits)?;
    let target = if src_len == 0 {
        Vec::new()
    } else {
        a.words(src_len - 1, weight, limits)?
    };
    let mut m = SparseMatrix::zero(target.len(), source.len());
    for (j, w) in source.iter().enumerate() {
        for (v, c) in f(a, w) {
            let i = index_of(&target, &v).expect("word in basis");
            m.add_to(i, j, c);
        }
    }
    Ok((source, target, m))
}

/// Hochschild `b: A^{⊗(n+1)} → A^{⊗n}`.
pub fn hochschild_b_matrix(
    a: &FinDimAlgebra,
    n: usize,
    weight: Option<u32>,
    limits: &Limits,
) -> Result<(Vec<Vec<usize>>, Vec<Vec<usize>>, SparseMatrix)> {
    if n == 0 {
        let source = a.words(1, weight, limits)?;
        let m = SparseMatrix::zero(0, source.len());
        return Ok((source, Vec::new(), m));
    }
    raw_matrix(a, n + 1, weight, limits, hochschild_b)
}

/// `b': A^{⊗n} → A^{⊗(n−1)}`.
pub fn bar_b_matrix(
    a: &FinDimAlgebra,
    n: usize,
    weight: Option<u32>,
    limits: &Limits,
) -> Result<(Vec<Vec<usize>>, Vec<Vec<usize>>, SparseMatrix)> {
    raw_matrix(a, n, weight, limits, bar_b)
}

pub fn boundary_maps(
    a: &FinDimAlgebra,
    n: usize,
    weight: Option<u32>,
    limits: &Limits,
) -> Result<BoundaryMaps> {
    let (cc_source, cc_target, b) = cyclic_b_matrix(a, n, weight, limits)?;
    let (bar_source, bar_target, b_prime) = bar_b_matrix(a, n, weight, limits)?;
    Ok(BoundaryMaps {
        cc_source,
        cc_target,
        b,
        bar_source,
        bar_target,
        b_prime,
    })
}

fn drop_unit_word(
    a: &FinDimAlgebra,
    basis: &[Vec<usize>],
) -> Vec<usize> {
    basis
        .iter()
        .enumerate()
        .filter(|(_, w)| !w.iter().all(|&x| x == a.unit()))
        .map(|(i, _)| i)
        .collect()
}

/// Dimensions of `HC_n` for `n ≤ n_max` (at one weight, or in total for a
/// finite-dimensional algebra). With `reduced`, the quotient by `CC(k)`.
pub fn hc_dims(
    a: &FinDimAlgebra,
    n_max: usize,
    weight: Option<u32>,
    reduced: bool,
    limits: &Limits,
) -> Result<Vec<usize>> {
    let mut mats = Vec::with_capacity(n_max + 2);
    let mut dims = Vec::with_capacity(n_max + 2);
    for n in 0..=n_max + 1 {
        let (src, tgt, m) = cyclic_b_matrix(a, n, weight, limits)?;
        let (m, dim) = if reduced {
            let cols = drop_unit_word(a, &src);
            let rows = drop_unit_word(a, &tgt);
            let mt = m.transpose().select_rows(&cols).transpose().select_rows(&rows);
            (mt, cols.len())
        } else {
            (m, src.len())
        };
        mats.push(m.rank());
        dims.push(dim);
    }
    Ok((0..=n_max)
        .map(|n| dims[n] - mats[n] - mats[n + 1])
        .collect())
}

/// Per-weight table: `table[w][n] = dim HC_n` at weight `w`.
pub fn hc_dims_by_weight(
    a: &FinDimAlgebra,
    n_max: usize,
    w_max: u32,
    reduced: bool,
    limits: &Limits,
) -> Result<Vec<Vec<usize>>> {
    (0..=w_max)
        .map(|w| hc_dims(a, n_max, Some(w), reduced, limits))
        .collect()
}

/// `dim A − rank span{ab − ba}`.
pub fn hc0_by_commutators(a: &FinDimAlgebra) -> usize {
    let n = a.dim();
    let mut cols = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut v = a.product(i, j).clone();
            for (&k, c) in a.product(j, i) {
                add_entry(&mut v, k, -c.clone());
            }
            cols.push(v);
        }
    }
    n - SparseMatrix::from_columns(n, &cols).rank()
}

/// `t` on `A^{⊗n}` as a matrix over the given word basis.
pub fn rotation_matrix(words: &[Vec<usize>]) -> SparseMatrix {
    let mut m = SparseMatrix::zero(words.len(), words.len());
    for (j, w) in words.iter().enumerate() {
        let (r, neg) = rotate(w);
        let i = index_of(words, &r).expect("rotation stays in basis");
        m.set(i, j, if neg { -Q::one() } else { Q::one() });
    }
    m
}

/// The norm map `N_n = Σ_k t^k: CC_{n−1}(A) → A^{⊗n}`, columns on canonical
/// words and rows on all words.
pub fn norm_matrix(
    a: &FinDimAlgebra,
    n: usize,
    limits: &Limits,
) -> Result<(Vec<Vec<usize>>, Vec<Vec<usize>>, SparseMatrix)> {
    let cols = cyclic_basis(a, n - 1, None, limits)?;
    let rows = a.words(n, None, limits)?;
    let mut m = SparseMatrix::zero(rows.len(), cols.len());
    for (j, w) in cols.iter().enumerate() {
        let mut cur = w.clone();
        let mut neg = false;
        for _ in 0..n {
            let i = index_of(&rows, &cur).unwrap();
            m.add_to(i, j, if neg { -Q::one() } else { Q::one() });
            let (next, s) = rotate(&cur);
            cur = next;
            neg ^= s;
        }
    }
    Ok((cols, rows, m))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormCheck {
    pub n: usize,
    pub cc_dim: usize,
    pub rank: usize,
    pub invariant_dim: usize,
    pub injective: bool,
    pub image_is_invariants: bool,
    pub annihilated_by_one_minus_t: bool,
    pub chain_map: bool,
}

impl NormCheck {
    pub fn passed(&self) -> bool {
        self.injective
            && self.image_is_invariants
            && self.annihilated_by_one_minus_t
            && self.chain_map
    }
}

/// Checks, for `1 ≤ n ≤ n_max`, that `N_n` is injective with image
/// `ker(1 − t)`, that `(1 − t) N_n = 0`, and that `b' N_n = N_{n−1} b`.
pub fn norm_check(a: &FinDimAlgebra, n_max: usize, limits: &Limits) -> Result<Vec<NormCheck>> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        let (cols, rows, nm) = norm_matrix(a, n, limits)?;
        let t = rotation_matrix(&rows);
        let one_minus_t = SparseMatrix::identity(rows.len()).sub(&t);
        let rank = nm.rank();
        let invariant_dim = one_minus_t.reduce().nullity();
        let annihilated = one_minus_t.mul(&nm).is_zero();
        let chain_map = if n == 1 {
            true
        } else {
            let (_, _, bp) = bar_b_matrix(a, n, None, limits)?;
            let (_, _, b) = cyclic_b_matrix(a, n - 1, None, limits)?;
            let (_, _, nm1) = norm_matrix(a, n - 1, limits)?;
            bp.mul(&nm) == nm1.mul(&b)
        };
        out.push(NormCheck {
            n,
            cc_dim: cols.len(),
            rank,
            invariant_dim,
            injective: rank == cols.len(),
            image_is_invariants: annihilated && rank == invariant_dim,
            annihilated_by_one_minus_t: annihilated,
            chain_map,
        });
    }
    Ok(out)
}
