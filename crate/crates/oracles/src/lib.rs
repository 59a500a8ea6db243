//! Brute-force reference computations for the test suites.
//!
//! Oracles use only the polynomial kernel of `drep-core` (monomials,
//! presentations) and do their own enumeration and dense elimination, so they
//! share no code path with the engine's homology, cyclic or representation
//! modules. They favor clarity over speed.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;
use std::hash::{Hash, Hasher};

use drep_core::poly::q;
use drep_core::{DgPresentation, Error, Monomial, Poly, Result, Var, Q};
use num_traits::{One, Zero};

/// A value computed by an oracle, with enough context to reproduce it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult<T> {
    pub oracle: &'static str,
    pub digest: u64,
    pub value: T,
    pub method: &'static str,
}

fn digest(inputs: &impl Debug) -> u64 {
    let mut h = DefaultHasher::new();
    format!("{:?}", inputs).hash(&mut h);
    h.finish()
}

/// Rank of a dense rational matrix by plain Gaussian elimination.
pub fn dense_rank(mut rows: Vec<Vec<Q>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = &rows[r][c] / &pivot;
                for k in c..ncols {
                    let x = &rows[rank][k] * &f;
                    rows[r][k] -= x;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Whether two families of vectors span the same subspace.
pub fn same_span(a: &[Vec<Q>], b: &[Vec<Q>]) -> bool {
    let ra = dense_rank(a.to_vec());
    let rb = dense_rank(b.to_vec());
    let both = dense_rank(a.iter().chain(b).cloned().collect());
    ra == rb && ra == both
}

/// Monomials of a bidegree found by expanding every generator sequence.
fn monomials_by_sequences<M: Monomial>(
    p: &DgPresentation<M>,
    homdeg: u32,
    weight: u32,
    limit: usize,
) -> Result<Vec<M>> {
    let gens = p.gens();
    let mut found = BTreeSet::new();
    let mut stack: Vec<(Vec<Var>, u32, u32)> = vec![(Vec::new(), 0, 0)];
    let mut visited = 0usize;
    while let Some((seq, h, w)) = stack.pop() {
        visited += 1;
        if visited > limit {
            return Err(Error::ResourceExhausted {
                homdeg,
                weight,
                size: visited,
                limit,
            });
        }
        if h == homdeg && w == weight {
            if let Some((m, _)) = M::product(&seq, gens) {
                found.insert(m);
            }
            continue;
        }
        for (v, g) in gens.iter().enumerate() {
            if h + g.homdeg <= homdeg && w + g.weight <= weight && g.weight > 0 {
                let mut s = seq.clone();
                s.push(v as Var);
                stack.push((s, h + g.homdeg, w + g.weight));
            }
        }
    }
    Ok(found.into_iter().collect())
}

fn differential_dense<M: Monomial>(
    p: &DgPresentation<M>,
    source: &[M],
    target: &[M],
) -> Result<Vec<Vec<Q>>> {
    let index: BTreeMap<&M, usize> = target.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = vec![vec![Q::zero(); source.len()]; target.len()];
    for (j, m) in source.iter().enumerate() {
        let dm = p.apply_d(&Poly::monomial(m.clone(), Q::one()))?;
        for (t, c) in dm.terms() {
            let i = *index.get(t).ok_or(Error::Inhomogeneous)?;
            rows[i][j] += c;
        }
    }
    Ok(rows)
}

/// `dim H_n` in weight `w` of a weight-homogeneous presentation.
pub fn oracle_homology_by_enumeration<M: Monomial>(
    p: &DgPresentation<M>,
    n: u32,
    w: u32,
) -> Result<OracleResult<usize>> {
    const LIMIT: usize = 5_000_000;
    let here = monomials_by_sequences(p, n, w, LIMIT)?;
    let below = if n > 0 {
        monomials_by_sequences(p, n - 1, w, LIMIT)?
    } else {
        Vec::new()
    };
    let above = monomials_by_sequences(p, n + 1, w, LIMIT)?;
    let rank_out = if n > 0 && !here.is_empty() && !below.is_empty() {
        dense_rank(differential_dense(p, &here, &below)?)
    } else {
        0
    };
    let rank_in = if !above.is_empty() && !here.is_empty() {
        dense_rank(differential_dense(p, &above, &here)?)
    } else {
        0
    };
    Ok(OracleResult {
        oracle: "homology_by_enumeration",
        digest: digest(&(p.gens(), n, w)),
        value: here.len() - rank_out - rank_in,
        method: "generator-sequence enumeration and dense elimination",
    })
}

type Exponents = Vec<u32>;

fn exponent_vectors(nvars: usize, degree: u32) -> Vec<Exponents> {
    fn go(nvars: usize, left: u32, cur: &mut Exponents, out: &mut Vec<Exponents>) {
        if cur.len() + 1 == nvars {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            go(nvars, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if degree == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(nvars, degree, &mut Vec::new(), &mut out);
    out
}

fn add_exponents(a: &[u32], b: &[u32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Hilbert function of `ℚ[x_ij, y_ij] / (entries of XY − YX)` for `d × d`
/// generic matrices, weights `0..=w_max`.
pub fn oracle_commuting_variety_dims(dim: usize, w_max: u32) -> OracleResult<Vec<usize>> {
    let nv = 2 * dim * dim;
    let x = |i: usize, j: usize| i * dim + j;
    let y = |i: usize, j: usize| dim * dim + i * dim + j;
    let unit = |v: usize| -> Exponents {
        let mut e = vec![0; nv];
        e[v] += 1;
        e
    };
    let mut relations: Vec<BTreeMap<Exponents, Q>> = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            let mut r = BTreeMap::new();
            for k in 0..dim {
                let a = add_exponents(&unit(x(i, k)), &unit(y(k, j)));
                let b = add_exponents(&unit(y(i, k)), &unit(x(k, j)));
                *r.entry(a).or_insert_with(Q::zero) += q(1);
                *r.entry(b).or_insert_with(Q::zero) -= q(1);
            }
            r.retain(|_, c| !c.is_zero());
            if !r.is_empty() {
                relations.push(r);
            }
        }
    }
    let mut dims = Vec::new();
    for w in 0..=w_max {
        let basis = exponent_vectors(nv, w);
        let index: BTreeMap<&Exponents, usize> =
            basis.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut rows = Vec::new();
        if w >= 2 {
            for m in exponent_vectors(nv, w - 2) {
                for r in &relations {
                    let mut row = vec![Q::zero(); basis.len()];
                    for (e, c) in r {
                        row[index[&add_exponents(&m, e)]] += c;
                    }
                    rows.push(row);
                }
            }
        }
        let rank = if rows.is_empty() { 0 } else { dense_rank(rows) };
        dims.push(basis.len() - rank);
    }
    OracleResult {
        oracle: "commuting_variety_dims",
        digest: digest(&(dim, w_max)),
        value: dims,
        method: "dense rank of the degree-w part of the ideal",
    }
}

/// Spanning vectors of the image of `(1/n) Σ_k t^k` on `A^{⊗n}` for an
/// algebra of dimension `dim`, with `t(a_1, …, a_n) = (−1)^{n−1}(a_n, a_1, …)`.
/// Coordinates follow the lexicographic order of basis words.
pub fn oracle_cyclic_invariants(dim: usize, n: usize) -> OracleResult<Vec<Vec<Q>>> {
    let total = dim.pow(n as u32);
    let word = |mut k: usize| -> Vec<usize> {
        let mut w = vec![0; n];
        for i in (0..n).rev() {
            w[i] = k % dim;
            k /= dim;
        }
        w
    };
    let index = |w: &[usize]| w.iter().fold(0, |acc, &a| acc * dim + a);
    let scale = Q::new(1.into(), (n as i64).into());
    let mut columns = Vec::with_capacity(total);
    for k in 0..total {
        let mut col = vec![Q::zero(); total];
        let mut w = word(k);
        let mut sign = Q::one();
        for _ in 0..n {
            col[index(&w)] += &sign * &scale;
            let last = w.pop().expect("nonempty word");
            w.insert(0, last);
            if n % 2 == 0 {
                sign = -sign;
            }
        }
        columns.push(col);
    }
    OracleResult {
        oracle: "cyclic_invariants",
        digest: digest(&(dim, n)),
        value: columns,
        method: "columns of the averaging projector",
    }
}

/// Cohomology dims of the normalized Hochschild cochain complex of
/// `k[x_1, …, x_m]` with values in `M_d` (bimodule through `ρ`), restricted
/// to inputs of total weight at most `w_max`. For `ρ = 0` the complex splits
/// by weight and the window is exact below `w_max`.
pub fn oracle_hochschild_cochains(
    nvars: usize,
    rho: &[Vec<Q>],
    dim: usize,
    w_max: u32,
    n_max: usize,
) -> Result<OracleResult<Vec<usize>>> {
    if rho.len() != nvars || rho.iter().any(|m| m.len() != dim * dim) {
        return Err(Error::DimensionMismatch("one d×d matrix per variable".into()));
    }
    let dd = dim * dim;
    let mut abar: Vec<Exponents> = Vec::new();
    for w in 1..=w_max {
        abar.extend(exponent_vectors(nvars, w));
    }
    let deg = |e: &Exponents| e.iter().sum::<u32>();
    // ρ of each monomial of Ā
    let mat_mul = |a: &[Q], b: &[Q]| -> Vec<Q> {
        let mut out = vec![Q::zero(); dd];
        for i in 0..dim {
            for k in 0..dim {
                for j in 0..dim {
                    out[i * dim + j] += &a[i * dim + k] * &b[k * dim + j];
                }
            }
        }
        out
    };
    let identity: Vec<Q> = (0..dd)
        .map(|k| if k % (dim + 1) == 0 { Q::one() } else { Q::zero() })
        .collect();
    let rho_of = |e: &Exponents| -> Vec<Q> {
        let mut acc = identity.clone();
        for (v, &k) in e.iter().enumerate() {
            for _ in 0..k {
                acc = mat_mul(&acc, &rho[v]);
            }
        }
        acc
    };
    let rho_abar: Vec<Vec<Q>> = abar.iter().map(rho_of).collect();
    let abar_index: BTreeMap<&Exponents, usize> =
        abar.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let tuples = |n: usize| -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::new();
            for t in &out {
                let used: u32 = t.iter().map(|&i| deg(&abar[i])).sum();
                for (i, e) in abar.iter().enumerate() {
                    if used + deg(e) <= w_max {
                        let mut s = t.clone();
                        s.push(i);
                        next.push(s);
                    }
                }
            }
            out = next;
        }
        out
    };
    let all: Vec<Vec<Vec<usize>>> = (0..=n_max + 1).map(tuples).collect();
    let mut ranks = Vec::new();
    for n in 0..=n_max {
        let src = &all[n];
        let tgt = &all[n + 1];
        let src_index: BTreeMap<&Vec<usize>, usize> =
            src.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let ncols = src.len() * dd;
        let mut rows = Vec::with_capacity(tgt.len() * dd);
        for t in tgt {
            for k in 0..dim {
                for l in 0..dim {
                    let mut row = vec![Q::zero(); ncols];
                    // a_1 · f(a_2, …)
                    let head = &rho_abar[t[0]];
                    let col0 = src_index[&t[1..].to_vec()];
                    for i in 0..dim {
                        row[col0 * dd + i * dim + l] += &head[k * dim + i];
                    }
                    // Σ (−1)^i f(…, a_i a_{i+1}, …)
                    for i in 0..n {
                        let prod = add_exponents(&abar[t[i]], &abar[t[i + 1]]);
                        let mut s = t[..i].to_vec();
                        s.push(abar_index[&prod]);
                        s.extend_from_slice(&t[i + 2..]);
                        let c = src_index[&s];
                        let sign = if i % 2 == 0 { -Q::one() } else { Q::one() };
                        row[c * dd + k * dim + l] += sign;
                    }
                    // (−1)^{n+1} f(a_1, …, a_n) · a_{n+1}
                    let tail = &rho_abar[t[n]];
                    let col1 = src_index[&t[..n].to_vec()];
                    let sign = if n % 2 == 0 { -Q::one() } else { Q::one() };
                    for j in 0..dim {
                        row[col1 * dd + k * dim + j] += &sign * &tail[j * dim + l];
                    }
                    rows.push(row);
                }
            }
        }
        ranks.push(if rows.is_empty() || ncols == 0 { 0 } else { dense_rank(rows) });
    }
    let dims = (0..=n_max)
        .map(|n| all[n].len() * dd - ranks[n] - if n > 0 { ranks[n - 1] } else { 0 })
        .collect();
    Ok(OracleResult {
        oracle: "hochschild_cochains",
        digest: digest(&(nvars, rho, dim, w_max, n_max)),
        value: dims,
        method: "normalized cochains on weight-bounded inputs, dense elimination",
    })
}

/// Number of graded cyclic words of a bidegree: rotation orbits of words in
/// the generators whose Koszul-signed stabilizer is trivial.
pub fn oracle_cyclic_word_count(
    degrees: &[u32],
    weights: &[u32],
    homdeg: u32,
    weight: u32,
) -> OracleResult<usize> {
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<(Vec<usize>, u32, u32)> = vec![(Vec::new(), 0, 0)];
    while let Some((w, h, wt)) = stack.pop() {
        if h == homdeg && wt == weight {
            if !w.is_empty() {
                words.push(w);
            }
            continue;
        }
        for g in 0..degrees.len() {
            if h + degrees[g] <= homdeg && wt + weights[g] <= weight && weights[g] > 0 {
                let mut s = w.clone();
                s.push(g);
                stack.push((s, h + degrees[g], wt + weights[g]));
            }
        }
    }
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for w in words {
        if seen.contains(&w) {
            continue;
        }
        let len = w.len();
        let mut killed = false;
        let mut cur = w.clone();
        let mut odd = false;
        for _ in 0..len {
            let a = cur.remove(0);
            let rest: u32 = cur.iter().map(|&g| degrees[g]).sum();
            odd ^= degrees[a] * rest % 2 == 1;
            cur.push(a);
            if cur == w && odd {
                killed = true;
            }
            seen.insert(cur.clone());
        }
        if !killed {
            count += 1;
        }
    }
    OracleResult {
        oracle: "cyclic_word_count",
        digest: digest(&(degrees, weights, homdeg, weight)),
        value: count,
        method: "orbit enumeration with signed stabilizers",
    }
}
