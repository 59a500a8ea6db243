//! Exact sparse linear algebra over ℚ.
//!
//! Reduction is Gauss-Jordan elimination to reduced row echelon form. The
//! pivot in each column is the candidate row with the smallest
//! `|numerator * denominator|`, ties going to the lowest row index. Once the
//! working matrix is more than 30% full it is switched to dense storage.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::poly::Q;

/// Sparse vector: index → nonzero coefficient.
pub type SparseVec = BTreeMap<usize, Q>;

pub fn vec_add_scaled(acc: &mut SparseVec, v: &SparseVec, c: &Q) {
    if c.is_zero() {
        return;
    }
    for (&i, a) in v {
        add_entry(acc, i, a * c);
    }
}

pub fn add_entry(v: &mut SparseVec, i: usize, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(i).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        v.remove(&i);
    }
}

pub fn dot(a: &SparseVec, b: &SparseVec) -> Q {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut s = Q::zero();
    for (i, x) in small {
        if let Some(y) = large.get(i) {
            s += x * y;
        }
    }
    s
}

/// Row-major sparse matrix with no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            rows: vec![SparseVec::new(); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Q>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zero(nrows, ncols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), ncols, "ragged dense matrix");
            for (j, x) in r.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Q>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect())
            .collect();
        Self::from_dense(&dense)
    }

    /// Builds a matrix from sparse columns.
    pub fn from_columns(nrows: usize, cols: &[SparseVec]) -> Self {
        let mut m = Self::zero(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (&i, x) in c {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.rows[i].get(&j).cloned().unwrap_or_else(Q::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, x: Q) {
        assert!(i < self.nrows && j < self.ncols, "index out of bounds");
        if x.is_zero() {
            self.rows[i].remove(&j);
        } else {
            self.rows[i].insert(j, x);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, x: Q) {
        assert!(i < self.nrows && j < self.ncols, "index out of bounds");
        add_entry(&mut self.rows[i], j, x);
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.rows[i]
    }

    pub fn column(&self, j: usize) -> SparseVec {
        let mut c = SparseVec::new();
        for (i, r) in self.rows.iter().enumerate() {
            if let Some(x) = r.get(&j) {
                c.insert(i, x.clone());
            }
        }
        c
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.ncols, self.nrows);
        for (i, r) in self.rows.iter().enumerate() {
            for (&j, x) in r {
                t.rows[j].insert(i, x.clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, r) in self.rows.iter().enumerate() {
            let s = dot(r, v);
            if !s.is_zero() {
                out.insert(i, s);
            }
        }
        out
    }

    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, rhs.nrows, "dimension mismatch in product");
        let mut out = Self::zero(self.nrows, rhs.ncols);
        for (i, r) in self.rows.iter().enumerate() {
            let mut acc = SparseVec::new();
            for (&k, a) in r {
                vec_add_scaled(&mut acc, &rhs.rows[k], a);
            }
            out.rows[i] = acc;
        }
        out
    }

    pub fn sub(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        let mut out = self.clone();
        let m1 = -Q::one();
        for (i, r) in rhs.rows.iter().enumerate() {
            vec_add_scaled(&mut out.rows[i], r, &m1);
        }
        out
    }

    /// Stacks `self` above `other`.
    pub fn vstack(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.ncols);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        SparseMatrix {
            nrows: self.nrows + other.nrows,
            ncols: self.ncols,
            rows,
        }
    }

    /// Keeps only the listed rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> SparseMatrix {
        SparseMatrix {
            nrows: idx.len(),
            ncols: self.ncols,
            rows: idx.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        (0..self.nrows)
            .map(|i| (0..self.ncols).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn reduce(&self) -> Reduction {
        self.reduce_with(ColumnOrder::Forward)
    }

    pub fn reduce_with(&self, order: ColumnOrder) -> Reduction {
        Reduction::compute(self, order)
    }

    pub fn rank(&self) -> usize {
        self.reduce().rank()
    }
}

/// Order in which columns are visited when choosing pivots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ColumnOrder {
    #[default]
    Forward,
    Reverse,
}

#[derive(Clone, Debug)]
enum RowOp {
    Scale(usize, Q),
    /// `row[target] += factor * row[source]`
    AddMul { target: usize, source: usize, factor: Q },
}

enum Store {
    Sparse(Vec<SparseVec>),
    Dense(Vec<Vec<Q>>),
}

impl Store {
    fn entry(&self, r: usize, c: usize) -> Q {
        match self {
            Store::Sparse(rows) => rows[r].get(&c).cloned().unwrap_or_else(Q::zero),
            Store::Dense(rows) => rows[r][c].clone(),
        }
    }

    fn scale(&mut self, r: usize, s: &Q) {
        match self {
            Store::Sparse(rows) => rows[r].values_mut().for_each(|x| *x *= s),
            Store::Dense(rows) => rows[r].iter_mut().for_each(|x| {
                if !x.is_zero() {
                    *x *= s
                }
            }),
        }
    }

    fn add_mul(&mut self, target: usize, source: usize, f: &Q) {
        match self {
            Store::Sparse(rows) => {
                let src = rows[source].clone();
                vec_add_scaled(&mut rows[target], &src, f);
            }
            Store::Dense(rows) => {
                let src = rows[source].clone();
                for (x, y) in rows[target].iter_mut().zip(src.iter()) {
                    if !y.is_zero() {
                        *x += y * f;
                    }
                }
            }
        }
    }

    fn nnz(&self) -> usize {
        match self {
            Store::Sparse(rows) => rows.iter().map(|r| r.len()).sum(),
            Store::Dense(_) => 0,
        }
    }

    fn densify(&mut self, ncols: usize) {
        if let Store::Sparse(rows) = self {
            let dense = rows
                .iter()
                .map(|r| {
                    let mut d = vec![Q::zero(); ncols];
                    for (&j, x) in r {
                        d[j] = x.clone();
                    }
                    d
                })
                .collect();
            *self = Store::Dense(dense);
        }
    }

    fn into_rows(self) -> Vec<SparseVec> {
        match self {
            Store::Sparse(rows) => rows,
            Store::Dense(rows) => rows
                .into_iter()
                .map(|r| {
                    r.into_iter()
                        .enumerate()
                        .filter(|(_, x)| !x.is_zero())
                        .collect()
                })
                .collect(),
        }
    }
}

fn pivot_cost(x: &Q) -> BigInt {
    (x.numer() * x.denom()).abs()
}

/// The result of reducing a matrix to reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Reduction {
    nrows: usize,
    ncols: usize,
    /// `(pivot column, row holding it)` in the order pivots were found
    pivots: Vec<(usize, usize)>,
    rref: Vec<SparseVec>,
    ops: Vec<RowOp>,
    densified: bool,
}

impl Reduction {
    fn compute(m: &SparseMatrix, order: ColumnOrder) -> Reduction {
        let (nrows, ncols) = (m.nrows, m.ncols);
        let mut store = Store::Sparse(m.rows.clone());
        let mut used = vec![false; nrows];
        let mut pivots = Vec::new();
        let mut ops = Vec::new();
        let mut densified = false;
        let cells = nrows.saturating_mul(ncols);
        let columns: Vec<usize> = match order {
            ColumnOrder::Forward => (0..ncols).collect(),
            ColumnOrder::Reverse => (0..ncols).rev().collect(),
        };
        for c in columns {
            if pivots.len() == nrows {
                break;
            }
            let mut best: Option<(BigInt, usize)> = None;
            for (r, &u) in used.iter().enumerate() {
                if u {
                    continue;
                }
                let x = store.entry(r, c);
                if x.is_zero() {
                    continue;
                }
                let cost = pivot_cost(&x);
                if best.as_ref().map_or(true, |(b, _)| cost < *b) {
                    best = Some((cost, r));
                }
            }
            let Some((_, p)) = best else { continue };
            used[p] = true;
            pivots.push((c, p));
            let inv = Q::one() / store.entry(p, c);
            if !inv.is_one() {
                store.scale(p, &inv);
                ops.push(RowOp::Scale(p, inv));
            }
            for r in 0..nrows {
                if r == p {
                    continue;
                }
                let x = store.entry(r, c);
                if x.is_zero() {
                    continue;
                }
                let f = -x;
                store.add_mul(r, p, &f);
                ops.push(RowOp::AddMul {
                    target: r,
                    source: p,
                    factor: f,
                });
            }
            if !densified && store.nnz() * 10 > cells * 3 {
                store.densify(ncols);
                densified = true;
            }
        }
        Reduction {
            nrows,
            ncols,
            pivots,
            rref: store.into_rows(),
            ops,
            densified,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Whether the reduction switched to dense storage.
    pub fn densified(&self) -> bool {
        self.densified
    }

    /// Pivot columns in the order they were chosen.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.iter().map(|&(c, _)| c).collect()
    }

    pub fn is_pivot_column(&self, c: usize) -> bool {
        self.pivots.iter().any(|&(pc, _)| pc == c)
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ncols];
        for &(c, _) in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.ncols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Nonzero rows of the reduced echelon form, one per pivot, in pivot
    /// order. Each has a 1 in its pivot column and 0 in every other pivot
    /// column.
    pub fn rref_rows(&self) -> Vec<&SparseVec> {
        self.pivots.iter().map(|&(_, r)| &self.rref[r]).collect()
    }

    /// A basis of the kernel, one vector per free column (increasing).
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = SparseVec::new();
                v.insert(f, Q::one());
                for &(c, r) in &self.pivots {
                    if let Some(x) = self.rref[r].get(&f) {
                        v.insert(c, -x.clone());
                    }
                }
                v
            })
            .collect()
    }

    pub fn nullity(&self) -> usize {
        self.ncols - self.rank()
    }

    fn transform(&self, b: &SparseVec) -> SparseVec {
        let mut y = b.clone();
        for op in &self.ops {
            match op {
                RowOp::Scale(r, s) => {
                    if let Some(x) = y.get_mut(r) {
                        *x *= s;
                    }
                }
                RowOp::AddMul {
                    target,
                    source,
                    factor,
                } => {
                    if let Some(x) = y.get(source) {
                        let add = x * factor;
                        add_entry(&mut y, *target, add);
                    }
                }
            }
        }
        y
    }

    /// Some `x` with `M x = b`, or `None` when the system is inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, b: &SparseVec) -> Option<SparseVec> {
        let y = self.transform(b);
        let mut pivot_row = vec![None; self.nrows];
        for &(c, r) in &self.pivots {
            pivot_row[r] = Some(c);
        }
        let mut x = SparseVec::new();
        for (r, v) in y {
            match pivot_row[r] {
                Some(c) => {
                    x.insert(c, v);
                }
                None => return None,
            }
        }
        Some(x)
    }
}

/// Either a preimage or a left-kernel certificate that none exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// `x` with `M x = b`
    Witness(SparseVec),
    /// `y` with `yᵀ M = 0` and `yᵀ b ≠ 0`
    Certificate(SparseVec),
}

/// Decides whether `b` lies in the column span of `m`.
pub fn column_span_membership(m: &SparseMatrix, b: &SparseVec) -> Membership {
    if let Some(x) = m.reduce().solve(b) {
        return Membership::Witness(x);
    }
    let left = m.transpose().reduce().kernel_basis();
    let y = left
        .into_iter()
        .find(|y| !dot(y, b).is_zero())
        .expect("inconsistent system must have a separating left-kernel vector");
    Membership::Certificate(y)
}

/// Dimension of the span of the given vectors.
pub fn span_rank(nrows: usize, vectors: &[SparseVec]) -> usize {
    SparseMatrix::from_columns(nrows, vectors).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;
    use proptest::prelude::*;

    fn check_kernel(m: &SparseMatrix, r: &Reduction) {
        for v in r.kernel_basis() {
            assert!(m.mul_vec(&v).is_empty());
        }
    }

    #[test]
    fn identity_has_full_rank() {
        let m = SparseMatrix::identity(3);
        let r = m.reduce();
        assert_eq!(r.rank(), 3);
        assert!(r.kernel_basis().is_empty());
    }

    #[test]
    fn zero_matrix_kernel() {
        let r = SparseMatrix::zero(2, 5).reduce();
        assert_eq!(r.rank(), 0);
        assert_eq!(r.kernel_basis().len(), 5);
    }

    #[test]
    fn proportional_rows() {
        let m = SparseMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        let r = m.reduce();
        assert_eq!(r.rank(), 1);
        let k = r.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].get(&0), Some(&q(-2)));
        assert_eq!(k[0].get(&1), Some(&q(1)));
    }

    #[test]
    fn reverse_order_picks_other_pivots() {
        let m = SparseMatrix::from_i64(&[&[1, 1]]);
        assert_eq!(m.reduce().pivot_columns(), vec![0]);
        assert_eq!(m.reduce_with(ColumnOrder::Reverse).pivot_columns(), vec![1]);
    }

    #[test]
    fn inconsistent_system_has_certificate() {
        let m = SparseMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        let mut b = SparseVec::new();
        b.insert(0, q(1));
        match column_span_membership(&m, &b) {
            Membership::Certificate(y) => {
                assert!(m.transpose().mul_vec(&y).is_empty());
                assert!(!dot(&y, &b).is_zero());
            }
            Membership::Witness(_) => panic!("expected certificate"),
        }
    }

    #[test]
    fn dense_fallback_matches() {
        let m = SparseMatrix::from_i64(&[&[2, 3, 5, 7], &[1, 1, 1, 1], &[4, 6, 10, 14], &[0, 1, 0, 1]]);
        let r = m.reduce();
        assert!(r.densified());
        assert_eq!(r.rank(), 3);
        check_kernel(&m, &r);
    }

    fn small_matrix() -> impl Strategy<Value = SparseMatrix> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..=3, c), r).prop_map(
                |rows| {
                    let dense: Vec<Vec<Q>> = rows
                        .into_iter()
                        .map(|r| r.into_iter().map(q).collect())
                        .collect();
                    SparseMatrix::from_dense(&dense)
                },
            )
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix()) {
            let r = m.reduce();
            prop_assert_eq!(r.rank() + r.kernel_basis().len(), m.ncols());
            for v in r.kernel_basis() {
                prop_assert!(m.mul_vec(&v).is_empty());
            }
        }

        #[test]
        fn solve_image(m in small_matrix(), xs in proptest::collection::vec(-3i64..=3, 6)) {
            let x: SparseVec = (0..m.ncols()).filter(|&j| xs[j] != 0).map(|j| (j, q(xs[j]))).collect();
            let b = m.mul_vec(&x);
            let sol = m.reduce().solve(&b).expect("b is in the image");
            prop_assert_eq!(m.mul_vec(&sol), b);
        }

        #[test]
        fn orders_agree_on_rank(m in small_matrix()) {
            prop_assert_eq!(m.reduce().rank(), m.reduce_with(ColumnOrder::Reverse).rank());
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }
    }
}
