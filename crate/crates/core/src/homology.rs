//! Weight-truncated homology of DG presentations.
//!
//! Chains split into finite blocks `C_n(w)` by homological degree and weight.
//! For a weight-homogeneous differential every block complex is exact
//! bookkeeping. Otherwise a cell is computed as
//!
//! `dim ker(d|C_n(w)) − dim(d(⊕_{w' ≤ w+s} C_{n+1}(w')) ∩ C_n(w))`
//!
//! for increasing slack `s` until two consecutive values agree, and is marked
//! as requiring slack.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Limits, Result};
use crate::linalg::{column_span_membership, Membership, SparseMatrix, SparseVec};
use crate::poly::{DgPresentation, Monomial, Poly, Q};

/// How many extra slack steps are tried before a cell is declared unstable.
pub const SLACK_CAP: u32 = 8;

/// The ordered monomial basis of one `(homdeg, weight)` block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainBlock<M: Monomial> {
    pub homdeg: u32,
    pub weight: u32,
    pub basis: Vec<M>,
}

impl<M: Monomial> ChainBlock<M> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, m: &M) -> Option<usize> {
        self.basis.binary_search(m).ok()
    }

    /// Coordinates of a polynomial supported on this block.
    pub fn coordinates(&self, p: &Poly<M>) -> Option<SparseVec> {
        let mut v = SparseVec::new();
        for (m, c) in p.terms() {
            v.insert(self.index_of(m)?, c.clone());
        }
        Some(v)
    }

    pub fn element(&self, v: &SparseVec) -> Poly<M> {
        Poly::from_terms(v.iter().map(|(&i, c)| (self.basis[i].clone(), c.clone())))
    }
}

pub fn block_basis<M: Monomial>(
    p: &DgPresentation<M>,
    homdeg: u32,
    weight: u32,
    limits: &Limits,
) -> Result<ChainBlock<M>> {
    Ok(ChainBlock {
        homdeg,
        weight,
        basis: M::enumerate(p.gens(), homdeg, weight, limits)?,
    })
}

/// Matrix of `d: C_n(w) → C_{n−1}(w)`, projected onto weight `w` when the
/// differential is not weight-homogeneous.
#[derive(Clone, Debug)]
pub struct DifferentialBlock<M: Monomial> {
    pub source: ChainBlock<M>,
    pub target: ChainBlock<M>,
    pub matrix: SparseMatrix,
}

pub fn differential_matrix<M: Monomial>(
    p: &DgPresentation<M>,
    homdeg: u32,
    weight: u32,
    limits: &Limits,
) -> Result<DifferentialBlock<M>> {
    let source = block_basis(p, homdeg, weight, limits)?;
    let target = if homdeg == 0 {
        ChainBlock {
            homdeg: 0,
            weight,
            basis: Vec::new(),
        }
    } else {
        block_basis(p, homdeg - 1, weight, limits)?
    };
    let mut matrix = SparseMatrix::zero(target.dim(), source.dim());
    if homdeg > 0 {
        for (j, m) in source.basis.iter().enumerate() {
            let dm = p.apply_d(&Poly::monomial(m.clone(), Q::one()))?;
            for (t, c) in dm.terms() {
                if let Some(i) = target.index_of(t) {
                    matrix.set(i, j, c.clone());
                }
            }
        }
    }
    Ok(DifferentialBlock {
        source,
        target,
        matrix,
    })
}

/// Rows indexed by whatever monomials occur, in first-seen order.
struct RowIndex<M: Monomial> {
    index: BTreeMap<M, usize>,
}

impl<M: Monomial> RowIndex<M> {
    fn new() -> Self {
        RowIndex {
            index: BTreeMap::new(),
        }
    }

    fn row(&mut self, m: &M) -> usize {
        let n = self.index.len();
        *self.index.entry(m.clone()).or_insert(n)
    }

    fn vector(&mut self, p: &Poly<M>) -> SparseVec {
        p.terms().map(|(m, c)| (self.row(m), c.clone())).collect()
    }

    fn len(&self) -> usize {
        self.index.len()
    }
}

fn images<M: Monomial>(
    p: &DgPresentation<M>,
    sources: &[M],
    rows: &mut RowIndex<M>,
) -> Result<Vec<SparseVec>> {
    sources
        .iter()
        .map(|m| {
            let dm = p.apply_d(&Poly::monomial(m.clone(), Q::one()))?;
            Ok(rows.vector(&dm))
        })
        .collect()
}

fn boundary_sources<M: Monomial>(
    p: &DgPresentation<M>,
    homdeg: u32,
    weights: impl Iterator<Item = u32>,
    limits: &Limits,
) -> Result<Vec<M>> {
    let mut out = Vec::new();
    for w in weights {
        out.extend(block_basis(p, homdeg, w, limits)?.basis);
    }
    Ok(out)
}

/// `dim ker(d|C_n(w))`.
pub fn cycle_dim<M: Monomial>(
    p: &DgPresentation<M>,
    homdeg: u32,
    weight: u32,
    limits: &Limits,
) -> Result<usize> {
    let block = block_basis(p, homdeg, weight, limits)?;
    if homdeg == 0 {
        return Ok(block.dim());
    }
    let mut rows = RowIndex::new();
    let cols = images(p, &block.basis, &mut rows)?;
    let m = SparseMatrix::from_columns(rows.len(), &cols);
    Ok(block.dim() - m.rank())
}

/// `dim(d(⊕_{w'∈weights} C_{n+1}(w')) ∩ C_n(w))`.
pub fn boundary_dim<M: Monomial>(
    p: &DgPresentation<M>,
    homdeg: u32,
    weight: u32,
    source_weights: impl Iterator<Item = u32>,
    limits: &Limits,
) -> Result<usize> {
    Ok(boundary_space(p, homdeg, weight, source_weights, limits)?.len())
}

/// A basis of `d(⊕_{w'∈weights} C_{n+1}(w')) ∩ C_n(w)`.
fn boundary_space<M: Monomial>(
    p: &DgPresentation<M>,
    homdeg: u32,
    weight: u32,
    source_weights: impl Iterator<Item = u32>,
    limits: &Limits,
) -> Result<Vec<Poly<M>>> {
    let sources = boundary_sources(p, homdeg + 1, source_weights, limits)?;
    let target = block_basis(p, homdeg, weight, limits)?;
    let mut rows = RowIndex::new();
    for m in &target.basis {
        rows.row(m);
    }
    let inside = target.dim();
    let cols = images(p, &sources, &mut rows)?;
    let outside_cols: Vec<SparseVec> = cols
        .iter()
        .map(|c| {
            c.iter()
                .filter(|(&i, _)| i >= inside)
                .map(|(&i, x)| (i - inside, x.clone()))
                .collect()
        })
        .collect();
    let nrows_out = rows.len() - inside;
    let out = SparseMatrix::from_columns(nrows_out, &outside_cols);
    let keep = out.reduce().kernel_basis();
    let m = SparseMatrix::from_columns(rows.len(), &cols);
    let vectors: Vec<SparseVec> = keep.iter().map(|k| m.mul_vec(k)).collect();
    // reduce to an independent set
    let span = SparseMatrix::from_columns(inside, &vectors).reduce();
    let pivots = span.pivot_columns();
    Ok(pivots
        .into_iter()
        .map(|j| target.element(&vectors[j]))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyCell {
    pub dim: usize,
    /// `false` when the value did not stabilize within the slack cap
    pub valid: bool,
    /// slack at which the value was read
    pub slack: u32,
    /// set when the differential is not weight-homogeneous
    pub reason: Option<String>,
}

impl HomologyCell {
    pub fn requires_slack(&self) -> bool {
        self.reason.is_some()
    }
}

/// Homology dimension at `(n, w)` with an explicit source weight range for
/// boundaries; no stabilization.
pub fn homology_dim_at<M: Monomial>(
    p: &DgPresentation<M>,
    homdeg: u32,
    weight: u32,
    source_weights: impl Iterator<Item = u32>,
    limits: &Limits,
) -> Result<usize> {
    let z = cycle_dim(p, homdeg, weight, limits)?;
    let b = boundary_dim(p, homdeg, weight, source_weights, limits)?;
    Ok(z - b)
}

pub fn homology_cell<M: Monomial>(
    p: &DgPresentation<M>,
    homdeg: u32,
    weight: u32,
    slack: u32,
    limits: &Limits,
) -> Result<HomologyCell> {
    match p.first_inhomogeneous(homdeg + 1) {
        None => Ok(HomologyCell {
            dim: homology_dim_at(p, homdeg, weight, core::iter::once(weight), limits)?,
            valid: true,
            slack,
            reason: None,
        }),
        Some(g) => {
            let reason = Some(alloc::format!(
                "requires slack: d({}) is not weight-homogeneous",
                g.name
            ));
            let z = cycle_dim(p, homdeg, weight, limits)?;
            let at = |s: u32| -> Result<usize> {
                Ok(z - boundary_dim(p, homdeg, weight, 0..=weight + s, limits)?)
            };
            let mut prev = at(slack)?;
            for s in slack + 1..=slack + SLACK_CAP {
                let cur = at(s)?;
                if cur == prev {
                    return Ok(HomologyCell {
                        dim: cur,
                        valid: true,
                        slack: s,
                        reason,
                    });
                }
                prev = cur;
            }
            Ok(HomologyCell {
                dim: prev,
                valid: false,
                slack: slack + SLACK_CAP,
                reason,
            })
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomologyTable {
    pub n_max: u32,
    pub w_max: u32,
    pub cells: BTreeMap<(u32, u32), HomologyCell>,
}

impl HomologyTable {
    pub fn dim(&self, n: u32, w: u32) -> usize {
        self.cells.get(&(n, w)).map_or(0, |c| c.dim)
    }

    pub fn cell(&self, n: u32, w: u32) -> Option<&HomologyCell> {
        self.cells.get(&(n, w))
    }

    /// Whether every cell in the weight-`w` column is valid.
    pub fn column_valid(&self, w: u32) -> bool {
        self.cells
            .iter()
            .filter(|((_, cw), _)| *cw == w)
            .all(|(_, c)| c.valid)
    }

    pub fn all_valid(&self) -> bool {
        self.cells.values().all(|c| c.valid)
    }

    /// Sequence of dims `H_n(0..=w_max)`.
    pub fn row(&self, n: u32) -> Vec<usize> {
        (0..=self.w_max).map(|w| self.dim(n, w)).collect()
    }
}

pub fn homology_dims<M: Monomial>(
    p: &DgPresentation<M>,
    n_max: u32,
    w_max: u32,
    slack: u32,
    limits: &Limits,
) -> Result<HomologyTable> {
    let mut cells = BTreeMap::new();
    for n in 0..=n_max {
        for w in 0..=w_max {
            cells.insert((n, w), homology_cell(p, n, w, slack, limits)?);
        }
    }
    Ok(HomologyTable {
        n_max,
        w_max,
        cells,
    })
}

/// Class representatives of `H_n(w)`: kernel vectors (in pivot order) not in
/// the span of boundaries and earlier representatives.
pub fn homology_basis<M: Monomial>(
    p: &DgPresentation<M>,
    homdeg: u32,
    weight: u32,
    slack: u32,
    limits: &Limits,
) -> Result<Vec<Poly<M>>> {
    let block = block_basis(p, homdeg, weight, limits)?;
    let kernel: Vec<SparseVec> = if homdeg == 0 {
        (0..block.dim())
            .map(|i| core::iter::once((i, Q::one())).collect())
            .collect()
    } else {
        let mut rows = RowIndex::new();
        let cols = images(p, &block.basis, &mut rows)?;
        SparseMatrix::from_columns(rows.len(), &cols)
            .reduce()
            .kernel_basis()
    };
    let weights: Vec<u32> = if p.first_inhomogeneous(homdeg + 1).is_none() {
        alloc::vec![weight]
    } else {
        (0..=weight + slack).collect()
    };
    let boundaries = boundary_space(p, homdeg, weight, weights.into_iter(), limits)?;
    let mut cols: Vec<SparseVec> = boundaries
        .iter()
        .map(|b| block.coordinates(b).expect("boundary lies in block"))
        .collect();
    let nb = cols.len();
    cols.extend(kernel.iter().cloned());
    let red = SparseMatrix::from_columns(block.dim(), &cols).reduce();
    Ok(red
        .pivot_columns()
        .into_iter()
        .filter(|&j| j >= nb)
        .map(|j| block.element(&cols[j]))
        .collect())
}

/// Outcome of a boundary test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundaryCheck<M: Monomial> {
    /// `d(preimage) = element`
    Boundary { preimage: Poly<M> },
    /// a linear functional on chains vanishing on every boundary from the
    /// searched sources but not on the element
    NotBoundary { functional: Poly<M> },
}

impl<M: Monomial> BoundaryCheck<M> {
    pub fn is_boundary(&self) -> bool {
        matches!(self, BoundaryCheck::Boundary { .. })
    }
}

/// Pairs a functional with a chain, coefficientwise.
pub fn pair<M: Monomial>(functional: &Poly<M>, chain: &Poly<M>) -> Q {
    let mut s = Q::zero();
    for (m, c) in chain.terms() {
        s += c * functional.coeff(m);
    }
    s
}

/// Decides whether a homogeneous element is `d` of a chain of weight at most
/// `weight + slack`.
pub fn is_boundary<M: Monomial>(
    p: &DgPresentation<M>,
    element: &Poly<M>,
    slack: u32,
    limits: &Limits,
) -> Result<BoundaryCheck<M>> {
    if element.is_zero() {
        return Ok(BoundaryCheck::Boundary {
            preimage: Poly::zero(),
        });
    }
    let (n, w) = element.bidegree(p.gens()).ok_or(Error::Inhomogeneous)?;
    let sources = boundary_sources(p, n + 1, 0..=w + slack, limits)?;
    let mut rows = RowIndex::new();
    let b = rows.vector(element);
    let cols = images(p, &sources, &mut rows)?;
    let m = SparseMatrix::from_columns(rows.len(), &cols);
    let names: Vec<M> = {
        let mut v: Vec<(usize, M)> = rows.index.iter().map(|(m, &i)| (i, m.clone())).collect();
        v.sort_by_key(|(i, _)| *i);
        v.into_iter().map(|(_, m)| m).collect()
    };
    Ok(match column_span_membership(&m, &b) {
        Membership::Witness(x) => BoundaryCheck::Boundary {
            preimage: Poly::from_terms(x.iter().map(|(&j, c)| (sources[j].clone(), c.clone()))),
        },
        Membership::Certificate(y) => BoundaryCheck::NotBoundary {
            functional: Poly::from_terms(y.iter().map(|(&i, c)| (names[i].clone(), c.clone()))),
        },
    })
}

/// Euler characteristic `Σ_n (−1)^n dim C_n(w)` over `n ≤ n_max`.
pub fn chain_euler_characteristic<M: Monomial>(
    p: &DgPresentation<M>,
    n_max: u32,
    weight: u32,
    limits: &Limits,
) -> Result<i64> {
    let mut chi = 0i64;
    for n in 0..=n_max {
        let d = block_basis(p, n, weight, limits)?.dim() as i64;
        chi += if n % 2 == 0 { d } else { -d };
    }
    Ok(chi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, CommMonomial, CommPoly, Generator, NcPoly, Word};
    use crate::repfun::{entry_index, representation_algebra};
    use alloc::vec;

    fn ex2d() -> DgPresentation<Word> {
        let gens = vec![
            Generator::new("x", 0),
            Generator::new("y", 0),
            Generator::new("t", 1).with_weight(2),
        ];
        let dt = NcPoly::from_terms([(Word(vec![0, 1]), q(1)), (Word(vec![1, 0]), q(-1))]);
        DgPresentation::new(gens, vec![NcPoly::zero(), NcPoly::zero(), dt]).unwrap()
    }

    fn ex3d(weights: [u32; 7]) -> DgPresentation<Word> {
        let names = ["x", "y", "z", "xi", "theta", "lambda", "t"];
        let degs = [0, 0, 0, 1, 1, 1, 2];
        let gens: Vec<Generator> = names
            .iter()
            .zip(degs)
            .zip(weights)
            .map(|((n, d), w)| Generator::new(*n, d).with_weight(w))
            .collect();
        let w = |l: &[u32]| Word(l.to_vec());
        let comm = |a: u32, b: u32| NcPoly::from_terms([(w(&[a, b]), q(1)), (w(&[b, a]), q(-1))]);
        let mut dxi = comm(1, 2);
        dxi.add_term(w(&[0]), q(1));
        let mut dth = comm(2, 0);
        dth.add_term(w(&[1]), q(1));
        let mut dla = comm(0, 1);
        dla.add_term(w(&[2]), q(1));
        let mut dt = comm(0, 3);
        dt += &comm(1, 4);
        dt += &comm(2, 5);
        DgPresentation::new(
            gens,
            vec![NcPoly::zero(), NcPoly::zero(), NcPoly::zero(), dxi, dth, dla, dt],
        )
        .unwrap()
    }

    #[test]
    fn ex2d_blocks() {
        let rv = representation_algebra(&ex2d(), 1).unwrap();
        let l = Limits::default();
        assert_eq!(block_basis(&rv, 0, 2, &l).unwrap().dim(), 3);
        assert_eq!(block_basis(&rv, 1, 2, &l).unwrap().dim(), 1);
        assert_eq!(block_basis(&rv, 1, 1, &l).unwrap().dim(), 0);
        let db = differential_matrix(&rv, 1, 2, &l).unwrap();
        assert_eq!((db.matrix.nrows(), db.matrix.ncols()), (3, 1));
        assert!(db.matrix.is_zero());
        let d0 = differential_matrix(&rv, 0, 3, &l).unwrap();
        assert!(d0.matrix.is_zero());
    }

    #[test]
    fn ex2d_d1_homology() {
        let rv = representation_algebra(&ex2d(), 1).unwrap();
        let t = homology_dims(&rv, 3, 8, 0, &Limits::default()).unwrap();
        for w in 0..=8u32 {
            assert_eq!(t.dim(0, w), w as usize + 1);
            assert_eq!(t.dim(1, w), if w >= 2 { w as usize - 1 } else { 0 });
            assert_eq!(t.dim(2, w), 0);
            assert_eq!(t.dim(3, w), 0);
        }
        assert!(t.all_valid());
    }

    #[test]
    fn ex3d_d1_homology_with_unit_weights() {
        let rv = representation_algebra(&ex3d([1; 7]), 1).unwrap();
        assert!(rv.check_d_squared().passed());
        let t = homology_dims(&rv, 4, 3, 0, &Limits::default()).unwrap();
        for n in 0..=4u32 {
            for w in 0..=3u32 {
                let expected = usize::from(n % 2 == 0 && w == n / 2);
                assert_eq!(t.dim(n, w), expected, "H_{n} at weight {w}");
            }
        }
    }

    #[test]
    fn ex2d_d2_trace_class() {
        let rv = representation_algebra(&ex2d(), 2).unwrap();
        let l = Limits::default();
        let cell = homology_cell(&rv, 1, 2, 0, &l).unwrap();
        assert_eq!(cell.dim, 1);
        let basis = homology_basis(&rv, 1, 2, 0, &l).unwrap();
        assert_eq!(basis.len(), 1);
        let tr = &CommPoly::var(entry_index(2, 0, 0, 2)) + &CommPoly::var(entry_index(2, 1, 1, 2));
        // the representative is a multiple of Tr T modulo boundaries; there are none here
        let c = basis[0].coeff(&CommMonomial::var(entry_index(2, 0, 0, 2)));
        assert_eq!(basis[0], tr.scale(&c));
        for s in 0..=4 {
            assert!(!is_boundary(&rv, &tr, s, &l).unwrap().is_boundary());
        }
    }

    #[test]
    fn boundary_witness_and_certificate() {
        let rv = representation_algebra(&ex3d([1; 7]), 1).unwrap();
        let l = Limits::default();
        let x = CommPoly::var(0);
        match is_boundary(&rv, &x, 0, &l).unwrap() {
            BoundaryCheck::Boundary { preimage } => assert_eq!(rv.apply_d(&preimage).unwrap(), x),
            other => panic!("expected a boundary, got {other:?}"),
        }
        let r2 = representation_algebra(&ex2d(), 1).unwrap();
        let tx = r2.mul(&CommPoly::var(2), &CommPoly::var(0));
        match is_boundary(&r2, &tx, 2, &l).unwrap() {
            BoundaryCheck::NotBoundary { functional } => assert!(!pair(&functional, &tx).is_zero()),
            other => panic!("expected a certificate, got {other:?}"),
        }
        let mixed = &x + &CommPoly::var(3);
        assert_eq!(is_boundary(&rv, &mixed, 0, &l), Err(Error::Inhomogeneous));
    }

    #[test]
    fn slack_agrees_on_homogeneous_input() {
        let rv = representation_algebra(&ex2d(), 2).unwrap();
        let l = Limits::default();
        for (n, w) in [(0, 2), (1, 2), (1, 3), (0, 3)] {
            let s0 = homology_dim_at(&rv, n, w, w..=w, &l).unwrap();
            let s1 = homology_dim_at(&rv, n, w, 0..=w + 1, &l).unwrap();
            assert_eq!(s0, s1);
        }
    }

    #[test]
    fn inhomogeneous_cells_are_flagged() {
        let rv = representation_algebra(&ex3d([1, 1, 1, 1, 1, 1, 2]), 2).unwrap();
        let cell = homology_cell(&rv, 0, 1, 0, &Limits::default()).unwrap();
        assert!(cell.requires_slack());
    }

    #[test]
    fn d_squared_on_blocks() {
        let rv = representation_algebra(&ex2d(), 2).unwrap();
        let l = Limits::default();
        for w in 0..=5 {
            let d2 = differential_matrix(&rv, 2, w, &l).unwrap();
            let d1 = differential_matrix(&rv, 1, w, &l).unwrap();
            assert!(d1.matrix.mul(&d2.matrix).is_zero());
        }
    }

    #[test]
    fn euler_characteristic_matches() {
        let rv = representation_algebra(&ex2d(), 2).unwrap();
        let l = Limits::default();
        let t = homology_dims(&rv, 4, 4, 0, &l).unwrap();
        for w in 0..=4 {
            let chi = chain_euler_characteristic(&rv, 4, w, &l).unwrap();
            let h: i64 = (0..=4u32)
                .map(|n| if n % 2 == 0 { 1 } else { -1 } * t.dim(n, w) as i64)
                .sum();
            assert_eq!(chi, h);
        }
    }
}
