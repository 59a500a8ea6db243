//! Graded polynomial kernel.
//!
//! Two monomial flavors share one polynomial type: [`Word`] for the free
//! (noncommutative) algebra and [`CommMonomial`] for the free graded-commutative
//! algebra. All signs follow the Koszul rule with parity = homological degree
//! mod 2. Coefficients are exact rationals.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Limits, Result};

pub type Q = BigRational;
pub type Var = u32;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenKind {
    Algebra,
    Bimodule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub homdeg: u32,
    pub weight: u32,
    pub kind: GenKind,
}

impl Generator {
    pub fn new(name: impl Into<String>, homdeg: u32) -> Self {
        Generator {
            name: name.into(),
            homdeg,
            weight: 1,
            kind: GenKind::Algebra,
        }
    }

    pub fn with_weight(mut self, weight: u32) -> Self {
        self.weight = weight;
        self
    }

    pub fn bimodule(mut self) -> Self {
        self.kind = GenKind::Bimodule;
        self
    }

    pub fn is_odd(&self) -> bool {
        self.homdeg % 2 == 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    Noncommutative,
    GradedCommutative,
}

/// A basis monomial of a free (graded) algebra on indexed generators.
pub trait Monomial: Clone + Ord + fmt::Debug {
    const FLAVOR: Flavor;

    fn one() -> Self;
    fn var(v: Var) -> Self;
    fn is_one(&self) -> bool;
    /// Factors in product order, repeated according to multiplicity.
    fn factors(&self) -> Vec<Var>;
    /// Normal-form product. `None` when the product vanishes; the flag is
    /// `true` when the Koszul sign is negative.
    fn mul(&self, rhs: &Self, gens: &[Generator]) -> Option<(Self, bool)>;
    /// All monomials of the given bidegree, in increasing order.
    fn enumerate(gens: &[Generator], homdeg: u32, weight: u32, limits: &Limits)
        -> Result<Vec<Self>>;

    fn product(factors: &[Var], gens: &[Generator]) -> Option<(Self, bool)> {
        let mut acc = Self::one();
        let mut neg = false;
        for &f in factors {
            let (m, s) = acc.mul(&Self::var(f), gens)?;
            acc = m;
            neg ^= s;
        }
        Some((acc, neg))
    }

    fn homdeg(&self, gens: &[Generator]) -> u32 {
        self.factors().iter().map(|&v| gens[v as usize].homdeg).sum()
    }

    fn weight(&self, gens: &[Generator]) -> u32 {
        self.factors().iter().map(|&v| gens[v as usize].weight).sum()
    }

    fn max_var(&self) -> Option<Var> {
        self.factors().into_iter().max()
    }
}

/// A word in the free algebra; kept verbatim.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<Var>);

impl Word {
    pub fn letters(&self) -> &[Var] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, rhs: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&rhs.0);
        Word(v)
    }
}

impl Monomial for Word {
    const FLAVOR: Flavor = Flavor::Noncommutative;

    fn one() -> Self {
        Word(Vec::new())
    }

    fn var(v: Var) -> Self {
        Word(alloc::vec![v])
    }

    fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn factors(&self) -> Vec<Var> {
        self.0.clone()
    }

    fn mul(&self, rhs: &Self, _gens: &[Generator]) -> Option<(Self, bool)> {
        Some((self.concat(rhs), false))
    }

    fn enumerate(
        gens: &[Generator],
        homdeg: u32,
        weight: u32,
        limits: &Limits,
    ) -> Result<Vec<Self>> {
        fn go(
            gens: &[Generator],
            h: u32,
            w: u32,
            cur: &mut Vec<Var>,
            out: &mut Vec<Word>,
            limits: &Limits,
            target: (u32, u32),
        ) -> Result<()> {
            if h == 0 && w == 0 {
                out.push(Word(cur.clone()));
                return limits.check(target.0, target.1, out.len());
            }
            for (i, g) in gens.iter().enumerate() {
                if g.homdeg <= h && g.weight <= w && g.weight > 0 {
                    cur.push(i as Var);
                    go(gens, h - g.homdeg, w - g.weight, cur, out, limits, target)?;
                    cur.pop();
                }
            }
            Ok(())
        }
        let mut out = Vec::new();
        go(
            gens,
            homdeg,
            weight,
            &mut Vec::new(),
            &mut out,
            limits,
            (homdeg, weight),
        )?;
        out.sort();
        Ok(out)
    }
}

/// A normal-form monomial of the free graded-commutative algebra: variables
/// sorted by generator index with positive exponents, odd variables with
/// exponent one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CommMonomial(pub Vec<(Var, u32)>);

impl CommMonomial {
    pub fn exponents(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .iter()
            .find(|(x, _)| *x == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }
}

impl Monomial for CommMonomial {
    const FLAVOR: Flavor = Flavor::GradedCommutative;

    fn one() -> Self {
        CommMonomial(Vec::new())
    }

    fn var(v: Var) -> Self {
        CommMonomial(alloc::vec![(v, 1)])
    }

    fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn factors(&self) -> Vec<Var> {
        let mut out = Vec::new();
        for &(v, e) in &self.0 {
            for _ in 0..e {
                out.push(v);
            }
        }
        out
    }

    fn mul(&self, rhs: &Self, gens: &[Generator]) -> Option<(Self, bool)> {
        let odd = |v: Var| gens[v as usize].is_odd();
        // sign = parity of inversions between odd factors of self and rhs
        let mut neg = false;
        let mut odd_after = 0usize; // odd factors of self with index > current rhs var
        let lhs_odd: Vec<Var> = self.0.iter().filter(|(v, _)| odd(*v)).map(|(v, _)| *v).collect();
        for &(v, _) in rhs.0.iter().filter(|(v, _)| odd(*v)) {
            if lhs_odd.binary_search(&v).is_ok() {
                return None;
            }
            odd_after += lhs_odd.iter().filter(|&&u| u > v).count();
        }
        if odd_after % 2 == 1 {
            neg = true;
        }
        let mut out = Vec::with_capacity(self.0.len() + rhs.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < rhs.0.len() {
            match (self.0.get(i), rhs.0.get(j)) {
                (Some(&(a, ea)), Some(&(b, eb))) if a == b => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
                (Some(&(a, ea)), Some(&(b, _))) if a < b => {
                    out.push((a, ea));
                    i += 1;
                }
                (Some(_), Some(&(b, eb))) => {
                    out.push((b, eb));
                    j += 1;
                }
                (Some(&x), None) => {
                    out.push(x);
                    i += 1;
                }
                (None, Some(&y)) => {
                    out.push(y);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Some((CommMonomial(out), neg))
    }

    fn enumerate(
        gens: &[Generator],
        homdeg: u32,
        weight: u32,
        limits: &Limits,
    ) -> Result<Vec<Self>> {
        #[allow(clippy::too_many_arguments)]
        fn go(
            gens: &[Generator],
            idx: usize,
            h: u32,
            w: u32,
            cur: &mut Vec<(Var, u32)>,
            out: &mut Vec<CommMonomial>,
            limits: &Limits,
            target: (u32, u32),
        ) -> Result<()> {
            if h == 0 && w == 0 {
                out.push(CommMonomial(cur.clone()));
                return limits.check(target.0, target.1, out.len());
            }
            if idx == gens.len() {
                return Ok(());
            }
            let g = &gens[idx];
            let max_e = if g.weight == 0 {
                0
            } else {
                let mut m = w / g.weight;
                if g.homdeg > 0 {
                    m = m.min(h / g.homdeg);
                }
                if g.is_odd() {
                    m = m.min(1);
                }
                m
            };
            for e in (0..=max_e).rev() {
                if e > 0 {
                    cur.push((idx as Var, e));
                }
                go(
                    gens,
                    idx + 1,
                    h - e * g.homdeg,
                    w - e * g.weight,
                    cur,
                    out,
                    limits,
                    target,
                )?;
                if e > 0 {
                    cur.pop();
                }
            }
            Ok(())
        }
        let mut out = Vec::new();
        go(
            gens,
            0,
            homdeg,
            weight,
            &mut Vec::new(),
            &mut out,
            limits,
            (homdeg, weight),
        )?;
        out.sort();
        Ok(out)
    }
}

/// A finite linear combination of monomials with nonzero rational coefficients.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Poly<M: Monomial> {
    terms: BTreeMap<M, Q>,
}

pub type NcPoly = Poly<Word>;
pub type CommPoly = Poly<CommMonomial>;

impl<M: Monomial> fmt::Debug for Poly<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.terms.iter().map(|(m, c)| (m, DisplayQ(c))))
            .finish()
    }
}

impl<M: Monomial> Default for Poly<M> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<M: Monomial> Poly<M> {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(M::one(), Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(M::one(), c)
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(M::var(v), Q::one())
    }

    pub fn monomial(m: M, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (M, Q)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&M, &Q)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (M, Q)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &M) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, m: M, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self, gens: &[Generator]) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                if let Some((m, neg)) = a.mul(b, gens) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// `(homdeg, weight)` if all monomials share one bidegree; `None` for zero
    /// or inhomogeneous polynomials.
    pub fn bidegree(&self, gens: &[Generator]) -> Option<(u32, u32)> {
        let mut it = self.terms.keys().map(|m| (m.homdeg(gens), m.weight(gens)));
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    pub fn homdeg(&self, gens: &[Generator]) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.homdeg(gens));
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    pub fn max_var(&self) -> Option<Var> {
        self.terms.keys().filter_map(|m| m.max_var()).max()
    }

    /// Graded algebra morphism sending generator `v` to `images[v]`.
    pub fn substitute<N: Monomial>(
        &self,
        images: &[Poly<N>],
        target_gens: &[Generator],
    ) -> Result<Poly<N>> {
        let mut out = Poly::<N>::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::<N>::constant(c.clone());
            for v in m.factors() {
                let img = images
                    .get(v as usize)
                    .ok_or(Error::UnknownGenerator(v as usize))?;
                acc = acc.mul(img, target_gens);
                if acc.is_zero() {
                    break;
                }
            }
            out += &acc;
        }
        Ok(out)
    }

    pub fn display<'a>(&'a self, gens: &'a [Generator]) -> PolyDisplay<'a, M> {
        PolyDisplay { poly: self, gens }
    }
}

impl<M: Monomial> core::ops::AddAssign<&Poly<M>> for Poly<M> {
    fn add_assign(&mut self, rhs: &Poly<M>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<M: Monomial> core::ops::SubAssign<&Poly<M>> for Poly<M> {
    fn sub_assign(&mut self, rhs: &Poly<M>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl<M: Monomial> core::ops::Add<&Poly<M>> for &Poly<M> {
    type Output = Poly<M>;
    fn add(self, rhs: &Poly<M>) -> Poly<M> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<M: Monomial> core::ops::Sub<&Poly<M>> for &Poly<M> {
    type Output = Poly<M>;
    fn sub(self, rhs: &Poly<M>) -> Poly<M> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<M: Monomial> core::ops::Neg for Poly<M> {
    type Output = Poly<M>;
    fn neg(mut self) -> Poly<M> {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

pub(crate) struct DisplayQ<'a>(pub &'a Q);

impl fmt::Debug for DisplayQ<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for DisplayQ<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

pub struct PolyDisplay<'a, M: Monomial> {
    poly: &'a Poly<M>,
    gens: &'a [Generator],
}

pub(crate) fn write_monomial<M: Monomial>(
    f: &mut fmt::Formatter<'_>,
    m: &M,
    gens: &[Generator],
) -> fmt::Result {
    let factors = m.factors();
    let mut groups: Vec<(Var, u32)> = Vec::new();
    for v in factors {
        match (M::FLAVOR, groups.last_mut()) {
            (Flavor::GradedCommutative, Some((u, e))) if *u == v => *e += 1,
            _ => groups.push((v, 1)),
        }
    }
    for (i, (v, e)) in groups.iter().enumerate() {
        if i > 0 {
            f.write_str("*")?;
        }
        let name = gens
            .get(*v as usize)
            .map(|g| g.name.as_str())
            .unwrap_or("?");
        if *e > 1 {
            write!(f, "{}^{}", name, e)?;
        } else {
            f.write_str(name)?;
        }
    }
    Ok(())
}

impl<M: Monomial> fmt::Display for PolyDisplay<'_, M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.poly.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{}", DisplayQ(&abs))?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", DisplayQ(&abs))?;
                }
                write_monomial(f, m, self.gens)?;
            }
        }
        Ok(())
    }
}

/// A polynomial of either flavor, for callers that only learn the flavor at
/// run time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyPoly {
    Nc(NcPoly),
    Comm(CommPoly),
}

impl AnyPoly {
    pub fn flavor(&self) -> Flavor {
        match self {
            AnyPoly::Nc(_) => Flavor::Noncommutative,
            AnyPoly::Comm(_) => Flavor::GradedCommutative,
        }
    }

    pub fn mul(&self, rhs: &AnyPoly, gens: &[Generator]) -> Result<AnyPoly> {
        match (self, rhs) {
            (AnyPoly::Nc(a), AnyPoly::Nc(b)) => Ok(AnyPoly::Nc(a.mul(b, gens))),
            (AnyPoly::Comm(a), AnyPoly::Comm(b)) => Ok(AnyPoly::Comm(a.mul(b, gens))),
            _ => Err(Error::MixedFlavors),
        }
    }
}

/// A graded derivation given by its values on generators, extended by the
/// Koszul-signed Leibniz rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation<M: Monomial> {
    pub degree: i32,
    pub images: Vec<Poly<M>>,
}

impl<M: Monomial> Derivation<M> {
    /// Checks that every image is homogeneous of homological degree
    /// `|g| + degree`.
    pub fn new(degree: i32, images: Vec<Poly<M>>, gens: &[Generator]) -> Result<Self> {
        if images.len() != gens.len() {
            return Err(Error::DimensionMismatch(alloc::format!(
                "{} derivation images for {} generators",
                images.len(),
                gens.len()
            )));
        }
        for (g, img) in gens.iter().zip(&images) {
            let expected = g.homdeg as i64 + degree as i64;
            if img.is_zero() {
                continue;
            }
            match img.homdeg(gens) {
                Some(h) if h as i64 == expected => {}
                _ => {
                    return Err(Error::InhomogeneousDerivation {
                        name: g.name.clone(),
                        expected,
                    })
                }
            }
            if let Some(v) = img.max_var() {
                if v as usize >= gens.len() {
                    return Err(Error::UnknownGenerator(v as usize));
                }
            }
        }
        Ok(Derivation { degree, images })
    }

    pub fn apply(&self, p: &Poly<M>, gens: &[Generator]) -> Result<Poly<M>> {
        let mut out = Poly::zero();
        let odd_degree = self.degree.rem_euclid(2) == 1;
        for (m, c) in p.terms() {
            let factors = m.factors();
            let mut prefix_deg = 0u32;
            for (i, &f) in factors.iter().enumerate() {
                let img = self
                    .images
                    .get(f as usize)
                    .ok_or(Error::UnknownGenerator(f as usize))?;
                if !img.is_zero() {
                    let sign_neg = odd_degree && prefix_deg % 2 == 1;
                    let (pre, pn) = match M::product(&factors[..i], gens) {
                        Some(x) => x,
                        None => {
                            prefix_deg += gens[f as usize].homdeg;
                            continue;
                        }
                    };
                    let (suf, sn) = match M::product(&factors[i + 1..], gens) {
                        Some(x) => x,
                        None => {
                            prefix_deg += gens[f as usize].homdeg;
                            continue;
                        }
                    };
                    let neg = sign_neg ^ pn ^ sn;
                    let coef = if neg { -c.clone() } else { c.clone() };
                    let term = Poly::monomial(pre, coef)
                        .mul(img, gens)
                        .mul(&Poly::monomial(suf, Q::one()), gens);
                    out += &term;
                }
                prefix_deg += gens[f as usize].homdeg;
            }
        }
        Ok(out)
    }

    /// Graded commutator `[D1, D2] = D1 D2 - (-1)^{|D1||D2|} D2 D1`, evaluated
    /// on generators.
    pub fn bracket(&self, other: &Self, gens: &[Generator]) -> Result<Self> {
        let sign_neg = (self.degree * other.degree).rem_euclid(2) == 1;
        let mut images = Vec::with_capacity(gens.len());
        for v in 0..gens.len() {
            let g = Poly::var(v as Var);
            let a = self.apply(&other.apply(&g, gens)?, gens)?;
            let b = other.apply(&self.apply(&g, gens)?, gens)?;
            images.push(if sign_neg { &a + &b } else { &a - &b });
        }
        Ok(Derivation {
            degree: self.degree + other.degree,
            images,
        })
    }
}

/// How the differential interacts with the weight grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightBehavior {
    Homogeneous,
    /// every monomial of every `d(g)` has weight at least `weight(g)`
    Nondecreasing,
    /// some `d(g)` contains a monomial of weight below `weight(g)`
    Decreasing,
}

/// Per-generator weight profile of `d(g)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightProfile {
    pub min: u32,
    pub max: u32,
}

/// A finitely generated almost free DG algebra (either flavor): generators
/// plus the differential on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgPresentation<M: Monomial> {
    gens: Vec<Generator>,
    d: Derivation<M>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DSquaredReport {
    /// `(generator name, d(d(g)) == 0)`
    pub entries: Vec<(String, bool)>,
}

impl DSquaredReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|(_, ok)| *ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &str> {
        self.entries
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(n, _)| n.as_str())
    }
}

impl<M: Monomial> DgPresentation<M> {
    pub fn new(gens: Vec<Generator>, differential: Vec<Poly<M>>) -> Result<Self> {
        for (i, g) in gens.iter().enumerate() {
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::DuplicateGenerator(g.name.clone()));
            }
            if g.weight == 0 {
                return Err(Error::ZeroWeight {
                    name: g.name.clone(),
                });
            }
        }
        if differential.len() != gens.len() {
            return Err(Error::DimensionMismatch(alloc::format!(
                "{} differentials for {} generators",
                differential.len(),
                gens.len()
            )));
        }
        for (g, dg) in gens.iter().zip(&differential) {
            for (m, _) in dg.terms() {
                if let Some(v) = m.max_var() {
                    if v as usize >= gens.len() {
                        return Err(Error::UnknownGenerator(v as usize));
                    }
                }
                let h = m.homdeg(&gens);
                if h as i64 != g.homdeg as i64 - 1 {
                    return Err(Error::DegreeMismatch {
                        name: g.name.clone(),
                        expected: g.homdeg as i64 - 1,
                        found: h,
                    });
                }
            }
        }
        Ok(DgPresentation {
            gens,
            d: Derivation {
                degree: -1,
                images: differential,
            },
        })
    }

    /// Presentation with zero differential.
    pub fn free(gens: Vec<Generator>) -> Result<Self> {
        let n = gens.len();
        Self::new(gens, alloc::vec![Poly::zero(); n])
    }

    pub fn flavor(&self) -> Flavor {
        M::FLAVOR
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn differential(&self) -> &Derivation<M> {
        &self.d
    }

    pub fn d_of(&self, v: Var) -> &Poly<M> {
        &self.d.images[v as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<Var> {
        self.gens
            .iter()
            .position(|g| g.name == name)
            .map(|i| i as Var)
    }

    pub fn var(&self, name: &str) -> Result<Poly<M>> {
        self.index_of(name)
            .map(Poly::var)
            .ok_or_else(|| Error::UnknownGeneratorName(name.into()))
    }

    pub fn apply_d(&self, p: &Poly<M>) -> Result<Poly<M>> {
        self.d.apply(p, &self.gens)
    }

    pub fn mul(&self, a: &Poly<M>, b: &Poly<M>) -> Poly<M> {
        a.mul(b, &self.gens)
    }

    pub fn check_d_squared(&self) -> DSquaredReport {
        let entries = (0..self.gens.len())
            .map(|v| {
                let ok = self
                    .apply_d(self.d_of(v as Var))
                    .map(|p| p.is_zero())
                    .unwrap_or(false);
                (self.gens[v].name.clone(), ok)
            })
            .collect();
        DSquaredReport { entries }
    }

    pub fn weight_profile(&self, v: Var) -> Option<WeightProfile> {
        let ws = self.d_of(v).terms().map(|(m, _)| m.weight(&self.gens));
        ws.fold(None, |acc: Option<WeightProfile>, w| {
            Some(match acc {
                None => WeightProfile { min: w, max: w },
                Some(p) => WeightProfile {
                    min: p.min.min(w),
                    max: p.max.max(w),
                },
            })
        })
    }

    /// Weight behavior restricted to generators of homological degree at most
    /// `max_homdeg`.
    pub fn weight_behavior_upto(&self, max_homdeg: u32) -> WeightBehavior {
        let mut nondecreasing = true;
        let mut homogeneous = true;
        for (v, g) in self.gens.iter().enumerate() {
            if g.homdeg > max_homdeg {
                continue;
            }
            if let Some(p) = self.weight_profile(v as Var) {
                if p.min < g.weight {
                    nondecreasing = false;
                }
                if p.min != g.weight || p.max != g.weight {
                    homogeneous = false;
                }
            }
        }
        if homogeneous {
            WeightBehavior::Homogeneous
        } else if nondecreasing {
            WeightBehavior::Nondecreasing
        } else {
            WeightBehavior::Decreasing
        }
    }

    pub fn weight_behavior(&self) -> WeightBehavior {
        self.weight_behavior_upto(u32::MAX)
    }

    /// First generator (of homological degree at most `max_homdeg`) whose
    /// differential is not weight-homogeneous.
    pub fn first_inhomogeneous(&self, max_homdeg: u32) -> Option<&Generator> {
        self.gens.iter().enumerate().find_map(|(v, g)| {
            if g.homdeg > max_homdeg {
                return None;
            }
            let p = self.weight_profile(v as Var)?;
            (p.min != g.weight || p.max != g.weight).then_some(g)
        })
    }

    pub fn max_homdeg(&self) -> u32 {
        self.gens.iter().map(|g| g.homdeg).max().unwrap_or(0)
    }

    pub fn display_poly<'a>(&'a self, p: &'a Poly<M>) -> PolyDisplay<'a, M> {
        p.display(&self.gens)
    }
}
