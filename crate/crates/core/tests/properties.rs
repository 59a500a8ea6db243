use drep_core::forms::NcForms;
use drep_core::poly::q;
use drep_core::repfun::{
    entry_gens, evaluate, matrix_reduce, representation_algebra, trace_v, universal_matrices,
};
use drep_core::{
    CommMonomial, DgPresentation, Derivation, Generator, Limits, Monomial, NcPoly, Poly,
    Var, Word, Q,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_gens(rng: &mut ChaCha8Rng) -> Vec<Generator> {
    let k = rng.gen_range(2..=4);
    (0..k)
        .map(|i| {
            Generator::new(format!("g{}", i), rng.gen_range(0..=2)).with_weight(rng.gen_range(1..=2))
        })
        .collect()
}

fn random_letters(rng: &mut ChaCha8Rng, ngens: usize, max_len: usize) -> Vec<Var> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| rng.gen_range(0..ngens) as Var).collect()
}

fn coeff(rng: &mut ChaCha8Rng) -> Q {
    let c = rng.gen_range(-3i64..=3);
    if c == 0 {
        q(1)
    } else {
        q(c)
    }
}

/// A polynomial whose terms all have homological degree `deg`, or zero.
fn homogeneous<M: Monomial>(
    rng: &mut ChaCha8Rng,
    gens: &[Generator],
    deg: i64,
    terms: usize,
) -> Poly<M> {
    let mut p = Poly::zero();
    if deg < 0 {
        return p;
    }
    for _ in 0..terms * 12 {
        let l = random_letters(rng, gens.len(), 3);
        let h: u32 = l.iter().map(|&v| gens[v as usize].homdeg).sum();
        if h as i64 != deg {
            continue;
        }
        if let Some((m, neg)) = M::product(&l, gens) {
            let c = coeff(rng);
            p.add_term(m, if neg { -c } else { c });
        }
        if p.len() >= terms {
            break;
        }
    }
    p
}

fn any_homogeneous<M: Monomial>(rng: &mut ChaCha8Rng, gens: &[Generator]) -> (Poly<M>, u32) {
    let deg = rng.gen_range(0..=4);
    (homogeneous(rng, gens, deg, 3), deg as u32)
}

fn random_derivation<M: Monomial>(
    rng: &mut ChaCha8Rng,
    gens: &[Generator],
    degree: i32,
) -> Derivation<M> {
    let images = gens
        .iter()
        .map(|g| homogeneous(rng, gens, g.homdeg as i64 + degree as i64, 2))
        .collect();
    Derivation::new(degree, images, gens).unwrap()
}

/// A DG presentation with degrees 0, 1, 2 where `d²` vanishes by
/// construction: degree-2 generators map to combinations of the cycles
/// `p (u_i du_j − du_i u_j) q`.
fn random_dg(rng: &mut ChaCha8Rng) -> DgPresentation<Word> {
    let n0 = rng.gen_range(1..=2);
    let n1 = rng.gen_range(1..=2);
    let n2 = rng.gen_range(0..=1);
    let mut gens = Vec::new();
    for i in 0..n0 {
        gens.push(Generator::new(format!("x{}", i), 0));
    }
    for i in 0..n1 {
        gens.push(Generator::new(format!("u{}", i), 1));
    }
    for i in 0..n2 {
        gens.push(Generator::new(format!("v{}", i), 2));
    }
    let deg0 = |rng: &mut ChaCha8Rng, max: usize| -> NcPoly {
        let l = random_letters(rng, n0, max);
        NcPoly::monomial(Word(l), q(1))
    };
    let mut diffs = vec![NcPoly::zero(); n0];
    for _ in 0..n1 {
        let mut p = NcPoly::zero();
        for _ in 0..rng.gen_range(1..=2) {
            let c = coeff(rng);
            p.add_scaled(&deg0(rng, 2), &c);
        }
        diffs.push(p);
    }
    let g = gens.clone();
    for _ in 0..n2 {
        let mut p = NcPoly::zero();
        for _ in 0..rng.gen_range(1..=2) {
            let i = rng.gen_range(0..n1);
            let j = rng.gen_range(0..n1);
            let ui = NcPoly::var((n0 + i) as Var);
            let uj = NcPoly::var((n0 + j) as Var);
            let z = &ui.mul(&diffs[n0 + j], &g) - &diffs[n0 + i].mul(&uj, &g);
            let l = deg0(rng, 1);
            let r = deg0(rng, 1);
            let c = coeff(rng);
            p.add_scaled(&l.mul(&z, &g).mul(&r, &g), &c);
        }
        diffs.push(p);
    }
    DgPresentation::new(gens, diffs).unwrap()
}

fn koszul(a: u32, b: u32) -> Q {
    if a * b % 2 == 1 {
        q(-1)
    } else {
        q(1)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn graded_commutativity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = random_gens(&mut rng);
        let (a, da) = any_homogeneous::<CommMonomial>(&mut rng, &gens);
        let (b, db) = any_homogeneous::<CommMonomial>(&mut rng, &gens);
        prop_assert_eq!(a.mul(&b, &gens), b.mul(&a, &gens).scale(&koszul(da, db)));
        if da % 2 == 1 {
            prop_assert!(a.mul(&a, &gens).is_zero());
        }
    }

    #[test]
    fn associativity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = random_gens(&mut rng);
        let (a, _) = any_homogeneous::<CommMonomial>(&mut rng, &gens);
        let (b, _) = any_homogeneous::<CommMonomial>(&mut rng, &gens);
        let (c, _) = any_homogeneous::<CommMonomial>(&mut rng, &gens);
        prop_assert_eq!(a.mul(&b, &gens).mul(&c, &gens), a.mul(&b.mul(&c, &gens), &gens));
        let (a, _) = any_homogeneous::<Word>(&mut rng, &gens);
        let (b, _) = any_homogeneous::<Word>(&mut rng, &gens);
        let (c, _) = any_homogeneous::<Word>(&mut rng, &gens);
        prop_assert_eq!(a.mul(&b, &gens).mul(&c, &gens), a.mul(&b.mul(&c, &gens), &gens));
    }

    #[test]
    fn leibniz_both_flavors(seed in any::<u64>(), degree in -1i32..=1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = random_gens(&mut rng);
        fn check<M: Monomial>(rng: &mut ChaCha8Rng, gens: &[Generator], degree: i32) -> bool {
            let d = random_derivation::<M>(rng, gens, degree);
            let (a, da) = any_homogeneous::<M>(rng, gens);
            let (b, _) = any_homogeneous::<M>(rng, gens);
            let lhs = d.apply(&a.mul(&b, gens), gens).unwrap();
            let first = d.apply(&a, gens).unwrap().mul(&b, gens);
            let second = a.mul(&d.apply(&b, gens).unwrap(), gens);
            let sign = koszul(degree.rem_euclid(2) as u32, da);
            lhs == &first + &second.scale(&sign)
        }
        prop_assert!(check::<Word>(&mut rng, &gens, degree));
        prop_assert!(check::<CommMonomial>(&mut rng, &gens, degree));
    }

    #[test]
    fn bracket_is_commutator_of_composites(seed in any::<u64>(), k1 in -1i32..=1, k2 in -1i32..=1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = random_gens(&mut rng);
        fn check<M: Monomial>(rng: &mut ChaCha8Rng, gens: &[Generator], k1: i32, k2: i32) -> bool {
            let d1 = random_derivation::<M>(rng, gens, k1);
            let d2 = random_derivation::<M>(rng, gens, k2);
            let br = d1.bracket(&d2, gens).unwrap();
            let (p, _) = any_homogeneous::<M>(rng, gens);
            let a = d1.apply(&d2.apply(&p, gens).unwrap(), gens).unwrap();
            let b = d2.apply(&d1.apply(&p, gens).unwrap(), gens).unwrap();
            let sign = koszul(k1.rem_euclid(2) as u32, k2.rem_euclid(2) as u32);
            br.apply(&p, gens).unwrap() == &a - &b.scale(&sign)
        }
        prop_assert!(check::<Word>(&mut rng, &gens, k1, k2));
        prop_assert!(check::<CommMonomial>(&mut rng, &gens, k1, k2));
    }

    #[test]
    fn matrix_reduce_preserves_d_squared(seed in any::<u64>(), dim in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_dg(&mut rng);
        prop_assert!(r.check_d_squared().passed());
        prop_assert!(matrix_reduce(&r, dim).unwrap().check_d_squared().passed());
        prop_assert!(representation_algebra(&r, dim).unwrap().check_d_squared().passed());
    }

    #[test]
    fn universal_evaluation_is_a_chain_map(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_dg(&mut rng);
        let rt = matrix_reduce(&r, 2).unwrap();
        let mats = universal_matrices::<Word>(r.gens().len(), 2);
        let (p, _) = any_homogeneous::<Word>(&mut rng, r.gens());
        let lhs = evaluate(&r.apply_d(&p).unwrap(), &mats, 2, rt.gens()).unwrap();
        let rhs = evaluate(&p, &mats, 2, rt.gens()).unwrap().map(|e| rt.apply_d(e)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn trace_kills_graded_commutators(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = random_gens(&mut rng);
        let rv = entry_gens(&gens, 2).unwrap();
        let (a, da) = any_homogeneous::<Word>(&mut rng, &gens);
        let (b, db) = any_homogeneous::<Word>(&mut rng, &gens);
        let comm = &a.mul(&b, &gens) - &b.mul(&a, &gens).scale(&koszul(da, db));
        prop_assert!(trace_v(&comm, gens.len(), 2, &rv).unwrap().is_zero());
    }

    #[test]
    fn normalization_is_idempotent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = random_gens(&mut rng);
        let (p, _) = any_homogeneous::<CommMonomial>(&mut rng, &gens);
        prop_assert_eq!(Poly::from_terms(p.clone().into_terms()), p.clone());
        for (m, _) in p.terms() {
            prop_assert_eq!(CommMonomial::product(&m.factors(), &gens), Some((m.clone(), false)));
        }
        let r = random_dg(&mut rng);
        let f = NcForms::new(&r, &Limits::default()).unwrap();
        let (w, _) = any_homogeneous::<Word>(&mut rng, r.gens());
        let nk = f.necklace(&w);
        prop_assert_eq!(f.necklace(&nk), nk);
        let form = f.partial(&w);
        let nf = f.natural_form(&form);
        prop_assert_eq!(f.natural_form(&nf), nf.clone());
        prop_assert!(f.necklace(&f.beta(&nf)).is_zero());
    }
}
