use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qimage::fields::{FieldDescriptor, FieldElement};
use qimage::multilinear::{make_deg3_form, make_deg4_form, make_monomial, make_s2, make_vk, MultilinearPoly};
use qimage::oracle::{enumerate_image, ImageClass, DEFAULT_EVAL_BUDGET};
use qimage::quaternion::{AlgebraSpec, Quaternion};
use qimage::solvers::{
    basis_lemma_violations, commutator_decompose, conjugate_to_canonical, nested_commutator, vk_decompose,
    waring_decompose, SolveCtx,
};

fn gf(p: u64) -> FieldDescriptor {
    FieldDescriptor::prime(p).unwrap()
}

fn hamilton(p: u64) -> AlgebraSpec {
    AlgebraSpec::hamilton(gf(p)).unwrap()
}

fn char_two(k: u32) -> AlgebraSpec {
    let f = FieldDescriptor::binary_default(k).unwrap();
    AlgebraSpec::char_two(f.clone(), f.one(), f.one()).unwrap()
}

fn tower() -> FieldDescriptor {
    let t = FieldDescriptor::tower_base();
    let t = t.tower_adjoin(&t.from_i64(2)).unwrap();
    t.tower_adjoin(&t.from_i64(5)).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn axioms_hold(f: &FieldDescriptor, a: &FieldElement, b: &FieldElement, c: &FieldElement) -> bool {
    f.add(&f.add(a, b), c) == f.add(a, &f.add(b, c))
        && f.mul(&f.mul(a, b), c) == f.mul(a, &f.mul(b, c))
        && f.add(a, b) == f.add(b, a)
        && f.mul(a, b) == f.mul(b, a)
        && f.mul(a, &f.add(b, c)) == f.add(&f.mul(a, b), &f.mul(a, c))
        && f.is_zero(&f.sub(a, a))
        && (f.is_zero(a) || f.is_one(&f.mul(a, &f.inv(a).unwrap())))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn prime_field_axioms(p in prop::sample::select(vec![2u64, 3, 5, 7, 101, 65_521]), a: u64, b: u64, c: u64) {
        let f = gf(p);
        let [a, b, c] = [a, b, c].map(|x| FieldElement::Prime(x % p));
        prop_assert!(axioms_hold(&f, &a, &b, &c));
    }

    #[test]
    fn binary_field_axioms(k in 1u32..=8, a: u64, b: u64, c: u64) {
        let f = FieldDescriptor::binary_default(k).unwrap();
        let m = 1u64 << k;
        let [a, b, c] = [a, b, c].map(|x| FieldElement::Binary(x % m));
        prop_assert!(axioms_hold(&f, &a, &b, &c));
    }

    #[test]
    fn rational_field_axioms(n in prop::array::uniform3(-1000i64..1000), d in prop::array::uniform3(1i64..1000)) {
        let f = FieldDescriptor::rational();
        let [a, b, c] = [0, 1, 2].map(|t| FieldElement::Rational(BigRational::new(BigInt::from(n[t]), BigInt::from(d[t]))));
        prop_assert!(axioms_hold(&f, &a, &b, &c));
    }

    #[test]
    fn tower_field_axioms(seed: u64) {
        let f = tower();
        let mut r = rng(seed);
        let [a, b, c] = std::array::from_fn(|_| f.sample_element(&mut r, 6));
        prop_assert!(axioms_hold(&f, &a, &b, &c));
    }

    #[test]
    fn tower_sign_is_multiplicative(seed: u64) {
        let f = tower();
        let mut r = rng(seed);
        let x = f.sample_element(&mut r, 6);
        let y = f.sample_element(&mut r, 6);
        let (sx, sy) = (f.sign(&x).unwrap(), f.sign(&y).unwrap());
        let expected = match (sx, sy) {
            (std::cmp::Ordering::Equal, _) | (_, std::cmp::Ordering::Equal) => std::cmp::Ordering::Equal,
            _ if sx == sy => std::cmp::Ordering::Greater,
            _ => std::cmp::Ordering::Less,
        };
        prop_assert_eq!(f.sign(&f.mul(&x, &y)), Some(expected));
        prop_assert_eq!(f.sign(&f.neg(&x)), Some(sx.reverse()));
    }

    #[test]
    fn sums_of_two_squares_become_squares(seed: u64) {
        let f = FieldDescriptor::tower_of(&[BigRational::from_integer(3.into())]).unwrap();
        let mut r = rng(seed);
        let a = f.sample_element(&mut r, 8);
        let b = f.sample_element(&mut r, 8);
        let s = f.add(&f.square(&a), &f.square(&b));
        let g = if f.sqrt_if_square(&s).is_some() { f.clone() } else { f.tower_adjoin(&s).unwrap() };
        let root = g.sqrt_if_square(&s).unwrap();
        prop_assert_eq!(g.square(&root), s);
        prop_assert_ne!(g.sign(&root), Some(std::cmp::Ordering::Less));
    }

    #[test]
    fn quaternion_associativity(seed: u64, which in 0usize..4) {
        let spec = [hamilton(5), hamilton(7), char_two(2), char_two(3)][which].clone();
        let mut r = rng(seed);
        let [x, y, z]: [Quaternion; 3] = std::array::from_fn(|_| spec.sample(&mut r, 0));
        prop_assert_eq!(spec.mul(&spec.mul(&x, &y), &z), spec.mul(&x, &spec.mul(&y, &z)));
    }

    #[test]
    fn trace_is_symmetric_and_norm_multiplicative(seed: u64, which in 0usize..4) {
        let spec = [hamilton(5), AlgebraSpec::parse(gf(7), "Hq(3,5)").unwrap(), char_two(1), char_two(3)][which].clone();
        let f = spec.field().clone();
        let mut r = rng(seed);
        let x = spec.sample(&mut r, 0);
        let y = spec.sample(&mut r, 0);
        prop_assert_eq!(spec.trace(&spec.mul(&x, &y)), spec.trace(&spec.mul(&y, &x)));
        prop_assert_eq!(spec.norm(&spec.mul(&x, &y)), f.mul(&spec.norm(&x), &spec.norm(&y)));
        prop_assert_eq!(spec.mul(&x, &spec.conj(&x)), spec.scalar(spec.norm(&x)));
    }

    #[test]
    fn evaluation_is_multilinear(seed: u64, slot in 0usize..3) {
        let spec = hamilton(5);
        let f = spec.field().clone();
        let mut r = rng(seed);
        let choices: Vec<FieldElement> = (0..5).map(|c| f.from_i64(c)).collect();
        let p = MultilinearPoly::sample(&f, 3, &choices, &mut r).unwrap();
        let mut args: Vec<Quaternion> = (0..3).map(|_| spec.sample(&mut r, 0)).collect();
        let (a, b) = (spec.sample(&mut r, 0), spec.sample(&mut r, 0));
        let (l, m) = (f.sample_element(&mut r, 0), f.sample_element(&mut r, 0));
        args[slot] = spec.add(&spec.scale(&l, &a), &spec.scale(&m, &b));
        let lhs = p.evaluate(&spec, &args).unwrap();
        args[slot] = a;
        let pa = p.evaluate(&spec, &args).unwrap();
        args[slot] = b;
        let pb = p.evaluate(&spec, &args).unwrap();
        prop_assert_eq!(lhs, spec.add(&spec.scale(&l, &pa), &spec.scale(&m, &pb)));
    }

    #[test]
    fn vk_expansion_matches_nesting(seed: u64) {
        let spec = hamilton(7);
        let mut r = rng(seed);
        let v2 = make_vk(spec.field(), 2).unwrap();
        let args: Vec<Quaternion> = (0..4).map(|_| spec.sample(&mut r, 0)).collect();
        prop_assert_eq!(v2.evaluate(&spec, &args).unwrap(), nested_commutator(&spec, &args));
    }

    #[test]
    fn forms_lie_in_the_s2_tideal(l in prop::array::uniform9(0i64..5)) {
        let f = gf(5);
        let l = l.map(|x| f.from_i64(x));
        prop_assert!(make_deg3_form(&f, &l[0], &l[1]).in_s2_tideal());
        prop_assert!(make_deg4_form(&f, &l).in_s2_tideal());
    }

    #[test]
    fn substitution_relabels_arguments(seed: u64, tau in Just(vec![0u8, 1, 2]).prop_shuffle()) {
        let spec = hamilton(3);
        let f = spec.field().clone();
        let mut r = rng(seed);
        let choices: Vec<FieldElement> = (0..3).map(|c| f.from_i64(c)).collect();
        let p = MultilinearPoly::sample(&f, 3, &choices, &mut r).unwrap();
        let args: Vec<Quaternion> = (0..3).map(|_| spec.sample(&mut r, 0)).collect();
        // variable v becomes τ(v): p∘τ at args equals p at (args[τ(0)], ...)
        let relabeled: Vec<Quaternion> = tau.iter().map(|&t| args[t as usize].clone()).collect();
        prop_assert_eq!(
            p.substitute(&tau).unwrap().evaluate(&spec, &args).unwrap(),
            p.evaluate(&spec, &relabeled).unwrap()
        );
    }

    #[test]
    fn commutator_round_trip_large_primes(p in prop::sample::select(vec![11u64, 13, 101, 65_521]), c: [u64; 3]) {
        let spec = hamilton(p);
        let t = Quaternion::new(FieldElement::Prime(0), FieldElement::Prime(c[0] % p), FieldElement::Prime(c[1] % p), FieldElement::Prime(c[2] % p));
        let mut ctx = SolveCtx::new(spec.clone());
        let (x, y) = commutator_decompose(&mut ctx, &t).unwrap();
        prop_assert_eq!(spec.s2(&x, &y), t);
        prop_assert!(spec.in_s2_target_set(&x) && spec.in_s2_target_set(&y));
    }

    #[test]
    fn canonicalization_preserves_trace(seed: u64) {
        let spec = AlgebraSpec::hamilton(FieldDescriptor::tower_base()).unwrap();
        let mut r = rng(seed);
        let alpha = spec.sample(&mut r, 6);
        let mut ctx = SolveCtx::new(spec.clone());
        let c = conjugate_to_canonical(&mut ctx, &alpha).unwrap();
        let f = ctx.field().clone();
        prop_assert_eq!(&c.canonical.c[0], &alpha.c[0]);
        prop_assert!(f.is_zero(&c.canonical.c[2]) && f.is_zero(&c.canonical.c[3]));
        prop_assert_eq!(ctx.spec().trace(&c.canonical), ctx.spec().trace(&alpha));
    }

    #[test]
    fn waring_factors_are_pure(seed: u64) {
        let spec = AlgebraSpec::hamilton(FieldDescriptor::tower_base()).unwrap();
        let mut r = rng(seed);
        let target = spec.sample(&mut r, 6);
        prop_assume!(!spec.is_zero(&target));
        let s2 = make_s2(spec.field());
        let mut ctx = SolveCtx::new(spec.clone());
        let (w1, w2) = waring_decompose(&mut ctx, &target, &s2, &s2).unwrap();
        let s = ctx.spec();
        prop_assert!(s.in_s2_target_set(&w1.value) && s.in_s2_target_set(&w2.value));
        prop_assert_eq!(s.mul(&w1.value, &w2.value), target);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn basis_values_have_one_coordinate_in_odd_characteristic(seed: u64, m in 2usize..=3) {
        let spec = hamilton(3);
        let f = spec.field().clone();
        let choices = [f.zero(), f.one(), f.from_i64(-1)];
        let p = MultilinearPoly::sample(&f, m, &choices, &mut rng(seed)).unwrap();
        prop_assert!(basis_lemma_violations(&spec, &p).unwrap().is_empty());
    }

    #[test]
    fn classification_is_sound(seed: u64) {
        let spec = hamilton(3);
        let f = spec.field().clone();
        let choices: Vec<FieldElement> = (0..3).map(|c| f.from_i64(c)).collect();
        let p = MultilinearPoly::sample(&f, 2, &choices, &mut rng(seed)).unwrap();
        let img = enumerate_image(&p, &spec, DEFAULT_EVAL_BUDGET).unwrap();
        let class = img.class();
        prop_assert_eq!(class == ImageClass::Full, img.cardinality() == 81);
        prop_assert_eq!(class == ImageClass::Zero, img.set.values() == [0]);
        let pure: Vec<Quaternion> = spec.enumerate_s2_target_set().unwrap();
        let equal = img.cardinality() == pure.len() && pure.iter().all(|q| img.set.contains(img.alg.index_of(q).unwrap()));
        prop_assert_eq!(class == ImageClass::S2SetEqual, equal);
        prop_assert_eq!(!f.is_zero(&p.coefficient_sum()), class == ImageClass::Full);
    }
}

#[test]
fn prime_square_counts() {
    for p in [3u64, 5, 7, 11, 13, 101] {
        let f = gf(p);
        let n = f.enumerate_elements().unwrap().iter().filter(|x| f.sqrt_if_square(x).is_some()).count();
        assert_eq!(n as u64, (p + 1) / 2, "GF({p})");
    }
}

#[test]
fn basis_values_can_spread_in_characteristic_two() {
    // i·i = u + i has two nonzero coordinates
    let spec = char_two(1);
    let p = make_monomial(spec.field(), 2).unwrap();
    let bad = basis_lemma_violations(&spec, &p).unwrap();
    assert!(bad.iter().any(|(t, v)| t == &vec![1, 1] && *v == spec.from_i64s([1, 1, 0, 0])));
}

#[test]
fn s2_of_s2_set_odd_characteristic() {
    for p in [3u64, 5] {
        let spec = hamilton(p);
        let mut ctx = SolveCtx::new(spec.clone());
        for t in spec.enumerate_s2_target_set().unwrap() {
            let w = vk_decompose(&mut ctx, &t, 2).unwrap();
            let (a, b) = (spec.s2(&w.args[0], &w.args[1]), spec.s2(&w.args[2], &w.args[3]));
            assert!(spec.in_s2_target_set(&a) && spec.in_s2_target_set(&b));
            assert_eq!(spec.s2(&a, &b), t);
        }
    }
}

#[test]
fn s2_of_s2_set_is_central_in_characteristic_two() {
    let spec = char_two(2);
    let pure = spec.enumerate_s2_target_set().unwrap();
    for x in &pure {
        for y in &pure {
            assert!(spec.is_central(&spec.s2(x, y)));
        }
    }
}

#[test]
fn s2_image_has_q_cubed_elements() {
    for p in [3u64, 5, 7] {
        let spec = hamilton(p);
        let img = enumerate_image(&make_s2(spec.field()), &spec, DEFAULT_EVAL_BUDGET).unwrap();
        assert_eq!(img.cardinality() as u64, p * p * p);
    }
}
