mod common;

use std::sync::Arc;

use homothety::affine::{evaluate_word, evaluate_word_by_folding, AffineMap, GroupSpec};
use homothety::classifier::{classify_group, Case};
use homothety::closures::{classify_mul_subgroup, mul_member};
use homothety::invariant::compute_eg;
use homothety::io::{parse_spec, render_spec};
use homothety::scalar::{FieldContext, FieldScalar};
use homothety::simulator::{coverage_of_prediction, sample_orbit_raw, SampleConfig};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use common::*;

fn q23() -> Arc<FieldContext> {
    FieldContext::new(vec![2, 3]).unwrap()
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn scalar() -> impl Strategy<Value = FieldScalar> {
    proptest::collection::vec(small_rational(), 4).prop_map(|c| FieldScalar::from_coeffs(&q23(), c))
}

fn nonzero_scalar() -> impl Strategy<Value = FieldScalar> {
    scalar().prop_filter("nonzero", |x| !x.is_zero())
}

fn dyadic_map(ctx: &Arc<FieldContext>, ratio: &str, b: &[i64]) -> AffineMap {
    let b = b.iter().map(|&x| FieldScalar::from_ratio(ctx, x, 4)).collect();
    AffineMap::new(s(ctx, ratio), b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn field_ring_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        prop_assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn field_inverse(a in nonzero_scalar()) {
        prop_assert!((&a * &a.inverse().unwrap()).is_one());
        prop_assert_eq!(a.pow(-2).unwrap(), (&a * &a).inverse().unwrap());
    }

    #[test]
    fn sign_agrees_with_float(a in scalar()) {
        let f = a.to_f64();
        if f.abs() > 1e-9 {
            prop_assert_eq!(a.signum() as f64, f.signum());
        }
        prop_assert_eq!(a.signum() == 0, a.is_zero());
        prop_assert_eq!((-&a).signum(), -a.signum());
    }

    #[test]
    fn order_is_compatible_with_addition(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a.partial_cmp(&b), (&a + &c).partial_cmp(&(&b + &c)));
    }

    #[test]
    fn display_parse_round_trip(a in scalar()) {
        let text = a.to_string();
        prop_assert_eq!(FieldScalar::parse(&text, &q23()).unwrap(), a);
    }

    #[test]
    fn compose_is_associative(seed in any::<u64>(), n in 1usize..4) {
        let mut r = rng(seed);
        let ctx = FieldContext::rationals();
        let (f, g, h) = (rand_map(&mut r, &ctx, n), rand_map(&mut r, &ctx, n), rand_map(&mut r, &ctx, n));
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert!(f.compose(&f.inverse()).unwrap().is_identity());
    }

    #[test]
    fn word_formula_matches_folding(seed in any::<u64>()) {
        let mut r = rng(seed);
        let spec = random_case_one_spec(&mut r, 3, 4);
        let w = random_word(&mut r, spec.generators().len(), 10);
        prop_assert_eq!(evaluate_word(&spec, &w).unwrap(), evaluate_word_by_folding(&spec, &w).unwrap());
    }

    #[test]
    fn commutes_iff_compositions_agree(seed in any::<u64>(), n in 1usize..4) {
        let mut r = rng(seed);
        let ctx = FieldContext::rationals();
        let f = rand_map(&mut r, &ctx, n);
        let g = if r.gen_bool(0.3) { f.power(r.gen_range(-3..=3)) } else { rand_map(&mut r, &ctx, n) };
        let agree = f.compose(&g).unwrap() == g.compose(&f).unwrap();
        prop_assert_eq!(f.commutes(&g), agree);
    }

    #[test]
    fn eg_is_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let spec = random_case_one_spec(&mut r, 3, 4);
        let e = compute_eg(&spec).unwrap();
        for g in spec.maps() {
            prop_assert!(e.is_invariant_under(g));
            prop_assert!(e.is_invariant_under(&g.inverse()));
            if let Some(c) = g.center() {
                if !g.in_symmetry_group() {
                    prop_assert!(e.contains(&c));
                }
            }
        }
    }

    #[test]
    fn eg_moves_with_conjugation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let spec = random_case_one_spec(&mut r, 3, 4);
        let c = rand_vector(&mut r, spec.context(), spec.dim());
        let moved = compute_eg(&spec.translated(&c)).unwrap();
        prop_assert!(moved.same_set(&compute_eg(&spec).unwrap().translated(&c)));
        let a = classify_group(&spec).unwrap();
        let b = classify_group(&spec.translated(&c)).unwrap();
        prop_assert_eq!(a.case, b.case);
        prop_assert_eq!(a.predicates, b.predicates);
    }

    #[test]
    fn case_split_follows_ratios(seed in any::<u64>()) {
        let mut r = rng(seed);
        let spec = if r.gen_bool(0.5) { random_case_one_spec(&mut r, 3, 4) } else { random_case_two_spec(&mut r, 3, 4) };
        let report = classify_group(&spec).unwrap();
        prop_assert_eq!(report.case == Case::Two, spec.in_symmetry_group());
    }

    #[test]
    fn orbit_closure_is_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let spec = if r.gen_bool(0.5) { random_case_one_spec(&mut r, 2, 3) } else { random_case_two_spec(&mut r, 2, 3) };
        let report = classify_group(&spec).unwrap();
        let x = rand_vector(&mut r, spec.context(), spec.dim());
        let Ok(desc) = report.orbit_closure(&x) else { return Ok(()); };
        let w = random_word(&mut r, spec.generators().len(), 6);
        let y = evaluate_word(&spec, &w).unwrap().apply(&x).unwrap();
        prop_assert!(desc.member(&x).unwrap());
        prop_assert!(desc.member(&y).unwrap());
    }

    #[test]
    fn mul_closure_contains_products(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ctx = FieldContext::rationals();
        let k = r.gen_range(1..=3);
        let ratios: Vec<FieldScalar> = (0..k).map(|_| s(&ctx, RATIOS.choose(&mut r).unwrap())).collect();
        let c = classify_mul_subgroup(&ratios).unwrap();
        let mut t = FieldScalar::one(&ctx);
        for x in &ratios {
            t = &t * &x.pow(r.gen_range(-3..=3)).unwrap();
        }
        prop_assert!(mul_member(&c, &t));
        for x in &ratios {
            prop_assert_eq!(mul_member(&c, &(&t * x)), true);
        }
    }

    #[test]
    fn spec_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let spec = if r.gen_bool(0.5) { random_case_one_spec(&mut r, 3, 4) } else { random_case_two_spec(&mut r, 3, 4) };
        let back = parse_spec(&render_spec(&spec)).unwrap();
        prop_assert_eq!(back.dim(), spec.dim());
        prop_assert!(back.maps().eq(spec.maps()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn samples_translate_with_the_group(seed in any::<u64>(), shift in proptest::collection::vec(-8i64..=8, 2)) {
        let ctx = FieldContext::rationals();
        let maps = vec![dyadic_map(&ctx, "2", &[1, -2]), dyadic_map(&ctx, "-1/2", &[3, 0]), dyadic_map(&ctx, "1", &[0, 4])];
        let spec = GroupSpec::from_maps(2, ctx.clone(), maps).unwrap();
        let c: Vec<FieldScalar> = shift.iter().map(|&x| FieldScalar::from_ratio(&ctx, x, 2)).collect();
        let cf: Vec<f64> = shift.iter().map(|&x| x as f64 / 2.0).collect();
        let mut cfg = SampleConfig::new(vec![0.25, -0.5]);
        cfg.num_words = 200;
        cfg.max_word_len = 6;
        cfg.seed = seed;
        let base = sample_orbit_raw(&spec, &cfg).unwrap();
        cfg.x = cfg.x.iter().zip(&cf).map(|(a, b)| a + b).collect();
        let moved = sample_orbit_raw(&spec.translated(&c), &cfg).unwrap();
        prop_assert_eq!(base.len(), moved.len());
        for (p, q) in base.iter().zip(&moved) {
            for i in 0..2 {
                prop_assert_eq!(p[i] + cf[i], q[i]);
            }
        }
    }

    #[test]
    fn coverage_grows_with_samples(seed in any::<u64>()) {
        let spec = fixture("three_centers");
        let desc = classify_group(&spec).unwrap().orbit_closure(&v(spec.context(), &["0", "0"])).unwrap();
        let mut cfg = SampleConfig::new(vec![0.0, 0.0]);
        cfg.num_words = 4000;
        cfg.seed = seed;
        cfg.window = 2.0;
        let all = sample_orbit_raw(&spec, &cfg).unwrap();
        let mut last = 0.0;
        for m in [500, 1500, 4000] {
            let (cov, _) = coverage_of_prediction(&all[..m.min(all.len())], &desc, 2.0, 0.25, 0.15).unwrap();
            prop_assert!(cov >= last);
            last = cov;
        }
    }
}
