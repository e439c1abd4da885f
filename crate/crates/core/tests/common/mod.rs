#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use homothety::affine::{AffineMap, GroupSpec, Word};
use homothety::io::load_spec;
use homothety::linalg::Vector;
use homothety::scalar::{FieldContext, FieldScalar};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}

pub fn fixture(name: &str) -> GroupSpec {
    load_spec(&fixture_path(name)).expect("fixture loads")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn s(ctx: &Arc<FieldContext>, text: &str) -> FieldScalar {
    FieldScalar::parse(text, ctx).unwrap()
}

pub fn v(ctx: &Arc<FieldContext>, xs: &[&str]) -> Vector {
    xs.iter().map(|x| s(ctx, x)).collect()
}

pub fn rand_rational(rng: &mut ChaCha8Rng, ctx: &Arc<FieldContext>) -> FieldScalar {
    let num = rng.gen_range(-4..=4);
    let den = *[1, 1, 2, 3].choose(rng).unwrap();
    FieldScalar::from_ratio(ctx, num, den)
}

pub fn rand_vector(rng: &mut ChaCha8Rng, ctx: &Arc<FieldContext>, n: usize) -> Vector {
    (0..n).map(|_| rand_rational(rng, ctx)).collect()
}

pub const RATIOS: [&str; 10] = ["2", "3", "1/2", "-2", "3/2", "-1/3", "2/3", "-3", "4", "5/2"];

pub fn rand_map(rng: &mut ChaCha8Rng, ctx: &Arc<FieldContext>, n: usize) -> AffineMap {
    let ratio = match rng.gen_range(0..4) {
        0 => s(ctx, "1"),
        1 => s(ctx, "-1"),
        _ => s(ctx, RATIOS.choose(rng).unwrap()),
    };
    AffineMap::new(ratio, rand_vector(rng, ctx, n)).unwrap()
}

/// Non-abelian spec over `Q` with at least one ratio outside `{-1, 1}`.
pub fn random_case_one_spec(rng: &mut ChaCha8Rng, max_n: usize, max_gens: usize) -> GroupSpec {
    let ctx = FieldContext::rationals();
    loop {
        let n = rng.gen_range(1..=max_n);
        let k = rng.gen_range(2..=max_gens);
        let mut maps: Vec<AffineMap> = (0..k).map(|_| rand_map(rng, &ctx, n)).collect();
        if maps.iter().all(AffineMap::in_symmetry_group) {
            let i = rng.gen_range(0..k);
            maps[i] = AffineMap::new(s(&ctx, RATIOS.choose(rng).unwrap()), rand_vector(rng, &ctx, n)).unwrap();
        }
        let spec = GroupSpec::from_maps(n, ctx.clone(), maps).unwrap();
        if !spec.is_abelian() {
            return spec;
        }
    }
}

/// Non-abelian spec with every ratio in `{-1, 1}`; about a quarter of the
/// translation parts are `sqrt2` multiples.
pub fn random_case_two_spec(rng: &mut ChaCha8Rng, max_n: usize, max_gens: usize) -> GroupSpec {
    let ctx = FieldContext::new(vec![2]).unwrap();
    loop {
        let n = rng.gen_range(1..=max_n);
        let k = rng.gen_range(2..=max_gens);
        let mut maps = Vec::new();
        for i in 0..k {
            let mut b = rand_vector(rng, &ctx, n);
            if rng.gen_bool(0.25) {
                b = b.iter().map(|x| x * &s(&ctx, "sqrt2")).collect();
            }
            let ratio = if i == 0 || rng.gen_bool(0.5) { "-1" } else { "1" };
            maps.push(AffineMap::new(s(&ctx, ratio), b).unwrap());
        }
        let spec = GroupSpec::from_maps(n, ctx.clone(), maps).unwrap();
        if !spec.is_abelian() {
            return spec;
        }
    }
}

pub fn random_word(rng: &mut ChaCha8Rng, gens: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let mut w = Word::empty();
    for _ in 0..len {
        w = w.then(rng.gen_range(0..gens), if rng.gen_bool(0.5) { 1 } else { -1 });
    }
    w
}
