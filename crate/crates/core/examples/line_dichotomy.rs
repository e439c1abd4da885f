//! Groups acting on the real line, and the density test for `{λ^q p}`.

use homothety::affine::{AffineMap, GroupSpec};
use homothety::classifier::dichotomy_line;
use homothety::scalar::{FieldContext, FieldScalar};
use homothety::simulator::{hlambda_oracle, QBound};

fn main() {
    let ctx = FieldContext::new(vec![2]).unwrap();
    let s = |t: &str| FieldScalar::parse(t, &ctx).unwrap();
    let line = |maps: Vec<AffineMap>| GroupSpec::from_maps(1, ctx.clone(), maps).unwrap();

    let groups = [
        ("x -> 2x, x -> x+1", line(vec![AffineMap::new(s("2"), vec![s("0")]).unwrap(), AffineMap::translation_by(vec![s("1")], &ctx)])),
        ("x -> -x, x -> x+1, x -> x+sqrt2", line(vec![AffineMap::symmetry(vec![s("0")], &ctx), AffineMap::translation_by(vec![s("1")], &ctx), AffineMap::translation_by(vec![s("sqrt2")], &ctx)])),
        ("x -> -x, x -> x+3", line(vec![AffineMap::symmetry(vec![s("0")], &ctx), AffineMap::translation_by(vec![s("3")], &ctx)])),
    ];
    for (name, g) in groups {
        println!("{name}: {:?}", dichotomy_line(&g).unwrap());
    }

    for lambda in [1.5, 2.0, 3.0] {
        let dense = hlambda_oracle(lambda, (-20, 20), QBound::Adaptive, (1.0, 2.0), 0.05);
        println!("lambda={lambda}: lambda^q p fills [1, 2] at eps 0.05: {dense}");
    }
}
