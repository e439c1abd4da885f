//! Exact orbit closures and membership queries for a few small groups.

use homothety::affine::{AffineMap, GroupSpec};
use homothety::classifier::{classify_group, homeomorphy_note};
use homothety::scalar::{FieldContext, FieldScalar};

fn main() {
    let ctx = FieldContext::new(vec![2]).unwrap();
    let s = |t: &str| FieldScalar::parse(t, &ctx).unwrap();
    let pt = |x: &str, y: &str| vec![s(x), s(y)];

    // homothety of ratio 2 about (1, 1) and a vertical unit translation
    let f = AffineMap::homothety(pt("1", "1"), s("2")).unwrap();
    let t = AffineMap::translation_by(pt("0", "1"), &ctx);
    let g = GroupSpec::from_maps(2, ctx.clone(), vec![f, t]).unwrap();
    let report = classify_group(&g).unwrap();
    for x in [pt("1", "0"), pt("3", "1/2")] {
        let desc = report.orbit_closure(&x).unwrap();
        println!("closure of ({}, {}): {}", x[0], x[1], desc.kind_name());
        for y in [pt("1", "7/3"), pt("5", "-7"), pt("2", "sqrt2"), pt("-3", "0")] {
            println!("  contains ({}, {}): {}", y[0], y[1], desc.member(&y).unwrap());
        }
    }

    // point reflection through (1/2, 0) with translations by (1, 0) and (sqrt2, 0)
    let h = GroupSpec::from_maps(
        2,
        ctx.clone(),
        vec![
            AffineMap::symmetry(pt("1", "0"), &ctx),
            AffineMap::translation_by(pt("1", "0"), &ctx),
            AffineMap::translation_by(pt("sqrt2", "0"), &ctx),
        ],
    )
    .unwrap();
    let report = classify_group(&h).unwrap();
    let on_axis = report.orbit_closure(&pt("0", "0")).unwrap();
    let off_axis = report.orbit_closure(&pt("0", "1")).unwrap();
    let (c0, c1) = (on_axis.connected_components().unwrap(), off_axis.connected_components().unwrap());
    println!("components {c0:?} vs {c1:?}: {}", homeomorphy_note(c0, c1));
}
