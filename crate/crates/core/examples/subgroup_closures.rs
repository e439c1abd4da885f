//! Closures of finitely generated multiplicative subgroups of R* and of
//! additive subgroups of R^n.

use homothety::closures::{classify_add_subgroup, classify_mul_subgroup, mul_member, AddClosure};
use homothety::io::render_vector;
use homothety::scalar::{FieldContext, FieldScalar};

fn main() {
    let q = FieldContext::rationals();
    let s = |t: &str| FieldScalar::parse(t, &q).unwrap();

    for ratios in [vec!["4", "8"], vec!["-2", "4"], vec!["2", "3"], vec!["-2", "3"], vec!["-1"]] {
        let gens: Vec<_> = ratios.iter().map(|t| s(t)).collect();
        let c = classify_mul_subgroup(&gens).unwrap();
        println!(
            "<{}>: {} rho={:?} contains -1/2: {}",
            ratios.join(", "),
            c.variant_name(),
            c.rho().map(|r| r.to_string()),
            mul_member(&c, &s("-1/2"))
        );
    }

    let ctx = FieldContext::new(vec![2]).unwrap();
    let vec2 = |x: &str, y: &str| vec![FieldScalar::parse(x, &ctx).unwrap(), FieldScalar::parse(y, &ctx).unwrap()];
    let examples = [
        vec![vec2("2", "0"), vec2("1", "3"), vec2("3", "3")],
        vec![vec2("1", "0"), vec2("sqrt2", "0")],
        vec![vec2("1", "0"), vec2("sqrt2", "0"), vec2("0", "1"), vec2("0", "sqrt2")],
    ];
    for gens in examples {
        match classify_add_subgroup(&gens, 2).unwrap() {
            AddClosure::Lattice { basis } => {
                let b: Vec<_> = basis.iter().map(|v| render_vector(v)).collect();
                println!("{} generators -> lattice with basis {b:?}", gens.len());
            }
            AddClosure::DenseLine { direction } => {
                println!("{} generators -> dense in the line along {:?}", gens.len(), render_vector(&direction));
            }
            AddClosure::Unresolved { notes, .. } => println!("{} generators -> unresolved: {notes}", gens.len()),
        }
    }
}
