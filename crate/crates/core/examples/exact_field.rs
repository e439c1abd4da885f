//! Exact arithmetic in Q(sqrt2, sqrt3), including signs of nearly cancelling values.

use homothety::scalar::{FieldContext, FieldScalar};

fn main() {
    let ctx = FieldContext::new(vec![2, 3]).expect("independent radicands");
    let parse = |t: &str| FieldScalar::parse(t, &ctx).unwrap();

    let a = parse("1 + sqrt2");
    let b = parse("sqrt3 - 1/2");
    println!("a = {a}, b = {b}");
    println!("a*b = {}", &a * &b);
    println!("a/b = {}", &a / &b);
    println!("a^-3 = {}", a.pow(-3).unwrap());

    // 19601 - 13860 sqrt2 is about 2.6e-5
    let tiny = parse("19601 - 13860*sqrt2");
    println!("{tiny}: sign {} (~{:e})", tiny.signum(), tiny.to_f64());
    println!("sqrt6 > 2 + 2/5: {}", parse("sqrt6") > parse("12/5"));
}
