//! Sample an orbit by random words and compare it with the exact closure.
//!
//!     cargo run --release --example sample_and_verify -- crates/core/fixtures/three_centers.json

use homothety::classifier::classify_group;
use homothety::io::load_spec;
use homothety::simulator::{density_report, sample_orbit, SampleConfig};

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/three_centers.json").into());
    let spec = load_spec(path.as_ref()).expect("spec loads");
    let x = vec![0.5; spec.dim()];
    let exact_x: Vec<_> = x.iter().map(|_| homothety::scalar::FieldScalar::from_ratio(spec.context(), 1, 2)).collect();
    let desc = classify_group(&spec).expect("classifiable").orbit_closure(&exact_x).expect("resolved");
    println!("predicted: {}", desc.kind_name());

    let mut cfg = SampleConfig::new(x);
    cfg.seed = 7;
    let sample = sample_orbit(&spec, &cfg).unwrap();
    let report = density_report(&sample, &desc, cfg.window, 0.25, 0.1).unwrap();
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
}
