//! Classify a group given as a JSON spec file and print the report.
//!
//!     cargo run --example classify -- crates/core/fixtures/three_centers.json

use homothety::classifier::classify_group;
use homothety::io::{load_spec, ReportJson};

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/reflection_incommensurable.json").into());
    let spec = load_spec(path.as_ref()).unwrap_or_else(|e| panic!("{path}: {e}"));
    match classify_group(&spec) {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&ReportJson::from(&report)).unwrap());
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
        }
        Err(e) => eprintln!("cannot classify: {e}"),
    }
}
