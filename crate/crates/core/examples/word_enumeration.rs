//! Enumerate group elements by word length and report the distinct centers,
//! ratios and translations found.

use homothety::invariant::{compute_eg, enumerate_words};
use homothety::io::{load_spec, render_vector, render_word};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/homothety_and_translations_n2.json");
    let spec = load_spec(path.as_ref()).unwrap();
    for len in 0..=4 {
        let omega = enumerate_words(&spec, len).unwrap();
        println!(
            "L={len}: {} elements, {} centers, {} translations, {} ratios",
            omega.element_count(),
            omega.gamma_centers.len(),
            omega.translation_points.len(),
            omega.ratios.len()
        );
    }
    let omega = enumerate_words(&spec, 2).unwrap();
    for (c, w) in omega.gamma_centers.iter().take(6) {
        println!("  center {:?} from {}", render_vector(c), render_word(&spec, w));
    }
    let e = compute_eg(&spec).unwrap();
    println!("invariant flat: base {:?}, dim {}", render_vector(e.base()), e.dim());
}
