//! Runs the full verification on a named preset and prints a short summary.
//!
//! `cargo run --release --example verify_preset -- planar_example`

use std::time::Instant;

use ifs_spectra_core::presets;
use ifs_spectra_core::verify::{run_verification, VerifyConfig};

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "planar_example".into());
    let Some(t) = presets::by_name(&name) else {
        eprintln!("unknown preset {name}; known: {}", presets::NAMES.join(", "));
        std::process::exit(2);
    };
    let now = Instant::now();
    let report = run_verification(&t, &VerifyConfig::default()).expect("verification failed to run");
    println!("catalog: {}", report.catalog.join("; "));
    for s in &report.spectra {
        println!(
            "{}: orthogonality max {:.2e} over {} elements, parseval min {:.6} max {:.6} over {} elements",
            s.name, s.orthogonality.max_value, s.orthogonality.elements, s.parseval.min_final, s.parseval.max_partial, s.parseval.elements
        );
    }
    for p in &report.partition {
        let h: Vec<String> = p.sets.iter().map(|b| format!("{:.4}", b.h)).collect();
        println!("start {:?}: basins [{}] unclassified {}", p.start, h.join(", "), p.unclassified);
    }
    let worst = report.cross_check.iter().map(|r| r.difference).fold(0.0, f64::max);
    println!("cross-check worst difference {worst:.2e}, pass {}", report.cross_check_pass);
    println!("pass {} in {:?}", report.pass, now.elapsed());
}
