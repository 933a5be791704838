//! Re-derives the trigon letter table from splice behavior and compares it
//! with the shipped one.
//!
//! Usage: `calibrate_trigons [max_n]` (default 8).

use spherecurve::analytics::{derive_trigon_calibration, TrigonSignature, TRIGON_CALIBRATION};
use spherecurve::{enumerate_words, Convention};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let max_n: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(8);
    let mut curves = Vec::new();
    for n in 1..=max_n {
        curves.extend(enumerate_words(n, Convention::default())?.plane_curves());
    }
    let report = derive_trigon_calibration(&curves, max_n)?;
    println!("pattern\ttrigons\tcorner->incoherent\tcorner->coherent\tmax r");
    for (pattern, b) in &report.behavior {
        println!(
            "{pattern}\t{}\t{}\t{}\t{}",
            b.trigons, b.corner_to_incoherent_bigon, b.corner_to_coherent_bigon, b.max_reductivity
        );
    }
    println!("D trigons reaching B in one splice: {}/{}", report.d_to_b, report.d_trigons);
    match &report.table {
        Some(table) => {
            for (pattern, letter) in table {
                println!("{} -> {letter}", TrigonSignature::Pattern(*pattern));
            }
            let mut shipped = TRIGON_CALIBRATION.to_vec();
            shipped.sort();
            println!("matches shipped table: {}", *table == shipped);
        }
        None => println!("behavior does not determine the table at this size"),
    }
    Ok(())
}
