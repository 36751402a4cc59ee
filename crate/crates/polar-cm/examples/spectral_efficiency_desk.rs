//! Desk-scale spectral efficiency: CPCM vs BICM over 16-PAM.
//!
//! For each Eb/N0 point the largest rate meeting a 1e-2 BLER target is
//! selected from the standard rate set; the Shannon-limit rate is printed
//! alongside. Scaled down to N=128 so it finishes in about a minute; the
//! qualitative picture (CPCM supporting higher rates at the same power, or
//! the same rate at roughly 2 dB less power) matches the full-scale setup.
//!
//! ```bash
//! cargo run --release -p polar-cm --example spectral_efficiency_desk
//! ```

use polar_cm::channels::Labeling;
use polar_cm::sim::{
    shannon_bound_ebn0_db, spectral_efficiency_sweep, DetectorKind, Scheme, SimConfig,
};

fn config(scheme: Scheme, labeling: Labeling, max_frames: u64) -> SimConfig {
    SimConfig {
        scheme,
        m: 4,
        n: 128,
        l: 100,
        rate_set: vec![(1, 8), (1, 4), (3, 8), (1, 2), (5, 8), (3, 4), (7, 8)],
        ebn0_grid_db: vec![9.0, 11.0, 13.0, 15.0],
        bler_target: 1e-2,
        max_frames,
        max_errors: 60,
        seed: 11,
        labeling,
        detector: DetectorKind::Genie,
    }
}

fn main() {
    println!("16-PAM spectral efficiency at BLER target 1e-2 (N=128, L=100, desk scale)\n");
    let cpcm = spectral_efficiency_sweep(&config(
        Scheme::Cpcm,
        Labeling::SetPartition,
        300,
    ))
    .unwrap();
    let bicm = spectral_efficiency_sweep(&config(Scheme::Bicm, Labeling::Gray, 8_000)).unwrap();
    println!(
        "{:>8} | {:>12} {:>12} | {:>14}",
        "Eb/N0", "CPCM R_cm", "BICM R_cm", "Shannon R_cm"
    );
    for (c, b) in cpcm.iter().zip(&bicm) {
        let fmt = |r: Option<f64>| r.map(|v| format!("{v:.3}")).unwrap_or_else(|| "-".into());
        // Shannon-limit rate at this Eb/N0 by inverting the bound curve.
        let shannon_rate = {
            let mut lo = 1e-6;
            let mut hi = 6.0;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if shannon_bound_ebn0_db(mid) < c.ebn0_db {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        println!(
            "{:>8.1} | {:>12} {:>12} | {:>14.3}",
            c.ebn0_db,
            fmt(c.r_cm),
            fmt(b.r_cm),
            shannon_rate
        );
    }
    println!("\nBoth schemes see the same bit channels; BICM pays for ignoring the");
    println!("inter-level dependency, while CPCM's staggering keeps the channels");
    println!("feeding each codeword independent without shortening the code.");
    println!("Against MLC over 4-PAM the two run close at this block length; the");
    println!("CPCM edge is its full-length (N vs N/m) component codes.");
}
