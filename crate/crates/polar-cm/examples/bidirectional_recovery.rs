//! Fault injection into the bidirectional CPCM decoder.
//!
//! A scripted detector forces a failure report on the first attempt of one
//! codeword at a time and the example prints the resulting pass structure:
//! where the forward pass stops, what the backward pass recovers, and how
//! many attempts each codeword consumed.
//!
//! ```bash
//! cargo run -p polar-cm --example bidirectional_recovery
//! ```

use polar_cm::channels::{Constellation, Labeling, Principle, SymbolBlock};
use polar_cm::construction::{ga_evolve, select_info_set, surrogate_level_means};
use polar_cm::cpcm::{cpcm_decode, cpcm_map, GenieDetector, ScriptedDetector};
use polar_cm::interleave::interleaver2;
use polar_cm::polar::{polar_encode, CombineRule, PolarCode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn main() {
    let (m, n, l_count) = (2usize, 32usize, 5usize);
    let sigma = 1e-6;
    let constellation = Constellation::new(m, Labeling::SetPartition).unwrap();
    let means = surrogate_level_means(&constellation, 0.5, Principle::Mlc);
    let profile = ga_evolve(&interleaver2(n, m).unwrap(), &means).unwrap();
    let info = select_info_set(&profile, n / 2).unwrap();
    let code = PolarCode::new(info.frozen_mask(n), vec![0; n]).unwrap();

    let mut rng = ChaCha12Rng::seed_from_u64(9);
    let codewords: Vec<Vec<u8>> = (0..l_count)
        .map(|_| {
            let bits: Vec<u8> = (0..code.k()).map(|_| rng.gen_range(0..2)).collect();
            polar_encode(&code, &bits).unwrap()
        })
        .collect();
    let frame = cpcm_map(&codewords, m, &mut rng).unwrap();
    let mut block = SymbolBlock::modulate(&constellation, frame.tuples().to_vec()).unwrap();
    block.transmit(sigma, &mut rng);

    println!("L={l_count}; forcing one first-attempt failure at a time\n");
    println!(
        "{:>10} | {:>11} {:>12} {:>12} {:>8}",
        "fail at", "idx_forward", "idx_backward", "attempts", "all ok"
    );
    for target in 0..l_count {
        let mut detector =
            ScriptedDetector::new(GenieDetector::new(&codewords), vec![target]);
        let outcome = cpcm_decode(
            &frame.receiver_context(),
            &block.received,
            &code,
            &constellation,
            sigma,
            &mut detector,
            CombineRule::Exact,
        )
        .unwrap();
        let fmt_idx = |v: Option<usize>| {
            v.map(|i| (i + 1).to_string()).unwrap_or_else(|| "-".into())
        };
        println!(
            "{:>10} | {:>11} {:>12} {:>12} {:>8}",
            target + 1,
            fmt_idx(outcome.idx_forward),
            fmt_idx(outcome.idx_backward),
            format!("{:?}", outcome.attempts),
            outcome.all_ok()
        );
    }
    println!("\nThe failed codeword is retried once after the backward pass");
    println!("upgrades its context; every other codeword is decoded exactly once.");
}
