//! Cross-module consistency checks tying the Monte Carlo path to the
//! analytical construction path.

use polar_cm::construction::{ga_evolve, select_info_set, union_bound};
use polar_cm::interleave::interleaver2;
use polar_cm::polar::{polar_encode, sc_decode_genie, Bit, PolarCode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

/// Genie-aided SC block-error rate over a homogeneous bi-AWGN channel must
/// track the GA union bound closely (within 30% relative) at an operating
/// point where the bound sits near 1e-2.
#[test]
fn genie_bler_matches_ga_bound_n256() {
    let n = 256;
    let k = 128;
    // Tune sigma so the GA bound lands near 1e-2.
    let trivial = interleaver2(n, 1).unwrap();
    let bound_at = |sigma: f64| {
        let profile = ga_evolve(&trivial, &[2.0 / (sigma * sigma)]).unwrap();
        let info = select_info_set(&profile, k).unwrap();
        (union_bound(&profile, &info), info)
    };
    let mut lo = 0.5;
    let mut hi = 0.9;
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if bound_at(mid).0 < 1e-2 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let sigma = 0.5 * (lo + hi);
    let (bound, info) = bound_at(sigma);
    assert!((5e-3..2e-2).contains(&bound), "bound {bound} drifted from 1e-2");

    let code = PolarCode::new(info.frozen_mask(n), vec![0; n]).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(77);
    let trials = 60_000usize;
    let mut errors = 0usize;
    for _ in 0..trials {
        let bits: Vec<Bit> = (0..k).map(|_| rng.gen_range(0..2)).collect();
        let u = code.assemble_u(&bits).unwrap();
        let x = polar_encode(&code, &bits).unwrap();
        let llrs: Vec<f64> = x
            .iter()
            .map(|&b| {
                let s = if b == 0 { 1.0 } else { -1.0 };
                let noise: f64 = StandardNormal.sample(&mut rng);
                2.0 * (s + sigma * noise) / (sigma * sigma)
            })
            .collect();
        errors += sc_decode_genie(&code, &llrs, &u).unwrap().block_error as usize;
    }
    let mc = errors as f64 / trials as f64;
    let rel = (mc - bound).abs() / bound;
    assert!(
        rel <= 0.30,
        "genie BLER {mc:.4e} vs GA bound {bound:.4e}: relative gap {rel:.3}"
    );
}
