//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its runtime. Run with `cargo test --test acceptance -- --nocapture` to see
//! every line.

use std::time::Instant;

use polar_cm::channels::{
    bit_level_capacity, constellation_capacity, Constellation, Labeling, Principle, SymbolBlock,
};
use polar_cm::construction::{
    bec_evolve, bec_stage1_plus_sum, ga_evolve, select_info_set, union_bound,
};
use polar_cm::cpcm::{
    cell_of_bit, cpcm_decode, cpcm_map, cpcm_unmap, extract_codeword, rate_cm, rate_loss,
    tuple_count, CpcmDecodeOutcome, ErrorDetector, GenieDetector, ScriptedDetector,
};
use polar_cm::interleave::{interleaver1, interleaver2, random_interleaver, ChannelAssignment};
use polar_cm::polar::{
    noiseless_llrs, polar_encode, sc_decode, Bit, CombineRule, DecodeResult, PolarCode,
};
use polar_cm::sim::{
    cpcm_surrogate_bound, run_bler, sigma_for_ebn0_db, DetectorKind, Scheme, SimConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn report(name: &str, started: Instant, budget_secs: u64) {
    let elapsed = started.elapsed();
    println!("{name} PASS ({elapsed:.2?})");
    assert!(
        elapsed.as_secs() < budget_secs,
        "{name} exceeded its {budget_secs}s budget: {elapsed:?}"
    );
}

// ---------------------------------------------------------------------------
// AC1: encoder matches an explicit Kronecker oracle; SC inverts it noiselessly
// ---------------------------------------------------------------------------

fn kronecker_generator(n: usize) -> Vec<Vec<Bit>> {
    let f = [[1u8, 0], [1, 1]];
    let mut g = vec![vec![1u8]];
    let mut size = 1;
    while size < n {
        let mut next = vec![vec![0u8; 2 * size]; 2 * size];
        for bi in 0..2 {
            for bj in 0..2 {
                if f[bi][bj] == 1 {
                    for i in 0..size {
                        for j in 0..size {
                            next[bi * size + i][bj * size + j] = g[i][j];
                        }
                    }
                }
            }
        }
        g = next;
        size *= 2;
    }
    g
}

#[test]
fn ac01_encoder_decoder_correctness() {
    let started = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(101);
    for n in [2usize, 4, 8, 16] {
        let g = kronecker_generator(n);
        let code = PolarCode::full_rate(n).unwrap();
        for _ in 0..1000 {
            let u: Vec<Bit> = (0..n).map(|_| rng.gen_range(0..2)).collect();
            let oracle: Vec<Bit> = (0..n)
                .map(|j| (0..n).fold(0, |acc, i| acc ^ (u[i] & g[i][j])))
                .collect();
            assert_eq!(polar_encode(&code, &u).unwrap(), oracle);
        }
    }
    // Noiseless SC round-trips for random (code, word) pairs.
    for trial in 0..1000 {
        let n = 1usize << (2 + trial % 5); // 4..64
        let mask: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        let values: Vec<Bit> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        let code = PolarCode::new(mask, values).unwrap();
        let info: Vec<Bit> = (0..code.k()).map(|_| rng.gen_range(0..2)).collect();
        let x = polar_encode(&code, &info).unwrap();
        let res = sc_decode(&code, &noiseless_llrs(&x)).unwrap();
        assert_eq!(res.info_hat, info);
        assert_eq!(res.x_hat, x);
    }
    report("AC1", started, 60);
}

// ---------------------------------------------------------------------------
// AC2: exact BEC closed forms and erasure conservation
// ---------------------------------------------------------------------------

#[test]
fn ac02_bec_oracle_equivalence() {
    let started = Instant::now();
    // N = 2 closed forms.
    for z in [0.1f64, 0.3, 0.5, 0.9] {
        let p = bec_evolve(&interleaver2(2, 1).unwrap(), &[z]).unwrap();
        assert!((p.per_position[0] - (2.0 * z - z * z)).abs() < 1e-12);
        assert!((p.per_position[1] - z * z).abs() < 1e-12);
    }
    let p = bec_evolve(&interleaver2(2, 2).unwrap(), &[0.2, 0.4]).unwrap();
    assert!((p.per_position[0] - 0.52).abs() < 1e-12);
    assert!((p.per_position[1] - 0.08).abs() < 1e-12);
    // N = 4: two-stage closed form, written out independently.
    let two_stage = |za: f64, zb: f64| {
        let minus = za + zb - za * zb;
        let plus = za * zb;
        [
            2.0 * minus - minus * minus,
            minus * minus,
            2.0 * plus - plus * plus,
            plus * plus,
        ]
    };
    for (z1, z2) in [(0.5, 0.5), (0.2, 0.4), (0.05, 0.95)] {
        let p = bec_evolve(&interleaver2(4, 2).unwrap(), &[z1, z2]).unwrap();
        let oracle = two_stage(z1, z2);
        for (a, b) in p.per_position.iter().zip(oracle) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }
    let p = bec_evolve(&interleaver2(4, 1).unwrap(), &[0.5]).unwrap();
    for (a, b) in p.per_position.iter().zip([0.9375, 0.5625, 0.4375, 0.0625]) {
        assert!((a - b).abs() < 1e-12);
    }
    // Erasure-capacity conservation up to N = 1024.
    let zs = [0.13, 0.47];
    let mut n = 2;
    while n <= 1024 {
        let p = bec_evolve(&interleaver2(n, 2).unwrap(), &zs).unwrap();
        let avg: f64 = p.per_position.iter().map(|z| 1.0 - z).sum::<f64>() / n as f64;
        let leaf = 1.0 - (zs[0] + zs[1]) / 2.0;
        assert!((avg - leaf).abs() < 1e-12, "N={n}");
        n *= 2;
    }
    report("AC2", started, 60);
}

// ---------------------------------------------------------------------------
// AC3: cyclic assignment minimizes the stage-1 plus-channel sum, exhaustively
// ---------------------------------------------------------------------------

fn balanced_assignments(n: usize) -> Vec<ChannelAssignment> {
    // All ways to choose the positions of type 1 (the rest get type 2).
    let half = n / 2;
    (0..(1usize << n))
        .filter(|mask| mask.count_ones() as usize == half)
        .map(|mask| {
            let types: Vec<usize> = (0..n)
                .map(|i| if (mask >> i) & 1 == 1 { 1 } else { 2 })
                .collect();
            ChannelAssignment::from_types(types, 2).unwrap()
        })
        .collect()
}

#[test]
fn ac03_interleaver2_stage1_optimality() {
    let started = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(103);
    for n in [4usize, 8] {
        let all = balanced_assignments(n);
        let expected = match n {
            4 => 6,
            8 => 70,
            _ => unreachable!(),
        };
        assert_eq!(all.len(), expected, "exhaustive enumeration for N={n}");
        let cyclic = interleaver2(n, 2).unwrap();
        for _ in 0..50 {
            let zs = [rng.gen_range(0.01..0.99), rng.gen_range(0.01..0.99)];
            let best = bec_stage1_plus_sum(&cyclic, &zs).unwrap();
            for assignment in &all {
                let sum = bec_stage1_plus_sum(assignment, &zs).unwrap();
                assert!(
                    best <= sum,
                    "N={n}, z={zs:?}: cyclic {best} > {sum} for {:?}",
                    assignment.types()
                );
            }
        }
    }
    report("AC3", started, 60);
}

// ---------------------------------------------------------------------------
// AC4: union-bound ordering over the 2-BEC capacity sweep
// ---------------------------------------------------------------------------

fn bec_bound(assignment: &ChannelAssignment, zs: &[f64], k: usize) -> f64 {
    let profile = bec_evolve(assignment, zs).unwrap();
    let info = select_info_set(&profile, k).unwrap();
    union_bound(&profile, &info)
}

#[test]
fn ac04_bec_sweep_ordering() {
    let started = Instant::now();
    for n in [128usize, 256, 512] {
        let k = n / 2;
        for step in 0..=6i32 {
            // Average erasure 0.3, i.e. average capacity 0.7; exact hundredths.
            let zs = [(30 - 5 * step) as f64 / 100.0, (30 + 5 * step) as f64 / 100.0];
            let b2 = bec_bound(&interleaver2(n, 2).unwrap(), &zs, k);
            let b1 = bec_bound(&interleaver1(n, 2).unwrap(), &zs, k);
            assert!(b2 <= b1, "N={n}, z={zs:?}: {b2} > interleaver1 {b1}");
            for seed in 0..100 {
                let br = bec_bound(&random_interleaver(n, 2, seed).unwrap(), &zs, k);
                assert!(b2 <= br, "N={n}, z={zs:?}, seed {seed}: {b2} > {br}");
            }
        }
    }
    report("AC4", started, 300);
}

// ---------------------------------------------------------------------------
// AC5: Table-instance GA ordering
// ---------------------------------------------------------------------------

#[test]
fn ac05_table1_ga_ordering() {
    let started = Instant::now();
    let n = 256;
    let k = n / 2;
    let ga_bound = |assignment: &ChannelAssignment, caps: &[f64]| {
        let means: Vec<f64> = caps
            .iter()
            .map(|&c| polar_cm::construction::mean_for_capacity(c))
            .collect();
        let profile = ga_evolve(assignment, &means).unwrap();
        let info = select_info_set(&profile, k).unwrap();
        union_bound(&profile, &info)
    };
    let mut i2_beats_i1 = 0;
    let mut i2_beats_random = 0;
    for caps in polar_cm::construction::table1_instances() {
        let b2 = ga_bound(&interleaver2(n, 4).unwrap(), caps);
        let b1 = ga_bound(&interleaver1(n, 4).unwrap(), caps);
        if b2 <= b1 {
            i2_beats_i1 += 1;
        }
        let min_random = (0..100)
            .map(|seed| ga_bound(&random_interleaver(n, 4, seed).unwrap(), caps))
            .fold(f64::INFINITY, f64::min);
        if b2 <= min_random {
            i2_beats_random += 1;
        }
    }
    assert!(i2_beats_i1 >= 19, "interleaver-2 beat interleaver-1 in only {i2_beats_i1}/20");
    assert!(
        i2_beats_random >= 18,
        "interleaver-2 beat min-of-100-random in only {i2_beats_random}/20"
    );
    println!("AC5 detail: <=interleaver1 {i2_beats_i1}/20, <=min random {i2_beats_random}/20");
    report("AC5", started, 600);
}

// ---------------------------------------------------------------------------
// AC6: chain-rule identity
// ---------------------------------------------------------------------------

#[test]
fn ac06_chain_rule_identity() {
    let started = Instant::now();
    let sigmas: Vec<f64> = (0..10).map(|i| 0.15 * 1.45f64.powi(i)).collect();
    for m in [2usize, 4] {
        for labeling in [Labeling::SetPartition, Labeling::Gray] {
            let c = Constellation::new(m, labeling).unwrap();
            for &sigma in &sigmas {
                let total = constellation_capacity(&c, sigma);
                let sum: f64 = (0..m)
                    .map(|j| bit_level_capacity(&c, sigma, j, Principle::Mlc))
                    .sum();
                assert!(
                    (total - sum).abs() < 1e-6,
                    "m={m} {labeling:?} sigma={sigma}: |{total} - {sum}|"
                );
            }
        }
    }
    report("AC6", started, 60);
}

// ---------------------------------------------------------------------------
// AC7: structural suite for the staggered mapping
// ---------------------------------------------------------------------------

#[test]
fn ac07_mapping_structural_suite() {
    let started = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(107);
    for m in [2usize, 4] {
        for n in [8usize, 16, 32] {
            for l_count in [1usize, 3, 10] {
                let codewords: Vec<Vec<Bit>> = (0..l_count)
                    .map(|_| (0..n).map(|_| rng.gen_range(0..2)).collect())
                    .collect();
                let frame = cpcm_map(&codewords, m, &mut rng).unwrap();
                // Tuple-count formula.
                assert_eq!(frame.tuple_count(), (l_count + m - 1) * n / m);
                assert_eq!(frame.tuple_count(), tuple_count(l_count, n, m));
                let block_size = n / m;
                for (l, codeword) in codewords.iter().enumerate() {
                    // Exact round trip.
                    assert_eq!(&extract_codeword(&frame, l), codeword);
                    let cells = cpcm_unmap(&frame, l);
                    // One bit per symbol.
                    let mut tuples_seen = std::collections::HashSet::new();
                    for &(t, _) in &cells {
                        assert!(tuples_seen.insert(t));
                        // Block locality: blocks l..l+m-1.
                        let block = t / block_size;
                        assert!(block >= l && block < l + m);
                    }
                    // Cell formulas agree with provenance.
                    for (i, &(t, j)) in cells.iter().enumerate() {
                        assert_eq!((t, j), cell_of_bit(l, i, n, m));
                    }
                }
            }
        }
    }
    report("AC7", started, 60);
}

// ---------------------------------------------------------------------------
// AC8: rate formula and rate-loss claims, exact arithmetic
// ---------------------------------------------------------------------------

#[test]
fn ac08_rate_and_rate_loss() {
    let started = Instant::now();
    assert_eq!(rate_cm(2, 1, 2, 3), 0.75);
    assert_eq!(rate_cm(4, 7, 8, 100), 350.0 / 103.0);
    // Loss versus m*R is 1 - L/(L+m-1) = (m-1)/(L+m-1).
    assert_eq!(rate_loss(2, 10), 1.0 / 11.0);
    assert!((rate_loss(2, 10) - 0.0909).abs() < 1e-3, "around 9% at L=10");
    assert_eq!(rate_loss(2, 100), 1.0 / 101.0);
    assert!(rate_loss(2, 100) < 0.01, "below 1% at L=100");
    assert_eq!(rate_loss(4, 100), 3.0 / 103.0);
    assert!(rate_loss(4, 100) < 0.03, "below 3% for 16-PAM at L=100");
    // Consistency with the exact ratio L*K/T.
    for (m, num, den, l) in [(2usize, 1u64, 2u64, 10u64), (4, 3, 4, 30)] {
        let n = 64u64;
        let k = n * num / den;
        let t = (l + m as u64 - 1) * n / m as u64;
        assert_eq!(rate_cm(m, num, den, l), (l * k) as f64 / t as f64);
    }
    report("AC8", started, 60);
}

// ---------------------------------------------------------------------------
// AC9: CPCM end to end at desk scale
// ---------------------------------------------------------------------------

#[test]
fn ac09_cpcm_end_to_end() {
    let started = Instant::now();
    let cfg = SimConfig {
        scheme: Scheme::Cpcm,
        m: 2,
        n: 256,
        l: 10,
        rate_set: vec![(1, 2)],
        ebn0_grid_db: vec![4.5, 5.25, 6.0],
        bler_target: 1e-2,
        max_frames: 30_000,
        max_errors: 120,
        seed: 23,
        labeling: Labeling::SetPartition,
        detector: DetectorKind::Genie,
    };
    cfg.validate().unwrap();
    let r_cm = rate_cm(2, 1, 2, 10);
    let mut blers = Vec::new();
    for &ebn0 in &cfg.ebn0_grid_db {
        let row = run_bler(&cfg, (1, 2), ebn0).unwrap();
        assert!(row.errors >= 100, "{} error events at {ebn0} dB", row.errors);
        blers.push(row.bler);
    }
    assert!(
        blers[0] > blers[1] && blers[1] > blers[2],
        "BLER not strictly decreasing: {blers:?}"
    );
    // GA union bound near 1e-2 at the middle point; Monte Carlo within 10x.
    let sigma = sigma_for_ebn0_db(5.25, r_cm);
    let bound = cpcm_surrogate_bound(2, 256, 128, sigma, Labeling::SetPartition).unwrap();
    assert!(
        (5e-3..2e-2).contains(&bound),
        "operating point drifted: bound {bound}"
    );
    let ratio = blers[1] / bound;
    assert!(
        (0.1..10.0).contains(&ratio),
        "Monte Carlo {} vs bound {bound}: ratio {ratio}",
        blers[1]
    );
    println!("AC9 detail: blers {blers:?}, bound {bound:.3e}, ratio {ratio:.2}");
    // Noiseless frame decodes every codeword.
    let noiseless = run_noiseless_cpcm_frame();
    assert!(noiseless.all_ok());
    report("AC9", started, 900);
}

fn build_cpcm_code(m: usize, n: usize, k: usize, sigma: f64) -> PolarCode {
    let constellation = Constellation::new(m, Labeling::SetPartition).unwrap();
    let means =
        polar_cm::construction::surrogate_level_means(&constellation, sigma, Principle::Mlc);
    let profile = ga_evolve(&interleaver2(n, m).unwrap(), &means).unwrap();
    let info = select_info_set(&profile, k).unwrap();
    PolarCode::new(info.frozen_mask(n), vec![0; n]).unwrap()
}

fn run_noiseless_cpcm_frame() -> CpcmDecodeOutcome {
    let (m, n, l_count) = (2usize, 256usize, 10usize);
    let sigma = 1e-6;
    let constellation = Constellation::new(m, Labeling::SetPartition).unwrap();
    let code = build_cpcm_code(m, n, 128, 0.55);
    let mut rng = ChaCha12Rng::seed_from_u64(109);
    let codewords: Vec<Vec<Bit>> = (0..l_count)
        .map(|_| {
            let info: Vec<Bit> = (0..code.k()).map(|_| rng.gen_range(0..2)).collect();
            polar_encode(&code, &info).unwrap()
        })
        .collect();
    let frame = cpcm_map(&codewords, m, &mut rng).unwrap();
    let mut block = SymbolBlock::modulate(&constellation, frame.tuples().to_vec()).unwrap();
    block.transmit(sigma, &mut rng);
    let mut detector = GenieDetector::new(&codewords);
    cpcm_decode(
        &frame.receiver_context(),
        &block.received,
        &code,
        &constellation,
        sigma,
        &mut detector,
        CombineRule::Exact,
    )
    .unwrap()
}

// ---------------------------------------------------------------------------
// AC10: bidirectional-decoder state machine under fault injection
// ---------------------------------------------------------------------------

/// Forces failure verdicts on every attempt of the selected codewords.
struct AlwaysFail<D> {
    inner: D,
    targets: Vec<usize>,
}

impl<D: ErrorDetector> ErrorDetector for AlwaysFail<D> {
    fn codeword_ok(
        &mut self,
        codeword: usize,
        attempt: usize,
        code: &PolarCode,
        result: &DecodeResult,
    ) -> bool {
        if self.targets.contains(&codeword) {
            return false;
        }
        self.inner.codeword_ok(codeword, attempt, code, result)
    }
}

#[test]
fn ac10_bidirectional_fault_injection() {
    let started = Instant::now();
    let (m, n, l_count) = (2usize, 32usize, 5usize);
    let sigma = 1e-6;
    let constellation = Constellation::new(m, Labeling::SetPartition).unwrap();
    let code = build_cpcm_code(m, n, 16, 0.5);
    let mut rng = ChaCha12Rng::seed_from_u64(110);
    let codewords: Vec<Vec<Bit>> = (0..l_count)
        .map(|_| {
            let info: Vec<Bit> = (0..code.k()).map(|_| rng.gen_range(0..2)).collect();
            polar_encode(&code, &info).unwrap()
        })
        .collect();
    let frame = cpcm_map(&codewords, m, &mut rng).unwrap();
    let mut block = SymbolBlock::modulate(&constellation, frame.tuples().to_vec()).unwrap();
    block.transmit(sigma, &mut rng);
    let received = block.received.clone();
    let ctx = frame.receiver_context();

    // Single first-attempt failure at each codeword: forward stops there, the
    // backward pass supplies the upgraded context, the retry succeeds, and
    // idx_backward never fires.
    for target in 0..l_count {
        let mut detector = ScriptedDetector::new(GenieDetector::new(&codewords), vec![target]);
        let outcome = cpcm_decode(
            &ctx,
            &received,
            &code,
            &constellation,
            sigma,
            &mut detector,
            CombineRule::Exact,
        )
        .unwrap();
        assert_eq!(outcome.idx_forward, Some(target));
        assert_eq!(outcome.idx_backward, None);
        assert!(outcome.all_ok());
        for l in 0..l_count {
            let expected = if l == target { 2 } else { 1 };
            assert_eq!(outcome.attempts[l], expected, "target {target}, codeword {l}");
        }
    }

    // Two first-attempt failures: the backward pass trips on the second
    // target, setting idx_backward, and the middle pass recovers the span.
    {
        let mut detector = ScriptedDetector::new(GenieDetector::new(&codewords), vec![1, 3]);
        let outcome = cpcm_decode(
            &ctx,
            &received,
            &code,
            &constellation,
            sigma,
            &mut detector,
            CombineRule::Exact,
        )
        .unwrap();
        assert_eq!(outcome.idx_forward, Some(1));
        assert_eq!(outcome.idx_backward, Some(3));
        assert!(outcome.all_ok());
        assert_eq!(outcome.attempts, vec![1, 2, 1, 2, 1]);
    }

    // A codeword that never verifies: forward and backward both stop on it
    // and the third (middle) attempt fails for good; everyone else decodes
    // exactly once.
    {
        let mut detector = AlwaysFail {
            inner: GenieDetector::new(&codewords),
            targets: vec![2],
        };
        let outcome = cpcm_decode(
            &ctx,
            &received,
            &code,
            &constellation,
            sigma,
            &mut detector,
            CombineRule::Exact,
        )
        .unwrap();
        assert_eq!(outcome.idx_forward, Some(2));
        assert_eq!(outcome.idx_backward, Some(2));
        assert_eq!(outcome.failed_count(), 1);
        assert_eq!(outcome.attempts, vec![1, 1, 3, 1, 1]);
        assert_eq!(
            outcome.status[2],
            polar_cm::cpcm::CodewordStatus::Failed
        );
    }
    report("AC10", started, 60);
}

// ---------------------------------------------------------------------------
// AC11: comparative reproduction at desk scale
// ---------------------------------------------------------------------------

/// Smallest grid point whose estimated BLER meets the target.
fn required_ebn0(cfg: &SimConfig, grid: &[f64]) -> Option<f64> {
    for &ebn0 in grid {
        let row = run_bler(cfg, cfg.rate_set[0], ebn0).unwrap();
        if row.bler <= cfg.bler_target {
            return Some(ebn0);
        }
    }
    None
}

#[test]
fn ac11_comparative_desk_scale() {
    let started = Instant::now();
    let base = |scheme: Scheme, m: usize, labeling: Labeling, max_frames: u64| SimConfig {
        scheme,
        m,
        n: 128,
        l: 100,
        rate_set: vec![(1, 2)],
        ebn0_grid_db: vec![],
        bler_target: 1e-2,
        max_frames,
        max_errors: 100,
        seed: 17,
        labeling,
        detector: DetectorKind::Genie,
    };
    // 4-PAM: CPCM vs MLC on a 0.5 dB grid.
    let grid4: Vec<f64> = vec![4.5, 5.0, 5.5, 6.0, 6.5];
    let cpcm4 = required_ebn0(&base(Scheme::Cpcm, 2, Labeling::SetPartition, 2_000), &grid4)
        .expect("CPCM 4-PAM never met the target");
    let mlc4 = required_ebn0(&base(Scheme::Mlc, 2, Labeling::SetPartition, 20_000), &grid4)
        .expect("MLC 4-PAM never met the target");
    assert!(
        cpcm4 <= mlc4,
        "CPCM needs {cpcm4} dB > MLC {mlc4} dB for 4-PAM"
    );
    // 16-PAM: CPCM vs BICM on a shared grid; the gain must be strict.
    let grid16: Vec<f64> = vec![9.5, 10.0, 10.5, 11.0, 11.5, 12.0, 12.5, 13.0];
    let cpcm16 = required_ebn0(&base(Scheme::Cpcm, 4, Labeling::SetPartition, 2_000), &grid16)
        .expect("CPCM 16-PAM never met the target");
    let bicm16 = required_ebn0(&base(Scheme::Bicm, 4, Labeling::Gray, 20_000), &grid16)
        .expect("BICM 16-PAM never met the target");
    assert!(
        cpcm16 < bicm16,
        "CPCM needs {cpcm16} dB, not strictly below BICM {bicm16} dB for 16-PAM"
    );
    println!(
        "AC11 detail: 4-PAM required Eb/N0 cpcm {cpcm4} <= mlc {mlc4}; \
         16-PAM cpcm {cpcm16} < bicm {bicm16}"
    );
    report("AC11", started, 3600);
}

// ---------------------------------------------------------------------------
// AC12: byte-identical CLI reruns
// ---------------------------------------------------------------------------

#[test]
fn ac12_cli_determinism() {
    let started = Instant::now();
    let bin = env!("CARGO_BIN_EXE_polar-cm");
    let dir = std::env::temp_dir().join("polar-cm-ac12");
    std::fs::create_dir_all(&dir).unwrap();
    let run = |out: &std::path::Path, args: &[&str]| {
        let status = std::process::Command::new(bin)
            .args(args)
            .arg("--out")
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(out).unwrap()
    };
    let cases: Vec<Vec<&str>> = vec![
        vec![
            "simulate", "--scheme", "cpcm", "--m", "2", "--n", "64", "--l", "4", "--rates",
            "1/2", "--ebn0", "5:7:1", "--max-frames", "100", "--max-errors", "30", "--seed",
            "9",
        ],
        vec!["capacity", "--m", "2", "--labeling", "sp", "--grid", "0:10:2"],
        vec![
            "unionbound", "--channels", "bec", "--m", "2", "--n", "128", "--rate", "1/2",
            "--random-count", "10", "--seed", "3",
        ],
        vec![
            "construct", "--channels", "pam", "--m", "2", "--sigma", "0.6", "--n", "64", "--k",
            "32",
        ],
    ];
    for (i, args) in cases.iter().enumerate() {
        let out_a = dir.join(format!("a{i}.csv"));
        let out_b = dir.join(format!("b{i}.csv"));
        let a = run(&out_a, args);
        let b = run(&out_b, args);
        assert_eq!(a, b, "rerun of {args:?} differed");
        assert!(!a.is_empty());
    }
    report("AC12", started, 300);
}
