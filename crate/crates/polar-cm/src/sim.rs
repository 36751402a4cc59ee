//! Monte Carlo campaigns and analytical sweeps.
//!
//! Every frame draws its randomness from counter-based ChaCha streams keyed
//! by `(seed, frame_index, purpose)`, so a `(config, seed)` pair determines
//! every output row bit-for-bit regardless of thread count. Frames run in
//! parallel batches; the stopping rules (enough error events, the frame cap,
//! or a conclusively error-free point) are evaluated at batch boundaries.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{bicm_build, bicm_transmit_decode, mlc_build, mlc_transmit_decode};
use crate::channels::{Constellation, Labeling, Principle, SymbolBlock};
use crate::construction::{
    bec_evolve, ga_evolve, select_info_set, select_info_set_excluding, surrogate_level_means,
    union_bound, ReliabilityProfile,
};
use crate::cpcm::{cpcm_decode, cpcm_map, rate_cm, CrcDetector, CrcSpec, GenieDetector};
use crate::interleave::{interleaver1, interleaver2, random_interleaver, shorten};
use crate::polar::{polar_encode, Bit, CombineRule, PolarCode};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

/// Coded-modulation scheme under test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Cpcm,
    Mlc,
    Bicm,
}

/// Error-detection mode for CPCM decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetectorKind {
    Genie,
    Crc { width: usize, poly: u64 },
}

/// One Monte Carlo campaign description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimConfig {
    pub scheme: Scheme,
    pub m: usize,
    pub n: usize,
    /// Codewords per CPCM frame; ignored by MLC/BICM.
    pub l: usize,
    /// Code rates as (numerator, denominator) pairs.
    pub rate_set: Vec<(u64, u64)>,
    pub ebn0_grid_db: Vec<f64>,
    pub bler_target: f64,
    pub max_frames: u64,
    pub max_errors: u64,
    pub seed: u64,
    pub labeling: Labeling,
    pub detector: DetectorKind,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=6).contains(&self.m) {
            return Err(Error::InvalidConfig(format!("m = {} out of range", self.m)));
        }
        if !self.n.is_power_of_two() {
            return Err(Error::InvalidConfig(format!(
                "N = {} is not a power of two",
                self.n
            )));
        }
        if !self.n.is_multiple_of(self.m) {
            return Err(Error::InvalidConfig(format!(
                "m = {} does not divide N = {}",
                self.m, self.n
            )));
        }
        if self.l == 0 {
            return Err(Error::InvalidConfig("L must be at least 1".into()));
        }
        if self.rate_set.is_empty() || self.ebn0_grid_db.is_empty() {
            return Err(Error::InvalidConfig("rate set and grid must be nonempty".into()));
        }
        for &(num, den) in &self.rate_set {
            if num == 0 || num >= den {
                return Err(Error::InvalidConfig(format!(
                    "rate {num}/{den} outside (0, 1)"
                )));
            }
            if !(self.n as u64 * num).is_multiple_of(den) {
                return Err(Error::InvalidConfig(format!(
                    "rate {num}/{den} does not give an integer K for N = {}",
                    self.n
                )));
            }
        }
        if !(self.bler_target > 0.0 && self.bler_target < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "BLER target {} outside (0, 1)",
                self.bler_target
            )));
        }
        if self.max_errors < 20 {
            return Err(Error::InvalidConfig(
                "max_errors below 20 gives meaningless estimates".into(),
            ));
        }
        if let DetectorKind::Crc { width, .. } = self.detector {
            if width == 0 || width > 64 {
                return Err(Error::InvalidConfig(format!("CRC width {width} out of range")));
            }
        }
        Ok(())
    }

    /// Information bits per symbol at rate `num/den`.
    pub fn r_cm(&self, num: u64, den: u64) -> f64 {
        match self.scheme {
            Scheme::Cpcm => rate_cm(self.m, num, den, self.l as u64),
            Scheme::Mlc | Scheme::Bicm => self.m as f64 * num as f64 / den as f64,
        }
    }
}

/// Noise level for an `E_b/N_0` operating point: `sigma^2 = 1 / (2 R_cm
/// 10^(ebn0/10))` for unit-energy constellations over a real channel.
pub fn sigma_for_ebn0_db(ebn0_db: f64, r_cm: f64) -> f64 {
    (1.0 / (2.0 * r_cm * 10f64.powf(ebn0_db / 10.0))).sqrt()
}

/// Counter-based per-frame RNG stream.
fn frame_rng(seed: u64, frame: u64, purpose: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(frame * 4 + purpose);
    rng
}

/// Wilson 95% score interval for `errors` out of `trials`.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959963984540054_f64;
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // Zero-error (and all-error) points report one-sided intervals.
    let lo = if errors == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if errors == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

// ---------------------------------------------------------------------------
// BLER campaigns
// ---------------------------------------------------------------------------

/// One estimated operating point.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub scheme: Scheme,
    pub m: usize,
    pub n: usize,
    pub l: usize,
    pub ebn0_db: f64,
    pub r_num: u64,
    pub r_den: u64,
    pub r_cm: f64,
    pub bler: f64,
    pub frames: u64,
    pub trials: u64,
    pub errors: u64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
}

enum SchemeContext {
    Cpcm {
        constellation: Constellation,
        code: PolarCode,
        payload_bits: usize,
        crc: Option<CrcSpec>,
    },
    Mlc(crate::baselines::MlcScheme),
    Bicm(crate::baselines::BicmScheme),
}

/// Builds the per-operating-point construction for a scheme.
fn build_context(cfg: &SimConfig, num: u64, den: u64, sigma: f64) -> Result<SchemeContext> {
    let k = (cfg.n as u64 * num / den) as usize;
    match cfg.scheme {
        Scheme::Cpcm => {
            let constellation = Constellation::new(cfg.m, cfg.labeling)?;
            let means = surrogate_level_means(&constellation, sigma, Principle::Mlc);
            let assignment = interleaver2(cfg.n, cfg.m)?;
            let profile = ga_evolve(&assignment, &means)?;
            let info = select_info_set(&profile, k)?;
            let code = PolarCode::new(info.frozen_mask(cfg.n), vec![0; cfg.n])?;
            let (payload_bits, crc) = match cfg.detector {
                DetectorKind::Genie => (k, None),
                DetectorKind::Crc { width, poly } => {
                    if width >= k {
                        return Err(Error::InvalidConfig(format!(
                            "CRC width {width} leaves no payload in K = {k}"
                        )));
                    }
                    (k - width, Some(CrcSpec { width, poly }))
                }
            };
            Ok(SchemeContext::Cpcm {
                constellation,
                code,
                payload_bits,
                crc,
            })
        }
        Scheme::Mlc => {
            let constellation = Constellation::new(cfg.m, cfg.labeling)?;
            Ok(SchemeContext::Mlc(mlc_build(
                &constellation,
                sigma,
                cfg.n,
                k,
            )?))
        }
        Scheme::Bicm => {
            let constellation = Constellation::new(cfg.m, cfg.labeling)?;
            Ok(SchemeContext::Bicm(bicm_build(
                &constellation,
                sigma,
                cfg.n,
                k,
            )?))
        }
    }
}

/// Runs one frame; returns (codeword trials, codeword errors).
fn run_frame(
    ctx: &SchemeContext,
    cfg: &SimConfig,
    sigma: f64,
    frame: u64,
) -> Result<(u64, u64)> {
    match ctx {
        SchemeContext::Cpcm {
            constellation,
            code,
            payload_bits,
            crc,
        } => {
            let mut data_rng = frame_rng(cfg.seed, frame, 0);
            let mut fill_rng = frame_rng(cfg.seed, frame, 1);
            let mut noise_rng = frame_rng(cfg.seed, frame, 2);
            let codewords: Vec<Vec<Bit>> = (0..cfg.l)
                .map(|_| {
                    let payload: Vec<Bit> =
                        (0..*payload_bits).map(|_| data_rng.gen_range(0..2)).collect();
                    let info = match crc {
                        Some(spec) => spec.attach(&payload),
                        None => payload,
                    };
                    polar_encode(code, &info)
                })
                .collect::<Result<Vec<_>>>()?;
            let frame_map = cpcm_map(&codewords, cfg.m, &mut fill_rng)?;
            let mut block = SymbolBlock::modulate(constellation, frame_map.tuples().to_vec())?;
            block.transmit(sigma, &mut noise_rng);
            let ctx_rx = frame_map.receiver_context();
            let outcome = match crc {
                Some(spec) => {
                    let mut detector = CrcDetector { spec: *spec };
                    cpcm_decode(
                        &ctx_rx,
                        &block.received,
                        code,
                        constellation,
                        sigma,
                        &mut detector,
                        CombineRule::Exact,
                    )?
                }
                None => {
                    let mut detector = GenieDetector::new(&codewords);
                    cpcm_decode(
                        &ctx_rx,
                        &block.received,
                        code,
                        constellation,
                        sigma,
                        &mut detector,
                        CombineRule::Exact,
                    )?
                }
            };
            // Decoding attempts stay within the two boundary re-decodes.
            debug_assert!(outcome.total_attempts() <= cfg.l + 2);
            Ok((cfg.l as u64, outcome.failed_count() as u64))
        }
        SchemeContext::Mlc(scheme) => {
            let mut data_rng = frame_rng(cfg.seed, frame, 0);
            let mut noise_rng = frame_rng(cfg.seed, frame, 2);
            let data: Vec<Bit> = (0..scheme.total_k())
                .map(|_| data_rng.gen_range(0..2))
                .collect();
            let res = mlc_transmit_decode(scheme, &data, sigma, &mut noise_rng)?;
            Ok((1, res.block_error as u64))
        }
        SchemeContext::Bicm(scheme) => {
            let mut data_rng = frame_rng(cfg.seed, frame, 0);
            let mut noise_rng = frame_rng(cfg.seed, frame, 2);
            let data: Vec<Bit> = (0..scheme.code.k())
                .map(|_| data_rng.gen_range(0..2))
                .collect();
            let err = bicm_transmit_decode(scheme, &data, sigma, &mut noise_rng)?;
            Ok((1, err as u64))
        }
    }
}

const FRAME_BATCH: u64 = 32;

/// Estimates BLER at one `(rate, E_b/N_0)` operating point. The construction
/// is rebuilt at this point; frames are simulated until `max_errors` error
/// events or `max_frames` frames.
pub fn run_bler(cfg: &SimConfig, rate: (u64, u64), ebn0_db: f64) -> Result<SweepRow> {
    let (num, den) = rate;
    let r_cm = cfg.r_cm(num, den);
    let sigma = sigma_for_ebn0_db(ebn0_db, r_cm);
    let ctx = build_context(cfg, num, den, sigma)?;
    let mut frames = 0u64;
    let mut trials = 0u64;
    let mut errors = 0u64;
    // Error-free points stop once the rule-of-three upper bound drops a
    // decade below the target; the point is then conclusively met.
    let conclusive_trials = (300.0 / cfg.bler_target).ceil() as u64;
    while frames < cfg.max_frames && errors < cfg.max_errors {
        if errors == 0 && trials >= conclusive_trials {
            break;
        }
        let batch_end = (frames + FRAME_BATCH).min(cfg.max_frames);
        let batch: Vec<(u64, u64)> = (frames..batch_end)
            .into_par_iter()
            .map(|f| run_frame(&ctx, cfg, sigma, f))
            .collect::<Result<Vec<_>>>()?;
        for (t, e) in batch {
            trials += t;
            errors += e;
        }
        frames = batch_end;
    }
    let bler = if trials > 0 {
        errors as f64 / trials as f64
    } else {
        0.0
    };
    let (wilson_lo, wilson_hi) = wilson_interval(errors, trials);
    Ok(SweepRow {
        scheme: cfg.scheme,
        m: cfg.m,
        n: cfg.n,
        l: cfg.l,
        ebn0_db,
        r_num: num,
        r_den: den,
        r_cm,
        bler,
        frames,
        trials,
        errors,
        wilson_lo,
        wilson_hi,
    })
}

/// GA union-bound prediction for the CPCM construction at one operating
/// point (the per-codeword BLER estimate the construction itself implies).
pub fn cpcm_surrogate_bound(
    m: usize,
    n: usize,
    k: usize,
    sigma: f64,
    labeling: Labeling,
) -> Result<f64> {
    let constellation = Constellation::new(m, labeling)?;
    let means = surrogate_level_means(&constellation, sigma, Principle::Mlc);
    let assignment = interleaver2(n, m)?;
    let profile = ga_evolve(&assignment, &means)?;
    let info = select_info_set(&profile, k)?;
    Ok(union_bound(&profile, &info))
}

// ---------------------------------------------------------------------------
// Spectral-efficiency sweep
// ---------------------------------------------------------------------------

/// One achievable-rate marker.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralEfficiencyRow {
    pub scheme: Scheme,
    pub ebn0_db: f64,
    /// Largest rate meeting the target, if any.
    pub rate: Option<(u64, u64)>,
    pub r_cm: Option<f64>,
    pub bler: Option<f64>,
}

/// For each grid point, the largest rate in the set whose estimated BLER
/// meets the target.
pub fn spectral_efficiency_sweep(cfg: &SimConfig) -> Result<Vec<SpectralEfficiencyRow>> {
    let mut rates = cfg.rate_set.clone();
    rates.sort_by(|a, b| {
        let (fa, fb) = (a.0 as f64 / a.1 as f64, b.0 as f64 / b.1 as f64);
        fb.partial_cmp(&fa).unwrap()
    });
    let mut rows = Vec::new();
    for &ebn0 in &cfg.ebn0_grid_db {
        let mut chosen = None;
        for &(num, den) in &rates {
            let row = run_bler(cfg, (num, den), ebn0)?;
            if row.bler <= cfg.bler_target {
                chosen = Some(((num, den), row.r_cm, row.bler));
                break;
            }
        }
        rows.push(match chosen {
            Some((rate, r_cm, bler)) => SpectralEfficiencyRow {
                scheme: cfg.scheme,
                ebn0_db: ebn0,
                rate: Some(rate),
                r_cm: Some(r_cm),
                bler: Some(bler),
            },
            None => SpectralEfficiencyRow {
                scheme: cfg.scheme,
                ebn0_db: ebn0,
                rate: None,
                r_cm: None,
                bler: None,
            },
        });
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Union-bound sweeps
// ---------------------------------------------------------------------------

/// Channel family for union-bound sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundChannels {
    Bec,
    Awgn,
}

/// One bound evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct BoundRow {
    pub instance: usize,
    pub kind: String,
    pub seed: Option<u64>,
    pub n: usize,
    pub n_short: usize,
    pub k: usize,
    pub bound: f64,
}

fn profile_for(
    channels: BoundChannels,
    capacities: &[f64],
    assignment: &crate::interleave::ChannelAssignment,
) -> Result<ReliabilityProfile> {
    match channels {
        BoundChannels::Bec => {
            let zs: Vec<f64> = capacities.iter().map(|c| 1.0 - c).collect();
            bec_evolve(assignment, &zs)
        }
        BoundChannels::Awgn => {
            let means: Vec<f64> = capacities
                .iter()
                .map(|&c| crate::construction::mean_for_capacity(c))
                .collect();
            ga_evolve(assignment, &means)
        }
    }
}

/// Union bound for one heterogeneous instance and assignment layout over the
/// live positions. Shortened tail positions become an extra perfect-channel
/// type and are excluded from the information set.
fn bound_for_types(
    channels: BoundChannels,
    capacities: &[f64],
    types_live: &[usize],
    n: usize,
    k: usize,
) -> Result<f64> {
    let plan = shorten(n, capacities.len());
    let mut values: Vec<f64> = capacities.to_vec();
    let mut types: Vec<usize> = types_live.to_vec();
    if types.len() < n {
        // Shortened positions are known at the decoder: a perfect channel.
        values.push(1.0);
        types.extend(std::iter::repeat_n(values.len(), n - types.len()));
    }
    let assignment = crate::interleave::ChannelAssignment::from_types(types, values.len())?;
    let profile = profile_for(channels, &values, &assignment)?;
    let excluded = plan.forced_frozen_positions();
    let info = select_info_set_excluding(&profile, k, &excluded)?;
    Ok(union_bound(&profile, &info))
}

/// Evaluates interleaver-1, interleaver-2 and `n_random` seeded random
/// assignments for each capacity instance. Block lengths not divisible by
/// the type count are shortened to `N_s = m floor(N/m)` with `K = R N_s`.
pub fn union_bound_sweep(
    channels: BoundChannels,
    instances: &[Vec<f64>],
    n: usize,
    rate: (u64, u64),
    n_random: usize,
    base_seed: u64,
) -> Result<Vec<BoundRow>> {
    let mut rows = Vec::new();
    for (idx, caps) in instances.iter().enumerate() {
        let m = caps.len();
        for &c in caps {
            if !(0.0..=1.0).contains(&c) {
                return Err(Error::InvalidInput(format!("capacity {c} outside [0, 1]")));
            }
        }
        let plan = shorten(n, m);
        let n_live = plan.n_short;
        let k = (n_live as u64 * rate.0 / rate.1) as usize;
        let mut push = |kind: &str, seed: Option<u64>, types_live: &[usize]| -> Result<()> {
            let bound = bound_for_types(channels, caps, types_live, n, k)?;
            rows.push(BoundRow {
                instance: idx + 1,
                kind: kind.to_string(),
                seed,
                n,
                n_short: n_live,
                k,
                bound,
            });
            Ok(())
        };
        push("interleaver1", None, interleaver1(n_live, m)?.types())?;
        push("interleaver2", None, interleaver2(n_live, m)?.types())?;
        for r in 0..n_random {
            let seed = base_seed + r as u64;
            push("random", Some(seed), random_interleaver(n_live, m, seed)?.types())?;
        }
    }
    Ok(rows)
}

fn round10(x: f64) -> f64 {
    (x * 1e10).round() / 1e10
}

/// Capacity instances for the 2-BEC sweep: pairs `(c - d, c + d)` of fixed
/// average capacity, swept over the imbalance `d`.
pub fn bec_pair_instances(avg_capacity: f64, step: f64) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut i = 0u32;
    loop {
        let d = i as f64 * step;
        if avg_capacity - d < -1e-12 || avg_capacity + d > 1.0 + 1e-12 {
            break;
        }
        let lo = round10((avg_capacity - d).clamp(0.0, 1.0));
        let hi = round10((avg_capacity + d).clamp(0.0, 1.0));
        out.push(vec![lo, hi]);
        i += 1;
    }
    out
}

/// Capacity instances for the 3-channel sweep on a grid with the given step:
/// all `(c1, c2)` with `c3 = 3 avg - c1 - c2` inside `[0, 1]`.
pub fn awgn_triple_instances(avg_capacity: f64, step: f64) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let steps = (1.0 / step).round() as usize;
    for i in 0..=steps {
        for j in 0..=steps {
            let c1 = round10(i as f64 * step);
            let c2 = round10(j as f64 * step);
            let c3 = round10(3.0 * avg_capacity - c1 - c2);
            if (0.0..=1.0).contains(&c3) {
                out.push(vec![c1, c2, c3]);
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Shannon bound
// ---------------------------------------------------------------------------

/// Minimum `E_b/N_0` (dB) supporting rate `r_cm` over the real AWGN channel:
/// solves `R = (1/2) log2(1 + 2 R Eb/N0)`.
pub fn shannon_bound_ebn0_db(r_cm: f64) -> f64 {
    assert!(r_cm > 0.0);
    let ebn0 = (2f64.powf(2.0 * r_cm) - 1.0) / (2.0 * r_cm);
    10.0 * ebn0.log10()
}

/// The (rate, minimum Eb/N0) curve over a rate grid.
pub fn shannon_bound(r_cm_grid: &[f64]) -> Vec<(f64, f64)> {
    r_cm_grid
        .iter()
        .map(|&r| (r, shannon_bound_ebn0_db(r)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desk_config(scheme: Scheme) -> SimConfig {
        SimConfig {
            scheme,
            m: 2,
            n: 64,
            l: 4,
            rate_set: vec![(1, 2)],
            ebn0_grid_db: vec![6.0],
            bler_target: 1e-2,
            max_frames: 200,
            max_errors: 50,
            seed: 7,
            labeling: Labeling::SetPartition,
            detector: DetectorKind::Genie,
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = desk_config(Scheme::Cpcm);
        assert!(cfg.validate().is_ok());
        cfg.rate_set = vec![(3, 2)];
        assert!(cfg.validate().is_err());
        cfg.rate_set = vec![(1, 2)];
        cfg.max_errors = 5;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn saturated_point_has_zero_errors() {
        let mut cfg = desk_config(Scheme::Cpcm);
        cfg.max_frames = 100;
        let row = run_bler(&cfg, (1, 2), 30.0).unwrap();
        assert_eq!(row.errors, 0);
        assert_eq!(row.bler, 0.0);
        assert!(row.wilson_hi > 0.0, "one-sided interval for zero errors");
    }

    #[test]
    fn identical_seed_identical_row() {
        let cfg = desk_config(Scheme::Cpcm);
        let a = run_bler(&cfg, (1, 2), 5.0).unwrap();
        let b = run_bler(&cfg, (1, 2), 5.0).unwrap();
        assert_eq!(a.errors, b.errors);
        assert_eq!(a.trials, b.trials);
        assert_eq!(a.bler, b.bler);
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let cfg = desk_config(Scheme::Mlc);
        let pool1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let pool4 = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = pool1.install(|| run_bler(&cfg, (1, 2), 5.0)).unwrap();
        let b = pool4.install(|| run_bler(&cfg, (1, 2), 5.0)).unwrap();
        assert_eq!(a.errors, b.errors);
        assert_eq!(a.trials, b.trials);
    }

    #[test]
    fn cpcm_error_accounting_is_per_codeword() {
        let cfg = desk_config(Scheme::Cpcm);
        let row = run_bler(&cfg, (1, 2), 2.0).unwrap();
        assert_eq!(row.trials, row.frames * cfg.l as u64);
        assert!(row.errors > 0, "operating point should produce errors");
        assert!((row.bler - row.errors as f64 / row.trials as f64).abs() < 1e-15);
    }

    #[test]
    fn wilson_basics() {
        let (lo, hi) = wilson_interval(0, 100);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.06);
        let (lo, hi) = wilson_interval(50, 100);
        assert!(lo < 0.5 && hi > 0.5);
    }

    #[test]
    fn shannon_bound_values() {
        // R_cm = 1 needs (2^2 - 1)/2, i.e. 1.761 dB.
        assert!((shannon_bound_ebn0_db(1.0) - 10.0 * 1.5f64.log10()).abs() < 1e-12);
        // Low-rate limit approaches ln 2 = -1.59 dB.
        let low = shannon_bound_ebn0_db(1e-6);
        assert!((low - 10.0 * std::f64::consts::LN_2.log10()).abs() < 1e-3);
        // Monotone increasing.
        let grid: Vec<f64> = (1..40).map(|i| i as f64 * 0.1).collect();
        let curve = shannon_bound(&grid);
        for w in curve.windows(2) {
            assert!(w[1].1 > w[0].1);
        }
    }

    #[test]
    fn union_bound_sweep_identical_channels_degenerate() {
        // With identical BECs every balanced assignment gives the same bound.
        let rows = union_bound_sweep(
            BoundChannels::Bec,
            &[vec![0.7, 0.7]],
            64,
            (1, 2),
            5,
            1000,
        )
        .unwrap();
        let first = rows[0].bound;
        for row in &rows {
            assert!((row.bound - first).abs() < 1e-12, "{row:?}");
        }
    }

    #[test]
    fn union_bound_sweep_with_shortening() {
        // m = 3 does not divide N = 128; the sweep shortens to 126.
        let rows = union_bound_sweep(
            BoundChannels::Bec,
            &[vec![0.6, 0.7, 0.8]],
            128,
            (1, 2),
            2,
            5,
        )
        .unwrap();
        for row in &rows {
            assert_eq!(row.n_short, 126);
            assert_eq!(row.k, 63);
            assert!(row.bound.is_finite());
        }
    }

    #[test]
    fn bec_pair_grid() {
        let grid = bec_pair_instances(0.7, 0.05);
        assert_eq!(grid[0], vec![0.7, 0.7]);
        // Last pair pins the high side at capacity 1.
        let last = grid.last().unwrap();
        assert!((last[1] - 1.0).abs() < 1e-9);
        for pair in &grid {
            assert!((pair[0] + pair[1] - 1.4).abs() < 1e-9);
        }
    }

    #[test]
    fn crc_detector_mode_runs() {
        let mut cfg = desk_config(Scheme::Cpcm);
        cfg.detector = DetectorKind::Crc {
            width: 8,
            poly: 0x07,
        };
        cfg.max_frames = 20;
        let row = run_bler(&cfg, (1, 2), 8.0).unwrap();
        assert_eq!(row.trials, row.frames * cfg.l as u64);
    }

    #[test]
    fn spectral_sweep_monotone() {
        let mut cfg = desk_config(Scheme::Bicm);
        cfg.rate_set = vec![(1, 4), (1, 2), (3, 4)];
        cfg.ebn0_grid_db = vec![2.0, 6.0, 10.0];
        cfg.max_frames = 150;
        cfg.max_errors = 30;
        let rows = spectral_efficiency_sweep(&cfg).unwrap();
        let mut last = -1.0;
        for row in rows {
            if let Some(r) = row.r_cm {
                assert!(r >= last, "selected rate decreased with SNR");
                last = r;
            }
        }
    }
}
