//! Code construction over heterogeneous channels.
//!
//! Reliability of every synthesized bit channel is tracked through the
//! polarization recursion whose first stage pairs adjacent channel uses.
//! Two engines are provided:
//!
//! - exact Bhattacharyya evolution for BECs, with the heterogeneous kernel
//!   `Z- = z_a + z_b - z_a z_b`, `Z+ = z_a z_b`;
//! - Gaussian-approximation density evolution for bi-AWGN inputs, tracking
//!   LLR means with `m+ = m_a + m_b` at variable nodes and
//!   `m- = phi^-1(phi(m_a) + phi(m_b) - phi(m_a) phi(m_b))` at check nodes.
//!
//! Profiles are indexed in the synthesized-channel (SC decoding order)
//! domain, the same domain as [`crate::polar::PolarCode`] frozen masks.

use serde::{Deserialize, Serialize};

use crate::channels::{
    bit_level_capacity, biawgn_sigma_for_capacity, ChannelSpec, Constellation, Principle,
};
use crate::interleave::ChannelAssignment;
use crate::{Error, Result};

/// LLR mean treated as a perfect channel when inverting capacities.
pub const MEAN_SENTINEL: f64 = 1e4;

/// Upper bound returned by `phi_inv` when its argument underflows.
const GA_MEAN_MAX: f64 = 2000.0;

/// What the per-position values of a profile measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Metric {
    /// Bhattacharyya parameter / BEC erasure probability, in [0, 1].
    BhattacharyyaZ,
    /// Gaussian-approximated LLR mean, nonnegative.
    LlrMean,
    /// Per-position error probability, in [0, 0.5].
    ErrorProb,
}

/// Per-position reliability of the N synthesized channels.
#[derive(Debug, Clone)]
pub struct ReliabilityProfile {
    pub per_position: Vec<f64>,
    pub metric: Metric,
    pub source_assignment: ChannelAssignment,
    /// Per-type leaf values (erasure probabilities or LLR means).
    pub source_values: Vec<f64>,
}

impl ReliabilityProfile {
    pub fn n(&self) -> usize {
        self.per_position.len()
    }

    /// Per-position error metric: Z as-is, P_e as-is, LLR means mapped
    /// through the Gaussian tail.
    pub fn error_metric(&self, position: usize) -> f64 {
        match self.metric {
            Metric::BhattacharyyaZ | Metric::ErrorProb => self.per_position[position],
            Metric::LlrMean => error_prob_from_mean(self.per_position[position]),
        }
    }
}

/// Sorted set of information positions (synthesized domain).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfoSet {
    pub indices: Vec<usize>,
}

impl InfoSet {
    pub fn k(&self) -> usize {
        self.indices.len()
    }

    /// Frozen mask with `false` at the information positions.
    pub fn frozen_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![true; n];
        for &i in &self.indices {
            mask[i] = false;
        }
        mask
    }
}

// ---------------------------------------------------------------------------
// Polarization evolution
// ---------------------------------------------------------------------------

/// Evolves leaf values through the polarization stages. Stage 1 combines
/// adjacent leaves; the minus outputs fill the first half of each group and
/// the plus outputs the second half, yielding decoding-order positions.
fn evolve<Fm, Fp>(leaves: Vec<f64>, minus: Fm, plus: Fp) -> Vec<f64>
where
    Fm: Fn(f64, f64) -> f64,
    Fp: Fn(f64, f64) -> f64,
{
    let n = leaves.len();
    debug_assert!(n.is_power_of_two());
    let mut v = leaves;
    let mut group = n;
    let mut scratch = vec![0.0; n];
    while group > 1 {
        let half = group / 2;
        for start in (0..n).step_by(group) {
            for t in 0..half {
                let a = v[start + 2 * t];
                let b = v[start + 2 * t + 1];
                scratch[start + t] = minus(a, b);
                scratch[start + half + t] = plus(a, b);
            }
        }
        v.copy_from_slice(&scratch);
        group = half;
    }
    v
}

fn leaves_for(assignment: &ChannelAssignment, per_type: &[f64]) -> Result<Vec<f64>> {
    if per_type.len() != assignment.m() {
        return Err(Error::InvalidInput(format!(
            "expected {} per-type values, got {}",
            assignment.m(),
            per_type.len()
        )));
    }
    if !assignment.n().is_power_of_two() {
        return Err(Error::InvalidInput(format!(
            "assignment length {} is not a power of two",
            assignment.n()
        )));
    }
    Ok((0..assignment.n())
        .map(|i| per_type[assignment.type_index(i)])
        .collect())
}

/// Exact Bhattacharyya-parameter evolution for BEC leaves.
pub fn bec_evolve(assignment: &ChannelAssignment, erasures: &[f64]) -> Result<ReliabilityProfile> {
    for &z in erasures {
        if !(0.0..=1.0).contains(&z) {
            return Err(Error::InvalidInput(format!("erasure {z} outside [0, 1]")));
        }
    }
    let leaves = leaves_for(assignment, erasures)?;
    let per_position = evolve(leaves, |a, b| a + b - a * b, |a, b| a * b);
    Ok(ReliabilityProfile {
        per_position,
        metric: Metric::BhattacharyyaZ,
        source_assignment: assignment.clone(),
        source_values: erasures.to_vec(),
    })
}

/// Sum of the plus-channel (even-indexed) Bhattacharyya parameters after the
/// first polarization stage.
pub fn bec_stage1_plus_sum(assignment: &ChannelAssignment, erasures: &[f64]) -> Result<f64> {
    let leaves = leaves_for(assignment, erasures)?;
    Ok(leaves.chunks_exact(2).map(|p| p[0] * p[1]).sum())
}

/// Gaussian-approximation density evolution for bi-AWGN leaves given their
/// initial LLR means.
pub fn ga_evolve(assignment: &ChannelAssignment, means: &[f64]) -> Result<ReliabilityProfile> {
    for &m in means {
        if m.is_nan() || m < 0.0 {
            return Err(Error::InvalidInput(format!("LLR mean {m} must be >= 0")));
        }
    }
    let leaves = leaves_for(assignment, means)?;
    let per_position = evolve(leaves, ga_check_combine, |a, b| a + b);
    Ok(ReliabilityProfile {
        per_position,
        metric: Metric::LlrMean,
        source_assignment: assignment.clone(),
        source_values: means.to_vec(),
    })
}

/// Heterogeneous GA check-node rule: the erasure-style combine composed in
/// the phi domain.
pub fn ga_check_combine(mean_a: f64, mean_b: f64) -> f64 {
    let a = phi(mean_a);
    let b = phi(mean_b);
    phi_inv(a + b - a * b)
}

/// The GA tracking function `phi(x) = 1 - E[tanh(L/2)]` for `L ~ N(x, 2x)`,
/// in its standard two-piece approximation.
pub fn phi(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x == 0.0 {
        1.0
    } else if x < 10.0 {
        // The fit exceeds 1 for x below ~0.03; clamp to keep phi a valid
        // erasure-style parameter.
        (-0.4527 * x.powf(0.86) + 0.0218).exp().min(1.0)
    } else {
        // Evaluated in the log domain so large means underflow to 0 cleanly.
        let ln_phi = 0.5 * (std::f64::consts::PI / x).ln() - x / 4.0 + (1.0 - 10.0 / (7.0 * x)).ln();
        ln_phi.exp()
    }
}

/// Inverse of [`phi`] by bisection. Arguments at or below `phi(2000)` clamp
/// to the mean cap.
pub fn phi_inv(y: f64) -> f64 {
    if y >= 1.0 {
        return 0.0;
    }
    let floor = phi(GA_MEAN_MAX);
    if y <= floor {
        return GA_MEAN_MAX;
    }
    let mut lo = 0.0;
    let mut hi = GA_MEAN_MAX;
    // phi is decreasing; keep phi(lo) >= y >= phi(hi).
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phi(mid) > y {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-10 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Error probability of a bi-AWGN bit channel with LLR mean `mean`:
/// `Q(sqrt(mean / 2))`.
pub fn error_prob_from_mean(mean: f64) -> f64 {
    0.5 * libm::erfc(mean.sqrt() / 2.0)
}

// ---------------------------------------------------------------------------
// Information sets and bounds
// ---------------------------------------------------------------------------

/// Picks the `k` most reliable positions with ties broken by lower index.
pub fn select_info_set(profile: &ReliabilityProfile, k: usize) -> Result<InfoSet> {
    select_info_set_excluding(profile, k, &[])
}

/// As [`select_info_set`], never selecting `excluded` positions (used for
/// shortening).
pub fn select_info_set_excluding(
    profile: &ReliabilityProfile,
    k: usize,
    excluded: &[usize],
) -> Result<InfoSet> {
    let n = profile.n();
    let mut banned = vec![false; n];
    for &e in excluded {
        banned[e] = true;
    }
    let available = banned.iter().filter(|&&b| !b).count();
    if k > available {
        return Err(Error::InvalidInput(format!(
            "cannot select {k} positions out of {available} available"
        )));
    }
    let mut order: Vec<usize> = (0..n).filter(|&i| !banned[i]).collect();
    let better_is_smaller = match profile.metric {
        Metric::BhattacharyyaZ | Metric::ErrorProb => true,
        Metric::LlrMean => false,
    };
    order.sort_by(|&a, &b| {
        let (va, vb) = (profile.per_position[a], profile.per_position[b]);
        let cmp = if better_is_smaller {
            va.partial_cmp(&vb).unwrap()
        } else {
            vb.partial_cmp(&va).unwrap()
        };
        cmp.then(a.cmp(&b))
    });
    let mut indices: Vec<usize> = order.into_iter().take(k).collect();
    indices.sort_unstable();
    Ok(InfoSet { indices })
}

/// BLER union bound: the sum of per-position error metrics over the
/// information set (Z for BEC profiles, P_e for GA profiles).
pub fn union_bound(profile: &ReliabilityProfile, info_set: &InfoSet) -> f64 {
    info_set
        .indices
        .iter()
        .map(|&i| profile.error_metric(i))
        .sum()
}

// ---------------------------------------------------------------------------
// Surrogate bridge from PAM bit levels to GA inputs
// ---------------------------------------------------------------------------

/// Capacity-equivalent bi-AWGN LLR mean, clamped at the extremes.
pub fn mean_for_capacity(capacity: f64) -> f64 {
    if capacity >= 1.0 - 1e-9 {
        MEAN_SENTINEL
    } else if capacity <= 1e-9 {
        0.0
    } else {
        let sigma = biawgn_sigma_for_capacity(capacity).expect("capacity in (0,1)");
        2.0 / (sigma * sigma)
    }
}

/// Per-level initial LLR means of the capacity-equivalent bi-AWGN surrogates
/// for one PAM operating point.
pub fn surrogate_level_means(
    constellation: &Constellation,
    sigma: f64,
    principle: Principle,
) -> Vec<f64> {
    (0..constellation.m())
        .map(|j| mean_for_capacity(bit_level_capacity(constellation, sigma, j, principle)))
        .collect()
}

/// The surrogate channels themselves.
pub fn surrogate_specs_from_pam(
    constellation: &Constellation,
    sigma: f64,
    principle: Principle,
) -> Vec<ChannelSpec> {
    surrogate_level_means(constellation, sigma, principle)
        .into_iter()
        .map(|mean| {
            let sigma = if mean > 0.0 { (2.0 / mean).sqrt() } else { 1e9 };
            ChannelSpec::BiAwgn { sigma }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Table I instances
// ---------------------------------------------------------------------------

/// The 20 four-channel bi-AWGN capacity instances, each summing to 2.8.
pub fn table1_instances() -> &'static [[f64; 4]; 20] {
    &TABLE1
}

static TABLE1: [[f64; 4]; 20] = [
    [0.65, 0.41, 0.75, 0.99],
    [0.75, 0.52, 0.65, 0.88],
    [0.45, 0.78, 0.65, 0.92],
    [0.65, 0.89, 0.40, 0.86],
    [0.55, 0.58, 0.95, 0.72],
    [0.85, 0.56, 0.80, 0.59],
    [0.25, 0.80, 1.00, 0.75],
    [0.85, 0.64, 0.85, 0.46],
    [0.25, 0.70, 0.95, 0.90],
    [0.15, 0.97, 0.95, 0.73],
    [0.85, 0.71, 0.70, 0.54],
    [0.55, 0.39, 1.00, 0.86],
    [0.75, 0.95, 0.15, 0.95],
    [0.85, 0.90, 0.75, 0.30],
    [0.75, 0.83, 0.40, 0.82],
    [0.45, 0.98, 0.40, 0.97],
    [0.75, 0.19, 1.00, 0.86],
    [0.85, 0.80, 0.25, 0.90],
    [0.85, 0.40, 1.00, 0.55],
    [0.85, 0.85, 1.00, 0.10],
];
