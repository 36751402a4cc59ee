//! Channel models, PAM constellations and soft demappers.
//!
//! A `2^m`-PAM constellation places its points on the odd integers
//! `{-(2^m - 1), ..., -1, +1, ..., +(2^m - 1)}`, scaled so the average symbol
//! energy is 1. Each point carries an m-bit label `(v_1, ..., v_m)`:
//!
//! - Set-partition labeling is natural binary with `v_1` as the least
//!   significant (partition) bit: fixing `v_1..v_j` splits the constellation
//!   into subsets whose minimum intra-subset distance doubles per fixed bit.
//! - Gray labeling is the binary reflected code on the point index, so
//!   adjacent points differ in exactly one bit.
//!
//! The demappers compute exact bit LLRs `ln(P(v_j = 0 | y) / P(v_j = 1 | y))`
//! with any subset of the other levels known, marginalizing the rest under a
//! uniform prior. Capacities are evaluated by Gauss-Hermite quadrature over
//! the noise (64 nodes by default) with a Monte Carlo fallback for
//! validation.
//!
//! Noise convention: real AWGN with variance `sigma^2`, so
//! `Es/N0 = 1/(2 sigma^2)` for unit-energy constellations.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussHermite;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::polar::Bit;
use crate::{Error, Result};

const LN_2: f64 = std::f64::consts::LN_2;
const SQRT_PI: f64 = 1.7724538509055159;

/// Default Gauss-Hermite node count for capacity integrals.
pub const DEFAULT_QUAD_NODES: usize = 64;

// ---------------------------------------------------------------------------
// Channel specifications
// ---------------------------------------------------------------------------

/// A per-use binary-input channel description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ChannelSpec {
    /// Binary erasure channel with erasure probability `erasure`.
    Bec { erasure: f64 },
    /// Binary-input AWGN channel (BPSK over real noise of std dev `sigma`).
    BiAwgn { sigma: f64 },
}

impl ChannelSpec {
    pub fn bec(erasure: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&erasure) {
            return Err(Error::InvalidInput(format!(
                "BEC erasure probability {erasure} outside [0, 1]"
            )));
        }
        Ok(ChannelSpec::Bec { erasure })
    }

    pub fn biawgn(sigma: f64) -> Result<Self> {
        if sigma.is_nan() || sigma <= 0.0 {
            return Err(Error::InvalidInput(format!("sigma {sigma} must be > 0")));
        }
        Ok(ChannelSpec::BiAwgn { sigma })
    }

    /// Channel capacity in bits per use.
    pub fn capacity(&self) -> f64 {
        match *self {
            ChannelSpec::Bec { erasure } => bec_capacity(erasure),
            ChannelSpec::BiAwgn { sigma } => biawgn_capacity(sigma),
        }
    }

    /// Mean of the channel LLR under the all-zero input: `2 / sigma^2` for
    /// the bi-AWGN channel. `None` for the BEC whose LLRs are not Gaussian.
    pub fn initial_llr_mean(&self) -> Option<f64> {
        match *self {
            ChannelSpec::Bec { .. } => None,
            ChannelSpec::BiAwgn { sigma } => Some(2.0 / (sigma * sigma)),
        }
    }
}

/// BEC capacity `1 - z`.
pub fn bec_capacity(z: f64) -> f64 {
    1.0 - z
}

// ---------------------------------------------------------------------------
// Constellations
// ---------------------------------------------------------------------------

/// Bit-to-symbol labeling rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Labeling {
    SetPartition,
    Gray,
}

/// A `2^m`-PAM constellation with a bit labeling.
#[derive(Debug, Clone)]
pub struct Constellation {
    m: usize,
    points: Vec<f64>,
    labeling: Labeling,
    energy_norm: f64,
    /// label -> point index
    index_of_label: Vec<usize>,
    /// point index -> label (bit j-1 of the label is v_j)
    label_of_index: Vec<usize>,
}

impl Constellation {
    /// Unit-average-energy constellation.
    pub fn new(m: usize, labeling: Labeling) -> Result<Self> {
        let mut c = Self::unnormalized(m, labeling)?;
        let size = 1usize << m;
        let energy: f64 = c.points.iter().map(|p| p * p).sum::<f64>() / size as f64;
        let norm = 1.0 / energy.sqrt();
        for p in &mut c.points {
            *p *= norm;
        }
        c.energy_norm = norm;
        Ok(c)
    }

    /// Constellation on the raw odd integers (spacing 2), useful for worked
    /// examples and fixtures.
    pub fn unnormalized(m: usize, labeling: Labeling) -> Result<Self> {
        if !(1..=6).contains(&m) {
            return Err(Error::InvalidInput(format!(
                "bits per symbol m = {m} outside supported range 1..=6"
            )));
        }
        let size = 1usize << m;
        let points: Vec<f64> = (0..size)
            .map(|b| (2 * b as i64 - (size as i64 - 1)) as f64)
            .collect();
        let label_of_index: Vec<usize> = (0..size)
            .map(|b| match labeling {
                Labeling::SetPartition => b,
                Labeling::Gray => b ^ (b >> 1),
            })
            .collect();
        let mut index_of_label = vec![0usize; size];
        for (b, &lab) in label_of_index.iter().enumerate() {
            index_of_label[lab] = b;
        }
        Ok(Self {
            m,
            points,
            labeling,
            energy_norm: 1.0,
            index_of_label,
            label_of_index,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn labeling(&self) -> Labeling {
        self.labeling
    }

    pub fn energy_norm(&self) -> f64 {
        self.energy_norm
    }

    /// Amplitudes in ascending order.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn average_energy(&self) -> f64 {
        self.points.iter().map(|p| p * p).sum::<f64>() / self.size() as f64
    }

    /// Bit `v_{level+1}` of the point at index `b` (levels are 0-based here).
    pub fn bit_of_index(&self, b: usize, level: usize) -> Bit {
        ((self.label_of_index[b] >> level) & 1) as Bit
    }

    /// Label bits `(v_1, ..., v_m)` of the point at index `b`.
    pub fn bits_of_index(&self, b: usize) -> Vec<Bit> {
        (0..self.m).map(|j| self.bit_of_index(b, j)).collect()
    }

    /// Point index carrying the tuple `(v_1, ..., v_m)`.
    pub fn index_of_bits(&self, bits: &[Bit]) -> usize {
        debug_assert_eq!(bits.len(), self.m);
        let label = bits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (j, &b)| acc | ((b as usize) << j));
        self.index_of_label[label]
    }

    /// Amplitude transmitted for the tuple `(v_1, ..., v_m)`.
    pub fn symbol_for_bits(&self, bits: &[Bit]) -> f64 {
        self.points[self.index_of_bits(bits)]
    }

    /// Point indices consistent with the partially known tuple (`None` =
    /// unknown level).
    pub fn consistent_indices(&self, known: &[Option<Bit>]) -> Vec<usize> {
        debug_assert_eq!(known.len(), self.m);
        (0..self.size())
            .filter(|&b| {
                known
                    .iter()
                    .enumerate()
                    .all(|(j, k)| k.is_none_or(|v| self.bit_of_index(b, j) == v))
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// AWGN transmission
// ---------------------------------------------------------------------------

/// A block of labeled tuples, their symbols and channel outputs.
#[derive(Debug, Clone)]
pub struct SymbolBlock {
    pub m: usize,
    /// T x m bit matrix, row-major: entry (t, j) at `tuples[t * m + j]`.
    pub tuples: Vec<Bit>,
    pub symbols: Vec<f64>,
    pub received: Vec<f64>,
}

impl SymbolBlock {
    /// Modulates a flat T x m tuple matrix.
    pub fn modulate(constellation: &Constellation, tuples: Vec<Bit>) -> Result<Self> {
        let m = constellation.m();
        if !tuples.len().is_multiple_of(m) {
            return Err(Error::InvalidInput(format!(
                "tuple matrix length {} is not a multiple of m = {m}",
                tuples.len()
            )));
        }
        let symbols = tuples
            .chunks_exact(m)
            .map(|row| constellation.symbol_for_bits(row))
            .collect();
        Ok(Self {
            m,
            tuples,
            symbols,
            received: Vec::new(),
        })
    }

    pub fn tuple(&self, t: usize) -> &[Bit] {
        &self.tuples[t * self.m..(t + 1) * self.m]
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Sends the symbols through AWGN, filling `received`.
    pub fn transmit<R: Rng>(&mut self, sigma: f64, rng: &mut R) {
        self.received = awgn_transmit(&self.symbols, sigma, rng);
    }
}

/// `y_t = s_t + n_t` with `n_t ~ N(0, sigma^2)`, reproducible under a fixed
/// seeded generator.
pub fn awgn_transmit<R: Rng>(symbols: &[f64], sigma: f64, rng: &mut R) -> Vec<f64> {
    assert!(sigma > 0.0, "sigma must be positive");
    symbols
        .iter()
        .map(|&s| {
            let n: f64 = StandardNormal.sample(rng);
            s + sigma * n
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Demappers
// ---------------------------------------------------------------------------

fn log_sum_exp(values: impl Iterator<Item = f64>) -> f64 {
    let vals: Vec<f64> = values.collect();
    debug_assert!(!vals.is_empty());
    let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    max + vals.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// Exact LLR of level `level` (0-based) given a partially known tuple.
///
/// `known[j]` fixes level `j`; `known[level]` must be `None`. Unknown levels
/// are marginalized with a uniform prior:
/// `llr = ln( sum_{s: v=0, consistent} e^{-(y-s)^2/2s^2}
///          / sum_{s: v=1, consistent} e^{-(y-s)^2/2s^2} )`.
pub fn llr_level(
    constellation: &Constellation,
    y: f64,
    sigma: f64,
    level: usize,
    known: &[Option<Bit>],
) -> f64 {
    assert!(level < constellation.m());
    assert_eq!(known.len(), constellation.m());
    assert!(known[level].is_none(), "target level must be unknown");
    let inv_two_var = 1.0 / (2.0 * sigma * sigma);
    let exponent = |b: usize| {
        let d = y - constellation.points()[b];
        -d * d * inv_two_var
    };
    let candidates = constellation.consistent_indices(known);
    let num = log_sum_exp(
        candidates
            .iter()
            .filter(|&&b| constellation.bit_of_index(b, level) == 0)
            .map(|&b| exponent(b)),
    );
    let den = log_sum_exp(
        candidates
            .iter()
            .filter(|&&b| constellation.bit_of_index(b, level) == 1)
            .map(|&b| exponent(b)),
    );
    num - den
}

/// MLC-style LLR: all levels below `level` are known, levels above are
/// marginalized.
pub fn llr_conditional(
    constellation: &Constellation,
    y: f64,
    sigma: f64,
    level: usize,
    known_lower: &[Bit],
) -> f64 {
    assert_eq!(known_lower.len(), level);
    let mut known = vec![None; constellation.m()];
    for (j, &b) in known_lower.iter().enumerate() {
        known[j] = Some(b);
    }
    llr_level(constellation, y, sigma, level, &known)
}

/// BICM/CPCM-style LLR with an arbitrary subset of other levels known.
pub fn llr_marginalized(
    constellation: &Constellation,
    y: f64,
    sigma: f64,
    level: usize,
    known: &[Option<Bit>],
) -> f64 {
    llr_level(constellation, y, sigma, level, known)
}

// ---------------------------------------------------------------------------
// Capacity computations
// ---------------------------------------------------------------------------

/// Capacity chain decomposition principle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Principle {
    /// Multi-level: `I(V_j; Y | V_1..V_{j-1})`.
    Mlc,
    /// Bit-interleaved: `I(V_j; Y)` with no conditioning.
    Bicm,
}

fn hermite_rule(nodes: usize) -> Vec<(f64, f64)> {
    let quad = GaussHermite::new(NonZeroUsize::new(nodes).expect("node count must be nonzero"));
    let mut pairs: Vec<(f64, f64)> = quad.iter().map(|(n, w)| (*n, *w)).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    pairs
}

fn default_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| hermite_rule(DEFAULT_QUAD_NODES))
}

/// Log of the unnormalized likelihood of `y` given the partial tuple, i.e.
/// `ln( (1/|S|) sum_{b in S} e^{-(y-s_b)^2/2s^2} )` up to the Gaussian
/// normalization constant shared by all subsets.
fn log_likelihood_partial(
    constellation: &Constellation,
    y: f64,
    inv_two_var: f64,
    known: &[Option<Bit>],
) -> f64 {
    let candidates = constellation.consistent_indices(known);
    let count = candidates.len() as f64;
    log_sum_exp(candidates.iter().map(|&b| {
        let d = y - constellation.points()[b];
        -d * d * inv_two_var
    })) - count.ln()
}

fn level_capacity_with_rule(
    constellation: &Constellation,
    sigma: f64,
    level: usize,
    principle: Principle,
    rule: &[(f64, f64)],
) -> f64 {
    assert!(sigma > 0.0);
    let m = constellation.m();
    assert!(level < m);
    let size = constellation.size();
    let inv_two_var = 1.0 / (2.0 * sigma * sigma);
    let scale = std::f64::consts::SQRT_2 * sigma;
    let mut acc = 0.0;
    for b in 0..size {
        let s = constellation.points()[b];
        let mut with_target = vec![None; m];
        let mut without_target = vec![None; m];
        match principle {
            Principle::Mlc => {
                for j in 0..level {
                    let v = Some(constellation.bit_of_index(b, j));
                    with_target[j] = v;
                    without_target[j] = v;
                }
            }
            Principle::Bicm => {}
        }
        with_target[level] = Some(constellation.bit_of_index(b, level));
        for &(t, w) in rule {
            let y = s + scale * t;
            let lp_joint = log_likelihood_partial(constellation, y, inv_two_var, &with_target);
            let lp_cond = log_likelihood_partial(constellation, y, inv_two_var, &without_target);
            acc += w * (lp_joint - lp_cond);
        }
    }
    acc / (SQRT_PI * size as f64 * LN_2)
}

/// Bit-level capacity of one labeling level under the MLC or BICM principle,
/// by Gauss-Hermite quadrature with the default node count.
pub fn bit_level_capacity(
    constellation: &Constellation,
    sigma: f64,
    level: usize,
    principle: Principle,
) -> f64 {
    level_capacity_with_rule(constellation, sigma, level, principle, default_rule())
}

/// As [`bit_level_capacity`] with an explicit node count.
pub fn bit_level_capacity_with_nodes(
    constellation: &Constellation,
    sigma: f64,
    level: usize,
    principle: Principle,
    nodes: usize,
) -> f64 {
    level_capacity_with_rule(constellation, sigma, level, principle, &hermite_rule(nodes))
}

/// Monte Carlo fallback for [`bit_level_capacity`], for validation.
pub fn bit_level_capacity_mc<R: Rng>(
    constellation: &Constellation,
    sigma: f64,
    level: usize,
    principle: Principle,
    samples: usize,
    rng: &mut R,
) -> f64 {
    let m = constellation.m();
    let inv_two_var = 1.0 / (2.0 * sigma * sigma);
    let mut acc = 0.0;
    for _ in 0..samples {
        let b = rng.gen_range(0..constellation.size());
        let noise: f64 = StandardNormal.sample(rng);
        let y = constellation.points()[b] + sigma * noise;
        let mut with_target = vec![None; m];
        let mut without_target = vec![None; m];
        if principle == Principle::Mlc {
            for j in 0..level {
                let v = Some(constellation.bit_of_index(b, j));
                with_target[j] = v;
                without_target[j] = v;
            }
        }
        with_target[level] = Some(constellation.bit_of_index(b, level));
        acc += log_likelihood_partial(constellation, y, inv_two_var, &with_target)
            - log_likelihood_partial(constellation, y, inv_two_var, &without_target);
    }
    acc / (samples as f64 * LN_2)
}

/// Constellation capacity `I(S; Y)` for uniform symbols over AWGN.
/// Labeling-independent.
pub fn constellation_capacity(constellation: &Constellation, sigma: f64) -> f64 {
    constellation_capacity_with_rule(constellation, sigma, default_rule())
}

fn constellation_capacity_with_rule(
    constellation: &Constellation,
    sigma: f64,
    rule: &[(f64, f64)],
) -> f64 {
    assert!(sigma > 0.0);
    let size = constellation.size();
    let inv_two_var = 1.0 / (2.0 * sigma * sigma);
    let scale = std::f64::consts::SQRT_2 * sigma;
    let none = vec![None; constellation.m()];
    let mut acc = 0.0;
    for b in 0..size {
        let s = constellation.points()[b];
        for &(t, w) in rule {
            let y = s + scale * t;
            // ln q(y | s_b) relative to the mixture over all symbols.
            let d = y - s;
            let lp_sym = -d * d * inv_two_var;
            let lp_mix = log_likelihood_partial(constellation, y, inv_two_var, &none);
            acc += w * (lp_sym - lp_mix);
        }
    }
    acc / (SQRT_PI * size as f64 * LN_2)
}

/// Capacity of the binary-input AWGN channel (BPSK, noise std dev `sigma`).
pub fn biawgn_capacity(sigma: f64) -> f64 {
    assert!(sigma > 0.0);
    let softplus = |x: f64| x.max(0.0) + (-x.abs()).exp().ln_1p();
    let inv_var = 1.0 / (sigma * sigma);
    let scale = std::f64::consts::SQRT_2 * sigma;
    let acc: f64 = default_rule()
        .iter()
        .map(|&(t, w)| {
            let y = 1.0 + scale * t;
            let llr = 2.0 * y * inv_var;
            w * softplus(-llr)
        })
        .sum();
    1.0 - acc / (SQRT_PI * LN_2)
}

/// Inverts [`biawgn_capacity`] by bisection to within `1e-9` on capacity.
pub fn biawgn_sigma_for_capacity(capacity: f64) -> Result<f64> {
    if !(capacity > 0.0 && capacity < 1.0) {
        return Err(Error::InvalidInput(format!(
            "capacity {capacity} outside (0, 1)"
        )));
    }
    let mut lo = 1e-3;
    let mut hi = 1e3;
    while biawgn_capacity(lo) < capacity {
        lo /= 10.0;
        if lo < 1e-9 {
            break;
        }
    }
    while biawgn_capacity(hi) > capacity {
        hi *= 10.0;
        if hi > 1e9 {
            break;
        }
    }
    // Capacity is strictly decreasing in sigma.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let c = biawgn_capacity(mid);
        if (c - capacity).abs() <= 1e-12 {
            return Ok(mid);
        }
        if c > capacity {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) / hi < 1e-15 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
