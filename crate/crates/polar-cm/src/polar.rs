//! Binary polar encoding and successive-cancellation (SC) decoding.
//!
//! The encoder applies the Kronecker power of the kernel `F = [[1,0],[1,1]]`
//! in natural (non-bit-reversed) order: `x = u * F^{(x)n}`. The synthesized
//! bit channels are enumerated in SC decoding order, in which the first
//! polarization stage combines *adjacent* channel uses `(x_1,x_2), (x_3,x_4),
//! ...`. Decoding-order position `p` corresponds to encoder-input position
//! `bit_reverse(p)`; frozen masks, frozen values and reliability profiles all
//! live in the decoding-order (synthesized-channel) domain.
//!
//! LLR convention: `llr = ln(P(bit = 0) / P(bit = 1))`, so positive values
//! favor 0. Ties (`llr == 0`) decide to 0. Infinite confidence is represented
//! by the finite sentinel [`LLR_SENTINEL`] to keep combines NaN-free.

use crate::{Error, Result};

/// A single bit, stored as `0` or `1`.
pub type Bit = u8;

/// Length-N vector of channel log-likelihood ratios.
pub type LlrVector = Vec<f64>;

/// Finite stand-in for an infinitely confident LLR.
pub const LLR_SENTINEL: f64 = 300.0;

/// f-node / g-node combining rule used inside SC decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineRule {
    /// Exact log-domain check combine `ln((1+e^{a+b})/(e^a+e^b))`.
    Exact,
    /// Min-sum approximation `sign(a)sign(b)min(|a|,|b|)`.
    MinSum,
}

/// Reverses the lowest `bits` bits of `i`.
pub fn bit_reverse(i: usize, bits: u32) -> usize {
    let mut out = 0usize;
    for b in 0..bits {
        out |= ((i >> b) & 1) << (bits - 1 - b);
    }
    out
}

/// Applies the polar transform `x = u * F^{(x)n}` in place (natural order).
///
/// The transform is an involution over GF(2): applying it twice restores the
/// input.
pub fn polar_transform(bits: &mut [Bit]) {
    let n = bits.len();
    debug_assert!(n.is_power_of_two());
    let mut step = 1;
    while step < n {
        for block in (0..n).step_by(2 * step) {
            for j in 0..step {
                bits[block + j] ^= bits[block + j + step];
            }
        }
        step *= 2;
    }
}

/// Maps a hard codeword to noiseless sentinel LLRs.
pub fn noiseless_llrs(x: &[Bit]) -> LlrVector {
    x.iter()
        .map(|&b| if b == 0 { LLR_SENTINEL } else { -LLR_SENTINEL })
        .collect()
}

/// A polar code: block length, frozen mask and frozen values.
///
/// `frozen_mask[p]` and `frozen_values[p]` are indexed by synthesized-channel
/// position `p` (SC decoding order). The encoder-input position carrying
/// synthesized position `p` is `bit_reverse(p, log_n)`.
#[derive(Debug, Clone)]
pub struct PolarCode {
    n: usize,
    log_n: u32,
    frozen_mask: Vec<bool>,
    frozen_values: Vec<Bit>,
    k: usize,
}

impl PolarCode {
    /// Builds a code from an explicit frozen mask and frozen values.
    pub fn new(frozen_mask: Vec<bool>, frozen_values: Vec<Bit>) -> Result<Self> {
        let n = frozen_mask.len();
        if !n.is_power_of_two() || n == 0 {
            return Err(Error::InvalidInput(format!(
                "block length {n} is not a power of two"
            )));
        }
        if frozen_values.len() != n {
            return Err(Error::InvalidInput(format!(
                "frozen_values length {} != N {}",
                frozen_values.len(),
                n
            )));
        }
        let k = frozen_mask.iter().filter(|&&f| !f).count();
        Ok(Self {
            n,
            log_n: n.trailing_zeros(),
            frozen_mask,
            frozen_values,
            k,
        })
    }

    /// Builds a code from the set of unfrozen (information) positions, with
    /// all frozen values zero.
    pub fn with_info_positions(n: usize, info_positions: &[usize]) -> Result<Self> {
        let mut mask = vec![true; n];
        for &p in info_positions {
            if p >= n {
                return Err(Error::InvalidInput(format!(
                    "info position {p} out of range for N = {n}"
                )));
            }
            if !mask[p] {
                return Err(Error::InvalidInput(format!("duplicate info position {p}")));
            }
            mask[p] = false;
        }
        Self::new(mask, vec![0; n])
    }

    /// The rate-1 code (no frozen positions).
    pub fn full_rate(n: usize) -> Result<Self> {
        Self::new(vec![false; n], vec![0; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn log_n(&self) -> u32 {
        self.log_n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen_mask
    }

    pub fn frozen_values(&self) -> &[Bit] {
        &self.frozen_values
    }

    /// Encoder-input position carrying synthesized position `p`.
    pub fn encoder_position(&self, p: usize) -> usize {
        bit_reverse(p, self.log_n)
    }

    /// Unfrozen encoder-input positions in ascending order. Information bits
    /// are placed into these positions by [`polar_encode`].
    pub fn unfrozen_encoder_positions(&self) -> Vec<usize> {
        let mut positions: Vec<usize> = (0..self.n)
            .filter(|&p| !self.frozen_mask[p])
            .map(|p| self.encoder_position(p))
            .collect();
        positions.sort_unstable();
        positions
    }

    /// Extracts the information bits from an encoder-domain word.
    pub fn extract_info(&self, u: &[Bit]) -> Vec<Bit> {
        self.unfrozen_encoder_positions()
            .iter()
            .map(|&j| u[j])
            .collect()
    }

    /// Assembles the encoder-domain word `u` for the given information bits.
    pub fn assemble_u(&self, info_bits: &[Bit]) -> Result<Vec<Bit>> {
        if info_bits.len() != self.k {
            return Err(Error::InvalidInput(format!(
                "expected {} info bits, got {}",
                self.k,
                info_bits.len()
            )));
        }
        let mut u = vec![0 as Bit; self.n];
        for p in 0..self.n {
            if self.frozen_mask[p] {
                u[self.encoder_position(p)] = self.frozen_values[p];
            }
        }
        for (bit, j) in info_bits.iter().zip(self.unfrozen_encoder_positions()) {
            u[j] = *bit;
        }
        Ok(u)
    }
}

/// Encodes `info_bits` into a codeword of length N.
///
/// Information bits fill the unfrozen encoder-input positions in ascending
/// index order, frozen values fill the rest, and the natural-order transform
/// `x = u * F^{(x)n}` produces the codeword.
pub fn polar_encode(code: &PolarCode, info_bits: &[Bit]) -> Result<Vec<Bit>> {
    let mut u = code.assemble_u(info_bits)?;
    polar_transform(&mut u);
    Ok(u)
}

/// Result of one SC decoding pass.
#[derive(Debug, Clone)]
pub struct DecodeResult {
    /// Encoder-domain estimate; `x_hat` always re-encodes it.
    pub u_hat: Vec<Bit>,
    /// Re-encoded codeword estimate.
    pub x_hat: Vec<Bit>,
    /// Decoded information bits in placement order.
    pub info_hat: Vec<Bit>,
    /// Genie mode only: encoder-domain index of the first erroneous decision
    /// in decoding order.
    pub first_error_index: Option<usize>,
    /// Genie mode only: whether any unfrozen decision disagreed with truth.
    pub block_error: bool,
}

struct ScState<'a> {
    mask: &'a [bool],
    values: &'a [Bit],
    rule: CombineRule,
    // Decode-order truth for genie runs; decisions are corrected after the
    // first-error event is recorded.
    truth: Option<Vec<Bit>>,
    first_error: Option<usize>,
}

fn f_combine(a: f64, b: f64, rule: CombineRule) -> f64 {
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    let base = sign * a.abs().min(b.abs());
    match rule {
        CombineRule::MinSum => base,
        CombineRule::Exact => base + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p(),
    }
}

fn g_combine(a: f64, b: f64, partial: Bit) -> f64 {
    if partial == 1 {
        b - a
    } else {
        b + a
    }
}

/// Recursive SC pass. Returns decoding-order decisions and the re-encoded
/// codeword of this subtree. `offset` is the decode-order index of the first
/// leaf in this subtree.
fn sc_recurse(llrs: &[f64], offset: usize, state: &mut ScState) -> (Vec<Bit>, Vec<Bit>) {
    let len = llrs.len();
    if len == 1 {
        let p = offset;
        let decision = if state.mask[p] {
            state.values[p]
        } else {
            let hard: Bit = if llrs[0] >= 0.0 { 0 } else { 1 };
            match &state.truth {
                None => hard,
                Some(truth) => {
                    if hard != truth[p] && state.first_error.is_none() {
                        state.first_error = Some(p);
                    }
                    truth[p]
                }
            }
        };
        return (vec![decision], vec![decision]);
    }
    let half = len / 2;
    let f_llrs: Vec<f64> = (0..half)
        .map(|t| f_combine(llrs[2 * t], llrs[2 * t + 1], state.rule))
        .collect();
    let (mut decisions, c_left) = sc_recurse(&f_llrs, offset, state);
    let g_llrs: Vec<f64> = (0..half)
        .map(|t| g_combine(llrs[2 * t], llrs[2 * t + 1], c_left[t]))
        .collect();
    let (decisions_right, c_right) = sc_recurse(&g_llrs, offset + half, state);
    decisions.extend_from_slice(&decisions_right);
    let mut codeword = vec![0 as Bit; len];
    for t in 0..half {
        codeword[2 * t] = c_left[t] ^ c_right[t];
        codeword[2 * t + 1] = c_right[t];
    }
    (decisions, codeword)
}

fn sc_decode_inner(
    code: &PolarCode,
    llrs: &[f64],
    rule: CombineRule,
    truth_u: Option<&[Bit]>,
) -> Result<DecodeResult> {
    if llrs.len() != code.n {
        return Err(Error::InvalidInput(format!(
            "expected {} LLRs, got {}",
            code.n,
            llrs.len()
        )));
    }
    let truth = truth_u.map(|u| {
        (0..code.n)
            .map(|p| u[code.encoder_position(p)])
            .collect::<Vec<Bit>>()
    });
    let mut state = ScState {
        mask: &code.frozen_mask,
        values: &code.frozen_values,
        rule,
        truth,
        first_error: None,
    };
    let (decisions, x_hat) = sc_recurse(llrs, 0, &mut state);
    let mut u_hat = vec![0 as Bit; code.n];
    for (p, &d) in decisions.iter().enumerate() {
        u_hat[code.encoder_position(p)] = d;
    }
    let info_hat = code.extract_info(&u_hat);
    let block_error = state.first_error.is_some();
    Ok(DecodeResult {
        u_hat,
        x_hat,
        info_hat,
        first_error_index: state.first_error.map(|p| code.encoder_position(p)),
        block_error,
    })
}

/// Standard SC decoding with the exact combine rule.
pub fn sc_decode(code: &PolarCode, llrs: &[f64]) -> Result<DecodeResult> {
    sc_decode_inner(code, llrs, CombineRule::Exact, None)
}

/// SC decoding with an explicit combine rule.
pub fn sc_decode_with_rule(code: &PolarCode, llrs: &[f64], rule: CombineRule) -> Result<DecodeResult> {
    sc_decode_inner(code, llrs, rule, None)
}

/// Genie-aided SC decoding.
///
/// Each unfrozen decision is compared against `true_u` (encoder domain); the
/// first mismatch in decoding order sets `block_error` and
/// `first_error_index`, after which the true bit is substituted so error
/// propagation inside the codeword is suppressed.
pub fn sc_decode_genie(code: &PolarCode, llrs: &[f64], true_u: &[Bit]) -> Result<DecodeResult> {
    if true_u.len() != code.n {
        return Err(Error::InvalidInput(format!(
            "expected true_u of length {}, got {}",
            code.n,
            true_u.len()
        )));
    }
    sc_decode_inner(code, llrs, CombineRule::Exact, Some(true_u))
}

/// Genie-aided SC with an explicit combine rule.
pub fn sc_decode_genie_with_rule(
    code: &PolarCode,
    llrs: &[f64],
    true_u: &[Bit],
    rule: CombineRule,
) -> Result<DecodeResult> {
    if true_u.len() != code.n {
        return Err(Error::InvalidInput(format!(
            "expected true_u of length {}, got {}",
            code.n,
            true_u.len()
        )));
    }
    sc_decode_inner(code, llrs, rule, Some(true_u))
}
