//! Convolutional polar coded modulation.
//!
//! L codewords of length N are staggered over `T = (L+m-1)*N/m` PAM symbols
//! organized in transmission blocks of `N/m` symbols. Bit `i` of codeword `l`
//! (both 1-based) goes to level `j ≡ i (mod m)` of tuple
//! `t = (k-1)*N/m + 1 + floor((i-1)/m)` in block `k = l + (m - i mod m) mod m`.
//! Within any tuple of block `k`, level `j` carries a bit of codeword
//! `k - m + j`, so lower levels hold older codewords and the highest level the
//! current one; cells whose codeword index falls outside `1..=L` are frozen to
//! seeded coin flips shared with the receiver.
//!
//! Decoding is bidirectional: a forward pass conditions each codeword's
//! demapping on everything already known; on the first detected failure
//! (`idx_forward`) a backward pass starts from the last codeword, and if that
//! also fails (`idx_backward`) the remaining span is decoded standalone with
//! unknown neighbor bits marginalized as noise. Except the two boundary
//! codewords, every codeword is decoded at most once per pass.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channels::{llr_conditional, llr_level, Constellation};
use crate::polar::{sc_decode_with_rule, Bit, CombineRule, DecodeResult, PolarCode};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Frame construction (the staggered mapping)
// ---------------------------------------------------------------------------

/// What a tuple cell carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CellOrigin {
    /// Random fill shared with the receiver.
    Frozen,
    /// Bit `bit_index` of codeword `codeword` (both 0-based).
    Codeword { codeword: usize, bit_index: usize },
}

/// The T x m tuple matrix carrying L codewords, with per-cell provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct CpcmFrame {
    l_count: usize,
    n: usize,
    m: usize,
    /// Row-major T x m bits: cell (t, j) at `tuples[t * m + j]`.
    tuples: Vec<Bit>,
    origins: Vec<CellOrigin>,
}

/// Number of tuples used by L codewords: `(L + m - 1) * N / m`.
pub fn tuple_count(l_count: usize, n: usize, m: usize) -> usize {
    (l_count + m - 1) * (n / m)
}

/// Cell coordinates `(tuple, level)` of bit `i` (0-based) of codeword `l`
/// (0-based).
pub fn cell_of_bit(l: usize, i: usize, n: usize, m: usize) -> (usize, usize) {
    let level = i % m;
    let block = l + (m - 1 - level);
    let tuple = block * (n / m) + i / m;
    (tuple, level)
}

impl CpcmFrame {
    pub fn l_count(&self) -> usize {
        self.l_count
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Symbols per transmission block, `N / m`.
    pub fn block_size(&self) -> usize {
        self.n / self.m
    }

    pub fn tuple_count(&self) -> usize {
        tuple_count(self.l_count, self.n, self.m)
    }

    pub fn tuples(&self) -> &[Bit] {
        &self.tuples
    }

    pub fn origins(&self) -> &[CellOrigin] {
        &self.origins
    }

    pub fn cell(&self, tuple: usize, level: usize) -> Bit {
        self.tuples[tuple * self.m + level]
    }

    pub fn origin(&self, tuple: usize, level: usize) -> CellOrigin {
        self.origins[tuple * self.m + level]
    }

    /// The receiver-side view: structure and frozen fills, no codeword bits.
    pub fn receiver_context(&self) -> ReceiverContext {
        let fills = self
            .origins
            .iter()
            .zip(&self.tuples)
            .map(|(o, &b)| match o {
                CellOrigin::Frozen => Some(b),
                CellOrigin::Codeword { .. } => None,
            })
            .collect();
        ReceiverContext {
            l_count: self.l_count,
            n: self.n,
            m: self.m,
            frozen_fills: fills,
        }
    }

    /// CSV fixture dump: one row per cell.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("tuple,level,bit,origin,codeword,bit_index\n");
        for t in 0..self.tuple_count() {
            for j in 0..self.m {
                let bit = self.cell(t, j);
                match self.origin(t, j) {
                    CellOrigin::Frozen => {
                        out.push_str(&format!("{t},{j},{bit},frozen,,\n"));
                    }
                    CellOrigin::Codeword {
                        codeword,
                        bit_index,
                    } => {
                        out.push_str(&format!("{t},{j},{bit},codeword,{codeword},{bit_index}\n"));
                    }
                }
            }
        }
        out
    }

    /// Rebuilds a frame from [`CpcmFrame::to_csv`] output.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut cells = Vec::new();
        let mut max_tuple = 0usize;
        let mut max_level = 0usize;
        let mut max_codeword = 0usize;
        let mut max_bit = 0usize;
        for (lineno, line) in text.lines().enumerate() {
            if lineno == 0 || line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                return Err(Error::InvalidInput(format!(
                    "line {}: expected 6 fields, got {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let parse = |s: &str| -> Result<usize> {
                s.parse().map_err(|_| {
                    Error::InvalidInput(format!("line {}: bad integer {s}", lineno + 1))
                })
            };
            let tuple = parse(fields[0])?;
            let level = parse(fields[1])?;
            let bit = parse(fields[2])? as Bit;
            let origin = match fields[3] {
                "frozen" => CellOrigin::Frozen,
                "codeword" => {
                    let codeword = parse(fields[4])?;
                    let bit_index = parse(fields[5])?;
                    max_codeword = max_codeword.max(codeword);
                    max_bit = max_bit.max(bit_index);
                    CellOrigin::Codeword {
                        codeword,
                        bit_index,
                    }
                }
                other => {
                    return Err(Error::InvalidInput(format!(
                        "line {}: unknown origin {other}",
                        lineno + 1
                    )))
                }
            };
            max_tuple = max_tuple.max(tuple);
            max_level = max_level.max(level);
            cells.push((tuple, level, bit, origin));
        }
        let m = max_level + 1;
        let t_total = max_tuple + 1;
        let n = max_bit + 1;
        let l_count = max_codeword + 1;
        if cells.len() != t_total * m || tuple_count(l_count, n, m) != t_total {
            return Err(Error::InvalidInput("inconsistent frame dump".into()));
        }
        let mut tuples = vec![0 as Bit; t_total * m];
        let mut origins = vec![CellOrigin::Frozen; t_total * m];
        for (t, j, bit, origin) in cells {
            tuples[t * m + j] = bit;
            origins[t * m + j] = origin;
        }
        Ok(Self {
            l_count,
            n,
            m,
            tuples,
            origins,
        })
    }
}

/// Maps L codewords onto a frame. Every cell is first initialized to a fair
/// coin flip from `rng`, then codeword bits overwrite their cells.
pub fn cpcm_map<R: Rng>(codewords: &[Vec<Bit>], m: usize, rng: &mut R) -> Result<CpcmFrame> {
    let l_count = codewords.len();
    if l_count == 0 {
        return Err(Error::InvalidInput("need at least one codeword".into()));
    }
    let n = codewords[0].len();
    if n == 0 || !n.is_multiple_of(m) {
        return Err(Error::InvalidInput(format!(
            "m = {m} does not divide N = {n}; shorten first"
        )));
    }
    if codewords.iter().any(|c| c.len() != n) {
        return Err(Error::InvalidInput("codeword lengths differ".into()));
    }
    let t_total = tuple_count(l_count, n, m);
    let mut tuples: Vec<Bit> = (0..t_total * m).map(|_| rng.gen_range(0..2)).collect();
    let mut origins = vec![CellOrigin::Frozen; t_total * m];
    for (l, codeword) in codewords.iter().enumerate() {
        for (i, &bit) in codeword.iter().enumerate() {
            let (t, j) = cell_of_bit(l, i, n, m);
            let idx = t * m + j;
            debug_assert!(
                matches!(origins[idx], CellOrigin::Frozen),
                "cell ({t},{j}) written twice"
            );
            tuples[idx] = bit;
            origins[idx] = CellOrigin::Codeword {
                codeword: l,
                bit_index: i,
            };
        }
    }
    Ok(CpcmFrame {
        l_count,
        n,
        m,
        tuples,
        origins,
    })
}

/// The N cells of codeword `l` in bit-index order.
pub fn cpcm_unmap(frame: &CpcmFrame, l: usize) -> Vec<(usize, usize)> {
    (0..frame.n)
        .map(|i| cell_of_bit(l, i, frame.n, frame.m))
        .collect()
}

/// Reads codeword `l` back out of the frame.
pub fn extract_codeword(frame: &CpcmFrame, l: usize) -> Vec<Bit> {
    cpcm_unmap(frame, l)
        .into_iter()
        .map(|(t, j)| frame.cell(t, j))
        .collect()
}

// ---------------------------------------------------------------------------
// Rate accounting
// ---------------------------------------------------------------------------

/// Coded-modulation rate `R_cm = L K / T = m R L / (L + m - 1)` in
/// information bits per symbol, evaluated as an exact integer ratio.
pub fn rate_cm(m: usize, r_num: u64, r_den: u64, l: u64) -> f64 {
    let num = (m as u128) * (r_num as u128) * (l as u128);
    let den = (r_den as u128) * (l as u128 + m as u128 - 1);
    num as f64 / den as f64
}

/// Relative rate loss versus `m R`: `(m - 1) / (L + m - 1)`.
pub fn rate_loss(m: usize, l: u64) -> f64 {
    (m as u128 - 1) as f64 / (l as u128 + m as u128 - 1) as f64
}

// ---------------------------------------------------------------------------
// Error detection
// ---------------------------------------------------------------------------

/// Bitwise CRC with a configurable polynomial (MSB-first, zero initial
/// register).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrcSpec {
    pub width: usize,
    pub poly: u64,
}

impl Default for CrcSpec {
    fn default() -> Self {
        // CRC-16/CCITT polynomial.
        CrcSpec {
            width: 16,
            poly: 0x1021,
        }
    }
}

impl CrcSpec {
    pub fn checksum(&self, data: &[Bit]) -> Vec<Bit> {
        let mask = if self.width == 64 {
            u64::MAX
        } else {
            (1u64 << self.width) - 1
        };
        let mut reg: u64 = 0;
        for &bit in data {
            let top = ((reg >> (self.width - 1)) & 1) as Bit ^ bit;
            reg = (reg << 1) & mask;
            if top == 1 {
                reg ^= self.poly & mask;
            }
        }
        (0..self.width)
            .map(|b| ((reg >> (self.width - 1 - b)) & 1) as Bit)
            .collect()
    }

    /// Appends the checksum to `payload`.
    pub fn attach(&self, payload: &[Bit]) -> Vec<Bit> {
        let mut out = payload.to_vec();
        out.extend(self.checksum(payload));
        out
    }

    /// Verifies a `payload || checksum` word.
    pub fn check(&self, word: &[Bit]) -> bool {
        if word.len() < self.width {
            return false;
        }
        let split = word.len() - self.width;
        self.checksum(&word[..split]) == word[split..]
    }
}

/// Per-codeword error detection during CPCM decoding.
pub trait ErrorDetector {
    /// Verdict for the given decoding attempt (0-based attempt counter).
    fn codeword_ok(
        &mut self,
        codeword: usize,
        attempt: usize,
        code: &PolarCode,
        result: &DecodeResult,
    ) -> bool;
}

/// Perfect error detection against the true transmitted codewords.
pub struct GenieDetector<'a> {
    true_codewords: &'a [Vec<Bit>],
}

impl<'a> GenieDetector<'a> {
    pub fn new(true_codewords: &'a [Vec<Bit>]) -> Self {
        Self { true_codewords }
    }
}

impl ErrorDetector for GenieDetector<'_> {
    fn codeword_ok(
        &mut self,
        codeword: usize,
        _attempt: usize,
        _code: &PolarCode,
        result: &DecodeResult,
    ) -> bool {
        result.x_hat == self.true_codewords[codeword]
    }
}

/// CRC check over the decoded information word (`payload || crc`).
pub struct CrcDetector {
    pub spec: CrcSpec,
}

impl ErrorDetector for CrcDetector {
    fn codeword_ok(
        &mut self,
        _codeword: usize,
        _attempt: usize,
        _code: &PolarCode,
        result: &DecodeResult,
    ) -> bool {
        self.spec.check(&result.info_hat)
    }
}

/// Wraps another detector and forces a failure verdict on the first attempt
/// of selected codewords (fault injection for decoder state tests).
pub struct ScriptedDetector<D> {
    inner: D,
    fail_first_attempt: Vec<usize>,
}

impl<D> ScriptedDetector<D> {
    pub fn new(inner: D, fail_first_attempt: Vec<usize>) -> Self {
        Self {
            inner,
            fail_first_attempt,
        }
    }
}

impl<D: ErrorDetector> ErrorDetector for ScriptedDetector<D> {
    fn codeword_ok(
        &mut self,
        codeword: usize,
        attempt: usize,
        code: &PolarCode,
        result: &DecodeResult,
    ) -> bool {
        if attempt == 0 && self.fail_first_attempt.contains(&codeword) {
            return false;
        }
        self.inner.codeword_ok(codeword, attempt, code, result)
    }
}

// ---------------------------------------------------------------------------
// Bidirectional decoding
// ---------------------------------------------------------------------------

/// Receiver-side frame structure: provenance plus the shared frozen fills.
#[derive(Debug, Clone)]
pub struct ReceiverContext {
    l_count: usize,
    n: usize,
    m: usize,
    /// Per cell: `Some(bit)` for frozen fills, `None` for codeword cells.
    frozen_fills: Vec<Option<Bit>>,
}

impl ReceiverContext {
    pub fn l_count(&self) -> usize {
        self.l_count
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }
}

/// Final status of one codeword.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodewordStatus {
    Pending,
    Ok,
    Failed,
}

/// Outcome of decoding one frame.
#[derive(Debug, Clone)]
pub struct CpcmDecodeOutcome {
    pub status: Vec<CodewordStatus>,
    /// First forward-pass failure (0-based), if any.
    pub idx_forward: Option<usize>,
    /// First backward-pass failure (0-based), if any.
    pub idx_backward: Option<usize>,
    /// Decoding attempts per codeword.
    pub attempts: Vec<usize>,
    /// Accepted codeword estimates.
    pub codewords: Vec<Option<Vec<Bit>>>,
}

impl CpcmDecodeOutcome {
    pub fn failed_count(&self) -> usize {
        self.status
            .iter()
            .filter(|&&s| s == CodewordStatus::Failed)
            .count()
    }

    pub fn all_ok(&self) -> bool {
        self.status.iter().all(|&s| s == CodewordStatus::Ok)
    }

    pub fn total_attempts(&self) -> usize {
        self.attempts.iter().sum()
    }
}

struct FrameDecoder<'a, D: ErrorDetector> {
    ctx: &'a ReceiverContext,
    received: &'a [f64],
    code: &'a PolarCode,
    constellation: &'a Constellation,
    sigma: f64,
    rule: CombineRule,
    detector: &'a mut D,
    /// Per-cell known bits: frozen fills plus accepted codeword bits.
    known: Vec<Option<Bit>>,
    status: Vec<CodewordStatus>,
    attempts: Vec<usize>,
    codewords: Vec<Option<Vec<Bit>>>,
}

impl<D: ErrorDetector> FrameDecoder<'_, D> {
    /// One SC attempt on codeword `l` with the current known context.
    fn attempt(&mut self, l: usize) -> Result<bool> {
        let (n, m) = (self.ctx.n, self.ctx.m);
        let mut llrs = Vec::with_capacity(n);
        for i in 0..n {
            let (t, j) = cell_of_bit(l, i, n, m);
            let mut known: Vec<Option<Bit>> = self.known[t * m..(t + 1) * m].to_vec();
            known[j] = None;
            llrs.push(llr_level(
                self.constellation,
                self.received[t],
                self.sigma,
                j,
                &known,
            ));
        }
        let result = sc_decode_with_rule(self.code, &llrs, self.rule)?;
        let attempt_no = self.attempts[l];
        self.attempts[l] += 1;
        let ok = self.detector.codeword_ok(l, attempt_no, self.code, &result);
        if ok {
            self.status[l] = CodewordStatus::Ok;
            for (i, &bit) in result.x_hat.iter().enumerate() {
                let (t, j) = cell_of_bit(l, i, n, m);
                self.known[t * m + j] = Some(bit);
            }
            self.codewords[l] = Some(result.x_hat);
        }
        Ok(ok)
    }
}

/// Bidirectional decoding of one received frame.
///
/// All L codewords share the single `code` construction. Returns per-codeword
/// status plus the forward/backward failure indices.
pub fn cpcm_decode<D: ErrorDetector>(
    ctx: &ReceiverContext,
    received: &[f64],
    code: &PolarCode,
    constellation: &Constellation,
    sigma: f64,
    detector: &mut D,
    rule: CombineRule,
) -> Result<CpcmDecodeOutcome> {
    let l_count = ctx.l_count;
    let t_total = tuple_count(l_count, ctx.n, ctx.m);
    if received.len() != t_total {
        return Err(Error::InvalidInput(format!(
            "expected {t_total} received symbols, got {}",
            received.len()
        )));
    }
    if code.n() != ctx.n {
        return Err(Error::InvalidInput(format!(
            "code length {} does not match frame N {}",
            code.n(),
            ctx.n
        )));
    }
    if constellation.m() != ctx.m {
        return Err(Error::InvalidInput(
            "constellation level count does not match frame".into(),
        ));
    }
    let mut dec = FrameDecoder {
        ctx,
        received,
        code,
        constellation,
        sigma,
        rule,
        detector,
        known: ctx.frozen_fills.clone(),
        status: vec![CodewordStatus::Pending; l_count],
        attempts: vec![0; l_count],
        codewords: vec![None; l_count],
    };

    // Forward pass.
    let mut idx_forward = None;
    for l in 0..l_count {
        if !dec.attempt(l)? {
            idx_forward = Some(l);
            break;
        }
    }

    let mut idx_backward = None;
    if let Some(fwd) = idx_forward {
        // Backward pass from the last codeword down to the forward failure,
        // which gets its second attempt with the upgraded context.
        for l in (fwd..l_count).rev() {
            if dec.status[l] == CodewordStatus::Ok {
                continue;
            }
            if !dec.attempt(l)? {
                idx_backward = Some(l);
                break;
            }
        }

        // Middle pass over the remaining span, standalone except for whatever
        // context has accumulated; each success upgrades its successors.
        if let Some(bwd) = idx_backward {
            for l in fwd..=bwd {
                if dec.status[l] == CodewordStatus::Ok {
                    continue;
                }
                dec.attempt(l)?;
            }
        }
    }

    if let (Some(f), Some(b)) = (idx_forward, idx_backward) {
        debug_assert!(f <= b);
    }
    for l in 0..l_count {
        if dec.status[l] != CodewordStatus::Ok {
            dec.status[l] = CodewordStatus::Failed;
        }
        let boundary_budget =
            1 + usize::from(Some(l) == idx_forward) + usize::from(Some(l) == idx_backward);
        assert!(
            dec.attempts[l] <= boundary_budget,
            "codeword {l} attempted {} times",
            dec.attempts[l]
        );
    }

    Ok(CpcmDecodeOutcome {
        status: dec.status,
        idx_forward,
        idx_backward,
        attempts: dec.attempts,
        codewords: dec.codewords,
    })
}

// ---------------------------------------------------------------------------
// Frozen-value indifference
// ---------------------------------------------------------------------------

/// Empirically checks that conditional LLR magnitudes at `level` do not
/// depend on the realized values of the lower (frozen) levels.
///
/// Holds for set-partition labeling, where fixing the lower levels selects
/// congruent translates of one subset; fails for Gray labeling.
pub fn frozen_value_indifference_check<R: Rng>(
    constellation: &Constellation,
    level: usize,
    sigma: f64,
    trials: usize,
    rng: &mut R,
) -> bool {
    let m = constellation.m();
    assert!(level < m);
    let lower_count = 1usize << level;
    let upper_count = 1usize << (m - level);
    for lower in 1..lower_count {
        for _ in 0..trials {
            let upper = rng.gen_range(0..upper_count);
            let noise: f64 = rng.sample::<f64, _>(rand_distr::StandardNormal) * sigma;
            let bits_for = |low: usize| -> Vec<Bit> {
                (0..m)
                    .map(|j| {
                        if j < level {
                            ((low >> j) & 1) as Bit
                        } else {
                            ((upper >> (j - level)) & 1) as Bit
                        }
                    })
                    .collect()
            };
            let base_bits = bits_for(0);
            let alt_bits = bits_for(lower);
            let y_base = constellation.symbol_for_bits(&base_bits) + noise;
            let y_alt = constellation.symbol_for_bits(&alt_bits) + noise;
            let llr_base =
                llr_conditional(constellation, y_base, sigma, level, &base_bits[..level]);
            let llr_alt = llr_conditional(constellation, y_alt, sigma, level, &alt_bits[..level]);
            if (llr_base.abs() - llr_alt.abs()).abs() > 1e-9 {
                return false;
            }
        }
    }
    true
}
