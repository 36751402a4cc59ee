//! MLC and BICM polar baselines.
//!
//! MLC uses m component polar codes of length `N/m`, one per labeling level,
//! decoded in multistage order with conditional demapping. Rate allocation is
//! global: the level reliabilities are concatenated in natural level order
//! and the K best positions are taken wherever they fall, which implicitly
//! assigns each level its own rate. BICM uses one length-N code across all
//! levels with the cyclic level assignment, Gray labeling and purely marginal
//! demapping.

use rand::Rng;

use crate::channels::{
    llr_conditional, llr_level, Constellation, Principle, SymbolBlock,
};
use crate::construction::{ga_evolve, select_info_set, surrogate_level_means};
use crate::interleave::interleaver2;
use crate::polar::{polar_encode, sc_decode_genie, Bit, PolarCode};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// MLC
// ---------------------------------------------------------------------------

/// Multi-level coding scheme: one component code per level.
#[derive(Debug, Clone)]
pub struct MlcScheme {
    pub constellation: Constellation,
    /// Component codes, level 0 first; all of length `N/m`.
    pub codes: Vec<PolarCode>,
}

impl MlcScheme {
    pub fn m(&self) -> usize {
        self.codes.len()
    }

    /// Component block length `N/m`.
    pub fn component_n(&self) -> usize {
        self.codes[0].n()
    }

    /// Overall block length N (sum over components).
    pub fn total_n(&self) -> usize {
        self.codes.iter().map(|c| c.n()).sum()
    }

    pub fn total_k(&self) -> usize {
        self.codes.iter().map(|c| c.k()).sum()
    }

    /// Unfrozen-bit count per level.
    pub fn level_ks(&self) -> Vec<usize> {
        self.codes.iter().map(|c| c.k()).collect()
    }
}

/// Global rate allocation: GA on each level's capacity-equivalent surrogate,
/// levels concatenated in natural order, the K most reliable positions kept.
/// Ties break by (level, index).
pub fn mlc_rate_allocate(
    constellation: &Constellation,
    sigma: f64,
    n_total: usize,
    k_total: usize,
) -> Result<Vec<Vec<usize>>> {
    let m = constellation.m();
    if !n_total.is_multiple_of(m) {
        return Err(Error::InvalidInput(format!(
            "m = {m} does not divide N = {n_total}"
        )));
    }
    let component_n = n_total / m;
    if !component_n.is_power_of_two() {
        return Err(Error::InvalidInput(format!(
            "component length {component_n} is not a power of two"
        )));
    }
    if k_total > n_total {
        return Err(Error::InvalidInput(format!(
            "K = {k_total} exceeds N = {n_total}"
        )));
    }
    let means = surrogate_level_means(constellation, sigma, Principle::Mlc);
    let trivial = interleaver2(component_n, 1)?;
    let mut ranked: Vec<(f64, usize, usize)> = Vec::with_capacity(n_total);
    for (level, &mean) in means.iter().enumerate() {
        let profile = ga_evolve(&trivial, &[mean])?;
        for pos in 0..component_n {
            ranked.push((profile.error_metric(pos), level, pos));
        }
    }
    ranked.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap()
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    let mut per_level: Vec<Vec<usize>> = vec![Vec::new(); m];
    for &(_, level, pos) in ranked.iter().take(k_total) {
        per_level[level].push(pos);
    }
    for level in &mut per_level {
        level.sort_unstable();
    }
    Ok(per_level)
}

/// Builds the MLC scheme for one operating point.
pub fn mlc_build(
    constellation: &Constellation,
    sigma: f64,
    n_total: usize,
    k_total: usize,
) -> Result<MlcScheme> {
    let per_level = mlc_rate_allocate(constellation, sigma, n_total, k_total)?;
    let component_n = n_total / constellation.m();
    let codes = per_level
        .iter()
        .map(|info| PolarCode::with_info_positions(component_n, info))
        .collect::<Result<Vec<_>>>()?;
    Ok(MlcScheme {
        constellation: constellation.clone(),
        codes,
    })
}

/// Per-level outcome of one MLC block.
#[derive(Debug, Clone)]
pub struct MlcBlockResult {
    pub level_errors: Vec<bool>,
    pub block_error: bool,
}

/// Encodes `data`, transmits one multilevel block, and decodes the levels in
/// multistage order. In genie mode the conditional demapping of level j uses
/// the *true* lower-level bits and each level is scored by genie-aided SC.
pub fn mlc_transmit_decode<R: Rng>(
    scheme: &MlcScheme,
    data: &[Bit],
    sigma: f64,
    rng: &mut R,
) -> Result<MlcBlockResult> {
    let m = scheme.m();
    let nc = scheme.component_n();
    if data.len() != scheme.total_k() {
        return Err(Error::InvalidInput(format!(
            "expected {} data bits, got {}",
            scheme.total_k(),
            data.len()
        )));
    }
    // Encode each level.
    let mut offset = 0;
    let mut codewords = Vec::with_capacity(m);
    let mut true_us = Vec::with_capacity(m);
    for code in &scheme.codes {
        let info = &data[offset..offset + code.k()];
        offset += code.k();
        codewords.push(polar_encode(code, info)?);
        true_us.push(code.assemble_u(info)?);
    }
    // Symbol t carries (x_1[t], ..., x_m[t]).
    let mut tuples = vec![0 as Bit; nc * m];
    for t in 0..nc {
        for j in 0..m {
            tuples[t * m + j] = codewords[j][t];
        }
    }
    let mut block = SymbolBlock::modulate(&scheme.constellation, tuples)?;
    block.transmit(sigma, rng);
    // Multistage decoding, conditioning on true lower levels.
    let mut level_errors = Vec::with_capacity(m);
    for (j, code) in scheme.codes.iter().enumerate() {
        let llrs: Vec<f64> = (0..nc)
            .map(|t| {
                let lower: Vec<Bit> = (0..j).map(|jj| codewords[jj][t]).collect();
                llr_conditional(
                    &scheme.constellation,
                    block.received[t],
                    sigma,
                    j,
                    &lower,
                )
            })
            .collect();
        let res = sc_decode_genie(code, &llrs, &true_us[j])?;
        level_errors.push(res.block_error);
    }
    let block_error = level_errors.iter().any(|&e| e);
    Ok(MlcBlockResult {
        level_errors,
        block_error,
    })
}

// ---------------------------------------------------------------------------
// BICM
// ---------------------------------------------------------------------------

/// Bit-interleaved scheme: one code over all levels with cyclic assignment.
#[derive(Debug, Clone)]
pub struct BicmScheme {
    pub constellation: Constellation,
    pub code: PolarCode,
}

/// Builds the BICM code from BICM-principle capacities: each level maps to a
/// capacity-equivalent bi-AWGN surrogate, the cyclic assignment interleaves
/// them, and GA selects the information set.
pub fn bicm_build(
    constellation: &Constellation,
    sigma: f64,
    n: usize,
    k: usize,
) -> Result<BicmScheme> {
    let m = constellation.m();
    let means = surrogate_level_means(constellation, sigma, Principle::Bicm);
    let assignment = interleaver2(n, m)?;
    let profile = ga_evolve(&assignment, &means)?;
    let info = select_info_set(&profile, k)?;
    let code = PolarCode::new(info.frozen_mask(n), vec![0; n])?;
    Ok(BicmScheme {
        constellation: constellation.clone(),
        code,
    })
}

/// Encodes, transmits and decodes one BICM codeword with parallel marginal
/// demapping and genie-aided SC scoring. Returns the block-error flag.
pub fn bicm_transmit_decode<R: Rng>(
    scheme: &BicmScheme,
    data: &[Bit],
    sigma: f64,
    rng: &mut R,
) -> Result<bool> {
    let m = scheme.constellation.m();
    let n = scheme.code.n();
    let x = polar_encode(&scheme.code, data)?;
    let true_u = scheme.code.assemble_u(data)?;
    // Code bit i goes to level i mod m of symbol floor(i / m).
    let mut block = SymbolBlock::modulate(&scheme.constellation, x)?;
    block.transmit(sigma, rng);
    let none = vec![None; m];
    let llrs: Vec<f64> = (0..n)
        .map(|i| {
            llr_level(
                &scheme.constellation,
                block.received[i / m],
                sigma,
                i % m,
                &none,
            )
        })
        .collect();
    let res = sc_decode_genie(&scheme.code, &llrs, &true_u)?;
    Ok(res.block_error)
}
