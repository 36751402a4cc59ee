//! Polar coded modulation laboratory.
//!
//! This crate implements polar coding over `2^m`-PAM constellations with
//! heterogeneous per-position bit channels:
//!
//! - [`polar`] — binary polar encoding and successive-cancellation decoding
//!   with per-position frozen bits and arbitrary per-position channel LLRs.
//! - [`channels`] — BEC / bi-AWGN channel models, PAM constellations with
//!   set-partition and Gray labelings, soft demappers, and capacity
//!   computations via Gauss-Hermite quadrature.
//! - [`interleave`] — channel-type assignments (block, cyclic, seeded random)
//!   and shortening for block lengths not divisible by the level count.
//! - [`construction`] — exact BEC Bhattacharyya recursion and Gaussian
//!   approximation density evolution over heterogeneous inputs, information
//!   set selection, and BLER union bounds.
//! - [`cpcm`] — convolutional polar coded modulation: the staggered
//!   codeword-to-symbol mapping, its inverse, and the bidirectional decoder.
//! - [`baselines`] — multi-level coding (MLC) and bit-interleaved coded
//!   modulation (BICM) polar baselines.
//! - [`sim`] — seeded Monte Carlo campaigns: BLER vs SNR, union-bound
//!   sweeps, and spectral-efficiency sweeps.
//! - [`cli`] — command-line front end emitting CSV data files.
//!
//! Every randomized routine takes an explicit seed or RNG; identical seeds
//! produce identical outputs regardless of thread count.
//!
//! ## Example
//!
//! Build a half-rate polar code for two erasure channels, encode, and decode
//! noiselessly:
//!
//! ```rust
//! use polar_cm::construction::{bec_evolve, select_info_set};
//! use polar_cm::interleave::interleaver2;
//! use polar_cm::polar::{noiseless_llrs, polar_encode, sc_decode, PolarCode};
//!
//! let n = 16;
//! let assignment = interleaver2(n, 2)?;
//! let profile = bec_evolve(&assignment, &[0.2, 0.4])?;
//! let info_set = select_info_set(&profile, 8)?;
//! let code = PolarCode::new(info_set.frozen_mask(n), vec![0; n])?;
//!
//! let info = [1, 0, 1, 1, 0, 0, 1, 0];
//! let codeword = polar_encode(&code, &info)?;
//! let decoded = sc_decode(&code, &noiseless_llrs(&codeword))?;
//! assert_eq!(decoded.info_hat, info);
//! # Ok::<(), polar_cm::Error>(())
//! ```
//!
//! The `examples/` directory walks through each subsystem; the `polar-cm`
//! binary drives the same machinery from the command line.

pub mod baselines;
pub mod channels;
pub mod cli;
pub mod construction;
pub mod cpcm;
pub mod interleave;
pub mod polar;
pub mod sim;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument violated an operation's contract.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A configuration file or config value failed validation.
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    /// Output or fixture I/O failed.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
