//! Channel-type assignments and shortening.
//!
//! An assignment maps each of the N codeword positions (channel uses) to one
//! of `m` channel types. Interleaver-2 is the cyclic assignment, which feeds
//! every first-stage polarization kernel two different types and every
//! depth-`log2(m)` subtree all `m` types; interleaver-1 is the contiguous
//! block layout. Random assignments are balanced permutations of the type
//! multiset, not i.i.d. draws.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::polar::bit_reverse;
use crate::{Error, Result};

/// How a [`ChannelAssignment`] was generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AssignmentKind {
    Interleaver1,
    Interleaver2,
    Random(u64),
    /// Caller-supplied layout (for example a shortened tail mapped to an
    /// extra perfect-channel type).
    Custom,
}

/// Length-N assignment of channel types `1..=m` to codeword positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelAssignment {
    types: Vec<usize>,
    m: usize,
    kind: AssignmentKind,
}

impl ChannelAssignment {
    /// Assignment with explicit 1-based per-position types.
    pub fn from_types(types: Vec<usize>, m: usize) -> Result<Self> {
        if types.iter().any(|&t| t == 0 || t > m) {
            return Err(Error::InvalidInput(format!(
                "assignment types must lie in 1..={m}"
            )));
        }
        Ok(ChannelAssignment {
            types,
            m,
            kind: AssignmentKind::Custom,
        })
    }

    pub fn n(&self) -> usize {
        self.types.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> AssignmentKind {
        self.kind
    }

    /// Channel types per position, 1-based values in `1..=m`.
    pub fn types(&self) -> &[usize] {
        &self.types
    }

    /// Zero-based type index of position `i`.
    pub fn type_index(&self, i: usize) -> usize {
        self.types[i] - 1
    }

    /// True when every type is used exactly `N / m` times.
    pub fn is_balanced(&self) -> bool {
        let n = self.n();
        if !n.is_multiple_of(self.m) {
            return false;
        }
        let mut counts = vec![0usize; self.m];
        for &t in &self.types {
            counts[t - 1] += 1;
        }
        counts.iter().all(|&c| c == n / self.m)
    }
}

fn check_divisible(n: usize, m: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput(format!("N = {n}, m = {m} must be positive")));
    }
    if !n.is_multiple_of(m) {
        return Err(Error::InvalidInput(format!(
            "m = {m} does not divide N = {n}; shorten first"
        )));
    }
    Ok(())
}

/// Cyclic assignment: position `i` (1-based) gets type `((i-1) mod m) + 1`.
pub fn interleaver2(n: usize, m: usize) -> Result<ChannelAssignment> {
    check_divisible(n, m)?;
    Ok(ChannelAssignment {
        types: (0..n).map(|i| (i % m) + 1).collect(),
        m,
        kind: AssignmentKind::Interleaver2,
    })
}

/// Contiguous blocks: the first `N/m` positions get type 1, the next `N/m`
/// type 2, and so on.
pub fn interleaver1(n: usize, m: usize) -> Result<ChannelAssignment> {
    check_divisible(n, m)?;
    let block = n / m;
    Ok(ChannelAssignment {
        types: (0..n).map(|i| i / block + 1).collect(),
        m,
        kind: AssignmentKind::Interleaver1,
    })
}

/// Uniformly random balanced assignment (seeded Fisher-Yates shuffle of the
/// type multiset).
pub fn random_interleaver(n: usize, m: usize, seed: u64) -> Result<ChannelAssignment> {
    check_divisible(n, m)?;
    let mut types: Vec<usize> = (0..n).map(|i| i / (n / m) + 1).collect();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    types.shuffle(&mut rng);
    Ok(ChannelAssignment {
        types,
        m,
        kind: AssignmentKind::Random(seed),
    })
}

/// Shortening plan for `m` not dividing `N`.
///
/// The last `N - N_s` codeword positions carry forced zeros whose LLRs are
/// set to the positive sentinel at the decoder. Because the natural-order
/// generator is lower triangular, zeroing the encoder-input tail forces the
/// codeword tail to zero; the frozen positions below are those encoder-tail
/// indices mapped into the synthesized (decoding-order) domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShorteningPlan {
    pub n: usize,
    pub n_short: usize,
    /// Zero-based codeword positions forced to zero (the tail).
    pub shortened_uses: Vec<usize>,
}

/// Shortens length `N` to the largest multiple of `m`.
pub fn shorten(n: usize, m: usize) -> ShorteningPlan {
    let n_short = m * (n / m);
    ShorteningPlan {
        n,
        n_short,
        shortened_uses: (n_short..n).collect(),
    }
}

impl ShorteningPlan {
    /// Synthesized-domain positions that must be frozen to zero.
    pub fn forced_frozen_positions(&self) -> Vec<usize> {
        let log_n = self.n.trailing_zeros();
        let mut positions: Vec<usize> = self
            .shortened_uses
            .iter()
            .map(|&j| bit_reverse(j, log_n))
            .collect();
        positions.sort_unstable();
        positions
    }

    /// Sets the decoder-side LLRs of shortened positions to the sentinel.
    pub fn apply_to_llrs(&self, llrs: &mut [f64]) {
        for &j in &self.shortened_uses {
            llrs[j] = crate::polar::LLR_SENTINEL;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar::{noiseless_llrs, polar_encode, sc_decode, PolarCode};

    #[test]
    fn interleaver2_definition() {
        assert_eq!(interleaver2(8, 2).unwrap().types(), &[1, 2, 1, 2, 1, 2, 1, 2]);
        assert_eq!(interleaver2(8, 4).unwrap().types(), &[1, 2, 3, 4, 1, 2, 3, 4]);
        assert!(interleaver2(8, 3).is_err());
    }

    #[test]
    fn interleaver1_definition() {
        assert_eq!(interleaver1(8, 2).unwrap().types(), &[1, 1, 1, 1, 2, 2, 2, 2]);
        assert_eq!(interleaver1(8, 4).unwrap().types(), &[1, 1, 2, 2, 3, 3, 4, 4]);
    }

    #[test]
    fn assignments_balanced() {
        for (n, m) in [(8, 2), (8, 4), (16, 4), (64, 2), (60, 3)] {
            assert!(interleaver1(n, m).unwrap().is_balanced());
            assert!(interleaver2(n, m).unwrap().is_balanced());
            assert!(random_interleaver(n, m, 5).unwrap().is_balanced());
        }
    }

    #[test]
    fn random_reproducible() {
        let a = random_interleaver(64, 4, 123).unwrap();
        let b = random_interleaver(64, 4, 123).unwrap();
        assert_eq!(a, b);
        let c = random_interleaver(64, 4, 124).unwrap();
        assert_ne!(a.types(), c.types());
    }

    #[test]
    fn shorten_examples() {
        let plan = shorten(8, 3);
        assert_eq!(plan.n_short, 6);
        assert_eq!(plan.shortened_uses, vec![6, 7]);
        let plan = shorten(512, 4);
        assert_eq!(plan.n_short, 512);
        assert!(plan.shortened_uses.is_empty());
    }

    #[test]
    fn shortened_code_round_trips() {
        // Shortened tail code bits must come out zero and SC must invert the
        // encoder noiselessly.
        let n = 16;
        let plan = shorten(n, 3);
        assert_eq!(plan.n_short, 15);
        let forced = plan.forced_frozen_positions();
        let mut mask = vec![false; n];
        for &p in &forced {
            mask[p] = true;
        }
        // Freeze a few more positions arbitrarily to make it a real code.
        mask[0] = true;
        mask[1] = true;
        let code = PolarCode::new(mask, vec![0; n]).unwrap();
        let info: Vec<u8> = (0..code.k()).map(|i| (i % 2) as u8).collect();
        let x = polar_encode(&code, &info).unwrap();
        for &j in &plan.shortened_uses {
            assert_eq!(x[j], 0, "shortened position {j} not zero");
        }
        let mut llrs = noiseless_llrs(&x);
        plan.apply_to_llrs(&mut llrs);
        let res = sc_decode(&code, &llrs).unwrap();
        assert_eq!(res.info_hat, info);
    }
}
