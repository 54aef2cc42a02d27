//! Seeded random instances for the verification suites.
//!
//! Infinite objects (weight sequences, banded matrices) draw each entry from
//! its own generator seeded by `(seed, index)`, so entry values do not depend
//! on evaluation order.

use bvspaces::banded::BandedMatrix;
use bvspaces::builders::{RieszWeights, WeightPair};
use bvspaces::rational::frac;
use bvspaces::{Rational, Seq};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn entry_rng(seed: u64, n: usize, k: usize) -> StdRng {
    let mut z = seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (k as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    // splitmix64 finalizer
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    StdRng::seed_from_u64(z ^ (z >> 31))
}

fn small(rng: &mut StdRng, nonzero: bool, positive: bool) -> Rational {
    let den = rng.gen_range(1..=6);
    loop {
        let num: i64 = if positive { rng.gen_range(1..=9) } else { rng.gen_range(-9..=9) };
        if num != 0 || !nonzero {
            return frac(num, den);
        }
    }
}

/// A lazily drawn sequence with small rational terms.
pub fn hashed_seq(seed: u64, nonzero: bool, positive: bool) -> Seq {
    Seq::from_fn(format!("random#{seed:x}"), move |k| small(&mut entry_rng(seed, k, usize::MAX), nonzero, positive))
}

pub fn weight_pair(rng: &mut StdRng) -> WeightPair {
    WeightPair::new(hashed_seq(rng.gen(), true, false), hashed_seq(rng.gen(), true, false))
}

pub fn riesz_weights(rng: &mut StdRng) -> RieszWeights {
    RieszWeights::new(hashed_seq(rng.gen(), true, true))
}

/// A finitely supported sequence of length `1..=max_len`.
pub fn finite_seq(rng: &mut StdRng, max_len: usize) -> Seq {
    let len = rng.gen_range(1..=max_len);
    let terms = (0..len).map(|_| small(rng, false, false)).collect();
    Seq::finite("random finite", terms)
}

/// A row-finite matrix with a random band `[n-below, n+above]`.
pub fn banded(rng: &mut StdRng) -> BandedMatrix {
    let seed: u64 = rng.gen();
    let below = rng.gen_range(0..=3);
    let above = rng.gen_range(0..=2);
    BandedMatrix::from_band(format!("band[{below},{above}]#{seed:x}"), below, above, move |n, k| {
        Ok(small(&mut entry_rng(seed, n, k), false, false))
    })
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}
