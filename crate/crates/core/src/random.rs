//! Seeded random differential modules over `k[t]` with known homology.
//!
//! A sample is a block sum of bars `[[0, t^q], [0, 0]]` on generators
//! `(p, p + q)` and contractible blocks `[[0, 1], [0, 0]]` on `(p, p)`,
//! conjugated by random graded elementary automorphisms, rescalings and a
//! permutation. The barcode is known by construction and the module has
//! finite-length homology.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dm::FreeDM;
use crate::error::Result;
use crate::kt::Barcode;
use crate::poly::{Poly, Ring};
use crate::rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomKtParams {
    pub max_bars: usize,
    pub max_units: usize,
    pub start_degrees: (i64, i64),
    pub max_length: u32,
    pub mixing_steps: usize,
}

impl Default for RandomKtParams {
    fn default() -> Self {
        RandomKtParams { max_bars: 4, max_units: 2, start_degrees: (-2, 3), max_length: 3, mixing_steps: 8 }
    }
}

#[derive(Debug, Clone)]
pub struct RandomKt {
    pub dm: FreeDM,
    pub barcode: Barcode,
}

fn block(p: i64, q: u32) -> FreeDM {
    let entry = if q == 0 { Poly::one(Ring::Univariate) } else { Poly::var_power(Ring::Univariate, rational::int(1), 0, q) };
    let z = || Poly::zero(Ring::Univariate);
    FreeDM::new(Ring::Univariate, 0, vec![p, p + q as i64], vec![vec![z(), entry], vec![z(), z()]])
        .expect("2x2 block is well formed")
}

fn push(b: FreeDM, dm: &mut Option<FreeDM>) -> Result<()> {
    *dm = Some(match dm.take() {
        None => b,
        Some(d) => d.direct_sum(&b)?,
    });
    Ok(())
}

fn nonzero_coefficient(rng: &mut ChaCha8Rng) -> i64 {
    let c = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        -c
    } else {
        c
    }
}

pub fn random_kt(rng: &mut ChaCha8Rng, params: &RandomKtParams) -> Result<RandomKt> {
    let (lo, hi) = params.start_degrees;
    let bars = rng.gen_range(1..=params.max_bars.max(1));
    let units = rng.gen_range(0..=params.max_units);
    let mut barcode = Barcode::new();
    let mut dm: Option<FreeDM> = None;
    for _ in 0..bars {
        let p = rng.gen_range(lo..=hi);
        let q = rng.gen_range(1..=params.max_length.max(1));
        barcode.add(p, q, 1);
        push(block(p, q), &mut dm)?;
    }
    for _ in 0..units {
        let p = rng.gen_range(lo..=hi);
        push(block(p, 0), &mut dm)?;
    }
    let mut dm = dm.expect("at least one bar");

    let n = dm.rank();
    for _ in 0..params.mixing_steps {
        let r = rng.gen_range(0..n);
        let c = rng.gen_range(0..n);
        if r == c {
            continue;
        }
        let k = dm.gens()[c] - dm.gens()[r];
        if k < 0 {
            continue;
        }
        let f = Poly::var_power(Ring::Univariate, rational::int(nonzero_coefficient(rng)), 0, k as u32);
        dm = dm.conjugate_elementary(r, c, &f)?;
        if rng.gen_bool(0.3) {
            let i = rng.gen_range(0..n);
            dm = dm.conjugate_scaling(i, &rational::int(nonzero_coefficient(rng)));
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    dm = dm.permuted(&perm);
    Ok(RandomKt { dm, barcode })
}

/// `count` samples from a seeded stream.
pub fn random_kt_batch(seed: u64, count: usize, params: &RandomKtParams) -> Result<Vec<RandomKt>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_kt(&mut rng, params)).collect()
}
