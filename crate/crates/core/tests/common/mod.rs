//! Seeded random inputs shared by the integration suites.
#![allow(dead_code)]

use lnat::lattice::DiscreteBox;
use lnat::rat::{int, rat, Rational};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational in `[lo, hi]` with denominator at most `max_den`.
pub fn rational_in(r: &mut impl Rng, lo: i64, hi: i64, max_den: i64) -> Rational {
    let d = r.random_range(1..=max_den);
    let k = r.random_range(0..=(hi - lo) * d);
    int(lo) + rat(k, d)
}

/// A point of the relaxed box, with at least one fractional coordinate
/// whenever the box allows it.
pub fn fractional_point(r: &mut impl Rng, bx: &DiscreteBox) -> Vec<Rational> {
    let (lo, hi) = bx.finite_bounds().expect("finite box");
    loop {
        let x: Vec<Rational> = lo.iter().zip(&hi).map(|(&l, &u)| rational_in(r, l, u, 7)).collect();
        if x.iter().any(|v| !v.is_integer()) || lo == hi {
            return x;
        }
    }
}

pub fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}
