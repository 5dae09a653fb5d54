#![allow(dead_code)]

use qfisher::algebra::sigma_z;
use qfisher::random::{random_channel, random_hermitian, rng_from_seed, Rng64};
use qfisher::{HermitianOperator, QuantumChannel};
use rand::Rng;

pub fn half_sz() -> HermitianOperator {
    HermitianOperator::new(sigma_z().scale(0.5)).unwrap()
}

/// Random channel on `dim` (dims 2..=4 when `dim` is None) plus a random generator.
pub fn random_scenario(
    seed: u64,
    dim: Option<usize>,
) -> (Rng64, QuantumChannel, HermitianOperator) {
    let mut rng = rng_from_seed(seed);
    let d = dim.unwrap_or_else(|| rng.random_range(2..=4));
    let ch = random_channel(&mut rng, d, d);
    let h = random_hermitian(&mut rng, d, 1.0);
    (rng, ch, h)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}
