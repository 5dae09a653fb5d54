//! Seeded random operators, states, channels and measurements.
//!
//! All sampling goes through `ChaCha8Rng`, so a seed (and stream index)
//! fully determines the output on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{c, eigh, ComplexMatrix, ComplexVector};
use crate::channel::QuantumChannel;
use crate::operators::{DensityMatrix, HermitianOperator, PureState};
use crate::povm::Povm;

pub type Rng64 = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` under the same seed.
pub fn rng_for_stream(seed: u64, stream: u64) -> Rng64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Matrix of i.i.d. standard complex Gaussians.
pub fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        c(gaussian(rng), gaussian(rng)) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-distributed pure state.
pub fn haar_state(rng: &mut impl Rng, dim: usize) -> PureState {
    loop {
        let v = ComplexVector::from_fn(dim, |_, _| c(gaussian(rng), gaussian(rng)));
        if let Ok(psi) = PureState::normalised(v) {
            return psi;
        }
    }
}

/// GUE sample scaled by `scale`.
pub fn random_hermitian(rng: &mut impl Rng, dim: usize, scale: f64) -> HermitianOperator {
    let g = ginibre(rng, dim, dim);
    HermitianOperator::hermitize((&g + g.adjoint()).scale(0.5 * scale))
}

/// Isometry with orthonormal columns, Haar-distributed (unitary when square).
pub fn random_isometry(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(rows >= cols);
    let qr = ginibre(rng, rows, cols).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..cols {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            c(1.0, 0.0)
        };
        for i in 0..rows {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    random_isometry(rng, dim, dim)
}

/// Random density matrix of the given rank (Wishart construction).
pub fn random_density(rng: &mut impl Rng, dim: usize, rank: usize) -> DensityMatrix {
    let g = ginibre(rng, dim, rank.clamp(1, dim));
    let w = &g * g.adjoint();
    let tr = crate::algebra::trace(&w).re;
    DensityMatrix::from_matrix_unchecked(crate::algebra::hermitian_part(&w.unscale(tr)))
}

/// Channel with `n_kraus` Kraus operators from a Haar-random Stinespring isometry.
pub fn random_channel_with(
    rng: &mut impl Rng,
    dim_in: usize,
    dim_out: usize,
    n_kraus: usize,
) -> QuantumChannel {
    let n_kraus = n_kraus.max(1);
    assert!(
        dim_out * n_kraus >= dim_in,
        "environment too small for an isometry"
    );
    let v = random_isometry(rng, dim_out * n_kraus, dim_in);
    let kraus = (0..n_kraus)
        .map(|k| v.rows(k * dim_out, dim_out).into_owned())
        .collect();
    QuantumChannel::unchecked(kraus).expect("shapes are consistent")
}

/// Channel with 1 to 3 Kraus operators.
pub fn random_channel(rng: &mut impl Rng, dim_in: usize, dim_out: usize) -> QuantumChannel {
    let min = dim_in.div_ceil(dim_out);
    let n = rng.random_range(min.max(1)..=min.max(3));
    random_channel_with(rng, dim_in, dim_out, n)
}

/// POVM with `outcomes` elements `S^{-1/2} W_k S^{-1/2}`, `S = sum W_k`.
pub fn random_povm(rng: &mut impl Rng, dim: usize, outcomes: usize) -> Povm {
    let outcomes = outcomes.max(1);
    let mut ranks: Vec<usize> = (0..outcomes).map(|_| rng.random_range(1..=dim)).collect();
    // the ranks must add up to at least dim for S to be invertible
    let total: usize = ranks.iter().sum();
    if total < dim {
        ranks[outcomes - 1] += dim - total;
    }
    let ws: Vec<ComplexMatrix> = ranks
        .iter()
        .map(|&rank| {
            let g = ginibre(rng, dim, rank);
            &g * g.adjoint()
        })
        .collect();
    let mut s = ComplexMatrix::zeros(dim, dim);
    for w in &ws {
        s += w;
    }
    let inv_sqrt = eigh(&s).map_spectrum(|l| c(1.0 / l.sqrt(), 0.0));
    let elements = ws
        .iter()
        .map(|w| HermitianOperator::hermitize(&inv_sqrt * w * &inv_sqrt))
        .collect();
    Povm::with_default_labels(elements).expect("normalised construction is a POVM")
}
