//! Seeded random ensembles. Every generator takes an explicit `ChaCha8Rng`
//! so sweeps are reproducible per seed.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::doc::TripleABC;
use crate::linalg::{ComplexMatrix, C64};
use crate::stochastic::StochasticMatrix;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_gaussian(rng: &mut SeededRng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_block(rng: &mut SeededRng, rows: usize, cols: usize) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = complex_gaussian(rng);
        }
    }
    m
}

pub fn random_matrix(rng: &mut SeededRng, d: usize) -> ComplexMatrix {
    ComplexMatrix::wrap(gaussian_block(rng, d, d))
}

pub fn random_phase(rng: &mut SeededRng) -> C64 {
    C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

pub fn random_phases(rng: &mut SeededRng, d: usize) -> Vec<C64> {
    (0..d).map(|_| random_phase(rng)).collect()
}

pub fn random_signs(rng: &mut SeededRng, d: usize) -> Vec<f64> {
    (0..d).map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 }).collect()
}

/// Independent uniform phases in every entry.
pub fn phase_matrix(rng: &mut SeededRng, d: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d);
    for i in 0..d {
        for j in 0..d {
            m.set(i, j, random_phase(rng));
        }
    }
    m
}

/// `d x k` isometry from the QR factor of a Gaussian block, with the phase
/// of each column fixed by the diagonal of `R` so the law is Haar.
pub fn haar_isometry(rng: &mut SeededRng, d: usize, k: usize) -> DMatrix<C64> {
    let g = gaussian_block(rng, d, k);
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..k {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn haar_unitary(rng: &mut SeededRng, d: usize) -> ComplexMatrix {
    ComplexMatrix::wrap(haar_isometry(rng, d, d))
}

/// `P = V V†` for a Haar `d x k` isometry `V`.
pub fn haar_projection(rng: &mut SeededRng, d: usize, k: usize) -> ComplexMatrix {
    let v = haar_isometry(rng, d, k);
    ComplexMatrix::wrap(&v * v.adjoint())
}

/// Shape of a random stochastic matrix's support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pattern {
    Dense,
    /// Each entry kept with the given probability, at least one per column.
    Sparse(f64),
    /// A random permutation, optionally with a few extra entries.
    Permutation { extra: usize },
    /// Random block structure: a few disjoint groups, each sparse inside,
    /// with some leakage from later groups to earlier ones.
    Blocks,
}

fn normalize_columns(w: &mut [f64], d: usize) {
    for j in 0..d {
        let s: f64 = (0..d).map(|i| w[i * d + j]).sum();
        for i in 0..d {
            w[i * d + j] /= s;
        }
    }
}

fn stochastic_from_weights(w: Vec<f64>, d: usize) -> StochasticMatrix {
    let mut w = w;
    normalize_columns(&mut w, d);
    let m = ComplexMatrix::from_fn(d, |i, j| C64::new(w[i * d + j], 0.0));
    StochasticMatrix::new(m, 1e-12).expect("normalized nonnegative columns")
}

/// Weights bounded away from zero, so every kept entry is a clear nonzero.
fn weight(rng: &mut SeededRng) -> f64 {
    rng.random_range(0.05..1.0)
}

pub fn random_stochastic(rng: &mut SeededRng, d: usize, pattern: Pattern) -> StochasticMatrix {
    let mut w = vec![0.0; d * d];
    match pattern {
        Pattern::Dense => {
            for x in w.iter_mut() {
                *x = weight(rng);
            }
        }
        Pattern::Sparse(p) => {
            for j in 0..d {
                for i in 0..d {
                    if rng.random_bool(p) {
                        w[i * d + j] = weight(rng);
                    }
                }
                if (0..d).all(|i| w[i * d + j] == 0.0) {
                    let i = rng.random_range(0..d);
                    w[i * d + j] = weight(rng);
                }
            }
        }
        Pattern::Permutation { extra } => {
            let perm = random_permutation(rng, d);
            for j in 0..d {
                w[perm[j] * d + j] = 1.0;
            }
            for _ in 0..extra {
                let (i, j) = (rng.random_range(0..d), rng.random_range(0..d));
                w[i * d + j] += weight(rng);
            }
        }
        Pattern::Blocks => {
            let groups = rng.random_range(1..=d.min(3));
            let label: Vec<usize> = (0..d).map(|_| rng.random_range(0..groups)).collect();
            for j in 0..d {
                for i in 0..d {
                    let same = label[i] == label[j];
                    let leak = label[i] < label[j] && rng.random_bool(0.2);
                    if (same && rng.random_bool(0.6)) || leak {
                        w[i * d + j] = weight(rng);
                    }
                }
                if (0..d).all(|i| w[i * d + j] == 0.0) {
                    w[j * d + j] = 1.0;
                }
            }
        }
    }
    stochastic_from_weights(w, d)
}

/// Draws one of the patterns above uniformly, then the matrix.
pub fn random_stochastic_any(rng: &mut SeededRng, d: usize) -> StochasticMatrix {
    let pattern = match rng.random_range(0..4) {
        0 => Pattern::Dense,
        1 => Pattern::Sparse(rng.random_range(0.1..0.6)),
        2 => Pattern::Permutation { extra: rng.random_range(0..=2) },
        _ => Pattern::Blocks,
    };
    random_stochastic(rng, d, pattern)
}

pub fn random_permutation(rng: &mut SeededRng, d: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        let j = rng.random_range(0..=i);
        p.swap(i, j);
    }
    p
}

/// Arbitrary complex triple with equal diagonals; not a channel in general.
pub fn random_triple(rng: &mut SeededRng, d: usize) -> TripleABC {
    let a = random_matrix(rng, d);
    let mut b = random_matrix(rng, d);
    let mut c = random_matrix(rng, d);
    for i in 0..d {
        b.set(i, i, a.get(i, i));
        c.set(i, i, a.get(i, i));
    }
    TripleABC::new(a, b, c).expect("diagonals copied")
}

/// A triple satisfying the channel conditions: `A` stochastic, `B` PSD with
/// `diag B = diag A`, `C` Hermitian with `|C_ij| ≤ sqrt(A_ij A_ji)`.
pub fn random_cptp_triple(rng: &mut SeededRng, d: usize) -> TripleABC {
    let a = random_stochastic_any(rng, d).matrix().clone();
    let b = random_psd_with_diagonal(rng, &a.diagonal().iter().map(|z| z.re).collect::<Vec<_>>());
    let factor = rng_unit(rng);
    let c = random_pair_bounded_hermitian(rng, &a, factor);
    TripleABC::new(a, b, c).expect("diagonals match by construction")
}

fn rng_unit(rng: &mut SeededRng) -> f64 {
    rng.random_range(0.0..=1.0)
}

/// `s B + (1 - s) diag B` with `B = D G G† D` rescaled to the target
/// diagonal; a convex combination of PSD matrices.
pub fn random_psd_with_diagonal(rng: &mut SeededRng, diag: &[f64]) -> ComplexMatrix {
    let d = diag.len();
    let rank = rng.random_range(1..=d);
    let g = gaussian_block(rng, d, rank);
    let m = &g * g.adjoint();
    let scale: Vec<f64> = (0..d).map(|i| (diag[i] / m[(i, i)].re).sqrt()).collect();
    let s = rng_unit(rng);
    ComplexMatrix::from_fn(d, |i, j| {
        if i == j {
            C64::new(diag[i], 0.0)
        } else {
            m[(i, j)] * (scale[i] * scale[j] * s)
        }
    })
}

/// Hermitian, `diag C = diag A`, `|C_ij| = s_ij · factor · sqrt(A_ij A_ji)`
/// with `s_ij` uniform in `[0, 1]` and random phases.
pub fn random_pair_bounded_hermitian(rng: &mut SeededRng, a: &ComplexMatrix, factor: f64) -> ComplexMatrix {
    let d = a.dim();
    let mut c = a.diag_part();
    for i in 0..d {
        for j in i + 1..d {
            let bound = (a.get(i, j).re * a.get(j, i).re).max(0.0).sqrt();
            let z = random_phase(rng) * (rng_unit(rng) * factor * bound);
            c.set(i, j, z);
            c.set(j, i, z.conj());
        }
    }
    c
}

/// Channel triple with one condition broken by a clear margin, or left
/// intact, chosen at random. Returns the triple and which condition (if any)
/// was violated: 0 none, 1 stochastic, 2 PSD, 3 Hermitian, 4 pair bound.
pub fn random_maybe_cptp_triple(rng: &mut SeededRng, d: usize) -> (TripleABC, u8) {
    let t = random_cptp_triple(rng, d);
    let (mut a, mut b, mut c) = (t.a().clone(), t.b().clone(), t.c().clone());
    let kind = if d >= 2 { rng.random_range(0..5u8) } else { rng.random_range(0..2u8) };
    match kind {
        1 => {
            // Column j loses mass but stays nonnegative.
            let j = rng.random_range(0..d);
            let f = rng.random_range(0.5..0.9);
            for i in 0..d {
                a.set(i, j, a.get(i, j) * f);
            }
            for i in 0..d {
                b.set(i, i, a.get(i, i));
                c.set(i, i, a.get(i, i));
            }
        }
        2 => {
            // Break the 2x2 principal minor on {0, 1}.
            let z = C64::new((a.get(0, 0).re * a.get(1, 1).re).sqrt() + 0.05, 0.0);
            b.set(0, 1, z);
            b.set(1, 0, z);
        }
        3 => {
            let z = c.get(0, 1) + random_phase(rng) * 0.05;
            c.set(0, 1, z);
        }
        4 => {
            let bound = (a.get(0, 1).re * a.get(1, 0).re).max(0.0).sqrt();
            let z = random_phase(rng) * (bound + 0.05);
            c.set(0, 1, z);
            c.set(1, 0, z.conj());
        }
        _ => {}
    }
    (TripleABC::new(a, b, c).expect("diagonals kept equal"), kind)
}
