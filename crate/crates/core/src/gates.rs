//! LDOI bipartite gates: unitarity, dual unitarity, perfection, and the
//! two explicit dual-unitary families plus the cyclically shifted gate.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::doc::{ldoi_matrix, TripleABC};
use crate::error::{Error, Result};
use crate::linalg::{partial_transpose, realign, BipartiteMatrix, ComplexMatrix, Side, C64};
use crate::sampling::{self, SeededRng};

pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateCertificates {
    pub unitary: bool,
    pub dual_unitary: bool,
    pub perfect: bool,
    /// `‖U†U − 𝟙‖_max`.
    pub unitary_residual: f64,
    /// `‖(U^R)†U^R − 𝟙‖_max`.
    pub dual_residual: f64,
    /// `‖(U^Γ)†U^Γ − 𝟙‖_max`, second-factor partial transpose.
    pub transpose_residual: f64,
}

impl GateCertificates {
    pub fn of(u: &BipartiteMatrix) -> Self {
        let unitary_residual = u.matrix().unitarity_residual();
        let dual_residual = realign(u).matrix().unitarity_residual();
        let transpose_residual = partial_transpose(u, Side::Second).matrix().unitarity_residual();
        let unitary = unitary_residual <= UNITARY_TOL;
        let dual_unitary = unitary && dual_residual <= UNITARY_TOL;
        GateCertificates {
            unitary,
            dual_unitary,
            perfect: dual_unitary && transpose_residual <= UNITARY_TOL,
            unitary_residual,
            dual_residual,
            transpose_residual,
        }
    }
}

/// An assembled LDOI matrix with its certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdoiGate {
    pub d: usize,
    pub triple: TripleABC,
    #[serde(skip)]
    matrix: Option<BipartiteMatrix>,
    pub certificates: GateCertificates,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

impl LdoiGate {
    pub fn matrix(&self) -> BipartiteMatrix {
        self.matrix.clone().unwrap_or_else(|| ldoi_matrix(&self.triple))
    }
}

pub fn assemble(t: &TripleABC) -> LdoiGate {
    let m = ldoi_matrix(t);
    LdoiGate { d: t.d(), triple: t.clone(), certificates: GateCertificates::of(&m), matrix: Some(m), seed: None }
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= UNITARY_TOL
}

fn near_zero(z: C64) -> bool {
    z.norm() <= UNITARY_TOL
}

/// Unitarity read off the triple: `B` unitary, and for `i < j` a phase
/// `ω_ij` with `A_ji = ω conj(A_ij)`, `C_ji = −ω conj(C_ij)`, and
/// `|A_ij|² + |C_ij|² = 1`.
pub fn is_unitary_ldoi(t: &TripleABC) -> bool {
    let (a, b, c) = (t.a(), t.b(), t.c());
    if !b.is_unitary(UNITARY_TOL) {
        return false;
    }
    let d = t.d();
    for i in 0..d {
        for j in i + 1..d {
            let (aij, aji, cij, cji) = (a.get(i, j), a.get(j, i), c.get(i, j), c.get(j, i));
            if !close(aij.norm_sqr() + cij.norm_sqr(), 1.0)
                || !close(aij.norm(), aji.norm())
                || !close(cij.norm(), cji.norm())
                || !near_zero(aji * cji.conj() + aij.conj() * cij)
            {
                return false;
            }
        }
    }
    true
}

/// Dual unitarity read off the triple: `A`, `B` unitary,
/// `|A_ij|² = |B_ij|² = 1 − |C_ij|²`, and one phase `ω_ij` with
/// `A_ji = ω conj(A_ij)`, `B_ji = ω conj(B_ij)`, `C_ji = −ω conj(C_ij)`.
pub fn is_dual_unitary_ldoi(t: &TripleABC) -> bool {
    let (a, b, c) = (t.a(), t.b(), t.c());
    if !a.is_unitary(UNITARY_TOL) || !b.is_unitary(UNITARY_TOL) {
        return false;
    }
    let d = t.d();
    for i in 0..d {
        for j in i + 1..d {
            let (aij, aji) = (a.get(i, j), a.get(j, i));
            let (bij, bji) = (b.get(i, j), b.get(j, i));
            let (cij, cji) = (c.get(i, j), c.get(j, i));
            let moduli = close(aij.norm_sqr(), 1.0 - cij.norm_sqr())
                && close(bij.norm_sqr(), 1.0 - cij.norm_sqr())
                && close(aij.norm(), aji.norm())
                && close(bij.norm(), bji.norm())
                && close(cij.norm(), cji.norm());
            // The shared ω, without dividing by possibly vanishing entries.
            let phases = near_zero(aji * cji.conj() + aij.conj() * cij)
                && near_zero(aji * bji.conj() - aij.conj() * bij)
                && near_zero(bji * cji.conj() + bij.conj() * cij);
            if !moduli || !phases {
                return false;
            }
        }
    }
    true
}

/// Both `U^R` and `U^Γ` unitary. `U` itself must be unitary.
pub fn is_perfect(u: &BipartiteMatrix) -> Result<bool> {
    if !u.is_unitary(UNITARY_TOL) {
        return Err(Error::Precondition("perfection is defined for unitary gates".into()));
    }
    Ok(GateCertificates::of(u).perfect)
}

/// `(diag C, diag C, C)` for a phase matrix `C`.
pub fn gen_ldui_dual(phases: &ComplexMatrix) -> Result<TripleABC> {
    let d = phases.dim();
    for i in 0..d {
        for j in 0..d {
            if (phases.get(i, j).norm() - 1.0).abs() > 1e-12 {
                return Err(Error::Precondition(format!("entry ({i},{j}) of C is not a phase")));
            }
        }
    }
    let diag = phases.diag_part();
    TripleABC::new(diag.clone(), diag, phases.clone())
}

/// Default rank `⌈d/2⌉` of the random projections.
pub fn default_projection_rank(d: usize) -> usize {
    d.div_ceil(2).max(1)
}

/// `A = B = 2P − 𝟙`, `diag C = diag A`, `|C_ij|² = 1 − |A_ij|²` with a
/// seeded random phase, and `C_ji = −conj(C_ij)`.
pub fn gen_projection_dual(p: &ComplexMatrix, seed: u64) -> Result<TripleABC> {
    let d = p.dim();
    let p2 = p * p;
    if p2.max_abs_diff(p) > 1e-10 || p.hermiticity_residual() > 1e-10 {
        return Err(Error::Precondition("P is not an orthogonal projection".into()));
    }
    let a = &p.scale_real(2.0) - &ComplexMatrix::identity(d);
    let mut c = a.diag_part();
    let mut rng = sampling::rng(seed);
    for i in 0..d {
        for j in i + 1..d {
            let modulus = (1.0 - a.get(i, j).norm_sqr()).max(0.0).sqrt();
            let z = sampling::random_phase(&mut rng) * modulus;
            c.set(i, j, z);
            c.set(j, i, -z.conj());
        }
    }
    TripleABC::new(a.clone(), a, c)
}

/// `π^s` with `π = Σ_i |i⟩⟨i+1|` (indices mod d).
pub fn shift_permutation(d: usize, s: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, |a, c| C64::new(if c == (a + s) % d { 1.0 } else { 0.0 }, 0.0))
}

/// `(π^s ⊗ 𝟙) U`.
pub fn shift_by(u: &BipartiteMatrix, s: usize) -> BipartiteMatrix {
    let d = u.local_dim();
    BipartiteMatrix::from_entries(d, |a, b, c, e| u.entry((a + s) % d, b, c, e))
}

/// `(π ⊗ 𝟙) X⁽³⁾`, for a dual-unitary triple.
pub fn shift_gate(t: &TripleABC) -> Result<BipartiteMatrix> {
    let x = ldoi_matrix(t);
    if !GateCertificates::of(&x).dual_unitary {
        return Err(Error::Precondition("shift gate needs a dual unitary LDOI triple".into()));
    }
    Ok(shift_by(&x, 1))
}

/// Random unitary LDOI triple with generally non-unitary
/// `A`: `B` Haar, `A_ij = cos θ e^{iα}`, `C_ij = sin θ e^{iβ}`,
/// `A_ji = ω conj(A_ij)`, `C_ji = −ω conj(C_ij)`.
pub fn random_unitary_ldoi(rng: &mut SeededRng, d: usize) -> TripleABC {
    let b = sampling::haar_unitary(rng, d);
    let mut a = b.diag_part();
    let mut c = b.diag_part();
    for i in 0..d {
        for j in i + 1..d {
            let theta: f64 = rng.random_range(0.0..std::f64::consts::FRAC_PI_2);
            let aij = sampling::random_phase(rng) * theta.cos();
            let cij = sampling::random_phase(rng) * theta.sin();
            let omega = sampling::random_phase(rng);
            a.set(i, j, aij);
            a.set(j, i, omega * aij.conj());
            c.set(i, j, cij);
            c.set(j, i, -omega * cij.conj());
        }
    }
    TripleABC::new(a, b, c).expect("diagonals copied from B")
}

/// Families used by the randomized sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    LduiDual,
    ProjectionDual,
    UnitaryLdoi,
    ShiftedLdui,
}

/// One seeded instance of a family; `ShiftedLdui` yields the underlying
/// LDUI triple (shift it with [`shift_gate`]).
pub fn family_instance(family: Family, d: usize, seed: u64) -> TripleABC {
    let mut rng = sampling::rng(seed);
    match family {
        Family::LduiDual | Family::ShiftedLdui => {
            gen_ldui_dual(&sampling::phase_matrix(&mut rng, d)).expect("phase matrix")
        }
        Family::ProjectionDual => {
            let p = sampling::haar_projection(&mut rng, d, default_projection_rank(d));
            gen_projection_dual(&p, rng.random()).expect("Haar projection")
        }
        Family::UnitaryLdoi => random_unitary_ldoi(&mut rng, d),
    }
}

/// Moves `|A_01|² + |C_01|²` to 0.9 by rescaling `C_01`, `C_10`.
pub fn break_pair_norm(t: &TripleABC) -> TripleABC {
    let (a, b, mut c) = (t.a().clone(), t.b().clone(), t.c().clone());
    let target = (0.9 - a.get(0, 1).norm_sqr()).max(0.0).sqrt();
    for (i, j) in [(0, 1), (1, 0)] {
        let z = c.get(i, j);
        let phase = if z.norm() > 0.0 { z / z.norm() } else { C64::new(1.0, 0.0) };
        c.set(i, j, phase * target);
    }
    TripleABC::new(a, b, c).expect("diagonals untouched")
}
