//! The edge channels `Λ±` of a bipartite gate, the closed-form DOC triple
//! of `Λ₊` for LDOI gates, and the circuit verdicts built on them.

use serde::{Deserialize, Serialize};

use crate::doc::{ldoi_triple, ChannelReport, DocChannel, Route, TripleABC};
use crate::error::{Error, Result};
use crate::gates::{GateCertificates, UNITARY_TOL};
use crate::linalg::{self, flip, partial_transpose, realign, BipartiteMatrix, ComplexMatrix, Side, Tolerances, C64};

/// Tolerance for the identity and depolarizing comparisons.
pub const MAP_TOL: f64 = 1e-10;

fn require_unitary(u: &BipartiteMatrix) -> Result<()> {
    if u.is_unitary(UNITARY_TOL) {
        Ok(())
    } else {
        Err(Error::Precondition("gate is not unitary".into()))
    }
}

/// Matrix representation of `Λ₊(U)`, from the Choi matrix
/// `(1/d) F (U_Γ† U_Γ) F` with `U_Γ` the first-factor partial transpose.
/// In the Heisenberg picture `Λ₊(a) = (1/d) Tr₁[U†(a ⊗ 𝟙)U]`.
pub fn lambda_plus_contraction(u: &BipartiteMatrix) -> Result<BipartiteMatrix> {
    require_unitary(u)?;
    let ug = partial_transpose(u, Side::First);
    let f = flip(u.local_dim());
    let j = f.matmul(&ug.adjoint().matmul(&ug)?)?.matmul(&f)?;
    Ok(choi_to_rep(j))
}

/// Matrix representation of `Λ₋(U) = Λ₊(F U F)`: Choi `(1/d)(U^Γ)†U^Γ`
/// with the second-factor partial transpose, i.e.
/// `Λ₋(a) = (1/d) Tr₂[U†(𝟙 ⊗ a)U]`.
pub fn lambda_minus_contraction(u: &BipartiteMatrix) -> Result<BipartiteMatrix> {
    require_unitary(u)?;
    let ug = partial_transpose(u, Side::Second);
    Ok(choi_to_rep(ug.adjoint().matmul(&ug)?))
}

fn choi_to_rep(j: BipartiteMatrix) -> BipartiteMatrix {
    let d = j.local_dim() as f64;
    let j = BipartiteMatrix::new(j.local_dim(), j.matrix().scale_real(1.0 / d)).expect("same shape");
    realign(&j)
}

/// `(𝒜, ℬ, 𝒞)` with `Φ⁽³⁾_(𝒜,ℬ,𝒞) = Λ₊(X⁽³⁾_(A,B,C))`.
pub fn lambda_plus_closed_form(t: &TripleABC) -> Result<TripleABC> {
    if !crate::gates::assemble(t).certificates.unitary {
        return Err(Error::Precondition("LDOI gate is not unitary".into()));
    }
    let d = t.d();
    let (a, b, c) = (t.a(), t.b(), t.c());
    let ccbar = c.conj().matmul(&c.transpose())?;
    let diag = ComplexMatrix::from_fn(d, |i, j| {
        if i == j {
            ccbar.get(i, i) - c.get(i, i).norm_sqr() * 2.0
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let s = 1.0 / d as f64;
    let a_new = ComplexMatrix::from_fn(d, |i, j| {
        s * (a.get(j, i) * a.get(j, i).conj() + b.get(j, i) * b.get(j, i).conj() + diag.get(i, j))
    });
    let c_new = ComplexMatrix::from_fn(d, |i, j| {
        s * (a.get(i, j) * b.get(j, i).conj() + a.get(j, i).conj() * b.get(i, j) + diag.get(i, j))
    });
    TripleABC::new(a_new, ccbar.scale_real(s), c_new)
}

/// `max_X ‖Φ(𝟙) − 𝟙‖` and `max_kl |Tr Φ(E_kl) − δ_kl|` for a matrix representation.
pub fn unital_tp_residuals(m: &BipartiteMatrix) -> (f64, f64) {
    let d = m.local_dim();
    let id = ComplexMatrix::identity(d);
    let unital = m.apply_map(&id).expect("square").max_abs_diff(&id);
    let mut tp: f64 = 0.0;
    for k in 0..d {
        for l in 0..d {
            let tr: C64 = (0..d).map(|i| m.entry(i, i, k, l)).sum();
            let want = if k == l { 1.0 } else { 0.0 };
            tp = tp.max((tr - want).norm());
        }
    }
    (unital, tp)
}

/// Matrix representation of `X ↦ Tr(X) 𝟙/d`.
pub fn depolarizing_rep(d: usize) -> BipartiteMatrix {
    let v = 1.0 / d as f64;
    BipartiteMatrix::from_entries(d, |i, j, k, l| C64::new(if i == j && k == l { v } else { 0.0 }, 0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitVerdict {
    pub non_interacting: bool,
    pub ergodic: bool,
    pub mixing: bool,
    pub bernoulli: bool,
    pub constant_modes: usize,
    pub nondecaying_modes: usize,
    pub channel_report: ChannelReport,
    pub certificates: GateCertificates,
    /// `(𝒜, ℬ, 𝒞)` when the gate is LDOI.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub closed_form: Option<TripleABC>,
}

/// Classifies the circuit of a dual-unitary gate through `Λ₊`. LDOI gates
/// go through the closed-form triple and the digraph of `𝒜`.
pub fn classify_circuit(u: &BipartiteMatrix, tol: &Tolerances) -> Result<CircuitVerdict> {
    let certificates = GateCertificates::of(u);
    if !certificates.dual_unitary {
        return Err(Error::Precondition("circuit classification requires a dual unitary gate".into()));
    }
    let d = u.local_dim();
    let m = lambda_plus_contraction(u)?;
    let non_interacting = m.max_abs_diff(&BipartiteMatrix::identity(d)) <= MAP_TOL;
    let bernoulli = m.max_abs_diff(&depolarizing_rep(d)) <= MAP_TOL;

    let (t, residual) = ldoi_triple(u);
    let (report, closed_form) = if residual <= 1e-12 {
        let cf = lambda_plus_closed_form(&t)?;
        let report = match DocChannel::map(cf.clone()).certified() {
            Ok(ch) => ch.classify(tol)?,
            Err(_) => DocChannel::map(cf.clone()).classify_map(tol)?,
        };
        (report, Some(cf))
    } else {
        (spectral_report(&m, tol)?, None)
    };
    Ok(CircuitVerdict {
        non_interacting,
        ergodic: report.irreducible,
        mixing: report.primitive,
        bernoulli,
        constant_modes: report.constant_mode_count,
        nondecaying_modes: report.nondecaying_mode_count,
        channel_report: report,
        certificates,
        closed_form,
    })
}

/// Report for a general unital channel: `𝟙/d` is a full-rank fixed point,
/// so irreducible and primitive reduce to the spectral conditions.
fn spectral_report(m: &BipartiteMatrix, tol: &Tolerances) -> Result<ChannelReport> {
    let d = m.local_dim();
    let spec = linalg::eigenvalues(m.matrix(), tol)?;
    let ergodic = spec.unit_multiplicity == 1;
    let mixing = ergodic && spec.peripheral_count() == 1;
    let stationary = ergodic.then(|| ComplexMatrix::identity(d).scale_real(1.0 / d as f64));
    Ok(ChannelReport::assemble(Route::Spectral, d, [ergodic, mixing, ergodic, mixing], stationary, spec, Vec::new(), None))
}

/// For the shifted LDUI gate `(π ⊗ 𝟙)X⁽³⁾_(diag C, diag C, C)`: entry `k-1`
/// is `Π_m ℬ_{m, m+k}` (indices mod d), the product of `ℬ = C̄Cᵀ/d` along
/// the orbit of `|m⟩⟨m+k|`. The d-th powers of the `Λ₊` eigenvalues on
/// that orbit equal it.
pub fn cycle_eigenvalue_products(t: &TripleABC) -> Vec<C64> {
    let d = t.d();
    let c = t.c();
    let s = 1.0 / d as f64;
    let bcal = |k: usize, l: usize| -> C64 { (0..d).map(|m| c.get(k, m).conj() * c.get(l, m)).sum::<C64>() * s };
    (1..d).map(|k| (0..d).map(|m| bcal(m, (m + k) % d)).product()).collect()
}
