//! Diagonal-orthogonal-covariant maps `Φ(X) = diag(A|diag X⟩) + B̃⊙X + C̃⊙Xᵀ`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{
    self, realign, singular_vectors_ascending, BipartiteMatrix, ComplexMatrix, SpectrumResult, Tolerances, C64,
};
use crate::sampling;
use crate::stochastic::{self, StochasticMatrix, StochasticReport};

const DIAG_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-10;
const PAIR_TOL: f64 = 1e-12;

/// `(A, B, C)` with `diag A = diag B = diag C`.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleABC {
    a: ComplexMatrix,
    b: ComplexMatrix,
    c: ComplexMatrix,
}

impl TripleABC {
    pub fn new(a: ComplexMatrix, b: ComplexMatrix, c: ComplexMatrix) -> Result<Self> {
        if a.dim() != b.dim() || a.dim() != c.dim() {
            return Err(Error::Dimension(format!("A, B, C have sizes {}, {}, {}", a.dim(), b.dim(), c.dim())));
        }
        for i in 0..a.dim() {
            let (x, y, z) = (a.get(i, i), b.get(i, i), c.get(i, i));
            if (x - y).norm() > DIAG_TOL || (x - z).norm() > DIAG_TOL {
                return Err(Error::InvalidMatrix(format!("diagonals of A, B, C differ at index {i}")));
            }
        }
        Ok(TripleABC { a, b, c })
    }

    pub fn from_real_rows(a: &[&[f64]], b: &[&[f64]], c: &[&[f64]]) -> Result<Self> {
        Self::new(
            ComplexMatrix::from_real_rows(a)?,
            ComplexMatrix::from_real_rows(b)?,
            ComplexMatrix::from_real_rows(c)?,
        )
    }

    /// `(𝟙, J, 𝟙)`: the identity channel.
    pub fn identity(d: usize) -> Self {
        TripleABC { a: ComplexMatrix::identity(d), b: ComplexMatrix::ones(d), c: ComplexMatrix::identity(d) }
    }

    /// `(J/d, 𝟙/d, 𝟙/d)`: `X ↦ Tr(X) 𝟙/d`.
    pub fn depolarizing(d: usize) -> Self {
        let s = 1.0 / d as f64;
        TripleABC {
            a: ComplexMatrix::ones(d).scale_real(s),
            b: ComplexMatrix::identity(d).scale_real(s),
            c: ComplexMatrix::identity(d).scale_real(s),
        }
    }

    pub fn d(&self) -> usize {
        self.a.dim()
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn b(&self) -> &ComplexMatrix {
        &self.b
    }

    pub fn c(&self) -> &ComplexMatrix {
        &self.c
    }

    /// `(B, A, C)`.
    pub fn swap_ab(&self) -> Self {
        TripleABC { a: self.b.clone(), b: self.a.clone(), c: self.c.clone() }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.a
            .max_abs_diff(&other.a)
            .max(self.b.max_abs_diff(&other.b))
            .max(self.c.max_abs_diff(&other.c))
    }
}

#[derive(Serialize, Deserialize)]
struct TripleJson {
    d: usize,
    #[serde(rename = "A")]
    a: ComplexMatrix,
    #[serde(rename = "B")]
    b: ComplexMatrix,
    #[serde(rename = "C")]
    c: ComplexMatrix,
}

impl Serialize for TripleABC {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TripleJson { d: self.d(), a: self.a.clone(), b: self.b.clone(), c: self.c.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TripleABC {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = TripleJson::deserialize(d)?;
        if j.a.dim() != j.d {
            return Err(D::Error::custom(format!("d = {} but A is {}x{}", j.d, j.a.dim(), j.a.dim())));
        }
        TripleABC::new(j.a, j.b, j.c).map_err(D::Error::custom)
    }
}

/// `X⁽³⁾ = Σ A_ij|ij⟩⟨ij| + Σ_{i≠j} B_ij|ii⟩⟨jj| + Σ_{i≠j} C_ij|ij⟩⟨ji|`.
pub fn ldoi_matrix(t: &TripleABC) -> BipartiteMatrix {
    let d = t.d();
    let mut x = BipartiteMatrix::zeros(d);
    for i in 0..d {
        for j in 0..d {
            x.set_entry(i, j, i, j, t.a.get(i, j));
            if i != j {
                x.set_entry(i, i, j, j, t.b.get(i, j));
                x.set_entry(i, j, j, i, t.c.get(i, j));
            }
        }
    }
    x
}

/// Reads `(A, B, C)` back off an LDOI matrix; the residual is the largest
/// entry outside the LDOI pattern.
pub fn ldoi_triple(x: &BipartiteMatrix) -> (TripleABC, f64) {
    let d = x.local_dim();
    let a = ComplexMatrix::from_fn(d, |i, j| x.entry(i, j, i, j));
    let b = ComplexMatrix::from_fn(d, |i, j| if i == j { x.entry(i, i, i, i) } else { x.entry(i, i, j, j) });
    let c = ComplexMatrix::from_fn(d, |i, j| if i == j { x.entry(i, i, i, i) } else { x.entry(i, j, j, i) });
    let t = TripleABC { a, b, c };
    let residual = x.max_abs_diff(&ldoi_matrix(&t));
    (t, residual)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// Covariant under diagonal orthogonals.
    Doc,
    /// `Φ(UXU†) = U†Φ(X)U` for diagonal unitaries; triple `(A, diag C, C)`.
    Duc,
    /// `Φ(UXU†) = UΦ(X)U†` for diagonal unitaries; triple `(A, B, diag B)`.
    Cduc,
}

/// Outcome of the channel test on a triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CptpDiagnostics {
    pub cptp: bool,
    pub stochastic: bool,
    pub b_psd: bool,
    pub c_hermitian: bool,
    pub pair_bound: bool,
    pub min_b_eigenvalue: f64,
    pub c_hermiticity_residual: f64,
    /// `min_{i<j} A_ij A_ji - |C_ij|²`.
    pub worst_pair_margin: f64,
    pub first_violation: Option<String>,
}

pub fn is_cptp(t: &TripleABC) -> CptpDiagnostics {
    let d = t.d();
    let tol = Tolerances::default();
    let stochastic_err = StochasticMatrix::new(t.a.clone(), tol.zero).err();

    let b_herm = t.b.hermiticity_residual();
    let min_b_eigenvalue = linalg::hermitian_eigenvalues(&t.b).map(|v| v[0]).unwrap_or(f64::NEG_INFINITY);
    let b_psd = b_herm <= HERMITIAN_TOL && min_b_eigenvalue >= -PSD_TOL;

    let c_hermiticity_residual = t.c.hermiticity_residual();
    let c_hermitian = c_hermiticity_residual <= HERMITIAN_TOL;

    let mut worst_pair_margin = f64::INFINITY;
    let mut worst_pair = None;
    for i in 0..d {
        for j in i + 1..d {
            let margin = (t.a.get(i, j) * t.a.get(j, i)).re - t.c.get(i, j).norm_sqr();
            if margin < worst_pair_margin {
                worst_pair_margin = margin;
                worst_pair = Some((i, j));
            }
        }
    }
    let pair_bound = worst_pair_margin >= -PAIR_TOL;

    let first_violation = if let Some(e) = &stochastic_err {
        Some(format!("A is not column stochastic: {e}"))
    } else if !b_psd {
        Some(format!(
            "B is not positive semi-definite (hermiticity residual {b_herm:e}, min eigenvalue {min_b_eigenvalue:e})"
        ))
    } else if !c_hermitian {
        Some(format!("C is not Hermitian (residual {c_hermiticity_residual:e})"))
    } else if !pair_bound {
        let (i, j) = worst_pair.expect("pair recorded");
        Some(format!("A_ij A_ji < |C_ij|^2 at (i, j) = ({}, {}), margin {worst_pair_margin:e}", i + 1, j + 1))
    } else {
        None
    };

    CptpDiagnostics {
        cptp: first_violation.is_none(),
        stochastic: stochastic_err.is_none(),
        b_psd,
        c_hermitian,
        pair_bound,
        min_b_eigenvalue,
        c_hermiticity_residual,
        worst_pair_margin: if d < 2 { 0.0 } else { worst_pair_margin },
        first_violation,
    }
}

/// A DOC map, optionally certified as a channel.
#[derive(Debug, Clone, PartialEq)]
pub struct DocChannel {
    triple: TripleABC,
    flavor: Flavor,
    certificate: Option<CptpDiagnostics>,
}

impl DocChannel {
    /// Any DOC map, no channel certificate.
    pub fn map(triple: TripleABC) -> Self {
        DocChannel { triple, flavor: Flavor::Doc, certificate: None }
    }

    /// Requires the channel conditions; fails with the first violated one.
    pub fn channel(triple: TripleABC) -> Result<Self> {
        DocChannel::map(triple).certified()
    }

    /// `Φ⁽¹⁾_(A,C)`, embedded as `(A, diag C, C)`.
    pub fn duc(a: ComplexMatrix, c: ComplexMatrix) -> Result<Self> {
        let b = c.diag_part();
        Ok(DocChannel { triple: TripleABC::new(a, b, c)?, flavor: Flavor::Duc, certificate: None })
    }

    /// `Φ⁽²⁾_(A,B)`, embedded as `(A, B, diag B)`.
    pub fn cduc(a: ComplexMatrix, b: ComplexMatrix) -> Result<Self> {
        let c = b.diag_part();
        Ok(DocChannel { triple: TripleABC::new(a, b, c)?, flavor: Flavor::Cduc, certificate: None })
    }

    pub fn certified(mut self) -> Result<Self> {
        let diag = is_cptp(&self.triple);
        if let Some(v) = &diag.first_violation {
            return Err(Error::Precondition(format!("not a channel: {v}")));
        }
        self.certificate = Some(diag);
        Ok(self)
    }

    pub fn triple(&self) -> &TripleABC {
        &self.triple
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn certificate(&self) -> Option<&CptpDiagnostics> {
        self.certificate.as_ref()
    }

    pub fn d(&self) -> usize {
        self.triple.d()
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let d = self.d();
        if x.dim() != d {
            return Err(Error::Dimension(format!("channel on {d}x{d} applied to {}x{}", x.dim(), x.dim())));
        }
        let t = &self.triple;
        Ok(ComplexMatrix::from_fn(d, |i, j| {
            if i == j {
                (0..d).map(|k| t.a.get(i, k) * x.get(k, k)).sum()
            } else {
                t.b.get(i, j) * x.get(i, j) + t.c.get(i, j) * x.get(j, i)
            }
        }))
    }

    pub fn choi(&self) -> BipartiteMatrix {
        ldoi_matrix(&self.triple)
    }

    /// `M(Φ) = J(Φ)^R = X⁽³⁾_(B,A,C)`.
    pub fn matrix_rep(&self) -> BipartiteMatrix {
        realign(&self.choi())
    }

    /// `spec A` together with every 2x2 block `[[B_ij, C_ij], [C_ji, B_ji]]`.
    pub fn spectrum(&self, tol: &Tolerances) -> Result<SpectrumResult> {
        Ok(SpectrumResult::from_eigenvalues(self.raw_spectrum()?, tol))
    }

    fn raw_spectrum(&self) -> Result<Vec<C64>> {
        let t = &self.triple;
        let d = self.d();
        let mut eig = linalg::raw_eigenvalues(&t.a)?;
        for i in 0..d {
            for j in i + 1..d {
                let (p, m) = block_eigenvalues(t.b.get(i, j), t.c.get(i, j), t.c.get(j, i), t.b.get(j, i));
                eig.push(p);
                eig.push(m);
            }
        }
        Ok(eig)
    }

    pub fn eigenmatrices(&self) -> Result<Eigenmatrices> {
        let t = &self.triple;
        let d = self.d();
        let mut pairs = Vec::new();
        let mut defective = false;

        // Diagonal eigenmatrices from A, one eigenvalue cluster at a time.
        let mut eig = linalg::raw_eigenvalues(&t.a)?;
        linalg::sort_spectrum(&mut eig);
        let scale = t.a.max_norm().max(1.0);
        let mut k = 0;
        while k < eig.len() {
            let mut cluster = vec![eig[k]];
            while k + cluster.len() < eig.len() && (eig[k + cluster.len()] - eig[k]).norm() <= 1e-6 * scale {
                cluster.push(eig[k + cluster.len()]);
            }
            let mu = cluster.iter().sum::<C64>() / cluster.len() as f64;
            let shifted = &t.a - &ComplexMatrix::identity(d).scale(mu);
            let vecs: Vec<_> = singular_vectors_ascending(&shifted)
                .into_iter()
                .take(cluster.len())
                .filter(|(s, _)| *s <= 1e-6 * scale)
                .collect();
            if vecs.len() < cluster.len() {
                defective = true;
            }
            for (_, v) in vecs {
                let m = ComplexMatrix::from_diagonal(&v);
                if self.residual_ok(mu, &m)? {
                    pairs.push((mu, m));
                } else {
                    defective = true;
                }
            }
            k += cluster.len();
        }

        // Off-diagonal eigenmatrices v1|i⟩⟨j| + v2|j⟩⟨i| from each block.
        for i in 0..d {
            for j in i + 1..d {
                let (b1, c1, c2, b2) = (t.b.get(i, j), t.c.get(i, j), t.c.get(j, i), t.b.get(j, i));
                let block_scale = b1.norm().max(c1.norm()).max(c2.norm()).max(b2.norm()).max(1.0);
                let (lp, lm) = block_eigenvalues(b1, c1, c2, b2);
                let scalar = c1.norm() <= 1e-12 * block_scale
                    && c2.norm() <= 1e-12 * block_scale
                    && (b1 - b2).norm() <= 1e-12 * block_scale;
                let unit = |v1: C64, v2: C64| {
                    let mut m = ComplexMatrix::zeros(d);
                    m.set(i, j, v1);
                    m.set(j, i, v2);
                    m
                };
                let mut candidates = Vec::new();
                if scalar {
                    candidates.push((b1, unit(C64::new(1.0, 0.0), C64::new(0.0, 0.0))));
                    candidates.push((b2, unit(C64::new(0.0, 0.0), C64::new(1.0, 0.0))));
                } else {
                    let repeated = (lp - lm).norm() <= 1e-10 * block_scale;
                    let lambdas: &[C64] = if repeated { &[lp] } else { &[lp, lm] };
                    if repeated {
                        defective = true;
                    }
                    for &lam in lambdas {
                        let (x1, x2) = (c1, lam - b1);
                        let (y1, y2) = (lam - b2, c2);
                        let (v1, v2) = if x1.norm_sqr() + x2.norm_sqr() >= y1.norm_sqr() + y2.norm_sqr() {
                            (x1, x2)
                        } else {
                            (y1, y2)
                        };
                        let n = (v1.norm_sqr() + v2.norm_sqr()).sqrt();
                        candidates.push((lam, unit(v1 / n, v2 / n)));
                    }
                }
                for (lam, m) in candidates {
                    if self.residual_ok(lam, &m)? {
                        pairs.push((lam, m));
                    } else {
                        defective = true;
                    }
                }
            }
        }
        Ok(Eigenmatrices { pairs, defective })
    }

    fn residual_ok(&self, lambda: C64, m: &ComplexMatrix) -> Result<bool> {
        let r = self.apply(m)?.max_abs_diff(&m.scale(lambda));
        Ok(r <= 1e-8 * m.max_norm())
    }

    /// Requires the channel certificate.
    pub fn classify(&self, tol: &Tolerances) -> Result<ChannelReport> {
        if self.certificate.is_none() {
            return Err(Error::Precondition("classification requires a certified channel".into()));
        }
        let t = &self.triple;
        let d = self.d();
        let a = StochasticMatrix::new(t.a.clone(), tol.zero)?;
        let core = stochastic::classify_stochastic(&a, tol)?;

        let mut pairs = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                let (plus, minus) = lambda_pm(&t.b, &t.c, i, j)?;
                pairs.push(LambdaPair { i: i + 1, j: j + 1, plus, minus });
            }
        }
        let lambda_unit = pairs.iter().any(|p| (p.plus - 1.0).norm() <= tol.eig || (p.minus - 1.0).norm() <= tol.eig);
        let lambda_peripheral = pairs.iter().any(|p| p.plus.norm() >= 1.0 - tol.peri || p.minus.norm() >= 1.0 - tol.peri);

        let ergodic = core.ergodic && !lambda_unit;
        let mixing = core.mixing && !lambda_peripheral;
        let (irreducible, primitive) = if d == 2 {
            (core.irreducible && !lambda_unit, core.primitive && !lambda_peripheral)
        } else {
            (core.irreducible, core.primitive)
        };

        let spec = self.spectrum(tol)?;
        let stationary_state = if ergodic {
            let pi = core.stationary.as_ref().expect("ergodic core has a stationary vector");
            Some(ComplexMatrix::from_diagonal(&pi.iter().map(|&p| C64::new(p, 0.0)).collect::<Vec<_>>()))
        } else {
            None
        };
        Ok(ChannelReport::assemble(
            Route::Core,
            d,
            [ergodic, mixing, irreducible, primitive],
            stationary_state,
            spec,
            pairs,
            Some(core),
        ))
    }

    /// Classification straight from the block spectrum, for DOC maps that
    /// are not channels (e.g. non-Hermitian `B`, `C`). Irreducible and
    /// primitive additionally require the fixed point to be a positive
    /// definite diagonal matrix.
    pub fn classify_map(&self, tol: &Tolerances) -> Result<ChannelReport> {
        let t = &self.triple;
        let d = self.d();
        let spec = self.spectrum(tol)?;
        let ergodic = spec.unit_multiplicity == 1;
        let mixing = ergodic && spec.peripheral_count() == 1;

        let mut stationary_state = None;
        if ergodic {
            let em = self.eigenmatrices()?;
            let fixed = em
                .pairs
                .iter()
                .find(|(l, m)| (l - 1.0).norm() <= tol.eig && m.off_diag_part().max_norm() == 0.0);
            if let Some((_, m)) = fixed {
                let tr = m.trace();
                if tr.norm() > tol.zero {
                    let rho = m.scale(1.0 / tr);
                    let diag = rho.diagonal();
                    if diag.iter().all(|z| z.im.abs() <= 1e-9 && z.re >= -1e-9) {
                        stationary_state = Some(ComplexMatrix::from_diagonal(
                            &diag.iter().map(|z| C64::new(z.re.max(0.0), 0.0)).collect::<Vec<_>>(),
                        ));
                    }
                }
            }
        }
        let full_rank = stationary_state.as_ref().is_some_and(|s| s.diagonal().iter().all(|z| z.re > 1e-9));
        let irreducible = ergodic && full_rank;
        let primitive = mixing && full_rank;

        let mut pairs = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                let (plus, minus) = block_eigenvalues(t.b.get(i, j), t.c.get(i, j), t.c.get(j, i), t.b.get(j, i));
                pairs.push(LambdaPair { i: i + 1, j: j + 1, plus, minus });
            }
        }
        let core = StochasticMatrix::new(t.a.clone(), tol.zero)
            .ok()
            .map(|a| stochastic::classify_stochastic(&a, tol))
            .transpose()?;
        Ok(ChannelReport::assemble(
            Route::Spectral,
            d,
            [ergodic, mixing, irreducible, primitive],
            stationary_state,
            spec,
            pairs,
            core,
        ))
    }

    /// `(1/n) Σ_{k<n} M(Φ)^k`.
    pub fn cesaro(&self, n: usize) -> Result<BipartiteMatrix> {
        if n == 0 {
            return Err(Error::Precondition("cesaro average needs n ≥ 1".into()));
        }
        let m = self.matrix_rep();
        let dd = m.matrix().dim();
        let mut power = ComplexMatrix::identity(dd);
        let mut sum = ComplexMatrix::zeros(dd);
        for _ in 0..n {
            sum = &sum + &power;
            power = &power * m.matrix();
        }
        BipartiteMatrix::new(self.d(), sum.scale_real(1.0 / n as f64))
    }

    /// Randomized covariance test matching the flavor.
    pub fn check_covariance(&self, trials: usize, seed: u64) -> Result<bool> {
        check_covariance_with(|x| self.apply(x), self.d(), self.flavor, trials, seed)
    }
}

/// Tests `f` against random diagonal signs (DOC) or phases (DUC, CDUC).
pub fn check_covariance_with(
    f: impl Fn(&ComplexMatrix) -> Result<ComplexMatrix>,
    d: usize,
    flavor: Flavor,
    trials: usize,
    seed: u64,
) -> Result<bool> {
    let mut rng = sampling::rng(seed);
    for _ in 0..trials {
        let x = sampling::random_matrix(&mut rng, d);
        let u: Vec<C64> = match flavor {
            Flavor::Doc => sampling::random_signs(&mut rng, d).into_iter().map(|s| C64::new(s, 0.0)).collect(),
            Flavor::Duc | Flavor::Cduc => sampling::random_phases(&mut rng, d),
        };
        let u = ComplexMatrix::from_diagonal(&u);
        let ud = u.adjoint();
        let lhs = f(&(&(&u * &x) * &ud))?;
        let fx = f(&x)?;
        let rhs = match flavor {
            Flavor::Doc | Flavor::Cduc => &(&u * &fx) * &ud,
            Flavor::Duc => &(&ud * &fx) * &u,
        };
        if lhs.max_abs_diff(&rhs) > 1e-10 * fx.max_norm().max(1.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Eigenvalues of `[[b1, c1], [c2, b2]]`, the `+` root first.
pub fn block_eigenvalues(b1: C64, c1: C64, c2: C64, b2: C64) -> (C64, C64) {
    let half_tr = (b1 + b2) * 0.5;
    let disc = ((b1 - b2) * (b1 - b2) + c1 * c2 * 4.0).sqrt() * 0.5;
    (half_tr + disc, half_tr - disc)
}

/// `λ±_ij = ½[B_ij + B_ji ± √((B_ij − B_ji)² + 4|C_ij|²)]` for Hermitian
/// `B`, `C` and `i < j`.
pub fn lambda_pm(b: &ComplexMatrix, c: &ComplexMatrix, i: usize, j: usize) -> Result<(C64, C64)> {
    if b.dim() != c.dim() {
        return Err(Error::Dimension(format!("B is {}x{}, C is {}x{}", b.dim(), b.dim(), c.dim(), c.dim())));
    }
    if i >= j || j >= b.dim() {
        return Err(Error::Precondition(format!("need i < j < d, got ({i}, {j})")));
    }
    if b.hermiticity_residual() > HERMITIAN_TOL || c.hermiticity_residual() > HERMITIAN_TOL {
        return Err(Error::Precondition("λ± needs Hermitian B and C".into()));
    }
    let (bij, bji) = (b.get(i, j), b.get(j, i));
    let disc = ((bij - bji) * (bij - bji) + 4.0 * c.get(i, j).norm_sqr()).sqrt();
    Ok(((bij + bji + disc) * 0.5, (bij + bji - disc) * 0.5))
}

#[derive(Debug, Clone)]
pub struct Eigenmatrices {
    pub pairs: Vec<(C64, ComplexMatrix)>,
    /// Set when some eigenvalue cluster lacks a full set of eigenmatrices.
    pub defective: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Digraph of `A` plus the `λ±` criteria.
    Core,
    /// Spectrum of the map alone.
    Spectral,
}

/// Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaPair {
    pub i: usize,
    pub j: usize,
    pub plus: C64,
    pub minus: C64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelReport {
    pub route: Route,
    pub d: usize,
    pub ergodic: bool,
    pub mixing: bool,
    pub irreducible: bool,
    pub primitive: bool,
    pub stationary_state: Option<ComplexMatrix>,
    pub peripheral_count: usize,
    pub constant_mode_count: usize,
    pub nondecaying_mode_count: usize,
    pub peripheral: Vec<C64>,
    pub eigenvalues: Vec<C64>,
    pub lambda_pm: Vec<LambdaPair>,
    pub core: Option<StochasticReport>,
}

impl ChannelReport {
    pub(crate) fn assemble(
        route: Route,
        d: usize,
        [ergodic, mixing, irreducible, primitive]: [bool; 4],
        stationary_state: Option<ComplexMatrix>,
        spec: SpectrumResult,
        lambda_pm: Vec<LambdaPair>,
        core: Option<StochasticReport>,
    ) -> Self {
        let peripheral_count = spec.peripheral_count();
        let constant_mode_count = spec.unit_multiplicity;
        ChannelReport {
            route,
            d,
            ergodic,
            mixing,
            irreducible,
            primitive,
            stationary_state,
            peripheral_count,
            constant_mode_count,
            nondecaying_mode_count: peripheral_count.saturating_sub(constant_mode_count),
            peripheral: spec.peripheral,
            eigenvalues: spec.eigenvalues,
            lambda_pm,
            core,
        }
    }
}
