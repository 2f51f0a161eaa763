//! Column-stochastic matrices, classified through their digraph and checked
//! against their spectrum.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::digraph::{self, ClassDecomposition};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, Tolerances, C64};

const COLUMN_SUM_TOL: f64 = 1e-10;

/// Real, entrywise nonnegative, unit column sums.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix(ComplexMatrix);

impl StochasticMatrix {
    /// Entries in `[-tau_zero, 0)` are clamped to zero; imaginary parts must
    /// not exceed `tau_zero`.
    pub fn new(m: ComplexMatrix, tau_zero: f64) -> Result<Self> {
        let d = m.dim();
        let mut clean = m;
        for i in 0..d {
            for j in 0..d {
                let z = clean.get(i, j);
                if z.im.abs() > tau_zero {
                    return Err(Error::NotStochastic(format!("entry ({i},{j}) has imaginary part {}", z.im)));
                }
                if z.re < -tau_zero {
                    return Err(Error::NotStochastic(format!("entry ({i},{j}) = {} is negative", z.re)));
                }
                clean.set(i, j, C64::new(z.re.max(0.0), 0.0));
            }
        }
        for j in 0..d {
            let s: f64 = (0..d).map(|i| clean.get(i, j).re).sum();
            if (s - 1.0).abs() > COLUMN_SUM_TOL {
                return Err(Error::NotStochastic(format!("column {j} sums to {s}")));
            }
        }
        Ok(StochasticMatrix(clean))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_rows(rows)?, Tolerances::default().zero)
    }

    /// `(1/d) J`.
    pub fn uniform(d: usize) -> Self {
        StochasticMatrix(ComplexMatrix::ones(d).scale_real(1.0 / d as f64))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j).re
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StochasticReport {
    pub ergodic: bool,
    pub mixing: bool,
    pub irreducible: bool,
    pub primitive: bool,
    pub scrambling: bool,
    pub scrambling_index: usize,
    pub closed_class_count: usize,
    pub unit_multiplicity: usize,
    pub peripheral_count: usize,
    pub stationary: Option<Vec<f64>>,
    pub eigenvalues: Vec<C64>,
    pub classes: ClassDecomposition,
}

/// Verdicts read off the spectrum alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectralVerdict {
    pub ergodic: bool,
    pub mixing: bool,
}

pub fn spectral_verdict(spec: &linalg::SpectrumResult) -> SpectralVerdict {
    let ergodic = spec.unit_multiplicity == 1;
    SpectralVerdict { ergodic, mixing: ergodic && spec.peripheral_count() == 1 }
}

pub fn classify_stochastic(a: &StochasticMatrix, tol: &Tolerances) -> Result<StochasticReport> {
    let g = digraph::digraph_of(a.matrix(), tol.zero);
    let classes = digraph::communicating_classes(&g);
    let closed = classes.closed_classes();
    let closed_class_count = closed.len();

    let ergodic = closed_class_count == 1;
    let mixing = ergodic && classes.periods[closed[0]] == 1;
    let irreducible = classes.len() == 1 && classes.periods[0] > 0;
    let primitive = classes.len() == 1 && classes.periods[0] == 1;

    let spec = linalg::eigenvalues(a.matrix(), tol)?;
    let stationary = if ergodic { Some(stationary_distribution(a)?) } else { None };
    let scrambling_index = digraph::scrambling_index(&g, digraph::default_scrambling_cap(a.dim()));

    Ok(StochasticReport {
        ergodic,
        mixing,
        irreducible,
        primitive,
        scrambling: is_scrambling(a, tol.zero),
        scrambling_index,
        closed_class_count,
        unit_multiplicity: spec.unit_multiplicity,
        peripheral_count: spec.peripheral_count(),
        stationary,
        eigenvalues: spec.eigenvalues,
        classes,
    })
}

/// Least-squares solution of `[(A - 1); eᵀ] π = [0; 1]`, clamped to be
/// nonnegative and renormalized. Only meaningful for ergodic `A`.
pub fn stationary_distribution(a: &StochasticMatrix) -> Result<Vec<f64>> {
    let d = a.dim();
    let mut m = DMatrix::<f64>::zeros(d + 1, d);
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] = a.entry(i, j) - if i == j { 1.0 } else { 0.0 };
        }
        m[(d, i)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(d + 1);
    rhs[d] = 1.0;
    let pi = m
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::Precondition(format!("stationary solve failed: {e}")))?;
    let mut pi: Vec<f64> = pi.iter().map(|&p| p.max(0.0)).collect();
    let s: f64 = pi.iter().sum();
    if s <= 0.0 {
        return Err(Error::Precondition("stationary vector vanished".into()));
    }
    pi.iter_mut().for_each(|p| *p /= s);
    Ok(pi)
}

/// `(1/n) Σ_{k<n} A^k`.
pub fn cesaro_mean(a: &StochasticMatrix, n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::Precondition("cesaro_mean needs n ≥ 1".into()));
    }
    let d = a.dim();
    let mut power = ComplexMatrix::identity(d);
    let mut sum = ComplexMatrix::zeros(d);
    for _ in 0..n {
        sum = &sum + &power;
        power = &power * a.matrix();
    }
    Ok(sum.scale_real(1.0 / n as f64))
}

/// `|π⟩⟨e|`: every column equals `π`.
pub fn rank_one_limit(pi: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(pi.len(), |i, _| C64::new(pi[i], 0.0))
}

/// Whether `‖Aⁿ − |π⟩⟨e|‖_max ≤ tol`. `A` must be mixing.
pub fn power_limit_check(a: &StochasticMatrix, n: usize, tol_max: f64, tol: &Tolerances) -> Result<bool> {
    let report = classify_stochastic(a, tol)?;
    if !report.mixing {
        return Err(Error::Precondition("power limit requested for a non-mixing matrix".into()));
    }
    let pi = report.stationary.expect("mixing implies ergodic");
    Ok(a.matrix().pow(n).max_abs_diff(&rank_one_limit(&pi)) <= tol_max)
}

/// Every pair of columns shares a positive row.
pub fn is_scrambling(a: &StochasticMatrix, tau_zero: f64) -> bool {
    let d = a.dim();
    (0..d).all(|i| (i..d).all(|j| (0..d).any(|k| a.entry(k, i) > tau_zero && a.entry(k, j) > tau_zero)))
}
