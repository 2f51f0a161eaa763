//! Eigenvalues of small dense complex matrices.
//!
//! Householder reduction to upper Hessenberg form followed by single-shift
//! complex QR sweeps (Wilkinson shift, periodic exceptional shifts) with
//! standard small-subdiagonal deflation. Only eigenvalues are produced; the
//! sweeps act on the active block only.

use num_complex::Complex64;

use crate::error::{Error, Result};

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);

/// Row-major square work matrix.
struct Work {
    n: usize,
    a: Vec<C>,
}

impl Work {
    #[inline]
    fn at(&self, i: usize, j: usize) -> C {
        self.a[i * self.n + j]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut C {
        &mut self.a[i * self.n + j]
    }
}

fn reduce_to_hessenberg(w: &mut Work) {
    let n = w.n;
    if n < 3 {
        return;
    }
    let mut v = vec![ZERO; n];
    for k in 0..n - 2 {
        // Householder vector annihilating w[k+2.., k], built from the column
        // scaled to unit max entry so tiny columns cannot underflow.
        let cmax = (k + 1..n).map(|i| w.at(i, k).norm()).fold(0.0, f64::max);
        if cmax == 0.0 {
            continue;
        }
        let alpha_norm: f64 = (k + 1..n).map(|i| (w.at(i, k) / cmax).norm_sqr()).sum::<f64>().sqrt();
        let x0 = w.at(k + 1, k) / cmax;
        let phase = if x0.norm() == 0.0 { C::new(1.0, 0.0) } else { x0 / x0.norm() };
        let beta = -phase * alpha_norm;
        v.fill(ZERO);
        v[k + 1] = x0 - beta;
        for i in k + 2..n {
            v[i] = w.at(i, k) / cmax;
        }
        let beta = beta * cmax;
        let vnorm2: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm2;
        // H = I - tau v v^H ; A <- H A H
        for j in 0..n {
            let s: C = (k + 1..n).map(|i| v[i].conj() * w.at(i, j)).sum();
            let s = s * tau;
            for i in k + 1..n {
                let vi = v[i];
                *w.at_mut(i, j) -= vi * s;
            }
        }
        for i in 0..n {
            let s: C = (k + 1..n).map(|j| w.at(i, j) * v[j]).sum();
            let s = s * tau;
            for j in k + 1..n {
                let vj = v[j].conj();
                *w.at_mut(i, j) -= s * vj;
            }
        }
        *w.at_mut(k + 1, k) = beta;
        for i in k + 2..n {
            *w.at_mut(i, k) = ZERO;
        }
    }
}

/// Givens rotation (c real, s complex) with
/// `[c, s; -conj(s), c] * [a; b] = [r; 0]`.
fn givens(a: C, b: C) -> (f64, C) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let r = an.hypot(bn);
    let c = an / r;
    let s = (a / an) * b.conj() / r;
    (c, s)
}

/// Eigenvalue of the trailing 2x2 block `[a, b; c, d]` closest to `d`.
fn wilkinson_shift(a: C, b: C, c: C, d: C) -> C {
    let tr_half = (a + d) * 0.5;
    let diff_half = (a - d) * 0.5;
    let disc = (diff_half * diff_half + b * c).sqrt();
    let l1 = tr_half + disc;
    let l2 = tr_half - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// All eigenvalues of the row-major `n x n` matrix, unordered.
pub(crate) fn eigenvalues_row_major(n: usize, data: Vec<C>) -> Result<Vec<C>> {
    debug_assert_eq!(data.len(), n * n);
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut w = Work { n, a: data };
    let scale = w.a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(vec![ZERO; n]);
    }
    reduce_to_hessenberg(&mut w);

    let eps = f64::EPSILON;
    let max_sweeps = 60 * n.max(4);
    let mut eig = vec![ZERO; n];
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let mut cs: Vec<(f64, C)> = Vec::with_capacity(n);

    loop {
        if hi == 0 {
            eig[0] = w.at(0, 0);
            break;
        }
        // Locate the start of the active unreduced block.
        let mut lo = hi;
        while lo > 0 {
            let sub = w.at(lo, lo - 1).norm();
            // Local test with a norm-wise floor, so blocks with tiny diagonals
            // (large null spaces) still deflate.
            let diag = w.at(lo, lo).norm() + w.at(lo - 1, lo - 1).norm();
            if sub <= eps * diag.max(scale) {
                *w.at_mut(lo, lo - 1) = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = w.at(hi, hi);
            hi -= 1;
            iter = 0;
            continue;
        }

        iter += 1;
        total += 1;
        if total > max_sweeps {
            return Err(Error::NoConvergence(total));
        }

        let shift = if iter.is_multiple_of(11) {
            // Exceptional shift to break symmetric stalls (e.g. cyclic permutations).
            let h = w.at(hi, hi - 1).norm() + if hi >= 2 { w.at(hi - 1, hi - 2).norm() } else { 0.0 };
            let angle = 0.7 * iter as f64;
            w.at(hi, hi) + C::new(angle.cos(), angle.sin()) * (0.75 * h)
        } else {
            wilkinson_shift(
                w.at(hi - 1, hi - 1),
                w.at(hi - 1, hi),
                w.at(hi, hi - 1),
                w.at(hi, hi),
            )
        };

        for k in lo..=hi {
            *w.at_mut(k, k) -= shift;
        }
        // H - mu I = QR: left rotations.
        cs.clear();
        for k in lo..hi {
            let (c, s) = givens(w.at(k, k), w.at(k + 1, k));
            for j in k..=hi {
                let x = w.at(k, j);
                let y = w.at(k + 1, j);
                *w.at_mut(k, j) = x * c + s * y;
                *w.at_mut(k + 1, j) = -s.conj() * x + y * c;
            }
            *w.at_mut(k + 1, k) = ZERO;
            cs.push((c, s));
        }
        // RQ: right rotations with the adjoints.
        for (idx, k) in (lo..hi).enumerate() {
            let (c, s) = cs[idx];
            let top = (k + 1).min(hi);
            for i in lo..=top {
                let x = w.at(i, k);
                let y = w.at(i, k + 1);
                *w.at_mut(i, k) = x * c + s.conj() * y;
                *w.at_mut(i, k + 1) = -s * x + y * c;
            }
        }
        for k in lo..=hi {
            *w.at_mut(k, k) += shift;
        }
    }
    Ok(eig)
}
