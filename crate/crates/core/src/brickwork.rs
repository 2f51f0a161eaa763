//! Dense simulation of the periodic brickwork circuit on `2L` qudits.
//!
//! Sites carry the labels `−L+1, …, L`; label `s` is stored at position
//! `s + L − 1`, and position 0 is the most significant digit of a basis
//! index. The odd layer `𝕌₋` acts on the pairs `(−L+2, −L+3), …, (L, −L+1)`,
//! the even layer `𝕌₊` on `(−L+1, −L+2), …, (L−1, L)`, and
//! `𝕌(t) = ⋯ 𝕌₊ 𝕌₋` starts with `𝕌₋`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lambda::{lambda_minus_contraction, lambda_plus_contraction};
use crate::linalg::{BipartiteMatrix, ComplexMatrix, C64};

pub const MAX_HILBERT_DIM: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub d: usize,
    pub half_length: usize,
    pub t_max: usize,
    pub gate: BipartiteMatrix,
}

impl ChainConfig {
    pub fn new(gate: BipartiteMatrix, half_length: usize, t_max: usize) -> Result<Self> {
        let cfg = ChainConfig { d: gate.local_dim(), half_length, t_max, gate };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.gate.local_dim() != self.d {
            return Err(Error::Dimension(format!("gate acts on d={}, config says d={}", self.gate.local_dim(), self.d)));
        }
        if self.half_length == 0 || self.d < 2 {
            return Err(Error::Size("need d ≥ 2 and L ≥ 1".into()));
        }
        if hilbert_dim(self.d, 2 * self.half_length).is_none_or(|n| n > MAX_HILBERT_DIM) {
            return Err(Error::Size(format!("d^(2L) = {}^{} exceeds {MAX_HILBERT_DIM}", self.d, 2 * self.half_length)));
        }
        if self.t_max + 1 > 2 * self.half_length {
            return Err(Error::Size(format!("t_max = {} exceeds 2L − 1 = {}", self.t_max, 2 * self.half_length - 1)));
        }
        Ok(())
    }

    pub fn sites(&self) -> usize {
        2 * self.half_length
    }

    pub fn dim(&self) -> usize {
        self.d.pow(self.sites() as u32)
    }

    /// Labels `−L+1, …, L` in storage order.
    pub fn labels(&self) -> Vec<i64> {
        let l = self.half_length as i64;
        (-l + 1..=l).collect()
    }

    /// Storage position of a label, taken modulo `2L`.
    pub fn position(&self, label: i64) -> usize {
        let n = self.sites() as i64;
        (label + self.half_length as i64 - 1).rem_euclid(n) as usize
    }

    /// Label in `−L+1, …, L` congruent to `label` modulo `2L`.
    pub fn wrap(&self, label: i64) -> i64 {
        self.position(label) as i64 - self.half_length as i64 + 1
    }

    /// Ordered site pairs of the layer applied at step `step ≥ 1`.
    pub fn layer_pairs(&self, step: usize) -> Vec<(i64, i64)> {
        let l = self.half_length as i64;
        let start = if step % 2 == 1 { -l + 2 } else { -l + 1 };
        (0..l).map(|m| (self.wrap(start + 2 * m), self.wrap(start + 2 * m + 1))).collect()
    }

    /// True when `label` is the first leg of its pair in the layer of `step`.
    pub fn leads_pair(&self, label: i64, step: usize) -> bool {
        let s = self.wrap(label);
        self.layer_pairs(step).iter().any(|&(p, _)| p == s)
    }
}

fn hilbert_dim(d: usize, n: usize) -> Option<usize> {
    d.checked_pow(n as u32)
}

/// Row-major dense square matrix used for the `d^{2L}`-dimensional operators.
#[derive(Debug, Clone)]
struct Dense {
    n: usize,
    data: Vec<C64>,
}

impl Dense {
    fn identity(n: usize) -> Self {
        let mut data = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            data[i * n + i] = C64::new(1.0, 0.0);
        }
        Dense { n, data }
    }

    fn adjoint(&self) -> Self {
        let n = self.n;
        let mut data = vec![C64::new(0.0, 0.0); n * n];
        for r in 0..n {
            for c in 0..n {
                data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        Dense { n, data }
    }

    fn into_matrix(self) -> ComplexMatrix {
        let n = self.n;
        ComplexMatrix::from_fn(n, |r, c| self.data[r * n + c])
    }
}

/// Applies a two-site gate from the left, first factor on position `p`.
struct SiteGate<'a> {
    u: &'a BipartiteMatrix,
    offsets: Vec<usize>,
    bases: Vec<usize>,
}

impl<'a> SiteGate<'a> {
    fn new(cfg: &ChainConfig, u: &'a BipartiteMatrix, p: usize, q: usize) -> Self {
        let d = cfg.d;
        let n = cfg.sites();
        let stride = |pos: usize| d.pow((n - 1 - pos) as u32);
        let (sp, sq) = (stride(p), stride(q));
        let offsets = (0..d * d).map(|s| (s / d) * sp + (s % d) * sq).collect();
        let bases = (0..cfg.dim()).filter(|&idx| (idx / sp) % d == 0 && (idx / sq) % d == 0).collect();
        SiteGate { u, offsets, bases }
    }

    fn left_mul(&self, m: &mut Dense) {
        let n = m.n;
        let k = self.offsets.len();
        let u = self.u.matrix();
        let mut rows = vec![C64::new(0.0, 0.0); k * n];
        for &base in &self.bases {
            for (s, off) in self.offsets.iter().enumerate() {
                let r = base + off;
                rows[s * n..(s + 1) * n].copy_from_slice(&m.data[r * n..(r + 1) * n]);
            }
            for (s2, off2) in self.offsets.iter().enumerate() {
                let out = &mut m.data[(base + off2) * n..(base + off2 + 1) * n];
                out.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
                for s in 0..k {
                    let w = u.get(s2, s);
                    if w == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for (o, x) in out.iter_mut().zip(&rows[s * n..(s + 1) * n]) {
                        *o += w * x;
                    }
                }
            }
        }
    }
}

fn layer_gates<'a>(cfg: &'a ChainConfig, step: usize) -> Vec<SiteGate<'a>> {
    cfg.layer_pairs(step)
        .into_iter()
        .map(|(p, q)| SiteGate::new(cfg, &cfg.gate, cfg.position(p), cfg.position(q)))
        .collect()
}

/// `U_(x,y)` embedded in the chain, first factor on site `x`.
pub fn two_site_embedding(cfg: &ChainConfig, u: &BipartiteMatrix, x: i64, y: i64) -> Result<ComplexMatrix> {
    cfg.validate()?;
    if u.local_dim() != cfg.d || cfg.wrap(x) == cfg.wrap(y) {
        return Err(Error::Dimension("gate must act on two distinct sites of the chain".into()));
    }
    let mut m = Dense::identity(cfg.dim());
    SiteGate::new(cfg, u, cfg.position(x), cfg.position(y)).left_mul(&mut m);
    Ok(m.into_matrix())
}

/// `𝕌(t)` as a dense `d^{2L}`-dimensional matrix.
pub fn build_evolution(cfg: &ChainConfig, t: usize) -> Result<ComplexMatrix> {
    cfg.validate()?;
    if t > cfg.t_max {
        return Err(Error::Size(format!("t = {t} exceeds t_max = {}", cfg.t_max)));
    }
    let mut m = Dense::identity(cfg.dim());
    for step in 1..=t {
        for g in layer_gates(cfg, step) {
            g.left_mul(&mut m);
        }
    }
    Ok(m.into_matrix())
}

/// `a` on site `label`, identity elsewhere.
pub fn embed_local(cfg: &ChainConfig, a: &ComplexMatrix, label: i64) -> Result<ComplexMatrix> {
    if a.dim() != cfg.d {
        return Err(Error::Dimension(format!("observable is {}x{}, chain has d={}", a.dim(), a.dim(), cfg.d)));
    }
    let n = cfg.dim();
    let stride = cfg.d.pow((cfg.sites() - 1 - cfg.position(label)) as u32);
    let d = cfg.d;
    Ok(ComplexMatrix::from_fn(n, |r, c| {
        let (dr, dc) = ((r / stride) % d, (c / stride) % d);
        if r - dr * stride == c - dc * stride {
            a.get(dr, dc)
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

/// `Tr_{all but site}(𝕌(t) b_x 𝕌(t)†)` for `t = 0, …, t_max`.
pub fn evolved_marginals(cfg: &ChainConfig, b: &ComplexMatrix, b_site: i64, keep_site: i64) -> Result<Vec<ComplexMatrix>> {
    cfg.validate()?;
    let bx = embed_local(cfg, b, b_site)?;
    let n = cfg.dim();
    let mut rho = Dense { n, data: (0..n * n).map(|k| bx.get(k / n, k % n)).collect() };
    let mut out = vec![marginal(cfg, &rho, keep_site)];
    for step in 1..=cfg.t_max {
        let gates = layer_gates(cfg, step);
        // ρ ↦ U ρ U† as U (U ρ†)†.
        let mut tmp = rho.adjoint();
        for g in &gates {
            g.left_mul(&mut tmp);
        }
        rho = tmp.adjoint();
        for g in &gates {
            g.left_mul(&mut rho);
        }
        out.push(marginal(cfg, &rho, keep_site));
    }
    Ok(out)
}

fn marginal(cfg: &ChainConfig, rho: &Dense, label: i64) -> ComplexMatrix {
    let d = cfg.d;
    let n = rho.n;
    let stride = d.pow((cfg.sites() - 1 - cfg.position(label)) as u32);
    let mut m = ComplexMatrix::zeros(d);
    for idx in (0..n).filter(|&i| (i / stride).is_multiple_of(d)) {
        for a in 0..d {
            for c in 0..d {
                let z = m.get(a, c) + rho.data[(idx + a * stride) * n + idx + c * stride];
                m.set(a, c, z);
            }
        }
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationEntry {
    /// Displacement of `B` from the origin of `A`, in `−L+1, …, L`.
    pub x: i64,
    pub t: usize,
    pub value: C64,
    /// `value / d^{2L−1}`.
    pub normalized: C64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTable {
    pub d: usize,
    pub half_length: usize,
    pub t_max: usize,
    pub origin: i64,
    /// `(label, storage position)` for every site.
    pub site_map: Vec<(i64, usize)>,
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub entries: Vec<CorrelationEntry>,
}

impl CorrelationTable {
    pub fn get(&self, x: i64, t: usize) -> Option<C64> {
        self.entries.iter().find(|e| e.x == x && e.t == t).map(|e| e.value)
    }

    /// `x,t,re,im,re_norm,im_norm`, rows ordered by `t` then `x`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,t,re,im,re_norm,im_norm\n");
        for e in &self.entries {
            s.push_str(&format!(
                "{},{},{:e},{:e},{:e},{:e}\n",
                e.x, e.t, e.value.re, e.value.im, e.normalized.re, e.normalized.im
            ));
        }
        s
    }

    /// Largest `|C(x,t)|` over the entries selected by `pred(x, t)`.
    pub fn max_abs_where(&self, pred: impl Fn(i64, usize) -> bool) -> f64 {
        self.entries.iter().filter(|e| pred(e.x, e.t)).map(|e| e.value.norm()).fold(0.0, f64::max)
    }
}

/// `C(x,t) = Tr(𝕌†A_y𝕌 B_{y+x}) − Tr A Tr B d^{2L−2}` with `y = origin`.
pub fn correlations(cfg: &ChainConfig, a: &ComplexMatrix, b: &ComplexMatrix, origin: i64) -> Result<CorrelationTable> {
    cfg.validate()?;
    if a.dim() != cfg.d || b.dim() != cfg.d {
        return Err(Error::Dimension("observables must be d x d".into()));
    }
    let d = cfg.d as f64;
    let n = cfg.sites() as i32;
    let offset = a.trace() * b.trace() * d.powi(n - 2);
    let norm = d.powi(n - 1);
    let origin = cfg.wrap(origin);
    let labels = cfg.labels();
    let mut grid = vec![vec![C64::new(0.0, 0.0); labels.len()]; cfg.t_max + 1];
    for (k, &x) in labels.iter().enumerate() {
        let marg = evolved_marginals(cfg, b, origin + x, origin)?;
        for (t, m) in marg.iter().enumerate() {
            grid[t][k] = (a * m).trace() - offset;
        }
    }
    let entries = grid
        .iter()
        .enumerate()
        .flat_map(|(t, row)| {
            labels.iter().zip(row).map(move |(&x, &value)| CorrelationEntry { x, t, value, normalized: value / norm })
        })
        .collect();
    Ok(CorrelationTable {
        d: cfg.d,
        half_length: cfg.half_length,
        t_max: cfg.t_max,
        origin,
        site_map: labels.iter().map(|&s| (s, cfg.position(s))).collect(),
        a: a.clone(),
        b: b.clone(),
        entries,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeRow {
    pub origin: i64,
    pub t: usize,
    pub x: i64,
    pub simulated: C64,
    pub predicted: C64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeReport {
    pub rows: Vec<EdgeRow>,
    pub max_residual: f64,
    /// `1e-8 · d^{2L−1}`.
    pub tolerance: f64,
}

impl EdgeReport {
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tolerance
    }
}

/// Compares `C(±t, t)` for `1 ≤ t ≤ t_max` with
/// `d^{2L−1}[Tr(Λ±ᵗ(A)B) − Tr A Tr B/d]`, from origins 0 and 1. In the
/// Heisenberg picture the last layer acts on `A` first, so the edge reached
/// is `+t` (through `Λ₊`) when the origin is the first leg of its pair in
/// layer `t`, else `−t` (through `Λ₋`). The opposite edge lies outside the
/// light cone and is compared with 0.
pub fn edge_check(cfg: &ChainConfig, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<EdgeReport> {
    cfg.validate()?;
    let plus = lambda_plus_contraction(&cfg.gate)?;
    let minus = lambda_minus_contraction(&cfg.gate)?;
    let d = cfg.d as f64;
    let norm = d.powi(cfg.sites() as i32 - 1);
    let mut rows = Vec::new();
    for origin in [0, 1] {
        let table = correlations(cfg, a, b, origin)?;
        for t in 1..=cfg.t_max {
            let forward = cfg.leads_pair(origin, t);
            let channel = if forward { &plus } else { &minus };
            let mut evolved = a.clone();
            for _ in 0..t {
                evolved = channel.apply_map(&evolved)?;
            }
            let reached = (&evolved * b).trace() - a.trace() * b.trace() / d;
            let t_i = t as i64;
            let (x_on, x_off) = if forward { (t_i, -t_i) } else { (-t_i, t_i) };
            let sim_on = table.get(cfg.wrap(x_on), t).expect("x in range");
            rows.push(EdgeRow { origin, t, x: x_on, simulated: sim_on, predicted: reached * norm });
            if cfg.wrap(x_off) != cfg.wrap(x_on) {
                let sim_off = table.get(cfg.wrap(x_off), t).expect("x in range");
                rows.push(EdgeRow { origin, t, x: x_off, simulated: sim_off, predicted: C64::new(0.0, 0.0) });
            }
        }
    }
    let max_residual = rows.iter().map(|r| (r.simulated - r.predicted).norm()).fold(0.0, f64::max);
    Ok(EdgeReport { rows, max_residual, tolerance: 1e-8 * norm })
}

/// Hermitian traceless basis of `d x d` matrices: symmetric and
/// antisymmetric off-diagonal units plus diagonal differences.
pub fn traceless_basis(d: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let mut s = ComplexMatrix::zeros(d);
            s.set(i, j, C64::new(1.0, 0.0));
            s.set(j, i, C64::new(1.0, 0.0));
            out.push(s);
            let mut y = ComplexMatrix::zeros(d);
            y.set(i, j, C64::new(0.0, -1.0));
            y.set(j, i, C64::new(0.0, 1.0));
            out.push(y);
        }
    }
    for k in 1..d {
        let mut z = ComplexMatrix::zeros(d);
        z.set(0, 0, C64::new(1.0, 0.0));
        z.set(k, k, C64::new(-1.0, 0.0));
        out.push(z);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::ldoi_matrix;
    use crate::gates::{family_instance, Family};
    use crate::linalg::flip;
    use crate::sampling;

    fn haar_gate(seed: u64, d: usize) -> BipartiteMatrix {
        let mut r = sampling::rng(seed);
        BipartiteMatrix::new(d, sampling::haar_unitary(&mut r, d * d)).unwrap()
    }

    fn kron_all(ms: &[ComplexMatrix]) -> ComplexMatrix {
        let mut acc = ms[0].inner().clone();
        for m in &ms[1..] {
            acc = acc.kronecker(m.inner());
        }
        ComplexMatrix::new(acc).unwrap()
    }

    fn unit(d: usize, i: usize, j: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(d);
        m.set(i, j, C64::new(1.0, 0.0));
        m
    }

    #[test]
    fn caps_and_layers() {
        let g = BipartiteMatrix::identity(2);
        assert!(matches!(ChainConfig::new(g.clone(), 7, 1), Err(Error::Size(_))));
        assert!(matches!(ChainConfig::new(g.clone(), 3, 6), Err(Error::Size(_))));
        assert!(ChainConfig::new(g.clone(), 6, 11).is_ok());
        let cfg = ChainConfig::new(g, 3, 2).unwrap();
        assert_eq!(cfg.labels(), vec![-2, -1, 0, 1, 2, 3]);
        assert_eq!(cfg.layer_pairs(1), vec![(-1, 0), (1, 2), (3, -2)]);
        assert_eq!(cfg.layer_pairs(2), vec![(-2, -1), (0, 1), (2, 3)]);
        assert!(!cfg.leads_pair(0, 1) && cfg.leads_pair(1, 1) && cfg.leads_pair(0, 2));
        assert!(matches!(build_evolution(&cfg, 3), Err(Error::Size(_))));
    }

    #[test]
    fn identity_gate_gives_identity_evolution() {
        let cfg = ChainConfig::new(BipartiteMatrix::identity(2), 2, 3).unwrap();
        for t in 0..=3 {
            assert_eq!(build_evolution(&cfg, t).unwrap(), ComplexMatrix::identity(16));
        }
    }

    #[test]
    fn first_layer_matches_kronecker_oracle() {
        let u = haar_gate(1, 2);
        let cfg = ChainConfig::new(u.clone(), 2, 2).unwrap();
        let id = ComplexMatrix::identity(2);
        // Labels −1, 0, 1, 2 at positions 0..4; U_(0,1) = 𝟙 ⊗ U ⊗ 𝟙.
        let inner = kron_all(&[id.clone(), u.matrix().clone(), id.clone()]);
        // Wrap pair U_(2,−1): first factor on position 3, second on position 0.
        let mut wrap = ComplexMatrix::zeros(16);
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for e in 0..2 {
                        let term = kron_all(&[unit(2, b, e), id.clone(), id.clone(), unit(2, a, c)]);
                        wrap = &wrap + &term.scale(u.entry(a, b, c, e));
                    }
                }
            }
        }
        let want = &wrap * &inner;
        let got = build_evolution(&cfg, 1).unwrap();
        assert!(got.max_abs_diff(&want) <= 1e-14);
        assert!(two_site_embedding(&cfg, &u, 2, -1).unwrap().max_abs_diff(&wrap) <= 1e-15);

        let plus = &two_site_embedding(&cfg, &u, -1, 0).unwrap() * &two_site_embedding(&cfg, &u, 1, 2).unwrap();
        let two = build_evolution(&cfg, 2).unwrap();
        assert!(two.max_abs_diff(&(&plus * &got)) <= 1e-13);
        assert!(two.unitarity_residual() <= 1e-9);
    }

    #[test]
    fn correlations_match_dense_trace() {
        let u = haar_gate(2, 2);
        let cfg = ChainConfig::new(u, 3, 2).unwrap();
        let mut r = sampling::rng(3);
        let a = sampling::random_matrix(&mut r, 2);
        let b = sampling::random_matrix(&mut r, 2);
        let table = correlations(&cfg, &a, &b, 0).unwrap();
        let a0 = embed_local(&cfg, &a, 0).unwrap();
        let off = a.trace() * b.trace() * 16.0;
        for t in 0..=2 {
            let uu = build_evolution(&cfg, t).unwrap();
            for x in cfg.labels() {
                let bx = embed_local(&cfg, &b, x).unwrap();
                let want = (&(&(&uu.adjoint() * &a0) * &uu) * &bx).trace() - off;
                assert!((table.get(x, t).unwrap() - want).norm() <= 1e-10, "x={x} t={t}");
            }
        }
    }

    #[test]
    fn identity_gate_correlations_stay_at_origin() {
        let cfg = ChainConfig::new(BipartiteMatrix::identity(2), 3, 2).unwrap();
        let sz = traceless_basis(2)[2].clone();
        let table = correlations(&cfg, &sz, &sz, 0).unwrap();
        for e in &table.entries {
            let want = if e.x == 0 { 64.0 } else { 0.0 };
            assert!((e.value - want).norm() <= 1e-12);
        }
    }

    #[test]
    fn light_cone_generic_and_dual() {
        let cfg = ChainConfig::new(haar_gate(4, 2), 3, 2).unwrap();
        let basis = traceless_basis(2);
        let t = correlations(&cfg, &basis[0], &basis[0], 0).unwrap();
        assert!(t.max_abs_where(|x, t| x.unsigned_abs() as usize > t) <= 1e-9);
        assert!(t.max_abs_where(|x, t| (x.unsigned_abs() as usize) < t) > 1e-4);

        let dual = ldoi_matrix(&family_instance(Family::ProjectionDual, 2, 4));
        let cfg = ChainConfig::new(dual, 3, 2).unwrap();
        for a in &basis {
            for b in &basis {
                let t = correlations(&cfg, a, b, 0).unwrap();
                assert!(t.max_abs_where(|x, t| x.unsigned_abs() as usize != t) <= 1e-9);
            }
        }
    }

    #[test]
    fn edge_formula_both_signs() {
        for (seed, d) in [(0u64, 2usize), (1, 3)] {
            let gates = [
                ldoi_matrix(&family_instance(Family::ProjectionDual, d, seed)),
                haar_gate(seed + 10, d),
                flip(d),
            ];
            for g in gates {
                let cfg = ChainConfig::new(g, 3, 2).unwrap();
                let basis = traceless_basis(d);
                let rep = edge_check(&cfg, &basis[0], &basis[basis.len() - 1]).unwrap();
                assert!(rep.passed(), "d={d}: {}", rep.max_residual);
                assert!(rep.rows.iter().any(|r| r.x < 0) && rep.rows.iter().any(|r| r.x > 0));
            }
        }
    }

    #[test]
    fn identity_gate_edges_vanish_for_traceless() {
        // Λ±(𝟙 ⊗ 𝟙) is completely depolarizing.
        let cfg = ChainConfig::new(BipartiteMatrix::identity(2), 3, 2).unwrap();
        let basis = traceless_basis(2);
        let rep = edge_check(&cfg, &basis[0], &basis[0]).unwrap();
        assert!(rep.passed());
        assert!(rep.rows.iter().all(|r| r.simulated.norm() <= 1e-12));
    }

    #[test]
    fn translation_by_two_sites() {
        let dual = ldoi_matrix(&family_instance(Family::LduiDual, 2, 6));
        let cfg = ChainConfig::new(dual, 3, 2).unwrap();
        let mut r = sampling::rng(6);
        let a = sampling::random_matrix(&mut r, 2);
        let b = sampling::random_matrix(&mut r, 2);
        let t0 = correlations(&cfg, &a, &b, 0).unwrap();
        let t2 = correlations(&cfg, &a, &b, 2).unwrap();
        for (e0, e2) in t0.entries.iter().zip(&t2.entries) {
            assert!((e0.value - e2.value).norm() <= 1e-10);
        }
    }

    #[test]
    fn csv_shape() {
        let cfg = ChainConfig::new(BipartiteMatrix::identity(2), 1, 1).unwrap();
        let sz = traceless_basis(2)[2].clone();
        let csv = correlations(&cfg, &sz, &sz, 0).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,t,re,im,re_norm,im_norm");
        assert_eq!(lines.len(), 1 + 2 * 2);
        assert_eq!(lines[1], "0,0,4e0,0e0,2e0,0e0");
    }
}
